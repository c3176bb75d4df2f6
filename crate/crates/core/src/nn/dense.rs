//! Fully connected layers used as the readout head.

use crate::scalar::Scalar;

use super::matrix::{add_column_sums, matmul_acc, matmul_nt_acc, matmul_tn_acc, Mat};

#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    /// Weights, `input x output`.
    pub w: Mat<T>,
    /// Biases, `output`.
    pub b: Vec<T>,
}

impl<T: Scalar> Dense<T> {
    pub fn zeros(input: usize, output: usize) -> Self {
        Dense {
            w: Mat::zeros(input, output),
            b: vec![T::zero(); output],
        }
    }
}

/// `x . w + b` for a batch of rows.
pub(crate) fn dense_forward<T: Scalar>(layer: &Dense<T>, x: &Mat<T>) -> Mat<T> {
    let mut out = Mat::broadcast_rows(x.rows(), &layer.b);
    matmul_acc(x, &layer.w, &mut out);
    out
}

/// Accumulates parameter gradients from `dout` and returns the gradient
/// with respect to the layer input.
pub(crate) fn dense_backward<T: Scalar>(
    layer: &Dense<T>,
    x: &Mat<T>,
    dout: &Mat<T>,
    grads: &mut Dense<T>,
) -> Mat<T> {
    matmul_tn_acc(x, dout, &mut grads.w);
    add_column_sums(dout, &mut grads.b);
    let mut dx = Mat::zeros(x.rows(), x.cols());
    matmul_nt_acc(dout, &layer.w, &mut dx);
    dx
}

/// In-place rectifier.
pub(crate) fn relu_inplace<T: Scalar>(x: &mut Mat<T>) {
    for v in x.data_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
}

/// Zeroes gradient entries where the cached pre-activation was not positive.
pub(crate) fn relu_backward_inplace<T: Scalar>(pre: &Mat<T>, dout: &mut Mat<T>) {
    for (d, &p) in dout.data_mut().iter_mut().zip(pre.data()) {
        if p <= T::zero() {
            *d = T::zero();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_applies_weights_and_bias() {
        let layer = Dense {
            w: Mat::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]),
            b: vec![0.5, -0.5],
        };
        let x = Mat::from_vec(1, 2, vec![1.0, 1.0]);
        let out = dense_forward(&layer, &x);
        assert_eq!(out.row(0), &[4.5, 5.5]);
    }

    #[test]
    fn backward_accumulates_and_propagates() {
        let layer = Dense {
            w: Mat::from_vec(2, 1, vec![2.0, -3.0]),
            b: vec![0.0],
        };
        let x = Mat::from_vec(1, 2, vec![0.5, 1.5]);
        let dout = Mat::from_vec(1, 1, vec![2.0]);
        let mut grads = Dense::zeros(2, 1);
        let dx = dense_backward(&layer, &x, &dout, &mut grads);
        assert_eq!(grads.w.data(), &[1.0, 3.0]);
        assert_eq!(grads.b, vec![2.0]);
        assert_eq!(dx.row(0), &[4.0, -6.0]);
    }

    #[test]
    fn relu_mask_uses_pre_activation() {
        let pre = Mat::from_vec(1, 3, vec![-1.0, 0.0, 2.0]);
        let mut dout = Mat::from_vec(1, 3, vec![5.0, 5.0, 5.0]);
        relu_backward_inplace(&pre, &mut dout);
        assert_eq!(dout.data(), &[0.0, 0.0, 5.0]);
    }
}
