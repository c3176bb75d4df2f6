//! LSTM cells and the bidirectional layer built from two of them.
//!
//! Gate blocks are stored side by side in one `4H`-wide matrix in the
//! order (input, forget, cell, output). A "direction pass" runs the cell
//! over the sequence either forward or reversed in time; the
//! bidirectional layer concatenates both directions' hidden states per
//! source timestep.

use crate::scalar::Scalar;

use super::matrix::{add_column_sums, matmul_acc, matmul_nt_acc, matmul_tn_acc, Mat};

/// One direction's cell parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmDir<T> {
    /// Input projection, `input_size x 4H`.
    pub w_x: Mat<T>,
    /// Recurrent projection, `H x 4H`.
    pub w_h: Mat<T>,
    /// Gate biases, `4H`.
    pub b: Vec<T>,
}

impl<T: Scalar> LstmDir<T> {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        LstmDir {
            w_x: Mat::zeros(input, 4 * hidden),
            w_h: Mat::zeros(hidden, 4 * hidden),
            b: vec![T::zero(); 4 * hidden],
        }
    }

    pub fn hidden(&self) -> usize {
        self.w_h.rows()
    }
}

/// A forward- and a backward-time cell over the same input sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct BiLstmLayer<T> {
    pub fwd: LstmDir<T>,
    pub bwd: LstmDir<T>,
}

impl<T: Scalar> BiLstmLayer<T> {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        BiLstmLayer {
            fwd: LstmDir::zeros(input, hidden),
            bwd: LstmDir::zeros(input, hidden),
        }
    }

    pub fn hidden(&self) -> usize {
        self.fwd.hidden()
    }
}

fn sigmoid<T: Scalar>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

/// Activations one direction pass records for backpropagation, indexed
/// by processing step (0 = the direction's own first step).
#[derive(Clone, Debug)]
pub(crate) struct DirCache<T> {
    /// Post-activation gates per step, `B x 4H`.
    pub gates: Vec<Mat<T>>,
    /// Post-update cell states per step, `B x H`.
    pub cells: Vec<Mat<T>>,
    /// Hidden states per step, `B x H`.
    pub hidden: Vec<Mat<T>>,
}

impl<T: Scalar> DirCache<T> {
    /// Hidden state at the direction's terminal step.
    pub fn terminal_hidden(&self) -> &Mat<T> {
        self.hidden.last().expect("sequence length is at least 1")
    }
}

/// Runs one direction over `inputs` (time-major, each `B x input_size`).
/// When `reversed`, processing step `k` reads source step `T-1-k`.
pub(crate) fn run_dir<T: Scalar>(dir: &LstmDir<T>, inputs: &[Mat<T>], reversed: bool) -> DirCache<T> {
    let steps = inputs.len();
    let batch = inputs[0].rows();
    let hidden = dir.hidden();
    let mut cache = DirCache {
        gates: Vec::with_capacity(steps),
        cells: Vec::with_capacity(steps),
        hidden: Vec::with_capacity(steps),
    };
    let mut h_prev = Mat::zeros(batch, hidden);
    let mut c_prev = Mat::zeros(batch, hidden);
    for step in 0..steps {
        let src = if reversed { steps - 1 - step } else { step };
        let mut gates = Mat::broadcast_rows(batch, &dir.b);
        matmul_acc(&inputs[src], &dir.w_x, &mut gates);
        matmul_acc(&h_prev, &dir.w_h, &mut gates);
        let mut c = Mat::zeros(batch, hidden);
        let mut h = Mat::zeros(batch, hidden);
        for row in 0..batch {
            let g = gates.row_mut(row);
            for k in 0..hidden {
                g[k] = sigmoid(g[k]);
                g[hidden + k] = sigmoid(g[hidden + k]);
                g[2 * hidden + k] = g[2 * hidden + k].tanh();
                g[3 * hidden + k] = sigmoid(g[3 * hidden + k]);
            }
            let cp = c_prev.row(row);
            let c_row = c.row_mut(row);
            let h_row = h.row_mut(row);
            for k in 0..hidden {
                c_row[k] = g[hidden + k] * cp[k] + g[k] * g[2 * hidden + k];
                h_row[k] = g[3 * hidden + k] * c_row[k].tanh();
            }
        }
        cache.gates.push(gates);
        cache.cells.push(c.clone());
        cache.hidden.push(h.clone());
        h_prev = h;
        c_prev = c;
    }
    cache
}

/// Backpropagates one direction. `dh_seq` carries the gradient arriving
/// at each processing step's hidden output; parameter gradients
/// accumulate into `grads` and input gradients into `dx` (source-step
/// indexed).
pub(crate) fn backward_dir<T: Scalar>(
    dir: &LstmDir<T>,
    inputs: &[Mat<T>],
    cache: &DirCache<T>,
    dh_seq: &[Mat<T>],
    reversed: bool,
    grads: &mut LstmDir<T>,
    dx: &mut [Mat<T>],
) {
    let steps = inputs.len();
    let batch = inputs[0].rows();
    let hidden = dir.hidden();
    let zero = Mat::zeros(batch, hidden);
    let mut dh_carry: Mat<T> = Mat::zeros(batch, hidden);
    let mut dc_carry: Mat<T> = Mat::zeros(batch, hidden);
    for step in (0..steps).rev() {
        let src = if reversed { steps - 1 - step } else { step };
        let gates = &cache.gates[step];
        let cells = &cache.cells[step];
        let (h_prev, c_prev) = if step == 0 {
            (&zero, &zero)
        } else {
            (&cache.hidden[step - 1], &cache.cells[step - 1])
        };
        let mut dgates = Mat::zeros(batch, 4 * hidden);
        let mut dc_next = Mat::zeros(batch, hidden);
        for row in 0..batch {
            let g = gates.row(row);
            let c_row = cells.row(row);
            let cp = c_prev.row(row);
            let dh_in = dh_seq[step].row(row);
            let dh_rec = dh_carry.row(row);
            let dc_rec = dc_carry.row(row);
            let dg = dgates.row_mut(row);
            let dcn = dc_next.row_mut(row);
            for k in 0..hidden {
                let one = T::one();
                let (gi, gf, gg, go) = (g[k], g[hidden + k], g[2 * hidden + k], g[3 * hidden + k]);
                let tc = c_row[k].tanh();
                let dh = dh_in[k] + dh_rec[k];
                let dc = dc_rec[k] + dh * go * (one - tc * tc);
                dg[k] = dc * gg * gi * (one - gi);
                dg[hidden + k] = dc * cp[k] * gf * (one - gf);
                dg[2 * hidden + k] = dc * gi * (one - gg * gg);
                dg[3 * hidden + k] = dh * tc * go * (one - go);
                dcn[k] = dc * gf;
            }
        }
        matmul_tn_acc(&inputs[src], &dgates, &mut grads.w_x);
        matmul_tn_acc(h_prev, &dgates, &mut grads.w_h);
        add_column_sums(&dgates, &mut grads.b);
        matmul_nt_acc(&dgates, &dir.w_x, &mut dx[src]);
        let mut dh_next = Mat::zeros(batch, hidden);
        matmul_nt_acc(&dgates, &dir.w_h, &mut dh_next);
        dh_carry = dh_next;
        dc_carry = dc_next;
    }
}

/// Both directions' caches for one bidirectional layer.
#[derive(Clone, Debug)]
pub(crate) struct LayerCache<T> {
    pub fwd: DirCache<T>,
    pub bwd: DirCache<T>,
}

/// Runs both directions and concatenates their hidden states per source
/// timestep: output column blocks are [forward | backward].
pub(crate) fn layer_forward<T: Scalar>(
    layer: &BiLstmLayer<T>,
    inputs: &[Mat<T>],
) -> (Vec<Mat<T>>, LayerCache<T>) {
    let steps = inputs.len();
    let batch = inputs[0].rows();
    let hidden = layer.hidden();
    let fwd = run_dir(&layer.fwd, inputs, false);
    let bwd = run_dir(&layer.bwd, inputs, true);
    let mut outputs = Vec::with_capacity(steps);
    for src in 0..steps {
        let mut out = Mat::zeros(batch, 2 * hidden);
        for row in 0..batch {
            let o = out.row_mut(row);
            o[..hidden].copy_from_slice(fwd.hidden[src].row(row));
            o[hidden..].copy_from_slice(bwd.hidden[steps - 1 - src].row(row));
        }
        outputs.push(out);
    }
    (outputs, LayerCache { fwd, bwd })
}

/// Backpropagates a bidirectional layer given `dout_seq`, the gradient
/// arriving at each source timestep's concatenated output.
pub(crate) fn layer_backward<T: Scalar>(
    layer: &BiLstmLayer<T>,
    inputs: &[Mat<T>],
    cache: &LayerCache<T>,
    dout_seq: &[Mat<T>],
    grads: &mut BiLstmLayer<T>,
    dx: &mut [Mat<T>],
) {
    let steps = inputs.len();
    let batch = inputs[0].rows();
    let hidden = layer.hidden();
    let mut dh_fwd = Vec::with_capacity(steps);
    let mut dh_bwd = vec![Mat::zeros(batch, hidden); steps];
    for src in 0..steps {
        let mut f = Mat::zeros(batch, hidden);
        let b = &mut dh_bwd[steps - 1 - src];
        for row in 0..batch {
            let d = dout_seq[src].row(row);
            f.row_mut(row).copy_from_slice(&d[..hidden]);
            b.row_mut(row).copy_from_slice(&d[hidden..]);
        }
        dh_fwd.push(f);
    }
    backward_dir(&layer.fwd, inputs, &cache.fwd, &dh_fwd, false, &mut grads.fwd, dx);
    backward_dir(&layer.bwd, inputs, &cache.bwd, &dh_bwd, true, &mut grads.bwd, dx);
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Single cell, one feature, two timesteps, weights pinned by hand;
    // expected values frozen from an independent reference evaluation.
    fn tiny_fwd_dir() -> LstmDir<f64> {
        LstmDir {
            w_x: Mat::from_vec(1, 4, vec![0.1, 0.2, 0.3, 0.4]),
            w_h: Mat::from_vec(1, 4, vec![0.05, -0.05, 0.1, -0.1]),
            b: vec![0.01, 1.0, -0.01, 0.02],
        }
    }

    fn tiny_bwd_dir() -> LstmDir<f64> {
        LstmDir {
            w_x: Mat::from_vec(1, 4, vec![-0.2, 0.1, 0.25, -0.15]),
            w_h: Mat::from_vec(1, 4, vec![0.02, 0.03, -0.04, 0.05]),
            b: vec![0.0, 1.0, 0.05, -0.02],
        }
    }

    fn tiny_inputs() -> Vec<Mat<f64>> {
        vec![
            Mat::from_vec(1, 1, vec![0.5]),
            Mat::from_vec(1, 1, vec![-0.3]),
        ]
    }

    #[test]
    fn direction_pass_matches_reference() {
        let fwd = run_dir(&tiny_fwd_dir(), &tiny_inputs(), false);
        assert_relative_eq!(
            fwd.terminal_hidden().at(0, 0),
            0.00191682947967678,
            max_relative = 1e-12
        );
        let bwd = run_dir(&tiny_bwd_dir(), &tiny_inputs(), true);
        assert_relative_eq!(
            bwd.terminal_hidden().at(0, 0),
            0.03463834912798492,
            max_relative = 1e-12
        );
    }

    #[test]
    fn concatenation_order_is_forward_then_backward() {
        let layer = BiLstmLayer {
            fwd: tiny_fwd_dir(),
            bwd: tiny_bwd_dir(),
        };
        let (outputs, _) = layer_forward(&layer, &tiny_inputs());
        // Source step 0: forward's first output, backward's terminal.
        assert_relative_eq!(outputs[0].at(0, 0), 0.03967210663448804, max_relative = 1e-12);
        assert_relative_eq!(outputs[0].at(0, 1), 0.03463834912798492, max_relative = 1e-12);
        // Source step 1: forward's terminal, backward's first output.
        assert_relative_eq!(outputs[1].at(0, 0), 0.00191682947967678, max_relative = 1e-12);
        assert_relative_eq!(outputs[1].at(0, 1), -0.00651619017534096, max_relative = 1e-12);
    }

    #[test]
    fn zero_parameters_produce_zero_outputs() {
        let layer = BiLstmLayer::<f64>::zeros(3, 2);
        let inputs = vec![Mat::from_vec(2, 3, vec![0.5; 6]); 4];
        let (outputs, _) = layer_forward(&layer, &inputs);
        for out in outputs {
            assert!(out.data().iter().all(|&v| v == 0.0));
        }
    }
}
