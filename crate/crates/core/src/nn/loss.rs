//! Mean squared error and its gradient.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Returns `(loss, gradient)` where loss is the mean of squared
/// differences and the gradient is with respect to each prediction:
/// `2 (pred - target) / len`.
pub fn mse_loss<T: Scalar>(predictions: &[T], targets: &[T]) -> Result<(T, Vec<T>)> {
    if predictions.len() != targets.len() {
        return Err(Error::ShapeMismatch {
            op: "mse_loss",
            expected: format!("{} targets", predictions.len()),
            got: format!("{} targets", targets.len()),
        });
    }
    if predictions.is_empty() {
        return Err(Error::ShapeMismatch {
            op: "mse_loss",
            expected: "non-empty inputs".to_string(),
            got: "empty inputs".to_string(),
        });
    }
    let len = T::from_f(predictions.len() as f64);
    let two = T::from_f(2.0);
    let mut loss = T::zero();
    let mut grad = Vec::with_capacity(predictions.len());
    for (&p, &t) in predictions.iter().zip(targets) {
        let diff = p - t;
        loss += diff * diff;
        grad.push(two * diff / len);
    }
    Ok((loss / len, grad))
}
