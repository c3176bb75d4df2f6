//! Adam optimizer over a flat list of parameter tensors.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-parameter first/second moment state. The optimizer is created for
/// a fixed total parameter count and walks the tensor list in order, so
/// the same network layout must be passed to every step.
#[derive(Clone, Debug)]
pub struct Adam<T> {
    learning_rate: T,
    beta1: T,
    beta2: T,
    epsilon: T,
    step: u64,
    m: Vec<T>,
    v: Vec<T>,
}

impl<T: Scalar> Adam<T> {
    pub fn new(param_count: usize, learning_rate: T) -> Self {
        Adam {
            learning_rate,
            beta1: T::from_f(0.9),
            beta2: T::from_f(0.999),
            epsilon: T::from_f(1e-8),
            step: 0,
            m: vec![T::zero(); param_count],
            v: vec![T::zero(); param_count],
        }
    }

    pub fn learning_rate(&self) -> T {
        self.learning_rate
    }

    /// Applies one bias-corrected update. `params` and `grads` are
    /// parallel tensor lists whose total length must equal the count the
    /// optimizer was built for.
    pub fn step(&mut self, params: &mut [&mut [T]], grads: &[&[T]]) -> Result<()> {
        let total: usize = params.iter().map(|p| p.len()).sum();
        let grad_total: usize = grads.iter().map(|g| g.len()).sum();
        if total != self.m.len() || grad_total != self.m.len() || params.len() != grads.len() {
            return Err(Error::SizeMismatch(format!(
                "optimizer tracks {} parameters, got {} parameters and {} gradients",
                self.m.len(),
                total,
                grad_total
            )));
        }
        self.step += 1;
        let t = self.step as i32;
        let one = T::one();
        let correction1 = one - self.beta1.powi(t);
        let correction2 = one - self.beta2.powi(t);
        let mut offset = 0;
        for (param, grad) in params.iter_mut().zip(grads) {
            if param.len() != grad.len() {
                return Err(Error::SizeMismatch(format!(
                    "parameter tensor of {} entries paired with gradient of {}",
                    param.len(),
                    grad.len()
                )));
            }
            for (k, (p, &g)) in param.iter_mut().zip(grad.iter()).enumerate() {
                let i = offset + k;
                self.m[i] = self.beta1 * self.m[i] + (one - self.beta1) * g;
                self.v[i] = self.beta2 * self.v[i] + (one - self.beta2) * g * g;
                let m_hat = self.m[i] / correction1;
                let v_hat = self.v[i] / correction2;
                *p -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
            }
            offset += param.len();
        }
        Ok(())
    }
}
