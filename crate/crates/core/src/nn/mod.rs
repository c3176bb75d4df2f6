//! Recurrent Q-network: stacked bidirectional LSTM layers feeding a
//! two-layer dense head, with exact backpropagation through time.
//!
//! The network maps a flattened observation window (one row per batch
//! element, day-major) to one value per action. Sequence-to-one readout
//! concatenates each direction's hidden state at its own terminal
//! processing step, so the feature vector carries full-window context
//! from both ends.

pub mod adam;
pub mod archive;
pub mod loss;
pub mod matrix;

mod dense;
mod lstm;

pub use adam::Adam;
pub use archive::{load_network, network_from_bytes, network_to_bytes, save_network};
pub use loss::mse_loss;
pub use matrix::Mat;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use dense::{dense_backward, dense_forward, relu_backward_inplace, relu_inplace, Dense};
use lstm::{backward_dir, layer_backward, layer_forward, BiLstmLayer, LayerCache};

/// Architecture hyperparameters. All counts must be nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkSizes {
    /// Features per observed day.
    pub input_features: usize,
    /// Days per observation window.
    pub window: usize,
    /// Hidden units per LSTM direction.
    pub hidden: usize,
    /// Units in the dense hidden layer.
    pub dense: usize,
    /// Output values, one per action.
    pub actions: usize,
    /// Stacked bidirectional LSTM layers.
    pub recurrent_layers: usize,
}

impl Default for NetworkSizes {
    fn default() -> Self {
        NetworkSizes {
            input_features: 7,
            window: 30,
            hidden: 32,
            dense: 64,
            actions: 4,
            recurrent_layers: 3,
        }
    }
}

impl NetworkSizes {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("input_features", self.input_features),
            ("window", self.window),
            ("hidden", self.hidden),
            ("dense", self.dense),
            ("actions", self.actions),
            ("recurrent_layers", self.recurrent_layers),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(Error::ConfigInvalid(format!(
                    "network size {name} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Input width of recurrent layer `index`: raw features for the
    /// first layer, both directions' hidden states afterwards.
    fn layer_input(&self, index: usize) -> usize {
        if index == 0 {
            self.input_features
        } else {
            2 * self.hidden
        }
    }
}

/// A named view of one parameter tensor, row-major.
pub struct TensorView<'a, T> {
    pub name: String,
    pub dims: Vec<usize>,
    pub data: &'a [T],
}

/// Mutable counterpart of [`TensorView`], same canonical order.
pub struct TensorViewMut<'a, T> {
    pub name: String,
    pub dims: Vec<usize>,
    pub data: &'a mut [T],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network<T> {
    sizes: NetworkSizes,
    layers: Vec<BiLstmLayer<T>>,
    dense_hidden: Dense<T>,
    dense_out: Dense<T>,
}

/// Intermediate activations from [`Network::forward_cached`], consumed
/// by [`Network::backward`].
pub struct ForwardCache<T> {
    /// Time-major inputs fed to each recurrent layer.
    layer_inputs: Vec<Vec<Mat<T>>>,
    layer_caches: Vec<LayerCache<T>>,
    /// Concatenated terminal hidden states, `B x 2H`.
    features: Mat<T>,
    dense_hidden_pre: Mat<T>,
    dense_hidden: Mat<T>,
}

impl<T: Scalar> Network<T> {
    /// All-zero parameters in the given shape.
    pub fn zeros(sizes: NetworkSizes) -> Result<Self> {
        sizes.validate()?;
        let layers = (0..sizes.recurrent_layers)
            .map(|i| BiLstmLayer::zeros(sizes.layer_input(i), sizes.hidden))
            .collect();
        Ok(Network {
            sizes,
            layers,
            dense_hidden: Dense::zeros(2 * sizes.hidden, sizes.dense),
            dense_out: Dense::zeros(sizes.dense, sizes.actions),
        })
    }

    /// Seeded initialization: weight matrices are Glorot-uniform with
    /// limit sqrt(6 / (rows + cols)), drawn in a fixed order (per layer
    /// fwd w_x, fwd w_h, bwd w_x, bwd w_h, then the two dense weights).
    /// Biases start at zero except the forget-gate block, which starts
    /// at one to keep early cell memory open.
    pub fn init(sizes: NetworkSizes, seed: u64) -> Result<Self> {
        let mut net = Self::zeros(sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hidden = sizes.hidden;
        for layer in &mut net.layers {
            for dir in [&mut layer.fwd, &mut layer.bwd] {
                glorot_fill(&mut dir.w_x, &mut rng);
                glorot_fill(&mut dir.w_h, &mut rng);
                for k in hidden..2 * hidden {
                    dir.b[k] = T::one();
                }
            }
        }
        glorot_fill(&mut net.dense_hidden.w, &mut rng);
        glorot_fill(&mut net.dense_out.w, &mut rng);
        Ok(net)
    }

    pub fn sizes(&self) -> &NetworkSizes {
        &self.sizes
    }

    pub fn param_count(&self) -> usize {
        self.tensor_slices().iter().map(|s| s.len()).sum()
    }

    /// Parameter tensors with canonical names and shapes, in the order
    /// `lstm{i}.{fwd,bwd}.{w_x,w_h,b}`, `dense_hidden.{w,b}`,
    /// `dense_out.{w,b}`. Every tensor walk below uses this order.
    pub fn tensor_entries(&self) -> Vec<TensorView<'_, T>> {
        let mut out = Vec::with_capacity(6 * self.layers.len() + 4);
        for (i, layer) in self.layers.iter().enumerate() {
            for (tag, dir) in [("fwd", &layer.fwd), ("bwd", &layer.bwd)] {
                out.push(mat_view(format!("lstm{i}.{tag}.w_x"), &dir.w_x));
                out.push(mat_view(format!("lstm{i}.{tag}.w_h"), &dir.w_h));
                out.push(TensorView {
                    name: format!("lstm{i}.{tag}.b"),
                    dims: vec![dir.b.len()],
                    data: &dir.b,
                });
            }
        }
        out.push(mat_view("dense_hidden.w".to_string(), &self.dense_hidden.w));
        out.push(TensorView {
            name: "dense_hidden.b".to_string(),
            dims: vec![self.dense_hidden.b.len()],
            data: &self.dense_hidden.b,
        });
        out.push(mat_view("dense_out.w".to_string(), &self.dense_out.w));
        out.push(TensorView {
            name: "dense_out.b".to_string(),
            dims: vec![self.dense_out.b.len()],
            data: &self.dense_out.b,
        });
        out
    }

    /// Mutable tensors in the same canonical order as [`tensor_entries`].
    ///
    /// [`tensor_entries`]: Network::tensor_entries
    pub fn tensor_entries_mut(&mut self) -> Vec<TensorViewMut<'_, T>> {
        let mut out = Vec::with_capacity(6 * self.layers.len() + 4);
        for (i, layer) in self.layers.iter_mut().enumerate() {
            for (tag, dir) in [("fwd", &mut layer.fwd), ("bwd", &mut layer.bwd)] {
                let lstm::LstmDir { w_x, w_h, b } = dir;
                out.push(mat_view_mut(format!("lstm{i}.{tag}.w_x"), w_x));
                out.push(mat_view_mut(format!("lstm{i}.{tag}.w_h"), w_h));
                let dims = vec![b.len()];
                out.push(TensorViewMut {
                    name: format!("lstm{i}.{tag}.b"),
                    dims,
                    data: b,
                });
            }
        }
        let Dense { w, b } = &mut self.dense_hidden;
        out.push(mat_view_mut("dense_hidden.w".to_string(), w));
        out.push(TensorViewMut {
            name: "dense_hidden.b".to_string(),
            dims: vec![b.len()],
            data: b,
        });
        let Dense { w, b } = &mut self.dense_out;
        out.push(mat_view_mut("dense_out.w".to_string(), w));
        out.push(TensorViewMut {
            name: "dense_out.b".to_string(),
            dims: vec![b.len()],
            data: b,
        });
        out
    }

    pub fn tensor_slices(&self) -> Vec<&[T]> {
        self.tensor_entries().into_iter().map(|e| e.data).collect()
    }

    pub fn tensor_slices_mut(&mut self) -> Vec<&mut [T]> {
        self.tensor_entries_mut()
            .into_iter()
            .map(|e| e.data)
            .collect()
    }

    fn split_time_major(&self, input: &Mat<T>) -> Result<Vec<Mat<T>>> {
        let features = self.sizes.input_features;
        let window = self.sizes.window;
        if input.cols() != window * features {
            return Err(Error::ShapeMismatch {
                op: "network forward",
                expected: format!("{} input columns", window * features),
                got: format!("{} input columns", input.cols()),
            });
        }
        let mut steps = Vec::with_capacity(window);
        for t in 0..window {
            let mut m = Mat::zeros(input.rows(), features);
            for row in 0..input.rows() {
                m.row_mut(row)
                    .copy_from_slice(&input.row(row)[t * features..(t + 1) * features]);
            }
            steps.push(m);
        }
        Ok(steps)
    }

    /// Maps a batch of flattened windows (`B x window*features`) to
    /// action values (`B x actions`).
    pub fn forward(&self, input: &Mat<T>) -> Result<Mat<T>> {
        Ok(self.forward_cached(input)?.0)
    }

    /// [`forward`] that also returns the activations needed by
    /// [`backward`].
    ///
    /// [`forward`]: Network::forward
    /// [`backward`]: Network::backward
    pub fn forward_cached(&self, input: &Mat<T>) -> Result<(Mat<T>, ForwardCache<T>)> {
        let batch = input.rows();
        let hidden = self.sizes.hidden;
        let mut current = self.split_time_major(input)?;
        let mut layer_inputs = Vec::with_capacity(self.layers.len());
        let mut layer_caches = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let (out, cache) = layer_forward(layer, &current);
            layer_inputs.push(std::mem::replace(&mut current, out));
            layer_caches.push(cache);
        }
        let top = layer_caches.last().expect("at least one recurrent layer");
        let mut features = Mat::zeros(batch, 2 * hidden);
        for row in 0..batch {
            let f = features.row_mut(row);
            f[..hidden].copy_from_slice(top.fwd.terminal_hidden().row(row));
            f[hidden..].copy_from_slice(top.bwd.terminal_hidden().row(row));
        }
        let dense_hidden_pre = dense_forward(&self.dense_hidden, &features);
        let mut hidden_act = dense_hidden_pre.clone();
        relu_inplace(&mut hidden_act);
        let output = dense_forward(&self.dense_out, &hidden_act);
        let cache = ForwardCache {
            layer_inputs,
            layer_caches,
            features,
            dense_hidden_pre,
            dense_hidden: hidden_act,
        };
        Ok((output, cache))
    }

    /// Backpropagates `dout` (gradient of a scalar loss with respect to
    /// the outputs, `B x actions`) through the cached pass and returns
    /// parameter gradients in a network-shaped container.
    pub fn backward(&self, cache: &ForwardCache<T>, dout: &Mat<T>) -> Result<Network<T>> {
        let batch = cache.features.rows();
        if dout.rows() != batch || dout.cols() != self.sizes.actions {
            return Err(Error::ShapeMismatch {
                op: "network backward",
                expected: format!("{} x {} output gradient", batch, self.sizes.actions),
                got: format!("{} x {} output gradient", dout.rows(), dout.cols()),
            });
        }
        let mut grads = Network::zeros(self.sizes)?;
        let mut d_hidden = dense_backward(&self.dense_out, &cache.dense_hidden, dout, &mut grads.dense_out);
        relu_backward_inplace(&cache.dense_hidden_pre, &mut d_hidden);
        let d_features = dense_backward(
            &self.dense_hidden,
            &cache.features,
            &d_hidden,
            &mut grads.dense_hidden,
        );

        let steps = self.sizes.window;
        let hidden = self.sizes.hidden;
        let top = self.layers.len() - 1;
        // The readout taps each direction at its own terminal processing
        // step, so the feature gradient enters there and nowhere else.
        let mut dh_fwd = vec![Mat::zeros(batch, hidden); steps];
        let mut dh_bwd = vec![Mat::zeros(batch, hidden); steps];
        for row in 0..batch {
            let df = d_features.row(row);
            dh_fwd[steps - 1].row_mut(row).copy_from_slice(&df[..hidden]);
            dh_bwd[steps - 1].row_mut(row).copy_from_slice(&df[hidden..]);
        }
        let mut dout_seq = vec![Mat::zeros(batch, self.sizes.layer_input(top)); steps];
        backward_dir(
            &self.layers[top].fwd,
            &cache.layer_inputs[top],
            &cache.layer_caches[top].fwd,
            &dh_fwd,
            false,
            &mut grads.layers[top].fwd,
            &mut dout_seq,
        );
        backward_dir(
            &self.layers[top].bwd,
            &cache.layer_inputs[top],
            &cache.layer_caches[top].bwd,
            &dh_bwd,
            true,
            &mut grads.layers[top].bwd,
            &mut dout_seq,
        );
        for l in (0..top).rev() {
            let mut dx = vec![Mat::zeros(batch, self.sizes.layer_input(l)); steps];
            layer_backward(
                &self.layers[l],
                &cache.layer_inputs[l],
                &cache.layer_caches[l],
                &dout_seq,
                &mut grads.layers[l],
                &mut dx,
            );
            dout_seq = dx;
        }
        Ok(grads)
    }
}

fn mat_view<T: Scalar>(name: String, m: &Mat<T>) -> TensorView<'_, T> {
    TensorView {
        name,
        dims: vec![m.rows(), m.cols()],
        data: m.data(),
    }
}

fn mat_view_mut<T: Scalar>(name: String, m: &mut Mat<T>) -> TensorViewMut<'_, T> {
    TensorViewMut {
        name,
        dims: vec![m.rows(), m.cols()],
        data: m.data_mut(),
    }
}

fn glorot_fill<T: Scalar, R: Rng>(m: &mut Mat<T>, rng: &mut R) {
    let limit = (6.0 / (m.rows() + m.cols()) as f64).sqrt();
    for v in m.data_mut() {
        let u: f64 = rng.gen();
        *v = T::from_f((2.0 * u - 1.0) * limit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_sizes(layers: usize) -> NetworkSizes {
        NetworkSizes {
            input_features: 1,
            window: 2,
            hidden: 1,
            dense: 2,
            actions: 1,
            recurrent_layers: layers,
        }
    }

    fn set_dir(dir: &mut lstm::LstmDir<f64>, w_x: Vec<f64>, w_h: Vec<f64>, b: Vec<f64>) {
        let rows = dir.w_x.rows();
        dir.w_x = Mat::from_vec(rows, 4, w_x);
        dir.w_h = Mat::from_vec(1, 4, w_h);
        dir.b = b;
    }

    // Hand-pinned single-layer network; output frozen from an
    // independent reference evaluation.
    fn tiny_network() -> Network<f64> {
        let mut net = Network::zeros(tiny_sizes(1)).unwrap();
        set_dir(
            &mut net.layers[0].fwd,
            vec![0.1, 0.2, 0.3, 0.4],
            vec![0.05, -0.05, 0.1, -0.1],
            vec![0.01, 1.0, -0.01, 0.02],
        );
        set_dir(
            &mut net.layers[0].bwd,
            vec![-0.2, 0.1, 0.25, -0.15],
            vec![0.02, 0.03, -0.04, 0.05],
            vec![0.0, 1.0, 0.05, -0.02],
        );
        net.dense_hidden.w = Mat::from_vec(2, 2, vec![0.3, -0.2, 0.1, 0.4]);
        net.dense_hidden.b = vec![0.05, -0.05];
        net.dense_out.w = Mat::from_vec(2, 1, vec![0.7, -0.6]);
        net.dense_out.b = vec![0.1];
        net
    }

    #[test]
    fn parameter_counts_match_architecture() {
        let small = Network::<f64>::zeros(NetworkSizes {
            hidden: 8,
            ..NetworkSizes::default()
        })
        .unwrap();
        assert_eq!(small.param_count(), 5572);
        let default = Network::<f64>::zeros(NetworkSizes::default()).unwrap();
        assert_eq!(default.param_count(), 64324);
    }

    #[test]
    fn initialization_is_seeded_and_bounded() {
        let sizes = NetworkSizes::default();
        let a = Network::<f64>::init(sizes, 42).unwrap();
        let b = Network::<f64>::init(sizes, 42).unwrap();
        let c = Network::<f64>::init(sizes, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        // Forget-gate bias block starts open, everything else at zero.
        let hidden = sizes.hidden;
        for layer in &a.layers {
            for dir in [&layer.fwd, &layer.bwd] {
                for (k, &v) in dir.b.iter().enumerate() {
                    let expected = if (hidden..2 * hidden).contains(&k) { 1.0 } else { 0.0 };
                    assert_eq!(v, expected);
                }
            }
        }
        assert!(a.dense_hidden.b.iter().all(|&v| v == 0.0));
        // Weight draws stay inside the Glorot limit for their tensor.
        let limit0 = (6.0f64 / (7.0 + 4.0 * 32.0)).sqrt();
        assert!(a.layers[0].fwd.w_x.data().iter().all(|&v| v.abs() < limit0));
        assert!(a.layers[0].fwd.w_x.data().iter().any(|&v| v != 0.0));
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net = Network::<f64>::zeros(NetworkSizes {
            input_features: 3,
            window: 4,
            hidden: 2,
            dense: 3,
            actions: 2,
            recurrent_layers: 2,
        })
        .unwrap();
        let x = Mat::from_vec(2, 12, vec![0.25; 24]);
        let out = net.forward(&x).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_layer_forward_matches_reference() {
        let net = tiny_network();
        let x = Mat::from_vec(1, 2, vec![0.5, -0.3]);
        let out = net.forward(&x).unwrap();
        assert_relative_eq!(out.at(0, 0), 0.13782721862969108, max_relative = 1e-12);
    }

    #[test]
    fn stacked_forward_matches_reference() {
        let mut net = Network::zeros(tiny_sizes(2)).unwrap();
        net.layers[0] = tiny_network().layers.remove(0);
        set_dir(
            &mut net.layers[1].fwd,
            vec![0.1, 0.2, 0.3, 0.4, -0.1, 0.05, 0.2, -0.3],
            vec![0.05, -0.05, 0.1, -0.1],
            vec![0.01, 1.0, -0.01, 0.02],
        );
        set_dir(
            &mut net.layers[1].bwd,
            vec![-0.2, 0.1, 0.25, -0.15, 0.15, -0.05, 0.1, 0.2],
            vec![0.02, 0.03, -0.04, 0.05],
            vec![0.0, 1.0, 0.05, -0.02],
        );
        net.dense_hidden.w = Mat::from_vec(2, 2, vec![0.3, -0.2, 0.1, 0.4]);
        net.dense_hidden.b = vec![0.05, -0.05];
        net.dense_out.w = Mat::from_vec(2, 1, vec![0.7, -0.6]);
        net.dense_out.b = vec![0.1];
        let x = Mat::from_vec(1, 2, vec![0.5, -0.3]);
        let out = net.forward(&x).unwrap();
        assert_relative_eq!(out.at(0, 0), 0.13650113905832828, max_relative = 1e-12);
    }

    #[test]
    fn batch_rows_are_independent() {
        let sizes = NetworkSizes {
            input_features: 2,
            window: 3,
            hidden: 2,
            dense: 3,
            actions: 2,
            recurrent_layers: 2,
        };
        let net = Network::<f64>::init(sizes, 5).unwrap();
        let rows: Vec<Vec<f64>> = vec![
            vec![0.1, -0.2, 0.3, 0.4, -0.5, 0.6],
            vec![0.0; 6],
            vec![-0.9, 0.8, -0.7, 0.6, -0.5, 0.4],
        ];
        let mut flat = Vec::new();
        for r in &rows {
            flat.extend_from_slice(r);
        }
        let batched = net.forward(&Mat::from_vec(3, 6, flat)).unwrap();
        for (i, r) in rows.iter().enumerate() {
            let single = net.forward(&Mat::from_vec(1, 6, r.clone())).unwrap();
            for j in 0..2 {
                assert_relative_eq!(batched.at(i, j), single.at(0, j), max_relative = 1e-14);
            }
        }
    }

    // Swapping each layer's direction parameters (and the column blocks
    // they feed downstream) must make the network compute the same
    // function on time-reversed input. This pins the processing-step to
    // source-step index mapping across stacked layers.
    #[test]
    fn direction_swap_mirrors_time_reversal() {
        let sizes = NetworkSizes {
            input_features: 2,
            window: 4,
            hidden: 3,
            dense: 4,
            actions: 2,
            recurrent_layers: 3,
        };
        let net = Network::<f64>::init(sizes, 9).unwrap();
        let hidden = sizes.hidden;
        let mut mirror = net.clone();
        for (l, layer) in mirror.layers.iter_mut().enumerate() {
            std::mem::swap(&mut layer.fwd, &mut layer.bwd);
            if l > 0 {
                swap_row_blocks(&mut layer.fwd.w_x, hidden);
                swap_row_blocks(&mut layer.bwd.w_x, hidden);
            }
        }
        swap_row_blocks(&mut mirror.dense_hidden.w, hidden);

        let width = sizes.input_features * sizes.window;
        let x: Vec<f64> = (0..width).map(|k| (k as f64 * 0.37).sin() * 0.5).collect();
        let mut x_rev = vec![0.0; width];
        for t in 0..sizes.window {
            let s = sizes.window - 1 - t;
            x_rev[t * 2..t * 2 + 2].copy_from_slice(&x[s * 2..s * 2 + 2]);
        }
        let a = net.forward(&Mat::from_vec(1, width, x)).unwrap();
        let b = mirror.forward(&Mat::from_vec(1, width, x_rev)).unwrap();
        for j in 0..sizes.actions {
            assert_relative_eq!(a.at(0, j), b.at(0, j), max_relative = 1e-12);
        }
    }

    fn swap_row_blocks(m: &mut Mat<f64>, h: usize) {
        for r in 0..h {
            for c in 0..m.cols() {
                let top = m.at(r, c);
                let bottom = m.at(h + r, c);
                m.row_mut(r)[c] = bottom;
                m.row_mut(h + r)[c] = top;
            }
        }
    }

    #[test]
    fn analytic_gradients_match_central_differences() {
        let sizes = NetworkSizes {
            input_features: 2,
            window: 3,
            hidden: 2,
            dense: 3,
            actions: 2,
            recurrent_layers: 2,
        };
        let net = Network::<f64>::init(sizes, 7).unwrap();
        let x = Mat::from_vec(
            2,
            6,
            vec![0.5, -0.3, 0.8, 0.1, -0.6, 0.4, -0.2, 0.9, 0.05, -0.7, 0.3, -0.45],
        );
        let dout = Mat::from_vec(2, 2, vec![0.7, -0.3, 0.2, 1.1]);
        let objective = |n: &Network<f64>| -> f64 {
            let out = n.forward(&x).unwrap();
            out.data().iter().zip(dout.data()).map(|(&o, &d)| o * d).sum()
        };

        let (_, cache) = net.forward_cached(&x).unwrap();
        let grads = net.backward(&cache, &dout).unwrap();
        let analytic: Vec<f64> = grads
            .tensor_slices()
            .into_iter()
            .flat_map(|s| s.to_vec())
            .collect();

        let count = net.param_count();
        assert_eq!(analytic.len(), count);
        let h = 1e-5;
        let mut worst = 0.0f64;
        for (flat, &grad) in analytic.iter().enumerate() {
            let mut plus = net.clone();
            bump(&mut plus, flat, h);
            let mut minus = net.clone();
            bump(&mut minus, flat, -h);
            let numeric = (objective(&plus) - objective(&minus)) / (2.0 * h);
            let rel = (grad - numeric).abs() / (grad.abs() + numeric.abs()).max(1e-8);
            worst = worst.max(rel);
        }
        assert!(worst < 1e-6, "worst relative gradient error {worst}");
    }

    fn bump(net: &mut Network<f64>, flat: usize, delta: f64) {
        let mut offset = 0;
        for slice in net.tensor_slices_mut() {
            if flat < offset + slice.len() {
                slice[flat - offset] += delta;
                return;
            }
            offset += slice.len();
        }
        panic!("flat index {flat} out of range");
    }

    #[test]
    fn tensor_enumeration_is_canonical() {
        let net = Network::<f64>::zeros(NetworkSizes {
            input_features: 3,
            window: 5,
            hidden: 2,
            dense: 4,
            actions: 4,
            recurrent_layers: 2,
        })
        .unwrap();
        let entries = net.tensor_entries();
        assert_eq!(entries.len(), 16);
        assert_eq!(entries[0].name, "lstm0.fwd.w_x");
        assert_eq!(entries[0].dims, vec![3, 8]);
        assert_eq!(entries[3].name, "lstm0.bwd.w_x");
        assert_eq!(entries[6].name, "lstm1.fwd.w_x");
        assert_eq!(entries[6].dims, vec![4, 8]);
        assert_eq!(entries[12].name, "dense_hidden.w");
        assert_eq!(entries[12].dims, vec![4, 4]);
        assert_eq!(entries[15].name, "dense_out.b");
        assert_eq!(entries[15].dims, vec![4]);
        let total: usize = entries.iter().map(|e| e.data.len()).sum();
        assert_eq!(total, net.param_count());
    }

    #[test]
    fn forward_rejects_wrong_input_width() {
        let net = Network::<f64>::zeros(tiny_sizes(1)).unwrap();
        let err = net.forward(&Mat::zeros(1, 3)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn invalid_sizes_are_rejected() {
        let sizes = NetworkSizes {
            hidden: 0,
            ..NetworkSizes::default()
        };
        assert!(Network::<f64>::zeros(sizes).is_err());
    }
}
