//! Minimal row-major matrix with the three accumulate-multiply kernels
//! the recurrent stack needs. Loop orders keep the innermost walk
//! contiguous so the compiler can vectorize them.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Matrix whose every row is a copy of `values` (bias broadcast).
    pub fn broadcast_rows(rows: usize, values: &[T]) -> Self {
        let mut data = Vec::with_capacity(rows * values.len());
        for _ in 0..rows {
            data.extend_from_slice(values);
        }
        Mat {
            rows,
            cols: values.len(),
            data,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match shape");
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn at(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn fill(&mut self, value: T) {
        self.data.fill(value);
    }
}

/// `c += a * b` for a: (m,k), b: (k,n), c: (m,n).
pub fn matmul_acc<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &mut Mat<T>) {
    debug_assert_eq!(a.cols, b.rows);
    debug_assert_eq!((c.rows, c.cols), (a.rows, b.cols));
    for i in 0..a.rows {
        let a_row = a.row(i);
        let c_row = c.row_mut(i);
        for (l, &a_il) in a_row.iter().enumerate() {
            let b_row = b.row(l);
            for (c_val, &b_val) in c_row.iter_mut().zip(b_row) {
                *c_val += a_il * b_val;
            }
        }
    }
}

/// `c += a * b^T` for a: (m,k), b: (n,k), c: (m,n).
pub fn matmul_nt_acc<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &mut Mat<T>) {
    debug_assert_eq!(a.cols, b.cols);
    debug_assert_eq!((c.rows, c.cols), (a.rows, b.rows));
    for i in 0..a.rows {
        let a_row = a.row(i);
        let c_row = c.row_mut(i);
        for (j, c_val) in c_row.iter_mut().enumerate() {
            let b_row = b.row(j);
            let mut acc = T::zero();
            for (&x, &y) in a_row.iter().zip(b_row) {
                acc += x * y;
            }
            *c_val += acc;
        }
    }
}

/// `c += a^T * b` for a: (k,m), b: (k,n), c: (m,n).
pub fn matmul_tn_acc<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &mut Mat<T>) {
    debug_assert_eq!(a.rows, b.rows);
    debug_assert_eq!((c.rows, c.cols), (a.cols, b.cols));
    for l in 0..a.rows {
        let a_row = a.row(l);
        let b_row = b.row(l);
        for (i, &a_li) in a_row.iter().enumerate() {
            let c_row = c.row_mut(i);
            for (c_val, &b_val) in c_row.iter_mut().zip(b_row) {
                *c_val += a_li * b_val;
            }
        }
    }
}

/// `out[j] += sum_i a[i][j]` (per-column totals, for bias gradients).
pub fn add_column_sums<T: Scalar>(a: &Mat<T>, out: &mut [T]) {
    debug_assert_eq!(a.cols, out.len());
    for i in 0..a.rows {
        for (acc, &v) in out.iter_mut().zip(a.row(i)) {
            *acc += v;
        }
    }
}
