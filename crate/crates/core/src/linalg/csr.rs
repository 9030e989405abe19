use std::fmt::Write as _;

use crate::error::LinalgError;

use super::{CooMatrix, DenseMatrix, MatrixOperator};

/// Compressed sparse row matrix.
///
/// Row `i` occupies `row_ptr[i]..row_ptr[i + 1]` of `col_idx` and `values`;
/// column indices are strictly increasing within a row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Validates every structural invariant before accepting the arrays.
    pub fn from_raw_parts(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, LinalgError> {
        let m = CsrMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a matrix from per-row `(col, value)` lists sorted by column.
    pub fn from_sorted_rows(cols: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self, LinalgError> {
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for &(c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_raw_parts(rows.len(), cols, row_ptr, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Checks the CSR structural invariants.
    pub fn validate(&self) -> Result<(), LinalgError> {
        let bad = |msg: String| Err(LinalgError::Malformed(msg));
        if self.row_ptr.len() != self.rows + 1 {
            return bad(format!(
                "row_ptr has length {} for {} rows",
                self.row_ptr.len(),
                self.rows
            ));
        }
        if self.row_ptr[0] != 0 {
            return bad("row_ptr[0] must be 0".into());
        }
        if self.col_idx.len() != self.values.len() {
            return bad("col_idx and values differ in length".into());
        }
        if self.row_ptr[self.rows] != self.col_idx.len() {
            return bad(format!(
                "row_ptr ends at {} but nnz is {}",
                self.row_ptr[self.rows],
                self.col_idx.len()
            ));
        }
        for i in 0..self.rows {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            if start > end {
                return bad(format!("row_ptr decreases at row {i}"));
            }
            let cols = &self.col_idx[start..end];
            if let Some(&c) = cols.iter().find(|c| **c >= self.cols) {
                return Err(LinalgError::IndexOutOfRange {
                    row: i,
                    col: c,
                    rows: self.rows,
                    cols: self.cols,
                });
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("columns of row {i} are not strictly increasing"));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (cols, vals) = self.row(row);
        cols.binary_search(&col).map_or(0.0, |k| vals[k])
    }

    /// Expands the row pointers back into one row index per entry.
    pub fn to_coo(&self) -> CooMatrix {
        let mut row_idx = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            row_idx.extend(std::iter::repeat(i).take(self.row_ptr[i + 1] - self.row_ptr[i]));
        }
        CooMatrix::new(
            self.rows,
            self.cols,
            row_idx,
            self.col_idx.clone(),
            self.values.clone(),
        )
        .expect("valid CSR expands to valid COO")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                d.set(i, *c, *v);
            }
        }
        d
    }

    /// Sparse matrix times a single-column dense matrix.
    pub fn spmv(&self, v: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if v.cols() != 1 || v.rows() != self.cols {
            return Err(self.mismatch(v));
        }
        let mut out = vec![0.0; self.rows];
        self.mul_vec_into(v.as_slice(), &mut out);
        Ok(DenseMatrix::column_vector(&out))
    }

    /// Sparse matrix times a dense matrix, column by column.
    pub fn spmm(&self, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if b.rows() != self.cols {
            return Err(self.mismatch(b));
        }
        let mut out = DenseMatrix::zeros(self.rows, b.cols());
        self.mul_mat_into(b.as_slice(), b.cols(), out.as_mut_slice());
        Ok(out)
    }

    fn mismatch(&self, b: &DenseMatrix) -> LinalgError {
        LinalgError::DimensionMismatch {
            left: format!("{}x{}", self.rows, self.cols),
            right: format!("{}x{}", b.rows(), b.cols()),
        }
    }

    /// Matrix Market coordinate text (1-based indices).
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::with_capacity(32 + self.nnz() * 16);
        s.push_str("%%MatrixMarket matrix coordinate real general\n");
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.nnz());
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                let _ = writeln!(s, "{} {} {}", i + 1, c + 1, v);
            }
        }
        s
    }
}

impl MatrixOperator for CsrMatrix {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut sum = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                sum += self.values[p] * x[self.col_idx[p]];
            }
            *yi = sum;
        }
    }

    fn mul_mat_into(&self, b: &[f64], k: usize, out: &mut [f64]) {
        debug_assert_eq!(b.len(), self.cols * k);
        debug_assert_eq!(out.len(), self.rows * k);
        out.fill(0.0);
        for i in 0..self.rows {
            let acc = &mut out[i * k..(i + 1) * k];
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let a = self.values[p];
                let c = self.col_idx[p];
                for (o, bv) in acc.iter_mut().zip(&b[c * k..(c + 1) * k]) {
                    *o += a * bv;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example3_coo() -> CooMatrix {
        CooMatrix::new(
            7,
            7,
            vec![0, 0, 1, 2, 3, 4, 5, 5, 6, 6],
            vec![5, 6, 4, 3, 3, 4, 1, 2, 3, 4],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.5, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn example_coo_compresses_to_example_csr() {
        let csr = example3_coo().to_csr().unwrap();
        assert_eq!(csr.row_ptr(), &[0, 2, 3, 4, 5, 6, 8, 10]);
        assert_eq!(csr.col_idx(), &[5, 6, 4, 3, 3, 4, 1, 2, 3, 4]);
        assert_eq!(csr.values(), &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.5, 0.5]);
        assert_eq!(csr.to_coo(), example3_coo());
    }

    #[test]
    fn spmv_example_product() {
        let csr = example3_coo().to_csr().unwrap();
        let v0 = DenseMatrix::column_vector(&[0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let u = csr.spmv(&v0).unwrap();
        // dense oracle
        let dense = csr.to_dense().matvec(&v0).unwrap();
        assert_eq!(u, dense);
        assert_eq!(u.as_slice(), &[0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn spmv_identity_and_zero() {
        let v = DenseMatrix::column_vector(&[0.25, -3.0, 7.0]);
        assert_eq!(CsrMatrix::identity(3).spmv(&v).unwrap(), v);
        let zero = CooMatrix::empty(3, 3).to_csr().unwrap();
        assert_eq!(zero.spmv(&v).unwrap().as_slice(), &[0.0, 0.0, 0.0]);
        assert!(zero.spmv(&DenseMatrix::column_vector(&[1.0])).is_err());
    }

    #[test]
    fn spmm_columns_and_identity() {
        let csr = example3_coo().to_csr().unwrap();
        let v0 = [0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
        let b = DenseMatrix::from_columns(7, &[v0.to_vec(), v0.to_vec()]);
        let prod = csr.spmm(&b).unwrap();
        let single = csr.spmv(&DenseMatrix::column_vector(&v0)).unwrap();
        assert_eq!(prod.column(0), single.as_slice());
        assert_eq!(prod.column(1), single.as_slice());
        assert_eq!(csr.spmm(&DenseMatrix::identity(7)).unwrap(), csr.to_dense());
        assert!(csr.spmm(&DenseMatrix::zeros(6, 2)).is_err());
    }

    #[test]
    fn validation_catches_broken_arrays() {
        assert!(CsrMatrix::from_raw_parts(2, 2, vec![1, 1, 1], vec![0], vec![1.0]).is_err());
        assert!(CsrMatrix::from_raw_parts(2, 2, vec![0, 2, 1], vec![0, 1], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::from_raw_parts(1, 2, vec![0, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::from_raw_parts(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(CsrMatrix::from_raw_parts(1, 2, vec![0, 1], vec![1], vec![1.0]).is_ok());
    }

    #[test]
    fn matrix_market_dump() {
        let m = CsrMatrix::identity(2).to_matrix_market();
        assert_eq!(
            m,
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n2 2 1\n"
        );
    }
}
