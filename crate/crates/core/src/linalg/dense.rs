use crate::error::LinalgError;

use super::MatrixOperator;

/// Row-major dense matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{rows}x{cols}"),
                right: format!("{} values", data.len()),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Self {
        DenseMatrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    /// Builds an `rows x columns.len()` matrix from column slices.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols + j] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Count of entries different from zero.
    pub fn count_nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    /// Dense matrix-vector product `self * v`, `v` being a single column.
    pub fn matvec(&self, v: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.matmul(v)
    }

    /// Dense matrix product over every entry, zeros included.
    pub fn matmul(&self, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != b.rows {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", b.rows, b.cols),
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, b.cols);
        self.mul_mat_into(&b.data, b.cols, &mut out.data);
        Ok(out)
    }
}

impl MatrixOperator for DenseMatrix {
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
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut sum = 0.0;
            for (a, xj) in row.iter().zip(x) {
                sum += a * xj;
            }
            *yi = sum;
        }
    }

    fn mul_mat_into(&self, b: &[f64], k: usize, out: &mut [f64]) {
        debug_assert_eq!(b.len(), self.cols * k);
        debug_assert_eq!(out.len(), self.rows * k);
        out.fill(0.0);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let acc = &mut out[i * k..(i + 1) * k];
            for (c, a) in row.iter().enumerate() {
                let brow = &b[c * k..(c + 1) * k];
                for (o, bv) in acc.iter_mut().zip(brow) {
                    *o += a * bv;
                }
            }
        }
    }
}

/// A single-column matrix whose entries are all `0` or `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryVector(DenseMatrix);

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        BinaryVector(DenseMatrix::zeros(len, 1))
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let values: Vec<f64> = bits.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect();
        BinaryVector(DenseMatrix::column_vector(&values))
    }

    pub fn try_from_matrix(m: DenseMatrix) -> Result<Self, LinalgError> {
        if m.cols != 1 {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", m.rows, m.cols),
                right: "a single column".into(),
            });
        }
        if let Some(bad) = m.data.iter().position(|v| *v != 0.0 && *v != 1.0) {
            return Err(LinalgError::Malformed(format!(
                "entry {bad} is {} (expected 0 or 1)",
                m.data[bad]
            )));
        }
        Ok(BinaryVector(m))
    }

    pub fn len(&self) -> usize {
        self.0.rows
    }

    pub fn is_empty(&self) -> bool {
        self.0.rows == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0.data[i] == 1.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0.data
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.0.data.iter().map(|v| *v == 1.0).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.0.data.iter().filter(|v| **v == 1.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_shapes() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![0.0, 1.0]]);
        let b = DenseMatrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.5, 1.0, 0.0]]);
        let c = a.matmul(&b).unwrap();
        assert_eq!((c.rows(), c.cols()), (3, 3));
        assert_eq!(c.row(0), &[2.0, 2.0, 2.0]);
        assert_eq!(c.row(1), &[5.0, 4.0, 6.0]);
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn columns_round_trip() {
        let cols = vec![vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]];
        let m = DenseMatrix::from_columns(3, &cols);
        assert_eq!(m.column(0), cols[0]);
        assert_eq!(m.column(1), cols[1]);
    }

    #[test]
    fn binary_vector_validation() {
        assert!(BinaryVector::try_from_matrix(DenseMatrix::column_vector(&[0.0, 1.0])).is_ok());
        assert!(BinaryVector::try_from_matrix(DenseMatrix::column_vector(&[0.5])).is_err());
        assert!(BinaryVector::try_from_matrix(DenseMatrix::zeros(2, 2)).is_err());
        let v = BinaryVector::from_bools(&[true, false, true]);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.to_bools(), vec![true, false, true]);
    }
}
