use crate::error::LinalgError;

use super::CsrMatrix;

/// Coordinate-format sparse matrix: one `(row, col, value)` triple per
/// nonzero, stored as three parallel arrays.
#[derive(Clone, Debug, PartialEq)]
pub struct CooMatrix {
    rows: usize,
    cols: usize,
    row_idx: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CooMatrix {
    /// Checks array lengths and index ranges. Ordering is checked by
    /// [`CooMatrix::to_csr`].
    pub fn new(
        rows: usize,
        cols: usize,
        row_idx: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, LinalgError> {
        if row_idx.len() != col_idx.len() || row_idx.len() != values.len() {
            return Err(LinalgError::Malformed(format!(
                "COO arrays have lengths {}, {}, {}",
                row_idx.len(),
                col_idx.len(),
                values.len()
            )));
        }
        if let Some((&row, &col)) = row_idx
            .iter()
            .zip(&col_idx)
            .find(|(r, c)| **r >= rows || **c >= cols)
        {
            return Err(LinalgError::IndexOutOfRange { row, col, rows, cols });
        }
        Ok(CooMatrix {
            rows,
            cols,
            row_idx,
            col_idx,
            values,
        })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        CooMatrix {
            rows,
            cols,
            row_idx: Vec::new(),
            col_idx: Vec::new(),
            values: Vec::new(),
        }
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

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Compresses the row array into row pointers.
    ///
    /// Entries must be sorted row-major with no repeated `(row, col)`.
    pub fn to_csr(&self) -> Result<CsrMatrix, LinalgError> {
        for k in 1..self.nnz() {
            let prev = (self.row_idx[k - 1], self.col_idx[k - 1]);
            let cur = (self.row_idx[k], self.col_idx[k]);
            if cur <= prev {
                return Err(LinalgError::Unsorted { position: k });
            }
        }
        let mut row_ptr = vec![0usize; self.rows + 1];
        for &r in &self.row_idx {
            row_ptr[r + 1] += 1;
        }
        for i in 0..self.rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix::from_raw_parts(
            self.rows,
            self.cols,
            row_ptr,
            self.col_idx.clone(),
            self.values.clone(),
        )
    }
}
