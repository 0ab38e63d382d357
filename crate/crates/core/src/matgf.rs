//! Dense matrices over [`FieldSpec`] fields and the structured matrices used
//! by the constructions (Moore, Vandermonde, block-diagonal assembly).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Row-major dense matrix. Entries are stored as packed field values.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<_> = (0..self.cols).map(|j| self.get(i, j)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major elements, all of which must lie in `field`.
    pub fn from_elements(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        elems: &[FieldElement],
    ) -> Result<Self> {
        if elems.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                elems.len()
            )));
        }
        if elems.iter().any(|x| x.spec() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data: elems.iter().map(|x| x.value()).collect(),
        })
    }

    /// Builds a matrix from packed values (see [`FieldElement::value`]).
    pub fn from_values(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        values: Vec<u64>,
    ) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= field.order()) {
            return Err(Error::InvalidElement(format!(
                "value {v} >= order {}",
                field.order()
            )));
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data: values,
        })
    }

    /// Convenience constructor from small integer rows over a prime field.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_values(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::from_raw(&self.field, self.value(i, j))
    }

    pub fn value(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: &FieldElement) -> Result<()> {
        if x.spec() != &self.field {
            return Err(Error::FieldMismatch);
        }
        self.data[i * self.cols + j] = x.value();
        Ok(())
    }

    pub(crate) fn set_value(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_values(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[l * other.cols + j];
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add_raw(out.data[idx], f.mul_raw(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row_values(i));
        }
        Self {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Same matrix with its entries reinterpreted in `target`, which must
    /// contain this (prime) field as its prime subfield.
    pub fn embed_into(&self, target: &FieldSpec) -> Result<Self> {
        if !self.field.is_prime_field() || self.field.characteristic() != target.characteristic() {
            return Err(Error::FieldMismatch);
        }
        // The prime subfield occupies packed values 0..p in every extension.
        Ok(Self {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        })
    }

    /// Reduced row echelon form and its pivot columns. First-nonzero pivoting.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(true);
        (m, pivots)
    }

    /// Row rank; the input is left untouched.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce_in_place(false).len()
    }

    fn reduce_in_place(&mut self, full: bool) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f
                .inv_raw(self.data[r * cols + c])
                .expect("pivot is nonzero");
            for j in c..cols {
                self.data[r * cols + j] = f.mul_raw(self.data[r * cols + j], inv);
            }
            let start = if full { 0 } else { r + 1 };
            for i in start..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg_raw(factor);
                for j in c..cols {
                    let pv = self.data[r * cols + j];
                    if pv != 0 {
                        let idx = i * cols + j;
                        self.data[idx] = f.add_raw(self.data[idx], f.mul_raw(neg, pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right null space, one vector per row.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            out.data[b * self.cols + fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                out.data[b * self.cols + pc] = f.neg_raw(red.data[i * self.cols + fc]);
            }
        }
        out
    }

    /// Basis of the row space (nonzero rows of the reduced form).
    pub fn row_basis(&self) -> Self {
        let (red, pivots) = self.rref();
        red.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    /// Whether the two matrices have the same row space.
    pub fn same_row_space(&self, other: &Self) -> bool {
        if self.field != other.field || self.cols != other.cols {
            return false;
        }
        let a = self.row_basis();
        let b = other.row_basis();
        a == b
    }
}

fn common_field(points: &[FieldElement]) -> Result<FieldSpec> {
    let first = points
        .first()
        .ok_or_else(|| Error::Dimension("empty point set".into()))?;
    let field = first.spec().clone();
    if points.iter().any(|x| x.spec() != &field) {
        return Err(Error::FieldMismatch);
    }
    Ok(field)
}

/// `h x |S|` matrix whose row `i` holds `alpha_j^(q^i)`.
///
/// `points` must be in non-descending [`FieldElement::order_key`] order.
pub fn moore_matrix(points: &[FieldElement], h: usize, q: u64) -> Result<Matrix> {
    let field = common_field(points)?;
    field.characteristic_exponent(q)?;
    if points
        .windows(2)
        .any(|w| w[0].order_key() > w[1].order_key())
    {
        return Err(Error::UnsortedPoints);
    }
    let mut m = Matrix::zeros(&field, h, points.len());
    for (j, x) in points.iter().enumerate() {
        let mut v = x.value();
        for i in 0..h {
            m.set_value(i, j, v);
            v = field.pow_raw(v, q as u128);
        }
    }
    Ok(m)
}

/// `rows x |points|` matrix with entry `(i, j) = points_j^i`.
pub fn vandermonde(points: &[FieldElement], rows: usize) -> Result<Matrix> {
    let field = common_field(points)?;
    if rows == 0 {
        return Err(Error::Dimension(
            "vandermonde needs at least one row".into(),
        ));
    }
    let mut keys: Vec<u64> = points.iter().map(FieldElement::value).collect();
    keys.sort_unstable();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    let mut m = Matrix::zeros(&field, rows, points.len());
    for (j, x) in points.iter().enumerate() {
        let mut v = 1;
        for i in 0..rows {
            m.set_value(i, j, v);
            v = field.mul_raw(v, x.value());
        }
    }
    Ok(m)
}

/// Assembles a block matrix; `None` blocks are zero. Every block row and
/// block column needs at least one present block to fix its size.
pub fn block_assemble(layout: &[Vec<Option<Matrix>>]) -> Result<Matrix> {
    let block_cols = layout.first().map_or(0, Vec::len);
    if layout.iter().any(|r| r.len() != block_cols) {
        return Err(Error::Dimension("ragged block layout".into()));
    }
    let field = layout
        .iter()
        .flatten()
        .flatten()
        .next()
        .map(|m| m.field().clone())
        .ok_or_else(|| Error::Dimension("layout has no blocks".into()))?;

    let mut heights = vec![None; layout.len()];
    let mut widths = vec![None; block_cols];
    for (bi, row) in layout.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            let Some(b) = block else { continue };
            if b.field() != &field {
                return Err(Error::FieldMismatch);
            }
            for (slot, size, what) in [
                (&mut heights[bi], b.rows(), "row height"),
                (&mut widths[bj], b.cols(), "column width"),
            ] {
                match *slot {
                    None => *slot = Some(size),
                    Some(s) if s != size => {
                        return Err(Error::Dimension(format!(
                            "inconsistent block {what} at ({bi}, {bj}): {s} vs {size}"
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let heights: Vec<usize> = heights
        .into_iter()
        .enumerate()
        .map(|(i, h)| h.ok_or_else(|| Error::Dimension(format!("block row {i} is empty"))))
        .collect::<Result<_>>()?;
    let widths: Vec<usize> = widths
        .into_iter()
        .enumerate()
        .map(|(j, w)| w.ok_or_else(|| Error::Dimension(format!("block column {j} is empty"))))
        .collect::<Result<_>>()?;

    let total_rows: usize = heights.iter().sum();
    let total_cols: usize = widths.iter().sum();
    let mut out = Matrix::zeros(&field, total_rows, total_cols);
    let mut r0 = 0;
    for (bi, row) in layout.iter().enumerate() {
        let mut c0 = 0;
        for (bj, block) in row.iter().enumerate() {
            if let Some(b) = block {
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        out.set_value(r0 + i, c0 + j, b.value(i, j));
                    }
                }
            }
            c0 += widths[bj];
        }
        r0 += heights[bi];
    }
    Ok(out)
}
