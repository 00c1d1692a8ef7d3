use crate::{LinearError, Rat, Vector};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse exact-rational matrix, stored row-major as ordered column→value
/// maps with no explicit zeros. Equality is entrywise.
///
/// See the crate docs for the tensor index convention realized by
/// [`Matrix::kronecker`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rat>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rat::one());
        }
        m
    }

    /// Builds from `(row, col, value)` triples; repeated positions
    /// accumulate, entries that cancel are dropped.
    pub fn from_triples(
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, Rat)>,
    ) -> Result<Self, LinearError> {
        let mut m = Matrix::zeros(rows, cols);
        for (r, c, x) in triples {
            if r >= rows || c >= cols {
                return Err(LinearError::IndexOutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            m.add_to(r, c, &x);
        }
        Ok(m)
    }

    /// Dense construction, mainly for tests.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rows in dense matrix constructor"
        );
        let mut m = Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                m.add_to(r, c, x);
            }
        }
        m
    }

    /// Dense integer construction, mainly for tests.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let lifted: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&n| Rat::from_int(n)).collect())
            .collect();
        Matrix::from_rows(&lifted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r].get(&c).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if x.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, x);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &Rat) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if x.is_zero() {
            return;
        }
        let slot = self.data[r].entry(c).or_default();
        *slot += x;
        if slot.is_zero() {
            self.data[r].remove(&c);
        }
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, x)| (r, c, x)))
    }

    pub fn row_iter(&self, r: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.data[r].iter().map(|(&c, x)| (c, x))
    }

    pub fn row(&self, r: usize) -> Vector {
        let mut v = Vector::zero(self.cols);
        for (c, x) in self.row_iter(r) {
            v.add_to(c, x);
        }
        v
    }

    pub fn column(&self, c: usize) -> Vector {
        assert!(c < self.cols, "column index out of bounds");
        let mut v = Vector::zero(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if let Some(x) = row.get(&c) {
                v.add_to(r, x);
            }
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &Vector) {
        assert_eq!(v.dim(), self.rows, "column length mismatch");
        for row in &mut self.data {
            row.remove(&c);
        }
        for (r, x) in v.iter() {
            self.data[r].insert(c, x.clone());
        }
    }

    /// Builds the matrix whose rows are the given vectors.
    pub fn from_row_vectors(cols: usize, rows: &[Vector]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.dim(), cols, "row length mismatch");
            for (c, x) in v.iter() {
                m.data[r].insert(c, x.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (r, c, x) in self.entries() {
            out.data[c].insert(r, x.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Matrix {
        if k.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for x in row.values_mut() {
                *x *= k;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.cols, "matrix-vector shape mismatch");
        let mut out = Vector::zero(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = Rat::zero();
            for (c, x) in row {
                let coeff = v.get(*c);
                if !coeff.is_zero() {
                    acc += x * &coeff;
                }
            }
            out.add_to(r, &acc);
        }
        out
    }

    /// Kronecker product in the workspace tensor convention: entry
    /// `((i1, i2), (j1, j2))` of `a ⊗ b` is `a[i1, j1] * b[i2, j2]` at flat
    /// position `(i1 * b.rows + i2, j1 * b.cols + j2)`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, x1) in self.entries() {
            for (r2, c2, x2) in other.entries() {
                out.data[r1 * other.rows + r2].insert(c1 * other.cols + c2, x1 * x2);
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let positions: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        assert_eq!(positions.len(), cols.len(), "repeated column selection");
        let mut out = Matrix::zeros(self.rows, cols.len());
        for (r, c, x) in self.entries() {
            if let Some(&new) = positions.get(&c) {
                out.data[r].insert(new, x.clone());
            }
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let data: Vec<BTreeMap<usize, Rat>> = rows
            .iter()
            .map(|&r| {
                assert!(r < self.rows, "row selection out of bounds");
                self.data[r].clone()
            })
            .collect();
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form with the fixed deterministic pivot rule:
    /// columns are scanned left to right and the pivot is the **first**
    /// not-yet-used row (in storage order) with a nonzero entry in the
    /// current column. Pivots are normalized to 1 and eliminated above and
    /// below, so the result is the canonical RREF of the row space.
    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    /// RREF together with the pivot column of each pivot row.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row >= m.rows {
                break;
            }
            let Some(pivot_row) = (next_row..m.rows).find(|&r| m.data[r].contains_key(&col))
            else {
                continue;
            };
            m.data.swap(next_row, pivot_row);
            let lead = m.data[next_row].get(&col).cloned().expect("pivot entry");
            if !lead.is_one() {
                let inv = lead.recip();
                for x in m.data[next_row].values_mut() {
                    *x *= &inv;
                }
            }
            let pivot_row_data = m.data[next_row].clone();
            for r in 0..m.rows {
                if r == next_row {
                    continue;
                }
                let Some(factor) = m.data[r].get(&col).cloned() else {
                    continue;
                };
                for (&c, x) in &pivot_row_data {
                    let delta = -(&factor * x);
                    let slot = m.data[r].entry(c).or_default();
                    *slot += &delta;
                    if slot.is_zero() {
                        m.data[r].remove(&c);
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Canonical basis of the right kernel `{x : M x = 0}`, returned as the
    /// rows of an RREF matrix with `cols() - rank()` rows.
    pub fn kernel_basis(&self) -> Matrix {
        let (rref, pivots) = self.rref_with_pivots();
        let pivot_set: BTreeMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(row, &col)| (col, row))
            .collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains_key(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.data[k].insert(f, Rat::one());
            for (&col, &row) in &pivot_set {
                if let Some(x) = rref.data[row].get(&f) {
                    basis.data[k].insert(col, -x);
                }
            }
        }
        // Kernel vectors built from free columns need one more sweep to be
        // in canonical echelon order.
        basis.rref()
    }

    /// `M * M == M`; errors on a non-square matrix.
    pub fn is_idempotent(&self) -> Result<bool, LinearError> {
        if !self.is_square() {
            return Err(LinearError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self * self == *self)
    }

    /// `a * b == 0` and `b * a == 0`; errors unless both are square of the
    /// same dimension.
    pub fn are_orthogonal(a: &Matrix, b: &Matrix) -> Result<bool, LinearError> {
        if !a.is_square() {
            return Err(LinearError::NotSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        if a.rows != b.rows || a.cols != b.cols {
            return Err(LinearError::DimMismatch(format!(
                "orthogonality of {}x{} against {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        Ok((a * b).is_zero() && (b * a).is_zero())
    }

    /// Solves `M x = rhs` exactly. Returns the canonical solution whose
    /// free coordinates are zero, or [`LinearError::NoSolution`].
    pub fn solve(&self, rhs: &Vector) -> Result<Vector, LinearError> {
        if rhs.dim() != self.rows {
            return Err(LinearError::DimMismatch(format!(
                "solve: rhs has dim {}, matrix has {} rows",
                rhs.dim(),
                self.rows
            )));
        }
        let mut augmented = Matrix::zeros(self.rows, self.cols + 1);
        for (r, c, x) in self.entries() {
            augmented.data[r].insert(c, x.clone());
        }
        for (r, x) in rhs.iter() {
            augmented.data[r].insert(self.cols, x.clone());
        }
        let (rref, pivots) = augmented.rref_with_pivots();
        if pivots.contains(&self.cols) {
            return Err(LinearError::NoSolution);
        }
        let mut x = Vector::zero(self.cols);
        for (row, &col) in pivots.iter().enumerate() {
            if let Some(v) = rref.data[row].get(&self.cols) {
                x.add_to(col, v);
            }
        }
        Ok(x)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "adding matrices with different shapes"
        );
        let mut out = self.clone();
        for (r, c, x) in rhs.entries() {
            out.add_to(r, c, x);
        }
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "subtracting matrices with different shapes"
        );
        let mut out = self.clone();
        for (r, c, x) in rhs.entries() {
            out.add_to(r, c, &-x);
        }
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "multiplying {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (k, x) in row {
                for (&c, y) in &rhs.data[*k] {
                    let slot = acc.entry(c).or_default();
                    *slot += &(x * y);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.rows, self.cols)?;
        for (r, c, x) in self.entries() {
            writeln!(f, "  [{r}, {c}] = {x}")?;
        }
        Ok(())
    }
}
