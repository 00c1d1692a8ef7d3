use crate::{Matrix, Rat, Vector};
use std::fmt;

/// Subspace of ℚ^n, held as the canonical reduced row echelon basis of its
/// spanning set. Because the canonical form is unique, two subspaces are
/// equal (as values) exactly when they are equal as subspaces.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix, // RREF, no zero rows
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (rref, pivots) = m.rref_with_pivots();
        let kept: Vec<usize> = (0..pivots.len()).collect();
        Subspace {
            ambient: m.cols(),
            basis: rref.select_rows(&kept),
        }
    }

    /// Span of the given vectors.
    pub fn from_vectors(ambient: usize, vectors: &[Vector]) -> Self {
        Subspace::from_matrix(&Matrix::from_row_vectors(ambient, vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical echelon basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.basis.rows()).map(|r| self.basis.row(r)).collect()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Residual of `v` after elimination against the echelon basis; the
    /// residual is zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.ambient, "ambient dimension mismatch");
        let mut residual = v.clone();
        for r in 0..self.basis.rows() {
            // Each basis row starts with its pivot 1 in a column where no
            // other row has support.
            let (pivot_col, _) = self
                .basis
                .row_iter(r)
                .next()
                .expect("echelon basis has no zero rows");
            let coeff = residual.get(pivot_col);
            if coeff.is_zero() {
                continue;
            }
            for (c, x) in self.basis.row_iter(r) {
                residual.add_to(c, &-(&coeff * x));
            }
        }
        residual
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        (0..self.basis.rows()).all(|r| other.contains(&self.basis.row(r)))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Subspace::from_matrix(&self.basis.vstack(&other.basis))
    }

    /// First canonical basis vector of `self` not lying in `other`, if any.
    /// This is the standard witness for a strict inclusion `other ⊊ self`.
    pub fn witness_not_in(&self, other: &Subspace) -> Option<Vector> {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        (0..self.basis.rows())
            .map(|r| self.basis.row(r))
            .find(|v| !other.contains(v))
    }

    /// Image of the subspace under a linear map (applied to each basis
    /// vector).
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map domain mismatch");
        let rows: Vec<Vector> = (0..self.basis.rows())
            .map(|r| m.apply(&self.basis.row(r)))
            .collect();
        Subspace::from_vectors(m.rows(), &rows)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of ambient {})",
            self.dim(),
            self.ambient
        )?;
        for r in 0..self.basis.rows() {
            let row = self.basis.row(r);
            write!(f, "\n  ")?;
            let mut first = true;
            for (i, x) in row.iter() {
                if !first {
                    write!(f, " + ")?;
                }
                if x == &Rat::one() {
                    write!(f, "e{i}")?;
                } else {
                    write!(f, "{x}*e{i}")?;
                }
                first = false;
            }
        }
        Ok(())
    }
}
