use crate::{LinearError, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Sparse vector over [`Rat`]. No explicit zeros are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    dim: usize,
    entries: BTreeMap<usize, Rat>,
}

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of bounds for dim {dim}");
        let mut entries = BTreeMap::new();
        entries.insert(i, Rat::one());
        Vector { dim, entries }
    }

    /// Builds from `(index, value)` pairs; repeated indices accumulate.
    pub fn from_entries(
        dim: usize,
        pairs: impl IntoIterator<Item = (usize, Rat)>,
    ) -> Result<Self, LinearError> {
        let mut v = Vector::zero(dim);
        for (i, x) in pairs {
            if i >= dim {
                return Err(LinearError::IndexOutOfBounds {
                    row: 0,
                    col: i,
                    rows: 1,
                    cols: dim,
                });
            }
            v.add_to(i, &x);
        }
        Ok(v)
    }

    pub fn from_dense(values: &[Rat]) -> Self {
        let mut v = Vector::zero(values.len());
        for (i, x) in values.iter().enumerate() {
            v.add_to(i, x);
        }
        v
    }

    /// Convenience for tests: dense integer coordinates.
    pub fn from_ints(values: &[i64]) -> Self {
        Vector::from_dense(&values.iter().map(|&n| Rat::from_int(n)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rat {
        assert!(i < self.dim, "index {i} out of bounds for dim {}", self.dim);
        self.entries.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `x` to coordinate `i`, dropping the entry if it cancels.
    pub fn add_to(&mut self, i: usize, x: &Rat) {
        assert!(i < self.dim, "index {i} out of bounds for dim {}", self.dim);
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_default();
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    pub fn set(&mut self, i: usize, x: Rat) {
        assert!(i < self.dim, "index {i} out of bounds for dim {}", self.dim);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    /// Iterates `(index, value)` in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn scale(&self, c: &Rat) -> Vector {
        if c.is_zero() {
            return Vector::zero(self.dim);
        }
        let entries = self.entries.iter().map(|(&i, x)| (i, x * c)).collect();
        Vector {
            dim: self.dim,
            entries,
        }
    }

    /// Sum of all coordinates (the "degree" of a formal combination).
    pub fn coefficient_sum(&self) -> Rat {
        self.entries.values().fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn dot(&self, other: &Vector) -> Rat {
        assert_eq!(self.dim, other.dim, "dot of vectors with different dims");
        let mut acc = Rat::zero();
        for (i, x) in self.iter() {
            if let Some(y) = other.entries.get(&i) {
                acc += x * y;
            }
        }
        acc
    }

    /// Tensor product in the workspace-wide lexicographic convention:
    /// coordinate `(i, j)` of `a ⊗ b` lands at flat index `i * b.dim + j`.
    pub fn tensor(&self, other: &Vector) -> Vector {
        let dim = self.dim * other.dim;
        let mut entries = BTreeMap::new();
        for (i, x) in self.iter() {
            for (j, y) in other.iter() {
                entries.insert(i * other.dim + j, x * y);
            }
        }
        Vector { dim, entries }
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, x) in self.iter() {
            out[i] = x.clone();
        }
        out
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim, rhs.dim, "adding vectors with different dims");
        let mut out = self.clone();
        for (i, x) in rhs.iter() {
            out.add_to(i, x);
        }
        out
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim, rhs.dim, "subtracting vectors with different dims");
        let mut out = self.clone();
        for (i, x) in rhs.iter() {
            out.add_to(i, &-x);
        }
        out
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(&-Rat::one())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector(dim={}; ", self.dim)?;
        let mut first = true;
        for (i, x) in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "[{i}]={x}")?;
            first = false;
        }
        write!(f, ")")
    }
}
