use crate::AbelianError;
use coalgebra_engine::{
    lazy_is_unit, lazy_iterated_reduced_comult, LazyCoalgebra, LazyElement, LazyTensor,
};
use exact_linear::Rat;
use std::collections::BTreeMap;

/// An element of the rational group algebra of `Z^r`: a finite formal sum
/// of integer points with rational coefficients. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    rank: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl GroupAlgebraElement {
    pub fn zero(rank: usize) -> Self {
        GroupAlgebraElement { rank, terms: BTreeMap::new() }
    }

    /// The class `[x]` of a single point.
    pub fn point(x: Vec<i64>) -> Self {
        let rank = x.len();
        let mut terms = BTreeMap::new();
        terms.insert(x, Rat::one());
        GroupAlgebraElement { rank, terms }
    }

    pub fn from_terms(rank: usize, terms: Vec<(Vec<i64>, Rat)>) -> Self {
        let mut out = GroupAlgebraElement::zero(rank);
        for (x, c) in terms {
            out.add(x, &c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add(&mut self, x: Vec<i64>, c: &Rat) {
        assert_eq!(x.len(), self.rank, "point rank mismatch");
        let updated = &self.coefficient(&x) + c;
        if updated.is_zero() {
            self.terms.remove(&x);
        } else {
            self.terms.insert(x, updated);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add(x.clone(), c);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return GroupAlgebraElement::zero(self.rank);
        }
        let terms = self.terms.iter().map(|(x, q)| (x.clone(), q * c)).collect();
        GroupAlgebraElement { rank: self.rank, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, x: &[i64]) -> Rat {
        self.terms.get(x).cloned().unwrap_or_else(Rat::zero)
    }

    /// Sum of coefficients: the counit of the group-like comultiplication,
    /// and the degree of the modeled zero-cycle.
    pub fn augmentation(&self) -> Rat {
        let mut total = Rat::zero();
        for c in self.terms.values() {
            total = &total + c;
        }
        total
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }
}

/// Convolution along the group law: the coefficient of `z` in `a * b` is
/// the sum of products of coefficients over all `x + y = z`.
pub fn pontryagin(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
    assert_eq!(a.rank, b.rank, "rank mismatch");
    let mut out = GroupAlgebraElement::zero(a.rank);
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            let z: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            out.add(z, &(cx * cy));
        }
    }
    out
}

/// The group algebra of `Z^r` as a lazy coalgebra: every point is
/// group-like and has counit 1.
pub fn lazy_group_coalgebra(r: usize) -> LazyCoalgebra<Vec<i64>> {
    let _ = r;
    LazyCoalgebra::new(
        |x: &Vec<i64>| vec![((x.clone(), x.clone()), Rat::one())],
        |_: &Vec<i64>| Rat::one(),
    )
}

#[derive(Debug, Clone)]
pub struct GrouplikeReport {
    pub k: usize,
    pub point_is_unit: bool,
    pub lhs_support: usize,
    pub rhs_support: usize,
}

/// In the untruncated group algebra of `Z^r`, the k-fold reduced
/// comultiplication of a point class expands to the (k+1)-st tensor power
/// of `[x] - [0]`. Both sides are computed sparsely and compared exactly.
pub fn eq_redcomult_grouplike(
    r: usize,
    x: &[i64],
    k: usize,
) -> Result<GrouplikeReport, AbelianError> {
    if x.len() != r {
        return Err(AbelianError::BadParams(format!(
            "point has rank {}, expected {r}",
            x.len()
        )));
    }
    let lc = lazy_group_coalgebra(r);
    let origin = LazyElement::point(vec![0; r]);
    let point = LazyElement::point(x.to_vec());
    let point_is_unit = lazy_is_unit(&lc, &point);
    if !point_is_unit {
        return Err(AbelianError::Verification(
            "a point class fails to be group-like".into(),
        ));
    }

    let lhs = lazy_iterated_reduced_comult(&lc, &origin, &point, k);
    let rhs = LazyTensor::power_of(&point.minus(&origin), k + 1);
    if lhs != rhs {
        return Err(AbelianError::Verification(format!(
            "reduced iterate of {x:?} at k = {k} differs from the tensor power"
        )));
    }
    Ok(GrouplikeReport {
        k,
        point_is_unit,
        lhs_support: lhs.support_size(),
        rhs_support: rhs.support_size(),
    })
}
