use crate::space::GradedSpace;
use crate::tensor_ops::{apply_on_factor, apply_on_first_factor, col_matrix, columns_of};
use crate::{CoalgError, TensorCap};
use exact_linear::{Matrix, Rat, Vector};

/// A coalgebra: a graded space `M`, a comultiplication matrix `M -> M (x) M`
/// (d^2 x d, tensor indices with the leftmost factor most significant) and a
/// counit row `M -> Q` (1 x d). Construction checks shapes only; the axioms
/// are verified by [`check_axioms`], since deliberately broken inputs must be
/// representable for diagnostics.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    space: GradedSpace,
    comult: Matrix,
    counit: Matrix,
}

impl Coalgebra {
    pub fn new(space: GradedSpace, comult: Matrix, counit: Matrix) -> Result<Self, CoalgError> {
        let d = space.total_dim();
        if comult.rows() != d * d || comult.cols() != d {
            return Err(CoalgError::Shape(format!(
                "comultiplication must be {}x{}, got {}x{}",
                d * d,
                d,
                comult.rows(),
                comult.cols()
            )));
        }
        if counit.rows() != 1 || counit.cols() != d {
            return Err(CoalgError::Shape(format!(
                "counit must be 1x{}, got {}x{}",
                d,
                counit.rows(),
                counit.cols()
            )));
        }
        Ok(Coalgebra { space, comult, counit })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn comult(&self) -> &Matrix {
        &self.comult
    }

    pub fn counit(&self) -> &Matrix {
        &self.counit
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Counit evaluated on an element.
    pub fn counit_of(&self, v: &Vector) -> Rat {
        self.counit.apply(v).get(0)
    }

    /// Same structure maps over a relabeled copy of the space.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, CoalgError> {
        Ok(Coalgebra {
            space: self.space.with_labels(labels)?,
            comult: self.comult.clone(),
            counit: self.counit.clone(),
        })
    }
}

/// A validated unit: `delta(u) = u (x) u` and `eps(u) = 1`. Constructing one
/// through [`UnitElement::validated`] is the only way to obtain it, so
/// downstream operations can rely on the invariant (they still re-verify
/// against the coalgebra they are handed, since a unit for one coalgebra is
/// not a unit for another).
#[derive(Debug, Clone)]
pub struct UnitElement {
    vector: Vector,
}

impl UnitElement {
    pub fn validated(c: &Coalgebra, v: Vector) -> Result<Self, CoalgError> {
        if v.dim() != c.dim() {
            return Err(CoalgError::Shape(format!(
                "unit candidate has dimension {}, coalgebra has {}",
                v.dim(),
                c.dim()
            )));
        }
        let eps = c.counit_of(&v);
        if !eps.is_one() {
            return Err(CoalgError::NotAUnit(format!(
                "counit value is {eps}, expected 1, on {}",
                c.space().format_vector(&v)
            )));
        }
        let lhs = c.comult().apply(&v);
        let rhs = v.tensor(&v);
        if lhs != rhs {
            return Err(CoalgError::NotAUnit(format!(
                "comultiplication of {} is not its tensor square",
                c.space().format_vector(&v)
            )));
        }
        Ok(UnitElement { vector: v })
    }

    pub fn vector(&self) -> &Vector {
        &self.vector
    }
}

/// Axiom check results. `cocomm_ok` is informative: cocommutativity is not
/// required of a coalgebra (deconcatenation coalgebras fail it), so
/// [`AxiomReport::axioms_hold`] covers counit and coassociativity only.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub counit_ok: bool,
    pub coassoc_ok: bool,
    pub cocomm_ok: bool,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn axioms_hold(&self) -> bool {
        self.counit_ok && self.coassoc_ok
    }
}

/// Verifies the counit identities `(eps (x) id) delta = id = (id (x) eps) delta`,
/// coassociativity `(delta (x) id) delta = (id (x) delta) delta`, and
/// cocommutativity under the unsigned basis swap. All three are checked
/// column by column with single-factor streaming, so nothing larger than
/// d^3-dimensional vectors is ever held.
pub fn check_axioms(c: &Coalgebra) -> AxiomReport {
    let d = c.dim();
    let delta_cols = columns_of(c.comult());
    let eps_cols = columns_of(c.counit());
    let mut counit_ok = true;
    let mut coassoc_ok = true;
    let mut cocomm_ok = true;
    let mut violations = Vec::new();

    for j in 0..d {
        let e_j = Vector::unit(d, j);
        let w = c.comult().apply(&e_j);

        // (eps (x) id) delta and (id (x) eps) delta against the identity.
        let left = apply_on_factor(&eps_cols, 1, &w, &[d, d], 0);
        let right = apply_on_factor(&eps_cols, 1, &w, &[d, d], 1);
        if left != e_j {
            counit_ok = false;
            violations.push(format!(
                "left counit identity fails on {}: got {}",
                c.space().label(j),
                c.space().format_vector(&left)
            ));
        }
        if right != e_j {
            counit_ok = false;
            violations.push(format!(
                "right counit identity fails on {}: got {}",
                c.space().label(j),
                c.space().format_vector(&right)
            ));
        }

        // (delta (x) id) delta vs (id (x) delta) delta.
        let lhs = apply_on_first_factor(&delta_cols, d * d, &w, d);
        let rhs = apply_on_factor(&delta_cols, d * d, &w, &[d, d], 1);
        if lhs != rhs {
            coassoc_ok = false;
            violations.push(format!("coassociativity fails on {}", c.space().label(j)));
        }

        // Unsigned swap of the two tensor factors.
        let mut swapped = Vector::zero(d * d);
        for (idx, coeff) in w.iter() {
            swapped.add_to((idx % d) * d + idx / d, coeff);
        }
        if swapped != w {
            cocomm_ok = false;
            violations.push(format!("cocommutativity fails on {}", c.space().label(j)));
        }
    }

    AxiomReport { counit_ok, coassoc_ok, cocomm_ok, violations }
}

/// True iff `delta(v) = v (x) v` and `eps(v) = 1`.
pub fn is_unit(c: &Coalgebra, v: &Vector) -> bool {
    v.dim() == c.dim()
        && c.counit_of(v).is_one()
        && c.comult().apply(v) == v.tensor(v)
}

/// The projector `pbar = id - u . eps` away from the unit line. Idempotent
/// because `eps(u) = 1`; kills exactly the span of `u`.
pub fn unit_projector(c: &Coalgebra, u: &UnitElement) -> Matrix {
    let d = c.dim();
    &Matrix::identity(d) - &(&col_matrix(u.vector()) * c.counit())
}

fn require_unit(c: &Coalgebra, u: &UnitElement) -> Result<(), CoalgError> {
    if is_unit(c, u.vector()) {
        Ok(())
    } else {
        Err(CoalgError::NotAUnit(
            "supplied unit element does not satisfy the unit equations for this coalgebra".into(),
        ))
    }
}

/// Reduced comultiplication `(delta - u (x) id - id (x) u) . pbar` as a
/// d^2 x d matrix. Vanishes on the unit; on a unital grading it vanishes on
/// grade 1 as well.
pub fn reduced_comult(c: &Coalgebra, u: &UnitElement) -> Result<Matrix, CoalgError> {
    require_unit(c, u)?;
    let d = c.dim();
    let u_col = col_matrix(u.vector());
    let id = Matrix::identity(d);
    let tensor_by_u_left = u_col.kronecker(&id);
    let tensor_by_u_right = id.kronecker(&u_col);
    let pbar = unit_projector(c, u);
    Ok(&(&(c.comult() - &tensor_by_u_left) - &tensor_by_u_right) * &pbar)
}

/// `k`-fold reduced comultiplication `M -> M^(x)(k+1)` with the convention
/// that the zeroth iterate is `pbar`. Expanded on the leftmost factor:
/// each column starts as `pbar e_j` and gets `deltabar` applied to its first
/// tensor factor `k` times, streamed so no `deltabar (x) id^(k-1)` matrix
/// exists. Every call recomputes the same columns through
/// `pbar^(x)(k+1) . delta^k` and errors if the two routes disagree; they are
/// equal for every coalgebra satisfying the axioms, so a mismatch means
/// either an engine bug or axiom-violating input.
pub fn iterated_reduced_comult(
    c: &Coalgebra,
    u: &UnitElement,
    k: usize,
    cap: TensorCap,
) -> Result<Matrix, CoalgError> {
    require_unit(c, u)?;
    let d = c.dim();
    let rows = d
        .checked_pow(k as u32 + 1)
        .ok_or(CoalgError::TensorCapExceeded { needed: usize::MAX, cap: cap.0 })?;
    cap.admit(rows, d)?;

    let pbar = unit_projector(c, u);
    if k == 0 {
        return Ok(pbar);
    }
    let pbar_cols = columns_of(&pbar);
    let delta_cols = columns_of(c.comult());
    let deltabar = reduced_comult(c, u)?;
    let deltabar_cols = columns_of(&deltabar);

    let mut result = Matrix::zeros(rows, d);
    for j in 0..d {
        // Leftmost expansion route.
        let mut w = Vector::zero(d);
        for (r, x) in &pbar_cols[j] {
            w.add_to(*r, x);
        }
        for _ in 0..k {
            w = apply_on_first_factor(&deltabar_cols, d * d, &w, d);
        }

        // Independent route: iterate the full comultiplication, then project
        // every tensor factor away from the unit.
        let mut v = Vector::unit(d, j);
        for _ in 0..k {
            v = apply_on_first_factor(&delta_cols, d * d, &v, d);
        }
        let dims = vec![d; k + 1];
        for pos in 0..=k {
            v = apply_on_factor(&pbar_cols, d, &v, &dims, pos);
        }

        if w != v {
            return Err(CoalgError::CrossCheckFailed(format!(
                "iterated reduced comultiplication routes disagree on basis vector {} at k = {k}",
                c.space().label(j)
            )));
        }
        result.set_column(j, &w);
    }
    Ok(result)
}
