use crate::AbelianError;
use coalgebra_engine::{
    check_axioms, check_strict, check_unital_grading, coradical_equals_grading,
    iterated_reduced_comult, Coalgebra, CoradicalGradingReport, GradedSpace, SymBasis, TensorCap,
    UnitElement, truncated_sym_coalg,
};
use exact_linear::{factorial, Matrix, Rat, Subspace, Vector};

/// Truncated zero-cycle model of a g-dimensional abelian variety:
/// `Sym^{<=g}` of an s-dimensional space of log-classes `l_1, ..., l_s`,
/// graded by degree, with the binomial comultiplication, the empty monomial
/// `[0]` as unit, and the truncated symmetric multiplication as Pontryagin
/// product. The grading is strict and products of total degree above g
/// vanish.
#[derive(Debug, Clone)]
pub struct TruncatedAbelianModel {
    pub coalg: Coalgebra,
    pub unit: UnitElement,
    pub g: usize,
    pub s: usize,
    basis: SymBasis,
}

impl TruncatedAbelianModel {
    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }
}

pub fn build_truncated_abelian(g: usize, s: usize) -> Result<TruncatedAbelianModel, AbelianError> {
    if g < 1 || s < 1 {
        return Err(AbelianError::BadParams(format!(
            "need g >= 1 and s >= 1, got g = {g}, s = {s}"
        )));
    }
    let gen_labels: Vec<String> = (1..=s).map(|i| format!("l{i}")).collect();
    let gens = GradedSpace::ungraded(gen_labels)?;
    let cap = TensorCap::default();
    let (c, u) = truncated_sym_coalg(&gens, g, cap)?;
    let mut labels: Vec<String> = c.space().labels().iter().map(|l| l.to_string()).collect();
    labels[0] = "[0]".to_string();
    let c = c.with_labels(labels)?;
    let u = UnitElement::validated(&c, u.vector().clone())?;

    let ax = check_axioms(&c);
    if !ax.axioms_hold() || !ax.cocomm_ok {
        return Err(AbelianError::Verification(format!(
            "built model fails coalgebra axioms: {:?}",
            ax.violations
        )));
    }
    if !check_unital_grading(&c, &u).holds() {
        return Err(AbelianError::Verification(
            "built model fails unital-grading checks".into(),
        ));
    }
    if !check_strict(&c, &u, cap)?.strict {
        return Err(AbelianError::Verification(
            "built model is not strictly graded".into(),
        ));
    }
    Ok(TruncatedAbelianModel { coalg: c, unit: u, g, s, basis: SymBasis::new(s, g) })
}

/// Pontryagin product in the truncated model: monomials multiply by adding
/// exponents, and anything of total degree above g is zero.
pub fn pontryagin_trunc(m: &TruncatedAbelianModel, a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::zero(m.coalg.dim());
    for (i, ci) in a.iter() {
        for (j, cj) in b.iter() {
            let gamma: Vec<u32> = m.basis.exponents()[i]
                .iter()
                .zip(&m.basis.exponents()[j])
                .map(|(p, q)| p + q)
                .collect();
            if gamma.iter().sum::<u32>() as usize <= m.g {
                let k = m.basis.index_of(&gamma).expect("bounded degree");
                out.add_to(k, &(ci * cj));
            }
        }
    }
    out
}

/// j-fold Pontryagin power; the empty product is the unit `[0]`.
pub fn pontryagin_power(m: &TruncatedAbelianModel, v: &Vector, j: usize) -> Vector {
    let mut out = Vector::unit(m.coalg.dim(), 0);
    for _ in 0..j {
        out = pontryagin_trunc(m, &out, v);
    }
    out
}

/// Truncated exponential `sum_j v^{*j} / j!` of an augmentation-ideal
/// element (counit zero). `exp_trunc(0) = [0]`.
pub fn exp_trunc(m: &TruncatedAbelianModel, v: &Vector) -> Result<Vector, AbelianError> {
    let eps = m.coalg.counit_of(v);
    if !eps.is_zero() {
        return Err(AbelianError::NotAugmented(format!(
            "exponential input has counit {eps}, expected 0"
        )));
    }
    let mut acc = Vector::unit(m.coalg.dim(), 0);
    let mut power = Vector::unit(m.coalg.dim(), 0);
    for j in 1..=m.g {
        power = pontryagin_trunc(m, &power, v);
        acc = &acc + &power.scale(&factorial(j).recip());
    }
    Ok(acc)
}

/// Truncated logarithm `sum_n (-1)^{n-1}/n (v - [0])^{*n}` of a degree-1
/// element (counit one). Inverse to [`exp_trunc`] on both sides.
pub fn log_trunc(m: &TruncatedAbelianModel, v: &Vector) -> Result<Vector, AbelianError> {
    let eps = m.coalg.counit_of(v);
    if !eps.is_one() {
        return Err(AbelianError::NotAugmented(format!(
            "logarithm input has counit {eps}, expected 1"
        )));
    }
    let w = v - m.unit.vector();
    let mut acc = Vector::zero(m.coalg.dim());
    let mut power = Vector::unit(m.coalg.dim(), 0);
    for n in 1..=m.g {
        power = pontryagin_trunc(m, &power, &w);
        let sign = if n % 2 == 1 { 1 } else { -1 };
        acc = &acc + &power.scale(&Rat::new(sign, n as i64));
    }
    Ok(acc)
}

/// The log-class of an integer combination of the declared points: log is
/// linear on symbols, so the combination `sum_i c_i x_i` has log-class
/// `sum_i c_i l_i`.
pub fn log_vector(m: &TruncatedAbelianModel, coeffs: &[i64]) -> Result<Vector, AbelianError> {
    if coeffs.len() != m.s {
        return Err(AbelianError::BadParams(format!(
            "{} coefficients for {} log-classes",
            coeffs.len(),
            m.s
        )));
    }
    let mut v = Vector::zero(m.coalg.dim());
    for (i, &c) in coeffs.iter().enumerate() {
        v.add_to(1 + i, &Rat::from_int(c));
    }
    Ok(v)
}

/// The class of the i-th declared point: the truncated exponential of its
/// log-class.
pub fn point_class(m: &TruncatedAbelianModel, point_index: usize) -> Result<Vector, AbelianError> {
    if point_index >= m.s {
        return Err(AbelianError::OutOfRange(format!(
            "point {point_index} of {} declared points",
            m.s
        )));
    }
    exp_trunc(m, &Vector::unit(m.coalg.dim(), 1 + point_index))
}

/// Logarithm of the i-th declared point class; recovers its log-class
/// exactly.
pub fn log_point(m: &TruncatedAbelianModel, point_index: usize) -> Result<Vector, AbelianError> {
    log_trunc(m, &point_class(m, point_index)?)
}

/// The grade-j piece of the point with the given log-class: the j-th
/// divided Pontryagin power `log^{*j} / j!`. The pieces sum back to the
/// point class; piece 0 is `[0]`.
pub fn beauville_component_of_log(
    m: &TruncatedAbelianModel,
    log: &Vector,
    j: usize,
) -> Result<Vector, AbelianError> {
    if j > m.g {
        return Err(AbelianError::OutOfRange(format!(
            "component {j} of a model truncated at degree {}",
            m.g
        )));
    }
    let eps = m.coalg.counit_of(log);
    if !eps.is_zero() {
        return Err(AbelianError::NotAugmented(format!(
            "log-class has counit {eps}, expected 0"
        )));
    }
    Ok(pontryagin_power(m, log, j).scale(&factorial(j).recip()))
}

pub fn beauville_component(
    m: &TruncatedAbelianModel,
    point_index: usize,
    j: usize,
) -> Result<Vector, AbelianError> {
    if point_index >= m.s {
        return Err(AbelianError::OutOfRange(format!(
            "point {point_index} of {} declared points",
            m.s
        )));
    }
    beauville_component_of_log(m, &Vector::unit(m.coalg.dim(), 1 + point_index), j)
}

/// Covariant action of multiplication by m: log-classes scale by m, so
/// grade j scales by m^j. Diagonal on the monomial basis.
pub fn mult_by_m(m: &TruncatedAbelianModel, mult: i64) -> Result<Matrix, AbelianError> {
    if (-1..=1).contains(&mult) {
        return Err(AbelianError::ForbiddenMultiplier(mult));
    }
    let d = m.coalg.dim();
    let mut out = Matrix::zeros(d, d);
    for i in 0..d {
        let j = m.basis.degree_of(i);
        out.set(i, i, Rat::from_int(mult).pow(j));
    }
    Ok(out)
}

/// Lagrange projector onto grade k, as a polynomial in multiplication by
/// m with eigenvalues m^0, ..., m^g. The whole family is verified:
/// idempotent, pairwise orthogonal, summing to the identity, with the k-th
/// image equal to the grade-k subspace. The matrix is independent of the
/// choice of m.
pub fn dm_projector(
    m: &TruncatedAbelianModel,
    mult: i64,
    k: usize,
) -> Result<Matrix, AbelianError> {
    if k > m.g {
        return Err(AbelianError::OutOfRange(format!(
            "projector index {k} exceeds the truncation level {}",
            m.g
        )));
    }
    let action = mult_by_m(m, mult)?;
    let d = m.coalg.dim();
    let id = Matrix::identity(d);
    let eigenvalue = |j: usize| Rat::from_int(mult).pow(j as u32);

    let mut family = Vec::with_capacity(m.g + 1);
    for j in 0..=m.g {
        let mut p = Matrix::identity(d);
        for i in 0..=m.g {
            if i == j {
                continue;
            }
            let factor = &action - &id.scale(&eigenvalue(i));
            let denom = &eigenvalue(j) - &eigenvalue(i);
            p = &p * &factor.scale(&denom.recip());
        }
        family.push(p);
    }

    let mut sum = Matrix::zeros(d, d);
    for p in &family {
        if !p.is_idempotent()? {
            return Err(AbelianError::Verification("projector is not idempotent".into()));
        }
        sum = &sum + p;
    }
    if sum != id {
        return Err(AbelianError::Verification(
            "projector family does not sum to the identity".into(),
        ));
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            if !Matrix::are_orthogonal(&family[i], &family[j])? {
                return Err(AbelianError::Verification(
                    "projector family is not pairwise orthogonal".into(),
                ));
            }
        }
    }
    let image = Subspace::from_matrix(&family[k].transpose());
    let grade = match m.coalg.space().grade_range(k) {
        Some(r) => {
            let units: Vec<Vector> = r.map(|i| Vector::unit(d, i)).collect();
            Subspace::from_vectors(d, &units)
        }
        None => Subspace::zero(d),
    };
    if image != grade {
        return Err(AbelianError::Verification(format!(
            "projector {k} image differs from the grade-{k} subspace"
        )));
    }
    Ok(family.swap_remove(k))
}

#[derive(Debug, Clone)]
pub struct ExteriorPowerReport {
    pub log_class: Vector,
    /// The g-fold reduced comultiplication of the point class is exactly
    /// zero; asserted before the report is produced.
    pub top_power_vanishes: bool,
    /// The (g-1)-fold reduced comultiplication equals the g-th tensor
    /// power of the log-class, hence is nonzero whenever the log is.
    pub sharp: bool,
}

/// Vanishing of the top reduced power on a point class, with sharpness one
/// step below: `deltabar^g` of the point is exactly zero, while
/// `deltabar^{g-1}` equals the g-th tensor power of its log-class.
pub fn exterior_power_vanishing(
    m: &TruncatedAbelianModel,
    log: &Vector,
    cap: TensorCap,
) -> Result<ExteriorPowerReport, AbelianError> {
    let pc = exp_trunc(m, log)?;
    let top = iterated_reduced_comult(&m.coalg, &m.unit, m.g, cap)?;
    if !top.apply(&pc).is_zero() {
        return Err(AbelianError::Verification(
            "top reduced power of a point class is nonzero".into(),
        ));
    }
    let below = iterated_reduced_comult(&m.coalg, &m.unit, m.g - 1, cap)?;
    let expanded = below.apply(&pc);
    let mut tensor_power = log.clone();
    for _ in 1..m.g {
        tensor_power = tensor_power.tensor(log);
    }
    if expanded != tensor_power {
        return Err(AbelianError::Verification(
            "reduced power below the top differs from the tensor power of the log".into(),
        ));
    }
    Ok(ExteriorPowerReport {
        log_class: log.clone(),
        top_power_vanishes: true,
        sharp: !tensor_power.is_zero(),
    })
}

/// Coradical filtration versus the Beauville grading: step k of the
/// coradical filtration equals the span of grades at most k, for every
/// k up to g. Delegates to the engine comparison and insists on equality.
pub fn coradical_vs_beauville(
    m: &TruncatedAbelianModel,
    cap: TensorCap,
) -> Result<CoradicalGradingReport, AbelianError> {
    let report = coradical_equals_grading(&m.coalg, &m.unit, cap)?;
    if !report.all_equal || !report.strict {
        return Err(AbelianError::Verification(
            "coradical filtration differs from the grading filtration".into(),
        ));
    }
    Ok(report)
}
