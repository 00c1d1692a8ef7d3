use crate::ModelError;
use coalgebra_engine::{
    check_axioms, check_strict, check_unital_grading, coradical_filtration, grading_filtration,
    iterated_reduced_comult, Coalgebra, Filtration, GradedSpace, SymBasis, TensorCap, UnitElement,
    truncated_sym_coalg,
};
use exact_linear::{factorial, Matrix, Rat, Subspace, Vector};

/// Zero-cycle model of a K3 surface with `t` marked points: the point line
/// `o` in grade 0 and one primitive class `a_i` per marked point in grade 1,
/// with `a_i` standing for the difference of the point and `o`.
#[derive(Debug, Clone)]
pub struct K3Model {
    pub coalg: Coalgebra,
    pub unit: UnitElement,
    pub t: usize,
}

/// Zero-cycle model of the Hilbert scheme of `n` points on a K3 surface
/// with `t` marked points: the symmetric truncation `Sym^{<=n}` of the
/// t-dimensional primitive space, graded by monomial degree, with the empty
/// monomial `o` as unit. The grading is strict and coincides with both the
/// coradical filtration and the level filtration of point classes.
#[derive(Debug, Clone)]
pub struct HilbModel {
    pub coalg: Coalgebra,
    pub unit: UnitElement,
    pub n: usize,
    pub t: usize,
    basis: SymBasis,
}

impl HilbModel {
    /// Monomial bookkeeping for the underlying symmetric basis.
    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }
}

/// A point of the Hilbert scheme: a multiset of at most `n` primitive
/// labels, the remaining slots being filled by the distinguished point `o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSpec {
    slots: Vec<usize>,
}

impl PointSpec {
    pub fn from_labels(m: &HilbModel, labels: &[&str]) -> Result<Self, ModelError> {
        let gen_labels = primitive_labels(m);
        let mut slots = Vec::with_capacity(labels.len());
        for l in labels {
            match gen_labels.iter().position(|g| g == l) {
                Some(i) => slots.push(i),
                None => return Err(ModelError::UnknownLabel((*l).into())),
            }
        }
        Self::from_indices(m, &slots)
    }

    pub fn from_indices(m: &HilbModel, indices: &[usize]) -> Result<Self, ModelError> {
        if indices.len() > m.n {
            return Err(ModelError::BadSpec(format!(
                "{} non-o slots in a length-{} point",
                indices.len(),
                m.n
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= m.t) {
            return Err(ModelError::BadSpec(format!(
                "primitive index {bad} out of range for {} generators",
                m.t
            )));
        }
        let mut slots = indices.to_vec();
        slots.sort_unstable();
        Ok(PointSpec { slots })
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Number of non-`o` slots.
    pub fn level(&self) -> usize {
        self.slots.len()
    }
}

fn primitive_labels(m: &HilbModel) -> Vec<String> {
    let space = m.coalg.space();
    match space.grade_range(1) {
        Some(r) => r.map(|i| space.label(i).to_string()).collect(),
        None => Vec::new(),
    }
}

/// Runs the axiom, unital-grading, and strictness suites on a freshly built
/// model. These are construction invariants; a failure is a bug.
fn verify_strict_model(c: &Coalgebra, u: &UnitElement, cap: TensorCap) -> Result<(), ModelError> {
    let ax = check_axioms(c);
    if !ax.axioms_hold() || !ax.cocomm_ok {
        return Err(ModelError::Verification(format!(
            "built model fails coalgebra axioms: {:?}",
            ax.violations
        )));
    }
    let gr = check_unital_grading(c, u);
    if !gr.holds() {
        return Err(ModelError::Verification(
            "built model fails unital-grading checks".into(),
        ));
    }
    let st = check_strict(c, u, cap)?;
    if !st.strict {
        return Err(ModelError::Verification(
            "built model is not strictly graded".into(),
        ));
    }
    Ok(())
}

fn sym_model(n: usize, t: usize) -> Result<(Coalgebra, UnitElement), ModelError> {
    if n < 1 || t < 1 {
        return Err(ModelError::BadSpec(format!(
            "need n >= 1 and t >= 1, got n = {n}, t = {t}"
        )));
    }
    let gen_labels: Vec<String> = (1..=t).map(|i| format!("a{i}")).collect();
    let gens = GradedSpace::ungraded(gen_labels)?;
    let cap = TensorCap::default();
    let (c, u) = truncated_sym_coalg(&gens, n, cap)?;
    // The engine names the empty monomial "1"; here it is the class of the
    // distinguished point.
    let mut labels: Vec<String> = c.space().labels().iter().map(|s| s.to_string()).collect();
    labels[0] = "o".to_string();
    let c = c.with_labels(labels)?;
    let u = UnitElement::validated(&c, u.vector().clone())?;
    verify_strict_model(&c, &u, cap)?;
    Ok((c, u))
}

pub fn build_k3(t: usize) -> Result<K3Model, ModelError> {
    let (coalg, unit) = sym_model(1, t)?;
    Ok(K3Model { coalg, unit, t })
}

pub fn build_hilb(n: usize, t: usize) -> Result<HilbModel, ModelError> {
    let (coalg, unit) = sym_model(n, t)?;
    Ok(HilbModel { coalg, unit, n, t, basis: SymBasis::new(t, n) })
}

/// The class of the point described by `spec`, expanded in the monomial
/// basis: the product of `(o + a_x)` over the non-`o` slots, equivalently
/// the sum of all elementary symmetric polynomials in those slots. Its
/// counit is 1.
pub fn hilb_point_class(m: &HilbModel, spec: &PointSpec) -> Vector {
    let mut acc = Vector::unit(m.coalg.dim(), 0);
    for &g in spec.slots() {
        let mut next = acc.clone();
        for (i, coeff) in acc.iter() {
            let mut alpha = m.basis.exponents()[i].clone();
            alpha[g] += 1;
            let j = m.basis.index_of(&alpha).expect("spec level bounded by n");
            next.add_to(j, coeff);
        }
        acc = next;
    }
    debug_assert!(m.coalg.counit_of(&acc).is_one());
    acc
}

pub fn voisin_level(spec: &PointSpec) -> usize {
    spec.level()
}

fn multisets(t: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for g in start..t {
            cur.push(g);
            rec(t, k, g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Level filtration: step k is the span of all point classes with at most k
/// non-`o` slots. For these models it coincides with the grading filtration
/// and with the coradical filtration; both equalities are verified here,
/// subspace by subspace, before the filtration is returned.
pub fn voisin_filtration(m: &HilbModel, cap: TensorCap) -> Result<Filtration, ModelError> {
    let d = m.coalg.dim();
    let mut steps = Vec::with_capacity(m.n + 1);
    let mut pool: Vec<Vector> = Vec::new();
    for k in 0..=m.n {
        for slots in multisets(m.t, k) {
            pool.push(hilb_point_class(m, &PointSpec { slots }));
        }
        steps.push((k, Subspace::from_vectors(d, &pool)));
    }
    let saturated_at = steps.iter().find(|(_, s)| s.is_full()).map(|(k, _)| *k);
    let level = Filtration { ambient_dim: d, steps, saturated_at };

    let grading = grading_filtration(&m.coalg);
    let coradical = coradical_filtration(&m.coalg, &m.unit, m.n, cap)?;
    for k in 0..=m.n {
        let s = level.step(k).expect("constructed step");
        if grading.step(k) != Some(s) {
            return Err(ModelError::Verification(format!(
                "level filtration differs from the grading filtration at step {k}"
            )));
        }
        if coradical.step(k) != Some(s) {
            return Err(ModelError::Verification(format!(
                "level filtration differs from the coradical filtration at step {k}"
            )));
        }
    }
    Ok(level)
}

/// Multiplication map on grade-1 words: sends `a_{i_1} (x) ... (x) a_{i_k}`
/// to the monomial product, as a matrix from the k-th tensor power of the
/// grade-1 block (word basis, leftmost letter most significant) to the
/// grade-k block (local monomial coordinates).
///
/// Verified before returning, all exactly: the (k-1)-fold reduced
/// comultiplication restricted to the grade-k block lands in pure grade-1
/// words and equals the full symmetrization (each word weighted by the
/// number of letter orderings producing it); composing with this map gives
/// k! times the identity on the grade-k block; composing the other way
/// around gives k! times the symmetrization.
pub fn mu_k(m: &HilbModel, k: usize, cap: TensorCap) -> Result<Matrix, ModelError> {
    if k < 1 || k > m.n {
        return Err(ModelError::BadSpec(format!(
            "multiplication map needs 1 <= k <= n, got k = {k}, n = {}",
            m.n
        )));
    }
    let c = &m.coalg;
    let d = c.dim();
    let t = m.t;
    let r1 = c.space().grade_range(1).expect("grade-1 block exists");
    let rk = c.space().grade_range(k).expect("grade-k block exists");
    let block = rk.len();
    let words = t.pow(k as u32);
    cap.admit(words, block)?;

    let mut mu = Matrix::zeros(block, words);
    let mut eta = Matrix::zeros(words, block);
    for w in 0..words {
        let mut alpha = vec![0u32; t];
        let mut x = w;
        for _ in 0..k {
            alpha[x % t] += 1;
            x /= t;
        }
        let col = m.basis.index_of(&alpha).expect("degree-k monomial") - rk.start;
        mu.add_to(col, w, &Rat::one());
        let orderings = alpha
            .iter()
            .fold(Rat::one(), |acc, &e| &acc * &factorial(e as usize));
        eta.add_to(w, col, &orderings);
    }

    let iterate = iterated_reduced_comult(c, &m.unit, k - 1, cap)?;
    let mut a = Matrix::zeros(words, block);
    for (j_local, j) in rk.clone().enumerate() {
        for (row, coeff) in iterate.column(j).iter() {
            let mut digits = vec![0usize; k];
            let mut x = row;
            for p in (0..k).rev() {
                digits[p] = x % d;
                x /= d;
            }
            let mut w = 0usize;
            for &dg in &digits {
                if !r1.contains(&dg) {
                    return Err(ModelError::Verification(format!(
                        "reduced iterate of grade-{k} basis vector {j} leaves the grade-1 block"
                    )));
                }
                w = w * t + (dg - r1.start);
            }
            a.add_to(w, j_local, coeff);
        }
    }

    if a != eta {
        return Err(ModelError::Verification(format!(
            "grade-{k} reduced iterate differs from the full symmetrization"
        )));
    }
    let kfact = factorial(k);
    if &mu * &a != Matrix::identity(block).scale(&kfact) {
        return Err(ModelError::Verification(format!(
            "multiplication after the reduced iterate is not {k}! times the identity"
        )));
    }
    if &a * &(&mu * &eta) != eta.scale(&kfact) {
        return Err(ModelError::Verification(format!(
            "reduced iterate after multiplication is not {k}! times the symmetrization"
        )));
    }
    Ok(mu)
}
