use crate::coalgebra::{iterated_reduced_comult, Coalgebra, UnitElement};
use crate::grading::{check_strict, check_unital_grading};
use crate::{CoalgError, TensorCap};
use exact_linear::Subspace;

/// An ascending chain of subspaces indexed by consecutive integers from 0.
/// `saturated_at` is the smallest index whose step is the whole space, when
/// one exists within the computed range.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub ambient_dim: usize,
    pub steps: Vec<(usize, Subspace)>,
    pub saturated_at: Option<usize>,
}

impl Filtration {
    pub fn step(&self, k: usize) -> Option<&Subspace> {
        self.steps.iter().find(|(i, _)| *i == k).map(|(_, s)| s)
    }

    fn from_steps(ambient_dim: usize, steps: Vec<(usize, Subspace)>) -> Self {
        let saturated_at =
            steps.iter().find(|(_, s)| s.dim() == ambient_dim).map(|(k, _)| *k);
        Filtration { ambient_dim, steps, saturated_at }
    }
}

/// Coradical filtration: step k is the kernel of the k-fold reduced
/// comultiplication (step 0 is the unit line, the kernel of `pbar`). The
/// chain is ascending because each iterate factors through the previous
/// one; that containment is re-verified here and a failure reported as a
/// cross-check error. Once a step reaches the whole space the remaining
/// steps equal it and are filled in without computing larger tensor powers.
pub fn coradical_filtration(
    c: &Coalgebra,
    u: &UnitElement,
    k_max: usize,
    cap: TensorCap,
) -> Result<Filtration, CoalgError> {
    let d = c.dim();
    let mut steps: Vec<(usize, Subspace)> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if let Some((_, prev)) = steps.last() {
            if prev.is_full() {
                let full = prev.clone();
                steps.push((k, full));
                continue;
            }
        }
        let iterate = iterated_reduced_comult(c, u, k, cap)?;
        let step = Subspace::from_matrix(&iterate.kernel_basis());
        if let Some((_, prev)) = steps.last() {
            if !prev.is_subspace_of(&step) {
                return Err(CoalgError::CrossCheckFailed(format!(
                    "coradical filtration fails to ascend between steps {} and {k}",
                    k - 1
                )));
            }
        }
        steps.push((k, step));
    }
    Ok(Filtration::from_steps(d, steps))
}

/// Grading filtration: step k is the span of all basis vectors of grade at
/// most k, for k from 0 to the top grade.
pub fn grading_filtration(c: &Coalgebra) -> Filtration {
    let d = c.dim();
    let top = c.space().top_grade();
    let steps = (0..=top).map(|k| (k, c.space().span_of_grades_le(k))).collect();
    Filtration::from_steps(d, steps)
}

/// Comparison of the two filtrations at one index. `witness` is an element
/// of the coradical step outside the grading step when the containment is
/// strict, or an element of the grading step outside the coradical step in
/// the (theorem-violating) case where containment fails.
#[derive(Debug, Clone)]
pub struct GradeComparison {
    pub k: usize,
    pub contained: bool,
    pub equal: bool,
    pub witness: Option<exact_linear::Vector>,
}

#[derive(Debug, Clone)]
pub struct CoradicalGradingReport {
    pub coradical: Filtration,
    pub grading: Filtration,
    pub per_k: Vec<GradeComparison>,
    pub all_contained: bool,
    pub all_equal: bool,
    pub strict: bool,
}

/// Runs both filtrations up to the top grade and compares them step by
/// step. Two identities are enforced rather than reported: the grading step
/// always sits inside the coradical step, and the steps agree at every index
/// exactly when the grading is strict. Both hold for every coalgebra
/// satisfying the axioms with a verified unital grading, so a violation
/// surfaces as a cross-check error.
pub fn coradical_equals_grading(
    c: &Coalgebra,
    u: &UnitElement,
    cap: TensorCap,
) -> Result<CoradicalGradingReport, CoalgError> {
    if !check_unital_grading(c, u).holds() {
        return Err(CoalgError::Precondition(
            "coradical/grading comparison needs a verified unital grading".into(),
        ));
    }
    let top = c.space().top_grade();
    let coradical = coradical_filtration(c, u, top, cap)?;
    let grading = grading_filtration(c);

    let mut per_k = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let g = grading.step(k).expect("grading step exists");
        let r = coradical.step(k).expect("coradical step exists");
        let contained = g.is_subspace_of(r);
        let equal = contained && r.dim() == g.dim();
        let witness = if !contained {
            g.witness_not_in(r)
        } else if !equal {
            r.witness_not_in(g)
        } else {
            None
        };
        per_k.push(GradeComparison { k, contained, equal, witness });
    }

    let all_contained = per_k.iter().all(|c| c.contained);
    let all_equal = per_k.iter().all(|c| c.equal);
    if !all_contained {
        return Err(CoalgError::CrossCheckFailed(
            "a grading step escapes the corresponding coradical step".into(),
        ));
    }
    let strict = check_strict(c, u, cap)?.strict;
    if all_equal != strict {
        return Err(CoalgError::CrossCheckFailed(format!(
            "filtrations {} at every step but the grading is {}",
            if all_equal { "agree" } else { "differ" },
            if strict { "strict" } else { "not strict" }
        )));
    }

    Ok(CoradicalGradingReport { coradical, grading, per_k, all_contained, all_equal, strict })
}
