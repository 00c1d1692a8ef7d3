use crate::IncidenceError;
use exact_linear::{Matrix, Rat, Subspace, Vector};

/// A finite point set with declared rational-equivalence relations. `CH0`
/// is the quotient of the free rational span of the points by the
/// relations; quotient and section matrices are precomputed from the
/// echelon form, with the non-pivot points as the class basis.
///
/// Every relation must have coefficient sum zero, so the degree of a
/// zero-cycle descends to the quotient.
#[derive(Debug, Clone)]
pub struct FiniteVariety {
    labels: Vec<String>,
    relations: Subspace,
    quotient: Matrix,
    section: Matrix,
    class_labels: Vec<String>,
}

impl PartialEq for FiniteVariety {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.relations == other.relations
    }
}

impl Eq for FiniteVariety {}

impl FiniteVariety {
    pub fn new(labels: Vec<String>, relations: &[Vector]) -> Result<Self, IncidenceError> {
        let n = labels.len();
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(IncidenceError::BadVariety(format!("duplicate point {l}")));
            }
        }
        for (i, rel) in relations.iter().enumerate() {
            if rel.dim() != n {
                return Err(IncidenceError::BadVariety(format!(
                    "relation {i} lives in dimension {}, the variety has {n} points",
                    rel.dim()
                )));
            }
            let mut total = Rat::zero();
            for (_, c) in rel.iter() {
                total = &total + c;
            }
            if !total.is_zero() {
                return Err(IncidenceError::BadVariety(format!(
                    "relation {i} has coefficient sum {total}, the degree map would not descend"
                )));
            }
        }
        let relations = Subspace::from_vectors(n, relations);

        // Pivot points are rewritten in terms of the non-pivot points, which
        // become the CH0 basis.
        let mut pivot = vec![false; n];
        for r in 0..relations.basis().rows() {
            let (p, _) = relations
                .basis()
                .row_iter(r)
                .next()
                .expect("echelon basis has no zero rows");
            pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !pivot[j]).collect();
        let m = free.len();
        let mut quotient = Matrix::zeros(m, n);
        let mut section = Matrix::zeros(n, m);
        for (i, &j) in free.iter().enumerate() {
            section.set(j, i, Rat::one());
        }
        for j in 0..n {
            let residual = relations.reduce(&Vector::unit(n, j));
            for (i, &fj) in free.iter().enumerate() {
                let c = residual.get(fj);
                if !c.is_zero() {
                    quotient.set(i, j, c);
                }
            }
        }
        let class_labels = free.iter().map(|&j| labels[j].clone()).collect();
        Ok(FiniteVariety { labels, relations, quotient, section, class_labels })
    }

    pub fn relation_free(labels: Vec<String>) -> Result<Self, IncidenceError> {
        FiniteVariety::new(labels, &[])
    }

    pub fn points(&self) -> &[String] {
        &self.labels
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn ch0_dim(&self) -> usize {
        self.quotient.rows()
    }

    /// Labels of the points representing the CH0 basis classes.
    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    /// Quotient map from the free span onto CH0.
    pub fn quotient(&self) -> &Matrix {
        &self.quotient
    }

    /// Section of the quotient picking the representative points.
    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn class_of(&self, cycle: &Vector) -> Vector {
        self.quotient.apply(cycle)
    }

    pub fn class_of_point(&self, i: usize) -> Vector {
        self.quotient.column(i)
    }

    /// Representative cycle of a class: the matching combination of the
    /// basis points.
    pub fn representative(&self, class: &Vector) -> Vector {
        self.section.apply(class)
    }

    /// Degree of a class. Well defined because every relation has
    /// coefficient sum zero.
    pub fn degree(&self, class: &Vector) -> Rat {
        let mut total = Rat::zero();
        for (_, c) in self.representative(class).iter() {
            total = &total + c;
        }
        total
    }
}

/// The product of two finite varieties: points are ordered pairs in
/// row-major order, and the relations are the bilinear closure of the
/// factors' relations (relation tensor anything, anything tensor
/// relation), so that CH0 of the product is the tensor square of the
/// factors' CH0.
pub fn product_variety(
    a: &FiniteVariety,
    b: &FiniteVariety,
    cap: usize,
) -> Result<FiniteVariety, IncidenceError> {
    let (na, nb) = (a.point_count(), b.point_count());
    let needed = na.saturating_mul(nb);
    if needed > cap {
        return Err(IncidenceError::ProductTooLarge { needed, cap });
    }
    let mut labels = Vec::with_capacity(na * nb);
    for p in a.points() {
        for q in b.points() {
            labels.push(format!("({p},{q})"));
        }
    }
    let mut relations = Vec::new();
    for r in 0..a.relations().basis().rows() {
        let rel = a.relations().basis().row(r);
        for q in 0..nb {
            relations.push(rel.tensor(&Vector::unit(nb, q)));
        }
    }
    for p in 0..na {
        let point = Vector::unit(na, p);
        for r in 0..b.relations().basis().rows() {
            relations.push(point.tensor(&b.relations().basis().row(r)));
        }
    }
    let product = FiniteVariety::new(labels, &relations)?;

    // The bilinear closure is exactly the kernel of the tensor-square
    // quotient, so the class count must be the product of the class counts.
    if product.ch0_dim() != a.ch0_dim() * b.ch0_dim() {
        return Err(IncidenceError::Verification(format!(
            "product quotient has dimension {}, expected {} x {}",
            product.ch0_dim(),
            a.ch0_dim(),
            b.ch0_dim()
        )));
    }
    Ok(product)
}
