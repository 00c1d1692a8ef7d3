use crate::variety::{product_variety, FiniteVariety};
use crate::IncidenceError;
use exact_linear::{Matrix, Rat};

/// Which projection of the correspondence a push or pull acts along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Phi,
    Psi,
}

/// A correspondence with generically finite projections: a variety `gamma`
/// mapping onto `source` (phi) and onto `target` (psi), each with a
/// positive multiplicity per gamma point. The multiplicity sum over every
/// fiber of a projection is its degree; unequal fiber sums are rejected at
/// construction.
#[derive(Debug, Clone)]
pub struct Cover {
    pub gamma: FiniteVariety,
    pub source: FiniteVariety,
    pub target: FiniteVariety,
    phi: Vec<(usize, u64)>,
    psi: Vec<(usize, u64)>,
    pub deg_phi: u64,
    pub deg_psi: u64,
}

fn fiber_degree(
    name: &str,
    map: &[(usize, u64)],
    gamma: &FiniteVariety,
    onto: &FiniteVariety,
) -> Result<u64, IncidenceError> {
    if map.len() != gamma.point_count() {
        return Err(IncidenceError::BadCover(format!(
            "{name} assigns {} images to {} points",
            map.len(),
            gamma.point_count()
        )));
    }
    let mut sums = vec![0u64; onto.point_count()];
    for (g, &(image, mult)) in map.iter().enumerate() {
        if image >= onto.point_count() {
            return Err(IncidenceError::BadCover(format!(
                "{name} sends point {} outside the image variety",
                gamma.points()[g]
            )));
        }
        if mult == 0 {
            return Err(IncidenceError::BadCover(format!(
                "{name} gives point {} multiplicity zero",
                gamma.points()[g]
            )));
        }
        sums[image] += mult;
    }
    let deg = sums.first().copied().unwrap_or(0);
    for (x, &s) in sums.iter().enumerate() {
        if s != deg {
            return Err(IncidenceError::FiberDegreeMismatch(format!(
                "{name} fiber over {} has multiplicity sum {s}, the fiber over {} has {deg}",
                onto.points()[x],
                onto.points()[0]
            )));
        }
    }
    Ok(deg)
}

impl Cover {
    pub fn new(
        gamma: FiniteVariety,
        source: FiniteVariety,
        target: FiniteVariety,
        phi: Vec<(usize, u64)>,
        psi: Vec<(usize, u64)>,
    ) -> Result<Self, IncidenceError> {
        let deg_phi = fiber_degree("phi", &phi, &gamma, &source)?;
        let deg_psi = fiber_degree("psi", &psi, &gamma, &target)?;
        Ok(Cover { gamma, source, target, phi, psi, deg_phi, deg_psi })
    }

    /// The identity correspondence of a variety: both projections are the
    /// identity with multiplicity one.
    pub fn identity(v: &FiniteVariety) -> Result<Self, IncidenceError> {
        let id: Vec<(usize, u64)> = (0..v.point_count()).map(|i| (i, 1)).collect();
        Cover::new(v.clone(), v.clone(), v.clone(), id.clone(), id)
    }

    pub fn phi(&self) -> &[(usize, u64)] {
        &self.phi
    }

    pub fn psi(&self) -> &[(usize, u64)] {
        &self.psi
    }

    fn side(&self, side: Side) -> (&FiniteVariety, &[(usize, u64)], u64) {
        match side {
            Side::Phi => (&self.source, &self.phi, self.deg_phi),
            Side::Psi => (&self.target, &self.psi, self.deg_psi),
        }
    }

    /// Pushforward on free spans: a point goes to its image point. The
    /// multiplicities play no role here; they belong to the pullback.
    fn free_push(&self, side: Side) -> Matrix {
        let (onto, map, _) = self.side(side);
        let mut m = Matrix::zeros(onto.point_count(), self.gamma.point_count());
        for (g, &(image, _)) in map.iter().enumerate() {
            m.set(image, g, Rat::one());
        }
        m
    }

    /// Pullback on free spans: the transpose weighted by the fiber
    /// multiplicities.
    fn free_pull(&self, side: Side) -> Matrix {
        let (onto, map, _) = self.side(side);
        let mut m = Matrix::zeros(self.gamma.point_count(), onto.point_count());
        for (g, &(image, mult)) in map.iter().enumerate() {
            m.set(g, image, Rat::from_int(mult as i64));
        }
        m
    }

    /// Pushforward on the class quotients. Errors unless the declared
    /// relations of gamma land in the declared relations of the image.
    pub fn pushforward(&self, side: Side) -> Result<Matrix, IncidenceError> {
        let (onto, _, _) = self.side(side);
        let push = self.free_push(side);
        for r in 0..self.gamma.relations().basis().rows() {
            let rel = self.gamma.relations().basis().row(r);
            let image = push.apply(&rel);
            if !onto.relations().contains(&image) {
                return Err(IncidenceError::RelationNotPreserved(format!(
                    "pushforward of relation {r} is not a declared relation of the image"
                )));
            }
        }
        Ok(&(onto.quotient() * &push) * self.gamma.section())
    }

    /// Pullback on the class quotients, verified against the projection
    /// formula: pushforward of the pullback is the degree times the
    /// identity.
    pub fn pullback(&self, side: Side) -> Result<Matrix, IncidenceError> {
        let (onto, _, deg) = self.side(side);
        let pull = self.free_pull(side);
        for r in 0..onto.relations().basis().rows() {
            let rel = onto.relations().basis().row(r);
            let image = pull.apply(&rel);
            if !self.gamma.relations().contains(&image) {
                return Err(IncidenceError::RelationNotPreserved(format!(
                    "pullback of relation {r} is not a declared relation of the correspondence"
                )));
            }
        }
        let pull_q = &(self.gamma.quotient() * &pull) * onto.section();
        let push_q = self.pushforward(side)?;
        let composite = &push_q * &pull_q;
        let expected = Matrix::identity(onto.ch0_dim()).scale(&Rat::from_int(deg as i64));
        if composite != expected {
            return Err(IncidenceError::Verification(
                "projection formula fails on the class quotient".into(),
            ));
        }
        Ok(pull_q)
    }
}

/// Two points of the correspondence in the same psi-fiber whose phi-images
/// are not rationally equivalent.
#[derive(Debug, Clone)]
pub struct FiberWitness {
    pub base: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub holds: bool,
    pub witness: Option<FiberWitness>,
}

/// Pointwise fiber verdict, the operator verdict, and the witness if the
/// fibers are inconstant. The two verdicts are computed independently and
/// must agree; they are equivalent for every cover.
fn condition_verdicts(c: &Cover) -> Result<(bool, Option<FiberWitness>, bool), IncidenceError> {
    // Pointwise: within each psi-fiber, all phi-images share a class.
    let mut pointwise = true;
    let mut witness = None;
    for y in 0..c.target.point_count() {
        let fiber: Vec<usize> = c
            .psi()
            .iter()
            .enumerate()
            .filter(|(_, &(image, _))| image == y)
            .map(|(g, _)| g)
            .collect();
        for pair in fiber.windows(2) {
            let a = c.source.class_of_point(c.phi()[pair[0]].0);
            let b = c.source.class_of_point(c.phi()[pair[1]].0);
            if a != b {
                pointwise = false;
                if witness.is_none() {
                    witness = Some(FiberWitness {
                        base: c.target.points()[y].clone(),
                        first: c.gamma.points()[pair[0]].clone(),
                        second: c.gamma.points()[pair[1]].clone(),
                    });
                }
            }
        }
    }

    // Operator route on the free span of gamma, quotiented only at the
    // source end: push along phi after pulling back the psi-pushforward,
    // against the psi-degree multiple of the phi-pushforward.
    let lhs = &(&c.free_push(Side::Phi) * &c.free_pull(Side::Psi)) * &c.free_push(Side::Psi);
    let rhs = c.free_push(Side::Phi).scale(&Rat::from_int(c.deg_psi as i64));
    let difference = c.source.quotient() * &(&lhs - &rhs);
    let operator = difference.is_zero();

    if pointwise != operator {
        return Err(IncidenceError::Verification(
            "fiber verdict and operator verdict disagree".into(),
        ));
    }
    Ok((pointwise, witness, operator))
}

/// Pointwise fiber condition: every psi-fiber has a single phi-image class.
pub fn check_condition_i(c: &Cover) -> Result<ConditionReport, IncidenceError> {
    let (pointwise, witness, _) = condition_verdicts(c)?;
    Ok(ConditionReport { holds: pointwise, witness })
}

/// Operator condition: pushing forward along phi after a psi round trip is
/// the psi-degree multiple of the plain phi-pushforward.
pub fn check_condition_ii(c: &Cover) -> Result<ConditionReport, IncidenceError> {
    let (_, witness, operator) = condition_verdicts(c)?;
    Ok(ConditionReport { holds: operator, witness })
}

/// The transport pair of a passing cover: `gamma` carries classes from the
/// source to the target, `gamma_prime` carries them back, and the round
/// trip is the identity on the source classes.
#[derive(Debug, Clone)]
pub struct GammaMaps {
    pub gamma: Matrix,
    pub gamma_prime: Matrix,
}

pub fn gamma_maps(c: &Cover) -> Result<GammaMaps, IncidenceError> {
    let report = check_condition_i(c)?;
    if !report.holds {
        let w = report.witness.expect("failing condition has a witness");
        return Err(IncidenceError::ConditionFails(format!(
            "fiber over {} sends {} and {} to inequivalent classes",
            w.base, w.first, w.second
        )));
    }
    let gamma = (&c.pushforward(Side::Psi)? * &c.pullback(Side::Phi)?)
        .scale(&Rat::new(1, c.deg_phi as i64));
    let gamma_prime = (&c.pushforward(Side::Phi)? * &c.pullback(Side::Psi)?)
        .scale(&Rat::new(1, c.deg_psi as i64));
    if &gamma_prime * &gamma != Matrix::identity(c.source.ch0_dim()) {
        return Err(IncidenceError::Verification(
            "return trip is not the identity on source classes".into(),
        ));
    }
    Ok(GammaMaps { gamma, gamma_prime })
}

/// The two-sided bridge between the product variety's classes and the
/// tensor square of the factor's classes. Both composites are verified to
/// be identities, which pins the bilinear-closure relations as exactly the
/// kernel of the tensor-square quotient.
struct ProductBridge {
    to_product: Matrix,
    from_product: Matrix,
}

fn bridge(factor: &FiniteVariety, product: &FiniteVariety) -> Result<ProductBridge, IncidenceError> {
    let to_product = product.quotient() * &factor.section().kronecker(factor.section());
    let from_product = &factor.quotient().kronecker(factor.quotient()) * product.section();
    let m = factor.ch0_dim();
    if &to_product * &from_product != Matrix::identity(product.ch0_dim())
        || &from_product * &to_product != Matrix::identity(m * m)
    {
        return Err(IncidenceError::Verification(
            "product classes do not match the tensor square of the factor classes".into(),
        ));
    }
    Ok(ProductBridge { to_product, from_product })
}

/// Diagonal pushforward into the product, on class quotients. Errors when
/// a declared relation's diagonal image is not a product relation.
fn diagonal_map(v: &FiniteVariety, vv: &FiniteVariety) -> Result<Matrix, IncidenceError> {
    let n = v.point_count();
    let mut free = Matrix::zeros(n * n, n);
    for p in 0..n {
        free.set(p * n + p, p, Rat::one());
    }
    for r in 0..v.relations().basis().rows() {
        let image = free.apply(&v.relations().basis().row(r));
        if !vv.relations().contains(&image) {
            return Err(IncidenceError::RelationNotPreserved(format!(
                "diagonal image of relation {r} is not a product relation"
            )));
        }
    }
    Ok(&(vv.quotient() * &free) * v.section())
}

#[derive(Debug, Clone)]
pub struct ComultSquareReport {
    pub source_product_classes: usize,
    pub target_product_classes: usize,
    pub commutes: bool,
}

/// The transported diagonal square: carrying a source class to the target,
/// taking the diagonal there, and carrying both factors back is the same
/// as taking the diagonal at the source. Exact matrix identity on the
/// product class bases.
pub fn comult_square(c: &Cover, product_cap: usize) -> Result<ComultSquareReport, IncidenceError> {
    let maps = gamma_maps(c)?;
    let xx = product_variety(&c.source, &c.source, product_cap)?;
    let yy = product_variety(&c.target, &c.target, product_cap)?;
    let dx = diagonal_map(&c.source, &xx)?;
    let dy = diagonal_map(&c.target, &yy)?;
    let bx = bridge(&c.source, &xx)?;
    let by = bridge(&c.target, &yy)?;

    let pair_return = maps.gamma_prime.kronecker(&maps.gamma_prime);
    let lhs = &(&(&bx.to_product * &pair_return) * &by.from_product) * &(&dy * &maps.gamma);
    if lhs != dx {
        return Err(IncidenceError::Verification(
            "transported diagonal differs from the source diagonal".into(),
        ));
    }
    Ok(ComultSquareReport {
        source_product_classes: xx.ch0_dim(),
        target_product_classes: yy.ch0_dim(),
        commutes: true,
    })
}

/// Fiber product of two covers sharing the middle variety. Multiplicities
/// multiply, so both degrees are the products of the factors' degrees. An
/// empty fiber product is reported as `None`, not an error. When both
/// factors pass the fiber condition the composite must pass it too, and
/// that is verified here.
pub fn fiber_compose(c1: &Cover, c2: &Cover) -> Result<Option<Cover>, IncidenceError> {
    if c1.target != c2.source {
        return Err(IncidenceError::BadCover(
            "covers do not share the middle variety".into(),
        ));
    }
    let mut labels = Vec::new();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for (g, &(psi1, m_psi1)) in c1.psi().iter().enumerate() {
        for (h, &(phi2, m_phi2)) in c2.phi().iter().enumerate() {
            if psi1 != phi2 {
                continue;
            }
            labels.push(format!(
                "({},{})",
                c1.gamma.points()[g],
                c2.gamma.points()[h]
            ));
            phi.push((c1.phi()[g].0, c1.phi()[g].1 * m_phi2));
            psi.push((c2.psi()[h].0, m_psi1 * c2.psi()[h].1));
        }
    }
    if labels.is_empty() {
        return Ok(None);
    }
    let gamma = FiniteVariety::relation_free(labels)?;
    let composite = Cover::new(gamma, c1.source.clone(), c2.target.clone(), phi, psi)?;
    if composite.deg_phi != c1.deg_phi * c2.deg_phi
        || composite.deg_psi != c1.deg_psi * c2.deg_psi
    {
        return Err(IncidenceError::Verification(
            "composite degrees are not the products of the factor degrees".into(),
        ));
    }
    if check_condition_i(c1)?.holds && check_condition_i(c2)?.holds {
        let report = check_condition_i(&composite)?;
        if !report.holds {
            return Err(IncidenceError::Verification(
                "composite of two passing covers fails the fiber condition".into(),
            ));
        }
    }
    Ok(Some(composite))
}
