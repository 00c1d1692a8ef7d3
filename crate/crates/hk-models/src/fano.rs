use crate::ModelError;
use coalgebra_engine::{check_axioms, check_unital_grading, Coalgebra, GradedSpace, UnitElement};
use exact_linear::{Matrix, Rat, Subspace, Vector};
use std::collections::BTreeMap;

/// Zero-cycle model of the Fano variety of lines of a cubic fourfold.
///
/// The coalgebra side has the point line `o` in grade 0, one primitive
/// class `b_l` per line of the second type in grade 1 (standing for
/// `[l] - [o]`), and one class `t_T` per declared triangle in grade 2
/// (standing for `[l1] + [l2] + [l3] - 3[o]`). The degree-6 self-map acts
/// diagonally with eigenvalue 1, -2, 4 on grades 0, 1, 2.
///
/// The surface side is a formal span of `S_o` and one `S_l` per line. Its
/// products are not a ring: only the entries the triangle derivation needs
/// are declared ([`FanoModel::intersection`]), and every declared triangle
/// carries the relation `S_l1 + S_l2 + S_l3 = 3 S_o`. Anything outside the
/// table is an error, never a guess.
#[derive(Debug, Clone)]
pub struct FanoModel {
    pub coalg: Coalgebra,
    pub unit: UnitElement,
    pub lines: usize,
    /// Declared triangles, each a sorted triple of line indices.
    pub triangles: Vec<[usize; 3]>,
    /// Diagonal action of the degree-6 self-map on the coalgebra basis.
    pub phi: Matrix,
    table: BTreeMap<(usize, usize), Vector>,
}

impl FanoModel {
    /// Dimension of the formal span of point classes `[o], [l_1], ...`
    /// (also of the surface-class span `S_o, S_{l_1}, ...`).
    pub fn point_span_dim(&self) -> usize {
        1 + self.lines
    }

    pub fn point_span_labels(&self) -> Vec<String> {
        let mut out = vec!["[o]".to_string()];
        out.extend((1..=self.lines).map(|i| format!("[l{i}]")));
        out
    }

    pub fn surface_labels(&self) -> Vec<String> {
        let mut out = vec!["S_o".to_string()];
        out.extend((1..=self.lines).map(|i| format!("S_l{i}")));
        out
    }

    /// Declared product of two surface classes, as a vector of point
    /// classes. Index 0 is `S_o`, index `1 + l` is `S_l`; the pair is
    /// unordered.
    pub fn intersection(&self, i: usize, j: usize) -> Option<&Vector> {
        self.table.get(&(i.min(j), i.max(j)))
    }
}

fn normalized_triangle(lines: usize, tri: [usize; 3]) -> Result<[usize; 3], ModelError> {
    let mut t = tri;
    t.sort_unstable();
    if t[0] == t[1] || t[1] == t[2] {
        return Err(ModelError::MalformedTriangle(format!(
            "repeated line index in {tri:?}"
        )));
    }
    if t[2] >= lines {
        return Err(ModelError::MalformedTriangle(format!(
            "line index {} out of range for {lines} lines",
            t[2]
        )));
    }
    Ok(t)
}

pub fn build_fano(lines: usize, triangles: &[[usize; 3]]) -> Result<FanoModel, ModelError> {
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for &tri in triangles {
        let t = normalized_triangle(lines, tri)?;
        if !tris.contains(&t) {
            tris.push(t);
        }
    }

    // The pair rule names the third line of the triangle, so two distinct
    // triangles sharing an edge would declare contradictory products.
    let mut third: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &tris {
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let pair = (t[i], t[j]);
            if let Some(&prev) = third.get(&pair) {
                if prev != t[k] {
                    return Err(ModelError::MalformedTriangle(format!(
                        "lines {} and {} lie on two declared triangles",
                        t[i], t[j]
                    )));
                }
            }
            third.insert(pair, t[k]);
        }
    }

    let pd = 1 + lines;
    let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    let mut s_o_sq = Vector::zero(pd);
    s_o_sq.set(0, Rat::from_int(5));
    table.insert((0, 0), s_o_sq);
    for ((i, j), k) in third {
        let mut v = Vector::zero(pd);
        v.set(0, Rat::from_int(6));
        v.add_to(1 + k, &Rat::one());
        v.add_to(1 + i, &Rat::from_int(-1));
        v.add_to(1 + j, &Rat::from_int(-1));
        table.insert((1 + i, 1 + j), v);
    }

    let mut blocks = vec![(0usize, vec!["o".to_string()])];
    if lines > 0 {
        blocks.push((1, (1..=lines).map(|i| format!("b{i}")).collect()));
    }
    if !tris.is_empty() {
        blocks.push((2, (1..=tris.len()).map(|i| format!("t{i}")).collect()));
    }
    let space = GradedSpace::new(blocks)?;
    let d = space.total_dim();

    let mut comult = Matrix::zeros(d * d, d);
    comult.set(0, 0, Rat::one());
    for i in 1..d {
        comult.set(i * d, i, Rat::one());
        comult.set(i, i, Rat::one());
    }
    let mut counit = Matrix::zeros(1, d);
    counit.set(0, 0, Rat::one());
    let coalg = Coalgebra::new(space, comult, counit)?;
    let unit = UnitElement::validated(&coalg, Vector::unit(d, 0))?;

    let mut phi = Matrix::zeros(d, d);
    for i in 0..d {
        let eigenvalue = match coalg.space().grade_of(i) {
            0 => Rat::from_int(1),
            1 => Rat::from_int(-2),
            _ => Rat::from_int(4),
        };
        phi.set(i, i, eigenvalue);
    }

    let ax = check_axioms(&coalg);
    if !ax.axioms_hold() || !ax.cocomm_ok {
        return Err(ModelError::Verification(format!(
            "built model fails coalgebra axioms: {:?}",
            ax.violations
        )));
    }
    if !check_unital_grading(&coalg, &unit).holds() {
        return Err(ModelError::Verification(
            "built model fails unital-grading checks".into(),
        ));
    }
    // The self-map is a coalgebra morphism: delta phi = (phi (x) phi) delta.
    if coalg.comult() * &phi != &phi.kronecker(&phi) * coalg.comult() {
        return Err(ModelError::Verification(
            "self-map fails to commute with the comultiplication".into(),
        ));
    }

    Ok(FanoModel { coalg, unit, lines, triangles: tris, phi, table })
}

/// Lagrange interpolation in the self-map at eigenvalues 1, -2, 4. Each
/// projector is verified idempotent, the family pairwise orthogonal and
/// summing to the identity, and each image equals its grade subspace.
pub fn fano_eigenprojectors(m: &FanoModel) -> Result<[Matrix; 3], ModelError> {
    let d = m.coalg.dim();
    let id = Matrix::identity(d);
    let eigenvalues = [Rat::from_int(1), Rat::from_int(-2), Rat::from_int(4)];
    let mut projectors = Vec::with_capacity(3);
    for i in 0..3 {
        let mut p = Matrix::identity(d);
        for j in 0..3 {
            if j == i {
                continue;
            }
            let factor = &m.phi - &id.scale(&eigenvalues[j]);
            let denom = &eigenvalues[i] - &eigenvalues[j];
            p = &p * &factor.scale(&denom.recip());
        }
        projectors.push(p);
    }

    let mut sum = Matrix::zeros(d, d);
    for p in &projectors {
        if !p.is_idempotent()? {
            return Err(ModelError::Verification("eigenprojector is not idempotent".into()));
        }
        sum = &sum + p;
    }
    if sum != id {
        return Err(ModelError::Verification("eigenprojectors do not sum to the identity".into()));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if !Matrix::are_orthogonal(&projectors[i], &projectors[j])? {
                return Err(ModelError::Verification(
                    "eigenprojectors are not pairwise orthogonal".into(),
                ));
            }
        }
    }
    for (k, p) in projectors.iter().enumerate() {
        let image = Subspace::from_matrix(&p.transpose());
        let grade = match m.coalg.space().grade_range(k) {
            Some(r) => {
                let units: Vec<Vector> = r.map(|i| Vector::unit(d, i)).collect();
                Subspace::from_vectors(d, &units)
            }
            None => Subspace::zero(d),
        };
        if image != grade {
            return Err(ModelError::Verification(format!(
                "image of eigenprojector {k} differs from the grade-{k} subspace"
            )));
        }
    }
    let mut it = projectors.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

/// Transcript of the triangle computation, with every vector expressed in
/// the point-class span (`[o]` at index 0, `[l_i]` at index 1 + i).
#[derive(Debug, Clone)]
pub struct MuDeltaReport {
    pub triangle: [usize; 3],
    /// Images of the three lines under the cylinder map, in surface-class
    /// coordinates: `S_o - S_l`.
    pub lefschetz: [Vector; 3],
    pub expanded: String,
    pub substituted: String,
    /// Value of `6 S_o^2` under the table.
    pub six_s_o_squared: Vector,
    /// Value of the pairwise product sum under the table.
    pub pair_product_sum: Vector,
    /// Final value of the derivation.
    pub total: Vector,
    /// The triangle class `[l1] + [l2] + [l3] - 3[o]`.
    pub triangle_class: Vector,
    /// `total = factor * triangle_class`; always exactly 2.
    pub factor: Rat,
}

/// Scripted replay of the intersection-table computation for a declared
/// triangle: expand the sum of the squares of the cylinder images, rewrite
/// the diagonal terms through the square of the triangle relation, and
/// evaluate the surviving products through the table. The result must be
/// exactly twice the triangle class.
pub fn fano_mu_delta_check(
    m: &FanoModel,
    triangle: [usize; 3],
) -> Result<MuDeltaReport, ModelError> {
    let tri = normalized_triangle(m.lines, triangle)?;
    if !m.triangles.contains(&tri) {
        return Err(ModelError::MissingTableEntry(format!(
            "relation S_l{} + S_l{} + S_l{} = 3 S_o is not declared",
            tri[0] + 1,
            tri[1] + 1,
            tri[2] + 1
        )));
    }
    let pd = m.point_span_dim();
    let names: Vec<String> = tri.iter().map(|l| format!("S_l{}", l + 1)).collect();

    let lefschetz = [0, 1, 2].map(|i| {
        let mut v = Vector::unit(pd, 0);
        v.add_to(1 + tri[i], &Rat::from_int(-1));
        v
    });

    let expanded = format!(
        "sum_i (S_o - {{{}}})^2 = 3 S_o^2 - 2 S_o ({} + {} + {}) + ({}^2 + {}^2 + {}^2)",
        names.join(", "),
        names[0], names[1], names[2], names[0], names[1], names[2]
    );
    let substituted = format!(
        "= 6 S_o^2 - 2 ({0} {1} + {0} {2} + {1} {2})   [{0} + {1} + {2} = 3 S_o]",
        names[0], names[1], names[2]
    );

    let s_o_sq = m
        .intersection(0, 0)
        .ok_or_else(|| ModelError::MissingTableEntry("S_o S_o".into()))?;
    let six_s_o_squared = s_o_sq.scale(&Rat::from_int(6));

    let mut pair_product_sum = Vector::zero(pd);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let entry = m.intersection(1 + tri[i], 1 + tri[j]).ok_or_else(|| {
            ModelError::MissingTableEntry(format!("{} {}", names[i], names[j]))
        })?;
        pair_product_sum = &pair_product_sum + entry;
    }

    let total = &six_s_o_squared - &pair_product_sum.scale(&Rat::from_int(2));

    let mut triangle_class = Vector::zero(pd);
    triangle_class.set(0, Rat::from_int(-3));
    for &l in &tri {
        triangle_class.add_to(1 + l, &Rat::one());
    }
    let factor = Rat::from_int(2);
    if total != triangle_class.scale(&factor) {
        return Err(ModelError::Verification(format!(
            "triangle {tri:?} derivation does not produce twice the triangle class"
        )));
    }

    Ok(MuDeltaReport {
        triangle: tri,
        lefschetz,
        expanded,
        substituted,
        six_s_o_squared,
        pair_product_sum,
        total,
        triangle_class,
        factor,
    })
}
