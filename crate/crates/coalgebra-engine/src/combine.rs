use crate::coalgebra::{check_axioms, is_unit, Coalgebra, UnitElement};
use crate::space::GradedSpace;
use crate::tensor_ops::{apply_on_factor, columns_of};
use crate::{CoalgError, TensorCap};
use exact_linear::{Matrix, Rat, Vector};

/// Tensor product of two coalgebras: the comultiplication is the factorwise
/// one followed by the middle swap, the counit is the product of counits,
/// and the basis is regrouped into total-grade blocks. `to_lex` records, for
/// every position in the regrouped basis, the pair index `i1*d2 + i2` it
/// came from, so callers can transport factor-level data.
#[derive(Debug)]
pub struct TensorProductCoalgebra {
    pub coalg: Coalgebra,
    pub unit: Option<UnitElement>,
    pub to_lex: Vec<usize>,
}

pub fn tensor_coalgebra(
    c1: &Coalgebra,
    u1: Option<&UnitElement>,
    c2: &Coalgebra,
    u2: Option<&UnitElement>,
    cap: TensorCap,
) -> Result<TensorProductCoalgebra, CoalgError> {
    let (d1, d2) = (c1.dim(), c2.dim());
    let d = d1 * d2;
    cap.admit(d * d, d)?;

    // Pairs in lexicographic order, stably sorted by total grade; the sort
    // keeps lexicographic order inside each grade block.
    let mut pairs: Vec<(usize, usize)> =
        (0..d1).flat_map(|i1| (0..d2).map(move |i2| (i1, i2))).collect();
    pairs.sort_by_key(|&(i1, i2)| c1.space().grade_of(i1) + c2.space().grade_of(i2));
    let to_lex: Vec<usize> = pairs.iter().map(|&(i1, i2)| i1 * d2 + i2).collect();
    let mut from_lex = vec![0usize; d];
    for (pos, &lex) in to_lex.iter().enumerate() {
        from_lex[lex] = pos;
    }

    let mut blocks: Vec<(usize, Vec<String>)> = Vec::new();
    for &(i1, i2) in &pairs {
        let grade = c1.space().grade_of(i1) + c2.space().grade_of(i2);
        let label = format!("{}(x){}", c1.space().label(i1), c2.space().label(i2));
        match blocks.last_mut() {
            Some((g, ls)) if *g == grade => ls.push(label),
            _ => blocks.push((grade, vec![label])),
        }
    }
    let space = GradedSpace::new(blocks)?;

    // Column for the pair (i1, i2): middle-swap of (delta1 e_i1) (x) (delta2 e_i2),
    // re-indexed into the regrouped basis on both tensor legs.
    let mut comult = Matrix::zeros(d * d, d);
    for (pos, &(i1, i2)) in pairs.iter().enumerate() {
        let w1 = c1.comult().column(i1);
        let w2 = c2.comult().column(i2);
        for (x, cx) in w1.iter() {
            let (a, b) = (x / d1, x % d1);
            for (y, cy) in w2.iter() {
                let (p, q) = (y / d2, y % d2);
                let row = from_lex[a * d2 + p] * d + from_lex[b * d2 + q];
                comult.add_to(row, pos, &(cx * cy));
            }
        }
    }

    let mut counit = Matrix::zeros(1, d);
    for (pos, &(i1, i2)) in pairs.iter().enumerate() {
        let e = &c1.counit().get(0, i1) * &c2.counit().get(0, i2);
        if !e.is_zero() {
            counit.set(0, pos, e);
        }
    }

    let coalg = Coalgebra::new(space, comult, counit)?;
    let report = check_axioms(&coalg);
    if !report.axioms_hold() {
        return Err(CoalgError::CrossCheckFailed(format!(
            "tensor product violates the axioms: {}",
            report.violations.join("; ")
        )));
    }

    let unit = match (u1, u2) {
        (Some(a), Some(b)) => {
            let lex = a.vector().tensor(b.vector());
            let mut v = Vector::zero(d);
            for (idx, x) in lex.iter() {
                v.add_to(from_lex[idx], x);
            }
            Some(UnitElement::validated(&coalg, v)?)
        }
        _ => None,
    };

    Ok(TensorProductCoalgebra { coalg, unit, to_lex })
}

const GROUP_ORDER_CAP: usize = 4096;

/// Invariant subcoalgebra under a finite group of coalgebra automorphisms.
/// The group is the closure of the supplied generators; each generator must
/// be invertible, grade-preserving, and intertwine comultiplication and
/// counit. The averaging idempotent `e` is verified to commute with the
/// comultiplication in the averaged sense before anything is restricted,
/// and the restricted structure maps are re-checked against the axioms.
#[derive(Debug)]
pub struct InvariantSubcoalgebra {
    pub coalg: Coalgebra,
    /// Columns are the invariant basis vectors in ambient coordinates.
    pub inclusion: Matrix,
    /// Coordinates with respect to the invariant basis; valid on the image
    /// of the averaging idempotent (always composed behind it here).
    pub projection: Matrix,
    /// The averaging idempotent in ambient coordinates.
    pub averaging: Matrix,
    pub group_order: usize,
}

impl InvariantSubcoalgebra {
    /// Average an ambient element into the subcoalgebra's coordinates.
    pub fn transport(&self, v: &Vector) -> Vector {
        self.projection.apply(&self.averaging.apply(v))
    }

    /// The transported unit, validated for the subcoalgebra. The average of
    /// a unit is always a unit of the invariant subcoalgebra.
    pub fn unit_from(&self, u: &UnitElement) -> Result<UnitElement, CoalgError> {
        UnitElement::validated(&self.coalg, self.transport(u.vector()))
    }
}

pub fn invariant_subcoalgebra(
    c: &Coalgebra,
    action: &[Matrix],
) -> Result<InvariantSubcoalgebra, CoalgError> {
    let d = c.dim();
    let delta_cols = columns_of(c.comult());

    for (gi, g) in action.iter().enumerate() {
        if g.rows() != d || g.cols() != d {
            return Err(CoalgError::Shape(format!(
                "generator {gi} is {}x{}, expected {d}x{d}",
                g.rows(),
                g.cols()
            )));
        }
        if g.rank() != d {
            return Err(CoalgError::NotAutomorphism(format!("generator {gi} is singular")));
        }
        for (r, col, _) in g.entries() {
            if c.space().grade_of(r) != c.space().grade_of(col) {
                return Err(CoalgError::NotAutomorphism(format!(
                    "generator {gi} does not preserve the grading"
                )));
            }
        }
        let g_cols = columns_of(g);
        for j in 0..d {
            let lhs = c.comult().apply(&g.column(j));
            let w = c.comult().apply(&Vector::unit(d, j));
            let w = apply_on_factor(&g_cols, d, &w, &[d, d], 0);
            let rhs = apply_on_factor(&g_cols, d, &w, &[d, d], 1);
            if lhs != rhs {
                return Err(CoalgError::NotAutomorphism(format!(
                    "generator {gi} does not intertwine the comultiplication on {}",
                    c.space().label(j)
                )));
            }
            if c.counit_of(&g.column(j)) != c.counit().get(0, j) {
                return Err(CoalgError::NotAutomorphism(format!(
                    "generator {gi} does not preserve the counit on {}",
                    c.space().label(j)
                )));
            }
        }
    }

    // Closure under multiplication starting from the identity.
    let mut group: Vec<Matrix> = vec![Matrix::identity(d)];
    let mut frontier: Vec<Matrix> = vec![Matrix::identity(d)];
    while let Some(g) = frontier.pop() {
        for gen in action {
            let h = &g * gen;
            if !group.contains(&h) {
                if group.len() >= GROUP_ORDER_CAP {
                    return Err(CoalgError::GroupClosureExceeded { cap: GROUP_ORDER_CAP });
                }
                group.push(h.clone());
                frontier.push(h);
            }
        }
    }
    let order = group.len();

    let weight = Rat::from_int(order as i64).recip();
    let mut averaging = Matrix::zeros(d, d);
    for g in &group {
        averaging = &averaging + g;
    }
    let averaging = averaging.scale(&weight);
    if !averaging.is_idempotent()? {
        return Err(CoalgError::CrossCheckFailed("averaging map is not idempotent".into()));
    }

    // delta . e must equal the average of (g (x) g) . delta over the group.
    for (j, delta_col) in delta_cols.iter().enumerate() {
        let lhs = c.comult().apply(&averaging.column(j));
        let mut rhs = Vector::zero(d * d);
        for g in &group {
            let g_cols = columns_of(g);
            let mut w = Vector::zero(d * d);
            for (r, x) in delta_col {
                w.add_to(*r, x);
            }
            let w = apply_on_factor(&g_cols, d, &w, &[d, d], 0);
            let w = apply_on_factor(&g_cols, d, &w, &[d, d], 1);
            for (r, x) in w.iter() {
                rhs.add_to(r, &(x * &weight));
            }
        }
        if lhs != rhs {
            return Err(CoalgError::CrossCheckFailed(
                "averaging map does not commute with the comultiplication in the averaged sense"
                    .into(),
            ));
        }
    }

    // Invariant basis per grade block: the averaging map preserves grades,
    // so its image decomposes blockwise. Echelon bases make the projection
    // a pivot-coordinate extraction.
    let mut blocks: Vec<(usize, Vec<String>)> = Vec::new();
    let mut inclusion_cols: Vec<Vector> = Vec::new();
    let mut projection_rows: Vec<Vector> = Vec::new();
    for (grade, labels) in c.space().blocks() {
        let range = c.space().grade_range(*grade).expect("block exists");
        let block_dim = labels.len();
        let mut restricted = Matrix::zeros(block_dim, block_dim);
        for (col, j) in range.clone().enumerate() {
            let v = averaging.column(j);
            for (i, x) in v.iter() {
                assert!(range.contains(&i), "averaging map is grade-preserving");
                restricted.set(i - range.start, col, x.clone());
            }
        }
        let (echelon, pivots) = restricted.transpose().rref_with_pivots();
        if pivots.is_empty() {
            continue;
        }
        let mut vs = Vec::new();
        for (row, &pivot) in pivots.iter().enumerate() {
            let mut incl = Vector::zero(d);
            for (i, x) in echelon.row_iter(row) {
                incl.add_to(range.start + i, x);
            }
            inclusion_cols.push(incl);
            projection_rows.push(Vector::unit(d, range.start + pivot));
            vs.push(format!("inv{}_{}", grade, row + 1));
        }
        blocks.push((*grade, vs));
    }
    if blocks.is_empty() {
        return Err(CoalgError::BadSpace("invariant subspace is zero".into()));
    }
    let space = GradedSpace::new(blocks)?;
    let m = inclusion_cols.len();

    let mut inclusion = Matrix::zeros(d, m);
    for (j, v) in inclusion_cols.iter().enumerate() {
        inclusion.set_column(j, v);
    }
    let projection = Matrix::from_row_vectors(d, &projection_rows);

    // Delta_G = (proj e (x) proj e) . delta . incl, streamed per column.
    let pe = &projection * &averaging;
    let pe_cols = columns_of(&pe);
    let mut comult = Matrix::zeros(m * m, m);
    for j in 0..m {
        let w = c.comult().apply(&inclusion.column(j));
        let w = apply_on_factor(&pe_cols, m, &w, &[d, d], 0);
        let w = apply_on_factor(&pe_cols, m, &w, &[m, d], 1);
        comult.set_column(j, &w);
    }
    let counit = c.counit() * &inclusion;

    let coalg = Coalgebra::new(space, comult, counit)?;
    let report = check_axioms(&coalg);
    if !report.axioms_hold() {
        return Err(CoalgError::CrossCheckFailed(format!(
            "invariant subcoalgebra violates the axioms: {}",
            report.violations.join("; ")
        )));
    }

    Ok(InvariantSubcoalgebra { coalg, inclusion, projection, averaging, group_order: order })
}

/// Direct sum with a single primitive line in a positive grade: the new
/// basis vector x satisfies `delta x = x (x) u + u (x) x` and `eps x = 0`.
/// This is the canonical way to break strictness while keeping the axioms
/// and the unital grading intact.
pub fn adjoin_primitive_line(
    c: &Coalgebra,
    u: &UnitElement,
    grade: usize,
    label: &str,
) -> Result<(Coalgebra, UnitElement), CoalgError> {
    if grade == 0 {
        return Err(CoalgError::Precondition(
            "adjoining in grade 0 would break the unital grading".into(),
        ));
    }
    if !is_unit(c, u.vector()) {
        return Err(CoalgError::NotAUnit("adjoining needs a unit for this coalgebra".into()));
    }
    let d = c.dim();
    let nd = d + 1;

    // New block layout: x goes at the end of its grade block, or into a
    // fresh block kept in ascending grade order.
    let mut blocks = c.space().blocks().to_vec();
    let mut placed = false;
    for (g, labels) in blocks.iter_mut() {
        if *g == grade {
            labels.push(label.to_string());
            placed = true;
            break;
        }
    }
    if !placed {
        let at = blocks.partition_point(|(g, _)| *g < grade);
        blocks.insert(at, (grade, vec![label.to_string()]));
    }
    let space = GradedSpace::new(blocks)?;
    let x_new = space.index_of_label(label).expect("just inserted");
    // Old index -> new index: indices at or past the insertion point shift.
    let remap = |i: usize| if i >= x_new { i + 1 } else { i };

    let mut comult = Matrix::zeros(nd * nd, nd);
    for (r, j, v) in c.comult().entries() {
        let (p, q) = (r / d, r % d);
        comult.add_to(remap(p) * nd + remap(q), remap(j), v);
    }
    for (i, x) in u.vector().iter() {
        comult.add_to(x_new * nd + remap(i), x_new, x);
        comult.add_to(remap(i) * nd + x_new, x_new, x);
    }

    let mut counit = Matrix::zeros(1, nd);
    for (_, j, v) in c.counit().entries() {
        counit.set(0, remap(j), v.clone());
    }

    let coalg = Coalgebra::new(space, comult, counit)?;
    let report = check_axioms(&coalg);
    if !report.axioms_hold() {
        return Err(CoalgError::CrossCheckFailed(format!(
            "adjoined primitive line violates the axioms: {}",
            report.violations.join("; ")
        )));
    }

    let mut unit_vec = Vector::zero(nd);
    for (i, x) in u.vector().iter() {
        unit_vec.add_to(remap(i), x);
    }
    let unit = UnitElement::validated(&coalg, unit_vec)?;
    Ok((coalg, unit))
}
