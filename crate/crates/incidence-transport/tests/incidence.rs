use coalgebra_engine::{Coalgebra, GradedSpace, TensorCap, UnitElement};
use exact_linear::{Matrix, Rat, Subspace, Vector};
use incidence_transport::{
    check_condition_i, check_condition_ii, comult_square, fiber_compose, gamma_maps,
    product_variety, transport_grading, zero_cycle_coalgebra, Cover, FiniteVariety,
    IncidenceError, Side,
};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn relation(n: usize, plus: usize, minus: usize) -> Vector {
    let mut v = Vector::zero(n);
    v.add_to(plus, &Rat::one());
    v.add_to(minus, &-Rat::one());
    v
}

/// Two points mapping to one target point each, fiber-constant phi: the
/// simplest passing double cover.
fn passing_double_cover() -> Cover {
    let gamma = FiniteVariety::relation_free(labels(&["g1", "g2", "g3", "g4"])).unwrap();
    let x = FiniteVariety::relation_free(labels(&["x1", "x2"])).unwrap();
    let y = FiniteVariety::relation_free(labels(&["y1", "y2"])).unwrap();
    let phi = vec![(0, 1), (0, 1), (1, 1), (1, 1)];
    let psi = vec![(0, 1), (0, 1), (1, 1), (1, 1)];
    Cover::new(gamma, x, y, phi, psi).unwrap()
}

/// Same shape but psi-fibers mix the two phi-images, and nothing makes
/// them equivalent: the canonical failing cover.
fn failing_double_cover() -> Cover {
    let gamma = FiniteVariety::relation_free(labels(&["g1", "g2", "g3", "g4"])).unwrap();
    let x = FiniteVariety::relation_free(labels(&["x1", "x2"])).unwrap();
    let y = FiniteVariety::relation_free(labels(&["y1", "y2"])).unwrap();
    let phi = vec![(0, 1), (0, 1), (1, 1), (1, 1)];
    let psi = vec![(0, 1), (1, 1), (0, 1), (1, 1)];
    Cover::new(gamma, x, y, phi, psi).unwrap()
}

#[test]
fn variety_quotient_and_degree() {
    let v = FiniteVariety::new(
        labels(&["x1", "x2", "x3", "x4"]),
        &[relation(4, 0, 1), relation(4, 1, 2)],
    )
    .unwrap();
    assert_eq!(v.ch0_dim(), 2);
    assert_eq!(v.class_labels(), &["x3".to_string(), "x4".to_string()]);
    // x1 and x2 both collapse onto the x3 class.
    assert_eq!(v.class_of_point(0), Vector::from_ints(&[1, 0]));
    assert_eq!(v.class_of_point(1), Vector::from_ints(&[1, 0]));
    assert_eq!(v.class_of_point(3), Vector::from_ints(&[0, 1]));
    // Degree descends: a cycle's degree is its class's degree.
    let cycle = Vector::from_ints(&[2, -1, 0, 3]);
    assert_eq!(v.degree(&v.class_of(&cycle)), Rat::from_int(4));
    // Representatives map back onto their own classes.
    let class = Vector::from_ints(&[5, -2]);
    assert_eq!(v.class_of(&v.representative(&class)), class);
}

#[test]
fn variety_rejects_bad_input() {
    let dup = FiniteVariety::relation_free(labels(&["p", "p"]));
    assert!(matches!(dup, Err(IncidenceError::BadVariety(_))));

    let mut nonzero_sum = Vector::zero(2);
    nonzero_sum.add_to(0, &Rat::one());
    nonzero_sum.add_to(1, &Rat::one());
    let bad = FiniteVariety::new(labels(&["p", "q"]), &[nonzero_sum]);
    assert!(matches!(bad, Err(IncidenceError::BadVariety(_))));

    let wrong_dim = FiniteVariety::new(labels(&["p", "q"]), &[relation(3, 0, 1)]);
    assert!(matches!(wrong_dim, Err(IncidenceError::BadVariety(_))));
}

#[test]
fn cover_rejects_bad_maps() {
    let v = FiniteVariety::relation_free(labels(&["p", "q"])).unwrap();
    let gamma = FiniteVariety::relation_free(labels(&["g1", "g2"])).unwrap();

    let unequal = Cover::new(
        gamma.clone(),
        v.clone(),
        v.clone(),
        vec![(0, 1), (0, 1)],
        vec![(0, 1), (1, 1)],
    );
    assert!(matches!(unequal, Err(IncidenceError::FiberDegreeMismatch(_))));

    let zero_mult = Cover::new(
        gamma.clone(),
        v.clone(),
        v.clone(),
        vec![(0, 1), (1, 0)],
        vec![(0, 1), (1, 1)],
    );
    assert!(matches!(zero_mult, Err(IncidenceError::BadCover(_))));

    let out_of_range = Cover::new(
        gamma,
        v.clone(),
        v.clone(),
        vec![(0, 1), (7, 1)],
        vec![(0, 1), (1, 1)],
    );
    assert!(matches!(out_of_range, Err(IncidenceError::BadCover(_))));
}

#[test]
fn identity_cover_is_neutral() {
    let v = FiniteVariety::new(labels(&["p", "q", "r"]), &[relation(3, 0, 1)]).unwrap();
    let c = Cover::identity(&v).unwrap();
    assert_eq!(c.deg_phi, 1);
    let id = Matrix::identity(v.ch0_dim());
    assert_eq!(c.pushforward(Side::Phi).unwrap(), id);
    assert_eq!(c.pullback(Side::Psi).unwrap(), id);

    let maps = gamma_maps(&c).unwrap();
    assert_eq!(maps.gamma, id);
    assert_eq!(maps.gamma_prime, id);
    assert!(comult_square(&c, 1024).unwrap().commutes);

    // Composing any cover with the identity changes nothing.
    let double = passing_double_cover();
    let idy = Cover::identity(&double.target).unwrap();
    let composed = fiber_compose(&double, &idy).unwrap().expect("nonempty");
    assert_eq!(composed.deg_phi, double.deg_phi);
    assert_eq!(composed.deg_psi, double.deg_psi);
    assert_eq!(composed.phi(), double.phi());
    assert_eq!(
        composed.psi().iter().map(|&(i, _)| i).collect::<Vec<_>>(),
        double.psi().iter().map(|&(i, _)| i).collect::<Vec<_>>()
    );
}

#[test]
fn double_cover_projection_formula() {
    let c = failing_double_cover();
    let push = c.pushforward(Side::Phi).unwrap();
    let pull = c.pullback(Side::Phi).unwrap();
    assert_eq!(&push * &pull, Matrix::identity(2).scale(&Rat::from_int(2)));
    assert_eq!(
        pull,
        Matrix::from_int_rows(&[vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]])
    );
}

#[test]
fn fiber_constant_cover_passes_everything() {
    let c = passing_double_cover();
    let i = check_condition_i(&c).unwrap();
    let ii = check_condition_ii(&c).unwrap();
    assert!(i.holds && ii.holds);
    assert!(i.witness.is_none());

    let maps = gamma_maps(&c).unwrap();
    assert_eq!(maps.gamma, Matrix::identity(2));
    assert_eq!(maps.gamma_prime, Matrix::identity(2));
    assert!(comult_square(&c, 1024).unwrap().commutes);
}

#[test]
fn mixing_cover_fails_with_witness() {
    let c = failing_double_cover();
    let i = check_condition_i(&c).unwrap();
    let ii = check_condition_ii(&c).unwrap();
    assert!(!i.holds && !ii.holds);
    let w = i.witness.expect("failing cover has a witness");
    assert_eq!(w.base, "y1");
    assert_eq!(w.first, "g1");
    assert_eq!(w.second, "g3");
    assert!(ii.witness.is_some());

    match gamma_maps(&c) {
        Err(IncidenceError::ConditionFails(msg)) => {
            assert!(msg.contains("y1"), "witness missing from {msg}")
        }
        other => panic!("expected the fiber condition to fail, got {other:?}"),
    }
}

#[test]
fn declared_relations_rescue_the_fiber_condition() {
    // psi merges both points into one fiber; phi sends them to two
    // different X points. Without relations that fails; declaring the two
    // X points rationally equivalent makes it pass.
    let build = |with_relation: bool| {
        let gamma = FiniteVariety::relation_free(labels(&["g1", "g2"])).unwrap();
        let rels = if with_relation {
            vec![relation(2, 0, 1)]
        } else {
            Vec::new()
        };
        let x = FiniteVariety::new(labels(&["x1", "x2"]), &rels).unwrap();
        let y = FiniteVariety::relation_free(labels(&["y"])).unwrap();
        Cover::new(gamma, x, y, vec![(0, 1), (1, 1)], vec![(0, 1), (0, 1)]).unwrap()
    };

    let bare = build(false);
    assert!(!check_condition_i(&bare).unwrap().holds);
    assert!(!check_condition_ii(&bare).unwrap().holds);

    let glued = build(true);
    assert!(check_condition_i(&glued).unwrap().holds);
    assert!(check_condition_ii(&glued).unwrap().holds);

    // The gamma maps still need the pullback to respect relations, which
    // the bare correspondence does not.
    assert!(matches!(
        gamma_maps(&glued),
        Err(IncidenceError::RelationNotPreserved(_))
    ));
}

#[test]
fn pushforward_rejects_unmatched_relations() {
    let gamma = FiniteVariety::new(labels(&["g1", "g2"]), &[relation(2, 0, 1)]).unwrap();
    let x = FiniteVariety::relation_free(labels(&["x1", "x2"])).unwrap();
    let y = FiniteVariety::relation_free(labels(&["y"])).unwrap();
    let c = Cover::new(gamma, x, y, vec![(0, 1), (1, 1)], vec![(0, 1), (0, 1)]).unwrap();
    assert!(matches!(
        c.pushforward(Side::Phi),
        Err(IncidenceError::RelationNotPreserved(_))
    ));
}

#[test]
fn relations_on_both_sides_support_the_full_suite() {
    let gamma = FiniteVariety::new(labels(&["g1", "g2"]), &[relation(2, 0, 1)]).unwrap();
    let x = FiniteVariety::new(labels(&["x1", "x2"]), &[relation(2, 0, 1)]).unwrap();
    let y = FiniteVariety::relation_free(labels(&["y"])).unwrap();
    let c = Cover::new(gamma, x, y, vec![(0, 2), (1, 2)], vec![(0, 1), (0, 3)]).unwrap();
    assert_eq!(c.deg_phi, 2);
    assert_eq!(c.deg_psi, 4);

    // Pullback doubles along phi, and the projection formula closes.
    assert_eq!(c.pullback(Side::Phi).unwrap(), Matrix::from_int_rows(&[vec![2]]));
    assert_eq!(c.pushforward(Side::Phi).unwrap(), Matrix::from_int_rows(&[vec![1]]));

    assert!(check_condition_i(&c).unwrap().holds);
    let maps = gamma_maps(&c).unwrap();
    assert_eq!(maps.gamma, Matrix::identity(1));
    assert_eq!(maps.gamma_prime, Matrix::identity(1));
    assert!(comult_square(&c, 1024).unwrap().commutes);
}

#[test]
fn composition_multiplies_degrees() {
    let c1 = passing_double_cover();
    // A second double cover from c1's target into a fresh two-point base.
    let gamma = FiniteVariety::relation_free(labels(&["h1", "h2", "h3", "h4"])).unwrap();
    let z = FiniteVariety::relation_free(labels(&["z1", "z2"])).unwrap();
    let c2 = Cover::new(
        gamma,
        c1.target.clone(),
        z,
        vec![(0, 1), (0, 1), (1, 1), (1, 1)],
        vec![(0, 1), (0, 1), (1, 1), (1, 1)],
    )
    .unwrap();

    let composite = fiber_compose(&c1, &c2).unwrap().expect("nonempty");
    assert_eq!(composite.deg_phi, 4);
    assert_eq!(composite.deg_psi, 4);
    assert_eq!(composite.gamma.point_count(), 8);
    assert!(check_condition_i(&composite).unwrap().holds);
    assert!(check_condition_ii(&composite).unwrap().holds);
    assert!(gamma_maps(&composite).is_ok());
}

#[test]
fn composition_requires_shared_middle() {
    let c1 = passing_double_cover();
    let other = FiniteVariety::relation_free(labels(&["w1", "w2"])).unwrap();
    let c2 = Cover::identity(&other).unwrap();
    assert!(matches!(
        fiber_compose(&c1, &c2),
        Err(IncidenceError::BadCover(_))
    ));
}

#[test]
fn empty_fiber_product_is_reported() {
    let empty = FiniteVariety::relation_free(Vec::new()).unwrap();
    let c = Cover::new(empty.clone(), empty.clone(), empty.clone(), Vec::new(), Vec::new())
        .unwrap();
    assert!(fiber_compose(&c, &c).unwrap().is_none());
}

#[test]
fn product_cap_is_enforced() {
    let c = passing_double_cover();
    assert!(matches!(
        comult_square(&c, 3),
        Err(IncidenceError::ProductTooLarge { needed: 4, cap: 3 })
    ));
    let x = FiniteVariety::relation_free(labels(&["p", "q", "r"])).unwrap();
    assert!(matches!(
        product_variety(&x, &x, 8),
        Err(IncidenceError::ProductTooLarge { needed: 9, cap: 8 })
    ));
}

#[test]
fn product_variety_tensors_the_classes() {
    let a = FiniteVariety::new(labels(&["p", "q", "r"]), &[relation(3, 0, 1)]).unwrap();
    let product = product_variety(&a, &a, 64).unwrap();
    assert_eq!(product.point_count(), 9);
    assert_eq!(product.ch0_dim(), 4);
    // The pair of glued points lands on the same class as the pair of
    // their replacements.
    let pq = product.point_index("(p,q)").unwrap();
    let qq = product.point_index("(q,q)").unwrap();
    assert_eq!(product.class_of_point(pq), product.class_of_point(qq));
}

#[test]
fn zero_cycle_classes_are_group_like() {
    let v = FiniteVariety::new(labels(&["x1", "x2", "x3"]), &[relation(3, 0, 1)]).unwrap();
    let (coalg, unit) = zero_cycle_coalgebra(&v, 0).unwrap();
    assert_eq!(coalg.dim(), 2);
    for p in 0..v.point_count() {
        let class = v.class_of_point(p);
        assert_eq!(coalg.comult().apply(&class), class.tensor(&class));
        assert_eq!(coalg.counit_of(&class), Rat::one());
    }
    assert_eq!(unit.vector(), &v.class_of_point(0));
    assert!(matches!(
        zero_cycle_coalgebra(&v, 9),
        Err(IncidenceError::BadVariety(_))
    ));
}

/// Three basis elements: a group-like unit and two primitives over it.
fn small_graded_model() -> (Coalgebra, UnitElement) {
    let space = GradedSpace::new(vec![
        (0, vec!["o".to_string()]),
        (1, vec!["a1".to_string(), "a2".to_string()]),
    ])
    .unwrap();
    let mut comult = Matrix::zeros(9, 3);
    comult.set(0, 0, Rat::one());
    comult.set(3, 1, Rat::one());
    comult.set(1, 1, Rat::one());
    comult.set(6, 2, Rat::one());
    comult.set(2, 2, Rat::one());
    let counit = Matrix::from_int_rows(&[vec![1, 0, 0]]);
    let coalg = Coalgebra::new(space, comult, counit).unwrap();
    let unit = UnitElement::validated(&coalg, Vector::unit(3, 0)).unwrap();
    (coalg, unit)
}

/// The conjugate structure of a model under an invertible map, patched
/// onto an ungraded space: the shape a "moduli side" model arrives in.
fn conjugated_target(source: &Coalgebra, iso: &Matrix, inv: &Matrix) -> Coalgebra {
    let d = source.dim();
    let space =
        GradedSpace::ungraded((0..d).map(|i| format!("b{i}")).collect()).unwrap();
    let comult = &(&iso.kronecker(iso) * source.comult()) * inv;
    let counit = source.counit() * inv;
    Coalgebra::new(space, comult, counit).unwrap()
}

#[test]
fn transport_along_identity_and_permutation() {
    let (source, unit) = small_graded_model();
    let id = Matrix::identity(3);
    let target = conjugated_target(&source, &id, &id);
    let report = transport_grading(&source, &unit, &target, &id, &id, TensorCap::default())
        .unwrap();
    assert!(report.coradical_matches);
    assert_eq!(report.grade_images.len(), 2);
    assert!(report.grade_images[0].1.contains(&Vector::unit(3, 0)));

    // Cycle the basis: the unit moves to position 1.
    let mut perm = Matrix::zeros(3, 3);
    perm.set(1, 0, Rat::one());
    perm.set(2, 1, Rat::one());
    perm.set(0, 2, Rat::one());
    let perm_inv = perm.transpose();
    let target = conjugated_target(&source, &perm, &perm_inv);
    let report =
        transport_grading(&source, &unit, &target, &perm, &perm_inv, TensorCap::default())
            .unwrap();
    assert!(report.coradical_matches);
    assert_eq!(report.grade_images[0].1, Subspace::from_vectors(3, &[Vector::unit(3, 1)]));
    let grade1 = Subspace::from_vectors(3, &[Vector::unit(3, 2), Vector::unit(3, 0)]);
    assert_eq!(report.grade_images[1].1, grade1);
    assert_eq!(report.transported.comult(), source.comult());
}

#[test]
fn transport_rejects_defective_isos() {
    let (source, unit) = small_graded_model();
    let id = Matrix::identity(3);
    let target = conjugated_target(&source, &id, &id);

    let zero = Matrix::zeros(3, 3);
    assert!(matches!(
        transport_grading(&source, &unit, &target, &zero, &zero, TensorCap::default()),
        Err(IncidenceError::NotInvertible(_))
    ));

    // A target where b2 picks up a divided-square term is a perfectly valid
    // coalgebra, but the identity does not intertwine the comultiplications.
    let mut broken = Matrix::zeros(9, 3);
    broken.set(0, 0, Rat::one());
    broken.set(3, 1, Rat::one());
    broken.set(1, 1, Rat::one());
    broken.set(6, 2, Rat::one());
    broken.set(2, 2, Rat::one());
    broken.set(4, 2, Rat::from_int(2));
    let counit = Matrix::from_int_rows(&[vec![1, 0, 0]]);
    let space = GradedSpace::ungraded(vec!["b0".into(), "b1".into(), "b2".into()]).unwrap();
    let bad = Coalgebra::new(space, broken, counit).unwrap();
    assert!(matches!(
        transport_grading(&source, &unit, &bad, &id, &id, TensorCap::default()),
        Err(IncidenceError::NotCoalgebraMorphism(_))
    ));
}

#[test]
fn cover_gamma_acts_as_transport_iso() {
    // A relabeling cover: three points upstairs, phi the identity, psi a
    // cyclic relabeling. Its gamma maps are mutually inverse permutations.
    let x = FiniteVariety::relation_free(labels(&["x1", "x2", "x3"])).unwrap();
    let y = FiniteVariety::relation_free(labels(&["y1", "y2", "y3"])).unwrap();
    let gamma_v = FiniteVariety::relation_free(labels(&["g1", "g2", "g3"])).unwrap();
    let c = Cover::new(
        gamma_v,
        x,
        y,
        vec![(0, 1), (1, 1), (2, 1)],
        vec![(1, 1), (2, 1), (0, 1)],
    )
    .unwrap();
    let maps = gamma_maps(&c).unwrap();
    assert_eq!(&maps.gamma * &maps.gamma_prime, Matrix::identity(3));

    let (source, unit) = small_graded_model();
    let target = conjugated_target(&source, &maps.gamma, &maps.gamma_prime);
    let report = transport_grading(
        &source,
        &unit,
        &target,
        &maps.gamma,
        &maps.gamma_prime,
        TensorCap::default(),
    )
    .unwrap();
    assert!(report.coradical_matches);
    // The unit rides the relabeling: x1's slot moves to y2's.
    assert_eq!(
        report.grade_images[0].1,
        Subspace::from_vectors(3, &[Vector::unit(3, 1)])
    );

    // The same pair transports the class coalgebra of a glued variety.
    let glued_x = FiniteVariety::new(labels(&["p", "q"]), &[relation(2, 0, 1)]).unwrap();
    let glued_gamma = FiniteVariety::new(labels(&["g1", "g2"]), &[relation(2, 0, 1)]).unwrap();
    let point = FiniteVariety::relation_free(labels(&["z"])).unwrap();
    let small = Cover::new(
        glued_gamma,
        glued_x.clone(),
        point.clone(),
        vec![(0, 1), (1, 1)],
        vec![(0, 1), (0, 1)],
    )
    .unwrap();
    let small_maps = gamma_maps(&small).unwrap();
    let (src, src_unit) = zero_cycle_coalgebra(&glued_x, 0).unwrap();
    let (tgt, _) = zero_cycle_coalgebra(&point, 0).unwrap();
    let report = transport_grading(
        &src,
        &src_unit,
        &tgt,
        &small_maps.gamma,
        &small_maps.gamma_prime,
        TensorCap::default(),
    )
    .unwrap();
    assert!(report.coradical_matches);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    /// A passing cover onto `x`: the fresh target has `t` fibers per
    /// source point, every psi-fiber has `k` points with multiplicities
    /// summing to `k + extra`, and phi is constant on each fiber.
    fn make_passing_cover(x: &FiniteVariety, t: usize, k: usize, extra: u64, tag: &str) -> Cover {
        let nx = x.point_count();
        let ny = nx * t;
        let y = FiniteVariety::relation_free(
            (0..ny).map(|i| format!("{tag}y{i}")).collect(),
        )
        .unwrap();
        let mut gamma_labels = Vec::new();
        let mut phi = Vec::new();
        let mut psi = Vec::new();
        for yi in 0..ny {
            for j in 0..k {
                gamma_labels.push(format!("{tag}g{yi}_{j}"));
                phi.push((yi % nx, 1));
                let mult = if j == 0 { 1 + extra } else { 1 };
                psi.push((yi, mult));
            }
        }
        let gamma = FiniteVariety::relation_free(gamma_labels).unwrap();
        Cover::new(gamma, x.clone(), y, phi, psi).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn passing_covers_never_fail_the_square(
            nx in 1usize..=2,
            t in 1usize..=2,
            k in 1usize..=2,
            extra in 0u64..=2,
        ) {
            let x = FiniteVariety::relation_free(
                (0..nx).map(|i| format!("x{i}")).collect(),
            ).unwrap();
            let c = make_passing_cover(&x, t, k, extra, "a");
            prop_assert!(check_condition_i(&c).unwrap().holds);
            prop_assert!(check_condition_ii(&c).unwrap().holds);
            let maps = gamma_maps(&c).unwrap();
            prop_assert_eq!(
                &maps.gamma_prime * &maps.gamma,
                Matrix::identity(x.ch0_dim())
            );
            prop_assert!(comult_square(&c, 4096).unwrap().commutes);
        }

        #[test]
        fn composing_passing_covers_stays_passing(
            nx in 1usize..=2,
            t1 in 1usize..=2,
            k1 in 1usize..=2,
            t2 in 1usize..=2,
            k2 in 1usize..=2,
            extra in 0u64..=1,
        ) {
            let x = FiniteVariety::relation_free(
                (0..nx).map(|i| format!("x{i}")).collect(),
            ).unwrap();
            let c1 = make_passing_cover(&x, t1, k1, extra, "a");
            let c2 = make_passing_cover(&c1.target, t2, k2, extra, "b");
            let composite = fiber_compose(&c1, &c2).unwrap().expect("nonempty");
            prop_assert_eq!(composite.deg_phi, c1.deg_phi * c2.deg_phi);
            prop_assert_eq!(composite.deg_psi, c1.deg_psi * c2.deg_psi);
            prop_assert!(check_condition_i(&composite).unwrap().holds);
            prop_assert!(gamma_maps(&composite).is_ok());
        }
    }
}
