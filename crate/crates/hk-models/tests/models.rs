use coalgebra_engine::{
    check_axioms, check_strict, check_unital_grading, cogeneration_map, iterated_reduced_comult,
    TensorCap,
};
use exact_linear::{Matrix, Rat, Vector};
use hk_models::{
    build_fano, build_hilb, build_k3, fano_eigenprojectors, fano_mu_delta_check, hilb_point_class,
    mu_k, voisin_filtration, voisin_level, HilbModel, ModelError, PointSpec,
};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn cap() -> TensorCap {
    TensorCap::default()
}

fn spec(m: &HilbModel, labels: &[&str]) -> PointSpec {
    PointSpec::from_labels(m, labels).expect("valid spec")
}

#[test]
fn k3_matches_hand_built_coalgebra() {
    let m = build_k3(2).expect("build");
    assert_eq!(m.coalg.dim(), 3);
    assert_eq!(m.coalg.space().labels(), vec!["o", "a1", "a2"]);
    // o group-like, a1 and a2 primitive over o.
    let expected = Matrix::from_triples(
        9,
        3,
        [
            (0, 0, r(1, 1)),
            (3, 1, r(1, 1)),
            (1, 1, r(1, 1)),
            (6, 2, r(1, 1)),
            (2, 2, r(1, 1)),
        ],
    )
    .unwrap();
    assert_eq!(m.coalg.comult(), &expected);
    let eps = Matrix::from_triples(1, 3, [(0, 0, r(1, 1))]).unwrap();
    assert_eq!(m.coalg.counit(), &eps);
    assert_eq!(m.unit.vector(), &Vector::unit(3, 0));
    assert!(check_strict(&m.coalg, &m.unit, cap()).unwrap().strict);
}

#[test]
fn builders_reject_degenerate_sizes() {
    assert!(matches!(build_k3(0), Err(ModelError::BadSpec(_))));
    assert!(matches!(build_hilb(0, 2), Err(ModelError::BadSpec(_))));
    assert!(matches!(build_hilb(2, 0), Err(ModelError::BadSpec(_))));
}

#[test]
fn hilb_grade_dimensions() {
    let m = build_hilb(2, 2).expect("build");
    let dims: Vec<usize> = (0..=2)
        .map(|k| m.coalg.space().grade_range(k).unwrap().len())
        .collect();
    assert_eq!(dims, vec![1, 2, 3]);
    assert_eq!(m.coalg.dim(), 6);

    let m = build_hilb(3, 2).expect("build");
    let dims: Vec<usize> = (0..=3)
        .map(|k| m.coalg.space().grade_range(k).unwrap().len())
        .collect();
    assert_eq!(dims, vec![1, 2, 3, 4]);
    assert_eq!(m.coalg.dim(), 10);

    let m = build_hilb(3, 3).expect("build");
    let dims: Vec<usize> = (0..=3)
        .map(|k| m.coalg.space().grade_range(k).unwrap().len())
        .collect();
    assert_eq!(dims, vec![1, 3, 6, 10]);
}

#[test]
fn models_pass_engine_suites() {
    let k3 = build_k3(3).expect("build");
    let ax = check_axioms(&k3.coalg);
    assert!(ax.axioms_hold() && ax.cocomm_ok);
    assert!(check_unital_grading(&k3.coalg, &k3.unit).holds());

    let h = build_hilb(3, 2).expect("build");
    let ax = check_axioms(&h.coalg);
    assert!(ax.axioms_hold() && ax.cocomm_ok);
    assert!(check_unital_grading(&h.coalg, &h.unit).holds());
    assert!(check_strict(&h.coalg, &h.unit, cap()).unwrap().strict);
}

#[test]
fn point_class_examples() {
    // Basis of Hilb(2,2): o, a1, a2, a1^2, a1*a2, a2^2.
    let m = build_hilb(2, 2).expect("build");

    let all_o = hilb_point_class(&m, &spec(&m, &[]));
    assert_eq!(all_o, Vector::unit(6, 0));

    let one = hilb_point_class(&m, &spec(&m, &["a1"]));
    assert_eq!(one, Vector::from_ints(&[1, 1, 0, 0, 0, 0]));

    let two = hilb_point_class(&m, &spec(&m, &["a1", "a2"]));
    assert_eq!(two, Vector::from_ints(&[1, 1, 1, 0, 1, 0]));

    let doubled = hilb_point_class(&m, &spec(&m, &["a1", "a1"]));
    assert_eq!(doubled, Vector::from_ints(&[1, 2, 0, 1, 0, 0]));

    for v in [&all_o, &one, &two, &doubled] {
        assert!(m.coalg.counit_of(v).is_one());
    }
}

#[test]
fn point_spec_validation() {
    let m = build_hilb(2, 2).expect("build");
    assert!(matches!(
        PointSpec::from_labels(&m, &["a7"]),
        Err(ModelError::UnknownLabel(_))
    ));
    assert!(matches!(
        PointSpec::from_labels(&m, &["a1", "a1", "a2"]),
        Err(ModelError::BadSpec(_))
    ));
    assert!(matches!(
        PointSpec::from_indices(&m, &[2]),
        Err(ModelError::BadSpec(_))
    ));
    // Slots are stored as a sorted multiset.
    let s = PointSpec::from_labels(&m, &["a2", "a1"]).unwrap();
    assert_eq!(s.slots(), &[0, 1]);
    assert_eq!(voisin_level(&s), 2);
    assert_eq!(voisin_level(&spec(&m, &[])), 0);
    assert_eq!(voisin_level(&spec(&m, &["a2"])), 1);
}

#[test]
fn voisin_filtration_equals_grading_and_coradical() {
    let m = build_hilb(2, 2).expect("build");
    let f = voisin_filtration(&m, cap()).expect("filtration");
    let dims: Vec<usize> = (0..=2).map(|k| f.step(k).unwrap().dim()).collect();
    assert_eq!(dims, vec![1, 3, 6]);
    assert_eq!(f.saturated_at, Some(2));

    let m = build_hilb(3, 2).expect("build");
    let f = voisin_filtration(&m, cap()).expect("filtration");
    let dims: Vec<usize> = (0..=3).map(|k| f.step(k).unwrap().dim()).collect();
    assert_eq!(dims, vec![1, 3, 6, 10]);
    assert_eq!(f.saturated_at, Some(3));
}

#[test]
fn mu_2_frozen_on_hilb_2_2() {
    let m = build_hilb(2, 2).expect("build");
    let mu = mu_k(&m, 2, cap()).expect("mu");
    // Rows: a1^2, a1*a2, a2^2. Columns: words a1a1, a1a2, a2a1, a2a2.
    let expected = Matrix::from_triples(
        3,
        4,
        [
            (0, 0, r(1, 1)),
            (1, 1, r(1, 1)),
            (1, 2, r(1, 1)),
            (2, 3, r(1, 1)),
        ],
    )
    .unwrap();
    assert_eq!(mu, expected);
}

#[test]
fn mu_1_is_identity() {
    let m = build_hilb(3, 2).expect("build");
    assert_eq!(mu_k(&m, 1, cap()).unwrap(), Matrix::identity(2));
}

#[test]
fn mu_k_bad_inputs() {
    let m = build_hilb(3, 2).expect("build");
    assert!(matches!(mu_k(&m, 0, cap()), Err(ModelError::BadSpec(_))));
    assert!(matches!(mu_k(&m, 4, cap()), Err(ModelError::BadSpec(_))));
}

/// Lifts the returned multiplication matrix to full tensor-power
/// coordinates and recomputes both factorial identities from scratch.
#[test]
fn mu_composites_recomputed_externally() {
    let m = build_hilb(3, 2).expect("build");
    let d = m.coalg.dim();
    let t = m.t;
    let r1 = m.coalg.space().grade_range(1).unwrap();
    for k in 1..=3usize {
        let rk = m.coalg.space().grade_range(k).unwrap();
        let block = rk.len();
        let mu = mu_k(&m, k, cap()).expect("mu");

        let mut mu_full = Matrix::zeros(block, d.pow(k as u32));
        for (row, col, x) in mu.entries() {
            let mut digits = vec![0usize; k];
            let mut w = col;
            for p in (0..k).rev() {
                digits[p] = w % t;
                w /= t;
            }
            let global = digits.iter().fold(0usize, |acc, &g| acc * d + (r1.start + g));
            mu_full.set(row, global, x.clone());
        }

        let iterate = iterated_reduced_comult(&m.coalg, &m.unit, k - 1, cap()).unwrap();
        let composite = &mu_full * &iterate;
        // k! on the grade-k block, zero on every other grade.
        let mut expected = Matrix::zeros(block, d);
        let kfact = (1..=k as i64).product::<i64>();
        for (local, j) in rk.clone().enumerate() {
            expected.set(local, j, r(kfact, 1));
        }
        assert_eq!(composite, expected, "k = {k}");
    }
}

#[test]
fn delta_bar_expands_point_classes() {
    // Two distinct points on Hilb(2,2): both orderings, coefficient 1.
    let m = build_hilb(2, 2).expect("build");
    let pc = hilb_point_class(&m, &spec(&m, &["a1", "a2"]));
    let d1 = iterated_reduced_comult(&m.coalg, &m.unit, 1, cap()).unwrap();
    let expanded = d1.apply(&pc);
    let expected = Vector::from_entries(36, [(8, r(1, 1)), (13, r(1, 1))]).unwrap();
    assert_eq!(expanded, expected);

    // Repeated point on Hilb(3,2): three arrangements, each with
    // multiplicity 2 from the repeated letter.
    let m = build_hilb(3, 2).expect("build");
    let pc = hilb_point_class(&m, &spec(&m, &["a1", "a1", "a2"]));
    let d2 = iterated_reduced_comult(&m.coalg, &m.unit, 2, cap()).unwrap();
    let expanded = d2.apply(&pc);
    let expected = Vector::from_entries(
        1000,
        [(112, r(2, 1)), (121, r(2, 1)), (211, r(2, 1))],
    )
    .unwrap();
    assert_eq!(expanded, expected);

    // Three distinct points on Hilb(3,3): all six orderings.
    let m = build_hilb(3, 3).expect("build");
    let pc = hilb_point_class(&m, &spec(&m, &["a1", "a2", "a3"]));
    let d2 = iterated_reduced_comult(&m.coalg, &m.unit, 2, cap()).unwrap();
    let expanded = d2.apply(&pc);
    let expected = Vector::from_entries(
        8000,
        [
            (443, r(1, 1)),
            (462, r(1, 1)),
            (823, r(1, 1)),
            (861, r(1, 1)),
            (1222, r(1, 1)),
            (1241, r(1, 1)),
        ],
    )
    .unwrap();
    assert_eq!(expanded, expected);
}

#[test]
fn delta_bar_vanishes_at_top_grade() {
    let m = build_hilb(2, 2).expect("build");
    assert!(iterated_reduced_comult(&m.coalg, &m.unit, 2, cap()).unwrap().is_zero());
    let m = build_hilb(3, 2).expect("build");
    assert!(iterated_reduced_comult(&m.coalg, &m.unit, 3, cap()).unwrap().is_zero());
}

#[test]
fn cogeneration_is_bijective_and_separates_points() {
    let m = build_hilb(2, 2).expect("build");
    let d = m.coalg.dim();
    let r1 = m.coalg.space().grade_range(1).unwrap();
    let proj = Matrix::from_triples(
        r1.len(),
        d,
        r1.clone().enumerate().map(|(local, j)| (local, j, Rat::one())),
    )
    .unwrap();
    let cg = cogeneration_map(&m.coalg, &m.unit, &proj, m.n, cap()).expect("cogeneration");
    assert!(cg.split_injective);
    assert!(cg.image_equals_symmetric_part);
    assert!(cg.is_morphism);

    // Distinct points have distinct towers of grade-1 projections.
    let specs: Vec<PointSpec> = vec![
        spec(&m, &[]),
        spec(&m, &["a1"]),
        spec(&m, &["a2"]),
        spec(&m, &["a1", "a1"]),
        spec(&m, &["a1", "a2"]),
        spec(&m, &["a2", "a2"]),
    ];
    let images: Vec<Vector> = specs
        .iter()
        .map(|s| cg.map.apply(&hilb_point_class(&m, s)))
        .collect();
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            assert_ne!(images[i], images[j], "specs {i} and {j} collide");
        }
    }
}

#[test]
fn fano_frozen_small_model() {
    let m = build_fano(3, &[[0, 1, 2]]).expect("build");
    assert_eq!(m.coalg.dim(), 5);
    assert_eq!(m.coalg.space().labels(), vec!["o", "b1", "b2", "b3", "t1"]);
    assert_eq!(m.triangles, vec![[0, 1, 2]]);

    let phi_expected = Matrix::from_triples(
        5,
        5,
        [
            (0, 0, r(1, 1)),
            (1, 1, r(-2, 1)),
            (2, 2, r(-2, 1)),
            (3, 3, r(-2, 1)),
            (4, 4, r(4, 1)),
        ],
    )
    .unwrap();
    assert_eq!(m.phi, phi_expected);

    assert_eq!(
        m.intersection(0, 0),
        Some(&Vector::from_ints(&[5, 0, 0, 0]))
    );
    // S_l1 S_l2 = 6[o] + [l3] - [l1] - [l2].
    assert_eq!(
        m.intersection(1, 2),
        Some(&Vector::from_ints(&[6, -1, -1, 1]))
    );
    assert_eq!(m.intersection(1, 1), None);

    let ax = check_axioms(&m.coalg);
    assert!(ax.axioms_hold() && ax.cocomm_ok);
    assert!(check_unital_grading(&m.coalg, &m.unit).holds());
}

#[test]
fn fano_rejects_malformed_triangles() {
    assert!(matches!(
        build_fano(3, &[[0, 0, 1]]),
        Err(ModelError::MalformedTriangle(_))
    ));
    assert!(matches!(
        build_fano(3, &[[0, 1, 7]]),
        Err(ModelError::MalformedTriangle(_))
    ));
    assert!(matches!(
        build_fano(4, &[[0, 1, 2], [0, 1, 3]]),
        Err(ModelError::MalformedTriangle(_))
    ));
    // The same triangle twice is merely redundant.
    let m = build_fano(3, &[[0, 1, 2], [2, 0, 1]]).expect("build");
    assert_eq!(m.triangles.len(), 1);
}

#[test]
fn fano_eigenprojectors_frozen() {
    let m = build_fano(3, &[[0, 1, 2]]).expect("build");
    let [p0, p1, p2] = fano_eigenprojectors(&m).expect("projectors");
    let diag = |entries: &[i64]| {
        Matrix::from_triples(
            5,
            5,
            entries
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, i, r(x, 1))),
        )
        .unwrap()
    };
    assert_eq!(p0, diag(&[1, 0, 0, 0, 0]));
    assert_eq!(p1, diag(&[0, 1, 1, 1, 0]));
    assert_eq!(p2, diag(&[0, 0, 0, 0, 1]));

    // The comultiplication respects the eigenvalue bookkeeping: on the
    // eigenspace of (-2)^k it lands in the (phi (x) phi)-eigenspace of the
    // same eigenvalue.
    let phi2 = m.phi.kronecker(&m.phi);
    let eigenvalues = [r(1, 1), r(-2, 1), r(4, 1)];
    for (k, p) in [&p0, &p1, &p2].into_iter().enumerate() {
        let image = m.coalg.comult() * p;
        assert_eq!(&phi2 * &image, image.scale(&eigenvalues[k]), "grade {k}");
    }
}

#[test]
fn fano_mu_delta_frozen() {
    let m = build_fano(3, &[[0, 1, 2]]).expect("build");
    let report = fano_mu_delta_check(&m, [0, 1, 2]).expect("check");
    assert_eq!(report.six_s_o_squared, Vector::from_ints(&[30, 0, 0, 0]));
    assert_eq!(report.pair_product_sum, Vector::from_ints(&[18, -1, -1, -1]));
    assert_eq!(report.total, Vector::from_ints(&[-6, 2, 2, 2]));
    assert_eq!(report.triangle_class, Vector::from_ints(&[-3, 1, 1, 1]));
    assert_eq!(report.factor, r(2, 1));
    assert_eq!(report.lefschetz[0], Vector::from_ints(&[1, -1, 0, 0]));
    assert_eq!(report.lefschetz[2], Vector::from_ints(&[1, 0, 0, -1]));
    assert_eq!(report.total, report.triangle_class.scale(&report.factor));
}

#[test]
fn fano_mu_delta_requires_declared_triangle() {
    let m = build_fano(4, &[[0, 1, 2]]).expect("build");
    assert!(matches!(
        fano_mu_delta_check(&m, [0, 1, 3]),
        Err(ModelError::MissingTableEntry(_))
    ));
    // Any ordering of a declared triangle is accepted.
    assert!(fano_mu_delta_check(&m, [2, 0, 1]).is_ok());
}

#[test]
fn fano_randomized_instances() {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut instances = 0;
    for seed in 0..24u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triangles_count = rng.random_range(1..=3usize);
        let extra = rng.random_range(0..=3usize);
        let lines = 3 * triangles_count + extra;
        let mut idx: Vec<usize> = (0..lines).collect();
        idx.shuffle(&mut rng);
        let triangles: Vec<[usize; 3]> = (0..triangles_count)
            .map(|i| [idx[3 * i], idx[3 * i + 1], idx[3 * i + 2]])
            .collect();

        let m = build_fano(lines, &triangles).expect("build");
        fano_eigenprojectors(&m).expect("projectors verify");
        for &tri in &m.triangles {
            let report = fano_mu_delta_check(&m, tri).expect("declared triangle");
            assert_eq!(report.factor, r(2, 1));
            assert_eq!(report.total, report.triangle_class.scale(&r(2, 1)));
        }
        instances += 1;
    }
    assert!(instances >= 20);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_hilb() -> impl Strategy<Value = (usize, usize)> {
        prop_oneof![
            (1usize..=3, 1usize..=2).prop_map(|(n, t)| (n, t)),
            (1usize..=2, 3usize..=3).prop_map(|(n, t)| (n, t)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn hilb_filtrations_agree(nt in arb_hilb()) {
            let (n, t) = nt;
            let m = build_hilb(n, t).unwrap();
            let f = voisin_filtration(&m, cap()).unwrap();
            prop_assert_eq!(f.saturated_at, Some(n));
        }

        #[test]
        fn point_classes_sit_exactly_at_their_level(
            nt in arb_hilb(),
            raw in proptest::collection::vec(0usize..3, 0..3),
        ) {
            let (n, t) = nt;
            let m = build_hilb(n, t).unwrap();
            let slots: Vec<usize> = raw.iter().map(|&i| i % t).take(n).collect();
            let s = PointSpec::from_indices(&m, &slots).unwrap();
            let pc = hilb_point_class(&m, &s);
            prop_assert!(m.coalg.counit_of(&pc).is_one());
            let f = voisin_filtration(&m, cap()).unwrap();
            let level = voisin_level(&s);
            prop_assert!(f.step(level).unwrap().contains(&pc));
            if level > 0 {
                prop_assert!(!f.step(level - 1).unwrap().contains(&pc));
            }
        }

        #[test]
        fn mu_k_verifies_on_random_models(nt in arb_hilb()) {
            let (n, t) = nt;
            let m = build_hilb(n, t).unwrap();
            for k in 1..=n {
                prop_assert!(mu_k(&m, k, cap()).is_ok());
            }
        }
    }
}
