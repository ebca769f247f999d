use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torus_roots::classify::{
    are_conjugate, catalog_cartan, classify, classify_by_catalog, classify_subsystem, long_roots,
};
use torus_roots::fan::{fan_roots, minimal_nonfaces, preserves_exceptional_set, symmetry_report};
use torus_roots::roots::{cartan_integer, compute_roots};
use torus_roots::{
    Family, Fan, Root, RootKind, RootSystem, SignAssignment, TypeLabel, VectorConfiguration,
};

fn configuration() -> impl Strategy<Value = VectorConfiguration> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let m = n..=6;
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n), m),
            )
        })
        .prop_filter_map("rank deficient", |(n, v)| {
            VectorConfiguration::new(n, v).ok()
        })
}

/// Configurations that generate the whole lattice: a basis plus extras.
fn spanning_configuration() -> impl Strategy<Value = VectorConfiguration> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n), 0..=4),
            )
        })
        .prop_filter_map("zero vector", |(n, extra)| {
            let mut v = VectorConfiguration::standard_basis(n).vectors().to_vec();
            v.extend(extra);
            VectorConfiguration::new(n, v).ok()
        })
}

fn type2_simple_pairs(sys: &RootSystem) -> Vec<Vec<Root>> {
    classify(sys)
        .unwrap()
        .into_iter()
        .map(|c| {
            c.simple_roots
                .into_iter()
                .filter(|r| r.kind() == RootKind::Type2)
                .collect()
        })
        .collect()
}

/// Simple roots α, β, γ, δ of type 2 with a_{β,α} = a_{γ,α} = a_{δ,α} = −1
/// force a conjugate pair among β, γ, δ.
fn branch_has_conjugates(sys: &RootSystem) -> bool {
    type2_simple_pairs(sys).iter().all(|simple| {
        simple.iter().all(|a| {
            let joined: Vec<&Root> = simple
                .iter()
                .filter(|b| *b != a && cartan_integer(b, a).unwrap() == -1)
                .collect();
            joined.len() < 3
                || joined
                    .iter()
                    .enumerate()
                    .any(|(i, x)| joined[i + 1..].iter().any(|y| are_conjugate(x, y)))
        })
    })
}

/// For conjugate simple β, γ and a further type-2 simple λ,
/// a_{β,λ} = −1 implies a_{γ,λ} = −1.
fn conjugates_share_neighbours(sys: &RootSystem) -> bool {
    type2_simple_pairs(sys).iter().all(|simple| {
        simple.iter().all(|b| {
            simple.iter().all(|g| {
                !are_conjugate(b, g)
                    || simple.iter().all(|l| {
                        l == b
                            || l == g
                            || cartan_integer(b, l).unwrap() != -1
                            || cartan_integer(g, l).unwrap() == -1
                    })
            })
        })
    })
}

#[test]
fn branch_nodes_of_d_types() {
    for n in 4..=6 {
        let b = compute_roots(&VectorConfiguration::standard_basis(n)).unwrap();
        let d = long_roots(&b);
        assert_eq!(
            classify_subsystem(&b, &d).unwrap()[0].label,
            TypeLabel::new(Family::D, n)
        );
        assert!(branch_has_conjugates(&d));
        assert!(conjugates_share_neighbours(&d));
    }
}

#[test]
fn catalog_match_is_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut labels = vec![TypeLabel::a(1)];
    for n in 2..=7 {
        labels.push(TypeLabel::a(n));
        labels.push(TypeLabel::new(Family::B, n));
        if n >= 3 {
            labels.push(TypeLabel::new(Family::C, n));
        }
        if n >= 4 {
            labels.push(TypeLabel::new(Family::D, n));
        }
    }
    for label in labels {
        let c = catalog_cartan(label);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..label.rank).collect();
            perm.shuffle(&mut rng);
            let p: Vec<Vec<i64>> = perm
                .iter()
                .map(|&i| perm.iter().map(|&j| c[i][j]).collect())
                .collect();
            assert_eq!(classify_by_catalog(&p, false).unwrap(), label, "{p:?}");
        }
    }
}

#[test]
fn catalog_rejects_exceptional_types() {
    let g2 = vec![vec![2, -1], vec![-3, 2]];
    assert!(classify_by_catalog(&g2, false).is_err());
    let f4 = vec![
        vec![2, -1, 0, 0],
        vec![-1, 2, -2, 0],
        vec![0, -1, 2, -1],
        vec![0, 0, -1, 2],
    ];
    assert!(classify_by_catalog(&f4, false).is_err());
    let mut e6 = vec![vec![0i64; 6]; 6];
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)] {
        e6[i][j] = -1;
        e6[j][i] = -1;
    }
    for (i, row) in e6.iter_mut().enumerate() {
        row[i] = 2;
    }
    assert!(classify_by_catalog(&e6, false).is_err());
}

#[test]
fn index_two_configuration_carries_d4() {
    // the coordinate functionals restricted to the D4 lattice: V generates
    // a subgroup of index 2, and R(V) is D4 with no type-1 roots
    let cfg = VectorConfiguration::new(
        4,
        vec![
            vec![1, 0, 0, 0],
            vec![-1, 1, 0, 0],
            vec![0, -1, 1, 1],
            vec![0, 0, -1, 1],
        ],
    )
    .unwrap();
    assert_eq!(cfg.lattice_index(), 2.into());
    let r = compute_roots(&cfg).unwrap();
    assert_eq!(r.len(), 24);
    assert!(r.roots().iter().all(|x| x.kind() == RootKind::Type2));
    assert_eq!(classify(&r).unwrap()[0].label, TypeLabel::new(Family::D, 4));
}

#[test]
fn blown_up_fans_stay_consistent() {
    let mut fans = vec![
        Fan::catalog("cp3").unwrap(),
        Fan::catalog("cp1xcp2").unwrap(),
    ];
    let cp3 = Fan::catalog("cp3").unwrap();
    fans.push(cp3.blow_up(&[0, 1]).unwrap());
    fans.push(cp3.blow_up(&[0, 1, 2]).unwrap());
    for f in &fans {
        assert_eq!(f.uncovered_point(2).unwrap(), None);
        let all = fan_roots(f, None).unwrap();
        for r in all.roots() {
            assert!(preserves_exceptional_set(f, r).unwrap());
        }
        for omega in SignAssignment::enumerate(f.ray_count()) {
            let rep = symmetry_report(f, Some(&omega)).unwrap();
            assert!(rep.consistent(), "{:?} {omega}: {:?}", f.rays(), rep.checks);
        }
    }
}

#[test]
fn nonfaces_of_projective_spaces() {
    for n in 1..=5 {
        let f = Fan::catalog(&format!("cp{n}")).unwrap();
        assert_eq!(minimal_nonfaces(&f), vec![(0..=n).collect::<Vec<_>>()]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn components_are_a_or_b_when_spanning(cfg in spanning_configuration()) {
        let r = compute_roots(&cfg).unwrap();
        let has_type1 = r.roots().iter().any(|x| x.kind() == RootKind::Type1);
        for c in classify(&r).unwrap() {
            prop_assert!(matches!(c.label.family, Family::A | Family::B));
            prop_assert!(has_type1 || c.label.family == Family::A);
        }
    }

    #[test]
    fn conjugate_halves_are_short_roots_when_spanning(cfg in spanning_configuration()) {
        let r = compute_roots(&cfg).unwrap();
        for (a, b) in torus_roots::classify::conjugate_pairs(&r) {
            for sign in [1, -1] {
                let twice: Vec<i64> = a.alpha().iter().zip(b.alpha()).map(|(x, y)| x + sign * y).collect();
                prop_assert!(twice.iter().all(|x| x % 2 == 0));
                let h: Vec<i64> = twice.iter().map(|x| x / 2).collect();
                prop_assert!(r.get(&h).is_some_and(|x| x.kind() == RootKind::Type1));
            }
        }
    }

    #[test]
    fn branching_rules_of_simple_roots(cfg in configuration()) {
        let r = compute_roots(&cfg).unwrap();
        prop_assert!(branch_has_conjugates(&r));
        prop_assert!(conjugates_share_neighbours(&r));
        let long = long_roots(&r);
        if torus_roots::roots::verify_closure(&long).is_closed() {
            prop_assert!(branch_has_conjugates(&long));
            prop_assert!(conjugates_share_neighbours(&long));
        }
    }

    #[test]
    fn signed_roots_are_a_subsystem_of_type_a(cfg in spanning_configuration(), bits in any::<u8>()) {
        let m = cfg.len();
        let values: Vec<i64> = (0..m).map(|i| if bits >> (i % 8) & 1 == 0 { 1 } else { -1 }).collect();
        let omega = SignAssignment::from_values(&values).unwrap();
        let signed = torus_roots::roots::compute_signed_roots(&cfg, &omega).unwrap();
        for c in classify(&signed).unwrap() {
            prop_assert_eq!(c.label.family, Family::A);
        }
    }
}
