//! Randomized algebraic properties: group laws on every backend, the
//! telescoping conjugation identity, and order-axiom properties of the
//! oracles on random elements.

use proptest::prelude::*;

use orderlab::group::{Elem, GroupSpec, Word};
use orderlab::oracle::{order_to_cone, Cmp, OrderOracle};
use orderlab::window::PairState;
use orderlab::window::WindowRelation;
use std::sync::Arc;

fn backends() -> Vec<GroupSpec> {
    vec![
        GroupSpec::FreeAbelian(1),
        GroupSpec::FreeAbelian(3),
        GroupSpec::Heisenberg,
        GroupSpec::FreeGroup(2),
        GroupSpec::KleinBottle,
        GroupSpec::CyclicFinite(6),
        GroupSpec::DyadicAffine,
        "z:1+klein".parse().unwrap(),
    ]
}

fn word_strategy(gens: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..8)
        .prop_map(|ls| Word(ls.into_iter().map(|(i, s)| (i, if s { 1 } else { -1 })).collect()))
}

fn elem_strategy(spec: GroupSpec) -> impl Strategy<Value = Elem> {
    let gens = spec.num_generators();
    word_strategy(gens).prop_map(move |w| spec.evaluate(&w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws_hold(idx in 0usize..8, seed_words in prop::collection::vec(prop::collection::vec((0usize..2, prop::bool::ANY), 0..8), 3)) {
        let spec = backends()[idx].clone();
        let gens = spec.num_generators();
        let mk = |ls: &Vec<(usize, bool)>| {
            let w = Word(ls.iter().map(|&(i, s)| (i % gens, if s { 1i8 } else { -1 })).collect());
            spec.evaluate(&w).unwrap()
        };
        let a = mk(&seed_words[0]);
        let b = mk(&seed_words[1]);
        let c = mk(&seed_words[2]);
        let e = spec.identity();

        let ab_c = spec.multiply(&spec.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = spec.multiply(&a, &spec.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(spec.multiply(&a, &e).unwrap(), a.clone());
        prop_assert_eq!(spec.multiply(&e, &a).unwrap(), a.clone());
        prop_assert_eq!(spec.multiply(&a, &spec.invert(&a).unwrap()).unwrap(), e.clone());

        // conjugation is a homomorphism in its first argument
        let xy_h = spec.conjugate(&spec.multiply(&a, &b).unwrap(), &c).unwrap();
        let xh_yh = spec.multiply(&spec.conjugate(&a, &c).unwrap(), &spec.conjugate(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(xy_h, xh_yh);

        // commutator of commuting elements is trivial
        if spec.multiply(&a, &b).unwrap() == spec.multiply(&b, &a).unwrap() {
            prop_assert_eq!(spec.commutator(&a, &b).unwrap(), e);
        }
    }

    #[test]
    fn telescoping_identity_universal(idx in 0usize..8, xw in prop::collection::vec((0usize..2, prop::bool::ANY), 0..6), hw in prop::collection::vec((0usize..2, prop::bool::ANY), 0..6), n in 1u32..=8) {
        let spec = backends()[idx].clone();
        let gens = spec.num_generators();
        let mk = |ls: &Vec<(usize, bool)>| {
            let w = Word(ls.iter().map(|&(i, s)| (i % gens, if s { 1i8 } else { -1 })).collect());
            spec.evaluate(&w).unwrap()
        };
        prop_assert!(spec.telescope_identity_check(&mk(&xw), &mk(&hw), n).unwrap());
    }

    #[test]
    fn total_oracles_trichotomy_and_left_invariance(
        x in elem_strategy(GroupSpec::DyadicAffine),
        y in elem_strategy(GroupSpec::DyadicAffine),
        z in elem_strategy(GroupSpec::DyadicAffine),
    ) {
        let spec = GroupSpec::DyadicAffine;
        for oracle in [OrderOracle::affine_dyn(spec.clone()).unwrap(), OrderOracle::affine_bi(spec.clone()).unwrap()] {
            let c = oracle.compare(&x, &y).unwrap();
            if x == y {
                prop_assert_eq!(c, Cmp::Equal);
            } else {
                prop_assert!(c == Cmp::Less || c == Cmp::Greater);
                let back = oracle.compare(&y, &x).unwrap();
                prop_assert_eq!(back, if c == Cmp::Less { Cmp::Greater } else { Cmp::Less });
                // left invariance
                let zx = spec.multiply(&z, &x).unwrap();
                let zy = spec.multiply(&z, &y).unwrap();
                prop_assert_eq!(oracle.compare(&zx, &zy).unwrap(), c);
            }
        }
    }

    #[test]
    fn magnus_is_left_invariant_and_cone_symmetric(
        x in word_strategy(2), y in word_strategy(2), z in word_strategy(2),
    ) {
        let spec = GroupSpec::FreeGroup(2);
        let o = OrderOracle::magnus(spec.clone()).unwrap();
        let (x, y, z) = (spec.evaluate(&x).unwrap(), spec.evaluate(&y).unwrap(), spec.evaluate(&z).unwrap());
        let c = o.compare(&x, &y).unwrap();
        if x != y {
            let zx = spec.multiply(&z, &x).unwrap();
            let zy = spec.multiply(&z, &y).unwrap();
            prop_assert_eq!(o.compare(&zx, &zy).unwrap(), c);
            let xz = spec.multiply(&x, &z).unwrap();
            let yz = spec.multiply(&y, &z).unwrap();
            prop_assert_eq!(o.compare(&xz, &yz).unwrap(), c);
        }
        let e = spec.identity();
        let cone = order_to_cone(&o);
        if x != e {
            let xinv = spec.invert(&x).unwrap();
            prop_assert_ne!(cone.contains(&x).unwrap(), cone.contains(&xinv).unwrap());
        }
    }

    #[test]
    fn norm_order_is_locally_invariant_pointwise(
        x in elem_strategy(GroupSpec::FreeAbelian(2)),
        y in elem_strategy(GroupSpec::FreeAbelian(2)),
    ) {
        let spec = GroupSpec::FreeAbelian(2);
        let o = OrderOracle::norm_lio(spec.clone()).unwrap();
        if y != spec.identity() {
            let xy = spec.multiply(&x, &y).unwrap();
            let xyi = spec.multiply(&x, &spec.invert(&y).unwrap()).unwrap();
            let up1 = o.compare(&x, &xy).unwrap() == Cmp::Less;
            let up2 = o.compare(&x, &xyi).unwrap() == Cmp::Less;
            prop_assert!(up1 || up2, "parallelogram law: one of xy, xy^-1 has larger norm");
        }
    }

    #[test]
    fn relation_antisymmetry_under_random_mutation(ops in prop::collection::vec((0usize..5, 0usize..5, 0usize..3), 1..30)) {
        let spec = GroupSpec::FreeAbelian(2);
        let w = Arc::new(spec.ball(1, 100).unwrap());
        let mut rel = WindowRelation::new_undecided(w);
        for (i, j, s) in ops {
            if i == j {
                continue;
            }
            let state = [PairState::Less, PairState::Greater, PairState::Unrelated][s];
            rel.set(i, j, state);
            prop_assert_eq!(rel.get(j, i), state.flip());
        }
    }
}
