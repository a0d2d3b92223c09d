use proptest::prelude::*;

use bggreg::cli::{parse_instance, InstanceFile};
use bggreg::exactla::{PrimeField, Rationals};
use bggreg::grading::{MonomialIdeal, Side, Subset};
use bggreg::harness::random::{instance_rng, random_antichain, random_module_spec};
use bggreg::harness::{compare_betti_routes, compare_lpd_routes};
use bggreg::smod::SqSModule;
use bggreg::wkoszul::{is_weakly_koszul_e, lpd};

fn arb_instance() -> impl Strategy<Value = InstanceFile> {
    (1usize..=8).prop_flat_map(|d| {
        (
            Just(d),
            prop_oneof![Just(0u64), Just(2), Just(3), Just(32003)],
            prop_oneof![Just(Side::E), Just(Side::S)],
            prop::collection::vec(0u32..(1u32 << d), 0..6),
        )
            .prop_map(|(d, c, side, masks)| InstanceFile::new(d, c, side, masks.into_iter().map(Subset).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_file_round_trips(inst in arb_instance()) {
        let text = inst.emit();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back.emit(), &text);
        prop_assert_eq!(back.d, inst.d);
        prop_assert_eq!(back.characteristic, inst.characteristic);
        prop_assert_eq!(back.side, inst.side);
        prop_assert_eq!(back.gens, inst.gens);
    }

    #[test]
    fn random_antichains_are_minimal(seed in any::<u64>(), d in 1usize..=6, density in 0.0f64..=1.0) {
        let gens = random_antichain(&mut instance_rng(seed, 0), d, density);
        for (a, x) in gens.iter().enumerate() {
            for (b, y) in gens.iter().enumerate() {
                prop_assert!(a == b || !x.is_subset_of(*y));
            }
        }
        let again = random_antichain(&mut instance_rng(seed, 0), d, density);
        prop_assert_eq!(gens, again);
    }

    #[test]
    fn ideal_generators_are_an_antichain(masks in prop::collection::vec(0u32..32, 0..8)) {
        let j = MonomialIdeal::new(Side::S, 5, masks.iter().map(|&m| Subset(m)));
        for &m in &masks {
            prop_assert!(j.contains(Subset(m)));
        }
        for x in j.generators() {
            prop_assert!(j.generators().iter().all(|y| x == y || !y.is_subset_of(*x)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn betti_routes_agree(seed in any::<u64>(), d in 2usize..=4) {
        let spec = random_module_spec(&mut instance_rng(seed, 0), d);
        let q = compare_betti_routes(&spec.build_s(Rationals)).unwrap();
        prop_assert!(q.agree(), "{:?}", q.divergence);
        let p = compare_betti_routes(&spec.build_s(PrimeField::new(32003).unwrap())).unwrap();
        prop_assert!(p.agree(), "{:?}", p.divergence);
    }

    #[test]
    fn lpd_routes_agree_and_are_bounded(seed in any::<u64>(), d in 2usize..=4) {
        let spec = random_module_spec(&mut instance_rng(seed, 1), d);
        let n = spec.build_e(Rationals);
        let c = compare_lpd_routes(&n).unwrap();
        prop_assert!(c.agree(), "{:?}", c.divergence);
        let r = lpd(&n).unwrap();
        let pd = SqSModule::from_emodule(&n).unwrap().proj_dim().unwrap() as i32;
        prop_assert!(r.value_formula >= 0);
        prop_assert!(r.value_formula <= d as i32 - 1);
        prop_assert!(r.value_formula <= pd);
        prop_assert!(r.omega_monotone());
    }

    #[test]
    fn weakly_koszul_matches_componentwise_linear(seed in any::<u64>(), d in 2usize..=4) {
        let n = random_module_spec(&mut instance_rng(seed, 2), d).build_e(Rationals);
        let e_side = is_weakly_koszul_e(&n).unwrap().holds;
        let s_side = SqSModule::from_emodule(&n).unwrap().weakly_koszul().holds();
        prop_assert_eq!(e_side, s_side);
        prop_assert_eq!(e_side, lpd(&n).unwrap().value_formula == 0);
    }

    #[test]
    fn regularity_routes_agree(seed in any::<u64>(), d in 2usize..=4) {
        let m = random_module_spec(&mut instance_rng(seed, 3), d).build_s(Rationals);
        prop_assert_eq!(m.local_cohomology().reg(), m.reg());
    }
}
