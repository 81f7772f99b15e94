use irpfl::instance::{
    generate_random, generate_random_iap, make_partition_gadget, DemandPoint, GenParams, IapDemand, IapGenParams,
    IapInstance, Instance, Variant,
};
use irpfl::lp::{build_csiap_lp, build_cssirpfl_lp, build_usirpfl_lp, solve_lp};
use irpfl::num::int;
use irpfl::oracle::{exact_iap, exact_sirpfl, partition_exists, visit_enum, ww_dp, OracleError, OracleMethod};
use proptest::prelude::*;

fn uncap_iap(w: i64, demands: &[usize], slope: i64, horizon: usize) -> IapInstance {
    IapInstance {
        distance: int(w),
        horizon,
        variant: Variant::Uncap,
        capacity: None,
        demands: demands.iter().map(|&t| IapDemand { day: t, amount: int(1) }).collect(),
        holding: (1..=horizon).map(|t| (1..=t).map(|s| int(slope * (t - s) as i64)).collect()).collect(),
    }
}

#[test]
fn lot_sizing_examples() {
    let mut two = uncap_iap(10, &[1, 2], 0, 2);
    two.holding[1][0] = int(3);
    let r = ww_dp(&two).unwrap();
    assert_eq!(r.optimum, int(13));
    assert_eq!(r.method, OracleMethod::WwDp);
    assert_eq!(r.witness.deliveries.len(), 1);

    let three = uncap_iap(4, &[1, 2, 3], 1, 3);
    assert_eq!(ww_dp(&three).unwrap().optimum, int(7));
    assert_eq!(visit_enum(&three).unwrap().optimum, int(7));

    let free = uncap_iap(6, &[1, 3, 4], 0, 4);
    assert_eq!(ww_dp(&free).unwrap().optimum, int(6));
}

#[test]
fn lot_sizing_rejects_capacity() {
    let g = make_partition_gadget(&[1, 1], int(1)).unwrap();
    assert!(matches!(ww_dp(&g), Err(OracleError::Unsupported(_))));
}

#[test]
fn gadget_optima() {
    let yes = exact_iap(&make_partition_gadget(&[1, 2, 3, 4], int(7)).unwrap()).unwrap();
    assert_eq!(yes.optimum, int(14));
    assert_eq!(yes.method, OracleMethod::PackEnum);
    let no_gadget = make_partition_gadget(&[2, 2, 2], int(1)).unwrap();
    let no = exact_iap(&no_gadget).unwrap();
    assert_eq!(no.optimum, int(3));
    no.witness.check(&no_gadget).unwrap();
}

#[test]
fn splittable_unit_example() {
    let iap = IapInstance {
        distance: int(1),
        horizon: 2,
        variant: Variant::CapSplit,
        capacity: Some(int(1)),
        demands: vec![IapDemand { day: 1, amount: int(1) }, IapDemand { day: 2, amount: int(1) }],
        holding: vec![vec![int(0)], vec![int(10), int(0)]],
    };
    let r = exact_iap(&iap).unwrap();
    assert_eq!(r.optimum, int(2));
    assert_eq!(r.method, OracleMethod::TripEnum);
    r.witness.check(&iap).unwrap();
}

#[test]
fn network_examples() {
    let single = Instance::new(
        1,
        Variant::Uncap,
        None,
        vec![vec![int(0)]],
        vec![int(5)],
        vec![DemandPoint { vertex: 0, day: 1, amount: int(1), holding: vec![int(0)] }],
    );
    assert_eq!(exact_sirpfl(&single).unwrap().optimum, int(5));

    let pair = Instance::new(
        1,
        Variant::Uncap,
        None,
        vec![vec![int(0), int(2)], vec![int(2), int(0)]],
        vec![int(1), int(100)],
        vec![DemandPoint { vertex: 1, day: 1, amount: int(1), holding: vec![int(0)] }],
    );
    let r = exact_sirpfl(&pair).unwrap();
    assert_eq!(r.optimum, int(3));
    r.witness.check(&pair).unwrap();
}

#[test]
fn size_gates_are_errors() {
    let params = GenParams { n: 6, horizon: 2, ..GenParams::default() };
    let inst = generate_random(&params, 1).unwrap();
    assert!(matches!(exact_sirpfl(&inst), Err(OracleError::TooLarge(_))));
    let params = IapGenParams {
        horizon: 7,
        capacity: Some(int(5)),
        variant: Variant::CapSplit,
        ..IapGenParams::default()
    };
    let iap = generate_random_iap(&params, 1).unwrap();
    assert!(matches!(exact_iap(&iap), Err(OracleError::TooLarge(_))));
}

#[test]
fn partition_convention() {
    assert!(partition_exists(&[1, 2, 3, 4]));
    assert!(!partition_exists(&[2, 2, 2]));
    assert!(partition_exists(&[]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lot_sizing_matches_enumeration(seed in 0u64..10_000, horizon in 1usize..=12) {
        let params = IapGenParams { horizon, distance_range: (0, 12), ..IapGenParams::default() };
        let iap = generate_random_iap(&params, seed).unwrap();
        let dp = ww_dp(&iap).unwrap();
        prop_assert_eq!(&dp.optimum, &visit_enum(&iap).unwrap().optimum);
        prop_assert!(dp.witness.check(&iap).is_ok());
        prop_assert_eq!(dp.witness.total_cost(), dp.optimum);
    }

    #[test]
    fn splitting_never_costs_more(seed in 0u64..10_000, horizon in 1usize..=5) {
        let params = IapGenParams {
            horizon,
            capacity: Some(int(6)),
            variant: Variant::CapSplit,
            demand_range: (1, 6),
            ..IapGenParams::default()
        };
        let split = generate_random_iap(&params, seed).unwrap();
        let unsplit = split.with_variant(Variant::CapUnsplit);
        let a = exact_iap(&split).unwrap();
        let b = exact_iap(&unsplit).unwrap();
        prop_assert!(a.optimum <= b.optimum);
        prop_assert!(a.witness.check(&split).is_ok());
        prop_assert!(b.witness.check(&unsplit).is_ok());
        let lp = solve_lp(&build_csiap_lp(&split).unwrap()).unwrap();
        prop_assert!(lp.objective <= a.optimum);
    }

    #[test]
    fn network_optimum_bounds_relaxation(seed in 0u64..10_000, cap in prop::option::of(4i64..=8)) {
        let variant = if cap.is_some() { Variant::CapSplit } else { Variant::Uncap };
        let params = GenParams {
            n: 3,
            horizon: 3,
            capacity: cap.map(int),
            variant,
            max_demands: Some(5),
            ..GenParams::default()
        };
        let inst = generate_random(&params, seed).unwrap();
        let exact = exact_sirpfl(&inst).unwrap();
        prop_assert!(exact.witness.check(&inst).is_ok());
        let model = if cap.is_some() { build_cssirpfl_lp(&inst) } else { build_usirpfl_lp(&inst) }.unwrap();
        prop_assert!(solve_lp(&model).unwrap().objective <= exact.optimum);
    }
}
