mod common;

use common::{random_cover, random_env, random_signal_of, relabel, rng};
use envequiv::gallery::{crossing_pair, cycle, figure_eight};
use envequiv::{
    degree_refinement, lift_sensor, lift_state_path, rational, universal_cover_truncation,
    verify_covering, verify_covering_except, GraphMap, SensorSpec, Signal,
};
use proptest::prelude::*;

#[test]
fn lifts_project_back_and_traces_match() {
    let mut r = rng(11);
    let mut covers = 0;
    while covers < 10 {
        let base = random_env(&mut r, 3, 3, false);
        let Some((cover, map)) = random_cover(&mut r, &base) else { continue };
        covers += 1;
        let cert = verify_covering(&map, &cover, &base).unwrap();
        assert!(cert.is_positive(), "{:?}", cert.violations);
        assert_eq!(lift_sensor(&cert, &cover, &base, base.sensor()).unwrap(), *cover.sensor());
        for _ in 0..200 {
            let u = random_signal_of(&mut r, &base, 6);
            let lifted = lift_state_path(&cert, &cover, &base, &u).unwrap();
            assert_eq!(map.project_trajectory(base.graph(), &lifted), base.trajectory(&u));
            assert_eq!(cover.trace_of(&u), base.trace_of(&u));
        }
    }
}

#[test]
fn degree_sensor_pulls_back_to_itself() {
    let c3 = cycle(3);
    let (c6, map) = envequiv::cyclic_cover(&c3, 2, &envequiv::edge_voltages(&[1, 1, 1], 2)).unwrap();
    let cert = verify_covering(&map, &c6, &c3).unwrap();
    assert_eq!(lift_sensor(&cert, &c6, &c3, &SensorSpec::Degree).unwrap(), SensorSpec::Degree);
}

#[test]
fn identity_lift_is_the_trajectory() {
    let env = figure_eight();
    let id = GraphMap::identity(env.graph());
    let cert = verify_covering(&id, &env, &env).unwrap();
    let u = Signal::constant(envequiv::Symbol::Port(2), rational(7, 2));
    assert_eq!(lift_state_path(&cert, &env, &env, &u).unwrap(), env.trajectory(&u));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cyclic_covers_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_env(&mut r, 4, 3, false);
        if let Some((cover, map)) = random_cover(&mut r, &base) {
            prop_assert!(verify_covering(&map, &cover, &base).unwrap().is_positive());
        }
    }

    #[test]
    fn refinement_ignores_labelling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let env = random_env(&mut r, 5, 4, true);
        let (copy, _) = relabel(&mut r, &env);
        prop_assert_eq!(degree_refinement(&env).table, degree_refinement(&copy).table);
    }

    #[test]
    fn covers_share_refinement_tables(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_env(&mut r, 4, 3, true);
        if let Some((cover, _)) = random_cover(&mut r, &base) {
            prop_assert_eq!(degree_refinement(&base).table, degree_refinement(&cover).table);
        }
    }

    #[test]
    fn truncated_cover_is_faithful_below_radius(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_env(&mut r, 4, 3, false);
        let radius = rational(3, 1);
        let ball = universal_cover_truncation(&base, &radius).unwrap();
        let cert = verify_covering_except(&ball.map, &ball.env, &base, &ball.boundary).unwrap();
        prop_assert!(cert.is_local_covering(), "{:?}", cert.violations);
        for _ in 0..20 {
            let u = random_signal_of(&mut r, &base, 5).restrict_before(&rational(35, 12));
            prop_assert_eq!(ball.env.trace_of(&u), base.trace_of(&u));
        }
    }
}

#[test]
fn crossing_graphs_have_different_tables() {
    let pair = crossing_pair();
    assert_ne!(
        degree_refinement(&pair.left).table,
        degree_refinement(&pair.right).table
    );
    assert_eq!(degree_refinement(&cycle(3)).table, degree_refinement(&cycle(6)).table);
}
