mod common;

use common::{rat_strategy, signal_strategy};
use envequiv::{rational, Rational, Signal, Symbol};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn sig() -> impl Strategy<Value = Signal> {
    signal_strategy(2, 6)
}

/// Brute-force distance: integrate the symbol mismatch over a grid fine
/// enough to align with every breakpoint (all durations are multiples of
/// 1/12 here).
fn grid_distance(a: &Signal, b: &Signal) -> Rational {
    let step = rational(1, 12);
    let horizon = if a.duration() < b.duration() { a.duration() } else { b.duration() };
    let mut total = Rational::zero();
    let mut t = Rational::zero();
    while &t < horizon {
        let mid = t.clone() + step.clone() / rational(2, 1);
        if a.symbol_at(&mid) != b.symbol_at(&mid) {
            total += step.clone();
        }
        t += step.clone();
    }
    total + (a.duration() - b.duration()).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn metric_axioms(a in sig(), b in sig(), c in sig()) {
        let ab = a.distance(&b);
        prop_assert_eq!(&ab, &b.distance(&a));
        prop_assert_eq!(ab.is_zero(), a == b);
        prop_assert!(!ab.is_negative());
        prop_assert!(a.distance(&c) <= ab + b.distance(&c));
    }

    #[test]
    fn distance_matches_grid_integral(a in sig(), b in sig()) {
        prop_assert_eq!(a.distance(&b), grid_distance(&a, &b));
    }

    #[test]
    fn segmentation_closure(u in sig(), frac in 0i64..=12) {
        let t = u.duration() * rational(frac, 12);
        let rebuilt = u.restrict_before(&t).concat(&u.suffix_from(&t).unwrap());
        prop_assert_eq!(rebuilt, u);
    }

    #[test]
    fn concat_splits_back(a in sig(), b in sig()) {
        let ab = a.concat(&b);
        prop_assert_eq!(ab.restrict_before(a.duration()), a.clone());
        prop_assert_eq!(ab.suffix_from(a.duration()).unwrap(), b);
    }

    #[test]
    fn concat_is_associative(a in sig(), b in sig(), c in sig()) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
    }

    #[test]
    fn restriction_is_lipschitz(u in sig(), v in sig(), t in rat_strategy(20), s in rat_strategy(20)) {
        let lhs = u.restrict_before(&t).distance(&v.restrict_before(&s));
        prop_assert!(lhs <= u.distance(&v) + (t - s).abs());
    }

    #[test]
    fn prefixes_form_a_tree(c in sig(), x in 0i64..=12, y in 0i64..=12) {
        let a = c.restrict_before(&(c.duration() * rational(x, 12)));
        let b = c.restrict_before(&(c.duration() * rational(y, 12)));
        let (a, b) = if a.duration() <= b.duration() { (a, b) } else { (b, a) };
        if a.is_strict_prefix(&c) && b.is_strict_prefix(&c) {
            prop_assert!(a.is_strict_prefix(&b) || a == b);
        }
    }

    #[test]
    fn strict_prefix_definition(a in sig(), b in sig()) {
        let expected = a.duration() < b.duration() && b.restrict_before(a.duration()) == a;
        prop_assert_eq!(a.is_strict_prefix(&b), expected);
        if !b.is_empty() {
            prop_assert!(a.is_strict_prefix(&a.concat(&b)));
        }
        prop_assert!(!a.is_strict_prefix(&a));
    }

    #[test]
    fn geodesic_is_additive(a in sig(), b in sig(), k in 0i64..=4) {
        let s = rational(k, 4);
        let g = a.geodesic(&b, &s).unwrap();
        prop_assert_eq!(g.distance(&a) + g.distance(&b), a.distance(&b));
        if k == 0 { prop_assert_eq!(&g, &a); }
        if k == 4 { prop_assert_eq!(&g, &b); }
    }
}

#[test]
fn geodesic_example_midpoint() {
    let a = Signal::constant(Symbol::Port(0), rational(2, 1));
    let b = Signal::constant(Symbol::Port(1), rational(4, 1));
    let g = a.geodesic(&b, &rational(1, 2)).unwrap();
    let expected = Signal::from_pieces([
        (Symbol::Port(1), rational(1, 1)),
        (Symbol::Port(0), rational(1, 1)),
        (Symbol::Port(1), rational(1, 1)),
    ])
    .unwrap();
    assert_eq!(g, expected);
    assert_eq!(g.distance(&a) + g.distance(&b), a.distance(&b));
}

#[test]
fn out_of_range_arguments_are_rejected() {
    let a = Signal::constant(Symbol::Port(0), rational(2, 1));
    assert!(a.suffix_from(&rational(3, 1)).is_err());
    assert!(a.geodesic(&a, &rational(3, 2)).is_err());
    assert!(a.geodesic(&a, &rational(-1, 2)).is_err());
}
