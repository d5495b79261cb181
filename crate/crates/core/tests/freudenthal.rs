mod common;

use std::sync::Arc;

use common::{grid, q};
use hullforge_core::freudenthal::{approximate, level_regions, sup_error};
use hullforge_core::geometry::Domain;
use hullforge_core::hull::HullElement;
use hullforge_core::plfun::PlFunction;
use hullforge_core::term::parse_term;
use hullforge_core::{gen, Q};
use num_traits::Signed;
use proptest::prelude::*;

fn compile(text: &str, x: &Arc<Domain<Q>>) -> PlFunction<Q> {
    PlFunction::compile(&parse_term(text).unwrap(), x).unwrap()
}

/// `s(p) = max(⌈n·m⌉, ⌈n·g(p)⌉ − 1) / n` wherever `n·g(p)` is not an
/// integer, read off the definition of the level sets.
fn expected_step(value: &Q, base: &Q, n: i64) -> Q {
    let scaled = value * q(n, 1);
    let level = (scaled.ceil() - q(1, 1)).max(base.clone());
    level / q(n, 1)
}

fn check(g: &PlFunction<Q>, n: i64) {
    let s = approximate(g, n).unwrap();
    let err = sup_error(g, &s).unwrap();
    assert!(err.value <= q(1, n), "error {} for n = {n}", err.value);
    let gap = (g.evaluate(&err.point).unwrap() - s.pieces()[err.piece].1.clone()).abs();
    assert_eq!(gap, err.value);
    let (base, levels) = level_regions(g, n).unwrap();
    for (_, region) in &levels {
        assert!(HullElement::char_elem(region).is_component());
    }
    for p in grid(g.domain().dim(), 12) {
        let v = g.evaluate(&p).unwrap();
        let sv = s.evaluate(&p).unwrap();
        assert!((v.clone() - sv.clone()).abs() <= err.value);
        if !(v.clone() * q(n, 1)).is_integer() {
            assert_eq!(sv, expected_step(&v, &base, n));
        }
    }
}

#[test]
fn named_functions() {
    let line = Domain::unit_cube(1);
    let square = Domain::unit_cube(2);
    for n in 1..=16 {
        for text in ["x1", "(2*x1 - 1) v 0", "x1 v (1 - x1)"] {
            check(&compile(text, &line), n);
        }
        for text in ["x1 v x2", "abs(x1 - x2)"] {
            check(&compile(text, &square), n);
        }
    }
}

#[test]
fn step_element_matches_hull_form() {
    let x = Domain::unit_cube(1);
    let g = compile("x1 v (1 - x1)", &x);
    let s = approximate(&g, 4).unwrap();
    let h = s.to_hull();
    for p in grid(1, 40) {
        if !(g.evaluate(&p).unwrap() * q(4, 1)).is_integer() {
            assert_eq!(h.evaluate(&p).unwrap(), s.evaluate(&p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_certificates(seed in any::<u64>(), which in 1usize..=2, n in 1i64..=16) {
        let x = Domain::unit_cube(which);
        let g = gen::function(&mut gen::rng(seed), &x, 4);
        check(&g, n);
        let fine = sup_error(&g, &approximate(&g, 2 * n).unwrap()).unwrap();
        prop_assert!(fine.value <= q(1, 2 * n));
    }
}
