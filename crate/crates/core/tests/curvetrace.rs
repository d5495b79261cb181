mod common;

use common::q;
use hullforge_core::curvetrace::{
    cover_gap, h_term, parabola_family, pi_y_term, Branch, Dir, Interval, IntervalSet, QuadReal, TraceElement,
};
use hullforge_core::term::Term;
use hullforge_core::{gen, Q};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn samples() -> Vec<Q> {
    (0..=60).map(|k| q(k, 60)).chain([q(1, 7), q(5, 13), q(22, 23)]).collect()
}

/// Branch values read directly off the term.
fn check_against_term(t: &Term<Q>, e: &TraceElement) {
    for s in samples() {
        let on_par = t.eval(&[s.clone(), s.clone() * s.clone()]);
        let on_seg = t.eval(&[s.clone(), q(0, 1)]);
        assert_eq!(e.par().evaluate(&s).unwrap(), on_par);
        assert_eq!(e.seg().evaluate(&s).unwrap(), on_seg);
    }
}

fn open_closed(hi: Q, closed: bool) -> IntervalSet {
    IntervalSet::single(Interval::new(QuadReal::zero(), false, QuadReal::rational(hi), closed))
}

#[test]
fn family_cover_gap() {
    for n in 1..=32 {
        let gap = cover_gap(&parabola_family(n).unwrap()).unwrap();
        assert!(gap.par_plus.is_empty());
        assert!(gap.par_minus.is_empty());
        assert_eq!(gap.seg_plus, open_closed(q(1, n), false));
        assert_eq!(gap.seg_minus, open_closed(q(1, n), true));
    }
}

#[test]
fn projection_germs() {
    let y = TraceElement::restrict(&pi_y_term()).unwrap();
    assert!(y.germ_support(Branch::Seg, Dir::Plus).is_empty());
    assert!(y.germ_support(Branch::Seg, Dir::Minus).is_empty());
    let expected = IntervalSet::single(Interval::new(QuadReal::zero(), true, QuadReal::one(), false));
    assert_eq!(y.germ_support(Branch::Par, Dir::Plus), expected);
    for n in 1..=8 {
        let h = TraceElement::restrict(&h_term(n)).unwrap();
        assert!(h.par().is_zero());
        assert_eq!(h.segment_flat_radius(), Some(q(1, n)));
    }
}

/// `a < b` decided from rational enclosures alone.
fn enclosure_compare(a: &QuadReal, b: &QuadReal) -> Option<std::cmp::Ordering> {
    let mut m = BigInt::from(4);
    for _ in 0..64 {
        let (alo, ahi) = a.bounds(&m);
        let (blo, bhi) = b.bounds(&m);
        if ahi < blo {
            return Some(std::cmp::Ordering::Less);
        }
        if bhi < alo {
            return Some(std::cmp::Ordering::Greater);
        }
        m *= 4;
    }
    None
}

fn random_quad(rng: &mut impl Rng) -> QuadReal {
    let d = [2, 3, 5, 8, 12, 18, 50][rng.gen_range(0..7)];
    QuadReal::new(
        q(rng.gen_range(-20..=20), rng.gen_range(1..=9)),
        q(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
        q(d, 1),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_routes_agree(seed in any::<u64>()) {
        let t = gen::term(&mut gen::rng(seed), 2, 4);
        let geometric = TraceElement::restrict(&t).unwrap();
        let algebraic = TraceElement::restrict_algebraic(&t).unwrap();
        prop_assert!(geometric.equals(&algebraic));
        check_against_term(&t, &geometric);
    }

    #[test]
    fn vanishing_implication(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::parabola_vanishing_term(&mut rng);
        let e = TraceElement::restrict(&t).unwrap();
        check_against_term(&t, &e);
        prop_assert!(e.vanishes_on_parabola_germ());
        let r = e.segment_flat_radius();
        prop_assert!(matches!(r, Some(ref r) if *r > q(0, 1)));
        // any element vanishing on the parabola germ is flat on the segment
        let other = TraceElement::restrict(&gen::term(&mut rng, 2, 4)).unwrap();
        if other.vanishes_on_parabola_germ() {
            prop_assert!(other.segment_flat_radius().is_some());
        }
    }

    #[test]
    fn trace_operations_are_pointwise(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (s, t) = (gen::term(&mut rng, 2, 3), gen::term(&mut rng, 2, 3));
        let (a, b) = (TraceElement::restrict(&s).unwrap(), TraceElement::restrict(&t).unwrap());
        check_against_term(&s.clone().add(t.clone()), &a.add(&b));
        check_against_term(&s.clone().join(t.clone()), &a.join(&b));
        check_against_term(&s.clone().meet(t.clone()), &a.meet(&b));
        check_against_term(&s.abs(), &a.abs());
    }

    #[test]
    fn quadratic_ordering(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let a = random_quad(&mut rng);
        let b = random_quad(&mut rng);
        if let Some(ord) = enclosure_compare(&a, &b) {
            prop_assert_eq!(a.cmp(&b), ord);
            if ord == std::cmp::Ordering::Less {
                let r = QuadReal::rational_between(&a, &b);
                prop_assert!(a < QuadReal::rational(r.clone()) && QuadReal::rational(r) < b);
            }
        } else {
            prop_assert_eq!(a.cmp(&b), std::cmp::Ordering::Equal);
        }
        let sum = a.add(&a.neg()).unwrap();
        prop_assert_eq!(sum.signum(), 0);
    }
}
