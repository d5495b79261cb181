mod common;

use std::sync::Arc;

use common::random_point;
use hullforge_core::geometry::Domain;
use hullforge_core::hull::{
    component_product, essential_witness, hull_morphism, hull_morphism_direct, polar_split, HullElement,
    MorphismSpec,
};
use hullforge_core::{gen, Q};
use proptest::prelude::*;

fn domain(which: usize) -> Arc<Domain<Q>> {
    Domain::unit_cube(which + 1)
}

fn rebuild(e: &HullElement<Q>) -> HullElement<Q> {
    let mut acc = HullElement::zero(e.domain());
    for p in e.pieces() {
        let chi = HullElement::char_elem(&p.region);
        acc = acc.add(&component_product(&p.value, &chi).unwrap()).unwrap();
    }
    acc
}

/// True when the point lies in exactly one piece of each element.
fn generic(point: &[Q], elements: &[&HullElement<Q>]) -> bool {
    elements.iter().all(|e| {
        e.pieces()
            .iter()
            .filter(|p| p.region.contains_point(point).unwrap())
            .count()
            == 1
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_round_trip(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let e = gen::hull(&mut gen::rng(seed), &x, 5).unwrap();
        prop_assert!(rebuild(&e).equals(&e).unwrap());
        prop_assert!(e.normalize().equals(&e).unwrap());
    }

    #[test]
    fn pointwise_operations(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let e = gen::hull(&mut rng, &x, 3).unwrap();
        let f = gen::hull(&mut rng, &x, 3).unwrap();
        let (sum, join, meet) = (e.add(&f).unwrap(), e.join(&f).unwrap(), e.meet(&f).unwrap());
        for _ in 0..30 {
            let p = random_point(&mut rng, x.dim());
            if !generic(&p, &[&e, &f, &sum, &join, &meet]) {
                continue;
            }
            let (a, b) = (e.evaluate(&p).unwrap(), f.evaluate(&p).unwrap());
            prop_assert_eq!(sum.evaluate(&p).unwrap(), a.clone() + b.clone());
            prop_assert_eq!(join.evaluate(&p).unwrap(), a.clone().max(b.clone()));
            prop_assert_eq!(meet.evaluate(&p).unwrap(), a.min(b));
        }
    }

    #[test]
    fn polar_split_identities(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let e = gen::hull(&mut rng, &x, 4).unwrap();
        let v = gen::hull(&mut rng, &x, 4).unwrap();
        let s = polar_split(&e, &v).unwrap();
        prop_assert!(s.verified());
        // independent checks of the same identities
        prop_assert!(s.inside.add(&s.outside).unwrap().sub(&e).unwrap().is_zero());
        prop_assert!(s.outside.support().meet(&v.support()).unwrap().is_empty());
    }

    #[test]
    fn essential_witness_is_dominated(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let e = gen::positive_hull(&mut gen::rng(seed), &x, 4).unwrap();
        let w = essential_witness(&e).unwrap();
        prop_assert!(w.verified);
        let h = HullElement::embed(&w.h);
        prop_assert!(h.is_positive());
        prop_assert!(h.leq(&e.scale(w.n)).unwrap());
    }

    #[test]
    fn morphism_agrees_with_direct_route(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let spec = MorphismSpec::new(gen::rcset(&mut rng, &x).arrangement().clone());
        let e = gen::hull(&mut rng, &x, 4).unwrap();
        let a = hull_morphism(&spec, &e).unwrap();
        prop_assert!(a.equals(&hull_morphism_direct(&spec, &e).unwrap()).unwrap());
        // the target is the identity on the domain, so φ(e) = e
        prop_assert!(a.equals(&e).unwrap());
    }

    #[test]
    fn morphism_restricts_to_embedding(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let spec = MorphismSpec::new(gen::rcset(&mut rng, &x).arrangement().clone());
        let g = gen::function(&mut rng, &x, 4);
        let image = hull_morphism(&spec, &HullElement::embed(&g)).unwrap();
        prop_assert!(image.equals(&HullElement::embed(&spec.iota(&g))).unwrap());
    }

    #[test]
    fn morphism_is_homomorphism(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let spec = MorphismSpec::new(gen::rcset(&mut rng, &x).arrangement().clone());
        let e = gen::hull(&mut rng, &x, 3).unwrap();
        let f = gen::hull(&mut rng, &x, 3).unwrap();
        let phi = |h: &HullElement<Q>| hull_morphism(&spec, h).unwrap();
        prop_assert!(phi(&e.add(&f).unwrap()).equals(&phi(&e).add(&phi(&f)).unwrap()).unwrap());
        prop_assert!(phi(&e.join(&f).unwrap()).equals(&phi(&e).join(&phi(&f)).unwrap()).unwrap());
        prop_assert!(phi(&e.meet(&f).unwrap()).equals(&phi(&e).meet(&phi(&f)).unwrap()).unwrap());
        // injective: φ(e − f) = 0 exactly when e = f
        prop_assert_eq!(phi(&e.sub(&f).unwrap()).is_zero(), e.equals(&f).unwrap());
    }

    #[test]
    fn morphism_ignores_decomposition(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let mut rng = gen::rng(seed);
        let spec = MorphismSpec::new(gen::rcset(&mut rng, &x).arrangement().clone());
        let e = gen::hull(&mut rng, &x, 4).unwrap();
        let cut = e.refine_by(&gen::partition(&mut rng, &x)).unwrap();
        prop_assert!(cut.len() >= e.len());
        let a = hull_morphism(&spec, &e).unwrap();
        let b = hull_morphism(&spec, &cut).unwrap();
        prop_assert!(a.equals(&b).unwrap());
    }

    #[test]
    fn components_of_unit(seed in any::<u64>(), which in 0usize..2) {
        let x = domain(which);
        let r = gen::rcset(&mut gen::rng(seed), &x);
        let chi = HullElement::char_elem(&r);
        prop_assert!(chi.is_component());
        let u = HullElement::unit(&x);
        let rest = u.sub(&chi).unwrap();
        prop_assert!(chi.join(&rest).unwrap().equals(&u).unwrap());
        prop_assert!(chi.meet(&rest).unwrap().is_zero());
        prop_assert!(chi.component_region().unwrap().equals(&r).unwrap());
    }
}
