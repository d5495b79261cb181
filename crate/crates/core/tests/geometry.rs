mod common;

use std::sync::Arc;

use common::{grid, q};
use hullforge_core::geometry::{Affine, Arrangement, Domain, Halfspace, Hyperplane};
use hullforge_core::{gen, Error, Q};
use proptest::prelude::*;
use rand::Rng;

fn random_hyperplanes(rng: &mut gen::Rng8, dim: usize, k: usize) -> Vec<Hyperplane<Q>> {
    let mut out = Vec::new();
    while out.len() < k {
        let normal: Vec<Q> = (0..dim).map(|_| q(rng.gen_range(-3..=3), 1)).collect();
        let offset = q(rng.gen_range(-4..=8), rng.gen_range(1..=4));
        if let Ok(h) = Hyperplane::new(normal, offset) {
            out.push(h);
        }
    }
    out
}

fn triangle() -> Arc<Domain<Q>> {
    Domain::new(
        2,
        vec![
            Halfspace::new(vec![q(-1, 1), q(0, 1)], q(0, 1)),
            Halfspace::new(vec![q(0, 1), q(-1, 1)], q(0, 1)),
            Halfspace::new(vec![q(1, 1), q(1, 1)], q(1, 1)),
        ],
    )
    .unwrap()
}

#[test]
fn domain_validation() {
    let empty = Domain::new(1, vec![Halfspace::new(vec![q(1, 1)], q(0, 1)), Halfspace::new(vec![q(-1, 1)], q(-1, 1))]);
    assert_eq!(empty.unwrap_err(), Error::EmptyDomain);
    let unbounded = Domain::new(1, vec![Halfspace::new(vec![q(1, 1)], q(0, 1))]);
    assert_eq!(unbounded.unwrap_err(), Error::UnboundedDomain);
    let flat = Domain::new(
        2,
        vec![
            Halfspace::new(vec![q(1, 1), q(0, 1)], q(1, 1)),
            Halfspace::new(vec![q(-1, 1), q(0, 1)], q(0, 1)),
            Halfspace::new(vec![q(0, 1), q(1, 1)], q(0, 1)),
            Halfspace::new(vec![q(0, 1), q(-1, 1)], q(0, 1)),
        ],
    );
    assert_eq!(flat.unwrap_err(), Error::DegenerateDomain);
    assert_eq!(triangle().volume(), Some(q(1, 2)));
}

#[test]
fn cell_extrema_examples() {
    let x = Domain::unit_cube(1);
    let arr = Arrangement::from_rows(&x, vec![(vec![q(1, 1)], q(1, 2))]).unwrap();
    let f = Affine::new(vec![q(2, 1)], q(-1, 1));
    assert_eq!(arr.cell_extrema(&f, 1), (q(0, 1), q(1, 1)));
    assert_eq!(arr.cell_extrema_lp(&f, 1), (q(0, 1), q(1, 1)));
    let five = Affine::constant(1, q(5, 1));
    assert_eq!(arr.cell_extrema(&five, 0), (q(5, 1), q(5, 1)));
    let sq = Domain::unit_cube(2);
    let triv = Arrangement::trivial(&sq);
    let sum = Affine::new(vec![q(1, 1), q(1, 1)], q(0, 1));
    assert_eq!(triv.cell_extrema(&sum, 0), (q(0, 1), q(2, 1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volumes_partition_domain(seed in any::<u64>(), k in 0usize..6, use_triangle in any::<bool>()) {
        let x = if use_triangle { triangle() } else { Domain::unit_cube(2) };
        let mut rng = gen::rng(seed);
        let arr = Arrangement::build(&x, random_hyperplanes(&mut rng, 2, k)).unwrap();
        let total: Q = arr.cells().iter().map(|c| c.closure().volume().unwrap()).sum();
        prop_assert_eq!(Some(total), x.volume());
    }

    #[test]
    fn refine_commutes_and_associates(seed in any::<u64>()) {
        let x = Domain::unit_cube(2);
        let mut rng = gen::rng(seed);
        let a = Arrangement::build(&x, random_hyperplanes(&mut rng, 2, 2)).unwrap();
        let b = Arrangement::build(&x, random_hyperplanes(&mut rng, 2, 2)).unwrap();
        let c = Arrangement::build(&x, random_hyperplanes(&mut rng, 2, 1)).unwrap();
        let ab = Arrangement::refine(&a, &b).unwrap();
        let ba = Arrangement::refine(&b, &a).unwrap();
        prop_assert!(ab.same_hyperplanes(&ba));
        prop_assert_eq!(ab.len(), ba.len());
        let l = Arrangement::refine(&ab, &c).unwrap();
        let r = Arrangement::refine(&a, &Arrangement::refine(&b, &c).unwrap()).unwrap();
        prop_assert!(l.same_hyperplanes(&r));
        prop_assert_eq!(l.len(), r.len());
        // every refined cell lies in exactly one cell of each input
        prop_assert_eq!(ab.project_onto(&a).unwrap().len(), ab.len());
    }

    #[test]
    fn extrema_bound_samples_and_agree_with_simplex(seed in any::<u64>(), dim in 1usize..=3) {
        let x = Domain::unit_cube(dim);
        let mut rng = gen::rng(seed);
        let arr = Arrangement::build(&x, random_hyperplanes(&mut rng, dim, 3)).unwrap();
        let f = Affine::new((0..dim).map(|_| q(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect(), q(rng.gen_range(-2..=2), 1));
        for i in 0..arr.len() {
            let (lo, hi) = arr.cell_extrema(&f, i);
            prop_assert_eq!((lo.clone(), hi.clone()), arr.cell_extrema_lp(&f, i));
            for p in grid(dim, 4) {
                if arr.cells_containing(&p).unwrap().contains(&i) {
                    let v = f.eval(&p);
                    prop_assert!(lo <= v && v <= hi);
                }
            }
        }
    }

    #[test]
    fn point_location_is_consistent(seed in any::<u64>()) {
        let x = Domain::unit_cube(2);
        let mut rng = gen::rng(seed);
        let arr = Arrangement::build(&x, random_hyperplanes(&mut rng, 2, 3)).unwrap();
        for p in grid(2, 6) {
            let face = arr.locate(&p).unwrap();
            let containing = arr.cells_containing(&p).unwrap();
            prop_assert!(!containing.is_empty());
            match face.cell {
                Some(c) => prop_assert_eq!(containing, vec![c]),
                None => prop_assert!(face.dimension < 2),
            }
        }
    }
}
