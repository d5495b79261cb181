#![allow(dead_code)]

use hullforge_core::gen::Rng8;
use hullforge_core::Q;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// All points of `{0, 1/k, ..., 1}^dim`.
pub fn grid(dim: usize, k: i64) -> Vec<Vec<Q>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |i| {
                    let mut p = p.clone();
                    p.push(q(i, k));
                    p
                })
            })
            .collect();
    }
    out
}

/// A random rational point of the unit cube with denominators up to 97.
pub fn random_point(rng: &mut Rng8, dim: usize) -> Vec<Q> {
    (0..dim)
        .map(|_| {
            let d = rng.gen_range(1..=97i64);
            q(rng.gen_range(0..=d), d)
        })
        .collect()
}
