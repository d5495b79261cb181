//! Seeded random instances: terms, regions, hull expressions and
//! parabola-vanishing traces. Used by the property tests and the acceptance
//! suite; every generator is deterministic given the RNG state.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::boolalg::RcSet;
use crate::error::Result;
use crate::geometry::{Arrangement, Domain, Hyperplane};
use crate::hull::HullElement;
use crate::plfun::PlFunction;
use crate::term::Term;
use crate::Q;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut Rng8) -> Q {
    let d = *[1i64, 2, 3, 4].choose(rng).expect("nonempty");
    let n = rng.gen_range(-2 * d..=2 * d);
    Q::new(n.into(), d.into())
}

/// A random term over `x1..x_dim` of depth at most `depth`.
pub fn term(rng: &mut Rng8, dim: usize, depth: usize) -> Term<Q> {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) {
            Term::var(rng.gen_range(1..=dim))
        } else {
            Term::Const(small_rational(rng))
        };
    }
    let sub = |rng: &mut Rng8| term(rng, dim, depth - 1);
    match rng.gen_range(0..8) {
        0 => sub(rng).add(sub(rng)),
        1 => sub(rng).sub(sub(rng)),
        2 => sub(rng).neg(),
        3 => sub(rng).scale(*[-2i64, 2, 3].choose(rng).expect("nonempty")),
        4 | 5 => sub(rng).join(sub(rng)),
        6 => sub(rng).meet(sub(rng)),
        _ => sub(rng).abs(),
    }
}

pub fn function(rng: &mut Rng8, domain: &Arc<Domain<Q>>, depth: usize) -> PlFunction<Q> {
    let t = term(rng, domain.dim(), depth);
    PlFunction::compile(&t, domain).expect("variables are within the domain")
}

/// A random function with `f >= 0`.
pub fn nonnegative_function(rng: &mut Rng8, domain: &Arc<Domain<Q>>, depth: usize) -> PlFunction<Q> {
    let t = term(rng, domain.dim(), depth);
    let t = if rng.gen_bool(0.5) { t.abs() } else { t.positive_part() };
    PlFunction::compile(&t, domain).expect("variables are within the domain")
}

/// A hyperplane through a random rational point of the domain.
fn hyperplane(rng: &mut Rng8, domain: &Arc<Domain<Q>>) -> Hyperplane<Q> {
    let vertices: Vec<&Vec<Q>> = domain.polytope().vertex_points().collect();
    loop {
        let mut weights: Vec<Q> = vertices.iter().map(|_| Q::from_integer(rng.gen_range(1..=4).into())).collect();
        let total: Q = weights.iter().cloned().sum();
        for w in weights.iter_mut() {
            *w = w.clone() / total.clone();
        }
        let point: Vec<Q> = (0..domain.dim())
            .map(|j| {
                vertices
                    .iter()
                    .zip(&weights)
                    .map(|(v, w)| v[j].clone() * w.clone())
                    .sum()
            })
            .collect();
        let normal: Vec<Q> = (0..domain.dim())
            .map(|_| Q::from_integer(rng.gen_range(-3..=3).into()))
            .collect();
        let offset: Q = normal.iter().zip(&point).map(|(a, x)| a.clone() * x.clone()).sum();
        if let Ok(h) = Hyperplane::new(normal, offset) {
            return h;
        }
    }
}

/// A random union of cells of a random arrangement with up to three
/// hyperplanes.
pub fn rcset(rng: &mut Rng8, domain: &Arc<Domain<Q>>) -> RcSet<Q> {
    let k = rng.gen_range(1..=3);
    let hs = (0..k).map(|_| hyperplane(rng, domain)).collect();
    let arr = Arrangement::build(domain, hs).expect("hyperplanes match the domain");
    let mask = (0..arr.len()).map(|_| rng.gen_bool(0.5)).collect();
    RcSet::from_mask(arr, mask)
}

/// A random hull expression of depth at most `depth`, built from embedded
/// functions and characteristic elements.
pub fn hull(rng: &mut Rng8, domain: &Arc<Domain<Q>>, depth: usize) -> Result<HullElement<Q>> {
    if depth == 0 || rng.gen_bool(0.25) {
        return Ok(if rng.gen_bool(0.5) {
            HullElement::embed(&function(rng, domain, 2))
        } else {
            HullElement::char_elem(&rcset(rng, domain))
        });
    }
    let a = hull(rng, domain, depth - 1)?;
    Ok(match rng.gen_range(0..6) {
        0 => a.add(&hull(rng, domain, depth - 1)?)?,
        1 => a.sub(&hull(rng, domain, depth - 1)?)?,
        2 => a.neg(),
        3 => a.join(&hull(rng, domain, depth - 1)?)?,
        4 => a.meet(&hull(rng, domain, depth - 1)?)?,
        _ => a.cochar(),
    })
}

/// A random hull element with `e > 0`.
pub fn positive_hull(rng: &mut Rng8, domain: &Arc<Domain<Q>>, depth: usize) -> Result<HullElement<Q>> {
    loop {
        let e = hull(rng, domain, depth)?.abs();
        if !e.is_zero() {
            return Ok(e);
        }
    }
}

/// A random partition of the domain into nonempty regions.
pub fn partition(rng: &mut Rng8, domain: &Arc<Domain<Q>>) -> Vec<RcSet<Q>> {
    let k = rng.gen_range(1..=2);
    let hs = (0..k).map(|_| hyperplane(rng, domain)).collect();
    let arr = Arrangement::build(domain, hs).expect("hyperplanes match the domain");
    let colours = rng.gen_range(1..=arr.len());
    let labels: Vec<usize> = (0..arr.len()).map(|_| rng.gen_range(0..colours)).collect();
    (0..colours)
        .map(|c| RcSet::from_mask(arr.clone(), labels.iter().map(|&l| l == c).collect()))
        .filter(|r| !r.is_empty())
        .collect()
}

/// A nonnegative term on `[0, 1]²` that is identically zero on the
/// parabola `y = x²` near the origin.
pub fn parabola_flat_factor(rng: &mut Rng8) -> Term<Q> {
    let n = rng.gen_range(1..=6i64);
    let m = rng.gen_range(0..=40i64);
    let k = rng.gen_range(1..=5i64);
    match rng.gen_range(0..4) {
        // ((n·x1 − 1) ∨ 0 − m·x2) ∨ 0
        0 => Term::var(1)
            .scale(n)
            .sub(Term::one())
            .join(Term::zero())
            .sub(Term::var(2).scale(m.max(1)))
            .join(Term::zero()),
        // (x2 − k·x1) ∨ 0
        1 => Term::var(2).sub(Term::var(1).scale(k)).join(Term::zero()),
        // (n·x1 − k·x2 − 1) ∨ 0
        2 => Term::var(1)
            .scale(n)
            .sub(Term::var(2).scale(k))
            .sub(Term::one())
            .join(Term::zero()),
        // (k·x2 − x1) ∨ 0
        _ => Term::var(2).scale(k).sub(Term::var(1)).join(Term::zero()),
    }
}

/// `(r⁺ ∧ c·v) − (r⁻ ∧ c·v)` for a random term `r` and a random join of
/// flat factors `v`: vanishes wherever `v` does, in particular on the
/// parabola germ at the origin.
pub fn parabola_vanishing_term(rng: &mut Rng8) -> Term<Q> {
    let r = term(rng, 2, 3);
    let mut v = parabola_flat_factor(rng);
    for _ in 0..rng.gen_range(0..2) {
        v = v.join(parabola_flat_factor(rng));
    }
    let c = rng.gen_range(1..=8i64);
    let cap = v.scale(c);
    r.clone()
        .positive_part()
        .meet(cap.clone())
        .sub(r.negative_part().meet(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = term(&mut rng(7), 2, 4);
        let b = term(&mut rng(7), 2, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn positive_hull_is_positive() {
        let x = Domain::unit_cube(1);
        let mut r = rng(3);
        for _ in 0..5 {
            assert!(positive_hull(&mut r, &x, 2).unwrap().is_positive());
        }
    }

    #[test]
    fn partitions_cover() {
        let sq = Domain::unit_cube(2);
        let mut r = rng(11);
        for _ in 0..5 {
            let parts = partition(&mut r, &sq);
            let union = parts
                .iter()
                .fold(RcSet::empty(&sq), |acc, p| acc.join(p).unwrap());
            assert!(union.is_full());
        }
    }
}
