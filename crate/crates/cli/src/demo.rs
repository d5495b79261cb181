//! The parabola demo: traces of the curve group, cover gaps of the family
//! `{π_y, h_1, …, h_N}` and the vanishing implication on a random corpus.

use hullforge_core::curvetrace::{cover_gap, h_term, pi_y_term, Interval, IntervalSet, QuadReal, TraceElement};
use hullforge_core::scalar::fmt_exact;
use hullforge_core::{gen, Q};
use serde_json::{json, Value};

pub const CORPUS_SEED: u64 = 0x5eed_0601;
pub const CORPUS_SIZE: usize = 100;

/// `(0, 1/n)` on the segment, the gap the family must leave open.
pub fn segment_gap(n: i64, closed: bool) -> IntervalSet {
    let hi = QuadReal::rational(Q::new(1.into(), n.into()));
    IntervalSet::single(Interval::new(QuadReal::zero(), false, hi, closed))
}

#[derive(Debug, Clone)]
pub struct ParabolaReport {
    pub json: Value,
    pub verified: bool,
}

pub fn parabola(max_n: i64) -> hullforge_core::Result<ParabolaReport> {
    let y = TraceElement::restrict(&pi_y_term())?;
    let mut family = vec![y.clone()];
    let mut rows = Vec::new();
    let mut verified = true;
    for n in 1..=max_n {
        let h = TraceElement::restrict(&h_term(n))?;
        let flat_ok = h.par().is_zero() && h.segment_flat_radius() == Some(Q::new(1.into(), n.into()));
        family.push(h);
        let gap = cover_gap(&family)?;
        let open = segment_gap(n, false);
        let contains = open.difference(&gap.seg_plus).is_empty();
        let exact = gap.par_plus.is_empty()
            && gap.par_minus.is_empty()
            && gap.seg_plus == open
            && gap.seg_minus == segment_gap(n, true);
        verified &= flat_ok && contains && exact;
        rows.push(json!({
            "n": n,
            "par+": gap.par_plus.to_string(),
            "par-": gap.par_minus.to_string(),
            "seg+": gap.seg_plus.to_string(),
            "seg-": gap.seg_minus.to_string(),
            "h_n_flat_on_parabola": flat_ok,
            "gap_contains_open_segment": contains,
        }));
    }

    let mut rng = gen::rng(CORPUS_SEED);
    let mut radii = Vec::with_capacity(CORPUS_SIZE);
    let mut all_flat = true;
    for _ in 0..CORPUS_SIZE {
        let t = TraceElement::restrict(&gen::parabola_vanishing_term(&mut rng))?;
        match t.segment_flat_radius() {
            Some(r) if t.vanishes_on_parabola_germ() && r > Q::from_integer(0.into()) => radii.push(r),
            _ => all_flat = false,
        }
    }
    verified &= all_flat;
    let min_radius = radii.iter().min().map(fmt_exact);

    use hullforge_core::curvetrace::{Branch, Dir};
    let y_ok = y.germ_support(Branch::Seg, Dir::Plus).is_empty()
        && y.germ_support(Branch::Seg, Dir::Minus).is_empty()
        && y.germ_support(Branch::Par, Dir::Plus)
            == IntervalSet::single(Interval::new(QuadReal::zero(), true, QuadReal::one(), false));
    verified &= y_ok;

    let json = json!({
        "max_n": max_n,
        "projection": {
            "par": y.par().to_string(),
            "seg": y.seg().to_string(),
            "par+": y.germ_support(Branch::Par, Dir::Plus).to_string(),
            "seg+": y.germ_support(Branch::Seg, Dir::Plus).to_string(),
            "seg-": y.germ_support(Branch::Seg, Dir::Minus).to_string(),
            "verified": y_ok,
        },
        "cover_gaps": rows,
        "vanishing_corpus": {
            "seed": CORPUS_SEED,
            "size": CORPUS_SIZE,
            "all_flat_on_segment": all_flat,
            "min_flat_radius": min_radius,
        },
        "conclusion": if verified { "complemented: false; Z_G non-compact" } else { "inconclusive" },
        "not_verified": ["w_G Z_G is homeomorphic to the Stone-Cech compactification of Z_G"],
        "verified": verified,
    });
    Ok(ParabolaReport { json, verified })
}
