//! Uniform approximation by rational combinations of components of the
//! unit, with exact error certificates.

use std::fmt;
use std::sync::Arc;

use crate::boolalg::{principal_polar, RcSet};
use crate::error::{Error, Result};
use crate::geometry::{Domain, SignVector};
use crate::hull::HullElement;
use crate::plfun::PlFunction;
use crate::scalar::{fmt_exact, Scalar};

/// A function constant on each piece of a partition of the domain.
#[derive(Debug, Clone)]
pub struct StepElement<S> {
    domain: Arc<Domain<S>>,
    pieces: Vec<(RcSet<S>, S)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupError<S> {
    pub value: S,
    /// Index of the piece where the maximum is attained.
    pub piece: usize,
    pub cell: SignVector,
    pub point: Vec<S>,
}

impl<S: Scalar> StepElement<S> {
    pub fn constant(domain: &Arc<Domain<S>>, value: S) -> Self {
        StepElement {
            domain: domain.clone(),
            pieces: vec![(RcSet::full(domain), value)],
        }
    }

    pub fn domain(&self) -> &Arc<Domain<S>> {
        &self.domain
    }

    pub fn pieces(&self) -> &[(RcSet<S>, S)] {
        &self.pieces
    }

    /// Adds `c` on `region`, splitting pieces as needed.
    pub fn add_on(&self, region: &RcSet<S>, c: &S) -> Result<Self> {
        let rest = region.complement();
        let mut pieces = Vec::new();
        for (p, v) in &self.pieces {
            let inside = p.meet(region)?;
            if !inside.is_empty() {
                pieces.push((inside, v.clone() + c.clone()));
            }
            let outside = p.meet(&rest)?;
            if !outside.is_empty() {
                pieces.push((outside, v.clone()));
            }
        }
        Ok(StepElement {
            domain: self.domain.clone(),
            pieces,
        }
        .merged())
    }

    fn merged(self) -> Self {
        let mut out: Vec<(RcSet<S>, S)> = Vec::new();
        'next: for (p, v) in self.pieces {
            for (q, w) in out.iter_mut() {
                if *w == v {
                    *q = q.join(&p).expect("same domain");
                    continue 'next;
                }
            }
            out.push((p, v));
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        StepElement {
            domain: self.domain,
            pieces: out,
        }
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        for (p, v) in &self.pieces {
            if p.contains_point(point)? {
                return Ok(v.clone());
            }
        }
        Err(Error::OutsideDomain)
    }

    /// The same element as a hull element with constant values.
    pub fn to_hull(&self) -> HullElement<S> {
        let pieces = self
            .pieces
            .iter()
            .map(|(p, v)| (p.clone(), PlFunction::constant(&self.domain, v.clone())))
            .collect();
        HullElement::from_pieces(&self.domain, pieces).expect("step pieces partition the domain")
    }
}

impl<S: Scalar> fmt::Display for StepElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(p, v)| format!("({}, {})", p, fmt_exact(v)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The base level and the `(k, region)` pairs above it.
pub type Levels<S> = (S, Vec<(S, RcSet<S>)>);

/// The regions `R((n·g - k·u) ∨ 0)` for the levels used by [`approximate`],
/// together with the base level `⌈n·min g⌉`.
pub fn level_regions<S: Scalar>(g: &PlFunction<S>, n: i64) -> Result<Levels<S>> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("level count {n} must be at least 1")));
    }
    let domain = g.domain();
    let nn = S::from_int(n);
    let (lo, hi) = g.extrema();
    let base = (nn.clone() * lo).ceil_value();
    let top = (nn * hi).floor_value();
    let scaled = g.scale(n);
    let mut out = Vec::new();
    let mut k = base.clone() + S::one();
    while k <= top {
        let shifted = scaled.sub(&PlFunction::constant(domain, k.clone()))?;
        out.push((k.clone(), principal_polar(&shifted.positive_part())));
        k = k + S::one();
    }
    Ok((base, out))
}

/// `s = (⌈n·m⌉/n)·χ_X + (1/n)·Σ_k χ(R((n·g − k·u) ∨ 0))` where `m` is the
/// minimum of `g`; `s` is within `1/n` of `g` in the unit norm.
pub fn approximate<S: Scalar>(g: &PlFunction<S>, n: i64) -> Result<StepElement<S>> {
    let (base, levels) = level_regions(g, n)?;
    let step = S::one() / S::from_int(n);
    let mut s = StepElement::constant(g.domain(), base * step.clone());
    for (_, region) in &levels {
        s = s.add_on(region, &step)?;
    }
    Ok(s)
}

/// Exact `max |g − s|` over the domain, with a witness.
pub fn sup_error<S: Scalar>(g: &PlFunction<S>, s: &StepElement<S>) -> Result<SupError<S>> {
    if g.domain() != s.domain() {
        return Err(Error::DomainMismatch);
    }
    let mut best: Option<SupError<S>> = None;
    for (index, (region, value)) in s.pieces().iter().enumerate() {
        let shifted = g.sub(&PlFunction::constant(g.domain(), value.clone()))?;
        for (arr, cell, form) in shifted.forms_on(region)? {
            for candidate in [form.clone(), form.neg()] {
                let (v, point) = arr.cell(cell).closure().argmax(&candidate);
                if best.as_ref().is_none_or(|b| v > b.value) {
                    best = Some(SupError {
                        value: v,
                        piece: index,
                        cell: arr.cell(cell).signs().to_vec(),
                        point,
                    });
                }
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("step element has no pieces".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn f(text: &str, domain: &Arc<Domain<Q>>) -> PlFunction<Q> {
        PlFunction::compile(&parse_term(text).unwrap(), domain).unwrap()
    }

    #[test]
    fn identity_with_two_levels() {
        let x = Domain::unit_cube(1);
        let g = f("x1", &x);
        let s = approximate(&g, 2).unwrap();
        assert_eq!(s.pieces().len(), 2);
        assert_eq!(s.pieces()[0].1, q(0, 1));
        assert_eq!(s.pieces()[1].1, q(1, 2));
        assert_eq!(s.evaluate(&[q(1, 4)]).unwrap(), q(0, 1));
        assert_eq!(s.evaluate(&[q(3, 4)]).unwrap(), q(1, 2));
        let e = sup_error(&g, &s).unwrap();
        assert_eq!(e.value, q(1, 2));
        // attained both at the top of the lower band and at x = 1
        let at = &e.point;
        let gap = g.evaluate(at).unwrap() - s.pieces()[e.piece].1.clone();
        assert_eq!(gap, q(1, 2));
        assert!(at == &vec![q(1, 2)] || at == &vec![q(1, 1)]);
    }

    #[test]
    fn constants_are_exact() {
        let x = Domain::<Q>::unit_cube(1);
        for n in 1..5 {
            let s = approximate(&PlFunction::unit(&x), n).unwrap();
            assert_eq!(s.pieces().len(), 1);
            assert_eq!(s.pieces()[0].1, q(1, 1));
            assert_eq!(sup_error(&PlFunction::unit(&x), &s).unwrap().value, q(0, 1));
            let s = approximate(&PlFunction::zero(&x), n).unwrap();
            assert_eq!(s.pieces()[0].1, q(0, 1));
        }
    }

    #[test]
    fn error_against_zero_step() {
        let x = Domain::<Q>::unit_cube(1);
        let zero = StepElement::constant(&x, q(0, 1));
        assert_eq!(sup_error(&f("x1", &x), &zero).unwrap().value, q(1, 1));
    }

    #[test]
    fn rejects_nonpositive_n() {
        let x = Domain::unit_cube(1);
        assert!(approximate(&f("x1", &x), 0).is_err());
    }

    #[test]
    fn certificate_with_negative_values() {
        let x = Domain::unit_cube(1);
        let g = f("3*x1 - 7/4", &x);
        for n in [1, 2, 3, 5, 8] {
            let s = approximate(&g, n).unwrap();
            assert!(sup_error(&g, &s).unwrap().value <= q(1, n));
        }
    }

    #[test]
    fn levels_are_components() {
        let x = Domain::unit_cube(1);
        let (_, levels) = level_regions(&f("x1 v (1 - x1)", &x), 4).unwrap();
        for (_, r) in levels {
            assert!(HullElement::char_elem(&r).is_component());
        }
    }
}
