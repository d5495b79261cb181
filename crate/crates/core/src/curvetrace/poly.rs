//! Univariate polynomials of degree at most two and continuous piecewise
//! polynomial functions on `[0, 1]` with quadratic-irrational breakpoints.

use std::fmt;

use num_traits::{One, Zero};

use crate::curvetrace::interval::{Interval, IntervalSet};
use crate::curvetrace::quadreal::QuadReal;
use crate::error::{Error, Result};
use crate::scalar::fmt_exact;
use crate::Q;

/// `c0 + c1·x + c2·x²`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: [Q; 3],
}

impl Poly {
    pub fn new(c0: Q, c1: Q, c2: Q) -> Self {
        Poly { c: [c0, c1, c2] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(c, Q::zero(), Q::zero())
    }

    pub fn zero() -> Self {
        Self::constant(Q::zero())
    }

    pub fn coeffs(&self) -> &[Q; 3] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        (0..3).rev().find(|&i| !self.c[i].is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    fn zip(&self, other: &Self, op: impl Fn(&Q, &Q) -> Q) -> Self {
        Poly {
            c: [
                op(&self.c[0], &other.c[0]),
                op(&self.c[1], &other.c[1]),
                op(&self.c[2], &other.c[2]),
            ],
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> Self {
        Poly {
            c: [&self.c[0] * k, &self.c[1] * k, &self.c[2] * k],
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        &self.c[0] + x * (&self.c[1] + x * &self.c[2])
    }

    pub fn eval_quad(&self, x: &QuadReal) -> QuadReal {
        let sq = x.mul(x).expect("same field");
        QuadReal::rational(self.c[0].clone())
            .add(&x.scale(&self.c[1]))
            .and_then(|v| v.add(&sq.scale(&self.c[2])))
            .expect("same field")
    }

    /// Distinct roots strictly between `lo` and `hi`.
    pub fn roots_between(&self, lo: &QuadReal, hi: &QuadReal) -> Vec<QuadReal> {
        QuadReal::roots(&self.c[0], &self.c[1], &self.c[2])
            .into_iter()
            .filter(|r| lo < r && r < hi)
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (power, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Q::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let var = match power {
                0 => "",
                1 => "x",
                _ => "x^2",
            };
            if power == 0 || !mag.is_one() {
                out.push_str(&fmt_exact(&mag));
                if power > 0 {
                    out.push('*');
                }
            }
            out.push_str(var);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// A continuous function on `[0, 1]`, polynomial between consecutive
/// breakpoints. Adjacent pieces always carry different polynomials, which
/// makes the representation canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewisePoly {
    breaks: Vec<QuadReal>,
    polys: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn poly(p: Poly) -> Self {
        PiecewisePoly {
            breaks: vec![QuadReal::zero(), QuadReal::one()],
            polys: vec![p],
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::poly(Poly::zero())
    }

    /// Validates the breakpoints and continuity, then merges equal
    /// neighbours.
    pub fn from_parts(breaks: Vec<QuadReal>, polys: Vec<Poly>) -> Result<Self> {
        if breaks.len() != polys.len() + 1 || polys.is_empty() {
            return Err(Error::InvalidArgument("breakpoint count".into()));
        }
        if breaks[0] != QuadReal::zero() || breaks[breaks.len() - 1] != QuadReal::one() {
            return Err(Error::InvalidArgument("breakpoints must span [0, 1]".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("breakpoints must increase".into()));
        }
        for i in 1..polys.len() {
            if polys[i - 1].eval_quad(&breaks[i]) != polys[i].eval_quad(&breaks[i]) {
                return Err(Error::Discontinuous(i));
            }
        }
        Ok(Self::merged(breaks, polys))
    }

    fn merged(breaks: Vec<QuadReal>, polys: Vec<Poly>) -> Self {
        let mut out_breaks = vec![breaks[0].clone()];
        let mut out_polys: Vec<Poly> = Vec::new();
        for (i, p) in polys.into_iter().enumerate() {
            if out_polys.last() == Some(&p) {
                *out_breaks.last_mut().expect("nonempty") = breaks[i + 1].clone();
            } else {
                out_polys.push(p);
                out_breaks.push(breaks[i + 1].clone());
            }
        }
        PiecewisePoly {
            breaks: out_breaks,
            polys: out_polys,
        }
    }

    pub fn breaks(&self) -> &[QuadReal] {
        &self.breaks
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&QuadReal, &QuadReal, &Poly)> {
        self.polys
            .iter()
            .enumerate()
            .map(|(i, p)| (&self.breaks[i], &self.breaks[i + 1], p))
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.polys.iter().all(|p| p.is_zero())
    }

    pub fn evaluate(&self, x: &Q) -> Result<Q> {
        let xq = QuadReal::rational(x.clone());
        if xq < self.breaks[0] || xq > self.breaks[self.breaks.len() - 1] {
            return Err(Error::OutsideDomain);
        }
        let i = (0..self.polys.len())
            .find(|&i| xq <= self.breaks[i + 1])
            .expect("x is within [0, 1]");
        Ok(self.polys[i].eval(x))
    }

    /// The polynomial on each interval of `breaks`, which must refine
    /// `self.breaks`.
    fn polys_on(&self, breaks: &[QuadReal]) -> Vec<Poly> {
        let mut j = 0;
        breaks
            .windows(2)
            .map(|w| {
                while self.breaks[j + 1] <= w[0] {
                    j += 1;
                }
                self.polys[j].clone()
            })
            .collect()
    }

    fn common_breaks(&self, other: &Self) -> Vec<QuadReal> {
        let mut all: Vec<QuadReal> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    fn zip(&self, other: &Self, op: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let breaks = self.common_breaks(other);
        let a = self.polys_on(&breaks);
        let b = other.polys_on(&breaks);
        let polys = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        Self::merged(breaks, polys)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Poly::add)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Poly::sub)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            polys: self.polys.iter().map(Poly::neg).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        let polys = self.polys.iter().map(|p| p.scale(k)).collect();
        Self::merged(self.breaks.clone(), polys)
    }

    fn lattice(&self, other: &Self, take_max: bool) -> Self {
        let breaks = self.common_breaks(other);
        let a = self.polys_on(&breaks);
        let b = other.polys_on(&breaks);
        let mut out_breaks = vec![breaks[0].clone()];
        let mut out_polys = Vec::new();
        for i in 0..a.len() {
            let diff = a[i].sub(&b[i]);
            let mut cuts = vec![breaks[i].clone()];
            cuts.extend(diff.roots_between(&breaks[i], &breaks[i + 1]));
            cuts.push(breaks[i + 1].clone());
            for w in cuts.windows(2) {
                let t = QuadReal::rational_between(&w[0], &w[1]);
                let d = diff.eval(&t);
                let pick_a = if take_max { d >= Q::zero() } else { d <= Q::zero() };
                out_polys.push(if pick_a { a[i].clone() } else { b[i].clone() });
                out_breaks.push(w[1].clone());
            }
        }
        Self::merged(out_breaks, out_polys)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.lattice(other, true)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.lattice(other, false)
    }

    pub fn equals(&self, other: &Self) -> bool {
        let breaks = self.common_breaks(other);
        self.polys_on(&breaks) == other.polys_on(&breaks)
    }

    /// Base points whose one-sided germ is not identically zero: right
    /// germs at `x0` in `[0, 1)` when `right` is set, left germs at `x0` in
    /// `(0, 1]` otherwise.
    pub fn germ_support(&self, right: bool) -> IntervalSet {
        let intervals = self
            .pieces()
            .filter(|(_, _, p)| !p.is_zero())
            .map(|(lo, hi, _)| {
                if right {
                    Interval::new(lo.clone(), true, hi.clone(), false)
                } else {
                    Interval::new(lo.clone(), false, hi.clone(), true)
                }
            })
            .collect();
        IntervalSet::from_intervals(intervals)
    }
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polys.len() == 1 {
            return write!(f, "{}", self.polys[0]);
        }
        let parts: Vec<String> = self
            .pieces()
            .map(|(lo, hi, p)| format!("[{lo}, {hi}]: {p}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
