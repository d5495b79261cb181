//! Restrictions of piecewise-linear functions on `[0, 1]²` to the curve
//! `P = {y = x²} ∪ {y = 0}`, and germ-level reasoning about them.
//!
//! A trace is a pair of functions of `x ∈ [0, 1]`: the value along the
//! parabola `(x, x²)` and along the segment `(x, 0)`. The minimal primes of
//! the trace group are modelled as germs `(branch, x0, direction)`; at the
//! origin the segment's right germ is not minimal, because a function that
//! vanishes on the parabola germ vanishes on the segment germ too (see
//! [`TraceElement::segment_flat_radius`]), so that slot is collapsed onto
//! the parabola's.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::curvetrace::interval::{Interval, IntervalSet};
use crate::curvetrace::poly::{PiecewisePoly, Poly};
use crate::curvetrace::quadreal::QuadReal;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::plfun::PlFunction;
use crate::term::Term;
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Par,
    Seg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Plus,
    Minus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Par => "par",
            Branch::Seg => "seg",
        }
    }
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::Plus => '+',
            Dir::Minus => '-',
        }
    }

    /// Base points where this germ direction is defined.
    pub fn base(self) -> Interval {
        match self {
            Dir::Plus => Interval::new(QuadReal::zero(), true, QuadReal::one(), false),
            Dir::Minus => Interval::new(QuadReal::zero(), false, QuadReal::one(), true),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceElement {
    par: PiecewisePoly,
    seg: PiecewisePoly,
    term: Option<Term<Q>>,
}

/// `((n·x1 − 1) ∨ 0 − n²·x2) ∨ 0`: zero on the parabola, `(n·x − 1) ∨ 0`
/// on the segment.
pub fn h_term(n: i64) -> Term<Q> {
    let ramp = Term::var(1).scale(n).sub(Term::one()).join(Term::zero());
    ramp.sub(Term::var(2).scale(n * n)).join(Term::zero())
}

/// `x2`, the projection onto the second coordinate.
pub fn pi_y_term() -> Term<Q> {
    Term::var(2)
}

impl TraceElement {
    pub fn from_parts(par: PiecewisePoly, seg: PiecewisePoly) -> Result<Self> {
        if par.evaluate(&Q::zero())? != seg.evaluate(&Q::zero())? {
            return Err(Error::InvalidArgument("branches disagree at the origin".into()));
        }
        if seg.max_degree() > 1 {
            return Err(Error::InvalidArgument("segment branch must be piecewise linear".into()));
        }
        Ok(TraceElement {
            par,
            seg,
            term: None,
        })
    }

    pub fn constant(c: Q) -> Self {
        TraceElement {
            par: PiecewisePoly::constant(c.clone()),
            seg: PiecewisePoly::constant(c.clone()),
            term: Some(Term::Const(c)),
        }
    }

    pub fn par(&self) -> &PiecewisePoly {
        &self.par
    }

    pub fn seg(&self) -> &PiecewisePoly {
        &self.seg
    }

    pub fn branch(&self, b: Branch) -> &PiecewisePoly {
        match b {
            Branch::Par => &self.par,
            Branch::Seg => &self.seg,
        }
    }

    pub fn term(&self) -> Option<&Term<Q>> {
        self.term.as_ref()
    }

    /// Restriction of a term on `[0, 1]²`: the term is compiled to a
    /// piecewise-linear function, and each branch is cut at the points
    /// where the curve meets a hyperplane of the arrangement.
    pub fn restrict(term: &Term<Q>) -> Result<Self> {
        if term.max_var() > 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: term.max_var(),
            });
        }
        let f = PlFunction::compile(term, &Domain::unit_cube(2))?;
        let mut t = Self::restrict_function(&f)?;
        t.term = Some(term.clone());
        Ok(t)
    }

    /// Restriction of a function whose domain contains the curve.
    pub fn restrict_function(f: &PlFunction<Q>) -> Result<Self> {
        if f.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: f.dim(),
            });
        }
        let q = |n: i64| Q::from_integer(n.into());
        // P lies in the triangle (0,0), (1,0), (1,1)
        for corner in [[q(0), q(0)], [q(1), q(0)], [q(1), q(1)]] {
            if !f.domain().contains(&corner) {
                return Err(Error::OutsideDomain);
            }
        }
        let par = restrict_branch(f, Branch::Par)?;
        let seg = restrict_branch(f, Branch::Seg)?;
        Ok(TraceElement {
            par,
            seg,
            term: f.term().cloned(),
        })
    }

    /// The same restriction computed from the term alone, branch by branch.
    pub fn restrict_algebraic(term: &Term<Q>) -> Result<Self> {
        let zero = Q::zero;
        let one = Q::one;
        let mut t = match term {
            Term::Const(c) => Self::constant(c.clone()),
            Term::Var(1) => TraceElement {
                par: PiecewisePoly::poly(Poly::new(zero(), one(), zero())),
                seg: PiecewisePoly::poly(Poly::new(zero(), one(), zero())),
                term: None,
            },
            Term::Var(2) => TraceElement {
                par: PiecewisePoly::poly(Poly::new(zero(), zero(), one())),
                seg: PiecewisePoly::zero(),
                term: None,
            },
            Term::Var(i) => {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: *i,
                })
            }
            Term::Neg(a) => Self::restrict_algebraic(a)?.neg(),
            Term::ScalarMul(n, a) => Self::restrict_algebraic(a)?.scale(*n),
            Term::Abs(a) => Self::restrict_algebraic(a)?.abs(),
            Term::Add(a, b) => Self::restrict_algebraic(a)?.add(&Self::restrict_algebraic(b)?),
            Term::Sub(a, b) => Self::restrict_algebraic(a)?.sub(&Self::restrict_algebraic(b)?),
            Term::Join(a, b) => Self::restrict_algebraic(a)?.join(&Self::restrict_algebraic(b)?),
            Term::Meet(a, b) => Self::restrict_algebraic(a)?.meet(&Self::restrict_algebraic(b)?),
        };
        t.term = Some(term.clone());
        Ok(t)
    }

    fn map(&self, f: impl Fn(&PiecewisePoly) -> PiecewisePoly) -> Self {
        TraceElement {
            par: f(&self.par),
            seg: f(&self.seg),
            term: None,
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&PiecewisePoly, &PiecewisePoly) -> PiecewisePoly) -> Self {
        TraceElement {
            par: f(&self.par, &other.par),
            seg: f(&self.seg, &other.seg),
            term: None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.map(PiecewisePoly::neg)
    }

    pub fn scale(&self, n: i64) -> Self {
        let k = Q::from_integer(n.into());
        self.map(|p| p.scale(&k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, PiecewisePoly::add)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, PiecewisePoly::sub)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip(other, PiecewisePoly::join)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip(other, PiecewisePoly::meet)
    }

    pub fn abs(&self) -> Self {
        let zero = PiecewisePoly::zero();
        self.map(|p| p.join(&zero).add(&p.neg().join(&zero)))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.par.equals(&other.par) && self.seg.equals(&other.seg)
    }

    pub fn germ_support(&self, branch: Branch, dir: Dir) -> IntervalSet {
        self.branch(branch).germ_support(dir == Dir::Plus)
    }

    /// Whether the parabola branch is identically zero on some `[0, δ)`.
    pub fn vanishes_on_parabola_germ(&self) -> bool {
        self.par.polys()[0].is_zero()
    }

    /// Largest `ρ` with the segment branch identically zero on `[0, ρ)`.
    pub fn segment_flat_radius(&self) -> Option<Q> {
        if !self.seg.polys()[0].is_zero() {
            return None;
        }
        let end = &self.seg.breaks()[1];
        Some(
            end.to_rational()
                .expect("segment breakpoints are rational"),
        )
    }
}

impl fmt::Display for TraceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(par: {}, seg: {})", self.par, self.seg)
    }
}

fn restrict_branch(f: &PlFunction<Q>, branch: Branch) -> Result<PiecewisePoly> {
    let arr = f.arrangement();
    let mut breaks = vec![QuadReal::zero(), QuadReal::one()];
    for h in arr.hyperplanes() {
        let (a1, a2, b) = (&h.normal()[0], &h.normal()[1], h.offset());
        // a1·x + a2·y − b along the branch
        let roots = match branch {
            Branch::Par => QuadReal::roots(&-b.clone(), a1, a2),
            Branch::Seg => QuadReal::roots(&-b.clone(), a1, &Q::zero()),
        };
        breaks.extend(
            roots
                .into_iter()
                .filter(|r| r > &QuadReal::zero() && r < &QuadReal::one()),
        );
    }
    breaks.sort();
    breaks.dedup();
    let mut polys = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let t = QuadReal::rational_between(&w[0], &w[1]);
        let y = match branch {
            Branch::Par => &t * &t,
            Branch::Seg => Q::zero(),
        };
        let point = [t, y];
        let cell = arr.cells_containing(&point)?[0];
        let form = &f.forms()[cell];
        let (k1, k2, c) = (&form.coeffs[0], &form.coeffs[1], &form.constant);
        polys.push(match branch {
            Branch::Par => Poly::new(c.clone(), k1.clone(), k2.clone()),
            Branch::Seg => Poly::new(c.clone(), k1.clone(), Q::zero()),
        });
    }
    PiecewisePoly::from_parts(breaks, polys)
}

/// Uncovered germ slots of a family of traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGap {
    pub par_plus: IntervalSet,
    pub par_minus: IntervalSet,
    pub seg_plus: IntervalSet,
    pub seg_minus: IntervalSet,
}

impl CoverGap {
    pub fn is_empty(&self) -> bool {
        self.slots().iter().all(|(_, _, s)| s.is_empty())
    }

    pub fn slots(&self) -> [(Branch, Dir, &IntervalSet); 4] {
        [
            (Branch::Par, Dir::Plus, &self.par_plus),
            (Branch::Par, Dir::Minus, &self.par_minus),
            (Branch::Seg, Dir::Plus, &self.seg_plus),
            (Branch::Seg, Dir::Minus, &self.seg_minus),
        ]
    }
}

/// Germ slots where every member of the family vanishes, with the origin
/// rule applied to the segment's right germ at `0`.
pub fn cover_gap(family: &[TraceElement]) -> Result<CoverGap> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let gap = |branch: Branch, dir: Dir| {
        let covered = family
            .iter()
            .fold(IntervalSet::empty(), |acc, t| acc.union(&t.germ_support(branch, dir)));
        covered.complement_within(&dir.base())
    };
    let par_plus = gap(Branch::Par, Dir::Plus);
    let origin = IntervalSet::single(Interval::point(QuadReal::zero()));
    let mut seg_plus = gap(Branch::Seg, Dir::Plus).difference(&origin);
    if par_plus.contains(&QuadReal::zero()) {
        seg_plus = seg_plus.union(&origin);
    }
    Ok(CoverGap {
        par_plus,
        par_minus: gap(Branch::Par, Dir::Minus),
        seg_plus,
        seg_minus: gap(Branch::Seg, Dir::Minus),
    })
}

/// `{π_y, h_1, …, h_n}` restricted to the curve.
pub fn parabola_family(n: i64) -> Result<Vec<TraceElement>> {
    let mut out = vec![TraceElement::restrict(&pi_y_term())?];
    for k in 1..=n {
        out.push(TraceElement::restrict(&h_term(k))?);
    }
    Ok(out)
}

/// Domain of the ambient square, shared so that restrictions reuse it.
pub fn unit_square() -> Arc<Domain<Q>> {
    Domain::unit_cube(2)
}
