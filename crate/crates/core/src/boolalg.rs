//! Regular-closed polyhedral subsets of the domain.
//!
//! An [`RcSet`] is a set of full-dimensional cells of an arrangement and
//! denotes the union of their closures, so it is regular closed by
//! construction. Sets on different arrangements are compared on the common
//! refinement; every result is coarsened, so the stored arrangement only
//! keeps hyperplanes that actually bound the set.
//!
//! These sets stand in for principal polars: for `g` in the full group of
//! piecewise-linear functions, `g⊥⊥` corresponds to `R(g) = cl(coz g)` and
//! `g⊥` to the regularized complement of `R(g)`.
//!
//! Meet is plain cell intersection. For `f, g >= 0` on a common refinement
//! each form is either identically zero on a cell or positive on its
//! interior (an affine form vanishing on an open set is the zero form), and
//! `f ∧ g` on a cell is positive on the interior exactly when both are. So
//! `R(f ∧ g) = R(f) ∩ R(g)` cellwise, with no lower-dimensional leftovers.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Arrangement, Domain, Halfspace, SignVector};
use crate::plfun::PlFunction;
use crate::scalar::Scalar;
use crate::term::Term;

#[derive(Debug, Clone)]
pub struct RcSet<S> {
    arrangement: Arc<Arrangement<S>>,
    members: Vec<bool>,
}

impl<S: Scalar> RcSet<S> {
    /// The set of cells flagged in `mask`, coarsened.
    pub fn from_mask(arrangement: Arc<Arrangement<S>>, mask: Vec<bool>) -> Self {
        assert_eq!(mask.len(), arrangement.len(), "mask length");
        let (arrangement, members) = arrangement.coarsen(&mask);
        RcSet {
            arrangement,
            members,
        }
    }

    pub fn from_cells(arrangement: Arc<Arrangement<S>>, cells: &[usize]) -> Result<Self> {
        let mut mask = vec![false; arrangement.len()];
        for &c in cells {
            if c >= mask.len() {
                return Err(Error::InvalidArgument(format!("no cell {c}")));
            }
            mask[c] = true;
        }
        Ok(Self::from_mask(arrangement, mask))
    }

    pub fn empty(domain: &Arc<Domain<S>>) -> Self {
        RcSet {
            arrangement: Arrangement::trivial(domain),
            members: vec![false],
        }
    }

    pub fn full(domain: &Arc<Domain<S>>) -> Self {
        RcSet {
            arrangement: Arrangement::trivial(domain),
            members: vec![true],
        }
    }

    /// The part of `X` inside a closed halfspace, regularized.
    pub fn halfspace(domain: &Arc<Domain<S>>, halfspace: &Halfspace<S>) -> Self {
        let inside = halfspace.slack_form();
        match inside.zero_set() {
            None => {
                if inside.constant.is_negative() {
                    Self::empty(domain)
                } else {
                    Self::full(domain)
                }
            }
            Some(h) => {
                let arr = Arrangement::trivial(domain).refine_with(vec![h]);
                let mask = arr
                    .cells()
                    .iter()
                    .map(|c| inside.eval(c.interior_point()).is_positive())
                    .collect();
                Self::from_mask(arr, mask)
            }
        }
    }

    pub fn arrangement(&self) -> &Arc<Arrangement<S>> {
        &self.arrangement
    }

    pub fn domain(&self) -> &Arc<Domain<S>> {
        self.arrangement.domain()
    }

    pub fn contains_cell(&self, index: usize) -> bool {
        self.members[index]
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn cell_indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(|m| !m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    /// Whether the point lies in the (closed) set.
    pub fn contains_point(&self, point: &[S]) -> Result<bool> {
        Ok(self
            .arrangement
            .cells_containing(point)?
            .into_iter()
            .any(|i| self.members[i]))
    }

    /// Membership mask of the set on a refinement of its arrangement.
    pub fn mask_on(&self, finer: &Arrangement<S>) -> Result<Vec<bool>> {
        let map = finer.project_onto(&self.arrangement)?;
        Ok(map.into_iter().map(|i| self.members[i]).collect())
    }

    /// `cl(X \ B)`
    pub fn complement(&self) -> Self {
        RcSet {
            arrangement: self.arrangement.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        let common = Arrangement::refine(&self.arrangement, &other.arrangement)?;
        let a = self.mask_on(&common)?;
        let b = other.mask_on(&common)?;
        let mask = a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect();
        Ok(Self::from_mask(common, mask))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    /// `cl(B \ C)`, i.e. `B ∧ Cᶜ`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && !b)
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.zip(other, |a, b| a != b)?.is_empty())
    }

    /// Sign vectors of the member cells.
    pub fn sign_vectors(&self) -> Vec<SignVector> {
        self.cell_indices()
            .into_iter()
            .map(|i| self.arrangement.cell(i).signs().to_vec())
            .collect()
    }

    /// One irredundant H-representation per member cell closure.
    pub fn h_representation(&self) -> Vec<Vec<Halfspace<S>>> {
        self.cell_indices()
            .into_iter()
            .map(|i| self.arrangement.cell(i).closure().facets().to_vec())
            .collect()
    }

    /// Volume of the set, for `d <= 2`.
    pub fn volume(&self) -> Option<S> {
        let mut total = S::zero();
        for i in self.cell_indices() {
            total = total + self.arrangement.cell(i).closure().volume()?;
        }
        Some(total)
    }
}

impl<S: Scalar> fmt::Display for RcSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        if self.is_full() {
            return write!(f, "X");
        }
        let parts: Vec<String> = self
            .h_representation()
            .iter()
            .map(|facets| {
                let hs: Vec<String> = facets.iter().map(|h| h.to_string()).collect();
                format!("[{}]", hs.join(", "))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(" u "))
    }
}

/// `R(g)`, standing for `g⊥⊥`.
pub fn principal_polar<S: Scalar>(g: &PlFunction<S>) -> RcSet<S> {
    g.coz_closure()
}

/// `(S_m(g), V_m(g))`: the support `R(g)` and its complement.
pub fn vm_sm<S: Scalar>(g: &PlFunction<S>) -> (RcSet<S>, RcSet<S>) {
    let support = principal_polar(g);
    let zero = support.complement();
    (support, zero)
}

/// `|f| ∧ |g| = 0`, decided both in the group and on supports.
pub fn orthogonal<S: Scalar>(f: &PlFunction<S>, g: &PlFunction<S>) -> Result<bool> {
    let lattice = f.abs().meet(&g.abs())?.is_zero();
    let geometric = principal_polar(f).meet(&principal_polar(g))?.is_empty();
    if lattice != geometric {
        return Err(Error::VerificationFailed(format!(
            "orthogonality: meet test says {lattice}, support test says {geometric}"
        )));
    }
    Ok(lattice)
}

/// A function `0 <= h <= 1` with `R(h) = V`.
///
/// For every member cell closure `Q`, the meet of its facet slacks that are
/// not already valid on all of `X` is positive on the interior of `Q` and
/// nonpositive off `Q`; the join of these over `V`, clipped to `[0, 1]`, is
/// the result. Slacks are scaled to integer coefficients so the provenance
/// term stays in the integer fragment apart from constants.
pub fn bump<S: Scalar>(region: &RcSet<S>) -> Result<PlFunction<S>> {
    if region.is_empty() {
        return Err(Error::EmptyRegion("bump"));
    }
    let domain = region.domain().clone();
    if region.is_full() {
        return Ok(PlFunction::unit(&domain));
    }
    let arr = region.arrangement();
    let mut pieces: Vec<Term<S>> = Vec::new();
    for i in region.cell_indices() {
        let mut slacks = arr
            .cell(i)
            .closure()
            .facets()
            .iter()
            .filter(|h| {
                let (lo, _) = domain.polytope().extrema(&h.slack_form());
                lo.is_negative()
            })
            .map(|h| slack_term(h));
        let first = slacks.next().unwrap_or_else(Term::one);
        pieces.push(slacks.fold(first, Term::meet));
    }
    let mut it = pieces.into_iter();
    let first = it.next().expect("region is nonempty");
    let body = it.fold(first, Term::join);
    let term = body.join(Term::zero()).meet(Term::one());
    let h = PlFunction::compile(&term, &domain)?;
    if !principal_polar(&h).equals(region)? {
        return Err(Error::VerificationFailed("bump support".into()));
    }
    Ok(h)
}

/// `bound - normal·x`, multiplied by the least common denominator.
fn slack_term<S: Scalar>(h: &Halfspace<S>) -> Term<S> {
    let mut scale = S::one();
    for c in h.normal.iter().chain(std::iter::once(&h.bound)) {
        let d = c.denominator_value();
        if !(scale.clone() / d.clone()).is_integral() {
            scale = lcm(&scale, &d);
        }
    }
    let mut term: Option<Term<S>> = None;
    for (j, c) in h.normal.iter().enumerate() {
        let k = -(c.clone() * scale.clone());
        if k.is_zero() {
            continue;
        }
        let n = k.to_i64_exact().expect("coefficient fits in i64");
        let atom = match n {
            1 => Term::var(j + 1),
            -1 => Term::var(j + 1).neg(),
            _ => Term::var(j + 1).scale(n),
        };
        term = Some(match term {
            None => atom,
            Some(t) => t.add(atom),
        });
    }
    let b = h.bound.clone() * scale;
    let term = term.expect("facet normal is nonzero");
    if b.is_zero() {
        term
    } else if b.is_negative() {
        term.sub(Term::constant(-b))
    } else {
        term.add(Term::constant(b))
    }
}

fn lcm<S: Scalar>(a: &S, b: &S) -> S {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.clone() - (x.clone() / y.clone()).floor_value() * y.clone();
        x = y;
        y = r;
    }
    a.clone() * b.clone() / x
}

/// `f` with `R(f) = cl(X \ R(g))`, i.e. `V_m(f) = S_m(g)`.
pub fn complement_witness<S: Scalar>(g: &PlFunction<S>) -> Result<PlFunction<S>> {
    let target = principal_polar(g).complement();
    let f = if target.is_empty() {
        PlFunction::zero(g.domain())
    } else {
        bump(&target)?
    };
    let (support_g, _) = vm_sm(g);
    let (_, zero_f) = vm_sm(&f);
    if !zero_f.equals(&support_g)? {
        return Err(Error::VerificationFailed("complement witness".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Affine;
    use crate::term::parse_term;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn compile(text: &str, domain: &Arc<Domain<Q>>) -> PlFunction<Q> {
        PlFunction::compile(&parse_term(text).unwrap(), domain).unwrap()
    }

    fn half_split() -> (Arc<Domain<Q>>, RcSet<Q>, RcSet<Q>) {
        let x = Domain::unit_cube(1);
        let arr = Arrangement::from_rows(&x, vec![(vec![q(1, 1)], q(1, 2))]).unwrap();
        let left = RcSet::from_cells(arr.clone(), &[0]).unwrap();
        let right = RcSet::from_cells(arr, &[1]).unwrap();
        (x, left, right)
    }

    #[test]
    fn complement_and_lattice_ops() {
        let (x, left, right) = half_split();
        assert!(left.complement().equals(&right).unwrap());
        assert!(RcSet::empty(&x).complement().is_full());
        assert!(left.complement().complement().equals(&left).unwrap());
        assert!(left.meet(&right).unwrap().is_empty());
        assert!(left.join(&right).unwrap().is_full());
        assert!(left.meet(&left).unwrap().equals(&left).unwrap());
    }

    #[test]
    fn order() {
        let (x, left, _) = half_split();
        assert!(RcSet::empty(&x).leq(&left).unwrap());
        assert!(left.leq(&left).unwrap());
        let arr = Arrangement::from_rows(&x, vec![(vec![q(1, 1)], q(1, 4))]).unwrap();
        let quarter = RcSet::from_cells(arr, &[0]).unwrap();
        assert!(quarter.leq(&left).unwrap());
        assert!(!left.leq(&quarter).unwrap());
    }

    #[test]
    fn polars() {
        let x = Domain::unit_cube(1);
        let g = compile("(2*x1 - 1) v 0", &x);
        let (_, _, right) = half_split();
        assert!(principal_polar(&g).equals(&right).unwrap());
        assert!(principal_polar(&PlFunction::unit(&x)).is_full());
        assert!(principal_polar(&PlFunction::zero(&x)).is_empty());
        let (s, v) = vm_sm(&g);
        assert!(s.join(&v).unwrap().is_full());
        assert!(s.meet(&v).unwrap().is_empty());
        let (s, v) = vm_sm(&PlFunction::unit(&x));
        assert!(s.is_full() && v.is_empty());
    }

    #[test]
    fn orthogonality() {
        let x = Domain::unit_cube(1);
        let a = compile("(1 - 2*x1) v 0", &x);
        let b = compile("(2*x1 - 1) v 0", &x);
        assert!(orthogonal(&a, &b).unwrap());
        let c = compile("x1", &x);
        assert!(!orthogonal(&c, &c).unwrap());
        assert!(orthogonal(&c, &PlFunction::zero(&x)).unwrap());
    }

    #[test]
    fn bump_examples() {
        let (x, _, right) = half_split();
        assert!(bump(&RcSet::full(&x)).unwrap().equals(&PlFunction::unit(&x)).unwrap());
        let h = bump(&right).unwrap();
        assert!(principal_polar(&h).equals(&right).unwrap());
        assert_eq!(h.evaluate(&[q(3, 4)]).unwrap(), q(1, 2));
        assert_eq!(bump(&RcSet::empty(&x)).unwrap_err(), Error::EmptyRegion("bump"));
    }

    #[test]
    fn bump_on_square_triangle() {
        let sq = Domain::unit_cube(2);
        let tri = compile("x1 - x2", &sq).coz_closure();
        // the whole square: x1 - x2 is nonzero almost everywhere
        assert!(tri.is_full());
        let upper = compile("(x2 - x1) v 0", &sq).coz_closure();
        let h = bump(&upper).unwrap();
        assert!(principal_polar(&h).equals(&upper).unwrap());
        let (lo, hi) = h.extrema();
        assert!(lo >= q(0, 1) && hi <= q(1, 1));
    }

    #[test]
    fn complement_witnesses() {
        let x = Domain::unit_cube(1);
        let g = compile("(2*x1 - 1) v 0", &x);
        let f = complement_witness(&g).unwrap();
        assert!(principal_polar(&f)
            .equals(&principal_polar(&g).complement())
            .unwrap());
        let f = complement_witness(&PlFunction::zero(&x)).unwrap();
        assert!(principal_polar(&f).is_full());
        let f = complement_witness(&PlFunction::unit(&x)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn halfspace_region() {
        let x = Domain::unit_cube(1);
        let h = Halfspace::new(vec![q(-1, 1)], q(-1, 2));
        let r = RcSet::halfspace(&x, &h);
        assert!(r.contains_point(&[q(1, 2)]).unwrap());
        assert!(!r.contains_point(&[q(1, 4)]).unwrap());
        let f = PlFunction::affine(&x, Affine::new(vec![q(1, 1)], q(0, 1)));
        assert!(principal_polar(&f).is_full());
    }

    #[test]
    fn volumes_add_up() {
        let (_, left, right) = half_split();
        assert_eq!(left.volume().unwrap() + right.volume().unwrap(), q(1, 1));
    }
}
