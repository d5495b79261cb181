//! Continuous piecewise-linear functions with rational coefficients on a
//! domain: the concrete unital lattice-ordered group `G`.
//!
//! A function is an arrangement plus one affine form per full-dimensional
//! cell. Every operation refines the operands to a common arrangement, adds
//! the crossing loci for joins and meets, and then coarsens away hyperplanes
//! across which the forms agree, so results carry the minimal arrangement
//! that describes them.

use std::fmt;
use std::sync::Arc;

use crate::boolalg::RcSet;
use crate::error::{Error, Result};
use crate::geometry::{Affine, Arrangement, Domain, Hyperplane, Sign, SignVector};
use crate::scalar::Scalar;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Neg,
    Join,
    Meet,
    Scale(i64),
}

impl Op {
    pub fn is_unary(self) -> bool {
        matches!(self, Op::Neg | Op::Scale(_))
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Neg => "neg",
            Op::Join => "join",
            Op::Meet => "meet",
            Op::Scale(_) => "scale",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlFunction<S> {
    arrangement: Arc<Arrangement<S>>,
    forms: Vec<Affine<S>>,
    term: Option<Term<S>>,
}

/// An attained sup-norm distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupDistance<S> {
    pub value: S,
    /// Sign vector of the witness cell in the common refinement.
    pub cell: SignVector,
    /// A vertex of that cell where the value is attained.
    pub point: Vec<S>,
}

/// A cell of some arrangement together with the form on it.
pub(crate) type CellForm<S> = (Arc<Arrangement<S>>, usize, Affine<S>);

impl<S: Scalar> PlFunction<S> {
    pub fn affine(domain: &Arc<Domain<S>>, form: Affine<S>) -> Self {
        assert_eq!(form.dim(), domain.dim(), "form dimension");
        PlFunction {
            arrangement: Arrangement::trivial(domain),
            forms: vec![form],
            term: None,
        }
    }

    pub fn constant(domain: &Arc<Domain<S>>, c: S) -> Self {
        let mut f = Self::affine(domain, Affine::constant(domain.dim(), c.clone()));
        f.term = Some(Term::Const(c));
        f
    }

    pub fn zero(domain: &Arc<Domain<S>>) -> Self {
        Self::constant(domain, S::zero())
    }

    /// The strong unit `1_X`.
    pub fn unit(domain: &Arc<Domain<S>>) -> Self {
        Self::constant(domain, S::one())
    }

    /// The coordinate `x_index` (one-based).
    pub fn coordinate(domain: &Arc<Domain<S>>, index: usize) -> Result<Self> {
        if index == 0 || index > domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: index,
            });
        }
        let mut f = Self::affine(domain, Affine::coordinate(domain.dim(), index - 1));
        f.term = Some(Term::Var(index));
        Ok(f)
    }

    /// Builds a function from per-cell forms, checking continuity across
    /// every wall.
    pub fn from_cells(arrangement: Arc<Arrangement<S>>, forms: Vec<Affine<S>>) -> Result<Self> {
        if forms.len() != arrangement.len() {
            return Err(Error::InvalidArgument(format!(
                "{} forms for {} cells",
                forms.len(),
                arrangement.len()
            )));
        }
        if let Some(f) = forms.iter().find(|f| f.dim() != arrangement.dim()) {
            return Err(Error::DimensionMismatch {
                expected: arrangement.dim(),
                found: f.dim(),
            });
        }
        check_continuity(&arrangement, &forms)?;
        Ok(PlFunction {
            arrangement,
            forms,
            term: None,
        })
    }

    /// Compiles a term; the result remembers the term as its provenance.
    pub fn compile(term: &Term<S>, domain: &Arc<Domain<S>>) -> Result<Self> {
        if term.max_var() > domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: term.max_var(),
            });
        }
        let mut f = Self::compile_rec(term, domain)?;
        f.term = Some(term.clone());
        Ok(f)
    }

    fn compile_rec(term: &Term<S>, domain: &Arc<Domain<S>>) -> Result<Self> {
        Ok(match term {
            Term::Const(c) => Self::constant(domain, c.clone()),
            Term::Var(i) => Self::coordinate(domain, *i)?,
            Term::Neg(t) => Self::compile_rec(t, domain)?.neg(),
            Term::ScalarMul(n, t) => Self::compile_rec(t, domain)?.scale(*n),
            Term::Abs(t) => Self::compile_rec(t, domain)?.abs(),
            Term::Add(a, b) => Self::compile_rec(a, domain)?.add(&Self::compile_rec(b, domain)?)?,
            Term::Sub(a, b) => Self::compile_rec(a, domain)?.sub(&Self::compile_rec(b, domain)?)?,
            Term::Join(a, b) => {
                Self::compile_rec(a, domain)?.join(&Self::compile_rec(b, domain)?)?
            }
            Term::Meet(a, b) => {
                Self::compile_rec(a, domain)?.meet(&Self::compile_rec(b, domain)?)?
            }
        })
    }

    pub fn domain(&self) -> &Arc<Domain<S>> {
        self.arrangement.domain()
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim()
    }

    pub fn arrangement(&self) -> &Arc<Arrangement<S>> {
        &self.arrangement
    }

    pub fn forms(&self) -> &[Affine<S>] {
        &self.forms
    }

    pub fn term(&self) -> Option<&Term<S>> {
        self.term.as_ref()
    }

    pub fn with_term(mut self, term: Term<S>) -> Self {
        self.term = Some(term);
        self
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        let cells = self.arrangement.cells_containing(point)?;
        let first = cells.first().ok_or(Error::OutsideDomain)?;
        Ok(self.forms[*first].eval(point))
    }

    pub fn combine(op: Op, f: &Self, g: Option<&Self>) -> Result<Self> {
        match (op, g) {
            (Op::Neg, _) => Ok(f.neg()),
            (Op::Scale(n), _) => Ok(f.scale(n)),
            (_, None) => Err(Error::InvalidArgument(format!(
                "{} needs two operands",
                op.name()
            ))),
            (Op::Add, Some(g)) => f.add(g),
            (Op::Sub, Some(g)) => f.sub(g),
            (Op::Join, Some(g)) => f.join(g),
            (Op::Meet, Some(g)) => f.meet(g),
        }
    }

    fn map_forms(&self, op: impl Fn(&Affine<S>) -> Affine<S>, term: Option<Term<S>>) -> Self {
        let forms: Vec<Affine<S>> = self.forms.iter().map(op).collect();
        Self::coarsened(&self.arrangement, forms, term)
    }

    fn coarsened(arrangement: &Arc<Arrangement<S>>, forms: Vec<Affine<S>>, term: Option<Term<S>>) -> Self {
        let (arrangement, forms) = arrangement.coarsen(&forms);
        PlFunction {
            arrangement,
            forms,
            term,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        let term = self.term.clone().map(Term::neg);
        self.map_forms(|a| a.neg(), term)
    }

    /// Integer multiple.
    pub fn scale(&self, n: i64) -> Self {
        let k = S::from_int(n);
        let term = self.term.clone().map(|t| t.scale(n));
        self.map_forms(|a| a.scale(&k), term)
    }

    /// Pointwise combination of two functions whose forms combine cellwise.
    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&Affine<S>, &Affine<S>) -> Affine<S>,
        term: Option<Term<S>>,
    ) -> Result<Self> {
        let common = Arrangement::refine(&self.arrangement, &other.arrangement)?;
        let pf = common.project_onto(&self.arrangement)?;
        let pg = common.project_onto(&other.arrangement)?;
        let forms = (0..common.len())
            .map(|i| op(&self.forms[pf[i]], &other.forms[pg[i]]))
            .collect();
        Ok(Self::coarsened(&common, forms, term))
    }

    fn combined_term(&self, other: &Self, op: fn(Term<S>, Term<S>) -> Term<S>) -> Option<Term<S>> {
        match (&self.term, &other.term) {
            (Some(a), Some(b)) => Some(op(a.clone(), b.clone())),
            _ => None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        let term = self.combined_term(other, Term::add);
        self.zip_with(other, |a, b| a.add(b), term)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let term = self.combined_term(other, Term::sub);
        self.zip_with(other, |a, b| a.sub(b), term)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        let term = self.combined_term(other, Term::join);
        self.lattice(other, true, term)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        let term = self.combined_term(other, Term::meet);
        self.lattice(other, false, term)
    }

    fn lattice(&self, other: &Self, take_max: bool, term: Option<Term<S>>) -> Result<Self> {
        let common = Arrangement::refine(&self.arrangement, &other.arrangement)?;
        let pf = common.project_onto(&self.arrangement)?;
        let pg = common.project_onto(&other.arrangement)?;
        let mut crossings: Vec<Hyperplane<S>> = Vec::new();
        for i in 0..common.len() {
            let diff = self.forms[pf[i]].sub(&other.forms[pg[i]]);
            if let Some(h) = diff.zero_set() {
                let (lo, hi) = common.cell(i).closure().extrema(&diff);
                if lo.is_negative() && hi.is_positive() {
                    crossings.push(h);
                }
            }
        }
        let fine = common.refine_with(crossings);
        let pf = fine.project_onto(&self.arrangement)?;
        let pg = fine.project_onto(&other.arrangement)?;
        let forms = (0..fine.len())
            .map(|i| {
                let (a, b) = (&self.forms[pf[i]], &other.forms[pg[i]]);
                let d = a.sub(b).eval(fine.cell(i).interior_point());
                let pick_a = if take_max { !d.is_negative() } else { !d.is_positive() };
                if pick_a { a.clone() } else { b.clone() }
            })
            .collect();
        Ok(Self::coarsened(&fine, forms, term))
    }

    /// `f v 0`
    pub fn positive_part(&self) -> Self {
        let zero = Self::zero(self.domain());
        self.join(&zero).expect("same domain")
    }

    /// `(-f) v 0`
    pub fn negative_part(&self) -> Self {
        self.neg().positive_part()
    }

    /// `(f v 0) + (-f v 0)`
    pub fn abs(&self) -> Self {
        let f = self
            .positive_part()
            .add(&self.negative_part())
            .expect("same domain");
        match &self.term {
            Some(t) => f.with_term(t.clone().abs()),
            None => f,
        }
    }

    /// Re-expresses the function on a refinement of its arrangement.
    pub fn on_arrangement(&self, finer: &Arc<Arrangement<S>>) -> Result<Self> {
        let map = finer.project_onto(&self.arrangement)?;
        Ok(PlFunction {
            arrangement: finer.clone(),
            forms: map.iter().map(|&i| self.forms[i].clone()).collect(),
            term: self.term.clone(),
        })
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        let common = Arrangement::refine(&self.arrangement, &other.arrangement)?;
        let pf = common.project_onto(&self.arrangement)?;
        let pg = common.project_onto(&other.arrangement)?;
        Ok((0..common.len()).all(|i| self.forms[pf[i]] == other.forms[pg[i]]))
    }

    pub fn is_zero(&self) -> bool {
        self.forms.iter().all(|f| f.is_zero())
    }

    /// Exact `max |f - g|` over the domain, with an attaining cell and vertex.
    pub fn sup_distance(&self, other: &Self) -> Result<SupDistance<S>> {
        let common = Arrangement::refine(&self.arrangement, &other.arrangement)?;
        let pf = common.project_onto(&self.arrangement)?;
        let pg = common.project_onto(&other.arrangement)?;
        let mut best: Option<SupDistance<S>> = None;
        for i in 0..common.len() {
            let diff = self.forms[pf[i]].sub(&other.forms[pg[i]]);
            for candidate in [diff.clone(), diff.neg()] {
                let (value, point) = common.cell(i).closure().argmax(&candidate);
                if best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(SupDistance {
                        value,
                        cell: common.cell(i).signs().to_vec(),
                        point,
                    });
                }
            }
        }
        Ok(best.expect("arrangement has a cell"))
    }

    /// Exact minimum and maximum over the domain.
    pub fn extrema(&self) -> (S, S) {
        let mut lo: Option<S> = None;
        let mut hi: Option<S> = None;
        for (i, f) in self.forms.iter().enumerate() {
            let (a, b) = self.arrangement.cell_extrema(f, i);
            lo = Some(lo.map_or(a.clone(), |l| l.min(a)));
            hi = Some(hi.map_or(b.clone(), |h| h.max(b)));
        }
        (lo.expect("nonempty"), hi.expect("nonempty"))
    }

    /// Least integer `n >= 0` with `|f| <= n * 1_X`.
    pub fn unit_bound(&self) -> S {
        let (lo, hi) = self.extrema();
        lo.abs().max(hi.abs()).ceil_value()
    }

    /// Closure of the cozero set, as the cells where the form is not the
    /// zero form. Represents the principal polar `f⊥⊥`.
    pub fn coz_closure(&self) -> RcSet<S> {
        let members = self.forms.iter().map(|f| !f.is_zero()).collect();
        RcSet::from_mask(self.arrangement.clone(), members)
    }

    /// Refines the function against a region: for every full-dimensional
    /// cell of the common refinement inside `region`, the function's form.
    pub(crate) fn forms_on(&self, region: &RcSet<S>) -> Result<Vec<CellForm<S>>> {
        let common = Arrangement::refine(&self.arrangement, region.arrangement())?;
        let pf = common.project_onto(&self.arrangement)?;
        let pr = common.project_onto(region.arrangement())?;
        Ok((0..common.len())
            .filter(|&i| region.contains_cell(pr[i]))
            .map(|i| (common.clone(), i, self.forms[pf[i]].clone()))
            .collect())
    }

    /// Whether the function is identically zero on a regular-closed region.
    pub fn vanishes_on(&self, region: &RcSet<S>) -> Result<bool> {
        Ok(self.forms_on(region)?.iter().all(|(_, _, f)| f.is_zero()))
    }

    /// Minimum and maximum over a region; `None` for the empty region.
    pub fn extrema_on(&self, region: &RcSet<S>) -> Result<Option<(S, S)>> {
        let mut out: Option<(S, S)> = None;
        for (arr, i, f) in self.forms_on(region)? {
            let (a, b) = arr.cell_extrema(&f, i);
            out = Some(match out {
                None => (a, b),
                Some((lo, hi)) => (lo.min(a), hi.max(b)),
            });
        }
        Ok(out)
    }

    /// Cell-by-cell listing, `[signs] form`.
    pub fn pieces(&self) -> Vec<(String, String)> {
        self.arrangement
            .cells()
            .iter()
            .zip(&self.forms)
            .map(|(c, f)| (c.sign_string(), f.render()))
            .collect()
    }
}

/// Prints the cell forms, each with the facets of its cell; a function
/// with a single form prints as that form. The provenance term, if any, is
/// available from [`PlFunction::term`].
impl<S: Scalar> fmt::Display for PlFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forms.len() == 1 {
            return write!(f, "{}", self.forms[0].render());
        }
        let parts: Vec<String> = self
            .arrangement
            .cells()
            .iter()
            .zip(&self.forms)
            .map(|(c, form)| {
                let facets: Vec<String> = c.closure().facets().iter().map(|h| h.to_string()).collect();
                format!("{} on [{}]", form.render(), facets.join(", "))
            })
            .collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// Adjacent cells must differ by a multiple of the separating hyperplane.
fn check_continuity<S: Scalar>(arr: &Arrangement<S>, forms: &[Affine<S>]) -> Result<()> {
    let mut partner = Vec::new();
    for (j, h) in arr.hyperplanes().iter().enumerate() {
        let wall = h.form();
        let lead = wall
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("hyperplane normal is nonzero");
        for (i, c) in arr.cells().iter().enumerate() {
            if c.signs()[j] != Sign::Pos {
                continue;
            }
            partner.clear();
            partner.extend_from_slice(c.signs());
            partner[j] = Sign::Neg;
            let Some(k) = arr.find(&partner) else { continue };
            let diff = forms[i].sub(&forms[k]);
            let lambda = diff.coeffs[lead].clone() / wall.coeffs[lead].clone();
            if diff != wall.scale(&lambda) {
                return Err(Error::Discontinuous(j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use num_rational::BigRational;

    type F = PlFunction<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn compile(text: &str, domain: &Arc<Domain<BigRational>>) -> F {
        F::compile(&parse_term(text).unwrap(), domain).unwrap()
    }

    #[test]
    fn ramp_on_interval() {
        let x = Domain::unit_cube(1);
        let f = compile("(2*x1 - 1) v 0", &x);
        assert_eq!(f.arrangement().len(), 2);
        assert!(f.forms()[0].is_zero());
        assert_eq!(f.forms()[1], Affine::new(vec![q(2, 1)], q(-1, 1)));
        assert_eq!(f.evaluate(&[q(3, 4)]).unwrap(), q(1, 2));
        assert_eq!(f.evaluate(&[q(1, 2)]).unwrap(), q(0, 1));
    }

    #[test]
    fn constant_has_one_cell() {
        let f = compile("1", &Domain::unit_cube(1));
        assert_eq!(f.arrangement().len(), 1);
        assert_eq!(f.forms()[0], Affine::constant(1, q(1, 1)));
    }

    #[test]
    fn join_of_coordinates_splits_on_diagonal() {
        let sq = Domain::unit_cube(2);
        let f = compile("x1 v x2", &sq);
        assert_eq!(f.arrangement().hyperplanes().len(), 1);
        assert_eq!(f.evaluate(&[q(1, 3), q(2, 3)]).unwrap(), q(2, 3));
    }

    #[test]
    fn combine_examples() {
        let x = Domain::unit_cube(1);
        let sum = compile("x1", &x).add(&compile("1 - x1", &x)).unwrap();
        assert!(sum.equals(&F::unit(&x)).unwrap());
        assert_eq!(sum.arrangement().len(), 1);
        let m = compile("(2*x1 - 1) v 0", &x)
            .meet(&compile("(1 - 2*x1) v 0", &x))
            .unwrap();
        assert!(m.is_zero());
        let j = compile("x1", &x).join(&compile("-x1", &x)).unwrap();
        assert!(j.equals(&compile("abs(x1)", &x)).unwrap());
    }

    #[test]
    fn equality_examples() {
        let x = Domain::unit_cube(1);
        assert!(compile("x1 v -x1", &x).equals(&compile("abs(x1)", &x)).unwrap());
        assert!(compile("x1", &x).equals(&compile("x1 ^ 1", &x)).unwrap());
        assert!(!compile("x1", &x).equals(&compile("0", &x)).unwrap());
    }

    #[test]
    fn sup_distance_examples() {
        let x = Domain::unit_cube(1);
        let d = compile("x1", &x).sup_distance(&F::zero(&x)).unwrap();
        assert_eq!(d.value, q(1, 1));
        assert_eq!(d.point, vec![q(1, 1)]);
        let f = compile("(2*x1 - 1) v 0", &x);
        assert_eq!(f.sup_distance(&f).unwrap().value, q(0, 1));
        let d = f.sup_distance(&compile("x1", &x)).unwrap();
        assert_eq!(d.value, q(1, 2));
        assert_eq!(d.point, vec![q(1, 2)]);
    }

    #[test]
    fn coz_closure_examples() {
        let x = Domain::unit_cube(1);
        let r = compile("(2*x1 - 1) v 0", &x).coz_closure();
        assert_eq!(r.cell_count(), 1);
        assert_eq!(r.cell_indices(), vec![1]);
        assert!(F::zero(&x).coz_closure().is_empty());
        assert!(F::unit(&x).coz_closure().is_full());
    }

    #[test]
    fn continuity_is_checked() {
        let x = Domain::unit_cube(1);
        let arr = Arrangement::from_rows(&x, vec![(vec![q(1, 1)], q(1, 2))]).unwrap();
        let ok = F::from_cells(
            arr.clone(),
            vec![Affine::zero(1), Affine::new(vec![q(2, 1)], q(-1, 1))],
        );
        assert!(ok.is_ok());
        let bad = F::from_cells(arr, vec![Affine::zero(1), Affine::constant(1, q(1, 1))]);
        assert_eq!(bad.unwrap_err(), Error::Discontinuous(0));
    }

    #[test]
    fn variable_out_of_range() {
        let t = parse_term::<BigRational>("x3").unwrap();
        assert!(F::compile(&t, &Domain::unit_cube(2)).is_err());
    }

    #[test]
    fn unit_bound_dominates() {
        let x = Domain::unit_cube(1);
        let f = compile("3*x1 - 5/2", &x);
        assert_eq!(f.unit_bound(), q(3, 1));
    }
}
