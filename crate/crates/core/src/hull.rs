//! Elements of the projectable hull.
//!
//! A [`HullElement`] is a finite partition of the domain into nonempty
//! regular-closed pieces, each carrying a function of the base group; it
//! denotes `Σ a_i♯ χ_i`. Values only matter on the interiors of their
//! pieces, so equality is tested overlap by overlap and decompositions are
//! not canonical.

use std::fmt;
use std::sync::Arc;

use crate::boolalg::{bump, principal_polar, RcSet};
use crate::error::{Error, Result};
use crate::geometry::{Arrangement, Domain, Halfspace};
use crate::plfun::{Op, PlFunction};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Piece<S> {
    pub region: RcSet<S>,
    pub value: PlFunction<S>,
}

#[derive(Debug, Clone)]
pub struct HullElement<S> {
    domain: Arc<Domain<S>>,
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> HullElement<S> {
    /// Validates that the regions are nonempty, pairwise almost disjoint and
    /// cover the domain.
    pub fn from_pieces(domain: &Arc<Domain<S>>, pieces: Vec<(RcSet<S>, PlFunction<S>)>) -> Result<Self> {
        let mut union = RcSet::empty(domain);
        for (i, (region, value)) in pieces.iter().enumerate() {
            if region.is_empty() {
                return Err(Error::InvalidArgument(format!("piece {i} is empty")));
            }
            if !union.meet(region)?.is_empty() {
                return Err(Error::InvalidArgument(format!("piece {i} overlaps an earlier piece")));
            }
            if value.domain() != domain {
                return Err(Error::DomainMismatch);
            }
            union = union.join(region)?;
        }
        if !union.is_full() {
            return Err(Error::InvalidArgument("pieces do not cover the domain".into()));
        }
        Ok(Self::raw(domain, pieces))
    }

    fn raw(domain: &Arc<Domain<S>>, pieces: Vec<(RcSet<S>, PlFunction<S>)>) -> Self {
        HullElement {
            domain: domain.clone(),
            pieces: pieces
                .into_iter()
                .map(|(region, value)| Piece { region, value })
                .collect(),
        }
    }

    /// `g♯`: a single piece covering the domain.
    pub fn embed(g: &PlFunction<S>) -> Self {
        let domain = g.domain();
        Self::raw(domain, vec![(RcSet::full(domain), g.clone())])
    }

    /// The characteristic element of `B`: `1` on `B`, `0` on its complement.
    pub fn char_elem(region: &RcSet<S>) -> Self {
        let domain = region.domain();
        let mut pieces = Vec::new();
        let rest = region.complement();
        if !rest.is_empty() {
            pieces.push((rest, PlFunction::zero(domain)));
        }
        if !region.is_empty() {
            pieces.push((region.clone(), PlFunction::unit(domain)));
        }
        Self::raw(domain, pieces)
    }

    pub fn zero(domain: &Arc<Domain<S>>) -> Self {
        Self::embed(&PlFunction::zero(domain))
    }

    pub fn unit(domain: &Arc<Domain<S>>) -> Self {
        Self::embed(&PlFunction::unit(domain))
    }

    pub fn domain(&self) -> &Arc<Domain<S>> {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The value at a point of the domain. On a shared boundary of two
    /// pieces the first piece wins; such points carry no meaning.
    pub fn evaluate(&self, point: &[S]) -> Result<S> {
        for p in &self.pieces {
            if p.region.contains_point(point)? {
                return p.value.evaluate(point);
            }
        }
        Err(Error::OutsideDomain)
    }

    fn map_values(&self, f: impl Fn(&PlFunction<S>) -> PlFunction<S>) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| (p.region.clone(), f(&p.value)))
            .collect();
        Self::raw(&self.domain, pieces).merged()
    }

    /// Joins pieces whose values are the same function.
    fn merged(self) -> Self {
        let mut out: Vec<(RcSet<S>, PlFunction<S>)> = Vec::new();
        'next: for p in self.pieces {
            for (region, value) in out.iter_mut() {
                if value.equals(&p.value).expect("same domain") {
                    *region = region.join(&p.region).expect("same domain");
                    continue 'next;
                }
            }
            out.push((p.region, p.value));
        }
        Self::raw(&self.domain, out)
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&PlFunction<S>, &PlFunction<S>) -> Result<PlFunction<S>>,
    ) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let region = a.region.meet(&b.region)?;
                if region.is_empty() {
                    continue;
                }
                pieces.push((region, op(&a.value, &b.value)?));
            }
        }
        Ok(Self::raw(&self.domain, pieces).merged())
    }

    pub fn combine(op: Op, e: &Self, f: Option<&Self>) -> Result<Self> {
        match (op, f) {
            (Op::Neg, _) => Ok(e.neg()),
            (Op::Scale(n), _) => Ok(e.scale(n)),
            (_, None) => Err(Error::InvalidArgument(format!(
                "{} needs two operands",
                op.name()
            ))),
            (op, Some(f)) => e.zip_with(f, |a, b| PlFunction::combine(op, a, Some(b))),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.map_values(|v| v.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        self.map_values(|v| v.scale(n))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.join(b))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.meet(b))
    }

    pub fn abs(&self) -> Self {
        self.map_values(|v| v.abs())
    }

    /// `u - e`
    pub fn cochar(&self) -> Self {
        let u = PlFunction::unit(&self.domain);
        self.map_values(|v| u.sub(v).expect("same domain"))
    }

    /// Equal values on every overlap of a piece of `self` with one of `other`.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        for a in &self.pieces {
            for b in &other.pieces {
                let overlap = a.region.meet(&b.region)?;
                if overlap.is_empty() {
                    continue;
                }
                if !a.value.sub(&b.value)?.vanishes_on(&overlap)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.value.vanishes_on(&p.region).expect("same domain"))
    }

    /// `e >= 0`, checked on every piece.
    pub fn is_nonnegative(&self) -> bool {
        self.pieces.iter().all(|p| {
            p.value
                .extrema_on(&p.region)
                .expect("same domain")
                .is_none_or(|(lo, _)| !lo.is_negative())
        })
    }

    /// `e > 0` in the lattice order: nonnegative and nonzero.
    pub fn is_positive(&self) -> bool {
        self.is_nonnegative() && !self.is_zero()
    }

    /// `e <= f`
    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(other.sub(self)?.is_nonnegative())
    }

    /// Greedy merge: piece `j` is absorbed into an earlier piece `i` when
    /// the value of `i` agrees with the value of `j` on piece `j`.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<(RcSet<S>, PlFunction<S>)> = Vec::new();
        'next: for p in &self.pieces {
            for (region, value) in out.iter_mut() {
                let agree = value
                    .sub(&p.value)
                    .and_then(|d| d.vanishes_on(&p.region))
                    .expect("same domain");
                if agree {
                    *region = region.join(&p.region).expect("same domain");
                    continue 'next;
                }
            }
            out.push((p.region.clone(), p.value.clone()));
        }
        Self::raw(&self.domain, out)
    }

    /// Cuts every piece along a partition of the domain.
    pub fn refine_by(&self, partition: &[RcSet<S>]) -> Result<Self> {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for r in partition {
                let region = p.region.meet(r)?;
                if !region.is_empty() {
                    pieces.push((region, p.value.clone()));
                }
            }
        }
        Ok(Self::raw(&self.domain, pieces))
    }

    /// Closure of the set where `e` is nonzero.
    pub fn support(&self) -> RcSet<S> {
        self.pieces
            .iter()
            .map(|p| p.region.meet(&principal_polar(&p.value)).expect("same domain"))
            .fold(RcSet::empty(&self.domain), |acc, r| acc.join(&r).expect("same domain"))
    }

    /// For a component of the unit, the region where it equals `1`.
    pub fn component_region(&self) -> Result<RcSet<S>> {
        let one = PlFunction::unit(&self.domain);
        let mut region = RcSet::empty(&self.domain);
        for p in &self.pieces {
            if p.value.vanishes_on(&p.region)? {
                continue;
            }
            if p.value.sub(&one)?.vanishes_on(&p.region)? {
                region = region.join(&p.region)?;
                continue;
            }
            return Err(Error::NotAComponent);
        }
        Ok(region)
    }

    pub fn is_component(&self) -> bool {
        self.component_region().is_ok()
    }
}

impl<S: Scalar> fmt::Display for HullElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| format!("({}, {})", p.region, p.value))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Least integers `n₊, n₋` with `g⁺ <= n₊` and `g⁻ <= n₋` on the support of
/// the component `chi`.
pub fn component_multipliers<S: Scalar>(g: &PlFunction<S>, chi: &HullElement<S>) -> Result<(i64, i64)> {
    let region = chi.component_region()?;
    let bound = |f: PlFunction<S>| -> Result<i64> {
        Ok(match f.extrema_on(&region)? {
            None => 0,
            Some((_, hi)) => hi.ceil_value().to_i64_exact().expect("bound fits in i64"),
        })
    };
    Ok((bound(g.positive_part())?, bound(g.negative_part())?))
}

/// `gχ = (g⁺ ∧ n₊χ) − (g⁻ ∧ n₋χ)` for a component `χ` of the unit.
pub fn component_product<S: Scalar>(g: &PlFunction<S>, chi: &HullElement<S>) -> Result<HullElement<S>> {
    let (np, nn) = component_multipliers(g, chi)?;
    let pos = HullElement::embed(&g.positive_part()).meet(&chi.scale(np))?;
    let neg = HullElement::embed(&g.negative_part()).meet(&chi.scale(nn))?;
    pos.sub(&neg)
}

#[derive(Debug, Clone)]
pub struct PolarSplit<S> {
    pub inside: HullElement<S>,
    pub outside: HullElement<S>,
    /// Support of the splitting element.
    pub region: RcSet<S>,
    /// `e = inside + outside`
    pub sums_back: bool,
    /// `|outside| ∧ |v| = 0`
    pub outside_orthogonal: bool,
    /// `supp(inside) ⊆ supp(v)`
    pub inside_supported: bool,
}

impl<S> PolarSplit<S> {
    pub fn verified(&self) -> bool {
        self.sums_back && self.outside_orthogonal && self.inside_supported
    }
}

/// Splits `e` along the polar of `v`: `e = e·χ_B + e·χ_{Bᶜ}` with `B` the
/// support of `v`.
pub fn polar_split<S: Scalar>(e: &HullElement<S>, v: &HullElement<S>) -> Result<PolarSplit<S>> {
    if e.domain() != v.domain() {
        return Err(Error::DomainMismatch);
    }
    let region = v.support();
    let rest = region.complement();
    let zero = PlFunction::zero(e.domain());
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for p in e.pieces() {
        let a = p.region.meet(&region)?;
        let b = p.region.meet(&rest)?;
        if !a.is_empty() {
            inside.push((a.clone(), p.value.clone()));
            outside.push((a, zero.clone()));
        }
        if !b.is_empty() {
            inside.push((b.clone(), zero.clone()));
            outside.push((b, p.value.clone()));
        }
    }
    let inside = HullElement::raw(e.domain(), inside).merged();
    let outside = HullElement::raw(e.domain(), outside).merged();
    let sums_back = inside.add(&outside)?.equals(e)?;
    let outside_orthogonal = outside.abs().meet(&v.abs())?.is_zero();
    let inside_supported = inside.support().leq(&region)?;
    Ok(PolarSplit {
        inside,
        outside,
        region,
        sums_back,
        outside_orthogonal,
        inside_supported,
    })
}

#[derive(Debug, Clone)]
pub struct EssentialWitness<S> {
    pub h: PlFunction<S>,
    pub n: i64,
    /// Index of the piece the witness was drawn from.
    pub piece: usize,
    /// `0 < h♯ <= n·e`, checked exactly.
    pub verified: bool,
}

/// Finds `0 < h ∈ G` and `n >= 1` with `h♯ <= n·e` for `e > 0`.
///
/// Picks a cell where some piece value `a` has positive maximum `M`, takes
/// `V = {a >= M/2}` inside that cell and returns `h = bump(V) ∧ a⁺`.
pub fn essential_witness<S: Scalar>(e: &HullElement<S>) -> Result<EssentialWitness<S>> {
    if !e.is_positive() {
        return Err(Error::NotPositive);
    }
    let domain = e.domain().clone();
    for (index, p) in e.pieces().iter().enumerate() {
        let common = Arrangement::refine(p.value.arrangement(), p.region.arrangement())?;
        let inside = p.region.mask_on(&common)?;
        let forms = p.value.on_arrangement(&common)?;
        for (c, form) in forms.forms().iter().enumerate() {
            if !inside[c] {
                continue;
            }
            let (_, max) = common.cell_extrema(form, c);
            if !max.is_positive() {
                continue;
            }
            let cell = RcSet::from_cells(common.clone(), &[c])?;
            // a >= M/2  <=>  -a·x <= a0 - M/2
            let upper = Halfspace::new(
                form.coeffs.iter().map(|x| -x.clone()).collect(),
                form.constant.clone() - max.clone() * S::half(),
            );
            let region = cell.meet(&RcSet::halfspace(&domain, &upper))?;
            let h = bump(&region)?.meet(&p.value.positive_part())?;
            let hh = HullElement::embed(&h);
            let limit = (S::from_int(2) / max).ceil_value() * h.unit_bound();
            let limit = limit.to_i64_exact().unwrap_or(i64::MAX).max(1);
            for n in 1..=limit {
                if hh.leq(&e.scale(n))? {
                    let verified = hh.is_positive();
                    return Ok(EssentialWitness {
                        h,
                        n,
                        piece: index,
                        verified,
                    });
                }
            }
            return Err(Error::VerificationFailed("essential witness bound".into()));
        }
    }
    Err(Error::NotPositive)
}

/// Target of the universal map `φ`: the same domain, with the embedding
/// `ι` the identity on functions and every output expressed on pieces
/// refined by `target`.
#[derive(Debug, Clone)]
pub struct MorphismSpec<S> {
    pub target: Arc<Arrangement<S>>,
}

impl<S: Scalar> MorphismSpec<S> {
    pub fn identity(domain: &Arc<Domain<S>>) -> Self {
        MorphismSpec {
            target: Arrangement::trivial(domain),
        }
    }

    pub fn new(target: Arc<Arrangement<S>>) -> Self {
        MorphismSpec { target }
    }

    fn domain(&self) -> &Arc<Domain<S>> {
        self.target.domain()
    }

    /// `ι`
    pub fn iota(&self, g: &PlFunction<S>) -> PlFunction<S> {
        g.clone()
    }

    /// `σ_g`: the characteristic element of `R(ι(g))`, cut along the
    /// target arrangement.
    pub fn sigma(&self, g: &PlFunction<S>) -> HullElement<S> {
        let chi = HullElement::char_elem(&principal_polar(&self.iota(g)));
        self.reexpress(&chi)
    }

    fn reexpress(&self, e: &HullElement<S>) -> HullElement<S> {
        let cells: Vec<RcSet<S>> = (0..self.target.len())
            .map(|c| RcSet::from_cells(self.target.clone(), &[c]).expect("cell index"))
            .collect();
        e.refine_by(&cells).expect("same domain")
    }

    fn check(&self, e: &HullElement<S>) -> Result<()> {
        if e.domain() != self.domain() {
            return Err(Error::RefinementViolation);
        }
        Ok(())
    }
}

/// Boolean combination of generators `χ_g`.
#[derive(Debug, Clone)]
enum BoolExpr<S> {
    Gen(PlFunction<S>),
    Not(Box<BoolExpr<S>>),
    And(Vec<BoolExpr<S>>),
    Or(Vec<BoolExpr<S>>),
}

/// Writes `χ_B` as a join over member cells of meets of `χ_{ℓ ∨ 0}`, one
/// per facet slack `ℓ` of the cell.
fn region_expression<S: Scalar>(region: &RcSet<S>) -> BoolExpr<S> {
    let domain = region.domain();
    if region.is_full() {
        return BoolExpr::Gen(PlFunction::unit(domain));
    }
    let arr = region.arrangement();
    let cells = region
        .cell_indices()
        .into_iter()
        .map(|c| {
            let facets = arr
                .cell(c)
                .closure()
                .facets()
                .iter()
                .map(|h| BoolExpr::Gen(PlFunction::affine(domain, h.slack_form()).positive_part()))
                .collect();
            BoolExpr::And(facets)
        })
        .collect();
    BoolExpr::Or(cells)
}

/// `φ` on Boolean combinations, by `φ(u♯ − α) = v − φ(α)` and
/// `φ(β₁ ∧ β₂) = φ(β₁) ∧ φ(β₂)`; joins go through De Morgan.
fn phi_bool<S: Scalar>(spec: &MorphismSpec<S>, expr: &BoolExpr<S>) -> Result<HullElement<S>> {
    let v = HullElement::unit(spec.domain());
    match expr {
        BoolExpr::Gen(g) => Ok(spec.sigma(g)),
        BoolExpr::Not(b) => v.sub(&phi_bool(spec, b)?),
        BoolExpr::And(items) => {
            let mut acc = v;
            for item in items {
                acc = acc.meet(&phi_bool(spec, item)?)?;
            }
            Ok(acc)
        }
        BoolExpr::Or(items) => {
            let negated = items.iter().map(|b| BoolExpr::Not(Box::new(b.clone()))).collect();
            phi_bool(spec, &BoolExpr::Not(Box::new(BoolExpr::And(negated))))
        }
    }
}

/// `φ(e) = Σ ι(a_i)·φ(χ_i)`, with `φ(χ_i)` computed from a Boolean
/// expression for the piece.
pub fn hull_morphism<S: Scalar>(spec: &MorphismSpec<S>, e: &HullElement<S>) -> Result<HullElement<S>> {
    spec.check(e)?;
    let mut acc = HullElement::zero(spec.domain());
    for p in e.pieces() {
        let chi = phi_bool(spec, &region_expression(&p.region))?;
        acc = acc.add(&component_product(&spec.iota(&p.value), &chi)?)?;
    }
    Ok(acc)
}

/// The same map computed directly: each piece is cut along the target and
/// keeps `ι` of its value.
pub fn hull_morphism_direct<S: Scalar>(spec: &MorphismSpec<S>, e: &HullElement<S>) -> Result<HullElement<S>> {
    spec.check(e)?;
    let mapped = e.map_values(|v| spec.iota(v));
    Ok(spec.reexpress(&mapped))
}
