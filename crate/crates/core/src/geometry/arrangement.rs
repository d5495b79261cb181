//! Hyperplane arrangements restricted to a domain.
//!
//! A cell is a sign-vector class `{x in X : sign(h_i(x)) = s_i}`. Cells are
//! convex, so a full-dimensional cell is exactly a class whose sign vector
//! has no zeros and which meets the interior of `X`. Full-dimensional cells
//! are enumerated eagerly and kept sorted by sign vector; lower-dimensional
//! faces are produced on demand by [`Arrangement::locate`] and
//! [`Arrangement::faces`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::affine::{rank, sign_string, Affine, Halfspace, Hyperplane, Sign, SignVector};
use crate::geometry::domain::{same_domain, Domain};
use crate::geometry::lp::{self, LpOutcome};
use crate::geometry::polytope::{Cut, Polytope};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Cell<S> {
    signs: SignVector,
    polytope: Polytope<S>,
    interior: Vec<S>,
}

impl<S: Scalar> Cell<S> {
    fn new(signs: SignVector, polytope: Polytope<S>) -> Self {
        let interior = polytope.centroid();
        Cell {
            signs,
            polytope,
            interior,
        }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Closure of the cell; its facets form an irredundant H-representation.
    pub fn closure(&self) -> &Polytope<S> {
        &self.polytope
    }

    /// A point strictly inside the cell.
    pub fn interior_point(&self) -> &[S] {
        &self.interior
    }

    pub fn dimension(&self) -> usize {
        self.polytope.dim()
    }

    pub fn sign_string(&self) -> String {
        sign_string(&self.signs)
    }
}

/// A relatively open face of an arrangement, possibly lower-dimensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face<S> {
    pub signs: SignVector,
    pub dimension: usize,
    /// Closure: domain inequalities, one closed halfspace per nonzero sign,
    /// and two opposite halfspaces per zero sign.
    pub closure: Vec<Halfspace<S>>,
    /// Index of the full-dimensional cell, when `dimension == d`.
    pub cell: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Arrangement<S> {
    domain: Arc<Domain<S>>,
    hyperplanes: Vec<Hyperplane<S>>,
    cells: Vec<Cell<S>>,
}

impl<S: Scalar> Arrangement<S> {
    /// The arrangement with no hyperplanes: one cell, the whole domain.
    pub fn trivial(domain: &Arc<Domain<S>>) -> Arc<Self> {
        Arc::new(Arrangement {
            domain: domain.clone(),
            hyperplanes: Vec::new(),
            cells: vec![Cell::new(Vec::new(), domain.polytope().clone())],
        })
    }

    /// Deduplicates the hyperplanes and enumerates the full-dimensional cells.
    pub fn build(domain: &Arc<Domain<S>>, hyperplanes: Vec<Hyperplane<S>>) -> Result<Arc<Self>> {
        let dim = domain.dim();
        if let Some(h) = hyperplanes.iter().find(|h| h.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h.dim(),
            });
        }
        let mut hyperplanes = hyperplanes;
        hyperplanes.sort();
        hyperplanes.dedup();
        Ok(Arc::new(Self::trivial(domain).split_by(hyperplanes)))
    }

    /// Builds from raw coefficient rows `(normal, offset)`; rejects `0 = c`.
    pub fn from_rows(domain: &Arc<Domain<S>>, rows: Vec<(Vec<S>, S)>) -> Result<Arc<Self>> {
        let hyperplanes = rows
            .into_iter()
            .map(|(n, b)| Hyperplane::new(n, b))
            .collect::<Result<Vec<_>>>()?;
        Self::build(domain, hyperplanes)
    }

    pub fn domain(&self) -> &Arc<Domain<S>> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane<S>] {
        &self.hyperplanes
    }

    pub fn cells(&self) -> &[Cell<S>] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &Cell<S> {
        &self.cells[index]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn same_hyperplanes(&self, other: &Self) -> bool {
        self.hyperplanes == other.hyperplanes
    }

    /// Index of the full-dimensional cell with this sign vector.
    pub fn find(&self, signs: &[Sign]) -> Option<usize> {
        self.cells
            .binary_search_by(|c| c.signs.as_slice().cmp(signs))
            .ok()
    }

    /// Adds hyperplanes (already canonical) and splits cells accordingly.
    fn split_by(&self, extra: Vec<Hyperplane<S>>) -> Self {
        let extra: Vec<Hyperplane<S>> = extra
            .into_iter()
            .filter(|h| self.hyperplanes.binary_search(h).is_err())
            .collect();
        let mut merged: Vec<Hyperplane<S>> = self.hyperplanes.clone();
        merged.extend(extra.iter().cloned());
        merged.sort();
        let old_pos: Vec<usize> = self
            .hyperplanes
            .iter()
            .map(|h| merged.binary_search(h).expect("merged contains old"))
            .collect();
        let new_pos: Vec<usize> = extra
            .iter()
            .map(|h| merged.binary_search(h).expect("merged contains new"))
            .collect();

        let mut work: Vec<(Vec<Sign>, Polytope<S>)> = self
            .cells
            .iter()
            .map(|c| {
                let mut signs = vec![Sign::Zero; merged.len()];
                for (k, s) in c.signs.iter().enumerate() {
                    signs[old_pos[k]] = *s;
                }
                (signs, c.polytope.clone())
            })
            .collect();
        for (h, &pos) in extra.iter().zip(&new_pos) {
            let mut next = Vec::with_capacity(work.len());
            for (mut signs, poly) in work {
                match poly.cut(h) {
                    Cut::Below => {
                        signs[pos] = Sign::Neg;
                        next.push((signs, poly));
                    }
                    Cut::Above => {
                        signs[pos] = Sign::Pos;
                        next.push((signs, poly));
                    }
                    Cut::Split(below, above) => {
                        let mut up = signs.clone();
                        signs[pos] = Sign::Neg;
                        up[pos] = Sign::Pos;
                        next.push((signs, below));
                        next.push((up, above));
                    }
                }
            }
            work = next;
        }
        let mut cells: Vec<Cell<S>> = work.into_iter().map(|(s, p)| Cell::new(s, p)).collect();
        cells.sort_by(|a, b| a.signs.cmp(&b.signs));
        Arrangement {
            domain: self.domain.clone(),
            hyperplanes: merged,
            cells,
        }
    }

    /// Arrangement on the union of both hyperplane sets.
    pub fn refine(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        if !same_domain(&a.domain, &b.domain) {
            return Err(Error::DomainMismatch);
        }
        if Arc::ptr_eq(a, b) || a.hyperplanes == b.hyperplanes {
            return Ok(a.clone());
        }
        let (base, other) = if a.cells.len() >= b.cells.len() { (a, b) } else { (b, a) };
        if other
            .hyperplanes
            .iter()
            .all(|h| base.hyperplanes.binary_search(h).is_ok())
        {
            return Ok(base.clone());
        }
        Ok(Arc::new(base.split_by(other.hyperplanes.clone())))
    }

    pub fn refine_with(self: &Arc<Self>, extra: Vec<Hyperplane<S>>) -> Arc<Self> {
        if extra
            .iter()
            .all(|h| self.hyperplanes.binary_search(h).is_ok())
        {
            return self.clone();
        }
        let mut extra = extra;
        extra.sort();
        extra.dedup();
        Arc::new(self.split_by(extra))
    }

    /// For each cell of `self`, the index of the cell of `coarser` that
    /// contains it. `coarser` must use a subset of `self`'s hyperplanes.
    pub fn project_onto(&self, coarser: &Self) -> Result<Vec<usize>> {
        if !same_domain(&self.domain, &coarser.domain) {
            return Err(Error::DomainMismatch);
        }
        let positions: Vec<usize> = coarser
            .hyperplanes
            .iter()
            .map(|h| self.hyperplanes.binary_search(h))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument("arrangement is not a refinement".into()))?;
        let mut out = Vec::with_capacity(self.cells.len());
        let mut buf = Vec::with_capacity(positions.len());
        for c in &self.cells {
            buf.clear();
            buf.extend(positions.iter().map(|&p| c.signs[p]));
            out.push(
                coarser
                    .find(&buf)
                    .expect("every refined cell lies in a coarser cell"),
            );
        }
        Ok(out)
    }

    pub fn signs_of(&self, point: &[S]) -> SignVector {
        self.hyperplanes.iter().map(|h| h.side(point)).collect()
    }

    /// Full-dimensional cells whose closure contains the point.
    pub fn cells_containing(&self, point: &[S]) -> Result<Vec<usize>> {
        if !self.domain.contains(point) {
            return Err(Error::OutsideDomain);
        }
        let signs = self.signs_of(point);
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.signs
                    .iter()
                    .zip(&signs)
                    .all(|(a, b)| *b == Sign::Zero || a == b)
            })
            .map(|(i, _)| i)
            .collect())
    }

    /// The unique face containing the point.
    pub fn locate(&self, point: &[S]) -> Result<Face<S>> {
        if !self.domain.contains(point) {
            return Err(Error::OutsideDomain);
        }
        let signs = self.signs_of(point);
        if signs.iter().all(|s| *s != Sign::Zero) {
            if let Some(i) = self.find(&signs) {
                return Ok(Face {
                    closure: self.closure_constraints(&signs),
                    signs,
                    dimension: self.dim(),
                    cell: Some(i),
                });
            }
        }
        let closure = self.closure_constraints(&signs);
        let dimension = polyhedron_dimension(self.dim(), &closure);
        let cell = if dimension == self.dim() { self.find(&signs) } else { None };
        Ok(Face {
            signs,
            dimension,
            closure,
            cell,
        })
    }

    fn closure_constraints(&self, signs: &[Sign]) -> Vec<Halfspace<S>> {
        let mut out: Vec<Halfspace<S>> = self.domain.inequalities().to_vec();
        for (h, s) in self.hyperplanes.iter().zip(signs) {
            match s {
                Sign::Zero => {
                    out.push(h.halfspace(Sign::Neg));
                    out.push(h.halfspace(Sign::Pos));
                }
                side => out.push(h.halfspace(*side)),
            }
        }
        out
    }

    /// Every nonempty sign-vector class, of every dimension, by exact LP.
    /// Exponential in the worst case; meant for small arrangements.
    pub fn faces(&self) -> Vec<Face<S>> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.hyperplanes.len());
        self.faces_rec(&mut prefix, &mut out);
        out
    }

    fn faces_rec(&self, prefix: &mut Vec<Sign>, out: &mut Vec<Face<S>>) {
        if !self.strictly_feasible(prefix) {
            return;
        }
        if prefix.len() == self.hyperplanes.len() {
            let closure = self.closure_constraints(prefix);
            let dimension = polyhedron_dimension(self.dim(), &closure);
            let cell = if dimension == self.dim() { self.find(prefix) } else { None };
            out.push(Face {
                signs: prefix.clone(),
                dimension,
                closure,
                cell,
            });
            return;
        }
        for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
            prefix.push(s);
            self.faces_rec(prefix, out);
            prefix.pop();
        }
    }

    /// Whether `{x in X : sign(h_i(x)) = prefix_i}` is nonempty.
    fn strictly_feasible(&self, prefix: &[Sign]) -> bool {
        let d = self.dim();
        // variables (x, t); maximize t subject to s_i h_i(x) >= t
        let lift = |h: &Halfspace<S>, t: S| {
            let mut n = h.normal.clone();
            n.push(t);
            Halfspace::new(n, h.bound.clone())
        };
        let mut cons: Vec<Halfspace<S>> = self
            .domain
            .inequalities()
            .iter()
            .map(|h| lift(h, S::zero()))
            .collect();
        for (h, s) in self.hyperplanes.iter().zip(prefix) {
            match s {
                Sign::Zero => {
                    cons.push(lift(&h.halfspace(Sign::Neg), S::zero()));
                    cons.push(lift(&h.halfspace(Sign::Pos), S::zero()));
                }
                side => {
                    // s (n·x - b) >= t  <=>  -s n·x + t <= -s b
                    cons.push(lift(&h.halfspace(side.flip()).negated(), S::one()));
                }
            }
        }
        let mut cap = vec![S::zero(); d];
        cap.push(S::one());
        cons.push(Halfspace::new(cap.clone(), S::one()));
        match lp::maximize(&cap, &cons) {
            LpOutcome::Optimal { value, .. } => {
                value.is_positive() || prefix.iter().all(|s| *s == Sign::Zero)
            }
            _ => false,
        }
    }

    /// Exact minimum and maximum of `f` over the closure of a cell.
    pub fn cell_extrema(&self, f: &Affine<S>, cell: usize) -> (S, S) {
        self.cells[cell].polytope.extrema(f)
    }

    /// The same extrema computed by the simplex method on the cell's
    /// closure constraints instead of its vertices.
    pub fn cell_extrema_lp(&self, f: &Affine<S>, cell: usize) -> (S, S) {
        let cons = self.closure_constraints(&self.cells[cell].signs);
        let max = lp::maximize(&f.coeffs, &cons)
            .value()
            .cloned()
            .expect("cell closure is a nonempty polytope");
        let min = lp::minimize(&f.coeffs, &cons)
            .value()
            .cloned()
            .expect("cell closure is a nonempty polytope");
        (min + f.constant.clone(), max + f.constant.clone())
    }

    /// Merges cells across every hyperplane that separates no two adjacent
    /// cells with different labels. Returns the coarser arrangement and the
    /// labels carried over.
    pub fn coarsen<L: PartialEq + Clone>(self: &Arc<Self>, labels: &[L]) -> (Arc<Self>, Vec<L>) {
        debug_assert_eq!(labels.len(), self.cells.len());
        let mut needed = Vec::new();
        let mut partner = Vec::with_capacity(self.hyperplanes.len());
        for j in 0..self.hyperplanes.len() {
            let separates = self.cells.iter().enumerate().any(|(i, c)| {
                if c.signs[j] != Sign::Pos {
                    return false;
                }
                partner.clear();
                partner.extend_from_slice(&c.signs);
                partner[j] = Sign::Neg;
                self.find(&partner).is_some_and(|k| labels[k] != labels[i])
            });
            if separates {
                needed.push(self.hyperplanes[j].clone());
            }
        }
        if needed.len() == self.hyperplanes.len() {
            return (self.clone(), labels.to_vec());
        }
        let coarse = Arc::new(Self::trivial(&self.domain).split_by(needed));
        let map = self
            .project_onto(&coarse)
            .expect("coarse hyperplanes are a subset");
        let mut out: Vec<Option<L>> = vec![None; coarse.cells.len()];
        for (i, &k) in map.iter().enumerate() {
            if out[k].is_none() {
                out[k] = Some(labels[i].clone());
            }
        }
        let out = out
            .into_iter()
            .map(|l| l.expect("every coarse cell contains a fine cell"))
            .collect();
        (coarse, out)
    }
}

impl<S: Scalar> Halfspace<S> {
    fn negated(&self) -> Self {
        Halfspace::new(
            self.normal.iter().map(|c| -c.clone()).collect(),
            -self.bound.clone(),
        )
    }
}

/// Dimension of a nonempty polyhedron: `d` minus the rank of its implicit
/// equalities, each found by maximizing its slack.
fn polyhedron_dimension<S: Scalar>(d: usize, cons: &[Halfspace<S>]) -> usize {
    let mut implicit = Vec::new();
    for h in cons {
        let neg: Vec<S> = h.normal.iter().map(|c| -c.clone()).collect();
        // max (b - n·x) = b - min n·x
        if let LpOutcome::Optimal { value, .. } = lp::maximize(&neg, cons) {
            if (value + h.bound.clone()).is_zero() {
                implicit.push(h.normal.clone());
            }
        }
    }
    d - rank(&implicit)
}
