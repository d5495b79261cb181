//! Full-dimensional bounded polytopes kept in both H- and V-representation.
//!
//! Cutting by a hyperplane uses the vertex values: vertices on each side are
//! kept and every edge that crosses the hyperplane contributes a new vertex.
//! Two vertices span an edge iff the facet normals tight at both have rank
//! `d - 1`. After a cut, inequalities whose tight vertices no longer span a
//! `(d-1)`-flat are dropped, so `facets` stays irredundant.

use std::cmp::Ordering;

use crate::geometry::affine::{affine_dimension, rank, Affine, Halfspace, Hyperplane};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex<S> {
    pub point: Vec<S>,
    /// Sorted indices of the facets this vertex lies on.
    pub tight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope<S> {
    dim: usize,
    facets: Vec<Halfspace<S>>,
    vertices: Vec<Vertex<S>>,
}

#[derive(Debug, Clone)]
pub enum Cut<S> {
    /// The hyperplane form is `<= 0` on the whole polytope.
    Below,
    /// The hyperplane form is `>= 0` on the whole polytope.
    Above,
    /// `(below, above)` pieces, both full-dimensional.
    Split(Polytope<S>, Polytope<S>),
}

impl<S: Scalar> Polytope<S> {
    /// The box `lo <= x <= hi`. Every `lo[i] < hi[i]` is required.
    pub fn from_box(lo: &[S], hi: &[S]) -> Self {
        let dim = lo.len();
        let mut facets = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut up = vec![S::zero(); dim];
            up[i] = S::one();
            let mut down = vec![S::zero(); dim];
            down[i] = -S::one();
            facets.push(Halfspace::new(up, hi[i].clone()));
            facets.push(Halfspace::new(down, -lo[i].clone()));
        }
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let mut point = Vec::with_capacity(dim);
            let mut tight = Vec::with_capacity(dim);
            for i in 0..dim {
                if mask & (1 << i) != 0 {
                    point.push(hi[i].clone());
                    tight.push(2 * i);
                } else {
                    point.push(lo[i].clone());
                    tight.push(2 * i + 1);
                }
            }
            vertices.push(Vertex { point, tight });
        }
        Polytope {
            dim,
            facets,
            vertices,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Halfspace<S>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vertex<S>] {
        &self.vertices
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = &Vec<S>> {
        self.vertices.iter().map(|v| &v.point)
    }

    /// Vertex average; a point of the interior.
    pub fn centroid(&self) -> Vec<S> {
        let n = S::from_int(self.vertices.len() as i64);
        (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .fold(S::zero(), |acc, v| acc + v.point[i].clone())
                    / n.clone()
            })
            .collect()
    }

    pub fn contains(&self, point: &[S]) -> bool {
        self.facets.iter().all(|h| h.contains(point))
    }

    /// Minimum and maximum of an affine form over the polytope.
    pub fn extrema(&self, f: &Affine<S>) -> (S, S) {
        let mut values = self.vertices.iter().map(|v| f.eval(&v.point));
        let first = values.next().expect("polytope has vertices");
        values.fold((first.clone(), first), |(lo, hi), v| {
            (lo.min(v.clone()), hi.max(v))
        })
    }

    /// Maximizer of an affine form among the vertices.
    pub fn argmax(&self, f: &Affine<S>) -> (S, Vec<S>) {
        let mut best: Option<(S, &Vec<S>)> = None;
        for v in &self.vertices {
            let value = f.eval(&v.point);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, &v.point));
            }
        }
        let (value, point) = best.expect("polytope has vertices");
        (value, point.clone())
    }

    pub fn cut(&self, hyperplane: &Hyperplane<S>) -> Cut<S> {
        let values: Vec<S> = self
            .vertices
            .iter()
            .map(|v| hyperplane.eval(&v.point))
            .collect();
        let any_neg = values.iter().any(|v| v.is_negative());
        let any_pos = values.iter().any(|v| v.is_positive());
        match (any_neg, any_pos) {
            (_, false) => return Cut::Below,
            (false, true) => return Cut::Above,
            (true, true) => {}
        }
        let k = self.facets.len();
        let mut below = self.facets.clone();
        below.push(hyperplane.halfspace(crate::geometry::Sign::Neg));
        let mut above = self.facets.clone();
        above.push(hyperplane.halfspace(crate::geometry::Sign::Pos));

        let mut below_vertices = Vec::new();
        let mut above_vertices = Vec::new();
        for (v, value) in self.vertices.iter().zip(&values) {
            if value.is_zero() {
                let mut tight = v.tight.clone();
                tight.push(k);
                below_vertices.push(Vertex {
                    point: v.point.clone(),
                    tight: tight.clone(),
                });
                above_vertices.push(Vertex {
                    point: v.point.clone(),
                    tight,
                });
            } else if value.is_negative() {
                below_vertices.push(v.clone());
            } else {
                above_vertices.push(v.clone());
            }
        }
        for (i, u) in self.vertices.iter().enumerate() {
            if !values[i].is_negative() {
                continue;
            }
            for (j, w) in self.vertices.iter().enumerate() {
                if !values[j].is_positive() {
                    continue;
                }
                let common = intersect_sorted(&u.tight, &w.tight);
                if !self.is_edge(&common) {
                    continue;
                }
                let t = values[i].clone() / (values[i].clone() - values[j].clone());
                let point: Vec<S> = u
                    .point
                    .iter()
                    .zip(&w.point)
                    .map(|(a, b)| a.clone() + t.clone() * (b.clone() - a.clone()))
                    .collect();
                let mut tight = common;
                tight.push(k);
                below_vertices.push(Vertex {
                    point: point.clone(),
                    tight: tight.clone(),
                });
                above_vertices.push(Vertex { point, tight });
            }
        }
        Cut::Split(
            Polytope::pruned(self.dim, below, below_vertices),
            Polytope::pruned(self.dim, above, above_vertices),
        )
    }

    /// Keeps the part where `halfspace` holds, if it is full-dimensional.
    pub fn clip(&self, halfspace: &Halfspace<S>) -> Option<Polytope<S>> {
        let slack = halfspace.slack_form();
        let (lo, hi) = self.extrema(&slack);
        if !lo.is_negative() {
            return Some(self.clone());
        }
        if !hi.is_positive() {
            return None;
        }
        let plane = Hyperplane::new(halfspace.normal.clone(), halfspace.bound.clone()).ok()?;
        let lead_positive = halfspace
            .normal
            .iter()
            .find(|c| !c.is_zero())
            .is_none_or(|c| c.is_positive());
        match self.cut(&plane) {
            Cut::Split(below, above) => Some(if lead_positive { below } else { above }),
            _ => unreachable!("slack changes sign on the polytope"),
        }
    }

    fn is_edge(&self, common: &[usize]) -> bool {
        if common.len() + 1 < self.dim {
            return false;
        }
        let normals: Vec<Vec<S>> = common
            .iter()
            .map(|&f| self.facets[f].normal.clone())
            .collect();
        rank(&normals) == self.dim - 1
    }

    fn pruned(dim: usize, facets: Vec<Halfspace<S>>, vertices: Vec<Vertex<S>>) -> Self {
        let mut keep = Vec::with_capacity(facets.len());
        for f in 0..facets.len() {
            let on: Vec<Vec<S>> = vertices
                .iter()
                .filter(|v| v.tight.binary_search(&f).is_ok())
                .map(|v| v.point.clone())
                .collect();
            keep.push(on.len() >= dim && affine_dimension(&on) == Some(dim - 1));
        }
        let mut remap = vec![usize::MAX; facets.len()];
        let mut kept = Vec::new();
        for (i, h) in facets.into_iter().enumerate() {
            if keep[i] {
                remap[i] = kept.len();
                kept.push(h);
            }
        }
        let vertices = vertices
            .into_iter()
            .map(|v| Vertex {
                point: v.point,
                tight: v
                    .tight
                    .iter()
                    .filter(|&&f| keep[f])
                    .map(|&f| remap[f])
                    .collect(),
            })
            .collect();
        Polytope {
            dim,
            facets: kept,
            vertices,
        }
    }

    /// Exact `d`-volume for `d <= 2`.
    pub fn volume(&self) -> Option<S> {
        match self.dim {
            1 => {
                let (lo, hi) = self.extrema(&Affine::coordinate(1, 0));
                Some(hi - lo)
            }
            2 => {
                let c = self.centroid();
                let mut pts: Vec<Vec<S>> = self
                    .vertices
                    .iter()
                    .map(|v| vec![v.point[0].clone() - c[0].clone(), v.point[1].clone() - c[1].clone()])
                    .collect();
                pts.sort_by(angle_order);
                let n = pts.len();
                let mut twice = S::zero();
                for i in 0..n {
                    let (a, b) = (&pts[i], &pts[(i + 1) % n]);
                    twice = twice + a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
                }
                Some(twice.abs() / S::from_int(2))
            }
            _ => None,
        }
    }
}

/// Counterclockwise order of nonzero vectors, starting from the positive x-axis.
fn angle_order<S: Scalar>(a: &Vec<S>, b: &Vec<S>) -> Ordering {
    let half = |v: &Vec<S>| {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
