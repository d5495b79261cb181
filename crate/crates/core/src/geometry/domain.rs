use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::affine::Halfspace;
use crate::geometry::lp::{self, LpOutcome};
use crate::geometry::polytope::Polytope;
use crate::scalar::Scalar;

/// A bounded, full-dimensional rational polytope `{x : a·x <= b}`, the space
/// on which functions live. The unit is the constant-one function on it.
#[derive(Debug, Clone)]
pub struct Domain<S> {
    dim: usize,
    inequalities: Vec<Halfspace<S>>,
    polytope: Polytope<S>,
}

impl<S: Scalar> PartialEq for Domain<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.inequalities == other.inequalities
    }
}

impl<S: Scalar> Eq for Domain<S> {}

impl<S: Scalar> Domain<S> {
    /// Validates nonemptiness and boundedness by exact LP, then builds the
    /// vertex description.
    pub fn new(dim: usize, inequalities: Vec<Halfspace<S>>) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(Error::MalformedDomain("dimension must be positive".into()));
        }
        if let Some(bad) = inequalities.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.normal.len(),
            });
        }
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut e = vec![S::zero(); dim];
            e[i] = S::one();
            let max = match lp::maximize(&e, &inequalities) {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => return Err(Error::UnboundedDomain),
                LpOutcome::Infeasible => return Err(Error::EmptyDomain),
            };
            let min = match lp::minimize(&e, &inequalities) {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => return Err(Error::UnboundedDomain),
                LpOutcome::Infeasible => return Err(Error::EmptyDomain),
            };
            if min >= max {
                return Err(Error::DegenerateDomain);
            }
            lo.push(min);
            hi.push(max);
        }
        let mut polytope = Polytope::from_box(&lo, &hi);
        for h in &inequalities {
            polytope = polytope.clip(h).ok_or(Error::DegenerateDomain)?;
        }
        Ok(Arc::new(Domain {
            dim,
            inequalities,
            polytope,
        }))
    }

    /// `[lo, hi]^dim`
    pub fn cube(dim: usize, lo: S, hi: S) -> Result<Arc<Self>> {
        let mut ineqs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut up = vec![S::zero(); dim];
            up[i] = S::one();
            let mut down = vec![S::zero(); dim];
            down[i] = -S::one();
            ineqs.push(Halfspace::new(up, hi.clone()));
            ineqs.push(Halfspace::new(down, -lo.clone()));
        }
        Self::new(dim, ineqs)
    }

    /// `[0, 1]^dim`
    pub fn unit_cube(dim: usize) -> Arc<Self> {
        Self::cube(dim, S::zero(), S::one()).expect("unit cube is a valid domain")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Halfspace<S>] {
        &self.inequalities
    }

    pub fn polytope(&self) -> &Polytope<S> {
        &self.polytope
    }

    pub fn contains(&self, point: &[S]) -> bool {
        point.len() == self.dim && self.inequalities.iter().all(|h| h.contains(point))
    }

    pub fn volume(&self) -> Option<S> {
        self.polytope.volume()
    }
}

pub(crate) fn same_domain<S: Scalar>(a: &Arc<Domain<S>>, b: &Arc<Domain<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_domain() {
        // x >= 0, y >= 0, x + y <= 1
        let d = Domain::new(
            2,
            vec![
                Halfspace::new(vec![q(-1, 1), q(0, 1)], q(0, 1)),
                Halfspace::new(vec![q(0, 1), q(-1, 1)], q(0, 1)),
                Halfspace::new(vec![q(1, 1), q(1, 1)], q(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(d.polytope().vertices().len(), 3);
        assert_eq!(d.volume(), Some(q(1, 2)));
    }

    #[test]
    fn rejects_bad_domains() {
        let unbounded = Domain::new(1, vec![Halfspace::new(vec![q(1, 1)], q(1, 1))]);
        assert_eq!(unbounded.unwrap_err(), Error::UnboundedDomain);
        let empty = Domain::new(
            1,
            vec![
                Halfspace::new(vec![q(1, 1)], q(0, 1)),
                Halfspace::new(vec![q(-1, 1)], q(-1, 1)),
            ],
        );
        assert_eq!(empty.unwrap_err(), Error::EmptyDomain);
        let flat = Domain::new(
            2,
            vec![
                Halfspace::new(vec![q(1, 1), q(0, 1)], q(1, 1)),
                Halfspace::new(vec![q(-1, 1), q(0, 1)], q(0, 1)),
                Halfspace::new(vec![q(0, 1), q(1, 1)], q(0, 1)),
                Halfspace::new(vec![q(0, 1), q(-1, 1)], q(0, 1)),
            ],
        );
        assert_eq!(flat.unwrap_err(), Error::DegenerateDomain);
    }
}
