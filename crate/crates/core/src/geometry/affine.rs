use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of<S: Scalar>(value: &S) -> Sign {
        if value.is_positive() {
            Sign::Pos
        } else if value.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

pub type SignVector = Vec<Sign>;

pub fn sign_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// `coeffs · x + constant`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affine<S> {
    pub coeffs: Vec<S>,
    pub constant: S,
}

impl<S: Scalar> Affine<S> {
    pub fn new(coeffs: Vec<S>, constant: S) -> Self {
        Affine { coeffs, constant }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Affine {
            coeffs: vec![S::zero(); dim],
            constant: c,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, S::zero())
    }

    /// The coordinate function `x_{index+1}` (zero-based index).
    pub fn coordinate(dim: usize, index: usize) -> Self {
        let mut coeffs = vec![S::zero(); dim];
        coeffs[index] = S::one();
        Affine {
            coeffs,
            constant: S::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, point: &[S]) -> S {
        let mut acc = self.constant.clone();
        for (a, x) in self.coeffs.iter().zip(point) {
            if !a.is_zero() {
                acc = acc + a.clone() * x.clone();
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Affine {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            constant: self.constant.clone() + other.constant.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Affine {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
            constant: self.constant.clone() - other.constant.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, k: &S) -> Self {
        Affine {
            coeffs: self.coeffs.iter().map(|a| a.clone() * k.clone()).collect(),
            constant: self.constant.clone() * k.clone(),
        }
    }

    /// The hyperplane `self = 0`, or `None` when the form is constant.
    pub fn zero_set(&self) -> Option<Hyperplane<S>> {
        if self.is_constant() {
            None
        } else {
            Hyperplane::new(self.coeffs.clone(), -self.constant.clone()).ok()
        }
    }

    /// Writes the form in term syntax, e.g. `2*x1 - x2 + 1/2`. Rational
    /// coefficients are printed as `p/q*x1`, which is outside the term
    /// grammar; forms are for display only.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let body = if mag.is_one() {
                format!("x{}", i + 1)
            } else {
                format!("{}*x{}", mag, i + 1)
            };
            if out.is_empty() {
                if a.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if a.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            return self.constant.to_string();
        }
        if !self.constant.is_zero() {
            out.push_str(if self.constant.is_negative() { " - " } else { " + " });
            out.push_str(&self.constant.abs().to_string());
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Affine<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `normal · x = offset`, scaled so the first nonzero normal coefficient is 1.
/// Two hyperplanes are the same set iff their canonical forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane<S> {
    normal: Vec<S>,
    offset: S,
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Result<Self> {
        let Some(lead) = normal.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::DegenerateHyperplane);
        };
        Ok(Hyperplane {
            normal: normal.into_iter().map(|c| c / lead.clone()).collect(),
            offset: offset / lead,
        })
    }

    pub fn normal(&self) -> &[S] {
        &self.normal
    }

    pub fn offset(&self) -> &S {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `normal · x - offset`
    pub fn eval(&self, point: &[S]) -> S {
        dot(&self.normal, point) - self.offset.clone()
    }

    pub fn side(&self, point: &[S]) -> Sign {
        Sign::of(&self.eval(point))
    }

    /// The affine form `normal · x - offset`.
    pub fn form(&self) -> Affine<S> {
        Affine::new(self.normal.clone(), -self.offset.clone())
    }

    /// Closed halfspace on the given side (`Pos` means `normal · x >= offset`).
    pub fn halfspace(&self, side: Sign) -> Halfspace<S> {
        match side {
            Sign::Neg | Sign::Zero => Halfspace::new(self.normal.clone(), self.offset.clone()),
            Sign::Pos => Halfspace::new(
                self.normal.iter().map(|c| -c.clone()).collect(),
                -self.offset.clone(),
            ),
        }
    }
}

impl<S: Scalar> fmt::Display for Hyperplane<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", Affine::new(self.normal.clone(), S::zero()), self.offset)
    }
}

/// `normal · x <= bound`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace<S> {
    pub normal: Vec<S>,
    pub bound: S,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vec<S>, bound: S) -> Self {
        Halfspace { normal, bound }
    }

    /// `bound - normal · x`, nonnegative exactly on the halfspace.
    pub fn slack(&self, point: &[S]) -> S {
        self.bound.clone() - dot(&self.normal, point)
    }

    pub fn contains(&self, point: &[S]) -> bool {
        !self.slack(point).is_negative()
    }

    pub fn slack_form(&self) -> Affine<S> {
        Affine::new(
            self.normal.iter().map(|c| -c.clone()).collect(),
            self.bound.clone(),
        )
    }
}

impl<S: Scalar> fmt::Display for Halfspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", Affine::new(self.normal.clone(), S::zero()), self.bound)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Rank of a list of vectors by exact Gaussian elimination.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let lead = m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() / lead.clone();
            for j in c..cols {
                let delta = factor.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set (`-1` as `None` for empty).
pub fn affine_dimension<S: Scalar>(points: &[Vec<S>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<S>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    Some(rank(&diffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hyperplanes_are_canonical() {
        let a = Hyperplane::new(vec![q(2, 1)], q(1, 1)).unwrap();
        let b = Hyperplane::new(vec![q(-4, 1)], q(-2, 1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.offset(), &q(1, 2));
        assert!(Hyperplane::new(vec![q(0, 1), q(0, 1)], q(1, 1)).is_err());
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1)],
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank::<BigRational>(&[]), 0);
    }

    #[test]
    fn render_forms() {
        let f = Affine::new(vec![q(2, 1), q(-1, 1)], q(-1, 2));
        assert_eq!(f.render(), "2*x1 - x2 - 1/2");
        assert_eq!(Affine::<BigRational>::zero(2).render(), "0");
        assert_eq!(Affine::new(vec![q(-1, 1)], q(1, 1)).render(), "-x1 + 1");
    }
}
