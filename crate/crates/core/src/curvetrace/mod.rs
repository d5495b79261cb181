//! The restriction group on the curve `{y = x²} ∪ {y = 0}` in `[0, 1]²`:
//! exact quadratic arithmetic, piecewise polynomials, germ supports and
//! cover gaps.
//!
//! This module works over [`Q`](crate::Q) directly; its breakpoint field
//! needs integer square roots, which a generic ordered field does not
//! provide.

mod interval;
mod poly;
mod quadreal;
mod trace;

pub use interval::{Interval, IntervalSet};
pub use poly::{PiecewisePoly, Poly};
pub use quadreal::{squarefree_part, QuadReal};
pub use trace::{
    cover_gap, h_term, parabola_family, pi_y_term, unit_square, Branch, CoverGap, Dir, TraceElement,
};
