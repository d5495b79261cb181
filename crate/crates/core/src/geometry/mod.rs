//! Exact rational polyhedral engine: domains, hyperplane arrangements,
//! point location and linear optimization over cells.

mod affine;
mod arrangement;
mod domain;
pub mod lp;
mod polytope;

pub use affine::{
    affine_dimension, dot, rank, sign_string, Affine, Halfspace, Hyperplane, Sign, SignVector,
};
pub use arrangement::{Arrangement, Cell, Face};
pub use domain::Domain;

pub use polytope::{Cut, Polytope, Vertex};
