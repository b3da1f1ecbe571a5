//! Exact arithmetic substrate: rationals, polynomials, piecewise polynomials
//! and small dense linear algebra. Nothing here touches floating point.

mod matrix;
mod piecewise;
mod poly;
mod rational;
mod roots;

pub use matrix::{solve_linear, Matrix};
pub use piecewise::{integrate, PiecewisePoly};
pub use poly::Poly;
pub use rational::{q, Rational};
pub use roots::{roots_in_interval, RootSet};
