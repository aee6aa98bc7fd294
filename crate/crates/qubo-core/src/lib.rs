//! Modeling toolkit for quadratic unconstrained binary optimization.
//!
//! The crate covers the full round trip from a constrained binary problem
//! to a QUBO and back:
//!
//! - [`model`]: QUBO and Ising representations, evaluation, canonical
//!   storage forms, and the variable change between the two encodings.
//! - [`penalties`]: known constraint/penalty pairs, the quadratic penalty
//!   on linear equality systems, slack-variable binary expansion for
//!   integer inequalities, and a default penalty magnitude.
//! - [`formulations`]: ready-made builders for ten classic problems, each
//!   with a decoder back to the original domain.
//! - [`reduction`]: quadratization of higher-degree pseudo-Boolean
//!   polynomials by product substitution.
//! - [`solve`]: exhaustive enumeration for desk-scale models and a
//!   deterministic tabu search, plus solution verification.

pub mod error;
pub mod formulations;
pub mod model;
pub mod penalties;
pub mod reduction;
pub mod rng;
pub mod solve;

pub use error::{Error, Result};
pub use formulations::{DecodedSolution, Decoder, Graph};
pub use model::{Assignment, IsingModel, QuboModel, Sense};
pub use penalties::{ConstrainedProblem, LinearConstraint, PenalizedModel, Relation};
pub use reduction::PseudoBooleanPolynomial;
pub use solve::{exact_solve, tabu_solve, Method, Solution, TabuParams};
