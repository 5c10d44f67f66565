//! Quadratic twists `d y^2 = f(x)` of hyperelliptic curves over Q.
//!
//! - [`poly`]: integer and F_p polynomial arithmetic, root counts and
//!   factorisation shapes.
//! - [`curves`]: twists, changes of variables and reduction types at primes.
//! - [`localsol`]: a certified decision procedure for `C_d(Q_p) ≠ ∅`.
//! - [`fiber`]: the special fibre of the twist at a good prime.
//! - [`density`]: sieving for primes at which `f` has no root.

pub mod arith;
pub mod curves;
pub mod density;
pub mod error;
pub mod fiber;
pub mod localsol;
pub mod poly;
pub mod registry;
pub mod sieve;

pub use arith::Prime;
pub use curves::{HyperellipticTwist, Irreducibility, MobiusTransform, PrimeClassification, PrimeKind};
pub use density::{search_insoluble_twists, sieve_s_f, SieveOptions, SieveReport};
pub use error::{Error, Result};
pub use fiber::{good_fiber, twist_fiber_model, FiberGraph};
pub use localsol::{is_locally_soluble, SolubilityStatus, SolubilityVerdict, Witness};
pub use poly::{FactorShape, FpPolynomial, IntPolynomial};
