//! Exact arithmetic behind 2-power rank statistics of quadratic class groups.
//!
//! The crate computes, for odd primes `p`, the full dossier of invariants that
//! control divisibility of class numbers by 8 and 16:
//!
//! - the Pell invariant `E_p`: the unique `E ∈ {-1, +2, -2}` with
//!   `x² - 2p·y² = E` solvable in integers ([`quadforms::pell_invariant`]),
//! - class numbers `h(-p)`, `h(-2p)` by two independent routes (reduced-form
//!   enumeration and the exact character-sum formula) and the narrow class
//!   number `h⁺(2p)` by indefinite cycle counting ([`quadforms`]),
//! - the prime representations `p = a² + b² = c² + 2d² = u² - 2v²` with their
//!   sign and unit normalizations ([`zsqrt2`]),
//! - the ±1 invariants `alpha_p` and `beta_p` by all available routes, plus
//!   the identity suites tying them together ([`invariants`]),
//! - spin symbols `[u+v√2] = (v/u)` over `Z[√2]`, their character twists, and
//!   the ideal-indexed sequence `b_n(χ,ψ)` with its partial sums ([`spin`]).
//!
//! Everything is integer-exact; no floating point touches an invariant path.

pub mod arith;
pub mod error;
pub mod invariants;
pub mod quadforms;
pub mod spin;
pub mod zsqrt2;

pub use error::{Error, Result};
