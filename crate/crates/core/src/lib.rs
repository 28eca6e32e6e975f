//! h-adic knot invariants built from sl(2,C) and the Lorentz algebra.
//!
//! * [`scalar`]: exact Gaussian rationals, big complex floats, polynomials and
//!   truncated power series in h (q = e^{h/2}).
//! * [`chord`]: chord diagrams, 4T relations, connected sum, coproduct.
//! * [`weights`]: weight systems φ_t and their central characters for sl2
//!   spin-z modules and Lorentz modules (m, p).
//! * [`braid`]: braid words, closures, Markov moves, a small knot catalog.
//! * [`jones`]: U_q(sl2) R-matrix evaluation and the z-coloured Jones series.
//! * [`qlg`]: quantum Clebsch–Gordan coefficients, Λ coefficients and braid
//!   sums over the balanced quantum Lorentz representation.
//! * [`invariants`]: the Lorentz invariant X(m, p, K) and cross-checks.
//! * [`verify`]: the end-to-end acceptance suite.

pub mod braid;
pub mod chord;
pub mod error;
pub mod invariants;
pub mod jones;
mod par;
pub mod qlg;
pub mod scalar;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
