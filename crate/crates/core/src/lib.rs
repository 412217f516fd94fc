//! Exact Clebsch-Gordan calculus for SL3(C).
//!
//! Irreducible representations `V(a,b)` are realized as the kernel of the
//! contraction `Δ` on `S^a C³ ⊗ D^b`, where `D = (C³)^∨`. Equivariant maps
//! `V(a,b) ⊗ V(c,d) → V(e,f)` are built from a handful of polarization
//! operators and one projection, and evaluated exactly over ℚ or 𝔽_p.

pub mod cgmaps;
pub mod cgops;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod linalg;
pub mod lr3;
pub mod ratverify;
pub mod tensorpoly;

pub use coeff::{Coeff, Fp, PrimeField, Rational};
pub use error::Error;
pub use lr3::Weight;
pub use tensorpoly::{MultiDegree, TensorPoly};
