//! Period polynomials of modular forms on Γ₀(N) and Γ₁(N): the spaces
//! W, C, D and W̃, Haberland pairings, universal Hecke elements and the
//! analytic side (L-values, periods, Petersson norms).

pub mod error;
pub mod exactalg;

pub use error::{Error, Result};
pub mod cosets;
pub mod polyspace;
pub mod hecke;
pub mod analytic;
pub mod gamma02;
