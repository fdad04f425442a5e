//! The analytic side: q-expansions, completed L-values, periods of cusp
//! forms, Petersson norms and the Eisenstein period checks.

mod demo;
mod lvalue;
mod periods;
mod qseries;
mod special;

pub use demo::{eisenstein_period_demo, fulllevel_demo, gamma06_demo, DemoCase, DemoReport, FullLevelReport, Gamma06Report};
pub use lvalue::{completed_lvalue, completed_lvalues, fricke_split_defect, CharacterData, LValue, NewformData};
pub use periods::{
    braces_parts, braces_unconjugated, haberland_full, identity_periods, numerators_divisible, period_and_omega, period_ratios,
    petersson_product, rho_identity, FormPeriods, Parity,
};
pub use qseries::{congruent_mod, divisor_sigma, eisenstein_qexp, eta_product, QSeries};
pub use special::{c_k, incomplete_gamma, zeta, zeta_at_nonpositive, zeta_prime_negative_even};
