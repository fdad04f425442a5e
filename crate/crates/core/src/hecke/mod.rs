//! Universal Hecke elements and double-coset actions on period polynomials.

mod action;
mod element;
mod sigma;

pub use action::{
    common_eigen_polynomial, common_eigenvector, hecke_action, hecke_action_ext, hecke_matrix, hecke_matrix_of,
    manin_coefficient, normalize, rational_trace, HeckeOperator, Normalization,
};
pub use element::{
    adjoint_vee, hecke_defect, heilbronn_vee, orbit_key, solve_universal_hecke, solve_universal_hecke_ordered, tn_infinity,
    verify_hecke_property, GroupRingElement, HeckeCheck, SolveOrder,
};
pub use sigma::{resolve_by_search, resolve_sigma_coset, SigmaKind, SigmaSpec};
