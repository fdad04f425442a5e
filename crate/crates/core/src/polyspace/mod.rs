//! Period polynomial spaces: V_w^Γ with its slash action, the spaces W, C,
//! D and W̃, the ε-splitting, χ-components, and the pairings ⟨,⟩, ⟪,⟫, {,}.

mod ops;
mod pairing;
mod poly;
mod spaces;
mod subspace;
mod vector;

pub use ops::{group_ring_contributions, slash_contributions, Contribution, LaurentOp, LinOp, Slot};
pub use pairing::{duality_closed_form, gram_braces, invariance_defect, pair_braces, pair_braces_poly, pair_induced, tail_difference};
pub use poly::{laurent_slash_monomial, pair_vw, slash_matrix, slash_poly, LaurentImage, PolyValue};
pub use spaces::{
    build_coboundary_and_d, build_w, build_w_extended, chi_component, cminus_trivial, coboundary_of,
    cusp_constant_families, decompose_extended, diamond_flat, duality_constant, eps_ext, eps_split, eps_split_vector,
    extended_relation_residual, extended_relation_values, satisfies_extended_relations,
};
pub use subspace::{Layout, Subspace};
pub use vector::{ExtPolyVector, PolyVector};
