//! Frobenius, cup product and isotropic complements on the odd de Rham cohomology.

mod cache;
mod kedlaya;
mod precompute;
mod structure;

pub use cache::{cache_key, from_cache_json, load_cache, precompute_cached, save_cache, to_cache_json, CACHE_VERSION};
pub use kedlaya::{frobenius_precision_loss, frobenius_structure, FrobeniusPrimitive, MWFrobeniusData};
pub use precompute::{precompute, working_precision, PrecomputedData, WMode};
pub use structure::{
    cup_product_matrix, eta_basis_constants, eta_frobenius, is_ordinary, mixed_coordinates, symplectic_complement,
    unit_root_subspace, EtaBasis,
};
