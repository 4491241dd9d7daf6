//! Finite Galois modules over Z/p^n: invariants, coinvariants, images in
//! coinvariants along connected-etale sequences, Serre-Tate families and
//! truncated inverse limits.

pub mod brute;
mod group;
mod module;
mod snf;

pub use group::AbGroup;
pub use module::{
    check_trivial_mod, claim1_image, coinvariants, connected_etale_image, image_in_coinvariants,
    invariants_sub, rank1_coinvariant_level, rank1_module, semisimplicity_check, serre_tate_module,
    truncated_limit_coinvariants, FiniteGaloisModule, LimitLevel, LimitReport,
};
pub use snf::Mat;
