//! Finitely presented groups: reduced words, presentations and morphisms,
//! Tietze simplification, abelianization, Nielsen reduction, finite
//! homomorphism counts and direct systems.

pub mod abelian;
pub mod homs;
pub mod nielsen;
pub mod presentation;
pub mod system;
pub mod tietze;
pub mod word;

pub use abelian::{abelian_image_rank, abelianize, smith_diagonal, AbelianDescriptor};
pub use homs::{count_homs, FiniteTarget};
pub use nielsen::{is_free_automorphism, nielsen_reduce, NielsenResult, SubgroupGraph};
pub use presentation::{GroupMorphism, GroupPresentation, MorphismRepr, Validity};
pub use system::{
    colimit_rank1, stable_image_rank, DirectSystem, ImageRank, ImageRankMethod, Multiplicity,
    SupernaturalDescriptor,
};
pub use tietze::{tietze_simplify, tietze_simplify_tracked, Simplification, DEFAULT_BUDGET};
pub use word::{free_reduce, GroupWord, Syllable};
