//! Character tables, central extensions and projective representations.

pub mod chartable;
pub mod decompose;
pub mod extension;
pub mod spin;

pub use chartable::{char_table, CharTable, CharTableFile};
pub use decompose::{decompose, decompose_rows, GradedCharacters, ModuleDecomposition, ProjTableFile};
pub use extension::{
    cocycle_of_rep, filter_by_class, projective_table, regular_classes, CentralExtension, ExtensionFile, ProjCharTable,
};
pub use spin::projective_irrep_matrices;
