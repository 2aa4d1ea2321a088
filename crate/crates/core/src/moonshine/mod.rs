//! The lambency pipeline: data ingestion, construction of twisted–twined
//! functions, the six-condition verifier, module decompositions and reports.

pub mod construct;
pub mod data;
pub mod function;
pub mod module;
pub mod newfn;
pub mod report;
pub mod synth;
pub mod verify;

pub use data::{build_lambency, load_lambency, Lambency, LambencyFiles};
pub use function::TwinedFunction;
