//! Self-similar CW-complexes, their combinatorial Laplacians, exhaustion
//! traces and L²-invariants computed on finite truncations.

pub mod builders;
pub mod complex;
pub mod error;
pub mod invariants;
pub mod operators;
pub mod spectral;
pub mod tolerances;
pub mod trace;

pub use builders::{Exhaustion, Family};
pub use complex::{CellId, CwComplex, IncidenceRecord, SubcomplexMask};
pub use error::{Error, Result};
pub use operators::{LaplacianKind, OperatorMatrix, OperatorSpec, SparseMatrix, Variant};
pub use trace::{Normalization, TraceCurve, TraceEstimate};
