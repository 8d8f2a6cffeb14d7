//! Boundary, Laplace and random-walk operators on finite complexes.
//!
//! Everything combinatorial is assembled exactly: integer matrices for
//! boundaries and Laplacians, rationals for the transition operator.
//! Floating point appears only in `Q` and in spectral routines.

mod assemble;
mod geometric;
mod graph_like;
mod mtx;
mod norm;
pub mod sparse;

pub use assemble::{
    ambient_laplacian, boundary_matrix, laplacian, rel_boundary_matrix, spec_matrix,
    walk_operators, LaplacianKind, OperatorSpec, WalkOperators,
};
pub use geometric::{verify_geometric, GeometricReport};
pub use graph_like::{is_graph_like, GraphLike};
pub use mtx::{read_matrix_market, write_matrix_market, MarketMatrix};
pub use norm::{norm_bound_check, NormBoundReport};
pub use sparse::SparseMatrix;

use num_rational::Rational64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Boundary,
    DeltaPlus,
    DeltaMinus,
    Delta,
    RelBoundary,
    RelDeltaPlus,
    RelDeltaMinus,
    RelDelta,
    Adjacency,
    Degree,
    Transition,
    DeltaC,
    Q,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Boundary => "boundary",
            Variant::DeltaPlus => "delta_plus",
            Variant::DeltaMinus => "delta_minus",
            Variant::Delta => "delta",
            Variant::RelBoundary => "rel_boundary",
            Variant::RelDeltaPlus => "rel_delta_plus",
            Variant::RelDeltaMinus => "rel_delta_minus",
            Variant::RelDelta => "rel_delta",
            Variant::Adjacency => "adjacency",
            Variant::Degree => "degree",
            Variant::Transition => "transition",
            Variant::DeltaC => "delta_c",
            Variant::Q => "q",
        }
    }

    pub fn is_laplacian(self) -> bool {
        matches!(
            self,
            Variant::DeltaPlus
                | Variant::DeltaMinus
                | Variant::Delta
                | Variant::RelDeltaPlus
                | Variant::RelDeltaMinus
                | Variant::RelDelta
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Storage {
    Integer(SparseMatrix<i64>),
    Rational(SparseMatrix<Rational64>),
    Real(SparseMatrix<f64>),
}

/// A sparse matrix tagged with the operator it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub variant: Variant,
    pub j: usize,
    pub level: Option<usize>,
    pub storage: Storage,
}

impl OperatorMatrix {
    pub fn integer(variant: Variant, j: usize, m: SparseMatrix<i64>) -> Self {
        OperatorMatrix {
            variant,
            j,
            level: None,
            storage: Storage::Integer(m),
        }
    }

    pub fn at_level(mut self, n: usize) -> Self {
        self.level = Some(n);
        self
    }

    pub fn rows(&self) -> usize {
        match &self.storage {
            Storage::Integer(m) => m.rows(),
            Storage::Rational(m) => m.rows(),
            Storage::Real(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.storage {
            Storage::Integer(m) => m.cols(),
            Storage::Rational(m) => m.cols(),
            Storage::Real(m) => m.cols(),
        }
    }

    pub fn as_integer(&self) -> Option<&SparseMatrix<i64>> {
        match &self.storage {
            Storage::Integer(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&SparseMatrix<Rational64>> {
        match &self.storage {
            Storage::Rational(m) => Some(m),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> SparseMatrix<f64> {
        match &self.storage {
            Storage::Integer(m) => m.to_f64(),
            Storage::Rational(m) => m.map(|r| *r.numer() as f64 / *r.denom() as f64),
            Storage::Real(m) => m.clone(),
        }
    }

    /// Human-readable tag such as `delta_minus[j=1]@3`.
    pub fn tag(&self) -> String {
        match self.level {
            Some(n) => format!("{}[j={}]@{}", self.variant.name(), self.j, n),
            None => format!("{}[j={}]", self.variant.name(), self.j),
        }
    }
}
