//! Exact linear algebra: fields, matrices, subspaces, cochain complexes and
//! the spectral sequence of a filtered complex.

mod complex;
mod field;
mod matrix;
mod spectral;
mod subspace;

pub use complex::{CochainComplex, Cohomology};
pub use field::{format_rational, parse_rational, Field, Scalar};
pub use matrix::{Matrix, Rref};
pub use spectral::{
    edge_maps, spectral_pages, FilteredComplex, FiveTermSequence, PageEntry, SpectralPage, SpectralSequence,
    FIVE_TERM_NODES,
};
pub use subspace::{quotient_dim, unit, QuotientBasis, Subspace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported range")]
    PrimeTooLarge(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("{0} has a denominator that is not invertible mod {1}")]
    NotInvertible(String, u64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("basis vector {index} of the subspace lies outside the ambient span")]
    NotASubspace { index: usize },
    #[error("degree {degree} outside the range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("a complex needs at least one degree")]
    EmptyComplex,
    #[error("d∘d ≠ 0 starting in degree {degree}")]
    NotAComplex { degree: usize },
    #[error("F^0 is not the whole space in degree {degree}")]
    FiltrationNotExhaustive { degree: usize },
    #[error("filtration is not decreasing at level {level} in degree {degree}")]
    FiltrationNotDecreasing { degree: usize, level: usize },
    #[error("d does not preserve F^{level} out of degree {degree}")]
    IncompatibleFiltration { degree: usize, level: usize },
    #[error("page E_{r} is inconsistent at ({p},{q})")]
    PageInconsistent { r: usize, p: i64, q: i64 },
    #[error("E_inf totals disagree with the cohomology in degree {degree}")]
    ConvergenceFailure { degree: usize },
    #[error("edge map needs a first-quadrant filtration")]
    NotFirstQuadrant,
    #[error("representative in degree {degree} is not a cocycle")]
    NotACocycle { degree: usize },
}
