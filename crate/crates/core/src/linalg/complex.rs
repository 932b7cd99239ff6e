//! Bounded cochain complexes of finite-dimensional vector spaces.

use super::field::{Field, Scalar};
use super::matrix::Matrix;
use super::subspace::{QuotientBasis, Subspace};
use super::LinalgError;

/// `C^0 → C^1 → … → C^N`, with `differentials[i]: C^i → C^{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainComplex {
    field: Field,
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
}

/// Cohomology in one degree: cocycles, coboundaries and a choice of
/// representatives for the quotient.
#[derive(Debug, Clone)]
pub struct Cohomology {
    pub degree: usize,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub classes: QuotientBasis,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        self.classes.representatives()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_of(&self, cocycle: &[Scalar]) -> Option<Vec<Scalar>> {
        self.classes.coordinates(cocycle)
    }
}

impl CochainComplex {
    /// Validates shapes and `d_{i+1} ∘ d_i = 0`.
    pub fn new(field: Field, dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self, LinalgError> {
        if dims.is_empty() {
            return Err(LinalgError::EmptyComplex);
        }
        if differentials.len() + 1 != dims.len() {
            return Err(LinalgError::Shape(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(LinalgError::Shape(format!(
                    "differential {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 0..differentials.len().saturating_sub(1) {
            if !differentials[i + 1].mul(&differentials[i]).is_zero() {
                return Err(LinalgError::NotAComplex { degree: i });
            }
        }
        Ok(CochainComplex { field, dims, differentials })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Highest degree N.
    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    /// `d_i: C^i → C^{i+1}`; the zero map past the top degree.
    pub fn differential(&self, i: usize) -> Matrix {
        match self.differentials.get(i) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.field, self.dim(i + 1), self.dim(i)),
        }
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn cocycles(&self, i: usize) -> Subspace {
        let d = self.differential(i);
        Subspace::span(self.field, self.dim(i), d.kernel_basis())
    }

    pub fn coboundaries(&self, i: usize) -> Subspace {
        if i == 0 {
            return Subspace::zero(self.field, self.dim(0));
        }
        Subspace::full(self.field, self.dim(i - 1)).image(&self.differential(i - 1))
    }

    pub fn cohomology_at(&self, i: usize) -> Result<Cohomology, LinalgError> {
        if i > self.top_degree() {
            return Err(LinalgError::DegreeOutOfRange { degree: i, top: self.top_degree() });
        }
        let cocycles = self.cocycles(i);
        let coboundaries = self.coboundaries(i);
        let reps = cocycles.complement_of(&coboundaries)?;
        let classes = QuotientBasis::new(&coboundaries, reps);
        Ok(Cohomology { degree: i, cocycles, coboundaries, classes })
    }

    pub fn cohomology(&self) -> Result<Vec<Cohomology>, LinalgError> {
        (0..=self.top_degree()).map(|i| self.cohomology_at(i)).collect()
    }

    pub fn betti(&self) -> Result<Vec<usize>, LinalgError> {
        Ok(self.cohomology()?.iter().map(Cohomology::dim).collect())
    }

    /// Σ(−1)^i dim C^i.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}
