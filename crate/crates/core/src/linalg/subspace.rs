//! Subspaces of coordinate spaces and the quotient calculus built on them.

use super::field::{Field, Scalar};
use super::matrix::Matrix;
use super::LinalgError;

/// Incremental echelon basis: reduces vectors against previously inserted
/// ones, keeping pivots in insertion order.
#[derive(Debug, Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&c * r);
                }
            }
        }
        v
    }

    /// Inserts `v` if it is independent of the current span.
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].inv().expect("nonzero pivot");
        let r: Vec<Scalar> = r.iter().map(|x| x * &inv).collect();
        self.rows.push((pivot, r));
        true
    }

    fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }
}

/// A subspace of 𝕜^ambient, stored by a basis of linearly independent vectors.
#[derive(Debug, Clone)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    echelon: Echelon,
}

impl PartialEq for Subspace {
    /// Equality of spans, not of chosen bases.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            echelon: Echelon::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let vectors: Vec<Vec<Scalar>> = (0..ambient).map(|i| unit(field, ambient, i)).collect();
        Self::span(field, ambient, vectors)
    }

    /// Span of the given vectors; the basis keeps the first maximal
    /// independent subfamily in order.
    pub fn span<I>(field: Field, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.push(v);
        }
        s
    }

    /// Adds `v` to the basis if it enlarges the span. Returns whether it did.
    pub fn push(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must equal ambient dimension");
        if self.echelon.insert(&v) {
            self.basis.push(v);
            true
        } else {
            false
        }
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(field: Field, ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::span(field, ambient, indices.into_iter().map(|i| unit(field, ambient, i)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.echelon.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.push(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        let m = Matrix::from_columns(self.field, self.ambient, &cols);
        let k = self.dim();
        let vectors = m.kernel_basis().into_iter().map(|c| combine(self.field, self.ambient, &self.basis, &c[..k]));
        Subspace::span(self.field, self.ambient, vectors)
    }

    /// Image of this subspace under `map` (rows = target dimension).
    pub fn image(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient);
        Subspace::span(self.field, map.rows(), self.basis.iter().map(|v| map.mul_vec(v)))
    }

    /// `{v ∈ self : map(v) ∈ target}`.
    pub fn preimage(&self, map: &Matrix, target: &Subspace) -> Subspace {
        assert_eq!(map.cols(), self.ambient);
        assert_eq!(map.rows(), target.ambient);
        if self.dim() == 0 {
            return self.clone();
        }
        let mut cols: Vec<Vec<Scalar>> = self.basis.iter().map(|v| map.mul_vec(v)).collect();
        cols.extend(target.basis.iter().cloned());
        let m = Matrix::from_columns(self.field, map.rows(), &cols);
        let k = self.dim();
        let vectors = m.kernel_basis().into_iter().map(|c| combine(self.field, self.ambient, &self.basis, &c[..k]));
        Subspace::span(self.field, self.ambient, vectors)
    }

    /// Vectors completing a basis of `sub` to a basis of `self`, taken
    /// greedily from `self`'s basis.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Vec<Vec<Scalar>>, LinalgError> {
        if let Some(i) = sub.basis.iter().position(|v| !self.contains(v)) {
            return Err(LinalgError::NotASubspace { index: i });
        }
        let mut acc = sub.clone();
        let mut reps = Vec::new();
        for v in &self.basis {
            if acc.push(v.clone()) {
                reps.push(v.clone());
            }
        }
        Ok(reps)
    }
}

/// `dim V/W` together with coset representatives completing a basis of W to V.
pub fn quotient_dim(v: &Subspace, w: &Subspace) -> Result<(usize, Vec<Vec<Scalar>>), LinalgError> {
    let reps = v.complement_of(w)?;
    Ok((reps.len(), reps))
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

fn combine(field: Field, ambient: usize, basis: &[Vec<Scalar>], coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); ambient];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    out
}

/// Coordinates in a quotient `N / D` with respect to fixed representatives.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    field: Field,
    denominator_dim: usize,
    representatives: Vec<Vec<Scalar>>,
    frame: Matrix,
}

impl QuotientBasis {
    pub fn new(denominator: &Subspace, representatives: Vec<Vec<Scalar>>) -> Self {
        let mut cols = denominator.basis().to_vec();
        cols.extend(representatives.iter().cloned());
        QuotientBasis {
            field: denominator.field(),
            denominator_dim: denominator.dim(),
            frame: Matrix::from_columns(denominator.field(), denominator.ambient(), &cols),
            representatives,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.representatives
    }

    /// Coefficients of the class of `v` on the representatives, or `None`
    /// if `v` is outside the numerator.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.coordinates_many(&[v.to_vec()])
            .map(|m| m.column(0))
    }

    /// Coordinates of several vectors at once; column j of the result is the
    /// class of `vectors[j]`.
    pub fn coordinates_many(&self, vectors: &[Vec<Scalar>]) -> Option<Matrix> {
        if vectors.is_empty() {
            return Some(Matrix::zeros(self.field, self.dim(), 0));
        }
        let rhs = Matrix::from_columns(self.field, self.frame.rows(), vectors);
        let x = self.frame.solve(&rhs)?;
        let rows: Vec<usize> = (self.denominator_dim..self.frame.cols()).collect();
        let cols: Vec<usize> = (0..vectors.len()).collect();
        Some(x.select(&rows, &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        let full = Subspace::full(q(), 2);
        assert_eq!(quotient_dim(&full, &full).unwrap().0, 0);
        assert_eq!(quotient_dim(&full, &Subspace::zero(q(), 2)).unwrap().0, 2);

        let big = Subspace::span(q(), 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let small = Subspace::span(q(), 3, vec![v(&[1, 1, 0])]);
        let (d, reps) = quotient_dim(&big, &small).unwrap();
        assert_eq!(d, 1);
        assert_eq!(reps, vec![v(&[1, 0, 0])]);
    }

    #[test]
    fn not_a_subspace() {
        let big = Subspace::span(q(), 3, vec![v(&[1, 0, 0])]);
        let other = Subspace::span(q(), 3, vec![v(&[0, 0, 1])]);
        assert!(matches!(
            quotient_dim(&big, &other),
            Err(LinalgError::NotASubspace { index: 0 })
        ));
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Subspace::span(q(), 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(q(), 3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 5, 0])));

        // projection onto the first coordinate
        let p = Matrix::from_i64(q(), &[&[1, 0, 0]]);
        let target = Subspace::zero(q(), 1);
        let pre = Subspace::full(q(), 3).preimage(&p, &target);
        assert_eq!(pre, Subspace::coordinate(q(), 3, [1, 2]));
    }

    #[test]
    fn quotient_coordinates() {
        let denom = Subspace::span(q(), 2, vec![v(&[1, 1])]);
        let qb = QuotientBasis::new(&denom, vec![v(&[1, 0])]);
        assert_eq!(qb.coordinates(&v(&[3, 1])).unwrap(), v(&[2]));
    }
}
