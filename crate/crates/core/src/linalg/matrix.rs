//! Dense matrices over an exact [`Field`].
//!
//! Elimination over ℚ is fraction-free (Bareiss): rows are scaled to
//! integers and every intermediate entry is a minor of the input, so
//! coefficient growth stays polynomial. Over 𝔽_p plain Gauss-Jordan is used.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().cloned());
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, &rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let idx = i * self.cols + j;
        self.data[idx] = &self.data[idx] + v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        self.with_data(data)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        self.with_data(data)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        self.with_data(data)
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss_echelon(self).1.len(),
            Field::Prime { .. } => self.rref().pivots.len(),
        }
    }

    pub fn rref(&self) -> Rref {
        match self.field {
            Field::Rational => rational_rref(self),
            Field::Prime { .. } => gauss_jordan(self),
        }
    }

    /// Basis of the null space, one vector per free column, read off the
    /// reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                let x = matrix.get(r, free);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * X = rhs`; `None` when some column is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, matrix.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_text).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row: Vec<&BigRational> = (0..m.cols)
                .map(|j| m.get(i, j).as_rational().expect("rational matrix"))
                .collect();
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free forward elimination. Returns the integer echelon rows and
/// the pivot columns.
fn bareiss_echelon(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn rational_rref(m: &Matrix) -> Rref {
    let (ech, pivots) = bareiss_echelon(m);
    let mut rows: Vec<Vec<BigRational>> = ech
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for (r, &p) in pivots.iter().enumerate().rev() {
        let inv = rows[r][p].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..r {
            let factor = rows[i][p].clone();
            if factor.is_zero() {
                continue;
            }
            for j in p..m.cols {
                let delta = &factor * &rows[r][j];
                rows[i][j] = &rows[i][j] - &delta;
            }
        }
    }
    let mut out = Matrix::zeros(Field::Rational, pivots.len(), m.cols);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            out.set(i, j, Scalar::Rational(x));
        }
    }
    Rref { matrix: out, pivots }
}

fn gauss_jordan(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        for j in 0..m.cols {
            a.data.swap(r * m.cols + j, pr * m.cols + j);
        }
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..m.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let v = a.get(i, j) - &(&factor * a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    let all: Vec<usize> = (0..m.cols).collect();
    Rref { matrix: a.select(&keep, &all), pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(q(), 2).rank(), 2);
        assert_eq!(Matrix::zeros(q(), 3, 4).rank(), 0);
        assert_eq!(Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(q(), 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(q(), 3, 3).kernel_basis().len(), 3);
        let k = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        let v = &k[0];
        assert_eq!(&v[0] * &q().from_i64(-1), &v[1] * &q().from_i64(2));
    }

    #[test]
    fn rank_is_characteristic_sensitive() {
        let m = Matrix::from_i64(q(), &[&[1, 1], &[1, -1]]);
        assert_eq!(m.rank(), 2);
        let f2 = Field::prime(2).unwrap();
        let m2 = Matrix::from_i64(f2, &[&[1, 1], &[1, -1]]);
        assert_eq!(m2.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_i64(q(), &[&[1, 0], &[0, 2], &[1, 1]]);
        let b = Matrix::from_i64(q(), &[&[1], &[4], &[3]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let bad = Matrix::from_i64(q(), &[&[1], &[4], &[0]]);
        assert!(a.solve(&bad).is_none());
    }

    /// Textbook elimination over ℚ with rational pivots, used as an
    /// independent oracle for the fraction-free path.
    fn naive_rank(m: &Matrix) -> usize {
        let mut rows: Vec<Vec<BigRational>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).as_rational().unwrap().clone()).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && !rows[i][c].is_zero() {
                    let f = &rows[i][c] / &rows[rank][c];
                    for j in 0..m.cols() {
                        let d = &f * &rows[rank][j];
                        rows[i][j] = &rows[i][j] - &d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..4, 1i64..4), r * c).prop_map(move |entries| {
                let data = entries
                    .into_iter()
                    .map(|(n, d)| Scalar::Rational(BigRational::new(n.into(), d.into())))
                    .collect();
                Matrix::from_data(Field::Rational, r, c, data)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn bareiss_matches_naive_elimination(m in small_matrix()) {
            prop_assert_eq!(m.rank(), naive_rank(&m));
        }

        #[test]
        fn rank_nullity_mod_p(entries in proptest::collection::vec(0i64..7, 12)) {
            let f = Field::prime(7).unwrap();
            let data = entries.into_iter().map(|v| f.from_i64(v)).collect();
            let m = Matrix::from_data(f, 3, 4, data);
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), 4);
        }
    }
}
