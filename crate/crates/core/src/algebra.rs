//! Finite-dimensional commutative unital algebras given by structure
//! constants, their derivations, modules over them, and the Atiyah object
//! `D(M)` of derivations of a module with scalar symbol.

use thiserror::Error;

use crate::linalg::{unit, Field, Matrix, Scalar, Subspace};
use crate::violation::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape error in {what}: expected {expected}, got {actual}")]
    Shape { what: String, expected: usize, actual: usize },
}

fn shape(what: &str, expected: usize, actual: usize) -> AlgebraError {
    AlgebraError::Shape { what: what.to_string(), expected, actual }
}

/// A commutative unital algebra `A` with basis `e_0 … e_{m−1}` and
/// `e_i · e_j = Σ_k mult[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    field: Field,
    unit: Vec<Scalar>,
    mult: Vec<Vec<Vec<Scalar>>>,
}

impl FiniteAlgebra {
    pub fn new(field: Field, unit: Vec<Scalar>, mult: Vec<Vec<Vec<Scalar>>>) -> Result<Self, AlgebraError> {
        let m = unit.len();
        if mult.len() != m {
            return Err(shape("mult", m, mult.len()));
        }
        for row in &mult {
            if row.len() != m {
                return Err(shape("mult[i]", m, row.len()));
            }
            for v in row {
                if v.len() != m {
                    return Err(shape("mult[i][j]", m, v.len()));
                }
            }
        }
        Ok(FiniteAlgebra { field, unit, mult })
    }

    /// The ground field itself.
    pub fn ground(field: Field) -> Self {
        FiniteAlgebra {
            field,
            unit: vec![field.one()],
            mult: vec![vec![vec![field.one()]]],
        }
    }

    /// `k[x]/(x^n)` with basis `1, x, …, x^{n−1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i + j < n { unit(field, n, i + j) } else { vec![field.zero(); n] })
                    .collect()
            })
            .collect();
        FiniteAlgebra { field, unit: unit(field, n, 0), mult }
    }

    /// `k^n` with orthogonal idempotents as basis.
    pub fn split(field: Field, n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { unit(field, n, i) } else { vec![field.zero(); n] })
                    .collect()
            })
            .collect();
        FiniteAlgebra {
            field,
            unit: vec![field.one(); n],
            mult,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Scalar>>] {
        &self.mult
    }

    pub fn basis_element(&self, i: usize) -> Vec<Scalar> {
        unit(self.field, self.dim(), i)
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn product(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let m = self.dim();
        let mut out = self.zero_element();
        for i in 0..m {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (o, s) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !s.is_zero() {
                        *o = &*o + &(&c * s);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ a·x`.
    pub fn multiplication_matrix(&self, a: &[Scalar]) -> Matrix {
        let m = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..m).map(|j| self.product(a, &self.basis_element(j))).collect();
        Matrix::from_columns(self.field, m, &cols)
    }

    /// Commutativity, associativity and the unit law, on all basis tuples.
    pub fn validate(&self) -> Vec<Violation> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if self.mult[i][j] != self.mult[j][i] {
                    out.push(Violation::new("commutativity", vec![i, j], "e_i·e_j ≠ e_j·e_i"));
                }
            }
        }
        for i in 0..m {
            let ei = self.basis_element(i);
            for j in 0..m {
                let ej = self.basis_element(j);
                let eij = self.product(&ei, &ej);
                for k in 0..m {
                    let ek = self.basis_element(k);
                    let left = self.product(&eij, &ek);
                    let right = self.product(&ei, &self.product(&ej, &ek));
                    if left != right {
                        out.push(Violation::new("associativity", vec![i, j, k], "(e_i·e_j)·e_k ≠ e_i·(e_j·e_k)"));
                    }
                }
            }
        }
        for i in 0..m {
            let ei = self.basis_element(i);
            if self.product(&self.unit, &ei) != ei {
                out.push(Violation::new("unit", vec![i], "1·e_i ≠ e_i"));
            }
        }
        out
    }

    /// Coefficient rows of the Leibniz system `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)`
    /// in the unknowns `D[r][c]` (row-major), placed at column `offset` of a
    /// system with `width` unknowns.
    fn leibniz_rows(&self, width: usize, offset: usize) -> Vec<Vec<Scalar>> {
        let m = self.dim();
        let f = self.field;
        let var = |r: usize, c: usize| offset + r * m + c;
        let mut rows = Vec::new();
        for i in 0..m {
            for j in i..m {
                for t in 0..m {
                    let mut row = vec![f.zero(); width];
                    // D(e_i e_j)_t = Σ_s (e_i e_j)_s D[t][s]
                    for s in 0..m {
                        let c = &self.mult[i][j][s];
                        if !c.is_zero() {
                            row[var(t, s)] = &row[var(t, s)] + c;
                        }
                    }
                    // − (D(e_i) e_j)_t = − Σ_s D[s][i] (e_s e_j)_t
                    for s in 0..m {
                        let c = &self.mult[s][j][t];
                        if !c.is_zero() {
                            row[var(s, i)] = &row[var(s, i)] - c;
                        }
                    }
                    // − (e_i D(e_j))_t = − Σ_s D[s][j] (e_i e_s)_t
                    for s in 0..m {
                        let c = &self.mult[i][s][t];
                        if !c.is_zero() {
                            row[var(s, j)] = &row[var(s, j)] - c;
                        }
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// First basis pair on which `d` fails the Leibniz rule, if any.
    pub fn leibniz_failure(&self, d: &Matrix) -> Option<(usize, usize)> {
        let m = self.dim();
        for i in 0..m {
            for j in i..m {
                let ei = self.basis_element(i);
                let ej = self.basis_element(j);
                let lhs = d.mul_vec(&self.product(&ei, &ej));
                let a = self.product(&d.mul_vec(&ei), &ej);
                let b = self.product(&ei, &d.mul_vec(&ej));
                let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_derivation(&self, d: &Matrix) -> bool {
        d.rows() == self.dim() && d.cols() == self.dim() && self.leibniz_failure(d).is_none()
    }

    /// Basis of `Der_𝕜(A)`, as matrices.
    pub fn derivation_space(&self) -> Vec<Matrix> {
        let m = self.dim();
        let width = m * m;
        let rows = self.leibniz_rows(width, 0);
        let system = Matrix::from_rows(self.field, width, &rows);
        system
            .kernel_basis()
            .into_iter()
            .map(|v| Matrix::from_data(self.field, m, m, v))
            .collect()
    }
}

/// Row-major flattening used to treat matrices as vectors.
pub fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.row_vectors().into_iter().flatten().collect()
}

/// True when the commutator of any two of `basis` lies in their span.
pub fn closed_under_commutator(field: Field, basis: &[Matrix]) -> bool {
    let Some(first) = basis.first() else {
        return true;
    };
    let n = first.rows() * first.cols();
    let span = Subspace::span(field, n, basis.iter().map(flatten));
    basis
        .iter()
        .all(|a| basis.iter().all(|b| span.contains(&flatten(&a.commutator(b)))))
}

/// An `A`-module given by the action matrices of the basis of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AModule {
    dim: usize,
    action: Vec<Matrix>,
}

impl AModule {
    pub fn new(algebra: &FiniteAlgebra, dim: usize, action: Vec<Matrix>) -> Result<Self, AlgebraError> {
        if action.len() != algebra.dim() {
            return Err(shape("module action", algebra.dim(), action.len()));
        }
        for a in &action {
            if a.rows() != dim || a.cols() != dim {
                return Err(shape("module action matrix", dim, a.rows().max(a.cols())));
            }
        }
        Ok(AModule { dim, action })
    }

    /// `A^rank` with the coordinate action.
    pub fn free(algebra: &FiniteAlgebra, rank: usize) -> Self {
        let m = algebra.dim();
        let f = algebra.field();
        let action = (0..m)
            .map(|a| {
                let block = algebra.multiplication_matrix(&algebra.basis_element(a));
                let mut big = Matrix::zeros(f, rank * m, rank * m);
                for r in 0..rank {
                    for i in 0..m {
                        for j in 0..m {
                            big.set(r * m + i, r * m + j, block.get(i, j).clone());
                        }
                    }
                }
                big
            })
            .collect();
        AModule { dim: rank * m, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.action
    }

    pub fn field(&self) -> Option<Field> {
        self.action.first().map(Matrix::field)
    }

    /// Matrix of `m ↦ f·m`.
    pub fn act(&self, algebra: &FiniteAlgebra, f: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(algebra.field(), self.dim, self.dim);
        for (c, a) in f.iter().zip(&self.action) {
            if !c.is_zero() {
                out = out.add(&a.scale(c));
            }
        }
        out
    }

    /// Unit and multiplicativity of the action on basis pairs.
    pub fn validate(&self, algebra: &FiniteAlgebra) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = algebra.dim();
        if self.act(algebra, algebra.unit()) != Matrix::identity(algebra.field(), self.dim) {
            out.push(Violation::new("module unit", vec![], "1 does not act as the identity"));
        }
        for i in 0..m {
            for j in i..m {
                let prod = algebra.product(&algebra.basis_element(i), &algebra.basis_element(j));
                if self.action[i].mul(&self.action[j]) != self.act(algebra, &prod) {
                    out.push(Violation::new("module action", vec![i, j], "ρ(e_i)ρ(e_j) ≠ ρ(e_i·e_j)"));
                }
            }
        }
        out
    }

    /// Basis of `End_A(M)`, the endomorphisms commuting with the action.
    pub fn endomorphisms(&self, algebra: &FiniteAlgebra) -> Vec<Matrix> {
        let k = self.dim;
        let f = algebra.field();
        let width = k * k;
        let mut rows = Vec::new();
        for a in &self.action {
            rows.extend(commutator_rows(f, a, width, 0));
        }
        Matrix::from_rows(f, width, &rows)
            .kernel_basis()
            .into_iter()
            .map(|v| Matrix::from_data(f, k, k, v))
            .collect()
    }
}

/// Rows of the linear conditions `(X·a − a·X)[r][c] = 0` in the unknowns
/// `X` (row-major) placed at `offset`.
fn commutator_rows(field: Field, a: &Matrix, width: usize, offset: usize) -> Vec<Vec<Scalar>> {
    let k = a.rows();
    let var = |r: usize, c: usize| offset + r * k + c;
    let mut rows = Vec::new();
    for r in 0..k {
        for c in 0..k {
            let mut row = vec![field.zero(); width];
            for y in 0..k {
                let v = a.get(y, c);
                if !v.is_zero() {
                    row[var(r, y)] = &row[var(r, y)] + v;
                }
            }
            for x in 0..k {
                let v = a.get(r, x);
                if !v.is_zero() {
                    row[var(x, c)] = &row[var(x, c)] - v;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// An operator on `M` together with its symbol, a derivation of `A`:
/// `D(x·m) = x·D(m) + D̄(x)·m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSymbolDerivation {
    pub operator: Matrix,
    pub symbol: Matrix,
}

impl ScalarSymbolDerivation {
    /// First basis element `e_a` of `A` on which the rule fails.
    pub fn failure(&self, algebra: &FiniteAlgebra, module: &AModule) -> Option<usize> {
        (0..algebra.dim()).find(|&a| {
            let act = &module.action_matrices()[a];
            let lhs = self.operator.commutator(act);
            let rhs = module.act(algebra, &self.symbol.mul_vec(&algebra.basis_element(a)));
            lhs != rhs
        })
    }
}

/// `0 → End_A(M) → D(M) → Der_𝕜(A)` computed as solution spaces.
#[derive(Debug, Clone)]
pub struct AtiyahObject {
    /// Basis of `D(M)`.
    pub elements: Vec<ScalarSymbolDerivation>,
    /// `σ(D(M))` inside `m×m` matrices (row-major).
    pub symbol_image: Subspace,
    /// `ker σ` inside `k×k` matrices.
    pub symbol_kernel: Subspace,
    /// `End_A(M)`, computed independently as a commutant.
    pub endomorphisms: Subspace,
    /// `Der_𝕜(A)`.
    pub derivations: Subspace,
}

impl AtiyahObject {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// `ker σ = End_A(M)` and `dim D(M) = dim End_A(M) + dim im σ`.
    pub fn is_exact(&self) -> bool {
        self.symbol_kernel == self.endomorphisms
            && self.dim() == self.endomorphisms.dim() + self.symbol_image.dim()
    }

    pub fn symbol_surjective(&self) -> bool {
        self.symbol_image == self.derivations
    }
}

pub fn atiyah_object(algebra: &FiniteAlgebra, module: &AModule) -> AtiyahObject {
    let f = algebra.field();
    let m = algebra.dim();
    let k = module.dim();
    let width = k * k + m * m;
    let sym = |r: usize, c: usize| k * k + r * m + c;

    // D·act(e_a) − act(e_a)·D − act(D̄ e_a) = 0
    let mut rows = Vec::new();
    for (a, act) in module.action_matrices().iter().enumerate() {
        let mut block = commutator_rows(f, act, width, 0);
        for r in 0..k {
            for c in 0..k {
                let row = &mut block[r * k + c];
                // act(D̄ e_a) = Σ_b D̄[b][a] act(e_b)
                for (b, act_b) in module.action_matrices().iter().enumerate() {
                    let v = act_b.get(r, c);
                    if !v.is_zero() {
                        row[sym(b, a)] = &row[sym(b, a)] - v;
                    }
                }
            }
        }
        rows.extend(block);
    }
    rows.extend(algebra.leibniz_rows(width, k * k));
    let solutions = Matrix::from_rows(f, width, &rows).kernel_basis();

    let elements: Vec<ScalarSymbolDerivation> = solutions
        .iter()
        .map(|v| ScalarSymbolDerivation {
            operator: Matrix::from_data(f, k, k, v[..k * k].to_vec()),
            symbol: Matrix::from_data(f, m, m, v[k * k..].to_vec()),
        })
        .collect();

    let symbol_image = Subspace::span(f, m * m, elements.iter().map(|e| flatten(&e.symbol)));
    // ker σ: combinations of the solution basis with vanishing symbol part.
    let sym_part = Matrix::from_columns(f, m * m, &solutions.iter().map(|v| v[k * k..].to_vec()).collect::<Vec<_>>());
    let symbol_kernel = Subspace::span(
        f,
        k * k,
        sym_part.kernel_basis().into_iter().map(|c| {
            let mut acc = vec![f.zero(); k * k];
            for (coef, v) in c.iter().zip(&solutions) {
                if coef.is_zero() {
                    continue;
                }
                for (o, x) in acc.iter_mut().zip(&v[..k * k]) {
                    *o = &*o + &(coef * x);
                }
            }
            acc
        }),
    );
    let endomorphisms = Subspace::span(f, k * k, module.endomorphisms(algebra).iter().map(flatten));
    let derivations = Subspace::span(f, m * m, algebra.derivation_space().iter().map(flatten));
    AtiyahObject {
        elements,
        symbol_image,
        symbol_kernel,
        endomorphisms,
        derivations,
    }
}
