//! Lie-Rinehart algebras free over a finite algebra, their representations,
//! invariants, and extensions `0 → K → L → Q → 0`.
//!
//! An element of `L = ⊕ A·s_i` is stored as a flat vector of length `n·m`:
//! coordinate `i*m + a` is the coefficient of `e_a·s_i`.

use thiserror::Error;

use crate::algebra::{AModule, AlgebraError, FiniteAlgebra};
use crate::ce::{ce_complex, tuple_index, tuples, CeError};
use crate::linalg::{Field, LinalgError, Matrix, QuotientBasis, Scalar, Subspace};
use crate::violation::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebroidError {
    #[error("shape error in {what}: expected {expected}, got {actual}")]
    Shape { what: String, expected: usize, actual: usize },
    #[error("bad generator indices: {0}")]
    BadIndices(String),
    #[error("the given elements are not an A-basis of L")]
    NotABasis,
    #[error("induced action of Q generator {generator} is not well defined in degree {degree}")]
    NotWellDefined { degree: usize, generator: usize },
    #[error("extension is invalid: {0}")]
    InvalidExtension(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Ce(#[from] Box<CeError>),
}

impl From<CeError> for AlgebroidError {
    fn from(e: CeError) -> Self {
        AlgebroidError::Ce(Box::new(e))
    }
}

fn shape(what: &str, expected: usize, actual: usize) -> AlgebroidError {
    AlgebroidError::Shape { what: what.to_string(), expected, actual }
}

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (o, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *o = &*o + x;
        }
    }
}

fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (o, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *o = &*o + &(c * x);
        }
    }
}

/// The full 𝕜-bilinear bracket on the `n·m` 𝕜-basis of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTensor {
    field: Field,
    dim: usize,
    table: Vec<Vec<Scalar>>,
}

impl BracketTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[b_u, b_v]` for 𝕜-basis indices.
    pub fn basis_bracket(&self, u: usize, v: usize) -> &[Scalar] {
        &self.table[u * self.dim + v]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (u, xu) in x.iter().enumerate() {
            if xu.is_zero() {
                continue;
            }
            for (v, yv) in y.iter().enumerate() {
                if yv.is_zero() {
                    continue;
                }
                add_scaled(&mut out, &(xu * yv), self.basis_bracket(u, v));
            }
        }
        out
    }

    /// Matrix of `ad x = [x, ·]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|v| {
                let mut out = vec![self.field.zero(); self.dim];
                for (u, xu) in x.iter().enumerate() {
                    add_scaled(&mut out, xu, self.basis_bracket(u, v));
                }
                out
            })
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }
}

/// A Lie-Rinehart algebra `L` free of rank `n` over `A`, with anchor
/// `a(s_i)` (a derivation matrix) and `[s_i, s_j]` on the A-basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieRinehart {
    algebra: FiniteAlgebra,
    rank: usize,
    anchor: Vec<Matrix>,
    bracket: Vec<Vec<Vec<Scalar>>>,
    tensor: BracketTensor,
}

impl LieRinehart {
    pub fn new(
        algebra: FiniteAlgebra,
        rank: usize,
        anchor: Vec<Matrix>,
        bracket: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self, AlgebroidError> {
        let m = algebra.dim();
        if anchor.len() != rank {
            return Err(shape("anchor", rank, anchor.len()));
        }
        for a in &anchor {
            if a.rows() != m || a.cols() != m {
                return Err(shape("anchor matrix", m, a.rows().max(a.cols())));
            }
        }
        if bracket.len() != rank {
            return Err(shape("bracket", rank, bracket.len()));
        }
        for row in &bracket {
            if row.len() != rank {
                return Err(shape("bracket[i]", rank, row.len()));
            }
            for v in row {
                if v.len() != rank * m {
                    return Err(shape("bracket[i][j]", rank * m, v.len()));
                }
            }
        }
        let mut l = LieRinehart {
            tensor: BracketTensor { field: algebra.field(), dim: 0, table: Vec::new() },
            algebra,
            rank,
            anchor,
            bracket,
        };
        l.tensor = l.build_tensor();
        Ok(l)
    }

    /// A Lie algebra over `𝕜` from structure constants `[s_i,s_j] = Σ c_ijk s_k`.
    pub fn lie_algebra(field: Field, constants: Vec<Vec<Vec<Scalar>>>) -> Result<Self, AlgebroidError> {
        let n = constants.len();
        let anchor = vec![Matrix::zeros(field, 1, 1); n];
        LieRinehart::new(FiniteAlgebra::ground(field), n, anchor, constants)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `dim_𝕜 L = n·m`.
    pub fn kdim(&self) -> usize {
        self.rank * self.algebra.dim()
    }

    pub fn anchors(&self) -> &[Matrix] {
        &self.anchor
    }

    pub fn brackets(&self) -> &[Vec<Vec<Scalar>>] {
        &self.bracket
    }

    pub fn tensor(&self) -> &BracketTensor {
        &self.tensor
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![self.field().zero(); self.kdim()]
    }

    /// `f·s_i` as a flat vector.
    pub fn generator(&self, i: usize, f: &[Scalar]) -> Vec<Scalar> {
        let m = self.algebra.dim();
        let mut v = self.zero();
        v[i * m..(i + 1) * m].clone_from_slice(f);
        v
    }

    /// The A-coefficient of `s_i` in `v`.
    pub fn component<'a>(&self, v: &'a [Scalar], i: usize) -> &'a [Scalar] {
        let m = self.algebra.dim();
        &v[i * m..(i + 1) * m]
    }

    /// `f·v` for `f ∈ A`.
    pub fn scalar_mul(&self, f: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rank).flat_map(|i| self.algebra.product(f, self.component(v, i))).collect()
    }

    /// Anchor of an arbitrary element: `a(Σ f_i s_i) = Σ L_{f_i} ∘ a(s_i)`.
    pub fn anchor_of(&self, v: &[Scalar]) -> Matrix {
        let m = self.algebra.dim();
        let mut out = Matrix::zeros(self.field(), m, m);
        for i in 0..self.rank {
            let f = self.component(v, i);
            if f.iter().all(Scalar::is_zero) {
                continue;
            }
            out = out.add(&self.algebra.multiplication_matrix(f).mul(&self.anchor[i]));
        }
        out
    }

    fn build_tensor(&self) -> BracketTensor {
        let m = self.algebra.dim();
        let n = self.rank;
        let dim = n * m;
        let alg = &self.algebra;
        let mut table = Vec::with_capacity(dim * dim);
        for u in 0..dim {
            let (i, a) = (u / m, u % m);
            let ea = alg.basis_element(a);
            for v in 0..dim {
                let (j, b) = (v / m, v % m);
                let eb = alg.basis_element(b);
                // [e_a s_i, e_b s_j] = e_a e_b [s_i,s_j] + e_a a(s_i)(e_b) s_j − e_b a(s_j)(e_a) s_i
                let mut out = self.scalar_mul(&alg.product(&ea, &eb), &self.bracket[i][j]);
                let t1 = alg.product(&ea, &self.anchor[i].mul_vec(&eb));
                add_into(&mut out, &self.generator(j, &t1));
                let t2: Vec<Scalar> = alg.product(&eb, &self.anchor[j].mul_vec(&ea)).iter().map(|x| -x).collect();
                add_into(&mut out, &self.generator(i, &t2));
                table.push(out);
            }
        }
        BracketTensor { field: self.field(), dim, table }
    }

    /// Antisymmetry, anchor derivations, Jacobi on all 𝕜-basis triples and
    /// `a([u,v]) = [a(u),a(v)]` on all 𝕜-basis pairs.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.rank;
        for i in 0..n {
            for j in i..n {
                let neg: Vec<Scalar> = self.bracket[j][i].iter().map(|x| -x).collect();
                if self.bracket[i][j] != neg {
                    out.push(Violation::new("antisymmetry", vec![i, j], "[s_i,s_j] ≠ −[s_j,s_i]"));
                }
            }
        }
        for (i, a) in self.anchor.iter().enumerate() {
            if let Some((x, y)) = self.algebra.leibniz_failure(a) {
                out.push(Violation::new(
                    "anchor derivation",
                    vec![i],
                    format!("a(s_{i}) fails the Leibniz rule on (e_{x}, e_{y})"),
                ));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let dim = self.kdim();
        let t = &self.tensor;
        for u in 0..dim {
            for v in u + 1..dim {
                for w in v + 1..dim {
                    let mut sum = t.bracket(&unit_vec(self.field(), dim, u), t.basis_bracket(v, w));
                    add_into(&mut sum, &t.bracket(&unit_vec(self.field(), dim, v), t.basis_bracket(w, u)));
                    add_into(&mut sum, &t.bracket(&unit_vec(self.field(), dim, w), t.basis_bracket(u, v)));
                    if sum.iter().any(|x| !x.is_zero()) {
                        out.push(Violation::new("jacobi", vec![u, v, w], "cyclic sum of brackets is nonzero"));
                    }
                }
            }
        }
        let anchors: Vec<Matrix> = (0..dim).map(|u| self.anchor_of(&unit_vec(self.field(), dim, u))).collect();
        for u in 0..dim {
            for v in u + 1..dim {
                if self.anchor_of(t.basis_bracket(u, v)) != anchors[u].commutator(&anchors[v]) {
                    out.push(Violation::new("anchor homomorphism", vec![u, v], "a([u,v]) ≠ [a(u),a(v)]"));
                }
            }
        }
        out
    }

    /// 𝕜-matrix of the A-linear map `L' → L` sending the i-th generator of
    /// `L'` to `images[i]`.
    pub fn a_linear_matrix(&self, images: &[Vec<Scalar>]) -> Matrix {
        let m = self.algebra.dim();
        let cols: Vec<Vec<Scalar>> = (0..images.len() * m)
            .map(|u| self.scalar_mul(&self.algebra.basis_element(u % m), &images[u / m]))
            .collect();
        Matrix::from_columns(self.field(), self.kdim(), &cols)
    }

    /// The same algebroid written in a new A-basis `t_i = new_basis[i]`.
    /// Returns it together with the 𝕜-matrix `T` taking new coordinates to old.
    pub fn rebase(&self, new_basis: &[Vec<Scalar>]) -> Result<(LieRinehart, Matrix), AlgebroidError> {
        if new_basis.len() != self.rank {
            return Err(AlgebroidError::NotABasis);
        }
        let t = self.a_linear_matrix(new_basis);
        if t.rank() != self.kdim() {
            return Err(AlgebroidError::NotABasis);
        }
        let anchor = new_basis.iter().map(|v| self.anchor_of(v)).collect();
        let brackets: Vec<Vec<Scalar>> = new_basis
            .iter()
            .flat_map(|x| new_basis.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.tensor.bracket(x, y))
            .collect();
        let rhs = Matrix::from_columns(self.field(), self.kdim(), &brackets);
        let coords = t.solve(&rhs).ok_or(AlgebroidError::NotABasis)?;
        let n = self.rank;
        let bracket = (0..n).map(|i| (0..n).map(|j| coords.column(i * n + j)).collect()).collect();
        let l = LieRinehart::new(self.algebra.clone(), n, anchor, bracket)?;
        Ok((l, t))
    }
}

fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    crate::linalg::unit(field, n, i)
}

/// `(M, ρ)` with `ρ(s_i)` a 𝕜-linear operator on `M`; extended to `L` by
/// `ρ(f s_i) = f·ρ(s_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    module: AModule,
    rho: Vec<Matrix>,
}

impl Representation {
    pub fn new(l: &LieRinehart, module: AModule, rho: Vec<Matrix>) -> Result<Self, AlgebroidError> {
        if rho.len() != l.rank() {
            return Err(shape("rho", l.rank(), rho.len()));
        }
        let k = module.dim();
        for r in &rho {
            if r.rows() != k || r.cols() != k {
                return Err(shape("rho matrix", k, r.rows().max(r.cols())));
            }
        }
        Ok(Representation { module, rho })
    }

    /// `A` itself with `ρ(s)(f) = a(s)(f)`.
    pub fn on_algebra(l: &LieRinehart) -> Self {
        Representation {
            module: AModule::free(l.algebra(), 1),
            rho: l.anchors().to_vec(),
        }
    }

    /// `A` with `ρ = 0`; a representation only when the anchor vanishes.
    pub fn trivial(l: &LieRinehart) -> Self {
        let m = l.algebra().dim();
        Representation {
            module: AModule::free(l.algebra(), 1),
            rho: vec![Matrix::zeros(l.field(), m, m); l.rank()],
        }
    }

    /// `L` acting on itself by `ρ(s) = [s, ·]`.
    pub fn adjoint(l: &LieRinehart) -> Self {
        let rho = (0..l.rank())
            .map(|i| l.tensor().ad(&l.generator(i, l.algebra().unit())))
            .collect();
        Representation { module: AModule::free(l.algebra(), l.rank()), rho }
    }

    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn rho(&self) -> &[Matrix] {
        &self.rho
    }

    /// `ρ(v)` for an arbitrary element of `L`.
    pub fn rho_of(&self, l: &LieRinehart, v: &[Scalar]) -> Matrix {
        let k = self.dim();
        let mut out = Matrix::zeros(l.field(), k, k);
        for i in 0..l.rank() {
            let f = l.component(v, i);
            if f.iter().all(Scalar::is_zero) {
                continue;
            }
            out = out.add(&self.module.act(l.algebra(), f).mul(&self.rho[i]));
        }
        out
    }

    /// `ρ` on every 𝕜-basis element of `L`.
    pub fn rho_basis(&self, l: &LieRinehart) -> Vec<Matrix> {
        (0..l.kdim()).map(|u| self.rho_of(l, &unit_vec(l.field(), l.kdim(), u))).collect()
    }

    /// Module axioms, the symbol condition and flatness on the 𝕜-basis.
    pub fn validate(&self, l: &LieRinehart) -> Vec<Violation> {
        let alg = l.algebra();
        let mut out = self.module.validate(alg);
        if !out.is_empty() {
            return out;
        }
        let basis = self.rho_basis(l);
        for (u, r) in basis.iter().enumerate() {
            let symbol = l.anchor_of(&unit_vec(l.field(), l.kdim(), u));
            for b in 0..alg.dim() {
                let act = &self.module.action_matrices()[b];
                let expected = self.module.act(alg, &symbol.mul_vec(&alg.basis_element(b)));
                if r.commutator(act) != expected {
                    out.push(Violation::new(
                        "symbol",
                        vec![u, b],
                        "[ρ(u), e_b] ≠ a(u)(e_b) acting on M",
                    ));
                }
            }
        }
        for u in 0..basis.len() {
            for v in u + 1..basis.len() {
                let lhs = self.rho_of(l, l.tensor().basis_bracket(u, v));
                if lhs != basis[u].commutator(&basis[v]) {
                    out.push(Violation::new("flatness", vec![u, v], "ρ([u,v]) ≠ [ρ(u),ρ(v)]"));
                }
            }
        }
        out
    }

    /// The same representation with `ρ` read off in a new A-basis of `L`.
    pub fn rebase(&self, l: &LieRinehart, new_basis: &[Vec<Scalar>]) -> Representation {
        Representation {
            module: self.module.clone(),
            rho: new_basis.iter().map(|v| self.rho_of(l, v)).collect(),
        }
    }
}

/// `M^L = {m : ρ(u)m = 0 for every u}`.
pub fn invariants(l: &LieRinehart, r: &Representation) -> Subspace {
    let k = r.dim();
    let mut stacked = Matrix::zeros(l.field(), 0, k);
    for m in r.rho_basis(l) {
        stacked = stacked.vstack(&m);
    }
    Subspace::span(l.field(), k, stacked.kernel_basis())
}

/// `0 → K → L → Q → 0` with maps given on A-bases and an A-linear splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionTriple {
    pub k: LieRinehart,
    pub l: LieRinehart,
    pub q: LieRinehart,
    /// `ι(k_r)` as elements of `L`.
    pub iota: Vec<Vec<Scalar>>,
    /// `π(s_i)` as elements of `Q`.
    pub pi: Vec<Vec<Scalar>>,
    /// `σ(q_t)` as elements of `L`.
    pub sigma: Vec<Vec<Scalar>>,
}

impl ExtensionTriple {
    /// `K` spanned by the generators `k_indices` of `L`, `Q` by the rest.
    /// Without a splitting, `σ` sends each `Q` generator to the matching
    /// complementary generator of `L`.
    pub fn from_ideal(
        l: &LieRinehart,
        k_indices: &[usize],
        splitting: Option<Vec<Vec<Scalar>>>,
    ) -> Result<Self, AlgebroidError> {
        let n = l.rank();
        let m = l.algebra().dim();
        let f = l.field();
        let mut seen = vec![false; n];
        for &i in k_indices {
            if i >= n || seen[i] {
                return Err(AlgebroidError::BadIndices(format!("index {i} repeated or out of range 0..{n}")));
            }
            seen[i] = true;
        }
        let q_indices: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
        let (nk, nq) = (k_indices.len(), q_indices.len());
        let one = l.algebra().unit().to_vec();

        let iota: Vec<Vec<Scalar>> = k_indices.iter().map(|&i| l.generator(i, &one)).collect();
        let sigma = match splitting {
            Some(s) => {
                if s.len() != nq {
                    return Err(shape("splitting", nq, s.len()));
                }
                for v in &s {
                    if v.len() != l.kdim() {
                        return Err(shape("splitting[i]", l.kdim(), v.len()));
                    }
                }
                s
            }
            None => q_indices.iter().map(|&i| l.generator(i, &one)).collect(),
        };
        let q_unit = |t: usize| {
            let mut v = vec![f.zero(); nq * m];
            v[t * m..(t + 1) * m].clone_from_slice(&one);
            v
        };
        let pi: Vec<Vec<Scalar>> = (0..n)
            .map(|i| match q_indices.iter().position(|&j| j == i) {
                Some(t) => q_unit(t),
                None => vec![f.zero(); nq * m],
            })
            .collect();

        let k_bracket = k_indices
            .iter()
            .map(|&i| {
                k_indices
                    .iter()
                    .map(|&j| k_indices.iter().flat_map(|&c| l.component(&l.brackets()[i][j], c).to_vec()).collect())
                    .collect()
            })
            .collect();
        let k_anchor = k_indices.iter().map(|&i| l.anchors()[i].clone()).collect();
        let k = LieRinehart::new(l.algebra().clone(), nk, k_anchor, k_bracket)?;

        // [q_a, q_b] = π[σ q_a, σ q_b], a(q) = a(σ q)
        let project = |v: &[Scalar]| -> Vec<Scalar> { q_indices.iter().flat_map(|&c| l.component(v, c).to_vec()).collect() };
        let q_bracket = (0..nq)
            .map(|a| (0..nq).map(|b| project(&l.tensor().bracket(&sigma[a], &sigma[b]))).collect())
            .collect();
        let q_anchor = sigma.iter().map(|v| l.anchor_of(v)).collect();
        let q = LieRinehart::new(l.algebra().clone(), nq, q_anchor, q_bracket)?;

        Ok(ExtensionTriple { k, l: l.clone(), q, iota, pi, sigma })
    }

    pub fn iota_matrix(&self) -> Matrix {
        self.l.a_linear_matrix(&self.iota)
    }

    pub fn pi_matrix(&self) -> Matrix {
        self.q.a_linear_matrix(&self.pi)
    }

    pub fn sigma_matrix(&self) -> Matrix {
        self.l.a_linear_matrix(&self.sigma)
    }

    /// The A-basis `ι(k_1..), σ(q_1..)` of `L` adapted to the extension.
    pub fn adapted_basis(&self) -> Vec<Vec<Scalar>> {
        self.iota.iter().chain(&self.sigma).cloned().collect()
    }

    /// The same extension with `σ` replaced.
    pub fn with_splitting(&self, sigma: Vec<Vec<Scalar>>) -> Self {
        ExtensionTriple { sigma, ..self.clone() }
    }

    /// Pulls an element of `im ι` back to `K`.
    pub fn pull_back(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let rhs = Matrix::from_columns(self.l.field(), self.l.kdim(), &[v.to_vec()]);
        self.iota_matrix().solve(&rhs).map(|x| x.column(0))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, part) in [("K", &self.k), ("L", &self.l), ("Q", &self.q)] {
            for mut v in part.validate() {
                v.check = format!("{name}: {}", v.check);
                out.push(v);
            }
        }
        if self.iota.len() != self.k.rank()
            || self.pi.len() != self.l.rank()
            || self.sigma.len() != self.q.rank()
            || self.iota.iter().chain(&self.sigma).any(|v| v.len() != self.l.kdim())
            || self.pi.iter().any(|v| v.len() != self.q.kdim())
        {
            out.push(Violation::new("maps shape", vec![], "ι, π or σ has the wrong shape"));
            return out;
        }
        for (r, a) in self.k.anchors().iter().enumerate() {
            if !a.is_zero() {
                out.push(Violation::new("kernel anchor", vec![r], "anchor of K is nonzero"));
            }
        }
        let f = self.l.field();
        let iota = self.iota_matrix();
        let pi = self.pi_matrix();
        let sigma = self.sigma_matrix();
        if iota.rank() != self.k.kdim() {
            out.push(Violation::new("iota injective", vec![], "ι is not injective"));
        }
        if pi.rank() != self.q.kdim() {
            out.push(Violation::new("pi surjective", vec![], "π is not surjective"));
        }
        let im_iota = Subspace::full(f, self.k.kdim()).image(&iota);
        let ker_pi = Subspace::span(f, self.l.kdim(), pi.kernel_basis());
        if im_iota != ker_pi {
            out.push(Violation::new("exactness", vec![], "im ι ≠ ker π"));
        }
        if pi.mul(&sigma) != Matrix::identity(f, self.q.kdim()) {
            out.push(Violation::new("splitting", vec![], "π∘σ ≠ id"));
        }
        let (kt, lt, qt) = (self.k.tensor(), self.l.tensor(), self.q.tensor());
        let kcols = iota.column_vectors();
        for u in 0..self.k.kdim() {
            for v in u..self.k.kdim() {
                if iota.mul_vec(kt.basis_bracket(u, v)) != lt.bracket(&kcols[u], &kcols[v]) {
                    out.push(Violation::new("iota bracket", vec![u, v], "ι[u,v] ≠ [ιu,ιv]"));
                }
            }
            if self.l.anchor_of(&kcols[u]) != self.k.anchor_of(&unit_vec(f, self.k.kdim(), u)) {
                out.push(Violation::new("iota anchor", vec![u], "a(ιu) ≠ a(u)"));
            }
        }
        let pcols = pi.column_vectors();
        for u in 0..self.l.kdim() {
            for v in u + 1..self.l.kdim() {
                if pi.mul_vec(lt.basis_bracket(u, v)) != qt.bracket(&pcols[u], &pcols[v]) {
                    out.push(Violation::new("pi bracket", vec![u, v], "π[u,v] ≠ [πu,πv]"));
                }
            }
            if self.q.anchor_of(&pcols[u]) != self.l.anchor_of(&unit_vec(f, self.l.kdim(), u)) {
                out.push(Violation::new("pi anchor", vec![u], "a(πu) ≠ a(u)"));
            }
        }
        for (r, kv) in kcols.iter().enumerate() {
            for u in 0..self.l.kdim() {
                if !im_iota.contains(&lt.bracket(&unit_vec(f, self.l.kdim(), u), kv)) {
                    out.push(Violation::new("ideal", vec![r, u], "[u, ιk] is not in im ι"));
                }
            }
        }
        out
    }
}

/// A representation of `Q` on `H^q(K; M)` induced through a splitting.
#[derive(Debug, Clone)]
pub struct InducedRepresentation {
    pub degree: usize,
    pub representation: Representation,
    /// Action of each `Q` generator on `q`-cochains of `K`, before descent.
    pub cochain_action: Vec<Matrix>,
}

/// `(q̄·c)(k_1..k_q) = ρ(σq̄)(c(k_1..k_q)) − Σ_i c(k_1,…,[σq̄,k_i],…,k_q)`,
/// descended to `H^q(K; M)`.
pub fn induced_q_rep(
    e: &ExtensionTriple,
    r: &Representation,
    q: usize,
) -> Result<InducedRepresentation, AlgebroidError> {
    let alg = e.l.algebra();
    let f = e.l.field();
    let nk = e.k.rank();
    let dm = r.dim();
    let r_k = r.rebase(&e.l, &e.iota);
    let ck = ce_complex(&e.k, &r_k)?;
    let (cocycles, coboundaries, classes) = if q > ck.top_degree() {
        let z = Subspace::zero(f, 0);
        (z.clone(), z.clone(), QuotientBasis::new(&z, Vec::new()))
    } else {
        let coh = ck.cohomology_at(q)?;
        (coh.cocycles, coh.coboundaries, coh.classes)
    };
    let tup = tuples(nk, q);
    let cdim = tup.len() * dm;

    let mut cochain_action = Vec::new();
    let mut rho = Vec::new();
    for (t, s) in e.sigma.iter().enumerate() {
        let rs = r.rho_of(&e.l, s);
        // [σq̄, k_i] pulled back to K, for each K generator.
        let pulled: Vec<Vec<Scalar>> = e
            .iota
            .iter()
            .map(|kv| e.pull_back(&e.l.tensor().bracket(s, kv)))
            .collect::<Option<_>>()
            .ok_or(AlgebroidError::NotWellDefined { degree: q, generator: t })?;
        let mut mat = Matrix::zeros(f, cdim, cdim);
        for (ji, j) in tup.iter().enumerate() {
            // ρ(σq̄) on the value at j
            for x in 0..dm {
                for y in 0..dm {
                    let v = rs.get(x, y);
                    if !v.is_zero() {
                        mat.add_to(ji * dm + x, ji * dm + y, v);
                    }
                }
            }
            for (slot, &kidx) in j.iter().enumerate() {
                let g = &pulled[kidx];
                for c in 0..nk {
                    let coef = e.k.component(g, c);
                    if coef.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let mut args = j.clone();
                    args[slot] = c;
                    let Some((sign, sorted)) = sort_with_sign(&args) else {
                        continue;
                    };
                    let col = tuple_index(&tup, &sorted);
                    let act = r.module().act(alg, coef);
                    let scale = if sign { f.one() } else { -f.one() };
                    for x in 0..dm {
                        for y in 0..dm {
                            let v = act.get(x, y);
                            if !v.is_zero() {
                                mat.add_to(ji * dm + x, col * dm + y, &-(&scale * v));
                            }
                        }
                    }
                }
            }
        }
        for z in cocycles.basis() {
            if !cocycles.contains(&mat.mul_vec(z)) {
                return Err(AlgebroidError::NotWellDefined { degree: q, generator: t });
            }
        }
        for b in coboundaries.basis() {
            if !coboundaries.contains(&mat.mul_vec(b)) {
                return Err(AlgebroidError::NotWellDefined { degree: q, generator: t });
            }
        }
        let images: Vec<Vec<Scalar>> = classes.representatives().iter().map(|v| mat.mul_vec(v)).collect();
        rho.push(classes.coordinates_many(&images).ok_or(AlgebroidError::NotWellDefined { degree: q, generator: t })?);
        cochain_action.push(mat);
    }

    // A acts on classes through the values of cochains.
    let mut action = Vec::new();
    for a in 0..alg.dim() {
        let blk = &r.module().action_matrices()[a];
        let images: Vec<Vec<Scalar>> = classes
            .representatives()
            .iter()
            .map(|v| (0..tup.len()).flat_map(|ji| blk.mul_vec(&v[ji * dm..(ji + 1) * dm])).collect())
            .collect();
        action.push(classes.coordinates_many(&images).ok_or(AlgebroidError::NotWellDefined { degree: q, generator: 0 })?);
    }
    let module = AModule::new(alg, classes.dim(), action)?;
    let representation = Representation::new(&e.q, module, rho)?;
    Ok(InducedRepresentation { degree: q, representation, cochain_action })
}

/// Sorts distinct indices, returning whether the permutation is even.
/// `None` if an index repeats.
pub fn sort_with_sign(args: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = args.to_vec();
    let mut even = true;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            even = !even;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((even, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;

    fn q() -> Field {
        Field::Rational
    }

    fn s(x: i64) -> Scalar {
        q().from_i64(x)
    }

    fn lie(n: usize, entries: &[(usize, usize, usize, i64)]) -> LieRinehart {
        let mut c = vec![vec![vec![s(0); n]; n]; n];
        for &(i, j, k, v) in entries {
            c[i][j][k] = s(v);
            c[j][i][k] = s(-v);
        }
        LieRinehart::lie_algebra(q(), c).unwrap()
    }

    fn sl2() -> LieRinehart {
        // e, f, h: [e,f]=h, [h,e]=2e, [h,f]=−2f
        lie(3, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)])
    }

    fn aff1() -> LieRinehart {
        lie(2, &[(0, 1, 0, 1)])
    }

    fn fat_point() -> LieRinehart {
        let a = FiniteAlgebra::truncated_polynomial(q(), 2);
        let xd = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]);
        LieRinehart::new(a, 1, vec![xd], vec![vec![vec![s(0), s(0)]]]).unwrap()
    }

    #[test]
    fn lie_algebra_tensor_is_structure_constants() {
        let l = sl2();
        assert_eq!(l.tensor().basis_bracket(0, 1), &[s(0), s(0), s(1)]);
        assert!(l.validate().is_empty());
    }

    #[test]
    fn leibniz_expansion_on_fat_point() {
        let l = fat_point();
        // [s, x s] = a(s)(x) s = x s
        assert_eq!(l.tensor().basis_bracket(0, 1), &[s(0), s(1)]);
        assert!(l.validate().is_empty());
    }

    #[test]
    fn corrupted_sl2_reports_witness() {
        let l = lie(3, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, 2)]);
        let v = l.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "jacobi");
        assert_eq!(v[0].witness, vec![0, 1, 2]);
    }

    #[test]
    fn representations_validate() {
        let l = sl2();
        assert!(Representation::adjoint(&l).validate(&l).is_empty());
        assert!(Representation::trivial(&l).validate(&l).is_empty());
        let fp = fat_point();
        assert!(Representation::on_algebra(&fp).validate(&fp).is_empty());
        // ρ = 0 has the wrong symbol when the anchor is nonzero
        let bad = Representation::trivial(&fp).validate(&fp);
        assert!(bad.iter().any(|v| v.check == "symbol"));
    }

    #[test]
    fn invariants_examples() {
        let l = sl2();
        assert_eq!(invariants(&l, &Representation::trivial(&l)).dim(), 1);
        assert_eq!(invariants(&l, &Representation::adjoint(&l)).dim(), 0);
        let fp = fat_point();
        let inv = invariants(&fp, &Representation::on_algebra(&fp));
        assert_eq!(inv.dim(), 1);
        assert!(inv.contains(&[s(1), s(0)]));
    }

    #[test]
    fn aff1_extension() {
        let l = aff1();
        let e = ExtensionTriple::from_ideal(&l, &[0], None).unwrap();
        assert!(e.validate().is_empty(), "{:?}", e.validate());
        let bad = ExtensionTriple::from_ideal(&l, &[1], None).unwrap();
        let v = bad.validate();
        assert!(v.iter().any(|x| x.check == "pi bracket"));
        assert!(v.iter().any(|x| x.check == "ideal"));
    }

    #[test]
    fn degenerate_extensions() {
        let l = sl2();
        assert!(ExtensionTriple::from_ideal(&l, &[], None).unwrap().validate().is_empty());
        assert!(ExtensionTriple::from_ideal(&l, &[0, 1, 2], None).unwrap().validate().is_empty());
        assert!(ExtensionTriple::from_ideal(&l, &[0, 0], None).is_err());
    }

    #[test]
    fn aff1_weight_action() {
        let l = aff1();
        let e = ExtensionTriple::from_ideal(&l, &[0], None).unwrap();
        let r = Representation::trivial(&l);
        let h1 = induced_q_rep(&e, &r, 1).unwrap();
        // H¹(K;k) = K*, and q̄ acts by +1
        assert_eq!(h1.representation.rho(), &[Matrix::from_i64(q(), &[&[1]])]);
        assert!(h1.representation.validate(&e.q).is_empty());
        let h0 = induced_q_rep(&e, &r, 0).unwrap();
        assert!(h0.representation.rho()[0].is_zero());
    }

    #[test]
    fn sigma_independence() {
        let l = aff1();
        let e = ExtensionTriple::from_ideal(&l, &[0], None).unwrap();
        let r = Representation::trivial(&l);
        let mut sigma2 = e.sigma.clone();
        sigma2[0][0] = s(3);
        let e2 = e.with_splitting(sigma2);
        assert!(e2.validate().is_empty());
        for deg in 0..2 {
            let a = induced_q_rep(&e, &r, deg).unwrap();
            let b = induced_q_rep(&e2, &r, deg).unwrap();
            assert_eq!(a.representation.rho(), b.representation.rho());
        }
    }

    #[test]
    fn rebase_roundtrip() {
        let l = sl2();
        let basis = vec![vec![s(1), s(1), s(0)], vec![s(0), s(1), s(0)], vec![s(0), s(0), s(2)]];
        let (l2, _) = l.rebase(&basis).unwrap();
        assert!(l2.validate().is_empty());
        let singular = vec![vec![s(1), s(0), s(0)]; 3];
        assert!(matches!(l.rebase(&singular), Err(AlgebroidError::NotABasis)));
    }

    #[test]
    fn sort_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((true, vec![0, 1, 2])));
        assert_eq!(sort_with_sign(&[1, 0]), Some((false, vec![0, 1])));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}
