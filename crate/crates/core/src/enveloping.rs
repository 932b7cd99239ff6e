//! The universal enveloping algebra `U(L)` in PBW normal form, truncated at
//! a degree cutoff, and the Rinehart resolution `U(L) ⊗_A Λ•L → A`.
//!
//! Normal form: `Σ h_w s^w` with `h_w ∈ A` on the left and `w` a
//! nondecreasing word in the generators of `L`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::algebroid::{sort_with_sign, LieRinehart, Representation};
use crate::ce::{ce_differential, tuple_index, tuples};
use crate::linalg::{CochainComplex, Field, LinalgError, Matrix, Scalar, Subspace};
use crate::violation::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopingError {
    #[error("PBW cutoff must be at least 1, got {0}")]
    CutoffTooSmall(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An element of `U(L)`: word ↦ A-coefficient.
pub type Element = BTreeMap<Vec<usize>, Vec<Scalar>>;

fn add_term(e: &mut Element, word: Vec<usize>, coef: &[Scalar]) {
    if coef.iter().all(Scalar::is_zero) {
        return;
    }
    match e.get_mut(&word) {
        Some(c) => {
            for (x, y) in c.iter_mut().zip(coef) {
                *x = &*x + y;
            }
            if c.iter().all(Scalar::is_zero) {
                e.remove(&word);
            }
        }
        None => {
            e.insert(word, coef.to_vec());
        }
    }
}

fn add_elem(acc: &mut Element, other: &Element) {
    for (w, c) in other {
        add_term(acc, w.clone(), c);
    }
}

fn negate(e: &Element) -> Element {
    e.iter().map(|(w, c)| (w.clone(), c.iter().map(|x| -x).collect())).collect()
}

/// Highest word length occurring in `e`.
pub fn degree(e: &Element) -> usize {
    e.keys().map(Vec::len).max().unwrap_or(0)
}

/// `U(L)` with PBW basis `e_a s^w`, `|w| ≤ cutoff`.
pub struct TruncatedEnveloping {
    l: LieRinehart,
    cutoff: usize,
    basis: Vec<(Vec<usize>, usize)>,
    index: BTreeMap<(Vec<usize>, usize), usize>,
    memo: RefCell<HashMap<(usize, Vec<usize>), Element>>,
}

impl TruncatedEnveloping {
    pub fn new(l: &LieRinehart, cutoff: usize) -> Result<Self, EnvelopingError> {
        if cutoff < 1 {
            return Err(EnvelopingError::CutoffTooSmall(cutoff));
        }
        let m = l.algebra().dim();
        let mut basis = Vec::new();
        for deg in 0..=cutoff {
            for w in (0..l.rank()).combinations_with_replacement(deg) {
                for a in 0..m {
                    basis.push((w.clone(), a));
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(TruncatedEnveloping {
            l: l.clone(),
            cutoff,
            basis,
            index,
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn algebroid(&self) -> &LieRinehart {
        &self.l
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `m · C(n+d, d)`.
    pub fn expected_dim(&self) -> usize {
        let (n, d) = (self.l.rank(), self.cutoff);
        let mut c: usize = 1;
        for k in 1..=d {
            c = c * (n + k) / k;
        }
        self.l.algebra().dim() * c
    }

    pub fn basis(&self) -> &[(Vec<usize>, usize)] {
        &self.basis
    }

    fn field(&self) -> Field {
        self.l.field()
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let (w, a) = &self.basis[i];
        let mut e = Element::new();
        add_term(&mut e, w.clone(), &self.l.algebra().basis_element(*a));
        e
    }

    pub fn one(&self) -> Element {
        self.scalar(self.l.algebra().unit())
    }

    pub fn scalar(&self, f: &[Scalar]) -> Element {
        let mut e = Element::new();
        add_term(&mut e, Vec::new(), f);
        e
    }

    pub fn generator(&self, j: usize) -> Element {
        let mut e = Element::new();
        add_term(&mut e, vec![j], self.l.algebra().unit());
        e
    }

    /// `[s_i, s_j]` as an element of degree ≤ 1.
    pub fn bracket_element(&self, i: usize, j: usize) -> Element {
        let br = &self.l.brackets()[i][j];
        let mut e = Element::new();
        for c in 0..self.l.rank() {
            add_term(&mut e, vec![c], self.l.component(br, c));
        }
        e
    }

    /// `h · x` for `h ∈ A`.
    pub fn scalar_mul(&self, h: &[Scalar], x: &Element) -> Element {
        let alg = self.l.algebra();
        let mut out = Element::new();
        for (w, c) in x {
            add_term(&mut out, w.clone(), &alg.product(h, c));
        }
        out
    }

    /// `s_j · s^y` in normal form.
    fn word_mul(&self, j: usize, y: &[usize]) -> Element {
        if y.first().is_none_or(|&y0| j <= y0) {
            let mut w = Vec::with_capacity(y.len() + 1);
            w.push(j);
            w.extend_from_slice(y);
            let mut e = Element::new();
            add_term(&mut e, w, self.l.algebra().unit());
            return e;
        }
        let key = (j, y.to_vec());
        if let Some(e) = self.memo.borrow().get(&key) {
            return e.clone();
        }
        // s_j s_{y0} s^rest = s_{y0} (s_j s^rest) + Σ_c b^c s_c s^rest
        let (y0, rest) = (y[0], &y[1..]);
        let mut out = self.left_mul_gen(y0, &self.word_mul(j, rest));
        let br = &self.l.brackets()[j][y0];
        for c in 0..self.l.rank() {
            let b = self.l.component(br, c);
            if b.iter().all(Scalar::is_zero) {
                continue;
            }
            add_elem(&mut out, &self.scalar_mul(b, &self.word_mul(c, rest)));
        }
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `s_j · x`, using `s_j h = h s_j + a(s_j)(h)`.
    pub fn left_mul_gen(&self, j: usize, x: &Element) -> Element {
        let mut out = Element::new();
        let anchor = &self.l.anchors()[j];
        for (w, h) in x {
            add_elem(&mut out, &self.scalar_mul(h, &self.word_mul(j, w)));
            add_term(&mut out, w.clone(), &anchor.mul_vec(h));
        }
        out
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::new();
        for (w, h) in x {
            let mut acc = y.clone();
            for &j in w.iter().rev() {
                acc = self.left_mul_gen(j, &acc);
            }
            add_elem(&mut out, &self.scalar_mul(h, &acc));
        }
        out
    }

    /// Coordinates on the PBW basis; `None` past the cutoff.
    pub fn to_vector(&self, e: &Element) -> Option<Vec<Scalar>> {
        let mut v = vec![self.field().zero(); self.dim()];
        for (w, c) in e {
            for (a, x) in c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let i = *self.index.get(&(w.clone(), a))?;
                v[i] = x.clone();
            }
        }
        Some(v)
    }

    pub fn from_vector(&self, v: &[Scalar]) -> Element {
        let m = self.l.algebra().dim();
        let mut e = Element::new();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (w, a) = &self.basis[i];
            let mut c = vec![self.field().zero(); m];
            c[*a] = x.clone();
            add_term(&mut e, w.clone(), &c);
        }
        e
    }

    /// Products of basis pairs with degree sum ≤ cutoff; pairs past the
    /// cutoff are listed as overflow.
    pub fn multiplication_table(&self) -> MultiplicationTable {
        let mut entries = BTreeMap::new();
        let mut overflow = 0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.basis[i].0.len() + self.basis[j].0.len() > self.cutoff {
                    overflow += 1;
                    continue;
                }
                let p = self.mul(&self.basis_element(i), &self.basis_element(j));
                entries.insert((i, j), self.to_vector(&p).expect("product within cutoff"));
            }
        }
        MultiplicationTable { entries, overflow }
    }

    /// `s·f − f·s = a(s)(f)` and `s_i s_j − s_j s_i = [s_i,s_j]` on bases.
    pub fn check_relations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let alg = self.l.algebra();
        for j in 0..self.l.rank() {
            let s = self.generator(j);
            for a in 0..alg.dim() {
                let f = self.scalar(&alg.basis_element(a));
                let mut lhs = self.mul(&s, &f);
                add_elem(&mut lhs, &negate(&self.mul(&f, &s)));
                let rhs = self.scalar(&self.l.anchors()[j].mul_vec(&alg.basis_element(a)));
                if lhs != rhs {
                    out.push(Violation::new("anchor relation", vec![j, a], "s·f − f·s ≠ a(s)(f)"));
                }
            }
        }
        for i in 0..self.l.rank() {
            for j in 0..self.l.rank() {
                let mut lhs = self.mul(&self.generator(i), &self.generator(j));
                add_elem(&mut lhs, &negate(&self.mul(&self.generator(j), &self.generator(i))));
                if lhs != self.bracket_element(i, j) {
                    out.push(Violation::new("bracket relation", vec![i, j], "s_i s_j − s_j s_i ≠ [s_i,s_j]"));
                }
            }
        }
        out
    }

    /// `(xy)z = x(yz)` on basis triples with degree sum ≤ cutoff.
    pub fn check_associativity(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let deg = |i: usize| self.basis[i].0.len();
        let elems: Vec<Element> = (0..self.dim()).map(|i| self.basis_element(i)).collect();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                if deg(x) + deg(y) > self.cutoff {
                    continue;
                }
                let xy = self.mul(&elems[x], &elems[y]);
                for z in 0..self.dim() {
                    if deg(x) + deg(y) + deg(z) > self.cutoff {
                        continue;
                    }
                    let left = self.mul(&xy, &elems[z]);
                    let right = self.mul(&elems[x], &self.mul(&elems[y], &elems[z]));
                    if left != right {
                        out.push(Violation::new("associativity", vec![x, y, z], "(xy)z ≠ x(yz)"));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `u` acting on a representation: `f ↦ f·`, `s ↦ ρ(s)`.
    pub fn action(&self, r: &Representation, u: &Element) -> Matrix {
        let alg = self.l.algebra();
        let k = r.dim();
        let mut out = Matrix::zeros(self.field(), k, k);
        for (w, h) in u {
            let mut m = r.module().act(alg, h);
            for &j in w {
                m = m.mul(&r.rho()[j]);
            }
            out = out.add(&m);
        }
        out
    }

    /// `ε(u) = u·1` for the action on `A` through the anchor.
    pub fn augmentation(&self, u: &Element) -> Vec<Scalar> {
        let r = Representation::on_algebra(&self.l);
        self.action(&r, u).mul_vec(self.l.algebra().unit())
    }

    /// `u ↦ u·m` is a homomorphism on basis pairs within the cutoff.
    pub fn check_action(&self, r: &Representation) -> Vec<Violation> {
        let mut out = Vec::new();
        let elems: Vec<Element> = (0..self.dim()).map(|i| self.basis_element(i)).collect();
        let acts: Vec<Matrix> = elems.iter().map(|e| self.action(r, e)).collect();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                if self.basis[x].0.len() + self.basis[y].0.len() > self.cutoff {
                    continue;
                }
                if self.action(r, &self.mul(&elems[x], &elems[y])) != acts[x].mul(&acts[y]) {
                    out.push(Violation::new("module action", vec![x, y], "(xy)·m ≠ x·(y·m)"));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct MultiplicationTable {
    pub entries: BTreeMap<(usize, usize), Vec<Scalar>>,
    pub overflow: usize,
}

/// `C_i = U ⊗_A Λ^i L` with basis `(PBW index, increasing i-tuple)`,
/// truncated to total degree `|w| + i ≤ cutoff`.
pub struct RinehartComplex<'a> {
    u: &'a TruncatedEnveloping,
    /// `chains[i]` lists the basis of `C_i`.
    chains: Vec<Vec<(usize, Vec<usize>)>>,
    /// `boundaries[i]: C_{i+1} → C_i`.
    boundaries: Vec<Matrix>,
    epsilon: Matrix,
}

/// `∂(u ⊗ s_J)` as a list of `(U-element, tuple)` terms.
pub fn boundary(u: &TruncatedEnveloping, x: &Element, j: &[usize]) -> Vec<(Element, Vec<usize>)> {
    let l = u.algebroid();
    let mut out = Vec::new();
    for k in 0..j.len() {
        let rest: Vec<usize> = j.iter().enumerate().filter(|&(p, _)| p != k).map(|(_, &v)| v).collect();
        let mut term = u.mul(x, &u.generator(j[k]));
        if k % 2 == 1 {
            term = negate(&term);
        }
        out.push((term, rest));
    }
    for k in 0..j.len() {
        for m in k + 1..j.len() {
            let rest: Vec<usize> = j
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != k && p != m)
                .map(|(_, &v)| v)
                .collect();
            let br = &l.brackets()[j[k]][j[m]];
            for c in 0..l.rank() {
                let b = l.component(br, c);
                if b.iter().all(Scalar::is_zero) {
                    continue;
                }
                let mut args = vec![c];
                args.extend_from_slice(&rest);
                let Some((even, sorted)) = sort_with_sign(&args) else {
                    continue;
                };
                let mut term = u.mul(x, &u.scalar(b));
                if even != ((k + m) % 2 == 0) {
                    term = negate(&term);
                }
                out.push((term, sorted));
            }
        }
    }
    out
}

impl<'a> RinehartComplex<'a> {
    pub fn new(u: &'a TruncatedEnveloping) -> Self {
        let n = u.algebroid().rank();
        let d = u.cutoff();
        let f = u.field();
        let top = n.min(d);
        let chains: Vec<Vec<(usize, Vec<usize>)>> = (0..=top)
            .map(|i| {
                let ts = tuples(n, i);
                (0..u.dim())
                    .filter(|&b| u.basis[b].0.len() + i <= d)
                    .flat_map(|b| ts.iter().map(move |t| (b, t.clone())))
                    .collect()
            })
            .collect();
        let index: Vec<BTreeMap<(usize, Vec<usize>), usize>> = chains
            .iter()
            .map(|c| c.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let mut boundaries = Vec::new();
        for i in 1..=top {
            let mut mat = Matrix::zeros(f, chains[i - 1].len(), chains[i].len());
            for (col, (b, j)) in chains[i].iter().enumerate() {
                for (elem, t) in boundary(u, &u.basis_element(*b), j) {
                    let v = u.to_vector(&elem).expect("boundary stays within the cutoff");
                    for (row_b, x) in v.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let row = index[i - 1][&(row_b, t.clone())];
                        mat.add_to(row, col, x);
                    }
                }
            }
            boundaries.push(mat);
        }
        let m = u.algebroid().algebra().dim();
        let eps_cols: Vec<Vec<Scalar>> = chains[0].iter().map(|(b, _)| u.augmentation(&u.basis_element(*b))).collect();
        let epsilon = Matrix::from_columns(f, m, &eps_cols);
        RinehartComplex { u, chains, boundaries, epsilon }
    }

    pub fn chain_dims(&self) -> Vec<usize> {
        self.chains.iter().map(Vec::len).collect()
    }

    pub fn boundaries(&self) -> &[Matrix] {
        &self.boundaries
    }

    pub fn epsilon(&self) -> &Matrix {
        &self.epsilon
    }

    fn level_indices(&self, i: usize, t: usize) -> Vec<usize> {
        self.chains[i]
            .iter()
            .enumerate()
            .filter(|(_, (b, _))| self.u.basis[*b].0.len() + i <= t)
            .map(|(k, _)| k)
            .collect()
    }

    /// Homology of the augmented complex `F_tC_t → … → F_tC_0 → A → 0`
    /// at every level `t ≤ cutoff`.
    pub fn exactness(&self) -> ExactnessReport {
        let m = self.epsilon.rows();
        let mut levels = Vec::new();
        let mut failure = None;
        let mut filtration_preserved = true;
        for t in 0..=self.u.cutoff() {
            let top = self.chains.len().min(t + 1);
            let idx: Vec<Vec<usize>> = (0..top).map(|i| self.level_indices(i, t)).collect();
            // ∂_i restricted to level t, with a check that nothing leaves it.
            let maps: Vec<Matrix> = (1..top)
                .map(|i| {
                    let outside: Vec<usize> =
                        (0..self.chains[i - 1].len()).filter(|r| !idx[i - 1].contains(r)).collect();
                    if !self.boundaries[i - 1].select(&outside, &idx[i]).is_zero() {
                        filtration_preserved = false;
                    }
                    self.boundaries[i - 1].select(&idx[i - 1], &idx[i])
                })
                .collect();
            let eps = self.epsilon.select(&(0..m).collect::<Vec<_>>(), &idx[0]);
            let mut homology = Vec::new();
            for i in 0..top {
                let dim = idx[i].len();
                let out_rank = if i == 0 { eps.rank() } else { maps[i - 1].rank() };
                let in_rank = if i + 1 < top { maps[i].rank() } else { 0 };
                homology.push(dim - out_rank - in_rank);
            }
            let coker = m - eps.rank();
            if failure.is_none() {
                if let Some(i) = homology.iter().position(|&h| h != 0) {
                    failure = Some((t, i));
                }
            }
            levels.push(LevelHomology { level: t, homology, augmentation_cokernel: coker });
        }
        let square_zero = self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero());
        let augmented = self.boundaries.first().is_none_or(|d| self.epsilon.mul(d).is_zero());
        ExactnessReport {
            levels,
            failure,
            square_zero,
            augmented,
            filtration_preserved,
        }
    }

    /// `∂(v·x) = v·∂(x)` for `v` a generator or basis element of `A`,
    /// whenever `v·x` stays within the cutoff.
    pub fn check_u_linearity(&self) -> Vec<Violation> {
        let u = self.u;
        let alg = u.algebroid().algebra();
        let mut multipliers: Vec<(usize, Element)> = (0..alg.dim()).map(|a| (0, u.scalar(&alg.basis_element(a)))).collect();
        multipliers.extend((0..u.algebroid().rank()).map(|j| (1, u.generator(j))));
        let mut out = Vec::new();
        for i in 1..self.chains.len() {
            for (col, (b, j)) in self.chains[i].iter().enumerate() {
                let x = u.basis_element(*b);
                for (k, (dv, v)) in multipliers.iter().enumerate() {
                    if u.basis[*b].0.len() + dv + i > u.cutoff() {
                        continue;
                    }
                    let lhs = collect_terms(boundary(u, &u.mul(v, &x), j));
                    let rhs = collect_terms(
                        boundary(u, &x, j).into_iter().map(|(e, t)| (u.mul(v, &e), t)).collect(),
                    );
                    if lhs != rhs {
                        out.push(Violation::new("U-linearity", vec![i, col, k], "∂(v·x) ≠ v·∂(x)"));
                    }
                }
            }
        }
        out
    }
}

fn collect_terms(terms: Vec<(Element, Vec<usize>)>) -> BTreeMap<Vec<usize>, Element> {
    let mut out: BTreeMap<Vec<usize>, Element> = BTreeMap::new();
    for (e, t) in terms {
        add_elem(out.entry(t).or_default(), &e);
    }
    out.retain(|_, e| !e.is_empty());
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelHomology {
    pub level: usize,
    /// Homology of the augmented complex at `C_0, C_1, …`.
    pub homology: Vec<usize>,
    pub augmentation_cokernel: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactnessReport {
    pub levels: Vec<LevelHomology>,
    /// First `(level, degree)` with nonzero homology.
    pub failure: Option<(usize, usize)>,
    pub square_zero: bool,
    pub augmented: bool,
    pub filtration_preserved: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.failure.is_none()
            && self.square_zero
            && self.augmented
            && self.filtration_preserved
            && self.levels.iter().all(|l| l.augmentation_cokernel == 0)
    }
}

/// `δφ = φ∘∂` on `Hom_U(C_i, M) ≅ M ⊗ Λ^i L*`, a U-linear `φ` being
/// determined by its values on `1 ⊗ s_J`.
pub fn hom_differential(u: &TruncatedEnveloping, r: &Representation, i: usize) -> Matrix {
    let n = u.algebroid().rank();
    let dm = r.dim();
    let src = tuples(n, i);
    let dst = tuples(n, i + 1);
    let mut mat = Matrix::zeros(u.field(), dst.len() * dm, src.len() * dm);
    let one = u.one();
    for (ji, j) in dst.iter().enumerate() {
        for (elem, t) in boundary(u, &one, j) {
            let block = u.action(r, &elem);
            let ti = tuple_index(&src, &t);
            for x in 0..dm {
                for y in 0..dm {
                    let v = block.get(x, y);
                    if !v.is_zero() {
                        mat.add_to(ji * dm + x, ti * dm + y, v);
                    }
                }
            }
        }
    }
    mat
}

#[derive(Debug, Clone, Serialize)]
pub struct HomIsoCertificate {
    /// Per degree: whether the transported `∂` equals `d_ρ`, and the first
    /// differing entry otherwise.
    pub degrees: Vec<(usize, bool, Option<(usize, usize)>)>,
}

impl HomIsoCertificate {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.1)
    }
}

pub fn hom_complex_iso(u: &TruncatedEnveloping, r: &Representation) -> HomIsoCertificate {
    let l = u.algebroid();
    let degrees = (0..l.rank())
        .map(|i| {
            let h = hom_differential(u, r, i);
            let c = ce_differential(l, r, i);
            let witness = (0..h.rows())
                .flat_map(|x| (0..h.cols()).map(move |y| (x, y)))
                .find(|&(x, y)| h.get(x, y) != c.get(x, y));
            (i, witness.is_none(), witness)
        })
        .collect();
    HomIsoCertificate { degrees }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtComparison {
    pub ext: Vec<usize>,
    pub ce: Vec<usize>,
    /// Cocycles and coboundaries coincide as subspaces in every degree.
    pub same_subquotients: bool,
}

impl ExtComparison {
    pub fn agrees(&self) -> bool {
        self.ext == self.ce && self.same_subquotients
    }
}

/// `Ext^i_U(A, M)` as cohomology of the Hom complex, compared with CE.
pub fn ext_dims(u: &TruncatedEnveloping, r: &Representation) -> Result<ExtComparison, LinalgError> {
    let l = u.algebroid();
    let n = l.rank();
    let dims: Vec<usize> = (0..=n).map(|p| r.dim() * tuples(n, p).len()).collect();
    let hom = CochainComplex::new(l.field(), dims.clone(), (0..n).map(|i| hom_differential(u, r, i)).collect())?;
    let ce = CochainComplex::new(l.field(), dims, (0..n).map(|i| ce_differential(l, r, i)).collect())?;
    let same = (0..=n).all(|i| {
        let eq = |a: Subspace, b: Subspace| a == b;
        eq(hom.cocycles(i), ce.cocycles(i)) && eq(hom.coboundaries(i), ce.coboundaries(i))
    });
    Ok(ExtComparison { ext: hom.betti()?, ce: ce.betti()?, same_subquotients: same })
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

    fn fat_point() -> LieRinehart {
        let a = FiniteAlgebra::truncated_polynomial(q(), 2);
        let xd = Matrix::from_i64(q(), &[&[0, 0], &[0, 1]]);
        LieRinehart::new(a, 1, vec![xd], vec![vec![vec![s(0), s(0)]]]).unwrap()
    }

    fn sl2() -> LieRinehart {
        lie(3, &[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)])
    }

    #[test]
    fn polynomial_ring() {
        let u = TruncatedEnveloping::new(&lie(1, &[]), 3).unwrap();
        assert_eq!(u.dim(), 4);
        assert_eq!(u.expected_dim(), 4);
        let t = u.multiplication_table();
        // s · s² = s³
        assert_eq!(t.entries[&(1, 2)], u.to_vector(&u.basis_element(3)).unwrap());
        assert_eq!(t.overflow, 16 - 10);
    }

    #[test]
    fn aff1_straightening() {
        let u = TruncatedEnveloping::new(&lie(2, &[(0, 1, 0, 1)]), 2).unwrap();
        assert_eq!(u.dim(), 6);
        // e₂·e₁ = e₁e₂ − e₁
        let p = u.mul(&u.generator(1), &u.generator(0));
        let mut expected = Element::new();
        add_term(&mut expected, vec![0, 1], &[s(1)]);
        add_term(&mut expected, vec![0], &[s(-1)]);
        assert_eq!(p, expected);
        assert!(u.check_relations().is_empty());
        assert!(u.check_associativity().is_empty());
    }

    #[test]
    fn fat_point_relation() {
        let l = fat_point();
        let u = TruncatedEnveloping::new(&l, 2).unwrap();
        assert_eq!(u.dim(), 6);
        // s·x = x·s + x
        let x = u.scalar(&[s(0), s(1)]);
        let p = u.mul(&u.generator(0), &x);
        let mut expected = Element::new();
        add_term(&mut expected, vec![0], &[s(0), s(1)]);
        add_term(&mut expected, vec![], &[s(0), s(1)]);
        assert_eq!(p, expected);
        assert!(u.check_relations().is_empty());
        assert!(u.check_associativity().is_empty());
        // ε(1) = 1, ε(s) = 0, ε(x) = x
        assert_eq!(u.augmentation(&u.one()), vec![s(1), s(0)]);
        assert_eq!(u.augmentation(&u.generator(0)), vec![s(0), s(0)]);
        assert_eq!(u.augmentation(&x), vec![s(0), s(1)]);
    }

    #[test]
    fn sl2_resolution() {
        let l = sl2();
        let u = TruncatedEnveloping::new(&l, 3).unwrap();
        assert_eq!(u.dim(), 20);
        assert!(u.check_relations().is_empty());
        assert!(u.check_associativity().is_empty());
        let c = RinehartComplex::new(&u);
        let rep = c.exactness();
        assert!(rep.is_exact(), "{rep:?}");
        assert!(c.check_u_linearity().is_empty());
        let adj = Representation::adjoint(&l);
        assert!(u.check_action(&adj).is_empty());
        assert!(hom_complex_iso(&u, &adj).passed());
        let ext = ext_dims(&u, &Representation::trivial(&l)).unwrap();
        assert_eq!(ext.ext, vec![1, 0, 0, 1]);
        assert!(ext.agrees());
    }

    #[test]
    fn koszul_and_fat_point() {
        let ab = lie(2, &[]);
        let u = TruncatedEnveloping::new(&ab, 3).unwrap();
        assert!(RinehartComplex::new(&u).exactness().is_exact());
        let ext = ext_dims(&u, &Representation::trivial(&ab)).unwrap();
        assert_eq!(ext.ext, vec![1, 2, 1]);

        let fp = fat_point();
        let u = TruncatedEnveloping::new(&fp, 3).unwrap();
        let c = RinehartComplex::new(&u);
        assert!(c.exactness().is_exact());
        assert!(c.check_u_linearity().is_empty());
        let r = Representation::on_algebra(&fp);
        assert!(hom_complex_iso(&u, &r).passed());
        let ext = ext_dims(&u, &r).unwrap();
        assert_eq!(ext.ext, vec![1, 1]);
        assert!(ext.agrees());
    }

    #[test]
    fn cutoff_zero_rejected() {
        assert!(matches!(
            TruncatedEnveloping::new(&sl2(), 0),
            Err(EnvelopingError::CutoffTooSmall(0))
        ));
    }
}
