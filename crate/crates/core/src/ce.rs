//! The Chevalley-Eilenberg-de Rham complex `M ⊗_A Λ•_A L*` and total
//! complexes of bounded complexes of representations.
//!
//! A `p`-cochain is stored by its values on increasing `p`-tuples of the
//! A-basis of `L`: coordinate `tuple_index * dim M + i`.

use itertools::Itertools;
use thiserror::Error;

use crate::algebroid::{LieRinehart, Representation};
use crate::linalg::{CochainComplex, LinalgError, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CeError {
    #[error("d² ≠ 0 in degree {degree}; the input is not a valid representation")]
    ConstructionInconsistent { degree: usize },
    #[error("differential {index} of the complex of representations is not L-equivariant")]
    NotEquivariant { index: usize },
    #[error("differential {index} of the complex of representations is not A-linear")]
    NotALinear { index: usize },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Increasing `p`-tuples of `0..n` in lexicographic order.
pub fn tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(p).collect()
}

pub fn tuple_index(tuples: &[Vec<usize>], t: &[usize]) -> usize {
    tuples
        .binary_search_by(|x| x.as_slice().cmp(t))
        .expect("tuple present in the enumeration")
}

pub(crate) fn add_block(mat: &mut Matrix, row: usize, col: usize, block: &Matrix, sign: bool) {
    for x in 0..block.rows() {
        for y in 0..block.cols() {
            let v = block.get(x, y);
            if v.is_zero() {
                continue;
            }
            if sign {
                mat.add_to(row + x, col + y, v);
            } else {
                mat.add_to(row + x, col + y, &-v);
            }
        }
    }
}

/// `d_ρ: C^p → C^{p+1}`,
/// `(dξ)(s_J) = Σ_k (−1)^k ρ(s_{J_k}) ξ(s_{J∖k}) + Σ_{k<l} (−1)^{k+l} ξ([s_{J_k},s_{J_l}], s_{J∖{k,l}})`.
pub fn ce_differential(l: &LieRinehart, r: &Representation, p: usize) -> Matrix {
    let n = l.rank();
    let dm = r.dim();
    let alg = l.algebra();
    let src = tuples(n, p);
    let dst = tuples(n, p + 1);
    let mut mat = Matrix::zeros(l.field(), dst.len() * dm, src.len() * dm);
    for (ji, j) in dst.iter().enumerate() {
        for k in 0..j.len() {
            let rest: Vec<usize> = j.iter().enumerate().filter(|&(x, _)| x != k).map(|(_, &v)| v).collect();
            let ii = tuple_index(&src, &rest);
            add_block(&mut mat, ji * dm, ii * dm, &r.rho()[j[k]], k % 2 == 0);
        }
        for k in 0..j.len() {
            for m in k + 1..j.len() {
                let rest: Vec<usize> = j
                    .iter()
                    .enumerate()
                    .filter(|&(x, _)| x != k && x != m)
                    .map(|(_, &v)| v)
                    .collect();
                let br = &l.brackets()[j[k]][j[m]];
                for c in 0..n {
                    if rest.contains(&c) {
                        continue;
                    }
                    let coef = l.component(br, c);
                    if coef.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let below = rest.iter().filter(|&&x| x < c).count();
                    let mut slot = rest.clone();
                    slot.insert(below, c);
                    let ii = tuple_index(&src, &slot);
                    let sign = (k + m + below) % 2 == 0;
                    add_block(&mut mat, ji * dm, ii * dm, &r.module().act(alg, coef), sign);
                }
            }
        }
    }
    mat
}

fn not_a_complex(e: LinalgError) -> CeError {
    match e {
        LinalgError::NotAComplex { degree } => CeError::ConstructionInconsistent { degree },
        e => CeError::Linalg(e),
    }
}

/// The CE complex in degrees `0..=n`.
pub fn ce_complex(l: &LieRinehart, r: &Representation) -> Result<CochainComplex, CeError> {
    let n = l.rank();
    let dims: Vec<usize> = (0..=n).map(|p| r.dim() * tuples(n, p).len()).collect();
    let ds = (0..n).map(|p| ce_differential(l, r, p)).collect();
    CochainComplex::new(l.field(), dims, ds).map_err(not_a_complex)
}

/// Dimensions of `H^p(L; M)` for `p = 0..=n`.
pub fn ce_cohomology(l: &LieRinehart, r: &Representation) -> Result<Vec<usize>, CeError> {
    Ok(ce_complex(l, r)?.betti()?)
}

/// `M^0 → M^1 → …` with A-linear, L-equivariant differentials.
#[derive(Debug, Clone)]
pub struct RepComplex {
    terms: Vec<Representation>,
    maps: Vec<Matrix>,
}

impl RepComplex {
    pub fn new(l: &LieRinehart, terms: Vec<Representation>, maps: Vec<Matrix>) -> Result<Self, CeError> {
        if terms.is_empty() || maps.len() + 1 != terms.len() {
            return Err(CeError::Shape(format!(
                "{} terms need {} maps, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                maps.len()
            )));
        }
        let alg = l.algebra();
        for (i, d) in maps.iter().enumerate() {
            let (a, b) = (&terms[i], &terms[i + 1]);
            if d.rows() != b.dim() || d.cols() != a.dim() {
                return Err(CeError::Shape(format!(
                    "map {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    b.dim(),
                    a.dim()
                )));
            }
            for e in 0..alg.dim() {
                let (x, y) = (&a.module().action_matrices()[e], &b.module().action_matrices()[e]);
                if d.mul(x) != y.mul(d) {
                    return Err(CeError::NotALinear { index: i });
                }
            }
            for s in 0..l.rank() {
                if d.mul(&a.rho()[s]) != b.rho()[s].mul(d) {
                    return Err(CeError::NotEquivariant { index: i });
                }
            }
        }
        for i in 0..maps.len().saturating_sub(1) {
            if !maps[i + 1].mul(&maps[i]).is_zero() {
                return Err(not_a_complex(LinalgError::NotAComplex { degree: i }));
            }
        }
        Ok(RepComplex { terms, maps })
    }

    pub fn single(r: Representation) -> Self {
        RepComplex { terms: vec![r], maps: Vec::new() }
    }

    pub fn terms(&self) -> &[Representation] {
        &self.terms
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }
}

/// `T^k = ⊕_{a+b=k} C^b(L; M^a)` with `d = d_h + (−1)^a d_ρ`.
pub fn total_complex(l: &LieRinehart, c: &RepComplex) -> Result<CochainComplex, CeError> {
    let n = l.rank();
    let f = l.field();
    let top_a = c.terms.len() - 1;
    let width: Vec<usize> = (0..=n).map(|b| tuples(n, b).len()).collect();
    let block_dim = |a: usize, b: usize| c.terms[a].dim() * width[b];
    let top = top_a + n;
    // offsets of the (a, b) blocks inside T^k
    let offset = |k: usize, a: usize| -> usize { (0..a).filter(|&x| k >= x && k - x <= n).map(|x| block_dim(x, k - x)).sum() };
    let dims: Vec<usize> = (0..=top)
        .map(|k| (0..=top_a).filter(|&a| k >= a && k - a <= n).map(|a| block_dim(a, k - a)).sum())
        .collect();
    let ce: Vec<Vec<Matrix>> = c.terms.iter().map(|r| (0..n).map(|p| ce_differential(l, r, p)).collect()).collect();
    let mut ds = Vec::new();
    for k in 0..top {
        let mut d = Matrix::zeros(f, dims[k + 1], dims[k]);
        for a in 0..=top_a {
            if k < a || k - a > n {
                continue;
            }
            let b = k - a;
            let col = offset(k, a);
            if b < n {
                let row = offset(k + 1, a);
                add_block(&mut d, row, col, &ce[a][b], a % 2 == 0);
            }
            if a < top_a {
                let row = offset(k + 1, a + 1);
                let phi = &c.maps[a];
                let (da, db) = (c.terms[a].dim(), c.terms[a + 1].dim());
                for t in 0..width[b] {
                    add_block(&mut d, row + t * db, col + t * da, phi, true);
                }
            }
        }
        ds.push(d);
    }
    CochainComplex::new(f, dims, ds).map_err(not_a_complex)
}
