//! The Hochschild-Serre filtration of the CE complex of an extension, its
//! spectral sequence, and independent checks of `E_1`, `E_2`, convergence
//! and the five-term sequence.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AModule;
use crate::algebroid::{induced_q_rep, sort_with_sign, AlgebroidError, ExtensionTriple, LieRinehart, Representation};
use crate::ce::{add_block, ce_cohomology, ce_complex, tuple_index, tuples, CeError};
use crate::linalg::{
    edge_maps, spectral_pages, FilteredComplex, FiveTermSequence, LinalgError, Matrix, Scalar, SpectralSequence,
    Subspace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HsError {
    #[error("d does not preserve the filtration in degree {degree} at level {level}")]
    FiltrationNotPreserved { degree: usize, level: usize },
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The CE complex in the adapted basis `ι(K), σ(Q)` with
/// `F^p` = cochains supported on tuples with at least `p` entries from `Q`.
#[derive(Debug, Clone)]
pub struct HsFiltration {
    pub filtered: FilteredComplex,
    pub adapted: LieRinehart,
    pub representation: Representation,
    pub k_rank: usize,
    pub q_rank: usize,
    /// `dim gr_p C^n` as computed from the subspaces.
    pub graded: BTreeMap<(usize, usize), usize>,
    /// `dim M · C(rank Q, p) · C(rank K, n−p)`.
    pub expected_graded: BTreeMap<(usize, usize), usize>,
}

impl HsFiltration {
    pub fn graded_matches(&self) -> bool {
        self.graded == self.expected_graded
    }
}

pub fn hs_filtration(e: &ExtensionTriple, r: &Representation) -> Result<HsFiltration, HsError> {
    let basis = e.adapted_basis();
    let (adapted, _) = e.l.rebase(&basis)?;
    let rep = r.rebase(&e.l, &basis);
    let complex = ce_complex(&adapted, &rep)?;
    let (nk, nq, n) = (e.k.rank(), e.q.rank(), adapted.rank());
    let dm = rep.dim();
    let f = adapted.field();
    let mut levels = Vec::new();
    let mut graded = BTreeMap::new();
    let mut expected_graded = BTreeMap::new();
    for deg in 0..=n {
        let ts = tuples(n, deg);
        let q_count: Vec<usize> = ts.iter().map(|t| t.iter().filter(|&&i| i >= nk).count()).collect();
        let chain: Vec<Subspace> = (0..=deg)
            .map(|p| {
                let coords = ts
                    .iter()
                    .enumerate()
                    .filter(|&(ti, _)| q_count[ti] >= p)
                    .flat_map(|(ti, _)| (0..dm).map(move |x| ti * dm + x));
                Subspace::coordinate(f, ts.len() * dm, coords)
            })
            .collect();
        for p in 0..=deg {
            let below = chain.get(p + 1).map_or(0, Subspace::dim);
            graded.insert((p, deg), chain[p].dim() - below);
            expected_graded.insert((p, deg), dm * binomial(nq, p) * binomial(nk, deg - p));
        }
        levels.push(chain);
    }
    let filtered = FilteredComplex::new(complex, levels).map_err(|err| match err {
        LinalgError::IncompatibleFiltration { degree, level } => HsError::FiltrationNotPreserved { degree, level },
        other => HsError::Linalg(other),
    })?;
    Ok(HsFiltration {
        filtered,
        adapted,
        representation: rep,
        k_rank: nk,
        q_rank: nq,
        graded,
        expected_graded,
    })
}

/// Pages of the filtration together with `dim H^n(L; M)` computed directly
/// from `L` in its original basis.
#[derive(Debug, Clone)]
pub struct HsPages {
    pub sequence: SpectralSequence,
    pub direct_cohomology: Vec<usize>,
}

impl HsPages {
    pub fn converges(&self) -> bool {
        self.sequence.converges() && self.sequence.infinity_totals() == self.direct_cohomology
    }
}

pub fn hs_pages(e: &ExtensionTriple, r: &Representation, r_max: usize) -> Result<HsPages, HsError> {
    let filt = hs_filtration(e, r)?;
    let sequence = spectral_pages(&filt.filtered, r_max.max(2))?;
    let direct_cohomology = ce_cohomology(&e.l, r)?;
    Ok(HsPages { sequence, direct_cohomology })
}

/// `dim` comparison at each `(p, q)`: `(page value, independent value)`.
#[derive(Debug, Clone, Serialize)]
pub struct PageCheck {
    pub entries: BTreeMap<(usize, usize), (usize, usize)>,
}

impl PageCheck {
    pub fn passed(&self) -> bool {
        self.entries.values().all(|(a, b)| a == b)
    }

    /// First `(p, q)` where the two sides differ.
    pub fn mismatch(&self) -> Option<(usize, usize)> {
        self.entries.iter().find(|(_, (a, b))| a != b).map(|(k, _)| *k)
    }
}

/// `K` acting on `M ⊗ Λ^p Q*`:
/// `(k·φ)(q_P) = ρ(ιk) φ(q_P) − Σ_i φ(…, π[ιk, σq_{P_i}], …)`.
pub fn k_rep_on_forms(e: &ExtensionTriple, r: &Representation, p: usize) -> Result<Representation, HsError> {
    let l = &e.l;
    let alg = l.algebra();
    let f = l.field();
    let nq = e.q.rank();
    let dm = r.dim();
    let ts = tuples(nq, p);
    let dim = ts.len() * dm;
    let pi = e.pi_matrix();
    let mut action = Vec::new();
    for blk in r.module().action_matrices() {
        let mut big = Matrix::zeros(f, dim, dim);
        for ti in 0..ts.len() {
            add_block(&mut big, ti * dm, ti * dm, blk, true);
        }
        action.push(big);
    }
    let module = AModule::new(alg, dim, action).map_err(AlgebroidError::from)?;
    let mut rho = Vec::new();
    for kv in &e.iota {
        let rk = r.rho_of(l, kv);
        let mut mat = Matrix::zeros(f, dim, dim);
        for (ti, t) in ts.iter().enumerate() {
            add_block(&mut mat, ti * dm, ti * dm, &rk, true);
            for (slot, &qi) in t.iter().enumerate() {
                let coad = pi.mul_vec(&l.tensor().bracket(kv, &e.sigma[qi]));
                for c in 0..nq {
                    let g = e.q.component(&coad, c);
                    if g.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let mut args = t.clone();
                    args[slot] = c;
                    let Some((even, sorted)) = sort_with_sign(&args) else {
                        continue;
                    };
                    let col = tuple_index(&ts, &sorted);
                    add_block(&mut mat, ti * dm, col * dm, &r.module().act(alg, g), !even);
                }
            }
        }
        rho.push(mat);
    }
    Ok(Representation::new(&e.k, module, rho)?)
}

/// `E_1^{p,q}` against `H^q(K; M ⊗ Λ^p Q*)`.
pub fn check_e1(e: &ExtensionTriple, r: &Representation, pages: &SpectralSequence) -> Result<PageCheck, HsError> {
    let e1 = pages.page(1).ok_or(LinalgError::Shape("page 1 missing".into()))?;
    let mut entries = BTreeMap::new();
    for p in 0..=e.q.rank() {
        let rep = k_rep_on_forms(e, r, p)?;
        let dims = ce_cohomology(&e.k, &rep)?;
        for (q, &h) in dims.iter().enumerate() {
            entries.insert((p, q), (e1.dim(p as i64, q as i64), h));
        }
    }
    Ok(PageCheck { entries })
}

/// `E_2^{p,q}` against `H^p(Q; H^q(K; M))` with the induced action.
pub fn check_e2(e: &ExtensionTriple, r: &Representation, pages: &SpectralSequence) -> Result<PageCheck, HsError> {
    let e2 = pages.page(2).ok_or(LinalgError::Shape("page 2 missing".into()))?;
    let mut entries = BTreeMap::new();
    for q in 0..=e.k.rank() {
        let induced = induced_q_rep(e, r, q)?;
        let dims = ce_cohomology(&e.q, &induced.representation)?;
        for (p, &h) in dims.iter().enumerate() {
            entries.insert((p, q), (e2.dim(p as i64, q as i64), h));
        }
    }
    Ok(PageCheck { entries })
}

pub fn five_term(e: &ExtensionTriple, r: &Representation) -> Result<FiveTermSequence, HsError> {
    let filt = hs_filtration(e, r)?;
    Ok(edge_maps(&filt.filtered)?)
}
