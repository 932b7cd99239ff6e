//! The spectral sequence of a finitely filtered cochain complex.
//!
//! Pages are computed directly as subquotients of the complex:
//!
//! ```text
//! E_r^{p,q} = (F^p ∩ d⁻¹F^{p+r} + F^{p+1}) / (F^p ∩ d(F^{p−r+1}) + F^{p+1})   in degree p+q
//! ```
//!
//! with `F^p` = everything for `p ≤ 0` and `F^p = 0` past the last level.
//! `d_r` sends the class of `z` to the class of `dz`.

use std::collections::BTreeMap;

use super::complex::{CochainComplex, Cohomology};
use super::field::{Field, Scalar};
use super::matrix::Matrix;
use super::subspace::{QuotientBasis, Subspace};
use super::LinalgError;

/// A cochain complex with a decreasing filtration preserved by `d`.
/// `levels[n][p]` is `F^p C^n`; levels past the end of a list are zero.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    complex: CochainComplex,
    levels: Vec<Vec<Subspace>>,
    top: usize,
}

impl FilteredComplex {
    pub fn new(complex: CochainComplex, levels: Vec<Vec<Subspace>>) -> Result<Self, LinalgError> {
        let field = complex.field();
        if levels.len() != complex.dims().len() {
            return Err(LinalgError::Shape(format!(
                "filtration given for {} degrees, complex has {}",
                levels.len(),
                complex.dims().len()
            )));
        }
        for (n, chain) in levels.iter().enumerate() {
            let dim = complex.dim(n);
            if chain.iter().any(|s| s.ambient() != dim) {
                return Err(LinalgError::Shape(format!("filtration level in degree {n} has wrong ambient dimension")));
            }
            match chain.first() {
                Some(f0) if *f0 == Subspace::full(field, dim) => {}
                None if dim == 0 => {}
                _ => return Err(LinalgError::FiltrationNotExhaustive { degree: n }),
            }
            for p in 1..chain.len() {
                if !chain[p - 1].contains_subspace(&chain[p]) {
                    return Err(LinalgError::FiltrationNotDecreasing { degree: n, level: p });
                }
            }
        }
        let top = levels
            .iter()
            .filter_map(|chain| chain.iter().rposition(|s| s.dim() > 0))
            .max()
            .unwrap_or(0);
        let fc = FilteredComplex { complex, levels, top };
        for n in 0..fc.complex.top_degree() {
            let d = fc.complex.differential(n);
            for p in 0..=fc.top as i64 {
                let image = fc.level(n, p).image(&d);
                if !fc.level(n + 1, p).contains_subspace(&image) {
                    return Err(LinalgError::IncompatibleFiltration { degree: n, level: p as usize });
                }
            }
        }
        Ok(fc)
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    /// Largest p with some `F^p C^n ≠ 0`.
    pub fn top_level(&self) -> usize {
        self.top
    }

    /// `F^p C^n` with the clamping conventions above.
    pub fn level(&self, n: usize, p: i64) -> Subspace {
        let field = self.field();
        let dim = self.complex.dim(n);
        if p <= 0 {
            return Subspace::full(field, dim);
        }
        match self.levels.get(n).and_then(|chain| chain.get(p as usize)) {
            Some(s) => s.clone(),
            None => Subspace::zero(field, dim),
        }
    }

    fn level_signed(&self, n: i64, p: i64) -> Subspace {
        if n < 0 || n as usize > self.complex.top_degree() {
            Subspace::zero(self.field(), 0)
        } else {
            self.level(n as usize, p)
        }
    }

    /// `dim F^p C^n / F^{p+1} C^n`.
    pub fn graded_dim(&self, n: usize, p: i64) -> usize {
        self.level(n, p).dim() - self.level(n, p + 1).dim()
    }

    /// True when `F^{n+1} C^n = 0` in every degree.
    pub fn is_first_quadrant(&self) -> bool {
        (0..=self.complex.top_degree()).all(|n| self.level(n, n as i64 + 1).dim() == 0)
    }

    fn entry(&self, r: usize, p: i64, n: usize) -> PageEntry {
        let field = self.field();
        let r = r as i64;
        let d_out = self.complex.differential(n);
        let fp = self.level(n, p);
        let fp1 = self.level(n, p + 1);
        let cycles = fp.preimage(&d_out, &self.level_signed(n as i64 + 1, p + r));
        let boundaries = if n == 0 {
            Subspace::zero(field, self.complex.dim(0))
        } else {
            let d_in = self.complex.differential(n - 1);
            self.level(n - 1, p - r + 1).image(&d_in).intersection(&fp)
        };
        let numerator = cycles.sum(&fp1);
        let denominator = boundaries.sum(&fp1);
        let reps = numerator
            .complement_of(&denominator)
            .expect("boundaries lie in the cycles of a filtered complex");
        PageEntry {
            p,
            q: n as i64 - p,
            classes: QuotientBasis::new(&denominator, reps),
            numerator,
            denominator,
        }
    }

    /// Page `E_r` with its differentials.
    pub fn page(&self, r: usize) -> Result<SpectralPage, LinalgError> {
        assert!(r >= 1, "pages start at r = 1");
        let mut entries = BTreeMap::new();
        for n in 0..=self.complex.top_degree() {
            for p in 0..=self.top as i64 {
                let e = self.entry(r, p, n);
                entries.insert((e.p, e.q), e);
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, q), source) in &entries {
            let target_key = (p + r as i64, q - r as i64 + 1);
            let Some(target) = entries.get(&target_key) else {
                continue;
            };
            let n = (p + q) as usize;
            let d = self.complex.differential(n);
            let images: Vec<Vec<Scalar>> = source.representatives().iter().map(|z| d.mul_vec(z)).collect();
            let m = target
                .classes
                .coordinates_many(&images)
                .ok_or(LinalgError::PageInconsistent { r, p, q })?;
            differentials.insert((p, q), m);
        }
        let page = SpectralPage { r, entries, differentials };
        page.check_square_zero()?;
        Ok(page)
    }
}

/// One `(p,q)` entry of a page: the subquotient and chosen representatives.
#[derive(Debug, Clone)]
pub struct PageEntry {
    pub p: i64,
    pub q: i64,
    pub numerator: Subspace,
    pub denominator: Subspace,
    pub classes: QuotientBasis,
}

impl PageEntry {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        self.classes.representatives()
    }
}

#[derive(Debug, Clone)]
pub struct SpectralPage {
    pub r: usize,
    pub entries: BTreeMap<(i64, i64), PageEntry>,
    /// `d_r` out of `(p,q)`, as a matrix on representatives.
    pub differentials: BTreeMap<(i64, i64), Matrix>,
}

impl SpectralPage {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).map_or(0, PageEntry::dim)
    }

    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.entries.iter().map(|(k, e)| (*k, e.dim())).collect()
    }

    pub fn nonzero_dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.dims().into_iter().filter(|(_, d)| *d > 0).collect()
    }

    pub fn differential_rank(&self, p: i64, q: i64) -> usize {
        self.differentials.get(&(p, q)).map_or(0, Matrix::rank)
    }

    fn check_square_zero(&self) -> Result<(), LinalgError> {
        let r = self.r as i64;
        for (&(p, q), d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(p + r, q - r + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(LinalgError::PageInconsistent { r: self.r, p, q });
                }
            }
        }
        Ok(())
    }

    /// `dim ker d_r − rank(incoming d_r)` at every entry: the dims the next
    /// page must have.
    pub fn homology_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let r = self.r as i64;
        self.entries
            .iter()
            .map(|(&(p, q), e)| {
                let out = self.differential_rank(p, q);
                let inc = self.differential_rank(p - r, q + r - 1);
                ((p, q), e.dim() - out - inc)
            })
            .collect()
    }
}

/// Pages `E_1 … E_{r_max}`, the abutment `E_∞`, and the convergence data.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub pages: Vec<SpectralPage>,
    pub infinity: SpectralPage,
    /// First r with `E_r = E_∞` dimensionwise.
    pub stable_from: usize,
    /// Page index past which no differential can be nonzero.
    pub degeneration_bound: usize,
    /// `dim H^n` of the underlying complex.
    pub total_dims: Vec<usize>,
}

impl SpectralSequence {
    pub fn page(&self, r: usize) -> Option<&SpectralPage> {
        self.pages.iter().find(|pg| pg.r == r)
    }

    /// `Σ_{p+q=n} dim E_∞^{p,q}` for each n.
    pub fn infinity_totals(&self) -> Vec<usize> {
        let mut totals = vec![0; self.total_dims.len()];
        for (&(p, q), e) in &self.infinity.entries {
            let n = (p + q) as usize;
            if n < totals.len() {
                totals[n] += e.dim();
            }
        }
        totals
    }

    pub fn converges(&self) -> bool {
        self.infinity_totals() == self.total_dims
    }
}

/// Computes `E_1 … E_{r_max}` and `E_∞`. Each page is checked against the
/// homology of the previous one, and `E_∞` against the cohomology of the
/// total complex.
pub fn spectral_pages(fc: &FilteredComplex, r_max: usize) -> Result<SpectralSequence, LinalgError> {
    if r_max == 0 {
        return Err(LinalgError::Shape("r_max must be at least 1".into()));
    }
    let bound = fc.top_level() + 1;
    let last = r_max.max(bound);
    let mut pages: Vec<SpectralPage> = Vec::with_capacity(last);
    for r in 1..=last {
        let page = fc.page(r)?;
        if let Some(prev) = pages.last() {
            if prev.homology_dims() != page.dims() {
                return Err(LinalgError::PageInconsistent { r, p: -1, q: -1 });
            }
        }
        pages.push(page);
    }
    let infinity = pages[bound - 1].clone();
    if infinity.differentials.values().any(|d| !d.is_zero()) {
        return Err(LinalgError::PageInconsistent { r: bound, p: -1, q: -1 });
    }
    let target = infinity.dims();
    let stable_from = pages
        .iter()
        .find(|pg| pg.dims() == target)
        .map_or(bound, |pg| pg.r);
    let total_dims = fc.complex().betti()?;
    pages.truncate(r_max);
    let ss = SpectralSequence {
        pages,
        infinity,
        stable_from,
        degeneration_bound: bound,
        total_dims,
    };
    if !ss.converges() {
        let n = ss
            .infinity_totals()
            .iter()
            .zip(&ss.total_dims)
            .position(|(a, b)| a != b)
            .unwrap_or(0);
        return Err(LinalgError::ConvergenceFailure { degree: n });
    }
    Ok(ss)
}

/// The five-term exact sequence
/// `0 → E_2^{1,0} → H^1 → E_2^{0,1} → E_2^{2,0} → H^2`
/// of a first-quadrant filtered complex, with explicit matrices.
#[derive(Debug, Clone)]
pub struct FiveTermSequence {
    pub e2_10: usize,
    pub h1: usize,
    pub e2_01: usize,
    pub e2_20: usize,
    pub h2: usize,
    pub inflation: Matrix,
    pub restriction: Matrix,
    pub transgression: Matrix,
    pub inflation2: Matrix,
}

/// Names of the nodes at which exactness is asserted.
pub const FIVE_TERM_NODES: [&str; 4] = ["E2^{1,0}", "H^1", "E2^{0,1}", "E2^{2,0}"];

impl FiveTermSequence {
    /// Exactness at each node of `FIVE_TERM_NODES`, in order.
    pub fn exactness(&self) -> [bool; 4] {
        let inf = self.inflation.rank();
        let res = self.restriction.rank();
        let tr = self.transgression.rank();
        let inf2 = self.inflation2.rank();
        let zero = |a: &Matrix, b: &Matrix| a.mul(b).is_zero();
        [
            inf == self.e2_10,
            zero(&self.restriction, &self.inflation) && self.h1 - res == inf,
            zero(&self.transgression, &self.restriction) && self.e2_01 - tr == res,
            zero(&self.inflation2, &self.transgression) && self.e2_20 - inf2 == tr,
        ]
    }

    pub fn is_exact(&self) -> bool {
        self.exactness().iter().all(|&b| b)
    }
}

fn cohomology_or_zero(c: &CochainComplex, n: usize) -> Result<Option<Cohomology>, LinalgError> {
    if n > c.top_degree() {
        Ok(None)
    } else {
        c.cohomology_at(n).map(Some)
    }
}

fn class_matrix(
    field: Field,
    target: Option<&Cohomology>,
    vectors: &[Vec<Scalar>],
) -> Result<Matrix, LinalgError> {
    match target {
        None => Ok(Matrix::zeros(field, 0, vectors.len())),
        Some(h) => {
            let cols = vectors
                .iter()
                .map(|v| h.class_of(v).ok_or(LinalgError::NotACocycle { degree: h.degree }))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_columns(field, h.dim(), &cols))
        }
    }
}

/// Edge maps of the five-term sequence.
pub fn edge_maps(fc: &FilteredComplex) -> Result<FiveTermSequence, LinalgError> {
    if !fc.is_first_quadrant() {
        return Err(LinalgError::NotFirstQuadrant);
    }
    let field = fc.field();
    let c = fc.complex();
    let e2 = fc.page(2)?;
    let h1 = cohomology_or_zero(c, 1)?;
    let h2 = cohomology_or_zero(c, 2)?;
    let reps = |p: i64, q: i64| -> Vec<Vec<Scalar>> {
        e2.entries.get(&(p, q)).map(|e| e.representatives().to_vec()).unwrap_or_default()
    };
    let (r10, r01, r20) = (reps(1, 0), reps(0, 1), reps(2, 0));

    let inflation = class_matrix(field, h1.as_ref(), &r10)?;
    let inflation2 = class_matrix(field, h2.as_ref(), &r20)?;

    let h1_reps: Vec<Vec<Scalar>> = h1.as_ref().map(|h| h.representatives().to_vec()).unwrap_or_default();
    let restriction = match e2.entries.get(&(0, 1)) {
        Some(e) => e
            .classes
            .coordinates_many(&h1_reps)
            .ok_or(LinalgError::PageInconsistent { r: 2, p: 0, q: 1 })?,
        None => Matrix::zeros(field, 0, h1_reps.len()),
    };
    let transgression = e2
        .differentials
        .get(&(0, 1))
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(field, r20.len(), r01.len()));

    Ok(FiveTermSequence {
        e2_10: r10.len(),
        h1: h1.as_ref().map_or(0, Cohomology::dim),
        e2_01: r01.len(),
        e2_20: r20.len(),
        h2: h2.as_ref().map_or(0, Cohomology::dim),
        inflation,
        restriction,
        transgression,
        inflation2,
    })
}
