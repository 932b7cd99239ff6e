//! Problem files: the JSON schema, parsing with field paths in errors, and
//! construction of engine objects with shape checks.

use std::path::Path;

use lierin_core::algebra::{AModule, FiniteAlgebra};
use lierin_core::algebroid::{ExtensionTriple, LieRinehart, Representation};
use lierin_core::ce::RepComplex;
use lierin_core::linalg::{Field, Matrix, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A scalar as written in a file: an integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn to_scalar(&self, field: Field, path: &str) -> Result<Scalar, CliError> {
        let r = match self {
            Num::Int(i) => field.parse(&i.to_string()),
            Num::Text(t) => field.parse(t),
        };
        r.map_err(|e| CliError::Scalar { field: path.to_string(), message: e.to_string() })
    }
}

pub type NumMatrix = Vec<Vec<Num>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: Field,
    pub algebra: AlgebraSpec,
    pub algebroid: AlgebroidSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub unit: Vec<Num>,
    /// `mult[i][j]` is `e_i·e_j` on the basis.
    pub mult: Vec<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSpec {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// Per generator, the derivation `a(s_i)` as an `m×m` matrix of rows;
    /// column `j` is `a(s_i)(e_j)`. Omitted means zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<NumMatrix>>,
    /// `bracket[i][j]` is `[s_i,s_j]` as `n·m` coefficients, `i*m + a`
    /// standing for `e_a·s_i`.
    pub bracket: Vec<Vec<Vec<Num>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `A` with `ρ(s)(f) = a(s)(f)`.
    Algebra,
    /// `A` with `ρ = 0`.
    Trivial,
    /// `L` acting on itself.
    Adjoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleSpec {
    Preset(Preset),
    Explicit(ExplicitModule),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModule {
    pub dim: usize,
    /// Action of each basis element of `A`.
    pub action: Vec<NumMatrix>,
    /// `ρ(s_i)` for each generator.
    pub rho: Vec<NumMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub terms: Vec<ModuleSpec>,
    pub maps: Vec<NumMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    /// Generators of `L` spanning `K`; the rest give `Q`.
    pub k_indices: Vec<usize>,
    /// `σ(q_t)` as elements of `L`, one per `Q` generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Vec<Vec<Num>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_page: Option<usize>,
}

pub fn parse_str(text: &str) -> Result<ProblemFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        CliError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

pub fn read(path: &Path) -> Result<(String, ProblemFile), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let problem = parse_str(&text)?;
    Ok((text, problem))
}

/// Engine objects built from a problem file.
#[derive(Debug, Clone)]
pub struct Problem {
    pub field: Field,
    pub algebra: FiniteAlgebra,
    pub algebroid: LieRinehart,
    pub representation: Representation,
    pub complex: Option<RepComplex>,
    pub complex_error: Option<String>,
    pub extension: Option<ExtensionTriple>,
    pub degree: Option<usize>,
    pub max_page: Option<usize>,
}

fn check_len(field: &str, expected: usize, actual: usize) -> Result<(), CliError> {
    if expected != actual {
        return Err(CliError::Shape { field: field.to_string(), expected, actual });
    }
    Ok(())
}

fn vector(field: Field, v: &[Num], len: usize, path: &str) -> Result<Vec<Scalar>, CliError> {
    check_len(path, len, v.len())?;
    v.iter()
        .enumerate()
        .map(|(i, x)| x.to_scalar(field, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(field: Field, rows: &NumMatrix, n_rows: usize, n_cols: usize, path: &str) -> Result<Matrix, CliError> {
    check_len(path, n_rows, rows.len())?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector(field, r, n_cols, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(field, n_cols, &rows))
}

fn tensor(field: Field, t: &[Vec<Vec<Num>>], n: usize, len: usize, path: &str) -> Result<Vec<Vec<Vec<Scalar>>>, CliError> {
    check_len(path, n, t.len())?;
    t.iter()
        .enumerate()
        .map(|(i, row)| {
            check_len(&format!("{path}[{i}]"), n, row.len())?;
            row.iter()
                .enumerate()
                .map(|(j, v)| vector(field, v, len, &format!("{path}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn build_representation(
    field: Field,
    spec: &ModuleSpec,
    l: &LieRinehart,
    path: &str,
) -> Result<Representation, CliError> {
    let alg = l.algebra();
    match spec {
        ModuleSpec::Preset(Preset::Algebra) => Ok(Representation::on_algebra(l)),
        ModuleSpec::Preset(Preset::Trivial) => Ok(Representation::trivial(l)),
        ModuleSpec::Preset(Preset::Adjoint) => Ok(Representation::adjoint(l)),
        ModuleSpec::Explicit(m) => {
            check_len(&format!("{path}.action"), alg.dim(), m.action.len())?;
            let action = m
                .action
                .iter()
                .enumerate()
                .map(|(i, a)| matrix(field, a, m.dim, m.dim, &format!("{path}.action[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            check_len(&format!("{path}.rho"), l.rank(), m.rho.len())?;
            let rho = m
                .rho
                .iter()
                .enumerate()
                .map(|(i, a)| matrix(field, a, m.dim, m.dim, &format!("{path}.rho[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let module = AModule::new(alg, m.dim, action).map_err(|e| CliError::Input(e.to_string()))?;
            Representation::new(l, module, rho).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

impl ProblemFile {
    /// Builds engine objects, optionally over a different field.
    pub fn build(&self, field_override: Option<Field>) -> Result<Problem, CliError> {
        let field = match field_override.unwrap_or(self.field) {
            Field::Prime { p } => Field::prime(p).map_err(|e| CliError::Input(format!("field: {e}")))?,
            f => f,
        };
        let a = &self.algebra;
        let m = a.dim;
        let unit = vector(field, &a.unit, m, "algebra.unit")?;
        let mult = tensor(field, &a.mult, m, m, "algebra.mult")?;
        if let Some(names) = &a.names {
            check_len("algebra.names", m, names.len())?;
        }
        let algebra = FiniteAlgebra::new(field, unit, mult).map_err(|e| CliError::Input(e.to_string()))?;

        let g = &self.algebroid;
        let n = g.rank;
        if let Some(names) = &g.names {
            check_len("algebroid.names", n, names.len())?;
        }
        let anchor = match &g.anchor {
            Some(list) => {
                check_len("algebroid.anchor", n, list.len())?;
                list.iter()
                    .enumerate()
                    .map(|(i, d)| matrix(field, d, m, m, &format!("algebroid.anchor[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => vec![Matrix::zeros(field, m, m); n],
        };
        let bracket = tensor(field, &g.bracket, n, n * m, "algebroid.bracket")?;
        let algebroid =
            LieRinehart::new(algebra.clone(), n, anchor, bracket).map_err(|e| CliError::Input(e.to_string()))?;

        let representation = build_representation(
            field,
            self.module.as_ref().unwrap_or(&ModuleSpec::Preset(Preset::Algebra)),
            &algebroid,
            "module",
        )?;

        let (mut complex, mut complex_error) = (None, None);
        if let Some(c) = &self.complex {
            let terms = c
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| build_representation(field, t, &algebroid, &format!("complex.terms[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            check_len("complex.maps", terms.len().saturating_sub(1), c.maps.len())?;
            let maps = c
                .maps
                .iter()
                .enumerate()
                .map(|(i, d)| matrix(field, d, terms[i + 1].dim(), terms[i].dim(), &format!("complex.maps[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            match RepComplex::new(&algebroid, terms, maps) {
                Ok(c) => complex = Some(c),
                Err(e) => complex_error = Some(e.to_string()),
            }
        }

        let extension = match &self.extension {
            Some(e) => {
                let nq = n.saturating_sub(e.k_indices.len());
                let splitting = match &e.splitting {
                    Some(s) => {
                        check_len("extension.splitting", nq, s.len())?;
                        Some(
                            s.iter()
                                .enumerate()
                                .map(|(i, v)| vector(field, v, n * m, &format!("extension.splitting[{i}]")))
                                .collect::<Result<Vec<_>, _>>()?,
                        )
                    }
                    None => None,
                };
                Some(
                    ExtensionTriple::from_ideal(&algebroid, &e.k_indices, splitting)
                        .map_err(|err| CliError::Input(format!("extension: {err}")))?,
                )
            }
            None => None,
        };
        let opts = self.options.clone().unwrap_or_default();
        Ok(Problem {
            field,
            algebra,
            algebroid,
            representation,
            complex,
            complex_error,
            extension,
            degree: opts.degree,
            max_page: opts.max_page,
        })
    }
}
