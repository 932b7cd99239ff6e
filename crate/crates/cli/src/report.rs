//! Running commands and building reports. Reports are JSON values with
//! sorted keys; the text rendering walks the same value.

use std::fmt::Write as _;

use lierin_core::algebroid::invariants;
use lierin_core::ce::{ce_cohomology, ce_complex, total_complex};
use lierin_core::enveloping::{ext_dims, hom_complex_iso, RinehartComplex, TruncatedEnveloping};
use lierin_core::hs::{check_e1, check_e2, five_term, hs_filtration, hs_pages, PageCheck};
use lierin_core::linalg::{Field, Scalar, FIVE_TERM_NODES};
use lierin_core::Violation;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::problem::{parse_str, Problem};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Cohomology,
    Invariants,
    Hs,
    Env,
    Total,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Invariants => "invariants",
            Command::Hs => "hs",
            Command::Env => "env",
            Command::Total => "total",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub field: Option<Field>,
    pub degree: Option<usize>,
    pub max_page: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub value: Value,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn text(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_text())).collect())
}

fn violations(list: &[Violation]) -> Value {
    serde_json::to_value(list).expect("violations serialize")
}

fn page_check(c: &PageCheck) -> Value {
    let entries: Vec<Value> = c
        .entries
        .iter()
        .map(|(&(p, q), &(page, independent))| json!({"p": p, "q": q, "sequence": page, "independent": independent}))
        .collect();
    json!({"passed": c.passed(), "entries": entries})
}

/// Axiom checks shared by every command.
struct Validation {
    value: Map<String, Value>,
    passed: bool,
}

fn validate(p: &Problem, with_extras: bool) -> Validation {
    let mut value = Map::new();
    let alg = p.algebra.validate();
    let mut passed = alg.is_empty();
    value.insert("algebra".into(), violations(&alg));
    if passed {
        let l = p.algebroid.validate();
        passed = l.is_empty();
        value.insert("algebroid".into(), violations(&l));
    }
    if passed {
        let r = p.representation.validate(&p.algebroid);
        passed = r.is_empty();
        value.insert("representation".into(), violations(&r));
    }
    if passed {
        let sq = ce_complex(&p.algebroid, &p.representation);
        passed = sq.is_ok();
        value.insert("ce_square_zero".into(), json!(sq.is_ok()));
    }
    if with_extras {
        if let Some(e) = &p.extension {
            let v = e.validate();
            passed &= v.is_empty();
            value.insert("extension".into(), violations(&v));
        }
        if p.complex.is_some() || p.complex_error.is_some() {
            let ok = p.complex_error.is_none();
            passed &= ok;
            value.insert("complex".into(), json!({"valid": ok, "error": p.complex_error}));
        }
    }
    Validation { value, passed }
}

/// Parses, builds and runs one command. Input errors are `Err`; engine
/// failures and violations give a report with `passed = false`.
pub fn run(command: Command, input: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let file = parse_str(input)?;
    let problem = file.build(opts.field)?;
    let hash = hex::encode(Sha256::digest(input.as_bytes()));

    let needs_extension = command == Command::Hs;
    if needs_extension && problem.extension.is_none() {
        return Err(CliError::Input("the hs command needs an `extension` section".into()));
    }
    if command == Command::Total && problem.complex.is_none() && problem.complex_error.is_none() {
        return Err(CliError::Input("the total command needs a `complex` section".into()));
    }

    let extras = matches!(command, Command::Validate | Command::Hs | Command::Total);
    let validation = validate(&problem, extras);
    let mut passed = validation.passed;
    let mut result = Value::Null;
    let mut error = Value::Null;
    if passed && command != Command::Validate {
        match execute(command, &problem, opts) {
            Ok((v, ok)) => {
                result = v;
                passed = ok;
            }
            Err(msg) => {
                error = Value::String(msg);
                passed = false;
            }
        }
    }

    let mut top = Map::new();
    top.insert("command".into(), json!(command.name()));
    top.insert("engine".into(), json!({"name": "lierin", "version": env!("CARGO_PKG_VERSION")}));
    top.insert("input_sha256".into(), json!(hash));
    top.insert("field".into(), json!(problem.field.label()));
    if let Some(name) = &file.name {
        top.insert("name".into(), json!(name));
    }
    top.insert("validation".into(), Value::Object(validation.value));
    if !result.is_null() {
        top.insert("result".into(), result);
    }
    if !error.is_null() {
        top.insert("error".into(), error);
    }
    top.insert("status".into(), json!(if passed { "ok" } else { "failed" }));
    Ok(Report { value: Value::Object(top), passed })
}

fn execute(command: Command, p: &Problem, opts: &RunOptions) -> Result<(Value, bool), String> {
    let l = &p.algebroid;
    let r = &p.representation;
    match command {
        Command::Validate => Ok((Value::Null, true)),
        Command::Cohomology => {
            let c = ce_complex(l, r).map_err(|e| e.to_string())?;
            let coh = c.cohomology().map_err(|e| e.to_string())?;
            let dims: Vec<usize> = coh.iter().map(|h| h.dim()).collect();
            let degrees: Vec<Value> = coh
                .iter()
                .map(|h| {
                    json!({
                        "degree": h.degree,
                        "dim": h.dim(),
                        "representatives": h.representatives().iter().map(|v| text(v)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let euler_h: i64 = dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
            let euler_c = c.euler_characteristic();
            Ok((
                json!({
                    "dims": dims,
                    "cochain_dims": c.dims(),
                    "euler_characteristic": {"cochains": euler_c, "cohomology": euler_h},
                    "degrees": degrees,
                }),
                euler_c == euler_h,
            ))
        }
        Command::Invariants => {
            let inv = invariants(l, r);
            let h0 = ce_complex(l, r).map_err(|e| e.to_string())?.cocycles(0);
            let equal = inv == h0;
            Ok((
                json!({
                    "dim": inv.dim(),
                    "basis": inv.basis().iter().map(|v| text(v)).collect::<Vec<_>>(),
                    "equals_h0": equal,
                }),
                equal,
            ))
        }
        Command::Hs => hs_report(p, opts),
        Command::Env => env_report(p, opts),
        Command::Total => {
            let c = p.complex.as_ref().expect("validated complex");
            let t = total_complex(l, c).map_err(|e| e.to_string())?;
            let dims = t.betti().map_err(|e| e.to_string())?;
            let terms: Vec<Vec<usize>> = c
                .terms()
                .iter()
                .map(|m| ce_cohomology(l, m))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            Ok((json!({"dims": dims, "total_dims": t.dims(), "term_cohomology": terms}), true))
        }
    }
}

fn hs_report(p: &Problem, opts: &RunOptions) -> Result<(Value, bool), String> {
    let e = p.extension.as_ref().expect("extension present");
    let r = &p.representation;
    let filt = hs_filtration(e, r).map_err(|err| err.to_string())?;
    let r_max = opts
        .max_page
        .or(p.max_page)
        .unwrap_or(filt.filtered.top_level() + 1)
        .max(1);
    let pages = hs_pages(e, r, r_max).map_err(|err| err.to_string())?;
    let seq = &pages.sequence;
    let e1 = check_e1(e, r, seq).map_err(|err| err.to_string())?;
    let e2 = check_e2(e, r, seq).map_err(|err| err.to_string())?;
    let ft = five_term(e, r).map_err(|err| err.to_string())?;

    let graded: Vec<Value> = filt
        .graded
        .iter()
        .map(|(&(pp, n), &d)| json!({"p": pp, "n": n, "dim": d, "expected": filt.expected_graded[&(pp, n)]}))
        .collect();
    let page_value = |pg: &lierin_core::linalg::SpectralPage| {
        let dims: Vec<Value> = pg
            .nonzero_dims()
            .iter()
            .map(|(&(pp, q), &d)| json!({"p": pp, "q": q, "dim": d}))
            .collect();
        let diffs: Vec<Value> = pg
            .entries
            .keys()
            .filter(|&&(pp, q)| pg.differential_rank(pp, q) > 0)
            .map(|&(pp, q)| json!({"p": pp, "q": q, "rank": pg.differential_rank(pp, q)}))
            .collect();
        json!({"r": pg.r, "dims": dims, "differentials": diffs})
    };
    let shown: Vec<Value> = seq.pages.iter().filter(|pg| pg.r <= r_max.max(2)).map(page_value).collect();
    let exact = ft.exactness();
    let exact_at: Map<String, Value> = FIVE_TERM_NODES
        .iter()
        .zip(exact.iter())
        .map(|(n, &b)| (n.to_string(), json!(b)))
        .collect();
    let ok = filt.graded_matches() && pages.converges() && e1.passed() && e2.passed() && ft.is_exact();
    Ok((
        json!({
            "k_rank": filt.k_rank,
            "q_rank": filt.q_rank,
            "graded": {"matches": filt.graded_matches(), "entries": graded},
            "pages": shown,
            "infinity": page_value(&seq.infinity),
            "stable_from": seq.stable_from,
            "infinity_totals": seq.infinity_totals(),
            "direct_cohomology": pages.direct_cohomology,
            "converges": pages.converges(),
            "e1": page_check(&e1),
            "e2": page_check(&e2),
            "five_term": {
                "dims": {"E2^{1,0}": ft.e2_10, "H^1": ft.h1, "E2^{0,1}": ft.e2_01, "E2^{2,0}": ft.e2_20, "H^2": ft.h2},
                "ranks": {
                    "inflation": ft.inflation.rank(),
                    "restriction": ft.restriction.rank(),
                    "transgression": ft.transgression.rank(),
                    "inflation2": ft.inflation2.rank(),
                },
                "exact_at": exact_at,
                "exact": ft.is_exact(),
            },
        }),
        ok,
    ))
}

fn env_report(p: &Problem, opts: &RunOptions) -> Result<(Value, bool), String> {
    let d = opts.degree.or(p.degree).unwrap_or(3);
    let u = TruncatedEnveloping::new(&p.algebroid, d).map_err(|e| e.to_string())?;
    let relations = u.check_relations();
    let assoc = u.check_associativity();
    let action = u.check_action(&p.representation);
    let table = u.multiplication_table();
    let rc = RinehartComplex::new(&u);
    let exactness = rc.exactness();
    let linearity = rc.check_u_linearity();
    let cert = hom_complex_iso(&u, &p.representation);
    let ext = ext_dims(&u, &p.representation).map_err(|e| e.to_string())?;

    let basis: Vec<Value> = u.basis().iter().map(|(w, a)| json!({"word": w, "a": a})).collect();
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|(&(i, j), v)| {
            let nz: Vec<Value> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| json!([k, x.to_text()]))
                .collect();
            json!({"left": i, "right": j, "product": nz})
        })
        .collect();
    let hom: Vec<Value> = cert
        .degrees
        .iter()
        .map(|(i, ok, w)| json!({"degree": i, "matches": ok, "witness": w}))
        .collect();
    let ok = u.dim() == u.expected_dim()
        && relations.is_empty()
        && assoc.is_empty()
        && action.is_empty()
        && exactness.is_exact()
        && linearity.is_empty()
        && cert.passed()
        && ext.agrees();
    Ok((
        json!({
            "cutoff": d,
            "pbw": {"dim": u.dim(), "expected_dim": u.expected_dim(), "basis": basis},
            "relations": violations(&relations),
            "associativity": violations(&assoc),
            "module_action": violations(&action),
            "table": {"entries": entries, "overflow": table.overflow},
            "rinehart": {
                "chain_dims": rc.chain_dims(),
                "levels": exactness.levels,
                "failure": exactness.failure,
                "square_zero": exactness.square_zero,
                "augmented": exactness.augmented,
                "filtration_preserved": exactness.filtration_preserved,
                "exact": exactness.is_exact(),
                "u_linearity": violations(&linearity),
            },
            "hom_iso": {"passed": cert.passed(), "degrees": hom},
            "ext": {"ext": ext.ext, "ce": ext.ce, "same_subquotients": ext.same_subquotients, "agrees": ext.agrees()},
        }),
        ok,
    ))
}

/// JSON (pretty, sorted keys) or an indented text listing of the same value.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            render_text(&report.value, 0, &mut out);
            out
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = a.iter().filter_map(scalar_text).collect();
            Some(format!("({})", parts.join(", ")))
        }
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}
