//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lierin_cli::{parse_field, render, run, CliError, Command, Format, RunOptions};
use serde_json::Value;

fn corpus(kind: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(kind)
}

fn files(kind: &str) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus(kind))
        .expect("corpus directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

fn load(kind: &str, name: &str) -> String {
    std::fs::read_to_string(corpus(kind).join(name)).expect("corpus file")
}

fn report(cmd: Command, name: &str, opts: &RunOptions) -> Result<Value, String> {
    let text = load("positive", name);
    let r = run(cmd, &text, opts).map_err(|e| format!("{name}: {e}"))?;
    Ok(r.value)
}

fn dims(v: &Value) -> Vec<usize> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_u64().unwrap_or(u64::MAX) as usize).collect())
        .unwrap_or_default()
}

fn ok(v: &Value) -> bool {
    v["status"] == "ok"
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn has_violation(section: &Value, check: &str, witness: &[u64]) -> bool {
    section.as_array().is_some_and(|list| {
        list.iter().any(|v| {
            v["check"] == check
                && v["witness"].as_array().is_some_and(|w| w.iter().map(|x| x.as_u64().unwrap()).eq(witness.iter().copied()))
        })
    })
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let positives = files("positive");
    for name in &positives {
        let v = report(Command::Validate, name, &RunOptions::default())?;
        ensure(ok(&v), || format!("{name} failed validation: {}", v["validation"]))?;
        ensure(v["validation"]["ce_square_zero"] == true, || format!("{name}: d² ≠ 0"))?;
    }
    for needed in [
        "abelian_k2.json",
        "sl2.json",
        "h3.json",
        "aff1.json",
        "fat_point_rank1.json",
        "fat_point_rank2.json",
        "split_algebra.json",
        "h3_f2.json",
    ] {
        ensure(positives.iter().any(|n| n == needed), || format!("missing positive entry {needed}"))?;
    }

    let expected: &[(&str, &str, &str, &[u64])] = &[
        ("aff1_bad_ideal.json", "extension", "pi bracket", &[0, 1]),
        ("anchor_not_derivation.json", "algebroid", "anchor derivation", &[0]),
        ("bad_algebra.json", "algebra", "unit", &[1]),
        ("non_antisymmetric.json", "algebroid", "antisymmetry", &[0, 1]),
        ("non_flat.json", "representation", "flatness", &[0, 1]),
        ("sl2_jacobi.json", "algebroid", "jacobi", &[0, 1, 2]),
        ("wrong_symbol.json", "representation", "symbol", &[0, 1]),
    ];
    let mut seen = 0;
    for name in files("negative") {
        let text = load("negative", &name);
        let outcome = run(Command::Validate, &text, &RunOptions::default());
        match name.as_str() {
            "malformed.json" => match outcome {
                Err(CliError::Parse { path, .. }) if path == "algebra.dim" => {}
                other => return Err(format!("{name}: expected a parse error at algebra.dim, got {other:?}")),
            },
            "wrong_bracket_length.json" => match outcome {
                Err(CliError::Shape { field, expected: 2, actual: 1 }) if field == "algebroid.bracket[0][1]" => {}
                other => return Err(format!("{name}: expected a shape error, got {other:?}")),
            },
            "complex_not_equivariant.json" => {
                let r = outcome.map_err(|e| e.to_string())?;
                ensure(!r.passed && r.value["validation"]["complex"]["valid"] == false, || {
                    format!("{name}: non-equivariant map accepted")
                })?;
                let err = r.value["validation"]["complex"]["error"].as_str().unwrap_or("");
                ensure(err.contains("equivariant"), || format!("{name}: wrong complex error `{err}`"))?;
            }
            _ => {
                let &(_, section, check, witness) = expected
                    .iter()
                    .find(|e| e.0 == name)
                    .ok_or_else(|| format!("no expectation for negative entry {name}"))?;
                let r = outcome.map_err(|e| e.to_string())?;
                ensure(!r.passed && r.exit_code() == 1, || format!("{name}: accepted"))?;
                ensure(has_violation(&r.value["validation"][section], check, witness), || {
                    format!("{name}: expected {check} {witness:?} in {section}, got {}", r.value["validation"])
                })?;
            }
        }
        seen += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{} positive, {seen} negative entries in {elapsed:.2?}", positives.len()))
}

fn criterion_2() -> Result<String, String> {
    // hand computations
    let oracle: &[(&str, &[usize])] = &[
        ("abelian_k2.json", &[1, 2, 1]),
        ("sl2.json", &[1, 0, 0, 1]),
        ("h3.json", &[1, 2, 2, 1]),
        ("aff1.json", &[1, 1, 0]),
        ("fat_point_rank1.json", &[1, 1]),
        ("sl2_adjoint.json", &[0, 0, 0, 0]),
        ("split_algebra.json", &[2, 3, 1]),
    ];
    for &(name, want) in oracle {
        let v = report(Command::Cohomology, name, &RunOptions::default())?;
        let got = dims(&v["result"]["dims"]);
        ensure(ok(&v) && got == want, || format!("{name}: got {got:?}, want {want:?}"))?;
    }
    Ok(format!("{} entries match", oracle.len()))
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let opts = RunOptions { degree: Some(3), ..Default::default() };
    let names = files("positive");
    for name in &names {
        let v = report(Command::Env, name, &opts)?;
        let src: Value = serde_json::from_str(&load("positive", name)).unwrap();
        let m = src["algebra"]["dim"].as_u64().unwrap() as usize;
        let n = src["algebroid"]["rank"].as_u64().unwrap() as usize;
        let r = &v["result"];
        let pbw = r["pbw"]["dim"].as_u64().unwrap_or(0) as usize;
        ensure(pbw == m * binomial(n + 3, 3), || format!("{name}: PBW count {pbw}"))?;
        ensure(r["relations"].as_array().is_some_and(|a| a.is_empty()), || format!("{name}: relations fail"))?;
        ensure(r["associativity"].as_array().is_some_and(|a| a.is_empty()), || format!("{name}: not associative"))?;
        ensure(r["rinehart"]["exact"] == true, || format!("{name}: Rinehart complex not exact: {}", r["rinehart"]))?;
        ensure(r["hom_iso"]["passed"] == true, || format!("{name}: hom iso fails: {}", r["hom_iso"]))?;
        let ce = report(Command::Cohomology, name, &RunOptions::default())?;
        let ce_dims = dims(&ce["result"]["dims"]);
        let ext = dims(&r["ext"]["ext"]);
        ensure(ext == ce_dims, || format!("{name}: Ext {ext:?} vs CE {ce_dims:?}"))?;
        ensure(ok(&v), || format!("{name}: env report failed"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} entries at cutoff 3 in {elapsed:.2?}", names.len()))
}

fn criterion_4() -> Result<String, String> {
    let oracle: &[(&str, Option<&[usize]>)] = &[
        ("aff1.json", Some(&[1, 1, 0])),
        ("aff1_shifted_splitting.json", Some(&[1, 1, 0])),
        ("h3.json", Some(&[1, 2, 2, 1])),
        ("h3_f2.json", Some(&[1, 2, 2, 1])),
        ("ext_trivial_kernel.json", Some(&[0, 0, 0, 0])),
        ("ext_trivial_quotient.json", Some(&[0, 0, 0, 0])),
        ("fat_point_rank2.json", None),
    ];
    let mut count = 0;
    for name in files("positive") {
        let src: Value = serde_json::from_str(&load("positive", &name)).unwrap();
        if src.get("extension").is_none() {
            continue;
        }
        let v = report(Command::Hs, &name, &RunOptions::default())?;
        let r = &v["result"];
        ensure(r["graded"]["matches"] == true, || format!("{name}: graded dims {}", r["graded"]))?;
        ensure(r["e1"]["passed"] == true, || format!("{name}: E1 {}", r["e1"]))?;
        ensure(r["e2"]["passed"] == true, || format!("{name}: E2 {}", r["e2"]))?;
        let totals = dims(&r["infinity_totals"]);
        let direct = dims(&r["direct_cohomology"]);
        ensure(totals == direct, || format!("{name}: E∞ totals {totals:?} vs H {direct:?}"))?;
        ensure(r["five_term"]["exact"] == true, || format!("{name}: five-term {}", r["five_term"]))?;
        if let Some((_, Some(want))) = oracle.iter().find(|o| o.0 == name) {
            ensure(direct == *want, || format!("{name}: H = {direct:?}, want {want:?}"))?;
        }
        ensure(ok(&v), || format!("{name}: hs report failed"))?;
        count += 1;
    }
    for (name, _) in oracle {
        ensure(files("positive").iter().any(|n| n == name), || format!("missing extension {name}"))?;
    }
    // E2 of the central extension of h3 by hand: H^p(k², k) ⊗ H^q(k, k)
    let v = report(Command::Hs, "h3.json", &RunOptions::default())?;
    let e2: Vec<(u64, u64, u64)> = v["result"]["pages"]
        .as_array()
        .and_then(|pages| pages.iter().find(|p| p["r"] == 2))
        .and_then(|p| p["dims"].as_array())
        .map(|d| d.iter().map(|e| (e["p"].as_u64().unwrap(), e["q"].as_u64().unwrap(), e["dim"].as_u64().unwrap())).collect())
        .unwrap_or_default();
    let want = vec![(0, 0, 1), (0, 1, 1), (1, 0, 2), (1, 1, 2), (2, 0, 1), (2, 1, 1)];
    ensure(e2 == want, || format!("h3 E2 {e2:?}"))?;
    Ok(format!("{count} extensions"))
}

fn criterion_5() -> Result<String, String> {
    let v = report(Command::Total, "complex_identity.json", &RunOptions::default())?;
    let got = dims(&v["result"]["dims"]);
    ensure(ok(&v) && !got.is_empty() && got.iter().all(|&d| d == 0), || format!("identity cone: {got:?}"))?;

    let v = report(Command::Total, "complex_single.json", &RunOptions::default())?;
    let single = dims(&v["result"]["dims"]);
    let ce = report(Command::Cohomology, "complex_single.json", &RunOptions::default())?;
    let ce = dims(&ce["result"]["dims"]);
    ensure(ok(&v) && single == ce && single == [1, 2, 2, 1], || format!("single term: {single:?} vs {ce:?}"))?;

    // H(k) ⊕ H(k)[-1] over abelian k²
    let v = report(Command::Total, "complex_zero.json", &RunOptions::default())?;
    let zero = dims(&v["result"]["dims"]);
    ensure(zero == [1, 3, 3, 1], || format!("zero map: {zero:?}"))?;
    Ok("identity cone acyclic, single term equals CE".into())
}

fn suite() -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for name in files("positive") {
        let src: Value = serde_json::from_str(&load("positive", &name)).unwrap();
        let mut cmds = vec![Command::Validate, Command::Cohomology, Command::Invariants, Command::Env];
        if src.get("extension").is_some() {
            cmds.push(Command::Hs);
        }
        if src.get("complex").is_some() {
            cmds.push(Command::Total);
        }
        let text = load("positive", &name);
        for cmd in cmds {
            let r = run(cmd, &text, &RunOptions::default()).map_err(|e| format!("{name}: {e}"))?;
            out.push(render(&r, Format::Json));
            out.push(render(&r, Format::Text));
        }
    }
    Ok(out)
}

fn criterion_6() -> Result<String, String> {
    let first = suite()?;
    let second = suite()?;
    ensure(first == second, || "reports differ between runs".into())?;

    let f2 = RunOptions { field: Some(parse_field("F_2").unwrap()), ..Default::default() };
    let q = RunOptions::default();
    let coh = |name: &str, o: &RunOptions| -> Result<(Vec<usize>, Value), String> {
        let v = report(Command::Cohomology, name, o)?;
        Ok((dims(&v["result"]["dims"]), v["field"].clone()))
    };

    // sl2 stops being semisimple in characteristic 2: [e,f] = h is central
    let (sl2_q, field_q) = coh("sl2.json", &q)?;
    let (sl2_2, field_2) = coh("sl2.json", &f2)?;
    ensure(sl2_q == [1, 0, 0, 1] && sl2_2 == [1, 2, 2, 1], || format!("sl2: Q {sl2_q:?}, F_2 {sl2_2:?}"))?;
    ensure(field_q == "Q" && field_2 == "F_2", || format!("field labels {field_q} / {field_2}"))?;
    let (from_file, label) = coh("sl2_f2.json", &q)?;
    ensure(from_file == sl2_2 && label == "F_2", || format!("sl2_f2.json: {from_file:?} over {label}"))?;

    // h3 has integral structure constants with unit torsion: same dims in every characteristic
    let (h3_q, _) = coh("h3.json", &q)?;
    let (h3_2, _) = coh("h3.json", &f2)?;
    ensure(h3_q == h3_2, || format!("h3: Q {h3_q:?}, F_2 {h3_2:?}"))?;

    // fat point: x∂ and ∂ are both derivations of k[x]/(x²) in characteristic 2
    let text = load("positive", "fat_point_rank1.json");
    let der = |o: &RunOptions| -> Result<usize, String> {
        let p = lierin_cli::problem::parse_str(&text)
            .and_then(|f| f.build(o.field))
            .map_err(|e| e.to_string())?;
        Ok(p.algebra.derivation_space().len())
    };
    let (dq, d2) = (der(&q)?, der(&f2)?);
    ensure(dq == 1 && d2 == 2, || format!("Der(k[x]/x²): Q {dq}, F_2 {d2}"))?;

    Ok(format!(
        "{} reports identical; sl2 {sl2_q:?} over Q vs {sl2_2:?} over F_2; h3 {h3_q:?} in both",
        first.len() / 2
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String, String>); 6] = [
        ("axiom suite", criterion_1),
        ("classical oracle", criterion_2),
        ("PBW, Rinehart resolution and Ext", criterion_3),
        ("Hochschild-Serre spectral sequence", criterion_4),
        ("complexes of representations", criterion_5),
        ("determinism and characteristic", criterion_6),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
