//! Acceptance suite: one line per criterion with its runtime against the budget.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use helical_core::collections::{extend_helix, right_dual_collection, CollectionState};
use helical_core::dgpres::{quotient_check, validate, write_presentation, QuotientOptions};
use helical_core::exactlin::Field;
use helical_core::families::{beilinson, dual_numbers, generate, m_kronecker, Family};
use helical_core::report::DimTable;
use helical_core::twcx::hom_dims;

type Outcome = Result<(), String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const Q: Field = Field::Rational;

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (1..=k).fold(1usize, |acc, t| acc * (n - k + t) as usize / t as usize)
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = helical_cli::run(std::iter::once("helical").chain(args.iter().copied()), &mut out, &mut err);
    let text = if out.is_empty() { String::from_utf8_lossy(&err).into_owned() } else { String::from_utf8(out).unwrap() };
    (code, text)
}

fn report(args: &[&str]) -> Result<(i32, Value), String> {
    let (code, text) = run(args);
    serde_json::from_str(&text).map(|v| (code, v)).map_err(|_| format!("{args:?} exited {code}: {text}"))
}

fn checks(r: &Value) -> &Vec<Value> {
    r["checks"].as_array().expect("checks array")
}

fn check<'a>(r: &'a Value, name: &str) -> Result<&'a Value, String> {
    checks(r).iter().find(|c| c["name"] == name).ok_or_else(|| format!("no check {name:?}"))
}

fn write_family(dir: &Path, f: &Family, name: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, write_presentation(&f.extension, Some(&f.metadata))).unwrap();
    path.to_string_lossy().into_owned()
}

fn table(pairs: &[(i64, usize)]) -> Value {
    json!(DimTable::from_pairs(pairs.iter().copied()))
}

fn axioms() -> Outcome {
    for f in [beilinson(2, Q), beilinson(3, Q), dual_numbers(2, Q)] {
        let f = f.map_err(|e| e.to_string())?;
        let r = validate(&f.extension);
        ensure!(r.all_pass(), "{} {:?} fails validation", f.metadata.family, f.metadata.params);
    }
    let f = beilinson(2, Q).unwrap();
    let mut p = f.extension.clone();
    let u = p.unit(0);
    let v = p.compose(0, 0, 0, u, u).scale(&p.scalar(2));
    p.set_composition(0, 0, 0, u, u, v);
    let r = validate(&p);
    let failing: Vec<_> = r.checks.iter().filter(|c| c.status == helical_core::report::Status::Fail).collect();
    ensure!(!failing.is_empty(), "corruption not detected");
    ensure!(failing.iter().all(|c| c.witness.is_object()), "failure without a witness: {failing:?}");
    let located = failing.iter().any(|c| c.witness.to_string().contains("objects"));
    ensure!(located, "witness does not locate the corruption: {failing:?}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupted.json");
    std::fs::write(&path, write_presentation(&p, Some(&f.metadata))).unwrap();
    let (code, _) = report(&["validate", path.to_str().unwrap()])?;
    ensure!(code == 1, "corrupted file exits {code}");
    std::fs::write(&path, "{not json").unwrap();
    ensure!(run(&["validate", path.to_str().unwrap()]).0 == 3, "malformed file does not exit 3");
    Ok(())
}

fn sphericality() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    for (n, d) in [(2usize, 1i64), (3, 2)] {
        let path = write_family(dir.path(), &beilinson(n, Q).unwrap(), "b.json");
        let (code, r) = report(&["spherical-check", &path])?;
        ensure!(code == 0, "beilinson {n}: exit {code}");
        ensure!(checks(&r).len() == n + 1, "beilinson {n}: {} objects checked", checks(&r).len());
        for c in checks(&r) {
            ensure!(c["witness"]["self_hom"] == table(&[(0, 1), (d, 1)]), "{c}");
            ensure!(c["witness"]["display"] == format!("spherical of dimension {d}"), "{c}");
        }
    }
    Ok(())
}

fn quotient() -> Outcome {
    for f in [beilinson(2, Q), beilinson(3, Q), dual_numbers(2, Q), m_kronecker(2, 1, Q)] {
        let f = f.map_err(|e| e.to_string())?;
        let d = f.metadata.d;
        let tag = format!("{} {:?}", f.metadata.family, f.metadata.params);
        let ok = quotient_check(&f.extension, &f.directed, d, QuotientOptions::default()).map_err(|e| e.to_string())?;
        ensure!(ok.all_pass(), "{tag}: {:?}", ok.checks);
        for wrong in [d - 1, d + 1] {
            if wrong == 0 {
                continue;
            }
            let r = quotient_check(&f.extension, &f.directed, wrong, QuotientOptions::default()).map_err(|e| e.to_string())?;
            ensure!(r.any_fail(), "{tag}: d = {wrong} not rejected");
        }
    }
    Ok(())
}

fn mutations() -> Outcome {
    let (code, r) = report(&["mutate", &fixture("b2.json")])?;
    ensure!(code == 0, "exit {code}");
    for s in [1, 2] {
        for name in [format!("slot {s}: right after left"), format!("slot {s}: left after right")] {
            let c = check(&r, &name)?;
            let verdicts = c["witness"]["verdicts"].as_array().unwrap();
            ensure!(verdicts.len() == 3 && verdicts.iter().all(|v| v == "equivalent"), "{c}");
        }
    }
    Ok(())
}

fn b2_state() -> CollectionState {
    CollectionState::exceptional(Arc::new(beilinson(2, Q).unwrap().directed), 1).unwrap()
}

fn helix_dims() -> Outcome {
    let w = extend_helix(&b2_state(), -3, 6).map_err(|e| e.to_string())?;
    let (d, l) = (1i64, 3i64);
    for i in -3..=6i64 {
        for j in i..=6 {
            let got = w.hom(i, j).unwrap();
            ensure!(*got == DimTable::from_pairs([(0, binom(j - i + 2, 2))]), "hom({i},{j}) = {got:?}");
        }
    }
    let mut pairs = 0;
    for i in -3..=6i64 {
        for j in -3..=6i64 {
            let Some(back) = w.hom(j, i - l) else { continue };
            let fwd = w.hom(i, j).unwrap();
            for n in -6..=6 {
                ensure!(fwd.get(n) == back.get(d + 1 - n), "Serre fails at ({i},{j}) degree {n}");
            }
            pairs += 1;
        }
    }
    ensure!(pairs > 0, "no Serre pairs in the window");
    ensure!(w.hom(2, -2).unwrap().get(2) == 3, "dim Hom^2(E_2, E_-2) = {}", w.hom(2, -2).unwrap().get(2));
    ensure!(w.serre_report().all_pass(), "{:?}", w.serre_report());
    Ok(())
}

fn acyclicity() -> Outcome {
    let (code, _) = report(&["acyclic", &fixture("b2.json"), "--window", "-3:6"])?;
    ensure!(code == 0, "b2 exit {code}");
    let (code, r) = report(&["acyclic", &fixture("mkronecker-2-1.json"), "--window", "-3:6"])?;
    ensure!(code == 1, "mkronecker exit {code}");
    let failures = check(&r, "acyclic")?["witness"]["failures"].as_array().unwrap().clone();
    ensure!(failures.iter().any(|f| f["degree"].as_i64().unwrap() < 0 && f["dim"].as_u64().unwrap() > 0), "{failures:?}");
    let (code, r) = report(&["acyclic", &fixture("dualnumbers.json"), "--d", "1"])?;
    ensure!(code == 1, "dualnumbers exit {code}");
    let failures = check(&r, "acyclic")?["witness"]["failures"].as_array().unwrap().clone();
    ensure!(failures.iter().any(|f| f["i"] == 1 && f["j"] == 2 && f["degree"] == -2), "{failures:?}");
    Ok(())
}

fn dual_collection() -> Outcome {
    let c = b2_state();
    let (duals, r) = right_dual_collection(&c).map_err(|e| e.to_string())?;
    ensure!(r.all_pass(), "{r:?}");
    for (i, e) in c.members.iter().enumerate() {
        for (j, f) in duals.iter().enumerate() {
            let t = hom_dims(e, f).map_err(|e| e.to_string())?;
            let want = if i == j { DimTable::from_pairs([(0, 1)]) } else { DimTable::new() };
            ensure!(t == want, "hom(E_{}, F_{}) = {t:?}", i + 1, j + 1);
        }
    }
    Ok(())
}

fn cotwist() -> Outcome {
    let (code, r) = report(&["cotwist-compare", &fixture("b2.json")])?;
    ensure!(code == 0, "exit {code}");
    ensure!(checks(&r).len() == 3, "{} probes", checks(&r).len());
    for c in checks(&r) {
        ensure!(c["witness"]["tables_equal"] == true, "{c}");
    }
    Ok(())
}

fn theorem() -> Outcome {
    let (code, r) = report(&["theorem-check", &fixture("b2.json"), "--d", "1", "--window", "-3:6"])?;
    ensure!(code == 0, "exit {code}");
    let pairs = check(&r, "dims")?["witness"]["pairs"].as_array().unwrap().clone();
    ensure!(pairs.iter().all(|p| p["spherical"] == p["exceptional"]), "pair mismatch");
    for (i, j, want) in [(1, 2, table(&[(0, 3)])), (1, 1, table(&[(0, 1), (1, 1)])), (2, 1, table(&[(1, 3)]))] {
        let p = pairs.iter().find(|p| p["i"] == i && p["j"] == j).ok_or(format!("no pair ({i},{j})"))?;
        ensure!(p["spherical"] == want, "({i},{j}): {p}");
    }
    Ok(())
}

fn tensor() -> Outcome {
    let b2 = fixture("b2.json");
    let (code, r) = report(&["tensor", &b2, "--max-degree", "1"])?;
    ensure!(code == 0, "tensor exit {code}");
    let totals: Vec<u64> = r["data"]["pieces"].as_array().unwrap().iter().map(|p| p["total"].as_u64().unwrap()).collect();
    ensure!(totals == [15, 96], "totals {totals:?}");
    let (code, r) = report(&["rolled-up", &b2, "--max-degree", "2"])?;
    ensure!(code == 0 && checks(&r).len() == 3, "rolled-up exit {code}");
    let (code, r) = report(&["zalgebra", &b2])?;
    ensure!(code == 0, "zalgebra exit {code}");
    ensure!(check(&r, "periodicity")?["status"] == "pass", "periodicity");
    Ok(())
}

fn gorenstein() -> Outcome {
    let b2 = fixture("b2.json");
    let (code, r) = report(&["gorenstein", &b2])?;
    ensure!(code == 0, "exit {code}");
    for i in 1..=3i64 {
        let w = &check(&r, &format!("simple {i}"))?["witness"];
        ensure!(w["route_a"] == w["route_b"], "simple {i}: routes differ");
        ensure!(w["total_a"] == 1 && w["total_b"] == 1, "simple {i}: totals");
        for entry in w["route_a"].as_array().unwrap() {
            let want = if entry["j"] == i { table(&[(3, 1)]) } else { table(&[]) };
            ensure!(entry["dims"] == want, "simple {i}: {entry}");
        }
        let shape: Vec<Vec<(i64, u64)>> = w["resolution"]["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                t["projectives"].as_array().unwrap().iter().map(|p| (p["index"].as_i64().unwrap(), p["multiplicity"].as_u64().unwrap())).collect()
            })
            .collect();
        ensure!(shape == vec![vec![(i, 1)], vec![(i - 1, 3)], vec![(i - 2, 3)], vec![(i - 3, 1)]], "simple {i}: {shape:?}");
    }
    let (code, r) = report(&["gldim", &b2])?;
    ensure!(code == 0 && r["data"]["gldim"] == 3, "gldim {code} {}", r["data"]);
    let (code, _) = report(&["gorenstein", &fixture("mkronecker-2-1.json")])?;
    ensure!(code == 1 || code == 2, "mkronecker gorenstein exit {code}");
    Ok(())
}

fn hilbert() -> Outcome {
    let (code, r) = report(&["hilbert", &fixture("b2.json")])?;
    ensure!(code == 0, "b2 exit {code}");
    let h = &r["data"];
    let want: Vec<usize> = (0..8).map(|k| binom(k + 2, 2)).collect();
    ensure!(h["values"] == json!(want), "values {}", h["values"]);
    ensure!(h["fit"]["degree"] == 2 && h["fit"]["coefficients"] == json!(["1", "3/2", "1/2"]), "fit {}", h["fit"]);
    let (code, r) = report(&["hilbert", &fixture("dualnumbers.json")])?;
    ensure!(code == 0, "dualnumbers exit {code}");
    ensure!(r["data"]["values"] == json!(vec![1; 8]), "values {}", r["data"]["values"]);
    ensure!(r["data"]["fit"]["degree"] == 0, "fit {}", r["data"]["fit"]);
    Ok(())
}

fn determinism() -> Outcome {
    let b2 = fixture("b2.json");
    let first = run(&["pipeline", &b2]);
    ensure!(first.0 == 0, "pipeline exit {}", first.0);
    let again = run(&["pipeline", &b2]);
    let single = run(&["pipeline", &b2, "--threads", "1"]);
    ensure!(first == again && first == single, "reports differ between runs");
    let generated = generate("beilinson", &[2], Q).map_err(|e| e.to_string())?;
    let text = write_presentation(&generated.extension, Some(&generated.metadata));
    ensure!(text.trim_end() == std::fs::read_to_string(&b2).unwrap().trim_end(), "fixture drifted from generator");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "dg axioms and located corruption", 5 * 3, axioms),
        (2, "simple objects are spherical", 5 * 2, sphericality),
        (3, "anticanonical quotient", 10, quotient),
        (4, "mutation round trips", 30, mutations),
        (5, "helix dimensions and Serre invariant", 60, helix_dims),
        (6, "acyclicity", 60, acyclicity),
        (7, "dual collection", 30, dual_collection),
        (8, "cotwist identity", 120, cotwist),
        (9, "spherical helix against cones", 120, theorem),
        (10, "tensor algebra", 60, tensor),
        (11, "AS-Gorenstein and global dimension", 120, gorenstein),
        (12, "Hilbert functions", 30, hilbert),
        (13, "determinism", 120, determinism),
    ];
    let mut failed = 0;
    for (n, what, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let ok = outcome.is_ok() && !over;
        if !ok {
            failed += 1;
        }
        let detail = match (&outcome, over) {
            (Err(e), _) => format!(": {e}"),
            (Ok(()), true) => ": over budget".to_string(),
            _ => String::new(),
        };
        println!(
            "criterion {n:>2} {} {:>7.2}s / {budget}s  {what}{detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 13 criteria pass", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
