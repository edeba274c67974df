use anyhow::{bail, Result};
use serde_json::{json, Value};

use helical_core::collections::{
    euler_after_left_mutation, extend_helix, is_acyclic_helix, right_dual_collection, CollectionState, Direction,
    HelixWindow,
};
use helical_core::dgpres::{cohomology_table, quotient_check, validate as validate_axioms, write_presentation, Presentation, QuotientOptions};
use helical_core::exactlin::Field;
use helical_core::families;
use helical_core::report::{Status, VerificationReport};
use helical_core::spherical::{
    cotwist_comparison, extend_spherical_helix, is_acyclic_spherical_helix, is_spherical, theorem_check,
};
use helical_core::tensoralg::{
    adjunction_check, as_gorenstein_check, build_zalgebra, global_dimension_window, hilbert_function,
    rolled_up_check, tensor_window, ZAlgebraWindow,
};
use helical_core::twcx::{TwistedComplex, Verdict};

use crate::{Loaded, Outcome, Side, DEFAULT_MAXLEN};

fn hom_tables(p: &Presentation) -> Value {
    let names = p.objects();
    cohomology_table(p)
        .iter()
        .filter(|(_, t)| !t.is_empty())
        .map(|((i, j), t)| json!({"source": names[*i], "target": names[*j], "dims": t}))
        .collect()
}

fn window_json(lo: i64, hi: i64) -> Value {
    json!([lo, hi])
}

fn exceptional(x: &Loaded) -> Result<CollectionState> {
    Ok(CollectionState::exceptional(x.directed()?, x.d)?)
}

fn spherical(x: &Loaded) -> Result<CollectionState> {
    Ok(CollectionState::spherical(x.extension.clone(), x.d)?)
}

fn build_helix(x: &Loaded, lo: i64, hi: i64) -> Result<HelixWindow> {
    Ok(extend_helix(&exceptional(x)?, lo, hi)?)
}

fn prefixed(prefix: &str, r: VerificationReport) -> VerificationReport {
    let mut out = VerificationReport::new();
    for c in r.checks {
        out.push(format!("{prefix}: {}", c.name), c.status, c.witness);
    }
    out
}

pub fn validate(x: &Loaded) -> Result<Outcome> {
    let report = validate_axioms(&x.extension);
    let data = if report.all_pass() { json!({"hom_dims": hom_tables(&x.extension)}) } else { Value::Null };
    Ok(Outcome { parameters: json!({}), report, data })
}

pub fn spherical_check(x: &Loaded) -> Result<Outcome> {
    let mut report = VerificationReport::new();
    for (i, name) in x.extension.objects().iter().enumerate() {
        let g = TwistedComplex::generator(x.extension.clone(), i)?;
        let cert = is_spherical(&g, x.d);
        let mut w = cert.to_json();
        if cert.verdict == Status::Pass {
            w["display"] = json!(format!("spherical of dimension {}", x.d));
        }
        report.push(name.clone(), cert.verdict, w);
    }
    Ok(Outcome { parameters: json!({"d": x.d}), report, data: Value::Null })
}

pub fn directed(x: &Loaded) -> Result<Outcome> {
    let a = x.directed()?;
    let mut report = validate_axioms(&a);
    report.check("directed", a.is_directed(), json!({"objects": a.objects()}));
    let presentation: Value = serde_json::from_str(&write_presentation(&a, None))?;
    Ok(Outcome { parameters: json!({}), report, data: json!({"hom_dims": hom_tables(&a), "presentation": presentation}) })
}

pub fn quotient(x: &Loaded) -> Result<Outcome> {
    let a = x.directed()?;
    let report = quotient_check(&x.extension, &a, x.d, QuotientOptions::default())?;
    Ok(Outcome { parameters: json!({"d": x.d}), report, data: Value::Null })
}

fn verdict_status(vs: &[Verdict]) -> Status {
    if vs.iter().all(|v| *v == Verdict::Equivalent) {
        Status::Pass
    } else if vs.contains(&Verdict::NotEquivalent) {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}

pub fn mutate(x: &Loaded, slot: Option<usize>, side: Option<Side>) -> Result<Outcome> {
    let c = exceptional(x)?;
    if c.len() < 2 {
        bail!("mutation needs at least two objects");
    }
    let slots: Vec<usize> = match slot {
        Some(s) if s >= 1 && s < c.len() => vec![s],
        Some(s) => bail!("slot {s} is outside 1..{}", c.len() - 1),
        None => (1..c.len()).collect(),
    };
    let chi = c.euler_matrix()?;
    let mut report = VerificationReport::new();
    let mut data = Vec::new();
    for s in slots {
        let i = s - 1;
        if side != Some(Side::Right) {
            let l = c.mutate(i, Direction::Left)?;
            let back = l.mutate(i, Direction::Right)?.compare(&c)?;
            let names: Vec<String> = back.iter().map(ToString::to_string).collect();
            report.push(format!("slot {s}: right after left"), verdict_status(&back), json!({"verdicts": names}));
            let got = l.euler_matrix()?;
            let want = euler_after_left_mutation(&chi, i);
            report.check(format!("slot {s}: euler form"), got == want, json!({"mutated": got, "predicted": want}));
            data.push(json!({"slot": s, "direction": "left", "hom_dims": l.hom_tables()?}));
        }
        if side != Some(Side::Left) {
            let r = c.mutate(i, Direction::Right)?;
            let back = r.mutate(i, Direction::Left)?.compare(&c)?;
            let names: Vec<String> = back.iter().map(ToString::to_string).collect();
            report.push(format!("slot {s}: left after right"), verdict_status(&back), json!({"verdicts": names}));
            data.push(json!({"slot": s, "direction": "right", "hom_dims": r.hom_tables()?}));
        }
    }
    Ok(Outcome { parameters: json!({"d": x.d, "slot": slot, "direction": side.map(|s| format!("{s:?}").to_lowercase())}), report, data: json!(data) })
}

pub fn dual_collection(x: &Loaded) -> Result<Outcome> {
    let (duals, report) = right_dual_collection(&exceptional(x)?)?;
    let sizes: Vec<Value> = duals.iter().map(|f| json!(f.generator_counts())).collect();
    Ok(Outcome { parameters: json!({"d": x.d}), report, data: json!({"generator_counts": sizes}) })
}

pub fn helix(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let w = build_helix(x, lo, hi)?;
    Ok(Outcome {
        parameters: json!({"d": x.d, "window": window_json(lo, hi)}),
        report: w.serre_report().clone(),
        data: w.to_json(),
    })
}

pub fn acyclic(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let w = build_helix(x, lo, hi)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi)}), report: is_acyclic_helix(&w), data: Value::Null })
}

pub fn spherical_helix(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let (w, report) = extend_spherical_helix(&spherical(x)?, lo, hi)?;
    let acyclic = is_acyclic_spherical_helix(&w);
    let mut data = w.to_json();
    data["acyclic"] = json!({"overall": acyclic.overall(), "checks": acyclic.checks});
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi)}), report, data })
}

pub fn cotwist(x: &Loaded, search: bool) -> Result<Outcome> {
    let c = spherical(x)?;
    let report = cotwist_comparison(&c, &c.members, search)?;
    Ok(Outcome { parameters: json!({"d": x.d, "search": search}), report, data: Value::Null })
}

pub fn theorem(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let report = theorem_check(x.extension.clone(), x.d, lo, hi)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi)}), report, data: Value::Null })
}

fn zalg(x: &Loaded, lo: i64, hi: i64) -> Result<ZAlgebraWindow> {
    Ok(build_zalgebra(&build_helix(x, lo, hi)?))
}

pub fn zalgebra(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let z = zalg(x, lo, hi)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi)}), report: z.report().clone(), data: z.to_json() })
}

pub fn tensor(x: &Loaded, max_degree: usize) -> Result<Outcome> {
    let (lo, hi) = x.window(None, Some((max_degree as i64 + 1) * x.ell as i64));
    let z = zalg(x, lo, hi)?;
    let t = tensor_window(&z, max_degree)?;
    let mut report = z.report().clone();
    report.extend(t.report.clone());
    Ok(Outcome {
        parameters: json!({"d": x.d, "window": window_json(lo, hi), "max_degree": max_degree}),
        report,
        data: t.to_json(),
    })
}

pub fn rolled_up(x: &Loaded, max_degree: usize) -> Result<Outcome> {
    let (lo, hi) = x.window(None, Some((max_degree as i64 + 1) * x.ell as i64));
    let z = zalg(x, lo, hi)?;
    let report = rolled_up_check(&z, max_degree)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi), "max_degree": max_degree}), report, data: Value::Null })
}

fn gorenstein_report(x: &Loaded, z: &ZAlgebraWindow) -> Result<VerificationReport> {
    let (duals, _) = right_dual_collection(&exceptional(x)?)?;
    let mut report = VerificationReport::new();
    for i in 1..=x.ell as i64 {
        let g = as_gorenstein_check(z, &duals, i, DEFAULT_MAXLEN)?;
        report.push(format!("simple {i}"), g.verdict, g.to_json());
    }
    report.extend(prefixed("adjunction", adjunction_check(z, &duals, DEFAULT_MAXLEN)?));
    Ok(report)
}

pub fn gorenstein(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let z = zalg(x, lo, hi)?;
    let report = gorenstein_report(x, &z)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi), "max_length": DEFAULT_MAXLEN}), report, data: Value::Null })
}

fn hilbert_report(z: &ZAlgebraWindow, points: usize) -> Result<(VerificationReport, Value)> {
    let h = hilbert_function(z, z.hi(), points)?;
    let mut report = VerificationReport::new();
    let status = if h.fit.is_some() { Status::Pass } else { Status::Inconclusive };
    report.push("polynomial_fit", status, h.to_json());
    Ok((report, h.to_json()))
}

pub fn hilbert(x: &Loaded, points: usize) -> Result<Outcome> {
    let l = x.ell as i64;
    let (lo, hi) = x.window(Some(3 * l - points as i64 + 1), None);
    let z = zalg(x, lo, hi)?;
    let (report, data) = hilbert_report(&z, points)?;
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi), "points": points}), report, data })
}

pub fn gldim(x: &Loaded) -> Result<Outcome> {
    let (lo, hi) = x.window(None, None);
    let z = zalg(x, lo, hi)?;
    let (status, g, res) = global_dimension_window(&z, DEFAULT_MAXLEN);
    let mut report = VerificationReport::new();
    let resolutions: Vec<Value> = res.iter().map(|r| r.to_json()).collect();
    report.push("global_dimension", status, json!({"gldim": g, "resolutions": resolutions}));
    Ok(Outcome { parameters: json!({"d": x.d, "window": window_json(lo, hi), "max_length": DEFAULT_MAXLEN}), report, data: json!({"gldim": g}) })
}

/// Runs the stages in order; after the first failure or error the rest are skipped.
pub fn pipeline(x: &Loaded, points: usize) -> Result<Outcome> {
    let l = x.ell as i64;
    let (lo, hi) = x.window(Some(3 * l - points as i64 + 1), None);
    let mut report = VerificationReport::new();
    let mut helix: Option<HelixWindow> = None;
    let mut z: Option<ZAlgebraWindow> = None;
    let mut data = serde_json::Map::new();
    let stages = [
        "validate",
        "spherical-check",
        "directed",
        "quotient-check",
        "helix",
        "acyclic",
        "zalgebra",
        "gorenstein",
        "hilbert",
    ];
    let mut stopped = false;
    for stage in stages {
        if stopped {
            report.push(stage, Status::Skipped, json!({"reason": "an earlier stage failed"}));
            continue;
        }
        let result: Result<VerificationReport> = (|| match stage {
            "validate" => Ok(validate(x)?.report),
            "spherical-check" => Ok(spherical_check(x)?.report),
            "directed" => Ok(directed(x)?.report),
            "quotient-check" => Ok(quotient(x)?.report),
            "helix" => {
                let w = build_helix(x, lo, hi)?;
                let r = w.serre_report().clone();
                helix = Some(w);
                Ok(r)
            }
            "acyclic" => Ok(is_acyclic_helix(helix.as_ref().expect("helix stage ran"))),
            "zalgebra" => {
                let zz = build_zalgebra(helix.as_ref().expect("helix stage ran"));
                let r = zz.report().clone();
                z = Some(zz);
                Ok(r)
            }
            "gorenstein" => gorenstein_report(x, z.as_ref().expect("zalgebra stage ran")),
            _ => {
                let (r, d) = hilbert_report(z.as_ref().expect("zalgebra stage ran"), points)?;
                data.insert("hilbert".into(), d);
                Ok(r)
            }
        })();
        match result {
            Ok(r) => {
                stopped = r.any_fail();
                report.extend(prefixed(stage, r));
            }
            Err(e) => {
                stopped = true;
                report.push(stage, Status::Fail, json!({"error": format!("{e:#}")}));
            }
        }
    }
    Ok(Outcome {
        parameters: json!({"d": x.d, "window": window_json(lo, hi), "points": points, "max_length": DEFAULT_MAXLEN}),
        report,
        data: Value::Object(data),
    })
}

pub fn generate(family: &str, params: &[i64], field: Field) -> Result<String> {
    let f = families::generate(family, params, field)?;
    let check = validate_axioms(&f.extension);
    if !check.all_pass() {
        bail!("generated presentation fails validation: {:?}", check.checks);
    }
    let mut s = write_presentation(&f.extension, Some(&f.metadata));
    s.push('\n');
    Ok(s)
}
