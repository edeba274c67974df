use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::collections::is_acyclic_helix;
use crate::report::{DimTable, Status, VerificationReport};
use crate::twcx::{hom_dims, TwistedComplex};

use super::{simple_resolution, Resolution, TensorError, ZAlgebraWindow};

#[derive(Clone, Debug)]
pub struct GorensteinCertificate {
    pub index: i64,
    /// `hom(E_j, F_i)[−d−2]` for `j ∈ [1, ℓ]`
    pub route_a: BTreeMap<i64, DimTable>,
    /// `Hom^k(S_i, P_j)` read off the minimal resolution
    pub route_b: Option<BTreeMap<i64, DimTable>>,
    pub total_a: usize,
    pub total_b: Option<usize>,
    pub resolution: Resolution,
    pub verdict: Status,
    pub reason: Option<String>,
}

impl GorensteinCertificate {
    pub fn to_json(&self) -> Value {
        let tab = |m: &BTreeMap<i64, DimTable>| m.iter().map(|(j, t)| json!({"j": j, "dims": t})).collect::<Vec<_>>();
        json!({
            "index": self.index,
            "route_a": tab(&self.route_a),
            "route_b": self.route_b.as_ref().map(tab),
            "total_a": self.total_a,
            "total_b": self.total_b,
            "resolution": self.resolution.to_json(),
            "verdict": self.verdict,
            "reason": self.reason,
        })
    }
}

fn route_a(z: &ZAlgebraWindow, duals: &[TwistedComplex], i: i64) -> Result<BTreeMap<i64, DimTable>, TensorError> {
    let w = z.helix();
    (1..=z.ell() as i64)
        .map(|j| {
            let t = hom_dims(w.object(j).expect("foundation"), &duals[(i - 1) as usize])?;
            Ok((j, t.shifted(-z.d() - 2)))
        })
        .collect()
}

/// Route a: `hom(E_j, F_i)[−d−2]` over the base. Route b: the minimal resolution of `S_i`.
/// Passes when the helix is acyclic on the window, both totals are 1 and the routes agree.
pub fn as_gorenstein_check(
    z: &ZAlgebraWindow,
    duals: &[TwistedComplex],
    i: i64,
    maxlen: usize,
) -> Result<GorensteinCertificate, TensorError> {
    let ra = route_a(z, duals, i)?;
    let total_a = ra.values().map(DimTable::total).sum();
    let resolution = simple_resolution(z, i, maxlen);
    let rb = (resolution.status == Status::Pass).then(|| resolution.ext_table(z)).flatten();
    let total_b = rb.as_ref().map(|m| m.values().map(DimTable::total).sum());
    let acyclic = is_acyclic_helix(z.helix()).all_pass();
    let (verdict, reason) = if !acyclic {
        (Status::Inconclusive, Some("helix is not acyclic on the window".to_string()))
    } else if rb.is_none() {
        (Status::Inconclusive, resolution.reason.clone())
    } else if rb.as_ref() != Some(&ra) {
        (Status::Fail, Some("route disagreement".to_string()))
    } else if total_a != 1 {
        (Status::Fail, Some(format!("total {total_a} is not 1")))
    } else {
        (Status::Pass, None)
    };
    Ok(GorensteinCertificate { index: i, route_a: ra, route_b: rb, total_a, total_b, resolution, verdict, reason })
}

/// `Hom^•(S_i, P_j)` from the resolution against `hom(E_j, F_i)[−d−2]` for all `i, j` in the foundation.
pub fn adjunction_check(
    z: &ZAlgebraWindow,
    duals: &[TwistedComplex],
    maxlen: usize,
) -> Result<VerificationReport, TensorError> {
    let mut r = VerificationReport::new();
    for i in 1..=z.ell() as i64 {
        let ra = route_a(z, duals, i)?;
        let res = simple_resolution(z, i, maxlen);
        match (res.status == Status::Pass).then(|| res.ext_table(z)).flatten() {
            Some(rb) => {
                for (j, a) in &ra {
                    let b = &rb[j];
                    r.check(format!("i={i} j={j}"), a == b, json!({"resolution": b, "dual": a}));
                }
            }
            None => r.push(format!("i={i}"), Status::Inconclusive, json!({"reason": res.reason})),
        }
    }
    Ok(r)
}
