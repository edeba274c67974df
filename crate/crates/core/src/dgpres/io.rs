//! JSON presentation files.
//!
//! Object indices in keys are zero-based positions in `objects`. A differential is a
//! `dim × dim` matrix whose entry `[r][s]` is the coefficient of `e_r` in `d(e_s)`. A
//! composition block `"i,j,k"` is indexed `[a][b][c]`: the coefficient of `e_c ∈ hom(i,k)`
//! in `g_a ∘ f_b` with `g_a ∈ hom(j,k)` and `f_b ∈ hom(i,j)`. Absent keys mean zero.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::exactlin::{Field, SparseVector};

use super::presentation::{BasisElement, HomSpace, Presentation};
use super::PresentationError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub family: String,
    pub params: Vec<i64>,
    pub ell: usize,
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub metadata: Option<Metadata>,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    #[serde(rename = "type")]
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    name: String,
    degree: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileJson {
    field: FieldJson,
    objects: Vec<String>,
    homs: Map<String, Value>,
    #[serde(default)]
    differentials: Map<String, Value>,
    #[serde(default)]
    compositions: Map<String, Value>,
    units: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    metadata: Option<Metadata>,
}

fn shape(msg: impl Into<String>) -> PresentationError {
    PresentationError::Shape(msg.into())
}

fn parse_key(key: &str, arity: usize, l: usize) -> Result<Vec<usize>, PresentationError> {
    let parts: Vec<usize> = key
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| shape(format!("bad key {key:?}")))?;
    if parts.len() != arity || parts.iter().any(|&x| x >= l) {
        return Err(shape(format!("bad key {key:?} for {l} objects")));
    }
    Ok(parts)
}

fn parse_scalar(field: Field, v: &Value) -> Result<crate::exactlin::Scalar, PresentationError> {
    match v {
        Value::String(s) => Ok(field.parse(s)?),
        Value::Number(n) if n.is_i64() => Ok(field.from_i64(n.as_i64().unwrap())),
        _ => Err(shape(format!("scalar must be a fraction string, got {v}"))),
    }
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, PresentationError> {
    v.as_array().ok_or_else(|| shape(format!("{what} must be an array")))
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, PresentationError> {
    let raw: FileJson = serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
    let field = match (raw.field.kind.as_str(), raw.field.p) {
        ("rational", None) => Field::Rational,
        ("prime", Some(p)) => Field::prime(p)?,
        _ => return Err(shape("field must be {\"type\":\"rational\"} or {\"type\":\"prime\",\"p\":N}")),
    };
    let l = raw.objects.len();
    let mut homs = vec![HomSpace::default(); l * l];
    for (key, value) in &raw.homs {
        let ij = parse_key(key, 2, l)?;
        let basis: Vec<BasisJson> =
            serde_json::from_value(value.clone()).map_err(|e| shape(format!("homs[{key}]: {e}")))?;
        homs[ij[0] * l + ij[1]] =
            HomSpace::new(basis.into_iter().map(|b| BasisElement { name: b.name, degree: b.degree }).collect());
    }
    let mut units = Vec::with_capacity(l);
    if raw.units.len() != l {
        return Err(shape(format!("expected {l} units, got {}", raw.units.len())));
    }
    for (i, name) in raw.units.iter().enumerate() {
        let u = homs[i * l + i].index_of(name).ok_or_else(|| PresentationError::UnknownUnit(name.clone()))?;
        units.push(u);
    }
    let mut p = Presentation::new(field, raw.objects.clone(), homs, units)?;

    for (key, value) in &raw.differentials {
        let ij = parse_key(key, 2, l)?;
        let n = p.hom(ij[0], ij[1]).dim();
        let rows = as_array(value, "differential")?;
        if rows.len() != n {
            return Err(shape(format!("differentials[{key}] has {} rows, expected {n}", rows.len())));
        }
        let mut cols: Vec<Vec<(usize, crate::exactlin::Scalar)>> = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            let row = as_array(row, "differential row")?;
            if row.len() != n {
                return Err(shape(format!("differentials[{key}] row {r} has {} entries, expected {n}", row.len())));
            }
            for (s, x) in row.iter().enumerate() {
                let x = parse_scalar(field, x)?;
                if !x.is_zero() {
                    cols[s].push((r, x));
                }
            }
        }
        for (s, col) in cols.into_iter().enumerate() {
            p.set_differential(ij[0], ij[1], s, SparseVector::from_sorted(col));
        }
    }

    for (key, value) in &raw.compositions {
        let ijk = parse_key(key, 3, l)?;
        let (i, j, k) = (ijk[0], ijk[1], ijk[2]);
        let (na, nb, nc) = (p.hom(j, k).dim(), p.hom(i, j).dim(), p.hom(i, k).dim());
        let outer = as_array(value, "composition")?;
        if outer.len() != na {
            return Err(shape(format!("compositions[{key}] has outer length {}, expected {na}", outer.len())));
        }
        for (a, mid) in outer.iter().enumerate() {
            let mid = as_array(mid, "composition")?;
            if mid.len() != nb {
                return Err(shape(format!("compositions[{key}][{a}] has length {}, expected {nb}", mid.len())));
            }
            for (b, inner) in mid.iter().enumerate() {
                let inner = as_array(inner, "composition")?;
                if inner.len() != nc {
                    return Err(shape(format!(
                        "compositions[{key}][{a}][{b}] has length {}, expected {nc}",
                        inner.len()
                    )));
                }
                let entries = inner
                    .iter()
                    .enumerate()
                    .map(|(c, x)| parse_scalar(field, x).map(|x| (c, x)))
                    .collect::<Result<Vec<_>, _>>()?;
                p.set_composition(i, j, k, a, b, SparseVector::from_sorted(entries));
            }
        }
    }
    Ok(PresentationFile { presentation: p, metadata: raw.metadata })
}

/// Serializes compactly with keys in numeric order; zero blocks are omitted.
pub fn write_presentation(p: &Presentation, metadata: Option<&Metadata>) -> String {
    let l = p.len();
    let field = match p.field() {
        Field::Rational => FieldJson { kind: "rational".into(), p: None },
        Field::Prime(q) => FieldJson { kind: "prime".into(), p: Some(q as u64) },
    };
    let zero = p.field().zero();
    let mut homs = Map::new();
    let mut diffs = Map::new();
    for i in 0..l {
        for j in 0..l {
            let h = p.hom(i, j);
            if h.dim() == 0 {
                continue;
            }
            let basis: Vec<BasisJson> =
                h.basis.iter().map(|e| BasisJson { name: e.name.clone(), degree: e.degree }).collect();
            homs.insert(format!("{i},{j}"), serde_json::to_value(basis).unwrap());
            if !h.has_zero_differential() {
                let n = h.dim();
                let mut m = vec![vec![zero.to_string(); n]; n];
                for (s, col) in h.diff.iter().enumerate() {
                    for (r, x) in col.iter() {
                        m[r][s] = x.to_string();
                    }
                }
                diffs.insert(format!("{i},{j}"), serde_json::to_value(m).unwrap());
            }
        }
    }
    let mut comps = Map::new();
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let t = p.table(i, j, k);
                if t.products.iter().all(SparseVector::is_zero) {
                    continue;
                }
                let nc = p.hom(i, k).dim();
                let block: Vec<Vec<Vec<String>>> = (0..t.left_dim)
                    .map(|a| {
                        (0..t.right_dim)
                            .map(|b| {
                                let mut row = vec![zero.to_string(); nc];
                                for (c, x) in t.get(a, b).iter() {
                                    row[c] = x.to_string();
                                }
                                row
                            })
                            .collect()
                    })
                    .collect();
                comps.insert(format!("{i},{j},{k}"), serde_json::to_value(block).unwrap());
            }
        }
    }
    let units = (0..l).map(|i| p.hom(i, i).basis[p.unit(i)].name.clone()).collect();
    let file = FileJson {
        field,
        objects: p.objects().to_vec(),
        homs,
        differentials: diffs,
        compositions: comps,
        units,
        metadata: metadata.cloned(),
    };
    let mut s = serde_json::to_string(&file).unwrap();
    s.push('\n');
    s
}
