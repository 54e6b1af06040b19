//! Instance files: a versioned JSON schema carrying exact data.
//!
//! All scalars are strings `"a/b"` (or `"a"`) for rationals, or objects
//! `{"re": "a/b", "im": "c/d"}` for complex entries; floats never appear
//! in instance files, so test vectors are bit-stable. Parsing is
//! lossless and `serialize ∘ parse` is the identity on canonical form.

use crate::error::{Error, Result};
use crate::filtration::{DecFiltration, IncFiltration};
use crate::matrix::Matrix;
use crate::mhs::{GradedPolarizedMhs, Polarization};
use crate::orbits::{LocalNormalForm, NilpotentOrbit, Sl2Data};
use crate::scalar::{rat_from_str, rat_to_string, GaussianRational};
use crate::subspace::Subspace;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

type S = GaussianRational;

pub const SCHEMA_VERSION: u64 = 1;

/// In-memory form of an instance file.
#[derive(Clone)]
pub struct InstanceFile {
    pub dimension: usize,
    pub weight_filtration: IncFiltration,
    pub hodge_filtration: DecFiltration,
    pub hodge_numbers: BTreeMap<(i64, i64), usize>,
    pub polarizations: Vec<Polarization>,
    pub nilpotents: Vec<Matrix>,
    pub gamma: Vec<(Vec<u32>, Matrix)>,
    pub sl2: Option<(Vec<Matrix>, Matrix)>,
    pub biextension: Option<(Vec<S>, Vec<S>)>,
}

impl InstanceFile {
    pub fn instance(&self) -> Result<GradedPolarizedMhs> {
        GradedPolarizedMhs::new(
            self.dimension,
            self.weight_filtration.clone(),
            self.hodge_filtration.clone(),
            self.hodge_numbers.clone(),
            self.polarizations.clone(),
        )
    }

    pub fn orbit(&self) -> Result<NilpotentOrbit> {
        if self.nilpotents.is_empty() {
            return Err(Error::Parse(
                "instance file carries no nilpotent data".into(),
            ));
        }
        NilpotentOrbit::new(self.instance()?, self.nilpotents.clone())
    }

    pub fn normal_form(&self) -> LocalNormalForm {
        LocalNormalForm {
            terms: self.gamma.clone(),
        }
    }

    pub fn sl2_data(&self) -> Result<Sl2Data> {
        let (h_ops, y0) = self
            .sl2
            .clone()
            .ok_or_else(|| Error::Parse("instance file carries no sl2 data".into()))?;
        Ok(Sl2Data { h_ops, y0 })
    }

    pub fn biextension_markers(&self) -> Result<(Vec<S>, Vec<S>)> {
        self.biextension
            .clone()
            .ok_or_else(|| Error::Parse("instance file carries no biextension data".into()))
    }
}

fn scalar_to_value(x: &S) -> Value {
    if x.is_real() {
        Value::String(rat_to_string(&x.re))
    } else {
        json!({ "re": rat_to_string(&x.re), "im": rat_to_string(&x.im) })
    }
}

fn scalar_from_value(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => Ok(S::from_rat(
            rat_from_str(s).map_err(Error::Parse)?,
        )),
        Value::Number(n) => {
            // integers only; floats are rejected to keep files exact
            if let Some(i) = n.as_i64() {
                Ok(S::from_int(i))
            } else {
                Err(Error::Parse(format!(
                    "non-integer numeric scalar {n}; use rational strings"
                )))
            }
        }
        Value::Object(map) => {
            let re = map
                .get("re")
                .map(|v| scalar_from_value(v))
                .transpose()?
                .map(|s| s.re)
                .unwrap_or_else(num_traits::Zero::zero);
            let im = map
                .get("im")
                .map(|v| scalar_from_value(v))
                .transpose()?
                .map(|s| s.re)
                .unwrap_or_else(num_traits::Zero::zero);
            Ok(S::new(re, im))
        }
        other => Err(Error::Parse(format!("invalid scalar {other}"))),
    }
}

fn vector_to_value(v: &[S]) -> Value {
    Value::Array(v.iter().map(scalar_to_value).collect())
}

fn vector_from_value(v: &Value) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected a vector".into()))?
        .iter()
        .map(scalar_from_value)
        .collect()
}

fn matrix_to_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| vector_to_value(m.row(r)))
            .collect(),
    )
}

fn matrix_from_value(v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a matrix".into()))?
        .iter()
        .map(vector_from_value)
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn to_json(file: &InstanceFile) -> Value {
    let mut w = Map::new();
    for k in file.weight_filtration.jump_indices() {
        w.insert(
            k.to_string(),
            Value::Array(
                file.weight_filtration
                    .at(k)
                    .basis()
                    .rows_iter()
                    .map(vector_to_value)
                    .collect(),
            ),
        );
    }
    let mut f = Map::new();
    for p in file.hodge_filtration.jump_indices() {
        f.insert(
            p.to_string(),
            Value::Array(
                file.hodge_filtration
                    .at(p)
                    .basis()
                    .rows_iter()
                    .map(vector_to_value)
                    .collect(),
            ),
        );
    }
    let mut hodge = Map::new();
    for (&(p, q), &h) in &file.hodge_numbers {
        if h > 0 {
            hodge.insert(format!("{p},{q}"), json!(h));
        }
    }
    let mut pols = Map::new();
    for pol in &file.polarizations {
        pols.insert(
            pol.weight.to_string(),
            json!({
                "lift_basis": matrix_to_value(&pol.lifts),
                "form": matrix_to_value(&pol.form),
            }),
        );
    }
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA_VERSION));
    out.insert("dimension".into(), json!(file.dimension));
    out.insert("weight_filtration".into(), Value::Object(w));
    out.insert("hodge_filtration".into(), Value::Object(f));
    out.insert("hodge_numbers".into(), Value::Object(hodge));
    out.insert("polarizations".into(), Value::Object(pols));
    if !file.nilpotents.is_empty() {
        out.insert(
            "nilpotents".into(),
            Value::Array(file.nilpotents.iter().map(matrix_to_value).collect()),
        );
    }
    if !file.gamma.is_empty() {
        let mut g = Map::new();
        for (k, mat) in &file.gamma {
            let key = k
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            g.insert(key, matrix_to_value(mat));
        }
        out.insert("gamma".into(), Value::Object(g));
    }
    if let Some((h_ops, y0)) = &file.sl2 {
        out.insert(
            "sl2".into(),
            json!({
                "H": Value::Array(h_ops.iter().map(matrix_to_value).collect()),
                "Y0": matrix_to_value(y0),
            }),
        );
    }
    if let Some((one, dual)) = &file.biextension {
        out.insert(
            "biextension".into(),
            json!({ "one": vector_to_value(one), "one_dual": vector_to_value(dual) }),
        );
    }
    Value::Object(out)
}

pub fn from_json(v: &Value) -> Result<InstanceFile> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("instance file must be a JSON object".into()))?;
    match obj.get("schema").and_then(|s| s.as_u64()) {
        Some(SCHEMA_VERSION) => {}
        Some(other) => {
            return Err(Error::Parse(format!(
                "unsupported schema version {other}"
            )))
        }
        None => return Err(Error::Parse("missing schema version".into())),
    }
    let dimension = obj
        .get("dimension")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| Error::Parse("missing dimension".into()))? as usize;
    let parse_filtration = |key: &str| -> Result<Vec<(i64, Subspace)>> {
        let map = obj
            .get(key)
            .and_then(|m| m.as_object())
            .ok_or_else(|| Error::Parse(format!("missing {key}")))?;
        let mut pieces = Vec::new();
        for (k, rows) in map {
            let idx: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad filtration index {k:?}")))?;
            let vecs = rows
                .as_array()
                .ok_or_else(|| Error::Parse("filtration piece must be a list".into()))?
                .iter()
                .map(vector_from_value)
                .collect::<Result<Vec<_>>>()?;
            for v in &vecs {
                if v.len() != dimension {
                    return Err(Error::Parse(
                        "filtration vector has the wrong length".into(),
                    ));
                }
            }
            pieces.push((idx, Subspace::from_vectors(dimension, &vecs)));
        }
        Ok(pieces)
    };
    let weight_filtration =
        IncFiltration::from_pieces(dimension, parse_filtration("weight_filtration")?)?;
    let hodge_filtration =
        DecFiltration::from_pieces(dimension, parse_filtration("hodge_filtration")?)?;
    let mut hodge_numbers = BTreeMap::new();
    if let Some(map) = obj.get("hodge_numbers").and_then(|m| m.as_object()) {
        for (k, v) in map {
            let (p, q) = k
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad Hodge number key {k:?}")))?;
            let p: i64 = p.trim().parse().map_err(|_| {
                Error::Parse(format!("bad Hodge number key {k:?}"))
            })?;
            let q: i64 = q.trim().parse().map_err(|_| {
                Error::Parse(format!("bad Hodge number key {k:?}"))
            })?;
            let h = v
                .as_u64()
                .ok_or_else(|| Error::Parse("Hodge numbers must be integers".into()))?;
            hodge_numbers.insert((p, q), h as usize);
        }
    }
    let mut polarizations = Vec::new();
    if let Some(map) = obj.get("polarizations").and_then(|m| m.as_object()) {
        for (k, v) in map {
            let weight: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad polarization weight {k:?}")))?;
            let lifts = matrix_from_value(
                v.get("lift_basis")
                    .ok_or_else(|| Error::Parse("polarization needs lift_basis".into()))?,
            )?;
            let form = matrix_from_value(
                v.get("form")
                    .ok_or_else(|| Error::Parse("polarization needs form".into()))?,
            )?;
            polarizations.push(Polarization {
                weight,
                lifts,
                form,
            });
        }
    }
    let mut nilpotents = Vec::new();
    if let Some(list) = obj.get("nilpotents").and_then(|m| m.as_array()) {
        for m in list {
            nilpotents.push(matrix_from_value(m)?);
        }
    }
    let mut gamma = Vec::new();
    if let Some(map) = obj.get("gamma").and_then(|m| m.as_object()) {
        for (k, v) in map {
            let exps = k
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad monomial key {k:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            gamma.push((exps, matrix_from_value(v)?));
        }
    }
    let sl2 = match obj.get("sl2") {
        Some(v) => {
            let hs = v
                .get("H")
                .and_then(|h| h.as_array())
                .ok_or_else(|| Error::Parse("sl2 data needs H".into()))?
                .iter()
                .map(matrix_from_value)
                .collect::<Result<Vec<_>>>()?;
            let y0 = matrix_from_value(
                v.get("Y0")
                    .ok_or_else(|| Error::Parse("sl2 data needs Y0".into()))?,
            )?;
            Some((hs, y0))
        }
        None => None,
    };
    let biextension = match obj.get("biextension") {
        Some(v) => {
            let one = vector_from_value(
                v.get("one")
                    .ok_or_else(|| Error::Parse("biextension needs one".into()))?,
            )?;
            let dual = vector_from_value(
                v.get("one_dual")
                    .ok_or_else(|| Error::Parse("biextension needs one_dual".into()))?,
            )?;
            Some((one, dual))
        }
        None => None,
    };
    Ok(InstanceFile {
        dimension,
        weight_filtration,
        hodge_filtration,
        hodge_numbers,
        polarizations,
        nilpotents,
        gamma,
        sl2,
        biextension,
    })
}

pub fn parse_str(s: &str) -> Result<InstanceFile> {
    from_json(&serde_json::from_str(s)?)
}

pub fn to_string_pretty(file: &InstanceFile) -> String {
    serde_json::to_string_pretty(&to_json(file)).expect("instance files serialize")
}

/// Bundle an orbit plus optional extras into a file.
pub fn file_from_parts(
    inst: &GradedPolarizedMhs,
    nilpotents: &[Matrix],
    gamma: &[(Vec<u32>, Matrix)],
    sl2: Option<&Sl2Data>,
    biext: Option<(&[S], &[S])>,
) -> InstanceFile {
    InstanceFile {
        dimension: inst.dim(),
        weight_filtration: inst.weight_filtration().clone(),
        hodge_filtration: inst.hodge_filtration().clone(),
        hodge_numbers: inst.hodge_numbers().clone(),
        polarizations: inst
            .weight_filtration()
            .weights()
            .iter()
            .filter_map(|w| inst.polarization(*w).cloned())
            .collect(),
        nilpotents: nilpotents.to_vec(),
        gamma: gamma.to_vec(),
        sl2: sl2.map(|s| (s.h_ops.clone(), s.y0.clone())),
        biextension: biext.map(|(a, b)| (a.to_vec(), b.to_vec())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn round_trip_noninvariant_orbit() {
        let orbit = gallery::noninvariant_limit_orbit();
        let sl2 = gallery::noninvariant_sl2();
        let file = file_from_parts(&orbit.instance, &orbit.nilpotents, &[], Some(&sl2), None);
        let text = to_string_pretty(&file);
        let parsed = parse_str(&text).unwrap();
        assert_eq!(parsed.dimension, 4);
        assert_eq!(parsed.weight_filtration, *orbit.instance.weight_filtration());
        assert_eq!(parsed.hodge_filtration, *orbit.instance.hodge_filtration());
        assert_eq!(parsed.nilpotents, orbit.nilpotents);
        let (hs, y0) = parsed.sl2.clone().unwrap();
        assert_eq!(hs, sl2.h_ops);
        assert_eq!(y0, sl2.y0);
        // canonical form is a fixed point of serialize ∘ parse
        let text2 = to_string_pretty(&parsed);
        assert_eq!(text, text2);
        parsed.orbit().unwrap();
    }

    #[test]
    fn round_trip_with_gamma_and_biext() {
        let (orbit, lnf) = gallery::prefactor_two_variable();
        let file = file_from_parts(
            &orbit.instance,
            &orbit.nilpotents,
            &lnf.terms,
            Some(&gallery::prefactor_sl2()),
            None,
        );
        let parsed = parse_str(&to_string_pretty(&file)).unwrap();
        assert_eq!(parsed.normal_form().terms, lnf.terms);

        let lam = S::new(
            num_traits::Zero::zero(),
            crate::scalar::Rat::new(2.into(), 7.into()),
        );
        let (inst, one, dual) = gallery::height_pairing_rank4(lam);
        let file = file_from_parts(&inst, &[], &[], None, Some((&one, &dual)));
        let parsed = parse_str(&to_string_pretty(&file)).unwrap();
        let (o2, d2) = parsed.biextension_markers().unwrap();
        assert_eq!(o2, one);
        assert_eq!(d2, dual);
        assert!(parsed.orbit().is_err());
    }

    #[test]
    fn rejects_bad_scalars_and_schema() {
        assert!(parse_str("{\"schema\": 99}").is_err());
        let bad = r#"{"schema":1,"dimension":1,
            "weight_filtration": {"0": [["1/0"]]},
            "hodge_filtration": {"0": [["1"]]},
            "hodge_numbers": {"0,0": 1},
            "polarizations": {"0": {"lift_basis": [["1"]], "form": [["1"]]}}}"#;
        assert!(parse_str(bad).is_err());
        let float = r#"{"schema":1,"dimension":1,
            "weight_filtration": {"0": [[0.5]]},
            "hodge_filtration": {"0": [["1"]]},
            "hodge_numbers": {"0,0": 1},
            "polarizations": {"0": {"lift_basis": [["1"]], "form": [["1"]]}}}"#;
        assert!(parse_str(float).is_err());
    }
}
