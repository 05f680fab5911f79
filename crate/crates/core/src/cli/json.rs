//! Versioned JSON exchange of ordinals, series, finite-support series, certificates and cuts.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::cli::dsl::parse_series_rank;
use crate::error::{HahnError, Result};
use crate::exponents::Exponent;
use crate::factor::{Certificate, Criterion, Verdict};
use crate::grpalg::FracPoly;
use crate::ordinal::Ordinal;
use crate::series::closed::ClosedSeries;
use crate::supcomp::{Cut, Tail};

pub const SCHEMA: &str = "hahnfactor/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Ordinal(Ordinal),
    Series(ClosedSeries),
    Poly(FracPoly),
    Certificate(Certificate),
    Cut(Cut),
}

pub fn certificate_json(c: &Certificate) -> Json {
    json!({
        "verdict": c.verdict.to_string(),
        "criterion": c.criterion.to_string(),
        "witnesses": c.witnesses,
        "prefixChecked": c.prefix_checked,
    })
}

pub fn cut_json(c: &Cut) -> Json {
    let tail = match c.tail {
        Tail::Below => "below",
        Tail::Exact => "exact",
        Tail::Above => "above",
    };
    json!({ "vals": c.vals.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "tail": tail, "text": c.to_string() })
}

pub fn export_json(v: &Value) -> Json {
    let mut obj = match v {
        Value::Ordinal(o) => json!({ "kind": "ordinal", "value": o.to_string() }),
        Value::Series(s) => json!({ "kind": "series", "rank": s.rank, "value": s.to_string() }),
        Value::Poly(p) => json!({ "kind": "poly", "rank": p.rank, "value": p.to_series().to_string() }),
        Value::Certificate(c) => {
            let mut o = certificate_json(c);
            o["kind"] = json!("certificate");
            o
        }
        Value::Cut(c) => {
            let mut o = cut_json(c);
            o["kind"] = json!("cut");
            o
        }
    };
    obj["schema"] = json!(SCHEMA);
    obj
}

pub fn export_string(v: &Value) -> String {
    serde_json::to_string(&export_json(v)).expect("serialisable")
}

fn field<'a>(o: &'a Map<String, Json>, k: &str) -> Result<&'a Json> {
    o.get(k).ok_or_else(|| HahnError::Schema(format!("missing field '{k}'")))
}

fn str_field<'a>(o: &'a Map<String, Json>, k: &str) -> Result<&'a str> {
    field(o, k)?.as_str().ok_or_else(|| HahnError::Schema(format!("field '{k}' is not a string")))
}

fn rank_field(o: &Map<String, Json>) -> Result<usize> {
    field(o, "rank")?
        .as_u64()
        .filter(|&r| r >= 1)
        .map(|r| r as usize)
        .ok_or_else(|| HahnError::Schema("field 'rank' must be a positive integer".into()))
}

fn import_certificate(o: &Map<String, Json>) -> Result<Certificate> {
    let verdict = Verdict::parse(str_field(o, "verdict")?).ok_or_else(|| HahnError::Schema("unknown verdict".into()))?;
    let criterion =
        Criterion::parse(str_field(o, "criterion")?).ok_or_else(|| HahnError::Schema("unknown criterion".into()))?;
    let mut witnesses = BTreeMap::new();
    if let Some(w) = o.get("witnesses") {
        let w = w.as_object().ok_or_else(|| HahnError::Schema("witnesses must be an object".into()))?;
        for (k, v) in w {
            let v = v.as_str().ok_or_else(|| HahnError::Schema("witness values must be strings".into()))?;
            witnesses.insert(k.clone(), v.to_string());
        }
    }
    let prefix_checked = match o.get("prefixChecked") {
        None | Some(Json::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| HahnError::Schema("prefixChecked must be an integer".into()))? as usize),
    };
    Ok(Certificate { verdict, criterion, witnesses, prefix_checked })
}

fn import_cut(o: &Map<String, Json>) -> Result<Cut> {
    let vals = field(o, "vals")?
        .as_array()
        .ok_or_else(|| HahnError::Schema("vals must be an array".into()))?
        .iter()
        .map(|v| {
            let s = v.as_str().ok_or_else(|| HahnError::Schema("cut values must be strings".into()))?;
            Exponent::parse(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = match str_field(o, "tail")? {
        "below" => Tail::Below,
        "exact" => Tail::Exact,
        "above" => Tail::Above,
        t => return Err(HahnError::Schema(format!("unknown cut tail '{t}'"))),
    };
    Ok(Cut { vals, tail })
}

pub fn import_json(text: &str) -> Result<Value> {
    let j: Json = serde_json::from_str(text).map_err(|e| HahnError::Schema(e.to_string()))?;
    let o = j.as_object().ok_or_else(|| HahnError::Schema("expected a JSON object".into()))?;
    let schema = str_field(o, "schema")?;
    if schema != SCHEMA {
        return Err(HahnError::Schema(format!("unsupported schema '{schema}'")));
    }
    match str_field(o, "kind")? {
        "ordinal" => Ok(Value::Ordinal(Ordinal::parse(str_field(o, "value")?)?)),
        "series" => Ok(Value::Series(parse_series_rank(str_field(o, "value")?, rank_field(o)?)?)),
        "poly" => {
            let s = parse_series_rank(str_field(o, "value")?, rank_field(o)?)?;
            Ok(Value::Poly(FracPoly::from_series(&s).ok_or_else(|| HahnError::Schema("poly has infinite support".into()))?))
        }
        "certificate" => Ok(Value::Certificate(import_certificate(o)?)),
        "cut" => Ok(Value::Cut(import_cut(o)?)),
        k => Err(HahnError::Schema(format!("unknown kind '{k}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::dsl::parse_series;

    fn round(v: Value) {
        let back = import_json(&export_string(&v)).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn round_trips() {
        round(Value::Ordinal(Ordinal::parse("w^2 + w*2 + 1").unwrap()));
        round(Value::Series(
            parse_series("ladder(limit=-1; step=harm(1)) + ladder(limit=0; step=geo(1, 1/3); coef=const(2))").unwrap(),
        ));
        round(Value::Series(parse_series("t^([0, -1])").unwrap()));
        round(Value::Poly(FracPoly::from_series(&parse_series("1 - 2*t^(-sqrt(2))").unwrap()).unwrap()));
        round(Value::Certificate(Certificate::certified(Criterion::ThmF).with("degree", 1)));
        round(Value::Cut(Cut::below(vec![Exponent::parse("-sqrt(2)").unwrap()])));
    }

    #[test]
    fn unknown_schema_rejected() {
        let text = r#"{"schema": "hahnfactor/2", "kind": "ordinal", "value": "1"}"#;
        assert!(matches!(import_json(text), Err(HahnError::Schema(_))));
    }
}
