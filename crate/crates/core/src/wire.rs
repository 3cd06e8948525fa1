//! Text and JSON encodings shared by the CLI: exact integers and rationals,
//! transfer times as multiples of pi, selectors and weight lists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{parse_rational, ExactInt, ExactRat};
use crate::transfer::PstCertificate;
use crate::unweighted::{SearchHit, UnionSelector, UnionVerdict};

/// JSON number when it fits `i64`, decimal string otherwise.
pub fn int_json(n: &ExactInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Reduced `{"num", "den"}`.
pub fn rat_json(q: &ExactRat) -> Value {
    json!({ "num": int_json(q.numer()), "den": int_json(q.denom()) })
}

fn json_int(v: &Value) -> Result<ExactInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::invalid(format!("expected an integer, got {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::invalid(format!("expected an integer, got {s:?}"))),
        other => Err(Error::invalid(format!("expected an integer, got {other}"))),
    }
}

/// Accepts `{"num", "den"}`, a JSON integer, or a string like `"-2/3"`.
pub fn json_rat(v: &Value) -> Result<ExactRat> {
    match v {
        Value::Object(map) => {
            let num = json_int(map.get("num").ok_or_else(|| Error::invalid("missing \"num\""))?)?;
            let den = json_int(map.get("den").ok_or_else(|| Error::invalid("missing \"den\""))?)?;
            if den.is_zero() {
                return Err(Error::invalid("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        Value::String(s) => parse_rational(s),
        other => json_int(other).map(BigRational::from_integer),
    }
}

/// `tau / pi` as text: `"pi"`, `"pi/4"`, `"3*pi/4"`, `"2*pi"`.
pub fn time_text(tau_over_pi: &ExactRat) -> String {
    let (n, d) = (tau_over_pi.numer(), tau_over_pi.denom());
    let head = if n.is_one() { "pi".to_string() } else { format!("{n}*pi") };
    if d.is_one() {
        head
    } else {
        format!("{head}/{d}")
    }
}

pub fn time_json(tau_over_pi: &ExactRat) -> Value {
    json!({ "tau": time_text(tau_over_pi), "tau_over_pi": rat_json(tau_over_pi) })
}

/// Parse a time: `pi`, `pi/4`, `3pi/4`, `3*pi/4`, `2*pi`, or a JSON
/// `{"num","den"}` of `tau / pi`. Result is `tau / pi`, which must be
/// positive.
pub fn parse_time(text: &str) -> Result<ExactRat> {
    let t = text.trim();
    let q = if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::invalid(format!("bad time JSON: {e}")))?;
        json_rat(&v)?
    } else {
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        let (num_part, den_part) = match lower.split_once('/') {
            Some((a, b)) => (a.to_string(), Some(b.to_string())),
            None => (lower.clone(), None),
        };
        let coeff = num_part
            .strip_suffix("pi")
            .ok_or_else(|| Error::invalid(format!("time {text:?} must be a rational multiple of pi, e.g. \"pi/4\"")))?;
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
        let num: BigInt = if coeff.is_empty() {
            BigInt::one()
        } else {
            coeff.parse().map_err(|_| Error::invalid(format!("bad time {text:?}")))?
        };
        let den: BigInt = match den_part {
            Some(d) => d.parse().map_err(|_| Error::invalid(format!("bad time {text:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::invalid(format!("bad time {text:?}")));
        }
        BigRational::new(num, den)
    };
    if !q.is_positive() {
        return Err(Error::invalid(format!("time must be positive, got {text:?}")));
    }
    Ok(q)
}

fn split_list(text: &str) -> Vec<String> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// `"0,2/3,1/6"` or a JSON array of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<ExactRat>> {
    let t = text.trim();
    if t.starts_with('[') && t.contains('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::invalid(format!("bad JSON list: {e}")))?;
        let arr = v.as_array().ok_or_else(|| Error::invalid("expected a JSON array"))?;
        return arr.iter().map(json_rat).collect();
    }
    split_list(t).iter().map(|s| parse_rational(s.trim_matches('"'))).collect()
}

/// `"1,1"`, `"[1, 1]"`.
pub fn parse_int_list(text: &str) -> Result<Vec<ExactInt>> {
    split_list(text)
        .iter()
        .map(|s| s.trim_matches('"').parse().map_err(|_| Error::invalid(format!("bad integer {s:?}"))))
        .collect()
}

/// `"[7,11,13]"` or `"7,11,13"`.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    split_list(text)
        .iter()
        .map(|s| s.parse().map_err(|_| Error::invalid(format!("bad index {s:?}"))))
        .collect()
}

pub fn selector_json(u: &UnionSelector) -> Value {
    json!(u.classes())
}

pub fn certificate_json(c: &PstCertificate) -> Value {
    json!({
        "verdict": c.verdict,
        "time": c.time_over_pi.as_ref().map(time_json),
        "parity_evidence": c.parity_evidence.iter().map(rat_json).collect::<Vec<_>>(),
        "failing_s": c.failing_s,
        "pair": c.pair_note,
    })
}

pub fn union_verdict_json(v: &UnionVerdict) -> Value {
    json!({
        "certificate": certificate_json(&v.certificate),
        "differences": v.differences.iter().map(int_json).collect::<Vec<_>>(),
        "h": v.h,
        "z": v.z.as_ref().map(int_json),
    })
}

pub fn hit_json(h: &SearchHit) -> Value {
    json!({
        "selector": selector_json(&h.selector),
        "h": h.h,
        "z": int_json(&h.z),
        "time": time_json(&h.time_over_pi()),
    })
}

/// 17 significant digits.
pub fn decimal(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exact value of a decimal string produced by [`decimal`].
fn decimal_value(text: &str) -> Option<ExactRat> {
    let (mant, exp) = text.split_once('e')?;
    let exp: i64 = exp.parse().ok()?;
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let frac_len = mant.split_once('.').map_or(0, |(_, f)| f.len()) as i64;
    let mut q = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exp - frac_len;
    let ten = BigRational::from_integer(BigInt::from(10));
    q *= ten.pow(shift as i32);
    Some(if neg { -q } else { q })
}

/// `(decimal, exact text, inexact)` columns for a CSV cell.
pub fn csv_rational(q: &ExactRat) -> (String, String, bool) {
    let d = decimal(crate::exactmath::rat_to_f64(q));
    let inexact = decimal_value(&d).as_ref() != Some(q);
    (d, q.to_string(), inexact)
}
