//! JSON term lists: `[{"exp": [u0, ..., un], "c": coefficient}, ...]`.
//!
//! A coefficient is an integer (JSON number of any size, or a decimal
//! string), or for extension fields a list of integers giving the
//! coefficient as a polynomial in `t`, ascending.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exp: Vec<u32>,
    /// Coefficient as a polynomial in `t`, ascending; integers have length 1.
    pub c: Vec<BigInt>,
}

fn parse_int(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => {
            return Err(Error::InvalidInput(format!(
                "coefficient must be an integer, got {other}"
            )))
        }
    };
    text.parse::<BigInt>()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {text}")))
}

pub fn parse_terms(v: &Value) -> Result<Vec<Term>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("polynomial must be a list of terms".into()))?;
    arr.iter()
        .map(|t| {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidInput(format!("term without \"exp\": {t}")))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| Error::InvalidInput(format!("bad exponent {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            let c = match t.get("c") {
                None => return Err(Error::InvalidInput(format!("term without \"c\": {t}"))),
                Some(Value::Array(cs)) => cs.iter().map(parse_int).collect::<Result<Vec<_>>>()?,
                Some(x) => vec![parse_int(x)?],
            };
            if c.is_empty() {
                return Err(Error::InvalidInput("empty coefficient list".into()));
            }
            Ok(Term { exp, c })
        })
        .collect()
}

pub fn terms_to_json(terms: &[Term]) -> Value {
    let num = |x: &BigInt| -> Value {
        serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
    };
    Value::Array(
        terms
            .iter()
            .map(|t| {
                let c = if t.c.len() == 1 {
                    num(&t.c[0])
                } else {
                    Value::Array(t.c.iter().map(num).collect())
                };
                json!({"exp": t.exp, "c": c})
            })
            .collect(),
    )
}
