//! JSON job files and their conversion into library inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde_json::{Map, Value};

use arzeta::ms::Engine;
use arzeta::poly::{parse_terms, HomogPoly, SparsePoly, Term};
use arzeta::{IntegerRing, RingCtx, RingElem};

/// Error surfaced to the user as `{"error": {"kind", "message"}}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new("invalid_input", message)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({"error": {"kind": self.kind, "message": self.message}})
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<arzeta::Error> for CliError {
    fn from(e: arzeta::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::invalid(format!("malformed JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    Single(Engine),
    Art,
}

impl FromStr for EngineChoice {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s.eq_ignore_ascii_case("art") {
            return Ok(EngineChoice::Art);
        }
        s.parse::<Engine>()
            .map(EngineChoice::Single)
            .map_err(|_| CliError::invalid(format!("unknown engine {s:?}; expected naive, linear, sqrt or art")))
    }
}

/// A parsed job. Command-line flags are merged in before use.
#[derive(Clone, Debug, Default)]
pub struct Job {
    pub p: Option<u64>,
    pub a: usize,
    pub fbar: Option<Vec<u64>>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub terms: Option<Vec<Term>>,
    pub engine: Option<EngineChoice>,
    pub lambda: Option<u32>,
    pub d_bound: Option<usize>,
    pub r: Option<usize>,
    pub n_bound: Option<u64>,
    pub vars: Option<usize>,
    pub generators: Option<Vec<Vec<Term>>>,
}

fn get_u64(obj: &Map<String, Value>, key: &str) -> CliResult<Option<u64>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| CliError::invalid(format!("\"{key}\" must be a non-negative integer, got {v}"))),
    }
}

fn narrow<T: TryFrom<u64>>(v: Option<u64>, key: &str) -> CliResult<Option<T>> {
    v.map(|x| T::try_from(x).map_err(|_| CliError::invalid(format!("\"{key}\" = {x} is out of range"))))
        .transpose()
}

impl Job {
    pub fn from_json(text: &str) -> CliResult<Job> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v
            .as_object()
            .ok_or_else(|| CliError::invalid("job must be a JSON object"))?;
        let fbar = match obj.get("fbar") {
            None | Some(Value::Null) => None,
            Some(Value::Array(cs)) => Some(
                cs.iter()
                    .map(|c| c.as_u64().ok_or_else(|| CliError::invalid(format!("bad fbar coefficient {c}"))))
                    .collect::<CliResult<Vec<u64>>>()?,
            ),
            Some(other) => return Err(CliError::invalid(format!("\"fbar\" must be a list, got {other}"))),
        };
        let terms = match obj.get("F") {
            None | Some(Value::Null) => None,
            Some(f) => Some(parse_terms(f)?),
        };
        let generators = match obj.get("generators") {
            None | Some(Value::Null) => None,
            Some(Value::Array(gs)) => Some(gs.iter().map(parse_terms).collect::<arzeta::Result<Vec<_>>>()?),
            Some(other) => return Err(CliError::invalid(format!("\"generators\" must be a list, got {other}"))),
        };
        let engine = match obj.get("engine") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.parse()?),
            Some(other) => return Err(CliError::invalid(format!("\"engine\" must be a string, got {other}"))),
        };
        Ok(Job {
            p: get_u64(obj, "p")?,
            a: narrow(get_u64(obj, "a")?, "a")?.unwrap_or(1),
            fbar,
            n: narrow(get_u64(obj, "n")?, "n")?,
            d: narrow(get_u64(obj, "d")?, "d")?,
            terms,
            engine,
            lambda: narrow(get_u64(obj, "lambda")?, "lambda")?,
            d_bound: narrow(get_u64(obj, "D")?, "D")?,
            r: narrow(get_u64(obj, "r")?, "r")?,
            n_bound: get_u64(obj, "N")?,
            vars: narrow(get_u64(obj, "vars")?, "vars")?,
            generators,
        })
    }

    pub fn require_p(&self) -> CliResult<u64> {
        self.p.ok_or_else(|| CliError::invalid("job needs \"p\""))
    }

    pub fn require_r(&self) -> CliResult<usize> {
        match self.r {
            Some(0) => Err(CliError::invalid("r must be at least 1")),
            Some(r) => Ok(r),
            None => Err(CliError::invalid("give r in the job or with --r")),
        }
    }

    /// `F_q`-structure at precision `λ`.
    pub fn ctx(&self, lambda: u32) -> CliResult<RingCtx> {
        let p = self.require_p()?;
        Ok(match &self.fbar {
            Some(fbar) => RingCtx::new(p, self.a, lambda, fbar)?,
            None if self.a == 1 => RingCtx::prime_field(p, lambda)?,
            None => return Err(CliError::invalid("\"fbar\" is required when a > 1")),
        })
    }

    fn shape(&self) -> CliResult<(&[Term], usize, usize)> {
        let terms = self.terms.as_deref().ok_or_else(|| CliError::invalid("job needs \"F\""))?;
        let n = match self.n {
            Some(n) => n,
            None => terms
                .first()
                .map(|t| t.exp.len().saturating_sub(1))
                .ok_or_else(|| CliError::invalid("cannot infer n from an empty F; give \"n\""))?,
        };
        let d = match self.d {
            Some(d) => d,
            None => terms
                .first()
                .map(|t| t.exp.iter().map(|&e| e as usize).sum())
                .ok_or_else(|| CliError::invalid("cannot infer d from an empty F; give \"d\""))?,
        };
        for t in terms {
            if t.exp.len() != n + 1 {
                return Err(CliError::invalid(format!("exponent {:?} should have {} entries", t.exp, n + 1)));
            }
        }
        Ok((terms, n, d))
    }

    /// `F` over the context, coefficients read as polynomials in `t`.
    pub fn poly(&self, ctx: &RingCtx) -> CliResult<HomogPoly<RingElem>> {
        let (terms, n, d) = self.shape()?;
        let m = BigInt::from(ctx.modulus().clone());
        let terms: Vec<(Vec<u32>, RingElem)> = terms
            .iter()
            .map(|t| {
                if t.c.len() > ctx.a() {
                    return Err(CliError::invalid(format!(
                        "coefficient {:?} has more than a = {} entries",
                        t.c,
                        ctx.a()
                    )));
                }
                let cs: Vec<BigUint> = t
                    .c
                    .iter()
                    .map(|c| num_integer::Integer::mod_floor(c, &m).to_biguint().unwrap())
                    .collect();
                Ok((t.exp.clone(), ctx.elem(&cs)))
            })
            .collect::<CliResult<_>>()?;
        Ok(HomogPoly::from_terms(ctx, n + 1, d, &terms)?)
    }

    /// `F` with integer coefficients, for the all-primes path.
    pub fn int_poly(&self) -> CliResult<HomogPoly<BigInt>> {
        let (terms, n, d) = self.shape()?;
        let terms: Vec<(Vec<u32>, BigInt)> = terms
            .iter()
            .map(|t| match t.c.as_slice() {
                [c] => Ok((t.exp.clone(), c.clone())),
                _ => Err(CliError::invalid("zeta-all needs integer coefficients")),
            })
            .collect::<CliResult<_>>()?;
        Ok(HomogPoly::from_terms(&IntegerRing, n + 1, d, &terms)?)
    }

    pub fn scheme(&self) -> CliResult<Vec<SparsePoly>> {
        let m = self.vars.ok_or_else(|| CliError::invalid("scheme job needs \"vars\""))?;
        let gens = self
            .generators
            .as_ref()
            .ok_or_else(|| CliError::invalid("scheme job needs \"generators\""))?;
        Ok(gens
            .iter()
            .map(|g| SparsePoly::from_json_terms(m, g))
            .collect::<arzeta::Result<_>>()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let job = Job::from_json(
            r#"{"p": 7, "a": 1, "fbar": [0, 1], "n": 1, "d": 2,
                "F": [{"exp": [2, 0], "c": 1}, {"exp": [0, 2], "c": -2}], "engine": "linear"}"#,
        )
        .unwrap();
        assert_eq!(job.engine, Some(EngineChoice::Single(Engine::Linear)));
        let ctx = job.ctx(2).unwrap();
        let f = job.poly(&ctx).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(*f.coeff(&[0, 2]), ctx.elem(&[BigUint::from(47u32)]));
        assert_eq!(job.int_poly().unwrap().coeff(&[0, 2]), &BigInt::from(-2));
    }

    #[test]
    fn inference_and_errors() {
        let job = Job::from_json(r#"{"p": 5, "F": [{"exp": [1, 1, 1], "c": 1}]}"#).unwrap();
        let f = job.poly(&job.ctx(1).unwrap()).unwrap();
        assert_eq!((f.n(), f.degree()), (2, 3));
        assert!(Job::from_json("[1]").is_err());
        assert!(Job::from_json(r#"{"p": -1}"#).is_err());
        assert!(Job::from_json(r#"{"engine": "fast"}"#).is_err());
        let bad = Job::from_json(r#"{"p": 5, "n": 1, "F": [{"exp": [1, 1, 1], "c": 1}]}"#).unwrap();
        assert_eq!(bad.poly(&bad.ctx(1).unwrap()).unwrap_err().kind, "invalid_input");
        let ext = Job::from_json(r#"{"p": 5, "a": 2, "F": [{"exp": [1], "c": 1}]}"#).unwrap();
        assert!(ext.ctx(1).is_err());
        let red = Job::from_json(r#"{"p": 5, "a": 2, "fbar": [4, 0, 1]}"#).unwrap();
        assert_eq!(red.ctx(1).unwrap_err().kind, "reducible");
    }
}
