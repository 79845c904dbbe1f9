//! JSON encodings of scalars, rational functions, moulds and constant moulds.
//!
//! A scalar is a list of `{"zeta": [[k, e], …], "q": "n/d"}` terms; a rational
//! function is `{"num_terms": [{"exp": [..], "coeff": scalar}, …],
//! "den_forms": [[..], …]}` with denominator forms listed with repetition; a
//! mould is `{"empty_value", "side", "max_depth", "components": {"r": ratfun}}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, RatFun, Rational, Scalar, ZetaMonomial};
use crate::library::CorrectionSpec;
use crate::mouldcore::{Mould, Side};

#[derive(Serialize, Deserialize)]
struct ScalarTermJson {
    zeta: Vec<(u32, u32)>,
    q: String,
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    exp: Vec<u16>,
    coeff: Vec<ScalarTermJson>,
}

#[derive(Serialize, Deserialize)]
struct RatFunJson {
    num_terms: Vec<PolyTermJson>,
    den_forms: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct MouldJson {
    empty_value: Vec<ScalarTermJson>,
    side: Side,
    max_depth: usize,
    components: BTreeMap<usize, RatFunJson>,
}

fn scalar_json(s: &Scalar) -> Vec<ScalarTermJson> {
    s.terms()
        .iter()
        .map(|(m, c)| ScalarTermJson { zeta: m.factors().to_vec(), q: c.to_string() })
        .collect()
}

fn scalar_from(terms: Vec<ScalarTermJson>) -> Result<Scalar> {
    let mut out = Vec::new();
    for t in terms {
        let c: Rational = t
            .q
            .parse::<BigRational>()
            .map_err(|e| Error::Malformed(format!("rational {:?}: {e}", t.q)))?;
        for &(k, _) in &t.zeta {
            if k < 3 || k % 2 == 0 {
                return Err(Error::Malformed(format!("zeta index {k} is not odd >= 3")));
            }
        }
        out.push((ZetaMonomial::from_factors(t.zeta), c));
    }
    Ok(Scalar::from_terms(out))
}

fn ratfun_json(f: &RatFun) -> RatFunJson {
    RatFunJson {
        num_terms: f
            .num()
            .terms()
            .rev()
            .map(|(m, c)| PolyTermJson { exp: m.exps().to_vec(), coeff: scalar_json(c) })
            .collect(),
        den_forms: f.den_forms().iter().map(|l| l.coeffs().to_vec()).collect(),
    }
}

fn ratfun_from(r: usize, j: RatFunJson) -> Result<RatFun> {
    let mut terms = Vec::new();
    for t in j.num_terms {
        if t.exp.len() != r {
            return Err(Error::Malformed(format!("exponent vector of length {} in depth {r}", t.exp.len())));
        }
        terms.push((t.exp, scalar_from(t.coeff)?));
    }
    for f in &j.den_forms {
        if f.len() != r {
            return Err(Error::Malformed(format!("denominator form of length {} in depth {r}", f.len())));
        }
    }
    RatFun::new(Poly::from_terms(r, terms), &j.den_forms)
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    serde_json::to_value(scalar_json(s)).expect("serializable")
}

pub fn ratfun_to_json(f: &RatFun) -> Value {
    serde_json::to_value(ratfun_json(f)).expect("serializable")
}

pub fn mould_to_json(m: &Mould) -> Value {
    let j = MouldJson {
        empty_value: scalar_json(m.empty_value()),
        side: m.side(),
        max_depth: m.max_depth(),
        components: m.components().map(|(r, f)| (r, ratfun_json(f))).collect(),
    };
    serde_json::to_value(j).expect("serializable")
}

pub fn mould_from_json(v: &Value) -> Result<Mould> {
    let j: MouldJson = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut comps = Vec::new();
    for (r, f) in j.components {
        if r == 0 || r > j.max_depth {
            return Err(Error::Malformed(format!("component depth {r} outside 1..={}", j.max_depth)));
        }
        comps.push((r, ratfun_from(r, f)?));
    }
    Ok(Mould::from_components(j.side, j.max_depth, scalar_from(j.empty_value)?, comps))
}

pub fn constants_to_json(c: &CorrectionSpec) -> Value {
    let map: BTreeMap<String, Value> = c.entries().map(|(r, s)| (r.to_string(), scalar_to_json(s))).collect();
    serde_json::to_value(map).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::build_that01;
    use crate::mouldcore::dar_inv;

    #[test]
    fn mould_round_trip() {
        let mut m = dar_inv(&build_that01(4)).unwrap().scale(&(&Scalar::zeta(3) + &Scalar::frac(1, 3)));
        m.set_empty_value(Scalar::zeta(5));
        let v = mould_to_json(&m);
        let back = mould_from_json(&v).unwrap();
        assert!(back.equals(&m));
        assert_eq!(v["side"], "u");
        assert_eq!(v["components"]["2"]["den_forms"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let v: Value = serde_json::json!({"empty_value": [], "side": "u", "max_depth": 1,
            "components": {"1": {"num_terms": [{"exp": [1, 0], "coeff": []}], "den_forms": []}}});
        assert!(mould_from_json(&v).is_err());
    }
}
