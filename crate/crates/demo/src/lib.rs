//! WebAssembly bindings for the browser page in `www/`. Every export takes
//! plain strings or numbers and returns a JSON string; errors become thrown
//! JS strings.

use necklace_core::bijection::prime_bijection_with;
use necklace_core::slime::{decompose, migrate_backward, migrate_forward, phi_steps};
use necklace_core::{canonicalize, Chooser, Code};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_ORBIT: usize = 512;

#[derive(Serialize)]
struct SlimeView {
    code: Vec<u32>,
    n: usize,
    k: u64,
    weighted_sum: usize,
    decomposition: necklace_core::SlimeDecomposition,
    forward: Option<Vec<u32>>,
    backward: Option<Vec<u32>>,
}

#[derive(Serialize)]
struct Orbit {
    steps_per_phi: u64,
    /// Successive migrations, first entry is the input.
    codes: Vec<Vec<u32>>,
    weighted_sums: Vec<usize>,
    /// Whether the input came back within the step limit.
    closed: bool,
}

fn parse(literal: &str) -> Result<Code, String> {
    literal.parse().map_err(|e: necklace_core::Error| e.to_string())
}

pub fn slime_view_json(literal: &str) -> Result<String, String> {
    let f = parse(literal)?;
    let view = SlimeView {
        code: f.entries().to_vec(),
        n: f.n(),
        k: f.k(),
        weighted_sum: f.weighted_sum(),
        decomposition: decompose(&f),
        forward: migrate_forward(&f).ok().map(Code::into_entries),
        backward: migrate_backward(&f).ok().map(Code::into_entries),
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

pub fn orbit_json(literal: &str) -> Result<String, String> {
    let f = parse(literal)?;
    let steps = phi_steps(&f).map_err(|e| e.to_string())?;
    let mut codes = vec![f.clone()];
    let mut closed = false;
    while codes.len() < MAX_ORBIT {
        let next = migrate_forward(codes.last().unwrap()).map_err(|e| e.to_string())?;
        if next == f {
            closed = true;
            break;
        }
        codes.push(next);
    }
    let orbit = Orbit {
        steps_per_phi: steps,
        weighted_sums: codes.iter().map(Code::weighted_sum).collect(),
        codes: codes.into_iter().map(Code::into_entries).collect(),
        closed,
    };
    Ok(serde_json::to_string(&orbit).expect("orbit serializes"))
}

pub fn bijection_json(n: usize, k: u64, lexmax: bool) -> Result<String, String> {
    let chooser = if lexmax { Chooser::LexMax } else { Chooser::LexMin };
    let table = prime_bijection_with(n, k, chooser).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&table).expect("table serializes"))
}

pub fn canonical_literal(literal: &str) -> Result<String, String> {
    Ok(canonicalize(&parse(literal)?).canonical().to_string())
}

#[wasm_bindgen]
pub fn slime_view(code: &str) -> Result<String, JsValue> {
    slime_view_json(code).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn phi_orbit(code: &str) -> Result<String, JsValue> {
    orbit_json(code).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bijection(n: usize, k: u32, lexmax: bool) -> Result<String, JsValue> {
    bijection_json(n, u64::from(k), lexmax).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn canonical(code: &str) -> Result<String, JsValue> {
    canonical_literal(code).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn value(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn slime_view_of_the_eleven_bead_code() {
        let v = value(slime_view_json("1,1,2,1,0,1,0,3,0,0,2").unwrap());
        assert_eq!(v["decomposition"]["weight"], 3);
        assert_eq!(v["forward"], serde_json::json!([2, 1, 1, 2, 0, 1, 0, 2, 1, 0, 1]));
        assert_eq!(v["weighted_sum"], 10);
    }

    #[test]
    fn invalid_code_has_no_moves() {
        let v = value(slime_view_json("2,2,2").unwrap());
        assert_eq!(v["decomposition"]["valid"], false);
        assert!(v["forward"].is_null() && v["backward"].is_null());
        assert!(orbit_json("2,2,2").is_err());
        assert!(slime_view_json("1,x").is_err());
    }

    #[test]
    fn orbit_closes() {
        let v = value(orbit_json("3,0,0").unwrap());
        assert_eq!(v["closed"], true);
        assert_eq!(v["steps_per_phi"], 1);
        assert_eq!(v["codes"][1], serde_json::json!([2, 1, 0]));
        let sums: Vec<u64> = v["weighted_sums"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        for w in sums.windows(2) {
            assert_eq!(w[1], (w[0] + 1) % 3);
        }
    }

    #[test]
    fn tables() {
        let v = value(bijection_json(3, 3, false).unwrap());
        assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
        assert_eq!(value(bijection_json(3, 3, true).unwrap())["chooser"], "lexmax");
        assert!(bijection_json(4, 4, false).is_err());
        assert_eq!(canonical_literal("1,0,2").unwrap(), "0,2,1");
    }
}
