//! Browser bindings for the demo page. Every export returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use obook_core::monodromy::{rotation_number, CircleMapLift, RotationNumber, RotationOptions};
use obook_core::padyn::{dilatation, orbit_census, MatrixDoc, SignedTransitionMatrix};
use obook_core::rademacher::phi_step;
use obook_core::rational::{format_rational, ratio, to_f64, Rational};

const MAX_SAMPLES: u32 = 2000;
const MAX_PERIOD: u32 = 60;
const MAX_SIDES: usize = 200;

fn js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// `R_t` after a fixed PL map pushing points toward `1/2`. `bend` in
/// `[0, 1)` sets how far `1/4` moves; 0 is the rigid family.
fn family(t: &Rational, bend: &Rational) -> CircleMapLift {
    let quarter = ratio(1, 4);
    let up = &quarter + &quarter * bend;
    let down = ratio(3, 4) - &quarter * bend;
    let points = vec![
        (Rational::from_integer(0.into()), t.clone()),
        (quarter, up + t),
        (ratio(3, 4), down + t),
    ];
    CircleMapLift::new(points).expect("increasing for bend < 1")
}

pub fn staircase_json(samples: u32, bend_milli: u32, max_den: u64) -> Result<Value, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be in 1..={MAX_SAMPLES}"));
    }
    if bend_milli >= 1000 {
        return Err("bend must be below 1".into());
    }
    if max_den == 0 || max_den > 200 {
        return Err("max denominator must be in 1..=200".into());
    }
    let bend = ratio(bend_milli as i64, 1000);
    let opts = RotationOptions {
        max_denominator: max_den,
        iterations: 2000,
    };
    let points: Vec<Value> = (0..samples)
        .map(|i| {
            let t = ratio(i as i64, samples as i64);
            let rho = rotation_number(&family(&t, &bend), opts);
            let (lo, hi) = rho.bounds();
            json!({
                "t": to_f64(&t),
                "lo": to_f64(lo),
                "hi": to_f64(hi),
                "exact": match &rho {
                    RotationNumber::Exact { value, .. } => Some(format_rational(value)),
                    RotationNumber::Interval { .. } => None,
                },
            })
        })
        .collect();
    Ok(json!({"bend": to_f64(&bend), "max_denominator": max_den, "points": points}))
}

pub fn orbit_table_json(matrix: &str, max_period: u32) -> Result<Value, String> {
    if max_period == 0 || max_period > MAX_PERIOD {
        return Err(format!("max period must be in 1..={MAX_PERIOD}"));
    }
    let doc: MatrixDoc = serde_json::from_str(matrix).map_err(|e| e.to_string())?;
    let m = SignedTransitionMatrix::try_from(doc).map_err(|e| e.to_string())?;
    let lambda = dilatation(&m, &ratio(1, 1_000_000_000))
        .ok()
        .map(|b| json!({"lo": to_f64(&b.lo), "hi": to_f64(&b.hi)}));
    let rows: Vec<Value> = orbit_census(&m, max_period)
        .into_iter()
        .map(|r| {
            json!({
                "period": r.period,
                "periodic_points": r.periodic_points.to_string(),
                "simple": r.simple.to_string(),
                "good": r.good.map(|g| g.to_string()),
            })
        })
        .collect();
    Ok(json!({"signed": m.is_signed(), "dilatation": lambda, "rows": rows}))
}

pub fn step_table_json(sides: usize) -> Result<Value, String> {
    if sides > MAX_SIDES {
        return Err(format!("at most {MAX_SIDES} sides"));
    }
    let steps = (1..sides.max(2))
        .map(|i| {
            phi_step(sides, i)
                .map(|v| json!({"i": i, "phi": format_rational(&v), "value": to_f64(&v)}))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({"sides": sides, "steps": steps}))
}

/// Rotation number of the PL family over `t = i / samples`.
#[wasm_bindgen]
pub fn staircase(samples: u32, bend_milli: u32, max_den: u32) -> Result<String, JsValue> {
    js(staircase_json(samples, bend_milli, max_den as u64))
}

/// Orbit counts of a transition matrix given as JSON.
#[wasm_bindgen]
pub fn orbit_table(matrix: &str, max_period: u32) -> Result<String, JsValue> {
    js(orbit_table_json(matrix, max_period))
}

#[wasm_bindgen]
pub fn step_table(sides: usize) -> Result<String, JsValue> {
    js(step_table_json(sides))
}
