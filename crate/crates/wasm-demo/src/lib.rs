//! Browser bindings for the solver demo page in `www/`.
//!
//! Every export returns a JSON string. Failures come back as
//! `{"error": "..."}` so the page can show them next to the controls.

use gnsfd::denoms::{phi_eval, PhiFamily};
use gnsfd::fracweights::{build_caputo_weights, FracOrder, SignConvention};
use gnsfd::harness::{builtin_doc, MeshDoc, ModeName, EXAMPLE_MESH};
use gnsfd::intweights::build_integer_weights;
use gnsfd::mesh::{build_star, weights_for, NodeSet, WeightScheme};
use gnsfd::solver::{RunOptions, Solver};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn scheme(power: f64) -> WeightScheme {
    if power == 0.0 {
        WeightScheme::Constant
    } else {
        WeightScheme::InverseDistancePower { power }
    }
}

fn family(name: &str) -> Result<PhiFamily, String> {
    match name {
        "exp" => Ok(PhiFamily::Exp),
        "sin" => Ok(PhiFamily::Sin),
        "tan-sin" => Ok(PhiFamily::TanSin),
        "identity" => Ok(PhiFamily::Identity),
        other => Err(format!("unknown family {other:?}")),
    }
}

/// Runs builtin example `which` (1 or 2) and returns the solution surface.
///
/// `mode` is `standard` or `nsfd-optimized`; `weight_power = 0` selects
/// constant least-squares weights.
#[wasm_bindgen]
pub fn solve_example(which: u8, mode: &str, star_size: usize, weight_power: f64, t_final: f64) -> String {
    respond(solve(which, mode, star_size, weight_power, t_final))
}

fn solve(which: u8, mode: &str, star_size: usize, weight_power: f64, t_final: f64) -> Result<Value, String> {
    let mut doc = builtin_doc(&format!("example{which}")).map_err(|e| e.to_string())?;
    doc.mode = Some(mode.parse::<ModeName>()?);
    doc.checkpoints = Some(Vec::new());
    doc.problem.t_final = Some(t_final);
    doc.mesh = MeshDoc {
        star_size: Some(star_size),
        weights: Some(scheme(weight_power)),
        ..doc.mesh
    };
    let cfg = doc.resolve().map_err(|e| e.to_string())?;
    let solver = Solver::new(cfg.problem).map_err(|e| e.to_string())?;
    let (output, error) = match solver.run(&RunOptions::default()) {
        Ok(out) => (out, None),
        Err(e) => match e.partial {
            Some(p) => (*p, Some(e.cause.to_string())),
            None => return Err(e.cause.to_string()),
        },
    };
    let n = solver.problem().nodes.len();
    let levels: Vec<Value> = output
        .report
        .surface
        .chunks(n)
        .map(|rows| {
            json!({
                "t": rows[0].t,
                "numeric": rows.iter().map(|r| r.u_numeric).collect::<Vec<_>>(),
                "exact": rows.iter().map(|r| r.u_exact).collect::<Vec<_>>(),
                "error": rows.iter().map(|r| r.abs_error).collect::<Vec<_>>(),
                "alpha": rows.iter().map(|r| r.choice.map(|c| c.0)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "x": solver.problem().nodes.coords(),
        "levels": levels,
        "stopped": error,
    }))
}

/// Integer and fractional (order `alpha`) weights of the star around node
/// `center` of the example mesh.
#[wasm_bindgen]
pub fn stencil_weights(center: usize, alpha: f64, star_size: usize, weight_power: f64, printed_sign: bool) -> String {
    respond(stencil(center, alpha, star_size, weight_power, printed_sign))
}

fn stencil(center: usize, alpha: f64, star_size: usize, weight_power: f64, printed_sign: bool) -> Result<Value, String> {
    let nodes = NodeSet::new(EXAMPLE_MESH.to_vec()).map_err(|e| e.to_string())?;
    let star = build_star(&nodes, center, star_size).map_err(|e| e.to_string())?;
    let w = weights_for(&star, scheme(weight_power));
    let int = build_integer_weights(&star, &w).map_err(|e| e.to_string())?;
    let sign = if printed_sign {
        SignConvention::Printed
    } else {
        SignConvention::Corrected
    };
    let order = FracOrder::new(alpha).map_err(|e| e.to_string())?;
    let frac = build_caputo_weights(&star, &w, order, sign).map_err(|e| e.to_string())?;
    Ok(json!({
        "center_x": star.center_x,
        "members": star.coords,
        "integer": { "lambda0": int.lambda0, "lambda": int.lambda },
        "fractional": { "lambda0": frac.lambda0, "lambda": frac.lambda },
    }))
}

/// Samples `φ₁`, `φ₂` and `αφ₁ + (1 − α)φ₂` on `(0, dt_max]`.
#[wasm_bindgen]
pub fn phi_curves(first: &str, p1: f64, second: &str, p2: f64, alpha: f64, dt_max: f64, samples: usize) -> String {
    respond(curves(first, p1, second, p2, alpha, dt_max, samples))
}

fn curves(first: &str, p1: f64, second: &str, p2: f64, alpha: f64, dt_max: f64, samples: usize) -> Result<Value, String> {
    let (f1, f2) = (family(first)?, family(second)?);
    if !(0.0..=1.0).contains(&alpha) {
        return Err(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let samples = samples.clamp(2, 2000);
    let eval = |f, dt, p| phi_eval(f, dt, p).ok();
    let mut dt = Vec::with_capacity(samples);
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for k in 1..=samples {
        let h = dt_max * k as f64 / samples as f64;
        let (x, y) = (eval(f1, h, p1), eval(f2, h, p2));
        dt.push(h);
        a.push(x);
        b.push(y);
        c.push(x.zip(y).map(|(x, y)| alpha * x + (1.0 - alpha) * y));
    }
    Ok(json!({ "dt": dt, "first": a, "second": b, "combined": c }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn example2_surface() {
        let v = parse(solve_example(2, "nsfd-optimized", 4, 2.0, 0.5));
        assert_eq!(v["x"].as_array().unwrap().len(), 17);
        assert_eq!(v["levels"].as_array().unwrap().len(), 6);
        assert!(v["stopped"].is_null());
        let err = v["levels"][5]["error"][8].as_f64().unwrap();
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn blow_up_is_reported_not_thrown() {
        let v = parse(solve_example(1, "nsfd-optimized", 4, 2.0, 2.0));
        assert!(v["stopped"].as_str().unwrap().contains("blow-up"));
        assert!(v["levels"].as_array().unwrap().len() > 1);
    }

    #[test]
    fn bad_inputs_become_error_objects() {
        assert!(parse(solve_example(3, "standard", 4, 2.0, 1.0))["error"].is_string());
        assert!(parse(solve_example(2, "sideways", 4, 2.0, 1.0))["error"].is_string());
        assert!(parse(stencil_weights(0, 0.5, 4, 2.0, false))["error"].is_string());
        assert!(parse(phi_curves("exp", 1.0, "cosh", 1.0, 0.5, 0.1, 10))["error"].is_string());
    }

    #[test]
    fn stencil_on_example_mesh() {
        let v = parse(stencil_weights(4, 1.0, 4, 2.0, false));
        assert_eq!(v["center_x"], 0.24);
        assert_eq!(v["members"], json!([0.185, 0.304, 0.357, 0.11]));
        for k in 0..4 {
            for j in 0..2 {
                let a = v["integer"]["lambda"][k][j].as_f64().unwrap();
                let b = v["fractional"]["lambda"][k][j].as_f64().unwrap();
                assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn phi_curve_endpoints() {
        let v = parse(phi_curves("exp", 1.0, "sin", 1.0, 1.0, 0.1, 10));
        assert_eq!(v["dt"].as_array().unwrap().len(), 10);
        let last = v["combined"][9].as_f64().unwrap();
        assert!((last - 0.105_170_918_075_647_63).abs() < 1e-15);
        // tan-sin goes non-positive for large theta and shows as null
        let v = parse(phi_curves("tan-sin", 20.0, "identity", 0.0, 0.5, 0.1, 10));
        assert!(v["first"][9].is_null() && v["combined"][9].is_null());
        assert_eq!(v["second"][9].as_f64(), Some(0.1));
    }
}
