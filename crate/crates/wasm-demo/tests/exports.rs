use gnsfd_wasm::{phi_curves, solve_example, stencil_weights};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn payload_shapes_match_the_page() {
    let v = parse(solve_example(2, "nsfd-optimized", 4, 2.0, 0.3));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for key in ["numeric", "exact", "error", "alpha"] {
        assert_eq!(levels[3][key].as_array().unwrap().len(), 17, "{key}");
    }
    // boundary rows carry no denominator choice
    assert!(levels[3]["alpha"][0].is_null() && levels[3]["alpha"][5].is_number());

    let w = parse(stencil_weights(8, 0.9, 6, 0.0, true));
    assert_eq!(w["members"].as_array().unwrap().len(), 6);
    assert_eq!(w["fractional"]["lambda"].as_array().unwrap().len(), 6);

    let p = parse(phi_curves("sin", 2.0, "tan-sin", 0.5, 0.25, 0.4, 50));
    for key in ["dt", "first", "second", "combined"] {
        assert_eq!(p[key].as_array().unwrap().len(), 50);
    }
}

#[test]
fn standard_mode_runs_without_a_grid() {
    let v = parse(solve_example(2, "standard", 4, 2.0, 0.1));
    assert!(v["error"].is_null());
    assert!(v["levels"][1]["alpha"][5].is_null());
}
