use std::path::Path;

use gnsfd::harness::{builtin, ConfigDoc};
use gnsfd::intweights::build_integer_weights;
use gnsfd::mesh::{build_star, weights_for, NodeSet, WeightScheme};
use gnsfd::solver::{run, RunOptions, TimeMode};
use proptest::prelude::*;

fn heat(extra: &str) -> gnsfd::harness::RunConfig {
    let text = format!(
        r#"
        checkpoints = [0.02]
        {extra}
        [problem]
        f2 = "1"
        initial = "sin(3.141592653589793*x)"
        left = "0"
        right = "0"
        exact = "exp(-9.869604401089358*t)*sin(3.141592653589793*x)"
        dt = 0.0005
        t_final = 0.02
        [mesh]
        uniform = {{ count = 21, lo = 0.0, hi = 1.0 }}
        "#
    );
    ConfigDoc::parse_toml(&text, Path::new("heat.toml")).unwrap().resolve().unwrap()
}

#[test]
fn heat_equation_tracks_the_decaying_mode() {
    let cfg = heat("");
    let opts = RunOptions { checkpoints: cfg.checkpoints.clone(), diagnostics: false };
    let out = run(cfg.problem, &opts).unwrap();
    assert_eq!(out.report.steps_completed, 40);
    let err = out.report.summary[0].max_error.unwrap();
    // second-order in space on h = 0.05: roughly h^2 pi^2 / 12 of the amplitude
    assert!(err < 2.5e-3, "{err}");
}

#[test]
fn fixed_identity_denominator_is_the_standard_scheme() {
    let standard = heat(r#"mode = "standard""#);
    let fixed = heat(
        r#"mode = "nsfd-fixed"
        [denominator]
        first = { family = "identity", params = [0.0] }
        second = { family = "identity", params = [0.0] }
        alpha = [0.5]
        fixed = { alpha = 0.5, p1 = 0.0, p2 = 0.0 }"#,
    );
    assert!(matches!(fixed.problem.mode, TimeMode::Fixed { .. }));
    let a = run(standard.problem, &RunOptions::default()).unwrap();
    let b = run(fixed.problem, &RunOptions::default()).unwrap();
    assert_eq!(a.final_state.values, b.final_state.values);
}

#[test]
fn example2_dominance_over_a_short_run() {
    let mut cfg = builtin("example2").unwrap();
    cfg.problem.t_final = 0.5;
    let out = run(cfg.problem, &RunOptions::default()).unwrap();
    assert_eq!(out.dominance.len(), 5 * 15);
    for row in &out.dominance {
        for single in [row.first_only, row.second_only].into_iter().flatten() {
            assert!(row.combined <= single, "{row:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integer_weights_differentiate_quadratics(
        gaps in prop::collection::vec(0.05f64..1.0, 6..12),
        center_pick in 0usize..100,
        (c0, c1, c2) in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
        power in prop::sample::select(vec![0.0, 1.0, 2.0]),
    ) {
        let mut xs = vec![0.0];
        for g in &gaps {
            xs.push(xs.last().unwrap() + g);
        }
        let nodes = NodeSet::new(xs).unwrap();
        let center = 1 + center_pick % (nodes.len() - 2);
        let star = build_star(&nodes, center, 4).unwrap();
        let scheme = if power == 0.0 { WeightScheme::Constant } else { WeightScheme::InverseDistancePower { power } };
        let w = build_integer_weights(&star, &weights_for(&star, scheme)).unwrap();
        let f = |x: f64| c0 + c1 * x + c2 * x * x;
        let x0 = star.center_x;
        let neighbors: Vec<f64> = star.coords.iter().map(|&x| f(x)).collect();
        let (d1, d2) = w.apply(f(x0), &neighbors).unwrap();
        let scale = 1.0 + c1.abs() + c2.abs() * (1.0 + x0.abs());
        prop_assert!((d1 - (c1 + 2.0 * c2 * x0)).abs() < 1e-8 * scale);
        prop_assert!((d2 - 2.0 * c2).abs() < 1e-7 * scale);
    }
}
