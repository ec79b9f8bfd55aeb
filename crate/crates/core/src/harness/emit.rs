use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{Execution, RunConfig};
use crate::diagnostics::NodeDiagnostic;
use crate::solver::{Solver, TimeMode};

/// 17 significant digits, enough to re-read every `f64` exactly.
pub fn format_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_num).unwrap_or_default()
}

fn write_file(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> io::Result<()> {
    let path = dir.join(name);
    fs::write(&path, body)?;
    written.push(path);
    Ok(())
}

/// Writes `surface.csv`, `summary.csv` and `meta.json` (plus
/// `diagnostics.csv` when the run collected diagnostics) into `dir`.
pub fn emit_report(cfg: &RunConfig, run: &Execution, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let report = &run.output.report;

    let mut surface = String::from("t,x,u_numeric,u_exact,abs_error,alpha,p1,p2\n");
    for r in &report.surface {
        let (a, p1, p2) = match r.choice {
            Some((a, p1, p2)) => (format_num(a), format_num(p1), format_num(p2)),
            None => Default::default(),
        };
        let _ = writeln!(
            surface,
            "{},{},{},{},{},{a},{p1},{p2}",
            format_num(r.t),
            format_num(r.x),
            format_num(r.u_numeric),
            opt(r.u_exact),
            opt(r.abs_error),
        );
    }
    write_file(dir, "surface.csv", &surface, &mut written)?;

    let mut summary = String::from("t,max_error\n");
    for r in &report.summary {
        let _ = writeln!(summary, "{},{}", format_num(r.t), opt(r.max_error));
    }
    write_file(dir, "summary.csv", &summary, &mut written)?;

    if !run.output.diagnostics.is_empty() {
        written.push(emit_diagnostics(&run.output.diagnostics, dir)?);
    }

    let p = &cfg.problem;
    let grids = match &p.mode {
        TimeMode::Standard => serde_json::Value::Null,
        TimeMode::Fixed { spec, alpha, p1, p2 } => json!({
            "first": spec.first, "second": spec.second, "alpha": spec.alpha,
            "fixed": { "alpha": alpha, "p1": p1, "p2": p2 },
        }),
        TimeMode::Optimized { spec, score } => json!({
            "first": spec.first, "second": spec.second, "alpha": spec.alpha, "score": score,
        }),
    };
    let termination = match &run.error {
        None => json!({ "status": "completed" }),
        Some(e) => json!({ "status": "aborted", "error": e.to_string() }),
    };
    let meta = json!({
        "sign_convention": p.sign.as_str(),
        "config_hash": cfg.config_hash(),
        "builtin": cfg.builtin,
        "mode": p.mode.name(),
        "star_size": p.star_size.min(p.nodes.len() - 1),
        "weights": p.weights,
        "grids": grids,
        "dt": p.dt,
        "t_final": p.t_final,
        "steps_planned": run.n_steps,
        "steps_completed": report.steps_completed,
        "termination": termination,
        "wall_time_seconds": run.wall_time.as_secs_f64(),
        "threads": cfg.threads,
        "config": cfg.canonical,
    });
    let body = serde_json::to_string_pretty(&meta).map_err(io::Error::other)? + "\n";
    write_file(dir, "meta.json", &body, &mut written)?;
    Ok(written)
}

/// Writes `diagnostics.csv`. Nodes where the constants could not be
/// evaluated keep `t` and `x` and leave the other columns empty.
pub fn emit_diagnostics(records: &[NodeDiagnostic], dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut out = String::from("t,x,A,B,C,D,E,bound,phi,cond1,cond2,any_triple_ok\n");
    for rec in records {
        match rec {
            Ok(r) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    format_num(r.t),
                    format_num(r.x),
                    format_num(r.a),
                    format_num(r.b),
                    format_num(r.c),
                    format_num(r.d),
                    format_num(r.e),
                    format_num(r.bound),
                    format_num(r.phi),
                    r.cond1,
                    r.cond2,
                    r.any_triple_ok
                );
            }
            Err(gap) => {
                let _ = writeln!(out, "{},{},,,,,,,,,,", format_num(gap.t), format_num(gap.x));
            }
        }
    }
    let path = dir.join("diagnostics.csv");
    fs::write(&path, out)?;
    Ok(path)
}

/// Writes `integer_weights.csv` and, for fractional problems,
/// `fractional_weights.csv`. The row with `member == node` holds λ₀.
pub fn emit_weights(solver: &Solver, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let coords = solver.problem().nodes.coords();
    let mut int = String::from("node,x,member,member_x,lambda1,lambda2\n");
    let mut frac = String::from("node,x,member,member_x,delta1,delta2,Lambda1,Lambda2\n");
    let mut any_frac = false;
    for st in solver.stencils() {
        let center = |a: [f64; 2]| format!("{},{}", format_num(a[0]), format_num(a[1]));
        let _ = writeln!(
            int,
            "{},{},{},{},{}",
            st.node,
            format_num(st.x),
            st.node,
            format_num(st.x),
            center(st.integer.lambda0)
        );
        for (&m, l) in st.members.iter().zip(&st.integer.lambda) {
            let _ = writeln!(int, "{},{},{},{},{}", st.node, format_num(st.x), m, format_num(coords[m]), center(*l));
        }
        if let Some(fw) = &st.fractional {
            any_frac = true;
            let _ = writeln!(
                frac,
                "{},{},{},{},,,{}",
                st.node,
                format_num(st.x),
                st.node,
                format_num(st.x),
                center(fw.lambda0)
            );
            for ((&m, l), d) in st.members.iter().zip(&fw.lambda).zip(&fw.deltas) {
                let _ = writeln!(
                    frac,
                    "{},{},{},{},{},{}",
                    st.node,
                    format_num(st.x),
                    m,
                    format_num(coords[m]),
                    center(*d),
                    center(*l)
                );
            }
        }
    }
    write_file(dir, "integer_weights.csv", &int, &mut written)?;
    if any_frac {
        write_file(dir, "fractional_weights.csv", &frac, &mut written)?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::super::{builtin, execute, load_config};
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 9.9276e-9, -2.5e300, 5e-324] {
            assert_eq!(format_num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn report_files_and_shape() {
        let mut cfg = builtin("example2").unwrap();
        cfg.problem.t_final = 0.5;
        cfg.checkpoints.clear();
        let run = execute(&cfg, false).unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit_report(&cfg, &run, dir.path()).unwrap();
        let surface = fs::read_to_string(dir.path().join("surface.csv")).unwrap();
        assert_eq!(surface.lines().count(), 1 + 6 * 17);
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        let rows: Vec<&str> = summary.lines().skip(1).collect();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].starts_with(&format_num(0.5)));
        // checkpoint max equals the max over that level's rows
        let max = run.output.report.level(0.5).filter_map(|r| r.abs_error).fold(0.0, f64::max);
        assert_eq!(run.output.report.summary[0].max_error, Some(max));
        let meta: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("meta.json")).unwrap()).unwrap();
        assert_eq!(meta["sign_convention"], "corrected");
        assert_eq!(meta["termination"]["status"], "completed");
    }

    #[test]
    fn rerun_from_metadata_is_byte_identical() {
        let mut cfg = builtin("example2").unwrap();
        cfg.problem.t_final = 0.3;
        cfg.canonical.problem.t_final = Some(0.3);
        cfg.checkpoints = vec![0.3];
        cfg.canonical.checkpoints = Some(vec![0.3]);
        let first = tempfile::tempdir().unwrap();
        emit_report(&cfg, &execute(&cfg, false).unwrap(), first.path()).unwrap();
        let again = load_config(&first.path().join("meta.json")).unwrap();
        assert_eq!(again.config_hash(), cfg.config_hash());
        let second = tempfile::tempdir().unwrap();
        emit_report(&again, &execute(&again, false).unwrap(), second.path()).unwrap();
        for name in ["surface.csv", "summary.csv"] {
            assert_eq!(
                fs::read(first.path().join(name)).unwrap(),
                fs::read(second.path().join(name)).unwrap(),
                "{name}"
            );
        }
    }

    #[test]
    fn weight_dump_layout() {
        let cfg = builtin("example1").unwrap();
        let solver = Solver::new(cfg.problem).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_weights(&solver, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        let int = fs::read_to_string(dir.path().join("integer_weights.csv")).unwrap();
        assert_eq!(int.lines().count(), 1 + 15 * 5);
    }
}
