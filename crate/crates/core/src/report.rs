//! Per-node error surfaces and checkpoint summaries produced by a run.

use serde::Serialize;

use crate::denoms::Candidate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub t: f64,
    pub x: f64,
    pub u_numeric: f64,
    pub u_exact: Option<f64>,
    pub abs_error: Option<f64>,
    /// `(α, p1, p2)` that produced this value; `None` for boundary nodes,
    /// the initial level and standard stepping.
    pub choice: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub t: f64,
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorReport {
    pub surface: Vec<SurfaceRow>,
    pub summary: Vec<SummaryRow>,
    pub steps_completed: usize,
}

impl ErrorReport {
    pub(crate) fn push_level(
        &mut self,
        t: f64,
        coords: &[f64],
        values: &[f64],
        exact: Option<&[f64]>,
        chosen: &[Option<Candidate>],
    ) {
        for (i, (&x, &u)) in coords.iter().zip(values).enumerate() {
            let u_exact = exact.map(|e| e[i]);
            self.surface.push(SurfaceRow {
                t,
                x,
                u_numeric: u,
                u_exact,
                abs_error: u_exact.map(|e| (u - e).abs()),
                choice: chosen[i].map(|c| (c.alpha, c.p1, c.p2)),
            });
        }
    }

    /// Max absolute error over the last `n_nodes` surface rows.
    pub(crate) fn push_summary_for_last_level(&mut self, t: f64, n_nodes: usize) {
        let rows = &self.surface[self.surface.len() - n_nodes..];
        let max_error = rows
            .iter()
            .map(|r| r.abs_error)
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)));
        self.summary.push(SummaryRow { t, max_error });
    }

    /// Surface rows belonging to time level `t`.
    pub fn level(&self, t: f64) -> impl Iterator<Item = &SurfaceRow> {
        self.surface.iter().filter(move |r| r.t == t)
    }
}
