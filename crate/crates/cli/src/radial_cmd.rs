//! Radial sweeps: integrate each initial datum of a sweep file, write one
//! trajectory CSV per accepted line and a JSON summary of admissible windows
//! and termination reasons.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use nk_core::radial::{admissible_window, in_s, integrate, Controls, RadialState};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub line: usize,
    pub initial: [f64; 3],
    pub t_end_requested: f64,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_reached: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub accepted: usize,
    pub rejected: usize,
    pub trajectories: Vec<TrajectoryEntry>,
}

fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Runs the sweep. Lines outside 𝒮 are reported and the run continues.
pub fn run_sweep(
    sweep_text: &str,
    default_t_end: Option<f64>,
    out_dir: &Path,
    controls: &Controls,
) -> Result<SweepSummary> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory '{}'", out_dir.display()))?;

    let mut entries = Vec::new();
    for (idx, raw) in sweep_text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        let values = match (parsed, fields.len()) {
            (Some(v), 3) if default_t_end.is_some() => {
                let mut v = v;
                v.push(default_t_end.unwrap());
                v
            }
            (Some(v), 4) => v,
            _ => {
                entries.push(TrajectoryEntry {
                    line: line_no,
                    initial: [f64::NAN; 3],
                    t_end_requested: f64::NAN,
                    accepted: false,
                    reason: Some(format!(
                        "cannot parse line (expected 't0 x0 xp0 [t_end]'): '{line}'"
                    )),
                    termination: None,
                    t_reached: None,
                    csv: None,
                    windows: None,
                });
                continue;
            }
        };
        let (t0, x0, xp0, t_end) = (values[0], values[1], values[2], values[3]);
        if !in_s(t0, x0, xp0) {
            entries.push(TrajectoryEntry {
                line: line_no,
                initial: [t0, x0, xp0],
                t_end_requested: t_end,
                accepted: false,
                reason: Some("initial data outside the admissible wedge".to_string()),
                termination: None,
                t_reached: None,
                csv: None,
                windows: None,
            });
            continue;
        }
        let state = RadialState::new(t0, x0, xp0);
        match integrate(state, t_end, controls) {
            Ok(sol) => {
                let csv_name = format!("traj_{line_no:03}.csv");
                let csv_path = out_dir.join(&csv_name);
                let mut csv = String::from("t,x,xp,in_S\n");
                for n in sol.nodes() {
                    let flag = in_s(n.t, n.x, n.xp);
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        g17(n.t),
                        g17(n.x),
                        g17(n.xp),
                        flag
                    ));
                }
                fs::write(&csv_path, csv)
                    .with_context(|| format!("cannot write '{}'", csv_path.display()))?;
                let windows = admissible_window(&sol)
                    .into_iter()
                    .map(|(a, b)| [a, b])
                    .collect();
                entries.push(TrajectoryEntry {
                    line: line_no,
                    initial: [t0, x0, xp0],
                    t_end_requested: t_end,
                    accepted: true,
                    reason: None,
                    termination: Some(sol.termination().as_str().to_string()),
                    t_reached: Some(sol.t_end()),
                    csv: Some(csv_name),
                    windows: Some(windows),
                });
            }
            Err(e) => {
                entries.push(TrajectoryEntry {
                    line: line_no,
                    initial: [t0, x0, xp0],
                    t_end_requested: t_end,
                    accepted: false,
                    reason: Some(e.to_string()),
                    termination: None,
                    t_reached: None,
                    csv: None,
                    windows: None,
                });
            }
        }
    }

    let accepted = entries.iter().filter(|e| e.accepted).count();
    let rejected = entries.len() - accepted;
    let summary = SweepSummary {
        accepted,
        rejected,
        trajectories: entries,
    };
    let json = serde_json::to_string_pretty(&summary)?;
    let summary_path = out_dir.join("radial_summary.json");
    fs::write(&summary_path, json)
        .with_context(|| format!("cannot write '{}'", summary_path.display()))?;
    Ok(summary)
}
