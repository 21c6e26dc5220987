//! Runs one experiment and writes its output directory.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use poissonlab_core::experiments::{
    run_annealed, run_concentration, run_mixing, run_oracle_suite, run_quenched, ExperimentConfig, Mode,
};

use crate::report;
use crate::LabError;

/// Structured result of one run. `report` is a pure function of the config;
/// wall-clock time is kept apart so reruns can be compared byte for byte.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    /// `(file name, contents)` pairs besides `report.json`.
    pub files: Vec<(String, String)>,
    pub pass: bool,
    pub wall_clock_seconds: f64,
}

impl Outcome {
    /// `report.json` contents: the report plus a `timing` object.
    pub fn report_json(&self) -> String {
        let mut doc = self.report.clone();
        doc["timing"] = json!({"wall_clock_seconds": self.wall_clock_seconds});
        let mut text = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
        text.push('\n');
        text
    }

    /// Exit code: 0 when every check passes, 1 when a statistical check failed.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), LabError> {
        let io = |p: &Path, e| LabError::Io { path: p.display().to_string(), source: e };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let path = dir.join("report.json");
        std::fs::write(&path, self.report_json()).map_err(|e| io(&path, e))?;
        for (name, body) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    let start = Instant::now();
    let mut files = Vec::new();
    let (body, pass) = match cfg.mode {
        Mode::Annealed => {
            let r = run_annealed(cfg)?;
            for s in &r.sets {
                files.push((format!("histogram_{}.csv", s.set_index), report::histogram_csv(s)));
            }
            (report::genericity_json(&r), r.tv_pass() && r.kallenberg_pass())
        }
        Mode::Quenched => {
            let r = run_quenched(cfg)?;
            // histograms of the pooled replicas
            for (i, _) in cfg.sets.iter().enumerate() {
                let pooled = r.pooled(i)?;
                let rows = pooled.histogram_rows(cfg.sets[i].length_f64())?;
                files.push((format!("histogram_{i}.csv"), report::rows_csv(&rows)));
            }
            (report::quenched_json(&r), r.pass())
        }
        Mode::Oracle => {
            let r = run_oracle_suite(cfg)?;
            (report::oracle_json(&r), r.pass())
        }
        Mode::Concentration => {
            let reps = run_concentration(cfg)?;
            files.push(("exceedance.csv".to_string(), report::exceedance_csv(&reps)));
            let pass = reps.iter().all(|r| r.violations() == 0);
            let list: Vec<Value> = reps.iter().map(|r| report::concentration_json(r, cfg.functional)).collect();
            (json!({ "sets": list }), pass)
        }
        Mode::Mixing => {
            let r = run_mixing(cfg)?;
            (report::mixing_json(&r), r.pass())
        }
    };
    let report = json!({
        "config": report::config_json(cfg),
        "result": body,
        "pass": pass,
    });
    Ok(Outcome { report, files, pass, wall_clock_seconds: start.elapsed().as_secs_f64() })
}
