//! JSON and CSV rendering of experiment results.

use serde_json::{json, Value};

use poissonlab_core::experiments::{
    CheckStatus, ExperimentConfig, GenericityReport, MixingReport, OracleReport, QuenchedReport, SetReport,
};
use poissonlab_core::measures::{MixingProfile, ProfileValue};
use poissonlab_core::mixing::{ConcentrationReport, Functional};
use poissonlab_core::poisson_stats::HistogramRow;
use poissonlab_core::rational::to_string as rat;
use poissonlab_core::IntervalUnion;

fn profile_value(p: &ProfileValue) -> Value {
    json!({"value": p.value, "provenance": p.provenance.as_str()})
}

pub fn profile_json(p: &MixingProfile) -> Value {
    json!({
        "T": profile_value(&p.t),
        "sigma": profile_value(&p.sigma),
        "rho": profile_value(&p.rho),
        "K": profile_value(&p.k_const),
        "R": profile_value(&p.r),
    })
}

pub fn set_json(s: &IntervalUnion) -> Value {
    let ivs: Vec<Value> = s
        .intervals()
        .iter()
        .map(|iv| json!({"lo": rat(&iv.lo), "hi": rat(&iv.hi), "lo_closed": iv.lo_closed, "hi_closed": iv.hi_closed}))
        .collect();
    json!({"intervals": ivs, "length": rat(s.length())})
}

pub fn config_json(cfg: &ExperimentConfig) -> Value {
    json!({
        "model": cfg.model.kind(),
        "k": cfg.k,
        "mode": cfg.mode.as_str(),
        "sets": cfg.sets.iter().map(set_json).collect::<Vec<_>>(),
        "n_samples": cfg.n_samples,
        "n_x_replicas": cfg.n_x_replicas,
        "seed": cfg.seed,
        "strict": cfg.strict,
        "tv_tolerance": cfg.tv_tolerance,
    })
}

fn set_report_json(s: &SetReport) -> Value {
    let d = &s.distribution;
    json!({
        "set_index": s.set_index,
        "lambda": s.lambda,
        "n_samples": d.n_samples(),
        "mean": d.mean(),
        "variance": d.variance(),
        "truncated_fraction": d.truncated_fraction(),
        "tv_set_convention": s.tv.set,
        "tv_functional_convention": s.tv.functional,
        "complete_sample_tv_set_convention": s.complete_tv.map(|t| t.set),
        "histogram": d.histogram().iter().map(|(j, n)| json!([j, n])).collect::<Vec<_>>(),
    })
}

pub fn genericity_json(r: &GenericityReport) -> Value {
    json!({
        "seed": r.seed,
        "n_samples": r.n_samples,
        "n_cap": r.n_cap,
        "truncated_fraction": r.truncated_fraction,
        "tv_tolerance": r.tv_tolerance,
        "tv_pass": r.tv_pass(),
        "kallenberg_pass": r.kallenberg_pass(),
        "sets": r.sets.iter().map(set_report_json).collect::<Vec<_>>(),
        "kallenberg": r.kallenberg.iter().map(|e| json!({
            "length": e.length,
            "m": e.m,
            "mean": e.mean,
            "mean_se": e.mean_se,
            "mean_threshold": e.mean_threshold,
            "mean_pass": e.mean_pass,
            "void_prob": e.void_prob,
            "void_target": e.void_target,
            "void_se": e.void_se,
            "void_pass": e.void_pass,
        })).collect::<Vec<_>>(),
    })
}

pub fn quenched_json(r: &QuenchedReport) -> Value {
    json!({
        "n_pass": r.n_pass,
        "required_pass": r.required_pass,
        "pass": r.pass(),
        "replicas": r.replicas.iter().map(genericity_json).collect::<Vec<_>>(),
    })
}

pub fn oracle_json(r: &OracleReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let (status, reason) = match &c.status {
                CheckStatus::Pass => ("PASS", None),
                CheckStatus::Fail => ("FAIL", None),
                CheckStatus::Skipped(r) => ("SKIPPED", Some(r.clone())),
            };
            json!({"name": c.name, "status": status, "reason": reason, "detail": c.detail})
        })
        .collect();
    json!({"pass": r.pass(), "checks": checks})
}

pub fn concentration_json(r: &ConcentrationReport, functional: Functional) -> Value {
    let w = &r.weights;
    json!({
        "functional": match functional { Functional::Mean => json!("mean"), Functional::Void(j) => json!({"void": j}) },
        "n_replicas": r.values.len(),
        "mean": r.mean,
        "true_mean": r.true_mean,
        "delta_norm_bound": r.delta_norm_bound,
        "incomplete_scans": r.incomplete_scans,
        "violations": r.violations(),
        "lipschitz": {
            "scale": w.scale,
            "plateau": w.plateau,
            "sup_s": w.sup_s,
            "head_len": w.head_len,
            "norm_sq": w.norm_sq,
            "majorant": w.majorant,
            "majorant_holds": w.majorant_holds(),
        },
        "rows": r.rows.iter().map(|row| json!({
            "t": row.t,
            "empirical_prob": row.empirical_prob,
            "empirical_prob_true_center": row.empirical_prob_true_center,
            "theoretical_bound": row.theoretical_bound,
            "mcdiarmid_bound": row.mcdiarmid_bound,
            "se": row.se,
            "violation": row.violation,
        })).collect::<Vec<_>>(),
    })
}

pub fn mixing_json(r: &MixingReport) -> Value {
    json!({
        "profile": profile_json(&r.profile),
        "eta": match &r.eta { Some(e) => json!(e), None => json!("UNSUPPORTED") },
        "unsupported_reason": r.unsupported_reason,
        "eta_dominated": r.eta_dominated,
        "delta_norms": r.truncations.iter().map(|d| json!({"n": d.n, "value": d.value, "iterations": d.iterations})).collect::<Vec<_>>(),
        "non_decreasing": r.non_decreasing,
        "stabilization": r.stabilization,
        "bound": r.bound,
        "bound_holds": r.bound_holds,
        "pass": r.pass(),
    })
}

pub fn histogram_csv(s: &SetReport) -> String {
    rows_csv(&s.rows)
}

pub fn rows_csv(rows: &[HistogramRow]) -> String {
    let mut out = String::from("j,frequency,empirical_prob,poisson_prob,abs_diff\n");
    for row in rows {
        let j = if row.overflow { format!(">{}", row.j - 1) } else { row.j.to_string() };
        out.push_str(&format!("{},{},{},{},{}\n", j, row.frequency, row.empirical_prob, row.poisson_prob, row.abs_diff));
    }
    out
}

pub fn exceedance_csv(reports: &[ConcentrationReport]) -> String {
    let mut out = String::from("set,t,empirical_prob,theoretical_bound,se,flag\n");
    for (i, r) in reports.iter().enumerate() {
        for row in &r.rows {
            let flag = if row.violation { "VIOLATION" } else { "" };
            out.push_str(&format!("{},{},{},{},{},{}\n", i, row.t, row.empirical_prob, row.theoretical_bound, row.se, flag));
        }
    }
    out
}
