use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poissonlab"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

const ANNEALED: &str = r#"{
    "model": {"type": "iid", "probs": ["1/2", "1/2"]},
    "k": 8,
    "sets": [[{"lo": 0, "hi": 1}], [{"lo": "1/2", "hi": 2}, {"lo": 3, "hi": 4}]],
    "mode": "ANNEALED",
    "n_samples": 3000,
    "seed": 11,
    "tolerances": {"tv": 0.05}
}"#;

#[test]
fn annealed_writes_report_and_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), ANNEALED);
    let out = dir.path().join("out");
    let status = bin().args(["annealed", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let sets = report["result"]["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 2);
    for s in sets {
        let set = s["tv_set_convention"].as_f64().unwrap();
        let fun = s["tv_functional_convention"].as_f64().unwrap();
        assert!((fun - 2.0 * set).abs() < 1e-12);
    }
    assert!(report["timing"]["wall_clock_seconds"].as_f64().is_some());
    let csv = std::fs::read_to_string(out.join("histogram_1.csv")).unwrap();
    assert!(csv.starts_with("j,frequency,empirical_prob,poisson_prob,abs_diff\n"));
    assert!(out.join("histogram_0.csv").exists());
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), ANNEALED);
    let run = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        let mut c = bin();
        c.args(["annealed", "--config"]).arg(&cfg).arg("--out").arg(&out);
        if !seed.is_empty() {
            c.args(["--seed", seed]);
        }
        assert!(c.status().unwrap().success());
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
        v
    };
    let a = run("", "a");
    let b = run("11", "b");
    let c = run("12", "c");
    assert_eq!(a["config"]["seed"], 11);
    assert_eq!(a["result"], b["result"]);
    assert_ne!(a["result"], c["result"]);
}

#[test]
fn failed_statistical_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // k = 1 histograms are Bernoulli, far from the Poisson target
    let body = ANNEALED.replace("\"k\": 8", "\"k\": 1");
    let cfg = write_config(dir.path(), &body);
    let status = bin().args(["annealed", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn config_errors_exit_two_with_the_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &ANNEALED.replace("\"n_samples\": 3000", "\"n_samples\": 10"));
    let out = bin().args(["annealed", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_samples"));

    let cfg = write_config(dir.path(), ANNEALED);
    let out = bin().args(["quenched", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mode"));

    let missing = dir.path().join("nope.json");
    let out = bin().args(["oracle", "--config"]).arg(&missing).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn concentration_writes_exceedance_csv() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{
        "model": {"type": "markov", "transition": [["9/10", "1/10"], ["1/5", "4/5"]]},
        "k": 4,
        "sets": [[{"lo": 0, "hi": 1}]],
        "mode": "CONCENTRATION",
        "n_samples": 200,
        "n_cap": 300,
        "seed": 4,
        "concentration": {"t_grid": [0.5, 1, 2, 4]}
    }"#;
    let cfg = write_config(dir.path(), body);
    let out = dir.path().join("o");
    let status = bin().args(["concentration", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("exceedance.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("set,t,empirical_prob,theoretical_bound,se,flag"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn mixing_and_oracle_modes() {
    let dir = tempfile::tempdir().unwrap();
    let mixing = r#"{"model": {"type": "gauss_cf"}, "k": 4, "sets": [], "mode": "MIXING"}"#;
    let cfg = write_config(dir.path(), mixing);
    let out = dir.path().join("m");
    assert_eq!(bin().args(["mixing", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap().code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["eta"], "UNSUPPORTED");
    assert_eq!(v["result"]["profile"]["sigma"]["provenance"], "ASSUMED");

    let oracle = r#"{"model": {"type": "iid", "probs": [0.5, 0.5]}, "k": 5,
                     "sets": [[{"lo": 0, "hi": 1}]], "mode": "ORACLE"}"#;
    let cfg = write_config(dir.path(), oracle);
    let out = dir.path().join("q");
    assert_eq!(bin().args(["oracle", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap().code(), Some(0));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let file = poissonlab::config::ConfigFile::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        assert!(name.starts_with(file.mode_name()), "{name}");
        file.to_experiment(None).unwrap();
        seen += 1;
    }
    assert!(seen >= 5);
}
