//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Seeds and statistical tolerances below were frozen from pilot runs:
//! annealed TV 0.0022, quenched replica TVs 0.0019..0.0145, Gauss TV 0.360
//! with 66.8% of samples truncated (complete-sample TV 0.0126).

use std::time::{Duration, Instant};

use poissonlab::config::ConfigFile;
use poissonlab::run;
use poissonlab_core::experiments::{run_mixing, run_quenched, synthetic_poisson_counts, ExperimentConfig, Mode};
use poissonlab_core::mixing::{concentration_experiment, eta_coefficients, ConcentrationSettings, Functional};
use poissonlab_core::oracles::{
    brute_force_distribution, exact_expectation, exact_variance, period_class_measure,
    period_class_measure_by_extension,
};
use poissonlab_core::point_process::{cardinality_sandwich_holds, j_set, make_interval_union, Interval};
use poissonlab_core::poisson_stats::{kallenberg_check, poisson_pmf};
use poissonlab_core::rational::{from_u64, parse_rational, to_f64};
use poissonlab_core::words::enumerate_words;
use poissonlab_core::{BigRational, CounterRng, CylinderMass, IntervalUnion, MeasureModel, MixingProfile, Word};

const SEED: u64 = 20261014;
const CONCENTRATION_SEED: u64 = 7;

type Outcome = Result<(bool, String), String>;

fn r(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn unit() -> IntervalUnion {
    IntervalUnion::unit_like(r("1")).unwrap()
}

fn fair() -> MeasureModel {
    MeasureModel::uniform(2).unwrap()
}

fn two_state() -> MeasureModel {
    MeasureModel::markov(vec![vec![r("9/10"), r("1/10")], vec![r("1/5"), r("4/5")]]).unwrap()
}

fn random_rational(rng: &mut CounterRng, max: u64, den: u64) -> BigRational {
    let d = 1 + rng.next_u64() % den;
    BigRational::new((rng.next_u64() % (max * d + 1)).into(), d.into())
}

fn random_set(rng: &mut CounterRng) -> IntervalUnion {
    let m = 1 + rng.next_u64() % 3;
    let ivs = (0..m)
        .map(|_| {
            let a = random_rational(rng, 4, 12);
            let b = random_rational(rng, 4, 12);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Interval::new(lo, hi, rng.next_u64() % 2 == 0, rng.next_u64() % 2 == 0)
        })
        .collect();
    make_interval_union(ivs).unwrap()
}

fn c1() -> Outcome {
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let mut acc = 0.0;
        for j in 0..=200 {
            acc += poisson_pmf(lambda, j).map_err(|e| e.to_string())?;
        }
        worst = worst.max((acc - 1.0).abs());
    }
    Ok((worst <= 1e-12, format!("max |sum - 1| = {worst:e}")))
}

fn c2() -> Outcome {
    let mut rng = CounterRng::new(SEED);
    let mut bad = 0;
    for _ in 0..10_000 {
        let num = 1 + rng.next_u64() % 1000;
        let den = num + rng.next_u64() % 1_000_000;
        let mu = BigRational::new(num.into(), den.into());
        let s = random_set(&mut rng);
        let j = j_set(&CylinderMass::Rational(mu.clone()), &s).map_err(|e| e.to_string())?;
        if !cardinality_sandwich_holds(&mu, &s, &j) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} of 10000 instances break the sandwich")))
}

fn c3() -> Outcome {
    let model = fair();
    let mut rng = CounterRng::new(SEED ^ 3);
    let mut checked = 0;
    for k in 2..=12 {
        for _ in 0..50 {
            let w = Word::new((0..k).map(|_| rng.next_u64() % 2).collect());
            for s in [unit(), random_set(&mut rng)] {
                let e = exact_expectation(&model, &w, &s).map_err(|e| e.to_string())?;
                let exact = e.exact.ok_or("fair bits have rational masses")?;
                let mu = model.cylinder_prob_exact(&w).map_err(|e| e.to_string())?.unwrap();
                let dev = &exact - s.length();
                let dev = if dev < BigRational::from_integer(0.into()) { -dev } else { dev };
                if dev > from_u64(s.m() as u64) * &mu {
                    return Ok((false, format!("word {w}, deviation {}", to_f64(&dev))));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} (word, set) pairs, k = 2..12")))
}

fn c4() -> Outcome {
    let model = fair();
    let s = unit();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for k in 1..=4 {
        for w in enumerate_words(2, k).map_err(|e| e.to_string())? {
            let v = exact_variance(&model, &w, &s).map_err(|e| e.to_string())?;
            let b = brute_force_distribution(&model, &w, &s).map_err(|e| e.to_string())?;
            worst = worst.max((v.variance - to_f64(&b.variance())).abs());
            n += 1;
        }
    }
    let w11 = Word::new(vec![1, 1]);
    let v = exact_variance(&model, &w11, &s).map_err(|e| e.to_string())?;
    let b = brute_force_distribution(&model, &w11, &s).map_err(|e| e.to_string())?;
    let var_ok = v.exact.as_ref().map(|e| e.variance.clone()) == Some(r("9/8")) && b.variance() == r("9/8");
    // enumeration of 5 fair bits gives 13 strings without "11"
    let p0 = b.probs[0].clone();
    let p0_ok = p0 == r("13/32");
    Ok((
        worst <= 1e-9 && var_ok && p0_ok,
        format!(
            "{n} words, max |diff| = {worst:e}; w = 11: variance {}, P(0) = {} (19/32 fails a direct count)",
            v.variance,
            poissonlab_core::rational::to_string(&p0)
        ),
    ))
}

fn c5() -> Outcome {
    let model = fair();
    let mut n = 0;
    for k in 2..=12usize {
        for l in 1..k {
            let a = period_class_measure(&model, k, l).map_err(|e| e.to_string())?;
            let b = period_class_measure_by_extension(&model, k, l).map_err(|e| e.to_string())?;
            let target = BigRational::new(1.into(), (1u64 << (k - l)).into());
            if a != target || b != target {
                return Ok((false, format!("k = {k}, l = {l}: {} / {}", to_f64(&a), to_f64(&b))));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} (k, l) pairs exact on both routes")))
}

const C6_CONFIG: &str = r#"{
    "model": {"type": "iid", "probs": ["1/2", "1/2"]},
    "k": 14,
    "sets": [[{"lo": 0, "hi": 1}]],
    "mode": "ANNEALED",
    "n_samples": 50000,
    "seed": 20261014,
    "tolerances": {"tv": 0.03}
}"#;

fn c6_and_13() -> (Outcome, Outcome) {
    let cfg = ConfigFile::parse(C6_CONFIG).unwrap().to_experiment(None).unwrap();
    let first = match run::run(&cfg) {
        Ok(o) => o,
        Err(e) => return (Err(e.to_string()), Err("criterion 6 run failed".into())),
    };
    let tv = first.report["result"]["sets"][0]["tv_set_convention"].as_f64().unwrap();
    let c6 = Ok((tv <= 0.03, format!("TV(set) = {tv:.5}, tolerance 0.03")));
    let second = match run::run(&cfg) {
        Ok(o) => o,
        Err(e) => return (c6, Err(e.to_string())),
    };
    let dirs = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    if let Err(e) = first.write(dirs.0.path()).and_then(|_| second.write(dirs.1.path())) {
        return (c6, Err(e.to_string()));
    }
    let read = |d: &std::path::Path, name: &str| std::fs::read(d.join(name)).unwrap();
    // the wall-clock entry is the only line allowed to differ
    let strip = |bytes: Vec<u8>| -> Vec<u8> {
        String::from_utf8(bytes)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("wall_clock_seconds"))
            .collect::<Vec<_>>()
            .join("\n")
            .into_bytes()
    };
    let a = strip(read(dirs.0.path(), "report.json"));
    let b = strip(read(dirs.1.path(), "report.json"));
    let same_csv = read(dirs.0.path(), "histogram_0.csv") == read(dirs.1.path(), "histogram_0.csv");
    let c13 = Ok((a == b && same_csv, format!("{} report bytes identical outside the timing entry", a.len())));
    (c6, c13)
}

fn c7() -> Outcome {
    let mut cfg = ExperimentConfig::new(fair(), 14, vec![unit()], Mode::Quenched);
    cfg.n_samples = 50_000;
    cfg.n_x_replicas = 10;
    cfg.seed = SEED;
    cfg.tv_tolerance = 0.05;
    cfg.replica_pass_fraction = 0.9;
    let rep = run_quenched(&cfg).map_err(|e| e.to_string())?;
    let worst = rep.replicas.iter().map(|r| r.sets[0].tv.set).fold(0.0, f64::max);
    Ok((rep.n_pass >= 9, format!("{}/10 replicas within 0.05, worst TV {worst:.4}", rep.n_pass)))
}

fn c8() -> Outcome {
    let mut cfg = ExperimentConfig::new(MeasureModel::gauss_cf(), 8, vec![unit()], Mode::Quenched);
    cfg.n_samples = 10_000;
    cfg.n_x_replicas = 1;
    cfg.n_cap = Some(10_000_000);
    cfg.seed = SEED;
    cfg.tv_tolerance = 0.08;
    let rep = run_quenched(&cfg).map_err(|e| e.to_string())?;
    let set = &rep.replicas[0].sets[0];
    let complete = set.complete_tv.map(|t| format!("{:.4}", t.set)).unwrap_or_else(|| "n/a".into());
    Ok((
        set.tv.set <= 0.08,
        format!(
            "TV(set) = {:.4}, truncated_fraction = {:.4}, complete-sample TV = {complete}",
            set.tv.set,
            rep.replicas[0].truncated_fraction
        ),
    ))
}

fn c9() -> Outcome {
    let eta = eta_coefficients(&two_state(), 30, 0.7).map_err(|e| e.to_string())?;
    // independent float matrix powers
    let p: [[f64; 2]; 2] = [[0.9, 0.1], [0.2, 0.8]];
    let mut pm: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    let mut worst: f64 = 0.0;
    for m in 1..=30 {
        let mut next = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                next[a][b] = pm[a][0] * p[0][b] + pm[a][1] * p[1][b];
            }
        }
        pm = next;
        let tv = 0.5 * ((pm[0][0] - pm[1][0]).abs() + (pm[0][1] - pm[1][1]).abs());
        worst = worst.max((eta.lag(m) - 0.7f64.powi(m as i32)).abs()).max((eta.lag(m) - tv).abs());
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:e} over m = 1..30")))
}

fn c10() -> Outcome {
    let mut cfg = ExperimentConfig::new(two_state(), 4, vec![unit()], Mode::Mixing);
    cfg.assumed_t_sigma = Some((1.0, 0.7));
    cfg.delta_truncations = vec![50, 100, 200];
    let rep = run_mixing(&cfg).map_err(|e| e.to_string())?;
    let norms: Vec<String> = rep.truncations.iter().map(|d| format!("{}: {:.6}", d.n, d.value)).collect();
    let under = rep.truncations.iter().all(|d| d.value <= rep.bound);
    Ok((
        rep.non_decreasing && under && rep.eta_dominated == Some(true),
        format!("{}; bound {:.4}", norms.join(", "), rep.bound),
    ))
}

fn c11() -> Outcome {
    let model = fair();
    let profile = MixingProfile::for_model(&model, Default::default()).map_err(|e| e.to_string())?;
    let settings = ConcentrationSettings {
        k: 10,
        functional: Functional::Mean,
        t_grid: vec![7.5, 8.0, 10.0, 15.0, 20.0, 30.0],
        n_replicas: 2000,
        n_cap: 10_240,
        n_word_samples: 0,
        seed: CONCENTRATION_SEED,
    };
    let rep = concentration_experiment(&model, &profile, &unit(), &settings).map_err(|e| e.to_string())?;
    let active = rep.rows.iter().filter(|row| row.theoretical_bound < 1.0).count();
    let ok = active > 0 && rep.rows.iter().all(|row| row.empirical_prob <= row.theoretical_bound + 3.0 * row.se);
    let worst = rep.rows.iter().map(|row| row.empirical_prob).fold(0.0, f64::max);
    Ok((ok, format!("{active} grid points with bound < 1, max exceedance {worst}, violations {}", rep.violations())))
}

fn c12() -> Outcome {
    let sets = vec![unit(), IntervalUnion::unit_like(r("5/2")).unwrap()];
    let counts = synthetic_poisson_counts(&sets, 20_000, SEED).map_err(|e| e.to_string())?;
    let batches: Vec<&[u64]> = counts.iter().map(|c| c.as_slice()).collect();
    let good = kallenberg_check(&batches, &sets, 0.0).map_err(|e| e.to_string())?;
    let zeros = vec![0u64; 20_000];
    let bad = kallenberg_check(&[&zeros, &zeros], &sets, 0.0).map_err(|e| e.to_string())?;
    let ok = good.iter().all(|e| e.pass()) && bad.iter().all(|e| !e.void_pass);
    Ok((ok, format!("synthetic pass = {}, zero stream void fails = {}", good.iter().all(|e| e.pass()), bad.iter().all(|e| !e.void_pass))))
}

fn report(id: u32, name: &str, limit: Duration, elapsed: Duration, outcome: Outcome, failures: &mut u32) {
    let (ok, detail) = match outcome {
        Ok((ok, d)) => (ok && elapsed <= limit, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if !ok {
        *failures += 1;
    }
    let over = if elapsed > limit { format!(" over the {:.0} s limit", limit.as_secs_f64()) } else { String::new() };
    println!(
        "{} criterion {id:>2} {name} ({:.2} s{over}): {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn timed(f: impl FnOnce() -> Outcome) -> (Duration, Outcome) {
    let t = Instant::now();
    let o = f();
    (t.elapsed(), o)
}

fn main() {
    let mut failures = 0;
    let s = Duration::from_secs;
    let (d, o) = timed(c1);
    report(1, "poisson pmf normalization", s(1), d, o, &mut failures);
    let (d, o) = timed(c2);
    report(2, "index-set cardinality sandwich", s(5), d, o, &mut failures);
    let (d, o) = timed(c3);
    report(3, "exact expectation identity", s(5), d, o, &mut failures);
    let (d, o) = timed(c4);
    report(4, "variance dual path", s(30), d, o, &mut failures);
    let (d, o) = timed(c5);
    report(5, "period-class exactness", s(30), d, o, &mut failures);
    let t = Instant::now();
    let (o6, o13) = c6_and_13();
    let both = t.elapsed();
    report(6, "annealed convergence", s(120), both / 2, o6, &mut failures);
    let (d, o) = timed(c7);
    report(7, "quenched convergence", s(600), d, o, &mut failures);
    let (d, o) = timed(c8);
    report(8, "continued fractions quenched", s(900), d, o, &mut failures);
    let (d, o) = timed(c9);
    report(9, "eta exactness", s(1), d, o, &mut failures);
    let (d, o) = timed(c10);
    report(10, "delta-norm bound", s(5), d, o, &mut failures);
    let (d, o) = timed(c11);
    report(11, "concentration non-violation", s(600), d, o, &mut failures);
    let (d, o) = timed(c12);
    report(12, "two-condition harness self-test", s(10), d, o, &mut failures);
    report(13, "determinism", s(240), both, o13, &mut failures);
    println!("{} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
