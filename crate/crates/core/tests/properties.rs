use proptest::prelude::*;

use poissonlab_core::mixing::{delta_matrix, delta_norm, mcdiarmid_tail, EtaMatrix};
use poissonlab_core::oracles::{brute_force_distribution, exact_expectation};
use poissonlab_core::point_process::{j_set, make_interval_union, scaled_in_set, Interval};
use poissonlab_core::poisson_stats::tv_distance;
use poissonlab_core::{BigRational, CylinderMass, MeasureModel, SequenceGenerator, Word};

fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn interval() -> impl Strategy<Value = Interval> {
    (0u64..40, 0u64..40, 1u64..9, any::<bool>(), any::<bool>()).prop_map(|(a, b, d, lc, hc)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(rat(lo, d), rat(hi, d), lc, hc)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn index_set_membership_is_exact(ivs in prop::collection::vec(interval(), 1..4), num in 1u64..20, den in 20u64..200) {
        let s = make_interval_union(ivs).unwrap();
        let mass = CylinderMass::Rational(rat(num, den));
        let j = j_set(&mass, &s).unwrap();
        for i in 1..=1000u64 {
            prop_assert_eq!(j.contains(i), scaled_in_set(&mass, i, &s).unwrap(), "i = {}", i);
        }
    }

    #[test]
    fn tv_is_a_bounded_symmetric_distance(raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..12)) {
        let (sp, sq): (f64, f64) = raw.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        prop_assume!(sp > 0.1 && sq > 0.1);
        let p: Vec<f64> = raw.iter().map(|&(x, _)| x / sp).collect();
        let q: Vec<f64> = raw.iter().map(|&(_, y)| y / sq).collect();
        let a = tv_distance(&p, &q).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        prop_assert!((a - tv_distance(&q, &p).unwrap()).abs() < 1e-15);
        prop_assert!(tv_distance(&p, &p).unwrap() < 1e-15);
    }

    #[test]
    fn delta_norm_sits_between_one_and_the_row_sum(lags in prop::collection::vec(0.0f64..1.0, 0..12), tail in 0.0f64..0.8, n in 1usize..60) {
        let eta = EtaMatrix::from_lags(lags, tail).unwrap();
        let d = delta_norm(&delta_matrix(&eta, n), 1e-12).unwrap().value;
        let row: f64 = (0..n).map(|m| eta.lag(m)).sum();
        prop_assert!(d >= 1.0 - 1e-9 && d <= row + 1e-9, "{} vs {}", d, row);
    }

    #[test]
    fn mcdiarmid_is_monotone(t in 0.01f64..20.0, dt in 0.0f64..5.0, dn in 1.0f64..4.0, c in 0.01f64..5.0, dc in 0.0f64..5.0) {
        prop_assert!(mcdiarmid_tail(t + dt, dn, c) <= mcdiarmid_tail(t, dn, c));
        prop_assert!(mcdiarmid_tail(t, dn, c + dc) >= mcdiarmid_tail(t, dn, c));
    }

    #[test]
    fn generator_prefixes_are_consistent(seed in any::<u64>(), n in 1usize..64, extra in 0usize..64, gauss in any::<bool>()) {
        let model = if gauss { MeasureModel::gauss_cf() } else { MeasureModel::iid_f64(&[0.2, 0.5, 0.3]).unwrap() };
        let short = SequenceGenerator::streaming(&model, seed).take(n).unwrap();
        let long = SequenceGenerator::streaming(&model, seed).take(n + extra).unwrap();
        prop_assert_eq!(&long[..n], &short[..]);
        let exact = SequenceGenerator::new(&model, seed).take(n).unwrap();
        prop_assert_eq!(exact, short);
    }

    #[test]
    fn markov_expectation_matches_enumerated_mean(w in prop::collection::vec(0u64..2, 1..4), hi in 1u64..4) {
        let chain = MeasureModel::markov(vec![vec![rat(7, 10), rat(3, 10)], vec![rat(1, 4), rat(3, 4)]]).unwrap();
        let s = make_interval_union(vec![Interval::new(rat(0, 1), rat(hi, 2), false, true)]).unwrap();
        let w = Word::new(w);
        let e = exact_expectation(&chain, &w, &s).unwrap();
        let d = brute_force_distribution(&chain, &w, &s);
        // low-mass words need windows past the enumeration guard
        prop_assume!(d.is_ok());
        let d = d.unwrap();
        prop_assert_eq!(e.exact.unwrap(), d.mean());
    }
}
