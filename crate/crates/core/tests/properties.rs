use nmfa::gset;
use nmfa::metrics::{self, time_to_solution, GroundTruth};
use nmfa::solver::RunResult;
use nmfa::{Energy, IsingProblem, SpinConfig, SpinVector};
use proptest::prelude::*;

fn problem_strategy(integer: bool) -> impl Strategy<Value = IsingProblem> {
    (2usize..24).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let m = pairs.len();
        let weight = if integer {
            prop_oneof![(-5i32..=-1).prop_map(f64::from), (1i32..=5).prop_map(f64::from)].boxed()
        } else {
            prop_oneof![-3.0..-0.01f64, 0.01..3.0f64].boxed()
        };
        proptest::collection::vec(proptest::option::weighted(0.4, weight), m).prop_map(move |ws| {
            let couplers = pairs.iter().zip(ws).filter_map(|(&(i, j), w)| w.map(|w| (i, j, w)));
            IsingProblem::from_couplers(n, couplers).unwrap()
        })
    })
}

fn config_for(n: usize) -> impl Strategy<Value = SpinConfig> {
    proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n)
        .prop_map(|v| SpinConfig::new(v).unwrap())
}

proptest! {
    #[test]
    fn energy_is_flip_symmetric_without_fields(
        (p, c) in problem_strategy(true).prop_flat_map(|p| { let n = p.n(); (Just(p), config_for(n)) })
    ) {
        prop_assert_eq!(p.energy(&c).unwrap(), p.energy(&c.flipped()).unwrap());
    }

    #[test]
    fn cut_and_energy_sum_to_total_weight(
        (p, c) in problem_strategy(true).prop_flat_map(|p| { let n = p.n(); (Just(p), config_for(n)) })
    ) {
        let cut = p.cut_value(&c).unwrap();
        let e = p.energy(&c).unwrap().value();
        prop_assert_eq!(2.0 * cut + e, p.total_weight());
    }

    #[test]
    fn mean_field_is_linear(
        (p, s, t) in problem_strategy(false).prop_flat_map(|p| {
            let n = p.n();
            (Just(p), proptest::collection::vec(-1.0..=1.0f64, n), proptest::collection::vec(-1.0..=1.0f64, n))
        }),
        a in -1.0..1.0f64,
        b in -1.0..1.0f64,
    ) {
        let mix: Vec<f64> = s.iter().zip(&t).map(|(x, y)| (a * x + b * y) / 2.0).collect();
        let phi_s = p.mean_field(&SpinVector::new(s).unwrap()).unwrap();
        let phi_t = p.mean_field(&SpinVector::new(t).unwrap()).unwrap();
        let phi_mix = p.mean_field(&SpinVector::new(mix).unwrap()).unwrap();
        for i in 0..p.n() {
            let want = (a * phi_s[i] + b * phi_t[i]) / 2.0;
            prop_assert!((phi_mix[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn gset_round_trip(p in problem_strategy(true)) {
        let text = gset::write(&p).unwrap();
        let back = gset::parse(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(gset::write(&back).unwrap(), text);
    }

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = gset::parse_bytes(&bytes);
    }

    #[test]
    fn parser_never_panics_on_numeric_noise(text in "[0-9 \\-\\n.ec#]{0,120}") {
        if let Err(e) = gset::parse(&text) {
            prop_assert!(e.line >= 1);
        }
    }

    #[test]
    fn success_probability_ignores_order(
        mut energies in proptest::collection::vec(-5i32..0, 1..60),
        target in -5i32..0,
    ) {
        let results = |es: &[i32]| -> Vec<RunResult> {
            es.iter().map(|&e| RunResult {
                final_config: SpinConfig::all_up(1),
                final_energy: Energy(f64::from(e)),
                seed: 0,
                trajectory: None,
            }).collect()
        };
        let ground = GroundTruth::best_known(f64::from(target));
        let before = metrics::success_probability(&results(&energies), &ground).unwrap();
        energies.reverse();
        let third = energies.len() / 3;
        energies.rotate_left(third);
        prop_assert_eq!(before, metrics::success_probability(&results(&energies), &ground).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn summaries_match_sort_reference(values in proptest::collection::vec(-1e3..1e3f64, 1..50)) {
        let s = metrics::summarize(&values).unwrap();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let reference = |q: f64| {
            let h = (sorted.len() - 1) as f64 * q;
            let lo = h.floor() as usize;
            sorted[lo] + (h - lo as f64) * (sorted[(lo + 1).min(sorted.len() - 1)] - sorted[lo])
        };
        prop_assert!((s.median - reference(0.5)).abs() < 1e-9);
        prop_assert!((s.q25 - reference(0.25)).abs() < 1e-9);
        prop_assert!((s.q75 - reference(0.75)).abs() < 1e-9);
    }
}

#[test]
fn tts_is_monotone_on_a_grid() {
    let mut last = f64::INFINITY;
    for k in 0..=1000 {
        let p = k as f64 / 1000.0;
        let t = time_to_solution(p, 1.0, 0.99).unwrap();
        assert!(t <= last, "p={p}");
        last = t;
    }
    assert_eq!(time_to_solution(0.99, 1.0, 0.99).unwrap(), 1.0);
}
