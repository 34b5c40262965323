mod common;

use nullkg::examples::{catalog, co_simulate};
use nullkg::null_analyzer::{analyze_system, check_null_condition, check_strong_null, divergence_decompose};
use nullkg::solver::{InitialData, Mode, Profile, SolverConfig};
use nullkg::system_model::{SystemSpec, VarRef};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn null_verdict_agrees_with_cone_sampling(seed in any::<u64>(), n2 in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = common::random_wave_system(&mut rng, n2);
        for (i, d) in check_null_condition(&spec).iter().enumerate() {
            let q = &spec.equation(i + 1).quadratic;
            prop_assert_eq!(d.holds(), common::vanishes_on_sampled_cone(q, n2, &mut rng, 50));
            prop_assert_eq!(d.residual.is_zero(), d.holds());
            if d.holds() {
                prop_assert_eq!(&d.expand(), q);
            }
        }
    }

    #[test]
    fn null_combinations_are_null(seed in any::<u64>(), terms in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = common::random_null_combination(&mut rng, 1..=3, terms);
        let spec = SystemSpec::new(3, 0, vec![0.0; 3], vec![
            nullkg::system_model::Equation::quadratic(q),
            nullkg::system_model::Equation::quadratic(Default::default()),
            nullkg::system_model::Equation::quadratic(Default::default()),
        ]).unwrap();
        prop_assert!(check_null_condition(&spec)[0].holds());
    }

    #[test]
    fn divergence_certificates_reexpand(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, f) = common::random_divergence(&mut rng, n);
        let cert = divergence_decompose(&f);
        prop_assert!(cert.holds());
        prop_assert_eq!(cert.expand(), f.clone());

        let j = rng.gen_range(1..=n);
        let mut g = f;
        g.add_term(VarRef::value(j), VarRef::value(j), common::small_coeff(&mut rng));
        prop_assert!(!divergence_decompose(&g).holds());
    }

    #[test]
    fn spec_json_roundtrip(seed in any::<u64>(), n2 in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = common::random_wave_system(&mut rng, n2);
        let text = spec.to_json_string();
        let back = SystemSpec::from_json_str(&text).unwrap();
        prop_assert_eq!(back.to_json_string(), text);
        prop_assert_eq!(back.equations(), spec.equations());
    }
}

#[test]
fn strong_null_implies_null() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let spec = common::random_wave_system(&mut rng, 2);
        for (weak, strong) in check_null_condition(&spec).iter().zip(check_strong_null(&spec)) {
            assert!(!strong.holds || weak.holds());
        }
    }
}

#[test]
fn fixtures_survive_json() {
    for f in catalog::catalog().into_iter().chain(catalog::extras()) {
        let back = SystemSpec::from_json_str(&f.spec.to_json_string()).unwrap();
        assert_eq!(analyze_system(&back).applies(), analyze_system(&f.spec).applies(), "{}", f.name);
    }
}

#[test]
fn kata_cosimulation_refines_at_second_order() {
    let data = InitialData::uniform(Profile::Gaussian { r0: 1.0 }, 2, 1.0, 0.0);
    let run = |dr: f64| {
        let cfg = SolverConfig { t_end: 5.0, epsilon: 0.05, mode: Mode::Radial { dr, r_max: None }, ..Default::default() };
        co_simulate(&catalog::kata_raw(), &data, &cfg, 0.1).unwrap()
    };
    let (coarse, fine) = (run(0.1), run(0.05));
    assert!(fine.samples[0].max_diff < 1e-14);
    let ratio = coarse.worst / fine.worst;
    assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
}
