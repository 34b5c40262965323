use nullkg::examples::{catalog, gamma};
use nullkg::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nullkg::null_analyzer::analyze_system;

#[test]
fn catalog_classifications() {
    for f in catalog::catalog().into_iter().chain(catalog::extras()) {
        let report = analyze_system(&f.spec);
        assert_eq!(report.applies(), f.expected.applies, "{}", f.name);
        assert_eq!(report.partition_sets(), f.expected.partition, "{}", f.name);
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> gamma::CMat {
    let a: gamma::CMat = std::array::from_fn(|_| std::array::from_fn(|_| gamma::c(rng.gen_range(-3..=3), rng.gen_range(-3..=3))));
    gamma::add(&a, &gamma::adjoint(&a))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5..=5);
    }
    Rational::new(n.into(), rng.gen_range(1..=4).into())
}

#[test]
fn dirac_klein_gordon_does_not_depend_on_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3 {
        let (h, c) = (random_hermitian(&mut rng), nonzero(&mut rng));
        let massive_dirac = analyze_system(&catalog::dkg_massive_dirac_with(&c, 2.0, &h));
        assert_eq!(massive_dirac.partition_sets(), Some((vec![1], vec![])));
        let massive_kg = analyze_system(&catalog::dkg_massive_kg_with(&c, 0.5, &h));
        assert_eq!(massive_kg.partition_sets(), Some((vec![], (1..=8).collect())));
    }
}

#[test]
fn typical_example_with_random_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let spec = catalog::typical_example_with(1.5, &mut || nonzero(&mut rng));
        let rep = analyze_system(&spec);
        assert!(rep.applies());
        assert_eq!(rep.partition_sets(), Some((vec![1], vec![2])));
    }
}
