//! Seeded generators shared by the oracle tests.
#![allow(dead_code)]

use nullkg::null_analyzer::{expand_divergence, q0, qab, Factor};
use nullkg::rational::{int, Rational};
use nullkg::system_model::{Equation, QuadraticForm, SystemSpec, VarRef};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_coeff(rng: &mut ChaCha8Rng) -> Rational {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-4..=4);
    }
    int(c)
}

/// Any jet variable the system format can hold.
pub fn random_var(rng: &mut ChaCha8Rng, comps: std::ops::RangeInclusive<usize>) -> VarRef {
    let c = rng.gen_range(comps);
    match rng.gen_range(0..3) {
        0 => VarRef::value(c),
        1 => VarRef::first(c, rng.gen_range(0..4)),
        _ => VarRef::second(c, rng.gen_range(1..4), rng.gen_range(0..4)),
    }
}

fn random_factor(rng: &mut ChaCha8Rng, comps: std::ops::RangeInclusive<usize>) -> Factor {
    let c = rng.gen_range(comps);
    let alpha = if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(0..4)) };
    Factor::new(c, alpha)
}

/// Random combination of `Q_0` and `Q_ab` forms.
pub fn random_null_combination(rng: &mut ChaCha8Rng, comps: std::ops::RangeInclusive<usize>, terms: usize) -> QuadraticForm {
    let mut out = QuadraticForm::new();
    let mut added = 0;
    while added < terms {
        let f = random_factor(rng, comps.clone());
        let g = random_factor(rng, comps.clone());
        let form = if rng.gen_bool(0.4) {
            q0(f, g)
        } else {
            let mut ab = [0u8, 1, 2, 3];
            ab.shuffle(rng);
            let (a, b) = (ab[0].min(ab[1]), ab[0].max(ab[1]));
            qab(a, b, f, g)
        };
        if let Some(q) = form {
            out.add_scaled(&q, &small_coeff(rng));
            added += 1;
        }
    }
    out
}

pub fn random_form(rng: &mut ChaCha8Rng, comps: std::ops::RangeInclusive<usize>, terms: usize) -> QuadraticForm {
    let mut out = QuadraticForm::new();
    for _ in 0..terms {
        out.add_term(random_var(rng, comps.clone()), random_var(rng, comps.clone()), small_coeff(rng));
    }
    out
}

/// A pure wave system with `n2` unknowns; each equation is a null
/// combination, an arbitrary form, or a null combination perturbed by one
/// arbitrary term.
pub fn random_wave_system(rng: &mut ChaCha8Rng, n2: usize) -> SystemSpec {
    let eqs = (0..n2)
        .map(|_| {
            let q = match rng.gen_range(0..3) {
                0 => {
                    let k = rng.gen_range(1..4);
                    random_null_combination(rng, 1..=n2, k)
                }
                1 => {
                    let k = rng.gen_range(1..4);
                    random_form(rng, 1..=n2, k)
                }
                _ => {
                    let k = rng.gen_range(1..3);
                    let mut q = random_null_combination(rng, 1..=n2, k);
                    q.add_form(&random_form(rng, 1..=n2, 1));
                    q
                }
            };
            Equation::quadratic(q)
        })
        .collect();
    SystemSpec::new(n2, 0, vec![0.0; n2], eqs).expect("valid random system")
}

fn low_var(rng: &mut ChaCha8Rng, comps: std::ops::RangeInclusive<usize>) -> VarRef {
    let c = rng.gen_range(comps);
    if rng.gen_bool(0.3) {
        VarRef::value(c)
    } else {
        VarRef::first(c, rng.gen_range(0..4))
    }
}

/// `G_0..G_3` quadratic in `(u, ∂u)` whose divergence is representable,
/// together with that divergence.
pub fn random_divergence(rng: &mut ChaCha8Rng, n: usize) -> ([QuadraticForm; 4], QuadraticForm) {
    loop {
        let g: [QuadraticForm; 4] = std::array::from_fn(|_| {
            let mut q = QuadraticForm::new();
            for _ in 0..rng.gen_range(0..3) {
                q.add_term(low_var(rng, 1..=n), low_var(rng, 1..=n), small_coeff(rng));
            }
            q
        });
        if let Ok(f) = expand_divergence(&g) {
            if !f.is_zero() {
                return (g, f);
            }
        }
    }
}

fn random_fraction(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=9).into())
}

/// `(λ, μ X, ν X X)` substituted for `(u, ∂u, ∂∂u)` of each unknown.
fn symbol(f: &QuadraticForm, x: &[Rational; 4], lambda: &[Rational], mu: &[Rational], nu: &[Rational]) -> Rational {
    use nullkg::system_model::Deriv;
    f.eval_exact(|v| {
        let j = v.component - 1;
        match v.deriv {
            Deriv::None => lambda[j].clone(),
            Deriv::First(a) => &x[a as usize] * &mu[j],
            Deriv::Second(k, a) => &x[k as usize] * &x[a as usize] * &nu[j],
        }
    })
}

/// True iff `f` vanished at every one of `samples` random rational points
/// of the null cone (with random symbol data).
pub fn vanishes_on_sampled_cone(f: &QuadraticForm, n: usize, rng: &mut ChaCha8Rng, samples: usize) -> bool {
    let one = Rational::from_integer(1.into());
    let two = Rational::from_integer(2.into());
    (0..samples).all(|_| {
        let (s, t) = (random_fraction(rng), random_fraction(rng));
        let d = &one + &s * &s + &t * &t;
        let scale = random_fraction(rng) + Rational::new(1.into(), 10.into());
        let x = [
            scale.clone(),
            &scale * &two * &s / &d,
            &scale * &two * &t / &d,
            &scale * (&one - &s * &s - &t * &t) / &d,
        ];
        let data: Vec<Vec<Rational>> = (0..3).map(|_| (0..n).map(|_| random_fraction(rng)).collect()).collect();
        symbol(f, &x, &data[0], &data[1], &data[2]) == Rational::from_integer(0.into())
    })
}
