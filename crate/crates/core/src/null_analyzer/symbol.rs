//! Evaluation of quadratic parts on symbol data
//! `ξ_j → λ_j, ξ'_{j,a} → X_a μ_j, ξ''_{j,k,a} → X_k X_a ν_j`.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rational::{self, Rational};
use crate::system_model::{Deriv, QuadraticForm, VarRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {0}")]
pub struct DimensionMismatch(pub String);

fn symbol_value<T>(v: &VarRef, offset: usize, lambda: &[T], mu: &[T], nu: &[T], x: &[T; 4]) -> T
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    if v.component <= offset {
        return T::zero();
    }
    let j = v.component - offset - 1;
    match v.deriv {
        Deriv::None => lambda[j].clone(),
        Deriv::First(a) => x[a as usize].clone() * mu[j].clone(),
        Deriv::Second(k, a) => x[k as usize].clone() * x[a as usize].clone() * nu[j].clone(),
    }
}

fn check_dims(f: &QuadraticForm, offset: usize, len: [usize; 3]) -> Result<usize, DimensionMismatch> {
    if len[0] != len[1] || len[1] != len[2] {
        return Err(DimensionMismatch(format!("λ, μ, ν have lengths {:?}", len)));
    }
    let needed = f.max_component().saturating_sub(offset);
    if needed > len[0] {
        return Err(DimensionMismatch(format!("form uses component {} but data covers {}", offset + needed, offset + len[0])));
    }
    Ok(len[0])
}

/// Evaluate the wave part of `f` on null data. `lambda`, `mu`, `nu` are
/// indexed by wave unknown (component `n1 + j + 1`); KG variables are set
/// to zero.
pub fn eval_on_null_data(
    f: &QuadraticForm,
    n1: usize,
    lambda: &[f64],
    mu: &[f64],
    nu: &[f64],
    x: &[f64; 4],
) -> Result<f64, DimensionMismatch> {
    check_dims(f, n1, [lambda.len(), mu.len(), nu.len()])?;
    Ok(f.eval(|v| symbol_value(v, n1, lambda, mu, nu, x)))
}

pub fn eval_on_null_data_exact(
    f: &QuadraticForm,
    n1: usize,
    lambda: &[Rational],
    mu: &[Rational],
    nu: &[Rational],
    x: &[Rational; 4],
) -> Result<Rational, DimensionMismatch> {
    check_dims(f, n1, [lambda.len(), mu.len(), nu.len()])?;
    Ok(f.eval_exact(|v| symbol_value(v, n1, lambda, mu, nu, x)))
}

/// Minkowski square `X_0² − |X|²`.
pub fn minkowski_square(x: &[Rational; 4]) -> Rational {
    &x[0] * &x[0] - &x[1] * &x[1] - &x[2] * &x[2] - &x[3] * &x[3]
}

/// Symbol data at which a form does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolWitness {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub lambda: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub mu: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub nu: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

pub const WITNESS_SEED: u64 = 0x6e75_6c6c;
pub const WITNESS_ATTEMPTS: usize = 10_000;

fn random_fraction(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    rational::frac(rng.gen_range(-range..=range), rng.gen_range(1..=range))
}

/// Random rational point of the future null cone with `X_0 = 1`, via the
/// inverse stereographic projection of the unit sphere.
pub fn random_null_vector(rng: &mut ChaCha8Rng) -> [Rational; 4] {
    let s = random_fraction(rng, 6);
    let t = random_fraction(rng, 6);
    let one = Rational::one();
    let d = &one + &s * &s + &t * &t;
    let two = rational::int(2);
    [one.clone(), &two * &s / &d, &two * &t / &d, (&one - &s * &s - &t * &t) / &d]
}

fn axis_null_vectors() -> Vec<[Rational; 4]> {
    let mut out = Vec::new();
    for k in 1..4 {
        for sign in [1, -1] {
            let mut x = [rational::one(), rational::zero(), rational::zero(), rational::zero()];
            x[k] = rational::int(sign);
            out.push(x);
        }
    }
    out
}

/// Search for null symbol data on which the wave part of `f` is nonzero.
/// Axis null vectors with unit data are tried first, then seeded random
/// rational null vectors with small integer data.
pub fn find_null_witness(f: &QuadraticForm, n1: usize, n2: usize) -> Option<SymbolWitness> {
    let zeros = vec![rational::zero(); n2];
    let ones = vec![rational::one(); n2];
    let mut tries: Vec<([Rational; 4], [Vec<Rational>; 3])> = Vec::new();
    for x in axis_null_vectors() {
        tries.push((x.clone(), [zeros.clone(), ones.clone(), zeros.clone()]));
        tries.push((x.clone(), [ones.clone(), zeros.clone(), zeros.clone()]));
        tries.push((x.clone(), [zeros.clone(), zeros.clone(), ones.clone()]));
        tries.push((x, [ones.clone(), ones.clone(), ones.clone()]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let data = |rng: &mut ChaCha8Rng| (0..n2).map(|_| rational::int(rng.gen_range(-3..=3))).collect::<Vec<_>>();
    let fixed = tries.len();
    for attempt in 0..WITNESS_ATTEMPTS {
        let (x, [l, m, n]) = if attempt < fixed {
            tries[attempt].clone()
        } else if attempt < 2 * fixed {
            let x = tries[attempt - fixed].0.clone();
            (x, [data(&mut rng), data(&mut rng), data(&mut rng)])
        } else {
            (random_null_vector(&mut rng), [data(&mut rng), data(&mut rng), data(&mut rng)])
        };
        let value = eval_on_null_data_exact(f, n1, &l, &m, &n, &x).ok()?;
        if !value.is_zero() {
            return Some(SymbolWitness { x: x.to_vec(), lambda: l, mu: m, nu: n, value });
        }
    }
    None
}

/// Search for arbitrary (not necessarily null) symbol data on which `f`
/// is nonzero; all `n` components take part.
pub fn find_symbol_witness(f: &QuadraticForm, n: usize) -> Option<SymbolWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    for _ in 0..WITNESS_ATTEMPTS {
        let x = [0; 4].map(|_| rational::int(rng.gen_range(-3..=3)));
        let mut data = || (0..n).map(|_| rational::int(rng.gen_range(-3..=3))).collect::<Vec<_>>();
        let (l, m, nu) = (data(), data(), data());
        let value = eval_on_null_data_exact(f, 0, &l, &m, &nu, &x).ok()?;
        if !value.is_zero() {
            return Some(SymbolWitness { x: x.to_vec(), lambda: l, mu: m, nu, value });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q0_11() -> QuadraticForm {
        let mut f = QuadraticForm::new();
        f.add_term(VarRef::first(1, 0), VarRef::first(1, 0), int(1));
        for k in 1..4 {
            f.add_term(VarRef::first(1, k), VarRef::first(1, k), int(-1));
        }
        f
    }

    #[test]
    fn examples() {
        let dt = VarRef::first(1, 0);
        let f = QuadraticForm::new().with_term(dt, dt, int(1));
        let x = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(eval_on_null_data(&f, 0, &[0.0], &[1.0], &[0.0], &x).unwrap(), 1.0);
        assert_eq!(eval_on_null_data(&q0_11(), 0, &[0.0], &[1.0], &[0.0], &x).unwrap(), 0.0);

        let q12 = QuadraticForm::new()
            .with_term(VarRef::first(1, 1), VarRef::first(2, 2), int(1))
            .with_term(VarRef::first(1, 2), VarRef::first(2, 1), int(-1));
        let x = [0.3, -1.2, 0.7, 2.0];
        let v = eval_on_null_data(&q12, 0, &[1.0, 2.0], &[0.5, -3.0], &[1.0, 1.0], &x).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(eval_on_null_data(&q0_11(), 0, &[0.0], &[1.0, 2.0], &[0.0], &[1.0; 4]).is_err());
        assert!(eval_on_null_data(&q0_11(), 0, &[], &[], &[], &[1.0; 4]).is_err());
    }

    #[test]
    fn random_null_vectors_are_null() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(minkowski_square(&random_null_vector(&mut rng)).is_zero());
        }
    }

    #[test]
    fn witness_for_time_derivative_square() {
        let dt = VarRef::first(1, 0);
        let f = QuadraticForm::new().with_term(dt, dt, int(1));
        let w = find_null_witness(&f, 0, 1).unwrap();
        assert_eq!(w.x, vec![int(1), int(1), int(0), int(0)]);
        assert_eq!(w.mu, vec![int(1)]);
        assert!(find_null_witness(&q0_11(), 0, 1).is_none());
    }
}
