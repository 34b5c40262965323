//! Dirac matrices with exact complex rational entries, and the split of
//! spinor expressions into real and imaginary parts.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::system_model::{Polynomial, QuadraticForm, VarRef};

pub type C = Complex<Rational>;
pub type CMat = [[C; 4]; 4];

pub fn c(re: i64, im: i64) -> C {
    C::new(rational::int(re), rational::int(im))
}

pub fn zero() -> CMat {
    std::array::from_fn(|_| std::array::from_fn(|_| C::zero()))
}

pub fn identity() -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { C::one() } else { C::zero() }))
}

pub fn mul(a: &CMat, b: &CMat) -> CMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(C::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
    })
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() + b[i][j].clone()))
}

pub fn scale(s: &C, a: &CMat) -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| s.clone() * a[i][j].clone()))
}

pub fn adjoint(a: &CMat) -> CMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

fn pauli(k: u8) -> [[C; 2]; 2] {
    match k {
        1 => [[c(0, 0), c(1, 0)], [c(1, 0), c(0, 0)]],
        2 => [[c(0, 0), c(0, -1)], [c(0, 1), c(0, 0)]],
        3 => [[c(1, 0), c(0, 0)], [c(0, 0), c(-1, 0)]],
        _ => unreachable!("Pauli index {k}"),
    }
}

/// `γ_a` in the Dirac representation.
pub fn gamma(a: u8) -> CMat {
    let mut g = zero();
    if a == 0 {
        for i in 0..4 {
            g[i][i] = if i < 2 { c(1, 0) } else { c(-1, 0) };
        }
        return g;
    }
    let s = pauli(a);
    for i in 0..2 {
        for j in 0..2 {
            g[i][j + 2] = s[i][j].clone();
            g[i + 2][j] = -s[i][j].clone();
        }
    }
    g
}

/// `γ_5 = −i γ_0 γ_1 γ_2 γ_3`.
pub fn gamma5() -> CMat {
    let p = mul(&mul(&gamma(0), &gamma(1)), &mul(&gamma(2), &gamma(3)));
    scale(&c(0, -1), &p)
}

/// Metric `diag(1, −1, −1, −1)`.
pub fn metric(a: u8) -> i64 {
    if a == 0 {
        1
    } else {
        -1
    }
}

/// Real components carrying `ψ = p + i q`: `p_s = re[s]`, `q_s = im[s]`.
#[derive(Clone, Copy, Debug)]
pub struct Spinor {
    pub re: [usize; 4],
    pub im: [usize; 4],
}

impl Spinor {
    pub fn contiguous(first: usize) -> Self {
        Spinor { re: std::array::from_fn(|s| first + s), im: std::array::from_fn(|s| first + 4 + s) }
    }

    /// Component index of real slot `r` (0..8): real parts then imaginary.
    pub fn slot(&self, r: usize) -> usize {
        if r < 4 {
            self.re[r]
        } else {
            self.im[r - 4]
        }
    }
}

/// Real linear forms `Re (M ψ)_r` and `Im (M ψ)_r` over the spinor's
/// components, each as `(coefficient, component)`.
pub fn apply_split(m: &CMat, psi: &Spinor, r: usize) -> (Vec<(Rational, usize)>, Vec<(Rational, usize)>) {
    let mut re = Vec::new();
    let mut im = Vec::new();
    for s in 0..4 {
        let (a, b) = (&m[r][s].re, &m[r][s].im);
        re.push((a.clone(), psi.re[s]));
        re.push((-b.clone(), psi.im[s]));
        im.push((b.clone(), psi.re[s]));
        im.push((a.clone(), psi.im[s]));
    }
    let keep = |v: Vec<(Rational, usize)>| v.into_iter().filter(|(c, _)| !c.is_zero()).collect();
    (keep(re), keep(im))
}

/// `Re (ψ* M ψ) = pᵀA p + qᵀA q + qᵀB p − pᵀB q` for `M = A + iB`.
pub fn real_sesquilinear(m: &CMat, psi: &Spinor) -> QuadraticForm {
    let mut f = QuadraticForm::new();
    let v = VarRef::value;
    for r in 0..4 {
        for s in 0..4 {
            let (a, b) = (&m[r][s].re, &m[r][s].im);
            f.add_term(v(psi.re[r]), v(psi.re[s]), a.clone());
            f.add_term(v(psi.im[r]), v(psi.im[s]), a.clone());
            f.add_term(v(psi.im[r]), v(psi.re[s]), b.clone());
            f.add_term(v(psi.re[r]), v(psi.im[s]), -b.clone());
        }
    }
    f
}

/// `Im (ψ* M ψ)`, zero for Hermitian `M`.
pub fn imaginary_sesquilinear(m: &CMat, psi: &Spinor) -> Polynomial {
    let mut p = Polynomial::zero();
    let v = VarRef::value;
    for r in 0..4 {
        for s in 0..4 {
            let (a, b) = (&m[r][s].re, &m[r][s].im);
            p.add_monomial(vec![v(psi.re[r]), v(psi.im[s])], a.clone());
            p.add_monomial(vec![v(psi.im[r]), v(psi.re[s])], -a.clone());
            p.add_monomial(vec![v(psi.re[r]), v(psi.re[s])], b.clone());
            p.add_monomial(vec![v(psi.im[r]), v(psi.im[s])], b.clone());
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(a: &CMat, b: &CMat) -> bool {
        a == b
    }

    #[test]
    fn clifford_relations() {
        for a in 0..4u8 {
            for b in 0..4u8 {
                let anti = add(&mul(&gamma(a), &gamma(b)), &mul(&gamma(b), &gamma(a)));
                let expect = if a == b { scale(&c(2 * metric(a), 0), &identity()) } else { zero() };
                assert!(eq(&anti, &expect), "{a}{b}");
            }
            let anti5 = add(&mul(&gamma(a), &gamma5()), &mul(&gamma5(), &gamma(a)));
            assert!(eq(&anti5, &zero()));
        }
        assert!(eq(&mul(&gamma5(), &gamma5()), &identity()));
        assert!(eq(&adjoint(&gamma5()), &gamma5()));
    }

    #[test]
    fn proca_currents_are_real() {
        let psi = Spinor::contiguous(1);
        let p = add(&identity(), &gamma5());
        for a in 0..4 {
            let m = mul(&mul(&gamma(0), &gamma(a)), &p);
            assert!(eq(&adjoint(&m), &m));
            assert!(imaginary_sesquilinear(&m, &psi).is_zero());
        }
    }
}
