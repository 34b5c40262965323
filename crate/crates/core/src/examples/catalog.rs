//! Built-in example systems with their known classifications.

use num_traits::Zero;

use super::gamma::{self, apply_split, real_sesquilinear, CMat, Spinor};
use super::transform::normal_form_transform;
use crate::null_analyzer::q0;
use crate::null_analyzer::{qab, Factor};
use crate::rational::{self, Rational};
use crate::system_model::{Equation, Polynomial, QuadraticForm, SystemSpec, VarRef};

/// Classification a fixture is known to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub applies: bool,
    /// `(I1, I2)` when a partition exists.
    pub partition: Option<(Vec<usize>, Vec<usize>)>,
}

impl Expected {
    fn applies(i1: &[usize], i2: &[usize]) -> Self {
        Expected { applies: true, partition: Some((i1.to_vec(), i2.to_vec())) }
    }

    fn fails() -> Self {
        Expected { applies: false, partition: None }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleFixture {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: SystemSpec,
    pub expected: Expected,
}

fn v(c: usize) -> VarRef {
    VarRef::value(c)
}

fn d(c: usize, a: u8) -> VarRef {
    VarRef::first(c, a)
}

/// `u_c` and its four first derivatives.
fn low_jet(c: usize) -> Vec<VarRef> {
    std::iter::once(v(c)).chain((0..4).map(|a| d(c, a))).collect()
}

fn first_jet(c: usize) -> Vec<VarRef> {
    (0..4).map(|a| d(c, a)).collect()
}

fn build(n: usize, n1: usize, masses: Vec<f64>, equations: Vec<Equation>) -> SystemSpec {
    SystemSpec::new(n, n1, masses, equations).expect("built-in fixture is valid")
}

/// Massive spinor `ψ` (components 1..=8, real parts first) coupled to a
/// massless scalar `φ` (component 9) through `−c Σ_a (∂_a φ) γ_a γ_5 ψ`,
/// with the cubic `−c² φ² ψ` and `□φ = ψ* H ψ`.
pub fn dkg_massive_dirac_with(c: &Rational, mass: f64, h: &CMat) -> SystemSpec {
    let psi = Spinor::contiguous(1);
    let phi = 9;
    let g5 = gamma::gamma5();
    let mut eqs = Vec::new();
    for r in 0..8 {
        let mut q = QuadraticForm::new();
        for a in 0..4 {
            let (re, im) = apply_split(&gamma::mul(&gamma::gamma(a), &g5), &psi, r % 4);
            for (coef, comp) in if r < 4 { re } else { im } {
                q.add_term(d(phi, a), v(comp), -(c * coef));
            }
        }
        let mut tail = Polynomial::zero();
        tail.add_monomial(vec![v(phi), v(phi), v(psi.slot(r))], -(c * c));
        eqs.push(Equation::quadratic(q).with_tail(tail));
    }
    eqs.push(Equation::quadratic(real_sesquilinear(h, &psi)));
    let mut masses = vec![mass; 8];
    masses.push(0.0);
    build(9, 8, masses, eqs)
}

/// Massless spinor `ψ` (components 2..=9) and a massive scalar `φ`
/// (component 1): `□ψ = −c Σ_a γ_a γ_5 ∂_a(φ ψ)`, `(□ + m²)φ = ψ* H ψ`.
pub fn dkg_massive_kg_with(c: &Rational, mass: f64, h: &CMat) -> SystemSpec {
    let psi = Spinor::contiguous(2);
    let phi = 1;
    let g5 = gamma::gamma5();
    let mut eqs = vec![Equation::quadratic(real_sesquilinear(h, &psi))];
    for r in 0..8 {
        let mut q = QuadraticForm::new();
        for a in 0..4 {
            let (re, im) = apply_split(&gamma::mul(&gamma::gamma(a), &g5), &psi, r % 4);
            for (coef, comp) in if r < 4 { re } else { im } {
                q.add_term(d(phi, a), v(comp), -(c * &coef));
                q.add_term(v(phi), d(comp, a), -(c * &coef));
            }
        }
        eqs.push(Equation::quadratic(q));
    }
    let mut masses = vec![mass];
    masses.extend([0.0; 8]);
    build(9, 1, masses, eqs)
}

/// Vector potential `A_a` (components 1..=4, mass `m`) and massless spinor
/// `ψ` (components 5..=12).
pub fn dirac_proca_with(mass: f64) -> SystemSpec {
    let psi = Spinor::contiguous(5);
    let proj = gamma::add(&gamma::identity(), &gamma::gamma5());
    let half = rational::frac(1, 2);
    let mut eqs = Vec::new();
    for a in 0..4u8 {
        let m = gamma::mul(&gamma::mul(&gamma::gamma(0), &gamma::gamma(a)), &proj);
        eqs.push(Equation::quadratic(real_sesquilinear(&m, &psi).scaled(&half)));
    }
    for r in 0..8 {
        let mut q = QuadraticForm::new();
        for b in 0..4u8 {
            for a in 0..4u8 {
                let s = gamma::C::new(Rational::zero(), rational::frac(-gamma::metric(a), 2));
                let m = gamma::scale(&s, &gamma::mul(&gamma::mul(&gamma::gamma(b), &gamma::gamma(a)), &proj));
                let (re, im) = apply_split(&m, &psi, r % 4);
                let pot = a as usize + 1;
                for (coef, comp) in if r < 4 { re } else { im } {
                    q.add_term(d(pot, b), v(comp), coef.clone());
                    q.add_term(v(pot), d(comp, b), coef);
                }
            }
        }
        eqs.push(Equation::quadratic(q));
    }
    let mut masses = vec![mass; 4];
    masses.extend([0.0; 8]);
    build(12, 4, masses, eqs)
}

/// Zakharov-type system with derivative augmentation: `v_1..v_6` are the
/// real and imaginary parts, `v_{3i+3+k} = ∂_k v_i`, `w = u_25`.
pub fn kgz_reduced() -> SystemSpec {
    let w = 25;
    let one = rational::one();
    let mut eqs = Vec::new();
    for i in 1..=6 {
        eqs.push(Equation::quadratic(QuadraticForm::new().with_term(v(w), v(i), -one.clone())));
    }
    for i in 1..=6 {
        for k in 1..=3u8 {
            let q = QuadraticForm::new()
                .with_term(v(w), d(i, k), -one.clone())
                .with_term(d(w, k), v(i), -one.clone());
            eqs.push(Equation::quadratic(q));
        }
    }
    let mut q = QuadraticForm::new();
    let two = rational::int(2);
    for j in 1..=3u8 {
        for i in 1..=3usize {
            for (x, y) in [(i, 3 * i + 3 + j as usize), (i + 3, 3 * i + 12 + j as usize)] {
                q.add_term(d(x, j), v(y), two.clone());
                q.add_term(v(x), d(y, j), two.clone());
            }
        }
    }
    eqs.push(Equation::quadratic(q));
    let mut masses = vec![1.0; 24];
    masses.push(0.0);
    build(25, 24, masses, eqs)
}

/// The same Zakharov-type system without derivative augmentation:
/// `(□+1) v_i = −w v_i`, `□w = Δ Σ_i v_i²`. All unknowns are scalar under
/// rotations, so it admits radial solutions.
pub fn kgz_radial() -> SystemSpec {
    let w = 7;
    let mut eqs: Vec<Equation> = (1..=6)
        .map(|i| Equation::quadratic(QuadraticForm::new().with_term(v(w), v(i), rational::int(-1))))
        .collect();
    let mut q = QuadraticForm::new();
    for i in 1..=6 {
        for k in 1..=3u8 {
            q.add_term(d(i, k), d(i, k), rational::int(2));
            q.add_term(v(i), VarRef::second(i, k, k), rational::int(2));
        }
    }
    eqs.push(Equation::quadratic(q));
    let mut masses = vec![1.0; 6];
    masses.push(0.0);
    build(7, 6, masses, eqs)
}

/// `u = (v, w_1, w_2)` with every free constant drawn from `next`.
pub fn typical_example_with(m: f64, next: &mut dyn FnMut() -> Rational) -> SystemSpec {
    let (vv, w1, w2) = (1, 2, 3);
    let pairs = |q: &mut QuadraticForm, xs: &[VarRef], next: &mut dyn FnMut() -> Rational| {
        for (i, x) in xs.iter().enumerate() {
            for y in &xs[i..] {
                q.add_term(*x, *y, next());
            }
        }
    };
    let cross = |q: &mut QuadraticForm, xs: &[VarRef], ys: &[VarRef], next: &mut dyn FnMut() -> Rational| {
        for x in xs {
            for y in ys {
                q.add_term(*x, *y, next());
            }
        }
    };
    let common = |q: &mut QuadraticForm, next: &mut dyn FnMut() -> Rational| {
        pairs(q, &low_jet(vv), next);
        cross(q, &low_jet(vv), &first_jet(w1), next);
        cross(q, &low_jet(vv), &low_jet(w2), next);
    };

    let mut fv = QuadraticForm::new();
    common(&mut fv, next);
    pairs(&mut fv, &first_jet(w1), next);
    cross(&mut fv, &first_jet(w1), &low_jet(w2), next);
    pairs(&mut fv, &low_jet(w2), next);

    let mut fw1 = QuadraticForm::new();
    common(&mut fw1, next);
    let f = |c| Factor::new(c, None);
    for (j, k) in [(w1, w1), (w1, w2), (w2, w2)] {
        fw1.add_scaled(&q0(f(j), f(k)).unwrap(), &next());
    }
    for a in 0..4 {
        for b in a + 1..4 {
            fw1.add_scaled(&qab(a, b, f(w1), f(w2)).unwrap(), &next());
        }
    }

    let mut fw2 = QuadraticForm::new();
    for a in 0..4 {
        let (c1, c2) = (next(), next());
        fw2.add_term(v(vv), d(vv, a), &c1 * rational::int(2));
        fw2.add_term(d(vv, a), v(w2), c2.clone());
        fw2.add_term(v(vv), d(w2, a), c2);
    }
    build(3, 1, vec![m, 0.0, 0.0], vec![Equation::quadratic(fv), Equation::quadratic(fw1), Equation::quadratic(fw2)])
}

/// `(□+1) v = w²`, `□w = v²`.
pub fn kata_raw() -> SystemSpec {
    let one = rational::one();
    build(
        2,
        1,
        vec![1.0, 0.0],
        vec![
            Equation::quadratic(QuadraticForm::new().with_term(v(2), v(2), one.clone())),
            Equation::quadratic(QuadraticForm::new().with_term(v(1), v(1), one)),
        ],
    )
}

/// `□w = (∂_t w)²`.
pub fn john_blowup() -> SystemSpec {
    let q = QuadraticForm::new().with_term(d(1, 0), d(1, 0), rational::one());
    build(1, 0, vec![0.0], vec![Equation::quadratic(q)])
}

/// `□w = Q_0(w, w)`.
pub fn null_q0() -> SystemSpec {
    let q = q0(Factor::new(1, None), Factor::new(1, None)).unwrap();
    build(1, 0, vec![0.0], vec![Equation::quadratic(q)])
}

pub fn free_wave() -> SystemSpec {
    build(1, 0, vec![0.0], vec![Equation::default()])
}

pub fn free_kg(mass: f64) -> SystemSpec {
    build(1, 1, vec![mass], vec![Equation::default()])
}

/// The seven systems with published classifications.
pub fn catalog() -> Vec<ExampleFixture> {
    let one = rational::one();
    let h = gamma::identity();
    let kata_t = normal_form_transform(&kata_raw()).expect("transform applies").spec;
    vec![
        ExampleFixture {
            name: "dkg_massive_dirac",
            description: "Dirac-Klein-Gordon, massive spinor and massless scalar (c = 1, M = 1, H = I)",
            spec: dkg_massive_dirac_with(&one, 1.0, &h),
            expected: Expected::applies(&[1], &[]),
        },
        ExampleFixture {
            name: "dkg_massive_kg",
            description: "Dirac-Klein-Gordon, massless spinor and massive scalar (c = 1, m = 1, H = I)",
            spec: dkg_massive_kg_with(&one, 1.0, &h),
            expected: Expected::applies(&[], &[1, 2, 3, 4, 5, 6, 7, 8]),
        },
        ExampleFixture {
            name: "dirac_proca",
            description: "Dirac-Proca reduced to a massless spinor and a massive vector potential (m = 1)",
            spec: dirac_proca_with(1.0),
            expected: Expected::applies(&[], &[1, 2, 3, 4, 5, 6, 7, 8]),
        },
        ExampleFixture {
            name: "kgz_reduced",
            description: "Klein-Gordon-Zakharov with derivatives of v as extra unknowns (25 components)",
            spec: kgz_reduced(),
            expected: Expected::applies(&[], &[1]),
        },
        ExampleFixture {
            name: "typical_example",
            description: "u = (v, w1, w2) with all free constants equal to 1 and no cubic terms",
            spec: typical_example_with(1.0, &mut || rational::one()),
            expected: Expected::applies(&[1], &[2]),
        },
        ExampleFixture {
            name: "kata_raw",
            description: "(□+1)v = w², □w = v²",
            spec: kata_raw(),
            expected: Expected::fails(),
        },
        ExampleFixture {
            name: "kata_transformed",
            description: "kata_raw after ṽ = v − w²",
            spec: kata_t,
            expected: Expected::applies(&[1], &[]),
        },
    ]
}

/// Extra systems used by the numerical experiments.
pub fn extras() -> Vec<ExampleFixture> {
    vec![
        ExampleFixture {
            name: "kgz_radial",
            description: "Klein-Gordon-Zakharov without derivative augmentation (7 components)",
            spec: kgz_radial(),
            expected: Expected::applies(&[], &[1]),
        },
        ExampleFixture {
            name: "john_blowup",
            description: "□w = (∂_t w)²",
            spec: john_blowup(),
            expected: Expected { applies: false, partition: Some((vec![1], vec![])) },
        },
        ExampleFixture {
            name: "null_q0",
            description: "□w = Q0(w, w)",
            spec: null_q0(),
            expected: Expected::applies(&[1], &[]),
        },
        ExampleFixture {
            name: "free_wave",
            description: "□w = 0",
            spec: free_wave(),
            expected: Expected::applies(&[1], &[]),
        },
        ExampleFixture {
            name: "free_kg",
            description: "(□+1)v = 0",
            spec: free_kg(1.0),
            expected: Expected::applies(&[], &[]),
        },
    ]
}

/// Fixture by name, from either list.
pub fn fixture(name: &str) -> Option<ExampleFixture> {
    catalog().into_iter().chain(extras()).find(|f| f.name == name)
}

/// Write every fixture as `<name>.json` into `dir`, plus `kgz.json` as an
/// alias of `kgz_radial` (same classification, and it can be simulated on
/// the radial grid). The two contrast fixtures also carry an
/// `initial_data` key with the contrast data. Returns the written paths.
pub fn export_fixtures(dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for f in catalog().into_iter().chain(extras()) {
        let path = dir.join(format!("{}.json", f.name));
        if matches!(f.name, "john_blowup" | "null_q0") {
            let mut v: serde_json::Value = serde_json::from_str(&f.spec.to_json_string()).expect("spec JSON");
            v["initial_data"] = serde_json::to_value(crate::experiments::contrast_data()).expect("data JSON");
            std::fs::write(&path, serde_json::to_string_pretty(&v).expect("JSON") + "\n")?;
        } else {
            crate::system_model::save_spec(&f.spec, &path)?;
        }
        out.push(path);
        if f.name == "kgz_radial" {
            let alias = dir.join("kgz.json");
            crate::system_model::save_spec(&f.spec, &alias)?;
            out.push(alias);
        }
    }
    Ok(out)
}
