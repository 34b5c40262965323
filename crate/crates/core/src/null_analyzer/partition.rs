//! Conditions (b-i), (b-ii) and the search for a partition `I1 ∪ I2` of the
//! wave unknowns.

use std::collections::{BTreeMap, BTreeSet};

use super::divergence::{divergence_decompose, divergence_decompose_avoiding, DivergenceCertificate};
use crate::rational::Rational;
use crate::system_model::{SystemSpec, VarRef};

pub const MAX_WAVE_COMPONENTS: usize = 20;

/// A quadratic term `c · x · y` of equation `equation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermWitness {
    pub equation: usize,
    pub x: VarRef,
    pub y: VarRef,
    pub coeff: Rational,
}

/// (b-i) for wave unknown `k` (1-based among waves): no quadratic part
/// contains the undifferentiated `w_k`. Returns the first offending term.
pub fn check_b_i(spec: &SystemSpec, k: usize) -> Result<(), TermWitness> {
    let target = VarRef::value(spec.wave_component(k));
    for i in 1..=spec.n() {
        if let Some((x, y, c)) = spec.equation(i).quadratic.terms().find(|(x, y, _)| **x == target || **y == target) {
            return Err(TermWitness { equation: i, x: *x, y: *y, coeff: c.clone() });
        }
    }
    Ok(())
}

/// A term of `G_a` that violates (b-ii-2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWitness {
    pub a: u8,
    pub x: VarRef,
    pub y: VarRef,
}

/// (b-ii-2): no `G_a` contains an undifferentiated `w_l` with `l ∈ I1`.
pub fn check_b_ii_2(cert: &DivergenceCertificate, i1: &BTreeSet<usize>, n1: usize) -> Result<(), GWitness> {
    let bad = |v: &VarRef| v.is_undifferentiated() && v.component > n1 && i1.contains(&(v.component - n1));
    for (a, g) in cert.g.iter().enumerate() {
        if let Some((x, y, _)) = g.terms().find(|(x, y, _)| bad(x) || bad(y)) {
            return Err(GWitness { a: a as u8, x: *x, y: *y });
        }
    }
    Ok(())
}

/// Which side of the partition each wave unknown may take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eligibility {
    pub k: usize,
    pub b_i: Result<(), TermWitness>,
    pub divergence: DivergenceCertificate,
}

impl Eligibility {
    pub fn may_be_i1(&self) -> bool {
        self.b_i.is_ok()
    }

    pub fn may_be_i2(&self) -> bool {
        self.divergence.holds()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub i1: BTreeSet<usize>,
    pub i2: BTreeSet<usize>,
    pub div_certs: BTreeMap<usize, DivergenceCertificate>,
    /// I2 equations whose cubic-and-higher tail is taken to be in
    /// divergence form on the user's word.
    pub tails_assumed: Vec<usize>,
    pub eligibility: Vec<Eligibility>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFailure {
    pub eligibility: Vec<Eligibility>,
    /// Why each wave unknown could not be placed.
    pub blocking: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionOutcome {
    Found(PartitionCertificate),
    Infeasible(PartitionFailure),
}

impl PartitionOutcome {
    pub fn certificate(&self) -> Option<&PartitionCertificate> {
        match self {
            PartitionOutcome::Found(c) => Some(c),
            PartitionOutcome::Infeasible(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{n2} wave unknowns exceed the enumeration bound of {MAX_WAVE_COMPONENTS}")]
pub struct EnumerationBound {
    pub n2: usize,
}

/// Visit the subsets of `items` largest first, lexicographically within a
/// size, until `visit` returns true.
fn search_subsets(items: &[usize], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return visit(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            if rec(items, size, i + 1, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    (0..=items.len()).rev().any(|size| rec(items, size, 0, &mut Vec::new(), &mut visit))
}

pub fn find_partition(spec: &SystemSpec) -> Result<PartitionOutcome, EnumerationBound> {
    let n2 = spec.n2();
    if n2 > MAX_WAVE_COMPONENTS {
        return Err(EnumerationBound { n2 });
    }
    let n1 = spec.n1();
    let eligibility: Vec<Eligibility> = crate::par::map((1..=n2).collect(), |k| Eligibility {
        k,
        b_i: check_b_i(spec, k),
        divergence: divergence_decompose(&spec.equation(spec.wave_component(k)).quadratic),
    });

    let mut blocking = Vec::new();
    let mut forced = Vec::new();
    let mut free = Vec::new();
    for e in &eligibility {
        match (e.may_be_i1(), e.may_be_i2()) {
            (true, true) => free.push(e.k),
            (true, false) => forced.push(e.k),
            (false, true) => {}
            (false, false) => {
                let w = e.b_i.as_ref().unwrap_err();
                blocking.push((
                    e.k,
                    format!(
                        "w{} appears undifferentiated in equation {} (term {}*{}) and equation {} is not a divergence",
                        e.k,
                        w.equation,
                        w.x,
                        w.y,
                        spec.wave_component(e.k)
                    ),
                ));
            }
        }
    }
    if !blocking.is_empty() {
        return Ok(PartitionOutcome::Infeasible(PartitionFailure { eligibility, blocking }));
    }

    let mut cache: BTreeMap<(usize, BTreeSet<usize>), Option<DivergenceCertificate>> = BTreeMap::new();
    let mut cert_for = |k: usize, i1: &BTreeSet<usize>| -> Option<DivergenceCertificate> {
        let base = &eligibility[k - 1].divergence;
        if check_b_ii_2(base, i1, n1).is_ok() {
            return Some(base.clone());
        }
        let f = &spec.equation(spec.wave_component(k)).quadratic;
        let comps: BTreeSet<usize> = f.vars().iter().map(|v| v.component).collect();
        let forbidden: BTreeSet<usize> = i1.iter().map(|&l| n1 + l).filter(|c| comps.contains(c)).collect();
        cache
            .entry((k, forbidden.clone()))
            .or_insert_with(|| Some(divergence_decompose_avoiding(f, &forbidden)).filter(|c| c.holds()))
            .clone()
    };

    let mut found = None;
    search_subsets(&free, |chosen| {
        let i1: BTreeSet<usize> = forced.iter().chain(chosen).copied().collect();
        let mut certs = BTreeMap::new();
        for k in (1..=n2).filter(|k| !i1.contains(k)) {
            match cert_for(k, &i1) {
                Some(c) => {
                    certs.insert(k, c);
                }
                None => return false,
            }
        }
        found = Some((i1, certs));
        true
    });

    Ok(match found {
        Some((i1, div_certs)) => {
            let i2: BTreeSet<usize> = (1..=n2).filter(|k| !i1.contains(k)).collect();
            let tails_assumed =
                i2.iter().map(|&k| spec.wave_component(k)).filter(|&c| spec.equation(c).tail.is_some()).collect();
            PartitionOutcome::Found(PartitionCertificate { i1, i2, div_certs, tails_assumed, eligibility })
        }
        None => {
            let blocking = (1..=n2)
                .map(|k| (k, "every admissible partition violates the G-restriction on I1 components".to_string()))
                .collect();
            PartitionOutcome::Infeasible(PartitionFailure { eligibility, blocking })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::system_model::{Equation, QuadraticForm};

    #[test]
    fn b_i_examples() {
        // u1 = η1, u2 = ζ1
        let f = QuadraticForm::new().with_term(VarRef::value(2), VarRef::value(1), int(1));
        let spec = SystemSpec::new(2, 1, vec![1.0, 0.0], vec![Equation::quadratic(f), Equation::default()]).unwrap();
        let w = check_b_i(&spec, 1).unwrap_err();
        assert_eq!((w.equation, w.x, w.y), (1, VarRef::value(1), VarRef::value(2)));

        let spec = SystemSpec::new(2, 1, vec![1.0, 0.0], vec![Equation::default(); 2]).unwrap();
        assert!(check_b_i(&spec, 1).is_ok());
    }

    #[test]
    fn b_ii_2_examples() {
        let mut cert = DivergenceCertificate::default();
        cert.g[1].add_term(VarRef::value(2), VarRef::value(1), int(1));
        assert!(check_b_ii_2(&cert, &BTreeSet::new(), 1).is_ok());
        assert!(check_b_ii_2(&cert, &[1].into(), 1).is_err());
    }

    #[test]
    fn subsets_largest_first() {
        let mut seen = Vec::new();
        search_subsets(&[1, 2, 3], |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(seen[0], vec![1, 2, 3]);
        assert_eq!(seen[1], vec![1, 2]);
        assert_eq!(seen.last().unwrap(), &Vec::<usize>::new());
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn bound_is_enforced() {
        let n = 21;
        let spec = SystemSpec::new(n, 0, vec![0.0; n], vec![Equation::default(); n]).unwrap();
        assert_eq!(find_partition(&spec), Err(EnumerationBound { n2: 21 }));
    }
}
