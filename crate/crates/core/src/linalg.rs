//! Exact sparse linear solves over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

type Row = BTreeMap<usize, Rational>;

/// Incrementally reduced system `A x = b`. Rows are kept in reduced row
/// echelon form so every new equation is eliminated in one pass.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pivots: BTreeMap<usize, (Row, Rational)>,
    inconsistent: bool,
}

fn axpy(row: &mut Row, rhs: &mut Rational, s: &Rational, other: &Row, other_rhs: &Rational) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(Rational::zero);
        *e += s * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
    *rhs += s * other_rhs;
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one equation `Σ coeffs[c] x_c = rhs`.
    pub fn push(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut row: Row = BTreeMap::new();
        for (c, v) in coeffs {
            let e = row.entry(c).or_insert_with(Rational::zero);
            *e += v;
        }
        row.retain(|_, v| !v.is_zero());
        let mut rhs = rhs;
        let hits: Vec<usize> = row.keys().filter(|c| self.pivots.contains_key(c)).copied().collect();
        for c in hits {
            let Some(s) = row.get(&c).cloned() else { continue };
            let (prow, prhs) = &self.pivots[&c];
            axpy(&mut row, &mut rhs, &-s, prow, prhs);
        }
        let Some((&p, pv)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = Rational::one() / pv;
        for v in row.values_mut() {
            *v *= &inv;
        }
        rhs *= &inv;
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(s) = prow.get(&p).cloned() {
                axpy(prow, prhs, &-s, &row, &rhs);
            }
        }
        self.pivots.insert(p, (row, rhs));
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A solution with every free unknown set to zero, as a sparse map.
    pub fn solve(&self) -> Option<BTreeMap<usize, Rational>> {
        if self.inconsistent {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .filter(|(_, (_, rhs))| !rhs.is_zero())
                .map(|(&p, (_, rhs))| (p, rhs.clone()))
                .collect(),
        )
    }
}
