//! Rational polyhedral cones {x : f·x >= 0} and an exact invariance
//! certificate.
//!
//! A matrix E maps the cone into itself when every defining functional
//! pulled back through E is a nonnegative rational combination of the
//! defining functionals. That membership is decided exactly by a phase-one
//! simplex over the rationals (Bland's rule, so it terminates).

use crate::matrix::IntMat;
use crate::{Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Intersection of half-spaces f·x >= 0, one integer row per functional,
/// kept with coprime entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDescription {
    pub functionals: Vec<Vec<Int>>,
}

impl ConeDescription {
    pub fn new(rows: Vec<Vec<Int>>) -> ConeDescription {
        ConeDescription { functionals: rows.into_iter().map(normalize_row).collect() }
    }

    pub fn from_i64(rows: Vec<Vec<i64>>) -> ConeDescription {
        ConeDescription::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.functionals.first().map_or(0, |f| f.len())
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.functionals.iter().all(|f| {
            f.iter()
                .zip(x)
                .map(|(c, v)| Rat::from_integer(c.clone()) * v)
                .fold(Rat::zero(), |a, b| a + b)
                >= Rat::zero()
        })
    }
}

fn normalize_row(row: Vec<Int>) -> Vec<Int> {
    let mut g = Int::zero();
    for v in &row {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return row;
    }
    row.into_iter().map(|v| v / &g).collect()
}

/// Outcome of the invariance certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Proved,
    Failed,
    Skipped,
    NotAttempted,
}

/// Inequality count beyond which the certificate is skipped.
pub const CERTIFICATE_LIMIT: usize = 64;

/// Prove (or refute) E(cone) ⊆ cone exactly.
pub fn certify_invariant_cone(e: &IntMat, cone: &ConeDescription) -> Result<CertStatus> {
    if cone.functionals.len() > CERTIFICATE_LIMIT {
        return Ok(CertStatus::Skipped);
    }
    for f in &cone.functionals {
        // pulled-back functional: (f∘E)_j = Σ_i f_i E_ij
        let n = e.size();
        let g: Vec<Int> = (0..n)
            .map(|j| (0..n).map(|i| &f[i] * &e[(i, j)]).fold(Int::zero(), |a, b| a + b))
            .collect();
        if !nonneg_combination_exists(&cone.functionals, &g) {
            return Ok(CertStatus::Failed);
        }
    }
    Ok(CertStatus::Proved)
}

/// Does `target` lie in the cone generated by `rows` with nonnegative
/// coefficients? Exact phase-one simplex.
pub fn nonneg_combination_exists(rows: &[Vec<Int>], target: &[Int]) -> bool {
    let n = target.len();
    let m = rows.len();
    // tableau: n constraint rows over m lambda columns + n artificials + rhs
    let cols = m + n;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for i in 0..n {
        let flip = target[i].is_negative();
        let mut row: Vec<Rat> = Vec::with_capacity(cols + 1);
        for r in rows {
            let v = Rat::from_integer(r[i].clone());
            row.push(if flip { -v } else { v });
        }
        for j in 0..n {
            row.push(if j == i { Rat::one() } else { Rat::zero() });
        }
        let rhs = Rat::from_integer(target[i].clone());
        row.push(if flip { -rhs } else { rhs });
        t.push(row);
    }
    let mut basis: Vec<usize> = (m..m + n).collect();
    let cost = |j: usize| -> Rat {
        if j < m {
            Rat::zero()
        } else {
            Rat::one()
        }
    };
    loop {
        // reduced costs r_j = c_j - Σ_i c_{basis[i]} t[i][j]; Bland: first negative
        let mut entering = None;
        for j in 0..cols {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost(j);
            for i in 0..n {
                if cost(basis[i]).is_zero() {
                    continue;
                }
                r = r - &cost(basis[i]) * &t[i][j];
            }
            if r < Rat::zero() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            let obj: Rat = (0..n)
                .map(|i| &cost(basis[i]) * &t[i][cols])
                .fold(Rat::zero(), |a, b| a + b);
            return obj.is_zero();
        };
        // ratio test, tie-broken by smallest basic variable (Bland)
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..n {
            if t[i][j] > Rat::zero() {
                let ratio = &t[i][cols] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // objective unbounded below cannot happen in phase one
            return false;
        };
        let piv = t[pivot_row][j].clone();
        for v in &mut t[pivot_row] {
            *v = &*v / &piv;
        }
        for i in 0..n {
            if i != pivot_row && !t[i][j].is_zero() {
                let f = t[i][j].clone();
                for col in 0..=cols {
                    let delta = &t[pivot_row][col] * &f;
                    t[i][col] = &t[i][col] - &delta;
                }
            }
        }
        basis[pivot_row] = j;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_block_preserves_its_cone() {
        let e = IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]);
        let cone = ConeDescription::from_i64(vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(certify_invariant_cone(&e, &cone).unwrap(), CertStatus::Proved);
    }

    #[test]
    fn identity_preserves_everything() {
        let e = IntMat::identity(2);
        let cone = ConeDescription::from_i64(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(certify_invariant_cone(&e, &cone).unwrap(), CertStatus::Proved);
    }

    #[test]
    fn rotation_moves_the_quadrant() {
        let e = IntMat::from_rows(vec![vec![0, 1], vec![-1, 0]]);
        let cone = ConeDescription::from_i64(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(certify_invariant_cone(&e, &cone).unwrap(), CertStatus::Failed);
    }

    #[test]
    fn membership() {
        let cone = ConeDescription::from_i64(vec![vec![1, 0], vec![1, 1]]);
        let inside = vec![crate::rat_int(1), crate::rat_int(0)];
        let outside = vec![crate::rat_int(-1), crate::rat_int(0)];
        assert!(cone.contains(&inside));
        assert!(!cone.contains(&outside));
    }

    #[test]
    fn normalization_reduces_rows() {
        let cone = ConeDescription::from_i64(vec![vec![2, 4]]);
        assert_eq!(cone.functionals[0], vec![Int::from(1), Int::from(2)]);
    }
}
