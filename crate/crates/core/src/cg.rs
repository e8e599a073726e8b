//! C- and G-matrices along paths.
//!
//! The C-matrix is updated twice per horizontal step: by the raw
//! entrywise recurrence and by the signed elementary matrix chosen from
//! the tropical sign of the mutating c-vector row. Any disagreement, or a
//! c-vector row with mixed signs, aborts: both would mean the arithmetic
//! here is wrong, not the input.

use crate::matrix::IntMat;
use crate::seed::{ExchangeSeed, MutationPath, PathStep, Permutation};
use crate::sign::{Sign, SignSeq};
use crate::trop::{check_e_matrix_full, e_matrix_full};
use crate::{Error, Int, Result};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone)]
pub struct CGState {
    pub c: IntMat,
    pub g: IntMat,
    pub seed: ExchangeSeed,
    /// Tropical sign consumed by each horizontal step so far.
    pub tropical_signs: SignSeq,
    steps_taken: usize,
}

pub fn cg_init(seed: &ExchangeSeed) -> CGState {
    let n = seed.n();
    CGState {
        c: IntMat::identity(n),
        g: IntMat::identity(n),
        seed: seed.clone(),
        tropical_signs: SignSeq(Vec::new()),
        steps_taken: 0,
    }
}

/// Tropical sign of row k: the coherent sign of the c-vector.
fn tropical_sign(c: &IntMat, k: usize) -> Result<Sign> {
    let n = c.size();
    let mut has_pos = false;
    let mut has_neg = false;
    for j in 0..n {
        let v = &c[(k, j)];
        if v.is_positive() {
            has_pos = true;
        } else if v.is_negative() {
            has_neg = true;
        }
    }
    match (has_pos, has_neg) {
        (true, false) => Ok(Sign::Plus),
        (false, true) => Ok(Sign::Minus),
        _ => Err(Error::SignCoherenceViolation { row: k + 1 }),
    }
}

pub fn cg_step(state: &CGState, step: &PathStep) -> Result<CGState> {
    let mut next = state.clone();
    next.steps_taken += 1;
    match *step {
        PathStep::Mutate(k) => {
            if k >= state.seed.n_uf() {
                return Err(Error::IndexOutOfRange { index: k + 1, n_uf: state.seed.n_uf() });
            }
            let eps = tropical_sign(&state.c, k)?;
            let raw = raw_c_update(&state.c, &state.seed, k);
            let via_e = e_matrix_full(&state.seed, k, eps).mul(&state.c);
            if raw != via_e {
                return Err(Error::CMatrixRouteMismatch { step: next.steps_taken });
            }
            next.c = via_e;
            next.g = check_e_matrix_full(&state.seed, k, eps).mul(&state.g);
            next.seed = state.seed.mutate(k)?;
            next.tropical_signs.0.push(eps);
        }
        PathStep::Swap(i, j) => {
            let n = state.seed.n();
            let sigma = Permutation::transposition(n, i, j)?;
            let p = IntMat::permutation(&(0..n).map(|v| sigma.image(v)).collect::<Vec<_>>());
            next.c = p.mul(&state.c);
            next.g = p.mul(&state.g);
            next.seed = state.seed.permute(&sigma)?;
        }
    }
    Ok(next)
}

/// Entrywise c-matrix recurrence: row k flips, row i picks up
/// [c_kj]_+[b_ik]_+ - [-c_kj]_+[-b_ik]_+.
fn raw_c_update(c: &IntMat, seed: &ExchangeSeed, k: usize) -> IntMat {
    let n = c.size();
    let mut out = c.clone();
    let bcol: Vec<Int> = (0..n).map(|i| seed.entry(i, k).to_integer()).collect();
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = if i == k {
                -c[(i, j)].clone()
            } else {
                let pos = int_plus(&c[(k, j)]) * int_plus(&bcol[i]);
                let neg = int_plus(&-c[(k, j)].clone()) * int_plus(&-bcol[i].clone());
                c[(i, j)].clone() + pos - neg
            };
        }
    }
    out
}

fn int_plus(v: &Int) -> Int {
    if v.is_positive() {
        v.clone()
    } else {
        Int::zero()
    }
}

/// G·Cᵀ must be the identity at every vertex (tropical duality).
pub fn duality_check(state: &CGState) -> bool {
    state.g.mul(&state.c.transpose()) == IntMat::identity(state.c.size())
}

/// Walk a whole path from the identity pair.
pub fn cg_along_path(path: &MutationPath) -> Result<CGState> {
    let mut state = cg_init(&path.start);
    for step in &path.steps {
        state = cg_step(&state, step)?;
        debug_assert!(duality_check(&state));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::MutationPath;

    fn a2() -> ExchangeSeed {
        ExchangeSeed::from_i64(2, vec![vec![0, 1], vec![-1, 0]])
    }

    #[test]
    fn init_is_identity_pair() {
        let s = cg_init(&a2());
        assert_eq!(s.c, IntMat::identity(2));
        assert_eq!(s.g, IntMat::identity(2));
        assert!(duality_check(&s));
    }

    #[test]
    fn first_step_on_a2() {
        let s = cg_step(&cg_init(&a2()), &PathStep::Mutate(0)).unwrap();
        assert_eq!(s.tropical_signs.0, vec![Sign::Plus]);
        assert_eq!(s.c[(0, 0)], Int::from(-1));
        assert_eq!(s.c[(0, 1)], Int::from(0));
        assert!(duality_check(&s));
    }

    #[test]
    fn swap_permutes_rows() {
        let s = cg_step(&cg_init(&a2()), &PathStep::Swap(0, 1)).unwrap();
        assert_eq!(s.c, IntMat::permutation(&[1, 0]));
        assert!(duality_check(&s));
    }

    #[test]
    fn pentagon_loop_restores_identity() {
        let path = MutationPath::new(
            a2(),
            vec![
                PathStep::Mutate(0),
                PathStep::Mutate(1),
                PathStep::Mutate(0),
                PathStep::Mutate(1),
                PathStep::Mutate(0),
                PathStep::Swap(0, 1),
            ],
        )
        .unwrap();
        let state = cg_along_path(&path).unwrap();
        assert_eq!(state.c, IntMat::identity(2));
        assert_eq!(state.g, IntMat::identity(2));
    }

    #[test]
    fn determinants_stay_unimodular() {
        let path = MutationPath::new(
            a2(),
            vec![PathStep::Mutate(0), PathStep::Mutate(1), PathStep::Mutate(0)],
        )
        .unwrap();
        let mut state = cg_init(&path.start);
        for step in &path.steps {
            state = cg_step(&state, step).unwrap();
            assert_eq!(state.c.det().abs(), Int::from(1));
            assert_eq!(state.g.det().abs(), Int::from(1));
        }
    }
}
