//! Exact tropical (piecewise-linear) cluster transformations.
//!
//! Points live in min-plus tropical coordinates. Throughout this module
//! points are column vectors and matrices compose on the left, so the
//! matrix of a path is J_m ··· J_1 in traversal order. X-side matrices act
//! on the unfrozen coordinates only; A-side matrices are full size.

use crate::matrix::IntMat;
use crate::seed::{apply_step, ExchangeSeed, MutationPath, PathStep, Permutation};
use crate::sign::{Sign, SignSeq};
use crate::{Error, Int, Rat, Result};
use num_traits::{Signed, Zero};

/// Point with one exact rational coordinate per unfrozen index.
pub type TropXPoint = Vec<Rat>;
/// Point with one exact rational coordinate per index, frozen included.
pub type TropAPoint = Vec<Rat>;

fn plus(v: Rat) -> Rat {
    if v.is_positive() {
        v
    } else {
        Rat::zero()
    }
}

/// One tropical X-mutation: x_k flips sign and every other coordinate
/// picks up [sgn(x_k) b_ik]_+ · x_k.
pub fn trop_x_step(seed: &ExchangeSeed, k: usize, x: &TropXPoint) -> Result<TropXPoint> {
    if k >= seed.n_uf() {
        return Err(Error::IndexOutOfRange { index: k + 1, n_uf: seed.n_uf() });
    }
    if x.len() != seed.n_uf() {
        return Err(Error::DimensionMismatch { expected: seed.n_uf(), got: x.len() });
    }
    let s = Sign::of(&x[k]);
    let mut out = x.clone();
    out[k] = -x[k].clone();
    for i in 0..seed.n_uf() {
        if i == k {
            continue;
        }
        let coeff = plus(crate::rat_int(s.as_i8() as i64) * seed.entry(i, k));
        if !coeff.is_zero() {
            out[i] = &out[i] + &(coeff * &x[k]);
        }
    }
    Ok(out)
}

/// Same map on f64 coordinates, for eigen-direction rescale checks.
pub fn trop_x_step_f64(seed: &ExchangeSeed, k: usize, x: &[f64]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    let s = if x[k] > 0.0 { 1.0 } else if x[k] < 0.0 { -1.0 } else { 0.0 };
    let mut out = x.to_vec();
    out[k] = -x[k];
    for i in 0..seed.n_uf() {
        if i == k {
            continue;
        }
        let b = seed.entry(i, k).to_f64().unwrap();
        let coeff = (s * b).max(0.0);
        out[i] += coeff * x[k];
    }
    out
}

/// Ensemble map in coordinates: x_i = Σ_j b_ij a_j for unfrozen i.
pub fn trop_ensemble(seed: &ExchangeSeed, a: &TropAPoint) -> Result<TropXPoint> {
    if a.len() != seed.n() {
        return Err(Error::DimensionMismatch { expected: seed.n(), got: a.len() });
    }
    Ok((0..seed.n_uf())
        .map(|i| {
            (0..seed.n())
                .map(|j| seed.entry(i, j) * &a[j])
                .fold(Rat::zero(), |acc, v| acc + v)
        })
        .collect())
}

/// One tropical A-mutation. The sign that picks the linear branch is the
/// sign of x_k at the image of the point under the ensemble map; it is
/// computed on the fly and never stored.
pub fn trop_a_step(seed: &ExchangeSeed, k: usize, a: &TropAPoint) -> Result<TropAPoint> {
    if k >= seed.n_uf() {
        return Err(Error::IndexOutOfRange { index: k + 1, n_uf: seed.n_uf() });
    }
    if a.len() != seed.n() {
        return Err(Error::DimensionMismatch { expected: seed.n(), got: a.len() });
    }
    let x = trop_ensemble(seed, a)?;
    let s = Sign::of(&x[k]);
    let mut out = a.clone();
    let mut acc = -a[k].clone();
    for j in 0..seed.n() {
        let coeff = plus(crate::rat_int(-(s.as_i8() as i64)) * seed.entry(k, j));
        if !coeff.is_zero() {
            acc += coeff * &a[j];
        }
    }
    out[k] = acc;
    Ok(out)
}

/// E-matrix of a signed mutation, full n×n: identity except for the -1 at
/// (k,k) and column k entries [-ε b_ki]_+.
pub fn e_matrix_full(seed: &ExchangeSeed, k: usize, eps: Sign) -> IntMat {
    let n = seed.n();
    let mut m = IntMat::identity(n);
    m[(k, k)] = Int::from(-1);
    let e = eps.as_i8() as i64;
    for i in 0..n {
        if i != k {
            let v = plus(crate::rat_int(-e) * seed.entry(k, i));
            m[(i, k)] = v.to_integer();
        }
    }
    m
}

/// Ě-matrix, full n×n: identity except for the -1 at (k,k) and row k
/// entries [ε b_jk]_+. Satisfies Eᵀ = Ě⁻¹.
pub fn check_e_matrix_full(seed: &ExchangeSeed, k: usize, eps: Sign) -> IntMat {
    let n = seed.n();
    let mut m = IntMat::identity(n);
    m[(k, k)] = Int::from(-1);
    let e = eps.as_i8() as i64;
    for j in 0..n {
        if j != k {
            let v = plus(crate::rat_int(e) * seed.entry(j, k));
            m[(k, j)] = v.to_integer();
        }
    }
    m
}

fn unfrozen_part(m: &IntMat, n_uf: usize) -> IntMat {
    let mut out = IntMat::zero(n_uf);
    for i in 0..n_uf {
        for j in 0..n_uf {
            out[(i, j)] = m[(i, j)].clone();
        }
    }
    out
}

/// X-side E-matrix: the unfrozen part of the full matrix.
pub fn e_matrix(seed: &ExchangeSeed, k: usize, eps: Sign) -> IntMat {
    unfrozen_part(&e_matrix_full(seed, k, eps), seed.n_uf())
}

/// X-side Ě-matrix: the unfrozen part of the full matrix.
pub fn check_e_matrix(seed: &ExchangeSeed, k: usize, eps: Sign) -> IntMat {
    unfrozen_part(&check_e_matrix_full(seed, k, eps), seed.n_uf())
}

/// The sign of a path at a point: one entry per horizontal step, the sign
/// of the mutated coordinate in the chart where the mutation happens.
/// Swaps permute coordinates and contribute no entry.
pub fn sign_of_path(path: &MutationPath, x: &TropXPoint) -> Result<SignSeq> {
    let (_, sign) = traverse_x(path, x)?;
    Ok(sign)
}

/// Apply the whole path to an X-point; also returns the sign sequence
/// observed along the way.
pub fn traverse_x(path: &MutationPath, x: &TropXPoint) -> Result<(TropXPoint, SignSeq)> {
    if x.len() != path.start.n_uf() {
        return Err(Error::DimensionMismatch { expected: path.start.n_uf(), got: x.len() });
    }
    let mut seed = path.start.clone();
    let mut point = x.clone();
    let mut signs = Vec::new();
    for step in &path.steps {
        match *step {
            PathStep::Mutate(k) => {
                signs.push(Sign::of(&point[k]));
                point = trop_x_step(&seed, k, &point)?;
            }
            PathStep::Swap(i, j) => {
                if i < seed.n_uf() {
                    point.swap(i, j);
                }
            }
        }
        seed = apply_step(&seed, step)?;
    }
    Ok((point, SignSeq(signs)))
}

/// Apply the whole path to an A-point; the recorded signs come from the
/// ensemble images, matching the signed A-mutation formula.
pub fn traverse_a(path: &MutationPath, a: &TropAPoint) -> Result<(TropAPoint, SignSeq)> {
    if a.len() != path.start.n() {
        return Err(Error::DimensionMismatch { expected: path.start.n(), got: a.len() });
    }
    let mut seed = path.start.clone();
    let mut point = a.clone();
    let mut signs = Vec::new();
    for step in &path.steps {
        match *step {
            PathStep::Mutate(k) => {
                let x = trop_ensemble(&seed, &point)?;
                signs.push(Sign::of(&x[k]));
                point = trop_a_step(&seed, k, &point)?;
            }
            PathStep::Swap(i, j) => point.swap(i, j),
        }
        seed = apply_step(&seed, step)?;
    }
    Ok((point, SignSeq(signs)))
}

/// Float traversal of the X-side map (charts and branch choices follow the
/// float signs; used for eigen-direction verification only).
pub fn traverse_x_f64(path: &MutationPath, x: &[f64]) -> Result<Vec<f64>> {
    let mut seed = path.start.clone();
    let mut point = x.to_vec();
    for step in &path.steps {
        match *step {
            PathStep::Mutate(k) => point = trop_x_step_f64(&seed, k, &point),
            PathStep::Swap(i, j) => {
                if i < seed.n_uf() {
                    point.swap(i, j);
                }
            }
        }
        seed = apply_step(&seed, step)?;
    }
    Ok(point)
}

/// Presentation matrix of the path on the cone where its sign is `sign`:
/// the product J_m ··· J_1 over steps, J = E_{k,ε} at horizontal steps and
/// the swap matrix at vertical ones. X-side, unfrozen size.
pub fn presentation_matrix(path: &MutationPath, sign: &SignSeq) -> Result<IntMat> {
    product_along_path(path, sign, false)
}

/// Ě-side product over the same steps (unfrozen part); the transpose
/// inverse of `presentation_matrix` step by step.
pub fn check_presentation_matrix(path: &MutationPath, sign: &SignSeq) -> Result<IntMat> {
    product_along_path(path, sign, true)
}

fn product_along_path(path: &MutationPath, sign: &SignSeq, check_side: bool) -> Result<IntMat> {
    let expected = path.horizontal_len();
    if sign.len() != expected {
        return Err(Error::SignLengthMismatch { got: sign.len(), expected });
    }
    sign.require_strict()?;
    let n_uf = path.start.n_uf();
    let mut seed = path.start.clone();
    let mut acc = IntMat::identity(n_uf);
    let mut si = 0;
    for step in &path.steps {
        let j = match *step {
            PathStep::Mutate(k) => {
                let eps = sign.0[si];
                si += 1;
                if check_side {
                    check_e_matrix(&seed, k, eps)
                } else {
                    e_matrix(&seed, k, eps)
                }
            }
            PathStep::Swap(i, j) => {
                if i < n_uf {
                    let sigma = Permutation::transposition(n_uf, i, j)?;
                    IntMat::permutation(&(0..n_uf).map(|v| sigma.image(v)).collect::<Vec<_>>())
                } else {
                    IntMat::identity(n_uf)
                }
            }
        };
        acc = j.mul(&acc);
        seed = apply_step(&seed, step)?;
    }
    Ok(acc)
}

/// Partial X-side presentation matrices: element ν is the product over the
/// steps strictly before the ν-th horizontal step. Used for sign cones.
pub fn partial_presentation_matrices(
    path: &MutationPath,
    sign: &SignSeq,
) -> Result<Vec<(usize, IntMat)>> {
    let expected = path.horizontal_len();
    if sign.len() != expected {
        return Err(Error::SignLengthMismatch { got: sign.len(), expected });
    }
    sign.require_strict()?;
    let n_uf = path.start.n_uf();
    let mut seed = path.start.clone();
    let mut acc = IntMat::identity(n_uf);
    let mut si = 0;
    let mut out = Vec::new();
    for step in &path.steps {
        match *step {
            PathStep::Mutate(k) => {
                out.push((k, acc.clone()));
                let m = e_matrix(&seed, k, sign.0[si]);
                si += 1;
                acc = m.mul(&acc);
            }
            PathStep::Swap(i, j) => {
                if i < n_uf {
                    let sigma = Permutation::transposition(n_uf, i, j)?;
                    let p = IntMat::permutation(
                        &(0..n_uf).map(|v| sigma.image(v)).collect::<Vec<_>>(),
                    );
                    acc = p.mul(&acc);
                }
            }
        }
        seed = apply_step(&seed, step)?;
    }
    Ok(out)
}

/// Which side of the cluster ensemble an orbit lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitSide {
    X,
    A,
}

/// One loop traversal per entry: endpoint and the signs seen on the way.
#[derive(Debug, Clone)]
pub struct OrbitEntry {
    pub iteration: usize,
    pub point: Vec<Rat>,
    pub sign: SignSeq,
}

/// How often orbit points are rescaled by their largest absolute
/// coordinate. Signs are scale-invariant, so the recorded data is
/// unaffected; this only bounds coefficient growth.
pub const RENORM_EVERY: usize = 16;

/// Iterate a mutation loop from a point. Requires the path to close up.
pub fn apply_loop(
    path: &MutationPath,
    side: OrbitSide,
    point: &[Rat],
    iterations: usize,
) -> Result<Vec<OrbitEntry>> {
    path.require_loop()?;
    let mut current = point.to_vec();
    let mut out = Vec::with_capacity(iterations);
    for it in 1..=iterations {
        let (next, sign) = match side {
            OrbitSide::X => traverse_x(path, &current)?,
            OrbitSide::A => traverse_a(path, &current)?,
        };
        current = next;
        if it % RENORM_EVERY == 0 {
            renormalize(&mut current);
        }
        out.push(OrbitEntry { iteration: it, point: current.clone(), sign });
    }
    Ok(out)
}

/// Divide by the largest absolute coordinate (no-op at the origin).
pub fn renormalize(point: &mut [Rat]) {
    let mut max = Rat::zero();
    for v in point.iter() {
        let a = v.abs();
        if a > max {
            max = a;
        }
    }
    if !max.is_zero() {
        for v in point.iter_mut() {
            *v = &*v / &max;
        }
    }
}

/// Tropicalized Casimir values: θ_p = Σ_arcs mult(p, arc) · x_arc, one per
/// puncture, with `incidence` listing (arc, multiplicity) pairs per
/// puncture in a fixed order.
pub fn casimir(incidence: &[(String, Vec<(usize, usize)>)], x: &TropXPoint) -> Result<Vec<Rat>> {
    if incidence.is_empty() {
        return Err(Error::MissingIncidence);
    }
    incidence
        .iter()
        .map(|(_, arcs)| {
            let mut acc = Rat::zero();
            for &(arc, mult) in arcs {
                let v = x.get(arc).ok_or(Error::DimensionMismatch {
                    expected: arc + 1,
                    got: x.len(),
                })?;
                acc += crate::rat_int(mult as i64) * v;
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;

    fn a2() -> ExchangeSeed {
        ExchangeSeed::from_i64(2, vec![vec![0, 1], vec![-1, 0]])
    }

    fn kronecker(l: i64) -> ExchangeSeed {
        ExchangeSeed::from_i64(2, vec![vec![0, -l], vec![l, 0]])
    }

    fn pt(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn x_step_kronecker() {
        let out = trop_x_step(&kronecker(2), 0, &pt(&[1, 0])).unwrap();
        assert_eq!(out, pt(&[-1, 2]));
    }

    #[test]
    fn x_step_zero_coordinate() {
        // x_k = 0: only the sign of x_k flips, which is still zero
        let out = trop_x_step(&a2(), 0, &pt(&[0, 5])).unwrap();
        assert_eq!(out, pt(&[0, 5]));
    }

    #[test]
    fn x_step_a2_negative_branch() {
        // sgn(x_0) = -, so coordinate 1 picks up [(-1)·b_10]_+·x_0 = x_0
        let out = trop_x_step(&a2(), 0, &pt(&[-1, 1])).unwrap();
        assert_eq!(out, pt(&[1, 0]));
    }

    #[test]
    fn ensemble_examples() {
        assert_eq!(trop_ensemble(&a2(), &pt(&[0, 0])).unwrap(), pt(&[0, 0]));
        assert_eq!(trop_ensemble(&a2(), &pt(&[1, 0])).unwrap(), pt(&[0, -1]));
        assert_eq!(
            trop_ensemble(&kronecker(2), &pt(&[1, 1])).unwrap(),
            pt(&[-2, 2])
        );
    }

    #[test]
    fn a_step_examples() {
        assert_eq!(trop_a_step(&a2(), 0, &pt(&[0, 0])).unwrap(), pt(&[0, 0]));
        // x_0 at the ensemble image of (1,2) is b_01·2 = 2 > 0
        assert_eq!(trop_a_step(&a2(), 0, &pt(&[1, 2])).unwrap(), pt(&[-1, 2]));
    }

    #[test]
    fn a_step_matches_minplus_oracle() {
        // independent route: a'_k = -a_k + min(Σ[b_kj]_+ a_j, Σ[-b_kj]_+ a_j)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for seed in [a2(), kronecker(2), kronecker(3)] {
            for _ in 0..100 {
                let a: Vec<Rat> = (0..seed.n())
                    .map(|_| {
                        Rat::new(
                            Int::from(rng.gen_range(-30i64..=30)),
                            Int::from(rng.gen_range(1i64..=7)),
                        )
                    })
                    .collect();
                for k in 0..seed.n_uf() {
                    let got = trop_a_step(&seed, k, &a).unwrap();
                    let mut pos = Rat::zero();
                    let mut neg = Rat::zero();
                    for j in 0..seed.n() {
                        pos += plus(seed.entry(k, j).clone()) * &a[j];
                        neg += plus(-seed.entry(k, j).clone()) * &a[j];
                    }
                    let mut want = a.clone();
                    want[k] = -a[k].clone() + pos.min(neg);
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn e_matrix_kronecker() {
        let e = e_matrix(&kronecker(2), 0, Sign::Plus);
        assert_eq!(e, IntMat::from_rows(vec![vec![-1, 0], vec![2, 1]]));
        // the loop product with the swap gives the twist block
        let p = IntMat::permutation(&[1, 0]);
        assert_eq!(p.mul(&e), IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]));
    }

    #[test]
    fn e_matrix_diagonal_when_column_vanishes() {
        // ε = + and b_ki >= 0 for all i: no off-diagonal entries
        let seed = ExchangeSeed::from_i64(2, vec![vec![0, 2], vec![-2, 0]]);
        let e = e_matrix(&seed, 0, Sign::Plus);
        assert_eq!(e, IntMat::from_rows(vec![vec![-1, 0], vec![0, 1]]));
    }

    #[test]
    fn transpose_inverse_relation() {
        for seed in [a2(), kronecker(2), kronecker(3)] {
            for k in 0..seed.n_uf() {
                for eps in [Sign::Plus, Sign::Minus] {
                    let e = e_matrix_full(&seed, k, eps);
                    let ch = check_e_matrix_full(&seed, k, eps);
                    assert_eq!(e.transpose(), ch.inverse_unimodular().unwrap());
                }
            }
        }
    }

    #[test]
    fn presentation_matrix_kronecker_signs() {
        let path = MutationPath::new(
            kronecker(2),
            vec![PathStep::Mutate(0), PathStep::Swap(0, 1)],
        )
        .unwrap();
        let plus = presentation_matrix(&path, &SignSeq(vec![Sign::Plus])).unwrap();
        assert_eq!(plus, IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]));
        let minus = presentation_matrix(&path, &SignSeq(vec![Sign::Minus])).unwrap();
        assert_eq!(minus, IntMat::from_rows(vec![vec![0, 1], vec![-1, 0]]));
        assert_eq!(plus.det(), Int::from(1));
    }

    #[test]
    fn presentation_matrix_vertical_only() {
        let path = MutationPath::new(a2(), vec![PathStep::Swap(0, 1)]).unwrap();
        let m = presentation_matrix(&path, &SignSeq(vec![])).unwrap();
        assert_eq!(m, IntMat::permutation(&[1, 0]));
    }

    #[test]
    fn presentation_matrix_rejects_zero_sign() {
        let path = MutationPath::new(a2(), vec![PathStep::Mutate(0)]).unwrap();
        let err = presentation_matrix(&path, &SignSeq(vec![Sign::Zero])).unwrap_err();
        assert!(matches!(err, Error::NonStrictSign { entry: 1 }));
    }

    #[test]
    fn sign_of_zero_point_is_all_zero() {
        let path = MutationPath::new(
            a2(),
            vec![PathStep::Mutate(0), PathStep::Mutate(1), PathStep::Mutate(0)],
        )
        .unwrap();
        let s = sign_of_path(&path, &pt(&[0, 0])).unwrap();
        assert_eq!(s, SignSeq(vec![Sign::Zero; 3]));
    }

    #[test]
    fn orbit_of_origin_is_constant() {
        let path = MutationPath::new(
            kronecker(2),
            vec![PathStep::Mutate(0), PathStep::Swap(0, 1)],
        )
        .unwrap();
        let orbit = apply_loop(&path, OrbitSide::X, &pt(&[0, 0]), 5).unwrap();
        assert!(orbit.iter().all(|e| e.point == pt(&[0, 0])));
    }

    #[test]
    fn kronecker_orbit_direction_converges() {
        // directions approach the eigenray through (1, -1)
        let path = MutationPath::new(
            kronecker(2),
            vec![PathStep::Mutate(0), PathStep::Swap(0, 1)],
        )
        .unwrap();
        let orbit = apply_loop(&path, OrbitSide::X, &pt(&[1, 0]), 40).unwrap();
        let last = &orbit.last().unwrap().point;
        let ratio = &last[0] / &last[1];
        use num_traits::ToPrimitive;
        assert!((ratio.to_f64().unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn casimir_zero_point() {
        let inc = vec![("p".to_string(), vec![(0, 1), (1, 1)])];
        assert_eq!(casimir(&inc, &pt(&[0, 0])).unwrap(), pt(&[0]));
        assert!(casimir(&[], &pt(&[0, 0])).is_err());
    }
}
