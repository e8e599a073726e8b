//! Sign-stability detection and the spectral data of stable loops.
//!
//! Sign stability on a ray-invariant set is only semi-decidable from
//! samples, so the detector is explicit about what it produces: a sample
//! "stabilizes" when its sign sequence is strict and constant for a
//! confirmation window of consecutive iterations, and a consensus is the
//! agreement of all stabilized samples. The empirical verdict upgrades to
//! "certified" when an exact cone certificate proves the stable matrix
//! maps the stable sign cone into itself and every sample orbit landed in
//! that cone.

use crate::cone::{certify_invariant_cone, CertStatus, ConeDescription};
use crate::matrix::IntMat;
use crate::poly::{IntPoly, RootBound};
use crate::seed::{MutationPath, PathStep};
use crate::sign::{Sign, SignSeq};
use crate::trop::{
    check_presentation_matrix, partial_presentation_matrices, presentation_matrix, renormalize,
    traverse_x, traverse_x_f64, TropXPoint, RENORM_EVERY,
};
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The canonical sample points (±1, …, ±1), interior to the all-plus and
/// all-minus coordinate cones.
pub fn canonical_points(n_uf: usize) -> (TropXPoint, TropXPoint) {
    let plus = vec![Rat::one(); n_uf];
    let minus = vec![-Rat::one(); n_uf];
    (plus, minus)
}

#[derive(Debug, Clone)]
pub struct DetectOptions {
    /// Iteration budget per sample.
    pub n_max: usize,
    /// Consecutive identical strict iterations required to stabilize.
    pub window: usize,
    /// Half-width target for the Perron root isolation.
    pub root_half_width: Rat,
    /// Worker cap for independent sample evaluation (1 = sequential).
    pub threads: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            n_max: 1000,
            window: 3,
            root_half_width: Rat::new(Int::one(), Int::from(10u64.pow(13))),
            threads: threads_from_env(),
        }
    }
}

impl DetectOptions {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::Config("N_max must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("confirmation window must be at least 1".into()));
        }
        if !self.root_half_width.is_positive() {
            return Err(Error::Config("root tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Read the SIGNSTABLE_THREADS cap; defaults to sequential evaluation.
pub fn threads_from_env() -> usize {
    std::env::var("SIGNSTABLE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleStatus {
    Stabilized,
    NonStrict,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub start: TropXPoint,
    pub status: SampleStatus,
    /// First iteration of the confirmed constant strict run (1-based).
    pub stabilized_at: Option<usize>,
    pub terminal_sign: Option<SignSeq>,
    /// First zero sign entry seen: (entry within the sequence, iteration),
    /// both 1-based.
    pub first_non_strict: Option<(usize, usize)>,
    /// Endpoint of the evaluated orbit (renormalized along the way).
    pub final_point: TropXPoint,
    /// Sign sequence of the last iteration evaluated.
    pub last_sign: SignSeq,
}

#[derive(Debug, Clone)]
pub struct PerronData {
    pub root: RootBound,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub samples: Vec<SampleRecord>,
    pub consensus: Option<SignSeq>,
    pub stable_matrix: Option<IntMat>,
    pub char_poly: Option<IntPoly>,
    pub perron: Option<PerronData>,
    pub eigen_direction: Option<Vec<f64>>,
    pub eigen_residual: Option<f64>,
    /// One PL loop application rescales the eigen-direction by the root.
    pub eigen_rescale_ok: Option<bool>,
    pub cone_certificate: CertStatus,
    /// Certificate proved and every sample orbit ended inside the cone.
    pub certified: bool,
    pub spectral_duality: Option<bool>,
    /// The stable matrix reproduces one further exact loop iteration of
    /// every stabilized sample endpoint.
    pub linearized_check: Option<bool>,
}

impl StabilityReport {
    pub fn stretch_factor(&self) -> Result<f64> {
        match &self.perron {
            Some(p) => Ok(p.value),
            None => Err(Error::NoConsensus("no stable matrix, no stretch factor".into())),
        }
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(self.stretch_factor()?.ln())
    }

    pub fn any_non_strict(&self) -> bool {
        self.samples.iter().any(|s| s.status == SampleStatus::NonStrict)
    }
}

fn evaluate_sample(path: &MutationPath, start: &TropXPoint, opts: &DetectOptions) -> Result<SampleRecord> {
    let mut point = start.clone();
    let mut run_sign: Option<SignSeq> = None;
    let mut run_len = 0usize;
    let mut run_start = 0usize;
    let mut stabilized_at = None;
    let mut first_non_strict = None;
    let mut last_sign = SignSeq(Vec::new());
    for it in 1..=opts.n_max {
        let (next, sign) = traverse_x(path, &point)?;
        point = next;
        if it % RENORM_EVERY == 0 {
            renormalize(&mut point);
        }
        if let Some(entry) = sign.first_zero() {
            if first_non_strict.is_none() {
                first_non_strict = Some((entry + 1, it));
            }
            run_sign = None;
            run_len = 0;
        } else if run_sign.as_ref() == Some(&sign) {
            run_len += 1;
        } else {
            run_sign = Some(sign.clone());
            run_len = 1;
            run_start = it;
        }
        last_sign = sign;
        if run_len >= opts.window {
            stabilized_at = Some(run_start);
            break;
        }
    }
    let status = if stabilized_at.is_some() {
        SampleStatus::Stabilized
    } else if first_non_strict.is_some() {
        SampleStatus::NonStrict
    } else {
        SampleStatus::Inconclusive
    };
    Ok(SampleRecord {
        start: start.clone(),
        status,
        stabilized_at,
        terminal_sign: if stabilized_at.is_some() { run_sign } else { None },
        first_non_strict,
        final_point: point,
        last_sign,
    })
}

fn evaluate_samples(
    path: &MutationPath,
    samples: &[TropXPoint],
    opts: &DetectOptions,
) -> Result<Vec<SampleRecord>> {
    let workers = opts.threads.min(samples.len()).max(1);
    if workers <= 1 {
        return samples.iter().map(|s| evaluate_sample(path, s, opts)).collect();
    }
    // results are merged by sample index, never by completion order
    let mut out: Vec<Option<Result<SampleRecord>>> = (0..samples.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = samples.len().div_ceil(workers);
        for (slot, sample_chunk) in out.chunks_mut(chunk).zip(samples.chunks(chunk)) {
            scope.spawn(move || {
                for (o, s) in slot.iter_mut().zip(sample_chunk) {
                    *o = Some(evaluate_sample(path, s, opts));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("worker filled slot")).collect()
}

/// Detect sign stability of a mutation loop on the given samples (the
/// canonical points l± are always included, in front).
pub fn detect_sign_stability(
    path: &MutationPath,
    extra_samples: &[TropXPoint],
    opts: &DetectOptions,
) -> Result<StabilityReport> {
    opts.validate()?;
    path.require_loop()?;
    let (lp, lm) = canonical_points(path.start.n_uf());
    let mut samples = vec![lp, lm];
    samples.extend_from_slice(extra_samples);
    let records = evaluate_samples(path, &samples, opts)?;

    let mut consensus: Option<SignSeq> = None;
    if records.iter().all(|r| r.status == SampleStatus::Stabilized) {
        let first = records[0].terminal_sign.clone().unwrap();
        if records.iter().all(|r| r.terminal_sign.as_ref() == Some(&first)) {
            consensus = Some(first);
        }
    }

    let mut report = StabilityReport {
        samples: records,
        consensus: consensus.clone(),
        stable_matrix: None,
        char_poly: None,
        perron: None,
        eigen_direction: None,
        eigen_residual: None,
        eigen_rescale_ok: None,
        cone_certificate: CertStatus::NotAttempted,
        certified: false,
        spectral_duality: None,
        linearized_check: None,
    };
    let Some(eps) = consensus else {
        return Ok(report);
    };

    let stable = presentation_matrix(path, &eps)?;
    let char_poly = stable.char_poly();
    let perron = perron_root(&stable, &opts.root_half_width)?;
    let eigen = eigen_direction(&stable, perron.value);
    if let Some((v, residual)) = &eigen {
        report.eigen_residual = Some(*residual);
        report.eigen_rescale_ok = Some(eigen_rescale_ok(path, v, perron.value, 1e-9));
        report.eigen_direction = Some(v.clone());
    }
    let check = check_presentation_matrix(path, &eps)?;
    report.spectral_duality = Some(spectral_duality_check(&stable, &check));

    let cone = sign_cone(path, &eps)?;
    report.cone_certificate = certify_invariant_cone(&stable, &cone)?;
    let landed = report
        .samples
        .iter()
        .all(|r| cone.contains(&r.final_point));
    report.certified = report.cone_certificate == CertStatus::Proved && landed;

    // linearized regime: E applied to each stabilized endpoint must equal
    // one more exact loop traversal
    let mut linear_ok = true;
    for rec in &report.samples {
        if rec.status == SampleStatus::Stabilized {
            let (next, _) = traverse_x(path, &rec.final_point)?;
            if stable.mul_vec(&rec.final_point) != next {
                linear_ok = false;
            }
        }
    }
    report.linearized_check = Some(linear_ok);

    report.stable_matrix = Some(stable);
    report.char_poly = Some(char_poly);
    report.perron = Some(perron);
    Ok(report)
}

/// Largest real root of the characteristic polynomial, isolated exactly.
/// Sign-stable loops must have one at or above 1; anything else is
/// reported as an anomaly rather than silently returned.
pub fn perron_root(e: &IntMat, half_width: &Rat) -> Result<PerronData> {
    let poly = e.char_poly();
    let root = poly
        .largest_real_root(half_width)?
        .ok_or_else(|| Error::Anomaly("characteristic polynomial has no real root".into()))?;
    let value = root.to_f64();
    if value < 1.0 - 1e-9 {
        return Err(Error::Anomaly(format!(
            "largest real eigenvalue {value} is below 1; not a stable presentation matrix"
        )));
    }
    Ok(PerronData { root, value })
}

/// Null direction of (E - λI) in floating point, normalized to unit
/// max-norm with a deterministic overall sign. Returns the residual
/// ‖Ev - λv‖∞; discarded when it exceeds 1e-8.
pub fn eigen_direction(e: &IntMat, lambda: f64) -> Option<(Vec<f64>, f64)> {
    let n = e.size();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| e[(i, j)].to_f64().unwrap() - if i == j { lambda } else { 0.0 })
                .collect()
        })
        .collect();
    // row echelon with partial pivoting
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let (best, best_val) = (row..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((row, 0.0));
        if best_val < 1e-9 {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        for j in 0..n {
            a[row][j] /= p;
        }
        for r in 0..n {
            if r != row && a[r][col].abs() > 0.0 {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] -= f * a[row][j];
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free_col = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![0.0; n];
    v[free_col] = 1.0;
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[r][free_col];
    }
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return None;
    }
    let lead = v.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
    let scale = if lead < 0.0 { -max } else { max };
    for x in &mut v {
        *x /= scale;
    }
    let image = e.mul_vec_f64(&v);
    let residual = image
        .iter()
        .zip(&v)
        .map(|(y, x)| (y - lambda * x).abs())
        .fold(0.0f64, f64::max);
    if residual > 1e-8 {
        return None;
    }
    Some((v, residual))
}

/// Apply the loop's PL map once to the direction and test coordinatewise
/// rescaling by λ within the tolerance.
pub fn eigen_rescale_ok(path: &MutationPath, v: &[f64], lambda: f64, tol: f64) -> bool {
    match traverse_x_f64(path, v) {
        Ok(image) => image
            .iter()
            .zip(v)
            .all(|(y, x)| (y - lambda * x).abs() <= tol),
        Err(_) => false,
    }
}

/// Closure of the set of points whose sign along the path is `eps`: one
/// inequality per horizontal step, ε_ν · (row k of the partial matrix).
pub fn sign_cone(path: &MutationPath, eps: &SignSeq) -> Result<ConeDescription> {
    let partials = partial_presentation_matrices(path, eps)?;
    let mut rows = Vec::new();
    for (nu, (k, m)) in partials.iter().enumerate() {
        let s = Int::from(eps.0[nu].as_i8() as i64);
        let row: Vec<Int> = (0..m.size()).map(|j| &s * &m[(*k, j)]).collect();
        rows.push(row);
    }
    Ok(ConeDescription::new(rows))
}

/// char(E) must be (anti-)palindromic and agree with char(Ě) up to sign.
pub fn spectral_duality_check(e: &IntMat, e_check: &IntMat) -> bool {
    let p = e.char_poly();
    let q = e_check.char_poly();
    p.equals_up_to_sign(&p.reversed()) && p.equals_up_to_sign(&q)
}

/// Entrywise partial order: `lo <= hi` iff lo zeroes some entries of hi.
pub fn sign_leq(lo: &SignSeq, hi: &SignSeq) -> bool {
    lo.leq(hi)
}

#[derive(Debug, Clone)]
pub struct WeakSampleRecord {
    pub start: TropXPoint,
    /// Entrywise eventual sign: constant over the trailing half of the
    /// orbit, else zero.
    pub eventual: SignSeq,
}

#[derive(Debug, Clone)]
pub struct WeakReport {
    pub samples: Vec<WeakSampleRecord>,
    /// Greatest lower bound of the samples' eventual signs.
    pub stable_sign: SignSeq,
}

/// Weak sign stability: the maximal sign sequence eventually dominated by
/// every sample orbit. Errors when that sequence is identically zero.
pub fn detect_weak_sign_stability(
    path: &MutationPath,
    extra_samples: &[TropXPoint],
    opts: &DetectOptions,
) -> Result<WeakReport> {
    opts.validate()?;
    path.require_loop()?;
    let (lp, lm) = canonical_points(path.start.n_uf());
    let mut samples = vec![lp, lm];
    samples.extend_from_slice(extra_samples);
    let h = path.horizontal_len();
    let tail_start = opts.n_max / 2;
    let mut records = Vec::new();
    for start in &samples {
        let mut point = start.clone();
        let mut tail: Vec<SignSeq> = Vec::new();
        for it in 1..=opts.n_max {
            let (next, sign) = traverse_x(path, &point)?;
            point = next;
            if it % RENORM_EVERY == 0 {
                renormalize(&mut point);
            }
            if it > tail_start {
                tail.push(sign);
            }
        }
        let eventual = SignSeq(
            (0..h)
                .map(|nu| {
                    let first = tail[0].0[nu];
                    if tail.iter().all(|s| s.0[nu] == first) {
                        first
                    } else {
                        Sign::Zero
                    }
                })
                .collect(),
        );
        records.push(WeakSampleRecord { start: start.clone(), eventual });
    }
    let stable_sign = SignSeq(
        (0..h)
            .map(|nu| {
                let first = records[0].eventual.0[nu];
                if first != Sign::Zero
                    && records.iter().all(|r| r.eventual.0[nu] == first)
                {
                    first
                } else {
                    Sign::Zero
                }
            })
            .collect(),
    );
    if stable_sign.0.iter().all(|s| *s == Sign::Zero) {
        return Err(Error::NoConsensus(
            "not weakly sign-stable: every entry oscillates or vanishes".into(),
        ));
    }
    Ok(WeakReport { samples: records, stable_sign })
}

/// C-hereditariness: any horizontal step whose coordinate vanishes
/// identically on every generator's partial image must carry a nonzero
/// stable sign. Returns the failing steps (1-based); empty means the check
/// passes.
pub fn hereditary_failures(
    path: &MutationPath,
    generators: &[TropXPoint],
    stable_sign: &SignSeq,
) -> Result<Vec<usize>> {
    let h = path.horizontal_len();
    if stable_sign.len() != h {
        return Err(Error::SignLengthMismatch { got: stable_sign.len(), expected: h });
    }
    if generators.is_empty() {
        return Ok(Vec::new());
    }
    // walk each generator through the path, recording the coordinate at
    // every horizontal step
    let mut vanish = vec![true; h];
    for g in generators {
        let mut seed = path.start.clone();
        let mut point = g.clone();
        let mut nu = 0;
        for step in &path.steps {
            match *step {
                PathStep::Mutate(k) => {
                    if !point[k].is_zero() {
                        vanish[nu] = false;
                    }
                    nu += 1;
                    point = crate::trop::trop_x_step(&seed, k, &point)?;
                }
                PathStep::Swap(i, j) => {
                    if i < seed.n_uf() {
                        point.swap(i, j);
                    }
                }
            }
            seed = crate::seed::apply_step(&seed, step)?;
        }
    }
    Ok((0..h)
        .filter(|&nu| vanish[nu] && stable_sign.0[nu] == Sign::Zero)
        .map(|nu| nu + 1)
        .collect())
}

pub fn hereditary_check(
    path: &MutationPath,
    generators: &[TropXPoint],
    stable_sign: &SignSeq,
) -> Result<bool> {
    Ok(hereditary_failures(path, generators, stable_sign)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::ExchangeSeed;

    fn kronecker_loop(l: i64) -> MutationPath {
        MutationPath::new(
            ExchangeSeed::from_i64(2, vec![vec![0, -l], vec![l, 0]]),
            vec![PathStep::Mutate(0), PathStep::Swap(0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn canonical_points_shape() {
        let (p, m) = canonical_points(6);
        assert_eq!(p, vec![Rat::one(); 6]);
        assert_eq!(m, vec![-Rat::one(); 6]);
        let (p1, m1) = canonical_points(1);
        assert_eq!((p1.len(), m1.len()), (1, 1));
    }

    #[test]
    fn kronecker_consensus_plus() {
        let report =
            detect_sign_stability(&kronecker_loop(2), &[], &DetectOptions::default()).unwrap();
        assert_eq!(report.consensus, Some(SignSeq(vec![Sign::Plus])));
        let stable = report.stable_matrix.as_ref().unwrap();
        assert_eq!(*stable, IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]));
        let perron = report.perron.as_ref().unwrap();
        assert_eq!(perron.root.exact, Some(Rat::one()));
        assert_eq!(report.cone_certificate, CertStatus::Proved);
        assert!(report.certified);
        assert_eq!(report.spectral_duality, Some(true));
        assert_eq!(report.linearized_check, Some(true));
    }

    #[test]
    fn kronecker3_stretch_factor() {
        let report =
            detect_sign_stability(&kronecker_loop(3), &[], &DetectOptions::default()).unwrap();
        let lambda = report.stretch_factor().unwrap();
        assert!((lambda - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!((report.entropy().unwrap() - lambda.ln()).abs() < 1e-15);
    }

    #[test]
    fn sign_cone_kronecker_first_step() {
        let cone = sign_cone(&kronecker_loop(2), &SignSeq(vec![Sign::Plus])).unwrap();
        assert_eq!(cone.functionals, vec![vec![Int::from(1), Int::from(0)]]);
    }

    #[test]
    fn non_loop_rejected() {
        let path = MutationPath::new(
            ExchangeSeed::from_i64(2, vec![vec![0, 1], vec![-1, 0]]),
            vec![PathStep::Mutate(0)],
        )
        .unwrap();
        assert!(matches!(
            detect_sign_stability(&path, &[], &DetectOptions::default()),
            Err(Error::NotALoop)
        ));
    }

    #[test]
    fn perron_anomaly_below_one() {
        // nilpotent-like matrix with spectral radius 0
        let e = IntMat::from_rows(vec![vec![0, 1], vec![0, 0]]);
        let err = perron_root(&e, &DetectOptions::default().root_half_width).unwrap_err();
        assert!(matches!(err, Error::Anomaly(_)));
    }

    #[test]
    fn sign_leq_is_partial_order_on_samples() {
        let a = SignSeq::parse("(+,0,-)").unwrap();
        let b = SignSeq::parse("(+,+,-)").unwrap();
        let c = SignSeq::parse("(+,+,-)").unwrap();
        assert!(a.leq(&b));
        assert!(b.leq(&c) && c.leq(&b) && b == c);
        assert!(a.leq(&a));
    }

    #[test]
    fn hereditary_vacuous_cases() {
        let path = kronecker_loop(2);
        let strict = SignSeq(vec![Sign::Plus]);
        assert!(hereditary_check(&path, &[], &strict).unwrap());
        let gen = vec![vec![Rat::zero(), Rat::one()]];
        assert!(hereditary_check(&path, &gen, &strict).unwrap());
    }
}
