//! Integer polynomials, Sturm chains and exact isolation of the largest
//! real root.
//!
//! Bisection runs on the squarefree part so that multiple roots (the
//! stable matrix of a Dehn twist has (x-1)^2 in its characteristic
//! polynomial) still produce a sign change. Rational roots are recognized
//! exactly; determinant-±1 matrices only admit ±1.

use crate::{Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients lowest degree first; no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly(Vec<Int>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> IntPoly {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Int::zero());
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: Vec<i64>) -> IntPoly {
        IntPoly::new(coeffs.into_iter().map(Int::from).collect())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.0
    }

    pub fn coeffs_i64(&self) -> Vec<i64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_i64().expect("coefficient fits i64")).collect()
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero_poly(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn leading(&self) -> &Int {
        self.0.last().unwrap()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::new(vec![Int::zero()]);
        }
        let coeffs = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Int::from(k as i64))
            .collect();
        IntPoly::new(coeffs)
    }

    /// Coefficient list reversed, as used by the palindromicity test.
    pub fn reversed(&self) -> IntPoly {
        let mut coeffs: Vec<Int> = self.0.iter().rev().cloned().collect();
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        IntPoly::new(coeffs)
    }

    pub fn negated(&self) -> IntPoly {
        IntPoly::new(self.0.iter().map(|c| -c).collect())
    }

    /// True iff `self = ±other` coefficientwise.
    pub fn equals_up_to_sign(&self, other: &IntPoly) -> bool {
        self == other || *self == other.negated()
    }

    fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        if g.is_zero() {
            Int::one()
        } else {
            g
        }
    }

    /// Divide by the content and force a positive leading coefficient.
    fn primitive_positive(&self) -> IntPoly {
        let g = self.content();
        let mut coeffs: Vec<Int> = self.0.iter().map(|c| c / &g).collect();
        if coeffs.last().unwrap().is_negative() {
            for c in &mut coeffs {
                *c = -&*c;
            }
        }
        IntPoly::new(coeffs)
    }

    /// Remainder of self / div over the rationals, cleared back to a
    /// primitive integer polynomial. Scaling by positive constants keeps
    /// the sign data a Sturm chain needs.
    fn rem_primitive(&self, div: &IntPoly) -> IntPoly {
        let mut rem: Vec<Rat> = self.0.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let dn = div.degree();
        let dl = Rat::from_integer(div.leading().clone());
        while rem.len() > dn && rem.len() > 1 {
            let k = rem.len() - 1;
            let factor = rem[k].clone() / dl.clone();
            if !factor.is_zero() {
                for (j, c) in div.0.iter().enumerate() {
                    let t = &factor * Rat::from_integer(c.clone());
                    rem[k - dn + j] = &rem[k - dn + j] - &t;
                }
            }
            rem.pop();
        }
        while rem.len() > 1 && rem.last().unwrap().is_zero() {
            rem.pop();
        }
        // clear denominators (positive scaling)
        let mut lcm = Int::one();
        for c in &rem {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<Int> = rem
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        IntPoly::new(ints)
    }

    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_positive();
        let mut b = other.primitive_positive();
        while !b.is_zero_poly() {
            let r = a.rem_primitive(&b);
            a = b;
            b = if r.is_zero_poly() {
                IntPoly::new(vec![Int::zero()])
            } else {
                r.primitive_positive()
            };
        }
        a
    }

    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree() == 0 {
            return self.primitive_positive();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive_positive();
        }
        self.div_exact(&g).primitive_positive()
    }

    /// Exact polynomial division, used only with known factors (gcd output).
    fn div_exact(&self, div: &IntPoly) -> IntPoly {
        let mut rem: Vec<Rat> = self.0.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let dn = div.degree();
        let dl = Rat::from_integer(div.leading().clone());
        let qlen = rem.len().saturating_sub(dn);
        let mut quot = vec![Rat::zero(); qlen.max(1)];
        while rem.len() > dn {
            let k = rem.len() - 1;
            let factor = rem[k].clone() / dl.clone();
            quot[k - dn] = factor.clone();
            for (j, c) in div.0.iter().enumerate() {
                let t = &factor * Rat::from_integer(c.clone());
                rem[k - dn + j] = &rem[k - dn + j] - &t;
            }
            rem.pop();
            if rem.is_empty() {
                break;
            }
        }
        IntPoly::new(
            quot.into_iter()
                .map(|c| {
                    debug_assert!(c.is_integer(), "division was not exact");
                    c.to_integer()
                })
                .collect(),
        )
    }

    /// Divide by the content, keeping the sign of the leading coefficient.
    fn primitive_keep_sign(&self) -> IntPoly {
        let g = self.content();
        IntPoly::new(self.0.iter().map(|c| c / &g).collect())
    }

    fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.primitive_keep_sign()];
        let d = self.derivative();
        if d.is_zero_poly() {
            return chain;
        }
        chain.push(d.primitive_keep_sign());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem_primitive(&chain[n - 1]);
            if r.is_zero_poly() {
                break;
            }
            chain.push(r.negated().primitive_keep_sign());
        }
        chain
    }

    fn sign_variations_at(chain: &[IntPoly], x: &Rat) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v > Rat::zero();
            if let Some(prev) = last {
                if prev != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }

    /// Number of distinct real roots in the half-open interval (a, b],
    /// assuming the polynomial is squarefree and does not vanish at `a`.
    fn count_roots(chain: &[IntPoly], a: &Rat, b: &Rat) -> usize {
        Self::sign_variations_at(chain, a).saturating_sub(Self::sign_variations_at(chain, b))
    }

    /// Cauchy bound: every real root lies in [-U, U].
    fn root_bound(&self) -> Rat {
        let lead = Rat::from_integer(self.leading().abs());
        let mut m = Rat::zero();
        for c in self.0.iter().take(self.0.len() - 1) {
            let v = Rat::from_integer(c.abs());
            if v > m {
                m = v;
            }
        }
        Rat::one() + m / lead
    }

    /// Isolate the largest real root to within ±`half_width`.
    ///
    /// Returns `None` if there is no real root. `exact` is set when the
    /// root is recognized as rational (tested from divisors of the
    /// constant and leading coefficients).
    pub fn largest_real_root(&self, half_width: &Rat) -> Result<Option<RootBound>> {
        let p = self.squarefree_part();
        if p.degree() == 0 {
            return Ok(None);
        }
        let chain = p.sturm_chain();
        let bound = p.root_bound();
        let mut lo = -bound.clone() - Rat::one();
        let mut hi = bound;
        if Self::count_roots(&chain, &lo, &hi) == 0 {
            return Ok(None);
        }
        let two = crate::rat_int(2);
        while (&hi - &lo) > &two * half_width {
            let mid = (&lo + &hi) / &two;
            if p.eval(&mid).is_zero() {
                if Self::count_roots(&chain, &mid, &hi) == 0 {
                    return Ok(Some(RootBound::exact(mid)));
                }
                lo = mid;
                continue;
            }
            if Self::count_roots(&chain, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // recognize a rational root inside the isolating interval
        for cand in p.rational_candidates() {
            if cand > lo && cand <= hi && p.eval(&cand).is_zero() {
                return Ok(Some(RootBound::exact(cand)));
            }
        }
        Ok(Some(RootBound::interval(lo, hi)))
    }

    /// Candidate rational roots p/q with p | constant, q | leading.
    /// Skipped (empty) when the coefficients are too large to factor
    /// cheaply; the bisection interval then stays an interval.
    fn rational_candidates(&self) -> Vec<Rat> {
        let limit = Int::from(100_000i64);
        let c0 = self.0[0].abs();
        let cl = self.leading().abs();
        if c0.is_zero() {
            return vec![Rat::zero()];
        }
        if c0 > limit || cl > limit {
            return Vec::new();
        }
        let mut out = Vec::new();
        for p in divisors(&c0) {
            for q in divisors(&cl) {
                let r = Rat::new(p.clone(), q.clone());
                out.push(r.clone());
                out.push(-r);
            }
        }
        out
    }
}

fn divisors(n: &Int) -> Vec<Int> {
    use num_traits::ToPrimitive;
    let v = n.to_u64().expect("divisor enumeration bounded");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(Int::from(d));
            if d != v / d {
                out.push(Int::from(v / d));
            }
        }
        d += 1;
    }
    out
}

/// Location of a real root: either exact or bracketed in (lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct RootBound {
    pub lo: Rat,
    pub hi: Rat,
    pub exact: Option<Rat>,
}

impl RootBound {
    fn exact(r: Rat) -> RootBound {
        RootBound { lo: r.clone(), hi: r.clone(), exact: Some(r) }
    }

    fn interval(lo: Rat, hi: Rat) -> RootBound {
        RootBound { lo, hi, exact: None }
    }

    pub fn midpoint(&self) -> Rat {
        match &self.exact {
            Some(r) => r.clone(),
            None => (&self.lo + &self.hi) / crate::rat_int(2),
        }
    }

    pub fn half_width(&self) -> Rat {
        match &self.exact {
            Some(_) => Rat::zero(),
            None => (&self.hi - &self.lo) / crate::rat_int(2),
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x^{k}")?;
            first = false;
        }
        Ok(())
    }
}
