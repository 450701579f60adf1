//! Rigorous sign decisions for real cyclotomic values.
//!
//! Values are bracketed with fixed-point integer intervals at scale 2^p
//! (lower bound rounded down, upper bound rounded up); p doubles until the
//! bracket excludes zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
struct Interval {
    lo: BigInt,
    hi: BigInt,
}

impl Interval {
    fn exact(v: BigInt) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn neg(&self) -> Self {
        Self { lo: -&self.hi, hi: -&self.lo }
    }

    fn widen(&self, e: &BigInt) -> Self {
        Self { lo: &self.lo - e, hi: &self.hi + e }
    }

    /// Product of two nonnegative intervals at scale 2^p.
    fn mul_nonneg(&self, o: &Self, p: u32) -> Self {
        let lo = (&self.lo * &o.lo) >> p;
        let hi = ceil_shift(&self.hi * &o.hi, p);
        Self { lo, hi }
    }

    /// Multiplies by the exact rational `num/den` (den > 0).
    fn mul_rational(&self, num: &BigInt, den: &BigInt) -> Self {
        let (a, b) = if num.is_negative() { (&self.hi, &self.lo) } else { (&self.lo, &self.hi) };
        Self { lo: (a * num).div_floor(den), hi: (b * num).div_ceil(den) }
    }

    fn div_int_nonneg(&self, d: u64) -> Self {
        let d = BigInt::from(d);
        Self { lo: self.lo.div_floor(&d), hi: self.hi.div_ceil(&d) }
    }
}

fn ceil_shift(v: BigInt, p: u32) -> BigInt {
    let d = BigInt::from(1) << p;
    v.div_ceil(&d)
}

/// Bracket for atan(1/k) at scale 2^p, k ≥ 2.
fn atan_inv(k: u64, p: u32) -> Interval {
    let one = BigInt::from(1) << p;
    let k2 = BigInt::from(k * k);
    let mut power = &one / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut i = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        terms += 1;
        i += 1;
    }
    // Each truncated power is within 2 units and each quotient within 3; the
    // alternating tail after the last nonzero power is below 2 units.
    let err = BigInt::from(3 * terms + 2);
    Interval { lo: &sum - &err, hi: &sum + &err }
}

/// Bracket for π at scale 2^p (Machin's formula).
fn pi(p: u32) -> Interval {
    let a = atan_inv(5, p);
    let b = atan_inv(239, p);
    let a16 = Interval { lo: a.lo * 16, hi: a.hi * 16 };
    let b4 = Interval { lo: b.lo * 4, hi: b.hi * 4 };
    a16.add(&b4.neg())
}

/// Bracket for cos(θ) with θ ∈ [0, π/2] given as a nonnegative interval.
fn cos_small(theta: &Interval, p: u32) -> Interval {
    let one = BigInt::from(1) << p;
    let theta = Interval { lo: theta.lo.clone().max(BigInt::zero()), hi: theta.hi.clone() };
    let t2 = theta.mul_nonneg(&theta, p);
    let mut sum = Interval::exact(one.clone());
    let mut term = Interval::exact(one);
    let mut n = 1u64;
    loop {
        term = term.mul_nonneg(&t2, p).div_int_nonneg((2 * n - 1) * (2 * n));
        let signed = if n % 2 == 1 { term.neg() } else { term.clone() };
        sum = sum.add(&signed);
        // From n = 2 on the terms decrease, so the tail is bounded by the
        // last term's magnitude.
        if n >= 2 && term.hi <= BigInt::from(1) {
            return sum.widen(&(term.hi.clone() + BigInt::from(1)));
        }
        n += 1;
    }
}

/// Bracket for cos(2πk/N) at scale 2^p.
fn cos_turn(k: u64, n: u64, p: u32, pi_b: &Interval) -> Interval {
    let k = k % n;
    let k1 = k.min(n - k);
    // Angle fraction a/b ∈ [0, 1/4] and the sign of the result.
    let (a, b, negate) = if 4 * k1 <= n { (k1, n, false) } else { (n - 2 * k1, 2 * n, true) };
    let two_pi = Interval { lo: &pi_b.lo * 2, hi: &pi_b.hi * 2 };
    let theta = two_pi.mul_rational(&BigInt::from(a), &BigInt::from(b));
    let c = cos_small(&theta, p);
    if negate {
        c.neg()
    } else {
        c
    }
}

/// Sign of Σ_k coeffs[k]·cos(2πk/n); the value must be nonzero for termination.
pub(crate) fn real_sign(coeffs: &[BigRational], n: u64) -> Ordering {
    let mut p = 64u32;
    loop {
        let pi_b = pi(p + 16);
        let mut acc = Interval::exact(BigInt::zero());
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cb = cos_turn(k as u64, n, p + 16, &pi_b);
            acc = acc.add(&cb.mul_rational(c.numer(), c.denom()));
        }
        if acc.lo.is_positive() {
            return Ordering::Greater;
        }
        if acc.hi.is_negative() {
            return Ordering::Less;
        }
        p *= 2;
        assert!(p <= 1 << 20, "sign evaluation did not separate from zero");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn to_f64(i: &Interval, p: u32) -> (f64, f64) {
        let s = 2f64.powi(p as i32);
        (i.lo.to_f64().unwrap() / s, i.hi.to_f64().unwrap() / s)
    }

    #[test]
    fn pi_bracket_contains_pi() {
        let (lo, hi) = to_f64(&pi(80), 80);
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi);
        assert!(hi - lo < 1e-15);
    }

    #[test]
    fn cosine_brackets() {
        let p = 80;
        let pb = pi(p);
        for n in [1u64, 2, 3, 5, 7, 12, 25] {
            for k in 0..n {
                let (lo, hi) = to_f64(&cos_turn(k, n, p, &pb), p);
                let truth = (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
                assert!(lo - 1e-12 <= truth && truth <= hi + 1e-12, "cos(2π{k}/{n})");
                assert!(hi - lo < 1e-12);
            }
        }
    }
}
