//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are coefficient vectors over the power basis `1, ζ, …, ζ^{φ(N)-1}`,
//! always kept reduced modulo the cyclotomic polynomial Φ_N. Reduced vectors
//! are canonical, so equality of values is equality of vectors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divisors, euler_phi, lcm, mobius};
use crate::error::{Error, Result};
use crate::real::real_sign;
use crate::scalar::Scalar;

/// Largest conductor for which a field is built.
pub const MAX_CONDUCTOR: u64 = 10_000_000;

/// The data of Q(ζ_N): degree and the reduction rule for ζ^φ.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    n: u64,
    phi: usize,
    modulus: Vec<i64>,
    terms: Vec<(usize, i64)>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        if n > MAX_CONDUCTOR {
            return Err(Error::CapExceeded { what: "cyclotomic conductor", size: n, cap: MAX_CONDUCTOR });
        }
        let modulus = cyclotomic_polynomial(n);
        let phi = modulus.len() - 1;
        let terms = modulus[..phi].iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
        Ok(Arc::new(Self { n, phi, modulus, terms }))
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of Φ_N, constant term first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduces a polynomial in ζ (any length) to the canonical basis.
    pub(crate) fn reduce<T: Scalar>(&self, mut buf: Vec<T>) -> Vec<T> {
        let n = self.n as usize;
        if buf.len() > n {
            for i in n..buf.len() {
                let c = std::mem::replace(&mut buf[i], T::zero());
                if !c.is_zero() {
                    let j = i % n;
                    buf[j] = buf[j].clone() + c;
                }
            }
            buf.truncate(n);
        }
        for deg in (self.phi..buf.len()).rev() {
            let c = std::mem::replace(&mut buf[deg], T::zero());
            if c.is_zero() {
                continue;
            }
            let shift = deg - self.phi;
            for &(j, a) in &self.terms {
                let t = &mut buf[shift + j];
                *t = t.clone() - c.clone() * T::from_int(a);
            }
        }
        buf.resize(self.phi, T::zero());
        buf
    }
}

/// Φ_N as an integer coefficient vector, constant term first.
///
/// Uses Φ_N = Π_{d | N} (x^d - 1)^{μ(N/d)} evaluated as truncated power
/// series of length φ(N) + 1; both the products and the quotients by
/// `x^d - 1` (constant term -1, hence invertible) are exact there.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let phi = euler_phi(n) as usize;
    let len = phi + 1;
    let mut p = vec![0i128; len];
    p[0] = 1;
    let ds = divisors(n);
    for &d in &ds {
        if mobius(n / d) == 1 {
            let d = d as usize;
            for i in (0..len).rev() {
                let high = if i >= d { p[i - d] } else { 0 };
                p[i] = high - p[i];
            }
        }
    }
    for &d in &ds {
        if mobius(n / d) == -1 {
            let d = d as usize;
            for i in 0..len {
                let low = if i >= d { p[i - d] } else { 0 };
                p[i] = low - p[i];
            }
        }
    }
    p.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficients fit in i64")).collect()
}

/// An element of Q(ζ_N) (or Z[ζ_N] for integer scalars) in reduced form.
#[derive(Clone)]
pub struct CyclotomicNumber<T> {
    field: Arc<CyclotomicField>,
    coeffs: Vec<T>,
}

/// ζ_N^t in a freshly built field of conductor `n`.
pub fn root_of_unity<T: Scalar>(n: u64, t: u64) -> Result<CyclotomicNumber<T>> {
    let field = CyclotomicField::new(n)?;
    Ok(CyclotomicNumber::root_of_unity(&field, t))
}

impl<T: Scalar> CyclotomicNumber<T> {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self { field: field.clone(), coeffs: vec![T::zero(); field.phi] }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_scalar(field, T::one())
    }

    pub fn from_scalar(field: &Arc<CyclotomicField>, c: T) -> Self {
        let mut out = Self::zero(field);
        out.coeffs[0] = c;
        out
    }

    pub fn root_of_unity(field: &Arc<CyclotomicField>, t: u64) -> Self {
        Self::from_power_sum(field, [(t, T::one())])
    }

    /// Σ c·ζ^k over the given `(k, c)` terms.
    pub fn from_power_sum(field: &Arc<CyclotomicField>, terms: impl IntoIterator<Item = (u64, T)>) -> Self {
        let n = field.n;
        let mut buf = vec![T::zero(); n as usize];
        for (k, c) in terms {
            let slot = &mut buf[(k % n) as usize];
            *slot = slot.clone() + c;
        }
        Self { field: field.clone(), coeffs: field.reduce(buf) }
    }

    /// Builds from a raw coefficient vector in powers of ζ, reducing it.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<T>) -> Self {
        Self { field: field.clone(), coeffs: field.reduce(coeffs) }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    /// Reduced coefficients over `1, ζ, …, ζ^{φ-1}`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn rational_value(&self) -> Option<&T> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    /// Multiplies by ζ^t.
    pub fn mul_root(&self, t: u64) -> Self {
        let n = self.field.n;
        let mut buf = vec![T::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[((k as u64 + t) % n) as usize] = c.clone();
            }
        }
        Self { field: self.field.clone(), coeffs: self.field.reduce(buf) }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.field.n;
        let mut buf = vec![T::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[((n - k as u64) % n) as usize] = c.clone();
            }
        }
        Self { field: self.field.clone(), coeffs: self.field.reduce(buf) }
    }

    pub fn is_real(&self) -> bool {
        self.conj().coeffs == self.coeffs
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign of a real value; `None` when the value is not real.
    ///
    /// Zero is detected exactly. Nonzero values are bracketed by interval
    /// evaluation of Σ c_k cos(2πk/N) with doubling precision until the
    /// bracket excludes zero.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        let coeffs: Vec<BigRational> = self.coeffs.iter().map(Scalar::to_rational).collect();
        Some(real_sign(&coeffs, self.field.n))
    }

    /// True iff the value is real and ≥ 0.
    pub fn is_real_nonnegative(&self) -> bool {
        matches!(self.real_sign(), Some(Ordering::Equal | Ordering::Greater))
    }

    /// Floating point value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.n as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = num_traits::ToPrimitive::to_f64(&c.to_rational()).unwrap_or(f64::NAN);
            let a = 2.0 * std::f64::consts::PI * k as f64 / n;
            (re + c * a.cos(), im + c * a.sin())
        })
    }

    /// The same value inside Q(ζ_M) for a multiple M of N.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.field.n) {
            return Err(Error::Precondition(format!("{} is not a multiple of conductor {}", m, self.field.n)));
        }
        let target = CyclotomicField::new(m)?;
        Ok(self.embed_into(&target))
    }

    fn embed_into(&self, target: &Arc<CyclotomicField>) -> Self {
        let step = target.n / self.field.n;
        Self::from_power_sum(
            target,
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as u64 * step, c.clone())),
        )
    }

    pub fn to_rational_coeffs(&self) -> CyclotomicNumber<BigRational> {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(Scalar::to_rational).collect() }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(self.field.n, other.field.n, "cyclotomic operands live in different fields");
    }
}

impl<T: Scalar> PartialEq for CyclotomicNumber<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.coeffs == other.coeffs;
        }
        let m = lcm(self.field.n, other.field.n);
        match CyclotomicField::new(m) {
            Ok(f) => self.embed_into(&f).coeffs == other.embed_into(&f).coeffs,
            Err(_) => false,
        }
    }
}

impl<T: Scalar> Eq for CyclotomicNumber<T> {}

impl<T: Scalar> fmt::Debug for CyclotomicNumber<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.field.n, self)
    }
}

impl<T: Scalar> fmt::Display for CyclotomicNumber<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                _ => write!(f, "{}*z^{}", c, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;
    fn add(self, rhs: Self) -> CyclotomicNumber<T> {
        self.assert_same_field(rhs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;
    fn sub(self, rhs: Self) -> CyclotomicNumber<T> {
        self.assert_same_field(rhs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;
    fn neg(self) -> CyclotomicNumber<T> {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Scalar> Mul for &CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;
    fn mul(self, rhs: Self) -> CyclotomicNumber<T> {
        self.assert_same_field(rhs);
        let phi = self.field.phi;
        let mut buf = vec![T::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    buf[i + j] = buf[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        CyclotomicNumber { field: self.field.clone(), coeffs: self.field.reduce(buf) }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<T: Scalar> $tr for CyclotomicNumber<T> {
            type Output = CyclotomicNumber<T>;
            fn $f(self, rhs: Self) -> CyclotomicNumber<T> {
                (&self).$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<T: Scalar> Neg for CyclotomicNumber<T> {
    type Output = CyclotomicNumber<T>;
    fn neg(self) -> CyclotomicNumber<T> {
        -&self
    }
}

/// Inverse in Q(ζ_N) via the norm: x⁻¹ = (Π_{σ ≠ id} σ(x)) / N(x).
pub fn inverse(x: &CyclotomicNumber<BigRational>) -> Option<CyclotomicNumber<BigRational>> {
    if x.is_zero() {
        return None;
    }
    let n = x.conductor();
    let field = x.field().clone();
    let mut others = CyclotomicNumber::one(&field);
    for s in 2..n.max(2) {
        if crate::arith::gcd(s, n) != 1 {
            continue;
        }
        let conj = CyclotomicNumber::from_power_sum(
            &field,
            x.coeffs.iter().enumerate().map(|(k, c)| (k as u64 * s, c.clone())),
        );
        others = &others * &conj;
    }
    let norm = (x * &others).rational_value()?.clone();
    Some(others.scale(&(BigRational::one() / norm)))
}
