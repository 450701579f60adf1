//! Gaussian characteristic functions exp{−⟨Ay, y⟩} on the lattice Z^n and on
//! the rationals. The functional equation for them is an identity between
//! rational quadratic exponents, so everything here is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::RationalField;
use crate::Rational;

/// A symmetric positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticGaussianSpec<T: RationalField> {
    a: Vec<Vec<T>>,
}

impl<T: RationalField> QuadraticGaussianSpec<T> {
    pub fn new(a: Vec<Vec<T>>) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("matrix is not square ({n} rows)")));
        }
        if (0..n).any(|i| (0..i).any(|j| a[i][j] != a[j][i])) {
            return Err(Error::NotSymmetric);
        }
        if !is_psd(&a) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(Self { a })
    }

    pub fn from_ints(a: &[Vec<i64>]) -> Result<Self> {
        Self::new(a.iter().map(|r| r.iter().map(|&x| T::from_int(x)).collect()).collect())
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.a
    }

    /// ⟨Ay, y⟩.
    pub fn form(&self, y: &[i64]) -> T {
        let mut s = T::zero();
        for (i, row) in self.a.iter().enumerate() {
            for (j, aij) in row.iter().enumerate() {
                s = s + aij.clone() * T::from_int(y[i] * y[j]);
            }
        }
        s
    }

    pub fn determinant(&self) -> Rational {
        let m: Vec<Vec<Rational>> = self.a.iter().map(|r| r.iter().map(|x| x.to_rational()).collect()).collect();
        rational_det(m)
    }
}

/// Symmetric elimination: a positive pivot is eliminated, a zero pivot
/// needs a zero row, a negative pivot fails.
fn is_psd<T: RationalField>(a: &[Vec<T>]) -> bool {
    let mut m: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|x| x.to_rational()).collect()).collect();
    let n = m.len();
    for k in 0..n {
        let p = m[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if m[k][k + 1..].iter().any(|x| !x.is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            let pivot = m[k].clone();
            for (x, y) in m[i][k..].iter_mut().zip(&pivot[k..]) {
                *x -= &f * y;
            }
        }
    }
    true
}

fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            let pivot = m[k].clone();
            for (x, y) in m[i][k..].iter_mut().zip(&pivot[k..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss_det(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(0);
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d: BigInt = &a[n - 1][n - 1] * sign;
    d.to_i128().ok_or_else(|| Error::Dimension("determinant exceeds 128 bits".into()))
}

/// An integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAutomorphism {
    m: Vec<Vec<i64>>,
}

impl LatticeAutomorphism {
    pub fn new(m: Vec<Vec<i64>>) -> Result<Self> {
        let d = bareiss_det(&m)?;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(Self { m })
    }

    pub fn dimension(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.m
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.m.iter().map(|r| r.iter().zip(v).map(|(a, x)| a * x).sum()).collect()
    }
}

/// Unimodularity of (α̃, I + α̃, I − α̃).
pub fn admissibility_on_lattice(m: &[Vec<i64>]) -> Result<(bool, bool, bool)> {
    let shifted = |s: i64| -> Vec<Vec<i64>> {
        m.iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| s * x + i64::from(i == j)).collect())
            .collect()
    };
    let unimodular = |a: &[Vec<i64>]| bareiss_det(a).map(|d| d.abs() == 1);
    Ok((unimodular(m)?, unimodular(&shifted(1))?, unimodular(&shifted(-1))?))
}

fn check_dims<T: RationalField>(
    a1: &QuadraticGaussianSpec<T>,
    a2: &QuadraticGaussianSpec<T>,
    alpha: &LatticeAutomorphism,
) -> Result<usize> {
    let n = a1.dimension();
    if a2.dimension() != n || alpha.dimension() != n {
        return Err(Error::Dimension(format!(
            "dimensions {}, {} and {} differ",
            a1.dimension(),
            a2.dimension(),
            alpha.dimension()
        )));
    }
    Ok(n)
}

/// The closed form and the separately tracked symmetry of α̃ᵀA2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussianCondition {
    /// A1 + α̃ᵀA2 = 0.
    pub holds: bool,
    /// α̃ᵀA2 is symmetric.
    pub cross_symmetric: bool,
}

pub fn gaussian_condition<T: RationalField>(
    a1: &QuadraticGaussianSpec<T>,
    a2: &QuadraticGaussianSpec<T>,
    alpha: &LatticeAutomorphism,
) -> Result<GaussianCondition> {
    let n = check_dims(a1, a2, alpha)?;
    let m = alpha.matrix();
    // (α̃ᵀA2)_ij = Σ_k m_ki A2_kj
    let cross: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(T::zero(), |s, k| s + T::from_int(m[k][i]) * a2.a[k][j].clone())).collect())
        .collect();
    let holds = (0..n).all(|i| (0..n).all(|j| (a1.a[i][j].clone() + cross[i][j].clone()).is_zero()));
    let cross_symmetric = (0..n).all(|i| (0..i).all(|j| cross[i][j] == cross[j][i]));
    Ok(GaussianCondition { holds, cross_symmetric })
}

/// Exact matrix condition for (exp{−⟨A1y,y⟩}, exp{−⟨A2y,y⟩}) to solve the
/// functional equation.
pub fn gaussian_pair_symmetry_condition<T: RationalField>(
    a1: &QuadraticGaussianSpec<T>,
    a2: &QuadraticGaussianSpec<T>,
    alpha: &LatticeAutomorphism,
) -> Result<bool> {
    Ok(gaussian_condition(a1, a2, alpha)?.holds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowVerdict {
    pub holds: bool,
    /// First (u, v) in scan order where the exponents differ.
    pub witness: Option<(Vec<i64>, Vec<i64>)>,
    pub points: u64,
}

/// Compares ⟨A1(u+v),u+v⟩ + ⟨A2(u+α̃v),u+α̃v⟩ with the same at −v for every
/// integer u, v of max-norm at most `radius`.
pub fn window_verify<T: RationalField>(
    a1: &QuadraticGaussianSpec<T>,
    a2: &QuadraticGaussianSpec<T>,
    alpha: &LatticeAutomorphism,
    radius: u32,
) -> Result<WindowVerdict> {
    let n = check_dims(a1, a2, alpha)?;
    if radius == 0 {
        return Err(Error::Precondition("radius must be at least 1".into()));
    }
    // Scale both forms to integers by a common denominator; it cancels.
    let rats: Vec<Rational> = a1.a.iter().chain(&a2.a).flatten().map(|x| x.to_rational()).collect();
    let d = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = |a: &[Vec<T>]| -> Vec<Vec<BigInt>> {
        a.iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let q = x.to_rational();
                        q.numer() * (&d / q.denom())
                    })
                    .collect()
            })
            .collect()
    };
    let (b1, b2) = (scale(&a1.a), scale(&a2.a));
    let r = i64::from(radius);
    let amax = alpha.matrix().iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let xmax = BigInt::from(r) * (BigInt::from(n as u64) * amax + 1u32);
    let emax = b1.iter().chain(&b2).flatten().map(|x| x.abs()).max().unwrap_or_default();
    // Four forms, n² terms each.
    let bound = emax * &xmax * &xmax * (4 * n * n) as u64;
    if bound.bits() < 120 {
        let conv = |b: Vec<Vec<BigInt>>| {
            b.into_iter().map(|r| r.into_iter().map(|x| x.to_i128().unwrap()).collect()).collect()
        };
        Ok(scan::<i128>(conv(b1), conv(b2), alpha, n, r))
    } else {
        Ok(scan::<BigInt>(b1, b2, alpha, n, r))
    }
}

trait Acc: Clone + Zero + PartialEq + std::ops::Add<Output = Self> + std::ops::Mul<Output = Self> + From<i64> {}
impl Acc for i128 {}
impl Acc for BigInt {}

fn form<A: Acc>(b: &[Vec<A>], x: &[i64]) -> A {
    let mut s = A::zero();
    for (i, row) in b.iter().enumerate() {
        for (j, bij) in row.iter().enumerate() {
            if x[i] != 0 && x[j] != 0 {
                s = s + bij.clone() * A::from(x[i] * x[j]);
            }
        }
    }
    s
}

fn scan<A: Acc>(b1: Vec<Vec<A>>, b2: Vec<Vec<A>>, alpha: &LatticeAutomorphism, n: usize, r: i64) -> WindowVerdict {
    let side = (2 * r + 1) as u64;
    let count = side.pow(n as u32);
    let point = |mut k: u64| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let c = (k % side) as i64 - r;
                k /= side;
                c
            })
            .collect()
    };
    let pts: Vec<Vec<i64>> = (0..count).map(point).collect();
    let images: Vec<Vec<i64>> = pts.iter().map(|v| alpha.apply(v)).collect();
    let comb = |u: &[i64], v: &[i64], s: i64| -> Vec<i64> { u.iter().zip(v).map(|(a, b)| a + s * b).collect() };
    let mut points = 0;
    for u in &pts {
        for (v, av) in pts.iter().zip(&images) {
            points += 1;
            let lhs = form(&b1, &comb(u, v, 1)) + form(&b2, &comb(u, av, 1));
            let rhs = form(&b1, &comb(u, v, -1)) + form(&b2, &comb(u, av, -1));
            if lhs != rhs {
                return WindowVerdict { holds: false, witness: Some((u.clone(), v.clone())), points };
            }
        }
    }
    WindowVerdict { holds: true, witness: None, points }
}

fn check_solenoid(s1: &Rational, s2: &Rational, alpha: &Rational) -> Result<()> {
    if s1.is_negative() || s2.is_negative() {
        return Err(Error::Precondition("σ must be nonnegative".into()));
    }
    if alpha.is_zero() {
        return Err(Error::Precondition("α must be nonzero".into()));
    }
    Ok(())
}

/// σ1 + ασ2 = 0, for exp{−σ_j y²} on the rational dual.
pub fn solenoid_pair_condition(s1: &Rational, s2: &Rational, alpha: &Rational) -> Result<bool> {
    check_solenoid(s1, s2, alpha)?;
    Ok((s1 + alpha * s2).is_zero())
}

/// σ1(u+v)² + σ2(u+αv)² = σ1(u−v)² + σ2(u−αv)² at every sample.
pub fn solenoid_window(
    s1: &Rational,
    s2: &Rational,
    alpha: &Rational,
    samples: &[(Rational, Rational)],
) -> Result<bool> {
    check_solenoid(s1, s2, alpha)?;
    let q = |u: &Rational, v: &Rational, sign: &Rational| {
        let a = u + sign * v;
        let b = u + sign * alpha * v;
        s1 * &a * &a + s2 * &b * &b
    };
    let (one, minus) = (Rational::one(), -Rational::one());
    Ok(samples.iter().all(|(u, v)| q(u, v, &one) == q(u, v, &minus)))
}

/// Multiplication by α is admissible on the rational dual: α ≠ 0, ±1.
pub fn solenoid_admissible(alpha: &Rational) -> bool {
    !alpha.is_zero() && alpha.abs() != Rational::one()
}
