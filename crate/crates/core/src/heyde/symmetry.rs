//! The functional equation on characteristic functions and the
//! joint-distribution oracle it is checked against.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::prime_power;
use crate::cyclotomic::CyclotomicNumber;
use crate::distribution::Distribution;
use crate::duality::PairingTable;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::morphism::Homomorphism;
use crate::scalar::{RationalField, Scalar};
use crate::Rational;

/// Above this many (|G|·N) transform coefficients the equation checker
/// refuses to run.
pub const TRANSFORM_CAP: u64 = 1 << 26;

/// Independent random variables ξ_j ~ μ_j with the forms L1 = ξ1 + ξ2 and
/// L2 = ξ1 + αξ2.
#[derive(Clone, Debug)]
pub struct HeydeInstance<T: RationalField> {
    alpha: Homomorphism,
    mu1: Distribution<T>,
    mu2: Distribution<T>,
}

impl<T: RationalField> HeydeInstance<T> {
    pub fn new(alpha: &Homomorphism, mu1: Distribution<T>, mu2: Distribution<T>) -> Result<Self> {
        let g = alpha.domain();
        g.same_as(mu1.group())?;
        g.same_as(mu2.group())?;
        if !alpha.is_automorphism() {
            return Err(Error::NotAutomorphism);
        }
        Ok(Self { alpha: alpha.clone(), mu1, mu2 })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.alpha.domain()
    }

    pub fn alpha(&self) -> &Homomorphism {
        &self.alpha
    }

    pub fn mu1(&self) -> &Distribution<T> {
        &self.mu1
    }

    pub fn mu2(&self) -> &Distribution<T> {
        &self.mu2
    }

    /// The pair ν_j = μ_j * μ̄_j, whose transforms are |μ̂_j|².
    pub fn symmetrized(&self) -> Result<Self> {
        Ok(Self {
            alpha: self.alpha.clone(),
            mu1: self.mu1.convolve(&self.mu1.reflect())?,
            mu2: self.mu2.convolve(&self.mu2.reflect())?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Equation,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Equation => "equation",
            Method::Oracle => "oracle",
        })
    }
}

/// Where symmetry fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Dual pair (u, v) violating the functional equation.
    Dual { u: GroupElement, v: GroupElement },
    /// Values (u, w) of (L1, L2) with P(u, w) ≠ P(u, −w).
    Joint { u: GroupElement, w: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub symmetric: bool,
    pub witness: Option<Witness>,
    pub method: Method,
}

impl SymmetryVerdict {
    fn holds(method: Method) -> Self {
        Self { symmetric: true, witness: None, method }
    }

    fn fails(method: Method, witness: Witness) -> Self {
        Self { symmetric: false, witness: Some(witness), method }
    }

    /// Re-evaluates the witness from scratch with rational arithmetic.
    pub fn witness_rechecks<T: RationalField>(&self, inst: &HeydeInstance<T>) -> bool {
        match &self.witness {
            None => self.symmetric,
            Some(Witness::Dual { u, v }) => equation_violated_at(inst, u, v),
            Some(Witness::Joint { u, w }) => joint_violated_at(inst, u, w),
        }
    }
}

// ---- integer weight plumbing ---------------------------------------------

/// Accumulator types for scaled integer weights.
trait Weight: Scalar {
    fn from_big(v: &BigInt) -> Self;
    fn into_big(self) -> BigInt;
}

impl Weight for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("weight range checked by caller")
    }

    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Weight for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn into_big(self) -> BigInt {
        self
    }
}

/// True when products of weights with these denominators fit in i128 with
/// room for the sums the checkers form.
fn fits_i128(d1: &BigInt, d2: &BigInt) -> bool {
    (d1 * d2).bits() <= 120
}

// ---- functional equation ----------------------------------------------------

/// Checks μ̂1(u+v)μ̂2(u+α̃v) = μ̂1(u−v)μ̂2(u−α̃v) for all (u, v).
pub fn heyde_equation_holds<T: RationalField>(inst: &HeydeInstance<T>) -> Result<SymmetryVerdict> {
    let g = inst.group();
    let size = g.order();
    if size.saturating_mul(g.exponent()) > TRANSFORM_CAP {
        return Err(Error::CapExceeded {
            what: "equation transform table",
            size: size * g.exponent(),
            cap: TRANSFORM_CAP,
        });
    }
    let (w1, d1) = inst.mu1.integer_weights();
    let (w2, d2) = inst.mu2.integer_weights();
    let adj = inst.alpha.adjoint().table();
    Ok(if fits_i128(&d1, &d2) {
        equation_scan::<i128>(g, &w1, &w2, &adj)
    } else {
        equation_scan::<BigInt>(g, &w1, &w2, &adj)
    })
}

/// Unreduced transforms in Z[x]/(x^N − 1): `out[y][k] = Σ_{(x,y) = ζ^k} w(x)`.
fn raw_transform<W: Weight>(g: &FiniteAbelianGroup, table: &PairingTable, weights: &[BigInt]) -> Vec<Vec<W>> {
    let n = g.exponent() as usize;
    let support: Vec<(usize, W)> =
        weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i, W::from_big(w))).collect();
    (0..g.size())
        .map(|y| {
            let mut v = vec![W::zero(); n];
            for (x, w) in &support {
                let k = table.exponent(*x, y) as usize;
                v[k] = v[k].clone() + w.clone();
            }
            v
        })
        .collect()
}

/// Whether an element of Z[x]/(x^N − 1) vanishes at a primitive N-th root.
fn vanishes<W: Weight>(g: &FiniteAbelianGroup, p: &[W]) -> bool {
    let n = g.exponent();
    if n == 1 {
        return p[0].is_zero();
    }
    match prime_power(n) {
        // Multiples of Φ_{q^k} of degree < N are exactly the vectors that are
        // constant along each residue class modulo q^{k-1}.
        Some((q, _)) => {
            let s = (n / q) as usize;
            (0..s).all(|r| (1..q as usize).all(|j| p[r + j * s] == p[r]))
        }
        None => {
            let big: Vec<BigInt> = p.iter().map(|c| c.clone().into_big()).collect();
            g.field().reduce(big).iter().all(Zero::is_zero)
        }
    }
}

fn equation_scan<W: Weight>(g: &FiniteAbelianGroup, w1: &[BigInt], w2: &[BigInt], adj: &[usize]) -> SymmetryVerdict {
    let table = PairingTable::new(g);
    let f1 = raw_transform::<W>(g, &table, w1);
    let f2 = raw_transform::<W>(g, &table, w2);
    let n = g.exponent() as usize;
    let mut diff = vec![W::zero(); n];
    let mul_into = |acc: &mut [W], a: &[W], b: &[W], sign: bool| {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                let t = ai.clone() * bj.clone();
                acc[k] = if sign { acc[k].clone() + t } else { acc[k].clone() - t };
            }
        }
    };
    for u in 0..g.size() {
        for v in 0..g.size() {
            let nv = g.neg_idx(v);
            // v = −v gives identical sides, and (u, −v) is (u, v) mirrored.
            if nv <= v {
                continue;
            }
            let (av, anv) = (adj[v], adj[nv]);
            diff.iter_mut().for_each(|c| *c = W::zero());
            mul_into(&mut diff, &f1[g.add_idx(u, v)], &f2[g.add_idx(u, av)], true);
            mul_into(&mut diff, &f1[g.add_idx(u, nv)], &f2[g.add_idx(u, anv)], false);
            if !vanishes(g, &diff) {
                return SymmetryVerdict::fails(
                    Method::Equation,
                    Witness::Dual { u: g.element_at(u), v: g.element_at(v) },
                );
            }
        }
    }
    SymmetryVerdict::holds(Method::Equation)
}

/// μ̂(y) by direct summation in the reduced field representation.
fn transform_at<T: RationalField>(mu: &Distribution<T>, y: &GroupElement) -> CyclotomicNumber<Rational> {
    let g = mu.group();
    let table = PairingTable::new(g);
    let yi = g.index_of(y);
    CyclotomicNumber::from_power_sum(
        g.field(),
        mu.support_indices().into_iter().map(|x| (table.exponent(x, yi), mu.mass_idx(x).to_rational())),
    )
}

fn equation_violated_at<T: RationalField>(inst: &HeydeInstance<T>, u: &GroupElement, v: &GroupElement) -> bool {
    let g = inst.group();
    let adj = inst.alpha.adjoint();
    let av = adj.apply_unchecked(v);
    let (Ok(up), Ok(um), Ok(uap), Ok(uam)) = (g.add(u, v), g.sub(u, v), g.add(u, &av), g.sub(u, &av)) else {
        return false;
    };
    let lhs = &transform_at(&inst.mu1, &up) * &transform_at(&inst.mu2, &uap);
    let rhs = &transform_at(&inst.mu1, &um) * &transform_at(&inst.mu2, &uam);
    lhs != rhs
}

// ---- joint-distribution oracle --------------------------------------------

/// Builds the joint law of (L1, L2) from the definition and checks that
/// (L1, L2) and (L1, −L2) have the same distribution.
pub fn conditional_symmetry_oracle<T: RationalField>(inst: &HeydeInstance<T>) -> SymmetryVerdict {
    let (w1, d1) = inst.mu1.integer_weights();
    let (w2, d2) = inst.mu2.integer_weights();
    if fits_i128(&d1, &d2) {
        oracle_scan::<T, i128>(inst, &w1, &w2)
    } else {
        oracle_scan::<T, BigInt>(inst, &w1, &w2)
    }
}

fn oracle_scan<T: RationalField, W: Weight>(inst: &HeydeInstance<T>, w1: &[BigInt], w2: &[BigInt]) -> SymmetryVerdict {
    let g = inst.group();
    let size = g.size();
    let a = inst.alpha.table();
    let s1: Vec<(usize, W)> =
        w1.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i, W::from_big(w))).collect();
    let s2: Vec<(usize, W)> =
        w2.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i, W::from_big(w))).collect();
    let cells = size * size;
    let witness = |key: usize| Witness::Joint { u: g.element_at(key / size), w: g.element_at(key % size) };
    if cells <= 1 << 24 && s1.len() * s2.len() * 4 >= cells {
        let mut joint = vec![W::zero(); cells];
        for (x1, m1) in &s1 {
            for (x2, m2) in &s2 {
                let key = g.add_idx(*x1, *x2) * size + g.add_idx(*x1, a[*x2]);
                joint[key] = joint[key].clone() + m1.clone() * m2.clone();
            }
        }
        for u in 0..size {
            for w in 0..size {
                let nw = g.neg_idx(w);
                if nw > w && joint[u * size + w] != joint[u * size + nw] {
                    return SymmetryVerdict::fails(Method::Oracle, witness(u * size + w));
                }
            }
        }
    } else {
        let mut entries: Vec<(usize, W)> = Vec::with_capacity(s1.len() * s2.len());
        for (x1, m1) in &s1 {
            for (x2, m2) in &s2 {
                entries.push((g.add_idx(*x1, *x2) * size + g.add_idx(*x1, a[*x2]), m1.clone() * m2.clone()));
            }
        }
        entries.sort_unstable_by_key(|e| e.0);
        let mut joint: Vec<(usize, W)> = Vec::with_capacity(entries.len());
        for (k, m) in entries {
            match joint.last_mut() {
                Some(last) if last.0 == k => last.1 = last.1.clone() + m,
                _ => joint.push((k, m)),
            }
        }
        let lookup = |k: usize| joint.binary_search_by_key(&k, |e| e.0).ok().map(|i| &joint[i].1);
        let mut worst: Option<usize> = None;
        for (k, m) in &joint {
            let (u, w) = (k / size, k % size);
            let mirror = u * size + g.neg_idx(w);
            if mirror != *k && lookup(mirror) != Some(m) {
                let cand = mirror.min(*k);
                worst = Some(worst.map_or(cand, |c| c.min(cand)));
            }
        }
        if let Some(k) = worst {
            return SymmetryVerdict::fails(Method::Oracle, witness(k));
        }
    }
    SymmetryVerdict::holds(Method::Oracle)
}

/// P(L1 = u, L2 = w) summed directly over ξ2.
pub fn joint_mass<T: RationalField>(inst: &HeydeInstance<T>, u: &GroupElement, w: &GroupElement) -> Result<Rational> {
    let g = inst.group();
    g.check(u)?;
    g.check(w)?;
    let mut total = Rational::zero();
    for x2 in g.elements() {
        let x1 = g.sub(u, &x2)?;
        if g.add(&x1, &inst.alpha.apply(&x2)?)? == *w {
            total += inst.mu1.mass(&x1)?.to_rational() * inst.mu2.mass(&x2)?.to_rational();
        }
    }
    Ok(total)
}

fn joint_violated_at<T: RationalField>(inst: &HeydeInstance<T>, u: &GroupElement, w: &GroupElement) -> bool {
    let g = inst.group();
    let Ok(nw) = g.neg(w) else { return false };
    match (joint_mass(inst, u, w), joint_mass(inst, u, &nw)) {
        (Ok(a), Ok(b)) => a != b,
        _ => false,
    }
}
