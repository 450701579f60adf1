//! Exact probability distributions on a finite abelian group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::morphism::Homomorphism;
use crate::scalar::{format_rational, RationalField};

/// Masses stored densely, indexed by element index.
#[derive(Clone, PartialEq, Eq)]
pub struct Distribution<T: RationalField> {
    group: FiniteAbelianGroup,
    masses: Vec<T>,
}

impl<T: RationalField> Distribution<T> {
    /// Validates nonnegativity and total mass 1.
    pub fn new(group: &FiniteAbelianGroup, masses: Vec<T>) -> Result<Self> {
        if masses.len() != group.size() {
            return Err(Error::NotDistribution(format!(
                "{} masses for a group of order {}",
                masses.len(),
                group.order()
            )));
        }
        if let Some(i) = masses.iter().position(|m| m.is_negative()) {
            return Err(Error::NotDistribution(format!("negative mass {} at {}", masses[i], group.element_at(i))));
        }
        let total = masses.iter().fold(T::zero(), |a, m| a + m.clone());
        if !total.is_one() {
            return Err(Error::NotDistribution(format!("masses sum to {}", total)));
        }
        Ok(Self { group: group.clone(), masses })
    }

    /// From explicit (element, mass) pairs; repeated elements accumulate.
    pub fn from_pairs(group: &FiniteAbelianGroup, pairs: &[(GroupElement, T)]) -> Result<Self> {
        let mut masses = vec![T::zero(); group.size()];
        for (x, m) in pairs {
            group.check(x)?;
            let slot = &mut masses[group.index_of(x)];
            *slot = slot.clone() + m.clone();
        }
        Self::new(group, masses)
    }

    pub fn haar(group: &FiniteAbelianGroup) -> Self {
        Self::haar_on_subgroup(&group.full_subgroup())
    }

    /// m_K: uniform on K.
    pub fn haar_on_subgroup(k: &Subgroup) -> Self {
        let g = k.parent();
        let w = T::one() / T::from_int(k.order() as i64);
        let masses = (0..g.size()).map(|i| if k.contains_idx(i) { w.clone() } else { T::zero() }).collect();
        Self { group: g.clone(), masses }
    }

    /// E_x.
    pub fn dirac(group: &FiniteAbelianGroup, x: &GroupElement) -> Result<Self> {
        group.check(x)?;
        let mut masses = vec![T::zero(); group.size()];
        masses[group.index_of(x)] = T::one();
        Ok(Self { group: group.clone(), masses })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn mass(&self, x: &GroupElement) -> Result<&T> {
        self.group.check(x)?;
        Ok(&self.masses[self.group.index_of(x)])
    }

    pub(crate) fn mass_idx(&self, i: usize) -> &T {
        &self.masses[i]
    }

    /// μ * E_x.
    pub fn shift(&self, x: &GroupElement) -> Result<Self> {
        self.group.check(x)?;
        let s = self.group.index_of(x);
        let mut masses = vec![T::zero(); self.group.size()];
        for (i, m) in self.masses.iter().enumerate() {
            masses[self.group.add_idx(i, s)] = m.clone();
        }
        Ok(Self { group: self.group.clone(), masses })
    }

    /// μ̄(B) = μ(−B).
    pub fn reflect(&self) -> Self {
        let mut masses = vec![T::zero(); self.group.size()];
        for (i, m) in self.masses.iter().enumerate() {
            masses[self.group.neg_idx(i)] = m.clone();
        }
        Self { group: self.group.clone(), masses }
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.group.same_as(&other.group)?;
        let g = &self.group;
        let mut masses = vec![T::zero(); g.size()];
        let b: Vec<usize> = other.support_indices();
        for (i, m) in self.masses.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for &j in &b {
                let slot = &mut masses[g.add_idx(i, j)];
                *slot = slot.clone() + m.clone() * other.masses[j].clone();
            }
        }
        Ok(Self { group: g.clone(), masses })
    }

    /// Image measure under a homomorphism.
    pub fn pushforward(&self, alpha: &Homomorphism) -> Result<Self> {
        self.group.same_as(alpha.domain())?;
        let h = alpha.codomain();
        let mut masses = vec![T::zero(); h.size()];
        for i in self.support_indices() {
            let slot = &mut masses[alpha.apply_idx(i)];
            *slot = slot.clone() + self.masses[i].clone();
        }
        Ok(Self { group: h.clone(), masses })
    }

    /// Σ λ_k μ_k with nonnegative weights summing to 1.
    pub fn mixture(parts: &[(T, &Distribution<T>)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::NotDistribution("empty mixture".into()))?.1;
        let g = &first.group;
        let mut masses = vec![T::zero(); g.size()];
        for (w, mu) in parts {
            g.same_as(&mu.group)?;
            if w.is_negative() {
                return Err(Error::NotDistribution(format!("negative mixture weight {}", w)));
            }
            for (slot, m) in masses.iter_mut().zip(&mu.masses) {
                *slot = slot.clone() + w.clone() * m.clone();
            }
        }
        Self::new(g, masses)
    }

    pub(crate) fn support_indices(&self) -> Vec<usize> {
        (0..self.masses.len()).filter(|&i| !self.masses[i].is_zero()).collect()
    }

    /// {x : μ(x) > 0} in canonical order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.support_indices().into_iter().map(|i| self.group.element_at(i)).collect()
    }

    /// Returns (K, x) with μ = m_K * E_x when μ is uniform on a coset; x is
    /// the least element of the coset.
    pub fn is_haar_shift(&self) -> Option<(Subgroup, GroupElement)> {
        let g = &self.group;
        let supp = self.support_indices();
        let x0 = supp[0];
        let w = &self.masses[x0];
        if supp.iter().any(|&i| &self.masses[i] != w) {
            return None;
        }
        if w.clone() * T::from_int(supp.len() as i64) != T::one() {
            return None;
        }
        let members: Vec<usize> = supp.iter().map(|&i| g.sub_idx(i, x0)).collect();
        let k = Subgroup::from_members(g, members, vec![]);
        if !k.is_closed() {
            return None;
        }
        Some((g.closure(k.member_indices()), g.element_at(x0)))
    }

    /// Integer weights w with μ = w / d, d the least common denominator.
    pub fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        let rats: Vec<_> = self.masses.iter().map(|m| m.to_rational()).collect();
        let d = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let w = rats.iter().map(|r| r.numer() * (&d / r.denom())).collect();
        (w, d)
    }

    /// Integer weights uniform in [0, bound] per element, all-zero draws
    /// rejected, then normalized.
    pub fn random(group: &FiniteAbelianGroup, seed: u64, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Precondition("denominator bound must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self::random_with(group, &mut rng, bound))
    }

    pub fn random_with<R: Rng>(group: &FiniteAbelianGroup, rng: &mut R, bound: u64) -> Self {
        loop {
            let w: Vec<u64> = (0..group.size()).map(|_| rng.gen_range(0..=bound)).collect();
            let total: u64 = w.iter().sum();
            if total == 0 {
                continue;
            }
            let t = T::from_int(total as i64);
            let masses = w.into_iter().map(|k| T::from_int(k as i64) / t.clone()).collect();
            return Self { group: group.clone(), masses };
        }
    }
}

/// Subgroup generated by supp μ1 ∪ supp μ2.
pub fn minimal_carrier_subgroup<T: RationalField>(mu1: &Distribution<T>, mu2: &Distribution<T>) -> Result<Subgroup> {
    mu1.group.same_as(&mu2.group)?;
    let mut gens = mu1.support_indices();
    gens.extend(mu2.support_indices());
    Ok(mu1.group.closure(&gens))
}

impl<T: RationalField> fmt::Debug for Distribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.support_indices()
                    .into_iter()
                    .map(|i| (self.group.element_at(i).to_string(), format_rational(&self.masses[i].to_rational()))),
            )
            .finish()
    }
}
