//! Subgroup conditions characterising symmetric pairs of Haar shifts.

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::group::{GroupElement, Subgroup};
use crate::heyde::symmetry::{conditional_symmetry_oracle, HeydeInstance};
use crate::morphism::{id_plus_minus, Homomorphism};
use crate::Rational;

/// X^(2) ⊂ (I − α)(X): the Haar pair (m_X, m_X) is symmetric.
pub fn proposition_haar_condition(alpha: &Homomorphism) -> Result<bool> {
    if !alpha.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let (_, minus) = id_plus_minus(alpha)?;
    Ok(alpha.domain().doubling_image().is_subset_of(&minus.image()))
}

fn require_sum_automorphisms(alpha: &Homomorphism) -> Result<(Homomorphism, Homomorphism)> {
    let (plus, minus) = id_plus_minus(alpha)?;
    if !plus.is_automorphism() {
        return Err(Error::HypothesisNotMet("I + α is not an automorphism".into()));
    }
    if !minus.is_automorphism() {
        return Err(Error::HypothesisNotMet("I − α is not an automorphism".into()));
    }
    Ok((plus, minus))
}

/// K ⊂ (I + α)^{-1}(I − α)(K).
pub fn lemma_subgroup_condition(k: &Subgroup, alpha: &Homomorphism) -> Result<bool> {
    alpha.domain().same_as(k.parent())?;
    let (plus, minus) = require_sum_automorphisms(alpha)?;
    let target = plus.preimage(&minus.image_of(k)?)?;
    Ok(k.is_subset_of(&target))
}

/// α(K) = K and 2(x1 + αx2) ∈ K.
pub fn haar_shift_pair_condition(
    k: &Subgroup,
    x1: &GroupElement,
    x2: &GroupElement,
    alpha: &Homomorphism,
) -> Result<bool> {
    let g = alpha.domain();
    g.same_as(k.parent())?;
    require_sum_automorphisms(alpha)?;
    let s = g.add(x1, &alpha.apply(x2)?)?;
    Ok(alpha.image_of(k)? == *k && k.contains(&g.scale(2, &s)?))
}

/// Oracle verdict on (m_K * E_x1, m_K * E_x2).
pub fn haar_shift_pair_oracle(
    k: &Subgroup,
    x1: &GroupElement,
    x2: &GroupElement,
    alpha: &Homomorphism,
) -> Result<bool> {
    let m = Distribution::<Rational>::haar_on_subgroup(k);
    let inst = HeydeInstance::new(alpha, m.shift(x1)?, m.shift(x2)?)?;
    Ok(conditional_symmetry_oracle(&inst).symmetric)
}
