//! Layers G_m = Π Z(p^m) approximating a product of p-adic integer groups,
//! with checks that conclusions agree across consecutive layers.

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, Subgroup, SUBGROUP_CAP};
use crate::heyde::solutions::enumerate_zero_one_solutions;
use crate::heyde::theorem::{theorem1_verifier, PairFamily, TheoremOptions, TheoremReport};
use crate::morphism::{check_heyde_admissible, Homomorphism};

/// Layers above this order are refused.
pub const LAYER_CAP: u64 = 1 << 20;

/// An endomorphism given by integers, reduced at every layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaFamily {
    /// x ↦ k·x.
    Scalar(i64),
    /// Multiplication by k_i on the i-th factor.
    PerPrime(Vec<i64>),
    /// Integer matrix acting on the factors; entries between different
    /// primes must vanish.
    Matrix(Vec<Vec<i64>>),
}

impl AlphaFamily {
    fn at(&self, g: &FiniteAbelianGroup) -> Result<Homomorphism> {
        let r = g.rank();
        match self {
            AlphaFamily::Scalar(k) => Ok(Homomorphism::scalar(g, *k)),
            AlphaFamily::PerPrime(ks) => {
                if ks.len() != r {
                    return Err(Error::Dimension(format!("{} multipliers for {r} factors", ks.len())));
                }
                let m: Vec<Vec<i64>> =
                    (0..r).map(|i| (0..r).map(|j| if i == j { ks[i] } else { 0 }).collect()).collect();
                Homomorphism::new(&m, g, g)
            }
            AlphaFamily::Matrix(m) => Homomorphism::new(m, g, g),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TowerCheck {
    Admissibility,
    ZeroOneSolutions,
    /// The structural verifier on each layer with the given family; explicit
    /// pairs are not allowed since they belong to one layer.
    Theorem(PairFamily),
}

#[derive(Clone, Debug)]
pub struct LayerReport {
    pub level: u32,
    pub group: FiniteAbelianGroup,
    pub admissible: bool,
    pub solutions: Option<Vec<Subgroup>>,
    pub theorem: Option<TheoremReport>,
    /// π ∘ α_m = α_{m−1} ∘ π, with π the reduction to the previous layer.
    pub commutes: Option<bool>,
    /// π(E) is a solution at the previous layer for every solution E.
    pub projections_consistent: Option<bool>,
    /// Every solution at the previous layer is some π(E).
    pub projections_onto: Option<bool>,
    /// π̃^{-1}(E) is a solution at the previous layer, π̃ : y ↦ p·y the dual
    /// of π.
    pub dual_consistent: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TowerReport {
    pub primes: Vec<u64>,
    pub layers: Vec<LayerReport>,
    /// The same admissibility verdict at every layer.
    pub admissibility_uniform: bool,
}

impl TowerReport {
    /// Uniform admissibility, and every layer comparison that ran succeeded.
    pub fn consistent(&self) -> bool {
        let ok = |b: Option<bool>| b.unwrap_or(true);
        self.admissibility_uniform
            && self.layers.iter().all(|l| {
                ok(l.commutes)
                    && ok(l.projections_consistent)
                    && ok(l.dual_consistent)
                    && l.theorem.as_ref().is_none_or(|t| t.passed())
            })
    }
}

pub fn truncation_tower_sweep(
    primes: &[u64],
    max_level: u32,
    family: &AlphaFamily,
    check: &TowerCheck,
) -> Result<TowerReport> {
    if primes.is_empty() || max_level == 0 {
        return Err(Error::Precondition("need at least one prime and one level".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| p <= 2 || prime_power(p) != Some((p, 1))) {
        return Err(Error::HypothesisNotMet(format!("{p} is not an odd prime")));
    }
    if primes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("primes must be listed in nondecreasing order".into()));
    }
    if let TowerCheck::Theorem(PairFamily::Explicit(_)) = check {
        return Err(Error::Precondition("explicit pairs cannot be lifted across layers".into()));
    }
    let mut layers: Vec<LayerReport> = Vec::new();
    let mut prev: Option<(Homomorphism, Option<Vec<Subgroup>>)> = None;
    for level in 1..=max_level {
        let wrap = |e: Error| Error::Layer { level, source: Box::new(e) };
        let orders: Vec<i64> = primes
            .iter()
            .map(|&p| p.checked_pow(level).filter(|&q| q <= LAYER_CAP).map(|q| q as i64))
            .collect::<Option<_>>()
            .ok_or(Error::CapExceeded { what: "tower layer", size: u64::MAX, cap: LAYER_CAP })
            .map_err(wrap)?;
        let g = FiniteAbelianGroup::new(&orders).map_err(wrap)?;
        if g.order() > LAYER_CAP {
            return Err(wrap(Error::CapExceeded { what: "tower layer", size: g.order(), cap: LAYER_CAP }));
        }
        let alpha = family.at(&g).map_err(wrap)?;
        let admissible = check_heyde_admissible(&alpha);
        let solutions = match check {
            TowerCheck::ZeroOneSolutions => {
                Some(enumerate_zero_one_solutions(&g, &alpha, SUBGROUP_CAP).map_err(wrap)?.solutions)
            }
            _ => None,
        };
        let theorem = match check {
            TowerCheck::Theorem(fam) => {
                Some(theorem1_verifier(&g, &alpha, fam, TheoremOptions::default()).map_err(wrap)?)
            }
            _ => None,
        };
        let mut layer = LayerReport {
            level,
            group: g.clone(),
            admissible,
            solutions,
            theorem,
            commutes: None,
            projections_consistent: None,
            projections_onto: None,
            dual_consistent: None,
        };
        if let Some((prev_alpha, prev_solutions)) = &prev {
            compare_layers(&mut layer, &alpha, prev_alpha, prev_solutions.as_deref()).map_err(wrap)?;
        }
        prev = Some((alpha, layer.solutions.clone()));
        layers.push(layer);
    }
    let admissibility_uniform = layers.windows(2).all(|w| w[0].admissible == w[1].admissible);
    Ok(TowerReport { primes: primes.to_vec(), layers, admissibility_uniform })
}

fn compare_layers(
    layer: &mut LayerReport,
    alpha: &Homomorphism,
    prev_alpha: &Homomorphism,
    prev_solutions: Option<&[Subgroup]>,
) -> Result<()> {
    let (g, h) = (alpha.domain(), prev_alpha.domain());
    let r = g.rank();
    let ident: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let pi = Homomorphism::new(&ident, g, h)?;
    layer.commutes = Some(pi.compose(alpha)?.table() == prev_alpha.compose(&pi)?.table());
    if let (Some(sols), Some(prev_sols)) = (&layer.solutions, prev_solutions) {
        let images: Vec<Subgroup> = sols.iter().map(|e| pi.image_of(e)).collect::<Result<_>>()?;
        layer.projections_consistent = Some(images.iter().all(|s| prev_sols.contains(s)));
        layer.projections_onto = Some(prev_sols.iter().all(|s| images.contains(s)));
        let dual = pi.adjoint();
        let pulled: Vec<Subgroup> = sols.iter().map(|e| dual.preimage(e)).collect::<Result<_>>()?;
        layer.dual_consistent = Some(pulled.iter().all(|s| prev_sols.contains(s)));
    }
    Ok(())
}
