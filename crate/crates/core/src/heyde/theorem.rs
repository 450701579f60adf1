//! Structural check of the characterization: on odd-order groups with α, I+α
//! and I−α automorphisms, symmetric pairs are Haar shifts of one α-invariant
//! subgroup.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distribution::Distribution;
use crate::duality::char_fn;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup, SUBGROUP_CAP};
use crate::heyde::sweep::coset_representatives;
use crate::heyde::symmetry::{conditional_symmetry_oracle, heyde_equation_holds, HeydeInstance};
use crate::morphism::{check_heyde_admissible, Homomorphism};
use crate::Rational;

type Dist = Distribution<Rational>;

/// Distribution pairs fed to the verifier.
#[derive(Clone, Debug)]
pub enum PairFamily {
    /// Every (E_x1, E_x2).
    PointMasses,
    /// Every (m_K1 * E_x1, m_K2 * E_x2), x_j running over coset representatives.
    HaarShifts,
    /// Every pair drawn from {λ·m_K1 + (1−λ)·m_K2}, over all subgroup pairs.
    HaarMixtures {
        lambdas: Vec<Rational>,
    },
    /// Seeded random pairs.
    Random {
        seed: u64,
        bound: u64,
        trials: usize,
    },
    Explicit(Vec<(Dist, Dist)>),
}

impl PairFamily {
    pub fn pairs(&self, g: &FiniteAbelianGroup) -> Result<Vec<(Dist, Dist)>> {
        let square = |items: Vec<Dist>| {
            let mut out = Vec::with_capacity(items.len() * items.len());
            for a in &items {
                for b in &items {
                    out.push((a.clone(), b.clone()));
                }
            }
            out
        };
        Ok(match self {
            PairFamily::PointMasses => square(g.elements().map(|x| Dist::dirac(g, &x)).collect::<Result<_>>()?),
            PairFamily::HaarShifts => {
                let mut shifts = Vec::new();
                for k in g.enumerate_subgroups(SUBGROUP_CAP)? {
                    let m = Dist::haar_on_subgroup(&k);
                    for x in coset_representatives(&k) {
                        shifts.push(m.shift(&x)?);
                    }
                }
                square(shifts)
            }
            PairFamily::HaarMixtures { lambdas } => square(haar_mixtures(g, lambdas)?),
            PairFamily::Random { seed, bound, trials } => {
                if *bound == 0 {
                    return Err(Error::Precondition("denominator bound must be at least 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*trials)
                    .map(|_| (Dist::random_with(g, &mut rng, *bound), Dist::random_with(g, &mut rng, *bound)))
                    .collect()
            }
            PairFamily::Explicit(pairs) => pairs.clone(),
        })
    }
}

/// Distinct mixtures λ·m_K1 + (1−λ)·m_K2 in a fixed order.
pub fn haar_mixtures(g: &FiniteAbelianGroup, lambdas: &[Rational]) -> Result<Vec<Dist>> {
    if lambdas.iter().any(|l| l < &Rational::zero() || l > &Rational::one()) {
        return Err(Error::Precondition("mixture weights must lie in [0, 1]".into()));
    }
    let haars: Vec<Dist> = g.enumerate_subgroups(SUBGROUP_CAP)?.iter().map(Dist::haar_on_subgroup).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in &haars {
        for b in &haars {
            for l in lambdas {
                let m = Dist::mixture(&[(l.clone(), a), (Rational::one() - l, b)])?;
                if seen.insert(m.masses().to_vec()) {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TheoremOptions {
    /// Run even when the hypotheses fail; the report is then not assertive.
    pub exploratory: bool,
    /// Also run the equation checker on every pair.
    pub cross_check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub odd_order: bool,
    pub admissible: bool,
}

impl Hypotheses {
    pub fn of(alpha: &Homomorphism) -> Self {
        Self { odd_order: alpha.domain().has_odd_order(), admissible: check_heyde_admissible(alpha) }
    }

    pub fn met(&self) -> bool {
        self.odd_order && self.admissible
    }
}

/// A symmetric pair with μ_j = m_K * E_xj.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub pair_index: usize,
    pub k: Subgroup,
    pub x1: GroupElement,
    pub x2: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub pair_index: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub hypotheses: Hypotheses,
    /// False when the hypotheses fail; violations are then descriptive.
    pub assertive: bool,
    pub pairs: usize,
    pub asymmetric: usize,
    pub decomposed: Vec<Decomposition>,
    /// Symmetric pairs that do not decompose as claimed.
    pub violations: Vec<Violation>,
    /// Symmetric pairs with real nonnegative transforms.
    pub zero_one_checked: usize,
    /// Of those, pairs whose transforms are not equal 0/1 indicators of an
    /// α̃-invariant subgroup.
    pub zero_one_violations: Vec<Violation>,
    /// Pairs where the equation checker disagrees with the oracle.
    pub equation_disagreements: Vec<usize>,
}

impl TheoremReport {
    pub fn symmetric(&self) -> usize {
        self.pairs - self.asymmetric
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.zero_one_violations.is_empty() && self.equation_disagreements.is_empty()
    }
}

pub fn theorem1_verifier(
    g: &FiniteAbelianGroup,
    alpha: &Homomorphism,
    family: &PairFamily,
    opts: TheoremOptions,
) -> Result<TheoremReport> {
    g.same_as(alpha.domain())?;
    let hypotheses = Hypotheses::of(alpha);
    if !hypotheses.met() && !opts.exploratory {
        let what = if !hypotheses.odd_order { "group has even order" } else { "α is not admissible" };
        return Err(Error::HypothesisNotMet(what.into()));
    }
    let adj = alpha.adjoint();
    let mut report = TheoremReport {
        hypotheses,
        assertive: hypotheses.met(),
        pairs: 0,
        asymmetric: 0,
        decomposed: Vec::new(),
        violations: Vec::new(),
        zero_one_checked: 0,
        zero_one_violations: Vec::new(),
        equation_disagreements: Vec::new(),
    };
    for (i, (mu1, mu2)) in family.pairs(g)?.into_iter().enumerate() {
        let inst = HeydeInstance::new(alpha, mu1, mu2)?;
        let symmetric = conditional_symmetry_oracle(&inst).symmetric;
        report.pairs += 1;
        if opts.cross_check && heyde_equation_holds(&inst)?.symmetric != symmetric {
            report.equation_disagreements.push(i);
        }
        if !symmetric {
            report.asymmetric += 1;
            continue;
        }
        match decompose(&inst, alpha)? {
            Ok((k, x1, x2)) => report.decomposed.push(Decomposition { pair_index: i, k, x1, x2 }),
            Err(reason) => report.violations.push(Violation { pair_index: i, reason }),
        }
        let (f1, f2) = (char_fn(inst.mu1()), char_fn(inst.mu2()));
        let nonneg = |f: &crate::CharFn| f.values().iter().all(|v| v.is_real_nonnegative());
        if nonneg(&f1) && nonneg(&f2) {
            report.zero_one_checked += 1;
            let reason = if f1 != f2 {
                Some("transforms differ".to_string())
            } else {
                match f1.zero_one_subgroup() {
                    None => Some("transform is not a subgroup indicator".into()),
                    Some(e) if adj.image_of(&e)? != e => Some("unit set is not α̃-invariant".into()),
                    Some(_) => None,
                }
            };
            if let Some(reason) = reason {
                report.zero_one_violations.push(Violation { pair_index: i, reason });
            }
        }
    }
    Ok(report)
}

/// Either the decomposition (K, x1, x2) or why it fails.
fn decompose(
    inst: &HeydeInstance<Rational>,
    alpha: &Homomorphism,
) -> Result<std::result::Result<(Subgroup, GroupElement, GroupElement), String>> {
    let (Some((k1, x1)), Some((k2, x2))) = (inst.mu1().is_haar_shift(), inst.mu2().is_haar_shift()) else {
        return Ok(Err("not a pair of Haar shifts".into()));
    };
    if k1 != k2 {
        return Ok(Err(format!("subgroups differ: orders {} and {}", k1.order(), k2.order())));
    }
    let nu = inst.symmetrized()?;
    let haar = Dist::haar_on_subgroup(&k1);
    if nu.mu1() != &haar || nu.mu2() != &haar {
        return Ok(Err("μ_j * μ̄_j is not m_K".into()));
    }
    if alpha.image_of(&k1)? != k1 {
        return Ok(Err("α(K) ≠ K".into()));
    }
    Ok(Ok((k1, x1, x2)))
}
