//! Cross-checks of the closed-form conditions and the functional equation
//! against the oracle over families of instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distribution::Distribution;
use crate::error::Result;
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::heyde::conditions::{haar_shift_pair_condition, lemma_subgroup_condition, proposition_haar_condition};
use crate::heyde::symmetry::{conditional_symmetry_oracle, heyde_equation_holds, HeydeInstance, SymmetryVerdict};
use crate::morphism::{id_plus_minus, Homomorphism};
use crate::Rational;

type Dist = Distribution<Rational>;

/// Source of distribution pairs for a sweep.
#[derive(Clone, Debug)]
pub enum PairSampler {
    /// `trials` seeded random pairs per automorphism.
    Random { seed: u64, bound: u64 },
    /// Every pair of point masses.
    PointMasses,
    /// Fixed pairs.
    Explicit(Vec<(Dist, Dist)>),
}

impl PairSampler {
    /// Pairs for the automorphism with the given position in a sweep.
    pub fn pairs(&self, g: &FiniteAbelianGroup, alpha_index: usize, trials: usize) -> Result<Vec<(Dist, Dist)>> {
        Ok(match self {
            PairSampler::Random { seed, bound } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(alpha_index as u64);
                (0..trials)
                    .map(|_| (Dist::random_with(g, &mut rng, *bound), Dist::random_with(g, &mut rng, *bound)))
                    .collect()
            }
            PairSampler::PointMasses => {
                let mut out = Vec::new();
                for x1 in g.elements() {
                    for x2 in g.elements() {
                        out.push((Dist::dirac(g, &x1)?, Dist::dirac(g, &x2)?));
                    }
                }
                out
            }
            PairSampler::Explicit(pairs) => pairs.clone(),
        })
    }
}

/// One instance where the two methods disagree, or a witness fails to
/// reproduce.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub alpha_index: usize,
    pub pair_index: usize,
    pub equation: SymmetryVerdict,
    pub oracle: SymmetryVerdict,
}

#[derive(Clone, Debug, Default)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub agreements: usize,
    pub symmetric: usize,
    pub witness_failures: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl EquivalenceReport {
    pub fn merge(mut self, other: EquivalenceReport) -> Self {
        self.instances += other.instances;
        self.agreements += other.agreements;
        self.symmetric += other.symmetric;
        self.witness_failures += other.witness_failures;
        self.discrepancies.extend(other.discrepancies);
        self
    }

    pub fn all_agree(&self) -> bool {
        self.agreements == self.instances && self.witness_failures == 0
    }
}

/// Runs both methods on every sampled pair for one automorphism.
pub fn equivalence_for_alpha(
    alpha_index: usize,
    alpha: &Homomorphism,
    sampler: &PairSampler,
    trials: usize,
) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport::default();
    for (pair_index, (mu1, mu2)) in sampler.pairs(alpha.domain(), alpha_index, trials)?.into_iter().enumerate() {
        let inst = HeydeInstance::new(alpha, mu1, mu2)?;
        let equation = heyde_equation_holds(&inst)?;
        let oracle = conditional_symmetry_oracle(&inst);
        report.instances += 1;
        if !equation.witness_rechecks(&inst) || !oracle.witness_rechecks(&inst) {
            report.witness_failures += 1;
        }
        if equation.symmetric == oracle.symmetric {
            report.agreements += 1;
            report.symmetric += usize::from(oracle.symmetric);
        } else {
            report.discrepancies.push(Discrepancy { alpha_index, pair_index, equation, oracle });
        }
    }
    Ok(report)
}

/// Equation versus oracle over all given automorphisms.
pub fn lemma1_equivalence_sweep(
    autos: &[Homomorphism],
    sampler: &PairSampler,
    trials: usize,
) -> Result<EquivalenceReport> {
    let mut total = EquivalenceReport::default();
    for (i, a) in autos.iter().enumerate() {
        total = total.merge(equivalence_for_alpha(i, a, sampler, trials)?);
    }
    Ok(total)
}

/// Agreement between a closed-form condition and the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgreementReport {
    pub checked: usize,
    pub agreed: usize,
    pub condition_true: usize,
    pub disagreements: Vec<String>,
}

impl AgreementReport {
    fn record(&mut self, condition: bool, oracle: bool, label: impl FnOnce() -> String) {
        self.checked += 1;
        self.condition_true += usize::from(condition);
        if condition == oracle {
            self.agreed += 1;
        } else {
            self.disagreements.push(label());
        }
    }

    pub fn merge(mut self, other: AgreementReport) -> Self {
        self.checked += other.checked;
        self.agreed += other.agreed;
        self.condition_true += other.condition_true;
        self.disagreements.extend(other.disagreements);
        self
    }

    pub fn all_agree(&self) -> bool {
        self.checked == self.agreed
    }
}

fn oracle_on(alpha: &Homomorphism, mu1: Dist, mu2: Dist) -> Result<bool> {
    Ok(conditional_symmetry_oracle(&HeydeInstance::new(alpha, mu1, mu2)?).symmetric)
}

/// X^(2) ⊂ (I − α)(X) against the oracle on (m_X, m_X).
pub fn proposition_sweep(autos: &[Homomorphism]) -> Result<AgreementReport> {
    let mut report = AgreementReport::default();
    for a in autos {
        let haar = Dist::haar(a.domain());
        let condition = proposition_haar_condition(a)?;
        let oracle = oracle_on(a, haar.clone(), haar)?;
        report.record(condition, oracle, || format!("{:?}: condition {} oracle {}", a.matrix(), condition, oracle));
    }
    Ok(report)
}

/// The subgroup inclusion against the oracle on (m_K, m_K) for every K,
/// skipping automorphisms with I ± α not both automorphisms.
pub fn lemma_subgroup_sweep(autos: &[Homomorphism], subgroups: &[Subgroup]) -> Result<AgreementReport> {
    let mut report = AgreementReport::default();
    for a in autos {
        let (p, m) = id_plus_minus(a)?;
        if !(p.is_automorphism() && m.is_automorphism()) {
            continue;
        }
        for k in subgroups {
            let haar = Dist::haar_on_subgroup(k);
            let condition = lemma_subgroup_condition(k, a)?;
            let oracle = oracle_on(a, haar.clone(), haar)?;
            report.record(condition, oracle, || {
                format!("{:?} on {:?}: condition {} oracle {}", a.matrix(), k, condition, oracle)
            });
        }
    }
    Ok(report)
}

/// Outcome of the shift-condition scan over Haar-shift pairs on a common K.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftConditionReport {
    pub pairs: usize,
    pub condition_true: usize,
    /// Pairs meeting the condition that the oracle judged asymmetric.
    pub sufficiency_failures: Vec<String>,
    /// Pairs failing the condition that the oracle still judged symmetric.
    pub symmetric_without_condition: Vec<String>,
}

/// Least element of each coset of K.
pub fn coset_representatives(k: &Subgroup) -> Vec<GroupElement> {
    let g = k.parent();
    let mut seen = vec![false; g.order() as usize];
    let mut reps = Vec::new();
    for x in 0..seen.len() {
        if seen[x] {
            continue;
        }
        reps.push(g.element_at(x));
        for &m in k.member_indices() {
            seen[g.add_idx(x, m)] = true;
        }
    }
    reps
}

/// Every (m_K * E_x1, m_K * E_x2) with x_j coset representatives.
pub fn shift_condition_sweep(alpha: &Homomorphism, subgroups: &[Subgroup]) -> Result<ShiftConditionReport> {
    let mut report = ShiftConditionReport::default();
    for k in subgroups {
        let reps = coset_representatives(k);
        let haar = Dist::haar_on_subgroup(k);
        for x1 in &reps {
            for x2 in &reps {
                let condition = haar_shift_pair_condition(k, x1, x2, alpha)?;
                let oracle = oracle_on(alpha, haar.shift(x1)?, haar.shift(x2)?)?;
                report.pairs += 1;
                report.condition_true += usize::from(condition);
                let label = || format!("K of order {} {:?}, x1 {}, x2 {}", k.order(), k.generators(), x1, x2);
                if condition && !oracle {
                    report.sufficiency_failures.push(label());
                }
                if !condition && oracle {
                    report.symmetric_without_condition.push(label());
                }
            }
        }
    }
    Ok(report)
}
