//! Conditional symmetry of linear forms: the functional equation, the
//! probabilistic oracle, and the structural checks built on them.

pub mod conditions;
pub mod iteration;
pub mod solutions;
pub mod sweep;
pub mod symmetry;
pub mod theorem;
pub mod tower;

pub use conditions::{
    haar_shift_pair_condition, haar_shift_pair_oracle, lemma_subgroup_condition, proposition_haar_condition,
};
pub use iteration::{iteration_identities_check, DepthCheck, IterationReport, MAX_DEPTH};
pub use solutions::{enumerate_zero_one_solutions, ZeroOneReport};
pub use sweep::{
    coset_representatives, equivalence_for_alpha, lemma1_equivalence_sweep, lemma_subgroup_sweep, proposition_sweep,
    shift_condition_sweep, AgreementReport, Discrepancy, EquivalenceReport, PairSampler, ShiftConditionReport,
};
pub use symmetry::{
    conditional_symmetry_oracle, heyde_equation_holds, joint_mass, HeydeInstance, Method, SymmetryVerdict, Witness,
    TRANSFORM_CAP,
};
pub use theorem::{
    haar_mixtures, theorem1_verifier, Decomposition, Hypotheses, PairFamily, TheoremOptions, TheoremReport, Violation,
};
pub use tower::{truncation_tower_sweep, AlphaFamily, LayerReport, TowerCheck, TowerReport, LAYER_CAP};
