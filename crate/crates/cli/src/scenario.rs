//! Scenario files: one JSON object with a `kind` tag and kind-specific fields.

use std::collections::BTreeMap;
use std::fmt;

use anyhow::{Context, Result};
use heyde::scalar::{format_rational, parse_rational};
use heyde::Rational;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

/// A rational written as "p/q" or an integer (string or number).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Q, E> {
                parse_rational(s).map(Q).ok_or_else(|| E::custom(format!("bad rational {s:?}")))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(n.into())))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(n.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// Fields shared by every kind.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)] // name and description only travel in the echoed scenario
pub struct Header {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    /// Base seed for every random choice; `--seed` overrides it.
    #[serde(default)]
    pub seed: u64,
    /// Dotted paths into the verdict and the values they must take.
    #[serde(default)]
    pub expect: BTreeMap<String, Value>,
}

const HEADER_KEYS: [&str; 4] = ["name", "description", "seed", "expect"];

#[derive(Clone, Debug)]
pub struct Scenario {
    pub header: Header,
    pub task: Task,
}

#[derive(Clone, Debug)]
pub enum Task {
    CheckSymmetry(CheckSymmetry),
    VerifyTheorem(VerifyTheorem),
    EnumerateSolutions(EnumerateSolutions),
    HaarCondition(HaarCondition),
    CounterexampleSuite(CounterexampleSuite),
    TruncationSweep(TruncationSweep),
    GaussianCheck(GaussianCheck),
}

pub const KINDS: [&str; 7] = [
    "check-symmetry",
    "verify-theorem",
    "enumerate-solutions",
    "haar-condition",
    "counterexample-suite",
    "truncation-sweep",
    "gaussian-check",
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSymmetry {
    pub group: GroupSpec,
    pub alpha: AlphaSpec,
    pub mu1: DistSpec,
    pub mu2: DistSpec,
    /// Also check the iterated product identities up to this depth, on the
    /// symmetrized pair when the transforms are not real.
    #[serde(default)]
    pub depth: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyTheorem {
    pub group: GroupSpec,
    pub alpha: AlphaSet,
    pub families: Vec<FamilySpec>,
    #[serde(default)]
    pub exploratory: bool,
    #[serde(default)]
    pub cross_check: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateSolutions {
    pub group: GroupSpec,
    pub alpha: AlphaSpec,
    #[serde(default = "default_subgroup_cap")]
    pub subgroup_cap: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarCondition {
    pub groups: GroupSet,
    pub alpha: AlphaSet,
    /// Also compare the subgroup condition with the oracle on every Haar
    /// pair (m_K, m_K), where I ± α are automorphisms.
    #[serde(default)]
    pub subgroups: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSuite {
    pub group: GroupSpec,
    pub alpha: AlphaSpec,
    pub trials: usize,
    #[serde(default = "default_bound")]
    pub bound: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSweep {
    pub primes: Vec<u64>,
    pub levels: u32,
    pub alpha: TowerAlphaSpec,
    pub check: TowerCheckSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianCheck {
    #[serde(default)]
    pub torus: Option<TorusSpec>,
    #[serde(default)]
    pub solenoid: Option<SolenoidSpec>,
}

fn default_subgroup_cap() -> u64 {
    heyde::group::SUBGROUP_CAP
}

fn default_bound() -> u64 {
    4
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub orders: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSet {
    /// The built-in list of small groups.
    Catalog,
    List(Vec<GroupSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSpec {
    Scalar(i64),
    /// Rows index codomain factors, columns domain factors.
    Matrix(Vec<Vec<i64>>),
    /// A square block repeated along the diagonal.
    Blocks(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSet {
    Scalar(i64),
    Matrix(Vec<Vec<i64>>),
    Blocks(Vec<Vec<i64>>),
    /// Every automorphism, or a seeded sample above the enumeration limit.
    All,
    /// The admissible ones among `all`.
    Admissible,
}

impl AlphaSet {
    pub fn single(&self) -> Option<AlphaSpec> {
        match self {
            AlphaSet::Scalar(k) => Some(AlphaSpec::Scalar(*k)),
            AlphaSet::Matrix(m) => Some(AlphaSpec::Matrix(m.clone())),
            AlphaSet::Blocks(b) => Some(AlphaSpec::Blocks(b.clone())),
            AlphaSet::All | AlphaSet::Admissible => None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistSpec {
    Haar,
    /// Haar measure of the subgroup generated by these elements.
    HaarOnSubgroup(Vec<Vec<i64>>),
    Dirac(Vec<i64>),
    Masses(Vec<MassSpec>),
    Random(RandomSpec),
    Shift(Box<ShiftSpec>),
    Mixture(Vec<Component>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassSpec {
    pub at: Vec<i64>,
    pub mass: Q,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_bound")]
    pub bound: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub by: Vec<i64>,
    pub dist: DistSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: Q,
    pub dist: DistSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilySpec {
    PointMasses,
    HaarShifts,
    HaarMixtures(Vec<Q>),
    Random(RandomFamily),
    Explicit(Vec<(DistSpec, DistSpec)>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFamily {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_bound")]
    pub bound: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerAlphaSpec {
    Scalar(i64),
    PerPrime(Vec<i64>),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerCheckSpec {
    Admissibility,
    ZeroOneSolutions,
    Theorem(FamilySpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub a1: Vec<Vec<Q>>,
    pub a2: Vec<Vec<Q>>,
    pub alpha: Vec<Vec<i64>>,
    #[serde(default = "default_radius")]
    pub radius: u32,
    /// Entries (i, j, δ) added symmetrically to A1, each checked on its own.
    #[serde(default)]
    pub perturbations: Vec<(usize, usize, Q)>,
}

fn default_radius() -> u32 {
    10
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolenoidSpec {
    pub sigma1: Q,
    pub sigma2: Q,
    pub alpha: Q,
    /// Sample points (u, v); a fixed grid is used when empty.
    #[serde(default)]
    pub samples: Vec<(Q, Q)>,
    /// Seeded random (σ1, σ2, α) triples compared against the window.
    #[serde(default)]
    pub random_triples: usize,
}

fn typed<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        anyhow::anyhow!("invalid scenario at `{path}`: {}", e.into_inner())
    })
}

/// Parses a scenario, reporting the JSON path of the first offending field.
pub fn parse(text: &str) -> Result<(Scenario, Value)> {
    let raw: Value = serde_json::from_str(text).context("scenario is not valid JSON")?;
    let Value::Object(mut body) = raw.clone() else {
        anyhow::bail!("invalid scenario at `.`: expected a JSON object");
    };
    let kind = match body.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => anyhow::bail!("invalid scenario at `kind`: expected a string"),
        None => anyhow::bail!("invalid scenario at `kind`: missing field"),
    };
    let mut head = serde_json::Map::new();
    for k in HEADER_KEYS {
        if let Some(v) = body.remove(k) {
            head.insert(k.to_string(), v);
        }
    }
    let header: Header = typed(Value::Object(head))?;
    let body = Value::Object(body);
    let task = match kind.as_str() {
        "check-symmetry" => Task::CheckSymmetry(typed(body)?),
        "verify-theorem" => Task::VerifyTheorem(typed(body)?),
        "enumerate-solutions" => Task::EnumerateSolutions(typed(body)?),
        "haar-condition" => Task::HaarCondition(typed(body)?),
        "counterexample-suite" => Task::CounterexampleSuite(typed(body)?),
        "truncation-sweep" => Task::TruncationSweep(typed(body)?),
        "gaussian-check" => Task::GaussianCheck(typed(body)?),
        other => {
            anyhow::bail!("invalid scenario at `kind`: unknown kind {other:?}, expected one of {}", KINDS.join(", "))
        }
    };
    Ok((Scenario { header, task }, raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_in_error() {
        let err = parse(r#"{"kind": "check-symmetry", "group": {"orders": [3, "x"]}}"#).unwrap_err();
        assert!(err.to_string().contains("group.orders[1]"), "{err}");
        let err = parse(r#"{"kind": "nope"}"#).unwrap_err();
        assert!(err.to_string().contains("kind"), "{err}");
    }

    #[test]
    fn rationals() {
        let q: Q = serde_json::from_str("\"-3/6\"").unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"-1/2\"");
        let q: Q = serde_json::from_str("4").unwrap();
        assert_eq!(q.0, Rational::from_integer(4.into()));
        assert!(serde_json::from_str::<Q>("\"1/0\"").is_err());
    }

    #[test]
    fn alpha_forms() {
        let a: AlphaSet = serde_json::from_str("\"admissible\"").unwrap();
        assert!(a.single().is_none());
        let a: AlphaSet = serde_json::from_str(r#"{"scalar": 2}"#).unwrap();
        assert!(matches!(a.single(), Some(AlphaSpec::Scalar(2))));
    }
}
