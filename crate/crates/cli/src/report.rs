//! JSON renderings of engine values and the final report.

use std::collections::BTreeMap;

use heyde::heyde::{SymmetryVerdict, Witness};
use heyde::scalar::format_rational;
use heyde::{Dist, GroupElement, Homomorphism, Instance, Rational, Subgroup};
use serde_json::{json, Value};

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn element(x: &GroupElement) -> Value {
    json!(x.coords())
}

/// Order and a direct-sum basis of generators.
pub fn subgroup(k: &Subgroup) -> Value {
    let gens: Vec<Value> = k.basis().iter().map(|(e, _)| element(e)).collect();
    json!({ "order": k.order(), "generators": gens })
}

pub fn morphism(a: &Homomorphism) -> Value {
    json!(a.matrix())
}

/// Support points with their masses, in element order.
pub fn dist(mu: &Dist) -> Value {
    let g = mu.group();
    let pts: Vec<Value> = mu
        .masses()
        .iter()
        .enumerate()
        .filter(|(_, m)| !num_traits::Zero::is_zero(*m))
        .map(|(i, m)| json!({ "at": element(&g.element_at(i)), "mass": rat(m) }))
        .collect();
    Value::Array(pts)
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Dual { u, v } => json!({ "kind": "dual", "u": element(u), "v": element(v) }),
        Witness::Joint { u, w } => json!({ "kind": "joint", "u": element(u), "w": element(w) }),
    }
}

pub fn verdict(v: &SymmetryVerdict, inst: &Instance) -> Value {
    json!({
        "symmetric": v.symmetric,
        "witness": v.witness.as_ref().map(witness),
        "witness_rechecks": v.witness_rechecks(inst),
    })
}

/// Enough to rebuild the instance: the automorphism and both laws.
pub fn instance(inst: &Instance) -> Value {
    json!({ "alpha": morphism(inst.alpha()), "mu1": dist(inst.mu1()), "mu2": dist(inst.mu2()) })
}

/// Follows a dotted path; numeric segments index arrays.
pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, seg| match cur {
        Value::Object(m) => m.get(seg),
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

/// Compares each expectation with the verdict; a missing path is an input
/// error, a different value a failed property.
pub fn check_expectations(
    verdict: &Value,
    expect: &BTreeMap<String, Value>,
) -> anyhow::Result<(Vec<Value>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (path, want) in expect {
        let got = lookup(verdict, path)
            .ok_or_else(|| anyhow::anyhow!("invalid scenario at `expect.{path}`: no such verdict field"))?;
        let ok = got == want;
        if !ok {
            failures.push(format!("expected {path} = {want}, found {got}"));
        }
        rows.push(json!({ "path": path, "expected": want, "actual": got, "ok": ok }));
    }
    Ok((rows, failures))
}
