//! One runner per scenario kind. Each returns a verdict object and the list of
//! properties that failed; errors mean bad input or an unmet hypothesis.

use anyhow::{anyhow, bail, Result};
use heyde::gaussian::{
    admissibility_on_lattice, gaussian_condition, solenoid_admissible, solenoid_pair_condition, solenoid_window,
    window_verify,
};
use heyde::group::SUBGROUP_CAP;
use heyde::heyde::{
    conditional_symmetry_oracle, enumerate_zero_one_solutions, heyde_equation_holds, iteration_identities_check,
    lemma_subgroup_sweep, proposition_haar_condition, theorem1_verifier, truncation_tower_sweep, AlphaFamily,
    Hypotheses, PairFamily, TheoremOptions, TheoremReport, TowerCheck,
};
use heyde::morphism::id_plus_minus;
use heyde::{
    catalog, char_fn, FiniteAbelianGroup, GaussianSpec, Homomorphism, Instance, LatticeAutomorphism, Rational,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{self, rat};
use crate::resolve;
use crate::scenario::*;

pub struct Outcome {
    pub verdict: Value,
    pub hypotheses: Option<Value>,
    /// Failed properties, each with enough detail to recheck.
    pub failures: Vec<String>,
}

pub fn run(task: &Task, seed: u64) -> Result<Outcome> {
    match task {
        Task::CheckSymmetry(t) => check_symmetry(t, seed),
        Task::VerifyTheorem(t) => verify_theorem(t, seed),
        Task::EnumerateSolutions(t) => enumerate_solutions(t),
        Task::HaarCondition(t) => haar_condition(t, seed),
        Task::CounterexampleSuite(t) => counterexample_suite(t, seed),
        Task::TruncationSweep(t) => truncation_sweep(t),
        Task::GaussianCheck(t) => gaussian_check(t, seed),
    }
}

fn hypotheses(alpha: &Homomorphism) -> Result<Value> {
    let h = Hypotheses::of(alpha);
    let (plus, minus) = id_plus_minus(alpha)?;
    Ok(json!({
        "odd_order": h.odd_order,
        "admissible": h.admissible,
        "plus_automorphism": plus.is_automorphism(),
        "minus_automorphism": minus.is_automorphism(),
    }))
}

fn check_symmetry(t: &CheckSymmetry, seed: u64) -> Result<Outcome> {
    let g = resolve::group(&t.group, "group")?;
    let alpha = resolve::alpha(&g, &t.alpha, "alpha")?;
    let mu1 = resolve::dist(&g, &t.mu1, seed, 1, "mu1")?;
    let mu2 = resolve::dist(&g, &t.mu2, seed, 2, "mu2")?;
    let inst = Instance::new(&alpha, mu1, mu2)?;
    let eq = heyde_equation_holds(&inst)?;
    let or = conditional_symmetry_oracle(&inst);
    let mut failures = Vec::new();
    if eq.symmetric != or.symmetric {
        failures.push(format!("equation says {} but the oracle says {}", eq.symmetric, or.symmetric));
    }
    if !(eq.witness_rechecks(&inst) && or.witness_rechecks(&inst)) {
        failures.push("a witness does not recheck".into());
    }
    let mut verdict = json!({
        "symmetric": or.symmetric,
        "agree": eq.symmetric == or.symmetric,
        "equation": report::verdict(&eq, &inst),
        "oracle": report::verdict(&or, &inst),
    });
    if let Some(depth) = t.depth {
        verdict["iteration"] = if !or.symmetric {
            json!({ "skipped": "the pair is not symmetric" })
        } else {
            let real = char_fn(inst.mu1()).is_real_valued() && char_fn(inst.mu2()).is_real_valued();
            let target = if real { inst.clone() } else { inst.symmetrized()? };
            let r = iteration_identities_check(&target, depth)?;
            if !r.all_hold() {
                let bad = r.depths.iter().find(|d| !(d.mu1_holds && d.mu2_holds)).map(|d| d.depth);
                failures.push(format!(
                    "iterated identities fail (first substitutions {} {}, depth {bad:?})",
                    r.first_substitution, r.second_substitution
                ));
            }
            let depths: Vec<Value> = r
                .depths
                .iter()
                .map(|d| json!({ "depth": d.depth, "factors": d.factors, "distinct": d.distinct, "mu1_holds": d.mu1_holds, "mu2_holds": d.mu2_holds }))
                .collect();
            json!({
                "applied_to": if real { "pair" } else { "symmetrized pair" },
                "first_substitution": r.first_substitution,
                "second_substitution": r.second_substitution,
                "monomorphisms": r.monomorphisms,
                "depths": depths,
                "all_hold": r.all_hold(),
            })
        };
    }
    Ok(Outcome { verdict, hypotheses: Some(hypotheses(&alpha)?), failures })
}

fn theorem_case(
    g: &FiniteAbelianGroup,
    alpha: &Homomorphism,
    fam: &PairFamily,
    label: &str,
    r: &TheoremReport,
) -> Result<Value> {
    let decompositions: Vec<Value> = r
        .decomposed
        .iter()
        .map(|d| json!({ "pair": d.pair_index, "k": report::subgroup(&d.k), "x1": report::element(&d.x1), "x2": report::element(&d.x2) }))
        .collect();
    let violations = |vs: &[heyde::heyde::Violation]| -> Vec<Value> {
        vs.iter().map(|v| json!({ "pair": v.pair_index, "reason": v.reason })).collect()
    };
    let mut case = json!({
        "alpha": report::morphism(alpha),
        "family": label,
        "assertive": r.assertive,
        "pairs": r.pairs,
        "symmetric": r.symmetric(),
        "asymmetric": r.asymmetric,
        "decompositions": decompositions,
        "violations": violations(&r.violations),
        "zero_one_checked": r.zero_one_checked,
        "zero_one_violations": violations(&r.zero_one_violations),
        "equation_disagreements": r.equation_disagreements,
        "passed": r.passed(),
    });
    let first_bad = r
        .violations
        .iter()
        .chain(&r.zero_one_violations)
        .map(|v| v.pair_index)
        .chain(r.equation_disagreements.iter().copied())
        .min();
    if let Some(i) = first_bad {
        let (mu1, mu2) = fam.pairs(g)?.swap_remove(i);
        case["witness"] = report::instance(&Instance::new(alpha, mu1, mu2)?);
        case["witness"]["pair"] = json!(i);
    }
    Ok(case)
}

fn verify_theorem(t: &VerifyTheorem, seed: u64) -> Result<Outcome> {
    let g = resolve::group(&t.group, "group")?;
    let mut alphas = resolve::alpha_set(&g, &t.alpha, seed, "alpha")?;
    if !t.exploratory && t.alpha.single().is_none() {
        alphas.retain(|a| Hypotheses::of(a).met());
        if alphas.is_empty() {
            bail!("hypothesis not met: no automorphism in the set has odd order and admissibility");
        }
    }
    let families: Vec<(PairFamily, &str)> = t
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| Ok((resolve::family(&g, f, seed, &format!("families[{i}]"))?, resolve::family_label(f))))
        .collect::<Result<_>>()?;
    let opts = TheoremOptions { exploratory: t.exploratory, cross_check: t.cross_check };
    let cells: Vec<(usize, usize)> = (0..alphas.len()).flat_map(|a| (0..families.len()).map(move |f| (a, f))).collect();
    let cases: Vec<(Value, bool, bool)> = cells
        .par_iter()
        .map(|&(a, f)| {
            let (fam, label) = &families[f];
            let r = theorem1_verifier(&g, &alphas[a], fam, opts)?;
            Ok((theorem_case(&g, &alphas[a], fam, label, &r)?, r.assertive, r.passed()))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for ((a, f), (_, assertive, passed)) in cells.iter().zip(&cases) {
        if *assertive && !passed {
            failures.push(format!("automorphism {a}, family {}: structural check failed", families[*f].1));
        }
    }
    let total = |k: &str| cases.iter().map(|(c, _, _)| c[k].as_u64().unwrap_or(0)).sum::<u64>();
    let verdict = json!({
        "group": g.orders(),
        "automorphisms": alphas.len(),
        "pairs": total("pairs"),
        "symmetric": total("symmetric"),
        "passed": cases.iter().all(|(_, _, p)| *p),
        "cases": cases.into_iter().map(|(c, _, _)| c).collect::<Vec<_>>(),
    });
    let hyps = match alphas.as_slice() {
        [a] => Some(hypotheses(a)?),
        _ => None,
    };
    Ok(Outcome { verdict, hypotheses: hyps, failures })
}

fn enumerate_solutions(t: &EnumerateSolutions) -> Result<Outcome> {
    let g = resolve::group(&t.group, "group")?;
    let alpha = resolve::alpha(&g, &t.alpha, "alpha")?;
    let r = enumerate_zero_one_solutions(&g, &alpha, t.subgroup_cap.min(SUBGROUP_CAP))?;
    let adj = alpha.adjoint();
    let non_invariant: Vec<Value> =
        r.solutions.iter().filter(|e| adj.image_of(e).map_or(true, |im| &im != *e)).map(report::subgroup).collect();
    let mut failures = Vec::new();
    if r.hypotheses_met && !r.all_invariant {
        failures.push(format!("{} solutions are not invariant under the adjoint", non_invariant.len()));
    }
    let verdict = json!({
        "count": r.solutions.len(),
        "solutions": r.solutions.iter().map(report::subgroup).collect::<Vec<_>>(),
        "hypotheses_met": r.hypotheses_met,
        "all_invariant": r.all_invariant,
        "non_invariant": non_invariant,
        "subgroups_scanned": r.subgroups_scanned,
    });
    Ok(Outcome { verdict, hypotheses: Some(hypotheses(&alpha)?), failures })
}

fn haar_condition(t: &HaarCondition, seed: u64) -> Result<Outcome> {
    let groups: Vec<FiniteAbelianGroup> = match &t.groups {
        GroupSet::Catalog => catalog::catalog(),
        GroupSet::List(specs) => specs
            .iter()
            .enumerate()
            .map(|(i, s)| resolve::group(s, &format!("groups.list[{i}]")))
            .collect::<Result<_>>()?,
    };
    let autos: Vec<Vec<Homomorphism>> =
        groups.iter().map(|g| resolve::alpha_set(g, &t.alpha, seed, "alpha")).collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> =
        autos.iter().enumerate().flat_map(|(gi, a)| (0..a.len()).map(move |ai| (gi, ai))).collect();
    let results: Vec<Value> = cells
        .par_iter()
        .map(|&(gi, ai)| {
            let (g, a) = (&groups[gi], &autos[gi][ai]);
            let condition = proposition_haar_condition(a)?;
            let inst = Instance::new(a, heyde::Dist::haar(g), heyde::Dist::haar(g))?;
            let or = conditional_symmetry_oracle(&inst);
            let mut case = json!({
                "alpha": report::morphism(a),
                "condition": condition,
                "oracle_symmetric": or.symmetric,
                "agree": condition == or.symmetric,
                "witness": or.witness.as_ref().map(report::witness),
            });
            if t.subgroups {
                let subs = g.enumerate_subgroups(SUBGROUP_CAP)?;
                let s = lemma_subgroup_sweep(std::slice::from_ref(a), &subs)?;
                case["subgroups"] = json!({
                    "checked": s.checked,
                    "agreed": s.agreed,
                    "condition_true": s.condition_true,
                    "disagreements": s.disagreements,
                });
            }
            Ok(case)
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut out = Vec::new();
    let mut it = cells.iter().zip(results);
    for (gi, g) in groups.iter().enumerate() {
        let cases: Vec<Value> = it.by_ref().take(autos[gi].len()).map(|(_, c)| c).collect();
        let agreed = cases.iter().filter(|c| c["agree"] == json!(true)).count();
        for (ai, c) in cases.iter().enumerate() {
            if c["agree"] != json!(true) {
                failures.push(format!("group {:?}, automorphism {ai}: condition and oracle differ", g.orders()));
            }
            if let Some(s) = c.get("subgroups") {
                if s["checked"] != s["agreed"] {
                    failures.push(format!(
                        "group {:?}, automorphism {ai}: subgroup condition and oracle differ",
                        g.orders()
                    ));
                }
            }
        }
        out.push(json!({
            "group": g.orders(),
            "exhaustive": resolve::exhaustive(g),
            "automorphisms": cases.len(),
            "agreed": agreed,
            "condition_true": cases.iter().filter(|c| c["condition"] == json!(true)).count(),
            "cases": cases,
        }));
    }
    let verdict = json!({
        "checked": cells.len(),
        "all_agree": failures.is_empty(),
        "groups": out,
    });
    let hyps = match (groups.len(), autos.first().map(Vec::len)) {
        (1, Some(1)) => Some(hypotheses(&autos[0][0])?),
        _ => None,
    };
    Ok(Outcome { verdict, hypotheses: hyps, failures })
}

fn counterexample_suite(t: &CounterexampleSuite, seed: u64) -> Result<Outcome> {
    let g = resolve::group(&t.group, "group")?;
    let alpha = resolve::alpha(&g, &t.alpha, "alpha")?;
    let pairs = PairFamily::Random { seed, bound: t.bound, trials: t.trials }.pairs(&g)?;
    let rows: Vec<(bool, bool, bool)> = pairs
        .par_iter()
        .map(|(a, b)| {
            let inst = Instance::new(&alpha, a.clone(), b.clone())?;
            let or = conditional_symmetry_oracle(&inst).symmetric;
            let eq = heyde_equation_holds(&inst)?.symmetric;
            let shifts = match (a.is_haar_shift(), b.is_haar_shift()) {
                (Some((k1, _)), Some((k2, _))) => k1 == k2,
                _ => false,
            };
            Ok((or, eq, shifts))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let disagreements: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.0 != r.1).map(|(i, _)| i).collect();
    if !disagreements.is_empty() {
        failures.push(format!("equation and oracle differ on pairs {disagreements:?}"));
    }
    let symmetric = rows.iter().filter(|r| r.0).count();
    let outside: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.0 && !r.2).map(|(i, _)| i).collect();
    let instance = |i: usize| -> Result<Value> {
        let (a, b) = &pairs[i];
        let inst = Instance::new(&alpha, a.clone(), b.clone())?;
        let mut v = report::instance(&inst);
        v["pair"] = json!(i);
        v["oracle"] = report::verdict(&conditional_symmetry_oracle(&inst), &inst);
        Ok(v)
    };
    let first_asymmetric = rows.iter().position(|r| !r.0).map(instance).transpose()?;
    let examples: Vec<Value> = outside.iter().take(3).map(|&i| instance(i)).collect::<Result<_>>()?;
    let verdict = json!({
        "pairs": pairs.len(),
        "symmetric": symmetric,
        "all_symmetric": symmetric == pairs.len(),
        "equation_disagreements": disagreements,
        "non_haar_shift_symmetric": outside.len(),
        "non_haar_shift_examples": examples,
        "first_asymmetric": first_asymmetric,
    });
    Ok(Outcome { verdict, hypotheses: Some(hypotheses(&alpha)?), failures })
}

fn truncation_sweep(t: &TruncationSweep) -> Result<Outcome> {
    let family = match &t.alpha {
        TowerAlphaSpec::Scalar(k) => AlphaFamily::Scalar(*k),
        TowerAlphaSpec::PerPrime(ks) => AlphaFamily::PerPrime(ks.clone()),
        TowerAlphaSpec::Matrix(m) => AlphaFamily::Matrix(m.clone()),
    };
    let check = match &t.check {
        TowerCheckSpec::Admissibility => TowerCheck::Admissibility,
        TowerCheckSpec::ZeroOneSolutions => TowerCheck::ZeroOneSolutions,
        TowerCheckSpec::Theorem(f) => {
            if matches!(f, FamilySpec::Explicit(_)) {
                bail!("invalid scenario at `check.theorem`: explicit pairs belong to a single layer");
            }
            // The family does not depend on the group for the lifted kinds.
            let g0 = FiniteAbelianGroup::new(&[1]).map_err(|e| anyhow!("{e}"))?;
            TowerCheck::Theorem(resolve::family(&g0, f, 0, "check.theorem")?)
        }
    };
    let r = truncation_tower_sweep(&t.primes, t.levels, &family, &check)?;
    let layers: Vec<Value> = r
        .layers
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "group": l.group.orders(),
                "admissible": l.admissible,
                "solutions": l.solutions.as_ref().map(|s| s.iter().map(report::subgroup).collect::<Vec<_>>()),
                "solution_count": l.solutions.as_ref().map(Vec::len),
                "theorem": l.theorem.as_ref().map(|th| json!({
                    "pairs": th.pairs,
                    "symmetric": th.symmetric(),
                    "violations": th.violations.len(),
                    "passed": th.passed(),
                })),
                "commutes": l.commutes,
                "projections_consistent": l.projections_consistent,
                "projections_onto": l.projections_onto,
                "dual_consistent": l.dual_consistent,
            })
        })
        .collect();
    let mut failures = Vec::new();
    if !r.consistent() {
        failures.push("layers disagree; see the per-layer flags".into());
    }
    let verdict = json!({
        "primes": r.primes,
        "admissibility_uniform": r.admissibility_uniform,
        "consistent": r.consistent(),
        "layers": layers,
    });
    Ok(Outcome { verdict, hypotheses: None, failures })
}

fn gaussian_spec(rows: &[Vec<Q>], path: &str) -> Result<GaussianSpec> {
    GaussianSpec::new(rows.iter().map(|r| r.iter().map(|q| q.0.clone()).collect()).collect())
        .map_err(|e| anyhow!("invalid scenario at `{path}`: {e}"))
}

fn window_json(w: &heyde::gaussian::WindowVerdict) -> Value {
    json!({
        "holds": w.holds,
        "points": w.points,
        "witness": w.witness.as_ref().map(|(u, v)| json!({ "u": u, "v": v })),
    })
}

fn torus(t: &TorusSpec, failures: &mut Vec<String>) -> Result<Value> {
    let a1 = gaussian_spec(&t.a1, "torus.a1")?;
    let a2 = gaussian_spec(&t.a2, "torus.a2")?;
    let alpha =
        LatticeAutomorphism::new(t.alpha.clone()).map_err(|e| anyhow!("invalid scenario at `torus.alpha`: {e}"))?;
    let c = gaussian_condition(&a1, &a2, &alpha)?;
    let w = window_verify(&a1, &a2, &alpha, t.radius)?;
    if c.holds != w.holds {
        failures.push(format!("torus: closed form {} but window {}", c.holds, w.holds));
    }
    let (a, p, m) = admissibility_on_lattice(alpha.matrix())?;
    let mut perturbed = Vec::new();
    for (k, (i, j, d)) in t.perturbations.iter().enumerate() {
        let path = format!("torus.perturbations[{k}]");
        let n = a1.dimension();
        if *i >= n || *j >= n {
            bail!("invalid scenario at `{path}`: entry ({i}, {j}) outside a {n}x{n} matrix");
        }
        let mut rows: Vec<Vec<Rational>> = a1.matrix().to_vec();
        rows[*i][*j] += &d.0;
        if i != j {
            rows[*j][*i] += &d.0;
        }
        let b1 = GaussianSpec::new(rows).map_err(|e| anyhow!("invalid scenario at `{path}`: {e}"))?;
        let pc = gaussian_condition(&b1, &a2, &alpha)?.holds;
        let pw = window_verify(&b1, &a2, &alpha, t.radius)?;
        if pc != pw.holds {
            failures.push(format!("{path}: closed form {pc} but window {}", pw.holds));
        }
        perturbed.push(json!({ "entry": [i, j], "delta": rat(&d.0), "closed_form": pc, "window": window_json(&pw) }));
    }
    Ok(json!({
        "closed_form": c.holds,
        "cross_symmetric": c.cross_symmetric,
        "window": window_json(&w),
        "agree": c.holds == w.holds,
        "admissibility": [a, p, m],
        "determinants": [rat(&a1.determinant()), rat(&a2.determinant())],
        "perturbations": perturbed,
    }))
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn default_samples() -> Vec<(Rational, Rational)> {
    vec![(r(1, 1), r(1, 1)), (r(2, 1), r(-1, 1)), (r(1, 2), r(3, 1)), (r(-5, 3), r(2, 7))]
}

fn solenoid(s: &SolenoidSpec, seed: u64, failures: &mut Vec<String>) -> Result<Value> {
    let (s1, s2, a) = (&s.sigma1.0, &s.sigma2.0, &s.alpha.0);
    let samples: Vec<(Rational, Rational)> = if s.samples.is_empty() {
        default_samples()
    } else {
        s.samples.iter().map(|(u, v)| (u.0.clone(), v.0.clone())).collect()
    };
    let bad = |e: heyde::Error| anyhow!("invalid scenario at `solenoid`: {e}");
    let condition = solenoid_pair_condition(s1, s2, a).map_err(bad)?;
    let window = solenoid_window(s1, s2, a, &samples).map_err(bad)?;
    if condition != window {
        failures.push(format!("solenoid: closed form {condition} but window {window}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut on_line) = (0usize, 0usize);
    let mut disagreements = Vec::new();
    for i in 0..s.random_triples {
        let (t1, t2) = (r(rng.gen_range(0..8), 3), r(rng.gen_range(0..8), 2));
        let mut ta = r(rng.gen_range(1..10) * if rng.gen_bool(0.5) { -1 } else { 1 }, rng.gen_range(1..5));
        // Half the triples sit on σ1 + ασ2 = 0.
        if rng.gen_bool(0.5) && !t1.is_zero() && !t2.is_zero() {
            ta = -(&t1 / &t2);
        }
        let c = solenoid_pair_condition(&t1, &t2, &ta)?;
        let w = solenoid_window(&t1, &t2, &ta, &samples)?;
        on_line += usize::from(c);
        if c == w {
            agree += 1;
        } else {
            disagreements.push(json!({ "triple": i, "sigma1": rat(&t1), "sigma2": rat(&t2), "alpha": rat(&ta) }));
        }
    }
    if !disagreements.is_empty() {
        failures.push(format!("solenoid: {} random triples disagree", disagreements.len()));
    }
    Ok(json!({
        "condition": condition,
        "window": window,
        "agree": condition == window,
        "admissible": solenoid_admissible(a),
        "plus_invertible": !(Rational::one() + a).is_zero(),
        "minus_invertible": !(Rational::one() - a).is_zero(),
        "samples": samples.len(),
        "sweep": { "triples": s.random_triples, "agree": agree, "on_condition": on_line, "disagreements": disagreements },
        "sweep_agrees": agree == s.random_triples,
    }))
}

fn gaussian_check(t: &GaussianCheck, seed: u64) -> Result<Outcome> {
    if t.torus.is_none() && t.solenoid.is_none() {
        bail!("invalid scenario at `.`: give `torus`, `solenoid`, or both");
    }
    let mut failures = Vec::new();
    let mut verdict = json!({});
    if let Some(tt) = &t.torus {
        verdict["torus"] = torus(tt, &mut failures)?;
    }
    if let Some(s) = &t.solenoid {
        verdict["solenoid"] = solenoid(s, seed, &mut failures)?;
    }
    Ok(Outcome { verdict, hypotheses: None, failures })
}
