//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! runtime bound. Runs without the libtest harness so the lines are always
//! printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use heyde::catalog::{catalog, catalog_automorphisms};
use heyde::duality::CharacteristicFunction;
use heyde::gaussian::{
    admissibility_on_lattice, gaussian_pair_symmetry_condition, solenoid_admissible, solenoid_pair_condition,
    solenoid_window, window_verify,
};
use heyde::group::SUBGROUP_CAP;
use heyde::heyde::{
    enumerate_zero_one_solutions, lemma1_equivalence_sweep, lemma_subgroup_sweep, proposition_sweep,
    shift_condition_sweep, theorem1_verifier, truncation_tower_sweep, AlphaFamily, PairFamily, PairSampler,
    TheoremOptions, TowerCheck,
};
use heyde::morphism::{
    adjoint_law_holds, check_heyde_admissible, enumerate_automorphisms, id_plus_minus, AUTOMORPHISM_CAP,
};
use heyde::{
    annihilator, char_fn, inverse_fourier, Dist, FiniteAbelianGroup, GaussianSpec, Homomorphism, LatticeAutomorphism,
    Rational,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn g(orders: &[i64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(orders).unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn c1_equivalence() -> Outcome {
    let sampler = PairSampler::Random { seed: SEED, bound: 4 };
    let mut total = 0;
    let mut symmetric = 0;
    for h in catalog() {
        let autos = catalog_automorphisms(&h, SEED);
        let r = lemma1_equivalence_sweep(&autos, &sampler, 25).map_err(|e| e.to_string())?;
        ensure(r.instances == autos.len() * 25, "instance count")?;
        ensure(
            r.all_agree(),
            format!("{h}: {} discrepancies, {} witness failures", r.discrepancies.len(), r.witness_failures),
        )?;
        total += r.instances;
        symmetric += r.symmetric;
    }
    Ok(format!("{total} instances agree, {symmetric} symmetric"))
}

fn c2_proposition() -> Outcome {
    let mut checked = 0;
    for h in catalog() {
        let r = proposition_sweep(&catalog_automorphisms(&h, SEED)).map_err(|e| e.to_string())?;
        ensure(r.disagreements.is_empty(), format!("{h}: {:?}", r.disagreements))?;
        checked += r.checked;
    }
    Ok(format!("{checked} automorphisms, condition ⟺ oracle"))
}

fn c3_lemma_subgroup() -> Outcome {
    let (mut checked, mut admissible) = (0, 0);
    for h in catalog() {
        let autos: Vec<Homomorphism> = catalog_automorphisms(&h, SEED)
            .into_iter()
            .filter(|a| id_plus_minus(a).is_ok_and(|(p, m)| p.is_automorphism() && m.is_automorphism()))
            .collect();
        admissible += autos.len();
        let subs = h.enumerate_subgroups(SUBGROUP_CAP).map_err(|e| e.to_string())?;
        let r = lemma_subgroup_sweep(&autos, &subs).map_err(|e| e.to_string())?;
        ensure(r.disagreements.is_empty(), format!("{h}: {:?}", r.disagreements))?;
        checked += r.checked;
    }
    Ok(format!("{checked} (K, α) cases over {admissible} admissible α"))
}

fn c4_torus() -> Outcome {
    let a1 = GaussianSpec::from_ints(&[vec![1, -1], vec![-1, 2]]).map_err(|e| e.to_string())?;
    let a2 = GaussianSpec::from_ints(&[vec![1, 0], vec![0, 1]]).map_err(|e| e.to_string())?;
    let alpha = LatticeAutomorphism::new(vec![vec![-1, 1], vec![1, -2]]).map_err(|e| e.to_string())?;
    ensure(gaussian_pair_symmetry_condition(&a1, &a2, &alpha).unwrap(), "closed form fails")?;
    let w = window_verify(&a1, &a2, &alpha, 20).unwrap();
    ensure(w.holds, format!("window fails at {:?}", w.witness))?;
    let adm = admissibility_on_lattice(alpha.matrix()).unwrap();
    ensure(adm == (true, true, false), format!("admissibility {adm:?}"))?;
    let mut flips = 0;
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let mut m = vec![vec![1, -1], vec![-1, 2]];
        m[i][j] += 1;
        m[j][i] = m[i][j];
        let p = GaussianSpec::from_ints(&m).map_err(|e| e.to_string())?;
        let closed = gaussian_pair_symmetry_condition(&p, &a2, &alpha).unwrap();
        let win = window_verify(&p, &a2, &alpha, 2).unwrap();
        ensure(!closed && !win.holds && win.witness.is_some(), format!("perturbation at ({i},{j}) did not flip"))?;
        flips += 1;
    }
    Ok(format!(
        "closed form and radius-20 window hold ({} points), admissibility {adm:?}, {flips} perturbations flip",
        w.points
    ))
}

fn z2_blocks() -> (FiniteAbelianGroup, Homomorphism) {
    let h = g(&[2; 6]);
    let blk = [[0, 1], [1, 1]];
    let m: Vec<Vec<i64>> =
        (0..6).map(|i| (0..6).map(|j| if i / 2 == j / 2 { blk[i % 2][j % 2] } else { 0 }).collect()).collect();
    let a = Homomorphism::new(&m, &h, &h).unwrap();
    (h, a)
}

fn c5_z2_blocks() -> Outcome {
    let (h, a) = z2_blocks();
    let (p, m) = id_plus_minus(&a).unwrap();
    ensure(a.is_automorphism() && p.is_automorphism() && m.is_automorphism(), "α, I ± α are not all automorphisms")?;
    let fam = PairFamily::Random { seed: SEED, bound: 4, trials: 100 };
    let r = theorem1_verifier(&h, &a, &fam, TheoremOptions { exploratory: true, cross_check: false })
        .map_err(|e| e.to_string())?;
    ensure(!r.assertive && !r.hypotheses.odd_order && r.hypotheses.admissible, "hypothesis flags")?;
    ensure(r.symmetric() == 100, format!("{} of 100 pairs symmetric", r.symmetric()))?;
    let not_shift = r.violations.iter().filter(|v| v.reason.contains("Haar shifts")).count();
    ensure(not_shift >= 1, "every symmetric pair is a Haar shift")?;
    Ok(format!("100/100 symmetric, I ± α automorphisms, {not_shift} pairs are not Haar shifts"))
}

fn c6_solenoid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let samples: Vec<(Rational, Rational)> = (0..4)
        .map(|_| (rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)), rat(rng.gen_range(1..=9), rng.gen_range(1..=5))))
        .collect();
    let mut hits = 0;
    for t in 0..1000 {
        let s1 = rat(rng.gen_range(0..=12), rng.gen_range(1..=6));
        let s2 = rat(rng.gen_range(0..=12), rng.gen_range(1..=6));
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut alpha = rat(sign * rng.gen_range(1..=12), rng.gen_range(1..=6));
        if t % 3 == 0 && !s2.is_zero() {
            alpha = -(&s1 / &s2);
            if alpha.is_zero() {
                alpha = rat(-1, 2);
            }
        }
        let c = solenoid_pair_condition(&s1, &s2, &alpha).map_err(|e| e.to_string())?;
        let w = solenoid_window(&s1, &s2, &alpha, &samples).map_err(|e| e.to_string())?;
        ensure(c == w, format!("σ1 = {s1}, σ2 = {s2}, α = {alpha}: closed {c}, window {w}"))?;
        hits += usize::from(c);
    }
    // Negative α ≠ −1 with σ_j > 0.
    let (s1, s2, alpha) = (rat(2, 1), rat(1, 1), rat(-2, 1));
    ensure(solenoid_pair_condition(&s1, &s2, &alpha).unwrap() && solenoid_admissible(&alpha), "sign regime")?;
    Ok(format!("1000 triples agree ({hits} on the condition), (σ1, σ2, α) = (2, 1, −2) admissible solution"))
}

fn quarters() -> Vec<Rational> {
    (0..=4).map(|i| rat(i, 4)).collect()
}

fn c7_zero_one() -> Outcome {
    let z33 = g(&[3, 3]);
    let a33 = Homomorphism::new(&[vec![0, 1], vec![1, 1]], &z33, &z33).unwrap();
    let z25 = g(&[25]);
    let a25 = Homomorphism::scalar(&z25, 2);
    let mut summary = Vec::new();
    for (h, a) in [(&z33, &a33), (&z25, &a25)] {
        let opts = TheoremOptions { exploratory: false, cross_check: true };
        let r = theorem1_verifier(h, a, &PairFamily::HaarMixtures { lambdas: quarters() }, opts)
            .map_err(|e| e.to_string())?;
        ensure(r.equation_disagreements.is_empty(), "equation and oracle disagree")?;
        ensure(
            r.zero_one_checked == r.symmetric(),
            "a symmetric mixture has a transform that is not real nonnegative",
        )?;
        ensure(r.zero_one_violations.is_empty(), format!("{h}: {:?}", r.zero_one_violations))?;
        summary.push(format!("{h}: {} pairs, {} solve", r.pairs, r.symmetric()));
    }
    let sols = enumerate_zero_one_solutions(&z33, &a33, SUBGROUP_CAP).map_err(|e| e.to_string())?;
    ensure(
        sols.solutions.len() == 2 && sols.solutions[0].is_trivial() && sols.solutions[1].is_full(),
        "Z(3)² solutions",
    )?;
    Ok(format!("{}; Z(3)² solutions = {{trivial, full}}", summary.join("; ")))
}

fn c8_theorem() -> Outcome {
    let mut cases = 0;
    let mut symmetric = 0;
    for orders in [&[5][..], &[25], &[5, 5], &[3, 3]] {
        let h = g(orders);
        let admissible: Vec<Homomorphism> =
            enumerate_automorphisms(&h, AUTOMORPHISM_CAP).unwrap().into_iter().filter(check_heyde_admissible).collect();
        ensure(!admissible.is_empty(), format!("{h} has no admissible α"))?;
        let subs = h.enumerate_subgroups(SUBGROUP_CAP).unwrap();
        for a in &admissible {
            for fam in [PairFamily::PointMasses, PairFamily::HaarShifts] {
                let r = theorem1_verifier(&h, a, &fam, TheoremOptions::default()).map_err(|e| e.to_string())?;
                ensure(r.violations.is_empty(), format!("{h} {:?}: {:?}", a.matrix(), r.violations.first()))?;
                symmetric += r.symmetric();
            }
            let s = shift_condition_sweep(a, &subs).map_err(|e| e.to_string())?;
            ensure(s.sufficiency_failures.is_empty(), format!("{h}: {:?}", s.sufficiency_failures))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (G, α) cases, {symmetric} symmetric pairs all decompose, shift condition sufficient"))
}

fn c9_infrastructure() -> Outcome {
    let mut dists = 0;
    let mut subgroups = 0;
    let mut autos = 0;
    for h in catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..50 {
            let mu = Dist::random_with(&h, &mut rng, 6);
            ensure(inverse_fourier(&char_fn(&mu)).map_err(|e| e.to_string())? == mu, format!("round trip on {h}"))?;
            dists += 1;
        }
        for k in h.enumerate_subgroups(SUBGROUP_CAP).unwrap() {
            let f = char_fn(&Dist::haar_on_subgroup(&k));
            ensure(f == CharacteristicFunction::indicator(&annihilator(&k)), format!("Haar transform on {h}"))?;
            subgroups += 1;
        }
        if h.order() <= 64 {
            for a in catalog_automorphisms(&h, SEED) {
                ensure(adjoint_law_holds(&a, &a.adjoint()), format!("adjoint law on {h}"))?;
                autos += 1;
            }
        }
    }
    Ok(format!("{dists} round trips, {subgroups} Haar indicators, {autos} adjoint laws"))
}

fn c10_tower() -> Outcome {
    let mut out = Vec::new();
    for (primes, fam) in [(vec![5], AlphaFamily::Scalar(2)), (vec![5, 7], AlphaFamily::PerPrime(vec![2, 3]))] {
        let adm = truncation_tower_sweep(&primes, 3, &fam, &TowerCheck::Admissibility).map_err(|e| e.to_string())?;
        ensure(
            adm.admissibility_uniform && adm.layers.iter().all(|l| l.admissible),
            format!("{primes:?}: admissibility"),
        )?;
        let sol = truncation_tower_sweep(&primes, 3, &fam, &TowerCheck::ZeroOneSolutions).map_err(|e| e.to_string())?;
        ensure(sol.consistent(), format!("{primes:?}: layers inconsistent"))?;
        ensure(sol.layers[1..].iter().all(|l| l.projections_consistent == Some(true)), "projections")?;
        let counts: Vec<usize> = sol.layers.iter().map(|l| l.solutions.as_ref().map_or(0, Vec::len)).collect();
        out.push(format!("{primes:?}: solutions per layer {counts:?}"));
    }
    Ok(out.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 equation ⟺ oracle on the catalog", c1_equivalence, 180),
        ("2 Haar pair condition", c2_proposition, 60),
        ("3 subgroup condition", c3_lemma_subgroup, 120),
        ("4 Gaussian pair on the torus", c4_torus, 5),
        ("5 Z(2)^6 block map", c5_z2_blocks, 30),
        ("6 solenoid condition", c6_solenoid, 5),
        ("7 zero-one transforms", c7_zero_one, 120),
        ("8 Haar shift decomposition", c8_theorem, 180),
        ("9 infrastructure exactness", c9_infrastructure, 120),
        ("10 truncation tower", c10_tower, 120),
    ];
    let mut failed = 0;
    for (name, run, bound) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(bound);
        let (verdict, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the time bound")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {name}: {verdict} [{:.2}s ≤ {bound}s] {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
