//! Turns scenario specs into engine values; errors name the offending field.

use anyhow::{anyhow, bail, Result};
use heyde::catalog::{AUT_SAMPLES, FULL_AUT_LIMIT};
use heyde::heyde::PairFamily;
use heyde::morphism::{aut_order, automorphisms_or_sample, check_heyde_admissible, AUTOMORPHISM_CAP};
use heyde::{Dist, FiniteAbelianGroup, GroupElement, Homomorphism, Rational};
use num_bigint::BigUint;

use crate::scenario::{AlphaSet, AlphaSpec, DistSpec, FamilySpec, GroupSpec};

fn at<E: std::fmt::Display>(path: &str) -> impl FnOnce(E) -> anyhow::Error + '_ {
    move |e| anyhow!("invalid scenario at `{path}`: {e}")
}

pub fn group(spec: &GroupSpec, path: &str) -> Result<FiniteAbelianGroup> {
    if spec.orders.is_empty() {
        bail!("invalid scenario at `{path}.orders`: at least one factor is required");
    }
    FiniteAbelianGroup::new(&spec.orders).map_err(at(&format!("{path}.orders")))
}

pub fn element(g: &FiniteAbelianGroup, coords: &[i64], path: &str) -> Result<GroupElement> {
    g.element(coords).map_err(at(path))
}

pub fn alpha(g: &FiniteAbelianGroup, spec: &AlphaSpec, path: &str) -> Result<Homomorphism> {
    let a = match spec {
        AlphaSpec::Scalar(k) => Homomorphism::scalar(g, *k),
        AlphaSpec::Matrix(m) => Homomorphism::new(m, g, g).map_err(at(&format!("{path}.matrix")))?,
        AlphaSpec::Blocks(b) => {
            let s = b.len();
            let p = format!("{path}.blocks");
            if s == 0 || b.iter().any(|r| r.len() != s) {
                bail!("invalid scenario at `{p}`: the block must be a nonempty square matrix");
            }
            let r = g.rank();
            if !r.is_multiple_of(s) {
                bail!("invalid scenario at `{p}`: a {s}x{s} block does not tile {r} factors");
            }
            let m: Vec<Vec<i64>> =
                (0..r).map(|i| (0..r).map(|j| if i / s == j / s { b[i % s][j % s] } else { 0 }).collect()).collect();
            Homomorphism::new(&m, g, g).map_err(at(&p))?
        }
    };
    if !a.is_automorphism() {
        bail!("invalid scenario at `{path}`: not an automorphism");
    }
    Ok(a)
}

/// Every automorphism is listed when the group is small enough.
pub fn exhaustive(g: &FiniteAbelianGroup) -> bool {
    g.order() <= AUTOMORPHISM_CAP && aut_order(g) <= BigUint::from(FULL_AUT_LIMIT)
}

pub fn alpha_set(g: &FiniteAbelianGroup, set: &AlphaSet, seed: u64, path: &str) -> Result<Vec<Homomorphism>> {
    match set {
        AlphaSet::All => Ok(automorphisms_or_sample(g, FULL_AUT_LIMIT, AUT_SAMPLES, seed)),
        AlphaSet::Admissible => Ok(automorphisms_or_sample(g, FULL_AUT_LIMIT, AUT_SAMPLES, seed)
            .into_iter()
            .filter(check_heyde_admissible)
            .collect()),
        single => alpha(g, &single.single().expect("single automorphism"), path).map(|a| vec![a]),
    }
}

/// Random laws without their own seed draw from `seed + salt`.
pub fn dist(g: &FiniteAbelianGroup, spec: &DistSpec, seed: u64, salt: u64, path: &str) -> Result<Dist> {
    Ok(match spec {
        DistSpec::Haar => Dist::haar(g),
        DistSpec::HaarOnSubgroup(gens) => {
            let p = format!("{path}.haar-on-subgroup");
            let gens: Vec<GroupElement> =
                gens.iter().enumerate().map(|(i, c)| element(g, c, &format!("{p}[{i}]"))).collect::<Result<_>>()?;
            Dist::haar_on_subgroup(&g.subgroup_generated(&gens).map_err(at(&p))?)
        }
        DistSpec::Dirac(c) => {
            let p = format!("{path}.dirac");
            Dist::dirac(g, &element(g, c, &p)?).map_err(at(&p))?
        }
        DistSpec::Masses(ms) => {
            let p = format!("{path}.masses");
            let pairs: Vec<(GroupElement, Rational)> = ms
                .iter()
                .enumerate()
                .map(|(i, m)| Ok((element(g, &m.at, &format!("{p}[{i}].at"))?, m.mass.0.clone())))
                .collect::<Result<_>>()?;
            Dist::from_pairs(g, &pairs).map_err(at(&p))?
        }
        DistSpec::Random(r) => Dist::random(g, r.seed.unwrap_or(seed.wrapping_add(salt)), r.bound)
            .map_err(at(&format!("{path}.random")))?,
        DistSpec::Shift(s) => {
            let p = format!("{path}.shift");
            let inner = dist(g, &s.dist, seed, salt, &format!("{p}.dist"))?;
            inner.shift(&element(g, &s.by, &format!("{p}.by"))?).map_err(at(&p))?
        }
        DistSpec::Mixture(parts) => {
            let p = format!("{path}.mixture");
            let laws: Vec<Dist> = parts
                .iter()
                .enumerate()
                .map(|(i, c)| dist(g, &c.dist, seed, salt.wrapping_add(i as u64 + 1), &format!("{p}[{i}].dist")))
                .collect::<Result<_>>()?;
            let weighted: Vec<(Rational, &Dist)> = parts.iter().map(|c| c.weight.0.clone()).zip(&laws).collect();
            Dist::mixture(&weighted).map_err(at(&p))?
        }
    })
}

pub fn family(g: &FiniteAbelianGroup, spec: &FamilySpec, seed: u64, path: &str) -> Result<PairFamily> {
    Ok(match spec {
        FamilySpec::PointMasses => PairFamily::PointMasses,
        FamilySpec::HaarShifts => PairFamily::HaarShifts,
        FamilySpec::HaarMixtures(ls) => PairFamily::HaarMixtures { lambdas: ls.iter().map(|q| q.0.clone()).collect() },
        FamilySpec::Random(r) => PairFamily::Random { seed: r.seed.unwrap_or(seed), bound: r.bound, trials: r.trials },
        FamilySpec::Explicit(pairs) => {
            let p = format!("{path}.explicit");
            let pairs = pairs
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    Ok((
                        dist(g, a, seed, 2 * i as u64, &format!("{p}[{i}][0]"))?,
                        dist(g, b, seed, 2 * i as u64 + 1, &format!("{p}[{i}][1]"))?,
                    ))
                })
                .collect::<Result<_>>()?;
            PairFamily::Explicit(pairs)
        }
    })
}

pub fn family_label(spec: &FamilySpec) -> &'static str {
    match spec {
        FamilySpec::PointMasses => "point-masses",
        FamilySpec::HaarShifts => "haar-shifts",
        FamilySpec::HaarMixtures(_) => "haar-mixtures",
        FamilySpec::Random(_) => "random",
        FamilySpec::Explicit(_) => "explicit",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_tile() {
        let g = FiniteAbelianGroup::new(&[2, 2, 2, 2]).unwrap();
        let a = alpha(&g, &AlphaSpec::Blocks(vec![vec![0, 1], vec![1, 1]]), "alpha").unwrap();
        assert_eq!(a.matrix()[2], vec![0, 0, 0, 1]);
        let g3 = FiniteAbelianGroup::new(&[2, 2, 2]).unwrap();
        let err = alpha(&g3, &AlphaSpec::Blocks(vec![vec![0, 1], vec![1, 1]]), "alpha").unwrap_err();
        assert!(err.to_string().contains("alpha.blocks"));
    }

    #[test]
    fn non_automorphism_rejected() {
        let g = FiniteAbelianGroup::new(&[9]).unwrap();
        assert!(alpha(&g, &AlphaSpec::Scalar(3), "alpha").is_err());
    }

    #[test]
    fn bad_orders() {
        let err = group(&GroupSpec { orders: vec![0] }, "group").unwrap_err();
        assert!(err.to_string().contains("group.orders"));
    }
}
