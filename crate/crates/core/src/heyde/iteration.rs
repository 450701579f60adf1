//! The substitutions u = α̃y, v = −y and u = y, v = −y in the functional
//! equation, and the product representations obtained by iterating them.
//!
//! With b = (I+α̃)(I−α̃)^{-1}, c = 2α̃(I−α̃)^{-1} and d = 2(I−α̃)^{-1}:
//! μ̂1(y) = μ̂1(by)μ̂2(cy) and μ̂2(y) = μ̂1(dy)μ̂2(by). Substituting these into
//! themselves n − 1 times writes each μ̂_j as a product of 2^{n−1} pairs
//! μ̂1(z y)μ̂2(w y), with z, w monomials in the commuting maps b, c, d.

use std::collections::{BTreeMap, HashMap};

use crate::cyclotomic::CyclotomicNumber;
use crate::duality::char_fn;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::heyde::symmetry::{heyde_equation_holds, HeydeInstance};
use crate::morphism::{id_plus_minus, Homomorphism};
use crate::{CharFn, Rational};

/// Largest expansion depth accepted; multiplicities reach 2^depth.
pub const MAX_DEPTH: u32 = 16;

/// Which transform a factor evaluates, and the exponents of b, c, d.
type Monomial = (u8, [u32; 3]);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthCheck {
    pub depth: u32,
    /// 2^depth factors, 2^{depth−1} pairs.
    pub factors: u64,
    /// Distinct (transform, monomial) factors after collecting powers.
    pub distinct: usize,
    pub mu1_holds: bool,
    pub mu2_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationReport {
    /// μ̂1((I−α̃)y) = μ̂1((I+α̃)y)μ̂2(2α̃y) for all y.
    pub first_substitution: bool,
    /// μ̂2((I−α̃)y) = μ̂1(2y)μ̂2((I+α̃)y) for all y.
    pub second_substitution: bool,
    /// b, c, d are injective (they need not be when 2 is not invertible).
    pub monomorphisms: bool,
    pub depths: Vec<DepthCheck>,
}

impl IterationReport {
    pub fn all_hold(&self) -> bool {
        self.first_substitution && self.second_substitution && self.depths.iter().all(|d| d.mu1_holds && d.mu2_holds)
    }
}

/// Checks the substitution identities and the product representations for
/// depths 1..=depth. Apply to the ν_j = μ_j * μ̄_j reduction when the
/// transforms of μ_j are not real.
pub fn iteration_identities_check(inst: &HeydeInstance<Rational>, depth: u32) -> Result<IterationReport> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Precondition(format!("depth must lie in 1..={MAX_DEPTH}")));
    }
    let g = inst.group();
    let adj = inst.alpha().adjoint();
    let (plus, minus) = id_plus_minus(&adj)?;
    if !minus.is_automorphism() {
        return Err(Error::HypothesisNotMet("I − α̃ is not an automorphism".into()));
    }
    if !heyde_equation_holds(inst)?.symmetric {
        return Err(Error::Precondition("the functional equation does not hold".into()));
    }
    let f = [char_fn(inst.mu1()), char_fn(inst.mu2())];
    if !f.iter().all(CharFn::is_real_valued) {
        return Err(Error::Precondition("transforms are not real; use the symmetrized pair".into()));
    }
    let inv = minus.invert()?;
    let two = Homomorphism::scalar(g, 2);
    let b = plus.compose(&inv)?;
    let c = two.compose(&adj)?.compose(&inv)?;
    let d = two.compose(&inv)?;
    let tables = [b.table(), c.table(), d.table()];

    let (plus_t, minus_t, two_adj_t, two_t) = (plus.table(), minus.table(), two.compose(&adj)?.table(), two.table());
    let size = g.order() as usize;
    let first_substitution = (0..size).all(|y| f[0].at(minus_t[y]) == &(f[0].at(plus_t[y]) * f[1].at(two_adj_t[y])));
    let second_substitution = (0..size).all(|y| f[1].at(minus_t[y]) == &(f[0].at(two_t[y]) * f[1].at(plus_t[y])));

    let mut expander = Expander { g, tables: &tables, cache: HashMap::new() };
    let mut terms: [BTreeMap<Monomial, u64>; 2] =
        [BTreeMap::from([((0, [0; 3]), 1)]), BTreeMap::from([((1, [0; 3]), 1)])];
    let mut depths = Vec::new();
    for n in 1..=depth {
        for t in terms.iter_mut() {
            *t = expand(t);
        }
        depths.push(DepthCheck {
            depth: n,
            factors: 1 << n,
            distinct: terms[0].len().max(terms[1].len()),
            mu1_holds: expander.reproduces(&terms[0], &f, 0),
            mu2_holds: expander.reproduces(&terms[1], &f, 1),
        });
    }
    Ok(IterationReport {
        first_substitution,
        second_substitution,
        monomorphisms: [&b, &c, &d].iter().all(|m| m.kernel().is_trivial()),
        depths,
    })
}

/// One substitution step: μ̂1(z) → μ̂1(bz)μ̂2(cz), μ̂2(z) → μ̂1(dz)μ̂2(bz).
fn expand(terms: &BTreeMap<Monomial, u64>) -> BTreeMap<Monomial, u64> {
    let mut out = BTreeMap::new();
    for (&(which, [k, l, m]), &mult) in terms {
        let (a, b) = if which == 0 {
            ((0, [k + 1, l, m]), (1, [k, l + 1, m]))
        } else {
            ((0, [k, l, m + 1]), (1, [k + 1, l, m]))
        };
        *out.entry(a).or_insert(0) += mult;
        *out.entry(b).or_insert(0) += mult;
    }
    out
}

struct Expander<'a> {
    g: &'a FiniteAbelianGroup,
    tables: &'a [Vec<usize>; 3],
    cache: HashMap<[u32; 3], Vec<usize>>,
}

impl Expander<'_> {
    fn monomial(&mut self, e: [u32; 3]) -> &[usize] {
        let (size, tables) = (self.g.order() as usize, self.tables);
        self.cache.entry(e).or_insert_with(|| {
            let mut t: Vec<usize> = (0..size).collect();
            for (map, &times) in tables.iter().zip(&e) {
                for _ in 0..times {
                    t.iter_mut().for_each(|y| *y = map[*y]);
                }
            }
            t
        })
    }

    fn reproduces(&mut self, terms: &BTreeMap<Monomial, u64>, f: &[CharFn; 2], target: usize) -> bool {
        let size = self.g.order() as usize;
        let maps: Vec<(usize, Vec<usize>, u64)> =
            terms.iter().map(|(&(w, e), &mult)| (w as usize, self.monomial(e).to_vec(), mult)).collect();
        (0..size).all(|y| {
            let mut prod = CyclotomicNumber::one(self.g.field());
            for (w, t, mult) in &maps {
                let v = f[*w].at(t[y]);
                if v.is_zero() {
                    return f[target].at(y).is_zero();
                }
                if !v.is_one() {
                    prod = &prod * &v.pow(*mult);
                }
            }
            &prod == f[target].at(y)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;

    type Dist = Distribution<Rational>;

    fn g(orders: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(orders).unwrap()
    }

    #[test]
    fn expansion_counts() {
        let mut t = BTreeMap::from([((0u8, [0u32; 3]), 1u64)]);
        t = expand(&t);
        assert_eq!(t, BTreeMap::from([((0, [1, 0, 0]), 1), ((1, [0, 1, 0]), 1)]));
        for n in 2..8 {
            t = expand(&t);
            assert_eq!(t.values().sum::<u64>(), 1 << n);
            // Every step multiplies by exactly one of b, c, d.
            assert!(t.keys().all(|(_, e)| e.iter().sum::<u32>() == n));
        }
    }

    #[test]
    fn haar_pair() {
        let h = g(&[3, 3]);
        let a = Homomorphism::new(&[vec![0, 1], vec![1, 1]], &h, &h).unwrap();
        let m = Dist::haar(&h);
        let r = iteration_identities_check(&HeydeInstance::new(&a, m.clone(), m).unwrap(), 4).unwrap();
        assert!(r.all_hold() && r.monomorphisms);
    }

    #[test]
    fn z5_symmetrized_point_masses() {
        let z5 = g(&[5]);
        let two = Homomorphism::scalar(&z5, 2);
        let x2 = z5.element(&[1]).unwrap();
        let x1 = z5.element(&[3]).unwrap();
        let inst = HeydeInstance::new(&two, Dist::dirac(&z5, &x1).unwrap(), Dist::dirac(&z5, &x2).unwrap()).unwrap();
        // Point-mass transforms are not real; the raw pair is refused.
        assert!(matches!(iteration_identities_check(&inst, 3), Err(Error::Precondition(_))));
        let r = iteration_identities_check(&inst.symmetrized().unwrap(), 3).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.depths.len(), 3);
    }

    #[test]
    fn nontrivial_solutions_on_z2_blocks() {
        // α(x1, x2) = (x2, x1 + x2) on each Z(2)² block: I ± α are
        // automorphisms, every pair is symmetric, and c = d = 0.
        let h = g(&[2, 2, 2, 2]);
        let blk = [[0, 1], [1, 1]];
        let m: Vec<Vec<i64>> =
            (0..4).map(|i| (0..4).map(|j| if i / 2 == j / 2 { blk[i % 2][j % 2] } else { 0 }).collect()).collect();
        let a = Homomorphism::new(&m, &h, &h).unwrap();
        for seed in 0..5 {
            let inst =
                HeydeInstance::new(&a, Dist::random(&h, seed, 3).unwrap(), Dist::random(&h, seed + 100, 3).unwrap())
                    .unwrap();
            let r = iteration_identities_check(&inst, 5).unwrap();
            assert!(r.all_hold());
            assert!(!r.monomorphisms);
        }
    }

    #[test]
    fn guard_fires_on_asymmetric_pair() {
        let z5 = g(&[5]);
        let two = Homomorphism::scalar(&z5, 2);
        let m = Dist::haar(&z5);
        let e = Dist::dirac(&z5, &z5.element(&[1]).unwrap()).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let perturbed = Dist::mixture(&[(half.clone(), &m), (half, &e)]).unwrap();
        let inst = HeydeInstance::new(&two, perturbed.clone(), perturbed).unwrap();
        let sym = inst.symmetrized().unwrap();
        assert!(matches!(iteration_identities_check(&sym, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn guard_on_i_minus_alpha() {
        let z5 = g(&[5]);
        let one = Homomorphism::identity(&z5);
        let m = Dist::haar(&z5);
        let inst = HeydeInstance::new(&one, m.clone(), m).unwrap();
        assert!(matches!(iteration_identities_check(&inst, 2), Err(Error::HypothesisNotMet(_))));
    }
}
