//! Characters, annihilators and Fourier transforms.
//!
//! The dual of `⊕ Z(n_i)` is identified with the group itself through
//! `(x, y) = ζ_N^{Σ x_i y_i N / n_i}`, N the exponent.

use std::cmp::Ordering;
use std::fmt;

use crate::cyclotomic::CyclotomicNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::scalar::{RationalField, Scalar};

/// Dual coordinates share the shape of group elements.
pub type DualElement = GroupElement;

/// Exponent k with (x, y) = ζ_N^k.
pub fn pairing_exponent(g: &FiniteAbelianGroup, x: &GroupElement, y: &DualElement) -> Result<u64> {
    g.check(x)?;
    g.check(y)?;
    Ok(PairingTable::exponent_of(g, x.coords(), y.coords()))
}

pub fn pairing<T: Scalar>(g: &FiniteAbelianGroup, x: &GroupElement, y: &DualElement) -> Result<CyclotomicNumber<T>> {
    Ok(CyclotomicNumber::root_of_unity(g.field(), pairing_exponent(g, x, y)?))
}

/// Coordinates of every element, cached for repeated pairing scans.
pub(crate) struct PairingTable {
    n: u64,
    weights: Vec<u64>,
    coords: Vec<Vec<u64>>,
}

impl PairingTable {
    pub(crate) fn new(g: &FiniteAbelianGroup) -> Self {
        let n = g.exponent();
        Self {
            n,
            weights: g.orders().iter().map(|&m| n / m).collect(),
            coords: g.elements().map(|e| e.coords).collect(),
        }
    }

    fn exponent_of(g: &FiniteAbelianGroup, x: &[u64], y: &[u64]) -> u64 {
        let n = g.exponent();
        let s: u128 =
            x.iter().zip(y).zip(g.orders()).map(|((&a, &b), &m)| a as u128 * b as u128 * (n / m) as u128).sum();
        (s % n as u128) as u64
    }

    pub(crate) fn exponent(&self, x: usize, y: usize) -> u64 {
        let s: u128 = self.coords[x]
            .iter()
            .zip(&self.coords[y])
            .zip(&self.weights)
            .map(|((&a, &b), &w)| (a * b % self.n) as u128 * w as u128)
            .sum();
        (s % self.n as u128) as u64
    }
}

/// A(Y, K): characters trivial on K.
pub fn annihilator(k: &Subgroup) -> Subgroup {
    let g = k.parent();
    let table = PairingTable::new(g);
    let gens: Vec<usize> = k.basis().iter().map(|(e, _)| g.index_of(e)).collect();
    let members: Vec<usize> = (0..g.size()).filter(|&y| gens.iter().all(|&x| table.exponent(x, y) == 0)).collect();
    let gens = members.iter().skip(1).map(|&i| g.element_at(i)).collect();
    Subgroup::from_members(g, members, gens)
}

/// μ̂ as a table over the dual.
#[derive(Clone, PartialEq, Eq)]
pub struct CharacteristicFunction<T: Scalar> {
    group: FiniteAbelianGroup,
    values: Vec<CyclotomicNumber<T>>,
}

impl<T: Scalar> CharacteristicFunction<T> {
    /// Wraps raw values indexed by dual element index.
    pub fn from_values(group: &FiniteAbelianGroup, values: Vec<CyclotomicNumber<T>>) -> Result<Self> {
        if values.len() != group.size() {
            return Err(Error::Dimension(format!("{} values for a group of order {}", values.len(), group.order())));
        }
        if values.iter().any(|v| v.conductor() != group.exponent()) {
            return Err(Error::Dimension("values must live in Q(ζ_N), N the exponent".into()));
        }
        Ok(Self { group: group.clone(), values })
    }

    /// The 0/1 indicator of a subgroup of the dual.
    pub fn indicator(e: &Subgroup) -> Self {
        let g = e.parent();
        let values =
            (0..g.size())
                .map(|i| {
                    if e.contains_idx(i) {
                        CyclotomicNumber::one(g.field())
                    } else {
                        CyclotomicNumber::zero(g.field())
                    }
                })
                .collect();
        Self { group: g.clone(), values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn value(&self, y: &DualElement) -> Result<&CyclotomicNumber<T>> {
        self.group.check(y)?;
        Ok(&self.values[self.group.index_of(y)])
    }

    pub(crate) fn at(&self, i: usize) -> &CyclotomicNumber<T> {
        &self.values[i]
    }

    pub fn values(&self) -> &[CyclotomicNumber<T>] {
        &self.values
    }

    pub fn conj(&self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.group.same_as(&other.group)?;
        Ok(Self {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// Checks value 1 at zero, Hermitian symmetry, and |f(y)| ≤ 1.
    pub fn check_invariants(&self) -> Result<()> {
        let g = &self.group;
        if !self.values[0].is_one() {
            return Err(Error::NotDistribution("transform is not 1 at zero".into()));
        }
        for i in 0..g.size() {
            if self.values[g.neg_idx(i)] != self.values[i].conj() {
                return Err(Error::NotDistribution(format!("f(-y) ≠ conj f(y) at {}", g.element_at(i))));
            }
            let v = &self.values[i];
            let gap = &CyclotomicNumber::one(g.field()) - &(v * &v.conj());
            if gap.real_sign() == Some(Ordering::Less) {
                return Err(Error::NotDistribution(format!("|f(y)| > 1 at {}", g.element_at(i))));
            }
        }
        Ok(())
    }

    /// The set {y : f(y) = 1} when every value is 0 or 1 and that set is a
    /// subgroup.
    pub fn zero_one_subgroup(&self) -> Option<Subgroup> {
        if !self.values.iter().all(|v| v.is_zero() || v.is_one()) {
            return None;
        }
        let members: Vec<usize> = (0..self.group.size()).filter(|&i| self.values[i].is_one()).collect();
        let s = Subgroup::from_members(&self.group, members, vec![]);
        s.is_closed().then(|| self.group.closure(s.member_indices()))
    }

    pub fn is_real_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_real())
    }
}

impl<T: Scalar> fmt::Debug for CharacteristicFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.group.elements().zip(&self.values).map(|(y, v)| (y.to_string(), v.to_string())))
            .finish()
    }
}

/// Σ_x masses[x]·(x, y) for every y.
pub fn transform<T: Scalar>(g: &FiniteAbelianGroup, masses: &[T]) -> Vec<CyclotomicNumber<T>> {
    let table = PairingTable::new(g);
    let support: Vec<usize> = (0..g.size()).filter(|&x| !masses[x].is_zero()).collect();
    (0..g.size())
        .map(|y| {
            CyclotomicNumber::from_power_sum(
                g.field(),
                support.iter().map(|&x| (table.exponent(x, y), masses[x].clone())),
            )
        })
        .collect()
}

pub fn char_fn<T: RationalField>(mu: &Distribution<T>) -> CharacteristicFunction<T> {
    let g = mu.group();
    CharacteristicFunction { group: g.clone(), values: transform(g, mu.masses()) }
}

/// μ(x) = |G|^{-1} Σ_y f(y)·conj (x, y), required to be a probability
/// distribution.
pub fn inverse_fourier<T: RationalField>(f: &CharacteristicFunction<T>) -> Result<Distribution<T>> {
    let g = f.group();
    let table = PairingTable::new(g);
    let n = g.exponent();
    let size = T::from_int(g.order() as i64);
    let mut masses = Vec::with_capacity(g.size());
    for x in 0..g.size() {
        let mut acc = CyclotomicNumber::zero(g.field());
        for y in 0..g.size() {
            let v = f.at(y);
            if v.is_zero() {
                continue;
            }
            acc = &acc + &v.mul_root((n - table.exponent(x, y)) % n);
        }
        let m = acc
            .rational_value()
            .cloned()
            .ok_or_else(|| Error::NotDistribution(format!("mass at {} is not rational", g.element_at(x))))?;
        masses.push(m / size.clone());
    }
    Distribution::new(g, masses)
}

/// E = {y : μ̂(y) = 1}, computed as the characters trivial on supp μ.
pub fn unit_set<T: RationalField>(mu: &Distribution<T>) -> Subgroup {
    let g = mu.group();
    let carrier = g.closure(&mu.support_indices());
    annihilator(&carrier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SUBGROUP_CAP;
    use crate::Rational;
    use num_traits::{One, Zero};

    fn g(orders: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(orders).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pairing_examples() {
        let z9 = g(&[9]);
        let three = z9.element(&[3]).unwrap();
        assert!(pairing::<Rational>(&z9, &three, &three).unwrap().is_one());
        for y in z9.elements() {
            assert!(pairing::<Rational>(&z9, &z9.zero(), &y).unwrap().is_one());
        }
        let h = g(&[2, 4]);
        let x = h.element(&[1, 1]).unwrap();
        let y = h.element(&[1, 2]).unwrap();
        assert_eq!(pairing_exponent(&h, &x, &y).unwrap(), 0);
        assert_eq!(pairing_exponent(&h, &x, &h.element(&[0, 1]).unwrap()).unwrap(), 1);
        assert!(pairing_exponent(&h, &z9.zero(), &y).is_err());
    }

    #[test]
    fn bilinear_and_nondegenerate() {
        for orders in [&[2, 4][..], &[3, 3], &[8], &[2, 3], &[4, 4], &[2, 2, 2]] {
            let h = g(orders);
            let n = h.exponent();
            let els: Vec<GroupElement> = h.elements().collect();
            for x in &els {
                for x2 in &els {
                    let s = h.add(x, x2).unwrap();
                    for y in &els {
                        let lhs = pairing_exponent(&h, &s, y).unwrap();
                        let rhs = (pairing_exponent(&h, x, y).unwrap() + pairing_exponent(&h, x2, y).unwrap()) % n;
                        assert_eq!(lhs, rhs);
                        assert_eq!(pairing_exponent(&h, x, y).unwrap(), pairing_exponent(&h, y, x).unwrap());
                    }
                }
                let trivial = els.iter().all(|y| pairing_exponent(&h, x, y).unwrap() == 0);
                assert_eq!(trivial, *x == h.zero());
            }
        }
    }

    #[test]
    fn annihilator_examples() {
        let z9 = g(&[9]);
        let k = z9.subgroup_generated(&[z9.element(&[3]).unwrap()]).unwrap();
        assert_eq!(annihilator(&k), k);
        assert!(annihilator(&z9.trivial_subgroup()).is_full());
        assert!(annihilator(&z9.full_subgroup()).is_trivial());
        let h = g(&[2, 4]);
        let k = h.subgroup_generated(&[h.element(&[0, 1]).unwrap()]).unwrap();
        let expect = h.subgroup_generated(&[h.element(&[1, 0]).unwrap()]).unwrap();
        assert_eq!(annihilator(&k), expect);
    }

    #[test]
    fn annihilator_matches_pairing_scan_and_is_involutive() {
        for orders in [&[2, 4][..], &[3, 3], &[9], &[2, 2, 2], &[4, 4], &[25], &[5, 5], &[2, 3, 4]] {
            let h = g(orders);
            for k in h.enumerate_subgroups(SUBGROUP_CAP).unwrap() {
                let a = annihilator(&k);
                let brute: Vec<GroupElement> =
                    h.elements().filter(|y| k.elements().all(|x| pairing_exponent(&h, &x, y).unwrap() == 0)).collect();
                assert_eq!(a.elements().collect::<Vec<_>>(), brute);
                assert_eq!(a.order() * k.order(), h.order());
                assert_eq!(annihilator(&a), k);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let z3 = g(&[3]);
        let mu = Distribution::new(&z3, vec![r(1, 2), r(1, 2), Rational::zero()]).unwrap();
        let f = char_fn(&mu);
        let expect = CyclotomicNumber::from_power_sum(z3.field(), [(0, r(1, 2)), (1, r(1, 2))]);
        assert_eq!(f.value(&z3.element(&[1]).unwrap()).unwrap(), &expect);
        f.check_invariants().unwrap();

        let z9 = g(&[9]);
        let f = char_fn(&Distribution::<Rational>::dirac(&z9, &z9.zero()).unwrap());
        assert!(f.values().iter().all(|v| v.is_one()));
        let k = z9.subgroup_generated(&[z9.element(&[3]).unwrap()]).unwrap();
        let f = char_fn(&Distribution::<Rational>::haar_on_subgroup(&k));
        assert_eq!(f, CharacteristicFunction::indicator(&annihilator(&k)));
    }

    #[test]
    fn haar_transforms_are_annihilator_indicators() {
        for orders in [&[2, 4][..], &[3, 3], &[9], &[8], &[2, 2, 2], &[5, 5]] {
            let h = g(orders);
            for k in h.enumerate_subgroups(SUBGROUP_CAP).unwrap() {
                let f = char_fn(&Distribution::<Rational>::haar_on_subgroup(&k));
                assert_eq!(f, CharacteristicFunction::indicator(&annihilator(&k)));
                assert_eq!(f.zero_one_subgroup(), Some(annihilator(&k)));
            }
        }
    }

    #[test]
    fn inversion() {
        let z5 = g(&[5]);
        let one =
            CharacteristicFunction::from_values(&z5, vec![CyclotomicNumber::<Rational>::one(z5.field()); 5]).unwrap();
        assert_eq!(inverse_fourier(&one).unwrap(), Distribution::dirac(&z5, &z5.zero()).unwrap());
        let ind = CharacteristicFunction::<Rational>::indicator(&z5.trivial_subgroup());
        assert_eq!(inverse_fourier(&ind).unwrap(), Distribution::haar(&z5));
        let haar = Distribution::<Rational>::haar(&z5);
        assert_eq!(inverse_fourier(&char_fn(&haar)).unwrap(), haar);
        // Not a transform of a distribution.
        let mut vals = vec![CyclotomicNumber::<Rational>::zero(z5.field()); 5];
        vals[0] = CyclotomicNumber::from_scalar(z5.field(), Rational::one());
        vals[1] = CyclotomicNumber::from_scalar(z5.field(), Rational::one());
        let bad = CharacteristicFunction::from_values(&z5, vals).unwrap();
        assert!(inverse_fourier(&bad).is_err());
    }

    #[test]
    fn unit_sets() {
        let h = g(&[3, 9]);
        assert!(unit_set(&Distribution::<Rational>::haar(&h)).is_trivial());
        let z9 = g(&[9]);
        let k = z9.subgroup_generated(&[z9.element(&[3]).unwrap()]).unwrap();
        assert_eq!(unit_set(&Distribution::<Rational>::haar_on_subgroup(&k)), k);
        for x in h.elements() {
            let e = unit_set(&Distribution::<Rational>::dirac(&h, &x).unwrap());
            let brute: Vec<GroupElement> = h.elements().filter(|y| pairing_exponent(&h, &x, y).unwrap() == 0).collect();
            assert_eq!(e.elements().collect::<Vec<_>>(), brute);
        }
    }

    #[test]
    fn generic_scalar_transform() {
        let z4 = g(&[4]);
        let mu = Distribution::new(&z4, vec![num_rational::Ratio::<i64>::new(1, 4); 4]).unwrap();
        let f = char_fn(&mu);
        assert!(f.values()[0].is_one());
        assert!(f.values()[1..].iter().all(|v| v.is_zero()));
    }
}
