use std::cmp::Ordering;

use heyde::duality::transform;
use heyde::gaussian::{gaussian_condition, solenoid_pair_condition, solenoid_window, window_verify};
use heyde::heyde::{conditional_symmetry_oracle, heyde_equation_holds};
use heyde::morphism::{adjoint_law_holds, sample_automorphisms};
use heyde::{
    char_fn, inverse_fourier, Cyclotomic, Dist, FiniteAbelianGroup, GaussianSpec, Homomorphism, Instance,
    LatticeAutomorphism, Rational,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPES: &[&[i64]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 2, 2],
    &[4, 4],
    &[3, 9],
    &[5, 5],
    &[12],
    &[15],
    &[2, 6],
    &[27],
    &[25],
    &[2, 2, 4],
];

fn group() -> impl Strategy<Value = FiniteAbelianGroup> {
    prop::sample::select(SHAPES).prop_map(|o| FiniteAbelianGroup::new(o).unwrap())
}

fn auto(g: &FiniteAbelianGroup, seed: u64) -> Homomorphism {
    sample_automorphisms(g, 1, seed).remove(0)
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(g in group(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let n = g.order();
        let (x, y, z) = (g.element_at((a % n) as usize), g.element_at((b % n) as usize), g.element_at((c % n) as usize));
        let xy = g.add(&x, &y).unwrap();
        prop_assert_eq!(g.add(&xy, &z).unwrap(), g.add(&x, &g.add(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(&xy, &g.add(&y, &x).unwrap());
        prop_assert_eq!(g.add(&x, &g.zero()).unwrap(), x.clone());
        prop_assert_eq!(g.add(&x, &g.neg(&x).unwrap()).unwrap(), g.zero());
    }

    #[test]
    fn fourier_round_trip(g in group(), seed in any::<u64>(), bound in 1u64..6) {
        let mu = Dist::random(&g, seed, bound).unwrap();
        prop_assert_eq!(inverse_fourier(&char_fn(&mu)).unwrap(), mu);
    }

    #[test]
    fn convolution_theorem(g in group(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (Dist::random(&g, s1, 3).unwrap(), Dist::random(&g, s2, 3).unwrap());
        prop_assert_eq!(char_fn(&a.convolve(&b).unwrap()), char_fn(&a).mul(&char_fn(&b)).unwrap());
    }

    #[test]
    fn transform_invariants(g in group(), seed in any::<u64>()) {
        let mu = Dist::random(&g, seed, 4).unwrap();
        let f = char_fn(&mu);
        f.check_invariants().unwrap();
        // ν = μ * μ̄ has transform |μ̂|², real, nonnegative, even, at most 1.
        let nu = char_fn(&mu.convolve(&mu.reflect()).unwrap());
        for (i, y) in g.elements().enumerate() {
            let v = &nu.values()[i];
            prop_assert_eq!(v, &(&f.values()[i] * &f.values()[i].conj()));
            prop_assert!(v.is_real_nonnegative());
            prop_assert_eq!(v, nu.value(&g.neg(&y).unwrap()).unwrap());
            let slack = &Cyclotomic::one(g.field()) - v;
            prop_assert!(matches!(slack.real_sign(), Some(Ordering::Greater | Ordering::Equal)));
        }
    }

    #[test]
    fn generic_transform_agrees(g in group(), seed in any::<u64>()) {
        let mu = Dist::random(&g, seed, 4).unwrap();
        let (w, d) = mu.integer_weights();
        let scaled = transform(&g, &w);
        for (a, b) in scaled.iter().zip(char_fn(&mu).values()) {
            prop_assert_eq!(&a.to_rational_coeffs(), &b.scale(&Rational::from_integer(d.clone())));
        }
    }

    #[test]
    fn equation_matches_oracle(g in group(), aseed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>(), bound in 1u64..4) {
        let alpha = auto(&g, aseed);
        let inst = Instance::new(&alpha, Dist::random(&g, s1, bound).unwrap(), Dist::random(&g, s2, bound).unwrap()).unwrap();
        let eq = heyde_equation_holds(&inst).unwrap();
        let or = conditional_symmetry_oracle(&inst);
        prop_assert_eq!(eq.symmetric, or.symmetric);
        prop_assert!(eq.witness_rechecks(&inst) && or.witness_rechecks(&inst));
        // Reflecting both laws conjugates every transform.
        let refl = Instance::new(&alpha, inst.mu1().reflect(), inst.mu2().reflect()).unwrap();
        prop_assert_eq!(conditional_symmetry_oracle(&refl).symmetric, or.symmetric);
    }

    #[test]
    fn structured_pairs_match(g in group(), aseed in any::<u64>(), i in any::<u64>(), j in any::<u64>()) {
        // Haar shifts are where symmetric pairs actually occur.
        let alpha = auto(&g, aseed);
        let subs = g.enumerate_subgroups(heyde::group::SUBGROUP_CAP).unwrap();
        let k = &subs[(i % subs.len() as u64) as usize];
        let m = Dist::haar_on_subgroup(k);
        let x = g.element_at((j % g.order()) as usize);
        let inst = Instance::new(&alpha, m.shift(&x).unwrap(), m.clone()).unwrap();
        prop_assert_eq!(heyde_equation_holds(&inst).unwrap().symmetric, conditional_symmetry_oracle(&inst).symmetric);
    }

    #[test]
    fn adjoint_laws(g in group(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (auto(&g, s1), auto(&g, s2));
        prop_assert!(adjoint_law_holds(&a, &a.adjoint()));
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        prop_assert_eq!(a.compose(&b).unwrap().adjoint(), b.adjoint().compose(&a.adjoint()).unwrap());
        prop_assert!(a.adjoint().is_automorphism());
    }

    #[test]
    fn solenoid_closed_form_matches_window(n1 in 0i64..8, n2 in 0i64..8, an in -9i64..9, ad in 1i64..5, hit in any::<bool>()) {
        let (s1, s2) = (rat(n1, 3), rat(n2, 2));
        let alpha = if an == 0 { rat(1, ad) } else { rat(an, ad) };
        // Half the cases sit on σ1 + ασ2 = 0.
        let (s1, alpha) = if hit && !s2.is_zero() && !s1.is_zero() { (s1.clone(), -(s1 / &s2)) } else { (s1, alpha) };
        let samples = vec![(rat(1, 1), rat(1, 1)), (rat(-2, 3), rat(5, 7))];
        prop_assert_eq!(
            solenoid_pair_condition(&s1, &s2, &alpha).unwrap(),
            solenoid_window(&s1, &s2, &alpha, &samples).unwrap()
        );
    }
}

/// Random unimodular matrix as a product of elementary row operations.
fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let k = rng.gen_range(-1..=1);
            let row = m[j].clone();
            m[i].iter_mut().zip(&row).for_each(|(x, y)| *x += k * y);
        } else if rng.gen_bool(0.5) {
            m[i].iter_mut().for_each(|x| *x = -*x);
        }
    }
    m
}

fn gram(b: &[Vec<i64>], den: i64) -> GaussianSpec {
    let n = b.len();
    let a = (0..n).map(|i| (0..n).map(|j| rat((0..n).map(|k| b[i][k] * b[j][k]).sum(), den)).collect()).collect();
    GaussianSpec::new(a).unwrap()
}

#[test]
fn gaussian_closed_form_matches_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut positives = 0;
    for n in 1..=3usize {
        for t in 0..200 {
            let (a1, a2, alpha) = if t % 4 == 0 {
                // α̃ = −CCᵀ with C unimodular, A2 = sI, A1 = sCCᵀ.
                let c = unimodular(&mut rng, n);
                let cct: Vec<Vec<i64>> =
                    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| c[i][k] * c[j][k]).sum()).collect()).collect();
                let s = rng.gen_range(1..4);
                let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
                let alpha =
                    LatticeAutomorphism::new(cct.iter().map(|r| r.iter().map(|x| -x).collect()).collect()).unwrap();
                (gram(&c, 1).scaled(s), gram(&id, 1).scaled(s), alpha)
            } else {
                let b1: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
                let b2: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
                (
                    gram(&b1, rng.gen_range(1..4)),
                    gram(&b2, rng.gen_range(1..4)),
                    LatticeAutomorphism::new(unimodular(&mut rng, n)).unwrap(),
                )
            };
            let c = gaussian_condition(&a1, &a2, &alpha).unwrap();
            let w = window_verify(&a1, &a2, &alpha, 5).unwrap();
            assert_eq!(c.holds, w.holds, "n = {n}, trial {t}");
            // A1 = −α̃ᵀA2 with A1 symmetric forces α̃ᵀA2 symmetric.
            if c.holds {
                assert!(c.cross_symmetric);
                positives += 1;
            }
        }
    }
    assert!(positives >= 150);
}

trait Scaled {
    fn scaled(self, s: i64) -> Self;
}

impl Scaled for GaussianSpec {
    fn scaled(self, s: i64) -> Self {
        let r = Rational::from_integer(s.into());
        GaussianSpec::new(self.matrix().iter().map(|row| row.iter().map(|x| x * &r).collect()).collect()).unwrap()
    }
}

#[test]
fn zero_forms_pass_any_window() {
    let z = GaussianSpec::new(vec![vec![Rational::zero(); 2]; 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let a = LatticeAutomorphism::new(unimodular(&mut rng, 2)).unwrap();
        assert!(window_verify(&z, &z, &a, 3).unwrap().holds);
    }
}
