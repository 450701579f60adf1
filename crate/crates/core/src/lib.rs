//! Exact harmonic analysis on finite abelian groups and Heyde-type
//! conditional-symmetry checks.

pub mod arith;
pub mod catalog;
pub mod cyclotomic;
pub mod distribution;
pub mod duality;
pub mod error;
pub mod gaussian;
pub mod group;
pub mod heyde;
pub mod morphism;
mod real;
pub mod scalar;

pub use cyclotomic::{CyclotomicField, CyclotomicNumber};
pub use distribution::Distribution;
pub use duality::{annihilator, char_fn, inverse_fourier, pairing, unit_set, CharacteristicFunction, DualElement};
pub use error::{Error, Result};
pub use gaussian::{LatticeAutomorphism, QuadraticGaussianSpec};
pub use group::{FiniteAbelianGroup, GroupElement, Subgroup};
pub use heyde::{HeydeInstance, SymmetryVerdict};
pub use morphism::Homomorphism;
pub use scalar::{RationalField, Scalar};

/// Exact rational scalar used by default.
pub type Rational = num_rational::BigRational;
/// Character values over the default scalar.
pub type Cyclotomic = CyclotomicNumber<Rational>;
/// Distribution with arbitrary-precision rational masses.
pub type Dist = Distribution<Rational>;
/// Characteristic function over the default scalar.
pub type CharFn = CharacteristicFunction<Rational>;
pub type Instance = HeydeInstance<Rational>;
pub type GaussianSpec = QuadraticGaussianSpec<Rational>;
