//! The small groups every sweep runs over.

use crate::group::FiniteAbelianGroup;
use crate::morphism::{automorphisms_or_sample, Homomorphism};

/// Enumerate Aut(G) fully up to this many elements, otherwise sample.
pub const FULL_AUT_LIMIT: u64 = 500;
pub const AUT_SAMPLES: usize = 100;

/// Cyclic factor orders of the catalog groups.
pub const CATALOG: [&[i64]; 10] = [&[3], &[4], &[5], &[2, 2], &[8], &[9], &[3, 3], &[2, 4], &[25], &[5, 5]];

pub fn catalog() -> Vec<FiniteAbelianGroup> {
    CATALOG.iter().map(|o| FiniteAbelianGroup::new(o).expect("catalog orders are valid")).collect()
}

/// Every automorphism when there are at most FULL_AUT_LIMIT, else a
/// seeded sample of AUT_SAMPLES.
pub fn catalog_automorphisms(g: &FiniteAbelianGroup, seed: u64) -> Vec<Homomorphism> {
    automorphisms_or_sample(g, FULL_AUT_LIMIT, AUT_SAMPLES, seed)
}
