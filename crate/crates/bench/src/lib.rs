//! Shared inputs for the benchmarks.

use kruskal_cert::generators::{random_family, rng_from_seed};
use kruskal_cert::{Field, ProductFamily, Result};

/// A seeded random family over GF(p).
pub fn random_gf(p: u64, dims: &[usize], n: usize, seed: u64) -> Result<ProductFamily> {
    random_family(Field::prime(p)?, dims, n, &mut rng_from_seed(seed))
}

/// A seeded random family over the rationals.
pub fn random_q(dims: &[usize], n: usize, seed: u64) -> Result<ProductFamily> {
    random_family(Field::Rational, dims, n, &mut rng_from_seed(seed))
}
