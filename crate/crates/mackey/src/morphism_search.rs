//! Search for an invertible morphism inside a hom-space basis.
//!
//! When two functors are isomorphic, a generic rational combination of a
//! hom-space basis is invertible, so a seeded random search over small
//! integer coefficients finds a certificate quickly and deterministically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::rat;
use crate::mackey::MackeyMorphism;

const SEARCH_SEED: u64 = 0x6d61636b6579; // stable across runs
const MAX_ATTEMPTS: usize = 400;

/// Returns an invertible combination of the basis morphisms, or `None`
/// if none is found (in particular when no isomorphism exists).
pub fn find_invertible(basis: &[MackeyMorphism]) -> Option<MackeyMorphism> {
    if basis.is_empty() {
        return None;
    }
    // Square components are a precondition for invertibility.
    if basis[0].components.iter().any(|c| c.rows() != c.cols()) {
        return None;
    }
    for candidate in basis {
        if candidate.is_invertible() {
            return Some(candidate.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<i64> = (0..basis.len()).map(|_| rng.gen_range(-4..=4)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let combo = combine(basis, &coeffs);
        if combo.is_invertible() {
            return Some(combo);
        }
    }
    None
}

/// Integer linear combination of morphisms (all over the same functor pair).
pub fn combine(basis: &[MackeyMorphism], coeffs: &[i64]) -> MackeyMorphism {
    assert_eq!(basis.len(), coeffs.len());
    let mut components = basis[0]
        .components
        .iter()
        .map(|c| c.scale(&rat(coeffs[0])))
        .collect::<Vec<_>>();
    for (m, &c) in basis.iter().zip(coeffs.iter()).skip(1) {
        for (acc, comp) in components.iter_mut().zip(m.components.iter()) {
            *acc = acc.add(&comp.scale(&rat(c)));
        }
    }
    MackeyMorphism { components }
}
