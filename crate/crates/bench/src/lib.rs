//! Fixed inputs for the benchmarks.

use mtfib_core::corpus;
use mtfib_core::hierarchy::UpgTorus;
use mtfib_core::torus::CharacterClass;
use mtfib_core::FreeAutomorphism;

/// Mapping torus of the identity of `F_n`.
pub fn product_torus(n: usize) -> UpgTorus {
    UpgTorus::from_automorphism(&FreeAutomorphism::identity(n)).expect("identity is triangular")
}

/// `x_i -> p`, `t -> q`.
pub fn product_character(n: usize, p: i64, q: i64) -> CharacterClass {
    let mut v = vec![p; n];
    v.push(q);
    CharacterClass::from_integers(&v)
}

/// Seeded random triangular automorphisms of rank `n` with a character in Σ.
pub fn random_instances(seed: u64, n: usize, count: usize) -> Vec<(UpgTorus, CharacterClass)> {
    let mut rng = corpus::rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let a = corpus::random_triangular_automorphism(&mut rng, n, 6);
        let t = UpgTorus::from_automorphism(&a).expect("triangular");
        if let Some(v) = corpus::sample_sigma_character(&mut rng, &t) {
            out.push((t, CharacterClass::from_bigints(&v)));
        }
    }
    out
}
