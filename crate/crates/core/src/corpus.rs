//! Seeded random inputs for property tests, the acceptance corpus and the
//! `corpus` command.

use std::collections::VecDeque;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_integer::Integer;
use num_traits::Zero;

use crate::hierarchy::UpgTorus;
use crate::torus::{character_lattice, eval_int, Edge, FilteredGraphMap};
use crate::words::{FreeAutomorphism, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A freely reduced word of length at most `max_len` in `x_1 .. x_k`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, k: usize, max_len: usize) -> Word {
    if k == 0 {
        return Word::identity();
    }
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(1..=k) as i32;
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// `x_i -> x_i u_i` with `u_i` a random word in `x_1 .. x_{i-1}`.
pub fn random_triangular_automorphism<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_len: usize,
) -> FreeAutomorphism {
    let images = (1..=n)
        .map(|i| Word::generator(i).mul(&random_word(rng, i - 1, max_len)))
        .collect();
    FreeAutomorphism::new(n, images).expect("triangular images are invertible")
}

/// A connected graph with `1..=max_vertices` vertices and rank
/// `1..=max_rank` in random stratum order, with suffixes that are random
/// closed walks in the lower strata.
pub fn random_filtered_map(seed: u64, max_vertices: usize, max_rank: usize) -> FilteredGraphMap {
    let mut rng = rng(seed);
    let nv = rng.gen_range(1..=max_vertices.max(1));
    let rank = rng.gen_range(1..=max_rank.max(1));
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for v in 1..nv {
        let u = rng.gen_range(0..v);
        ends.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    for _ in 0..rank {
        ends.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    ends.shuffle(&mut rng);
    let vertices = (0..nv).map(|v| format!("v{v}")).collect();
    let edges: Vec<Edge> = ends
        .iter()
        .enumerate()
        .map(|(k, &(o, t))| Edge {
            name: format!("e{}", k + 1),
            origin: o,
            terminus: t,
        })
        .collect();
    let suffixes = (0..edges.len())
        .map(|i| random_closed_walk(&mut rng, nv, &edges[..i], edges[i].terminus, 6))
        .collect();
    FilteredGraphMap::new(vertices, edges, suffixes).expect("generated map is valid")
}

/// Random walk from `base` over `edges`, closed up along a shortest path.
fn random_closed_walk<R: Rng + ?Sized>(
    rng: &mut R,
    nv: usize,
    edges: &[Edge],
    base: usize,
    max_steps: usize,
) -> Word {
    let steps_at = |v: usize| -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            let l = (k + 1) as i32;
            if e.origin == v {
                out.push((l, e.terminus));
            }
            if e.terminus == v {
                out.push((-l, e.origin));
            }
        }
        out
    };
    let mut at = base;
    let mut letters = Vec::new();
    for _ in 0..rng.gen_range(0..=max_steps) {
        let options = steps_at(at);
        let Some(&(l, next)) = options.choose(rng) else {
            break;
        };
        letters.push(l);
        at = next;
    }
    // shortest path back to base
    let mut prev: Vec<Option<(i32, usize)>> = vec![None; nv];
    let mut queue = VecDeque::from([at]);
    let mut seen = vec![false; nv];
    seen[at] = true;
    while let Some(v) = queue.pop_front() {
        if v == base {
            break;
        }
        for (l, next) in steps_at(v) {
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some((l, v));
                queue.push_back(next);
            }
        }
    }
    let mut back = Vec::new();
    let mut v = base;
    while v != at {
        let (l, from) = prev[v].expect("walk stays in one component");
        back.push(l);
        v = from;
    }
    back.reverse();
    letters.extend(back);
    Word::from_letters(letters)
}

/// Random integer vector with entries in `-bound..=bound`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// A primitive integer character in `Σ(G)` with lattice coordinates in
/// `-4..=4`, or `None` after 50 misses.
pub fn sample_sigma_character<R: Rng + ?Sized>(rng: &mut R, t: &UpgTorus) -> Option<Vec<BigInt>> {
    let lattice = character_lattice(&t.presentation);
    let edges = t.edge_elements();
    for _ in 0..50 {
        let v = lattice.character(&random_vector(rng, lattice.b1, 4));
        let g = v.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
        if g.is_zero() {
            continue;
        }
        let v: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
        if edges.iter().all(|e| !eval_int(&v, e).is_zero()) {
            return Some(v);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_maps_are_valid() {
        for seed in 0..200 {
            let f = random_filtered_map(seed, 5, 4);
            assert!(f.rank() >= 1);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(random_filtered_map(9, 4, 4), random_filtered_map(9, 4, 4));
        let a = random_triangular_automorphism(&mut rng(3), 4, 4);
        let b = random_triangular_automorphism(&mut rng(3), 4, 4);
        assert_eq!(a, b);
    }
}
