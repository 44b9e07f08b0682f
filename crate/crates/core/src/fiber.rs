//! Fibrations of polynomially growing mapping tori: membership, fiber rank
//! from the edge elements, and the Bass-Serre count of the kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{HierarchyNode, NodeKind, UpgTorus};
use crate::torus::{eval_int, CharacterClass};
use crate::words::Word;

pub const NOT_IN_SIGMA_TEXT: &str = "not in Σ(G); kernel virtually surjects onto F∞";

/// `[φ(G) : φ(H)]` for `H` generated by `generators`, assuming `φ(G) = Z`.
/// `None` marks infinite index.
pub fn relative_index(values: &[BigInt], generators: &[Word]) -> Option<BigInt> {
    let g = generators
        .iter()
        .fold(BigInt::zero(), |acc, w| acc.gcd(&eval_int(values, w)));
    (!g.is_zero()).then_some(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FiberVerdict {
    InSigma {
        rank: u64,
        k: u64,
        /// `[G : t_i]_φ` in stratum order.
        indices: Vec<u64>,
    },
    NotInSigma {
        /// 1-based position of an edge element killed by `φ`.
        witness: usize,
        /// Rational input is always discrete; kept for the report format.
        discrete: bool,
    },
}

impl FiberVerdict {
    pub fn rank(&self) -> Option<u64> {
        match self {
            FiberVerdict::InSigma { rank, .. } => Some(*rank),
            FiberVerdict::NotInSigma { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// The primitive integer character actually classified.
    pub character: Vec<BigInt>,
    /// Set when the input was not already primitive.
    pub normalized: bool,
    pub verdict: FiberVerdict,
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Internal(format!("{x} does not fit in 64 bits")))
}

/// Validates `phi` on the presentation of `G` and returns it primitive.
pub fn normalize(torus: &UpgTorus, phi: &CharacterClass) -> Result<(Vec<BigInt>, bool)> {
    phi.validate(&torus.presentation)?;
    phi.primitive()
}

pub fn classify(torus: &UpgTorus, phi: &CharacterClass) -> Result<Classification> {
    let (values, normalized) = normalize(torus, phi)?;
    let mut indices = Vec::new();
    let mut witness = None;
    for (i, t) in torus.edge_elements().iter().enumerate() {
        let v = eval_int(&values, t).abs();
        if v.is_zero() && witness.is_none() {
            witness = Some(i + 1);
        }
        indices.push(v);
    }
    let verdict = match witness {
        Some(witness) => FiberVerdict::NotInSigma {
            witness,
            discrete: true,
        },
        None => {
            let total: BigInt = indices.iter().sum();
            let k = BigInt::from(torus.k);
            let (q, r) = total.div_rem(&k);
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "index sum {total} is not divisible by k = {}",
                    torus.k
                )));
            }
            FiberVerdict::InSigma {
                rank: to_u64(&(q + 1))?,
                k: torus.k,
                indices: indices.iter().map(to_u64).collect::<Result<_>>()?,
            }
        }
    };
    Ok(Classification {
        character: values,
        normalized,
        verdict,
    })
}

/// Orbit counts for the action of the kernel on one Bass-Serre tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionNode {
    /// `hnn`, `amalgam` or `leaf`.
    pub kind: String,
    /// Top edge name, or the leaf's vertex name.
    pub label: String,
    /// `[φ(G_S) : φ(G_child)]` per child.
    pub vertex_orbits: Vec<u64>,
    /// `[φ(G_S) : φ(t_e)]`.
    pub edge_orbits: u64,
    /// Betti number of the quotient graph, plus the children's weighted by
    /// their vertex orbits.
    pub betti: u64,
    /// Free `Z` factors (leaf kernels), weighted the same way.
    pub z_factors: u64,
    pub children: Vec<DecompositionNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDecomposition {
    pub k: u64,
    /// `φ(G_{α^k}) = scale · Z`.
    pub scale: u64,
    pub root: DecompositionNode,
    /// Rank of the kernel restricted to `G_{α^k}`: `betti + z_factors`.
    pub filtered_rank: u64,
    /// Rank of `ker φ`, from `r - 1 = (r_k - 1) · scale / k`.
    pub rank: u64,
}

fn group_image(values: &[BigInt], node: &HierarchyNode) -> Result<BigInt> {
    relative_index(values, &node.group_generators)
        .ok_or_else(|| Error::Internal("character vanishes on a hierarchy piece".into()))
}

fn orbits(big: &BigInt, small: &BigInt) -> Result<u64> {
    let (q, r) = big.div_rem(small);
    if !r.is_zero() {
        return Err(Error::Internal(format!("{small} does not divide {big}")));
    }
    to_u64(&q)
}

fn decompose(
    torus: &UpgTorus,
    values: &[BigInt],
    node: &HierarchyNode,
) -> Result<DecompositionNode> {
    let g = group_image(values, node)?;
    let f = &torus.filtered;
    match &node.kind {
        NodeKind::Leaf { vertex, .. } => Ok(DecompositionNode {
            kind: "leaf".into(),
            label: f.vertices()[*vertex].clone(),
            vertex_orbits: Vec::new(),
            edge_orbits: 0,
            betti: 0,
            z_factors: 1,
            children: Vec::new(),
        }),
        NodeKind::Hnn {
            edge, edge_element, ..
        }
        | NodeKind::Amalgam {
            edge, edge_element, ..
        } => {
            let te = eval_int(values, edge_element).abs();
            if te.is_zero() {
                return Err(Error::Precondition(format!(
                    "edge element of {} is killed by the character",
                    f.edges()[*edge].name
                )));
            }
            let edge_orbits = orbits(&te, &g)?;
            let mut vertex_orbits = Vec::new();
            let mut children = Vec::new();
            let (mut betti, mut z_factors) = (0u64, 0u64);
            for c in node.children() {
                let v = orbits(&group_image(values, c)?, &g)?;
                let d = decompose(torus, values, c)?;
                betti += v * d.betti;
                z_factors += v * d.z_factors;
                vertex_orbits.push(v);
                children.push(d);
            }
            let vsum: u64 = vertex_orbits.iter().sum();
            // the quotient graph is connected, so E - V + 1 >= 0
            betti += (edge_orbits + 1).checked_sub(vsum).ok_or_else(|| {
                Error::Internal("quotient graph with negative Betti number".into())
            })?;
            let kind = if matches!(node.kind, NodeKind::Hnn { .. }) {
                "hnn"
            } else {
                "amalgam"
            };
            Ok(DecompositionNode {
                kind: kind.into(),
                label: f.edges()[*edge].name.clone(),
                vertex_orbits,
                edge_orbits,
                betti,
                z_factors,
                children,
            })
        }
    }
}

/// Counts orbits of `ker φ` on the Bass-Serre trees of the hierarchy of
/// `α^k`, giving the kernel as a free product of `Z`s and a free group.
pub fn kernel_decomposition(torus: &UpgTorus, phi: &CharacterClass) -> Result<KernelDecomposition> {
    let c = classify(torus, phi)?;
    if let FiberVerdict::NotInSigma { witness, .. } = c.verdict {
        return Err(Error::Precondition(format!(
            "character kills edge element t{witness}; {NOT_IN_SIGMA_TEXT}"
        )));
    }
    let pulled = torus.pull_back(&c.character);
    let scale = pulled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if scale.is_zero() {
        return Err(Error::Internal(
            "character vanishes on the finite-index subgroup".into(),
        ));
    }
    let values: Vec<BigInt> = pulled.iter().map(|v| v / &scale).collect();
    let root = decompose(torus, &values, &torus.hierarchy.root)?;
    let filtered_rank = root.betti + root.z_factors;
    let scale = to_u64(&scale)?;
    let num = (filtered_rank - 1) * scale;
    if num % torus.k != 0 {
        return Err(Error::Internal(format!(
            "(r_k - 1) * {scale} = {num} is not divisible by k = {}",
            torus.k
        )));
    }
    Ok(KernelDecomposition {
        k: torus.k,
        scale,
        root,
        filtered_rank,
        rank: num / torus.k + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::torus::circle_example;
    use crate::words::FreeAutomorphism;
    use proptest::prelude::*;

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l.iter().copied())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn fn_times_z(n: usize) -> UpgTorus {
        UpgTorus::from_automorphism(&FreeAutomorphism::identity(n)).unwrap()
    }

    fn phi_pq(n: usize, p: i64, q: i64) -> CharacterClass {
        let mut v = vec![p; n];
        v.push(q);
        CharacterClass::from_integers(&v)
    }

    #[test]
    fn relative_index_examples() {
        // generators x1, t
        assert_eq!(
            relative_index(&ints(&[0, 3]), &[w(&[2])]),
            Some(BigInt::from(3))
        );
        assert_eq!(relative_index(&ints(&[0, 3]), &[w(&[1])]), None);
        assert_eq!(
            relative_index(&ints(&[3, 1]), &[w(&[2, 2]), w(&[1])]),
            Some(BigInt::from(1))
        );
    }

    #[test]
    fn product_family() {
        for n in 2..5 {
            let torus = fn_times_z(n);
            for (p, q) in [(1, 1), (2, 3), (5, 2), (1, 4)] {
                let c = classify(&torus, &phi_pq(n, p, q)).unwrap();
                let expected = (q as u64) * (n as u64 - 1) + 1;
                assert_eq!(c.verdict.rank(), Some(expected));
                assert_eq!(
                    kernel_decomposition(&torus, &phi_pq(n, p, q)).unwrap().rank,
                    expected
                );
            }
        }
    }

    #[test]
    fn product_decomposition_shape() {
        let torus = fn_times_z(2);
        let d = kernel_decomposition(&torus, &CharacterClass::from_integers(&[0, 0, 1])).unwrap();
        assert_eq!(d.root.kind, "hnn");
        assert_eq!(d.root.vertex_orbits, vec![1]);
        assert_eq!(d.root.edge_orbits, 1);
        assert_eq!((d.root.betti, d.root.z_factors, d.rank), (1, 1, 2));
        let one = UpgTorus::from_automorphism(&FreeAutomorphism::identity(1)).unwrap();
        let d = kernel_decomposition(&one, &CharacterClass::from_integers(&[2, 3])).unwrap();
        assert_eq!((d.root.kind.as_str(), d.rank), ("leaf", 1));
    }

    #[test]
    fn swap_has_order_two() {
        let swap = FreeAutomorphism::new(2, vec![w(&[2]), w(&[1])]).unwrap();
        let torus = UpgTorus::from_automorphism(&swap).unwrap();
        assert_eq!(torus.k, 2);
        assert_eq!(torus.edge_elements(), vec![w(&[3, 3])]);
        let phi = CharacterClass::from_integers(&[0, 0, 1]);
        let c = classify(&torus, &phi).unwrap();
        assert_eq!(
            c.verdict,
            FiberVerdict::InSigma {
                rank: 2,
                k: 2,
                indices: vec![2]
            }
        );
        assert_eq!(kernel_decomposition(&torus, &phi).unwrap().rank, 2);
        // x1 + x2 and t: kernel of φ(x_i) = 1, φ(t) = 1
        let psi = CharacterClass::from_integers(&[1, 1, 1]);
        assert_eq!(classify(&torus, &psi).unwrap().verdict.rank(), Some(2));
        assert_eq!(kernel_decomposition(&torus, &psi).unwrap().rank, 2);
    }

    #[test]
    fn not_in_sigma() {
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        let torus = UpgTorus::from_automorphism(&a).unwrap();
        let c = classify(&torus, &CharacterClass::from_integers(&[0, 1, 0])).unwrap();
        assert_eq!(
            c.verdict,
            FiberVerdict::NotInSigma {
                witness: 1,
                discrete: true
            }
        );
        assert!(kernel_decomposition(&torus, &CharacterClass::from_integers(&[0, 1, 0])).is_err());
        assert!(matches!(
            classify(&torus, &CharacterClass::from_integers(&[1, 0, 0])),
            Err(Error::RelatorNotKilled { .. })
        ));
    }

    #[test]
    fn scaling_is_normalized() {
        let torus = fn_times_z(3);
        let base = classify(&torus, &phi_pq(3, 1, 2)).unwrap();
        assert!(!base.normalized);
        for lambda in [2, 5, 7] {
            let c = classify(&torus, &phi_pq(3, lambda, 2 * lambda)).unwrap();
            assert!(c.normalized);
            assert_eq!(c.verdict, base.verdict);
            assert_eq!(c.character, base.character);
        }
    }

    #[test]
    fn circle_ranks() {
        for nv in 2..5 {
            let torus = UpgTorus::from_filtered(&circle_example(nv)).unwrap();
            let phi0 = CharacterClass::from_bigints(&torus.canonical_fibration());
            let c = classify(&torus, &phi0).unwrap();
            assert_eq!(c.verdict.rank(), Some(torus.rank() as u64));
        }
    }

    proptest! {
        #[test]
        fn hierarchy_and_bass_serre_agree(seed in 0u64..10_000, n in 2usize..5) {
            let mut rng = corpus::rng(seed);
            let a = corpus::random_triangular_automorphism(&mut rng, n, 4);
            let torus = UpgTorus::from_automorphism(&a).unwrap();
            let lattice = crate::torus::character_lattice(&torus.presentation);
            let coords = corpus::random_vector(&mut rng, lattice.b1, 4);
            let values = lattice.character(&coords);
            prop_assume!(values.iter().any(|v| !v.is_zero()));
            let phi = CharacterClass::from_bigints(&values);
            let c = classify(&torus, &phi).unwrap();
            if let Some(r) = c.verdict.rank() {
                prop_assert!(r >= n as u64);
                prop_assert_eq!(kernel_decomposition(&torus, &phi).unwrap().rank, r);
            }
        }

        #[test]
        fn filtered_maps_agree(seed in 0u64..10_000, extra in 0u64..1000) {
            let f = corpus::random_filtered_map(seed, 4, 4);
            let torus = UpgTorus::from_filtered(&f).unwrap();
            let lattice = crate::torus::character_lattice(&torus.presentation);
            let coords = corpus::random_vector(&mut corpus::rng(extra), lattice.b1, 3);
            let values = lattice.character(&coords);
            prop_assume!(values.iter().any(|v| !v.is_zero()));
            let phi = CharacterClass::from_bigints(&values);
            let c = classify(&torus, &phi).unwrap();
            if let Some(r) = c.verdict.rank() {
                prop_assert!(r >= f.rank() as u64);
                prop_assert_eq!(kernel_decomposition(&torus, &phi).unwrap().rank, r);
            }
        }
    }
}
