//! Generalized Baumslag-Solitar groups with nontrivial center.
//!
//! A GBS graph labels each edge end with a nonzero integer: the edge
//! relation is `a_o^λo = a_τ^λτ`, conjugated by a stable letter off the
//! spanning tree. When every loop has modulus one the center is infinite
//! cyclic, generated by a common power `z` of all vertex generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bns::{GogEdge, GogVertex, GraphOfGroupsZn, SphereArrangement};
use crate::error::{Error, Result};
use crate::torus::{character_lattice_of, eval_int, UnionFind};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbsEdge {
    pub origin: usize,
    pub terminus: usize,
    pub origin_label: i64,
    pub terminus_label: i64,
    /// Stable letter name; `None` for spanning-tree edges.
    pub stable: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbsGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<GbsEdge>,
}

/// Center data for a GBS graph with trivial modular map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterData {
    /// Signed weights with `λ_o w_o = λ_τ w_τ` on every edge, base weight 1.
    pub weights: Vec<BigRational>,
    /// Least positive rational that is an integer multiple of every edge
    /// weight `λ_o w_o`.
    pub z_star: BigRational,
    /// `|Z* / w_v|` per vertex.
    pub kappa_vertices: Vec<BigInt>,
    /// `|Z* / w_e|` per edge.
    pub kappa_edges: Vec<BigInt>,
    /// `z = a_0^(Z*/w_0)` as a word in the presentation.
    pub center: Word,
}

/// `(κ, ε)` together with the orbifold Euler characteristic used for `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaEpsilon {
    pub kappa: BigInt,
    pub epsilon: BigInt,
    pub chi: BigRational,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl GbsGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<GbsEdge>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidGraphOfGroups(m));
        if vertices.is_empty() {
            return bad("no vertices".into());
        }
        let mut uf = UnionFind::new(vertices.len());
        for (k, e) in edges.iter().enumerate() {
            if e.origin >= vertices.len() || e.terminus >= vertices.len() {
                return bad(format!("edge {} has an unknown endpoint", k + 1));
            }
            if e.origin_label == 0 || e.terminus_label == 0 {
                return bad(format!("edge {} has a zero label", k + 1));
            }
            if e.stable.is_none() && !uf.union(e.origin, e.terminus) {
                return bad(format!("tree edges contain a cycle at edge {}", k + 1));
            }
        }
        let root = uf.find(0);
        if (0..vertices.len()).any(|v| uf.find(v) != root) {
            return bad("tree edges do not span the graph".into());
        }
        let g = GbsGraph { vertices, edges };
        // names are checked by the graph-of-groups constructor
        g.to_gog()?;
        Ok(g)
    }

    pub fn to_gog(&self) -> Result<GraphOfGroupsZn> {
        let one = |x: i64| vec![vec![BigInt::from(x)]];
        GraphOfGroupsZn::new(
            self.vertices
                .iter()
                .map(|n| GogVertex {
                    name: n.clone(),
                    rank: 1,
                })
                .collect(),
            self.edges
                .iter()
                .map(|e| GogEdge {
                    origin: e.origin,
                    terminus: e.terminus,
                    rank: 1,
                    into_origin: one(e.origin_label),
                    into_terminus: one(e.terminus_label),
                    stable: e.stable.clone(),
                })
                .collect(),
        )
    }

    /// Vertex generators, then stable letters in edge order.
    pub fn generators(&self) -> Vec<String> {
        self.to_gog().expect("validated").presentation().generators
    }

    pub fn relators(&self) -> Vec<Word> {
        self.to_gog().expect("validated").presentation().relators
    }

    /// `b_1` of the underlying graph.
    pub fn graph_betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// No edges, or a single loop with unit labels.
    pub fn is_syntactically_elementary(&self) -> bool {
        match self.edges.as_slice() {
            [] => true,
            [e] => {
                e.origin == e.terminus && e.origin_label.abs() == 1 && e.terminus_label.abs() == 1
            }
            _ => false,
        }
    }

    /// Spanning-tree paths from vertex 0, as signed 1-based edge letters.
    fn tree_paths(&self) -> Vec<Vec<i32>> {
        let nv = self.vertices.len();
        let mut paths: Vec<Option<Vec<i32>>> = vec![None; nv];
        paths[0] = Some(Vec::new());
        let mut changed = true;
        while changed {
            changed = false;
            for (k, e) in self.edges.iter().enumerate() {
                if e.stable.is_some() {
                    continue;
                }
                let l = (k + 1) as i32;
                let step = match (&paths[e.origin], &paths[e.terminus]) {
                    (Some(p), None) => Some((e.terminus, p.iter().copied().chain([l]).collect())),
                    (None, Some(p)) => Some((e.origin, p.iter().copied().chain([-l]).collect())),
                    _ => None,
                };
                if let Some((v, p)) = step {
                    paths[v] = Some(p);
                    changed = true;
                }
            }
        }
        paths.into_iter().map(Option::unwrap).collect()
    }

    /// Fundamental loops at vertex 0, one per non-tree edge.
    pub fn fundamental_loops(&self) -> Vec<(usize, Vec<i32>)> {
        let paths = self.tree_paths();
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.stable.is_some())
            .map(|(k, e)| {
                let mut p = paths[e.origin].clone();
                p.push((k + 1) as i32);
                p.extend(paths[e.terminus].iter().rev().map(|l| -l));
                (k, p)
            })
            .collect()
    }

    pub fn describe_path(&self, path: &[i32]) -> String {
        path.iter()
            .map(|&l| {
                let e = &self.edges[l.unsigned_abs() as usize - 1];
                let (a, b) = if l > 0 {
                    (e.origin, e.terminus)
                } else {
                    (e.terminus, e.origin)
                };
                format!("{}->{}", self.vertices[a], self.vertices[b])
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Modulus of a closed edge path: the product over its edges of the
/// terminus label over the origin label, inverted when traversed backwards.
pub fn modular_map_loop(g: &GbsGraph, path: &[i32]) -> Result<BigRational> {
    let mut acc = BigRational::one();
    let mut start = None;
    let mut at = None;
    for &l in path {
        let k = l.unsigned_abs() as usize;
        let e = g
            .edges
            .get(k.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidGraphOfGroups(format!("no edge {k}")))?;
        let (from, to, num, den) = if l > 0 {
            (e.origin, e.terminus, e.terminus_label, e.origin_label)
        } else {
            (e.terminus, e.origin, e.origin_label, e.terminus_label)
        };
        if at.is_some_and(|v| v != from) {
            return Err(Error::InvalidGraphOfGroups(
                "edge path is not connected".into(),
            ));
        }
        start.get_or_insert(from);
        at = Some(to);
        acc *= BigRational::new(BigInt::from(num), BigInt::from(den));
    }
    if start != at {
        return Err(Error::InvalidGraphOfGroups(
            "edge path is not closed".into(),
        ));
    }
    Ok(acc)
}

fn rational_lcm(xs: &[BigRational]) -> BigRational {
    let (num, den) = xs
        .iter()
        .fold((BigInt::one(), BigInt::zero()), |(n, d), x| {
            (n.lcm(x.numer()), d.gcd(x.denom()))
        });
    BigRational::new(num, den)
}

fn ratio_abs(a: &BigRational, b: &BigRational) -> Result<BigInt> {
    let q = (a / b).abs();
    if !q.is_integer() {
        return Err(Error::Internal(format!(
            "{a} is not an integer multiple of {b}"
        )));
    }
    Ok(q.to_integer())
}

/// Center data without the elementary checks.
pub fn center_data(g: &GbsGraph) -> Result<CenterData> {
    for (_, path) in g.fundamental_loops() {
        let m = modular_map_loop(g, &path)?;
        if !m.is_one() {
            return Err(Error::NontrivialModular {
                loop_desc: g.describe_path(&path),
                modulus: m.to_string(),
            });
        }
    }
    if g.edges.is_empty() {
        return Err(Error::ElementaryGbs("infinite cyclic".into()));
    }
    let nv = g.vertices.len();
    let mut weights: Vec<Option<BigRational>> = vec![None; nv];
    weights[0] = Some(BigRational::one());
    for path in g.tree_paths() {
        let mut w = BigRational::one();
        let mut at = 0;
        for l in path {
            let e = &g.edges[l.unsigned_abs() as usize - 1];
            w = if l > 0 {
                w * rat(e.origin_label) / rat(e.terminus_label)
            } else {
                w * rat(e.terminus_label) / rat(e.origin_label)
            };
            at = if l > 0 { e.terminus } else { e.origin };
        }
        weights[at] = Some(w);
    }
    let weights: Vec<BigRational> = weights.into_iter().map(Option::unwrap).collect();
    let edge_weights: Vec<BigRational> = g
        .edges
        .iter()
        .map(|e| rat(e.origin_label) * &weights[e.origin])
        .collect();
    for (e, w) in g.edges.iter().zip(&edge_weights) {
        if *w != rat(e.terminus_label) * &weights[e.terminus] {
            return Err(Error::Internal(
                "weights are inconsistent on an edge".into(),
            ));
        }
    }
    let z_star = rational_lcm(&edge_weights);
    let kappa_edges = edge_weights
        .iter()
        .map(|w| ratio_abs(&z_star, w))
        .collect::<Result<Vec<_>>>()?;
    if kappa_edges.iter().fold(BigInt::zero(), |a, k| a.gcd(k)) != BigInt::one() {
        return Err(Error::Internal("Z* is not minimal".into()));
    }
    let kappa_vertices = weights
        .iter()
        .map(|w| ratio_abs(&z_star, w))
        .collect::<Result<Vec<_>>>()?;
    let e0 = (&z_star / &weights[0]).to_integer();
    let center = Word::generator(1).pow(
        e0.to_i64()
            .ok_or_else(|| Error::Internal("center exponent overflow".into()))?,
    );
    let c = CenterData {
        weights,
        z_star,
        kappa_vertices,
        kappa_edges,
        center,
    };
    certify_center(g, &c)?;
    Ok(c)
}

/// Checks that `z` is the same power of `a_o^λo = a_τ^λτ` on both ends of
/// every edge, so it commutes with every vertex generator and stable letter.
pub fn certify_center(g: &GbsGraph, c: &CenterData) -> Result<()> {
    for (k, e) in g.edges.iter().enumerate() {
        let eo = &c.z_star / &c.weights[e.origin];
        let et = &c.z_star / &c.weights[e.terminus];
        let mo = eo / rat(e.origin_label);
        let mt = et / rat(e.terminus_label);
        if !mo.is_integer() || mo != mt {
            return Err(Error::Internal(format!(
                "center is not central at edge {}",
                k + 1
            )));
        }
    }
    Ok(())
}

/// Center of a non-elementary GBS group with trivial modular map.
pub fn center(g: &GbsGraph) -> Result<CenterData> {
    if g.is_syntactically_elementary() {
        return Err(Error::ElementaryGbs(
            "no edges, or a single loop with unit labels".into(),
        ));
    }
    let c = center_data(g)?;
    let chi = kappa_epsilon(&c).chi;
    if !chi.is_negative() {
        return Err(Error::ElementaryGbs(format!(
            "Euler characteristic {chi} of the quotient is not negative"
        )));
    }
    Ok(c)
}

pub fn kappa_epsilon(c: &CenterData) -> KappaEpsilon {
    let kappa = c.kappa_vertices.iter().fold(BigInt::one(), |a, k| a.lcm(k));
    let inv = |k: &BigInt| BigRational::new(BigInt::one(), k.clone());
    let chi = c.kappa_vertices.iter().map(inv).sum::<BigRational>()
        - c.kappa_edges.iter().map(inv).sum::<BigRational>();
    let epsilon = -(BigRational::from_integer(kappa.clone()) * &chi);
    KappaEpsilon {
        kappa,
        epsilon: epsilon.to_integer(),
        chi,
    }
}

/// `[φ(E) : φ(Z)]` with `E` generated by the vertex generators.
pub fn kappa_via_elliptic(g: &GbsGraph, c: &CenterData, values: &[BigInt]) -> Result<BigInt> {
    let phi_z = eval_int(values, &c.center);
    if phi_z.is_zero() {
        return Err(Error::Precondition(
            "the character vanishes on the center".into(),
        ));
    }
    let e = values[..g.vertices.len()]
        .iter()
        .fold(BigInt::zero(), |a, v| a.gcd(v));
    Ok(phi_z.abs() / e)
}

/// `1 + b_1(Γ)`, checked against the Smith form of the presentation.
pub fn betti(g: &GbsGraph) -> Result<usize> {
    let b = 1 + g.graph_betti();
    let smith = character_lattice_of(&g.relators(), g.generators().len()).b1;
    if smith != b {
        return Err(Error::Internal(format!(
            "graph gives b1 = {b}, presentation gives {smith}"
        )));
    }
    Ok(b)
}

/// Whether `(k, n)` can be the (monodromy order, fiber rank) of a
/// fibration.
pub fn admissible_parameters(ke: &KappaEpsilon, b1: usize, k: u64, n: u64) -> bool {
    if k == 0 || n == 0 {
        return false;
    }
    let (k, m) = (BigInt::from(k), BigInt::from(n - 1));
    if b1 == 1 {
        return k == ke.kappa && m == ke.epsilon;
    }
    let (p, r) = k.div_rem(&ke.kappa);
    r.is_zero() && p.is_positive() && m == p * &ke.epsilon
}

/// A fibration from `enumerate_fibrations`, with its certified data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbsFibration {
    pub p: u64,
    pub character: Vec<BigInt>,
    pub monodromy_order: BigInt,
    pub fiber_rank: BigInt,
}

/// `φ_p(a_v) = p w_v / g` with `g` generating the group of weights, and
/// `stable_value` on every stable letter.
pub fn enumerate_fibrations(
    g: &GbsGraph,
    c: &CenterData,
    p: u64,
    stable_value: i64,
) -> Result<GbsFibration> {
    let b1 = betti(g)?;
    if p == 0 || (b1 == 1 && p != 1) {
        return Err(Error::Precondition(format!(
            "p = {p} is not available with b1 = {b1}; only p = 1 when b1 = 1"
        )));
    }
    let gen = rational_gcd(&c.weights);
    let pp = BigRational::from_integer(BigInt::from(p));
    let mut values: Vec<BigInt> = c
        .weights
        .iter()
        .map(|w| (&pp * w / &gen).to_integer())
        .collect();
    values.extend(std::iter::repeat_n(
        BigInt::from(stable_value),
        g.graph_betti(),
    ));
    let rels = g.relators();
    for (i, r) in rels.iter().enumerate() {
        if !eval_int(&values, r).is_zero() {
            return Err(Error::Internal(format!(
                "constructed character fails relator {}",
                i + 1
            )));
        }
    }
    if values.iter().fold(BigInt::zero(), |a, v| a.gcd(v)) != BigInt::one() {
        return Err(Error::Precondition(format!(
            "the character for p = {p} with stable value {stable_value} is not surjective"
        )));
    }
    let ke = kappa_epsilon(c);
    let order = monodromy_order(c, &values)?;
    let pb = BigInt::from(p);
    if order != &pb * &ke.kappa {
        return Err(Error::Internal(format!(
            "monodromy order {order} differs from p·κ"
        )));
    }
    Ok(GbsFibration {
        p,
        character: values,
        monodromy_order: order,
        fiber_rank: pb * ke.epsilon + 1,
    })
}

fn rational_gcd(xs: &[BigRational]) -> BigRational {
    let (num, den) = xs
        .iter()
        .fold((BigInt::zero(), BigInt::one()), |(n, d), x| {
            (n.gcd(x.numer()), d.lcm(x.denom()))
        });
    BigRational::new(num, den)
}

/// `|φ(z)|` for a surjective `φ`.
pub fn monodromy_order(c: &CenterData, values: &[BigInt]) -> Result<BigInt> {
    let g = values.iter().fold(BigInt::zero(), |a, v| a.gcd(v));
    if !g.is_one() {
        return Err(Error::Precondition(format!(
            "character is not surjective (values share the factor {g}); divide by it first"
        )));
    }
    let z = eval_int(values, &c.center);
    if z.is_zero() {
        return Err(Error::Precondition(
            "the character vanishes on the center".into(),
        ));
    }
    Ok(z.abs())
}

/// `Σ(G)^c = S(G, Z)`: the single sphere normal to the center.
pub fn gbs_sigma_arrangement(g: &GbsGraph, c: &CenterData) -> Result<SphereArrangement> {
    let lattice = character_lattice_of(&g.relators(), g.generators().len());
    SphereArrangement::new(lattice.b1, &[lattice.pairing(&c.center)])
}
