//! Filtered graph maps, mapping-torus presentations and characters.
//!
//! A filtered graph map is a finite connected graph with ordered edges
//! `E_1 < ... < E_m` and a self-map fixing every vertex with
//! `f(E_i) = E_i u_i`, where `u_i` is a closed edge path at the terminus of
//! `E_i` using only earlier edges. Edge paths are stored as [`Word`]s over
//! signed 1-based edge indices (`-i` traverses `E_i` backwards).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::{dot, smith_form, SmithForm};
use crate::words::{FreeAutomorphism, Word};

/// Name of the stable letter at the base vertex.
pub const STABLE_LETTER: &str = "t";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub origin: usize,
    pub terminus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredGraphMap {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    suffixes: Vec<Word>,
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl FilteredGraphMap {
    /// Checks connectivity, positive rank, and that every suffix is a loop
    /// at the terminus of its edge in strictly lower strata. Suffixes are
    /// freely reduced on the way in.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, suffixes: Vec<Word>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidMap("no vertices".into()));
        }
        if suffixes.len() != edges.len() {
            return Err(Error::DimensionMismatch {
                expected: edges.len(),
                got: suffixes.len(),
            });
        }
        let mut seen = BTreeMap::new();
        for (k, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), k).is_some() {
                return Err(Error::InvalidMap(format!("duplicate vertex {v}")));
            }
        }
        let mut names = BTreeMap::new();
        for (k, e) in edges.iter().enumerate() {
            if e.origin >= vertices.len() || e.terminus >= vertices.len() {
                return Err(Error::InvalidMap(format!(
                    "edge {} has an unknown endpoint",
                    e.name
                )));
            }
            if e.name == STABLE_LETTER {
                return Err(Error::InvalidMap(format!(
                    "edge name {STABLE_LETTER} is reserved for the stable letter"
                )));
            }
            if names.insert(e.name.as_str(), k).is_some() {
                return Err(Error::InvalidMap(format!("duplicate edge {}", e.name)));
            }
        }
        let mut uf = UnionFind::new(vertices.len());
        let mut components = vertices.len();
        for e in &edges {
            if uf.union(e.origin, e.terminus) {
                components -= 1;
            }
        }
        if components != 1 {
            return Err(Error::InvalidMap("graph is disconnected".into()));
        }
        if edges.len() < vertices.len() {
            return Err(Error::InvalidMap("graph has rank 0".into()));
        }
        let mut map = FilteredGraphMap {
            vertices,
            edges,
            suffixes: Vec::new(),
        };
        let mut reduced = Vec::with_capacity(suffixes.len());
        for (i, u) in suffixes.iter().enumerate() {
            if let Some(&l) = u.letters().iter().find(|l| l.unsigned_abs() as usize > i) {
                let j = l.unsigned_abs() as usize;
                if j > map.edges.len() {
                    return Err(Error::InvalidMap(format!(
                        "suffix of {} uses unknown edge index {j}",
                        map.edges[i].name
                    )));
                }
                return Err(Error::StratumViolation {
                    edge: map.edges[i].name.clone(),
                    used: map.edges[j - 1].name.clone(),
                });
            }
            let tau = map.edges[i].terminus;
            match map.path_endpoints(u, tau) {
                Some(end) if end == tau => {}
                Some(_) => {
                    return Err(Error::InvalidMap(format!(
                        "suffix of {} is not closed at {}",
                        map.edges[i].name, map.vertices[tau]
                    )))
                }
                None => {
                    return Err(Error::InvalidMap(format!(
                        "suffix of {} is not an edge path from {}",
                        map.edges[i].name, map.vertices[tau]
                    )))
                }
            }
            reduced.push(Word::from_letters(u.letters().iter().copied()));
        }
        map.suffixes = reduced;
        Ok(map)
    }

    /// One-vertex map with edges `names` and the given suffixes.
    pub fn rose(names: Vec<String>, suffixes: Vec<Word>) -> Result<Self> {
        let edges = names
            .into_iter()
            .map(|name| Edge {
                name,
                origin: 0,
                terminus: 0,
            })
            .collect();
        FilteredGraphMap::new(vec!["v0".into()], edges, suffixes)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.suffixes
    }

    /// Suffix of the 1-based edge `i`.
    pub fn suffix(&self, i: usize) -> &Word {
        &self.suffixes[i - 1]
    }

    /// First Betti number of the graph: the rank of the free group.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn edge_names(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.name.clone()).collect()
    }

    /// `(start, end)` of a signed edge letter.
    pub fn letter_ends(&self, l: i32) -> (usize, usize) {
        let e = &self.edges[l.unsigned_abs() as usize - 1];
        if l > 0 {
            (e.origin, e.terminus)
        } else {
            (e.terminus, e.origin)
        }
    }

    /// Endpoint of a path starting at `start`, or `None` if consecutive
    /// edges do not match up.
    pub fn path_endpoints(&self, path: &Word, start: usize) -> Option<usize> {
        let mut at = start;
        for &l in path.letters() {
            if l.unsigned_abs() as usize > self.edges.len() {
                return None;
            }
            let (s, e) = self.letter_ends(l);
            if s != at {
                return None;
            }
            at = e;
        }
        Some(at)
    }

    /// Image of an edge path under the map, freely reduced.
    pub fn apply(&self, path: &Word) -> Word {
        let images: Vec<Word> = (1..=self.edges.len())
            .map(|i| Word::letter(i as i32).mul(&self.suffixes[i - 1]))
            .collect();
        path.substitute(&images)
    }

    /// Breadth-first spanning tree from vertex 0, scanning incident edges in
    /// stratum order.
    pub fn bfs_tree(&self) -> Vec<bool> {
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for (k, e) in self.edges.iter().enumerate() {
                let other = if e.origin == v {
                    e.terminus
                } else if e.terminus == v {
                    e.origin
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    in_tree[k] = true;
                    queue.push_back(other);
                }
            }
        }
        in_tree
    }

    /// A uniformly shuffled Kruskal spanning tree.
    pub fn random_tree<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.shuffle(rng);
        let mut uf = UnionFind::new(self.vertices.len());
        let mut in_tree = vec![false; self.edges.len()];
        for k in order {
            let e = &self.edges[k];
            if uf.union(e.origin, e.terminus) {
                in_tree[k] = true;
            }
        }
        in_tree
    }
}

impl fmt::Display for FilteredGraphMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.edge_names();
        for (e, u) in self.edges.iter().zip(&self.suffixes) {
            let tail = if u.is_empty() {
                String::new()
            } else {
                format!(" {}", u.format_with(&names))
            };
            writeln!(
                f,
                "{}: {} -> {}  maps to {}{}",
                e.name, self.vertices[e.origin], self.vertices[e.terminus], e.name, tail
            )?;
        }
        Ok(())
    }
}

/// Cycle of `nv` vertices `v_i`, each carrying a fixed loop `a_i`, with
/// circle edges `b_i = [v_{i-1}, v_i]` mapped to `b_i a_i`. Rank `nv + 1`.
pub fn circle_example(nv: usize) -> FilteredGraphMap {
    assert!(nv >= 1);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<Edge> = (0..nv)
        .map(|i| Edge {
            name: format!("a{i}"),
            origin: i,
            terminus: i,
        })
        .collect();
    let mut suffixes = vec![Word::identity(); nv];
    for i in (1..nv).chain([0]) {
        edges.push(Edge {
            name: format!("b{i}"),
            origin: (i + nv - 1) % nv,
            terminus: i,
        });
        suffixes.push(Word::letter((i + 1) as i32));
    }
    FilteredGraphMap::new(vertices, edges, suffixes).unwrap()
}

/// A basis `y_1, ..., y_n` of `F_n` given as words in the `x_j`, together
/// with the inverse change of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    /// `y_i` as a word in the `x_j`.
    pub forward: Vec<Word>,
    /// `x_j` as a word in the `y_i`.
    pub backward: Vec<Word>,
}

impl Basis {
    pub fn standard(n: usize) -> Self {
        let g: Vec<Word> = (1..=n).map(Word::generator).collect();
        Basis {
            forward: g.clone(),
            backward: g,
        }
    }

    /// Checks that the two substitutions are mutually inverse.
    pub fn new(forward: Vec<Word>, backward: Vec<Word>) -> Result<Self> {
        let n = forward.len();
        if backward.len() != n {
            return Err(Error::RankMismatch {
                left: n,
                right: backward.len(),
            });
        }
        for w in forward.iter().chain(&backward) {
            if w.max_generator() > n {
                return Err(Error::GeneratorOutOfRange {
                    index: w.max_generator(),
                    rank: n,
                });
            }
        }
        for i in 1..=n {
            let g = Word::generator(i);
            if forward[i - 1].substitute(&backward) != g
                || backward[i - 1].substitute(&forward) != g
            {
                return Err(Error::NotAutomorphism(
                    "basis words and their inverse do not compose to the identity".into(),
                ));
            }
        }
        Ok(Basis { forward, backward })
    }

    /// `y_i = x_{|l_i|}^{sign l_i}`.
    pub fn signed_permutation(letters: &[i32]) -> Result<Self> {
        let n = letters.len();
        let forward: Vec<Word> = letters.iter().map(|&l| Word::letter(l)).collect();
        let mut backward = vec![Word::identity(); n];
        for (i, &l) in letters.iter().enumerate() {
            let j = l.unsigned_abs() as usize;
            if j == 0 || j > n || !backward[j - 1].is_empty() {
                return Err(Error::Precondition("not a signed permutation".into()));
            }
            let y = (i + 1) as i32;
            backward[j - 1] = Word::letter(if l > 0 { y } else { -y });
        }
        Basis::new(forward, backward)
    }

    pub fn rank(&self) -> usize {
        self.forward.len()
    }

    pub fn is_standard(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [(i + 1) as i32])
    }

    /// The automorphism in `y` coordinates: `y_i -> backward(α(forward(y_i)))`.
    pub fn conjugate(&self, a: &FreeAutomorphism) -> Vec<Word> {
        self.forward
            .iter()
            .map(|y| y.substitute(a.images()).substitute(&self.backward))
            .collect()
    }

    /// Edge names for the rose: the `x` name when `y_i` is a single positive
    /// letter, `y<i>` otherwise.
    pub fn names(&self) -> Vec<String> {
        self.forward
            .iter()
            .enumerate()
            .map(|(i, w)| match w.letters() {
                [l] if *l > 0 => format!("x{l}"),
                _ => format!("y{}", i + 1),
            })
            .collect()
    }
}

/// Rose realizing `α` when `α(y_i) = y_i u_i` with `u_i` a word in
/// `y_1 .. y_{i-1}` for the ordered basis.
pub fn rose_from_triangular(a: &FreeAutomorphism, basis: &Basis) -> Result<FilteredGraphMap> {
    if basis.rank() != a.rank() {
        return Err(Error::RankMismatch {
            left: a.rank(),
            right: basis.rank(),
        });
    }
    let names = basis.names();
    let mut suffixes = Vec::with_capacity(a.rank());
    for (k, img) in basis.conjugate(a).into_iter().enumerate() {
        let i = (k + 1) as i32;
        let ok =
            img.letters().first() == Some(&i) && img.letters()[1..].iter().all(|l| l.abs() < i);
        if !ok {
            return Err(Error::NotTriangular(names[k].clone()));
        }
        suffixes.push(Word::from_letters(img.letters()[1..].iter().copied()));
    }
    FilteredGraphMap::rose(names, suffixes)
}

/// Searches signed permutations of the generators (identity first) for an
/// ordered basis in which `α` is triangular.
pub fn find_triangular_basis(a: &FreeAutomorphism) -> Option<Basis> {
    let n = a.rank();
    let mut perm: Vec<usize> = (1..=n).collect();
    loop {
        for signs in 0u32..(1 << n) {
            let letters: Vec<i32> = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    if signs >> i & 1 == 1 {
                        -(p as i32)
                    } else {
                        p as i32
                    }
                })
                .collect();
            let basis = Basis::signed_permutation(&letters).expect("valid permutation");
            if rose_from_triangular(a, &basis).is_ok() {
                return Some(basis);
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A deficiency-one presentation of a mapping torus, with the tree
/// bookkeeping needed to rewrite edge paths and vertex stable letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingTorusPresentation {
    /// Non-tree edge names in stratum order, then the stable letter.
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    /// Per graph edge: whether it lies in the spanning tree.
    pub tree: Vec<bool>,
    /// Per graph edge: its generator word (empty for tree edges).
    pub edge_words: Vec<Word>,
    /// Per vertex: the stable letter `t_v` as a word.
    pub vertex_stable: Vec<Word>,
    /// Per vertex: the tree path from vertex 0, as an edge path.
    pub tree_paths: Vec<Word>,
}

impl MappingTorusPresentation {
    /// `⟨x_1..x_n, t | t^-1 x_i t α(x_i)^-1⟩`.
    pub fn standard(a: &FreeAutomorphism) -> Self {
        let n = a.rank();
        let t = (n + 1) as i32;
        let relators = (1..=n)
            .map(|i| {
                let x = i as i32;
                Word::from_letters([-t, x, t]).mul(&a.image(i).inverse())
            })
            .collect();
        let mut generators: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        generators.push(STABLE_LETTER.into());
        MappingTorusPresentation {
            generators,
            relators,
            tree: vec![false; n],
            edge_words: (1..=n).map(Word::generator).collect(),
            vertex_stable: vec![Word::letter(t)],
            tree_paths: vec![Word::identity()],
        }
    }

    pub fn stable_index(&self) -> usize {
        self.generators.len()
    }

    pub fn stable(&self) -> Word {
        Word::generator(self.stable_index())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|k| k + 1)
    }

    /// Generator word of an edge path.
    pub fn path_word(&self, path: &Word) -> Word {
        Word::from_letters(path.letters().iter().flat_map(|&l| {
            let w = &self.edge_words[l.unsigned_abs() as usize - 1];
            if l > 0 { w.clone() } else { w.inverse() }
                .letters()
                .to_vec()
        }))
    }

    /// The element of `π_1` at vertex 0 carried by edge `k` (0-based):
    /// tree path, edge, tree path back.
    pub fn edge_loop(&self, f: &FilteredGraphMap, k: usize) -> Word {
        let e = &f.edges[k];
        self.tree_paths[e.origin]
            .mul(&Word::letter((k + 1) as i32))
            .mul(&self.tree_paths[e.terminus].inverse())
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format_with(&self.generators)
    }

    /// Exponent-sum matrix of the relators (rows) over the generators.
    pub fn relation_matrix(&self) -> Vec<Vec<BigInt>> {
        let g = self.generators.len();
        self.relators
            .iter()
            .map(|r| r.exponent_sums(g).into_iter().map(BigInt::from).collect())
            .collect()
    }
}

impl fmt::Display for MappingTorusPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(
            f,
            "< {} | {} >",
            self.generators.join(", "),
            rels.join(", ")
        )
    }
}

/// Presentation using the breadth-first spanning tree.
pub fn presentation(f: &FilteredGraphMap) -> MappingTorusPresentation {
    presentation_with_tree(f, &f.bfs_tree()).expect("breadth-first tree is a spanning tree")
}

/// Presentation for an explicit spanning tree. Relator for a non-tree edge
/// `e`: `t_o^-1 w(e) t_τ w(e u_e)^-1`; tree edges define `t_τ = t_o w(u_e)`.
pub fn presentation_with_tree(
    f: &FilteredGraphMap,
    tree: &[bool],
) -> Result<MappingTorusPresentation> {
    let m = f.edges.len();
    let nv = f.vertices.len();
    if tree.len() != m || tree.iter().filter(|&&b| b).count() + 1 != nv {
        return Err(Error::InvalidMap("not a spanning tree".into()));
    }
    let mut generators = Vec::new();
    let mut edge_words = vec![Word::identity(); m];
    for (k, e) in f.edges.iter().enumerate() {
        if !tree[k] {
            generators.push(e.name.clone());
            edge_words[k] = Word::generator(generators.len());
        }
    }
    generators.push(STABLE_LETTER.into());
    let mut p = MappingTorusPresentation {
        generators,
        relators: Vec::new(),
        tree: tree.to_vec(),
        edge_words,
        vertex_stable: vec![Word::identity(); nv],
        tree_paths: vec![Word::identity(); nv],
    };
    let mut known = vec![false; nv];
    known[0] = true;
    p.vertex_stable[0] = p.stable();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (k, e) in f.edges.iter().enumerate() {
            if !tree[k] {
                continue;
            }
            let u = p.path_word(&f.suffixes[k]);
            let letter = Word::letter((k + 1) as i32);
            if e.origin == v && !known[e.terminus] {
                p.vertex_stable[e.terminus] = p.vertex_stable[v].mul(&u);
                p.tree_paths[e.terminus] = p.tree_paths[v].mul(&letter);
                known[e.terminus] = true;
                queue.push_back(e.terminus);
            } else if e.terminus == v && !known[e.origin] {
                p.vertex_stable[e.origin] = p.vertex_stable[v].mul(&u.inverse());
                p.tree_paths[e.origin] = p.tree_paths[v].mul(&letter.inverse());
                known[e.origin] = true;
                queue.push_back(e.origin);
            }
        }
    }
    if known.iter().any(|k| !k) {
        return Err(Error::InvalidMap("not a spanning tree".into()));
    }
    for (k, e) in f.edges.iter().enumerate() {
        if tree[k] {
            continue;
        }
        let w = &p.edge_words[k];
        let image = w.mul(&p.path_word(&f.suffixes[k]));
        let r = p.vertex_stable[e.origin]
            .inverse()
            .mul(w)
            .mul(&p.vertex_stable[e.terminus])
            .mul(&image.inverse());
        p.relators.push(r);
    }
    Ok(p)
}

/// A character `G -> Q` given by exact values on the presentation generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterClass {
    pub values: Vec<BigRational>,
}

impl CharacterClass {
    pub fn from_integers(values: &[i64]) -> Self {
        CharacterClass {
            values: values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        }
    }

    pub fn from_bigints(values: &[BigInt]) -> Self {
        CharacterClass {
            values: values
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        }
    }

    /// Parses `name=value` pairs separated by commas or whitespace. Every
    /// generator must be assigned exactly once; values are integers or
    /// fractions `p/q`.
    pub fn parse(generators: &[String], text: &str) -> Result<Self> {
        let mut values: Vec<Option<BigRational>> = vec![None; generators.len()];
        for item in text.split([',', ' ', '\t', '\n']).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Character(format!("expected name=value, got {item:?}")))?;
            let k = generators
                .iter()
                .position(|g| g == name.trim())
                .ok_or_else(|| Error::Character(format!("unknown generator {:?}", name.trim())))?;
            let v = BigRational::from_str(value.trim()).map_err(|_| {
                Error::Character(format!("bad value {:?} for {}", value.trim(), name.trim()))
            })?;
            if values[k].replace(v).is_some() {
                return Err(Error::Character(format!(
                    "{} assigned twice",
                    generators[k]
                )));
            }
        }
        let missing: Vec<&str> = generators
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_none())
            .map(|(g, _)| g.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Character(format!(
                "no value for {}",
                missing.join(", ")
            )));
        }
        Ok(CharacterClass {
            values: values.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn evaluate(&self, w: &Word) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for &l in w.letters() {
            let v = self
                .values
                .get(l.unsigned_abs() as usize - 1)
                .ok_or_else(|| {
                    Error::Character(format!(
                        "word uses generator {} outside the character",
                        l.abs()
                    ))
                })?;
            if l > 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        Ok(acc)
    }

    /// Nonzero and kills every relator.
    pub fn validate(&self, p: &MappingTorusPresentation) -> Result<()> {
        validate_values(&self.values, &p.generators, &p.relators, self)
    }

    /// Like [`validate`](Self::validate) for an arbitrary presentation.
    pub fn validate_relators(&self, generators: &[String], relators: &[Word]) -> Result<()> {
        validate_values(&self.values, generators, relators, self)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The primitive integer vector on the same ray, and whether it differs
    /// from the input.
    pub fn primitive(&self) -> Result<(Vec<BigInt>, bool)> {
        if self.is_zero() {
            return Err(Error::Character("the zero character has no class".into()));
        }
        let lcm = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self
            .values
            .iter()
            .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        let changed = prim
            .iter()
            .zip(&self.values)
            .any(|(a, b)| BigRational::from_integer(a.clone()) != *b);
        Ok((prim, changed))
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        CharacterClass {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn format_with(&self, generators: &[String]) -> String {
        generators
            .iter()
            .zip(&self.values)
            .map(|(g, v)| format!("{g}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub(crate) fn validate_values(
    values: &[BigRational],
    generators: &[String],
    relators: &[Word],
    chi: &CharacterClass,
) -> Result<()> {
    if values.len() != generators.len() {
        return Err(Error::DimensionMismatch {
            expected: generators.len(),
            got: values.len(),
        });
    }
    if chi.is_zero() {
        return Err(Error::Character("the zero character has no class".into()));
    }
    for (i, r) in relators.iter().enumerate() {
        let v = chi.evaluate(r)?;
        if !v.is_zero() {
            return Err(Error::RelatorNotKilled {
                index: i + 1,
                relator: r.format_with(generators),
                value: v.to_string(),
            });
        }
    }
    Ok(())
}

/// Value of an integer character on a word.
pub fn eval_int(values: &[BigInt], w: &Word) -> BigInt {
    let mut acc = BigInt::zero();
    for &l in w.letters() {
        let v = &values[l.unsigned_abs() as usize - 1];
        if l > 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    acc
}

/// `Hom(G, Z)` for a finite presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterLattice {
    pub b1: usize,
    /// Basis characters, as value vectors on the generators.
    pub basis: Vec<Vec<BigInt>>,
    /// Torsion invariants of `H_1`.
    pub torsion: Vec<BigInt>,
    smith: SmithForm,
}

impl CharacterLattice {
    /// Coordinates of an integer character in [`basis`](Self::basis).
    pub fn coordinates(&self, values: &[BigInt]) -> Vec<BigInt> {
        self.smith.kernel_coordinates(values)
    }

    /// Coordinates of a rational character that kills every relator.
    pub fn rational_coordinates(&self, values: &[BigRational]) -> Vec<BigRational> {
        self.smith.v_inv[self.smith.rank..]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(values)
                    .map(|(a, v)| BigRational::from_integer(a.clone()) * v)
                    .sum()
            })
            .collect()
    }

    /// `(β_j(w))_j`: the pairing of a word's `H_1` image with the basis.
    pub fn pairing(&self, w: &Word) -> Vec<BigInt> {
        self.basis.iter().map(|b| eval_int(b, w)).collect()
    }

    /// Integer character with the given coordinates.
    pub fn character(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let g = self.smith.cols;
        (0..g)
            .map(|i| self.basis.iter().zip(coords).map(|(b, c)| &b[i] * c).sum())
            .collect()
    }
}

pub fn character_lattice(p: &MappingTorusPresentation) -> CharacterLattice {
    lattice_of(&p.relation_matrix(), p.generators.len())
}

/// `Hom(G, Z)` for generators `1..=generators` and the given relators.
pub fn character_lattice_of(relators: &[Word], generators: usize) -> CharacterLattice {
    let rows: Vec<Vec<BigInt>> = relators
        .iter()
        .map(|r| {
            r.exponent_sums(generators)
                .into_iter()
                .map(BigInt::from)
                .collect()
        })
        .collect();
    lattice_of(&rows, generators)
}

pub(crate) fn lattice_of(rows: &[Vec<BigInt>], cols: usize) -> CharacterLattice {
    let smith = smith_form(rows, cols);
    let basis = smith.kernel_basis();
    for b in &basis {
        debug_assert!(rows.iter().all(|r| dot(r, b).is_zero()));
    }
    CharacterLattice {
        b1: basis.len(),
        basis,
        torsion: smith.torsion(),
        smith,
    }
}

/// Makes an integer vector primitive with its first nonzero entry positive.
/// Returns `None` for the zero vector.
pub fn primitive_normal(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_negative = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative);
    let g = if first_negative { -g } else { g };
    Some(v.iter().map(|x| x / &g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(letters: &[i32]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn validation_examples() {
        let f = FilteredGraphMap::rose(names(2), vec![w(&[]), w(&[1])]).unwrap();
        assert_eq!(f.rank(), 2);
        let err = FilteredGraphMap::rose(names(2), vec![w(&[]), w(&[2])]).unwrap_err();
        assert!(matches!(err, Error::StratumViolation { .. }));
        assert_eq!(circle_example(2).rank(), 3);
        // not closed: b goes v0 -> v1 and suffix a0 lives at v0
        let bad = FilteredGraphMap::new(
            vec!["v0".into(), "v1".into()],
            vec![
                Edge {
                    name: "a".into(),
                    origin: 0,
                    terminus: 0,
                },
                Edge {
                    name: "b".into(),
                    origin: 0,
                    terminus: 1,
                },
            ],
            vec![w(&[]), w(&[1])],
        );
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
        let disconnected = FilteredGraphMap::new(
            vec!["v0".into(), "v1".into()],
            vec![Edge {
                name: "a".into(),
                origin: 0,
                terminus: 0,
            }],
            vec![w(&[])],
        );
        assert!(disconnected.is_err());
        let tree = FilteredGraphMap::new(
            vec!["v0".into(), "v1".into()],
            vec![Edge {
                name: "a".into(),
                origin: 0,
                terminus: 1,
            }],
            vec![w(&[])],
        );
        assert!(tree.is_err());
    }

    #[test]
    fn rose_examples() {
        let id = FreeAutomorphism::identity(2);
        let f = rose_from_triangular(&id, &Basis::standard(2)).unwrap();
        assert!(f.suffixes().iter().all(Word::is_empty));
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        let f = rose_from_triangular(&a, &Basis::standard(2)).unwrap();
        assert_eq!(f.suffix(2), &w(&[1]));
        let swap = FreeAutomorphism::new(2, vec![w(&[2]), w(&[1])]).unwrap();
        assert_eq!(
            rose_from_triangular(&swap, &Basis::standard(2)).unwrap_err(),
            Error::NotTriangular("x1".into())
        );
        assert!(find_triangular_basis(&swap).is_none());
        // x1 -> x1 x2 is triangular after reordering
        let b = FreeAutomorphism::new(2, vec![w(&[1, 2]), w(&[2])]).unwrap();
        let basis = find_triangular_basis(&b).unwrap();
        assert_eq!(basis.forward, vec![w(&[2]), w(&[1])]);
    }

    #[test]
    fn presentation_examples() {
        let id = FreeAutomorphism::identity(2);
        let p = presentation(&rose_from_triangular(&id, &Basis::standard(2)).unwrap());
        assert_eq!(p.generators, vec!["x1", "x2", "t"]);
        assert_eq!(p.relators, vec![w(&[-3, 1, 3, -1]), w(&[-3, 2, 3, -2])]);
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        let p = presentation(&rose_from_triangular(&a, &Basis::standard(2)).unwrap());
        assert_eq!(p.format_word(&p.relators[1]), "t^-1 x2 t x1^-1 x2^-1");
        assert_eq!(p, MappingTorusPresentation::standard(&a));
        // circle: b1 is the tree edge, t_{v1} = t a1
        let c = circle_example(2);
        let p = presentation(&c);
        assert_eq!(p.generators, vec!["a0", "a1", "b0", "t"]);
        assert_eq!(p.format_word(&p.vertex_stable[1]), "t a1");
        assert_eq!(p.relators.len() + 1, p.generators.len());
    }

    #[test]
    fn lattice_examples() {
        let id = FreeAutomorphism::identity(3);
        assert_eq!(
            character_lattice(&MappingTorusPresentation::standard(&id)).b1,
            4
        );
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        assert_eq!(
            character_lattice(&MappingTorusPresentation::standard(&a)).b1,
            2
        );
        let rows = vec![
            vec![4.into(), (-2).into(), 0.into()],
            vec![0.into(), 0.into(), 0.into()],
        ];
        let l = lattice_of(&rows, 3);
        assert_eq!(l.b1, 2);
        assert_eq!(l.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn character_examples() {
        let gens: Vec<String> = vec!["x1".into(), "x2".into(), "t".into()];
        let phi = CharacterClass::parse(&gens, "x1=0, x2=0, t=1").unwrap();
        assert_eq!(
            phi.evaluate(&w(&[3, 3, 3, 1])).unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(phi.evaluate(&Word::identity()).unwrap().is_zero());
        let phi = CharacterClass::from_integers(&[1, 2, 3]);
        assert_eq!(
            phi.evaluate(&w(&[-2, 3])).unwrap(),
            BigRational::from_integer(1.into())
        );
        assert!(CharacterClass::parse(&gens, "x1=0,t=1").is_err());
        assert!(CharacterClass::parse(&gens, "x1=0,x2=0,t=1,y=2").is_err());
        let half = CharacterClass::parse(&gens, "x1=1/2,x2=0,t=-3/4").unwrap();
        let (prim, changed) = half.primitive().unwrap();
        assert!(changed);
        assert_eq!(prim, vec![BigInt::from(2), 0.into(), (-3).into()]);
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        let p = MappingTorusPresentation::standard(&a);
        assert!(CharacterClass::from_integers(&[0, 1, 0])
            .validate(&p)
            .is_ok());
        assert!(matches!(
            CharacterClass::from_integers(&[1, 0, 0]).validate(&p),
            Err(Error::RelatorNotKilled { index: 2, .. })
        ));
    }

    #[test]
    fn edge_loops_are_tree_independent_in_homology() {
        let c = circle_example(3);
        let p1 = presentation(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p2 = presentation_with_tree(&c, &c.random_tree(&mut rng)).unwrap();
        assert_eq!(character_lattice(&p1).b1, character_lattice(&p2).b1);
    }

    fn triangular_rose() -> impl Strategy<Value = FilteredGraphMap> {
        (2usize..5).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(1i32..5, 0..5), n).prop_map(
                move |raw| {
                    let suffixes = raw
                        .iter()
                        .enumerate()
                        .map(|(i, letters)| {
                            if i == 0 {
                                return Word::identity();
                            }
                            Word::from_letters(letters.iter().map(|&l| {
                                let g = (l.unsigned_abs() as usize - 1) % i + 1;
                                if l % 2 == 0 {
                                    -(g as i32)
                                } else {
                                    g as i32
                                }
                            }))
                        })
                        .collect();
                    FilteredGraphMap::rose(names(n), suffixes).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn lattice_basis_kills_relators(f in triangular_rose()) {
            let p = presentation(&f);
            let l = character_lattice(&p);
            prop_assert!(l.b1 >= 2);
            for b in &l.basis {
                for r in &p.relators {
                    prop_assert!(eval_int(b, r).is_zero());
                }
            }
        }

        #[test]
        fn rose_matches_standard(f in triangular_rose()) {
            let images: Vec<Word> = (1..=f.rank())
                .map(|i| Word::generator(i).mul(f.suffix(i)))
                .collect();
            let a = FreeAutomorphism::new(f.rank(), images).unwrap();
            prop_assert_eq!(presentation(&f), MappingTorusPresentation::standard(&a));
        }

        #[test]
        fn random_tree_gives_deficiency_one(seed in any::<u64>()) {
            let c = circle_example(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = presentation_with_tree(&c, &c.random_tree(&mut rng)).unwrap();
            prop_assert_eq!(p.generators.len(), p.relators.len() + 1);
            prop_assert_eq!(character_lattice(&p).b1, character_lattice(&presentation(&c)).b1);
        }
    }
}
