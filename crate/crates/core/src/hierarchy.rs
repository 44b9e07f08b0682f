//! Z-hierarchies of mapping tori of filtered graph maps.
//!
//! Removing the top edge of a connected subgraph either leaves it connected
//! (an HNN splitting over the stable letter at the edge's origin) or cuts it
//! in two (an amalgam over the same letter). Recursing down to rank-one
//! pieces yields `n - 1` splittings with `Z^2` leaves.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::torus::{
    eval_int, find_triangular_basis, rose_from_triangular, Basis, FilteredGraphMap,
    MappingTorusPresentation, UnionFind,
};
use crate::words::{least_unipotent_power, FreeAutomorphism, Validity, Word};

/// A connected subgraph: sorted vertex and (0-based) edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Subgraph {
    pub fn whole(f: &FilteredGraphMap) -> Self {
        Subgraph {
            vertices: (0..f.vertices().len()).collect(),
            edges: (0..f.edges().len()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    /// Breadth-first spanning tree paths from the smallest vertex, and the
    /// non-tree edges.
    fn tree_paths(&self, f: &FilteredGraphMap) -> (Vec<Option<Word>>, Vec<usize>) {
        let nv = f.vertices().len();
        let mut paths: Vec<Option<Word>> = vec![None; nv];
        let mut used = vec![false; f.edges().len()];
        let root = self.vertices[0];
        paths[root] = Some(Word::identity());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &k in &self.edges {
                let e = &f.edges()[k];
                let letter = (k + 1) as i32;
                let step = if e.origin == v && paths[e.terminus].is_none() {
                    Some((e.terminus, letter))
                } else if e.terminus == v && paths[e.origin].is_none() {
                    Some((e.origin, -letter))
                } else {
                    None
                };
                if let Some((w, l)) = step {
                    paths[w] = Some(paths[v].as_ref().unwrap().mul(&Word::letter(l)));
                    used[k] = true;
                    queue.push_back(w);
                }
            }
        }
        let rest = self.edges.iter().copied().filter(|&k| !used[k]).collect();
        (paths, rest)
    }

    /// Splits off `edge` and returns the connected components of the rest.
    fn without(&self, f: &FilteredGraphMap, edge: usize) -> Vec<Subgraph> {
        let nv = f.vertices().len();
        let mut uf = UnionFind::new(nv);
        let rest: Vec<usize> = self.edges.iter().copied().filter(|&k| k != edge).collect();
        for &k in &rest {
            uf.union(f.edges()[k].origin, f.edges()[k].terminus);
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut parts: Vec<Subgraph> = Vec::new();
        for &v in &self.vertices {
            let r = uf.find(v);
            match roots.iter().position(|&x| x == r) {
                Some(i) => parts[i].vertices.push(v),
                None => {
                    roots.push(r);
                    parts.push(Subgraph {
                        vertices: vec![v],
                        edges: Vec::new(),
                    });
                }
            }
        }
        for &k in &rest {
            let r = uf.find(f.edges()[k].origin);
            let i = roots.iter().position(|&x| x == r).unwrap();
            parts[i].edges.push(k);
        }
        parts
    }

    fn component_of(parts: &[Subgraph], v: usize) -> usize {
        parts.iter().position(|p| p.vertices.contains(&v)).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Hnn {
        /// 0-based index of the top edge.
        edge: usize,
        edge_element: Word,
        child: Box<HierarchyNode>,
    },
    Amalgam {
        edge: usize,
        edge_element: Word,
        /// Origin side first.
        children: Box<[HierarchyNode; 2]>,
    },
    /// `Z^2` generated by a core loop and the stable letter at its base.
    Leaf {
        vertex: usize,
        cycle_path: Word,
        cycle: Word,
        stable: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyNode {
    pub subgraph: Subgraph,
    /// Words whose character values generate the image of this node's group
    /// under any character: vertex stable letters and fundamental cycles.
    pub group_generators: Vec<Word>,
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyTree {
    pub rank: usize,
    pub root: HierarchyNode,
    /// Separating top edges with a tree on one side. The amalgam is trivial
    /// and the recursion continues on the other side.
    pub trivial_amalgams: Vec<usize>,
}

/// Builds the hierarchy. Words refer to the generators of `p`, which must
/// be a presentation of `f`.
pub fn build_hierarchy(
    f: &FilteredGraphMap,
    p: &MappingTorusPresentation,
) -> Result<HierarchyTree> {
    let mut trivial = Vec::new();
    let root = build_node(f, p, Subgraph::whole(f), &mut trivial)?;
    let tree = HierarchyTree {
        rank: f.rank(),
        root,
        trivial_amalgams: trivial,
    };
    let splittings = tree.splitting_count();
    if splittings + 1 != tree.rank {
        return Err(Error::Internal(format!(
            "{splittings} splittings for rank {}",
            tree.rank
        )));
    }
    if tree.leaf_count() != tree.amalgam_count() + 1 {
        return Err(Error::Internal(
            "leaf count does not match amalgam count".into(),
        ));
    }
    Ok(tree)
}

fn build_node(
    f: &FilteredGraphMap,
    p: &MappingTorusPresentation,
    s: Subgraph,
    trivial: &mut Vec<usize>,
) -> Result<HierarchyNode> {
    let rank = s.rank();
    if rank == 0 {
        return Err(Error::Internal("rank-0 piece in the hierarchy".into()));
    }
    let (paths, extra) = s.tree_paths(f);
    let mut group_generators: Vec<Word> = s
        .vertices
        .iter()
        .map(|&v| p.vertex_stable[v].clone())
        .collect();
    let cycles: Vec<Word> = extra
        .iter()
        .map(|&k| {
            let e = &f.edges()[k];
            paths[e.origin]
                .as_ref()
                .unwrap()
                .mul(&Word::letter((k + 1) as i32))
                .mul(&paths[e.terminus].as_ref().unwrap().inverse())
        })
        .collect();
    group_generators.extend(cycles.iter().map(|c| p.path_word(c)));
    if rank == 1 {
        let vertex = s.vertices[0];
        let cycle_path = cycles[0].clone();
        if f.apply(&cycle_path) != cycle_path {
            return Err(Error::Internal(format!(
                "leaf loop at {} is not fixed by the map",
                f.vertices()[vertex]
            )));
        }
        return Ok(HierarchyNode {
            kind: NodeKind::Leaf {
                vertex,
                cycle: p.path_word(&cycle_path),
                cycle_path,
                stable: p.vertex_stable[vertex].clone(),
            },
            subgraph: s,
            group_generators,
        });
    }
    let top = *s.edges.iter().max().unwrap();
    let e = &f.edges()[top];
    let edge_element = p.vertex_stable[e.origin].clone();
    let mut parts = s.without(f, top);
    let kind = if parts.len() == 1 {
        let child = build_node(f, p, parts.pop().unwrap(), trivial)?;
        NodeKind::Hnn {
            edge: top,
            edge_element,
            child: Box::new(child),
        }
    } else {
        let i = Subgraph::component_of(&parts, e.origin);
        let j = Subgraph::component_of(&parts, e.terminus);
        let (a, b) = (parts[i].clone(), parts[j].clone());
        if a.rank() == 0 || b.rank() == 0 {
            trivial.push(top);
            let side = if a.rank() == 0 { b } else { a };
            return build_node(f, p, side, trivial);
        }
        let left = build_node(f, p, a, trivial)?;
        let right = build_node(f, p, b, trivial)?;
        NodeKind::Amalgam {
            edge: top,
            edge_element,
            children: Box::new([left, right]),
        }
    };
    Ok(HierarchyNode {
        subgraph: s,
        group_generators,
        kind,
    })
}

impl HierarchyNode {
    pub fn children(&self) -> Vec<&HierarchyNode> {
        match &self.kind {
            NodeKind::Hnn { child, .. } => vec![child],
            NodeKind::Amalgam { children, .. } => children.iter().collect(),
            NodeKind::Leaf { .. } => Vec::new(),
        }
    }

    /// Top edge and edge element of a splitting node.
    pub fn splitting(&self) -> Option<(usize, &Word)> {
        match &self.kind {
            NodeKind::Hnn {
                edge, edge_element, ..
            }
            | NodeKind::Amalgam {
                edge, edge_element, ..
            } => Some((*edge, edge_element)),
            NodeKind::Leaf { .. } => None,
        }
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a HierarchyNode>) {
        out.push(self);
        for c in self.children() {
            c.walk(out);
        }
    }
}

impl HierarchyTree {
    pub fn nodes(&self) -> Vec<&HierarchyNode> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }

    pub fn splitting_count(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|n| n.splitting().is_some())
            .count()
    }

    pub fn amalgam_count(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Amalgam { .. }))
            .count()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf { .. }))
            .count()
    }

    /// `(edge index, edge element)` in ascending stratum order.
    pub fn edge_elements(&self) -> Vec<(usize, Word)> {
        let mut out: Vec<(usize, Word)> = self
            .nodes()
            .iter()
            .filter_map(|n| n.splitting().map(|(e, w)| (e, w.clone())))
            .collect();
        out.sort_by_key(|(e, _)| *e);
        out
    }
}

/// Where a [`UpgTorus`] came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusSource {
    /// An automorphism, with the basis in which its `k`-th power is
    /// triangular.
    Automorphism {
        automorphism: Vec<Word>,
        basis: Basis,
    },
    FilteredMap,
}

/// A UPG mapping torus `G` with a filtered representative of the `k`-th
/// power of its monodromy and the hierarchy built from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpgTorus {
    pub source: TorusSource,
    /// Presentation of `G` itself; characters are given on its generators.
    pub presentation: MappingTorusPresentation,
    /// Least power with unipotent abelianization.
    pub k: u64,
    pub validity: Option<Validity>,
    /// Filtered map representing the `k`-th power.
    pub filtered: FilteredGraphMap,
    pub filtered_presentation: MappingTorusPresentation,
    /// Image in `G` of each generator of `filtered_presentation`.
    pub translation: Vec<Word>,
    pub hierarchy: HierarchyTree,
}

impl UpgTorus {
    /// Computes `k` from the abelianization and looks for a signed
    /// permutation of the generators in which `α^k` is triangular.
    pub fn from_automorphism(a: &FreeAutomorphism) -> Result<Self> {
        let k = least_unipotent_power(&a.abelianization_matrix())?
            .ok_or(Error::NotPolynomiallyGrowing)?;
        let basis =
            find_triangular_basis(&a.power(k)).ok_or(Error::NoTriangularPower { power: k })?;
        Self::with_basis(a, basis)
    }

    /// Uses a given basis in which `α^k` must be triangular.
    pub fn with_basis(a: &FreeAutomorphism, basis: Basis) -> Result<Self> {
        let k = least_unipotent_power(&a.abelianization_matrix())?
            .ok_or(Error::NotPolynomiallyGrowing)?;
        let filtered = rose_from_triangular(&a.power(k), &basis)?;
        let presentation = MappingTorusPresentation::standard(a);
        let filtered_presentation = crate::torus::presentation(&filtered);
        let t = presentation.stable();
        let mut translation = basis.forward.clone();
        translation.push(t.pow(k as i64));
        let hierarchy = build_hierarchy(&filtered, &filtered_presentation)?;
        Ok(UpgTorus {
            source: TorusSource::Automorphism {
                automorphism: a.images().to_vec(),
                basis,
            },
            presentation,
            k,
            validity: Some(a.validity()),
            filtered,
            filtered_presentation,
            translation,
            hierarchy,
        })
    }

    pub fn from_filtered(f: &FilteredGraphMap) -> Result<Self> {
        Self::from_filtered_with_tree(f, &f.bfs_tree())
    }

    pub fn from_filtered_with_tree(f: &FilteredGraphMap, tree: &[bool]) -> Result<Self> {
        let p = crate::torus::presentation_with_tree(f, tree)?;
        let hierarchy = build_hierarchy(f, &p)?;
        let translation = (1..=p.generators.len()).map(Word::generator).collect();
        Ok(UpgTorus {
            source: TorusSource::FilteredMap,
            presentation: p.clone(),
            k: 1,
            validity: None,
            filtered: f.clone(),
            filtered_presentation: p,
            translation,
            hierarchy,
        })
    }

    /// Rank of the fiber of the defining fibration.
    pub fn rank(&self) -> usize {
        self.filtered.rank()
    }

    /// A word in the filtered presentation, rewritten in `G`.
    pub fn translate(&self, w: &Word) -> Word {
        w.substitute(&self.translation)
    }

    /// Edge elements `t_i` in stratum order, as words in `G`.
    pub fn edge_elements(&self) -> Vec<Word> {
        self.hierarchy
            .edge_elements()
            .iter()
            .map(|(_, w)| self.translate(w))
            .collect()
    }

    /// Integer character of `G` pulled back to the filtered presentation.
    pub fn pull_back(&self, values: &[BigInt]) -> Vec<BigInt> {
        self.translation
            .iter()
            .map(|w| eval_int(values, w))
            .collect()
    }

    /// The canonical fibration: zero on the fiber, one on the stable letter.
    pub fn canonical_fibration(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.presentation.generators.len()];
        *v.last_mut().unwrap() = BigInt::one();
        v
    }
}

/// What [`normalize_core`] did.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeReport {
    /// Edges absorbed by tree contractions.
    pub contracted: Vec<String>,
    /// Degenerate top edges left in place because a higher edge starts in
    /// the tree side; the hierarchy treats them as trivial amalgams.
    pub retained: Vec<String>,
}

struct Degenerate {
    top: usize,
    side: Subgraph,
    /// The tree hangs off the terminus of `top`.
    tree_at_terminus: bool,
}

/// Contracts separating top edges whose removal leaves a tree, together
/// with that tree, rewriting suffixes so that the mapping torus is
/// unchanged. Repeats until no such configuration can be removed safely.
pub fn normalize_core(f: &FilteredGraphMap) -> Result<(FilteredGraphMap, NormalizeReport)> {
    let mut current = f.clone();
    let mut report = NormalizeReport::default();
    let mut retained: BTreeSet<String> = BTreeSet::new();
    while let Some(d) = find_degenerate(&current, &mut retained) {
        let mut names: Vec<String> = d
            .side
            .edges
            .iter()
            .chain([&d.top])
            .map(|&k| current.edges()[k].name.clone())
            .collect();
        names.sort();
        report.contracted.extend(names);
        current = contract(&current, &d)?;
    }
    report.retained = retained.into_iter().collect();
    Ok((current, report))
}

fn find_degenerate(f: &FilteredGraphMap, retained: &mut BTreeSet<String>) -> Option<Degenerate> {
    let mut stack = vec![Subgraph::whole(f)];
    while let Some(s) = stack.pop() {
        if s.rank() <= 1 {
            continue;
        }
        let top = *s.edges.iter().max().unwrap();
        let e = &f.edges()[top];
        let parts = s.without(f, top);
        if parts.len() == 1 {
            stack.extend(parts);
            continue;
        }
        let i = Subgraph::component_of(&parts, e.origin);
        let j = Subgraph::component_of(&parts, e.terminus);
        let (a, b) = (parts[i].clone(), parts[j].clone());
        let (side, keep, tree_at_terminus) = match (a.rank(), b.rank()) {
            (0, _) => (a, b, false),
            (_, 0) => (b, a, true),
            _ => {
                stack.push(a);
                stack.push(b);
                continue;
            }
        };
        let safe = tree_at_terminus
            || f.edges().iter().enumerate().all(|(k, x)| {
                k == top || side.edges.contains(&k) || !side.vertices.contains(&x.origin)
            });
        if safe {
            return Some(Degenerate {
                top,
                side,
                tree_at_terminus,
            });
        }
        retained.insert(e.name.clone());
        stack.push(keep);
    }
    None
}

fn contract(f: &FilteredGraphMap, d: &Degenerate) -> Result<FilteredGraphMap> {
    let e = &f.edges()[d.top];
    let target = if d.tree_at_terminus {
        e.origin
    } else {
        e.terminus
    };
    let removed_edges: BTreeSet<usize> = d.side.edges.iter().copied().chain([d.top]).collect();
    let removed_vertices: BTreeSet<usize> = d
        .side
        .vertices
        .iter()
        .copied()
        .filter(|&v| v != target)
        .collect();
    let vertex_map: Vec<Option<usize>> = {
        let mut next = 0;
        (0..f.vertices().len())
            .map(|v| {
                if removed_vertices.contains(&v) {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let new_vertex = |v: usize| vertex_map[v].unwrap_or(vertex_map[target].unwrap());
    let edge_map: Vec<Option<i32>> = {
        let mut next = 0;
        (0..f.edges().len())
            .map(|k| {
                if removed_edges.contains(&k) {
                    None
                } else {
                    next += 1;
                    Some(next)
                }
            })
            .collect()
    };
    let rewrite = |u: &Word| -> Word {
        Word::from_letters(u.letters().iter().filter_map(|&l| {
            edge_map[l.unsigned_abs() as usize - 1].map(|m| if l > 0 { m } else { -m })
        }))
    };
    let top_suffix = rewrite(f.suffix(d.top + 1));
    let vertices = f
        .vertices()
        .iter()
        .enumerate()
        .filter(|(v, _)| !removed_vertices.contains(v))
        .map(|(_, name)| name.clone())
        .collect();
    let mut edges = Vec::new();
    let mut suffixes = Vec::new();
    for (k, x) in f.edges().iter().enumerate() {
        if removed_edges.contains(&k) {
            continue;
        }
        let mut u = rewrite(&f.suffixes()[k]);
        if !d.tree_at_terminus && d.side.vertices.contains(&x.terminus) {
            // the stable letter at the old terminus was t_target u_top^-1
            u = u.mul(&top_suffix);
        }
        let mut y = x.clone();
        y.origin = new_vertex(x.origin);
        y.terminus = new_vertex(x.terminus);
        edges.push(y);
        suffixes.push(u);
    }
    FilteredGraphMap::new(vertices, edges, suffixes)
}
