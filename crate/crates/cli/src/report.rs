//! Serializable reports. Big integers and rationals are carried as strings
//! so JSON output never loses precision.

use std::fmt;

use mtfib_core::fiber::{DecompositionNode, FiberVerdict, NOT_IN_SIGMA_TEXT};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Analyze(AnalyzeReport),
    Fiber(FiberReport),
    Alexander(AlexanderReport),
    Sigma(SigmaReport),
    Gbs(GbsReport),
    Growth(GrowthReport),
    Corpus(CorpusReport),
}

impl Report {
    /// Reports that carry a failed self-check exit with the semantic code.
    pub fn failed(&self) -> bool {
        match self {
            Report::Fiber(f) => f.oracle.as_ref().is_some_and(|o| o.agree == Some(false)),
            Report::Corpus(c) => c.instances.iter().any(|i| !i.agree),
            _ => false,
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Analyze(r) => r.fmt(f),
            Report::Fiber(r) => r.fmt(f),
            Report::Alexander(r) => r.fmt(f),
            Report::Sigma(r) => r.fmt(f),
            Report::Gbs(r) => r.fmt(f),
            Report::Growth(r) => r.fmt(f),
            Report::Corpus(r) => r.fmt(f),
        }
    }
}

fn tuple(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn presentation(gens: &[String], rels: &[String]) -> String {
    format!("<{} | {}>", gens.join(", "), rels.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyReport {
    /// `hnn`, `amalgam` or `leaf`.
    pub kind: String,
    /// Rank of the subgraph this node covers.
    pub rank: usize,
    pub edge: Option<String>,
    /// In the filtered presentation.
    pub edge_element: Option<String>,
    /// The same element as a word in `G`.
    pub edge_element_in_g: Option<String>,
    pub vertex: Option<String>,
    /// Core loop and vertex stable letter of a leaf.
    pub leaf_generators: Vec<String>,
    pub children: Vec<HierarchyReport>,
}

impl HierarchyReport {
    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth + 1);
        match self.kind.as_str() {
            "leaf" => writeln!(
                f,
                "{pad}leaf Z^2 at {}: <{}>",
                self.vertex.as_deref().unwrap_or("?"),
                self.leaf_generators.join(", ")
            )?,
            kind => writeln!(
                f,
                "{pad}{kind} along {}, edge element {} = {} in G",
                self.edge.as_deref().unwrap_or("?"),
                self.edge_element.as_deref().unwrap_or("?"),
                self.edge_element_in_g.as_deref().unwrap_or("?")
            )?,
        }
        for c in &self.children {
            c.write(f, depth + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeElementReport {
    pub edge: String,
    pub word: String,
    /// Pairing with the character lattice basis.
    pub homology: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub source: String,
    pub rank: usize,
    pub k: u64,
    pub validity: Option<String>,
    /// Triangularizing basis `y_i` as words in `x`, when not the standard one.
    pub basis: Option<Vec<String>>,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub filtered_generators: Vec<String>,
    pub filtered_relators: Vec<String>,
    pub hierarchy: HierarchyReport,
    pub splittings: usize,
    pub trivial_amalgams: Vec<String>,
    pub edge_elements: Vec<EdgeElementReport>,
    pub b1: usize,
    pub torsion: Vec<String>,
    pub lattice_basis: Vec<String>,
    pub spheres: Vec<Vec<String>>,
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source)?;
        writeln!(f, "n = {}", self.rank)?;
        writeln!(f, "k = {}", self.k)?;
        if let Some(v) = &self.validity {
            writeln!(f, "validity: {v}")?;
        }
        if let Some(b) = &self.basis {
            writeln!(f, "triangular basis:")?;
            for (i, w) in b.iter().enumerate() {
                writeln!(f, "  y{} = {w}", i + 1)?;
            }
        }
        writeln!(
            f,
            "presentation: {}",
            presentation(&self.generators, &self.relators)
        )?;
        if self.k != 1 || self.basis.is_some() || self.filtered_generators != self.generators {
            writeln!(
                f,
                "filtered presentation: {}",
                presentation(&self.filtered_generators, &self.filtered_relators)
            )?;
        }
        writeln!(f, "hierarchy ({} splittings):", self.splittings)?;
        self.hierarchy.write(f, 0)?;
        if !self.trivial_amalgams.is_empty() {
            writeln!(
                f,
                "trivial amalgams skipped: {}",
                self.trivial_amalgams.join(", ")
            )?;
        }
        writeln!(f, "edge elements:")?;
        for (i, e) in self.edge_elements.iter().enumerate() {
            writeln!(
                f,
                "  t{} (edge {}) = {}, H1 image {}",
                i + 1,
                e.edge,
                e.word,
                tuple(&e.homology)
            )?;
        }
        write!(f, "b1 = {}", self.b1)?;
        if !self.torsion.is_empty() {
            write!(f, ", torsion {}", self.torsion.join(" "))?;
        }
        writeln!(f)?;
        writeln!(f, "character lattice basis:")?;
        for (i, b) in self.lattice_basis.iter().enumerate() {
            writeln!(f, "  e{}: {b}", i + 1)?;
        }
        writeln!(f, "spheres ({}):", self.spheres.len())?;
        for s in &self.spheres {
            writeln!(f, "  {}", tuple(s))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub polynomial: String,
    pub degree: Option<u64>,
    pub hierarchy: Option<u64>,
    pub decomposition: Option<u64>,
    /// `None` when the character is not in Σ and there is no rank to compare.
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub generators: Vec<String>,
    /// Primitive integer character actually classified.
    pub character: Vec<String>,
    pub normalized: bool,
    pub k: u64,
    pub verdict: FiberVerdict,
    /// The edge element named by a `not_in_sigma` witness, as a word in `G`.
    pub witness_element: Option<String>,
    pub decomposition: Option<DecompositionNode>,
    pub oracle: Option<OracleReport>,
}

impl fmt::Display for FiberReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phi: Vec<String> = self
            .generators
            .iter()
            .zip(&self.character)
            .map(|(g, v)| format!("{g}={v}"))
            .collect();
        write!(f, "character: {}", phi.join(","))?;
        if self.normalized {
            write!(f, " (normalized to a primitive integer class)")?;
        }
        writeln!(f)?;
        writeln!(f, "k = {}", self.k)?;
        match &self.verdict {
            FiberVerdict::InSigma { rank, indices, .. } => {
                let idx: Vec<String> = indices.iter().map(ToString::to_string).collect();
                writeln!(f, "indices: {}", idx.join(" "))?;
                writeln!(f, "in Σ(G): kernel is free of rank {rank}")?;
                writeln!(f, "rank {rank}")?;
            }
            FiberVerdict::NotInSigma { witness, .. } => {
                writeln!(f, "{NOT_IN_SIGMA_TEXT}")?;
                writeln!(
                    f,
                    "witness: edge element t{witness} = {} is killed",
                    self.witness_element.as_deref().unwrap_or("?")
                )?;
            }
        }
        if let Some(o) = &self.oracle {
            writeln!(f, "alexander polynomial: {}", o.polynomial)?;
            match (o.hierarchy, o.degree, o.agree) {
                (Some(h), Some(_), Some(true)) => writeln!(f, "hierarchy=oracle={h}")?,
                (Some(h), d, _) => writeln!(
                    f,
                    "MISMATCH: hierarchy={h} decomposition={} oracle={}",
                    o.decomposition.map_or("?".into(), |x| x.to_string()),
                    d.map_or("?".into(), |x| x.to_string())
                )?,
                (None, d, _) => writeln!(
                    f,
                    "oracle degree {} (no rank to compare)",
                    d.map_or("undefined".into(), |x| x.to_string())
                )?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderReport {
    pub generators: Vec<String>,
    pub character: Vec<String>,
    pub polynomial: String,
    pub degree: Option<u64>,
    pub degenerate: bool,
}

impl fmt::Display for AlexanderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alexander polynomial: {}", self.polynomial)?;
        match self.degree {
            Some(d) => writeln!(f, "degree {d}"),
            None => writeln!(f, "degenerate: every maximal minor vanishes"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterVerdict {
    pub character: String,
    /// `None` when the criterion does not apply.
    pub in_sigma: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub source: String,
    pub generators: Vec<String>,
    pub b1: usize,
    pub lattice_basis: Vec<String>,
    /// Normals of the complement, in lattice coordinates. `None` when no
    /// arrangement is computed for this kind of input.
    pub spheres: Option<Vec<Vec<String>>>,
    pub characters: Vec<CharacterVerdict>,
    pub notes: Vec<String>,
}

impl fmt::Display for SigmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source)?;
        writeln!(f, "b1 = {}", self.b1)?;
        writeln!(f, "character lattice basis:")?;
        for (i, b) in self.lattice_basis.iter().enumerate() {
            writeln!(f, "  e{}: {b}", i + 1)?;
        }
        if let Some(s) = &self.spheres {
            writeln!(f, "spheres ({}):", s.len())?;
            for n in s {
                writeln!(f, "  {}", tuple(n))?;
            }
        }
        for c in &self.characters {
            let v = match c.in_sigma {
                Some(true) => "in Σ(G)",
                Some(false) => "not in Σ(G)",
                None => "undetermined",
            };
            writeln!(f, "{}: {v}", c.character)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopModulus {
    pub path: String,
    pub modulus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub word: String,
    pub z_star: String,
    pub weights: Vec<String>,
    pub kappa_vertices: Vec<String>,
    pub kappa_edges: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub p: u64,
    pub stable_value: i64,
    pub character: String,
    pub monodromy_order: String,
    pub fiber_rank: String,
    /// Rank from the Alexander polynomial, for comparison.
    pub oracle_rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbsReport {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub b1: usize,
    pub loops: Vec<LoopModulus>,
    pub modular_trivial: bool,
    pub elementary: Option<String>,
    pub center: Option<CenterReport>,
    pub kappa: Option<String>,
    pub epsilon: Option<String>,
    pub chi: Option<String>,
    pub spheres: Option<Vec<Vec<String>>>,
    pub bound: u64,
    /// Admissible `(k, n)` with both at most `bound`.
    pub admissible: Vec<(u64, u64)>,
    pub enumeration: Option<EnumerationReport>,
    pub notes: Vec<String>,
}

impl fmt::Display for GbsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "presentation: {}",
            presentation(&self.generators, &self.relators)
        )?;
        writeln!(f, "b1 = {}", self.b1)?;
        let status = if self.modular_trivial {
            "trivial"
        } else {
            "non-trivial"
        };
        writeln!(f, "modular map: {status}")?;
        for l in &self.loops {
            writeln!(f, "  loop {}: modulus {}", l.path, l.modulus)?;
        }
        if let Some(e) = &self.elementary {
            writeln!(f, "elementary: {e}")?;
        }
        if let Some(c) = &self.center {
            writeln!(f, "center: <{}>", c.word)?;
            writeln!(f, "  weights {}", c.weights.join(" "))?;
            writeln!(f, "  Z* = {}", c.z_star)?;
            writeln!(f, "  vertex indices {}", c.kappa_vertices.join(" "))?;
            writeln!(f, "  edge indices {}", c.kappa_edges.join(" "))?;
        }
        if let (Some(k), Some(e), Some(chi)) = (&self.kappa, &self.epsilon, &self.chi) {
            writeln!(f, "κ = {k}")?;
            writeln!(f, "ε = {e}")?;
            writeln!(f, "χ = {chi}")?;
        }
        if let Some(s) = &self.spheres {
            writeln!(f, "spheres ({}):", s.len())?;
            for n in s {
                writeln!(f, "  {}", tuple(n))?;
            }
        }
        if self.center.is_some() {
            let pairs: Vec<String> = self
                .admissible
                .iter()
                .map(|(k, n)| format!("({k}, {n})"))
                .collect();
            writeln!(
                f,
                "admissible (k, n) with k, n <= {}: {}",
                self.bound,
                if pairs.is_empty() {
                    "none".into()
                } else {
                    pairs.join(" ")
                }
            )?;
        }
        if let Some(e) = &self.enumeration {
            writeln!(f, "fibration p = {}: {}", e.p, e.character)?;
            writeln!(f, "  monodromy order {}", e.monodromy_order)?;
            writeln!(
                f,
                "  fiber rank {} (oracle {})",
                e.fiber_rank, e.oracle_rank
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub rank: usize,
    pub abelianization: Vec<Vec<String>>,
    pub unipotent_power: u64,
    pub validity: String,
    pub degree: u32,
    pub exponential_suspected: bool,
    pub lengths: Vec<usize>,
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.rank)?;
        writeln!(f, "validity: {}", self.validity)?;
        writeln!(f, "abelianization:")?;
        for r in &self.abelianization {
            writeln!(f, "  [{}]", r.join(" "))?;
        }
        writeln!(f, "least unipotent power k = {}", self.unipotent_power)?;
        let l: Vec<String> = self.lengths.iter().map(ToString::to_string).collect();
        writeln!(f, "cyclically reduced lengths: {}", l.join(" "))?;
        if self.exponential_suspected {
            writeln!(f, "growth looks exponential (heuristic)")
        } else {
            writeln!(f, "polynomial growth of degree {} (heuristic)", self.degree)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusInstance {
    /// The instance in input-file syntax.
    pub automorphism: String,
    pub phi: String,
    pub hierarchy: u64,
    pub decomposition: u64,
    pub oracle: u64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub instances: Vec<CorpusInstance>,
    pub files: Vec<String>,
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for (i, c) in self.instances.iter().enumerate() {
            writeln!(f, "instance {}:", i + 1)?;
            for line in c.automorphism.lines() {
                writeln!(f, "  {line}")?;
            }
            writeln!(f, "  phi {}", c.phi)?;
            if c.agree {
                writeln!(f, "  hierarchy=oracle={}", c.hierarchy)?;
            } else {
                writeln!(
                    f,
                    "  MISMATCH: hierarchy={} decomposition={} oracle={}",
                    c.hierarchy, c.decomposition, c.oracle
                )?;
            }
        }
        for p in &self.files {
            writeln!(f, "wrote {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(agree: bool) -> CorpusInstance {
        CorpusInstance {
            automorphism: "[automorphism]\nx1 -> x1\n".into(),
            phi: "x1=1,t=1".into(),
            hierarchy: 1,
            decomposition: 1,
            oracle: if agree { 1 } else { 2 },
            agree,
        }
    }

    #[test]
    fn mismatch_marks_failure() {
        let ok = Report::Corpus(CorpusReport {
            seed: 0,
            instances: vec![instance(true)],
            files: Vec::new(),
        });
        assert!(!ok.failed());
        assert!(ok.to_string().contains("hierarchy=oracle=1"));
        let bad = Report::Corpus(CorpusReport {
            seed: 0,
            instances: vec![instance(true), instance(false)],
            files: Vec::new(),
        });
        assert!(bad.failed());
        assert!(bad.to_string().contains("MISMATCH"));
    }

    #[test]
    fn report_json_is_tagged() {
        let r = Report::Alexander(AlexanderReport {
            generators: vec!["t".into()],
            character: vec!["1".into()],
            polynomial: "1".into(),
            degree: Some(0),
            degenerate: false,
        });
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["command"], "alexander");
        assert_eq!(serde_json::from_value::<Report>(v).unwrap(), r);
    }
}
