//! One function per subcommand, each producing a [`Report`].

use std::path::{Path, PathBuf};

use mtfib_core::alexander::{alexander_of, alexander_polynomial, oracle_rank};
use mtfib_core::bns::{
    gog_betti, gog_membership, reduce_gog, sigma_arrangement, sigma_contains, GraphOfGroupsZn,
};
use mtfib_core::corpus;
use mtfib_core::fiber::{classify, kernel_decomposition, FiberVerdict};
use mtfib_core::gbs::{
    admissible_parameters, betti, center, enumerate_fibrations, gbs_sigma_arrangement,
    kappa_epsilon, modular_map_loop, GbsGraph,
};
use mtfib_core::hierarchy::{HierarchyNode, NodeKind, TorusSource, UpgTorus};
use mtfib_core::input::{parse_file, InputDocument};
use mtfib_core::torus::{character_lattice_of, CharacterClass, CharacterLattice};
use mtfib_core::words::{growth_degree_estimate, least_unipotent_power, Validity};
use mtfib_core::{Error, Result, Word};

use crate::report::*;

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn validity_name(v: Validity) -> &'static str {
    match v {
        Validity::Triangular => "triangular",
        Validity::InverseChecked => "inverse checked",
        Validity::Composite => "composite",
        Validity::Unverified => "unverified (abelianization only)",
    }
}

fn format_character(generators: &[String], values: &[impl ToString]) -> String {
    generators
        .iter()
        .zip(values)
        .map(|(g, v)| format!("{g}={}", v.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

fn lattice_basis(generators: &[String], lattice: &CharacterLattice) -> Vec<String> {
    lattice
        .basis
        .iter()
        .map(|b| format_character(generators, b))
        .collect()
}

fn torus_of(file: &Path) -> Result<UpgTorus> {
    parse_file(file)?.torus()
}

fn hierarchy_report(t: &UpgTorus, node: &HierarchyNode) -> HierarchyReport {
    let fp = &t.filtered_presentation;
    let edge_name = |e: usize| t.filtered.edges()[e].name.clone();
    let mut r = HierarchyReport {
        kind: String::new(),
        rank: node.subgraph.rank(),
        edge: None,
        edge_element: None,
        edge_element_in_g: None,
        vertex: None,
        leaf_generators: Vec::new(),
        children: node
            .children()
            .into_iter()
            .map(|c| hierarchy_report(t, c))
            .collect(),
    };
    match &node.kind {
        NodeKind::Hnn {
            edge, edge_element, ..
        }
        | NodeKind::Amalgam {
            edge, edge_element, ..
        } => {
            r.kind = if matches!(node.kind, NodeKind::Hnn { .. }) {
                "hnn"
            } else {
                "amalgam"
            }
            .into();
            r.edge = Some(edge_name(*edge));
            r.edge_element = Some(fp.format_word(edge_element));
            r.edge_element_in_g = Some(t.presentation.format_word(&t.translate(edge_element)));
        }
        NodeKind::Leaf {
            vertex,
            cycle,
            stable,
            ..
        } => {
            r.kind = "leaf".into();
            r.vertex = Some(t.filtered.vertices()[*vertex].clone());
            r.leaf_generators = vec![fp.format_word(cycle), fp.format_word(stable)];
        }
    }
    r
}

pub fn analyze(file: &Path) -> Result<Report> {
    let doc = parse_file(file)?;
    let t = doc.torus()?;
    let (lattice, arr) = sigma_arrangement(&t)?;
    let p = &t.presentation;
    let basis = match &t.source {
        TorusSource::Automorphism {
            basis,
            automorphism,
        } if !basis.is_standard() => {
            let names: Vec<String> = (1..=automorphism.len()).map(|i| format!("x{i}")).collect();
            Some(
                basis
                    .forward
                    .iter()
                    .map(|w| w.format_with(&names))
                    .collect(),
            )
        }
        _ => None,
    };
    let edge_elements = t
        .hierarchy
        .edge_elements()
        .iter()
        .map(|(e, w)| {
            let g = t.translate(w);
            EdgeElementReport {
                edge: t.filtered.edges()[*e].name.clone(),
                word: p.format_word(&g),
                homology: strings(&lattice.pairing(&g)),
            }
        })
        .collect();
    Ok(Report::Analyze(AnalyzeReport {
        source: doc.kind().into(),
        rank: t.rank(),
        k: t.k,
        validity: t.validity.map(|v| validity_name(v).into()),
        basis,
        generators: p.generators.clone(),
        relators: p.relators.iter().map(|r| p.format_word(r)).collect(),
        filtered_generators: t.filtered_presentation.generators.clone(),
        filtered_relators: t
            .filtered_presentation
            .relators
            .iter()
            .map(|r| t.filtered_presentation.format_word(r))
            .collect(),
        hierarchy: hierarchy_report(&t, &t.hierarchy.root),
        splittings: t.hierarchy.splitting_count(),
        trivial_amalgams: t
            .hierarchy
            .trivial_amalgams
            .iter()
            .map(|&e| t.filtered.edges()[e].name.clone())
            .collect(),
        edge_elements,
        b1: lattice.b1,
        torsion: strings(&lattice.torsion),
        lattice_basis: lattice_basis(&p.generators, &lattice),
        spheres: arr.normals.iter().map(|n| strings(n)).collect(),
    }))
}

pub fn fiber(file: &Path, phi: &str, oracle: bool) -> Result<Report> {
    let t = torus_of(file)?;
    let gens = &t.presentation.generators;
    let chi = CharacterClass::parse(gens, phi)?;
    let c = classify(&t, &chi)?;
    let (decomposition, witness_element) = match &c.verdict {
        FiberVerdict::InSigma { .. } => (Some(kernel_decomposition(&t, &chi)?), None),
        FiberVerdict::NotInSigma { witness, .. } => {
            let w = &t.edge_elements()[witness - 1];
            (None, Some(t.presentation.format_word(w)))
        }
    };
    let oracle = if oracle {
        let a = alexander_polynomial(&t.presentation, &c.character)?;
        let hierarchy = c.verdict.rank();
        let decomposition = decomposition.as_ref().map(|d| d.rank);
        let degree = a.degree();
        Some(OracleReport {
            polynomial: a.polynomial.to_string(),
            degree,
            hierarchy,
            decomposition,
            agree: hierarchy.map(|h| Some(h) == degree && Some(h) == decomposition),
        })
    } else {
        None
    };
    Ok(Report::Fiber(FiberReport {
        generators: gens.clone(),
        character: strings(&c.character),
        normalized: c.normalized,
        k: t.k,
        verdict: c.verdict,
        witness_element,
        decomposition: decomposition.map(|d| d.root),
        oracle,
    }))
}

/// Generators and relators of any input kind that presents a group.
fn group_presentation(doc: &InputDocument) -> Result<(Vec<String>, Vec<Word>)> {
    match doc {
        InputDocument::Gbs(g) => Ok((g.generators(), g.relators())),
        InputDocument::Gog(g) => {
            let p = g.presentation();
            Ok((p.generators, p.relators))
        }
        other => {
            let t = other.torus()?;
            Ok((t.presentation.generators, t.presentation.relators))
        }
    }
}

pub fn alexander(file: &Path, phi: &str) -> Result<Report> {
    let doc = parse_file(file)?;
    let (gens, rels) = group_presentation(&doc)?;
    let chi = CharacterClass::parse(&gens, phi)?;
    chi.validate_relators(&gens, &rels)?;
    let (values, _) = chi.primitive()?;
    let a = alexander_of(&rels, &values)?;
    Ok(Report::Alexander(AlexanderReport {
        generators: gens,
        character: strings(&values),
        polynomial: a.polynomial.to_string(),
        degree: a.degree(),
        degenerate: a.degenerate,
    }))
}

fn gog_verdicts(
    g: &GraphOfGroupsZn,
    gens: &[String],
    phis: &[String],
    notes: &mut Vec<String>,
) -> Result<Vec<CharacterVerdict>> {
    let mut out = Vec::new();
    for text in phis {
        let chi = CharacterClass::parse(gens, text)?;
        let in_sigma = match gog_membership(g, &chi) {
            Ok(b) => Some(b),
            Err(Error::AscendingHnn) => {
                notes.push(format!("{}: {}", text, Error::AscendingHnn));
                None
            }
            Err(e) => return Err(e),
        };
        out.push(CharacterVerdict {
            character: chi.format_with(gens),
            in_sigma,
        });
    }
    Ok(out)
}

pub fn sigma(file: &Path, phis: &[String]) -> Result<Report> {
    let doc = parse_file(file)?;
    let mut notes = Vec::new();
    let report = match &doc {
        InputDocument::Gog(g) => {
            let p = g.presentation();
            let lattice = character_lattice_of(&p.relators, p.generators.len());
            let (reduced, collapses) = reduce_gog(g);
            for c in &collapses {
                notes.push(format!("collapsed edge {} into {}", c.removed, c.kept));
            }
            if reduced.is_ascending_hnn() {
                notes.push("the reduced graph is an ascending HNN extension".into());
            }
            let characters = gog_verdicts(g, &p.generators, phis, &mut notes)?;
            debug_assert_eq!(gog_betti(g), lattice.b1);
            SigmaReport {
                source: doc.kind().into(),
                lattice_basis: lattice_basis(&p.generators, &lattice),
                generators: p.generators,
                b1: lattice.b1,
                spheres: None,
                characters,
                notes,
            }
        }
        InputDocument::Gbs(g) => {
            let gens = g.generators();
            let lattice = character_lattice_of(&g.relators(), gens.len());
            let spheres = match center(g) {
                Ok(c) => Some(
                    gbs_sigma_arrangement(g, &c)?
                        .normals
                        .iter()
                        .map(|n| strings(n))
                        .collect(),
                ),
                Err(Error::NontrivialModular { .. }) => {
                    notes.push(trivial_center_note(g)?);
                    None
                }
                Err(Error::ElementaryGbs(m)) => {
                    notes.push(format!("elementary GBS group ({m})"));
                    None
                }
                Err(e) => return Err(e),
            };
            let characters = gog_verdicts(&g.to_gog()?, &gens, phis, &mut notes)?;
            SigmaReport {
                source: doc.kind().into(),
                lattice_basis: lattice_basis(&gens, &lattice),
                generators: gens,
                b1: lattice.b1,
                spheres,
                characters,
                notes,
            }
        }
        _ => {
            let t = doc.torus()?;
            let (lattice, arr) = sigma_arrangement(&t)?;
            let gens = &t.presentation.generators;
            let mut characters = Vec::new();
            for text in phis {
                let chi = CharacterClass::parse(gens, text)?;
                chi.validate(&t.presentation)?;
                characters.push(CharacterVerdict {
                    character: chi.format_with(gens),
                    in_sigma: Some(sigma_contains(&lattice, &arr, &chi)?),
                });
            }
            SigmaReport {
                source: doc.kind().into(),
                generators: gens.clone(),
                b1: lattice.b1,
                lattice_basis: lattice_basis(gens, &lattice),
                spheres: Some(arr.normals.iter().map(|n| strings(n)).collect()),
                characters,
                notes,
            }
        }
    };
    Ok(Report::Sigma(report))
}

pub struct GbsOptions {
    pub enumerate: Option<u64>,
    pub bound: u64,
    pub stable_value: i64,
}

fn gbs_graph(file: &Path) -> Result<GbsGraph> {
    match parse_file(file)? {
        InputDocument::Gbs(g) => Ok(g),
        other => Err(Error::Precondition(format!(
            "expected a [gbs] file, got a {} file",
            other.kind()
        ))),
    }
}

/// Σ(G) is empty when the center is trivial, except for the solvable
/// groups BS(1,k), which are ascending HNN extensions.
fn trivial_center_note(g: &GbsGraph) -> Result<String> {
    let (reduced, _) = reduce_gog(&g.to_gog()?);
    Ok(if reduced.is_ascending_hnn() {
        "center trivial, but G is a solvable ascending HNN extension: Σ(G) is not determined by the center".into()
    } else {
        "center trivial, Σ(G) = ∅".into()
    })
}

pub fn gbs(file: &Path, opts: &GbsOptions) -> Result<Report> {
    let g = gbs_graph(file)?;
    let gens = g.generators();
    let rels = g.relators();
    // the graph formula for b1 needs a trivial modular map
    let b1 = character_lattice_of(&rels, gens.len()).b1;
    let mut loops = Vec::new();
    let mut modular_trivial = true;
    for (_, path) in g.fundamental_loops() {
        let m = modular_map_loop(&g, &path)?;
        modular_trivial &= m.numer() == m.denom();
        loops.push(LoopModulus {
            path: g.describe_path(&path),
            modulus: m.to_string(),
        });
    }
    let mut report = GbsReport {
        relators: rels.iter().map(|r| r.format_with(&gens)).collect(),
        generators: gens.clone(),
        b1,
        loops,
        modular_trivial,
        elementary: None,
        center: None,
        kappa: None,
        epsilon: None,
        chi: None,
        spheres: None,
        bound: opts.bound,
        admissible: Vec::new(),
        enumeration: None,
        notes: Vec::new(),
    };
    let c = match center(&g) {
        Ok(c) => c,
        Err(Error::NontrivialModular { loop_desc, modulus }) => {
            report.notes.push(trivial_center_note(&g)?);
            report
                .notes
                .push(format!("loop {loop_desc} has modulus {modulus}"));
            return Ok(Report::Gbs(report));
        }
        Err(Error::ElementaryGbs(m)) => {
            report.elementary = Some(m);
            report
                .notes
                .push("elementary GBS group; κ and ε are not defined".into());
            return Ok(Report::Gbs(report));
        }
        Err(e) => return Err(e),
    };
    let ke = kappa_epsilon(&c);
    let b1 = betti(&g)?;
    report.center = Some(CenterReport {
        word: c.center.format_with(&gens),
        z_star: c.z_star.to_string(),
        weights: strings(&c.weights),
        kappa_vertices: strings(&c.kappa_vertices),
        kappa_edges: strings(&c.kappa_edges),
    });
    report.kappa = Some(ke.kappa.to_string());
    report.epsilon = Some(ke.epsilon.to_string());
    report.chi = Some(ke.chi.to_string());
    report.spheres = Some(
        gbs_sigma_arrangement(&g, &c)?
            .normals
            .iter()
            .map(|n| strings(n))
            .collect(),
    );
    for k in 1..=opts.bound {
        for n in 1..=opts.bound {
            if admissible_parameters(&ke, b1, k, n) {
                report.admissible.push((k, n));
            }
        }
    }
    if let Some(p) = opts.enumerate {
        let f = enumerate_fibrations(&g, &c, p, opts.stable_value)?;
        report.enumeration = Some(EnumerationReport {
            p,
            stable_value: opts.stable_value,
            character: format_character(&gens, &f.character),
            monodromy_order: f.monodromy_order.to_string(),
            fiber_rank: f.fiber_rank.to_string(),
            oracle_rank: oracle_rank(&rels, &f.character)?,
        });
    }
    Ok(Report::Gbs(report))
}

pub fn growth(file: &Path, iterations: usize) -> Result<Report> {
    let a = match parse_file(file)? {
        InputDocument::Automorphism { automorphism, .. } => automorphism,
        other => {
            return Err(Error::Precondition(format!(
                "growth needs an [automorphism] file, got a {} file",
                other.kind()
            )))
        }
    };
    let m = a.abelianization_matrix();
    let k = least_unipotent_power(&m)?.ok_or(Error::NotPolynomiallyGrowing)?;
    let est = growth_degree_estimate(&a, iterations)?;
    Ok(Report::Growth(GrowthReport {
        rank: a.rank(),
        abelianization: m.rows().iter().map(|r| strings(r)).collect(),
        unipotent_power: k,
        validity: validity_name(a.validity()).into(),
        degree: est.degree,
        exponential_suspected: est.exponential_suspected,
        lengths: est.lengths,
    }))
}

pub struct CorpusOptions {
    pub seed: u64,
    pub count: usize,
    pub max_rank: usize,
    pub out: Option<PathBuf>,
}

pub fn corpus(opts: &CorpusOptions) -> Result<Report> {
    if opts.max_rank < 2 {
        return Err(Error::Precondition("--max-rank must be at least 2".into()));
    }
    let mut rng = corpus::rng(opts.seed);
    let mut instances = Vec::new();
    let mut files = Vec::new();
    let mut attempts = 0;
    while instances.len() < opts.count {
        attempts += 1;
        if attempts > 20 * opts.count + 20 {
            return Err(Error::Internal(
                "too many instances without a character in Σ".into(),
            ));
        }
        let n = 2 + attempts % (opts.max_rank - 1);
        let a = corpus::random_triangular_automorphism(&mut rng, n, 4);
        let t = UpgTorus::from_automorphism(&a)?;
        let Some(v) = corpus::sample_sigma_character(&mut rng, &t) else {
            continue;
        };
        let chi = CharacterClass::from_bigints(&v);
        let hierarchy = classify(&t, &chi)?
            .verdict
            .rank()
            .ok_or_else(|| Error::Internal("sampled character is not in Σ".into()))?;
        let decomposition = kernel_decomposition(&t, &chi)?.rank;
        let oracle = oracle_rank(&t.presentation.relators, &v)?;
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let mut text = String::from("[automorphism]\n");
        for (i, w) in a.images().iter().enumerate() {
            text.push_str(&format!("x{} -> {}\n", i + 1, w.format_with(&names)));
        }
        if let Some(dir) = &opts.out {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Precondition(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!(
                "corpus_{}_{}.aut.txt",
                opts.seed,
                instances.len() + 1
            ));
            let body = format!(
                "# phi {}\n{text}",
                chi.format_with(&t.presentation.generators)
            );
            std::fs::write(&path, body)
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            files.push(path.display().to_string());
        }
        instances.push(CorpusInstance {
            automorphism: text,
            phi: chi.format_with(&t.presentation.generators),
            hierarchy,
            decomposition,
            oracle,
            agree: hierarchy == decomposition && decomposition == oracle,
        });
    }
    Ok(Report::Corpus(CorpusReport {
        seed: opts.seed,
        instances,
        files,
    }))
}
