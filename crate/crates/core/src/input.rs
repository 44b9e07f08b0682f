//! The line-oriented input format. See `FORMAT.md` for the grammar.

use num_bigint::BigInt;

use crate::bns::{GogEdge, GogVertex, GraphOfGroupsZn};
use crate::error::{Error, Result};
use crate::gbs::{GbsEdge, GbsGraph};
use crate::hierarchy::UpgTorus;
use crate::torus::{Basis, Edge, FilteredGraphMap};
use crate::words::{FreeAutomorphism, Word};

/// One parsed input file. Each file describes exactly one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputDocument {
    Automorphism {
        automorphism: FreeAutomorphism,
        basis: Option<Basis>,
    },
    FilteredMap(FilteredGraphMap),
    Gbs(GbsGraph),
    Gog(GraphOfGroupsZn),
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDocument::Automorphism { .. } => "automorphism",
            InputDocument::FilteredMap(_) => "filtered map",
            InputDocument::Gbs(_) => "gbs",
            InputDocument::Gog(_) => "gog",
        }
    }

    /// The mapping torus of an automorphism or filtered-map document.
    pub fn torus(&self) -> Result<UpgTorus> {
        match self {
            InputDocument::Automorphism {
                automorphism,
                basis: Some(b),
            } => UpgTorus::with_basis(automorphism, b.clone()),
            InputDocument::Automorphism { automorphism, .. } => {
                UpgTorus::from_automorphism(automorphism)
            }
            InputDocument::FilteredMap(f) => UpgTorus::from_filtered(f),
            other => Err(Error::Precondition(format!(
                "a {} file does not describe a mapping torus",
                other.kind()
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    })
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

#[derive(Debug)]
struct Line<'a> {
    pos: Pos,
    tokens: Vec<Token<'a>>,
}

#[derive(Debug)]
struct Section<'a> {
    name: &'a str,
    pos: Pos,
    lines: Vec<Line<'a>>,
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain([(line.len(), ' ')]) {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    pos: Pos {
                        line: line_no,
                        column: line[..s].chars().count() + 1,
                    },
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

fn sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let pos = Pos {
            line: i + 1,
            column: content.len() - content.trim_start().len() + 1,
        };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(pos, "section header must end with ']'");
            };
            if out.iter().any(|s| s.name == name) {
                return err(pos, format!("section [{name}] appears twice"));
            }
            out.push(Section {
                name,
                pos,
                lines: Vec::new(),
            });
            continue;
        }
        let Some(section) = out.last_mut() else {
            return err(pos, "content before the first section header");
        };
        section.lines.push(Line {
            pos,
            tokens: tokenize(i + 1, content),
        });
    }
    Ok(out)
}

/// Parses a word from tokens; `resolve` maps a name to its 1-based index.
fn parse_word(tokens: &[Token], resolve: &dyn Fn(&str) -> Option<usize>) -> Result<Word> {
    let mut letters = Vec::new();
    for t in tokens {
        if t.text == "1" {
            continue;
        }
        let (base, exp) = match t.text.split_once('^') {
            Some((b, e)) => match e.parse::<i32>() {
                Ok(e) => (b, e),
                Err(_) => return err(t.pos, format!("bad exponent in {:?}", t.text)),
            },
            None => (t.text, 1),
        };
        let (index, sign) = match resolve(base) {
            Some(i) => (i, 1),
            None => {
                let mut chars = base.chars();
                let lowered: Option<String> = chars
                    .next()
                    .filter(char::is_ascii_uppercase)
                    .map(|c| c.to_ascii_lowercase().to_string() + chars.as_str());
                match lowered.as_deref().and_then(resolve) {
                    Some(i) => (i, -1),
                    None => return err(t.pos, format!("unknown generator {base:?}")),
                }
            }
        };
        let l = sign * index as i32;
        let l = if exp < 0 { -l } else { l };
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(Word::from_letters(letters))
}

/// `prefix<i>` with `1 <= i <= n`.
fn indexed(name: &str, prefix: &str, n: usize) -> Option<usize> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits
        .parse::<usize>()
        .ok()
        .filter(|&i| (1..=n).contains(&i))
}

/// Lines of the form `<lhs> -> <word>`; returns `(lhs token, rhs tokens)`.
fn arrow_lines<'a, 'b>(section: &'b Section<'a>) -> Result<Vec<(&'b Token<'a>, &'b [Token<'a>])>> {
    section
        .lines
        .iter()
        .map(|l| match l.tokens.as_slice() {
            [lhs, arrow, rest @ ..] if arrow.text == "->" => Ok((lhs, rest)),
            _ => err(l.pos, "expected `<name> -> <word>`"),
        })
        .collect()
}

fn parse_images(
    section: &Section,
    prefix: &str,
    n: usize,
    target_prefix: &str,
) -> Result<Vec<Word>> {
    let mut images: Vec<Option<Word>> = vec![None; n];
    for (lhs, rhs) in arrow_lines(section)? {
        let Some(i) = indexed(lhs.text, prefix, n) else {
            return err(
                lhs.pos,
                format!("expected {prefix}1 .. {prefix}{n}, got {:?}", lhs.text),
            );
        };
        let w = parse_word(rhs, &|s| indexed(s, target_prefix, n))?;
        if images[i - 1].replace(w).is_some() {
            return err(lhs.pos, format!("{} defined twice", lhs.text));
        }
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or(())
                .or_else(|_| err(section.pos, format!("no line for {prefix}{}", i + 1)))
        })
        .collect()
}

/// The lines of a `[basis]` section that define `y`s, or the others.
fn subsection<'a>(b: &Section<'a>, ys: bool) -> Section<'a> {
    Section {
        name: b.name,
        pos: b.pos,
        lines: b
            .lines
            .iter()
            .filter(|l| l.tokens[0].text.starts_with('y') == ys)
            .map(|l| Line {
                pos: l.pos,
                tokens: l.tokens.clone(),
            })
            .collect(),
    }
}

fn automorphism(secs: &[Section]) -> Result<InputDocument> {
    let get = |name: &str| secs.iter().find(|s| s.name == name);
    let a = get("automorphism").unwrap();
    let n = a.lines.len();
    if n == 0 {
        return err(a.pos, "empty [automorphism] section");
    }
    let images = parse_images(a, "x", n, "x")?;
    let automorphism = match get("inverse") {
        Some(inv) => {
            if inv.lines.len() != n {
                return err(inv.pos, format!("[inverse] needs {n} lines"));
            }
            FreeAutomorphism::with_inverse(n, images, parse_images(inv, "x", n, "x")?)?
        }
        None => FreeAutomorphism::new(n, images)?,
    };
    let basis = match get("basis") {
        Some(b) => {
            // y_i in terms of x, and x_i in terms of y
            let fwd = subsection(b, true);
            let back = subsection(b, false);
            let forward = parse_images(&fwd, "y", n, "x")?;
            let backward = parse_images(&back, "x", n, "y")?;
            Some(Basis::new(forward, backward).or_else(|e| err(b.pos, e.to_string()))?)
        }
        None => None,
    };
    Ok(InputDocument::Automorphism {
        automorphism,
        basis,
    })
}

fn name_ok(t: &Token) -> Result<()> {
    let mut chars = t.text.chars();
    let first_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
    if first_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        err(
            t.pos,
            format!(
                "names start with a lowercase letter, then letters, digits or '_': {:?}",
                t.text
            ),
        )
    }
}

fn vertex_index(vertices: &[String], t: &Token) -> Result<usize> {
    vertices
        .iter()
        .position(|v| v == t.text)
        .map_or_else(|| err(t.pos, format!("unknown vertex {:?}", t.text)), Ok)
}

fn vertices_line(section: &Section) -> Result<(Vec<String>, usize)> {
    let Some(first) = section.lines.first() else {
        return err(section.pos, format!("empty [{}] section", section.name));
    };
    match first.tokens.as_slice() {
        [kw, names @ ..] if kw.text == "vertices" && !names.is_empty() => {
            let mut out: Vec<String> = Vec::new();
            for t in names {
                name_ok(t)?;
                if out.iter().any(|v| v == t.text) {
                    return err(t.pos, format!("duplicate vertex {:?}", t.text));
                }
                out.push(t.text.to_string());
            }
            Ok((out, 1))
        }
        _ => err(
            first.pos,
            "expected `vertices <name> ...` as the first line",
        ),
    }
}

fn filtered(secs: &[Section]) -> Result<InputDocument> {
    let graph = secs.iter().find(|s| s.name == "graph").unwrap();
    let Some(map) = secs.iter().find(|s| s.name == "map") else {
        return err(graph.pos, "[graph] needs a [map] section");
    };
    let (vertices, skip) = vertices_line(graph)?;
    let mut edges: Vec<Edge> = Vec::new();
    for l in &graph.lines[skip..] {
        match l.tokens.as_slice() {
            [kw, name, o, t] if kw.text == "edge" => {
                name_ok(name)?;
                if edges.iter().any(|e| e.name == name.text)
                    || vertices.iter().any(|v| v == name.text)
                {
                    return err(name.pos, format!("duplicate name {:?}", name.text));
                }
                edges.push(Edge {
                    name: name.text.to_string(),
                    origin: vertex_index(&vertices, o)?,
                    terminus: vertex_index(&vertices, t)?,
                });
            }
            _ => return err(l.pos, "expected `edge <name> <origin> <terminus>`"),
        }
    }
    let resolve = |s: &str| edges.iter().position(|e| e.name == s).map(|k| k + 1);
    let mut suffixes: Vec<Option<Word>> = vec![None; edges.len()];
    for (lhs, rhs) in arrow_lines(map)? {
        let Some(k) = resolve(lhs.text) else {
            return err(lhs.pos, format!("unknown edge {:?}", lhs.text));
        };
        let image = parse_word(rhs, &resolve)?;
        if image.letters().first() != Some(&(k as i32))
            || rhs.first().map(|t| t.text) != Some(lhs.text)
        {
            return err(
                lhs.pos,
                format!("the image of {0} must start with {0}", lhs.text),
            );
        }
        let suffix = Word::letter(-(k as i32)).mul(&image);
        if suffixes[k - 1].replace(suffix).is_some() {
            return err(lhs.pos, format!("{} mapped twice", lhs.text));
        }
    }
    let suffixes = suffixes
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let f = FilteredGraphMap::new(vertices, edges, suffixes)
        .or_else(|e| err(map.pos, e.to_string()))?;
    Ok(InputDocument::FilteredMap(f))
}

fn stable_name(rest: &[Token], line: &Line) -> Result<Option<String>> {
    match rest {
        [] => Ok(None),
        [kw] if kw.text == "tree" => Ok(None),
        [kw, name] if kw.text == "loop" => {
            name_ok(name)?;
            Ok(Some(name.text.to_string()))
        }
        _ => err(
            line.pos,
            "expected `tree` or `loop <name>` at the end of the edge",
        ),
    }
}

fn int<T: std::str::FromStr>(t: &Token) -> Result<T> {
    t.text
        .parse()
        .or_else(|_| err(t.pos, format!("expected an integer, got {:?}", t.text)))
}

fn gbs(secs: &[Section]) -> Result<InputDocument> {
    let s = &secs[0];
    let (vertices, skip) = vertices_line(s)?;
    let mut edges = Vec::new();
    for l in &s.lines[skip..] {
        match l.tokens.as_slice() {
            [kw, u, v, a, b, rest @ ..] if kw.text == "edge" => edges.push(GbsEdge {
                origin: vertex_index(&vertices, u)?,
                terminus: vertex_index(&vertices, v)?,
                origin_label: int(a)?,
                terminus_label: int(b)?,
                stable: stable_name(rest, l)?,
            }),
            _ => {
                return err(
                    l.pos,
                    "expected `edge <u> <v> <label_u> <label_v> [tree | loop <name>]`",
                )
            }
        }
    }
    let g = GbsGraph::new(vertices, edges).or_else(|e| err(s.pos, e.to_string()))?;
    Ok(InputDocument::Gbs(g))
}

/// `[a,b;c,d]`: rows separated by `;`, entries by `,`.
fn matrix(t: &Token) -> Result<Vec<Vec<BigInt>>> {
    let Some(body) = t.text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
        return err(
            t.pos,
            format!("expected a matrix like [1,0;0,2], got {:?}", t.text),
        );
    };
    let rows: Vec<Vec<BigInt>> = body
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
        })
        .collect::<std::result::Result<_, _>>()
        .or_else(|_| err(t.pos, format!("bad matrix entry in {:?}", t.text)))?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return err(t.pos, "matrix rows have different lengths");
    }
    Ok(rows)
}

fn gog(secs: &[Section]) -> Result<InputDocument> {
    let s = &secs[0];
    let mut vertices: Vec<GogVertex> = Vec::new();
    let mut edges = Vec::new();
    for l in &s.lines {
        match l.tokens.as_slice() {
            [kw, name, rank] if kw.text == "vertex" => {
                name_ok(name)?;
                vertices.push(GogVertex {
                    name: name.text.to_string(),
                    rank: int(rank)?,
                });
            }
            [kw, u, v, a, b, rest @ ..] if kw.text == "edge" => {
                let names: Vec<String> = vertices.iter().map(|x| x.name.clone()).collect();
                let into_origin = matrix(a)?;
                let into_terminus = matrix(b)?;
                edges.push(GogEdge {
                    origin: vertex_index(&names, u)?,
                    terminus: vertex_index(&names, v)?,
                    rank: into_origin[0].len(),
                    into_origin,
                    into_terminus,
                    stable: stable_name(rest, l)?,
                });
            }
            _ => {
                return err(
                    l.pos,
                    "expected `vertex <name> <rank>` or `edge <u> <v> <matrix> <matrix> [tree | loop <name>]`",
                )
            }
        }
    }
    let g = GraphOfGroupsZn::new(vertices, edges).or_else(|e| err(s.pos, e.to_string()))?;
    Ok(InputDocument::Gog(g))
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    let secs = sections(text)?;
    let Some(first) = secs.first() else {
        return err(Pos { line: 1, column: 1 }, "empty input");
    };
    let names: Vec<&str> = secs.iter().map(|s| s.name).collect();
    let allowed: &[&str] = match first.name {
        "automorphism" => &["automorphism", "inverse", "basis"],
        "graph" => &["graph", "map"],
        "gbs" => &["gbs"],
        "gog" => &["gog"],
        other => return err(first.pos, format!("unknown section [{other}]")),
    };
    if let Some(s) = secs.iter().find(|s| !allowed.contains(&s.name)) {
        return err(
            s.pos,
            format!(
                "section [{}] cannot follow [{}]; one object per file",
                s.name, first.name
            ),
        );
    }
    match names[0] {
        "automorphism" => automorphism(&secs),
        "graph" => filtered(&secs),
        "gbs" => gbs(&secs),
        _ => gog(&secs),
    }
}

pub fn parse_file(path: &std::path::Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_document(&text)
}
