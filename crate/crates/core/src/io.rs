//! Cover-list file format and Hasse-diagram export.
//!
//! Cover-list text format v1: a line `n <count>`; zero or more lines
//! `<i> <j>` meaning `i` strictly below `j`; optional lines
//! `label <i> <utf8-string>`; `#` starts a comment to end of line; blank
//! lines are ignored. Ids are 0-based decimal.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{Chain, FiniteLattice, LatticeError};
use crate::modularity::PentagonWitness;

/// Errors from reading a cover-list file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cover file does not describe a lattice: {source}")]
    Build {
        #[from]
        source: LatticeError,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_id(token: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    let id: usize = token
        .parse()
        .map_err(|_| syntax(line, format!("expected an element id, found `{token}`")))?;
    if id >= n {
        return Err(syntax(line, format!("id {id} out of range for n {n}")));
    }
    Ok(id)
}

struct RawCoverFile {
    n: usize,
    /// `(line, i, j)` in file order.
    edges: Vec<(usize, usize, usize)>,
    labels: Vec<(usize, String)>,
}

fn parse_raw(text: &str) -> Result<RawCoverFile, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let first = tokens.next().unwrap();
        match first {
            "n" => {
                if n.is_some() {
                    return Err(syntax(line, "duplicate `n` line"));
                }
                let count = tokens
                    .next()
                    .ok_or_else(|| syntax(line, "`n` needs a count"))?;
                if tokens.next().is_some() {
                    return Err(syntax(line, "trailing tokens after `n <count>`"));
                }
                let count: usize = count
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid count `{count}`")))?;
                n = Some(count);
            }
            "label" => {
                let n = n.ok_or_else(|| syntax(line, "`label` before the `n` line"))?;
                let id_token = tokens
                    .next()
                    .ok_or_else(|| syntax(line, "`label` needs an id"))?;
                let id = parse_id(id_token, n, line)?;
                let rest = content
                    .strip_prefix("label")
                    .and_then(|s| s.trim_start().strip_prefix(id_token))
                    .map(|s| s.trim_start())
                    .unwrap_or("");
                if rest.is_empty() {
                    return Err(syntax(line, "`label` needs text"));
                }
                labels.push((id, rest.to_string()));
            }
            _ => {
                let n = n.ok_or_else(|| syntax(line, "cover pair before the `n` line"))?;
                let i = parse_id(first, n, line)?;
                let j_token = tokens
                    .next()
                    .ok_or_else(|| syntax(line, "cover pair needs two ids"))?;
                let j = parse_id(j_token, n, line)?;
                if tokens.next().is_some() {
                    return Err(syntax(line, "trailing tokens after cover pair"));
                }
                edges.push((line, i, j));
            }
        }
    }

    let n = n.ok_or_else(|| syntax(last_line + 1, "missing `n <count>` line"))?;
    Ok(RawCoverFile { n, edges, labels })
}

fn build(raw: RawCoverFile) -> Result<FiniteLattice, ParseError> {
    let edges: Vec<(usize, usize)> = raw.edges.iter().map(|&(_, i, j)| (i, j)).collect();
    let lattice = FiniteLattice::from_covers(raw.n, &edges)?;
    let mut label_vec = vec![None; raw.n];
    for (id, text) in raw.labels {
        label_vec[id] = Some(text);
    }
    Ok(lattice.with_labels(label_vec))
}

/// Parses cover-list text into a validated lattice with labels attached.
/// Redundant (non-cover) edges are accepted and absorbed.
pub fn parse_cover_file(text: &str) -> Result<FiniteLattice, ParseError> {
    build(parse_raw(text)?)
}

/// Like [`parse_cover_file`] but rejects files whose edge list is not
/// exactly the cover relation: duplicate or transitively implied edges are
/// errors instead of being absorbed.
pub fn parse_cover_file_strict(text: &str) -> Result<FiniteLattice, ParseError> {
    let raw = parse_raw(text)?;
    let lattice = build(RawCoverFile {
        n: raw.n,
        edges: raw.edges.clone(),
        labels: raw.labels.clone(),
    })?;
    let mut seen = std::collections::BTreeSet::new();
    for &(line, i, j) in &raw.edges {
        if !lattice.is_cover(i, j) {
            return Err(syntax(
                line,
                format!("edge {i} {j} is not a cover relation (strict mode)"),
            ));
        }
        if !seen.insert((i, j)) {
            return Err(syntax(
                line,
                format!("duplicate edge {i} {j} (strict mode)"),
            ));
        }
    }
    Ok(lattice)
}

/// Serializes a lattice to cover-list text: the `n` line, covers sorted,
/// then labels ascending by id. `parse_cover_file` inverts this exactly.
pub fn serialize_cover_file(l: &FiniteLattice) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", l.len()).unwrap();
    for &(i, j) in l.covers() {
        writeln!(out, "{i} {j}").unwrap();
    }
    for e in l.elements() {
        if let Some(label) = l.label(e) {
            writeln!(out, "label {e} {label}").unwrap();
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the Hasse diagram as a DOT digraph: one node per element
/// (labelled by metadata label or id), one upward edge per cover,
/// rank-aligned layers when the lattice is graded. Edges of `highlight`
/// and the `{x, y, z}` nodes of each pentagon witness are styled
/// distinctly. The output is byte-deterministic for fixed input.
pub fn export_dot(
    l: &FiniteLattice,
    highlight: Option<&Chain>,
    witnesses: &[PentagonWitness],
) -> String {
    let mut pentagon_node = vec![false; l.len()];
    for w in witnesses {
        for v in [w.x, w.y, w.z] {
            pentagon_node[v] = true;
        }
    }
    let mut highlight_edge = vec![false; l.covers().len()];
    if let Some(chain) = highlight {
        for pair in chain.elements().windows(2) {
            if let Ok(k) = l.covers().binary_search(&(pair[0], pair[1])) {
                highlight_edge[k] = true;
            }
        }
    }

    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box];\n");
    for e in l.elements() {
        let label = match l.label(e) {
            Some(text) => dot_escape(text),
            None => e.to_string(),
        };
        if pentagon_node[e] {
            writeln!(out, "  {e} [label=\"{label}\", color=red, fontcolor=red];").unwrap();
        } else {
            writeln!(out, "  {e} [label=\"{label}\"];").unwrap();
        }
    }
    if let Ok(rho) = l.rank_function() {
        let max = rho.rank(l.top());
        for r in 0..=max {
            let layer: Vec<String> = l
                .elements()
                .filter(|&e| rho.rank(e) == r)
                .map(|e| format!("{e};"))
                .collect();
            writeln!(out, "  {{ rank=same; {} }}", layer.join(" ")).unwrap();
        }
    }
    for (k, &(i, j)) in l.covers().iter().enumerate() {
        if highlight_edge[k] {
            writeln!(out, "  {i} -> {j} [color=blue, penwidth=2.5];").unwrap();
        } else {
            writeln!(out, "  {i} -> {j};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, pentagon_lattice, Family, FamilySpec};
    use crate::modularity::{find_pentagon, PentagonConstraint};

    #[test]
    fn parse_two_chain() {
        let l = parse_cover_file("n 2\n0 1\n").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.covers(), &[(0, 1)]);
    }

    #[test]
    fn parse_n5() {
        let l = parse_cover_file("n 5\n0 1\n1 2\n2 4\n0 3\n3 4\n").unwrap();
        assert_eq!(l.covers(), pentagon_lattice().covers());
    }

    #[test]
    fn parse_comments_blank_lines_labels() {
        let text = "# a pentagon\nn 5\n\n0 1  # long side starts\n1 2\n2 4\n0 3\n3 4\nlabel 3 short side\n";
        let l = parse_cover_file(text).unwrap();
        assert_eq!(l.label(3), Some("short side"));
        assert_eq!(l.label(0), None);
    }

    #[test]
    fn parse_errors() {
        let err = parse_cover_file("n 2\n0 2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                message: "id 2 out of range for n 2".into()
            }
        );
        assert!(matches!(
            parse_cover_file("0 1\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_cover_file("n 2\n0\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_cover_file(""),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_cover_file("n 2\nn 3\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        // Build failures carry through with context.
        assert!(matches!(
            parse_cover_file("n 2\n0 1\n1 0\n"),
            Err(ParseError::Build {
                source: LatticeError::CycleDetected
            })
        ));
    }

    #[test]
    fn strict_mode() {
        let reduced = "n 3\n0 1\n1 2\n";
        assert!(parse_cover_file_strict(reduced).is_ok());
        let redundant = "n 3\n0 1\n1 2\n0 2\n";
        assert!(parse_cover_file(redundant).is_ok());
        assert_eq!(
            parse_cover_file_strict(redundant),
            Err(ParseError::Syntax {
                line: 4,
                message: "edge 0 2 is not a cover relation (strict mode)".into()
            })
        );
        let duplicate = "n 2\n0 1\n0 1\n";
        assert!(matches!(
            parse_cover_file_strict(duplicate),
            Err(ParseError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn round_trip_families() {
        for spec in [
            FamilySpec {
                family: Family::Boolean,
                parameter: 3,
            },
            FamilySpec {
                family: Family::Partition,
                parameter: 4,
            },
            FamilySpec {
                family: Family::Divisor,
                parameter: 12,
            },
            FamilySpec {
                family: Family::N5,
                parameter: 0,
            },
        ] {
            let l = make_family(&spec).unwrap();
            let text = serialize_cover_file(&l);
            let back = parse_cover_file(&text).unwrap();
            assert_eq!(back, l, "{}", spec.family);
            assert_eq!(serialize_cover_file(&back), text);
        }
    }

    #[test]
    fn dot_two_chain_golden() {
        let l = parse_cover_file("n 2\n0 1\n").unwrap();
        let dot = export_dot(&l, None, &[]);
        assert_eq!(
            dot,
            "digraph lattice {\n\
             \x20 rankdir=BT;\n\
             \x20 node [shape=box];\n\
             \x20 0 [label=\"0\"];\n\
             \x20 1 [label=\"1\"];\n\
             \x20 { rank=same; 0; }\n\
             \x20 { rank=same; 1; }\n\
             \x20 0 -> 1;\n\
             }\n"
        );
    }

    #[test]
    fn dot_n5_with_witness() {
        let n5 = pentagon_lattice();
        let w = find_pentagon(&n5, PentagonConstraint::Any)
            .unwrap()
            .unwrap();
        let dot = export_dot(&n5, None, &[w]);
        // 5 nodes, 5 edges, witness styling on x, y, z; no rank layers.
        assert_eq!(dot.matches("label=").count(), 5);
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.matches("fontcolor=red").count(), 3);
        assert!(!dot.contains("rank=same"));
        assert_eq!(dot, export_dot(&n5, None, &[w]));
    }

    #[test]
    fn dot_b3_with_chain() {
        let b3 = make_family(&FamilySpec {
            family: Family::Boolean,
            parameter: 3,
        })
        .unwrap();
        let chain = Chain::new(&b3, vec![0, 1, 3, 7]).unwrap();
        let dot = export_dot(&b3, Some(&chain), &[]);
        assert_eq!(dot.matches("label=").count(), 8);
        assert_eq!(dot.matches(" -> ").count(), 12);
        assert_eq!(dot.matches("penwidth").count(), 3);
        assert!(dot.contains("rank=same"));
        assert!(dot.contains("label=\"{1,2}\""));
    }
}
