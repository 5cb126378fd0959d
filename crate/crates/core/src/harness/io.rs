//! Reading and writing bodies, graphs and packings.
//!
//! * Bodies are JSON [`BodyDescriptor`]s.
//! * Packings are JSON objects `{"body", "n", "edges", "p", "r"}`.
//! * Graphs are edge lists: a header line `n m`, then `m` lines `u v`, and
//!   optionally one line `outer a b c` naming the outer face. Blank lines
//!   and text after `#` are ignored.
//!
//! Floats are written in the shortest form that reads back to the same
//! bits, so every round trip is exact.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::body::{BodyDescriptor, ConvexBody, Vec2};
use crate::packer::PinnedTriangle;
use crate::rigidity::Packing;
use crate::sparsity::ContactGraph;

/// On-disk form of a packing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingFile {
    pub body: BodyDescriptor,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub p: Vec<[f64; 2]>,
    pub r: Vec<f64>,
}

impl From<&Packing> for PackingFile {
    fn from(packing: &Packing) -> Self {
        Self {
            body: packing.body.descriptor(),
            n: packing.vertex_count(),
            edges: packing.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            p: packing.p.iter().map(|x| [x.x, x.y]).collect(),
            r: packing.r.clone(),
        }
    }
}

impl PackingFile {
    /// Validates field shapes and builds the packing. Feasibility is not
    /// checked here; see [`Packing::check_feasible`].
    pub fn to_packing(&self) -> Result<Packing, HarnessError> {
        let schema = |field: String, message: String| HarnessError::Schema { field, message };
        if self.p.len() != self.n {
            return Err(schema(
                "p".into(),
                format!("{} centres for n = {}", self.p.len(), self.n),
            ));
        }
        if self.r.len() != self.n {
            return Err(schema(
                "r".into(),
                format!("{} radii for n = {}", self.r.len(), self.n),
            ));
        }
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u >= self.n || v >= self.n {
                return Err(schema(
                    format!("edges[{i}]"),
                    format!("edge ({u}, {v}) names a vertex outside 0..{}", self.n),
                ));
            }
        }
        let graph = ContactGraph::new(self.n, self.edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| schema("edges".into(), e.to_string()))?;
        let body = ConvexBody::from_descriptor(&self.body)
            .map_err(|e| schema("body".into(), e.to_string()))?;
        let p = self.p.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
        Packing::new(graph, Arc::new(body), p, self.r.clone())
            .map_err(|e| schema("packing".into(), e.to_string()))
    }
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn json_error(e: serde_json::Error) -> HarnessError {
    HarnessError::Parse {
        line: e.line(),
        message: e.to_string(),
    }
}

pub fn packing_to_json(packing: &Packing) -> String {
    serde_json::to_string_pretty(&PackingFile::from(packing)).expect("packing serializes")
}

pub fn packing_from_json(text: &str) -> Result<Packing, HarnessError> {
    let file: PackingFile = serde_json::from_str(text).map_err(json_error)?;
    file.to_packing()
}

pub fn read_packing(path: &Path) -> Result<Packing, HarnessError> {
    packing_from_json(&read_text(path)?)
}

pub fn write_packing(path: &Path, packing: &Packing) -> Result<(), HarnessError> {
    write_text(path, &packing_to_json(packing))
}

pub fn body_from_json(text: &str) -> Result<ConvexBody, HarnessError> {
    let descriptor: BodyDescriptor = serde_json::from_str(text).map_err(json_error)?;
    Ok(ConvexBody::from_descriptor(&descriptor)?)
}

pub fn body_to_json(body: &ConvexBody) -> String {
    serde_json::to_string_pretty(&body.descriptor()).expect("body serializes")
}

pub fn read_body(path: &Path) -> Result<ConvexBody, HarnessError> {
    body_from_json(&read_text(path)?)
}

/// A graph read from an edge list, with the optional outer face.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub graph: ContactGraph,
    pub outer: Option<[usize; 3]>,
}

impl GraphFile {
    /// The outer face pinned to the standard equilateral triangle.
    pub fn pins(&self) -> Option<PinnedTriangle> {
        self.outer.map(PinnedTriangle::standard)
    }
}

fn parse_numbers<T: std::str::FromStr>(
    line: usize,
    words: &[&str],
    what: &str,
) -> Result<Vec<T>, HarnessError> {
    words
        .iter()
        .map(|w| {
            w.parse().map_err(|_| HarnessError::Parse {
                line,
                message: format!("{what}: `{w}` is not a valid number"),
            })
        })
        .collect()
}

pub fn parse_edge_list(text: &str) -> Result<GraphFile, HarnessError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut outer = None;
    let mut last_line = 0;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((n, _)) = header else {
            if words.len() != 2 {
                return Err(HarnessError::Parse {
                    line,
                    message: format!("expected header `n m`, found `{content}`"),
                });
            }
            let v: Vec<usize> = parse_numbers(line, &words, "header")?;
            header = Some((v[0], v[1]));
            continue;
        };
        if words[0] == "outer" {
            if outer.is_some() || words.len() != 4 {
                return Err(HarnessError::Parse {
                    line,
                    message: "expected a single line `outer a b c`".into(),
                });
            }
            let v: Vec<usize> = parse_numbers(line, &words[1..], "outer face")?;
            if let Some(bad) = v.iter().find(|&&x| x >= n) {
                return Err(HarnessError::Parse {
                    line,
                    message: format!("outer face vertex {bad} is outside 0..{n}"),
                });
            }
            outer = Some([v[0], v[1], v[2]]);
            continue;
        }
        if words.len() != 2 {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected an edge `u v`, found `{content}`"),
            });
        }
        let v: Vec<usize> = parse_numbers(line, &words, &format!("edge {}", edges.len()))?;
        if v[0] >= n || v[1] >= n {
            return Err(HarnessError::Parse {
                line,
                message: format!(
                    "edge {} = ({}, {}) names a vertex outside 0..{n}",
                    edges.len(),
                    v[0],
                    v[1]
                ),
            });
        }
        edges.push((v[0], v[1]));
    }
    let Some((n, m)) = header else {
        return Err(HarnessError::Parse {
            line: last_line,
            message: "missing header `n m`".into(),
        });
    };
    if edges.len() != m {
        return Err(HarnessError::Parse {
            line: last_line,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    let graph = ContactGraph::new(n, edges)?;
    if let Some([a, b, c]) = outer {
        if !(graph.has_edge(a, b) && graph.has_edge(b, c) && graph.has_edge(a, c)) {
            return Err(HarnessError::Schema {
                field: "outer".into(),
                message: format!("outer face ({a}, {b}, {c}) is not a triangle of the graph"),
            });
        }
    }
    Ok(GraphFile { graph, outer })
}

pub fn edge_list_to_string(graph: &ContactGraph, outer: Option<[usize; 3]>) -> String {
    let mut out = format!("{} {}\n", graph.vertex_count(), graph.edge_count());
    for &(u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    if let Some([a, b, c]) = outer {
        out.push_str(&format!("outer {a} {b} {c}\n"));
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<GraphFile, HarnessError> {
    parse_edge_list(&read_text(path)?)
}

/// Parses `"a b c x1 y1 x2 y2 x3 y3"`.
pub fn parse_pins(text: &str) -> Result<PinnedTriangle, HarnessError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() != 9 {
        return Err(HarnessError::Parse {
            line: 1,
            message: format!(
                "pins need 3 vertices and 6 coordinates, got {} values",
                words.len()
            ),
        });
    }
    let v: Vec<usize> = parse_numbers(1, &words[..3], "pinned vertex")?;
    let x: Vec<f64> = parse_numbers(1, &words[3..], "pinned coordinate")?;
    Ok(PinnedTriangle::new(
        [v[0], v[1], v[2]],
        [
            Vec2::new(x[0], x[1]),
            Vec2::new(x[2], x[3]),
            Vec2::new(x[4], x[5]),
        ],
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_roundtrip_with_outer_face() {
        let text = "# K4\n4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\nouter 0 1 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.outer, Some([0, 1, 2]));
        assert_eq!(g.pins().unwrap().vertices, [0, 1, 2]);
        assert_eq!(
            parse_edge_list(&edge_list_to_string(&g.graph, g.outer)).unwrap(),
            g
        );
    }

    #[test]
    fn malformed_edge_is_named() {
        let err = parse_edge_list("3 2\n0 1\n1 7\n").unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("edge 1"), "{err}");
        let err = parse_edge_list("3 2\n0 1\n1 x\n").unwrap_err().to_string();
        assert!(err.contains("edge 1") && err.contains("`x`"), "{err}");
        assert!(parse_edge_list("3 3\n0 1\n").is_err());
    }

    #[test]
    fn packing_file_errors_name_the_field() {
        let text = r#"{"body":{"kind":"disc"},"n":2,"edges":[[0,5]],"p":[[0,0],[2,0]],"r":[1,1]}"#;
        let err = packing_from_json(text).unwrap_err().to_string();
        assert!(err.contains("edges[0]"), "{err}");
        let text = r#"{"body":{"kind":"disc"},"n":2,"edges":[[0,1]],"p":[[0,0]],"r":[1,1]}"#;
        assert!(packing_from_json(text)
            .unwrap_err()
            .to_string()
            .contains("`p`"));
    }

    #[test]
    fn pins_parse() {
        let pins = parse_pins("0 1 2 0 0 2 0 1 1.5").unwrap();
        assert_eq!(pins.positions[2], Vec2::new(1.0, 1.5));
        assert!(parse_pins("0 1 2 0 0 1 1 2 2").is_err());
    }
}
