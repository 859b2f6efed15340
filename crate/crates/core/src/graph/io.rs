//! DIMACS (`p edge n m` / `e u v`, 1-indexed) and JSON (`{"n", "edges"}`,
//! 0-indexed) graph files. Both formats require vertex ids `0..n`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[VertexId; 2]>,
}

impl Graph {
    fn check_contiguous(&self) -> Result<()> {
        if self.vertices().iter().enumerate().all(|(i, &v)| i as VertexId == v) {
            Ok(())
        } else {
            Err(Error::NonContiguousIds)
        }
    }

    pub fn to_dimacs(&self) -> Result<String> {
        self.check_contiguous()?;
        let mut out = format!("p edge {} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        Ok(out)
    }

    pub fn from_dimacs(text: &str) -> Result<Graph> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let mut parts = line.split_whitespace();
            match parts.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if n.is_some() {
                        return Err(err("duplicate problem line"));
                    }
                    let _format = parts.next().ok_or_else(|| err("missing format"))?;
                    let count = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad vertex count"))?;
                    let _m: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad edge count"))?;
                    n = Some(count);
                }
                Some("e") => {
                    let n = n.ok_or_else(|| err("edge before problem line"))?;
                    let mut endpoint = || -> Result<VertexId> {
                        let v: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad endpoint"))?;
                        if v == 0 || v > n {
                            return Err(err("endpoint out of range"));
                        }
                        Ok((v - 1) as VertexId)
                    };
                    let u = endpoint()?;
                    let v = endpoint()?;
                    if u == v {
                        return Err(err("self-loop"));
                    }
                    edges.push((u, v));
                }
                Some(_) => return Err(err("unknown line type")),
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing problem line".into() })?;
        Graph::from_edges(0..n as VertexId, edges)
    }

    pub fn to_json_form(&self) -> Result<GraphJson> {
        self.check_contiguous()?;
        Ok(GraphJson { n: self.vertex_count(), edges: self.edges().map(|(u, v)| [u, v]).collect() })
    }

    pub fn from_json_form(form: &GraphJson) -> Result<Graph> {
        Graph::from_edges(0..form.n as VertexId, form.edges.iter().map(|e| (e[0], e[1])))
    }
}

/// Reads a graph; `.json` files use the JSON form, anything else is DIMACS.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    if is_json(path) {
        Graph::from_json_form(&serde_json::from_str(&text)?)
    } else {
        Graph::from_dimacs(&text)
    }
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let text = if is_json(path) { serde_json::to_string(&g.to_json_form()?)? } else { g.to_dimacs()? };
    fs::write(path, text)?;
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}
