use std::collections::HashMap;
use std::io::BufRead;

use log::debug;

use crate::error::{DsdError, Result};

use super::{DirectedGraph, UndirectedGraph};

/// Either kind of graph, as produced by [`load_edge_list`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGraph {
    Undirected(UndirectedGraph),
    Directed(DirectedGraph),
}

/// A parsed edge list together with the raw-label mapping and the number
/// of lines that were dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded<G> {
    pub graph: G,
    /// `labels[id]` is the raw integer label of dense vertex `id`.
    pub labels: Vec<u64>,
    pub self_loops: usize,
    pub duplicates: usize,
}

fn parse_pairs<R: BufRead>(reader: R) -> Result<(Vec<(usize, usize)>, Vec<u64>, usize)> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    let mut self_loops = 0;

    let mut intern = |label: u64, labels: &mut Vec<u64>| -> usize {
        *ids.entry(label).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| DsdError::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(DsdError::Parse {
                    line: lineno,
                    msg: format!("expected two integer tokens, got `{trimmed}`"),
                })
            }
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| DsdError::Parse {
                line: lineno,
                msg: format!("`{tok}` is not a non-negative integer"),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        if u == v {
            self_loops += 1;
        } else {
            pairs.push((u, v));
        }
    }
    Ok((pairs, labels, self_loops))
}

/// Parses an undirected edge list. Raw labels are remapped to dense ids in
/// order of first appearance; self-loops and repeated edges are dropped.
pub fn read_undirected<R: BufRead>(reader: R) -> Result<Loaded<UndirectedGraph>> {
    let (pairs, labels, self_loops) = parse_pairs(reader)?;
    let total = pairs.len();
    let graph = UndirectedGraph::from_edges(labels.len(), pairs)?;
    if graph.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let duplicates = total - graph.m();
    debug!(
        "loaded undirected graph: n={} m={} self_loops={self_loops} duplicates={duplicates}",
        graph.n(),
        graph.m()
    );
    Ok(Loaded {
        graph,
        labels,
        self_loops,
        duplicates,
    })
}

/// Parses a directed arc list. Repeated arcs and self-loops are dropped.
pub fn read_directed<R: BufRead>(reader: R) -> Result<Loaded<DirectedGraph>> {
    let (pairs, labels, self_loops) = parse_pairs(reader)?;
    let total = pairs.len();
    let graph = DirectedGraph::from_edges(labels.len(), pairs)?;
    if graph.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let duplicates = total - graph.m();
    debug!(
        "loaded directed graph: n={} m={} self_loops={self_loops} duplicates={duplicates}",
        graph.n(),
        graph.m()
    );
    Ok(Loaded {
        graph,
        labels,
        self_loops,
        duplicates,
    })
}

pub fn load_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<Loaded<AnyGraph>> {
    if directed {
        let l = read_directed(reader)?;
        Ok(Loaded {
            graph: AnyGraph::Directed(l.graph),
            labels: l.labels,
            self_loops: l.self_loops,
            duplicates: l.duplicates,
        })
    } else {
        let l = read_undirected(reader)?;
        Ok(Loaded {
            graph: AnyGraph::Undirected(l.graph),
            labels: l.labels,
            self_loops: l.self_loops,
            duplicates: l.duplicates,
        })
    }
}

pub fn parse_undirected(text: &str) -> Result<Loaded<UndirectedGraph>> {
    read_undirected(text.as_bytes())
}

pub fn parse_directed(text: &str) -> Result<Loaded<DirectedGraph>> {
    read_directed(text.as_bytes())
}
