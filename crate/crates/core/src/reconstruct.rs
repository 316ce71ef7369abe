//! Inverting the sparse representation: adjacency queries against the tree
//! and full reconstruction of the encoded graph.

use std::collections::HashMap;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};
use crate::tree::SparseRep;

/// Adjacency verdicts for one left-side host vertex `u`: for every right-side
/// vertex `v` sharing a tree node with `u`, the parity of their deepest common
/// node decides the edge. Vertices sharing no node are non-adjacent.
fn adjacency_row(sr: &SparseRep, u: u32, right_mask: &Bitset) -> Result<Bitset> {
    let mut verdict = Bitset::new(sr.universe);
    let mut decided = Bitset::new(sr.universe);
    // DFS over nodes containing u; iterating ids ascending visits parents
    // before children, which is all the maximality test below needs.
    for node in &sr.nodes {
        if !node.vertices.contains(u as usize) {
            continue;
        }
        let mut here = node.vertices.intersection(right_mask);
        for &c in &sr.children[node.id as usize] {
            let child = &sr.nodes[c as usize];
            if child.vertices.contains(u as usize) {
                for v in child.vertices.iter() {
                    if here.contains(v) {
                        here.remove(v);
                    }
                }
            }
        }
        // `here` now holds the v whose common node with u is maximal at this node
        let edge = node.depth % 2 == 1;
        for v in here.iter() {
            if decided.contains(v) {
                if verdict.contains(v) != edge {
                    return Err(Error::Format(format!(
                        "inconsistent adjacency verdicts for {} and {}",
                        sr.labels[u as usize], sr.labels[v]
                    )));
                }
            } else {
                decided.insert(v);
                if edge {
                    verdict.insert(v);
                }
            }
        }
    }
    Ok(verdict)
}

/// Whether host vertices `u` (left) and `v` (right) are adjacent in the
/// encoded bipartite graph.
pub fn adjacent(sr: &SparseRep, u: u32, v: u32) -> Result<bool> {
    let mut mask = Bitset::new(sr.universe);
    mask.insert(v as usize);
    Ok(adjacency_row(sr, u, &mask)?.contains(v as usize))
}

/// Checks that every maximal common node of every cross-side pair yields the
/// same parity. Returns the number of pairs with at least one common node.
pub fn check_parity_consistency(sr: &SparseRep) -> Result<usize> {
    let right_mask = Bitset::from_iter(sr.universe, sr.right.iter().map(|&v| v as usize));
    let mut pairs = 0;
    for &u in &sr.left {
        let mut decided = Bitset::new(sr.universe);
        let mut verdict = Bitset::new(sr.universe);
        for node in &sr.nodes {
            if !node.vertices.contains(u as usize) {
                continue;
            }
            let mut here = node.vertices.intersection(&right_mask);
            for &c in &sr.children[node.id as usize] {
                let child = &sr.nodes[c as usize];
                if child.vertices.contains(u as usize) {
                    for v in child.vertices.iter() {
                        if here.contains(v) {
                            here.remove(v);
                        }
                    }
                }
            }
            let edge = node.depth % 2 == 1;
            for v in here.iter() {
                if decided.contains(v) {
                    if verdict.contains(v) != edge {
                        return Err(Error::Format(format!(
                            "pair {} {} has maximal common nodes of both parities",
                            sr.labels[u as usize], sr.labels[v]
                        )));
                    }
                } else {
                    decided.insert(v);
                    pairs += 1;
                    if edge {
                        verdict.insert(v);
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// Decodes the bipartite host graph from its representation.
pub fn reconstruct_bipartite(sr: &SparseRep) -> Result<BipartiteGraph> {
    let right_mask = Bitset::from_iter(sr.universe, sr.right.iter().map(|&v| v as usize));
    let mut bg = BipartiteGraph::new(
        sr.left.clone(),
        sr.right.clone(),
        Some(std::sync::Arc::new(sr.labels.clone())),
    );
    for &u in &sr.left {
        let row = adjacency_row(sr, u, &right_mask)?;
        for v in row.iter() {
            bg.add_edge_ids(u, v as u32);
        }
    }
    Ok(bg)
}

/// Decodes a general graph: undo the bipartization using the recorded
/// projection. Two distinct original vertices are adjacent exactly when some
/// left copy of one is adjacent to a right copy of the other.
pub fn reconstruct_general(sr: &SparseRep) -> Result<Graph> {
    let proj = sr
        .proj
        .as_ref()
        .ok_or_else(|| Error::Format("representation carries no projection".into()))?;
    let mut order: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for p in proj.iter() {
        if !index.contains_key(p.as_str()) {
            index.insert(p.as_str(), order.len());
            order.push(p.clone());
        }
    }
    let bg = reconstruct_bipartite(sr)?;
    let n = order.len();
    let mut g = Graph::with_labels(n, std::sync::Arc::new(order));
    for (u, v) in bg.edges() {
        let a = index[proj[u as usize].as_str()];
        let b = index[proj[v as usize].as_str()];
        if a != b {
            g.add_edge(a, b);
        }
    }
    Ok(g)
}

/// Builds the representation of `bg` and checks it decodes back exactly.
pub fn verify_roundtrip_bipartite(bg: &BipartiteGraph) -> Result<bool> {
    let sr = crate::tree::build_sparse_rep_bipartite(bg)?;
    let back = reconstruct_bipartite(&sr)?;
    let mut want: Vec<(String, String)> =
        bg.edges().into_iter().map(|(u, v)| (bg.label(u), bg.label(v))).collect();
    let mut got: Vec<(String, String)> =
        back.edges().into_iter().map(|(u, v)| (back.label(u), back.label(v))).collect();
    want.sort();
    got.sort();
    Ok(want == got && bg.left_ids().len() == back.left_ids().len())
}

/// Builds the representation of a general graph and checks the decoded graph
/// has exactly the original edge set.
pub fn verify_roundtrip(g: &Graph) -> Result<bool> {
    let sr = crate::tree::build_sparse_rep(g)?;
    let back = reconstruct_general(&sr)?;
    Ok(same_edges(g, &back))
}

pub fn same_edges(a: &Graph, b: &Graph) -> bool {
    let key = |g: &Graph| {
        let mut es: Vec<(String, String)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let (x, y) = (g.label(u), g.label(v));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        es.sort();
        es
    };
    a.n() == b.n() && key(a) == key(b)
}
