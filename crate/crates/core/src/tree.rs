//! The sparsifier: builds the decomposition tree by alternating branchings
//! and bipartite complements, assembles the sparse representation with its
//! unary predicates, and reads/writes its text format.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::bitset::Bitset;
use crate::branching::{left_branching, right_branching};
use crate::error::{Error, Result};
use crate::graph::{
    bipartite_complement, bipartize, induced_subgraph, remove_isolated, BipartiteGraph, Graph,
};

/// One node of the decomposition tree. The graph it stands for is derived,
/// not stored: at even depth it is the induced subgraph of the host on
/// `vertices`, at odd depth the bipartite complement of that.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: u32,
    pub parent: Option<u32>,
    pub depth: usize,
    /// Host vertex ids present in this node's graph (membership edges).
    pub vertices: Bitset,
}

impl TreeNode {
    /// Whether the node's graph is the complement of an induced subgraph.
    pub fn complemented(&self) -> bool {
        self.depth % 2 == 1
    }
}

#[derive(Clone, Debug)]
pub struct BuildMeta {
    /// Max branching overlap across all internal nodes.
    pub k_max: usize,
    /// Branching overlap per node id (0 for leaves).
    pub overlaps: Vec<usize>,
    pub build_time: Duration,
}

/// The sparse representation `S(G)`: the tree, the membership edges (implicit
/// in the node vertex sets), the root predicate, and the two side predicates
/// over the host vertices.
#[derive(Clone)]
pub struct SparseRep {
    /// Host vertex ids are `0..universe`.
    pub universe: usize,
    pub labels: Vec<String>,
    /// Host left side, in side order.
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Nodes indexed by id, in depth-first creation order; node 0 is the root.
    pub nodes: Vec<TreeNode>,
    pub children: Vec<Vec<u32>>,
    /// Original label per host vertex when the host came from bipartization.
    pub proj: Option<Vec<String>>,
    pub height: usize,
    /// Present only for freshly built representations.
    pub build: Option<BuildMeta>,
}

fn build_recursive(
    g: &BipartiteGraph,
    depth: usize,
    parent: Option<u32>,
    universe: usize,
    nodes: &mut Vec<TreeNode>,
    overlaps: &mut Vec<usize>,
) -> Result<()> {
    let id = nodes.len() as u32;
    let vertices = Bitset::from_iter(
        universe,
        g.left_ids().iter().chain(g.right_ids()).map(|&v| v as usize),
    );
    nodes.push(TreeNode { id, parent, depth, vertices });
    overlaps.push(0);
    if g.is_edgeless() {
        return Ok(());
    }
    let trimmed = remove_isolated(g);
    let br = if depth % 2 == 0 { right_branching(&trimmed)? } else { left_branching(&trimmed)? };
    overlaps[id as usize] = br.overlap;
    for branch in &br.branches {
        let sub = induced_subgraph(&trimmed, &branch.left, &branch.right)?;
        let child = bipartite_complement(&sub);
        build_recursive(&child, depth + 1, Some(id), universe, nodes, overlaps)?;
    }
    Ok(())
}

/// Builds the decomposition tree of a bipartite graph. Host vertex ids must
/// be dense (`0..n_vertices`), which holds for all loaders and constructions
/// in this crate.
pub fn build_tree(bg: &BipartiteGraph) -> Result<(Vec<TreeNode>, Vec<usize>)> {
    let universe = bg
        .left_ids()
        .iter()
        .chain(bg.right_ids())
        .map(|&v| v as usize + 1)
        .max()
        .unwrap_or(0);
    let mut nodes = Vec::new();
    let mut overlaps = Vec::new();
    build_recursive(bg, 0, None, universe, &mut nodes, &mut overlaps)?;
    Ok((nodes, overlaps))
}

fn finalize(
    bg: &BipartiteGraph,
    nodes: Vec<TreeNode>,
    overlaps: Vec<usize>,
    proj: Option<Vec<String>>,
    build_time: Duration,
) -> SparseRep {
    let universe = nodes[0].vertices.len();
    let mut children = vec![Vec::new(); nodes.len()];
    for n in &nodes {
        if let Some(p) = n.parent {
            children[p as usize].push(n.id);
        }
    }
    let height = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    let k_max = overlaps.iter().copied().max().unwrap_or(0);
    let labels = (0..universe as u32).map(|v| bg.label(v)).collect();
    SparseRep {
        universe,
        labels,
        left: bg.left_ids().to_vec(),
        right: bg.right_ids().to_vec(),
        nodes,
        children,
        proj,
        height,
        build: Some(BuildMeta { k_max, overlaps, build_time }),
    }
}

/// `S(G)` for a bipartite input.
pub fn build_sparse_rep_bipartite(bg: &BipartiteGraph) -> Result<SparseRep> {
    let start = Instant::now();
    let (nodes, overlaps) = build_tree(bg)?;
    Ok(finalize(bg, nodes, overlaps, None, start.elapsed()))
}

/// `S(G)` for a general input: bipartize first and record the projection.
pub fn build_sparse_rep(g: &Graph) -> Result<SparseRep> {
    let start = Instant::now();
    let (bg, projection) = bipartize(g);
    let (nodes, overlaps) = build_tree(&bg)?;
    let proj: Vec<String> = (0..bg.n_vertices() as u32)
        .map(|v| g.label(projection.project(v) as usize))
        .collect();
    Ok(finalize(&bg, nodes, overlaps, Some(proj), start.elapsed()))
}

impl SparseRep {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn is_left(&self, v: u32) -> bool {
        self.left.contains(&v)
    }

    /// `S(G)` as a plain graph: tree nodes first (`0..num_nodes`), then the
    /// host vertices offset by the node count. Tree edges plus membership
    /// edges.
    pub fn as_graph(&self) -> Graph {
        let nn = self.nodes.len();
        let mut g = Graph::new(nn + self.universe);
        for node in &self.nodes {
            if let Some(p) = node.parent {
                g.add_edge(node.id as usize, p as usize);
            }
            for v in node.vertices.iter() {
                g.add_edge(node.id as usize, nn + v);
            }
        }
        g
    }

    /// Max number of tree nodes at each depth adjacent to a single host
    /// vertex, indexed by depth.
    pub fn membership_degrees(&self) -> Vec<usize> {
        let mut per_depth = vec![vec![0usize; self.universe]; self.height + 1];
        for node in &self.nodes {
            for v in node.vertices.iter() {
                per_depth[node.depth][v] += 1;
            }
        }
        per_depth.into_iter().map(|row| row.into_iter().max().unwrap_or(0)).collect()
    }

    pub fn write_text(&self) -> String {
        let mut out = String::new();
        out.push_str("root 0\n");
        for node in self.nodes.iter().skip(1) {
            out.push_str(&format!("node {} {} {}\n", node.id, node.parent.unwrap(), node.depth));
        }
        for &v in &self.left {
            out.push_str(&format!("side L {}\n", self.labels[v as usize]));
        }
        for &v in &self.right {
            out.push_str(&format!("side R {}\n", self.labels[v as usize]));
        }
        for node in &self.nodes {
            for v in node.vertices.iter() {
                out.push_str(&format!("member {} {}\n", self.labels[v], node.id));
            }
        }
        if let Some(proj) = &self.proj {
            for v in 0..self.universe {
                out.push_str(&format!("proj {} {}\n", self.labels[v], proj[v]));
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<SparseRep> {
        let mut root: Option<u32> = None;
        let mut node_lines: Vec<(u32, u32, usize)> = Vec::new();
        let mut left: Vec<u32> = Vec::new();
        let mut right: Vec<u32> = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut members: Vec<(u32, u32)> = Vec::new();
        let mut proj: HashMap<u32, String> = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "c" => continue,
                "root" => {
                    if toks.len() != 2 || root.is_some() {
                        return Err(Error::Format("bad or repeated root line".into()));
                    }
                    let id = toks[1].parse().map_err(|_| Error::Format("bad root id".into()))?;
                    root = Some(id);
                }
                "node" => {
                    if toks.len() != 4 {
                        return Err(Error::Format("node line must be 'node <id> <parent> <depth>'".into()));
                    }
                    let id = toks[1].parse().map_err(|_| Error::Format("bad node id".into()))?;
                    let parent =
                        toks[2].parse().map_err(|_| Error::Format("bad parent id".into()))?;
                    let depth =
                        toks[3].parse().map_err(|_| Error::Format("bad depth".into()))?;
                    node_lines.push((id, parent, depth));
                }
                "side" => {
                    if toks.len() != 3 || (toks[1] != "L" && toks[1] != "R") {
                        return Err(Error::Format("side line must be 'side L|R <label>'".into()));
                    }
                    if ids.contains_key(toks[2]) {
                        return Err(Error::Format(format!("vertex {} declared twice", toks[2])));
                    }
                    let id = labels.len() as u32;
                    ids.insert(toks[2].to_string(), id);
                    labels.push(toks[2].to_string());
                    if toks[1] == "L" {
                        left.push(id);
                    } else {
                        right.push(id);
                    }
                }
                "member" => {
                    if toks.len() != 3 {
                        return Err(Error::Format("member line must be 'member <label> <node>'".into()));
                    }
                    let v = *ids
                        .get(toks[1])
                        .ok_or_else(|| Error::Format(format!("member of unknown vertex {}", toks[1])))?;
                    let node =
                        toks[2].parse().map_err(|_| Error::Format("bad node id".into()))?;
                    members.push((v, node));
                }
                "proj" => {
                    if toks.len() != 3 {
                        return Err(Error::Format("proj line must be 'proj <label> <original>'".into()));
                    }
                    let v = *ids
                        .get(toks[1])
                        .ok_or_else(|| Error::Format(format!("proj of unknown vertex {}", toks[1])))?;
                    proj.insert(v, toks[2].to_string());
                }
                other => return Err(Error::Format(format!("unknown record '{}'", other))),
            }
        }
        let root = root.ok_or_else(|| Error::Format("missing root line".into()))?;
        if root != 0 {
            return Err(Error::Format("root must have id 0".into()));
        }
        let universe = labels.len();
        let num_nodes = node_lines.len() + 1;
        let mut nodes: Vec<Option<TreeNode>> = vec![None; num_nodes];
        nodes[0] = Some(TreeNode { id: 0, parent: None, depth: 0, vertices: Bitset::new(universe) });
        for (id, parent, depth) in node_lines {
            if id as usize >= num_nodes || nodes[id as usize].is_some() {
                return Err(Error::Format(format!("bad or repeated node id {}", id)));
            }
            nodes[id as usize] =
                Some(TreeNode { id, parent: Some(parent), depth, vertices: Bitset::new(universe) });
        }
        let mut nodes: Vec<TreeNode> = nodes.into_iter().map(Option::unwrap).collect();
        for i in 1..num_nodes {
            let p = nodes[i].parent.unwrap() as usize;
            if p >= num_nodes {
                return Err(Error::Format(format!("node {} has unknown parent", i)));
            }
            if nodes[p].depth + 1 != nodes[i].depth {
                return Err(Error::Format(format!("node {} has inconsistent depth", i)));
            }
        }
        for (v, node) in members {
            if node as usize >= num_nodes {
                return Err(Error::Format(format!("membership edge to unknown node {}", node)));
            }
            nodes[node as usize].vertices.insert(v as usize);
        }
        let mut children = vec![Vec::new(); num_nodes];
        for n in &nodes {
            if let Some(p) = n.parent {
                children[p as usize].push(n.id);
            }
        }
        let height = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        let proj = if proj.is_empty() {
            None
        } else {
            let mut v = Vec::with_capacity(universe);
            for id in 0..universe as u32 {
                match proj.get(&id) {
                    Some(p) => v.push(p.clone()),
                    None => {
                        return Err(Error::Format(format!(
                            "vertex {} has no projection",
                            labels[id as usize]
                        )))
                    }
                }
            }
            Some(v)
        };
        Ok(SparseRep {
            universe,
            labels,
            left,
            right,
            nodes,
            children,
            proj,
            height,
            build: None,
        })
    }
}

/// Structural statistics of a representation.
#[derive(Clone, Debug)]
pub struct StatsReport {
    pub height: usize,
    pub node_count: usize,
    pub membership_degrees: Vec<usize>,
    pub k_max: Option<usize>,
    pub degeneracy: usize,
    /// `sum_{d=0}^{h} k_max^d`, when the overlap is known.
    pub tau_bound: Option<usize>,
    pub build_time: Option<Duration>,
}

pub fn stats(sr: &SparseRep) -> StatsReport {
    let (degeneracy, _) = sr.as_graph().degeneracy();
    let k_max = sr.build.as_ref().map(|b| b.k_max);
    let tau_bound = k_max.map(|k| (0..=sr.height).map(|d| k.pow(d as u32)).sum());
    StatsReport {
        height: sr.height,
        node_count: sr.nodes.len(),
        membership_degrees: sr.membership_degrees(),
        k_max,
        degeneracy,
        tau_bound,
        build_time: sr.build.as_ref().map(|b| b.build_time),
    }
}

impl std::fmt::Display for StatsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "height {}", self.height)?;
        writeln!(f, "nodes {}", self.node_count)?;
        for (d, m) in self.membership_degrees.iter().enumerate() {
            writeln!(f, "membership-degree depth {} max {}", d, m)?;
        }
        if let Some(k) = self.k_max {
            writeln!(f, "branching-overlap-max {}", k)?;
        }
        writeln!(f, "degeneracy {}", self.degeneracy)?;
        if let Some(t) = self.tau_bound {
            writeln!(f, "tau-bound {}", t)?;
        }
        if let Some(t) = self.build_time {
            writeln!(f, "build-seconds {:.6}", t.as_secs_f64())?;
        }
        Ok(())
    }
}
