//! Graph representations and the elementary transformations consumed by the
//! rest of the pipeline: complement, induced subgraphs, twin classes,
//! bipartization, doubling, degeneracy.
//!
//! Vertices carry dense `u32` ids into a shared label table. Derived graphs
//! (induced subgraphs, complements, quotients) keep the ids of their host, so
//! vertex identity is stable across the whole recursion of the sparsifier.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// Shared vertex-label table, indexed by vertex id.
pub type Labels = Arc<Vec<String>>;

pub fn numeric_labels(n: usize) -> Labels {
    Arc::new((1..=n).map(|i| i.to_string()).collect())
}

/// A simple undirected graph with bitset adjacency.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Bitset>,
    labels: Option<Labels>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Bitset::new(n); n], labels: None }
    }

    pub fn with_labels(n: usize, labels: Labels) -> Self {
        assert!(labels.len() >= n);
        Graph { n, adj: vec![Bitset::new(n); n], labels: Some(labels) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loops are not allowed");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|a| a.count()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Exact degeneracy with a witnessing elimination order
    /// (repeated removal of a minimum-degree vertex).
    pub fn degeneracy(&self) -> (usize, Vec<usize>) {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut d = 0;
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            d = d.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for w in self.adj[v].iter() {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        (d, order)
    }

    /// Checks bipartiteness via BFS 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = vec![s];
            while let Some(v) = queue.pop() {
                for w in self.adj[v].iter() {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Maps vertex ids of a derived graph (bipartization, doubling) back to the
/// vertex ids of the original graph.
#[derive(Clone)]
pub struct VertexProjection {
    map: Vec<u32>,
}

impl VertexProjection {
    pub fn new(map: Vec<u32>) -> Self {
        VertexProjection { map }
    }

    pub fn project(&self, derived: u32) -> u32 {
        self.map[derived as usize]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }
}

/// A bipartite graph over an id universe shared with its host (if any).
///
/// Adjacency is stored positionally from both sides; `left`/`right` hold the
/// global vertex ids at each position.
#[derive(Clone)]
pub struct BipartiteGraph {
    left: Vec<u32>,
    right: Vec<u32>,
    ladj: Vec<Bitset>,
    radj: Vec<Bitset>,
    left_pos: HashMap<u32, usize>,
    right_pos: HashMap<u32, usize>,
    labels: Option<Labels>,
}

impl BipartiteGraph {
    pub fn new(left: Vec<u32>, right: Vec<u32>, labels: Option<Labels>) -> Self {
        let left_pos = left.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let right_pos = right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ladj = vec![Bitset::new(right.len()); left.len()];
        let radj = vec![Bitset::new(left.len()); right.len()];
        BipartiteGraph { left, right, ladj, radj, left_pos, right_pos, labels }
    }

    pub fn add_edge_pos(&mut self, lp: usize, rp: usize) {
        self.ladj[lp].insert(rp);
        self.radj[rp].insert(lp);
    }

    pub fn add_edge_ids(&mut self, u: u32, v: u32) {
        let lp = self.left_pos[&u];
        let rp = self.right_pos[&v];
        self.add_edge_pos(lp, rp);
    }

    pub fn n_left(&self) -> usize {
        self.left.len()
    }

    pub fn n_right(&self) -> usize {
        self.right.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn left_ids(&self) -> &[u32] {
        &self.left
    }

    pub fn right_ids(&self) -> &[u32] {
        &self.right
    }

    pub fn left_id(&self, pos: usize) -> u32 {
        self.left[pos]
    }

    pub fn right_id(&self, pos: usize) -> u32 {
        self.right[pos]
    }

    pub fn left_pos(&self, id: u32) -> Option<usize> {
        self.left_pos.get(&id).copied()
    }

    pub fn right_pos(&self, id: u32) -> Option<usize> {
        self.right_pos.get(&id).copied()
    }

    pub fn ladj(&self, pos: usize) -> &Bitset {
        &self.ladj[pos]
    }

    pub fn radj(&self, pos: usize) -> &Bitset {
        &self.radj[pos]
    }

    pub fn has_edge_ids(&self, u: u32, v: u32) -> bool {
        match (self.left_pos(u), self.right_pos(v)) {
            (Some(lp), Some(rp)) => self.ladj[lp].contains(rp),
            _ => false,
        }
    }

    pub fn num_edges(&self) -> usize {
        self.ladj.iter().map(|a| a.count()).sum()
    }

    pub fn is_edgeless(&self) -> bool {
        self.ladj.iter().all(|a| a.is_empty())
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn label(&self, id: u32) -> String {
        match &self.labels {
            Some(l) if (id as usize) < l.len() => l[id as usize].clone(),
            _ => id.to_string(),
        }
    }

    /// Sides swapped; adjacency transposed. Ids are unchanged.
    pub fn swap_sides(&self) -> BipartiteGraph {
        BipartiteGraph {
            left: self.right.clone(),
            right: self.left.clone(),
            ladj: self.radj.clone(),
            radj: self.ladj.clone(),
            left_pos: self.right_pos.clone(),
            right_pos: self.left_pos.clone(),
            labels: self.labels.clone(),
        }
    }

    /// All edges as (left id, right id) pairs, in side order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for lp in 0..self.n_left() {
            for rp in self.ladj[lp].iter() {
                out.push((self.left[lp], self.right[rp]));
            }
        }
        out
    }

    pub fn isolated_vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        out.extend((0..self.n_left()).filter(|&p| self.ladj[p].is_empty()).map(|p| self.left[p]));
        out.extend((0..self.n_right()).filter(|&p| self.radj[p].is_empty()).map(|p| self.right[p]));
        out
    }
}

impl std::fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BipartiteGraph(left={:?}, right={:?}, edges={:?})",
            self.left,
            self.right,
            self.edges()
        )
    }
}

/// Parses the edge-list format: optional header `p <n> <m>`, comment lines
/// `c ...`, side lines `s L <v>` / `s R <v>`, and edge lines `<u> <v>`.
pub enum LoadedGraph {
    General(Graph),
    Bipartite(BipartiteGraph),
}

pub fn load_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut sides: HashMap<u32, char> = HashMap::new();
    // With side declarations the vertex set comes from the `s` lines, so the
    // header must not invent numerically-named vertices.
    let has_sides = text
        .lines()
        .any(|l| l.trim_start().starts_with("s ") || l.trim_start().starts_with("s\t"));
    let intern = |tok: &str, names: &mut Vec<String>, ids: &mut HashMap<String, u32>| -> u32 {
        *ids.entry(tok.to_string()).or_insert_with(|| {
            names.push(tok.to_string());
            (names.len() - 1) as u32
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') && line.split_whitespace().next() == Some("c") {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if toks.len() != 3 {
                    return Err(Error::Parse { line: lineno, msg: "header must be 'p <n> <m>'".into() });
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| Error::Parse { line: lineno, msg: "bad vertex count".into() })?;
                if !has_sides {
                    for i in 1..=n {
                        intern(&i.to_string(), &mut names, &mut ids);
                    }
                }
            }
            "s" => {
                if toks.len() != 3 || (toks[1] != "L" && toks[1] != "R") {
                    return Err(Error::Parse { line: lineno, msg: "side line must be 's L|R <v>'".into() });
                }
                let v = intern(toks[2], &mut names, &mut ids);
                let side = toks[1].chars().next().unwrap();
                if let Some(prev) = sides.insert(v, side) {
                    if prev != side {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("vertex {} declared on both sides", toks[2]),
                        });
                    }
                }
            }
            _ => {
                if toks.len() != 2 {
                    return Err(Error::Parse { line: lineno, msg: "edge line must be '<u> <v>'".into() });
                }
                let u = intern(toks[0], &mut names, &mut ids);
                let v = intern(toks[1], &mut names, &mut ids);
                if u == v {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("self-loop at vertex {}", toks[0]),
                    });
                }
                edges.push((u, v));
            }
        }
    }
    let n = names.len();
    let labels: Labels = Arc::new(names);
    if sides.is_empty() {
        let mut g = Graph::with_labels(n, labels);
        for (u, v) in edges {
            g.add_edge(u as usize, v as usize);
        }
        Ok(LoadedGraph::General(g))
    } else {
        for v in 0..n as u32 {
            if !sides.contains_key(&v) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("vertex {} has no side declaration", labels[v as usize]),
                });
            }
        }
        let left: Vec<u32> = (0..n as u32).filter(|v| sides[v] == 'L').collect();
        let right: Vec<u32> = (0..n as u32).filter(|v| sides[v] == 'R').collect();
        let mut bg = BipartiteGraph::new(left, right, Some(labels));
        for (u, v) in edges {
            let (u, v) = if sides[&u] == 'L' { (u, v) } else { (v, u) };
            if sides[&u] != 'L' || sides[&v] != 'R' {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge {}-{} does not cross the declared sides", u, v),
                });
            }
            bg.add_edge_ids(u, v);
        }
        Ok(LoadedGraph::Bipartite(bg))
    }
}

pub fn load_general(text: &str) -> Result<Graph> {
    match load_edge_list(text)? {
        LoadedGraph::General(g) => Ok(g),
        LoadedGraph::Bipartite(_) => {
            Err(Error::Argument("expected a general (side-free) graph".into()))
        }
    }
}

/// The four-copies bipartization `B(G)`: cross edges for every edge of `G`
/// plus a length-3 path between the two main copies of every vertex.
pub fn bipartize(g: &Graph) -> (BipartiteGraph, VertexProjection) {
    let n = g.n();
    // id layout: (u,L)=u, (u,R)=n+u, (u,P1)=2n+u, (u,P2)=3n+u
    let mut names = Vec::with_capacity(4 * n);
    for suffix in ["L", "R", "P1", "P2"] {
        for u in 0..n {
            names.push(format!("{}:{}", g.label(u), suffix));
        }
    }
    let left: Vec<u32> = (0..n as u32).chain((3 * n as u32)..(4 * n as u32)).collect();
    let right: Vec<u32> = ((n as u32)..(3 * n as u32)).collect();
    let mut bg = BipartiteGraph::new(left, right, Some(Arc::new(names)));
    for u in 0..n as u32 {
        for v in g.neighbors(u as usize).iter() {
            let v = v as u32;
            bg.add_edge_ids(u, n as u32 + v);
            bg.add_edge_ids(v, n as u32 + u);
        }
        // path (u,L)-(u,P1)-(u,P2)-(u,R)
        bg.add_edge_ids(u, 2 * n as u32 + u);
        bg.add_edge_ids(3 * n as u32 + u, 2 * n as u32 + u);
        bg.add_edge_ids(3 * n as u32 + u, n as u32 + u);
    }
    let proj = VertexProjection::new((0..4 * n as u32).map(|i| i % n as u32).collect());
    (bg, proj)
}

/// `Double(G)`: sides `V×{0}` and `V×{1}`, cross edges for the edges of `G`
/// plus a diagonal edge for every vertex.
pub fn double(g: &Graph) -> (BipartiteGraph, VertexProjection) {
    let n = g.n();
    let mut names = Vec::with_capacity(2 * n);
    for suffix in ["0", "1"] {
        for u in 0..n {
            names.push(format!("{}:{}", g.label(u), suffix));
        }
    }
    let left: Vec<u32> = (0..n as u32).collect();
    let right: Vec<u32> = (n as u32..2 * n as u32).collect();
    let mut bg = BipartiteGraph::new(left, right, Some(Arc::new(names)));
    for u in 0..n as u32 {
        bg.add_edge_ids(u, n as u32 + u);
        for v in g.neighbors(u as usize).iter() {
            bg.add_edge_ids(u, n as u32 + v as u32);
        }
    }
    let proj = VertexProjection::new((0..2 * n as u32).map(|i| i % n as u32).collect());
    (bg, proj)
}

/// Bipartite complement: same sides, cross edges inverted.
pub fn bipartite_complement(bg: &BipartiteGraph) -> BipartiteGraph {
    let mut out = BipartiteGraph::new(bg.left.clone(), bg.right.clone(), bg.labels.clone());
    for lp in 0..bg.n_left() {
        for rp in 0..bg.n_right() {
            if !bg.ladj[lp].contains(rp) {
                out.add_edge_pos(lp, rp);
            }
        }
    }
    out
}

/// Induced subgraph `G[X,Y]`; side orders and vertex ids are preserved.
pub fn induced_subgraph(bg: &BipartiteGraph, x: &[u32], y: &[u32]) -> Result<BipartiteGraph> {
    for &v in x {
        if bg.left_pos(v).is_none() {
            return Err(Error::Argument(format!("vertex {} is not on the left side", bg.label(v))));
        }
    }
    for &v in y {
        if bg.right_pos(v).is_none() {
            return Err(Error::Argument(format!("vertex {} is not on the right side", bg.label(v))));
        }
    }
    let xset: Bitset = Bitset::from_iter(bg.n_left(), x.iter().map(|&v| bg.left_pos[&v]));
    let yset: Bitset = Bitset::from_iter(bg.n_right(), y.iter().map(|&v| bg.right_pos[&v]));
    let left: Vec<u32> = bg.left.iter().copied().filter(|&v| xset.contains(bg.left_pos[&v])).collect();
    let right: Vec<u32> = bg.right.iter().copied().filter(|&v| yset.contains(bg.right_pos[&v])).collect();
    let mut out = BipartiteGraph::new(left, right, bg.labels.clone());
    for (nlp, &u) in out.left.clone().iter().enumerate() {
        let old = &bg.ladj[bg.left_pos[&u]];
        for (nrp, &v) in out.right.clone().iter().enumerate() {
            if old.contains(bg.right_pos[&v]) {
                out.add_edge_pos(nlp, nrp);
            }
        }
    }
    Ok(out)
}

/// Partition of the active right vertices into twin classes over `A' ⊆ left`.
///
/// Two right vertices share a class iff their neighborhoods restricted to `A'`
/// are equal and nonempty. Classes are ordered by minimum member id; members
/// are listed in ascending id order.
pub fn twin_classes(bg: &BipartiteGraph, a_prime: &[u32]) -> Result<Vec<Vec<u32>>> {
    let mut mask = Bitset::new(bg.n_left());
    for &v in a_prime {
        match bg.left_pos(v) {
            Some(p) => mask.insert(p),
            None => {
                return Err(Error::Argument(format!("vertex {} is not on the left side", bg.label(v))))
            }
        }
    }
    Ok(twin_classes_masked(bg, &mask)
        .into_iter()
        .map(|c| {
            let mut ids: Vec<u32> = c.iter().map(|p| bg.right[p]).collect();
            ids.sort_unstable();
            ids
        })
        .collect())
}

/// Positional variant used by the partition engine: classes are bitsets over
/// right positions, ordered by minimum member id.
pub(crate) fn twin_classes_masked(bg: &BipartiteGraph, left_mask: &Bitset) -> Vec<Bitset> {
    let mut groups: HashMap<Bitset, Bitset> = HashMap::new();
    for rp in 0..bg.n_right() {
        let key = bg.radj[rp].intersection(left_mask);
        if key.is_empty() {
            continue;
        }
        groups.entry(key).or_insert_with(|| Bitset::new(bg.n_right())).insert(rp);
    }
    let mut classes: Vec<Bitset> = groups.into_values().collect();
    classes.sort_by_key(|c| bg.right[c.first().unwrap()]);
    classes
}

/// Drops all degree-0 vertices; side orders are preserved.
pub fn remove_isolated(bg: &BipartiteGraph) -> BipartiteGraph {
    let left: Vec<u32> = (0..bg.n_left()).filter(|&p| !bg.ladj[p].is_empty()).map(|p| bg.left[p]).collect();
    let right: Vec<u32> = (0..bg.n_right()).filter(|&p| !bg.radj[p].is_empty()).map(|p| bg.right[p]).collect();
    induced_subgraph(bg, &left, &right).expect("sides are subsets by construction")
}
