//! The main-lemma partition engine: iteratively eliminates near-twin left
//! vertices, freezing right-side twin classes as leader-dominated parts, so
//! that every left vertex ends up meeting few parts.
//!
//! Also houses the verification artifacts around it: quotient graphs, the
//! part-adjacency graph `G(A,F)`, the static re-derivation of the partition,
//! the near-twin diagnostic graph, and the definability coloring.

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{twin_classes_masked, BipartiteGraph, Graph};

/// Output of [`compute_partition`]: the part family `F`, its leaders and
/// freezing times, the left-side elimination order, and the two empirical
/// constants of the run.
#[derive(Clone, Debug)]
pub struct PartitionResult {
    /// Disjoint right-vertex sets covering the right side, ordered by
    /// freezing time. Members are sorted by id.
    pub parts: Vec<Vec<u32>>,
    /// One left vertex per part; `parts[i]` is contained in its neighborhood.
    pub leaders: Vec<u32>,
    /// 1-based round at which each part was frozen; strictly increasing.
    pub freeze_time: Vec<usize>,
    /// The left side in elimination order `a_1, ..., a_n`.
    pub elimination_order: Vec<u32>,
    /// Largest symmetric-difference size accepted by the pair selection
    /// across all rounds.
    pub k_used: usize,
    /// Largest number of parts any left vertex has a neighbor in.
    pub k_star: usize,
}

/// Trace of one elimination round, for the CLI `--trace` flag.
#[derive(Clone, Debug)]
pub struct RoundEvent {
    pub round: usize,
    pub removed: u32,
    pub partner: Option<u32>,
    pub pair_sym_diff: Option<usize>,
    pub frozen_part: Option<Vec<u32>>,
}

/// Lexicographically smallest pair (by the given ids, which must be sorted)
/// among those minimizing the symmetric difference of their bitset rows.
fn min_sym_diff_pair(ids: &[u32], rows: &[&Bitset]) -> Option<(usize, usize, usize)> {
    if ids.len() < 2 {
        return None;
    }
    let mut best: Option<(usize, usize, usize)> = None;
    for a in 0..ids.len() {
        for b in a + 1..ids.len() {
            let k = rows[a].sym_diff_count(rows[b]);
            if best.map_or(true, |(_, _, bk)| k < bk) {
                best = Some((a, b, k));
            }
        }
    }
    best
}

/// The optimized near-twin pair search on the left side of a bipartite graph,
/// matching the per-round selection of the engine (XOR-popcount over bitsets,
/// lexicographic id tie-break).
pub fn min_near_twin_pair_left(bg: &BipartiteGraph) -> Option<(u32, u32, usize)> {
    let mut order: Vec<usize> = (0..bg.n_left()).collect();
    order.sort_by_key(|&p| bg.left_id(p));
    let ids: Vec<u32> = order.iter().map(|&p| bg.left_id(p)).collect();
    let rows: Vec<&Bitset> = order.iter().map(|&p| bg.ladj(p)).collect();
    min_sym_diff_pair(&ids, &rows).map(|(a, b, k)| (ids[a], ids[b], k))
}

pub fn compute_partition(bg: &BipartiteGraph) -> Result<PartitionResult> {
    compute_partition_traced(bg, None)
}

pub fn compute_partition_traced(
    bg: &BipartiteGraph,
    mut trace: Option<&mut Vec<RoundEvent>>,
) -> Result<PartitionResult> {
    if bg.n_left() == 0 {
        return Err(Error::Argument("left side is empty".into()));
    }
    if let Some(&v) = bg.isolated_vertices().first() {
        return Err(Error::Precondition(format!(
            "graph has an isolated vertex: {}",
            bg.label(v)
        )));
    }

    let n = bg.n_left();
    let nr = bg.n_right();
    let mut alive = Bitset::from_iter(n, 0..n);
    let mut elimination_order = Vec::with_capacity(n);
    let mut parts: Vec<Vec<u32>> = Vec::new();
    let mut part_sets: Vec<Bitset> = Vec::new(); // over right positions
    let mut leaders: Vec<u32> = Vec::new();
    let mut freeze_time: Vec<usize> = Vec::new();
    let mut k_used = 0usize;

    // Part id per right position for a partition given as classes + frozen
    // parts; used by the per-round invariant checks.
    let part_id_map = |classes: &[Bitset], part_sets: &[Bitset]| -> Vec<usize> {
        let mut id = vec![usize::MAX; nr];
        for (ci, c) in classes.iter().enumerate() {
            for rp in c.iter() {
                id[rp] = ci;
            }
        }
        for (pi, p) in part_sets.iter().enumerate() {
            for rp in p.iter() {
                id[rp] = classes.len() + pi;
            }
        }
        id
    };

    for round in 1..=n {
        let classes = twin_classes_masked(bg, &alive);
        let keys: Vec<Bitset> = classes
            .iter()
            .map(|c| bg.radj(c.first().unwrap()).intersection(&alive))
            .collect();

        // Invariant (partition property): the frozen parts partition exactly
        // the right vertices that are inactive over the current left set.
        let mut covered = Bitset::new(nr);
        for p in &part_sets {
            assert!(!p.intersects(&covered), "frozen parts overlap");
            covered.union_with(p);
        }
        for rp in 0..nr {
            let inactive = !bg.radj(rp).intersects(&alive);
            assert_eq!(
                covered.contains(rp),
                inactive,
                "frozen parts do not match the inactive vertices at round {round}"
            );
        }
        let prev_part_id = part_id_map(&classes, &part_sets);

        // Pair selection over the quotient G(A_{i-1}, B_{i-1}).
        let mut class_adj: Vec<Bitset> = vec![Bitset::new(classes.len()); n];
        for (ci, key) in keys.iter().enumerate() {
            for lp in key.iter() {
                class_adj[lp].insert(ci);
            }
        }
        let mut order: Vec<usize> = alive.iter().collect();
        order.sort_by_key(|&p| bg.left_id(p));
        let ids: Vec<u32> = order.iter().map(|&p| bg.left_id(p)).collect();
        let rows: Vec<&Bitset> = order.iter().map(|&p| &class_adj[p]).collect();

        let (removed_pos, partner, pair_k) = match min_sym_diff_pair(&ids, &rows) {
            Some((a, b, k)) => {
                k_used = k_used.max(k);
                // remove the id-larger vertex of the selected pair
                (order[b], Some(ids[a]), Some(k))
            }
            None => (order[0], None, None),
        };
        let removed_id = bg.left_id(removed_pos);
        alive.remove(removed_pos);
        elimination_order.push(removed_id);

        // Freeze the class (if any) whose sole quotient neighbor was removed.
        let mut frozen: Option<Vec<u32>> = None;
        for (ci, key) in keys.iter().enumerate() {
            if key.count() == 1 && key.contains(removed_pos) {
                let mut members: Vec<u32> =
                    classes[ci].iter().map(|rp| bg.right_id(rp)).collect();
                members.sort_unstable();
                frozen = Some(members.clone());
                parts.push(members);
                part_sets.push(classes[ci].clone());
                leaders.push(removed_id);
                freeze_time.push(round);
            }
        }

        if let Some(trace) = trace.as_deref_mut() {
            trace.push(RoundEvent {
                round,
                removed: removed_id,
                partner,
                pair_sym_diff: pair_k,
                frozen_part: frozen,
            });
        }

        // Invariant (coarsening chain): every class of P_{i-1} is contained
        // in a class of P_i = B_i ∪ F_i.
        let next_classes = twin_classes_masked(bg, &alive);
        let next_id = part_id_map(&next_classes, &part_sets);
        let mut rep: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for rp in 0..nr {
            match rep.insert(prev_part_id[rp], next_id[rp]) {
                Some(r) => assert_eq!(r, next_id[rp], "coarsening chain broken at round {round}"),
                None => {}
            }
        }
    }

    // Every right vertex must now be frozen.
    let covered: usize = part_sets.iter().map(|p| p.count()).sum();
    assert_eq!(covered, nr, "final family does not partition the right side");

    let k_star = k_star_of(bg, &part_sets);
    Ok(PartitionResult { parts, leaders, freeze_time, elimination_order, k_used, k_star })
}

fn k_star_of(bg: &BipartiteGraph, part_sets: &[Bitset]) -> usize {
    (0..bg.n_left())
        .map(|lp| part_sets.iter().filter(|p| p.intersects(bg.ladj(lp))).count())
        .max()
        .unwrap_or(0)
}

/// The quotient graph `G(A', B)`: one right vertex per class (carrying the
/// minimum member id), with an edge iff some underlying edge exists.
pub fn quotient_graph(
    bg: &BipartiteGraph,
    a_prime: &[u32],
    classes: &[Vec<u32>],
) -> Result<BipartiteGraph> {
    let mut seen = Bitset::new(bg.n_right());
    let mut class_sets = Vec::with_capacity(classes.len());
    for class in classes {
        let mut set = Bitset::new(bg.n_right());
        for &v in class {
            let rp = bg
                .right_pos(v)
                .ok_or_else(|| Error::Argument(format!("vertex {} is not on the right side", bg.label(v))))?;
            if seen.contains(rp) {
                return Err(Error::Argument("classes overlap".into()));
            }
            seen.insert(rp);
            set.insert(rp);
        }
        class_sets.push(set);
    }
    let right: Vec<u32> = classes
        .iter()
        .map(|c| c.iter().copied().min().ok_or_else(|| Error::Argument("empty class".into())))
        .collect::<Result<_>>()?;
    let mut out = BipartiteGraph::new(a_prime.to_vec(), right, bg.labels().cloned());
    for (nlp, &u) in a_prime.iter().enumerate() {
        let lp = bg
            .left_pos(u)
            .ok_or_else(|| Error::Argument(format!("vertex {} is not on the left side", bg.label(u))))?;
        for (ci, set) in class_sets.iter().enumerate() {
            if bg.ladj(lp).intersects(set) {
                out.add_edge_pos(nlp, ci);
            }
        }
    }
    Ok(out)
}

/// `G(A,F)`: the quotient of the full left side against the final parts.
pub fn part_adjacency_graph(bg: &BipartiteGraph, pr: &PartitionResult) -> BipartiteGraph {
    quotient_graph(bg, bg.left_ids(), &pr.parts).expect("partition comes from this graph")
}

/// Static re-derivation of the partition from the elimination order alone:
/// `S_i` holds the right vertices whose last neighbor in the order is `a_i`.
pub fn static_partition(
    bg: &BipartiteGraph,
    elimination_order: &[u32],
) -> Result<(Vec<Vec<u32>>, Vec<u32>, Vec<usize>)> {
    if elimination_order.len() != bg.n_left() {
        return Err(Error::Argument("elimination order is not a permutation of the left side".into()));
    }
    let mut pos_of = vec![usize::MAX; bg.n_left()];
    for (i, &a) in elimination_order.iter().enumerate() {
        let lp = bg
            .left_pos(a)
            .ok_or_else(|| Error::Argument("elimination order is not a permutation of the left side".into()))?;
        if pos_of[lp] != usize::MAX {
            return Err(Error::Argument("elimination order repeats a vertex".into()));
        }
        pos_of[lp] = i;
    }
    if let Some(&v) = bg.isolated_vertices().first() {
        return Err(Error::Precondition(format!("graph has an isolated vertex: {}", bg.label(v))));
    }
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); bg.n_left()];
    for rp in 0..bg.n_right() {
        let last = bg.radj(rp).iter().map(|lp| pos_of[lp]).max().unwrap();
        buckets[last].push(bg.right_id(rp));
    }
    let mut parts = Vec::new();
    let mut leaders = Vec::new();
    let mut times = Vec::new();
    for (i, mut bucket) in buckets.into_iter().enumerate() {
        if !bucket.is_empty() {
            bucket.sort_unstable();
            parts.push(bucket);
            leaders.push(elimination_order[i]);
            times.push(i + 1);
        }
    }
    Ok((parts, leaders, times))
}

/// The k-near-twin graph on all of `V(bg)`: edges between vertices whose
/// neighborhoods differ on at most `k` vertices. Left positions map to
/// `0..n_left`, right positions to `n_left..n_left+n_right`.
pub fn near_twin_graph(bg: &BipartiteGraph, k: usize) -> Graph {
    let nl = bg.n_left();
    let n = nl + bg.n_right();
    let mut g = Graph::new(n);
    for a in 0..nl {
        for b in a + 1..nl {
            if bg.ladj(a).sym_diff_count(bg.ladj(b)) <= k {
                g.add_edge(a, b);
            }
        }
    }
    for a in 0..bg.n_right() {
        for b in a + 1..bg.n_right() {
            if bg.radj(a).sym_diff_count(bg.radj(b)) <= k {
                g.add_edge(nl + a, nl + b);
            }
        }
    }
    for a in 0..nl {
        for b in 0..bg.n_right() {
            // opposite sides: the neighborhoods are disjoint vertex sets
            if bg.ladj(a).count() + bg.radj(b).count() <= k {
                g.add_edge(a, nl + b);
            }
        }
    }
    g
}

/// Proper coloring of the part intersection graph `K`, with the definability
/// semantics of the leader formula verified against it.
#[derive(Clone, Debug)]
pub struct LeaderColoring {
    /// Color per part index.
    pub color: Vec<usize>,
    pub num_colors: usize,
    /// Whether the marker-based membership rule agrees with the partition on
    /// every left-right pair.
    pub definability_ok: bool,
}

pub fn leader_coloring(bg: &BipartiteGraph, pr: &PartitionResult) -> LeaderColoring {
    let m = pr.parts.len();
    let part_sets: Vec<Bitset> = pr
        .parts
        .iter()
        .map(|p| Bitset::from_iter(bg.n_right(), p.iter().map(|&v| bg.right_pos(v).unwrap())))
        .collect();
    let leader_adj: Vec<&Bitset> =
        pr.leaders.iter().map(|&l| bg.ladj(bg.left_pos(l).unwrap())).collect();

    // K: ij edge iff l_i meets P_j or l_j meets P_i
    let mut k_graph = Graph::new(m);
    for i in 0..m {
        for j in i + 1..m {
            if leader_adj[i].intersects(&part_sets[j]) || leader_adj[j].intersects(&part_sets[i]) {
                k_graph.add_edge(i, j);
            }
        }
    }

    // Greedy coloring along the reverse of a degeneracy order.
    let (_, order) = k_graph.degeneracy();
    let mut color = vec![usize::MAX; m];
    for &v in order.iter().rev() {
        let used: Vec<usize> = k_graph.neighbors(v).iter().filter_map(|w| {
            if color[w] != usize::MAX { Some(color[w]) } else { None }
        }).collect();
        let c = (0..).find(|c| !used.contains(c)).unwrap();
        color[v] = c;
    }
    let num_colors = color.iter().copied().max().map_or(0, |c| c + 1);
    assert!(
        num_colors <= 2 * pr.k_star + 1,
        "intersection-graph coloring used {} colors, exceeding 2*k_star+1 = {}",
        num_colors,
        2 * pr.k_star + 1
    );

    // Definability semantics: with leader l_i and all of P_i marked by the
    // color of part i, a left u and right v satisfy the marker rule
    // (same marker, uv an edge, u a leader) iff u = l_i and v in P_i.
    let mut leader_part: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for (i, &l) in pr.leaders.iter().enumerate() {
        leader_part.insert(l, i);
    }
    let mut right_part = vec![usize::MAX; bg.n_right()];
    for (i, set) in part_sets.iter().enumerate() {
        for rp in set.iter() {
            right_part[rp] = i;
        }
    }
    let mut definability_ok = true;
    'outer: for lp in 0..bg.n_left() {
        let u = bg.left_id(lp);
        for rp in 0..bg.n_right() {
            let i = right_part[rp];
            let marker_rule = match leader_part.get(&u) {
                Some(&j) => color[j] == color[i] && bg.ladj(lp).contains(rp),
                None => false,
            };
            let membership = leader_part.get(&u) == Some(&i);
            if marker_rule != membership {
                definability_ok = false;
                break 'outer;
            }
        }
    }

    LeaderColoring { color, num_colors, definability_ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, LoadedGraph};

    pub(crate) fn sided(text: &str) -> BipartiteGraph {
        match load_edge_list(text).unwrap() {
            LoadedGraph::Bipartite(bg) => bg,
            _ => unreachable!(),
        }
    }

    #[test]
    fn star_partition() {
        let bg = sided("s L a\ns R b1\ns R b2\ns R b3\na b1\na b2\na b3");
        let pr = compute_partition(&bg).unwrap();
        assert_eq!(pr.parts, vec![vec![1, 2, 3]]);
        assert_eq!(pr.leaders, vec![0]);
        assert_eq!(pr.k_star, 1);
    }

    #[test]
    fn path_partition() {
        // a1-b1, a2-b1, a2-b2; ids: a1=0, a2=1, b1=2, b2=3
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b1\na2 b2");
        let pr = compute_partition(&bg).unwrap();
        // pair (a1,a2) has quotient symmetric difference 1; the id-larger a2
        // is removed first, freezing {b2}; then a1 freezes {b1}.
        assert_eq!(pr.elimination_order, vec![1, 0]);
        assert_eq!(pr.parts, vec![vec![3], vec![2]]);
        assert_eq!(pr.leaders, vec![1, 0]);
        assert_eq!(pr.freeze_time, vec![1, 2]);
        assert_eq!(pr.k_used, 1);
        // a2 meets both parts
        assert_eq!(pr.k_star, 2);
    }

    #[test]
    fn matching_partition() {
        let bg = sided("s L a1\ns L a2\ns L a3\ns R b1\ns R b2\ns R b3\na1 b1\na2 b2\na3 b3");
        let pr = compute_partition(&bg).unwrap();
        assert_eq!(pr.parts.len(), 3);
        assert!(pr.parts.iter().all(|p| p.len() == 1));
        assert_eq!(pr.k_used, 2);
        assert_eq!(pr.k_star, 1);
        for (i, part) in pr.parts.iter().enumerate() {
            // each leader is the matched partner of its part
            assert!(bg.has_edge_ids(pr.leaders[i], part[0]));
        }
    }

    #[test]
    fn partition_rejects_isolated() {
        let bg = sided("s L a\ns L z\ns R b\na b");
        match compute_partition(&bg) {
            Err(Error::Precondition(msg)) => assert!(msg.contains('z')),
            _ => panic!("expected precondition error"),
        }
    }

    #[test]
    fn quotient_examples() {
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b1\na2 b2");
        // singleton classes: isomorphic to the graph itself
        let q = quotient_graph(&bg, bg.left_ids(), &[vec![2], vec![3]]).unwrap();
        assert_eq!(q.num_edges(), 3);
        // one class {b1,b2}: both left vertices adjacent to it
        let q = quotient_graph(&bg, bg.left_ids(), &[vec![2, 3]]).unwrap();
        assert_eq!(q.num_edges(), 2);
        assert!(quotient_graph(&bg, bg.left_ids(), &[vec![2], vec![2, 3]]).is_err());
    }

    #[test]
    fn static_matches_dynamic() {
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b1\na2 b2");
        let pr = compute_partition(&bg).unwrap();
        let (parts, leaders, times) = static_partition(&bg, &pr.elimination_order).unwrap();
        assert_eq!(parts, pr.parts);
        assert_eq!(leaders, pr.leaders);
        assert_eq!(times, pr.freeze_time);
    }

    #[test]
    fn static_rejects_bad_order() {
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b2");
        assert!(static_partition(&bg, &[0]).is_err());
        assert!(static_partition(&bg, &[0, 0]).is_err());
    }

    #[test]
    fn near_twin_graph_examples() {
        let twins = sided("s L a1\ns L a2\ns R b\na1 b\na2 b");
        assert!(near_twin_graph(&twins, 0).has_edge(0, 1));

        let matching = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b2");
        assert!(!near_twin_graph(&matching, 1).has_edge(0, 1));
        assert!(near_twin_graph(&matching, 2).has_edge(0, 1));
    }

    #[test]
    fn last_leader_degree_one() {
        for text in [
            "s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b1\na2 b2",
            "s L a1\ns L a2\ns L a3\ns R b1\ns R b2\ns R b3\na1 b1\na2 b2\na3 b3",
        ] {
            let bg = sided(text);
            let pr = compute_partition(&bg).unwrap();
            let gaf = part_adjacency_graph(&bg, &pr);
            let last = *pr.elimination_order.last().unwrap();
            assert_eq!(gaf.ladj(gaf.left_pos(last).unwrap()).count(), 1);
        }
    }

    #[test]
    fn coloring_examples() {
        let star = sided("s L a\ns R b1\ns R b2\na b1\na b2");
        let pr = compute_partition(&star).unwrap();
        let lc = leader_coloring(&star, &pr);
        assert_eq!(lc.num_colors, 1);
        assert!(lc.definability_ok);

        let matching = sided("s L a1\ns L a2\ns L a3\ns R b1\ns R b2\ns R b3\na1 b1\na2 b2\na3 b3");
        let pr = compute_partition(&matching).unwrap();
        let lc = leader_coloring(&matching, &pr);
        assert_eq!(lc.num_colors, 1);
        assert!(lc.definability_ok);

        // two parts with cross-meeting leaders need two colors
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b2\na1 b2\na2 b1");
        let pr = compute_partition(&bg).unwrap();
        if pr.parts.len() == 2 {
            let lc = leader_coloring(&bg, &pr);
            assert_eq!(lc.num_colors, 2);
            assert!(lc.definability_ok);
        }
    }
}
