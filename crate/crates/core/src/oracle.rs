//! Slow, obviously-correct reference computations used by property tests and
//! acceptance checks: half-graph (ladder) containment, minimum near-twin
//! pairs, biclique detection.

use std::collections::BTreeSet;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Largest `t <= cap` such that `bg` contains the half-graph `H_t` as an
/// induced subgraph, searching both side orientations. Returns `cap` as soon
/// as an `H_cap` is found.
pub fn ladder_index(bg: &BipartiteGraph, cap: usize) -> usize {
    let a = ladder_index_oriented(bg, cap);
    if a == cap {
        return cap;
    }
    a.max(ladder_index_oriented(&bg.swap_sides(), cap))
}

/// Ladder search with the `u_i` on the left side: looks for
/// `u_1..u_t, v_1..v_t` with `u_i ~ v_j` iff `i <= j`.
fn ladder_index_oriented(bg: &BipartiteGraph, cap: usize) -> usize {
    let nl = bg.n_left();
    let nr = bg.n_right();
    if nl == 0 || nr == 0 || cap == 0 {
        return 0;
    }
    // ucand: left vertices non-adjacent to every chosen v.
    // vcand: right vertices adjacent to every chosen u.
    let ucand = Bitset::from_iter(nl, 0..nl);
    let vcand = Bitset::from_iter(nr, 0..nr);
    let mut best = 0;
    fn extend(
        bg: &BipartiteGraph,
        depth: usize,
        ucand: &Bitset,
        vcand: &Bitset,
        cap: usize,
        best: &mut usize,
    ) {
        if depth > *best {
            *best = depth;
        }
        if *best == cap || depth + ucand.count().min(vcand.count()) <= *best {
            return;
        }
        for u in ucand.iter() {
            let vs = vcand.intersection(bg.ladj(u));
            for v in vs.iter() {
                let mut nu = ucand.clone();
                nu.remove(u);
                for w in bg.radj(v).iter() {
                    if nu.contains(w) {
                        nu.remove(w);
                    }
                }
                let mut nv = vcand.intersection(bg.ladj(u));
                nv.remove(v);
                extend(bg, depth + 1, &nu, &nv, cap, best);
                if *best == cap {
                    return;
                }
            }
        }
    }
    extend(bg, 0, &ucand, &vcand, cap, &mut best);
    best
}

/// Pair on the chosen side minimizing the symmetric difference of
/// neighborhoods, ties broken by lexicographic vertex-id order.
///
/// Neighborhoods are compared as sorted id sets, independently of the bitset
/// XOR route used by the partition engine.
pub fn min_near_twin_pair_bruteforce(bg: &BipartiteGraph, side: Side) -> Result<(u32, u32, usize)> {
    let ids: &[u32] = match side {
        Side::Left => bg.left_ids(),
        Side::Right => bg.right_ids(),
    };
    if ids.len() < 2 {
        return Err(Error::Argument("chosen side has fewer than 2 vertices".into()));
    }
    let nbrs: Vec<BTreeSet<u32>> = ids
        .iter()
        .map(|&v| match side {
            Side::Left => bg.ladj(bg.left_pos(v).unwrap()).iter().map(|p| bg.right_id(p)).collect(),
            Side::Right => bg.radj(bg.right_pos(v).unwrap()).iter().map(|p| bg.left_id(p)).collect(),
        })
        .collect();
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by_key(|&i| ids[i]);
    let mut result: Option<(u32, u32, usize)> = None;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (i, j) = (order[a], order[b]);
            let k = nbrs[i].symmetric_difference(&nbrs[j]).count();
            match result {
                Some((_, _, kb)) if kb <= k => {}
                _ => result = Some((ids[i], ids[j], k)),
            }
        }
    }
    Ok(result.unwrap())
}

/// Whether `g` contains `K_{h,h}` as a (not necessarily induced) subgraph.
/// Exhaustive over h-subsets of the vertex set.
pub fn contains_biclique(g: &Graph, h: usize) -> bool {
    if h == 0 {
        return true;
    }
    let n = g.n();
    let mut chosen = Vec::with_capacity(h);
    fn search(g: &Graph, h: usize, start: usize, chosen: &mut Vec<usize>, common: &Bitset) -> bool {
        if chosen.len() == h {
            // need h vertices outside `chosen` adjacent to all of `chosen`
            let outside = common.iter().filter(|v| !chosen.contains(v)).count();
            return outside >= h;
        }
        for v in start..g.n() {
            let next = common.intersection(g.neighbors(v));
            if next.count() < h {
                continue;
            }
            chosen.push(v);
            if search(g, h, v + 1, chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let all = Bitset::from_iter(n, 0..n);
    search(g, h, 0, &mut chosen, &all)
}

/// Builds the half-graph `H_t` as a standalone bipartite graph
/// (ids `0..t` on the left, `t..2t` on the right).
pub fn half_graph(t: usize) -> BipartiteGraph {
    let left: Vec<u32> = (0..t as u32).collect();
    let right: Vec<u32> = (t as u32..2 * t as u32).collect();
    let mut names = Vec::new();
    for i in 1..=t {
        names.push(format!("u{}", i));
    }
    for i in 1..=t {
        names.push(format!("v{}", i));
    }
    let mut bg = BipartiteGraph::new(left, right, Some(std::sync::Arc::new(names)));
    for i in 0..t {
        for j in i..t {
            bg.add_edge_pos(i, j);
        }
    }
    bg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartite_complement, load_edge_list, load_general, LoadedGraph};

    fn sided(text: &str) -> BipartiteGraph {
        match load_edge_list(text).unwrap() {
            LoadedGraph::Bipartite(bg) => bg,
            _ => unreachable!(),
        }
    }

    #[test]
    fn ladder_of_half_graphs() {
        for t in 1..=4 {
            assert_eq!(ladder_index(&half_graph(t), 6), t, "H_{}", t);
        }
    }

    #[test]
    fn ladder_of_complete_bipartite() {
        let bg = sided("s L a1\ns L a2\ns L a3\ns R b1\ns R b2\ns R b3\na1 b1\na1 b2\na1 b3\na2 b1\na2 b2\na2 b3\na3 b1\na3 b2\na3 b3");
        assert_eq!(ladder_index(&bg, 6), 1);
    }

    #[test]
    fn ladder_of_matching() {
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b2");
        assert_eq!(ladder_index(&bg, 6), 1);
    }

    #[test]
    fn ladder_of_complemented_half_graph() {
        // the complement of H_t contains an induced H_{t-1}
        for t in 2..=4 {
            let c = bipartite_complement(&half_graph(t));
            assert!(ladder_index(&c, 6) >= t - 1, "complement of H_{}", t);
        }
    }

    #[test]
    fn near_twin_examples() {
        // two left twins -> k = 0
        let bg = sided("s L a1\ns L a2\ns R b\na1 b\na2 b");
        assert_eq!(min_near_twin_pair_bruteforce(&bg, Side::Left).unwrap().2, 0);

        // matching of 2 edges -> k = 2, pair = the two left vertices
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na2 b2");
        let (u, v, k) = min_near_twin_pair_bruteforce(&bg, Side::Left).unwrap();
        assert_eq!(k, 2);
        assert_eq!((u, v), (bg.left_ids()[0], bg.left_ids()[1]));

        // star + pendant -> k = 1
        let bg = sided("s L a1\ns L a2\ns R b1\ns R b2\na1 b1\na1 b2\na2 b2");
        assert_eq!(min_near_twin_pair_bruteforce(&bg, Side::Left).unwrap().2, 1);

        let tiny = sided("s L a\ns R b\na b");
        assert!(min_near_twin_pair_bruteforce(&tiny, Side::Left).is_err());
    }

    #[test]
    fn biclique_examples() {
        let k22 = load_general("1 3\n1 4\n2 3\n2 4").unwrap();
        assert!(contains_biclique(&k22, 2));

        let tree = load_general("1 2\n2 3\n2 4\n4 5").unwrap();
        assert!(!contains_biclique(&tree, 2));

        // each grid square is a 4-cycle, i.e. a K_{2,2} subgraph, but no K_{3,3}
        let mut grid = Graph::new(9);
        for x in 0..3 {
            for y in 0..3 {
                let v = 3 * x + y;
                if x + 1 < 3 {
                    grid.add_edge(v, v + 3);
                }
                if y + 1 < 3 {
                    grid.add_edge(v, v + 1);
                }
            }
        }
        assert!(contains_biclique(&grid, 2));
        assert!(!contains_biclique(&grid, 3));
        assert!(contains_biclique(&grid, 1));
    }
}
