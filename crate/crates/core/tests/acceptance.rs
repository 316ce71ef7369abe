//! End-to-end acceptance checks over a fixed generated corpus. Each test
//! prints one `criterion N: pass`/`FAIL` line (visible with --nocapture).

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparsebranch::bitset::Bitset;
use sparsebranch::generate;
use sparsebranch::graph::{
    bipartize, load_edge_list, remove_isolated, BipartiteGraph, LoadedGraph,
};
use sparsebranch::oracle;
use sparsebranch::partition::{
    compute_partition, min_near_twin_pair_left, part_adjacency_graph, static_partition,
};
use sparsebranch::reconstruct::{
    check_parity_consistency, reconstruct_bipartite, reconstruct_general, same_edges,
};
use sparsebranch::tree::{build_sparse_rep, build_sparse_rep_bipartite, SparseRep};

struct Entry {
    name: String,
    loaded: LoadedGraph,
    /// Vertex count of the graph as given (before any bipartization).
    n: usize,
}

fn corpus() -> &'static Vec<Entry> {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut texts: Vec<(String, String)> = Vec::new();
        for n in 2..=60 {
            texts.push((format!("path-{}", n), generate::path(n)));
        }
        for n in 3..=60 {
            texts.push((format!("cycle-{}", n), generate::cycle(n).unwrap()));
        }
        for r in 2..=12 {
            for c in r..=12 {
                texts.push((format!("grid-{}x{}", r, c), generate::grid(r, c)));
            }
        }
        for n in 1..=30 {
            texts.push((format!("matching-{}", n), generate::matching(n)));
        }
        for t in 1..=5 {
            texts.push((format!("halfgraph-{}", t), generate::half_graph_text(t)));
        }
        for &p in &[0.05, 0.1, 0.3] {
            for &(n, m) in
                &[(5, 5), (10, 10), (15, 45), (20, 15), (30, 30), (40, 20), (50, 10), (60, 60)]
            {
                for seed in 0..8 {
                    texts.push((
                        format!("rb-{}-{}-{}-{}", n, m, p, seed),
                        generate::random_bipartite(n, m, p, seed).unwrap(),
                    ));
                }
            }
        }
        for n in (10..=100).step_by(10) {
            for seed in 0..10 {
                texts.push((
                    format!("reg3-{}-{}", n, seed),
                    generate::random_regular(n, 3, seed).unwrap(),
                ));
            }
        }
        let entries: Vec<Entry> = texts
            .into_iter()
            .map(|(name, text)| {
                let loaded = load_edge_list(&text).unwrap();
                let n = match &loaded {
                    LoadedGraph::General(g) => g.n(),
                    LoadedGraph::Bipartite(bg) => bg.n_vertices(),
                };
                Entry { name, loaded, n }
            })
            .collect();
        assert!(entries.len() >= 500, "corpus has only {} graphs", entries.len());
        entries
    })
}

fn reps() -> &'static Vec<SparseRep> {
    static REPS: OnceLock<Vec<SparseRep>> = OnceLock::new();
    REPS.get_or_init(|| {
        corpus()
            .iter()
            .map(|e| match &e.loaded {
                LoadedGraph::General(g) => build_sparse_rep(g).unwrap(),
                LoadedGraph::Bipartite(bg) => build_sparse_rep_bipartite(bg).unwrap(),
            })
            .collect()
    })
}

fn host_of(e: &Entry) -> BipartiteGraph {
    match &e.loaded {
        LoadedGraph::General(g) => bipartize(g).0,
        LoadedGraph::Bipartite(bg) => bg.clone(),
    }
}

fn report(criterion: usize, name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {} ({}): pass", criterion, name),
        Err(msg) => {
            println!("criterion {} ({}): FAIL — {}", criterion, name, msg);
            panic!("criterion {} failed: {}", criterion, msg);
        }
    }
}

#[test]
fn criterion_1_exact_roundtrip() {
    let start = Instant::now();
    let mut result = Ok(());
    for (e, sr) in corpus().iter().zip(reps()) {
        let ok = match &e.loaded {
            LoadedGraph::General(g) => {
                reconstruct_general(sr).map(|back| same_edges(g, &back)).unwrap_or(false)
            }
            LoadedGraph::Bipartite(bg) => match reconstruct_bipartite(sr) {
                Ok(back) => {
                    let mut a = bg.edges();
                    let mut b = back.edges();
                    a.sort();
                    b.sort();
                    a == b && bg.left_ids() == back.left_ids()
                }
                Err(_) => false,
            },
        };
        if !ok {
            result = Err(format!("roundtrip mismatch on {}", e.name));
            break;
        }
    }
    if result.is_ok() && start.elapsed().as_secs() >= 120 {
        result = Err(format!("took {:?}, budget is 120 s", start.elapsed()));
    }
    report(1, "exact roundtrip", result);
}

/// Hosts with a nonempty, isolated-vertex-free core; partition preconditions.
fn partitionable_hosts() -> Vec<(String, BipartiteGraph)> {
    corpus()
        .iter()
        .map(|e| (e.name.clone(), remove_isolated(&host_of(e))))
        .filter(|(_, h)| h.n_left() > 0 && h.n_right() > 0)
        .collect()
}

#[test]
fn criterion_2_main_lemma_invariants() {
    let mut result = Ok(());
    'outer: for (name, host) in partitionable_hosts() {
        let pr = match compute_partition(&host) {
            Ok(pr) => pr,
            Err(e) => {
                result = Err(format!("{}: {}", name, e));
                break;
            }
        };
        // F partitions B
        let mut covered = Bitset::new(host.n_right());
        for part in &pr.parts {
            for &v in part {
                let rp = host.right_pos(v).unwrap();
                if covered.contains(rp) {
                    result = Err(format!("{}: vertex {} in two parts", name, v));
                    break 'outer;
                }
                covered.insert(rp);
            }
        }
        if covered.count() != host.n_right() {
            result = Err(format!("{}: parts do not cover the right side", name));
            break;
        }
        // P_i within the leader's neighborhood
        for (part, &l) in pr.parts.iter().zip(&pr.leaders) {
            if part.iter().any(|&v| !host.has_edge_ids(l, v)) {
                result = Err(format!("{}: part escapes leader {}", name, host.label(l)));
                break 'outer;
            }
        }
        // k_star against an independent recomputation from G(A,F)
        let gaf = part_adjacency_graph(&host, &pr);
        let recomputed = (0..gaf.n_left()).map(|lp| gaf.ladj(lp).count()).max().unwrap_or(0);
        if recomputed != pr.k_star {
            result = Err(format!("{}: k_star {} but G(A,F) gives {}", name, pr.k_star, recomputed));
            break;
        }
        // dynamic vs static
        let (parts, leaders, times) = static_partition(&host, &pr.elimination_order).unwrap();
        if parts != pr.parts || leaders != pr.leaders || times != pr.freeze_time {
            result = Err(format!("{}: static partition disagrees", name));
            break;
        }
    }
    report(2, "main-lemma invariants", result);
}

#[test]
fn criterion_3_near_twin_persistence() {
    let mut result = Ok(());
    'outer: for (name, host) in partitionable_hosts() {
        if host.n_left() > 60 {
            continue;
        }
        let pr = compute_partition(&host).unwrap();
        let gaf = part_adjacency_graph(&host, &pr);
        let order = &pr.elimination_order;
        let n = order.len();
        for i in 0..n - 1 {
            let row_i = gaf.ladj(gaf.left_pos(order[i]).unwrap());
            let ok = (i + 1..n).any(|j| {
                row_i.sym_diff_count(gaf.ladj(gaf.left_pos(order[j]).unwrap())) <= pr.k_used
            });
            if !ok {
                result = Err(format!(
                    "{}: {} has no later near twin within {}",
                    name,
                    host.label(order[i]),
                    pr.k_used
                ));
                break 'outer;
            }
        }
        let last = gaf.ladj(gaf.left_pos(order[n - 1]).unwrap()).count();
        if last != 1 {
            result = Err(format!("{}: last leader has degree {} in G(A,F)", name, last));
            break;
        }
    }
    report(3, "near-twin persistence and last-leader degree", result);
}

#[test]
fn criterion_4_coarsening_chain() {
    // the per-round refinement assertions run inside compute_partition
    let mut result = Ok(());
    for (name, host) in partitionable_hosts() {
        if let Err(e) = compute_partition(&host) {
            result = Err(format!("{}: {}", name, e));
            break;
        }
    }
    report(4, "coarsening chain", result);
}

#[test]
fn criterion_5_height_bound() {
    let mut result = Ok(());
    for (e, sr) in corpus().iter().zip(reps()) {
        if e.n > 30 {
            continue;
        }
        let li = oracle::ladder_index(&host_of(e), 6);
        if li >= 6 {
            continue; // the oracle cannot certify past its cap
        }
        if sr.height > 2 * li {
            result = Err(format!("{}: height {} exceeds 2·{}", e.name, sr.height, li));
            break;
        }
    }
    if result.is_ok() {
        for t in 1..=5 {
            let sr = build_sparse_rep_bipartite(&oracle::half_graph(t)).unwrap();
            if sr.height > 2 * t {
                result = Err(format!("H_{}: height {} exceeds {}", t, sr.height, 2 * t));
                break;
            }
        }
    }
    report(5, "height bound", result);
}

#[test]
fn criterion_6_sparsity() {
    let mut result = Ok(());
    'outer: for (e, sr) in corpus().iter().zip(reps()) {
        let k_max = sr.build.as_ref().unwrap().k_max;
        for (d, &md) in sr.membership_degrees().iter().enumerate() {
            if md > k_max.pow(d as u32) {
                result = Err(format!(
                    "{}: membership degree {} at depth {} exceeds {}^{}",
                    e.name, md, d, k_max, d
                ));
                break 'outer;
            }
        }
        let tau: usize = (0..=sr.height).map(|d| k_max.pow(d as u32)).sum();
        let (degeneracy, _) = sr.as_graph().degeneracy();
        if degeneracy > tau {
            result = Err(format!("{}: degeneracy {} exceeds tau {}", e.name, degeneracy, tau));
            break;
        }
    }
    report(6, "sparsity of the representation", result);
}

#[test]
fn criterion_7_cover_correctness() {
    let mut result = Ok(());
    for e in corpus() {
        let g = match &e.loaded {
            LoadedGraph::General(g) => g,
            LoadedGraph::Bipartite(_) => continue,
        };
        let nc = sparsebranch::covers::neighborhood_cover(g).unwrap();
        let rep = sparsebranch::covers::verify_cover(g, &nc);
        if !rep.passed() {
            result = Err(format!("{}: {}", e.name, rep.violations.join("; ")));
            break;
        }
        if nc.overlap > nc.partition.k_star {
            result = Err(format!(
                "{}: overlap {} exceeds k_star {}",
                e.name, nc.overlap, nc.partition.k_star
            ));
            break;
        }
    }
    report(7, "neighborhood cover correctness", result);
}

#[test]
fn criterion_8_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut result = Ok(());
    for case in 0..200 {
        let nl = rng.gen_range(2..=20);
        let nr = rng.gen_range(1..=20);
        let p: f64 = rng.gen_range(0.05..0.9);
        let left: Vec<u32> = (0..nl as u32).collect();
        let right: Vec<u32> = (nl as u32..(nl + nr) as u32).collect();
        let mut bg = BipartiteGraph::new(left, right, None);
        for lp in 0..nl {
            for rp in 0..nr {
                if rng.gen_bool(p) {
                    bg.add_edge_pos(lp, rp);
                }
            }
        }
        let fast = min_near_twin_pair_left(&bg).unwrap();
        let slow = oracle::min_near_twin_pair_bruteforce(&bg, oracle::Side::Left).unwrap();
        if fast != slow {
            result = Err(format!("case {}: optimized {:?} vs brute force {:?}", case, fast, slow));
            break;
        }
    }
    report(8, "near-twin oracle equivalence", result);
}

#[test]
fn criterion_9_parity_well_defined() {
    let mut checked = 0;
    let mut result = Ok(());
    for (e, sr) in corpus().iter().zip(reps()) {
        if sr.universe > 200 || checked >= 100 {
            continue;
        }
        if let Err(err) = check_parity_consistency(sr) {
            result = Err(format!("{}: {}", e.name, err));
            break;
        }
        checked += 1;
    }
    if result.is_ok() && checked < 100 {
        result = Err(format!("only {} graphs within the size limit", checked));
    }
    report(9, "parity well-definedness", result);
}

#[test]
fn criterion_10_runtime_scaling() {
    let mut points = Vec::new();
    for &s in &[8usize, 12, 16, 24, 32] {
        let g = sparsebranch::graph::load_general(&generate::grid(s, s)).unwrap();
        let start = Instant::now();
        let _ = build_sparse_rep(&g).unwrap();
        let secs = start.elapsed().as_secs_f64().max(1e-6);
        points.push(((g.n() as f64).ln(), secs.ln()));
    }
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let result = if slope <= 4.5 {
        Ok(())
    } else {
        Err(format!("log-log slope {:.3} exceeds 4.5", slope))
    };
    report(10, &format!("runtime scaling (slope {:.3})", slope), result);
}

#[test]
fn cli_roundtrip_through_files() {
    // sparsify | reconstruct reproduces the canonical edge list, byte for byte
    let exe = env!("CARGO_BIN_EXE_sparsebranch");
    let dir = std::env::temp_dir().join(format!("sparsebranch-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, text) in [
        ("grid", generate::grid(4, 5)),
        ("halfgraph", generate::half_graph_text(3)),
        ("cycle", generate::cycle(9).unwrap()),
    ] {
        let input = dir.join(format!("{}.gr", name));
        let rep = dir.join(format!("{}.rep", name));
        std::fs::write(&input, &text).unwrap();
        let st = std::process::Command::new(exe)
            .args(["sparsify", input.to_str().unwrap(), "-o", rep.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(st.success());
        let out = std::process::Command::new(exe)
            .args(["reconstruct", rep.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        assert_eq!(String::from_utf8_lossy(&out.stdout), text, "{}", name);
        let st = std::process::Command::new(exe)
            .args(["verify", input.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(st.success(), "verify failed on {}", name);
    }
    std::fs::remove_dir_all(&dir).ok();
}
