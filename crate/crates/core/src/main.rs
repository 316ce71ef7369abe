use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use sparsebranch::branching::{left_branching, right_branching, verify_branching};
use sparsebranch::covers::{neighborhood_cover, verify_cover};
use sparsebranch::error::Error;
use sparsebranch::generate;
use sparsebranch::graph::{
    bipartite_complement, bipartize, induced_subgraph, load_edge_list, remove_isolated,
    BipartiteGraph, LoadedGraph,
};
use sparsebranch::oracle;
use sparsebranch::partition::{compute_partition_traced, static_partition, RoundEvent};
use sparsebranch::reconstruct::{
    check_parity_consistency, reconstruct_bipartite, reconstruct_general,
};
use sparsebranch::tree::{build_sparse_rep, build_sparse_rep_bipartite, stats, SparseRep};
use sparsebranch::Result;

#[derive(Parser)]
#[command(name = "sparsebranch", about = "Sparse tree representations of graphs", version)]
struct Cli {
    /// Worker cap (also SPARSEBRANCH_THREADS); 0 means automatic.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a graph family in edge-list format on stdout
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Build the sparse representation of a graph
    Sparsify {
        input: String,
        #[arg(short, long)]
        output: Option<String>,
        /// Require a sided input and skip bipartization
        #[arg(long)]
        bipartite: bool,
        /// Append a stats block as comments
        #[arg(long)]
        stats: bool,
        /// Dump per-round partition state of the root branching to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Decode a sparse representation back to an edge list
    Reconstruct {
        input: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Run the full verification suite on a graph (or a representation)
    Verify {
        input: String,
        /// Input is a sparse-representation file, not an edge list
        #[arg(long)]
        rep: bool,
        /// Also build and check a neighborhood cover (general inputs only)
        #[arg(long)]
        cover: bool,
    },
    /// Print a neighborhood cover, one cluster per line
    Cover { input: String },
    /// Print structural statistics of the sparse representation
    Stats { input: String },
    /// Reference computations
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Time representation building on growing grids and fit a scaling slope
    Bench {
        /// Largest grid side
        #[arg(long, default_value_t = 32)]
        max: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Grid { width: usize, height: usize },
    Halfgraph { t: usize },
    Matching { n: usize },
    RandomBipartite {
        n: usize,
        m: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    RandomRegular {
        n: usize,
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OracleKind {
    /// Largest t with a semi-induced half-graph H_t (sided inputs used as-is,
    /// general inputs bipartized)
    LadderIndex {
        input: String,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Minimum symmetric difference over same-side pairs, by brute force
    NearTwin {
        input: String,
        #[arg(long, default_value = "L")]
        side: String,
    },
    Degeneracy { input: String },
    /// Whether the graph contains K_{h,h} as a subgraph
    Biclique {
        input: String,
        #[arg(long)]
        h: usize,
    },
}

fn read_input(path: &str) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Argument(format!("cannot read {}: {}", path, e)))
}

fn emit(output: &Option<String>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Argument(format!("cannot write {}: {}", path, e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn print_trace(events: &[RoundEvent], bg: &BipartiteGraph) {
    for e in events {
        let mut line = format!("round {} remove {}", e.round, bg.label(e.removed));
        if let (Some(p), Some(k)) = (e.partner, e.pair_sym_diff) {
            line.push_str(&format!(" partner {} symdiff {}", bg.label(p), k));
        }
        if let Some(part) = &e.frozen_part {
            let members: Vec<String> = part.iter().map(|&v| bg.label(v)).collect();
            line.push_str(&format!(" freeze {}", members.join(" ")));
        }
        eprintln!("{}", line);
    }
}

fn cmd_sparsify(
    input: &str,
    output: &Option<String>,
    bipartite: bool,
    with_stats: bool,
    trace: bool,
) -> Result<i32> {
    let loaded = load_edge_list(&read_input(input)?)?;
    let sr = match loaded {
        LoadedGraph::Bipartite(bg) => {
            if trace {
                let trimmed = remove_isolated(&bg);
                let mut events = Vec::new();
                if trimmed.n_left() > 0 && !trimmed.is_edgeless() {
                    compute_partition_traced(&trimmed.swap_sides(), Some(&mut events))?;
                }
                print_trace(&events, &bg);
            }
            build_sparse_rep_bipartite(&bg)?
        }
        LoadedGraph::General(g) => {
            if bipartite {
                return Err(Error::Argument(
                    "--bipartite requires side declarations in the input".into(),
                ));
            }
            if trace {
                let (bg, _) = bipartize(&g);
                let trimmed = remove_isolated(&bg);
                let mut events = Vec::new();
                if trimmed.n_left() > 0 && !trimmed.is_edgeless() {
                    compute_partition_traced(&trimmed.swap_sides(), Some(&mut events))?;
                }
                print_trace(&events, &bg);
            }
            build_sparse_rep(&g)?
        }
    };
    let mut text = sr.write_text();
    if with_stats {
        for line in stats(&sr).to_string().lines() {
            text.push_str(&format!("c {}\n", line));
        }
    }
    emit(output, &text)?;
    Ok(0)
}

fn cmd_reconstruct(input: &str, output: &Option<String>) -> Result<i32> {
    let sr = SparseRep::parse_text(&read_input(input)?)?;
    let text = if sr.proj.is_some() {
        let g = reconstruct_general(&sr)?;
        let edges = g.edges().into_iter().map(|(u, v)| (g.label(u), g.label(v))).collect();
        generate::render(g.n(), &[], edges)
    } else {
        let bg = reconstruct_bipartite(&sr)?;
        let mut sides = Vec::new();
        for &v in bg.left_ids() {
            sides.push(('L', bg.label(v)));
        }
        for &v in bg.right_ids() {
            sides.push(('R', bg.label(v)));
        }
        let edges = bg.edges().into_iter().map(|(u, v)| (bg.label(u), bg.label(v))).collect();
        generate::render(bg.n_vertices(), &sides, edges)
    };
    emit(output, &text)?;
    Ok(0)
}

/// Rebuilds the decomposition level by level, checking every branching.
fn verify_tree_branchings(bg: &BipartiteGraph, depth: usize, failures: &mut Vec<String>) -> Result<()> {
    if bg.is_edgeless() {
        return Ok(());
    }
    let trimmed = remove_isolated(bg);
    let br = if depth % 2 == 0 { right_branching(&trimmed)? } else { left_branching(&trimmed)? };
    let report = verify_branching(&trimmed, &br);
    for v in report.violations {
        failures.push(format!("depth {}: {}", depth, v));
    }
    for branch in &br.branches {
        let sub = induced_subgraph(&trimmed, &branch.left, &branch.right)?;
        verify_tree_branchings(&bipartite_complement(&sub), depth + 1, failures)?;
    }
    Ok(())
}

fn cmd_verify(input: &str, rep: bool, cover: bool) -> Result<i32> {
    let mut failures: Vec<String> = Vec::new();
    if rep {
        let sr = SparseRep::parse_text(&read_input(input)?)?;
        match check_parity_consistency(&sr) {
            Ok(_) => println!("parity-consistency ok"),
            Err(e) => failures.push(e.to_string()),
        }
        if sr.proj.is_some() {
            if let Err(e) = reconstruct_general(&sr) {
                failures.push(e.to_string());
            }
        } else if let Err(e) = reconstruct_bipartite(&sr) {
            failures.push(e.to_string());
        }
    } else {
        let loaded = load_edge_list(&read_input(input)?)?;
        let (host, general) = match loaded {
            LoadedGraph::Bipartite(bg) => (bg, None),
            LoadedGraph::General(g) => {
                let (bg, _) = bipartize(&g);
                (bg, Some(g))
            }
        };
        // round trip
        match &general {
            Some(g) => match sparsebranch::reconstruct::verify_roundtrip(g) {
                Ok(true) => println!("roundtrip ok"),
                Ok(false) => failures.push("roundtrip mismatch".into()),
                Err(e) => failures.push(e.to_string()),
            },
            None => match sparsebranch::reconstruct::verify_roundtrip_bipartite(&host) {
                Ok(true) => println!("roundtrip ok"),
                Ok(false) => failures.push("roundtrip mismatch".into()),
                Err(e) => failures.push(e.to_string()),
            },
        }
        // partition invariants + static agreement on the trimmed host
        let trimmed = remove_isolated(&host);
        if trimmed.n_left() > 0 && trimmed.n_right() > 0 {
            match compute_partition_traced(&trimmed, None) {
                Ok(pr) => {
                    match static_partition(&trimmed, &pr.elimination_order) {
                        Ok((parts, leaders, times)) => {
                            if parts != pr.parts
                                || leaders != pr.leaders
                                || times != pr.freeze_time
                            {
                                failures.push("static partition disagrees with dynamic".into());
                            } else {
                                println!("partition ok (k_used {} k_star {})", pr.k_used, pr.k_star);
                            }
                        }
                        Err(e) => failures.push(e.to_string()),
                    }
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        // every branching in the tree
        verify_tree_branchings(&host, 0, &mut failures)?;
        if failures.iter().all(|f| !f.starts_with("depth")) {
            println!("branchings ok");
        }
        // parity independence
        let sr = match &general {
            Some(g) => build_sparse_rep(g)?,
            None => build_sparse_rep_bipartite(&host)?,
        };
        match check_parity_consistency(&sr) {
            Ok(_) => println!("parity-consistency ok"),
            Err(e) => failures.push(e.to_string()),
        }
        if cover {
            match general {
                Some(g) => {
                    let nc = neighborhood_cover(&g)?;
                    let report = verify_cover(&g, &nc);
                    if report.passed() {
                        println!("cover ok (overlap {})", report.overlap);
                    } else {
                        failures.extend(report.violations);
                    }
                }
                None => failures.push("--cover needs a general (side-free) input".into()),
            }
        }
    }
    if failures.is_empty() {
        println!("verify ok");
        Ok(0)
    } else {
        for f in &failures {
            eprintln!("FAIL {}", f);
        }
        Ok(1)
    }
}

fn cmd_cover(input: &str) -> Result<i32> {
    let g = sparsebranch::graph::load_general(&read_input(input)?)?;
    let nc = neighborhood_cover(&g)?;
    for (i, cluster) in nc.clusters.iter().enumerate() {
        let mut line = format!("center {}", g.label(nc.centers[i] as usize));
        for v in cluster.iter() {
            line.push_str(&format!(" {}", g.label(v)));
        }
        println!("{}", line);
    }
    Ok(0)
}

fn cmd_stats(input: &str) -> Result<i32> {
    let sr = match load_edge_list(&read_input(input)?)? {
        LoadedGraph::Bipartite(bg) => build_sparse_rep_bipartite(&bg)?,
        LoadedGraph::General(g) => build_sparse_rep(&g)?,
    };
    print!("{}", stats(&sr));
    Ok(0)
}

fn cmd_oracle(kind: OracleKind) -> Result<i32> {
    match kind {
        OracleKind::LadderIndex { input, cap } => {
            let bg = match load_edge_list(&read_input(&input)?)? {
                LoadedGraph::Bipartite(bg) => bg,
                LoadedGraph::General(g) => bipartize(&g).0,
            };
            println!("{}", oracle::ladder_index(&bg, cap));
        }
        OracleKind::NearTwin { input, side } => {
            let side = match side.as_str() {
                "L" => oracle::Side::Left,
                "R" => oracle::Side::Right,
                other => {
                    return Err(Error::Argument(format!("side must be L or R, got {}", other)))
                }
            };
            let bg = match load_edge_list(&read_input(&input)?)? {
                LoadedGraph::Bipartite(bg) => bg,
                LoadedGraph::General(g) => bipartize(&g).0,
            };
            let (u, v, k) = oracle::min_near_twin_pair_bruteforce(&bg, side)?;
            println!("{} {} {}", bg.label(u), bg.label(v), k);
        }
        OracleKind::Degeneracy { input } => {
            let g = sparsebranch::graph::load_general(&read_input(&input)?)?;
            println!("{}", g.degeneracy().0);
        }
        OracleKind::Biclique { input, h } => {
            let g = sparsebranch::graph::load_general(&read_input(&input)?)?;
            println!("{}", oracle::contains_biclique(&g, h));
        }
    }
    Ok(0)
}

fn cmd_bench(max: usize) -> Result<i32> {
    let sizes: Vec<usize> = [8, 12, 16, 24, 32].iter().copied().filter(|&s| s <= max).collect();
    if sizes.len() < 2 {
        return Err(Error::Argument("--max must allow at least two grid sizes".into()));
    }
    let mut points = Vec::new();
    for &s in &sizes {
        let g = sparsebranch::graph::load_general(&generate::grid(s, s))?;
        let start = Instant::now();
        let sr = build_sparse_rep(&g)?;
        let secs = start.elapsed().as_secs_f64();
        println!("grid {}x{} n {} nodes {} seconds {:.4}", s, s, g.n(), sr.nodes.len(), secs);
        points.push(((g.n() as f64).ln(), secs.max(1e-6).ln()));
    }
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    println!("slope {:.3}", slope);
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::Argument("--threads must be positive".into()));
        }
    } else if let Ok(v) = std::env::var("SPARSEBRANCH_THREADS") {
        if v.parse::<usize>().map(|t| t == 0).unwrap_or(true) {
            return Err(Error::Argument("SPARSEBRANCH_THREADS must be a positive integer".into()));
        }
    }
    match cli.command {
        Command::Generate { family } => {
            let text = match family {
                Family::Path { n } => generate::path(n),
                Family::Cycle { n } => generate::cycle(n)?,
                Family::Grid { width, height } => generate::grid(height, width),
                Family::Halfgraph { t } => generate::half_graph_text(t),
                Family::Matching { n } => generate::matching(n),
                Family::RandomBipartite { n, m, p, seed } => {
                    generate::random_bipartite(n, m, p, seed)?
                }
                Family::RandomRegular { n, d, seed } => generate::random_regular(n, d, seed)?,
            };
            print!("{}", text);
            Ok(0)
        }
        Command::Sparsify { input, output, bipartite, stats, trace } => {
            cmd_sparsify(&input, &output, bipartite, stats, trace)
        }
        Command::Reconstruct { input, output } => cmd_reconstruct(&input, &output),
        Command::Verify { input, rep, cover } => cmd_verify(&input, rep, cover),
        Command::Cover { input } => cmd_cover(&input),
        Command::Stats { input } => cmd_stats(&input),
        Command::Oracle { kind } => cmd_oracle(kind),
        Command::Bench { max } => cmd_bench(max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::from(0),
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
