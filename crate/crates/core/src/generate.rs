//! Graph family generators for the CLI and the test corpora. All emit the
//! edge-list text format; randomized families are deterministic in the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Sort key treating a trailing number numerically: `v10` sorts after `v2`.
fn natural_key(label: &str) -> (String, u64) {
    let split = label.rfind(|c: char| !c.is_ascii_digit()).map_or(0, |i| i + 1);
    let num = label[split..].parse().unwrap_or(0);
    (label[..split].to_string(), num)
}

/// Renders the edge-list format with canonical edge order: each edge as
/// (min-label, max-label), sorted with trailing numbers compared numerically.
pub fn render(
    n: usize,
    sides: &[(char, String)],
    mut edges: Vec<(String, String)>,
) -> String {
    for e in edges.iter_mut() {
        if natural_key(&e.0) > natural_key(&e.1) {
            std::mem::swap(&mut e.0, &mut e.1);
        }
    }
    edges.sort_by_key(|(u, v)| (natural_key(u), natural_key(v)));
    edges.dedup();
    let mut out = format!("p {} {}\n", n, edges.len());
    for (side, v) in sides {
        out.push_str(&format!("s {} {}\n", side, v));
    }
    for (u, v) in &edges {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out
}

pub fn path(n: usize) -> String {
    let edges = (1..n).map(|i| (i.to_string(), (i + 1).to_string())).collect();
    render(n, &[], edges)
}

pub fn cycle(n: usize) -> Result<String> {
    if n < 3 {
        return Err(Error::Argument("a cycle needs at least 3 vertices".into()));
    }
    let mut edges: Vec<(String, String)> =
        (1..n).map(|i| (i.to_string(), (i + 1).to_string())).collect();
    edges.push(("1".into(), n.to_string()));
    Ok(render(n, &[], edges))
}

/// `rows x cols` grid; vertex `(r, c)` is numbered `r * cols + c + 1`.
pub fn grid(rows: usize, cols: usize) -> String {
    let id = |r: usize, c: usize| (r * cols + c + 1).to_string();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    render(rows * cols, &[], edges)
}

/// The half-graph `H_t`: `u_i v_j` is an edge iff `i <= j`. Sided output.
pub fn half_graph_text(t: usize) -> String {
    let mut sides = Vec::new();
    for i in 1..=t {
        sides.push(('L', format!("u{}", i)));
    }
    for i in 1..=t {
        sides.push(('R', format!("v{}", i)));
    }
    let mut edges = Vec::new();
    for i in 1..=t {
        for j in i..=t {
            edges.push((format!("u{}", i), format!("v{}", j)));
        }
    }
    render(2 * t, &sides, edges)
}

/// `n` disjoint edges on `2n` vertices.
pub fn matching(n: usize) -> String {
    let edges =
        (0..n).map(|i| ((2 * i + 1).to_string(), (2 * i + 2).to_string())).collect();
    render(2 * n, &[], edges)
}

/// Sided random bipartite graph: each of the `n * m` potential edges present
/// independently with probability `p`.
pub fn random_bipartite(n: usize, m: usize, p: f64, seed: u64) -> Result<String> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument("edge probability must be in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sides = Vec::new();
    for i in 1..=n {
        sides.push(('L', format!("a{}", i)));
    }
    for j in 1..=m {
        sides.push(('R', format!("b{}", j)));
    }
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in 1..=m {
            if rng.gen_bool(p) {
                edges.push((format!("a{}", i), format!("b{}", j)));
            }
        }
    }
    Ok(render(n + m, &sides, edges))
}

/// Random `d`-regular graph via the pairing model with rejection of loops
/// and parallel edges.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<String> {
    if n * d % 2 != 0 {
        return Err(Error::Argument("n * d must be even for a d-regular graph".into()));
    }
    if d >= n {
        return Err(Error::Argument("degree must be below the vertex count".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        // Fisher-Yates
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                continue 'attempt;
            }
            edges.push(((u + 1).to_string(), (v + 1).to_string()));
        }
        return Ok(render(n, &[], edges));
    }
    Err(Error::Argument("failed to sample a simple d-regular graph".into()))
}
