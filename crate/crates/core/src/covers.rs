//! Low-overlap neighborhood covers, obtained by running the partition engine
//! on the doubled graph and projecting back.

use crate::bitset::Bitset;
use crate::error::Result;
use crate::graph::{double, Graph};
use crate::partition::{compute_partition, PartitionResult};

#[derive(Clone, Debug)]
pub struct NeighborhoodCover {
    /// The projected base sets; together they partition `V(G)`.
    pub base: Vec<Vec<u32>>,
    /// `clusters[i]` is the union of closed neighborhoods of `base[i]`.
    pub clusters: Vec<Bitset>,
    /// One vertex per cluster; its closed neighborhood contains the base set.
    pub centers: Vec<u32>,
    /// Max number of clusters any vertex lies in.
    pub overlap: usize,
    /// The partition run on `Double(G)` that produced the cover.
    pub partition: PartitionResult,
}

fn closed_neighborhood(g: &Graph, vs: &[u32]) -> Bitset {
    let mut out = Bitset::new(g.n());
    for &v in vs {
        out.insert(v as usize);
        out.union_with(g.neighbors(v as usize));
    }
    out
}

pub fn neighborhood_cover(g: &Graph) -> Result<NeighborhoodCover> {
    let (bg, proj) = double(g);
    let pr = compute_partition(&bg)?;
    let base: Vec<Vec<u32>> =
        pr.parts.iter().map(|p| p.iter().map(|&v| proj.project(v)).collect()).collect();
    let centers: Vec<u32> = pr.leaders.iter().map(|&l| proj.project(l)).collect();
    let clusters: Vec<Bitset> = base.iter().map(|p| closed_neighborhood(g, p)).collect();
    let mut counts = vec![0usize; g.n()];
    for cl in &clusters {
        for v in cl.iter() {
            counts[v] += 1;
        }
    }
    let overlap = counts.into_iter().max().unwrap_or(0);
    Ok(NeighborhoodCover { base, clusters, centers, overlap, partition: pr })
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub violations: Vec<String>,
    pub overlap: usize,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the cover properties against `g`: the base sets partition the
/// vertices, every closed neighborhood lies inside the cluster of its base
/// set, each base set sits in its center's closed neighborhood, and every
/// cluster stays within distance two of its center.
pub fn verify_cover(g: &Graph, nc: &NeighborhoodCover) -> CoverReport {
    let mut violations = Vec::new();
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in nc.base.iter().enumerate() {
        for &v in p {
            if owner[v as usize] != usize::MAX {
                violations.push(format!(
                    "vertex {} is in base sets {} and {}",
                    g.label(v as usize),
                    owner[v as usize],
                    i
                ));
            }
            owner[v as usize] = i;
        }
    }
    for v in 0..g.n() {
        if owner[v] == usize::MAX {
            violations.push(format!("vertex {} is in no base set", g.label(v)));
        }
    }
    for (i, p) in nc.base.iter().enumerate() {
        let expect = closed_neighborhood(g, p);
        if expect.iter().collect::<Vec<_>>() != nc.clusters[i].iter().collect::<Vec<_>>() {
            violations.push(format!("cluster {} is not the closed neighborhood of its base", i));
        }
        let center_ball = closed_neighborhood(g, &[nc.centers[i]]);
        for &v in p {
            if !center_ball.contains(v as usize) {
                violations.push(format!(
                    "base vertex {} of cluster {} is not adjacent to its center",
                    g.label(v as usize),
                    i
                ));
            }
        }
        let wide: Vec<u32> = center_ball.iter().map(|v| v as u32).collect();
        let radius_two = closed_neighborhood(g, &wide);
        if !nc.clusters[i].is_subset(&radius_two) {
            violations.push(format!("cluster {} leaves the radius-2 ball of its center", i));
        }
    }
    // every closed neighborhood must fit in some cluster
    for v in 0..g.n() {
        let ball = closed_neighborhood(g, &[v as u32]);
        if !nc.clusters.iter().any(|cl| ball.is_subset(cl)) {
            violations.push(format!("neighborhood of {} fits in no cluster", g.label(v)));
        }
    }
    let mut counts = vec![0usize; g.n()];
    for cl in &nc.clusters {
        for v in cl.iter() {
            counts[v] += 1;
        }
    }
    let overlap = counts.into_iter().max().unwrap_or(0);
    if overlap != nc.overlap {
        violations.push(format!("stored overlap {} but recomputed {}", nc.overlap, overlap));
    }
    CoverReport { violations, overlap }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_general;

    fn cover_of(text: &str) -> (Graph, NeighborhoodCover) {
        let g = load_general(text).unwrap();
        let nc = neighborhood_cover(&g).unwrap();
        (g, nc)
    }

    #[test]
    fn path_cover() {
        let (g, nc) = cover_of("1 2\n2 3\n3 4\n4 5");
        let rep = verify_cover(&g, &nc);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(nc.overlap <= nc.partition.k_star.max(1));
    }

    #[test]
    fn triangle_cover() {
        let (g, nc) = cover_of("1 2\n2 3\n1 3");
        let rep = verify_cover(&g, &nc);
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn isolated_vertices_ok() {
        // the doubled graph always has the diagonal edges, so isolated
        // vertices in G are fine here
        let (g, nc) = cover_of("p 4 1\n1 2");
        let rep = verify_cover(&g, &nc);
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn detects_corruption() {
        let (g, mut nc) = cover_of("1 2\n2 3\n3 4");
        nc.clusters[0] = Bitset::new(g.n());
        assert!(!verify_cover(&g, &nc).passed());
    }
}
