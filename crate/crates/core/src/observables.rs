//! Subgraph statistics of a single graph: degree histogram and its
//! generating function, k-cliques and pairs of k-cliques, k-stars, the
//! transitivity ratio and degree moments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default largest clique size that may be counted.
pub const DEFAULT_K_MAX: usize = 6;
/// Default cap on the number of cliques enumerated for pair profiles.
pub const DEFAULT_PAIR_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueLimits {
    pub k_max: usize,
    pub pair_cap: usize,
}

impl Default for CliqueLimits {
    fn default() -> Self {
        CliqueLimits {
            k_max: DEFAULT_K_MAX,
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

impl CliqueLimits {
    fn check(&self, k: usize) -> Result<()> {
        if (2..=self.k_max).contains(&k) {
            Ok(())
        } else {
            Err(Error::CliqueSize {
                k,
                k_max: self.k_max,
            })
        }
    }
}

/// `counts[d]` is the number of vertices of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub counts: Vec<u64>,
    pub n: usize,
}

impl DegreeHistogram {
    pub fn count(&self, degree: usize) -> u64 {
        self.counts.get(degree).copied().unwrap_or(0)
    }

    pub fn fraction(&self, degree: usize) -> f64 {
        self.count(degree) as f64 / self.n as f64
    }

    /// Degree generating function `Σ_k F°_k q^k`.
    pub fn pgf(&self, q: f64) -> f64 {
        let acc = self
            .counts
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * q + c as f64);
        acc / self.n as f64
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }
}

pub fn degree_histogram(g: &Graph) -> DegreeHistogram {
    let mut counts = vec![0u64; g.max_degree() + 1];
    for v in 0..g.vertex_count() {
        counts[g.degree(v)] += 1;
    }
    DegreeHistogram {
        counts,
        n: g.vertex_count(),
    }
}

pub fn pgf(hist: &DegreeHistogram, q: f64) -> f64 {
    hist.pgf(q)
}

fn falling(l: u128, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| if i > l { 0 } else { acc * (l - i) })
}

/// Number of k-stars `S_k = Σ_ℓ ℓ(ℓ-1)…(ℓ-k+1) F_ℓ`.
pub fn count_stars(hist: &DegreeHistogram, k: usize) -> u128 {
    hist.counts
        .iter()
        .enumerate()
        .skip(k)
        .map(|(l, &c)| falling(l as u128, k) * c as u128)
        .sum()
}

/// Stirling numbers of the second kind `S(l, m)` for `m = 0..=l`.
pub fn stirling2_row(l: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for i in 1..=l {
        let mut next = vec![0u128; i + 1];
        for m in 1..=i {
            let stay = if m < i { m as u128 * row[m] } else { 0 };
            next[m] = stay + row[m - 1];
        }
        row = next;
    }
    row
}

/// `Σ_k k^l F_k`, evaluated directly.
pub fn degree_power_sum(hist: &DegreeHistogram, l: usize) -> u128 {
    hist.counts
        .iter()
        .enumerate()
        .map(|(k, &c)| (k as u128).pow(l as u32) * c as u128)
        .sum()
}

/// `Σ_m S(l, m) S_m`, the same power sum through factorial moments.
pub fn degree_power_sum_via_stars(hist: &DegreeHistogram, l: usize) -> u128 {
    stirling2_row(l)
        .iter()
        .enumerate()
        .map(|(m, &s)| s * count_stars(hist, m))
        .sum()
}

/// `M_l = Σ_k k^l F°_k`. Both evaluations are formed and must agree exactly.
pub fn moment_of_degree(hist: &DegreeHistogram, l: usize) -> f64 {
    let direct = degree_power_sum(hist, l);
    let via_stars = degree_power_sum_via_stars(hist, l);
    assert_eq!(
        direct, via_stars,
        "power sum and Stirling expansion disagree"
    );
    direct as f64 / hist.n as f64
}

fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn intersection_size(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

// Candidates are common forward neighbours of the partial clique, so every
// clique is generated once, in increasing vertex order.
fn count_extensions(g: &Graph, need: usize, cands: &[u32]) -> u64 {
    match need {
        0 => 1,
        1 => cands.len() as u64,
        2 => cands
            .iter()
            .enumerate()
            .map(|(i, &u)| intersection_size(&cands[i + 1..], g.forward_neighbors(u as usize)))
            .sum(),
        _ => {
            let mut total = 0;
            let mut next = Vec::new();
            for (i, &u) in cands.iter().enumerate() {
                if cands.len() - i < need {
                    break;
                }
                intersect_into(&cands[i + 1..], g.forward_neighbors(u as usize), &mut next);
                if next.len() + 1 >= need {
                    total += count_extensions(g, need - 1, &next);
                }
            }
            total
        }
    }
}

pub fn count_cliques_with(g: &Graph, k: usize, limits: &CliqueLimits) -> Result<u64> {
    limits.check(k)?;
    if k == 2 {
        return Ok(g.edge_count() as u64);
    }
    Ok((0..g.vertex_count())
        .map(|v| count_extensions(g, k - 1, g.forward_neighbors(v)))
        .sum())
}

/// Number of k-cliques, `2 <= k <= DEFAULT_K_MAX`.
pub fn count_cliques(g: &Graph, k: usize) -> Result<u64> {
    count_cliques_with(g, k, &CliqueLimits::default())
}

fn collect_cliques(
    g: &Graph,
    k: usize,
    clique: &mut Vec<u32>,
    cands: &[u32],
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    if clique.len() == k {
        if out.len() >= cap {
            return Err(Error::CliqueCap {
                count: out.len() + 1,
                cap,
            });
        }
        out.push(clique.clone());
        return Ok(());
    }
    let need = k - clique.len();
    let mut next = Vec::new();
    for (i, &u) in cands.iter().enumerate() {
        if cands.len() - i < need {
            break;
        }
        intersect_into(&cands[i + 1..], g.forward_neighbors(u as usize), &mut next);
        clique.push(u);
        collect_cliques(g, k, clique, &next, out, cap)?;
        clique.pop();
    }
    Ok(())
}

/// All k-cliques as increasing vertex lists, failing past `limits.pair_cap`.
pub fn list_cliques(g: &Graph, k: usize, limits: &CliqueLimits) -> Result<Vec<Vec<u32>>> {
    limits.check(k)?;
    let mut out = Vec::new();
    let mut clique = Vec::with_capacity(k);
    let all: Vec<u32> = (0..g.vertex_count() as u32).collect();
    collect_cliques(g, k, &mut clique, &all, &mut out, limits.pair_cap)?;
    Ok(out)
}

/// Unordered pairs of k-cliques bucketed by the number of shared vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePairProfile {
    pub k: usize,
    /// `pairs[l]` counts pairs sharing exactly `l` vertices, `l < k`.
    pub pairs: Vec<u64>,
    pub total_cliques: u64,
}

impl CliquePairProfile {
    pub fn pair_total(&self) -> u64 {
        self.pairs.iter().sum()
    }
}

pub fn count_clique_pairs_with(
    g: &Graph,
    k: usize,
    limits: &CliqueLimits,
) -> Result<CliquePairProfile> {
    let cliques = list_cliques(g, k, limits)?;
    let mut pairs = vec![0u64; k];
    for (i, a) in cliques.iter().enumerate() {
        for b in &cliques[i + 1..] {
            pairs[intersection_size(a, b) as usize] += 1;
        }
    }
    Ok(CliquePairProfile {
        k,
        pairs,
        total_cliques: cliques.len() as u64,
    })
}

pub fn count_clique_pairs(g: &Graph, k: usize) -> Result<CliquePairProfile> {
    count_clique_pairs_with(g, k, &CliqueLimits::default())
}

/// `6 C_3 / S_2`, or `None` when the graph has no 2-stars.
pub fn transitivity(g: &Graph) -> Option<f64> {
    let s2 = count_stars(&degree_histogram(g), 2);
    if s2 == 0 {
        return None;
    }
    let c3 = count_cliques(g, 3).expect("3 is a valid clique size");
    Some(6.0 * c3 as f64 / s2 as f64)
}

/// Which statistics a snapshot records.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SnapshotPlan {
    pub clique_sizes: Vec<usize>,
    pub star_orders: Vec<usize>,
    pub tracked_vertices: Vec<usize>,
    pub transitivity: bool,
}

/// Statistics of one graph at one point of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableSnapshot {
    pub n: usize,
    pub t: Option<f64>,
    #[serde(rename = "F", with = "sparse_hist")]
    pub degree_hist: DegreeHistogram,
    #[serde(rename = "C")]
    pub cliques: BTreeMap<usize, u64>,
    #[serde(rename = "S")]
    pub stars: BTreeMap<usize, u128>,
    #[serde(rename = "trackedDegrees")]
    pub tracked_degrees: BTreeMap<usize, usize>,
    pub transitivity: Option<f64>,
}

mod sparse_hist {
    use super::DegreeHistogram;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(h: &DegreeHistogram, s: S) -> Result<S::Ok, S::Error> {
        let sparse: BTreeMap<usize, u64> = h
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k, c))
            .collect();
        sparse.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DegreeHistogram, D::Error> {
        let sparse = BTreeMap::<usize, u64>::deserialize(d)?;
        let len = sparse.keys().next_back().map_or(0, |&k| k + 1);
        let mut counts = vec![0; len];
        for (k, c) in &sparse {
            counts[*k] = *c;
        }
        let n = counts.iter().sum::<u64>() as usize;
        Ok(DegreeHistogram { counts, n })
    }
}

impl ObservableSnapshot {
    pub fn capture(g: &Graph, t: Option<f64>, plan: &SnapshotPlan) -> Result<Self> {
        let degree_hist = degree_histogram(g);
        let cliques = plan
            .clique_sizes
            .iter()
            .map(|&k| Ok((k, count_cliques(g, k)?)))
            .collect::<Result<_>>()?;
        let stars = plan
            .star_orders
            .iter()
            .map(|&k| (k, count_stars(&degree_hist, k)))
            .collect();
        let tracked_degrees = plan
            .tracked_vertices
            .iter()
            .map(|&v| {
                if v < g.vertex_count() {
                    Ok((v, g.degree(v)))
                } else {
                    Err(Error::VertexOutOfRange {
                        id: v,
                        n: g.vertex_count(),
                    })
                }
            })
            .collect::<Result<_>>()?;
        Ok(ObservableSnapshot {
            n: g.vertex_count(),
            t,
            degree_hist,
            cliques,
            stars,
            tracked_degrees,
            transitivity: if plan.transitivity {
                transitivity(g)
            } else {
                None
            },
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}
