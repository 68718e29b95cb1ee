//! Independent oracles shared by the integration tests: a bitmask graph,
//! exhaustive enumeration of duplication outcomes and the property checks.

#![allow(dead_code)]

use pdgraph::exact::x_moment;
use pdgraph::graph::{duplicate_step_traced, Graph};
use pdgraph::observables::{
    count_clique_pairs, count_cliques, count_stars, degree_histogram, degree_power_sum,
    degree_power_sum_via_stars, stirling2_row,
};
use pdgraph::pdmp::flow;
use pdgraph::rng::{replicate_rng, Purpose};
use proptest::prelude::*;

/// Adjacency as bitmasks; vertex `v` is bit `v`. Enough for up to 64 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    pub adj: Vec<u64>,
}

impl BitGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        BitGraph { adj }
    }

    pub fn complete(n: usize) -> Self {
        let all = (1u64 << n) - 1;
        BitGraph {
            adj: (0..n).map(|v| all & !(1 << v)).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn of(g: &Graph) -> Self {
        let edges: Vec<_> = g.edges().collect();
        Self::from_edges(g.vertex_count(), &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Checks every `k`-subset for pairwise adjacency.
    pub fn cliques(&self, k: usize) -> u64 {
        let n = self.n();
        assert!(n <= 20);
        (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .filter(|&m| {
                (0..n)
                    .filter(|v| m >> v & 1 == 1)
                    .all(|v| self.adj[v] & m == m & !(1 << v))
            })
            .count() as u64
    }

    /// `Σ_v d(d−1)…(d−k+1)`.
    pub fn stars(&self, k: usize) -> f64 {
        (0..self.n())
            .map(|v| {
                let d = self.degree(v) as f64;
                (0..k).map(|i| d - i as f64).product::<f64>()
            })
            .sum()
    }

    pub fn degree_count(&self, k: usize) -> f64 {
        (0..self.n()).filter(|&v| self.degree(v) == k).count() as f64
    }
}

/// Visits every graph reachable in `n − n0` duplication steps together with
/// its probability.
pub fn enumerate<F: FnMut(&BitGraph, f64)>(g: &BitGraph, p: f64, n: usize, visit: &mut F) {
    fn go<F: FnMut(&BitGraph, f64)>(g: &mut BitGraph, prob: f64, p: f64, n: usize, visit: &mut F) {
        let m = g.n();
        if m == n {
            visit(g, prob);
            return;
        }
        for s in 0..m {
            let nbrs = g.adj[s];
            let d = nbrs.count_ones() as i32;
            // all submasks of the neighbourhood, including the empty one
            let mut t = nbrs;
            loop {
                let kept = t.count_ones() as i32;
                let w = prob / m as f64 * p.powi(kept) * (1.0 - p).powi(d - kept);
                if w > 0.0 {
                    for v in 0..m {
                        if t >> v & 1 == 1 {
                            g.adj[v] |= 1 << m;
                        }
                    }
                    g.adj.push(t);
                    go(g, w, p, n, visit);
                    g.adj.pop();
                    for v in 0..m {
                        g.adj[v] &= !(1 << m);
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & nbrs;
            }
        }
    }
    let mut g = g.clone();
    go(&mut g, 1.0, p, n, visit);
}

/// `E[f(G_n)]` by enumeration.
pub fn expectation<F: Fn(&BitGraph) -> f64>(g: &BitGraph, p: f64, n: usize, f: F) -> f64 {
    let mut total = 0.0;
    let mut mass = 0.0;
    enumerate(g, p, n, &mut |h, w| {
        total += w * f(h);
        mass += w;
    });
    assert!((mass - 1.0).abs() < 1e-12, "probabilities sum to {mass}");
    total
}

pub fn random_graph(g0: &Graph, p: f64, steps: usize, stream: u64) -> Graph {
    let mut rng = replicate_rng(stream, Purpose::Scratch, 0);
    let mut g = g0.clone();
    for _ in 0..steps {
        duplicate_step_traced(&mut g, p, &mut rng);
    }
    g
}

/// Connected seed: a random tree on `n` vertices (parent of `v` drawn from
/// `0..v`) plus the extra edges selected by `extra`.
pub fn connected_seed() -> impl Strategy<Value = Graph> {
    (2usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<u32>(), n),
                any::<u32>(),
            )
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|v| (parents[v] as usize % v, v)).collect();
            let mut bit = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if extra >> (bit % 32) & 1 == 1 && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

pub fn bipartite_seed() -> impl Strategy<Value = Graph> {
    (1usize..=3, 1usize..=3, any::<u16>()).prop_map(|(a, b, mask)| {
        // complete bipartite minus some edges, keeping a spanning double star
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                if i == 0 || j == 0 || mask >> (i * 3 + j) & 1 == 1 {
                    edges.push((i, a + j));
                }
            }
        }
        Graph::from_edges(a + b, &edges).unwrap()
    })
}

pub fn check_graph_invariants(g0: &Graph, p: f64, steps: usize, stream: u64) -> Result<(), String> {
    let g = random_graph(g0, p, steps, stream);
    g.check_invariants()?;
    if g.vertex_count() != g0.vertex_count() + steps {
        return Err("wrong vertex count".into());
    }
    // the copy never links to its source
    let mut rng = replicate_rng(stream, Purpose::Scratch, 1);
    let mut h = g0.clone();
    for _ in 0..steps {
        let d = duplicate_step_traced(&mut h, p, &mut rng);
        if h.has_edge(d.source, d.vertex) {
            return Err(format!(
                "copy {} linked to its source {}",
                d.vertex, d.source
            ));
        }
        if !h
            .neighbors(d.vertex)
            .iter()
            .all(|&w| h.has_edge(d.source, w as usize))
        {
            return Err("copy has a neighbour its source lacks".into());
        }
    }
    Ok(())
}

pub fn check_bipartite(g0: &Graph, p: f64, steps: usize, stream: u64) -> Result<(), String> {
    let colors = g0.two_coloring().ok_or("seed is not bipartite")?;
    let mut labels: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
    let mut rng = replicate_rng(stream, Purpose::Scratch, 2);
    let mut g = g0.clone();
    for _ in 0..steps {
        let d = duplicate_step_traced(&mut g, p, &mut rng);
        labels.push(labels[d.source]);
    }
    if !g.respects_partition(&labels) || g.two_coloring().is_none() {
        return Err("bipartition lost".into());
    }
    Ok(())
}

pub fn check_component_structure(
    g0: &Graph,
    p: f64,
    steps: usize,
    stream: u64,
) -> Result<(), String> {
    let g = random_graph(g0, p, steps, stream);
    let sizes = g.component_sizes();
    let big: Vec<_> = sizes.iter().filter(|&&s| s > 1).collect();
    if big.len() != 1 || *big[0] < g0.vertex_count() {
        return Err(format!("component sizes {sizes:?}"));
    }
    if sizes.iter().sum::<usize>() != g.vertex_count() {
        return Err("component sizes do not cover the graph".into());
    }
    Ok(())
}

pub fn check_star_edge_identity(g: &Graph) -> Result<(), String> {
    let hist = degree_histogram(g);
    let s1 = count_stars(&hist, 1);
    let c2 = count_cliques(g, 2).map_err(|e| e.to_string())?;
    if s1 != 2 * c2 as u128 || c2 as usize != g.edge_count() {
        return Err(format!("S_1 = {s1}, C_2 = {c2}"));
    }
    Ok(())
}

pub fn check_pair_profile(g: &Graph, k: usize) -> Result<(), String> {
    let prof = count_clique_pairs(g, k).map_err(|e| e.to_string())?;
    let c = count_cliques(g, k).map_err(|e| e.to_string())?;
    if prof.total_cliques != c || prof.pair_total() != c * c.saturating_sub(1) / 2 {
        return Err(format!("profile {:?} vs C_{k} = {c}", prof.pairs));
    }
    // l = k − 1 pairs are counted independently: two k-cliques share k − 1
    // vertices iff they differ in one vertex each
    let bits = BitGraph::of(g);
    if g.vertex_count() <= 12 && k >= 2 {
        let n = bits.n();
        let cl: Vec<u64> = (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .filter(|&m| {
                (0..n)
                    .filter(|v| m >> v & 1 == 1)
                    .all(|v| bits.adj[v] & m == m & !(1 << v))
            })
            .collect();
        let mut by_overlap = vec![0u64; k];
        for (i, a) in cl.iter().enumerate() {
            for b in &cl[i + 1..] {
                by_overlap[(a & b).count_ones() as usize] += 1;
            }
        }
        if by_overlap != prof.pairs {
            return Err(format!(
                "profile {:?} vs brute force {by_overlap:?}",
                prof.pairs
            ));
        }
    }
    Ok(())
}

pub fn check_stirling(g: &Graph, l: usize) -> Result<(), String> {
    let hist = degree_histogram(g);
    let direct: u128 = (0..g.vertex_count())
        .map(|v| (g.degree(v) as u128).pow(l as u32))
        .sum();
    let row = stirling2_row(l);
    let via: u128 = (0..=l).map(|m| row[m] * count_stars(&hist, m)).sum();
    if direct != via
        || degree_power_sum(&hist, l) != direct
        || degree_power_sum_via_stars(&hist, l) != direct
    {
        return Err(format!("Σd^{l} = {direct}, via stars {via}"));
    }
    Ok(())
}

pub fn check_flow(x: f64, p: f64, s: f64, t: f64) -> Result<(), String> {
    let two = flow(flow(x, p, s), p, t);
    let one = flow(x, p, s + t);
    if (two - one).abs() > 1e-12 * one.max(1e-300) + 1e-300 {
        return Err(format!("semigroup: {two} vs {one}"));
    }
    let fx = flow(x, p, s);
    if !(0.0..=1.0).contains(&fx)
        || fx < x * (1.0 - 1e-15)
        || flow(x, p, s + t) < fx * (1.0 - 1e-15)
    {
        return Err(format!("flow not monotone at x = {x}"));
    }
    Ok(())
}

pub fn check_cliques_vs_naive(g: &Graph) -> Result<(), String> {
    let bits = BitGraph::of(g);
    for k in 1..=5 {
        let fast = count_cliques(g, k);
        match (k, fast) {
            (1, Ok(c)) if c as usize == g.vertex_count() => {}
            (1, Err(_)) => {}
            (_, Ok(c)) if c == bits.cliques(k) => {}
            (_, other) => return Err(format!("C_{k}: {other:?} vs naive {}", bits.cliques(k))),
        }
    }
    Ok(())
}

/// `E[X_∞]` must lie in (0, 1) and the moments must decrease.
pub fn check_x_moments(p: f64) -> Result<(), String> {
    let mut prev = 1.0;
    for k in 1..=6 {
        let m = x_moment(p, k).map_err(|e| e.to_string())?;
        if !(m > 0.0 && m < prev) {
            return Err(format!("E[X^{k}] = {m}"));
        }
        prev = m;
    }
    Ok(())
}
