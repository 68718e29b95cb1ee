//! Exact laws against exhaustive enumeration of every duplication outcome.

mod common;

use common::{enumerate, expectation, BitGraph};
use pdgraph::exact::{
    degree_law, expected_clique_second_moment, expected_cliques, expected_degree_profile,
    expected_stars, expected_tracked_degree, LawParams,
};
use pdgraph::graph::{build_seed, Graph, SeedSpec};

fn law(spec: &SeedSpec, p: f64) -> (Graph, LawParams) {
    let g = build_seed(spec, false).unwrap();
    let law = LawParams::from_graph(&g, p).unwrap();
    (g, law)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn edges_of_triangle_at_half() {
    let g = BitGraph::complete(3);
    let brute = expectation(&g, 0.5, 5, |h| h.cliques(2) as f64);
    assert!((brute - 5.0).abs() < 1e-12, "{brute}");
    let (_, l) = law(&SeedSpec::Complete(3), 0.5);
    assert!((expected_cliques(&l, 2, 5).unwrap() - 5.0).abs() < 1e-12);
}

#[test]
fn clique_means_match_enumeration() {
    let cases = [
        (SeedSpec::Complete(3), BitGraph::complete(3)),
        (SeedSpec::Complete(4), BitGraph::complete(4)),
        (SeedSpec::Cycle(4), BitGraph::cycle(4)),
    ];
    for (spec, bits) in &cases {
        for p in [0.0, 0.3, 0.5, 0.8, 1.0] {
            let (_, l) = law(spec, p);
            for k in 2..=4 {
                for n in bits.n()..=bits.n() + 3 {
                    let brute = expectation(bits, p, n, |h| h.cliques(k) as f64);
                    let exact = expected_cliques(&l, k, n).unwrap();
                    assert!(
                        close(exact, brute, 1e-12),
                        "{spec:?} p={p} k={k} n={n}: {exact} vs {brute}"
                    );
                }
            }
        }
    }
}

#[test]
fn clique_second_moments_match_enumeration() {
    let cases = [
        (SeedSpec::Complete(3), BitGraph::complete(3), 5),
        (SeedSpec::Complete(4), BitGraph::complete(4), 7),
        (SeedSpec::Cycle(4), BitGraph::cycle(4), 7),
    ];
    for (spec, bits, n_max) in &cases {
        for p in [0.5, 0.3, 0.9] {
            let (_, l) = law(spec, p);
            for k in 2..=3 {
                for n in bits.n()..=*n_max {
                    let brute = expectation(bits, p, n, |h| (h.cliques(k) as f64).powi(2));
                    let exact = expected_clique_second_moment(&l, k, n).unwrap();
                    assert!(
                        close(exact.second_moment, brute, 1e-11),
                        "{spec:?} p={p} k={k} n={n}: {} vs {brute}",
                        exact.second_moment
                    );
                }
            }
        }
    }
}

#[test]
fn star_means_match_enumeration() {
    for (spec, bits) in [
        (SeedSpec::Complete(3), BitGraph::complete(3)),
        (SeedSpec::Path(4), path(4)),
    ] {
        for p in [0.0, 0.25, 0.6, 1.0] {
            let (_, l) = law(&spec, p);
            for k in 1..=4 {
                for n in bits.n()..=bits.n() + 3 {
                    let brute = expectation(&bits, p, n, |h| h.stars(k));
                    let exact = expected_stars(&l, k, n).unwrap();
                    assert!(
                        close(exact, brute, 1e-12),
                        "{spec:?} p={p} k={k} n={n}: {exact} vs {brute}"
                    );
                }
            }
        }
    }
}

#[test]
fn triangle_stars_at_p_one() {
    let brute = expectation(&BitGraph::complete(3), 1.0, 4, |h| h.stars(2));
    assert_eq!(brute, 16.0);
}

#[test]
fn degree_profile_matches_enumeration() {
    for (spec, bits) in [
        (SeedSpec::Complete(3), BitGraph::complete(3)),
        (SeedSpec::Star(4), star(4)),
    ] {
        for p in [0.0, 0.4, 0.7, 1.0] {
            let (_, l) = law(&spec, p);
            for n in bits.n()..=bits.n() + 3 {
                let exact = expected_degree_profile(&l, n).unwrap();
                for (k, &f) in exact.iter().enumerate() {
                    let brute = expectation(&bits, p, n, |h| h.degree_count(k));
                    assert!(
                        close(f, brute, 1e-12),
                        "{spec:?} p={p} n={n} F_{k}: {f} vs {brute}"
                    );
                }
                let beyond = expectation(&bits, p, n, |h| {
                    (0..h.n()).filter(|&v| h.degree(v) >= exact.len()).count() as f64
                });
                assert!(beyond < 1e-15);
            }
        }
    }
}

#[test]
fn tracked_degree_law_matches_enumeration() {
    let bits = BitGraph::cycle(4);
    for p in [0.3, 0.7, 1.0] {
        for n in 4..=7 {
            let exact = degree_law(4, 2, p, n).unwrap();
            let mut brute = vec![0.0; n];
            enumerate(&bits, p, n, &mut |h, w| brute[h.degree(0)] += w);
            for (d, &b) in brute.iter().enumerate() {
                assert!(
                    (exact.prob(d) - b).abs() < 1e-12,
                    "p={p} n={n} d={d}: {} vs {b}",
                    exact.prob(d)
                );
            }
            let mean: f64 = brute.iter().enumerate().map(|(d, w)| d as f64 * w).sum();
            assert!((expected_tracked_degree(4, 2, p, n).unwrap() - mean).abs() < 1e-12);
        }
    }
}

#[test]
fn one_step_conditional_means() {
    // E[C_k(n+1) | G_n] = C_k (1 + k p^{k−1}/n) on an arbitrary fixed graph
    let bits = BitGraph::from_edges(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (3, 4),
            (2, 4),
            (1, 3),
            (4, 5),
        ],
    );
    for p in [0.2, 0.5, 0.9] {
        for k in 2..=4 {
            let c = bits.cliques(k) as f64;
            let brute = expectation(&bits, p, 7, |h| h.cliques(k) as f64);
            let rule = c * (1.0 + k as f64 * p.powi(k as i32 - 1) / 6.0);
            assert!(close(brute, rule, 1e-12), "p={p} k={k}: {brute} vs {rule}");
        }
        for k in 1..=3 {
            let s = |j: usize| bits.stars(j);
            let kf = k as f64;
            let rule = (1.0 + (p * kf + p.powi(k as i32)) / 6.0) * s(k)
                + p * kf * (kf - 1.0) / 6.0 * s(k - 1);
            let brute = expectation(&bits, p, 7, |h| h.stars(k));
            assert!(close(brute, rule, 1e-12), "p={p} S_{k}: {brute} vs {rule}");
        }
    }
}

fn path(n: usize) -> BitGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    BitGraph::from_edges(n, &edges)
}

fn star(n: usize) -> BitGraph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    BitGraph::from_edges(n, &edges)
}
