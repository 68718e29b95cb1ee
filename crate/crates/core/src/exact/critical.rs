//! Critical edge-retention probabilities.

use serde::Serialize;

const MAX_BISECTIONS: usize = 200;

/// Bisection for a continuous `f` with `f(lo) < 0 < f(hi)`; runs until the
/// bracket cannot shrink any further in double precision.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `p e^p = 1`, equivalently `p + ln p = 0`: the isolated-vertex
/// threshold.
pub fn p_star() -> f64 {
    // p + ln p is increasing on (0, 1], negative at 0.1 and equal to 1 at 1.
    bisect(|p| p + p.ln(), 0.1, 1.0)
}

/// Root in `(0, 1)` of `pk + p^k = 1`, the threshold for the expected
/// k-star density.
pub fn star_critical(k: usize) -> f64 {
    assert!(k >= 1, "star order must be at least 1");
    // increasing in p, -1 at 0 and k at 1
    bisect(|p| p * k as f64 + p.powi(k as i32) - 1.0, 0.0, 1.0)
}

/// `k^{−1/(k−1)}`: solves `k p^{k−1} = 1`, the threshold for the expected
/// k-clique density.
pub fn clique_critical(k: usize) -> f64 {
    assert!(k >= 2, "clique size must be at least 2");
    (k as f64).powf(-1.0 / (k as f64 - 1.0))
}

/// The power-law exponent `b > 1` solving `p(b − 1) = 1 − p^{b−1}`, or
/// `None` when no such root exists (`p` at or above `p*`, or `p` outside `(0, 1)`).
pub fn chung_exponent(p: f64) -> Option<f64> {
    if !(p > 0.0 && p < 1.0) {
        return None;
    }
    // g(1) = 0 and g'(1) = p + ln p < 0 exactly when p < p*; g is convex and
    // unbounded, so the second root is bracketed by a point just above 1 and
    // by 2/p + 2, where g > 1.
    let g = |b: f64| p * (b - 1.0) - 1.0 + p.powf(b - 1.0);
    let lo = 1.0 + 1e-9;
    let hi = (2.0 / p + 2.0).max(64.0);
    if g(lo) >= 0.0 {
        return None;
    }
    Some(bisect(g, lo, hi))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalValues {
    pub p_star: f64,
    /// `(k, p_k)` for the star thresholds.
    pub star: Vec<(usize, f64)>,
    /// `(k, k^{−1/(k−1)})` for the clique thresholds.
    pub clique: Vec<(usize, f64)>,
}

impl CriticalValues {
    pub fn compute(k_max: usize) -> Self {
        CriticalValues {
            p_star: p_star(),
            star: (1..=k_max).map(|k| (k, star_critical(k))).collect(),
            clique: (2..=k_max).map(|k| (k, clique_critical(k))).collect(),
        }
    }
}
