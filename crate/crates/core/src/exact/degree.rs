//! Degree statistics: the expected degree profile `E[F_k(n)]` and the exact
//! law of the degree of an initial vertex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_probability, Error, Result};
use crate::exact::gamma::{gamma_ratio_limit, gamma_ratio_product, rising_factorial};
use crate::exact::{binomial, compensated_sum, LawParams};
use crate::observables::DegreeHistogram;

/// Largest number of steps for which the alternating-sum form is compared
/// against the recursion.
pub const ALTERNATING_CHECK_MAX_STEPS: usize = 30;
const ALTERNATING_TOLERANCE: f64 = 1e-9;

/// Binomial(l, p) thinning of a degree vector: `out_k = Σ_l f_l C(l,k) p^k (1-p)^(l-k)`.
fn thin(f: &[f64], p: f64, ln_fact: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    if p == 0.0 {
        out[0] = f.iter().sum();
        return;
    }
    if p == 1.0 {
        out[..f.len()].copy_from_slice(f);
        return;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    for (l, &fl) in f.iter().enumerate() {
        if fl == 0.0 {
            continue;
        }
        for (k, o) in out.iter_mut().enumerate().take(l + 1) {
            let ln_pmf =
                ln_fact[l] - ln_fact[k] - ln_fact[l - k] + k as f64 * lp + (l - k) as f64 * lq;
            *o += fl * ln_pmf.exp();
        }
    }
}

/// `E[F_k(n)]` for `k = 0..=maxdeg(n0) + (n − n0)`, propagated exactly.
pub fn expected_degree_profile(law: &LawParams, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    expected_degree_profile_path(law, n, |m, f| {
        if m == n {
            out = f.to_vec();
        }
    })?;
    Ok(out)
}

/// Propagates `E[F_k(m)]` from `n0` to `n`, calling `visit(m, profile)` for
/// every `m` in `n0..=n`. The profile slice covers the support at time `m`.
pub fn expected_degree_profile_path<V>(law: &LawParams, n: usize, mut visit: V) -> Result<()>
where
    V: FnMut(usize, &[f64]),
{
    law.check_size(n)?;
    let p = law.p;
    let d0 = law.degree_counts.len().saturating_sub(1);
    let len = d0 + (n - law.n0) + 1;
    let mut ln_fact = vec![0.0; len];
    for i in 1..len {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let mut f = vec![0.0; len];
    for (k, &c) in law.degree_counts.iter().enumerate() {
        f[k] = c as f64;
    }
    let mut thinned = vec![0.0; len];
    visit(law.n0, &f[..d0 + 1]);
    for (step, m) in (law.n0..n).enumerate() {
        let support = d0 + step + 1;
        let inv = 1.0 / m as f64;
        thin(&f[..support], p, &ln_fact, &mut thinned[..support]);
        // descending so f[k - 1] still holds the value at time m
        for k in (0..=support).rev() {
            let up = if k > 0 {
                p * (k - 1) as f64 * f[k - 1]
            } else {
                0.0
            };
            let stay = if k < support { f[k] } else { 0.0 };
            let gained = if k < support { thinned[k] } else { 0.0 };
            f[k] = stay + inv * (up - p * k as f64 * stay + gained);
        }
        visit(m + 1, &f[..support + 1]);
    }
    Ok(())
}

fn check_tracked(n0: usize, a: usize, p: f64, n: usize) -> Result<()> {
    check_probability(p)?;
    if a == 0 || a + 1 > n0 {
        return Err(Error::InvalidParameter(format!(
            "initial degree a = {a} must lie in 1..={}",
            n0.saturating_sub(1)
        )));
    }
    if n < n0 {
        return Err(Error::InvalidParameter(format!("n = {n} below n0 = {n0}")));
    }
    Ok(())
}

/// Law of the degree at time `n` of a vertex that had degree `a` at time `n0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeLaw {
    pub n: usize,
    pub n0: usize,
    pub a: usize,
    pub p: f64,
    /// `pmf[i] = P(D(n) = a + i)`.
    pub pmf: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl DegreeLaw {
    pub fn support(&self) -> std::ops::RangeInclusive<usize> {
        self.a..=self.a + self.pmf.len() - 1
    }

    pub fn prob(&self, degree: usize) -> f64 {
        degree
            .checked_sub(self.a)
            .and_then(|i| self.pmf.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.support().zip(&self.pmf).map(|(l, &q)| l as f64 * q))
    }

    /// Total-variation distance to an empirical histogram.
    pub fn tv_distance(&self, hist: &DegreeHistogram) -> f64 {
        let total = hist.n as f64;
        let top = self.a + self.pmf.len() + hist.counts.len();
        0.5 * (0..top)
            .map(|l| (self.prob(l) - hist.count(l) as f64 / total).abs())
            .sum::<f64>()
    }
}

/// Exact degree law via `Φ_l(m+1) = Φ_l(m) − (p l / m)(Φ_l(m) − Φ_{l−1}(m))`
/// with `Φ_l(n0) = 1{l ≥ a}`. For short horizons the result is compared with
/// the alternating-sum form and a mismatch is reported as an error.
pub fn degree_law(n0: usize, a: usize, p: f64, n: usize) -> Result<DegreeLaw> {
    check_tracked(n0, a, p, n)?;
    let steps = n - n0;
    // cdf[i] = Φ_{a+i}; Φ_{a-1} = 0 throughout
    let mut cdf = vec![1.0; steps + 1];
    for (s, m) in (n0..n).enumerate() {
        let inv = 1.0 / m as f64;
        for i in (0..=s + 1).rev() {
            let below = if i == 0 { 0.0 } else { cdf[i - 1] };
            let rate = p * (a + i) as f64 * inv;
            cdf[i] = (cdf[i] - rate * (cdf[i] - below)).clamp(below, 1.0);
        }
    }
    let mut pmf = Vec::with_capacity(cdf.len());
    let mut prev = 0.0;
    for &c in &cdf {
        pmf.push((c - prev).max(0.0));
        prev = c;
    }
    let law = DegreeLaw {
        n,
        n0,
        a,
        p,
        pmf,
        cdf,
    };
    if steps <= ALTERNATING_CHECK_MAX_STEPS {
        let alt = degree_law_alternating(n0, a, p, n)?;
        for (i, (x, y)) in law.pmf.iter().zip(&alt).enumerate() {
            if (x - y).abs() > ALTERNATING_TOLERANCE {
                return Err(Error::Numerical(format!(
                    "degree law mismatch at l = {}: recursion {x}, alternating sum {y}",
                    a + i
                )));
            }
        }
    }
    Ok(law)
}

/// `P(D(n) = l) = Σ_{m=a}^{l} (−1)^{m−a} C(l−1, m−1) C(m−1, a−1) ∏_{j=n0}^{n−1} (1 − pm/j)`
/// for `l = a..=a + n − n0`. The terms cancel catastrophically, so the sum is
/// formed in exact rational arithmetic (the double `p` is a dyadic rational)
/// and rounded once. Cost grows quickly with `n − n0`.
pub fn degree_law_alternating(n0: usize, a: usize, p: f64, n: usize) -> Result<Vec<f64>> {
    check_tracked(n0, a, p, n)?;
    let top = a + (n - n0);
    // p = num/den exactly; every decay product shares the denominator ∏ j·den
    let p = BigRational::from_float(p).expect("finite p");
    let (num, den) = (p.numer().clone(), p.denom().clone());
    let decay: Vec<BigInt> = (0..=top)
        .map(|m| {
            let pm = &num * BigInt::from(m);
            (n0..n).fold(BigInt::one(), |acc, j| acc * (BigInt::from(j) * &den - &pm))
        })
        .collect();
    let common = (n0..n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j) * &den);
    let binom = |n: usize, k: usize| -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| {
            acc * BigInt::from(n - i) / BigInt::from(i + 1)
        })
    };
    Ok((a..=top)
        .map(|l| {
            let mut sum = BigInt::zero();
            for (m, d) in decay.iter().enumerate().take(l + 1).skip(a) {
                let term = binom(l - 1, m - 1) * binom(m - 1, a - 1) * d;
                if (m - a).is_multiple_of(2) {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            BigRational::new(sum, common.clone())
                .to_f64()
                .unwrap_or(f64::NAN)
        })
        .collect())
}

/// Degree law at `p = 1` as a Pólya urn: starting with `a` red and `n0 − a`
/// other balls, the number of red balls after `n − n0` draws.
pub fn polya_pmf(n0: usize, a: usize, n: usize) -> Result<Vec<f64>> {
    check_tracked(n0, a, 1.0, n)?;
    let draws = n - n0;
    let denom = rising_factorial(n0 as f64, draws);
    Ok((0..=draws)
        .map(|r| {
            binomial(draws, r)
                * rising_factorial(a as f64, r)
                * rising_factorial((n0 - a) as f64, draws - r)
                / denom
        })
        .collect())
}

/// `E[D(n)] = a ∏_{l=n0}^{n−1} (l + p)/l`.
pub fn expected_tracked_degree(n0: usize, a: usize, p: f64, n: usize) -> Result<f64> {
    check_tracked(n0, a, p, n)?;
    Ok(a as f64 * gamma_ratio_product(n0, n, p)?)
}

/// `E[n^{−mp} D(n)(D(n)+1)…(D(n)+m−1)] = a_{↑m} n^{−mp} ∏_{l=n0}^{n−1} (l + mp)/l`.
pub fn degree_scaled_moment(n0: usize, a: usize, p: f64, m: usize, n: usize) -> Result<f64> {
    check_tracked(n0, a, p, n)?;
    let e = m as f64 * p;
    Ok(rising_factorial(a as f64, m)
        * (-e * (n as f64).ln()).exp()
        * gamma_ratio_product(n0, n, e)?)
}

/// `a_{↑m} Γ(n0) / Γ(n0 + mp)`, the `n → ∞` limit of [`degree_scaled_moment`].
pub fn degree_limit_moment(n0: usize, a: usize, p: f64, m: usize) -> Result<f64> {
    check_tracked(n0, a, p, n0)?;
    Ok(rising_factorial(a as f64, m) * gamma_ratio_limit(n0, m as f64 * p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cliques::expected_cliques;
    use crate::graph::{build_seed, SeedSpec};

    fn law(spec: SeedSpec, p: f64) -> LawParams {
        LawParams::from_graph(&build_seed(&spec, false).unwrap(), p).unwrap()
    }

    #[test]
    fn profile_p_zero() {
        let f = expected_degree_profile(&law(SeedSpec::Complete(3), 0.0), 10).unwrap();
        assert!((f[0] - 7.0).abs() < 1e-12);
        assert!((f[2] - 3.0).abs() < 1e-12);
        assert!(f
            .iter()
            .enumerate()
            .all(|(k, &v)| k == 0 || k == 2 || v.abs() < 1e-12));
    }

    #[test]
    fn profile_single_edge_p_one() {
        let f = expected_degree_profile(&law(SeedSpec::Path(2), 1.0), 3).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f[0].abs() < 1e-15);
        assert!((f[1] - 2.0).abs() < 1e-15);
        assert!((f[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn profile_conserves_mass_and_edges() {
        let l = law(SeedSpec::Complete(4), 0.37);
        let n = 200;
        let f = expected_degree_profile(&l, n).unwrap();
        let mass: f64 = f.iter().sum();
        let first: f64 = f.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
        assert!((mass / n as f64 - 1.0).abs() < 1e-8);
        let edges = expected_cliques(&l, 2, n).unwrap();
        assert!((first / (2.0 * edges) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn path_visits_every_size() {
        let l = law(SeedSpec::Complete(4), 0.5);
        let mut seen = Vec::new();
        expected_degree_profile_path(&l, 40, |m, f| {
            assert_eq!(f.len(), 3 + (m - 4) + 1);
            seen.push((m, f.iter().sum::<f64>()));
        })
        .unwrap();
        assert_eq!(seen.len(), 37);
        for (m, mass) in seen {
            assert!((mass - m as f64).abs() < 1e-9);
        }
        let direct = expected_degree_profile(&l, 40).unwrap();
        assert_eq!(direct.len(), 40);
    }

    #[test]
    fn law_point_mass_at_start() {
        let d = degree_law(4, 2, 0.3, 4).unwrap();
        assert_eq!(d.pmf, vec![1.0]);
        assert_eq!(d.cdf, vec![1.0]);
    }

    #[test]
    fn law_uniform_from_single_edge() {
        let d = degree_law(2, 1, 1.0, 4).unwrap();
        for q in &d.pmf {
            assert!((q - 1.0 / 3.0).abs() < 1e-14);
        }
        assert_eq!(d.support(), 1..=3);
    }

    #[test]
    fn law_is_a_distribution() {
        let d = degree_law(4, 2, 0.7, 250).unwrap();
        assert!((d.cdf.last().unwrap() - 1.0).abs() < 1e-10);
        assert!((d.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(d.cdf.windows(2).all(|w| w[0] <= w[1]));
        let mean = expected_tracked_degree(4, 2, 0.7, 250).unwrap();
        assert!((d.mean() - mean).abs() < 1e-8);
    }

    #[test]
    fn alternating_agrees_on_short_horizons() {
        for &(n0, a, p) in &[(4, 2, 0.7), (5, 1, 0.25), (3, 2, 1.0), (6, 5, 0.9)] {
            for n in n0..=n0 + 30 {
                let d = degree_law(n0, a, p, n).unwrap();
                let alt = degree_law_alternating(n0, a, p, n).unwrap();
                for (x, y) in d.pmf.iter().zip(&alt) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn polya_matches_at_p_one() {
        let d = degree_law(3, 1, 1.0, 13).unwrap();
        let urn = polya_pmf(3, 1, 13).unwrap();
        for (x, y) in d.pmf.iter().zip(&urn) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn moments() {
        assert!((degree_limit_moment(2, 1, 1.0, 1).unwrap() - 0.5).abs() < 1e-14);
        let at_start = degree_scaled_moment(5, 3, 0.4, 2, 5).unwrap();
        assert!((at_start - 12.0 * 5f64.powf(-0.8)).abs() < 1e-12);
        let far = degree_scaled_moment(5, 3, 0.4, 2, 2_000_000).unwrap();
        let lim = degree_limit_moment(5, 3, 0.4, 2).unwrap();
        assert!((far / lim - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_initial_degree() {
        assert!(degree_law(4, 0, 0.5, 10).is_err());
        assert!(degree_law(4, 4, 0.5, 10).is_err());
        assert!(degree_law(4, 2, 0.5, 3).is_err());
    }
}
