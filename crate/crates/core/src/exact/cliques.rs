//! Mean and second moment of the k-clique count.
//!
//! The mean obeys `E[C_k(n+1) | G_n] = (1 + k p^{k-1} / n) C_k(n)`. For the
//! second moment the counts `C_{k,l}` of clique pairs sharing exactly `l`
//! vertices are propagated jointly with `E[C_k]` and `E[C_k^2]`.

use crate::error::{Error, Result};
use crate::exact::gamma::{gamma_asymptote, gamma_ratio_product};
use crate::exact::LawParams;

/// Growth exponent `k p^{k-1}` of the expected k-clique count.
pub fn clique_exponent(k: usize, p: f64) -> f64 {
    k as f64 * p.powi(k as i32 - 1)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "clique size k = {k} must be at least 2"
        )));
    }
    Ok(())
}

/// `E[C_k(n)] = C_k(n0) ∏_{m=n0}^{n-1} (m + k p^{k-1}) / m`.
pub fn expected_cliques(law: &LawParams, k: usize, n: usize) -> Result<f64> {
    check_k(k)?;
    law.check_size(n)?;
    let c0 = law.seed_cliques(k)?;
    if c0 == 0.0 {
        return Ok(0.0);
    }
    Ok(c0 * gamma_ratio_product(law.n0, n, clique_exponent(k, law.p))?)
}

/// `C_k(n0) Γ(n0) n^{k p^{k-1}} / Γ(n0 + k p^{k-1})`.
pub fn expected_cliques_asymptote(law: &LawParams, k: usize, n: usize) -> Result<f64> {
    check_k(k)?;
    let c0 = law.seed_cliques(k)?;
    Ok(c0 * gamma_asymptote(law.n0, clique_exponent(k, law.p), n)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliqueMoments {
    pub n: usize,
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// `E[C_{k,l}(n)]` for `l = 0..k`.
    pub pair_means: Vec<f64>,
}

/// Propagates `E[C_{k,l}]`, `E[C_k]` and `E[C_k^2]` from the seed to `n`.
pub fn expected_clique_second_moment(law: &LawParams, k: usize, n: usize) -> Result<CliqueMoments> {
    check_k(k)?;
    law.check_size(n)?;
    let profile = law.pair_profile(k)?;
    let p = law.p;
    let q = p.powi(k as i32 - 1);
    let mut pairs: Vec<f64> = profile.pairs.iter().map(|&c| c as f64).collect();
    let mut mean = law.seed_cliques(k)?;
    let mut second = mean * mean;
    // coefficient of C_{k,l} in its own increment
    let own: Vec<f64> = (0..k)
        .map(|l| 2.0 * (k - l) as f64 * q + l as f64 * p.powi((2 * k - l - 1) as i32))
        .collect();
    // weights l p^{k-1-l} in the E[C_k^2] increment
    let cross: Vec<f64> = (0..k)
        .map(|l| {
            if l == 0 {
                0.0
            } else {
                l as f64 * p.powi((k - 1 - l) as i32)
            }
        })
        .collect();
    let pk = p.powi(k as i32);
    let kq = k as f64 * q;
    let mut next = vec![0.0; k];
    for m in law.n0..n {
        let inv = 1.0 / m as f64;
        for l in 0..k {
            let feed = if l + 1 < k {
                2.0 * (l + 1) as f64 * q * pairs[l + 1]
            } else {
                kq * mean
            };
            next[l] = pairs[l] + inv * (own[l] * pairs[l] + feed);
        }
        let pair_term: f64 = cross.iter().zip(&pairs).map(|(w, c)| w * c).sum();
        second = (1.0 + 2.0 * kq * inv) * second + 2.0 * pk * inv * pair_term + kq * inv * mean;
        mean *= 1.0 + kq * inv;
        std::mem::swap(&mut pairs, &mut next);
    }
    let variance = second - mean * mean;
    if variance < -1e-9 * mean * mean.max(1.0) {
        return Err(Error::Numerical(format!(
            "negative clique-count variance {variance} at n = {n}"
        )));
    }
    Ok(CliqueMoments {
        n,
        mean,
        second_moment: second,
        variance,
        pair_means: pairs,
    })
}
