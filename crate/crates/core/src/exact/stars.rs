//! Expected k-star counts.
//!
//! `E[S_k(n+1) | G_n] = (1 + (pk + p^k)/n) S_k(n) + pk(k-1)/n S_{k-1}(n)`, so
//! the vector `(S_0, …, S_k)` follows a lower-bidiagonal linear recursion
//! with `S_0(n) = n`.

use crate::error::{Error, Result};
use crate::exact::gamma::gamma_ratio_product;
use crate::exact::LawParams;

/// `(E[S_0(n)], …, E[S_k(n)])`, propagated exactly from the seed.
pub fn expected_star_vector(law: &LawParams, k: usize, n: usize) -> Result<Vec<f64>> {
    law.check_size(n)?;
    let p = law.p;
    let mut s: Vec<f64> = (0..=k).map(|j| law.seed_stars(j)).collect();
    s[0] = law.n0 as f64;
    let growth: Vec<f64> = (0..=k).map(|j| p * j as f64 + p.powi(j as i32)).collect();
    let feed: Vec<f64> = (0..=k)
        .map(|j| p * (j * j.saturating_sub(1)) as f64)
        .collect();
    for m in law.n0..n {
        let inv = 1.0 / m as f64;
        // descending order so s[j - 1] is still the value at time m
        for j in (1..=k).rev() {
            s[j] += inv * (growth[j] * s[j] + feed[j] * s[j - 1]);
        }
        s[0] += 1.0;
    }
    Ok(s)
}

pub fn expected_stars(law: &LawParams, k: usize, n: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "star order must be at least 1".into(),
        ));
    }
    Ok(expected_star_vector(law, k, n)?[k])
}

fn require_positive_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "the closed form divides by p; use the recursion at p = 0".into(),
        ))
    }
}

/// `E[S_2(n)] = (S_2 + 2S_1/p) ∏ (m + 2p + p²)/m − (2S_1/p) ∏ (m + 2p)/m`.
pub fn expected_s2_closed_form(law: &LawParams, n: usize) -> Result<f64> {
    require_positive_p(law.p)?;
    law.check_size(n)?;
    let p = law.p;
    let s1 = law.seed_stars(1);
    let s2 = law.seed_stars(2);
    let q2 = s2 + 2.0 * s1 / p;
    Ok(q2 * gamma_ratio_product(law.n0, n, 2.0 * p + p * p)?
        - 2.0 * s1 / p * gamma_ratio_product(law.n0, n, 2.0 * p)?)
}

/// Coefficients `a_1, …, a_k` with `a_l = ∏_{m=l}^{k-1} m(m+1) / (k − m + p^{k-1} − p^{m-1})`,
/// chosen so that `Σ a_l S_l` grows by the factor `1 + (pk + p^k)/n` in
/// expectation. Index 0 of the result holds `a_1`.
pub fn star_combination_coefficients(k: usize, p: f64) -> Result<Vec<f64>> {
    require_positive_p(p)?;
    if k == 0 || p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 1 and p <= 1, got k = {k}, p = {p}"
        )));
    }
    let mut a = vec![0.0; k];
    a[k - 1] = 1.0;
    for l in (1..k).rev() {
        let denom = (k - l) as f64 + p.powi(k as i32 - 1) - p.powi(l as i32 - 1);
        if !(denom > 0.0) {
            return Err(Error::Numerical(format!(
                "non-positive denominator at l = {l}, k = {k}, p = {p}"
            )));
        }
        a[l - 1] = a[l] * (l * (l + 1)) as f64 / denom;
    }
    for l in 1..k {
        let lhs = (p * l as f64 + p.powi(l as i32)) * a[l - 1] + p * (l * (l + 1)) as f64 * a[l];
        let rhs = (p * k as f64 + p.powi(k as i32)) * a[l - 1];
        if (lhs - rhs).abs() > 1e-12 * rhs.abs().max(lhs.abs()) {
            return Err(Error::Numerical(format!(
                "closure identity fails at l = {l}: {lhs} vs {rhs}"
            )));
        }
    }
    Ok(a)
}

/// `Σ_l a_l E[S_l(n)]`.
pub fn q_combination(law: &LawParams, k: usize, n: usize) -> Result<f64> {
    let a = star_combination_coefficients(k, law.p)?;
    let s = expected_star_vector(law, k, n)?;
    Ok(a.iter().zip(&s[1..]).map(|(a, s)| a * s).sum())
}
