//! Limits tied to isolated vertices: moments of the stationary law of the
//! dual process `X` and the limiting isolated fraction `x_∞`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::critical::p_star;
use crate::exact::LawParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p ≤ p*`: almost every vertex ends up isolated.
    Subcritical,
    /// `p > p*`: a positive fraction keeps edges.
    Supercritical,
}

/// `E[X_∞^k] = (1 − ln(1/p)/p) ∏_{l=1}^{k−1} (1 − (1 − p^l)/(pl))` for `p > p*`.
pub fn x_moment(p: f64, k: usize) -> Result<f64> {
    let ps = p_star();
    if !(p > ps && p <= 1.0) {
        return Err(Error::Subcritical { p, p_star: ps });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let first = 1.0 + p.ln() / p;
    Ok((1..k).fold(first, |acc, l| {
        acc * (1.0 - (1.0 - p.powi(l as i32)) / (p * l as f64))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsolatedLimit {
    pub value: f64,
    pub regime: Regime,
}

/// `x_∞ = 1 − Σ_k S_k°(n0)/k! (−1)^{k−1} E[X_∞^k]`, where `normalized_stars[k]`
/// is `S_k(n0)/n0` (index 0 ignored). Returns 1 in the subcritical regime.
pub fn x_infinity(p: f64, normalized_stars: &[f64]) -> Result<IsolatedLimit> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
    }
    if p <= p_star() {
        return Ok(IsolatedLimit {
            value: 1.0,
            regime: Regime::Subcritical,
        });
    }
    let mut sum = 0.0;
    let mut factorial = 1.0;
    for (k, &s) in normalized_stars.iter().enumerate().skip(1) {
        factorial *= k as f64;
        if s == 0.0 {
            continue;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * s / factorial * x_moment(p, k)?;
    }
    Ok(IsolatedLimit {
        value: 1.0 - sum,
        regime: Regime::Supercritical,
    })
}

/// [`x_infinity`] for the seed recorded in `law`.
pub fn isolated_limit(law: &LawParams) -> Result<IsolatedLimit> {
    let n0 = law.n0 as f64;
    let s: Vec<f64> = law.stars.iter().map(|&s| s as f64 / n0).collect();
    x_infinity(law.p, &s)
}
