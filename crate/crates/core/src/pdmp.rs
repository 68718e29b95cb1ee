//! The dual process `X` on `[0, 1]`: logistic flow `ẋ = p x (1 − x)` between
//! unit-rate jumps `x → p x`.
//!
//! Simulation is event driven with the closed-form flow, so there is no
//! discretisation error. The state is carried as `ln x`, where both the
//! flow and the jumps have exact forms and very small values cannot
//! underflow.

use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::graph::{pdt_run_until, Graph, PdtClock};
use crate::observables::degree_histogram;
use crate::rng::{replicate_rng, Purpose};
use crate::stats::{replicate_stat, StreamingStat};

/// Values below this are reported as 0.
pub const REPORT_FLOOR: f64 = 1e-320;

/// Flow of `ẋ = p x (1 − x)` for time `s` from `x`.
pub fn flow(x: f64, p: f64, s: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return x;
    }
    x / (x + (1.0 - x) * (-p * s).exp())
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + (-(a - b).abs()).exp().ln_1p()
}

/// `ln(1 − e^{lx})` for `lx ≤ 0`.
fn ln_one_minus_exp(lx: f64) -> f64 {
    if lx > -std::f64::consts::LN_2 {
        (-lx.exp_m1()).ln()
    } else {
        (-lx.exp()).ln_1p()
    }
}

/// [`flow`] in log coordinates: maps `ln x` to `ln flow(x, p, s)`.
pub fn flow_log(lx: f64, p: f64, s: f64) -> f64 {
    if lx == f64::NEG_INFINITY || lx >= 0.0 {
        return lx.min(0.0);
    }
    lx - log_add_exp(lx, ln_one_minus_exp(lx) - p * s)
}

/// `∫_0^s flow(x, p, u) du` given `lx = ln x` and `lx_end = flow_log(lx, p, s)`.
fn flow_integral(lx: f64, lx_end: f64, p: f64, s: f64) -> f64 {
    if lx == f64::NEG_INFINITY {
        return 0.0;
    }
    if p == 0.0 {
        return lx.exp() * s;
    }
    let ps = p * s;
    if ps < 700.0 {
        (lx.exp() * ps.exp_m1()).ln_1p() / p
    } else {
        (lx + ps - lx_end) / p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdmpState {
    pub log_x: f64,
    pub t: f64,
}

impl PdmpState {
    pub fn new(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!("x = {x} is not in [0, 1]")));
        }
        Ok(PdmpState {
            log_x: x.ln(),
            t: 0.0,
        })
    }

    pub fn x(&self) -> f64 {
        let x = self.log_x.exp();
        if x < REPORT_FLOOR {
            0.0
        } else {
            x
        }
    }
}

/// Outcome of a simulated path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathSummary {
    pub x_final: f64,
    pub log_x_final: f64,
    pub jumps: u64,
    /// Time average of `X` over `[burn_in, horizon]`; `None` for an empty window.
    pub time_average: Option<f64>,
    pub burn_in: f64,
}

fn check_inputs(x0: f64, p: f64, horizon: f64) -> Result<()> {
    check_probability(p)?;
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::InvalidParameter(format!(
            "x0 = {x0} is not in [0, 1]"
        )));
    }
    if !(horizon >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} must be non-negative"
        )));
    }
    Ok(())
}

/// Simulates `X` from `x0` up to time `horizon`, accumulating the time
/// integral of `X` after `burn_in`.
pub fn simulate_path<R: Rng + ?Sized>(
    x0: f64,
    p: f64,
    horizon: f64,
    burn_in: f64,
    rng: &mut R,
) -> Result<PathSummary> {
    check_inputs(x0, p, horizon)?;
    let mut state = PdmpState::new(x0)?;
    let ln_p = p.ln();
    let mut jumps = 0;
    let mut integral = 0.0;
    let drift = |state: &mut PdmpState, until: f64, integral: &mut f64| {
        // split at the burn-in boundary so only the averaging window is integrated
        if state.t < burn_in && until > burn_in {
            state.log_x = flow_log(state.log_x, p, burn_in - state.t);
            state.t = burn_in;
        }
        let s = until - state.t;
        let next = flow_log(state.log_x, p, s);
        if state.t >= burn_in {
            *integral += flow_integral(state.log_x, next, p, s);
        }
        state.log_x = next;
        state.t = until;
    };
    loop {
        let gap: f64 = rng.sample(Exp1);
        let next = state.t + gap;
        if next > horizon {
            drift(&mut state, horizon, &mut integral);
            break;
        }
        drift(&mut state, next, &mut integral);
        state.log_x += ln_p;
        jumps += 1;
    }
    let window = horizon - burn_in;
    Ok(PathSummary {
        x_final: state.x(),
        log_x_final: state.log_x,
        jumps,
        time_average: (window > 0.0).then(|| integral / window),
        burn_in,
    })
}

/// `X_T` started from `x0`.
pub fn simulate_x<R: Rng + ?Sized>(x0: f64, p: f64, horizon: f64, rng: &mut R) -> Result<f64> {
    Ok(simulate_path(x0, p, horizon, horizon, rng)?.x_final)
}

/// Monte Carlo estimates of both sides of
/// `E[H°_{1−x}(G_t) | G_0] = E[Σ_k F°_k(G_0) (1 − X_t)^k | X_0 = x]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualityResult {
    pub x: f64,
    pub p: f64,
    pub t: f64,
    pub lhs: StreamingStat,
    pub rhs: StreamingStat,
}

impl DualityResult {
    /// Difference of the means in units of its combined standard error;
    /// 0 when both sides are exact and equal, infinite when exact and unequal.
    pub fn z(&self) -> f64 {
        let diff = self.lhs.mean - self.rhs.mean;
        let se =
            (self.lhs.se().unwrap_or(0.0).powi(2) + self.rhs.se().unwrap_or(0.0).powi(2)).sqrt();
        if se > 0.0 {
            diff / se
        } else if diff.abs() <= 1e-12 * self.lhs.mean.abs().max(1.0) {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }

    pub fn combined_se(&self) -> f64 {
        (self.lhs.se().unwrap_or(0.0).powi(2) + self.rhs.se().unwrap_or(0.0).powi(2)).sqrt()
    }
}

/// Runs `replicates` PDt graphs and `replicates` paths of `X`, each side on
/// its own random streams derived from `master_seed`.
pub fn duality_check(
    g0: &Graph,
    x: f64,
    p: f64,
    t: f64,
    replicates: u64,
    master_seed: u64,
) -> Result<DualityResult> {
    check_inputs(x, p, t)?;
    if replicates < 2 {
        return Err(Error::InvalidParameter(
            "duality check needs at least 2 replicates".into(),
        ));
    }
    let hist0 = degree_histogram(g0);
    let lhs = replicate_stat(replicates, |r| {
        let mut rng = replicate_rng(master_seed, Purpose::Continuous, r);
        let mut g = g0.clone();
        let mut clock = PdtClock::default();
        pdt_run_until(&mut g, &mut clock, p, t, &mut rng);
        degree_histogram(&g).pgf(1.0 - x)
    });
    let rhs = replicate_stat(replicates, |r| {
        let mut rng = replicate_rng(master_seed, Purpose::Pdmp, r);
        let xt = simulate_x(x, p, t, &mut rng).expect("inputs validated");
        hist0.pgf(1.0 - xt)
    });
    Ok(DualityResult { x, p, t, lhs, rhs })
}
