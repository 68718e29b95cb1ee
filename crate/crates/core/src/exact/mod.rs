//! Deterministic laws of the partial duplication graph: expectations,
//! second moments, exact degree distributions, limit moments and critical
//! values. These serve as oracles for the Monte Carlo layer.

pub mod cliques;
pub mod critical;
pub mod degree;
pub mod gamma;
pub mod isolated;
pub mod stars;
pub mod transitivity;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::graph::Graph;
use crate::observables::{
    count_clique_pairs, count_cliques, count_stars, degree_histogram, CliquePairProfile,
    DEFAULT_K_MAX,
};

pub use cliques::{
    clique_exponent, expected_clique_second_moment, expected_cliques, expected_cliques_asymptote,
    CliqueMoments,
};
pub use critical::{chung_exponent, clique_critical, p_star, star_critical, CriticalValues};
pub use degree::{
    degree_law, degree_law_alternating, degree_limit_moment, degree_scaled_moment,
    expected_degree_profile, expected_degree_profile_path, expected_tracked_degree, polya_pmf,
    DegreeLaw,
};
pub use gamma::{gamma_asymptote, gamma_ratio_product};
pub use isolated::{isolated_limit, x_infinity, x_moment, IsolatedLimit, Regime};
pub use stars::{
    expected_s2_closed_form, expected_star_vector, expected_stars, q_combination,
    star_combination_coefficients,
};
pub use transitivity::{transitivity_scaling, TransitivityScaling};

/// Clique sizes with at most this many cliques in the seed get their pair
/// profile recorded by [`LawParams::from_graph`].
pub const AUTO_PAIR_LIMIT: u64 = 2_000;

/// Edge-retention probability together with everything the laws need to
/// know about the initial graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawParams {
    pub p: f64,
    pub n0: usize,
    /// `C_k(n0)` for the clique sizes that were counted.
    pub cliques: BTreeMap<usize, u64>,
    /// `S_k(n0)` indexed by `k`; orders beyond the end are zero.
    pub stars: Vec<u128>,
    /// `F_k(n0)` indexed by degree.
    pub degree_counts: Vec<u64>,
    /// Degrees of the initial vertices, indexed by vertex id.
    pub tracked_degrees: Vec<usize>,
    pub pair_profiles: BTreeMap<usize, CliquePairProfile>,
}

impl LawParams {
    /// Measures the seed graph. Pair profiles are recorded automatically
    /// for clique sizes with at most [`AUTO_PAIR_LIMIT`] cliques; see
    /// [`LawParams::record_pair_profile`] for larger ones.
    pub fn from_graph(g: &Graph, p: f64) -> Result<Self> {
        check_probability(p)?;
        let hist = degree_histogram(g);
        let mut cliques = BTreeMap::new();
        let mut pair_profiles = BTreeMap::new();
        for k in 2..=DEFAULT_K_MAX {
            let c = count_cliques(g, k)?;
            cliques.insert(k, c);
            if c <= AUTO_PAIR_LIMIT {
                pair_profiles.insert(k, count_clique_pairs(g, k)?);
            }
        }
        let stars = (0..=hist.max_degree())
            .map(|k| count_stars(&hist, k))
            .collect();
        Ok(LawParams {
            p,
            n0: g.vertex_count(),
            cliques,
            stars,
            degree_counts: hist.counts,
            tracked_degrees: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
            pair_profiles,
        })
    }

    /// Enumerates clique pairs of size `k` in `g` (the seed this law was
    /// built from), subject to the default enumeration cap.
    pub fn record_pair_profile(&mut self, g: &Graph, k: usize) -> Result<()> {
        let profile = count_clique_pairs(g, k)?;
        self.pair_profiles.insert(k, profile);
        Ok(())
    }

    /// Same seed, different `p`.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(LawParams { p, ..self.clone() })
    }

    pub fn seed_cliques(&self, k: usize) -> Result<f64> {
        self.cliques
            .get(&k)
            .map(|&c| c as f64)
            .ok_or_else(|| Error::MissingSeedData(format!("C_{k}(n0) was not recorded")))
    }

    pub fn seed_stars(&self, k: usize) -> f64 {
        self.stars.get(k).map_or(0.0, |&s| s as f64)
    }

    pub fn pair_profile(&self, k: usize) -> Result<&CliquePairProfile> {
        self.pair_profiles
            .get(&k)
            .ok_or_else(|| Error::MissingSeedData(format!("no {k}-clique pair profile")))
    }

    /// Checks the seed records against each other.
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        let n: u64 = self.degree_counts.iter().sum();
        if n as usize != self.n0 || self.tracked_degrees.len() != self.n0 {
            return Err(Error::InvalidParameter(
                "seed records disagree on n0".into(),
            ));
        }
        if let Some(&c2) = self.cliques.get(&2) {
            if self.seed_stars(1) != 2.0 * c2 as f64 {
                return Err(Error::InvalidParameter("S_1(n0) != 2 C_2(n0)".into()));
            }
        }
        for (k, prof) in &self.pair_profiles {
            let c = prof.total_cliques;
            if prof.pair_total() != c * c.saturating_sub(1) / 2 || self.cliques.get(k) != Some(&c) {
                return Err(Error::InvalidParameter(format!(
                    "inconsistent {k}-clique pair profile"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if n < self.n0 {
            Err(Error::InvalidParameter(format!(
                "n = {n} below n0 = {}",
                self.n0
            )))
        } else {
            Ok(())
        }
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Binomial coefficient as a float; exact while the value fits in 53 bits.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
