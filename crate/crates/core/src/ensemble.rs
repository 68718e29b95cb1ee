//! Monte Carlo ensembles of the discrete-time process and their comparison
//! with the exact laws.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::exact::{
    clique_exponent, degree_scaled_moment, expected_clique_second_moment, expected_cliques,
    expected_degree_profile_path, expected_stars, expected_tracked_degree, gamma_ratio_product,
    LawParams,
};
use crate::graph::{grow_to, Graph, ModelParams};
use crate::observables::{
    count_cliques, count_stars, degree_histogram, transitivity, DegreeHistogram, DEFAULT_K_MAX,
};
use crate::output::format_real;
use crate::rng::{replicate_rng, Purpose};
use crate::stats::{fold_replicates, StreamingStat};

pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

/// A scalar recorded at every checkpoint of every replicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    /// `C_k(n)`.
    Cliques(usize),
    /// `C_k(n)^2`.
    CliquesSquared(usize),
    /// `n^{−k p^{k−1}} C_k(n)`.
    ScaledCliques(usize),
    /// `S_k(n)`.
    Stars(usize),
    /// `F_k(n)`.
    DegreeCount(usize),
    /// `F_0(n) / n`.
    IsolatedFraction,
    /// Degree of initial vertex `v`.
    TrackedDegree(usize),
    /// `n^{−p}` times the degree of initial vertex `v`.
    ScaledTrackedDegree(usize),
    /// `6 C_3 / S_2`; replicates where it is undefined are skipped.
    Transitivity,
}

impl Observable {
    pub fn kind(&self) -> &'static str {
        match self {
            Observable::Cliques(_) => "cliques",
            Observable::CliquesSquared(_) => "cliques_squared",
            Observable::ScaledCliques(_) => "scaled_cliques",
            Observable::Stars(_) => "stars",
            Observable::DegreeCount(_) => "degree_count",
            Observable::IsolatedFraction => "isolated_fraction",
            Observable::TrackedDegree(_) => "tracked_degree",
            Observable::ScaledTrackedDegree(_) => "scaled_tracked_degree",
            Observable::Transitivity => "transitivity",
        }
    }

    /// Clique size, star order, degree or vertex id, when the observable has one.
    pub fn index(&self) -> Option<usize> {
        match *self {
            Observable::Cliques(k)
            | Observable::CliquesSquared(k)
            | Observable::ScaledCliques(k)
            | Observable::Stars(k)
            | Observable::DegreeCount(k)
            | Observable::TrackedDegree(k)
            | Observable::ScaledTrackedDegree(k) => Some(k),
            Observable::IsolatedFraction | Observable::Transitivity => None,
        }
    }

    fn check(&self, n0: usize) -> Result<()> {
        match *self {
            Observable::Cliques(k)
            | Observable::CliquesSquared(k)
            | Observable::ScaledCliques(k)
                if !(2..=DEFAULT_K_MAX).contains(&k) =>
            {
                Err(Error::CliqueSize {
                    k,
                    k_max: DEFAULT_K_MAX,
                })
            }
            Observable::Stars(0) => Err(Error::InvalidParameter(
                "star order must be at least 1".into(),
            )),
            Observable::TrackedDegree(v) | Observable::ScaledTrackedDegree(v) if v >= n0 => {
                Err(Error::VertexOutOfRange { id: v, n: n0 })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Observable::Cliques(k) => write!(f, "c{k}"),
            Observable::CliquesSquared(k) => write!(f, "c{k}sq"),
            Observable::ScaledCliques(k) => write!(f, "m{k}"),
            Observable::Stars(k) => write!(f, "s{k}"),
            Observable::DegreeCount(k) => write!(f, "f{k}"),
            Observable::IsolatedFraction => write!(f, "iso"),
            Observable::TrackedDegree(v) => write!(f, "d{v}"),
            Observable::ScaledTrackedDegree(v) => write!(f, "ds{v}"),
            Observable::Transitivity => write!(f, "tr"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// Short ids: `c3`, `c3sq`, `m3`, `s2`, `f0`, `iso`, `d0`, `ds0`, `tr`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidParameter(format!("unknown observable `{s}`"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s.as_str() {
            "iso" => return Ok(Observable::IsolatedFraction),
            "tr" => return Ok(Observable::Transitivity),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("ds") {
            return Ok(Observable::ScaledTrackedDegree(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix('c') {
            return match rest.strip_suffix("sq") {
                Some(k) => Ok(Observable::CliquesSquared(num(k)?)),
                None => Ok(Observable::Cliques(num(rest)?)),
            };
        }
        let (head, rest) = s.split_at(1.min(s.len()));
        let k = num(rest)?;
        match head {
            "m" => Ok(Observable::ScaledCliques(k)),
            "s" => Ok(Observable::Stars(k)),
            "f" => Ok(Observable::DegreeCount(k)),
            "d" => Ok(Observable::TrackedDegree(k)),
            _ => Err(bad()),
        }
    }
}

/// Evaluates observables on one graph, counting each clique size once.
struct Evaluator<'a> {
    g: &'a Graph,
    p: f64,
    hist: DegreeHistogram,
    cliques: BTreeMap<usize, u64>,
}

impl<'a> Evaluator<'a> {
    fn new(g: &'a Graph, p: f64) -> Self {
        Evaluator {
            g,
            p,
            hist: degree_histogram(g),
            cliques: BTreeMap::new(),
        }
    }

    fn cliques(&mut self, k: usize) -> f64 {
        let g = self.g;
        *self
            .cliques
            .entry(k)
            .or_insert_with(|| count_cliques(g, k).expect("clique size validated")) as f64
    }

    fn value(&mut self, obs: Observable) -> Option<f64> {
        let n = self.g.vertex_count() as f64;
        Some(match obs {
            Observable::Cliques(k) => self.cliques(k),
            Observable::CliquesSquared(k) => self.cliques(k).powi(2),
            Observable::ScaledCliques(k) => self.cliques(k) * n.powf(-clique_exponent(k, self.p)),
            Observable::Stars(k) => count_stars(&self.hist, k) as f64,
            Observable::DegreeCount(k) => self.hist.count(k) as f64,
            Observable::IsolatedFraction => self.hist.fraction(0),
            Observable::TrackedDegree(v) => self.g.degree(v) as f64,
            Observable::ScaledTrackedDegree(v) => self.g.degree(v) as f64 * n.powf(-self.p),
            Observable::Transitivity => return transitivity(self.g),
        })
    }
}

/// Per-checkpoint statistics of every observable over all replicates.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSummary {
    pub p: f64,
    pub n0: usize,
    pub replicates: u64,
    pub checkpoints: Vec<usize>,
    pub observables: Vec<Observable>,
    /// `stats[c][o]` for checkpoint `c` and observable `o`.
    pub stats: Vec<Vec<StreamingStat>>,
}

impl EnsembleSummary {
    pub fn stat(&self, obs: Observable, n: usize) -> Option<&StreamingStat> {
        let c = self.checkpoints.iter().position(|&m| m == n)?;
        let o = self.observables.iter().position(|&x| x == obs)?;
        Some(&self.stats[c][o])
    }
}

/// Grows `params.replicate_count` independent graphs from the seed and
/// accumulates the observables at each checkpoint. Replicate `r` draws from
/// its own stream, so the result does not depend on the worker count.
pub fn run_ensemble(params: &ModelParams, observables: &[Observable]) -> Result<EnsembleSummary> {
    params.validate()?;
    if params.checkpoints.is_empty() {
        return Err(Error::InvalidParameter("no checkpoints to observe".into()));
    }
    let n0 = params.n0();
    for obs in observables {
        obs.check(n0)?;
    }
    let seed = params.build_seed()?;
    let width = observables.len();
    let depth = params.checkpoints.len();
    let stats = fold_replicates(
        params.replicate_count as u64,
        || vec![vec![StreamingStat::new(); width]; depth],
        |acc, r| {
            let mut rng = replicate_rng(params.master_seed, Purpose::Growth, r);
            let mut g = seed.clone();
            let mut c = 0;
            grow_to(&mut g, params, &mut rng, |g| {
                let mut eval = Evaluator::new(g, params.p);
                for (o, &obs) in observables.iter().enumerate() {
                    if let Some(v) = eval.value(obs) {
                        acc[c][o].push(v);
                    }
                }
                c += 1;
            })
            .expect("parameters validated");
        },
        |total, part| {
            for (row, prow) in total.iter_mut().zip(&part) {
                for (s, ps) in row.iter_mut().zip(prow) {
                    s.merge(ps);
                }
            }
        },
    );
    Ok(EnsembleSummary {
        p: params.p,
        n0,
        replicates: params.replicate_count as u64,
        checkpoints: params.checkpoints.clone(),
        observables: observables.to_vec(),
        stats,
    })
}

/// Histogram over replicates of the degree of initial vertex `vertex` at
/// size `params.n_target`.
pub fn tracked_degree_histogram(params: &ModelParams, vertex: usize) -> Result<DegreeHistogram> {
    params.validate()?;
    Observable::TrackedDegree(vertex).check(params.n0())?;
    let seed = params.build_seed()?;
    let mut final_only = params.clone();
    final_only.checkpoints.clear();
    let counts = fold_replicates(
        params.replicate_count as u64,
        Vec::<u64>::new,
        |acc, r| {
            let mut rng = replicate_rng(params.master_seed, Purpose::Growth, r);
            let mut g = seed.clone();
            grow_to(&mut g, &final_only, &mut rng, |_| {}).expect("parameters validated");
            let d = g.degree(vertex);
            if acc.len() <= d {
                acc.resize(d + 1, 0);
            }
            acc[d] += 1;
        },
        |total, part| {
            if total.len() < part.len() {
                total.resize(part.len(), 0);
            }
            for (t, p) in total.iter_mut().zip(&part) {
                *t += p;
            }
        },
    );
    Ok(DegreeHistogram {
        counts,
        n: params.replicate_count,
    })
}

/// Exact expectations of ensemble observables at the requested sizes.
/// Observables without a closed form (transitivity) map to `None`.
pub fn oracle_values(
    law: &LawParams,
    observables: &[Observable],
    sizes: &[usize],
) -> Result<Vec<Vec<Option<f64>>>> {
    let needs_profile = observables
        .iter()
        .any(|o| matches!(o, Observable::DegreeCount(_) | Observable::IsolatedFraction));
    let mut profiles: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    if needs_profile {
        if let Some(&top) = sizes.iter().max() {
            expected_degree_profile_path(law, top, |m, f| {
                if sizes.contains(&m) {
                    profiles.insert(m, f.to_vec());
                }
            })?;
        }
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut row = Vec::with_capacity(observables.len());
        for &obs in observables {
            let nf = n as f64;
            let value = match obs {
                Observable::Cliques(k) => Some(expected_cliques(law, k, n)?),
                Observable::CliquesSquared(k) => {
                    Some(expected_clique_second_moment(law, k, n)?.second_moment)
                }
                Observable::ScaledCliques(k) => {
                    Some(expected_cliques(law, k, n)? * nf.powf(-clique_exponent(k, law.p)))
                }
                Observable::Stars(k) => Some(expected_stars(law, k, n)?),
                Observable::DegreeCount(k) => Some(profiles[&n].get(k).copied().unwrap_or(0.0)),
                Observable::IsolatedFraction => Some(profiles[&n][0] / nf),
                Observable::TrackedDegree(v) => match law.tracked_degrees[v] {
                    0 => None,
                    a => Some(expected_tracked_degree(law.n0, a, law.p, n)?),
                },
                Observable::ScaledTrackedDegree(v) => match law.tracked_degrees[v] {
                    0 => None,
                    a => Some(degree_scaled_moment(law.n0, a, law.p, 1, n)?),
                },
                Observable::Transitivity => None,
            };
            row.push(value);
        }
        out.push(row);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Fewer than two samples, so no standard error.
    Undetermined,
    /// No exact value to compare with.
    NoOracle,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "true",
            Verdict::Fail => "false",
            Verdict::Undetermined => "undetermined",
            Verdict::NoOracle => "",
        }
    }
}

/// One Monte Carlo mean compared against its exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub observable: String,
    pub k: Option<usize>,
    pub n: usize,
    pub count: u64,
    pub mean: f64,
    pub se: Option<f64>,
    pub oracle: Option<f64>,
    pub z: Option<f64>,
    pub pass: Verdict,
}

impl ComparisonReport {
    /// Judges `stat` against `oracle`: `|z| ≤ threshold` passes. A zero
    /// standard error passes only if the mean equals the oracle up to
    /// rounding.
    pub fn judge(
        observable: impl Into<String>,
        k: Option<usize>,
        n: usize,
        stat: &StreamingStat,
        oracle: Option<f64>,
        threshold: f64,
    ) -> Self {
        let se = stat.se();
        let (z, pass) = match (oracle, se) {
            (None, _) => (None, Verdict::NoOracle),
            (Some(_), None) => (None, Verdict::Undetermined),
            (Some(o), Some(se)) => {
                let diff = stat.mean - o;
                let z = if se > 0.0 {
                    diff / se
                } else if diff.abs() <= 1e-9 * o.abs().max(1.0) {
                    0.0
                } else {
                    diff.signum() * f64::INFINITY
                };
                (
                    Some(z),
                    if z.abs() <= threshold {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    },
                )
            }
        };
        ComparisonReport {
            observable: observable.into(),
            k,
            n,
            count: stat.count,
            mean: stat.mean,
            se,
            oracle,
            z,
            pass,
        }
    }
}

/// All comparisons of one run plus a note on the family-wise error rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonSuite {
    pub z_threshold: f64,
    pub rows: Vec<ComparisonReport>,
    pub note: String,
}

impl ComparisonSuite {
    pub fn new(rows: Vec<ComparisonReport>, z_threshold: f64) -> Self {
        let judged = rows
            .iter()
            .filter(|r| matches!(r.pass, Verdict::Pass | Verdict::Fail))
            .count();
        let per_test = erfc(z_threshold / std::f64::consts::SQRT_2);
        let note = format!(
            "{judged} comparisons at |z| <= {z_threshold}; under a normal approximation the chance of any false \
             alarm is at most {:.3e} (Bonferroni). Expectation identities are tested; almost-sure limits are not.",
            (judged as f64 * per_test).min(1.0)
        );
        ComparisonSuite {
            z_threshold,
            rows,
            note,
        }
    }

    pub fn any_failure(&self) -> bool {
        self.rows.iter().any(|r| r.pass == Verdict::Fail)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "observable",
            "k",
            "n",
            "count",
            "mean",
            "se",
            "oracle",
            "z",
            "pass",
        ])?;
        let opt = |x: Option<f64>| x.map(format_real).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.observable.clone(),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                r.n.to_string(),
                r.count.to_string(),
                format_real(r.mean),
                opt(r.se),
                opt(r.oracle),
                opt(r.z),
                r.pass.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Compares every (checkpoint, observable) mean with its exact expectation.
pub fn compare(
    summary: &EnsembleSummary,
    law: &LawParams,
    z_threshold: f64,
) -> Result<ComparisonSuite> {
    let oracles = oracle_values(law, &summary.observables, &summary.checkpoints)?;
    let mut rows = Vec::new();
    for (c, &n) in summary.checkpoints.iter().enumerate() {
        for (o, obs) in summary.observables.iter().enumerate() {
            rows.push(ComparisonReport::judge(
                obs.kind(),
                obs.index(),
                n,
                &summary.stats[c][o],
                oracles[c][o],
                z_threshold,
            ));
        }
    }
    Ok(ComparisonSuite::new(rows, z_threshold))
}

/// Per-checkpoint record of `n^{−k p^{k−1}} C_k(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MartingalePoint {
    pub n: usize,
    pub scaled: StreamingStat,
    /// `n^{k p^{k−1}} / ∏_{m=n0}^{n−1} (m + k p^{k−1})/m`; the scaled mean
    /// times this factor has expectation `C_k(n0)` at every `n`.
    pub correction: f64,
    pub report: ComparisonReport,
}

/// Tracks the scaled clique count along the checkpoints of `params` and
/// tests the constancy of its corrected expectation.
pub fn scaled_martingale_track(
    params: &ModelParams,
    k: usize,
    z_threshold: f64,
) -> Result<Vec<MartingalePoint>> {
    let summary = run_ensemble(params, &[Observable::ScaledCliques(k)])?;
    let seed = params.build_seed()?;
    let c0 = count_cliques(&seed, k)? as f64;
    let exponent = clique_exponent(k, params.p);
    let n0 = params.n0();
    summary
        .checkpoints
        .iter()
        .zip(&summary.stats)
        .map(|(&n, row)| {
            let scaled = row[0];
            let correction = (n as f64).powf(exponent) / gamma_ratio_product(n0, n, exponent)?;
            let corrected = StreamingStat {
                count: scaled.count,
                mean: scaled.mean * correction,
                m2: scaled.m2 * correction * correction,
                min: scaled.min * correction,
                max: scaled.max * correction,
            };
            let report = ComparisonReport::judge(
                "scaled_cliques",
                Some(k),
                n,
                &corrected,
                Some(c0),
                z_threshold,
            );
            Ok(MartingalePoint {
                n,
                scaled,
                correction,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SeedSpec;

    #[test]
    fn observable_ids_round_trip() {
        let all = [
            Observable::Cliques(3),
            Observable::CliquesSquared(4),
            Observable::ScaledCliques(2),
            Observable::Stars(2),
            Observable::DegreeCount(0),
            Observable::IsolatedFraction,
            Observable::TrackedDegree(1),
            Observable::ScaledTrackedDegree(2),
            Observable::Transitivity,
        ];
        for o in all {
            assert_eq!(o.to_string().parse::<Observable>().unwrap(), o);
        }
        assert!("x3".parse::<Observable>().is_err());
        assert!("c".parse::<Observable>().is_err());
    }

    #[test]
    fn judge_rules() {
        let same = StreamingStat::from_values([2.0, 2.0, 2.0]);
        assert_eq!(
            ComparisonReport::judge("c", None, 1, &same, Some(2.0), 4.0).pass,
            Verdict::Pass
        );
        assert_eq!(
            ComparisonReport::judge("c", None, 1, &same, Some(2.5), 4.0).pass,
            Verdict::Fail
        );
        let one = StreamingStat::from_values([2.0]);
        assert_eq!(
            ComparisonReport::judge("c", None, 1, &one, Some(2.0), 4.0).pass,
            Verdict::Undetermined
        );
        let spread = StreamingStat::from_values([1.0, 3.0, 1.0, 3.0]);
        let se = spread.se().unwrap();
        let off = ComparisonReport::judge("c", None, 1, &spread, Some(2.0 + 10.0 * se), 4.0);
        assert_eq!(off.pass, Verdict::Fail);
        assert!((off.z.unwrap() + 10.0).abs() < 1e-12);
        let exact = ComparisonReport::judge("c", None, 1, &spread, Some(2.0), 4.0);
        assert_eq!((exact.z, exact.pass), (Some(0.0), Verdict::Pass));
    }

    #[test]
    fn p_zero_ensemble_has_no_spread() {
        let mut params = ModelParams::new(0.0, SeedSpec::Complete(3), 40);
        params.replicate_count = 20;
        let summary = run_ensemble(
            &params,
            &[Observable::Cliques(2), Observable::IsolatedFraction],
        )
        .unwrap();
        for row in &summary.stats {
            for s in row {
                assert_eq!(s.variance(), Some(0.0));
            }
        }
        let law = LawParams::from_graph(&params.build_seed().unwrap(), 0.0).unwrap();
        let suite = compare(&summary, &law, DEFAULT_Z_THRESHOLD).unwrap();
        assert!(suite.rows.iter().all(|r| r.pass == Verdict::Pass));
    }

    #[test]
    fn invalid_observables_rejected() {
        let params = ModelParams::new(0.5, SeedSpec::Complete(3), 10);
        assert!(run_ensemble(&params, &[Observable::Cliques(9)]).is_err());
        assert!(run_ensemble(&params, &[Observable::TrackedDegree(3)]).is_err());
    }

    #[test]
    fn csv_has_expected_header() {
        let stat = StreamingStat::from_values([4.0, 6.0]);
        let suite = ComparisonSuite::new(
            vec![ComparisonReport::judge(
                "cliques",
                Some(2),
                5,
                &stat,
                Some(5.0),
                4.0,
            )],
            4.0,
        );
        let mut buf = Vec::new();
        suite.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "observable,k,n,count,mean,se,oracle,z,pass"
        );
        assert!(lines
            .next()
            .unwrap()
            .starts_with("cliques,2,5,2,5.0000000000000000e0,"));
    }
}
