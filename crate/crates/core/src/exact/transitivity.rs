//! Expected transitivity `E[6 C_3(n)] / E[S_2(n)]` and its `n^{−2p(1−p)}` decay.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::cliques::expected_cliques;
use crate::exact::gamma::ln_gamma_ratio;
use crate::exact::stars::expected_stars;
use crate::exact::LawParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransitivityScaling {
    pub n: usize,
    pub ratio: f64,
    pub exponent: f64,
    /// `n^{2p(1−p)}` times the ratio.
    pub scaled: f64,
    /// Large-`n` limit of `scaled`.
    pub constant: f64,
}

pub fn transitivity_scaling(law: &LawParams, n: usize) -> Result<TransitivityScaling> {
    let p = law.p;
    if p <= 0.0 {
        return Err(Error::InvalidParameter(
            "transitivity scaling needs p > 0".into(),
        ));
    }
    let s2_seed = law.seed_stars(2);
    if s2_seed == 0.0 {
        return Err(Error::MissingSeedData("seed graph has no 2-stars".into()));
    }
    let ratio = 6.0 * expected_cliques(law, 3, n)? / expected_stars(law, 2, n)?;
    let exponent = 2.0 * p * (1.0 - p);
    let n0 = law.n0 as f64;
    let q2 = s2_seed + 2.0 * law.seed_stars(1) / p;
    let gamma_part = (ln_gamma_ratio(n0, 2.0 * p + p * p) - ln_gamma_ratio(n0, 3.0 * p * p)).exp();
    Ok(TransitivityScaling {
        n,
        ratio,
        exponent,
        scaled: ratio * (n as f64).powf(exponent),
        constant: 6.0 * law.seed_cliques(3)? / q2 * gamma_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_seed, SeedSpec};

    fn law(spec: SeedSpec, p: f64) -> LawParams {
        LawParams::from_graph(&build_seed(&spec, false).unwrap(), p).unwrap()
    }

    #[test]
    fn triangle_free_seed_gives_zero() {
        let l = law(SeedSpec::Cycle(5), 0.6);
        for n in [5, 100, 10_000] {
            assert_eq!(transitivity_scaling(&l, n).unwrap().ratio, 0.0);
        }
    }

    #[test]
    fn complete_seed_starts_at_one() {
        let t = transitivity_scaling(&law(SeedSpec::Complete(3), 0.5), 3).unwrap();
        assert!((t.ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_vanishes_at_p_one() {
        let l = law(SeedSpec::Complete(4), 1.0);
        let t = transitivity_scaling(&l, 100_000).unwrap();
        assert_eq!(t.exponent, 0.0);
        assert!((t.scaled / t.constant - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(transitivity_scaling(&law(SeedSpec::Complete(3), 0.0), 10).is_err());
        assert!(transitivity_scaling(&law(SeedSpec::Path(2), 0.5), 10).is_err());
    }
}
