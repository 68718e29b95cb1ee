//! Products of the form `∏_{k=n0}^{n-1} (k + a) / k` and their Gamma-function
//! asymptotics.
//!
//! Long products are evaluated as differences of log-Gamma values. The
//! difference `lnΓ(x + a) - lnΓ(x)` is formed directly from the Stirling
//! series of both terms so that no large log-Gamma values are subtracted;
//! small arguments are shifted upward with the functional equation first.

use crate::error::{Error, Result};

/// Products with at most this many factors are multiplied out directly.
pub const DIRECT_PRODUCT_MAX: usize = 64;

const STIRLING_MIN: f64 = 30.0;

// B_{2j} / (2j (2j - 1)) for j = 1..=6.
const STIRLING_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
];

fn stirling_tail_difference(x: f64, a: f64) -> f64 {
    let (y, z) = (x + a, x);
    let (y2, z2) = (1.0 / (y * y), 1.0 / (z * z));
    let (mut py, mut pz) = (1.0 / y, 1.0 / z);
    let mut acc = 0.0;
    for c in STIRLING_COEFFS {
        acc += c * (py - pz);
        py *= y2;
        pz *= z2;
    }
    acc
}

/// `lnΓ(x + a) - lnΓ(x)` for `x > 0` and `x + a > 0`.
pub fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    debug_assert!(
        x > 0.0 && x + a > 0.0,
        "ln_gamma_ratio({x}, {a}) outside domain"
    );
    if a == 0.0 {
        return 0.0;
    }
    // lnΓ(x+a) - lnΓ(x) = [lnΓ(x+1+a) - lnΓ(x+1)] - ln((x+a)/x)
    let mut x = x;
    let mut shift = 0.0;
    while x.min(x + a) < STIRLING_MIN {
        shift += (a / x).ln_1p();
        x += 1.0;
    }
    let main = (x - 0.5) * (a / x).ln_1p() + a * (x + a).ln() - a;
    main + stirling_tail_difference(x, a) - shift
}

fn check_domain(n0: usize, n: usize, a: f64) -> Result<()> {
    if n0 == 0 {
        return Err(Error::InvalidParameter(
            "product must start at n0 >= 1".into(),
        ));
    }
    if n < n0 {
        return Err(Error::InvalidParameter(format!("n = {n} below n0 = {n0}")));
    }
    if !(a > -(n0 as f64)) {
        return Err(Error::InvalidParameter(format!(
            "a = {a} must exceed -n0 = -{n0}"
        )));
    }
    Ok(())
}

/// `ln ∏_{k=n0}^{n-1} (k + a) / k`.
pub fn ln_gamma_ratio_product(n0: usize, n: usize, a: f64) -> Result<f64> {
    check_domain(n0, n, a)?;
    if n - n0 <= DIRECT_PRODUCT_MAX {
        return Ok((n0..n).map(|k| (a / k as f64).ln_1p()).sum());
    }
    Ok(ln_gamma_ratio(n as f64, a) - ln_gamma_ratio(n0 as f64, a))
}

/// `∏_{k=n0}^{n-1} (k + a) / k = Γ(n+a)Γ(n0) / (Γ(n)Γ(n0+a))`.
pub fn gamma_ratio_product(n0: usize, n: usize, a: f64) -> Result<f64> {
    check_domain(n0, n, a)?;
    if n - n0 <= DIRECT_PRODUCT_MAX {
        return Ok((n0..n).map(|k| (k as f64 + a) / k as f64).product());
    }
    Ok(ln_gamma_ratio_product(n0, n, a)?.exp())
}

/// Large-`n` equivalent `n^a Γ(n0) / Γ(n0 + a)` of [`gamma_ratio_product`].
pub fn gamma_asymptote(n0: usize, a: f64, n: usize) -> Result<f64> {
    check_domain(n0, n.max(n0), a)?;
    Ok((a * (n as f64).ln() - ln_gamma_ratio(n0 as f64, a)).exp())
}

/// `Γ(n0) / Γ(n0 + a)`.
pub fn gamma_ratio_limit(n0: usize, a: f64) -> Result<f64> {
    check_domain(n0, n0, a)?;
    Ok((-ln_gamma_ratio(n0 as f64, a)).exp())
}

/// Rising factorial `x (x+1) … (x+m-1)`.
pub fn rising_factorial(x: f64, m: usize) -> f64 {
    (0..m).map(|i| x + i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn zero_exponent_is_one() {
        for n in [3, 10, 100, 10_000] {
            assert_eq!(gamma_ratio_product(3, n, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_factor_example() {
        let v = gamma_ratio_product(3, 5, 1.0).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_difference_matches_independent_lgamma() {
        for &x in &[0.5, 1.0, 2.5, 7.0, 31.0, 250.0, 1.0e4] {
            for &a in &[-0.4, 0.25, 1.0, 2.7, 6.0] {
                let reference = ln_gamma(x + a) - ln_gamma(x);
                let got = ln_gamma_ratio(x, a);
                assert!(
                    // the reference loses about one ulp of lnΓ(x) itself
                    (got - reference).abs()
                        < 1e-12 * (1.0 + reference.abs()) + 4e-16 * ln_gamma(x).abs(),
                    "x={x} a={a}: {got} vs {reference}"
                );
            }
        }
    }

    #[test]
    fn long_product_matches_direct_multiplication() {
        for &a in &[0.36, 1.08, 2.0, 3.0 * 0.6 * 0.6, -1.5] {
            let n0 = 4;
            let n = 3000;
            let direct: f64 = (n0..n).map(|k| (k as f64 + a) / k as f64).product();
            let got = gamma_ratio_product(n0, n, a).unwrap();
            assert!(
                (got / direct - 1.0).abs() < 1e-12,
                "a={a}: {got} vs {direct}"
            );
        }
    }

    #[test]
    fn product_approaches_asymptote() {
        for &a in &[0.5, 1.0, 2.0, 3.0] {
            let prod = gamma_ratio_product(3, 1_000_000, a).unwrap();
            let asym = gamma_asymptote(3, a, 1_000_000).unwrap();
            assert!((prod / asym - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_ratio_product(3, 5, -3.0).is_err());
        assert!(gamma_ratio_product(3, 2, 1.0).is_err());
        assert!(gamma_ratio_product(0, 2, 1.0).is_err());
        assert!(gamma_ratio_product(3, 5, -2.5).is_ok());
    }

    #[test]
    fn rising() {
        assert_eq!(rising_factorial(2.0, 3), 24.0);
        assert_eq!(rising_factorial(5.0, 0), 1.0);
    }
}
