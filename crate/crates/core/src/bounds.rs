//! Size and rate bounds for codes in the Grassmannian, in exact arithmetic.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> BoundsError {
    BoundsError::Invalid(msg.into())
}

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of `ℓ`-dimensional subspaces of `F_q^n`; zero when `ℓ > n`.
pub fn gaussian_coeff(n: u64, ell: u64, q: u64) -> BigUint {
    if ell > n {
        return BigUint::zero();
    }
    let ell = ell.min(n - ell);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..ell {
        num *= pow(q, n - i) - 1u32;
        den *= pow(q, i + 1) - 1u32;
    }
    num / den
}

/// Checked hybrid parameters `[n, ℓ, ·, 2D, d]_q`.
fn check(n: u64, ell: u64, big_d: u64, d: u64, q: u64) -> Result<(), BoundsError> {
    if q < 2 {
        return Err(invalid("q must be at least 2"));
    }
    if ell == 0 || ell > n {
        return Err(invalid(format!("need 1 <= l <= n, got l={ell}, n={n}")));
    }
    if big_d == 0 || big_d > ell {
        return Err(invalid(format!("need 1 <= D <= l, got D={big_d}")));
    }
    if d == 0 || d > n {
        return Err(invalid(format!("need 1 <= d <= n, got d={d}")));
    }
    if n + 2 < d + big_d {
        return Err(invalid("n - d - D + 2 is negative"));
    }
    Ok(())
}

/// `min{ [n−d−D+2, ℓ−D+1]_q, [n−d−D+2, ℓ]_q }`.
pub fn singleton_bound(n: u64, ell: u64, big_d: u64, d: u64, q: u64) -> Result<BigUint, BoundsError> {
    check(n, ell, big_d, d, q)?;
    let top = n + 2 - d - big_d;
    let a = gaussian_coeff(top, ell + 1 - big_d, q);
    let b = gaussian_coeff(top, ell, q);
    Ok(a.min(b))
}

/// Number of `ℓ`-subspaces within Grassmann distance `T` of a fixed one:
/// `Σ_{i ≤ T/2} q^{i²} [ℓ, i]_q [n−ℓ, i]_q`.
pub fn sphere_size_t0(n: u64, ell: u64, big_t: u64, q: u64) -> Result<BigUint, BoundsError> {
    if ell > n || big_t > 2 * ell {
        return Err(invalid(format!("need l <= n and T <= 2l, got n={n}, l={ell}, T={big_t}")));
    }
    Ok(sphere_sum(n, ell, big_t, q))
}

fn sphere_sum(n: u64, ell: u64, big_t: u64, q: u64) -> BigUint {
    (0..=big_t / 2)
        .map(|i| pow(q, i * i) * gaussian_coeff(ell, i, q) * gaussian_coeff(n - ell, i, q))
        .sum()
}

/// Lower bound on the `(T, t)`-adjacency sphere:
/// `q^{ℓt} Σ_{i ≤ T/2} q^{i²} [ℓ, i]_q [n−t−ℓ, i]_q`.
pub fn sphere_size_lower(n: u64, ell: u64, big_t: u64, t: u64, q: u64) -> Result<BigUint, BoundsError> {
    if t >= n || ell + t > n || big_t > 2 * ell {
        return Err(invalid(format!("need l + t <= n, t < n and T <= 2l, got n={n}, l={ell}, T={big_t}, t={t}")));
    }
    Ok(pow(q, ell * t) * sphere_sum(n - t, ell, big_t, q))
}

/// `⌊[n, ℓ]_q / lower(n, ℓ, D−1, d−1)⌋`.
pub fn sphere_packing_bound(n: u64, ell: u64, big_d: u64, d: u64, q: u64) -> Result<BigUint, BoundsError> {
    check(n, ell, big_d, d, q)?;
    let sphere = sphere_size_lower(n, ell, big_d - 1, d - 1, q)?;
    Ok(gaussian_coeff(n, ell, q) / sphere)
}

/// `log_q |L| = (n−ℓ−d+1)(ℓ−D+1)` for the lifted construction with a KK inner code.
pub fn construction_log_size(n: u64, ell: u64, big_d: u64, d: u64) -> Result<u64, BoundsError> {
    if n + 1 < ell + d || ell + 1 < big_d {
        return Err(invalid("construction parameters out of range"));
    }
    Ok((n + 1 - ell - d) * (ell + 1 - big_d))
}

/// Normalized parameters `λ = ℓ/n`, `Δ = D/ℓ`, `δ = d/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub lambda: f64,
    pub cap_delta: f64,
    pub delta: f64,
}

impl AsymptoticParams {
    pub fn from_code(n: u64, ell: u64, big_d: u64, d: u64) -> Result<Self, BoundsError> {
        if n == 0 || ell == 0 {
            return Err(invalid("n and l must be positive"));
        }
        let p = AsymptoticParams {
            lambda: ell as f64 / n as f64,
            cap_delta: big_d as f64 / ell as f64,
            delta: d as f64 / n as f64,
        };
        for v in [p.lambda, p.cap_delta, p.delta] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid("normalized parameters must lie in [0, 1]"));
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRates {
    pub singleton_rate: f64,
    pub sphere_packing_rate: f64,
}

/// Right-hand sides of the two rate bounds without their vanishing terms.
pub fn asymptotic_rates(p: AsymptoticParams, n: u64, ell: u64) -> AsymptoticRates {
    let (n, ell) = (n as f64, ell as f64);
    let AsymptoticParams { lambda, cap_delta, delta } = p;
    let base = 1.0 - delta - lambda + 1.0 / n;
    AsymptoticRates {
        singleton_rate: (1.0 - cap_delta + 1.0 / ell) * base,
        sphere_packing_rate: base
            - (cap_delta / 2.0 - 1.0 / (2.0 * ell)) * (1.0 - delta - lambda * cap_delta / 2.0 + 3.0 / (2.0 * n)),
    }
}

/// Exact finite-length rate `log_q M / (nℓ)` of the construction.
pub fn construction_rate(n: u64, ell: u64, big_d: u64, d: u64) -> Result<f64, BoundsError> {
    Ok(construction_log_size(n, ell, big_d, d)? as f64 / (n * ell) as f64)
}

/// `(ℓ − s + x)(n − ℓ − x)` with `x = d − 1`, `s = D̃ − 1`: the log-size to maximize.
pub fn allocation_objective(n: i64, ell: i64, d_tilde: i64, d: i64) -> i64 {
    let (s, x) = (d_tilde - 1, d - 1);
    (ell - s + x) * (n - ell - x)
}

/// Best split of a total erasure budget `D̃ − 1 = (D−1) + (d−1)` towards `d`.
///
/// The real maximizer `(n + D̃ + 1)/2 − ℓ` is clamped to `[1, D̃]`; the
/// objective is compared at its floor and ceiling and ties go to the smaller `d`.
pub fn optimal_d(n: u64, ell: u64, d_tilde: u64) -> Result<u64, BoundsError> {
    if d_tilde == 0 {
        return Err(invalid("budget D~ must be at least 1"));
    }
    if ell == 0 || ell >= n {
        return Err(invalid(format!("need 0 < l < n, got l={ell}, n={n}")));
    }
    let (n, ell, dt) = (n as i64, ell as i64, d_tilde as i64);
    // twice the real maximizer, kept integral
    let twice = (n + dt + 1 - 2 * ell).clamp(2, 2 * dt);
    let lo = twice.div_euclid(2);
    let hi = lo + twice.rem_euclid(2);
    let f = |d| allocation_objective(n, ell, dt, d);
    Ok(if f(hi) > f(lo) { hi as u64 } else { lo as u64 })
}

/// `c = (n − ℓ)/ℓ`: erasures per dimension loss at equal code size.
pub fn erasure_equivalence_constant(n: u64, ell: u64) -> Result<Ratio<i64>, BoundsError> {
    if ell == 0 || ell >= n {
        return Err(invalid(format!("need 0 < l < n, got l={ell}, n={n}")));
    }
    Ok(Ratio::new((n - ell) as i64, ell as i64))
}

/// `(n − 2ℓ + D − 1)(d − 1)`, the log-size advantage of the hybrid construction.
pub fn comparison_margin_value(n: u64, ell: u64, big_d: u64, d: u64) -> i64 {
    (n as i64 - 2 * ell as i64 + big_d as i64 - 1) * (d as i64 - 1)
}

/// True when the margin strictly exceeds `eps`.
pub fn comparison_margin(n: u64, ell: u64, big_d: u64, d: u64, eps: f64) -> bool {
    comparison_margin_value(n, ell, big_d, d) as f64 > eps
}

/// `q^{-ℓ(n−ℓ)} [n, ℓ]_q` as an exact rational.
pub fn gaussian_ratio(n: u64, ell: u64, q: u64) -> Ratio<BigUint> {
    Ratio::new(gaussian_coeff(n, ell, q), pow(q, ell * (n - ell)))
}

/// `1 < q^{-ℓ(n−ℓ)} [n, ℓ]_q < 4`, compared exactly.
pub fn gaussian_sandwich_holds(n: u64, ell: u64, q: u64) -> bool {
    let g = gaussian_coeff(n, ell, q);
    let p = pow(q, ell * (n - ell));
    p < g && g < p * 4u32
}

/// Logarithm base `q` of a big integer, for reporting.
pub fn log_q(x: &BigUint, q: u64) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_f64().unwrap_or(f64::MAX);
    (top.ln() + shift as f64 * std::f64::consts::LN_2) / (q as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_examples() {
        for q in [2u64, 3, 5, 7] {
            assert_eq!(gaussian_coeff(6, 0, q), BigUint::one());
            assert_eq!(gaussian_coeff(6, 6, q), BigUint::one());
            assert_eq!(gaussian_coeff(4, 3, q), BigUint::from((q.pow(4) - 1) / (q - 1)));
        }
        assert_eq!(gaussian_coeff(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_coeff(3, 4, 2), BigUint::zero());
    }

    #[test]
    fn gaussian_pascal_identity() {
        // [n, k] = [n−1, k−1] + q^k [n−1, k]
        for q in [2u64, 3, 4] {
            for n in 1..10u64 {
                for k in 1..n {
                    let lhs = gaussian_coeff(n, k, q);
                    let rhs = gaussian_coeff(n - 1, k - 1, q) + pow(q, k) * gaussian_coeff(n - 1, k, q);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_bound(7, 3, 1, 1, 2).unwrap(), gaussian_coeff(7, 3, 2));
        assert_eq!(singleton_bound(6, 3, 1, 3, 5).unwrap(), BigUint::from(156u32));
        assert!(singleton_bound(6, 3, 4, 1, 5).is_err());
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_size_t0(4, 2, 0, 2).unwrap(), BigUint::one());
        assert_eq!(sphere_size_t0(4, 2, 2, 2).unwrap(), BigUint::from(19u32));
        assert_eq!(sphere_size_t0(4, 2, 4, 2).unwrap(), BigUint::from(35u32));
        for t in 0..=6 {
            assert_eq!(sphere_size_lower(8, 3, t, 0, 3).unwrap(), sphere_size_t0(8, 3, t, 3).unwrap());
        }
        assert_eq!(sphere_size_lower(5, 2, 2, 1, 2).unwrap(), BigUint::from(76u32));
        // T = 0 leaves only the free entries: q^{ℓt}
        assert_eq!(sphere_size_lower(9, 3, 0, 4, 2).unwrap(), pow(2, 12));
    }

    #[test]
    fn packing_monotone() {
        assert_eq!(sphere_packing_bound(8, 3, 1, 1, 2).unwrap(), gaussian_coeff(8, 3, 2));
        for d in 1..4 {
            for big_d in 1..4 {
                let b = sphere_packing_bound(9, 3, big_d, d, 2).unwrap();
                if big_d < 3 {
                    assert!(sphere_packing_bound(9, 3, big_d + 1, d, 2).unwrap() <= b);
                }
                assert!(sphere_packing_bound(9, 3, big_d, d + 1, 2).unwrap() <= b);
            }
        }
    }

    #[test]
    fn optimal_d_examples() {
        assert_eq!(optimal_d(20, 3, 5).unwrap(), 5);
        assert_eq!(optimal_d(10, 3, 1).unwrap(), 1);
        assert!(optimal_d(10, 3, 0).is_err());
    }

    #[test]
    fn equivalence_constant() {
        assert_eq!(erasure_equivalence_constant(8, 4).unwrap(), Ratio::from_integer(1));
        assert_eq!(erasure_equivalence_constant(12, 4).unwrap(), Ratio::from_integer(2));
        for (n, ell) in [(12i64, 4i64), (9, 2), (15, 7)] {
            let c = erasure_equivalence_constant(n as u64, ell as u64).unwrap();
            for d in 1..n - ell {
                let lhs = (Ratio::from_integer(ell) - Ratio::from_integer(d - 1) / c) * (n - ell);
                let rhs = Ratio::from_integer(ell * (n - ell - (d - 1)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn margin_examples() {
        assert!(comparison_margin(10, 4, 2, 2, 0.1));
        assert!(!comparison_margin(8, 4, 1, 3, 0.1));
        let m = gaussian_coeff(10, 4, 11);
        assert!(m > pow(11, 16) * 4u32);
        assert!(m > pow(11, 24));
    }

    #[test]
    fn rates_limits() {
        let p = AsymptoticParams { lambda: 0.25, cap_delta: 0.0, delta: 0.0 };
        let r = asymptotic_rates(p, 100, 25);
        assert!((r.singleton_rate - (1.0 + 1.0 / 25.0) * (0.75 + 0.01)).abs() < 1e-12);
        let p = AsymptoticParams::from_code(12, 4, 1, 1).unwrap();
        let r = asymptotic_rates(p, 12, 4);
        // D = d = 1: the singleton rate reduces to log_q [n, ℓ] / (nℓ) without the constant
        assert!((r.singleton_rate - (12.0 - 4.0) / 12.0).abs() < 1e-12);
    }

    #[test]
    fn log_q_of_large_values() {
        let x = pow(11, 40);
        assert!((log_q(&x, 11) - 40.0).abs() < 1e-9);
    }
}
