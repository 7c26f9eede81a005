use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::GaugeError;

/// Overall sign convention of the kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreensSign {
    /// Fundamental solution of `−∇²G = δ` (positive for N ≥ 3).
    #[default]
    Standard,
    /// The same kernel with the opposite sign.
    Negated,
}

impl GreensSign {
    pub fn factor(self) -> f64 {
        match self {
            Self::Standard => 1.0,
            Self::Negated => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreensSpec {
    pub n: usize,
    #[serde(default)]
    pub sign: GreensSign,
}

impl GreensSpec {
    pub fn new(n: usize) -> Result<Self, GaugeError> {
        if n == 0 {
            return Err(GaugeError::ZeroDimension);
        }
        Ok(Self {
            n,
            sign: GreensSign::Standard,
        })
    }

    pub fn negated(self) -> Self {
        Self {
            sign: GreensSign::Negated,
            ..self
        }
    }
}

/// `Γ(N/2) / π^{N/2}`, built by the recurrence `Γ(x+1) = xΓ(x)` from
/// `Γ(1/2) = √π` or `Γ(1) = 1` so it stays finite for large `N`.
fn gamma_over_pi_power(n: usize) -> f64 {
    let (mut x, mut value) = if n % 2 == 0 { (1.0, 1.0 / PI) } else { (0.5, 1.0) };
    while 2.0 * x < n as f64 {
        value *= x / PI;
        x += 1.0;
    }
    value
}

/// Laplacian Green's function at distance `r`.
///
/// - N ≥ 3: `Γ(N/2) / (2(N−2) π^{N/2} r^{N−2})`
/// - N = 2: `−ln(r) / (2π)`
/// - N = 1: `−r / 2`
///
/// [`GreensSign::Negated`] flips every branch.
pub fn greens_function(spec: &GreensSpec, r: f64) -> Result<f64, GaugeError> {
    if spec.n == 0 {
        return Err(GaugeError::ZeroDimension);
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(GaugeError::NonPositiveRadius(r));
    }
    Ok(spec.sign.factor() * standard(spec.n, r))
}

pub(crate) fn standard(n: usize, r: f64) -> f64 {
    match n {
        1 => -0.5 * r,
        2 => -r.ln() / (2.0 * PI),
        _ => gamma_over_pi_power(n) / (2.0 * (n as f64 - 2.0) * r.powi(n as i32 - 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_ratio_small_cases() {
        // Γ(1/2)/π^{1/2} = 1, Γ(1)/π = 1/π, Γ(3/2)/π^{3/2} = 1/(2π), Γ(2)/π² = 1/π².
        assert!((gamma_over_pi_power(1) - 1.0).abs() < 1e-15);
        assert!((gamma_over_pi_power(2) - 1.0 / PI).abs() < 1e-15);
        assert!((gamma_over_pi_power(3) - 0.5 / PI).abs() < 1e-15);
        assert!((gamma_over_pi_power(4) - 1.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn three_dimensional_kernel() {
        let s = GreensSpec::new(3).unwrap();
        assert!((greens_function(&s, 1.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((greens_function(&s.negated(), 2.0).unwrap() + 1.0 / (8.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn four_dimensional_scaling() {
        let s = GreensSpec::new(4).unwrap();
        let r = greens_function(&s, 2.6).unwrap() / greens_function(&s, 1.3).unwrap();
        assert!((r - 0.25).abs() < 1e-14);
    }

    #[test]
    fn low_dimensional_branches() {
        assert_eq!(greens_function(&GreensSpec::new(1).unwrap(), 3.0).unwrap(), -1.5);
        let g2 = greens_function(&GreensSpec::new(2).unwrap(), std::f64::consts::E).unwrap();
        assert!((g2 + 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(GreensSpec::new(0), Err(GaugeError::ZeroDimension)));
        let s = GreensSpec::new(3).unwrap();
        assert!(greens_function(&s, 0.0).is_err());
        assert!(greens_function(&s, -1.0).is_err());
        assert!(greens_function(&s, f64::NAN).is_err());
    }

    #[test]
    fn large_dimension_stays_finite() {
        let g = greens_function(&GreensSpec::new(400).unwrap(), 1.0).unwrap();
        assert!(g.is_finite() && g > 0.0);
    }
}
