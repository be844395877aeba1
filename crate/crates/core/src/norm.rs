//! The exponent parameter of the metric family and l_p helpers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exponent of the metric family, an extended real in `[1, inf]`.
///
/// `Infinity` selects the bottleneck (min-max) code path; it is a distinct
/// branch everywhere, never a large-`p` approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub const ONE: PNorm = PNorm::Finite(1.0);
    pub const TWO: PNorm = PNorm::Finite(2.0);

    /// Validates `p >= 1`; `f64::INFINITY` maps to `PNorm::Infinity`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() {
            return Err(Error::Domain("p must not be NaN".into()));
        }
        if p < 1.0 {
            return Err(Error::Domain(format!("p must be at least 1, got {p}")));
        }
        if p.is_infinite() {
            Ok(PNorm::Infinity)
        } else {
            Ok(PNorm::Finite(p))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PNorm::Infinity)
    }

    /// The exponent as an `f64` (`inf` for the bottleneck case).
    pub fn value(self) -> f64 {
        match self {
            PNorm::Finite(p) => p,
            PNorm::Infinity => f64::INFINITY,
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(PNorm::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse p from {t:?}")))?;
        PNorm::new(p)
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => write!(f, "inf"),
        }
    }
}

/// `x^p` for `x >= 0`, with exact fast paths for the common exponents.
pub(crate) fn pow_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// `x^(1/p)` for `x >= 0`.
pub(crate) fn root_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / p)
    }
}

/// l_p norm of the displacement `(dx, dy)`.
pub fn lp_norm(dx: f64, dy: f64, p: PNorm) -> f64 {
    let (ax, ay) = (dx.abs(), dy.abs());
    match p {
        PNorm::Infinity => ax.max(ay),
        PNorm::Finite(p) if p == 1.0 => ax + ay,
        PNorm::Finite(p) if p == 2.0 => (ax * ax + ay * ay).sqrt(),
        PNorm::Finite(p) => (ax.powf(p) + ay.powf(p)).powf(1.0 / p),
    }
}

/// `|dx|^p + |dy|^p` (or the max norm when `p = inf`): the per-pair term
/// entering cost matrices and power sums.
pub(crate) fn lp_pow_cost(dx: f64, dy: f64, p: PNorm) -> f64 {
    let (ax, ay) = (dx.abs(), dy.abs());
    match p {
        PNorm::Infinity => ax.max(ay),
        PNorm::Finite(p) => pow_p(ax, p) + pow_p(ay, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_values() {
        assert_eq!("1".parse::<PNorm>().unwrap(), PNorm::ONE);
        assert_eq!("2".parse::<PNorm>().unwrap(), PNorm::TWO);
        assert_eq!("inf".parse::<PNorm>().unwrap(), PNorm::Infinity);
        assert_eq!("2.5".parse::<PNorm>().unwrap(), PNorm::Finite(2.5));
        assert!("0.5".parse::<PNorm>().is_err());
        assert!("nan".parse::<PNorm>().is_err());
        assert!("x".parse::<PNorm>().is_err());
    }

    #[test]
    fn norm_special_cases() {
        assert_eq!(lp_norm(3.0, -4.0, PNorm::ONE), 7.0);
        assert_eq!(lp_norm(3.0, -4.0, PNorm::TWO), 5.0);
        assert_eq!(lp_norm(3.0, -4.0, PNorm::Infinity), 4.0);
        let p3 = PNorm::Finite(3.0);
        assert!((lp_norm(1.0, 1.0, p3) - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }
}
