//! Numerical curvature probes: the nonnegative-curvature comparison
//! inequality along geodesics, and the arbitrarily small square
//! configuration with two distinct geodesics.

use crate::diagram::{Diagram, PlanePoint};
use crate::error::{Error, Result};
use crate::metric::{
    all_optimal_pairings, dp_distance, geodesic_from_pairing, Pairing, DEFAULT_ENUMERATION_CAP,
};
use crate::norm::PNorm;

/// One evaluation of the comparison inequality
/// `d(z, gamma(t))^2 >= t d(z,y)^2 + (1-t) d(z,x)^2 - t(1-t) d(x,y)^2`
/// along a geodesic from `x` to `y`.
///
/// `defect = lhs - rhs`; a negative defect witnesses a failure of the
/// lower curvature bound at this probe.
#[derive(Debug, Clone, Copy)]
pub struct AlexandrovProbe {
    pub t: f64,
    pub p: PNorm,
    pub d_zx: f64,
    pub d_zy: f64,
    pub d_xy: f64,
    /// `d(z, gamma(t))^2`.
    pub lhs: f64,
    /// `t d(z,y)^2 + (1-t) d(z,x)^2 - t(1-t) d(x,y)^2`.
    pub rhs: f64,
    pub defect: f64,
}

/// Evaluates the comparison inequality for every enumerable optimal pairing
/// between `x` and `y` (each optimal pairing induces its own geodesic). When
/// the diagrams are too large to enumerate, the single pairing found by the
/// solver is probed.
pub fn alexandrov_defect(
    x: &Diagram,
    y: &Diagram,
    z: &Diagram,
    t: f64,
    p: PNorm,
) -> Result<Vec<AlexandrovProbe>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    let (d_zx, _) = dp_distance(z, x, p)?;
    let (d_zy, _) = dp_distance(z, y, p)?;
    let (d_xy, xy_pairing) = dp_distance(x, y, p)?;

    let pairings: Vec<Pairing> =
        match all_optimal_pairings(x, y, p, 1e-9, DEFAULT_ENUMERATION_CAP) {
            Ok(pairings) => pairings,
            Err(Error::SizeLimit { .. }) => vec![xy_pairing],
            Err(e) => return Err(e),
        };

    let rhs = t * d_zy * d_zy + (1.0 - t) * d_zx * d_zx - t * (1.0 - t) * d_xy * d_xy;
    pairings
        .iter()
        .map(|pairing| {
            let gamma_t = geodesic_from_pairing(pairing, t)?;
            let (d_zg, _) = dp_distance(z, &gamma_t, p)?;
            let lhs = d_zg * d_zg;
            Ok(AlexandrovProbe {
                t,
                p,
                d_zx,
                d_zy,
                d_xy,
                lhs,
                rhs,
                defect: lhs - rhs,
            })
        })
        .collect()
}

/// The square configuration witnessing geodesic non-uniqueness at any scale.
#[derive(Debug, Clone)]
pub struct CatWitness {
    pub x: Diagram,
    pub y: Diagram,
    /// The tied optimal pairings (horizontal and vertical), each inducing a
    /// distinct geodesic.
    pub pairings: Vec<Pairing>,
}

impl CatWitness {
    pub fn geodesic_count(&self) -> usize {
        self.pairings.len()
    }
}

/// Builds two diagrams holding opposite corners of an axis-aligned square of
/// side `scale` centered at (1.5, 8.5), and enumerates the optimal pairings
/// between them. Matching the corners horizontally or vertically costs the
/// same, so two distinct geodesics exist at every scale.
pub fn cat_counterexample(scale: f64) -> Result<CatWitness> {
    if !(scale > 0.0 && scale < 7.0) {
        return Err(Error::Domain(format!(
            "scale must lie in (0, 7) to keep the square above the diagonal, got {scale}"
        )));
    }
    let (cx, cy) = (1.5, 8.5);
    let h = 0.5 * scale;
    let x = Diagram::new(vec![
        PlanePoint::new(cx - h, cy + h)?,
        PlanePoint::new(cx + h, cy - h)?,
    ]);
    let y = Diagram::new(vec![
        PlanePoint::new(cx + h, cy + h)?,
        PlanePoint::new(cx - h, cy - h)?,
    ]);
    let pairings = all_optimal_pairings(&x, &y, PNorm::TWO, 1e-9, DEFAULT_ENUMERATION_CAP)?;
    Ok(CatWitness { x, y, pairings })
}
