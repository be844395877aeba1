//! Closed-form central tendencies of a single selection: `k` plane points
//! together with `N - k` diagonal copies.

use crate::diagram::{diag_pow_cost, Element, PlanePoint};
use crate::error::{Error, Result};
use crate::norm::{lp_pow_cost, PNorm};

/// One element chosen from each of `N` diagrams: `k` off-diagonal points and
/// `N - k` diagonal copies. `origin`, when present, records the
/// `(diagram index, point index)` of each point for traceability.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    points: Vec<PlanePoint>,
    diagonal_count: usize,
    origin: Option<Vec<(usize, usize)>>,
}

impl Selection {
    pub fn new(points: Vec<PlanePoint>, diagonal_count: usize) -> Result<Self> {
        Self::build(points, diagonal_count, None)
    }

    pub fn with_origin(
        points: Vec<PlanePoint>,
        diagonal_count: usize,
        origin: Vec<(usize, usize)>,
    ) -> Result<Self> {
        Self::build(points, diagonal_count, Some(origin))
    }

    fn build(
        points: Vec<PlanePoint>,
        diagonal_count: usize,
        origin: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if points.len() + diagonal_count == 0 {
            return Err(Error::Domain("a selection draws from at least one diagram".into()));
        }
        if points.iter().any(PlanePoint::is_essential) {
            return Err(Error::EssentialPoint);
        }
        if let Some(origin) = &origin {
            if origin.len() != points.len() {
                return Err(Error::Domain(
                    "origin must list one (diagram, point) pair per point".into(),
                ));
            }
            let mut diagrams: Vec<usize> = origin.iter().map(|&(d, _)| d).collect();
            diagrams.sort_unstable();
            diagrams.dedup();
            if diagrams.len() != origin.len() {
                return Err(Error::Domain(
                    "a selection may draw at most one point per diagram".into(),
                ));
            }
        }
        Ok(Selection {
            points,
            diagonal_count,
            origin,
        })
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn diagonal_count(&self) -> usize {
        self.diagonal_count
    }

    /// `N`: the number of diagrams the selection draws from.
    pub fn total_count(&self) -> usize {
        self.points.len() + self.diagonal_count
    }

    pub fn origin(&self) -> Option<&[(usize, usize)]> {
        self.origin.as_deref()
    }

    /// The unique minimizer of the squared-displacement cost
    /// `sum ||. - p_i||_2^2 + (N - k) * dist_to_diagonal(.)_2^2`.
    ///
    /// With `x^` and `y^` the coordinate means of the `k` points, the
    /// minimizer is the weighted pull of `(x^, y^)` toward its own diagonal
    /// projection:
    /// `((k x^ + (N-k)(x^+y^)/2) / N, (k y^ + (N-k)(x^+y^)/2) / N)`.
    /// A selection of diagonal copies only has the diagonal as its mean.
    pub fn mean(&self) -> Element {
        let k = self.points.len();
        if k == 0 {
            return Element::Diagonal;
        }
        let n = self.total_count() as f64;
        let kf = k as f64;
        let x_hat = self.points.iter().map(PlanePoint::birth).sum::<f64>() / kf;
        let y_hat = self.points.iter().map(PlanePoint::death).sum::<f64>() / kf;
        let anchor = 0.5 * (x_hat + y_hat);
        let diag = (n - kf) * anchor;
        let x = (kf * x_hat + diag) / n;
        let y = (kf * y_hat + diag) / n;
        // y - x = k(y^ - x^)/N > 0 mathematically; guard the degenerate
        // rounding collapse for near-diagonal inputs.
        match PlanePoint::new(x, y) {
            Ok(p) => Element::Point(p),
            Err(_) => Element::Diagonal,
        }
    }

    /// The minimizer of the l_1 cost
    /// `sum ||. - p_i||_1 + (N - k) * dist_to_diagonal(.)_1` over the open
    /// half-plane together with the diagonal.
    ///
    /// Coordinate-wise order statistics: the x coordinate is the median of
    /// the births padded with `N - k` entries of `+inf`, the y coordinate the
    /// median of the deaths padded with `N - k` entries of `-inf` (the
    /// padding is handled by index arithmetic, never by float sentinels).
    /// If fewer than half the entries are points, or the order statistics
    /// land on or below the diagonal, the median is the diagonal. For even
    /// `N` the midpoint of the two middle order statistics is used.
    pub fn median(&self) -> Element {
        let k = self.points.len();
        let n = self.total_count();
        if 2 * k < n {
            // More diagonal copies than points always pulls the optimum all
            // the way to the diagonal.
            return Element::Diagonal;
        }

        let mut births: Vec<f64> = self.points.iter().map(PlanePoint::birth).collect();
        let mut deaths: Vec<f64> = self.points.iter().map(PlanePoint::death).collect();
        births.sort_by(|a, b| a.partial_cmp(b).unwrap());
        deaths.sort_by(|a, b| a.partial_cmp(b).unwrap());

        // Sorted coordinate lists with symbolic padding:
        //   births ++ [+inf; n - k]   and   [-inf; n - k] ++ deaths.
        let pad = n - k;
        let birth_at = |idx: usize| -> Option<f64> { births.get(idx).copied() };
        let death_at = |idx: usize| -> Option<f64> {
            if idx < pad {
                None
            } else {
                deaths.get(idx - pad).copied()
            }
        };

        let (x, y) = if n % 2 == 1 {
            let mid = (n - 1) / 2;
            match (birth_at(mid), death_at(mid)) {
                (Some(x), Some(y)) => (x, y),
                _ => return Element::Diagonal,
            }
        } else {
            let (lo, hi) = (n / 2 - 1, n / 2);
            match (
                birth_at(lo),
                birth_at(hi),
                death_at(lo),
                death_at(hi),
            ) {
                (Some(x0), Some(x1), Some(y0), Some(y1)) => {
                    (0.5 * (x0 + x1), 0.5 * (y0 + y1))
                }
                // An infinite middle entry pushes the optimum to the diagonal.
                _ => return Element::Diagonal,
            }
        };

        if x < y {
            Element::Point(PlanePoint::new(x, y).expect("checked x < y"))
        } else {
            Element::Diagonal
        }
    }

    /// Cost of a candidate center against this selection:
    /// `sum_i ||c - p_i||_p^p + diagonal_count * dist_to_diagonal(c)_p^p`
    /// for a point center, `sum_i dist_to_diagonal(p_i)_p^p` for the
    /// diagonal (for `p = inf`, power sums become maxima).
    pub fn cost(&self, center: &Element, p: PNorm) -> f64 {
        let combine = |acc: f64, term: f64| match p {
            PNorm::Finite(_) => acc + term,
            PNorm::Infinity => acc.max(term),
        };
        match center {
            Element::Point(c) => {
                let mut acc = 0.0;
                for q in &self.points {
                    acc = combine(
                        acc,
                        lp_pow_cost(c.birth() - q.birth(), c.death() - q.death(), p),
                    );
                }
                if self.diagonal_count > 0 {
                    let diag = diag_pow_cost(c, p);
                    match p {
                        PNorm::Finite(_) => acc += self.diagonal_count as f64 * diag,
                        PNorm::Infinity => acc = acc.max(diag),
                    }
                }
                acc
            }
            Element::Diagonal => {
                let mut acc = 0.0;
                for q in &self.points {
                    acc = combine(acc, diag_pow_cost(q, p));
                }
                acc
            }
        }
    }
}
