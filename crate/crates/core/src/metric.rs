//! The d_p metric family on diagrams: exact distances, optimal pairings,
//! geodesic interpolation and the point-vs-diagonal pairing regions.

use crate::assignment::{solve_min_max, solve_min_sum, CostMatrix};
use crate::diagram::{diag_pow_cost, diagonal_projection, Diagram, Element, PlanePoint};
use crate::error::{Error, Result};
use crate::norm::{lp_pow_cost, root_p, PNorm};

/// Default cap on `n + m` for pairing enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// A bijection between two diagrams' points and diagonal copies.
///
/// Every off-diagonal point of the left diagram appears exactly once on the
/// left, every off-diagonal point of the right diagram exactly once on the
/// right; remaining partners are the diagonal. Diagonal-to-diagonal pairs cost
/// nothing and are not stored.
#[derive(Debug, Clone)]
pub struct Pairing {
    pairs: Vec<(Element, Element)>,
    index_pairs: Vec<(Option<usize>, Option<usize>)>,
    p: PNorm,
    cost: f64,
}

impl Pairing {
    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    /// Same pairs as point indices into the two diagrams; `None` is the
    /// diagonal.
    pub fn index_pairs(&self) -> &[(Option<usize>, Option<usize>)] {
        &self.index_pairs
    }

    pub fn p(&self) -> PNorm {
        self.p
    }

    /// `(sum ||left - right||_p^p)^(1/p)`, or the max of the l_inf
    /// displacements for `p = inf`. A diagonal partner contributes the
    /// diagonal distance of the other side.
    pub fn cost(&self) -> f64 {
        self.cost
    }
}

fn check_inputs(x: &Diagram, y: &Diagram) -> Result<()> {
    if x.has_essential() || y.has_essential() {
        return Err(Error::EssentialPoint);
    }
    Ok(())
}

/// Per-pair cost entering the assignment objective: the p-th power of the
/// displacement norm for finite `p`, the l_inf displacement for `p = inf`.
fn pair_pow_cost(a: &PlanePoint, b: &PlanePoint, p: PNorm) -> f64 {
    lp_pow_cost(a.birth() - b.birth(), a.death() - b.death(), p)
}

fn index_pairs_to_elements(
    x: &Diagram,
    y: &Diagram,
    index_pairs: &[(Option<usize>, Option<usize>)],
) -> Vec<(Element, Element)> {
    index_pairs
        .iter()
        .map(|&(i, j)| {
            let left = i.map_or(Element::Diagonal, |i| Element::Point(x.points()[i]));
            let right = j.map_or(Element::Diagonal, |j| Element::Point(y.points()[j]));
            (left, right)
        })
        .collect()
}

/// Solves the assignment problem underlying `d_p(x, y)` and returns the
/// pre-root objective (the power sum for finite `p`, the bottleneck value for
/// `p = inf`) together with the index-level pairing.
pub(crate) fn dp_raw(
    x: &Diagram,
    y: &Diagram,
    p: PNorm,
) -> Result<(f64, Vec<(Option<usize>, Option<usize>)>)> {
    check_inputs(x, y)?;
    let (n, m) = (x.len(), y.len());
    if n + m == 0 {
        return Ok((0.0, Vec::new()));
    }

    // Rows: points of x then n + m - n diagonal copies; columns likewise for
    // y. Any point may use any diagonal copy, so every diagonal row/column
    // carries the same projection cost.
    let size = n + m;
    let cost = CostMatrix::from_fn(size, |i, j| match (i < n, j < m) {
        (true, true) => pair_pow_cost(&x.points()[i], &y.points()[j], p),
        (true, false) => diag_pow_cost(&x.points()[i], p),
        (false, true) => diag_pow_cost(&y.points()[j], p),
        (false, false) => 0.0,
    });

    let assignment = match p {
        PNorm::Finite(_) => solve_min_sum(&cost)?,
        PNorm::Infinity => solve_min_max(&cost)?,
    };

    let mut index_pairs = Vec::new();
    for (i, &j) in assignment.perm().iter().enumerate() {
        match (i < n, j < m) {
            (true, true) => index_pairs.push((Some(i), Some(j))),
            (true, false) => index_pairs.push((Some(i), None)),
            (false, true) => index_pairs.push((None, Some(j))),
            (false, false) => {}
        }
    }
    Ok((assignment.total(), index_pairs))
}

/// The exact distance `d_p(x, y)` together with one optimal pairing.
pub fn dp_distance(x: &Diagram, y: &Diagram, p: PNorm) -> Result<(f64, Pairing)> {
    let (raw, index_pairs) = dp_raw(x, y, p)?;
    let cost = match p {
        PNorm::Finite(q) => root_p(raw, q),
        PNorm::Infinity => raw,
    };
    let pairs = index_pairs_to_elements(x, y, &index_pairs);
    Ok((
        cost,
        Pairing {
            pairs,
            index_pairs,
            p,
            cost,
        },
    ))
}

/// Pre-root cost of one index-level pairing (injective partial map plus
/// diagonal fallbacks).
fn partial_map_raw_cost(x: &Diagram, y: &Diagram, map: &[Option<usize>], p: PNorm) -> f64 {
    let mut matched = vec![false; y.len()];
    let mut acc: f64 = 0.0;
    let combine = |acc: f64, term: f64| match p {
        PNorm::Finite(_) => acc + term,
        PNorm::Infinity => acc.max(term),
    };
    for (i, &target) in map.iter().enumerate() {
        let term = match target {
            Some(j) => {
                matched[j] = true;
                pair_pow_cost(&x.points()[i], &y.points()[j], p)
            }
            None => diag_pow_cost(&x.points()[i], p),
        };
        acc = combine(acc, term);
    }
    for (j, was_matched) in matched.iter().enumerate() {
        if !was_matched {
            acc = combine(acc, diag_pow_cost(&y.points()[j], p));
        }
    }
    acc
}

fn partial_map_to_index_pairs(
    map: &[Option<usize>],
    m: usize,
) -> Vec<(Option<usize>, Option<usize>)> {
    let mut matched = vec![false; m];
    let mut out = Vec::new();
    for (i, &target) in map.iter().enumerate() {
        if let Some(j) = target {
            matched[j] = true;
        }
        out.push((Some(i), target));
    }
    for (j, was_matched) in matched.iter().enumerate() {
        if !was_matched {
            out.push((None, Some(j)));
        }
    }
    out
}

/// Every pairing whose cost is within `eps` of the optimum, deduplicated up
/// to relabeling of diagonal copies.
///
/// Enumerates injective partial maps from the left points to the right
/// points (unmatched points fall to the diagonal), so diagonal copies are
/// never distinguished. Errors with `SizeLimit` when `n + m > cap`.
pub fn all_optimal_pairings(
    x: &Diagram,
    y: &Diagram,
    p: PNorm,
    eps: f64,
    cap: usize,
) -> Result<Vec<Pairing>> {
    check_inputs(x, y)?;
    let (n, m) = (x.len(), y.len());
    if n + m > cap {
        return Err(Error::SizeLimit { size: n + m, cap });
    }

    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    let mut current = vec![None; n];
    let mut used = vec![false; m];
    fn visit(
        i: usize,
        n: usize,
        m: usize,
        current: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if i == n {
            out.push(current.clone());
            return;
        }
        current[i] = None;
        visit(i + 1, n, m, current, used, out);
        for j in 0..m {
            if used[j] {
                continue;
            }
            used[j] = true;
            current[i] = Some(j);
            visit(i + 1, n, m, current, used, out);
            current[i] = None;
            used[j] = false;
        }
    }
    visit(0, n, m, &mut current, &mut used, &mut maps);

    let costs: Vec<f64> = maps
        .iter()
        .map(|map| partial_map_raw_cost(x, y, map, p))
        .collect();
    let best_raw = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let best = match p {
        PNorm::Finite(q) => root_p(best_raw, q),
        PNorm::Infinity => best_raw,
    };

    let mut pairings = Vec::new();
    for (map, raw) in maps.iter().zip(&costs) {
        let cost = match p {
            PNorm::Finite(q) => root_p(*raw, q),
            PNorm::Infinity => *raw,
        };
        if cost <= best + eps {
            let index_pairs = partial_map_to_index_pairs(map, m);
            let pairs = index_pairs_to_elements(x, y, &index_pairs);
            pairings.push(Pairing {
                pairs,
                index_pairs,
                p,
                cost,
            });
        }
    }
    Ok(pairings)
}

/// The point of the interpolated path at time `t` built from one fixed
/// pairing: matched points move linearly toward their partners, points
/// paired with the diagonal move toward their projections and vanish on
/// arrival.
pub fn geodesic_from_pairing(pairing: &Pairing, t: f64) -> Result<Diagram> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    let mut points = Vec::new();
    let mut push = |bx: f64, dx: f64, by: f64, dy: f64| {
        let birth = (1.0 - t) * bx + t * by;
        let death = (1.0 - t) * dx + t * dy;
        if birth < death {
            points.push(PlanePoint::new(birth, death).expect("interpolant stays above diagonal"));
        }
    };
    for (left, right) in pairing.pairs() {
        match (left, right) {
            (Element::Point(a), Element::Point(b)) => {
                push(a.birth(), a.death(), b.birth(), b.death())
            }
            (Element::Point(a), Element::Diagonal) => {
                let (m, _) = diagonal_projection(a)?;
                push(a.birth(), a.death(), m, m)
            }
            (Element::Diagonal, Element::Point(b)) => {
                let (m, _) = diagonal_projection(b)?;
                push(m, m, b.birth(), b.death())
            }
            (Element::Diagonal, Element::Diagonal) => {}
        }
    }
    Ok(Diagram::new(points))
}

/// Interpolates between `x` and `y` along a geodesic: computes one optimal
/// pairing and returns the interpolated diagram at time `t` (so `t = 0`
/// gives `x` and `t = 1` gives `y`).
pub fn geodesic_point(x: &Diagram, y: &Diagram, t: f64, p: PNorm) -> Result<Diagram> {
    let (_, pairing) = dp_distance(x, y, p)?;
    geodesic_from_pairing(&pairing, t)
}

/// Whether pairing two points with each other costs less than sending both
/// to the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingRegion {
    PairPoints,
    PairDiagonal,
    Tie,
}

const REGION_TIE_EPS: f64 = 1e-12;

/// Compares `||x - y||_p^p` against the cost of projecting both points
/// (for `p = inf`: max against max). Ties within `1e-12`.
pub fn pairing_region(x: &PlanePoint, y: &PlanePoint, p: PNorm) -> Result<PairingRegion> {
    if x.is_essential() || y.is_essential() {
        return Err(Error::EssentialPoint);
    }
    let direct = pair_pow_cost(x, y, p);
    let via_diagonal = match p {
        PNorm::Finite(_) => diag_pow_cost(x, p) + diag_pow_cost(y, p),
        PNorm::Infinity => diag_pow_cost(x, p).max(diag_pow_cost(y, p)),
    };
    Ok(if (direct - via_diagonal).abs() <= REGION_TIE_EPS {
        PairingRegion::Tie
    } else if direct < via_diagonal {
        PairingRegion::PairPoints
    } else {
        PairingRegion::PairDiagonal
    })
}
