//! Means and medians of sets of diagrams: cost functions, exhaustive
//! matching enumeration, alternating local search and uniqueness
//! diagnostics.
//!
//! Every local minimum of the relevant cost function is induced by some
//! matching, so the exhaustive search over matchings finds the global
//! optimum; the alternating search converges to a candidate satisfying the
//! same per-selection condition but may stop in a non-global local minimum.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::{Diagram, Element};
use crate::error::{Error, Result};
use crate::metric::{all_optimal_pairings, dp_distance, dp_raw, DEFAULT_ENUMERATION_CAP};
use crate::norm::{root_p, PNorm};
use crate::selection::Selection;

/// Which central tendency to compute. The mean minimizes the quadratic cost
/// (`p = 2`), the median the absolute one (`p = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tendency {
    Mean,
    Median,
}

impl Tendency {
    pub fn p(self) -> PNorm {
        match self {
            Tendency::Mean => PNorm::TWO,
            Tendency::Median => PNorm::ONE,
        }
    }

    fn central(self, selection: &Selection) -> Element {
        match self {
            Tendency::Mean => selection.mean(),
            Tendency::Median => selection.median(),
        }
    }
}

/// Value of the cost function `F_p` at a candidate diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostFunctionValue {
    pub p: PNorm,
    pub value: f64,
}

/// `F_p(y) = ((1/N) sum_i d_p(x_i, y)^p)^(1/p)` for finite `p`, and
/// `sup_i d_inf(y, x_i)` for `p = inf`. `F_2` at the mean is the standard
/// deviation, `F_1` at the median the average deviation.
pub fn evaluate_cost(y: &Diagram, xs: &[Diagram], p: PNorm) -> Result<CostFunctionValue> {
    if xs.is_empty() {
        return Err(Error::Domain("need at least one input diagram".into()));
    }
    if y.has_essential() || xs.iter().any(Diagram::has_essential) {
        return Err(Error::EssentialPoint);
    }
    let value = match p {
        PNorm::Finite(q) => {
            let mut acc = 0.0;
            for x in xs {
                let (raw, _) = dp_raw(x, y, p)?;
                acc += raw;
            }
            root_p(acc / xs.len() as f64, q)
        }
        PNorm::Infinity => {
            let mut acc: f64 = 0.0;
            for x in xs {
                let (raw, _) = dp_raw(x, y, p)?;
                acc = acc.max(raw);
            }
            acc
        }
    };
    Ok(CostFunctionValue { p, value })
}

/// A partition of all off-diagonal points of the input diagrams into
/// selections, each drawing at most one point per diagram.
#[derive(Debug, Clone)]
pub struct Matching {
    selections: Vec<Selection>,
    n_diagrams: usize,
}

impl Matching {
    pub fn selections(&self) -> &[Selection] {
        &self.selections
    }

    pub fn n_diagrams(&self) -> usize {
        self.n_diagrams
    }
}

/// Enumerates every matching of the input diagrams exactly once, up to
/// selection reordering and relabeling of diagonal copies. Selections are
/// emitted sorted by their lexicographically smallest member.
///
/// Errors with `SizeLimit` when the total number of off-diagonal points
/// exceeds `cap`.
pub fn enumerate_matchings(xs: &[Diagram], cap: usize) -> Result<Vec<Matching>> {
    if xs.is_empty() {
        return Err(Error::Domain("need at least one input diagram".into()));
    }
    let n_diagrams = xs.len();
    let labels: Vec<(usize, usize)> = xs
        .iter()
        .enumerate()
        .flat_map(|(d, x)| (0..x.len()).map(move |i| (d, i)))
        .collect();
    let total = labels.len();
    if total > cap {
        return Err(Error::SizeLimit { size: total, cap });
    }

    // Grow partitions point by point; appending new blocks at the end keeps
    // the blocks ordered by their smallest member.
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<(usize, usize)>> = Vec::new();
    fn visit(
        labels: &[(usize, usize)],
        idx: usize,
        blocks: &mut Vec<Vec<(usize, usize)>>,
        out: &mut Vec<Vec<Vec<(usize, usize)>>>,
    ) {
        if idx == labels.len() {
            out.push(blocks.clone());
            return;
        }
        let label = labels[idx];
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&(d, _)| d != label.0) {
                blocks[b].push(label);
                visit(labels, idx + 1, blocks, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![label]);
        visit(labels, idx + 1, blocks, out);
        blocks.pop();
    }
    let mut partitions = Vec::new();
    visit(&labels, 0, &mut blocks, &mut partitions);

    for partition in partitions {
        let selections = partition
            .into_iter()
            .map(|block| {
                let points = block.iter().map(|&(d, i)| xs[d].points()[i]).collect();
                Selection::with_origin(points, n_diagrams - block.len(), block)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Matching {
            selections,
            n_diagrams,
        });
    }
    Ok(out)
}

/// A candidate central diagram produced by one matching, with its true cost.
#[derive(Debug, Clone)]
pub struct CandidateResult {
    pub candidate: Diagram,
    pub matching: Matching,
    /// `F_p(candidate)` recomputed from true distances, never the matching's
    /// internal cost (an over-refined matching must not be penalized).
    pub cost: f64,
    pub p: PNorm,
}

/// Result of an exhaustive central-tendency search.
#[derive(Debug, Clone)]
pub struct TendencyReport {
    /// Every candidate within the tolerance of the optimum, in enumeration
    /// order. Distinct matchings may contribute equal candidate diagrams.
    pub minima: Vec<CandidateResult>,
    /// True when all minima agree as diagrams (pairwise within the tolerance
    /// in the bottleneck distance).
    pub unique: bool,
    /// Number of matchings enumerated.
    pub enumerated: usize,
    /// Set when a median over an even number of diagrams was requested; the
    /// result then uses the midpoint convention.
    pub even_count_warning: bool,
    pub tendency: Tendency,
}

impl TendencyReport {
    /// The optimal cost.
    pub fn cost(&self) -> f64 {
        self.minima[0].cost
    }

    /// Minima deduplicated as diagrams (bottleneck distance at most `eps`),
    /// keeping the first witness of each class.
    pub fn distinct_minima(&self, eps: f64) -> Vec<&CandidateResult> {
        let mut reps: Vec<&CandidateResult> = Vec::new();
        for candidate in &self.minima {
            let is_new = reps.iter().all(|rep| {
                dp_distance(&rep.candidate, &candidate.candidate, PNorm::Infinity)
                    .map(|(d, _)| d > eps)
                    .unwrap_or(true)
            });
            if is_new {
                reps.push(candidate);
            }
        }
        reps
    }
}

/// Options for the exhaustive search.
#[derive(Debug, Clone)]
pub struct CenterOptions {
    /// Absolute tolerance on `F_p` for collecting ties, and the distinctness
    /// threshold on candidates.
    pub tolerance: f64,
    /// Cap on the total number of off-diagonal points.
    pub cap: usize,
}

impl Default for CenterOptions {
    fn default() -> Self {
        CenterOptions {
            tolerance: 1e-9,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn candidate_from_matching(
    xs: &[Diagram],
    matching: &Matching,
    tendency: Tendency,
) -> Result<CandidateResult> {
    let points = matching
        .selections
        .iter()
        .filter_map(|s| tendency.central(s).as_point().copied())
        .collect();
    let candidate = Diagram::new(points);
    let cost = evaluate_cost(&candidate, xs, tendency.p())?.value;
    Ok(CandidateResult {
        candidate,
        matching: matching.clone(),
        cost,
        p: tendency.p(),
    })
}

/// Exhaustive search for the mean or median: builds the candidate of every
/// matching, evaluates its true cost, and reports all candidates within
/// tolerance of the best. Candidate evaluation runs in parallel; the result
/// does not depend on evaluation order.
pub fn exhaustive_center(
    xs: &[Diagram],
    tendency: Tendency,
    options: &CenterOptions,
) -> Result<TendencyReport> {
    if xs.iter().any(Diagram::has_essential) {
        return Err(Error::EssentialPoint);
    }
    let matchings = enumerate_matchings(xs, options.cap)?;
    let candidates: Vec<CandidateResult> = matchings
        .par_iter()
        .map(|m| candidate_from_matching(xs, m, tendency))
        .collect::<Result<Vec<_>>>()?;

    let best = candidates
        .iter()
        .map(|c| c.cost)
        .fold(f64::INFINITY, f64::min);
    let minima: Vec<CandidateResult> = candidates
        .into_iter()
        .filter(|c| c.cost <= best + options.tolerance)
        .collect();

    let report = TendencyReport {
        unique: true,
        enumerated: matchings.len(),
        even_count_warning: tendency == Tendency::Median && xs.len() % 2 == 0,
        tendency,
        minima,
    };
    let unique = report.distinct_minima(options.tolerance).len() == 1;
    Ok(TendencyReport { unique, ..report })
}

/// Options for the alternating local search.
#[derive(Debug, Clone)]
pub struct AlternatingOptions {
    pub max_iterations: usize,
    /// Stop once an update improves `F_p` by less than this.
    pub tolerance: f64,
    /// Restart from every input diagram and keep the best result.
    pub all_starts: bool,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        AlternatingOptions {
            max_iterations: 100,
            tolerance: 1e-9,
            all_starts: false,
        }
    }
}

/// Outcome of the alternating search. `converged` is false when the
/// iteration limit was reached while the cost was still improving; the best
/// candidate seen so far is returned either way.
#[derive(Debug, Clone)]
pub struct AlternatingResult {
    pub result: CandidateResult,
    pub converged: bool,
    pub iterations: usize,
}

/// One update step: pair the current candidate with every input, group the
/// partners of each candidate point into a selection (input points paired
/// with a diagonal copy become singleton selections), and take the central
/// point of every selection.
fn reselect(xs: &[Diagram], y: &Diagram, tendency: Tendency) -> Result<Matching> {
    let n_diagrams = xs.len();
    let mut per_point: Vec<Vec<(usize, usize)>> = vec![Vec::new(); y.len()];
    let mut leftovers: Vec<(usize, usize)> = Vec::new();
    for (d, x) in xs.iter().enumerate() {
        let (_, index_pairs) = dp_raw(y, x, tendency.p())?;
        for (yi, xi) in index_pairs {
            match (yi, xi) {
                (Some(yi), Some(xi)) => per_point[yi].push((d, xi)),
                (None, Some(xi)) => leftovers.push((d, xi)),
                _ => {}
            }
        }
    }
    let mut selections = Vec::new();
    for origin in per_point {
        let points = origin.iter().map(|&(d, i)| xs[d].points()[i]).collect();
        let diagonal_count = n_diagrams - origin.len();
        selections.push(Selection::with_origin(points, diagonal_count, origin)?);
    }
    for (d, i) in leftovers {
        selections.push(Selection::with_origin(
            vec![xs[d].points()[i]],
            n_diagrams - 1,
            vec![(d, i)],
        )?);
    }
    Ok(Matching {
        selections,
        n_diagrams,
    })
}

/// Alternating local search from `start` (default: the first input).
///
/// Each step cannot increase `F_p`, and the returned candidate satisfies the
/// per-selection central-point condition of its final matching; it is not
/// guaranteed to be the global minimum.
pub fn alternating_center(
    xs: &[Diagram],
    tendency: Tendency,
    start: Option<&Diagram>,
    options: &AlternatingOptions,
) -> Result<AlternatingResult> {
    if xs.is_empty() {
        return Err(Error::Domain("need at least one input diagram".into()));
    }
    if xs.iter().any(Diagram::has_essential)
        || start.map(Diagram::has_essential).unwrap_or(false)
    {
        return Err(Error::EssentialPoint);
    }

    let starts: Vec<&Diagram> = if options.all_starts {
        xs.iter().collect()
    } else {
        vec![start.unwrap_or(&xs[0])]
    };

    let mut best: Option<AlternatingResult> = None;
    for start in starts {
        let run = alternate_from(xs, tendency, start, options)?;
        let better = match &best {
            None => true,
            Some(b) => run.result.cost < b.result.cost,
        };
        if better {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one start"))
}

fn alternate_from(
    xs: &[Diagram],
    tendency: Tendency,
    start: &Diagram,
    options: &AlternatingOptions,
) -> Result<AlternatingResult> {
    if options.max_iterations == 0 {
        return Err(Error::Domain("max_iterations must be positive".into()));
    }
    let mut current = start.clone();
    let mut current_cost = evaluate_cost(&current, xs, tendency.p())?.value;
    let mut best: Option<CandidateResult> = None;
    let mut iterations = 0;
    let mut converged = false;

    // Each step replaces the candidate by the central points of the matching
    // induced by its own optimal pairings, which cannot increase F_p.
    while iterations < options.max_iterations {
        let matching = reselect(xs, &current, tendency)?;
        let step = candidate_from_matching(xs, &matching, tendency)?;
        iterations += 1;
        let improvement = current_cost - step.cost;
        current = step.candidate.clone();
        current_cost = step.cost;
        let replace = best.as_ref().map_or(true, |b| step.cost < b.cost);
        if replace {
            best = Some(step);
        }
        if improvement < options.tolerance {
            converged = true;
            break;
        }
    }

    Ok(AlternatingResult {
        result: best.expect("at least one update step"),
        converged,
        iterations,
    })
}

/// Sanity bound on medians: with `K` the largest input size, any median has
/// fewer than `2K` off-diagonal points. Vacuously, the median of
/// diagonal-only inputs must be empty.
pub fn median_point_bound(xs: &[Diagram], median: &Diagram) -> bool {
    let k = xs.iter().map(Diagram::len).max().unwrap_or(0);
    if k == 0 {
        median.is_empty()
    } else {
        median.len() < 2 * k
    }
}

/// Options for [`conjecture_probe`].
#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub seed: u64,
    /// Number of random perturbations of the candidate to try.
    pub samples: usize,
    /// Coordinate scale of the perturbations.
    pub scale: f64,
    /// Cap forwarded to the pairing enumeration.
    pub cap: usize,
    /// Tie tolerance for "optimal" pairings.
    pub pairing_tolerance: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            seed: 0,
            samples: 200,
            scale: 0.05,
            cap: DEFAULT_ENUMERATION_CAP,
            pairing_tolerance: 1e-9,
        }
    }
}

/// Diagnostic report: does the candidate satisfy the per-selection median
/// condition under *every* combination of optimal pairings, and did random
/// perturbation find any improvement of `F_1`? Reported without asserting
/// that the first implies local minimality.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub hypothesis_holds: bool,
    pub improving_perturbation_found: bool,
    pub combinations_checked: usize,
    pub samples: usize,
    pub base_cost: f64,
}

/// Limit on per-point partner combinations before giving up with SizeLimit.
const PROBE_COMBINATION_CAP: usize = 100_000;

pub fn conjecture_probe(
    xs: &[Diagram],
    candidate: &Diagram,
    options: &ProbeOptions,
) -> Result<ProbeReport> {
    if xs.is_empty() {
        return Err(Error::Domain("need at least one input diagram".into()));
    }
    if xs.iter().any(Diagram::has_essential) || candidate.has_essential() {
        return Err(Error::EssentialPoint);
    }
    let n_diagrams = xs.len();
    let base_cost = evaluate_cost(candidate, xs, PNorm::ONE)?.value;

    // Partner options of each candidate point per input diagram, across all
    // optimal pairings. Every per-point combination of options is realized
    // by some tuple of optimal pairings, so checking all combinations checks
    // the hypothesis exactly.
    let mut options_per_point: Vec<Vec<Vec<Option<usize>>>> =
        vec![vec![Vec::new(); n_diagrams]; candidate.len()];
    for (d, x) in xs.iter().enumerate() {
        let pairings =
            all_optimal_pairings(candidate, x, PNorm::ONE, options.pairing_tolerance, options.cap)?;
        for pairing in &pairings {
            for &(yi, xi) in pairing.index_pairs() {
                if let Some(yi) = yi {
                    if !options_per_point[yi][d].contains(&xi) {
                        options_per_point[yi][d].push(xi);
                    }
                }
            }
        }
    }

    let mut hypothesis_holds = true;
    let mut combinations_checked = 0usize;
    'points: for (yi, per_diagram) in options_per_point.iter().enumerate() {
        let total: usize = per_diagram.iter().map(Vec::len).product();
        if combinations_checked + total > PROBE_COMBINATION_CAP {
            return Err(Error::SizeLimit {
                size: combinations_checked + total,
                cap: PROBE_COMBINATION_CAP,
            });
        }
        let mut indices = vec![0usize; n_diagrams];
        loop {
            let mut points = Vec::new();
            let mut origin = Vec::new();
            for (d, options_d) in per_diagram.iter().enumerate() {
                if let Some(xi) = options_d[indices[d]] {
                    points.push(xs[d].points()[xi]);
                    origin.push((d, xi));
                }
            }
            let diagonal_count = n_diagrams - points.len();
            let selection = Selection::with_origin(points, diagonal_count, origin)?;
            combinations_checked += 1;
            let expected = candidate.points()[yi];
            let holds = match selection.median() {
                Element::Point(m) => {
                    (m.birth() - expected.birth()).abs() <= 1e-9
                        && (m.death() - expected.death()).abs() <= 1e-9
                }
                Element::Diagonal => false,
            };
            if !holds {
                hypothesis_holds = false;
                break 'points;
            }
            // Advance the mixed-radix counter over partner choices.
            let mut d = 0;
            loop {
                if d == n_diagrams {
                    break;
                }
                indices[d] += 1;
                if indices[d] < per_diagram[d].len() {
                    break;
                }
                indices[d] = 0;
                d += 1;
            }
            if d == n_diagrams {
                break;
            }
        }
    }

    // Random perturbation search for a strictly better candidate nearby.
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut improving = false;
    for _ in 0..options.samples {
        let mut points = Vec::with_capacity(candidate.len());
        for point in candidate.points() {
            let mut moved = None;
            for _ in 0..32 {
                let db = rng.gen_range(-options.scale..=options.scale);
                let dd = rng.gen_range(-options.scale..=options.scale);
                if let Ok(p) = crate::diagram::PlanePoint::new(point.birth() + db, point.death() + dd)
                {
                    moved = Some(p);
                    break;
                }
            }
            points.push(moved.unwrap_or(*point));
        }
        let perturbed = Diagram::new(points);
        let cost = evaluate_cost(&perturbed, xs, PNorm::ONE)?.value;
        if cost < base_cost - 1e-12 {
            improving = true;
            break;
        }
    }

    Ok(ProbeReport {
        hypothesis_holds,
        improving_perturbation_found: improving,
        combinations_checked,
        samples: options.samples,
        base_cost,
    })
}
