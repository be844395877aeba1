//! Exact solvers for square assignment problems: min-sum (Hungarian with
//! shortest augmenting paths) and min-max (threshold search over a bipartite
//! feasibility test).
//!
//! Entries may be `+inf` to forbid a pairing; `+inf` is never a sentinel for
//! "large". Solvers are pure functions and safe to call concurrently.

use crate::error::{Error, Result};

/// A square matrix of non-negative extended-real costs.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    /// Builds from rows; all rows must have the same length as the row count,
    /// and every entry must be non-negative (`+inf` allowed, NaN not).
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "cost matrix must be square: {n} rows but a row of length {}",
                    row.len()
                )));
            }
            for &v in row {
                if v.is_nan() || v < 0.0 {
                    return Err(Error::Domain(format!("cost entries must be >= 0, got {v}")));
                }
                entries.push(v);
            }
        }
        Ok(CostMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        CostMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// A permutation `i -> perm[i]` together with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    perm: Vec<usize>,
    total: f64,
}

impl Assignment {
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Sum of assigned entries for the min-sum solver, max for min-max.
    pub fn total(&self) -> f64 {
        self.total
    }
}

fn sum_along(c: &CostMatrix, perm: &[usize]) -> f64 {
    perm.iter().enumerate().map(|(i, &j)| c.at(i, j)).sum()
}

fn max_along(c: &CostMatrix, perm: &[usize]) -> f64 {
    perm.iter()
        .enumerate()
        .map(|(i, &j)| c.at(i, j))
        .fold(0.0, f64::max)
}

/// Globally minimizes `sum_i c[i][perm(i)]` over all permutations.
///
/// Shortest-augmenting-path formulation with dual potentials, O(n^3).
pub fn solve_min_sum(c: &CostMatrix) -> Result<Assignment> {
    let n = c.n();
    if n == 0 {
        return Ok(Assignment {
            perm: Vec::new(),
            total: 0.0,
        });
    }

    // 1-based arrays with column 0 as the virtual start of augmenting paths.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // matched_row[j] = row in 1..=n, 0 = free
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = c.at(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                // Every extension of the partial matching runs through a
                // forbidden entry: no permutation has finite total.
                return Err(Error::Infeasible);
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        // Unwind the augmenting path.
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[matched_row[j] - 1] = j - 1;
    }
    let total = sum_along(c, &perm);
    if !total.is_finite() {
        return Err(Error::Infeasible);
    }
    Ok(Assignment { perm, total })
}

/// Kuhn's augmenting-path matching over edges with `c[i][j] <= threshold`.
/// Returns a full row->col matching if one exists.
fn threshold_matching(c: &CostMatrix, threshold: f64) -> Option<Vec<usize>> {
    let n = c.n();
    let mut col_of_row = vec![usize::MAX; n];
    let mut row_of_col = vec![usize::MAX; n];

    fn try_augment(
        c: &CostMatrix,
        threshold: f64,
        i: usize,
        visited: &mut [bool],
        col_of_row: &mut [usize],
        row_of_col: &mut [usize],
    ) -> bool {
        for j in 0..c.n() {
            if visited[j] || !(c.at(i, j) <= threshold) {
                continue;
            }
            visited[j] = true;
            if row_of_col[j] == usize::MAX
                || try_augment(c, threshold, row_of_col[j], visited, col_of_row, row_of_col)
            {
                col_of_row[i] = j;
                row_of_col[j] = i;
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut visited = vec![false; n];
        if !try_augment(c, threshold, i, &mut visited, &mut col_of_row, &mut row_of_col) {
            return None;
        }
    }
    Some(col_of_row)
}

/// Globally minimizes `max_i c[i][perm(i)]` over all permutations.
///
/// Binary search over the sorted distinct entries, with a perfect-matching
/// feasibility test on the thresholded bipartite graph. The optimum is always
/// attained at one of the entries.
pub fn solve_min_max(c: &CostMatrix) -> Result<Assignment> {
    let n = c.n();
    if n == 0 {
        return Ok(Assignment {
            perm: Vec::new(),
            total: 0.0,
        });
    }

    let mut values: Vec<f64> = (0..n * n)
        .map(|k| c.entries[k])
        .filter(|v| v.is_finite())
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    if values.is_empty() || threshold_matching(c, values[values.len() - 1]).is_none() {
        return Err(Error::Infeasible);
    }

    let (mut lo, mut hi) = (0usize, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if threshold_matching(c, values[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let perm = threshold_matching(c, values[lo]).expect("feasibility verified");
    let total = max_along(c, &perm);
    Ok(Assignment { perm, total })
}

/// All permutations whose sum is within `eps` of the min-sum optimum.
///
/// Depth-first enumeration with prefix pruning; intended for uniqueness
/// diagnostics on small matrices, not for large instances.
pub fn enumerate_min_sum(c: &CostMatrix, eps: f64) -> Result<Vec<Assignment>> {
    let opt = solve_min_sum(c)?.total;
    let bound = opt + eps;
    let n = c.n();
    let mut out = Vec::new();
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    fn dfs(
        c: &CostMatrix,
        row: usize,
        acc: f64,
        bound: f64,
        perm: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Assignment>,
    ) {
        if row == c.n() {
            out.push(Assignment {
                perm: perm.to_vec(),
                total: acc,
            });
            return;
        }
        for j in 0..c.n() {
            if used[j] {
                continue;
            }
            let next = acc + c.at(row, j);
            if next <= bound {
                used[j] = true;
                perm[row] = j;
                dfs(c, row + 1, next, bound, perm, used, out);
                used[j] = false;
            }
        }
    }
    dfs(c, 0, 0.0, bound, &mut perm, &mut used, &mut out);
    Ok(out)
}

/// All permutations whose max is within `eps` of the min-max optimum.
pub fn enumerate_min_max(c: &CostMatrix, eps: f64) -> Result<Vec<Assignment>> {
    let opt = solve_min_max(c)?.total;
    let bound = opt + eps;
    let n = c.n();
    let mut out = Vec::new();
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    fn dfs(
        c: &CostMatrix,
        row: usize,
        acc: f64,
        bound: f64,
        perm: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Assignment>,
    ) {
        if row == c.n() {
            out.push(Assignment {
                perm: perm.to_vec(),
                total: acc,
            });
            return;
        }
        for j in 0..c.n() {
            if used[j] {
                continue;
            }
            let next = acc.max(c.at(row, j));
            if next <= bound {
                used[j] = true;
                perm[row] = j;
                dfs(c, row + 1, next, bound, perm, used, out);
                used[j] = false;
            }
        }
    }
    dfs(c, 0, 0.0, bound, &mut perm, &mut used, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn matrix(rows: &[&[f64]]) -> CostMatrix {
        CostMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Test-only oracle: direct minimum over all permutations.
    fn brute_force(c: &CostMatrix, combine: impl Fn(f64, f64) -> f64 + Copy) -> (f64, Vec<usize>) {
        fn visit(
            c: &CostMatrix,
            row: usize,
            acc: f64,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            best: &mut (f64, Vec<usize>),
            combine: impl Fn(f64, f64) -> f64 + Copy,
        ) {
            if row == c.n() {
                if acc < best.0 {
                    *best = (acc, perm.clone());
                }
                return;
            }
            for j in 0..c.n() {
                if used[j] {
                    continue;
                }
                used[j] = true;
                perm.push(j);
                visit(c, row + 1, combine(acc, c.at(row, j)), perm, used, best, combine);
                perm.pop();
                used[j] = false;
            }
        }
        let mut best = (f64::INFINITY, Vec::new());
        visit(
            c,
            0,
            0.0,
            &mut Vec::new(),
            &mut vec![false; c.n()],
            &mut best,
            combine,
        );
        best
    }

    #[test]
    fn min_sum_examples() {
        let a = solve_min_sum(&matrix(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(a.perm(), &[0, 1]);
        assert_eq!(a.total(), 0.0);

        // Brute force over both permutations: 1 + 4 = 5 vs 2 + 2 = 4.
        let a = solve_min_sum(&matrix(&[&[1.0, 2.0], &[2.0, 4.0]])).unwrap();
        assert_eq!(a.perm(), &[1, 0]);
        assert_eq!(a.total(), 4.0);
    }

    #[test]
    fn min_max_examples() {
        let a = solve_min_max(&matrix(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(a.total(), 0.0);

        // max(1, 4) = 4 vs max(2, 2) = 2.
        let a = solve_min_max(&matrix(&[&[1.0, 2.0], &[2.0, 4.0]])).unwrap();
        assert_eq!(a.perm(), &[1, 0]);
        assert_eq!(a.total(), 2.0);
    }

    #[test]
    fn min_sum_matches_brute_force_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=7 {
            for _ in 0..40 {
                // Small integer entries keep every partial sum exact.
                let c = CostMatrix::from_fn(n, |_, _| rng.gen_range(0..40) as f64);
                let solved = solve_min_sum(&c).unwrap();
                let (best, _) = brute_force(&c, |a, b| a + b);
                assert_eq!(solved.total(), best, "n={n}");
            }
        }
    }

    #[test]
    fn min_max_matches_brute_force_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..40 {
                let c = CostMatrix::from_fn(n, |_, _| rng.gen_range(0..40) as f64);
                let solved = solve_min_max(&c).unwrap();
                let (best, _) = brute_force(&c, f64::max);
                assert_eq!(solved.total(), best, "n={n}");
            }
        }
    }

    #[test]
    fn forbidden_entries_and_infeasibility() {
        let inf = f64::INFINITY;
        // Only the identity permutation is finite.
        let a = solve_min_sum(&matrix(&[&[1.0, inf], &[inf, 1.0]])).unwrap();
        assert_eq!(a.perm(), &[0, 1]);
        assert_eq!(a.total(), 2.0);

        // Row of inf: no finite permutation at all.
        assert!(matches!(
            solve_min_sum(&matrix(&[&[inf, inf], &[1.0, 1.0]])),
            Err(Error::Infeasible)
        ));
        assert!(matches!(
            solve_min_max(&matrix(&[&[inf, inf], &[1.0, 1.0]])),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn enumeration_returns_all_optima() {
        // Two optimal permutations with total 2.
        let c = matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let all = enumerate_min_sum(&c, 1e-9).unwrap();
        assert_eq!(all.len(), 2);

        let c = matrix(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let all = enumerate_min_sum(&c, 1e-9).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].perm(), &[1, 0]);

        let all = enumerate_min_max(&c, 1e-9).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].total(), 2.0);
    }

    #[test]
    fn constant_shift_preserves_min_sum_optima() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let base = CostMatrix::from_fn(n, |_, _| rng.gen_range(0..30) as f64);
            let shift = rng.gen_range(1..10) as f64;
            let shifted = CostMatrix::from_fn(n, |i, j| base.at(i, j) + shift);

            let a = solve_min_sum(&base).unwrap();
            let b = solve_min_sum(&shifted).unwrap();
            assert_eq!(b.total(), a.total() + shift * n as f64);

            let perms = |m: &CostMatrix| -> Vec<Vec<usize>> {
                enumerate_min_sum(m, 1e-9)
                    .unwrap()
                    .into_iter()
                    .map(|a| a.perm().to_vec())
                    .collect()
            };
            assert_eq!(perms(&base), perms(&shifted));
        }
    }

    #[test]
    fn monotone_transform_preserves_min_max_optima() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let base = CostMatrix::from_fn(n, |_, _| rng.gen_range(0..30) as f64);
            // x -> x^3 + 2x is strictly increasing on [0, inf).
            let mapped = CostMatrix::from_fn(n, |i, j| {
                let x = base.at(i, j);
                x * x * x + 2.0 * x
            });
            let perms = |m: &CostMatrix| -> Vec<Vec<usize>> {
                enumerate_min_max(m, 0.0)
                    .unwrap()
                    .into_iter()
                    .map(|a| a.perm().to_vec())
                    .collect()
            };
            assert_eq!(perms(&base), perms(&mapped));
        }
    }

    #[test]
    fn empty_matrix_is_trivial() {
        let c = CostMatrix::from_rows(Vec::new()).unwrap();
        assert_eq!(solve_min_sum(&c).unwrap().total(), 0.0);
        assert_eq!(solve_min_max(&c).unwrap().total(), 0.0);
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(CostMatrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(CostMatrix::from_rows(vec![vec![-1.0]]).is_err());
        assert!(CostMatrix::from_rows(vec![vec![f64::NAN]]).is_err());
    }
}
