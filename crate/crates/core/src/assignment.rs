//! Maximum-weight perfect assignment on small dense score matrices.
//!
//! [`max_weight_assignment`] runs the O(n³) shortest-augmenting-path form of
//! the Hungarian method. [`lexicographic_max_assignment`] builds on it to
//! return the lexicographically smallest optimal assignment, so callers get
//! a canonical answer when several permutations tie.

/// Two assignment scores closer than `TIE_TOL · max(1, |score|)` are ties.
pub const TIE_TOL: f64 = 1e-12;

/// Pairs a score matrix with the cells that may be used.
#[derive(Debug, Clone)]
pub struct AssignmentProblem<'a> {
    weights: &'a [Vec<f64>],
    allowed: Vec<Vec<bool>>,
}

impl<'a> AssignmentProblem<'a> {
    pub fn new(weights: &'a [Vec<f64>]) -> Self {
        let n = weights.len();
        assert!(weights.iter().all(|r| r.len() == n), "score matrix must be square");
        Self {
            weights,
            allowed: vec![vec![true; n]; n],
        }
    }

    /// Forbid the diagonal, leaving only derangements.
    pub fn derangements_only(mut self) -> Self {
        for i in 0..self.allowed.len() {
            self.allowed[i][i] = false;
        }
        self
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn is_allowed(&self, row: usize, col: usize) -> bool {
        self.allowed[row][col]
    }

    pub fn score(&self, assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| self.weights[i][j])
            .sum()
    }

    fn with_fixed(&self, row: usize, col: usize) -> Self {
        let mut allowed = self.allowed.clone();
        for j in 0..allowed.len() {
            if j != col {
                allowed[row][j] = false;
            }
        }
        for (i, r) in allowed.iter_mut().enumerate() {
            if i != row {
                r[col] = false;
            }
        }
        Self {
            weights: self.weights,
            allowed,
        }
    }
}

/// Solves the problem, returning `None` when no perfect assignment uses
/// only allowed cells.
pub fn max_weight_assignment(problem: &AssignmentProblem<'_>) -> Option<(Vec<usize>, f64)> {
    let n = problem.size();
    if n == 0 {
        return Some((Vec::new(), 0.0));
    }
    // Forbidden cells get a cost no optimal allowed assignment can reach.
    let spread = problem
        .weights
        .iter()
        .flatten()
        .fold(0.0f64, |m, w| m.max(w.abs()));
    let forbidden = 1.0 + 4.0 * (n as f64) * (spread + 1.0);
    let cost = |i: usize, j: usize| -> f64 {
        if problem.allowed[i][j] {
            -problem.weights[i][j]
        } else {
            forbidden
        }
    };

    // 1-indexed potentials and matching, column 0 is the virtual start.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[matched_row[j] - 1] = j - 1;
    }
    if assignment
        .iter()
        .enumerate()
        .any(|(i, &j)| !problem.allowed[i][j])
    {
        return None;
    }
    let score = problem.score(&assignment);
    Some((assignment, score))
}

/// The lexicographically smallest assignment whose score is within
/// [`TIE_TOL`] of the optimum.
///
/// Rows are fixed one at a time to the smallest column that still admits an
/// optimal completion, which costs `O(n²)` solves of size `n`.
pub fn lexicographic_max_assignment(problem: &AssignmentProblem<'_>) -> Option<(Vec<usize>, f64)> {
    let (_, best) = max_weight_assignment(problem)?;
    let slack = TIE_TOL * best.abs().max(1.0);
    let n = problem.size();
    let mut current = problem.clone();
    let mut assignment = Vec::with_capacity(n);
    for row in 0..n {
        let mut chosen = None;
        for col in 0..n {
            if !current.is_allowed(row, col) {
                continue;
            }
            let candidate = current.with_fixed(row, col);
            if let Some((_, score)) = max_weight_assignment(&candidate) {
                if score >= best - slack {
                    chosen = Some((col, candidate));
                    break;
                }
            }
        }
        let (col, next) = chosen?;
        assignment.push(col);
        current = next;
    }
    let score = problem.score(&assignment);
    Some((assignment, score))
}
