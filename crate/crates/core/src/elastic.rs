//! Exact distance kernels and DTW lower bounds.
//!
//! DTW here accumulates squared pointwise differences along the cheapest
//! monotone alignment and returns the square root of the total. With a band of
//! radius zero it equals the Euclidean distance. The `*_sq` helpers work on the
//! un-rooted accumulated cost.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sakoe-Chiba band half-width, or no constraint at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum WarpingWindow {
    #[default]
    Unconstrained,
    SakoeChiba(usize),
}

impl WarpingWindow {
    /// Window covering `percent`% of `len`, rounded up (`cDTW5` is `from_percent(5.0, len)`).
    pub fn from_percent(percent: f64, len: usize) -> Self {
        let r = (percent / 100.0 * len as f64).ceil();
        Self::SakoeChiba(r.max(0.0) as usize)
    }

    /// Radius actually used for sequences of length `len`.
    pub fn effective_radius(&self, len: usize) -> usize {
        let full = len.saturating_sub(1);
        match *self {
            Self::Unconstrained => full,
            Self::SakoeChiba(r) => r.min(full),
        }
    }

    pub fn radius(&self) -> Option<usize> {
        match *self {
            Self::Unconstrained => None,
            Self::SakoeChiba(r) => Some(r),
        }
    }
}

/// Upper and lower Keogh envelope of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub radius: WarpingWindow,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Whether `s` lies within the band everywhere.
    pub fn contains(&self, s: &[f64]) -> bool {
        s.len() == self.len()
            && s
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return invalid(format!(
            "euclidean distance needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        ));
    }
    Ok(squared_euclidean(a, b).sqrt())
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dtw_args(a: &[f64], b: &[f64], w: WarpingWindow) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return invalid("dtw needs non-empty sequences");
    }
    let radius = w.effective_radius(a.len().max(b.len()));
    if a.len().abs_diff(b.len()) > radius {
        return invalid(format!(
            "no admissible warping path: lengths {} and {} differ by more than radius {radius}",
            a.len(),
            b.len()
        ));
    }
    Ok(radius)
}

/// DTW distance restricted to the band `w`.
pub fn dtw(a: &[f64], b: &[f64], w: WarpingWindow) -> Result<f64> {
    dtw_bounded(a, b, w, f64::INFINITY)
}

/// DTW with alignment pruning against `upper_bound`.
///
/// Returns the exact distance when it is at most `upper_bound`; otherwise
/// may return `f64::INFINITY` as soon as every partial alignment exceeds it.
pub fn dtw_bounded(a: &[f64], b: &[f64], w: WarpingWindow, upper_bound: f64) -> Result<f64> {
    let radius = check_dtw_args(a, b, w)?;
    let ub_sq = if upper_bound.is_finite() {
        upper_bound * upper_bound
    } else {
        f64::INFINITY
    };
    Ok(dtw_sq(a, b, radius, ub_sq).sqrt())
}

/// Accumulated squared DTW cost within radius `radius`, pruning cells above `ub_sq`.
///
/// Callers must have validated the arguments. Returns `INFINITY` when pruned.
pub(crate) fn dtw_sq(a: &[f64], b: &[f64], radius: usize, ub_sq: f64) -> f64 {
    if ub_sq == f64::INFINITY {
        return dtw_sq_full(a, b, radius);
    }
    let (n, m) = (a.len(), b.len());
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    // Finite-cell span of the previous row, and written span of each buffer.
    let (mut p_lo, mut p_hi) = (0usize, 0usize);
    let mut prev_written = (0usize, 0usize);
    let mut curr_written = (1usize, 0usize);

    for i in 1..=n {
        for cell in &mut curr[curr_written.0..=curr_written.1.max(curr_written.0).min(m)] {
            *cell = f64::INFINITY;
        }
        let band_lo = i.saturating_sub(radius).max(1);
        let band_hi = (i + radius).min(m);
        let start = band_lo.max(p_lo);
        let ai = a[i - 1];
        let (mut c_lo, mut c_hi) = (usize::MAX, 0usize);
        let mut last = start;
        let mut j = start;
        while j <= band_hi {
            let d = ai - b[j - 1];
            let best_pred = fmin(fmin(prev[j - 1], prev[j]), curr[j - 1]);
            let v = d * d + best_pred;
            last = j;
            if v > ub_sq {
                if j > p_hi {
                    break;
                }
            } else {
                curr[j] = v;
                if c_lo == usize::MAX {
                    c_lo = j;
                }
                c_hi = j;
            }
            j += 1;
        }
        curr_written = (start, last);
        if c_lo == usize::MAX {
            return f64::INFINITY;
        }
        p_lo = c_lo;
        p_hi = c_hi;
        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut prev_written, &mut curr_written);
    }
    prev[m]
}

#[inline(always)]
fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// Unpruned banded recurrence over two rolling rows.
fn dtw_sq_full(a: &[f64], b: &[f64], radius: usize) -> f64 {
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        let i = i + 1;
        let lo = i.saturating_sub(radius).max(1);
        let hi = (i + radius).min(m);
        curr[lo - 1] = f64::INFINITY;
        if hi < m {
            curr[hi + 1] = f64::INFINITY;
        }
        let mut left = f64::INFINITY;
        let mut diag = prev[lo - 1];
        for ((c, &up), &bj) in curr[lo..=hi].iter_mut().zip(&prev[lo..=hi]).zip(&b[lo - 1..hi]) {
            let d = ai - bj;
            let v = d * d + fmin(fmin(diag, up), left);
            *c = v;
            left = v;
            diag = up;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[m]
}

/// One optimal alignment as `(i, j)` index pairs from `(0, 0)` to the end.
///
/// Ties in the traceback prefer the diagonal step, then `(i, j-1)`, then `(i-1, j)`.
pub fn warping_path(a: &[f64], b: &[f64], w: WarpingWindow) -> Result<Vec<(usize, usize)>> {
    let radius = check_dtw_args(a, b, w)?;
    let (n, m) = (a.len(), b.len());
    let cols = m + 1;
    let mut acc = vec![f64::INFINITY; (n + 1) * cols];
    acc[0] = 0.0;
    for i in 1..=n {
        let lo = i.saturating_sub(radius).max(1);
        let hi = (i + radius).min(m);
        for j in lo..=hi {
            let d = a[i - 1] - b[j - 1];
            let best = acc[(i - 1) * cols + j - 1]
                .min(acc[(i - 1) * cols + j])
                .min(acc[i * cols + j - 1]);
            acc[i * cols + j] = d * d + best;
        }
    }
    let mut path = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    loop {
        path.push((i - 1, j - 1));
        if i == 1 && j == 1 {
            break;
        }
        let diag = acc[(i - 1) * cols + j - 1];
        let left = acc[i * cols + j - 1];
        let up = acc[(i - 1) * cols + j];
        if diag <= left && diag <= up {
            i -= 1;
            j -= 1;
        } else if left <= up {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    path.reverse();
    Ok(path)
}

/// Keogh envelope: running max and min over `|i - j| <= r`.
pub fn keogh_envelope(s: &[f64], w: WarpingWindow) -> Envelope {
    let r = w.effective_radius(s.len());
    Envelope {
        upper: sliding_extreme(s, r, |a, b| a >= b),
        lower: sliding_extreme(s, r, |a, b| a <= b),
        radius: w,
    }
}

/// Monotone-deque sliding window extreme; `keep(a, b)` is true when `a` dominates `b`.
fn sliding_extreme(s: &[f64], r: usize, keep: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let n = s.len();
    let mut out = Vec::with_capacity(n);
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for i in 0..n {
        let hi = (i + r).min(n - 1);
        while next <= hi {
            while dq.back().is_some_and(|&k| keep(s[next], s[k])) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&k| k + r < i) {
            dq.pop_front();
        }
        out.push(s[dq[0]]);
    }
    out
}

/// LB_Keogh of `query` against a precomputed envelope.
pub fn lb_keogh(query: &[f64], env: &Envelope) -> Result<f64> {
    if query.len() != env.len() {
        return invalid(format!(
            "query length {} does not match envelope length {}",
            query.len(),
            env.len()
        ));
    }
    Ok(lb_keogh_sq(query, env, f64::INFINITY).sqrt())
}

/// Squared LB_Keogh; stops early once the partial sum exceeds `ub_sq`.
pub(crate) fn lb_keogh_sq(query: &[f64], env: &Envelope, ub_sq: f64) -> f64 {
    let mut sum = 0.0;
    for ((q, hi), lo) in query.iter().zip(&env.upper).zip(&env.lower) {
        if q > hi {
            sum += (q - hi) * (q - hi);
        } else if q < lo {
            sum += (lo - q) * (lo - q);
        }
        if sum > ub_sq {
            break;
        }
    }
    sum
}

/// First/last-point LB_Kim.
pub fn lb_kim(a: &[f64], b: &[f64]) -> f64 {
    lb_kim_sq(a, b).sqrt()
}

pub(crate) fn lb_kim_sq(a: &[f64], b: &[f64]) -> f64 {
    let (Some(a0), Some(b0)) = (a.first(), b.first()) else {
        return 0.0;
    };
    let first = (a0 - b0) * (a0 - b0);
    if a.len() == 1 && b.len() == 1 {
        return first;
    }
    let (al, bl) = (a[a.len() - 1], b[b.len() - 1]);
    first + (al - bl) * (al - bl)
}

/// Exact windowed-DTW nearest neighbour of `query` among `candidates`.
///
/// Applies LB_Kim, then LB_Keogh against each candidate's envelope, then
/// pruned DTW. The answer matches a full scan; ties go to the lowest index.
pub fn nn_search_cascaded<S: AsRef<[f64]>>(
    query: &[f64],
    candidates: &[S],
    envelopes: &[Envelope],
    w: WarpingWindow,
) -> Result<(usize, f64)> {
    if candidates.is_empty() {
        return invalid("nearest-neighbour search over an empty candidate list");
    }
    if candidates.len() != envelopes.len() {
        return invalid(format!(
            "{} candidates but {} envelopes",
            candidates.len(),
            envelopes.len()
        ));
    }
    let n = query.len();
    let radius = w.effective_radius(n);
    for (i, (c, env)) in candidates.iter().zip(envelopes).enumerate() {
        if c.as_ref().len() != n || env.len() != n {
            return invalid(format!("candidate {i} length differs from query length {n}"));
        }
        if env.radius.effective_radius(n) < radius {
            return invalid(format!(
                "envelope {i} is narrower than the search window; LB_Keogh would not bound DTW"
            ));
        }
    }
    if n == 0 {
        return invalid("empty query");
    }
    let (idx, d_sq) = nn_search_sq(query, candidates, envelopes, radius);
    Ok((idx, d_sq.sqrt()))
}

/// Unchecked core of [`nn_search_cascaded`]; returns the squared distance.
pub(crate) fn nn_search_sq<S: AsRef<[f64]>>(
    query: &[f64],
    candidates: &[S],
    envelopes: &[Envelope],
    radius: usize,
) -> (usize, f64) {
    let kims: Vec<f64> = candidates
        .iter()
        .map(|c| lb_kim_sq(query, c.as_ref()))
        .collect();
    // Seed the bound with the candidate that has the smallest LB_Kim.
    let mut best_idx = 0;
    for (i, &k) in kims.iter().enumerate() {
        if k < kims[best_idx] {
            best_idx = i;
        }
    }
    let mut best = dtw_sq(query, candidates[best_idx].as_ref(), radius, f64::INFINITY);
    let seed = best_idx;
    for (i, c) in candidates.iter().enumerate() {
        if i == seed || kims[i] > best {
            continue;
        }
        if lb_keogh_sq(query, &envelopes[i], best) > best {
            continue;
        }
        let d = dtw_sq(query, c.as_ref(), radius, best);
        if d < best || (d == best && i < best_idx) {
            best = d;
            best_idx = i;
        }
    }
    (best_idx, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Minimum over every monotone, continuous warping path, by explicit enumeration.
    pub(crate) fn dtw_by_enumeration(a: &[f64], b: &[f64], radius: usize) -> f64 {
        fn walk(a: &[f64], b: &[f64], r: usize, i: usize, j: usize, acc: f64, best: &mut f64) {
            if i.abs_diff(j) > r {
                return;
            }
            let acc = acc + (a[i] - b[j]).powi(2);
            if i == a.len() - 1 && j == b.len() - 1 {
                *best = best.min(acc);
                return;
            }
            if i + 1 < a.len() && j + 1 < b.len() {
                walk(a, b, r, i + 1, j + 1, acc, best);
            }
            if j + 1 < b.len() {
                walk(a, b, r, i, j + 1, acc, best);
            }
            if i + 1 < a.len() {
                walk(a, b, r, i + 1, j, acc, best);
            }
        }
        let mut best = f64::INFINITY;
        walk(a, b, radius, 0, 0, 0.0, &mut best);
        best.sqrt()
    }

    fn random_series(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-2.0..2.0)).collect()
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert!(euclidean(&[0.0], &[0.0, 1.0]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b) = (random_series(&mut rng, 50), random_series(&mut rng, 50));
        let mut sum = 0.0;
        for i in 0..50 {
            sum += (a[i] - b[i]) * (a[i] - b[i]);
        }
        assert!((euclidean(&a, &b).unwrap() - sum.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn dtw_examples() {
        let x = [0.5, -1.0, 3.0, 2.0];
        assert_eq!(dtw(&x, &x, WarpingWindow::Unconstrained).unwrap(), 0.0);
        let a = [0.0, 0.0, 1.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0, 0.0, 0.0];
        assert_eq!(dtw(&a, &b, WarpingWindow::Unconstrained).unwrap(), 0.0);
        assert_eq!(dtw_by_enumeration(&a, &b, 4), 0.0);
        let d = dtw(&[1.0, 2.0], &[2.0, 3.0], WarpingWindow::Unconstrained).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        assert!((dtw_by_enumeration(&[1.0, 2.0], &[2.0, 3.0], 1) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dtw_band_infeasible() {
        let err = dtw(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0], WarpingWindow::SakoeChiba(1));
        assert!(err.is_err());
        assert!(dtw(&[0.0, 1.0, 2.0], &[0.0, 1.0], WarpingWindow::SakoeChiba(1)).is_ok());
    }

    #[test]
    fn dtw_matches_enumeration_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..=7);
            let m = rng.random_range(1..=7);
            let r = rng.random_range(0..7usize);
            let (a, b) = (random_series(&mut rng, n), random_series(&mut rng, m));
            let w = WarpingWindow::SakoeChiba(r);
            let eff = w.effective_radius(n.max(m));
            match dtw(&a, &b, w) {
                Ok(d) => assert!((d - dtw_by_enumeration(&a, &b, eff)).abs() < 1e-9),
                Err(_) => assert!(n.abs_diff(m) > eff),
            }
        }
    }

    #[test]
    fn pruned_dtw_is_exact_or_exceeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let (a, b) = (random_series(&mut rng, 24), random_series(&mut rng, 24));
            let w = WarpingWindow::SakoeChiba(rng.random_range(0..24));
            let exact = dtw(&a, &b, w).unwrap();
            let ub = rng.random_range(0.0..2.0 * exact.max(0.1));
            let pruned = dtw_bounded(&a, &b, w, ub).unwrap();
            if exact <= ub {
                assert_eq!(pruned, exact);
            } else {
                assert!(pruned == exact || pruned > ub);
            }
            assert_eq!(dtw_bounded(&a, &b, w, f64::INFINITY).unwrap(), exact);
        }
    }

    #[test]
    fn envelope_examples() {
        let e = keogh_envelope(&[5.0, 5.0, 5.0], WarpingWindow::SakoeChiba(1));
        assert_eq!(e.upper, vec![5.0; 3]);
        assert_eq!(e.lower, vec![5.0; 3]);
        let e = keogh_envelope(&[1.0, 2.0, 3.0], WarpingWindow::SakoeChiba(1));
        assert_eq!(e.upper, vec![2.0, 3.0, 3.0]);
        assert_eq!(e.lower, vec![1.0, 1.0, 2.0]);
        let s = [3.0, -1.0, 4.0, 1.0, -5.0];
        let e = keogh_envelope(&s, WarpingWindow::SakoeChiba(10));
        assert_eq!(e.upper, vec![4.0; 5]);
        assert_eq!(e.lower, vec![-5.0; 5]);
    }

    #[test]
    fn envelope_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(1..40);
            let r = rng.random_range(0..45);
            let s = random_series(&mut rng, n);
            let env = keogh_envelope(&s, WarpingWindow::SakoeChiba(r));
            for i in 0..n {
                let lo = i.saturating_sub(r);
                let hi = (i + r).min(n - 1);
                let win = &s[lo..=hi];
                assert_eq!(env.upper[i], win.iter().cloned().fold(f64::MIN, f64::max));
                assert_eq!(env.lower[i], win.iter().cloned().fold(f64::MAX, f64::min));
            }
            assert!(env.contains(&s));
        }
    }

    #[test]
    fn lower_bound_examples() {
        let env = keogh_envelope(&[0.0, 0.0], WarpingWindow::SakoeChiba(1));
        assert_eq!(lb_keogh(&[3.0, 4.0], &env).unwrap(), 5.0);
        let env = keogh_envelope(&[0.0, 2.0, 0.0], WarpingWindow::SakoeChiba(1));
        assert_eq!(lb_keogh(&[1.0, 1.0, 1.0], &env).unwrap(), 0.0);
        assert!(lb_keogh(&[1.0], &env).is_err());
        assert_eq!(lb_kim(&[1.0, 0.0, 2.0], &[1.0, 5.0, 2.0]), 0.0);
        assert_eq!(lb_kim(&[0.0, 0.0, 0.0], &[3.0, 9.0, 4.0]), 5.0);
    }

    #[test]
    fn nn_search_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cands: Vec<Vec<f64>> = (0..6).map(|_| random_series(&mut rng, 16)).collect();
        let w = WarpingWindow::SakoeChiba(3);
        let envs: Vec<Envelope> = cands.iter().map(|c| keogh_envelope(c, w)).collect();
        assert_eq!(nn_search_cascaded(&cands[3], &cands, &envs, w).unwrap(), (3, 0.0));
        let q = random_series(&mut rng, 16);
        let one = nn_search_cascaded(&q, &cands[..1], &envs[..1], w).unwrap();
        assert_eq!(one, (0, dtw(&q, &cands[0], w).unwrap()));
        let empty: Vec<Vec<f64>> = vec![];
        assert!(nn_search_cascaded(&q, &empty, &[], w).is_err());
    }

    #[test]
    fn nn_search_prefers_lowest_index_on_ties() {
        let c = vec![vec![0.0, 1.0, 0.0], vec![5.0, 5.0, 5.0], vec![0.0, 1.0, 0.0]];
        let w = WarpingWindow::Unconstrained;
        let envs: Vec<Envelope> = c.iter().map(|s| keogh_envelope(s, w)).collect();
        let (i, _) = nn_search_cascaded(&[0.0, 1.0, 0.0], &c, &envs, w).unwrap();
        assert_eq!(i, 0);
        // seed is candidate 2 (exact kim match) but candidate 0 ties
        let c = vec![vec![1.0, 0.0, 1.0], vec![0.0, 9.0, 0.0], vec![1.0, 0.0, 1.0]];
        let envs: Vec<Envelope> = c.iter().map(|s| keogh_envelope(s, w)).collect();
        let (i, d) = nn_search_cascaded(&[1.0, 0.5, 1.0], &c, &envs, w).unwrap();
        assert_eq!((i, d), (0, 0.5));
    }

    #[test]
    fn narrow_envelope_rejected() {
        let c = vec![vec![0.0, 1.0, 0.0, 1.0]];
        let envs = vec![keogh_envelope(&c[0], WarpingWindow::SakoeChiba(1))];
        assert!(nn_search_cascaded(&c[0], &c, &envs, WarpingWindow::SakoeChiba(2)).is_err());
    }

    #[test]
    fn warping_path_is_valid_and_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.random_range(2..12);
            let m = rng.random_range(2..12);
            let (a, b) = (random_series(&mut rng, n), random_series(&mut rng, m));
            let w = WarpingWindow::Unconstrained;
            let path = warping_path(&a, &b, w).unwrap();
            assert_eq!(path[0], (0, 0));
            assert_eq!(*path.last().unwrap(), (n - 1, m - 1));
            for pair in path.windows(2) {
                let (di, dj) = (pair[1].0 - pair[0].0, pair[1].1 - pair[0].1);
                assert!(di <= 1 && dj <= 1 && di + dj >= 1);
            }
            let cost: f64 = path.iter().map(|&(i, j)| (a[i] - b[j]).powi(2)).sum();
            assert!((cost.sqrt() - dtw(&a, &b, w).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn percent_window() {
        assert_eq!(WarpingWindow::from_percent(5.0, 140), WarpingWindow::SakoeChiba(7));
        assert_eq!(WarpingWindow::from_percent(10.0, 128), WarpingWindow::SakoeChiba(13));
        assert_eq!(WarpingWindow::SakoeChiba(50).effective_radius(10), 9);
    }

    proptest! {
        #[test]
        fn dtw_symmetric_and_sandwiched(
            pair in (2usize..40).prop_flat_map(|n| (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
                0usize..n,
            ))
        ) {
            let (a, b, r) = pair;
            let w = WarpingWindow::SakoeChiba(r);
            let d = dtw(&a, &b, w).unwrap();
            prop_assert_eq!(d, dtw(&b, &a, w).unwrap());
            let full = dtw(&a, &b, WarpingWindow::Unconstrained).unwrap();
            let ed = euclidean(&a, &b).unwrap();
            prop_assert!(full <= d + 1e-12);
            prop_assert!(d <= ed + 1e-12);
            prop_assert!((dtw(&a, &b, WarpingWindow::SakoeChiba(0)).unwrap() - ed).abs() < 1e-12);
            prop_assert!(lb_kim(&a, &b) <= d + 1e-12);
            prop_assert!(lb_keogh(&a, &keogh_envelope(&b, w)).unwrap() <= d + 1e-12);
        }
    }
}
