use rayon::prelude::*;

use crate::elastic::{dtw_sq, squared_euclidean, WarpingWindow};
use crate::error::{invalid, Result};
use crate::pq::{Codebook, PQCode};

/// Dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major values, checking symmetry and the diagonal.
    pub fn from_rows(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return invalid(format!("{} values for a {n}x{n} matrix", values.len()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if v.is_nan() || v < 0.0 {
                    return invalid(format!("entry ({i}, {j}) = {v}"));
                }
                if v != values[j * n + i] {
                    return invalid(format!("matrix not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Fills the upper triangle in parallel via `f(i, j)` and mirrors it.
    pub fn build(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| f(i, j)).collect())
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self { n, values }
    }
}

/// Measures supported by [`pairwise_matrix`].
#[derive(Debug, Clone, Copy)]
pub enum PairwiseMeasure<'a> {
    Euclidean,
    Dtw(WarpingWindow),
    /// Symmetric PQ distance; with `lb_replace`, shared codes use the LB_Keogh replacement.
    PqSymmetric { codebook: &'a Codebook, lb_replace: bool },
}

/// Full pairwise matrix; each pair is computed once and mirrored.
pub fn pairwise_matrix<S: AsRef<[f64]> + Sync>(data: &[S], measure: PairwiseMeasure<'_>) -> Result<DistanceMatrix> {
    let n = data.len();
    if n < 2 {
        return invalid(format!("pairwise matrix needs at least 2 series, got {n}"));
    }
    let d = data[0].as_ref().len();
    if data.iter().any(|s| s.as_ref().len() != d) {
        return invalid("pairwise matrix needs equal-length series");
    }
    Ok(match measure {
        PairwiseMeasure::Euclidean => DistanceMatrix::build(n, |i, j| {
            squared_euclidean(data[i].as_ref(), data[j].as_ref()).sqrt()
        }),
        PairwiseMeasure::Dtw(w) => {
            let radius = w.effective_radius(d);
            DistanceMatrix::build(n, |i, j| {
                dtw_sq(data[i].as_ref(), data[j].as_ref(), radius, f64::INFINITY).sqrt()
            })
        }
        PairwiseMeasure::PqSymmetric { codebook, lb_replace } => {
            let codes = codebook.encode_all(data)?;
            pq_matrix(codebook, &codes, lb_replace.then_some(data))?
        }
    })
}

/// Symmetric PQ matrix over pre-computed codes; `originals` enables LB replacement.
pub fn pq_matrix<S: AsRef<[f64]> + Sync>(
    codebook: &Codebook,
    codes: &[PQCode],
    originals: Option<&[S]>,
) -> Result<DistanceMatrix> {
    for c in codes {
        codebook.check_code(c)?;
    }
    let n = codes.len();
    Ok(match originals {
        None => DistanceMatrix::build(n, |i, j| codebook.sym_distance_unchecked(&codes[i], &codes[j])),
        Some(series) => {
            if series.len() != n {
                return invalid("one original series per code is required");
            }
            let segs: Vec<Vec<Vec<f64>>> = series
                .par_iter()
                .map(|s| codebook.segment(s.as_ref()))
                .collect::<Result<_>>()?;
            DistanceMatrix::build(n, |i, j| {
                codebook.sym_distance_lb_unchecked(&codes[i], &codes[j], &segs[i], &segs[j])
            })
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    Single,
    Average,
    Complete,
}

/// One agglomeration step. Leaves are `0..N`; the cluster formed at step `s` is `N + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub cluster_a: usize,
    pub cluster_b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub leaves: usize,
    pub merges: Vec<Merge>,
}

/// Agglomerative clustering with Lance-Williams updates.
///
/// Ties go to the pair with the smallest slot indices, where a cluster's slot is
/// its smallest member.
pub fn agglomerative(matrix: &DistanceMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = matrix.len();
    if n < 2 {
        return invalid(format!("clustering needs at least 2 points, got {n}"));
    }
    let mut d = matrix.values.clone();
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    // nearest[i] = (j, dist) over active j > i
    let mut nearest: Vec<Option<(usize, f64)>> = vec![None; n];
    let row_min = |d: &[f64], active: &[bool], i: usize| -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for j in i + 1..n {
            if active[j] && best.is_none_or(|(_, v)| d[i * n + j] < v) {
                best = Some((j, d[i * n + j]));
            }
        }
        best
    };
    for (i, slot) in nearest.iter_mut().enumerate() {
        *slot = row_min(&d, &active, i);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut pick: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            if let Some((j, v)) = nearest[i] {
                if pick.is_none_or(|(_, _, best)| v < best) {
                    pick = Some((i, j, v));
                }
            }
        }
        let (a, b, height) = pick.expect("at least two active clusters");
        let (na, nb) = (size[a] as f64, size[b] as f64);
        merges.push(Merge {
            cluster_a: id[a].min(id[b]),
            cluster_b: id[a].max(id[b]),
            height,
            size: size[a] + size[b],
        });
        active[b] = false;
        for x in 0..n {
            if !active[x] || x == a {
                continue;
            }
            let (dax, dbx) = (d[a * n + x], d[b * n + x]);
            let v = match linkage {
                Linkage::Single => dax.min(dbx),
                Linkage::Complete => dax.max(dbx),
                Linkage::Average => (na * dax + nb * dbx) / (na + nb),
            };
            d[a * n + x] = v;
            d[x * n + a] = v;
        }
        size[a] += size[b];
        id[a] = n + step;

        for x in 0..n {
            if !active[x] {
                continue;
            }
            let stale = x == a
                || nearest[x].is_some_and(|(j, _)| j == a || j == b);
            if stale {
                nearest[x] = row_min(&d, &active, x);
            } else if x < a {
                let v = d[x * n + a];
                if let Some((j, cur)) = nearest[x] {
                    if v < cur || (v == cur && a < j) {
                        nearest[x] = Some((a, v));
                    }
                }
            }
        }
    }
    Ok(Dendrogram { leaves: n, merges })
}

/// Flat labels in `0..k` obtained by undoing the last `k - 1` merges.
///
/// Labels are numbered by first appearance in point order.
pub fn cut_k(dend: &Dendrogram, k: usize) -> Result<Vec<usize>> {
    let n = dend.leaves;
    if k == 0 || k > n {
        return invalid(format!("k={k} must be in 1..={n}"));
    }
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (step, m) in dend.merges.iter().take(n - k).enumerate() {
        let new = n + step;
        let ra = find(&mut parent, m.cluster_a);
        let rb = find(&mut parent, m.cluster_b);
        parent[ra] = new;
        parent[rb] = new;
    }
    let mut roots: Vec<usize> = Vec::new();
    Ok((0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            match roots.iter().position(|&x| x == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            }
        })
        .collect())
}
