//! DTW Barycenter Averaging and DBA k-means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::elastic::{dtw_sq, keogh_envelope, nn_search_sq, warping_path, Envelope, WarpingWindow};
use crate::error::{invalid, Result};

/// Inner DBA refinement iterations per k-means update.
pub const DEFAULT_DBA_ITERATIONS: usize = 10;
/// Outer Lloyd iterations.
pub const DEFAULT_KMEANS_ITERATIONS: usize = 30;
const CONVERGENCE_TOL: f64 = 1e-9;

/// Result of [`dba_kmeans`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Sum of squared DTW distances to the assigned centroids.
    pub inertia: f64,
    /// Inertia after initialisation and after every Lloyd iteration.
    pub inertia_history: Vec<f64>,
}

fn check_members<S: AsRef<[f64]>>(members: &[S], len: usize) -> Result<()> {
    if let Some(i) = members.iter().position(|m| m.as_ref().len() != len) {
        return invalid(format!(
            "member {i} has length {}, expected {len}",
            members[i].as_ref().len()
        ));
    }
    Ok(())
}

/// One DBA refinement: align every member to `average` and take coordinate means.
fn dba_update<S: AsRef<[f64]>>(members: &[S], average: &[f64], w: WarpingWindow) -> Vec<f64> {
    let mut sums = vec![0.0; average.len()];
    let mut counts = vec![0usize; average.len()];
    // Sequential accumulation keeps the floating-point result independent of thread count.
    for m in members {
        let m = m.as_ref();
        let path = warping_path(average, m, w).expect("lengths validated by caller");
        for (i, j) in path {
            sums[i] += m[j];
            counts[i] += 1;
        }
    }
    sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect()
}

/// DBA average of `members`, refined from `init` for at most `max_iter` rounds.
pub fn dba_barycenter<S: AsRef<[f64]>>(
    members: &[S],
    init: &[f64],
    w: WarpingWindow,
    max_iter: usize,
) -> Result<Vec<f64>> {
    if members.is_empty() {
        return invalid("DBA needs at least one member");
    }
    check_members(members, init.len())?;
    if init.is_empty() {
        return invalid("DBA needs a non-empty initial average");
    }
    let mut average = init.to_vec();
    for _ in 0..max_iter {
        let next = dba_update(members, &average, w);
        let change = next
            .iter()
            .zip(&average)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        average = next;
        if change < CONVERGENCE_TOL {
            break;
        }
    }
    Ok(average)
}

/// Settings for [`dba_kmeans`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub clusters: usize,
    pub window: WarpingWindow,
    pub max_iter: usize,
    pub dba_iter: usize,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(clusters: usize, window: WarpingWindow, seed: u64) -> Self {
        Self {
            clusters,
            window,
            max_iter: DEFAULT_KMEANS_ITERATIONS,
            dba_iter: DEFAULT_DBA_ITERATIONS,
            seed,
        }
    }
}

/// Nearest centroid (and squared distance) for every input.
fn assign<S: AsRef<[f64]> + Sync>(
    data: &[S],
    centroids: &[Vec<f64>],
    w: WarpingWindow,
) -> Vec<(usize, f64)> {
    let len = centroids[0].len();
    let envelopes: Vec<Envelope> = centroids.iter().map(|c| keogh_envelope(c, w)).collect();
    let radius = w.effective_radius(len);
    data.par_iter()
        .map(|x| nn_search_sq(x.as_ref(), centroids, &envelopes, radius))
        .collect()
}

/// k-means++ seeding with squared-DTW weights.
fn seed_centroids<S: AsRef<[f64]> + Sync>(
    data: &[S],
    k: usize,
    w: WarpingWindow,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let len = data[0].as_ref().len();
    let radius = w.effective_radius(len);
    let first = rng.random_range(0..data.len());
    let mut centroids = vec![data[first].as_ref().to_vec()];
    let mut nearest: Vec<f64> = data
        .par_iter()
        .map(|x| dtw_sq(x.as_ref(), &centroids[0], radius, f64::INFINITY))
        .collect();
    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc >= target {
                    chosen = Some(i);
                    break;
                }
            }
            chosen.unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap_or(0))
        } else {
            // Every point already coincides with a centroid.
            rng.random_range(0..data.len())
        };
        let c = data[pick].as_ref().to_vec();
        nearest
            .par_iter_mut()
            .zip(data.par_iter())
            .for_each(|(best, x)| {
                let d = dtw_sq(x.as_ref(), &c, radius, *best);
                if d < *best {
                    *best = d;
                }
            });
        centroids.push(c);
    }
    centroids
}

/// Lloyd k-means with DTW assignment and DBA centroid updates.
pub fn dba_kmeans<S: AsRef<[f64]> + Sync>(data: &[S], config: &KMeansConfig) -> Result<ClusterModel> {
    let k = config.clusters;
    if k == 0 {
        return invalid("k-means needs at least one cluster");
    }
    if data.len() < k {
        return invalid(format!("{} series cannot form {k} clusters", data.len()));
    }
    let len = data[0].as_ref().len();
    if len == 0 {
        return invalid("k-means over empty series");
    }
    check_members(data, len)?;
    let w = config.window;

    let mut centroids = if k == data.len() {
        data.iter().map(|x| x.as_ref().to_vec()).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        seed_centroids(data, k, w, &mut rng)
    };

    let mut nearest = assign(data, &centroids, w);
    let mut inertia: f64 = nearest.iter().map(|&(_, d)| d).sum();
    let mut history = vec![inertia];

    if k < data.len() {
        for _ in 0..config.max_iter {
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (i, &(c, _)) in nearest.iter().enumerate() {
                members[c].push(i);
            }
            let updated: Vec<Option<Vec<f64>>> = members
                .par_iter()
                .zip(centroids.par_iter())
                .map(|(idx, centroid)| {
                    if idx.is_empty() {
                        return None;
                    }
                    let group: Vec<&[f64]> = idx.iter().map(|&i| data[i].as_ref()).collect();
                    Some(
                        dba_barycenter(&group, centroid, w, config.dba_iter)
                            .expect("cluster members validated"),
                    )
                })
                .collect();
            let mut taken = vec![false; data.len()];
            for (c, update) in updated.into_iter().enumerate() {
                match update {
                    Some(avg) => centroids[c] = avg,
                    None => {
                        // Re-seed an empty cluster with the worst-fit point not yet used.
                        let far = (0..data.len())
                            .filter(|&i| !taken[i])
                            .fold(None, |best: Option<usize>, i| match best {
                                Some(b) if nearest[b].1 >= nearest[i].1 => Some(b),
                                _ => Some(i),
                            })
                            .unwrap_or(0);
                        taken[far] = true;
                        centroids[c] = data[far].as_ref().to_vec();
                    }
                }
            }
            let next = assign(data, &centroids, w);
            let unchanged = next.iter().zip(&nearest).all(|(a, b)| a.0 == b.0);
            nearest = next;
            inertia = nearest.iter().map(|&(_, d)| d).sum();
            history.push(inertia);
            if unchanged {
                break;
            }
        }
    }

    Ok(ClusterModel {
        centroids,
        assignments: nearest.iter().map(|&(c, _)| c).collect(),
        inertia,
        inertia_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::dtw;
    use rand::Rng;

    const W: WarpingWindow = WarpingWindow::Unconstrained;

    fn walks(n: usize, len: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut v = 0.0;
                (0..len)
                    .map(|_| {
                        v += rng.random_range(-1.0..1.0);
                        v
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn barycenter_examples() {
        let x = vec![0.0, 3.0, 1.0, 2.0];
        assert_eq!(dba_barycenter(&[x.clone(), x.clone()], &x, W, 10).unwrap(), x);
        assert_eq!(dba_barycenter(std::slice::from_ref(&x), &[0.0; 4], W, 10).unwrap(), x);
        let avg = dba_barycenter(&[vec![0.0, 0.0], vec![2.0, 2.0]], &[0.0, 0.0], W, 1).unwrap();
        assert_eq!(avg, vec![1.0, 1.0]);
        let empty: Vec<Vec<f64>> = vec![];
        assert!(dba_barycenter(&empty, &[0.0, 0.0], W, 3).is_err());
        assert!(dba_barycenter(&[vec![0.0, 1.0]], &[0.0, 0.0, 0.0], W, 3).is_err());
    }

    #[test]
    fn k_equals_n_is_lossless() {
        let data = walks(9, 12, 1);
        let model = dba_kmeans(&data, &KMeansConfig::new(9, W, 0)).unwrap();
        assert_eq!(model.centroids, data);
        assert_eq!(model.assignments, (0..9).collect::<Vec<_>>());
        assert_eq!(model.inertia, 0.0);
    }

    #[test]
    fn single_cluster_is_barycenter() {
        let data = walks(12, 10, 2);
        let cfg = KMeansConfig::new(1, W, 4);
        let model = dba_kmeans(&data, &cfg).unwrap();
        let matches = data.iter().any(|init| {
            dba_barycenter(&data, init, W, cfg.dba_iter).unwrap() == model.centroids[0]
        });
        assert!(matches);
        assert!(model.assignments.iter().all(|&a| a == 0));
    }

    #[test]
    fn separated_groups_recovered() {
        let a = vec![0.0, 1.0, 2.0, 1.0, 0.0];
        let b = vec![5.0, 5.0, -3.0, 5.0, 5.0];
        let data: Vec<Vec<f64>> = (0..10).map(|i| if i % 2 == 0 { a.clone() } else { b.clone() }).collect();
        let model = dba_kmeans(&data, &KMeansConfig::new(2, W, 17)).unwrap();
        for i in 0..10 {
            assert_eq!(model.assignments[i] == model.assignments[0], i % 2 == 0);
        }
        assert_eq!(model.inertia, 0.0);
    }

    #[test]
    fn inertia_non_increasing_and_seeded() {
        let data = walks(60, 16, 3);
        let cfg = KMeansConfig::new(5, WarpingWindow::SakoeChiba(3), 99);
        let model = dba_kmeans(&data, &cfg).unwrap();
        for pair in model.inertia_history.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-12), "{pair:?}");
        }
        for (x, &c) in data.iter().zip(&model.assignments) {
            let d = dtw(x, &model.centroids[c], cfg.window).unwrap();
            for other in &model.centroids {
                assert!(d <= dtw(x, other, cfg.window).unwrap());
            }
        }
        assert!(model.centroids.iter().all(|c| c.len() == 16));
        let again = dba_kmeans(&data, &cfg).unwrap();
        assert_eq!(again, model);
    }

    #[test]
    fn too_few_points() {
        assert!(dba_kmeans(&walks(2, 5, 0), &KMeansConfig::new(3, W, 0)).is_err());
    }
}
