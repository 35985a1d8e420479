use crate::elastic::{dtw_sq, squared_euclidean, WarpingWindow};
use crate::error::{invalid, Result};
use crate::pq::{Codebook, EncodedDataset};
use crate::series::LabeledDataset;

/// Distance used to rank training examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Euclidean,
    Dtw(WarpingWindow),
    /// Query encoded, then code-to-code table look-ups.
    PqSymmetric,
    /// Query kept raw; one segment-to-centroid table per query.
    PqAsymmetric,
}

impl Measure {
    pub fn is_pq(&self) -> bool {
        matches!(self, Self::PqSymmetric | Self::PqAsymmetric)
    }
}

/// Reference set for nearest-neighbour queries.
#[derive(Debug, Clone, Copy)]
pub enum TrainSet<'a> {
    Raw(&'a LabeledDataset),
    Encoded {
        codebook: &'a Codebook,
        data: &'a EncodedDataset,
    },
}

impl TrainSet<'_> {
    pub fn len(&self) -> usize {
        match self {
            Self::Raw(d) => d.len(),
            Self::Encoded { data, .. } => data.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn labels(&self) -> Option<&[String]> {
        match self {
            Self::Raw(d) => d.labels(),
            Self::Encoded { data, .. } => data.labels.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub label: String,
    pub distance: f64,
}

/// Nearest training examples, ascending by distance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassificationResult {
    pub neighbors: Vec<Neighbor>,
}

impl ClassificationResult {
    /// Distinct labels in rank order, each with its best distance.
    pub fn ranked_labels(&self) -> Vec<(&str, f64)> {
        let mut seen: Vec<(&str, f64)> = Vec::new();
        for n in &self.neighbors {
            if !seen.iter().any(|(l, _)| *l == n.label) {
                seen.push((&n.label, n.distance));
            }
        }
        seen
    }

    /// Whether `label` is among the first `k` distinct labels.
    pub fn top_k_contains(&self, label: &str, k: usize) -> bool {
        self.ranked_labels().iter().take(k).any(|(l, _)| *l == label)
    }
}

/// Distance from `query` to every training example.
///
/// For `PqAsymmetric` the query table is built once and reused.
pub fn distances_to_all(train: &TrainSet<'_>, query: &[f64], measure: Measure) -> Result<Vec<f64>> {
    match (train, measure) {
        (TrainSet::Raw(data), Measure::Euclidean) => {
            check_raw_len(data, query)?;
            Ok(data
                .series()
                .iter()
                .map(|s| squared_euclidean(s, query).sqrt())
                .collect())
        }
        (TrainSet::Raw(data), Measure::Dtw(w)) => {
            check_raw_len(data, query)?;
            let radius = w.effective_radius(query.len());
            Ok(data
                .series()
                .iter()
                .map(|s| dtw_sq(query, s, radius, f64::INFINITY).sqrt())
                .collect())
        }
        (TrainSet::Encoded { codebook, data }, Measure::PqSymmetric) => {
            let q = codebook.encode(query)?;
            for c in &data.codes {
                codebook.check_code(c)?;
            }
            Ok(data
                .codes
                .iter()
                .map(|c| codebook.sym_distance_unchecked(&q, c))
                .collect())
        }
        (TrainSet::Encoded { codebook, data }, Measure::PqAsymmetric) => {
            let table = codebook.asym_table(query)?;
            for c in &data.codes {
                codebook.check_code(c)?;
            }
            Ok(data.codes.iter().map(|c| table.distance_unchecked(c)).collect())
        }
        (TrainSet::Raw(_), m) => invalid(format!("{m:?} needs an encoded training set")),
        (TrainSet::Encoded { .. }, m) => invalid(format!("{m:?} needs the raw training series")),
    }
}

fn check_raw_len(data: &LabeledDataset, query: &[f64]) -> Result<()> {
    match data.series_len() {
        Some(d) if d != query.len() => invalid(format!(
            "query length {} differs from training length {d}",
            query.len()
        )),
        _ => Ok(()),
    }
}

/// The `k` nearest training examples (ties by training index).
pub fn knn_classify(
    train: &TrainSet<'_>,
    query: &[f64],
    k: usize,
    measure: Measure,
) -> Result<ClassificationResult> {
    let n = train.len();
    if n == 0 {
        return invalid("empty training set");
    }
    if k == 0 || k > n {
        return invalid(format!("k={k} must be in 1..={n}"));
    }
    let Some(labels) = train.labels() else {
        return invalid("training set has no labels");
    };
    let dists = distances_to_all(train, query, measure)?;
    Ok(rank(&dists, labels, k))
}

/// Top `k` of `distances`, ascending, ties broken by index.
pub fn rank(distances: &[f64], labels: &[String], k: usize) -> ClassificationResult {
    let mut order: Vec<usize> = (0..distances.len()).collect();
    let by = |&a: &usize, &b: &usize| distances[a].total_cmp(&distances[b]).then(a.cmp(&b));
    let k = k.min(order.len());
    if k < order.len() && k > 0 {
        order.select_nth_unstable_by(k - 1, by);
        order.truncate(k);
    }
    order.sort_by(by);
    order.truncate(k);
    ClassificationResult {
        neighbors: order
            .into_iter()
            .map(|i| Neighbor {
                index: i,
                label: labels[i].clone(),
                distance: distances[i],
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::dtw;
    use crate::pq::{train, TrainParams};
    use crate::series::TimeSeries;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(n: usize, d: usize, seed: u64) -> LabeledDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = (0..n)
            .map(|_| TimeSeries::new((0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap())
            .collect();
        let labels = (0..n).map(|i| format!("c{}", i % 4)).collect();
        LabeledDataset::new(series, Some(labels)).unwrap()
    }

    #[test]
    fn self_query_raw_measures() {
        let data = dataset(20, 16, 1);
        let set = TrainSet::Raw(&data);
        for m in [Measure::Euclidean, Measure::Dtw(WarpingWindow::SakoeChiba(2))] {
            let r = knn_classify(&set, &data.series()[7], 1, m).unwrap();
            assert_eq!(r.neighbors[0].index, 7);
            assert_eq!(r.neighbors[0].distance, 0.0);
            assert_eq!(r.neighbors[0].label, "c3");
        }
        let all = knn_classify(&set, &data.series()[0], 20, Measure::Euclidean).unwrap();
        assert_eq!(all.neighbors.len(), 20);
        assert!(all.neighbors.windows(2).all(|w| w[0].distance <= w[1].distance));
        assert!(knn_classify(&set, &data.series()[0], 21, Measure::Euclidean).is_err());
        assert!(knn_classify(&set, &data.series()[0], 1, Measure::PqSymmetric).is_err());
    }

    #[test]
    fn pq_self_query_on_centroid_compositions() {
        let data = dataset(30, 24, 2);
        let cb = train(data.series(), &TrainParams::new(3, 30).with_seed(1)).unwrap();
        let codes = cb.encode_all(data.series()).unwrap();
        let enc = EncodedDataset {
            codes: codes.clone(),
            labels: data.labels().map(<[String]>::to_vec),
        };
        let set = TrainSet::Encoded { codebook: &cb, data: &enc };
        for (i, code) in codes.iter().enumerate().take(10) {
            let q = cb.reconstruct(code).unwrap();
            for m in [Measure::PqSymmetric, Measure::PqAsymmetric] {
                let r = knn_classify(&set, &q, 1, m).unwrap();
                assert_eq!(r.neighbors[0].distance, 0.0);
                assert_eq!(r.neighbors[0].label, data.labels().unwrap()[i]);
            }
        }
    }

    #[test]
    fn asymmetric_ranking_matches_direct_aggregation() {
        let data = dataset(40, 24, 3);
        let cb = train(data.series(), &TrainParams::new(3, 8).with_seed(2)).unwrap();
        let enc = EncodedDataset {
            codes: cb.encode_all(data.series()).unwrap(),
            labels: data.labels().map(<[String]>::to_vec),
        };
        let set = TrainSet::Encoded { codebook: &cb, data: &enc };
        for q in dataset(50, 24, 4).series() {
            let got = knn_classify(&set, q, 40, Measure::PqAsymmetric).unwrap();
            let segs = cb.segment(q).unwrap();
            let direct: Vec<f64> = enc
                .codes
                .iter()
                .map(|c| {
                    (0..3)
                        .map(|m| {
                            let d = dtw(&segs[m], cb.centroid(m, usize::from(c.ids[m])), cb.window()).unwrap();
                            d * d
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let oracle = rank(&direct, enc.labels.as_ref().unwrap(), 40);
            let a: Vec<usize> = got.neighbors.iter().map(|n| n.index).collect();
            let b: Vec<usize> = oracle.neighbors.iter().map(|n| n.index).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ranked_labels_dedupe() {
        let labels: Vec<String> = ["a", "b", "a", "c"].iter().map(|s| s.to_string()).collect();
        let r = rank(&[0.5, 0.1, 0.2, 0.1], &labels, 4);
        assert_eq!(r.neighbors.iter().map(|n| n.index).collect::<Vec<_>>(), vec![1, 3, 2, 0]);
        assert_eq!(r.ranked_labels(), vec![("b", 0.1), ("c", 0.1), ("a", 0.2)]);
        assert!(r.top_k_contains("a", 3));
        assert!(!r.top_k_contains("a", 2));
    }
}
