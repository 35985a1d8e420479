use std::io::Write;
use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use pqdtw_core::mining::knn_classify;
use pqdtw_core::{train, EncodedDataset, LabeledDataset, Measure, TrainSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::train::params_for;
use super::{load_dataset, require_labels, WindowSpec};

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "2,4,8", value_delimiter = ',')]
    pub segments: Vec<usize>,
    #[arg(long, default_value = "0,2,4", value_delimiter = ',')]
    pub tails: Vec<usize>,
    #[arg(long, default_value = "2,3", value_delimiter = ',')]
    pub levels: Vec<usize>,
    #[arg(long, default_value = "full,10%", value_delimiter = ',')]
    pub windows: Vec<WindowSpec>,
    #[arg(short = 'k', long, default_value_t = 256)]
    pub clusters: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep series as loaded instead of z-normalizing them.
    #[arg(long)]
    pub no_znorm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub segments: usize,
    pub tail: usize,
    pub level: usize,
    pub window: WindowSpec,
}

/// Seeded `k`-fold partition of `0..n`.
pub fn folds(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = vec![Vec::new(); k];
    for (i, v) in idx.into_iter().enumerate() {
        out[i % k].push(v);
    }
    for f in &mut out {
        f.sort_unstable();
    }
    out
}

/// Mean 1NN accuracy (PQ asymmetric) over the folds.
pub fn cross_validate(
    data: &LabeledDataset,
    point: GridPoint,
    clusters: usize,
    folds_idx: &[Vec<usize>],
    seed: u64,
) -> anyhow::Result<f64> {
    let d = data.series_len().unwrap_or(0);
    let mut correct = 0usize;
    for (f, held) in folds_idx.iter().enumerate() {
        let rest: Vec<usize> = folds_idx
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != f)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let tr = data.subset(&rest);
        let te = data.subset(held);
        let params = params_for(d, point.segments, clusters, Some(point.tail), point.level, point.window, seed);
        let cb = train(tr.series(), &params)?;
        let enc = EncodedDataset {
            codes: cb.encode_all(tr.series())?,
            labels: tr.labels().map(<[String]>::to_vec),
        };
        let set = TrainSet::Encoded { codebook: &cb, data: &enc };
        for (q, label) in te.series().iter().zip(te.labels().unwrap_or_default()) {
            let r = knn_classify(&set, q, 1, Measure::PqAsymmetric)?;
            if r.neighbors[0].label == *label {
                correct += 1;
            }
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

pub fn run(args: &GridArgs, out: &mut impl Write) -> anyhow::Result<Option<(GridPoint, f64)>> {
    let data = load_dataset(&args.input, !args.no_znorm)?;
    require_labels(&data, &args.input)?;
    if args.folds < 2 || args.folds > data.len() {
        bail!("--folds must be in 2..={}", data.len());
    }
    let parts = folds(data.len(), args.folds, args.seed);
    writeln!(out, "M,t,J,window,accuracy")?;
    let mut best: Option<(GridPoint, f64)> = None;
    for &segments in &args.segments {
        for &tail in &args.tails {
            // the level only matters with pre-alignment
            let levels: &[usize] = if tail == 0 { &args.levels[..1.min(args.levels.len())] } else { &args.levels };
            for &level in levels {
                for &window in &args.windows {
                    let point = GridPoint { segments, tail, level, window };
                    match cross_validate(&data, point, args.clusters, &parts, args.seed) {
                        Ok(acc) => {
                            writeln!(out, "{segments},{tail},{level},{window},{acc:.4}")?;
                            if best.is_none_or(|(_, b)| acc > b) {
                                best = Some((point, acc));
                            }
                        }
                        Err(e) => writeln!(out, "{segments},{tail},{level},{window},skipped: {e}")?,
                    }
                }
            }
        }
    }
    match best {
        Some((p, acc)) => writeln!(
            out,
            "best: M={} t={} J={} window={} accuracy={acc:.4}",
            p.segments, p.tail, p.level, p.window
        )?,
        None => writeln!(out, "no valid configuration")?,
    }
    Ok(best)
}
