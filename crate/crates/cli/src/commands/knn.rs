use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::Args;
use pqdtw_core::mining::{distances_to_all, rank};
use pqdtw_core::pq::{load_codebook, read_codes};
use pqdtw_core::{Codebook, EncodedDataset, LabeledDataset, Measure, TrainSet};

use super::{load_dataset, require_labels, WindowSpec};

/// Ranks reported by `knn`.
pub const TOP_KS: [usize; 4] = [1, 3, 10, 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureName {
    Ed,
    Dtw,
    PqSym,
    PqAsym,
}

impl FromStr for MeasureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ed" | "euclidean" => Ok(Self::Ed),
            "dtw" => Ok(Self::Dtw),
            "pq-sym" | "sym" => Ok(Self::PqSym),
            "pq-asym" | "asym" => Ok(Self::PqAsym),
            _ => Err(format!("unknown measure {s:?}: expected ed, dtw, pq-sym or pq-asym")),
        }
    }
}

impl fmt::Display for MeasureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ed => "ed",
            Self::Dtw => "dtw",
            Self::PqSym => "pq-sym",
            Self::PqAsym => "pq-asym",
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct KnnArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Comma-separated measures: ed, dtw, pq-sym, pq-asym.
    #[arg(long, default_value = "pq-asym", value_delimiter = ',')]
    pub measure: Vec<MeasureName>,
    /// Window for exact DTW: full, a radius, or a percentage of the series length.
    #[arg(short = 'w', long, default_value = "full")]
    pub window: WindowSpec,
    /// Codebook for the PQ measures.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
    /// Pre-encoded training codes; otherwise the training set is encoded on load.
    #[arg(long, requires = "codebook")]
    pub codes: Option<PathBuf>,
    /// Keep series as loaded instead of z-normalizing them.
    #[arg(long)]
    pub no_znorm: bool,
}

/// Top-k accuracies (percent) and query timings for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub measure: String,
    pub top: [f64; 4],
    pub total_ms: f64,
    pub mean_ms: f64,
}

impl AccuracyRow {
    pub const CSV_HEADER: &'static str = "measure,top1,top3,top10,top20,total_ms,mean_ms";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.2},{:.2},{:.2},{:.2},{:.3},{:.4}",
            self.measure, self.top[0], self.top[1], self.top[2], self.top[3], self.total_ms, self.mean_ms
        )
    }
}

/// Classifies every test series against `set` and scores the label-deduplicated ranking.
pub fn evaluate(
    name: &str,
    set: &TrainSet<'_>,
    train_labels: &[String],
    test: &LabeledDataset,
    measure: Measure,
) -> anyhow::Result<AccuracyRow> {
    let Some(truth) = test.labels() else {
        bail!("test set has no labels");
    };
    let mut hits = [0usize; 4];
    let start = Instant::now();
    for (q, label) in test.series().iter().zip(truth) {
        let d = distances_to_all(set, q, measure)?;
        let ranked = rank(&d, train_labels, d.len());
        let labels = ranked.ranked_labels();
        for (h, &k) in hits.iter_mut().zip(&TOP_KS) {
            if labels.iter().take(k).any(|(l, _)| l == label) {
                *h += 1;
            }
        }
    }
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let n = test.len() as f64;
    Ok(AccuracyRow {
        measure: name.to_string(),
        top: hits.map(|h| 100.0 * h as f64 / n),
        total_ms,
        mean_ms: total_ms / n,
    })
}

pub fn run(args: &KnnArgs, out: &mut impl Write) -> anyhow::Result<Vec<AccuracyRow>> {
    let train = load_dataset(&args.train, !args.no_znorm)?;
    let test = load_dataset(&args.test, !args.no_znorm)?;
    let train_labels = require_labels(&train, &args.train)?.to_vec();
    require_labels(&test, &args.test)?;
    let d = train.series_len().unwrap_or(0);

    let mut pq: Option<(Codebook, EncodedDataset)> = None;
    if args.measure.iter().any(|m| matches!(m, MeasureName::PqSym | MeasureName::PqAsym)) {
        let Some(path) = &args.codebook else {
            bail!("PQ measures need --codebook");
        };
        let cb = load_codebook(path).with_context(|| format!("loading codebook {}", path.display()))?;
        let codes = match &args.codes {
            Some(p) => {
                let enc = read_codes(p).with_context(|| format!("loading codes {}", p.display()))?;
                if enc.len() != train.len() {
                    bail!("{} has {} codes for {} training series", p.display(), enc.len(), train.len());
                }
                enc.codes
            }
            None => cb.encode_all(train.series())?,
        };
        let enc = EncodedDataset {
            codes,
            labels: Some(train_labels.clone()),
        };
        pq = Some((cb, enc));
    }

    writeln!(out, "{}", AccuracyRow::CSV_HEADER)?;
    let mut rows = Vec::new();
    for &m in &args.measure {
        let row = match m {
            MeasureName::Ed => evaluate("ed", &TrainSet::Raw(&train), &train_labels, &test, Measure::Euclidean)?,
            MeasureName::Dtw => evaluate(
                &format!("dtw[{}]", args.window),
                &TrainSet::Raw(&train),
                &train_labels,
                &test,
                Measure::Dtw(args.window.resolve(d)),
            )?,
            MeasureName::PqSym | MeasureName::PqAsym => {
                let (cb, enc) = pq.as_ref().expect("loaded above");
                let set = TrainSet::Encoded { codebook: cb, data: enc };
                let measure = if m == MeasureName::PqSym {
                    Measure::PqSymmetric
                } else {
                    Measure::PqAsymmetric
                };
                evaluate(&m.to_string(), &set, &train_labels, &test, measure)?
            }
        };
        writeln!(out, "{}", row.to_csv())?;
        rows.push(row);
    }
    Ok(rows)
}
