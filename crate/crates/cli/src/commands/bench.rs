use std::io::Write;
use std::time::Instant;

use clap::Args;
use pqdtw_core::mining::{pairwise_matrix, pq_matrix, PairwiseMeasure};
use pqdtw_core::{train, TrainParams, WarpingWindow};

use super::train::resolve_segments;
use crate::synth::random_walks;

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Number of random walks.
    #[arg(short = 'n', long, default_value_t = 100)]
    pub series: usize,
    /// Comma-separated series lengths; one row per length.
    #[arg(short = 'l', long, default_value = "1600", value_delimiter = ',')]
    pub length: Vec<usize>,
    /// Subspace size as a percentage of the length.
    #[arg(long, default_value_t = 20.0)]
    pub subspace_pct: f64,
    #[arg(short = 'k', long, default_value_t = 256)]
    pub clusters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for both timings (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub length: usize,
    pub series: usize,
    pub segments: usize,
    pub clusters: usize,
    pub train_secs: f64,
    pub dtw_secs: f64,
    pub encode_secs: f64,
    pub lookup_secs: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "length,n,M,K,train_s,dtw_s,encode_s,lookup_s,pq_total_s,speedup";

    /// Encoding plus table look-ups; training is amortized and excluded.
    pub fn pq_secs(&self) -> f64 {
        self.encode_secs + self.lookup_secs
    }

    pub fn speedup(&self) -> f64 {
        self.dtw_secs / self.pq_secs()
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{:.3},{:.3},{:.4},{:.3},{:.2}",
            self.length,
            self.series,
            self.segments,
            self.clusters,
            self.train_secs,
            self.dtw_secs,
            self.encode_secs,
            self.lookup_secs,
            self.pq_secs(),
            self.speedup()
        )
    }
}

/// Times the full pairwise matrix under unconstrained DTW and under PQ.
///
/// The codebook is trained on `clusters` further walks from an independent
/// seed, without pre-alignment, so every one of the `K` centroids is a
/// genuine walk segment and encoding does real nearest-centroid searches.
pub fn bench_length(
    series: usize,
    length: usize,
    subspace_pct: f64,
    clusters: usize,
    seed: u64,
) -> anyhow::Result<BenchRow> {
    let walks = random_walks(series, length, seed);
    let segments = resolve_segments(None, Some(subspace_pct))?;
    let params = TrainParams::new(segments, clusters)
        .with_tail(0)
        .with_window(WarpingWindow::Unconstrained)
        .with_seed(seed);

    let start = Instant::now();
    let cb = train(&random_walks(clusters, length, seed.wrapping_add(1)), &params)?;
    let train_secs = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let exact = pairwise_matrix(&walks, PairwiseMeasure::Dtw(WarpingWindow::Unconstrained))?;
    let dtw_secs = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let codes = cb.encode_all(&walks)?;
    let encode_secs = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let approx = pq_matrix::<Vec<f64>>(&cb, &codes, None)?;
    let lookup_secs = start.elapsed().as_secs_f64();
    debug_assert_eq!(exact.len(), approx.len());

    Ok(BenchRow {
        length,
        series,
        segments,
        clusters: cb.clusters(),
        train_secs,
        dtw_secs,
        encode_secs,
        lookup_secs,
    })
}

pub fn run(args: &BenchArgs, out: &mut impl Write) -> anyhow::Result<Vec<BenchRow>> {
    let work = || -> anyhow::Result<Vec<BenchRow>> {
        args.length
            .iter()
            .map(|&len| bench_length(args.series, len, args.subspace_pct, args.clusters, args.seed))
            .collect()
    };
    let rows = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(work)?,
        None => work()?,
    };
    writeln!(out, "{}", BenchRow::CSV_HEADER)?;
    for r in &rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(rows)
}
