use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use pqdtw_core::pq::{default_tail, save_codebook, write_codes, DEFAULT_CLUSTERS, DEFAULT_WAVELET_LEVEL};
use pqdtw_core::{train, Codebook, EncodedDataset, ModelBundle, TrainParams};

use super::{load_dataset, WindowSpec};

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Training set (UCR tab-separated: label then values).
    pub input: PathBuf,
    /// Number of subspaces M.
    #[arg(short = 'm', long, conflicts_with = "subspace_pct")]
    pub segments: Option<usize>,
    /// Subspace size as a percentage of the series length (M = 100 / pct).
    #[arg(long)]
    pub subspace_pct: Option<f64>,
    /// Centroids per subspace K (clamped to the number of series).
    #[arg(short = 'k', long, default_value_t = DEFAULT_CLUSTERS)]
    pub clusters: usize,
    /// Pre-alignment tail t; 0 disables pre-alignment. Defaults to a quarter of D/M.
    #[arg(short = 't', long)]
    pub tail: Option<usize>,
    /// Wavelet level J.
    #[arg(short = 'j', long, default_value_t = DEFAULT_WAVELET_LEVEL)]
    pub level: usize,
    /// Quantization window: full, a radius, or a percentage of the segment length.
    #[arg(short = 'w', long, default_value = "full")]
    pub window: WindowSpec,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep series as loaded instead of z-normalizing them.
    #[arg(long)]
    pub no_znorm: bool,
    #[arg(long, default_value = "codebook.json")]
    pub codebook: PathBuf,
    #[arg(long, default_value = "codes.csv")]
    pub codes: PathBuf,
    /// Also write a classifier bundle for `serve`.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// JSON object mapping symbol ids to display names, stored in the bundle.
    #[arg(long, requires = "bundle")]
    pub symbols: Option<PathBuf>,
}

/// Resolves M from `--segments` or `--subspace-pct`.
pub fn resolve_segments(segments: Option<usize>, pct: Option<f64>) -> anyhow::Result<usize> {
    match (segments, pct) {
        (Some(m), _) => Ok(m),
        (None, Some(p)) if p > 0.0 && p <= 100.0 => Ok(((100.0 / p).round() as usize).max(1)),
        (None, Some(p)) => bail!("--subspace-pct must be in (0, 100], got {p}"),
        (None, None) => bail!("one of --segments or --subspace-pct is required"),
    }
}

/// Training parameters for series of length `d`, with the window resolved against the segment length.
pub fn params_for(
    d: usize,
    segments: usize,
    clusters: usize,
    tail: Option<usize>,
    level: usize,
    window: WindowSpec,
    seed: u64,
) -> TrainParams {
    let tail = tail.unwrap_or_else(|| default_tail(d, segments));
    let seg_len = d / segments.max(1) + tail;
    TrainParams::new(segments, clusters)
        .with_tail(tail)
        .with_level(level)
        .with_window(window.resolve(seg_len))
        .with_seed(seed)
}

pub fn run(args: &TrainArgs, out: &mut impl Write) -> anyhow::Result<Codebook> {
    let data = load_dataset(&args.input, !args.no_znorm)?;
    let d = data.series_len().unwrap_or(0);
    let m = resolve_segments(args.segments, args.subspace_pct)?;
    let params = params_for(d, m, args.clusters, args.tail, args.level, args.window, args.seed);
    if params.clusters > data.len() {
        writeln!(
            out,
            "note: K={} exceeds the {} training series; clamped to K={}",
            params.clusters,
            data.len(),
            data.len()
        )?;
    }
    let cb = train(data.series(), &params)
        .with_context(|| format!("training on {}", args.input.display()))?;
    let encoded = EncodedDataset {
        codes: cb.encode_all(data.series())?,
        labels: data.labels().map(<[String]>::to_vec),
    };
    save_codebook(&cb, &args.codebook)
        .with_context(|| format!("writing {}", args.codebook.display()))?;
    write_codes(&args.codes, &encoded).with_context(|| format!("writing {}", args.codes.display()))?;
    if let Some(path) = &args.bundle {
        let symbols: BTreeMap<String, String> = match &args.symbols {
            Some(p) => serde_json::from_str(
                &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            )
            .with_context(|| format!("parsing {}", p.display()))?,
            None => BTreeMap::new(),
        };
        let bundle = ModelBundle::new(cb.clone(), encoded, symbols, d + 1, !args.no_znorm)
            .with_context(|| format!("building bundle from {}", args.input.display()))?;
        bundle.save(path).with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "bundle: {}", path.display())?;
    }
    writeln!(
        out,
        "trained M={} K={} t={} J={} window={:?} on {} series",
        cb.segments(),
        cb.clusters(),
        cb.tail(),
        cb.level(),
        cb.window(),
        data.len()
    )?;
    writeln!(out, "{}", cb.memory_report(data.len()))?;
    Ok(cb)
}
