use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use pqdtw_core::mining::{adjusted_rand_index, agglomerative, cut_k, pairwise_matrix, rand_index, Linkage, PairwiseMeasure};
use pqdtw_core::pq::load_codebook;

use super::knn::MeasureName;
use super::{load_dataset, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkageArg {
    Single,
    Average,
    Complete,
}

impl From<LinkageArg> for Linkage {
    fn from(l: LinkageArg) -> Self {
        match l {
            LinkageArg::Single => Linkage::Single,
            LinkageArg::Average => Linkage::Average,
            LinkageArg::Complete => Linkage::Complete,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    pub input: PathBuf,
    /// ed, dtw or pq-sym.
    #[arg(long, default_value = "dtw")]
    pub measure: MeasureName,
    #[arg(long, value_enum, default_value_t = LinkageArg::Complete)]
    pub linkage: LinkageArg,
    /// Number of clusters; defaults to the number of distinct labels.
    #[arg(short = 'k', long)]
    pub clusters: Option<usize>,
    #[arg(short = 'w', long, default_value = "full")]
    pub window: WindowSpec,
    #[arg(long)]
    pub codebook: Option<PathBuf>,
    /// Replace zero shared-code terms with the LB_Keogh bound (pq-sym only).
    #[arg(long)]
    pub lb_replace: bool,
    /// Keep series as loaded instead of z-normalizing them.
    #[arg(long)]
    pub no_znorm: bool,
    /// Cluster assignments as CSV: index,label,cluster.
    #[arg(short, long, default_value = "clusters.csv")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub assignments: Vec<usize>,
    pub rand_index: Option<f64>,
    pub adjusted_rand_index: Option<f64>,
}

pub fn run(args: &ClusterArgs, out: &mut impl Write) -> anyhow::Result<ClusterReport> {
    let data = load_dataset(&args.input, !args.no_znorm)?;
    if data.len() < 2 {
        bail!("{} needs at least 2 series to cluster, found {}", args.input.display(), data.len());
    }
    let d = data.series_len().unwrap_or(0);
    let codebook = match (args.measure, &args.codebook) {
        (MeasureName::PqSym, Some(p)) => {
            Some(load_codebook(p).with_context(|| format!("loading codebook {}", p.display()))?)
        }
        (MeasureName::PqSym, None) => bail!("--measure pq-sym needs --codebook"),
        (MeasureName::PqAsym, _) => bail!("clustering uses symmetric distances; use pq-sym"),
        _ => None,
    };
    let measure = match args.measure {
        MeasureName::Ed => PairwiseMeasure::Euclidean,
        MeasureName::Dtw => PairwiseMeasure::Dtw(args.window.resolve(d)),
        _ => PairwiseMeasure::PqSymmetric {
            codebook: codebook.as_ref().expect("loaded above"),
            lb_replace: args.lb_replace,
        },
    };
    let k = match args.clusters {
        Some(k) => k,
        None if data.labels().is_some() => data.class_count(),
        None => bail!("{} has no labels; pass --clusters", args.input.display()),
    };
    let matrix = pairwise_matrix(data.series(), measure)?;
    let dendrogram = agglomerative(&matrix, args.linkage.into())?;
    let assignments = cut_k(&dendrogram, k)?;

    let mut csv = String::from("index,label,cluster\n");
    for (i, c) in assignments.iter().enumerate() {
        let label = data.labels().map_or("", |l| l[i].as_str());
        let _ = writeln!(csv, "{i},{label},{c}");
    }
    fs::write(&args.output, csv).with_context(|| format!("writing {}", args.output.display()))?;

    let (ri, ari) = match data.labels() {
        Some(truth) => (
            Some(rand_index(&assignments, truth)?),
            Some(adjusted_rand_index(&assignments, truth)?),
        ),
        None => (None, None),
    };
    writeln!(out, "clusters: {k}, linkage: {:?}, measure: {}", args.linkage, args.measure)?;
    if let (Some(ri), Some(ari)) = (ri, ari) {
        writeln!(out, "RI={ri:.4} ARI={ari:.4}")?;
    }
    Ok(ClusterReport {
        assignments,
        rand_index: ri,
        adjusted_rand_index: ari,
    })
}
