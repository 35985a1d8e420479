//! Subcommand implementations. Each `run` writes its report to `out`.

pub mod bench;
pub mod cluster;
pub mod detexify;
pub mod encode;
pub mod gridsearch;
pub mod knn;
pub mod train;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use pqdtw_core::series::load_ucr_tsv;
use pqdtw_core::{LabeledDataset, WarpingWindow};

/// `--window` value: `full`, an absolute radius, or a percentage such as `5%`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WindowSpec {
    #[default]
    Full,
    Radius(usize),
    Percent(f64),
}

impl WindowSpec {
    /// Band for sequences of length `len`.
    pub fn resolve(self, len: usize) -> WarpingWindow {
        match self {
            Self::Full => WarpingWindow::Unconstrained,
            Self::Radius(r) => WarpingWindow::SakoeChiba(r),
            Self::Percent(p) => WarpingWindow::from_percent(p, len),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("full") || s.eq_ignore_ascii_case("none") {
            return Ok(Self::Full);
        }
        if let Some(p) = s.strip_suffix('%') {
            return match p.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(Self::Percent(v)),
                _ => Err(format!("invalid window percentage {s:?}")),
            };
        }
        s.parse::<usize>()
            .map(Self::Radius)
            .map_err(|_| format!("invalid window {s:?}: expected full, a radius or a percentage like 5%"))
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full => f.write_str("full"),
            Self::Radius(r) => write!(f, "{r}"),
            Self::Percent(p) => write!(f, "{p}%"),
        }
    }
}

pub(crate) fn load_dataset(path: &Path, znorm: bool) -> anyhow::Result<LabeledDataset> {
    let data = load_ucr_tsv(path).with_context(|| format!("loading {}", path.display()))?;
    if data.is_empty() {
        bail!("{} contains no series", path.display());
    }
    Ok(if znorm { data.z_normalized() } else { data })
}

pub(crate) fn require_labels<'a>(data: &'a LabeledDataset, path: &Path) -> anyhow::Result<&'a [String]> {
    data.labels()
        .with_context(|| format!("{} has no class labels", path.display()))
}
