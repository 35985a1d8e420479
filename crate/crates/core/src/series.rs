//! Time-series value types, normalization, resampling and UCR ingestion.

use std::fmt::Write as _;
use std::fs;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, io_err, Error, Result};

/// Standard deviations below this are treated as zero by [`z_normalize`].
pub const EPSILON_STD: f64 = 1e-12;

/// A finite, real-valued sequence of at least two samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return invalid(format!(
                "time series needs at least 2 samples, got {}",
                values.len()
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("non-finite value {} at index {i}", values[i]));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<TimeSeries> for Vec<f64> {
    fn from(s: TimeSeries) -> Self {
        s.0
    }
}

/// Equal-length series with optional string labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledDataset {
    series: Vec<TimeSeries>,
    labels: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(series: Vec<TimeSeries>, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(first) = series.first() {
            let d = first.len();
            if let Some(i) = series.iter().position(|s| s.len() != d) {
                return invalid(format!(
                    "series {i} has length {} but series 0 has length {d}",
                    series[i].len()
                ));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != series.len() {
                return invalid(format!(
                    "{} labels for {} series",
                    labels.len(),
                    series.len()
                ));
            }
        }
        Ok(Self { series, labels })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common series length, or `None` for an empty dataset.
    pub fn series_len(&self) -> Option<usize> {
        self.series.first().map(|s| s.len())
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Returns a dataset holding only the rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            series: indices.iter().map(|&i| self.series[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Applies [`z_normalize`] to every member.
    pub fn z_normalized(&self) -> Self {
        Self {
            series: self.series.iter().map(z_normalize).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Number of distinct labels (0 when unlabeled).
    pub fn class_count(&self) -> usize {
        self.labels.as_ref().map_or(0, |l| {
            let mut distinct: Vec<&str> = l.iter().map(String::as_str).collect();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len()
        })
    }
}

/// Rescales to zero mean and unit population standard deviation.
///
/// Series whose standard deviation is below [`EPSILON_STD`] map to all zeros.
pub fn z_normalize(s: &TimeSeries) -> TimeSeries {
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let var = s.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < EPSILON_STD {
        return TimeSeries(vec![0.0; s.len()]);
    }
    TimeSeries(s.iter().map(|v| (v - mean) / std).collect())
}

/// Linear interpolation of `values` onto `target_len` uniformly spaced points.
///
/// Endpoints are copied exactly and resampling to the input length is the identity.
pub fn resample_linear(values: &[f64], target_len: usize) -> Result<Vec<f64>> {
    if target_len < 2 {
        return invalid(format!("resample target length must be >= 2, got {target_len}"));
    }
    if values.len() < 2 {
        return invalid(format!(
            "cannot resample a sequence of {} samples",
            values.len()
        ));
    }
    let last = values.len() - 1;
    let step_den = (target_len - 1) as f64;
    let out = (0..target_len)
        .map(|k| {
            let pos = (k * last) as f64 / step_den;
            let i0 = pos.floor() as usize;
            let frac = pos - i0 as f64;
            if i0 >= last {
                values[last]
            } else if frac == 0.0 {
                values[i0]
            } else {
                values[i0] * (1.0 - frac) + values[i0 + 1] * frac
            }
        })
        .collect();
    Ok(out)
}

/// Parses a UCR-style TSV file: label, then the series values, tab-separated.
pub fn load_ucr_tsv(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_ucr_tsv(&text, path)
}

pub(crate) fn parse_ucr_tsv(text: &str, path: &Path) -> Result<LabeledDataset> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let label = fields.next().unwrap_or_default().trim().to_string();
        let values = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(line_no, format!("non-numeric value {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(parse_err(
                    line_no,
                    format!("row has {} values, expected {w}", values.len()),
                ))
            }
            _ => {}
        }
        let ts = TimeSeries::new(values).map_err(|e| parse_err(line_no, e.to_string()))?;
        series.push(ts);
        labels.push(label);
    }
    if series.is_empty() {
        return Err(Error::EmptyDataset(path.display().to_string()));
    }
    LabeledDataset::new(series, Some(labels))
}

/// Writes `data` in the UCR TSV layout. Unlabeled rows get the label `0`.
pub fn write_ucr_tsv(path: impl AsRef<Path>, data: &LabeledDataset) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_ucr_tsv(data)).map_err(io_err(path))
}

pub(crate) fn format_ucr_tsv(data: &LabeledDataset) -> String {
    let mut out = String::new();
    for (i, s) in data.series().iter().enumerate() {
        let label = data.labels().map_or("0", |l| l[i].as_str());
        out.push_str(label);
        for v in s.iter() {
            // `{}` on f64 prints the shortest representation that parses back exactly
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_short_and_non_finite() {
        assert!(TimeSeries::new(vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn z_normalize_examples() {
        let z = z_normalize(&ts(&[1.0, 2.0, 3.0]));
        let expect = [-1.224_744_871, 0.0, 1.224_744_871];
        for (a, b) in z.iter().zip(expect) {
            assert!((a - b).abs() < 1e-4);
        }
        assert_eq!(z_normalize(&ts(&[5.0, 5.0, 5.0])).values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn resample_examples() {
        assert_eq!(resample_linear(&[0.0, 1.0], 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(
            resample_linear(&[0.0, 3.0], 4).unwrap(),
            vec![0.0, 1.0, 2.0, 3.0]
        );
        let s = [0.3, -1.2, 7.0, 2.5, 0.0];
        assert_eq!(resample_linear(&s, 5).unwrap(), s.to_vec());
        assert!(resample_linear(&s, 1).is_err());
    }

    #[test]
    fn parse_small_file() {
        let d = parse_ucr_tsv("1\t0.0\t1.0\n2\t1.0\t0.0", Path::new("x")).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.series_len(), Some(2));
        assert_eq!(d.labels().unwrap(), &["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_ucr_tsv("", Path::new("e")),
            Err(Error::EmptyDataset(_))
        ));
        match parse_ucr_tsv("1\t0\t1\n2\t0\t1\t2\n", Path::new("r")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ucr_tsv("1\t0\tabc\n", Path::new("n")),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn mismatched_dataset_rejected() {
        assert!(LabeledDataset::new(vec![ts(&[0.0, 1.0]), ts(&[0.0, 1.0, 2.0])], None).is_err());
        assert!(LabeledDataset::new(vec![ts(&[0.0, 1.0])], Some(vec![])).is_err());
    }

    #[test]
    fn ramp_survives_up_and_down_sampling() {
        let k = 7;
        let ramp: Vec<f64> = (0..k).map(|i| 2.0 * i as f64 - 3.0).collect();
        let up = resample_linear(&ramp, 2 * k).unwrap();
        let back = resample_linear(&up, k).unwrap();
        for (a, b) in back.iter().zip(&ramp) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn z_normalize_idempotent(v in prop::collection::vec(-1e3f64..1e3, 2..64)) {
            let once = z_normalize(&ts(&v));
            let twice = z_normalize(&once);
            for (a, b) in once.iter().zip(twice.iter()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn tsv_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..10)) {
            let series = rows.into_iter().map(|r| ts(&r)).collect::<Vec<_>>();
            let labels = (0..series.len()).map(|i| format!("c{}", i % 3)).collect();
            let data = LabeledDataset::new(series, Some(labels)).unwrap();
            let back = parse_ucr_tsv(&format_ucr_tsv(&data), Path::new("mem")).unwrap();
            prop_assert_eq!(back, data);
        }
    }
}
