//! A trained sketch classifier packed into one JSON file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, io_err, Error, Result};
use crate::mining::{distances_to_all, rank, Measure, TrainSet};
use crate::pq::{Codebook, EncodedDataset, PQCode};
use crate::series::{z_normalize, TimeSeries};
use crate::stroke::{preprocess, Stroke};

pub const BUNDLE_VERSION: u32 = 1;

/// Look-up mode used at query time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    #[default]
    Asym,
    Sym,
}

impl QueryMode {
    pub fn measure(self) -> Measure {
        match self {
            Self::Asym => Measure::PqAsymmetric,
            Self::Sym => Measure::PqSymmetric,
        }
    }
}

impl std::str::FromStr for QueryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asym" => Ok(Self::Asym),
            "sym" => Ok(Self::Sym),
            other => invalid(format!("unknown mode {other:?}, expected asym or sym")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub symbol: String,
    pub score: f64,
}

/// Codebook, encoded training sketches and symbol metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBundle {
    pub version: u32,
    pub codebook: Codebook,
    pub codes: Vec<PQCode>,
    pub labels: Vec<String>,
    /// Symbol id to display name.
    #[serde(default)]
    pub symbols: BTreeMap<String, String>,
    pub resample_points: usize,
    #[serde(default)]
    pub z_normalize: bool,
}

impl ModelBundle {
    pub fn new(
        codebook: Codebook,
        data: EncodedDataset,
        symbols: BTreeMap<String, String>,
        resample_points: usize,
        z_normalize: bool,
    ) -> Result<Self> {
        let Some(labels) = data.labels else {
            return invalid("bundle needs labelled training codes");
        };
        let bundle = Self {
            version: BUNDLE_VERSION,
            codebook,
            codes: data.codes,
            labels,
            symbols,
            resample_points,
            z_normalize,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    fn validate(&self) -> Result<()> {
        if self.version != BUNDLE_VERSION {
            return Err(Error::Version {
                found: self.version,
                expected: BUNDLE_VERSION,
            });
        }
        if self.codes.is_empty() {
            return Err(Error::EmptyDataset("bundle has no training codes".into()));
        }
        if self.codes.len() != self.labels.len() {
            return invalid(format!(
                "{} codes but {} labels",
                self.codes.len(),
                self.labels.len()
            ));
        }
        if self.resample_points != self.codebook.series_len() + 1 {
            return invalid(format!(
                "resample_points={} does not match codebook length {}",
                self.resample_points,
                self.codebook.series_len()
            ));
        }
        self.codes.iter().try_for_each(|c| self.codebook.check_code(c))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: Self = serde_json::from_str(text)?;
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(io_err(path))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    /// Display name for a symbol id, falling back to the id itself.
    pub fn display_name<'a>(&'a self, id: &'a str) -> &'a str {
        self.symbols.get(id).map_or(id, String::as_str)
    }

    /// Distinct symbol ids that appear in the training set, sorted.
    pub fn symbol_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// The angle series a sketch is compared as.
    pub fn featurize(&self, strokes: &[Stroke]) -> Result<TimeSeries> {
        let s = preprocess(strokes, self.resample_points)?;
        Ok(if self.z_normalize { z_normalize(&s) } else { s })
    }

    /// Up to `k` distinct symbols, best first.
    pub fn classify(&self, strokes: &[Stroke], k: usize, mode: QueryMode) -> Result<Vec<Candidate>> {
        if k == 0 {
            return invalid("k must be positive");
        }
        let query = self.featurize(strokes)?;
        self.classify_series(&query, k, mode)
    }

    pub fn classify_series(&self, query: &[f64], k: usize, mode: QueryMode) -> Result<Vec<Candidate>> {
        let data = EncodedDataset {
            codes: self.codes.clone(),
            labels: None,
        };
        let set = TrainSet::Encoded {
            codebook: &self.codebook,
            data: &data,
        };
        let dists = distances_to_all(&set, query, mode.measure())?;
        let ranked = rank(&dists, &self.labels, dists.len());
        Ok(ranked
            .ranked_labels()
            .into_iter()
            .take(k)
            .map(|(symbol, score)| Candidate {
                symbol: symbol.to_string(),
                score,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pq::{train, TrainParams};
    use crate::stroke::Point;

    fn sketch(kind: usize, jitter: f64) -> Vec<Stroke> {
        let pts: Vec<Point> = (0..40)
            .map(|i| {
                let u = i as f64 / 39.0;
                let (x, y) = match kind {
                    0 => (u, jitter * u * (1.0 - u)),
                    1 => ((u * 6.0).cos(), (u * 6.0).sin() + jitter * u),
                    _ => (u, (u * 12.0).sin().abs() + jitter * u),
                };
                Point::new(x, y, i as f64)
            })
            .collect();
        vec![Stroke::new(pts).unwrap()]
    }

    fn bundle() -> ModelBundle {
        let mut series = Vec::new();
        let mut labels = Vec::new();
        for kind in 0..3 {
            for j in 0..6 {
                series.push(preprocess(&sketch(kind, 0.05 * j as f64), 17).unwrap());
                labels.push(format!("s{kind}"));
            }
        }
        let cb = train(&series, &TrainParams::new(2, 8).with_tail(1).with_level(2).with_seed(3)).unwrap();
        let data = EncodedDataset {
            codes: cb.encode_all(&series).unwrap(),
            labels: Some(labels),
        };
        let symbols = [("s0".to_string(), "line".to_string())].into_iter().collect();
        ModelBundle::new(cb, data, symbols, 17, false).unwrap()
    }

    #[test]
    fn classifies_training_shapes() {
        let b = bundle();
        for kind in 0..3 {
            for mode in [QueryMode::Asym, QueryMode::Sym] {
                let c = b.classify(&sketch(kind, 0.12), 3, mode).unwrap();
                assert_eq!(c[0].symbol, format!("s{kind}"));
                assert!(c.windows(2).all(|w| w[0].score <= w[1].score));
                let mut names: Vec<_> = c.iter().map(|c| c.symbol.clone()).collect();
                names.dedup();
                assert_eq!(names.len(), c.len());
            }
        }
        assert_eq!(b.classify(&sketch(0, 0.0), 20, QueryMode::Asym).unwrap().len(), 3);
        assert!(b.classify(&sketch(0, 0.0), 0, QueryMode::Asym).is_err());
        assert_eq!(b.display_name("s0"), "line");
        assert_eq!(b.display_name("s1"), "s1");
        assert_eq!(b.symbol_ids(), vec!["s0", "s1", "s2"]);
    }

    #[test]
    fn round_trip_and_validation() {
        let b = bundle();
        let text = b.to_json().unwrap();
        let back = ModelBundle::from_json(&text).unwrap();
        assert_eq!(back.codes, b.codes);
        assert_eq!(back.labels, b.labels);
        let q = sketch(1, 0.3);
        assert_eq!(
            back.classify(&q, 3, QueryMode::Asym).unwrap(),
            b.classify(&q, 3, QueryMode::Asym).unwrap()
        );
        let mut bad: serde_json::Value = serde_json::from_str(&text).unwrap();
        bad["resample_points"] = 20.into();
        assert!(ModelBundle::from_json(&bad.to_string()).is_err());
        let mut bad: serde_json::Value = serde_json::from_str(&text).unwrap();
        bad["labels"].as_array_mut().unwrap().pop();
        assert!(ModelBundle::from_json(&bad.to_string()).is_err());
        assert!("fast".parse::<QueryMode>().is_err());
        assert_eq!("sym".parse::<QueryMode>().unwrap(), QueryMode::Sym);
    }
}
