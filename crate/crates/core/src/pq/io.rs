use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Codebook, EncodedDataset, PQCode};
use crate::elastic::{Envelope, WarpingWindow};
use crate::error::{io_err, Error, Result};

pub const CODEBOOK_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct EnvelopeRecord {
    upper: Vec<f64>,
    lower: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CodebookFile {
    version: u32,
    d: usize,
    m: usize,
    k: usize,
    window_radius: Option<usize>,
    tail: usize,
    wavelet_level: usize,
    segment_length: usize,
    centroids: Vec<Vec<Vec<f64>>>,
    lut: Vec<Vec<Vec<f64>>>,
    envelopes: Vec<Vec<EnvelopeRecord>>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u32,
}

impl From<&Codebook> for CodebookFile {
    fn from(cb: &Codebook) -> Self {
        let k = cb.clusters;
        Self {
            version: CODEBOOK_VERSION,
            d: cb.series_len,
            m: cb.segments,
            k,
            window_radius: cb.window.radius(),
            tail: cb.tail,
            wavelet_level: cb.level,
            segment_length: cb.segment_len,
            centroids: cb.centroids.clone(),
            lut: cb
                .lut
                .iter()
                .map(|flat| flat.chunks(k).map(<[f64]>::to_vec).collect())
                .collect(),
            envelopes: cb
                .envelopes
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| EnvelopeRecord {
                            upper: e.upper.clone(),
                            lower: e.lower.clone(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<CodebookFile> for Codebook {
    type Error = Error;

    fn try_from(f: CodebookFile) -> Result<Self> {
        let bad = |msg: String| Err(Error::Invariant(msg));
        if f.version != CODEBOOK_VERSION {
            return Err(Error::Version {
                found: f.version,
                expected: CODEBOOK_VERSION,
            });
        }
        if f.m == 0 || f.k == 0 || f.k > super::MAX_CLUSTERS {
            return bad(format!("invalid dimensions m={} k={}", f.m, f.k));
        }
        if f.segment_length != f.d / f.m + f.tail {
            return bad(format!(
                "segment_length {} inconsistent with d={}, m={}, tail={}",
                f.segment_length, f.d, f.m, f.tail
            ));
        }
        let window = match f.window_radius {
            Some(r) => WarpingWindow::SakoeChiba(r),
            None => WarpingWindow::Unconstrained,
        };
        if f.centroids.len() != f.m || f.lut.len() != f.m || f.envelopes.len() != f.m {
            return bad(format!("expected {} subspaces in every table", f.m));
        }
        let mut lut = Vec::with_capacity(f.m);
        let mut envelopes = Vec::with_capacity(f.m);
        for m in 0..f.m {
            let cents = &f.centroids[m];
            if cents.len() != f.k || cents.iter().any(|c| c.len() != f.segment_length) {
                return bad(format!("subspace {m}: centroid table has the wrong shape"));
            }
            if cents.iter().flatten().any(|v| !v.is_finite()) {
                return bad(format!("subspace {m}: non-finite centroid value"));
            }
            let table = &f.lut[m];
            if table.len() != f.k || table.iter().any(|r| r.len() != f.k) {
                return bad(format!("subspace {m}: lut is not {k}x{k}", k = f.k));
            }
            for (i, row) in table.iter().enumerate() {
                if row[i] != 0.0 {
                    return bad(format!("subspace {m}: lut[{i}][{i}] is not zero"));
                }
                for (j, &v) in row.iter().enumerate() {
                    if !(v.is_finite() && v >= 0.0) {
                        return bad(format!("subspace {m}: lut[{i}][{j}] = {v}"));
                    }
                    if v != table[j][i] {
                        return bad(format!("subspace {m}: lut is not symmetric at ({i}, {j})"));
                    }
                }
            }
            lut.push(table.iter().flatten().copied().collect());
            let envs = &f.envelopes[m];
            if envs.len() != f.k {
                return bad(format!("subspace {m}: expected {} envelopes", f.k));
            }
            let mut row = Vec::with_capacity(f.k);
            for (k, e) in envs.iter().enumerate() {
                let env = Envelope {
                    upper: e.upper.clone(),
                    lower: e.lower.clone(),
                    radius: window,
                };
                if env.lower.len() != env.upper.len() || !env.contains(&cents[k]) {
                    return bad(format!("subspace {m}: envelope {k} does not contain its centroid"));
                }
                row.push(env);
            }
            envelopes.push(row);
        }
        Ok(Codebook {
            series_len: f.d,
            segments: f.m,
            clusters: f.k,
            tail: f.tail,
            level: f.wavelet_level,
            segment_len: f.segment_length,
            window,
            centroids: f.centroids,
            lut,
            envelopes,
        })
    }
}

impl Codebook {
    /// Compact JSON document describing the codebook.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CodebookFile::from(self))?)
    }

    /// Parses and validates a codebook document.
    pub fn from_json(text: &str) -> Result<Self> {
        let probe: VersionProbe = serde_json::from_str(text)?;
        if probe.version != CODEBOOK_VERSION {
            return Err(Error::Version {
                found: probe.version,
                expected: CODEBOOK_VERSION,
            });
        }
        let file: CodebookFile = serde_json::from_str(text)?;
        Codebook::try_from(file)
    }
}

impl Serialize for Codebook {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodebookFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Codebook {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = CodebookFile::deserialize(deserializer)?;
        Codebook::try_from(file).map_err(serde::de::Error::custom)
    }
}

pub fn save_codebook(cb: &Codebook, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, cb.to_json()?).map_err(io_err(path))
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Codebook::from_json(&text)
}

/// Writes one CSV line per series: `label,id_1,...,id_M`.
pub fn write_codes(path: impl AsRef<Path>, data: &EncodedDataset) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (i, code) in data.codes.iter().enumerate() {
        out.push_str(data.labels.as_ref().map_or("", |l| l[i].as_str()));
        for id in &code.ids {
            let _ = write!(out, ",{id}");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))
}

pub fn read_codes(path: impl AsRef<Path>) -> Result<EncodedDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut codes = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        labels.push(fields.next().unwrap_or_default().to_string());
        let ids = fields
            .map(|f| {
                f.trim().parse::<u16>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("invalid code id {f:?}"),
                })
            })
            .collect::<Result<Vec<u16>>>()?;
        codes.push(PQCode::new(ids));
    }
    Ok(EncodedDataset {
        codes,
        labels: Some(labels),
    })
}
