//! Elastic product quantization.
//!
//! Each series is cut into `M` subspaces (optionally pre-aligned with the
//! MODWT rule from [`crate::modwt`]) and every subspace is quantized against
//! its own codebook of `K` DBA centroids. Distances between codes come from a
//! per-subspace table of squared centroid-to-centroid DTW distances
//! (symmetric mode), or from a per-query table of squared query-segment to
//! centroid distances (asymmetric mode). Both aggregate as
//! `sqrt(sum_m d_m^2)`.

mod io;
mod memory;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dba::{dba_kmeans, KMeansConfig, DEFAULT_DBA_ITERATIONS, DEFAULT_KMEANS_ITERATIONS};
use crate::elastic::{dtw_sq, keogh_envelope, lb_keogh_sq, nn_search_sq, Envelope, WarpingWindow};
use crate::error::{invalid, Result};
use crate::modwt::{check_segmentation, extract_segments, plan_segments};

pub use io::{load_codebook, read_codes, save_codebook, write_codes, CODEBOOK_VERSION};
pub use memory::MemoryReport;

/// Default number of centroids per subspace.
pub const DEFAULT_CLUSTERS: usize = 256;
/// Largest supported codebook; ids are stored as `u16`.
pub const MAX_CLUSTERS: usize = 1 << 16;
/// Default wavelet level for pre-alignment.
pub const DEFAULT_WAVELET_LEVEL: usize = 3;

/// A series re-represented by one centroid id per subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PQCode {
    pub ids: Vec<u16>,
}

impl PQCode {
    pub fn new(ids: Vec<u16>) -> Self {
        Self { ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Codes for a whole dataset, with optional labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EncodedDataset {
    pub codes: Vec<PQCode>,
    pub labels: Option<Vec<String>>,
}

impl EncodedDataset {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// Training hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    /// Number of subspaces `M`.
    pub segments: usize,
    /// Centroids per subspace `K`; clamped to the training-set size.
    pub clusters: usize,
    /// Pre-alignment tail `t`; zero disables pre-alignment.
    pub tail: usize,
    /// Wavelet level `J`.
    pub level: usize,
    /// Quantization window, used for training, encoding and all tables.
    pub window: WarpingWindow,
    pub seed: u64,
    pub kmeans_iter: usize,
    pub dba_iter: usize,
}

impl TrainParams {
    pub fn new(segments: usize, clusters: usize) -> Self {
        Self {
            segments,
            clusters,
            tail: 0,
            level: DEFAULT_WAVELET_LEVEL,
            window: WarpingWindow::Unconstrained,
            seed: 0,
            kmeans_iter: DEFAULT_KMEANS_ITERATIONS,
            dba_iter: DEFAULT_DBA_ITERATIONS,
        }
    }

    pub fn with_tail(mut self, tail: usize) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn with_window(mut self, window: WarpingWindow) -> Self {
        self.window = window;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Default tail: a quarter of the base segment length.
pub fn default_tail(series_len: usize, segments: usize) -> usize {
    (series_len / segments.max(1)) / 4
}

/// Trained quantizer: centroids, envelopes and the centroid distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub(crate) series_len: usize,
    pub(crate) segments: usize,
    pub(crate) clusters: usize,
    pub(crate) tail: usize,
    pub(crate) level: usize,
    pub(crate) segment_len: usize,
    pub(crate) window: WarpingWindow,
    /// `[m][k]` centroid of length `segment_len`.
    pub(crate) centroids: Vec<Vec<Vec<f64>>>,
    /// `[m]` row-major `K x K` squared DTW distances.
    pub(crate) lut: Vec<Vec<f64>>,
    pub(crate) envelopes: Vec<Vec<Envelope>>,
}

/// Squared DTW between every query segment and every centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricTable {
    clusters: usize,
    /// `[m]` rows of `K` squared distances.
    d2: Vec<Vec<f64>>,
}

impl AsymmetricTable {
    pub fn entry(&self, m: usize, k: usize) -> f64 {
        self.d2[m][k]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.d2
    }

    /// `sqrt(sum_m d2[m][code_m])`.
    pub fn distance(&self, code: &PQCode) -> Result<f64> {
        if code.len() != self.d2.len() {
            return invalid(format!(
                "code has {} ids, table has {} subspaces",
                code.len(),
                self.d2.len()
            ));
        }
        let mut sum = 0.0;
        for (row, &id) in self.d2.iter().zip(&code.ids) {
            let id = usize::from(id);
            if id >= self.clusters {
                return invalid(format!("code id {id} out of range for K={}", self.clusters));
            }
            sum += row[id];
        }
        Ok(sum.sqrt())
    }

    /// [`distance`](Self::distance) without validation, for codes already checked.
    pub(crate) fn distance_unchecked(&self, code: &PQCode) -> f64 {
        self.d2
            .iter()
            .zip(&code.ids)
            .map(|(row, &id)| row[usize::from(id)])
            .sum::<f64>()
            .sqrt()
    }
}

pub fn asym_distance(table: &AsymmetricTable, code: &PQCode) -> Result<f64> {
    table.distance(code)
}

/// Centroids, flattened lut and envelopes of one subspace.
type Fitted = (Vec<Vec<f64>>, Vec<f64>, Vec<Envelope>);

/// Learns one DBA k-means codebook per subspace.
pub fn train<S: AsRef<[f64]> + Sync>(data: &[S], params: &TrainParams) -> Result<Codebook> {
    if data.is_empty() {
        return invalid("cannot train a codebook on an empty dataset");
    }
    let d = data[0].as_ref().len();
    if let Some(i) = data.iter().position(|s| s.as_ref().len() != d) {
        return invalid(format!("series {i} length differs from {d}"));
    }
    let base = check_segmentation(d, params.segments, params.tail, params.level)?;
    if params.clusters == 0 {
        return invalid("codebook size K must be >= 1");
    }
    let clusters = params.clusters.min(data.len());
    if clusters > MAX_CLUSTERS {
        return invalid(format!("K={clusters} exceeds the supported maximum {MAX_CLUSTERS}"));
    }
    let segment_len = base + params.tail;
    let m_count = params.segments;

    let per_series: Vec<Vec<Vec<f64>>> = data
        .par_iter()
        .map(|s| split(s.as_ref(), m_count, params.tail, params.level))
        .collect::<Result<_>>()?;
    // Transpose into one training set per subspace.
    let mut by_subspace: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(data.len()); m_count];
    for segs in per_series {
        for (m, seg) in segs.into_iter().enumerate() {
            by_subspace[m].push(seg);
        }
    }

    let window = params.window;
    let radius = window.effective_radius(segment_len);
    let fitted: Vec<Fitted> = by_subspace
        .par_iter()
        .enumerate()
        .map(|(m, segs)| {
            let mut cfg = KMeansConfig::new(clusters, window, subspace_seed(params.seed, m));
            cfg.max_iter = params.kmeans_iter;
            cfg.dba_iter = params.dba_iter;
            let model = dba_kmeans(segs, &cfg)?;
            let centroids = model.centroids;
            let envelopes = centroids.iter().map(|c| keogh_envelope(c, window)).collect();
            let lut = distance_table(&centroids, radius);
            Ok((centroids, lut, envelopes))
        })
        .collect::<Result<_>>()?;

    let mut cb = Codebook {
        series_len: d,
        segments: m_count,
        clusters,
        tail: params.tail,
        level: params.level,
        segment_len,
        window,
        centroids: Vec::with_capacity(m_count),
        lut: Vec::with_capacity(m_count),
        envelopes: Vec::with_capacity(m_count),
    };
    for (c, l, e) in fitted {
        cb.centroids.push(c);
        cb.lut.push(l);
        cb.envelopes.push(e);
    }
    Ok(cb)
}

fn subspace_seed(seed: u64, m: usize) -> u64 {
    seed.wrapping_add((m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn split(s: &[f64], segments: usize, tail: usize, level: usize) -> Result<Vec<Vec<f64>>> {
    let plan = plan_segments(s, segments, tail, level)?;
    extract_segments(s, &plan)
}

/// Symmetric `K x K` squared-DTW matrix, computed once per pair and mirrored.
fn distance_table(centroids: &[Vec<f64>], radius: usize) -> Vec<f64> {
    let k = centroids.len();
    let upper: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            (i + 1..k)
                .map(|j| dtw_sq(&centroids[i], &centroids[j], radius, f64::INFINITY))
                .collect()
        })
        .collect();
    let mut lut = vec![0.0; k * k];
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + 1 + off;
            lut[i * k + j] = v;
            lut[j * k + i] = v;
        }
    }
    lut
}

impl Codebook {
    /// Series length `D` the codebook was trained on.
    pub fn series_len(&self) -> usize {
        self.series_len
    }

    /// Number of subspaces `M`.
    pub fn segments(&self) -> usize {
        self.segments
    }

    /// Centroids per subspace `K`.
    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Resampled subspace length `l + t`.
    pub fn segment_len(&self) -> usize {
        self.segment_len
    }

    pub fn window(&self) -> WarpingWindow {
        self.window
    }

    pub fn centroid(&self, m: usize, k: usize) -> &[f64] {
        &self.centroids[m][k]
    }

    pub fn centroids(&self, m: usize) -> &[Vec<f64>] {
        &self.centroids[m]
    }

    pub fn envelope(&self, m: usize, k: usize) -> &Envelope {
        &self.envelopes[m][k]
    }

    /// Squared DTW between centroids `i` and `j` of subspace `m`.
    pub fn lut(&self, m: usize, i: usize, j: usize) -> f64 {
        self.lut[m][i * self.clusters + j]
    }

    fn radius(&self) -> usize {
        self.window.effective_radius(self.segment_len)
    }

    fn check_len(&self, s: &[f64]) -> Result<()> {
        if s.len() != self.series_len {
            return invalid(format!(
                "series has length {}, codebook expects {}",
                s.len(),
                self.series_len
            ));
        }
        Ok(())
    }

    /// Pre-aligned, resampled subspaces of `s`.
    pub fn segment(&self, s: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_len(s)?;
        split(s, self.segments, self.tail, self.level)
    }

    /// Nearest-centroid id per subspace; ties go to the lowest id.
    pub fn encode(&self, s: &[f64]) -> Result<PQCode> {
        let segs = self.segment(s)?;
        Ok(self.encode_segments(&segs))
    }

    pub(crate) fn encode_segments(&self, segs: &[Vec<f64>]) -> PQCode {
        let radius = self.radius();
        let ids = segs
            .iter()
            .enumerate()
            .map(|(m, seg)| {
                let (k, _) = nn_search_sq(seg, &self.centroids[m], &self.envelopes[m], radius);
                k as u16
            })
            .collect();
        PQCode { ids }
    }

    /// Encodes every series, in parallel.
    pub fn encode_all<S: AsRef<[f64]> + Sync>(&self, data: &[S]) -> Result<Vec<PQCode>> {
        data.par_iter().map(|s| self.encode(s.as_ref())).collect()
    }

    /// Concatenation of the centroids named by `code`.
    pub fn reconstruct(&self, code: &PQCode) -> Result<Vec<f64>> {
        self.check_code(code)?;
        Ok(code
            .ids
            .iter()
            .enumerate()
            .flat_map(|(m, &k)| self.centroids[m][usize::from(k)].iter().copied())
            .collect())
    }

    pub fn check_code(&self, code: &PQCode) -> Result<()> {
        if code.len() != self.segments {
            return invalid(format!(
                "code has {} ids, codebook has {} subspaces",
                code.len(),
                self.segments
            ));
        }
        if let Some(&id) = code.ids.iter().find(|&&id| usize::from(id) >= self.clusters) {
            return invalid(format!("code id {id} out of range for K={}", self.clusters));
        }
        Ok(())
    }

    /// Plain symmetric distance: `sqrt(sum_m lut[m][a_m][b_m])`.
    pub fn sym_distance(&self, a: &PQCode, b: &PQCode) -> Result<f64> {
        self.check_code(a)?;
        self.check_code(b)?;
        Ok(self.sym_distance_unchecked(a, b))
    }

    pub(crate) fn sym_distance_unchecked(&self, a: &PQCode, b: &PQCode) -> f64 {
        let k = self.clusters;
        a.ids
            .iter()
            .zip(&b.ids)
            .zip(&self.lut)
            .map(|((&i, &j), table)| table[usize::from(i) * k + usize::from(j)])
            .sum::<f64>()
            .sqrt()
    }

    /// Symmetric distance where subspaces sharing a code contribute the larger
    /// of the two LB_Keogh bounds against that centroid instead of zero.
    ///
    /// `x_segs` and `y_segs` are the [`segment`](Self::segment)s of the
    /// originals behind `a` and `b`.
    pub fn sym_distance_lb(
        &self,
        a: &PQCode,
        b: &PQCode,
        x_segs: &[Vec<f64>],
        y_segs: &[Vec<f64>],
    ) -> Result<f64> {
        self.check_code(a)?;
        self.check_code(b)?;
        for segs in [x_segs, y_segs] {
            if segs.len() != self.segments || segs.iter().any(|s| s.len() != self.segment_len) {
                return invalid("segmented originals do not match the codebook layout");
            }
        }
        Ok(self.sym_distance_lb_unchecked(a, b, x_segs, y_segs))
    }

    pub(crate) fn sym_distance_lb_unchecked(
        &self,
        a: &PQCode,
        b: &PQCode,
        x_segs: &[Vec<f64>],
        y_segs: &[Vec<f64>],
    ) -> f64 {
        let k = self.clusters;
        let mut sum = 0.0;
        for m in 0..self.segments {
            let (i, j) = (usize::from(a.ids[m]), usize::from(b.ids[m]));
            sum += if i == j {
                let env = &self.envelopes[m][i];
                let lx = lb_keogh_sq(&x_segs[m], env, f64::INFINITY);
                let ly = lb_keogh_sq(&y_segs[m], env, f64::INFINITY);
                lx.max(ly)
            } else {
                self.lut[m][i * k + j]
            };
        }
        sum.sqrt()
    }

    /// Convenience wrapper around [`sym_distance_lb`](Self::sym_distance_lb) on raw series.
    pub fn sym_distance_lb_replace(&self, a: &PQCode, b: &PQCode, x: &[f64], y: &[f64]) -> Result<f64> {
        let xs = self.segment(x)?;
        let ys = self.segment(y)?;
        self.sym_distance_lb(a, b, &xs, &ys)
    }

    /// Per-query table of squared segment-to-centroid DTW distances.
    pub fn asym_table(&self, query: &[f64]) -> Result<AsymmetricTable> {
        let segs = self.segment(query)?;
        Ok(self.asym_table_segments(&segs))
    }

    pub(crate) fn asym_table_segments(&self, segs: &[Vec<f64>]) -> AsymmetricTable {
        let radius = self.radius();
        let d2 = segs
            .iter()
            .zip(&self.centroids)
            .map(|(seg, cents)| {
                cents
                    .iter()
                    .map(|c| dtw_sq(seg, c, radius, f64::INFINITY))
                    .collect()
            })
            .collect();
        AsymmetricTable {
            clusters: self.clusters,
            d2,
        }
    }

    pub fn memory_report(&self, series_count: usize) -> MemoryReport {
        MemoryReport::new(self.series_len, self.segments, self.clusters, series_count)
    }
}
