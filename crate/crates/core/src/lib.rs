//! Elastic product quantization for time series.
//!
//! Series are split into subspaces, each subspace is quantized against a
//! codebook of DTW barycenters, and distances between compressed series come
//! from precomputed tables instead of full dynamic time warping.
//!
//! ```
//! use pqdtw_core::{train, TimeSeries, TrainParams};
//!
//! let data: Vec<TimeSeries> = (0..8)
//!     .map(|i| TimeSeries::new((0..16).map(|t| ((t + i) as f64).sin()).collect()).unwrap())
//!     .collect();
//! let cb = train(&data, &TrainParams::new(2, 4).with_tail(0).with_seed(1)).unwrap();
//! let a = cb.encode(&data[0]).unwrap();
//! let b = cb.encode(&data[1]).unwrap();
//! assert!(cb.sym_distance(&a, &b).unwrap() >= 0.0);
//! ```

pub mod bundle;
pub mod dba;
pub mod elastic;
pub mod error;
pub mod mining;
pub mod modwt;
pub mod pq;
pub mod series;
pub mod stroke;

pub use bundle::{Candidate, ModelBundle, QueryMode};
pub use dba::{dba_barycenter, dba_kmeans, ClusterModel, KMeansConfig};
pub use elastic::{
    dtw, dtw_bounded, euclidean, keogh_envelope, lb_keogh, lb_kim, nn_search_cascaded,
    warping_path, Envelope, WarpingWindow,
};
pub use error::{Error, Result};
pub use mining::{ClassificationResult, Measure, TrainSet};
pub use modwt::{modwt_scale, plan_segments, SegmentPlan};
pub use pq::{
    asym_distance, train, AsymmetricTable, Codebook, EncodedDataset, MemoryReport, PQCode,
    TrainParams,
};
pub use series::{z_normalize, LabeledDataset, TimeSeries};
pub use stroke::{preprocess, Point, Stroke};
