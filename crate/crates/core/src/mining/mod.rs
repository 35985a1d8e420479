//! Nearest-neighbour classification and hierarchical clustering over exact
//! or product-quantized distances.

mod hierarchy;
mod knn;
mod metrics;

pub use hierarchy::{
    agglomerative, cut_k, pairwise_matrix, pq_matrix, Dendrogram, DistanceMatrix, Linkage, Merge,
    PairwiseMeasure,
};
pub use knn::{
    distances_to_all, knn_classify, rank, ClassificationResult, Measure, Neighbor, TrainSet,
};
pub use metrics::{adjusted_rand_index, rand_index};
