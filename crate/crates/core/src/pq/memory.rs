use std::fmt;

/// Storage accounting for a codebook and an encoded dataset.
///
/// Raw series are costed as single-precision floats (32 bits per sample) and
/// code ids as one byte each when `K <= 256`, two bytes otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryReport {
    pub series_len: usize,
    pub segments: usize,
    pub clusters: usize,
    pub series_count: usize,
    pub id_bytes: usize,
    pub compression_factor: f64,
    pub code_bytes_per_series: usize,
    pub total_code_bytes: usize,
    /// Centroids, centroid distance table and envelopes: `32 K (3 D + K M)` bits.
    pub overhead_bits: u64,
}

impl MemoryReport {
    pub fn new(series_len: usize, segments: usize, clusters: usize, series_count: usize) -> Self {
        let id_bytes = if clusters <= 256 { 1 } else { 2 };
        let raw_bits = 32.0 * series_len as f64;
        let code_bits = (8 * id_bytes * segments) as f64;
        let (d, m, k) = (series_len as u64, segments as u64, clusters as u64);
        Self {
            series_len,
            segments,
            clusters,
            series_count,
            id_bytes,
            compression_factor: raw_bits / code_bits,
            code_bytes_per_series: segments * id_bytes,
            total_code_bytes: series_count * segments * id_bytes,
            overhead_bits: 32 * k * (3 * d + k * m),
        }
    }

    pub fn overhead_bytes(&self) -> f64 {
        self.overhead_bits as f64 / 8.0
    }

    /// Overhead in decimal megabytes.
    pub fn overhead_mb(&self) -> f64 {
        self.overhead_bytes() / 1e6
    }
}

impl fmt::Display for MemoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "series length D={}, subspaces M={}, codebook size K={}",
            self.series_len, self.segments, self.clusters
        )?;
        writeln!(f, "compression factor: {:.1}x", self.compression_factor)?;
        writeln!(
            f,
            "code bytes: {} per series, {} total for {} series",
            self.code_bytes_per_series, self.total_code_bytes, self.series_count
        )?;
        write!(
            f,
            "codebook overhead: {} bits ({:.2} MB)",
            self.overhead_bits,
            self.overhead_mb()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_configuration() {
        let r = MemoryReport::new(140, 7, 256, 1000);
        assert_eq!(r.compression_factor, 80.0);
        assert_eq!(r.code_bytes_per_series, 7);
        assert_eq!(r.total_code_bytes, 7000);
        assert_eq!(r.overhead_bits, 32 * 256 * (3 * 140 + 256 * 7));
        assert!((r.overhead_mb() - 2.3).abs() / 2.3 < 0.05);
        let text = r.to_string();
        assert!(text.contains("80.0x"), "{text}");
    }

    #[test]
    fn one_subspace_per_sample() {
        assert_eq!(MemoryReport::new(100, 100, 256, 1).compression_factor, 4.0);
        assert_eq!(MemoryReport::new(100, 10, 1024, 1).id_bytes, 2);
    }
}
