//! Structure-aware segmentation using Haar MODWT scale coefficients.
//!
//! A series is cut into `M` pieces. Each fixed split point `m * l` may be
//! pulled back by up to `t` samples onto the right-most point where the series
//! crosses its level-`J` wavelet smooth. Every piece is then resampled to `l + t`.

use crate::error::{invalid, Result};
use crate::series::resample_linear;

/// Haar MODWT scale coefficients, one row of length `D` per level.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleCoefficients {
    rows: Vec<Vec<f64>>,
}

impl ScaleCoefficients {
    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients at level `j` (1-based).
    pub fn level(&self, j: usize) -> &[f64] {
        &self.rows[j - 1]
    }
}

/// Haar MODWT scale coefficients up to `levels`, with periodic boundary.
///
/// Level `j` is the circular backward moving average of width `2^j`.
pub fn modwt_scale(s: &[f64], levels: usize) -> Result<ScaleCoefficients> {
    let d = s.len();
    if levels == 0 {
        return invalid("wavelet level must be >= 1");
    }
    if levels >= usize::BITS as usize || (1usize << levels) > d {
        return invalid(format!(
            "wavelet level {levels} needs 2^{levels} <= series length {d}"
        ));
    }
    let mut rows = Vec::with_capacity(levels);
    let mut current = s.to_vec();
    for j in 1..=levels {
        let stride = 1usize << (j - 1);
        let next: Vec<f64> = (0..d)
            .map(|i| 0.5 * (current[i] + current[(i + d - stride % d) % d]))
            .collect();
        rows.push(next.clone());
        current = next;
    }
    Ok(ScaleCoefficients { rows })
}

/// Indices where the sign of `s - c_J` flips.
///
/// Zero differences inherit the previous non-zero sign.
pub fn segment_points(s: &[f64], coeffs: &ScaleCoefficients, level: usize) -> Vec<usize> {
    let smooth = coeffs.level(level);
    let mut points = Vec::new();
    let mut sign = 0i8;
    for (i, (v, c)) in s.iter().zip(smooth).enumerate() {
        let diff = v - c;
        let here = if diff > 0.0 {
            1
        } else if diff < 0.0 {
            -1
        } else {
            sign
        };
        if sign != 0 && here != sign {
            points.push(i);
        }
        sign = here;
    }
    points
}

/// Cut points for one series under the fixed-count, tail-constrained rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPlan {
    pub cut_points: Vec<usize>,
    pub segments: usize,
    pub base_len: usize,
    pub tail: usize,
    pub level: usize,
    pub series_len: usize,
}

impl SegmentPlan {
    pub fn segment_len(&self) -> usize {
        self.base_len + self.tail
    }

    /// Half-open `[start, end)` ranges of the raw segments.
    pub fn bounds(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.segments + 1);
        edges.push(0);
        edges.extend_from_slice(&self.cut_points);
        edges.push(self.series_len);
        edges.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// Validates `(D, M, t, J)` and returns the base segment length `l`.
pub fn check_segmentation(d: usize, segments: usize, tail: usize, level: usize) -> Result<usize> {
    if segments == 0 {
        return invalid("number of segments must be >= 1");
    }
    let base = d / segments;
    if tail >= base {
        return invalid(format!(
            "tail {tail} must be shorter than the base segment length {base} (D={d}, M={segments})"
        ));
    }
    if base.saturating_sub(tail) < 2 {
        return invalid(format!(
            "segments could be shorter than 2 samples (l={base}, t={tail})"
        ));
    }
    if tail > 0 && (level == 0 || level >= usize::BITS as usize || (1usize << level) > d) {
        return invalid(format!("wavelet level {level} invalid for series length {d}"));
    }
    Ok(base)
}

/// Plans `segments` cuts; each fixed split `m*l` moves to the right-most
/// MODWT point in `[m*l - t, m*l]` when there is one.
pub fn plan_segments(s: &[f64], segments: usize, tail: usize, level: usize) -> Result<SegmentPlan> {
    let d = s.len();
    let base = check_segmentation(d, segments, tail, level)?;
    let points = if tail > 0 {
        let coeffs = modwt_scale(s, level)?;
        segment_points(s, &coeffs, level)
    } else {
        Vec::new()
    };
    let cut_points = (1..segments)
        .map(|m| {
            let fixed = m * base;
            let lo = fixed - tail;
            // points are sorted, so the right-most candidate is the last one <= fixed
            let upto = points.partition_point(|&p| p <= fixed);
            match upto.checked_sub(1).map(|k| points[k]) {
                Some(p) if p >= lo => p,
                _ => fixed,
            }
        })
        .collect();
    Ok(SegmentPlan {
        cut_points,
        segments,
        base_len: base,
        tail,
        level,
        series_len: d,
    })
}

/// Splits `s` along `plan` and resamples every piece to `l + t` samples.
pub fn extract_segments(s: &[f64], plan: &SegmentPlan) -> Result<Vec<Vec<f64>>> {
    if s.len() != plan.series_len {
        return invalid(format!(
            "plan is for length {}, series has length {}",
            plan.series_len,
            s.len()
        ));
    }
    let target = plan.segment_len();
    plan.bounds()
        .into_iter()
        .map(|(a, b)| {
            if b < a + 2 {
                return invalid(format!("segment [{a}, {b}) is shorter than 2 samples"));
            }
            resample_linear(&s[a..b], target)
        })
        .collect()
}
