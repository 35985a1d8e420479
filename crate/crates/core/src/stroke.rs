//! Pen-trajectory preprocessing: a sketch becomes an unwrapped angle series.
//!
//! Strokes are joined in drawing order, smoothed with a three-point mean,
//! resampled to equal arc-length spacing and replaced by the direction of
//! travel between consecutive points.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Default number of resampled points per sketch (angle series length 32).
pub const DEFAULT_RESAMPLE_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    /// Milliseconds.
    pub t: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One pen-down to pen-up trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Stroke {
    points: Vec<Point>,
}

impl Stroke {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegenerateStroke(format!(
                "a stroke needs at least 2 points, got {}",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|p| !(p.x.is_finite() && p.y.is_finite() && p.t.is_finite()))
        {
            return Err(Error::DegenerateStroke("non-finite coordinate".into()));
        }
        if points.windows(2).any(|w| w[1].t < w[0].t) {
            return Err(Error::DegenerateStroke("timestamps decrease".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].dist(&w[1])).sum()
    }
}

impl TryFrom<Vec<Point>> for Stroke {
    type Error = Error;

    fn try_from(points: Vec<Point>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Stroke> for Vec<Point> {
    fn from(s: Stroke) -> Self {
        s.points
    }
}

/// Parses the wire format: an array of strokes, each an array of `{x, y, t}`.
///
/// Strokes with fewer than two points are dropped; other malformed input is an error.
pub fn parse_strokes(json: &str) -> Result<Vec<Stroke>> {
    let raw: Vec<Vec<Point>> = serde_json::from_str(json)?;
    raw.into_iter()
        .filter(|pts| pts.len() >= 2)
        .map(Stroke::new)
        .collect()
}

/// Three-point moving average; endpoints are kept.
pub fn smooth(stroke: &Stroke) -> Stroke {
    let p = &stroke.points;
    let mut out = p.clone();
    for i in 1..p.len().saturating_sub(1) {
        out[i] = Point {
            x: (p[i - 1].x + p[i].x + p[i + 1].x) / 3.0,
            y: (p[i - 1].y + p[i].y + p[i + 1].y) / 3.0,
            t: p[i].t,
        };
    }
    Stroke { points: out }
}

/// `count` points evenly spaced by arc length along the polyline.
pub fn redistribute(stroke: &Stroke, count: usize) -> Result<Stroke> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 resampled points, got {count}"
        )));
    }
    let p = &stroke.points;
    let total = stroke.arc_length();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegenerateStroke("stroke has zero length".into()));
    }
    let step = total / (count - 1) as f64;
    let mut out = Vec::with_capacity(count);
    out.push(p[0]);
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut seg_len = p[0].dist(&p[1]);
    for k in 1..count - 1 {
        let target = k as f64 * step;
        while seg + 2 < p.len() && seg_start + seg_len < target {
            seg_start += seg_len;
            seg += 1;
            seg_len = p[seg].dist(&p[seg + 1]);
        }
        let frac = if seg_len > 0.0 {
            ((target - seg_start) / seg_len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (a, b) = (p[seg], p[seg + 1]);
        out.push(Point {
            x: a.x + (b.x - a.x) * frac,
            y: a.y + (b.y - a.y) * frac,
            t: a.t + (b.t - a.t) * frac,
        });
    }
    out.push(p[p.len() - 1]);
    Ok(Stroke { points: out })
}

/// Direction of travel between consecutive points, unwrapped.
///
/// A point coinciding with its successor repeats the neighbouring direction,
/// so the output always has `len - 1` values.
pub fn to_angles(stroke: &Stroke) -> Result<TimeSeries> {
    let p = &stroke.points;
    let raw: Vec<Option<f64>> = p
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
            (dx != 0.0 || dy != 0.0).then(|| dy.atan2(dx))
        })
        .collect();
    let Some(first) = raw.iter().flatten().next().copied() else {
        return Err(Error::DegenerateStroke("all points coincide".into()));
    };
    let mut angles = Vec::with_capacity(raw.len());
    let mut prev = first;
    for a in raw {
        let value = match a {
            Some(a) => prev + wrap_delta(a - prev),
            None => prev,
        };
        angles.push(value);
        prev = value;
    }
    if angles.len() < 2 {
        angles.push(prev);
    }
    TimeSeries::new(angles)
}

/// Maps an angle difference into `[-pi, pi]`, keeping `+pi` for positive jumps.
fn wrap_delta(d: f64) -> f64 {
    let mut w = (d + PI).rem_euclid(TAU) - PI;
    if w == -PI && d > 0.0 {
        w = PI;
    }
    w
}

/// Concatenated, smoothed, redistributed sketch as an angle series of `count - 1` values.
pub fn preprocess(strokes: &[Stroke], count: usize) -> Result<TimeSeries> {
    let mut ordered: Vec<&Stroke> = strokes.iter().filter(|s| s.arc_length() > 0.0).collect();
    if ordered.is_empty() {
        return Err(Error::DegenerateStroke(
            "no stroke with non-zero length".into(),
        ));
    }
    ordered.sort_by(|a, b| a.points[0].t.total_cmp(&b.points[0].t));
    let joined = Stroke {
        points: ordered.iter().flat_map(|s| s.points.iter().copied()).collect(),
    };
    let resampled = redistribute(&smooth(&joined), count)?;
    let angles = to_angles(&resampled)?;
    debug_assert_eq!(angles.len(), count - 1);
    Ok(angles)
}
