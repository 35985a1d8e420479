//! Seeded synthetic data: Gaussian random walks and warped sketch classes.

use pqdtw_core::{Point, Result, Stroke, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `n` random walks of length `len` with standard-normal steps, starting at 0.
pub fn random_walks(n: usize, len: usize, seed: u64) -> Vec<TimeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut acc = 0.0;
            let values = (0..len)
                .map(|i| {
                    if i > 0 {
                        acc += rng.sample::<f64, _>(StandardNormal);
                    }
                    acc
                })
                .collect();
            TimeSeries::new(values).expect("walk length >= 2")
        })
        .collect()
}

/// Control polylines for one symbol, one per stroke, in the unit square.
#[derive(Debug, Clone)]
pub struct SymbolTemplate {
    pub name: String,
    pub strokes: Vec<Vec<(f64, f64)>>,
}

/// Generator of hand-drawn-looking sketches around fixed templates.
#[derive(Debug, Clone)]
pub struct SketchGenerator {
    templates: Vec<SymbolTemplate>,
    /// Standard deviation of per-point jitter, relative to the unit square.
    pub noise: f64,
    /// Standard deviation of per-sketch control-point displacement.
    pub deform: f64,
    /// Largest absolute rotation in radians.
    pub max_rotation: f64,
}

impl SketchGenerator {
    pub fn new(symbols: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let templates = (0..symbols)
            .map(|i| {
                let n_strokes = if rng.random_bool(0.3) { 2 } else { 1 };
                let strokes = (0..n_strokes)
                    .map(|_| {
                        let corners = rng.random_range(3..7);
                        (0..corners)
                            .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
                            .collect()
                    })
                    .collect();
                SymbolTemplate {
                    name: format!("sym{i:02}"),
                    strokes,
                }
            })
            .collect();
        Self {
            templates,
            noise: 0.01,
            deform: 0.06,
            max_rotation: 0.2,
        }
    }

    pub fn templates(&self) -> &[SymbolTemplate] {
        &self.templates
    }

    /// One sketch of `symbol`: deformed, rotated, time-warped, jittered, scaled and shifted.
    pub fn sketch<R: Rng>(&self, symbol: usize, rng: &mut R) -> Vec<Stroke> {
        let scale = rng.random_range(50.0..200.0);
        let (ox, oy) = (rng.random_range(0.0..300.0), rng.random_range(0.0..300.0));
        let theta = if self.max_rotation > 0.0 {
            rng.random_range(-self.max_rotation..=self.max_rotation)
        } else {
            0.0
        };
        let (sin, cos) = theta.sin_cos();
        let mut t = 0.0;
        self.templates[symbol]
            .strokes
            .iter()
            .map(|tpl| {
                let poly: Vec<(f64, f64)> = tpl
                    .iter()
                    .map(|&(x, y)| {
                        let dx: f64 = rng.sample(StandardNormal);
                        let dy: f64 = rng.sample(StandardNormal);
                        let (x, y) = (x + self.deform * dx, y + self.deform * dy);
                        (cos * x - sin * y, sin * x + cos * y)
                    })
                    .collect();
                let poly = &poly;
                let count = rng.random_range(20..60);
                let gamma: f64 = rng.random_range(0.6..1.6);
                let points = (0..count)
                    .map(|i| {
                        let u = (i as f64 / (count - 1) as f64).powf(gamma);
                        let (x, y) = along(poly, u);
                        t += rng.random_range(5.0..20.0);
                        let jx: f64 = rng.sample(StandardNormal);
                        let jy: f64 = rng.sample(StandardNormal);
                        Point::new(
                            ox + scale * (x + self.noise * jx),
                            oy + scale * (y + self.noise * jy),
                            t,
                        )
                    })
                    .collect();
                t += 200.0;
                Stroke::new(points).expect("generated stroke is valid")
            })
            .collect()
    }

    /// `per_symbol` sketches of every symbol, symbol-major.
    pub fn dataset(&self, per_symbol: usize, seed: u64) -> Vec<(String, Vec<Stroke>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(per_symbol * self.templates.len());
        for (i, tpl) in self.templates.iter().enumerate() {
            for _ in 0..per_symbol {
                out.push((tpl.name.clone(), self.sketch(i, &mut rng)));
            }
        }
        out
    }
}

/// Point at fraction `u` of the polyline's arc length.
fn along(poly: &[(f64, f64)], u: f64) -> (f64, f64) {
    let lens: Vec<f64> = poly
        .windows(2)
        .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
        .collect();
    let total: f64 = lens.iter().sum();
    let mut target = u.clamp(0.0, 1.0) * total;
    for (w, len) in poly.windows(2).zip(&lens) {
        if target <= *len && *len > 0.0 {
            let f = target / len;
            return (w[0].0 + f * (w[1].0 - w[0].0), w[0].1 + f * (w[1].1 - w[0].1));
        }
        target -= len;
    }
    poly[poly.len() - 1]
}

/// Angle series for a generated dataset.
pub fn featurize(
    sketches: &[(String, Vec<Stroke>)],
    resample_points: usize,
) -> Result<(Vec<TimeSeries>, Vec<String>)> {
    let mut series = Vec::with_capacity(sketches.len());
    let mut labels = Vec::with_capacity(sketches.len());
    for (label, strokes) in sketches {
        series.push(pqdtw_core::preprocess(strokes, resample_points)?);
        labels.push(label.clone());
    }
    Ok((series, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walks_are_seeded() {
        let a = random_walks(3, 50, 7);
        assert_eq!(a, random_walks(3, 50, 7));
        assert_ne!(a, random_walks(3, 50, 8));
        assert!(a.iter().all(|w| w.len() == 50 && w[0] == 0.0));
    }

    #[test]
    fn sketches_are_seeded_and_valid() {
        let g = SketchGenerator::new(5, 1);
        let a = g.dataset(4, 2);
        assert_eq!(a.len(), 20);
        assert_eq!(a, SketchGenerator::new(5, 1).dataset(4, 2));
        let (series, labels) = featurize(&a, 33).unwrap();
        assert!(series.iter().all(|s| s.len() == 32));
        assert_eq!(labels[4], "sym01");
    }

    #[test]
    fn along_endpoints() {
        let poly = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)];
        assert_eq!(along(&poly, 0.0), (0.0, 0.0));
        assert_eq!(along(&poly, 0.5), (1.0, 0.0));
        assert_eq!(along(&poly, 1.0), (1.0, 1.0));
    }
}
