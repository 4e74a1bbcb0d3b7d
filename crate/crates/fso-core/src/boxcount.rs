//! Box-counting dimension estimate for planar point sets.
//!
//! Boxes form a grid anchored at the bounding-box minimum corner. The
//! estimate is the least-squares slope of log N(s) against log(1/s).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub schema_version: u32,
    pub scales: Vec<f64>,
    pub counts: Vec<u64>,
    pub slope: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
}

/// Geometric scale sequence (ratio 1/2) from half the bounding-box span,
/// suitable as a default for `box_counting_dimension`.
pub fn default_scales(points: &[[f64; 2]], count: usize) -> Vec<f64> {
    let span_x = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let span_y = points.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let span = span_x.max(span_y).max(f64::MIN_POSITIVE);
    (1..=count.max(3)).map(|j| span / (1u64 << j) as f64).collect()
}

/// Counts occupied grid boxes of size `scale`, grid anchored at `origin`.
pub fn occupied_boxes(points: &[[f64; 2]], origin: [f64; 2], scale: f64) -> u64 {
    let mut cells: HashSet<(i64, i64)> = HashSet::with_capacity(points.len());
    for p in points {
        let cx = ((p[0] - origin[0]) / scale).floor() as i64;
        let cy = ((p[1] - origin[1]) / scale).floor() as i64;
        cells.insert((cx, cy));
    }
    cells.len() as u64
}

pub fn box_counting_dimension(points: &[[f64; 2]], scales: &[f64]) -> Result<DimensionEstimate> {
    if scales.len() < 3 || !scales.windows(2).all(|w| w[0] > w[1]) || scales.iter().any(|&s| s <= 0.0)
    {
        return Err(Error::InvalidScales);
    }
    let first = points.first().ok_or(Error::DegenerateGeometry)?;
    if points.iter().all(|p| p == first) {
        return Err(Error::DegenerateGeometry);
    }

    let origin = [
        points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        points.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
    ];

    let counts: Vec<u64> = scales
        .iter()
        .map(|&s| occupied_boxes(points, origin, s))
        .collect();

    // least squares of y = log N over x = log(1/s)
    let xs: Vec<f64> = scales.iter().map(|s| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(DimensionEstimate {
        schema_version: crate::SCHEMA_VERSION,
        scales: scales.to_vec(),
        counts,
        slope,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Level-`depth` endpoints of the middle-thirds construction on [0,1].
    pub fn cantor_endpoints(depth: u32) -> Vec<[f64; 2]> {
        let mut intervals = vec![(0.0f64, 1.0f64)];
        for _ in 0..depth {
            intervals = intervals
                .iter()
                .flat_map(|&(a, b)| {
                    let third = (b - a) / 3.0;
                    [(a, a + third), (b - third, b)]
                })
                .collect();
        }
        intervals
            .into_iter()
            .flat_map(|(a, b)| [[a, 0.0], [b, 0.0]])
            .collect()
    }

    #[test]
    fn two_points_have_dimension_zero() {
        let points = [[0.0, 0.0], [1.0, 0.0]];
        let est = box_counting_dimension(&points, &[1.0, 0.5, 0.25]).unwrap();
        assert_eq!(est.counts, vec![2, 2, 2]);
        assert!(est.slope.abs() < 1e-12, "slope {}", est.slope);
    }

    #[test]
    fn cantor_sample_matches_known_dimension() {
        let points = cantor_endpoints(6);
        assert_eq!(points.len(), 128);
        let scales: Vec<f64> = (0..=6).map(|k| (1.0f64 / 3.0).powi(k)).collect();
        let est = box_counting_dimension(&points, &scales).unwrap();
        let want = 2f64.ln() / 3f64.ln();
        assert!(
            (est.slope - want).abs() < 0.1,
            "slope {} vs {}",
            est.slope,
            want
        );
    }

    #[test]
    fn counts_match_bounds_check_oracle() {
        // counts each grid box by direct interval membership, not floor()
        fn oracle(points: &[[f64; 2]], origin: [f64; 2], scale: f64) -> u64 {
            let max_x = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let max_y = points.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
            let nx = ((max_x - origin[0]) / scale).floor() as i64 + 1;
            let ny = ((max_y - origin[1]) / scale).floor() as i64 + 1;
            let mut count = 0;
            for i in 0..=nx {
                for j in 0..=ny {
                    let x0 = origin[0] + i as f64 * scale;
                    let y0 = origin[1] + j as f64 * scale;
                    if points.iter().any(|p| {
                        p[0] >= x0 && p[0] < x0 + scale && p[1] >= y0 && p[1] < y0 + scale
                    }) {
                        count += 1;
                    }
                }
            }
            count
        }

        let points = cantor_endpoints(4);
        for &s in &[1.0, 1.0 / 3.0, 1.0 / 9.0, 1.0 / 27.0] {
            assert_eq!(occupied_boxes(&points, [0.0, 0.0], s), oracle(&points, [0.0, 0.0], s));
        }
    }

    #[test]
    fn rejects_bad_scales_and_degenerate_points() {
        let points = [[0.0, 0.0], [1.0, 1.0]];
        assert!(matches!(
            box_counting_dimension(&points, &[1.0, 0.5]),
            Err(Error::InvalidScales)
        ));
        assert!(matches!(
            box_counting_dimension(&points, &[0.25, 0.5, 1.0]),
            Err(Error::InvalidScales)
        ));
        let same = [[1.0, 1.0], [1.0, 1.0]];
        assert!(matches!(
            box_counting_dimension(&same, &[1.0, 0.5, 0.25]),
            Err(Error::DegenerateGeometry)
        ));
        assert!(matches!(
            box_counting_dimension(&[], &[1.0, 0.5, 0.25]),
            Err(Error::DegenerateGeometry)
        ));
    }
}
