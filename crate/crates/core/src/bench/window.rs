use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Overlapping windows along the sortability axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub width: f64,
    pub centers: Vec<f64>,
}

impl Default for WindowConfig {
    /// Width 0.1, centers 0.05, 0.10, …, 0.95.
    fn default() -> Self {
        WindowConfig { width: 0.1, centers: (1..=19).map(|k| k as f64 * 0.05).collect() }
    }
}

impl WindowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width <= 1.0) {
            return Err(Error::invalid(format!("window width must lie in (0, 1], got {}", self.width)));
        }
        if self.centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("window centers must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub center: f64,
    pub mean: f64,
    /// Normal-approximation 95% interval for the mean; collapses to the mean when `count == 1`.
    pub ci_low: f64,
    pub ci_high: f64,
    pub count: usize,
}

const Z95: f64 = 1.959963984540054;

/// Mean of `y` over points with `|x − center| ≤ width / 2`, per center.
/// Empty windows are omitted.
pub fn window_average(points: &[(f64, f64)], cfg: &WindowConfig) -> Vec<CurvePoint> {
    let half = cfg.width / 2.0 + 1e-12;
    cfg.centers
        .iter()
        .filter_map(|&center| {
            let ys: Vec<f64> = points.iter().filter(|(x, _)| (x - center).abs() <= half).map(|&(_, y)| y).collect();
            let count = ys.len();
            if count == 0 {
                return None;
            }
            let mean = ys.iter().sum::<f64>() / count as f64;
            let half_width = if count > 1 {
                let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
                Z95 * (var / count as f64).sqrt()
            } else {
                0.0
            };
            Some(CurvePoint { center, mean, ci_low: mean - half_width, ci_high: mean + half_width, count })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let cfg = WindowConfig::default();
        let curve = window_average(&[(0.72, 10.0), (0.74, 20.0)], &cfg);
        let at = curve.iter().find(|p| (p.center - 0.7).abs() < 1e-9).unwrap();
        assert_eq!(at.mean, 15.0);
        assert_eq!(at.count, 2);
        assert!(at.ci_low < 15.0 && at.ci_high > 15.0);

        let narrow = WindowConfig { width: 0.01, centers: vec![0.5] };
        assert!(window_average(&[(0.1, 1.0)], &narrow).is_empty());

        let single = window_average(&[(0.5, 3.0)], &narrow);
        assert_eq!(single.len(), 1);
        assert_eq!((single[0].ci_low, single[0].ci_high, single[0].count), (3.0, 3.0, 1));
    }

    #[test]
    fn edges_of_windows_are_closed() {
        let cfg = WindowConfig::default();
        let curve = window_average(&[(0.15, 1.0)], &cfg);
        let centers: Vec<f64> = curve.iter().map(|p| p.center).collect();
        assert_eq!(centers.len(), 3);
        assert!((centers[0] - 0.1).abs() < 1e-12 && (centers[2] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(WindowConfig { width: 0.0, centers: vec![] }.validate().is_err());
        assert!(WindowConfig { width: 1.5, centers: vec![] }.validate().is_err());
        assert!(WindowConfig::default().validate().is_ok());
    }
}
