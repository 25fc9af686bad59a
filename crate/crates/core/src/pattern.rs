use crate::error::{Error, Result};
use crate::propagation::ScreenGrid;

/// Intensity on the screen, in probability per meter.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub grid: ScreenGrid,
    pub intensity: Vec<f64>,
    pub label: String,
}

impl Pattern {
    /// Validates the samples and clamps rounding-level negatives to zero.
    ///
    /// A negative sample is tolerated when it is within `1e-14` absolute or
    /// `1e-12` of the pattern's peak; anything lower is an error.
    pub fn new(
        grid: ScreenGrid,
        mut intensity: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if intensity.len() != grid.n_points {
            return Err(Error::DimensionMismatch {
                left: intensity.len(),
                right: grid.n_points,
            });
        }
        if intensity.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite intensity".into()));
        }
        let peak = intensity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = -(1e-14f64).max(1e-12 * peak);
        for v in intensity.iter_mut() {
            if *v < 0.0 {
                if *v < floor {
                    return Err(Error::InvalidState(format!("negative intensity {v:e}")));
                }
                *v = 0.0;
            }
        }
        Ok(Self {
            grid,
            intensity,
            label: label.into(),
        })
    }

    /// Trapezoid integral over the grid.
    pub fn integral(&self) -> f64 {
        self.grid.trapezoid(&self.intensity)
    }

    pub fn peak(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// Copy rescaled to unit integral; an all-zero pattern is returned as is.
    pub fn normalized(&self) -> Pattern {
        let total = self.integral();
        let scale = if total > 0.0 { 1.0 / total } else { 1.0 };
        Pattern {
            grid: self.grid.clone(),
            intensity: self.intensity.iter().map(|v| v * scale).collect(),
            label: self.label.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Pattern {
        Pattern {
            grid: self.grid.clone(),
            intensity: self.intensity.iter().map(|v| v * factor).collect(),
            label: self.label.clone(),
        }
    }

    /// Largest pointwise absolute difference.
    pub fn max_abs_diff(&self, other: &Pattern) -> f64 {
        self.intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `‖self - reference‖₂ / ‖reference‖₂` over the samples.
    pub fn relative_l2(&self, reference: &Pattern) -> f64 {
        let (num, den) = self
            .intensity
            .iter()
            .zip(&reference.intensity)
            .fold((0.0, 0.0), |(n, d), (a, b)| {
                (n + (a - b).powi(2), d + b * b)
            });
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> ScreenGrid {
        ScreenGrid::new(0.0, 1.0, 5).unwrap()
    }

    #[test]
    fn clamps_rounding_negatives() {
        let p = Pattern::new(grid(), vec![1.0, -1e-15, 2.0, 0.0, 1.0], "t").unwrap();
        assert_eq!(p.intensity[1], 0.0);
    }

    #[test]
    fn rejects_real_negatives() {
        assert!(Pattern::new(grid(), vec![1.0, -0.1, 2.0, 0.0, 1.0], "t").is_err());
        assert!(Pattern::new(grid(), vec![1.0, f64::NAN, 2.0, 0.0, 1.0], "t").is_err());
        assert!(Pattern::new(grid(), vec![1.0; 4], "t").is_err());
    }

    #[test]
    fn normalization() {
        let p = Pattern::new(grid(), vec![2.0; 5], "t").unwrap();
        assert!((p.integral() - 2.0).abs() < 1e-15);
        assert!((p.normalized().integral() - 1.0).abs() < 1e-15);
    }
}
