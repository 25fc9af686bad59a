//! Scalar diagnostics of interference patterns.

use crate::error::{Error, Result};
use crate::interferometer::ExperimentState;
use crate::pattern::Pattern;

/// Minimum number of grid samples a window must hold.
pub const MIN_WINDOW_POINTS: usize = 8;

/// Number of fringe periods in the default visibility window.
pub const DEFAULT_WINDOW_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityReport {
    pub visibility: f64,
    pub x_max: f64,
    pub x_min: f64,
    pub window: (f64, f64),
}

/// Window of `periods` fringe periods centered on `center`.
pub fn central_window(center: f64, fringe_period: f64, periods: f64) -> (f64, f64) {
    let half = 0.5 * periods * fringe_period;
    (center - half, center + half)
}

/// Indices of the grid samples inside `window`, inclusive.
fn window_indices(p: &Pattern, window: (f64, f64)) -> Result<std::ops::Range<usize>> {
    let (lo, hi) = window;
    let g = &p.grid;
    // a relative slack so endpoints that land on grid nodes are kept
    let slack = 1e-9 * g.step();
    if lo.is_nan() || hi.is_nan() || lo >= hi || lo < g.x_min - slack || hi > g.x_max + slack {
        return Err(Error::Window {
            lo,
            hi,
            points: 0,
            min: MIN_WINDOW_POINTS,
        });
    }
    let start = (0..g.n_points).find(|&i| g.x(i) >= lo - slack);
    let end = (0..g.n_points).rev().find(|&i| g.x(i) <= hi + slack);
    let range = match (start, end) {
        (Some(s), Some(e)) if e >= s => s..e + 1,
        _ => 0..0,
    };
    if range.len() < MIN_WINDOW_POINTS {
        return Err(Error::Window {
            lo,
            hi,
            points: range.len(),
            min: MIN_WINDOW_POINTS,
        });
    }
    Ok(range)
}

/// `V = (P_max - P_min) / (P_max + P_min)` over the grid samples in `window`.
pub fn visibility(p: &Pattern, window: (f64, f64)) -> Result<VisibilityReport> {
    let range = window_indices(p, window)?;
    let mut imax = range.start;
    let mut imin = range.start;
    for i in range {
        if p.intensity[i] > p.intensity[imax] {
            imax = i;
        }
        if p.intensity[i] < p.intensity[imin] {
            imin = i;
        }
    }
    let (pmax, pmin) = (p.intensity[imax], p.intensity[imin]);
    let visibility = if pmax + pmin < 1e-300 {
        0.0
    } else {
        ((pmax - pmin) / (pmax + pmin)).clamp(0.0, 1.0)
    };
    Ok(VisibilityReport {
        visibility,
        x_max: p.grid.x(imax),
        x_min: p.grid.x(imin),
        window,
    })
}

/// Positions of interior local maxima in `window`, refined by a parabola
/// through each peak sample and its neighbours.
///
/// Patterns whose variation across the window is below `1e-9` of their peak
/// have no fringes and yield no maxima.
pub fn fringe_maxima(p: &Pattern, window: (f64, f64)) -> Result<Vec<f64>> {
    let range = window_indices(p, window)?;
    let v = &p.intensity;
    let (hi, lo) = range
        .clone()
        .fold((f64::MIN, f64::MAX), |(h, l), i| (h.max(v[i]), l.min(v[i])));
    if hi - lo <= 1e-9 * hi.abs() {
        return Ok(Vec::new());
    }
    let step = p.grid.step();
    let mut peaks = Vec::new();
    for i in range.start + 1..range.end - 1 {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let offset = if denom != 0.0 {
                0.5 * (v[i - 1] - v[i + 1]) / denom
            } else {
                0.0
            };
            peaks.push(p.grid.x(i) + offset.clamp(-0.5, 0.5) * step);
        }
    }
    Ok(peaks)
}

/// Mean spacing between successive fringe maxima in `window`.
pub fn fringe_spacing(p: &Pattern, window: (f64, f64)) -> Result<f64> {
    let peaks = fringe_maxima(p, window)?;
    if peaks.len() < 2 {
        return Err(Error::TooFewMaxima { found: peaks.len() });
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

/// Optimal which-path discrimination bias for equal priors,
/// `√(1 - |<d_1|d_2>|²)`.
pub fn distinguishability(state: &ExperimentState) -> Result<f64> {
    let overlap = state.detector_overlap()?;
    Ok((1.0 - overlap.norm_sqr()).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::ScreenGrid;
    use std::f64::consts::PI;

    fn cosine(period: f64, contrast: f64, n: usize, half: f64) -> Pattern {
        let g = ScreenGrid::centered(half, n).unwrap();
        let v = g
            .points()
            .map(|x| 1.0 + contrast * (2.0 * PI * x / period).cos())
            .collect();
        Pattern::new(g, v, "cos").unwrap()
    }

    #[test]
    fn constant_has_zero_visibility() {
        let g = ScreenGrid::centered(1.0, 101).unwrap();
        let p = Pattern::new(g, vec![3.0; 101], "flat").unwrap();
        assert_eq!(visibility(&p, (-1.0, 1.0)).unwrap().visibility, 0.0);
        let zero = p.scaled(0.0);
        assert_eq!(visibility(&zero, (-1.0, 1.0)).unwrap().visibility, 0.0);
    }

    #[test]
    fn full_cosine() {
        let p = cosine(1.0, 1.0, 4001, 2.0);
        let r = visibility(&p, (-1.0, 1.0)).unwrap();
        assert!((r.visibility - 1.0).abs() < 1e-6);
        assert!(r.x_max.abs() <= 1.0 && r.x_min.abs() <= 1.0);
        assert!(r.x_max.abs() < 1e-12 || (r.x_max.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaling_keeps_visibility() {
        let p = cosine(1.0, 0.37, 801, 2.0);
        let a = visibility(&p, (-1.5, 1.5)).unwrap().visibility;
        let b = visibility(&p.scaled(1e7), (-1.5, 1.5)).unwrap().visibility;
        assert!((a - 0.37).abs() < 1e-12);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn window_errors() {
        let p = cosine(1.0, 1.0, 101, 1.0);
        assert!(matches!(
            visibility(&p, (0.0, 0.05)),
            Err(Error::Window { .. })
        ));
        assert!(visibility(&p, (-2.0, 0.5)).is_err());
        assert!(visibility(&p, (0.5, 0.0)).is_err());
    }

    #[test]
    fn spacing_of_cosine() {
        let p = cosine(0.25, 0.5, 2001, 1.0);
        let s = fringe_spacing(&p, (-0.9, 0.9)).unwrap();
        assert!((s - 0.25).abs() < 1e-6);
        // integer-period translation and rescaling
        let t = fringe_spacing(&p.scaled(42.0), (-0.65, 0.9)).unwrap();
        assert!((t - s).abs() < 1e-3 * s);
    }

    #[test]
    fn single_peak_window_is_an_error() {
        let p = cosine(1.0, 1.0, 2001, 1.0);
        assert!(matches!(
            fringe_spacing(&p, (-0.4, 0.4)),
            Err(Error::TooFewMaxima { found: 1 })
        ));
        let g = ScreenGrid::centered(1.0, 101).unwrap();
        let flat = Pattern::new(g, vec![1.0; 101], "flat").unwrap();
        assert!(matches!(
            fringe_spacing(&flat, (-1.0, 1.0)),
            Err(Error::TooFewMaxima { found: 0 })
        ));
    }

    #[test]
    fn window_layout() {
        assert_eq!(central_window(0.0, 2.0, 3.0), (-3.0, 3.0));
    }
}
