//! Free-space propagation from slit apertures to a one-dimensional screen.
//!
//! A unit plane wave at normal incidence illuminates each aperture. The field
//! on the screen is the 1D Fresnel integral
//!
//! ```text
//! psi(x) = sqrt(k / (2 pi L)) e^{-i pi/4} ∫ A(x') exp(i k (x - x')^2 / (2L)) dx'
//! ```
//!
//! with `A` unit-normalized (`∫|A|^2 dx' = 1`). The quadratic phase in `x` is
//! factored out of the integral so the integrand only carries the small
//! phases `k x'^2 / 2L` and `k x x' / L`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::quadrature::{self, MAX_NODES};

/// Successive doubling levels closer than this are converged.
pub const CONVERGED_CHANGE: f64 = 1e-10;
/// Accepted change at the node cap; anything larger is a non-convergence.
pub const CAP_CHANGE: f64 = 1e-8;
/// Gaussian apertures are integrated over this many widths either side.
pub const GAUSSIAN_SUPPORT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Rectangular,
    /// `width` is the 1/e² intensity half-width.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aperture {
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub profile: Profile,
}

impl Aperture {
    pub fn new(center: f64, width: f64, profile: Profile) -> Result<Self> {
        let a = Self {
            center,
            width,
            profile,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn rectangular(center: f64, width: f64) -> Result<Self> {
        Self::new(center, width, Profile::Rectangular)
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::new(center, width, Profile::Gaussian)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "aperture.width",
                reason: format!("must be positive, got {}", self.width),
            });
        }
        if !self.center.is_finite() {
            return Err(Error::InvalidParameter {
                name: "aperture.center",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    /// Integration support `[lo, hi]`.
    pub fn support(&self) -> (f64, f64) {
        let half = match self.profile {
            Profile::Rectangular => 0.5 * self.width,
            Profile::Gaussian => GAUSSIAN_SUPPORT * self.width,
        };
        (self.center - half, self.center + half)
    }

    /// Unit-normalized amplitude at `x`.
    pub fn amplitude(&self, x: f64) -> f64 {
        let u = x - self.center;
        match self.profile {
            Profile::Rectangular => {
                if u.abs() <= 0.5 * self.width {
                    self.width.sqrt().recip()
                } else {
                    0.0
                }
            }
            Profile::Gaussian => {
                let w = self.width;
                (2.0 / (PI * w * w)).powf(0.25) * (-(u * u) / (w * w)).exp()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamParams {
    /// de Broglie wavelength in meters.
    pub wavelength: f64,
    /// Slit-to-screen distance in meters.
    pub distance: f64,
}

impl BeamParams {
    pub fn new(wavelength: f64, distance: f64) -> Result<Self> {
        let b = Self {
            wavelength,
            distance,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beam.wavelength",
                reason: format!("must be positive, got {}", self.wavelength),
            });
        }
        if !(self.distance > 0.0 && self.distance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beam.distance",
                reason: format!("must be positive, got {}", self.distance),
            });
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Two-slit fringe period `λL/d`.
    pub fn fringe_period(&self, separation: f64) -> f64 {
        self.wavelength * self.distance / separation
    }
}

/// Uniform screen samples with inclusive endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl ScreenGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn centered(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need x_min < x_max, got [{}, {}]", self.x_min, self.x_max),
            });
        }
        if self.n_points < 2 {
            return Err(Error::InvalidParameter {
                name: "grid.n_points",
                reason: format!("need at least 2 points, got {}", self.n_points),
            });
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        let n = values.len();
        if n < 2 {
            return 0.0;
        }
        let inner: f64 = values.iter().sum();
        (inner - 0.5 * (values[0] + values[n - 1])) * self.step()
    }
}

/// Complex center-of-mass amplitude on the screen, in m^{-1/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: ScreenGrid,
    pub amplitudes: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: ScreenGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if amplitudes.len() != grid.n_points {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: grid.n_points,
            });
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite wave amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    /// `∫|psi|^2 dx` by the trapezoid rule.
    pub fn probability(&self) -> f64 {
        let density: Vec<f64> = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        self.grid.trapezoid(&density)
    }

    pub fn intensity(&self, label: &str) -> Result<Pattern> {
        Pattern::new(
            self.grid.clone(),
            self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
            label,
        )
    }

    /// Pointwise sum of two fields on the same grid.
    pub fn add(&self, other: &WaveField) -> Result<WaveField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                first: 0,
                second: 1,
            });
        }
        Ok(WaveField {
            grid: self.grid.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &WaveField) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Quadrature samples of one aperture: positions and the pre-multiplied
/// weight `w_i A(x'_i) exp(i k x'_i^2 / 2L)`.
fn aperture_samples(aperture: &Aperture, beam: &BeamParams, nodes: usize) -> Vec<(f64, Complex64)> {
    let rule = quadrature::rule(nodes);
    let (lo, hi) = aperture.support();
    let half = 0.5 * (hi - lo);
    let k_over_2l = beam.wavenumber() / (2.0 * beam.distance);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let xp = aperture.center + half * t;
            let weight = w * half * aperture.amplitude(xp);
            (xp, Complex64::from_polar(weight, k_over_2l * xp * xp))
        })
        .collect()
}

/// Evaluates the Fresnel sum at every grid point. Each point is reduced
/// sequentially in sample order, so the result does not depend on how the
/// grid is split across threads.
fn fresnel_sum(
    samples: &[(f64, Complex64)],
    beam: &BeamParams,
    grid: &ScreenGrid,
) -> Vec<Complex64> {
    let k = beam.wavenumber();
    let l = beam.distance;
    let prefactor = Complex64::from_polar((beam.wavelength * l).sqrt().recip(), -PI / 4.0);
    (0..grid.n_points)
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            let kx_over_l = k * x / l;
            let sum = samples
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &(xp, a)| {
                    acc + a * Complex64::from_polar(1.0, -kx_over_l * xp)
                });
            prefactor * Complex64::from_polar(1.0, k * x * x / (2.0 * l)) * sum
        })
        .collect()
}

/// Propagates one aperture with a fixed Gauss-Legendre order.
pub fn slit_wave_fixed(
    aperture: &Aperture,
    beam: &BeamParams,
    grid: &ScreenGrid,
    nodes: usize,
) -> Result<WaveField> {
    aperture.validate()?;
    beam.validate()?;
    grid.validate()?;
    let samples = aperture_samples(aperture, beam, nodes);
    WaveField::new(grid.clone(), fresnel_sum(&samples, beam, grid))
}

/// Propagates a compound aperture (the sum of several unit-normalized
/// apertures) in a single pass, each aperture using `nodes` quadrature nodes.
pub fn compound_wave_fixed(
    apertures: &[Aperture],
    beam: &BeamParams,
    grid: &ScreenGrid,
    nodes: usize,
) -> Result<WaveField> {
    beam.validate()?;
    grid.validate()?;
    let mut samples = Vec::with_capacity(apertures.len() * nodes);
    for a in apertures {
        a.validate()?;
        samples.extend(aperture_samples(a, beam, nodes));
    }
    WaveField::new(grid.clone(), fresnel_sum(&samples, beam, grid))
}

/// Result of the adaptive propagation, with the node count it settled on.
#[derive(Debug, Clone)]
pub struct Propagated {
    pub wave: WaveField,
    pub nodes: usize,
    pub change: f64,
}

/// Propagates one aperture, doubling the quadrature order from 64 nodes
/// until the field changes by less than `1e-10` relative (max norm) or the
/// 4096-node cap is hit.
pub fn slit_wave(aperture: &Aperture, beam: &BeamParams, grid: &ScreenGrid) -> Result<WaveField> {
    slit_wave_adaptive(aperture, beam, grid).map(|p| p.wave)
}

pub fn slit_wave_adaptive(
    aperture: &Aperture,
    beam: &BeamParams,
    grid: &ScreenGrid,
) -> Result<Propagated> {
    let mut previous: Option<WaveField> = None;
    let mut last = None;
    for nodes in quadrature::levels() {
        let wave = slit_wave_fixed(aperture, beam, grid, nodes)?;
        if let Some(prev) = previous.take() {
            let scale = wave.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
            let (worst, diff) = wave
                .amplitudes
                .iter()
                .zip(&prev.amplitudes)
                .map(|(a, b)| (a - b).norm())
                .enumerate()
                .fold(
                    (0, 0.0),
                    |best, (i, d)| if d > best.1 { (i, d) } else { best },
                );
            let change = if scale > 0.0 { diff / scale } else { 0.0 };
            if change < CONVERGED_CHANGE {
                return Ok(Propagated {
                    wave,
                    nodes,
                    change,
                });
            }
            last = Some((change, prev.amplitudes[worst], wave.amplitudes[worst]));
            if nodes == MAX_NODES {
                if change <= CAP_CHANGE {
                    return Ok(Propagated {
                        wave,
                        nodes,
                        change,
                    });
                }
                break;
            }
        }
        previous = Some(wave);
    }
    let (change, previous, current) = last.expect("at least two doubling levels");
    Err(Error::NonConvergence {
        nodes: MAX_NODES,
        change,
        previous,
        current,
    })
}

/// Closed-form far-field two-slit intensity for rectangular slits,
/// `cos²(π d x / λL) sinc²(a x / λL)`, unit-normalized over the grid.
pub fn fraunhofer_reference(
    slit_separation: f64,
    slit_width: f64,
    beam: &BeamParams,
    grid: &ScreenGrid,
) -> Result<Pattern> {
    beam.validate()?;
    grid.validate()?;
    if !(slit_separation > 0.0 && slit_width > 0.0) {
        return Err(Error::InvalidParameter {
            name: "slit geometry",
            reason: "separation and width must be positive".into(),
        });
    }
    let ll = beam.wavelength * beam.distance;
    let intensity: Vec<f64> = grid
        .points()
        .map(|x| {
            let fringe = (PI * slit_separation * x / ll).cos();
            fringe * fringe * sinc(slit_width * x / ll).powi(2)
        })
        .collect();
    Ok(Pattern::new(grid.clone(), intensity, "fraunhofer")?.normalized())
}

/// `sin(πu) / (πu)`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        let a = PI * u;
        a.sin() / a
    }
}
