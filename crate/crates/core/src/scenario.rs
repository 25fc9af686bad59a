//! Experiment builders: plain two-slit, micromaser cavities, Rabi-pulse
//! markers, Ramsey field markers, and markers with a prescribed overlap.
//!
//! Every two-slit builder uses equal branch weights `1/√2`; the Rabi marker
//! carries the relative minus sign `(-1/√2, +1/√2)`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interferometer::{BranchState, ExperimentState};
use crate::propagation::{slit_wave, Aperture, BeamParams, ScreenGrid, WaveField};
use crate::state::{DetectorState, Strictness};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlits {
    pub first: Aperture,
    pub second: Aperture,
}

impl TwoSlits {
    /// Identical rectangular slits centered at `±separation / 2`.
    pub fn symmetric(separation: f64, width: f64) -> Result<Self> {
        Ok(Self {
            first: Aperture::rectangular(-0.5 * separation, width)?,
            second: Aperture::rectangular(0.5 * separation, width)?,
        })
    }

    pub fn separation(&self) -> f64 {
        (self.second.center - self.first.center).abs()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.first.center + self.second.center)
    }

    pub fn swapped(&self) -> Self {
        Self {
            first: self.second,
            second: self.first,
        }
    }
}

/// Center-of-mass waves from each slit on a shared screen grid.
#[derive(Debug, Clone)]
pub struct SlitWaves {
    pub beam: BeamParams,
    pub slits: TwoSlits,
    pub first: WaveField,
    pub second: WaveField,
}

impl SlitWaves {
    pub fn propagate(beam: &BeamParams, slits: &TwoSlits, grid: &ScreenGrid) -> Result<Self> {
        Ok(Self {
            beam: *beam,
            slits: *slits,
            first: slit_wave(&slits.first, beam, grid)?,
            second: slit_wave(&slits.second, beam, grid)?,
        })
    }

    pub fn grid(&self) -> &ScreenGrid {
        &self.first.grid
    }

    /// Two-branch state with the given coefficients and detectors.
    pub fn state(
        &self,
        coeffs: [Complex64; 2],
        detectors: [DetectorState; 2],
    ) -> Result<ExperimentState> {
        let [d1, d2] = detectors;
        ExperimentState::new(vec![
            BranchState::new(coeffs[0], self.first.clone(), d1),
            BranchState::new(coeffs[1], self.second.clone(), d2),
        ])
    }
}

fn symmetric_coeffs() -> [Complex64; 2] {
    [Complex64::new(FRAC_1_SQRT_2, 0.0); 2]
}

/// No detector: both branches carry the same one-dimensional marker.
pub fn plain_scenario(waves: &SlitWaves) -> Result<ExperimentState> {
    let d = DetectorState::fock(0, 1)?;
    waves.state(symmetric_coeffs(), [d.clone(), d])
}

/// Initial fields of the two which-path cavities.
#[derive(Debug, Clone, PartialEq)]
pub enum Cavities {
    /// Both cavities empty; detectors live in the span of `|1,0>`, `|0,1>`.
    VacuumSpan,
    /// Arbitrary single-mode fields, combined in the two-mode product basis.
    Fields {
        first: DetectorState,
        second: DetectorState,
    },
}

/// Warnings raised while building a scenario under [`Strictness::Warn`].
pub type Warnings = Vec<String>;

/// The atom deposits one photon in the cavity in front of the slit it
/// passes. The common final electronic state multiplies both branches and
/// is not carried.
pub fn micromaser_scenario(
    waves: &SlitWaves,
    cavities: &Cavities,
    strictness: Strictness,
) -> Result<(ExperimentState, Warnings)> {
    let mut warnings = Warnings::new();
    let detectors = match cavities {
        Cavities::VacuumSpan => [DetectorState::fock(0, 2)?, DetectorState::fock(1, 2)?],
        Cavities::Fields { first, second } => {
            let mut raise = |label: &str, s: &DetectorState| -> Result<DetectorState> {
                let r = s.add_photon_with(strictness)?;
                if let Some(top) = r.headroom_warning {
                    warnings.push(format!(
                        "cavity {label}: top Fock amplitude {top:.3e} leaves no headroom"
                    ));
                }
                Ok(r.state)
            };
            let raised1 = raise("1", first)?;
            let raised2 = raise("2", second)?;
            [raised1.tensor(second), first.tensor(&raised2)]
        }
    };
    Ok((waves.state(symmetric_coeffs(), detectors)?, warnings))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub theta: f64,
    pub phi: f64,
}

/// Pulse chains applied to a shared initial two-level state, one chain per
/// path.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub initial: DetectorState,
    pub first: Vec<Pulse>,
    pub second: Vec<Pulse>,
}

impl PulseSpec {
    /// π pulse on path 1 only, starting in the lower level `(1, 0)`.
    pub fn which_path() -> Self {
        Self {
            initial: DetectorState::fock(0, 2).expect("two-level ground state"),
            first: vec![Pulse {
                theta: std::f64::consts::PI,
                phi: 0.0,
            }],
            second: Vec::new(),
        }
    }
}

pub fn rabi_marker_scenario(waves: &SlitWaves, spec: &PulseSpec) -> Result<ExperimentState> {
    if spec.initial.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: spec.initial.dim(),
            right: 2,
        });
    }
    let apply = |chain: &[Pulse]| {
        chain
            .iter()
            .try_fold(spec.initial.clone(), |s, p| s.rabi_pulse(p.theta, p.phi))
    };
    let d1 = apply(&spec.first)?;
    let d2 = apply(&spec.second)?;
    let coeffs = [
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ];
    waves.state(coeffs, [d1, d2])
}

/// Path 1 keeps the initial microwave field `α_e`; path 2 carries the field
/// with one photon added, `α_g`.
pub fn ramsey_scenario(
    waves: &SlitWaves,
    field_initial: &DetectorState,
    strictness: Strictness,
) -> Result<(ExperimentState, Warnings)> {
    let added = field_initial.add_photon_with(strictness)?;
    let warnings = added
        .headroom_warning
        .map(|top| {
            vec![format!(
                "microwave field: top Fock amplitude {top:.3e} leaves no headroom"
            )]
        })
        .unwrap_or_default();
    let state = waves.state(symmetric_coeffs(), [field_initial.clone(), added.state])?;
    Ok((state, warnings))
}

/// Two-level markers `(1, 0)` and `(γ, √(1-|γ|²))` with overlap exactly `γ`.
pub fn markers_with_overlap(gamma: Complex64) -> Result<[DetectorState; 2]> {
    let g2 = gamma.norm_sqr();
    if g2 > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter {
            name: "overlap",
            reason: format!("|γ| = {} exceeds 1", gamma.norm()),
        });
    }
    let rest = (1.0 - g2).max(0.0).sqrt();
    Ok([
        DetectorState::fock(0, 2)?,
        DetectorState::new(vec![gamma, Complex64::new(rest, 0.0)])?,
    ])
}

pub fn overlap_scenario(waves: &SlitWaves, gamma: Complex64) -> Result<ExperimentState> {
    waves.state(symmetric_coeffs(), markers_with_overlap(gamma)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{pattern_bruteforce, pattern_orthodox};
    use crate::state::inner;

    fn waves() -> SlitWaves {
        let beam = BeamParams::new(1e-11, 1.0).unwrap();
        let slits = TwoSlits::symmetric(1e-6, 1e-15).unwrap();
        let grid = ScreenGrid::centered(2e-5, 201).unwrap();
        SlitWaves::propagate(&beam, &slits, &grid).unwrap()
    }

    #[test]
    fn vacuum_cavities_are_orthogonal() {
        let (s, w) =
            micromaser_scenario(&waves(), &Cavities::VacuumSpan, Strictness::Strict).unwrap();
        assert!(w.is_empty());
        assert_eq!(s.detector_overlap().unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vacuum_product_basis_agrees_with_span() {
        let vac = DetectorState::fock(0, 3).unwrap();
        let cav = Cavities::Fields {
            first: vac.clone(),
            second: vac,
        };
        let (s, _) = micromaser_scenario(&waves(), &cav, Strictness::Strict).unwrap();
        assert_eq!(s.detector_dim(), 9);
        assert_eq!(s.detector_overlap().unwrap().norm(), 0.0);
        let (span, _) =
            micromaser_scenario(&waves(), &Cavities::VacuumSpan, Strictness::Strict).unwrap();
        let a = pattern_orthodox(&s).unwrap();
        let b = pattern_orthodox(&span).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12 * a.peak());
    }

    #[test]
    fn loaded_cavities_overlap_per_mode() {
        let alpha = 3.0;
        let field = DetectorState::coherent(Complex64::new(alpha, 0.0), 40).unwrap();
        let cav = Cavities::Fields {
            first: field.clone(),
            second: field,
        };
        let (s, _) = micromaser_scenario(&waves(), &cav, Strictness::Strict).unwrap();
        let per_mode = alpha / (alpha * alpha + 1.0f64).sqrt();
        let got = s.detector_overlap().unwrap().norm();
        assert!((got - per_mode * per_mode).abs() < 1e-9);
    }

    #[test]
    fn relabeling_slits_leaves_pattern() {
        let w = waves();
        let swapped = SlitWaves::propagate(&w.beam, &w.slits.swapped(), w.grid()).unwrap();
        let (a, _) = micromaser_scenario(&w, &Cavities::VacuumSpan, Strictness::Strict).unwrap();
        let (b, _) =
            micromaser_scenario(&swapped, &Cavities::VacuumSpan, Strictness::Strict).unwrap();
        let pa = pattern_orthodox(&a).unwrap();
        let pb = pattern_orthodox(&b).unwrap();
        assert!(pa.max_abs_diff(&pb) < 1e-12 * pa.peak());
    }

    #[test]
    fn pi_pulse_on_one_path_marks_it() {
        let s = rabi_marker_scenario(&waves(), &PulseSpec::which_path()).unwrap();
        let [b1, b2] = [&s.branches()[0], &s.branches()[1]];
        assert!(inner(&b1.detector, &b2.detector).unwrap().norm() < 1e-15);
        assert!(b1.coeff.re < 0.0 && b2.coeff.re > 0.0);
    }

    #[test]
    fn no_pulses_gives_dark_center() {
        let w = waves();
        let spec = PulseSpec {
            initial: DetectorState::fock(0, 2).unwrap(),
            first: vec![],
            second: vec![],
        };
        let s = rabi_marker_scenario(&w, &spec).unwrap();
        let p = pattern_orthodox(&s).unwrap();
        let brute = pattern_bruteforce(&s).unwrap();
        assert!(p.max_abs_diff(&brute) < 1e-12 * p.peak());
        let center = w.grid().n_points / 2;
        assert_eq!(w.grid().x(center), 0.0);
        assert!(p.intensity[center] < 1e-12 * p.peak());
        let zero_pulses = PulseSpec {
            first: vec![Pulse {
                theta: 0.0,
                phi: 0.3,
            }],
            second: vec![Pulse {
                theta: 0.0,
                phi: 1.1,
            }],
            ..spec
        };
        let q = pattern_orthodox(&rabi_marker_scenario(&w, &zero_pulses).unwrap()).unwrap();
        assert!(p.max_abs_diff(&q) < 1e-12 * p.peak());
    }

    #[test]
    fn rabi_requires_two_levels() {
        let spec = PulseSpec {
            initial: DetectorState::fock(0, 3).unwrap(),
            first: vec![],
            second: vec![],
        };
        assert!(rabi_marker_scenario(&waves(), &spec).is_err());
    }

    #[test]
    fn prescribed_overlap() {
        for g in [0.0, 0.3, 1.0] {
            let [a, b] = markers_with_overlap(Complex64::new(g, 0.0)).unwrap();
            assert!((inner(&a, &b).unwrap().re - g).abs() < 1e-15);
        }
        assert!(markers_with_overlap(Complex64::new(1.5, 0.0)).is_err());
    }
}
