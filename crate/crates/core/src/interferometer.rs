//! Branch states and the interference patterns they produce.
//!
//! An [`ExperimentState`] is a superposition `Σ_j c_j ψ_j(x) |d_j>` of
//! center-of-mass waves tagged with detector states. The orthodox pattern
//! traces the detector out, so the cross term between paths `j` and `k` is
//! weighted by `<d_j|d_k>`. The center-of-mass-only pattern ignores the
//! detectors and always shows the full two-path interference.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::propagation::{ScreenGrid, WaveField};
use crate::state::{self, check_orthonormal, DetectorState, Strictness};

/// Identifier of the random-phase generator, echoed in run reports.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/rand_chacha-0.3/seed_from_u64";

/// Joint vectors larger than this are refused by [`pattern_bruteforce`].
pub const BRUTEFORCE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    pub coeff: Complex64,
    pub path_wave: WaveField,
    pub detector: DetectorState,
}

impl BranchState {
    pub fn new(coeff: Complex64, path_wave: WaveField, detector: DetectorState) -> Self {
        Self {
            coeff,
            path_wave,
            detector,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentState {
    branches: Vec<BranchState>,
}

impl ExperimentState {
    /// Validates the branches and rescales the coefficients so that
    /// `Σ_j |c_j|² ∫|ψ_j|² dx = 1` on the screen grid.
    pub fn new(branches: Vec<BranchState>) -> Result<Self> {
        let mut state = Self::from_raw(branches)?;
        let total = state.normalization();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidState(format!(
                "cannot normalize state with weight {total:e}"
            )));
        }
        let scale = total.sqrt().recip();
        for b in &mut state.branches {
            b.coeff *= scale;
        }
        Ok(state)
    }

    /// Validates structure only; coefficients are kept as given.
    pub fn from_raw(branches: Vec<BranchState>) -> Result<Self> {
        let first = branches.first().ok_or(Error::EmptyState)?;
        for (j, b) in branches.iter().enumerate().skip(1) {
            if b.path_wave.grid != first.path_wave.grid {
                return Err(Error::GridMismatch {
                    first: 0,
                    second: j,
                });
            }
            if b.detector.dim() != first.detector.dim() {
                return Err(Error::DimensionMismatch {
                    left: first.detector.dim(),
                    right: b.detector.dim(),
                });
            }
        }
        if branches
            .iter()
            .any(|b| !b.coeff.re.is_finite() || !b.coeff.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite branch coefficient".into()));
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[BranchState] {
        &self.branches
    }

    pub fn grid(&self) -> &ScreenGrid {
        &self.branches[0].path_wave.grid
    }

    pub fn detector_dim(&self) -> usize {
        self.branches[0].detector.dim()
    }

    /// `Σ_j |c_j|² ∫|ψ_j|² dx`.
    pub fn normalization(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.coeff.norm_sqr() * b.path_wave.probability())
            .sum()
    }

    /// Same state with every detector replaced through `f`.
    pub fn map_detectors<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, &DetectorState) -> Result<DetectorState>,
    {
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(j, b)| {
                Ok(BranchState {
                    detector: f(j, &b.detector)?,
                    ..b.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(branches)
    }

    /// Same state with branch coefficients multiplied by `factors`.
    pub fn with_phases(&self, factors: &[Complex64]) -> Self {
        let branches = self
            .branches
            .iter()
            .zip(factors)
            .map(|(b, f)| BranchState {
                coeff: b.coeff * f,
                ..b.clone()
            })
            .collect();
        Self { branches }
    }

    /// Overlap `<d_1|d_2>` of a two-branch state.
    pub fn detector_overlap(&self) -> Result<Complex64> {
        if self.branches.len() != 2 {
            return Err(Error::BranchCount {
                expected: 2,
                found: self.branches.len(),
            });
        }
        state::inner(&self.branches[0].detector, &self.branches[1].detector)
    }

    /// Branch amplitudes `c_j ψ_j(x_m)` at grid point `m`.
    fn amplitudes_at(&self, m: usize) -> impl Iterator<Item = Complex64> + '_ {
        self.branches
            .iter()
            .map(move |b| b.coeff * b.path_wave.amplitudes[m])
    }
}

/// Detector overlaps `<d_j|d_k>`.
pub fn detector_gram(state: &ExperimentState) -> Result<Vec<Vec<Complex64>>> {
    let br = state.branches();
    br.iter()
        .map(|a| {
            br.iter()
                .map(|b| state::inner(&a.detector, &b.detector))
                .collect()
        })
        .collect()
}

/// `G_jk = conj(c_j) c_k <d_j|d_k>`.
pub fn gram_matrix(state: &ExperimentState) -> Result<Vec<Vec<Complex64>>> {
    let overlaps = detector_gram(state)?;
    let br = state.branches();
    Ok(br
        .iter()
        .enumerate()
        .map(|(j, a)| {
            br.iter()
                .enumerate()
                .map(|(k, b)| a.coeff.conj() * b.coeff * overlaps[j][k])
                .collect()
        })
        .collect())
}

/// Upper-triangular `R` with `R†R = G` for a Hermitian positive
/// semi-definite `G`. Rows whose pivot vanishes to rounding are zero.
pub fn gram_factor(g: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = g.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut r = vec![vec![zero; n]; n];
    for i in 0..n {
        let pivot2 = g[i][i].re - (0..i).map(|k| r[k][i].norm_sqr()).sum::<f64>();
        if pivot2 <= 1e-14 * g[i][i].re.abs() {
            continue;
        }
        let pivot = pivot2.sqrt();
        r[i][i] = Complex64::new(pivot, 0.0);
        for j in i + 1..n {
            let s: Complex64 = (0..i).map(|k| r[k][i].conj() * r[k][j]).sum();
            r[i][j] = (g[i][j] - s) / pivot;
        }
    }
    r
}

/// Orthodox pattern and the largest imaginary residue of the direct double
/// sum relative to the pattern's peak.
///
/// The pattern itself is evaluated as `‖R a(x)‖²` with `R` from
/// [`gram_factor`], which is real and non-negative by construction and
/// reduces to `|Σ_j a_j|²` exactly when all markers coincide.
pub fn pattern_orthodox_with_residue(state: &ExperimentState) -> Result<(Pattern, f64)> {
    let overlaps = detector_gram(state)?;
    let r = gram_factor(&overlaps);
    let n = state.grid().n_points;
    let values: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|m| {
            let amps: Vec<Complex64> = state.amplitudes_at(m).collect();
            let mut direct = Complex64::new(0.0, 0.0);
            for (j, aj) in amps.iter().enumerate() {
                for (k, ak) in amps.iter().enumerate() {
                    direct += aj.conj() * ak * overlaps[j][k];
                }
            }
            let p: f64 = r
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&amps)
                        .map(|(rk, ak)| rk * ak)
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .sum();
            (p, direct.im)
        })
        .collect();
    let peak = values.iter().map(|v| v.0).fold(0.0, f64::max);
    let imag = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let residue = if peak > 0.0 { imag / peak } else { imag };
    let pattern = Pattern::new(
        state.grid().clone(),
        values.iter().map(|v| v.0).collect(),
        "orthodox",
    )?;
    Ok((pattern, residue))
}

/// `P(x) = Σ_jk conj(c_j ψ_j) c_k ψ_k <d_j|d_k>`.
pub fn pattern_orthodox(state: &ExperimentState) -> Result<Pattern> {
    pattern_orthodox_with_residue(state).map(|(p, _)| p)
}

/// `P(x) = |Σ_j c_j ψ_j|²`; detector states are never read.
pub fn pattern_paper_claim(state: &ExperimentState) -> Result<Pattern> {
    let n = state.grid().n_points;
    let intensity: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| state.amplitudes_at(m).sum::<Complex64>().norm_sqr())
        .collect();
    Pattern::new(state.grid().clone(), intensity, "paper_claim")
}

/// Phasors `e^{iδ}` with `δ` uniform on `[0, 2π)`, drawn sample-major.
pub fn random_phasors(n_samples: usize, n_branches: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples * n_branches)
        .map(|_| {
            let delta: f64 = rng.gen::<f64>() * 2.0 * PI;
            Complex64::from_polar(1.0, delta)
        })
        .collect()
}

/// Ensemble mean of the center-of-mass pattern with an independent random
/// phase on every branch in every sample.
pub fn incoherent_average(state: &ExperimentState, n_samples: usize, seed: u64) -> Result<Pattern> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "must be at least 1".into(),
        });
    }
    let nb = state.branches().len();
    let phasors = random_phasors(n_samples, nb, seed);
    let n = state.grid().n_points;
    let inv = 1.0 / n_samples as f64;
    let intensity: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| {
            let amps: Vec<Complex64> = state.amplitudes_at(m).collect();
            let total = phasors.chunks_exact(nb).fold(0.0, |acc, sample| {
                let field: Complex64 = amps.iter().zip(sample).map(|(a, p)| a * p).sum();
                acc + field.norm_sqr()
            });
            total * inv
        })
        .collect();
    Pattern::new(state.grid().clone(), intensity, "incoherent")
}

/// Marginal of the explicit joint vector over (grid point, detector index).
/// An independent route to [`pattern_orthodox`].
pub fn pattern_bruteforce(state: &ExperimentState) -> Result<Pattern> {
    let grid = state.grid();
    let dim = state.detector_dim();
    let size = grid.n_points.saturating_mul(dim);
    if size > BRUTEFORCE_CAP {
        return Err(Error::SizeCap {
            size,
            cap: BRUTEFORCE_CAP,
        });
    }
    let mut joint = vec![Complex64::new(0.0, 0.0); size];
    for b in state.branches() {
        let det = b.detector.amplitudes();
        for (m, psi) in b.path_wave.amplitudes.iter().enumerate() {
            let a = b.coeff * psi;
            for (n, d) in det.iter().enumerate() {
                joint[m * dim + n] += a * d;
            }
        }
    }
    let intensity = joint
        .chunks_exact(dim)
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    Pattern::new(grid.clone(), intensity, "bruteforce")
}

/// One outcome of a detector measurement in an eraser basis.
#[derive(Debug, Clone)]
pub struct ErasedOutcome {
    pub probability: f64,
    /// `|Σ_j c_j ψ_j <b|d_j>|²`, integrating to `probability`.
    pub joint: Pattern,
    /// `joint / probability`; all zeros when the outcome is impossible.
    pub conditional: Pattern,
}

/// Projects the detectors onto an orthonormal, complete `basis` and returns
/// the pattern conditioned on each outcome.
pub fn erase(state: &ExperimentState, basis: &[DetectorState]) -> Result<Vec<ErasedOutcome>> {
    let dim = state.detector_dim();
    for b in basis {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: b.dim(),
                right: dim,
            });
        }
    }
    check_orthonormal(basis)?;
    if basis.len() < dim {
        return Err(Error::IncompleteBasis {
            have: basis.len(),
            need: dim,
        });
    }
    let grid = state.grid();
    basis
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let weights: Vec<Complex64> = state
                .branches()
                .iter()
                .map(|br| state::inner(b, &br.detector))
                .collect::<Result<_>>()?;
            let intensity: Vec<f64> = (0..grid.n_points)
                .map(|m| {
                    state
                        .amplitudes_at(m)
                        .zip(&weights)
                        .map(|(a, w)| a * w)
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .collect();
            let joint = Pattern::new(grid.clone(), intensity, format!("eraser_{i}"))?;
            let probability = joint.integral();
            let conditional = if probability > 0.0 {
                joint.scaled(probability.recip())
            } else {
                joint.scaled(0.0)
            };
            Ok(ErasedOutcome {
                probability,
                joint,
                conditional,
            })
        })
        .collect()
}

/// Eraser basis options for two-branch states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EraserBasis {
    /// Standard basis of the detector space.
    Computational,
    /// The branch detector states themselves, completed to a basis.
    WhichPath,
    /// `(d_1 ± d_2)/√2`, completed to a basis.
    PlusMinus,
}

pub fn eraser_basis(state: &ExperimentState, kind: EraserBasis) -> Result<Vec<DetectorState>> {
    let dim = state.detector_dim();
    match kind {
        EraserBasis::Computational => (0..dim).map(|n| DetectorState::fock(n, dim)).collect(),
        EraserBasis::WhichPath => {
            let seed: Vec<DetectorState> = state
                .branches()
                .iter()
                .map(|b| b.detector.clone())
                .collect();
            state::complete_basis(&seed, dim)
        }
        EraserBasis::PlusMinus => {
            state.detector_overlap()?;
            let d1 = state.branches()[0].detector.amplitudes();
            let d2 = state.branches()[1].detector.amplitudes();
            let plus = DetectorState::new(d1.iter().zip(d2).map(|(a, b)| a + b).collect())?;
            let minus = DetectorState::new(d1.iter().zip(d2).map(|(a, b)| a - b).collect())?;
            state::complete_basis(&[plus, minus], dim)
        }
    }
}

/// `P_g(φ) = ½[1 + Re(<α_e|α_g> e^{iφ})]` for explicitly supplied field states.
pub fn ramsey_probability_explicit(
    phi: f64,
    alpha_e: &DetectorState,
    alpha_g: &DetectorState,
) -> Result<f64> {
    let overlap = state::inner(alpha_e, alpha_g)?;
    let p = 0.5 * (1.0 + (overlap * Complex64::from_polar(1.0, phi)).re);
    Ok(p.clamp(0.0, 1.0))
}

/// Ramsey probability with `α_e` the initial field and `α_g` the field after
/// one photon is deposited.
pub fn ramsey_probability(phi: f64, field_initial: &DetectorState) -> Result<f64> {
    let (alpha_e, alpha_g) = ramsey_fields(field_initial, Strictness::Strict)?;
    ramsey_probability_explicit(phi, &alpha_e, &alpha_g)
}

/// `(α_e, α_g)` generated from the initial field by photon addition.
pub fn ramsey_fields(
    field_initial: &DetectorState,
    strictness: Strictness,
) -> Result<(DetectorState, DetectorState)> {
    let added = field_initial.add_photon_with(strictness)?;
    Ok((field_initial.clone(), added.state))
}

/// `P_g` sampled at `n` equally spaced phases on `[0, 2π)`.
pub fn ramsey_curve(
    alpha_e: &DetectorState,
    alpha_g: &DetectorState,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    (0..n)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / n as f64;
            Ok((phi, ramsey_probability_explicit(phi, alpha_e, alpha_g)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn grid() -> ScreenGrid {
        ScreenGrid::new(-0.5, 0.5, 33).unwrap()
    }

    #[test]
    fn gram_factor_reproduces_gram() {
        let g = vec![
            vec![c(1.0), Complex64::new(0.3, 0.4), c(0.0)],
            vec![Complex64::new(0.3, -0.4), c(1.0), c(0.5)],
            vec![c(0.0), c(0.5), c(1.0)],
        ];
        let r = gram_factor(&g);
        for i in 0..3 {
            for j in 0..3 {
                let v: Complex64 = (0..3).map(|k| r[k][i].conj() * r[k][j]).sum();
                assert!((v - g[i][j]).norm() < 1e-14);
            }
            for row in r.iter().skip(i + 1) {
                assert_eq!(row[i], c(0.0));
            }
        }
        let rank_one = gram_factor(&[vec![c(1.0), c(1.0)], vec![c(1.0), c(1.0)]]);
        assert_eq!(rank_one[1], vec![c(0.0), c(0.0)]);
    }

    fn plane(k: f64) -> WaveField {
        let g = grid();
        let amps = g
            .points()
            .map(|x| Complex64::from_polar(1.0, k * x))
            .collect();
        WaveField::new(g, amps).unwrap()
    }

    fn two_branch(d1: DetectorState, d2: DetectorState) -> ExperimentState {
        ExperimentState::new(vec![
            BranchState::new(c(1.0), plane(10.0), d1),
            BranchState::new(c(1.0), plane(-10.0), d2),
        ])
        .unwrap()
    }

    #[test]
    fn construction_normalizes() {
        let d = DetectorState::fock(0, 1).unwrap();
        let s = two_branch(d.clone(), d);
        assert!((s.normalization() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn construction_rejects_mismatches() {
        assert!(matches!(
            ExperimentState::new(vec![]),
            Err(Error::EmptyState)
        ));
        let other =
            WaveField::new(ScreenGrid::new(-0.5, 0.5, 17).unwrap(), vec![c(1.0); 17]).unwrap();
        let d = DetectorState::fock(0, 2).unwrap();
        let r = ExperimentState::new(vec![
            BranchState::new(c(1.0), plane(1.0), d.clone()),
            BranchState::new(c(1.0), other, d.clone()),
        ]);
        assert!(matches!(r, Err(Error::GridMismatch { .. })));
        let r = ExperimentState::new(vec![
            BranchState::new(c(1.0), plane(1.0), d),
            BranchState::new(c(1.0), plane(2.0), DetectorState::fock(0, 3).unwrap()),
        ]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn orthogonal_detectors_drop_cross_term() {
        let s = two_branch(
            DetectorState::fock(0, 2).unwrap(),
            DetectorState::fock(1, 2).unwrap(),
        );
        let p = pattern_orthodox(&s).unwrap();
        for (m, v) in p.intensity.iter().enumerate() {
            let expect: f64 = s.amplitudes_at(m).map(|a| a.norm_sqr()).sum();
            assert!((v - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn identical_detectors_match_paper_claim() {
        let d = DetectorState::coherent(Complex64::new(0.3, 0.7), 8).unwrap();
        let s = two_branch(d.clone(), d);
        let a = pattern_orthodox(&s).unwrap();
        let b = pattern_paper_claim(&s).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn single_branch() {
        let s = ExperimentState::new(vec![BranchState::new(
            c(2.0),
            plane(3.0),
            DetectorState::fock(0, 2).unwrap(),
        )])
        .unwrap();
        let p = pattern_paper_claim(&s).unwrap();
        let b = pattern_bruteforce(&s).unwrap();
        // unit-modulus plane wave over a unit grid: constant density 1
        assert!(p.intensity.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(b.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn gram_is_hermitian() {
        let s = two_branch(
            DetectorState::coherent(c(0.4), 6).unwrap(),
            DetectorState::coherent(Complex64::new(-0.2, 0.5), 6).unwrap(),
        );
        let g = gram_matrix(&s).unwrap();
        for (j, row) in g.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(*v, g[k][j].conj());
            }
        }
    }

    #[test]
    fn incoherent_is_deterministic() {
        let d = DetectorState::fock(0, 1).unwrap();
        let s = two_branch(d.clone(), d);
        let a = incoherent_average(&s, 50, 7).unwrap();
        let b = incoherent_average(&s, 50, 7).unwrap();
        assert_eq!(a, b);
        assert!(incoherent_average(&s, 0, 7).is_err());
    }

    #[test]
    fn one_sample_is_coherent() {
        let d = DetectorState::fock(0, 1).unwrap();
        let s = two_branch(d.clone(), d);
        let p = incoherent_average(&s, 1, 3).unwrap();
        let phasors = random_phasors(1, 2, 3);
        let shifted = pattern_paper_claim(&s.with_phases(&phasors)).unwrap();
        assert!(p.max_abs_diff(&shifted) < 1e-14);
    }

    #[test]
    fn eraser_rejects_bad_bases() {
        let s = two_branch(
            DetectorState::fock(0, 3).unwrap(),
            DetectorState::fock(1, 3).unwrap(),
        );
        let partial = vec![
            DetectorState::fock(0, 3).unwrap(),
            DetectorState::fock(1, 3).unwrap(),
        ];
        assert!(matches!(
            erase(&s, &partial),
            Err(Error::IncompleteBasis { have: 2, need: 3 })
        ));
        let skew = vec![
            DetectorState::fock(0, 3).unwrap(),
            DetectorState::from_real(&[1.0, 1.0, 0.0]).unwrap(),
            DetectorState::fock(2, 3).unwrap(),
        ];
        assert!(matches!(
            erase(&s, &skew),
            Err(Error::NonOrthogonalBasis { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn which_path_readout_has_no_fringes() {
        let d1 = DetectorState::fock(0, 2).unwrap();
        let d2 = DetectorState::fock(1, 2).unwrap();
        let s = two_branch(d1, d2);
        let basis = eraser_basis(&s, EraserBasis::WhichPath).unwrap();
        let out = erase(&s, &basis).unwrap();
        for (j, o) in out.iter().enumerate() {
            for (m, v) in o.joint.intensity.iter().enumerate() {
                let b = &s.branches()[j];
                let expect = (b.coeff * b.path_wave.amplitudes[m]).norm_sqr();
                assert!((v - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn plus_minus_needs_orthogonal_markers() {
        let d = DetectorState::fock(0, 2).unwrap();
        let s = two_branch(d.clone(), d);
        assert!(eraser_basis(&s, EraserBasis::PlusMinus).is_err());
    }

    #[test]
    fn ramsey_vacuum_and_cosine_extremes() {
        let vac = DetectorState::fock(0, 8).unwrap();
        for i in 0..16 {
            let p = ramsey_probability(i as f64 * 0.4, &vac).unwrap();
            assert!((p - 0.5).abs() < 1e-15);
        }
        let e = DetectorState::from_real(&[1.0, 0.0]).unwrap();
        let g = DetectorState::from_real(&[0.6, 0.8]).unwrap();
        let max = ramsey_probability_explicit(0.0, &e, &g).unwrap();
        let min = ramsey_probability_explicit(PI, &e, &g).unwrap();
        assert!((max - 0.8).abs() < 1e-15 && (min - 0.2).abs() < 1e-15);
        assert!(((max - min) / (max + min) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn bruteforce_size_cap() {
        let g = ScreenGrid::new(0.0, 1.0, 1001).unwrap();
        let w = WaveField::new(g, vec![c(1.0); 1001]).unwrap();
        let s = ExperimentState::new(vec![BranchState::new(
            c(1.0),
            w,
            DetectorState::fock(0, 1000).unwrap(),
        )])
        .unwrap();
        assert!(matches!(pattern_bruteforce(&s), Err(Error::SizeCap { .. })));
    }
}
