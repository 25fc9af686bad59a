//! Finite-dimensional detector states.
//!
//! A [`DetectorState`] is a unit vector in a truncated Fock space or in the
//! two-dimensional space of an atomic two-level system. Constructors always
//! renormalize; unitary operations preserve the norm to rounding. Global
//! phases are kept as computed, so comparisons that should ignore them must
//! use `|inner|`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest tolerated top-Fock amplitude before photon addition.
pub const HEADROOM_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorState {
    amplitudes: Vec<Complex64>,
}

/// How to treat a photon addition that runs into the Fock truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    /// Proceed, but report the offending top amplitude.
    Warn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonAdded {
    pub state: DetectorState,
    /// Top-Fock amplitude of the input when it exceeded [`HEADROOM_LIMIT`].
    pub headroom_warning: Option<f64>,
}

impl DetectorState {
    /// Builds a state from raw amplitudes, normalizing to unit length.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude list".into()));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = norm_of(&amplitudes);
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let scale = 1.0 / norm;
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
        })
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Fock state `|n>` truncated to `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::FockOutOfRange { n, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Coherent state `|alpha>` truncated to `dim` levels and renormalized.
    ///
    /// Truncation is silent here; check [`coherent_tail`] when it matters.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidState("non-finite coherent amplitude".into()));
        }
        let mut amplitudes = Vec::with_capacity(dim);
        let mut term = Complex64::new(1.0, 0.0);
        amplitudes.push(term);
        for n in 1..dim {
            term = term * alpha / (n as f64).sqrt();
            amplitudes.push(term);
        }
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &DetectorState) -> Result<Complex64> {
        inner(self, other)
    }

    /// Applies the creation operator and renormalizes. Errors when the top
    /// Fock amplitude leaves no room for the added quantum.
    pub fn add_photon(&self) -> Result<DetectorState> {
        self.add_photon_with(Strictness::Strict).map(|r| r.state)
    }

    pub fn add_photon_with(&self, strictness: Strictness) -> Result<PhotonAdded> {
        let dim = self.dim();
        let top = self.amplitudes[dim - 1].norm();
        let headroom_warning = if top >= HEADROOM_LIMIT {
            match strictness {
                Strictness::Strict => return Err(Error::Headroom { top, dim }),
                Strictness::Warn => Some(top),
            }
        } else {
            None
        };
        // (a† c)_n = √n c_{n-1}
        let raised: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0))
            .chain((1..dim).map(|n| self.amplitudes[n - 1] * (n as f64).sqrt()))
            .collect();
        let state = DetectorState::new(raised)
            .map_err(|_| Error::InvalidState("photon addition produced the zero vector".into()))?;
        Ok(PhotonAdded {
            state,
            headroom_warning,
        })
    }

    /// Two-level rotation by `theta` about the equatorial axis at azimuth `phi`:
    ///
    /// ```text
    /// [ cos(θ/2)            -i e^{-iφ} sin(θ/2) ]
    /// [ -i e^{iφ} sin(θ/2)   cos(θ/2)           ]
    /// ```
    pub fn rabi_pulse(&self, theta: f64, phi: f64) -> Result<DetectorState> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: 2,
            });
        }
        let c = Complex64::new((theta / 2.0).cos(), 0.0);
        let s = (theta / 2.0).sin();
        let minus_i = Complex64::new(0.0, -1.0);
        let upper = minus_i * Complex64::from_polar(s, -phi);
        let lower = minus_i * Complex64::from_polar(s, phi);
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        Ok(DetectorState {
            amplitudes: vec![c * a + upper * b, lower * a + c * b],
        })
    }

    /// Kronecker product; index `i * other.dim() + j` holds `self_i * other_j`.
    pub fn tensor(&self, other: &DetectorState) -> DetectorState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        DetectorState { amplitudes }
    }
}

/// `<a|b> = sum_n conj(a_n) b_n`.
pub fn inner(a: &DetectorState, b: &DetectorState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y))
}

/// Poisson mass `sum_{n >= dim} e^{-|alpha|^2} |alpha|^{2n} / n!` discarded by
/// truncating a coherent state to `dim` levels.
pub fn coherent_tail(alpha: Complex64, dim: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    let ln_mean = mean.ln();
    let ln_factorial: f64 = (1..=dim).map(|k| (k as f64).ln()).sum();
    let mut ln_term = -mean + dim as f64 * ln_mean - ln_factorial;
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let term = ln_term.exp();
        tail += term;
        n += 1;
        ln_term += ln_mean - (n as f64).ln();
        // past the Poisson peak the terms decay geometrically
        if n as f64 > mean && (term < tail * 1e-17 || term == 0.0) {
            break;
        }
        if n > dim + 100_000 {
            break;
        }
    }
    tail.min(1.0)
}

/// Extends `seed` to an orthonormal basis of `dim` dimensions with
/// Gram-Schmidt against the computational basis vectors.
pub fn complete_basis(seed: &[DetectorState], dim: usize) -> Result<Vec<DetectorState>> {
    let mut basis: Vec<DetectorState> = Vec::with_capacity(dim);
    for s in seed {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: s.dim(),
                right: dim,
            });
        }
        basis.push(s.clone());
    }
    check_orthonormal(&basis)?;
    for n in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut candidate = DetectorState::fock(n, dim)?.amplitudes;
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b
                    .amplitudes
                    .iter()
                    .zip(&candidate)
                    .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
                for (c, x) in candidate.iter_mut().zip(&b.amplitudes) {
                    *c -= proj * x;
                }
            }
        }
        if norm_of(&candidate) > 1e-8 {
            basis.push(DetectorState::new(candidate)?);
        }
    }
    Ok(basis)
}

/// Pairwise `|<b_i|b_j>| < 1e-10` and `|‖b_i‖ - 1| < 1e-10`.
pub fn check_orthonormal(basis: &[DetectorState]) -> Result<()> {
    const TOL: f64 = 1e-10;
    for (i, b) in basis.iter().enumerate() {
        let norm = b.norm();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NonNormalizedBasis { index: i, norm });
        }
        for (j, c) in basis.iter().enumerate().skip(i + 1) {
            let overlap = inner(b, c)?.norm();
            if overlap > TOL {
                return Err(Error::NonOrthogonalBasis { i, j, overlap });
            }
        }
    }
    Ok(())
}

fn norm_of(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fock_vectors() {
        let v = DetectorState::fock(0, 4).unwrap();
        assert_eq!(v.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let v = DetectorState::fock(1, 2).unwrap();
        assert_eq!(v.amplitudes(), &[c(0.0), c(1.0)]);
        assert!(matches!(
            DetectorState::fock(4, 4),
            Err(Error::FockOutOfRange { n: 4, dim: 4 })
        ));
    }

    #[test]
    fn vacuum_and_one_photon_are_orthogonal() {
        let vac = DetectorState::fock(0, 8).unwrap();
        let one = DetectorState::fock(1, 8).unwrap();
        assert_eq!(inner(&vac, &one).unwrap(), c(0.0));
    }

    #[test]
    fn two_cavity_markers_are_orthogonal() {
        let first = DetectorState::from_real(&[1.0, 0.0]).unwrap();
        let second = DetectorState::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(inner(&first, &second).unwrap(), c(0.0));
    }

    #[test]
    fn inner_dimension_mismatch_names_both() {
        let a = DetectorState::fock(0, 3).unwrap();
        let b = DetectorState::fock(0, 5).unwrap();
        let err = inner(&a, &b).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch { left: 3, right: 5 }
        ));
        let msg = err.to_string();
        assert!(msg.contains('3') && msg.contains('5'));
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let s = DetectorState::coherent(c(0.0), 8).unwrap();
        assert_eq!(s, DetectorState::fock(0, 8).unwrap());
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let a = DetectorState::coherent(c(2.0), 64).unwrap();
        let b = DetectorState::coherent(c(1.0), 64).unwrap();
        let got = inner(&a, &b).unwrap();
        // exp(-(4 + 1)/2 + 2)
        assert!((got - c((-0.5f64).exp())).norm() < 1e-12);
        assert!((got.re - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn coherent_poisson_weight() {
        let s = DetectorState::coherent(c(1.0), 32).unwrap();
        let p1 = s.amplitudes()[1].norm_sqr();
        assert!((p1 - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn tail_estimate() {
        assert_eq!(coherent_tail(c(0.0), 4), 0.0);
        // |alpha|^2 = 1, dim 1: everything but the vacuum weight
        let t = coherent_tail(c(1.0), 1);
        assert!((t - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        assert!(coherent_tail(c(10.0), 256) < 1e-12);
        assert!(coherent_tail(c(10.0), 64) > 1e-12);
    }

    #[test]
    fn photon_ladder() {
        let one = DetectorState::fock(0, 8).unwrap().add_photon().unwrap();
        assert_eq!(one, DetectorState::fock(1, 8).unwrap());
        let three = DetectorState::fock(2, 8).unwrap().add_photon().unwrap();
        assert!((three.amplitudes()[3] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn photon_addition_respects_headroom() {
        let top = DetectorState::fock(3, 4).unwrap();
        assert!(matches!(top.add_photon(), Err(Error::Headroom { .. })));
        let crowded = DetectorState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let r = crowded.add_photon_with(Strictness::Warn).unwrap();
        assert!(r.headroom_warning.is_some());
        assert!((r.state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn photon_added_coherent_overlap() {
        let a = DetectorState::coherent(c(10.0), 256).unwrap();
        let b = a.add_photon().unwrap();
        let got = inner(&a, &b).unwrap().norm();
        assert!((got - 10.0 / 101f64.sqrt()).abs() < 1e-9);
        assert!((got - 0.995037).abs() < 1e-6);
    }

    #[test]
    fn rabi_identity_and_flip() {
        let g = DetectorState::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(g.rabi_pulse(0.0, 0.0).unwrap(), g);
        let flipped = g.rabi_pulse(PI, 0.0).unwrap();
        assert!(flipped.amplitudes()[0].norm() < 1e-15);
        assert!((flipped.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn rabi_preserves_orthogonality() {
        let g = DetectorState::from_real(&[1.0, 0.0]).unwrap();
        let e = DetectorState::from_real(&[0.0, 1.0]).unwrap();
        let a = g.rabi_pulse(PI / 2.0, 0.0).unwrap();
        let b = e.rabi_pulse(PI / 2.0, 0.0).unwrap();
        // explicit 2x2 multiply: columns of the pulse matrix
        let s = (PI / 4.0).sin();
        let expect_a = [c(s), Complex64::new(0.0, -s)];
        let expect_b = [Complex64::new(0.0, -s), c(s)];
        for n in 0..2 {
            assert!((a.amplitudes()[n] - expect_a[n]).norm() < 1e-15);
            assert!((b.amplitudes()[n] - expect_b[n]).norm() < 1e-15);
        }
        assert!(inner(&a, &b).unwrap().norm() < 1e-15);
    }

    #[test]
    fn rabi_requires_two_levels() {
        let s = DetectorState::fock(0, 3).unwrap();
        assert!(s.rabi_pulse(1.0, 0.0).is_err());
    }

    #[test]
    fn basis_completion() {
        let plus = DetectorState::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let basis = complete_basis(&[plus], 3).unwrap();
        assert_eq!(basis.len(), 3);
        check_orthonormal(&basis).unwrap();
    }

    #[test]
    fn non_orthogonal_seed_rejected() {
        let a = DetectorState::from_real(&[1.0, 0.0]).unwrap();
        let b = DetectorState::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            complete_basis(&[a, b], 2),
            Err(Error::NonOrthogonalBasis { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn tensor_layout() {
        let a = DetectorState::fock(1, 2).unwrap();
        let b = DetectorState::fock(0, 3).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.dim(), 6);
        assert_eq!(ab.amplitudes()[3], c(1.0));
    }
}
