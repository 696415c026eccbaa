//! Fiducial vectors, Weyl-Heisenberg covariant SIC generation and
//! validation, Bob's observables, MUB extraction, and the maximally
//! entangled state.

use std::fmt;
use std::path::Path;

use crate::cmatrix::{
    gram_residual, identity, matrix_power, max_abs_diff, outer, root_unity_eigenbasis,
    unitarity_residual, CMatrix, CVector, Complex64, TOL_MAT, TOL_SIC,
};
use crate::error::{Error, Result};
use crate::wh::{weyl_operator, PrimeDim, WeylLabel};

/// Which fiducial to construct.
#[derive(Clone, Debug, PartialEq)]
pub enum FiducialSelector {
    /// The known qubit fiducial `𝒩(e^{−πi/4}, √2/(1+√3))`.
    D2Default,
    /// The qutrit fiducial `(1/√2)(0, 1, −1)` generating the Hesse SICs.
    Hesse,
    /// The qutrit family `(1/√2)(0, 1, −ω^θ)` for `θ ∈ [0, 1/2]`;
    /// `θ = 0` coincides with [`FiducialSelector::Hesse`].
    Theta(f64),
}

impl fmt::Display for FiducialSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiducialSelector::D2Default => write!(f, "d2-default"),
            FiducialSelector::Hesse => write!(f, "hesse"),
            FiducialSelector::Theta(t) => write!(f, "theta({t})"),
        }
    }
}

/// Provenance of a fiducial, carried for reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum FiducialSource {
    Builtin(FiducialSelector),
    File(String),
}

impl fmt::Display for FiducialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiducialSource::Builtin(sel) => write!(f, "{sel}"),
            FiducialSource::File(p) => write!(f, "file:{p}"),
        }
    }
}

/// A unit vector whose Weyl-Heisenberg orbit is a SIC, certified on
/// construction: every admitted `Fiducial` has passed [`validate_sic`].
#[derive(Clone, Debug)]
pub struct Fiducial {
    d: PrimeDim,
    amplitudes: CVector,
    source: FiducialSource,
}

impl Fiducial {
    /// Admit a candidate vector after unit-norm and SIC validation.
    pub fn new(d: PrimeDim, amplitudes: CVector, source: FiducialSource) -> Result<Self> {
        if amplitudes.len() != d.get() {
            return Err(Error::Fiducial(format!(
                "expected {} amplitudes, got {}",
                d.get(),
                amplitudes.len()
            )));
        }
        if (amplitudes.norm() - 1.0).abs() > TOL_MAT {
            return Err(Error::Fiducial(format!(
                "not unit norm: ‖φ‖ = {}",
                amplitudes.norm()
            )));
        }
        let report = validate_sic(&amplitudes, d);
        if !report.pass {
            return Err(Error::Fiducial(format!(
                "SIC validation failed: worst overlap deviation {:.3e} (tolerance {:.0e})",
                report.max_deviation, TOL_SIC
            )));
        }
        Ok(Fiducial {
            d,
            amplitudes,
            source,
        })
    }

    /// Load from the JSON file format
    /// `{"d": <int>, "amplitudes": [[re, im], ...]}`. The vector is
    /// normalized on load when within 1e−6 of unit norm, rejected otherwise.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let file: crate::io::FiducialFile = serde_json::from_str(text)?;
        let d = PrimeDim::new(file.d)?;
        if file.amplitudes.len() != file.d {
            return Err(Error::Fiducial(format!(
                "file declares d = {} but has {} amplitudes",
                file.d,
                file.amplitudes.len()
            )));
        }
        let raw = CVector::from_iterator(
            file.amplitudes.len(),
            file.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        let norm = raw.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Fiducial(format!(
                "amplitudes are not normalizable: ‖φ‖ = {norm} deviates from 1 by more than 1e-6"
            )));
        }
        Self::new(
            d,
            raw.unscale(norm),
            FiducialSource::File(origin.to_string()),
        )
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn source(&self) -> &FiducialSource {
        &self.source
    }
}

/// Construct one of the built-in fiducials.
pub fn builtin_fiducial(d: PrimeDim, selector: FiducialSelector) -> Result<Fiducial> {
    let vec = match &selector {
        FiducialSelector::D2Default => {
            if d.get() != 2 {
                return Err(Error::Dimension(format!(
                    "selector d2-default requires d = 2, got {}",
                    d.get()
                )));
            }
            d2_vectors().1
        }
        FiducialSelector::Hesse => {
            if d.get() != 3 {
                return Err(Error::Dimension(format!(
                    "selector hesse requires d = 3, got {}",
                    d.get()
                )));
            }
            hesse_vector()
        }
        FiducialSelector::Theta(t) => {
            if d.get() != 3 {
                return Err(Error::Dimension(format!(
                    "selector theta requires d = 3, got {}",
                    d.get()
                )));
            }
            if !(0.0..=0.5).contains(t) {
                return Err(Error::Fiducial(format!(
                    "θ = {t} outside the SIC-generating range [0, 1/2]"
                )));
            }
            theta_vector(d, *t)
        }
    };
    Fiducial::new(d, vec, FiducialSource::Builtin(selector))
}

fn hesse_vector() -> CVector {
    let s = 1.0 / 2.0_f64.sqrt();
    CVector::from_vec(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
    ])
}

fn theta_vector(d: PrimeDim, t: f64) -> CVector {
    let s = 1.0 / 2.0_f64.sqrt();
    let phase = d.omega_frac(t);
    CVector::from_vec(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0) * phase,
    ])
}

/// `(φ₀, φ₁)` for d = 2: the fiducial `φ₁` and its orthogonal partner.
fn d2_vectors() -> (CVector, CVector) {
    let e = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let sqrt2 = 2.0_f64.sqrt();
    let sqrt3 = 3.0_f64.sqrt();
    let phi1 = CVector::from_vec(vec![e, Complex64::new(sqrt2 / (1.0 + sqrt3), 0.0)]);
    let phi0 = CVector::from_vec(vec![e, Complex64::new(sqrt2 / (1.0 - sqrt3), 0.0)]);
    let n1 = phi1.norm();
    let n0 = phi0.norm();
    (phi0.unscale(n0), phi1.unscale(n1))
}

/// Outcome of checking the defining SIC overlaps
/// `|⟨φ|W_y|φ⟩|² = 1/(d+1)` for all `y ≠ 0`.
#[derive(Clone, Debug)]
pub struct SicReport {
    /// Worst `| |⟨φ|W_y φ⟩|² − 1/(d+1) |` over y ≠ 0.
    pub max_deviation: f64,
    /// `(y, |⟨φ|W_y φ⟩|²)` for every y ≠ 0.
    pub overlaps: Vec<(usize, f64)>,
    pub pass: bool,
}

/// Check the SIC overlap condition for a candidate unit vector. Never
/// errors; a failing candidate yields `pass = false`.
pub fn validate_sic(phi: &CVector, d: PrimeDim) -> SicReport {
    let dd = d.get();
    let target = 1.0 / (dd as f64 + 1.0);
    let mut overlaps = Vec::with_capacity(dd * dd - 1);
    let mut max_deviation: f64 = 0.0;
    for y in 1..dd * dd {
        let w = weyl_operator(d, WeylLabel::from_flat(d, y).expect("y in range"));
        let ov = phi.dotc(&(&w * phi)).norm_sqr();
        max_deviation = max_deviation.max((ov - target).abs());
        overlaps.push((y, ov));
    }
    SicReport {
        max_deviation,
        overlaps,
        pass: max_deviation < TOL_SIC,
    }
}

/// An orthonormal basis of C^d whose last element is the fiducial.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    d: PrimeDim,
    vectors: Vec<CVector>,
}

impl EigenFrame {
    pub(crate) fn from_vectors(d: PrimeDim, vectors: Vec<CVector>) -> Self {
        EigenFrame { d, vectors }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn fiducial_vector(&self) -> &CVector {
        self.vectors.last().expect("frame is nonempty")
    }

    /// Max deviation of the frame's Gram matrix from the identity.
    pub fn gram_residual(&self) -> f64 {
        gram_residual(&self.vectors)
    }
}

/// Complete a fiducial to an orthonormal frame with the fiducial last.
///
/// The built-in d = 2 and Hesse fiducials get their known explicit frames.
/// Everything else uses a deterministic completion: drop the canonical
/// basis vector with the largest overlap against φ (first maximum wins),
/// Gram-Schmidt the remaining ones against φ in index order, then place φ
/// last.
pub fn complete_frame(phi: &Fiducial) -> EigenFrame {
    let d = phi.dim();
    if d.get() == 2 {
        let (phi0, phi1) = d2_vectors();
        if (phi.amplitudes() - &phi1).norm() < 1e-12 {
            return EigenFrame {
                d,
                vectors: vec![phi0, phi1],
            };
        }
    }
    if d.get() == 3 && (phi.amplitudes() - &hesse_vector()).norm() < 1e-12 {
        return EigenFrame {
            d,
            vectors: hesse_frame(),
        };
    }
    let vectors = gram_schmidt_completion(phi.amplitudes(), d.get());
    EigenFrame { d, vectors }
}

fn hesse_frame() -> Vec<CVector> {
    let s = 1.0 / 2.0_f64.sqrt();
    vec![
        CVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]),
        CVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
        ]),
        hesse_vector(),
    ]
}

fn gram_schmidt_completion(phi: &CVector, dd: usize) -> Vec<CVector> {
    let drop = (0..dd)
        .max_by(|&a, &b| phi[a].norm().total_cmp(&phi[b].norm()))
        .expect("nonempty vector");
    let mut ortho: Vec<CVector> = vec![phi.clone()];
    for k in 0..dd {
        if k == drop {
            continue;
        }
        let mut v = CVector::zeros(dd);
        v[k] = Complex64::new(1.0, 0.0);
        for u in &ortho {
            let c = u.dotc(&v);
            v -= u.map(|e| e * c);
        }
        let n = v.norm();
        ortho.push(v.unscale(n));
    }
    // φ was seeded first for stability; contract places it last
    ortho.rotate_left(1);
    ortho
}

/// Bob's reference observable `B₀ = Σ_β ω^β |φ_β⟩⟨φ_β|`: unitary, traceless,
/// spectrum the d-th roots of unity, with the fiducial as the `ω^{d−1}`
/// eigenvector.
pub fn bob_reference(frame: &EigenFrame) -> CMatrix {
    let d = frame.dim();
    let dd = d.get();
    let mut b0 = CMatrix::zeros(dd, dd);
    for (beta, v) in frame.vectors().iter().enumerate() {
        let phase = d.omega_pow(beta as i64);
        b0 += outer(v, v).map(|e| e * phase);
    }
    b0
}

/// `B_y = W_y B₀ W_y†`.
pub fn bob_observable(b0: &CMatrix, y: usize, d: PrimeDim) -> Result<CMatrix> {
    let label = WeylLabel::from_flat(d, y)?;
    let w = weyl_operator(d, label);
    Ok(&w * b0 * w.adjoint())
}

/// The Weyl-Heisenberg orbit `{W_y |φ⟩}` of a fiducial: d² unit vectors
/// with pairwise squared overlap `1/(d+1)`.
pub fn sic_orbit(phi: &Fiducial) -> Vec<CVector> {
    let d = phi.dim();
    (0..d.get() * d.get())
        .map(|y| {
            let w = weyl_operator(d, WeylLabel::from_flat(d, y).expect("y in range"));
            &w * phi.amplitudes()
        })
        .collect()
}

/// The d+1 mutually unbiased bases realized by Alice's observables: the
/// eigenbases of Z, X, XZ, ..., XZ^{d−1} (with the d = 2 phase fix that
/// turns XZ into σ_y).
pub fn mub_family(d: PrimeDim) -> Vec<Vec<CVector>> {
    let dd = d.get();
    let mut settings = Vec::with_capacity(dd + 1);
    settings.push(1); // Z
    settings.push(dd); // X
    for k in 1..dd {
        settings.push(dd + k); // X Z^k
    }
    settings
        .into_iter()
        .map(|x| {
            let a = crate::wh::alice_observable(d, x).expect("x in range");
            root_unity_eigenbasis(&a, dd)
        })
        .collect()
}

/// `|φ_d⁺⟩ = (1/√d) Σ_α |αα⟩`.
pub fn max_entangled(d: PrimeDim) -> CVector {
    let dd = d.get();
    let mut v = CVector::zeros(dd * dd);
    let amp = Complex64::new(1.0 / (dd as f64).sqrt(), 0.0);
    for alpha in 0..dd {
        v[dd * alpha + alpha] = amp;
    }
    v
}

/// A full quantum realization: shared state, Alice's d²−1 observables,
/// Bob's d² observables. All observables are verified unitary with
/// spectrum in the d-th roots of unity (`U^d = 1`).
#[derive(Clone, Debug)]
pub struct Realization {
    d: PrimeDim,
    state: CVector,
    alice: Vec<CMatrix>,
    bob: Vec<CMatrix>,
}

impl Realization {
    /// The optimal realization for a frame: `|φ_d⁺⟩`, `A_x = τ W_x`,
    /// `B_y = W_y B₀ W_y†`.
    pub fn optimal(frame: &EigenFrame) -> Result<Self> {
        let d = frame.dim();
        let b0 = bob_reference(frame);
        Self::from_reference(d, &b0)
    }

    /// Build from a reference observable `B₀` directly (used when
    /// reconstructing a realization from a stored coefficient tensor).
    pub fn from_reference(d: PrimeDim, b0: &CMatrix) -> Result<Self> {
        let dd = d.get();
        let alice: Vec<CMatrix> = (1..dd * dd)
            .map(|x| crate::wh::alice_observable(d, x))
            .collect::<Result<_>>()?;
        let bob: Vec<CMatrix> = (0..dd * dd)
            .map(|y| bob_observable(b0, y, d))
            .collect::<Result<_>>()?;
        for (name, ops) in [("A", &alice), ("B", &bob)] {
            for (i, op) in ops.iter().enumerate() {
                if unitarity_residual(op) > TOL_MAT {
                    return Err(Error::State(format!("{name}[{i}] is not unitary")));
                }
                if max_abs_diff(&matrix_power(op, dd), &identity(dd)) > TOL_MAT {
                    return Err(Error::State(format!(
                        "{name}[{i}] does not have d-th root-of-unity spectrum"
                    )));
                }
            }
        }
        Ok(Realization {
            d,
            state: max_entangled(d),
            alice,
            bob,
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn state(&self) -> &CVector {
        &self.state
    }

    /// `A_x` for `x ∈ [1, d²)`.
    pub fn alice(&self, x: usize) -> &CMatrix {
        &self.alice[x - 1]
    }

    /// `B_y` for `y ∈ [0, d²)`.
    pub fn bob(&self, y: usize) -> &CMatrix {
        &self.bob[y]
    }

    pub fn bob_reference(&self) -> &CMatrix {
        &self.bob[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{hermiticity_residual, kron, max_abs};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d2() -> PrimeDim {
        PrimeDim::new(2).unwrap()
    }

    fn d3() -> PrimeDim {
        PrimeDim::new(3).unwrap()
    }

    #[test]
    fn hesse_fiducial_is_valid() {
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((f.amplitudes()[1] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((f.amplitudes()[2] - Complex64::new(-s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn theta_zero_is_hesse() {
        let h = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let t = builtin_fiducial(d3(), FiducialSelector::Theta(0.0)).unwrap();
        let diff = (h.amplitudes() - t.amplitudes()).norm();
        assert!(diff < 1e-15);
    }

    #[test]
    fn theta_out_of_range_rejected() {
        assert!(matches!(
            builtin_fiducial(d3(), FiducialSelector::Theta(0.6)),
            Err(Error::Fiducial(_))
        ));
        assert!(matches!(
            builtin_fiducial(d3(), FiducialSelector::Theta(-0.1)),
            Err(Error::Fiducial(_))
        ));
    }

    #[test]
    fn selector_dimension_mismatch() {
        assert!(matches!(
            builtin_fiducial(d2(), FiducialSelector::Hesse),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            builtin_fiducial(d3(), FiducialSelector::D2Default),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn basis_vector_fails_sic() {
        let mut e0 = CVector::zeros(3);
        e0[0] = Complex64::new(1.0, 0.0);
        let report = validate_sic(&e0, d3());
        assert!(!report.pass);
        // overlap with Z|0⟩ = |0⟩ equals 1
        let (_, ov) = report.overlaps.iter().find(|(y, _)| *y == 1).unwrap();
        assert!((ov - 1.0).abs() < 1e-12);
    }

    #[test]
    fn paper_phi1_is_also_fiducial() {
        let s = 1.0 / 2.0_f64.sqrt();
        let phi1 = CVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
        ]);
        assert!(validate_sic(&phi1, d3()).pass);
    }

    #[test]
    fn d2_fiducial_and_partner() {
        let f = builtin_fiducial(d2(), FiducialSelector::D2Default).unwrap();
        let frame = complete_frame(&f);
        assert!(frame.gram_residual() < TOL_MAT);
        // last element is the fiducial
        assert!((frame.fiducial_vector() - f.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn hesse_frame_is_papers() {
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let frame = complete_frame(&f);
        let s = 1.0 / 2.0_f64.sqrt();
        let expected = [
            vec![1.0, 0.0, 0.0],
            vec![0.0, s, s],
            vec![0.0, s, -s],
        ];
        for (v, exp) in frame.vectors().iter().zip(expected.iter()) {
            for (a, b) in v.iter().zip(exp.iter()) {
                assert!((a - Complex64::new(*b, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_schmidt_frame_orthonormal_and_deterministic() {
        let f = builtin_fiducial(d3(), FiducialSelector::Theta(0.25)).unwrap();
        let fr1 = complete_frame(&f);
        let fr2 = complete_frame(&f);
        assert!(fr1.gram_residual() < TOL_MAT);
        for (a, b) in fr1.vectors().iter().zip(fr2.vectors()) {
            assert!((a - b).norm() == 0.0);
        }
        assert!((fr1.fiducial_vector() - f.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn theta_zero_gram_schmidt_recovers_paper_frame() {
        // the generic completion applied to the Hesse vector lands on the
        // same frame the explicit override uses
        let f = builtin_fiducial(d3(), FiducialSelector::Theta(0.0)).unwrap();
        let frame = complete_frame(&f);
        let explicit = hesse_frame();
        for (v, e) in frame.vectors().iter().zip(explicit.iter()) {
            assert!((v - e).norm() < 1e-12);
        }
    }

    #[test]
    fn bob_reference_matches_closed_form() {
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let b0 = bob_reference(&complete_frame(&f));
        let h = 3.0_f64.sqrt() / 2.0;
        let expected = CMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.5, 0.0),
                Complex64::new(0.0, h),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, h),
                Complex64::new(-0.5, 0.0),
            ],
        );
        assert!(max_abs_diff(&b0, &expected) < 1e-15);
    }

    #[test]
    fn d2_bob_reference_is_projector_difference() {
        let f = builtin_fiducial(d2(), FiducialSelector::D2Default).unwrap();
        let frame = complete_frame(&f);
        let b0 = bob_reference(&frame);
        let expected = outer(&frame.vectors()[0], &frame.vectors()[0])
            - outer(&frame.vectors()[1], &frame.vectors()[1]);
        assert!(max_abs_diff(&b0, &expected) < 1e-15);
        assert!(hermiticity_residual(&b0) < 1e-15);
    }

    #[test]
    fn bob_reference_unitary_traceless_dth_power() {
        for (dd, sel) in [(2, FiducialSelector::D2Default), (3, FiducialSelector::Hesse)] {
            let d = PrimeDim::new(dd).unwrap();
            let f = builtin_fiducial(d, sel).unwrap();
            let b0 = bob_reference(&complete_frame(&f));
            assert!(unitarity_residual(&b0) < TOL_MAT);
            assert!(b0.trace().norm() < TOL_MAT);
            assert!(max_abs_diff(&matrix_power(&b0, dd), &identity(dd)) < TOL_MAT);
        }
    }

    #[test]
    fn bob_observable_conjugation_oracle() {
        let d = d3();
        let f = builtin_fiducial(d, FiducialSelector::Hesse).unwrap();
        let b0 = bob_reference(&complete_frame(&f));
        assert!(max_abs_diff(&bob_observable(&b0, 0, d).unwrap(), &b0) < 1e-15);
        // y = 4 → XZ conjugation, direct product oracle
        let w = weyl_operator(d, WeylLabel { p: 1, q: 1 });
        let expected = &w * &b0 * w.adjoint();
        assert!(max_abs_diff(&bob_observable(&b0, 4, d).unwrap(), &expected) < 1e-15);
    }

    #[test]
    fn power_conjugation_commute() {
        let d = d3();
        let f = builtin_fiducial(d, FiducialSelector::Hesse).unwrap();
        let b0 = bob_reference(&complete_frame(&f));
        for y in 0..9 {
            let by = bob_observable(&b0, y, d).unwrap();
            for n in 1..3 {
                let lhs = matrix_power(&by, n);
                let rhs = bob_observable(&matrix_power(&b0, n), y, d).unwrap();
                assert!(max_abs_diff(&lhs, &rhs) < TOL_MAT);
            }
        }
    }

    #[test]
    fn orbit_overlaps_and_completeness() {
        for (dd, sel) in [(2, FiducialSelector::D2Default), (3, FiducialSelector::Hesse)] {
            let d = PrimeDim::new(dd).unwrap();
            let f = builtin_fiducial(d, sel).unwrap();
            let orbit = sic_orbit(&f);
            assert_eq!(orbit.len(), dd * dd);
            let target = 1.0 / (dd as f64 + 1.0);
            for (i, u) in orbit.iter().enumerate() {
                assert!((u.norm() - 1.0).abs() < TOL_MAT);
                for v in orbit.iter().skip(i + 1) {
                    let ov = u.dotc(v).norm_sqr();
                    assert!((ov - target).abs() < TOL_SIC);
                }
            }
            // resolution of identity: (1/d) Σ |v⟩⟨v| = 1
            let mut acc = CMatrix::zeros(dd, dd);
            for v in &orbit {
                acc += outer(v, v);
            }
            assert!(max_abs_diff(&acc.unscale(dd as f64), &identity(dd)) < TOL_MAT);
        }
    }

    #[test]
    fn mub_cross_overlaps() {
        for dd in [2usize, 3] {
            let d = PrimeDim::new(dd).unwrap();
            let bases = mub_family(d);
            assert_eq!(bases.len(), dd + 1);
            let target = 1.0 / dd as f64;
            for (i, bi) in bases.iter().enumerate() {
                assert!(gram_residual(bi) < TOL_MAT);
                for (j, bj) in bases.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for u in bi {
                        for v in bj {
                            let ov = u.dotc(v).norm_sqr();
                            assert!(
                                (ov - target).abs() < TOL_SIC,
                                "d={dd} bases {i},{j}: overlap² = {ov}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn max_entangled_examples_and_lemma() {
        let v2 = max_entangled(d2());
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((v2[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((v2[3] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!(v2[1].norm() < 1e-15 && v2[2].norm() < 1e-15);

        let v3 = max_entangled(d3());
        assert!((v3.norm() - 1.0).abs() < 1e-15);

        // lemma: (M ⊗ 1)|φ⁺⟩ = (1 ⊗ Mᵀ)|φ⁺⟩ for 20 random M
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dd in [2usize, 3] {
            let d = PrimeDim::new(dd).unwrap();
            let phi = max_entangled(d);
            for _ in 0..20 {
                let m = CMatrix::from_fn(dd, dd, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                let lhs = kron(&m, &identity(dd)) * &phi;
                let rhs = kron(&identity(dd), &m.transpose()) * &phi;
                assert!(max_abs(&CMatrix::from_column_slice(
                    dd * dd,
                    1,
                    (lhs - rhs).as_slice()
                )) < TOL_MAT);
            }
        }
    }

    #[test]
    fn realization_validates() {
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let r = Realization::optimal(&complete_frame(&f)).unwrap();
        assert_eq!(r.alice.len(), 8);
        assert_eq!(r.bob.len(), 9);
        assert!((r.state().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orbit_matches_bob_eigenvectors() {
        // the ω^{d−1} eigenvector of B_y is W_y|φ⟩ up to phase
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let frame = complete_frame(&f);
        let b0 = bob_reference(&frame);
        let orbit = sic_orbit(&f);
        for (y, v) in orbit.iter().enumerate() {
            let by = bob_observable(&b0, y, d3()).unwrap();
            let basis = root_unity_eigenbasis(&by, 3);
            let ov = basis[2].dotc(v).norm();
            assert!((ov - 1.0).abs() < TOL_MAT, "y={y}: |overlap| = {ov}");
        }
    }

    #[test]
    fn fiducial_file_round_trip() {
        let f = builtin_fiducial(d3(), FiducialSelector::Hesse).unwrap();
        let json = crate::io::fiducial_to_json(&f);
        let loaded = Fiducial::from_json(&json, "test").unwrap();
        assert!((loaded.amplitudes() - f.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn fiducial_file_normalization_window() {
        // within 1e-6 of unit norm: accepted and normalized
        let s = 1.0 / 2.0_f64.sqrt() * (1.0 + 5e-7);
        let json = format!(
            r#"{{"d":3,"amplitudes":[[0.0,0.0],[{s},0.0],[{},0.0]]}}"#,
            -s
        );
        let f = Fiducial::from_json(&json, "test").unwrap();
        assert!((f.amplitudes().norm() - 1.0).abs() < 1e-12);

        // far from unit norm: rejected
        let json = r#"{"d":3,"amplitudes":[[0.0,0.0],[0.8,0.0],[-0.8,0.0]]}"#;
        assert!(matches!(
            Fiducial::from_json(json, "test"),
            Err(Error::Fiducial(_))
        ));

        // wrong amplitude count: rejected
        let json = r#"{"d":3,"amplitudes":[[1.0,0.0]]}"#;
        assert!(Fiducial::from_json(json, "test").is_err());

        // non-SIC vector of the right norm: rejected with deviation message
        let json = r#"{"d":3,"amplitudes":[[1.0,0.0],[0.0,0.0],[0.0,0.0]]}"#;
        assert!(matches!(
            Fiducial::from_json(json, "test"),
            Err(Error::Fiducial(_))
        ));
    }
}
