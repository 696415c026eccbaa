//! Weyl-Heisenberg operator algebra: the shift/clock generators, the d²
//! unitaries `W_{dp+q} = X^p Z^q`, Alice's observables, and expansion of
//! traceless operators in the unitary operator basis `{A_x^n}`.

use std::f64::consts::PI;

use crate::cmatrix::{matrix_power, CMatrix, Complex64, TOL_MAT};
use crate::error::{Error, Result};

/// A validated prime local dimension.
///
/// Every constructor in the crate goes through this type, so a non-prime
/// dimension is rejected once, at the boundary.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeDim(usize);

impl PrimeDim {
    pub fn new(d: usize) -> Result<Self> {
        if !is_prime(d) {
            return Err(Error::Dimension(format!("d must be prime (got {d})")));
        }
        Ok(PrimeDim(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Number of Alice settings, `d² − 1`.
    pub fn alice_settings(self) -> usize {
        self.0 * self.0 - 1
    }

    /// Number of Bob settings, `d²`.
    pub fn bob_settings(self) -> usize {
        self.0 * self.0
    }

    /// `ω = e^{2πi/d}`.
    pub fn omega(self) -> Complex64 {
        self.omega_pow(1)
    }

    /// `ω^k` with the exponent reduced mod d as an integer, so repeated
    /// powers never accumulate phase drift.
    pub fn omega_pow(self, k: i64) -> Complex64 {
        let e = k.rem_euclid(self.0 as i64);
        Complex64::from_polar(1.0, 2.0 * PI * e as f64 / self.0 as f64)
    }

    /// `ω^t` for rational/real exponents `t` (used by the θ-family of
    /// fiducials and the closed-form coefficient expressions).
    pub fn omega_frac(self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * t / self.0 as f64)
    }
}

fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Label `(p, q)` of the Weyl-Heisenberg operator `X^p Z^q`, with flat index
/// `j = d·p + q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylLabel {
    pub p: usize,
    pub q: usize,
}

impl WeylLabel {
    pub fn new(d: PrimeDim, p: usize, q: usize) -> Result<Self> {
        let dd = d.get();
        if p >= dd || q >= dd {
            return Err(Error::Index(format!(
                "Weyl label ({p},{q}) out of range for d={dd}"
            )));
        }
        Ok(WeylLabel { p, q })
    }

    pub fn from_flat(d: PrimeDim, j: usize) -> Result<Self> {
        let dd = d.get();
        if j >= dd * dd {
            return Err(Error::Index(format!(
                "flat Weyl index {j} out of range for d={dd}"
            )));
        }
        Ok(WeylLabel { p: j / dd, q: j % dd })
    }

    pub fn flat(self, d: PrimeDim) -> usize {
        d.get() * self.p + self.q
    }

    pub fn is_identity(self) -> bool {
        self.p == 0 && self.q == 0
    }
}

/// Shift generator `X = Σ_α |α+1⟩⟨α|` (indices mod d).
pub fn shift_matrix(d: PrimeDim) -> CMatrix {
    let dd = d.get();
    CMatrix::from_fn(dd, dd, |i, j| {
        if i == (j + 1) % dd {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Clock generator `Z = Σ_α ω^α |α⟩⟨α|`.
pub fn clock_matrix(d: PrimeDim) -> CMatrix {
    let dd = d.get();
    CMatrix::from_fn(dd, dd, |i, j| {
        if i == j {
            d.omega_pow(i as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `W_{dp+q} = X^p Z^q`. Unitary; traceless unless `(p,q) = (0,0)`.
pub fn weyl_operator(d: PrimeDim, label: WeylLabel) -> CMatrix {
    matrix_power(&shift_matrix(d), label.p) * matrix_power(&clock_matrix(d), label.q)
}

/// The phase `τ` making Alice's qubit observables Hermitian: `i^{pq}` for
/// d = 2, and 1 for every odd prime.
pub fn alice_phase(d: PrimeDim, label: WeylLabel) -> Complex64 {
    if d.get() == 2 {
        const I_POW: [(f64, f64); 4] = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        let (re, im) = I_POW[(label.p * label.q) % 4];
        Complex64::new(re, im)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Alice's x-th observable `A_x = τ W_x`, for `x ∈ [1, d²)`. The identity
/// label `x = 0` is not a measurement and is rejected.
pub fn alice_observable(d: PrimeDim, x: usize) -> Result<CMatrix> {
    if x == 0 {
        return Err(Error::Index(
            "x = 0 labels the identity, which is not an observable".into(),
        ));
    }
    let label = WeylLabel::from_flat(d, x)?;
    let w = weyl_operator(d, label);
    Ok(w.map(|e| e * alice_phase(d, label)))
}

/// The x-th element of the operator basis `A_n`, i.e. `(A_x)^n = τ^n W_x^n`.
///
/// For fixed `n ∈ [1, d)` the family over `x` is pairwise Hilbert-Schmidt
/// orthogonal with `tr[(A_a^n)† A_x^n] = d δ_{a,x}` and spans the traceless
/// subspace.
pub fn basis_row(d: PrimeDim, n: usize, x: usize) -> Result<CMatrix> {
    check_power(d, n)?;
    let a = alice_observable(d, x)?;
    Ok(matrix_power(&a, n))
}

pub(crate) fn check_power(d: PrimeDim, n: usize) -> Result<()> {
    if n == 0 || n >= d.get() {
        return Err(Error::Index(format!(
            "power n = {n} out of range [1, {})",
            d.get()
        )));
    }
    Ok(())
}

/// Expansion coefficients of a traceless `M` in the basis `{A_x^n}`:
/// `c_x = tr[(A_x^n)† M] / d`, so that `Σ_x c_x A_x^n = M`.
pub fn expand_traceless(m: &CMatrix, d: PrimeDim, n: usize) -> Result<Vec<Complex64>> {
    check_power(d, n)?;
    let dd = d.get();
    if m.nrows() != dd || m.ncols() != dd {
        return Err(Error::Dimension(format!(
            "expected a {dd}x{dd} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let tr = m.trace().norm();
    if tr >= TOL_MAT {
        return Err(Error::Trace(tr));
    }
    let mut coeffs = Vec::with_capacity(dd * dd - 1);
    for x in 1..dd * dd {
        let basis = basis_row(d, n, x)?;
        coeffs.push((basis.adjoint() * m).trace() / dd as f64);
    }
    Ok(coeffs)
}

/// Inverse of [`expand_traceless`]: `Σ_x c_x A_x^n`.
pub fn reconstruct(coeffs: &[Complex64], d: PrimeDim, n: usize) -> Result<CMatrix> {
    check_power(d, n)?;
    let dd = d.get();
    if coeffs.len() != dd * dd - 1 {
        return Err(Error::Dimension(format!(
            "expected {} coefficients, got {}",
            dd * dd - 1,
            coeffs.len()
        )));
    }
    let mut out = CMatrix::zeros(dd, dd);
    for (i, c) in coeffs.iter().enumerate() {
        let basis = basis_row(d, n, i + 1)?;
        out += basis.map(|e| e * c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{hs_inner, identity, max_abs, max_abs_diff, unitarity_residual};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_prime() {
        assert!(PrimeDim::new(4).is_err());
        assert!(PrimeDim::new(1).is_err());
        assert!(PrimeDim::new(0).is_err());
        assert!(PrimeDim::new(9).is_err());
        for d in [2, 3, 5, 7, 11] {
            assert!(PrimeDim::new(d).is_ok());
        }
    }

    #[test]
    fn weyl_identity_label() {
        let d = PrimeDim::new(3).unwrap();
        let w = weyl_operator(d, WeylLabel { p: 0, q: 0 });
        assert!(max_abs_diff(&w, &identity(3)) < 1e-15);
    }

    #[test]
    fn weyl_clock_d3() {
        let d = PrimeDim::new(3).unwrap();
        let w = weyl_operator(d, WeylLabel { p: 0, q: 1 });
        let omega = d.omega();
        let expected = CMatrix::from_diagonal(&crate::cmatrix::CVector::from_vec(vec![
            c(1.0, 0.0),
            omega,
            omega * omega,
        ]));
        assert!(max_abs_diff(&w, &expected) < 1e-15);
    }

    #[test]
    fn weyl_shift_d2_is_sigma_x() {
        let d = PrimeDim::new(2).unwrap();
        let w = weyl_operator(d, WeylLabel { p: 1, q: 0 });
        let expected = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert!(max_abs_diff(&w, &expected) < 1e-15);
    }

    #[test]
    fn alice_d2_x3_is_sigma_y() {
        let d = PrimeDim::new(2).unwrap();
        let a = alice_observable(d, 3).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        assert!(max_abs_diff(&a, &expected) < 1e-15);
    }

    #[test]
    fn alice_d3_reduces_to_weyl() {
        let d = PrimeDim::new(3).unwrap();
        let a = alice_observable(d, 1).unwrap();
        let z = clock_matrix(d);
        assert!(max_abs_diff(&a, &z) < 1e-15);
        // x = 5 → X Z², checked against the direct product
        let a5 = alice_observable(d, 5).unwrap();
        let x = shift_matrix(d);
        let prod = &x * &(&z * &z);
        assert!(max_abs_diff(&a5, &prod) < 1e-15);
    }

    #[test]
    fn alice_rejects_identity_index() {
        let d = PrimeDim::new(3).unwrap();
        assert!(matches!(alice_observable(d, 0), Err(Error::Index(_))));
        assert!(matches!(alice_observable(d, 9), Err(Error::Index(_))));
    }

    #[test]
    fn basis_row_examples() {
        let d = PrimeDim::new(3).unwrap();
        // first power is the observable itself
        let b = basis_row(d, 1, 3).unwrap();
        assert!(max_abs_diff(&b, &shift_matrix(d)) < 1e-15);
        // n = 2 of Z is Z² = diag(1, ω², ω)
        let b = basis_row(d, 2, 1).unwrap();
        let z = clock_matrix(d);
        assert!(max_abs_diff(&b, &(&z * &z)) < 1e-15);
        // d=2: A_2 = σ_x
        let d2 = PrimeDim::new(2).unwrap();
        let b = basis_row(d2, 1, 2).unwrap();
        assert!(max_abs_diff(&b, &shift_matrix(d2)) < 1e-15);
        assert!(matches!(basis_row(d, 0, 1), Err(Error::Index(_))));
        assert!(matches!(basis_row(d, 3, 1), Err(Error::Index(_))));
    }

    #[test]
    fn canonical_commutation() {
        // Z^q X^p = ω^{pq} X^p Z^q
        for dd in [2usize, 3, 5] {
            let d = PrimeDim::new(dd).unwrap();
            let x = shift_matrix(d);
            let z = clock_matrix(d);
            for p in 0..dd {
                for q in 0..dd {
                    let lhs = matrix_power(&z, q) * matrix_power(&x, p);
                    let rhs =
                        (matrix_power(&x, p) * matrix_power(&z, q)).map(|e| e * d.omega_pow((p * q) as i64));
                    assert!(max_abs_diff(&lhs, &rhs) < TOL_MAT, "d={dd} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn hilbert_schmidt_orthogonality() {
        for dd in [2usize, 3] {
            let d = PrimeDim::new(dd).unwrap();
            for j in 0..dd * dd {
                for k in 0..dd * dd {
                    let wj = weyl_operator(d, WeylLabel::from_flat(d, j).unwrap());
                    let wk = weyl_operator(d, WeylLabel::from_flat(d, k).unwrap());
                    let inner = hs_inner(&wj, &wk);
                    let expected = if j == k { dd as f64 } else { 0.0 };
                    assert!(
                        (inner - c(expected, 0.0)).norm() < TOL_MAT,
                        "d={dd} j={j} k={k} inner={inner}"
                    );
                }
            }
        }
    }

    #[test]
    fn observables_unitary_and_traceless() {
        for dd in [2usize, 3] {
            let d = PrimeDim::new(dd).unwrap();
            for x in 1..dd * dd {
                let a = alice_observable(d, x).unwrap();
                assert!(unitarity_residual(&a) < TOL_MAT);
                assert!(a.trace().norm() < TOL_MAT);
            }
        }
    }

    #[test]
    fn d2_observables_hermitian_odd_d_not_required() {
        let d2 = PrimeDim::new(2).unwrap();
        for x in 1..4 {
            let a = alice_observable(d2, x).unwrap();
            assert!(crate::cmatrix::hermiticity_residual(&a) < TOL_MAT);
        }
    }

    #[test]
    fn expand_basis_element_is_unit_vector() {
        let d = PrimeDim::new(3).unwrap();
        let z = clock_matrix(d);
        let coeffs = expand_traceless(&z, d, 1).unwrap();
        assert!((coeffs[0] - c(1.0, 0.0)).norm() < TOL_MAT);
        for cx in &coeffs[1..] {
            assert!(cx.norm() < TOL_MAT);
        }
    }

    #[test]
    fn expand_rejects_non_traceless() {
        let d = PrimeDim::new(3).unwrap();
        let err = expand_traceless(&identity(3), d, 1);
        match err {
            Err(Error::Trace(t)) => assert!((t - 3.0).abs() < 1e-12),
            other => panic!("expected Trace error, got {other:?}"),
        }
    }

    fn random_traceless(rng: &mut ChaCha8Rng, dd: usize) -> CMatrix {
        let mut m = CMatrix::from_fn(dd, dd, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let shift = m.trace() / dd as f64;
        for i in 0..dd {
            m[(i, i)] -= shift;
        }
        m
    }

    #[test]
    fn expand_reconstruct_round_trip() {
        // 100 random traceless matrices per tested d, residual < 1e-9
        for dd in [2usize, 3] {
            let d = PrimeDim::new(dd).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7 + dd as u64);
            for _ in 0..100 {
                let m = random_traceless(&mut rng, dd);
                for n in 1..dd {
                    let coeffs = expand_traceless(&m, d, n).unwrap();
                    let back = reconstruct(&coeffs, d, n).unwrap();
                    assert!(max_abs_diff(&back, &m) < TOL_MAT);
                    // Parseval: Σ|c|² = ‖M‖²_HS / d
                    let lhs: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
                    let rhs = hs_inner(&m, &m).re / dd as f64;
                    assert!((lhs - rhs).abs() < TOL_MAT);
                }
            }
        }
    }

    #[test]
    fn weyl_power_phase_oracle() {
        // W_x^n equals ω^{pq·n(n−1)/2} W_{(np, nq) mod d} for odd d: the
        // normal-ordering phase from the commutation relation.
        let d = PrimeDim::new(3).unwrap();
        for x in 1..9usize {
            let label = WeylLabel::from_flat(d, x).unwrap();
            for n in 1..3usize {
                let lhs = matrix_power(&weyl_operator(d, label), n);
                let target = WeylLabel {
                    p: (n * label.p) % 3,
                    q: (n * label.q) % 3,
                };
                let phase = d.omega_pow((label.p * label.q * n * (n - 1) / 2) as i64);
                let rhs = weyl_operator(d, target).map(|e| e * phase);
                assert!(max_abs_diff(&lhs, &rhs) < TOL_MAT, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn basis_rows_orthogonal_within_power() {
        let d = PrimeDim::new(3).unwrap();
        for n in 1..3usize {
            for a in 1..9usize {
                for x in 1..9usize {
                    let ba = basis_row(d, n, a).unwrap();
                    let bx = basis_row(d, n, x).unwrap();
                    let inner = hs_inner(&ba, &bx);
                    let expected = if a == x { 3.0 } else { 0.0 };
                    assert!((inner - c(expected, 0.0)).norm() < TOL_MAT);
                }
            }
        }
    }

    #[test]
    fn traceless_expansion_dimension_guard() {
        let d = PrimeDim::new(3).unwrap();
        let m = CMatrix::zeros(2, 2);
        assert!(matches!(
            expand_traceless(&m, d, 1),
            Err(Error::Dimension(_))
        ));
        assert!(max_abs(&reconstruct(&vec![c(0., 0.); 8], d, 1).unwrap()) < 1e-15);
    }
}
