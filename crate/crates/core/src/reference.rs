//! Closed-form reference data for the two built-in constructions (d = 2 and
//! the d = 3 Hesse instance): coefficient matrices, SIC and MUB tables, the
//! published bounds, and the known optimal classical strategy. Used by the
//! golden tests and the `report` command.

use crate::bounds::DeterministicStrategy;
use crate::cmatrix::{CMatrix, CVector, Complex64};
use crate::wh::PrimeDim;

/// Classical bound of the d = 2 instance, `2√3`.
pub fn classical_bound_d2() -> f64 {
    2.0 * 3.0_f64.sqrt()
}

pub const QUANTUM_BOUND_D2: f64 = 4.0;

/// Critical visibility of the d = 2 instance, `√3/2 ≈ 0.86603`.
pub fn visibility_d2() -> f64 {
    3.0_f64.sqrt() / 2.0
}

pub const CLASSICAL_BOUND_D3: f64 = 15.0;
pub const QUANTUM_BOUND_D3: f64 = 18.0;
/// `15/18 ≈ 0.83333`.
pub const VISIBILITY_D3: f64 = 5.0 / 6.0;

/// The d = 2 coefficient matrix `(1/√3) [(−1,−1,1,1), (−1,1,−1,1), (1,−1,−1,1)]`.
pub fn f1_d2() -> CMatrix {
    let s = 1.0 / 3.0_f64.sqrt();
    let signs: [[f64; 4]; 3] = [
        [-1.0, -1.0, 1.0, 1.0],
        [-1.0, 1.0, -1.0, 1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    CMatrix::from_fn(3, 4, |i, j| Complex64::new(s * signs[i][j], 0.0))
}

/// Sign pattern of the original elegant Bell inequality; related to
/// [`f1_d2`] by the column relabel `y → 3−y` and the factor `√3`.
pub fn ebi_signs() -> [[f64; 4]; 3] {
    [
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]
}

/// The 8×9 coefficient matrix of the d = 3 Hesse instance.
///
/// Rows follow x = 1..8, columns y = 0..8 with `y = 3r + s`,
/// `W_y = X^r Z^s`. Entries are `(1/2)` times symbols from
/// `{1, ω, ω², λ, μ, ν}` with `λ = −i/√3`, `μ = ωλ`, `ν = ω²λ`.
pub fn f1_d3() -> CMatrix {
    let d = PrimeDim::new(3).expect("3 is prime");
    let w = d.omega();
    let w2 = w * w;
    let one = Complex64::new(1.0, 0.0);
    let lam = Complex64::new(0.0, -1.0 / 3.0_f64.sqrt());
    let mu = w * lam;
    let nu = w2 * lam;
    // as published, with columns re-ordered from the (s,r) listing to the
    // y = 3r+s convention used throughout this crate
    let rows_published: [[Complex64; 9]; 8] = [
        [one, one, one, w2, w2, w2, w, w, w],
        [one, one, one, w, w, w, w2, w2, w2],
        [lam, nu, mu, lam, nu, mu, lam, nu, mu],
        [nu, mu, lam, mu, lam, nu, lam, nu, mu],
        [mu, lam, nu, nu, mu, lam, lam, nu, mu],
        [lam, mu, nu, lam, mu, nu, lam, mu, nu],
        [mu, nu, lam, lam, mu, nu, nu, lam, mu],
        [nu, lam, mu, lam, mu, nu, mu, nu, lam],
    ];
    CMatrix::from_fn(8, 9, |i, j| rows_published[i][j] * 0.5)
}

/// The two dual SIC tables of the d = 3 instance, as vectors ordered by the
/// orbit index `y = 3r + s` (the published tables list columns by `3s + r`;
/// the reorder is applied here so callers can compare against
/// [`crate::sic::sic_orbit`] directly). `sic_table_1` is the orbit of
/// `(1/√2)(0,1,1)`, `sic_table_2` of the Hesse fiducial `(1/√2)(0,1,−1)`.
pub fn sic_table_1() -> Vec<CVector> {
    sic_table(false)
}

pub fn sic_table_2() -> Vec<CVector> {
    sic_table(true)
}

fn sic_table(second: bool) -> Vec<CVector> {
    let d = PrimeDim::new(3).expect("3 is prime");
    let w = d.omega();
    let w2 = w * w;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // columns in the published order (index 3s + r)
    let cols1: [[Complex64; 3]; 9] = [
        [zero, one, one],
        [one, zero, one],
        [one, one, zero],
        [zero, w, w2],
        [w2, zero, w],
        [w, w2, zero],
        [zero, w2, w],
        [w, zero, w2],
        [w2, w, zero],
    ];
    let cols2: [[Complex64; 3]; 9] = [
        [zero, one, -one],
        [-one, zero, one],
        [one, -one, zero],
        [zero, w, -w2],
        [-w2, zero, w],
        [w, -w2, zero],
        [zero, w2, -w],
        [-w, zero, w2],
        [w2, -w, zero],
    ];
    let cols = if second { cols2 } else { cols1 };
    let s = 1.0 / 2.0_f64.sqrt();
    (0..9)
        .map(|y| {
            let (r, sidx) = (y / 3, y % 3);
            let col = &cols[3 * sidx + r];
            CVector::from_iterator(3, col.iter().map(|z| z * s))
        })
        .collect()
}

/// The four published MUB tables for d = 3, in the order matching
/// [`crate::sic::mub_family`] (eigenbases of Z, X, XZ, XZ²).
pub fn mub_tables() -> Vec<Vec<CVector>> {
    let d = PrimeDim::new(3).expect("3 is prime");
    let w = d.omega();
    let w2 = w * w;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let s = 1.0 / 3.0_f64.sqrt();
    // rows as published; the closure below slices out columns
    let mub1: [[Complex64; 3]; 3] = [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
    let mub2: [[Complex64; 3]; 3] = [[one, w2, w], [one, w, w2], [one, one, one]];
    let mub3: [[Complex64; 3]; 3] = [[w2, w, one], [w2, one, w], [one, one, one]];
    let mub4: [[Complex64; 3]; 3] = [[w, one, w2], [w, w2, one], [one, one, one]];
    let scale = |rows: [[Complex64; 3]; 3], unit: bool| -> Vec<CVector> {
        (0..3)
            .map(|j| {
                CVector::from_iterator(
                    3,
                    (0..3).map(|i| rows[i][j] * if unit { 1.0 } else { s }),
                )
            })
            .collect()
    };
    vec![
        scale(mub1, true),
        scale(mub2, false),
        scale(mub3, false),
        scale(mub4, false),
    ]
}

/// The published optimal deterministic strategy for the d = 3 instance:
/// every Alice setting outputs 0; Bob outputs 0 for y ∈ {0,1,2}, 1 for
/// y ∈ {3,6}, 2 for y ∈ {4,5,7,8}.
pub fn optimal_strategy_d3() -> DeterministicStrategy {
    DeterministicStrategy {
        alice: vec![0; 8],
        bob: vec![0, 0, 0, 1, 2, 2, 1, 2, 2],
    }
}

/// `1 − |⟨table_i | v_i⟩|` maximized over aligned pairs: zero when each
/// vector matches its reference up to a global phase.
pub fn phase_free_mismatch(vectors: &[CVector], table: &[CVector]) -> f64 {
    assert_eq!(vectors.len(), table.len());
    vectors
        .iter()
        .zip(table.iter())
        .map(|(v, t)| (1.0 - t.dotc(v).norm()).abs())
        .fold(0.0, f64::max)
}

/// Setwise phase-free comparison: greedily match each vector to an unused
/// table column by best overlap and return the worst `1 − |overlap|`.
pub fn setwise_mismatch(vectors: &[CVector], table: &[CVector]) -> f64 {
    assert_eq!(vectors.len(), table.len());
    let mut used = vec![false; table.len()];
    let mut worst: f64 = 0.0;
    for v in vectors {
        let mut best = -1.0;
        let mut best_j = 0;
        for (j, t) in table.iter().enumerate() {
            if used[j] {
                continue;
            }
            let ov = t.dotc(v).norm();
            if ov > best {
                best = ov;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = worst.max((1.0 - best).abs());
    }
    worst
}
