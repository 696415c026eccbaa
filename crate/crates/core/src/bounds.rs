//! Bounds of the Bell expression: the closed-form quantum bound, the Bell
//! operator and quantum values, exact LHV maximization by enumeration with
//! Bob decoupling, a coordinate-ascent heuristic for large dimensions, and
//! the critical visibility.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::{
    eigenvalues_hermitian, hermiticity_residual, identity, kron, matrix_power, outer, CMatrix,
    CVector, TOL_MAT, TOL_PSD,
};
use crate::error::{Error, Result};
use crate::sic::{max_entangled, Realization};
use crate::tensor::{CoefficientTensor, GTensor};
use crate::wh::PrimeDim;

/// One local deterministic strategy: an output in `[0, d)` for each of
/// Alice's `d²−1` settings and each of Bob's `d²` settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// Result of an LHV maximization.
#[derive(Clone, Debug)]
pub struct LhvSolution {
    pub value: f64,
    pub strategy: DeterministicStrategy,
}

/// The closed-form quantum bound `Q̃ = (1/2)[Σ_n ‖F_n‖² + d²(d−1)]`,
/// valid only under row orthogonality; by Parseval it equals `d²(d−1)`
/// for every tensor built from a valid fiducial.
pub fn quantum_bound(t: &CoefficientTensor) -> Result<f64> {
    let residual = t.row_orthogonality_residual();
    if residual >= TOL_MAT {
        return Err(Error::Certificate(format!(
            "row orthogonality violated (residual {residual:.3e}); the closed-form bound does not apply"
        )));
    }
    let dd = t.dim().get();
    let norms: f64 = (1..dd).map(|n| t.norm_sq(n)).sum();
    Ok(0.5 * (norms + (dd * dd * (dd - 1)) as f64))
}

/// The Bell operator `𝓑 = Σ_n Σ_{x,y} f^n_{x,y} A_x^n ⊗ B_y^n`, Hermitian
/// to tolerance by the real-valuedness condition.
pub fn bell_operator(t: &CoefficientTensor, r: &Realization) -> Result<CMatrix> {
    let d = t.dim();
    let dd = d.get();
    if r.dim() != d {
        return Err(Error::Dimension(format!(
            "tensor has d = {} but realization has d = {}",
            dd,
            r.dim().get()
        )));
    }
    let mut op = CMatrix::zeros(dd * dd, dd * dd);
    for n in 1..dd {
        for y in 0..dd * dd {
            // D_y^n = Σ_x f^n_{x,y} A_x^n
            let mut dyn_op = CMatrix::zeros(dd, dd);
            for x in 1..dd * dd {
                let f = t.entry(n, x, y);
                dyn_op += matrix_power(r.alice(x), n).map(|e| e * f);
            }
            let byn = matrix_power(r.bob(y), n);
            op += kron(&dyn_op, &byn);
        }
    }
    Ok(op)
}

/// A state for expectation values: a pure vector on `C^{d²}` or a density
/// matrix. Validated before use.
#[derive(Clone, Debug)]
pub enum QuantumState {
    Pure(CVector),
    Density(CMatrix),
}

impl QuantumState {
    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            QuantumState::Pure(v) => {
                if v.len() != dim {
                    return Err(Error::State(format!(
                        "state has length {}, expected {dim}",
                        v.len()
                    )));
                }
                if (v.norm() - 1.0).abs() > TOL_MAT {
                    return Err(Error::State(format!("state norm {} is not 1", v.norm())));
                }
            }
            QuantumState::Density(rho) => {
                if rho.nrows() != dim || rho.ncols() != dim {
                    return Err(Error::State(format!(
                        "density matrix is {}x{}, expected {dim}x{dim}",
                        rho.nrows(),
                        rho.ncols()
                    )));
                }
                if hermiticity_residual(rho) > TOL_MAT {
                    return Err(Error::State("density matrix is not Hermitian".into()));
                }
                if (rho.trace().re - 1.0).abs() > TOL_MAT {
                    return Err(Error::State(format!(
                        "density matrix trace {} is not 1",
                        rho.trace().re
                    )));
                }
                let min = eigenvalues_hermitian(rho)[0];
                if min < -TOL_PSD {
                    return Err(Error::State(format!(
                        "density matrix has negative eigenvalue {min:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `⟨ψ|M|ψ⟩` or `tr[ρM]`.
    pub fn expectation(&self, m: &CMatrix) -> f64 {
        match self {
            QuantumState::Pure(v) => v.dotc(&(m * v)).re,
            QuantumState::Density(rho) => (rho * m).trace().re,
        }
    }
}

/// Quantum value of the expression on a state: `tr[ρ 𝓑]`.
pub fn quantum_value(t: &CoefficientTensor, r: &Realization, state: &QuantumState) -> Result<f64> {
    let dd = t.dim().get();
    state.validate(dd * dd)?;
    let op = bell_operator(t, r)?;
    Ok(state.expectation(&op))
}

/// The isotropic state `ν |φ_d⁺⟩⟨φ_d⁺| + (1−ν) 𝕀/d²`.
pub fn isotropic_state(d: PrimeDim, nu: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::State(format!("visibility ν = {nu} outside [0, 1]")));
    }
    let dd = d.get();
    let phi = max_entangled(d);
    let rho = outer(&phi, &phi).map(|e| e * nu)
        + identity(dd * dd).map(|e| e * ((1.0 - nu) / (dd * dd) as f64));
    Ok(QuantumState::Density(rho))
}

/// Value of one deterministic strategy under the weights `g`.
pub fn evaluate_strategy(g: &GTensor, strategy: &DeterministicStrategy) -> f64 {
    let dd = g.dim().get();
    let mut total = 0.0;
    for (xm1, &a) in strategy.alice.iter().enumerate() {
        for (y, &b) in strategy.bob.iter().enumerate() {
            total += g.at(xm1, y, (a + b) % dd);
        }
    }
    total
}

/// Best response value for a fixed Alice assignment: Bob's settings
/// decouple, so each column is maximized independently. Returns the value
/// and the maximizing Bob outputs (first maximum wins).
fn decoupled_value(g: &GTensor, alice: &[usize]) -> (f64, Vec<usize>) {
    let dd = g.dim().get();
    let ny = dd * dd;
    let mut total = 0.0;
    let mut bob = Vec::with_capacity(ny);
    for y in 0..ny {
        let mut best = f64::NEG_INFINITY;
        let mut best_beta = 0;
        for beta in 0..dd {
            let mut acc = 0.0;
            for (xm1, &a) in alice.iter().enumerate() {
                acc += g.at(xm1, y, (a + beta) % dd);
            }
            if acc > best {
                best = acc;
                best_beta = beta;
            }
        }
        total += best;
        bob.push(best_beta);
    }
    (total, bob)
}

fn assignment_from_index(mut idx: usize, count: usize, dd: usize) -> Vec<usize> {
    let mut a = vec![0; count];
    for slot in (0..count).rev() {
        a[slot] = idx % dd;
        idx /= dd;
    }
    a
}

fn exact_space_size(d: PrimeDim) -> Result<usize> {
    let dd = d.get();
    if dd > 3 {
        return Err(Error::Infeasible(dd));
    }
    Ok(dd.pow((dd * dd - 1) as u32))
}

/// Exact LHV bound `L = max_a Σ_y max_β Σ_x g_{x,y}^{a_x,β}` by full
/// enumeration of Alice assignments in lexicographic order (ties keep the
/// first optimizer found, so the returned strategy is deterministic).
/// Exact mode is limited to d ≤ 3.
pub fn lhv_bound(g: &GTensor) -> Result<LhvSolution> {
    let d = g.dim();
    let dd = d.get();
    let total = exact_space_size(d)?;
    let nx = dd * dd - 1;
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = 0;
    let mut best_bob = Vec::new();
    for idx in 0..total {
        let alice = assignment_from_index(idx, nx, dd);
        let (value, bob) = decoupled_value(g, &alice);
        if value > best {
            best = value;
            best_idx = idx;
            best_bob = bob;
        }
    }
    Ok(LhvSolution {
        value: best,
        strategy: DeterministicStrategy {
            alice: assignment_from_index(best_idx, nx, dd),
            bob: best_bob,
        },
    })
}

/// Parallel variant of [`lhv_bound`]: a max-reduction over disjoint blocks
/// of assignments with ties broken toward the smaller index, so the result
/// (value and strategy) is identical to the sequential scan.
#[cfg(feature = "parallel")]
pub fn lhv_bound_parallel(g: &GTensor) -> Result<LhvSolution> {
    use rayon::prelude::*;
    let d = g.dim();
    let dd = d.get();
    let total = exact_space_size(d)?;
    let nx = dd * dd - 1;
    let winner = (0..total)
        .into_par_iter()
        .map(|idx| {
            let alice = assignment_from_index(idx, nx, dd);
            let (value, bob) = decoupled_value(g, &alice);
            (value, idx, bob)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, Vec::new()),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(LhvSolution {
        value: winner.0,
        strategy: DeterministicStrategy {
            alice: assignment_from_index(winner.1, nx, dd),
            bob: winner.2,
        },
    })
}

/// Coordinate-ascent lower bound on L: from a seeded random Alice
/// assignment, repeatedly replace single outputs while Bob's best response
/// is recomputed each step; keeps the best of `restarts` runs. The returned
/// value never exceeds the exact bound, and restarts are deterministically
/// seeded so repeated calls agree.
pub fn lhv_heuristic(g: &GTensor, restarts: usize) -> LhvSolution {
    let dd = g.dim().get();
    let nx = dd * dd - 1;
    let mut best: Option<LhvSolution> = None;
    for restart in 0..restarts.max(1) as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xEB1F_0000 ^ restart);
        let mut alice: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..dd)).collect();
        let (mut value, mut bob) = decoupled_value(g, &alice);
        loop {
            let mut improved = false;
            for slot in 0..nx {
                let mut kept = alice[slot];
                for candidate in 0..dd {
                    if candidate == kept {
                        continue;
                    }
                    alice[slot] = candidate;
                    let (v, b) = decoupled_value(g, &alice);
                    if v > value + 1e-15 {
                        value = v;
                        bob = b;
                        kept = candidate;
                        improved = true;
                    }
                }
                alice[slot] = kept;
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().map_or(true, |s| value > s.value) {
            best = Some(LhvSolution {
                value,
                strategy: DeterministicStrategy { alice, bob },
            });
        }
    }
    best.expect("at least one restart")
}

#[derive(Clone, Debug)]
pub struct ProbabilityTable {
    d: PrimeDim,
    /// layout: `((x−1) · d² + y) · d² + α·d + β`
    values: Vec<f64>,
}

impl ProbabilityTable {
    /// Validate normalization (each setting pair sums to 1) and
    /// nonnegativity up to numerical noise.
    pub fn new(d: PrimeDim, values: Vec<f64>) -> Result<Self> {
        let dd = d.get();
        let expected = (dd * dd - 1) * dd * dd * dd * dd;
        if values.len() != expected {
            return Err(Error::Probability(format!(
                "expected {expected} entries, got {}",
                values.len()
            )));
        }
        let table = ProbabilityTable { d, values };
        for x in 1..dd * dd {
            for y in 0..dd * dd {
                let mut total = 0.0;
                for alpha in 0..dd {
                    for beta in 0..dd {
                        let p = table.value(x, y, alpha, beta);
                        if p < -1e-12 {
                            return Err(Error::Probability(format!(
                                "negative probability {p:.3e} at (x={x}, y={y})"
                            )));
                        }
                        total += p;
                    }
                }
                if (total - 1.0).abs() > TOL_MAT {
                    return Err(Error::Probability(format!(
                        "setting (x={x}, y={y}) sums to {total}, not 1"
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn from_fn(d: PrimeDim, f: impl Fn(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let dd = d.get();
        let mut values = Vec::with_capacity((dd * dd - 1) * dd * dd * dd * dd);
        for x in 1..dd * dd {
            for y in 0..dd * dd {
                for alpha in 0..dd {
                    for beta in 0..dd {
                        values.push(f(x, y, alpha, beta));
                    }
                }
            }
        }
        Self::new(d, values)
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn value(&self, x: usize, y: usize, alpha: usize, beta: usize) -> f64 {
        let dd = self.d.get();
        self.values[((x - 1) * dd * dd + y) * dd * dd + alpha * dd + beta]
    }
}

/// Evaluate the expression on a probability table:
/// `S = Σ_{α,β,x,y} g_{x,y}^{α,β} P(αβ|xy)`.
pub fn evaluate_expression(g: &GTensor, p: &ProbabilityTable) -> Result<f64> {
    if g.dim() != p.dim() {
        return Err(Error::Dimension(
            "weights and table have different d".into(),
        ));
    }
    let dd = g.dim().get();
    let mut total = 0.0;
    for x in 1..dd * dd {
        for y in 0..dd * dd {
            for alpha in 0..dd {
                for beta in 0..dd {
                    total += g.value(x, y, alpha, beta) * p.value(x, y, alpha, beta);
                }
            }
        }
    }
    Ok(total)
}

/// The Born-rule probability table of a realization on a state, using the
/// rank-one spectral projectors of each observable.
pub fn born_table(r: &Realization, state: &QuantumState) -> Result<ProbabilityTable> {
    let d = r.dim();
    let dd = d.get();
    state.validate(dd * dd)?;
    let alice_proj: Vec<Vec<CMatrix>> = (1..dd * dd)
        .map(|x| spectral_projectors(r.alice(x), d))
        .collect();
    let bob_proj: Vec<Vec<CMatrix>> = (0..dd * dd)
        .map(|y| spectral_projectors(r.bob(y), d))
        .collect();
    ProbabilityTable::from_fn(d, |x, y, alpha, beta| {
        state.expectation(&kron(&alice_proj[x - 1][alpha], &bob_proj[y][beta]))
    })
}

/// Projectors `P_k = (1/d) Σ_m ω^{−km} U^m` onto the `ω^k` eigenspaces of a
/// unitary with `U^d = 1`.
fn spectral_projectors(u: &CMatrix, d: PrimeDim) -> Vec<CMatrix> {
    let dd = d.get();
    let mut powers = Vec::with_capacity(dd);
    let mut acc = identity(u.nrows());
    for _ in 0..dd {
        powers.push(acc.clone());
        acc = &acc * u;
    }
    (0..dd)
        .map(|k| {
            let mut proj = CMatrix::zeros(u.nrows(), u.ncols());
            for (m, um) in powers.iter().enumerate() {
                let phase = d.omega_pow(-((k * m) as i64));
                proj += um.map(|e| e * phase);
            }
            proj.unscale(dd as f64)
        })
        .collect()
}

/// Critical visibility of the isotropic state, `ν_c = L/Q̃`; exact for
/// marginal-free expressions because the maximally mixed state scores 0.
pub fn critical_visibility(l: f64, q: f64) -> Result<f64> {
    if !(l > 0.0 && l < q) {
        return Err(Error::NoViolation { l, q });
    }
    Ok(l / q)
}
