//! Construction and numerical certification of Bell inequalities whose
//! maximal quantum violation is reached by the maximally entangled state,
//! Weyl-Heisenberg observables on one side, and SIC-generating observables
//! on the other.
//!
//! The pipeline, for a prime local dimension `d`:
//!
//! 1. pick a fiducial vector whose Weyl-Heisenberg orbit is a SIC
//!    ([`sic::builtin_fiducial`], [`sic::Fiducial::from_file`]),
//! 2. complete it to an eigenframe and form Bob's reference observable
//!    ([`sic::complete_frame`], [`sic::bob_reference`]),
//! 3. solve the saturation condition for the seed columns and expand them
//!    into the full coefficient tensor ([`tensor::seed_column`],
//!    [`tensor::expand_tensor`]),
//! 4. obtain the classical bound by exact enumeration and the quantum bound
//!    in closed form ([`bounds::lhv_bound`], [`bounds::quantum_bound`]),
//! 5. certify everything: sum-of-squares identity, positivity, saturation,
//!    and the SIC/MUB structure of the optimal measurements
//!    ([`certificate::sos_certificate`]).
//!
//! [`instance::build_instance`] runs the whole pipeline and returns a
//! [`instance::BellInstance`] carrying the tensor, both bounds, and the
//! critical visibility.

pub mod bounds;
pub mod certificate;
pub mod cmatrix;
pub mod error;
pub mod instance;
pub mod io;
pub mod reference;
pub mod sic;
pub mod tensor;
pub mod wh;

pub use bounds::{
    critical_visibility, evaluate_expression, lhv_bound, lhv_heuristic, quantum_bound,
    quantum_value, DeterministicStrategy, LhvSolution, ProbabilityTable, QuantumState,
};
pub use certificate::{sos_certificate, CertificateReport};
pub use cmatrix::{CMatrix, CVector, Complex64, TOL_MAT, TOL_PSD, TOL_SIC};
pub use error::{Error, Result};
pub use instance::{build_instance, instance_from_tensor, BellInstance, BuildOptions};
pub use sic::{
    bob_observable, bob_reference, builtin_fiducial, complete_frame, max_entangled, mub_family,
    sic_orbit, validate_sic, EigenFrame, Fiducial, FiducialSelector, Realization,
};
pub use tensor::{
    expand_tensor, functional_form_check, g_tensor, seed_column, CoefficientTensor, GTensor,
};
pub use wh::{alice_observable, basis_row, expand_traceless, weyl_operator, PrimeDim, WeylLabel};

#[cfg(feature = "parallel")]
pub use bounds::lhv_bound_parallel;
