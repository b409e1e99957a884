//! Local-unitary invariants of multipartite quantum states.
//!
//! The central object is the *link matrix* of an ordered subsystem pair
//! (`from`, `to`): the realignment of the partially transposed two-body
//! marginal,
//!
//! ```text
//! L(to <- from) = R( rho_{to,from}^{T_from} )
//! ```
//!
//! a `d_to^2 x d_from^2` matrix. Under local unitaries `U_k` on each
//! subsystem a link transforms covariantly, `L -> (U_to (x) U_to^*) L
//! (U_from (x) U_from^*)^dagger`, so the product of links around any closed
//! path of subsystems is conjugated as a whole and its trace, spectrum and
//! characteristic polynomial are invariant. Retracing paths (out along a
//! chain and back the same way) yield positive-semidefinite path operators;
//! the shortest one, on a pair of qubits, reproduces the two-tangle.
//!
//! Subsystems are indexed `0..N` with subsystem `0` the most significant
//! factor of the composite (row-major) index. The command-line front end
//! uses 1-based labels; the library is 0-based throughout.

pub mod error;
pub mod io;
mod linalg;
pub mod link;
pub mod path;
pub mod random;
pub mod tensor;
pub mod tol;
pub mod verify;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;

pub use error::{Error, Result};
pub use link::{link_matrix, pauli_link_matrix, u_matrix, LinkMatrix};
pub use path::{
    char_poly_coefficients, invariant_report, kempe_invariant, path_operator, path_trace_invariant,
    spectrum, two_tangle, ClosedPath, InvariantReport,
};
pub use random::{
    haar_random_pure, haar_random_unitary, random_orthogonal, separable_state, Seed, SeparableKind,
};
pub use tensor::{
    ccn_norm, partial_transpose, realign, swap_operator, BipartiteShape, DensityMatrix, PureState,
    Slot, State, SubsystemDims,
};
pub use verify::{run_suite, spectral_survey, CheckResult, Suite, Survey};
