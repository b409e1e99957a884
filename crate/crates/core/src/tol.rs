//! Every tolerance used by the library and the verification suites, in one
//! place. Checks echo the constant they were judged against into their
//! result details, so a reported violation can always be traced back here.
//!
//! Unless stated otherwise a tolerance bounds an absolute deviation.
//! Constants documented as *relative* are multiplied by a scale
//! (`max(1, |value|)` for scalars, a matrix norm for operators) at the point
//! of use.

// --- state validation ------------------------------------------------------

/// Pure-state amplitude vectors must have 2-norm within this of 1.
pub const STATE_NORM: f64 = 1e-12;
/// Density matrices must be Hermitian entrywise within this.
pub const HERMITICITY: f64 = 1e-12;
/// Density matrices must have trace within this of 1.
pub const TRACE_ONE: f64 = 1e-12;
/// On-demand positivity check: smallest eigenvalue may not lie below this.
pub const PSD_MIN_EIG: f64 = -1e-10;

// --- generators ------------------------------------------------------------

/// `U^dagger U - I` for generated unitaries and orthogonals, entrywise.
pub const UNITARITY: f64 = 1e-13;

// --- link matrices ---------------------------------------------------------

/// Swap-conjugation identity `S L S = L^*` enforced when a link is built.
pub const LINK_SWAP_CONJ: f64 = 1e-12;
/// Same identity, re-verified by the harness on independent inputs.
pub const SWAP_CONJ_CHECK: f64 = 1e-13;
/// Reversed link equals the adjoint of the forward link.
pub const ADJOINT_PAIR: f64 = 1e-13;
/// Element-formula link vs. the operator-basis trace formula.
pub const LINK_FORMULAS: f64 = 1e-14;
/// Imaginary residue tolerated in Pauli-basis link entries before dropping.
pub const PAULI_IMAG: f64 = 1e-14;
/// Pauli-basis link vs. the conjugated realigned partial transpose.
pub const PAULI_BRIDGE: f64 = 1e-12;
/// Local-unitary covariance of a single link, entrywise.
pub const LINK_COVARIANCE: f64 = 1e-12;

// --- path operators and spectra --------------------------------------------

/// Imaginary residue of a closed-path trace, relative.
pub const TRACE_IMAG_REL: f64 = 1e-10;
/// Eigenpair residual `|P v - lambda v|`, relative to `|P|_F`.
pub const EIG_RESIDUAL: f64 = 1e-8;
/// Spectrum must be closed under conjugation within this, relative.
pub const CONJ_PAIRING: f64 = 1e-9;
/// Imaginary residue of characteristic-polynomial coefficients, relative.
pub const CHARPOLY_IMAG: f64 = 1e-9;

// --- invariance checks ------------------------------------------------------

/// Trace and spectrum drift under local unitaries, relative.
pub const LU_INVARIANCE: f64 = 1e-9;
/// Conjugation identity `P = W^dagger P~ W`, entrywise.
pub const LU_CONJUGATION: f64 = 1e-10;
/// Non-local control transforms must move the invariant by more than this...
pub const CONTROL_DEVIATION: f64 = 1e-6;
/// ...in at least this fraction of trials.
pub const CONTROL_FRACTION: f64 = 0.9;
/// Realignment-only quantity under orthogonal (real) local rotations.
pub const ORTHO_INVARIANCE: f64 = 1e-10;

// --- retracing paths --------------------------------------------------------

/// Eigenvalue floor for retracing path operators, relative to `|P|_F`.
pub const RETRACE_MIN_EIG: f64 = 1e-10;
/// `P = M^dagger M` for the half-path product `M`, entrywise.
pub const RETRACE_FACTORIZATION: f64 = 1e-12;

// --- derived invariants ------------------------------------------------------

/// Negative slack allowed in the two-tangle determinant before erroring.
pub const TWO_TANGLE_DET_NEG: f64 = 1e-12;
/// Two-tangle vs. an independent concurrence computation.
pub const TWO_TANGLE_MATCH: f64 = 1e-10;
/// Separable-state path spectra vs. their closed forms.
pub const SEPARABLE_SPECTRUM: f64 = 1e-10;

// --- spectral survey ----------------------------------------------------------

/// A dominant eigenvalue counts as strictly dominant when it exceeds the
/// runner-up modulus by this relative margin.
pub const DOMINANCE_SEPARATION: f64 = 1e-6;
/// Imaginary part of a strictly dominant eigenvalue, relative to its modulus.
pub const DOMINANT_REAL_REL: f64 = 1e-9;
/// Allowed relative half-width of the band around predicted mean entry
/// magnitudes of random-state link blocks.
pub const MAGNITUDE_BAND: f64 = 0.25;
