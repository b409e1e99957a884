//! Closed paths of subsystem labels, the operators obtained by composing
//! links along them, and the local-unitary invariants read off those
//! operators.

use crate::error::{Error, Result};
use crate::link::link_matrix;
use crate::tensor::{PureState, State};
use crate::{linalg, tol, CMat, CVec, C64};

/// Closed path `(a_1, ..., a_K)`, 0-based labels, `K >= 2`. Consecutive
/// labels must differ, including around the wrap `a_K -> a_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPath {
    labels: Vec<usize>,
}

impl ClosedPath {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "a closed path needs at least two nodes, got {}",
                labels.len()
            )));
        }
        for k in 0..labels.len() {
            let next = labels[(k + 1) % labels.len()];
            if labels[k] == next {
                return Err(Error::InvalidPath(format!(
                    "consecutive labels must differ, found {} twice at position {k}",
                    labels[k]
                )));
            }
        }
        Ok(ClosedPath { labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Directed edges `(from, to)` in traversal order, closing edge last.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.labels.len();
        (0..k)
            .map(|i| (self.labels[i], self.labels[(i + 1) % k]))
            .collect()
    }

    pub fn validate_for(&self, dims: &crate::tensor::SubsystemDims) -> Result<()> {
        dims.check_labels(&self.labels, false)
    }

    /// A retracing path goes out along a chain and returns the same way:
    /// `K` even and `a_{L+j} = a_{L-j}` for the turning point `L = K/2 + 1`.
    /// Returns the 0-based index of the turning point.
    pub fn retrace_turn(&self) -> Option<usize> {
        let k = self.labels.len();
        if k % 2 != 0 {
            return None;
        }
        let l = k / 2 + 1; // outbound node count
        for j in 1..(l - 1) {
            if self.labels[l - 1 + j] != self.labels[l - 1 - j] {
                return None;
            }
        }
        Some(l - 1)
    }

    pub fn is_retracing(&self) -> bool {
        self.retrace_turn().is_some()
    }

    /// The same loop entered at a different base point. Path operators of
    /// rotations are related by similarity, so traces and spectra agree.
    pub fn rotated(&self, shift: usize) -> ClosedPath {
        let k = self.labels.len();
        ClosedPath {
            labels: (0..k).map(|i| self.labels[(i + shift) % k]).collect(),
        }
    }
}

impl std::fmt::Display for ClosedPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Product of links along the path, rightmost factor first:
///
/// ```text
/// P = L(a_1 <- a_K) ... L(a_3 <- a_2) L(a_2 <- a_1)
/// ```
///
/// a square operator on the doubled `a_1` space.
pub fn path_operator(state: &State, path: &ClosedPath) -> Result<CMat> {
    path.validate_for(state.dims())?;
    let mut op: Option<CMat> = None;
    for (from, to) in path.edges() {
        let l = link_matrix(state, from, to)?;
        op = Some(match op {
            None => l.mat,
            Some(m) => &l.mat * m,
        });
    }
    Ok(op.expect("a path has at least two edges"))
}

/// Product of links along the outbound half of a retracing path. The full
/// path operator is `M^dagger M` for this `M`.
pub fn half_path_operator(state: &State, path: &ClosedPath) -> Result<CMat> {
    let turn = path
        .retrace_turn()
        .ok_or_else(|| Error::InvalidPath(format!("path {path} does not retrace")))?;
    path.validate_for(state.dims())?;
    let mut op: Option<CMat> = None;
    for k in 0..turn {
        let l = link_matrix(state, path.labels[k], path.labels[k + 1])?;
        op = Some(match op {
            None => l.mat,
            Some(m) => &l.mat * m,
        });
    }
    Ok(op.expect("a retracing path has at least one outbound edge"))
}

fn real_trace(t: C64) -> Result<f64> {
    if t.im.abs() > tol::TRACE_IMAG_REL * t.norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "closed-path trace {t} has imaginary residue beyond {:e} (relative)",
            tol::TRACE_IMAG_REL
        )));
    }
    Ok(t.re)
}

/// `Re tr P` for the path operator; errors if the imaginary residue
/// exceeds its relative tolerance instead of silently dropping it.
pub fn path_trace_invariant(state: &State, path: &ClosedPath) -> Result<f64> {
    let p = path_operator(state, path)?;
    real_trace(p.trace())
}

/// Eigenvalue multiset of a path operator, sorted by decreasing modulus.
/// The multiset must be closed under conjugation (the operator is similar
/// to its own conjugate); the defect is measured, not assumed.
pub fn spectrum(p: &CMat) -> Result<Vec<C64>> {
    if p.nrows() != p.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "spectrum of a {}x{} matrix",
            p.nrows(),
            p.ncols()
        )));
    }
    let mut eigs = linalg::eigenvalues(p)?;
    linalg::sort_eigenvalues(&mut eigs);
    let scale = linalg::frobenius(p).max(1.0);
    let defect = linalg::conjugation_defect(&eigs);
    if defect > tol::CONJ_PAIRING * scale {
        return Err(Error::Numerical(format!(
            "spectrum not closed under conjugation: defect {defect:e} at scale {scale:e}"
        )));
    }
    Ok(eigs)
}

/// Eigenpairs of a path operator. Each eigenvector is accepted only when
/// its residual `|P v - lambda v|` is within `tol::EIG_RESIDUAL * |P|_F`.
pub fn spectrum_with_vectors(p: &CMat) -> Result<Vec<(C64, CVec)>> {
    if p.nrows() != p.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "spectrum of a {}x{} matrix",
            p.nrows(),
            p.ncols()
        )));
    }
    linalg::eigen_pairs(p)
}

fn charpoly_from_eigenvalues(eigs: &[C64]) -> Vec<C64> {
    let mut poly = vec![C64::new(1.0, 0.0)];
    for &l in eigs {
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= l * c;
        }
        poly = next;
    }
    poly
}

fn realize_coefficients(coeffs: &[C64]) -> Result<Vec<f64>> {
    coeffs
        .iter()
        .map(|c| {
            if c.im.abs() > tol::CHARPOLY_IMAG * c.norm().max(1.0) {
                Err(Error::Numerical(format!(
                    "characteristic polynomial coefficient {c} has imaginary residue"
                )))
            } else {
                Ok(c.re)
            }
        })
        .collect()
}

/// Coefficients of `det(x I - P)`, highest degree first (leading 1). Real
/// for path operators because the spectrum is closed under conjugation;
/// the imaginary residue is checked before being dropped.
pub fn char_poly_coefficients(p: &CMat) -> Result<Vec<f64>> {
    let eigs = spectrum(p)?;
    realize_coefficients(&charpoly_from_eigenvalues(&eigs))
}

/// Everything the library can say about one state/path combination.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub trace: f64,
    pub trace_imag_residue: f64,
    /// Sorted by decreasing modulus.
    pub eigenvalues: Vec<C64>,
    /// `det(x I - P)`, highest degree first.
    pub char_poly: Vec<f64>,
    pub retracing: bool,
    /// For retracing paths: whether the spectrum cleared the positivity
    /// floor. `None` when the path does not retrace.
    pub positive: Option<bool>,
}

pub fn invariant_report(state: &State, path: &ClosedPath) -> Result<InvariantReport> {
    let p = path_operator(state, path)?;
    let eigs = spectrum(&p)?;
    let t = p.trace();
    let trace = real_trace(t)?;
    let char_poly = realize_coefficients(&charpoly_from_eigenvalues(&eigs))?;
    let retracing = path.is_retracing();
    let positive = if retracing {
        let floor = -tol::RETRACE_MIN_EIG * linalg::frobenius(&p);
        Some(eigs.iter().all(|e| e.re >= floor))
    } else {
        None
    };
    Ok(InvariantReport {
        trace,
        trace_imag_residue: t.im.abs(),
        eigenvalues: eigs,
        char_poly,
        retracing,
        positive,
    })
}

/// Two-tangle of a two-qubit pure state: `4 det(P)^(1/4)` for the
/// elementary retraced pair loop; equal to the squared concurrence.
pub fn two_tangle(psi: &PureState) -> Result<f64> {
    if psi.dims().as_slice() != [2, 2] {
        return Err(Error::ShapeMismatch(format!(
            "two-tangle needs a qubit pair, got dimensions {:?}",
            psi.dims().as_slice()
        )));
    }
    let state = State::Pure(psi.clone());
    let p = path_operator(&state, &ClosedPath::new(vec![0, 1])?)?;
    let det = p.determinant();
    if det.re < -tol::TWO_TANGLE_DET_NEG {
        return Err(Error::Numerical(format!(
            "pair-loop determinant {det} is negative beyond tolerance"
        )));
    }
    if det.im.abs() > tol::TWO_TANGLE_DET_NEG * det.norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "pair-loop determinant {det} has imaginary residue"
        )));
    }
    Ok(4.0 * det.re.max(0.0).powf(0.25))
}

/// Trace invariant of the full cycle `(0, 1, ..., N-1)`; for three qubits
/// this is degree 6 in the state amplitudes.
pub fn kempe_invariant(state: &State) -> Result<f64> {
    let n = state.dims().count();
    if n < 3 {
        return Err(Error::InvalidPath(format!(
            "the full-cycle invariant needs at least three subsystems, got {n}"
        )));
    }
    path_trace_invariant(state, &ClosedPath::new((0..n).collect())?)
}
