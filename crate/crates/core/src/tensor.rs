//! States over a fixed tuple of subsystem dimensions, and the index
//! gymnastics everything else builds on: marginals, partial transposition
//! and realignment.
//!
//! Composite indices are row-major with subsystem 0 most significant:
//! `|i_0 i_1 ... >` has flat index `((i_0 d_1 + i_1) d_2 + i_2) ...`.

use crate::error::{Error, Result};
use crate::{linalg, tol, CMat, CVec, C64};

/// Maximum composite dimension. Keeps index arithmetic comfortably inside
/// `usize` on every platform; memory runs out long before this does.
const MAX_TOTAL_DIM: usize = 1 << 16;

/// Subsystem dimensions `(d_0, ..., d_{N-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims(Vec<usize>);

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("no subsystems given".into()));
        }
        let mut total = 1usize;
        for (k, &d) in dims.iter().enumerate() {
            if d == 0 {
                return Err(Error::InvalidDimension(format!(
                    "subsystem {k} has dimension 0"
                )));
            }
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_TOTAL_DIM)
                .ok_or_else(|| {
                    Error::InvalidDimension(format!("composite dimension exceeds {MAX_TOTAL_DIM}"))
                })?;
        }
        Ok(SubsystemDims(dims))
    }

    /// Number of subsystems.
    pub fn count(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Composite dimension `d_0 d_1 ... d_{N-1}`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Flatten a multi-index (subsystem 0 most significant).
    pub fn pack(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.0.len());
        let mut flat = 0;
        for (&i, &d) in multi.iter().zip(&self.0) {
            debug_assert!(i < d);
            flat = flat * d + i;
        }
        flat
    }

    pub fn unpack(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0; self.0.len()];
        for k in (0..self.0.len()).rev() {
            multi[k] = flat % self.0[k];
            flat /= self.0[k];
        }
        multi
    }

    /// Labels must be in range; optionally pairwise distinct.
    pub fn check_labels(&self, labels: &[usize], distinct: bool) -> Result<()> {
        for &l in labels {
            if l >= self.0.len() {
                return Err(Error::InvalidLabel(format!(
                    "subsystem {l} out of range for {} subsystems",
                    self.0.len()
                )));
            }
        }
        if distinct {
            let mut seen = vec![false; self.0.len()];
            for &l in labels {
                if seen[l] {
                    return Err(Error::InvalidLabel(format!("subsystem {l} repeated")));
                }
                seen[l] = true;
            }
        }
        Ok(())
    }

    fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.0.len() {
            return Err(Error::InvalidLabel(format!(
                "permutation of length {} for {} subsystems",
                perm.len(),
                self.0.len()
            )));
        }
        self.check_labels(perm, true)?;
        Ok(SubsystemDims(perm.iter().map(|&p| self.0[p]).collect()))
    }
}

/// `keep` extended to a full permutation by the remaining labels in
/// ascending order.
fn completion(dims: &SubsystemDims, keep: &[usize]) -> Result<Vec<usize>> {
    dims.check_labels(keep, true)?;
    let mut perm = keep.to_vec();
    for l in 0..dims.count() {
        if !keep.contains(&l) {
            perm.push(l);
        }
    }
    Ok(perm)
}

/// Row/column factorization `D = d_row * d_col` of a square matrix viewed as
/// an operator on a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteShape {
    pub d_row: usize,
    pub d_col: usize,
}

impl BipartiteShape {
    pub fn new(d_row: usize, d_col: usize) -> Result<Self> {
        if d_row == 0 || d_col == 0 {
            return Err(Error::InvalidDimension(
                "bipartite factor of dimension 0".into(),
            ));
        }
        Ok(BipartiteShape { d_row, d_col })
    }

    pub fn total(&self) -> usize {
        self.d_row * self.d_col
    }

    fn check_square(&self, m: &CMat) -> Result<()> {
        let d = self.total();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, shape ({},{}) needs {d}x{d}",
                m.nrows(),
                m.ncols(),
                self.d_row,
                self.d_col
            )));
        }
        Ok(())
    }
}

/// Which tensor slot a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Transpose the first (most significant) factor.
    Row,
    /// Transpose the second factor.
    Col,
}

/// Normalized pure state.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: SubsystemDims,
    amp: CVec,
}

impl PureState {
    pub fn new(dims: SubsystemDims, amp: CVec) -> Result<Self> {
        if amp.len() != dims.total() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for composite dimension {}",
                amp.len(),
                dims.total()
            )));
        }
        let norm = amp.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::InvalidState(format!(
                "amplitude norm {norm} is not 1 within {:e}",
                tol::STATE_NORM
            )));
        }
        Ok(PureState { dims, amp })
    }

    /// Computational basis state `|multi>`.
    pub fn basis(dims: SubsystemDims, multi: &[usize]) -> Result<Self> {
        if multi.len() != dims.count() {
            return Err(Error::ShapeMismatch(format!(
                "basis index of length {} for {} subsystems",
                multi.len(),
                dims.count()
            )));
        }
        for (k, (&i, &d)) in multi.iter().zip(dims.as_slice()).enumerate() {
            if i >= d {
                return Err(Error::InvalidLabel(format!(
                    "basis index {i} out of range for subsystem {k} of dimension {d}"
                )));
            }
        }
        let flat = dims.pack(multi);
        let mut amp = CVec::zeros(dims.total());
        amp[flat] = C64::new(1.0, 0.0);
        Ok(PureState { dims, amp })
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn amp(&self) -> &CVec {
        &self.amp
    }

    /// `|psi><psi|`, renormalized so the trace is exactly 1 up to rounding.
    pub fn to_density(&self) -> DensityMatrix {
        let n2 = self.amp.norm_squared();
        let mat = (&self.amp * self.amp.adjoint()) / C64::new(n2, 0.0);
        DensityMatrix::new(self.dims.clone(), mat)
            .expect("normalized outer product is a valid density matrix")
    }

    /// Reorder subsystems: `perm[k]` is the old label placed at position `k`.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let new_dims = self.dims.permuted(perm)?;
        let mut amp = CVec::zeros(self.amp.len());
        let n = self.dims.count();
        let mut new_multi = vec![0usize; n];
        for flat in 0..self.amp.len() {
            let multi = self.dims.unpack(flat);
            for k in 0..n {
                new_multi[k] = multi[perm[k]];
            }
            amp[new_dims.pack(&new_multi)] = self.amp[flat];
        }
        Ok(PureState {
            dims: new_dims,
            amp,
        })
    }

    /// Marginal on `keep`, in the order given. Goes through the
    /// `(kept, traced)` reshape of the amplitude vector, so the full density
    /// matrix is never materialized.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidLabel("empty marginal".into()));
        }
        let perm = completion(&self.dims, keep)?;
        let permuted = self.permute_subsystems(&perm)?;
        let d_keep: usize = keep.iter().map(|&l| self.dims.dim(l)).product();
        let d_rest = self.dims.total() / d_keep;
        let a = CMat::from_fn(d_keep, d_rest, |r, e| permuted.amp[r * d_rest + e]);
        let rho = (&a * a.adjoint()) / C64::new(self.amp.norm_squared(), 0.0);
        let kept_dims = SubsystemDims::new(keep.iter().map(|&l| self.dims.dim(l)).collect())?;
        DensityMatrix::new(kept_dims, rho)
    }

    /// Apply a `d_k x d_k` operator to subsystem `k`.
    pub fn apply_local(&self, k: usize, u: &CMat) -> Result<Self> {
        self.dims.check_labels(&[k], false)?;
        let d = self.dims.dim(k);
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} operator on subsystem {k} of dimension {d}",
                u.nrows(),
                u.ncols()
            )));
        }
        let left: usize = self.dims.as_slice()[..k].iter().product();
        let right: usize = self.dims.as_slice()[k + 1..].iter().product();
        let mut amp = CVec::zeros(self.amp.len());
        for l in 0..left {
            for r in 0..right {
                for i in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += u[(i, j)] * self.amp[(l * d + j) * right + r];
                    }
                    amp[(l * d + i) * right + r] = acc;
                }
            }
        }
        PureState::new(self.dims.clone(), amp)
    }

    /// Apply one operator per subsystem.
    pub fn apply_locals(&self, us: &[CMat]) -> Result<Self> {
        if us.len() != self.dims.count() {
            return Err(Error::ShapeMismatch(format!(
                "{} operators for {} subsystems",
                us.len(),
                self.dims.count()
            )));
        }
        let mut s = self.clone();
        for (k, u) in us.iter().enumerate() {
            s = s.apply_local(k, u)?;
        }
        Ok(s)
    }

    /// Apply a full `D x D` operator.
    pub fn apply_full(&self, u: &CMat) -> Result<Self> {
        let d = self.dims.total();
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} operator on composite dimension {d}",
                u.nrows(),
                u.ncols()
            )));
        }
        PureState::new(self.dims.clone(), u * &self.amp)
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let dims = SubsystemDims::new(
            self.dims
                .as_slice()
                .iter()
                .chain(other.dims.as_slice())
                .copied()
                .collect(),
        )?;
        let (na, nb) = (self.amp.len(), other.amp.len());
        let amp = CVec::from_fn(na * nb, |k, _| self.amp[k / nb] * other.amp[k % nb]);
        PureState::new(dims, amp)
    }
}

/// Density matrix: Hermitian, unit trace; positivity is checked on demand.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: SubsystemDims,
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(dims: SubsystemDims, mat: CMat) -> Result<Self> {
        let d = dims.total();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for composite dimension {d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let mut herm = 0.0f64;
        for i in 0..d {
            for j in i..d {
                herm = herm.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if herm > tol::HERMITICITY {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |m - m^dagger| = {herm:e}"
            )));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol::TRACE_ONE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(DensityMatrix { dims, mat })
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `tr rho^2`; real because `rho` is Hermitian.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ev = linalg::hermitian_eigenvalues(&self.mat)?;
        Ok(ev[0])
    }

    /// Positivity check, tolerant to eigenvalue rounding.
    pub fn assert_positive(&self) -> Result<()> {
        let min = self.min_eigenvalue()?;
        if min < tol::PSD_MIN_EIG {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: min eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let new_dims = self.dims.permuted(perm)?;
        let d = self.dims.total();
        let n = self.dims.count();
        // row_map[old_flat] = new_flat
        let mut row_map = vec![0usize; d];
        let mut new_multi = vec![0usize; n];
        for (flat, slot) in row_map.iter_mut().enumerate() {
            let multi = self.dims.unpack(flat);
            for k in 0..n {
                new_multi[k] = multi[perm[k]];
            }
            *slot = new_dims.pack(&new_multi);
        }
        let mut mat = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(row_map[i], row_map[j])] = self.mat[(i, j)];
            }
        }
        Ok(DensityMatrix {
            dims: new_dims,
            mat,
        })
    }

    /// Marginal on `keep`, in the order given.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidLabel("empty marginal".into()));
        }
        let perm = completion(&self.dims, keep)?;
        let permuted = self.permute_subsystems(&perm)?;
        let d_keep: usize = keep.iter().map(|&l| self.dims.dim(l)).product();
        let d_rest = self.dims.total() / d_keep;
        let mut mat = CMat::zeros(d_keep, d_keep);
        for r in 0..d_keep {
            for c in 0..d_keep {
                let mut acc = C64::new(0.0, 0.0);
                for e in 0..d_rest {
                    acc += permuted.mat[(r * d_rest + e, c * d_rest + e)];
                }
                mat[(r, c)] = acc;
            }
        }
        let kept_dims = SubsystemDims::new(keep.iter().map(|&l| self.dims.dim(l)).collect())?;
        DensityMatrix::new(kept_dims, mat)
    }

    pub fn bipartite_shape(&self) -> Result<BipartiteShape> {
        if self.dims.count() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "{} subsystems where a bipartite state is needed",
                self.dims.count()
            )));
        }
        BipartiteShape::new(self.dims.dim(0), self.dims.dim(1))
    }

    /// Partial transpose of a two-subsystem density matrix.
    pub fn partial_transpose(&self, slot: Slot) -> Result<CMat> {
        partial_transpose(&self.mat, self.bipartite_shape()?, slot)
    }

    /// Conjugate subsystem `k` by the operator `u`: rows by `u`, columns by
    /// `u^dagger`. For unitary `u` this is the local-unitary action.
    pub fn apply_local(&self, k: usize, u: &CMat) -> Result<Self> {
        self.dims.check_labels(&[k], false)?;
        let d = self.dims.dim(k);
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} operator on subsystem {k} of dimension {d}",
                u.nrows(),
                u.ncols()
            )));
        }
        let total = self.dims.total();
        let left: usize = self.dims.as_slice()[..k].iter().product();
        let right: usize = self.dims.as_slice()[k + 1..].iter().product();
        let row_of = |l: usize, i: usize, r: usize| (l * d + i) * right + r;
        let mut tmp = CMat::zeros(total, total);
        for col in 0..total {
            for l in 0..left {
                for r in 0..right {
                    for i in 0..d {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..d {
                            acc += u[(i, j)] * self.mat[(row_of(l, j, r), col)];
                        }
                        tmp[(row_of(l, i, r), col)] = acc;
                    }
                }
            }
        }
        let mut mat = CMat::zeros(total, total);
        for row in 0..total {
            for l in 0..left {
                for r in 0..right {
                    for i in 0..d {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..d {
                            acc += tmp[(row, row_of(l, j, r))] * u[(i, j)].conj();
                        }
                        mat[(row, row_of(l, i, r))] = acc;
                    }
                }
            }
        }
        DensityMatrix::new(self.dims.clone(), mat)
    }

    pub fn apply_locals(&self, us: &[CMat]) -> Result<Self> {
        if us.len() != self.dims.count() {
            return Err(Error::ShapeMismatch(format!(
                "{} operators for {} subsystems",
                us.len(),
                self.dims.count()
            )));
        }
        let mut s = self.clone();
        for (k, u) in us.iter().enumerate() {
            s = s.apply_local(k, u)?;
        }
        Ok(s)
    }
}

/// A quantum state, pure or mixed. Pure states keep their amplitude
/// representation so marginals stay cheap.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> &SubsystemDims {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }

    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        match self {
            State::Pure(p) => p.reduced_density(keep),
            State::Mixed(m) => m.reduced_density(keep),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn apply_local(&self, k: usize, u: &CMat) -> Result<State> {
        Ok(match self {
            State::Pure(p) => State::Pure(p.apply_local(k, u)?),
            State::Mixed(m) => State::Mixed(m.apply_local(k, u)?),
        })
    }

    pub fn apply_locals(&self, us: &[CMat]) -> Result<State> {
        Ok(match self {
            State::Pure(p) => State::Pure(p.apply_locals(us)?),
            State::Mixed(m) => State::Mixed(m.apply_locals(us)?),
        })
    }
}

/// Partial transpose on one slot of a bipartite operator.
///
/// `Col`:  out[(p,a),(q,b)] = m[(p,b),(q,a)]
/// `Row`:  out[(p,a),(q,b)] = m[(q,a),(p,b)]
pub fn partial_transpose(m: &CMat, shape: BipartiteShape, slot: Slot) -> Result<CMat> {
    shape.check_square(m)?;
    let dc = shape.d_col;
    Ok(CMat::from_fn(shape.total(), shape.total(), |row, col| {
        let (p, a) = (row / dc, row % dc);
        let (q, b) = (col / dc, col % dc);
        match slot {
            Slot::Col => m[(p * dc + b, q * dc + a)],
            Slot::Row => m[(q * dc + a, p * dc + b)],
        }
    }))
}

/// Realignment: rows of the output enumerate the row-slot index pair,
/// columns the column-slot pair:
///
/// out[(i,j),(a,b)] = m[(i,a),(j,b)]
///
/// The output is `d_row^2 x d_col^2`; it is the matrix whose singular values
/// feed the computable cross norm criterion.
pub fn realign(m: &CMat, shape: BipartiteShape) -> Result<CMat> {
    shape.check_square(m)?;
    let (dr, dc) = (shape.d_row, shape.d_col);
    Ok(CMat::from_fn(dr * dr, dc * dc, |row, col| {
        let (i, j) = (row / dr, row % dr);
        let (a, b) = (col / dc, col % dc);
        m[(i * dc + a, j * dc + b)]
    }))
}

/// Trace norm of the realignment of `m`. For a density matrix a value above
/// 1 witnesses entanglement.
pub fn ccn_norm(m: &CMat, shape: BipartiteShape) -> Result<f64> {
    let r = realign(m, shape)?;
    Ok(linalg::singular_values(&r)?.iter().sum())
}

/// Swap operator on `C^d (x) C^d`: `S |i j> = |j i>`.
pub fn swap_operator(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    s
}
