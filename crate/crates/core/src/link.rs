//! Link matrices: the realigned partial transpose of an ordered two-body
//! marginal, plus the Pauli-basis form specific to qubit pairs.

use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, State};
use crate::{tol, CMat, C64};
use nalgebra::DMatrix;

/// `L(to <- from) = R( rho_{to,from}^{T_from} )`, a `d_to^2 x d_from^2`
/// matrix. Chaining links tail-to-head composes marginals along a path.
#[derive(Debug, Clone)]
pub struct LinkMatrix {
    pub from: usize,
    pub to: usize,
    pub d_from: usize,
    pub d_to: usize,
    pub mat: CMat,
}

impl LinkMatrix {
    /// max |(S L S)[(i,j),(a,b)] - L[(i,j),(a,b)]^*|. Swap conjugation on
    /// both sides reverses each index pair, so no matrices are built.
    pub fn swap_conjugation_defect(&self) -> f64 {
        let (dt, df) = (self.d_to, self.d_from);
        let mut worst = 0.0f64;
        for i in 0..dt {
            for j in 0..dt {
                for a in 0..df {
                    for b in 0..df {
                        let swapped = self.mat[(j * dt + i, b * df + a)];
                        let orig = self.mat[(i * dt + j, a * df + b)];
                        worst = worst.max((swapped - orig.conj()).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Build the link of the ordered pair (`from`, `to`). The partial transpose
/// and the realignment collapse to a single index permutation of the
/// marginal:
///
/// ```text
/// L[(i,j),(a,b)] = rho_{to,from}[(i,b),(j,a)]
/// ```
///
/// The swap-conjugation invariant is enforced on every construction.
pub fn link_matrix(state: &State, from: usize, to: usize) -> Result<LinkMatrix> {
    if from == to {
        return Err(Error::InvalidLabel(format!(
            "link endpoints must differ, got {from} -> {to}"
        )));
    }
    state.dims().check_labels(&[from, to], true)?;
    let pair = state.reduced_density(&[to, from])?;
    let (dt, df) = (pair.dims().dim(0), pair.dims().dim(1));
    let rho = pair.mat();
    let mat = CMat::from_fn(dt * dt, df * df, |row, col| {
        let (i, j) = (row / dt, row % dt);
        let (a, b) = (col / df, col % df);
        rho[(i * df + b, j * df + a)]
    });
    let link = LinkMatrix {
        from,
        to,
        d_from: df,
        d_to: dt,
        mat,
    };
    let defect = link.swap_conjugation_defect();
    if defect > tol::LINK_SWAP_CONJ {
        return Err(Error::Numerical(format!(
            "link {from}->{to} violates swap conjugation by {defect:e}"
        )));
    }
    Ok(link)
}

/// The same link assembled from operator expectation values,
///
/// ```text
/// L[(i,j),(a,b)] = tr[ rho_{from,to} (e_ab (x) e_ji) ],
/// ```
///
/// with matrix units built and multiplied literally. Far slower than
/// `link_matrix` and kept deliberately naive: it shares no index
/// arithmetic with the fast path and serves as its cross-check.
pub fn link_matrix_from_traces(state: &State, from: usize, to: usize) -> Result<CMat> {
    if from == to {
        return Err(Error::InvalidLabel(format!(
            "link endpoints must differ, got {from} -> {to}"
        )));
    }
    state.dims().check_labels(&[from, to], true)?;
    let pair = state.reduced_density(&[from, to])?;
    let (df, dt) = (pair.dims().dim(0), pair.dims().dim(1));
    let rho = pair.mat();
    Ok(CMat::from_fn(dt * dt, df * df, |row, col| {
        let (i, j) = (row / dt, row % dt);
        let (a, b) = (col / df, col % df);
        let mut e_from = CMat::zeros(df, df);
        e_from[(a, b)] = C64::new(1.0, 0.0);
        let mut e_to = CMat::zeros(dt, dt);
        e_to[(j, i)] = C64::new(1.0, 0.0);
        (rho * e_from.kronecker(&e_to)).trace()
    }))
}

/// Pauli matrices; index 0 is the identity.
pub fn pauli(k: usize) -> CMat {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match k {
        0 => CMat::from_row_slice(2, 2, &[one, z, z, one]),
        1 => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        2 => CMat::from_row_slice(2, 2, &[z, -C64::i(), C64::i(), z]),
        3 => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// Two-qubit link in the Pauli operator basis:
///
/// ```text
/// S[n,m] = tr[ rho (sigma_m (x) sigma_n) ] / 2
/// ```
///
/// for a qubit-pair density matrix `rho` ordered (from, to). Entries are
/// real; imaginary residue beyond `tol::PAULI_IMAG` is an error, below it
/// it is dropped.
pub fn pauli_link_matrix(rho: &DensityMatrix) -> Result<DMatrix<f64>> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::ShapeMismatch(format!(
            "Pauli link needs a qubit pair, got dimensions {:?}",
            rho.dims().as_slice()
        )));
    }
    let mut out = DMatrix::<f64>::zeros(4, 4);
    for m in 0..4 {
        for n in 0..4 {
            let op = pauli(m).kronecker(&pauli(n));
            let v = (rho.mat() * op).trace() * 0.5;
            if v.im.abs() > tol::PAULI_IMAG {
                return Err(Error::Numerical(format!(
                    "Pauli link entry ({n},{m}) has imaginary residue {:e}",
                    v.im
                )));
            }
            out[(n, m)] = v.re;
        }
    }
    Ok(out)
}

/// Unitary change of basis between the product basis of vectorized
/// operators and the Pauli basis: column `m` is the row-major vec of
/// `sigma_m / sqrt(2)`. Satisfies `U U^T = S` (the swap), which is what
/// turns swap conjugation into plain conjugation in the Pauli picture.
pub fn u_matrix() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(4, 4, |row, m| {
        let (j, i) = (row / 2, row % 2);
        pauli(m)[(j, i)] * s
    })
}
