//! Crate-internal wrappers around dense decompositions.
//!
//! Path operators are general complex matrices, so their spectra come from a
//! complex Schur form rather than a symmetric solver. Eigenvectors, when
//! asked for, are recovered by shifted inverse iteration and are only
//! accepted once their residual passes [`tol::EIG_RESIDUAL`].

use crate::error::{Error, Result};
use crate::{tol, CMat, CVec, C64};

/// QR iteration budget for an `n x n` decomposition. Generous: the backend
/// normally converges in a small multiple of `n`.
fn iteration_cap(n: usize) -> usize {
    100 * n + 1000
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

fn schur_t(m: &CMat) -> Result<CMat> {
    let cap = iteration_cap(m.nrows());
    let s =
        nalgebra::Schur::try_new(m.clone(), f64::EPSILON, cap).ok_or(Error::NonConvergence(cap))?;
    let (_, t) = s.unpack();
    Ok(t)
}

/// Eigenvalues of a general complex matrix. The Schur form may retain
/// unreduced 2x2 diagonal blocks; those are resolved in closed form.
pub(crate) fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let t = schur_t(m)?;
    let mut eigs = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let coupled = k + 1 < n && {
            let sub = t[(k + 1, k)].norm();
            sub > f64::EPSILON * (t[(k, k)].norm() + t[(k + 1, k + 1)].norm())
        };
        if coupled {
            let (a, b) = (t[(k, k)], t[(k, k + 1)]);
            let (c, d) = (t[(k + 1, k)], t[(k + 1, k + 1)]);
            let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
            eigs.push((a + d + disc) * 0.5);
            eigs.push((a + d - disc) * 0.5);
            k += 2;
        } else {
            eigs.push(t[(k, k)]);
            k += 1;
        }
    }
    Ok(eigs)
}

/// Eigenvalues sorted by decreasing modulus, ties broken by real then
/// imaginary part (decreasing). Gives spectra a reproducible order.
pub(crate) fn sort_eigenvalues(eigs: &mut [C64]) {
    eigs.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
}

/// Eigenpairs via shifted inverse iteration. The shift is perturbed off the
/// eigenvalue so the solve stays well posed even for multiple eigenvalues.
pub(crate) fn eigen_pairs(m: &CMat) -> Result<Vec<(C64, CVec)>> {
    let n = m.nrows();
    let mut eigs = eigenvalues(m)?;
    sort_eigenvalues(&mut eigs);
    let scale = {
        let f = frobenius(m);
        if f > 0.0 {
            f
        } else {
            1.0
        }
    };
    let mut pairs = Vec::with_capacity(n);
    for (k, &lambda) in eigs.iter().enumerate() {
        pairs.push((lambda, inverse_iteration(m, lambda, k, scale)?));
    }
    Ok(pairs)
}

fn inverse_iteration(m: &CMat, lambda: C64, k: usize, scale: f64) -> Result<CVec> {
    let n = m.nrows();
    let mut off = 1e-13 * scale;
    for attempt in 0..5 {
        let mu = lambda + C64::new(off, off);
        let shifted = m - CMat::identity(n, n) * mu;
        let lu = shifted.lu();
        // Start vector varies with the eigenvalue index so repeated
        // eigenvalues pick up distinct directions.
        let mut v = CVec::from_fn(n, |i, _| {
            if i == (k + attempt) % n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.1, 0.05)
            }
        });
        v /= C64::new(v.norm(), 0.0);
        let mut ok = true;
        for _ in 0..3 {
            match lu.solve(&v) {
                Some(w) => {
                    let norm = w.norm();
                    if norm.is_finite() && norm > 0.0 {
                        v = w / C64::new(norm, 0.0);
                    } else {
                        ok = false;
                        break;
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let residual = (m * &v - &v * lambda).norm();
            if residual <= tol::EIG_RESIDUAL * scale {
                return Ok(v);
            }
        }
        off *= 10.0;
    }
    Err(Error::Numerical(format!(
        "inverse iteration failed to reach residual {:e} for eigenvalue {}",
        tol::EIG_RESIDUAL * scale,
        lambda
    )))
}

pub(crate) fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let cap = iteration_cap(m.nrows().max(m.ncols()));
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, cap)
        .ok_or(Error::NonConvergence(cap))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Eigenvalues of a (numerically) Hermitian matrix; the input is
/// symmetrized first so entrywise noise cannot leak into complex parts.
pub(crate) fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let cap = iteration_cap(h.nrows());
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, cap)
        .ok_or(Error::NonConvergence(cap))?;
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Greedy matching distance between two eigenvalue multisets.
pub(crate) fn spectral_mismatch(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, &y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// How far a spectrum is from being closed under complex conjugation.
pub(crate) fn conjugation_defect(eigs: &[C64]) -> f64 {
    let n = eigs.len();
    let mut used = vec![false; n];
    let mut worst = 0.0f64;
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = eigs[i].conj();
        let mut best = (eigs[i] - target).norm();
        let mut best_j = i;
        for (j, &y) in eigs.iter().enumerate() {
            if !used[j] {
                let d = (y - target).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        if best_j != i {
            used[best_j] = true;
        }
        worst = worst.max(best);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// One-sided complex Jacobi SVD. Slow and simple; exists only so the
    /// production SVD has an independently coded cross-check.
    fn jacobi_singular_values(m: &CMat) -> Vec<f64> {
        let mut a = if m.nrows() >= m.ncols() {
            m.clone()
        } else {
            m.adjoint()
        };
        let n = a.ncols();
        for _sweep in 0..100 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let col_p = a.column(p).into_owned();
                    let col_q = a.column(q).into_owned();
                    let app = col_p.norm_squared();
                    let aqq = col_q.norm_squared();
                    let apq: C64 = col_p.dotc(&col_q);
                    let u = apq.norm();
                    if u <= 1e-30 || u * u <= 1e-30 * app * aqq {
                        continue;
                    }
                    rotated = true;
                    let e = apq / u;
                    let tau = (aqq - app) / (2.0 * u);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let cth = 1.0 / (1.0 + t * t).sqrt();
                    let sth = t * cth;
                    for i in 0..a.nrows() {
                        let vp = a[(i, p)];
                        let vq = a[(i, q)];
                        a[(i, p)] = vp * cth - vq * e.conj() * sth;
                        a[(i, q)] = vp * e * sth + vq * cth;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        sv
    }

    fn test_matrix(n: usize, m: usize) -> CMat {
        // Fixed pseudo-random entries; no RNG so the oracle stays self-contained.
        CMat::from_fn(n, m, |i, j| {
            let k = (i * m + j) as f64;
            c((0.37 * k + 1.1).sin(), (0.59 * k - 0.3).cos() * 0.8)
        })
    }

    #[test]
    fn eigenvalues_of_triangular_matrix_are_diagonal() {
        let m = CMat::from_row_slice(
            3,
            3,
            &[
                c(1.0, 2.0),
                c(5.0, 0.0),
                c(0.0, 1.0),
                c(0.0, 0.0),
                c(-3.0, 0.5),
                c(2.0, 2.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.25, -1.0),
            ],
        );
        let mut eigs = eigenvalues(&m).unwrap();
        sort_eigenvalues(&mut eigs);
        let mut expect = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.25, -1.0)];
        sort_eigenvalues(&mut expect);
        assert!(spectral_mismatch(&eigs, &expect) < 1e-12);
    }

    #[test]
    fn eigenvalues_of_nilpotent_and_rotation_blocks() {
        let nil = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        for e in eigenvalues(&nil).unwrap() {
            assert!(e.norm() < 1e-12);
        }
        // Real rotation generator: eigenvalues +/- i.
        let rot =
            CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let mut eigs = eigenvalues(&rot).unwrap();
        sort_eigenvalues(&mut eigs);
        assert!(spectral_mismatch(&eigs, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-12);
    }

    #[test]
    fn eigenvalue_sum_and_product_match_trace_and_determinant() {
        let m = test_matrix(7, 7);
        let eigs = eigenvalues(&m).unwrap();
        let sum: C64 = eigs.iter().sum();
        let prod: C64 = eigs.iter().product();
        let scale = frobenius(&m).max(1.0);
        assert!((sum - m.trace()).norm() < 1e-10 * scale);
        let det = m.determinant();
        assert!((prod - det).norm() < 1e-9 * det.norm().max(1.0));
    }

    #[test]
    fn eigen_pairs_satisfy_the_eigenvalue_equation() {
        let m = test_matrix(8, 8);
        let scale = frobenius(&m);
        for (lambda, v) in eigen_pairs(&m).unwrap() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let r = (&m * &v - &v * lambda).norm();
            assert!(r <= tol::EIG_RESIDUAL * scale, "residual {r:e}");
        }
    }

    #[test]
    fn eigen_pairs_handle_repeated_eigenvalues() {
        // Rank-one projector: eigenvalue 1 once, 0 with multiplicity 3.
        let v = CVec::from_fn(4, |i, _| c(0.5, if i % 2 == 0 { 0.3 } else { -0.1 }));
        let v = &v / C64::new(v.norm(), 0.0);
        let p = &v * v.adjoint();
        let pairs = eigen_pairs(&p).unwrap();
        assert_eq!(pairs.len(), 4);
        let ones = pairs
            .iter()
            .filter(|(l, _)| (l - c(1.0, 0.0)).norm() < 1e-9)
            .count();
        assert_eq!(ones, 1);
    }

    #[test]
    fn singular_values_match_jacobi_oracle() {
        for (n, m) in [(5usize, 7usize), (6, 6), (8, 3)] {
            let a = test_matrix(n, m);
            let sv = singular_values(&a).unwrap();
            let oracle = jacobi_singular_values(&a);
            assert_eq!(sv.len(), oracle.len());
            for (x, y) in sv.iter().zip(oracle.iter()) {
                assert!((x - y).abs() < 1e-10 * oracle[0].max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_x() {
        let x = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let ev = hermitian_eigenvalues(&x).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conjugation_defect_detects_unpaired_spectra() {
        let paired = [c(1.0, 2.0), c(1.0, -2.0), c(0.5, 0.0)];
        assert!(conjugation_defect(&paired) < 1e-15);
        let unpaired = [c(1.0, 2.0), c(1.0, 1.9), c(0.5, 0.0)];
        assert!(conjugation_defect(&unpaired) > 0.05);
    }
}
