//! Verification harness: every structural identity the library relies on,
//! re-checked numerically on randomized inputs, with violations measured
//! rather than assumed away.
//!
//! Conventions:
//!   * Every check is deterministic given its `Seed`; randomized checks draw
//!     through per-trial substreams so trial counts can grow without
//!     reshuffling earlier draws.
//!   * A `CheckResult` passes iff its measured violation is within the
//!     declared tolerance, which is echoed into the details map.
//!   * Expected-negative controls (entangling unitaries, realignment without
//!     the partial transpose) must *move* the quantity under test; the
//!     violation is the shortfall of the moved fraction, so a vacuous control
//!     fails loudly.

use std::collections::BTreeMap;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::fmt_g17;
use crate::link::{link_matrix, link_matrix_from_traces, pauli_link_matrix, u_matrix};
use crate::path::{path_operator, path_trace_invariant, spectrum, ClosedPath};
use crate::random::{
    haar_random_pure_with, haar_random_unitary_with, random_orthogonal_with, real_random_pure_with,
    separable_state, Seed, SeparableKind,
};
use crate::tensor::{
    partial_transpose, realign, swap_operator, PureState, Slot, State, SubsystemDims,
};
use crate::{linalg, tol, CMat, C64};

/// Outcome of one named check. `passed` is never set independently of the
/// numbers: it is exactly `max_violation <= tolerance`, with the tolerance
/// echoed under `details["tolerance"]`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_violation: f64,
    pub trials: usize,
    pub details: BTreeMap<String, String>,
}

impl CheckResult {
    pub fn judge(
        name: impl Into<String>,
        trials: usize,
        max_violation: f64,
        tolerance: f64,
    ) -> Self {
        let mut details = BTreeMap::new();
        details.insert("tolerance".to_string(), fmt_g17(tolerance));
        CheckResult {
            name: name.into(),
            // NaN violations compare false and therefore fail, as they must.
            passed: max_violation <= tolerance,
            max_violation,
            trials,
            details,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }
}

fn dims_label(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn complexify(o: &DMatrix<f64>) -> CMat {
    CMat::from_fn(o.nrows(), o.ncols(), |i, j| C64::new(o[(i, j)], 0.0))
}

/// Doubled-index action of a local transform: `u (x) u^*`.
fn doubled(u: &CMat) -> CMat {
    u.kronecker(&u.map(|z| z.conj()))
}

/// Independent seed for a sub-check, so sibling checks never share a stream.
fn derive(seed: Seed, tag: u64) -> Seed {
    Seed(seed.0 ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn real_trace_checked(t: C64) -> Result<f64> {
    if t.im.abs() > tol::TRACE_IMAG_REL * t.norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "trace {t} has imaginary residue beyond the relative tolerance"
        )));
    }
    Ok(t.re)
}

// --- equivalence of the Pauli-basis and realigned-partial-transpose forms ---

/// The qubit-pair link in the Pauli operator basis equals the conjugated
/// realigned partial transpose: `S = U^dagger L U` with the fixed basis
/// change `u_matrix()`. Alternates pure pairs and mixed two-qubit marginals.
pub fn check_pauli_equivalence(trials: usize, seed: Seed) -> Result<CheckResult> {
    let u = u_matrix();
    let pair = SubsystemDims::new(vec![2, 2])?;
    let triple = SubsystemDims::new(vec![2, 2, 2])?;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let rho = if t % 2 == 0 {
            haar_random_pure_with(&pair, &mut rng).to_density()
        } else {
            haar_random_pure_with(&triple, &mut rng).reduced_density(&[0, 1])?
        };
        let s = pauli_link_matrix(&rho)?;
        let l = link_matrix(&State::Mixed(rho), 0, 1)?.mat;
        let bridge = u.adjoint() * l * &u;
        for n in 0..4 {
            for m in 0..4 {
                worst = worst.max((bridge[(n, m)] - C64::new(s[(n, m)], 0.0)).norm());
            }
        }
    }
    Ok(
        CheckResult::judge("pauli_bridge", trials, worst, tol::PAULI_BRIDGE).with(
            "sources",
            "alternating pure qubit pairs and tripartite marginals",
        ),
    )
}

/// The fused index formula for links against the naive operator-basis trace
/// formula, on rotating subsystem shapes and edge directions.
pub fn check_link_formula_agreement(trials: usize, seed: Seed) -> Result<CheckResult> {
    const CFGS: &[&[usize]] = &[&[2, 3, 2], &[3, 2], &[2, 2, 4], &[3, 3]];
    let mut worst = 0.0f64;
    for t in 0..trials {
        let cfg = CFGS[t % CFGS.len()];
        let dims = SubsystemDims::new(cfg.to_vec())?;
        let mut rng = seed.substream(t as u64);
        let st = State::Pure(haar_random_pure_with(&dims, &mut rng));
        let (from, to) = if t % 2 == 0 { (0, 1) } else { (1, 0) };
        let fast = link_matrix(&st, from, to)?.mat;
        let slow = link_matrix_from_traces(&st, from, to)?;
        worst = worst.max(linalg::max_abs(&(fast - slow)));
    }
    Ok(
        CheckResult::judge("link_formula_agreement", trials, worst, tol::LINK_FORMULAS)
            .with("shapes", "(2,3,2) (3,2) (2,2,4) (3,3)"),
    )
}

/// Structural facts about the fixed basis change: unitarity and
/// `U U^T = SWAP`, which turns swap conjugation into plain conjugation.
pub fn check_u_matrix() -> CheckResult {
    let u = u_matrix();
    let unitary = linalg::max_abs(&(u.adjoint() * &u - CMat::identity(4, 4)));
    let swap = linalg::max_abs(&(&u * u.transpose() - swap_operator(2)));
    CheckResult::judge("pauli_basis_unitary", 1, unitary.max(swap), tol::UNITARITY)
        .with("claims", "U^dagger U = I and U U^T = SWAP")
}

// --- local-unitary invariance ------------------------------------------------

/// Invariance of closed-path traces and sorted spectra under independent
/// local unitaries, plus the conjugation identity
/// `P~ = (U1 (x) U1^*) P (U1 (x) U1^*)^dagger` on the base subsystem.
/// One result per claim: the two have different tolerances.
pub fn check_lu_invariance(
    state: &State,
    path: &ClosedPath,
    trials: usize,
    tol_invariance: f64,
    seed: Seed,
) -> Result<Vec<CheckResult>> {
    path.validate_for(state.dims())?;
    let p0 = path_operator(state, path)?;
    let t0 = p0.trace();
    let eigs0 = spectrum(&p0)?;
    let trace_scale = t0.norm().max(1.0);
    let eig_scale = eigs0.first().map(|e| e.norm()).unwrap_or(0.0).max(1.0);
    let base = path.labels()[0];
    let mut worst_inv = 0.0f64;
    let mut worst_conj = 0.0f64;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let us: Vec<CMat> = state
            .dims()
            .as_slice()
            .iter()
            .map(|&d| haar_random_unitary_with(d, &mut rng))
            .collect();
        let moved = state.apply_locals(&us)?;
        let p1 = path_operator(&moved, path)?;
        worst_inv = worst_inv.max((p1.trace() - t0).norm() / trace_scale);
        let eigs1 = spectrum(&p1)?;
        worst_inv = worst_inv.max(linalg::spectral_mismatch(&eigs0, &eigs1) / eig_scale);
        let w = doubled(&us[base]);
        let recon = w.adjoint() * &p1 * &w;
        worst_conj = worst_conj.max(linalg::max_abs(&(recon - &p0)));
    }
    Ok(vec![
        CheckResult::judge(
            "lu_trace_spectrum_invariance",
            trials,
            worst_inv,
            tol_invariance,
        )
        .with("path", path.to_string())
        .with("dims", dims_label(state.dims().as_slice()))
        .with("scale", "relative to max(1, |invariant|)"),
        CheckResult::judge(
            "lu_conjugation_identity",
            trials,
            worst_conj,
            tol::LU_CONJUGATION,
        )
        .with("path", path.to_string())
        .with("dims", dims_label(state.dims().as_slice())),
    ])
}

/// Expected-negative control: a Haar unitary on the *joint* space is not a
/// local operation, so the closed-path trace must move. The violation is the
/// shortfall of the moved fraction below the required one.
pub fn check_nonlocal_control(trials: usize, seed: Seed) -> Result<CheckResult> {
    let dims = SubsystemDims::new(vec![2, 2, 2])?;
    let cycle = ClosedPath::new(vec![0, 1, 2])?;
    let mut moved = 0usize;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let psi = haar_random_pure_with(&dims, &mut rng);
        let t0 = path_trace_invariant(&State::Pure(psi.clone()), &cycle)?;
        let u = haar_random_unitary_with(dims.total(), &mut rng);
        let t1 = path_trace_invariant(&State::Pure(psi.apply_full(&u)?), &cycle)?;
        if (t1 - t0).abs() > tol::CONTROL_DEVIATION * t0.abs().max(1.0) {
            moved += 1;
        }
    }
    let fraction = moved as f64 / trials as f64;
    Ok(CheckResult::judge(
        "nonlocal_control_moves_invariant",
        trials,
        (tol::CONTROL_FRACTION - fraction).max(0.0),
        0.0,
    )
    .with("fraction_moved", format!("{fraction}"))
    .with("required_fraction", format!("{}", tol::CONTROL_FRACTION))
    .with("deviation_threshold", fmt_g17(tol::CONTROL_DEVIATION)))
}

/// Covariance of a single link under local unitaries on its endpoints:
/// `L~ = (U_to (x) U_to^*) L (U_from (x) U_from^*)^dagger`, checked by
/// reconstructing `L` from the transformed state. Trials rotate through
/// to-only, from-only, and both-endpoint transforms.
pub fn check_link_covariance(
    state: &State,
    pair: (usize, usize),
    trials: usize,
    tolerance: f64,
    seed: Seed,
) -> Result<CheckResult> {
    let (from, to) = pair;
    let l0 = link_matrix(state, from, to)?;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let eye_from = CMat::identity(l0.d_from, l0.d_from);
        let eye_to = CMat::identity(l0.d_to, l0.d_to);
        let (u_from, u_to) = match t % 3 {
            0 => (eye_from, haar_random_unitary_with(l0.d_to, &mut rng)),
            1 => (haar_random_unitary_with(l0.d_from, &mut rng), eye_to),
            _ => (
                haar_random_unitary_with(l0.d_from, &mut rng),
                haar_random_unitary_with(l0.d_to, &mut rng),
            ),
        };
        let mut us: Vec<CMat> = state
            .dims()
            .as_slice()
            .iter()
            .map(|&d| CMat::identity(d, d))
            .collect();
        us[from] = u_from.clone();
        us[to] = u_to.clone();
        let moved = state.apply_locals(&us)?;
        let l1 = link_matrix(&moved, from, to)?;
        let recon = doubled(&u_to).adjoint() * &l1.mat * doubled(&u_from);
        worst = worst.max(linalg::max_abs(&(recon - &l0.mat)));
    }
    Ok(
        CheckResult::judge("link_covariance", trials, worst, tolerance)
            .with("pair", format!("{from}->{to}"))
            .with("dims", dims_label(state.dims().as_slice()))
            .with("modes", "to-only, from-only, both"),
    )
}

// --- realignment without the partial transpose --------------------------------

/// `tr[ R(rho_ab) R(rho_ba) ]` for plain realignments of the two marginal
/// orderings — the quantity that is *not* unitarily invariant but becomes
/// invariant when the local transforms are orthogonal.
pub fn realignment_pair_trace(state: &State, a: usize, b: usize) -> Result<C64> {
    let rab = state.reduced_density(&[a, b])?;
    let rba = state.reduced_density(&[b, a])?;
    let r1 = realign(rab.mat(), rab.bipartite_shape()?)?;
    let r2 = realign(rba.mat(), rba.bipartite_shape()?)?;
    Ok((r1 * r2).trace())
}

/// Two results: (a) orthogonal local rotations leave the realignment-only
/// pair trace invariant; (b) Haar local unitaries move it in at least the
/// control fraction of trials (expected negative — without the partial
/// transpose the composition rule picks up `U^T U != I` factors).
/// The state should have real amplitudes so the orthogonal group is its
/// natural local symmetry.
pub fn check_realign_only(
    state: &State,
    pair: (usize, usize),
    trials: usize,
    seed: Seed,
) -> Result<Vec<CheckResult>> {
    let (a, b) = pair;
    let v0 = realignment_pair_trace(state, a, b)?;
    let scale = v0.norm().max(1.0);
    let mut worst = 0.0f64;
    let mut moved = 0usize;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let os: Vec<CMat> = state
            .dims()
            .as_slice()
            .iter()
            .map(|&d| complexify(&random_orthogonal_with(d, &mut rng)))
            .collect();
        let vo = realignment_pair_trace(&state.apply_locals(&os)?, a, b)?;
        worst = worst.max((vo - v0).norm() / scale);
        let us: Vec<CMat> = state
            .dims()
            .as_slice()
            .iter()
            .map(|&d| haar_random_unitary_with(d, &mut rng))
            .collect();
        let vu = realignment_pair_trace(&state.apply_locals(&us)?, a, b)?;
        if (vu - v0).norm() > tol::CONTROL_DEVIATION * scale {
            moved += 1;
        }
    }
    let fraction = moved as f64 / trials.max(1) as f64;
    Ok(vec![
        CheckResult::judge(
            "realign_orthogonal_invariance",
            trials,
            worst,
            tol::ORTHO_INVARIANCE,
        )
        .with("pair", format!("{a},{b}"))
        .with("scale", "relative to max(1, |value|)"),
        CheckResult::judge(
            "realign_unitary_control",
            trials,
            (tol::CONTROL_FRACTION - fraction).max(0.0),
            0.0,
        )
        .with("pair", format!("{a},{b}"))
        .with("fraction_moved", format!("{fraction}"))
        .with("required_fraction", format!("{}", tol::CONTROL_FRACTION))
        .with("deviation_threshold", fmt_g17(tol::CONTROL_DEVIATION)),
    ])
}

// --- swap conjugation and adjoint reversal -------------------------------------

/// `S_to . L . S_from = L^*` as an explicit matrix identity, with the swap
/// operators built independently of the link's own construction-time check.
pub fn check_srs(state: &State, pair: (usize, usize)) -> Result<CheckResult> {
    let (from, to) = pair;
    let l = link_matrix(state, from, to)?;
    let lhs = swap_operator(l.d_to) * &l.mat * swap_operator(l.d_from);
    let defect = linalg::max_abs(&(lhs - l.mat.map(|z| z.conj())));
    Ok(
        CheckResult::judge("swap_conjugation", 1, defect, tol::SWAP_CONJ_CHECK)
            .with("pair", format!("{from}->{to}"))
            .with(
                "link_shape",
                format!("{}x{}", l.d_to * l.d_to, l.d_from * l.d_from),
            ),
    )
}

/// Reversing a link's direction takes the adjoint: `L(from <- to) = L^dagger`.
pub fn check_adjoint(state: &State, pair: (usize, usize)) -> Result<CheckResult> {
    let (from, to) = pair;
    let fwd = link_matrix(state, from, to)?;
    let rev = link_matrix(state, to, from)?;
    let defect = linalg::max_abs(&(rev.mat.adjoint() - &fwd.mat));
    Ok(
        CheckResult::judge("adjoint_reversal", 1, defect, tol::ADJOINT_PAIR)
            .with("pair", format!("{from}->{to}")),
    )
}

// --- retracing paths ------------------------------------------------------------

/// For a retracing path the operator factors as `P = M^dagger M` with `M`
/// the outbound half-product, so its spectrum sits above a floor tied to
/// rounding. One result per claim.
pub fn check_retracing_positivity(state: &State, path: &ClosedPath) -> Result<Vec<CheckResult>> {
    let p = path_operator(state, path)?;
    let m = crate::path::half_path_operator(state, path)?;
    let factorization = linalg::max_abs(&(&p - m.adjoint() * &m));
    let eigs = spectrum(&p)?;
    let scale = linalg::frobenius(&p).max(f64::MIN_POSITIVE);
    let floor_violation = eigs
        .iter()
        .map(|e| (-e.re / scale).max(0.0))
        .fold(0.0f64, f64::max);
    Ok(vec![
        CheckResult::judge(
            "retracing_spectrum_floor",
            1,
            floor_violation,
            tol::RETRACE_MIN_EIG,
        )
        .with("path", path.to_string())
        .with("scale", "relative to Frobenius norm"),
        CheckResult::judge(
            "retracing_factorization",
            1,
            factorization,
            tol::RETRACE_FACTORIZATION,
        )
        .with("path", path.to_string()),
    ])
}

// --- separable-state spectra ------------------------------------------------------

/// Closed-form spectra of the three-node cycle on separable states:
/// tri-separable states give `{1, 0, ...}`; for a bi-separable split
/// `(0,1) | 2` the single nonzero eigenvalue is `tr[(rho_01^T)^3]` and the
/// pair cycle `(0,1,0,1)` evaluates to the squared purity of subsystem 0.
/// The oracles are computed by direct matrix powers, not the eigensolver.
pub fn separable_spectra_check(
    kind: SeparableKind,
    trials: usize,
    seed: Seed,
) -> Result<Vec<CheckResult>> {
    const TRI: &[&[usize]] = &[&[2, 2, 2], &[4, 4, 4], &[3, 2, 2], &[2, 3, 4], &[3, 3, 3]];
    const BI: &[&[usize]] = &[&[2, 2, 2], &[3, 3, 2], &[2, 3, 3], &[4, 4, 2], &[3, 2, 4]];
    let cycle = ClosedPath::new(vec![0, 1, 2])?;
    match kind {
        SeparableKind::Tri => {
            let mut worst = 0.0f64;
            for t in 0..trials {
                let cfg = TRI[t % TRI.len()];
                let mut rng = seed.substream(t as u64);
                let factors: Vec<PureState> = cfg
                    .iter()
                    .map(|&d| {
                        Ok(haar_random_pure_with(
                            &SubsystemDims::new(vec![d])?,
                            &mut rng,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let psi = separable_state(SeparableKind::Tri, &factors)?;
                let eigs = spectrum(&path_operator(&State::Pure(psi), &cycle)?)?;
                let mut v = (eigs[0] - C64::new(1.0, 0.0)).norm();
                for e in &eigs[1..] {
                    v = v.max(e.norm());
                }
                worst = worst.max(v);
            }
            Ok(vec![CheckResult::judge(
                "tri_separable_spectrum",
                trials,
                worst,
                tol::SEPARABLE_SPECTRUM,
            )
            .with("expected", "{1, 0, ...}")
            .with("dims_cycle", "(2,2,2) (4,4,4) (3,2,2) (2,3,4) (3,3,3)")])
        }
        SeparableKind::Bi => {
            let pair_cycle = ClosedPath::new(vec![0, 1, 0, 1])?;
            let mut worst_spectrum = 0.0f64;
            let mut worst_cycle = 0.0f64;
            for t in 0..trials {
                let cfg = BI[t % BI.len()];
                let mut rng = seed.substream(t as u64);
                let f01 =
                    haar_random_pure_with(&SubsystemDims::new(vec![cfg[0], cfg[1]])?, &mut rng);
                let f2 = haar_random_pure_with(&SubsystemDims::new(vec![cfg[2]])?, &mut rng);
                let st = State::Pure(separable_state(SeparableKind::Bi, &[f01, f2])?);

                let rho01 = st.reduced_density(&[0, 1])?;
                let pt = partial_transpose(rho01.mat(), rho01.bipartite_shape()?, Slot::Col)?;
                let oracle = (&pt * &pt * &pt).trace();
                let eigs = spectrum(&path_operator(&st, &cycle)?)?;
                let mut v = (eigs[0] - oracle).norm();
                for e in &eigs[1..] {
                    v = v.max(e.norm());
                }
                worst_spectrum = worst_spectrum.max(v);

                let i6 = path_trace_invariant(&st, &pair_cycle)?;
                let purity = st.reduced_density(&[0])?.purity();
                worst_cycle = worst_cycle.max((i6 - purity * purity).abs());
            }
            Ok(vec![
                CheckResult::judge(
                    "bi_separable_spectrum",
                    trials,
                    worst_spectrum,
                    tol::SEPARABLE_SPECTRUM,
                )
                .with("expected", "{tr[(rho_01^T)^3], 0, ...}")
                .with("dims_cycle", "(2,2,2) (3,3,2) (2,3,3) (4,4,2) (3,2,4)"),
                CheckResult::judge(
                    "bi_separable_pair_cycle",
                    trials,
                    worst_cycle,
                    tol::SEPARABLE_SPECTRUM,
                )
                .with("expected", "tr P(0,1,0,1) = [tr rho_0^2]^2"),
            ])
        }
    }
}

// --- spectral survey ---------------------------------------------------------------

/// One sample of the random-state survey.
#[derive(Debug, Clone)]
pub struct SurveyRecord {
    pub sample_index: usize,
    /// Full cycle-operator spectrum, sorted by decreasing modulus.
    pub eigenvalues: Vec<C64>,
    pub dominant: C64,
    pub runner_up_modulus: f64,
    pub trace: f64,
    /// |dominant| / |runner-up|; infinite when the runner-up vanishes.
    pub dominance_ratio: f64,
    pub strictly_dominant: bool,
    pub dominant_real: bool,
    /// Same ratio for the single link `(0 -> 1)`, when that matrix is square.
    pub elemental_dominance_ratio: Option<f64>,
    pub mean_abs_diag: f64,
    pub mean_abs_offdiag: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyFailure {
    pub sample_index: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveySummary {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub path: String,
    pub succeeded: usize,
    pub failed: usize,
    pub strictly_dominant_count: usize,
    pub dominant_real_count: usize,
    /// Fraction of successful samples whose strictly dominant eigenvalue is
    /// real within `tol::DOMINANT_REAL_REL` of its modulus.
    pub dominant_real_fraction: f64,
    /// Mean over strictly dominant samples with a finite ratio. Recorded as
    /// data, not thresholded: how much larger "significantly larger" is, is
    /// an empirical observation here, not a claim.
    pub mean_dominance_ratio: f64,
    pub mean_elemental_dominance_ratio: Option<f64>,
    /// Mean |entry| over the diagonal of the ordered marginal of subsystems
    /// (1, 0), averaged over samples, against the 1/(d1 d2) prediction.
    pub mean_abs_diag: f64,
    pub predicted_abs_diag: f64,
    /// Same for the off-diagonal entries against 1/(d1 d2 sqrt(d_rest)).
    pub mean_abs_offdiag: f64,
    pub predicted_abs_offdiag: Option<f64>,
    pub failures: Vec<SurveyFailure>,
}

#[derive(Debug, Clone)]
pub struct Survey {
    pub records: Vec<SurveyRecord>,
    pub summary: SurveySummary,
}

impl Survey {
    /// Plot-ready long format, one row per eigenvalue.
    pub fn csv(&self) -> String {
        let mut out = String::from("sample_index,k,re,im\n");
        for rec in &self.records {
            for (k, ev) in rec.eigenvalues.iter().enumerate() {
                out.push_str(&format!(
                    "{},{k},{},{}\n",
                    rec.sample_index,
                    fmt_g17(ev.re),
                    fmt_g17(ev.im)
                ));
            }
        }
        out
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }
}

fn survey_sample(
    dims: &SubsystemDims,
    cycle: &ClosedPath,
    s: usize,
    seed: Seed,
) -> Result<SurveyRecord> {
    let mut rng = seed.substream(s as u64);
    let st = State::Pure(haar_random_pure_with(dims, &mut rng));
    let p = path_operator(&st, cycle)?;
    let trace = real_trace_checked(p.trace())?;
    let eigenvalues = spectrum(&p)?;
    let dominant = eigenvalues[0];
    let runner_up_modulus = eigenvalues.get(1).map(|e| e.norm()).unwrap_or(0.0);
    let strictly_dominant = dominant.norm() > 0.0
        && dominant.norm() - runner_up_modulus > tol::DOMINANCE_SEPARATION * dominant.norm();
    let dominant_real = dominant.im.abs() <= tol::DOMINANT_REAL_REL * dominant.norm();
    let dominance_ratio = dominant.norm() / runner_up_modulus;

    let link = link_matrix(&st, 0, 1)?;
    let elemental_dominance_ratio = if link.d_from == link.d_to {
        let le = spectrum(&link.mat)?;
        Some(le[0].norm() / le.get(1).map(|e| e.norm()).unwrap_or(0.0))
    } else {
        None
    };

    let marginal = st.reduced_density(&[1, 0])?;
    let n = marginal.mat().nrows();
    let mut diag_sum = 0.0f64;
    let mut total_sum = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let a = marginal.mat()[(i, j)].norm();
            total_sum += a;
            if i == j {
                diag_sum += a;
            }
        }
    }
    let mean_abs_diag = diag_sum / n as f64;
    let mean_abs_offdiag = if n > 1 {
        (total_sum - diag_sum) / (n * n - n) as f64
    } else {
        0.0
    };

    Ok(SurveyRecord {
        sample_index: s,
        eigenvalues,
        dominant,
        runner_up_modulus,
        trace,
        dominance_ratio,
        strictly_dominant,
        dominant_real,
        elemental_dominance_ratio,
        mean_abs_diag,
        mean_abs_offdiag,
    })
}

/// Spectrum survey over Haar-random pure states: per sample, the full
/// spectrum of the cycle operator through every subsystem, dominance and
/// realness bookkeeping, the single-link dominance ratio, and entry-magnitude
/// statistics of the (1,0) marginal. Samples run in parallel on independent
/// substreams, so results are deterministic in `seed` regardless of
/// scheduling; per-sample eigensolver failures are recorded, not fatal.
pub fn spectral_survey(dims: &SubsystemDims, samples: usize, seed: Seed) -> Result<Survey> {
    if dims.count() < 2 {
        return Err(Error::InvalidDimension(format!(
            "a survey needs at least two subsystems, got {}",
            dims.count()
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidState(
            "a survey needs at least one sample".into(),
        ));
    }
    let cycle = ClosedPath::new((0..dims.count()).collect())?;

    let outcomes: Vec<(usize, Result<SurveyRecord>)> = (0..samples)
        .into_par_iter()
        .map(|s| (s, survey_sample(dims, &cycle, s, seed)))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (s, outcome) in outcomes {
        match outcome {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(SurveyFailure {
                sample_index: s,
                message: e.to_string(),
            }),
        }
    }

    let succeeded = records.len();
    let strictly_dominant_count = records.iter().filter(|r| r.strictly_dominant).count();
    let dominant_real_count = records
        .iter()
        .filter(|r| r.strictly_dominant && r.dominant_real)
        .count();
    let finite_ratios: Vec<f64> = records
        .iter()
        .filter(|r| r.strictly_dominant && r.dominance_ratio.is_finite())
        .map(|r| r.dominance_ratio)
        .collect();
    let elemental: Vec<f64> = records
        .iter()
        .filter_map(|r| r.elemental_dominance_ratio)
        .filter(|x| x.is_finite())
        .collect();
    let mean = |xs: &[f64]| {
        if xs.is_empty() {
            0.0
        } else {
            xs.iter().sum::<f64>() / xs.len() as f64
        }
    };

    let d1 = dims.dim(0) as f64;
    let d2 = dims.dim(1) as f64;
    let d_rest: usize = dims.as_slice()[2..].iter().product();
    let predicted_abs_diag = 1.0 / (d1 * d2);
    let predicted_abs_offdiag = if dims.count() >= 3 {
        Some(1.0 / (d1 * d2 * (d_rest as f64).sqrt()))
    } else {
        None
    };

    let summary = SurveySummary {
        dims: dims.as_slice().to_vec(),
        samples,
        seed: seed.0,
        path: cycle.to_string(),
        succeeded,
        failed: failures.len(),
        strictly_dominant_count,
        dominant_real_count,
        dominant_real_fraction: if succeeded > 0 {
            dominant_real_count as f64 / succeeded as f64
        } else {
            0.0
        },
        mean_dominance_ratio: mean(&finite_ratios),
        mean_elemental_dominance_ratio: if elemental.is_empty() {
            None
        } else {
            Some(mean(&elemental))
        },
        mean_abs_diag: mean(&records.iter().map(|r| r.mean_abs_diag).collect::<Vec<_>>()),
        predicted_abs_diag,
        mean_abs_offdiag: mean(
            &records
                .iter()
                .map(|r| r.mean_abs_offdiag)
                .collect::<Vec<_>>(),
        ),
        predicted_abs_offdiag,
        failures,
    };
    Ok(Survey { records, summary })
}

// --- suites ----------------------------------------------------------------------

/// Named groups of checks, addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    /// Pauli-basis bridge, link formula cross-check, basis-change structure.
    Bridge,
    /// Local-unitary invariance, link covariance, nonlocal control.
    Invariance,
    /// Swap conjugation, adjoint reversal, retracing positivity.
    Structure,
    /// Closed-form spectra of bi- and tri-separable states.
    Separable,
    /// Realignment without the partial transpose: orthogonal vs unitary.
    Realign,
}

impl Suite {
    pub const LISTING: [Suite; 6] = [
        Suite::All,
        Suite::Invariance,
        Suite::Structure,
        Suite::Bridge,
        Suite::Separable,
        Suite::Realign,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Invariance => "prop1",
            Suite::Structure => "prop2",
            Suite::Bridge => "equiv",
            Suite::Separable => "separable",
            Suite::Realign => "realign",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Suite::All => "every suite below",
            Suite::Invariance => {
                "local-unitary invariance of traces and spectra, link covariance, entangling control"
            }
            Suite::Structure => "swap conjugation, adjoint reversal, retracing positivity",
            Suite::Bridge => "Pauli-basis equivalence and link construction cross-checks",
            Suite::Separable => "closed-form spectra of separable states",
            Suite::Realign => "realignment-only pair trace: orthogonal invariance, unitary control",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::LISTING
            .iter()
            .copied()
            .find(|suite| suite.token() == s)
            .ok_or_else(|| {
                Error::InvalidLabel(format!(
                    "unknown suite '{s}' (expected one of: all, prop1, prop2, equiv, separable, realign)"
                ))
            })
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

fn lu_invariance_ensemble(trials: usize, seed: Seed) -> Result<Vec<CheckResult>> {
    const CFGS: &[&[usize]] = &[
        &[2, 2, 2],
        &[2, 3, 2],
        &[3, 2, 4],
        &[4, 2, 3],
        &[3, 3, 3],
        &[2, 4, 2],
    ];
    let paths = [vec![0, 1, 2], vec![0, 1, 2, 1], vec![0, 1, 0, 1]];
    let mut worst = [0.0f64; 2];
    let mut n = [0usize; 2];
    for t in 0..trials {
        let cfg = CFGS[t % CFGS.len()];
        let mut rng = seed.substream(t as u64);
        let dims = SubsystemDims::new(cfg.to_vec())?;
        let st = if t % 2 == 0 {
            State::Pure(haar_random_pure_with(&dims, &mut rng))
        } else {
            let mut extended = cfg.to_vec();
            extended.push(2);
            let big = haar_random_pure_with(&SubsystemDims::new(extended)?, &mut rng);
            State::Mixed(big.reduced_density(&[0, 1, 2])?)
        };
        let path = ClosedPath::new(paths[t % paths.len()].clone())?;
        let parts = check_lu_invariance(
            &st,
            &path,
            2,
            tol::LU_INVARIANCE,
            derive(seed, 0x10 + t as u64),
        )?;
        for (k, part) in parts.iter().enumerate() {
            worst[k] = worst[k].max(part.max_violation);
            n[k] += part.trials;
        }
    }
    Ok(vec![
        CheckResult::judge(
            "lu_trace_spectrum_invariance",
            n[0],
            worst[0],
            tol::LU_INVARIANCE,
        )
        .with("states", format!("{trials}"))
        .with("paths", "(0,1,2) (0,1,2,1) (0,1,0,1)")
        .with(
            "sources",
            "alternating pure states and four-party marginals",
        ),
        CheckResult::judge(
            "lu_conjugation_identity",
            n[1],
            worst[1],
            tol::LU_CONJUGATION,
        )
        .with("states", format!("{trials}"))
        .with("paths", "(0,1,2) (0,1,2,1) (0,1,0,1)"),
    ])
}

fn link_covariance_ensemble(trials: usize, seed: Seed) -> Result<CheckResult> {
    const CFGS: &[&[usize]] = &[&[2, 3], &[3, 2], &[2, 2], &[3, 4]];
    let mut worst = 0.0f64;
    let mut n = 0usize;
    for t in 0..trials {
        let cfg = CFGS[t % CFGS.len()];
        let mut rng = seed.substream(t as u64);
        let (st, pair) = if t % 3 == 2 {
            let dims = SubsystemDims::new(vec![cfg[0], cfg[1], 2])?;
            (State::Pure(haar_random_pure_with(&dims, &mut rng)), (0, 1))
        } else {
            let dims = SubsystemDims::new(cfg.to_vec())?;
            let pair = if t % 2 == 0 { (0, 1) } else { (1, 0) };
            (State::Pure(haar_random_pure_with(&dims, &mut rng)), pair)
        };
        let part = check_link_covariance(
            &st,
            pair,
            3,
            tol::LINK_COVARIANCE,
            derive(seed, 0x20 + t as u64),
        )?;
        worst = worst.max(part.max_violation);
        n += part.trials;
    }
    Ok(
        CheckResult::judge("link_covariance", n, worst, tol::LINK_COVARIANCE)
            .with("states", format!("{trials}"))
            .with("modes", "to-only, from-only, both"),
    )
}

fn srs_adjoint_ensembles(trials: usize, seed: Seed) -> Result<Vec<CheckResult>> {
    const PAIRS: &[&[usize]] = &[&[2, 2], &[3, 5], &[2, 3], &[4, 2]];
    const TRIPLES: &[&[usize]] = &[&[2, 3, 2], &[3, 5, 2], &[2, 2, 3], &[4, 3, 2]];
    let mut worst_srs = 0.0f64;
    let mut worst_adj = 0.0f64;
    for t in 0..trials {
        let mut rng = seed.substream(t as u64);
        let st = if t % 2 == 0 {
            let dims = SubsystemDims::new(PAIRS[(t / 2) % PAIRS.len()].to_vec())?;
            State::Pure(haar_random_pure_with(&dims, &mut rng))
        } else {
            let dims = SubsystemDims::new(TRIPLES[(t / 2) % TRIPLES.len()].to_vec())?;
            State::Pure(haar_random_pure_with(&dims, &mut rng))
        };
        let pair = if t % 4 < 2 { (0, 1) } else { (1, 0) };
        worst_srs = worst_srs.max(check_srs(&st, pair)?.max_violation);
        worst_adj = worst_adj.max(check_adjoint(&st, pair)?.max_violation);
    }
    Ok(vec![
        CheckResult::judge("swap_conjugation", trials, worst_srs, tol::SWAP_CONJ_CHECK).with(
            "shapes",
            "pairs (2,2) (3,5) (2,3) (4,2) and tripartite marginals",
        ),
        CheckResult::judge("adjoint_reversal", trials, worst_adj, tol::ADJOINT_PAIR).with(
            "shapes",
            "pairs (2,2) (3,5) (2,3) (4,2) and tripartite marginals",
        ),
    ])
}

fn retracing_ensemble(trials: usize, seed: Seed) -> Result<Vec<CheckResult>> {
    const CFGS: &[&[usize]] = &[&[2, 2, 2, 2], &[2, 3, 2, 2], &[3, 2, 2, 3]];
    let paths = [vec![0, 1], vec![0, 1, 2, 1], vec![0, 1, 2, 3, 2, 1]];
    let mut worst = [0.0f64; 2];
    let mut n = [0usize; 2];
    for t in 0..trials {
        let cfg = CFGS[t % CFGS.len()];
        let mut rng = seed.substream(t as u64);
        let dims = SubsystemDims::new(cfg.to_vec())?;
        let st = if t % 2 == 0 {
            State::Pure(haar_random_pure_with(&dims, &mut rng))
        } else {
            let mut extended = cfg.to_vec();
            extended.push(2);
            let big = haar_random_pure_with(&SubsystemDims::new(extended)?, &mut rng);
            State::Mixed(big.reduced_density(&[0, 1, 2, 3])?)
        };
        let path = ClosedPath::new(paths[t % paths.len()].clone())?;
        let parts = check_retracing_positivity(&st, &path)?;
        for (k, part) in parts.iter().enumerate() {
            worst[k] = worst[k].max(part.max_violation);
            n[k] += part.trials;
        }
    }
    Ok(vec![
        CheckResult::judge(
            "retracing_spectrum_floor",
            n[0],
            worst[0],
            tol::RETRACE_MIN_EIG,
        )
        .with("paths", "(0,1) (0,1,2,1) (0,1,2,3,2,1)")
        .with("scale", "relative to Frobenius norm"),
        CheckResult::judge(
            "retracing_factorization",
            n[1],
            worst[1],
            tol::RETRACE_FACTORIZATION,
        )
        .with("paths", "(0,1) (0,1,2,1) (0,1,2,3,2,1)"),
    ])
}

fn realign_ensemble(trials: usize, seed: Seed) -> Result<Vec<CheckResult>> {
    const CFGS: &[&[usize]] = &[&[2, 2], &[3, 2], &[2, 3], &[3, 3]];
    let mut worst = [0.0f64; 2];
    let mut n = [0usize; 2];
    for t in 0..trials {
        let cfg = CFGS[t % CFGS.len()];
        let mut rng = seed.substream(t as u64);
        let dims = SubsystemDims::new(cfg.to_vec())?;
        let st = State::Pure(real_random_pure_with(&dims, &mut rng));
        let parts = check_realign_only(&st, (0, 1), 2, derive(seed, 0x30 + t as u64))?;
        for (k, part) in parts.iter().enumerate() {
            worst[k] = worst[k].max(part.max_violation);
            n[k] += part.trials;
        }
    }
    Ok(vec![
        CheckResult::judge(
            "realign_orthogonal_invariance",
            n[0],
            worst[0],
            tol::ORTHO_INVARIANCE,
        )
        .with("states", format!("{trials} real-amplitude pure states"))
        .with("scale", "relative to max(1, |value|)"),
        CheckResult::judge("realign_unitary_control", n[1], worst[1], 0.0)
            .with("states", format!("{trials} real-amplitude pure states"))
            .with("required_fraction", format!("{}", tol::CONTROL_FRACTION)),
    ])
}

/// Run one suite. `trials` scales every randomized ensemble inside it.
pub fn run_suite(suite: Suite, trials: usize, seed: Seed) -> Result<Vec<CheckResult>> {
    if trials == 0 {
        return Err(Error::InvalidState(
            "verification needs at least one trial".into(),
        ));
    }
    let mut out = Vec::new();
    match suite {
        Suite::All => {
            for s in [
                Suite::Bridge,
                Suite::Invariance,
                Suite::Structure,
                Suite::Separable,
                Suite::Realign,
            ] {
                out.extend(run_suite(s, trials, seed)?);
            }
        }
        Suite::Bridge => {
            out.push(check_pauli_equivalence(trials, derive(seed, 1))?);
            out.push(check_link_formula_agreement(trials, derive(seed, 2))?);
            out.push(check_u_matrix());
        }
        Suite::Invariance => {
            out.extend(lu_invariance_ensemble(trials, derive(seed, 3))?);
            out.push(link_covariance_ensemble(trials, derive(seed, 4))?);
            out.push(check_nonlocal_control(trials, derive(seed, 5))?);
        }
        Suite::Structure => {
            out.extend(srs_adjoint_ensembles(trials, derive(seed, 6))?);
            out.extend(retracing_ensemble(trials, derive(seed, 7))?);
        }
        Suite::Separable => {
            out.extend(separable_spectra_check(
                SeparableKind::Tri,
                trials,
                derive(seed, 8),
            )?);
            out.extend(separable_spectra_check(
                SeparableKind::Bi,
                trials,
                derive(seed, 9),
            )?);
        }
        Suite::Realign => {
            out.extend(realign_ensemble(trials, derive(seed, 10))?);
        }
    }
    Ok(out)
}
