//! State file format and numeric text output.
//!
//! States travel as JSON with a `kind` tag. Amplitudes and matrix entries are
//! `[re, im]` pairs so files stay readable and language-neutral. All numeric
//! text output uses 17 significant digits, which round-trips f64 exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, PureState, State, SubsystemDims};
use crate::{CMat, CVec, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum StateFile {
    Pure {
        dims: Vec<usize>,
        amp: Vec<[f64; 2]>,
    },
    Mixed {
        dims: Vec<usize>,
        rho: Vec<Vec<[f64; 2]>>,
    },
}

impl StateFile {
    fn from_state(state: &State) -> Self {
        match state {
            State::Pure(psi) => StateFile::Pure {
                dims: psi.dims().as_slice().to_vec(),
                amp: psi.amp().iter().map(|c| [c.re, c.im]).collect(),
            },
            State::Mixed(rho) => StateFile::Mixed {
                dims: rho.dims().as_slice().to_vec(),
                rho: (0..rho.mat().nrows())
                    .map(|i| rho.mat().row(i).iter().map(|c| [c.re, c.im]).collect())
                    .collect(),
            },
        }
    }

    fn into_state(self) -> Result<State> {
        match self {
            StateFile::Pure { dims, amp } => {
                let dims = SubsystemDims::new(dims)?;
                let v =
                    CVec::from_iterator(amp.len(), amp.iter().map(|&[re, im]| C64::new(re, im)));
                Ok(State::Pure(PureState::new(dims, v)?))
            }
            StateFile::Mixed { dims, rho } => {
                let dims = SubsystemDims::new(dims)?;
                let n = rho.len();
                for (i, row) in rho.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::InvalidState(format!(
                            "density matrix row {i} has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                }
                let m = CMat::from_fn(n, n, |i, j| {
                    let [re, im] = rho[i][j];
                    C64::new(re, im)
                });
                Ok(State::Mixed(DensityMatrix::new(dims, m)?))
            }
        }
    }
}

pub fn state_to_json(state: &State) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from_state(state))?)
}

pub fn state_from_json(json: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(json)?;
    file.into_state()
}

pub fn write_state(path: &Path, state: &State) -> Result<()> {
    let mut text = state_to_json(state)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<State> {
    state_from_json(&fs::read_to_string(path)?)
}

/// 17 significant digits: the shortest fixed precision that round-trips every f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV rows `k,re,im` for an eigenvalue list, with header.
pub fn spectrum_csv(eigenvalues: &[C64]) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, ev) in eigenvalues.iter().enumerate() {
        out.push_str(&format!("{k},{},{}\n", fmt_g17(ev.re), fmt_g17(ev.im)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_random_pure, Seed};
    use crate::tensor::SubsystemDims;

    fn dims(d: &[usize]) -> SubsystemDims {
        SubsystemDims::new(d.to_vec()).unwrap()
    }

    #[test]
    fn pure_state_round_trips_bit_exactly() {
        let psi = haar_random_pure(&dims(&[2, 3, 2]), Seed(11));
        let state = State::Pure(psi);
        let json = state_to_json(&state).unwrap();
        let back = state_from_json(&json).unwrap();
        match (&state, &back) {
            (State::Pure(a), State::Pure(b)) => {
                assert_eq!(a.dims().as_slice(), b.dims().as_slice());
                assert_eq!(a.amp(), b.amp());
            }
            _ => panic!("kind changed in round trip"),
        }
    }

    #[test]
    fn mixed_state_round_trips_bit_exactly() {
        let psi = haar_random_pure(&dims(&[2, 2, 2]), Seed(5));
        let rho = psi.reduced_density(&[0, 1]).unwrap();
        let state = State::Mixed(rho);
        let json = state_to_json(&state).unwrap();
        let back = state_from_json(&json).unwrap();
        match (&state, &back) {
            (State::Mixed(a), State::Mixed(b)) => {
                assert_eq!(a.dims().as_slice(), b.dims().as_slice());
                assert_eq!(a.mat(), b.mat());
            }
            _ => panic!("kind changed in round trip"),
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let state = State::Pure(haar_random_pure(&dims(&[3, 2]), Seed(7)));
        write_state(&path, &state).unwrap();
        let back = read_state(&path).unwrap();
        match (&state, &back) {
            (State::Pure(a), State::Pure(b)) => assert_eq!(a.amp(), b.amp()),
            _ => panic!("kind changed in round trip"),
        }
    }

    #[test]
    fn malformed_json_is_a_format_error() {
        let err = state_from_json("{\"kind\": \"pure\", \"dims\": [2").unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn unknown_kind_is_a_format_error() {
        let err =
            state_from_json("{\"kind\": \"classical\", \"dims\": [2], \"amp\": [[1,0],[0,0]]}")
                .unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn wrong_amplitude_count_is_rejected() {
        let err = state_from_json("{\"kind\": \"pure\", \"dims\": [2, 2], \"amp\": [[1,0],[0,0]]}")
            .unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        let err = state_from_json("{\"kind\": \"pure\", \"dims\": [2], \"amp\": [[1,0],[1,0]]}")
            .unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn ragged_density_matrix_is_rejected() {
        let err = state_from_json(
            "{\"kind\": \"mixed\", \"dims\": [2], \"rho\": [[[1,0],[0,0]],[[0,0]]]}",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn non_hermitian_density_matrix_is_rejected() {
        let err = state_from_json(
            "{\"kind\": \"mixed\", \"dims\": [2], \"rho\": [[[0.5,0],[1,0]],[[0,0],[0.5,0]]]}",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let err =
            state_from_json("{\"kind\": \"pure\", \"dims\": [0, 2], \"amp\": []}").unwrap_err();
        assert!(matches!(err, Error::InvalidDimension(_)));
    }

    #[test]
    fn g17_round_trips_awkward_doubles() {
        for &x in &[
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            6.02e23,
            -7.3e-212,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn spectrum_csv_shape() {
        let evs = vec![C64::new(1.0, 0.0), C64::new(-0.25, 0.125)];
        let csv = spectrum_csv(&evs);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "k,re,im");
        assert!(lines[1].starts_with("0,1.0000000000000000e0,"));
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields[0], "1");
        assert_eq!(fields[1].parse::<f64>().unwrap(), -0.25);
        assert_eq!(fields[2].parse::<f64>().unwrap(), 0.125);
    }
}
