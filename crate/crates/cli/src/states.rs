//! State specification parsing.
//!
//! A state spec is a named constant (`bell-singlet`, `qdice-sigma`,
//! `maximally-mixed`), a Bloch vector (`bloch:x,y,z`), or a path to a JSON
//! file holding the matrix as nested `[re, im]` arrays.

use affine_loophole::matrix::ComplexMatrix;
use affine_loophole::qstate::{bell_singlet, DensityMatrix};
use affine_loophole::separability::qdice_sigma;
use affine_loophole::Complex64;

use crate::CliError;

/// Loads the raw matrix for a spec without validating it as a state.
pub fn load_matrix(spec: &str, qubits: usize) -> Result<ComplexMatrix, CliError> {
    match spec {
        "bell-singlet" => Ok(bell_singlet().matrix().clone()),
        "qdice-sigma" => Ok(qdice_sigma().matrix().clone()),
        "maximally-mixed" => Ok(DensityMatrix::maximally_mixed(qubits).matrix().clone()),
        other => {
            if let Some(rest) = other.strip_prefix("bloch:") {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 3 {
                    return Err(CliError::InvalidInput(format!(
                        "bloch spec needs three components, got {other:?}"
                    )));
                }
                let mut v = [0.0f64; 3];
                for (slot, part) in v.iter_mut().zip(&parts) {
                    *slot = part.trim().parse().map_err(|_| {
                        CliError::InvalidInput(format!("bad bloch component {part:?}"))
                    })?;
                }
                // Built directly so `validate` can report on vectors that
                // poke outside the unit ball instead of refusing to load.
                let [x, y, z] = v;
                return ComplexMatrix::from_rows(vec![
                    vec![
                        Complex64::new((1.0 + z) / 2.0, 0.0),
                        Complex64::new(x / 2.0, -y / 2.0),
                    ],
                    vec![
                        Complex64::new(x / 2.0, y / 2.0),
                        Complex64::new((1.0 - z) / 2.0, 0.0),
                    ],
                ])
                .map_err(CliError::Core);
            }
            let text = std::fs::read_to_string(other).map_err(|e| {
                CliError::InvalidInput(format!("cannot read state file {other:?}: {e}"))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::InvalidInput(format!("cannot parse state file {other:?}: {e}"))
            })
        }
    }
}

/// Loads a spec and validates it as a density matrix.
pub fn load_state(spec: &str, qubits: usize) -> Result<DensityMatrix, CliError> {
    Ok(DensityMatrix::new(load_matrix(spec, qubits)?)?)
}
