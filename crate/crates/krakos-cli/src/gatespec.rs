//! Gate specification parsing: a named gate (optionally parameterized) or an
//! inline JSON matrix.

use serde::Deserialize;

use krakos::{ComplexMatrix, Error, Result, UnitaryGate};

/// Inline object form: qubit count declared alongside the matrix.
#[derive(Deserialize)]
struct GateFile {
    qubits: usize,
    matrix: ComplexMatrix,
}

/// Parses a gate spec: one of I, X, Y, Z, H, CNOT, CZ, SWAP, CPHASE(θ)
/// (case-insensitive), a bare JSON matrix `[[[re,im],...],...]`, or a JSON
/// object `{"qubits": n, "matrix": [...]}`.
pub fn parse_gate_spec(text: &str) -> Result<UnitaryGate> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty gate spec".into(),
        });
    }
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        parse_inline(trimmed)
    } else {
        parse_named(trimmed)
    }
}

fn parse_named(text: &str) -> Result<UnitaryGate> {
    let upper = text.to_ascii_uppercase();
    match upper.as_str() {
        "I" => Ok(krakos::gates::identity(1)),
        "X" => Ok(krakos::gates::pauli_x()),
        "Y" => Ok(krakos::gates::pauli_y()),
        "Z" => Ok(krakos::gates::pauli_z()),
        "H" => Ok(krakos::gates::hadamard()),
        "CNOT" => Ok(krakos::gates::cnot()),
        "CZ" => Ok(krakos::gates::cz()),
        "SWAP" => Ok(krakos::gates::swap()),
        _ if upper.starts_with("CPHASE(") => {
            let open = "CPHASE(".len();
            let Some(inner) = upper[open..].strip_suffix(')') else {
                return Err(Error::Parse {
                    line: 1,
                    column: upper.len(),
                    message: "CPHASE angle is missing its closing parenthesis".into(),
                });
            };
            let theta: f64 = inner.trim().parse().map_err(|_| Error::Parse {
                line: 1,
                column: open + 1,
                message: format!("invalid CPHASE angle {:?}", inner.trim()),
            })?;
            if !theta.is_finite() {
                return Err(Error::Parse {
                    line: 1,
                    column: open + 1,
                    message: "CPHASE angle must be finite".into(),
                });
            }
            Ok(krakos::gates::cphase(theta))
        }
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!(
                "unknown gate {text:?}; expected I, X, Y, Z, H, CNOT, CZ, SWAP, \
                 CPHASE(angle), or an inline JSON matrix"
            ),
        }),
    }
}

fn parse_inline(text: &str) -> Result<UnitaryGate> {
    if text.starts_with('{') {
        let gate_file: GateFile = serde_json::from_str(text).map_err(json_error)?;
        let gate = UnitaryGate::new(gate_file.matrix)?;
        if gate.num_qubits() != gate_file.qubits {
            return Err(Error::InvalidInput(format!(
                "declared {} qubits but the matrix describes {}",
                gate_file.qubits,
                gate.num_qubits()
            )));
        }
        Ok(gate)
    } else {
        let matrix: ComplexMatrix = serde_json::from_str(text).map_err(json_error)?;
        UnitaryGate::new(matrix)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_gates_parse() {
        for name in ["I", "X", "Y", "Z", "H", "CNOT", "CZ", "SWAP", "cnot"] {
            assert!(parse_gate_spec(name).is_ok(), "{name}");
        }
    }

    #[test]
    fn cnot_swaps_the_last_two_basis_states() {
        let gate = parse_gate_spec("CNOT").unwrap();
        let m = gate.matrix();
        assert_eq!(m[(2, 3)].re, 1.0);
        assert_eq!(m[(3, 2)].re, 1.0);
        assert_eq!(m[(2, 2)].re, 0.0);
    }

    #[test]
    fn cphase_pi_equals_cz() {
        let gate = parse_gate_spec("CPHASE(3.141592653589793)").unwrap();
        let diff = gate.matrix().max_abs_diff(krakos::gates::cz().matrix());
        assert!(diff < 1e-12, "diff {diff:.3e}");
    }

    #[test]
    fn cphase_rejects_bad_angles() {
        for bad in ["CPHASE(", "CPHASE()", "CPHASE(abc)", "CPHASE(inf)"] {
            let err = parse_gate_spec(bad).unwrap_err();
            assert!(matches!(err, Error::Parse { .. }), "{bad} gave {err:?}");
        }
    }

    #[test]
    fn unknown_names_give_parse_errors_with_position() {
        match parse_gate_spec("TOFFOLI") {
            Err(Error::Parse { line: 1, column: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inline_zero_matrix_fails_unitarity_with_residual_two() {
        let rows: Vec<String> = (0..4)
            .map(|_| "[[0,0],[0,0],[0,0],[0,0]]".to_string())
            .collect();
        let text = format!("[{}]", rows.join(","));
        match parse_gate_spec(&text) {
            Err(Error::NotUnitary { residual, .. }) => {
                assert!((residual - 2.0).abs() < 1e-12, "residual {residual}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inline_object_checks_declared_qubits() {
        let text = r#"{"qubits": 2, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        match parse_gate_spec(text) {
            Err(Error::InvalidInput(message)) => assert!(message.contains("declared 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inline_object_round_trip() {
        let original = krakos::gates::hadamard();
        let text = serde_json::to_string(&original).unwrap();
        let parsed = parse_gate_spec(&text).unwrap();
        assert!(parsed.matrix().max_abs_diff(original.matrix()) < 1e-12);
    }

    #[test]
    fn malformed_json_reports_line_and_column() {
        match parse_gate_spec("[[[1,0],[0,0]],\n[[0,0],[1,0]") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
