//! JSON schemas for states, matrices, spectra, diagonalizations, channels,
//! and check reports.
//!
//! Every float is serialized with 18 significant digits through the
//! arbitrary-precision JSON number type, so emitted files are byte-stable
//! and re-parse to exactly the same doubles. Objects serialize with sorted
//! keys; identical inputs produce identical bytes.

use serde_json::{Map, Value};

use crate::axioms::{AxiomReport, CheckVerdict, CheckWitness};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::majorize::{BirkhoffDecomposition, Spectrum};
use crate::purity::RaReChannel;
use crate::spectral::Diagonalization;
use crate::theory::{ChannelRep, Dihedral, Effect, ReversibleChannel, State, Theory};
use crate::tol::Tolerances;

pub const SCHEMA_VERSION: u64 = 1;

/// A float as an arbitrary-precision JSON number with 18 significant digits.
pub fn json_f64(x: f64) -> Result<Value> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("cannot serialize non-finite value {x}")));
    }
    let literal = format!("{x:.17e}");
    let number: serde_json::Number = literal
        .parse()
        .map_err(|_| Error::Parse(format!("invalid numeric literal {literal}")))?;
    Ok(Value::Number(number))
}

pub fn json_f64_slice(xs: &[f64]) -> Result<Value> {
    Ok(Value::Array(xs.iter().map(|&x| json_f64(x)).collect::<Result<_>>()?))
}

fn json_matrix(m: &Matrix) -> Result<Value> {
    let rows: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|r| json_f64_slice(r))
        .collect::<Result<_>>()?;
    Ok(Value::Array(rows))
}

fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Pretty JSON with a trailing newline; byte-deterministic for equal values.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serialization cannot fail");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_schema(value: &Value) -> Result<()> {
    match value.get("schema") {
        None => Ok(()),
        Some(v) => match v.as_u64() {
            Some(SCHEMA_VERSION) => Ok(()),
            _ => Err(Error::Parse(format!("unsupported schema version {v}"))),
        },
    }
}

fn field<'v>(value: &'v Value, name: &str) -> Result<&'v Value> {
    value
        .get(name)
        .ok_or_else(|| Error::Parse(format!("missing field \"{name}\"")))
}

fn as_f64(value: &Value) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number, got {value}")))
}

fn as_f64_array(value: &Value) -> Result<Vec<f64>> {
    value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array, got {value}")))?
        .iter()
        .map(as_f64)
        .collect()
}

fn as_nested_array(value: &Value) -> Result<Vec<Vec<f64>>> {
    value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of rows, got {value}")))?
        .iter()
        .map(as_f64_array)
        .collect()
}

/// The state payload in its natural shape: nested rows for quantum, a flat
/// vector for classical and gbit.
fn state_data(state: &State) -> Result<Value> {
    match state.theory() {
        Theory::QuantumReal { .. } => json_matrix(&state.as_matrix()?),
        _ => json_f64_slice(state.coords()),
    }
}

fn effect_data(effect: &Effect) -> Result<Value> {
    match effect.theory() {
        Theory::QuantumReal { .. } => json_matrix(&effect.as_matrix()?),
        _ => json_f64_slice(effect.coords()),
    }
}

pub fn state_to_value(state: &State) -> Result<Value> {
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("theory", Value::from(state.theory().name())),
        ("dim", Value::from(state.theory().dim_operational() as u64)),
        ("data", state_data(state)?),
    ]))
}

pub fn state_from_value(value: &Value, tol: &Tolerances) -> Result<State> {
    check_schema(value)?;
    let theory_name = field(value, "theory")?
        .as_str()
        .ok_or_else(|| Error::Parse("\"theory\" must be a string".into()))?;
    let data = field(value, "data")?;
    let declared_dim = value.get("dim").and_then(Value::as_u64).map(|d| d as usize);
    match theory_name {
        "quantum_real" => {
            let rows = as_nested_array(data)?;
            let m = Matrix::from_rows(&rows)?;
            if !m.is_square() {
                return Err(Error::Parse("quantum data must be a square matrix".into()));
            }
            if let Some(d) = declared_dim {
                if d != m.rows() {
                    return Err(Error::Parse(format!(
                        "declared dim {d} does not match a {}x{} matrix",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            State::quantum(&m, tol)
        }
        "classical" => {
            let probs = as_f64_array(data)?;
            if let Some(d) = declared_dim {
                if d != probs.len() {
                    return Err(Error::Parse(format!(
                        "declared dim {d} does not match {} entries",
                        probs.len()
                    )));
                }
            }
            State::classical(probs, tol)
        }
        "gbit" => {
            let coords = as_f64_array(data)?;
            if coords.len() != 3 {
                return Err(Error::Parse("gbit data must have three coordinates".into()));
            }
            State::new(Theory::Gbit, coords, tol)
        }
        other => Err(Error::Parse(format!("unknown theory \"{other}\""))),
    }
}

pub fn matrix_to_value(m: &Matrix) -> Result<Value> {
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("dim", Value::from(m.rows() as u64)),
        ("data", json_matrix(m)?),
    ]))
}

pub fn matrix_from_value(value: &Value) -> Result<Matrix> {
    check_schema(value)?;
    let rows = as_nested_array(field(value, "data")?)?;
    let m = Matrix::from_rows(&rows)?;
    if let Some(d) = value.get("dim").and_then(Value::as_u64) {
        if d as usize != m.rows() {
            return Err(Error::Parse(format!(
                "declared dim {d} does not match {} rows",
                m.rows()
            )));
        }
    }
    Ok(m)
}

pub fn spectrum_to_value(s: &Spectrum) -> Result<Value> {
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("values", json_f64_slice(s.values())?),
    ]))
}

pub fn spectrum_from_value(value: &Value, tol: &Tolerances) -> Result<Spectrum> {
    check_schema(value)?;
    let values = as_f64_array(field(value, "values")?)?;
    Spectrum::new(values, tol)
}

pub fn diagonalization_to_value(diag: &Diagonalization) -> Result<Value> {
    let pure_states: Vec<Value> = diag
        .pure_states
        .iter()
        .map(state_data)
        .collect::<Result<_>>()?;
    let test_effects: Vec<Value> = diag
        .test_effects
        .iter()
        .map(effect_data)
        .collect::<Result<_>>()?;
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("eigenvalues", json_f64_slice(&diag.eigenvalues)?),
        ("pure_states", Value::Array(pure_states)),
        ("test_effects", Value::Array(test_effects)),
        ("reconstruction_error", json_f64(diag.reconstruction_error)?),
        ("steps", Value::from(diag.steps as u64)),
    ]))
}

pub fn reversible_to_value(ch: &ReversibleChannel) -> Result<Value> {
    Ok(match ch.rep() {
        ChannelRep::Orthogonal(o) => obj(vec![("orthogonal", json_matrix(o)?)]),
        ChannelRep::Permutation(p) => obj(vec![(
            "permutation",
            Value::Array(p.iter().map(|&i| Value::from(i as u64)).collect()),
        )]),
        ChannelRep::Dihedral(d) => obj(vec![(
            "dihedral",
            obj(vec![
                ("rotation", Value::from(d.rotation as u64)),
                ("reflect", Value::from(d.reflect)),
            ]),
        )]),
    })
}

pub fn rare_to_value(r: &RaReChannel) -> Result<Value> {
    let channels: Vec<Value> = r
        .channels()
        .iter()
        .map(reversible_to_value)
        .collect::<Result<_>>()?;
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("weights", json_f64_slice(r.weights())?),
        ("channels", Value::Array(channels)),
    ]))
}

pub fn reversible_from_value(
    value: &Value,
    theory: Theory,
    tol: &Tolerances,
) -> Result<ReversibleChannel> {
    if let Some(o) = value.get("orthogonal") {
        let m = Matrix::from_rows(&as_nested_array(o)?)?;
        return ReversibleChannel::orthogonal(theory, m, tol);
    }
    if let Some(p) = value.get("permutation") {
        let perm: Vec<usize> = p
            .as_array()
            .ok_or_else(|| Error::Parse("permutation must be an array".into()))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Parse("permutation entries must be integers".into()))
            })
            .collect::<Result<_>>()?;
        return ReversibleChannel::permutation(theory, perm);
    }
    if let Some(d) = value.get("dihedral") {
        let rotation = field(d, "rotation")?
            .as_u64()
            .ok_or_else(|| Error::Parse("rotation must be an integer".into()))?;
        let reflect = field(d, "reflect")?
            .as_bool()
            .ok_or_else(|| Error::Parse("reflect must be a boolean".into()))?;
        if rotation > 3 {
            return Err(Error::Parse("rotation must be in 0..4".into()));
        }
        return Ok(ReversibleChannel::dihedral(Dihedral {
            rotation: rotation as u8,
            reflect,
        }));
    }
    Err(Error::Parse("unknown channel representation".into()))
}

pub fn rare_from_value(value: &Value, theory: Theory, tol: &Tolerances) -> Result<RaReChannel> {
    check_schema(value)?;
    let weights = as_f64_array(field(value, "weights")?)?;
    let channels: Vec<ReversibleChannel> = field(value, "channels")?
        .as_array()
        .ok_or_else(|| Error::Parse("channels must be an array".into()))?
        .iter()
        .map(|c| reversible_from_value(c, theory, tol))
        .collect::<Result<_>>()?;
    RaReChannel::new(weights, channels, tol)
}

pub fn birkhoff_to_value(
    decomp: &BirkhoffDecomposition,
    reconstruction_error: f64,
) -> Result<Value> {
    let perms: Vec<Value> = decomp
        .permutations
        .iter()
        .map(|p| Value::Array(p.iter().map(|&i| Value::from(i as u64)).collect()))
        .collect();
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("weights", json_f64_slice(&decomp.weights)?),
        ("permutations", Value::Array(perms)),
        ("reconstruction_error", json_f64(reconstruction_error)?),
    ]))
}

fn verdict_str(v: CheckVerdict) -> &'static str {
    match v {
        CheckVerdict::Pass => "pass",
        CheckVerdict::Fail => "fail",
        CheckVerdict::Inapplicable => "inapplicable",
    }
}

fn witness_to_value(w: &CheckWitness) -> Result<Value> {
    Ok(match w {
        CheckWitness::None => Value::Null,
        CheckWitness::Attainment { effect, state } => obj(vec![
            ("effect", effect_data(effect)?),
            ("state", state_data(state)?),
        ]),
        CheckWitness::FaceDegeneracy { effect, states } => obj(vec![
            ("effect", effect_data(effect)?),
            (
                "states",
                Value::Array(states.iter().map(state_data).collect::<Result<_>>()?),
            ),
        ]),
        CheckWitness::Note(s) => Value::from(s.as_str()),
    })
}

pub fn report_to_value(report: &AxiomReport) -> Result<Value> {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            Ok(obj(vec![
                ("name", Value::from(c.name)),
                ("verdict", Value::from(verdict_str(c.verdict))),
                ("detail", Value::from(c.detail.as_str())),
                ("witness", witness_to_value(&c.witness)?),
            ]))
        })
        .collect::<Result<_>>()?;
    Ok(obj(vec![
        ("schema", Value::from(SCHEMA_VERSION)),
        ("model", Value::from(report.model.as_str())),
        ("dim", Value::from(report.dim as u64)),
        ("trials", Value::from(report.trials as u64)),
        ("seed", Value::from(report.seed)),
        ("checks", Value::Array(checks)),
    ]))
}
