//! JSON model files.
//!
//! ```json
//! {
//!   "num_states": 2,
//!   "beta": 0.5,
//!   "states": [
//!     {"actions": [{"label": 1, "reward": "19/32", "transition": [0.25, 0.75]}]},
//!     ...
//!   ]
//! }
//! ```
//!
//! Any number may also be written as a string holding a decimal or a
//! rational `"p/q"`; both are converted to the nearest double.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_model, Action, ActionLabel, MdpModel, ValidationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq)]
struct Scalar(f64);

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, a decimal string or a \"p/q\" rational string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                Ok(Scalar(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                parse_scalar(v).map(Scalar).map_err(E::custom)
            }
        }

        d.deserialize_any(ScalarVisitor)
    }
}

/// Parses `"0.59375"`, `"19/32"` or `"-3/4"`.
pub fn parse_scalar(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| format!("invalid rational numerator in {text:?}"))?;
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|_| format!("invalid rational denominator in {text:?}"))?;
            if den == 0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            num as f64 / den as f64
        }
        None => text
            .parse::<f64>()
            .map_err(|_| format!("invalid number {text:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("number {text:?} is not finite"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    label: ActionLabel,
    reward: Scalar,
    transition: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    actions: Vec<RawAction>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    num_states: usize,
    beta: Scalar,
    states: Vec<RawState>,
}

/// Parses a model document and validates it without rejecting it.
pub fn load_model(document: &str) -> Result<(MdpModel, ValidationReport)> {
    let raw: RawModel = serde_json::from_str(document).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let declared = raw.num_states;
    let found = raw.states.len();
    let model = MdpModel::new(
        raw.beta.0,
        raw.states
            .into_iter()
            .map(|s| {
                s.actions
                    .into_iter()
                    .map(|a| {
                        Action::new(
                            a.label,
                            a.reward.0,
                            a.transition.into_iter().map(|p| p.0).collect(),
                        )
                    })
                    .collect()
            })
            .collect(),
    );
    let mut report = validate_model(&model);
    if declared != found {
        report
            .violations
            .insert(0, Violation::StateCount { declared, found });
    }
    Ok((model, report))
}

/// Parses a model document; any violation is an error. Warnings are
/// returned alongside the model.
pub fn parse_model(document: &str) -> Result<(MdpModel, ValidationReport)> {
    let (model, report) = load_model(document)?;
    if !report.is_valid() {
        return Err(Error::InvalidModel(report.violations));
    }
    Ok((model, report))
}

pub fn read_model(path: impl AsRef<Path>) -> Result<(MdpModel, ValidationReport)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

/// Serializes `model` to the file format, all numbers as JSON numbers.
pub fn serialize_model(model: &MdpModel) -> String {
    let raw = RawModel {
        num_states: model.num_states(),
        beta: Scalar(model.beta()),
        states: (0..model.num_states())
            .map(|i| RawState {
                actions: model
                    .actions(i)
                    .iter()
                    .map(|a| RawAction {
                        label: a.label,
                        reward: Scalar(a.reward),
                        transition: a.transition.iter().map(|&p| Scalar(p)).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("model serializes")
}
