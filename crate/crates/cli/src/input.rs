//! JSON arguments: a path to a file, or the JSON text itself.

use std::collections::BTreeMap;

use campana_core::campana::MultiplicitiesJson;
use campana_core::fan::ContactsJson;
use campana_core::field::parse_rational;
use campana_core::Multiplicity;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

fn looks_inline(arg: &str) -> bool {
    matches!(arg.trim_start().chars().next(), Some('[' | '{'))
}

/// Reads `arg` as JSON and records its parsed value under `name` for the digest.
pub fn load<T: DeserializeOwned>(
    arg: &str,
    name: &str,
    inputs: &mut BTreeMap<String, Value>,
) -> Result<T, CliError> {
    let (text, origin) = if looks_inline(arg) {
        (arg.to_string(), "inline".to_string())
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| CliError::Input(format!("--{name}: cannot read {arg}: {e}")))?;
        (text, arg.to_string())
    };
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("--{name} ({origin}): malformed JSON: {e}")))?;
    let parsed =
        T::deserialize(&value).map_err(|e| CliError::Input(format!("--{name} ({origin}): {e}")))?;
    inputs.insert(name.to_string(), value);
    Ok(parsed)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MultInput {
    List(Vec<Multiplicity>),
    Object(MultiplicitiesJson),
}

pub fn multiplicities(
    arg: &str,
    inputs: &mut BTreeMap<String, Value>,
) -> Result<Vec<Multiplicity>, CliError> {
    Ok(match load::<MultInput>(arg, "mult", inputs)? {
        MultInput::List(v) => v,
        MultInput::Object(o) => o.multiplicities,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ContactsInput {
    List(Vec<Vec<i64>>),
    Object(ContactsJson),
}

pub fn contacts(arg: &str, inputs: &mut BTreeMap<String, Value>) -> Result<ContactsJson, CliError> {
    Ok(match load::<ContactsInput>(arg, "contacts", inputs)? {
        ContactsInput::List(orders) => ContactsJson { orders },
        ContactsInput::Object(o) => o,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalInput {
    Text(String),
    Int(i64),
}

/// A list of rationals given as integers or `"num/den"` strings.
pub fn rationals(
    arg: &str,
    name: &str,
    inputs: &mut BTreeMap<String, Value>,
) -> Result<Vec<BigRational>, CliError> {
    load::<Vec<RationalInput>>(arg, name, inputs)?
        .into_iter()
        .map(|r| match r {
            RationalInput::Text(s) => {
                parse_rational(&s).map_err(|e| CliError::Input(format!("--{name}: {e}")))
            }
            RationalInput::Int(n) => Ok(BigRational::from_integer(n.into())),
        })
        .collect()
}
