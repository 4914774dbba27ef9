use serde::{Deserialize, Serialize};

use crate::{finding, CliError, Common};

/// The structured output of one run. Keys are emitted in sorted order, so
/// equal inputs and seeds give byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub trials: u32,
    pub pass: bool,
    pub result: serde_json::Value,
}

pub fn emit(command: &str, target: &str, common: &Common, pass: bool, result: &impl Serialize) -> Result<(), CliError> {
    let record = Record {
        tool: "laurent".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        target: target.into(),
        seed: common.seed,
        trials: common.trials,
        pass,
        result: serde_json::to_value(result).map_err(finding)?,
    };
    outln!("{}", serde_json::to_string_pretty(&record).map_err(finding)?);
    Ok(())
}
