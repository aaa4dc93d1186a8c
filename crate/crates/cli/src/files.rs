//! Channel and rule files.

use std::path::Path;

use causal_lens::automata::{At, Builtin, Gate, Layer, Placement};
use causal_lens::causal::Model;
use causal_lens::quantum::{complex_rows, CMatrix};
use causal_lens::{ClassicalChannel, CompositeSystem, SubsystemLabel, UnitaryChannel};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// On-disk channel description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub model: Model,
    pub inputs: Vec<SubsystemLabel>,
    pub outputs: Vec<SubsystemLabel>,
    /// Classical: permutation of joint indices. Quantum: rows of `[re, im]`
    /// pairs, or one flat row-major list of pairs.
    pub data: Value,
}

#[derive(Debug, Clone)]
pub enum Channel {
    Classical(ClassicalChannel),
    Quantum(UnitaryChannel),
}

impl Channel {
    pub fn model(&self) -> Model {
        match self {
            Channel::Classical(_) => Model::Classical,
            Channel::Quantum(_) => Model::Quantum,
        }
    }

    pub fn total_dim(&self) -> usize {
        match self {
            Channel::Classical(c) => causal_lens::ReversibleChannel::input(c).total_dim(),
            Channel::Quantum(u) => causal_lens::ReversibleChannel::input(u).total_dim(),
        }
    }
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {msg}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| parse_err(path, e))
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            path,
            format!("line {} column {}: {e}", e.line(), e.column()),
        )
    })
}

pub fn read_channel_file(path: &Path) -> Result<ChannelFile, CliError> {
    json(path, &read(path)?)
}

fn quantum_matrix(data: &Value, n: usize) -> Result<CMatrix, String> {
    let rows: Vec<Vec<[f64; 2]>> = match serde_json::from_value::<Vec<Vec<[f64; 2]>>>(data.clone())
    {
        Ok(rows) => rows,
        Err(_) => {
            let flat: Vec<[f64; 2]> = serde_json::from_value(data.clone()).map_err(|_| {
                "quantum data must be rows of [re, im] pairs or a flat list of pairs".to_string()
            })?;
            if flat.len() != n * n {
                return Err(format!(
                    "flat quantum data has {} entries, expected {}",
                    flat.len(),
                    n * n
                ));
            }
            flat.chunks(n).map(<[[f64; 2]]>::to_vec).collect()
        }
    };
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(format!("quantum data must be a {n}x{n} matrix"));
    }
    complex_rows::from_rows(&rows)
}

impl ChannelFile {
    /// Build the channel, converting to `model` if given. Classical files
    /// load as permutation unitaries; quantum files load classically only
    /// when the matrix is a permutation.
    pub fn channel(&self, model: Option<Model>, tol: f64) -> Result<Channel, causal_lens::Error> {
        let input = CompositeSystem::new(self.inputs.clone())?;
        let output = CompositeSystem::new(self.outputs.clone())?;
        let target = model.unwrap_or(self.model);
        match self.model {
            Model::Classical => {
                let table: Vec<usize> =
                    serde_json::from_value(self.data.clone()).map_err(|_| {
                        causal_lens::Error::Invalid(
                            "classical data must be an array of joint indices".into(),
                        )
                    })?;
                let c = ClassicalChannel::new(input, output, table)?;
                Ok(match target {
                    Model::Classical => Channel::Classical(c),
                    Model::Quantum => {
                        Channel::Quantum(UnitaryChannel::from_classical(&c).tolerance(tol))
                    }
                })
            }
            Model::Quantum => {
                let n = input.total_dim();
                let m = quantum_matrix(&self.data, n).map_err(causal_lens::Error::Invalid)?;
                let u = UnitaryChannel::with_tol(input.clone(), output.clone(), m.clone(), tol)?;
                match target {
                    Model::Quantum => Ok(Channel::Quantum(u)),
                    Model::Classical => {
                        let mut table = vec![0; n];
                        for (x, slot) in table.iter_mut().enumerate() {
                            let col = m.column(x);
                            let hits: Vec<usize> =
                                (0..n).filter(|&y| col[y].norm() > tol).collect();
                            match hits.as_slice() {
                                [y] if (col[*y] - num_one()).norm() <= tol => *slot = *y,
                                _ => {
                                    return Err(causal_lens::Error::Invalid(
                                        "matrix is not a permutation; cannot load classically"
                                            .into(),
                                    ))
                                }
                            }
                        }
                        Ok(Channel::Classical(ClassicalChannel::new(
                            input, output, table,
                        )?))
                    }
                }
            }
        }
    }
}

fn num_one() -> causal_lens::quantum::Complex64 {
    causal_lens::quantum::Complex64::new(1.0, 0.0)
}

pub fn load_channel(path: &Path, model: Option<Model>, tol: f64) -> Result<Channel, CliError> {
    let file = read_channel_file(path)?;
    file.channel(model, tol).map_err(|e| match e {
        causal_lens::Error::Budget(m) => CliError::Budget(m),
        other => parse_err(path, other),
    })
}

/// Automaton rule file: `{cell_dim, layers: [[{gate, at}, …], …]}`. A gate
/// is a builtin name or a channel file path relative to the rule file; `at`
/// is a cell index or `{offset, stride}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub cell_dim: usize,
    pub layers: Vec<Vec<RulePlacement>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulePlacement {
    pub gate: String,
    pub at: At,
}

pub fn read_rule_file(path: &Path) -> Result<RuleFile, CliError> {
    json(path, &read(path)?)
}

impl RuleFile {
    pub fn layers(&self, base: &Path, tol: f64) -> Result<Vec<Layer>, CliError> {
        let mut out = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let mut placements = Vec::with_capacity(layer.len());
            for p in layer {
                let gate = match p.gate.parse::<Builtin>() {
                    Ok(b) => Gate::Builtin(b),
                    Err(_) => self.gate_from_file(&base.join(&p.gate), tol)?,
                };
                placements.push(Placement {
                    gate,
                    at: p.at.clone(),
                });
            }
            out.push(placements);
        }
        Ok(out)
    }

    fn gate_from_file(&self, path: &Path, tol: f64) -> Result<Gate, CliError> {
        let file = read_channel_file(path)?;
        if file
            .inputs
            .iter()
            .chain(&file.outputs)
            .any(|l| l.dim != self.cell_dim)
            || file.inputs.len() != file.outputs.len()
        {
            return Err(parse_err(
                path,
                format!(
                    "every gate wire must have the cell dimension {}",
                    self.cell_dim
                ),
            ));
        }
        let arity = file.inputs.len();
        match file.channel(None, tol).map_err(|e| parse_err(path, e))? {
            Channel::Classical(c) => Ok(Gate::Permutation {
                arity,
                table: c.table().to_vec(),
            }),
            Channel::Quantum(u) => Ok(Gate::Unitary {
                arity,
                matrix: u.matrix().clone(),
            }),
        }
    }
}
