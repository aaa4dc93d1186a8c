//! Reversible cellular automata on rings, built from layers of local gates.
//!
//! Cells are named `c0 … c{n-1}`. A gate placed at cell `i` acts on the
//! consecutive cells `i, i+1, …` modulo the ring size; its first wire is
//! the first of those cells.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::causal::{neighbourhood, CausalModel, Model};
use crate::channel::{embed, ReversibleChannel};
use crate::classical::ClassicalChannel;
use crate::error::{invalid, Error, Result};
use crate::quantum::{CMatrix, UnitaryChannel};
use crate::system::{CompositeSystem, SubsystemLabel, WireSet};

/// Default cap on the state-space dimension of a classical ring.
pub const CLASSICAL_DIM_CAP: usize = 4096;
/// Default cap on the Hilbert-space dimension of a quantum ring.
pub const QUANTUM_DIM_CAP: usize = 64;

pub fn cell_name(i: usize) -> String {
    format!("c{i}")
}

/// Built-in local gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    /// `(a, b) ↦ (a, a + b mod d)`.
    Cnot,
    Swap,
    Identity,
    /// Quantum only, on qubit cells.
    Hadamard,
}

impl std::str::FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnot" => Ok(Builtin::Cnot),
            "swap" => Ok(Builtin::Swap),
            "identity" => Ok(Builtin::Identity),
            "hadamard" => Ok(Builtin::Hadamard),
            other => invalid(format!("unknown gate {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gate {
    Builtin(Builtin),
    /// Permutation of `arity` cells, as a table on the joint index.
    Permutation {
        arity: usize,
        table: Vec<usize>,
    },
    /// Unitary on `arity` cells.
    Unitary {
        arity: usize,
        #[serde(with = "crate::quantum::complex_rows")]
        matrix: CMatrix,
    },
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::Builtin(Builtin::Cnot | Builtin::Swap) => 2,
            Gate::Builtin(Builtin::Identity | Builtin::Hadamard) => 1,
            Gate::Permutation { arity, .. } | Gate::Unitary { arity, .. } => *arity,
        }
    }
}

/// Channel models a ring can be built in.
pub trait RingModel: CausalModel {
    /// The gate on the named cells, same names on both sides.
    fn gate(gate: &Gate, cells: &CompositeSystem) -> Result<Self>;
}

impl RingModel for ClassicalChannel {
    fn gate(gate: &Gate, cells: &CompositeSystem) -> Result<Self> {
        match gate {
            Gate::Builtin(Builtin::Cnot) => {
                ClassicalChannel::controlled_not(cells.clone(), cells.clone())
            }
            Gate::Builtin(Builtin::Swap) => {
                ClassicalChannel::swap_gate(cells.clone(), cells.clone())
            }
            Gate::Builtin(Builtin::Identity) => Ok(ClassicalChannel::identity(cells)),
            Gate::Permutation { table, .. } => {
                ClassicalChannel::new(cells.clone(), cells.clone(), table.clone())
            }
            Gate::Builtin(Builtin::Hadamard) | Gate::Unitary { .. } => {
                invalid("quantum gate in a classical ring")
            }
        }
    }
}

impl RingModel for UnitaryChannel {
    fn gate(gate: &Gate, cells: &CompositeSystem) -> Result<Self> {
        match gate {
            Gate::Builtin(Builtin::Hadamard) => {
                UnitaryChannel::hadamard(cells.clone(), cells.clone())
            }
            Gate::Unitary { matrix, .. } => {
                UnitaryChannel::new(cells.clone(), cells.clone(), matrix.clone())
            }
            classical => Ok(UnitaryChannel::from_classical(&ClassicalChannel::gate(
                classical, cells,
            )?)),
        }
    }
}

/// Start cell of a gate: one cell, or every `stride`-th cell from `offset` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum At {
    Cell(usize),
    Strided { offset: usize, stride: usize },
}

impl At {
    pub fn starts(&self, cells: usize) -> Result<Vec<usize>> {
        match self {
            At::Cell(i) => Ok(vec![i % cells]),
            At::Strided { stride: 0, .. } => invalid("placement stride must be positive"),
            At::Strided { offset, stride } => Ok((*offset..cells).step_by(*stride).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub gate: Gate,
    pub at: At,
}

impl Placement {
    pub fn new(gate: Builtin, at: At) -> Self {
        Placement {
            gate: Gate::Builtin(gate),
            at,
        }
    }
}

/// Gates applied in parallel; they must not share cells.
pub type Layer = Vec<Placement>;

/// Gate instances of a layer with the cells each touches, in gate order.
pub fn layer_supports(layer: &[Placement], cells: usize) -> Result<Vec<(&Gate, Vec<usize>)>> {
    let mut used = vec![false; cells];
    let mut out = Vec::new();
    for p in layer {
        let arity = p.gate.arity();
        if arity == 0 || arity > cells {
            return invalid(format!(
                "gate of arity {arity} does not fit a ring of {cells} cells"
            ));
        }
        for start in p.at.starts(cells)? {
            let support: Vec<usize> = (0..arity).map(|k| (start + k) % cells).collect();
            for &c in &support {
                if used[c] {
                    return invalid(format!("gates overlap on cell {c} within one layer"));
                }
                used[c] = true;
            }
            out.push((&p.gate, support));
        }
    }
    Ok(out)
}

/// Named layouts used in demos and tests.
pub fn preset(name: &str) -> Result<Vec<Layer>> {
    let even = At::Strided {
        offset: 0,
        stride: 2,
    };
    let odd = At::Strided {
        offset: 1,
        stride: 2,
    };
    Ok(match name {
        "staggered-cnot" => vec![
            vec![Placement::new(Builtin::Cnot, even)],
            vec![Placement::new(Builtin::Cnot, odd)],
        ],
        "cnot-layer" => vec![vec![Placement::new(Builtin::Cnot, even)]],
        "swap-chain" => vec![
            vec![Placement::new(Builtin::Swap, even)],
            vec![Placement::new(Builtin::Swap, odd)],
        ],
        "identity" => Vec::new(),
        other => return invalid(format!("unknown preset {other}")),
    })
}

pub const PRESETS: [&str; 4] = ["staggered-cnot", "cnot-layer", "swap-chain", "identity"];

/// One step of a ring automaton together with the layout that built it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingAutomaton<C> {
    pub cells: usize,
    pub cell_dim: usize,
    pub layers: Vec<Layer>,
    pub step: C,
}

pub fn ring_system(cells: usize, cell_dim: usize) -> Result<CompositeSystem> {
    CompositeSystem::new(
        (0..cells)
            .map(|i| SubsystemLabel::new(cell_name(i), cell_dim))
            .collect(),
    )
}

fn check_size(cells: usize, cell_dim: usize, cap: usize) -> Result<()> {
    if cells < 2 || cell_dim < 2 {
        return invalid("a ring needs at least 2 cells of dimension at least 2");
    }
    match cell_dim.checked_pow(cells as u32) {
        Some(d) if d <= cap => Ok(()),
        _ => Err(Error::Budget(format!(
            "{cell_dim}^{cells} exceeds the dimension cap {cap}"
        ))),
    }
}

/// Layers applied in order, each a product of its gates.
pub fn build_ring<C: RingModel>(
    layers: &[Layer],
    cells: usize,
    cell_dim: usize,
    cap: usize,
) -> Result<RingAutomaton<C>> {
    check_size(cells, cell_dim, cap)?;
    let ring = ring_system(cells, cell_dim)?;
    let mut step = C::identity(&ring);
    for layer in layers {
        for (gate, support) in layer_supports(layer, cells)? {
            let local = CompositeSystem::new(
                support
                    .iter()
                    .map(|&c| SubsystemLabel::new(cell_name(c), cell_dim))
                    .collect(),
            )?;
            step = embed(&C::gate(gate, &local)?, &ring)?.compose(&step)?;
        }
    }
    Ok(RingAutomaton {
        cells,
        cell_dim,
        layers: layers.to_vec(),
        step,
    })
}

impl RingAutomaton<ClassicalChannel> {
    /// The same layout with every gate replaced by its permutation unitary.
    pub fn quantize(&self, cap: usize) -> Result<RingAutomaton<UnitaryChannel>> {
        check_size(self.cells, self.cell_dim, cap)?;
        Ok(RingAutomaton {
            cells: self.cells,
            cell_dim: self.cell_dim,
            layers: self.layers.clone(),
            step: UnitaryChannel::from_classical(&self.step),
        })
    }
}

impl<C: CausalModel> RingAutomaton<C> {
    pub fn system(&self) -> &CompositeSystem {
        self.step.input()
    }

    /// `step` applied `steps` times.
    pub fn iterate(&self, steps: usize) -> Result<C> {
        let mut out = C::identity(self.system());
        for _ in 0..steps {
            out = self.step.compose(&out)?;
        }
        Ok(out)
    }

    /// Cells reachable from `cell` through gate supports in `steps` steps.
    pub fn light_cone(&self, cell: usize, steps: usize) -> Result<BTreeSet<usize>> {
        let mut reached = BTreeSet::from([cell]);
        for _ in 0..steps {
            for layer in &self.layers {
                for (_, support) in layer_supports(layer, self.cells)? {
                    if support.iter().any(|c| reached.contains(c)) {
                        reached.extend(support);
                    }
                }
            }
        }
        Ok(reached)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellNeighbourhood {
    pub cell: usize,
    pub causal: Vec<usize>,
    pub signalling: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourhoodMap {
    pub model: Model,
    pub steps: usize,
    pub cells: Vec<CellNeighbourhood>,
}

impl NeighbourhoodMap {
    /// Signalling set ⊆ causal set for every cell.
    pub fn nested(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.signalling.iter().all(|s| c.causal.contains(s)))
    }
}

fn cell_indices(set: &WireSet) -> Vec<usize> {
    let mut v: Vec<usize> = set
        .names()
        .filter_map(|n| n.strip_prefix('c')?.parse().ok())
        .collect();
    v.sort_unstable();
    v
}

fn neighbourhoods_of<C: CausalModel>(
    channel: &C,
    model: Model,
    cells: usize,
    steps: usize,
) -> Result<NeighbourhoodMap> {
    let mut out = Vec::with_capacity(cells);
    for i in 0..cells {
        let probe = WireSet::single(cell_name(i));
        let causal = cell_indices(&neighbourhood(channel, &probe)?);
        let mut signalling = Vec::new();
        for j in 0..cells {
            if channel.signals(&probe, &WireSet::single(cell_name(j)))? {
                signalling.push(j);
            }
        }
        out.push(CellNeighbourhood {
            cell: i,
            causal,
            signalling,
        });
    }
    Ok(NeighbourhoodMap {
        model,
        steps,
        cells: out,
    })
}

/// Per-cell causal `N⁺` and signalling set of `step^steps`.
pub fn neighbourhood_map<C: CausalModel>(
    a: &RingAutomaton<C>,
    steps: usize,
    cap: usize,
) -> Result<NeighbourhoodMap> {
    if steps == 0 {
        return invalid("steps must be at least 1");
    }
    check_size(a.cells, a.cell_dim, cap)?;
    neighbourhoods_of(&a.iterate(steps)?, C::MODEL, a.cells, steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRow {
    pub step: usize,
    /// Size of the causal cone of each cell.
    pub causal: Vec<usize>,
    pub signalling: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeGrowth {
    pub model: Model,
    pub rows: Vec<ConeRow>,
    /// Whether every cell's causal cone size is non-decreasing in the step.
    pub monotone: bool,
}

/// Cone sizes for steps `1..=max_steps`, composing one step at a time.
pub fn cone_growth<C: CausalModel>(
    a: &RingAutomaton<C>,
    max_steps: usize,
    cap: usize,
) -> Result<ConeGrowth> {
    check_size(a.cells, a.cell_dim, cap)?;
    let mut rows = Vec::with_capacity(max_steps);
    let mut current = C::identity(a.system());
    for step in 1..=max_steps {
        current = a.step.compose(&current)?;
        let map = neighbourhoods_of(&current, C::MODEL, a.cells, step)?;
        rows.push(ConeRow {
            step,
            causal: map.cells.iter().map(|c| c.causal.len()).collect(),
            signalling: map.cells.iter().map(|c| c.signalling.len()).collect(),
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[0].causal.iter().zip(&w[1].causal).all(|(x, y)| x <= y));
    Ok(ConeGrowth {
        model: C::MODEL,
        rows,
        monotone,
    })
}
