//! Causal influence, signalling and the relations between them.
//!
//! Causal influence from an input subset `A` to an output subset `B'` is
//! decided through the T-process: a fresh copy `A₁` of `A` is swapped into
//! the input slot between `U⁻¹` and `U`. The outputs of `U` on which the
//! resulting channel acts as the identity form the idle subset; every other
//! output is causally influenced by `A` and makes up the neighbourhood
//! `N⁺(A)`.

mod hierarchy;
mod memory;
mod models;
mod niwd;
mod tprocess;
mod witness;

pub use hierarchy::{hierarchy_report, HierarchyReport};
pub use memory::{memory_decomposition, MemoryDecomposition, QuantumMap};
pub use niwd::{check_interaction_without_disturbance, NiwdClassification, NiwdVerdict};
pub use tprocess::{
    has_causal_influence, neighbourhood, signalling_relation, t_process, TProcessResult,
};
pub use witness::{
    find_witness, Intervention, InterventionDefect, InterventionKind, QuantumDefect, Witness,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::channel::ReversibleChannel;
use crate::error::Result;
use crate::system::{CompositeSystem, WireSet};

/// Which channel model a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Classical,
    Quantum,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Classical => "classical",
            Model::Quantum => "quantum",
        })
    }
}

/// Per-model parts of the causal analysis.
pub trait CausalModel: ReversibleChannel {
    const MODEL: Model;

    /// Splits the channel through an environment so that `from_in` never
    /// reaches `idle_out`; `None` when no such split exists.
    fn memory_decomposition(
        &self,
        from_in: &WireSet,
        idle_out: &WireSet,
    ) -> Result<Option<MemoryDecomposition>>;

    /// Discarding the `discarded` outputs leaves the identity on the other
    /// wires, which carry the same names on both sides.
    fn discarding_leaves_identity(&self, discarded: &WireSet) -> Result<bool>;

    /// With `C` the reduced channel from the rest of the inputs to `to_out`,
    /// checks that `C ∘ (discard from_in) ∘ U⁻¹` equals discarding the other
    /// outputs. Requires that `from_in` does not signal to `to_out`.
    fn inverse_nosignalling_check(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool>;

    /// A concrete violation of no-causal-influence.
    fn witness(&self, from_in: &WireSet, to_out: &WireSet) -> Result<Witness>;

    /// Whether `witness` still exhibits the violation on this channel.
    fn replay_witness(
        &self,
        from_in: &WireSet,
        to_out: &WireSet,
        witness: &Witness,
    ) -> Result<bool>;
}

/// A name not in `taken`, derived from `base`.
pub(crate) fn fresh_name(base: &str, suffix: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = format!("{base}{suffix}");
    let mut n = 2;
    while taken.contains(&name) {
        name = format!("{base}{suffix}{n}");
        n += 1;
    }
    taken.insert(name.clone());
    name
}

pub(crate) fn all_names(systems: &[&CompositeSystem]) -> BTreeSet<String> {
    systems
        .iter()
        .flat_map(|s| s.names().into_iter().map(str::to_string))
        .collect()
}

/// Check that `subset` names only outputs (or inputs) of `system`.
pub(crate) fn validate(subset: &WireSet, system: &CompositeSystem) -> Result<()> {
    subset.resolve(system).map(|_| ())
}
