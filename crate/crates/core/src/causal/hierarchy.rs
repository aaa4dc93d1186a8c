use serde::{Deserialize, Serialize};

use super::{has_causal_influence, validate, CausalModel, Model, Witness};
use crate::error::Result;
use crate::system::WireSet;

/// The three relations for one bipartition, each computed on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub model: Model,
    pub from_in: WireSet,
    pub to_out: WireSet,
    pub causal_influence: bool,
    pub memory_decomposable: bool,
    pub signalling: bool,
    /// `¬causal ⇒ memory` and `memory ⇒ ¬signalling`.
    pub consistent: bool,
    pub witness: Option<Witness>,
}

impl HierarchyReport {
    pub fn chain_holds(causal: bool, memory: bool, signalling: bool) -> bool {
        (causal || memory) && (!memory || !signalling)
    }
}

pub fn hierarchy_report<C: CausalModel>(
    u: &C,
    from_in: &WireSet,
    to_out: &WireSet,
) -> Result<HierarchyReport> {
    validate(from_in, u.input())?;
    validate(to_out, u.output())?;
    let causal_influence = has_causal_influence(u, from_in, to_out)?;
    let memory_decomposable = u.memory_decomposition(from_in, to_out)?.is_some();
    let signalling = u.signals(from_in, to_out)?;
    let witness = if causal_influence {
        Some(u.witness(from_in, to_out)?)
    } else {
        None
    };
    Ok(HierarchyReport {
        model: C::MODEL,
        from_in: from_in.clone(),
        to_out: to_out.clone(),
        causal_influence,
        memory_decomposable,
        signalling,
        consistent: HierarchyReport::chain_holds(causal_influence, memory_decomposable, signalling),
        witness,
    })
}
