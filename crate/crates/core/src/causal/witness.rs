use serde::{Deserialize, Serialize};

use super::{has_causal_influence, CausalModel};
use crate::error::{invalid, Result};
use crate::quantum::{FactorizationDefect, SignallingDefect};
use crate::system::WireSet;

pub use crate::oracle::{Intervention, InterventionDefect, InterventionKind};

/// A concrete violation of no-causal-influence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Classical: an intervention whose image after the evolution is not of
    /// the form `𝒜' ⊗ I` on the target, with the failing input.
    Intervention {
        intervention: Intervention,
        defect: InterventionDefect,
    },
    /// Quantum: a matrix-unit pair or a matrix entry breaking the pattern.
    FactorizationDefect { detail: QuantumDefect },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "kebab-case")]
pub enum QuantumDefect {
    /// The source signals to the target.
    SignallingIdentity(SignallingDefect),
    /// Entry of the T-process breaking `W ⊗ I` on the target.
    TensorIdentity(FactorizationDefect),
}

/// Witness for `from_in → to_out`; the relation must hold.
pub fn find_witness<C: CausalModel>(u: &C, from_in: &WireSet, to_out: &WireSet) -> Result<Witness> {
    if !has_causal_influence(u, from_in, to_out)? {
        return invalid(format!(
            "{from_in} has no causal influence on {to_out}; nothing to witness"
        ));
    }
    u.witness(from_in, to_out)
}
