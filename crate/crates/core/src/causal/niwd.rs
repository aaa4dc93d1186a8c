use serde::{Deserialize, Serialize};

use super::{has_causal_influence, CausalModel, Model};
use crate::error::{invalid, Result};
use crate::system::WireSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NiwdVerdict {
    NoInteraction,
    InteractionWithoutDisturbanceWitness,
    Disturbing,
}

impl std::fmt::Display for NiwdVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NiwdVerdict::NoInteraction => "no-interaction",
            NiwdVerdict::InteractionWithoutDisturbanceWitness => {
                "interaction-without-disturbance witness"
            }
            NiwdVerdict::Disturbing => "disturbing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiwdClassification {
    pub model: Model,
    pub a_side: WireSet,
    pub b_side: WireSet,
    /// Discarding the `A` output leaves the identity on `B`.
    pub premise_holds: bool,
    /// `U = V ⊗ I_B`.
    pub factorizes: bool,
    pub verdict: NiwdVerdict,
    /// `A → B` influence, checked when the premise holds without factorizing.
    pub forced_influence: Option<bool>,
}

impl NiwdClassification {
    /// An undisturbed `B` that still interacts must be influenced by `A`.
    pub fn consistent(&self) -> bool {
        self.forced_influence != Some(false)
    }
}

/// Classify `u` on `(A, B) → (A, B)`. Outputs named differently from the
/// inputs are matched position by position.
pub fn check_interaction_without_disturbance<C: CausalModel>(
    u: &C,
    a_side: &WireSet,
) -> Result<NiwdClassification> {
    let input = u.input();
    if input.dims() != u.output().dims() {
        return invalid(format!(
            "input {input} and output {} do not match wire by wire",
            u.output()
        ));
    }
    a_side.resolve(input)?;
    let u = if input.names() == u.output().names() {
        u.clone()
    } else {
        u.relabel(input.clone(), input.clone())?
    };
    let b_side = a_side.complement(input)?;
    if a_side.is_empty() || b_side.is_empty() {
        return invalid("both sides of the interaction must be non-empty");
    }
    let premise_holds = u.discarding_leaves_identity(a_side)?;
    let factorizes = u.factors_as_identity(&b_side)?.is_some();
    let (verdict, forced_influence) = match (premise_holds, factorizes) {
        (true, true) => (NiwdVerdict::NoInteraction, None),
        (true, false) => (
            NiwdVerdict::InteractionWithoutDisturbanceWitness,
            Some(has_causal_influence(&u, a_side, &b_side)?),
        ),
        (false, _) => (NiwdVerdict::Disturbing, None),
    };
    Ok(NiwdClassification {
        model: C::MODEL,
        a_side: a_side.clone(),
        b_side,
        premise_holds,
        factorizes,
        verdict,
        forced_influence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ReversibleChannel;
    use crate::classical::ClassicalChannel;
    use crate::quantum::UnitaryChannel;
    use crate::system::CompositeSystem;

    fn ab() -> CompositeSystem {
        CompositeSystem::from_pairs(&[("A", 2), ("B", 2)]).unwrap()
    }

    #[test]
    fn xor_back_is_a_witness() {
        let u = ClassicalChannel::from_fn(ab(), ab(), |v| vec![v[0] ^ v[1], v[1]]).unwrap();
        let c = check_interaction_without_disturbance(&u, &WireSet::single("A")).unwrap();
        assert!(c.premise_holds && !c.factorizes);
        assert_eq!(c.verdict, NiwdVerdict::InteractionWithoutDisturbanceWitness);
        assert_eq!(c.forced_influence, Some(true));
        // Quantum kickback dephases B, so the premise fails.
        let q = check_interaction_without_disturbance(
            &UnitaryChannel::from_classical(&u),
            &WireSet::single("A"),
        )
        .unwrap();
        assert!(!q.premise_holds);
        assert_eq!(q.verdict, NiwdVerdict::Disturbing);
    }

    #[test]
    fn identity_and_cnot() {
        let id = ClassicalChannel::identity(&ab());
        let c = check_interaction_without_disturbance(&id, &WireSet::single("A")).unwrap();
        assert_eq!(c.verdict, NiwdVerdict::NoInteraction);

        let out = CompositeSystem::from_pairs(&[("A'", 2), ("B'", 2)]).unwrap();
        let k = ClassicalChannel::controlled_not(ab(), out).unwrap();
        let c = check_interaction_without_disturbance(&k, &WireSet::single("A")).unwrap();
        assert!(!c.premise_holds);
        assert_eq!(c.verdict, NiwdVerdict::Disturbing);
    }

    #[test]
    fn shape_mismatch() {
        let input = CompositeSystem::from_pairs(&[("A", 2), ("B", 3)]).unwrap();
        let output = CompositeSystem::from_pairs(&[("A", 3), ("B", 2)]).unwrap();
        let u = ClassicalChannel::new(input, output, (0..6).collect()).unwrap();
        assert!(check_interaction_without_disturbance(&u, &WireSet::single("A")).is_err());
    }
}
