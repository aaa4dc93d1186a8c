use serde::{Deserialize, Serialize};

use super::{all_names, fresh_name, validate};
use crate::channel::ReversibleChannel;
use crate::error::Result;
use crate::system::{CompositeSystem, WireSet};

/// The T-process of a channel relative to a probed input subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TProcessResult<C> {
    /// Reversible channel on `(A₁, outputs)`, same system on both sides.
    pub channel: C,
    pub probed: WireSet,
    /// Names of the fresh copies `A₁`, one per probed wire in input order.
    pub copies: Vec<String>,
    /// Largest output subset on which `channel` acts as the identity.
    pub idle_subset: WireSet,
    /// `channel` with the idle wires stripped.
    pub factor: Option<C>,
}

impl<C: ReversibleChannel> TProcessResult<C> {
    /// `N⁺(probed)`: the outputs of the original channel that are not idle.
    pub fn neighbourhood(&self) -> WireSet {
        let outputs = self.outputs();
        WireSet::new(
            outputs
                .names()
                .into_iter()
                .filter(|n| !self.idle_subset.contains(n))
                .map(str::to_string),
        )
    }

    /// The output system of the analysed channel.
    pub fn outputs(&self) -> CompositeSystem {
        let positions: Vec<usize> = (self.copies.len()..self.channel.output().len()).collect();
        self.channel.output().select(&positions)
    }
}

/// `(I_{A₁} ⊗ U) ∘ SWAP_{A₁,A} ∘ (I_{A₁} ⊗ U⁻¹)` on `(A₁, outputs)`.
pub fn t_process<C: ReversibleChannel>(u: &C, probed: &WireSet) -> Result<TProcessResult<C>> {
    let positions = probed.resolve(u.input())?;
    let mut taken = all_names(&[u.input(), u.output()]);
    let originals: Vec<String> = positions
        .iter()
        .map(|&k| u.input().parts()[k].name.clone())
        .collect();
    let copies: Vec<String> = originals
        .iter()
        .map(|n| fresh_name(n, "_1", &mut taken))
        .collect();
    let copy_sys = u.input().select(&positions).renamed(&copies)?;
    let id_copy = C::identity(&copy_sys);

    let undo = id_copy.tensor(&u.inverse())?;
    let swap = C::swap(undo.output(), &copies, &originals)?;
    let redo = id_copy.tensor(u)?;
    let channel = redo.compose(&swap.compose(&undo)?)?;

    let mut idle = WireSet::empty();
    for name in u.output().names() {
        let candidate = idle.union(&WireSet::single(name));
        if channel.factors_as_identity(&candidate)?.is_some() {
            idle = candidate;
        }
    }
    let factor = channel.factors_as_identity(&idle)?;
    debug_assert!(
        factor.is_some(),
        "the empty set and unions of idle wires are idle"
    );
    Ok(TProcessResult {
        channel,
        probed: probed.clone(),
        copies,
        idle_subset: idle,
        factor,
    })
}

/// `N⁺(probed)`.
pub fn neighbourhood<C: ReversibleChannel>(u: &C, probed: &WireSet) -> Result<WireSet> {
    Ok(t_process(u, probed)?.neighbourhood())
}

/// `from_in → to_out`: some wire of `to_out` lies in `N⁺(from_in)`.
pub fn has_causal_influence<C: ReversibleChannel>(
    u: &C,
    from_in: &WireSet,
    to_out: &WireSet,
) -> Result<bool> {
    validate(to_out, u.output())?;
    Ok(!neighbourhood(u, from_in)?.intersection(to_out).is_empty())
}

/// `from_in ⤳ to_out`.
pub fn signalling_relation<C: ReversibleChannel>(
    u: &C,
    from_in: &WireSet,
    to_out: &WireSet,
) -> Result<bool> {
    u.signals(from_in, to_out)
}
