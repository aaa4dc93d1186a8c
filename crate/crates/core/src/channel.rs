//! The contract shared by the classical and quantum channel models.

use std::fmt;

use crate::error::{invalid, Result};
use crate::system::{CompositeSystem, WireSet};

/// A reversible channel between two named composite systems.
///
/// Implemented by [`ClassicalChannel`](crate::ClassicalChannel) and
/// [`UnitaryChannel`](crate::UnitaryChannel); every causal analysis is written
/// once against this trait.
pub trait ReversibleChannel: Clone + fmt::Debug + Sized {
    fn input(&self) -> &CompositeSystem;
    fn output(&self) -> &CompositeSystem;

    fn identity(system: &CompositeSystem) -> Self;

    /// Pure rewiring: output wire `k` carries input wire `sources[k]`.
    /// Paired wires must have equal dimension.
    fn wiring(input: &CompositeSystem, output: &CompositeSystem, sources: &[usize])
        -> Result<Self>;

    /// `self ∘ first`: apply `first`, then `self`.
    fn compose(&self, first: &Self) -> Result<Self>;

    /// Parallel composition, `self` on top.
    fn tensor(&self, other: &Self) -> Result<Self>;

    fn inverse(&self) -> Self;

    /// Same action, renamed systems of identical shape.
    fn relabel(&self, input: CompositeSystem, output: CompositeSystem) -> Result<Self>;

    /// Whether choices at `from_in` can change the marginal on `to_out`.
    fn signals(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool>;

    /// If the channel is `W ⊗ I` on the wires named in `idle` (present on
    /// both sides with equal dimensions), returns `W` on the remaining wires.
    fn factors_as_identity(&self, idle: &WireSet) -> Result<Option<Self>>;

    /// Equality of systems and action (exact classically, within tolerance
    /// for unitaries).
    fn approx_eq(&self, other: &Self) -> bool;

    /// Exchange the wires named in `left` with those in `right`, pairwise in
    /// the order given.
    fn swap(system: &CompositeSystem, left: &[String], right: &[String]) -> Result<Self> {
        if left.len() != right.len() {
            return invalid("swap needs equally many wires on both sides");
        }
        let mut sources: Vec<usize> = (0..system.len()).collect();
        for (l, r) in left.iter().zip(right) {
            let (Some(i), Some(j)) = (system.position(l), system.position(r)) else {
                return invalid(format!("cannot swap {l} and {r}: not both in {system}"));
            };
            sources.swap(i, j);
        }
        Self::wiring(system, system, &sources)
    }

    /// Reorder the input wires, keeping the action.
    fn reorder_inputs<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Self> {
        let target = self.input().reordered(new_order)?;
        let wires = Self::wiring(&target, self.input(), &positions_in(&target, self.input()))?;
        self.compose(&wires)
    }

    /// Reorder the output wires, keeping the action.
    fn reorder_outputs<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Self> {
        let target = self.output().reordered(new_order)?;
        let sources = positions_in(self.output(), &target);
        let wires = Self::wiring(self.output(), &target, &sources)?;
        wires.compose(self)
    }
}

/// Position in `from` of each part of `to`, matched by name.
pub(crate) fn positions_in(from: &CompositeSystem, to: &CompositeSystem) -> Vec<usize> {
    to.names()
        .iter()
        .map(|n| from.position(n).expect("same names"))
        .collect()
}

/// Embed `channel` into the larger system `target` (same system on both
/// sides), padding every wire it does not touch with the identity.
///
/// Input and output names of `channel` must coincide as sets and be part of
/// `target`.
pub fn embed<C: ReversibleChannel>(channel: &C, target: &CompositeSystem) -> Result<C> {
    let acting = WireSet::all(channel.input());
    if acting != WireSet::all(channel.output()) {
        return invalid("embedding needs a channel with the same wire names on both sides");
    }
    let rest_pos = acting.complement_positions(target)?;
    let rest = target.select(&rest_pos);
    let padded = channel.tensor(&C::identity(&rest))?;
    let order: Vec<&str> = target.names();
    padded.reorder_inputs(&order)?.reorder_outputs(&order)
}
