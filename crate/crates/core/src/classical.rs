//! Reversible classical channels as permutations of a product alphabet,
//! plus the deterministic and atomic events used as interventions.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ReversibleChannel;
use crate::error::{invalid, Error, Result};
use crate::system::{CompositeSystem, IndexMap, WireSet};

/// A bijection between the joint alphabets of two composite systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalChannel {
    input: CompositeSystem,
    output: CompositeSystem,
    table: Vec<usize>,
}

impl ClassicalChannel {
    pub fn new(input: CompositeSystem, output: CompositeSystem, table: Vec<usize>) -> Result<Self> {
        let n = input.total_dim();
        if output.total_dim() != n {
            return invalid(format!(
                "reversible channel needs equal cardinalities, got {} -> {}",
                input.total_dim(),
                output.total_dim()
            ));
        }
        if table.len() != n {
            return Err(Error::NotBijective(format!(
                "table has {} entries, expected {n}",
                table.len()
            )));
        }
        let mut hit = vec![false; n];
        for (x, &y) in table.iter().enumerate() {
            if y >= n {
                return Err(Error::NotBijective(format!(
                    "entry {x} maps to {y}, outside 0..{n}"
                )));
            }
            if std::mem::replace(&mut hit[y], true) {
                return Err(Error::NotBijective(format!("output {y} is hit twice")));
            }
        }
        Ok(ClassicalChannel {
            input,
            output,
            table,
        })
    }

    /// Build from a function on value tuples.
    pub fn from_fn<F>(input: CompositeSystem, output: CompositeSystem, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Vec<usize>,
    {
        let table = (0..input.total_dim())
            .map(|x| output.flatten(&f(&input.unflatten(x)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(input, output, table)
    }

    /// Uniformly random permutation.
    pub fn random<R: Rng + ?Sized>(
        input: CompositeSystem,
        output: CompositeSystem,
        rng: &mut R,
    ) -> Result<Self> {
        let mut table: Vec<usize> = (0..input.total_dim()).collect();
        table.shuffle(rng);
        Self::new(input, output, table)
    }

    /// Controlled addition `(a, b) ↦ (a, a + b mod d)`; the C-NOT for bits.
    pub fn controlled_not(input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        let d = two_equal_wires(&input, &output, "controlled-not")?;
        Self::from_fn(input, output, |v| vec![v[0], (v[0] + v[1]) % d])
    }

    pub fn swap_gate(input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        two_equal_wires(&input, &output, "swap")?;
        Self::from_fn(input, output, |v| vec![v[1], v[0]])
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply_values(&self, values: &[usize]) -> Result<Vec<usize>> {
        self.output
            .unflatten(self.table[self.input.flatten(values)?])
    }
}

fn two_equal_wires(input: &CompositeSystem, output: &CompositeSystem, what: &str) -> Result<usize> {
    let dims = input.dims();
    if dims.len() != 2 || dims[0] != dims[1] || output.dims() != dims {
        return invalid(format!(
            "{what} needs two wires of equal dimension on both sides"
        ));
    }
    Ok(dims[0])
}

/// Positions of `idle` in both systems, checking names and dimensions match.
pub(crate) fn idle_positions(
    input: &CompositeSystem,
    output: &CompositeSystem,
    idle: &WireSet,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let in_pos = idle.resolve(input)?;
    let out_pos = idle.resolve(output)?;
    // Both lists are sorted by position, so re-key the output side by name.
    let out_by_name: Vec<usize> = in_pos
        .iter()
        .map(|&k| output.position(&input.parts()[k].name).expect("resolved"))
        .collect();
    debug_assert_eq!(out_pos.len(), out_by_name.len());
    for (&i, &o) in in_pos.iter().zip(&out_by_name) {
        if input.parts()[i].dim != output.parts()[o].dim {
            return invalid(format!(
                "idle wire {} has dimension {} at the input but {} at the output",
                input.parts()[i].name,
                input.parts()[i].dim,
                output.parts()[o].dim
            ));
        }
    }
    Ok((in_pos, out_by_name))
}

impl ReversibleChannel for ClassicalChannel {
    fn input(&self) -> &CompositeSystem {
        &self.input
    }

    fn output(&self) -> &CompositeSystem {
        &self.output
    }

    fn identity(system: &CompositeSystem) -> Self {
        ClassicalChannel {
            input: system.clone(),
            output: system.clone(),
            table: (0..system.total_dim()).collect(),
        }
    }

    fn wiring(
        input: &CompositeSystem,
        output: &CompositeSystem,
        sources: &[usize],
    ) -> Result<Self> {
        check_wiring(input, output, sources)?;
        let map = IndexMap::new(input, sources);
        let table = (0..input.total_dim()).map(|x| map.apply(x)).collect();
        Self::new(input.clone(), output.clone(), table)
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        if first.output.dims() != self.input.dims() {
            return invalid(format!(
                "cannot compose: {} feeds {}",
                first.output, self.input
            ));
        }
        let table = first.table.iter().map(|&y| self.table[y]).collect();
        Ok(ClassicalChannel {
            input: first.input.clone(),
            output: self.output.clone(),
            table,
        })
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let d = other.table.len();
        let mut table = Vec::with_capacity(self.table.len() * d);
        for &fx in &self.table {
            table.extend(other.table.iter().map(|&gy| fx * d + gy));
        }
        Ok(ClassicalChannel {
            input: self.input.concat(&other.input)?,
            output: self.output.concat(&other.output)?,
            table,
        })
    }

    fn inverse(&self) -> Self {
        let mut table = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        ClassicalChannel {
            input: self.output.clone(),
            output: self.input.clone(),
            table,
        }
    }

    fn relabel(&self, input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        if !input.same_shape(&self.input) || !output.same_shape(&self.output) {
            return invalid("relabelling must keep the wire dimensions");
        }
        Ok(ClassicalChannel {
            input,
            output,
            table: self.table.clone(),
        })
    }

    /// No signalling iff the `to_out` digits of `u(x)` are fixed by the
    /// digits of `x` outside `from_in`.
    fn signals(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool> {
        let rest = from_in.complement_positions(&self.input)?;
        let target = to_out.resolve(&self.output)?;
        let rest_map = IndexMap::new(&self.input, &rest);
        let target_map = IndexMap::new(&self.output, &target);
        let mut seen: Vec<Option<usize>> = vec![None; self.input.select(&rest).total_dim()];
        for (x, &y) in self.table.iter().enumerate() {
            let r = rest_map.apply(x);
            let t = target_map.apply(y);
            match seen[r] {
                None => seen[r] = Some(t),
                Some(prev) if prev != t => return Ok(true),
                Some(_) => {}
            }
        }
        Ok(false)
    }

    fn factors_as_identity(&self, idle: &WireSet) -> Result<Option<Self>> {
        let (idle_in, idle_out) = idle_positions(&self.input, &self.output, idle)?;
        let rest_in = idle.complement_positions(&self.input)?;
        let rest_out = idle.complement_positions(&self.output)?;
        let w_input = self.input.select(&rest_in);
        let w_output = self.output.select(&rest_out);
        if w_input.total_dim() != w_output.total_dim() {
            return Ok(None);
        }
        let idle_in_map = IndexMap::new(&self.input, &idle_in);
        let idle_out_map = IndexMap::new(&self.output, &idle_out);
        let rest_in_map = IndexMap::new(&self.input, &rest_in);
        let rest_out_map = IndexMap::new(&self.output, &rest_out);
        let mut w: Vec<Option<usize>> = vec![None; w_input.total_dim()];
        for (x, &y) in self.table.iter().enumerate() {
            if idle_in_map.apply(x) != idle_out_map.apply(y) {
                return Ok(None);
            }
            let (r, s) = (rest_in_map.apply(x), rest_out_map.apply(y));
            match w[r] {
                None => w[r] = Some(s),
                Some(prev) if prev != s => return Ok(None),
                Some(_) => {}
            }
        }
        let table = w
            .into_iter()
            .map(|s| s.expect("every rest value occurs"))
            .collect();
        Ok(Some(ClassicalChannel::new(w_input, w_output, table)?))
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

pub(crate) fn check_wiring(
    input: &CompositeSystem,
    output: &CompositeSystem,
    sources: &[usize],
) -> Result<()> {
    if sources.len() != output.len() || input.len() != output.len() {
        return invalid("wiring must map every wire exactly once");
    }
    let mut used = vec![false; input.len()];
    for (k, &s) in sources.iter().enumerate() {
        if s >= input.len() || std::mem::replace(&mut used[s], true) {
            return invalid("wiring sources must be a permutation of the input wires");
        }
        if input.parts()[s].dim != output.parts()[k].dim {
            return invalid(format!(
                "wire {} (dim {}) cannot carry {} (dim {})",
                output.parts()[k].name,
                output.parts()[k].dim,
                input.parts()[s].name,
                input.parts()[s].dim
            ));
        }
    }
    Ok(())
}

/// A deterministic classical event: each input is mapped to one output, or
/// to the null outcome (sub-normalized branch).
///
/// A total table is a deterministic channel; a single defined entry is the
/// atom "measure `i`, prepare `j`".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalInstrument {
    input: CompositeSystem,
    output: CompositeSystem,
    table: Vec<Option<usize>>,
}

impl ClassicalInstrument {
    pub fn new(
        input: CompositeSystem,
        output: CompositeSystem,
        table: Vec<Option<usize>>,
    ) -> Result<Self> {
        if table.len() != input.total_dim() {
            return invalid(format!(
                "instrument table has {} entries, expected {}",
                table.len(),
                input.total_dim()
            ));
        }
        let m = output.total_dim();
        if let Some(bad) = table.iter().flatten().find(|&&j| j >= m) {
            return Err(Error::Index {
                position: 0,
                value: *bad,
                dim: m,
            });
        }
        Ok(ClassicalInstrument {
            input,
            output,
            table,
        })
    }

    /// Deterministic channel given by a (not necessarily bijective) function table.
    pub fn function(
        input: CompositeSystem,
        output: CompositeSystem,
        table: Vec<usize>,
    ) -> Result<Self> {
        Self::new(input, output, table.into_iter().map(Some).collect())
    }

    pub fn constant(input: CompositeSystem, output: CompositeSystem, value: usize) -> Result<Self> {
        let n = input.total_dim();
        Self::function(input, output, vec![value; n])
    }

    /// The atom `A_{i,j}`.
    pub fn atom(
        input: CompositeSystem,
        output: CompositeSystem,
        i: usize,
        j: usize,
    ) -> Result<Self> {
        Self::from_atoms(input, output, &[(i, j)])
    }

    /// Sum of atoms with distinct measured indices.
    pub fn from_atoms(
        input: CompositeSystem,
        output: CompositeSystem,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        if pairs.is_empty() {
            return invalid("an instrument needs at least one atom");
        }
        let n = input.total_dim();
        let mut table = vec![None; n];
        for &(i, j) in pairs {
            if i >= n {
                return Err(Error::Index {
                    position: 0,
                    value: i,
                    dim: n,
                });
            }
            if table[i].replace(j).is_some() {
                return invalid(format!("measured index {i} appears in two atoms"));
            }
        }
        Self::new(input, output, table)
    }

    pub fn from_channel(channel: &ClassicalChannel) -> Self {
        ClassicalInstrument {
            input: channel.input.clone(),
            output: channel.output.clone(),
            table: channel.table.iter().copied().map(Some).collect(),
        }
    }

    pub fn input(&self) -> &CompositeSystem {
        &self.input
    }

    pub fn output(&self) -> &CompositeSystem {
        &self.output
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.table
    }

    pub fn is_deterministic(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    /// Outcome on input `x`; `None` is the null event.
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ClassicalInstrument) -> Result<Self> {
        if first.output.dims() != self.input.dims() {
            return invalid(format!(
                "cannot compose: {} feeds {}",
                first.output, self.input
            ));
        }
        let table = first
            .table
            .iter()
            .map(|y| y.and_then(|y| self.table[y]))
            .collect();
        Ok(ClassicalInstrument {
            input: first.input.clone(),
            output: self.output.clone(),
            table,
        })
    }

    pub fn tensor(&self, other: &ClassicalInstrument) -> Result<Self> {
        let d = other.output.total_dim();
        let mut table = Vec::with_capacity(self.table.len() * other.table.len());
        for fx in &self.table {
            for gy in &other.table {
                table.push(match (fx, gy) {
                    (Some(a), Some(b)) => Some(a * d + b),
                    _ => None,
                });
            }
        }
        Ok(ClassicalInstrument {
            input: self.input.concat(&other.input)?,
            output: self.output.concat(&other.output)?,
            table,
        })
    }

    /// Pad with identities on the wires of `target` not touched, then put
    /// wires in `target` order. Input and output names must coincide.
    pub fn embed(&self, target: &CompositeSystem) -> Result<Self> {
        let acting = WireSet::all(&self.input);
        if acting != WireSet::all(&self.output) {
            return invalid("embedding needs the same wire names on both sides");
        }
        let rest = target.select(&acting.complement_positions(target)?);
        let padded = self.tensor(&Self::from_channel(&ClassicalChannel::identity(&rest)))?;
        let order = target.names();
        let to_padded =
            ClassicalChannel::identity(target).reorder_outputs(&padded.input.names())?;
        let from_padded = ClassicalChannel::identity(&padded.output).reorder_outputs(&order)?;
        Self::from_channel(&from_padded)
            .compose(&padded)?
            .compose(&Self::from_channel(&to_padded))
    }

    /// Equal tables on equally shaped systems (names ignored).
    pub fn same_action(&self, other: &ClassicalInstrument) -> bool {
        self.input.same_shape(&other.input)
            && self.output.same_shape(&other.output)
            && self.table == other.table
    }
}

/// Outcome of `t` on input `x` (`None` for the null event).
pub fn apply_instrument(t: &ClassicalInstrument, x: usize) -> Option<usize> {
    t.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(names: &[&str]) -> CompositeSystem {
        CompositeSystem::from_pairs(&names.iter().map(|n| (*n, 2)).collect::<Vec<_>>()).unwrap()
    }

    fn cnot() -> ClassicalChannel {
        ClassicalChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap()
    }

    #[test]
    fn cnot_is_an_involution() {
        let k = cnot();
        let kk = k
            .relabel(bits(&["A'", "B'"]), bits(&["A''", "B''"]))
            .unwrap()
            .compose(&k)
            .unwrap();
        assert_eq!(kk.table(), &[0, 1, 2, 3]);
        assert_eq!(k.inverse().table(), k.table());
    }

    #[test]
    fn identity_and_swap_composition() {
        let sys = bits(&["A", "B"]);
        let swap = ClassicalChannel::swap_gate(sys.clone(), sys.clone()).unwrap();
        let id = ClassicalChannel::identity(&sys);
        assert_eq!(id.compose(&swap).unwrap(), swap);
        assert_eq!(swap.compose(&swap).unwrap(), id);
        assert_eq!(swap.inverse(), swap);
    }

    #[test]
    fn tensor_with_trivial_and_identities() {
        let k = cnot();
        let trivial = ClassicalChannel::identity(&CompositeSystem::trivial());
        assert_eq!(k.tensor(&trivial).unwrap(), k);
        let id2 = ClassicalChannel::identity(&bits(&["A"]));
        let id2b = ClassicalChannel::identity(&bits(&["B"]));
        assert_eq!(id2.tensor(&id2b).unwrap().table(), &[0, 1, 2, 3]);
    }

    #[test]
    fn swap_tensor_identity_on_three_bits() {
        let ab = bits(&["A", "B"]);
        let swap = ClassicalChannel::swap_gate(ab.clone(), ab).unwrap();
        let u = swap
            .tensor(&ClassicalChannel::identity(&bits(&["C"])))
            .unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    assert_eq!(u.apply_values(&[a, b, c]).unwrap(), vec![b, a, c]);
                }
            }
        }
    }

    #[test]
    fn cyclic_shift_inverse() {
        let t = CompositeSystem::from_pairs(&[("X", 3)]).unwrap();
        let shift = ClassicalChannel::new(t.clone(), t, vec![1, 2, 0]).unwrap();
        assert_eq!(shift.inverse().table(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_non_bijections() {
        let sys = bits(&["A"]);
        assert!(matches!(
            ClassicalChannel::new(sys.clone(), sys.clone(), vec![0, 0]),
            Err(Error::NotBijective(_))
        ));
        let big = bits(&["A", "B"]);
        assert!(ClassicalChannel::new(sys, big, vec![0, 1]).is_err());
    }

    #[test]
    fn cnot_signalling_pattern() {
        let k = cnot();
        let s = |f: &str, t: &str| k.signals(&WireSet::single(f), &WireSet::single(t)).unwrap();
        assert!(!s("B", "A'"));
        assert!(s("A", "B'"));
        assert!(s("A", "A'"));
        assert!(s("B", "B'"));
        let id = ClassicalChannel::identity(&bits(&["A", "B'"]));
        assert!(!id
            .signals(&WireSet::single("A"), &WireSet::single("B'"))
            .unwrap());
    }

    #[test]
    fn signalling_rejects_unknown_wires() {
        assert!(cnot()
            .signals(&WireSet::single("Z"), &WireSet::single("A'"))
            .is_err());
    }

    #[test]
    fn factorization_round_trip_and_failures() {
        let ab = bits(&["A", "B"]);
        let v = ClassicalChannel::controlled_not(ab.clone(), ab.clone()).unwrap();
        let u = v
            .tensor(&ClassicalChannel::identity(&bits(&["C"])))
            .unwrap();
        assert_eq!(
            u.factors_as_identity(&WireSet::single("C")).unwrap(),
            Some(v.clone())
        );

        // C-NOT: B' = a xor b is not b.
        assert_eq!(v.factors_as_identity(&WireSet::single("B")).unwrap(), None);
        // (a xor b, b): B passes through but A' depends on b.
        let back =
            ClassicalChannel::from_fn(ab.clone(), ab.clone(), |x| vec![x[0] ^ x[1], x[1]]).unwrap();
        assert_eq!(
            back.factors_as_identity(&WireSet::single("B")).unwrap(),
            None
        );
        // Fully idle identity leaves a 1x1 factor.
        let id = ClassicalChannel::identity(&ab);
        let w = id.factors_as_identity(&WireSet::all(&ab)).unwrap().unwrap();
        assert_eq!(w.table(), &[0]);
    }

    #[test]
    fn factorization_needs_matching_idle_wires() {
        assert!(cnot().factors_as_identity(&WireSet::single("B")).is_err());
        let a2 = CompositeSystem::from_pairs(&[("A", 2), ("B", 3)]).unwrap();
        let a3 = CompositeSystem::from_pairs(&[("A", 3), ("B", 2)]).unwrap();
        let u = ClassicalChannel::new(a2, a3, (0..6).collect()).unwrap();
        assert!(u.factors_as_identity(&WireSet::single("A")).is_err());
    }

    #[test]
    fn instrument_examples() {
        let bit = bits(&["X"]);
        let zero = ClassicalInstrument::constant(bit.clone(), bit.clone(), 0).unwrap();
        assert_eq!(apply_instrument(&zero, 1), Some(0));
        let atom = ClassicalInstrument::atom(bit.clone(), bit.clone(), 1, 0).unwrap();
        assert_eq!(apply_instrument(&atom, 1), Some(0));
        assert_eq!(apply_instrument(&atom, 0), None);
        let id = ClassicalInstrument::function(bit.clone(), bit.clone(), vec![0, 1]).unwrap();
        assert_eq!(apply_instrument(&id, 1), Some(1));
        assert!(ClassicalInstrument::from_atoms(bit.clone(), bit.clone(), &[]).is_err());
        assert!(ClassicalInstrument::from_atoms(bit.clone(), bit, &[(0, 0), (0, 1)]).is_err());
    }

    #[test]
    fn instrument_embedding_places_wires() {
        let target = bits(&["A", "B", "C"]);
        let flip = ClassicalInstrument::function(bits(&["B"]), bits(&["B"]), vec![1, 0]).unwrap();
        let e = flip.embed(&target).unwrap();
        for x in 0..8 {
            assert_eq!(e.apply(x), Some(x ^ 0b010));
        }
    }

    fn arb_channel() -> impl Strategy<Value = ClassicalChannel> {
        (prop::collection::vec(1usize..=4, 1..=3), any::<u64>()).prop_map(|(dims, seed)| {
            let names = ["P", "Q", "R"];
            let pairs: Vec<_> = dims
                .iter()
                .enumerate()
                .map(|(k, &d)| (names[k], d))
                .collect();
            let sys = CompositeSystem::from_pairs(&pairs).unwrap();
            ClassicalChannel::random(sys.clone(), sys, &mut ChaCha8Rng::seed_from_u64(seed))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn operations_preserve_bijection(u in arb_channel(), v in arb_channel()) {
            let uu = u.compose(&u).unwrap();
            prop_assert!(ClassicalChannel::new(uu.input().clone(), uu.output().clone(), uu.table().to_vec()).is_ok());
            let v = v.relabel(
                v.input().renamed(&v.input().names().iter().map(|n| format!("{n}2")).collect::<Vec<_>>()).unwrap(),
                v.output().renamed(&v.output().names().iter().map(|n| format!("{n}2")).collect::<Vec<_>>()).unwrap(),
            ).unwrap();
            let t = u.tensor(&v).unwrap();
            prop_assert!(ClassicalChannel::new(t.input().clone(), t.output().clone(), t.table().to_vec()).is_ok());
            prop_assert_eq!(u.inverse().compose(&u).unwrap(), ClassicalChannel::identity(u.input()));
        }

        #[test]
        fn factor_reassembles(u in arb_channel()) {
            for name in u.output().names() {
                let idle = WireSet::single(name);
                if let Some(w) = u.factors_as_identity(&idle).unwrap() {
                    let pos = u.input().position(name).unwrap();
                    let idle_sys = u.input().select(&[pos]);
                    let rebuilt = w.tensor(&ClassicalChannel::identity(&idle_sys)).unwrap();
                    let order = u.input().names();
                    let rebuilt = rebuilt.reorder_inputs(&order).unwrap().reorder_outputs(&order).unwrap();
                    prop_assert_eq!(rebuilt, u.clone());
                }
            }
        }

        #[test]
        fn signalling_monotone_in_target(u in arb_channel()) {
            let names: Vec<String> = u.output().names().iter().map(|s| s.to_string()).collect();
            for from in &names {
                let from = WireSet::single(from.clone());
                for t in &names {
                    let small = WireSet::single(t.clone());
                    if u.signals(&from, &small).unwrap() {
                        prop_assert!(u.signals(&from, &WireSet::all(u.output())).unwrap());
                    }
                }
            }
        }

        #[test]
        fn reversible_channels_always_signal_to_everything(u in arb_channel()) {
            for name in u.input().names() {
                if u.input().dim_of(name).unwrap() > 1 {
                    prop_assert!(u.signals(&WireSet::single(name), &WireSet::all(u.output())).unwrap());
                }
            }
        }
    }
}
