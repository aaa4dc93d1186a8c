//! Composite systems made of named finite subsystems.
//!
//! Joint indices use big-endian mixed-radix order: the leftmost subsystem is
//! the most significant digit, so a circuit read top to bottom matches the
//! order of the digits. The trivial system is the empty composite with total
//! dimension 1.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// One named subsystem with its alphabet size (classical) or Hilbert
/// dimension (quantum).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemLabel {
    pub name: String,
    pub dim: usize,
}

impl SubsystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        SubsystemLabel {
            name: name.into(),
            dim,
        }
    }
}

/// Ordered sequence of named subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SubsystemLabel>", into = "Vec<SubsystemLabel>")]
pub struct CompositeSystem {
    parts: Vec<SubsystemLabel>,
}

impl TryFrom<Vec<SubsystemLabel>> for CompositeSystem {
    type Error = Error;

    fn try_from(parts: Vec<SubsystemLabel>) -> Result<Self> {
        CompositeSystem::new(parts)
    }
}

impl From<CompositeSystem> for Vec<SubsystemLabel> {
    fn from(system: CompositeSystem) -> Self {
        system.parts
    }
}

impl CompositeSystem {
    pub fn new(parts: Vec<SubsystemLabel>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for part in &parts {
            if part.dim == 0 {
                return invalid(format!("subsystem {} has dimension 0", part.name));
            }
            if part.name.is_empty() {
                return invalid("subsystem names must be non-empty");
            }
            if !seen.insert(part.name.as_str()) {
                return invalid(format!("duplicate subsystem name {}", part.name));
            }
        }
        Ok(CompositeSystem { parts })
    }

    /// Shorthand for `new` from `(name, dim)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, d)| SubsystemLabel::new(n.as_ref(), *d))
                .collect(),
        )
    }

    /// The trivial system I.
    pub fn trivial() -> Self {
        CompositeSystem { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[SubsystemLabel] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim).product()
    }

    /// Same as [`total_dim`](Self::total_dim) but reports overflow.
    pub fn checked_total_dim(&self) -> Option<usize> {
        self.parts
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.dim))
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.parts.iter().position(|p| p.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn dim_of(&self, name: &str) -> Option<usize> {
        self.position(name).map(|k| self.parts[k].dim)
    }

    /// Dimensions agree position by position (names ignored).
    pub fn same_shape(&self, other: &CompositeSystem) -> bool {
        self.dims() == other.dims()
    }

    /// Parallel composition: `self` followed by `other`.
    pub fn concat(&self, other: &CompositeSystem) -> Result<Self> {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Self::new(parts)
    }

    /// Sub-system made of the parts at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> Self {
        CompositeSystem {
            parts: positions.iter().map(|&k| self.parts[k].clone()).collect(),
        }
    }

    /// Same dims, new names.
    pub fn renamed<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        if names.len() != self.parts.len() {
            return invalid(format!(
                "renaming needs {} names, got {}",
                self.parts.len(),
                names.len()
            ));
        }
        Self::new(
            self.parts
                .iter()
                .zip(names)
                .map(|(p, n)| SubsystemLabel::new(n.as_ref(), p.dim))
                .collect(),
        )
    }

    /// Mixed-radix place value of each part.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.parts.len()];
        for k in (0..self.parts.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.parts[k + 1].dim;
        }
        strides
    }

    pub fn flatten(&self, values: &[usize]) -> Result<usize> {
        if values.len() != self.parts.len() {
            return invalid(format!(
                "expected {} components, got {}",
                self.parts.len(),
                values.len()
            ));
        }
        let mut index = 0;
        for (position, (part, &value)) in self.parts.iter().zip(values).enumerate() {
            if value >= part.dim {
                return Err(Error::Index {
                    position,
                    value,
                    dim: part.dim,
                });
            }
            index = index * part.dim + value;
        }
        Ok(index)
    }

    pub fn unflatten(&self, index: usize) -> Result<Vec<usize>> {
        let total = self.total_dim();
        if index >= total {
            return Err(Error::Index {
                position: 0,
                value: index,
                dim: total,
            });
        }
        let mut values = vec![0; self.parts.len()];
        let mut rest = index;
        for k in (0..self.parts.len()).rev() {
            values[k] = rest % self.parts[k].dim;
            rest /= self.parts[k].dim;
        }
        Ok(values)
    }

    /// Bijection on joint indices induced by reordering the parts.
    ///
    /// Entry `x` holds the joint index, in the reordered system, of the
    /// state whose index in `self` is `x`.
    pub fn reorder_permutation<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Vec<usize>> {
        let positions = self.order_positions(new_order)?;
        let map = IndexMap::new(self, &positions);
        Ok((0..self.total_dim()).map(|x| map.apply(x)).collect())
    }

    /// The system with its parts rearranged to `new_order`.
    pub fn reordered<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Self> {
        Ok(self.select(&self.order_positions(new_order)?))
    }

    fn order_positions<S: AsRef<str>>(&self, new_order: &[S]) -> Result<Vec<usize>> {
        if new_order.len() != self.parts.len() {
            return invalid(format!(
                "new order has {} names but the system has {} parts",
                new_order.len(),
                self.parts.len()
            ));
        }
        let mut used = vec![false; self.parts.len()];
        let mut positions = Vec::with_capacity(new_order.len());
        for name in new_order {
            let name = name.as_ref();
            let k = self
                .position(name)
                .ok_or_else(|| Error::Invalid(format!("unknown subsystem {name}")))?;
            if used[k] {
                return invalid(format!("subsystem {name} listed twice"));
            }
            used[k] = true;
            positions.push(k);
        }
        Ok(positions)
    }
}

impl fmt::Display for CompositeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| format!("{}:{}", p.name, p.dim))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Projection of joint indices of a system onto a selection of its parts.
///
/// `apply(x)` returns the joint index, in `system.select(positions)`, of the
/// digits of `x` at `positions`.
#[derive(Debug, Clone)]
pub(crate) struct IndexMap {
    source_strides: Vec<usize>,
    source_dims: Vec<usize>,
    target_strides: Vec<usize>,
}

impl IndexMap {
    pub(crate) fn new(system: &CompositeSystem, positions: &[usize]) -> Self {
        let strides = system.strides();
        let dims = system.dims();
        let target = system.select(positions);
        IndexMap {
            source_strides: positions.iter().map(|&k| strides[k]).collect(),
            source_dims: positions.iter().map(|&k| dims[k]).collect(),
            target_strides: target.strides(),
        }
    }

    #[inline]
    pub(crate) fn apply(&self, x: usize) -> usize {
        let mut out = 0;
        for k in 0..self.source_strides.len() {
            let digit = (x / self.source_strides[k]) % self.source_dims[k];
            out += digit * self.target_strides[k];
        }
        out
    }
}

/// Joint indices of `system` split into two groups of parts:
/// `table[f][r]` is the joint index whose digits at `first` spell `f` and
/// whose digits at `second` spell `r` (each in selection order).
pub(crate) fn split_index_table(
    system: &CompositeSystem,
    first: &[usize],
    second: &[usize],
) -> Vec<Vec<usize>> {
    let f_map = IndexMap::new(system, first);
    let r_map = IndexMap::new(system, second);
    let nf = system.select(first).total_dim();
    let nr = system.select(second).total_dim();
    let mut table = vec![vec![0; nr]; nf];
    for x in 0..system.total_dim() {
        table[f_map.apply(x)][r_map.apply(x)] = x;
    }
    table
}

/// A set of subsystem names, resolved against a system when used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WireSet {
    names: BTreeSet<String>,
}

impl WireSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        WireSet {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn empty() -> Self {
        WireSet {
            names: BTreeSet::new(),
        }
    }

    pub fn single(name: impl Into<String>) -> Self {
        Self::new([name.into()])
    }

    /// Parse a comma-separated name list; blanks are ignored.
    pub fn parse_list(list: &str) -> Self {
        Self::new(list.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    /// All parts of a system.
    pub fn all(system: &CompositeSystem) -> Self {
        Self::new(system.names())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn union(&self, other: &WireSet) -> WireSet {
        WireSet {
            names: self.names.union(&other.names).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &WireSet) -> WireSet {
        WireSet {
            names: self.names.intersection(&other.names).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &WireSet) -> bool {
        self.names.is_subset(&other.names)
    }

    /// Check membership against `system` and return positions in system order.
    pub fn resolve(&self, system: &CompositeSystem) -> Result<Vec<usize>> {
        for name in &self.names {
            if !system.contains(name) {
                return invalid(format!("subsystem {name} is not part of {system}"));
            }
        }
        Ok((0..system.len())
            .filter(|&k| self.names.contains(&system.parts()[k].name))
            .collect())
    }

    /// Positions of the parts of `system` not in this subset.
    pub fn complement_positions(&self, system: &CompositeSystem) -> Result<Vec<usize>> {
        self.resolve(system)?;
        Ok((0..system.len())
            .filter(|&k| !self.names.contains(&system.parts()[k].name))
            .collect())
    }

    pub fn complement(&self, system: &CompositeSystem) -> Result<WireSet> {
        let positions = self.complement_positions(system)?;
        Ok(WireSet::new(
            positions
                .into_iter()
                .map(|k| system.parts()[k].name.clone()),
        ))
    }
}

impl fmt::Display for WireSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names().collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(dims: &[usize]) -> CompositeSystem {
        let names = ["A", "B", "C", "D", "E"];
        CompositeSystem::from_pairs(
            &dims
                .iter()
                .enumerate()
                .map(|(k, &d)| (names[k], d))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(sys(&[2, 2]).flatten(&[1, 0]).unwrap(), 2);
        assert_eq!(sys(&[2, 3]).flatten(&[1, 2]).unwrap(), 5);
        assert_eq!(CompositeSystem::trivial().flatten(&[]).unwrap(), 0);
        assert_eq!(CompositeSystem::trivial().total_dim(), 1);
    }

    #[test]
    fn flatten_out_of_range_reports_position() {
        let err = sys(&[2, 3]).flatten(&[1, 3]).unwrap_err();
        assert_eq!(
            err,
            Error::Index {
                position: 1,
                value: 3,
                dim: 3
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_zero_dims() {
        assert!(CompositeSystem::from_pairs(&[("A", 2), ("A", 2)]).is_err());
        assert!(CompositeSystem::from_pairs(&[("A", 0)]).is_err());
    }

    #[test]
    fn swap_of_two_bits() {
        assert_eq!(
            sys(&[2, 2]).reorder_permutation(&["B", "A"]).unwrap(),
            vec![0, 2, 1, 3]
        );
    }

    #[test]
    fn swap_of_bit_and_trit() {
        let system = sys(&[2, 3]);
        let perm = system.reorder_permutation(&["B", "A"]).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                assert_eq!(perm[a * 3 + b], b * 2 + a);
            }
        }
    }

    #[test]
    fn identity_order_is_identity() {
        let perm = sys(&[2, 3, 2])
            .reorder_permutation(&["A", "B", "C"])
            .unwrap();
        assert_eq!(perm, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn bad_orders_are_rejected() {
        let system = sys(&[2, 2]);
        assert!(system.reorder_permutation(&["A", "A"]).is_err());
        assert!(system.reorder_permutation(&["A", "Z"]).is_err());
        assert!(system.reorder_permutation(&["A"]).is_err());
    }

    #[test]
    fn subsets_resolve_in_system_order() {
        let system = sys(&[2, 3, 4]);
        let subset = WireSet::parse_list("C, A");
        assert_eq!(subset.resolve(&system).unwrap(), vec![0, 2]);
        assert_eq!(subset.complement_positions(&system).unwrap(), vec![1]);
        assert!(WireSet::single("Q").resolve(&system).is_err());
    }

    fn arb_dims() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(1usize..=4, 0..=4)
    }

    proptest! {
        #[test]
        fn flatten_unflatten_bijection(dims in arb_dims()) {
            let system = sys(&dims);
            for x in 0..system.total_dim() {
                let values = system.unflatten(x).unwrap();
                prop_assert_eq!(system.flatten(&values).unwrap(), x);
            }
        }

        #[test]
        fn reorder_then_inverse_is_identity(dims in arb_dims(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let system = sys(&dims);
            let mut order: Vec<String> = system.names().iter().map(|s| s.to_string()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let forward = system.reorder_permutation(&order).unwrap();
            let reordered = system.reordered(&order).unwrap();
            let original: Vec<&str> = system.names();
            let back = reordered.reorder_permutation(&original).unwrap();
            for x in 0..system.total_dim() {
                prop_assert_eq!(back[forward[x]], x);
            }
        }
    }
}
