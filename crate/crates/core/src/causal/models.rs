use super::memory::{classical_decomposition, quantum_decomposition};
use super::witness::QuantumDefect;
use super::{t_process, validate, CausalModel, MemoryDecomposition, Model, Witness};
use crate::channel::ReversibleChannel;
use crate::classical::{idle_positions, ClassicalChannel};
use crate::error::{invalid, Error, Result};
use crate::oracle::{
    conjugated, identity_defect, interventions, swap_intervention, InterventionClass, OracleBudget,
};
use crate::quantum::{
    matrix_unit, max_abs_diff, partial_trace_operator, CMatrix, FactorCheck, UnitaryChannel,
};
use crate::system::{split_index_table, IndexMap, WireSet};

impl CausalModel for ClassicalChannel {
    const MODEL: Model = Model::Classical;

    fn memory_decomposition(
        &self,
        from_in: &WireSet,
        idle_out: &WireSet,
    ) -> Result<Option<MemoryDecomposition>> {
        classical_decomposition(self, from_in, idle_out)
    }

    fn discarding_leaves_identity(&self, discarded: &WireSet) -> Result<bool> {
        let kept = discarded.complement(self.input())?;
        let (keep_in, keep_out) = idle_positions(self.input(), self.output(), &kept)?;
        let in_map = IndexMap::new(self.input(), &keep_in);
        let out_map = IndexMap::new(self.output(), &keep_out);
        Ok(self
            .table()
            .iter()
            .enumerate()
            .all(|(x, &y)| in_map.apply(x) == out_map.apply(y)))
    }

    /// `C(r)` is the `to_out` part of `u(0, r)`; every output `y` must satisfy
    /// `C(rest part of u⁻¹(y)) = to_out part of y`.
    fn inverse_nosignalling_check(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool> {
        if self.signals(from_in, to_out)? {
            return invalid(format!("{from_in} signals to {to_out}"));
        }
        let from = from_in.resolve(self.input())?;
        let rest = from_in.complement_positions(self.input())?;
        let ins = split_index_table(self.input(), &from, &rest);
        let rest_map = IndexMap::new(self.input(), &rest);
        let target_map = IndexMap::new(self.output(), &to_out.resolve(self.output())?);
        let c: Vec<usize> = ins[0]
            .iter()
            .map(|&x| target_map.apply(self.apply(x)))
            .collect();
        let inv = self.inverse();
        Ok((0..self.output().total_dim())
            .all(|y| c[rest_map.apply(inv.apply(y))] == target_map.apply(y)))
    }

    /// Constants and atoms with `E ≤ 2`, then tables with `E = 1`, then the
    /// swap with `E ≅ from_in`, which always succeeds when influence exists.
    fn witness(&self, from_in: &WireSet, to_out: &WireSet) -> Result<Witness> {
        validate(to_out, self.output())?;
        let mut candidates = interventions(
            self.input(),
            from_in,
            &OracleBudget::new(2, InterventionClass::Atoms)?,
        )?;
        candidates.retain(|a| a.kind != crate::oracle::InterventionKind::Swap);
        match interventions(
            self.input(),
            from_in,
            &OracleBudget::new(1, InterventionClass::AllFunctions)?,
        ) {
            Ok(list) => candidates.extend(
                list.into_iter()
                    .filter(|a| a.kind == crate::oracle::InterventionKind::Table),
            ),
            Err(Error::Budget(_)) => {}
            Err(e) => return Err(e),
        }
        candidates.push(swap_intervention(self.input(), from_in)?);
        for a in candidates {
            let g = conjugated(self, from_in, &a)?;
            if let Some(defect) = identity_defect(&g, to_out)? {
                return Ok(Witness::Intervention {
                    intervention: a,
                    defect,
                });
            }
        }
        invalid(format!("{from_in} has no causal influence on {to_out}"))
    }

    fn replay_witness(
        &self,
        from_in: &WireSet,
        to_out: &WireSet,
        witness: &Witness,
    ) -> Result<bool> {
        let Witness::Intervention {
            intervention,
            defect,
        } = witness
        else {
            return Ok(false);
        };
        let g = conjugated(self, from_in, intervention)?;
        Ok(identity_defect(&g, to_out)? == Some(*defect))
    }
}

impl CausalModel for UnitaryChannel {
    const MODEL: Model = Model::Quantum;

    fn memory_decomposition(
        &self,
        from_in: &WireSet,
        idle_out: &WireSet,
    ) -> Result<Option<MemoryDecomposition>> {
        quantum_decomposition(self, from_in, idle_out)
    }

    fn discarding_leaves_identity(&self, discarded: &WireSet) -> Result<bool> {
        UnitaryChannel::discarding_leaves_identity(self, discarded)
    }

    /// On every output matrix unit `E_pq`: `C(Tr_A[U† E_pq U]) = Tr_{A'}[E_pq]`
    /// with `C(σ) = Tr_{A'}[U(|0⟩⟨0| ⊗ σ)U†]`.
    fn inverse_nosignalling_check(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool> {
        if self.signals(from_in, to_out)? {
            return invalid(format!("{from_in} signals to {to_out}"));
        }
        let input = self.input();
        let output = self.output();
        let from = from_in.resolve(input)?;
        let rest = from_in.complement_positions(input)?;
        let rest_set = from_in.complement(input)?;
        let ins = split_index_table(input, &from, &rest);
        let n = output.total_dim();
        let nr = ins[0].len();
        let u = self.matrix();
        for p in 0..n {
            for q in 0..n {
                let unit = matrix_unit(n, p, q);
                let pulled = u.adjoint() * &unit * u;
                let sigma = partial_trace_operator(input, &pulled, &rest_set)?;
                let mut embedded = CMatrix::zeros(input.total_dim(), input.total_dim());
                for a in 0..nr {
                    for b in 0..nr {
                        embedded[(ins[0][a], ins[0][b])] = sigma[(a, b)];
                    }
                }
                let lhs = partial_trace_operator(output, &self.conjugate(&embedded), to_out)?;
                let rhs = partial_trace_operator(output, &unit, to_out)?;
                if max_abs_diff(&lhs, &rhs) > self.tol() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn witness(&self, from_in: &WireSet, to_out: &WireSet) -> Result<Witness> {
        if let Some(d) = self.signalling_defect(from_in, to_out)? {
            return Ok(Witness::FactorizationDefect {
                detail: QuantumDefect::SignallingIdentity(d),
            });
        }
        let tp = t_process(self, from_in)?;
        match tp.channel.factor_check(to_out)? {
            FactorCheck::Defect(d) => Ok(Witness::FactorizationDefect {
                detail: QuantumDefect::TensorIdentity(d),
            }),
            FactorCheck::Factor(_) => {
                invalid(format!("{from_in} has no causal influence on {to_out}"))
            }
        }
    }

    fn replay_witness(
        &self,
        from_in: &WireSet,
        to_out: &WireSet,
        witness: &Witness,
    ) -> Result<bool> {
        let Witness::FactorizationDefect { detail } = witness else {
            return Ok(false);
        };
        match detail {
            QuantumDefect::SignallingIdentity(d) => {
                Ok(
                    self.signalling_deviation(from_in, to_out, d.from_unit, d.rest_unit)?
                        > self.tol(),
                )
            }
            QuantumDefect::TensorIdentity(d) => {
                let tp = t_process(self, from_in)?;
                let m = tp.channel.matrix();
                if d.row >= m.nrows() || d.col >= m.ncols() {
                    return Ok(false);
                }
                let found = m[(d.row, d.col)];
                let broken = matches!(tp.channel.factor_check(to_out)?, FactorCheck::Defect(_));
                Ok(broken
                    && (found - d.found).norm() <= self.tol()
                    && (found - d.expected).norm() > self.tol())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::find_witness;
    use crate::oracle::{InterventionDefect, InterventionKind};
    use crate::system::CompositeSystem;

    fn bits(names: &[&str]) -> CompositeSystem {
        CompositeSystem::from_pairs(&names.iter().map(|n| (*n, 2)).collect::<Vec<_>>()).unwrap()
    }

    fn s(n: &str) -> WireSet {
        WireSet::single(n)
    }

    #[test]
    fn cnot_witness_is_constant_zero() {
        let k = ClassicalChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        let w = find_witness(&k, &s("B"), &s("A'")).unwrap();
        match &w {
            Witness::Intervention {
                intervention,
                defect,
            } => {
                assert_eq!(intervention.kind, InterventionKind::Constant);
                assert_eq!(intervention.table, vec![Some(0), Some(0)]);
                // g(x, y) = (x, x): inputs 0 and 1 (y differs) disagree on B'.
                assert_eq!(
                    *defect,
                    InterventionDefect::DependsOnTarget {
                        first: 0,
                        second: 2
                    }
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(k.replay_witness(&s("B"), &s("A'"), &w).unwrap());
    }

    #[test]
    fn no_witness_without_influence() {
        let id = ClassicalChannel::identity(&bits(&["A", "B"]));
        assert!(find_witness(&id, &s("A"), &s("B")).is_err());
    }

    #[test]
    fn swap_witness_replays() {
        let sw = ClassicalChannel::swap_gate(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        let w = find_witness(&sw, &s("A"), &s("B'")).unwrap();
        assert!(sw.replay_witness(&s("A"), &s("B'"), &w).unwrap());
        let id = ClassicalChannel::identity(&bits(&["A'", "B'"]));
        let id = id.relabel(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        assert!(!id.replay_witness(&s("A"), &s("B'"), &w).unwrap());
    }

    #[test]
    fn quantum_cnot_witness_is_signalling() {
        let k = UnitaryChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        let w = find_witness(&k, &s("B"), &s("A'")).unwrap();
        assert!(matches!(
            w,
            Witness::FactorizationDefect {
                detail: QuantumDefect::SignallingIdentity(_)
            }
        ));
        assert!(k.replay_witness(&s("B"), &s("A'"), &w).unwrap());
    }

    #[test]
    fn inverse_nosignalling() {
        let k = ClassicalChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        assert!(k.inverse_nosignalling_check(&s("B"), &s("A'")).unwrap());
        assert!(k.inverse_nosignalling_check(&s("A"), &s("B'")).is_err());
        let id = ClassicalChannel::identity(&bits(&["A", "B"]));
        assert!(id.inverse_nosignalling_check(&s("A"), &s("B")).unwrap());
        let q = UnitaryChannel::identity(&bits(&["A", "B"]));
        assert!(CausalModel::inverse_nosignalling_check(&q, &s("A"), &s("B")).unwrap());
    }

    #[test]
    fn classical_discarding() {
        let ab = bits(&["A", "B"]);
        let xor_back =
            ClassicalChannel::from_fn(ab.clone(), ab.clone(), |v| vec![v[0] ^ v[1], v[1]]).unwrap();
        assert!(CausalModel::discarding_leaves_identity(&xor_back, &s("A")).unwrap());
        assert!(!CausalModel::discarding_leaves_identity(&xor_back, &s("B")).unwrap());
    }
}
