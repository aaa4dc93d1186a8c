use serde::{Deserialize, Serialize};

use super::{all_names, fresh_name, t_process, CausalModel};
use crate::channel::ReversibleChannel;
use crate::classical::{ClassicalChannel, ClassicalInstrument};
use crate::error::{invalid, Result};
use crate::quantum::{max_abs_diff, partial_trace_operator, CMatrix, UnitaryChannel};
use crate::system::{split_index_table, CompositeSystem, IndexMap, WireSet};

/// `U = (W ⊗ I) ∘ (I ⊗ V)`: `V` takes the unprobed inputs to the idle outputs
/// and an environment `E`; `W` combines the probed inputs with `E` into the
/// remaining outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum MemoryDecomposition {
    Classical {
        env: CompositeSystem,
        /// Rest of the inputs → (idle outputs, E); injective.
        v: ClassicalInstrument,
        /// (probed inputs, E) → other outputs; surjective.
        w: ClassicalInstrument,
    },
    Quantum {
        env: CompositeSystem,
        v: QuantumMap,
        w: QuantumMap,
    },
}

impl MemoryDecomposition {
    pub fn env(&self) -> &CompositeSystem {
        match self {
            MemoryDecomposition::Classical { env, .. }
            | MemoryDecomposition::Quantum { env, .. } => env,
        }
    }
}

/// A channel given by a unitary with some inputs prepared in `|0⟩` and some
/// outputs discarded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumMap {
    pub unitary: UnitaryChannel,
    pub prepared: WireSet,
    pub discarded: WireSet,
}

impl QuantumMap {
    pub fn input(&self) -> Result<CompositeSystem> {
        let free = self.prepared.complement_positions(self.unitary.input())?;
        Ok(self.unitary.input().select(&free))
    }

    pub fn output(&self) -> Result<CompositeSystem> {
        let kept = self.discarded.complement_positions(self.unitary.output())?;
        Ok(self.unitary.output().select(&kept))
    }

    /// Image of an operator on [`input`](Self::input).
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let input = self.unitary.input();
        let prepared = self.prepared.resolve(input)?;
        let free = self.prepared.complement_positions(input)?;
        let table = split_index_table(input, &prepared, &free);
        let n = input.total_dim();
        let nf = table[0].len();
        if x.shape() != (nf, nf) {
            return invalid(format!("operator is {:?}, expected {nf}x{nf}", x.shape()));
        }
        let mut full = CMatrix::zeros(n, n);
        for a in 0..nf {
            for b in 0..nf {
                full[(table[0][a], table[0][b])] = x[(a, b)];
            }
        }
        let image = self.unitary.conjugate(&full);
        let keep = self.discarded.complement(self.unitary.output())?;
        partial_trace_operator(self.unitary.output(), &image, &keep)
    }

    /// Apply to the matching wires of an operator on `system`, identity on
    /// the others. Only for maps without prepared inputs.
    fn apply_within(
        &self,
        system: &CompositeSystem,
        x: &CMatrix,
    ) -> Result<(CompositeSystem, CMatrix)> {
        if !self.prepared.is_empty() {
            return invalid("apply_within needs a map without prepared inputs");
        }
        let acting = WireSet::all(self.unitary.input());
        let rest = system.select(&acting.complement_positions(system)?);
        let order: Vec<String> = self
            .unitary
            .input()
            .names()
            .into_iter()
            .chain(rest.names())
            .map(str::to_string)
            .collect();
        let to_order = UnitaryChannel::identity(system).reorder_outputs(&order)?;
        let arranged = to_order.conjugate(x);
        let full = self.unitary.tensor(&UnitaryChannel::identity(&rest))?;
        let image = full.conjugate(&arranged);
        let keep = self.discarded.complement(full.output())?;
        let kept = keep.resolve(full.output())?;
        Ok((
            full.output().select(&kept),
            partial_trace_operator(full.output(), &image, &keep)?,
        ))
    }
}

/// Input and output roles for a bipartition.
struct Roles {
    from: Vec<usize>,
    rest: Vec<usize>,
    idle: Vec<usize>,
    other: Vec<usize>,
}

fn roles(
    input: &CompositeSystem,
    output: &CompositeSystem,
    from_in: &WireSet,
    idle_out: &WireSet,
) -> Result<Roles> {
    Ok(Roles {
        from: from_in.resolve(input)?,
        rest: from_in.complement_positions(input)?,
        idle: idle_out.resolve(output)?,
        other: idle_out.complement_positions(output)?,
    })
}

/// Classical construction: with `g₀(r)` the idle-output part of `u(0, r)`,
/// `E ≅ rest`, `V(r) = (g₀(r), r)` and `W(f, e)` the other-output part of
/// `u(f, e)`. Exists iff `from_in` does not signal to `idle_out`.
pub(crate) fn classical_decomposition(
    u: &ClassicalChannel,
    from_in: &WireSet,
    idle_out: &WireSet,
) -> Result<Option<MemoryDecomposition>> {
    let r = roles(u.input(), u.output(), from_in, idle_out)?;
    let input = u.input();
    let output = u.output();
    let ins = split_index_table(input, &r.from, &r.rest);
    let idle_map = IndexMap::new(output, &r.idle);
    let other_map = IndexMap::new(output, &r.other);

    let mut taken = all_names(&[input, output]);
    let rest_sys = input.select(&r.rest);
    let env_names: Vec<String> = rest_sys
        .names()
        .iter()
        .map(|n| fresh_name(n, "_env", &mut taken))
        .collect();
    let env = rest_sys.renamed(&env_names)?;
    let idle_sys = output.select(&r.idle);
    let from_sys = input.select(&r.from);
    let other_sys = output.select(&r.other);
    let ne = env.total_dim();

    let v_table: Vec<usize> = (0..rest_sys.total_dim())
        .map(|rv| idle_map.apply(u.apply(ins[0][rv])) * ne + rv)
        .collect();
    let w_table: Vec<usize> = (0..from_sys.total_dim() * ne)
        .map(|fe| other_map.apply(u.apply(ins[fe / ne][fe % ne])))
        .collect();
    let v = ClassicalInstrument::function(rest_sys, idle_sys.concat(&env)?, v_table)?;
    let w = ClassicalInstrument::function(from_sys.concat(&env)?, other_sys, w_table)?;

    // Recompose and compare pointwise.
    let outs = split_index_table(output, &r.other, &r.idle);
    for (f, row) in ins.iter().enumerate() {
        for (rv, &x) in row.iter().enumerate() {
            let ve = v.apply(rv).expect("total");
            let (y, e) = (ve / ne, ve % ne);
            let o = w.apply(f * ne + e).expect("total");
            if outs[o][y] != u.apply(x) {
                return Ok(None);
            }
        }
    }
    Ok(Some(MemoryDecomposition::Classical { env, v, w }))
}

/// Quantum construction from the T-process factor `T` on `(A₁, other)`:
/// `E` is a copy of the other outputs, `V(σ) = U(|0⟩⟨0| ⊗ σ)U†` and
/// `W = Tr_{A₁} ∘ T`. Recomposition is checked on all matrix units.
pub(crate) fn quantum_decomposition(
    u: &UnitaryChannel,
    from_in: &WireSet,
    idle_out: &WireSet,
) -> Result<Option<MemoryDecomposition>> {
    let r = roles(u.input(), u.output(), from_in, idle_out)?;
    let tp = t_process(u, from_in)?;
    let Some(factor) = tp.channel.factors_as_identity(idle_out)? else {
        return Ok(None);
    };
    let input = u.input();
    let output = u.output();
    let mut taken = all_names(&[input, output, tp.channel.input()]);
    let other_sys = output.select(&r.other);
    let env_names: Vec<String> = other_sys
        .names()
        .iter()
        .map(|n| fresh_name(n, "_env", &mut taken))
        .collect();
    let env = other_sys.renamed(&env_names)?;

    // V: u with the probed inputs prepared and the other outputs renamed to E.
    let v_out_names: Vec<String> = output
        .names()
        .iter()
        .map(
            |n| match r.other.iter().position(|&k| output.parts()[k].name == *n) {
                Some(j) => env_names[j].clone(),
                None => n.to_string(),
            },
        )
        .collect();
    let v = QuantumMap {
        unitary: u.relabel(input.clone(), output.renamed(&v_out_names)?)?,
        prepared: from_in.clone(),
        discarded: WireSet::empty(),
    };

    // W: T on (A₁, other), inputs renamed (probed, E), copies discarded.
    let from_names: Vec<String> = r
        .from
        .iter()
        .map(|&k| input.parts()[k].name.clone())
        .collect();
    let w_in_names: Vec<String> = factor
        .input()
        .names()
        .iter()
        .map(|n| {
            if let Some(j) = tp.copies.iter().position(|c| c == n) {
                from_names[j].clone()
            } else {
                let j = r
                    .other
                    .iter()
                    .position(|&k| output.parts()[k].name == *n)
                    .expect("other output");
                env_names[j].clone()
            }
        })
        .collect();
    let w = QuantumMap {
        unitary: factor.relabel(
            factor.input().renamed(&w_in_names)?,
            factor.output().clone(),
        )?,
        prepared: WireSet::empty(),
        discarded: WireSet::new(tp.copies.iter().cloned()),
    };

    let decomposition = MemoryDecomposition::Quantum { env, v, w };
    if recomposes(u, &decomposition, from_in)? {
        Ok(Some(decomposition))
    } else {
        Ok(None)
    }
}

/// `(W ⊗ I)(ρ ⊗ V(σ))` against `U(ρ ⊗ σ)U†` on every input matrix unit.
fn recomposes(u: &UnitaryChannel, d: &MemoryDecomposition, from_in: &WireSet) -> Result<bool> {
    let MemoryDecomposition::Quantum { v, w, .. } = d else {
        return invalid("not a quantum decomposition");
    };
    let input = u.input();
    let from = from_in.resolve(input)?;
    let rest = from_in.complement_positions(input)?;
    let ins = split_index_table(input, &from, &rest);
    let from_sys = input.select(&from);
    let v_out = v.output()?;
    let (nf, nr) = (ins.len(), ins[0].len());
    let out_order: Vec<&str> = u.output().names();
    let tol = u.tol();
    for f1 in 0..nf {
        for f2 in 0..nf {
            for r1 in 0..nr {
                for r2 in 0..nr {
                    let sigma = crate::quantum::matrix_unit(nr, r1, r2);
                    let rho = crate::quantum::matrix_unit(nf, f1, f2);
                    let x = rho.kronecker(&v.apply(&sigma)?);
                    let sys = from_sys.concat(&v_out)?;
                    let (out_sys, image) = w.apply_within(&sys, &x)?;
                    let arranged = UnitaryChannel::identity(&out_sys)
                        .reorder_outputs(&out_order)?
                        .conjugate(&image);
                    let target = u.conjugate(&crate::quantum::matrix_unit(
                        input.total_dim(),
                        ins[f1][r1],
                        ins[f2][r2],
                    ));
                    if max_abs_diff(&arranged, &target) > tol {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Convenience wrapper dispatching on the model.
pub fn memory_decomposition<C: CausalModel>(
    u: &C,
    from_in: &WireSet,
    idle_out: &WireSet,
) -> Result<Option<MemoryDecomposition>> {
    u.memory_decomposition(from_in, idle_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(names: &[&str]) -> CompositeSystem {
        CompositeSystem::from_pairs(&names.iter().map(|n| (*n, 2)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cnot_from_target_with_idle_control() {
        let k = ClassicalChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        let d = classical_decomposition(&k, &WireSet::single("B"), &WireSet::single("A'"))
            .unwrap()
            .expect("B does not signal to A'");
        let MemoryDecomposition::Classical { env, v, w } = d else {
            panic!()
        };
        assert_eq!(env.total_dim(), 2);
        // V(x) = (x, x) on (A', E); W(y, e) = y xor e on B'.
        for x in 0..2 {
            assert_eq!(v.apply(x), Some(x * 2 + x));
        }
        for y in 0..2 {
            for e in 0..2 {
                assert_eq!(w.apply(y * 2 + e), Some(y ^ e));
            }
        }
    }

    #[test]
    fn cnot_from_control_with_idle_target_fails() {
        let k = ClassicalChannel::controlled_not(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        assert!(
            classical_decomposition(&k, &WireSet::single("A"), &WireSet::single("B'"))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn identity_decomposition() {
        let id = ClassicalChannel::identity(&bits(&["A", "B"]));
        let d = classical_decomposition(&id, &WireSet::single("A"), &WireSet::single("B"))
            .unwrap()
            .unwrap();
        let MemoryDecomposition::Classical { v, w, .. } = d else {
            panic!()
        };
        // V(y) = (y, y) with E a copy of B; W(x, e) = x.
        for y in 0..2 {
            assert_eq!(v.apply(y), Some(y * 2 + y));
        }
        for x in 0..2 {
            for e in 0..2 {
                assert_eq!(w.apply(x * 2 + e), Some(x));
            }
        }
    }

    #[test]
    fn quantum_identity_and_product_decompose() {
        let ab = bits(&["A", "B"]);
        let id = UnitaryChannel::identity(&ab);
        assert!(
            quantum_decomposition(&id, &WireSet::single("A"), &WireSet::single("B"))
                .unwrap()
                .is_some()
        );
        let h = UnitaryChannel::hadamard(bits(&["A"]), bits(&["A"])).unwrap();
        let hh = h
            .tensor(&h.relabel(bits(&["B"]), bits(&["B"])).unwrap())
            .unwrap();
        assert!(
            quantum_decomposition(&hh, &WireSet::single("A"), &WireSet::single("B"))
                .unwrap()
                .is_some()
        );
        let k = UnitaryChannel::controlled_not(ab.clone(), ab).unwrap();
        assert!(
            quantum_decomposition(&k, &WireSet::single("B"), &WireSet::single("A"))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn quantum_swap_into_idle_side_decomposes() {
        // SWAP: A reaches B' but not A'; B reaches A'. From B to idle B' is fine.
        let sw = UnitaryChannel::swap_gate(bits(&["A", "B"]), bits(&["A'", "B'"])).unwrap();
        let d = quantum_decomposition(&sw, &WireSet::single("B"), &WireSet::single("B'")).unwrap();
        assert!(d.is_some());
        assert!(
            quantum_decomposition(&sw, &WireSet::single("A"), &WireSet::single("B'"))
                .unwrap()
                .is_none()
        );
    }
}
