//! Brute-force check of no-causal-influence straight from its definition.
//!
//! For an intervention `𝒜` on `(E, A)`, the channel satisfies the definition
//! at `𝒜` iff some `𝒜'` on `(E, A')`, with `A'` the outputs outside the target,
//! makes `U ∘ (𝒜 ⊗ I) = (𝒜' ⊗ I) ∘ U`. Interventions are enumerated from a
//! budget; candidate `𝒜'` range over every partial function table. This
//! route never builds the T-process, so it can be used to check it.

use serde::{Deserialize, Serialize};

use crate::causal::{has_causal_influence, t_process};
use crate::channel::ReversibleChannel;
use crate::classical::{ClassicalChannel, ClassicalInstrument};
use crate::error::{invalid, Error, Result};
use crate::system::{CompositeSystem, IndexMap, SubsystemLabel, WireSet};

/// Hard ceiling on the environment dimension.
pub const MAX_ENV_DIM: usize = 4;
/// Hard ceiling on the number of function tables enumerated per environment size.
pub const MAX_TABLES: usize = 1 << 20;

/// Name of the environment wire added by interventions.
pub const ENV_NAME: &str = "E";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterventionClass {
    Constants,
    Atoms,
    AllFunctions,
}

impl std::fmt::Display for InterventionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InterventionClass::Constants => "constants",
            InterventionClass::Atoms => "atoms",
            InterventionClass::AllFunctions => "all-functions",
        })
    }
}

impl std::str::FromStr for InterventionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constants" => Ok(InterventionClass::Constants),
            "atoms" => Ok(InterventionClass::Atoms),
            "all-functions" | "all" => Ok(InterventionClass::AllFunctions),
            other => invalid(format!("unknown intervention class {other}")),
        }
    }
}

/// Bounds for the quantifier over environments and interventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_env_dim: usize,
    pub intervention_class: InterventionClass,
    /// Compare both sides on every joint input. When false only inputs with
    /// the environment in state 0 are compared.
    pub exhaustive_inputs: bool,
}

impl OracleBudget {
    pub fn new(max_env_dim: usize, intervention_class: InterventionClass) -> Result<Self> {
        if max_env_dim == 0 || max_env_dim > MAX_ENV_DIM {
            return Err(Error::Budget(format!(
                "environment dimension {max_env_dim} outside 1..={MAX_ENV_DIM}"
            )));
        }
        Ok(OracleBudget {
            max_env_dim,
            intervention_class,
            exhaustive_inputs: true,
        })
    }
}

/// How an intervention was generated; also its place in the search order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterventionKind {
    Constant,
    Atom,
    Table,
    /// Exchange of `A` with an environment `E ≅ A`.
    Swap,
}

/// A deterministic or atomic event on `(E, probed inputs)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intervention {
    pub kind: InterventionKind,
    pub env_dim: usize,
    /// Partial table on the joint index of `(E, probed)`.
    pub table: Vec<Option<usize>>,
}

impl Intervention {
    /// As an instrument on `(E, probed)` for a channel with inputs `input`.
    pub fn instrument(
        &self,
        input: &CompositeSystem,
        probed: &WireSet,
    ) -> Result<ClassicalInstrument> {
        let sys = env_system(self.env_dim, input, probed)?;
        ClassicalInstrument::new(sys.clone(), sys, self.table.clone())
    }
}

fn env_system(
    env_dim: usize,
    input: &CompositeSystem,
    probed: &WireSet,
) -> Result<CompositeSystem> {
    let positions = probed.resolve(input)?;
    if input.contains(ENV_NAME) {
        return invalid(format!(
            "wire name {ENV_NAME} is reserved for the environment"
        ));
    }
    let env = CompositeSystem::new(vec![SubsystemLabel::new(ENV_NAME, env_dim)])?;
    env.concat(&input.select(&positions))
}

/// Interventions in search order: constants, atoms, then every function
/// table, each for `E = 1..=max_env_dim`, restricted to the budget class;
/// finally the swap with `E ≅ probed` when that fits under [`MAX_ENV_DIM`].
/// Within a group entries follow the lowest flattened index.
pub fn interventions(
    input: &CompositeSystem,
    probed: &WireSet,
    budget: &OracleBudget,
) -> Result<Vec<Intervention>> {
    let positions = probed.resolve(input)?;
    let probed_dim = input.select(&positions).total_dim();
    let mut out = Vec::new();
    for e in 1..=budget.max_env_dim {
        let n = e * probed_dim;
        out.extend((0..n).map(|v| Intervention {
            kind: InterventionKind::Constant,
            env_dim: e,
            table: vec![Some(v); n],
        }));
    }
    if budget.intervention_class >= InterventionClass::Atoms {
        for e in 1..=budget.max_env_dim {
            let n = e * probed_dim;
            for i in 0..n {
                for j in 0..n {
                    let mut table = vec![None; n];
                    table[i] = Some(j);
                    out.push(Intervention {
                        kind: InterventionKind::Atom,
                        env_dim: e,
                        table,
                    });
                }
            }
        }
    }
    if budget.intervention_class >= InterventionClass::AllFunctions {
        for e in 1..=budget.max_env_dim {
            let n = e * probed_dim;
            let count = (n as u32)
                .checked_pow(n as u32)
                .map(|c| c as usize)
                .filter(|&c| c <= MAX_TABLES)
                .ok_or_else(|| {
                    Error::Budget(format!(
                        "{n}^{n} function tables exceed the {MAX_TABLES} cap"
                    ))
                })?;
            for code in 0..count {
                let mut table = vec![Some(0); n];
                let mut rest = code;
                for slot in table.iter_mut().rev() {
                    *slot = Some(rest % n);
                    rest /= n;
                }
                if table.windows(2).all(|w| w[0] == w[1]) {
                    continue; // constants already listed
                }
                out.push(Intervention {
                    kind: InterventionKind::Table,
                    env_dim: e,
                    table,
                });
            }
        }
    }
    if probed_dim <= MAX_ENV_DIM {
        out.push(swap_intervention(input, probed)?);
    }
    Ok(out)
}

/// Exchange of the probed wires with an environment of the same dimension.
pub fn swap_intervention(input: &CompositeSystem, probed: &WireSet) -> Result<Intervention> {
    let d = input.select(&probed.resolve(input)?).total_dim();
    let table = (0..d * d).map(|x| Some((x % d) * d + x / d)).collect();
    Ok(Intervention {
        kind: InterventionKind::Swap,
        env_dim: d,
        table,
    })
}

/// `(I_E ⊗ U) ∘ (𝒜 ⊗ I)` on `(E, inputs) → (E, outputs)`.
pub fn intervened(
    u: &ClassicalChannel,
    probed: &WireSet,
    a: &Intervention,
) -> Result<ClassicalInstrument> {
    let inst = a.instrument(u.input(), probed)?;
    let env = inst.input().select(&[0]);
    let full = env.concat(u.input())?;
    let inserted = inst.embed(&full)?;
    let evolve = ClassicalChannel::identity(&env).tensor(u)?;
    ClassicalInstrument::from_channel(&evolve).compose(&inserted)
}

/// `(I_E ⊗ U) ∘ (𝒜 ⊗ I) ∘ (I_E ⊗ U⁻¹)` on `(E, outputs)`: the intervention
/// seen after the evolution.
pub fn conjugated(
    u: &ClassicalChannel,
    probed: &WireSet,
    a: &Intervention,
) -> Result<ClassicalInstrument> {
    let env = CompositeSystem::new(vec![SubsystemLabel::new(ENV_NAME, a.env_dim)])?;
    let undo = ClassicalChannel::identity(&env).tensor(&u.inverse())?;
    intervened(u, probed, a)?.compose(&ClassicalInstrument::from_channel(&undo))
}

/// Where an instrument on `(E, outputs)` fails to be `𝒜' ⊗ I_target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "defect", rename_all = "kebab-case")]
pub enum InterventionDefect {
    /// The target digits of this input are not passed through unchanged.
    Leaks { input: usize },
    /// Two inputs differing only on the target produce different results on
    /// the other wires (or only one of them is null).
    DependsOnTarget { first: usize, second: usize },
}

/// First defect of `g` (same system on both sides) against `𝒜' ⊗ I_target`.
pub fn identity_defect(
    g: &ClassicalInstrument,
    target: &WireSet,
) -> Result<Option<InterventionDefect>> {
    let sys = g.input();
    let tpos = target.resolve(sys)?;
    let rpos = target.complement_positions(sys)?;
    let tmap = IndexMap::new(sys, &tpos);
    let rmap = IndexMap::new(sys, &rpos);
    let mut seen: Vec<Option<(usize, Option<usize>)>> = vec![None; sys.select(&rpos).total_dim()];
    for z in 0..sys.total_dim() {
        let out = g.apply(z);
        if let Some(w) = out {
            if tmap.apply(w) != tmap.apply(z) {
                return Ok(Some(InterventionDefect::Leaks { input: z }));
            }
        }
        let key = rmap.apply(z);
        let value = out.map(|w| rmap.apply(w));
        match seen[key] {
            None => seen[key] = Some((z, value)),
            Some((first, prev)) if prev != value => {
                return Ok(Some(InterventionDefect::DependsOnTarget {
                    first,
                    second: z,
                }));
            }
            Some(_) => {}
        }
    }
    Ok(None)
}

/// Search every partial table `𝒜'` on `(E, outputs ∖ to_out)` for one with
/// `U ∘ (𝒜 ⊗ I) = (𝒜' ⊗ I) ∘ U`. Entries are chosen one at a time and a
/// branch is abandoned as soon as an entry contradicts a constraint.
pub fn find_compensation(
    u: &ClassicalChannel,
    probed: &WireSet,
    to_out: &WireSet,
    a: &Intervention,
    exhaustive_inputs: bool,
) -> Result<Option<Vec<Option<usize>>>> {
    let lhs = intervened(u, probed, a)?;
    let env = CompositeSystem::new(vec![SubsystemLabel::new(ENV_NAME, a.env_dim)])?;
    let out_sys = env.concat(u.output())?;
    let target = to_out.resolve(&out_sys)?;
    let others = to_out.complement_positions(&out_sys)?;
    let omap = IndexMap::new(&out_sys, &others);
    let tmap = IndexMap::new(&out_sys, &target);
    let evolve = ClassicalChannel::identity(&env).tensor(u)?;
    let n_other = out_sys.select(&others).total_dim();
    let n_inputs = evolve.input().total_dim();
    let per_env = n_inputs / a.env_dim;

    // constraints[w] lists (required outcome) per occurrence of w.
    let mut constraints: Vec<Vec<Option<usize>>> = vec![Vec::new(); n_other];
    for p in 0..n_inputs {
        if !exhaustive_inputs && p / per_env != 0 {
            continue;
        }
        let q = evolve.apply(p);
        let w = omap.apply(q);
        let required = match lhs.apply(p) {
            None => None,
            Some(r) => {
                if tmap.apply(r) != tmap.apply(q) {
                    return Ok(None); // no 𝒜' can alter the target wires
                }
                Some(omap.apply(r))
            }
        };
        constraints[w].push(required);
    }

    let mut table = vec![None; n_other];
    for w in 0..n_other {
        // Candidates: null, then 0..n_other.
        let candidates = std::iter::once(None).chain((0..n_other).map(Some));
        let mut chosen = false;
        for candidate in candidates {
            if constraints[w].iter().all(|&c| c == candidate) {
                table[w] = candidate;
                chosen = true;
                break;
            }
        }
        if !chosen {
            return Ok(None);
        }
    }
    Ok(Some(table))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OracleVerdict {
    NoInfluenceUpToBudget { interventions_checked: usize },
    Influence { intervention: Intervention },
}

impl OracleVerdict {
    pub fn is_influence(&self) -> bool {
        matches!(self, OracleVerdict::Influence { .. })
    }
}

/// Definition-level decision of `from_in → to_out` within `budget`.
pub fn definition_check(
    u: &ClassicalChannel,
    from_in: &WireSet,
    to_out: &WireSet,
    budget: &OracleBudget,
) -> Result<OracleVerdict> {
    to_out.resolve(u.output())?;
    let list = interventions(u.input(), from_in, budget)?;
    let checked = list.len();
    for a in list {
        if find_compensation(u, from_in, to_out, &a, budget.exhaustive_inputs)?.is_none() {
            return Ok(OracleVerdict::Influence { intervention: a });
        }
    }
    Ok(OracleVerdict::NoInfluenceUpToBudget {
        interventions_checked: checked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    Agree,
    /// The oracle found no influence within budget but the T-process does.
    BudgetLimited,
    /// The oracle found influence the T-process misses.
    SoundnessFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub from: String,
    pub to: String,
    pub oracle_influence: bool,
    pub t_process_influence: bool,
    pub status: PairStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub pairs: Vec<PairCheck>,
    pub soundness_failures: usize,
    pub budget_limited: usize,
}

impl CrossValidation {
    pub fn sound(&self) -> bool {
        self.soundness_failures == 0
    }

    pub fn agrees(&self) -> bool {
        self.pairs.iter().all(|p| p.status == PairStatus::Agree)
    }
}

/// Oracle against T-process on every (input wire, output wire) pair.
pub fn cross_validate(u: &ClassicalChannel, budget: &OracleBudget) -> Result<CrossValidation> {
    let mut pairs = Vec::new();
    for from in u.input().names() {
        let f = WireSet::single(from);
        let neighbourhood = t_process(u, &f)?.neighbourhood();
        for to in u.output().names() {
            let t = WireSet::single(to);
            let oracle = definition_check(u, &f, &t, budget)?.is_influence();
            let fast = neighbourhood.contains(to);
            debug_assert_eq!(fast, has_causal_influence(u, &f, &t)?);
            let status = match (oracle, fast) {
                (true, false) => PairStatus::SoundnessFailure,
                (false, true) => PairStatus::BudgetLimited,
                _ => PairStatus::Agree,
            };
            pairs.push(PairCheck {
                from: from.to_string(),
                to: to.to_string(),
                oracle_influence: oracle,
                t_process_influence: fast,
                status,
            });
        }
    }
    let soundness_failures = pairs
        .iter()
        .filter(|p| p.status == PairStatus::SoundnessFailure)
        .count();
    let budget_limited = pairs
        .iter()
        .filter(|p| p.status == PairStatus::BudgetLimited)
        .count();
    Ok(CrossValidation {
        pairs,
        soundness_failures,
        budget_limited,
    })
}

/// Inserting `𝒜` on `(E, A₁)` between two copies of the T-process equals
/// `I_{A₁} ⊗ [U (𝒜 on (E, A)) U⁻¹]`, compared on every input.
pub fn conjugation_identity_holds(
    u: &ClassicalChannel,
    probed: &WireSet,
    a: &Intervention,
) -> Result<bool> {
    let tp = t_process(u, probed)?;
    let env = CompositeSystem::new(vec![SubsystemLabel::new(ENV_NAME, a.env_dim)])?;
    let copies_sys = tp
        .channel
        .input()
        .select(&(0..tp.copies.len()).collect::<Vec<_>>());
    let full = env.concat(tp.channel.input())?;

    // Left: T̃ · (𝒜 on E A₁) · T̃, all padded with I_E.
    let t_env =
        ClassicalInstrument::from_channel(&ClassicalChannel::identity(&env).tensor(&tp.channel)?);
    let a_on_copy = {
        let sys = env.concat(&copies_sys)?;
        ClassicalInstrument::new(sys.clone(), sys, a.table.clone())?.embed(&full)?
    };
    let left = t_env.compose(&a_on_copy)?.compose(&t_env)?;

    // Right: I_{A₁} ⊗ conjugated intervention, rearranged to (E, A₁, outputs).
    let conj = conjugated(u, probed, a)?; // on (E, outputs)
    let conj_full = ClassicalInstrument::from_channel(&ClassicalChannel::identity(&copies_sys))
        .tensor(&conj)?;
    let order = full.names();
    let to_conj = ClassicalChannel::identity(&full).reorder_outputs(&conj_full.input().names())?;
    let from_conj = ClassicalChannel::identity(conj_full.output()).reorder_outputs(&order)?;
    let right = ClassicalInstrument::from_channel(&from_conj)
        .compose(&conj_full)?
        .compose(&ClassicalInstrument::from_channel(&to_conj))?;
    Ok(left.same_action(&right))
}
