//! One function per subcommand; each returns a [`Report`].

use causal_lens::automata::{
    build_ring, cone_growth, neighbourhood_map, Layer, RingAutomaton, RingModel,
};
use causal_lens::causal::{check_interaction_without_disturbance, Model};
use causal_lens::oracle::{
    cross_validate, definition_check, CrossValidation, OracleBudget, PairCheck, PairStatus,
};
use causal_lens::{
    find_witness, has_causal_influence, hierarchy_report, neighbourhood, CausalModel,
    ClassicalChannel, UnitaryChannel, WireSet,
};

use crate::report::{AutomatonSection, Neighbourhood, OracleSection, Report, WitnessEntry};
use crate::CliError;

fn names(system: &causal_lens::CompositeSystem) -> Vec<String> {
    system.names().into_iter().map(str::to_string).collect()
}

fn base_report<C: CausalModel>(command: &str, u: &C) -> Report {
    Report::new(command, C::MODEL, names(u.input()), names(u.output()))
}

/// Pairwise signalling and causal matrices, neighbourhoods and witnesses.
pub fn cmd_analyze<C: CausalModel>(u: &C) -> Result<Report, CliError> {
    let mut report = base_report("analyze", u);
    let mut signalling = Vec::new();
    let mut causal = Vec::new();
    for a in &report.inputs.clone() {
        let from = WireSet::single(a.as_str());
        let n = neighbourhood(u, &from)?;
        let mut srow = Vec::new();
        let mut crow = Vec::new();
        for b in &report.outputs.clone() {
            let to = WireSet::single(b.as_str());
            let s = u.signals(&from, &to)?;
            let c = n.contains(b);
            if s && !c {
                report.violation(format!("{a} signals to {b} without causal influence"));
            }
            if c {
                let witness = find_witness(u, &from, &to)?;
                if !u.replay_witness(&from, &to, &witness)? {
                    report.violation(format!("witness for {a} -> {b} does not replay"));
                }
                report.witnesses.push(WitnessEntry {
                    from: a.clone(),
                    to: b.clone(),
                    witness,
                });
            }
            srow.push(s);
            crow.push(c);
        }
        report.neighbourhoods.push(Neighbourhood {
            input: a.clone(),
            outputs: n.names().map(str::to_string).collect(),
        });
        signalling.push(srow);
        causal.push(crow);
    }
    // Keep neighbourhood members in output order.
    for n in &mut report.neighbourhoods {
        let order = &report.outputs;
        n.outputs.sort_by_key(|o| order.iter().position(|x| x == o));
    }
    report.signalling = Some(signalling);
    report.causal = Some(causal);
    Ok(report)
}

pub fn cmd_hierarchy<C: CausalModel>(
    u: &C,
    from: &WireSet,
    to: &WireSet,
) -> Result<Report, CliError> {
    let mut report = base_report("hierarchy", u);
    let h = hierarchy_report(u, from, to)?;
    if !h.consistent {
        report.violation(format!("implication chain broken for {from} -> {to}"));
    }
    if let Some(w) = &h.witness {
        if !u.replay_witness(from, to, w)? {
            report.violation(format!("witness for {from} -> {to} does not replay"));
        }
    }
    report.hierarchy.push(h);
    Ok(report)
}

/// Definition-level oracle against the T-process. With `pair` only that
/// pair is checked, otherwise every single-wire pair.
pub fn cmd_oracle(
    u: &ClassicalChannel,
    budget: OracleBudget,
    pair: Option<(WireSet, WireSet)>,
) -> Result<Report, CliError> {
    let mut report = base_report("oracle", u);
    let cross_validation = match pair {
        None => cross_validate(u, &budget)?,
        Some((from, to)) => {
            let oracle_influence = definition_check(u, &from, &to, &budget)?.is_influence();
            let t_process_influence = has_causal_influence(u, &from, &to)?;
            let status = match (oracle_influence, t_process_influence) {
                (true, false) => PairStatus::SoundnessFailure,
                (false, true) => PairStatus::BudgetLimited,
                _ => PairStatus::Agree,
            };
            CrossValidation {
                pairs: vec![PairCheck {
                    from: from.to_string(),
                    to: to.to_string(),
                    oracle_influence,
                    t_process_influence,
                    status,
                }],
                soundness_failures: usize::from(status == PairStatus::SoundnessFailure),
                budget_limited: usize::from(status == PairStatus::BudgetLimited),
            }
        }
    };
    if !cross_validation.sound() {
        report.violation("the oracle found influence the T-process misses");
    }
    report.oracle = Some(OracleSection {
        budget,
        cross_validation,
    });
    Ok(report)
}

pub fn cmd_niwd<C: CausalModel>(u: &C, a_side: &WireSet) -> Result<Report, CliError> {
    let mut report = base_report("niwd", u);
    let c = check_interaction_without_disturbance(u, a_side)?;
    if !c.consistent() {
        report.violation("undisturbed interaction without causal influence");
    }
    report.niwd = Some(c);
    Ok(report)
}

fn automaton_report<C: RingModel>(
    a: &RingAutomaton<C>,
    steps: usize,
    cap: usize,
    quantized: Option<causal_lens::automata::NeighbourhoodMap>,
) -> Result<Report, CliError> {
    let mut report = base_report("ca", &a.step);
    let map = neighbourhood_map(a, steps, cap)?;
    let growth = cone_growth(a, steps, cap)?;
    if !map.nested() {
        report.violation("a signalling set is not inside the causal neighbourhood");
    }
    let mut within_light_cone = true;
    for c in &map.cells {
        let cone = a.light_cone(c.cell, steps)?;
        within_light_cone &= c.causal.iter().all(|x| cone.contains(x));
    }
    if !within_light_cone {
        report.violation("a causal cone leaves the gate-layout light cone");
    }
    if let Some(q) = &quantized {
        if q.cells.iter().any(|c| c.causal != c.signalling) {
            report.violation("quantized signalling and causal cones differ");
        }
    }
    report.automaton = Some(AutomatonSection {
        cells: a.cells,
        cell_dim: a.cell_dim,
        steps,
        map,
        growth,
        quantized,
        within_light_cone,
    });
    Ok(report)
}

/// Ring automaton cones. Classical rings are also quantized when they fit
/// under `quantum_cap`.
pub fn cmd_ca(
    layers: &[Layer],
    cells: usize,
    cell_dim: usize,
    steps: usize,
    model: Model,
    classical_cap: usize,
    quantum_cap: usize,
) -> Result<Report, CliError> {
    match model {
        Model::Classical => {
            let a: RingAutomaton<ClassicalChannel> =
                build_ring(layers, cells, cell_dim, classical_cap)?;
            let fits = cell_dim
                .checked_pow(cells as u32)
                .is_some_and(|d| d <= quantum_cap);
            let quantized = if fits {
                Some(neighbourhood_map(
                    &a.quantize(quantum_cap)?,
                    steps,
                    quantum_cap,
                )?)
            } else {
                None
            };
            automaton_report(&a, steps, classical_cap, quantized)
        }
        Model::Quantum => {
            let a: RingAutomaton<UnitaryChannel> =
                build_ring(layers, cells, cell_dim, quantum_cap)?;
            automaton_report(&a, steps, quantum_cap, None)
        }
    }
}
