//! Structured reports and their text rendering.

use std::fmt::Write as _;

use causal_lens::automata::{ConeGrowth, NeighbourhoodMap};
use causal_lens::causal::{Model, NiwdClassification};
use causal_lens::oracle::{CrossValidation, OracleBudget, PairStatus};
use causal_lens::{HierarchyReport, Witness};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbourhood {
    pub input: String,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub from: String,
    pub to: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub budget: OracleBudget,
    pub cross_validation: CrossValidation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutomatonSection {
    pub cells: usize,
    pub cell_dim: usize,
    pub steps: usize,
    pub map: NeighbourhoodMap,
    pub growth: ConeGrowth,
    /// The same layout as permutation unitaries, when it fits the quantum cap.
    pub quantized: Option<NeighbourhoodMap>,
    /// Every causal cone lies inside the gate-layout light cone.
    pub within_light_cone: bool,
}

/// Output of every subcommand. Relation matrices are indexed by
/// `[input][output]` in the order of `inputs` and `outputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub model: Model,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signalling: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neighbourhoods: Vec<Neighbourhood>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hierarchy: Vec<HierarchyReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub niwd: Option<NiwdClassification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<AutomatonSection>,
    /// Internal cross-checks passed; false means a bug.
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(command: &str, model: Model, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            model,
            inputs,
            outputs,
            signalling: None,
            causal: None,
            neighbourhoods: Vec::new(),
            hierarchy: Vec::new(),
            witnesses: Vec::new(),
            oracle: None,
            niwd: None,
            automaton: None,
            consistent: true,
            violations: Vec::new(),
        }
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.consistent = false;
        self.violations.push(msg.into());
    }

    /// Look up a matrix cell by wire names.
    pub fn relation(
        matrix: &[Vec<bool>],
        inputs: &[String],
        outputs: &[String],
        from: &str,
        to: &str,
    ) -> Option<bool> {
        let i = inputs.iter().position(|n| n == from)?;
        let j = outputs.iter().position(|n| n == to)?;
        matrix.get(i)?.get(j).copied()
    }

    pub fn signalling_at(&self, from: &str, to: &str) -> Option<bool> {
        Self::relation(
            self.signalling.as_deref()?,
            &self.inputs,
            &self.outputs,
            from,
            to,
        )
    }

    pub fn causal_at(&self, from: &str, to: &str) -> Option<bool> {
        Self::relation(
            self.causal.as_deref()?,
            &self.inputs,
            &self.outputs,
            from,
            to,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({})", self.command, self.model);
        if let Some(m) = &self.signalling {
            matrix(&mut s, "signalling", m, &self.inputs, &self.outputs);
        }
        if let Some(m) = &self.causal {
            matrix(&mut s, "causal influence", m, &self.inputs, &self.outputs);
        }
        if !self.neighbourhoods.is_empty() {
            let _ = writeln!(s, "neighbourhoods");
            for n in &self.neighbourhoods {
                let _ = writeln!(s, "  N+({}) = {{{}}}", n.input, n.outputs.join(", "));
            }
        }
        for h in &self.hierarchy {
            let _ = writeln!(
                s,
                "hierarchy {} -> {}: causal={} memory={} signalling={} consistent={}",
                h.from_in,
                h.to_out,
                yes(h.causal_influence),
                yes(h.memory_decomposable),
                yes(h.signalling),
                yes(h.consistent)
            );
        }
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "witness {} -> {}: {}",
                w.from,
                w.to,
                serde_json::to_string(&w.witness).unwrap_or_default()
            );
        }
        if let Some(o) = &self.oracle {
            let b = &o.budget;
            let _ = writeln!(
                s,
                "oracle budget: env dim <= {}, class {}, exhaustive inputs {}",
                b.max_env_dim,
                b.intervention_class,
                yes(b.exhaustive_inputs)
            );
            for p in &o.cross_validation.pairs {
                let status = match p.status {
                    PairStatus::Agree => "agree",
                    PairStatus::BudgetLimited => "budget-limited",
                    PairStatus::SoundnessFailure => "SOUNDNESS FAILURE",
                };
                let _ = writeln!(
                    s,
                    "  {} -> {}: oracle={} t-process={} {status}",
                    p.from,
                    p.to,
                    yes(p.oracle_influence),
                    yes(p.t_process_influence)
                );
            }
            let verdict = if o.cross_validation.sound() {
                "sound"
            } else {
                "UNSOUND"
            };
            let _ = writeln!(
                s,
                "  verdict: {verdict}, {} budget-limited",
                o.cross_validation.budget_limited
            );
        }
        if let Some(n) = &self.niwd {
            let _ = writeln!(
                s,
                "niwd A={} B={}: premise={} factorizes={} verdict: {}",
                n.a_side,
                n.b_side,
                yes(n.premise_holds),
                yes(n.factorizes),
                n.verdict
            );
            if let Some(f) = n.forced_influence {
                let _ = writeln!(s, "  forced influence A -> B: {}", yes(f));
            }
        }
        if let Some(a) = &self.automaton {
            let _ = writeln!(
                s,
                "ring of {} cells, dimension {}, {} step(s)",
                a.cells, a.cell_dim, a.steps
            );
            cones(&mut s, "cones", &a.map);
            if let Some(q) = &a.quantized {
                cones(&mut s, "quantized cones", q);
            }
            let _ = writeln!(s, "growth (causal/signalling sizes per cell)");
            for row in &a.growth.rows {
                let cells: Vec<String> = row
                    .causal
                    .iter()
                    .zip(&row.signalling)
                    .map(|(c, g)| format!("{c}/{g}"))
                    .collect();
                let _ = writeln!(s, "  step {}: {}", row.step, cells.join(" "));
            }
            let _ = writeln!(s, "  monotone: {}", yes(a.growth.monotone));
            let _ = writeln!(s, "within light cone: {}", yes(a.within_light_cone));
        }
        let _ = writeln!(s, "consistent: {}", yes(self.consistent));
        for v in &self.violations {
            let _ = writeln!(s, "  violation: {v}");
        }
        s
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn matrix(s: &mut String, title: &str, m: &[Vec<bool>], rows: &[String], cols: &[String]) {
    let w = rows
        .iter()
        .chain(cols)
        .map(String::len)
        .max()
        .unwrap_or(1)
        .max(1);
    let _ = writeln!(s, "{title}");
    let _ = write!(s, "  {:w$}", "");
    for c in cols {
        let _ = write!(s, " {c:>w$}");
    }
    let _ = writeln!(s);
    for (r, row) in rows.iter().zip(m) {
        let _ = write!(s, "  {r:w$}");
        for &v in row {
            let _ = write!(s, " {:>w$}", if v { "1" } else { "0" });
        }
        let _ = writeln!(s);
    }
}

fn cones(s: &mut String, title: &str, map: &NeighbourhoodMap) {
    let _ = writeln!(s, "{title} after {} step(s)", map.steps);
    for c in &map.cells {
        let fmt = |v: &[usize]| {
            v.iter()
                .map(|i| format!("c{i}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(
            s,
            "  c{}: causal {{{}}} signalling {{{}}}",
            c.cell,
            fmt(&c.causal),
            fmt(&c.signalling)
        );
    }
}
