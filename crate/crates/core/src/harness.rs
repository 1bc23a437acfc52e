//! Simulation loop and the batch persistence experiment.

use std::io::Write;
use std::path::PathBuf;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::architectures::{AgentArchitecture, ArchitectureError, ArchitectureKind, Fasa};
use crate::dsl::{self, ParseDiagnostic, SpecDocument};
use crate::representation::{ActRepresentation, Formula};
use crate::stats::{mann_whitney_u, summarize, RankSum, Summary};
use crate::universe::{ActId, StateId, Step, TerminalReason, Trajectory, Universe, UniverseError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("specification is invalid ({} errors)", .0.iter().filter(|d| d.is_error()).count())]
    SpecInvalid(Vec<ParseDiagnostic>),
    #[error("experiment needs at least one {0} agent")]
    MissingAgentKind(&'static str),
    #[error("agent `{agent}` is bound to unknown universe `{universe}`")]
    UnboundAgent { agent: String, universe: String },
    #[error("agent `{agent}` at t={t}: {source}")]
    Step { agent: String, t: u64, source: ArchitectureError },
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("writing results: {0}")]
    Csv(#[from] csv::Error),
}

/// One simulated step as seen from inside the agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub t: u64,
    pub state: StateId,
    pub formula: Option<Formula>,
    pub generated: Option<Vec<ActRepresentation>>,
    pub act: ActId,
    pub next: StateId,
    pub energy: i64,
}

fn prepared(agent: &AgentArchitecture, max_steps: u64, seed: u64) -> AgentArchitecture {
    let mut a = agent.clone();
    a.reseed(seed);
    if let Fasa::Positional(p) = &mut a.fasa {
        p.prefetch(max_steps as usize);
    }
    a
}

fn simulate(
    u: &Universe,
    agent: &mut AgentArchitecture,
    max_steps: u64,
    mut record: impl FnMut(TraceRecord),
) -> Result<Trajectory, HarnessError> {
    let mut state = u.initial;
    let mut energy = u.energy.initial_energy;
    let mut steps = Vec::new();
    let mut t = 0;
    let terminal_reason = loop {
        if t == max_steps {
            break TerminalReason::StepLimit;
        }
        let out =
            agent.step(u, state, t).map_err(|source| HarnessError::Step { agent: agent.name.clone(), t, source })?;
        let adv = u.advance(state, out.act, energy)?;
        agent.observe(adv.next, t + 1);
        record(TraceRecord {
            t,
            state,
            formula: out.formula,
            generated: out.generated,
            act: out.act,
            next: adv.next,
            energy: adv.energy,
        });
        steps.push(Step {
            time: t,
            state_before: state,
            act: out.act,
            state_after: adv.next,
            energy_after: adv.energy,
        });
        state = adv.next;
        energy = adv.energy;
        t += 1;
        if !adv.exoactive {
            break TerminalReason::ExoinactiveEnergy;
        }
    };
    Ok(Trajectory { steps, terminal_reason })
}

/// Runs `agent` in `u` from the initial state until energy runs out or
/// `max_steps` steps have been taken. The agent is cloned, so repeated
/// calls with the same arguments give identical trajectories.
pub fn run_trajectory(
    u: &Universe,
    agent: &AgentArchitecture,
    max_steps: u64,
    seed: u64,
) -> Result<Trajectory, HarnessError> {
    let mut a = prepared(agent, max_steps, seed);
    simulate(u, &mut a, max_steps, |_| {})
}

/// Like [`run_trajectory`], also returning the per-step records.
pub fn trace(
    u: &Universe,
    agent: &AgentArchitecture,
    max_steps: u64,
    seed: u64,
) -> Result<(Trajectory, Vec<TraceRecord>), HarnessError> {
    let mut a = prepared(agent, max_steps, seed);
    let mut records = Vec::new();
    let traj = simulate(u, &mut a, max_steps, |r| records.push(r))?;
    Ok((traj, records))
}

/// Seed of run `run_id`: the first word of ChaCha8 stream `run_id` keyed by
/// the master seed.
pub fn derive_seed(master_seed: u64, run_id: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run_id);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub spec_path: PathBuf,
    pub runs_per_agent: u64,
    pub max_steps: u64,
    pub master_seed: u64,
    /// CSV destination; `None` keeps results in memory only.
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRow {
    pub run_id: u64,
    pub agent: String,
    pub kind: ArchitectureKind,
    pub seed: u64,
    pub persistence_steps: u64,
    pub terminal_reason: TerminalReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub left: &'static str,
    pub right: &'static str,
    pub test: Option<RankSum>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<RunRow>,
    pub per_agent: Vec<(String, Summary)>,
    /// Pooled summaries for the `sensitive`, `random` and `positional` groups.
    pub per_group: Vec<(&'static str, Summary)>,
    pub comparisons: Vec<Comparison>,
}

fn group_of(kind: ArchitectureKind) -> &'static str {
    match kind {
        ArchitectureKind::Random => "random",
        ArchitectureKind::Positional => "positional",
        _ => "sensitive",
    }
}

const GROUPS: [&str; 3] = ["sensitive", "random", "positional"];

impl ExperimentResult {
    pub fn group(&self, name: &str) -> Option<&Summary> {
        self.per_group.iter().find(|(g, _)| *g == name).map(|(_, s)| s)
    }

    pub fn comparison(&self, right: &str) -> Option<&RankSum> {
        self.comparisons.iter().find(|c| c.right == right).and_then(|c| c.test.as_ref())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["run_id", "agent", "kind", "seed", "persistence_steps", "terminal_reason"])?;
        for r in &self.rows {
            w.write_record([
                r.run_id.to_string().as_str(),
                &r.agent,
                r.kind.keyword(),
                &r.seed.to_string(),
                &r.persistence_steps.to_string(),
                r.terminal_reason.as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::from("agent mean median min max\n");
        let line = |name: &str, s: &Summary| format!("{name} {:.2} {:.1} {} {}\n", s.mean, s.median, s.min, s.max);
        for (name, s) in &self.per_agent {
            out.push_str(&line(name, s));
        }
        for (name, s) in &self.per_group {
            out.push_str(&line(&format!("[{name}]"), s));
        }
        for c in &self.comparisons {
            match &c.test {
                Some(t) => out.push_str(&format!("{} vs {}: U={} p={:.3e}\n", c.left, c.right, t.u, t.p_value)),
                None => out.push_str(&format!("{} vs {}: n/a\n", c.left, c.right)),
            }
        }
        out
    }
}

/// Runs every agent of `doc` `runs_per_agent` times. Row `run_id` is
/// `agent_index * runs_per_agent + k`; runs execute in parallel but rows come
/// back in `run_id` order.
pub fn run_experiment_on(
    doc: &SpecDocument,
    runs_per_agent: u64,
    max_steps: u64,
    master_seed: u64,
) -> Result<ExperimentResult, HarnessError> {
    for (label, wanted) in [("random", ArchitectureKind::Random), ("positional", ArchitectureKind::Positional)] {
        if !doc.agents.iter().any(|a| a.kind() == wanted) {
            return Err(HarnessError::MissingAgentKind(label));
        }
    }
    if !doc.agents.iter().any(|a| a.kind().is_sensitive()) {
        return Err(HarnessError::MissingAgentKind("sensitive"));
    }

    let mut jobs = Vec::new();
    for (i, agent) in doc.agents.iter().enumerate() {
        let u = doc.universe_of(agent).ok_or_else(|| HarnessError::UnboundAgent {
            agent: agent.name.clone(),
            universe: agent.universe.clone(),
        })?;
        let template = prepared(agent, max_steps, 0);
        for k in 0..runs_per_agent {
            jobs.push((i as u64 * runs_per_agent + k, u, template.clone()));
        }
    }

    let rows = jobs
        .into_par_iter()
        .map(|(run_id, u, mut agent)| {
            let seed = derive_seed(master_seed, run_id);
            agent.reseed(seed);
            let traj = simulate(u, &mut agent, max_steps, |_| {})?;
            Ok(RunRow {
                run_id,
                agent: agent.name.clone(),
                kind: agent.kind(),
                seed,
                persistence_steps: traj.persistence(),
                terminal_reason: traj.terminal_reason,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let values = |keep: &dyn Fn(&RunRow) -> bool| -> Vec<f64> {
        rows.iter().filter(|r| keep(r)).map(|r| r.persistence_steps as f64).collect()
    };
    let per_agent = doc
        .agents
        .iter()
        .filter_map(|a| summarize(&values(&|r| r.agent == a.name)).map(|s| (a.name.clone(), s)))
        .collect();
    let per_group =
        GROUPS.iter().filter_map(|g| summarize(&values(&|r| group_of(r.kind) == *g)).map(|s| (*g, s))).collect();
    let sensitive = values(&|r| group_of(r.kind) == "sensitive");
    let comparisons = ["random", "positional"]
        .into_iter()
        .map(|other| Comparison {
            left: "sensitive",
            right: other,
            test: mann_whitney_u(&sensitive, &values(&|r| group_of(r.kind) == other)),
        })
        .collect();
    Ok(ExperimentResult { rows, per_agent, per_group, comparisons })
}

/// Reads and validates the spec file, runs the experiment and, when an
/// output path is set, writes the CSV there.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let text = std::fs::read_to_string(&cfg.spec_path)
        .map_err(|source| HarnessError::Io { path: cfg.spec_path.clone(), source })?;
    let doc = dsl::parse(&text).map_err(HarnessError::SpecInvalid)?;
    let result = run_experiment_on(&doc, cfg.runs_per_agent, cfg.max_steps, cfg.master_seed)?;
    if let Some(path) = &cfg.output {
        let file = std::fs::File::create(path).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
        result.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::RandomFasa;
    use crate::universe::EnergyRules;

    fn neutral_world() -> Universe {
        let rules =
            EnergyRules { initial_energy: 5, per_step_cost: 1, negative_penalty: 0, positive_reward: 0, energy_cap: 5 };
        let mut u = Universe::new(
            "flat",
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            ActId(0),
            StateId(0),
            rules,
        );
        for s in u.state_ids().collect::<Vec<_>>() {
            for a in u.act_ids().collect::<Vec<_>>() {
                u.set_transition(s, a, StateId(1 - s.0));
            }
        }
        u
    }

    #[test]
    fn neutral_world_persists_initial_energy_steps() {
        let u = neutral_world();
        let agent = AgentArchitecture::new("r", "flat", Fasa::Random(RandomFasa::uniform(0, 2)));
        let t = run_trajectory(&u, &agent, 100, 9).unwrap();
        assert_eq!(t.persistence(), 5);
        assert_eq!(t.terminal_reason, TerminalReason::ExoinactiveEnergy);
    }

    #[test]
    fn zero_steps() {
        let u = neutral_world();
        let agent = AgentArchitecture::new("r", "flat", Fasa::Random(RandomFasa::uniform(0, 2)));
        let t = run_trajectory(&u, &agent, 0, 9).unwrap();
        assert_eq!(t.persistence(), 0);
        assert_eq!(t.terminal_reason, TerminalReason::StepLimit);
    }

    #[test]
    fn trajectories_are_reproducible() {
        let u = neutral_world();
        let agent = AgentArchitecture::new("r", "flat", Fasa::Random(RandomFasa::uniform(0, 2)));
        assert_eq!(trace(&u, &agent, 4, 3).unwrap(), trace(&u, &agent, 4, 3).unwrap());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| derive_seed(1, k)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
