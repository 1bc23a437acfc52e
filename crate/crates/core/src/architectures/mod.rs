//! Behavior generators behind a single step interface.
//!
//! Every agent owns one generator ([`Fasa`]). Random and positional
//! generators ignore the world; the four sensitive architectures look up the
//! representation of the current state, generate an act sequence from their
//! tables and project one element of it. An absent representation or an
//! empty prediction yields the universe's neutral act.

pub mod digits;
pub mod elementary;
pub mod learning;
pub mod redundancy;
pub mod tables;

use std::fmt;

use thiserror::Error;

pub use elementary::{DigitSource, PositionalFasa, RandomFasa};
pub use learning::{History, HistoryRecord, Learner};
pub use redundancy::{detect_redundancy, FunctionalUnit, RedundancyError, RedundantChain, UnitGraph};
pub use tables::{PredictionTableAlpha, PredictionTableAlphaBeta};

use crate::representation::{interpret_act, ActRepresentation, Formula, RepresentationError, RepresentationMap};
use crate::universe::{ActId, StateId, Universe, UniverseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchitectureError {
    #[error("projection index {index} exceeds generated sequence of length {len}")]
    ProjectionOutOfRange { index: usize, len: usize },
    #[error("digit source exhausted at t={needed} ({available} digits available)")]
    DigitSourceExhausted { needed: u64, available: usize },
    #[error("digit {digit} does not exist in base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("positional generator needs at least one act")]
    EmptyActOrder,
    #[error("weights must be non-negative and sum to 1")]
    InvalidWeights,
    #[error("sequence of length {len} does not fit depth {depth}")]
    SequenceLength { len: usize, depth: usize },
    #[error("duplicate table entry for {0}")]
    DuplicateEntry(String),
    #[error("formula `{0}` does not represent any state")]
    UnrepresentedFormula(Formula),
    #[error("architecture `{0}` is not sensitive")]
    NotSensitive(ArchitectureKind),
    #[error("architecture `{0}` has no (source, goal) prediction table")]
    NoAlphaBetaTable(ArchitectureKind),
    #[error("architecture `{0}` does not learn")]
    NotLearning(ArchitectureKind),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchitectureKind {
    Random,
    Positional,
    AfsI,
    AfsIIA,
    AfsIIB,
    AfsIIIA,
}

impl ArchitectureKind {
    pub const ALL: [ArchitectureKind; 6] = [
        ArchitectureKind::Random,
        ArchitectureKind::Positional,
        ArchitectureKind::AfsI,
        ArchitectureKind::AfsIIA,
        ArchitectureKind::AfsIIB,
        ArchitectureKind::AfsIIIA,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ArchitectureKind::Random => "random",
            ArchitectureKind::Positional => "positional",
            ArchitectureKind::AfsI => "afs1",
            ArchitectureKind::AfsIIA => "afs2a",
            ArchitectureKind::AfsIIB => "afs2b",
            ArchitectureKind::AfsIIIA => "afs3a",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    pub fn is_sensitive(self) -> bool {
        !matches!(self, ArchitectureKind::Random | ArchitectureKind::Positional)
    }
}

impl fmt::Display for ArchitectureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The generator an agent runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Fasa {
    Random(RandomFasa),
    Positional(PositionalFasa),
    /// Reactive table, depth 1.
    Reactive(PredictionTableAlpha),
    /// Goal-directed `(observed, goal)` table.
    GoalDirected {
        table: PredictionTableAlphaBeta,
        goal: Formula,
    },
    /// `(observed, recalled)` table; the recall slot is overwritten with the
    /// observed formula after every step.
    Memory {
        table: PredictionTableAlphaBeta,
        initial: Option<Formula>,
        memory: Option<Formula>,
    },
    /// Goal-directed lookup through the candidate chosen by the learner.
    Learning(Learner),
}

impl Fasa {
    pub fn kind(&self) -> ArchitectureKind {
        match self {
            Fasa::Random(_) => ArchitectureKind::Random,
            Fasa::Positional(_) => ArchitectureKind::Positional,
            Fasa::Reactive(_) => ArchitectureKind::AfsI,
            Fasa::GoalDirected { .. } => ArchitectureKind::AfsIIA,
            Fasa::Memory { .. } => ArchitectureKind::AfsIIB,
            Fasa::Learning(_) => ArchitectureKind::AfsIIIA,
        }
    }
}

/// What one step produced. `generated` is the sequence the sensitive
/// generator emitted (`None` for elementary generators, blind spots and
/// empty predictions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutput {
    pub act: ActId,
    pub formula: Option<Formula>,
    pub generated: Option<Vec<ActRepresentation>>,
}

/// A (source, goal) entry whose sequence does not lead to its goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonOriented {
    /// Candidate index for learning agents, 0 otherwise.
    pub table: usize,
    pub source: Formula,
    pub goal: Formula,
    pub start: StateId,
    pub end: StateId,
}

/// An agent: a named generator bound to a universe, plus the representation
/// map and projection index the sensitive generators use.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentArchitecture {
    pub name: String,
    pub universe: String,
    pub representation: RepresentationMap,
    /// 1-based position selected from the generated sequence.
    pub projection: usize,
    pub fasa: Fasa,
}

impl AgentArchitecture {
    pub fn new(name: impl Into<String>, universe: impl Into<String>, fasa: Fasa) -> Self {
        AgentArchitecture {
            name: name.into(),
            universe: universe.into(),
            representation: RepresentationMap::new(),
            projection: 1,
            fasa,
        }
    }

    pub fn kind(&self) -> ArchitectureKind {
        self.fasa.kind()
    }

    /// The projection index; 1 means the behavior is ordered.
    pub fn via_class(&self) -> Result<usize, ArchitectureError> {
        if !self.kind().is_sensitive() {
            return Err(ArchitectureError::NotSensitive(self.kind()));
        }
        Ok(self.projection)
    }

    /// Replaces the PRNG seed of random agents; no effect on other kinds.
    pub fn reseed(&mut self, seed: u64) {
        if let Fasa::Random(r) = &mut self.fasa {
            r.seed = seed;
        }
    }

    /// Chooses the act for time `t` while the world is in `current`.
    pub fn step(&mut self, u: &Universe, current: StateId, t: u64) -> Result<StepOutput, ArchitectureError> {
        let elementary = |act| StepOutput { act, formula: None, generated: None };
        match &mut self.fasa {
            Fasa::Random(r) => return Ok(elementary(r.act_at(t))),
            Fasa::Positional(p) => return p.act_at(t).map(elementary),
            _ => {}
        }
        if !u.contains_state(current) {
            return Err(UniverseError::UnknownState(current.0).into());
        }
        let Some(psi) = self.representation.represent(current).cloned() else {
            if let Fasa::Memory { memory, .. } = &mut self.fasa {
                *memory = None;
            }
            return Ok(StepOutput { act: u.neutral_act, formula: None, generated: None });
        };

        let generated: Option<Vec<ActRepresentation>> = match &mut self.fasa {
            Fasa::Reactive(table) => table.predict(&psi).map(|a| vec![a.clone()]),
            Fasa::GoalDirected { table, goal } => table.predict(&psi, goal).map(<[_]>::to_vec),
            Fasa::Memory { table, memory, .. } => {
                let recalled = memory.clone().unwrap_or_else(|| psi.clone());
                let seq = table.predict(&psi, &recalled).map(<[_]>::to_vec);
                *memory = Some(psi.clone());
                seq
            }
            Fasa::Learning(learner) => {
                let seq = learner.active_table().predict(&psi, learner.goal()).map(<[_]>::to_vec);
                if seq.is_some() {
                    learner.issue(psi.clone(), t);
                }
                seq
            }
            Fasa::Random(_) | Fasa::Positional(_) => unreachable!(),
        };

        let Some(seq) = generated else {
            return Ok(StepOutput { act: u.neutral_act, formula: Some(psi), generated: None });
        };
        let selected = self
            .projection
            .checked_sub(1)
            .and_then(|i| seq.get(i))
            .ok_or(ArchitectureError::ProjectionOutOfRange { index: self.projection, len: seq.len() })?;
        let act = interpret_act(u, selected)?;
        Ok(StepOutput { act, formula: Some(psi), generated: Some(seq) })
    }

    /// Lets stateful generators see the state reached at time `now`.
    pub fn observe(&mut self, reached: StateId, now: u64) {
        if let Fasa::Learning(learner) = &mut self.fasa {
            learner.observe(self.representation.represent(reached), now);
        }
    }

    /// Records the outcome of the active candidate's latest prediction and
    /// re-selects the active candidate.
    pub fn update_learning(&mut self, observed: Formula, success: bool) -> Result<(), ArchitectureError> {
        match &mut self.fasa {
            Fasa::Learning(learner) => {
                learner.update(observed, success);
                Ok(())
            }
            _ => Err(ArchitectureError::NotLearning(self.kind())),
        }
    }

    /// Goal-directed tables of this agent, paired with their candidate index.
    pub fn alpha_beta_tables(&self) -> Result<Vec<(usize, &PredictionTableAlphaBeta)>, ArchitectureError> {
        match &self.fasa {
            Fasa::GoalDirected { table, .. } => Ok(vec![(0, table)]),
            Fasa::Learning(learner) => Ok(learner.pool().iter().enumerate().collect()),
            _ => Err(ArchitectureError::NoAlphaBetaTable(self.kind())),
        }
    }

    /// Replays every (source, goal) entry from each state its source
    /// represents and lists the entries that do not end in a state
    /// represented by the goal.
    pub fn check_oriented(&self, u: &Universe) -> Result<Vec<NonOriented>, ArchitectureError> {
        let mut out = Vec::new();
        for (index, table) in self.alpha_beta_tables()? {
            for (source, goal, seq) in table.iter() {
                let starts = self.representation.preimage(source);
                if starts.is_empty() {
                    return Err(ArchitectureError::UnrepresentedFormula(source.clone()));
                }
                if !self.representation.contains_formula(goal) {
                    return Err(ArchitectureError::UnrepresentedFormula(goal.clone()));
                }
                let acts = seq.iter().map(|a| interpret_act(u, a)).collect::<Result<Vec<_>, _>>()?;
                for start in starts {
                    let mut state = start;
                    for act in &acts {
                        state = u.next_state(state, *act)?;
                    }
                    if self.representation.represent(state) != Some(goal) {
                        out.push(NonOriented {
                            table: index,
                            source: source.clone(),
                            goal: goal.clone(),
                            start,
                            end: state,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}
