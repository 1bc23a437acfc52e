//! Finite universes: states, acts, a deterministic transition table, state
//! classification and the energy budget that decides exoactivity.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Index of a state inside its [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Index of an act inside its [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ActId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateClass {
    Positive,
    Neutral,
    Negative,
}

impl StateClass {
    pub fn keyword(self) -> &'static str {
        match self {
            StateClass::Positive => "positive",
            StateClass::Neutral => "neutral",
            StateClass::Negative => "negative",
        }
    }
}

/// Exoactivity restrictions expressed as an integer energy budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyRules {
    pub initial_energy: i64,
    pub per_step_cost: i64,
    pub negative_penalty: i64,
    pub positive_reward: i64,
    pub energy_cap: i64,
}

impl EnergyRules {
    /// Energy after one step that lands in a state of class `next`.
    ///
    /// The result is clamped to `[0, energy_cap]`.
    pub fn apply(&self, energy: i64, next: StateClass) -> i64 {
        let adjustment = match next {
            StateClass::Positive => self.positive_reward,
            StateClass::Neutral => 0,
            StateClass::Negative => -self.negative_penalty,
        };
        (energy - self.per_step_cost + adjustment).clamp(0, self.energy_cap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("unknown state #{0}")]
    UnknownState(u32),
    #[error("unknown act #{0}")]
    UnknownAct(u32),
    #[error("no transition for state `{state}` under act `{act}`")]
    MissingTransition { state: String, act: String },
}

/// A single invariant violation reported by [`Universe::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    NoActs,
    DuplicateState(String),
    DuplicateAct(String),
    UnknownInitial,
    UnknownNeutralAct,
    MissingTransition { state: String, act: String },
    UnknownTarget { state: String, act: String },
    ClassCount { expected: usize, found: usize },
    Energy { field: &'static str, reason: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "states: universe has no states"),
            Violation::NoActs => write!(f, "acts: universe has no acts"),
            Violation::DuplicateState(s) => write!(f, "states: duplicate state `{s}`"),
            Violation::DuplicateAct(a) => write!(f, "acts: duplicate act `{a}`"),
            Violation::UnknownInitial => write!(f, "initial: not one of the declared states"),
            Violation::UnknownNeutralAct => write!(f, "neutral_act: not one of the declared acts"),
            Violation::MissingTransition { state, act } => {
                write!(f, "transitions: missing transition for ({state}, {act})")
            }
            Violation::UnknownTarget { state, act } => {
                write!(f, "transitions: target of ({state}, {act}) is not a declared state")
            }
            Violation::ClassCount { expected, found } => {
                write!(f, "classes: {found} classifications for {expected} states")
            }
            Violation::Energy { field, reason } => write!(f, "energy.{field}: {reason}"),
        }
    }
}

/// Finite deterministic labeled transition system with a distinguished
/// initial state and neutral act.
///
/// States and acts are addressed by dense indices; `transitions` is a
/// row-major `states × acts` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pub name: String,
    pub states: Vec<String>,
    pub acts: Vec<String>,
    pub neutral_act: ActId,
    pub initial: StateId,
    pub transitions: Vec<Option<StateId>>,
    pub classes: Vec<StateClass>,
    pub energy: EnergyRules,
}

impl Universe {
    /// Creates a universe with no transitions; every state is Neutral.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        acts: Vec<String>,
        neutral_act: ActId,
        initial: StateId,
        energy: EnergyRules,
    ) -> Self {
        let cells = states.len() * acts.len();
        let classes = vec![StateClass::Neutral; states.len()];
        Universe {
            name: name.into(),
            states,
            acts,
            neutral_act,
            initial,
            transitions: vec![None; cells],
            classes,
            energy,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn act_count(&self) -> usize {
        self.acts.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn act_ids(&self) -> impl Iterator<Item = ActId> + '_ {
        (0..self.acts.len() as u32).map(ActId)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn act_id(&self, name: &str) -> Option<ActId> {
        self.acts.iter().position(|a| a == name).map(|i| ActId(i as u32))
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn act_name(&self, a: ActId) -> &str {
        &self.acts[a.index()]
    }

    pub fn class_of(&self, s: StateId) -> StateClass {
        self.classes[s.index()]
    }

    pub fn contains_state(&self, s: StateId) -> bool {
        s.index() < self.states.len()
    }

    pub fn contains_act(&self, a: ActId) -> bool {
        a.index() < self.acts.len()
    }

    pub fn set_transition(&mut self, from: StateId, act: ActId, to: StateId) {
        let cell = self.cell(from, act);
        self.transitions[cell] = Some(to);
    }

    pub fn transition(&self, from: StateId, act: ActId) -> Option<StateId> {
        if !self.contains_state(from) || !self.contains_act(act) {
            return None;
        }
        self.transitions.get(self.cell(from, act)).copied().flatten()
    }

    fn cell(&self, from: StateId, act: ActId) -> usize {
        from.index() * self.acts.len() + act.index()
    }

    /// Successor of `current` under `act`, ignoring energy.
    pub fn next_state(&self, current: StateId, act: ActId) -> Result<StateId, UniverseError> {
        if !self.contains_state(current) {
            return Err(UniverseError::UnknownState(current.0));
        }
        if !self.contains_act(act) {
            return Err(UniverseError::UnknownAct(act.0));
        }
        self.transition(current, act).ok_or_else(|| UniverseError::MissingTransition {
            state: self.state_name(current).to_owned(),
            act: self.act_name(act).to_owned(),
        })
    }

    /// One discrete step of the world.
    pub fn advance(&self, current: StateId, act: ActId, energy: i64) -> Result<Advance, UniverseError> {
        let next = self.next_state(current, act)?;
        let energy = self.energy.apply(energy, self.class_of(next));
        Ok(Advance { next, energy, exoactive: energy > 0 })
    }

    /// Lists every broken invariant; an empty list means the universe is usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Violation::NoStates);
        }
        if self.acts.is_empty() {
            out.push(Violation::NoActs);
        }
        let mut seen = HashSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        let mut seen = HashSet::new();
        for a in &self.acts {
            if !seen.insert(a) {
                out.push(Violation::DuplicateAct(a.clone()));
            }
        }
        if !self.contains_state(self.initial) {
            out.push(Violation::UnknownInitial);
        }
        if !self.contains_act(self.neutral_act) {
            out.push(Violation::UnknownNeutralAct);
        }
        if self.classes.len() != self.states.len() {
            out.push(Violation::ClassCount { expected: self.states.len(), found: self.classes.len() });
        }
        for s in self.state_ids() {
            for a in self.act_ids() {
                match self.transition(s, a) {
                    None => out.push(Violation::MissingTransition {
                        state: self.state_name(s).to_owned(),
                        act: self.act_name(a).to_owned(),
                    }),
                    Some(t) if !self.contains_state(t) => out.push(Violation::UnknownTarget {
                        state: self.state_name(s).to_owned(),
                        act: self.act_name(a).to_owned(),
                    }),
                    Some(_) => {}
                }
            }
        }

        let e = &self.energy;
        if e.initial_energy <= 0 {
            out.push(Violation::Energy { field: "initial", reason: "must be positive" });
        }
        for (field, value) in [
            ("per_step", e.per_step_cost),
            ("negative_penalty", e.negative_penalty),
            ("positive_reward", e.positive_reward),
        ] {
            if value < 0 {
                out.push(Violation::Energy { field, reason: "must not be negative" });
            }
        }
        if e.energy_cap < e.initial_energy {
            out.push(Violation::Energy { field: "cap", reason: "must be at least the initial energy" });
        }
        out
    }
}

/// Result of [`Universe::advance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Advance {
    pub next: StateId,
    pub energy: i64,
    pub exoactive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalReason {
    ExoinactiveEnergy,
    StepLimit,
}

impl TerminalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalReason::ExoinactiveEnergy => "exoinactive_energy",
            TerminalReason::StepLimit => "step_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub time: u64,
    pub state_before: StateId,
    pub act: ActId,
    pub state_after: StateId,
    pub energy_after: i64,
}

/// Time-indexed record of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub terminal_reason: TerminalReason,
}

impl Trajectory {
    /// Number of steps the system stayed exoactive.
    pub fn persistence(&self) -> u64 {
        self.steps.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn rules() -> EnergyRules {
        EnergyRules { initial_energy: 5, per_step_cost: 1, negative_penalty: 3, positive_reward: 2, energy_cap: 10 }
    }

    fn loop_world() -> Universe {
        let mut u = Universe::new("w", names("e", 3), names("a", 2), ActId(0), StateId(0), rules());
        for s in u.state_ids().collect::<Vec<_>>() {
            u.set_transition(s, ActId(0), s);
            u.set_transition(s, ActId(1), StateId((s.0 + 1) % 3));
        }
        u
    }

    #[test]
    fn neutral_self_loop_costs_one_step() {
        let u = loop_world();
        let r = u.advance(StateId(1), ActId(0), 5).unwrap();
        assert_eq!(r, Advance { next: StateId(1), energy: 4, exoactive: true });
    }

    #[test]
    fn negative_state_penalty_can_end_exoactivity() {
        let mut u = loop_world();
        u.classes[2] = StateClass::Negative;
        let r = u.advance(StateId(1), ActId(1), 4).unwrap();
        assert_eq!(r, Advance { next: StateId(2), energy: 0, exoactive: false });
    }

    #[test]
    fn reward_is_capped() {
        let mut u = loop_world();
        u.classes[0] = StateClass::Positive;
        let r = u.advance(StateId(0), ActId(0), 10).unwrap();
        assert_eq!(r.energy, 10);
        let r = u.advance(StateId(0), ActId(0), 3).unwrap();
        assert_eq!(r.energy, 4);
    }

    #[test]
    fn unknown_identifiers_are_errors() {
        let u = loop_world();
        assert_eq!(u.advance(StateId(9), ActId(0), 5), Err(UniverseError::UnknownState(9)));
        assert_eq!(u.advance(StateId(0), ActId(7), 5), Err(UniverseError::UnknownAct(7)));
    }

    #[test]
    fn validate_reports_missing_transition() {
        let mut u = loop_world();
        assert!(u.validate().is_empty());
        u.transitions[1] = None;
        assert_eq!(u.validate(), vec![Violation::MissingTransition { state: "e1".into(), act: "a2".into() }]);
    }

    #[test]
    fn validate_reports_unknown_initial() {
        let mut u = loop_world();
        u.initial = StateId(3);
        assert_eq!(u.validate(), vec![Violation::UnknownInitial]);
    }

    #[test]
    fn validate_checks_energy_rules() {
        let mut u = loop_world();
        u.energy.energy_cap = 2;
        u.energy.per_step_cost = -1;
        let v = u.validate();
        assert!(v.contains(&Violation::Energy { field: "cap", reason: "must be at least the initial energy" }));
        assert!(v.contains(&Violation::Energy { field: "per_step", reason: "must not be negative" }));
    }

    #[test]
    fn all_neutral_energy_is_linear() {
        let u = loop_world();
        let mut energy = u.energy.initial_energy;
        let mut state = u.initial;
        for k in 1..=4 {
            let r = u.advance(state, ActId(1), energy).unwrap();
            state = r.next;
            energy = r.energy;
            assert_eq!(energy, u.energy.initial_energy - k * u.energy.per_step_cost);
        }
    }
}
