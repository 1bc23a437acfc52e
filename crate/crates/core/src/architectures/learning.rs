//! Prediction-function selection from a candidate pool.

use num_rational::Ratio;

use crate::architectures::tables::PredictionTableAlphaBeta;
use crate::representation::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryRecord {
    pub observed: Formula,
    pub table: usize,
    pub success: bool,
}

/// Append-only record of issued predictions and their outcomes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    records: Vec<HistoryRecord>,
}

impl History {
    pub fn push(&mut self, record: HistoryRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[HistoryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// (successes, trials) for one candidate.
    pub fn tally(&self, table: usize) -> (u64, u64) {
        self.records.iter().filter(|r| r.table == table).fold((0, 0), |(s, n), r| (s + r.success as u64, n + 1))
    }
}

/// Laplace-smoothed success rate `(s + 1) / (n + 2)`; an untried candidate
/// scores 1/2.
pub fn success_score(successes: u64, trials: u64) -> Ratio<u64> {
    Ratio::new(successes + 1, trials + 2)
}

/// Index of the best-scoring candidate; ties go to the lowest index.
pub fn select(history: &History, pool_size: usize) -> usize {
    let mut best = 0;
    let mut best_score = None;
    for i in 0..pool_size {
        let (s, n) = history.tally(i);
        let score = success_score(s, n);
        if best_score.is_none_or(|b| score > b) {
            best = i;
            best_score = Some(score);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pending {
    observed: Formula,
    table: usize,
    issued: u64,
}

/// Runtime state of a learning agent: the candidate pool, the goal it is
/// judged against, the outcome history and the active candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Learner {
    pool: Vec<PredictionTableAlphaBeta>,
    goal: Formula,
    history: History,
    active: usize,
    pending: Vec<Pending>,
}

impl Learner {
    pub fn new(pool: Vec<PredictionTableAlphaBeta>, goal: Formula) -> Self {
        Learner { pool, goal, history: History::default(), active: 0, pending: Vec::new() }
    }

    pub fn pool(&self) -> &[PredictionTableAlphaBeta] {
        &self.pool
    }

    pub fn goal(&self) -> &Formula {
        &self.goal
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn active(&self) -> usize {
        self.active
    }

    pub fn active_table(&self) -> &PredictionTableAlphaBeta {
        &self.pool[self.active]
    }

    /// Appends one outcome and re-selects the active candidate.
    pub fn record_outcome(&mut self, observed: Formula, table: usize, success: bool) {
        self.history.push(HistoryRecord { observed, table, success });
        self.active = select(&self.history, self.pool.len());
    }

    /// Outcome of a prediction issued by the currently active candidate.
    pub fn update(&mut self, observed: Formula, success: bool) {
        let table = self.active;
        self.record_outcome(observed, table, success);
    }

    pub(crate) fn issue(&mut self, observed: Formula, issued: u64) {
        self.pending.push(Pending { observed, table: self.active, issued });
    }

    /// Resolves pending predictions after the world moved to a state
    /// represented by `reached` at time `now`. A prediction succeeds when the
    /// goal shows up within the table depth of its issuance.
    pub(crate) fn observe(&mut self, reached: Option<&Formula>, now: u64) {
        let at_goal = reached == Some(&self.goal);
        let pending = std::mem::take(&mut self.pending);
        for p in pending {
            let depth = self.pool[p.table].depth_max() as u64;
            if at_goal {
                self.record_outcome(p.observed, p.table, true);
            } else if now - p.issued >= depth {
                self.record_outcome(p.observed, p.table, false);
            } else {
                self.pending.push(p);
            }
        }
    }
}
