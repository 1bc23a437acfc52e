//! State representations and the interpretation of act tokens.
//!
//! Two maps are kept apart here even though they are often written with the
//! same letter: [`RepresentationMap::represent`] sends world states to
//! formulas, while [`interpret_act`] sends the act tokens found in prediction
//! tables back to acts of the universe.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::universe::{ActId, StateId, Universe};

/// Opaque formula of the representation language. Equality is token equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Arc<str>);

impl Formula {
    pub fn new(token: impl AsRef<str>) -> Self {
        Formula(Arc::from(token.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Formula {
    fn from(s: &str) -> Self {
        Formula::new(s)
    }
}

/// Act token as it appears inside prediction tables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActRepresentation {
    pub token: String,
}

impl ActRepresentation {
    pub fn new(token: impl Into<String>) -> Self {
        ActRepresentation { token: token.into() }
    }
}

impl fmt::Display for ActRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("act token `{0}` does not name an act of the universe")]
    UnknownActToken(String),
    #[error("a representation needs at least two distinct formulas, found {0}")]
    ImageTooSmall(usize),
    #[error("state #{0} is not part of the universe")]
    UnknownState(u32),
}

/// Possibly partial map from states to formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepresentationMap {
    entries: BTreeMap<StateId, Formula>,
}

impl RepresentationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the formula of `state`, returning the previous one.
    pub fn insert(&mut self, state: StateId, formula: Formula) -> Option<Formula> {
        self.entries.insert(state, formula)
    }

    /// Formula for `state`, or `None` when the state is a blind spot.
    pub fn represent(&self, state: StateId) -> Option<&Formula> {
        self.entries.get(&state)
    }

    /// All states whose representation is `formula`, in index order.
    pub fn preimage(&self, formula: &Formula) -> Vec<StateId> {
        self.entries.iter().filter(|(_, f)| *f == formula).map(|(s, _)| *s).collect()
    }

    /// Inverse lookup that only succeeds when the preimage is a single state.
    pub fn invert(&self, formula: &Formula) -> Option<StateId> {
        match self.preimage(formula).as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    pub fn image(&self) -> BTreeSet<&Formula> {
        self.entries.values().collect()
    }

    pub fn contains_formula(&self, formula: &Formula) -> bool {
        self.entries.values().any(|f| f == formula)
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &Formula)> {
        self.entries.iter().map(|(s, f)| (*s, f))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that the map counts as a representation of `u`: every covered
    /// state exists and at least two distinct formulas are used.
    pub fn validate(&self, u: &Universe) -> Result<(), RepresentationError> {
        if let Some(s) = self.entries.keys().find(|s| !u.contains_state(**s)) {
            return Err(RepresentationError::UnknownState(s.0));
        }
        let image = self.image().len();
        if image < 2 {
            return Err(RepresentationError::ImageTooSmall(image));
        }
        Ok(())
    }
}

/// Resolves an act token to the act it denotes in `u`.
pub fn interpret_act(u: &Universe, act: &ActRepresentation) -> Result<ActId, RepresentationError> {
    u.act_id(&act.token).ok_or_else(|| RepresentationError::UnknownActToken(act.token.clone()))
}
