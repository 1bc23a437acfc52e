//! Table-driven prediction functions.

use std::collections::BTreeMap;

use crate::architectures::ArchitectureError;
use crate::representation::{ActRepresentation, Formula};

/// Reactive prediction: one act per observed formula. A missing entry is the
/// empty prediction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredictionTableAlpha {
    entries: BTreeMap<Formula, ActRepresentation>,
}

impl PredictionTableAlpha {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: Formula, act: ActRepresentation) -> Result<(), ArchitectureError> {
        if self.entries.contains_key(&source) {
            return Err(ArchitectureError::DuplicateEntry(source.to_string()));
        }
        self.entries.insert(source, act);
        Ok(())
    }

    pub fn predict(&self, source: &Formula) -> Option<&ActRepresentation> {
        self.entries.get(source)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &ActRepresentation)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Two-argument prediction `(source, goal) -> act sequence` of bounded depth.
///
/// Also used for the memory-keyed variant, where the second formula is the
/// recalled state rather than a goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionTableAlphaBeta {
    entries: BTreeMap<(Formula, Formula), Vec<ActRepresentation>>,
    depth_max: usize,
}

impl PredictionTableAlphaBeta {
    pub fn new(depth_max: usize) -> Self {
        PredictionTableAlphaBeta { entries: BTreeMap::new(), depth_max: depth_max.max(1) }
    }

    pub fn depth_max(&self) -> usize {
        self.depth_max
    }

    /// Stores a sequence; its length must lie in `1..=depth_max`.
    pub fn insert(
        &mut self,
        source: Formula,
        goal: Formula,
        sequence: Vec<ActRepresentation>,
    ) -> Result<(), ArchitectureError> {
        if sequence.is_empty() || sequence.len() > self.depth_max {
            return Err(ArchitectureError::SequenceLength { len: sequence.len(), depth: self.depth_max });
        }
        let key = (source, goal);
        if self.entries.contains_key(&key) {
            return Err(ArchitectureError::DuplicateEntry(format!("{} -> {}", key.0, key.1)));
        }
        self.entries.insert(key, sequence);
        Ok(())
    }

    /// Removes an entry, returning its sequence.
    pub fn remove(&mut self, source: &Formula, goal: &Formula) -> Option<Vec<ActRepresentation>> {
        self.entries.remove(&(source.clone(), goal.clone()))
    }

    pub fn predict(&self, source: &Formula, goal: &Formula) -> Option<&[ActRepresentation]> {
        // BTreeMap needs an owned tuple key; tables are small.
        self.entries.get(&(source.clone(), goal.clone())).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &Formula, &[ActRepresentation])> {
        self.entries.iter().map(|((s, g), seq)| (s, g, seq.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acts(tokens: &[&str]) -> Vec<ActRepresentation> {
        tokens.iter().map(|t| ActRepresentation::new(*t)).collect()
    }

    #[test]
    fn missing_entry_is_empty_prediction() {
        let t = PredictionTableAlphaBeta::new(3);
        assert!(t.predict(&"a".into(), &"b".into()).is_none());
        assert!(PredictionTableAlpha::new().predict(&"a".into()).is_none());
    }

    #[test]
    fn sequence_length_is_bounded_by_depth() {
        let mut t = PredictionTableAlphaBeta::new(2);
        assert!(t.insert("a".into(), "b".into(), acts(&["x", "y"])).is_ok());
        assert_eq!(
            t.insert("b".into(), "a".into(), acts(&["x", "y", "z"])),
            Err(ArchitectureError::SequenceLength { len: 3, depth: 2 })
        );
        assert_eq!(
            t.insert("b".into(), "a".into(), vec![]),
            Err(ArchitectureError::SequenceLength { len: 0, depth: 2 })
        );
    }

    #[test]
    fn entries_are_deterministic() {
        let mut t = PredictionTableAlphaBeta::new(2);
        t.insert("a".into(), "b".into(), acts(&["x"])).unwrap();
        assert!(matches!(t.insert("a".into(), "b".into(), acts(&["y"])), Err(ArchitectureError::DuplicateEntry(_))));
        let mut r = PredictionTableAlpha::new();
        r.insert("a".into(), ActRepresentation::new("x")).unwrap();
        assert!(r.insert("a".into(), ActRepresentation::new("y")).is_err());
    }
}
