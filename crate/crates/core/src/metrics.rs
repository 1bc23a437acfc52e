//! Stability and instability of goal-directed prediction tables.
//!
//! All metrics are generic over [`Scalar`]; use an exact rational
//! (see [`crate::ExactStabilityReport`]) when values must compare exactly.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::json;
use thiserror::Error;

use crate::architectures::PredictionTableAlphaBeta;
use crate::representation::{Formula, RepresentationMap};
use crate::scalar::Scalar;
use crate::universe::{StateClass, StateId, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("reports were computed for different universes or objectives")]
    MismatchedContext,
}

/// Objectives split by the class of the states they represent.
///
/// A formula counts as a positive (negative) objective when it represents at
/// least one state and every state it represents is Positive (Negative).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObjectiveSets {
    pub all: BTreeSet<Formula>,
    pub positive: BTreeSet<Formula>,
    pub negative: BTreeSet<Formula>,
}

impl ObjectiveSets {
    pub fn classify(objectives: impl IntoIterator<Item = Formula>, rmap: &RepresentationMap, u: &Universe) -> Self {
        let all: BTreeSet<Formula> = objectives.into_iter().collect();
        let uniformly = |f: &Formula, class: StateClass| {
            let pre = rmap.preimage(f);
            !pre.is_empty() && pre.iter().all(|s| u.class_of(*s) == class)
        };
        let positive = all.iter().filter(|f| uniformly(f, StateClass::Positive)).cloned().collect();
        let negative = all.iter().filter(|f| uniformly(f, StateClass::Negative)).cloned().collect();
        ObjectiveSets { all, positive, negative }
    }

    /// Objectives are the goals the table has sequences towards.
    pub fn from_table(table: &PredictionTableAlphaBeta, rmap: &RepresentationMap, u: &Universe) -> Self {
        Self::classify(table.iter().map(|(_, goal, _)| goal.clone()), rmap, u)
    }
}

/// States from which the table predicts a sequence towards `target`.
pub fn departure_set(
    table: &PredictionTableAlphaBeta,
    rmap: &RepresentationMap,
    target: &Formula,
) -> BTreeSet<StateId> {
    rmap.iter().filter(|(_, psi)| table.predict(psi, target).is_some()).map(|(s, _)| s).collect()
}

/// States of class `from` with a prediction towards the representation of
/// the neutral state `target`.
fn escape_set(
    table: &PredictionTableAlphaBeta,
    rmap: &RepresentationMap,
    u: &Universe,
    from: StateClass,
    target: StateId,
) -> BTreeSet<StateId> {
    let Some(phi) = rmap.represent(target) else { return BTreeSet::new() };
    departure_set(table, rmap, phi).into_iter().filter(|s| u.class_of(*s) == from).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<T> {
    pub universe: String,
    pub state_count: usize,
    pub objectives: ObjectiveSets,
    /// `|P_i|` for every objective.
    pub departures: Vec<(Formula, usize)>,
    /// Negative states escaping towards each neutral state.
    pub a_minus: Vec<(String, usize)>,
    /// Positive states leaving towards each neutral state.
    pub a_plus: Vec<(String, usize)>,
    pub basic_stability: T,
    pub instability: T,
    pub total_stability: T,
}

/// Basic stability, instability and their difference for one table.
///
/// Each addend whose averaging set is empty contributes 0.
pub fn stability_report<T: Scalar>(
    table: &PredictionTableAlphaBeta,
    rmap: &RepresentationMap,
    objectives: &ObjectiveSets,
    u: &Universe,
) -> StabilityReport<T> {
    let n = u.state_count();
    let departures: Vec<(Formula, usize)> =
        objectives.all.iter().map(|o| (o.clone(), departure_set(table, rmap, o).len())).collect();
    let size_of = |f: &Formula| departures.iter().find(|(o, _)| o == f).map_or(0, |(_, k)| *k);

    let neutral: Vec<StateId> = u.state_ids().filter(|s| u.class_of(*s) == StateClass::Neutral).collect();
    let a_minus: Vec<(String, usize)> = neutral
        .iter()
        .map(|j| (u.state_name(*j).to_owned(), escape_set(table, rmap, u, StateClass::Negative, *j).len()))
        .collect();
    let a_plus: Vec<(String, usize)> = neutral
        .iter()
        .map(|j| (u.state_name(*j).to_owned(), escape_set(table, rmap, u, StateClass::Positive, *j).len()))
        .collect();

    let averaged = |set: &BTreeSet<Formula>| -> T {
        if set.is_empty() {
            return T::zero();
        }
        let sum: usize = set.iter().map(size_of).sum();
        T::from_ratio(sum, n * set.len())
    };
    let escapes = |counts: &[(String, usize)]| T::from_ratio(counts.iter().map(|(_, k)| k).sum(), n);

    let basic_stability = averaged(&objectives.positive) + escapes(&a_minus);
    let instability = averaged(&objectives.negative) + escapes(&a_plus);
    let total_stability = basic_stability.clone() - instability.clone();
    StabilityReport {
        universe: u.name.clone(),
        state_count: n,
        objectives: objectives.clone(),
        departures,
        a_minus,
        a_plus,
        basic_stability,
        instability,
        total_stability,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityDelta<T> {
    pub basic_stability: T,
    pub instability: T,
    pub total_stability: T,
}

/// `after − before`, componentwise; used to score a learning step.
pub fn compare_learning<T: Scalar>(
    before: &StabilityReport<T>,
    after: &StabilityReport<T>,
) -> Result<StabilityDelta<T>, MetricsError> {
    if before.universe != after.universe
        || before.state_count != after.state_count
        || before.objectives.positive != after.objectives.positive
        || before.objectives.negative != after.objectives.negative
    {
        return Err(MetricsError::MismatchedContext);
    }
    Ok(StabilityDelta {
        basic_stability: after.basic_stability.clone() - before.basic_stability.clone(),
        instability: after.instability.clone() - before.instability.clone(),
        total_stability: after.total_stability.clone() - before.total_stability.clone(),
    })
}

fn joined(set: &BTreeSet<Formula>) -> String {
    set.iter().map(Formula::as_str).collect::<Vec<_>>().join(" ")
}

impl<T: Scalar> StabilityReport<T> {
    /// `key: value` lines, one per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "universe: {}", self.universe);
        let _ = writeln!(out, "states: {}", self.state_count);
        let _ = writeln!(out, "objectives: {}", joined(&self.objectives.all));
        let _ = writeln!(out, "objectives_positive: {}", joined(&self.objectives.positive));
        let _ = writeln!(out, "objectives_negative: {}", joined(&self.objectives.negative));
        for (o, k) in &self.departures {
            let _ = writeln!(out, "departures[{o}]: {k}");
        }
        for (s, k) in &self.a_minus {
            let _ = writeln!(out, "a_minus[{s}]: {k}");
        }
        for (s, k) in &self.a_plus {
            let _ = writeln!(out, "a_plus[{s}]: {k}");
        }
        let _ = writeln!(out, "basic_stability: {}", self.basic_stability.render());
        let _ = writeln!(out, "instability: {}", self.instability.render());
        let _ = writeln!(out, "total_stability: {}", self.total_stability.render());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts =
            |v: &[(String, usize)]| v.iter().map(|(s, k)| (s.clone(), json!(k))).collect::<serde_json::Map<_, _>>();
        let set = |s: &BTreeSet<Formula>| s.iter().map(|f| f.as_str().to_owned()).collect::<Vec<_>>();
        json!({
            "universe": self.universe,
            "states": self.state_count,
            "objectives": set(&self.objectives.all),
            "objectives_positive": set(&self.objectives.positive),
            "objectives_negative": set(&self.objectives.negative),
            "departures": self.departures.iter().map(|(f, k)| (f.as_str().to_owned(), json!(k))).collect::<serde_json::Map<_, _>>(),
            "a_minus": counts(&self.a_minus),
            "a_plus": counts(&self.a_plus),
            "basic_stability": self.basic_stability.render(),
            "instability": self.instability.render(),
            "total_stability": self.total_stability.render(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::ActRepresentation;
    use crate::universe::{ActId, EnergyRules};
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    /// Five states e1..e5: e1 positive, e2/e3 neutral, e4/e5 negative.
    fn five() -> (Universe, RepresentationMap) {
        let energy = EnergyRules {
            initial_energy: 10,
            per_step_cost: 1,
            negative_penalty: 3,
            positive_reward: 2,
            energy_cap: 20,
        };
        let states = (1..=5).map(|i| format!("e{i}")).collect();
        let mut u = Universe::new("five", states, vec!["a".into()], ActId(0), StateId(0), energy);
        u.classes = vec![
            StateClass::Positive,
            StateClass::Neutral,
            StateClass::Neutral,
            StateClass::Negative,
            StateClass::Negative,
        ];
        let mut r = RepresentationMap::new();
        for s in 0..5u32 {
            r.insert(StateId(s), Formula::new(format!("psi{}", s + 1)));
        }
        (u, r)
    }

    fn table(rows: &[(&str, &str)]) -> PredictionTableAlphaBeta {
        let mut t = PredictionTableAlphaBeta::new(1);
        for (s, g) in rows {
            t.insert((*s).into(), (*g).into(), vec![ActRepresentation::new("a")]).unwrap();
        }
        t
    }

    fn worked_table() -> PredictionTableAlphaBeta {
        table(&[("psi2", "psi1"), ("psi3", "psi1"), ("psi1", "psi1"), ("psi4", "psi2")])
    }

    #[test]
    fn worked_example_departures() {
        let (_, r) = five();
        let p = departure_set(&worked_table(), &r, &"psi1".into());
        assert_eq!(p, [StateId(0), StateId(1), StateId(2)].into_iter().collect());
        assert!(departure_set(&table(&[]), &r, &"psi1".into()).is_empty());
    }

    #[test]
    fn worked_example_golden_value() {
        let (u, r) = five();
        let t = worked_table();
        let o = ObjectiveSets::classify([Formula::new("psi1")], &r, &u);
        let rep = stability_report::<Q>(&t, &r, &o, &u);
        assert_eq!(rep.basic_stability, Q::new(4, 5));
        assert_eq!(rep.instability, Q::new(0, 1));
        assert_eq!(rep.total_stability, Q::new(4, 5));
        // deriving objectives from the table adds psi2, which is neutral
        let derived = ObjectiveSets::from_table(&t, &r, &u);
        assert_eq!(stability_report::<Q>(&t, &r, &derived, &u).basic_stability, Q::new(4, 5));
    }

    #[test]
    fn floats_agree_with_rationals() {
        let (u, r) = five();
        let t = worked_table();
        let o = ObjectiveSets::from_table(&t, &r, &u);
        let rep = stability_report::<f64>(&t, &r, &o, &u);
        assert!((rep.basic_stability - 0.8).abs() < 1e-12);
    }

    #[test]
    fn negative_objective_is_unstable() {
        let (u, r) = five();
        let t = table(&[("psi4", "psi5"), ("psi5", "psi5")]);
        let o = ObjectiveSets::from_table(&t, &r, &u);
        assert_eq!(o.negative.len(), 1);
        let rep = stability_report::<Q>(&t, &r, &o, &u);
        assert_eq!(rep.basic_stability, Q::new(0, 1));
        assert_eq!(rep.instability, Q::new(2, 5));
        assert_eq!(rep.total_stability, Q::new(-2, 5));
    }

    #[test]
    fn positive_escape_counts_as_instability() {
        let (u, r) = five();
        let t = table(&[("psi1", "psi3")]);
        let o = ObjectiveSets::from_table(&t, &r, &u);
        let rep = stability_report::<Q>(&t, &r, &o, &u);
        assert_eq!(rep.instability, Q::new(1, 5));
    }

    #[test]
    fn delta_of_added_escape() {
        let (u, r) = five();
        let before_t = worked_table();
        let mut after_t = worked_table();
        after_t.insert("psi5".into(), "psi3".into(), vec![ActRepresentation::new("a")]).unwrap();
        let o = ObjectiveSets::classify([Formula::new("psi1")], &r, &u);
        let before = stability_report::<Q>(&before_t, &r, &o, &u);
        let after = stability_report::<Q>(&after_t, &r, &o, &u);
        let d = compare_learning(&before, &after).unwrap();
        assert_eq!(d.basic_stability, Q::new(1, 5));
        assert_eq!(d.instability, Q::new(0, 1));
        let back = compare_learning(&after, &before).unwrap();
        assert_eq!(back.basic_stability, -d.basic_stability);
        let zero = compare_learning(&before, &before).unwrap();
        assert_eq!(zero.total_stability, Q::new(0, 1));
    }

    #[test]
    fn mismatched_context_is_rejected() {
        let (u, r) = five();
        let t = worked_table();
        let a = stability_report::<Q>(&t, &r, &ObjectiveSets::classify([Formula::new("psi1")], &r, &u), &u);
        let b = stability_report::<Q>(&t, &r, &ObjectiveSets::classify([Formula::new("psi4")], &r, &u), &u);
        assert_eq!(compare_learning(&a, &b), Err(MetricsError::MismatchedContext));
    }

    #[test]
    fn text_and_json_render_rationals() {
        let (u, r) = five();
        let t = worked_table();
        let rep = stability_report::<Q>(&t, &r, &ObjectiveSets::from_table(&t, &r, &u), &u);
        assert!(rep.to_text().contains("basic_stability: 4/5\n"));
        assert!(rep.to_text().contains("instability: 0/1\n"));
        assert_eq!(rep.to_json()["basic_stability"], "4/5");
    }
}
