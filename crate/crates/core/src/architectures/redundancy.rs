//! Structural detection of redundant functional architectures: a bijective
//! unit whose output feeds its declared inverse, whose output in turn feeds
//! some third unit.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalUnit {
    pub id: String,
    pub bijective: bool,
    pub inverse_of: Option<String>,
}

impl FunctionalUnit {
    pub fn new(id: impl Into<String>) -> Self {
        FunctionalUnit { id: id.into(), bijective: false, inverse_of: None }
    }

    pub fn bijection(id: impl Into<String>, inverse_of: Option<&str>) -> Self {
        FunctionalUnit { id: id.into(), bijective: true, inverse_of: inverse_of.map(str::to_owned) }
    }
}

/// Units plus "output of `from` is input of `to`" edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnitGraph {
    pub units: Vec<FunctionalUnit>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedundancyError {
    #[error("inconsistent metadata: {0}")]
    InconsistentMetadata(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RedundantChain {
    pub forward: String,
    pub inverse: String,
    pub consumer: String,
}

/// Finds every chain `consumer(inverse(forward(·)))`.
///
/// The consumer may be any unit, `forward` included.
pub fn detect_redundancy(graph: &UnitGraph) -> Result<Vec<RedundantChain>, RedundancyError> {
    let index: HashMap<&str, &FunctionalUnit> = graph.units.iter().map(|u| (u.id.as_str(), u)).collect();
    if index.len() != graph.units.len() {
        return Err(RedundancyError::InconsistentMetadata("duplicate unit id".into()));
    }
    for unit in &graph.units {
        let Some(partner) = &unit.inverse_of else { continue };
        let Some(other) = index.get(partner.as_str()) else {
            return Err(RedundancyError::InconsistentMetadata(format!(
                "`{}` is the inverse of unknown unit `{partner}`",
                unit.id
            )));
        };
        if !unit.bijective || !other.bijective {
            return Err(RedundancyError::InconsistentMetadata(format!(
                "inverse pair `{}`/`{partner}` contains a non-bijective unit",
                unit.id
            )));
        }
        if other.inverse_of.as_deref() != Some(unit.id.as_str()) {
            return Err(RedundancyError::InconsistentMetadata(format!(
                "`{}` declares `{partner}` as inverse but not vice versa",
                unit.id
            )));
        }
    }
    let mut successors: HashMap<&str, Vec<&str>> = HashMap::new();
    for (from, to) in &graph.edges {
        for end in [from, to] {
            if !index.contains_key(end.as_str()) {
                return Err(RedundancyError::InconsistentMetadata(format!("edge mentions unknown unit `{end}`")));
            }
        }
        successors.entry(from.as_str()).or_default().push(to.as_str());
    }

    let mut found = Vec::new();
    for f in &graph.units {
        if !f.bijective {
            continue;
        }
        for &inv in successors.get(f.id.as_str()).into_iter().flatten() {
            if index[inv].inverse_of.as_deref() != Some(f.id.as_str()) {
                continue;
            }
            for &g in successors.get(inv).into_iter().flatten() {
                found.push(RedundantChain { forward: f.id.clone(), inverse: inv.to_owned(), consumer: g.to_owned() });
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}
