use std::fmt::Write;

use super::SpecDocument;
use crate::architectures::{AgentArchitecture, DigitSource, Fasa, PredictionTableAlphaBeta};
use crate::universe::{StateClass, Universe};

/// Canonical text for a document: universes first, then agents, one
/// declaration per line. Parsing the output yields an equal document.
pub fn serialize(doc: &SpecDocument) -> String {
    let mut out = String::new();
    for u in &doc.universes {
        universe(&mut out, u);
    }
    for a in &doc.agents {
        agent(&mut out, a, doc.universe_of(a));
    }
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

fn universe(out: &mut String, u: &Universe) {
    let _ = writeln!(out, "universe {} {{", quote(&u.name));
    let _ = writeln!(out, "  states: {};", u.states.join(" "));
    let _ = writeln!(out, "  acts: {};", u.acts.join(" "));
    let _ = writeln!(out, "  initial: {};", u.state_name(u.initial));
    let _ = writeln!(out, "  neutral_act: {};", u.act_name(u.neutral_act));
    for s in u.state_ids() {
        for a in u.act_ids() {
            if let Some(t) = u.transition(s, a) {
                let _ = writeln!(out, "  transition {} {} {};", u.state_name(s), u.act_name(a), u.state_name(t));
            }
        }
    }
    for class in [StateClass::Positive, StateClass::Neutral, StateClass::Negative] {
        let members: Vec<&str> = u.state_ids().filter(|s| u.class_of(*s) == class).map(|s| u.state_name(s)).collect();
        if !members.is_empty() {
            let _ = writeln!(out, "  classify {}: {};", class.keyword(), members.join(" "));
        }
    }
    let e = &u.energy;
    let _ = writeln!(
        out,
        "  energy {{ initial: {}; per_step: {}; negative_penalty: {}; positive_reward: {}; cap: {}; }}",
        e.initial_energy, e.per_step_cost, e.negative_penalty, e.positive_reward, e.energy_cap
    );
    out.push_str("}\n");
}

fn rows(out: &mut String, prefix: &str, table: &PredictionTableAlphaBeta) {
    for (source, goal, seq) in table.iter() {
        let acts: Vec<&str> = seq.iter().map(|a| a.token.as_str()).collect();
        let _ = writeln!(
            out,
            "  {prefix}predict {} -> {}: {};",
            quote(source.as_str()),
            quote(goal.as_str()),
            acts.join(" ")
        );
    }
}

fn agent(out: &mut String, a: &AgentArchitecture, u: Option<&Universe>) {
    let _ = writeln!(out, "agent {} in {} {{", quote(&a.name), quote(&a.universe));
    let _ = writeln!(out, "  architecture: {};", a.kind().keyword());
    match &a.fasa {
        Fasa::Random(r) => {
            let _ = writeln!(out, "  seed: {};", r.seed);
        }
        Fasa::Positional(p) => match p.source() {
            DigitSource::Pi => out.push_str("  constant: pi;\n"),
            DigitSource::E => out.push_str("  constant: e;\n"),
            DigitSource::Explicit(d) => {
                let s: String = d.iter().filter_map(|d| char::from_digit(*d, 36)).collect();
                let _ = writeln!(out, "  constant: digits {};", quote(&s));
            }
        },
        Fasa::Reactive(_) => {}
        Fasa::GoalDirected { table, .. } | Fasa::Memory { table, .. } => {
            let _ = writeln!(out, "  depth: {};", table.depth_max());
        }
        Fasa::Learning(l) => {
            let depth = l.pool().iter().map(PredictionTableAlphaBeta::depth_max).max().unwrap_or(1);
            let _ = writeln!(out, "  depth: {depth};");
        }
    }
    if a.kind().is_sensitive() && a.projection != 1 {
        let _ = writeln!(out, "  projection: {};", a.projection);
    }
    let goal = match &a.fasa {
        Fasa::GoalDirected { goal, .. } => Some(goal),
        Fasa::Memory { initial, .. } => initial.as_ref(),
        Fasa::Learning(l) => Some(l.goal()),
        _ => None,
    };
    if let Some(g) = goal {
        let _ = writeln!(out, "  goal: {};", quote(g.as_str()));
    }
    for (state, formula) in a.representation.iter() {
        let name = u.map_or_else(|| format!("s{}", state.0), |u| u.state_name(state).to_owned());
        let _ = writeln!(out, "  represents {name} -> {};", quote(formula.as_str()));
    }
    match &a.fasa {
        Fasa::Reactive(table) => {
            for (source, act) in table.iter() {
                let _ = writeln!(out, "  react {}: {};", quote(source.as_str()), act.token);
            }
        }
        Fasa::GoalDirected { table, .. } | Fasa::Memory { table, .. } => rows(out, "", table),
        Fasa::Learning(l) => {
            for (i, table) in l.pool().iter().enumerate() {
                rows(out, &format!("pool {i} "), table);
            }
        }
        _ => {}
    }
    out.push_str("}\n");
}
