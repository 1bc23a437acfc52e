use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::lexer::{tokenize, Tok, Token};
use super::{DiagnosticKind, ParseDiagnostic, Span, SpecDocument};
use crate::architectures::{
    AgentArchitecture, ArchitectureKind, DigitSource, Fasa, Learner, PositionalFasa, PredictionTableAlpha,
    PredictionTableAlphaBeta, RandomFasa,
};
use crate::representation::{ActRepresentation, Formula, RepresentationMap};
use crate::universe::{ActId, EnergyRules, StateClass, StateId, Universe};

use DiagnosticKind::{Referential, Semantic, Syntactic};

/// Parses a document. On failure every collected diagnostic is returned,
/// warnings included.
pub fn parse(text: &str) -> Result<SpecDocument, Vec<ParseDiagnostic>> {
    let (doc, diags) = run(text);
    if diags.iter().any(ParseDiagnostic::is_error) {
        return Err(diags);
    }
    let mut doc = doc;
    doc.warnings = diags;
    Ok(doc)
}

/// All diagnostics for `text`, errors and warnings, in source order.
pub fn check(text: &str) -> Vec<ParseDiagnostic> {
    run(text).1
}

fn run(text: &str) -> (SpecDocument, Vec<ParseDiagnostic>) {
    let (tokens, mut diags) = tokenize(text);
    let mut parser = Parser { toks: tokens, pos: 0, diags: Vec::new() };
    let (universes, agents) = parser.spec();
    diags.append(&mut parser.diags);
    let doc = build(universes, agents, &mut diags);
    diags.sort_by_key(|d| (d.line, d.column));
    (doc, diags)
}

#[derive(Debug, Clone)]
struct Named {
    name: String,
    span: Span,
}

#[derive(Debug, Default)]
struct RawUniverse {
    name: String,
    span: Span,
    states: Option<Vec<Named>>,
    acts: Option<Vec<Named>>,
    initial: Option<Named>,
    neutral: Option<Named>,
    transitions: Vec<(Named, Named, Named)>,
    classes: Vec<(StateClass, Vec<Named>)>,
    energy: Option<(EnergyRules, Span)>,
}

#[derive(Debug)]
enum RawConstant {
    Pi,
    E,
    Digits(String),
}

#[derive(Debug)]
struct Row {
    source: Named,
    goal: Named,
    acts: Vec<Named>,
    span: Span,
}

#[derive(Debug, Default)]
struct RawAgent {
    name: String,
    span: Span,
    universe: Option<Named>,
    kind: Option<(ArchitectureKind, Span)>,
    seed: Option<(u64, Span)>,
    depth: Option<(u64, Span)>,
    projection: Option<(u64, Span)>,
    constant: Option<(RawConstant, Span)>,
    represents: Vec<(Named, Named)>,
    goal: Option<Named>,
    reacts: Vec<(Named, Named)>,
    predicts: Vec<Row>,
    pools: Vec<(u64, Row)>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<ParseDiagnostic>,
}

type Step<T> = Result<T, ()>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&mut self, expected: &str) -> Step<T> {
        let t = self.peek().clone();
        self.diags.push(ParseDiagnostic::error(
            Syntactic,
            t.span,
            format!("expected {expected}, found {}", t.tok.describe()),
        ));
        Err(())
    }

    fn expect(&mut self, tok: Tok) -> Step<Span> {
        if self.peek().tok == tok {
            return Ok(self.bump().span);
        }
        self.unexpected(&tok.describe())
    }

    fn keyword(&mut self, kw: &str) -> Step<Span> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == kw) {
            return Ok(self.bump().span);
        }
        self.unexpected(&format!("`{kw}`"))
    }

    fn ident(&mut self) -> Step<Named> {
        if let Tok::Ident(s) = &self.peek().tok {
            let name = s.clone();
            let span = self.bump().span;
            return Ok(Named { name, span });
        }
        self.unexpected("an identifier")
    }

    fn string(&mut self) -> Step<Named> {
        if let Tok::Str(s) = &self.peek().tok {
            let name = s.clone();
            let span = self.bump().span;
            return Ok(Named { name, span });
        }
        self.unexpected("a string")
    }

    fn int(&mut self) -> Step<(u64, Span)> {
        if let Tok::Int(v) = self.peek().tok {
            let span = self.bump().span;
            return Ok((v, span));
        }
        self.unexpected("an integer")
    }

    /// One or more identifiers up to (not including) the terminator.
    fn idents(&mut self) -> Step<Vec<Named>> {
        let mut out = vec![self.ident()?];
        while matches!(self.peek().tok, Tok::Ident(_)) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// Skips the rest of a broken item: up to and including `;`, or up to a
    /// closing brace of the enclosing block.
    fn recover_item(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek().tok {
                Tok::Eof => return,
                Tok::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                Tok::LBrace => depth += 1,
                Tok::RBrace if depth == 0 => return,
                Tok::RBrace => depth -= 1,
                _ => {}
            }
            self.bump();
        }
    }

    /// Skips to the next top-level `universe` or `agent` keyword.
    fn recover_top(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.peek().tok {
                Tok::Eof => return,
                Tok::Ident(s) if depth == 0 && (s == "universe" || s == "agent") => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.bump();
        }
    }

    fn spec(&mut self) -> (Vec<RawUniverse>, Vec<RawAgent>) {
        let mut universes = Vec::new();
        let mut agents = Vec::new();
        loop {
            let result = match &self.peek().tok {
                Tok::Eof => break,
                Tok::Ident(s) if s == "universe" => self.universe().map(|u| universes.push(u)),
                Tok::Ident(s) if s == "agent" => self.agent().map(|a| agents.push(a)),
                _ => self.unexpected("`universe` or `agent`"),
            };
            if result.is_err() {
                self.bump();
                self.recover_top();
            }
        }
        (universes, agents)
    }

    /// Parses `{ item* }`, calling `item` for each entry and recovering at
    /// item boundaries.
    fn block<F>(&mut self, mut item: F) -> Step<()>
    where
        F: FnMut(&mut Self) -> Step<()>,
    {
        self.expect(Tok::LBrace)?;
        loop {
            match self.peek().tok {
                Tok::RBrace => {
                    self.bump();
                    return Ok(());
                }
                Tok::Eof => return self.unexpected("`}`"),
                _ => {
                    if item(self).is_err() {
                        self.recover_item();
                    }
                }
            }
        }
    }

    fn once<T>(&mut self, slot: &mut Option<T>, value: T, what: &str, at: Span) {
        if slot.is_some() {
            self.diags.push(ParseDiagnostic::error(Semantic, at, format!("duplicate `{what}` declaration")));
        } else {
            *slot = Some(value);
        }
    }

    fn universe(&mut self) -> Step<RawUniverse> {
        let span = self.keyword("universe")?;
        let name = self.string()?;
        let mut raw = RawUniverse { name: name.name, span, ..Default::default() };
        self.block(|p| p.universe_item(&mut raw))?;
        Ok(raw)
    }

    fn universe_item(&mut self, raw: &mut RawUniverse) -> Step<()> {
        let head = self.ident()?;
        match head.name.as_str() {
            "states" | "acts" => {
                self.expect(Tok::Colon)?;
                let ids = self.idents()?;
                self.expect(Tok::Semi)?;
                let slot = if head.name == "states" { &mut raw.states } else { &mut raw.acts };
                self.once(slot, ids, &head.name, head.span);
            }
            "initial" | "neutral_act" => {
                self.expect(Tok::Colon)?;
                let id = self.ident()?;
                self.expect(Tok::Semi)?;
                let slot = if head.name == "initial" { &mut raw.initial } else { &mut raw.neutral };
                self.once(slot, id, &head.name, head.span);
            }
            "transition" => {
                let from = self.ident()?;
                let act = self.ident()?;
                let to = self.ident()?;
                self.expect(Tok::Semi)?;
                raw.transitions.push((from, act, to));
            }
            "classify" => {
                let class = self.ident()?;
                let class = match class.name.as_str() {
                    "positive" => StateClass::Positive,
                    "neutral" => StateClass::Neutral,
                    "negative" => StateClass::Negative,
                    _ => {
                        self.diags.push(ParseDiagnostic::error(
                            Syntactic,
                            class.span,
                            format!("expected `positive`, `neutral` or `negative`, found `{}`", class.name),
                        ));
                        return Err(());
                    }
                };
                self.expect(Tok::Colon)?;
                let ids = self.idents()?;
                self.expect(Tok::Semi)?;
                raw.classes.push((class, ids));
            }
            "energy" => {
                let rules = self.energy()?;
                self.once(&mut raw.energy, (rules, head.span), "energy", head.span);
            }
            other => {
                self.diags.push(ParseDiagnostic::error(
                    Syntactic,
                    head.span,
                    format!("unknown universe item `{other}`"),
                ));
                return Err(());
            }
        }
        Ok(())
    }

    fn energy(&mut self) -> Step<EnergyRules> {
        self.expect(Tok::LBrace)?;
        let mut values = [0i64; 5];
        for (slot, key) in values.iter_mut().zip(["initial", "per_step", "negative_penalty", "positive_reward", "cap"])
        {
            self.keyword(key)?;
            self.expect(Tok::Colon)?;
            let (v, at) = self.int()?;
            self.expect(Tok::Semi)?;
            *slot = i64::try_from(v).map_err(|_| {
                self.diags.push(ParseDiagnostic::error(Semantic, at, format!("`{key}` is too large")));
            })?;
        }
        self.expect(Tok::RBrace)?;
        let [initial_energy, per_step_cost, negative_penalty, positive_reward, energy_cap] = values;
        Ok(EnergyRules { initial_energy, per_step_cost, negative_penalty, positive_reward, energy_cap })
    }

    fn agent(&mut self) -> Step<RawAgent> {
        let span = self.keyword("agent")?;
        let name = self.string()?;
        self.keyword("in")?;
        let universe = self.string()?;
        let mut raw = RawAgent { name: name.name, span, universe: Some(universe), ..Default::default() };
        self.block(|p| p.agent_item(&mut raw))?;
        Ok(raw)
    }

    fn row(&mut self, span: Span) -> Step<Row> {
        let source = self.string()?;
        self.expect(Tok::Arrow)?;
        let goal = self.string()?;
        self.expect(Tok::Colon)?;
        let acts = self.idents()?;
        self.expect(Tok::Semi)?;
        Ok(Row { source, goal, acts, span })
    }

    fn agent_item(&mut self, raw: &mut RawAgent) -> Step<()> {
        let head = self.ident()?;
        match head.name.as_str() {
            "architecture" => {
                self.expect(Tok::Colon)?;
                let kind = self.ident()?;
                let Some(k) = ArchitectureKind::from_keyword(&kind.name) else {
                    self.diags.push(ParseDiagnostic::error(
                        Syntactic,
                        kind.span,
                        format!("unknown architecture `{}`", kind.name),
                    ));
                    return Err(());
                };
                self.expect(Tok::Semi)?;
                self.once(&mut raw.kind, (k, kind.span), "architecture", head.span);
            }
            "seed" | "depth" | "projection" => {
                self.expect(Tok::Colon)?;
                let v = self.int()?;
                self.expect(Tok::Semi)?;
                let slot = match head.name.as_str() {
                    "seed" => &mut raw.seed,
                    "depth" => &mut raw.depth,
                    _ => &mut raw.projection,
                };
                self.once(slot, v, &head.name, head.span);
            }
            "constant" => {
                self.expect(Tok::Colon)?;
                let which = self.ident()?;
                let c = match which.name.as_str() {
                    "pi" => RawConstant::Pi,
                    "e" => RawConstant::E,
                    "digits" => RawConstant::Digits(self.string()?.name),
                    other => {
                        self.diags.push(ParseDiagnostic::error(
                            Syntactic,
                            which.span,
                            format!("expected `pi`, `e` or `digits`, found `{other}`"),
                        ));
                        return Err(());
                    }
                };
                self.expect(Tok::Semi)?;
                self.once(&mut raw.constant, (c, head.span), "constant", head.span);
            }
            "represents" => {
                let state = self.ident()?;
                self.expect(Tok::Arrow)?;
                let formula = self.string()?;
                self.expect(Tok::Semi)?;
                raw.represents.push((state, formula));
            }
            "goal" => {
                self.expect(Tok::Colon)?;
                let g = self.string()?;
                self.expect(Tok::Semi)?;
                self.once(&mut raw.goal, g, "goal", head.span);
            }
            "react" => {
                let formula = self.string()?;
                self.expect(Tok::Colon)?;
                let act = self.ident()?;
                self.expect(Tok::Semi)?;
                raw.reacts.push((formula, act));
            }
            "predict" => {
                let row = self.row(head.span)?;
                raw.predicts.push(row);
            }
            "pool" => {
                let (index, _) = self.int()?;
                self.keyword("predict")?;
                let row = self.row(head.span)?;
                raw.pools.push((index, row));
            }
            other => {
                self.diags.push(ParseDiagnostic::error(Syntactic, head.span, format!("unknown agent item `{other}`")));
                return Err(());
            }
        }
        Ok(())
    }
}

fn build(universes: Vec<RawUniverse>, agents: Vec<RawAgent>, diags: &mut Vec<ParseDiagnostic>) -> SpecDocument {
    let mut doc = SpecDocument::default();
    let mut broken = HashSet::new();
    for raw in &universes {
        if doc.source_spans.contains_key(&format!("universe:{}", raw.name)) || broken.contains(&raw.name) {
            diags.push(ParseDiagnostic::error(Semantic, raw.span, format!("universe `{}` declared twice", raw.name)));
            continue;
        }
        match build_universe(raw, diags) {
            Some(u) => {
                doc.source_spans.insert(format!("universe:{}", raw.name), raw.span);
                doc.universes.push(u);
            }
            None => {
                broken.insert(raw.name.clone());
            }
        }
    }
    let mut seen = HashSet::new();
    for raw in &agents {
        if !seen.insert(raw.name.clone()) {
            diags.push(ParseDiagnostic::error(Semantic, raw.span, format!("agent `{}` declared twice", raw.name)));
            continue;
        }
        let Some(uname) = &raw.universe else { continue };
        if broken.contains(&uname.name) {
            continue;
        }
        let Some(u) = doc.universe(&uname.name) else {
            diags.push(ParseDiagnostic::error(Referential, uname.span, format!("unknown universe `{}`", uname.name)));
            continue;
        };
        if let Some(agent) = build_agent(raw, u, diags) {
            doc.source_spans.insert(format!("agent:{}", raw.name), raw.span);
            doc.agents.push(agent);
        }
    }
    doc
}

/// Sorted, de-duplicated name list plus a name → index map.
fn interned(names: &[Named], what: &str, diags: &mut Vec<ParseDiagnostic>) -> (Vec<String>, HashMap<String, u32>) {
    let mut set = BTreeSet::new();
    for n in names {
        if !set.insert(n.name.clone()) {
            diags.push(ParseDiagnostic::error(Semantic, n.span, format!("duplicate {what} `{}`", n.name)));
        }
    }
    let list: Vec<String> = set.into_iter().collect();
    let index = list.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
    (list, index)
}

fn lookup(index: &HashMap<String, u32>, n: &Named, what: &str, diags: &mut Vec<ParseDiagnostic>) -> Option<u32> {
    let found = index.get(&n.name).copied();
    if found.is_none() {
        diags.push(ParseDiagnostic::error(Referential, n.span, format!("unknown {what} `{}`", n.name)));
    }
    found
}

fn build_universe(raw: &RawUniverse, diags: &mut Vec<ParseDiagnostic>) -> Option<Universe> {
    let before = diags.iter().filter(|d| d.is_error()).count();
    let missing = |what: &str, diags: &mut Vec<ParseDiagnostic>| {
        diags.push(ParseDiagnostic::error(
            Semantic,
            raw.span,
            format!("universe `{}` has no `{what}` declaration", raw.name),
        ));
    };
    let (Some(states), Some(acts)) = (&raw.states, &raw.acts) else {
        if raw.states.is_none() {
            missing("states", diags);
        }
        if raw.acts.is_none() {
            missing("acts", diags);
        }
        return None;
    };
    let (state_names, state_index) = interned(states, "state", diags);
    let (act_names, act_index) = interned(acts, "act", diags);

    let initial = match &raw.initial {
        Some(n) => lookup(&state_index, n, "state", diags),
        None => {
            missing("initial", diags);
            None
        }
    };
    let neutral = match &raw.neutral {
        Some(n) => lookup(&act_index, n, "act", diags),
        None => {
            missing("neutral_act", diags);
            None
        }
    };
    let Some((energy, energy_span)) = raw.energy else {
        missing("energy", diags);
        return None;
    };
    let (Some(initial), Some(neutral)) = (initial, neutral) else { return None };

    let mut u = Universe::new(raw.name.clone(), state_names, act_names, ActId(neutral), StateId(initial), energy);
    for (from, act, to) in &raw.transitions {
        let (Some(f), Some(a), Some(t)) = (
            lookup(&state_index, from, "state", diags),
            lookup(&act_index, act, "act", diags),
            lookup(&state_index, to, "state", diags),
        ) else {
            continue;
        };
        if u.transition(StateId(f), ActId(a)).is_some() {
            diags.push(ParseDiagnostic::error(
                Semantic,
                from.span,
                format!("transition for ({}, {}) declared twice", from.name, act.name),
            ));
            continue;
        }
        u.set_transition(StateId(f), ActId(a), StateId(t));
    }

    let mut classified = vec![false; u.state_count()];
    for (class, names) in &raw.classes {
        for n in names {
            let Some(s) = lookup(&state_index, n, "state", diags) else { continue };
            if std::mem::replace(&mut classified[s as usize], true) {
                diags.push(ParseDiagnostic::error(Semantic, n.span, format!("state `{}` classified twice", n.name)));
            }
            u.classes[s as usize] = *class;
        }
    }
    for (i, done) in classified.iter().enumerate() {
        if !done {
            diags.push(ParseDiagnostic::warning(
                Semantic,
                raw.span,
                format!("state `{}` is not classified; treating it as neutral", u.states[i]),
            ));
        }
    }

    for v in u.validate() {
        let at = if matches!(v, crate::universe::Violation::Energy { .. }) { energy_span } else { raw.span };
        diags.push(ParseDiagnostic::error(Semantic, at, format!("universe `{}`: {v}", raw.name)));
    }
    let after = diags.iter().filter(|d| d.is_error()).count();
    (after == before).then_some(u)
}

fn build_agent(raw: &RawAgent, u: &Universe, diags: &mut Vec<ParseDiagnostic>) -> Option<AgentArchitecture> {
    let before = diags.iter().filter(|d| d.is_error()).count();
    let err =
        |diags: &mut Vec<ParseDiagnostic>, kind, at, msg: String| diags.push(ParseDiagnostic::error(kind, at, msg));

    let Some((kind, _)) = raw.kind else {
        err(diags, Semantic, raw.span, format!("agent `{}` has no `architecture` declaration", raw.name));
        return None;
    };

    let state_index: HashMap<String, u32> = u.state_ids().map(|s| (u.state_name(s).to_owned(), s.0)).collect();
    let mut rmap = RepresentationMap::new();
    for (state, formula) in &raw.represents {
        let Some(s) = lookup(&state_index, state, "state", diags) else { continue };
        if formula.name.is_empty() {
            err(diags, Semantic, formula.span, "formula must not be empty".into());
            continue;
        }
        if rmap.insert(StateId(s), Formula::new(&formula.name)).is_some() {
            err(diags, Semantic, state.span, format!("state `{}` represented twice", state.name));
        }
    }
    if (kind.is_sensitive() || !rmap.is_empty()) && rmap.image().len() < 2 {
        err(
            diags,
            Semantic,
            raw.span,
            format!("agent `{}`: a representation needs at least two distinct formulas", raw.name),
        );
    }

    let not_used = |diags: &mut Vec<ParseDiagnostic>, what: &str, at: Span| {
        err(diags, Semantic, at, format!("`{what}` is not used by `{}` agents", kind.keyword()));
    };
    let sensitive = kind.is_sensitive();
    if kind != ArchitectureKind::Random {
        if let Some((_, at)) = raw.seed {
            not_used(diags, "seed", at);
        }
    }
    if kind != ArchitectureKind::Positional {
        if let Some((_, at)) = &raw.constant {
            not_used(diags, "constant", *at);
        }
    }
    if !sensitive {
        for (item, slot) in [("depth", raw.depth), ("projection", raw.projection)] {
            if let Some((_, at)) = slot {
                not_used(diags, item, at);
            }
        }
    }
    if !matches!(kind, ArchitectureKind::AfsIIA | ArchitectureKind::AfsIIB | ArchitectureKind::AfsIIIA) {
        if let Some(g) = &raw.goal {
            not_used(diags, "goal", g.span);
        }
    }
    if kind != ArchitectureKind::AfsI {
        for (f, _) in &raw.reacts {
            not_used(diags, "react", f.span);
        }
    }
    if !matches!(kind, ArchitectureKind::AfsIIA | ArchitectureKind::AfsIIB) {
        for row in &raw.predicts {
            not_used(diags, "predict", row.span);
        }
    }
    if kind != ArchitectureKind::AfsIIIA {
        for (_, row) in &raw.pools {
            not_used(diags, "pool", row.span);
        }
    }

    let known_formula = |f: &Named, diags: &mut Vec<ParseDiagnostic>| -> Option<Formula> {
        let formula = Formula::new(&f.name);
        if rmap.contains_formula(&formula) {
            Some(formula)
        } else {
            err(diags, Referential, f.span, format!("formula \"{}\" does not represent any state", f.name));
            None
        }
    };
    let known_act = |a: &Named, diags: &mut Vec<ParseDiagnostic>| -> Option<ActRepresentation> {
        if u.act_id(&a.name).is_some() {
            Some(ActRepresentation::new(&a.name))
        } else {
            err(diags, Referential, a.span, format!("unknown act `{}`", a.name));
            None
        }
    };

    let projection = match raw.projection {
        Some((0, at)) => {
            err(diags, Semantic, at, "projection index starts at 1".into());
            1
        }
        Some((p, _)) => p as usize,
        None => 1,
    };
    let longest = raw.predicts.iter().chain(raw.pools.iter().map(|(_, r)| r)).map(|r| r.acts.len()).max().unwrap_or(1);
    let depth = match raw.depth {
        Some((0, at)) => {
            err(diags, Semantic, at, "depth must be positive".into());
            1
        }
        Some((d, at)) if kind == ArchitectureKind::AfsI && d != 1 => {
            err(diags, Semantic, at, "reactive agents have depth 1".into());
            1
        }
        Some((d, _)) => d as usize,
        None => longest.max(1),
    };

    let goal = raw.goal.as_ref().and_then(|g| known_formula(g, diags));
    if matches!(kind, ArchitectureKind::AfsIIA | ArchitectureKind::AfsIIIA) && raw.goal.is_none() {
        err(diags, Semantic, raw.span, format!("`{}` agents need a `goal`", kind.keyword()));
    }

    let fill = |table: &mut PredictionTableAlphaBeta, row: &Row, diags: &mut Vec<ParseDiagnostic>| {
        let source = known_formula(&row.source, diags);
        let target = known_formula(&row.goal, diags);
        let acts: Option<Vec<_>> =
            row.acts.iter().map(|a| known_act(a, diags)).collect::<Vec<_>>().into_iter().collect();
        let (Some(source), Some(target), Some(acts)) = (source, target, acts) else { return };
        if projection > acts.len() {
            diags.push(ParseDiagnostic::warning(
                Semantic,
                row.span,
                format!("projection {projection} exceeds this sequence of length {}", acts.len()),
            ));
        }
        if let Err(e) = table.insert(source, target, acts) {
            err(diags, Semantic, row.span, e.to_string());
        }
    };

    let act_order: Vec<ActId> = u.act_ids().collect();
    let fasa = match kind {
        ArchitectureKind::Random => Fasa::Random(RandomFasa::uniform(raw.seed.map_or(0, |s| s.0), u.act_count())),
        ArchitectureKind::Positional => {
            let source = match &raw.constant {
                None | Some((RawConstant::Pi, _)) => DigitSource::Pi,
                Some((RawConstant::E, _)) => DigitSource::E,
                Some((RawConstant::Digits(s), at)) => {
                    let digits: Option<Vec<u32>> = s.chars().map(|c| c.to_digit(36)).collect();
                    match digits {
                        Some(d) if !d.is_empty() => DigitSource::Explicit(d),
                        _ => {
                            err(diags, Semantic, *at, "digit string must be non-empty base-36 digits".into());
                            DigitSource::Explicit(vec![0])
                        }
                    }
                }
            };
            match PositionalFasa::new(source, act_order) {
                Ok(p) => Fasa::Positional(p),
                Err(e) => {
                    let at = raw.constant.as_ref().map_or(raw.span, |c| c.1);
                    err(diags, Semantic, at, e.to_string());
                    return None;
                }
            }
        }
        ArchitectureKind::AfsI => {
            let mut table = PredictionTableAlpha::new();
            for (f, a) in &raw.reacts {
                let (Some(f2), Some(a2)) = (known_formula(f, diags), known_act(a, diags)) else { continue };
                if let Err(e) = table.insert(f2, a2) {
                    err(diags, Semantic, f.span, e.to_string());
                }
            }
            if projection > 1 {
                if let Some((_, at)) = raw.projection {
                    diags.push(ParseDiagnostic::warning(Semantic, at, "reactive agents generate a single act"));
                }
            }
            Fasa::Reactive(table)
        }
        ArchitectureKind::AfsIIA | ArchitectureKind::AfsIIB => {
            let mut table = PredictionTableAlphaBeta::new(depth);
            for row in &raw.predicts {
                fill(&mut table, row, diags);
            }
            if kind == ArchitectureKind::AfsIIA {
                Fasa::GoalDirected { table, goal: goal.clone().unwrap_or_else(|| Formula::new("?")) }
            } else {
                Fasa::Memory { table, initial: goal.clone(), memory: goal.clone() }
            }
        }
        ArchitectureKind::AfsIIIA => {
            let size = raw.pools.iter().map(|(i, _)| *i as usize + 1).max().unwrap_or(0);
            if size == 0 {
                err(diags, Semantic, raw.span, "`afs3a` agents need at least one `pool` row".into());
            }
            if size > 1024 {
                err(diags, Semantic, raw.span, "candidate pool index too large".into());
                return None;
            }
            let mut pool = vec![PredictionTableAlphaBeta::new(depth); size];
            let by_index: BTreeMap<usize, Vec<&Row>> = raw.pools.iter().fold(BTreeMap::new(), |mut m, (i, r)| {
                m.entry(*i as usize).or_insert_with(Vec::new).push(r);
                m
            });
            for (i, rows) in by_index {
                for row in rows {
                    fill(&mut pool[i], row, diags);
                }
            }
            Fasa::Learning(Learner::new(pool, goal.clone().unwrap_or_else(|| Formula::new("?"))))
        }
    };

    let after = diags.iter().filter(|d| d.is_error()).count();
    if after != before {
        return None;
    }
    let mut agent = AgentArchitecture::new(&raw.name, &u.name, fasa);
    agent.representation = rmap;
    agent.projection = projection;
    Some(agent)
}
