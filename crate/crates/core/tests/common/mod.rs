//! Independent oracles and generators shared by the integration tests and
//! the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use exo_core::architectures::PredictionTableAlphaBeta;
use exo_core::{ActId, ActRepresentation, EnergyRules, Formula, RepresentationMap, StateClass, StateId, Universe};
use num_bigint::BigInt;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = Ratio<i64>;

pub fn fixtures_dir() -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let own = here.join("fixtures");
    if own.is_dir() {
        own
    } else {
        here.join("../core/fixtures")
    }
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(name)).expect("fixture exists")
}

/// A universe and one goal-directed table as plain index arrays.
#[derive(Debug, Clone)]
pub struct RawWorld {
    pub next: Vec<Vec<usize>>,
    pub class: Vec<StateClass>,
    /// Formula index of each state, if represented.
    pub rep: Vec<Option<usize>>,
    /// (source formula, goal formula, act indices)
    pub rows: Vec<(usize, usize, Vec<usize>)>,
    pub depth: usize,
}

impl RawWorld {
    pub fn states(&self) -> usize {
        self.next.len()
    }

    pub fn acts(&self) -> usize {
        self.next[0].len()
    }
}

fn formula_name(i: usize) -> String {
    format!("f{i}")
}

pub fn random_world<R: Rng>(rng: &mut R, max_states: usize, max_acts: usize) -> RawWorld {
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(1..=max_acts);
    let next = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect()).collect();
    let class = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => StateClass::Positive,
            1 => StateClass::Neutral,
            _ => StateClass::Negative,
        })
        .collect();
    let k = rng.gen_range(1..=n);
    let rep: Vec<Option<usize>> =
        (0..n).map(|_| if rng.gen_bool(0.85) { Some(rng.gen_range(0..k)) } else { None }).collect();
    let depth = rng.gen_range(1..=3);
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for _ in 0..rng.gen_range(0..=2 * n) {
        let key = (rng.gen_range(0..k), rng.gen_range(0..k));
        if seen.insert(key) {
            let len = rng.gen_range(1..=depth);
            rows.push((key.0, key.1, (0..len).map(|_| rng.gen_range(0..m)).collect()));
        }
    }
    RawWorld { next, class, rep, rows, depth }
}

pub fn to_library(w: &RawWorld) -> (Universe, RepresentationMap, PredictionTableAlphaBeta) {
    let energy =
        EnergyRules { initial_energy: 10, per_step_cost: 1, negative_penalty: 2, positive_reward: 1, energy_cap: 20 };
    let states = (0..w.states()).map(|i| format!("s{i}")).collect();
    let acts = (0..w.acts()).map(|i| format!("a{i}")).collect();
    let mut u = Universe::new("raw", states, acts, ActId(0), StateId(0), energy);
    for (s, row) in w.next.iter().enumerate() {
        for (a, t) in row.iter().enumerate() {
            u.set_transition(StateId(s as u32), ActId(a as u32), StateId(*t as u32));
        }
    }
    u.classes = w.class.clone();
    let mut rmap = RepresentationMap::new();
    for (s, f) in w.rep.iter().enumerate() {
        if let Some(f) = f {
            rmap.insert(StateId(s as u32), Formula::new(formula_name(*f)));
        }
    }
    let mut table = PredictionTableAlphaBeta::new(w.depth);
    for (src, goal, acts) in &w.rows {
        let seq = acts.iter().map(|a| ActRepresentation::new(format!("a{a}"))).collect();
        table.insert(Formula::new(formula_name(*src)), Formula::new(formula_name(*goal)), seq).unwrap();
    }
    (u, rmap, table)
}

/// Basic stability, instability and total stability by direct enumeration
/// over states, with the table's goals as objectives.
pub fn oracle_stability(w: &RawWorld) -> (Q, Q, Q) {
    let n = w.states() as i64;
    let has_row = |src: usize, goal: usize| w.rows.iter().any(|(s, g, _)| *s == src && *g == goal);
    // states x with a row (rep(x), goal)
    let departing = |goal: usize, keep: &dyn Fn(usize) -> bool| -> i64 {
        (0..w.states()).filter(|&x| keep(x) && w.rep[x].is_some_and(|f| has_row(f, goal))).count() as i64
    };
    let goals: BTreeSet<usize> = w.rows.iter().map(|(_, g, _)| *g).collect();
    let uniform = |g: usize, class: StateClass| {
        let pre: Vec<usize> = (0..w.states()).filter(|&x| w.rep[x] == Some(g)).collect();
        !pre.is_empty() && pre.iter().all(|&x| w.class[x] == class)
    };
    let averaged = |class: StateClass| -> Q {
        let chosen: Vec<usize> = goals.iter().copied().filter(|&g| uniform(g, class)).collect();
        if chosen.is_empty() {
            return Q::from_integer(0);
        }
        let mut sum = Q::from_integer(0);
        for g in &chosen {
            sum += Q::new(departing(*g, &|_| true), n);
        }
        sum / Q::from_integer(chosen.len() as i64)
    };
    let escapes = |from: StateClass| -> Q {
        let mut total = 0;
        for j in 0..w.states() {
            if w.class[j] != StateClass::Neutral {
                continue;
            }
            if let Some(phi) = w.rep[j] {
                total += departing(phi, &|x| w.class[x] == from);
            }
        }
        Q::new(total, n)
    };
    let basic = averaged(StateClass::Positive) + escapes(StateClass::Negative);
    let instability = averaged(StateClass::Negative) + escapes(StateClass::Positive);
    (basic, instability, basic - instability)
}

/// Plain replay of one row from state `start`.
pub fn replay(w: &RawWorld, start: usize, acts: &[usize]) -> usize {
    acts.iter().fold(start, |s, a| w.next[s][*a])
}

/// Shortest act path between two states, by breadth-first search.
pub fn shortest_path(w: &RawWorld, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; w.states()];
    let mut seen = vec![false; w.states()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(s) = queue.pop_front() {
        if s == to {
            let mut path = Vec::new();
            let mut cur = to;
            while let Some((p, a)) = prev[cur] {
                path.push(a);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for (a, &t) in w.next[s].iter().enumerate() {
            if !seen[t] {
                seen[t] = true;
                prev[t] = Some((s, a));
                queue.push_back(t);
            }
        }
    }
    None
}

fn in_base(mut v: u32, base: u32) -> Vec<u32> {
    if v == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    while v > 0 {
        out.push(v % base);
        v /= base;
    }
    out.reverse();
    out
}

/// Digits of π in `base` (integer part first), from the unbounded spigot of
/// Gibbons.
pub fn pi_digits(base: u32, count: usize) -> Vec<u32> {
    let b = BigInt::from(base);
    let (mut q, mut r, mut t) = (BigInt::from(1), BigInt::from(0), BigInt::from(1));
    let (mut k, mut n, mut l) = (BigInt::from(1), BigInt::from(3), BigInt::from(3));
    let mut out = Vec::new();
    let mut first = true;
    while out.len() < count {
        if BigInt::from(4) * &q + &r - &t < &n * &t {
            let digit: u32 = n.clone().try_into().unwrap();
            if first {
                out.extend(in_base(digit, base));
                first = false;
            } else {
                out.push(digit);
            }
            let nr = &b * (&r - &n * &t);
            n = (&b * (BigInt::from(3) * &q + &r)) / &t - &b * &n;
            q *= &b;
            r = nr;
        } else {
            let nr = (BigInt::from(2) * &q + &r) * &l;
            let nn = (&q * (BigInt::from(7) * &k + 2) + &r * &l) / (&t * &l);
            q *= &k;
            t *= &l;
            l += 2;
            k += 1;
            n = nn;
            r = nr;
        }
    }
    out.truncate(count);
    out
}

/// Digits of e in `base` (integer part first), from the mixed-radix spigot
/// of Sale.
pub fn e_digits(base: u32, count: usize) -> Vec<u32> {
    let mut out = in_base(2, base);
    // enough factorial places: N! > base^(count + 10)
    let target = (count as f64 + 10.0) * (base as f64).ln();
    let (mut places, mut acc) = (2usize, 0.0f64);
    while acc < target {
        places += 1;
        acc += (places as f64).ln();
    }
    let mut a = vec![1u64; places];
    while out.len() < count {
        let mut carry = 0u64;
        for i in (0..places).rev() {
            let k = i as u64 + 2;
            let x = a[i] * base as u64 + carry;
            a[i] = x % k;
            carry = x / k;
        }
        out.push(carry as u32);
    }
    out.truncate(count);
    out
}

fn pick<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).unwrap()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A random valid `.exo` document: 1 or 2 universes, agents of every
/// applicable kind, items in shuffled order.
pub fn random_document<R: Rng>(rng: &mut R) -> String {
    let mut out = String::new();
    let universes = rng.gen_range(1..=2);
    for ui in 0..universes {
        let uname = format!("world {ui}");
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=4);
        let states: Vec<String> =
            (0..n).map(|i| format!("st_{}", (b'a' + (i as u8 * 7 + ui as u8) % 26) as char)).collect();
        let states: Vec<String> = states.into_iter().enumerate().map(|(i, s)| format!("{s}{i}")).collect();
        let acts: Vec<String> = (0..m).map(|i| format!("act{}", (m - i) * 3)).collect();
        let mut items = Vec::new();
        let mut shuffled = states.clone();
        shuffled.shuffle(rng);
        items.push(format!("states: {};", shuffled.join(" ")));
        let mut shuffled = acts.clone();
        shuffled.shuffle(rng);
        items.push(format!("acts: {};", shuffled.join(" ")));
        items.push(format!("initial: {};", pick(rng, &states)));
        items.push(format!("neutral_act: {};", pick(rng, &acts)));
        for s in &states {
            for a in &acts {
                items.push(format!("transition {s} {a} {};", pick(rng, &states)));
            }
        }
        let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for s in &states {
            if rng.gen_bool(0.9) {
                let class = *pick(rng, &["positive", "neutral", "negative"]);
                groups.entry(class).or_default().push(s);
            }
        }
        for (class, members) in groups {
            items.push(format!("classify {class}: {};", members.join(" ")));
        }
        let initial = rng.gen_range(1..50);
        items.push(format!(
            "energy {{ initial: {initial}; per_step: {}; negative_penalty: {}; positive_reward: {}; cap: {}; }}",
            rng.gen_range(0..5),
            rng.gen_range(0..10),
            rng.gen_range(0..10),
            initial + rng.gen_range(0..50)
        ));
        items.shuffle(rng);
        out.push_str(&format!("universe {} {{\n", quote(&uname)));
        for i in items {
            out.push_str(&format!("  {i}\n"));
        }
        out.push_str("}\n");

        let kinds: &[&str] = if n >= 2 {
            &["random", "positional", "afs1", "afs2a", "afs2b", "afs3a"]
        } else {
            &["random", "positional"]
        };
        for (ai, kind) in kinds.iter().enumerate() {
            if rng.gen_bool(0.25) {
                continue;
            }
            out.push_str(&agent_text(rng, &format!("agent {ui}.{ai}"), &uname, kind, &states, &acts));
        }
    }
    out
}

fn agent_text<R: Rng>(rng: &mut R, name: &str, uname: &str, kind: &str, states: &[String], acts: &[String]) -> String {
    let mut items = vec![format!("architecture: {kind};")];
    let formulas_pool = ["near", "far away", "say \"hi\"", "back\\slash", "goal"];
    let mut image = Vec::new();
    if kind.starts_with("afs") {
        // first two states get distinct formulas so the image has two elements
        for (i, s) in states.iter().enumerate() {
            let f = if i < 2 { formulas_pool[i] } else { *pick(rng, &formulas_pool) };
            if i < 2 || rng.gen_bool(0.7) {
                items.push(format!("represents {s} -> {};", quote(f)));
                if !image.contains(&f) {
                    image.push(f);
                }
            }
        }
    }
    let row = |rng: &mut R, depth: usize| -> Vec<&str> {
        (0..rng.gen_range(1..=depth)).map(|_| pick(rng, acts).as_str()).collect()
    };
    match kind {
        "random" => {
            if rng.gen_bool(0.7) {
                items.push(format!("seed: {};", rng.gen::<u64>()));
            }
        }
        "positional" => {
            let c = match rng.gen_range(0..4) {
                0 => "constant: pi;".to_owned(),
                1 => "constant: e;".to_owned(),
                2 => {
                    let digits: String = (0..rng.gen_range(1..20))
                        .map(|_| char::from_digit(rng.gen_range(0..acts.len() as u32), 36).unwrap())
                        .collect();
                    format!("constant: digits {};", quote(&digits))
                }
                _ => String::new(),
            };
            if !c.is_empty() {
                items.push(c);
            }
        }
        "afs1" => {
            for f in &image {
                if rng.gen_bool(0.7) {
                    items.push(format!("react {}: {};", quote(f), pick(rng, acts)));
                }
            }
        }
        "afs2a" | "afs2b" | "afs3a" => {
            let depth = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                items.push(format!("depth: {depth};"));
            }
            if rng.gen_bool(0.2) {
                items.push("projection: 1;".into());
            }
            if kind != "afs2b" || rng.gen_bool(0.5) {
                items.push(format!("goal: {};", quote(pick(rng, &image))));
            }
            let pools = if kind == "afs3a" { rng.gen_range(1..=3) } else { 1 };
            for p in 0..pools {
                let mut keys = BTreeSet::new();
                for _ in 0..rng.gen_range(usize::from(kind == "afs3a")..=4) {
                    let key = (*pick(rng, &image), *pick(rng, &image));
                    if keys.insert(key) {
                        let seq = row(rng, depth).join(" ");
                        let prefix = if kind == "afs3a" { format!("pool {p} ") } else { String::new() };
                        items.push(format!("{prefix}predict {} -> {}: {seq};", quote(key.0), quote(key.1)));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    items[1..].shuffle(rng);
    let mut out = format!("agent {} in {} {{\n", quote(name), quote(uname));
    for i in items {
        out.push_str(&format!("  {i}\n"));
    }
    out.push_str("}\n");
    out
}

/// One random edit: deletion, insertion, duplication, swap or truncation.
pub fn mutate<R: Rng>(rng: &mut R, text: &str) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return "}".into();
    }
    const JUNK: &[char] = &['{', '}', ';', ':', '"', '-', '>', '#', '\\', '\n', ' ', 'x', '0', '9', 'é', '\0', '@'];
    for _ in 0..rng.gen_range(1..=4) {
        let len = chars.len().max(1);
        let at = rng.gen_range(0..len).min(chars.len());
        match rng.gen_range(0..6) {
            0 => {
                let end = (at + rng.gen_range(1..8)).min(chars.len());
                chars.drain(at..end);
            }
            1 => chars.insert(at, *pick(rng, JUNK)),
            2 => {
                let end = (at + rng.gen_range(1..30)).min(chars.len());
                let piece: Vec<char> = chars[at..end].to_vec();
                let dest = rng.gen_range(0..=chars.len());
                chars.splice(dest..dest, piece);
            }
            3 => {
                if chars.len() > 1 {
                    let (last, other) = (chars.len() - 1, rng.gen_range(0..chars.len()));
                    chars.swap(at.min(last), other);
                }
            }
            4 => chars.truncate(at),
            _ => {
                let digits: Vec<char> =
                    rng.gen_range(0u64..u64::MAX).to_string().chars().chain("999".chars()).collect();
                chars.splice(at..at, digits);
            }
        }
        if chars.is_empty() {
            break;
        }
    }
    chars.into_iter().collect()
}
