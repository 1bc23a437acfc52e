//! Three-valued evaluation of the persistence postulate
//! `(s ∧ r → r') ∧ (s ∧ n → n')`.
//!
//! `s`: the universe is act-sensitive; `r`: some systems move according to a
//! representation; `n`: some systems move without one; `r'`/`n'`: those
//! systems persist. Connectives follow strong Kleene logic.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn implies(self, consequent: Truth) -> Truth {
        match (self, consequent) {
            (Truth::False, _) | (_, Truth::True) => Truth::True,
            (Truth::True, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    /// `V`, `F` or `?`.
    pub fn symbol(self) -> char {
        match self {
            Truth::True => 'V',
            Truth::False => 'F',
            Truth::Unknown => '?',
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogicCase {
    pub s: bool,
    pub r: bool,
    pub n: bool,
    pub r_prime: Truth,
    pub n_prime: Truth,
}

impl LogicCase {
    /// A situation whose persistence outcomes are not yet observed.
    pub fn unobserved(s: bool, r: bool, n: bool) -> Self {
        LogicCase { s, r, n, r_prime: Truth::Unknown, n_prime: Truth::Unknown }
    }
}

pub fn eval_postulate2(case: LogicCase) -> Truth {
    let s = Truth::from(case.s);
    let with_rep = s.and(case.r.into()).implies(case.r_prime);
    let without_rep = s.and(case.n.into()).implies(case.n_prime);
    with_rep.and(without_rep)
}

/// One row of the situation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicRow {
    pub group: &'static str,
    pub case: char,
    pub s: bool,
    pub r: bool,
    pub n: bool,
    pub s_and_r: Truth,
    pub s_and_n: Truth,
    pub value: Truth,
}

/// The eight situations: immobile systems (I), mobile systems in universes
/// without act sensitivity (II) and mobile systems in act-sensitive
/// universes (III), all with unobserved consequents.
pub fn situation_table() -> Vec<LogicRow> {
    const SITUATIONS: [(&str, char, bool, bool, bool); 8] = [
        ("I", 'a', true, false, false),
        ("I", 'b', false, false, false),
        ("II", 'a', false, false, true),
        ("II", 'b', false, true, false),
        ("II", 'c', false, true, true),
        ("III", 'a', true, false, true),
        ("III", 'b', true, true, false),
        ("III", 'c', true, true, true),
    ];
    SITUATIONS
        .iter()
        .map(|&(group, case, s, r, n)| LogicRow {
            group,
            case,
            s,
            r,
            n,
            s_and_r: (s && r).into(),
            s_and_n: (s && n).into(),
            value: eval_postulate2(LogicCase::unobserved(s, r, n)),
        })
        .collect()
}

/// Fixed-width rendering of [`situation_table`].
pub fn render_situation_table() -> String {
    let mut out = String::from("table case s r n s&r s&n postulate\n");
    for row in situation_table() {
        let b = |v: bool| Truth::from(v).symbol();
        out.push_str(&format!(
            "{:<5} {})   {} {} {} {}   {}   {}\n",
            row.group,
            row.case,
            b(row.s),
            b(row.r),
            b(row.n),
            row.s_and_r,
            row.s_and_n,
            row.value
        ));
    }
    out
}
