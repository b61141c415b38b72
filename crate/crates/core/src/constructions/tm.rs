//! Deterministic single-tape Turing machines and their valid computations.
//!
//! A configuration is written `t1..ti s t(i+1)..tn`: the state symbol sits
//! immediately left of the scanned cell. A right move off the written
//! support appends one blank; a left move off its left edge is not allowed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::machine::Move;
use crate::symbol::{Alphabet, Sym, Word};

/// Symbol of a configuration word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TmSym {
    Tape(u16),
    State(u16),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TmAction {
    pub state: u16,
    pub write: u16,
    pub dir: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    name: String,
    states: Vec<String>,
    tape: Vec<String>,
    blank: u16,
    input: BTreeSet<u16>,
    initial: u16,
    accepting: BTreeSet<u16>,
    delta: BTreeMap<(u16, u16), TmAction>,
    state_index: HashMap<String, u16>,
    tape_index: HashMap<String, u16>,
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',' || c == '#') || name == "$" {
        return Err(Error::usage(format!("invalid Turing machine symbol {name:?}")));
    }
    if [crate::symbol::LEFT_END_TOKEN, crate::symbol::RIGHT_END_TOKEN, crate::symbol::LAMBDA_TOKEN].contains(&name) {
        return Err(Error::usage(format!("{name:?} is a reserved token")));
    }
    Ok(())
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, u16>> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        check_name(n)?;
        if index.insert(n.clone(), i as u16).is_some() {
            return Err(Error::usage(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(index)
}

impl TuringMachine {
    /// A machine without transitions; states and tape symbols must be disjoint.
    pub fn new(
        name: impl Into<String>,
        states: &[&str],
        tape: &[&str],
        blank: &str,
        input: &[&str],
        initial: &str,
        accepting: &[&str],
    ) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let tape: Vec<String> = tape.iter().map(|s| s.to_string()).collect();
        let state_index = index_names(&states, "state")?;
        let tape_index = index_names(&tape, "tape symbol")?;
        if let Some(s) = states.iter().find(|s| tape_index.contains_key(*s)) {
            return Err(Error::usage(format!("{s:?} is both a state and a tape symbol")));
        }
        let tape_id = |n: &str| tape_index.get(n).copied().ok_or_else(|| Error::usage(format!("unknown tape symbol {n:?}")));
        let state_id = |n: &str| state_index.get(n).copied().ok_or_else(|| Error::usage(format!("unknown state {n:?}")));
        let blank = tape_id(blank)?;
        let input = input.iter().map(|n| tape_id(n)).collect::<Result<BTreeSet<_>>>()?;
        if input.contains(&blank) {
            return Err(Error::usage("the blank is not an input symbol"));
        }
        let initial = state_id(initial)?;
        let accepting = accepting.iter().map(|n| state_id(n)).collect::<Result<BTreeSet<_>>>()?;
        Ok(TuringMachine {
            name: name.into(),
            states,
            tape,
            blank,
            input,
            initial,
            accepting,
            delta: BTreeMap::new(),
            state_index,
            tape_index,
        })
    }

    /// Adds `δ(from, read) = (to, write, dir)`; the mapping is a function.
    pub fn transition(&mut self, from: &str, read: &str, to: &str, write: &str, dir: Move) -> Result<&mut Self> {
        let key = (self.state(from)?, self.tape_symbol(read)?);
        let action = TmAction { state: self.state(to)?, write: self.tape_symbol(write)?, dir };
        if self.delta.insert(key, action).is_some() {
            return Err(Error::usage(format!("second transition for ({from}, {read})")));
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn tape_alphabet(&self) -> &[String] {
        &self.tape
    }

    pub fn blank(&self) -> u16 {
        self.blank
    }

    pub fn input_symbols(&self) -> &BTreeSet<u16> {
        &self.input
    }

    pub fn initial(&self) -> u16 {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<u16> {
        &self.accepting
    }

    pub fn is_accepting(&self, state: u16) -> bool {
        self.accepting.contains(&state)
    }

    pub fn action(&self, state: u16, read: u16) -> Option<TmAction> {
        self.delta.get(&(state, read)).copied()
    }

    pub fn transitions(&self) -> impl Iterator<Item = ((u16, u16), TmAction)> + '_ {
        self.delta.iter().map(|(k, v)| (*k, *v))
    }

    pub fn state(&self, name: &str) -> Result<u16> {
        self.state_index.get(name).copied().ok_or_else(|| Error::usage(format!("unknown state {name:?}")))
    }

    pub fn tape_symbol(&self, name: &str) -> Result<u16> {
        self.tape_index.get(name).copied().ok_or_else(|| Error::usage(format!("unknown tape symbol {name:?}")))
    }

    pub fn state_name(&self, s: u16) -> &str {
        &self.states[s as usize]
    }

    pub fn tape_name(&self, t: u16) -> &str {
        &self.tape[t as usize]
    }

    /// Whitespace-separated input symbols, or one per character when all
    /// names are single characters and the text has no spaces.
    pub fn parse_input(&self, text: &str) -> Result<Vec<u16>> {
        let names: Vec<String> = self.input.iter().map(|&t| self.tape[t as usize].clone()).collect();
        let ab = Alphabet::new(names)?;
        let word = ab.parse_word(text)?;
        word.iter().map(|&s| self.tape_symbol(ab.name(s))).collect()
    }
}

/// Static conformance problems: blank writes and accepting states that can
/// still move (acceptance is by halting).
pub fn validate_tm(tm: &TuringMachine) -> Vec<String> {
    let mut out = Vec::new();
    for ((s, t), a) in tm.transitions() {
        if a.write == tm.blank {
            out.push(format!("transition ({}, {}) writes the blank", tm.state_name(s), tm.tape_name(t)));
        }
        if tm.is_accepting(s) {
            out.push(format!("accepting state {} has a transition on {}", tm.state_name(s), tm.tape_name(t)));
        }
    }
    out
}

pub(crate) fn ensure_conforming(tm: &TuringMachine) -> Result<()> {
    let problems = validate_tm(tm);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(problems))
    }
}

/// `left · state · right`; an empty `right` only occurs for the initial
/// configuration on empty input, where the scanned cell is an implicit blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfiguration {
    pub left: Vec<u16>,
    pub state: u16,
    pub right: Vec<u16>,
}

impl TmConfiguration {
    pub fn initial(tm: &TuringMachine, input: &[u16]) -> Self {
        TmConfiguration { left: Vec::new(), state: tm.initial, right: input.to_vec() }
    }

    pub fn word(&self) -> Vec<TmSym> {
        let mut w: Vec<TmSym> = self.left.iter().map(|&t| TmSym::Tape(t)).collect();
        w.push(TmSym::State(self.state));
        w.extend(self.right.iter().map(|&t| TmSym::Tape(t)));
        w
    }

    /// Parses a word with exactly one state symbol.
    pub fn from_word(word: &[TmSym]) -> Option<Self> {
        let mut states = word.iter().enumerate().filter(|(_, s)| matches!(s, TmSym::State(_)));
        let (at, &TmSym::State(state)) = states.next()? else { return None };
        if states.next().is_some() {
            return None;
        }
        let tape = |w: &[TmSym]| {
            w.iter()
                .map(|s| match s {
                    TmSym::Tape(t) => *t,
                    TmSym::State(_) => unreachable!("single state symbol"),
                })
                .collect()
        };
        Some(TmConfiguration { left: tape(&word[..at]), state, right: tape(&word[at + 1..]) })
    }

    pub fn render(&self, tm: &TuringMachine) -> String {
        self.word()
            .iter()
            .map(|s| match *s {
                TmSym::Tape(t) => tm.tape_name(t),
                TmSym::State(q) => tm.state_name(q),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// One move of `tm`; `None` when δ is undefined (the machine halts).
pub fn tm_step(tm: &TuringMachine, c: &TmConfiguration) -> Result<Option<TmConfiguration>> {
    let scanned = c.right.first().copied().unwrap_or(tm.blank);
    let Some(a) = tm.action(c.state, scanned) else { return Ok(None) };
    let mut left = c.left.clone();
    let mut right = if c.right.is_empty() { vec![tm.blank] } else { c.right.clone() };
    right[0] = a.write;
    match a.dir {
        Move::Stay => {}
        Move::Right => {
            left.push(right.remove(0));
            if right.is_empty() {
                right.push(tm.blank);
            }
        }
        Move::Left => {
            let Some(t) = left.pop() else {
                return Err(Error::Conformance(format!(
                    "left move off the tape in state {} on {}",
                    tm.state_name(c.state),
                    tm.tape_name(scanned)
                )));
            };
            right.insert(0, t);
        }
    }
    Ok(Some(TmConfiguration { left, state: a.state, right }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TmOutcome {
    /// Halted in an accepting state; the full configuration history.
    Accepted(Vec<TmConfiguration>),
    Rejected(Vec<TmConfiguration>),
    BoundExceeded,
}

/// Runs `tm` on `input` for at most `max_steps` moves. An accepting halt
/// after an even number of moves or fewer than three moves is a
/// conformance error.
pub fn tm_run(tm: &TuringMachine, input: &[u16], max_steps: usize) -> Result<TmOutcome> {
    if let Some(t) = input.iter().find(|t| !tm.input.contains(t)) {
        return Err(Error::usage(format!("{:?} is not an input symbol", tm.tape.get(*t as usize))));
    }
    let mut history = vec![TmConfiguration::initial(tm, input)];
    loop {
        let current = history.last().expect("nonempty history");
        match tm_step(tm, current)? {
            Some(next) => {
                if history.len() > max_steps {
                    return Ok(TmOutcome::BoundExceeded);
                }
                history.push(next);
            }
            None => {
                if !tm.is_accepting(current.state) {
                    return Ok(TmOutcome::Rejected(history));
                }
                let moves = history.len() - 1;
                if moves < 3 || moves % 2 == 0 {
                    return Err(Error::Conformance(format!("accepting halt after {moves} moves; need an odd number of at least three")));
                }
                return Ok(TmOutcome::Accepted(history));
            }
        }
    }
}

/// The alphabet `{$} ∪ T ∪ S` of computation histories, in that order.
pub fn valc_alphabet(tm: &TuringMachine) -> Alphabet {
    let names = std::iter::once("$".to_string()).chain(tm.tape.iter().cloned()).chain(tm.states.iter().cloned());
    Alphabet::new(names).expect("states and tape symbols are disjoint and never $")
}

/// Reading of a history symbol: `None` for the separator.
pub fn valc_symbol(tm: &TuringMachine, s: Sym) -> Option<TmSym> {
    let i = s.index();
    let t = tm.tape.len();
    match i {
        0 => None,
        _ if i <= t => Some(TmSym::Tape((i - 1) as u16)),
        _ => Some(TmSym::State((i - 1 - t) as u16)),
    }
}

pub fn valc_sym(tm: &TuringMachine, s: TmSym) -> Sym {
    match s {
        TmSym::Tape(t) => Sym(1 + t),
        TmSym::State(q) => Sym(1 + tm.tape.len() as u16 + q),
    }
}

/// `$w1$w2$…$w2n$` for an accepted history.
pub fn valc_string(tm: &TuringMachine, history: &[TmConfiguration]) -> Result<Word> {
    if history.len() < 4 || history.len() % 2 == 1 {
        return Err(Error::Conformance(format!(
            "a valid computation needs an even number of at least four configurations, got {}",
            history.len()
        )));
    }
    let mut out = vec![Sym(0)];
    for c in history {
        out.extend(c.word().into_iter().map(|s| valc_sym(tm, s)));
        out.push(Sym(0));
    }
    Ok(out)
}

/// Direct membership test for the valid computations of `tm`.
pub fn reference_valc_member(tm: &TuringMachine, word: &[Sym]) -> bool {
    if word.len() < 2 || word[0] != Sym(0) || word[word.len() - 1] != Sym(0) {
        return false;
    }
    let Some(syms) = word.iter().map(|&s| (s.index() < 1 + tm.tape.len() + tm.states.len()).then(|| valc_symbol(tm, s))).collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let blocks: Vec<&[Option<TmSym>]> = syms[1..syms.len() - 1].split(|s| s.is_none()).collect();
    if blocks.len() < 4 || blocks.len() % 2 == 1 {
        return false;
    }
    let mut configs = Vec::with_capacity(blocks.len());
    for b in blocks {
        let w: Vec<TmSym> = b.iter().map(|s| s.expect("separators were split off")).collect();
        match TmConfiguration::from_word(&w) {
            Some(c) => configs.push(c),
            None => return false,
        }
    }
    let first = &configs[0];
    if !first.left.is_empty() || first.state != tm.initial || first.right.iter().any(|t| !tm.input.contains(t)) {
        return false;
    }
    if !tm.is_accepting(configs[configs.len() - 1].state) {
        return false;
    }
    configs.windows(2).all(|p| matches!(tm_step(tm, &p[0]), Ok(Some(next)) if next == p[1]))
}

/// Three-state machine accepting `{ε, a}` with a stay, a right and a left
/// move; its shortest valid computation has 14 symbols.
pub fn fixture_tm() -> TuringMachine {
    let mut tm = TuringMachine::new("stay-right-left", &["s0", "s1", "f"], &["_", "a", "b"], "_", &["a"], "s0", &["f"])
        .expect("fixture machine");
    tm.transition("s0", "_", "s1", "b", Move::Stay)
        .and_then(|t| t.transition("s0", "a", "s1", "b", Move::Stay))
        .and_then(|t| t.transition("s1", "b", "s1", "b", Move::Right))
        .and_then(|t| t.transition("s1", "_", "f", "b", Move::Left))
        .expect("fixture transitions");
    tm
}

/// Machine over `{a}` that walks right over its input, overwriting it,
/// and accepts the nonempty inputs of even length.
pub fn parity_tm() -> TuringMachine {
    let mut tm = TuringMachine::new("even", &["s0", "o", "e", "f"], &["_", "a", "x"], "_", &["a"], "s0", &["f"])
        .expect("parity machine");
    tm.transition("s0", "a", "o", "x", Move::Right)
        .and_then(|t| t.transition("o", "a", "e", "x", Move::Right))
        .and_then(|t| t.transition("e", "a", "o", "x", Move::Right))
        .and_then(|t| t.transition("e", "_", "f", "x", Move::Stay))
        .expect("parity transitions");
    tm
}
