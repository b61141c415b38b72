//! The k-head finite automaton description and its structural checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Letter};
use crate::variants::CoincidencePartition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    OneWay,
    TwoWay,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OneWay => "one-way",
            Direction::TwoWay => "two-way",
        })
    }
}

/// How heads perceive the tape. Head indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Plain,
    /// Transition keys also carry the coincidence partition of head positions.
    Sensing,
    /// Only the designated head distinguishes input symbols.
    PartiallyBlind { designated: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_delta(d: i64) -> Option<Move> {
        match d {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }
}

/// One element of a transition image: next state plus a move per head.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Target {
    pub state: StateId,
    pub moves: SmallVec<[Move; 4]>,
}

/// A single `(state, read) -> (state', moves)` entry in decoded form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub read: Vec<Letter>,
    pub partition: Option<CoincidencePartition>,
    pub to: StateId,
    pub moves: Vec<Move>,
}

/// Packs a read tuple (and optional partition) into one integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct KeyCodec {
    radix: u64,
    heads: usize,
    letters_span: u64,
}

impl KeyCodec {
    fn new(alphabet_len: usize, heads: usize) -> Option<Self> {
        let radix = alphabet_len as u64 + 2;
        let letters_span = radix.checked_pow(heads as u32)?;
        let parts = (heads as u64).checked_pow(heads as u32)?.checked_add(1)?;
        letters_span.checked_mul(parts)?;
        Some(KeyCodec { radix, heads, letters_span })
    }

    fn letter_code(&self, letter: Letter) -> u64 {
        match letter {
            Letter::LeftEnd => 0,
            Letter::Sym(s) => s.0 as u64 + 1,
            Letter::RightEnd => self.radix - 1,
        }
    }

    fn code_letter(&self, code: u64) -> Letter {
        if code == 0 {
            Letter::LeftEnd
        } else if code == self.radix - 1 {
            Letter::RightEnd
        } else {
            Letter::Sym(crate::symbol::Sym((code - 1) as u16))
        }
    }

    pub(crate) fn encode(&self, read: &[Letter], partition: Option<&CoincidencePartition>) -> u64 {
        let mut code = 0u64;
        for &l in read.iter().rev() {
            code = code * self.radix + self.letter_code(l);
        }
        let part = match partition {
            None => 0,
            Some(p) => {
                let k = self.heads as u64;
                1 + p.labels().iter().rev().fold(0u64, |acc, &l| acc * k + l as u64)
            }
        };
        code + self.letters_span * part
    }

    fn decode(&self, code: u64) -> (Vec<Letter>, Option<CoincidencePartition>) {
        let mut letters_code = code % self.letters_span;
        let part = code / self.letters_span;
        let mut read = Vec::with_capacity(self.heads);
        for _ in 0..self.heads {
            read.push(self.code_letter(letters_code % self.radix));
            letters_code /= self.radix;
        }
        let partition = if part == 0 {
            None
        } else {
            let k = self.heads as u64;
            let mut rest = part - 1;
            let mut labels = Vec::with_capacity(self.heads);
            for _ in 0..self.heads {
                labels.push((rest % k) as u8);
                rest /= k;
            }
            Some(CoincidencePartition::from_labels(labels))
        };
        (read, partition)
    }
}

/// A k-head finite automaton over an endmarked tape.
///
/// Values are immutable once built; construct them with [`MachineBuilder`].
#[derive(Debug, Clone)]
pub struct MultiHeadAutomaton {
    name: String,
    alphabet: Alphabet,
    heads: usize,
    direction: Direction,
    flavor: Flavor,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    codec: KeyCodec,
    table: HashMap<(StateId, u64), SmallVec<[Target; 1]>>,
}

impl MultiHeadAutomaton {
    pub fn builder(
        name: impl Into<String>,
        alphabet: Alphabet,
        heads: usize,
        direction: Direction,
    ) -> MachineBuilder {
        MachineBuilder {
            name: name.into(),
            alphabet,
            heads,
            direction,
            flavor: Flavor::Plain,
            states: Vec::new(),
            state_index: HashMap::new(),
            initial: None,
            accepting: BTreeSet::new(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn heads(&self) -> usize {
        self.heads
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting.contains(&state)
    }

    pub fn transition_count(&self) -> usize {
        self.table.values().map(|v| v.len()).sum()
    }

    /// The image of `(state, read)`; empty when undefined.
    pub fn targets(
        &self,
        state: StateId,
        read: &[Letter],
        partition: Option<&CoincidencePartition>,
    ) -> &[Target] {
        let code = self.codec.encode(read, partition);
        self.table.get(&(state, code)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Transition images grouped by key, in no particular order.
    pub(crate) fn images(&self) -> impl Iterator<Item = (StateId, Vec<Letter>, Option<CoincidencePartition>, &[Target])> {
        self.table.iter().map(|(&(state, code), targets)| {
            let (read, partition) = self.codec.decode(code);
            (state, read, partition, targets.as_slice())
        })
    }

    /// All transitions, sorted by state, read tuple and target.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out: Vec<Transition> = self
            .images()
            .flat_map(|(from, read, partition, targets)| {
                targets.iter().map(move |t| Transition {
                    from,
                    read: read.clone(),
                    partition: partition.clone(),
                    to: t.state,
                    moves: t.moves.to_vec(),
                })
            })
            .collect();
        out.sort();
        out
    }

    /// A copy with a different name; everything else is shared.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut m = self.clone();
        m.name = name.into();
        m
    }
}

/// Incremental construction of a [`MultiHeadAutomaton`].
#[derive(Debug, Clone)]
pub struct MachineBuilder {
    name: String,
    alphabet: Alphabet,
    heads: usize,
    direction: Direction,
    flavor: Flavor,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: Option<StateId>,
    accepting: BTreeSet<StateId>,
    transitions: BTreeMap<(StateId, Vec<Letter>, Option<CoincidencePartition>), BTreeSet<Target>>,
}

impl MachineBuilder {
    pub fn flavor(&mut self, flavor: Flavor) -> &mut Self {
        self.flavor = flavor;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Interns a state name, returning its id.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        id
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.initial = Some(id);
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.accepting.insert(id);
        self
    }

    pub fn transition(
        &mut self,
        from: &str,
        read: &[Letter],
        partition: Option<CoincidencePartition>,
        to: &str,
        moves: &[Move],
    ) -> Result<&mut Self> {
        if read.len() != self.heads || moves.len() != self.heads {
            return Err(Error::usage(format!(
                "transition from {from}: expected {} read symbols and moves, got {} and {}",
                self.heads,
                read.len(),
                moves.len()
            )));
        }
        if let Some(p) = &partition {
            if p.len() != self.heads {
                return Err(Error::usage(format!("transition from {from}: partition arity mismatch")));
            }
        }
        for &l in read {
            if let Letter::Sym(s) = l {
                if !self.alphabet.contains(s) {
                    return Err(Error::usage(format!("transition from {from}: foreign symbol")));
                }
            }
        }
        let from = self.state(from);
        let to = self.state(to);
        self.transitions
            .entry((from, read.to_vec(), partition))
            .or_default()
            .insert(Target { state: to, moves: moves.iter().copied().collect() });
        Ok(self)
    }

    pub fn build(&self) -> Result<MultiHeadAutomaton> {
        if self.heads == 0 {
            return Err(Error::usage("a machine needs at least one head"));
        }
        let initial = self.initial.ok_or_else(|| Error::usage("no initial state declared"))?;
        let codec = KeyCodec::new(self.alphabet.len(), self.heads)
            .ok_or_else(|| Error::usage("alphabet and head count too large to index"))?;
        let sensing = self.flavor == Flavor::Sensing;
        let mut table: HashMap<(StateId, u64), SmallVec<[Target; 1]>> = HashMap::new();
        for ((from, read, partition), targets) in &self.transitions {
            if partition.is_some() != sensing {
                return Err(Error::usage(if sensing {
                    "sensing machines need a partition on every transition"
                } else {
                    "partition keys are only allowed on sensing machines"
                }));
            }
            let code = codec.encode(read, partition.as_ref());
            table.insert((*from, code), targets.iter().cloned().collect());
        }
        Ok(MultiHeadAutomaton {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            heads: self.heads,
            direction: self.direction,
            flavor: self.flavor,
            states: self.states.clone(),
            state_index: self.state_index.clone(),
            initial,
            accepting: self.accepting.clone(),
            codec,
            table,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    LeftEndmarker,
    RightEndmarker,
    OneWay,
    DesignatedHead,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::LeftEndmarker => "left-endmarker",
            Rule::RightEndmarker => "right-endmarker",
            Rule::OneWay => "one-way",
            Rule::DesignatedHead => "designated-head",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

pub(crate) fn describe(m: &MultiHeadAutomaton, t: &Transition) -> String {
    let read: Vec<&str> = t.read.iter().map(|&l| m.alphabet().letter_name(l)).collect();
    let moves: Vec<String> = t.moves.iter().map(|mv| mv.delta().to_string()).collect();
    format!(
        "{} {} -> {} {}",
        m.state_name(t.from),
        read.join(","),
        m.state_name(t.to),
        moves.join(",")
    )
}

/// Checks the endmarker restriction, the one-way restriction, and flavor
/// parameters. An empty result means the machine is well formed.
pub fn validate(m: &MultiHeadAutomaton) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Flavor::PartiallyBlind { designated } = m.flavor() {
        if designated >= m.heads() {
            out.push(Diagnostic {
                rule: Rule::DesignatedHead,
                message: format!("designated head {} out of range 1..={}", designated + 1, m.heads()),
            });
        }
    }
    for t in m.transitions() {
        for (i, (&l, &mv)) in t.read.iter().zip(&t.moves).enumerate() {
            if l == Letter::LeftEnd && mv == Move::Left {
                out.push(Diagnostic {
                    rule: Rule::LeftEndmarker,
                    message: format!("head {} moves left off the left endmarker in `{}`", i + 1, describe(m, &t)),
                });
            }
            if l == Letter::RightEnd && mv == Move::Right {
                out.push(Diagnostic {
                    rule: Rule::RightEndmarker,
                    message: format!("head {} moves right off the right endmarker in `{}`", i + 1, describe(m, &t)),
                });
            }
            if m.direction() == Direction::OneWay && mv == Move::Left {
                out.push(Diagnostic {
                    rule: Rule::OneWay,
                    message: format!("head {} moves left in one-way machine: `{}`", i + 1, describe(m, &t)),
                });
            }
        }
    }
    out
}

/// Deterministic iff every transition image has at most one element.
pub fn is_deterministic(m: &MultiHeadAutomaton) -> bool {
    m.table.values().all(|v| v.len() <= 1)
}

/// True iff no transition moves a head to the left.
pub fn is_one_way(m: &MultiHeadAutomaton) -> bool {
    m.table.values().flatten().all(|t| !t.moves.contains(&Move::Left))
}
