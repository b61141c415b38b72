//! Parallel communicating finite automata systems.
//!
//! `k` components share a one-way input and move in lockstep. A component
//! entering the query state `q_j` is overwritten by the state of component
//! `j` in the following communication step.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Direction, Move, MultiHeadAutomaton, StateId};
use crate::semantics::Acceptor;
use crate::symbol::{Alphabet, Letter, Sym};

/// What a component transition consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PcfaRead {
    Sym(Sym),
    Lambda,
    /// The end-of-input marker; reading it does not advance.
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Returning,
    NonReturning,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Returning => "returning",
            Mode::NonReturning => "non-returning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcfaComponent {
    pub states: BTreeSet<StateId>,
    pub transitions: BTreeMap<(StateId, PcfaRead), BTreeSet<StateId>>,
    pub initial: StateId,
    pub accepting: BTreeSet<StateId>,
}

impl PcfaComponent {
    pub fn targets(&self, state: StateId, read: PcfaRead) -> impl Iterator<Item = StateId> + '_ {
        self.transitions.get(&(state, read)).into_iter().flatten().copied()
    }

    fn has(&self, state: StateId, read: PcfaRead) -> bool {
        self.transitions.get(&(state, read)).is_some_and(|t| !t.is_empty())
    }
}

/// State names are shared by all components, so a state received through
/// communication keeps its identity.
#[derive(Debug, Clone)]
pub struct PcfaSystem {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    components: Vec<PcfaComponent>,
    queries: Vec<StateId>,
    mode: Mode,
    centralized: bool,
}

/// Name of the query state addressing component `i` (zero-based).
pub fn query_name(i: usize) -> String {
    format!("q{}", i + 1)
}

impl PcfaSystem {
    pub fn builder(name: impl Into<String>, alphabet: Alphabet, components: usize, mode: Mode, centralized: bool) -> PcfaBuilder {
        let mut b = PcfaBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            state_index: HashMap::new(),
            components: vec![ComponentDraft::default(); components],
            queries: Vec::new(),
            mode,
            centralized,
        };
        b.queries = (0..components).map(|i| b.intern(&query_name(i))).collect();
        b
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[PcfaComponent] {
        &self.components
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_centralized(&self) -> bool {
        self.centralized
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.index()]
    }

    /// Every state name, query states included, in id order.
    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    /// The component a query state addresses, if `state` is one.
    pub fn query_target(&self, state: StateId) -> Option<usize> {
        self.queries.iter().position(|&q| q == state)
    }

    pub fn is_query(&self, state: StateId) -> bool {
        self.query_target(state).is_some()
    }

    pub fn query_state(&self, component: usize) -> StateId {
        self.queries[component]
    }
}

#[derive(Debug, Clone, Default)]
struct ComponentDraft {
    states: BTreeSet<StateId>,
    transitions: BTreeMap<(StateId, PcfaRead), BTreeSet<StateId>>,
    initial: Option<StateId>,
    accepting: BTreeSet<StateId>,
}

/// Incremental construction of a [`PcfaSystem`]; components are zero-based.
#[derive(Debug, Clone)]
pub struct PcfaBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    components: Vec<ComponentDraft>,
    queries: Vec<StateId>,
    mode: Mode,
    centralized: bool,
}

impl PcfaBuilder {
    fn intern(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        id
    }

    fn draft(&mut self, component: usize) -> Result<&mut ComponentDraft> {
        let k = self.components.len();
        self.components
            .get_mut(component)
            .ok_or_else(|| Error::usage(format!("component {} out of range 1..={k}", component + 1)))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Reserves an id for `name` without attaching it to a component.
    pub fn declare(&mut self, name: &str) -> StateId {
        self.intern(name)
    }

    /// Declares `name` as a state of `component`.
    pub fn state(&mut self, component: usize, name: &str) -> Result<StateId> {
        let id = self.intern(name);
        self.draft(component)?.states.insert(id);
        Ok(id)
    }

    pub fn initial(&mut self, component: usize, name: &str) -> Result<&mut Self> {
        let id = self.state(component, name)?;
        self.draft(component)?.initial = Some(id);
        Ok(self)
    }

    pub fn accepting(&mut self, component: usize, name: &str) -> Result<&mut Self> {
        let id = self.state(component, name)?;
        self.draft(component)?.accepting.insert(id);
        Ok(self)
    }

    pub fn transition(&mut self, component: usize, from: &str, read: PcfaRead, to: &str) -> Result<&mut Self> {
        if let PcfaRead::Sym(s) = read {
            if !self.alphabet.contains(s) {
                return Err(Error::usage(format!("component {}: foreign symbol", component + 1)));
            }
        }
        let from = self.state(component, from)?;
        let to = self.state(component, to)?;
        self.draft(component)?.transitions.entry((from, read)).or_default().insert(to);
        Ok(self)
    }

    pub fn build(&self) -> Result<PcfaSystem> {
        if self.components.is_empty() {
            return Err(Error::usage("a system needs at least one component"));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, d)| {
                Ok(PcfaComponent {
                    states: d.states.clone(),
                    transitions: d.transitions.clone(),
                    initial: d.initial.ok_or_else(|| Error::usage(format!("component {} has no initial state", i + 1)))?,
                    accepting: d.accepting.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PcfaSystem {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            state_index: self.state_index.clone(),
            components,
            queries: self.queries.clone(),
            mode: self.mode,
            centralized: self.centralized,
        })
    }
}

fn read_name(sys: &PcfaSystem, read: PcfaRead) -> &str {
    match read {
        PcfaRead::Sym(s) => sys.alphabet.name(s),
        PcfaRead::Lambda => crate::symbol::LAMBDA_TOKEN,
        PcfaRead::End => crate::symbol::RIGHT_END_TOKEN,
    }
}

/// Structural problems of a system; empty when it is well formed.
pub fn validate_system(sys: &PcfaSystem) -> Vec<String> {
    let mut out = Vec::new();
    let distinct: HashSet<StateId> = sys.queries.iter().copied().collect();
    if distinct.len() != sys.queries.len() {
        out.push("query states are not pairwise distinct".to_string());
    }
    for (j, &q) in sys.queries.iter().enumerate() {
        if !sys.components.iter().any(|c| c.states.contains(&q)) {
            out.push(format!("query state {} (component {}) belongs to no component", sys.state_name(q), j + 1));
        }
    }
    if sys.centralized {
        for (i, c) in sys.components.iter().enumerate().skip(1) {
            for &s in &c.states {
                if sys.is_query(s) && !c.transitions.keys().any(|&(f, _)| f == s) && !c.transitions.values().any(|t| t.contains(&s)) {
                    out.push(format!("component {} of a centralized system has query state {}", i + 1, sys.state_name(s)));
                }
            }
            for (&(from, read), targets) in &c.transitions {
                for &to in targets {
                    if sys.is_query(from) || sys.is_query(to) {
                        out.push(format!(
                            "component {} of a centralized system uses a query state in {} {} -> {}",
                            i + 1,
                            sys.state_name(from),
                            read_name(sys, read),
                            sys.state_name(to)
                        ));
                    }
                }
            }
        }
    }
    out
}

/// True iff every component is deterministic: singleton images, and no
/// state with a λ-move has any other move.
pub fn is_deterministic_system(sys: &PcfaSystem) -> bool {
    sys.components.iter().all(|c| {
        c.transitions.values().all(|t| t.len() <= 1)
            && c.transitions
                .keys()
                .filter(|(_, r)| *r == PcfaRead::Lambda)
                .all(|&(s, _)| !c.transitions.iter().any(|(&(f, r), t)| f == s && r != PcfaRead::Lambda && !t.is_empty()))
    })
}

/// Per-component states and input positions. Position `i` (one-based)
/// means the next unread symbol is `w[i]`; `|w|+1` is the end marker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcfaConfiguration {
    pub states: Vec<StateId>,
    pub positions: Vec<usize>,
}

impl PcfaConfiguration {
    pub fn initial(sys: &PcfaSystem) -> Self {
        PcfaConfiguration {
            states: sys.components.iter().map(|c| c.initial).collect(),
            positions: vec![1; sys.degree()],
        }
    }
}

fn scanned(word: &[Sym], pos: usize) -> PcfaRead {
    match word.get(pos - 1) {
        Some(&s) => PcfaRead::Sym(s),
        None => PcfaRead::End,
    }
}

/// Result of resolving one round of queries; `None` when the requests are
/// cyclic (nothing can be resolved). Positions are untouched.
fn communicate(sys: &PcfaSystem, states: &[StateId]) -> Option<Vec<StateId>> {
    let mut next = states.to_vec();
    let mut changed = false;
    for (i, &s) in states.iter().enumerate() {
        let Some(j) = sys.query_target(s) else { continue };
        let answer = states[j];
        if sys.is_query(answer) {
            continue;
        }
        next[i] = answer;
        changed = true;
        if sys.mode == Mode::Returning {
            next[j] = sys.components[j].initial;
        }
    }
    changed.then_some(next)
}

/// Moves available to one component in a read step: target state and
/// whether the head advances.
fn read_options(c: &PcfaComponent, state: StateId, read: PcfaRead) -> Vec<(StateId, bool)> {
    let mut out: Vec<(StateId, bool)> = c.targets(state, PcfaRead::Lambda).map(|p| (p, false)).collect();
    out.extend(c.targets(state, read).map(|p| (p, matches!(read, PcfaRead::Sym(_)))));
    out
}

fn cross<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(options.len())];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn check_configuration(sys: &PcfaSystem, word: &[Sym], c: &PcfaConfiguration) -> Result<()> {
    let k = sys.degree();
    if c.states.len() != k || c.positions.len() != k {
        return Err(Error::usage(format!("configuration arity does not match degree {k}")));
    }
    if c.positions.iter().any(|&p| p == 0 || p > word.len() + 1) {
        return Err(Error::usage("configuration position outside the input"));
    }
    if c.states.iter().any(|s| s.index() >= sys.states.len()) {
        return Err(Error::usage("configuration state is not part of the system"));
    }
    sys.alphabet.check_word(word)
}

/// Successor configurations; empty when the computation halts.
pub fn pcfa_step(sys: &PcfaSystem, word: &[Sym], c: &PcfaConfiguration) -> Result<Vec<PcfaConfiguration>> {
    check_configuration(sys, word, c)?;
    Ok(successors(sys, word, c))
}

fn successors(sys: &PcfaSystem, word: &[Sym], c: &PcfaConfiguration) -> Vec<PcfaConfiguration> {
    if c.states.iter().any(|&s| sys.is_query(s)) {
        return communicate(sys, &c.states)
            .map(|states| vec![PcfaConfiguration { states, positions: c.positions.clone() }])
            .unwrap_or_default();
    }
    let options: Vec<Vec<(StateId, bool)>> = sys
        .components
        .iter()
        .zip(c.states.iter().zip(&c.positions))
        .map(|(comp, (&s, &p))| read_options(comp, s, scanned(word, p)))
        .collect();
    if options.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out: Vec<PcfaConfiguration> = cross(&options)
        .into_iter()
        .map(|choice| PcfaConfiguration {
            states: choice.iter().map(|&(s, _)| s).collect(),
            positions: choice.iter().zip(&c.positions).map(|(&(_, adv), &p)| p + usize::from(adv)).collect(),
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether a halting configuration is accepting: some component that is
/// not querying sits in an accepting state with no move on λ or on the
/// scanned symbol.
fn halting_accepts(sys: &PcfaSystem, states: &[StateId], reads: &[PcfaRead]) -> bool {
    sys.components.iter().enumerate().any(|(i, comp)| {
        let s = states[i];
        !sys.is_query(s) && comp.accepting.contains(&s) && !comp.has(s, PcfaRead::Lambda) && !comp.has(s, reads[i])
    })
}

pub fn pcfa_accepts(sys: &PcfaSystem, word: &[Sym]) -> Result<bool> {
    sys.alphabet.check_word(word)?;
    let start = PcfaConfiguration::initial(sys);
    let mut seen: HashSet<PcfaConfiguration> = [start.clone()].into();
    let mut queue: VecDeque<PcfaConfiguration> = [start].into();
    while let Some(c) = queue.pop_front() {
        let next = successors(sys, word, &c);
        if next.is_empty() {
            let reads: Vec<PcfaRead> = c.positions.iter().map(|&p| scanned(word, p)).collect();
            if halting_accepts(sys, &c.states, &reads) {
                return Ok(true);
            }
        }
        for n in next {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Ok(false)
}

impl Acceptor for PcfaSystem {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, word: &[Sym]) -> Result<bool> {
        pcfa_accepts(self, word)
    }
}

/// The two-component centralized, non-returning deterministic system for
/// `{ w$w | w ∈ {a,b}+ }`: the master repeatedly queries the reader and,
/// once the reader is past `$`, compares its own symbols against the primed
/// states it receives.
pub fn builtin_fixture() -> PcfaSystem {
    let ab = Alphabet::new(["a", "b", "$"]).expect("fixture alphabet");
    let sym = |n: &str| PcfaRead::Sym(ab.get(n).expect("fixture symbol"));
    let mut b = PcfaSystem::builder("wdw", ab.clone(), 2, Mode::NonReturning, true);
    let rows1 = [
        ("s0_1", PcfaRead::Lambda, "q2"),
        ("s_a", PcfaRead::Lambda, "q2"),
        ("s_b", PcfaRead::Lambda, "q2"),
        ("s_$", PcfaRead::Lambda, "q2"),
        ("s'_a", sym("a"), "q2"),
        ("s'_b", sym("b"), "q2"),
        ("s_end", sym("$"), "accept"),
    ];
    let rows2 = [
        ("s0_2", sym("a"), "s_a"),
        ("s0_2", sym("b"), "s_b"),
        ("s_a", sym("a"), "s_a"),
        ("s_a", sym("b"), "s_b"),
        ("s_a", sym("$"), "s_$"),
        ("s_b", sym("a"), "s_a"),
        ("s_b", sym("b"), "s_b"),
        ("s_b", sym("$"), "s_$"),
        ("s_$", sym("a"), "s'_a"),
        ("s_$", sym("b"), "s'_b"),
        ("s_end", PcfaRead::End, "s_end"),
        ("s'_a", sym("a"), "s'_a"),
        ("s'_a", sym("b"), "s'_b"),
        ("s'_a", PcfaRead::End, "s_end"),
        ("s'_b", sym("a"), "s'_a"),
        ("s'_b", sym("b"), "s'_b"),
        ("s'_b", PcfaRead::End, "s_end"),
    ];
    let fill = |b: &mut PcfaBuilder| -> Result<()> {
        b.initial(0, "s0_1")?.accepting(0, "accept")?.state(0, "q1")?;
        b.initial(1, "s0_2")?;
        for (from, read, to) in rows1 {
            b.transition(0, from, read, to)?;
        }
        for (from, read, to) in rows2 {
            b.transition(1, from, read, to)?;
        }
        Ok(())
    };
    fill(&mut b).expect("fixture rows are well formed");
    b.build().expect("fixture builds")
}

/// Product construction: one head per component, states are tuples of
/// component states. Read steps move a head right exactly when its
/// component consumed an input symbol; communication steps keep every head
/// still. Halting tuples that satisfy the acceptance condition for the
/// scanned symbols step into a fresh accepting sink.
pub fn compile_pcfa_to_mhfa(sys: &PcfaSystem) -> Result<MultiHeadAutomaton> {
    let problems = validate_system(sys);
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    let k = sys.degree();
    let mut letters: Vec<Letter> = sys.alphabet.symbols().map(Letter::Sym).collect();
    letters.push(Letter::RightEnd);
    let reads = cross(&vec![letters; k]);
    let to_read = |l: Letter| match l {
        Letter::Sym(s) => PcfaRead::Sym(s),
        _ => PcfaRead::End,
    };

    let accept = "accept";
    let tuple_name = |t: &[StateId]| -> String {
        let names: Vec<&str> = t.iter().map(|&s| sys.state_name(s)).collect();
        format!("({})", names.join(","))
    };
    let mut b = MultiHeadAutomaton::builder(format!("{}-mhfa", sys.name), sys.alphabet.clone(), k, Direction::OneWay);
    let start: Vec<StateId> = sys.components.iter().map(|c| c.initial).collect();
    b.initial(&tuple_name(&start));
    let mut seen: HashSet<Vec<StateId>> = [start.clone()].into();
    let mut queue: VecDeque<Vec<StateId>> = [start].into();
    let stay = vec![Move::Stay; k];
    while let Some(tuple) = queue.pop_front() {
        let from = tuple_name(&tuple);
        let querying = tuple.iter().any(|&s| sys.is_query(s));
        let resolved = if querying { communicate(sys, &tuple) } else { None };
        for read in &reads {
            let pread: Vec<PcfaRead> = read.iter().map(|&l| to_read(l)).collect();
            let mut targets: Vec<(Vec<StateId>, Vec<Move>)> = Vec::new();
            if let Some(next) = &resolved {
                targets.push((next.clone(), stay.clone()));
            } else if !querying {
                let options: Vec<Vec<(StateId, bool)>> = sys
                    .components
                    .iter()
                    .zip(&tuple)
                    .zip(&pread)
                    .map(|((comp, &s), &r)| read_options(comp, s, r))
                    .collect();
                if options.iter().all(|o| !o.is_empty()) {
                    for choice in cross(&options) {
                        let states = choice.iter().map(|&(s, _)| s).collect();
                        let moves = choice.iter().map(|&(_, adv)| if adv { Move::Right } else { Move::Stay }).collect();
                        targets.push((states, moves));
                    }
                }
            }
            if targets.is_empty() {
                if halting_accepts(sys, &tuple, &pread) {
                    b.accepting(accept);
                    b.transition(&from, read, None, accept, &stay)?;
                }
                continue;
            }
            for (next, moves) in targets {
                b.transition(&from, read, None, &tuple_name(&next), &moves)?;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    b.build()
}
