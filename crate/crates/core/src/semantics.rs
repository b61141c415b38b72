//! Configurations, the single-step relation, acceptance and bounded
//! language tooling for k-head automata.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::machine::{is_deterministic, Flavor, MultiHeadAutomaton, StateId};
use crate::symbol::{words_of_length, words_up_to, Alphabet, Letter, Sym, Word};
use crate::variants::CoincidencePartition;

/// Machine state plus one position per head; position 0 scans the left
/// endmarker and position `n + 1` the right one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub positions: Vec<usize>,
}

impl Configuration {
    pub fn initial(m: &MultiHeadAutomaton) -> Self {
        Configuration { state: m.initial(), positions: vec![1; m.heads()] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Halted,
    LoopDetected,
    BoundExceeded,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Halted => "halted",
            Termination::LoopDetected => "loop-detected",
            Termination::BoundExceeded => "bound-exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub configurations: Vec<Configuration>,
    pub termination: Termination,
}

impl RunTrace {
    pub fn last(&self) -> &Configuration {
        self.configurations.last().expect("traces are never empty")
    }
}

/// The letter under position `pos` of `▷ word ◁`.
pub fn letter_at(word: &[Sym], pos: usize) -> Letter {
    if pos == 0 {
        Letter::LeftEnd
    } else if pos <= word.len() {
        Letter::Sym(word[pos - 1])
    } else {
        Letter::RightEnd
    }
}

type Positions = SmallVec<[usize; 4]>;

/// Successors of `(state, positions)` on a tape whose cells are given by `cell`.
/// Returns `None` when some head scans a cell for which `cell` has no answer.
fn successors_with<F>(
    m: &MultiHeadAutomaton,
    state: StateId,
    positions: &[usize],
    cell: F,
    out: &mut Vec<(StateId, Positions)>,
) -> Option<()>
where
    F: Fn(usize) -> Option<Letter>,
{
    let mut read: SmallVec<[Letter; 4]> = SmallVec::new();
    for &p in positions {
        read.push(cell(p)?);
    }
    let partition = match m.flavor() {
        Flavor::Sensing => Some(CoincidencePartition::of_positions(positions)),
        _ => None,
    };
    for t in m.targets(state, &read, partition.as_ref()) {
        let mut next: Positions = SmallVec::with_capacity(positions.len());
        let mut ok = true;
        for ((&p, &mv), &l) in positions.iter().zip(&t.moves).zip(&read) {
            let q = p as i64 + mv.delta();
            // A head never leaves the endmarked tape.
            if q < 0 || (l == Letter::RightEnd && mv.delta() > 0) {
                ok = false;
                break;
            }
            next.push(q as usize);
        }
        if ok {
            out.push((t.state, next));
        }
    }
    Some(())
}

fn check_configuration(m: &MultiHeadAutomaton, word: &[Sym], c: &Configuration) -> Result<()> {
    if c.state.index() >= m.state_count() {
        return Err(Error::usage(format!("unknown state id {}", c.state.0)));
    }
    if c.positions.len() != m.heads() {
        return Err(Error::usage(format!(
            "configuration has {} positions but the machine has {} heads",
            c.positions.len(),
            m.heads()
        )));
    }
    if let Some(p) = c.positions.iter().find(|&&p| p > word.len() + 1) {
        return Err(Error::usage(format!("position {p} is outside [0, {}]", word.len() + 1)));
    }
    Ok(())
}

/// All ⊢-successors of `c` on `word`; empty iff the machine halts.
pub fn step(m: &MultiHeadAutomaton, word: &[Sym], c: &Configuration) -> Result<Vec<Configuration>> {
    m.alphabet().check_word(word)?;
    check_configuration(m, word, c)?;
    let mut out = Vec::new();
    successors_with(m, c.state, &c.positions, |p| Some(letter_at(word, p)), &mut out);
    let mut succ: Vec<Configuration> = out
        .into_iter()
        .map(|(state, positions)| Configuration { state, positions: positions.to_vec() })
        .collect();
    succ.sort();
    succ.dedup();
    Ok(succ)
}

/// Outcome of exploring every computation on a tape prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exploration {
    Accepting,
    Rejecting,
    /// Some computation scanned a cell outside the known part of the tape.
    Open,
}

fn explore<F>(m: &MultiHeadAutomaton, cell: F) -> Exploration
where
    F: Fn(usize) -> Option<Letter>,
{
    let start: Positions = SmallVec::from_elem(1, m.heads());
    let mut seen: HashSet<(StateId, Positions)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((m.initial(), start.clone()));
    queue.push_back((m.initial(), start));
    let mut succ = Vec::new();
    let mut accepting = false;
    while let Some((state, positions)) = queue.pop_front() {
        succ.clear();
        if successors_with(m, state, &positions, &cell, &mut succ).is_none() {
            return Exploration::Open;
        }
        if succ.is_empty() {
            if m.is_accepting(state) {
                accepting = true;
            }
            continue;
        }
        for next in succ.drain(..) {
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    if accepting {
        Exploration::Accepting
    } else {
        Exploration::Rejecting
    }
}

/// Acceptance by reachability of a halting configuration in an accepting
/// state. Always terminates: at most `|S|·(n+2)^k` configurations are expanded.
pub fn accepts(m: &MultiHeadAutomaton, word: &[Sym]) -> Result<bool> {
    m.alphabet().check_word(word)?;
    Ok(explore(m, |p| Some(letter_at(word, p))) == Exploration::Accepting)
}

/// What the machine does on every proper extension of a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixStatus {
    /// Every longer word starting with the prefix is accepted.
    AllAccept,
    /// Every longer word starting with the prefix is rejected.
    AllReject,
    /// Some computation needs to read past the prefix.
    Undetermined,
}

/// Decides acceptance for all proper extensions of `prefix` at once when no
/// computation ever reads beyond the prefix.
pub fn prefix_status(m: &MultiHeadAutomaton, prefix: &[Sym]) -> Result<PrefixStatus> {
    m.alphabet().check_word(prefix)?;
    let n = prefix.len();
    let cell = |p: usize| if p <= n { Some(letter_at(prefix, p)) } else { None };
    Ok(match explore(m, cell) {
        Exploration::Accepting => PrefixStatus::AllAccept,
        Exploration::Rejecting => PrefixStatus::AllReject,
        Exploration::Open => PrefixStatus::Undetermined,
    })
}

/// The unique maximal run of a deterministic machine, cut at the first
/// repeated configuration or after `max_steps` steps.
pub fn run_deterministic(m: &MultiHeadAutomaton, word: &[Sym], max_steps: usize) -> Result<RunTrace> {
    if !is_deterministic(m) {
        return Err(Error::usage("run_deterministic needs a deterministic machine"));
    }
    m.alphabet().check_word(word)?;
    let mut current = Configuration::initial(m);
    let mut seen = HashSet::new();
    seen.insert(current.clone());
    let mut configurations = vec![current.clone()];
    for _ in 0..max_steps {
        let mut next = step(m, word, &current)?;
        let Some(next) = next.pop() else {
            return Ok(RunTrace { configurations, termination: Termination::Halted });
        };
        if !seen.insert(next.clone()) {
            return Ok(RunTrace { configurations, termination: Termination::LoopDetected });
        }
        configurations.push(next.clone());
        current = next;
    }
    let termination = if step(m, word, &current)?.is_empty() {
        Termination::Halted
    } else {
        Termination::BoundExceeded
    };
    Ok(RunTrace { configurations, termination })
}

/// Per head, the number of strict direction changes along a trace
/// (stationary steps are ignored).
pub fn count_reversals(trace: &RunTrace) -> Vec<usize> {
    let Some(first) = trace.configurations.first() else {
        return Vec::new();
    };
    let k = first.positions.len();
    let mut last_dir = vec![0i64; k];
    let mut reversals = vec![0usize; k];
    for pair in trace.configurations.windows(2) {
        for h in 0..k {
            let d = (pair[1].positions[h] as i64 - pair[0].positions[h] as i64).signum();
            if d == 0 {
                continue;
            }
            if last_dir[h] != 0 && last_dir[h] != d {
                reversals[h] += 1;
            }
            last_dir[h] = d;
        }
    }
    reversals
}

fn length_lex(words: &mut [Word]) {
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Anything that decides membership of words over a fixed alphabet.
pub trait Acceptor {
    fn alphabet(&self) -> &Alphabet;

    fn accepts(&self, word: &[Sym]) -> Result<bool>;

    /// Accepted words of length at most `max_len`, in length-lexicographic order.
    fn enumerate(&self, max_len: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for w in words_up_to(self.alphabet().len(), max_len) {
            if self.accepts(&w)? {
                out.push(w);
            }
        }
        Ok(out)
    }
}

impl Acceptor for MultiHeadAutomaton {
    fn alphabet(&self) -> &Alphabet {
        MultiHeadAutomaton::alphabet(self)
    }

    fn accepts(&self, word: &[Sym]) -> Result<bool> {
        accepts(self, word)
    }

    fn enumerate(&self, max_len: usize) -> Result<Vec<Word>> {
        enumerate(self, max_len)
    }
}

/// Accepted words up to `max_len` in length-lexicographic order.
///
/// Prefixes are expanded depth first; a subtree is skipped (or emitted
/// wholesale) as soon as no computation on its prefix reads past it.
pub fn enumerate(m: &MultiHeadAutomaton, max_len: usize) -> Result<Vec<Word>> {
    let sigma = m.alphabet().len();
    let mut out = Vec::new();
    let mut stack: Vec<Word> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if accepts(m, &prefix)? {
            out.push(prefix.clone());
        }
        if prefix.len() >= max_len {
            continue;
        }
        match prefix_status(m, &prefix)? {
            PrefixStatus::AllReject => {}
            PrefixStatus::AllAccept => {
                for len in 1..=max_len - prefix.len() {
                    for suffix in words_of_length(sigma, len) {
                        let mut w = prefix.clone();
                        w.extend(suffix);
                        out.push(w);
                    }
                }
            }
            PrefixStatus::Undetermined => {
                for s in m.alphabet().symbols() {
                    let mut w = prefix.clone();
                    w.push(s);
                    stack.push(w);
                }
            }
        }
    }
    length_lex(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// First word, in length-lexicographic order of the left alphabet,
    /// accepted by exactly one side.
    Counterexample(Word),
}

/// Compares two acceptors on all words up to `max_len`.
pub fn equivalent_up_to<A, B>(left: &A, right: &B, max_len: usize) -> Result<Equivalence>
where
    A: Acceptor + ?Sized,
    B: Acceptor + ?Sized,
{
    let la = left.alphabet();
    let ra = right.alphabet();
    if !la.same_set(ra) {
        return Err(Error::usage(format!("alphabet mismatch: {la} vs {ra}")));
    }
    let ours = left.enumerate(max_len)?;
    let mut theirs = right
        .enumerate(max_len)?
        .iter()
        .map(|w| la.translate(ra, w))
        .collect::<Result<Vec<_>>>()?;
    length_lex(&mut theirs);
    let ours_set: HashSet<&Word> = ours.iter().collect();
    let theirs_set: HashSet<&Word> = theirs.iter().collect();
    let first_ours = ours.iter().find(|w| !theirs_set.contains(w));
    let first_theirs = theirs.iter().find(|w| !ours_set.contains(w));
    let pick = match (first_ours, first_theirs) {
        (None, None) => return Ok(Equivalence::Equal),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => {
            if (a.len(), a) <= (b.len(), b) {
                a
            } else {
                b
            }
        }
    };
    Ok(Equivalence::Counterexample(pick.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Direction, Move};

    fn a_star() -> MultiHeadAutomaton {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("a*", ab, 1, Direction::OneWay);
        b.initial("s").accepting("s");
        b.transition("s", &[a], None, "s", &[Move::Right]).unwrap();
        b.build().unwrap()
    }

    fn a_plus() -> MultiHeadAutomaton {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("a+", ab, 1, Direction::OneWay);
        b.initial("s").accepting("t");
        b.transition("s", &[a], None, "t", &[Move::Right]).unwrap();
        b.transition("t", &[a], None, "t", &[Move::Right]).unwrap();
        b.build().unwrap()
    }

    fn word(m: &MultiHeadAutomaton, s: &str) -> Word {
        m.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn step_applies_the_transition() {
        let m = a_star();
        let w = word(&m, "aa");
        let s = m.initial();
        let c = Configuration { state: s, positions: vec![1] };
        assert_eq!(step(&m, &w, &c).unwrap(), vec![Configuration { state: s, positions: vec![2] }]);
        let at_end = Configuration { state: s, positions: vec![3] };
        assert!(step(&m, &w, &at_end).unwrap().is_empty());
        let outside = Configuration { state: s, positions: vec![4] };
        assert!(step(&m, &w, &outside).is_err());
    }

    #[test]
    fn step_collects_nondeterministic_images() {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("nd", ab, 1, Direction::OneWay);
        b.initial("s");
        b.transition("s", &[a], None, "s", &[Move::Right]).unwrap();
        b.transition("s", &[a], None, "t", &[Move::Stay]).unwrap();
        let m = b.build().unwrap();
        let c = Configuration::initial(&m);
        assert_eq!(step(&m, &word(&m, "a"), &c).unwrap().len(), 2);
    }

    #[test]
    fn acceptance_needs_halting() {
        let m = a_star();
        assert!(accepts(&m, &word(&m, "aaa")).unwrap());
        // accepting state that keeps running never accepts
        let ab = Alphabet::new(["a"]).unwrap();
        let mut b = MultiHeadAutomaton::builder("spin", ab, 1, Direction::OneWay);
        b.initial("s").accepting("s");
        b.transition("s", &[Letter::RightEnd], None, "s", &[Move::Stay]).unwrap();
        let spin = b.build().unwrap();
        assert!(!accepts(&spin, &[]).unwrap());
    }

    #[test]
    fn deterministic_runs() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let (a, bb) = (ab.letter("a").unwrap(), ab.letter("b").unwrap());
        let mut b = MultiHeadAutomaton::builder("rm", ab, 1, Direction::OneWay);
        b.initial("s").accepting("h");
        b.transition("s", &[a], None, "s", &[Move::Right]).unwrap();
        b.transition("s", &[bb], None, "s", &[Move::Right]).unwrap();
        b.transition("s", &[Letter::RightEnd], None, "h", &[Move::Stay]).unwrap();
        let m = b.build().unwrap();
        let w = word(&m, "ab");
        let t = run_deterministic(&m, &w, 100).unwrap();
        assert_eq!(t.configurations.len(), 4);
        assert_eq!(t.termination, Termination::Halted);

        let t = run_deterministic(&m, &w, 1).unwrap();
        assert_eq!(t.termination, Termination::BoundExceeded);
        assert_eq!(t.configurations.len(), 2);

        let ab = Alphabet::new(["a"]).unwrap();
        let mut b = MultiHeadAutomaton::builder("loop", ab, 1, Direction::OneWay);
        b.initial("s");
        b.transition("s", &[Letter::RightEnd], None, "s", &[Move::Stay]).unwrap();
        let lp = b.build().unwrap();
        let t = run_deterministic(&lp, &[], 10).unwrap();
        assert_eq!(t.termination, Termination::LoopDetected);
        assert_eq!(t.configurations.len(), 1);
    }

    #[test]
    fn nondeterministic_machine_cannot_run_deterministically() {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("nd", ab, 1, Direction::OneWay);
        b.initial("s");
        b.transition("s", &[a], None, "s", &[Move::Right]).unwrap();
        b.transition("s", &[a], None, "t", &[Move::Right]).unwrap();
        assert!(run_deterministic(&b.build().unwrap(), &[], 3).is_err());
    }

    #[test]
    fn reversal_counting() {
        let s = StateId(0);
        let cfg = |p: &[usize]| Configuration { state: s, positions: p.to_vec() };
        // head 1: +1,+1,-1,+1; head 2 stationary
        let t = RunTrace {
            configurations: vec![cfg(&[1, 3]), cfg(&[2, 3]), cfg(&[3, 3]), cfg(&[2, 3]), cfg(&[3, 3])],
            termination: Termination::Halted,
        };
        assert_eq!(count_reversals(&t), vec![2, 0]);
        let one_way = RunTrace {
            configurations: vec![cfg(&[1, 1]), cfg(&[1, 2]), cfg(&[2, 2])],
            termination: Termination::Halted,
        };
        assert_eq!(count_reversals(&one_way), vec![0, 0]);
    }

    #[test]
    fn enumeration_and_comparison() {
        let m = a_star();
        let words: Vec<String> = enumerate(&m, 2).unwrap().iter().map(|w| m.alphabet().render_word(w)).collect();
        assert_eq!(words, ["", "a", "aa"]);
        assert_eq!(equivalent_up_to(&m, &m, 4).unwrap(), Equivalence::Equal);
        assert_eq!(equivalent_up_to(&m, &a_plus(), 1).unwrap(), Equivalence::Counterexample(vec![]));

        let ab = Alphabet::new(["a"]).unwrap();
        let mut b = MultiHeadAutomaton::builder("none", ab, 1, Direction::OneWay);
        b.initial("s");
        assert!(enumerate(&b.build().unwrap(), 3).unwrap().is_empty());
    }

    #[test]
    fn comparison_requires_same_alphabet() {
        let ab = Alphabet::new(["b"]).unwrap();
        let mut b = MultiHeadAutomaton::builder("other", ab, 1, Direction::OneWay);
        b.initial("s");
        assert!(equivalent_up_to(&a_star(), &b.build().unwrap(), 2).is_err());
    }

    #[test]
    fn foreign_symbols_are_usage_errors() {
        assert!(accepts(&a_star(), &[Sym(3)]).is_err());
    }
}
