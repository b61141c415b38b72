//! Oblivious (data-independent) machines, sensing heads and partially
//! blind heads, layered on the plain k-head semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Direction, Flavor, Move, MultiHeadAutomaton, StateId, Target};
use crate::semantics::{self, letter_at, Configuration};
use crate::symbol::{words_of_length, Letter, Sym, Word};

/// Partition of head indices by equality of their positions, stored as a
/// restricted growth string: head `i` carries the label of its block and
/// blocks are numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoincidencePartition {
    labels: Vec<u8>,
}

impl CoincidencePartition {
    /// Normalizes arbitrary block labels.
    pub fn from_labels(labels: Vec<u8>) -> Self {
        let mut map: HashMap<u8, u8> = HashMap::new();
        let labels = labels
            .into_iter()
            .map(|l| {
                let next = map.len() as u8;
                *map.entry(l).or_insert(next)
            })
            .collect();
        CoincidencePartition { labels }
    }

    pub fn of_positions(positions: &[usize]) -> Self {
        let mut labels = Vec::with_capacity(positions.len());
        for (i, p) in positions.iter().enumerate() {
            let label = match positions[..i].iter().position(|q| q == p) {
                Some(j) => labels[j],
                None => labels.iter().copied().max().map_or(0, |m: u8| m + 1),
            };
            labels.push(label);
        }
        CoincidencePartition { labels }
    }

    /// Builds a partition from blocks of zero-based head indices.
    pub fn from_blocks(heads: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![u8::MAX; heads];
        for (b, block) in blocks.iter().enumerate() {
            for &h in block {
                if h >= heads || labels[h] != u8::MAX {
                    return Err(Error::usage(format!("head {} misplaced in partition", h + 1)));
                }
                labels[h] = b as u8;
            }
        }
        if labels.contains(&u8::MAX) {
            return Err(Error::usage("partition does not cover every head"));
        }
        Ok(Self::from_labels(labels))
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Blocks of zero-based head indices, ordered by smallest member.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut blocks = vec![Vec::new(); count];
        for (h, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(h);
        }
        blocks
    }

    /// Every partition of `heads` heads.
    pub fn all(heads: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut labels = Vec::with_capacity(heads);
        fn rec(heads: usize, labels: &mut Vec<u8>, out: &mut Vec<CoincidencePartition>) {
            if labels.len() == heads {
                out.push(CoincidencePartition { labels: labels.clone() });
                return;
            }
            let next = labels.iter().copied().max().map_or(0, |m| m + 1);
            for l in 0..=next {
                labels.push(l);
                rec(heads, labels, out);
                labels.pop();
            }
        }
        rec(heads, &mut labels, &mut out);
        out
    }

    /// Parses the `{1,2}{3}` notation (one-based heads).
    pub fn parse(heads: usize, text: &str) -> Result<Self> {
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::usage(format!("bad partition {text:?}")))?;
        let blocks = inner
            .split("}{")
            .map(|b| {
                b.split(',')
                    .map(|h| match h.trim().parse::<usize>() {
                        Ok(h) if h >= 1 => Ok(h - 1),
                        _ => Err(Error::usage(format!("bad head index {h:?} in partition"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_blocks(heads, &blocks)
    }
}

impl fmt::Display for CoincidencePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            let heads: Vec<String> = block.iter().map(|h| (h + 1).to_string()).collect();
            write!(f, "{{{}}}", heads.join(","))?;
        }
        Ok(())
    }
}

/// Successors under sensing semantics: the coincidence partition of the
/// current positions is part of the transition lookup.
pub fn sensing_step(m: &MultiHeadAutomaton, word: &[Sym], c: &Configuration) -> Result<Vec<Configuration>> {
    if m.flavor() != Flavor::Sensing {
        return Err(Error::usage("sensing_step needs a machine with sensing heads"));
    }
    semantics::step(m, word, c)
}

/// Head positions as a function of input length, head and time, as
/// observed on bounded inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrajectoryTable {
    // input length -> time -> positions
    rows: BTreeMap<usize, Vec<Vec<usize>>>,
}

impl TrajectoryTable {
    pub fn position(&self, len: usize, head: usize, time: usize) -> Option<usize> {
        self.rows.get(&len)?.get(time)?.get(head).copied()
    }

    pub fn steps(&self, len: usize) -> usize {
        self.rows.get(&len).map_or(0, |r| r.len())
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObliviousnessWitness {
    pub first: Word,
    pub second: Word,
    /// Zero-based head index.
    pub head: usize,
    pub time: usize,
    pub first_position: usize,
    pub second_position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataIndependence {
    /// No discrepancy up to the bounds; the observed trajectories.
    Independent(TrajectoryTable),
    Violation(ObliviousnessWitness),
}

impl DataIndependence {
    pub fn is_independent(&self) -> bool {
        matches!(self, DataIndependence::Independent(_))
    }
}

fn first_difference(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).position(|(x, y)| x != y).unwrap_or(0)
}

/// Position tuples per time step over every computation on `word`, or the
/// first step at which two branches disagree.
fn layered_positions(
    m: &MultiHeadAutomaton,
    word: &[Sym],
    max_steps: usize,
) -> Result<std::result::Result<Vec<Vec<usize>>, (usize, Vec<usize>, Vec<usize>)>> {
    let mut layer: BTreeSet<Configuration> = BTreeSet::new();
    layer.insert(Configuration::initial(m));
    let mut rows = Vec::new();
    for t in 0..=max_steps {
        if layer.is_empty() {
            break;
        }
        let mut iter = layer.iter();
        let first = iter.next().expect("nonempty").positions.clone();
        if let Some(other) = iter.find(|c| c.positions != first) {
            return Ok(Err((t, first, other.positions.clone())));
        }
        rows.push(first);
        if t == max_steps {
            break;
        }
        let mut next = BTreeSet::new();
        for c in &layer {
            next.extend(semantics::step(m, word, c)?);
        }
        layer = next;
    }
    Ok(Ok(rows))
}

/// Empirical data-independence check over all inputs of length at most
/// `max_len`, following every computation for at most `max_steps` steps.
pub fn check_data_independent(m: &MultiHeadAutomaton, max_len: usize, max_steps: usize) -> Result<DataIndependence> {
    let mut table = TrajectoryTable::default();
    for len in 0..=max_len {
        let mut reference: Option<(Word, Vec<Vec<usize>>)> = None;
        for word in words_of_length(m.alphabet().len(), len) {
            let rows = match layered_positions(m, &word, max_steps)? {
                Ok(rows) => rows,
                Err((time, a, b)) => {
                    let head = first_difference(&a, &b);
                    return Ok(DataIndependence::Violation(ObliviousnessWitness {
                        first: word.clone(),
                        second: word,
                        head,
                        time,
                        first_position: a[head],
                        second_position: b[head],
                    }));
                }
            };
            match &mut reference {
                None => reference = Some((word, rows)),
                Some((ref_word, ref_rows)) => {
                    for (t, row) in rows.iter().enumerate() {
                        match ref_rows.get(t) {
                            Some(expected) if expected != row => {
                                let head = first_difference(expected, row);
                                return Ok(DataIndependence::Violation(ObliviousnessWitness {
                                    first: ref_word.clone(),
                                    second: word,
                                    head,
                                    time: t,
                                    first_position: expected[head],
                                    second_position: row[head],
                                }));
                            }
                            Some(_) => {}
                            None => ref_rows.push(row.clone()),
                        }
                    }
                }
            }
        }
        if let Some((_, rows)) = reference {
            table.rows.insert(len, rows);
        }
    }
    Ok(DataIndependence::Independent(table))
}

/// What the subset machine does on one `(set, read tuple)` pair.
enum SubsetStep {
    Accept,
    Halt,
    Move(BTreeSet<StateId>, Vec<Move>),
    /// Branches propose different move vectors.
    Conflict,
}

fn subset_step(m: &MultiHeadAutomaton, set: &BTreeSet<StateId>, read: &[Letter]) -> SubsetStep {
    let mut next = BTreeSet::new();
    let mut moves: BTreeSet<&[Move]> = BTreeSet::new();
    for &s in set {
        let targets: &[Target] = m.targets(s, read, None);
        if targets.is_empty() && m.is_accepting(s) {
            return SubsetStep::Accept;
        }
        for t in targets {
            next.insert(t.state);
            moves.insert(&t.moves[..]);
        }
    }
    match moves.len() {
        0 => SubsetStep::Halt,
        1 => {
            let mv = moves.into_iter().next().expect("one move vector").to_vec();
            SubsetStep::Move(next, mv)
        }
        _ => SubsetStep::Conflict,
    }
}

fn subset_name(m: &MultiHeadAutomaton, set: &BTreeSet<StateId>) -> String {
    let names: Vec<&str> = set.iter().map(|&s| m.state_name(s)).collect();
    format!("{{{}}}", names.join(","))
}

fn product_tuples(letters: &[Letter], k: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                letters.iter().map(move |&l| {
                    let mut p = prefix.clone();
                    p.push(l);
                    p
                })
            })
            .collect();
    }
    out
}

/// Power-set determinization of an oblivious machine.
///
/// States of the result are sets of co-reachable source states; since all
/// branches share one head trajectory, each set moves with the common move
/// vector of its members. A branch that halts in an accepting state sends
/// the result to a dedicated accepting sink. Pairs whose branches disagree
/// on moves are left undefined, and it is an error if any input of length
/// at most `max_len` reaches one of them.
pub fn determinize_oblivious(m: &MultiHeadAutomaton, max_len: usize) -> Result<MultiHeadAutomaton> {
    if m.flavor() == Flavor::Sensing {
        return Err(Error::usage("determinization of sensing machines is not supported"));
    }
    let letters: Vec<Letter> = m
        .alphabet()
        .letters()
        .into_iter()
        .filter(|&l| m.direction() == Direction::TwoWay || l != Letter::LeftEnd)
        .collect();
    let tuples = product_tuples(&letters, m.heads());

    let accept_name = "accept";
    let mut builder = MultiHeadAutomaton::builder(format!("{}-det", m.name()), m.alphabet().clone(), m.heads(), m.direction());
    let start: BTreeSet<StateId> = [m.initial()].into();
    let mut names: HashMap<BTreeSet<StateId>, String> = HashMap::new();
    let mut name_of = |set: &BTreeSet<StateId>| -> String {
        names
            .entry(set.clone())
            .or_insert_with(|| {
                let n = subset_name(m, set);
                if n == accept_name {
                    format!("{n}'")
                } else {
                    n
                }
            })
            .clone()
    };
    builder.initial(&name_of(&start)).accepting(accept_name);

    let mut conflicts: HashSet<(BTreeSet<StateId>, Vec<Letter>)> = HashSet::new();
    let mut seen: HashSet<BTreeSet<StateId>> = [start.clone()].into();
    let mut queue: VecDeque<BTreeSet<StateId>> = [start].into();
    let stay = vec![Move::Stay; m.heads()];
    while let Some(set) = queue.pop_front() {
        let from = name_of(&set);
        for read in &tuples {
            match subset_step(m, &set, read) {
                SubsetStep::Accept => {
                    builder.transition(&from, read, None, accept_name, &stay)?;
                }
                SubsetStep::Halt => {}
                SubsetStep::Conflict => {
                    conflicts.insert((set.clone(), read.clone()));
                }
                SubsetStep::Move(next, moves) => {
                    builder.transition(&from, read, None, &name_of(&next), &moves)?;
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }

    if !conflicts.is_empty() {
        for word in crate::symbol::words_up_to(m.alphabet().len(), max_len) {
            if let Some(time) = subset_run_conflict(m, &word, &conflicts) {
                return Err(Error::Obliviousness(format!(
                    "branches disagree on head moves at step {time} on input {:?}",
                    m.alphabet().render_word(&word)
                )));
            }
        }
    }
    builder.build()
}

/// Runs the subset simulation on `word`; the step at which a conflicting
/// pair is reached, if any.
fn subset_run_conflict(
    m: &MultiHeadAutomaton,
    word: &[Sym],
    conflicts: &HashSet<(BTreeSet<StateId>, Vec<Letter>)>,
) -> Option<usize> {
    let mut set: BTreeSet<StateId> = [m.initial()].into();
    let mut positions = vec![1usize; m.heads()];
    let mut seen = HashSet::new();
    for time in 0.. {
        if !seen.insert((set.clone(), positions.clone())) {
            return None;
        }
        let read: Vec<Letter> = positions.iter().map(|&p| letter_at(word, p)).collect();
        if conflicts.contains(&(set.clone(), read.clone())) {
            return Some(time);
        }
        match subset_step(m, &set, &read) {
            SubsetStep::Move(next, moves) => {
                set = next;
                for (p, mv) in positions.iter_mut().zip(moves) {
                    *p = (*p as i64 + mv.delta()) as usize;
                }
            }
            _ => return None,
        }
    }
    None
}

fn blind_class(letter: Letter) -> u8 {
    if letter == Letter::RightEnd {
        1
    } else {
        0
    }
}

/// True iff every non-designated head (zero-based index) only distinguishes
/// "input symbol or left endmarker" from "right endmarker": keys that agree on
/// the designated head and on this abstraction of the others have equal
/// images, undefined included. One-way machines never scan the left
/// endmarker, so tuples containing it are ignored for them.
pub fn validate_partially_blind(m: &MultiHeadAutomaton, designated: usize) -> bool {
    if designated >= m.heads() {
        return false;
    }
    let one_way = m.direction() == Direction::OneWay;
    let mut input_letters: Vec<Letter> = m.alphabet().symbols().map(Letter::Sym).collect();
    if !one_way {
        input_letters.push(Letter::LeftEnd);
    }
    let sorted = |ts: &[Target]| -> Vec<Target> {
        let mut v = ts.to_vec();
        v.sort();
        v
    };
    for (state, read, partition, targets) in m.images() {
        if one_way && read.iter().enumerate().any(|(h, &l)| h != designated && l == Letter::LeftEnd) {
            continue;
        }
        let image = sorted(targets);
        // every concrete tuple in the abstraction class of `read`
        let mut class: Vec<Vec<Letter>> = vec![Vec::new()];
        for (h, &l) in read.iter().enumerate() {
            let options: Vec<Letter> = if h == designated || blind_class(l) == 1 {
                vec![l]
            } else {
                input_letters.clone()
            };
            class = class
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |&o| {
                        let mut q = p.clone();
                        q.push(o);
                        q
                    })
                })
                .collect();
        }
        for other in class {
            if sorted(m.targets(state, &other, partition.as_ref())) != image {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::is_deterministic;
    use crate::semantics::{equivalent_up_to, Equivalence};
    use crate::symbol::Alphabet;

    #[test]
    fn partitions_from_positions() {
        assert_eq!(CoincidencePartition::of_positions(&[1, 1]).blocks(), vec![vec![0, 1]]);
        assert_eq!(CoincidencePartition::of_positions(&[1, 2]).blocks(), vec![vec![0], vec![1]]);
        let p = CoincidencePartition::of_positions(&[4, 2, 4]);
        assert_eq!(p.to_string(), "{1,3}{2}");
        assert_eq!(CoincidencePartition::parse(3, "{1,3}{2}").unwrap(), p);
        assert!(CoincidencePartition::parse(3, "{1,3}").is_err());
        assert_eq!(CoincidencePartition::all(3).len(), 5);
    }

    fn unary_right_mover() -> MultiHeadAutomaton {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let mut b = MultiHeadAutomaton::builder("rm", ab.clone(), 1, Direction::OneWay);
        b.initial("s").accepting("s");
        for s in ab.symbols() {
            b.transition("s", &[Letter::Sym(s)], None, "s", &[Move::Right]).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn right_mover_is_independent() {
        let r = check_data_independent(&unary_right_mover(), 4, 10).unwrap();
        let DataIndependence::Independent(table) = r else { panic!("expected independence") };
        assert_eq!(table.position(3, 0, 0), Some(1));
        assert_eq!(table.position(3, 0, 2), Some(3));
        assert_eq!(table.position(3, 0, 3), Some(4));
    }

    #[test]
    fn symbol_dependent_head_is_a_violation() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let (a, bb) = (ab.letter("a").unwrap(), ab.letter("b").unwrap());
        let mut b = MultiHeadAutomaton::builder("dep", ab, 2, Direction::OneWay);
        b.initial("s");
        for x in [a, bb] {
            let d2 = if x == a { Move::Right } else { Move::Stay };
            for y in [a, bb, Letter::RightEnd] {
                b.transition("s", &[x, y], None, "s", &[Move::Right, if y == Letter::RightEnd { Move::Stay } else { d2 }]).unwrap();
            }
        }
        let m = b.build().unwrap();
        let r = check_data_independent(&m, 2, 10).unwrap();
        let DataIndependence::Violation(w) = r else { panic!("expected violation") };
        let render = |w: &Word| m.alphabet().render_word(w);
        // length-one inputs already separate "a" from "b"
        assert_eq!((render(&w.first), render(&w.second)), ("a".into(), "b".into()));
        assert_eq!(w.head, 1);
        let two = check_data_independent(&m, 2, 10).unwrap();
        assert!(!two.is_independent());
    }

    #[test]
    fn determinizing_a_deterministic_machine_keeps_the_language() {
        let m = unary_right_mover();
        let d = determinize_oblivious(&m, 4).unwrap();
        assert!(is_deterministic(&d));
        assert_eq!(equivalent_up_to(&m, &d, 5).unwrap(), Equivalence::Equal);
    }

    #[test]
    fn move_disagreement_is_reported() {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("split", ab, 1, Direction::OneWay);
        b.initial("s").accepting("t");
        b.transition("s", &[a], None, "t", &[Move::Right]).unwrap();
        b.transition("s", &[a], None, "u", &[Move::Stay]).unwrap();
        let err = determinize_oblivious(&b.build().unwrap(), 2).unwrap_err();
        assert!(matches!(err, Error::Obliviousness(_)));
    }

    #[test]
    fn sensing_lookup_uses_the_partition() {
        let ab = Alphabet::new(["a"]).unwrap();
        let a = ab.letter("a").unwrap();
        let mut b = MultiHeadAutomaton::builder("sense", ab.clone(), 2, Direction::OneWay);
        b.flavor(Flavor::Sensing).initial("s");
        let together = CoincidencePartition::of_positions(&[1, 1]);
        b.transition("s", &[a, a], Some(together), "t", &[Move::Stay, Move::Right]).unwrap();
        let m = b.build().unwrap();
        let w = ab.parse_word("aa").unwrap();
        let s = m.initial();
        let joint = Configuration { state: s, positions: vec![1, 1] };
        assert_eq!(sensing_step(&m, &w, &joint).unwrap().len(), 1);
        let apart = Configuration { state: s, positions: vec![1, 2] };
        assert!(sensing_step(&m, &w, &apart).unwrap().is_empty());
        assert!(sensing_step(&unary_right_mover(), &w, &joint).is_err());
    }

    #[test]
    fn partially_blind_checks() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let (a, bb) = (ab.letter("a").unwrap(), ab.letter("b").unwrap());
        let mut blind = MultiHeadAutomaton::builder("blind", ab.clone(), 2, Direction::OneWay);
        blind.initial("s");
        for x in [a, bb] {
            for y in [a, bb] {
                blind.transition("s", &[x, y], None, "s", &[Move::Right, Move::Right]).unwrap();
            }
            blind.transition("s", &[x, Letter::RightEnd], None, "t", &[Move::Right, Move::Stay]).unwrap();
        }
        assert!(validate_partially_blind(&blind.build().unwrap(), 0));

        let mut seeing = MultiHeadAutomaton::builder("seeing", ab.clone(), 2, Direction::OneWay);
        seeing.initial("s");
        seeing.transition("s", &[a, a], None, "s", &[Move::Right, Move::Right]).unwrap();
        seeing.transition("s", &[a, bb], None, "t", &[Move::Right, Move::Right]).unwrap();
        assert!(!validate_partially_blind(&seeing.build().unwrap(), 0));

        assert!(validate_partially_blind(&unary_right_mover(), 0));
    }
}
