//! Two-head one-way deterministic acceptor for the valid computations of a
//! Turing machine.
//!
//! The second head runs one configuration ahead of the first. Each adjacent
//! pair `w_i $ w_(i+1)` is swept in lockstep; the two words agree except in
//! a window of at most three cells around the state symbol, where the
//! control checks that the difference is one application of δ.

use crate::error::Result;
use crate::machine::{Move, MultiHeadAutomaton};
use crate::symbol::{Letter, Sym};

use super::builder::explore;
use super::tm::{ensure_conforming, valc_alphabet, valc_symbol, TmSym, TuringMachine};

/// What a head of the check sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum VRead {
    Dollar,
    Tape(u16),
    State(u16),
    /// Past the history word.
    End,
}

impl VRead {
    pub(crate) fn of(tm: &TuringMachine, s: Sym) -> VRead {
        match valc_symbol(tm, s) {
            None => VRead::Dollar,
            Some(TmSym::Tape(t)) => VRead::Tape(t),
            Some(TmSym::State(q)) => VRead::State(q),
        }
    }
}

/// Position inside the comparison of `u = w_i` (head 1) with `v = w_(i+1)`
/// (head 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Window {
    /// Equal tape prefix; `fresh` at the first cell of the pair.
    Prefix { fresh: bool },
    /// `u` showed `s` where `v` showed `s2`: a stay move.
    Stay { s: u16, s2: u16 },
    /// `u` showed `s` where `v` showed tape `t2`: a right move.
    Right { s: u16, t2: u16 },
    /// First cell after a right move that did not run off the support.
    AfterRight,
    /// Head 1 on the separator, head 2 must show the appended blank.
    ExpectBlank,
    /// `u` showed tape `c` where `v` showed `s2`: a left move.
    Left { c: u16, s2: u16 },
    Left2 { s: u16, s2: u16 },
    /// Rest of both words, which must agree.
    Tail,
    /// Head 1 waits on the separator for head 2.
    AwaitDollar,
}

/// Number of configurations seen, saturated to its parity beyond three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Count(u8);

impl Count {
    fn next(self) -> Count {
        Count(if self.0 < 5 { self.0 + 1 } else { 4 })
    }

    fn even_and_at_least_four(self) -> bool {
        self.0 == 4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum ValcState {
    /// Both heads on the leading separator.
    Begin,
    /// Head 2 crossing `w1`; head 1 waits on its first cell.
    Initial { seen_state: bool },
    Pair { count: Count, accepting: bool, window: Window },
}

pub(crate) enum ValcStep {
    Go(ValcState, [Move; 2]),
    /// The history is valid; head 2 is on the end.
    Done,
    Fail,
}

use Move::{Right as R, Stay as S};

pub(crate) struct ValcCheck<'a> {
    tm: &'a TuringMachine,
}

impl<'a> ValcCheck<'a> {
    pub(crate) fn new(tm: &'a TuringMachine) -> Self {
        ValcCheck { tm }
    }

    pub(crate) fn start() -> ValcState {
        ValcState::Begin
    }

    fn blank(&self) -> u16 {
        self.tm.blank()
    }

    /// δ(s, t) = (s2, t2, dir)?
    fn fits(&self, s: u16, t: u16, s2: u16, t2: u16, dir: Move) -> bool {
        self.tm.action(s, t).is_some_and(|a| a.state == s2 && a.write == t2 && a.dir == dir)
    }

    pub(crate) fn step(&self, st: ValcState, r1: VRead, r2: VRead) -> ValcStep {
        use VRead::*;
        use ValcStep::{Fail, Go};
        match st {
            ValcState::Begin => match (r1, r2) {
                (Dollar, Dollar) => Go(ValcState::Initial { seen_state: false }, [R, R]),
                _ => Fail,
            },
            ValcState::Initial { seen_state } => match r2 {
                State(q) if !seen_state && q == self.tm.initial() => Go(ValcState::Initial { seen_state: true }, [S, R]),
                Tape(t) if seen_state && self.tm.input_symbols().contains(&t) => Go(st, [S, R]),
                Dollar if seen_state => Go(
                    ValcState::Pair { count: Count(1), accepting: false, window: Window::Prefix { fresh: true } },
                    [S, R],
                ),
                _ => Fail,
            },
            ValcState::Pair { count, accepting, window } => {
                let go = |accepting: bool, window: Window, moves: [Move; 2]| Go(ValcState::Pair { count, accepting, window }, moves);
                let acc = |q: u16| self.tm.is_accepting(q);
                match window {
                    Window::Prefix { fresh } => match (r1, r2) {
                        (_, End) if fresh => {
                            if accepting && count.even_and_at_least_four() {
                                ValcStep::Done
                            } else {
                                Fail
                            }
                        }
                        (Tape(a), Tape(b)) if a == b => go(accepting, Window::Prefix { fresh: false }, [R, R]),
                        (State(s), State(s2)) => go(acc(s2), Window::Stay { s, s2 }, [R, R]),
                        (State(s), Tape(t2)) => go(accepting, Window::Right { s, t2 }, [R, R]),
                        (Tape(c), State(s2)) => go(acc(s2), Window::Left { c, s2 }, [R, R]),
                        _ => Fail,
                    },
                    Window::Stay { s, s2 } => match (r1, r2) {
                        (Tape(t), Tape(t2)) if self.fits(s, t, s2, t2, S) => go(accepting, Window::Tail, [R, R]),
                        (Dollar, Tape(t2)) if self.fits(s, self.blank(), s2, t2, S) => go(accepting, Window::AwaitDollar, [S, R]),
                        _ => Fail,
                    },
                    Window::Right { s, t2 } => match (r1, r2) {
                        (Tape(t), State(s3)) if self.fits(s, t, s3, t2, R) => go(acc(s3), Window::AfterRight, [R, R]),
                        (Dollar, State(s3)) if self.fits(s, self.blank(), s3, t2, R) => go(acc(s3), Window::ExpectBlank, [S, R]),
                        _ => Fail,
                    },
                    Window::AfterRight => match (r1, r2) {
                        (Dollar, Tape(b)) if b == self.blank() => go(accepting, Window::AwaitDollar, [S, R]),
                        (Tape(a), Tape(b)) if a == b => go(accepting, Window::Tail, [R, R]),
                        _ => Fail,
                    },
                    Window::ExpectBlank => match (r1, r2) {
                        (Dollar, Tape(b)) if b == self.blank() => go(accepting, Window::AwaitDollar, [S, R]),
                        _ => Fail,
                    },
                    Window::Left { c, s2 } => match (r1, r2) {
                        (State(s), Tape(c2)) if c2 == c => go(accepting, Window::Left2 { s, s2 }, [R, R]),
                        _ => Fail,
                    },
                    Window::Left2 { s, s2 } => match (r1, r2) {
                        (Tape(t), Tape(t2)) if self.fits(s, t, s2, t2, Move::Left) => go(accepting, Window::Tail, [R, R]),
                        _ => Fail,
                    },
                    Window::Tail => match (r1, r2) {
                        (Tape(a), Tape(b)) if a == b => go(accepting, Window::Tail, [R, R]),
                        (Dollar, Dollar) => Go(
                            ValcState::Pair { count: count.next(), accepting, window: Window::Prefix { fresh: true } },
                            [R, R],
                        ),
                        _ => Fail,
                    },
                    Window::AwaitDollar => match (r1, r2) {
                        (Dollar, Dollar) => Go(
                            ValcState::Pair { count: count.next(), accepting, window: Window::Prefix { fresh: true } },
                            [R, R],
                        ),
                        _ => Fail,
                    },
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Control {
    Check(ValcState),
    Accept,
}

/// The two-head acceptor for the valid computations of a conforming `tm`.
pub fn build_valc_acceptor(tm: &TuringMachine) -> Result<MultiHeadAutomaton> {
    ensure_conforming(tm)?;
    let alphabet = valc_alphabet(tm);
    let check = ValcCheck::new(tm);
    let read = |l: Letter| match l {
        Letter::Sym(s) => VRead::of(tm, s),
        _ => VRead::End,
    };
    explore(
        &format!("valc-{}", tm.name()),
        &alphabet,
        2,
        Control::Check(ValcCheck::start()),
        |c| *c == Control::Accept,
        |c, letters| {
            let Control::Check(st) = *c else { return None };
            match check.step(st, read(letters[0]), read(letters[1])) {
                ValcStep::Go(next, moves) => Some((Control::Check(next), moves.to_vec())),
                ValcStep::Done => Some((Control::Accept, vec![S, S])),
                ValcStep::Fail => None,
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tm::{fixture_tm, parity_tm, reference_valc_member, tm_run, valc_string, TmOutcome};
    use crate::machine::{is_deterministic, is_one_way, validate};
    use crate::semantics::accepts;

    #[test]
    fn fixture_history_is_accepted_and_mutations_agree() {
        let tm = fixture_tm();
        let m = build_valc_acceptor(&tm).unwrap();
        assert!(is_deterministic(&m) && is_one_way(&m) && validate(&m).is_empty());
        let TmOutcome::Accepted(h) = tm_run(&tm, &[], 50).unwrap() else { panic!() };
        let v = valc_string(&tm, &h).unwrap();
        assert!(accepts(&m, &v).unwrap());
        for i in 0..v.len() {
            for s in m.alphabet().symbols() {
                let mut w = v.clone();
                w[i] = s;
                assert_eq!(accepts(&m, &w).unwrap(), reference_valc_member(&tm, &w), "{}", m.alphabet().render_word(&w));
            }
        }
    }

    #[test]
    fn parity_histories() {
        let tm = parity_tm();
        let m = build_valc_acceptor(&tm).unwrap();
        for n in 0..7 {
            let input = vec![tm.tape_symbol("a").unwrap(); n];
            if let TmOutcome::Accepted(h) = tm_run(&tm, &input, 50).unwrap() {
                let v = valc_string(&tm, &h).unwrap();
                assert!(accepts(&m, &v).unwrap(), "n = {n}");
                let mut cut = v.clone();
                cut.truncate(v.len() - 1);
                assert!(!accepts(&m, &cut).unwrap());
            }
        }
    }
}
