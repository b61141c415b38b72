//! Straight-line head programs over `$`-separated blocks, compiled into a
//! finite control.
//!
//! Every head's block index is known statically between instructions, so a
//! program is a fixed list of moves and comparisons; the control only needs
//! the program counter and a small per-instruction register.

use std::collections::HashMap;

use crate::error::Result;
use crate::machine::{Move, MultiHeadAutomaton};
use crate::symbol::{Alphabet, Letter, Sym};

use super::builder::explore;
use super::tm::TuringMachine;
use super::valc::{VRead, ValcCheck, ValcState, ValcStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Instr {
    /// Move `head` right across `count` block separators.
    Advance { head: usize, count: usize },
    /// Compare the blocks under `lead` and `trail` symbol by symbol. The
    /// trailing block is followed by `$`; the leading one by the right
    /// endmarker when `last`, else by `$`. Both heads end on those.
    Compare { lead: usize, trail: usize, last: bool },
    /// Check that the lower track of the block under both heads is a valid
    /// computation; both heads end on the separator after the block.
    Valc { behind: usize, ahead: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Register {
    Crossings(usize),
    Compare,
    Valc(ValcState),
    CatchUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Control {
    pc: usize,
    reg: Register,
}

/// Head programs plus the static block position of every head.
pub(crate) struct Program {
    pub(crate) heads: usize,
    pub(crate) instrs: Vec<Instr>,
    block: HashMap<usize, usize>,
}

impl Program {
    /// All heads on block 1.
    pub(crate) fn new(heads: usize) -> Self {
        Program { heads, instrs: Vec::new(), block: (0..heads).map(|h| (h, 1)).collect() }
    }

    pub(crate) fn block_of(&self, head: usize) -> usize {
        self.block[&head]
    }

    pub(crate) fn advance_to(&mut self, head: usize, block: usize) {
        let from = self.block[&head];
        assert!(block >= from, "one-way heads cannot go back");
        if block > from {
            self.instrs.push(Instr::Advance { head, count: block - from });
            self.block.insert(head, block);
        }
    }

    pub(crate) fn compare(&mut self, lead: usize, trail: usize, last: bool) {
        self.instrs.push(Instr::Compare { lead, trail, last });
    }

    /// Leaves both heads at the start of the following block.
    pub(crate) fn valc_block(&mut self, behind: usize, ahead: usize) {
        let b = self.block[&behind];
        debug_assert_eq!(b, self.block[&ahead]);
        self.instrs.push(Instr::Valc { behind, ahead });
        self.instrs.push(Instr::Advance { head: behind, count: 1 });
        self.instrs.push(Instr::Advance { head: ahead, count: 1 });
        self.block.insert(behind, b + 1);
        self.block.insert(ahead, b + 1);
    }

    /// Verifies `w_i = w_(hi+lo-i)` for the outer pairs of `lo..=hi` in
    /// rounds: the first active head leads across the right half while the
    /// others are parked on successive left blocks, one comparison each;
    /// the parked heads then regroup behind the pairs already checked and
    /// the next round continues with one head fewer. Returns the first
    /// unchecked block and the heads still active, all parked on it.
    pub(crate) fn mirror_rounds(&mut self, mut active: Vec<usize>, mut lo: usize, mut hi: usize, total: usize) -> (usize, Vec<usize>) {
        while active.len() >= 2 && lo < hi {
            let pairs = (active.len() - 1).min((hi - lo + 1) / 2);
            let lead = active[0];
            let trail = &active[1..=pairs];
            for (j, &h) in trail.iter().enumerate() {
                self.advance_to(h, lo + j);
            }
            let first = hi + 1 - pairs;
            self.advance_to(lead, first);
            for j in (0..pairs).rev() {
                let block = self.block[&lead];
                self.compare(lead, trail[j], block == total);
                if j > 0 {
                    self.advance_to(lead, block + 1);
                }
            }
            lo += pairs;
            hi -= pairs;
            active.remove(0);
            for &h in &active {
                self.advance_to(h, lo);
            }
        }
        (lo, active)
    }

    /// Compiles the program for inputs over `alphabet` whose block
    /// separator is `sep`. `valc` supplies the machine and the projection to
    /// lower-track symbols used by `Valc` instructions.
    pub(crate) fn build(
        &self,
        name: &str,
        alphabet: &Alphabet,
        sep: Sym,
        valc: Option<(&TuringMachine, &dyn Fn(Sym) -> VRead)>,
    ) -> Result<MultiHeadAutomaton> {
        let enter = |pc: usize| -> Control {
            let reg = match self.instrs.get(pc) {
                Some(Instr::Advance { count, .. }) => Register::Crossings(*count),
                Some(Instr::Compare { .. }) | None => Register::Compare,
                Some(Instr::Valc { .. }) => Register::Valc(ValcCheck::start()),
            };
            Control { pc, reg }
        };
        let check = valc.map(|(tm, _)| ValcCheck::new(tm));
        let end = self.instrs.len();
        let k = self.heads;
        explore(name, alphabet, k, enter(0), |c| c.pc == end, |c, read| {
            let instr = *self.instrs.get(c.pc)?;
            let mut moves = vec![Move::Stay; k];
            let is_sep = |l: Letter| l == Letter::Sym(sep);
            let next = match (instr, c.reg) {
                (Instr::Advance { head, .. }, Register::Crossings(r)) => {
                    let l = read[head];
                    if l == Letter::RightEnd {
                        return None;
                    }
                    moves[head] = Move::Right;
                    if is_sep(l) && r == 1 {
                        enter(c.pc + 1)
                    } else {
                        Control { pc: c.pc, reg: Register::Crossings(r - usize::from(is_sep(l))) }
                    }
                }
                (Instr::Compare { lead, trail, last }, Register::Compare) => {
                    let (a, b) = (read[lead], read[trail]);
                    let lead_end = if last { a == Letter::RightEnd } else { is_sep(a) };
                    if lead_end && is_sep(b) {
                        enter(c.pc + 1)
                    } else if a == b && !is_sep(a) && a != Letter::RightEnd {
                        moves[lead] = Move::Right;
                        moves[trail] = Move::Right;
                        *c
                    } else {
                        return None;
                    }
                }
                (Instr::Valc { behind, ahead }, Register::Valc(st)) => {
                    let (_, lower) = valc?;
                    let v = |l: Letter| match l {
                        Letter::Sym(s) if s != sep => lower(s),
                        _ => VRead::End,
                    };
                    match check.as_ref()?.step(st, v(read[behind]), v(read[ahead])) {
                        ValcStep::Go(st, m) => {
                            moves[behind] = m[0];
                            moves[ahead] = m[1];
                            Control { pc: c.pc, reg: Register::Valc(st) }
                        }
                        ValcStep::Done if is_sep(read[ahead]) => Control { pc: c.pc, reg: Register::CatchUp },
                        _ => return None,
                    }
                }
                (Instr::Valc { behind, .. }, Register::CatchUp) => match read[behind] {
                    l if is_sep(l) => enter(c.pc + 1),
                    Letter::Sym(_) => {
                        moves[behind] = Move::Right;
                        *c
                    }
                    _ => return None,
                },
                _ => unreachable!("register matches instruction"),
            };
            Some((next, moves))
        })
    }
}
