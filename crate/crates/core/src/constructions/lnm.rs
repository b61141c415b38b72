//! The (k+1)-head acceptor for `L_{n,M}`, `n = k(k-1)/2 + 1`: blocks over
//! pairs (upper track over `{a,b}`, lower track a valid computation of `M`)
//! with the mirror condition on whole blocks.

use crate::error::{Error, Result};
use crate::machine::MultiHeadAutomaton;
use crate::symbol::{Alphabet, Sym, Word};

use super::ln::ln_blocks;
use super::schedule::Program;
use super::tm::{ensure_conforming, reference_valc_member, valc_alphabet, TuringMachine};
use super::valc::VRead;

const UPPER: [&str; 2] = ["a", "b"];

/// `$` followed by the pair symbols `u/v`, upper symbol major.
pub fn lnm_alphabet(tm: &TuringMachine) -> Alphabet {
    let lower = valc_alphabet(tm);
    let pairs = UPPER.iter().flat_map(|u| lower.names().iter().map(move |v| format!("{u}/{v}")));
    Alphabet::new(std::iter::once("$".to_string()).chain(pairs)).expect("pair names are distinct")
}

pub fn lnm_blocks(k: usize) -> usize {
    ln_blocks(k) + 1
}

/// The pair symbol with upper track `upper` (0 for `a`, 1 for `b`) and
/// lower track `lower`, a symbol of the history alphabet.
pub fn pair(tm: &TuringMachine, upper: usize, lower: Sym) -> Sym {
    let width = valc_alphabet(tm).len();
    Sym((1 + upper * width + lower.index()) as u16)
}

/// Inverse of [`pair`]; `None` for the block separator.
pub fn split_pair(tm: &TuringMachine, s: Sym) -> Option<(usize, Sym)> {
    let width = valc_alphabet(tm).len();
    let i = s.index().checked_sub(1)?;
    Some((i / width, Sym((i % width) as u16)))
}

/// Direct membership test: exactly `2n` blocks, every lower track a valid
/// computation, and block `i` equal to block `2n+1-i` on both tracks.
pub fn lnm_member(n: usize, tm: &TuringMachine, word: &[Sym]) -> bool {
    let blocks: Vec<&[Sym]> = word.split(|&s| s == Sym(0)).collect();
    if n == 0 || blocks.len() != 2 * n {
        return false;
    }
    let lower = |b: &[Sym]| -> Word { b.iter().map(|&s| split_pair(tm, s).expect("no separators in a block").1).collect() };
    blocks.iter().all(|b| reference_valc_member(tm, &lower(b))) && (0..n).all(|i| blocks[i] == blocks[2 * n - 1 - i])
}

/// Heads 1 and k+1 check the lower tracks of the left half block by block;
/// then heads 1..k run the mirror rounds over all `2n` blocks, which leaves
/// the middle pair, compared last by a parked head and head k+1.
pub fn build_lnm_acceptor(k: usize, tm: &TuringMachine) -> Result<MultiHeadAutomaton> {
    if k < 2 {
        return Err(Error::usage("the L_{n,M} acceptor needs k >= 2"));
    }
    ensure_conforming(tm)?;
    let n = lnm_blocks(k);
    let ab = lnm_alphabet(tm);
    let last = k;
    let mut p = Program::new(k + 1);
    for _ in 0..n {
        p.valc_block(0, last);
    }
    let (lo, rest) = p.mirror_rounds((0..k).collect(), 1, 2 * n, 2 * n);
    debug_assert_eq!((lo, rest.len()), (n, 1));
    debug_assert_eq!(p.block_of(last), n + 1);
    p.compare(last, rest[0], false);
    let lower = |s: Sym| VRead::of(tm, split_pair(tm, s).expect("separator handled by the program").1);
    p.build(&format!("l{n}-{}", tm.name()), &ab, Sym(0), Some((tm, &lower)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tm::{fixture_tm, tm_run, valc_string, TmOutcome};
    use crate::machine::{is_deterministic, is_one_way, validate};
    use crate::semantics::accepts;

    fn history(tm: &TuringMachine, input: &str) -> Word {
        let TmOutcome::Accepted(h) = tm_run(tm, &tm.parse_input(input).unwrap(), 100).unwrap() else { panic!() };
        valc_string(tm, &h).unwrap()
    }

    fn block(tm: &TuringMachine, upper: &[usize], lower: &Word) -> Word {
        lower.iter().zip(upper.iter().cycle()).map(|(&l, &u)| pair(tm, u, l)).collect()
    }

    fn join(blocks: &[Word]) -> Word {
        let mut out = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                out.push(Sym(0));
            }
            out.extend(b);
        }
        out
    }

    #[test]
    fn members_and_near_misses() {
        let tm = fixture_tm();
        let m = build_lnm_acceptor(2, &tm).unwrap();
        assert_eq!(m.heads(), 3);
        assert!(is_deterministic(&m) && is_one_way(&m) && validate(&m).is_empty());
        let (h0, h1) = (history(&tm, ""), history(&tm, "a"));
        let x = block(&tm, &[0, 1], &h0);
        let y = block(&tm, &[1, 1, 0], &h1);
        let good = join(&[x.clone(), y.clone(), y.clone(), x.clone()]);
        assert!(lnm_member(2, &tm, &good));
        assert!(accepts(&m, &good).unwrap());

        // upper tracks break the mirror
        let y2 = block(&tm, &[0], &h1);
        let bad = join(&[x.clone(), y.clone(), y2.clone(), x.clone()]);
        assert!(!lnm_member(2, &tm, &bad));
        assert!(!accepts(&m, &bad).unwrap());

        // lower track not a valid computation
        let mut broken = h0.clone();
        broken.swap(1, 2);
        let z = block(&tm, &[0], &broken);
        let bad = join(&[z.clone(), y.clone(), y.clone(), z]);
        assert!(!accepts(&m, &bad).unwrap());

        let short = join(&[x.clone(), y.clone(), x]);
        assert!(!accepts(&m, &short).unwrap());
    }
}
