//! One-way k-head acceptors for `L_n = { w1 $ … $ w2n | wi = w(2n+1-i) }`
//! with `n = k(k-1)/2`.

use crate::error::{Error, Result};
use crate::machine::MultiHeadAutomaton;
use crate::symbol::Alphabet;

use super::schedule::Program;

pub fn ln_alphabet() -> Alphabet {
    Alphabet::new(["a", "b", "$"]).expect("three symbols")
}

/// Largest `n` with `L_n` accepted by `k` one-way heads.
pub fn ln_blocks(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// Deterministic acceptor for `L_n`, `n = k(k-1)/2`: in each round one head
/// leads across the right half while the others wait on consecutive left
/// blocks, covering `k-1`, then `k-2`, … mirror pairs.
pub fn build_ln_acceptor(k: usize) -> Result<MultiHeadAutomaton> {
    if k < 2 {
        return Err(Error::usage("the L_n acceptor needs at least two heads"));
    }
    let n = ln_blocks(k);
    let ab = ln_alphabet();
    let mut p = Program::new(k);
    let (lo, _) = p.mirror_rounds((0..k).collect(), 1, 2 * n, 2 * n);
    debug_assert_eq!(lo, n + 1);
    p.build(&format!("l{n}"), &ab, ab.get("$").expect("separator"), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::predicates::ln_member;
    use crate::machine::{is_deterministic, is_one_way, validate};
    use crate::semantics::enumerate;
    use crate::symbol::words_up_to;

    #[test]
    fn copy_language_with_two_heads() {
        let m = build_ln_acceptor(2).unwrap();
        assert!(is_deterministic(&m) && is_one_way(&m) && validate(&m).is_empty());
        let ab = ln_alphabet();
        let got: Vec<String> = enumerate(&m, 5).unwrap().iter().map(|w| ab.render_word(w)).collect();
        let want: Vec<String> = words_up_to(3, 5).map(|w| ab.render_word(&w)).filter(|w| ln_member(1, w)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn three_heads_samples() {
        let m = build_ln_acceptor(3).unwrap();
        let ab = ln_alphabet();
        for (w, expected) in [("ab$b$a$a$b$ab", true), ("ab$b$a$a$b$ba", false), ("a$a$a$a$a$a$a", false), ("$$$$$", true)] {
            assert_eq!(crate::semantics::accepts(&m, &ab.parse_word(w).unwrap()).unwrap(), expected, "{w}");
        }
        assert!(build_ln_acceptor(1).is_err());
    }
}
