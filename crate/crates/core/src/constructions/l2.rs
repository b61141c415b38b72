//! Two-head acceptor for `a b a^2 b … a^n b`, whose Parikh image is not
//! semilinear.

use crate::error::Result;
use crate::machine::{Move, MultiHeadAutomaton};
use crate::symbol::{Alphabet, Letter};

use super::builder::explore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Control {
    /// Head 2 checks the first block `ab`; head 1 waits at the start.
    First { seen_a: bool },
    /// Head 1 on block `j`, head 2 on block `j+1`, both `fresh` at block starts.
    Compare { fresh: bool },
    /// Head 1 hit the `b` of its block; head 2 must read one extra `a` and then `b`.
    Extra,
    Accept,
}

pub fn l2_alphabet() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("two symbols")
}

/// Head 2 runs one block ahead of head 1; the blocks are swept in lockstep
/// and the leading block must be exactly one `a` longer.
pub fn build_l2_acceptor() -> Result<MultiHeadAutomaton> {
    use Move::{Right as R, Stay as S};
    let ab = l2_alphabet();
    let a = Letter::Sym(ab.get("a").expect("a"));
    let b = Letter::Sym(ab.get("b").expect("b"));
    explore("l2", &ab, 2, Control::First { seen_a: false }, |c| *c == Control::Accept, move |c, r| {
        let (h1, h2) = (r[0], r[1]);
        let next = match *c {
            Control::First { seen_a: false } if h2 == a => (Control::First { seen_a: true }, [S, R]),
            Control::First { seen_a: true } if h2 == b => (Control::Compare { fresh: true }, [S, R]),
            Control::Compare { fresh: true } if h2 == Letter::RightEnd => (Control::Accept, [S, S]),
            Control::Compare { .. } if h1 == a && h2 == a => (Control::Compare { fresh: false }, [R, R]),
            Control::Compare { fresh: false } if h1 == b && h2 == a => (Control::Extra, [S, R]),
            Control::Extra if h2 == b => (Control::Compare { fresh: true }, [R, R]),
            _ => return None,
        };
        Some((next.0, next.1.to_vec()))
    })
}
