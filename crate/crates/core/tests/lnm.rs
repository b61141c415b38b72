//! The paired-history witness for the fixture machine. Its only valid
//! computation of length at most 14 is `$ s0 $ s1 b $ b s1 _ $ f b b $`, so
//! a block is well formed exactly when its lower track spells that history.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mhfa::constructions::lnm::{lnm_blocks, pair, split_pair};
use mhfa::constructions::tm::fixture_tm;
use mhfa::constructions::{build_lnm_acceptor, lnm_member, valc_alphabet, TuringMachine};
use mhfa::machine::{is_deterministic, is_one_way};
use mhfa::{accepts, MultiHeadAutomaton, Sym, Word};

const HISTORY: &str = "$ s0 $ s1 b $ b s1 _ $ f b b $";
const SEP: Sym = Sym(0);

fn tm() -> &'static TuringMachine {
    static TM: OnceLock<TuringMachine> = OnceLock::new();
    TM.get_or_init(fixture_tm)
}

fn acceptor() -> &'static MultiHeadAutomaton {
    static M: OnceLock<MultiHeadAutomaton> = OnceLock::new();
    M.get_or_init(|| build_lnm_acceptor(2, tm()).unwrap())
}

fn history() -> Word {
    valc_alphabet(tm()).parse_word(HISTORY).unwrap()
}

fn block(upper: &[usize]) -> Word {
    upper.iter().zip(history()).map(|(&u, l)| pair(tm(), u, l)).collect()
}

fn join(blocks: &[Word]) -> Word {
    blocks.join(&SEP)
}

/// Four blocks, each carrying the history below, mirrored as wholes.
fn oracle(word: &[Sym]) -> bool {
    let blocks: Vec<&[Sym]> = word.split(|&s| s == SEP).collect();
    blocks.len() == 4
        && blocks.iter().all(|b| b.iter().map(|&s| split_pair(tm(), s).unwrap().1).eq(history()))
        && blocks[0] == blocks[3]
        && blocks[1] == blocks[2]
}

fn random_upper(rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..history().len()).map(|_| rng.gen_range(0..2)).collect()
}

#[test]
fn shape() {
    let m = acceptor();
    assert_eq!(lnm_blocks(2), 2);
    assert_eq!(m.heads(), 3);
    assert!(is_one_way(m));
    assert!(is_deterministic(m));
}

#[test]
fn members_and_mutants() {
    let m = acceptor();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..20 {
        let (x, y) = (block(&random_upper(&mut rng)), block(&random_upper(&mut rng)));
        let member = join(&[x.clone(), y.clone(), y.clone(), x.clone()]);
        assert!(oracle(&member));
        assert!(accepts(m, &member).unwrap());

        let mut mutants = vec![join(&[x.clone(), y.clone(), x.clone(), y.clone()]), join(&[x.clone(), y.clone(), y.clone()])];
        // flip one upper symbol
        let i = rng.gen_range(0..member.len());
        if let Some((u, l)) = split_pair(tm(), member[i]) {
            let mut w = member.clone();
            w[i] = pair(tm(), 1 - u, l);
            mutants.push(w);
        }
        // replace one lower symbol
        let i = rng.gen_range(0..member.len());
        if let Some((u, l)) = split_pair(tm(), member[i]) {
            let mut w = member.clone();
            let width = valc_alphabet(tm()).len() as u16;
            w[i] = pair(tm(), u, Sym((l.0 + 1 + rng.gen_range(0..width - 1)) % width));
            mutants.push(w);
        }
        // drop one symbol
        let mut w = member.clone();
        w.remove(rng.gen_range(0..member.len()));
        mutants.push(w);
        for w in mutants {
            let want = oracle(&w);
            assert_eq!(accepts(m, &w).unwrap(), want);
            assert_eq!(lnm_member(2, tm(), &w), want);
            checked += 1;
        }
    }
    assert!(checked >= 80);
}

#[test]
fn equal_halves_with_identical_blocks() {
    let x = block(&[0; 14]);
    assert!(accepts(acceptor(), &join(&[x.clone(), x.clone(), x.clone(), x.clone()])).unwrap());
    assert!(!accepts(acceptor(), &join(&[x.clone(), x.clone()])).unwrap());
    assert!(!accepts(acceptor(), &[]).unwrap());
}
