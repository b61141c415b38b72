use std::collections::BTreeSet;

use proptest::prelude::*;

use mhfa::machine::{is_deterministic, validate};
use mhfa::pcfa::{compile_pcfa_to_mhfa, pcfa_accepts, Mode, PcfaRead, PcfaSystem};
use mhfa::semilinear::{linear_member, parikh, parikh_image, LinearSet, NVector};
use mhfa::text::{parse_mhfa, parse_pcfa, parse_semilinear, render_mhfa, render_pcfa, render_semilinear};
use mhfa::variants::determinize_oblivious;
use mhfa::{accepts, Alphabet, Direction, Letter, Move, MultiHeadAutomaton, Semilinear, Sym, Word};

/// One transition: source, letter index per head, target, move index per
/// head. Letters 0 and 1 are the endmarkers.
type RawTrans = (usize, Vec<usize>, usize, Vec<usize>);

#[derive(Debug, Clone)]
struct RawMachine {
    heads: usize,
    states: usize,
    two_way: bool,
    accepting: Vec<bool>,
    trans: Vec<RawTrans>,
}

fn raw_machine() -> impl Strategy<Value = RawMachine> {
    (1usize..=2, 1usize..=4, any::<bool>()).prop_flat_map(|(heads, states, two_way)| {
        let t = (0..states, prop::collection::vec(0usize..4, heads), 0..states, prop::collection::vec(0usize..3, heads));
        (prop::collection::vec(any::<bool>(), states), prop::collection::vec(t, 0..12))
            .prop_map(move |(accepting, trans)| RawMachine { heads, states, two_way, accepting, trans })
    })
}

/// Builds the machine, turning moves that would leave the tape or break
/// the one-way restriction into stays.
fn build(raw: &RawMachine) -> MultiHeadAutomaton {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let dir = if raw.two_way { Direction::TwoWay } else { Direction::OneWay };
    let mut b = MultiHeadAutomaton::builder("raw", ab, raw.heads, dir);
    let name = |i: usize| format!("s{i}");
    b.initial("s0");
    for i in 0..raw.states {
        b.state(&name(i));
        if raw.accepting[i] {
            b.accepting(&name(i));
        }
    }
    for (from, read, to, moves) in &raw.trans {
        let read: Vec<Letter> = read
            .iter()
            .map(|&l| match l {
                0 => Letter::LeftEnd,
                1 => Letter::RightEnd,
                s => Letter::Sym(Sym(s as u16 - 2)),
            })
            .collect();
        let moves: Vec<Move> = moves
            .iter()
            .zip(&read)
            .map(|(&m, &l)| match (m, l) {
                (0, Letter::LeftEnd) | (2, Letter::RightEnd) => Move::Stay,
                (0, _) if raw.two_way => Move::Left,
                (2, _) => Move::Right,
                _ => Move::Stay,
            })
            .collect();
        b.transition(&name(*from), &read, None, &name(*to), &moves).unwrap();
    }
    b.build().unwrap()
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0u16..2).prop_map(Sym), 0..6)
}

/// One head, always moving right: oblivious whatever the state does.
fn sweeping_nfa() -> impl Strategy<Value = MultiHeadAutomaton> {
    (1usize..=4, prop::collection::vec(any::<bool>(), 4), prop::collection::vec((0usize..4, 0u16..2, 0usize..4), 1..10)).prop_map(
        |(states, accepting, trans)| {
            let ab = Alphabet::new(["a", "b"]).unwrap();
            let mut b = MultiHeadAutomaton::builder("sweep", ab, 1, Direction::OneWay);
            b.initial("s0");
            for i in 0..states {
                b.state(&format!("s{i}"));
                if accepting[i] {
                    b.accepting(&format!("s{i}"));
                }
            }
            for (from, s, to) in trans {
                let (from, to) = (format!("s{}", from % states), format!("s{}", to % states));
                b.transition(&from, &[Letter::Sym(Sym(s))], None, &to, &[Move::Right]).unwrap();
            }
            b.build().unwrap()
        },
    )
}

/// Two components over `{a,b}` with random reads, λ-moves and queries.
fn random_system() -> impl Strategy<Value = PcfaSystem> {
    let read = prop_oneof![Just(PcfaRead::Lambda), Just(PcfaRead::End), (0u16..2).prop_map(|s| PcfaRead::Sym(Sym(s)))];
    let trans = (0usize..2, 0usize..4, read, 0usize..5);
    (any::<bool>(), prop::collection::vec(trans, 1..10), prop::collection::vec(any::<bool>(), 4)).prop_map(
        |(returning, trans, accepting)| {
            let ab = Alphabet::new(["a", "b"]).unwrap();
            let mode = if returning { Mode::Returning } else { Mode::NonReturning };
            let mut b = PcfaSystem::builder("random", ab, 2, mode, false);
            for c in 0..2 {
                b.initial(c, &format!("p{c}0")).unwrap();
                for (i, &acc) in accepting.iter().enumerate() {
                    if acc {
                        b.accepting(c, &format!("p{c}{i}")).unwrap();
                    }
                }
            }
            b.state(0, "q2").unwrap();
            b.state(1, "q1").unwrap();
            for (c, from, read, to) in trans {
                // target 4 is the query state of the other component
                let to = if to == 4 { format!("q{}", 2 - c) } else { format!("p{c}{to}") };
                b.transition(c, &format!("p{c}{from}"), read, &to).unwrap();
            }
            b.build().unwrap()
        },
    )
}

fn vector(dim: usize) -> impl Strategy<Value = NVector<u64>> {
    prop::collection::vec(0u64..5, dim).prop_map(NVector)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mhfa_text_round_trip(raw in raw_machine(), words in prop::collection::vec(word(), 8)) {
        let m = build(&raw);
        prop_assert!(validate(&m).is_empty());
        let text = render_mhfa(&m);
        let back = parse_mhfa(&text).unwrap();
        prop_assert_eq!(render_mhfa(&back), text);
        for w in &words {
            prop_assert_eq!(accepts(&m, w).unwrap(), accepts(&back, w).unwrap());
        }
    }

    #[test]
    fn determinized_sweep_keeps_language_and_image(m in sweeping_nfa()) {
        let d = determinize_oblivious(&m, 6).unwrap();
        prop_assert!(is_deterministic(&d));
        for len in 0..=6 {
            for w in mhfa::symbol::words_of_length(2, len) {
                prop_assert_eq!(accepts(&m, &w).unwrap(), accepts(&d, &w).unwrap());
            }
        }
        let (before, after): (BTreeSet<NVector<u64>>, BTreeSet<NVector<u64>>) =
            (parikh_image(&m, 6).unwrap(), parikh_image(&d, 6).unwrap());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn compiled_system_agrees(sys in random_system(), words in prop::collection::vec(word(), 10)) {
        let m = compile_pcfa_to_mhfa(&sys).unwrap();
        for w in &words {
            prop_assert_eq!(pcfa_accepts(&sys, w).unwrap(), accepts(&m, w).unwrap(), "{}", sys.alphabet().render_word(w));
        }
        let text = render_pcfa(&sys);
        prop_assert_eq!(render_pcfa(&parse_pcfa(&text).unwrap()), text);
    }

    #[test]
    fn combinations_are_members(
        (base, periods, coeffs) in (1usize..=3).prop_flat_map(|d| {
            (vector(d), prop::collection::vec(vector(d), 0..4), prop::collection::vec(0u64..4, 4))
        })
    ) {
        let mut v = base.clone();
        for (p, &c) in periods.iter().zip(&coeffs) {
            for _ in 0..c {
                v = v.checked_add(p).unwrap();
            }
        }
        let l = LinearSet::new(base.clone(), periods).unwrap();
        prop_assert!(linear_member(&v, &l));
        // a coordinate no period touches cannot drop below the base
        if let Some(i) = base.0.iter().position(|&x| x > 0) {
            let mut below = v.clone();
            below.0[i] = base.0[i] - 1;
            let fixed = l.periods().iter().all(|p| p.0[i] == 0);
            prop_assert!(!fixed || !linear_member(&below, &l));
        }
    }

    #[test]
    fn parikh_is_a_morphism(u in word(), v in word()) {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let uv: Word = u.iter().chain(&v).copied().collect();
        let (pu, pv): (NVector<u32>, NVector<u32>) = (parikh(&u, &ab).unwrap(), parikh(&v, &ab).unwrap());
        prop_assert_eq!(pu.checked_add(&pv).unwrap(), parikh(&uv, &ab).unwrap());
        let rev: Word = uv.iter().rev().copied().collect();
        prop_assert_eq!(parikh::<u32>(&rev, &ab).unwrap(), parikh(&uv, &ab).unwrap());
    }

    #[test]
    fn semilinear_text_round_trip(sets in prop::collection::vec((vector(2), prop::collection::vec(vector(2), 0..3)), 0..4)) {
        let comps = sets.into_iter().map(|(b, p)| LinearSet::new(b, p).unwrap()).collect();
        let s = Semilinear::new(2, comps).unwrap();
        let text = render_semilinear(&s);
        let back: Semilinear = parse_semilinear(&text).unwrap();
        prop_assert_eq!(render_semilinear(&back), text);
    }
}
