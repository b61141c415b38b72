//! Turns a finite control given as a step function into a one-way machine.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::Result;
use crate::machine::{Direction, Move, MultiHeadAutomaton};
use crate::symbol::{Alphabet, Letter};

/// Builds the machine whose states are the control values reachable from
/// `init`. `delta` sees one letter per head (input symbols and the right
/// endmarker; one-way heads never scan the left one). States are named
/// `c0`, `c1`, ... in discovery order.
pub(crate) fn explore<S, A, F>(
    name: &str,
    alphabet: &Alphabet,
    heads: usize,
    init: S,
    accepting: A,
    delta: F,
) -> Result<MultiHeadAutomaton>
where
    S: Clone + Eq + Hash,
    A: Fn(&S) -> bool,
    F: Fn(&S, &[Letter]) -> Option<(S, Vec<Move>)>,
{
    let mut letters: Vec<Letter> = alphabet.symbols().map(Letter::Sym).collect();
    letters.push(Letter::RightEnd);
    let mut reads: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..heads {
        reads = reads
            .into_iter()
            .flat_map(|p| {
                letters.iter().map(move |&l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }

    let mut b = MultiHeadAutomaton::builder(name, alphabet.clone(), heads, Direction::OneWay);
    let mut ids: HashMap<S, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    ids.insert(init.clone(), 0);
    queue.push_back(init);
    b.initial("c0");
    while let Some(s) = queue.pop_front() {
        let from = format!("c{}", ids[&s]);
        if accepting(&s) {
            b.accepting(&from);
        }
        for read in &reads {
            let Some((next, moves)) = delta(&s, read) else { continue };
            // Such a step has no successor anyway; leaving it out keeps the
            // machine well formed.
            if read.iter().zip(&moves).any(|(&l, &mv)| l == Letter::RightEnd && mv == Move::Right) {
                continue;
            }
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = ids.len();
                    ids.insert(next.clone(), id);
                    queue.push_back(next);
                    id
                }
            };
            b.transition(&from, read, None, &format!("c{id}"), &moves)?;
        }
    }
    b.build()
}
