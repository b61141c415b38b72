//! Parikh vectors, linear and semilinear sets, bounded languages.
//!
//! Vectors are generic over the unsigned integer type; the crate root
//! exposes `u64` aliases.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{PrimInt, Unsigned};

use crate::error::{Error, Result};
use crate::semantics::Acceptor;
use crate::symbol::{Alphabet, Sym, Word};

/// A vector of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NVector<T>(pub Vec<T>);

impl<T: PrimInt + Unsigned> NVector<T> {
    pub fn zero(dim: usize) -> Self {
        NVector(vec![T::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Sum of the entries, or `None` on overflow.
    pub fn weight(&self) -> Option<T> {
        self.0.iter().try_fold(T::zero(), |acc, x| acc.checked_add(x))
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_add(b)).collect::<Option<Vec<_>>>().map(NVector)
    }

    /// `self - other` when every entry stays non-negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(b)).collect::<Option<Vec<_>>>().map(NVector)
    }
}

impl<T: fmt::Display> fmt::Display for NVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `{ base + Σ c_i · period_i | c_i ≥ 0 }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSet<T> {
    base: NVector<T>,
    periods: Vec<NVector<T>>,
}

impl<T: PrimInt + Unsigned> LinearSet<T> {
    /// Zero periods are dropped; they add nothing and would make the
    /// membership search unbounded.
    pub fn new(base: NVector<T>, periods: Vec<NVector<T>>) -> Result<Self> {
        if let Some(p) = periods.iter().find(|p| p.dim() != base.dim()) {
            return Err(Error::usage(format!("period of dimension {} with a base of dimension {}", p.dim(), base.dim())));
        }
        let periods = periods.into_iter().filter(|p| !p.is_zero()).collect();
        Ok(LinearSet { base, periods })
    }

    pub fn base(&self) -> &NVector<T> {
        &self.base
    }

    pub fn periods(&self) -> &[NVector<T>] {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet<T> {
    dim: usize,
    components: Vec<LinearSet<T>>,
}

impl<T: PrimInt + Unsigned> SemilinearSet<T> {
    pub fn new(dim: usize, components: Vec<LinearSet<T>>) -> Result<Self> {
        if let Some(c) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::usage(format!("linear set of dimension {} in a union of dimension {dim}", c.dim())));
        }
        Ok(SemilinearSet { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        SemilinearSet { dim, components: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LinearSet<T>] {
        &self.components
    }

    pub fn push(&mut self, l: LinearSet<T>) -> Result<()> {
        if l.dim() != self.dim {
            return Err(Error::usage("dimension mismatch"));
        }
        self.components.push(l);
        Ok(())
    }
}

/// Occurrence counts of the symbols of `alphabet`, in its order.
pub fn parikh<T: PrimInt + Unsigned>(word: &[Sym], alphabet: &Alphabet) -> Result<NVector<T>> {
    alphabet.check_word(word)?;
    let mut v: NVector<T> = NVector::zero(alphabet.len());
    for s in word {
        let slot: &mut T = &mut v.0[s.index()];
        *slot = slot.checked_add(&T::one()).ok_or_else(|| Error::usage("occurrence count overflows the vector type"))?;
    }
    Ok(v)
}

/// Whether `v - base` is a non-negative combination of the periods. Each
/// coefficient is bounded by the largest entry of `v`, as every period has
/// a positive entry.
pub fn linear_member<T: PrimInt + Unsigned>(v: &NVector<T>, l: &LinearSet<T>) -> bool {
    fn search<T: PrimInt + Unsigned>(rest: &NVector<T>, periods: &[NVector<T>]) -> bool {
        let Some((p, tail)) = periods.split_first() else { return rest.is_zero() };
        let mut r = rest.clone();
        loop {
            if search(&r, tail) {
                return true;
            }
            match r.checked_sub(p) {
                Some(next) => r = next,
                None => return false,
            }
        }
    }
    match v.checked_sub(&l.base) {
        Some(rest) => search(&rest, &l.periods),
        None => false,
    }
}

pub fn semilinear_member<T: PrimInt + Unsigned>(v: &NVector<T>, s: &SemilinearSet<T>) -> bool {
    v.dim() == s.dim && s.components.iter().any(|l| linear_member(v, l))
}

/// Members of `l` whose weight is at most `max_weight`.
pub fn linear_members_up_to<T: PrimInt + Unsigned>(l: &LinearSet<T>, max_weight: T) -> BTreeSet<NVector<T>> {
    fn grow<T: PrimInt + Unsigned>(v: NVector<T>, periods: &[NVector<T>], max: T, out: &mut BTreeSet<NVector<T>>) {
        let Some((p, tail)) = periods.split_first() else {
            out.insert(v);
            return;
        };
        let mut cur = v;
        loop {
            grow(cur.clone(), tail, max, out);
            match cur.checked_add(p) {
                Some(next) if next.weight().is_some_and(|w| w <= max) => cur = next,
                _ => return,
            }
        }
    }
    let mut out = BTreeSet::new();
    if l.base.weight().is_some_and(|w| w <= max_weight) {
        grow(l.base.clone(), &l.periods, max_weight, &mut out);
    }
    out
}

/// Parikh vectors of the accepted words of length at most `max_len`.
pub fn parikh_image<T, A>(m: &A, max_len: usize) -> Result<BTreeSet<NVector<T>>>
where
    T: PrimInt + Unsigned,
    A: Acceptor + ?Sized,
{
    m.enumerate(max_len)?.iter().map(|w| parikh(w, m.alphabet())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemilinearVerdict<T> {
    Consistent,
    /// Image of an accepted word that is not in the set.
    NotInSet(NVector<T>),
    /// Member of the set, light enough to check, with no accepted word.
    NotRealized(NVector<T>),
}

/// Checks the bounded Parikh image of `m` against `s` in both directions.
pub fn compare_semilinear<T, A>(m: &A, s: &SemilinearSet<T>, max_len: usize) -> Result<SemilinearVerdict<T>>
where
    T: PrimInt + Unsigned,
    A: Acceptor + ?Sized,
{
    if s.dim != m.alphabet().len() {
        return Err(Error::usage(format!("set of dimension {} for an alphabet of {} symbols", s.dim, m.alphabet().len())));
    }
    let image: BTreeSet<NVector<T>> = parikh_image(m, max_len)?;
    if let Some(v) = image.iter().find(|v| !semilinear_member(v, s)) {
        return Ok(SemilinearVerdict::NotInSet(v.clone()));
    }
    let bound = T::from(max_len).ok_or_else(|| Error::usage("length bound does not fit the vector type"))?;
    let members: BTreeSet<NVector<T>> = s.components.iter().flat_map(|l| linear_members_up_to(l, bound)).collect();
    Ok(match members.into_iter().find(|v| !image.contains(v)) {
        Some(v) => SemilinearVerdict::NotRealized(v),
        None => SemilinearVerdict::Consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    /// First accepted word, in length-lexicographic order, outside `a1* a2* … an*`.
    Counterexample(Word),
}

/// Whether every accepted word up to `max_len` lies in `order[0]* order[1]* …`.
pub fn is_bounded_up_to<A: Acceptor + ?Sized>(m: &A, order: &[Sym], max_len: usize) -> Result<Boundedness> {
    m.alphabet().check_word(order)?;
    let rank = |s: Sym| order.iter().position(|&o| o == s);
    for w in m.enumerate(max_len)? {
        let mut last = 0;
        let fits = w.iter().all(|&s| match rank(s) {
            Some(r) if r >= last => {
                last = r;
                true
            }
            _ => false,
        });
        if !fits {
            return Ok(Boundedness::Counterexample(w));
        }
    }
    Ok(Boundedness::Bounded)
}
