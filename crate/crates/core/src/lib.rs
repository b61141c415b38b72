//! Multi-head finite automata: execution semantics, oblivious and sensing
//! variants, parallel communicating systems, computation-history
//! constructions and Parikh images.

pub mod constructions;
pub mod error;
pub mod machine;
pub mod pcfa;
pub mod semantics;
pub mod semilinear;
pub mod symbol;
pub mod text;
pub mod variants;

pub use error::{Error, Result};
pub use machine::{Direction, Flavor, MachineBuilder, Move, MultiHeadAutomaton, StateId, Target, Transition};
pub use semantics::{accepts, enumerate, equivalent_up_to, Acceptor, Configuration, Equivalence};
pub use symbol::{Alphabet, Letter, Sym, Word};
pub use variants::CoincidencePartition;

/// Parikh vector with `u64` entries.
pub type ParikhVector = semilinear::NVector<u64>;
pub type Linear = semilinear::LinearSet<u64>;
pub type Semilinear = semilinear::SemilinearSet<u64>;
