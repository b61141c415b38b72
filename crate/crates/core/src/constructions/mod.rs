//! Constructive compilers and witness-language acceptors.

mod builder;
pub mod l2;
pub mod ln;
pub mod lnm;
pub mod predicates;
mod schedule;
pub mod tm;
pub mod valc;

pub use l2::build_l2_acceptor;
pub use ln::{build_ln_acceptor, ln_alphabet};
pub use lnm::{build_lnm_acceptor, lnm_alphabet, lnm_member};
pub use tm::{reference_valc_member, tm_run, tm_step, valc_alphabet, valc_string, TmConfiguration, TmOutcome, TuringMachine};
pub use valc::build_valc_acceptor;
