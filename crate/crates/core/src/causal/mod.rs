//! Chronological products and their identity checkers.
//!
//! A chronological product is built constructively: the plain product plus
//! causal two-point scalars summed over pair sets. Restricting an expression
//! to an assumed time ordering resolves those scalars — a causal pair with a
//! later left argument vanishes, one with an earlier left argument reduces to
//! plain vacuum pairs — and the time-ordering and factorization identities
//! become exact polynomial identities over the remaining scalars.

mod bilocal;
mod bose;
mod checks;
mod restrict;

pub use bilocal::{
    chrono_bilocal, chrono_bilocal_block_form, chrono_bilocal_normal, BilocalFactor,
    SubstitutionSlot,
};
pub use bose::{chrono_bose, chrono_bose_recurrent, chrono_bose_wick, chrono_two};
pub use checks::{
    check_factorization, check_factorization_with, check_three_field_chrono,
    check_time_order_identity, three_field_chrono, three_field_conditions_hold, ChronoFamily,
};
pub use restrict::{restrict, restrict_partial, TimeOrderAssumption};
