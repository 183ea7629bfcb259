//! Numerical evaluation of the smeared two-point distributions and the
//! support, splitting and bound checks built on them.

pub mod bounds;
pub mod quad;
pub mod smear;
pub mod testfn;
pub mod twopoint;

pub use bounds::{check_bound, frozen_constant, BoundId, BoundReport};
pub use smear::{
    smear_dcausal, smear_dcausal_eff, smear_dminus, smear_dminus_eff, smear_dminus_reflected_eff,
    smear_dret, smear_dret_eff, smear_pauli_jordan, smear_pauli_jordan_eff, QuadratureConfig,
    RetardedRoute, SmearResult,
};
pub use testfn::{DressTerm, EffectiveTf, SpatialOp, TestFunction, TimeEnv};
pub use twopoint::{smear_two_point, smear_two_point_entry, TwoPointSmear};
