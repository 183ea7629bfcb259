//! Exact symbolic algebra of free-field words: field symbols, Fermi parity,
//! normal ordering, permutation signs, the vacuum functional and canonical
//! forms. Coefficients are Gaussian rationals, so every identity check in
//! this layer is an exact polynomial identity over the contraction scalars.

pub mod coeff;
pub mod expr;
pub mod fields;
pub mod gamma;
pub mod wick;

pub use coeff::Coeff;
pub use expr::{ContractionSymbol, Expression, Flavor, Ordering, Term, TermKey};
pub use fields::{
    two_point_class, FieldKind, FieldSymbol, Label, LabelRegistry, Mass, PairKind, Species,
    TwoPointClass,
};
pub use wick::{
    canonicalize, drop_causal, expand_tvac, fermi_parity, mul, normal_inverse_expand,
    normal_order_expand, normal_permute, vacuum_expectation,
};
