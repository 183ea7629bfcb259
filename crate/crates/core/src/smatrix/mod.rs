//! The bilocal interaction vertex, order-by-order generation of the
//! scattering series, vacuum matrix elements between smeared states, and
//! the unitarity and causal-factorization harnesses.

mod adjoint;
mod element;
mod factorize;
mod series;
mod unitarity;

pub use adjoint::{adjoint, average_over_relabelings};
pub use element::{
    matrix_element, matrix_element_norm_bound, matrix_element_with_assignment,
    selection_rule_violated, ClassValue, MatrixElement, SmearCache, StateSpec,
};
pub use factorize::{
    factorization_defect, first_order_smallness_report, FactorizationReport, SmallnessReport,
};
pub use series::{
    bilocal_lagrangian, chrono_lagrangians, smatrix_terms, SeriesTerm, SlotLabels, SmatrixSeries,
    SwitchingFunction, WickClass, WickPair, DEFAULT_ORDER_CAP,
};
pub use unitarity::{unitarity_defect, unitarity_defect_numeric, UnitarityReport};
