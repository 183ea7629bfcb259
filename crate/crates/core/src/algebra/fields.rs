//! Free-field symbols: species, components, spacetime labels and the
//! two-point classification table.

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Field species. `VectorConj` is the adjoint of the massive vector field;
/// the photon field `Em` is its own adjoint and massless.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Species {
    Scalar,
    Vector,
    VectorConj,
    Em,
    Spinor,
    SpinorBar,
}

impl Species {
    pub fn name(self) -> &'static str {
        match self {
            Species::Scalar => "scalar",
            Species::Vector => "vector",
            Species::VectorConj => "vector*",
            Species::Em => "em",
            Species::Spinor => "psi",
            Species::SpinorBar => "psibar",
        }
    }

    /// Fermi parity bit: odd total spin index for the spinor species.
    pub fn parity(self) -> bool {
        matches!(self, Species::Spinor | Species::SpinorBar)
    }
}

/// Mass stored exactly so symbolic equality stays decidable.
pub type Mass = Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldKind {
    pub species: Species,
    pub mass: Mass,
}

impl FieldKind {
    pub fn new(species: Species, mass: Mass) -> Self {
        debug_assert!(mass >= Mass::from_integer(0));
        let mass = if species == Species::Em { Mass::from_integer(0) } else { mass };
        FieldKind { species, mass }
    }

    pub fn scalar(mass: Mass) -> Self {
        Self::new(Species::Scalar, mass)
    }

    pub fn em() -> Self {
        Self::new(Species::Em, Mass::from_integer(0))
    }

    pub fn spinor(mass: Mass) -> Self {
        Self::new(Species::Spinor, mass)
    }

    pub fn spinor_bar(mass: Mass) -> Self {
        Self::new(Species::SpinorBar, mass)
    }

    pub fn mass_f64(&self) -> f64 {
        *self.mass.numer() as f64 / *self.mass.denom() as f64
    }
}

/// Abstract spacetime point. Ordered by creation order of the registry that
/// issued it; the ordering fixes every canonical word sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Issues labels in creation order. Ties cannot occur.
#[derive(Debug, Clone, Default)]
pub struct LabelRegistry {
    next: u32,
}

impl LabelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> Label {
        let l = Label(self.next);
        self.next += 1;
        l
    }

    pub fn fresh_n<const N: usize>(&mut self) -> [Label; N] {
        std::array::from_fn(|_| self.fresh())
    }

    pub fn issued(&self) -> u32 {
        self.next
    }
}

/// One free-field factor in an operator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSymbol {
    pub kind: FieldKind,
    /// Spinor component 1..=4, vector/photon index 0..=3, 0 for the scalar.
    pub component: u8,
    pub label: Label,
}

impl FieldSymbol {
    pub fn new(kind: FieldKind, component: u8, label: Label) -> Result<Self> {
        let ok = match kind.species {
            Species::Scalar => component == 0,
            Species::Vector | Species::VectorConj | Species::Em => component <= 3,
            Species::Spinor | Species::SpinorBar => (1..=4).contains(&component),
        };
        if !ok {
            return Err(Error::InvalidComponent { species: kind.species.name(), component });
        }
        Ok(FieldSymbol { kind, component, label })
    }

    pub fn scalar(mass: Mass, label: Label) -> Self {
        FieldSymbol { kind: FieldKind::scalar(mass), component: 0, label }
    }

    pub fn em(mu: u8, label: Label) -> Result<Self> {
        Self::new(FieldKind::em(), mu, label)
    }

    pub fn spinor(mass: Mass, alpha: u8, label: Label) -> Result<Self> {
        Self::new(FieldKind::spinor(mass), alpha, label)
    }

    pub fn spinor_bar(mass: Mass, alpha: u8, label: Label) -> Result<Self> {
        Self::new(FieldKind::spinor_bar(mass), alpha, label)
    }

    pub fn parity(&self) -> bool {
        self.kind.species.parity()
    }
}

impl fmt::Display for FieldSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind.species {
            Species::Scalar => write!(f, "phi({})", self.label),
            Species::Vector => write!(f, "U_{}({})", self.component, self.label),
            Species::VectorConj => write!(f, "U*_{}({})", self.component, self.label),
            Species::Em => write!(f, "A_{}({})", self.component, self.label),
            Species::Spinor => write!(f, "psi_{}({})", self.component, self.label),
            Species::SpinorBar => write!(f, "psibar_{}({})", self.component, self.label),
        }
    }
}

/// Which row of the two-point table an ordered pair hits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    ScalarScalar,
    EmEm,
    VectorConjVector,
    SpinorSpinorBar,
    SpinorBarSpinor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointClass {
    Zero,
    Nonzero(PairKind),
}

/// Classifies the ordered pair `<a b>`. Nonzero entries exist only for the
/// same free field (equal species pattern and equal mass); every mixed pair
/// commutes (or anticommutes) to zero.
pub fn two_point_class(a: &FieldSymbol, b: &FieldSymbol) -> TwoPointClass {
    use Species::*;
    if a.kind.mass != b.kind.mass {
        return TwoPointClass::Zero;
    }
    let kind = match (a.kind.species, b.kind.species) {
        (Scalar, Scalar) => Some(PairKind::ScalarScalar),
        (Em, Em) => Some(PairKind::EmEm),
        (VectorConj, Vector) => Some(PairKind::VectorConjVector),
        (Spinor, SpinorBar) => Some(PairKind::SpinorSpinorBar),
        (SpinorBar, Spinor) => Some(PairKind::SpinorBarSpinor),
        _ => None,
    };
    match kind {
        Some(k) => TwoPointClass::Nonzero(k),
        None => TwoPointClass::Zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1() -> Mass {
        Mass::from_integer(1)
    }

    #[test]
    fn component_ranges() {
        let mut reg = LabelRegistry::new();
        let l = reg.fresh();
        assert!(FieldSymbol::spinor(m1(), 0, l).is_err());
        assert!(FieldSymbol::spinor(m1(), 4, l).is_ok());
        assert!(FieldSymbol::em(4, l).is_err());
        assert!(FieldSymbol::new(FieldKind::scalar(m1()), 1, l).is_err());
    }

    #[test]
    fn two_point_table() {
        let mut reg = LabelRegistry::new();
        let [x, y, z] = reg.fresh_n();
        let phi1 = FieldSymbol::scalar(m1(), x);
        let phi2 = FieldSymbol::scalar(m1(), y);
        let a = FieldSymbol::em(2, z).unwrap();
        let psi = FieldSymbol::spinor(m1(), 1, x).unwrap();
        let psibar = FieldSymbol::spinor_bar(m1(), 2, y).unwrap();

        assert_eq!(two_point_class(&phi1, &phi2), TwoPointClass::Nonzero(PairKind::ScalarScalar));
        assert_eq!(two_point_class(&psi, &a), TwoPointClass::Zero);
        assert_eq!(two_point_class(&phi1, &a), TwoPointClass::Zero);
        assert_eq!(
            two_point_class(&psi, &psibar),
            TwoPointClass::Nonzero(PairKind::SpinorSpinorBar)
        );
        assert_eq!(
            two_point_class(&psibar, &psi),
            TwoPointClass::Nonzero(PairKind::SpinorBarSpinor)
        );
        // No <psi psi> or <psibar psibar> entry.
        let psi2 = FieldSymbol::spinor(m1(), 3, y).unwrap();
        assert_eq!(two_point_class(&psi, &psi2), TwoPointClass::Zero);
        // Different masses are different free fields.
        let phi_heavy = FieldSymbol::scalar(Mass::new(3, 2), y);
        assert_eq!(two_point_class(&phi1, &phi_heavy), TwoPointClass::Zero);
        // The vector pair is ordered: conjugate first.
        let u = FieldSymbol::new(FieldKind::new(Species::Vector, m1()), 1, x).unwrap();
        let uc = FieldSymbol::new(FieldKind::new(Species::VectorConj, m1()), 1, y).unwrap();
        assert_eq!(two_point_class(&uc, &u), TwoPointClass::Nonzero(PairKind::VectorConjVector));
        assert_eq!(two_point_class(&u, &uc), TwoPointClass::Zero);
    }
}
