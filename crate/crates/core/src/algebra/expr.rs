//! Signed exact-coefficient operator words times contraction multisets, and
//! sums thereof with a canonical merged form.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::coeff::{self, Coeff};
use super::fields::{two_point_class, FieldSymbol, Label, TwoPointClass};
use crate::error::{Error, Result};

/// Which two-point distribution a contraction symbol names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// Plain vacuum expectation of the ordered pair.
    Vac,
    /// Difference between the chronological and the plain pair; supported at
    /// delayed arguments (vanishes when the left label is strictly later).
    Causal,
    /// Vacuum expectation of the chronological pair.
    TVac,
}

impl Flavor {
    fn tag(self) -> &'static str {
        match self {
            Flavor::Vac => "vac",
            Flavor::Causal => "causal",
            Flavor::TVac => "tvac",
        }
    }
}

/// Opaque commutative scalar naming a two-point function of the ordered pair
/// `(left, right)`. Only pairs the two-point table classifies nonzero may be
/// constructed, and the labels must differ: a symbol at coincident labels
/// would be the undefined equal-argument product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContractionSymbol {
    pub flavor: Flavor,
    pub left: FieldSymbol,
    pub right: FieldSymbol,
}

impl ContractionSymbol {
    pub fn new(flavor: Flavor, left: FieldSymbol, right: FieldSymbol) -> Result<Self> {
        if left.label == right.label {
            return Err(Error::CoincidentLabels(left.label));
        }
        match two_point_class(&left, &right) {
            TwoPointClass::Zero => Err(Error::ZeroClassPair),
            TwoPointClass::Nonzero(_) => Ok(ContractionSymbol { flavor, left, right }),
        }
    }
}

impl fmt::Display for ContractionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Vac => write!(f, "<{} {}>0", self.left, self.right),
            Flavor::Causal => write!(f, "<{} {}>c", self.left, self.right),
            Flavor::TVac => write!(f, "<T({} {})>0", self.left, self.right),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ordering {
    Plain,
    Normal,
}

/// Multiset of contraction scalars, a word, and the word's ordering mode.
/// The contraction list is kept sorted; it is a commutative product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub contractions: Vec<ContractionSymbol>,
    pub word: Vec<FieldSymbol>,
    pub ordering: Ordering,
}

impl TermKey {
    pub fn new(mut contractions: Vec<ContractionSymbol>, word: Vec<FieldSymbol>, ordering: Ordering) -> Self {
        contractions.sort();
        // Empty words are all the same operator I; normalize the tag.
        let ordering = if word.len() <= 1 { Ordering::Normal } else { ordering };
        TermKey { contractions, word, ordering }
    }

    pub fn identity() -> Self {
        TermKey::new(Vec::new(), Vec::new(), Ordering::Normal)
    }
}

/// One signed summand: an exact coefficient times a term key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub key: TermKey,
}

impl Term {
    pub fn new(coeff: Coeff, contractions: Vec<ContractionSymbol>, word: Vec<FieldSymbol>, ordering: Ordering) -> Self {
        Term { coeff, key: TermKey::new(contractions, word, ordering) }
    }

    pub fn identity() -> Self {
        Term { coeff: coeff::one(), key: TermKey::identity() }
    }
}

/// Sum of terms merged by key. The zero expression is the empty sum.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expression {
    terms: BTreeMap<TermKey, Coeff>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    /// The identity operator I.
    pub fn one() -> Self {
        Expression::from_term(Term::identity())
    }

    pub fn from_term(t: Term) -> Self {
        let mut e = Expression::zero();
        e.add_term(t);
        e
    }

    pub fn from_terms(ts: impl IntoIterator<Item = Term>) -> Self {
        let mut e = Expression::zero();
        for t in ts {
            e.add_term(t);
        }
        e
    }

    /// A plain operator word with unit coefficient.
    pub fn word(word: Vec<FieldSymbol>) -> Self {
        Expression::from_term(Term::new(coeff::one(), Vec::new(), word, Ordering::Plain))
    }

    /// A normal-ordered word with unit coefficient.
    pub fn normal_word(word: Vec<FieldSymbol>) -> Self {
        Expression::from_term(Term::new(coeff::one(), Vec::new(), word, Ordering::Normal))
    }

    pub fn scalar(c: Coeff) -> Self {
        Expression::from_term(Term { coeff: c, key: TermKey::identity() })
    }

    pub fn add_term(&mut self, t: Term) {
        if coeff::is_zero(&t.coeff) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t.key) {
            Entry::Vacant(v) => {
                v.insert(t.coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + t.coeff;
                if coeff::is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(k, c)| Term { coeff: c.clone(), key: k.clone() })
    }

    pub fn scale(&self, c: &Coeff) -> Expression {
        if coeff::is_zero(c) {
            return Expression::zero();
        }
        Expression {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// All labels appearing in words or contraction symbols.
    pub fn labels(&self) -> std::collections::BTreeSet<Label> {
        let mut set = std::collections::BTreeSet::new();
        for (k, _) in self.iter() {
            for s in &k.word {
                set.insert(s.label);
            }
            for c in &k.contractions {
                set.insert(c.left.label);
                set.insert(c.right.label);
            }
        }
        set
    }

    /// Applies a label substitution. The result is not re-canonicalized.
    pub fn relabel(&self, map: &impl Fn(Label) -> Label) -> Expression {
        let mut out = Expression::zero();
        for (k, c) in self.iter() {
            let word = k.word.iter().map(|s| FieldSymbol { label: map(s.label), ..*s }).collect();
            let contractions = k
                .contractions
                .iter()
                .map(|cs| ContractionSymbol {
                    flavor: cs.flavor,
                    left: FieldSymbol { label: map(cs.left.label), ..cs.left },
                    right: FieldSymbol { label: map(cs.right.label), ..cs.right },
                })
                .collect();
            out.add_term(Term { coeff: c.clone(), key: TermKey::new(contractions, word, k.ordering) });
        }
        out
    }

    /// Stable JSON rendering for regression diffs: exact coefficients as
    /// numerator/denominator pairs, terms in canonical key order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .iter()
            .map(|(k, c)| {
                json!({
                    "coeff": [
                        [c.re.numer().to_string(), c.re.denom().to_string()],
                        [c.im.numer().to_string(), c.im.denom().to_string()],
                    ],
                    "contractions": k.contractions.iter().map(|cs| {
                        json!([cs.flavor.tag(), field_json(&cs.left), field_json(&cs.right)])
                    }).collect::<Vec<_>>(),
                    "word": k.word.iter().map(field_json).collect::<Vec<_>>(),
                    "ordering": match k.ordering { Ordering::Plain => "plain", Ordering::Normal => "normal" },
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    /// Deterministic 64-bit hash of the canonical JSON form (FNV-1a).
    pub fn symbolic_hash(&self) -> u64 {
        let s = self.to_json().to_string();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in s.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

fn field_json(s: &FieldSymbol) -> Value {
    json!([
        s.kind.species.name(),
        format!("{}/{}", s.kind.mass.numer(), s.kind.mass.denom()),
        s.component,
        s.label.0,
    ])
}

impl std::ops::Add for Expression {
    type Output = Expression;
    fn add(mut self, rhs: Expression) -> Expression {
        for (k, c) in rhs.terms {
            self.add_term(Term { coeff: c, key: k });
        }
        self
    }
}

impl std::ops::Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        self + rhs.neg()
    }
}

impl Expression {
    pub fn neg(&self) -> Expression {
        self.scale(&(-coeff::one()))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", coeff::format_coeff(c))?;
            for cs in &k.contractions {
                write!(f, " {cs}")?;
            }
            if !k.word.is_empty() {
                let inner = k.word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
                match k.ordering {
                    Ordering::Plain => write!(f, " {inner}")?,
                    Ordering::Normal => write!(f, " :{inner}:")?,
                }
            }
        }
        Ok(())
    }
}
