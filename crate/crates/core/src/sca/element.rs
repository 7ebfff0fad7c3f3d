use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::Symbol;
use crate::algebra::Scalar;

/// Finite combination of basis symbols plus a multiple of the central 𝒞.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SCAElement {
    terms: BTreeMap<(Symbol, i64), Scalar>,
    central: Scalar,
}

impl SCAElement {
    pub fn zero() -> Self {
        SCAElement::default()
    }

    pub fn basis(s: Symbol, n: i64) -> Self {
        let mut e = SCAElement::zero();
        e.add_term(s, n, Scalar::one());
        e
    }

    pub fn central_only(c: Scalar) -> Self {
        SCAElement { terms: BTreeMap::new(), central: c }
    }

    pub fn add_term(&mut self, s: Symbol, n: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((s, n)).or_insert_with(Scalar::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(s, n));
        }
    }

    pub fn add_central(&mut self, c: &Scalar) {
        self.central += c;
    }

    pub fn with_term(mut self, s: Symbol, n: i64, c: Scalar) -> Self {
        self.add_term(s, n, c);
        self
    }

    pub fn with_central(mut self, c: Scalar) -> Self {
        self.central += &c;
        self
    }

    pub fn add_scaled(&mut self, other: &SCAElement, c: &Scalar) {
        for (&(s, n), v) in &other.terms {
            self.add_term(s, n, v * c);
        }
        self.central += &(&other.central * c);
    }

    pub fn add(&self, other: &SCAElement) -> SCAElement {
        let mut r = self.clone();
        r.add_scaled(other, &Scalar::one());
        r
    }

    pub fn sub(&self, other: &SCAElement) -> SCAElement {
        let mut r = self.clone();
        r.add_scaled(other, &-Scalar::one());
        r
    }

    pub fn scaled(&self, c: &Scalar) -> SCAElement {
        let mut r = SCAElement::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn coeff(&self, s: Symbol, n: i64) -> Scalar {
        self.terms.get(&(s, n)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    /// The same element with its central part dropped.
    pub fn centerless(&self) -> SCAElement {
        SCAElement { terms: self.terms.clone(), central: Scalar::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Symbol, i64, &Scalar)> {
        self.terms.iter().map(|(&(s, n), c)| (s, n, c))
    }

    /// `Some(odd)` when every stored symbol has the same parity; the central
    /// part is even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|(s, _)| s.is_odd());
        let first = it.next().unwrap_or(false);
        if it.all(|p| p == first) && (!first || self.central.is_zero()) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for SCAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.terms.iter().map(|(&(s, n), c)| format!("({c})*{s}[{n}]")).collect();
        if !self.central.is_zero() {
            parts.push(format!("({})*C", self.central));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for SCAElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
