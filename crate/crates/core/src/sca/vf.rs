//! Super vector fields on ℂ[t, t⁻¹] ⊗ Λ(θ₁, θ₂), used as an oracle for the
//! bracket table.

use std::collections::BTreeMap;
use std::fmt;

use super::{SCAElement, Symbol};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

const TH1: u8 = 1;
const TH2: u8 = 2;

/// Laurent polynomial in `t` with Grassmann coefficients; a key `(e, mask)`
/// is `t^e θ^mask` with θ₁ written left of θ₂.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperFunction {
    terms: BTreeMap<(i64, u8), Scalar>,
}

impl SuperFunction {
    pub fn zero() -> Self {
        SuperFunction::default()
    }

    pub fn monomial(e: i64, mask: u8, c: Scalar) -> Self {
        let mut f = SuperFunction::zero();
        f.add_term(e, mask, c);
        f
    }

    fn add_term(&mut self, e: i64, mask: u8, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((e, mask)).or_insert_with(Scalar::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(e, mask));
        }
    }

    pub fn add_scaled(&mut self, other: &SuperFunction, c: &Scalar) {
        for (&(e, m), v) in &other.terms {
            self.add_term(e, m, v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &SuperFunction) -> SuperFunction {
        let mut out = SuperFunction::zero();
        for (&(e1, m1), a) in &self.terms {
            for (&(e2, m2), b) in &other.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                // θ₂θ₁ = −θ₁θ₂
                let sign = if m1 & TH2 != 0 && m2 & TH1 != 0 { -Scalar::one() } else { Scalar::one() };
                out.add_term(e1 + e2, m1 | m2, a * b * sign);
            }
        }
        out
    }

    fn d_t(&self) -> SuperFunction {
        let mut out = SuperFunction::zero();
        for (&(e, m), c) in &self.terms {
            out.add_term(e - 1, m, c * &Scalar::from_i64(e));
        }
        out
    }

    /// Left derivative ∂/∂θ_i.
    fn d_theta(&self, bit: u8) -> SuperFunction {
        let mut out = SuperFunction::zero();
        for (&(e, m), c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let sign = if bit == TH2 && m & TH1 != 0 { -Scalar::one() } else { Scalar::one() };
            out.add_term(e, m & !bit, c * &sign);
        }
        out
    }

    /// Parity of the `θ`-degree when homogeneous; `None` when mixed.
    fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|&(_, m)| m.count_ones() % 2 == 1);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(e, m), c)| {
                let th = match m {
                    0 => "",
                    TH1 => "θ1",
                    TH2 => "θ2",
                    _ => "θ1θ2",
                };
                format!("({c})t^{e}{th}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `f ∂_t + f₁ ∂₁ + f₂ ∂₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperVectorField {
    pub t: SuperFunction,
    pub d1: SuperFunction,
    pub d2: SuperFunction,
}

impl SuperVectorField {
    pub fn zero() -> Self {
        SuperVectorField::default()
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.d1.is_zero() && self.d2.is_zero()
    }

    /// Parity of a homogeneous field; zero counts as even.
    pub fn parity(&self) -> Result<bool> {
        let flip = |p: Option<bool>| p.map(|x| !x);
        let ps: Vec<bool> = [self.t.parity(), flip(self.d1.parity()), flip(self.d2.parity())]
            .into_iter()
            .flatten()
            .collect();
        match ps.split_first() {
            None => Ok(false),
            Some((p, rest)) if rest.iter().all(|q| q == p) => Ok(*p),
            _ => Err(Error::Structural("vector field is not parity-homogeneous".into())),
        }
    }

    pub fn add_scaled(&mut self, other: &SuperVectorField, c: &Scalar) {
        self.t.add_scaled(&other.t, c);
        self.d1.add_scaled(&other.d1, c);
        self.d2.add_scaled(&other.d2, c);
    }

    /// The field acting on a function.
    pub fn apply(&self, g: &SuperFunction) -> SuperFunction {
        let mut out = self.t.mul(&g.d_t());
        out.add_scaled(&self.d1.mul(&g.d_theta(TH1)), &Scalar::one());
        out.add_scaled(&self.d2.mul(&g.d_theta(TH2)), &Scalar::one());
        out
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]∂t + [{}]∂1 + [{}]∂2", self.t, self.d1, self.d2)
    }
}

/// `[X, Y] = XY − (−1)^{p(X)p(Y)} YX`, read off on the coordinates.
pub fn vf_bracket(x: &SuperVectorField, y: &SuperVectorField) -> Result<SuperVectorField> {
    let sign = if x.parity()? && y.parity()? { Scalar::one() } else { -Scalar::one() };
    let comp = |fx: &SuperFunction, fy: &SuperFunction| {
        let mut r = x.apply(fy);
        r.add_scaled(&y.apply(fx), &sign);
        r
    };
    Ok(SuperVectorField { t: comp(&x.t, &y.t), d1: comp(&x.d1, &y.d1), d2: comp(&x.d2, &y.d2) })
}

/// `t · Div(X) + α f`, which vanishes exactly when `Div(t^α X) = 0`.
pub fn divergence(alpha: &Scalar, x: &SuperVectorField) -> SuperFunction {
    let mut div = x.t.d_t();
    for (f, bit) in [(&x.d1, TH1), (&x.d2, TH2)] {
        for (&(e, m), c) in &f.terms {
            let sign = if m.count_ones() % 2 == 1 { -Scalar::one() } else { Scalar::one() };
            div.add_scaled(&SuperFunction::monomial(e, m, c * &sign).d_theta(bit), &Scalar::one());
        }
    }
    let mut out = SuperFunction::monomial(1, 0, Scalar::one()).mul(&div);
    out.add_scaled(&x.t, alpha);
    out
}

fn basis_field(alpha: &Scalar, s: Symbol, n: i64) -> SuperVectorField {
    let m = SuperFunction::monomial;
    let one = Scalar::one;
    let na = Scalar::from_i64(n) + alpha;
    let mut v = SuperVectorField::zero();
    match s {
        Symbol::Lalpha => {
            let c = -(&na + &one()) * Scalar::frac(1, 2);
            v.t = m(n + 1, 0, -one());
            v.d1 = m(n, TH1, c.clone());
            v.d2 = m(n, TH2, c);
        }
        Symbol::E => v.d1 = m(n, TH2, one()),
        Symbol::H => {
            v.d1 = m(n, TH1, -one());
            v.d2 = m(n, TH2, one());
        }
        Symbol::F => v.d2 = m(n, TH1, one()),
        Symbol::Hf => {
            v.t = m(n, TH2, one());
            v.d1 = m(n - 1, TH1 | TH2, -na);
        }
        Symbol::P => v.d2 = m(n + 1, 0, -one()),
        Symbol::X => v.d1 = m(n + 1, 0, one()),
        Symbol::Y => {
            v.t = m(n, TH1, one());
            v.d2 = m(n - 1, TH1 | TH2, na);
        }
    }
    v
}

/// Realization of an element of S′(2,α); the central part is dropped.
pub fn vf_realize(alpha: &Scalar, a: &SCAElement) -> SuperVectorField {
    let mut v = SuperVectorField::zero();
    for (s, n, c) in a.terms() {
        v.add_scaled(&basis_field(alpha, s, n), c);
    }
    v
}

/// `−t^{−α} θ₁θ₂ ∂_t`, the outer derivation identified with 𝔽.
pub fn remark_43_field(alpha: &Scalar) -> Result<SuperVectorField> {
    let a = alpha
        .to_i64()
        .ok_or_else(|| Error::Unsupported(format!("t^(-α) is not a Laurent monomial for α = {alpha}")))?;
    Ok(SuperVectorField { t: SuperFunction::monomial(-a, TH1 | TH2, -Scalar::one()), ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grassmann_rules() {
        let t1 = SuperFunction::monomial(0, TH1, Scalar::one());
        let t2 = SuperFunction::monomial(0, TH2, Scalar::one());
        assert!(t1.mul(&t1).is_zero());
        let mut s = t1.mul(&t2);
        s.add_scaled(&t2.mul(&t1), &Scalar::one());
        assert!(s.is_zero());
    }

    #[test]
    fn e0_f0_bracket_is_h0() {
        let z = Scalar::zero();
        let e = vf_realize(&z, &SCAElement::basis(Symbol::E, 0));
        let f = vf_realize(&z, &SCAElement::basis(Symbol::F, 0));
        assert_eq!(vf_bracket(&e, &f).unwrap(), vf_realize(&z, &SCAElement::basis(Symbol::H, 0)));
    }

    #[test]
    fn frak_h_is_divergence_free() {
        for a in [Scalar::zero(), Scalar::frac(1, 2), Scalar::from_i64(-3)] {
            assert!(divergence(&a, &vf_realize(&a, &SCAElement::basis(Symbol::Hf, 1))).is_zero());
        }
    }
}
