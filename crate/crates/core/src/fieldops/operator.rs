//! Locally finite mode sums of products of generators and their exact
//! application to Fock vectors.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::fock::{normal_order_word, Family, FockMonomial, FockVector, GenKey};

/// Coefficient of a term as a function of its summation variables.
pub type CoeffFn = Arc<dyn Fn(&[i64]) -> Scalar + Send + Sync>;

/// A mode `constant + vars[0]·x₀ + vars[1]·x₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub vars: [i64; 2],
    pub constant: i64,
}

impl Affine {
    pub const fn var(v: usize, constant: i64) -> Self {
        let mut vars = [0, 0];
        vars[v] = 1;
        Affine { vars, constant }
    }

    pub const fn neg_var(v: usize, constant: i64) -> Self {
        let mut vars = [0, 0];
        vars[v] = -1;
        Affine { vars, constant }
    }

    pub const fn sum(constant: i64) -> Self {
        Affine { vars: [1, 1], constant }
    }

    pub fn eval(&self, x: &[i64; 2]) -> i64 {
        self.constant + self.vars[0] * x[0] + self.vars[1] * x[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub family: Family,
    pub comp: usize,
    pub mode: Affine,
}

impl Slot {
    pub fn new(family: Family, comp: usize, mode: Affine) -> Self {
        Slot { family, comp, mode }
    }
}

/// One summand shape `Σ_x coeff(x) · [:] slot₀(x) slot₁(x) … [:]`.
#[derive(Clone)]
pub struct TermShape {
    pub slots: SmallVec<[Slot; 3]>,
    pub nvars: usize,
    pub coeff: CoeffFn,
    pub normal: bool,
}

impl TermShape {
    pub fn new(slots: &[Slot], nvars: usize, coeff: CoeffFn, normal: bool) -> Self {
        TermShape { slots: slots.iter().copied().collect(), nvars, coeff, normal }
    }

    /// Energy change of every summand; constant in the summation variables
    /// for a well-formed term.
    fn energy_shift(&self) -> Result<i64> {
        let mut c = [0i64; 3];
        for s in &self.slots {
            let sg = if s.family.is_dual() { 1 } else { -1 };
            c[0] += sg * s.mode.constant;
            c[1] += sg * s.mode.vars[0];
            c[2] += sg * s.mode.vars[1];
        }
        if c[1] != 0 || c[2] != 0 {
            return Err(Error::Structural("term energy depends on the summation variable".into()));
        }
        Ok(c[0])
    }

    fn deg_shift(&self) -> (i64, i64) {
        let mut d = (0, 0);
        for s in &self.slots {
            match s.family {
                Family::Gamma => d.0 += 1,
                Family::Beta => d.0 -= 1,
                Family::Eps => d.1 += 1,
                Family::Tau => d.1 -= 1,
            }
        }
        d
    }

    /// Smallest `|constant|` among slots in which variable `v` appears
    /// alone; this anchors the summation window.
    fn anchor(&self, v: usize) -> Result<i64> {
        let other = 1 - v;
        self.slots
            .iter()
            .filter(|s| s.mode.vars[v].abs() == 1 && s.mode.vars[other] == 0)
            .map(|s| s.mode.constant.abs())
            .min()
            .ok_or_else(|| Error::Structural(format!("summation variable {v} never appears alone")))
    }

    fn parity(&self) -> bool {
        self.slots.iter().filter(|s| s.family.is_fermionic()).count() % 2 == 1
    }
}

/// A locally finite operator: a finite list of term shapes plus a scalar.
#[derive(Clone)]
pub struct FieldOperator {
    pub name: String,
    terms: Vec<TermShape>,
    anchors: Vec<[i64; 2]>,
    odd: bool,
    energy_shift: i64,
    deg_shift: (i64, i64),
    central: Scalar,
}

impl fmt::Debug for FieldOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldOperator")
            .field("name", &self.name)
            .field("terms", &self.terms.len())
            .field("odd", &self.odd)
            .field("energy_shift", &self.energy_shift)
            .field("deg_shift", &self.deg_shift)
            .field("central", &self.central)
            .finish()
    }
}

impl FieldOperator {
    /// The zero operator with the given declared grading data.
    pub fn zero(name: impl Into<String>, odd: bool, energy_shift: i64, deg_shift: (i64, i64)) -> Self {
        FieldOperator {
            name: name.into(),
            terms: Vec::new(),
            anchors: Vec::new(),
            odd,
            energy_shift,
            deg_shift,
            central: Scalar::zero(),
        }
    }

    /// Validates the terms against the declared parity and shifts.
    pub fn new(
        name: impl Into<String>,
        odd: bool,
        energy_shift: i64,
        deg_shift: (i64, i64),
        terms: Vec<TermShape>,
        central: Scalar,
    ) -> Result<Self> {
        let name = name.into();
        let mut anchors = Vec::with_capacity(terms.len());
        for t in &terms {
            if t.nvars == 0 || t.nvars > 2 {
                return Err(Error::Structural(format!("{name}: terms take one or two summation variables")));
            }
            if t.parity() != odd {
                return Err(Error::Structural(format!("{name}: term parity disagrees with operator parity")));
            }
            if t.energy_shift()? != energy_shift {
                return Err(Error::Structural(format!("{name}: term energy shift disagrees")));
            }
            if t.deg_shift() != deg_shift {
                return Err(Error::Structural(format!("{name}: term degree shift disagrees")));
            }
            let a0 = t.anchor(0)?;
            let a1 = if t.nvars == 2 { t.anchor(1)? } else { 0 };
            anchors.push([a0, a1]);
        }
        if !central.is_zero() && (odd || energy_shift != 0 || deg_shift != (0, 0)) {
            return Err(Error::Structural(format!("{name}: a scalar summand must have zero shifts")));
        }
        Ok(FieldOperator { name, terms, anchors, odd, energy_shift, deg_shift, central })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn energy_shift(&self) -> i64 {
        self.energy_shift
    }

    pub fn deg_shift(&self) -> (i64, i64) {
        self.deg_shift
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    pub fn terms(&self) -> &[TermShape] {
        &self.terms
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    /// `Σ s_k · op_k + central`; the parts must share parity and shifts.
    pub fn linear_combination(
        name: impl Into<String>,
        parts: &[(Scalar, &FieldOperator)],
        central: Scalar,
    ) -> Result<Self> {
        let name = name.into();
        let live: Vec<_> = parts.iter().filter(|(s, _)| !s.is_zero()).collect();
        let Some((_, first)) = live.first() else {
            return FieldOperator::new(name, false, 0, (0, 0), Vec::new(), central);
        };
        let mut terms = Vec::new();
        let mut c = central;
        for (s, op) in &live {
            if op.odd != first.odd || op.energy_shift != first.energy_shift || op.deg_shift != first.deg_shift {
                return Err(Error::Structural(format!("{name}: mixing inhomogeneous operators")));
            }
            c += &(s * &op.central);
            for t in &op.terms {
                let (s, f) = (s.clone(), t.coeff.clone());
                terms.push(TermShape { coeff: Arc::new(move |x| &s * &f(x)), ..t.clone() });
            }
        }
        FieldOperator::new(name, first.odd, first.energy_shift, first.deg_shift, terms, c)
    }

    pub fn scaled(&self, s: &Scalar) -> FieldOperator {
        FieldOperator::linear_combination(self.name.clone(), &[(s.clone(), self)], Scalar::zero())
            .expect("homogeneous")
    }

    /// Returns a copy whose term `index` has `delta` added to its
    /// coefficient function (used by mutation tests).
    pub fn with_perturbed_term(&self, index: usize, delta: Scalar) -> FieldOperator {
        let mut op = self.clone();
        if let Some(t) = op.terms.get_mut(index) {
            let f = t.coeff.clone();
            t.coeff = Arc::new(move |x| f(x) + &delta);
        }
        op
    }

    /// Summation half-width for a monomial of energy `e`.
    fn window(&self, term: usize, v: usize, e: i64, factor: i64) -> i64 {
        factor * (e + self.energy_shift.max(0) + self.anchors[term][v])
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        self.apply_with_window_factor(v, 1)
    }

    /// Applies the operator summing each variable over `factor` times the
    /// declared window. Factors above one only add summands that vanish.
    pub fn apply_with_window_factor(&self, v: &FockVector, factor: i64) -> FockVector {
        let mut out = FockVector::zero();
        for (mono, c) in v.iter() {
            self.apply_monomial_into(mono, c, factor, &mut out);
        }
        out
    }

    pub fn apply_monomial(&self, mono: &FockMonomial) -> FockVector {
        let mut out = FockVector::zero();
        self.apply_monomial_into(mono, &Scalar::one(), 1, &mut out);
        out
    }

    fn apply_monomial_into(&self, mono: &FockMonomial, c: &Scalar, factor: i64, out: &mut FockVector) {
        if !self.central.is_zero() {
            out.add_term(mono.clone(), c * &self.central);
        }
        let e = mono.energy();
        if e + self.energy_shift < 0 {
            return;
        }
        for (ti, term) in self.terms.iter().enumerate() {
            let w0 = self.window(ti, 0, e, factor);
            let w1 = if term.nvars == 2 { self.window(ti, 1, e, factor) } else { 0 };
            let n = term.slots.len();
            let mut word = [GenKey::new(Family::Beta, 0, 0); 3];
            for x0 in -w0..=w0 {
                for x1 in -w1..=w1 {
                    let x = [x0, x1];
                    for (k, s) in term.slots.iter().enumerate() {
                        word[k] = GenKey::new(s.family, s.comp, s.mode.eval(&x));
                    }
                    let w = &mut word[..n];
                    let sign = if term.normal { normal_order_word(w) } else { 1 };
                    let Some((r, f)) = mono.apply_word(w) else { continue };
                    let k = (term.coeff)(&x[..term.nvars]);
                    if k.is_zero() {
                        continue;
                    }
                    out.add_term(r, c * &k * Scalar::from_i64(f * sign));
                }
            }
        }
    }
}

/// Anything that acts linearly on Fock vectors with a definite parity.
pub trait LinearOp: Send + Sync {
    fn apply(&self, v: &FockVector) -> FockVector;
    fn is_odd(&self) -> bool;
}

impl LinearOp for FieldOperator {
    fn apply(&self, v: &FockVector) -> FockVector {
        FieldOperator::apply(self, v)
    }

    fn is_odd(&self) -> bool {
        self.odd
    }
}

/// `[A, B] = AB − (−1)^{p(A)p(B)} BA`, evaluated pointwise.
pub struct SuperCommutator<'a> {
    pub a: &'a dyn LinearOp,
    pub b: &'a dyn LinearOp,
}

pub fn super_commutator<'a>(a: &'a dyn LinearOp, b: &'a dyn LinearOp) -> SuperCommutator<'a> {
    SuperCommutator { a, b }
}

impl LinearOp for SuperCommutator<'_> {
    fn apply(&self, v: &FockVector) -> FockVector {
        let mut ab = self.a.apply(&self.b.apply(v));
        let ba = self.b.apply(&self.a.apply(v));
        if self.a.is_odd() && self.b.is_odd() {
            ab.add(&ba);
        } else {
            ab.sub(&ba);
        }
        ab
    }

    fn is_odd(&self) -> bool {
        self.a.is_odd() != self.b.is_odd()
    }
}

/// `A ∘ B`.
pub struct Composite<'a> {
    pub a: &'a dyn LinearOp,
    pub b: &'a dyn LinearOp,
}

impl LinearOp for Composite<'_> {
    fn apply(&self, v: &FockVector) -> FockVector {
        self.a.apply(&self.b.apply(v))
    }

    fn is_odd(&self) -> bool {
        self.a.is_odd() != self.b.is_odd()
    }
}

/// A formal combination of operators plus a scalar summand.
#[derive(Clone, Debug)]
pub struct OperatorAlgebraElement {
    pub parts: Vec<(Scalar, FieldOperator)>,
    pub central: Scalar,
}

impl OperatorAlgebraElement {
    pub fn scalar(c: Scalar) -> Self {
        OperatorAlgebraElement { parts: Vec::new(), central: c }
    }

    pub fn single(op: FieldOperator) -> Self {
        OperatorAlgebraElement { parts: vec![(Scalar::one(), op)], central: Scalar::zero() }
    }

    pub fn push(&mut self, s: Scalar, op: FieldOperator) {
        self.parts.push((s, op));
    }

    pub fn to_field_operator(&self, name: &str) -> Result<FieldOperator> {
        let parts: Vec<_> = self.parts.iter().map(|(s, o)| (s.clone(), o)).collect();
        FieldOperator::linear_combination(name, &parts, self.central.clone())
    }
}

impl LinearOp for OperatorAlgebraElement {
    fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = v.scaled(&self.central);
        for (s, op) in &self.parts {
            out.add_scaled(&op.apply(v), s);
        }
        out
    }

    fn is_odd(&self) -> bool {
        self.parts.first().is_some_and(|(_, o)| o.is_odd())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> CoeffFn {
        Arc::new(|_| Scalar::one())
    }

    #[test]
    fn zero_operator_gives_zero() {
        let z = FieldOperator::zero("0", false, 0, (0, 0));
        assert!(z.apply(&FockVector::vacuum()).is_zero());
    }

    #[test]
    fn inconsistent_shapes_are_rejected() {
        // γ(u'_m) β(u_{m+1}) has energy shift m + (−m − 1) = −1, not 0
        let t = TermShape::new(
            &[Slot::new(Family::Gamma, 0, Affine::var(0, 0)), Slot::new(Family::Beta, 0, Affine::var(0, 1))],
            1,
            one(),
            true,
        );
        assert!(FieldOperator::new("bad", false, 0, (0, 0), vec![t.clone()], Scalar::zero()).is_err());
        assert!(FieldOperator::new("ok", false, -1, (0, 0), vec![t], Scalar::zero()).is_ok());
        // energy depending on the variable: γ(m) γ(m)
        let t = TermShape::new(
            &[Slot::new(Family::Gamma, 0, Affine::var(0, 0)), Slot::new(Family::Gamma, 0, Affine::var(0, 0))],
            1,
            one(),
            true,
        );
        assert!(FieldOperator::new("bad", false, 0, (2, 0), vec![t], Scalar::zero()).is_err());
    }

    #[test]
    fn scalar_summand_acts_as_multiple() {
        let op = FieldOperator::new("c", false, 0, (0, 0), Vec::new(), Scalar::frac(3, 2)).unwrap();
        let v = FockVector::basis("g(1,+1) |".parse().unwrap());
        assert_eq!(op.apply(&v), v.scaled(&Scalar::frac(3, 2)));
    }
}
