//! Quantified relation checks over finite boxes of basis monomials.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::algebra::{GradedBackend, Scalar};
use crate::error::{Error, Result};
use crate::fieldops::{
    build_differential_d, build_koszul_h, build_s2alpha_family, build_sl2_ehf, build_theta_adjoint, FieldOperator,
    GeneratorOp, LinearOp, OperatorAlgebraElement,
};
use crate::fock::{Family, FockMonomial, FockVector, GenKey};
use crate::sca::{
    bracket, derext_action, derivation_sweep, divergence, n2_bracket, remark_43_field, spectral_flow, vf_bracket,
    vf_realize, SCAElement, Sl2Symbol, Symbol,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A replayable mismatch: the relation, the input monomial and both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub relation: String,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    #[serde(rename = "box")]
    pub box_desc: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub relations: usize,
    pub states: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn new(check: &str, params: &BTreeMap<String, String>, box_desc: &str) -> Self {
        RelationReport {
            check: check.to_string(),
            params: params.clone(),
            box_desc: box_desc.to_string(),
            status: Status::Pass,
            witness: None,
            relations: 0,
            states: 0,
            notes: Vec::new(),
            millis: None,
        }
    }

    pub(crate) fn conclude(mut self, witness: Option<Witness>, start: Instant, timing: bool) -> Self {
        self.status = if witness.is_some() { Status::Fail } else { Status::Pass };
        self.witness = witness;
        if timing {
            self.millis = Some(start.elapsed().as_millis() as u64);
        }
        self
    }
}

/// Shared knobs of every sweep.
#[derive(Clone, Debug)]
pub struct SweepContext {
    pub params: BTreeMap<String, String>,
    pub box_desc: String,
    pub timing: bool,
}

impl SweepContext {
    pub fn new(box_desc: impl Into<String>) -> Self {
        SweepContext { params: BTreeMap::new(), box_desc: box_desc.into(), timing: false }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }
}

/// First failing state in box order, whatever the scheduling.
fn sweep<F>(states: &[FockMonomial], f: F) -> Option<Witness>
where
    F: Fn(&FockMonomial) -> Option<Witness> + Sync,
{
    states.par_iter().find_map_first(&f)
}

fn mismatch(relation: String, m: &FockMonomial, lhs: &FockVector, rhs: &FockVector) -> Option<Witness> {
    let mut d = lhs.clone();
    d.sub(rhs);
    if d.is_zero() {
        None
    } else {
        Some(Witness { relation, monomial: m.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string() })
    }
}

fn sign_of(a: bool, b: bool) -> Scalar {
    if a && b {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// `[A, B] v = A(Bv) − (−1)^{p(A)p(B)} B(Av)`.
pub fn commutator_on(a: &dyn LinearOp, b: &dyn LinearOp, v: &FockVector) -> FockVector {
    let mut r = a.apply(&b.apply(v));
    let ba = b.apply(&a.apply(v));
    r.add_scaled(&ba, &-sign_of(a.is_odd(), b.is_odd()));
    r
}

/// Builds θ of an abstract basis symbol.
pub type Builder<'a> = dyn Fn(Symbol, i64) -> Result<FieldOperator> + Sync + 'a;
/// The abstract bracket of two basis elements, central part in units of 𝒞.
pub type Table<'a> = dyn Fn(&SCAElement, &SCAElement) -> Result<SCAElement> + Sync + 'a;

/// A representation claim: θ of `symbols` in `window` satisfies `table`
/// with 𝒞 acting as `central_value`.
pub struct RepresentationCheck<'a> {
    pub check: String,
    pub symbols: Vec<Symbol>,
    pub window: i64,
    pub table: &'a Table<'a>,
    pub builder: &'a Builder<'a>,
    pub central_value: Scalar,
}

struct Memo<'o> {
    ops: &'o [FieldOperator],
    cache: FxHashMap<(usize, FockMonomial), FockVector>,
}

impl<'o> Memo<'o> {
    fn apply(&mut self, op: usize, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.iter() {
            let image = self
                .cache
                .entry((op, m.clone()))
                .or_insert_with(|| self.ops[op].apply_monomial(m));
            out.add_scaled(image, c);
        }
        out
    }
}

/// `[θa, θb]·v = θ([a,b])·v + c(a,b)·v` for every unordered pair of window
/// symbols and every state.
pub fn check_representation(
    spec: &RepresentationCheck<'_>,
    states: &[FockMonomial],
    ctx: &SweepContext,
) -> Result<RelationReport> {
    let start = Instant::now();
    let mut keys: Vec<(Symbol, i64)> = Vec::new();
    for &s in &spec.symbols {
        for n in -spec.window..=spec.window {
            keys.push((s, n));
        }
    }
    let mut index: BTreeMap<(Symbol, i64), usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut pairs = Vec::new();
    let n_window = keys.len();
    for i in 0..n_window {
        for j in i..n_window {
            let a = SCAElement::basis(keys[i].0, keys[i].1);
            let b = SCAElement::basis(keys[j].0, keys[j].1);
            let r = (spec.table)(&a, &b)?;
            let mut rhs = Vec::new();
            for (s, n, c) in r.terms() {
                let next = index.len();
                let k = *index.entry((s, n)).or_insert(next);
                if k == next {
                    keys.push((s, n));
                }
                rhs.push((k, c.clone()));
            }
            pairs.push((i, j, rhs, r.central() * &spec.central_value));
        }
    }
    let ops: Vec<FieldOperator> = keys.iter().map(|&(s, n)| (spec.builder)(s, n)).collect::<Result<_>>()?;
    let witness = sweep(states, |m| {
        let v = FockVector::basis(m.clone());
        let mut memo = Memo { ops: &ops, cache: FxHashMap::default() };
        let first: Vec<FockVector> = (0..ops.len()).map(|k| ops[k].apply(&v)).collect();
        for (i, j, rhs_terms, central) in &pairs {
            let (i, j) = (*i, *j);
            let mut lhs = memo.apply(i, &first[j]);
            let back = memo.apply(j, &first[i]);
            lhs.add_scaled(&back, &-sign_of(ops[i].is_odd(), ops[j].is_odd()));
            let mut rhs = v.scaled(central);
            for (k, c) in rhs_terms {
                rhs.add_scaled(&first[*k], c);
            }
            let rel = || format!("[{}[{}], {}[{}]]", keys[i].0, keys[i].1, keys[j].0, keys[j].1);
            if let Some(w) = mismatch(rel(), m, &lhs, &rhs) {
                return Some(w);
            }
        }
        None
    });
    let mut rep = RelationReport::new(&spec.check, &ctx.params, &ctx.box_desc);
    rep.relations = n_window * (n_window + 1) / 2;
    rep.states = states.len();
    rep.notes.push(format!("central value {}", spec.central_value));
    Ok(rep.conclude(witness, start, ctx.timing))
}

/// Reads `3·k_n/n` off `[H_n, H_{−n}]·vac = k_n·vac` for `n = 1, 2`.
pub fn extract_central_charge(h: &dyn Fn(i64) -> Result<FieldOperator>, vacuum: &FockMonomial) -> Result<Scalar> {
    let vac = FockVector::basis(vacuum.clone());
    let mut charges = Vec::new();
    for n in [1, 2] {
        let w = commutator_on(&h(n)?, &h(-n)?, &vac);
        let k = w.coeff(vacuum);
        let mut rest = w.clone();
        rest.add_term(vacuum.clone(), -k.clone());
        if !rest.is_zero() {
            return Err(Error::Structural(format!("[H_{n}, H_-{n}] does not act on the vacuum as a scalar")));
        }
        charges.push(k * Scalar::frac(3, n));
    }
    if charges[0] != charges[1] {
        return Err(Error::Structural(format!("central charge fits disagree: {} vs {}", charges[0], charges[1])));
    }
    Ok(charges.swap_remove(0))
}

/// Differential, Koszul operator and θ of the x-window on one backend.
struct Chain {
    d: FieldOperator,
    h: FieldOperator,
    theta: Vec<((usize, i64), FieldOperator)>,
}

fn chain_ops(backend: &GradedBackend, window: i64) -> Result<Chain> {
    let d = build_differential_d(backend)?.d;
    let h = build_koszul_h(backend);
    let mut theta = Vec::new();
    for j in 0..backend.acting_dim() {
        for n in -window..=window {
            theta.push(((j, n), build_theta_adjoint(backend, j, n)?));
        }
    }
    Ok(Chain { d, h, theta })
}

/// d² = 0, 𝔥² = 0, d𝔥 + 𝔥d = 0, (d+𝔥)² = 0, dτ(x) + τ(x)d = θ(x) and
/// [d, θ(x)] = 0, one report per identity.
pub fn check_chain_identities(
    backend: &GradedBackend,
    states: &[FockMonomial],
    window: i64,
    ctx: &SweepContext,
) -> Result<Vec<RelationReport>> {
    let ch = chain_ops(backend, window)?;
    let ctx = ctx.clone().param("backend", backend);
    let mut out = Vec::new();
    let zero = FockVector::zero();
    let mut dh = OperatorAlgebraElement::single(ch.d.clone());
    dh.push(Scalar::one(), ch.h.clone());
    // `None` squares the first operator; `Some(b)` takes the supercommutator
    let identities: [(&str, &dyn LinearOp, Option<&dyn LinearOp>); 4] =
        [("d^2", &ch.d, None), ("koszul^2", &ch.h, None), ("[d,koszul]", &ch.d, Some(&ch.h)), ("(d+koszul)^2", &dh, None)];
    for (name, a, b) in identities {
        let start = Instant::now();
        let w = sweep(states, |m| {
            let v = FockVector::basis(m.clone());
            let lhs = match b {
                None => a.apply(&a.apply(&v)),
                Some(b) => commutator_on(a, b, &v),
            };
            mismatch(name.to_string(), m, &lhs, &zero)
        });
        let mut rep = RelationReport::new(name, &ctx.params, &ctx.box_desc);
        rep.relations = 1;
        rep.states = states.len();
        out.push(rep.conclude(w, start, ctx.timing));
    }
    let start = Instant::now();
    let w = sweep(states, |m| {
        let v = FockVector::basis(m.clone());
        let dv = ch.d.apply(&v);
        for ((j, n), th) in &ch.theta {
            let tau = GeneratorOp(GenKey::new(Family::Tau, *j, *n));
            let lhs = commutator_on(&ch.d, &tau, &v);
            if let Some(w) = mismatch(format!("[d, tau({},{})]", j + 1, n), m, &lhs, &th.apply(&v)) {
                return Some(w);
            }
            let mut c = ch.d.apply(&th.apply(&v));
            c.sub(&th.apply(&dv));
            if let Some(w) = mismatch(format!("[d, theta({},{})]", j + 1, n), m, &c, &zero) {
                return Some(w);
            }
        }
        None
    });
    let mut rep = RelationReport::new("d-tau-theta", &ctx.params, &ctx.box_desc);
    rep.relations = 2 * ch.theta.len();
    rep.states = states.len();
    out.push(rep.conclude(w, start, ctx.timing));
    Ok(out)
}

/// `[θ(s_n), d]·v = 0` for every S′(2,0) basis symbol of the window.
pub fn check_d_compatibility(
    backend: &GradedBackend,
    states: &[FockMonomial],
    window: i64,
    ctx: &SweepContext,
) -> Result<RelationReport> {
    let start = Instant::now();
    let d = build_differential_d(backend)?.d;
    let dim = backend.module_dim();
    let zero = Scalar::zero();
    let mut ops = Vec::new();
    for s in Symbol::ALL {
        for n in -window..=window {
            ops.push(((s, n), build_s2alpha_family(dim, &zero, s, n)?));
        }
    }
    let w = sweep(states, |m| {
        let v = FockVector::basis(m.clone());
        let dv = d.apply(&v);
        for ((s, n), op) in &ops {
            let mut lhs = op.apply(&dv);
            let back = d.apply(&op.apply(&v));
            lhs.add_scaled(&back, &-sign_of(op.is_odd(), true));
            if let Some(w) = mismatch(format!("[{s}[{n}], d]"), m, &lhs, &FockVector::zero()) {
                return Some(w);
            }
        }
        None
    });
    let mut rep = RelationReport::new("d-compatibility", &ctx.params, &ctx.box_desc);
    rep.relations = ops.len();
    rep.states = states.len();
    Ok(rep.conclude(w, start, ctx.timing))
}

/// One exterior-derivation relation `[D, θ(s_k)] = θ(D·s_k)` ready to apply.
pub struct DerextRelation {
    pub name: String,
    pub derivation: FieldOperator,
    pub op: FieldOperator,
    pub image: Vec<(Scalar, FieldOperator)>,
}

impl DerextRelation {
    /// `[D, θ(s)]·v − θ(D s)·v`.
    pub fn discrepancy(&self, v: &FockVector) -> FockVector {
        let mut r = commutator_on(&self.derivation, &self.op, v);
        for (c, op) in &self.image {
            r.add_scaled(&op.apply(v), &-c.clone());
        }
        r
    }
}

/// All relations between 𝔼, ℍ, 𝔽 and the S′(2,0) symbols of the window.
pub fn derext_relations(backend: &GradedBackend, window: i64) -> Result<Vec<DerextRelation>> {
    let dim = backend.module_dim();
    let zero = Scalar::zero();
    let mut out = Vec::new();
    for d in Sl2Symbol::ALL {
        let dop = build_sl2_ehf(backend, d)?;
        for s in Symbol::ALL {
            for k in -window..=window {
                let image = derext_action(&zero, d, &SCAElement::basis(s, k))?;
                let image = image
                    .terms()
                    .map(|(t, m, c)| Ok((c.clone(), build_s2alpha_family(dim, &zero, t, m)?)))
                    .collect::<Result<Vec<_>>>()?;
                out.push(DerextRelation {
                    name: format!("[{d}, {s}[{k}]]"),
                    derivation: dop.clone(),
                    op: build_s2alpha_family(dim, &zero, s, k)?,
                    image,
                });
            }
        }
    }
    Ok(out)
}

/// Every discrepancy operator annihilates the relative states; the first
/// relation that does not kill `control` is recorded as a negative control.
pub fn check_relative_derext(
    backend: &GradedBackend,
    states: &[FockMonomial],
    window: i64,
    control: &[FockMonomial],
    ctx: &SweepContext,
) -> Result<RelationReport> {
    let start = Instant::now();
    let rels = derext_relations(backend, window)?;
    let zero = FockVector::zero();
    let w = sweep(states, |m| {
        let v = FockVector::basis(m.clone());
        rels.iter().find_map(|r| mismatch(r.name.clone(), m, &r.discrepancy(&v), &zero))
    });
    let mut rep = RelationReport::new("relative-derext", &ctx.params, &ctx.box_desc);
    rep.relations = rels.len();
    rep.states = states.len();
    let hit = control.iter().find_map(|m| {
        let v = FockVector::basis(m.clone());
        rels.iter().find_map(|r| {
            let d = r.discrepancy(&v);
            (!d.is_zero()).then(|| format!("negative control: {} on {} gives {}", r.name, m, d))
        })
    });
    let control_ok = hit.is_some();
    rep.notes.push(hit.unwrap_or_else(|| "negative control: every discrepancy vanished".into()));
    let rep = rep.conclude(w, start, ctx.timing);
    Ok(if control_ok { rep } else { RelationReport { status: Status::Fail, ..rep } })
}

/// `[E, F] = H`, `[H, E] = 2E`, `[H, F] = −2F` for the exterior triple.
pub fn check_sl2_triple(backend: &GradedBackend, states: &[FockMonomial], ctx: &SweepContext) -> Result<RelationReport> {
    let start = Instant::now();
    let e = build_sl2_ehf(backend, Sl2Symbol::EE)?;
    let h = build_sl2_ehf(backend, Sl2Symbol::HH)?;
    let f = build_sl2_ehf(backend, Sl2Symbol::FF)?;
    let rels: [(&str, &FieldOperator, &FieldOperator, &FieldOperator, i64); 3] =
        [("[EE,FF]=HH", &e, &f, &h, 1), ("[HH,EE]=2EE", &h, &e, &e, 2), ("[HH,FF]=-2FF", &h, &f, &f, -2)];
    let w = sweep(states, |m| {
        let v = FockVector::basis(m.clone());
        rels.iter().find_map(|(name, a, b, c, k)| {
            mismatch(name.to_string(), m, &commutator_on(*a, *b, &v), &c.apply(&v).scaled(&Scalar::from_i64(*k)))
        })
    });
    let mut rep = RelationReport::new("sl2-triple", &ctx.params, &ctx.box_desc);
    rep.relations = 3;
    rep.states = states.len();
    Ok(rep.conclude(w, start, ctx.timing))
}

/// The S′(2,α) table as a [`Table`].
pub fn s2alpha_table(alpha: Scalar) -> impl Fn(&SCAElement, &SCAElement) -> Result<SCAElement> + Sync {
    move |a, b| Ok(bracket(&alpha, a, b))
}

fn algebra_witness(relation: String, lhs: impl ToString, rhs: impl ToString) -> Witness {
    Witness { relation, monomial: String::new(), lhs: lhs.to_string(), rhs: rhs.to_string() }
}

fn window_basis(symbols: &[Symbol], window: i64) -> Vec<(Symbol, i64)> {
    symbols.iter().flat_map(|&s| (-window..=window).map(move |n| (s, n))).collect()
}

fn parity_sign(a: Symbol, b: Symbol) -> Scalar {
    sign_of(a.is_odd(), b.is_odd())
}

/// The typed table against brackets of super vector fields, super-Jacobi
/// with the cocycle, the outer 𝔽 field (integral α only) and the
/// derivation property of 𝔼, ℍ, 𝔽.
pub fn check_sca_tables(alpha: &Scalar, window: i64, ctx: &SweepContext) -> Result<Vec<RelationReport>> {
    let ctx = ctx.clone().param("alpha", alpha);
    let basis = window_basis(&Symbol::ALL, window);
    let fields: Vec<_> = basis.iter().map(|&(s, n)| vf_realize(alpha, &SCAElement::basis(s, n))).collect();
    let mut out = Vec::new();

    let start = Instant::now();
    // each realization is a nonzero divergence-free field
    let mut w = basis.iter().zip(&fields).find_map(|(&(s, n), f)| {
        if f.is_zero() {
            Some(algebra_witness(format!("realize {s}[{n}]"), f, "nonzero"))
        } else {
            let div = divergence(alpha, f);
            (!div.is_zero()).then(|| algebra_witness(format!("divergence of {s}[{n}]"), div, 0))
        }
    });
    if w.is_none() {
        let nb = basis.len();
        let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|i| (0..nb).map(move |j| (i, j))).collect();
        w = pairs.par_iter().find_map_first(|&(i, j)| {
            let ((s, n), (t, k)) = (basis[i], basis[j]);
            let table = bracket(alpha, &SCAElement::basis(s, n), &SCAElement::basis(t, k));
            let rhs = vf_realize(alpha, &table);
            match vf_bracket(&fields[i], &fields[j]) {
                Ok(lhs) if lhs == rhs => None,
                Ok(lhs) => Some(algebra_witness(format!("[{s}[{n}], {t}[{k}]]"), lhs, rhs)),
                Err(e) => Some(algebra_witness(format!("[{s}[{n}], {t}[{k}]]"), e, rhs)),
            }
        });
    }
    let mut rep = RelationReport::new("vf-oracle", &ctx.params, &format!("|n|<={window}"));
    rep.relations = basis.len() * basis.len();
    out.push(rep.conclude(w, start, ctx.timing));

    let start = Instant::now();
    let elems: Vec<SCAElement> = basis.iter().map(|&(s, n)| SCAElement::basis(s, n)).collect();
    let nb = basis.len();
    let triples: Vec<(usize, usize, usize)> = (0..nb)
        .flat_map(|i| (i..nb).flat_map(move |j| (j..nb).map(move |k| (i, j, k))))
        .collect();
    let w = triples.par_iter().find_map_first(|&(i, j, k)| {
        let (a, b, c) = (&elems[i], &elems[j], &elems[k]);
        let (pa, pb, pc) = (basis[i].0, basis[j].0, basis[k].0);
        let mut sum = bracket(alpha, a, &bracket(alpha, b, c)).scaled(&parity_sign(pa, pc));
        sum.add_scaled(&bracket(alpha, b, &bracket(alpha, c, a)), &parity_sign(pb, pa));
        sum.add_scaled(&bracket(alpha, c, &bracket(alpha, a, b)), &parity_sign(pc, pb));
        (!sum.is_zero()).then(|| {
            let name = format!("jacobi({}[{}], {}[{}], {}[{}])", pa, basis[i].1, pb, basis[j].1, pc, basis[k].1);
            algebra_witness(name, sum, 0)
        })
    });
    let mut rep = RelationReport::new("super-jacobi", &ctx.params, &format!("|n|<={window}"));
    rep.relations = triples.len();
    out.push(rep.conclude(w, start, ctx.timing));

    if let Ok(ff) = remark_43_field(alpha) {
        let start = Instant::now();
        let w = basis.iter().zip(&fields).find_map(|(&(s, n), f)| {
            let image = match derext_action(alpha, Sl2Symbol::FF, &SCAElement::basis(s, n)) {
                Ok(x) => vf_realize(alpha, &x),
                Err(e) => return Some(algebra_witness(format!("FF on {s}[{n}]"), e, "")),
            };
            match vf_bracket(&ff, f) {
                Ok(lhs) if lhs == image => None,
                Ok(lhs) => Some(algebra_witness(format!("[outer FF, {s}[{n}]]"), lhs, image)),
                Err(e) => Some(algebra_witness(format!("[outer FF, {s}[{n}]]"), e, image)),
            }
        });
        let mut rep = RelationReport::new("outer-f-field", &ctx.params, &format!("|n|<={window}"));
        rep.relations = basis.len();
        out.push(rep.conclude(w, start, ctx.timing));
    }

    let start = Instant::now();
    let mut w = None;
    let mut relations = 0;
    for d in Sl2Symbol::ALL {
        match derivation_sweep(alpha, d, window) {
            Ok(hit) => {
                relations += basis.len() * basis.len();
                if let Some(((s, n), (t, k))) = hit {
                    w = Some(algebra_witness(format!("{d}[{s}[{n}], {t}[{k}]]"), "lhs", "rhs"));
                    break;
                }
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut rep = RelationReport::new("derivations", &ctx.params, &format!("|n|<={window}"));
    rep.relations = relations;
    out.push(rep.conclude(w, start, ctx.timing));
    Ok(out)
}

/// The spectral flow is a bracket homomorphism onto the N=2 algebra.
pub fn check_spectral_flow(alpha: &Scalar, window: i64, ctx: &SweepContext) -> Result<RelationReport> {
    let start = Instant::now();
    let n2: Vec<Symbol> = Symbol::ALL.into_iter().filter(|s| s.in_n2()).collect();
    let basis = window_basis(&n2, window);
    let mut w = None;
    'outer: for &(s, n) in &basis {
        for &(t, k) in &basis {
            let (a, b) = (SCAElement::basis(s, n), SCAElement::basis(t, k));
            let lhs = spectral_flow(alpha, &bracket(alpha, &a, &b))?;
            let rhs = n2_bracket(&spectral_flow(alpha, &a)?, &spectral_flow(alpha, &b)?)?;
            if lhs != rhs {
                w = Some(algebra_witness(format!("phi[{s}[{n}], {t}[{k}]]"), lhs, rhs));
                break 'outer;
            }
        }
    }
    let mut rep = RelationReport::new("spectral-flow", &ctx.clone().param("alpha", alpha).params, &format!("|n|<={window}"));
    rep.relations = basis.len() * basis.len();
    Ok(rep.conclude(w, start, ctx.timing))
}
