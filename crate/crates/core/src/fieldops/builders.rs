//! Constructors for every operator family acting on the Weil complex.

use std::sync::Arc;

use crate::algebra::{GradedBackend, Scalar};
use crate::error::{Error, Result};
use crate::fock::Family::{self, Beta, Eps, Gamma, Tau};
use crate::fock::{FockVector, GenKey};
use crate::sca::{Sl2Symbol, Symbol};

use super::operator::{Affine, CoeffFn, FieldOperator, LinearOp, Slot, TermShape};

fn constant(c: Scalar) -> CoeffFn {
    Arc::new(move |_| c.clone())
}

fn slot(f: Family, comp: usize, mode: Affine) -> Slot {
    Slot::new(f, comp, mode)
}

/// `Σ_u Σ_m coeff(m) · [:] A(u_{m+a}) B(u_{m+b}) [:]` over `dim` components.
fn diagonal(
    dim: usize,
    (fa, a): (Family, i64),
    (fb, b): (Family, i64),
    coeff: &CoeffFn,
    normal: bool,
) -> Vec<TermShape> {
    (0..dim)
        .map(|u| {
            TermShape::new(
                &[slot(fa, u, Affine::var(0, a)), slot(fb, u, Affine::var(0, b))],
                1,
                coeff.clone(),
                normal,
            )
        })
        .collect()
}

/// Coefficient `(−m + μ − nλ + λ)` of the Witt operators, `m` being the
/// mode of the dual slot.
fn witt_coeff(n: i64, lambda: &Scalar, mu: &Scalar) -> CoeffFn {
    let base = mu - &(lambda * &Scalar::from_i64(n - 1));
    Arc::new(move |x| &base - &Scalar::from_i64(x[0]))
}

/// `Σ_u Σ_m (−m + μ − nλ + λ)(:τ(u_{m+n})ε(u'_m): + :β(u_{m+n})γ(u'_m):)`.
pub fn witt_operator(dim: usize, n: i64, lambda: &Scalar, mu: &Scalar) -> FieldOperator {
    let c = witt_coeff(n, lambda, mu);
    let mut terms = diagonal(dim, (Tau, n), (Eps, 0), &c, true);
    terms.extend(diagonal(dim, (Beta, n), (Gamma, 0), &c, true));
    FieldOperator::new(format!("L[{n}]"), false, -n, (0, 0), terms, Scalar::zero()).expect("well-formed")
}

/// θ(L_n) on the Weil complex of the Witt-module 𝔽_{λ,μ}.
pub fn build_witt_rep(backend: &GradedBackend, n: i64) -> Result<FieldOperator> {
    match backend {
        GradedBackend::Fmu { lambda, mu } => Ok(witt_operator(1, n, lambda, mu)),
        other => Err(Error::Unsupported(format!("{other} is not a Witt-module backend"))),
    }
}

/// θ(x) = ρ(x) + π(x) for the `j`-th acting generator at mode `n`.
pub fn build_theta_adjoint(backend: &GradedBackend, j: usize, n: i64) -> Result<FieldOperator> {
    if j >= backend.acting_dim() {
        return Err(Error::Structural(format!("component {j} out of range")));
    }
    let name = format!("theta[{}:{n}]", j + 1);
    let dim = backend.module_dim();
    let mut terms = Vec::new();
    match backend {
        GradedBackend::Fmu { .. } => {
            return Err(Error::Unsupported("fmu backends use build_witt_rep".into()));
        }
        GradedBackend::Witt => {
            return Ok(witt_operator(1, n, &Scalar::from_i64(-1), &Scalar::one()).renamed(name));
        }
        GradedBackend::Loop(_) | GradedBackend::LoopModule { .. } => {
            for e in 0..dim {
                for (k, c) in backend.act(j, n, e, 0) {
                    let c = constant(c);
                    for (fa, fb) in [(Tau, Eps), (Beta, Gamma)] {
                        terms.push(TermShape::new(
                            &[slot(fa, k, Affine::var(0, n)), slot(fb, e, Affine::var(0, 0))],
                            1,
                            c.clone(),
                            true,
                        ));
                    }
                }
            }
        }
    }
    FieldOperator::new(name, false, -n, (0, 0), terms, Scalar::zero())
}

/// The differential `d = d⁽¹⁾ + d⁽²⁾` split into its cubic-fermionic and
/// mixed summands.
#[derive(Clone, Debug)]
pub struct Differential {
    pub d: FieldOperator,
    pub cubic: FieldOperator,
    pub mixed: FieldOperator,
}

/// `d⁽¹⁾ = ½ Σ :τ([u_i, v_j]) ε(v'_j) ε(u'_i):`,
/// `d⁽²⁾ = Σ :β([u_i, v_j]) γ(v'_j) ε(u'_i):`.
pub fn build_differential_d(backend: &GradedBackend) -> Result<Differential> {
    let mut cubic = Vec::new();
    let mut mixed = Vec::new();
    let half = Scalar::frac(1, 2);
    // variable 0 is i (mode of u), variable 1 is j (mode of v)
    let mut push = |u: usize, v: usize, w: usize, c: CoeffFn, c_half: CoeffFn| {
        let e_u = slot(Eps, u, Affine::var(0, 0));
        cubic.push(TermShape::new(
            &[slot(Tau, w, Affine::sum(0)), slot(Eps, v, Affine::var(1, 0)), e_u],
            2,
            c_half,
            true,
        ));
        mixed.push(TermShape::new(
            &[slot(Beta, w, Affine::sum(0)), slot(Gamma, v, Affine::var(1, 0)), e_u],
            2,
            c,
            true,
        ));
    };
    match backend {
        GradedBackend::Loop(a) => {
            for u in 0..a.dim() {
                for v in 0..a.dim() {
                    for (w, c) in a.bracket_basis(u, v) {
                        push(u, v, w, constant(c.clone()), constant(&c * &half));
                    }
                }
            }
        }
        GradedBackend::Witt => {
            let c: CoeffFn = Arc::new(|x| Scalar::from_i64(x[0] - x[1]));
            let h: CoeffFn = Arc::new(|x| Scalar::frac(x[0] - x[1], 2));
            push(0, 0, 0, c, h);
        }
        other => {
            return Err(Error::Unsupported(format!("{other} carries no Lie bracket, so no differential")));
        }
    }
    let cubic = FieldOperator::new("d(1)", true, 0, (0, 1), cubic, Scalar::zero())?;
    let mixed = FieldOperator::new("d(2)", true, 0, (0, 1), mixed, Scalar::zero())?;
    let one = Scalar::one();
    let d = FieldOperator::linear_combination("d", &[(one.clone(), &cubic), (one, &mixed)], Scalar::zero())?;
    Ok(Differential { d, cubic, mixed })
}

/// `𝔥 = Σ_i γ(e'_i) τ(e_i)` over the whole graded basis.
pub fn build_koszul_h(backend: &GradedBackend) -> FieldOperator {
    let terms = diagonal(backend.module_dim(), (Gamma, 0), (Tau, 0), &constant(Scalar::one()), false);
    FieldOperator::new("koszul", true, 0, (1, -1), terms, Scalar::zero()).expect("well-formed")
}

/// A single generator acting as an operator.
pub struct GeneratorOp(pub GenKey);

impl LinearOp for GeneratorOp {
    fn apply(&self, v: &FockVector) -> FockVector {
        crate::fock::apply_generator(self.0, v)
    }

    fn is_odd(&self) -> bool {
        self.0.family.is_fermionic()
    }
}

/// Which quadratic realization the N=2 operators use.
#[derive(Clone, Debug, PartialEq)]
pub enum N2Realization {
    /// Operators of a Witt-module 𝔽_{λ,μ}.
    Fmu { lambda: Scalar, mu: Scalar },
    /// The λ = μ = 0 expansions summed over `dim` components.
    Loop { dim: usize },
}

impl N2Realization {
    pub fn from_backend(backend: &GradedBackend) -> Result<Self> {
        match backend {
            GradedBackend::Fmu { lambda, mu } => Ok(N2Realization::Fmu { lambda: lambda.clone(), mu: mu.clone() }),
            GradedBackend::Loop(_) | GradedBackend::LoopModule { .. } => {
                Ok(N2Realization::Loop { dim: backend.module_dim() })
            }
            GradedBackend::Witt => Ok(N2Realization::Fmu { lambda: Scalar::from_i64(-1), mu: Scalar::one() }),
        }
    }

    fn params(&self) -> (usize, Scalar, Scalar) {
        match self {
            N2Realization::Fmu { lambda, mu } => (1, lambda.clone(), mu.clone()),
            N2Realization::Loop { dim } => (*dim, Scalar::zero(), Scalar::zero()),
        }
    }

    /// Predicted central charge `3 dim − 6λ`-style value for this module.
    pub fn central_charge(&self) -> Scalar {
        match self {
            N2Realization::Fmu { lambda, .. } => Scalar::from_i64(3) - &(lambda * &Scalar::from_i64(6)),
            N2Realization::Loop { dim } => Scalar::from_i64(3 * *dim as i64),
        }
    }
}

fn n2_h(dim: usize, n: i64, lambda: &Scalar, mu: &Scalar) -> FieldOperator {
    let mut terms = diagonal(dim, (Tau, 0), (Eps, n), &constant(lambda.clone()), true);
    terms.extend(diagonal(dim, (Beta, 0), (Gamma, n), &constant(lambda - &Scalar::one()), true));
    let c = if n == 0 { mu * &Scalar::from_i64(dim as i64) } else { Scalar::zero() };
    FieldOperator::new(format!("H[{n}]"), false, n, (0, 0), prune(terms, lambda), c).expect("well-formed")
}

/// Drops the τε terms when their constant coefficient vanishes.
fn prune(terms: Vec<TermShape>, lambda: &Scalar) -> Vec<TermShape> {
    if lambda.is_zero() {
        terms.into_iter().filter(|t| t.slots[0].family != Tau).collect()
    } else {
        terms
    }
}

fn frak_h(dim: usize, n: i64) -> FieldOperator {
    let terms = diagonal(dim, (Gamma, n), (Tau, 0), &constant(Scalar::one()), false);
    FieldOperator::new(format!("h[{n}]"), true, n, (1, -1), terms, Scalar::zero()).expect("well-formed")
}

/// `Σ (m − μ − (n+1)λ) β(u_{m−n}) ε(u'_m)`.
fn frak_p(dim: usize, n: i64, lambda: &Scalar, mu: &Scalar) -> FieldOperator {
    let shift = mu + &(lambda * &Scalar::from_i64(n + 1));
    let c: CoeffFn = Arc::new(move |x| Scalar::from_i64(x[0]) - &shift);
    let terms = diagonal(dim, (Beta, -n), (Eps, 0), &c, false);
    FieldOperator::new(format!("p[{n}]"), true, n, (-1, 1), terms, Scalar::zero()).expect("well-formed")
}

/// θ of an N=2 generator: `Lalpha` is ℒ_n, `H`, `h`, `p` as usual.
pub fn build_n2_family(real: &N2Realization, symbol: Symbol, n: i64) -> Result<FieldOperator> {
    let (dim, lambda, mu) = real.params();
    match symbol {
        Symbol::Lalpha => {
            let l = witt_operator(dim, -n, &lambda, &mu);
            let h = n2_h(dim, n, &lambda, &mu);
            FieldOperator::linear_combination(
                format!("Lalpha[{n}]"),
                &[(-Scalar::one(), &l), (Scalar::frac(n + 1, 2), &h)],
                Scalar::zero(),
            )
        }
        Symbol::H => Ok(n2_h(dim, n, &lambda, &mu)),
        Symbol::Hf => Ok(frak_h(dim, n)),
        Symbol::P => Ok(frak_p(dim, n, &lambda, &mu)),
        other => Err(Error::Unsupported(format!("{other} is not an N=2 generator"))),
    }
}

/// θ of an S′(2,α) generator on the loop complex of `dim` components.
pub fn build_s2alpha_family(dim: usize, alpha: &Scalar, symbol: Symbol, n: i64) -> Result<FieldOperator> {
    if !alpha.is_real() {
        return Err(Error::Domain("α must be rational".into()));
    }
    let zero = Scalar::zero();
    let half_alpha = alpha * &Scalar::frac(1, 2);
    let i = Scalar::i();
    let minus_half_i = Scalar::gaussian(0, -1) * Scalar::frac(1, 2);
    let op = match symbol {
        Symbol::Lalpha => {
            let l = witt_operator(dim, -n, &zero, &half_alpha);
            let h = n2_h(dim, n, &zero, &zero);
            let coeff = (Scalar::from_i64(n + 1) - alpha) * Scalar::frac(1, 2);
            let central = if n == 0 {
                (alpha * &Scalar::frac(1, 4) - &(alpha * alpha * Scalar::frac(1, 8))) * Scalar::from_i64(dim as i64)
            } else {
                Scalar::zero()
            };
            FieldOperator::linear_combination(
                format!("Lalpha[{n}]"),
                &[(-Scalar::one(), &l), (coeff, &h)],
                central,
            )?
        }
        Symbol::H => n2_h(dim, n, &zero, &zero),
        Symbol::Hf => frak_h(dim, n),
        Symbol::P => frak_p(dim, n, &zero, &half_alpha),
        Symbol::E => {
            let t = diagonal(dim, (Gamma, 0), (Gamma, 0), &constant(minus_half_i), false);
            let t = t.into_iter().map(|t| reflect(t, 1, 1 + n, Gamma)).collect();
            FieldOperator::new(format!("E[{n}]"), false, n + 1, (2, 0), t, Scalar::zero())?
        }
        Symbol::F => {
            let t = diagonal(dim, (Beta, 0), (Beta, 0), &constant(minus_half_i), false);
            let t = t.into_iter().map(|t| reflect(t, 1, 1 - n, Beta)).collect();
            FieldOperator::new(format!("F[{n}]"), false, n - 1, (-2, 0), t, Scalar::zero())?
        }
        Symbol::Y => {
            let t = diagonal(dim, (Beta, 0), (Tau, 0), &constant(i), false);
            let t = t.into_iter().map(|t| reflect(t, 1, 1 - n, Tau)).collect();
            FieldOperator::new(format!("y[{n}]"), true, n - 1, (-1, -1), t, Scalar::zero())?
        }
        Symbol::X => {
            // −i Σ (m − α/2) γ(u'_{1−m+n}) ε(u'_m)
            let a = half_alpha.clone();
            let c: CoeffFn = Arc::new(move |x| (Scalar::from_i64(x[0]) - &a) * Scalar::gaussian(0, -1));
            let t = diagonal(dim, (Gamma, 0), (Eps, 0), &c, false);
            let t = t.into_iter().map(|t| reflect(t, 0, 1 + n, Gamma)).collect();
            FieldOperator::new(format!("x[{n}]"), true, n + 1, (1, 1), t, Scalar::zero())?
        }
    };
    Ok(op)
}

/// Replaces slot `k` by `family(u_{c − m})`.
fn reflect(mut t: TermShape, k: usize, c: i64, family: Family) -> TermShape {
    t.slots[k].family = family;
    t.slots[k].mode = Affine::neg_var(0, c);
    t
}

/// ℍ as written next to the S′(2,α) operators: `−Σ_u Σ_m :τ(u_m)ε(u'_m):`.
pub fn build_hh_full(dim: usize) -> FieldOperator {
    let terms = diagonal(dim, (Tau, 0), (Eps, 0), &constant(-Scalar::one()), true);
    FieldOperator::new("HH", false, 0, (0, 0), terms, Scalar::zero()).expect("well-formed")
}

/// 𝔼 = i Σ_{m>0} m ε(u'_{−m})ε(u'_m), ℍ = −Σ_{m≠0} :τ(u_m)ε(u'_m):,
/// 𝔽 = −i Σ_{m>0} (1/m) τ(u_m)τ(u_{−m}).
pub fn build_sl2_ehf(backend: &GradedBackend, which: Sl2Symbol) -> Result<FieldOperator> {
    let spec = backend
        .algebra()
        .ok_or_else(|| Error::Unsupported(format!("{backend} is not a loop backend")))?;
    if !spec.has_orthonormal_form() {
        return Err(Error::Unsupported("the exterior sl(2) needs an orthonormal invariant form".into()));
    }
    let dim = backend.module_dim();
    let op = match which {
        Sl2Symbol::EE => {
            let c: CoeffFn = Arc::new(|x| if x[0] > 0 { Scalar::gaussian(0, x[0]) } else { Scalar::zero() });
            let t = (0..dim)
                .map(|u| {
                    TermShape::new(&[slot(Eps, u, Affine::neg_var(0, 0)), slot(Eps, u, Affine::var(0, 0))], 1, c.clone(), false)
                })
                .collect();
            FieldOperator::new("EE", false, 0, (0, 2), t, Scalar::zero())?
        }
        Sl2Symbol::HH => {
            let c: CoeffFn = Arc::new(|x| if x[0] != 0 { -Scalar::one() } else { Scalar::zero() });
            FieldOperator::new("HH", false, 0, (0, 0), diagonal(dim, (Tau, 0), (Eps, 0), &c, true), Scalar::zero())?
        }
        Sl2Symbol::FF => {
            let c: CoeffFn = Arc::new(|x| {
                if x[0] > 0 {
                    Scalar::gaussian(0, -1) * Scalar::frac(1, x[0])
                } else {
                    Scalar::zero()
                }
            });
            let t = (0..dim)
                .map(|u| {
                    TermShape::new(&[slot(Tau, u, Affine::var(0, 0)), slot(Tau, u, Affine::neg_var(0, 0))], 1, c.clone(), false)
                })
                .collect();
            FieldOperator::new("FF", false, 0, (0, -2), t, Scalar::zero())?
        }
    };
    Ok(op)
}
