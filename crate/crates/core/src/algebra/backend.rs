//! Graded Lie algebras and graded modules indexed by (component, mode).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::lie::{builtin_sl2_orthonormal, LieAlgebraSpec};
use super::Scalar;
use crate::error::{Error, Result};

/// The datum a Weil complex is built from.
///
/// `Loop` and `Witt` are Lie algebras acting on themselves; `LoopModule` and
/// `Fmu` are modules carrying an action of a loop algebra resp. of Witt.
#[derive(Clone, Debug, PartialEq)]
pub enum GradedBackend {
    Loop(Arc<LieAlgebraSpec>),
    /// `action[(i * module_dim + j) * module_dim + k]` is the coefficient of
    /// `w_k` in `v_i · w_j`.
    LoopModule { algebra: Arc<LieAlgebraSpec>, module_dim: usize, action: Arc<Vec<Scalar>> },
    Witt,
    Fmu { lambda: Scalar, mu: Scalar },
}

/// An argument of [`backend_bracket`]: an element of the acting algebra or
/// of the module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Acting(usize, i64),
    Module(usize, i64),
}

impl GradedBackend {
    pub fn loop_sl2() -> Self {
        GradedBackend::Loop(Arc::new(builtin_sl2_orthonormal()))
    }

    pub fn loop_abelian(dim: usize) -> Self {
        GradedBackend::Loop(Arc::new(LieAlgebraSpec::abelian(dim)))
    }

    pub fn fmu(lambda: Scalar, mu: Scalar) -> Self {
        GradedBackend::Fmu { lambda, mu }
    }

    pub fn loop_module(algebra: LieAlgebraSpec, module_dim: usize, action: Vec<Scalar>) -> Result<Self> {
        let d = algebra.dim();
        if module_dim == 0 || action.len() != d * module_dim * module_dim {
            return Err(Error::Structural(format!(
                "module action needs {} constants, got {}",
                d * module_dim * module_dim,
                action.len()
            )));
        }
        Ok(GradedBackend::LoopModule { algebra: Arc::new(algebra), module_dim, action: Arc::new(action) })
    }

    /// Number of module basis vectors at every mode.
    pub fn module_dim(&self) -> usize {
        match self {
            GradedBackend::Loop(a) => a.dim(),
            GradedBackend::LoopModule { module_dim, .. } => *module_dim,
            GradedBackend::Witt | GradedBackend::Fmu { .. } => 1,
        }
    }

    /// Number of acting basis vectors at every mode.
    pub fn acting_dim(&self) -> usize {
        match self {
            GradedBackend::Loop(a) | GradedBackend::LoopModule { algebra: a, .. } => a.dim(),
            GradedBackend::Witt | GradedBackend::Fmu { .. } => 1,
        }
    }

    /// True when the module is the acting algebra itself (adjoint case).
    pub fn is_lie(&self) -> bool {
        matches!(self, GradedBackend::Loop(_) | GradedBackend::Witt)
    }

    pub fn algebra(&self) -> Option<&LieAlgebraSpec> {
        match self {
            GradedBackend::Loop(a) | GradedBackend::LoopModule { algebra: a, .. } => Some(a),
            _ => None,
        }
    }

    /// `x_(i, n) · w_(j, m)` as `(k, c)` pairs; the result lives at mode `n + m`.
    pub fn act(&self, i: usize, n: i64, j: usize, m: i64) -> Vec<(usize, Scalar)> {
        match self {
            GradedBackend::Loop(a) => a.bracket_basis(i, j),
            GradedBackend::LoopModule { module_dim, action, .. } => (0..*module_dim)
                .filter_map(|k| {
                    let c = &action[(i * module_dim + j) * module_dim + k];
                    (!c.is_zero()).then(|| (k, c.clone()))
                })
                .collect(),
            GradedBackend::Witt => nonzero(Scalar::from_i64(n - m)),
            GradedBackend::Fmu { lambda, mu } => {
                // L_n · u_m = (−m + μ − (n−1)λ) u_{n+m}
                let c = Scalar::from_i64(-m) + mu - &(lambda * &Scalar::from_i64(n - 1));
                nonzero(c)
            }
        }
    }

    /// Bracket of two acting elements `[x_(i,n), x_(j,m)]`; only for kinds
    /// whose acting algebra is stored with structure constants.
    pub fn acting_bracket(&self, i: usize, n: i64, j: usize, m: i64) -> Vec<(usize, Scalar)> {
        match self {
            GradedBackend::Loop(a) | GradedBackend::LoopModule { algebra: a, .. } => a.bracket_basis(i, j),
            GradedBackend::Witt | GradedBackend::Fmu { .. } => nonzero(Scalar::from_i64(n - m)),
        }
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

fn nonzero(c: Scalar) -> Vec<(usize, Scalar)> {
    if c.is_zero() {
        Vec::new()
    } else {
        vec![(0, c)]
    }
}

fn dense(dim: usize, entries: Vec<(usize, Scalar)>) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    for (k, c) in entries {
        v[k] += &c;
    }
    v
}

/// Exact coefficient vector of `[a, b]` over the components at mode `m + n`.
pub fn backend_bracket(backend: &GradedBackend, a: Operand, b: Operand) -> Result<Vec<Scalar>> {
    use Operand::*;
    let check = |dim: usize, c: usize| {
        if c >= dim {
            Err(Error::Structural(format!("component {c} out of range (dim {dim})")))
        } else {
            Ok(())
        }
    };
    if backend.is_lie() {
        let (Acting(i, n) | Module(i, n)) = a;
        let (Acting(j, m) | Module(j, m)) = b;
        check(backend.module_dim(), i)?;
        check(backend.module_dim(), j)?;
        return Ok(dense(backend.module_dim(), backend.act(i, n, j, m)));
    }
    match (a, b) {
        (Acting(i, n), Acting(j, m)) => {
            check(backend.acting_dim(), i)?;
            check(backend.acting_dim(), j)?;
            Ok(dense(backend.acting_dim(), backend.acting_bracket(i, n, j, m)))
        }
        (Acting(i, n), Module(j, m)) => {
            check(backend.acting_dim(), i)?;
            check(backend.module_dim(), j)?;
            Ok(dense(backend.module_dim(), backend.act(i, n, j, m)))
        }
        (Module(j, m), Acting(i, n)) => {
            check(backend.acting_dim(), i)?;
            check(backend.module_dim(), j)?;
            Ok(dense(backend.module_dim(), backend.act(i, n, j, m)).into_iter().map(|c| -c).collect())
        }
        (Module(..), Module(..)) => {
            Err(Error::Unsupported(format!("{backend} is a module; module elements have no bracket")))
        }
    }
}

impl fmt::Display for GradedBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedBackend::Loop(a) => match a.name.as_str() {
                "sl2" => write!(f, "loop:sl2"),
                n if n.starts_with("abelian:") => write!(f, "loop:{n}"),
                n => write!(f, "loop:{n}"),
            },
            GradedBackend::LoopModule { algebra, module_dim, .. } => {
                write!(f, "loop_module:{}:{module_dim}", algebra.name)
            }
            GradedBackend::Witt => write!(f, "witt"),
            GradedBackend::Fmu { lambda, mu } => write!(f, "fmu:{lambda}:{mu}"),
        }
    }
}

/// Parses `loop:sl2`, `loop:abelian:D`, `witt`, `fmu:LAMBDA:MU`.
impl FromStr for GradedBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let usage = || Error::Usage(format!("unknown backend `{s}`"));
        match parts.as_slice() {
            ["loop", "sl2"] => Ok(GradedBackend::loop_sl2()),
            ["loop", "abelian", d] => {
                let d: usize = d.parse().map_err(|_| usage())?;
                if d == 0 {
                    return Err(Error::Usage("abelian dimension must be positive".into()));
                }
                Ok(GradedBackend::loop_abelian(d))
            }
            ["witt"] => Ok(GradedBackend::Witt),
            ["fmu", l, m] => {
                let lambda: Scalar = l.parse().map_err(|_| usage())?;
                let mu: Scalar = m.parse().map_err(|_| usage())?;
                if !lambda.is_real() || !mu.is_real() {
                    return Err(Error::Usage("λ and μ must be rational".into()));
                }
                Ok(GradedBackend::fmu(lambda, mu))
            }
            _ => Err(usage()),
        }
    }
}

/// Parameter of the S′(2,α) family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SCAParams {
    pub alpha: Scalar,
}

impl SCAParams {
    pub fn new(alpha: Scalar) -> Result<Self> {
        if !alpha.is_real() {
            return Err(Error::Domain(format!("α = {alpha} must be rational")));
        }
        Ok(SCAParams { alpha })
    }

    /// Whether the exterior sl(2) of derivations exists for this α.
    pub fn alpha_is_integer(&self) -> bool {
        self.alpha.is_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_bracket_fixture() {
        let v = backend_bracket(&GradedBackend::Witt, Operand::Acting(0, 2), Operand::Acting(0, -1)).unwrap();
        assert_eq!(v, vec![Scalar::from_i64(3)]);
    }

    #[test]
    fn fmu_action_fixture_and_module_pair_rejection() {
        let b = GradedBackend::fmu(Scalar::zero(), Scalar::zero());
        let v = backend_bracket(&b, Operand::Acting(0, 1), Operand::Module(0, 0)).unwrap();
        assert_eq!(v, vec![Scalar::zero()]);
        assert!(matches!(
            backend_bracket(&b, Operand::Module(0, 1), Operand::Module(0, 0)),
            Err(Error::Unsupported(_))
        ));
        // module-first ordering is the negated action
        let b = GradedBackend::fmu(Scalar::frac(1, 2), Scalar::from_i64(2));
        let x = backend_bracket(&b, Operand::Acting(0, 3), Operand::Module(0, -1)).unwrap();
        let y = backend_bracket(&b, Operand::Module(0, -1), Operand::Acting(0, 3)).unwrap();
        assert_eq!(x[0], -y[0].clone());
        // −m + μ − (n−1)λ = 1 + 2 − 1 = 2
        assert_eq!(x[0], Scalar::from_i64(2));
    }

    #[test]
    fn abelian_loop_brackets_vanish() {
        let b = GradedBackend::loop_abelian(2);
        for (i, j) in [(0, 0), (0, 1), (1, 0)] {
            let v = backend_bracket(&b, Operand::Acting(i, 3), Operand::Acting(j, -5)).unwrap();
            assert!(v.iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["loop:sl2", "loop:abelian:3", "witt", "fmu:1/2:-1"] {
            let b: GradedBackend = s.parse().unwrap();
            assert_eq!(b.to_string(), s);
        }
        assert!(matches!("loop:e8".parse::<GradedBackend>(), Err(Error::Usage(_))));
        assert!(matches!("fmu:i:0".parse::<GradedBackend>(), Err(Error::Usage(_))));
    }

    #[test]
    fn fmu_minus_one_one_is_the_adjoint_witt_action() {
        let f = GradedBackend::fmu(Scalar::from_i64(-1), Scalar::one());
        for n in -3..=3 {
            for m in -3..=3 {
                assert_eq!(f.act(0, n, 0, m), GradedBackend::Witt.act(0, n, 0, m));
            }
        }
    }
}
