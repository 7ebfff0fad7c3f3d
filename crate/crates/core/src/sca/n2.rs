use super::{SCAElement, Symbol};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// N=2 generators with `G^±_r` indexed by `2r`.
#[derive(Clone, Copy, Debug)]
enum Gen {
    L(i64),
    H(i64),
    Gp(i64),
    Gm(i64),
}

impl Gen {
    fn odd(self) -> bool {
        matches!(self, Gen::Gp(_) | Gen::Gm(_))
    }
}

/// 𝔥_n = G⁺_{n−½}/√2 and 𝔭_n = G⁻_{n+½}/√2; the √2 is carried implicitly.
fn to_gen(s: Symbol, n: i64) -> Result<Gen> {
    match s {
        Symbol::Lalpha => Ok(Gen::L(n)),
        Symbol::H => Ok(Gen::H(n)),
        Symbol::Hf => Ok(Gen::Gp(2 * n - 1)),
        Symbol::P => Ok(Gen::Gm(2 * n + 1)),
        other => Err(Error::Domain(format!("{other} is not in the N=2 subalgebra"))),
    }
}

fn from_gen(g: Gen) -> (Symbol, i64) {
    match g {
        Gen::L(n) => (Symbol::Lalpha, n),
        Gen::H(n) => (Symbol::H, n),
        Gen::Gp(r2) => (Symbol::Hf, (r2 + 1) / 2),
        Gen::Gm(r2) => (Symbol::P, (r2 - 1) / 2),
    }
}

fn gen_elt(g: Gen, c: Scalar) -> SCAElement {
    let (s, n) = from_gen(g);
    SCAElement::basis(s, n).scaled(&c)
}

fn q(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

fn raw(a: Gen, b: Gen) -> Option<SCAElement> {
    use Gen::*;
    let r = match (a, b) {
        (L(n), L(m)) => {
            let c = if n == -m { Scalar::frac(n * n * n - n, 12) } else { Scalar::zero() };
            gen_elt(L(n + m), q(n - m)).with_central(c)
        }
        (L(n), H(m)) => gen_elt(H(n + m), q(-m)),
        // (n/2 − r) G_{n+r}
        (L(n), Gp(r2)) => gen_elt(Gp(2 * n + r2), Scalar::frac(n - r2, 2)),
        (L(n), Gm(r2)) => gen_elt(Gm(2 * n + r2), Scalar::frac(n - r2, 2)),
        (H(n), H(m)) => SCAElement::central_only(if n == -m { Scalar::frac(n, 3) } else { Scalar::zero() }),
        (H(n), Gp(r2)) => gen_elt(Gp(2 * n + r2), q(1)),
        (H(n), Gm(r2)) => gen_elt(Gm(2 * n + r2), q(-1)),
        // [G⁺_r, G⁻_s] = 2ℒ_{r+s} + (r−s)H_{r+s} + (𝒞/3)(r² − ¼)δ, halved by the √2's
        (Gp(r2), Gm(s2)) => {
            let m = (r2 + s2) / 2;
            let c = if r2 == -s2 { Scalar::frac(r2 * r2 - 1, 4) * Scalar::frac(1, 3) } else { Scalar::zero() };
            let half = Scalar::frac(1, 2);
            gen_elt(L(m), q(2) * &half)
                .with_term(Symbol::H, m, Scalar::frac(r2 - s2, 2) * &half)
                .with_central(c * half)
        }
        _ => return None,
    };
    Some(r)
}

fn gen_bracket(a: Gen, b: Gen) -> SCAElement {
    if let Some(r) = raw(a, b) {
        return r;
    }
    if let Some(r) = raw(b, a) {
        let sign = if a.odd() && b.odd() { Scalar::one() } else { -Scalar::one() };
        return r.scaled(&sign);
    }
    SCAElement::zero()
}

/// Bracket of the N=2 superconformal algebra, in the 𝔥/𝔭 basis.
pub fn n2_bracket(a: &SCAElement, b: &SCAElement) -> Result<SCAElement> {
    let mut out = SCAElement::zero();
    for (s, n, x) in a.terms() {
        let ga = to_gen(s, n)?;
        for (t, k, y) in b.terms() {
            out.add_scaled(&gen_bracket(ga, to_gen(t, k)?), &(x * y));
        }
    }
    Ok(out)
}

/// The isomorphism from ⟨ℒ^α, H, 𝔥^α, 𝔭, 𝒞⟩ ⊂ Ŝ′(2,α) onto the N=2 algebra.
pub fn spectral_flow(alpha: &Scalar, a: &SCAElement) -> Result<SCAElement> {
    let mut out = SCAElement::central_only(a.central().clone());
    for (s, n, c) in a.terms() {
        let image = match s {
            Symbol::Lalpha => {
                let central = if n == 0 { alpha * alpha * Scalar::frac(1, 24) } else { Scalar::zero() };
                SCAElement::basis(Symbol::Lalpha, n)
                    .with_term(Symbol::H, n, -(alpha * &Scalar::frac(1, 2)))
                    .with_central(central)
            }
            Symbol::H => {
                let central = if n == 0 { -(alpha * &Scalar::frac(1, 6)) } else { Scalar::zero() };
                SCAElement::basis(Symbol::H, n).with_central(central)
            }
            Symbol::Hf | Symbol::P => SCAElement::basis(s, n),
            other => return Err(Error::Domain(format!("{other} is outside the N=2 subalgebra"))),
        };
        out.add_scaled(&image, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virasoro_fixture() {
        let r = n2_bracket(&SCAElement::basis(Symbol::Lalpha, 2), &SCAElement::basis(Symbol::Lalpha, -2)).unwrap();
        assert_eq!(r, SCAElement::basis(Symbol::Lalpha, 0).scaled(&q(4)).with_central(Scalar::frac(1, 2)));
    }

    #[test]
    fn heisenberg_charge_of_g_plus() {
        let r = n2_bracket(&SCAElement::basis(Symbol::H, 1), &SCAElement::basis(Symbol::Hf, 2)).unwrap();
        assert_eq!(r, SCAElement::basis(Symbol::Hf, 3));
        let r = n2_bracket(&SCAElement::basis(Symbol::Hf, 0), &SCAElement::basis(Symbol::Hf, 0)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn rejects_non_n2_symbols() {
        assert!(n2_bracket(&SCAElement::basis(Symbol::E, 0), &SCAElement::basis(Symbol::H, 0)).is_err());
        assert!(spectral_flow(&q(1), &SCAElement::basis(Symbol::X, 0)).is_err());
    }

    #[test]
    fn flow_of_l0() {
        let a = Scalar::frac(1, 2);
        let r = spectral_flow(&a, &SCAElement::basis(Symbol::Lalpha, 0)).unwrap();
        let expect = SCAElement::basis(Symbol::Lalpha, 0)
            .with_term(Symbol::H, 0, Scalar::frac(-1, 4))
            .with_central(Scalar::frac(1, 96));
        assert_eq!(r, expect);
        let z = Scalar::zero();
        for s in [Symbol::Lalpha, Symbol::H, Symbol::Hf, Symbol::P] {
            let b = SCAElement::basis(s, 0);
            assert_eq!(spectral_flow(&z, &b).unwrap(), b);
        }
    }
}
