use serde::Serialize;

use super::{SCAElement, Symbol};
use crate::algebra::Scalar;

use Symbol::*;

fn q(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

fn half() -> Scalar {
    Scalar::frac(1, 2)
}

/// `((x + (α+1)/2)² − ¼) / 6`.
fn odd_cocycle(x: i64, alpha: &Scalar) -> Scalar {
    let s = q(x) + (alpha + &Scalar::one()) * half();
    (&s * &s - Scalar::frac(1, 4)) * Scalar::frac(1, 6)
}

/// Stored orientation of the table; `None` when the ordered pair is absent.
fn raw(alpha: &Scalar, (s, n): (Symbol, i64), (t, k): (Symbol, i64)) -> Option<SCAElement> {
    let m = n + k;
    let on_diag = n == -k;
    let one = |sym, c: Scalar| SCAElement::basis(sym, m).scaled(&c);
    let cocycle = |c: Scalar| if on_diag { c } else { Scalar::zero() };
    let r = match (s, t) {
        (Lalpha, Lalpha) => one(Lalpha, q(n - k)).with_central(cocycle(Scalar::frac(n * (n * n - 1), 12))),
        (E, F) => one(H, q(1)).with_central(cocycle(Scalar::frac(n, 6))),
        (H, H) => SCAElement::zero().with_central(cocycle(Scalar::frac(n, 3))),
        (H, E) => one(E, q(2)),
        (H, F) => one(F, q(-2)),
        (Lalpha, E) => one(E, q(-k)),
        (Lalpha, H) => one(H, q(-k)),
        (Lalpha, F) => one(F, q(-k)),
        (Lalpha, Hf) => one(Hf, (q(n - 2 * k + 1) - alpha) * half()),
        (Lalpha, P) => one(P, (q(n - 2 * k - 1) + alpha) * half()),
        (Lalpha, X) => one(X, (q(n - 2 * k - 1) + alpha) * half()),
        (Lalpha, Y) => one(Y, (q(n - 2 * k + 1) - alpha) * half()),
        (E, Y) => one(Hf, q(1)),
        (F, Hf) => one(Y, q(1)),
        (E, P) => one(X, q(1)),
        (F, X) => one(P, q(1)),
        (H, Hf) => one(Hf, q(1)),
        (H, Y) => one(Y, q(-1)),
        (H, X) => one(X, q(1)),
        (H, P) => one(P, q(-1)),
        (Hf, X) => one(E, q(k + 1 - n) - alpha),
        (P, Y) => one(F, q(k - n - 1) + alpha),
        (Hf, P) => one(Lalpha, q(1))
            .with_term(H, m, -((q(k - n + 1) - alpha) * half()))
            .with_central(cocycle(odd_cocycle(n - 1, alpha))),
        (X, Y) => one(Lalpha, q(-1))
            .with_term(H, m, (q(k - n - 1) + alpha) * half())
            .with_central(cocycle(-odd_cocycle(-n - 1, alpha))),
        _ => return None,
    };
    Some(r)
}

/// `[s_n, t_k]` in Ŝ′(2,α), central part in units of 𝒞.
pub fn bracket_basis(alpha: &Scalar, a: (Symbol, i64), b: (Symbol, i64)) -> SCAElement {
    if let Some(r) = raw(alpha, a, b) {
        return r;
    }
    if let Some(r) = raw(alpha, b, a) {
        // [A, B] = −(−1)^{p(A)p(B)} [B, A]
        let sign = if a.0.is_odd() && b.0.is_odd() { Scalar::one() } else { -Scalar::one() };
        return r.scaled(&sign);
    }
    SCAElement::zero()
}

/// Bilinear extension of [`bracket_basis`]; central summands bracket to zero.
pub fn bracket(alpha: &Scalar, a: &SCAElement, b: &SCAElement) -> SCAElement {
    let mut out = SCAElement::zero();
    for (s, n, x) in a.terms() {
        for (t, k, y) in b.terms() {
            out.add_scaled(&bracket_basis(alpha, (s, n), (t, k)), &(x * y));
        }
    }
    out
}

/// The grading with `[L_0, s] = deg(s) s`.
pub fn deg(alpha: &Scalar, s: Symbol, n: i64) -> Scalar {
    match s {
        E | X => q(n + 1) - alpha,
        F | Y => q(n - 1) + alpha,
        Lalpha | H | Hf | P => q(n),
    }
}

/// `L_0 = −ℒ^α_0 + ½(1 − α) H_0`.
pub fn l0_element(alpha: &Scalar) -> SCAElement {
    SCAElement::basis(Lalpha, 0)
        .scaled(&-Scalar::one())
        .with_term(H, 0, (Scalar::one() - alpha) * half())
}

/// One row of the golden structure-constant table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisBracket {
    pub left: String,
    pub right: String,
    pub value: SCAElement,
}

/// Every nonzero `[s_n, t_k]` with `|n|, |k| ≤ window`, in symbol/mode order.
pub fn golden_table(alpha: &Scalar, window: i64) -> Vec<BasisBracket> {
    let mut rows = Vec::new();
    for s in Symbol::ALL {
        for n in -window..=window {
            for t in Symbol::ALL {
                for k in -window..=window {
                    let value = bracket_basis(alpha, (s, n), (t, k));
                    if !value.is_zero() {
                        rows.push(BasisBracket { left: format!("{s}[{n}]"), right: format!("{t}[{k}]"), value });
                    }
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h0_p0_fixture() {
        let a = Scalar::frac(1, 3);
        let r = bracket_basis(&a, (Hf, 0), (P, 0));
        let expect = SCAElement::basis(Lalpha, 0)
            .with_term(H, 0, -((Scalar::one() - &a) * half()))
            .with_central(odd_cocycle(-1, &a));
        assert_eq!(r, expect);
    }

    #[test]
    fn heisenberg_cocycle_and_absent_pair() {
        let a = Scalar::zero();
        assert_eq!(bracket_basis(&a, (H, 1), (H, -1)), SCAElement::central_only(Scalar::frac(1, 3)));
        assert!(bracket_basis(&a, (E, 0), (E, 1)).is_zero());
    }

    #[test]
    fn reversed_odd_pair_is_symmetric() {
        let a = Scalar::frac(1, 2);
        assert_eq!(bracket_basis(&a, (P, 2), (Hf, -1)), bracket_basis(&a, (Hf, -1), (P, 2)));
        assert_eq!(bracket_basis(&a, (F, 2), (E, -1)), bracket_basis(&a, (E, -1), (F, 2)).scaled(&-Scalar::one()));
    }

    #[test]
    fn l0_bracket_is_the_grading() {
        for a in [Scalar::zero(), Scalar::frac(1, 2), Scalar::one()] {
            let l0 = l0_element(&a);
            for s in Symbol::ALL {
                for k in -3..=3 {
                    let b = SCAElement::basis(s, k);
                    assert_eq!(bracket(&a, &l0, &b), b.scaled(&deg(&a, s, k)), "{s}[{k}] at α={a}");
                }
            }
        }
    }
}
