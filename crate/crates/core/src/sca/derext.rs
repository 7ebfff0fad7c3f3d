use super::{bracket, SCAElement, Sl2Symbol, Symbol};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

fn shift(alpha: &Scalar) -> Result<i64> {
    alpha
        .to_i64()
        .ok_or_else(|| Error::Unsupported(format!("𝔼 and 𝔽 are not derivations when α = {alpha} is not an integer")))
}

/// Exterior derivation `D` applied to `a`; 𝔼, ℍ, 𝔽 kill the even part.
pub fn derext_action(alpha: &Scalar, d: Sl2Symbol, a: &SCAElement) -> Result<SCAElement> {
    let s = if d == Sl2Symbol::HH { 0 } else { shift(alpha)? };
    let mut out = SCAElement::zero();
    for (sym, k, c) in a.terms() {
        let image = match (d, sym) {
            (Sl2Symbol::EE, Symbol::Hf) => Some((Symbol::X, k - 1 + s, 1)),
            (Sl2Symbol::EE, Symbol::Y) => Some((Symbol::P, k - 1 + s, 1)),
            (Sl2Symbol::FF, Symbol::X) => Some((Symbol::Hf, k + 1 - s, 1)),
            (Sl2Symbol::FF, Symbol::P) => Some((Symbol::Y, k + 1 - s, 1)),
            (Sl2Symbol::HH, Symbol::X | Symbol::P) => Some((sym, k, 1)),
            (Sl2Symbol::HH, Symbol::Hf | Symbol::Y) => Some((sym, k, -1)),
            _ => None,
        };
        if let Some((t, m, sign)) = image {
            out.add_term(t, m, c * &Scalar::from_i64(sign));
        }
    }
    Ok(out)
}

/// A pair of basis elements `(symbol, mode)`.
pub type BasisPair = ((Symbol, i64), (Symbol, i64));

/// First basis pair in the window violating `D[a,b] = [Da,b] + [a,Db]`.
pub fn derivation_sweep(alpha: &Scalar, d: Sl2Symbol, window: i64) -> Result<Option<BasisPair>> {
    for s in Symbol::ALL {
        for n in -window..=window {
            let a = SCAElement::basis(s, n);
            let da = derext_action(alpha, d, &a)?;
            for t in Symbol::ALL {
                for k in -window..=window {
                    let b = SCAElement::basis(t, k);
                    let lhs = derext_action(alpha, d, &bracket(alpha, &a, &b))?;
                    let rhs = bracket(alpha, &da, &b).add(&bracket(alpha, &a, &derext_action(alpha, d, &b)?));
                    if lhs != rhs {
                        return Ok(Some(((s, n), (t, k))));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowering_fixture_and_even_kernel() {
        let z = Scalar::zero();
        let r = derext_action(&z, Sl2Symbol::FF, &SCAElement::basis(Symbol::X, 2)).unwrap();
        assert_eq!(r, SCAElement::basis(Symbol::Hf, 3));
        let r = derext_action(&Scalar::one(), Sl2Symbol::FF, &SCAElement::basis(Symbol::X, 2)).unwrap();
        assert_eq!(r, SCAElement::basis(Symbol::Hf, 2));
        assert!(derext_action(&z, Sl2Symbol::HH, &SCAElement::basis(Symbol::E, 4)).unwrap().is_zero());
    }

    #[test]
    fn non_integer_alpha_only_has_hh() {
        let a = Scalar::frac(1, 2);
        let x = SCAElement::basis(Symbol::Hf, 0);
        assert!(matches!(derext_action(&a, Sl2Symbol::EE, &x), Err(Error::Unsupported(_))));
        assert!(derext_action(&a, Sl2Symbol::HH, &x).is_ok());
    }
}
