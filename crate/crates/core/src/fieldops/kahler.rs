//! Hermitian structure of the relative model: the star map, the two forms,
//! the bidegree split of `d` and adjoints on finite pieces.

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::fock::{Family, FockMonomial, FockVector, GenKey};
use crate::linalg::{self, Dense};

use super::operator::LinearOp;

fn relative_check(m: &FockMonomial, dim: usize) -> Result<()> {
    if m.is_relative(dim) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{m} is not a state of the relative model")))
    }
}

/// Swaps ε(u'_n) ↔ τ(u_{−n}) on the fermionic excitations, keeping their
/// order and the bosonic factor.
pub fn star(v: &FockVector, dim: usize) -> Result<FockVector> {
    let vac = FockMonomial::relative_vacuum(dim);
    let mut out = FockVector::zero();
    for (m, c) in v.iter() {
        relative_check(m, dim)?;
        let (eps, taus): (Vec<GenKey>, Vec<GenKey>) = m.relative_fermions().partition(|k| k.family == Family::Eps);
        let mut word: Vec<GenKey> =
            taus.iter().map(|k| GenKey::new(Family::Eps, k.comp as usize, -(k.mode as i64))).collect();
        word.extend(eps.iter().map(|k| GenKey::new(Family::Tau, k.comp as usize, -(k.mode as i64))));
        let base = FockMonomial::with_parts(m.bosons(), vac.fermions())?;
        if let Some((r, f)) = base.apply_word(&word) {
            out.add_term(r, c * &Scalar::from_i64(f));
        }
    }
    Ok(out)
}

/// The adjoint of a single generator: `(phase, key)`.
fn adjoint_key(k: GenKey) -> (Scalar, GenKey) {
    let phase = match k.family {
        Family::Eps => Scalar::i(),
        Family::Tau | Family::Gamma | Family::Beta => -Scalar::i(),
    };
    (phase, GenKey::new(k.family, k.comp as usize, -(k.mode as i64)))
}

/// `{w1, w2}`: antilinear in `w1`, normalized by `{vac_rel, vac_rel} = 1`.
pub fn curly_form(w1: &FockVector, w2: &FockVector, dim: usize) -> Result<Scalar> {
    let vac = FockMonomial::relative_vacuum(dim);
    let mut total = Scalar::zero();
    for (m1, c1) in w1.iter() {
        relative_check(m1, dim)?;
        // m1 = X·vac_rel; pair with w2 through X* = (last key)* ⋯ (first key)*
        let keys: Vec<GenKey> = m1.bosons().iter().copied().chain(m1.relative_fermions()).collect();
        let mut phase = Scalar::one();
        let mut word = Vec::with_capacity(keys.len());
        for &k in keys.iter().rev() {
            let (p, a) = adjoint_key(k);
            phase *= &p;
            word.push(a);
        }
        let pre = c1.conj() * phase;
        for (m2, c2) in w2.iter() {
            relative_check(m2, dim)?;
            if let Some((r, f)) = m2.apply_word(&word) {
                if r == vac {
                    total += &pre * c2 * Scalar::from_i64(f);
                }
            }
        }
    }
    Ok(total)
}

/// `(w1, w2) = {i^{a+b}·star(w1), w2}` extended antilinearly in `w1`.
pub fn paren_form(w1: &FockVector, w2: &FockVector, dim: usize) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (m, c) in w1.iter() {
        let (a, b) = m.relative_bidegree();
        let s = star(&FockVector::basis(m.clone()), dim)?.scaled(&(c * &Scalar::i_pow(a + b)));
        total += curly_form(&s, w2, dim)?;
    }
    Ok(total)
}

/// Gram matrix `G[i][j] = (b_i, b_j)`.
pub fn gram_matrix(basis: &[FockVector], dim: usize) -> Result<Dense> {
    basis.iter().map(|x| basis.iter().map(|y| paren_form(x, y, dim)).collect()).collect()
}

/// `A* = G_src⁻¹ · A^H · G_tgt` for `A` written as a `tgt × src` matrix;
/// `None` when the source Gram matrix is singular.
pub fn adjoint_on_piece(a: &Dense, g_src: &Dense, g_tgt: &Dense) -> Option<Dense> {
    let (rows, cols) = (g_tgt.len(), g_src.len());
    let gi = linalg::inverse(g_src)?;
    let ah = if rows == 0 || cols == 0 { linalg::zeros(cols, rows) } else { linalg::conj_transpose(a, rows, cols) };
    Some(linalg::mul(&linalg::mul(&gi, &ah), g_tgt))
}

/// Components of `v` of relative bidegree `(a, b)`.
pub fn project_bidegree(v: &FockVector, ab: (i64, i64)) -> FockVector {
    v.iter().filter(|(m, _)| m.relative_bidegree() == ab).map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// The part of an operator that shifts the relative bidegree by `shift`.
pub struct BidegreePart<'a> {
    pub op: &'a dyn LinearOp,
    pub shift: (i64, i64),
}

impl LinearOp for BidegreePart<'_> {
    fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.iter() {
            let (a, b) = m.relative_bidegree();
            let image = self.op.apply(&FockVector::basis(m.clone()));
            out.add_scaled(&project_bidegree(&image, (a + self.shift.0, b + self.shift.1)), c);
        }
        out
    }

    fn is_odd(&self) -> bool {
        self.op.is_odd()
    }
}

/// `d₁` raises `a`, `d₂` lowers `b`.
pub fn split_d1_d2(d: &dyn LinearOp) -> (BidegreePart<'_>, BidegreePart<'_>) {
    (BidegreePart { op: d, shift: (1, 0) }, BidegreePart { op: d, shift: (0, -1) })
}

/// `d_c = i(d₁ − d₂)`.
pub struct Dc<'a> {
    pub d1: BidegreePart<'a>,
    pub d2: BidegreePart<'a>,
}

pub fn build_dc(d: &dyn LinearOp) -> Dc<'_> {
    let (d1, d2) = split_d1_d2(d);
    Dc { d1, d2 }
}

impl LinearOp for Dc<'_> {
    fn apply(&self, v: &FockVector) -> FockVector {
        let mut r = self.d1.apply(v);
        r.sub(&self.d2.apply(v));
        r.scaled(&Scalar::i())
    }

    fn is_odd(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> FockMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn star_fixtures() {
        let vac = FockVector::basis(FockMonomial::relative_vacuum(1));
        assert_eq!(star(&vac, 1).unwrap(), vac);
        let w = FockVector::basis(mono("| e(1,+2) t(1,0)"));
        assert_eq!(star(&w, 1).unwrap(), FockVector::basis(mono("| t(1,-2) t(1,0)")));
        assert!(matches!(star(&FockVector::vacuum(), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn curly_normalization_and_pairing() {
        let vac = FockVector::basis(FockMonomial::relative_vacuum(2));
        assert_eq!(curly_form(&vac, &vac, 2).unwrap(), Scalar::one());
        // {·,·} pairs C^{a,b} with C^{b,a}
        let e = FockVector::basis(mono("| e(1,+1) t(1,0) t(2,0)"));
        let t = FockVector::basis(mono("| t(1,-1) t(1,0) t(2,0)"));
        assert!(curly_form(&e, &e, 2).unwrap().is_zero());
        assert!(!curly_form(&t, &e, 2).unwrap().is_zero());
    }
}
