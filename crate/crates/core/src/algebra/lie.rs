//! Finite-dimensional Lie algebras given by structure constants, with an
//! optional invariant form.

use serde::Serialize;

use super::Scalar;
use crate::error::{Error, Result};
use crate::linalg::dense_rank;

/// `[v_i, v_j] = Σ_k c[i][j][k] v_k`, plus an optional Gram matrix `B[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    pub name: String,
    dim: usize,
    structure: Vec<Scalar>,
    form: Option<Vec<Scalar>>,
}

/// Outcome of a structural check on a Lie algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    /// First violating basis triple, if any.
    pub witness: Option<(usize, usize, usize)>,
    pub detail: String,
}

impl VerificationReport {
    fn pass(check: &str) -> Self {
        VerificationReport { check: check.into(), passed: true, witness: None, detail: String::new() }
    }

    fn fail(check: &str, witness: (usize, usize, usize), detail: String) -> Self {
        VerificationReport { check: check.into(), passed: false, witness: Some(witness), detail }
    }
}

/// Nonzero structure constants of sl(2) in the basis `{e+f, i(e−f), h}`,
/// orthonormal for one half of the trace form: `[v_a, v_b] = −2i ε_abc v_c`.
const SL2_ORTHONORMAL: [(usize, usize, usize, &str); 6] = [
    (0, 1, 2, "-2i"),
    (1, 0, 2, "2i"),
    (1, 2, 0, "-2i"),
    (2, 1, 0, "2i"),
    (2, 0, 1, "-2i"),
    (0, 2, 1, "2i"),
];

impl LieAlgebraSpec {
    /// Build from a flat `dim³` constant array and an optional flat `dim²`
    /// form. Only the shapes are validated here; use [`check_jacobi`] and
    /// [`check_invariant_form`] for the algebraic conditions.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        structure: Vec<Scalar>,
        form: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Structural("Lie algebra dimension must be positive".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::Structural(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                structure.len()
            )));
        }
        if let Some(f) = &form {
            if f.len() != dim * dim {
                return Err(Error::Structural(format!(
                    "expected {} form entries, got {}",
                    dim * dim,
                    f.len()
                )));
            }
        }
        Ok(LieAlgebraSpec { name: name.into(), dim, structure, form })
    }

    /// Abelian algebra of dimension `dim` with the identity form.
    pub fn abelian(dim: usize) -> Self {
        let mut form = vec![Scalar::zero(); dim * dim];
        for i in 0..dim {
            form[i * dim + i] = Scalar::one();
        }
        LieAlgebraSpec::new(format!("abelian:{dim}"), dim, vec![Scalar::zero(); dim * dim * dim], Some(form))
            .expect("abelian shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let d = self.dim;
        self.structure[(i * d + j) * d + k] = value;
    }

    pub fn form(&self) -> Option<&[Scalar]> {
        self.form.as_deref()
    }

    pub fn form_entry(&self, i: usize, j: usize) -> Option<&Scalar> {
        self.form.as_ref().map(|f| &f[i * self.dim + j])
    }

    /// True when the form is present and equal to the identity matrix.
    pub fn has_orthonormal_form(&self) -> bool {
        match &self.form {
            None => false,
            Some(f) => (0..self.dim).all(|i| {
                (0..self.dim).all(|j| f[i * self.dim + j] == if i == j { Scalar::one() } else { Scalar::zero() })
            }),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Scalar::is_zero)
    }

    /// `[v_i, v_j]` as `(k, c)` pairs with `c ≠ 0`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        (0..self.dim)
            .filter_map(|k| {
                let c = self.constant(i, j, k);
                (!c.is_zero()).then(|| (k, c.clone()))
            })
            .collect()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = vec![Scalar::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, c) in self.bracket_basis(i, j) {
                    out[k] += &xy * &c;
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let f = self.form.as_ref().expect("form present");
        let d = self.dim;
        let mut s = Scalar::zero();
        for i in 0..d {
            for j in 0..d {
                if !x[i].is_zero() && !y[j].is_zero() {
                    s += &x[i] * &y[j] * &f[i * d + j];
                }
            }
        }
        s
    }
}

/// Antisymmetry and the Jacobi identity on all basis triples.
pub fn check_jacobi(spec: &LieAlgebraSpec) -> VerificationReport {
    let d = spec.dim;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if *spec.constant(i, j, k) != -spec.constant(j, i, k) {
                    return VerificationReport::fail(
                        "jacobi",
                        (i, j, k),
                        format!("antisymmetry fails: c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]"),
                    );
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (spec.basis(i), spec.basis(j), spec.basis(k));
                let a = spec.bracket(&x, &spec.bracket(&y, &z));
                let b = spec.bracket(&y, &spec.bracket(&z, &x));
                let c = spec.bracket(&z, &spec.bracket(&x, &y));
                if a.iter().zip(&b).zip(&c).any(|((p, q), r)| !(p + q + r).is_zero()) {
                    return VerificationReport::fail(
                        "jacobi",
                        (i, j, k),
                        format!("Jacobi sum nonzero on (v{i}, v{j}, v{k})"),
                    );
                }
            }
        }
    }
    VerificationReport::pass("jacobi")
}

/// Symmetry, nondegeneracy and invariance `B([x,y],z) + B(y,[x,z]) = 0`.
pub fn check_invariant_form(spec: &LieAlgebraSpec) -> Result<VerificationReport> {
    let form = spec
        .form
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} carries no invariant form", spec.name)))?;
    let d = spec.dim;
    for i in 0..d {
        for j in 0..d {
            if form[i * d + j] != form[j * d + i] {
                return Ok(VerificationReport::fail("invariant-form", (i, j, 0), "form not symmetric".into()));
            }
        }
    }
    let rows: Vec<Vec<Scalar>> = (0..d).map(|i| form[i * d..(i + 1) * d].to_vec()).collect();
    let rank = dense_rank(&rows);
    if rank < d {
        return Ok(VerificationReport::fail(
            "invariant-form",
            (0, 0, 0),
            format!("form degenerate: rank {rank} < {d}"),
        ));
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (x, y, z) = (spec.basis(i), spec.basis(j), spec.basis(k));
                let lhs = spec.pair(&spec.bracket(&x, &y), &z) + spec.pair(&y, &spec.bracket(&x, &z));
                if !lhs.is_zero() {
                    return Ok(VerificationReport::fail(
                        "invariant-form",
                        (i, j, k),
                        format!("B([v{i},v{j}],v{k}) + B(v{j},[v{i},v{k}]) = {lhs}"),
                    ));
                }
            }
        }
    }
    Ok(VerificationReport::pass("invariant-form"))
}

/// sl(2) in an orthonormal basis over ℚ(i).
pub fn builtin_sl2_orthonormal() -> LieAlgebraSpec {
    let mut spec = LieAlgebraSpec::new("sl2", 3, vec![Scalar::zero(); 27], None).expect("shape");
    for (i, j, k, c) in SL2_ORTHONORMAL {
        spec.set_constant(i, j, k, c.parse().expect("fixture constant"));
    }
    let mut form = vec![Scalar::zero(); 9];
    for i in 0..3 {
        form[i * 3 + i] = Scalar::one();
    }
    spec.form = Some(form);
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_passes_both_checks() {
        let a = LieAlgebraSpec::abelian(3);
        assert!(check_jacobi(&a).passed);
        assert!(check_invariant_form(&LieAlgebraSpec::abelian(1)).unwrap().passed);
    }

    #[test]
    fn sl2_orthonormal_is_a_lie_algebra_with_invariant_form() {
        let s = builtin_sl2_orthonormal();
        assert!(check_jacobi(&s).passed);
        assert!(check_invariant_form(&s).unwrap().passed);
        assert!(s.has_orthonormal_form());
        // [v_0, v_1] is a nonzero multiple of v_2
        let b = s.bracket_basis(0, 1);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].0, 2);
    }

    #[test]
    fn sl2_matches_matrix_commutators() {
        // independent route: 2x2 matrices e+f, i(e-f), h
        type M = [[Scalar; 2]; 2];
        let z = Scalar::zero;
        let i = Scalar::i;
        let v: [M; 3] = [
            [[z(), Scalar::one()], [Scalar::one(), z()]],
            [[z(), i()], [-i(), z()]],
            [[Scalar::one(), z()], [z(), -Scalar::one()]],
        ];
        let mul = |a: &M, b: &M| -> M {
            let mut c: M = [[z(), z()], [z(), z()]];
            for r in 0..2 {
                for s in 0..2 {
                    c[r][s] = &a[r][0] * &b[0][s] + &a[r][1] * &b[1][s];
                }
            }
            c
        };
        let s = builtin_sl2_orthonormal();
        for a in 0..3 {
            for b in 0..3 {
                let ab = mul(&v[a], &v[b]);
                let ba = mul(&v[b], &v[a]);
                let mut expect: M = [[z(), z()], [z(), z()]];
                for (k, c) in s.bracket_basis(a, b) {
                    for r in 0..2 {
                        for t in 0..2 {
                            expect[r][t] += &c * &v[k][r][t];
                        }
                    }
                }
                for r in 0..2 {
                    for t in 0..2 {
                        assert_eq!(&ab[r][t] - &ba[r][t], expect[r][t], "[v{a}, v{b}]");
                    }
                }
            }
        }
    }

    #[test]
    fn perturbed_constant_breaks_jacobi() {
        let mut s = builtin_sl2_orthonormal();
        s.set_constant(0, 1, 0, Scalar::one());
        s.set_constant(1, 0, 0, -Scalar::one());
        let r = check_jacobi(&s);
        assert!(!r.passed);
        assert!(r.witness.is_some());
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let mut s = builtin_sl2_orthonormal();
        let mut f = s.form().unwrap().to_vec();
        f[8] = Scalar::zero();
        s.form = Some(f);
        let r = check_invariant_form(&s).unwrap();
        assert!(!r.passed);
        assert!(r.detail.contains("degenerate"));
    }

    #[test]
    fn missing_form_is_unsupported() {
        let s = LieAlgebraSpec::new("bare", 1, vec![Scalar::zero()], None).unwrap();
        assert!(matches!(check_invariant_form(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bad_shapes_are_structural_errors() {
        assert!(matches!(
            LieAlgebraSpec::new("x", 2, vec![Scalar::zero(); 7], None),
            Err(Error::Structural(_))
        ));
        assert!(matches!(LieAlgebraSpec::new("x", 0, vec![], None), Err(Error::Structural(_))));
    }
}
