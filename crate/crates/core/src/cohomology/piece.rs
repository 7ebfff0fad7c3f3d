use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::sparse::{reduce, SparseMatrix};
use crate::algebra::{GradedBackend, Scalar};
use crate::error::{Error, Result};
use crate::fieldops::{build_theta_adjoint, LinearOp};
use crate::fock::{enumerate_box, FockBox, FockMonomial, FockVector};

/// Constraints cutting out a finite piece of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PieceKey {
    Absolute { e: i64, deg_s: i64, deg_lambda: i64 },
    Relative { e: i64, deg_s: i64, a: i64, b: i64 },
}

impl fmt::Display for PieceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceKey::Absolute { e, deg_s, deg_lambda } => write!(f, "E={e},DegS={deg_s},DegL={deg_lambda}"),
            PieceKey::Relative { e, deg_s, a, b } => write!(f, "E={e},DegS={deg_s},a={a},b={b},rel"),
        }
    }
}

/// A finite piece: an ordered basis of vectors supported on an ordered list
/// of monomials. Basis vector `k` has coefficient 1 on monomial
/// `anchor[k]` and 0 on every other anchor, which makes coordinates direct.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub backend: String,
    pub keys: Vec<PieceKey>,
    pub relative: bool,
    monomials: Vec<FockMonomial>,
    index: HashMap<FockMonomial, usize>,
    basis: Vec<FockVector>,
    anchors: Vec<usize>,
}

impl GradedPiece {
    fn from_monomials(backend: &GradedBackend, key: PieceKey, monomials: Vec<FockMonomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let basis = monomials.iter().cloned().map(FockVector::basis).collect();
        let anchors = (0..monomials.len()).collect();
        GradedPiece {
            backend: backend.descriptor(),
            keys: vec![key],
            relative: matches!(key, PieceKey::Relative { .. }),
            monomials,
            index,
            basis,
            anchors,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FockVector] {
        &self.basis
    }

    pub fn monomials(&self) -> &[FockMonomial] {
        &self.monomials
    }

    /// Coordinates of `v` in the basis; a structural error when `v` does not
    /// lie in the span.
    pub fn coordinates(&self, v: &FockVector) -> Result<Vec<Scalar>> {
        if let Some((m, _)) = v.iter().find(|(m, _)| !self.index.contains_key(*m)) {
            return Err(Error::Structural(format!("{m} lies outside the piece {}", self.describe())));
        }
        let coords: Vec<Scalar> = self.anchors.iter().map(|&a| v.coeff(&self.monomials[a])).collect();
        if !self.relative {
            return Ok(coords);
        }
        let mut residual = v.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            residual.add_scaled(b, &-c);
        }
        if !residual.is_zero() {
            return Err(Error::Structural(format!("vector leaves the invariant part of {}", self.describe())));
        }
        Ok(coords)
    }

    pub fn describe(&self) -> String {
        let keys: Vec<String> = self.keys.iter().map(ToString::to_string).collect();
        keys.join(" + ")
    }

    /// Direct sum of pieces with pairwise disjoint monomial supports.
    pub fn merge(backend: &GradedBackend, pieces: Vec<GradedPiece>) -> GradedPiece {
        let mut out = GradedPiece {
            backend: backend.descriptor(),
            keys: Vec::new(),
            relative: pieces.iter().any(|p| p.relative),
            monomials: Vec::new(),
            index: HashMap::new(),
            basis: Vec::new(),
            anchors: Vec::new(),
        };
        for p in pieces {
            let offset = out.monomials.len();
            out.keys.extend(p.keys);
            for m in p.monomials {
                out.index.insert(m.clone(), out.monomials.len());
                out.monomials.push(m);
            }
            out.basis.extend(p.basis);
            out.anchors.extend(p.anchors.into_iter().map(|a| a + offset));
        }
        out
    }
}

/// Monomials of energy exactly `e` and bosonic degree `deg_s`; all mode-0
/// boson counts are covered since `#β ≤ e − deg_s` there.
pub fn slice_monomials(backend: &GradedBackend, e: i64, deg_s: i64, relative: bool) -> Result<Vec<FockMonomial>> {
    if e < 0 || e - deg_s < 0 {
        return Ok(Vec::new());
    }
    let bx = FockBox {
        emax: e,
        b0max: (e - deg_s) as usize,
        zero_fermions_allowed: !relative,
        deg_s: Some(deg_s),
        deg_lambda: None,
    };
    let mut ms = enumerate_box(backend.module_dim(), &bx)?;
    ms.retain(|m| m.energy() == e);
    Ok(ms)
}

/// Absolute pieces of a slice, keyed by `Deg_Λ`.
pub fn absolute_pieces(backend: &GradedBackend, e: i64, deg_s: i64) -> Result<BTreeMap<i64, GradedPiece>> {
    let mut groups: BTreeMap<i64, Vec<FockMonomial>> = BTreeMap::new();
    for m in slice_monomials(backend, e, deg_s, false)? {
        groups.entry(m.energy_and_degrees().2).or_default().push(m);
    }
    Ok(groups
        .into_iter()
        .map(|(dl, ms)| (dl, GradedPiece::from_monomials(backend, PieceKey::Absolute { e, deg_s, deg_lambda: dl }, ms)))
        .collect())
}

/// Relative pieces `C^{a,b}` of a slice after the invariance projection.
pub fn relative_pieces(backend: &GradedBackend, e: i64, deg_s: i64) -> Result<BTreeMap<(i64, i64), GradedPiece>> {
    let mut groups: BTreeMap<(i64, i64), Vec<FockMonomial>> = BTreeMap::new();
    for m in slice_monomials(backend, e, deg_s, true)? {
        groups.entry(m.relative_bidegree()).or_default().push(m);
    }
    let mut out = BTreeMap::new();
    for ((a, b), ms) in groups {
        let raw = GradedPiece::from_monomials(backend, PieceKey::Relative { e, deg_s, a, b }, ms);
        let p = relative_projection(backend, &raw)?;
        if p.dim() > 0 {
            out.insert((a, b), p);
        }
    }
    Ok(out)
}

/// Relative pieces of a slice merged by total degree `a − b`.
pub fn relative_total_pieces(backend: &GradedBackend, e: i64, deg_s: i64) -> Result<BTreeMap<i64, GradedPiece>> {
    let mut by_degree: BTreeMap<i64, Vec<GradedPiece>> = BTreeMap::new();
    for ((a, b), p) in relative_pieces(backend, e, deg_s)? {
        by_degree.entry(a - b).or_default().push(p);
    }
    Ok(by_degree.into_iter().map(|(i, ps)| (i, GradedPiece::merge(backend, ps))).collect())
}

/// Joint kernel of θ(x) for the basis `x` of the acting algebra at mode 0,
/// inside the span of `piece`'s monomials.
pub fn relative_projection(backend: &GradedBackend, piece: &GradedPiece) -> Result<GradedPiece> {
    if backend.algebra().is_none() {
        return Err(Error::Unsupported(format!("{backend} has no mode-0 subalgebra to project on")));
    }
    if piece.monomials.iter().any(|m| !m.is_relative(backend.module_dim())) {
        return Err(Error::Domain("relative projection needs relative monomials".into()));
    }
    let thetas = (0..backend.acting_dim()).map(|j| build_theta_adjoint(backend, j, 0)).collect::<Result<Vec<_>>>()?;
    let mut rows: BTreeMap<(usize, FockMonomial), usize> = BTreeMap::new();
    let images: Vec<Vec<FockVector>> = piece
        .monomials
        .par_iter()
        .map(|m| thetas.iter().map(|t| t.apply_monomial(m)).collect())
        .collect();
    for per_op in &images {
        for (j, img) in per_op.iter().enumerate() {
            for (m, _) in img.iter() {
                let n = rows.len();
                rows.entry((j, m.clone())).or_insert(n);
            }
        }
    }
    let columns = images
        .iter()
        .map(|per_op| {
            let mut col = BTreeMap::new();
            for (j, img) in per_op.iter().enumerate() {
                for (m, c) in img.iter() {
                    col.insert(rows[&(j, m.clone())], c.clone());
                }
            }
            col
        })
        .collect();
    let mat = SparseMatrix::from_columns(rows.len(), columns)?;
    let red = reduce(&mat);
    let mut out = piece.clone();
    out.relative = true;
    out.anchors = red.free;
    out.basis.clear();
    for v in red.kernel {
        out.basis.push(
            v.iter()
                .zip(&piece.monomials)
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, m)| (m.clone(), x.clone()))
                .collect(),
        );
    }
    Ok(out)
}

/// Matrix of `op` from `src` to `tgt`: column `j` holds the coordinates of
/// `op(basis_j)`.
pub fn assemble_matrix(op: &dyn LinearOp, src: &GradedPiece, tgt: &GradedPiece) -> Result<SparseMatrix> {
    let columns = src
        .basis
        .par_iter()
        .map(|b| {
            let coords = tgt.coordinates(&op.apply(b))?;
            Ok(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        })
        .collect::<Result<Vec<BTreeMap<usize, Scalar>>>>()?;
    SparseMatrix::from_columns(tgt.dim(), columns)
}
