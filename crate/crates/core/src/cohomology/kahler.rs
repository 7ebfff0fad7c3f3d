use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::piece::{assemble_matrix, relative_pieces, relative_total_pieces, GradedPiece, PieceKey};
use super::sparse::{exact_rank_kernel, SparseMatrix};
use super::table::CohomologyRow;
use crate::algebra::{GradedBackend, Scalar};
use crate::error::Result;
use crate::fieldops::{
    build_differential_d, build_s2alpha_family, build_sl2_ehf, gram_matrix, paren_form, split_d1_d2, star,
    curly_form, LinearOp, OperatorAlgebraElement,
};
use crate::fock::{FockMonomial, FockVector};
use crate::linalg::{self, Dense};
use crate::sca::{kahler_bracket, psi, KSymbol, SCAElement, Sl2Symbol};
use crate::verify::{check_sl2_triple, commutator_on, RelationReport, SweepContext, Witness};

/// θ of an element of Ŝ′(2,α), with 𝒞 acting as `3·dim`.
pub fn realize_sca(dim: usize, alpha: &Scalar, a: &SCAElement) -> Result<OperatorAlgebraElement> {
    let mut out = OperatorAlgebraElement::scalar(a.central() * &Scalar::from_i64(3 * dim as i64));
    for (s, n, c) in a.terms() {
        out.push(c.clone(), build_s2alpha_family(dim, alpha, s, n)?);
    }
    Ok(out)
}

/// Invariant basis vectors of the relative slices `E ≤ emax`,
/// `deg_s_min ≤ Deg_S ≤ E`, tagged with their piece.
pub fn relative_basis(backend: &GradedBackend, emax: i64, deg_s_min: i64) -> Result<Vec<(PieceKey, FockVector)>> {
    let mut out = Vec::new();
    for e in 0..=emax {
        for deg_s in deg_s_min..=e {
            for p in relative_pieces(backend, e, deg_s)?.into_values() {
                let key = p.keys[0];
                out.extend(p.basis().iter().cloned().map(|v| (key, v)));
            }
        }
    }
    Ok(out)
}

fn energy_of(k: &PieceKey) -> i64 {
    match *k {
        PieceKey::Absolute { e, .. } | PieceKey::Relative { e, .. } => e,
    }
}

fn vector_witness(relation: String, v: &FockVector, lhs: &FockVector, rhs: &FockVector) -> Option<Witness> {
    let mut d = lhs.clone();
    d.sub(rhs);
    (!d.is_zero()).then(|| Witness { relation, monomial: v.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string() })
}

/// The Kähler-type package on the relative complex: bidegree split of `d`,
/// the star involution, the vacuum normalization, the adjoint of θ(𝔥₀),
/// the ψ-image relations and the exterior sl(2).
pub fn check_kahler_package(
    backend: &GradedBackend,
    emax: i64,
    deg_s_min: i64,
    ctx: &SweepContext,
) -> Result<Vec<RelationReport>> {
    let dim = backend.module_dim();
    let basis = relative_basis(backend, emax, deg_s_min)?;
    let vectors: Vec<&FockVector> = basis.iter().map(|(_, v)| v).collect();
    let mut monomials: Vec<FockMonomial> = Vec::new();
    for e in 0..=emax {
        for deg_s in deg_s_min..=e {
            monomials.extend(super::slice_monomials(backend, e, deg_s, true)?);
        }
    }
    let mut reports = Vec::new();

    // d = d₁ + d₂ with d₁: (a,b) → (a+1,b) and d₂: (a,b) → (a,b−1)
    let start = Instant::now();
    let diff = build_differential_d(backend)?;
    let (d1, d2) = split_d1_d2(&diff.d);
    let w = vectors.par_iter().find_map_first(|v| {
        let dv = diff.d.apply(v);
        let mut split = d1.apply(v);
        split.add(&d2.apply(v));
        vector_witness("d = d1 + d2".into(), v, &dv, &split)
    });
    let mut rep = RelationReport::new("kahler-d-split", &ctx.params, &ctx.box_desc);
    rep.relations = 1;
    rep.states = vectors.len();
    reports.push(rep.conclude(w, start, ctx.timing));

    // star is an involution exchanging (a,b) and (b,a)
    let start = Instant::now();
    let w = monomials.par_iter().find_map_first(|m| {
        let v = FockVector::basis(m.clone());
        let s = match star(&v, dim) {
            Ok(s) => s,
            Err(e) => return Some(Witness { relation: "star".into(), monomial: m.to_string(), lhs: e.to_string(), rhs: String::new() }),
        };
        let (a, b) = m.relative_bidegree();
        if s.iter().any(|(t, _)| t.relative_bidegree() != (b, a)) {
            return Some(Witness { relation: "star: C^{a,b} -> C^{b,a}".into(), monomial: m.to_string(), lhs: s.to_string(), rhs: format!("bidegree ({b},{a})") });
        }
        let ss = star(&s, dim).unwrap_or_else(|_| FockVector::zero());
        vector_witness("star(star(w)) = w".into(), &v, &ss, &v)
    });
    let mut rep = RelationReport::new("kahler-star", &ctx.params, &ctx.box_desc);
    rep.relations = 2;
    rep.states = monomials.len();
    reports.push(rep.conclude(w, start, ctx.timing));

    // {vac_rel, vac_rel} = 1
    let start = Instant::now();
    let vac = FockVector::basis(FockMonomial::relative_vacuum(dim));
    let norm = curly_form(&vac, &vac, dim)?;
    let w = (!norm.is_one()).then(|| Witness {
        relation: "{vac_rel, vac_rel} = 1".into(),
        monomial: vac.to_string(),
        lhs: norm.to_string(),
        rhs: "1".into(),
    });
    let mut rep = RelationReport::new("kahler-vacuum-norm", &ctx.params, &ctx.box_desc);
    rep.relations = 1;
    rep.states = 1;
    reports.push(rep.conclude(w, start, ctx.timing));

    // (θ(ψd) w₁, w₂) = (w₁, θ(ψd*) w₂) on every pair of basis vectors of equal energy
    let start = Instant::now();
    let zero = Scalar::zero();
    let a_op = realize_sca(dim, &zero, &psi(KSymbol::D))?;
    let b_op = realize_sca(dim, &zero, &psi(KSymbol::DStar))?;
    let a_img: Vec<FockVector> = vectors.par_iter().map(|v| a_op.apply(v)).collect();
    let b_img: Vec<FockVector> = vectors.par_iter().map(|v| b_op.apply(v)).collect();
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (0..basis.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| energy_of(&basis[i].0) == energy_of(&basis[j].0))
        .collect();
    let w = pairs.par_iter().find_map_first(|&(i, j)| {
        let lhs = paren_form(&a_img[i], vectors[j], dim);
        let rhs = paren_form(vectors[i], &b_img[j], dim);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => None,
            (l, r) => Some(Witness {
                relation: "(h0 w1, w2) = (w1, -p0 w2)".into(),
                monomial: format!("w1 = {}; w2 = {}", vectors[i], vectors[j]),
                lhs: l.map_or_else(|e| e.to_string(), |x| x.to_string()),
                rhs: r.map_or_else(|e| e.to_string(), |x| x.to_string()),
            }),
        }
    });
    let mut rep = RelationReport::new("kahler-adjoint", &ctx.params, &ctx.box_desc);
    rep.relations = 1;
    rep.states = vectors.len();
    rep.notes.push(format!("{} pairs of equal energy", pairs.len()));
    if w.is_some() {
        for k in [KSymbol::D, KSymbol::DStar, KSymbol::Dc, KSymbol::DcStar] {
            let op = realize_sca(dim, &zero, &psi(k))?;
            let img: Vec<FockVector> = vectors.par_iter().map(|v| op.apply(v)).collect();
            let vals = pairs
                .par_iter()
                .map(|&(i, j)| Ok((paren_form(&a_img[i], vectors[j], dim)?, paren_form(vectors[i], &img[j], dim)?)))
                .collect::<Result<Vec<_>>>()?;
            if let Some(c) = proportionality(&vals) {
                rep.notes.push(format!("adjoint of θ(ψd) is ({c})·θ(ψ{k}) on this box"));
            }
        }
    }
    reports.push(rep.conclude(w, start, ctx.timing));

    // the ψ-images satisfy the classical table
    let start = Instant::now();
    let ops: BTreeMap<KSymbol, OperatorAlgebraElement> =
        KSymbol::ALL.iter().map(|&k| Ok((k, realize_sca(dim, &zero, &psi(k))?))).collect::<Result<_>>()?;
    let mut rels = Vec::new();
    for (i, &x) in KSymbol::ALL.iter().enumerate() {
        for &y in &KSymbol::ALL[i..] {
            rels.push((x, y, kahler_bracket(x, y)));
        }
    }
    let w = vectors.par_iter().find_map_first(|v| {
        rels.iter().find_map(|(x, y, rhs)| {
            let lhs = commutator_on(&ops[x], &ops[y], v);
            let mut r = FockVector::zero();
            for (z, c) in rhs {
                r.add_scaled(&ops[z].apply(v), c);
            }
            vector_witness(format!("[{x},{y}]"), v, &lhs, &r)
        })
    });
    let mut rep = RelationReport::new("kahler-psi-relations", &ctx.params, &ctx.box_desc);
    rep.relations = rels.len();
    rep.states = vectors.len();
    if w.is_some() {
        // every failing relation on the whole basis, for the record
        for (x, y, rhs) in &rels {
            let bad = vectors.iter().filter(|v| {
                let lhs = commutator_on(&ops[x], &ops[y], v);
                let mut r = FockVector::zero();
                for (z, c) in rhs {
                    r.add_scaled(&ops[z].apply(v), c);
                }
                r.sub(&lhs);
                !r.is_zero()
            });
            let n = bad.count();
            if n > 0 {
                rep.notes.push(format!("[{x},{y}] fails on {n} of {} basis vectors", vectors.len()));
            }
        }
    }
    reports.push(rep.conclude(w, start, ctx.timing));

    reports.push(check_sl2_triple(backend, &monomials, ctx)?);
    Ok(reports)
}

/// ℍ on one relative piece: the common eigenvalue, if there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HhEigen {
    pub e: i64,
    pub deg_s: i64,
    pub a: i64,
    pub b: i64,
    pub value: Option<Scalar>,
}

/// Lefschetz data of one `(E, ±Deg_S, a − b)` piece of cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzRow {
    pub e: i64,
    pub deg_s: i64,
    pub degree: i64,
    pub coh_dim: usize,
    /// The sl(2) relations hold on every cocycle representative.
    pub sl2_on_cocycles: bool,
    /// Cocycles whose image under 𝔼 (resp. 𝔽) is not closed.
    pub ee_not_closed: usize,
    pub ff_not_closed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarmonicReport {
    pub backend: String,
    pub emax: i64,
    pub rows: Vec<CohomologyRow>,
    pub lefschetz: Vec<LefschetzRow>,
    pub hh_eigen: Vec<HhEigen>,
    /// ℍ·vac_rel, the additive normalization of ℍ.
    pub hh_vacuum: Option<Scalar>,
    /// Whether every ℍ eigenvalue equals `a + b` plus `hh_vacuum`.
    pub hh_matches_a_plus_b: bool,
    /// Whether every ℍ eigenvalue equals `a − b` plus `hh_vacuum`.
    pub hh_matches_a_minus_b: bool,
    /// Positive definite pieces where harmonic and cohomology dims differ.
    pub hodge_failures: Vec<String>,
    pub notes: Vec<String>,
}

impl HarmonicReport {
    pub fn passed(&self) -> bool {
        self.hodge_failures.is_empty() && self.lefschetz.iter().all(|l| l.sl2_on_cocycles)
    }
}

fn from_coords(piece: &GradedPiece, c: &[Scalar]) -> FockVector {
    let mut v = FockVector::zero();
    for (x, b) in c.iter().zip(piece.basis()) {
        v.add_scaled(b, x);
    }
    v
}

fn dense_adjoint(a: &SparseMatrix, g_src: &Dense, g_tgt: &Dense) -> Option<Dense> {
    let gi = linalg::inverse(g_src)?;
    let ah = linalg::conj_transpose(&a.to_dense(), a.rows(), a.cols());
    Some(linalg::mul(&linalg::mul(&gi, &ah), g_tgt))
}

fn is_hermitian(g: &Dense) -> bool {
    g.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| *x == g[j][i].conj()))
}

/// Gram signatures, harmonic dimensions and Lefschetz data on the relative
/// slices `E ≤ emax`. The form pairs `Deg_S` with `−Deg_S`, so each row
/// covers both.
pub fn harmonic_lefschetz_report(backend: &GradedBackend, emax: i64) -> Result<HarmonicReport> {
    let dim = backend.module_dim();
    let d = build_differential_d(backend)?.d;
    let ee = build_sl2_ehf(backend, Sl2Symbol::EE)?;
    let hh = build_sl2_ehf(backend, Sl2Symbol::HH)?;
    let ff = build_sl2_ehf(backend, Sl2Symbol::FF)?;
    let vac = FockVector::basis(FockMonomial::relative_vacuum(dim));
    let hv = hh.apply(&vac);
    let hh_vacuum = if hv.is_zero() { Some(Scalar::zero()) } else { Some(hv.coeff(&FockMonomial::relative_vacuum(dim))) };
    let mut rep = HarmonicReport {
        backend: backend.descriptor(),
        emax,
        rows: Vec::new(),
        lefschetz: Vec::new(),
        hh_eigen: Vec::new(),
        hh_vacuum: hh_vacuum.clone(),
        hh_matches_a_plus_b: true,
        hh_matches_a_minus_b: true,
        hodge_failures: Vec::new(),
        notes: Vec::new(),
    };
    for e in 0..=emax {
        for s in 0..=e {
            let mut merged: BTreeMap<i64, Vec<GradedPiece>> = BTreeMap::new();
            let sides: Vec<i64> = if s == 0 { vec![0] } else { vec![s, -s] };
            for &ds in &sides {
                for ((a, b), p) in relative_pieces(backend, e, ds)? {
                    let mut value = None;
                    let mut ok = true;
                    for v in p.basis() {
                        let hv = hh.apply(v);
                        let anchor = v.iter().next().map(|(m, c)| (m.clone(), c.clone()));
                        let Some((m, c)) = anchor else { continue };
                        let lam = &hv.coeff(&m) * &c.inv().expect("nonzero");
                        if hv != v.scaled(&lam) || value.as_ref().is_some_and(|x| *x != lam) {
                            ok = false;
                        }
                        value = Some(lam);
                    }
                    let value = if ok { value } else { None };
                    let shifted = |k: i64| hh_vacuum.as_ref().map(|h| h + &Scalar::from_i64(k));
                    if value.is_none() || value != shifted(a + b) {
                        rep.hh_matches_a_plus_b = false;
                    }
                    if value.is_none() || value != shifted(a - b) {
                        rep.hh_matches_a_minus_b = false;
                    }
                    rep.hh_eigen.push(HhEigen { e, deg_s: ds, a, b, value });
                }
                for (i, p) in relative_total_pieces(backend, e, ds)? {
                    merged.entry(i).or_default().push(p);
                }
            }
            let pieces: BTreeMap<i64, GradedPiece> =
                merged.into_iter().map(|(i, ps)| (i, GradedPiece::merge(backend, ps))).collect();
            let empty = GradedPiece::merge(backend, Vec::new());
            let mut mats = BTreeMap::new();
            for (&i, p) in &pieces {
                mats.insert(i, assemble_matrix(&d, p, pieces.get(&(i + 1)).unwrap_or(&empty))?);
            }
            let grams: BTreeMap<i64, Dense> = pieces
                .iter()
                .map(|(&i, p)| Ok((i, gram_matrix(p.basis(), dim)?)))
                .collect::<Result<_>>()?;
            let all_zero = mats.values().all(SparseMatrix::is_zero);
            for (&i, p) in &pieces {
                let rank_in = mats.get(&(i - 1)).map_or(0, |m| exact_rank_kernel(m).0);
                let (rank_out, cocycles) = exact_rank_kernel(&mats[&i]);
                let coh = p.dim() - rank_in - rank_out;
                let g = &grams[&i];
                if !is_hermitian(g) {
                    rep.notes.push(format!("Gram matrix not Hermitian at E={e},DegS=±{s},degree {i}"));
                }
                let sig = linalg::hermitian_signature(g);
                let harmonic = if all_zero {
                    Some(p.dim())
                } else {
                    laplacian_kernel(&mats, &grams, i, p.dim())
                };
                if harmonic.is_none() {
                    rep.notes.push(format!("E={e},DegS=±{s},degree {i}: degenerate form, harmonic claim skipped"));
                }
                let definite = sig == (p.dim(), 0, 0);
                if definite {
                    if let Some(h) = harmonic {
                        if h != coh {
                            rep.hodge_failures.push(format!("E={e},DegS=±{s},degree {i}: harmonic {h} vs cohomology {coh}"));
                        }
                    }
                } else if p.dim() > 0 && harmonic.is_some() && !all_zero {
                    rep.notes.push(format!("E={e},DegS=±{s},degree {i}: indefinite form, Hodge comparison skipped"));
                }
                rep.rows.push(CohomologyRow {
                    e,
                    deg_s: s,
                    degree: i,
                    dim: p.dim(),
                    rank_in,
                    rank_out,
                    coh_dim: coh,
                    gram_signature: Some(sig),
                    harmonic_dim: harmonic,
                });
                // Lefschetz data on cocycle representatives
                let reps: Vec<FockVector> = cocycles.iter().map(|c| from_coords(p, c)).collect();
                let mut sl2_ok = true;
                let (mut e_bad, mut f_bad) = (0, 0);
                for z in &reps {
                    let checks = [
                        (commutator_on(&ee, &ff, z), hh.apply(z)),
                        (commutator_on(&hh, &ee, z), ee.apply(z).scaled(&Scalar::from_i64(2))),
                        (commutator_on(&hh, &ff, z), ff.apply(z).scaled(&Scalar::from_i64(-2))),
                    ];
                    if checks.iter().any(|(l, r)| l != r) {
                        sl2_ok = false;
                    }
                    if !d.apply(&ee.apply(z)).is_zero() {
                        e_bad += 1;
                    }
                    if !d.apply(&ff.apply(z)).is_zero() {
                        f_bad += 1;
                    }
                }
                rep.lefschetz.push(LefschetzRow {
                    e,
                    deg_s: s,
                    degree: i,
                    coh_dim: coh,
                    sl2_on_cocycles: sl2_ok,
                    ee_not_closed: e_bad,
                    ff_not_closed: f_bad,
                });
            }
        }
    }
    Ok(rep)
}

/// `dim ker Δ` at degree `i` with `Δ = d d* + d* d`; `None` when a Gram
/// matrix involved is singular.
fn laplacian_kernel(mats: &BTreeMap<i64, SparseMatrix>, grams: &BTreeMap<i64, Dense>, i: i64, n: usize) -> Option<usize> {
    let empty: Dense = Vec::new();
    let g = grams.get(&i)?;
    let mut lap = linalg::zeros(n, n);
    if let (Some(din), Some(gp)) = (mats.get(&(i - 1)), grams.get(&(i - 1))) {
        if din.cols() > 0 {
            let adj = dense_adjoint(din, gp, g)?;
            lap = linalg::add(&lap, &linalg::mul(&din.to_dense(), &adj), &Scalar::one());
        }
    }
    let dout = mats.get(&i)?;
    if dout.rows() > 0 {
        let gn = grams.get(&(i + 1)).unwrap_or(&empty);
        let adj = dense_adjoint(dout, g, gn)?;
        lap = linalg::add(&lap, &linalg::mul(&adj, &dout.to_dense()), &Scalar::one());
    }
    Some(n - linalg::dense_rank(&lap))
}

/// The constant `c` with `l = c·r` for every pair, when one exists and the
/// pairs are not all zero.
fn proportionality(vals: &[(Scalar, Scalar)]) -> Option<Scalar> {
    let (l0, r0) = vals.iter().find(|(_, r)| !r.is_zero())?;
    let c = l0 * &r0.inv()?;
    vals.iter().all(|(l, r)| *l == &c * r).then_some(c)
}
