use std::collections::BTreeMap;

use proptest::prelude::*;
use sweil_core::cohomology::{
    absolute_pieces, assemble_matrix, cohomology_table, exact_rank_kernel, koszul_box, relative_pieces,
    slice_complex, SparseMatrix, TableRanges,
};
use sweil_core::fieldops::{build_differential_d, build_koszul_h, FieldOperator};
use sweil_core::linalg::{self, Dense};
use sweil_core::{GradedBackend, Scalar};

/// Rank by plain row reduction, written independently of the library.
fn naive_rank(m: &Dense) -> usize {
    let mut a = m.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].inv().unwrap();
        let pivot: Vec<Scalar> = a[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &(y * &f);
                }
            }
        }
        a[rank] = pivot;
        rank += 1;
    }
    rank
}

fn entry() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        3 => Just(Scalar::zero()),
        2 => (-2i64..=2, -2i64..=2).prop_map(|(a, b)| Scalar::gaussian(a, b)),
        1 => (-3i64..=3, 1i64..=3).prop_map(|(a, b)| Scalar::frac(a, b)),
    ]
}

fn matrix() -> impl Strategy<Value = (usize, usize, Dense)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(entry(), c), r).prop_map(move |m| (r, c, m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sparse_rank_matches_oracles((_r, c, m) in matrix()) {
        let s = SparseMatrix::from_dense(&m, c);
        let (rank, kernel) = exact_rank_kernel(&s);
        prop_assert_eq!(rank, naive_rank(&m));
        prop_assert_eq!(rank, linalg::dense_rank(&m));
        prop_assert_eq!(rank + kernel.len(), c);
        for v in &kernel {
            for row in &m {
                prop_assert!(row.iter().zip(v).map(|(a, b)| a * b).sum::<Scalar>().is_zero());
            }
        }
    }

    #[test]
    fn rank_is_permutation_invariant(
        (r, c, m) in matrix(),
        seed in any::<u64>(),
    ) {
        let mut rows: Vec<usize> = (0..r).collect();
        let mut cols: Vec<usize> = (0..c).collect();
        shuffle(&mut rows, seed);
        shuffle(&mut cols, seed.rotate_left(17));
        let p: Dense = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let a = exact_rank_kernel(&SparseMatrix::from_dense(&m, c)).0;
        let b = exact_rank_kernel(&SparseMatrix::from_dense(&p, c)).0;
        prop_assert_eq!(a, b);
    }
}

fn shuffle(v: &mut [usize], mut seed: u64) {
    for i in (1..v.len()).rev() {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (seed >> 33) as usize % (i + 1));
    }
}

#[test]
fn koszul_on_beta_zero_is_one() {
    let be = GradedBackend::loop_abelian(1);
    let src = absolute_pieces(&be, 0, -1).unwrap().remove(&0).unwrap();
    let tgt = absolute_pieces(&be, 0, 0).unwrap().remove(&-1).unwrap();
    assert_eq!(src.dim(), 1);
    assert_eq!(tgt.dim(), 1);
    let m = assemble_matrix(&build_koszul_h(&be), &src, &tgt).unwrap();
    assert_eq!(m.to_dense(), vec![vec![Scalar::one()]]);
}

#[test]
fn zero_operators_give_zero_matrices() {
    let be = GradedBackend::loop_abelian(2);
    let d = build_differential_d(&be).unwrap().d;
    let zero = FieldOperator::new("zero", true, 0, (0, 1), Vec::new(), Scalar::zero()).unwrap();
    let ps = absolute_pieces(&be, 2, 0).unwrap();
    for (k, src) in &ps {
        if let Some(tgt) = ps.get(&(k + 1)) {
            assert!(assemble_matrix(&d, src, tgt).unwrap().is_zero());
            assert!(assemble_matrix(&zero, src, tgt).unwrap().is_zero());
        }
    }
}

/// Homology of the Chevalley–Eilenberg chain complex of sl(2) in the basis
/// e, f, h, built from scratch.
fn sl2_lie_homology() -> Vec<usize> {
    // [e,f] = h, [h,e] = 2e, [h,f] = −2f
    let br = |i: usize, j: usize| -> Vec<(usize, i64)> {
        match (i, j) {
            (0, 1) => vec![(2, 1)],
            (1, 0) => vec![(2, -1)],
            (2, 0) => vec![(0, 2)],
            (0, 2) => vec![(0, -2)],
            (2, 1) => vec![(1, -2)],
            (1, 2) => vec![(1, 2)],
            _ => vec![],
        }
    };
    let subsets = |k: usize| -> Vec<Vec<usize>> { (0u8..8).filter(|m| m.count_ones() as usize == k).map(|m| (0..3).filter(|i| m >> i & 1 == 1).collect()).collect() };
    // sign of sorting a wedge word, or None when it repeats a factor
    let normalize = |w: Vec<usize>| -> Option<(Vec<usize>, i64)> {
        let mut w = w;
        let mut sign = 1;
        for i in 0..w.len() {
            for j in 0..w.len() - 1 - i {
                if w[j] == w[j + 1] {
                    return None;
                }
                if w[j] > w[j + 1] {
                    w.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if w.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        Some((w, sign))
    };
    let mut ranks = BTreeMap::new();
    for k in 1..=3 {
        let src = subsets(k);
        let tgt = subsets(k - 1);
        let mut m = linalg::zeros(tgt.len(), src.len());
        for (c, s) in src.iter().enumerate() {
            for a in 0..k {
                for b in a + 1..k {
                    let rest: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != a && t != b).map(|(_, &x)| x).collect();
                    let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                    for (x, coef) in br(s[a], s[b]) {
                        let mut w = vec![x];
                        w.extend(&rest);
                        if let Some((w, sg)) = normalize(w) {
                            let r = tgt.iter().position(|t| *t == w).unwrap();
                            m[r][c] += Scalar::from_i64(-sign * sg * coef);
                        }
                    }
                }
            }
        }
        ranks.insert(k, naive_rank(&m));
    }
    (0..=3)
        .map(|k| {
            let dim = subsets(k).len();
            dim - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k + 1)).copied().unwrap_or(0)
        })
        .collect()
}

#[test]
fn mode_zero_slice_is_lie_algebra_homology() {
    let oracle = sl2_lie_homology();
    assert_eq!(oracle, vec![1, 0, 0, 1]);
    let be = GradedBackend::loop_sl2();
    let d = build_differential_d(&be).unwrap().d;
    let (rows, audit) = slice_complex(&be, &d, 0, 0, false).unwrap().rows().unwrap();
    assert!(audit.passed());
    // k mode-0 τ's sit in Deg_Λ = −k
    let coh: BTreeMap<i64, usize> = rows.iter().map(|r| (-r.degree, r.coh_dim)).collect();
    let dims: BTreeMap<i64, usize> = rows.iter().map(|r| (-r.degree, r.dim)).collect();
    assert_eq!(dims.values().copied().collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    assert_eq!(coh.values().copied().collect::<Vec<_>>(), oracle);
}

#[test]
fn absolute_slice_ranks_are_consistent() {
    let be = GradedBackend::loop_sl2();
    let d = build_differential_d(&be).unwrap().d;
    let (rows, audit) = slice_complex(&be, &d, 1, 0, false).unwrap().rows().unwrap();
    assert!(audit.passed(), "{audit:?}");
    for r in rows {
        assert_eq!(r.dim, r.rank_in + r.rank_out + r.coh_dim);
    }
}

#[test]
fn relative_projection_fixtures() {
    let sl2 = GradedBackend::loop_sl2();
    // no invariant in the adjoint representation
    assert!(relative_pieces(&sl2, 0, -1).unwrap().is_empty());
    let vac = relative_pieces(&sl2, 0, 0).unwrap();
    assert_eq!(vac.get(&(0, 0)).map(|p| p.dim()), Some(1));
    // θ = 0 on abelian backends: projection keeps every monomial
    let ab = GradedBackend::loop_abelian(2);
    for (_, p) in relative_pieces(&ab, 2, 0).unwrap() {
        assert_eq!(p.dim(), p.monomials().len());
    }
}

#[test]
fn abelian_relative_cohomology_is_everything() {
    let be = GradedBackend::loop_abelian(1);
    let d = build_differential_d(&be).unwrap().d;
    let t = cohomology_table(&be, &d, "d", &TableRanges { emax: 2, deg_s_min: -2, relative: true }).unwrap();
    assert!(!t.rows.is_empty());
    assert!(t.audit.passed());
    for r in &t.rows {
        assert_eq!(r.coh_dim, r.dim);
    }
}

#[test]
fn relative_sl2_table_passes_the_audit() {
    let be = GradedBackend::loop_sl2();
    let d = build_differential_d(&be).unwrap().d;
    let t = cohomology_table(&be, &d, "d", &TableRanges { emax: 2, deg_s_min: -2, relative: true }).unwrap();
    assert!(t.audit.passed(), "{:?}", t.audit);
    assert!(t.audit.matrices > 0);
    // vac_rel spans the E = 0, Deg_S = 0 cohomology
    let r = t.rows.iter().find(|r| r.e == 0 && r.deg_s == 0).unwrap();
    assert_eq!((r.dim, r.coh_dim), (1, 1));
}

#[test]
fn koszul_boxes_are_acyclic() {
    for be in [GradedBackend::loop_abelian(1), GradedBackend::loop_sl2()] {
        for c in 0..be.module_dim() {
            for m in -2..=2 {
                let k = koszul_box(&be, c, m, 4).unwrap();
                assert!(k.passed(), "{k:?}");
            }
        }
    }
}
