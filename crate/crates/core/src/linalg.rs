//! Small dense exact linear algebra over ℚ(i).
//!
//! This is the straightforward row-reduction used for Gram matrices, tiny
//! structural checks and as the reference against which the sparse engine in
//! [`crate::cohomology`] is compared.

use crate::algebra::Scalar;

pub type Dense = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Dense {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

fn ncols(m: &Dense) -> usize {
    m.first().map_or(0, Vec::len)
}

/// Reduced row echelon form; returns the pivot columns in order.
pub fn rref(m: &mut Dense) -> Vec<usize> {
    let rows = m.len();
    let cols = ncols(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn dense_rank(m: &Dense) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of the right null space, one vector per free column.
pub fn kernel(m: &Dense, cols: usize) -> Dense {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -w[r][free].clone();
        }
        out.push(v);
    }
    out
}

pub fn inverse(m: &Dense) -> Option<Dense> {
    let n = m.len();
    let mut aug: Dense = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = ncols(a);
    let m = ncols(b);
    let mut c = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    c[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    c
}

pub fn add(a: &Dense, b: &Dense, scale: &Scalar) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + &(y * scale)).collect())
        .collect()
}

pub fn conj_transpose(a: &Dense, rows: usize, cols: usize) -> Dense {
    let mut t = zeros(cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            t[j][i] = a[i][j].conj();
        }
    }
    t
}

pub fn is_zero(a: &Dense) -> bool {
    a.iter().all(|r| r.iter().all(Scalar::is_zero))
}

/// Inertia `(positive, negative, zero)` of a Hermitian matrix, by exact
/// congruence diagonalization.
pub fn hermitian_signature(g: &Dense) -> (usize, usize, usize) {
    let mut a = g.clone();
    let n = a.len();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    while !active.is_empty() {
        let diag = active.iter().position(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(k) => active[k],
            None => {
                let pair = active.iter().find_map(|&i| {
                    active.iter().find(|&&j| j != i && !a[i][j].is_zero()).map(|&j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // row i += a_ij·(row j), col i += conj(a_ij)·(col j): a_ii = 2|a_ij|²
                let c = a[i][j].clone();
                let cc = c.conj();
                for k in 0..n {
                    let t = &c * &a[j][k];
                    a[i][k] += &t;
                }
                for k in 0..n {
                    let t = &cc * &a[k][j];
                    a[k][i] += &t;
                }
                i
            }
        };
        let d = a[p][p].clone();
        match d.real_sign().expect("Hermitian diagonal is real") {
            std::cmp::Ordering::Greater => pos += 1,
            std::cmp::Ordering::Less => neg += 1,
            std::cmp::Ordering::Equal => unreachable!("pivot is nonzero"),
        }
        let dinv = d.inv().expect("nonzero");
        active.retain(|&i| i != p);
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] * &dinv;
            for &k in &active {
                let t = &f * &a[p][k];
                a[i][k] -= &t;
            }
        }
        for &i in &active {
            a[i][p] = Scalar::zero();
            a[p][i] = Scalar::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn rank_of_gaussian_rank_one_matrix() {
        let m = vec![vec![s("1"), s("i")], vec![s("-i"), s("1")]];
        assert_eq!(dense_rank(&m), 1);
        let k = kernel(&m, 2);
        assert_eq!(k.len(), 1);
        let prod = mul(&m, &k.iter().map(|v| v.iter().map(|x| vec![x.clone()]).collect::<Dense>()).next().unwrap());
        assert!(is_zero(&prod));
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![s("2"), s("1+i")], vec![s("0"), s("3")]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(2));
        assert!(inverse(&vec![vec![s("1"), s("2")], vec![s("2"), s("4")]]).is_none());
    }

    #[test]
    fn signature_of_hyperbolic_plane_and_diagonal() {
        let h = vec![vec![s("0"), s("1")], vec![s("1"), s("0")]];
        assert_eq!(hermitian_signature(&h), (1, 1, 0));
        let d = vec![vec![s("2"), s("0"), s("0")], vec![s("0"), s("0"), s("0")], vec![s("0"), s("0"), s("-1/3")]];
        assert_eq!(hermitian_signature(&d), (1, 1, 1));
        let c = vec![vec![s("1"), s("i")], vec![s("-i"), s("1")]];
        assert_eq!(hermitian_signature(&c), (1, 0, 1));
    }
}
