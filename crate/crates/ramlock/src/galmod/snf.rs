//! Smith normal form over Z/p^n and the group structures it yields.

use crate::localfield::zmod::Modulus;

pub type Mat = Vec<Vec<u128>>;

pub(crate) fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect()
}

pub(crate) fn mat_mul(md: &Modulus, a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |acc, k| md.add(acc, md.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

/// U A V = D with U, V invertible, D diagonal with entries p^(diag[i]);
/// `diag[i] == n` marks a zero entry.
pub(crate) struct Snf {
    pub diag: Vec<u32>,
    pub u: Mat,
    pub uinv: Mat,
    // only the tests read v; the coordinate changes need vinv
    #[cfg_attr(not(test), allow(dead_code))]
    pub v: Mat,
    pub vinv: Mat,
}

pub(crate) fn snf(md: &Modulus, a: &Mat, rows: usize, cols: usize) -> Snf {
    let n = md.digits();
    let mut a = a.clone();
    let (mut u, mut uinv) = (identity(rows), identity(rows));
    let (mut v, mut vinv) = (identity(cols), identity(cols));
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                let vx = md.val(x);
                if vx < n && best.is_none_or(|b| vx < b.0) {
                    best = Some((vx, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            diag.extend(std::iter::repeat_n(n, rows.min(cols) - t));
            break;
        };
        // row swap t <-> pi: U' = P U, U'^-1 = U^-1 P
        a.swap(t, pi);
        u.swap(t, pi);
        for row in uinv.iter_mut() {
            row.swap(t, pi);
        }
        // column swap t <-> pj: V' = V P, V'^-1 = P V^-1
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        vinv.swap(t, pj);
        // normalize the pivot to p^val
        let unit = md.div_pow_p(a[t][t], val);
        let inv = md.inv(unit).expect("pivot has exact valuation");
        for x in a[t].iter_mut() {
            *x = md.mul(*x, inv);
        }
        for x in u[t].iter_mut() {
            *x = md.mul(*x, inv);
        }
        for row in uinv.iter_mut() {
            row[t] = md.mul(row[t], unit);
        }
        let piv = md.pow_p(val);
        debug_assert_eq!(a[t][t], piv);
        for i in 0..rows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let c = md.div_pow_p(a[i][t], val);
            // row_i -= c row_t
            for j in 0..cols {
                let s = md.mul(c, a[t][j]);
                a[i][j] = md.sub(a[i][j], s);
            }
            for j in 0..rows {
                let s = md.mul(c, u[t][j]);
                u[i][j] = md.sub(u[i][j], s);
            }
            // inverse: col_t += c col_i
            for row in uinv.iter_mut() {
                let s = md.mul(c, row[i]);
                row[t] = md.add(row[t], s);
            }
        }
        for j in 0..cols {
            if j == t || a[t][j] == 0 {
                continue;
            }
            let c = md.div_pow_p(a[t][j], val);
            // col_j -= c col_t
            for row in a.iter_mut() {
                let s = md.mul(c, row[t]);
                row[j] = md.sub(row[j], s);
            }
            for row in v.iter_mut() {
                let s = md.mul(c, row[t]);
                row[j] = md.sub(row[j], s);
            }
            // inverse: row_t += c row_j
            for l in 0..cols {
                let s = md.mul(c, vinv[j][l]);
                vinv[t][l] = md.add(vinv[t][l], s);
            }
        }
        diag.push(val);
    }
    Snf { diag, u, uinv, v, vinv }
}

/// Cokernel of the columns of `a` in (Z/p^n)^rows, as p-exponents.
pub(crate) fn coker_exponents(md: &Modulus, a: &Mat, rows: usize) -> Vec<u32> {
    let cols = a.first().map_or(0, |r| r.len());
    let s = snf(md, a, rows, cols);
    let mut out: Vec<u32> = s.diag.clone();
    out.extend(std::iter::repeat_n(md.digits(), rows.saturating_sub(s.diag.len())));
    out.retain(|&e| e > 0);
    out
}

/// Image of (Z/p^n)^cols -> sum_i Z/p^(target[i]) given by `a`, as
/// p-exponents.
pub(crate) fn image_exponents(md: &Modulus, a: &Mat, target: &[u32]) -> Vec<u32> {
    let n = md.digits();
    let cols = a.first().map_or(0, |r| r.len());
    let scaled: Mat = a
        .iter()
        .zip(target)
        .map(|(row, &e)| row.iter().map(|&x| md.mul(x % md.pow_p(e), md.pow_p(n - e))).collect())
        .collect();
    let s = snf(md, &scaled, target.len(), cols);
    s.diag.iter().filter(|&&v| v < n).map(|&v| n - v).collect()
}

/// Kernel of sum_j Z/p^(source[j]) -> sum_i Z/p^(target[i]) given by `f`,
/// as p-exponents. `f` must be well defined on the source.
pub(crate) fn kernel_exponents(md: &Modulus, f: &Mat, source: &[u32], target: &[u32]) -> Vec<u32> {
    let n = md.digits();
    let cols = source.len();
    let scaled: Mat = f
        .iter()
        .zip(target)
        .map(|(row, &e)| row.iter().map(|&x| md.mul(x % md.pow_p(e), md.pow_p(n - e))).collect())
        .collect();
    let s = snf(md, &scaled, target.len(), cols);
    // K0 = {y : D y = 0} = sum_j p^(n - v_j) Z/p^n, with v_j = n past the rank
    let vj: Vec<u32> = (0..cols).map(|j| s.diag.get(j).copied().unwrap_or(n)).collect();
    // S = sum_j p^(source[j]) e_j, in y-coordinates V^-1 S, then z_j = y_j / p^(n - v_j)
    let mut rel: Mat = vec![Vec::new(); cols];
    for (j0, &e) in source.iter().enumerate() {
        for j in 0..cols {
            let y = md.mul(s.vinv[j][j0], md.pow_p(e));
            let z = md.div_pow_p(y, n - vj[j]);
            rel[j].push(z);
        }
    }
    for (j, &v) in vj.iter().enumerate() {
        for (jj, row) in rel.iter_mut().enumerate() {
            row.push(if jj == j { md.pow_p(v) } else { 0 });
        }
    }
    coker_exponents(md, &rel, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let m = md(3, 3);
        let a: Mat = vec![vec![6, 9, 3], vec![18, 1, 0]];
        let s = snf(&m, &a, 2, 3);
        let d = mat_mul(&m, &mat_mul(&m, &s.u, &a), &s.v);
        for i in 0..2 {
            for j in 0..3 {
                let expect = if i == j && s.diag[i] < 3 { m.pow_p(s.diag[i]) } else { 0 };
                assert_eq!(d[i][j], expect);
            }
        }
        assert_eq!(mat_mul(&m, &s.u, &s.uinv), identity(2));
        assert_eq!(mat_mul(&m, &s.v, &s.vinv), identity(3));
    }

    #[test]
    fn relation_matrix_example() {
        // (Z/9)^2 modulo the column (3, 0)
        let m = md(3, 2);
        let a: Mat = vec![vec![0, 3], vec![0, 0]];
        let mut e = coker_exponents(&m, &a, 2);
        e.sort();
        assert_eq!(e, vec![1, 2]);
    }

    #[test]
    fn kernel_of_multiplication_by_p() {
        let m = md(3, 2);
        let f: Mat = vec![vec![3]];
        assert_eq!(kernel_exponents(&m, &f, &[2], &[2]), vec![1]);
        assert_eq!(image_exponents(&m, &f, &[2]), vec![1]);
    }
}
