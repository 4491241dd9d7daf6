//! Linear algebra over F_p on vectors of residues in [0, p).

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    Some(s0.rem_euclid(p as i64) as u64)
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    rref(rows, p).1.len()
}

/// Basis of {v : r . v = 0 for every row r}.
pub fn nullspace(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let (m, pivots) = rref(rows, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = (p - row[fc]) % p;
            }
            v
        })
        .collect()
}

pub fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext, p) == rank(rows, p)
}

/// Coefficients c with sum c_i rows[i] = target, if any.
pub fn solve_combination(rows: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    // columns of the system are the given rows
    let n = rows.len();
    let len = target.len();
    let aug: Vec<Vec<u64>> = (0..len)
        .map(|i| {
            let mut r: Vec<u64> = rows.iter().map(|row| row[i] % p).collect();
            r.push(target[i] % p);
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, p);
    if pivots.contains(&n) {
        return None;
    }
    let mut sol = vec![0u64; n];
    for (row, &pc) in m.iter().zip(&pivots) {
        sol[pc] = row[n];
    }
    Some(sol)
}

pub fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + x * y) % p)
}

/// Scale so that the first nonzero entry is 1.
pub fn normalize(v: &[u64], p: u64) -> Vec<u64> {
    match v.iter().find(|&&x| x % p != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = inv_mod(lead, p).unwrap();
            v.iter().map(|&x| x * inv % p).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1]];
        let ns = nullspace(&rows, 3, 5);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert_eq!(dot(r, &ns[0], 5), 0);
        }
        let sol = solve_combination(&rows, &[2, 2, 3], 5).unwrap();
        assert_eq!(sol, vec![2, 3]);
        assert!(solve_combination(&rows, &[0, 0, 1], 5).is_none());
        assert_eq!(inv_mod(3, 7), Some(5));
    }
}
