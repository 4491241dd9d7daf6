//! Finite fields F_q = F_p[t]/(g) with g the canonical irreducible polynomial.

/// Dense polynomial over F_p, coefficients low to high.
pub type FpPoly = Vec<u64>;

fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn poly_mulmod(a: &FpPoly, b: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, g, p)
}

fn poly_rem(a: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let mut r = a.clone();
    trim(&mut r);
    let dg = g.len() - 1;
    let lead_inv = inv_mod_p(g[dg], p);
    while r.len() > dg {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for j in 0..=dg {
                let idx = top - dg + j;
                r[idx] = (r[idx] + p - c * g[j] % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn distinct_prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^(p^k) mod g.
fn frobenius_power_of_x(g: &FpPoly, p: u64, k: usize) -> FpPoly {
    let mut cur = poly_rem(&vec![0, 1], g, p);
    for _ in 0..k {
        // cur <- cur^p
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, g, p);
            }
            base = poly_mulmod(&base, &base, g, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(g: &FpPoly, p: u64) -> bool {
    let mut g = g.clone();
    trim(&mut g);
    if g.len() < 2 {
        return false;
    }
    let d = g.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let xq = frobenius_power_of_x(&g, p, d);
    if poly_rem(&sub(&xq, &x, p), &g, p).iter().any(|&c| c != 0) {
        return false;
    }
    for r in distinct_prime_factors(d) {
        let h = frobenius_power_of_x(&g, p, d / r);
        let gg = poly_gcd(&g, &sub(&h, &x, p), p);
        if gg.len() != 1 {
            return false;
        }
    }
    true
}

fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

/// First monic irreducible polynomial of degree f over F_p, enumerating the
/// lower coefficients as base-p digits of 0, 1, 2, ...
pub fn canonical_irreducible(p: u64, f: usize) -> FpPoly {
    let count = (p as u128).pow(f as u32);
    for idx in 0..count {
        let mut g = Vec::with_capacity(f + 1);
        let mut r = idx;
        for _ in 0..f {
            g.push((r % p as u128) as u64);
            r /= p as u128;
        }
        g.push(1);
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Element of F_q as coordinates on 1, t, ..., t^(f-1).
pub type Fq = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: usize,
    modulus: FpPoly,
}

impl ResidueField {
    pub fn new(p: u64, modulus: FpPoly) -> Self {
        let f = modulus.len() - 1;
        ResidueField { p, f, modulus }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.f]
    }

    pub fn one(&self) -> Fq {
        let mut v = vec![0; self.f];
        v[0] = 1;
        v
    }

    pub fn from_int(&self, a: i64) -> Fq {
        let mut v = vec![0; self.f];
        v[0] = a.rem_euclid(self.p as i64) as u64;
        v
    }

    pub fn basis(&self, j: usize) -> Fq {
        let mut v = vec![0; self.f];
        v[j] = 1;
        v
    }

    pub fn from_index(&self, mut idx: u128) -> Fq {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        v
    }

    pub fn index(&self, a: &Fq) -> u128 {
        a.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn scale(&self, c: u64, a: &Fq) -> Fq {
        a.iter().map(|x| x * (c % self.p) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let p = self.p;
        if self.f == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * self.f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (self.f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..self.f {
                let idx = k - self.f + j;
                prod[idx] = (prod[idx] + p - c * self.modulus[j] % p) % p;
            }
        }
        prod.truncate(self.f);
        prod
    }

    pub fn pow(&self, a: &Fq, mut e: u128) -> Fq {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// The unique p-th root (inverse Frobenius).
    pub fn pth_root(&self, a: &Fq) -> Fq {
        self.pow(a, self.order() / self.p as u128)
    }

    /// Evaluate a polynomial (coefficients low to high) at `x`.
    pub fn eval(&self, poly: &[Fq], x: &Fq) -> Fq {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Roots of a polynomial in F_q by exhaustive evaluation, with
    /// multiplicities. Zero polynomial has no well-defined root set; callers
    /// must not pass it.
    pub fn roots_with_multiplicity(&self, poly: &[Fq]) -> Vec<(Fq, usize)> {
        let mut out = vec![];
        for x in self.elements() {
            let mut cur: Vec<Fq> = poly.to_vec();
            let mut mult = 0;
            loop {
                while cur.len() > 1 && self.is_zero(cur.last().unwrap()) {
                    cur.pop();
                }
                if cur.len() <= 1 || !self.is_zero(&self.eval(&cur, &x)) {
                    break;
                }
                // synthetic division by (X - x)
                let n = cur.len();
                let mut q = vec![self.zero(); n - 1];
                let mut carry = self.zero();
                for i in (1..n).rev() {
                    carry = self.add(&cur[i], &self.mul(&carry, &x));
                    q[i - 1] = carry.clone();
                }
                cur = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        out
    }

    /// Solve a linear system over F_p given by the F_p-linear map
    /// `images[j]` = image of the j-th unknown; returns coefficients with
    /// sum a_j images[j] = target, if any.
    pub fn solve_fp_linear(&self, images: &[Fq], target: &Fq) -> Option<Vec<u64>> {
        let p = self.p;
        let rows = self.f;
        let cols = images.len();
        // augmented matrix rows x (cols + 1)
        let mut mat: Vec<Vec<u64>> = (0..rows)
            .map(|r| {
                let mut row: Vec<u64> = images.iter().map(|v| v[r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(piv) = (row..rows).find(|&r| mat[r][col] != 0) else {
                continue;
            };
            mat.swap(row, piv);
            let inv = inv_mod_p(mat[row][col], p);
            for c in 0..=cols {
                mat[row][c] = mat[row][c] * inv % p;
            }
            for r in 0..rows {
                if r != row && mat[r][col] != 0 {
                    let factor = mat[r][col];
                    for c in 0..=cols {
                        mat[r][c] = (mat[r][c] + p * p - factor * mat[row][c]) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if (row..rows).any(|r| mat[r][cols] != 0) {
            return None;
        }
        let mut sol = vec![0u64; cols];
        for (r, &c) in pivots.iter().enumerate() {
            sol[c] = mat[r][cols];
        }
        Some(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_polys() {
        assert_eq!(canonical_irreducible(3, 1), vec![0, 1]);
        assert_eq!(canonical_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(canonical_irreducible(5, 2), vec![2, 0, 1]);
        assert!(is_irreducible(&canonical_irreducible(3, 4), 3));
        assert!(!is_irreducible(&vec![2, 0, 1], 3)); // x^2 - 1
    }

    #[test]
    fn field_axioms_small() {
        let k = ResidueField::new(3, canonical_irreducible(3, 2));
        assert_eq!(k.order(), 9);
        let nonzero: Vec<Fq> = k.elements().filter(|x| !k.is_zero(x)).collect();
        for x in &nonzero {
            let i = k.inv(x).unwrap();
            assert_eq!(k.mul(x, &i), k.one());
            assert_eq!(k.pow(&k.pth_root(x), 3), *x);
        }
    }

    #[test]
    fn residue_roots_with_multiplicity() {
        let k = ResidueField::new(5, canonical_irreducible(5, 1));
        // (x-1)^2 (x-3) = x^3 - 5x^2 + 7x - 3
        let poly: Vec<Fq> = [-3i64, 7, -5, 1].iter().map(|&c| k.from_int(c)).collect();
        let roots = k.roots_with_multiplicity(&poly);
        assert_eq!(roots, vec![(vec![1], 2), (vec![3], 1)]);
    }
}
