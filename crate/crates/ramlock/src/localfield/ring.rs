//! The finite ring O_K / p^N = W[pi]/(E(pi)) with W = (Z/p^N)[t]/(g(t)).
//!
//! Elements are dense coefficient vectors of length e*f; entry `i*f + j`
//! holds the coefficient of pi^i t^j.

use super::residue::{Fq, ResidueField};
use super::zmod::Modulus;

pub type RElem = Vec<u128>;

#[derive(Clone, Debug)]
pub struct Ring {
    pub(crate) md: Modulus,
    pub(crate) f: usize,
    pub(crate) e: usize,
    /// Monic g of degree f, coefficients mod p^N (length f+1).
    unram: Vec<u128>,
    /// pi^e = sum red[i] pi^i, each red[i] an element of W.
    red: Vec<Vec<u128>>,
    /// The unit pi^e / p and its inverse.
    eta: RElem,
    red0_over_p_inv: Vec<u128>,
    pub(crate) residue: ResidueField,
}

impl Ring {
    /// `eis` holds the e+1 coefficients of E over W as integer vectors of
    /// length f, known modulo p^(N+1) (so that E_i / p is known mod p^N).
    pub fn new(md: Modulus, unram: &[u64], eis: &[Vec<i128>]) -> Ring {
        let f = unram.len() - 1;
        let e = eis.len() - 1;
        let p = md.p() as i128;
        let unram_m: Vec<u128> = unram.iter().map(|&c| c as u128).collect();
        let red: Vec<Vec<u128>> = eis[..e]
            .iter()
            .map(|c| c.iter().map(|&x| md.from_i128(-x)).collect())
            .collect();
        let residue = ResidueField::new(md.p(), unram.to_vec());
        let mut ring = Ring {
            md,
            f,
            e,
            unram: unram_m,
            red,
            eta: vec![],
            red0_over_p_inv: vec![],
            residue,
        };
        let mut eta = ring.zero();
        for (i, c) in eis[..e].iter().enumerate() {
            for j in 0..f {
                debug_assert!(c[j] % p == 0);
                eta[i * f + j] = ring.md.from_i128(-(c[j] / p));
            }
        }
        let red0_over_p: Vec<u128> = eta[..f].to_vec();
        ring.red0_over_p_inv = ring.inv_unit(&ring.from_w(&red0_over_p))[..f].to_vec();
        ring.eta = eta;
        ring
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.e * self.f
    }

    /// Absolute precision of the ring in pi-adic digits (e*N).
    #[inline]
    pub fn cap(&self) -> u32 {
        self.e as u32 * self.md.digits()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.md
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    pub fn zero(&self) -> RElem {
        vec![0; self.len()]
    }

    pub fn one(&self) -> RElem {
        let mut v = self.zero();
        v[0] = 1 % self.md.value();
        v
    }

    pub fn from_int(&self, a: i128) -> RElem {
        let mut v = self.zero();
        v[0] = self.md.from_i128(a);
        v
    }

    /// Element of W placed in degree 0.
    pub fn from_w(&self, w: &[u128]) -> RElem {
        let mut v = self.zero();
        v[..self.f].copy_from_slice(w);
        v
    }

    /// pi^k; zero once k reaches the ring cap.
    pub fn pi_pow(&self, k: u32) -> RElem {
        if k >= self.cap() {
            return self.zero();
        }
        let q = k / self.e as u32;
        let r = k as usize % self.e;
        // pi^k = p^q pi^r * eta^q
        let mut base = self.zero();
        base[r * self.f] = self.md.pow_p(q);
        if q == 0 {
            return base;
        }
        let etaq = self.pow(&self.eta, q as u128);
        self.mul(&base, &etaq)
    }

    pub fn add(&self, a: &RElem, b: &RElem) -> RElem {
        a.iter().zip(b).map(|(&x, &y)| self.md.add(x, y)).collect()
    }

    pub fn sub(&self, a: &RElem, b: &RElem) -> RElem {
        a.iter().zip(b).map(|(&x, &y)| self.md.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &RElem) -> RElem {
        a.iter().map(|&x| self.md.neg(x)).collect()
    }

    pub fn scale(&self, c: u128, a: &RElem) -> RElem {
        a.iter().map(|&x| self.md.mul(c, x)).collect()
    }

    pub fn is_zero(&self, a: &RElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Product in W (length-f vectors).
    pub fn w_mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let f = self.f;
        if f == 1 {
            return vec![self.md.mul(a[0], b[0])];
        }
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = self.md.add(prod[i + j], self.md.mul(x, y));
                }
            }
        }
        self.w_reduce(&mut prod);
        prod.truncate(f);
        prod
    }

    fn w_reduce(&self, prod: &mut [u128]) {
        let f = self.f;
        for k in (f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..f {
                let g = self.unram[j];
                if g != 0 {
                    let idx = k - f + j;
                    prod[idx] = self.md.sub(prod[idx], self.md.mul(c, g));
                }
            }
        }
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> RElem {
        let (e, f) = (self.e, self.f);
        let wl = 2 * f - 1;
        // raw[k] is an unreduced W-product of length 2f-1 for pi^k
        let mut raw = vec![0u128; (2 * e - 1) * wl];
        for i in 0..e {
            let ai = &a[i * f..(i + 1) * f];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let bj = &b[j * f..(j + 1) * f];
                let base = (i + j) * wl;
                for (s, &x) in ai.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (t, &y) in bj.iter().enumerate() {
                        if y != 0 {
                            let idx = base + s + t;
                            raw[idx] = self.md.add(raw[idx], self.md.mul(x, y));
                        }
                    }
                }
            }
        }
        // reduce each W-slot, then fold pi-degrees >= e using E.
        let mut poly: Vec<Vec<u128>> = raw
            .chunks(wl)
            .map(|chunk| {
                let mut c = chunk.to_vec();
                if f > 1 {
                    self.w_reduce(&mut c);
                }
                c.truncate(f);
                c
            })
            .collect();
        for k in (e..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for i in 0..e {
                let prod = self.w_mul(&c, &self.red[i]);
                let tgt = &mut poly[k - e + i];
                for (x, y) in tgt.iter_mut().zip(prod) {
                    *x = self.md.add(*x, y);
                }
            }
        }
        let mut out = Vec::with_capacity(e * f);
        for c in poly.into_iter().take(e) {
            out.extend(c);
        }
        out
    }

    pub fn pow(&self, a: &RElem, mut k: u128) -> RElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// pi-adic valuation; `cap()` for the zero element.
    pub fn val(&self, a: &RElem) -> u32 {
        let (e, f) = (self.e, self.f);
        let mut best = self.cap();
        for i in 0..e {
            let v = a[i * f..(i + 1) * f]
                .iter()
                .map(|&c| self.md.val(c))
                .min()
                .unwrap_or(self.md.digits());
            if v < self.md.digits() {
                best = best.min(v * e as u32 + i as u32);
            }
        }
        best
    }

    /// Reduction modulo pi^r.
    pub fn trunc(&self, a: &RElem, r: u32) -> RElem {
        if r >= self.cap() {
            return a.clone();
        }
        let (e, f) = (self.e, self.f);
        let q = r / e as u32;
        let s = r as usize % e;
        let mut out = a.clone();
        for i in 0..e {
            let k = if i < s { q + 1 } else { q };
            for c in &mut out[i * f..(i + 1) * f] {
                *c = self.md.trunc(*c, k);
            }
        }
        out
    }

    /// Some s with pi^w s = a, for a divisible by pi^w. Only the residue of s
    /// modulo pi^(cap - w) is meaningful.
    pub fn div_pi_pow(&self, a: &RElem, w: u32) -> RElem {
        if w == 0 {
            return a.clone();
        }
        let mut s = a.clone();
        for _ in 0..w {
            s = self.div_pi_once(&s);
        }
        s
    }

    /// y with pi*y = s for s divisible by pi. Solves the triangular system
    /// coming from pi^e = sum red_i pi^i, losing exactly one pi-adic digit.
    fn div_pi_once(&self, s: &RElem) -> RElem {
        let (e, f) = (self.e, self.f);
        let s0: Vec<u128> = s[..f].iter().map(|&c| self.md.div_pow_p(c, 1)).collect();
        let top = self.w_mul(&s0, &self.red0_over_p_inv);
        let mut y = self.zero();
        for i in 1..e {
            let corr = self.w_mul(&top, &self.red[i]);
            for j in 0..f {
                y[(i - 1) * f + j] = self.md.sub(s[i * f + j], corr[j]);
            }
        }
        y[(e - 1) * f..].copy_from_slice(&top);
        y
    }

    /// Residue class in F_q.
    pub fn residue(&self, a: &RElem) -> Fq {
        let p = self.md.p() as u128;
        a[..self.f].iter().map(|&c| (c % p) as u64).collect()
    }

    /// Lift of a residue with coordinates in [0, p).
    pub fn lift(&self, x: &Fq) -> RElem {
        let mut v = self.zero();
        for (j, &c) in x.iter().enumerate() {
            v[j] = c as u128;
        }
        v
    }

    pub fn is_unit(&self, a: &RElem) -> bool {
        !self.residue.is_zero(&self.residue(a))
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub fn inv_unit(&self, a: &RElem) -> RElem {
        let r = self.residue(a);
        let ri = self
            .residue
            .inv(&r)
            .expect("inv_unit called on a non-unit");
        let mut y = self.lift(&ri);
        let two = self.from_int(2);
        let mut prec = 1u32;
        while prec < self.cap() {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            prec *= 2;
        }
        y
    }

    /// W-coefficient of pi^i.
    pub fn coeff(&self, a: &RElem, i: usize) -> Vec<u128> {
        a[i * self.f..(i + 1) * self.f].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::super::residue::canonical_irreducible;
    use super::*;

    fn q3_zeta3() -> Ring {
        // E = x^2 + 3x + 3, N = 10
        let md = Modulus::new(3, 10).unwrap();
        Ring::new(md, &canonical_irreducible(3, 1), &[vec![3], vec![3], vec![1]])
    }

    #[test]
    fn pi_relation_holds() {
        let r = q3_zeta3();
        let pi = r.pi_pow(1);
        let lhs = r.add(&r.add(&r.mul(&pi, &pi), &r.scale(3, &pi)), &r.from_int(3));
        assert!(r.is_zero(&lhs));
        assert_eq!(r.val(&r.from_int(3)), 2);
        assert_eq!(r.val(&r.pi_pow(7)), 7);
    }

    #[test]
    fn division_by_pi_powers() {
        let r = q3_zeta3();
        let u = r.add(&r.one(), &r.pi_pow(1));
        for w in 1..7 {
            let a = r.mul(&u, &r.pi_pow(w));
            let s = r.div_pi_pow(&a, w);
            let back = r.mul(&s, &r.pi_pow(w));
            assert_eq!(r.trunc(&back, r.cap()), a);
            assert_eq!(r.trunc(&s, r.cap() - w), r.trunc(&u, r.cap() - w));
        }
    }

    #[test]
    fn unit_inverse() {
        let md = Modulus::new(3, 6).unwrap();
        let r = Ring::new(md, &canonical_irreducible(3, 2), &[vec![3, 0], vec![0, 3], vec![1, 0]]);
        let mut a = r.zero();
        a[0] = 2;
        a[1] = 1;
        a[2] = 5;
        let inv = r.inv_unit(&a);
        assert_eq!(r.mul(&a, &inv), r.one());
    }
}
