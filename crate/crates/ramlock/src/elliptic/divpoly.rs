//! Division polynomials in x alone, over any commutative ring.
//!
//! `f_n` is psi_n for odd n and psi_n / psi_2 for even n, so every f_n is a
//! polynomial in x; psi_2^2 is replaced by F = 4x^3 + b2 x^2 + 2 b4 x + b6.

use crate::localfield::linalg::Arith;
use crate::localfield::residue::{Fq, ResidueField};

pub type GPoly<T> = Vec<T>;

/// Arithmetic in the residue field.
pub struct FqArith<'a>(pub &'a ResidueField);

impl Arith for FqArith<'_> {
    type T = Fq;
    fn zero(&self) -> Fq {
        self.0.zero()
    }
    fn one(&self) -> Fq {
        self.0.one()
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.0.add(a, b)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.0.mul(a, b)
    }
}

fn int<A: Arith>(ar: &A, n: i64) -> A::T {
    let mut acc = ar.zero();
    let mut base = ar.one();
    let mut m = n.unsigned_abs();
    while m > 0 {
        if m & 1 == 1 {
            acc = ar.add(&acc, &base);
        }
        base = ar.add(&base, &base);
        m >>= 1;
    }
    if n < 0 {
        ar.sub(&ar.zero(), &acc)
    } else {
        acc
    }
}

pub fn padd<A: Arith>(ar: &A, a: &[A::T], b: &[A::T]) -> GPoly<A::T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ar.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn psub<A: Arith>(ar: &A, a: &[A::T], b: &[A::T]) -> GPoly<A::T> {
    let neg: Vec<A::T> = b.iter().map(|y| ar.sub(&ar.zero(), y)).collect();
    padd(ar, a, &neg)
}

pub fn pmul<A: Arith>(ar: &A, a: &[A::T], b: &[A::T]) -> GPoly<A::T> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ar.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ar.add(&out[i + j], &ar.mul(x, y));
        }
    }
    out
}

fn cube<A: Arith>(ar: &A, a: &[A::T]) -> GPoly<A::T> {
    pmul(ar, &pmul(ar, a, a), a)
}

/// F = 4x^3 + b2 x^2 + 2 b4 x + b6.
pub fn psi2_squared<A: Arith>(ar: &A, b: &[A::T; 4]) -> GPoly<A::T> {
    let [b2, b4, b6, _] = b;
    vec![b6.clone(), ar.mul(&int(ar, 2), b4), b2.clone(), int(ar, 4)]
}

/// f_0, ..., f_{n_max} from b = [b2, b4, b6, b8].
pub fn division_polys<A: Arith>(ar: &A, b: &[A::T; 4], n_max: usize) -> Vec<GPoly<A::T>> {
    let [b2, b4, b6, b8] = b;
    let c = |n: i64| int(ar, n);
    let big_f = psi2_squared(ar, b);
    let f2sq = pmul(ar, &big_f, &big_f);
    let mut f: Vec<GPoly<A::T>> = vec![vec![], vec![ar.one()], vec![ar.one()]];
    f.push(vec![
        b8.clone(),
        ar.mul(&c(3), b6),
        ar.mul(&c(3), b4),
        b2.clone(),
        c(3),
    ]);
    f.push(vec![
        ar.sub(&ar.mul(b4, b8), &ar.mul(b6, b6)),
        ar.sub(&ar.mul(b2, b8), &ar.mul(b4, b6)),
        ar.mul(&c(10), b8),
        ar.mul(&c(10), b6),
        ar.mul(&c(5), b4),
        b2.clone(),
        c(2),
    ]);
    for n in 5..=n_max {
        let m = n / 2;
        let next = if n % 2 == 1 {
            let t1 = pmul(ar, &f[m + 2], &cube(ar, &f[m]));
            let t2 = pmul(ar, &f[m - 1], &cube(ar, &f[m + 1]));
            if m % 2 == 0 {
                psub(ar, &pmul(ar, &f2sq, &t1), &t2)
            } else {
                psub(ar, &t1, &pmul(ar, &f2sq, &t2))
            }
        } else {
            let t1 = pmul(ar, &f[m + 2], &pmul(ar, &f[m - 1], &f[m - 1]));
            let t2 = pmul(ar, &f[m - 2], &pmul(ar, &f[m + 1], &f[m + 1]));
            pmul(ar, &f[m], &psub(ar, &t1, &t2))
        };
        f.push(next);
    }
    f.truncate(n_max + 1);
    f
}

/// Numerator and denominator of x([n]P) for odd n:
/// (x f_n^2 - F f_{n-1} f_{n+1}, f_n^2).
pub fn multiplication_x<A: Arith>(ar: &A, b: &[A::T; 4], n: usize) -> (GPoly<A::T>, GPoly<A::T>) {
    assert!(n % 2 == 1, "odd multipliers only");
    let f = division_polys(ar, b, n + 1);
    let big_f = psi2_squared(ar, b);
    let fn2 = pmul(ar, &f[n], &f[n]);
    let x = vec![ar.zero(), ar.one()];
    let num = psub(ar, &pmul(ar, &x, &fn2), &pmul(ar, &big_f, &pmul(ar, &f[n - 1], &f[n + 1])));
    (num, fn2)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer arithmetic for checking the recursion against known values.
    struct IntArith;
    impl Arith for IntArith {
        type T = i128;
        fn zero(&self) -> i128 {
            0
        }
        fn one(&self) -> i128 {
            1
        }
        fn add(&self, a: &i128, b: &i128) -> i128 {
            a + b
        }
        fn sub(&self, a: &i128, b: &i128) -> i128 {
            a - b
        }
        fn mul(&self, a: &i128, b: &i128) -> i128 {
            a * b
        }
    }

    fn eval(p: &[i128], x: i128) -> i128 {
        p.iter().rev().fold(0, |acc, c| acc * x + c)
    }

    // y^2 = x^3 + 1: b = [0, 0, 4, 0]; (2, 3) has order 6, (0, 1) order 3,
    // (-1, 0) order 2.
    #[test]
    fn torsion_points_are_roots() {
        let b = [0i128, 0, 4, 0];
        let f = division_polys(&IntArith, &b, 7);
        assert_eq!(eval(&f[3], 0), 0);
        // psi_6 = psi_2 f_6 vanishes at the 6-torsion point (2, 3)
        assert_eq!(eval(&f[6], 2), 0);
        assert_ne!(eval(&f[5], 2), 0);
        assert_ne!(eval(&f[7], 2), 0);
        // degrees: (n^2 - 1)/2 for odd n, (n^2 - 4)/2 for even n
        assert_eq!(f[5].len() - 1, 12);
        assert_eq!(f[6].len() - 1, 16);
        assert_eq!(f[7].len() - 1, 24);
    }

    #[test]
    fn multiplication_by_three_on_x() {
        let b = [0i128, 0, 4, 0];
        // [3](2, 3) = (-1, 0)
        let (num, den) = multiplication_x(&IntArith, &b, 3);
        let (n, d) = (eval(&num, 2), eval(&den, 2));
        assert_eq!(n, -d);
    }
}
