//! Division-free matrix helpers over commutative rings (Berkowitz).

use super::ring::Ring;
use super::{FieldElement, LocalField};

/// Minimal commutative-ring interface used by the matrix routines.
pub trait Arith {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn one(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
}

/// Arithmetic in a local field with precision tracking.
pub struct FieldArith(pub LocalField);

impl Arith for FieldArith {
    type T = FieldElement;
    fn zero(&self) -> FieldElement {
        self.0.zero()
    }
    fn one(&self) -> FieldElement {
        self.0.one()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a - b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a * b
    }
}

/// Arithmetic in the unramified ring W = (Z/p^N)[t]/g of a field.
pub struct WArith<'a>(pub &'a Ring);

impl Arith for WArith<'_> {
    type T = Vec<u128>;
    fn zero(&self) -> Vec<u128> {
        vec![0; self.0.f]
    }
    fn one(&self) -> Vec<u128> {
        let mut v = vec![0; self.0.f];
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        a.iter().zip(b).map(|(&x, &y)| self.0.md.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        a.iter().zip(b).map(|(&x, &y)| self.0.md.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        self.0.w_mul(a, b)
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

pub fn mat_mul<A: Arith>(ar: &A, a: &Matrix<A::T>, b: &Matrix<A::T>) -> Matrix<A::T> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = ar.zero();
                    for l in 0..inner {
                        acc = ar.add(&acc, &ar.mul(&a[i][l], &b[l][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn identity<A: Arith>(ar: &A, n: usize) -> Matrix<A::T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ar.one() } else { ar.zero() }).collect())
        .collect()
}

pub fn mat_pow<A: Arith>(ar: &A, a: &Matrix<A::T>, mut k: u64) -> Matrix<A::T> {
    let mut acc = identity(ar, a.len());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(ar, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(ar, &base, &base);
        }
    }
    acc
}

/// Characteristic polynomial det(X - A), coefficients low to high (monic).
pub fn charpoly<A: Arith>(ar: &A, a: &Matrix<A::T>) -> Vec<A::T> {
    let n = a.len();
    // coefficients high to low during the recursion
    let mut vect: Vec<A::T> = vec![ar.one()];
    for r in 0..n {
        // column c = (1, -a_rr, -R S, -R A S, ..., -R A^(r-1) S)
        let mut col = Vec::with_capacity(r + 2);
        col.push(ar.one());
        col.push(ar.sub(&ar.zero(), &a[r][r]));
        let mut s: Vec<A::T> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut rs = ar.zero();
            for (j, sj) in s.iter().enumerate() {
                rs = ar.add(&rs, &ar.mul(&a[r][j], sj));
            }
            col.push(ar.sub(&ar.zero(), &rs));
            s = (0..r)
                .map(|i| {
                    let mut acc = ar.zero();
                    for (j, sj) in s.iter().enumerate() {
                        acc = ar.add(&acc, &ar.mul(&a[i][j], sj));
                    }
                    acc
                })
                .collect();
        }
        let next: Vec<A::T> = (0..r + 2)
            .map(|i| {
                let mut acc = ar.zero();
                for (j, v) in vect.iter().enumerate() {
                    if i >= j {
                        acc = ar.add(&acc, &ar.mul(&col[i - j], v));
                    }
                }
                acc
            })
            .collect();
        vect = next;
    }
    vect.reverse();
    vect
}

/// Determinant via the characteristic polynomial.
pub fn det<A: Arith>(ar: &A, a: &Matrix<A::T>) -> A::T {
    let cp = charpoly(ar, a);
    if a.len() % 2 == 0 {
        cp[0].clone()
    } else {
        ar.sub(&ar.zero(), &cp[0])
    }
}
