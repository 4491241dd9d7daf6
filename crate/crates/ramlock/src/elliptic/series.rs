//! Truncated power series over a local field, in one and two variables.

use crate::error::Result;
use crate::localfield::{FieldElement, LocalField};

/// Ring operations shared by the one- and two-variable series used to
/// evaluate the formal group law.
pub trait SeriesRing {
    type S: Clone;
    fn field(&self) -> &LocalField;
    fn constant(&self, c: &FieldElement) -> Self::S;
    fn add(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn sub(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn scale(&self, a: &Self::S, c: &FieldElement) -> Self::S;
    /// Inverse of a series with unit constant term.
    fn inv_unit(&self, a: &Self::S) -> Result<Self::S>;

    fn zero(&self) -> Self::S {
        self.constant(&self.field().zero())
    }

    fn one(&self) -> Self::S {
        self.constant(&self.field().one())
    }

    /// sum c_i a^i by Horner.
    fn eval_poly(&self, coeffs: &[FieldElement], a: &Self::S) -> Self::S {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.constant(c));
        }
        acc
    }
}

/// One-variable series modulo t^(cap+1).
#[derive(Clone)]
pub struct Uni {
    pub k: LocalField,
    pub cap: usize,
}

pub type Series = Vec<FieldElement>;

impl Uni {
    pub fn new(k: &LocalField, cap: usize) -> Uni {
        Uni { k: k.clone(), cap }
    }

    pub fn var(&self) -> Series {
        let mut s = self.zero();
        if self.cap >= 1 {
            s[1] = self.k.one();
        }
        s
    }

    /// a(b(t)) for b without constant term.
    pub fn compose(&self, a: &Series, b: &Series) -> Series {
        debug_assert!(b[0].is_zero());
        self.eval_poly(a, b)
    }

    /// a(c t).
    pub fn rescale(&self, a: &Series, c: &FieldElement) -> Series {
        let mut pw = self.k.one();
        a.iter()
            .map(|x| {
                let y = x * &pw;
                pw = &pw * c;
                y
            })
            .collect()
    }
}

impl SeriesRing for Uni {
    type S = Series;

    fn field(&self) -> &LocalField {
        &self.k
    }

    fn constant(&self, c: &FieldElement) -> Series {
        let mut s = vec![self.k.zero(); self.cap + 1];
        s[0] = c.clone();
        s
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let n = self.cap + 1;
        let mut out = vec![self.k.zero(); n];
        let a_lo = a.iter().position(|c| !c.is_zero()).unwrap_or(n);
        let b_lo = b.iter().position(|c| !c.is_zero()).unwrap_or(n);
        for i in a_lo..n {
            if a[i].is_zero() {
                continue;
            }
            for j in b_lo..n - i {
                out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
            }
        }
        out
    }

    fn scale(&self, a: &Series, c: &FieldElement) -> Series {
        a.iter().map(|x| x * c).collect()
    }

    fn inv_unit(&self, a: &Series) -> Result<Series> {
        let a0inv = a[0].inv()?;
        let mut b = vec![self.k.zero(); self.cap + 1];
        b[0] = a0inv.clone();
        for n in 1..=self.cap {
            let mut acc = self.k.zero();
            for i in 1..=n {
                acc = &acc + &(&a[i] * &b[n - i]);
            }
            b[n] = -(&acc * &a0inv);
        }
        Ok(b)
    }
}

/// Two-variable series: `s[i][j]` is the coefficient of X^i Y^j, kept for
/// total degree i + j <= cap.
#[derive(Clone)]
pub struct Bi {
    pub k: LocalField,
    pub cap: usize,
}

pub type Series2 = Vec<Vec<FieldElement>>;

impl Bi {
    pub fn new(k: &LocalField, cap: usize) -> Bi {
        Bi { k: k.clone(), cap }
    }

    pub fn x(&self) -> Series2 {
        let mut s = self.zero();
        if self.cap >= 1 {
            s[1][0] = self.k.one();
        }
        s
    }

    pub fn y(&self) -> Series2 {
        let mut s = self.zero();
        if self.cap >= 1 {
            s[0][1] = self.k.one();
        }
        s
    }

    fn shape(&self) -> Series2 {
        (0..=self.cap).map(|i| vec![self.k.zero(); self.cap + 1 - i]).collect()
    }
}

impl SeriesRing for Bi {
    type S = Series2;

    fn field(&self) -> &LocalField {
        &self.k
    }

    fn constant(&self, c: &FieldElement) -> Series2 {
        let mut s = self.shape();
        s[0][0] = c.clone();
        s
    }

    fn add(&self, a: &Series2, b: &Series2) -> Series2 {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect()
    }

    fn sub(&self, a: &Series2, b: &Series2) -> Series2 {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect()
    }

    fn mul(&self, a: &Series2, b: &Series2) -> Series2 {
        let mut out = self.shape();
        let nz: Vec<(usize, usize)> = (0..=self.cap)
            .flat_map(|i| (0..=self.cap - i).map(move |j| (i, j)))
            .filter(|&(i, j)| !b[i][j].is_zero())
            .collect();
        for i1 in 0..=self.cap {
            for j1 in 0..=self.cap - i1 {
                if a[i1][j1].is_zero() {
                    continue;
                }
                for &(i2, j2) in &nz {
                    if i1 + i2 + j1 + j2 <= self.cap {
                        let t = &a[i1][j1] * &b[i2][j2];
                        out[i1 + i2][j1 + j2] = &out[i1 + i2][j1 + j2] + &t;
                    }
                }
            }
        }
        out
    }

    fn scale(&self, a: &Series2, c: &FieldElement) -> Series2 {
        a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
    }

    fn inv_unit(&self, a: &Series2) -> Result<Series2> {
        // 1/(a0 (1 - u)) = a0^{-1} sum u^n with u of positive order
        let a0inv = a[0][0].inv()?;
        let mut u = self.scale(a, &a0inv);
        u[0][0] = self.k.zero();
        let u = self.sub(&self.zero(), &u);
        let mut acc = self.one();
        let mut pw = self.one();
        for _ in 0..self.cap {
            pw = self.mul(&pw, &u);
            acc = self.add(&acc, &pw);
        }
        Ok(self.scale(&acc, &a0inv))
    }
}
