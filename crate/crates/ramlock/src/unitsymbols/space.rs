//! k^x / (k^x)^p as an F_p-vector space with its unit filtration.
//!
//! Basis: the uniformizer, then 1 + t^j pi^i for p not dividing i and
//! i < p e_0, then (when mu_p lies in k) one extra class 1 + c pi^(p e_0)
//! with c outside the image of a -> a^p + eps a, eps = p / pi^e mod pi.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::localfield::linalg::{charpoly, mat_pow, FieldArith, Matrix};
use crate::localfield::residue::Fq;
use crate::localfield::{FieldElement, LocalField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Uniformizer,
    Unit { level: u32, j: usize },
    Extra { level: u32 },
}

impl BasisKind {
    /// Filtration level of the basis class (0 for the uniformizer).
    pub fn level(&self) -> u32 {
        match self {
            BasisKind::Uniformizer => 0,
            BasisKind::Unit { level, .. } | BasisKind::Extra { level } => *level,
        }
    }
}

/// Largest i with class(x) in U-bar^i, or `Top` for the trivial class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FiltrationLevel {
    Level(u32),
    Top,
}

impl std::fmt::Display for FiltrationLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiltrationLevel::Level(i) => write!(f, "{i}"),
            FiltrationLevel::Top => write!(f, "top"),
        }
    }
}

/// Shape of the degree-p extension k(x^(1/p)).
#[derive(Clone, Debug)]
pub enum KummerForm {
    /// x is a p-th power.
    Trivial,
    /// Unramified of degree p.
    Unramified,
    /// Totally ramified of degree p; `chi` is the Eisenstein minimal
    /// polynomial over O_k (low to high) of a uniformizer of the extension.
    Ramified { chi: Vec<FieldElement> },
}

pub struct MulModPSpace {
    field: LocalField,
    p: u64,
    pe0: Ratio<i64>,
    /// index of phi(a) -> a
    phi_preimage: HashMap<u128, Fq>,
    extra: Option<Fq>,
    kinds: Vec<BasisKind>,
    basis: Vec<FieldElement>,
    unit_index: HashMap<(u32, usize), usize>,
}

impl MulModPSpace {
    pub fn new(k: &LocalField) -> Result<MulModPSpace> {
        let p = k.p();
        let e = k.e() as i64;
        let f = k.f();
        let pe0 = Ratio::new(p as i64 * e, p as i64 - 1);
        let rf = k.residue_field();
        let eps = k.from_int(p as i128).shift(-e).residue()?;
        let mut phi_preimage = HashMap::new();
        for a in rf.elements() {
            let img = rf.add(&rf.pow(&a, p as u128), &rf.mul(&eps, &a));
            phi_preimage.entry(rf.index(&img)).or_insert(a);
        }
        let mu_p = pe0.is_integer() && (phi_preimage.len() as u128) < rf.order();
        let extra = if mu_p {
            rf.elements().find(|c| !phi_preimage.contains_key(&rf.index(c)))
        } else {
            None
        };
        let mut kinds = vec![BasisKind::Uniformizer];
        let mut basis = vec![k.pi()];
        let mut unit_index = HashMap::new();
        let t_lifts: Vec<FieldElement> = (0..f).map(|j| k.lift_residue(&rf.basis(j))).collect();
        let mut level = 1u32;
        while Ratio::from_integer(level as i64) < pe0 {
            if level as u64 % p != 0 {
                for (j, tj) in t_lifts.iter().enumerate() {
                    unit_index.insert((level, j), basis.len());
                    kinds.push(BasisKind::Unit { level, j });
                    basis.push(&k.one() + &tj.shift(level as i64));
                }
            }
            level += 1;
        }
        if let Some(c) = &extra {
            let lvl = pe0.to_integer() as u32;
            kinds.push(BasisKind::Extra { level: lvl });
            basis.push(&k.one() + &k.lift_residue(c).shift(lvl as i64));
        }
        let space = MulModPSpace {
            field: k.clone(),
            p,
            pe0,
            phi_preimage,
            extra,
            kinds,
            basis,
            unit_index,
        };
        let expected = k.degree() + 1 + usize::from(mu_p);
        debug_assert_eq!(space.dim(), expected);
        if (space.top_level() as i64) >= k.cap() as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "precision {} cannot resolve the unit filtration up to level {}",
                k.prec(),
                space.top_level()
            )));
        }
        Ok(space)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn kinds(&self) -> &[BasisKind] {
        &self.kinds
    }

    /// Whether mu_p lies in k.
    pub fn has_mu_p(&self) -> bool {
        self.extra.is_some()
    }

    /// p e_0 = p e / (p - 1).
    pub fn pe0(&self) -> Ratio<i64> {
        self.pe0
    }

    /// Levels above this one are p-th powers.
    pub fn top_level(&self) -> u32 {
        self.pe0.to_integer() as u32
    }

    /// Basis indices spanning U-bar^i (i >= 1), or all unit classes for i = 0.
    pub fn subspace(&self, i: u32) -> Vec<usize> {
        (1..self.dim()).filter(|&b| self.kinds[b].level() >= i).collect()
    }

    /// Level i -> basis indices of U-bar^i, for 0 <= i <= top + 1.
    pub fn filtration_table(&self) -> Vec<(u32, Vec<usize>)> {
        (0..=self.top_level() + 1).map(|i| (i, self.subspace(i))).collect()
    }

    /// Coordinates of the class of x (index 0: valuation mod p).
    pub fn coords(&self, x: &FieldElement) -> Result<Vec<u64>> {
        let v = x
            .val_raw()
            .ok_or_else(|| Error::HypothesisViolated("zero has no class in k^x/p".into()))?;
        let p = self.p;
        let u = x.shift(-v);
        let q = self.field.q();
        let w = u.pow_u128(q - 1);
        let unit = self.peel(w)?;
        let mut out = vec![0u64; self.dim()];
        out[0] = v.rem_euclid(p as i64) as u64;
        for i in 1..self.dim() {
            out[i] = (p - unit[i] % p) % p;
        }
        Ok(out)
    }

    pub fn is_pth_power(&self, x: &FieldElement) -> Result<bool> {
        Ok(self.coords(x)?.iter().all(|&c| c == 0))
    }

    /// Coordinates of a unit w = 1 mod pi, by removing its leading term
    /// level by level.
    fn peel(&self, mut w: FieldElement) -> Result<Vec<u64>> {
        let k = &self.field;
        let rf = k.residue_field();
        let p = self.p;
        let top = self.top_level() as i64;
        let mut out = vec![0u64; self.dim()];
        let one = k.one();
        loop {
            if w.abs_prec() <= top {
                return Err(Error::PrecisionExhausted(format!(
                    "unit known only modulo pi^{}, need pi^{}",
                    w.abs_prec(),
                    top + 1
                )));
            }
            let d = &w - &one;
            let Some(l) = d.val_raw() else { break };
            if Ratio::from_integer(l) > self.pe0 {
                break;
            }
            debug_assert!(l >= 1);
            let c = d.shift(-l).residue()?;
            if Ratio::from_integer(l) == self.pe0 {
                let (a, s) = self.solve_top(&c)?;
                let e0 = l / p as i64;
                let mut div = (&one + &k.lift_residue(&a).shift(e0)).pow(p as i64)?;
                if s > 0 {
                    let idx = self.dim() - 1;
                    out[idx] = (out[idx] + s) % p;
                    div = &div * &self.basis[idx].pow(s as i64)?;
                }
                w = w.div(&div)?;
            } else if l as u64 % p == 0 {
                let root = rf.pth_root(&c);
                let div = (&one + &k.lift_residue(&root).shift(l / p as i64)).pow(p as i64)?;
                w = w.div(&div)?;
            } else {
                let mut div = k.one();
                for (j, &a) in c.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let idx = self.unit_index[&(l as u32, j)];
                    out[idx] = (out[idx] + a) % p;
                    div = &div * &self.basis[idx].pow(a as i64)?;
                }
                w = w.div(&div)?;
            }
        }
        Ok(out)
    }

    /// c = a^p + eps a + s * extra.
    fn solve_top(&self, c: &Fq) -> Result<(Fq, u64)> {
        let rf = self.field.residue_field();
        let svals = if self.extra.is_some() { self.p } else { 1 };
        for s in 0..svals {
            let target = match &self.extra {
                Some(x) => rf.sub(c, &rf.scale(s, x)),
                None => c.clone(),
            };
            if let Some(a) = self.phi_preimage.get(&rf.index(&target)) {
                return Ok((a.clone(), s));
            }
        }
        Err(Error::PrecisionExhausted("top-level class could not be resolved".into()))
    }

    /// Representative pi^c0 * prod basis_i^c_i.
    pub fn from_coords(&self, c: &[u64]) -> Result<FieldElement> {
        let mut acc = self.field.one();
        for (b, &ci) in self.basis.iter().zip(c) {
            if ci % self.p != 0 {
                acc = &acc * &b.pow((ci % self.p) as i64)?;
            }
        }
        Ok(acc)
    }

    /// Filtration level of a class given by coordinates (index 0 ignored).
    pub fn level_of_coords(&self, c: &[u64]) -> FiltrationLevel {
        (1..self.dim())
            .filter(|&i| c[i] % self.p != 0)
            .map(|i| self.kinds[i].level())
            .min()
            .map_or(FiltrationLevel::Top, FiltrationLevel::Level)
    }

    /// Largest i with the class of the unit x in U-bar^i.
    pub fn filtration_level(&self, x: &FieldElement) -> Result<FiltrationLevel> {
        match x.valuation().finite() {
            Some(0) => {}
            Some(v) => return Err(Error::NotAUnit(v)),
            None => return Err(Error::NotAUnit(i64::MAX)),
        }
        Ok(self.level_of_coords(&self.coords(x)?))
    }

    /// Classify k(x^(1/p)) and, in the ramified case, produce the minimal
    /// polynomial of a uniformizer.
    pub fn kummer_form(&self, x: &FieldElement) -> Result<KummerForm> {
        if !self.has_mu_p() {
            return Err(Error::NoPthRoots);
        }
        let k = &self.field;
        let p = self.p;
        let c = self.coords(x)?;
        if c.iter().all(|&ci| ci == 0) {
            return Ok(KummerForm::Trivial);
        }
        if c[0] != 0 {
            // x' = x^a pi^-(a v - 1) has valuation 1 and the same Kummer field
            let v = x.val_raw().unwrap();
            let a = crate::fp::inv_mod(v.rem_euclid(p as i64) as u64, p).unwrap() as i64;
            let xp = x.pow(a)?.shift(-(a * v - 1));
            let mut chi = vec![k.zero(); p as usize + 1];
            chi[0] = -&xp;
            chi[p as usize] = k.one();
            return Ok(KummerForm::Ramified { chi });
        }
        let level = match self.level_of_coords(&c) {
            FiltrationLevel::Top => unreachable!(),
            FiltrationLevel::Level(l) => l,
        };
        if Ratio::from_integer(level as i64) == self.pe0 {
            return Ok(KummerForm::Unramified);
        }
        // u = 1 + c pi^l exactly; z = u^(1/p) - 1 has valuation l in the
        // extension and pi_L = z^a pi^b with a l + b p = 1.
        let mut unit_coords = c.clone();
        unit_coords[0] = 0;
        let u = self.from_coords(&unit_coords)?;
        let a = crate::fp::inv_mod(level as u64, p).unwrap();
        let b = (1 - a as i64 * level as i64) / p as i64;
        let n = p as usize;
        // (Z+1)^p - u, monic of degree p
        let mut q: Vec<FieldElement> = (0..=n).map(|m| k.from_int(crate::localfield::binomial(p, m as u64))).collect();
        q[0] = &q[0] - &u;
        let ar = FieldArith(k.clone());
        let mut comp: Matrix<FieldElement> = vec![vec![k.zero(); n]; n];
        for m in 0..n {
            comp[m][n - 1] = -&q[m];
            if m + 1 < n {
                comp[m + 1][m] = k.one();
            }
        }
        let za = mat_pow(&ar, &comp, a);
        let cp = charpoly(&ar, &za);
        let chi: Vec<FieldElement> = cp
            .iter()
            .enumerate()
            .map(|(m, cm)| cm.shift(b * (n - m) as i64))
            .collect();
        check_eisenstein(&chi)?;
        Ok(KummerForm::Ramified { chi })
    }
}

fn check_eisenstein(chi: &[FieldElement]) -> Result<()> {
    let n = chi.len() - 1;
    let ok0 = chi[0].val_raw() == Some(1);
    let ok = (1..n).all(|m| match chi[m].val_raw() {
        Some(v) => v >= 1,
        None => chi[m].abs_prec() >= 1,
    });
    if ok0 && ok {
        Ok(())
    } else {
        Err(Error::PrecisionExhausted(
            "uniformizer polynomial is not Eisenstein at this precision".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldDescriptor;

    fn field(p: u64, f: usize, eis: &[i128], prec: u32) -> LocalField {
        LocalField::from_descriptor(&FieldDescriptor::new(p, f, eis, prec)).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(MulModPSpace::new(&field(5, 1, &[-5, 1], 20)).unwrap().dim(), 2);
        let s = MulModPSpace::new(&field(3, 1, &[3, 3, 1], 30)).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.has_mu_p());
        assert!(!MulModPSpace::new(&field(5, 1, &[-5, 1], 20)).unwrap().has_mu_p());
    }

    #[test]
    fn pth_powers_have_zero_coordinates() {
        let k = field(3, 1, &[3, 3, 1], 30);
        let s = MulModPSpace::new(&k).unwrap();
        let x = &k.from_int(2) + &k.pi().shift(1);
        let cube = x.pow(3).unwrap();
        assert!(s.is_pth_power(&cube).unwrap());
        assert!(!s.is_pth_power(&x.shift(1)).unwrap());
        assert_eq!(s.filtration_level(&cube).unwrap(), FiltrationLevel::Top);
    }

    #[test]
    fn levels_in_q3_zeta3() {
        let k = field(3, 1, &[3, 3, 1], 30);
        let s = MulModPSpace::new(&k).unwrap();
        let one = k.one();
        assert_eq!(s.filtration_level(&(&one + &k.pi())).unwrap(), FiltrationLevel::Level(1));
        // p does not divide 2, so 1 + pi^2 sits exactly at level 2
        assert_eq!(
            s.filtration_level(&(&one + &k.pi().shift(1))).unwrap(),
            FiltrationLevel::Level(2)
        );
        assert!(matches!(s.filtration_level(&k.pi()), Err(Error::NotAUnit(1))));
    }

    #[test]
    fn coordinates_are_additive() {
        let k = field(3, 2, &[3, 3, 1], 30);
        let s = MulModPSpace::new(&k).unwrap();
        let a = &(&k.one() + &k.pi()) * &k.unram_gen();
        let b = &(&k.one() + &k.unram_gen().shift(2)) * &k.pi().shift(2);
        let ca = s.coords(&a).unwrap();
        let cb = s.coords(&b).unwrap();
        let cab = s.coords(&(&a * &b)).unwrap();
        for i in 0..s.dim() {
            assert_eq!(cab[i], (ca[i] + cb[i]) % 3);
        }
    }
}
