//! The mod-p Hilbert pairing on k^x/p.
//!
//! For a class x the functional y -> (y, x) vanishes exactly on the norm
//! group of k(x^(1/p)), a hyperplane of k^x/p. Its normal vector is found
//! from norms of Haar-random elements of O_k[Z]/chi(Z), chi the Eisenstein
//! polynomial of a uniformizer of the extension. Normals of the basis
//! classes are then scaled against each other using products of basis
//! classes, which pins the pairing down up to one global scalar.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::space::{FiltrationLevel, KummerForm, MulModPSpace};
use crate::error::{Error, Result};
use crate::fp;
use crate::localfield::linalg::{det, FieldArith, Matrix};
use crate::localfield::{
    invariant_m, kummer_extend, primitive_root_of_unity, Caps, ElementEncoding, FieldDescriptor,
    FieldElement, LocalField,
};

/// Upper bound on sampled norms per extension before giving up.
const NORM_SAMPLES_PER_DIM: usize = 40;

/// Normal vector of the norm group of k(x^(1/p)) inside k^x/p, or `None`
/// when x is a p-th power (every class is then a norm).
pub fn norm_functional(space: &MulModPSpace, x: &FieldElement) -> Result<Option<Vec<u64>>> {
    let p = space.p();
    let dim = space.dim();
    match space.kummer_form(x)? {
        KummerForm::Trivial => Ok(None),
        KummerForm::Unramified => {
            // norms from an unramified extension are the classes of
            // valuation divisible by p
            let mut n = vec![0u64; dim];
            n[0] = 1;
            Ok(Some(n))
        }
        KummerForm::Ramified { chi } => {
            let k = space.field();
            let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f726d);
            let mut rows: Vec<Vec<u64>> = Vec::new();
            let deg = chi.len() - 1;
            let mut z = vec![k.zero(); deg];
            z[1] = k.one();
            let mut candidates = vec![z];
            for _ in 0..NORM_SAMPLES_PER_DIM * dim {
                if let Some(alpha) = candidates.pop() {
                    let c = space.coords(&algebra_norm(k, &chi, &alpha))?;
                    rows.push(c);
                    if fp::rank(&rows, p) == dim - 1 {
                        let normal = fp::nullspace(&rows, dim, p).pop().unwrap();
                        return Ok(Some(fp::normalize(&normal, p)));
                    }
                }
                candidates.push((0..deg).map(|_| k.random_integral(&mut rng)).collect());
            }
            Err(Error::PrecisionExhausted("norm group of the extension not resolved".into()))
        }
    }
}

/// Norm of sum alpha_i Z^i from k[Z]/chi(Z) (chi monic), as the
/// determinant of multiplication by alpha.
pub fn algebra_norm(k: &LocalField, chi: &[FieldElement], alpha: &[FieldElement]) -> FieldElement {
    let n = chi.len() - 1;
    let mut cols: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
    let mut v = alpha.to_vec();
    v.resize(n, k.zero());
    for _ in 0..n {
        cols.push(v.clone());
        let top = v[n - 1].clone();
        let mut next = vec![k.zero(); n];
        next[0] = -&(&top * &chi[0]);
        for i in 1..n {
            next[i] = &v[i - 1] - &(&top * &chi[i]);
        }
        v = next;
    }
    let m: Matrix<FieldElement> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    det(&FieldArith(k.clone()), &m)
}

/// The pairing as a matrix on the basis of k^x/p: entry (a, b) is
/// (basis_a, basis_b)_p in Z/p.
pub struct HilbertPairing {
    space: MulModPSpace,
    matrix: Vec<Vec<u64>>,
    zeta: FieldElement,
}

/// Exported pairing table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingTable {
    pub field: FieldDescriptor,
    pub zeta_choice: ElementEncoding,
    pub table: Vec<Vec<u64>>,
}

impl HilbertPairing {
    pub fn new(k: &LocalField) -> Result<HilbertPairing> {
        let space = MulModPSpace::new(k)?;
        if !space.has_mu_p() {
            return Err(Error::NoPthRoots);
        }
        let p = space.p();
        let dim = space.dim();
        let zeta = primitive_root_of_unity(k, 1)?.ok_or(Error::NoPthRoots)?;
        let normals: Vec<Vec<u64>> = space
            .basis()
            .iter()
            .map(|b| {
                norm_functional(&space, b)?
                    .ok_or_else(|| Error::PrecisionExhausted("basis class is a p-th power".into()))
            })
            .collect::<Result<_>>()?;
        let mut scale = vec![0u64; dim];
        scale[0] = 1;
        for j in 1..dim {
            let prod = &space.basis()[0] * &space.basis()[j];
            let combined = norm_functional(&space, &prod)?
                .ok_or_else(|| Error::PrecisionExhausted("product class is a p-th power".into()))?;
            let sol = fp::solve_combination(&[normals[0].clone(), normals[j].clone()], &combined, p)
                .filter(|s| s[0] != 0 && s[1] != 0)
                .ok_or_else(|| Error::PrecisionExhausted("norm functionals are inconsistent".into()))?;
            scale[j] = sol[1] * fp::inv_mod(sol[0], p).unwrap() % p;
        }
        let mut matrix = vec![vec![0u64; dim]; dim];
        for j in 0..dim {
            for a in 0..dim {
                matrix[a][j] = scale[j] * normals[j][a] % p;
            }
        }
        // fix the global scalar: (pi, extra class) = 1
        let g = fp::inv_mod(matrix[0][dim - 1], p)
            .ok_or_else(|| Error::PrecisionExhausted("uniformizer pairs trivially with the unramified class".into()))?;
        for row in matrix.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * g % p;
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                if (matrix[a][b] + matrix[b][a]) % p != 0 {
                    return Err(Error::PrecisionExhausted(
                        "computed pairing is not antisymmetric".into(),
                    ));
                }
            }
        }
        Ok(HilbertPairing { space, matrix, zeta })
    }

    pub fn space(&self) -> &MulModPSpace {
        &self.space
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// The p-th root of unity recorded with the table.
    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    /// (x, y)_p from coordinates.
    pub fn symbol_coords(&self, cx: &[u64], cy: &[u64]) -> u64 {
        let p = self.space.p();
        let mut acc = 0;
        for (a, &xa) in cx.iter().enumerate() {
            if xa != 0 {
                acc = (acc + xa * fp::dot(&self.matrix[a], cy, p)) % p;
            }
        }
        acc
    }

    /// (x, y)_p; zero iff x is a norm from k(y^(1/p)).
    pub fn symbol(&self, x: &FieldElement, y: &FieldElement) -> Result<u64> {
        Ok(self.symbol_coords(&self.space.coords(x)?, &self.space.coords(y)?))
    }

    /// Order of the image of U-bar^i x U-bar^j under the pairing.
    pub fn pairing_order(&self, i: u32, j: u32) -> Result<u64> {
        let p = self.space.p();
        if i == 0 || j == 0 {
            return Err(Error::HypothesisViolated("filtration levels start at 1".into()));
        }
        if i as u64 % p == 0 && j as u64 % p == 0 {
            return Err(Error::BothDivisible(i as i64, j as i64));
        }
        let (si, sj) = (self.space.subspace(i), self.space.subspace(j));
        let nontrivial = si.iter().any(|&a| sj.iter().any(|&b| self.matrix[a][b] != 0));
        Ok(if nontrivial { p } else { 1 })
    }

    pub fn table(&self) -> Result<PairingTable> {
        let k = self.space.field();
        Ok(PairingTable {
            field: k.descriptor().clone(),
            zeta_choice: k.encode(&self.zeta)?,
            table: self.matrix.clone(),
        })
    }
}

/// (x, y)_p over k.
pub fn hilbert_symbol(k: &LocalField, x: &FieldElement, y: &FieldElement) -> Result<u64> {
    HilbertPairing::new(k)?.symbol(x, y)
}

/// Order of (U-bar^i, U-bar^j)_p computed from the pairing.
pub fn filtration_pairing_order(k: &LocalField, i: u32, j: u32) -> Result<u64> {
    HilbertPairing::new(k)?.pairing_order(i, j)
}

/// Closed form for the same order: p if i + j <= p e_0, else 1.
pub fn pairing_order_formula(k: &LocalField, i: u32, j: u32) -> u64 {
    let pe0 = num_rational::Ratio::new(k.p() as i64 * k.e() as i64, k.p() as i64 - 1);
    if num_rational::Ratio::from_integer((i + j) as i64) <= pe0 {
        k.p()
    } else {
        1
    }
}

/// A unit class at a prescribed level pairing nontrivially with zeta.
#[derive(Clone, Debug)]
pub struct SymbolWitness {
    pub level: u32,
    pub unit: FieldElement,
    pub coords: Vec<u64>,
    /// (unit, zeta)_p, nonzero.
    pub value: u64,
}

#[derive(Clone, Debug)]
pub struct SymbolGenerators {
    pub m: u32,
    pub zeta: FieldElement,
    pub zeta_level: u32,
    /// Witnesses at the first and second requested levels.
    pub witnesses: [SymbolWitness; 2],
}

/// Witnesses u in U-bar^(levels.0), u' in U-bar^(levels.1) with
/// (u, zeta)_p and (u', zeta)_p nonzero, zeta a primitive p^M-th root of
/// unity. The levels are p t_0 and p (e_0 - t_0) for a supersingular curve.
pub fn symbol_generators_mod_p(
    pairing: &HilbertPairing,
    levels: (u32, u32),
    m_cap: u32,
) -> Result<SymbolGenerators> {
    let space = pairing.space();
    let k = space.field();
    if levels.0 == 0 || levels.1 == 0 {
        return Err(Error::HypothesisViolated(
            "decomposition levels must be positive (t_0 >= 1)".into(),
        ));
    }
    let m = invariant_m(k, m_cap)?.value;
    let zeta = primitive_root_of_unity(k, m)?.ok_or(Error::NoPthRoots)?;
    let zeta_coords = space.coords(&zeta)?;
    let zeta_level = match space.level_of_coords(&zeta_coords) {
        FiltrationLevel::Level(i) => i,
        FiltrationLevel::Top => {
            return Err(Error::NotFound(format!(
                "zeta_(p^{m}) is a p-th power at this precision"
            )))
        }
    };
    let bound = levels.0.min(levels.1);
    if zeta_level > bound {
        return Err(Error::NotFound(format!(
            "zeta_(p^{m}) has level {zeta_level} > min{{{}, {}}} = {bound}",
            levels.0, levels.1
        )));
    }
    let find = |level: u32| -> Result<SymbolWitness> {
        for b in space.subspace(level) {
            let mut c = vec![0u64; space.dim()];
            c[b] = 1;
            let value = pairing.symbol_coords(&c, &zeta_coords);
            if value != 0 {
                return Ok(SymbolWitness { level, unit: space.basis()[b].clone(), coords: c, value });
            }
        }
        Err(Error::NotFound(format!(
            "no class in U-bar^{level} pairs nontrivially with zeta_(p^{m})"
        )))
    };
    Ok(SymbolGenerators { m, zeta, zeta_level, witnesses: [find(levels.0)?, find(levels.1)?] })
}

/// Filtration level of a p-th root of x in k(x^(1/p)).
#[derive(Clone, Debug)]
pub struct KummerRootLevel {
    pub field: LocalField,
    pub root: FieldElement,
    /// Level of x in k.
    pub base_level: u32,
    /// Level of the root in the extension.
    pub level: FiltrationLevel,
}

impl KummerRootLevel {
    /// Whether the root sits at the same level as x.
    pub fn preserved(&self) -> bool {
        self.level == FiltrationLevel::Level(self.base_level)
    }
}

/// Adjoin a p-th root of a unit x at level i (0 < i < p e_0, p not
/// dividing i) and measure the level of the root.
pub fn kummer_root_level(k: &LocalField, x: &FieldElement, caps: &Caps) -> Result<KummerRootLevel> {
    let space = MulModPSpace::new(k)?;
    if !space.has_mu_p() {
        return Err(Error::NoPthRoots);
    }
    let level = match space.filtration_level(x)? {
        FiltrationLevel::Top => {
            return Err(Error::HypothesisViolated("x is a p-th power".into()));
        }
        FiltrationLevel::Level(i) => i,
    };
    if level as u64 % k.p() == 0 || num_rational::Ratio::from_integer(level as i64) >= space.pe0() {
        return Err(Error::HypothesisViolated(format!(
            "level {level} must be prime to p and below p e_0 = {}",
            space.pe0()
        )));
    }
    let step = kummer_extend(k, x, k.prec(), caps.degree_cap)?;
    let upper = MulModPSpace::new(&step.field)?;
    let root_level = upper.filtration_level(&step.root)?;
    Ok(KummerRootLevel { field: step.field, root: step.root, base_level: level, level: root_level })
}
