//! Finite Z/p^n-modules with a Galois action given by generator matrices.

use serde::{Deserialize, Serialize};

use super::group::AbGroup;
use super::snf::{coker_exponents, image_exponents, kernel_exponents, mat_mul, snf, Mat};
use crate::error::{Error, Result};
use crate::localfield::zmod::Modulus;

/// sum_i Z/p^(type_vector[i]) with each generator acting by a matrix on
/// column vectors. Entries are residues mod p^level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGaloisModule {
    pub p: u64,
    pub level: u32,
    pub type_vector: Vec<u32>,
    pub generators: Vec<Vec<Vec<u64>>>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FiniteGaloisModule {
    pub fn new(
        p: u64,
        level: u32,
        type_vector: Vec<u32>,
        generators: Vec<Vec<Vec<u64>>>,
    ) -> Result<FiniteGaloisModule> {
        let m = FiniteGaloisModule { p, level, type_vector, generators };
        m.validate()?;
        Ok(m.reduced())
    }

    /// (Z/p^n)^r.
    pub fn homogeneous(p: u64, level: u32, generators: Vec<Vec<Vec<u64>>>) -> Result<FiniteGaloisModule> {
        let r = generators.first().map_or(1, |g| g.len());
        FiniteGaloisModule::new(p, level, vec![level; r], generators)
    }

    pub fn from_json(s: &str) -> Result<FiniteGaloisModule> {
        let m: FiniteGaloisModule =
            serde_json::from_str(s).map_err(|e| Error::InvalidModule(e.to_string()))?;
        FiniteGaloisModule::new(m.p, m.level, m.type_vector, m.generators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("module serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !is_prime(p) {
            return Err(Error::InvalidModule(format!("{p} is not prime")));
        }
        if self.level == 0 {
            return Err(Error::InvalidModule("level must be >= 1".into()));
        }
        Modulus::new(p, self.level).map_err(|e| Error::InvalidModule(e.to_string()))?;
        let r = self.type_vector.len();
        if r == 0 {
            return Err(Error::InvalidModule("rank must be >= 1".into()));
        }
        if let Some(&t) = self.type_vector.iter().find(|&&t| t == 0 || t > self.level) {
            return Err(Error::InvalidModule(format!("type exponent {t} outside 1..={}", self.level)));
        }
        for (gi, g) in self.generators.iter().enumerate() {
            if g.len() != r || g.iter().any(|row| row.len() != r) {
                return Err(Error::InvalidModule(format!("generator {gi} is not {r}x{r}")));
            }
            for i in 0..r {
                for j in 0..r {
                    let need = self.type_vector[i].saturating_sub(self.type_vector[j]);
                    if g[i][j] % p.pow(need) != 0 {
                        return Err(Error::InvalidModule(format!(
                            "generator {gi} entry ({i},{j}) is not well defined on the module"
                        )));
                    }
                }
            }
            let rows: Vec<Vec<u64>> = g.iter().map(|row| row.iter().map(|x| x % p).collect()).collect();
            if crate::fp::rank(&rows, p) != r {
                return Err(Error::InvalidModule(format!("generator {gi} is not invertible mod p")));
            }
        }
        Ok(())
    }

    fn reduced(mut self) -> Self {
        let m = self.p.pow(self.level);
        for g in self.generators.iter_mut() {
            for row in g.iter_mut() {
                for x in row.iter_mut() {
                    *x %= m;
                }
            }
        }
        self
    }

    pub fn rank(&self) -> usize {
        self.type_vector.len()
    }

    pub fn order(&self) -> u128 {
        self.type_vector.iter().map(|&t| (self.p as u128).pow(t)).product()
    }

    pub(crate) fn modulus(&self) -> Modulus {
        Modulus::new(self.p, self.level).expect("validated")
    }

    /// g x, reduced componentwise.
    pub fn apply(&self, g: usize, x: &[u64]) -> Vec<u64> {
        let gm = &self.generators[g];
        (0..self.rank())
            .map(|i| {
                let m = (self.p as u128).pow(self.type_vector[i]);
                let s = (0..self.rank()).fold(0u128, |acc, j| (acc + gm[i][j] as u128 * x[j] as u128) % m);
                s as u64
            })
            .collect()
    }

    fn gen_mat(&self, g: usize) -> Mat {
        self.generators[g].iter().map(|r| r.iter().map(|&x| x as u128).collect()).collect()
    }

    /// Relation matrix of the coinvariant quotient: columns p^(t_i) e_i and
    /// the columns of g - 1.
    fn relations(&self) -> Mat {
        let md = self.modulus();
        let r = self.rank();
        let mut rel: Mat = vec![Vec::new(); r];
        for (i, &t) in self.type_vector.iter().enumerate() {
            for (ii, row) in rel.iter_mut().enumerate() {
                row.push(if ii == i { md.pow_p(t) } else { 0 });
            }
        }
        for g in 0..self.generators.len() {
            let gm = self.gen_mat(g);
            for j in 0..r {
                for i in 0..r {
                    let x = if i == j { md.sub(gm[i][j], 1) } else { gm[i][j] };
                    rel[i].push(x);
                }
            }
        }
        rel
    }
}

/// M_G = M / <(g - 1) x>.
pub fn coinvariants(m: &FiniteGaloisModule) -> AbGroup {
    let md = m.modulus();
    AbGroup::from_exponents(m.p, &coker_exponents(&md, &m.relations(), m.rank()))
}

/// M^G, the common kernel of the g - 1.
pub fn invariants_sub(m: &FiniteGaloisModule) -> AbGroup {
    if m.generators.is_empty() {
        return AbGroup::from_exponents(m.p, &m.type_vector);
    }
    let md = m.modulus();
    let r = m.rank();
    let mut f: Mat = Vec::new();
    let mut target = Vec::new();
    for g in 0..m.generators.len() {
        let gm = m.gen_mat(g);
        for i in 0..r {
            f.push((0..r).map(|j| if i == j { md.sub(gm[i][j], 1) } else { gm[i][j] }).collect());
            target.push(m.type_vector[i]);
        }
    }
    AbGroup::from_exponents(m.p, &kernel_exponents(&md, &f, &m.type_vector, &target))
}

/// Coordinates of M_G: y = U x lands in sum_i Z/p^(d_i).
struct CoinvariantCoords {
    u: Mat,
    uinv: Mat,
    exps: Vec<u32>,
}

fn coinvariant_coords(m: &FiniteGaloisModule) -> CoinvariantCoords {
    let md = m.modulus();
    let rel = m.relations();
    let r = m.rank();
    let s = snf(&md, &rel, r, rel[0].len());
    let exps = (0..r).map(|i| s.diag.get(i).copied().unwrap_or(md.digits())).collect();
    CoinvariantCoords { u: s.u, uinv: s.uinv, exps }
}

/// Image in M_G of the submodule generated by the columns of `sub`.
pub fn image_in_coinvariants(m: &FiniteGaloisModule, sub: &Mat) -> AbGroup {
    let md = m.modulus();
    let cc = coinvariant_coords(m);
    let y = mat_mul(&md, &cc.u, sub);
    AbGroup::from_exponents(m.p, &image_exponents(&md, &y, &cc.exps))
}

/// M_G = p^(M_G) for a rank-one module twisted by the given characters:
/// the largest m <= n with every value = 1 mod p^m.
pub fn rank1_coinvariant_level(p: u64, n: u32, values: &[u64]) -> u32 {
    let modn = p.pow(n);
    (0..=n)
        .rev()
        .find(|&m| values.iter().all(|&v| (v % modn + modn - 1) % p.pow(m) == 0))
        .unwrap_or(0)
}

/// Z/p^n with each generator acting by multiplication by a unit.
pub fn rank1_module(p: u64, n: u32, values: &[u64]) -> Result<FiniteGaloisModule> {
    FiniteGaloisModule::homogeneous(p, n, values.iter().map(|&v| vec![vec![v]]).collect())
}

/// (Z/p^m)^2 with basis (z, y) and sigma = [[1, b], [0, 1]].
pub fn serre_tate_module(p: u64, m: u32, b: u64) -> Result<FiniteGaloisModule> {
    if m == 0 {
        return Err(Error::InvalidModule("level must be >= 1".into()));
    }
    FiniteGaloisModule::homogeneous(p, m, vec![vec![vec![1, b % p.pow(m)], vec![0, 1]]])
}

/// Fails unless every generator acts trivially modulo p^n.
pub fn check_trivial_mod(m: &FiniteGaloisModule, n: u32) -> Result<()> {
    let q = m.p.pow(n.min(m.level));
    for (gi, g) in m.generators.iter().enumerate() {
        for (i, row) in g.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = u64::from(i == j);
                if (x + q - want % q) % q != 0 {
                    return Err(Error::InconsistentInput(format!(
                        "generator {gi} is not trivial mod p^{n} at entry ({i},{j})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Image of mu_(p^m) = span(z) in the coinvariants of the Serre-Tate
/// module with parameter b = p^n u.
pub fn claim1_image(p: u64, m: u32, n: u32, b: u64) -> Result<AbGroup> {
    let modm = p.pow(m);
    let b = b % modm;
    if b == 0 {
        return Err(Error::SplitCase(m));
    }
    let v = (0..m).find(|&k| b % p.pow(k + 1) != 0).unwrap();
    if v != n || n >= m {
        return Err(Error::HypothesisViolated(format!(
            "b = {b} has p-adic valuation {v}, expected {n} < {m}"
        )));
    }
    let module = serre_tate_module(p, m, b)?;
    Ok(image_in_coinvariants(&module, &vec![vec![1], vec![0]]))
}

fn check_map(
    f: &Mat,
    src: &FiniteGaloisModule,
    dst: &FiniteGaloisModule,
    name: &str,
) -> Result<()> {
    if f.len() != dst.rank() || f.iter().any(|r| r.len() != src.rank()) {
        return Err(Error::InvalidModule(format!("{name} has the wrong shape")));
    }
    for i in 0..dst.rank() {
        for j in 0..src.rank() {
            let need = dst.type_vector[i].saturating_sub(src.type_vector[j]);
            if f[i][j] % (dst.p as u128).pow(need) != 0 {
                return Err(Error::InvalidModule(format!("{name} is not well defined")));
            }
        }
    }
    if src.generators.len() != dst.generators.len() {
        return Err(Error::NotEquivariant(format!("{name}: generator counts differ")));
    }
    for g in 0..src.generators.len() {
        for j in 0..src.rank() {
            let col: Vec<u64> = (0..src.rank()).map(|l| u64::from(l == j)).collect();
            let via_src = map_vec(f, dst, &src.apply(g, &col));
            let via_dst = dst.apply(g, &map_vec(f, dst, &col));
            if via_src != via_dst {
                return Err(Error::NotEquivariant(format!("{name} does not commute with generator {g}")));
            }
        }
    }
    Ok(())
}

fn map_vec(f: &Mat, dst: &FiniteGaloisModule, x: &[u64]) -> Vec<u64> {
    (0..dst.rank())
        .map(|i| {
            let m = (dst.p as u128).pow(dst.type_vector[i]);
            f[i].iter().zip(x).fold(0u128, |acc, (&a, &b)| (acc + (a % m) * b as u128) % m) as u64
        })
        .collect()
}

/// Image of C_G -> M_G for an equivariant exact sequence
/// 0 -> C -> M -> Q -> 0, computed from `iota` and checked against
/// Ker(M_G -> Q_G) computed from `pi`.
pub fn connected_etale_image(
    c: &FiniteGaloisModule,
    m: &FiniteGaloisModule,
    q: &FiniteGaloisModule,
    iota: &Mat,
    pi: &Mat,
) -> Result<AbGroup> {
    if c.p != m.p || q.p != m.p {
        return Err(Error::InvalidModule("modules over different primes".into()));
    }
    check_map(iota, c, m, "iota")?;
    check_map(pi, m, q, "pi")?;
    let md = m.modulus();
    // exactness
    for j in 0..c.rank() {
        let col: Vec<u64> = (0..c.rank()).map(|l| u64::from(l == j)).collect();
        if map_vec(pi, q, &map_vec(iota, m, &col)).iter().any(|&x| x != 0) {
            return Err(Error::NotExact("pi o iota != 0".into()));
        }
    }
    let mdc = Modulus::new(m.p, m.level.max(c.level)).map_err(|e| Error::InvalidModule(e.to_string()))?;
    let iota_big: Mat = iota.clone();
    if !kernel_exponents(&mdc, &iota_big, &c.type_vector, &m.type_vector).is_empty() {
        return Err(Error::NotExact("iota is not injective".into()));
    }
    let mdq = Modulus::new(m.p, m.level.max(q.level)).map_err(|e| Error::InvalidModule(e.to_string()))?;
    let pi_image: u128 = image_exponents(&mdq, pi, &q.type_vector).iter().map(|&e| (m.p as u128).pow(e)).product();
    if pi_image != q.order() {
        return Err(Error::NotExact("pi is not surjective".into()));
    }
    if c.order() * q.order() != m.order() {
        return Err(Error::NotExact("orders do not multiply".into()));
    }
    let image = image_in_coinvariants(m, iota);
    let cm = coinvariant_coords(m);
    let cq = coinvariant_coords(q);
    // pi in coinvariant coordinates: U_Q pi U_M^-1, computed at the larger level
    let big = Modulus::new(m.p, m.level.max(q.level)).unwrap();
    let f = mat_mul(&big, &mat_mul(&big, &cq.u, pi), &cm.uinv);
    let kernel = AbGroup::from_exponents(m.p, &kernel_exponents(&md, &f, &cm.exps, &cq.exps));
    if kernel != image {
        return Err(Error::NotExact(format!(
            "image of C_G is {image} but Ker(M_G -> Q_G) is {kernel}"
        )));
    }
    Ok(image)
}

/// One level of a truncated inverse system.
#[derive(Clone, Debug)]
pub struct LimitLevel {
    pub module: FiniteGaloisModule,
    /// Map to the previous level (absent for the first one).
    pub transition: Option<Mat>,
    /// When present, the image of this submodule in the coinvariants is
    /// tracked instead of the full coinvariants.
    pub submodule: Option<Mat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReport {
    pub per_level: Vec<AbGroup>,
    /// The stabilized structure, when the transitions become isomorphisms.
    pub limit: Option<AbGroup>,
    /// First level from which every later transition is an isomorphism.
    pub stabilized_at: Option<u32>,
}

/// Coinvariants (or tracked images) level by level, with the level from
/// which the transition maps become isomorphisms.
pub fn truncated_limit_coinvariants(levels: &[LimitLevel], depth: usize) -> Result<LimitReport> {
    let depth = depth.min(levels.len());
    let tracked_gens = |l: &LimitLevel| -> Mat {
        l.submodule.clone().unwrap_or_else(|| {
            let r = l.module.rank();
            (0..r).map(|i| (0..r).map(|j| u128::from(i == j)).collect()).collect()
        })
    };
    let per_level: Vec<AbGroup> = levels[..depth]
        .iter()
        .map(|l| image_in_coinvariants(&l.module, &tracked_gens(l)))
        .collect();
    let mut iso = vec![false; depth];
    for n in 1..depth {
        let (lo, hi) = (&levels[n - 1], &levels[n]);
        let t = hi
            .transition
            .as_ref()
            .ok_or_else(|| Error::InvalidModule(format!("level {} has no transition", n + 1)))?;
        check_map(t, &hi.module, &lo.module, "transition")?;
        let md = Modulus::new(lo.module.p, lo.module.level.max(hi.module.level)).unwrap();
        let pushed = mat_mul(&md, t, &tracked_gens(hi));
        let img = image_in_coinvariants(&lo.module, &pushed);
        iso[n] = img == per_level[n - 1] && img.order() == per_level[n].order();
    }
    let mut stabilized_at = None;
    if depth >= 2 && iso[depth - 1] {
        let mut s = depth - 1;
        while s >= 1 && iso[s] {
            s -= 1;
        }
        // levels are 1-based: transition n maps level n + 1 onto level n
        stabilized_at = Some(s as u32 + 1);
    }
    let limit = stabilized_at.map(|s| per_level[s as usize - 1].clone());
    Ok(LimitReport { per_level, limit, stabilized_at })
}

/// Whether a rank-2 module is a direct sum of two invariant cyclic
/// submodules, by exhausting cyclic submodules.
pub fn semisimplicity_check(m: &FiniteGaloisModule) -> Result<bool> {
    if m.rank() != 2 {
        return Err(Error::RankUnsupported(m.rank()));
    }
    if m.order() > 1_000_000 {
        return Err(Error::CapReached(format!("module of order {} is too large to exhaust", m.order())));
    }
    let lines = super::brute::invariant_cyclic_subgroups(m);
    let total = m.order();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i..] {
            if (a.len() as u128) * (b.len() as u128) == total && a.intersection(b).count() == 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coinvariant_examples() {
        let triv = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1, 0], vec![0, 1]]]).unwrap();
        assert_eq!(coinvariants(&triv), AbGroup::from_divisors([9, 9]));
        let m = rank1_module(3, 3, &[4]).unwrap();
        assert_eq!(coinvariants(&m), AbGroup::cyclic(3, 1));
        let u = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1, 3], vec![0, 1]]]).unwrap();
        assert_eq!(coinvariants(&u), AbGroup::from_divisors([3, 9]));
    }

    #[test]
    fn invariant_examples() {
        let m = rank1_module(3, 2, &[4]).unwrap();
        assert_eq!(invariants_sub(&m), AbGroup::cyclic(3, 1));
        let st = serre_tate_module(3, 3, 3).unwrap();
        assert_eq!(invariants_sub(&st), AbGroup::from_divisors([3, 27]));
    }

    #[test]
    fn rank1_levels() {
        assert_eq!(rank1_coinvariant_level(3, 4, &[4]), 1);
        assert_eq!(rank1_coinvariant_level(3, 5, &[1]), 5);
        assert_eq!(rank1_coinvariant_level(3, 4, &[10, 19]), 2);
    }

    #[test]
    fn claim1_examples() {
        assert_eq!(claim1_image(3, 2, 1, 3).unwrap(), AbGroup::cyclic(3, 1));
        assert_eq!(claim1_image(5, 3, 2, 25).unwrap(), AbGroup::cyclic(5, 2));
        assert!(matches!(claim1_image(3, 2, 0, 0), Err(Error::SplitCase(2))));
    }

    #[test]
    fn trivial_mod_check() {
        let st = serre_tate_module(3, 3, 3).unwrap();
        assert!(check_trivial_mod(&st, 1).is_ok());
        assert!(matches!(check_trivial_mod(&st, 2), Err(Error::InconsistentInput(_))));
    }

    #[test]
    fn semisimple_examples() {
        let d = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![2, 0], vec![0, 4]]]).unwrap();
        assert!(semisimplicity_check(&d).unwrap());
        let u = serre_tate_module(3, 2, 1).unwrap();
        assert!(!semisimplicity_check(&u).unwrap());
        let w = serre_tate_module(3, 2, 3).unwrap();
        assert!(!semisimplicity_check(&w).unwrap());
        assert!(matches!(semisimplicity_check(&rank1_module(3, 2, &[4]).unwrap()), Err(Error::RankUnsupported(1))));
    }

    #[test]
    fn split_sequence_image() {
        // C = span(e1) inside trivial (Z/9)^2
        let c = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1]]]).unwrap();
        let m = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let q = c.clone();
        let iota = vec![vec![1], vec![0]];
        let pi = vec![vec![0, 1]];
        assert_eq!(connected_etale_image(&c, &m, &q, &iota, &pi).unwrap(), AbGroup::cyclic(3, 2));
        let bad = vec![vec![1, 1]];
        assert!(matches!(connected_etale_image(&c, &m, &q, &iota, &bad), Err(Error::NotExact(_))));
    }
}
