//! Field extensions: unramified steps, degree-p Kummer steps and the
//! cyclotomic tower k(mu_{p^m}).

use super::linalg::{charpoly, Arith, WArith};
use super::residue::{canonical_irreducible, ResidueField};
use super::ring::{RElem, Ring};
use super::zmod::Modulus;
use super::{poly, roots, FieldElement, LocalField, Provenance};
use crate::error::{Error, Result};
use crate::unitsymbols::{KummerForm, MulModPSpace};

/// A field embedding determined by the images of the uniformizer and of the
/// unramified generator.
#[derive(Clone)]
pub struct Embedding {
    source: LocalField,
    target: LocalField,
    pi_image: FieldElement,
    t_image: FieldElement,
    /// Images of pi^i (i < e) and t^j (j < f) in the target ring.
    pi_pows: Vec<RElem>,
    t_pows: Vec<RElem>,
    /// Absolute precision of the images, in target digits.
    image_prec: i64,
    ram: i64,
}

impl std::fmt::Debug for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.source, self.target)
    }
}

impl Embedding {
    pub fn new(
        source: &LocalField,
        target: &LocalField,
        pi_image: FieldElement,
        t_image: FieldElement,
    ) -> Result<Embedding> {
        if target.e() % source.e() != 0 || target.f() % source.f() != 0 {
            return Err(Error::HypothesisViolated("target is not an extension of source".into()));
        }
        let ring = target.ring();
        let pr = pi_image.to_ring()?;
        let tr = t_image.to_ring()?;
        let mut pi_pows = vec![ring.one()];
        for i in 1..source.e() {
            pi_pows.push(ring.mul(&pi_pows[i - 1], &pr));
        }
        let mut t_pows = vec![ring.one()];
        for j in 1..source.f() {
            t_pows.push(ring.mul(&t_pows[j - 1], &tr));
        }
        let image_prec = pi_image.abs_prec().min(t_image.abs_prec()).min(target.cap() as i64);
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            pi_image,
            t_image,
            pi_pows,
            t_pows,
            image_prec,
            ram: (target.e() / source.e()) as i64,
        })
    }

    pub fn identity(k: &LocalField) -> Embedding {
        Embedding::new(k, k, k.pi(), k.unram_gen()).expect("identity embedding")
    }

    pub fn source(&self) -> &LocalField {
        &self.source
    }

    pub fn target(&self) -> &LocalField {
        &self.target
    }

    /// Image of the source uniformizer.
    pub fn pi_image(&self) -> &FieldElement {
        &self.pi_image
    }

    fn map_ring(&self, a: &RElem) -> RElem {
        let src = self.source.ring();
        let ring = self.target.ring();
        let mut acc = ring.zero();
        for i in 0..self.source.e() {
            let w = src.coeff(a, i);
            let mut wi = ring.zero();
            for (j, &c) in w.iter().enumerate() {
                if c != 0 {
                    let c = ring.md.from_i128(c as i128);
                    wi = ring.add(&wi, &ring.scale(c, &self.t_pows[j]));
                }
            }
            acc = ring.add(&acc, &ring.mul(&wi, &self.pi_pows[i]));
        }
        acc
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.source {
            return Err(Error::FieldMismatch);
        }
        let cap = self.target.cap() as i64;
        if x.is_indistinguishable_from_zero() {
            let abs = (x.abs_prec().saturating_mul(self.ram)).min(cap);
            return Ok(FieldElement::zero_to(&self.target, abs));
        }
        let rel = (x.rel_prec() as i64 * self.ram).min(self.image_prec).max(0);
        let img = self.map_ring(x.unit_part());
        let unit = FieldElement::from_ring(&self.target, &img, rel as u32);
        let v = x.val_raw().unwrap();
        Ok(&unit * &self.pi_image.pow(v)?)
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &Embedding) -> Result<Embedding> {
        if next.source != self.target {
            return Err(Error::FieldMismatch);
        }
        Embedding::new(
            &self.source,
            &next.target,
            next.apply(&self.pi_image)?,
            next.apply(&self.t_image)?,
        )
    }
}

fn check_degree(degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        Err(Error::DegreeCapExceeded { degree, cap })
    } else {
        Ok(())
    }
}

fn pushed(k: &LocalField, tag: Provenance) -> Vec<Provenance> {
    let mut v = k.provenance().to_vec();
    v.push(tag);
    v
}

/// W element (integer vector) as an element of `k`.
fn w_element(k: &LocalField, w: &[i128]) -> FieldElement {
    let ring = k.ring();
    let v: Vec<u128> = w.iter().map(|&c| ring.md.from_i128(c)).collect();
    FieldElement::from_ring(k, &ring.from_w(&v), k.cap())
}

/// The unramified extension of degree d.
pub fn unramified_extend(
    k: &LocalField,
    d: usize,
    degree_cap: usize,
) -> Result<(LocalField, Embedding)> {
    if d == 0 {
        return Err(Error::InvalidDescriptor("extension degree must be >= 1".into()));
    }
    check_degree(k.degree() * d, degree_cap)?;
    if d == 1 {
        return Ok((k.clone(), Embedding::identity(k)));
    }
    let p = k.p();
    let f2 = k.f() * d;
    let g2 = canonical_irreducible(p, f2);
    let digits = k.prec().div_ceil(k.e() as u32) + 1;
    let md = Modulus::new(p, digits)?;
    let mut base = vec![0i128; f2];
    base[0] = -(p as i128);
    let mut lead = vec![0i128; f2];
    lead[0] = 1;
    let w2 = Ring::new(md.clone(), &g2, &[base, lead]);

    // a root of the old unramified polynomial in the new residue field, lifted
    let rf2 = ResidueField::new(p, g2.clone());
    let gq: Vec<_> = k.unram_poly().iter().map(|&c| rf2.from_int(c as i64)).collect();
    let r0 = rf2
        .roots_with_multiplicity(&gq)
        .into_iter()
        .next()
        .ok_or_else(|| Error::ReducibleUnramPoly("no root in the residue extension".into()))?
        .0;
    let g: Vec<RElem> = k.unram_poly().iter().map(|&c| w2.from_int(c as i128)).collect();
    let dg: Vec<RElem> = (1..g.len()).map(|i| w2.scale(i as u128, &g[i])).collect();
    let eval = |poly: &[RElem], x: &RElem| {
        let mut acc = w2.zero();
        for c in poly.iter().rev() {
            acc = w2.add(&w2.mul(&acc, x), c);
        }
        acc
    };
    let mut tau = w2.lift(&r0);
    for _ in 0..(2 * digits.max(2).ilog2() + 4) {
        let gv = eval(&g, &tau);
        if w2.is_zero(&gv) {
            break;
        }
        let step = w2.mul(&gv, &w2.inv_unit(&eval(&dg, &tau)));
        tau = w2.sub(&tau, &step);
    }
    let taus: Vec<RElem> = {
        let mut v = vec![w2.one()];
        for j in 1..k.f() {
            v.push(w2.mul(&v[j - 1], &tau));
        }
        v
    };
    let eis2: Vec<Vec<i128>> = k
        .eis_poly()
        .iter()
        .map(|c| {
            let mut acc = w2.zero();
            for (j, &cj) in c.iter().enumerate() {
                acc = w2.add(&acc, &w2.scale(md.from_i128(cj), &taus[j]));
            }
            acc.iter().map(|&x| md.to_signed(x)).collect()
        })
        .collect();
    let l = LocalField::build(
        p,
        g2,
        eis2,
        k.prec(),
        pushed(k, Provenance::Unramified { degree: d }),
        None,
    )?;
    let tau_int: Vec<i128> = tau.iter().map(|&x| md.to_signed(x)).collect();
    let t_img = w_element(&l, &tau_int);
    let emb = Embedding::new(k, &l, l.pi(), t_img)?;
    Ok((l, emb))
}

/// Result of adjoining a p-th root.
#[derive(Clone, Debug)]
pub struct KummerStep {
    pub field: LocalField,
    pub embedding: Embedding,
    /// A p-th root of the image of x.
    pub root: FieldElement,
    /// e(L/k): p for a ramified step, 1 for an unramified one.
    pub ramification: usize,
}

/// k(x^(1/p)) for x not a p-th power, with mu_p in k.
pub fn kummer_extend(
    k: &LocalField,
    x: &FieldElement,
    prec: u32,
    degree_cap: usize,
) -> Result<KummerStep> {
    kummer_extend_tagged(k, x, prec, degree_cap, None)
}

pub(crate) fn kummer_extend_tagged(
    k: &LocalField,
    x: &FieldElement,
    prec: u32,
    degree_cap: usize,
    tag: Option<Provenance>,
) -> Result<KummerStep> {
    let p = k.p() as usize;
    check_degree(k.degree() * p, degree_cap)?;
    let space = MulModPSpace::new(k)?;
    let (field, embedding, ramification) = match space.kummer_form(x)? {
        KummerForm::Trivial => {
            return Err(Error::HypothesisViolated("element is a p-th power".into()));
        }
        KummerForm::Unramified => {
            let (l, emb) = unramified_extend(k, p, degree_cap)?;
            (l, emb, 1)
        }
        KummerForm::Ramified { chi } => {
            let tag = tag.unwrap_or(Provenance::Kummer { step_ramification: p });
            let l = ramified_field(k, &chi, prec.max(ramified_precision_floor(k.e() * p, p)), tag)?;
            let emb = embed_into(k, &l, &chi)?;
            (l, emb, p)
        }
    };
    let xi = embedding.apply(x)?;
    let mut pol = vec![field.zero(); p + 1];
    pol[0] = -&xi;
    pol[p] = field.one();
    let root = roots::root_find(&field, &pol)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::PrecisionExhausted("p-th root not found in the extension".into()))?;
    Ok(KummerStep { field, embedding, root, ramification })
}

/// Working precision needed in a field of ramification index `e_l` to tell
/// apart the p-th roots of a unit: those differ by p-th roots of unity, at
/// valuation e_l/(p-1), while the derivative of T^p - a has valuation e_l.
fn ramified_precision_floor(e_l: usize, p: usize) -> u32 {
    (2 * (p * e_l).div_ceil(p - 1) + e_l) as u32
}

/// The absolute field defined by a uniformizer with Eisenstein minimal
/// polynomial `chi` over O_k: its Eisenstein polynomial over W is the
/// characteristic polynomial of multiplication by the uniformizer on the
/// W-basis pi_k^i Y^j.
fn ramified_field(
    k: &LocalField,
    chi: &[FieldElement],
    prec: u32,
    tag: Provenance,
) -> Result<LocalField> {
    let ring = k.ring();
    let (e, f) = (k.e(), k.f());
    let p = chi.len() - 1;
    let min_abs = chi[..p].iter().map(|c| c.abs_prec()).min().unwrap().min(k.cap() as i64);
    let known_digits = (min_abs / e as i64).max(0) as u32;
    let el = e * p;
    let nl = prec.div_ceil(el as u32);
    if known_digits < nl + 1 {
        return Err(Error::PrecisionExhausted(format!(
            "extension needs {} p-adic digits of its defining polynomial, only {known_digits} known",
            nl + 1
        )));
    }
    let coeffs: Vec<RElem> = chi[..p].iter().map(|c| c.to_ring()).collect::<Result<_>>()?;
    let ar = WArith(ring);
    let n = el;
    let mut m = vec![vec![vec![0u128; f]; n]; n];
    for j in 0..p - 1 {
        for i in 0..e {
            m[(j + 1) * e + i][j * e + i] = ar.one();
        }
    }
    for i in 0..e {
        let col = (p - 1) * e + i;
        for (mi, cm) in coeffs.iter().enumerate() {
            let prod = ring.mul(cm, &k.pi_pow_ring(i as u32));
            for i2 in 0..e {
                let w = ring.coeff(&prod, i2);
                m[mi * e + i2][col] = w.iter().map(|&x| ring.md.neg(x)).collect();
            }
        }
    }
    let cp = charpoly(&ar, &m);
    let pow = ring.md.pow_p(nl + 1);
    let md2 = Modulus::new(k.p(), nl + 1)?;
    let eis: Vec<Vec<i128>> = cp
        .iter()
        .map(|w| w.iter().map(|&x| md2.to_signed(x % pow)).collect())
        .collect();
    LocalField::build(k.p(), k.unram_poly().to_vec(), eis, prec, pushed(k, tag), None)
}

/// Embedding k -> L sending pi_k to a root of E_k for which `chi` has the
/// uniformizer of L as a root.
fn embed_into(k: &LocalField, l: &LocalField, chi: &[FieldElement]) -> Result<Embedding> {
    let ek: Vec<FieldElement> = k.eis_poly().iter().map(|c| w_element(l, c)).collect();
    let candidates = roots::root_find(l, &ek)?;
    let big = l.pi();
    let mut best: Option<(i64, Embedding)> = None;
    for r in candidates {
        let emb = Embedding::new(k, l, r, l.unram_gen())?;
        let mapped: Vec<FieldElement> = chi.iter().map(|c| emb.apply(c)).collect::<Result<_>>()?;
        let resid = poly::eval(&mapped, &big);
        let score = resid.val_raw().unwrap_or(resid.abs_prec() + 1_000_000);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, emb));
        }
    }
    best.map(|(_, e)| e)
        .ok_or_else(|| Error::PrecisionExhausted("no embedding of the base field found".into()))
}

/// A primitive p^m-th root of unity in k: the first root of Phi_p, then
/// successive first p-th roots.
pub fn primitive_root_of_unity(k: &LocalField, m: u32) -> Result<Option<FieldElement>> {
    if m == 0 {
        return Ok(Some(k.one()));
    }
    let p = k.p() as usize;
    let phi: Vec<FieldElement> = (0..p).map(|_| k.one()).collect();
    let Some(mut zeta) = roots::root_find(k, &phi)?.into_iter().next() else {
        return Ok(None);
    };
    for _ in 1..m {
        let mut pol = vec![k.zero(); p + 1];
        pol[0] = -&zeta;
        pol[p] = k.one();
        match roots::root_find(k, &pol)?.into_iter().next() {
            Some(z) => zeta = z,
            None => return Ok(None),
        }
    }
    Ok(Some(zeta))
}

/// k(mu_{p^m}) together with the embedding of k.
pub fn cyclotomic_extend(
    k: &LocalField,
    m: u32,
    degree_cap: usize,
) -> Result<(LocalField, Embedding)> {
    if m == 0 {
        return Err(Error::InvalidDescriptor("m must be >= 1".into()));
    }
    let p = k.p();
    let mut cur = k.clone();
    let mut emb = Embedding::identity(k);
    let mut have = super::invariants::invariant_m(&cur, m)?.value;
    if have == 0 {
        if k.e() != 1 {
            return Err(Error::Unsupported(
                "first cyclotomic step over a ramified field without p-th roots of unity".into(),
            ));
        }
        check_degree(k.degree() * (p as usize - 1), degree_cap)?;
        // Phi_p(x + 1) is Eisenstein over W
        let f = k.f();
        let eis: Vec<Vec<i128>> = (0..p as usize)
            .map(|i| {
                let mut v = vec![0i128; f];
                v[0] = super::binomial(p, i as u64 + 1);
                v
            })
            .collect();
        let l = LocalField::build(
            p,
            k.unram_poly().to_vec(),
            eis,
            k.prec(),
            pushed(k, Provenance::Cyclotomic { m: 1 }),
            None,
        )?;
        let pi_k = -&w_element(&l, &k.eis_poly()[0]);
        let step = Embedding::new(k, &l, pi_k, l.unram_gen())?;
        emb = emb.compose(&step)?;
        cur = l;
        have = super::invariants::invariant_m(&cur, m)?.value;
    }
    while have < m {
        let zeta = primitive_root_of_unity(&cur, have)?
            .ok_or_else(|| Error::PrecisionExhausted("root of unity lost".into()))?;
        let step = kummer_extend_tagged(
            &cur,
            &zeta,
            cur.prec(),
            degree_cap,
            Some(Provenance::Cyclotomic { m: have + 1 }),
        )?;
        emb = emb.compose(&step.embedding)?;
        cur = step.field;
        have = super::invariants::invariant_m(&cur, m)?.value;
    }
    Ok((cur, emb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldDescriptor;

    fn field(p: u64, f: usize, eis: &[i128], prec: u32) -> LocalField {
        LocalField::from_descriptor(&FieldDescriptor::new(p, f, eis, prec)).unwrap()
    }

    #[test]
    fn unramified_quadratic_over_q3_zeta3() {
        let k = field(3, 1, &[3, 3, 1], 20);
        let (l, emb) = unramified_extend(&k, 2, 16).unwrap();
        assert_eq!((l.e(), l.f()), (2, 2));
        // the image of pi satisfies pi^2 + 3 pi + 3 = 0
        let z = emb.apply(&k.pi()).unwrap();
        let v = &(&(&z * &z) + &(&z * &l.from_int(3))) + &l.from_int(3);
        assert!(v.is_zero());
        // multiplicativity of the embedding
        let a = &k.one() + &k.pi();
        let b = &k.from_int(2) + &k.pi().shift(3);
        let lhs = emb.apply(&(&a * &b)).unwrap();
        let rhs = &emb.apply(&a).unwrap() * &emb.apply(&b).unwrap();
        assert!(lhs.eq_prec(&rhs));
    }

    #[test]
    fn cyclotomic_steps_over_q3() {
        let q3 = field(3, 1, &[-3, 1], 40);
        let (k1, _) = cyclotomic_extend(&q3, 1, 16).unwrap();
        assert_eq!((k1.e(), k1.f()), (2, 1));
        let (k2, emb) = cyclotomic_extend(&k1, 2, 16).unwrap();
        assert_eq!((k2.e(), k2.f()), (6, 1));
        let z = primitive_root_of_unity(&k2, 2).unwrap().unwrap();
        assert!(z.pow(9).unwrap().eq_prec(&k2.one()));
        assert!(!z.pow(3).unwrap().eq_prec(&k2.one()));
        let x = &k1.one() + &k1.pi();
        assert!(emb.apply(&x).unwrap().valuation().finite() == Some(0));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let q5 = field(5, 1, &[-5, 1], 20);
        assert!(matches!(
            cyclotomic_extend(&q5, 1, 2),
            Err(Error::DegreeCapExceeded { degree: 4, cap: 2 })
        ));
    }

    #[test]
    fn kummer_root_of_uniformizer() {
        let k = field(3, 1, &[3, 3, 1], 30);
        let step = kummer_extend(&k, &k.pi(), 30, 16).unwrap();
        assert_eq!(step.field.e(), 6);
        assert_eq!(step.ramification, 3);
        let img = step.embedding.apply(&k.pi()).unwrap();
        assert!(step.root.pow(3).unwrap().eq_prec(&img));
    }
}
