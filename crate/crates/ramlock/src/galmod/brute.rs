//! Exhaustive reference computations on small modules.
//!
//! Everything here enumerates group elements, so it is gated by an order
//! limit and returns `None` above it.

use std::collections::HashSet;

use super::group::AbGroup;
use super::module::FiniteGaloisModule;

/// Default bound on module order for exhaustive checks.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000;

type Elt = Vec<u64>;

fn moduli(m: &FiniteGaloisModule) -> Vec<u64> {
    m.type_vector.iter().map(|&t| m.p.pow(t)).collect()
}

pub fn elements(m: &FiniteGaloisModule) -> Vec<Elt> {
    let mods = moduli(m);
    let mut out = vec![vec![]];
    for &q in &mods {
        out = out
            .into_iter()
            .flat_map(|v: Elt| (0..q).map(move |a| {
                let mut w = v.clone();
                w.push(a);
                w
            }))
            .collect();
    }
    out
}

fn add(mods: &[u64], a: &[u64], b: &[u64]) -> Elt {
    a.iter().zip(b).zip(mods).map(|((x, y), q)| (x + y) % q).collect()
}

fn scale(mods: &[u64], c: u64, a: &[u64]) -> Elt {
    a.iter().zip(mods).map(|(x, q)| (c % q) * x % q).collect()
}

/// Subgroup generated by `gens`, grown one cyclic piece at a time.
pub fn span(m: &FiniteGaloisModule, gens: &[Elt]) -> HashSet<Elt> {
    let mods = moduli(m);
    let mut h: HashSet<Elt> = HashSet::from([vec![0; m.rank()]]);
    for g in gens {
        if h.contains(g) {
            continue;
        }
        let mut multiples = vec![vec![0; m.rank()]];
        let mut cur = g.clone();
        while cur.iter().any(|&x| x != 0) {
            multiples.push(cur.clone());
            cur = add(&mods, &cur, g);
        }
        let mut next = HashSet::with_capacity(h.len() * multiples.len());
        for x in &h {
            for c in &multiples {
                next.insert(add(&mods, x, c));
            }
        }
        h = next;
    }
    h
}

/// Structure of a p-group from the sizes of p^k G, k = 0, 1, ...
fn structure_from_counts(p: u64, sizes: &[u128]) -> AbGroup {
    let logs: Vec<u32> = sizes.iter().map(|&s| s.ilog(p as u128)).collect();
    // factors of exponent >= k + 1
    let at_least: Vec<u32> = logs.windows(2).map(|w| w[0] - w[1]).collect();
    let mut exps = Vec::new();
    for (k, &c) in at_least.iter().enumerate() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        exps.extend(std::iter::repeat_n(k as u32 + 1, (c - next) as usize));
    }
    AbGroup::from_exponents(p, &exps)
}

/// Structure of (A + R) / R for subgroups A = span(a_gens), R of M.
fn quotient_structure(m: &FiniteGaloisModule, a_gens: &[Elt], r: &HashSet<Elt>) -> AbGroup {
    let mods = moduli(m);
    let rgens: Vec<Elt> = r.iter().cloned().collect();
    let r_size = r.len() as u128;
    let mut sizes = Vec::new();
    let mut k = 0u32;
    loop {
        let pk = m.p.pow(k);
        let mut gens: Vec<Elt> = a_gens.iter().map(|g| scale(&mods, pk, g)).collect();
        gens.extend(rgens.iter().cloned());
        let s = span(m, &gens).len() as u128 / r_size;
        sizes.push(s);
        if s == 1 {
            break;
        }
        k += 1;
    }
    structure_from_counts(m.p, &sizes)
}

/// M_G from the subgroup of all (g - 1) x.
pub fn coinvariants(m: &FiniteGaloisModule, limit: u128) -> Option<AbGroup> {
    if m.order() > limit {
        return None;
    }
    let mods = moduli(m);
    let mut rel: HashSet<Elt> = HashSet::new();
    for x in elements(m) {
        for g in 0..m.generators.len() {
            let gx = m.apply(g, &x);
            let neg: Elt = x.iter().zip(&mods).map(|(a, q)| (q - a) % q).collect();
            rel.insert(add(&mods, &gx, &neg));
        }
    }
    let rel_gens: Vec<Elt> = rel.into_iter().collect();
    let r = span(m, &rel_gens);
    let all: Vec<Elt> = (0..m.rank())
        .map(|i| (0..m.rank()).map(|j| u64::from(i == j)).collect())
        .collect();
    Some(quotient_structure(m, &all, &r))
}

/// M^G by testing every element.
pub fn invariants(m: &FiniteGaloisModule, limit: u128) -> Option<AbGroup> {
    if m.order() > limit {
        return None;
    }
    let fixed: Vec<Elt> = elements(m)
        .into_iter()
        .filter(|x| (0..m.generators.len()).all(|g| m.apply(g, x) == *x))
        .collect();
    let zero = HashSet::from([vec![0; m.rank()]]);
    Some(quotient_structure(m, &fixed, &zero))
}

/// Image in M_G of the subgroup generated by `sub` (vectors).
pub fn image_in_coinvariants(m: &FiniteGaloisModule, sub: &[Elt], limit: u128) -> Option<AbGroup> {
    if m.order() > limit {
        return None;
    }
    let mods = moduli(m);
    let mut rel: Vec<Elt> = Vec::new();
    for x in elements(m) {
        for g in 0..m.generators.len() {
            let gx = m.apply(g, &x);
            let neg: Elt = x.iter().zip(&mods).map(|(a, q)| (q - a) % q).collect();
            rel.push(add(&mods, &gx, &neg));
        }
    }
    let r = span(m, &rel);
    Some(quotient_structure(m, sub, &r))
}

/// All cyclic subgroups stable under every generator.
pub fn invariant_cyclic_subgroups(m: &FiniteGaloisModule) -> Vec<HashSet<Elt>> {
    let mut seen: HashSet<Vec<Elt>> = HashSet::new();
    let mut out = Vec::new();
    for v in elements(m) {
        let c = span(m, std::slice::from_ref(&v));
        if !(0..m.generators.len()).all(|g| c.contains(&m.apply(g, &v))) {
            continue;
        }
        let mut key: Vec<Elt> = c.iter().cloned().collect();
        key.sort();
        if seen.insert(key) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_unipotent_example() {
        let u = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1, 3], vec![0, 1]]]).unwrap();
        assert_eq!(coinvariants(&u, EXHAUSTIVE_LIMIT).unwrap(), AbGroup::from_divisors([3, 9]));
        assert_eq!(invariants(&u, EXHAUSTIVE_LIMIT).unwrap(), AbGroup::from_divisors([3, 9]));
    }
}
