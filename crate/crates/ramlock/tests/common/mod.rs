//! Brute-force oracles shared by the integration tests. They avoid the
//! library's own algorithms wherever a direct computation is feasible.
#![allow(dead_code)]

use rand::Rng;
use ramlock::fp;
use ramlock::localfield::{cyclotomic_extend, FieldDescriptor, FieldElement, LocalField};
use ramlock::unitsymbols::MulModPSpace;

pub fn field(p: u64, eis: &[i128], prec: u32) -> LocalField {
    LocalField::from_descriptor(&FieldDescriptor::new(p, 1, eis, prec)).unwrap()
}

pub fn q3_zeta3() -> LocalField {
    field(3, &[3, 3, 1], 40)
}

pub fn q5_zeta5() -> LocalField {
    field(5, &[5, 10, 10, 5, 1], 40)
}

pub fn q3_zeta9() -> LocalField {
    cyclotomic_extend(&field(3, &[-3, 1], 40), 2, 16).unwrap().0
}

/// Determinant by the Leibniz expansion (n <= 5 here).
pub fn leibniz_det(k: &LocalField, m: &[Vec<FieldElement>]) -> FieldElement {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = k.zero();
    permute(k, m, &mut perm, 0, &mut total);
    total
}

fn permute(k: &LocalField, m: &[Vec<FieldElement>], perm: &mut Vec<usize>, at: usize, total: &mut FieldElement) {
    let n = perm.len();
    if at == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = k.one();
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
        }
        *total = if inversions % 2 == 0 { &*total + &term } else { &*total - &term };
        return;
    }
    for i in at..n {
        perm.swap(at, i);
        permute(k, m, perm, at + 1, total);
        perm.swap(at, i);
    }
}

/// N(a_0 + a_1 T + ... ) from k[T]/(T^p - x), by the Leibniz determinant of
/// the multiplication matrix.
pub fn kummer_norm(k: &LocalField, x: &FieldElement, a: &[FieldElement]) -> FieldElement {
    let n = a.len();
    // multiplication by a sends T^c to sum_i a_i T^(i+c), wrapping with x
    let mut m = vec![vec![k.zero(); n]; n];
    for c in 0..n {
        for (i, ai) in a.iter().enumerate() {
            let r = i + c;
            let v = if r >= n { ai * x } else { ai.clone() };
            m[r % n][c] = &m[r % n][c] + &v;
        }
    }
    leibniz_det(k, &m)
}

/// F_p-span of norm classes from k(y^(1/p)), grown until it is a
/// hyperplane. Norm groups of degree-p extensions have index p, so a
/// hyperplane reached this way is the whole norm group.
pub fn norm_span<R: Rng>(space: &MulModPSpace, y: &FieldElement, rng: &mut R) -> Vec<Vec<u64>> {
    let k = space.field();
    let p = space.p();
    let n = p as usize;
    let d = space.dim();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut theta = vec![k.zero(); n];
    theta[1] = k.one();
    let mut queue = vec![theta];
    let top = space.top_level() as i64;
    for s in 0..=top {
        for i in 1..n {
            let mut a = vec![k.zero(); n];
            a[0] = k.one();
            a[i] = k.pi().pow(s).unwrap();
            queue.push(a);
        }
    }
    for _ in 0..400 {
        let a = match queue.pop() {
            Some(a) => a,
            None => (0..n)
                .map(|_| {
                    let shift = rng.gen_range(0..3);
                    k.random_integral(rng).shift(shift)
                })
                .collect(),
        };
        let nm = kummer_norm(k, y, &a);
        if nm.is_indistinguishable_from_zero() {
            continue;
        }
        rows.push(space.coords(&nm).unwrap());
        if fp::rank(&rows, p) == d - 1 {
            return rows;
        }
    }
    panic!("norm span did not reach a hyperplane");
}

/// Random nonzero element with valuation in 0..3.
pub fn random_element<R: Rng>(k: &LocalField, rng: &mut R) -> FieldElement {
    loop {
        let x = k.random_integral(rng);
        if x.val_raw() == Some(0) {
            return x.shift(rng.gen_range(0..3));
        }
    }
}
