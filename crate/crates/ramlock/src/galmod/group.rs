//! Finite abelian p-groups in elementary-divisor form.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite abelian group given by its elementary divisors, sorted
/// ascending with trivial factors removed. The empty list is the trivial
/// group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbGroup {
    divisors: Vec<u64>,
}

impl AbGroup {
    pub fn trivial() -> AbGroup {
        AbGroup::default()
    }

    pub fn from_divisors<I: IntoIterator<Item = u64>>(divs: I) -> AbGroup {
        let mut divisors: Vec<u64> = divs.into_iter().filter(|&d| d > 1).collect();
        divisors.sort_unstable();
        AbGroup { divisors }
    }

    /// Z/p^k.
    pub fn cyclic(p: u64, k: u32) -> AbGroup {
        AbGroup::from_divisors([p.pow(k)])
    }

    /// (Z/p^k)^g.
    pub fn power(p: u64, k: u32, g: usize) -> AbGroup {
        AbGroup::from_divisors(std::iter::repeat_n(p.pow(k), g))
    }

    /// From p-exponents of the cyclic factors.
    pub fn from_exponents(p: u64, exps: &[u32]) -> AbGroup {
        AbGroup::from_divisors(exps.iter().map(|&e| p.pow(e)))
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn order(&self) -> u128 {
        self.divisors.iter().map(|&d| d as u128).product()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        AbGroup::from_divisors(self.divisors.iter().chain(&other.divisors).copied())
    }

    /// Componentwise divisibility after aligning the largest factors and
    /// padding with trivial ones; for p-groups this is equivalent to `self`
    /// being a quotient of `other`.
    pub fn divides(&self, other: &AbGroup) -> bool {
        if self.divisors.len() > other.divisors.len() {
            return false;
        }
        let mut a: Vec<u64> = self.divisors.clone();
        let mut b: Vec<u64> = other.divisors.clone();
        a.reverse();
        b.reverse();
        a.iter().zip(&b).all(|(x, y)| y % x == 0)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
