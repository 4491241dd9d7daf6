//! Desk-scale self-checks run by `ramlock selftest`: each suite compares a
//! library computation with an exhaustive count or a closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{curve_bounds, georam_applies, georam_bounds, Budget};
use crate::corpus;
use crate::elliptic::{
    connected_etale_counts, formal_group, default_degree_cap, reduction_type, ReductionKind,
};
use crate::error::Result;
use crate::galmod::{
    brute, claim1_image, coinvariants, rank1_coinvariant_level, rank1_module, serre_tate_module,
    truncated_limit_coinvariants, AbGroup, LimitLevel,
};
use crate::localfield::{Caps, FieldDescriptor, LocalField};
use crate::unitsymbols::{kummer_root_level, pairing_order_formula, HilbertPairing};

pub const SUITES: [&str; 5] = ["hilbert", "coinv", "claim1", "limit", "corpus"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: usize,
    pub total: usize,
    /// First failing case, serialized.
    pub counterexample: Option<Value>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none() && self.passed == self.total
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub seed: u64,
    /// Corrupts one expected value so the failure path can be exercised.
    pub inject_fault: bool,
}

struct Tally {
    suite: &'static str,
    passed: usize,
    total: usize,
    counterexample: Option<Value>,
}

impl Tally {
    fn new(suite: &'static str) -> Tally {
        Tally { suite, passed: 0, total: 0, counterexample: None }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(case());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite.into(),
            passed: self.passed,
            total: self.total,
            counterexample: self.counterexample,
        }
    }
}

pub fn run(suite: &str, opts: Options) -> Result<SuiteResult> {
    match suite {
        "hilbert" => hilbert(opts),
        "coinv" => coinv(opts),
        "claim1" => claim1(opts),
        "limit" => limit(opts),
        "corpus" => corpus_suite(opts),
        other => Err(crate::Error::InvalidDescriptor(format!(
            "unknown suite {other}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn field(p: u64, eis: &[i128], prec: u32) -> Result<LocalField> {
    LocalField::from_descriptor(&FieldDescriptor::new(p, 1, eis, prec))
}

/// Filtration pairing orders against the closed form, and levels of
/// Kummer roots.
fn hilbert(opts: Options) -> Result<SuiteResult> {
    let mut t = Tally::new("hilbert");
    let q3z3 = corpus::q3_zeta3(30)?;
    let q3z9 = field(3, &[3, 0, 0, 3, 0, 0, 1], 30)?;
    for k in [&q3z3, &q3z9] {
        let h = HilbertPairing::new(k)?;
        let pe0 = (k.p() as u32 * k.e() as u32) / (k.p() as u32 - 1);
        for i in 1..=pe0 {
            for j in 1..=pe0 {
                if i as u64 % k.p() == 0 && j as u64 % k.p() == 0 {
                    continue;
                }
                let got = h.pairing_order(i, j)?;
                let want = pairing_order_formula(k, i, j);
                t.check(got == want, || json!({"field": k.descriptor(), "i": i, "j": j, "order": got, "formula": want}));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let caps = Caps { degree_cap: 20, ..Caps::default() };
    for _ in 0..6 {
        let i = rng.gen_range(1..=2u32);
        let u = q3z3.from_int(rng.gen_range(1..3));
        let tail = q3z3.random_integral(&mut rng).shift(i as i64 + 1);
        let x = &q3z3.one() + &(&(&u * &q3z3.pi().pow(i as i64)?) + &tail);
        let r = kummer_root_level(&q3z3, &x, &caps)?;
        t.check(r.preserved(), || json!({"x": q3z3.encode(&x).ok(), "level": i, "root_level": r.level.to_string()}));
    }
    Ok(t.finish())
}

/// Rank-1 character families: Smith normal form, exhaustive quotient and
/// the predicted Z/p^(M_G) agree.
fn coinv(opts: Options) -> Result<SuiteResult> {
    let mut t = Tally::new("coinv");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for sample in 0..60 {
        let p = if rng.gen_bool(0.5) { 3u64 } else { 5 };
        let n = rng.gen_range(1..=if p == 3 { 5 } else { 4 });
        let modn = p.pow(n);
        let gens = rng.gen_range(1..=2);
        let values: Vec<u64> = (0..gens)
            .map(|_| loop {
                let v = rng.gen_range(1..modn);
                if v % p != 0 {
                    break v;
                }
            })
            .collect();
        let m = rank1_module(p, n, &values)?;
        let snf = coinvariants(&m);
        let exhaustive = brute::coinvariants(&m, 1 << 20).expect("small module");
        let mut level = rank1_coinvariant_level(p, n, &values);
        if opts.inject_fault && sample == 0 {
            level += 1;
        }
        let predicted = AbGroup::cyclic(p, level);
        t.check(snf == exhaustive && snf == predicted, || {
            json!({"p": p, "n": n, "values": values, "snf": snf, "exhaustive": exhaustive, "predicted": predicted})
        });
    }
    Ok(t.finish())
}

/// Image of mu_(p^M) in the Serre-Tate coinvariants over the full grid.
fn claim1(_: Options) -> Result<SuiteResult> {
    let mut t = Tally::new("claim1");
    for p in [3u64, 5] {
        for big_m in 1..=3u32 {
            for n in 0..big_m {
                let units: Vec<u64> = (1..p.pow(big_m - n)).filter(|u| u % p != 0).take(5).collect();
                for u in units {
                    let b = p.pow(n) * u;
                    let got = claim1_image(p, big_m, n, b)?;
                    let module = serre_tate_module(p, big_m, b)?;
                    let exhaustive = brute::image_in_coinvariants(&module, &[vec![1, 0]], 1 << 20)
                        .expect("small module");
                    let want = AbGroup::cyclic(p, n);
                    t.check(got == want && exhaustive == want, || {
                        json!({"p": p, "M": big_m, "N": n, "b": b, "image": got, "exhaustive": exhaustive})
                    });
                }
            }
        }
    }
    Ok(t.finish())
}

/// Truncated inverse limits stabilize at level <= M_G + 1 (characters) and
/// <= M (Serre-Tate families).
fn limit(_: Options) -> Result<SuiteResult> {
    let mut t = Tally::new("limit");
    let depth = 5u32;
    for p in [3u64, 5] {
        for a in 0..depth {
            // character 1 + p^a (a = 0: a non-trivial residue)
            let chi = if a == 0 { 2 } else { 1 + p.pow(a) };
            let levels: Vec<LimitLevel> = (1..=depth)
                .map(|n| LimitLevel {
                    module: rank1_module(p, n, &[chi % p.pow(n)]).unwrap(),
                    transition: (n > 1).then(|| vec![vec![1]]),
                    submodule: None,
                })
                .collect();
            let r = truncated_limit_coinvariants(&levels, depth as usize)?;
            let mg = rank1_coinvariant_level(p, depth, &[chi]);
            let ok = r.stabilized_at.is_some_and(|s| s <= mg + 1) && r.limit == Some(AbGroup::cyclic(p, mg));
            t.check(ok, || json!({"p": p, "chi": chi, "report": r}));
        }
        for big_m in 1..=3u32 {
            for n in 0..big_m {
                let b = p.pow(n) * (p - 1);
                let levels: Vec<LimitLevel> = (1..=big_m + 2)
                    .map(|l| LimitLevel {
                        module: serre_tate_module(p, l, b).unwrap(),
                        transition: (l > 1).then(|| vec![vec![1, 0], vec![0, 1]]),
                        submodule: Some(vec![vec![1], vec![0]]),
                    })
                    .collect();
                let r = truncated_limit_coinvariants(&levels, levels.len())?;
                let ok = r.stabilized_at.is_some_and(|s| s <= big_m) && r.limit == Some(AbGroup::cyclic(p, n));
                t.check(ok, || json!({"p": p, "M": big_m, "N": n, "b": b, "report": r}));
            }
        }
    }
    Ok(t.finish())
}

/// Sandwich inequalities, the triviality criterion, connected-etale counts
/// and formal heights on the corpus.
fn corpus_suite(_: Options) -> Result<SuiteResult> {
    let mut t = Tally::new("corpus");
    let mut budget = Budget::default();
    budget.caps.degree_cap = corpus::CORPUS_DEGREE_CAP;
    for inst in corpus::instances()? {
        let e = &inst.curve;
        let k = e.field();
        let report = if georam_applies(k) { georam_bounds(e, &budget) } else { curve_bounds(e, &budget) }?;
        let inv = &report.invariants;
        let (n, m, mur, nh) = (inv.n.unwrap(), inv.m.unwrap(), inv.mur.unwrap(), inv.nhat.unwrap());
        t.check(n <= m && m <= mur && n <= nh && nh <= mur, || json!({"instance": inst.name, "invariants": inv}));
        if georam_applies(k) {
            t.check(report.bounds.exact == Some(AbGroup::trivial()), || {
                json!({"instance": inst.name, "bounds": report.bounds})
            });
        }
        let fg = formal_group(e, default_degree_cap(k.p()))?;
        let c = connected_etale_counts(&fg, 1)?;
        t.check(c.multiplicative(), || {
            json!({"instance": inst.name, "formal": c.formal, "image": c.image, "total": c.total})
        });
        let kind = reduction_type(e)?.kind;
        let want = if kind == ReductionKind::GoodOrdinary { k.p() } else { k.p() * k.p() };
        t.check(fg.height_degree as u64 == want, || {
            json!({"instance": inst.name, "reduction": kind, "lowest_unit_degree": fg.height_degree})
        });
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_is_reported() {
        let r = run("coinv", Options { seed: 1, inject_fault: true }).unwrap();
        assert!(!r.ok());
        assert!(r.counterexample.is_some());
        assert!(run("coinv", Options { seed: 1, inject_fault: false }).unwrap().ok());
        assert!(run("nonsense", Options::default()).is_err());
    }
}
