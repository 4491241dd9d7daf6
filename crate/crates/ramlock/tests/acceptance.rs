//! Acceptance suite. Each criterion prints one `criterion N: pass|FAIL`
//! line with the observed values before asserting.

mod common;

use std::collections::HashSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramlock::bounds::{curve_bounds, georam_applies, georam_bounds, ozeki_tower, Budget};
use ramlock::corpus;
use ramlock::elliptic::reduction::ordinary_by_division_polynomial;
use ramlock::elliptic::*;
use ramlock::fp;
use ramlock::galmod::{
    brute, claim1_image, coinvariants, rank1_coinvariant_level, rank1_module, serre_tate_module,
    truncated_limit_coinvariants, AbGroup, LimitLevel,
};
use ramlock::localfield::{Caps, FieldElement, LocalField};
use ramlock::unitsymbols::{kummer_root_level, pairing_order_formula, FiltrationLevel, HilbertPairing};
use ramlock::Error;

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} ({detail})", if ok { "pass" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn budget() -> Budget {
    let mut b = Budget::default();
    b.caps.degree_cap = corpus::CORPUS_DEGREE_CAP;
    b
}

/// Whether x is a norm from k(y^(1/p)), by spanning the norm group.
fn is_norm<R: Rng>(h: &HilbertPairing, x: &FieldElement, y: &FieldElement, rng: &mut R) -> bool {
    let space = h.space();
    if space.coords(y).unwrap().iter().all(|&c| c == 0) {
        return true;
    }
    let span = common::norm_span(space, y, rng);
    fp::in_span(&span, &space.coords(x).unwrap(), space.p())
}

#[test]
fn criterion_01_hilbert_symbol_matches_norm_oracle() {
    let mut checked = 0;
    let mut bad = vec![];
    for (name, k) in [("Q_3(zeta_3)", common::q3_zeta3()), ("Q_5(zeta_5)", common::q5_zeta5())] {
        let h = HilbertPairing::new(&k).unwrap();
        let p = k.p();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for i in 0..50 {
            let x = common::random_element(&k, &mut rng);
            let y = common::random_element(&k, &mut rng);
            let x2 = common::random_element(&k, &mut rng);
            let s = h.symbol(&x, &y).unwrap();
            let oracle = is_norm(&h, &x, &y, &mut rng);
            let bilinear = (h.symbol(&(&x * &x2), &y).unwrap()
                == (s + h.symbol(&x2, &y).unwrap()) % p)
                && h.symbol(&x, &(&y * &x2)).unwrap() == (s + h.symbol(&x, &x2).unwrap()) % p;
            let minus_x = -&x;
            let self_trivial = h.symbol(&x, &minus_x).unwrap() == 0;
            if (s == 0) != oracle || !bilinear || !self_trivial {
                bad.push(format!("{name} sample {i}"));
            }
            checked += 1;
        }
    }
    report(1, bad.is_empty(), format!("{checked} pairs, mismatches {bad:?}"));
}

/// Order of (U^i, U^j)_p from symbols of the generators 1 + c pi^l,
/// l up to p e_0, evaluated on field elements.
fn generator_pairing_order(h: &HilbertPairing, k: &LocalField, i: u32, j: u32, pe0: u32) -> u64 {
    let gens = |from: u32| -> Vec<FieldElement> {
        (from..=pe0)
            .flat_map(|l| {
                (1..k.p() as i128).map(move |c| &k.one() + &(&k.from_int(c) * &k.pi().pow(l as i64).unwrap()))
            })
            .collect()
    };
    let (gi, gj) = (gens(i), gens(j));
    for a in &gi {
        for b in &gj {
            if h.symbol(a, b).unwrap() != 0 {
                return k.p();
            }
        }
    }
    1
}

#[test]
fn criterion_02_filtration_order_table() {
    let mut cells = 0;
    let mut bad = vec![];
    for (name, k, pe0) in [("Q_3(zeta_3)", common::q3_zeta3(), 3u32), ("Q_3(zeta_9)", common::q3_zeta9(), 9)] {
        let h = HilbertPairing::new(&k).unwrap();
        for i in 1..=pe0 {
            for j in 1..=pe0 {
                if i % 3 == 0 && j % 3 == 0 {
                    continue;
                }
                let exhaustive = generator_pairing_order(&h, &k, i, j, pe0);
                let formula = pairing_order_formula(&k, i, j);
                let library = h.pairing_order(i, j).unwrap();
                if exhaustive != formula || library != formula {
                    bad.push(format!("{name} ({i},{j}): {exhaustive} vs {formula}"));
                }
                cells += 1;
            }
        }
    }
    report(2, bad.is_empty(), format!("{cells} admissible cells, mismatches {bad:?}"));
}

#[test]
fn criterion_03_kummer_root_levels() {
    let caps = Caps { degree_cap: 20, ..Caps::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut samples = 0;
    let mut bad = vec![];
    for (k, levels) in [(common::q3_zeta3(), vec![1u32, 2]), (common::q5_zeta5(), vec![1, 2, 3, 4])] {
        for s in 0..55 {
            let i = levels[s % levels.len()];
            let u = k.from_int(rng.gen_range(1..k.p() as i128));
            let tail = k.random_integral(&mut rng).shift(i as i64 + 1);
            let x = &k.one() + &(&(&u * &k.pi().pow(i as i64).unwrap()) + &tail);
            let r = kummer_root_level(&k, &x, &caps).unwrap();
            if r.level != FiltrationLevel::Level(i) {
                bad.push(format!("p = {}, level {i} -> {}", k.p(), r.level));
            }
            samples += 1;
        }
    }
    report(3, bad.is_empty() && samples >= 100, format!("{samples} samples, mismatches {bad:?}"));
}

#[test]
fn criterion_04_rank_one_coinvariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = vec![];
    for _ in 0..200 {
        let p = if rng.gen_bool(0.5) { 3u64 } else { 5 };
        let n = rng.gen_range(1..=5u32);
        let modn = p.pow(n);
        let count = rng.gen_range(1..=2);
        let values: Vec<u64> = (0..count)
            .map(|_| loop {
                let v = rng.gen_range(1..modn);
                if v % p != 0 {
                    break v;
                }
            })
            .collect();
        // largest m with every value = 1 mod p^m, by direct search
        let mg = (0..=n).rev().find(|&m| values.iter().all(|v| (v + modn - 1) % p.pow(m) == 0)).unwrap();
        let m = rank1_module(p, n, &values).unwrap();
        let snf = coinvariants(&m);
        let exhaustive = brute::coinvariants(&m, 1 << 20).unwrap();
        let predicted = AbGroup::cyclic(p, mg);
        if snf != predicted || exhaustive != predicted || rank1_coinvariant_level(p, n, &values) != mg {
            bad.push(format!("p={p} n={n} values={values:?}"));
        }
    }
    report(4, bad.is_empty(), format!("200 families, mismatches {bad:?}"));
}

/// |(span(z) + R) / R| with R = {(sigma - 1) x}, sigma = [[1, b], [0, 1]] on
/// (Z/p^m)^2, by enumeration.
fn serre_tate_image_order(p: u64, m: u32, b: u64) -> usize {
    let q = p.pow(m);
    let mut rel: HashSet<(u64, u64)> = HashSet::new();
    for y in 0..q {
        // (sigma - 1)(x, y) = (b y, 0)
        rel.insert((b * y % q, 0));
    }
    // rel is already a subgroup (image of a homomorphism)
    let mut with_z: HashSet<(u64, u64)> = HashSet::new();
    for t in 0..q {
        for &(a, c) in &rel {
            with_z.insert(((a + t) % q, c));
        }
    }
    with_z.len() / rel.len()
}

#[test]
fn criterion_05_claim1_grid() {
    let mut cases = 0;
    let mut bad = vec![];
    for p in [3u64, 5] {
        for big_m in 1..=3u32 {
            for n in 0..big_m {
                for u in (1..p.pow(big_m - n)).filter(|u| u % p != 0).take(5) {
                    let b = p.pow(n) * u;
                    let got = claim1_image(p, big_m, n, b).unwrap();
                    let brute_order = serre_tate_image_order(p, big_m, b);
                    if got != AbGroup::cyclic(p, n) || brute_order as u128 != got.order() {
                        bad.push(format!("p={p} M={big_m} N={n} b={b}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    report(5, bad.is_empty(), format!("{cases} grid points, mismatches {bad:?}"));
}

#[test]
fn criterion_06_truncated_limits_stabilize() {
    let mut families = 0;
    let mut bad = vec![];
    let depth = 5u32;
    for p in [3u64, 5] {
        for a in 0..depth {
            let chi = if a == 0 { 2 } else { 1 + p.pow(a) };
            let levels: Vec<LimitLevel> = (1..=depth)
                .map(|n| LimitLevel {
                    module: rank1_module(p, n, &[chi % p.pow(n)]).unwrap(),
                    transition: (n > 1).then(|| vec![vec![1]]),
                    submodule: None,
                })
                .collect();
            let r = truncated_limit_coinvariants(&levels, depth as usize).unwrap();
            let mg = a.min(depth);
            let ok = r.stabilized_at.is_some_and(|s| s <= mg + 1) && r.limit == Some(AbGroup::cyclic(p, mg));
            if !ok {
                bad.push(format!("character p={p} chi={chi}: {:?}", r.stabilized_at));
            }
            families += 1;
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
                let r = truncated_limit_coinvariants(&levels, levels.len()).unwrap();
                // per-level images against the enumeration oracle
                let per_level_ok = r
                    .per_level
                    .iter()
                    .enumerate()
                    .all(|(l, g)| g.order() == serre_tate_image_order(p, l as u32 + 1, b) as u128);
                let ok = per_level_ok
                    && r.stabilized_at.is_some_and(|s| s <= big_m)
                    && r.limit == Some(AbGroup::cyclic(p, n));
                if !ok {
                    bad.push(format!("Serre-Tate p={p} M={big_m} N={n}: {:?}", r.stabilized_at));
                }
                families += 1;
            }
        }
    }
    report(6, bad.is_empty(), format!("{families} families, failures {bad:?}"));
}

#[test]
fn criterion_07_invariant_sandwich_on_the_corpus() {
    let mut rows = vec![];
    let mut ok = true;
    let instances = corpus::instances().unwrap();
    for inst in &instances {
        let e = &inst.curve;
        let r = match curve_bounds(e, &budget()) {
            Ok(r) => r,
            Err(Error::TorsionHypothesisFails(_)) => georam_bounds(e, &budget()).unwrap(),
            Err(err) => panic!("{}: {err}", inst.name),
        };
        let inv = &r.invariants;
        let (n, m, mur, nh) = (inv.n.unwrap(), inv.m.unwrap(), inv.mur.unwrap(), inv.nhat.unwrap());
        let capped = r.caveats.iter().any(|c| c.starts_with("CapReached"));
        ok &= n <= m && m <= mur && n <= nh && nh <= mur && !capped;
        rows.push(format!("{}: N={n} M={m} Mur={mur} Nhat={nh}", inst.name));
    }
    ok &= instances.len() >= 6;
    report(7, ok, rows.join("; "));
}

#[test]
fn criterion_08_small_ramification_gives_trivial_structure() {
    let mut rows = vec![];
    let mut ok = true;
    for inst in corpus::instances().unwrap() {
        let e = &inst.curve;
        if !georam_applies(e.field()) {
            continue;
        }
        let r = georam_bounds(e, &budget()).unwrap();
        let trivial = r.bounds.exact == Some(AbGroup::trivial()) && r.bounds.upper.is_trivial();
        // the routed report agrees whenever it exists
        let routed = match curve_bounds(e, &budget()) {
            Ok(r) => r.bounds.exact == Some(AbGroup::trivial()),
            Err(Error::TorsionHypothesisFails(_)) => true,
            Err(_) => false,
        };
        ok &= trivial && routed;
        rows.push(format!("{}: exact {}", inst.name, r.bounds.exact.unwrap()));
    }
    ok &= !rows.is_empty();
    report(8, ok, rows.join("; "));
}

#[test]
fn criterion_09_connected_etale_multiplicativity() {
    let mut rows = vec![];
    let mut ok = true;
    for inst in corpus::instances().unwrap() {
        let e = &inst.curve;
        let fg = formal_group(e, default_degree_cap(e.p())).unwrap();
        let c = connected_etale_counts(&fg, 1).unwrap();
        // every point counted really is p-torsion
        let pts = torsion_points(e, 1).unwrap();
        let killed = pts.iter().all(|pt| e.mul(e.p(), pt).unwrap().is_infinity());
        ok &= c.formal * c.image == c.total && killed && pts.len() == c.total;
        rows.push(format!("{}: {}*{}={}", inst.name, c.formal, c.image, c.total));
    }
    report(9, ok, rows.join("; "));
}

#[test]
fn criterion_10_ozeki_tower() {
    let e = corpus::cm_curve(0).unwrap();
    let t = ozeki_tower(&e, 2, &budget()).unwrap();
    let rows: Vec<String> =
        t.rows.iter().map(|r| format!("m={} M={} N={} gap={}", r.m, r.big_m, r.n, r.gap)).collect();
    let ok = t.stopped.is_none()
        && t.rows.len() == 2
        && t.rows.iter().all(|r| r.big_m == r.m && !r.cap_reached)
        && t.rows[1].n <= t.rows[0].n
        && t.rows[1].gap >= t.rows[0].gap;
    report(10, ok, rows.join("; "));
}

#[test]
fn criterion_11_formal_group_matches_reduction() {
    let mut rows = vec![];
    let mut ok = true;
    for inst in corpus::instances().unwrap() {
        let e = &inst.curve;
        let p = e.p();
        let fg = formal_group(e, default_degree_cap(p)).unwrap();
        let lowest = fg.mult_p.iter().position(|c| c.valuation().finite() == Some(0)).unwrap() as u64;
        let kind = reduction_type(e).unwrap().kind;
        let want = if kind == ReductionKind::GoodOrdinary { p } else { p * p };
        // second classifier: f_p mod p has positive degree exactly when ordinary
        let agree = ordinary_by_division_polynomial(e).unwrap() == (kind == ReductionKind::GoodOrdinary);
        ok &= lowest == want && agree;
        rows.push(format!("{}: {:?}, lowest unit degree {lowest}", inst.name, kind));
    }
    report(11, ok, rows.join("; "));
}

#[test]
fn criterion_12_cli_output_is_deterministic() {
    let data = |f: &str| format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"));
    let jobs: Vec<Vec<String>> = vec![
        vec!["bounds".into(), "--curve".into(), data("ss_torsion_field.toml"), "--json".into(), "--seed".into(), "5".into()],
        vec!["invariants".into(), "--curve".into(), data("cm_q5.toml"), "--json".into(), "--seed".into(), "5".into()],
        vec!["hilbert-table".into(), "--field".into(), data("q3_zeta3.toml"), "--json".into(), "--seed".into(), "5".into()],
        vec!["selftest".into(), "--suite".into(), "coinv".into(), "--json".into(), "--seed".into(), "5".into()],
    ];
    let run = |args: &[String]| {
        Command::new(env!("CARGO_BIN_EXE_ramlock")).args(args).output().expect("binary runs")
    };
    let mut ok = true;
    for job in &jobs {
        let (a, b) = (run(job), run(job));
        ok &= a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    }
    report(12, ok, format!("{} commands run twice", jobs.len()));
}
