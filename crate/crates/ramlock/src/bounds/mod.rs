//! Assembles field and curve invariants into the sandwich
//! (Z/p^{M^ur})^g ->> pi_ram ->> (Z/p^N)^g, its refinements, and exact
//! structures where a case analysis applies.

mod ozeki;
mod report;

pub use ozeki::{ozeki_tower, OzekiReport, OzekiRow};
pub use report::{
    ratio_string, BoundReport, BoundsBlock, CurveSummary, FieldSummary, GeneratorClimb,
    InvariantBlock, RPair,
};

use crate::elliptic::{
    default_degree_cap, formal_group, nhat, reduction_type, t0, torsion_level_n, FormalGroupData,
    NhatReport, ReductionData, ReductionKind, T0Report, WeierstrassCurve,
};
use crate::error::{Error, Result};
use crate::galmod::{semisimplicity_check, AbGroup, FiniteGaloisModule};
use crate::localfield::{
    cyclotomic_extend, e0, invariant_m, invariant_mur, invariant_r, Capped, Caps, LocalField,
};
use crate::unitsymbols::{symbol_generators_mod_p, HilbertPairing};

pub const DEFAULT_NMAX: u32 = 3;

/// Caps on every search a report performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub caps: Caps,
    pub nmax: u32,
    /// Degree cap of formal-group series; p^2 + 6 when unset.
    pub series_cap: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { caps: Caps::default(), nmax: DEFAULT_NMAX, series_cap: None }
    }
}

/// M, M^ur, e_0 and R of a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldInvariants {
    pub m: Capped<u32>,
    pub mur: Capped<u32>,
    pub e0: num_rational::Ratio<i64>,
    pub r: RPair,
}

pub fn field_invariants(k: &LocalField, caps: &Caps) -> Result<FieldInvariants> {
    let (leq, strict) = invariant_r(k);
    Ok(FieldInvariants {
        m: invariant_m(k, caps.m_cap)?,
        mur: invariant_mur(k, caps)?,
        e0: e0(k),
        r: RPair { leq, strict },
    })
}

/// Reduction type, N, N-hat and (supersingular) t_0 of a curve.
#[derive(Clone)]
pub struct CurveInvariants {
    pub reduction: ReductionData,
    pub formal: FormalGroupData,
    pub n: Capped<u32>,
    pub nhat: NhatReport,
    pub t0: Option<T0Report>,
}

pub fn curve_invariants(e: &WeierstrassCurve, budget: &Budget) -> Result<CurveInvariants> {
    let reduction = reduction_type(e)?;
    if reduction.kind == ReductionKind::NotGood {
        return Err(Error::NotGoodReduction(e.label()));
    }
    let cap = budget.series_cap.unwrap_or_else(|| default_degree_cap(e.p()));
    let formal = formal_group(e, cap)?;
    let n = torsion_level_n(e, budget.nmax)?;
    let nh = nhat(&formal, budget.nmax)?;
    let t0 = match reduction.kind {
        ReductionKind::GoodSupersingular => Some(t0(&formal)?),
        _ => None,
    };
    Ok(CurveInvariants { reduction, formal, n, nhat: nh, t0 })
}

/// The invariants block for a field and optional curve, with caveats for
/// every cap that was reached.
pub fn invariant_block(
    fi: &FieldInvariants,
    ci: Option<&CurveInvariants>,
    caveats: &mut Vec<String>,
) -> InvariantBlock {
    if fi.m.cap_reached {
        caveats.push(format!("CapReached: M >= {}", fi.m.value));
    }
    if fi.mur.cap_reached {
        caveats.push(format!("CapReached: M^ur >= {}", fi.mur.value));
    }
    let mut block = InvariantBlock {
        m: Some(fi.m.value),
        mur: Some(fi.mur.value),
        e0: Some(ratio_string(fi.e0)),
        r: Some(fi.r),
        g: 1,
        ..Default::default()
    };
    if let Some(ci) = ci {
        if ci.n.cap_reached {
            caveats.push(format!("CapReached: N >= {}", ci.n.value));
        }
        if ci.nhat.cap_reached {
            caveats.push(format!("CapReached: Nhat >= {}", ci.nhat.value));
        }
        block.n = Some(ci.n.value);
        block.nhat = Some(ci.nhat.value);
        if let Some(t) = &ci.t0 {
            block.t0 = t.t0;
            if !t.rational {
                let slopes: Vec<String> =
                    t.slopes.iter().map(|(s, c)| format!("{} (x{c})", ratio_string(*s))).collect();
                caveats.push(format!(
                    "NotRational t0: E-hat[p] is not rational over k; kernel slopes {} (extension of the rational case)",
                    slopes.join(", ")
                ));
            }
        }
    }
    block
}

/// e_k < p - 1: the ramified part is trivial for every curve with good
/// reduction.
pub fn georam_applies(k: &LocalField) -> bool {
    k.e() + 1 < k.p() as usize
}

/// The triviality criterion on its own: for e_k < p - 1 the ramified part
/// vanishes for any curve with good reduction, ordinary or not.
pub fn georam_bounds(e: &WeierstrassCurve, budget: &Budget) -> Result<BoundReport> {
    let k = e.field();
    if !georam_applies(k) {
        return Err(Error::HypothesisViolated(format!(
            "e_k = {} is not below p - 1 = {}",
            k.e(),
            k.p() - 1
        )));
    }
    let ci = curve_invariants(e, budget)?;
    let fi = field_invariants(k, &budget.caps)?;
    check_sandwich(&fi, &ci)?;
    if fi.mur.value != 0 {
        return Err(Error::InconsistentInput(format!("e_k < p - 1 but M^ur = {}", fi.mur.value)));
    }
    let mut caveats = vec![];
    let invariants = invariant_block(&fi, Some(&ci), &mut caveats);
    let report = BoundReport {
        field: Some(FieldSummary::of(k)),
        curve: Some(CurveSummary::of(e, &ci.reduction)?),
        invariants,
        bounds: BoundsBlock {
            lower: AbGroup::trivial(),
            upper: AbGroup::trivial(),
            exact: Some(AbGroup::trivial()),
            case: Some("georam: e_k < p-1".into()),
        },
        caveats,
        witness: None,
        seed: 0,
    };
    report.check_order()?;
    Ok(report)
}

/// Checks N <= M <= M^ur and N <= N-hat <= M^ur when no value is capped.
fn check_sandwich(fi: &FieldInvariants, ci: &CurveInvariants) -> Result<()> {
    let capped = fi.m.cap_reached || fi.mur.cap_reached || ci.n.cap_reached || ci.nhat.cap_reached;
    let (m, mur, n, nh) = (fi.m.value, fi.mur.value, ci.n.value, ci.nhat.value);
    if !capped && !(n <= m && m <= mur && n <= nh && nh <= mur) {
        return Err(Error::InconsistentInput(format!(
            "invariant sandwich fails: N={n}, M={m}, Mur={mur}, Nhat={nh}"
        )));
    }
    Ok(())
}

pub fn ordinary_bounds(e: &WeierstrassCurve, budget: &Budget) -> Result<BoundReport> {
    let k = e.field();
    let ci = curve_invariants(e, budget)?;
    if ci.reduction.kind != ReductionKind::GoodOrdinary {
        return Err(Error::NotOrdinary);
    }
    let fi = field_invariants(k, &budget.caps)?;
    check_sandwich(&fi, &ci)?;
    let mut caveats = vec![];
    let invariants = invariant_block(&fi, Some(&ci), &mut caveats);
    let p = k.p();
    let (n, nh, mur) = (ci.n.value, ci.nhat.value, fi.mur.value);
    let lower = AbGroup::cyclic(p, n);
    let upper = AbGroup::cyclic(p, mur.min(nh));
    let (exact, case) = if georam_applies(k) {
        if mur != 0 {
            return Err(Error::InconsistentInput(format!("e_k < p - 1 but M^ur = {mur}")));
        }
        (Some(AbGroup::trivial()), Some("georam: e_k < p-1".to_string()))
    } else if n == nh && !ci.n.cap_reached && !ci.nhat.cap_reached {
        (Some(AbGroup::cyclic(p, n)), Some("N = Nhat".to_string()))
    } else {
        (None, None)
    };
    let report = BoundReport {
        field: Some(FieldSummary::of(k)),
        curve: Some(CurveSummary::of(e, &ci.reduction)?),
        invariants,
        bounds: BoundsBlock { lower, upper, exact, case },
        caveats,
        witness: None,
        seed: 0,
    };
    report.check_order()?;
    Ok(report)
}

/// Hypotheses of the second exact case, as claimed by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureFlags {
    pub m_equals_mur: bool,
    /// E-bar[p^M] is rational over the residue field.
    pub residue_torsion_rational: bool,
    /// The inertia restriction at level N + 1 is not semisimple.
    pub inertia_non_semisimple: bool,
}

/// Exact structure from a Galois module at level N-hat (case i: semisimple)
/// or from the flags with the module at level N + 1 (case ii). `Ok(Err(..))`
/// names the hypothesis that failed when neither case applies.
pub fn exact_structure_cases(
    e: &WeierstrassCurve,
    budget: &Budget,
    rho_nhat: &FiniteGaloisModule,
    rho_next: &FiniteGaloisModule,
    flags: StructureFlags,
) -> Result<std::result::Result<(AbGroup, String), String>> {
    let k = e.field();
    let p = k.p();
    let ci = curve_invariants(e, budget)?;
    if ci.reduction.kind != ReductionKind::GoodOrdinary {
        return Err(Error::NotOrdinary);
    }
    let fi = field_invariants(k, &budget.caps)?;
    let (n, nh, m, mur) = (ci.n.value, ci.nhat.value, fi.m.value, fi.mur.value);
    if rho_nhat.p != p || rho_next.p != p {
        return Err(Error::InconsistentInput("modules are over a different prime".into()));
    }
    if rho_nhat.level != nh {
        return Err(Error::InconsistentInput(format!(
            "module supplied at level {} but Nhat = {nh}",
            rho_nhat.level
        )));
    }
    if rho_next.level != n + 1 {
        return Err(Error::InconsistentInput(format!(
            "module supplied at level {} but N + 1 = {}",
            rho_next.level,
            n + 1
        )));
    }
    // every flag is recomputed where the primitives allow it
    if flags.m_equals_mur != (m == mur) {
        return Err(Error::InconsistentInput(format!(
            "flag M = M^ur is {} but M = {m}, M^ur = {mur}",
            flags.m_equals_mur
        )));
    }
    let count = ci.reduction.point_count.expect("good reduction has a count") as u128;
    let residue_rational = count % (p as u128).pow(m) == 0;
    if flags.residue_torsion_rational != residue_rational {
        return Err(Error::InconsistentInput(format!(
            "flag E-bar[p^M] rational is {} but #E-bar = {count}, M = {m}",
            flags.residue_torsion_rational
        )));
    }
    let next_semisimple = semisimplicity_check(rho_next)?;
    if flags.inertia_non_semisimple == next_semisimple {
        return Err(Error::InconsistentInput(format!(
            "flag non-semisimple is {} but the level-{} module is {}semisimple",
            flags.inertia_non_semisimple,
            n + 1,
            if next_semisimple { "" } else { "not " }
        )));
    }
    if semisimplicity_check(rho_nhat)? {
        return Ok(Ok((AbGroup::cyclic(p, nh), "semisimple at level Nhat".into())));
    }
    if flags.m_equals_mur && flags.residue_torsion_rational && flags.inertia_non_semisimple {
        if nh != m {
            return Err(Error::InconsistentInput(format!(
                "second case applies but Nhat = {nh} != M = {m}"
            )));
        }
        return Ok(Ok((AbGroup::cyclic(p, n), "M = Mur, residue torsion rational, non-semisimple".into())));
    }
    let failed = if !flags.m_equals_mur {
        "M != M^ur"
    } else if !flags.residue_torsion_rational {
        "E-bar[p^M] is not rational over the residue field"
    } else {
        "inertia restriction at level N+1 is semisimple"
    };
    Ok(Err(format!("module at level Nhat is not semisimple and {failed}")))
}

pub fn supersingular_bounds(e: &WeierstrassCurve, budget: &Budget) -> Result<BoundReport> {
    let k = e.field();
    let p = k.p();
    let reduction = reduction_type(e)?;
    if reduction.kind != ReductionKind::GoodSupersingular {
        return Err(Error::NotSupersingular);
    }
    let n = torsion_level_n(e, budget.nmax)?;
    if n.value == 0 {
        let note = if georam_applies(k) {
            " (e_k < p-1 here, so mu_p is not in k and E[p] cannot be rational)"
        } else {
            ""
        };
        return Err(Error::TorsionHypothesisFails(format!(
            "E[{p}] is not contained in E(k); the supersingular sandwich needs E[p] in E(k){note}"
        )));
    }
    let ci = curve_invariants(e, budget)?;
    let fi = field_invariants(k, &budget.caps)?;
    check_sandwich(&fi, &ci)?;
    let mut caveats = vec![];
    let invariants = invariant_block(&fi, Some(&ci), &mut caveats);
    let r = fi.r.leq;
    if fi.r.leq != fi.r.strict {
        caveats.push(format!(
            "R-definition discrepancy: upper bound uses R = {} (<= form); the strict form gives {}",
            fi.r.leq, fi.r.strict
        ));
    }
    caveats.push(format!(
        "lower bound (Z/p^N)^2 cites K(k;E,G_m)/p^N = (Z/p^N)^2 for E[p^N] in E(k); not recomputed"
    ));
    let witness = match ci.t0.as_ref().and_then(|t| t.t0) {
        Some(t0) => Some(generator_climb(k, fi.m.value, r, t0, &budget.caps)?),
        None => None,
    };
    if let Some(w) = &witness {
        if w.m.is_none() {
            caveats.push(format!(
                "symbol generators not found for M <= m <= M + R = {}; see witness attempts",
                fi.m.value + r
            ));
        }
    }
    let report = BoundReport {
        field: Some(FieldSummary::of(k)),
        curve: Some(CurveSummary::of(e, &reduction)?),
        invariants,
        bounds: BoundsBlock {
            lower: AbGroup::power(p, n.value, 2),
            upper: AbGroup::power(p, fi.mur.value + r, 2),
            exact: None,
            case: None,
        },
        caveats,
        witness,
        seed: 0,
    };
    report.check_order()?;
    Ok(report)
}

/// Searches k_m = k(mu_{p^m}) for M <= m <= M + R until symbol generators
/// at the decomposition levels (p t0, p (e0 - t0)), rescaled to k_m, exist.
fn generator_climb(k: &LocalField, m0: u32, r: u32, t0: i64, caps: &Caps) -> Result<GeneratorClimb> {
    let p = k.p() as i64;
    let mut attempts = vec![];
    for m in m0..=m0 + r {
        let km = if m == m0 {
            k.clone()
        } else {
            match cyclotomic_extend(k, m, caps.degree_cap) {
                Ok((l, _)) => l,
                Err(err) => {
                    let degree = match err {
                        Error::DegreeCapExceeded { degree, .. } => degree,
                        _ => 0,
                    };
                    attempts.push((m, degree, err.to_string()));
                    break;
                }
            }
        };
        let scale = (km.e() / k.e()) as i64;
        let e0m = e0(&km);
        let t0m = t0 * scale;
        let second = (e0m - t0m) * p;
        if !second.is_integer() {
            attempts.push((m, km.degree(), format!("non-integral level {}", ratio_string(second))));
            continue;
        }
        let levels = ((p * t0m) as u32, second.to_integer() as u32);
        let outcome = HilbertPairing::new(&km)
            .and_then(|pairing| symbol_generators_mod_p(&pairing, levels, caps.m_cap));
        match outcome {
            Ok(g) => {
                attempts.push((
                    m,
                    km.degree(),
                    format!(
                        "found at levels {:?} (zeta level {}, symbol values {}, {})",
                        levels, g.zeta_level, g.witnesses[0].value, g.witnesses[1].value
                    ),
                ));
                return Ok(GeneratorClimb { m: Some(m), attempts });
            }
            Err(Error::NotFound(msg)) => attempts.push((m, km.degree(), format!("NotFound: {msg}"))),
            Err(err) => {
                attempts.push((m, km.degree(), err.to_string()));
                break;
            }
        }
    }
    Ok(GeneratorClimb { m: None, attempts })
}

/// Routes a curve to the ordinary or supersingular report.
pub fn curve_bounds(e: &WeierstrassCurve, budget: &Budget) -> Result<BoundReport> {
    match reduction_type(e)?.kind {
        ReductionKind::GoodOrdinary => ordinary_bounds(e, budget),
        ReductionKind::GoodSupersingular => supersingular_bounds(e, budget),
        ReductionKind::NotGood => Err(Error::NotGoodReduction(e.label())),
    }
}

/// Direct sum of reports over one field.
pub fn product_aggregate(reports: &[BoundReport]) -> Result<BoundReport> {
    let first = reports
        .first()
        .ok_or_else(|| Error::InconsistentInput("no reports to aggregate".into()))?;
    if reports.len() == 1 {
        return Ok(first.clone());
    }
    for r in &reports[1..] {
        if r.field.as_ref().map(|f| &f.descriptor) != first.field.as_ref().map(|f| &f.descriptor) {
            return Err(Error::FieldMismatch);
        }
    }
    let sum = |f: &dyn Fn(&BoundReport) -> AbGroup| {
        reports.iter().fold(AbGroup::trivial(), |acc, r| acc.direct_sum(&f(r)))
    };
    let lower = sum(&|r| r.bounds.lower.clone());
    let upper = sum(&|r| r.bounds.upper.clone());
    let exact = reports
        .iter()
        .map(|r| r.bounds.exact.clone())
        .collect::<Option<Vec<_>>>()
        .map(|xs| xs.iter().fold(AbGroup::trivial(), |acc, x| acc.direct_sum(x)));
    let mut caveats: Vec<String> = vec![];
    for r in reports {
        for c in &r.caveats {
            if !caveats.contains(c) {
                caveats.push(c.clone());
            }
        }
    }
    let invariants = InvariantBlock {
        m: first.invariants.m,
        mur: first.invariants.mur,
        e0: first.invariants.e0.clone(),
        r: first.invariants.r,
        g: reports.iter().map(|r| r.invariants.g).sum(),
        ..Default::default()
    };
    let report = BoundReport {
        field: first.field.clone(),
        curve: None,
        invariants,
        bounds: BoundsBlock {
            case: exact.as_ref().map(|_| format!("product of {} factors", reports.len())),
            lower,
            upper,
            exact,
        },
        caveats,
        witness: None,
        seed: first.seed,
    };
    report.check_order()?;
    Ok(report)
}

/// The sandwich for user-supplied (g, N, M^ur), e.g. for Jacobians.
pub fn abstract_bounds(p: u64, g: u32, n: u32, mur: u32) -> Result<BoundReport> {
    if n > mur {
        return Err(Error::OrderViolation { n, mur });
    }
    if g == 0 {
        return Err(Error::InconsistentInput("g must be at least 1".into()));
    }
    let lower = AbGroup::power(p, n, g as usize);
    let upper = AbGroup::power(p, mur, g as usize);
    let (exact, case) = if n == mur {
        (Some(lower.clone()), Some("N = Mur (split)".to_string()))
    } else {
        (None, None)
    };
    Ok(BoundReport {
        field: None,
        curve: None,
        invariants: InvariantBlock { n: Some(n), mur: Some(mur), g, ..Default::default() },
        bounds: BoundsBlock { lower, upper, exact, case },
        caveats: vec!["user-supplied invariants".into()],
        witness: None,
        seed: 0,
    })
}
