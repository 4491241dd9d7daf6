//! Plain-text rendering of command outputs.

use std::fmt::Write;

use super::{CoinvOutput, HilbertTableOutput, InvariantsOutput, OzekiOutput};
use crate::bounds::{BoundReport, FieldSummary, InvariantBlock};
use crate::selftest::SuiteResult;

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), |v| v.to_string())
}

fn field_line(out: &mut String, f: &FieldSummary) {
    let d = &f.descriptor;
    let _ = writeln!(out, "field      p = {}, e = {}, f = {}, prec = {}", f.p, f.e, f.f, d.prec);
}

fn invariant_lines(out: &mut String, inv: &InvariantBlock) {
    let _ = writeln!(out, "M          {}", opt(&inv.m));
    let _ = writeln!(out, "M^ur       {}", opt(&inv.mur));
    let _ = writeln!(out, "e0         {}", opt(&inv.e0));
    if let Some(r) = inv.r {
        let _ = writeln!(out, "R          {} (<=), {} (<)", r.leq, r.strict);
    }
    if inv.n.is_some() {
        let _ = writeln!(out, "N          {}", opt(&inv.n));
        let _ = writeln!(out, "N-hat      {}", opt(&inv.nhat));
    }
    if inv.t0.is_some() {
        let _ = writeln!(out, "t0         {}", opt(&inv.t0));
    }
}

fn caveat_lines(out: &mut String, caveats: &[String]) {
    for c in caveats {
        let _ = writeln!(out, "caveat     {c}");
    }
}

pub fn invariants(o: &InvariantsOutput) -> String {
    let mut out = String::new();
    field_line(&mut out, &o.field);
    if let Some(c) = &o.curve {
        let _ = writeln!(out, "reduction  {:?}, #E-bar = {}", c.reduction, opt(&c.point_count));
    }
    invariant_lines(&mut out, &o.invariants);
    caveat_lines(&mut out, &o.caveats);
    out.trim_end().to_string()
}

pub fn bounds(r: &BoundReport) -> String {
    let mut out = String::new();
    if let Some(f) = &r.field {
        field_line(&mut out, f);
    }
    if let Some(c) = &r.curve {
        let _ = writeln!(out, "reduction  {:?}", c.reduction);
    }
    invariant_lines(&mut out, &r.invariants);
    let _ = writeln!(out, "g          {}", r.invariants.g);
    let _ = writeln!(out, "lower      {}", r.bounds.lower);
    let _ = writeln!(out, "upper      {}", r.bounds.upper);
    match (&r.bounds.exact, &r.bounds.case) {
        (Some(x), Some(case)) => {
            let _ = writeln!(out, "exact      {x}  [{case}]");
        }
        (Some(x), None) => {
            let _ = writeln!(out, "exact      {x}");
        }
        _ => {
            let _ = writeln!(out, "exact      undetermined");
        }
    }
    if let Some(w) = &r.witness {
        for (m, deg, what) in &w.attempts {
            let _ = writeln!(out, "climb      m = {m} (degree {deg}): {what}");
        }
    }
    caveat_lines(&mut out, &r.caveats);
    out.trim_end().to_string()
}

pub fn hilbert(o: &HilbertTableOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "basis levels {:?}", o.basis_levels);
    for row in &o.pairing.table {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    let _ = writeln!(out, "i  j  order  formula");
    for (i, j, got, want) in &o.orders {
        let flag = if got == want { "" } else { "  MISMATCH" };
        let _ = writeln!(out, "{i:<2} {j:<2} {got:<6} {want}{flag}");
    }
    out.trim_end().to_string()
}

pub fn coinv(o: &CoinvOutput) -> String {
    let mut out = format!("coinvariants {}\ninvariants   {}", o.coinvariants, o.invariants);
    if let Some(s) = o.semisimple {
        let _ = write!(out, "\nsemisimple   {s}");
    }
    out
}

pub fn ozeki(o: &OzekiOutput) -> String {
    let mut out = String::new();
    field_line(&mut out, &o.field);
    let _ = writeln!(out, "m  degree  M  N  gap");
    for r in &o.tower.rows {
        let cap = if r.cap_reached { "  (cap reached)" } else { "" };
        let _ = writeln!(out, "{:<2} {:<7} {:<2} {:<2} {}{cap}", r.m, r.degree, r.big_m, r.n, r.gap);
    }
    if let Some(s) = &o.tower.stopped {
        let _ = writeln!(out, "stopped    {s}");
    }
    out.trim_end().to_string()
}

pub fn selftest(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.ok() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{:<8} {status} {}/{}", r.suite, r.passed, r.total);
        if let Some(c) = &r.counterexample {
            let _ = writeln!(out, "  counterexample: {c}");
        }
    }
    out.trim_end().to_string()
}
