//! The `ramlock` command line: descriptor loading, report rendering and exit
//! codes.

mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds::{
    abstract_bounds, curve_bounds, curve_invariants, field_invariants, invariant_block,
    ozeki_tower, Budget, CurveSummary, FieldSummary, InvariantBlock, OzekiReport,
};
use crate::elliptic::{CurveDescriptor, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::galmod::{coinvariants, invariants_sub, semisimplicity_check, AbGroup, FiniteGaloisModule};
use crate::localfield::{Caps, FieldDescriptor, LocalField};
use crate::selftest;
use crate::unitsymbols::{pairing_order_formula, HilbertPairing, PairingTable};

#[derive(Parser, Debug)]
#[command(name = "ramlock", version, about = "Ramified abelian fundamental group bounds for curves over p-adic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// M, M^ur, e_0, R and, with a curve, N, N-hat, reduction type and t_0.
    Invariants(Common),
    /// Lower, upper and (when determined) exact structure.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// User-supplied invariants g N Mur (e.g. for a Jacobian); needs --field or --p.
        #[arg(long = "abstract", num_args = 3, value_names = ["G", "N", "MUR"])]
        abstract_invariants: Option<Vec<String>>,
        /// Residue characteristic for --abstract when no field is given.
        #[arg(long)]
        p: Option<u64>,
    },
    /// The mod-p Hilbert pairing matrix and the filtration order table.
    HilbertTable(Common),
    /// Coinvariants and invariants of a finite Galois module.
    Coinv {
        #[command(flatten)]
        common: Common,
        /// Module JSON: { p, level, type_vector, generators }.
        #[arg(long)]
        module: PathBuf,
    },
    /// M and N along k(mu_{p^m}), m = 1..mmax.
    Ozeki {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        mmax: u32,
    },
    /// Oracle suites at desk scale.
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Run a single suite (hilbert, coinv, claim1, limit, corpus).
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Field descriptor (TOML or JSON).
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Curve descriptor (TOML or JSON), carrying its own field.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Largest torsion level searched for N and N-hat.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Largest m searched for M and M^ur.
    #[arg(long)]
    pub mcap: Option<u32>,
    /// Working precision, overriding the descriptor's.
    #[arg(long)]
    pub prec: Option<u32>,
    /// Largest absolute field degree built (default 16, or RAMLOCK_DEGREE_CAP).
    #[arg(long)]
    pub dmax: Option<usize>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 2 when any search hit its cap.
    #[arg(long)]
    pub strict: bool,
}

/// What a command produced: text or JSON for stdout, and whether some cap
/// was reached along the way.
struct Output {
    text: String,
    json: String,
    capped: bool,
}

/// Exit status of an error; a function of its class only.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TorsionHypothesisFails(_) | Error::CapReached(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the given streams. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (json, strict) = match &cli.command {
        Command::Invariants(c) | Command::HilbertTable(c) => (c.json, c.strict),
        Command::Bounds { common, .. }
        | Command::Coinv { common, .. }
        | Command::Ozeki { common, .. }
        | Command::Selftest { common, .. } => (common.json, common.strict),
    };
    match dispatch(&cli.command) {
        Ok(Ok(o)) => {
            let _ = writeln!(out, "{}", if json { &o.json } else { &o.text });
            if strict && o.capped {
                let _ = writeln!(err, "error: CapReached: a search cap was reached (--strict)");
                2
            } else {
                0
            }
        }
        // a self-test that ran but failed
        Ok(Err(o)) => {
            let _ = writeln!(out, "{}", if json { &o.json } else { &o.text });
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<std::result::Result<Output, Output>> {
    Ok(Ok(match cmd {
        Command::Invariants(c) => cmd_invariants(c)?,
        Command::Bounds { common, abstract_invariants, p } => {
            cmd_bounds(common, abstract_invariants.as_deref(), *p)?
        }
        Command::HilbertTable(c) => cmd_hilbert_table(c)?,
        Command::Coinv { common, module } => cmd_coinv(common, module)?,
        Command::Ozeki { common, mmax } => cmd_ozeki(common, *mmax)?,
        Command::Selftest { common, suite, inject_fault } => {
            return cmd_selftest(common, suite.as_deref(), *inject_fault);
        }
    }))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path, text: &str) -> bool {
    path.extension().is_some_and(|x| x == "json") || text.trim_start().starts_with('{')
}

fn load_field_descriptor(path: &Path) -> Result<FieldDescriptor> {
    let text = read(path)?;
    if is_json(path, &text) {
        FieldDescriptor::from_json(&text)
    } else {
        FieldDescriptor::from_toml(&text)
    }
}

fn load_curve_descriptor(path: &Path) -> Result<CurveDescriptor> {
    let text = read(path)?;
    if is_json(path, &text) {
        CurveDescriptor::from_json(&text)
    } else {
        CurveDescriptor::from_toml(&text)
    }
}

impl Common {
    fn budget(&self) -> Result<Budget> {
        let mut caps = Caps::from_env();
        if let Some(m) = self.mcap {
            caps.m_cap = m;
        }
        if let Some(d) = self.dmax {
            caps.degree_cap = d;
        }
        let mut budget = Budget { caps, ..Budget::default() };
        if let Some(n) = self.nmax {
            budget.nmax = n;
        }
        if budget.nmax == 0 || budget.caps.m_cap == 0 || budget.caps.degree_cap == 0 || self.prec == Some(0) {
            return Err(Error::InvalidDescriptor("caps must be positive".into()));
        }
        Ok(budget)
    }

    /// The field and (if given) the curve over it.
    fn load(&self) -> Result<(LocalField, Option<WeierstrassCurve>)> {
        let curve = self.curve.as_deref().map(load_curve_descriptor).transpose()?;
        let mut fd = match (&self.field, &curve) {
            (Some(path), _) => load_field_descriptor(path)?,
            (None, Some(cd)) => cd.field.clone(),
            (None, None) => {
                return Err(Error::InvalidDescriptor("--field or --curve is required".into()));
            }
        };
        if let Some(cd) = &curve {
            if cd.field != fd {
                return Err(Error::FieldMismatch);
            }
        }
        if let Some(prec) = self.prec {
            fd.prec = prec;
        }
        let k = LocalField::from_descriptor(&fd)?;
        let e = match curve {
            Some(mut cd) => {
                cd.field = fd;
                Some(cd.load_over(&k)?)
            }
            None => None,
        };
        Ok((k, e))
    }

    fn require_curve(&self) -> Result<WeierstrassCurve> {
        self.load()?.1.ok_or_else(|| Error::InvalidDescriptor("--curve is required".into()))
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("output serializes")
}

fn capped(caveats: &[String]) -> bool {
    caveats.iter().any(|c| c.starts_with("CapReached"))
}

/// JSON form of `ramlock invariants`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsOutput {
    pub field: FieldSummary,
    pub curve: Option<CurveSummary>,
    pub invariants: InvariantBlock,
    pub caveats: Vec<String>,
    pub seed: u64,
}

fn cmd_invariants(c: &Common) -> Result<Output> {
    let budget = c.budget()?;
    let (k, e) = c.load()?;
    let fi = field_invariants(&k, &budget.caps)?;
    let ci = e.as_ref().map(|e| curve_invariants(e, &budget)).transpose()?;
    let mut caveats = vec![];
    let invariants = invariant_block(&fi, ci.as_ref(), &mut caveats);
    let curve = match (&e, &ci) {
        (Some(e), Some(ci)) => Some(CurveSummary::of(e, &ci.reduction)?),
        _ => None,
    };
    let o = InvariantsOutput { field: FieldSummary::of(&k), curve, invariants, caveats, seed: c.seed };
    Ok(Output { text: render::invariants(&o), json: to_json(&o), capped: capped(&o.caveats) })
}

/// Reads "2", "g=2" or "N=1" alike.
fn parse_count(s: &str) -> Result<u32> {
    let v = s.rsplit('=').next().unwrap_or(s);
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidDescriptor(format!("expected a non-negative integer, got {s:?}")))
}

fn cmd_bounds(c: &Common, abs: Option<&[String]>, p: Option<u64>) -> Result<Output> {
    let mut report = match abs {
        Some(vals) => {
            let field = match &c.field {
                Some(path) => {
                    let mut fd = load_field_descriptor(path)?;
                    if let Some(prec) = c.prec {
                        fd.prec = prec;
                    }
                    Some(FieldSummary::of(&LocalField::from_descriptor(&fd)?))
                }
                None => None,
            };
            let p = match (&field, p) {
                (Some(f), Some(p)) if f.p != p => {
                    return Err(Error::InvalidDescriptor(format!("--p {p} disagrees with the field's p = {}", f.p)));
                }
                (Some(f), _) => f.p,
                (None, Some(p)) => p,
                (None, None) => return Err(Error::InvalidDescriptor("--abstract needs --field or --p".into())),
            };
            if p == 2 {
                return Err(Error::EvenPrime);
            }
            let (g, n, mur) = (parse_count(&vals[0])?, parse_count(&vals[1])?, parse_count(&vals[2])?);
            let mut r = abstract_bounds(p, g, n, mur)?;
            r.field = field;
            r
        }
        None => curve_bounds(&c.require_curve()?, &c.budget()?)?,
    };
    report.seed = c.seed;
    Ok(Output { text: render::bounds(&report), json: report.to_json(), capped: capped(&report.caveats) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertTableOutput {
    pub pairing: PairingTable,
    /// Basis filtration levels (0 for the uniformizer).
    pub basis_levels: Vec<u32>,
    /// (i, j, order, formula) over admissible i, j <= p e_0.
    pub orders: Vec<(u32, u32, u64, u64)>,
    pub seed: u64,
}

fn cmd_hilbert_table(c: &Common) -> Result<Output> {
    let (k, _) = c.load()?;
    let h = HilbertPairing::new(&k)?;
    let p = k.p() as u32;
    let pe0 = (p * k.e() as u32) / (p - 1);
    let mut orders = vec![];
    for i in 1..=pe0 {
        for j in 1..=pe0 {
            if i % p == 0 && j % p == 0 {
                continue;
            }
            orders.push((i, j, h.pairing_order(i, j)?, pairing_order_formula(&k, i, j)));
        }
    }
    let o = HilbertTableOutput {
        pairing: h.table()?,
        basis_levels: h.space().kinds().iter().map(|b| b.level()).collect(),
        orders,
        seed: c.seed,
    };
    Ok(Output { text: render::hilbert(&o), json: to_json(&o), capped: false })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvOutput {
    pub module: FiniteGaloisModule,
    pub coinvariants: AbGroup,
    pub invariants: AbGroup,
    /// Present for rank-2 modules small enough to exhaust.
    pub semisimple: Option<bool>,
    pub seed: u64,
}

fn cmd_coinv(c: &Common, path: &Path) -> Result<Output> {
    let module = FiniteGaloisModule::from_json(&read(path)?)?;
    let semisimple = match semisimplicity_check(&module) {
        Ok(s) => Some(s),
        Err(Error::RankUnsupported(_)) | Err(Error::CapReached(_)) => None,
        Err(e) => return Err(e),
    };
    let o = CoinvOutput {
        coinvariants: coinvariants(&module),
        invariants: invariants_sub(&module),
        module,
        semisimple,
        seed: c.seed,
    };
    Ok(Output { text: render::coinv(&o), json: to_json(&o), capped: false })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OzekiOutput {
    pub field: FieldSummary,
    pub tower: OzekiReport,
    pub seed: u64,
}

fn cmd_ozeki(c: &Common, mmax: u32) -> Result<Output> {
    let budget = c.budget()?;
    let e = c.require_curve()?;
    let tower = ozeki_tower(&e, mmax, &budget)?;
    let capped = tower.rows.iter().any(|r| r.cap_reached) || tower.stopped.is_some();
    let o = OzekiOutput { field: FieldSummary::of(e.field()), tower, seed: c.seed };
    Ok(Output { text: render::ozeki(&o), json: to_json(&o), capped })
}

fn cmd_selftest(
    c: &Common,
    suite: Option<&str>,
    inject_fault: bool,
) -> Result<std::result::Result<Output, Output>> {
    let names: Vec<&str> = match suite {
        Some(s) => vec![s],
        None => selftest::SUITES.to_vec(),
    };
    let opts = selftest::Options { seed: c.seed, inject_fault };
    let mut results = vec![];
    for name in names {
        results.push(selftest::run(name, opts)?);
    }
    let o = Output { text: render::selftest(&results), json: to_json(&results), capped: false };
    Ok(if results.iter().all(|r| r.ok()) { Ok(o) } else { Err(o) })
}

/// For the binary: runs with the process arguments and standard streams.
pub fn main_exit() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

