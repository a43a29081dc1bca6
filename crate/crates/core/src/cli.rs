//! Command-line front end: `verify-duality`, `sweep` and `fidelity`.
//!
//! Exit codes: `0` success, `1` a check failed or a solver did not converge,
//! `2` usage or input error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, LanczosOptions};
use crate::fermion;
use crate::lattice::{Color, Lattice, LatticeSpec};
use crate::mbqc::{self, MeasurementPattern};
use crate::model::{self, CSignLayout, ModelParams, Parity};

#[derive(Debug, Parser)]
#[command(name = "tfcm", version, about = "Transverse-field cluster model toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the duality maps symbolically.
    VerifyDuality(VerifyArgs),
    /// Evaluate observables over a grid of field values.
    Sweep(SweepArgs),
    /// Gate fidelity of a measurement pattern on the ground state.
    Fidelity(FidelityArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct LatticeArgs {
    /// Open chain of N sites.
    #[arg(long, value_name = "N", conflicts_with = "square")]
    pub line: Option<usize>,
    /// Open square lattice with R rows and C columns.
    #[arg(long, num_args = 2, value_names = ["R", "C"])]
    pub square: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Lanczos residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed of the Lanczos start vector.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Read defaults from a key=value file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Field used in the term-list checks.
    #[arg(long)]
    pub b: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ed,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateName {
    Identity,
    Zrot,
    Csign,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long, value_name = "GRID")]
    pub b_grid: Option<String>,
    /// energy, gap, order-even[:i:j], order-odd[:i:j], fidelity-identity,
    /// fidelity-zrot, fidelity-csign, zz:i:j (fermion method).
    #[arg(long, value_delimiter = ',')]
    pub observable: Vec<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Rotation angle for fidelity-zrot.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Report runtime_ms as 0 so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long, value_enum)]
    pub gate: Option<GateName>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Top-left site of the CSIGN block.
    #[arg(long, num_args = 2, value_names = ["ROW", "COL"])]
    pub anchor: Option<Vec<i32>>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Config = BTreeMap<String, String>;

const CONFIG_KEYS: &[&str] = &[
    "line", "square", "b", "b-grid", "observable", "method", "theta", "format", "out",
    "no-timing", "gate", "anchor", "tol", "seed",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut map = Config::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", no + 1)))?;
        let key = key.trim().trim_start_matches("--").to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!("config line {}: unknown key '{key}'", no + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn load_config(path: &Option<PathBuf>) -> std::result::Result<Config, Failure> {
    match path {
        None => Ok(Config::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
            Ok(parse_config(&text)?)
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Parse(format!("invalid value '{v}' for {key}")))
}

fn from_config<T: std::str::FromStr>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>> {
    match (flag, cfg.get(key)) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(v)) => parse_value(key, v).map(Some),
        (None, None) => Ok(None),
    }
}

fn list_from_config<T: std::str::FromStr>(flag: Option<Vec<T>>, cfg: &Config, key: &str) -> Result<Option<Vec<T>>> {
    match (flag, cfg.get(key)) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(v)) => v
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| parse_value(key, s))
            .collect::<Result<Vec<_>>>()
            .map(Some),
        (None, None) => Ok(None),
    }
}

fn enum_from_config<T: ValueEnum>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>> {
    match (flag, cfg.get(key)) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(v)) => T::from_str(v, true)
            .map(Some)
            .map_err(|_| Error::Parse(format!("invalid value '{v}' for {key}"))),
        (None, None) => Ok(None),
    }
}

fn resolve_lattice(args: &LatticeArgs, cfg: &Config) -> Result<Lattice> {
    resolve_spec(args, cfg)?.build()
}

fn resolve_spec(args: &LatticeArgs, cfg: &Config) -> Result<LatticeSpec> {
    let line = if args.square.is_some() {
        None
    } else {
        from_config(args.line, cfg, "line")?
    };
    let square = if args.line.is_some() {
        args.square.clone()
    } else {
        list_from_config(args.square.clone(), cfg, "square")?
    };
    match (line, square) {
        (Some(n), None) => Ok(LatticeSpec::Line { n }),
        (None, Some(rc)) if rc.len() == 2 => Ok(LatticeSpec::Square {
            rows: rc[0],
            cols: rc[1],
        }),
        (None, Some(_)) => Err(Error::Parse("--square takes two sizes".into())),
        (None, None) => Err(Error::Parse("one of --line or --square is required".into())),
        (Some(_), Some(_)) => Err(Error::Parse("--line and --square are exclusive".into())),
    }
}

fn resolve_solver(args: &SolverArgs, cfg: &Config) -> Result<LanczosOptions> {
    let mut opts = LanczosOptions::default();
    if let Some(tol) = from_config(args.tol, cfg, "tol")? {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        opts.tol = tol;
    }
    if let Some(seed) = from_config(args.seed, cfg, "seed")? {
        opts.seed = seed;
    }
    Ok(opts)
}

/// Field values from `start:stop:step` (inclusive) or `a,b,c`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    let grid: Vec<f64> = if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|s| parse_value("b-grid", s.trim()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(Error::Parse(format!("grid '{text}' is not start:stop:step")));
        };
        if !(step > 0.0) || stop < start {
            return Err(Error::Parse(format!("grid '{text}' has no points")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_value("b-grid", s.trim()))
            .collect::<Result<_>>()?
    };
    if grid.is_empty() {
        return Err(Error::Parse("empty field grid".into()));
    }
    if let Some(b) = grid.iter().find(|b| !b.is_finite()) {
        return Err(Error::Parse(format!("non-finite field {b}")));
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Energy,
    Gap,
    Order(Parity, usize, usize),
    FidelityIdentity,
    FidelityZrot,
    FidelityCsign,
    Zz(usize, usize),
}

impl Observable {
    /// Parses an observable name, filling default order-string ranges for `n` sites.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let pair = |rest: &[&str]| -> Result<(usize, usize)> {
            match rest {
                [i, j] => Ok((parse_value(text, i)?, parse_value(text, j)?)),
                _ => Err(Error::Parse(format!("observable '{text}' needs two indices"))),
            }
        };
        Ok(match (parts[0], &parts[1..]) {
            ("energy", []) => Observable::Energy,
            ("gap", []) => Observable::Gap,
            ("order-even" | "order-odd", rest) => {
                let parity = if parts[0] == "order-even" { Parity::Even } else { Parity::Odd };
                let (i, j) = if rest.is_empty() { (1, n / 2) } else { pair(rest)? };
                Observable::Order(parity, i, j)
            }
            ("fidelity-identity", []) => Observable::FidelityIdentity,
            ("fidelity-zrot", []) => Observable::FidelityZrot,
            ("fidelity-csign", []) => Observable::FidelityCsign,
            ("zz", rest) => {
                let (i, j) = pair(rest)?;
                Observable::Zz(i, j)
            }
            _ => return Err(Error::Parse(format!("unknown observable '{text}'"))),
        })
    }

    pub fn id(&self) -> String {
        match self {
            Observable::Energy => "energy".into(),
            Observable::Gap => "gap".into(),
            Observable::Order(Parity::Even, i, j) => format!("order-even:{i}:{j}"),
            Observable::Order(Parity::Odd, i, j) => format!("order-odd:{i}:{j}"),
            Observable::FidelityIdentity => "fidelity-identity".into(),
            Observable::FidelityZrot => "fidelity-zrot".into(),
            Observable::FidelityCsign => "fidelity-csign".into(),
            Observable::Zz(i, j) => format!("zz:{i}:{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    #[serde(rename = "B")]
    pub b: f64,
    pub observable_id: String,
    pub value: f64,
    pub method: &'static str,
    pub n: usize,
    pub runtime_ms: f64,
}

/// Formats with 12 significant digits.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::from("B,observable_id,value,method,n,runtime_ms\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_value(r.b),
            r.observable_id,
            format_value(r.value),
            r.method,
            r.n,
            format_value(r.runtime_ms)
        );
    }
    out
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Ed => "ed",
        Method::Fermion => "fermion",
    }
}

struct SweepPlan {
    spec: LatticeSpec,
    /// Built for exact diagonalization only; the fermion chain needs just its length.
    lattice: Option<Lattice>,
    method: Method,
    observables: Vec<Observable>,
    opts: LanczosOptions,
    identity: Option<MeasurementPattern>,
    zrot: Option<MeasurementPattern>,
    csign: Option<MeasurementPattern>,
}

impl SweepPlan {
    fn new(spec: LatticeSpec, method: Method, observables: Vec<Observable>, theta: Option<f64>, opts: LanczosOptions) -> Result<Self> {
        let is_line = matches!(spec, LatticeSpec::Line { .. });
        for o in &observables {
            let ok = match (method, o) {
                (Method::Fermion, Observable::Energy | Observable::Zz(..)) => is_line,
                (Method::Fermion, _) => false,
                (Method::Ed, Observable::Zz(..)) => false,
                (Method::Ed, Observable::Order(..)) => is_line,
                (Method::Ed, _) => true,
            };
            if !ok {
                return Err(Error::Parse(format!(
                    "observable {} is not available with method {} on {spec}",
                    o.id(),
                    method_name(method)
                )));
            }
        }
        let mut plan = Self {
            spec,
            lattice: None,
            method,
            observables,
            opts,
            identity: None,
            zrot: None,
            csign: None,
        };
        if method == Method::Fermion {
            if spec.sites() == 0 {
                return Err(Error::OutOfRange("chain needs at least one site".into()));
            }
            return Ok(plan);
        }
        if spec.sites() > exact::MAX_ED_QUBITS {
            return Err(Error::Capacity(format!(
                "{spec} has {} qubits; exact diagonalization is limited to {}",
                spec.sites(),
                exact::MAX_ED_QUBITS
            )));
        }
        let lattice = spec.build()?;
        let wants = |target: Observable| plan.observables.contains(&target);
        if wants(Observable::FidelityIdentity) {
            plan.identity = Some(mbqc::pattern_identity(&lattice)?);
        }
        if wants(Observable::FidelityZrot) {
            let theta = theta.ok_or_else(|| Error::Parse("fidelity-zrot needs --theta".into()))?;
            plan.zrot = Some(mbqc::pattern_zrot(&lattice, theta)?);
        }
        if wants(Observable::FidelityCsign) {
            plan.csign = Some(mbqc::pattern_csign(&lattice, &CSignLayout::minimal())?);
        }
        plan.lattice = Some(lattice);
        Ok(plan)
    }

    fn point(&self, b: f64) -> Result<Vec<(Observable, f64)>> {
        match self.method {
            Method::Fermion => {
                let sol = fermion::solve_tfim(self.spec.sites(), b)?;
                self.observables
                    .iter()
                    .map(|&o| {
                        let v = match o {
                            Observable::Energy => sol.ground_energy(),
                            Observable::Zz(i, j) => sol.zz_correlator(i, j)?,
                            _ => unreachable!("checked in plan"),
                        };
                        Ok((o, v))
                    })
                    .collect()
            }
            Method::Ed => {
                let lattice = self.lattice.as_ref().expect("built for exact diagonalization");
                let h = model::tfcm(lattice, ModelParams::new(b)?);
                let levels = if self.observables.contains(&Observable::Gap) { 2 } else { 1 };
                let spec = exact::lowest_states(&h, levels, &self.opts)?;
                let gs = &spec.states[0];
                self.observables
                    .iter()
                    .map(|&o| {
                        let v = match o {
                            Observable::Energy => spec.energies[0],
                            Observable::Gap => {
                                let g = spec.energies[1] - spec.energies[0];
                                if g < 1e-9 {
                                    0.0
                                } else {
                                    g
                                }
                            }
                            Observable::Order(parity, i, j) => {
                                let s = model::order_string_1d(lattice, i, j, parity)?;
                                exact::expectation_pauli(&s, gs)?.re
                            }
                            Observable::FidelityIdentity => mbqc::simulate(self.identity.as_ref().unwrap(), gs)?.fidelity,
                            Observable::FidelityZrot => mbqc::simulate(self.zrot.as_ref().unwrap(), gs)?.fidelity,
                            Observable::FidelityCsign => mbqc::simulate(self.csign.as_ref().unwrap(), gs)?.fidelity,
                            Observable::Zz(..) => unreachable!("checked in plan"),
                        };
                        Ok((o, v))
                    })
                    .collect()
            }
        }
    }
}

fn write_output(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        }),
    }
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = load_config(&args.solver.config)?;
    let spec = resolve_spec(&args.lattice, &cfg)?;
    let opts = resolve_solver(&args.solver, &cfg)?;
    let grid_text = from_config(args.b_grid.clone(), &cfg, "b-grid")?
        .ok_or_else(|| usage("--b-grid is required"))?;
    let grid = parse_grid(&grid_text)?;
    let names: Vec<String> = if args.observable.is_empty() {
        list_from_config(None, &cfg, "observable")?.unwrap_or_default()
    } else {
        args.observable.clone()
    };
    if names.is_empty() {
        return Err(usage("at least one --observable is required"));
    }
    let observables = names
        .iter()
        .map(|s| Observable::parse(s, spec.sites()))
        .collect::<Result<Vec<_>>>()?;
    let method = enum_from_config(args.method, &cfg, "method")?.unwrap_or(Method::Ed);
    let format = enum_from_config(args.format, &cfg, "format")?.unwrap_or(Format::Csv);
    let theta = from_config(args.theta, &cfg, "theta")?;
    let no_timing = args.no_timing || cfg.get("no-timing").is_some_and(|v| v == "true");
    let path = from_config(args.out.clone(), &cfg, "out")?;
    let plan = SweepPlan::new(spec, method, observables, theta, opts)?;

    let points: Vec<(f64, Vec<(Observable, f64)>, f64)> = grid
        .par_iter()
        .map(|&b| {
            let start = Instant::now();
            let values = plan.point(b)?;
            Ok((b, values, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_>>()?;
    let n = plan.spec.sites();
    let mut rows: Vec<Row> = points
        .into_iter()
        .flat_map(|(b, values, ms)| {
            values.into_iter().map(move |(o, value)| Row {
                b,
                observable_id: o.id(),
                value,
                method: method_name(method),
                n,
                runtime_ms: if no_timing { 0.0 } else { ms },
            })
        })
        .collect();
    rows.sort_by(|a, b| a.b.total_cmp(&b.b).then_with(|| a.observable_id.cmp(&b.observable_id)));
    let text = match format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    write_output(out, &path, &text)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = load_config(&args.solver.config)?;
    let lattice = resolve_lattice(&args.lattice, &cfg)?;
    let b = from_config(args.b, &cfg, "b")?.unwrap_or(0.7);
    if b == 0.0 {
        return Err(usage("--b must be non-zero for the self-duality check"));
    }
    let p = ModelParams::new(b)?;
    let mut report = String::new();
    let mut all = true;
    let mut check = |name: String, ok: bool, report: &mut String| {
        all &= ok;
        let _ = writeln!(report, "{} {name}", if ok { "PASS" } else { "FAIL" });
    };

    if lattice.is_line() {
        let map = model::duality_1d(lattice.n())?;
        let canonical = map.check_canonical();
        check("duality canonical".into(), canonical.passed(), &mut report);
        for color in [Color::Red, Color::Blue] {
            let dual = map.conjugate_sum(&model::sublattice_ham(&lattice, p, color))?;
            let want = model::dual_tfim_expected(lattice.n(), p, color)?;
            check(format!("{color} half maps to the Ising chain"), dual == want, &mut report);
        }
    } else {
        let map = model::duality_2d(&lattice)?;
        check("duality canonical".into(), map.check_canonical().passed(), &mut report);
        let _ = writeln!(
            report,
            "boundary adapted: {}",
            if model::boundary_adapted(&lattice) { "yes" } else { "no" }
        );
        for color in [Color::Red, Color::Blue] {
            let d = model::plaquette_decomposition(&lattice, p, color)?;
            check(format!("{color} half contains the plaquette model"), d.bulk_matches, &mut report);
            let boundary_sites = lattice
                .sites_of(color.other())
                .into_iter()
                .filter(|&q| lattice.neighbors(q).len() < 4)
                .count();
            check(
                format!("{color} half has one boundary term per boundary stabilizer"),
                d.boundary.len() == boundary_sites,
                &mut report,
            );
            for (c, s) in d.boundary.terms() {
                let _ = writeln!(report, "  boundary {} {s}", format_value(*c));
            }
        }
    }
    let self_dual = model::self_duality_map(&lattice)?;
    let lhs = self_dual.conjugate_sum(&model::tfcm(&lattice, p))?;
    let rhs = model::tfcm(&lattice, ModelParams::new(1.0 / b)?).scaled(b);
    check("self-duality H(B) -> B H(1/B)".into(), lhs == rhs, &mut report);

    write_output(out, &None, &report)?;
    if all {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "duality check failed".into(),
        })
    }
}

fn cmd_fidelity(args: &FidelityArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = load_config(&args.solver.config)?;
    let lattice = resolve_lattice(&args.lattice, &cfg)?;
    let opts = resolve_solver(&args.solver, &cfg)?;
    let gate = enum_from_config(args.gate, &cfg, "gate")?.ok_or_else(|| usage("--gate is required"))?;
    let b = from_config(args.b, &cfg, "b")?.unwrap_or(0.0);
    let path = from_config(args.out.clone(), &cfg, "out")?;
    if lattice.n() > exact::MAX_ED_QUBITS {
        return Err(Error::Capacity(format!("{} is too large for exact diagonalization", lattice.spec())).into());
    }
    let pattern = match gate {
        GateName::Identity => mbqc::pattern_identity(&lattice)?,
        GateName::Zrot => {
            let theta = from_config(args.theta, &cfg, "theta")?.ok_or_else(|| usage("--theta is required for zrot"))?;
            mbqc::pattern_zrot(&lattice, theta)?
        }
        GateName::Csign => {
            let mut layout = CSignLayout::minimal();
            if let Some(a) = list_from_config(args.anchor.clone(), &cfg, "anchor")? {
                let [r, c] = a[..] else {
                    return Err(usage("--anchor takes a row and a column"));
                };
                layout = layout.with_anchor(r, c);
            }
            mbqc::pattern_csign(&lattice, &layout)?
        }
    };
    let report = mbqc::gate_fidelity(&pattern, b, &opts)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_output(out, &path, &text)
}

/// Runs the command line `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::VerifyDuality(a) => cmd_verify(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Fidelity(a) => cmd_fidelity(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.5, 2").unwrap(), vec![0.5, 2.0]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(format_value(0.1 + 0.2), "0.3");
        assert_eq!(format_value(-12.0), "-12");
        assert_eq!(format_value(0.930604859102), "0.930604859102");
        assert_eq!(format_value(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_value(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn observable_names() {
        assert_eq!(Observable::parse("order-even", 12).unwrap(), Observable::Order(Parity::Even, 1, 6));
        assert_eq!(Observable::parse("zz:3:9", 12).unwrap().id(), "zz:3:9");
        assert!(Observable::parse("zz:3", 12).is_err());
        assert!(Observable::parse("magnetization", 12).is_err());
    }

    #[test]
    fn config_lines() {
        let cfg = parse_config("# sweep\nline = 8\nb-grid=0:1:0.5  # coarse\n").unwrap();
        assert_eq!(cfg["line"], "8");
        assert_eq!(cfg["b-grid"], "0:1:0.5");
        assert!(parse_config("colour = red\n").is_err());
        assert!(parse_config("line 8\n").is_err());
    }
}
