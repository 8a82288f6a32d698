//! Front end for `sts`: argument handling, the five subcommands and their
//! CSV / JSON tables.
//!
//! Floats are printed in the shortest form that parses back to the same
//! `f64`, so identical runs give byte-identical output.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sts_core::verification::{check_state, esd_bisection, random_standard_form, random_sts};
use sts_core::{
    closed_form_esd, correlation_report, evolve, is_separable, standard_form_from_sts,
    symplectic_spectrum, EsdTime, ReservoirConfig, StandardForm, StsParams,
};

pub mod args;
pub mod config_file;
pub mod table;

pub use args::{Cli, Command, Format, OutputField, SweepAxis, Units};
pub use table::{format_float, Cell, Table};

use args::{EsdArgs, EvolveArgs, GridArgs, ReportArgs, ReservoirArgs, StateArgs, SweepArgs, VerifyArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;

/// Fixed header of `evolve`.
pub const EVOLVE_COLUMNS: [&str; 9] = ["t", "b1", "b2", "c", "ef", "d1", "d2", "mutual_information", "separable"];

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }

    pub fn inapplicable(message: impl Into<String>) -> Self {
        Self { code: EXIT_INAPPLICABLE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<sts_core::Error> for CliError {
    fn from(e: sts_core::Error) -> Self {
        use sts_core::Error::*;
        match e {
            AlreadySeparable { .. } | NoChannel | NoRoot { .. } | DegenerateMode => Self::inapplicable(e.to_string()),
            _ => Self::invalid(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Sts(StsParams),
    Standard { b1: f64, b2: f64, c: f64, phi: f64 },
}

impl StateSpec {
    pub fn from_args(a: &StateArgs) -> CliResult<Self> {
        let sts = [a.n1, a.n2, a.r];
        let standard = [a.b1, a.b2, a.c];
        if sts.iter().any(Option::is_some) {
            match sts {
                [Some(n1), Some(n2), Some(r)] => Ok(StateSpec::Sts(StsParams { n1, n2, r, phi: a.phi })),
                _ => Err(CliError::invalid("--n1, --n2 and --r must be given together")),
            }
        } else if standard.iter().any(Option::is_some) {
            match standard {
                [Some(b1), Some(b2), Some(c)] => Ok(StateSpec::Standard { b1, b2, c, phi: a.phi }),
                _ => Err(CliError::invalid("--b1, --b2 and --c must be given together")),
            }
        } else {
            Err(CliError::invalid("no state given: use --n1 --n2 --r or --b1 --b2 --c"))
        }
    }

    pub fn standard_form(&self) -> CliResult<StandardForm> {
        Ok(match *self {
            StateSpec::Sts(p) => standard_form_from_sts(&StsParams::new(p.n1, p.n2, p.r, p.phi)?)?,
            StateSpec::Standard { b1, b2, c, phi } => StandardForm::new(b1, b2, c, phi)?,
        })
    }

    fn set(&mut self, axis: SweepAxis, value: f64) -> CliResult<()> {
        let StateSpec::Sts(p) = self else {
            return Err(CliError::invalid("sweeping n1, n2 or r needs the --n1 --n2 --r parametrization"));
        };
        match axis {
            SweepAxis::N1 => p.n1 = value,
            SweepAxis::N2 => p.n2 = value,
            SweepAxis::R => p.r = value,
            SweepAxis::Nr | SweepAxis::Gamma => unreachable!("reservoir axis"),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReservoirSpec {
    None,
    Identical { gamma: f64, nr: f64 },
    SingleBath { gamma: f64, nr: f64 },
    PerMode([Option<(f64, f64)>; 2]),
}

impl ReservoirSpec {
    pub fn from_args(a: &ReservoirArgs) -> CliResult<Self> {
        if a.identical || a.single_bath {
            let gamma = a.gamma.unwrap_or(1.0);
            let nr = a.nr.ok_or_else(|| CliError::invalid("--nr is required with --identical or --single-bath"))?;
            return Ok(if a.identical {
                ReservoirSpec::Identical { gamma, nr }
            } else {
                ReservoirSpec::SingleBath { gamma, nr }
            });
        }
        if a.gamma.is_some() || a.nr.is_some() {
            return Err(CliError::invalid("--gamma and --nr need --identical or --single-bath"));
        }
        let mode = |g: Option<f64>, n: Option<f64>| {
            (g.is_some() || n.is_some()).then(|| (g.unwrap_or(1.0), n.unwrap_or(0.0)))
        };
        let modes = [mode(a.gamma1, a.nr1), mode(a.gamma2, a.nr2)];
        Ok(if modes.iter().all(Option::is_none) { ReservoirSpec::None } else { ReservoirSpec::PerMode(modes) })
    }

    pub fn config(&self) -> CliResult<ReservoirConfig> {
        Ok(match *self {
            ReservoirSpec::None => ReservoirConfig::none(),
            ReservoirSpec::Identical { gamma, nr } => ReservoirConfig::identical(gamma, nr)?,
            ReservoirSpec::SingleBath { gamma, nr } => ReservoirConfig::single_bath(gamma, nr)?,
            ReservoirSpec::PerMode(m) => {
                let (g1, n1) = m[0].unwrap_or((0.0, 0.0));
                let (g2, n2) = m[1].unwrap_or((0.0, 0.0));
                ReservoirConfig::new(g1, n1, g2, n2)?
            }
        })
    }

    fn set(&mut self, axis: SweepAxis, value: f64) -> CliResult<()> {
        let pick = |gamma: &mut f64, nr: &mut f64| match axis {
            SweepAxis::Gamma => *gamma = value,
            _ => *nr = value,
        };
        match self {
            ReservoirSpec::None => {
                return Err(CliError::invalid("sweeping nr or gamma needs a reservoir"));
            }
            ReservoirSpec::Identical { gamma, nr } | ReservoirSpec::SingleBath { gamma, nr } => pick(gamma, nr),
            ReservoirSpec::PerMode(modes) => {
                for (gamma, nr) in modes.iter_mut().flatten() {
                    pick(gamma, nr);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub points: usize,
    pub log_spacing: bool,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, points: usize, log_spacing: bool) -> CliResult<Self> {
        if !(t_start.is_finite() && t_start >= 0.0) {
            return Err(CliError::invalid(format!("--t-start must be finite and >= 0, got {t_start}")));
        }
        if !(t_end.is_finite() && t_end > t_start) {
            return Err(CliError::invalid(format!("time grid needs t_end > t_start, got [{t_start}, {t_end}]")));
        }
        if points < 2 {
            return Err(CliError::invalid(format!("--points must be at least 2, got {points}")));
        }
        if log_spacing && t_start == 0.0 {
            return Err(CliError::invalid("--log-spacing needs --t-start > 0"));
        }
        Ok(Self { t_start, t_end, points, log_spacing })
    }

    fn from_args(a: &GridArgs) -> CliResult<Self> {
        Self::new(a.t_start, a.t_end, a.points, a.log_spacing)
    }

    /// Grid times, strictly increasing, ending exactly at `t_end`.
    pub fn times(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        let (a, b) = if self.log_spacing { (self.t_start.ln(), self.t_end.ln()) } else { (self.t_start, self.t_end) };
        let mut out: Vec<f64> = (0..self.points)
            .map(|k| {
                let x = a + (b - a) * (k as f64 / last);
                if self.log_spacing { x.exp() } else { x }
            })
            .collect();
        out[0] = self.t_start;
        out[self.points - 1] = self.t_end;
        out
    }
}

/// How the death time of a state was settled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdOutcome {
    Finite { t: f64, method: &'static str },
    AsymptoticOnly { method: &'static str },
    Separable,
    NoReservoir,
}

/// Closed form where one applies, bisection otherwise.
pub fn esd_outcome(sf: &StandardForm, res: &ReservoirConfig) -> CliResult<EsdOutcome> {
    if !res.has_channel() {
        return Ok(EsdOutcome::NoReservoir);
    }
    if is_separable(sf) {
        return Ok(EsdOutcome::Separable);
    }
    match closed_form_esd(sf, res) {
        Some(r) => Ok(match r? {
            EsdTime::Finite(t) => EsdOutcome::Finite { t, method: "closed_form" },
            EsdTime::AsymptoticOnly => EsdOutcome::AsymptoticOnly { method: "closed_form" },
        }),
        None => bisect(sf, res),
    }
}

fn bisect(sf: &StandardForm, res: &ReservoirConfig) -> CliResult<EsdOutcome> {
    match esd_bisection(sf, res) {
        Ok(t) => Ok(EsdOutcome::Finite { t, method: "bisection" }),
        Err(sts_core::Error::NoRoot { .. }) => Ok(EsdOutcome::AsymptoticOnly { method: "bisection" }),
        Err(sts_core::Error::AlreadySeparable { .. }) => Ok(EsdOutcome::Separable),
        Err(e) => Err(e.into()),
    }
}

impl EsdOutcome {
    fn status(&self) -> &'static str {
        match self {
            EsdOutcome::Finite { .. } => "finite",
            EsdOutcome::AsymptoticOnly { .. } => "asymptotic-only",
            EsdOutcome::Separable => "separable",
            EsdOutcome::NoReservoir => "no-reservoir",
        }
    }

    fn time(&self) -> Cell {
        match self {
            EsdOutcome::Finite { t, .. } => Cell::Num(*t),
            _ => Cell::Empty,
        }
    }
}

fn default_fields(fields: &[OutputField], with_esd: bool) -> Vec<OutputField> {
    if !fields.is_empty() {
        return fields.to_vec();
    }
    let mut out = Vec::new();
    if with_esd {
        out.push(OutputField::Ts);
    }
    out.extend([OutputField::Ef, OutputField::D1, OutputField::D2, OutputField::MutualInformation, OutputField::Separable]);
    out
}

fn field_columns(fields: &[OutputField]) -> Vec<String> {
    let mut out = Vec::new();
    for f in fields {
        let names: &[&str] = match f {
            OutputField::Ef => &["ef"],
            OutputField::D1 => &["d1"],
            OutputField::D2 => &["d2"],
            OutputField::MutualInformation => &["mutual_information"],
            OutputField::Kappas => &["kappa_plus", "kappa_minus", "kappa_tilde_plus", "kappa_tilde_minus"],
            OutputField::Separable => &["separable"],
            OutputField::Ts => &["t_s", "t_s_status"],
        };
        out.extend(names.iter().map(|s| s.to_string()));
    }
    out
}

fn entropy_scale(units: Units) -> f64 {
    match units {
        Units::Nats => 1.0,
        Units::Bits => 1.0 / std::f64::consts::LN_2,
    }
}

/// Cells for `fields` at the state `sf`. `esd` is the death time of the
/// initial state.
fn field_cells(sf: &StandardForm, fields: &[OutputField], units: Units, esd: Option<&EsdOutcome>) -> CliResult<Vec<Cell>> {
    let rep = correlation_report(sf)?;
    let s = entropy_scale(units);
    let mut out = Vec::new();
    for f in fields {
        match f {
            OutputField::Ef => out.push(Cell::Num(rep.ef * s)),
            OutputField::D1 => out.push(Cell::Num(rep.d1 * s)),
            OutputField::D2 => out.push(Cell::Num(rep.d2 * s)),
            OutputField::MutualInformation => out.push(Cell::Num(rep.mutual_information * s)),
            OutputField::Kappas => {
                let k = symplectic_spectrum(sf)?;
                out.extend(
                    [k.kappa_plus, k.kappa_minus, k.kappa_tilde_plus, k.kappa_tilde_minus].map(Cell::Num),
                );
            }
            OutputField::Separable => out.push(Cell::Bool(rep.separable)),
            OutputField::Ts => {
                let e = esd.expect("death time computed when requested");
                out.push(e.time());
                out.push(Cell::Text(e.status().into()));
            }
        }
    }
    Ok(out)
}

fn state_cells(t: f64, sf: &StandardForm) -> Vec<Cell> {
    vec![Cell::Num(t), Cell::Num(sf.b1()), Cell::Num(sf.b2()), Cell::Num(sf.c())]
}

/// Result of a subcommand, ready to be written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub failed: bool,
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(table: Table, output: &args::OutputArgs) -> Self {
        Self { table, format: output.format, out: output.out.clone(), failed: false, notes: Vec::new() }
    }
}

pub fn cmd_report(a: &ReportArgs) -> CliResult<Outcome> {
    let sf0 = StateSpec::from_args(&a.state)?.standard_form()?;
    let res = ReservoirSpec::from_args(&a.reservoir)?.config()?;
    let fields = default_fields(&a.outputs, false);
    let esd = if fields.contains(&OutputField::Ts) { Some(esd_outcome(&sf0, &res)?) } else { None };
    let sf = evolve(&sf0, &res, a.t)?.sf;

    let mut columns: Vec<String> = ["t", "b1", "b2", "c"].map(String::from).to_vec();
    columns.extend(field_columns(&fields));
    let mut table = Table::new(columns);
    let mut row = state_cells(a.t, &sf);
    row.extend(field_cells(&sf, &fields, a.output.units, esd.as_ref())?);
    table.rows.push(row);
    Ok(Outcome::new(table, &a.output))
}

pub fn cmd_evolve(a: &EvolveArgs) -> CliResult<Outcome> {
    let sf0 = StateSpec::from_args(&a.state)?.standard_form()?;
    let res = ReservoirSpec::from_args(&a.reservoir)?.config()?;
    let grid = TimeGrid::from_args(&a.grid)?;
    let fields = [OutputField::Ef, OutputField::D1, OutputField::D2, OutputField::MutualInformation, OutputField::Separable];

    let rows = grid
        .times()
        .par_iter()
        .map(|&t| {
            let sf = evolve(&sf0, &res, t)?.sf;
            let mut row = state_cells(t, &sf);
            row.extend(field_cells(&sf, &fields, a.output.units, None)?);
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(EVOLVE_COLUMNS.map(String::from).to_vec());
    table.rows = rows;
    Ok(Outcome::new(table, &a.output))
}

pub fn cmd_esd(a: &EsdArgs) -> CliResult<Outcome> {
    let sf = StateSpec::from_args(&a.state)?.standard_form()?;
    let res = ReservoirSpec::from_args(&a.reservoir)?.config()?;
    let outcome = esd_outcome(&sf, &res)?;
    match outcome {
        EsdOutcome::NoReservoir => return Err(sts_core::Error::NoChannel.into()),
        EsdOutcome::Separable => {
            return Err(sts_core::Error::AlreadySeparable { margin: sf.separability_margin() }.into())
        }
        _ => {}
    }

    let mut columns = vec!["t_s".to_string(), "t_s_status".into(), "method".into()];
    let method = match outcome {
        EsdOutcome::Finite { method, .. } | EsdOutcome::AsymptoticOnly { method } => method,
        _ => unreachable!(),
    };
    let mut row = vec![outcome.time(), Cell::Text(outcome.status().into()), Cell::Text(method.into())];

    if a.verify {
        columns.extend(["closed_form", "bisection", "difference"].map(String::from));
        let closed = if method == "closed_form" { outcome.time() } else { Cell::Empty };
        let bisected = if method == "bisection" { outcome } else { bisect(&sf, &res)? };
        let diff = match (&closed, bisected) {
            (Cell::Num(x), EsdOutcome::Finite { t, .. }) => Cell::Num(x - t),
            _ => Cell::Empty,
        };
        row.extend([closed, bisected.time(), diff]);
    }

    let mut table = Table::new(columns);
    table.rows.push(row);
    let mut out = Outcome::new(table, &a.output);
    if let EsdOutcome::AsymptoticOnly { .. } = outcome {
        out.notes.push("no sudden death (zero-temperature bath): entanglement only vanishes asymptotically".into());
    }
    Ok(out)
}

fn axis_name(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::N1 => "n1",
        SweepAxis::N2 => "n2",
        SweepAxis::R => "r",
        SweepAxis::Nr => "nr",
        SweepAxis::Gamma => "gamma",
    }
}

/// `steps` equally spaced values from `min` to `max` inclusive.
pub fn sweep_values(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min > max {
        return Err(CliError::invalid(format!("sweep needs finite min <= max, got [{min}, {max}]")));
    }
    match steps {
        0 => Err(CliError::invalid("--steps must be at least 1")),
        1 if min != max => Err(CliError::invalid("a single step needs --min equal to --max")),
        1 => Ok(vec![min]),
        _ if min == max => Err(CliError::invalid("several steps need --min < --max")),
        _ => {
            let last = (steps - 1) as f64;
            let mut v: Vec<f64> = (0..steps).map(|k| min + (max - min) * (k as f64 / last)).collect();
            v[steps - 1] = max;
            Ok(v)
        }
    }
}

pub fn cmd_sweep(a: &SweepArgs) -> CliResult<Outcome> {
    let state = StateSpec::from_args(&a.state)?;
    let values = sweep_values(a.min, a.max, a.steps)?;
    let mut res_args = a.reservoir.clone();
    if a.sweep == SweepAxis::Nr && res_args.nr.is_none() && (res_args.identical || res_args.single_bath) {
        // the swept value stands in for the missing occupancy
        res_args.nr = Some(values[0]);
    }
    let reservoir = ReservoirSpec::from_args(&res_args)?;
    let fields = default_fields(&a.outputs, true);
    if !(a.t.is_finite() && a.t >= 0.0) {
        return Err(sts_core::Error::InvalidTime(a.t).into());
    }

    let rows = values
        .par_iter()
        .map(|&v| {
            let (mut state, mut reservoir) = (state, reservoir);
            match a.sweep {
                SweepAxis::Nr | SweepAxis::Gamma => reservoir.set(a.sweep, v)?,
                axis => state.set(axis, v)?,
            }
            let sf0 = state.standard_form()?;
            let res = reservoir.config()?;
            let esd = if fields.contains(&OutputField::Ts) { Some(esd_outcome(&sf0, &res)?) } else { None };
            let sf = evolve(&sf0, &res, a.t)?.sf;
            let mut row = vec![Cell::Num(v)];
            row.extend(field_cells(&sf, &fields, a.output.units, esd.as_ref())?);
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut columns = vec![axis_name(a.sweep).to_string()];
    columns.extend(field_columns(&fields));
    let mut table = Table::new(columns);
    table.rows = rows;
    Ok(Outcome::new(table, &a.output))
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<Outcome> {
    let res = ReservoirSpec::from_args(&a.reservoir)?.config()?;
    let states: Vec<StandardForm> = match a.random {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            // every tenth state is drawn off the squeezed-thermal family
            (0..n)
                .map(|k| {
                    if k % 10 == 9 {
                        Ok(random_standard_form(&mut rng))
                    } else {
                        standard_form_from_sts(&random_sts(&mut rng))
                    }
                })
                .collect::<sts_core::Result<_>>()?
        }
        None => vec![StateSpec::from_args(&a.state)?.standard_form()?],
    };

    let reports = states
        .par_iter()
        .map(|sf| check_state(sf, &res))
        .collect::<sts_core::Result<Vec<_>>>()?;

    let columns = ["state", "quantity", "closed_form", "oracle", "abs_err", "tol", "pass"];
    let mut table = Table::new(columns.map(String::from).to_vec());
    let (mut total, mut failed) = (0, 0);
    for (k, checks) in reports.into_iter().enumerate() {
        for c in checks {
            total += 1;
            failed += usize::from(!c.pass);
            table.rows.push(vec![
                Cell::Int(k as u64),
                Cell::Text(c.quantity),
                Cell::Num(c.closed_form),
                Cell::Num(c.oracle),
                Cell::Num(c.abs_err),
                Cell::Num(c.tol),
                Cell::Bool(c.pass),
            ]);
        }
    }
    let mut out = Outcome::new(table, &a.output);
    out.failed = failed > 0;
    out.notes.push(format!("{total} checks, {failed} failed"));
    Ok(out)
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Report(a) => cmd_report(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Esd(a) => cmd_esd(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses `args` (program name first), runs the command, writes its output
/// and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = match config_file::expand_args(args.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };

    let text = outcome.table.render(outcome.format);
    match &outcome.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CHECK_FAILED;
            }
        }
        None => print!("{text}"),
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    if outcome.failed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}
