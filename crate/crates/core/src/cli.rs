//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a verification
//! finds a broken invariant (a count above its class-number bound, a census
//! mismatch, or a marked point of the wrong order).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::census::{trace_census, verify_cor1};
use crate::ec::isqrt;
use crate::error::{Error, Result};
use crate::family::{
    builtin_family, equality_report, parse_family, scan_closed_points, scan_rational, FamilySpec,
};
use crate::ff::make_field;
use crate::predict::PredictionModel;
use crate::quadform::{class_number_h, kronecker_h, kronecker_h_w, weighted_h_w};
use crate::report::{self, Format, Table};

#[derive(Parser, Debug)]
#[command(
    name = "frobtrace",
    version,
    about = "Frobenius trace statistics over finite fields"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Table, global = true)]
    pub format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Igusa,
    Fulllevel,
    Gamma1,
}

#[derive(clap::Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["family", "config"])))]
pub struct FamilyArgs {
    /// Built-in family: legendre, jline, x1_5 or x1_7.
    #[arg(long)]
    pub family: Option<String>,
    /// Family configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Characteristic; optional with --config, where it must match the file.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class numbers h, H and H_w of a negative discriminant.
    Classnum {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Also print the weighted class number h_w.
        #[arg(long)]
        weighted: bool,
    },
    /// Trace census over isomorphism classes of curves over F_{p^k}.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Compare N(t) with H(t^2 - 4q) and exit 2 on any mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Scan every fiber of a family, or its closed points with --B and --t.
    Scan {
        #[command(flatten)]
        source: FamilyArgs,
        /// Maximum closed-point degree.
        #[arg(long = "B", requires = "t")]
        b: Option<u32>,
        #[arg(long, allow_negative_numbers = true, requires = "b")]
        t: Option<i64>,
    },
    /// Closed-form predictions for families with level structure.
    Predict {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        p: u64,
        /// Igusa exponent: level p^n.
        #[arg(long)]
        n: Option<u32>,
        /// Full level N.
        #[arg(long = "N")]
        level: Option<u64>,
        /// Prime level l of the point.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "all_t")]
        t: Option<i64>,
        /// Every ordinary t in the Hasse range.
        #[arg(long)]
        all_t: bool,
    },
    /// Scan a family and compare each count with deg_s(J) H and deg_s(J) H_w.
    Verify {
        #[command(flatten)]
        source: FamilyArgs,
    },
}

/// A rendered report and the exit code it implies.
struct Output {
    table: Table,
    code: i32,
}

impl Output {
    fn ok(table: Table) -> Self {
        Output { table, code: 0 }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundViolation { .. } | Error::MarkedPointOrderViolation { .. } => 2,
        _ => 1,
    }
}

fn load_family(src: &FamilyArgs) -> Result<FamilySpec> {
    match (&src.family, &src.config) {
        (Some(name), None) => {
            let p = src
                .p
                .ok_or_else(|| Error::Usage("--family needs --p".into()))?;
            builtin_family(name, p)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let spec = parse_family(&text)?;
            match src.p {
                Some(p) if p != spec.p => Err(Error::Usage(format!(
                    "--p {p} disagrees with p = {} in {}",
                    spec.p,
                    path.display()
                ))),
                _ => Ok(spec),
            }
        }
        _ => Err(Error::Usage(
            "give exactly one of --family and --config".into(),
        )),
    }
}

fn classnum(disc: i64, weighted: bool) -> Result<Output> {
    let row = (
        disc,
        class_number_h(disc)?,
        kronecker_h(disc)?,
        kronecker_h_w(disc)?,
        weighted_h_w(disc)?,
    );
    Ok(Output::ok(report::classnum_table(&[row], weighted)))
}

fn census(p: u64, k: u32, verify: bool) -> Result<Output> {
    let ctx = make_field(p, k)?;
    if verify {
        let r = verify_cor1(&ctx)?;
        let code = if r.pass { 0 } else { 2 };
        Ok(Output {
            table: report::cor1_table(&r),
            code,
        })
    } else {
        Ok(Output::ok(report::census_table(&trace_census(&ctx)?)))
    }
}

fn scan(src: &FamilyArgs, closed: Option<(u32, i64)>) -> Result<Output> {
    let spec = load_family(src)?;
    let ctx = make_field(spec.p, src.k)?;
    match closed {
        None => Ok(Output::ok(report::scan_table(&scan_rational(&spec, &ctx)?))),
        Some((b, t)) => {
            let r = scan_closed_points(&spec, &ctx, b, t)?;
            Ok(Output::ok(report::closed_point_table(
                &r,
                &spec.name,
                spec.p,
                ctx.q(),
            )))
        }
    }
}

fn verify(src: &FamilyArgs) -> Result<Output> {
    let spec = load_family(src)?;
    let ctx = make_field(spec.p, src.k)?;
    let scan = scan_rational(&spec, &ctx)?;
    let eq = equality_report(&spec, &scan);
    Ok(Output::ok(report::equality_table(&eq, &scan)))
}

#[allow(clippy::too_many_arguments)]
fn predict(
    model: ModelArg,
    p: u64,
    n: Option<u32>,
    level: Option<u64>,
    l: Option<u64>,
    k: u32,
    t: Option<i64>,
    all_t: bool,
) -> Result<Output> {
    let missing = |flag: &str| Error::Usage(format!("--model needs {flag}"));
    let model = match model {
        ModelArg::Igusa => PredictionModel::Igusa {
            p,
            n: n.ok_or_else(|| missing("--n"))?,
        },
        ModelArg::Fulllevel => PredictionModel::FullLevel {
            level: level.ok_or_else(|| missing("--N"))?,
        },
        ModelArg::Gamma1 => PredictionModel::Gamma1 {
            l: l.ok_or_else(|| missing("--l"))?,
        },
    };
    let ts: Vec<i64> = match (t, all_t) {
        (Some(t), false) => vec![t],
        (None, true) => {
            let qk = p
                .checked_pow(k)
                .filter(|&v| v <= u32::MAX as u64)
                .ok_or_else(|| Error::Usage("p^k too large for --all-t".into()))?;
            let tmax = isqrt(4 * qk) as i64;
            (-tmax..=tmax)
                .filter(|&t| t * t < 4 * qk as i64 && t.rem_euclid(p as i64) != 0)
                .collect()
        }
        _ => return Err(Error::Usage("give one of --t and --all-t".into())),
    };
    let outcomes = ts
        .into_iter()
        .map(|t| model.predict(p, k, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Output::ok(report::predict_table(
        &model.to_string(),
        p,
        k,
        &outcomes,
    )))
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Classnum { disc, weighted } => classnum(*disc, *weighted),
        Command::Census { p, k, verify } => census(*p, *k, *verify),
        Command::Scan { source, b, t } => scan(source, b.zip(*t)),
        Command::Predict {
            model,
            p,
            n,
            level,
            l,
            k,
            t,
            all_t,
        } => predict(*model, *p, *n, *level, *l, *k, *t, *all_t),
        Command::Verify { source } => verify(source),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("usage error"));
            return 1;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return 1;
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 1;
        }
    };
    let output = match pool.install(|| run(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = output.table.render(cli.format.into());
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    output.code
}
