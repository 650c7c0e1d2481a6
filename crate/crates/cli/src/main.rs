//! `pascalchar`: reproducible experiments on character-twisted row sums of
//! Pascal's triangle modulo a prime.

mod output;
mod svg;

use std::fmt;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use pascalchar::arith::DEFAULT_ORACLE_LIMIT;
use pascalchar::bounds::{
    self, Ladder, ALPHA_HEADER, BOUNDS_HEADER, DEFAULT_SWEEP_CAP, PSI_HEADER, RATIO_HEADER,
    WITNESS_HEADER,
};
use pascalchar::classification::{primes_up_to, CSV_HEADER, MEANS_HEADER, SCATTER_HEADER};
use pascalchar::model::{run_model, ModelConfig, ModelTarget};
use pascalchar::report::fmt_bigfloat_complex;
use pascalchar::{
    a_count_bruteforce, character, fundamental_scatter, make_context, mean_report, scan, CycInt,
    DigitString, Error, FundamentalTables, Parallelism, PrecisionPolicy, PrimeContext, PrimeTables,
    Verdict,
};

use crate::output::{csv_bytes, json_bytes, Run};

/// Largest accepted number of decimal digits for `--n` of `phi`.
const MAX_N_DIGITS: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "pascalchar",
    version,
    about = "Character-twisted row sums of Pascal's triangle mod p"
)]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,

    /// Write the result here instead of stdout; a `<file>.manifest.json`
    /// is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand)]
enum Command {
    /// List characters that are not row-regular, one per conjugate pair.
    Scan {
        #[arg(long)]
        pmax: u64,
    },
    /// Exact T_χ(n) and φ_χ(n); n may have up to 10^4 decimal digits.
    Phi {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        n: String,
    },
    /// A_n(r), the number of entries ≡ r (mod p) in rows 0..n.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        /// Row-count ceiling for the brute-force method.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: u64,
    },
    /// φ_χ(p)/p for every nonprincipal character with p ≤ pmax.
    Scatter {
        #[arg(long)]
        pmax: u64,
        /// Also draw the points as a static SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Trivial and Weil-type bounds on |φ_χ(p)|, checked against all characters.
    Bounds {
        #[arg(long)]
        p: u64,
        /// Report every prime from 3 up to this bound instead of just p.
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// The maxima α_k of |φ_χ(n)/n^θ| over p^{k-1} < n ≤ p^k.
    Alpha {
        #[command(flatten)]
        chi: CharArgs,
        /// Defaults to the largest k with p^k ≤ 10^6.
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Oscillation of ψ_χ(x) = φ_χ(x)/x^θ on grids of step p^{-b}.
    Psi {
        #[command(flatten)]
        chi: CharArgs,
        /// Grid levels as `b1..b2`.
        #[arg(long, default_value = "1..4")]
        grid: GridSpec,
    },
    /// A_n(r)(p-1)/φ_p(n) along n = p^k, or n = ⌊c p^k⌋ with --scale c.
    Ratio {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Monte-Carlo run of the random fundamental-domain model.
    Model {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `Ycount:<r>`, `Ychar:even|odd` or `Ap:<r>`.
        #[arg(long)]
        target: String,
    },
    /// Means of φ_χ(p) over even and odd characters, for 5 ≤ p ≤ pmax.
    Means {
        #[arg(long)]
        pmax: u64,
    },
    /// Growth of a row-dominant character along n_k = b(p^k - 1)/(p - 1).
    Witness {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value_t = 40)]
        kmax: u32,
    },
    /// Growth exponents θ, ρ, q, ω of one character.
    Profile {
        #[command(flatten)]
        chi: CharArgs,
    },
    /// The exponent ϑ_ε of the error term for residue counts.
    Vartheta {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

#[derive(Args)]
struct CharArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Brute,
}

#[derive(Clone, Debug)]
struct GridSpec(u32, u32);

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected b1..b2, got {s:?}"))?;
        let a: u32 = a.trim().parse().map_err(|_| format!("bad level {a:?}"))?;
        let b: u32 = b.trim().parse().map_err(|_| format!("bad level {b:?}"))?;
        if a == 0 || a > b {
            return Err(format!("need 1 <= b1 <= b2, got {s:?}"));
        }
        Ok(Self(a, b))
    }
}

enum CliError {
    Usage(String),
    Compute(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Compute(m) => f.write_str(m),
            Self::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::ContextTooLarge { .. }
            | Error::IndexOutOfRange { .. }
            | Error::ResidueOutOfRange { .. }
            | Error::InvalidArgument(_) => Self::Usage(e.to_string()),
            _ => Self::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Compute(_) | CliError::Io(_) => 1,
            })
        }
    }
}

fn context(p: u64) -> CliResult<Arc<PrimeContext>> {
    Ok(Arc::new(make_context(p)?))
}

fn tables_for(chi: &CharArgs) -> CliResult<FundamentalTables> {
    let ctx = context(chi.p)?;
    Ok(FundamentalTables::build(&character(&ctx, chi.k)?))
}

fn run(cli: Cli) -> CliResult<()> {
    let policy = PrecisionPolicy::from_env().map_err(CliError::Usage)?;
    let jobs = cli.jobs.max(1);
    let par = Parallelism::new(jobs);
    let mut run = Run::new(jobs, policy.describe());
    let out = cli.out.as_deref();

    match cli.command {
        Command::Scan { pmax } => {
            if pmax < 2 {
                return Err(CliError::Usage(format!(
                    "--pmax must be at least 2, got {pmax}"
                )));
            }
            let records = scan(pmax, par, &policy)?;
            let csv = csv_bytes(&CSV_HEADER, records.iter().map(|r| r.csv_row()));
            if out.is_some() {
                print_scan_table(&records);
            }
            run.emit(out, &csv)?;
            run.finish()?;
            let undecided: Vec<String> = records
                .iter()
                .filter(|r| r.verdict == Verdict::Undecided)
                .map(|r| format!("p={} k={}", r.p, r.k))
                .collect();
            if !undecided.is_empty() {
                return Err(CliError::Compute(format!(
                    "undecided comparisons for {}",
                    undecided.join(", ")
                )));
            }
        }
        Command::Phi { chi, n } => {
            let t = tables_for(&chi)?;
            let text = phi_text(&t, &n)?;
            run.emit(out, text.as_bytes())?;
            run.finish()?;
        }
        Command::Count {
            p,
            r,
            n,
            method,
            limit,
        } => {
            let ctx = context(p)?;
            if r == 0 || r >= p {
                return Err(Error::ResidueOutOfRange { p, r }.into());
            }
            let count = match method {
                Method::Formula => {
                    par.install(|| PrimeTables::build(&ctx).a_count_formula(n, r))?
                }
                Method::Brute => a_count_bruteforce(n, &ctx, limit)?.get(r),
            };
            run.emit(out, format!("{count}\n").as_bytes())?;
            run.finish()?;
        }
        Command::Scatter { pmax, svg } => {
            if pmax < 3 {
                return Err(CliError::Usage(format!(
                    "--pmax must be at least 3, got {pmax}"
                )));
            }
            let points = fundamental_scatter(pmax, par)?;
            run.emit(
                out,
                &csv_bytes(&SCATTER_HEADER, points.iter().map(|s| s.csv_row())),
            )?;
            if let Some(path) = svg.as_deref() {
                run.emit(Some(path), svg::scatter_svg(&points).as_bytes())?;
            }
            run.finish()?;
        }
        Command::Bounds { p, pmax } => {
            let primes = match pmax {
                Some(pmax) => primes_up_to(pmax).into_iter().filter(|&q| q >= 3).collect(),
                None => vec![p],
            };
            let reports = par.install(|| {
                primes
                    .iter()
                    .map(|&q| bounds::bound_report(&context(q)?).map_err(CliError::from))
                    .collect::<CliResult<Vec<_>>>()
            })?;
            run.extra = serde_json::json!({
                "columns_checked": reports.iter().map(|r| r.columns_checked).sum::<usize>(),
                "worst_column_ratio": reports.iter().map(|r| r.worst_column_ratio).fold(0.0, f64::max),
            });
            run.emit(
                out,
                &csv_bytes(&BOUNDS_HEADER, reports.iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Alpha { chi, kmax } => {
            let t = tables_for(&chi)?;
            let kmax = kmax.unwrap_or_else(|| largest_k(chi.p, 1_000_000));
            let seq = par.install(|| bounds::alpha_sequence(&t, kmax, DEFAULT_SWEEP_CAP))?;
            run.extra = serde_json::json!({
                "theta": [seq.theta.re, seq.theta.im],
                "q": seq.q,
                "argmax": seq.argmax,
            });
            run.emit(
                out,
                &csv_bytes(&ALPHA_HEADER, seq.rows().iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Psi { chi, grid } => {
            let t = tables_for(&chi)?;
            let rows = bounds::psi_continuity(&t, grid.0..=grid.1, DEFAULT_SWEEP_CAP)?;
            run.emit(
                out,
                &csv_bytes(&PSI_HEADER, rows.iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Ratio { p, r, kmax, scale } => {
            let ctx = context(p)?;
            let all = PrimeTables::build(&ctx);
            let ladder = match scale {
                Some(c) if c >= 1.0 => Ladder::Scaled(c),
                Some(c) => return Err(CliError::Usage(format!("--scale must be >= 1, got {c}"))),
                None => Ladder::PrimePower,
            };
            let rows = bounds::convergence_ratio(&all, r, kmax, ladder)?;
            let last = rows.last().map(|row| (row.ratio - 1.0).abs());
            run.extra = serde_json::json!({
                "ladder": format!("{ladder:?}"),
                "final_abs_deviation": last,
            });
            run.emit(
                out,
                &csv_bytes(&RATIO_HEADER, rows.iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Model {
            p,
            samples,
            seed,
            target,
        } => {
            let target: ModelTarget = target.parse()?;
            let cfg = ModelConfig::new(p, samples, seed)?;
            let stats = par.install(|| run_model(&cfg, target))?;
            run.seeds.push(seed);
            run.extra = serde_json::json!({ "rng": stats.rng });
            run.emit(out, &json_bytes(&stats))?;
            run.finish()?;
        }
        Command::Means { pmax } => {
            let ctxs = primes_up_to(pmax)
                .into_iter()
                .filter(|&p| p >= 5)
                .map(context)
                .collect::<CliResult<Vec<_>>>()?;
            let reports: Vec<_> = par.install(|| ctxs.iter().map(mean_report).collect());
            run.emit(
                out,
                &csv_bytes(&MEANS_HEADER, reports.iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Witness { chi, kmax } => {
            let t = tables_for(&chi)?;
            let (b, rows) = par.install(|| bounds::row_dominant_witness(&t, &policy, kmax))?;
            run.extra = serde_json::json!({ "witness_digit": b });
            run.emit(
                out,
                &csv_bytes(&WITNESS_HEADER, rows.iter().map(|r| r.csv_row())),
            )?;
            run.finish()?;
        }
        Command::Profile { chi } => {
            let t = tables_for(&chi)?;
            run.emit(out, &json_bytes(&bounds::growth_profile(&t)?))?;
            run.finish()?;
        }
        Command::Vartheta { p, eps } => {
            let ctx = context(p)?;
            let all = par.install(|| PrimeTables::build(&ctx));
            run.emit(out, &json_bytes(&bounds::vartheta(&all, eps)?))?;
            run.finish()?;
        }
    }
    Ok(())
}

fn largest_k(p: u64, cap: u64) -> u32 {
    let mut k = 1;
    while (p as u128).pow(k + 1) <= cap as u128 {
        k += 1;
    }
    k
}

/// Two-column listing of `p` and the character label, as in a printed table.
fn print_scan_table(records: &[pascalchar::ClassificationRecord]) {
    let cells: Vec<String> = records
        .iter()
        .map(|r| format!("{:>4}  {}", r.p, r.paper_label))
        .collect();
    let width = cells.iter().map(String::len).max().unwrap_or(0);
    let half = cells.len().div_ceil(2);
    for i in 0..half {
        match cells.get(half + i) {
            Some(right) => println!("{:<width$}    {}", cells[i], right),
            None => println!("{}", cells[i]),
        }
    }
}

fn phi_text(t: &FundamentalTables, n: &str) -> CliResult<String> {
    let n = n.trim();
    if n.len() > MAX_N_DIGITS {
        return Err(CliError::Usage(format!(
            "--n has {} digits; at most {MAX_N_DIGITS} are accepted",
            n.len()
        )));
    }
    let value = BigUint::from_str(n).map_err(|_| CliError::Usage(format!("bad --n {n:?}")))?;
    let digits = DigitString::from_biguint(&value, t.p());
    let (t_n, phi_n): (CycInt<BigInt>, CycInt<BigInt>) = t.t_phi_digits(&digits);
    let chi = t.chi();
    Ok(format!(
        "chi: {}\nlabel: {}\nn: {}\nT(n) = {}\nT(n) ~ {}\nphi(n) = {}\nphi(n) ~ {}\n",
        chi.name(),
        chi.paper_label(),
        value,
        t_n.to_sparse_string(),
        embed_text(&t_n),
        phi_n.to_sparse_string(),
        embed_text(&phi_n),
    ))
}

/// Complex value at a precision that covers cancellation among the
/// coefficients.
fn embed_text(x: &CycInt<BigInt>) -> String {
    let max_bits = x.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as usize;
    let bits = 96 + max_bits + 2 * (usize::BITS - x.order().leading_zeros()) as usize;
    let (re, im) = x.embed_prec(bits);
    fmt_bigfloat_complex(&re, &im)
}
