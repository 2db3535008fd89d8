//! Command-line front end for the inversive QMC library: generates point
//! sets, verifies character-sum and discrepancy bounds against the exact
//! oracles, and runs integration experiments.
//!
//! Exit codes: 0 when every requested check passes, 1 for usage errors
//! (bad flags, malformed values, impossible configurations), 2 when a
//! verification fails or an exhaustive oracle exceeds its budget.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ipqmc::arith::prime_power_decompose;
use ipqmc::charsum::{max_abs_charsum, sampled_max_charsum};
use ipqmc::discrepancy::{
    min_q_for_eps, star_discrepancy_exact, weighted_discrepancy_bound,
    weighted_star_discrepancy_exact, Attainment, SubsetWeight,
};
use ipqmc::field::{make_field, OrderedBasis};
use ipqmc::integration::{
    convergence_sweep, integrate_on_size_q, power_amplitudes, CosProdIntegrand, Parity,
};
use ipqmc::pointset::{default_shifts, Construction};
use ipqmc::{
    ClassParams, DigitalPointSet, Error, ExperimentRecord, FieldSpec, InversiveVectors,
    PeriodTConfig, SizeQConfig, WeightSpec, DEFAULT_ORACLE_BUDGET,
};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VERIFY: i32 = 2;

#[derive(Parser)]
#[command(
    name = "ipqmc",
    version,
    about = "Inversive QMC point sets over GF(p^k): generation, bound verification, integration"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a point set as CSV (exact m/p^k coordinates plus floats)
    Gen(GenArgs),
    /// Check character-sum and discrepancy bounds against the exact oracles
    Verify(VerifyArgs),
    /// Maximum |character sum| over one coordinate subset
    Charsum(CharsumArgs),
    /// Exact star discrepancy, optionally weighted and bound-checked
    Disc(DiscArgs),
    /// One QMC integration run on the size-q point set
    Integrate(IntegrateArgs),
    /// Integration convergence sweep over a list of prime powers
    Sweep(SweepArgs),
    /// Smallest prime power meeting a target discrepancy bound
    InverseEps(InverseEpsArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field size q = p^k (prime power); alternative to --p/--k
    #[arg(long, conflicts_with_all = ["p", "k"])]
    q: Option<u64>,
    /// Field characteristic (use together with --k)
    #[arg(long, requires = "k")]
    p: Option<u64>,
    /// Extension degree (use together with --p)
    #[arg(long, requires = "p")]
    k: Option<usize>,
}

impl FieldArgs {
    fn spec(&self) -> Result<FieldSpec, CliError> {
        let (p, k) = match (self.q, self.p, self.k) {
            (Some(q), None, None) => {
                let (p, k) = prime_power_decompose(q)
                    .ok_or_else(|| CliError::Msg(format!("--q {q} is not a prime power")))?;
                (p, k as usize)
            }
            (None, Some(p), Some(k)) => (p, k),
            _ => return Err(CliError::Msg("give either --q or both --p and --k".into())),
        };
        Ok(make_field(p, k)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    /// N = q points, one per field element
    #[value(name = "size-q")]
    SizeQ,
    /// N = T points along the orbit of an element of order T | q-1
    #[value(name = "period-T", alias = "period-t")]
    PeriodT,
}

#[derive(Args)]
struct ConstructionArgs {
    /// Which inversive construction to use
    #[arg(long, value_enum, default_value = "size-q")]
    construction: ConstructionArg,
    /// Period T | q-1 (period-T construction only)
    #[arg(long = "T", value_name = "T")]
    period: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    /// Product of 1 + a_j cos(2 pi x_j), integrated on the raw points
    Fourier,
    /// Product of 1 + a_j sqrt(2) cos(pi x_j), integrated on tent points
    Cosine,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    cons: ConstructionArgs,
    /// Dimension (number of coordinates); uses the first s field elements
    /// as shifts unless --shifts is given
    #[arg(long)]
    s: Option<usize>,
    /// Shift set as comma-separated canonical element indices
    #[arg(long)]
    shifts: Option<String>,
    /// Digit-map basis as comma-separated canonical element indices
    /// (default: polynomial basis)
    #[arg(long)]
    basis: Option<String>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    cons: ConstructionArgs,
    /// Dimension (number of coordinates)
    #[arg(long)]
    s: usize,
    /// Weights for the weighted-discrepancy check: const:c, power:c/j^a,
    /// or explicit:@file.json
    #[arg(long, default_value = "const:1")]
    weights: String,
    /// Enumeration budget (overrides the IPQMC_BUDGET environment variable)
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharsumArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    cons: ConstructionArgs,
    /// Dimension (number of coordinates)
    #[arg(long)]
    s: usize,
    /// Coordinate subset, comma-separated 1-based indices (default: all)
    #[arg(long)]
    u: Option<String>,
    /// Sample this many random coefficient vectors instead of scanning all
    #[arg(long)]
    samples: Option<u64>,
    /// Seed for --samples
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget (overrides the IPQMC_BUDGET environment variable)
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiscArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    cons: ConstructionArgs,
    /// Dimension (number of coordinates)
    #[arg(long)]
    s: usize,
    /// Also compute the weighted discrepancy and check it against the
    /// closed-form bound: const:c, power:c/j^a, or explicit:@file.json
    #[arg(long)]
    weights: Option<String>,
    /// Largest subset order for the weighted discrepancy (default: s)
    #[arg(long)]
    max_order: Option<usize>,
    /// Enumeration budget (overrides the IPQMC_BUDGET environment variable)
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AmplitudeArgs {
    /// Integrand amplitudes as comma-separated floats
    #[arg(long, conflicts_with = "power")]
    amplitudes: Option<String>,
    /// Integrand amplitudes a_j = c/j^a, written c/j^a (needs --s)
    #[arg(long)]
    power: Option<String>,
    /// Dimension; required with --power, checked against --amplitudes
    #[arg(long)]
    s: Option<usize>,
    /// Integrand parity (cosine evaluates on tent-transformed points)
    #[arg(long, value_enum, default_value = "fourier")]
    parity: ParityArg,
    /// Smoothness exponent of the function class
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Summability index of the function class: a float or "inf"
    #[arg(long, default_value = "inf")]
    t: String,
}

#[derive(Args)]
struct IntegrateArgs {
    /// Field size q = p^k (prime power); the node set is the size-q set
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    amp: AmplitudeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated prime powers; rows are emitted in increasing q
    #[arg(long = "q-list")]
    q_list: String,
    #[command(flatten)]
    amp: AmplitudeArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InverseEpsArgs {
    /// Target bound value in (0, 1)
    #[arg(long)]
    eps: f64,
    /// Rate offset in [0, 1/2): the bound decays like q^-(1/2-delta)
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Constant in front of the decay
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Core(Error),
    Msg(String),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Msg(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Msg(format!("json error: {e}"))
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::OracleTooLarge { .. })
            | CliError::Core(Error::BudgetExceeded { .. }) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Charsum(a) => cmd_charsum(a),
        Cmd::Disc(a) => cmd_disc(a),
        Cmd::Integrate(a) => cmd_integrate(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::InverseEps(a) => cmd_inverse_eps(a),
    }
}

/// Everything the CSV metadata header reports about a generated set.
struct SetMeta {
    p: u64,
    k: usize,
    q: u64,
    construction: Construction,
    shifts: Vec<u64>,
    theta: Option<u64>,
    period: Option<u64>,
    basis: Vec<u64>,
    modulus: Vec<u64>,
}

/// Builds the vector set and its digital coordinates from the shared
/// field/construction/shift flags.
fn build_set(
    field: FieldSpec,
    cons: &ConstructionArgs,
    s_flag: Option<usize>,
    shifts_flag: &Option<String>,
    basis_flag: &Option<String>,
) -> Result<(InversiveVectors, DigitalPointSet, SetMeta), CliError> {
    let shifts = match shifts_flag {
        Some(list) => {
            let idxs: Vec<u64> = parse_list(list, "shift index")?;
            if let Some(s) = s_flag {
                if s != idxs.len() {
                    return Err(CliError::Msg(format!(
                        "--s {s} conflicts with {} entries in --shifts",
                        idxs.len()
                    )));
                }
            }
            idxs.iter()
                .map(|&i| field.from_index(i))
                .collect::<ipqmc::Result<Vec<_>>>()?
        }
        None => {
            let s = s_flag
                .ok_or_else(|| CliError::Msg("--s is required unless --shifts is given".into()))?;
            default_shifts(&field, s)?
        }
    };
    let basis = match basis_flag {
        Some(list) => {
            let idxs: Vec<u64> = parse_list(list, "basis index")?;
            let elems = idxs
                .iter()
                .map(|&i| field.from_index(i))
                .collect::<ipqmc::Result<Vec<_>>>()?;
            Some(OrderedBasis::new(elems))
        }
        None => None,
    };
    let shift_idx: Vec<u64> = shifts
        .iter()
        .map(|e| field.index_of(e))
        .collect::<ipqmc::Result<_>>()?;
    let basis_idx: Vec<u64> = match &basis {
        Some(b) => b
            .elements()
            .iter()
            .map(|e| field.index_of(e))
            .collect::<ipqmc::Result<_>>()?,
        None => field
            .polynomial_basis()
            .elements()
            .iter()
            .map(|e| field.index_of(e))
            .collect::<ipqmc::Result<_>>()?,
    };
    let modulus = field.modulus.clone();
    let (vectors, theta, period) = match cons.construction {
        ConstructionArg::SizeQ => {
            if cons.period.is_some() {
                return Err(CliError::Msg(
                    "--T only applies to --construction period-T".into(),
                ));
            }
            let cfg = SizeQConfig::new(field, shifts)?;
            (InversiveVectors::size_q(&cfg)?, None, None)
        }
        ConstructionArg::PeriodT => {
            let t = cons
                .period
                .ok_or_else(|| CliError::Msg("--T is required for --construction period-T".into()))?;
            let cfg = PeriodTConfig::new(field, t, shifts)?;
            let theta_idx = cfg.field.index_of(&cfg.theta)?;
            (InversiveVectors::period_t(&cfg)?, Some(theta_idx), Some(t))
        }
    };
    let digital = vectors.to_digital(basis.as_ref())?;
    let meta = SetMeta {
        p: digital.p,
        k: digital.k,
        q: digital.den(),
        construction: digital.construction,
        shifts: shift_idx,
        theta,
        period,
        basis: basis_idx,
        modulus,
    };
    Ok((vectors, digital, meta))
}

fn cmd_gen(a: GenArgs) -> Result<i32, CliError> {
    let field = a.field.spec()?;
    let (_, digital, meta) = build_set(field, &a.cons, a.s, &a.shifts, &a.basis)?;
    let mut out = String::new();
    push_metadata(&mut out, &meta);
    let mut header = Vec::with_capacity(2 * digital.s);
    for i in 1..=digital.s {
        header.push(format!("x{i}"));
        header.push(format!("x{i}_f64"));
    }
    writeln!(out, "{}", header.join(",")).unwrap();
    let den = digital.den();
    for n in 0..digital.n {
        let mut row = Vec::with_capacity(2 * digital.s);
        for i in 0..digital.s {
            let m = digital.numerator(n, i);
            row.push(format!("{m}/{den}"));
            row.push(format!("{:.16e}", m as f64 / den as f64));
        }
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    write_output(&a.out, &out)?;
    Ok(EXIT_OK)
}

fn push_metadata(out: &mut String, m: &SetMeta) {
    writeln!(out, "# p: {}", m.p).unwrap();
    writeln!(out, "# k: {}", m.k).unwrap();
    writeln!(out, "# q: {}", m.q).unwrap();
    writeln!(out, "# construction: {}", m.construction).unwrap();
    writeln!(out, "# S: {}", join_u64(&m.shifts)).unwrap();
    writeln!(out, "# theta: {}", opt_u64(m.theta)).unwrap();
    writeln!(out, "# T: {}", opt_u64(m.period)).unwrap();
    writeln!(out, "# basis: {}", join_u64(&m.basis)).unwrap();
    writeln!(out, "# modulus: {}", join_u64(&m.modulus)).unwrap();
}

fn cmd_verify(a: VerifyArgs) -> Result<i32, CliError> {
    if a.s == 0 || a.s > 20 {
        return Err(CliError::Msg("--s must lie in 1..=20".into()));
    }
    let field = a.field.spec()?;
    let budget = resolve_budget(a.budget)?;
    let weights = parse_weights(&a.weights)?;
    let (vectors, digital, meta) = build_set(field, &a.cons, Some(a.s), &None, &None)?;
    let ps = digital.to_rational();
    let s = digital.s;
    let mut records: Vec<ExperimentRecord> = Vec::new();
    let mut budget_hit = false;

    // Character-sum bound for every nonempty coordinate subset.
    for mask in 1u32..(1u32 << s) {
        let u: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        match max_abs_charsum(&vectors, &u, budget) {
            Ok(rep) => records.push(record(&meta, s, digital.n, u, rep.max_abs, "charsum", rep.bound)),
            Err(Error::OracleTooLarge { candidates, budget }) => {
                eprintln!(
                    "charsum u={u:?}: {candidates} coefficient vectors exceed budget {budget}; skipped"
                );
                budget_hit = true;
            }
            Err(e) => return Err(e.into()),
        }
    }

    // Exact star discrepancy against the Erdos-Turan-Koksma style bound,
    // fed by the full-subset character-sum maximum.
    let full: Vec<usize> = (1..=s).collect();
    let full_charsum = records
        .iter()
        .find(|r| r.bound_kind == "charsum" && r.u == full)
        .map(|r| r.measured);
    match star_discrepancy_exact(&ps, budget) {
        Ok(d) => {
            if let Some(mc) = full_charsum {
                let bound = ipqmc::discrepancy::etk_bound(s, meta.q, digital.n, mc)?;
                records.push(record(&meta, s, digital.n, full.clone(), d.value_f64, "etk", bound));
            } else {
                eprintln!("etk record skipped: full-subset character sum unavailable");
            }
            // Weighted discrepancy against the closed-form construction bound.
            match weighted_star_discrepancy_exact(&ps, &weights, s, budget) {
                Ok(wd) => {
                    let bound = weighted_discrepancy_bound(
                        meta.construction,
                        &weights,
                        s,
                        meta.q,
                        meta.period,
                    )?;
                    records.push(record(&meta, s, digital.n, wd.argmax_u, wd.value, "weighted", bound));
                }
                Err(Error::BudgetExceeded { needed, budget })
                | Err(Error::OracleTooLarge { candidates: needed, budget }) => {
                    eprintln!("weighted discrepancy: {needed} corners exceed budget {budget}; skipped");
                    budget_hit = true;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::BudgetExceeded { needed, budget })
        | Err(Error::OracleTooLarge { candidates: needed, budget }) => {
            eprintln!("star discrepancy: {needed} corners exceed budget {budget}; skipped");
            budget_hit = true;
        }
        Err(e) => return Err(e.into()),
    }

    let held = records.iter().filter(|r| r.holds).count();
    let out = match a.format {
        FormatArg::Csv => records_csv(&records),
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&records)?;
            s.push('\n');
            s
        }
    };
    write_output(&a.out, &out)?;
    let note = if budget_hit { "; budget exceeded on skipped records" } else { "" };
    eprintln!("verify: {held}/{} records hold{note}", records.len());
    if budget_hit || held < records.len() {
        Ok(EXIT_VERIFY)
    } else {
        Ok(EXIT_OK)
    }
}

fn record(
    meta: &SetMeta,
    s: usize,
    n: usize,
    u: Vec<usize>,
    measured: f64,
    kind: &str,
    bound: f64,
) -> ExperimentRecord {
    ExperimentRecord {
        q: meta.q,
        p: meta.p,
        k: meta.k,
        s,
        n,
        construction: meta.construction,
        u,
        measured,
        bound_kind: kind.into(),
        bound,
        holds: measured <= bound,
    }
}

fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("q,p,k,s,N,construction,u,measured,bound_kind,bound,holds\n");
    for r in records {
        let u = r
            .u
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("+");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.16e},{},{:.16e},{}",
            r.q, r.p, r.k, r.s, r.n, r.construction, u, r.measured, r.bound_kind, r.bound, r.holds
        )
        .unwrap();
    }
    out
}

fn cmd_charsum(a: CharsumArgs) -> Result<i32, CliError> {
    let field = a.field.spec()?;
    let budget = resolve_budget(a.budget)?;
    let (vectors, _, _) = build_set(field, &a.cons, Some(a.s), &None, &None)?;
    let u: Vec<usize> = match &a.u {
        Some(list) => parse_list(list, "coordinate index")?,
        None => (1..=a.s).collect(),
    };
    let rep = match a.samples {
        None => max_abs_charsum(&vectors, &u, budget)?,
        Some(k) => sampled_max_charsum(&vectors, &u, k, a.seed)?,
    };
    let mut out = serde_json::to_string_pretty(&rep)?;
    out.push('\n');
    write_output(&a.out, &out)?;
    Ok(if rep.holds { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_disc(a: DiscArgs) -> Result<i32, CliError> {
    let field = a.field.spec()?;
    let budget = resolve_budget(a.budget)?;
    let (_, digital, meta) = build_set(field, &a.cons, Some(a.s), &None, &None)?;
    let ps = digital.to_rational();
    let d = star_discrepancy_exact(&ps, budget)?;
    let mut obj = serde_json::json!({
        "q": meta.q,
        "p": meta.p,
        "k": meta.k,
        "s": digital.s,
        "N": digital.n,
        "construction": meta.construction,
        "value": d.value.to_string(),
        "value_f64": d.value_f64,
        "witness": d.witness.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "witness_count": d.witness_count,
        "attainment": match d.attainment {
            Attainment::Closed => "closed",
            Attainment::Open => "open",
        },
    });
    let mut code = EXIT_OK;
    if let Some(spec) = &a.weights {
        let weights = parse_weights(spec)?;
        let max_order = a.max_order.unwrap_or(digital.s);
        let wd = weighted_star_discrepancy_exact(&ps, &weights, max_order, budget)?;
        let bound =
            weighted_discrepancy_bound(meta.construction, &weights, digital.s, meta.q, meta.period)?;
        let holds = wd.value <= bound;
        obj["weighted"] = serde_json::json!({
            "value": wd.value,
            "argmax_u": wd.argmax_u,
            "complete": wd.complete,
            "bound": bound,
            "holds": holds,
        });
        if !holds {
            code = EXIT_VERIFY;
        }
    }
    let mut out = serde_json::to_string_pretty(&obj)?;
    out.push('\n');
    write_output(&a.out, &out)?;
    Ok(code)
}

fn cmd_integrate(a: IntegrateArgs) -> Result<i32, CliError> {
    let (integrand, params) = resolve_integrand(&a.amp)?;
    let rep = integrate_on_size_q(a.q, &integrand, &params)?;
    let mut out = serde_json::to_string_pretty(&rep)?;
    out.push('\n');
    write_output(&a.out, &out)?;
    Ok(if rep.holds { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_sweep(a: SweepArgs) -> Result<i32, CliError> {
    let (integrand, params) = resolve_integrand(&a.amp)?;
    let mut qs: Vec<u64> = parse_list(&a.q_list, "q")?;
    qs.sort_unstable();
    qs.dedup();
    let sweep = convergence_sweep(&qs, &integrand, &params)?;
    let out = match a.format {
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&sweep)?;
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            let mut s = String::new();
            writeln!(s, "# parity: {}", parity_name(integrand.parity)).unwrap();
            match sweep.slope {
                Some(sl) => writeln!(s, "# slope: {sl:.16e}").unwrap(),
                None => writeln!(s, "# slope: -").unwrap(),
            }
            writeln!(s, "# all_hold: {}", sweep.all_hold).unwrap();
            writeln!(s, "q,N,s,alpha,t,error,bound,norm_upper,holds").unwrap();
            for r in &sweep.records {
                writeln!(
                    s,
                    "{},{},{},{},{},{:.16e},{:.16e},{:.16e},{}",
                    r.q,
                    r.n,
                    r.s,
                    r.alpha,
                    fmt_t(r.t),
                    r.error,
                    r.bound,
                    r.norm_upper,
                    r.holds
                )
                .unwrap();
            }
            s
        }
    };
    write_output(&a.out, &out)?;
    Ok(if sweep.all_hold { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_inverse_eps(a: InverseEpsArgs) -> Result<i32, CliError> {
    let r = min_q_for_eps(a.eps, a.delta, a.c)?;
    let mut out = serde_json::to_string_pretty(&r)?;
    out.push('\n');
    write_output(&a.out, &out)?;
    Ok(EXIT_OK)
}

fn resolve_integrand(a: &AmplitudeArgs) -> Result<(CosProdIntegrand, ClassParams), CliError> {
    let amplitudes = match (&a.amplitudes, &a.power) {
        (Some(list), None) => {
            let v: Vec<f64> = parse_list(list, "amplitude")?;
            if let Some(s) = a.s {
                if s != v.len() {
                    return Err(CliError::Msg(format!(
                        "--s {s} conflicts with {} entries in --amplitudes",
                        v.len()
                    )));
                }
            }
            v
        }
        (None, Some(pw)) => {
            let s = a
                .s
                .ok_or_else(|| CliError::Msg("--s is required with --power".into()))?;
            let (c, exp) = parse_power(pw)?;
            power_amplitudes(s, c, exp)
        }
        _ => {
            return Err(CliError::Msg(
                "give exactly one of --amplitudes or --power".into(),
            ))
        }
    };
    let parity = match a.parity {
        ParityArg::Fourier => Parity::Fourier,
        ParityArg::Cosine => Parity::Cosine,
    };
    let params = ClassParams::new(a.alpha, parse_t(&a.t)?)?;
    Ok((CosProdIntegrand::new(amplitudes, parity)?, params))
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Fourier => "fourier",
        Parity::Cosine => "cosine",
    }
}

fn fmt_t(t: f64) -> String {
    if t.is_infinite() {
        "inf".into()
    } else {
        format!("{t}")
    }
}

fn parse_t(s: &str) -> Result<f64, CliError> {
    let lower = s.trim().to_ascii_lowercase();
    if lower == "inf" || lower == "infinity" || lower == "+inf" {
        return Ok(f64::INFINITY);
    }
    lower
        .parse()
        .map_err(|_| CliError::Msg(format!("invalid --t value '{s}' (expected a float or \"inf\")")))
}

/// Parses the weight mini-language: const:c, power:c/j^a, explicit:@file.json
/// (a JSON array of {"u": [...], "gamma": ...} entries).
fn parse_weights(spec: &str) -> Result<WeightSpec, CliError> {
    let bad = |msg: &str| {
        CliError::Msg(format!(
            "invalid --weights '{spec}': {msg} (expected const:c, power:c/j^a, or explicit:@file.json)"
        ))
    };
    let ws = if let Some(rest) = spec.strip_prefix("const:") {
        let c = rest.parse().map_err(|_| bad("bad constant"))?;
        WeightSpec::Const { c }
    } else if let Some(rest) = spec.strip_prefix("power:") {
        let (c, a) = parse_power(rest)?;
        WeightSpec::Power { c, a }
    } else if let Some(path) = spec.strip_prefix("explicit:@") {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Msg(format!("cannot read weights file '{path}': {e}")))?;
        let entries: Vec<SubsetWeight> = serde_json::from_str(&text)
            .map_err(|e| CliError::Msg(format!("bad weights file '{path}': {e}")))?;
        WeightSpec::Explicit { entries }
    } else {
        return Err(bad("unknown kind"));
    };
    ws.validate()?;
    Ok(ws)
}

/// Parses "c/j^a" into (c, a).
fn parse_power(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Msg(format!("invalid power form '{s}' (expected c/j^a)"));
    let (c_str, a_str) = s.split_once("/j^").ok_or_else(bad)?;
    let c = c_str.trim().parse().map_err(|_| bad())?;
    let a = a_str.trim().parse().map_err(|_| bad())?;
    Ok((c, a))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| CliError::Msg(format!("invalid {what} '{}'", tok.trim())))
        })
        .collect()
}

/// Budget precedence: --budget flag, then IPQMC_BUDGET, then the default.
fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("IPQMC_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Msg(format!("IPQMC_BUDGET must be a nonnegative integer, got '{v}'"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ORACLE_BUDGET),
        Err(e) => Err(CliError::Msg(format!("cannot read IPQMC_BUDGET: {e}"))),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn join_u64(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn opt_u64(v: Option<u64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "-".into(),
    }
}
