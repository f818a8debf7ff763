//! Command-line front end.
//!
//! Exit codes: 0 on success (every check passed), 1 when a verification
//! fails, 2 on a usage error.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::enumeration::{self, BasisFamily, ClassTag};
use crate::identities::{
    self, IdentityId, Options, Param, Params, PartialSum, Theorem, VerificationReport, WReading,
    BRUTE_FORCE_GUARD,
};
use crate::overpartition::{Convention, Entry, Overpartition};
use crate::separable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qpl", version, about = "Overpartition statistics and exact q-series identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check identities of the catalog against each other and brute force
    Verify(VerifyArgs),
    /// List overpartitions of n, one per line
    Enum(EnumArgs),
    /// Compute a statistic of one overpartition
    Stat(StatArgs),
    /// List the basis elements with m parts
    Basis(BasisArgs),
    /// Split an overpartition into basis element and padding
    Decompose(DecomposeArgs),
    /// Print a statistic for every overpartition of n
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Identity id (I1..I19) or a theorem check (Thm2_1, Thm2_2)
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    identity: Option<String>,
    /// Run every identity over its default parameter grid
    #[arg(long)]
    all: bool,
    #[arg(long, env = "QPL_TRUNC", default_value_t = identities::DEFAULT_TRUNC)]
    trunc: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Read w(n) in the maes formula as 1 + 2q^n instead of omega(n)
    #[arg(long)]
    alt_w: bool,
    /// Use omega(n;∞)(-q;q)_(n-1)/(q;q)_(n-1) for the largest-repeating-size partial sums
    #[arg(long)]
    direct_partial_sum: bool,
    /// Print the compared series after the report
    #[arg(long, conflicts_with = "all")]
    dump: bool,
}

impl VerifyArgs {
    fn params(&self) -> Params {
        let mut p = Params::default();
        let given = [
            (Param::R, self.r),
            (Param::K, self.k),
            (Param::N, self.n),
            (Param::M, self.m),
            (Param::S, self.s),
            (Param::J, self.j),
            (Param::A, self.a),
            (Param::B, self.b),
        ];
        for (param, v) in given {
            if let Some(v) = v {
                p.set(param, v);
            }
        }
        p
    }

    fn options(&self) -> Options {
        Options {
            w_reading: if self.alt_w {
                WReading::OmegaAtROne
            } else {
                WReading::Omega
            },
            partial_sum: if self.direct_partial_sum {
                PartialSum::Direct
            } else {
                PartialSum::Printed
            },
        }
    }
}

#[derive(Debug, Args)]
struct EnumArgs {
    #[arg(long)]
    n: usize,
    /// all, L or F
    #[arg(long, default_value = "all")]
    class: String,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatKind {
    Mes,
    Maes,
    Conjugate,
    Lrs,
    Sprs,
}

#[derive(Debug, Args)]
struct StatArgs {
    /// Comma-separated sizes, "~" marks an overline, e.g. "3~,1"
    #[arg(long, allow_hyphen_values = true)]
    parts: String,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, value_enum)]
    stat: StatKind,
}

#[derive(Debug, Args)]
struct BasisArgs {
    #[arg(long)]
    family: BasisFamily,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long, allow_hyphen_values = true)]
    parts: String,
    #[arg(long)]
    family: BasisFamily,
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableStat {
    Mes,
    Maes,
    Conjugate,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    stat: TableStat,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long)]
    n: usize,
    /// Skip rows whose statistic is zero
    #[arg(long)]
    nonzero: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<identities::IdentityError> for CliError {
    fn from(e: identities::IdentityError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Enum(a) => cmd_enum(&a, out),
        Command::Stat(a) => cmd_stat(&a, out),
        Command::Basis(a) => cmd_basis(&a, out),
        Command::Decompose(a) => cmd_decompose(&a, out),
        Command::Table(a) => cmd_table(&a, out),
    };
    match result.and_then(|code| out.flush().map(|_| code).map_err(CliError::from)) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.params();
    let reports = if a.all {
        if params != Params::default() {
            return usage("--all runs the default grids and takes no parameter flags");
        }
        identities::verify_all(a.trunc, a.options())?
    } else {
        let name = a.identity.as_deref().expect("clap enforces --identity or --all");
        if let Ok(thm) = name.parse::<Theorem>() {
            if a.dump {
                return usage("--dump applies to catalog identities only");
            }
            let extra = Params { n: None, r: None, ..params };
            if extra != Params::default() {
                return usage(format!("{thm} takes only --n and --r"));
            }
            let n = params.n.unwrap_or(a.trunc.min(BRUTE_FORCE_GUARD));
            vec![identities::theorem_count_check(thm, n, params.r.unwrap_or(2))?]
        } else {
            let id: IdentityId = name.parse()?;
            let report = identities::verify_with(id, &params, a.trunc, a.options())?;
            let reports = vec![report];
            write_reports(&reports, a.format, out)?;
            if a.dump {
                write_dump(id, &params, a.trunc, a.options(), out)?;
            }
            return Ok(exit_for(&reports));
        }
    };
    write_reports(&reports, a.format, out)?;
    Ok(exit_for(&reports))
}

fn exit_for(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(VerificationReport::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn params_text(p: &Params) -> String {
    let s = p.to_string();
    if s.is_empty() {
        "-".to_string()
    } else {
        s
    }
}

fn write_reports(reports: &[VerificationReport], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        Format::Tsv => {
            writeln!(out, "identity\tparams\ttrunc\tstatus\tmismatches")?;
            for r in reports {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.identity,
                    params_text(&r.params),
                    r.trunc,
                    r.status,
                    r.mismatches.len()
                )?;
            }
        }
        Format::Text => {
            for r in reports {
                write!(out, "{} {} N={} {}", r.identity, params_text(&r.params), r.trunc, r.status)?;
                if r.passed() {
                    writeln!(out)?;
                    continue;
                }
                writeln!(out, " ({} mismatches)", r.mismatches.len())?;
                for m in r.mismatches.iter().take(5) {
                    match m.z {
                        Some(z) => writeln!(out, "  z^{z} q^{}: lhs={} rhs={}", m.q, m.lhs, m.rhs)?,
                        None => writeln!(out, "  q^{}: lhs={} rhs={}", m.q, m.lhs, m.rhs)?,
                    }
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if reports.len() > 1 {
                writeln!(out, "{} checks, {} failed", reports.len(), failed)?;
            }
        }
    }
    Ok(())
}

fn write_dump(id: IdentityId, params: &Params, trunc: usize, options: Options, out: &mut dyn Write) -> Result<(), CliError> {
    let closed = identities::closed_form_with(id, params, trunc, options)?;
    if let Some(lhs) = &closed.lhs {
        writeln!(out, "## closed lhs")?;
        out.write_all(lhs.dump().as_bytes())?;
    }
    writeln!(out, "## closed rhs")?;
    out.write_all(closed.rhs.dump().as_bytes())?;
    if id.has_combinatorial_side() {
        let brute = identities::brute_force(id, params, trunc)?;
        writeln!(out, "## brute force")?;
        out.write_all(brute.dump().as_bytes())?;
    }
    Ok(())
}

fn parse_class(class: &str, k: Option<usize>) -> Result<ClassTag, CliError> {
    let need_k = || match k {
        Some(0) => usage("--k must be positive"),
        Some(k) => Ok(k),
        None => usage(format!("--class {class} needs --k")),
    };
    match class.to_ascii_lowercase().as_str() {
        "all" => {
            if k.is_some() {
                return usage("--k applies only to --class L or F");
            }
            Ok(ClassTag::AllOverpartitions)
        }
        "l" => Ok(ClassTag::L(need_k()?)),
        "f" => Ok(ClassTag::F(need_k()?)),
        other => usage(format!("unknown class {other:?} (expected all, L or F)")),
    }
}

fn check_weight(n: usize) -> Result<(), CliError> {
    if n > BRUTE_FORCE_GUARD {
        return usage(format!("n={n} exceeds the enumeration limit {BRUTE_FORCE_GUARD}"));
    }
    Ok(())
}

fn cmd_enum(a: &EnumArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let tag = parse_class(&a.class, a.k)?;
    check_weight(a.n)?;
    for pi in enumeration::enumerate_class(a.n, tag) {
        writeln!(out, "{pi}")?;
    }
    Ok(EXIT_OK)
}

fn parse_parts(text: &str, convention: Convention) -> Result<Overpartition, CliError> {
    Overpartition::parse(text, convention).map_err(|e| CliError::Usage(format!("malformed overpartition {text:?}: {e}")))
}

fn positive_r(r: usize) -> Result<usize, CliError> {
    if r == 0 {
        return usage("--r must be positive");
    }
    Ok(r)
}

fn cmd_stat(a: &StatArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pi = parse_parts(&a.parts, Convention::LastOccurrence)?;
    let r = positive_r(a.r)?;
    match a.stat {
        StatKind::Mes => writeln!(out, "{}", pi.mes(r))?,
        StatKind::Maes => writeln!(out, "{}", pi.maes(r))?,
        StatKind::Conjugate => writeln!(out, "{}", pi.conjugate())?,
        StatKind::Lrs => writeln!(out, "{}", pi.largest_repeating_size(r))?,
        StatKind::Sprs => match pi.smallest_positive_repeating_size(r) {
            Some(j) => writeln!(out, "{j}")?,
            None => writeln!(out, "none")?,
        },
    }
    Ok(EXIT_OK)
}

fn cmd_basis(a: &BasisArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.k == 0 {
        return usage("--k must be positive");
    }
    if a.m > 24 {
        return usage("--m is limited to 24 parts");
    }
    for lam in enumeration::basis_elements(a.family, a.k, a.m) {
        writeln!(out, "{lam}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_decompose(a: &DecomposeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.k == 0 {
        return usage("--k must be positive");
    }
    let pi = parse_parts(&a.parts, a.family.convention())?;
    let w = separable::decompose(&pi, a.family, a.k).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{}", w.basis)?;
    let padding: Vec<String> = w.padding.iter().map(usize::to_string).collect();
    writeln!(out, "{}", padding.join(","))?;
    Ok(EXIT_OK)
}

/// Overpartitions of `n` in table order: partitions in decreasing
/// lexicographic order, then overline patterns counted in binary with the
/// largest size as the lowest bit.
pub fn table_order(n: usize) -> Vec<Overpartition> {
    let mut shapes: Vec<Vec<(usize, usize)>> = Vec::new();
    enumeration::for_each_partition_multiplicities(n, |pm| shapes.push(pm.to_vec()));
    let expand = |pm: &[(usize, usize)]| -> Vec<usize> {
        pm.iter().flat_map(|&(size, mult)| std::iter::repeat_n(size, mult)).collect()
    };
    shapes.sort_by_key(|pm| std::cmp::Reverse(expand(pm)));
    let mut out = Vec::new();
    for pm in shapes {
        for mask in 0u64..(1u64 << pm.len()) {
            let entries = pm
                .iter()
                .enumerate()
                .map(|(i, &(size, multiplicity))| Entry {
                    size,
                    multiplicity,
                    overlined: mask >> i & 1 == 1,
                })
                .collect();
            out.push(Overpartition::from_entries(entries, Convention::LastOccurrence));
        }
    }
    out
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    check_weight(a.n)?;
    let r = positive_r(a.r)?;
    for pi in table_order(a.n) {
        match a.stat {
            TableStat::Mes | TableStat::Maes => {
                let v = if a.stat == TableStat::Mes { pi.mes(r) } else { pi.maes(r) };
                if a.nonzero && v == 0 {
                    continue;
                }
                writeln!(out, "{pi}\t{v}")?;
            }
            TableStat::Conjugate => writeln!(out, "{pi}\t{}", pi.conjugate())?,
        }
    }
    Ok(EXIT_OK)
}
