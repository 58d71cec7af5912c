//! Command-line surface. All output is plain text, deterministic, with
//! machine-readable exit codes:
//!
//! * 0 success
//! * 2 validation failure (input data violates an invariant)
//! * 3 unsupported request (e.g. full twisted spectrum for n = 5, or a
//!   construction that needs modular data on degenerate input)
//! * 4 parse / IO / usage error

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::catalog::{
    self, builtin, format_dim, load_category_file, CatalogError, ExportFormat,
};
use crate::expr::{self, ExprError};
use crate::modular::ModularData;
use crate::orbifold::{
    dim_twisted_soliton_space, full_spectrum, grading_dim_squares, sigma_power_for_branch,
    untwisted_spectrum, OrbifoldError, SectorKind,
};
use crate::soliton::{cyclic_symmetry_check, vacuum_channel, SolitonError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// Captured run of the command-line interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(
    name = "cyclorb",
    about = "Sector spectra of cyclic permutation orbifolds from modular fusion data",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Name of a built-in category.
    #[arg(long)]
    catalog: Option<String>,
    /// Path to a category file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a category file or builtin against all invariants.
    Validate {
        /// Builtin name or file path.
        source: String,
    },
    /// Summarize a category: labels, twists, charge, modularity.
    Info {
        #[command(flatten)]
        source: Source,
    },
    /// Quantum dimensions and the global index.
    Dims {
        #[command(flatten)]
        source: Source,
    },
    /// The modular S-matrix.
    Smatrix {
        #[command(flatten)]
        source: Source,
    },
    /// Full orbifold sector spectrum for n in {2, 3, 4}.
    Orbifold {
        #[command(flatten)]
        source: Source,
        /// Orbifold order.
        #[arg(long)]
        n: usize,
        /// Only the untwisted sectors (available for any n >= 2).
        #[arg(long)]
        untwisted_only: bool,
        /// Output format: table or records.
        #[arg(long, default_value = "table")]
        format: String,
        /// Branch-matching power k(1), coprime to n (report bookkeeping only).
        #[arg(long, default_value_t = 1)]
        k_one: usize,
    },
    /// Vacuum-channel decomposition of the n-fold soliton.
    VacuumChannel {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    /// Evaluate a sector expression (soliton algebra uses n = 2).
    Solitons {
        #[command(flatten)]
        source: Source,
        /// Expression, e.g. "pi[sigma] * pi[1]" or "hom(sigma*sigma; eps)".
        #[arg(long)]
        eval: String,
    },
    /// Dimension of the twisted soliton space for any n >= 2.
    WtDim {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = match e {
            CatalogError::Invariant { .. } => EXIT_INVALID,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OrbifoldError> for Failure {
    fn from(e: OrbifoldError) -> Self {
        let code = match e {
            OrbifoldError::UnsupportedN { .. }
            | OrbifoldError::TooSmallN
            | OrbifoldError::ZeroN
            | OrbifoldError::NotModular { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SolitonError> for Failure {
    fn from(e: SolitonError) -> Self {
        let code = match e {
            SolitonError::CompositionUnsupported(_)
            | SolitonError::GeneralConjugation { .. }
            | SolitonError::TooSmallN => EXIT_UNSUPPORTED,
            SolitonError::Orbifold(inner) => return Failure::from(inner),
            SolitonError::Fusion(_) => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Soliton(inner) => Failure::from(inner),
            other => Failure::new(EXIT_USAGE, other.to_string()),
        }
    }
}

/// Run the CLI on explicit arguments (excluding the program name) and
/// capture the result.
pub fn run<I, S>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv = vec!["cyclorb".to_owned()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => CliOutcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };

    let mut stdout = String::new();
    let mut stderr = String::new();
    let code = match dispatch(cli.command, &mut stdout, &mut stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            writeln!(stderr, "error: {}", f.message).unwrap();
            f.code
        }
    };
    CliOutcome {
        code,
        stdout,
        stderr,
    }
}

fn load_source(source: &Source, warn: &mut String) -> Result<ModularData, Failure> {
    match (&source.catalog, &source.input) {
        (Some(name), None) => Ok(builtin(name)?),
        (None, Some(path)) => {
            let (md, warnings) = load_category_file(path)?;
            for w in warnings {
                writeln!(warn, "warning: {w}").unwrap();
            }
            Ok(md)
        }
        (None, None) => Err(Failure::new(
            EXIT_USAGE,
            "select a category with --catalog <name> or --input <path>",
        )),
        (Some(_), Some(_)) => Err(Failure::new(
            EXIT_USAGE,
            "--catalog and --input are mutually exclusive",
        )),
    }
}

fn dispatch(command: Command, out: &mut String, err: &mut String) -> Result<(), Failure> {
    match command {
        Command::Validate { source } => cmd_validate(&source, out, err),
        Command::Info { source } => {
            let md = load_source(&source, err)?;
            cmd_info(&md, out)
        }
        Command::Dims { source } => {
            let md = load_source(&source, err)?;
            cmd_dims(&md, out)
        }
        Command::Smatrix { source } => {
            let md = load_source(&source, err)?;
            cmd_smatrix(&md, out)
        }
        Command::Orbifold {
            source,
            n,
            untwisted_only,
            format,
            k_one,
        } => {
            let md = load_source(&source, err)?;
            cmd_orbifold(&md, n, untwisted_only, &format, k_one, out)
        }
        Command::VacuumChannel { source, n } => {
            let md = load_source(&source, err)?;
            cmd_vacuum_channel(&md, n, out)
        }
        Command::Solitons { source, eval } => {
            let md = load_source(&source, err)?;
            cmd_solitons(&md, &eval, out)
        }
        Command::WtDim { source, n } => {
            let md = load_source(&source, err)?;
            cmd_wt_dim(&md, n, out)
        }
    }
}

fn cmd_validate(source: &str, out: &mut String, err: &mut String) -> Result<(), Failure> {
    let spec = if catalog::list_builtin().iter().any(|n| n == source) {
        catalog::builtin_spec(source)?
    } else {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("[E_IO] {source}: {e}")))?;
        let (spec, warnings) = catalog::parse_spec(&text)?;
        for w in warnings {
            writeln!(err, "warning: {w}").unwrap();
        }
        spec
    };
    writeln!(out, "category: {}", spec.name).unwrap();
    let md = spec.to_modular()?;
    let report = md.ring().validate();
    write!(out, "{report}").unwrap();
    writeln!(out, "check unit_twist: PASS").unwrap();
    writeln!(out, "check conjugate_twist: PASS").unwrap();
    let modularity = md.is_modular();
    writeln!(
        out,
        "modular: {} (max |S S* - 1| = {:.3e})",
        if modularity.modular { "yes" } else { "NO" },
        modularity.max_deviation
    )
    .unwrap();
    if modularity.modular {
        let verlinde = md.verlinde_roundtrip().map_err(|e| {
            Failure::new(EXIT_INVALID, format!("[E_INVARIANT] verlinde: {e}"))
        })?;
        if !verlinde.matches {
            return Err(Failure::new(
                EXIT_INVALID,
                format!(
                    "[E_INVARIANT] verlinde roundtrip does not reproduce the fusion tensor \
                     (max deviation {:.3e})",
                    verlinde.max_deviation
                ),
            ));
        }
        writeln!(
            out,
            "verlinde roundtrip: PASS (max deviation {:.3e})",
            verlinde.max_deviation
        )
        .unwrap();
        writeln!(
            out,
            "gauss sum: {}",
            if md.gauss_sum_check() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        if !md.gauss_sum_check() {
            return Err(Failure::new(
                EXIT_INVALID,
                "[E_INVARIANT] gauss sum does not match the central charge mod 8",
            ));
        }
    } else {
        writeln!(out, "verlinde roundtrip: SKIPPED (not modular)").unwrap();
        writeln!(out, "gauss sum: SKIPPED (not modular)").unwrap();
    }
    Ok(())
}

fn cmd_info(md: &ModularData, out: &mut String) -> Result<(), Failure> {
    writeln!(out, "category: {}", md.name()).unwrap();
    writeln!(out, "labels: {}", md.ring().labels().join(", ")).unwrap();
    writeln!(out, "unit: {}", md.ring().label(0)).unwrap();
    let conj: Vec<String> = (0..md.len())
        .map(|a| format!("{}->{}", md.ring().label(a), md.ring().label(md.ring().conj(a))))
        .collect();
    writeln!(out, "conjugation: {}", conj.join(", ")).unwrap();
    let twists: Vec<String> = (0..md.len())
        .map(|a| format!("h({}) = {}", md.ring().label(a), md.twist(a)))
        .collect();
    writeln!(out, "twists: {}", twists.join(", ")).unwrap();
    writeln!(
        out,
        "central charge c = {}",
        crate::rational::format_rational(&md.central_charge())
    )
    .unwrap();
    writeln!(out, "global index mu = {}", format_dim(md.global_index())).unwrap();
    let modularity = md.is_modular();
    writeln!(
        out,
        "modular: {} (max |S S* - 1| = {:.3e})",
        if modularity.modular { "yes" } else { "NO" },
        modularity.max_deviation
    )
    .unwrap();
    writeln!(
        out,
        "gauss sum: {}",
        if md.gauss_sum_check() { "PASS" } else { "FAIL" }
    )
    .unwrap();
    Ok(())
}

fn cmd_dims(md: &ModularData, out: &mut String) -> Result<(), Failure> {
    writeln!(out, "category: {}", md.name()).unwrap();
    let width = md
        .ring()
        .labels()
        .iter()
        .map(|l| l.len())
        .max()
        .unwrap_or(5)
        .max("label".len());
    writeln!(out, "{:<width$}  dim", "label").unwrap();
    for a in 0..md.len() {
        writeln!(out, "{:<width$}  {}", md.ring().label(a), format_dim(md.dim(a))).unwrap();
    }
    writeln!(out, "global index mu = {}", format_dim(md.global_index())).unwrap();
    Ok(())
}

fn format_complex(z: num_complex::Complex64) -> String {
    // snap sub-resolution noise so signs of rounding dust stay stable
    let clamp = |x: f64| if x.abs() < 5e-10 { 0.0 } else { x };
    format!("{:+.9}{:+.9}i", clamp(z.re), clamp(z.im))
}

fn cmd_smatrix(md: &ModularData, out: &mut String) -> Result<(), Failure> {
    writeln!(out, "category: {}", md.name()).unwrap();
    let s = md.s_matrix();
    for row in &s {
        let cells: Vec<String> = row.iter().map(|&z| format_complex(z)).collect();
        writeln!(out, "{}", cells.join("  ")).unwrap();
    }
    Ok(())
}

fn cmd_orbifold(
    md: &ModularData,
    n: usize,
    untwisted_only: bool,
    format: &str,
    k_one: usize,
    out: &mut String,
) -> Result<(), Failure> {
    let format = match format {
        "table" => ExportFormat::Table,
        "records" => ExportFormat::Records,
        other => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("unknown format '{other}' (expected table or records)"),
            ))
        }
    };
    let mu = md.global_index();
    if untwisted_only {
        let sectors = untwisted_spectrum(md, n)?;
        let sum: f64 = sectors.iter().map(|s| s.dim * s.dim).sum();
        let target = n as f64 * mu.powi(n as i32);
        write_header(md, n, mu, format, out);
        out.push_str(&catalog::export_spectrum(md, &sectors, format));
        write_sum_line(
            "untwisted",
            None,
            sum,
            "n*mu^n",
            target,
            format,
            out,
        );
        return Ok(());
    }
    sigma_power_for_branch(n.max(1), 1, k_one)
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let (sectors, completeness) = full_spectrum(md, n)?;
    write_header(md, n, mu, format, out);
    out.push_str(&catalog::export_spectrum(md, &sectors, format));
    write_sum_line(
        "completeness",
        None,
        completeness.sum_dim_sq,
        "n^2*mu^n",
        completeness.target,
        format,
        out,
    );
    let per_grading = grading_dim_squares(&sectors, n);
    let grading_target = n as f64 * mu.powi(n as i32);
    for (g, sum) in per_grading.iter().enumerate() {
        write_sum_line("grading", Some(g), *sum, "n*mu^n", grading_target, format, out);
    }
    if format == ExportFormat::Table {
        writeln!(
            out,
            "branch matching: twisted branch j corresponds to dual automorphism power \
             j*k(1) mod n, k(1) = {k_one}"
        )
        .unwrap();
        if n == 4 {
            let mut notes: Vec<(String, f64, f64)> = Vec::new();
            for s in &sectors {
                if let Some(alt) = s.alternate_dim() {
                    let tag = match &s.kind {
                        SectorKind::HalfTwistedDiag { label, .. } => {
                            format!("half-diag ({0},{0})", md.ring().label(*label))
                        }
                        SectorKind::HalfTwistedPair { pair, .. } => format!(
                            "half-pair {{{},{}}}",
                            md.ring().label(pair.0),
                            md.ring().label(pair.1)
                        ),
                        _ => unreachable!(),
                    };
                    if !notes.iter().any(|(t, _, _)| *t == tag) {
                        notes.push((tag, s.dim, alt));
                    }
                }
            }
            if !notes.is_empty() {
                writeln!(
                    out,
                    "note: an alternative index normalization doubles each half-twisted \
                     dimension; the completeness identity forces the displayed values:"
                )
                .unwrap();
                for (tag, displayed, alternative) in notes {
                    writeln!(
                        out,
                        "  {tag}: displayed {}  alternative {}",
                        format_dim(displayed),
                        format_dim(alternative)
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(())
}

fn write_header(md: &ModularData, n: usize, mu: f64, format: ExportFormat, out: &mut String) {
    if format == ExportFormat::Table {
        writeln!(out, "category: {}", md.name()).unwrap();
        writeln!(out, "n = {n}").unwrap();
        writeln!(out, "mu = {}", format_dim(mu)).unwrap();
    }
}

fn write_sum_line(
    name: &str,
    grading: Option<usize>,
    sum: f64,
    target_name: &str,
    target: f64,
    format: ExportFormat,
    out: &mut String,
) {
    let pass = (sum - target).abs() / target < crate::orbifold::COMPLETENESS_TOLERANCE;
    match format {
        ExportFormat::Table => {
            let prefix = match grading {
                Some(g) => format!("{name} {g}"),
                None => name.to_owned(),
            };
            writeln!(
                out,
                "{prefix}: sum d^2 = {}  target {target_name} = {}  {}",
                format_dim(sum),
                format_dim(target),
                if pass { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        ExportFormat::Records => {
            let mut record = serde_json::Map::new();
            record.insert("summary".into(), name.into());
            if let Some(g) = grading {
                record.insert("grading".into(), g.into());
            }
            record.insert("sum_dim_sq".into(), format_dim(sum).into());
            record.insert("target".into(), format_dim(target).into());
            record.insert("pass".into(), pass.into());
            writeln!(out, "{}", serde_json::Value::Object(record)).unwrap();
        }
    }
}

fn cmd_vacuum_channel(md: &ModularData, n: usize, out: &mut String) -> Result<(), Failure> {
    let channel = vacuum_channel(md, n)?;
    writeln!(out, "category: {}", md.name()).unwrap();
    writeln!(out, "n = {n}").unwrap();
    writeln!(out, "vacuum channel: {}", channel.format(md)).unwrap();
    let total = channel.dim(md);
    let target = md.global_index().powi(n as i32 - 1);
    let pass = (total - target).abs() / target < crate::orbifold::COMPLETENESS_TOLERANCE;
    writeln!(
        out,
        "total dim = {}  target mu^(n-1) = {}  {}",
        format_dim(total),
        format_dim(target),
        if pass { "PASS" } else { "FAIL" }
    )
    .unwrap();
    let symmetric = cyclic_symmetry_check(md, n)?;
    writeln!(
        out,
        "cyclic symmetry: {}",
        if symmetric { "PASS" } else { "FAIL" }
    )
    .unwrap();
    Ok(())
}

fn cmd_solitons(md: &ModularData, eval_text: &str, out: &mut String) -> Result<(), Failure> {
    let ast = expr::parse_expr(eval_text)?;
    let value = expr::eval(md, &ast)?;
    writeln!(out, "category: {}", md.name()).unwrap();
    writeln!(out, "expr: {ast}").unwrap();
    writeln!(out, "value: {}", expr::format_value(md, &value)).unwrap();
    Ok(())
}

fn cmd_wt_dim(md: &ModularData, n: usize, out: &mut String) -> Result<(), Failure> {
    let dim = dim_twisted_soliton_space(md, n)?;
    writeln!(out, "category: {}", md.name()).unwrap();
    writeln!(out, "n = {n}").unwrap();
    writeln!(out, "twisted soliton space dimension = {dim}").unwrap();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> CliOutcome {
        run(args.iter().map(|s| s.to_string()))
    }

    #[test]
    fn validate_builtin_ok() {
        let out = run_vec(&["validate", "Trivial:0"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("check associativity: PASS"));
    }

    #[test]
    fn unknown_builtin_is_usage_error() {
        let out = run_vec(&["info", "--catalog", "Nope"]);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("Ising"));
    }

    #[test]
    fn orbifold_unsupported_n() {
        let out = run_vec(&["orbifold", "--catalog", "Ising", "--n", "5"]);
        assert_eq!(out.code, EXIT_UNSUPPORTED);
    }

    #[test]
    fn orbifold_untwisted_any_n() {
        let out = run_vec(&[
            "orbifold",
            "--catalog",
            "Ising",
            "--n",
            "5",
            "--untwisted-only",
        ]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("untwisted: sum d^2"));
    }

    #[test]
    fn missing_source_is_usage_error() {
        let out = run_vec(&["dims"]);
        assert_eq!(out.code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let out = run_vec(&["--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("orbifold"));
    }
}
