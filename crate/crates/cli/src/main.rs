//! `acd`: build permutation groups, compute exact character tables and
//! check average-degree bounds over a catalog.
//!
//! Exit codes: 0 ok, 1 violations or failed checks, 2 configuration or parse
//! error, 3 resource cap exceeded.

mod scan;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use acd_core::catalog::{self, GroupSpec};
use acd_core::socle::{self, SocleShape, TopAction};
use acd_core::{character_table, conjugacy_classes, worked, Error, PermGroup};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scan::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Json(_) => 2,
            CliError::Core(e) if e.is_resource_cap() => 3,
            CliError::Core(
                Error::Parse { .. }
                | Error::Io(_)
                | Error::Unknown { .. }
                | Error::NotPrime(_)
                | Error::ValidationFailed(_)
                | Error::DegreeMismatch { .. }
                | Error::NotAPermutation { .. },
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "acd", version, about = "Exact character tables and average character degree checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the character table of one group.
    Table {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants and checks for one group.
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the two worked examples: `sym3-frobenius` (S3 x F_p) or `s4-wreath-s3` (S4 wr S3).
    Example {
        which: String,
        /// Prime for the S3 x F_p example.
        #[arg(long, default_value_t = 5)]
        p: u64,
        /// Also compute the full table of S4 wr S3.
        #[arg(long)]
        full_table: bool,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run checks over every group of a catalog manifest.
    Scan {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Largest group order that will be enumerated.
        #[arg(long, env = "ACD_CAP", default_value_t = acd_core::DEFAULT_ORDER_CAP)]
        cap: usize,
        /// Worker threads; each group runs on one thread.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Add wall-clock timings to the report.
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive replacement simulation over the tuples of a socle shape.
    SocleSim {
        /// Shape such as `A5^2` or `A5 x A6`.
        #[arg(long)]
        shape: String,
        /// Simple-group data file; the built-in pack (A5, A6, PSL(2,7)) by default.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Use the trivial top action instead of Aut(S) wr S_u.
        #[arg(long)]
        trivial_action: bool,
        #[arg(long, default_value_t = socle::DEFAULT_TUPLE_CAP)]
        cap: u128,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// symmetric, alternating, cyclic, dihedral, frobenius, affine, psl2,
    /// elementary-abelian or quaternion.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    /// A group expression such as `direct(symmetric(3), frobenius(5))`.
    #[arg(long)]
    expr: Option<String>,
    /// A group file: `degree: n` then one generator image list per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Largest group order that will be enumerated.
    #[arg(long, env = "ACD_CAP", default_value_t = acd_core::DEFAULT_ORDER_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Comma-separated checks (default: all).
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Exponent override `check=value`, e.g. `thmb=alpha` or `conjc=5/2`.
    #[arg(long)]
    exponent: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Tsv,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec, CliError> {
        let chosen = [self.family.is_some(), self.expr.is_some(), self.file.is_some()];
        if chosen.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Config("give exactly one of --family, --expr, --file".into()));
        }
        if let Some(e) = &self.expr {
            return Ok(GroupSpec::parse(e)?);
        }
        if let Some(f) = &self.file {
            return Ok(GroupSpec::File(f.clone()));
        }
        let family = self.family.as_deref().unwrap_or_default().to_ascii_lowercase().replace('_', "-");
        let need_n = || self.n.ok_or_else(|| CliError::Config(format!("--family {family} needs --n")));
        let need_p = || self.p.ok_or_else(|| CliError::Config(format!("--family {family} needs --p")));
        Ok(match family.as_str() {
            "symmetric" | "sym" => GroupSpec::Symmetric(need_n()?),
            "alternating" | "alt" => GroupSpec::Alternating(need_n()?),
            "cyclic" => GroupSpec::Cyclic(need_n()?),
            "dihedral" => GroupSpec::Dihedral(need_n()?),
            "frobenius" => GroupSpec::Frobenius(need_p()?),
            "affine" => GroupSpec::Affine(need_p()?, need_n()? as u64),
            "psl2" => GroupSpec::Psl2(need_p()?),
            "elementary-abelian" => GroupSpec::ElementaryAbelian(need_p()?, need_n()?),
            "quaternion" => GroupSpec::Quaternion,
            other => return Err(CliError::Config(format!("unknown family `{other}`"))),
        })
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct TableJson {
    order: usize,
    degrees: Vec<u64>,
    classes: Vec<ClassJson>,
    characters: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ClassJson {
    order: u64,
    size: usize,
    rep: String,
}

fn cmd_table(group: &GroupArgs, format: TextFormat, out: &Option<PathBuf>) -> Result<u8, CliError> {
    let g = group.spec()?.build_with_cap(group.cap)?;
    let classes = conjugacy_classes(&g);
    let table = character_table(&g, &classes)?;
    let text = match format {
        TextFormat::Text => {
            let degrees: Vec<String> = table.degrees().iter().map(|d| d.to_string()).collect();
            format!("degrees: {}\n{}", degrees.join(" "), table.export(&g))
        }
        TextFormat::Json => json(&TableJson {
            order: g.order(),
            degrees: table.degrees().to_vec(),
            classes: (0..classes.len())
                .map(|c| ClassJson {
                    order: classes.element_order(c) as u64,
                    size: classes.size(c),
                    rep: g.permutation(classes.rep(c)).to_string(),
                })
                .collect(),
            characters: (0..table.len()).map(|r| table.row(r).iter().map(|v| v.to_string()).collect()).collect(),
        })?,
    };
    emit(out, &text)?;
    Ok(0)
}

fn run_config(run: &RunArgs, cap: usize, jobs: usize, timings: bool) -> Result<RunConfig, CliError> {
    RunConfig::new(&run.checks, &run.exponent, cap, jobs, timings)
}

fn cmd_invariants(
    group: &GroupArgs,
    run: &RunArgs,
    format: ReportFormat,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let cfg = run_config(run, group.cap, 1, false)?;
    let spec = group.spec()?;
    let name = spec.to_string();
    let g: PermGroup = spec.build_with_cap(cfg.cap)?;
    let report = scan::analyze_group(&name, name.clone(), Ok(g), &cfg);
    let text = match format {
        ReportFormat::Json => json(&report)?,
        ReportFormat::Tsv => scan::to_tsv(std::slice::from_ref(&report)),
    };
    emit(out, &text)?;
    let bad = report.error.is_some() || report.checks.iter().any(|c| c.is_violation());
    Ok(u8::from(bad))
}

fn cmd_example(
    which: &str,
    p: u64,
    full_table: bool,
    format: TextFormat,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let (text, pass) = match which {
        "sym3-frobenius" => {
            let r = worked::sym3_frobenius(p)?;
            let text = match format {
                TextFormat::Json => json(&r)?,
                TextFormat::Text => {
                    let mut s = format!(
                        "G = S3 x F_{p}: order {}, |F(G)| = {}, |G:F(G)| = {}\norbit sizes on Irr(F(G)): {:?}\n",
                        r.order, r.fitting_order, r.fitting_index, r.orbit_sizes
                    );
                    for f in &r.fibers {
                        s += &format!(
                            "over {:12} orbit {:3}  |I:V| = {:3} (want {:3})  {} characters (want {}) of degree {:?} (want {})  {}\n",
                            f.name,
                            f.orbit_size,
                            f.inertia_quotient_order,
                            f.expected_inertia_quotient_order,
                            f.count,
                            f.expected_count,
                            dedup(&f.degrees),
                            f.expected_degree,
                            verdict(f.pass)
                        );
                    }
                    s += &format!(
                        "acd(G|V) = {} (want {}), below 6: {}\nIrr(G|V) = nonlinear characters: {}\n{}\n",
                        r.acd_above,
                        r.expected_acd_above,
                        r.acd_above_below_six,
                        r.above_is_nonlinear,
                        verdict(r.pass)
                    );
                    s
                }
            };
            (text, r.pass)
        }
        "s4-wreath-s3" => {
            let r = worked::wreath_s4_s3(full_table)?;
            let text = match format {
                TextFormat::Json => json(&r)?,
                TextFormat::Text => {
                    let mut s = format!(
                        "G = S4 wr S3: order {}, |F(G)| = {}, |G:F(G)| = {}\norbit sizes on Irr(F(G)): {:?}\n",
                        r.order, r.fitting_order, r.fitting_index, r.orbit_sizes
                    );
                    s += &format!(
                        "|I| = {}, lambda extends to I: {}, |Irr(I|lambda)| = {} = k(I/V) = {}\n",
                        r.inertia_order,
                        r.lambda_extends_to_inertia,
                        r.fiber_size_in_inertia,
                        r.inertia_quotient_classes
                    );
                    s += &format!(
                        "I/V degrees {:?}, acd(I/V) = {}\nacd(G|lambda) = {}\n{}: {:?}\n",
                        r.inertia_quotient_degrees,
                        r.inertia_quotient_acd,
                        r.acd_over_lambda,
                        r.conjecture_bound,
                        r.conjecture_verdict
                    );
                    if let (Some(b), Some(a)) = (r.b, &r.full_table_acd_over_lambda) {
                        s += &format!("full table: b(G) = {b}, acd(G|lambda) = {a}\n");
                    }
                    s += verdict(r.pass);
                    s += "\n";
                    s
                }
            };
            (text, r.pass)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown example `{other}` (expected sym3-frobenius or s4-wreath-s3)"
            )))
        }
    };
    emit(out, &text)?;
    Ok(u8::from(!pass))
}

fn dedup(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    v.dedup();
    v
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_scan(
    manifest: &PathBuf,
    run: &RunArgs,
    cap: usize,
    jobs: usize,
    timings: bool,
    format: ReportFormat,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let cfg = run_config(run, cap, jobs, timings)?;
    let entries = catalog::load_manifest(manifest)?;
    let report = scan::scan(&entries, &manifest.display().to_string(), &cfg)?;
    let text = match format {
        ReportFormat::Json => json(&report)?,
        ReportFormat::Tsv => scan::to_tsv(&report.groups),
    };
    emit(out, &text)?;
    let s = &report.summary;
    eprintln!(
        "{} groups, {} violations, {} indeterminate, {} errors",
        s.groups,
        s.violations.len(),
        s.indeterminate,
        s.errors.len()
    );
    for v in &s.violations {
        eprintln!(
            "violation: {} [{}] {} vs {}",
            v.group,
            v.check,
            v.lhs.as_deref().unwrap_or(""),
            v.rhs.as_deref().unwrap_or("")
        );
    }
    for e in &s.errors {
        eprintln!("error: {e}");
    }
    Ok(report.exit_code() as u8)
}

fn cmd_socle_sim(
    shape: &str,
    data: &Option<PathBuf>,
    trivial_action: bool,
    cap: u128,
    format: TextFormat,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let pack = match data {
        Some(path) => catalog::load_simple_pack(path)?,
        None => catalog::builtin_simple_data(),
    };
    let shape = SocleShape::parse(shape, &pack)?;
    let action = if trivial_action { TopAction::trivial(&shape) } else { TopAction::full(&shape) };
    let r = socle::simulate_capped(&shape, &action, cap)?;
    let pass = r.unconditional_pass();
    let text = match format {
        TextFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                report: &'a socle::SimulationReport,
                pass: bool,
            }
            json(&Out { report: &r, pass })?
        }
        TextFormat::Text => {
            let flags = [
                ("defined exactly on principal-majority tuples", r.defined_iff_majority),
                ("degree bound for every replacement", r.degree_bound),
                ("decomposition partition preserved", r.partition_preserved),
                ("second replacement undefined", r.double_prime_undefined),
                ("equivariant", r.equivariant),
                ("stabilizers equal", r.stabilizers_equal),
                ("replacements avoid principal-majority orbits", r.primes_avoid_majority),
                ("block averages at least half the bound", r.block_bound),
                ("unpaired tuples at least the bound", r.tail_bound),
            ];
            let mut s = format!(
                "shape {}: {} tuples, {} orbits, {} with a replacement\nbound {} ; {} pairs, {} singles, smallest block average {}\n",
                r.shape, r.tuples, r.orbits, r.defined, r.bound, r.pairs, r.singles, r.min_block_average
            );
            for (name, ok) in flags {
                s += &format!("{:48} {}\n", name, verdict(ok));
            }
            s += &format!(
                "{:48} {}\n{:48} {}\n",
                "replacement injective on orbits (info)",
                r.replacement_injective_on_orbits,
                "pairing is a perfect matching (info)",
                r.perfect_matching
            );
            s += verdict(pass);
            s += "\n";
            s
        }
    };
    emit(out, &text)?;
    Ok(u8::from(!pass))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Table { group, format, out } => cmd_table(group, *format, out),
        Command::Invariants { group, run, format, out } => cmd_invariants(group, run, *format, out),
        Command::Example { which, p, full_table, format, out } => cmd_example(which, *p, *full_table, *format, out),
        Command::Scan { manifest, run, cap, jobs, timings, format, out } => {
            cmd_scan(manifest, run, *cap, *jobs, *timings, *format, out)
        }
        Command::SocleSim { shape, data, trivial_action, cap, format, out } => {
            cmd_socle_sim(shape, data, *trivial_action, *cap, *format, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("acd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn family_needs_its_parameters() {
        let cli = Cli::try_parse_from(["acd", "table", "--family", "frobenius"]).unwrap();
        let Command::Table { group, .. } = cli.command else { panic!() };
        assert!(matches!(group.spec(), Err(CliError::Config(_))));
        let cli = Cli::try_parse_from(["acd", "table", "--family", "affine", "--p", "7", "--n", "3"]).unwrap();
        let Command::Table { group, .. } = cli.command else { panic!() };
        assert_eq!(group.spec().unwrap(), GroupSpec::Affine(7, 3));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(Error::OrderCapExceeded { cap: 1 }).exit_code(), 3);
        assert_eq!(CliError::Core(Error::NotPrime(4)).exit_code(), 2);
        assert_eq!(CliError::Core(Error::NoSuitablePrime).exit_code(), 1);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
    }
}
