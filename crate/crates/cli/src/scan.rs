//! Per-group pipeline behind `scan` and `invariants`: build the group, compute
//! its table once, run the selected checks and collect a serializable report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use acd_core::catalog::CatalogEntry;
use acd_core::metrics::{self, Analysis, Check, Exponent, FiberSummary, QuotientComparison, Verdict};
use acd_core::{Error, PermGroup};
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

/// Every check the scanner knows, in report order.
pub const ALL_CHECKS: &[&str] =
    &["props", "gluck", "conjc", "thmb", "odd", "orbit", "gr", "q51", "q52", "q53", "q54", "thma"];

/// Checks whose exponent can be overridden with `--exponent name=value`.
const EXPONENT_CHECKS: &[(&str, &str)] = &[("conjc", "2"), ("thmb", "2.596"), ("odd", "1.643"), ("q53", "4")];

/// q51 walks the normal subgroup lattice and computes a table per quotient,
/// so it only runs on small groups.
pub const Q51_MAX_ORDER: usize = 500;
pub const LATTICE_CAP: usize = 10_000;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub checks: Vec<&'static str>,
    pub exponents: BTreeMap<&'static str, Exponent>,
    pub cap: usize,
    pub jobs: usize,
    pub timings: bool,
}

impl RunConfig {
    /// Validates check names and exponent overrides before any group is built.
    pub fn new(
        checks: &[String],
        overrides: &[String],
        cap: usize,
        jobs: usize,
        timings: bool,
    ) -> Result<Self, CliError> {
        let mut selected = Vec::new();
        let wanted: Vec<&str> =
            if checks.is_empty() { ALL_CHECKS.to_vec() } else { checks.iter().map(|s| s.as_str()).collect() };
        for name in wanted {
            let name = name.trim();
            if name == "all" {
                selected.extend(ALL_CHECKS.iter().copied());
                continue;
            }
            let known = ALL_CHECKS.iter().find(|c| **c == name).ok_or_else(|| {
                CliError::Config(format!("unknown check `{name}` (known: {})", ALL_CHECKS.join(", ")))
            })?;
            selected.push(*known);
        }
        // keep the canonical order so reports do not depend on flag order
        let checks: Vec<&'static str> = ALL_CHECKS.iter().copied().filter(|c| selected.contains(c)).collect();

        let mut exponents = BTreeMap::new();
        for (name, default) in EXPONENT_CHECKS {
            exponents.insert(*name, default.parse::<Exponent>().expect("default exponents parse"));
        }
        for o in overrides {
            let (name, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("exponent override `{o}` is not `check=value`")))?;
            let key = EXPONENT_CHECKS
                .iter()
                .map(|(n, _)| *n)
                .find(|n| *n == name.trim())
                .ok_or_else(|| CliError::Config(format!("check `{}` takes no exponent", name.trim())))?;
            let e = value.parse::<Exponent>().map_err(|e| CliError::Config(e.to_string()))?;
            exponents.insert(key, e);
        }
        if cap == 0 {
            return Err(CliError::Config("the order cap must be at least 1".into()));
        }
        Ok(RunConfig { checks, exponents, cap, jobs: jobs.max(1), timings })
    }

    fn exponent(&self, check: &str) -> &Exponent {
        &self.exponents[check]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    Skipped,
    Info,
    Error,
}

impl Status {
    fn of(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Status::Pass,
            Verdict::Fails => Status::Fail,
            Verdict::Indeterminate => Status::Indeterminate,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
            Status::Skipped => "skipped",
            Status::Info => "info",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<QuotientComparison>,
}

impl CheckResult {
    fn bare(check: &str, status: Status) -> Self {
        CheckResult {
            check: check.to_string(),
            status,
            verdict: None,
            exponent: None,
            lhs: None,
            rhs: None,
            witness: None,
            note: None,
            comparisons: Vec::new(),
        }
    }

    fn skipped(check: &str, why: &str) -> Self {
        CheckResult { note: Some(why.to_string()), ..Self::bare(check, Status::Skipped) }
    }

    fn from_check(name: &str, c: Check, asserted: bool) -> Self {
        CheckResult {
            verdict: Some(c.verdict),
            lhs: Some(c.lhs),
            rhs: Some(c.rhs),
            witness: c.witness,
            ..Self::bare(name, if asserted { Status::of(c.verdict) } else { Status::Info })
        }
    }

    /// Asserted checks that fail count as violations.
    pub fn is_violation(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Invariants>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub resource_cap: bool,
    #[serde(skip)]
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Invariants {
    pub k: usize,
    pub acd: String,
    pub acs: String,
    pub commuting_probability: String,
    pub b: u64,
    pub degrees: Vec<u64>,
    pub fitting_index: usize,
    pub radical_index: usize,
    pub solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_length: Option<usize>,
    pub fibers: Vec<FiberSummary>,
}

fn invariants(a: &Analysis) -> Result<Invariants, Error> {
    let mut degrees = a.table.degrees().to_vec();
    degrees.sort_unstable();
    Ok(Invariants {
        k: a.table.len(),
        acd: a.acd().to_string(),
        acs: a.acs().to_string(),
        commuting_probability: metrics::commuting_probability(&a.classes).to_string(),
        b: a.table.b(),
        degrees,
        fitting_index: a.fitting_index(),
        radical_index: a.radical_index(),
        solvable: a.solvable,
        derived_length: if a.solvable { Some(metrics::check_q54(a)?.0) } else { None },
        fibers: a.fibers()?,
    })
}

/// Runs one check; errors inside a check are recorded on that check only.
fn run_check(name: &'static str, a: &Analysis, cfg: &RunConfig) -> Vec<CheckResult> {
    let solvable_only = |r: Result<Check, Error>, asserted: bool| match r {
        Ok(c) => CheckResult::from_check(name, c, asserted),
        Err(Error::NotSolvable) => CheckResult::skipped(name, "not solvable"),
        Err(e) => CheckResult { note: Some(e.to_string()), ..CheckResult::bare(name, Status::Error) },
    };
    let with_exp = |mut r: CheckResult| {
        r.exponent = Some(cfg.exponent(name).to_string());
        r
    };
    match name {
        "props" => {
            let p = metrics::check_properties(a);
            let failed: Vec<&str> = [
                ("degree_squares", p.degree_squares),
                ("orthogonality", p.orthogonality),
                ("degrees_divide_order", p.degrees_divide_order),
                ("class_count", p.class_count),
                ("linear_count", p.linear_count),
            ]
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| *n)
            .collect();
            let mut r = CheckResult::bare(name, if failed.is_empty() { Status::Pass } else { Status::Fail });
            if !failed.is_empty() {
                r.note = Some(format!("failed: {}", failed.join(", ")));
            }
            vec![r]
        }
        "gluck" => vec![solvable_only(metrics::check_gluck(a), true)],
        "conjc" | "thmb" | "q53" => {
            vec![with_exp(solvable_only(metrics::check_conj_c(a, cfg.exponent(name), false), true))]
        }
        "odd" => {
            if a.order() % 2 == 0 {
                vec![CheckResult::skipped(name, "even order")]
            } else {
                vec![with_exp(solvable_only(metrics::check_conj_c(a, cfg.exponent(name), false), true))]
            }
        }
        "orbit" => vec![match metrics::orbit_bound_data(a) {
            Ok(o) => CheckResult {
                verdict: Some(o.verdict),
                exponent: Some("alpha".into()),
                lhs: Some(o.fitting_index.to_string()),
                rhs: Some(format!("{}^alpha", o.largest_orbit)),
                ..CheckResult::bare(name, Status::of(o.verdict))
            },
            Err(Error::NotSolvable) => CheckResult::skipped(name, "not solvable"),
            Err(e) => CheckResult { note: Some(e.to_string()), ..CheckResult::bare(name, Status::Error) },
        }],
        "gr" => {
            let (sol, fit) = metrics::check_gr_bounds(a);
            vec![CheckResult::from_check("gr-sol", sol, true), CheckResult::from_check("gr-fit", fit, true)]
        }
        "q51" => vec![if a.order() > Q51_MAX_ORDER {
            CheckResult::skipped(name, &format!("order above {Q51_MAX_ORDER}"))
        } else {
            match metrics::check_q51(a, LATTICE_CAP) {
                Ok(list) => {
                    let exceeding = list.iter().filter(|c| c.exceeds).count();
                    CheckResult {
                        note: Some(format!(
                            "{} proper normal subgroups, {exceeding} with acd(G/N) > acd(G)",
                            list.len()
                        )),
                        comparisons: list,
                        ..CheckResult::bare(name, Status::Info)
                    }
                }
                Err(e) => CheckResult { note: Some(e.to_string()), ..CheckResult::bare(name, Status::Error) },
            }
        }],
        "q52" => {
            let four = CheckResult::from_check(name, metrics::check_q52(a), true);
            let three = CheckResult {
                exponent: Some("3".into()),
                ..CheckResult::from_check("q52-cube", metrics::check_radical_power(a, &Exponent::Ratio(3, 1)), false)
            };
            vec![CheckResult { exponent: Some("4".into()), ..four }, three]
        }
        "q54" => vec![match metrics::check_q54(a) {
            Ok((dl, acd)) => CheckResult {
                lhs: Some(format!("derived length {dl}")),
                rhs: Some(format!("acd {acd}")),
                ..CheckResult::bare(name, Status::Info)
            },
            Err(Error::NotSolvable) => CheckResult::skipped(name, "not solvable"),
            Err(e) => CheckResult { note: Some(e.to_string()), ..CheckResult::bare(name, Status::Error) },
        }],
        "thma" => vec![if a.radical.order() == 1 {
            CheckResult {
                lhs: Some(format!("order {}", a.order())),
                rhs: Some(format!("acd {}", a.acd())),
                ..CheckResult::bare(name, Status::Info)
            }
        } else {
            CheckResult::skipped(name, "nontrivial solvable radical")
        }],
        other => unreachable!("check `{other}` validated in RunConfig::new"),
    }
}

pub fn analyze_group(name: &str, expression: String, group: Result<PermGroup, Error>, cfg: &RunConfig) -> GroupReport {
    let start = Instant::now();
    let mut report = GroupReport {
        name: name.to_string(),
        expression,
        order: None,
        invariants: None,
        checks: Vec::new(),
        error: None,
        resource_cap: false,
        millis: 0.0,
    };
    let result = group.and_then(|g| {
        report.order = Some(g.order());
        let a = Analysis::new(name, g)?;
        report.invariants = Some(invariants(&a)?);
        report.checks = cfg.checks.iter().flat_map(|c| run_check(c, &a, cfg)).collect();
        Ok(())
    });
    if let Err(e) = result {
        report.resource_cap = e.is_resource_cap();
        report.error = Some(e.to_string());
    }
    report.millis = start.elapsed().as_secs_f64() * 1e3;
    report
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub manifest: String,
    pub checks: Vec<&'static str>,
    pub exponents: BTreeMap<&'static str, String>,
    pub order_cap: usize,
    pub q51_max_order: usize,
    pub lattice_cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub group: String,
    pub check: String,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub groups: usize,
    pub violations: Vec<Violation>,
    pub indeterminate: usize,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    pub per_group_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub run: RunMeta,
    pub groups: Vec<GroupReport>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ScanReport {
    /// 0 clean, 1 violations or failed entries, 3 an entry hit a resource cap.
    pub fn exit_code(&self) -> i32 {
        if !self.summary.violations.is_empty() || self.groups.iter().any(|g| g.error.is_some() && !g.resource_cap) {
            1
        } else if self.groups.iter().any(|g| g.resource_cap) {
            3
        } else {
            0
        }
    }
}

/// Runs every manifest entry on a pool of `cfg.jobs` threads. Results keep
/// manifest order regardless of the pool width.
pub fn scan(entries: &[CatalogEntry], manifest: &str, cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let start = Instant::now();
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().map_err(|e| CliError::Config(e.to_string()))?;
    let groups: Vec<GroupReport> = pool.install(|| {
        entries.par_iter().map(|e| analyze_group(&e.name, e.spec.to_string(), e.build(cfg.cap), cfg)).collect()
    });
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    let mut indeterminate = 0;
    for g in &groups {
        if let Some(e) = &g.error {
            errors.push(format!("{}: {e}", g.name));
        }
        for c in &g.checks {
            if c.is_violation() {
                violations.push(Violation {
                    group: g.name.clone(),
                    check: c.check.clone(),
                    lhs: c.lhs.clone(),
                    rhs: c.rhs.clone(),
                });
            }
            if c.status == Status::Indeterminate {
                indeterminate += 1;
            }
            if c.status == Status::Error {
                errors.push(format!("{} [{}]: {}", g.name, c.check, c.note.as_deref().unwrap_or("")));
            }
        }
    }
    let timings = cfg.timings.then(|| Timings {
        total_ms: start.elapsed().as_secs_f64() * 1e3,
        per_group_ms: groups.iter().map(|g| (g.name.clone(), g.millis)).collect(),
    });
    Ok(ScanReport {
        run: RunMeta {
            tool: "acd",
            version: env!("CARGO_PKG_VERSION"),
            manifest: manifest.to_string(),
            checks: cfg.checks.clone(),
            exponents: cfg.exponents.iter().map(|(k, v)| (*k, v.to_string())).collect(),
            order_cap: cfg.cap,
            q51_max_order: Q51_MAX_ORDER,
            lattice_cap: LATTICE_CAP,
        },
        summary: Summary { groups: groups.len(), violations, indeterminate, errors },
        groups,
        timings,
    })
}

fn tsv_field(s: Option<&str>) -> String {
    s.unwrap_or("").replace(['\t', '\n'], " ")
}

/// One row per group and check, after a header row.
pub fn to_tsv(groups: &[GroupReport]) -> String {
    let mut out = String::from("group\torder\tk\tacd\tacs\tb\tcheck\tstatus\tlhs\trhs\tdetail\n");
    for g in groups {
        let inv = g.invariants.as_ref();
        let head = format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            g.name,
            g.order.map(|o| o.to_string()).unwrap_or_default(),
            inv.map(|i| i.k.to_string()).unwrap_or_default(),
            inv.map(|i| i.acd.clone()).unwrap_or_default(),
            inv.map(|i| i.acs.clone()).unwrap_or_default(),
            inv.map(|i| i.b.to_string()).unwrap_or_default(),
        );
        if let Some(e) = &g.error {
            let _ = writeln!(out, "{head}\t-\terror\t\t\t{}", tsv_field(Some(e)));
        }
        for c in &g.checks {
            let verdict = c.verdict.filter(|_| c.status == Status::Info).map(|v| format!("{v:?}").to_lowercase());
            let detail = c.witness.as_deref().or(c.note.as_deref()).or(verdict.as_deref());
            let _ = writeln!(
                out,
                "{head}\t{}\t{}\t{}\t{}\t{}",
                c.check,
                c.status.as_str(),
                tsv_field(c.lhs.as_deref()),
                tsv_field(c.rhs.as_deref()),
                tsv_field(detail)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(checks: &[&str], overrides: &[&str]) -> Result<RunConfig, CliError> {
        let c: Vec<String> = checks.iter().map(|s| s.to_string()).collect();
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        RunConfig::new(&c, &o, 1000, 1, false)
    }

    #[test]
    fn config_validation() {
        assert_eq!(cfg(&[], &[]).unwrap().checks, ALL_CHECKS);
        assert_eq!(cfg(&["q52", "gluck", "q52"], &[]).unwrap().checks, vec!["gluck", "q52"]);
        assert!(cfg(&["gluk"], &[]).is_err());
        assert!(cfg(&[], &["gr=2"]).is_err());
        assert!(cfg(&[], &["thmb"]).is_err());
        assert_eq!(cfg(&[], &["thmb=alpha"]).unwrap().exponent("thmb"), &Exponent::Alpha);
        assert_eq!(cfg(&[], &[]).unwrap().exponent("thmb"), &Exponent::Ratio(649, 250));
        assert!(RunConfig::new(&[], &[], 0, 1, false).is_err());
    }

    #[test]
    fn s4_report() {
        let c = cfg(&["gluck", "odd", "gr", "thma"], &[]).unwrap();
        let r = analyze_group("S4", "symmetric(4)".into(), acd_core::catalog::symmetric(4), &c);
        let inv = r.invariants.as_ref().unwrap();
        assert_eq!((inv.k, inv.acd.as_str(), inv.acs.as_str(), inv.b), (5, "2", "24/5", 3));
        assert_eq!(inv.derived_length, Some(3));
        let names: Vec<&str> = r.checks.iter().map(|c| c.check.as_str()).collect();
        assert_eq!(names, ["gluck", "odd", "gr-sol", "gr-fit", "thma"]);
        assert_eq!(r.checks[0].status, Status::Pass);
        assert_eq!(r.checks[1].status, Status::Skipped);
        assert_eq!(r.checks[4].status, Status::Skipped);
        let tsv = to_tsv(&[r]);
        assert_eq!(tsv.lines().count(), 6);
        assert!(tsv.lines().nth(1).unwrap().starts_with("S4\t24\t5\t2\t24/5\t3\tgluck\tpass\t6\t3^2"));
    }

    #[test]
    fn failed_build_is_recorded() {
        let c = cfg(&["gluck"], &[]).unwrap();
        let r = analyze_group("big", "x".into(), Err(Error::OrderCapExceeded { cap: 5 }), &c);
        assert!(r.resource_cap && r.error.is_some() && r.checks.is_empty());
    }
}
