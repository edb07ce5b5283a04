//! Scalar invariants (acd, acs, b, indices of characteristic subgroups) and
//! the bound predicates checked on them, all decided in exact arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chartab::{character_table, CharacterTable};
use crate::classes::{conjugacy_classes, ConjugacyData};
use crate::clifford::NormalContext;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::subgroup::{
    derived_length, derived_subgroup, fitting_subgroup, is_solvable, normal_subgroups, quotient_group,
    solvable_radical, SubgroupHandle,
};
use crate::Rational;

pub fn rational(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn acd(table: &CharacterTable) -> Rational {
    rational(table.degrees().iter().sum(), table.len() as u64)
}

pub fn acs(classes: &ConjugacyData) -> Rational {
    rational(classes.group_order() as u64, classes.len() as u64)
}

/// `k(G)/|G|`, the probability that two random elements commute.
pub fn commuting_probability(classes: &ConjugacyData) -> Rational {
    acs(classes).recip()
}

/// An exponent in a bound `x <= y^e`: a positive rational, or the
/// irrational `alpha = log_3(6 * 24^(1/3)) = log_3(5184) / 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Ratio(u64, u64),
    Alpha,
}

impl Exponent {
    pub fn ratio(p: u64, q: u64) -> Self {
        let g = p.gcd(&q);
        Exponent::Ratio(p / g, q / g)
    }

    pub fn two() -> Self {
        Exponent::Ratio(2, 1)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `alpha`, integers, decimals (`2.596`) and fractions (`13/5`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse { line: 1, msg: format!("bad exponent `{s}`") };
        if s.eq_ignore_ascii_case("alpha") {
            return Ok(Exponent::Alpha);
        }
        let (p, q) = if let Some((a, b)) = s.split_once('/') {
            (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            (int * scale + frac.parse::<u64>().map_err(|_| bad())?, scale)
        } else {
            (s.parse::<u64>().map_err(|_| bad())?, 1)
        };
        if p == 0 || q == 0 {
            return Err(bad());
        }
        Ok(Exponent::ratio(p, q))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Ratio(p, 1) => write!(f, "{p}"),
            Exponent::Ratio(p, q) => write!(f, "{p}/{q}"),
            Exponent::Alpha => write!(f, "alpha"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// `x^q <= y^p` for nonnegative rationals.
fn rational_power_le(x: &Rational, y: &Rational, p: u64, q: u64) -> bool {
    let (p, q) = (p as u32, q as u32);
    let lhs = Pow::pow(x.numer(), q) * Pow::pow(y.denom(), p);
    let rhs = Pow::pow(y.numer(), p) * Pow::pow(x.denom(), q);
    lhs <= rhs
}

/// Largest `a` with `3^a <= 5184^b`, so that `a/b < log_3 5184 < (a+1)/b`
/// (the logarithm is irrational because 5184 = 2^6 3^4).
fn alpha_floor(b: u64) -> u64 {
    let est = (b as f64 * 5184f64.ln() / 3f64.ln()).floor() as u64;
    let target = Pow::pow(BigInt::from(5184), b);
    let mut a = est.saturating_sub(2);
    while Pow::pow(BigInt::from(3), (a + 1) as u32) <= target {
        a += 1;
    }
    while a > 0 && Pow::pow(BigInt::from(3), a as u32) > target {
        a -= 1;
    }
    a
}

/// Decides `x <= y^e`. For the irrational exponent the decision uses
/// rational sandwiches of `log_3 5184` and reports `Indeterminate` if
/// none of them separates the two sides.
pub fn power_le(x: &Rational, y: &Rational, e: &Exponent) -> Verdict {
    assert!(!x.is_negative() && !y.is_negative());
    match e {
        Exponent::Ratio(p, q) => Verdict::from_bool(rational_power_le(x, y, *p, *q)),
        Exponent::Alpha => {
            if y.is_one() || y.is_zero() {
                // y^alpha = y
                return Verdict::from_bool(x <= y);
            }
            let cube = x * x * x;
            for b in [10u64, 100, 1000, 10000] {
                let a = alpha_floor(b);
                // x^3 <= y^{3 alpha}; a/b < 3 alpha < (a+1)/b
                let (lo, hi) = if y > &Rational::one() { (a, a + 1) } else { (a + 1, a) };
                if rational_power_le(&cube, y, lo, b) {
                    return Verdict::Holds;
                }
                if !rational_power_le(&cube, y, hi, b) {
                    return Verdict::Fails;
                }
            }
            Verdict::Indeterminate
        }
    }
}

/// Everything the checks need about one group, computed once.
pub struct Analysis {
    pub name: String,
    pub group: PermGroup,
    pub classes: ConjugacyData,
    pub table: CharacterTable,
    pub fitting: SubgroupHandle,
    pub radical: SubgroupHandle,
    pub solvable: bool,
    fitting_ctx: NormalContext,
}

/// Summary of the fiber over one orbit of linear characters of F(G).
#[derive(Debug, Clone, Serialize)]
pub struct FiberSummary {
    pub lambda_row: usize,
    pub lambda_order: u64,
    pub square_free: bool,
    pub inertia_index: usize,
    pub fiber_size: usize,
    pub acd: String,
}

impl Analysis {
    pub fn new(name: &str, group: PermGroup) -> Result<Self> {
        let classes = conjugacy_classes(&group);
        let table = character_table(&group, &classes)?;
        let fitting = fitting_subgroup(&group, &classes);
        let radical = solvable_radical(&group, &classes);
        let solvable = radical.order() == group.order();
        let fitting_ctx = NormalContext::new(&group, &classes, &fitting)?;
        Ok(Analysis { name: name.to_string(), group, classes, table, fitting, radical, solvable, fitting_ctx })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn acd(&self) -> Rational {
        acd(&self.table)
    }

    pub fn acs(&self) -> Rational {
        acs(&self.classes)
    }

    pub fn fitting_index(&self) -> usize {
        self.order() / self.fitting.order()
    }

    pub fn radical_index(&self) -> usize {
        self.order() / self.radical.order()
    }

    pub fn fitting_context(&self) -> &NormalContext {
        &self.fitting_ctx
    }

    /// One summary per G-orbit of linear characters of F(G).
    pub fn fibers(&self) -> Result<Vec<FiberSummary>> {
        let lin = self.fitting_ctx.linear_characters();
        self.fitting_ctx
            .orbits_on_linear()
            .into_iter()
            .map(|o| {
                let l = lin.iter().find(|l| l.row == o.rep).expect("orbit of linear rows");
                let fiber = self.fitting_ctx.irr_over(&self.table, o.rep)?;
                Ok(FiberSummary {
                    lambda_row: o.rep,
                    lambda_order: l.order,
                    square_free: l.is_square_free_order(),
                    inertia_index: o.size(),
                    fiber_size: fiber.len(),
                    acd: fiber.average_degree(&self.table)?.to_string(),
                })
            })
            .collect()
    }

    fn require_solvable(&self) -> Result<()> {
        if self.solvable {
            Ok(())
        } else {
            Err(Error::NotSolvable)
        }
    }
}

/// Outcome of one predicate, with the numbers it compared.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub verdict: Verdict,
    pub lhs: String,
    pub rhs: String,
    pub witness: Option<String>,
}

/// `|G:F(G)| <= b(G)^2` for solvable G.
pub fn check_gluck(a: &Analysis) -> Result<Check> {
    a.require_solvable()?;
    let b = a.table.b();
    Ok(Check {
        verdict: Verdict::from_bool(a.fitting_index() as u64 <= b * b),
        lhs: a.fitting_index().to_string(),
        rhs: format!("{b}^2"),
        witness: None,
    })
}

/// Some linear character of F(G) has `|G:F(G)| <= acd(G|lambda)^e`.
/// The witness is the best orbit representative.
pub fn check_conj_c(a: &Analysis, e: &Exponent, square_free_only: bool) -> Result<Check> {
    a.require_solvable()?;
    let index = Rational::from_integer(BigInt::from(a.fitting_index()));
    let lin = a.fitting_ctx.linear_characters();
    let mut best: Option<(Rational, usize)> = None;
    let mut verdict = Verdict::Fails;
    for o in a.fitting_ctx.orbits_on_linear() {
        let l = lin.iter().find(|l| l.row == o.rep).expect("orbit of linear rows");
        if square_free_only && !l.is_square_free_order() {
            continue;
        }
        let value = a.fitting_ctx.acd_over(&a.table, o.rep)?;
        match power_le(&index, &value, e) {
            Verdict::Holds => verdict = Verdict::Holds,
            Verdict::Indeterminate if verdict == Verdict::Fails => verdict = Verdict::Indeterminate,
            _ => {}
        }
        if best.as_ref().is_none_or(|(b, _)| &value > b) {
            best = Some((value, o.rep));
        }
    }
    let (value, row) = best.expect("the trivial character is always present");
    Ok(Check {
        verdict,
        lhs: index.to_string(),
        rhs: format!("({value})^{e}"),
        witness: Some(format!("lambda row {row} of F(G), acd(G|lambda) = {value}")),
    })
}

/// `|G:sol(G)| <= acd(G)^e`; exponent 4 is the question asked, exponent 3
/// is refuted by A5.
pub fn check_radical_power(a: &Analysis, e: &Exponent) -> Check {
    let index = Rational::from_integer(BigInt::from(a.radical_index()));
    let acd = a.acd();
    Check { verdict: power_le(&index, &acd, e), lhs: index.to_string(), rhs: format!("({acd})^{e}"), witness: None }
}

pub fn check_q52(a: &Analysis) -> Check {
    check_radical_power(a, &Exponent::Ratio(4, 1))
}

pub fn check_q53(a: &Analysis) -> Result<Check> {
    check_conj_c(a, &Exponent::Ratio(4, 1), false)
}

/// Derived length and acd, reported without a verdict.
pub fn check_q54(a: &Analysis) -> Result<(usize, Rational)> {
    Ok((derived_length(&a.group)?, a.acd()))
}

/// `|G:sol(G)| <= acs(G)^2` and `|G:F(G)| <= acs(G)^2`.
pub fn check_gr_bounds(a: &Analysis) -> (Check, Check) {
    let acs = a.acs();
    let sq = &acs * &acs;
    let mk = |index: usize| Check {
        verdict: Verdict::from_bool(Rational::from_integer(BigInt::from(index)) <= sq),
        lhs: index.to_string(),
        rhs: format!("({acs})^2"),
        witness: None,
    };
    (mk(a.radical_index()), mk(a.fitting_index()))
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientComparison {
    pub normal_order: usize,
    pub quotient_acd: String,
    pub acd: String,
    pub exceeds: bool,
}

/// `acd(G/N)` against `acd(G)` for every proper normal subgroup N.
pub fn check_q51(a: &Analysis, lattice_cap: usize) -> Result<Vec<QuotientComparison>> {
    let acd_g = a.acd();
    let mut out = Vec::new();
    for n in normal_subgroups(&a.group, &a.classes, lattice_cap)? {
        if n.order() == a.order() {
            continue;
        }
        let q = quotient_group(&a.group, &n)?;
        let qc = conjugacy_classes(&q.group);
        let qt = character_table(&q.group, &qc)?;
        let qa = acd(&qt);
        out.push(QuotientComparison {
            normal_order: n.order(),
            exceeds: qa > acd_g,
            quotient_acd: qa.to_string(),
            acd: acd_g.to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitBound {
    pub largest_orbit: usize,
    pub fitting_index: usize,
    pub verdict: Verdict,
}

/// Largest G-orbit on linear characters of F(G), and whether
/// `|G:F(G)| <= (largest orbit)^alpha`.
pub fn orbit_bound_data(a: &Analysis) -> Result<OrbitBound> {
    a.require_solvable()?;
    let largest = a.fitting_ctx.orbits_on_linear().iter().map(|o| o.size()).max().unwrap_or(1);
    let verdict = power_le(
        &Rational::from_integer(BigInt::from(a.fitting_index())),
        &Rational::from_integer(BigInt::from(largest)),
        &Exponent::Alpha,
    );
    Ok(OrbitBound { largest_orbit: largest, fitting_index: a.fitting_index(), verdict })
}

/// Structural self-checks of the table against the group.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub degree_squares: bool,
    pub orthogonality: bool,
    pub degrees_divide_order: bool,
    pub class_count: bool,
    pub linear_count: bool,
}

impl PropertyCheck {
    pub fn all(&self) -> bool {
        self.degree_squares && self.orthogonality && self.degrees_divide_order && self.class_count && self.linear_count
    }
}

pub fn check_properties(a: &Analysis) -> PropertyCheck {
    let order = a.order() as u64;
    let derived = derived_subgroup(&a.group, &SubgroupHandle::whole(&a.group));
    PropertyCheck {
        degree_squares: a.table.degrees().iter().map(|d| d * d).sum::<u64>() == order,
        orthogonality: a.table.verify().is_ok(),
        degrees_divide_order: a.table.degrees().iter().all(|d| order % d == 0),
        class_count: a.table.len() == a.classes.len(),
        linear_count: a.table.num_linear() == a.order() / derived.order(),
    }
}

/// Numeric value of a rational, for display next to exact values.
pub fn approx(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn group_is_solvable(g: &PermGroup) -> bool {
    is_solvable(g)
}
