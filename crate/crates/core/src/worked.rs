//! Two worked examples computed end to end:
//!
//! * `S3 x F_p` over its Fitting subgroup `C3 x C_p`, where the fibers over
//!   the three nontrivial orbits are small but `|G:F(G)| = 2(p-1)` grows;
//! * `S4 wr S3` over its Fitting subgroup `2^6`, where a single linear
//!   character already satisfies `|G:F(G)| <= acd(G|lambda)^2`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::catalog;
use crate::chartab::character_table;
use crate::classes::conjugacy_classes;
use crate::clifford::NormalContext;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::metrics::{self, power_le, Exponent, Verdict};
use crate::modp::is_prime;
use crate::subgroup::{fitting_subgroup, quotient_group, relative_subgroup, SubgroupHandle};
use crate::Rational;

/// Whether a character of N is trivial on every element of N that moves
/// only points in `points`.
fn trivial_on_support(g: &PermGroup, ctx: &NormalContext, row: usize, points: std::ops::Range<u32>) -> bool {
    ctx.normal_subgroup().elements().iter().all(|&x| {
        let supported = g.element(x).iter().enumerate().all(|(i, &y)| y == i as u32 || points.contains(&(i as u32)));
        !supported || ctx.value_at(row, x) == Some(&Cyclotomic::one())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberRow {
    pub name: String,
    pub lambda_order: u64,
    pub orbit_size: usize,
    pub inertia_quotient_order: usize,
    pub count: usize,
    pub degrees: Vec<u64>,
    pub expected_count: usize,
    pub expected_degree: u64,
    pub expected_inertia_quotient_order: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusProductReport {
    pub p: u64,
    pub order: usize,
    pub fitting_order: usize,
    pub fitting_index: usize,
    pub orbit_sizes: Vec<usize>,
    pub fibers: Vec<FiberRow>,
    pub acd_above: String,
    pub expected_acd_above: String,
    pub acd_above_below_six: bool,
    /// Characters with `V` outside the kernel are exactly the nonlinear ones.
    pub above_is_nonlinear: bool,
    pub pass: bool,
}

/// `G = S3 x F_p` with `V = F(G) = C3 x C_p`.
pub fn sym3_frobenius(p: u64) -> Result<FrobeniusProductReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let g = catalog::direct_product(&catalog::symmetric(3)?, &catalog::frobenius_agl1(p)?)?;
    let classes = conjugacy_classes(&g);
    let table = character_table(&g, &classes)?;
    let v = fitting_subgroup(&g, &classes);
    let ctx = NormalContext::new(&g, &classes, &v)?;
    let c3 = 0..3u32;
    let cp = 3..3 + p as u32;
    let lin = ctx.linear_characters();
    let orbits = ctx.orbits(None);
    let mut orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
    orbit_sizes.sort_unstable();

    let mut fibers = Vec::new();
    // (name, trivial on C3, trivial on C_p, count, degree, inertia quotient)
    let expected = [
        ("lambda", false, true, (p - 1) as usize, 2, (p - 1) as usize),
        ("mu", true, false, 2, p - 1, 2),
        ("lambda x mu", false, false, 1, 2 * (p - 1), 1),
    ];
    for (name, triv3, trivp, count, degree, inertia) in expected {
        let orbit = orbits
            .iter()
            .find(|o| {
                trivial_on_support(&g, &ctx, o.rep, c3.clone()) == triv3
                    && trivial_on_support(&g, &ctx, o.rep, cp.clone()) == trivp
            })
            .ok_or_else(|| Error::VerificationFailed(format!("no orbit of type {name}")))?;
        let fiber = ctx.irr_over(&table, orbit.rep)?;
        let degrees: Vec<u64> = fiber.members.iter().map(|&r| table.degree(r)).collect();
        let inertia_quotient_order = ctx.inertia_group(&g, orbit.rep).order() / v.order();
        let order = lin.iter().find(|l| l.row == orbit.rep).map_or(0, |l| l.order);
        fibers.push(FiberRow {
            name: name.to_string(),
            lambda_order: order,
            orbit_size: orbit.size(),
            inertia_quotient_order,
            count: fiber.len(),
            pass: fiber.len() == count && degrees.iter().all(|&d| d == degree) && inertia_quotient_order == inertia,
            degrees,
            expected_count: count,
            expected_degree: degree,
            expected_inertia_quotient_order: inertia,
        });
    }
    let above = ctx.irr_above(&table)?;
    let acd_above = above.average_degree(&table)?;
    let expected_acd = metrics::rational(6 * (p - 1), p + 2);
    let nonlinear: Vec<usize> = (0..table.len()).filter(|&r| table.degree(r) > 1).collect();
    let above_is_nonlinear = above.members == nonlinear;
    let below_six = acd_above < Rational::from_integer(BigInt::from(6));
    let pass = fibers.iter().all(|f| f.pass)
        && acd_above == expected_acd
        && below_six
        && above_is_nonlinear
        && orbit_sizes == {
            let mut want = vec![1, 2, (p - 1) as usize, 2 * (p - 1) as usize];
            want.sort_unstable();
            want
        };
    Ok(FrobeniusProductReport {
        p,
        order: g.order(),
        fitting_order: v.order(),
        fitting_index: g.order() / v.order(),
        orbit_sizes,
        fibers,
        acd_above: acd_above.to_string(),
        expected_acd_above: expected_acd.to_string(),
        acd_above_below_six: below_six,
        above_is_nonlinear,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WreathReport {
    pub order: usize,
    pub fitting_order: usize,
    pub fitting_index: usize,
    pub orbit_sizes: Vec<usize>,
    pub inertia_order: usize,
    pub inertia_quotient_degrees: Vec<u64>,
    pub inertia_quotient_acd: String,
    pub lambda_extends_to_inertia: bool,
    /// `|Irr(I|lambda)|` against the class number of `I/V`.
    pub fiber_size_in_inertia: usize,
    pub inertia_quotient_classes: usize,
    pub acd_over_lambda: String,
    pub conjecture_bound: String,
    pub conjecture_verdict: Verdict,
    /// Only in full-table mode.
    pub b: Option<u64>,
    pub full_table_acd_over_lambda: Option<String>,
    pub pass: bool,
}

/// `G = S4 wr S3` with `V = F(G) = 2^6` and `lambda` nontrivial on the Klein
/// four-group of every block. With `full_table` the whole table of G is
/// computed as well and checked against the inertia-group route.
pub fn wreath_s4_s3(full_table: bool) -> Result<WreathReport> {
    let g = catalog::wreath_imprimitive(&catalog::symmetric(4)?, 3)?;
    let classes = conjugacy_classes(&g);
    let v = fitting_subgroup(&g, &classes);
    let ctx = NormalContext::new(&g, &classes, &v)?;
    let orbits = ctx.orbits(None);
    let mut orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
    orbit_sizes.sort_unstable();
    let lambda = orbits
        .iter()
        .map(|o| o.rep)
        .find(|&r| (0..3u32).all(|b| !trivial_on_support(&g, &ctx, r, 4 * b..4 * b + 4)))
        .ok_or_else(|| Error::VerificationFailed("no character nontrivial on every block".into()))?;

    // the inertia group and its own tables
    let inertia = ctx.inertia_group(&g, lambda);
    let ig = inertia.to_group(&g);
    let icl = conjugacy_classes(&ig);
    let itable = character_table(&ig, &icl)?;
    let v_in_i = relative_subgroup(&inertia, &ig, &v)?;
    let ictx = NormalContext::new(&ig, &icl, &v_in_i)?;
    let lambda_i = locate(&ctx, lambda, &inertia, &ictx)?;
    let extends = ictx.extends(&itable, lambda_i)?;
    let fiber = ictx.irr_over(&itable, lambda_i)?;
    let acd_i = fiber.average_degree(&itable)?;

    let quotient = quotient_group(&ig, &v_in_i)?;
    let qcl = conjugacy_classes(&quotient.group);
    let qtable = character_table(&quotient.group, &qcl)?;
    let mut qdeg = qtable.degrees().to_vec();
    qdeg.sort_unstable();
    let qacd = metrics::acd(&qtable);

    let index_gi = g.order() / inertia.order();
    let acd_over = &acd_i * Rational::from_integer(BigInt::from(index_gi));
    let fitting_index = g.order() / v.order();
    let verdict = power_le(&Rational::from_integer(BigInt::from(fitting_index)), &acd_over, &Exponent::two());

    let (b, full_acd) = if full_table {
        let table = character_table(&g, &classes)?;
        (Some(table.b()), Some(ctx.acd_over(&table, lambda)?))
    } else {
        (None, None)
    };
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let pass = orbit_sizes == [1, 9, 27, 27]
        && qdeg == [1, 1, 1, 1, 2, 2, 3, 3, 3, 3]
        && qacd == int(2)
        && extends
        && fiber.len() == qcl.len()
        && acd_over == int(54)
        && fitting_index == 1296
        && verdict == Verdict::Holds
        && b.is_none_or(|b| b == 108)
        && full_acd.as_ref().is_none_or(|a| *a == acd_over);
    Ok(WreathReport {
        order: g.order(),
        fitting_order: v.order(),
        fitting_index,
        orbit_sizes,
        inertia_order: inertia.order(),
        inertia_quotient_degrees: qdeg,
        inertia_quotient_acd: qacd.to_string(),
        lambda_extends_to_inertia: extends,
        fiber_size_in_inertia: fiber.len(),
        inertia_quotient_classes: qcl.len(),
        acd_over_lambda: acd_over.to_string(),
        conjecture_bound: format!("{fitting_index} <= ({acd_over})^2"),
        conjecture_verdict: verdict,
        b,
        full_table_acd_over_lambda: full_acd.map(|a| a.to_string()),
        pass,
    })
}

/// The row of `inner`'s table of N that agrees with `row` of `outer`'s table,
/// where `inner` lives in `sub.to_group(..)` of the outer group.
fn locate(outer: &NormalContext, row: usize, sub: &SubgroupHandle, inner: &NormalContext) -> Result<usize> {
    let local: std::collections::HashMap<u32, u32> =
        sub.elements().iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    (0..inner.n_table().len())
        .find(|&r| {
            outer.normal_subgroup().elements().iter().all(|&x| {
                let y = local[&x];
                inner.value_at(r, y) == outer.value_at(row, x)
            })
        })
        .ok_or_else(|| Error::VerificationFailed("character not found in the subgroup's table".into()))
}
