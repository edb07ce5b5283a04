//! Ordinary character tables by simultaneous diagonalization of class
//! matrices over a prime field, with exact lifting of values to cyclotomic
//! integers and a full orthogonality check of the result.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::classes::ConjugacyData;
use crate::cyclotomic::{Cyclotomic, ProductSum};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::modp::{is_prime, PrimeField};
use crate::subgroup::SubgroupHandle;
use crate::Rational;

/// How many suitable primes are tried before giving up.
const PRIME_ATTEMPTS: usize = 8;

#[derive(Debug, Clone)]
pub struct CharacterTable {
    classes: ConjugacyData,
    exponent: u64,
    degrees: Vec<u64>,
    values: Vec<Vec<Cyclotomic>>,
    prime: Option<u64>,
}

impl CharacterTable {
    pub fn classes(&self) -> &ConjugacyData {
        &self.classes
    }

    pub fn group_order(&self) -> usize {
        self.classes.group_order()
    }

    /// Number of irreducible characters.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn degree(&self, row: usize) -> u64 {
        self.degrees[row]
    }

    pub fn row(&self, row: usize) -> &[Cyclotomic] {
        &self.values[row]
    }

    pub fn value(&self, row: usize, class: usize) -> &Cyclotomic {
        &self.values[row][class]
    }

    /// The prime used for the modular computation; `None` for abelian groups.
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    /// Largest degree.
    pub fn b(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(1)
    }

    /// Classes on which the character takes its degree.
    pub fn kernel(&self, row: usize) -> Vec<usize> {
        let d = Cyclotomic::integer(self.degrees[row] as i64);
        (0..self.classes.len()).filter(|&c| self.values[row][c] == d).collect()
    }

    pub fn num_linear(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// `(1/|G|) sum_g f(g) conj(h(g))` for class functions given per class.
    pub fn inner_product(&self, f: &[Cyclotomic], h: &[Cyclotomic]) -> Result<Rational> {
        let mut acc = ProductSum::new();
        for c in 0..self.classes.len() {
            acc.add_product(&f[c], &h[c], true, self.classes.size(c) as i64);
        }
        let total = acc.finish();
        let v = total
            .as_integer()
            .ok_or_else(|| Error::VerificationFailed(format!("inner product {total} is not rational")))?;
        Ok(Rational::new(BigInt::from(v), BigInt::from(self.group_order())))
    }

    /// Checks degree sum, divisibility and both orthogonality relations.
    pub fn verify(&self) -> Result<()> {
        let k = self.classes.len();
        let order = self.group_order() as u64;
        let fail = |m: String| Err(Error::VerificationFailed(m));
        if self.values.len() != k {
            return fail(format!("{} characters for {k} classes", self.values.len()));
        }
        let sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sq != order {
            return fail(format!("sum of squared degrees {sq} != {order}"));
        }
        if let Some(d) = self.degrees.iter().find(|&&d| order % d != 0) {
            return fail(format!("degree {d} does not divide {order}"));
        }
        if self.values[0].iter().any(|v| *v != Cyclotomic::one()) {
            return fail("first row is not the trivial character".into());
        }
        for i in 0..k {
            if self.values[i][0] != Cyclotomic::integer(self.degrees[i] as i64) {
                return fail(format!("row {i} disagrees with its degree"));
            }
            for j in i..k {
                let mut acc = ProductSum::new();
                for c in 0..k {
                    acc.add_product(&self.values[i][c], &self.values[j][c], true, self.classes.size(c) as i64);
                }
                let want = if i == j { order as i64 } else { 0 };
                if acc.finish() != Cyclotomic::integer(want) {
                    return fail(format!("rows {i} and {j} are not orthogonal"));
                }
            }
        }
        for c in 0..k {
            for c2 in c..k {
                let mut acc = ProductSum::new();
                for row in &self.values {
                    acc.add_product(&row[c], &row[c2], true, 1);
                }
                let want = if c == c2 { self.classes.centralizer_order(c) as i64 } else { 0 };
                if acc.finish() != Cyclotomic::integer(want) {
                    return fail(format!("columns {c} and {c2} are not orthogonal"));
                }
            }
        }
        Ok(())
    }

    /// Stable text export: class metadata, then one line per character with
    /// every value as `conductor:[coords]`.
    pub fn export(&self, g: &PermGroup) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "order: {}", self.group_order());
        let _ = writeln!(out, "classes: {}", self.classes.len());
        for c in 0..self.classes.len() {
            let _ = writeln!(
                out,
                "class {c}: order {} size {} rep {}",
                self.classes.element_order(c),
                self.classes.size(c),
                g.permutation(self.classes.rep(c))
            );
        }
        for (i, row) in self.values.iter().enumerate() {
            let vals: Vec<String> = row
                .iter()
                .map(|v| {
                    let coords: Vec<String> = v.coords().iter().map(|x| x.to_string()).collect();
                    format!("{}:[{}]", v.conductor(), coords.join(","))
                })
                .collect();
            let _ = writeln!(out, "chi {i}: degree {} values {}", self.degrees[i], vals.join(" "));
        }
        out
    }

    fn from_rows(
        classes: &ConjugacyData,
        exponent: u64,
        mut rows: Vec<Vec<Cyclotomic>>,
        prime: Option<u64>,
    ) -> Result<Self> {
        let one = Cyclotomic::one();
        // trivial character first, the rest by (degree, values)
        rows.sort_by(|a, b| {
            let ta = a.iter().all(|v| *v == one);
            let tb = b.iter().all(|v| *v == one);
            tb.cmp(&ta).then_with(|| a[0].as_integer().cmp(&b[0].as_integer())).then_with(|| a.cmp(b))
        });
        let degrees = rows
            .iter()
            .map(|r| match r[0].as_integer() {
                Some(d) if d > 0 => Ok(d as u64),
                _ => Err(Error::VerificationFailed(format!("degree {} is not a positive integer", r[0]))),
            })
            .collect::<Result<Vec<_>>>()?;
        let table = CharacterTable { classes: classes.clone(), exponent, degrees, values: rows, prime };
        table.verify()?;
        Ok(table)
    }
}

/// Linear characters of an abelian group as exponent vectors: character
/// `c` sends element `x` to `zeta_e^{chars[c][x]}` where `e` is the
/// returned exponent.
pub fn dual_group(g: &PermGroup) -> (u64, Vec<Vec<u32>>) {
    debug_assert!(g.is_abelian());
    let e = g.exponent();
    let n = g.order();
    let mut members: Vec<u32> = vec![0];
    let mut in_h = vec![false; n];
    in_h[0] = true;
    let mut chars: Vec<Vec<u32>> = vec![{
        let mut v = vec![u32::MAX; n];
        v[0] = 0;
        v
    }];
    for gen in g.generator_indices() {
        if in_h[gen as usize] {
            continue;
        }
        // smallest m with gen^m in H
        let mut powers = vec![0u32, gen];
        while !in_h[*powers.last().unwrap() as usize] {
            let next = g.mul(*powers.last().unwrap(), gen);
            powers.push(next);
        }
        let m = powers.len() as u64 - 1;
        let gm = powers[m as usize];
        let old_members = members.clone();
        for j in 1..m as usize {
            for &h in &old_members {
                let x = g.mul(h, powers[j]);
                in_h[x as usize] = true;
                members.push(x);
            }
        }
        let mut next_chars = Vec::with_capacity(chars.len() * m as usize);
        for psi in &chars {
            let b = psi[gm as usize] as u64;
            debug_assert_eq!(b % m, 0);
            for t in 0..m {
                let a = (b / m + t * (e / m)) % e;
                let mut ext = vec![u32::MAX; n];
                for (j, &pj) in powers.iter().enumerate().take(m as usize) {
                    for &h in &old_members {
                        let x = g.mul(h, pj);
                        ext[x as usize] = ((psi[h as usize] as u64 + j as u64 * a) % e) as u32;
                    }
                }
                next_chars.push(ext);
            }
        }
        chars = next_chars;
    }
    (e, chars)
}

fn abelian_table(g: &PermGroup, classes: &ConjugacyData) -> Result<CharacterTable> {
    let (e, chars) = dual_group(g);
    let rows = chars
        .iter()
        .map(|chi| {
            (0..classes.len())
                .map(|c| Cyclotomic::root_of_unity(e as u32, chi[classes.rep(c) as usize] as i64))
                .collect()
        })
        .collect();
    CharacterTable::from_rows(classes, e, rows, None)
}

/// Primes `q = 1 mod e` with `q > 2 sqrt|G|`, `q` above every class size
/// and prime to `|G|`, in increasing order.
fn candidate_primes(e: u64, order: u64, max_class: u64) -> impl Iterator<Item = u64> {
    (1u64..)
        .map(move |t| t * e + 1)
        .take_while(|&q| q < 1 << 31)
        .filter(move |&q| q * q > 4 * order && q > max_class && order % q != 0 && is_prime(q))
}

pub fn character_table(g: &PermGroup, classes: &ConjugacyData) -> Result<CharacterTable> {
    if g.is_abelian() {
        return abelian_table(g, classes);
    }
    let e = g.exponent();
    let max_class = classes.sizes().iter().copied().max().unwrap_or(1) as u64;
    let members = classes.members();
    let mut last_err = Error::NoSuitablePrime;
    for q in candidate_primes(e, g.order() as u64, max_class).take(PRIME_ATTEMPTS) {
        match dixon_attempt(g, classes, &members, e, q) {
            Ok(t) => return Ok(t),
            Err(err @ Error::VerificationFailed(_)) => last_err = err,
            Err(err) => return Err(err),
        }
    }
    Err(last_err)
}

/// Row-major `M[l][i]`: how many `x` in class `j` have `x^-1 z_i` in class `l`,
/// where `z_i` is the representative of class `i`.
fn class_matrix(
    g: &PermGroup,
    classes: &ConjugacyData,
    members: &[Vec<u32>],
    j: usize,
    f: &PrimeField,
) -> Vec<Vec<u64>> {
    let k = classes.len();
    let mut m = vec![vec![0u64; k]; k];
    let mut buf = vec![0u32; g.degree()];
    for i in 0..k {
        let z = classes.rep(i);
        for &x in &members[j] {
            let y = g.mul_with(g.inv(x), z, &mut buf);
            let l = classes.class_of(y);
            m[l][i] += 1;
        }
    }
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v %= f.modulus();
        }
    }
    m
}

struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn dixon_attempt(
    g: &PermGroup,
    classes: &ConjugacyData,
    members: &[Vec<u32>],
    e: u64,
    q: u64,
) -> Result<CharacterTable> {
    let f = PrimeField::new(q);
    let k = classes.len();
    let bad = |m: &str| Error::VerificationFailed(format!("{m} modulo {q}"));
    let mut spaces = vec![Space {
        basis: (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect(),
        pivots: (0..k).collect(),
    }];
    for j in 1..k {
        if spaces.iter().all(|s| s.basis.len() == 1) {
            break;
        }
        let m = class_matrix(g, classes, members, j, &f);
        let mut next = Vec::new();
        for space in spaces {
            let d = space.basis.len();
            if d == 1 {
                next.push(space);
                continue;
            }
            // images of the basis vectors, and the restricted matrix
            let images: Vec<Vec<u64>> = space
                .basis
                .iter()
                .map(|b| (0..k).map(|l| (0..k).fold(0, |acc, i| f.add(acc, f.mul(m[l][i], b[i])))).collect())
                .collect();
            let mut r = vec![vec![0u64; d]; d];
            for (col, w) in images.iter().enumerate() {
                let mut check = vec![0u64; k];
                for (s, &p) in space.pivots.iter().enumerate() {
                    r[s][col] = w[p];
                    for (c, &x) in check.iter_mut().zip(&space.basis[s]) {
                        *c = f.add(*c, f.mul(w[p], x));
                    }
                }
                if check != *w {
                    return Err(bad("eigenspace is not invariant"));
                }
            }
            let roots = f.roots(&f.charpoly(&r));
            if roots.len() == 1 && roots[0].1 == d {
                next.push(space);
                continue;
            }
            let mut total = 0;
            for (lambda, _) in roots {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|a| (0..d).map(|b| if a == b { f.sub(r[a][b], lambda) } else { r[a][b] }).collect())
                    .collect();
                let mut vecs: Vec<Vec<u64>> = f
                    .nullspace(&shifted)
                    .into_iter()
                    .map(|c| {
                        let mut v = vec![0u64; k];
                        for (cr, b) in c.iter().zip(&space.basis) {
                            for (x, &y) in v.iter_mut().zip(b) {
                                *x = f.add(*x, f.mul(*cr, y));
                            }
                        }
                        v
                    })
                    .collect();
                let pivots = f.rref(&mut vecs);
                total += vecs.len();
                next.push(Space { basis: vecs, pivots });
            }
            if total != d {
                return Err(bad("class matrix is not diagonalizable"));
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(bad("eigenspaces did not split completely"));
    }
    let order = g.order() as u64;
    let z = f.pow(f.primitive_root(), (q - 1) / e);
    let mut rows = Vec::with_capacity(k);
    for space in &spaces {
        let v = &space.basis[0];
        if v[0] == 0 {
            return Err(bad("eigenvector vanishes at the identity"));
        }
        let inv0 = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, inv0)).collect();
        let s = (0..k).fold(0, |acc, l| {
            let t = f.mul(omega[l], omega[classes.inverse_class(l)]);
            f.add(acc, f.mul(t, f.inv(classes.size(l) as u64 % q)))
        });
        if s == 0 {
            return Err(bad("degree normalization vanishes"));
        }
        let d2 = f.mul(order % q, f.inv(s));
        let d = (1..)
            .take_while(|d: &u64| d * d <= order)
            .find(|&d| order % d == 0 && f.mul(d, d) == d2)
            .ok_or_else(|| bad("no degree matches the normalization"))?;
        let values: Vec<u64> = (0..k).map(|c| f.mul(f.mul(omega[c], d), f.inv(classes.size(c) as u64 % q))).collect();
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            let n = classes.element_order(c) as u64;
            let zn = f.pow(z, e / n);
            let zn_inv = f.inv(zn);
            let n_inv = f.inv(n % q);
            let mut mult = vec![0i64; n as usize];
            let mut total = 0u64;
            for (kk, slot) in mult.iter_mut().enumerate() {
                // (1/n) sum_j chi(g^j) zeta^{-jk}
                let step = f.pow(zn_inv, kk as u64);
                let mut w = 1u64;
                let mut acc = 0u64;
                for jj in 0..n {
                    acc = f.add(acc, f.mul(values[classes.power(c, jj as i64)], w));
                    w = f.mul(w, step);
                }
                let m_k = f.mul(acc, n_inv);
                if m_k > d {
                    return Err(bad("root multiplicity out of range"));
                }
                *slot = m_k as i64;
                total += m_k;
            }
            if total != d {
                return Err(bad("root multiplicities do not sum to the degree"));
            }
            row.push(Cyclotomic::from_group_ring(n as u32, &mult));
        }
        rows.push(row);
    }
    CharacterTable::from_rows(classes, e, rows, Some(q))
}

/// For each class of `H`, the class of `G` containing it. The classes of `H`
/// must come from `h.to_group(g)`, so that element `i` of that group is
/// `h.elements()[i]`.
pub fn class_fusion(h: &SubgroupHandle, h_classes: &ConjugacyData, g_classes: &ConjugacyData) -> Result<Vec<usize>> {
    if h_classes.group_order() != h.order() {
        return Err(Error::NotSubgroup);
    }
    Ok((0..h_classes.len()).map(|c| g_classes.class_of(h.elements()[h_classes.rep(c) as usize])).collect())
}

/// `(1/|H|) sum_{x in H} chi(x) conj(eta(x))` for `chi` in `table_g` and `eta`
/// in `table_h`, the table of `h.to_group(g)`.
pub fn restriction_inner_product(
    table_g: &CharacterTable,
    chi: usize,
    h: &SubgroupHandle,
    table_h: &CharacterTable,
    eta: usize,
) -> Result<Rational> {
    let fusion = class_fusion(h, table_h.classes(), table_g.classes())?;
    let restricted: Vec<Cyclotomic> = fusion.iter().map(|&c| table_g.value(chi, c).clone()).collect();
    let mut acc = ProductSum::new();
    for c in 0..table_h.classes().len() {
        acc.add_product(&restricted[c], table_h.value(eta, c), true, table_h.classes().size(c) as i64);
    }
    let total = acc.finish();
    let v = total
        .as_integer()
        .ok_or_else(|| Error::VerificationFailed(format!("restriction product {total} is not rational")))?;
    Ok(Rational::new(BigInt::from(v), BigInt::from(h.order())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::classes::conjugacy_classes;
    use crate::perm::Permutation;
    use crate::subgroup::{derived_subgroup, subgroup_from_permutations};

    fn table(g: &PermGroup) -> CharacterTable {
        character_table(g, &conjugacy_classes(g)).unwrap()
    }

    #[test]
    fn alternating_five() {
        let g = catalog::alternating(5).unwrap();
        let t = table(&g);
        assert_eq!(t.degrees(), &[1, 3, 3, 4, 5]);
        assert_eq!(t.b(), 5);
        // the degree-3 characters take the golden-ratio values on 5-cycles
        let irr: Vec<_> = (0..5).filter(|&c| t.value(1, c).as_integer().is_none()).collect();
        assert_eq!(irr.len(), 2);
        assert_eq!(t.value(1, irr[0]).conductor(), 5);
    }

    #[test]
    fn small_tables() {
        let s3 = table(&catalog::symmetric(3).unwrap());
        assert_eq!(s3.degrees(), &[1, 1, 2]);
        let c4 = table(&catalog::cyclic(4).unwrap());
        assert_eq!(c4.degrees(), &[1, 1, 1, 1]);
        let i = Cyclotomic::root_of_unity(4, 1);
        let mut values: Vec<Cyclotomic> = (0..4).map(|r| c4.value(r, 3).clone()).collect();
        values.sort();
        let mut want: Vec<Cyclotomic> = (0..4).map(|k| i.pow(k)).collect();
        want.sort();
        assert_eq!(values, want);
        assert_eq!(c4.prime(), None);
    }

    /// Brute-force check of the table against element-level sums.
    fn brute_orthogonality(g: &PermGroup, t: &CharacterTable) {
        let cls = t.classes();
        for a in 0..t.len() {
            for b in 0..t.len() {
                let mut s = Cyclotomic::zero();
                for x in 0..g.order() as u32 {
                    let c = cls.class_of(x);
                    s = s.add(&t.value(a, c).mul(&t.value(b, c).conj()));
                }
                let want = if a == b { g.order() as i64 } else { 0 };
                assert_eq!(s, Cyclotomic::integer(want));
            }
        }
    }

    #[test]
    fn tables_pass_element_level_orthogonality() {
        for g in [
            catalog::dihedral(5).unwrap(),
            catalog::quaternion().unwrap(),
            catalog::frobenius_agl1(7).unwrap(),
            catalog::affine(7, 3).unwrap(),
            catalog::cyclic(6).unwrap(),
        ] {
            brute_orthogonality(&g, &table(&g));
        }
    }

    #[test]
    fn linear_count_is_abelianization_index() {
        for g in [
            catalog::symmetric(4).unwrap(),
            catalog::alternating(4).unwrap(),
            catalog::quaternion().unwrap(),
            catalog::frobenius_agl1(11).unwrap(),
            catalog::psl2(7).unwrap(),
        ] {
            let t = table(&g);
            let whole = SubgroupHandle::whole(&g);
            let d = derived_subgroup(&g, &whole);
            assert_eq!(t.num_linear(), g.order() / d.order());
        }
    }

    #[test]
    fn abelian_route_matches_modular_route() {
        // run the modular algorithm on an abelian group directly
        let g = catalog::direct_product(&catalog::cyclic(4).unwrap(), &catalog::cyclic(6).unwrap()).unwrap();
        let cls = conjugacy_classes(&g);
        let dual = character_table(&g, &cls).unwrap();
        let members = cls.members();
        let e = g.exponent();
        let q = candidate_primes(e, g.order() as u64, 1).next().unwrap();
        let modular = dixon_attempt(&g, &cls, &members, e, q).unwrap();
        assert_eq!(dual.values, modular.values);
    }

    #[test]
    fn kernels() {
        let g = catalog::symmetric(4).unwrap();
        let t = table(&g);
        assert_eq!(t.kernel(0), (0..t.len()).collect::<Vec<_>>());
        let two = (0..t.len()).find(|&r| t.degree(r) == 2).unwrap();
        let ker = t.kernel(two);
        let size: usize = ker.iter().map(|&c| t.classes().size(c)).sum();
        assert_eq!(size, 4);
        // the faithful degree-3 characters have trivial kernel
        for r in (0..t.len()).filter(|&r| t.degree(r) == 3) {
            assert_eq!(t.kernel(r), vec![0]);
        }
    }

    #[test]
    fn restrictions() {
        let g = catalog::alternating(5).unwrap();
        let tg = table(&g);
        let c5 = subgroup_from_permutations(&g, &[Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap()]).unwrap();
        let hg = c5.to_group(&g);
        let th = table(&hg);
        assert_eq!(restriction_inner_product(&tg, 0, &c5, &th, 0).unwrap(), Rational::from_integer(1.into()));
        let four = tg.degrees().iter().position(|&d| d == 4).unwrap();
        for eta in 1..5 {
            assert_eq!(restriction_inner_product(&tg, four, &c5, &th, eta).unwrap(), Rational::from_integer(1.into()));
        }

        let s4 = catalog::symmetric(4).unwrap();
        let t4 = table(&s4);
        let v4 = subgroup_from_permutations(
            &s4,
            &[
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let tv = table(&v4.to_group(&s4));
        for r in (0..t4.len()).filter(|&r| t4.degree(r) == 3) {
            assert_eq!(restriction_inner_product(&t4, r, &v4, &tv, 0).unwrap(), Rational::from_integer(0.into()));
        }
        // a table of a different group is rejected
        assert!(matches!(restriction_inner_product(&t4, 0, &v4, &t4, 0), Err(Error::NotSubgroup)));
    }

    #[test]
    fn deterministic_export() {
        let g = catalog::psl2(7).unwrap();
        let a = table(&g).export(&g);
        let b = table(&g).export(&g);
        assert_eq!(a, b);
        assert!(a.starts_with("order: 168\nclasses: 6\n"));
    }
}
