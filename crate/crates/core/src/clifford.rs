//! Characters of a group lying over characters of a normal subgroup:
//! orbits on `Irr(N)`, inertia groups, fibers `Irr(G|theta)` and their
//! average degrees.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chartab::{character_table, CharacterTable};
use crate::classes::{conjugacy_classes, ConjugacyData};
use crate::cyclotomic::{Cyclotomic, ProductSum};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::subgroup::SubgroupHandle;
use crate::Rational;

/// A linear character of N, as a row of N's character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCharacter {
    pub row: usize,
    pub values: Vec<Cyclotomic>,
    /// Multiplicative order, `|N : ker|`.
    pub order: u64,
}

impl LinearCharacter {
    pub fn is_square_free_order(&self) -> bool {
        let mut n = self.order;
        let mut p = 2;
        while p * p <= n {
            if n % (p * p) == 0 {
                return false;
            }
            if n % p == 0 {
                n /= p;
            }
            p += 1;
        }
        true
    }
}

/// An orbit of G on rows of N's character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest row index in the orbit.
    pub rep: usize,
    pub members: Vec<usize>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Rows of G's table lying over a set of characters of N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrOver {
    pub members: Vec<usize>,
}

impl IrrOver {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn degree_sum(&self, table: &CharacterTable) -> u64 {
        self.members.iter().map(|&r| table.degree(r)).sum()
    }

    pub fn average_degree(&self, table: &CharacterTable) -> Result<Rational> {
        if self.members.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Rational::new(BigInt::from(self.degree_sum(table)), BigInt::from(self.members.len())))
    }
}

/// A normal subgroup N of G together with N's character table, the fusion
/// of N-classes into G-classes and the action of G's generators on Irr(N).
#[derive(Debug, Clone)]
pub struct NormalContext {
    n: SubgroupHandle,
    n_table: CharacterTable,
    /// N-class to G-class.
    fusion: Vec<usize>,
    g_class_count: usize,
    g_order: usize,
    /// Parent element to N's own element index, `u32::MAX` outside N.
    local: Vec<u32>,
    gens: Vec<u32>,
    /// Per generator of G, the image of each row of N's table.
    row_action: Vec<Vec<usize>>,
}

impl NormalContext {
    pub fn new(g: &PermGroup, g_classes: &ConjugacyData, n: &SubgroupHandle) -> Result<Self> {
        let gens = g.generator_indices();
        if !n.is_normalized_by(g, &gens) {
            return Err(Error::NotNormal);
        }
        let n_group = n.to_group(g);
        let n_classes = conjugacy_classes(&n_group);
        let n_table = character_table(&n_group, &n_classes)?;
        Self::with_table(g, g_classes, n, n_table)
    }

    /// Uses a precomputed table of `n.to_group(g)`.
    pub fn with_table(
        g: &PermGroup,
        g_classes: &ConjugacyData,
        n: &SubgroupHandle,
        n_table: CharacterTable,
    ) -> Result<Self> {
        let gens = g.generator_indices();
        if !n.is_normalized_by(g, &gens) {
            return Err(Error::NotNormal);
        }
        let n_classes = n_table.classes();
        if n_classes.group_order() != n.order() {
            return Err(Error::NotSubgroup);
        }
        let fusion: Vec<usize> =
            (0..n_classes.len()).map(|c| g_classes.class_of(n.elements()[n_classes.rep(c) as usize])).collect();
        let mut local = vec![u32::MAX; g.order()];
        for (i, &x) in n.elements().iter().enumerate() {
            local[x as usize] = i as u32;
        }
        let row_index: HashMap<&[Cyclotomic], usize> = (0..n_table.len()).map(|r| (n_table.row(r), r)).collect();
        let mut buf = vec![0u32; g.degree()];
        let mut row_action = Vec::with_capacity(gens.len());
        for &s in &gens {
            // theta^s(y) = theta(s y s^-1), so class c maps to the class of s rep s^-1
            let s_inv = g.inv(s);
            let class_perm: Vec<usize> = (0..n_classes.len())
                .map(|c| {
                    let x = n.elements()[n_classes.rep(c) as usize];
                    let y = g.conj_with(x, s_inv, &mut buf);
                    n_classes.class_of(local[y as usize])
                })
                .collect();
            let images = (0..n_table.len())
                .map(|r| {
                    let moved: Vec<Cyclotomic> = class_perm.iter().map(|&c| n_table.value(r, c).clone()).collect();
                    row_index
                        .get(moved.as_slice())
                        .copied()
                        .ok_or_else(|| Error::VerificationFailed("conjugate of a character is not a character".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            row_action.push(images);
        }
        Ok(NormalContext {
            n: n.clone(),
            n_table,
            fusion,
            g_class_count: g_classes.len(),
            g_order: g.order(),
            local,
            gens,
            row_action,
        })
    }

    pub fn normal_subgroup(&self) -> &SubgroupHandle {
        &self.n
    }

    pub fn n_table(&self) -> &CharacterTable {
        &self.n_table
    }

    pub fn fusion(&self) -> &[usize] {
        &self.fusion
    }

    /// Class of N containing a parent element, if it lies in N.
    pub fn n_class_of(&self, parent_element: u32) -> Option<usize> {
        match self.local[parent_element as usize] {
            u32::MAX => None,
            i => Some(self.n_table.classes().class_of(i)),
        }
    }

    /// Value of a character of N at a parent element of N.
    pub fn value_at(&self, row: usize, parent_element: u32) -> Option<&Cyclotomic> {
        self.n_class_of(parent_element).map(|c| self.n_table.value(row, c))
    }

    pub fn linear_characters(&self) -> Vec<LinearCharacter> {
        linear_rows(&self.n_table)
    }

    /// Orbits of G on the given rows of N's table (a union of orbits), or on
    /// all of Irr(N).
    pub fn orbits(&self, rows: Option<&[usize]>) -> Vec<Orbit> {
        let all: Vec<usize> = (0..self.n_table.len()).collect();
        let rows = rows.unwrap_or(&all);
        let mut seen = vec![false; self.n_table.len()];
        let mut out = Vec::new();
        for &start in rows {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for act in &self.row_action {
                    let y = act[x];
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(Orbit { rep: members[0], members });
        }
        out.sort_by_key(|o| o.rep);
        out
    }

    pub fn orbits_on_linear(&self) -> Vec<Orbit> {
        let rows: Vec<usize> = self.linear_characters().iter().map(|l| l.row).collect();
        self.orbits(Some(&rows))
    }

    /// Stabilizer of a row of N's table, from Schreier generators of its orbit.
    pub fn inertia_group(&self, g: &PermGroup, row: usize) -> SubgroupHandle {
        let mut transversal: HashMap<usize, u32> = HashMap::from([(row, 0)]);
        let mut queue = vec![row];
        let mut schreier = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let tx = transversal[&x];
            for (s, act) in self.gens.iter().zip(&self.row_action) {
                let y = act[x];
                let t_s = g.mul(tx, *s);
                match transversal.get(&y) {
                    Some(&ty) => {
                        let sg = g.mul(t_s, g.inv(ty));
                        if sg != 0 {
                            schreier.push(sg);
                        }
                    }
                    None => {
                        transversal.insert(y, t_s);
                        queue.push(y);
                    }
                }
            }
        }
        schreier.sort_unstable();
        schreier.dedup();
        SubgroupHandle::generated(g, &schreier)
    }

    fn check_table(&self, g_table: &CharacterTable) -> Result<()> {
        if g_table.group_order() != self.g_order || g_table.classes().len() != self.g_class_count {
            return Err(Error::ValidationFailed("table does not belong to the ambient group".into()));
        }
        Ok(())
    }

    /// `<chi_N, theta>` for a row of G's table and a row of N's table.
    pub fn restriction_multiplicity(&self, g_table: &CharacterTable, chi: usize, theta: usize) -> Result<Rational> {
        self.check_table(g_table)?;
        let ncl = self.n_table.classes();
        let mut acc = ProductSum::new();
        for c in 0..ncl.len() {
            acc.add_product(g_table.value(chi, self.fusion[c]), self.n_table.value(theta, c), true, ncl.size(c) as i64);
        }
        let total = acc.finish();
        let v = total
            .as_integer()
            .ok_or_else(|| Error::VerificationFailed(format!("restriction product {total} is not rational")))?;
        Ok(Rational::new(BigInt::from(v), BigInt::from(self.n.order())))
    }

    pub fn irr_over(&self, g_table: &CharacterTable, theta: usize) -> Result<IrrOver> {
        self.irr_over_set(g_table, &[theta])
    }

    pub fn irr_over_set(&self, g_table: &CharacterTable, thetas: &[usize]) -> Result<IrrOver> {
        let mut members = Vec::new();
        for chi in 0..g_table.len() {
            for &t in thetas {
                if !self.restriction_multiplicity(g_table, chi, t)?.is_zero() {
                    members.push(chi);
                    break;
                }
            }
        }
        Ok(IrrOver { members })
    }

    pub fn acd_over(&self, g_table: &CharacterTable, theta: usize) -> Result<Rational> {
        self.irr_over(g_table, theta)?.average_degree(g_table)
    }

    pub fn acd_over_set(&self, g_table: &CharacterTable, thetas: &[usize]) -> Result<Rational> {
        self.irr_over_set(g_table, thetas)?.average_degree(g_table)
    }

    /// Rows of G's table whose kernel does not contain N.
    pub fn irr_above(&self, g_table: &CharacterTable) -> Result<IrrOver> {
        self.check_table(g_table)?;
        if self.n.is_trivial() {
            return Err(Error::TrivialN);
        }
        let members = (0..g_table.len())
            .filter(|&chi| {
                let d = Cyclotomic::integer(g_table.degree(chi) as i64);
                self.fusion.iter().any(|&c| *g_table.value(chi, c) != d)
            })
            .collect();
        Ok(IrrOver { members })
    }

    pub fn acd_above(&self, g_table: &CharacterTable) -> Result<Rational> {
        self.irr_above(g_table)?.average_degree(g_table)
    }

    /// Whether some irreducible character of G restricts to `theta`.
    pub fn extends(&self, g_table: &CharacterTable, theta: usize) -> Result<bool> {
        let d = self.n_table.degree(theta);
        for chi in (0..g_table.len()).filter(|&chi| g_table.degree(chi) == d) {
            if !self.restriction_multiplicity(g_table, chi, theta)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn linear_rows(table: &CharacterTable) -> Vec<LinearCharacter> {
    let cls = table.classes();
    (0..table.len())
        .filter(|&r| table.degree(r) == 1)
        .map(|r| {
            let kernel: usize = table.kernel(r).iter().map(|&c| cls.size(c)).sum();
            LinearCharacter { row: r, values: table.row(r).to_vec(), order: (cls.group_order() / kernel) as u64 }
        })
        .collect()
}

/// Linear characters of N, computed from N's own character table.
pub fn linear_characters(g: &PermGroup, n: &SubgroupHandle) -> Result<Vec<LinearCharacter>> {
    let ng = n.to_group(g);
    let table = character_table(&ng, &conjugacy_classes(&ng))?;
    Ok(linear_rows(&table))
}
