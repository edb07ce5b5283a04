use crate::classes::ConjugacyData;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// A subgroup of an enumerated parent, stored as parent element indices.
///
/// `elements()` lists members in closure order with the identity first.
#[derive(Clone)]
pub struct SubgroupHandle {
    elements: Vec<u32>,
    member: Vec<u64>,
    generators: Vec<u32>,
    normal: bool,
}

impl std::fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupHandle").field("order", &self.order()).field("normal", &self.normal).finish()
    }
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        self.member == other.member
    }
}
impl Eq for SubgroupHandle {}

impl SubgroupHandle {
    pub fn trivial(parent: &PermGroup) -> Self {
        let words = parent.order().div_ceil(64);
        let mut member = vec![0u64; words];
        member[0] |= 1;
        SubgroupHandle { elements: vec![0], member, generators: Vec::new(), normal: true }
    }

    /// The parent group itself.
    pub fn whole(parent: &PermGroup) -> Self {
        let words = parent.order().div_ceil(64);
        let mut member = vec![u64::MAX; words];
        let rem = parent.order() % 64;
        if rem != 0 {
            member[words - 1] = (1u64 << rem) - 1;
        }
        SubgroupHandle {
            elements: (0..parent.order() as u32).collect(),
            member,
            generators: parent.generator_indices(),
            normal: true,
        }
    }

    /// Subgroup generated by the given parent elements.
    pub fn generated(parent: &PermGroup, gens: &[u32]) -> Self {
        let mut h = Self::trivial(parent);
        let mut buf = vec![0u32; parent.degree()];
        for &g in gens {
            h.extend(parent, g, &mut buf, |_| true);
        }
        h.normal = false;
        h
    }

    /// Validates an arbitrary element set as a subgroup.
    pub fn from_elements(parent: &PermGroup, elements: &[u32]) -> Result<Self> {
        let h = Self::generated(parent, elements);
        if h.order() != {
            let mut e = elements.to_vec();
            e.sort_unstable();
            e.dedup();
            e.len()
        } {
            return Err(Error::NotSubgroup);
        }
        Ok(h)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.member[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Whether the subgroup was verified normal in its parent.
    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_subset_of(&self, other: &SubgroupHandle) -> bool {
        self.member.iter().zip(&other.member).all(|(a, b)| a & !b == 0)
    }

    fn insert(&mut self, x: u32) {
        self.member[(x / 64) as usize] |= 1 << (x % 64);
        self.elements.push(x);
    }

    /// Dimino extension by one generator. `accept` is consulted for every new
    /// element; returning false aborts and leaves the handle unusable.
    fn extend(&mut self, g: &PermGroup, s: u32, buf: &mut [u32], mut accept: impl FnMut(u32) -> bool) -> bool {
        if self.contains(s) {
            return true;
        }
        let block: Vec<u32> = self.elements.clone();
        let h = block.len();
        self.generators.push(s);
        let mut add_coset = |this: &mut Self, r: u32, buf: &mut [u32]| -> bool {
            for &x in &block {
                let y = g.mul_with(x, r, buf);
                if !accept(y) {
                    return false;
                }
                this.insert(y);
            }
            true
        };
        if !add_coset(self, s, buf) {
            return false;
        }
        let mut pos = h;
        while pos < self.elements.len() {
            let r = self.elements[pos];
            for k in 0..self.generators.len() {
                let y = g.mul_with(r, self.generators[k], buf);
                if !self.contains(y) && !add_coset(self, y, buf) {
                    return false;
                }
            }
            pos += h;
        }
        true
    }

    /// Whether conjugation by every given parent element preserves the subgroup.
    pub fn is_normalized_by(&self, g: &PermGroup, conjugators: &[u32]) -> bool {
        let mut buf = vec![0u32; g.degree()];
        self.generators.iter().all(|&k| conjugators.iter().all(|&c| self.contains(g.conj_with(k, c, &mut buf))))
    }

    /// Returns a copy with the normal flag set after checking it against the
    /// parent generators.
    pub fn checked_normal(mut self, g: &PermGroup) -> Result<Self> {
        if self.is_normalized_by(g, &g.generator_indices()) {
            self.normal = true;
            Ok(self)
        } else {
            Err(Error::NotNormal)
        }
    }

    /// The subgroup as a group in its own right, sharing the parent degree.
    /// Element `i` of the result is parent element `self.elements()[i]`.
    pub fn to_group(&self, parent: &PermGroup) -> PermGroup {
        let mut points = Vec::with_capacity(self.order() * parent.degree());
        for &x in &self.elements {
            points.extend_from_slice(parent.element(x));
        }
        let gens = self.generators.iter().map(|&x| parent.permutation(x)).collect();
        PermGroup::from_closed_elements(parent.degree(), gens, points)
    }
}

/// `inner` as a subgroup of `outer_group = outer.to_group(parent)`.
pub fn relative_subgroup(
    outer: &SubgroupHandle,
    outer_group: &PermGroup,
    inner: &SubgroupHandle,
) -> Result<SubgroupHandle> {
    let local: rustc_hash::FxHashMap<u32, u32> =
        outer.elements().iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let elems =
        inner.elements().iter().map(|x| local.get(x).copied().ok_or(Error::NotSubgroup)).collect::<Result<Vec<_>>>()?;
    SubgroupHandle::from_elements(outer_group, &elems)
}

/// Group generated by permutations inside an enumerated parent.
pub fn subgroup_from_permutations(parent: &PermGroup, gens: &[Permutation]) -> Result<SubgroupHandle> {
    let idx = gens.iter().map(|p| parent.index_of(p.images()).ok_or(Error::NotSubgroup)).collect::<Result<Vec<_>>>()?;
    Ok(SubgroupHandle::generated(parent, &idx))
}

/// Smallest subgroup containing `seeds` and normalized by `conjugators`.
pub fn normal_closure(g: &PermGroup, conjugators: &[u32], seeds: &[u32]) -> SubgroupHandle {
    normal_closure_filtered(g, conjugators, seeds, |_| true).expect("unfiltered closure")
}

/// Normal closure that aborts with `None` as soon as an element fails `accept`.
fn normal_closure_filtered(
    g: &PermGroup,
    conjugators: &[u32],
    seeds: &[u32],
    mut accept: impl FnMut(u32) -> bool,
) -> Option<SubgroupHandle> {
    let mut buf = vec![0u32; g.degree()];
    let mut k = SubgroupHandle::trivial(g);
    for &s in seeds {
        if !k.extend(g, s, &mut buf, &mut accept) {
            return None;
        }
    }
    let mut i = 0;
    while i < k.generators.len() {
        let x = k.generators[i];
        for &c in conjugators {
            let y = g.conj_with(x, c, &mut buf);
            if !k.extend(g, y, &mut buf, &mut accept) {
                return None;
            }
        }
        i += 1;
    }
    Some(k)
}

/// Normal closure of `seeds` in the whole parent group.
pub fn normal_closure_in_group(g: &PermGroup, seeds: &[u32]) -> SubgroupHandle {
    let mut h = normal_closure(g, &g.generator_indices(), seeds);
    h.normal = true;
    h
}

/// Join of two normal subgroups.
pub fn join_normal(g: &PermGroup, a: &SubgroupHandle, b: &SubgroupHandle) -> SubgroupHandle {
    let mut out = a.clone();
    let mut buf = vec![0u32; g.degree()];
    for &x in b.generators() {
        out.extend(g, x, &mut buf, |_| true);
    }
    out.normal = a.normal && b.normal;
    out
}

/// Commutator subgroup `[H, H]`.
pub fn derived_subgroup(g: &PermGroup, h: &SubgroupHandle) -> SubgroupHandle {
    let mut buf = vec![0u32; g.degree()];
    let gens = h.generators();
    let mut comms = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let c = g.commutator_with(a, b, &mut buf);
            if c != 0 {
                comms.push(c);
            }
        }
    }
    let mut d = normal_closure(g, gens, &comms);
    // a characteristic subgroup of a normal subgroup is normal
    d.normal = h.normal;
    d
}

/// Derived series `H = H(0) > H(1) > ...` down to the point where it stabilizes.
pub fn derived_series_of(g: &PermGroup, h: &SubgroupHandle) -> Vec<SubgroupHandle> {
    let mut series = vec![h.clone()];
    loop {
        let last = series.last().unwrap();
        let d = derived_subgroup(g, last);
        if d.order() == last.order() {
            return series;
        }
        series.push(d);
    }
}

pub fn derived_series(g: &PermGroup) -> Vec<SubgroupHandle> {
    derived_series_of(g, &SubgroupHandle::whole(g))
}

pub fn is_solvable_subgroup(g: &PermGroup, h: &SubgroupHandle) -> bool {
    derived_series_of(g, h).last().unwrap().is_trivial()
}

pub fn is_solvable(g: &PermGroup) -> bool {
    is_solvable_subgroup(g, &SubgroupHandle::whole(g))
}

/// Number of strict steps in the derived series of a solvable group.
pub fn derived_length(g: &PermGroup) -> Result<usize> {
    let series = derived_series(g);
    if !series.last().unwrap().is_trivial() {
        return Err(Error::NotSolvable);
    }
    Ok(series.len() - 1)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Nilpotency test: for every prime p dividing |H|, the p-elements of H
/// number exactly the p-part of |H|, i.e. every Sylow subgroup is normal.
pub fn is_nilpotent(g: &PermGroup, h: &SubgroupHandle) -> bool {
    let order = h.order() as u64;
    prime_factors(order).into_iter().all(|p| {
        let count = h.elements().iter().filter(|&&x| is_power_of(g.element_order(x) as u64, p)).count() as u64;
        count == p_part(order, p)
    })
}

/// `x = prod x_p` with `x_p` the p-part of x, each a power of x.
fn prime_parts(g: &PermGroup, x: u32) -> Vec<(u64, u32)> {
    let n = g.element_order(x) as u64;
    let perm = g.permutation(x);
    prime_factors(n)
        .into_iter()
        .map(|p| {
            let q = p_part(n, p);
            let m = n / q;
            // m * inv(m mod q) is 1 mod q and 0 mod m
            let e = m * mod_inverse(m % q, q);
            (p, g.index_of(perm.pow(e).images()).unwrap())
        })
        .collect()
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(m as i64) as u64
}

/// Fitting subgroup: generated by the class representatives whose normal
/// closure is nilpotent.
///
/// The normal closure of x is nilpotent iff the normal closure of every
/// prime-power part of x is a p-group, which lets the closure abort on the
/// first element that is not a p-element.
pub fn fitting_subgroup(g: &PermGroup, classes: &ConjugacyData) -> SubgroupHandle {
    let gens = g.generator_indices();
    let mut fit = SubgroupHandle::trivial(g);
    for c in 1..classes.len() {
        let x = classes.rep(c);
        if fit.contains(x) {
            continue;
        }
        let nilpotent_closure = prime_parts(g, x).into_iter().all(|(p, xp)| {
            fit.contains(xp)
                || normal_closure_filtered(g, &gens, &[xp], |y| is_power_of(g.element_order(y) as u64, p)).is_some()
        });
        if nilpotent_closure {
            let ncl = normal_closure_in_group(g, &[x]);
            fit = join_normal(g, &fit, &ncl);
        }
    }
    fit.normal = true;
    debug_assert!(is_nilpotent(g, &fit));
    fit
}

/// Solvable radical: generated by the class representatives whose normal
/// closure is solvable.
pub fn solvable_radical(g: &PermGroup, classes: &ConjugacyData) -> SubgroupHandle {
    if is_solvable(g) {
        return SubgroupHandle::whole(g);
    }
    let mut rad = SubgroupHandle::trivial(g);
    for c in 1..classes.len() {
        let x = classes.rep(c);
        if rad.contains(x) {
            continue;
        }
        let ncl = normal_closure_in_group(g, &[x]);
        if is_solvable_subgroup(g, &ncl) {
            rad = join_normal(g, &rad, &ncl);
        }
    }
    rad.normal = true;
    rad
}

/// Socle of a group with trivial solvable radical: the product of the
/// inclusion-minimal nontrivial normal closures of class representatives.
pub fn socle_trivial_radical(g: &PermGroup, classes: &ConjugacyData) -> Result<SubgroupHandle> {
    let rad = solvable_radical(g, classes);
    if !rad.is_trivial() {
        return Err(Error::NonTrivialRadical { order: rad.order() });
    }
    let closures: Vec<SubgroupHandle> =
        (1..classes.len()).map(|c| normal_closure_in_group(g, &[classes.rep(c)])).collect();
    let mut socle = SubgroupHandle::trivial(g);
    for (i, n) in closures.iter().enumerate() {
        let minimal = closures.iter().enumerate().all(|(j, m)| i == j || !(m.is_subset_of(n) && m.order() < n.order()));
        if minimal {
            socle = join_normal(g, &socle, n);
        }
    }
    Ok(socle)
}

/// The full normal subgroup lattice, ordered by (order, element set).
pub fn normal_subgroups(g: &PermGroup, classes: &ConjugacyData, cap: usize) -> Result<Vec<SubgroupHandle>> {
    let mut found: Vec<SubgroupHandle> = vec![SubgroupHandle::trivial(g)];
    let push = |found: &mut Vec<SubgroupHandle>, h: SubgroupHandle| -> Result<bool> {
        if found.iter().any(|f| f == &h) {
            return Ok(false);
        }
        if found.len() >= cap {
            return Err(Error::LatticeCapExceeded { cap });
        }
        found.push(h);
        Ok(true)
    };
    for c in 1..classes.len() {
        push(&mut found, normal_closure_in_group(g, &[classes.rep(c)]))?;
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let joined = join_normal(g, &found[i], &found[j]);
            push(&mut found, joined)?;
        }
        i += 1;
    }
    found.sort_by(|a, b| (a.order(), &a.member).cmp(&(b.order(), &b.member)));
    Ok(found)
}

/// A quotient group with the projection from the parent.
pub struct Quotient {
    pub group: PermGroup,
    /// Parent element index to quotient element index.
    pub projection: Vec<u32>,
}

/// `G/N` as the permutation action of G on the right cosets of N.
pub fn quotient_group(g: &PermGroup, n: &SubgroupHandle) -> Result<Quotient> {
    if !n.is_normalized_by(g, &g.generator_indices()) {
        return Err(Error::NotNormal);
    }
    let mut label = vec![u32::MAX; g.order()];
    let mut coset_reps = Vec::new();
    let mut buf = vec![0u32; g.degree()];
    for x in 0..g.order() as u32 {
        if label[x as usize] != u32::MAX {
            continue;
        }
        let id = coset_reps.len() as u32;
        coset_reps.push(x);
        for &m in n.elements() {
            label[g.mul_with(m, x, &mut buf) as usize] = id;
        }
    }
    let images = |x: u32, buf: &mut [u32]| -> Vec<u32> {
        coset_reps.iter().map(|&r| label[g.mul_with(r, x, buf) as usize]).collect()
    };
    let degree = coset_reps.len();
    let gens = g
        .generator_indices()
        .into_iter()
        .map(|x| Permutation::from_images(images(x, &mut buf)))
        .collect::<Result<Vec<_>>>()?;
    let q = PermGroup::from_generators(degree, gens, degree.max(1))?;
    // the action is regular: an element is determined by where it sends coset 0
    let mut by_image0 = vec![0u32; degree];
    for e in 0..q.order() as u32 {
        by_image0[q.element(e)[0] as usize] = e;
    }
    let projection = label.iter().map(|&l| by_image0[l as usize]).collect();
    Ok(Quotient { group: q, projection })
}

/// Frattini subgroup of a nilpotent subgroup: the product over its Sylow
/// subgroups P of the subgroup generated by commutators and p-th powers of P.
pub fn frattini_nilpotent(g: &PermGroup, h: &SubgroupHandle) -> Result<SubgroupHandle> {
    if !is_nilpotent(g, h) {
        return Err(Error::NotNilpotent);
    }
    let mut buf = vec![0u32; g.degree()];
    let mut seeds = Vec::new();
    for p in prime_factors(h.order() as u64) {
        let sylow: Vec<u32> =
            h.elements().iter().copied().filter(|&x| is_power_of(g.element_order(x) as u64, p)).collect();
        for &x in &sylow {
            let xp = g.index_of(g.permutation(x).pow(p).images()).unwrap();
            seeds.push(xp);
            for &y in &sylow {
                seeds.push(g.commutator_with(x, y, &mut buf));
            }
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    let mut phi = SubgroupHandle::generated(g, &seeds);
    phi.normal = h.normal;
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::classes::conjugacy_classes;

    /// Oracle: all normal subgroups by brute force over normal closures of
    /// every element subset of size <= 2 (enough for these small groups).
    fn brute_normal_orders(g: &PermGroup) -> Vec<usize> {
        let n = g.order() as u32;
        let mut found: Vec<SubgroupHandle> = vec![SubgroupHandle::trivial(g)];
        for a in 0..n {
            for b in a..n {
                let h = normal_closure_in_group(g, &[a, b]);
                if !found.contains(&h) {
                    found.push(h);
                }
            }
        }
        let mut o: Vec<usize> = found.iter().map(|h| h.order()).collect();
        o.sort();
        o
    }

    #[test]
    fn s4_lattice_and_series() {
        let g = catalog::symmetric(4).unwrap();
        let cls = conjugacy_classes(&g);
        let lat = normal_subgroups(&g, &cls, 100).unwrap();
        let orders: Vec<usize> = lat.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
        assert_eq!(brute_normal_orders(&g), orders);
        let series: Vec<usize> = derived_series(&g).iter().map(|h| h.order()).collect();
        assert_eq!(series, vec![24, 12, 4, 1]);
        assert_eq!(derived_length(&g).unwrap(), 3);
        let fit = fitting_subgroup(&g, &cls);
        assert_eq!(fit.order(), 4);
        assert!(fit.is_normal());
    }

    #[test]
    fn a5_is_perfect() {
        let g = catalog::alternating(5).unwrap();
        let cls = conjugacy_classes(&g);
        assert!(!is_solvable(&g));
        assert_eq!(derived_length(&g).unwrap_err(), Error::NotSolvable);
        assert!(fitting_subgroup(&g, &cls).is_trivial());
        assert!(solvable_radical(&g, &cls).is_trivial());
        assert_eq!(socle_trivial_radical(&g, &cls).unwrap().order(), 60);
        let lat = normal_subgroups(&g, &cls, 10).unwrap();
        assert_eq!(lat.len(), 2);
    }

    #[test]
    fn radical_of_a5_times_c2() {
        let g = catalog::direct_product(&catalog::alternating(5).unwrap(), &catalog::cyclic(2).unwrap()).unwrap();
        let cls = conjugacy_classes(&g);
        let rad = solvable_radical(&g, &cls);
        assert_eq!(rad.order(), 2);
        assert!(matches!(socle_trivial_radical(&g, &cls), Err(Error::NonTrivialRadical { order: 2 })));
    }

    #[test]
    fn socle_of_s5_and_a5_squared() {
        let g = catalog::symmetric(5).unwrap();
        let cls = conjugacy_classes(&g);
        assert_eq!(socle_trivial_radical(&g, &cls).unwrap().order(), 60);
        let a5 = catalog::alternating(5).unwrap();
        let g = catalog::direct_product(&a5, &a5).unwrap();
        let cls = conjugacy_classes(&g);
        assert_eq!(socle_trivial_radical(&g, &cls).unwrap().order(), 3600);
    }

    #[test]
    fn nilpotency() {
        let v4 = catalog::elementary_abelian(2, 2).unwrap();
        assert!(is_nilpotent(&v4, &SubgroupHandle::whole(&v4)));
        let s3 = catalog::symmetric(3).unwrap();
        assert!(!is_nilpotent(&s3, &SubgroupHandle::whole(&s3)));
        let d8 = catalog::dihedral(4).unwrap();
        assert!(is_nilpotent(&d8, &SubgroupHandle::whole(&d8)));
    }

    #[test]
    fn quotients() {
        let g = catalog::symmetric(4).unwrap();
        let cls = conjugacy_classes(&g);
        let v4 = fitting_subgroup(&g, &cls);
        let q = quotient_group(&g, &v4).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());
        let top = quotient_group(&g, &SubgroupHandle::whole(&g)).unwrap();
        assert_eq!(top.group.order(), 1);
        // projection is a homomorphism
        let mut buf = vec![0; g.degree()];
        for a in 0..24u32 {
            for b in 0..24u32 {
                let ab = g.mul_with(a, b, &mut buf);
                assert_eq!(q.projection[ab as usize], q.group.mul(q.projection[a as usize], q.projection[b as usize]));
            }
        }
        let non_normal = SubgroupHandle::generated(&g, &[g.generator_indices()[1]]);
        assert!(quotient_group(&g, &non_normal).is_err() || non_normal.order() == 24);
    }

    #[test]
    fn frattini() {
        let c4 = catalog::cyclic(4).unwrap();
        assert_eq!(frattini_nilpotent(&c4, &SubgroupHandle::whole(&c4)).unwrap().order(), 2);
        let q8 = catalog::quaternion().unwrap();
        let phi = frattini_nilpotent(&q8, &SubgroupHandle::whole(&q8)).unwrap();
        assert_eq!(phi.order(), 2);
        let e = catalog::elementary_abelian(2, 6).unwrap();
        assert!(frattini_nilpotent(&e, &SubgroupHandle::whole(&e)).unwrap().is_trivial());
        let s3 = catalog::symmetric(3).unwrap();
        assert_eq!(frattini_nilpotent(&s3, &SubgroupHandle::whole(&s3)).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn prime_parts_multiply_back() {
        let g = catalog::cyclic(12).unwrap();
        for x in 0..12u32 {
            let parts = prime_parts(&g, x);
            let prod = parts.iter().fold(0u32, |acc, &(_, y)| g.mul(acc, y));
            assert_eq!(prod, x);
        }
    }
}
