use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::perm::{compose_into, invert_into, slice_order, Permutation};

/// Default element cap for enumeration; covers every group the tooling ships.
pub const DEFAULT_ORDER_CAP: usize = 200_000;

/// A finite permutation group with every element enumerated.
///
/// Elements are addressed by `u32` indices in enumeration order; index 0 is
/// always the identity. The element list, inverse table and element orders
/// are computed once at construction and never change.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    points: Vec<u32>,
    index: FxHashMap<Box<[u32]>, u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    /// Enumerates the group generated by `generators` by breadth-first
    /// closure under right multiplication.
    pub fn from_generators(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<PermGroup> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let mut points: Vec<u32> = (0..degree as u32).collect();
        let mut index = FxHashMap::default();
        index.insert(points.clone().into_boxed_slice(), 0u32);
        if cap == 0 {
            return Err(Error::OrderCapExceeded { cap });
        }
        let mut queue = VecDeque::from([0usize]);
        let mut buf = vec![0u32; degree];
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                compose_into(&points[i * degree..(i + 1) * degree], g.images(), &mut buf);
                if index.contains_key(buf.as_slice()) {
                    continue;
                }
                let n = index.len();
                if n >= cap {
                    return Err(Error::OrderCapExceeded { cap });
                }
                index.insert(buf.clone().into_boxed_slice(), n as u32);
                points.extend_from_slice(&buf);
                queue.push_back(n);
            }
        }
        Ok(Self::finish(degree, generators, points, index))
    }

    /// Builds a group from an already closed element list (identity first).
    pub(crate) fn from_closed_elements(degree: usize, generators: Vec<Permutation>, points: Vec<u32>) -> PermGroup {
        let mut index = FxHashMap::default();
        for (i, chunk) in points.chunks(degree.max(1)).enumerate() {
            index.insert(chunk.to_vec().into_boxed_slice(), i as u32);
        }
        if degree == 0 {
            index.insert(Vec::new().into_boxed_slice(), 0);
        }
        Self::finish(degree, generators, points, index)
    }

    fn finish(
        degree: usize,
        generators: Vec<Permutation>,
        points: Vec<u32>,
        index: FxHashMap<Box<[u32]>, u32>,
    ) -> PermGroup {
        let order = index.len();
        let mut inverses = vec![0u32; order];
        let mut orders = vec![0u32; order];
        let mut buf = vec![0u32; degree];
        for i in 0..order {
            let e = &points[i * degree..(i + 1) * degree];
            invert_into(e, &mut buf);
            inverses[i] = index[buf.as_slice()];
            orders[i] = slice_order(e) as u32;
        }
        PermGroup { degree, generators, points, index, inverses, orders }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Element indices of the generators.
    pub fn generator_indices(&self) -> Vec<u32> {
        self.generators.iter().map(|g| self.index_of(g.images()).expect("generator is enumerated")).collect()
    }

    #[inline]
    pub fn element(&self, i: u32) -> &[u32] {
        let i = i as usize;
        &self.points[i * self.degree..(i + 1) * self.degree]
    }

    pub fn permutation(&self, i: u32) -> Permutation {
        Permutation::from_slice_unchecked(self.element(i))
    }

    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.order() as u32).map(|i| self.permutation(i))
    }

    #[inline]
    pub fn index_of(&self, images: &[u32]) -> Option<u32> {
        self.index.get(images).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p.images())
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut buf = vec![0u32; self.degree];
        self.mul_with(a, b, &mut buf)
    }

    /// Product `a * b` using caller-provided scratch space of length `degree`.
    #[inline]
    pub fn mul_with(&self, a: u32, b: u32, buf: &mut [u32]) -> u32 {
        compose_into(self.element(a), self.element(b), buf);
        self.index[&*buf]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `g^-1 * x * g`.
    pub fn conj_with(&self, x: u32, g: u32, buf: &mut [u32]) -> u32 {
        let t = self.mul_with(self.inv(g), x, buf);
        self.mul_with(t, g, buf)
    }

    pub fn commutator_with(&self, a: u32, b: u32, buf: &mut [u32]) -> u32 {
        let t = self.mul_with(self.inv(a), self.inv(b), buf);
        let t = self.mul_with(t, a, buf);
        self.mul_with(t, b, buf)
    }

    #[inline]
    pub fn element_order(&self, i: u32) -> u32 {
        self.orders[i as usize]
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_indices();
        let mut buf = vec![0u32; self.degree];
        for (k, &a) in gens.iter().enumerate() {
            for &b in &gens[k + 1..] {
                if self.mul_with(a, b, &mut buf) != self.mul_with(b, a, &mut buf) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn symmetric_three() {
        let g = PermGroup::from_generators(3, vec![perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.element(0).iter().enumerate().all(|(i, &j)| i as u32 == j));
        assert_eq!(g.exponent(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn trivial_group_on_one_point() {
        let g = PermGroup::from_generators(1, vec![], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    /// Closure by repeated multiplication of the whole element set, as an
    /// independent oracle for the queue-based enumeration.
    fn brute_closure(gens: &[Permutation]) -> usize {
        let mut set: std::collections::BTreeSet<Permutation> = gens.iter().cloned().collect();
        set.insert(Permutation::identity(gens[0].degree()));
        loop {
            let cur: Vec<_> = set.iter().cloned().collect();
            let before = set.len();
            for a in &cur {
                for b in &cur {
                    set.insert(a.mul(b));
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn five_cycle_and_three_cycle_generate_a5() {
        let gens = vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1, 2]])];
        assert_eq!(brute_closure(&gens), 60);
        let g = PermGroup::from_generators(5, gens, 1000).unwrap();
        assert_eq!(g.order(), 60);
    }

    #[test]
    fn cap_and_degree_errors() {
        let gens = vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])];
        assert_eq!(PermGroup::from_generators(5, gens, 50).unwrap_err(), Error::OrderCapExceeded { cap: 50 });
        let err = PermGroup::from_generators(4, vec![perm(3, &[&[0, 1]])], 10).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }

    #[test]
    fn inverses_and_orders() {
        let gens = vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])];
        let g = PermGroup::from_generators(4, gens, 100).unwrap();
        for i in 0..g.order() as u32 {
            assert_eq!(g.mul(i, g.inv(i)), 0);
            assert!(g.permutation(i).pow(g.element_order(i) as u64).is_identity());
        }
    }
}
