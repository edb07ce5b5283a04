use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored as its image array.
///
/// Products are read left to right: `a.mul(&b)` first applies `a`, then `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from its images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation { degree: n });
            }
            seen[i] = true;
        }
        Ok(Permutation { images: images.into_boxed_slice() })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::NotAPermutation { degree });
                }
                images[a as usize] = b;
            }
        }
        Self::from_images(images)
    }

    pub(crate) fn from_slice_unchecked(images: &[u32]) -> Self {
        Permutation { images: images.into() }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn mul(&self, other: &Permutation) -> Permutation {
        let mut out = vec![0; self.degree()];
        compose_into(&self.images, &other.images, &mut out);
        Permutation { images: out.into_boxed_slice() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0; self.degree()];
        invert_into(&self.images, &mut out);
        Permutation { images: out.into_boxed_slice() }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        slice_order(&self.images)
    }

    /// Cycle decomposition, omitting fixed points.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `out = a * b`, i.e. `out[i] = b[a[i]]`.
#[inline]
pub(crate) fn compose_into(a: &[u32], b: &[u32], out: &mut [u32]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = b[x as usize];
    }
}

#[inline]
pub(crate) fn invert_into(a: &[u32], out: &mut [u32]) {
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
}

pub(crate) fn slice_order(images: &[u32]) -> u64 {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut order = 1u64;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            len += 1;
            p = images[p] as usize;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn product_is_left_to_right() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.mul(&b).apply(0), 2);
        assert_eq!(a.mul(&b).order(), 3);
        assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn cycle_display() {
        let p = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
    }
}
