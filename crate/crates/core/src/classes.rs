use crate::group::PermGroup;
use crate::perm::Permutation;

/// Conjugacy classes of an enumerated group in canonical order.
///
/// Classes are sorted by (element order, class size, representative), where
/// the representative is the lexicographically least element of its class
/// by image array. Class 0 is therefore always the identity class.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    group_order: usize,
    reps: Vec<u32>,
    rep_perms: Vec<Permutation>,
    sizes: Vec<usize>,
    orders: Vec<u32>,
    class_of: Vec<u32>,
    power_map: Vec<Vec<u32>>,
    inverse_class: Vec<u32>,
}

pub fn conjugacy_classes(g: &PermGroup) -> ConjugacyData {
    let n = g.order();
    let gens = g.generator_indices();
    let mut buf = vec![0u32; g.degree()];
    let mut raw_class = vec![u32::MAX; n];
    let mut raw: Vec<(u32, Vec<u32>)> = Vec::new();
    for x in 0..n as u32 {
        if raw_class[x as usize] != u32::MAX {
            continue;
        }
        let id = raw.len() as u32;
        raw_class[x as usize] = id;
        let mut members = vec![x];
        let mut head = 0;
        while head < members.len() {
            let y = members[head];
            head += 1;
            for &s in &gens {
                let z = g.conj_with(y, s, &mut buf);
                if raw_class[z as usize] == u32::MAX {
                    raw_class[z as usize] = id;
                    members.push(z);
                }
            }
        }
        let rep = *members.iter().min_by(|&&a, &&b| g.element(a).cmp(g.element(b))).unwrap();
        raw.push((rep, members));
    }

    let mut perm: Vec<usize> = (0..raw.len()).collect();
    perm.sort_by(|&a, &b| {
        let (ra, ma) = &raw[a];
        let (rb, mb) = &raw[b];
        (g.element_order(*ra), ma.len(), g.element(*ra)).cmp(&(g.element_order(*rb), mb.len(), g.element(*rb)))
    });
    let mut new_id = vec![0u32; raw.len()];
    for (pos, &old) in perm.iter().enumerate() {
        new_id[old] = pos as u32;
    }
    let class_of: Vec<u32> = raw_class.iter().map(|&c| new_id[c as usize]).collect();
    let reps: Vec<u32> = perm.iter().map(|&old| raw[old].0).collect();
    let sizes: Vec<usize> = perm.iter().map(|&old| raw[old].1.len()).collect();
    let orders: Vec<u32> = reps.iter().map(|&r| g.element_order(r)).collect();
    let rep_perms = reps.iter().map(|&r| g.permutation(r)).collect();

    let mut power_map = Vec::with_capacity(reps.len());
    for &r in &reps {
        let ord = g.element_order(r) as usize;
        let mut row = Vec::with_capacity(ord);
        let mut x = 0u32;
        for _ in 0..ord {
            row.push(class_of[x as usize]);
            x = g.mul_with(x, r, &mut buf);
        }
        power_map.push(row);
    }
    let inverse_class = reps.iter().map(|&r| class_of[g.inv(r) as usize]).collect();

    ConjugacyData { group_order: n, reps, rep_perms, sizes, orders, class_of, power_map, inverse_class }
}

impl ConjugacyData {
    /// Number of classes, k(G).
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Element index of the representative of class `c`.
    pub fn rep(&self, c: usize) -> u32 {
        self.reps[c]
    }

    pub fn rep_permutation(&self, c: usize) -> &Permutation {
        &self.rep_perms[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn centralizer_order(&self, c: usize) -> usize {
        self.group_order / self.sizes[c]
    }

    /// Element order of the members of class `c`.
    pub fn element_order(&self, c: usize) -> u32 {
        self.orders[c]
    }

    pub fn class_of(&self, element: u32) -> usize {
        self.class_of[element as usize] as usize
    }

    /// Class containing the `j`-th power of the members of class `c`.
    pub fn power(&self, c: usize, j: i64) -> usize {
        let row = &self.power_map[c];
        row[j.rem_euclid(row.len() as i64) as usize] as usize
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c] as usize
    }

    /// Members of each class, in element-index order.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x as u32);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Brute-force class partition via conjugation by every element.
    fn brute_class_sizes(g: &PermGroup) -> Vec<usize> {
        let n = g.order() as u32;
        let mut seen = vec![false; n as usize];
        let mut sizes = Vec::new();
        for x in 0..n {
            if seen[x as usize] {
                continue;
            }
            let mut cls = std::collections::BTreeSet::new();
            for y in 0..n {
                cls.insert(g.mul(g.mul(g.inv(y), x), y));
            }
            for &c in &cls {
                seen[c as usize] = true;
            }
            sizes.push(cls.len());
        }
        sizes.sort();
        sizes
    }

    #[test]
    fn s3_classes() {
        let g = catalog::symmetric(3).unwrap();
        let c = conjugacy_classes(&g);
        assert_eq!(c.sizes(), &[1, 3, 2]);
        assert_eq!(brute_class_sizes(&g), vec![1, 2, 3]);
    }

    #[test]
    fn a5_classes() {
        let g = catalog::alternating(5).unwrap();
        let c = conjugacy_classes(&g);
        let mut sizes = c.sizes().to_vec();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(brute_class_sizes(&g), sizes);
        assert_eq!(c.sizes().iter().sum::<usize>(), 60);
        for i in 0..c.len() {
            assert_eq!(c.class_of(c.rep(i)), i);
            assert_eq!(60 % c.size(i), 0);
        }
    }

    #[test]
    fn c4_is_four_singletons() {
        let g = catalog::cyclic(4).unwrap();
        let c = conjugacy_classes(&g);
        assert_eq!(c.len(), 4);
        assert!(c.sizes().iter().all(|&s| s == 1));
        // the class of order 4 squares onto the involution
        let four = (0..4).find(|&i| c.element_order(i) == 4).unwrap();
        assert_eq!(c.element_order(c.power(four, 2)), 2);
        assert_eq!(c.power(four, -1), c.inverse_class(four));
    }
}
