//! Arithmetic and linear algebra over a prime field `F_q` with `q < 2^32`.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Self {
        debug_assert!(q < 1 << 32);
        PrimeField { q }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.q != 0);
        self.pow(a, self.q - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.q as i64) as u64
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        let q = self.q;
        if q == 2 {
            return 1;
        }
        let factors = prime_factors(q - 1);
        (2..q)
            .find(|&g| factors.iter().all(|&p| self.pow(g, (q - 1) / p) != 1))
            .expect("prime field has a primitive root")
    }

    /// Characteristic polynomial `det(xI - A)`, constant term first.
    pub fn charpoly(&self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = a.len();
        let mut h: Vec<Vec<u64>> = a.to_vec();
        // similarity transform to upper Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let t = self.inv(h[m][m - 1]);
            for i in m + 1..n {
                let u = self.mul(h[i][m - 1], t);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = self.mul(u, h[m][c]);
                    h[i][c] = self.sub(h[i][c], v);
                }
                for row in h.iter_mut() {
                    let v = self.mul(u, row[i]);
                    row[m] = self.add(row[m], v);
                }
            }
        }
        // p_m = (x - h_mm) p_{m-1} - sum_i h_im (prod of subdiagonal) p_{i-1}
        let mut p: Vec<Vec<u64>> = vec![vec![1]];
        for m in 1..=n {
            let prev = &p[m - 1];
            let mut next = vec![0u64; m + 1];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], c);
                let v = self.mul(c, h[m - 1][m - 1]);
                next[k] = self.sub(next[k], v);
            }
            let mut t = 1u64;
            for i in (1..m).rev() {
                t = self.mul(t, h[i][i - 1]);
                if t == 0 {
                    break;
                }
                let coef = self.mul(h[i - 1][m - 1], t);
                if coef == 0 {
                    continue;
                }
                for (k, &c) in p[i - 1].iter().enumerate() {
                    let v = self.mul(coef, c);
                    next[k] = self.sub(next[k], v);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    pub fn eval(&self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Distinct roots of `poly` in `F_q` with multiplicities, in increasing
    /// order.
    pub fn roots(&self, poly: &[u64]) -> Vec<(u64, usize)> {
        let poly = trim(poly.to_vec());
        if poly.len() <= 1 {
            return Vec::new();
        }
        let mut found = if self.q < 4096 {
            (0..self.q).filter(|&x| self.eval(&poly, x) == 0).collect()
        } else {
            // gcd with x^q - x isolates the distinct linear factors
            let monic = self.monic(&poly);
            let xq = self.powmod_linear(0, self.q, &monic);
            let mut xq_minus_x = xq;
            xq_minus_x.resize(xq_minus_x.len().max(2), 0);
            xq_minus_x[1] = self.sub(xq_minus_x[1], 1);
            let g = self.gcd(monic, trim(xq_minus_x));
            let mut out = Vec::new();
            self.split(g, &mut out);
            out
        };
        found.sort_unstable();
        let mut rest = poly;
        found
            .into_iter()
            .map(|x| {
                let mut mult = 0;
                while rest.len() > 1 && self.eval(&rest, x) == 0 {
                    rest = self.deflate(&rest, x);
                    mult += 1;
                }
                (x, mult)
            })
            .collect()
    }

    /// Roots of a monic product of distinct linear factors.
    fn split(&self, g: Vec<u64>, out: &mut Vec<u64>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(self.neg(g[0])),
            _ => {
                for shift in 1..self.q {
                    // gcd(g, (x + shift)^((q-1)/2) - 1) splits g for about half of all shifts
                    let mut h = self.powmod_linear(shift, (self.q - 1) / 2, &g);
                    h.resize(h.len().max(1), 0);
                    h[0] = self.sub(h[0], 1);
                    let d = self.gcd(g.clone(), trim(h));
                    if d.len() > 1 && d.len() < g.len() {
                        let (quot, _) = self.divrem(&g, &d);
                        self.split(d, out);
                        self.split(quot, out);
                        return;
                    }
                }
            }
        }
    }

    fn monic(&self, a: &[u64]) -> Vec<u64> {
        let inv = self.inv(*a.last().unwrap());
        a.iter().map(|&c| self.mul(c, inv)).collect()
    }

    /// Quotient and remainder by a nonzero polynomial.
    fn divrem(&self, a: &[u64], m: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let dm = m.len() - 1;
        if a.len() <= dm {
            return (Vec::new(), trim(a.to_vec()));
        }
        let inv = self.inv(m[dm]);
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - dm];
        for i in (0..quot.len()).rev() {
            let c = self.mul(rem[i + dm], inv);
            quot[i] = c;
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    rem[i + j] = self.sub(rem[i + j], self.mul(c, mj));
                }
            }
        }
        rem.truncate(dm);
        (quot, trim(rem))
    }

    /// Monic gcd; the zero polynomial is the empty vector.
    fn gcd(&self, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
        while !b.is_empty() {
            let (_, r) = self.divrem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.add(prod[i + j], self.mul(x, y));
            }
        }
        self.divrem(&prod, m).1
    }

    /// `(x + shift)^e mod m`.
    fn powmod_linear(&self, shift: u64, mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut base = self.divrem(&[shift, 1], m).1;
        let mut acc = self.divrem(&[1], m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            e >>= 1;
        }
        acc
    }

    fn deflate(&self, poly: &[u64], x: u64) -> Vec<u64> {
        let d = poly.len() - 1;
        let mut q = vec![0u64; d];
        let mut carry = 0;
        for k in (0..d).rev() {
            carry = self.add(poly[k + 1], self.mul(carry, x));
            q[k] = carry;
        }
        q
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let inv = self.inv(rows[r][c]);
            for v in rows[r].iter_mut() {
                *v = self.mul(*v, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    /// Basis of `{v : A v = 0}` for a square matrix `A` given by rows.
    pub fn nullspace(&self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.first().map_or(0, |r| r.len());
        let mut m = a.to_vec();
        let pivots = self.rref(&mut m);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (row, &pc) in m.iter().zip(&pivots) {
                    v[pc] = self.neg(row[f]);
                }
                v
            })
            .collect()
    }
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(f: &PrimeField, a: &[Vec<u64>]) -> u64 {
        let n = a.len();
        let mut m = a.to_vec();
        let mut d = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m[i][c] != 0) else {
                return 0;
            };
            if p != c {
                m.swap(p, c);
                d = f.neg(d);
            }
            d = f.mul(d, m[c][c]);
            let inv = f.inv(m[c][c]);
            for i in c + 1..n {
                let u = f.mul(m[i][c], inv);
                for j in c..n {
                    let v = f.mul(u, m[c][j]);
                    m[i][j] = f.sub(m[i][j], v);
                }
            }
        }
        d
    }

    proptest! {
        #[test]
        fn charpoly_matches_determinant(
            entries in prop::collection::vec(0u64..31, 36),
            n in 1usize..7,
            x in 0u64..31,
        ) {
            let f = PrimeField::new(31);
            let a: Vec<Vec<u64>> = (0..n).map(|i| entries[i * 6..i * 6 + n].to_vec()).collect();
            let xa: Vec<Vec<u64>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    let d = if i == j { x } else { 0 };
                    f.sub(d, a[i][j])
                }).collect())
                .collect();
            let p = f.charpoly(&a);
            prop_assert_eq!(p.len(), n + 1);
            prop_assert_eq!(f.eval(&p, x), det(&f, &xa));
        }

        #[test]
        fn nullspace_vectors_are_annihilated(entries in prop::collection::vec(0u64..7, 25)) {
            let f = PrimeField::new(7);
            let a: Vec<Vec<u64>> = entries.chunks(5).map(|r| r.to_vec()).collect();
            let mut m = a.clone();
            let rank = f.rref(&mut m).len();
            let ns = f.nullspace(&a);
            prop_assert_eq!(ns.len() + rank, 5);
            for v in ns {
                for row in &a {
                    let s = row.iter().zip(&v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                    prop_assert_eq!(s, 0);
                }
            }
        }
    }

    #[test]
    fn roots_and_primitive_roots() {
        let f = PrimeField::new(13);
        // (x-2)^2 (x-5) = x^3 - 9x^2 + 24x - 20
        let p = vec![f.from_i64(-20), 24 % 13, f.from_i64(-9), 1];
        assert_eq!(f.roots(&p), vec![(2, 2), (5, 1)]);
        assert_eq!(f.primitive_root(), 2);
        // the large-field path: (x - 3)^2 (x - 70000) (x - 12345) modulo 102433
        let big = PrimeField::new(102433);
        let mut p = vec![1u64];
        for r in [3u64, 3, 70000, 12345] {
            let mut next = vec![0u64; p.len() + 1];
            for (k, &c) in p.iter().enumerate() {
                next[k + 1] = big.add(next[k + 1], c);
                next[k] = big.sub(next[k], big.mul(c, r));
            }
            p = next;
        }
        assert_eq!(big.roots(&p), vec![(3, 2), (12345, 1), (70000, 1)]);
        // x^2 + 1 has no roots when q = 3 mod 4
        assert!(PrimeField::new(10007).roots(&[1, 0, 1]).is_empty());
        assert_eq!(PrimeField::new(7).primitive_root(), 3);
        assert_eq!(PrimeField::new(41).primitive_root(), 6);
    }
}
