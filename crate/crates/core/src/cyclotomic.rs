//! Exact arithmetic in cyclotomic fields `Q(zeta_n)` with integer coordinates.
//!
//! A value is stored in the power basis `{zeta_n^k : 0 <= k < phi(n)}` of
//! its minimal conductor `n`, reduced modulo the n-th cyclotomic polynomial.
//! Because the conductor is always minimal (and never 2 mod 4), equal values
//! have identical representations, so `Eq`, `Hash` and `Ord` are structural.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;

/// Reduction data for one conductor.
struct Field {
    phi: usize,
    /// `red[j]` is `zeta_n^j` in the power basis, as sparse (index, coeff).
    red: Vec<Vec<(u32, i64)>>,
}

fn fields() -> &'static RwLock<HashMap<u32, Arc<Field>>> {
    static F: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    F.get_or_init(|| RwLock::new(HashMap::new()))
}

fn polys() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static P: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    P.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (constant term first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    if let Some(p) = polys().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(num);
    polys().write().unwrap().insert(n, p.clone());
    p
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r as usize
}

fn field(n: u32) -> Arc<Field> {
    if let Some(f) = fields().read().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    let mut red = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi + 1];
    cur[0] = 1;
    for _ in 0..n {
        red.push(cur[..phi].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u32, c)).collect());
        // multiply by zeta and eliminate the x^phi term with the monic poly
        cur.rotate_right(1);
        let top = cur[phi];
        cur[0] = 0;
        if top != 0 {
            for (i, &c) in poly.iter().enumerate() {
                cur[i] -= top * c;
            }
        }
        // rotation moved the old x^phi (always 0) into x^0
    }
    let f = Arc::new(Field { phi, red });
    fields().write().unwrap().insert(n, f.clone());
    f
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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

fn mod_inv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i64) as u64
}

/// An element of a cyclotomic field with integer coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    conductor: u32,
    coords: Vec<i64>,
}

impl Cyclotomic {
    pub fn integer(v: i64) -> Self {
        Cyclotomic { conductor: 1, coords: vec![v] }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let mut buf = vec![0i64; n as usize];
        buf[k.rem_euclid(n as i64) as usize] = 1;
        Self::from_group_ring(n, &buf)
    }

    /// Maps `sum_j buf[j] x^j` in `Z[x]/(x^n - 1)` to `Q(zeta_n)`.
    pub fn from_group_ring(n: u32, buf: &[i64]) -> Self {
        debug_assert_eq!(buf.len(), n as usize);
        let f = field(n);
        let mut coords = vec![0i64; f.phi];
        for (j, &c) in buf.iter().enumerate() {
            if c != 0 {
                for &(i, v) in &f.red[j] {
                    coords[i as usize] += c * v;
                }
            }
        }
        let mut out = Cyclotomic { conductor: n, coords };
        out.canonicalize();
        out
    }

    /// Coordinates from a slice in the power basis of `Q(zeta_n)`.
    pub fn from_coords(n: u32, coords: &[i64]) -> Option<Self> {
        if n == 0 || coords.len() != euler_phi(n) {
            return None;
        }
        let mut out = Cyclotomic { conductor: n, coords: coords.to_vec() };
        out.canonicalize();
        Some(out)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.conductor == 1).then(|| self.coords[0])
    }

    pub fn is_zero(&self) -> bool {
        self.as_integer() == Some(0)
    }

    fn canonicalize(&mut self) {
        loop {
            if self.conductor > 1 && self.coords[1..].iter().all(|&c| c == 0) {
                self.conductor = 1;
                self.coords.truncate(1);
                return;
            }
            let n = self.conductor;
            if n == 1 {
                return;
            }
            if n % 4 == 2 {
                *self = self.halve();
                continue;
            }
            let mut changed = false;
            for p in prime_factors(n) {
                let next = if n % (p * p) == 0 && !(p == 2 && n % 8 != 0) {
                    self.descend_stride(p)
                } else if p == 2 {
                    self.descend_split(4)
                } else {
                    self.descend_split(p)
                };
                if let Some(v) = next {
                    *self = v;
                    changed = true;
                    break;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// `Q(zeta_n) = Q(zeta_{n/2})` for `n = 2 mod 4`, with
    /// `zeta_n = -zeta_{n/2}^{(n/2+1)/2}`.
    fn halve(&self) -> Cyclotomic {
        let m = self.conductor / 2;
        let k0 = (m as u64).div_ceil(2);
        let mut buf = vec![0i64; m as usize];
        for (k, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                buf[(k as u64 * k0 % m as u64) as usize] += sign * c;
            }
        }
        Self::from_group_ring(m, &buf)
    }

    /// When `p^2 | n`, `Phi_n(x) = Phi_{n/p}(x^p)`, so the subfield
    /// `Q(zeta_{n/p})` is spanned by the coordinates at multiples of p.
    fn descend_stride(&self, p: u32) -> Option<Cyclotomic> {
        if self.coords.iter().enumerate().any(|(k, &c)| c != 0 && k as u32 % p != 0) {
            return None;
        }
        Some(Cyclotomic {
            conductor: self.conductor / p,
            coords: self.coords.iter().step_by(p as usize).copied().collect(),
        })
    }

    /// For `n = d q` with `gcd(d, q) = 1`, write the value over the basis
    /// `{zeta_q^j : j < phi(q)}` of `Q(zeta_n)/Q(zeta_d)`; it lies in
    /// `Q(zeta_d)` iff every component with `j > 0` vanishes.
    fn descend_split(&self, q: u32) -> Option<Cyclotomic> {
        let n = self.conductor;
        if n % q != 0 || (n / q) % q == 0 {
            return None;
        }
        let d = n / q;
        let fq = field(q);
        let u = mod_inv(q as u64 % d as u64, d as u64);
        let w = mod_inv(d as u64 % q as u64, q as u64);
        let mut parts = vec![vec![0i64; d as usize]; fq.phi];
        for (k, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let a = (k as u64 * u % d as u64) as usize;
            let b = (k as u64 * w % q as u64) as usize;
            for &(j, v) in &fq.red[b] {
                parts[j as usize][a] += c * v;
            }
        }
        for part in &parts[1..] {
            if !Self::from_group_ring(d, part).is_zero() {
                return None;
            }
        }
        Some(Self::from_group_ring(d, &parts[0]))
    }

    /// Writes `scale * self` (after `k -> mult * k` on exponents) into a group
    /// ring buffer of length `m`, where the conductor divides `m`.
    fn scatter(&self, m: u32, mult: u64, scale: i64, buf: &mut [i64]) {
        let step = (m / self.conductor) as u64;
        for (k, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                let e = (k as u64 * step * mult) % m as u64;
                buf[e as usize] += scale * c;
            }
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        self.lin_comb(other, 1)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.lin_comb(other, -1)
    }

    fn lin_comb(&self, other: &Cyclotomic, s: i64) -> Cyclotomic {
        if self.conductor == other.conductor {
            let coords: Vec<i64> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + s * b).collect();
            let mut out = Cyclotomic { conductor: self.conductor, coords };
            out.canonicalize();
            return out;
        }
        let m = self.conductor.lcm(&other.conductor);
        let mut buf = vec![0i64; m as usize];
        self.scatter(m, 1, 1, &mut buf);
        other.scatter(m, 1, s, &mut buf);
        Self::from_group_ring(m, &buf)
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: i64) -> Cyclotomic {
        if s == 0 {
            return Self::zero();
        }
        Cyclotomic { conductor: self.conductor, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(a) = self.as_integer() {
            return other.scale(a);
        }
        if let Some(b) = other.as_integer() {
            return self.scale(b);
        }
        let m = self.conductor.lcm(&other.conductor);
        let mut acc = RingAccumulator::new(m);
        acc.add_product(self, other, false, 1);
        acc.finish()
    }

    /// Complex conjugate, `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1)
    }

    /// The Galois automorphism `zeta_n -> zeta_n^a`, for `a` prime to n.
    pub fn galois(&self, a: i64) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let mult = a.rem_euclid(n as i64) as u64;
        let mut buf = vec![0i64; n as usize];
        self.scatter(n, mult, 1, &mut buf);
        Self::from_group_ring(n, &buf)
    }

    pub fn pow(&self, e: u32) -> Cyclotomic {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Approximate complex value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        self.coords.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &c)| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        })
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    /// Integers print plainly; other values as `z<n>:[c0,c1,..]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        write!(f, "z{}:[", self.conductor)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Sums of products accumulated in `Z[x]/(x^m - 1)` and reduced once.
pub struct RingAccumulator {
    m: u32,
    buf: Vec<i64>,
}

impl RingAccumulator {
    /// `m` must be a multiple of every conductor that will be added.
    pub fn new(m: u32) -> Self {
        RingAccumulator { m, buf: vec![0; m as usize] }
    }

    pub fn add(&mut self, a: &Cyclotomic, weight: i64) {
        debug_assert_eq!(self.m % a.conductor, 0);
        a.scatter(self.m, 1, weight, &mut self.buf);
    }

    /// Adds `weight * a * b`, or `weight * a * conj(b)` when `conj_b`.
    pub fn add_product(&mut self, a: &Cyclotomic, b: &Cyclotomic, conj_b: bool, weight: i64) {
        let m = self.m as u64;
        debug_assert!(m % a.conductor as u64 == 0 && m % b.conductor as u64 == 0);
        let sa = m / a.conductor as u64;
        let sb = m / b.conductor as u64;
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ei = i as u64 * sa;
            for (j, &y) in b.coords.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let ej = j as u64 * sb % m;
                let e = if conj_b { (ei + m - ej) % m } else { (ei + ej) % m };
                self.buf[e as usize] += weight * x * y;
            }
        }
    }

    pub fn finish(self) -> Cyclotomic {
        Cyclotomic::from_group_ring(self.m, &self.buf)
    }
}

/// Weighted sums of products over values of mixed conductors. Terms are
/// bucketed by the conductor of their product, so a sum mixing, say,
/// conductors 96 and 97 never works in `Q(zeta_9312)`.
#[derive(Default)]
pub struct ProductSum {
    buckets: Vec<RingAccumulator>,
}

impl ProductSum {
    pub fn new() -> Self {
        Self::default()
    }

    fn bucket(&mut self, m: u32) -> &mut RingAccumulator {
        let pos = match self.buckets.iter().position(|b| b.m == m) {
            Some(p) => p,
            None => {
                self.buckets.push(RingAccumulator::new(m));
                self.buckets.len() - 1
            }
        };
        &mut self.buckets[pos]
    }

    pub fn add(&mut self, a: &Cyclotomic, weight: i64) {
        self.bucket(a.conductor).add(a, weight);
    }

    pub fn add_product(&mut self, a: &Cyclotomic, b: &Cyclotomic, conj_b: bool, weight: i64) {
        let m = a.conductor.lcm(&b.conductor);
        self.bucket(m).add_product(a, b, conj_b, weight);
    }

    pub fn finish(self) -> Cyclotomic {
        self.buckets.into_iter().map(RingAccumulator::finish).fold(Cyclotomic::zero(), |acc, v| acc.add(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
        assert_eq!(cyclotomic_polynomial(105).len() - 1, euler_phi(105));
    }

    #[test]
    fn sum_of_primitive_roots_is_mobius() {
        // sum of primitive n-th roots of unity = mu(n)
        for (n, mu) in [(1, 1), (2, -1), (3, -1), (4, 0), (6, 1), (12, 0), (30, -1), (105, -1)] {
            let mut s = Cyclotomic::zero();
            for k in 0..n as i64 {
                if num_integer::gcd(k, n as i64) == 1 {
                    s = s.add(&Cyclotomic::root_of_unity(n, k));
                }
            }
            assert_eq!(s, Cyclotomic::integer(mu), "n = {n}");
        }
    }

    #[test]
    fn minimal_conductor() {
        // zeta_15^5 = zeta_3
        assert_eq!(Cyclotomic::root_of_unity(15, 5), Cyclotomic::root_of_unity(3, 1));
        assert_eq!(Cyclotomic::root_of_unity(15, 5).conductor(), 3);
        // zeta_6 = -zeta_3^2
        assert_eq!(Cyclotomic::root_of_unity(6, 1), Cyclotomic::root_of_unity(3, 2).neg());
        // zeta_8 + zeta_8^7 = sqrt(2) stays at conductor 8
        let s2 = Cyclotomic::root_of_unity(8, 1).add(&Cyclotomic::root_of_unity(8, 7));
        assert_eq!(s2.conductor(), 8);
        assert_eq!(s2.mul(&s2), Cyclotomic::integer(2));
        // i * zeta_5 mixes conductors 4 and 5
        let i = Cyclotomic::root_of_unity(4, 1);
        let z = Cyclotomic::root_of_unity(20, 4);
        assert_eq!(z.conductor(), 5);
        assert_eq!(i.mul(&z).conductor(), 20);
        assert_eq!(i.mul(&z).mul(&i.conj()), z);
    }

    #[test]
    fn bucketed_sums_agree_with_direct_sums() {
        let a = Cyclotomic::root_of_unity(96, 7);
        let b = Cyclotomic::root_of_unity(97, 3);
        let c = Cyclotomic::root_of_unity(5, 2).add(&Cyclotomic::integer(3));
        let mut ps = ProductSum::new();
        ps.add_product(&a, &a, true, 5);
        ps.add_product(&b, &c, false, -2);
        ps.add(&c, 4);
        let direct = a.mul(&a.conj()).scale(5).add(&b.mul(&c).scale(-2)).add(&c.scale(4));
        assert_eq!(ps.finish(), direct);
    }

    #[test]
    fn golden_ratio_relation() {
        // b5 = (-1 + sqrt 5)/2 = zeta_5 + zeta_5^4 satisfies x^2 + x - 1 = 0
        let b5 = Cyclotomic::root_of_unity(5, 1).add(&Cyclotomic::root_of_unity(5, 4));
        let lhs = b5.mul(&b5).add(&b5).sub(&Cyclotomic::one());
        assert!(lhs.is_zero());
        let (re, im) = b5.to_complex();
        assert!((re - 0.618_033_988_749_895).abs() < 1e-12 && im.abs() < 1e-12);
    }

    fn arb_cyclo() -> impl Strategy<Value = Cyclotomic> {
        (prop::sample::select(vec![1u32, 3, 4, 5, 7, 8, 9, 12, 15, 20, 24]), prop::collection::vec(-4i64..5, 24))
            .prop_map(|(n, c)| {
                let mut buf = vec![0i64; n as usize];
                for (k, v) in c.into_iter().enumerate() {
                    buf[k % n as usize] += v;
                }
                Cyclotomic::from_group_ring(n, &buf)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        }

        #[test]
        fn representation_is_canonical(a in arb_cyclo(), k in 0u32..4) {
            // re-embedding into a larger field and back gives the same value
            let m = a.conductor() * [1u32, 2, 3, 7][k as usize];
            let mut buf = vec![0i64; m as usize];
            a.scatter(m, 1, 1, &mut buf);
            prop_assert_eq!(Cyclotomic::from_group_ring(m, &buf), a);
        }
    }
}
