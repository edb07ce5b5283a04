//! Group constructors, the group-expression language used by manifests, and
//! the text file formats for permutation groups and simple-group data.
//!
//! Group file format (one group per file, `#` starts a comment):
//!
//! ```text
//! degree: 5
//! 1 2 3 4 0
//! 1 0 2 3 4
//! ```
//!
//! Every line after `degree:` is one generator given as its space-separated
//! 0-based image list. An optional `generators:` line may precede them.
//!
//! Manifest format: one entry per line, `name = expression`, optionally
//! followed by `; order = N` to cross-check the constructed order. Expressions
//! are `symmetric(n)`, `alternating(n)`, `cyclic(n)`, `dihedral(n)`,
//! `elementary_abelian(p, k)`, `frobenius(p)`, `affine(p, d)`, `psl2(p)`,
//! `quaternion()`, `direct(G, H)`, `wreath(G, n)` and `file("path")`.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::modp::{is_prime, PrimeField};
use crate::perm::Permutation;
use crate::socle::SimpleGroupData;

fn perm(images: Vec<u32>) -> Permutation {
    Permutation::from_images(images).expect("constructor builds bijections")
}

fn cycle_on(degree: usize, points: impl Iterator<Item = u32>) -> Permutation {
    let pts: Vec<u32> = points.collect();
    Permutation::from_cycles(degree, &[&pts]).expect("constructor builds bijections")
}

fn primitive_root(p: u64) -> u64 {
    PrimeField::new(p).primitive_root()
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    PrimeField::new(m).pow(b, e)
}

/// A constructible group: a family with parameters, a product, or a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    Dihedral(usize),
    ElementaryAbelian(u64, usize),
    Frobenius(u64),
    Affine(u64, u64),
    Psl2(u64),
    Quaternion,
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    Wreath(Box<GroupSpec>, usize),
    File(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(n) => write!(f, "symmetric({n})"),
            GroupSpec::Alternating(n) => write!(f, "alternating({n})"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::ElementaryAbelian(p, k) => write!(f, "elementary_abelian({p}, {k})"),
            GroupSpec::Frobenius(p) => write!(f, "frobenius({p})"),
            GroupSpec::Affine(p, d) => write!(f, "affine({p}, {d})"),
            GroupSpec::Psl2(p) => write!(f, "psl2({p})"),
            GroupSpec::Quaternion => write!(f, "quaternion()"),
            GroupSpec::Direct(a, b) => write!(f, "direct({a}, {b})"),
            GroupSpec::Wreath(a, n) => write!(f, "wreath({a}, {n})"),
            GroupSpec::File(p) => write!(f, "file({:?})", p.display().to_string()),
        }
    }
}

impl GroupSpec {
    /// Parses a group expression such as `direct(symmetric(3), frobenius(5))`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let mut p = ExprParser { s: s.as_bytes(), pos: 0 };
        let spec = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }

    /// Closed-form order, when the family has one.
    pub fn expected_order(&self) -> Option<u128> {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        Some(match self {
            GroupSpec::Symmetric(n) => fact(*n),
            GroupSpec::Alternating(n) => (fact(*n) / 2).max(1),
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::Dihedral(n) => 2 * *n as u128,
            GroupSpec::ElementaryAbelian(p, k) => (*p as u128).pow(*k as u32),
            GroupSpec::Frobenius(p) => *p as u128 * (*p as u128 - 1),
            GroupSpec::Affine(p, d) => *p as u128 * *d as u128,
            GroupSpec::Psl2(p) => {
                let p = *p as u128;
                p * (p * p - 1) / 2
            }
            GroupSpec::Quaternion => 8,
            GroupSpec::Direct(a, b) => a.expected_order()? * b.expected_order()?,
            GroupSpec::Wreath(a, n) => a.expected_order()?.pow(*n as u32) * fact(*n),
            GroupSpec::File(_) => return None,
        })
    }

    pub fn build(&self) -> Result<PermGroup> {
        self.build_with_cap(DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<PermGroup> {
        if let Some(o) = self.expected_order() {
            if o > cap as u128 {
                return Err(Error::OrderCapExceeded { cap });
            }
        }
        let g = match self {
            GroupSpec::Symmetric(n) => {
                let n = *n;
                let mut gens = Vec::new();
                if n >= 2 {
                    gens.push(cycle_on(n, 0..n as u32));
                    gens.push(cycle_on(n, 0..2));
                }
                PermGroup::from_generators(n.max(1), gens, cap)?
            }
            GroupSpec::Alternating(n) => {
                let n = *n;
                let mut gens = Vec::new();
                if n >= 3 {
                    gens.push(cycle_on(n, 0..3));
                    if n >= 4 {
                        if n % 2 == 1 {
                            gens.push(cycle_on(n, 0..n as u32));
                        } else {
                            gens.push(cycle_on(n, 1..n as u32));
                        }
                    }
                }
                PermGroup::from_generators(n.max(1), gens, cap)?
            }
            GroupSpec::Cyclic(n) => {
                let n = (*n).max(1);
                let gens = if n > 1 { vec![cycle_on(n, 0..n as u32)] } else { vec![] };
                PermGroup::from_generators(n, gens, cap)?
            }
            GroupSpec::Dihedral(n) => match *n {
                0 => return Err(Error::ValidationFailed("dihedral(0)".into())),
                1 => GroupSpec::Cyclic(2).build_with_cap(cap)?,
                2 => GroupSpec::ElementaryAbelian(2, 2).build_with_cap(cap)?,
                n => {
                    let rot = cycle_on(n, 0..n as u32);
                    let refl = perm((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
                    PermGroup::from_generators(n, vec![rot, refl], cap)?
                }
            },
            GroupSpec::ElementaryAbelian(p, k) => {
                let mut spec = GroupSpec::Cyclic(*p as usize);
                for _ in 1..*k {
                    spec = GroupSpec::Direct(Box::new(spec), Box::new(GroupSpec::Cyclic(*p as usize)));
                }
                if *k == 0 {
                    spec = GroupSpec::Cyclic(1);
                }
                spec.build_with_cap(cap)?
            }
            GroupSpec::Frobenius(p) => {
                if *p < 3 || !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                GroupSpec::Affine(*p, *p - 1).build_with_cap(cap)?
            }
            GroupSpec::Affine(p, d) => {
                let (p, d) = (*p, *d);
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if d == 0 || (p - 1) % d != 0 {
                    return Err(Error::ValidationFailed(format!("affine({p}, {d}): {d} does not divide {}", p - 1)));
                }
                let a = pow_mod(primitive_root(p), (p - 1) / d, p);
                let trans = perm((0..p).map(|x| ((x + 1) % p) as u32).collect());
                let mut gens = vec![trans];
                if d > 1 {
                    gens.push(perm((0..p).map(|x| (x * a % p) as u32).collect()));
                }
                PermGroup::from_generators(p as usize, gens, cap)?
            }
            GroupSpec::Psl2(p) => {
                let p = *p;
                if p < 3 || !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                // points 0..p-1 are field elements, point p is infinity
                let inf = p as u32;
                let t = perm((0..=p).map(|x| if x == p { inf } else { ((x + 1) % p) as u32 }).collect());
                let g = primitive_root(p);
                let sq = g * g % p;
                let d = perm((0..=p).map(|x| if x == p { inf } else { (x * sq % p) as u32 }).collect());
                let w = perm(
                    (0..=p)
                        .map(|x| {
                            if x == p {
                                0
                            } else if x == 0 {
                                inf
                            } else {
                                // -1/x
                                ((p - pow_mod(x, p - 2, p)) % p) as u32
                            }
                        })
                        .collect(),
                );
                PermGroup::from_generators(p as usize + 1, vec![t, d, w], cap)?
            }
            GroupSpec::Quaternion => {
                // right regular action on {±1, ±i, ±j, ±k}; element 2u+s is (-1)^s * unit u
                let unit_mul = |a: usize, b: usize| -> (bool, usize) {
                    const T: [[(bool, usize); 4]; 4] = [
                        [(false, 0), (false, 1), (false, 2), (false, 3)],
                        [(false, 1), (true, 0), (false, 3), (true, 2)],
                        [(false, 2), (true, 3), (true, 0), (false, 1)],
                        [(false, 3), (false, 2), (true, 1), (true, 0)],
                    ];
                    T[a][b]
                };
                let right = |u: usize| {
                    perm(
                        (0..8)
                            .map(|x| {
                                let (neg, v) = unit_mul(x / 2, u);
                                let sign = (x % 2 == 1) ^ neg;
                                (2 * v + sign as usize) as u32
                            })
                            .collect(),
                    )
                };
                PermGroup::from_generators(8, vec![right(1), right(2)], cap)?
            }
            GroupSpec::Direct(a, b) => {
                let ga = a.build_with_cap(cap)?;
                let gb = b.build_with_cap(cap)?;
                direct_product_capped(&ga, &gb, cap)?
            }
            GroupSpec::Wreath(a, n) => {
                let ga = a.build_with_cap(cap)?;
                wreath_imprimitive_capped(&ga, *n, cap)?
            }
            GroupSpec::File(path) => load_group_with_cap(path, cap)?,
        };
        if let Some(o) = self.expected_order() {
            if o != g.order() as u128 {
                return Err(Error::ValidationFailed(format!("{self} has order {} but {o} was expected", g.order())));
            }
        }
        Ok(g)
    }

    fn resolve_paths(self, base: &Path) -> GroupSpec {
        match self {
            GroupSpec::File(p) if p.is_relative() => GroupSpec::File(base.join(p)),
            GroupSpec::Direct(a, b) => {
                GroupSpec::Direct(Box::new(a.resolve_paths(base)), Box::new(b.resolve_paths(base)))
            }
            GroupSpec::Wreath(a, n) => GroupSpec::Wreath(Box::new(a.resolve_paths(base)), n),
            other => other,
        }
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, msg: format!("{msg} at column {}", self.pos + 1) }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a family name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).to_ascii_lowercase())
    }

    fn int(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected an integer"))
    }

    fn string(&mut self) -> Result<String> {
        self.eat(b'"')?;
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != b'"' {
            self.pos += 1;
        }
        let out = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.eat(b'"')?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<GroupSpec> {
        let name = self.ident()?;
        self.eat(b'(')?;
        let spec = match name.as_str() {
            "symmetric" | "sym" => GroupSpec::Symmetric(self.int()? as usize),
            "alternating" | "alt" => GroupSpec::Alternating(self.int()? as usize),
            "cyclic" => GroupSpec::Cyclic(self.int()? as usize),
            "dihedral" => GroupSpec::Dihedral(self.int()? as usize),
            "elementary_abelian" => {
                let p = self.int()?;
                self.eat(b',')?;
                GroupSpec::ElementaryAbelian(p, self.int()? as usize)
            }
            "frobenius" => GroupSpec::Frobenius(self.int()?),
            "affine" => {
                let p = self.int()?;
                self.eat(b',')?;
                GroupSpec::Affine(p, self.int()?)
            }
            "psl2" => GroupSpec::Psl2(self.int()?),
            "quaternion" => GroupSpec::Quaternion,
            "direct" => {
                let a = self.expr()?;
                self.eat(b',')?;
                GroupSpec::Direct(Box::new(a), Box::new(self.expr()?))
            }
            "wreath" => {
                let a = self.expr()?;
                self.eat(b',')?;
                GroupSpec::Wreath(Box::new(a), self.int()? as usize)
            }
            "file" => GroupSpec::File(PathBuf::from(self.string()?)),
            _ => return Err(Error::Unknown { kind: "group family", name }),
        };
        self.eat(b')')?;
        Ok(spec)
    }
}

pub fn symmetric(n: usize) -> Result<PermGroup> {
    GroupSpec::Symmetric(n).build()
}

pub fn alternating(n: usize) -> Result<PermGroup> {
    GroupSpec::Alternating(n).build()
}

pub fn cyclic(n: usize) -> Result<PermGroup> {
    GroupSpec::Cyclic(n).build()
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> Result<PermGroup> {
    GroupSpec::Dihedral(n).build()
}

pub fn elementary_abelian(p: u64, k: usize) -> Result<PermGroup> {
    GroupSpec::ElementaryAbelian(p, k).build()
}

/// The affine group `x -> ax + b` of order `p(p-1)`.
pub fn frobenius_agl1(p: u64) -> Result<PermGroup> {
    GroupSpec::Frobenius(p).build()
}

/// `x -> ax + b` with `a` in the subgroup of order `d` of the units mod p.
pub fn affine(p: u64, d: u64) -> Result<PermGroup> {
    GroupSpec::Affine(p, d).build()
}

pub fn psl2(p: u64) -> Result<PermGroup> {
    GroupSpec::Psl2(p).build()
}

pub fn quaternion() -> Result<PermGroup> {
    GroupSpec::Quaternion.build()
}

pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    direct_product_capped(a, b, DEFAULT_ORDER_CAP)
}

/// Direct product acting on the disjoint union of the two point sets.
pub fn direct_product_capped(a: &PermGroup, b: &PermGroup, cap: usize) -> Result<PermGroup> {
    if a.order() as u128 * b.order() as u128 > cap as u128 {
        return Err(Error::OrderCapExceeded { cap });
    }
    let (m, n) = (a.degree(), b.degree());
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(perm(g.images().iter().copied().chain(m as u32..(m + n) as u32).collect()));
    }
    for g in b.generators() {
        gens.push(perm((0..m as u32).chain(g.images().iter().map(|&x| x + m as u32)).collect()));
    }
    PermGroup::from_generators(m + n, gens, cap)
}

pub fn wreath_imprimitive(g: &PermGroup, n: usize) -> Result<PermGroup> {
    wreath_imprimitive_capped(g, n, DEFAULT_ORDER_CAP)
}

/// `G wr S_n` acting imprimitively on `n` blocks of `deg(G)` points.
pub fn wreath_imprimitive_capped(g: &PermGroup, n: usize, cap: usize) -> Result<PermGroup> {
    let m = g.degree();
    let fact: u128 = (1..=n as u128).product();
    let order = (g.order() as u128).checked_pow(n as u32).map(|o| o * fact);
    if order.is_none_or(|o| o > cap as u128) {
        return Err(Error::OrderCapExceeded { cap });
    }
    let deg = m * n;
    let mut gens = Vec::new();
    for s in g.generators() {
        gens.push(perm(s.images().iter().copied().chain(m as u32..deg as u32).collect()));
    }
    let block_perm =
        |sigma: &dyn Fn(usize) -> usize| perm((0..deg).map(|x| (sigma(x / m) * m + x % m) as u32).collect());
    if n >= 2 {
        gens.push(block_perm(&|b| if b < 2 { 1 - b } else { b }));
    }
    if n >= 3 {
        gens.push(block_perm(&|b| (b + 1) % n));
    }
    PermGroup::from_generators(deg.max(1), gens, cap)
}

/// Parses the group file format described in the module docs.
pub fn parse_group(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line == "generators:" {
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree:") {
            degree = Some(rest.trim().parse::<usize>().map_err(|_| perr(format!("bad degree `{}`", rest.trim())))?);
            continue;
        }
        let n = degree.ok_or_else(|| perr("generator before `degree:` line".into()))?;
        let images = line
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| perr(format!("bad point `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(perr(format!("expected {n} images, found {}", images.len())));
        }
        gens.push(Permutation::from_images(images).map_err(|_| perr("image list is not a permutation".into()))?);
    }
    let degree = degree.ok_or(Error::Parse { line: 0, msg: "missing `degree:` line".into() })?;
    if degree == 0 {
        return Err(Error::Parse { line: 0, msg: "degree must be positive".into() });
    }
    Ok((degree, gens))
}

pub fn load_group(path: impl AsRef<Path>) -> Result<PermGroup> {
    load_group_with_cap(path, DEFAULT_ORDER_CAP)
}

pub fn load_group_with_cap(path: impl AsRef<Path>, cap: usize) -> Result<PermGroup> {
    let text =
        std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    let (degree, gens) = parse_group(&text)?;
    PermGroup::from_generators(degree, gens, cap)
}

/// Serializes a group's generators in the group file format.
pub fn write_group(g: &PermGroup) -> String {
    let mut out = format!("degree: {}\n", g.degree());
    for s in g.generators() {
        let line: Vec<String> = s.images().iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub expected_order: Option<u128>,
}

impl CatalogEntry {
    pub fn build(&self, cap: usize) -> Result<PermGroup> {
        let g = self.spec.build_with_cap(cap)?;
        if let Some(o) = self.expected_order {
            if o != g.order() as u128 {
                return Err(Error::ValidationFailed(format!(
                    "{} has order {} but the manifest expects {o}",
                    self.name,
                    g.order()
                )));
            }
        }
        Ok(g)
    }
}

/// Parses a manifest; relative `file(..)` paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        let (name, rest) = line.split_once('=').ok_or_else(|| perr("expected `name = expression`".into()))?;
        let name = name.trim().to_string();
        if name.is_empty() || out.iter().any(|e| e.name == name) {
            return Err(perr(format!("missing or duplicate entry name `{name}`")));
        }
        let (expr, order) = match rest.split_once(';') {
            Some((e, o)) => {
                let o = o.trim();
                let v = o
                    .strip_prefix("order")
                    .and_then(|r| r.trim().strip_prefix('='))
                    .and_then(|r| r.trim().parse::<u128>().ok())
                    .ok_or_else(|| perr(format!("bad order annotation `{o}`")))?;
                (e, Some(v))
            }
            None => (rest, None),
        };
        let spec = GroupSpec::parse(expr.trim()).map_err(|e| match e {
            Error::Parse { msg, .. } => perr(msg),
            other => other,
        })?;
        out.push(CatalogEntry { name, spec: spec.resolve_paths(base), expected_order: order });
    }
    Ok(out)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses simple-group records. Each record is a block of `key: value`
/// lines starting with `name:`; the keys are `name`, `order`, `degrees`,
/// `alpha` and any number of `aut` lines, each an image list on the
/// character indices.
pub fn parse_simple_data(text: &str) -> Result<Vec<SimpleGroupData>> {
    struct Partial {
        line: usize,
        name: String,
        order: Option<u64>,
        degrees: Option<Vec<u64>>,
        alpha: Option<usize>,
        aut: Vec<Vec<u32>>,
    }
    let finish = |p: Partial| -> Result<SimpleGroupData> {
        let missing = |k: &str| Error::Parse { line: p.line, msg: format!("record `{}` lacks `{k}`", p.name) };
        SimpleGroupData::new(
            &p.name,
            p.order.ok_or_else(|| missing("order"))?,
            p.degrees.clone().ok_or_else(|| missing("degrees"))?,
            p.alpha.ok_or_else(|| missing("alpha"))?,
            p.aut,
        )
    };
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        let (key, value) = line.split_once(':').ok_or_else(|| perr("expected `key: value`".into()))?;
        let value = value.trim();
        let ints = |v: &str| -> Result<Vec<u64>> {
            v.split_whitespace().map(|t| t.parse::<u64>().map_err(|_| perr(format!("bad integer `{t}`")))).collect()
        };
        if key.trim() == "name" {
            if let Some(p) = cur.take() {
                out.push(finish(p)?);
            }
            cur = Some(Partial {
                line: lineno + 1,
                name: value.to_string(),
                order: None,
                degrees: None,
                alpha: None,
                aut: Vec::new(),
            });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| perr("field before `name:`".into()))?;
        match key.trim() {
            "order" => p.order = Some(ints(value)?.first().copied().ok_or_else(|| perr("empty order".into()))?),
            "degrees" => p.degrees = Some(ints(value)?),
            "alpha" => {
                p.alpha = Some(ints(value)?.first().copied().ok_or_else(|| perr("empty alpha".into()))? as usize)
            }
            "aut" => p.aut.push(ints(value)?.into_iter().map(|x| x as u32).collect()),
            other => return Err(perr(format!("unknown key `{other}`"))),
        }
    }
    if let Some(p) = cur.take() {
        out.push(finish(p)?);
    }
    Ok(out)
}

/// Loads the first record of a simple-group data file.
pub fn load_simple_data(path: impl AsRef<Path>) -> Result<SimpleGroupData> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_simple_data(&text)?.into_iter().next().ok_or(Error::Parse { line: 0, msg: "no records".into() })
}

pub fn load_simple_pack(path: impl AsRef<Path>) -> Result<Vec<SimpleGroupData>> {
    parse_simple_data(&std::fs::read_to_string(path.as_ref())?)
}

/// The shipped data pack: A5, A6 and PSL(2,7).
pub const BUILTIN_SIMPLE_DATA: &str = "\
# Character degrees of small simple groups, the designated Aut-invariant
# character `alpha`, and generators of the Aut action on character indices.
name: A5
order: 60
degrees: 1 3 3 4 5
alpha: 4
aut: 0 2 1 3 4

name: A6
order: 360
degrees: 1 5 5 8 8 9 10
alpha: 5
aut: 0 2 1 3 4 5 6
aut: 0 1 2 4 3 5 6

name: PSL(2,7)
order: 168
degrees: 1 3 3 6 7 8
alpha: 4
aut: 0 2 1 3 4 5
";

pub fn builtin_simple_data() -> Vec<SimpleGroupData> {
    parse_simple_data(BUILTIN_SIMPLE_DATA).expect("built-in data pack is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::conjugacy_classes;
    use crate::subgroup::{fitting_subgroup, quotient_group};

    #[test]
    fn closed_form_orders() {
        assert_eq!(alternating(5).unwrap().order(), 60);
        assert_eq!(alternating(6).unwrap().order(), 360);
        assert_eq!(alternating(4).unwrap().order(), 12);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(dihedral(4).unwrap().order(), 8);
        assert_eq!(dihedral(2).unwrap().order(), 4);
        assert_eq!(cyclic(1).unwrap().order(), 1);
        assert_eq!(frobenius_agl1(5).unwrap().order(), 20);
        assert_eq!(affine(7, 3).unwrap().order(), 21);
        assert_eq!(psl2(7).unwrap().order(), 168);
        assert_eq!(psl2(5).unwrap().order(), 60);
        assert_eq!(quaternion().unwrap().order(), 8);
        let g = direct_product(&symmetric(3).unwrap(), &frobenius_agl1(5).unwrap()).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(wreath_imprimitive(&cyclic(2).unwrap(), 3).unwrap().order(), 48);
    }

    #[test]
    fn wreath_s4_s3() {
        let g = wreath_imprimitive(&symmetric(4).unwrap(), 3).unwrap();
        assert_eq!(g.order(), 82944);
        assert_eq!(g.degree(), 12);
    }

    #[test]
    fn frobenius_not_prime() {
        assert_eq!(frobenius_agl1(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(frobenius_agl1(2).unwrap_err(), Error::NotPrime(2));
    }

    #[test]
    fn frobenius_fitting_and_quotient() {
        let g = frobenius_agl1(13).unwrap();
        let f = fitting_subgroup(&g, &conjugacy_classes(&g));
        assert_eq!(f.order(), 13);
        let q = quotient_group(&g, &f).unwrap();
        assert_eq!(q.group.order(), 12);
        assert!(q.group.is_abelian());
        assert!((0..12).any(|e| q.group.element_order(e) == 12));
    }

    #[test]
    fn expressions_round_trip() {
        let s = "direct(symmetric(3), wreath(cyclic(2), 3))";
        let spec = GroupSpec::parse(s).unwrap();
        assert_eq!(spec.to_string(), s);
        assert_eq!(spec.expected_order(), Some(6 * 48));
        assert!(GroupSpec::parse("mystery(3)").is_err());
        assert!(GroupSpec::parse("cyclic(3").is_err());
    }

    #[test]
    fn group_file_parsing() {
        let g = parse_group("# A5\ndegree: 5\n1 2 3 4 0\n1 2 0 3 4\n").unwrap();
        let grp = PermGroup::from_generators(g.0, g.1, 1000).unwrap();
        assert_eq!(grp.order(), 60);
        assert!(matches!(parse_group("degree: 3\n0 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_group("degree: 3\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_group("0 1 2\n"), Err(Error::Parse { .. })));
        let round = parse_group(&write_group(&grp)).unwrap();
        assert_eq!(round.1, grp.generators());
    }

    #[test]
    fn manifest_parsing() {
        let m =
            parse_manifest("# comment\nS4 = symmetric(4) ; order = 24\nF5 = frobenius(5)\n", Path::new(".")).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].expected_order, Some(24));
        assert_eq!(m[1].build(1000).unwrap().order(), 20);
        assert!(parse_manifest("X = cyclic(2)\nX = cyclic(3)\n", Path::new(".")).is_err());
        let bad = parse_manifest("X = cyclic(4) ; order = 5\n", Path::new(".")).unwrap();
        assert!(bad[0].build(100).is_err());
    }

    #[test]
    fn simple_data_validation() {
        let pack = builtin_simple_data();
        assert_eq!(pack.len(), 3);
        let bad = "name: X\norder: 61\ndegrees: 1 3 3 4 5\nalpha: 4\n";
        assert!(matches!(parse_simple_data(bad), Err(Error::ValidationFailed(_))));
    }
}
