//! Combinatorial model of characters of a socle `F = S_1^{u_1} x ... x S_t^{u_t}`
//! of nonabelian simple groups, and of the replacement `theta -> theta'` that
//! trades principal factors for a fixed Aut-invariant character.
//!
//! Tuples of factor characters are enumerated exhaustively (under a cap),
//! split into orbits of a wreath-type action, and the replacement is checked
//! against the degree bound and the orbit pairing it is meant to provide.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Rational;

pub const DEFAULT_TUPLE_CAP: u128 = 1_000_000;

/// Character degrees of a nonabelian simple group with the designated
/// character `alpha` and the action of `Aut(S)` on character indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGroupData {
    name: String,
    order: u64,
    degrees: Vec<u64>,
    alpha: usize,
    aut_generators: Vec<Vec<u32>>,
}

impl SimpleGroupData {
    pub fn new(name: &str, order: u64, degrees: Vec<u64>, alpha: usize, aut_generators: Vec<Vec<u32>>) -> Result<Self> {
        let fail = |msg: String| Err(Error::ValidationFailed(format!("{name}: {msg}")));
        if degrees.first() != Some(&1) {
            return fail("degree list must start with the principal degree 1".into());
        }
        if degrees[1..].iter().any(|&d| d <= 1) {
            return fail("a nonabelian simple group has exactly one linear character".into());
        }
        let sum: u128 = degrees.iter().map(|&d| d as u128 * d as u128).sum();
        if sum != order as u128 {
            return fail(format!("sum of squared degrees is {sum}, order is {order}"));
        }
        if alpha == 0 || alpha >= degrees.len() {
            return fail(format!("alpha index {alpha} must name a nonprincipal character"));
        }
        let k = degrees.len();
        for g in &aut_generators {
            let mut seen = vec![false; k];
            if g.len() != k || g.iter().any(|&x| x as usize >= k || std::mem::replace(&mut seen[x as usize], true)) {
                return fail("aut generator is not a permutation of the character indices".into());
            }
            if g[0] != 0 || g[alpha] as usize != alpha {
                return fail("aut action must fix the principal and alpha indices".into());
            }
            if (0..k).any(|i| degrees[g[i] as usize] != degrees[i]) {
                return fail("aut action must preserve degrees".into());
            }
        }
        Ok(SimpleGroupData { name: name.to_string(), order, degrees, alpha, aut_generators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn aut_generators(&self) -> &[Vec<u32>] {
        &self.aut_generators
    }

    /// Smallest nonlinear degree.
    pub fn min_degree(&self) -> u64 {
        self.degrees[1..].iter().copied().min().unwrap_or(1)
    }

    pub fn num_characters(&self) -> usize {
        self.degrees.len()
    }
}

#[derive(Debug, Clone)]
pub struct SocleShape {
    components: Vec<(Arc<SimpleGroupData>, usize)>,
}

impl SocleShape {
    pub fn new(components: Vec<(SimpleGroupData, usize)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for (s, u) in &components {
            if *u == 0 {
                return Err(Error::ValidationFailed(format!("{}: multiplicity must be positive", s.name)));
            }
            if !names.insert(s.name.clone()) {
                return Err(Error::ValidationFailed(format!("{} listed twice", s.name)));
            }
        }
        Ok(SocleShape { components: components.into_iter().map(|(s, u)| (Arc::new(s), u)).collect() })
    }

    /// Parses `A5^2 x A6` style shapes against a data pack.
    pub fn parse(text: &str, pack: &[SimpleGroupData]) -> Result<Self> {
        let mut comps = Vec::new();
        for part in text.split(['x', '*']).map(str::trim) {
            if part.is_empty() {
                return Err(Error::Parse { line: 1, msg: format!("empty factor in `{text}`") });
            }
            let (name, u) = match part.split_once('^') {
                Some((n, u)) => (
                    n.trim(),
                    u.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse { line: 1, msg: format!("bad multiplicity in `{part}`") })?,
                ),
                None => (part, 1),
            };
            let data = pack
                .iter()
                .find(|s| s.name.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Unknown { kind: "simple group", name: name.to_string() })?;
            comps.push((data.clone(), u));
        }
        Self::new(comps)
    }

    pub fn components(&self) -> impl Iterator<Item = (&SimpleGroupData, usize)> {
        self.components.iter().map(|(s, u)| (&**s, *u))
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Number of tuples, `prod |Irr(S_i)|^{u_i}`.
    pub fn tuple_count(&self) -> u128 {
        self.components
            .iter()
            .map(|(s, u)| (s.num_characters() as u128).saturating_pow(*u as u32))
            .fold(1u128, |a, b| a.saturating_mul(b))
    }
}

impl fmt::Display for SocleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, u)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{}^{}", s.name, u)?;
        }
        Ok(())
    }
}

/// Factor-character indices, one list of length `u_i` per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorTuple(pub Vec<Vec<usize>>);

impl FactorTuple {
    pub fn principal(shape: &SocleShape) -> Self {
        FactorTuple(shape.components.iter().map(|(_, u)| vec![0; *u]).collect())
    }

    fn validate(&self, shape: &SocleShape) -> Result<()> {
        let ok = self.0.len() == shape.components.len()
            && self
                .0
                .iter()
                .zip(&shape.components)
                .all(|(part, (s, u))| part.len() == *u && part.iter().all(|&x| x < s.num_characters()));
        if ok {
            Ok(())
        } else {
            Err(Error::ValidationFailed(format!("tuple {self} does not fit shape {shape}")))
        }
    }
}

impl fmt::Display for FactorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            let s: Vec<String> = part.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(","))?;
        }
        write!(f, ")")
    }
}

pub fn theta_degree(shape: &SocleShape, theta: &FactorTuple) -> u128 {
    theta
        .0
        .iter()
        .zip(&shape.components)
        .flat_map(|(part, (s, _))| part.iter().map(move |&x| s.degrees[x] as u128))
        .product()
}

/// `a * sqrt(r)` with `r` square-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtBound {
    pub coefficient: BigInt,
    pub radicand: u64,
}

impl SqrtBound {
    pub fn squared(&self) -> BigInt {
        &self.coefficient * &self.coefficient * BigInt::from(self.radicand)
    }

    /// Whether `x >= self`, decided by squaring.
    pub fn le(&self, x: &Rational) -> bool {
        x.is_positive() && x.numer() * x.numer() >= self.squared() * x.denom() * x.denom()
    }
}

impl fmt::Display for SqrtBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            write!(f, "{}", self.coefficient)
        } else if self.coefficient.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coefficient, self.radicand)
        }
    }
}

/// `prod m(S_i)^{u_i / 2}` in exact form.
pub fn min_degree_bound(shape: &SocleShape) -> SqrtBound {
    let mut coefficient = BigInt::one();
    let mut radicand = 1u64;
    for (s, u) in &shape.components {
        let m = s.min_degree();
        // m^u = (m^{u div 2})^2 * m^{u mod 2}
        coefficient *= BigInt::from(m).pow((*u / 2) as u32);
        if u % 2 == 1 {
            radicand *= m;
        }
    }
    // pull square factors out of the radicand
    let mut r = radicand;
    let mut d = 2u64;
    let mut out_rad = 1u64;
    while d * d <= r {
        while r % (d * d) == 0 {
            r /= d * d;
            coefficient *= d;
        }
        if r % d == 0 {
            r /= d;
            out_rad *= d;
        }
        d += 1;
    }
    SqrtBound { coefficient, radicand: out_rad * r }
}

fn is_majority(part: &[usize]) -> bool {
    2 * part.iter().filter(|&&x| x == 0).count() > part.len()
}

/// Swaps principal and alpha factors in every component whose principal
/// factors are a strict majority; `None` when no component qualifies.
pub fn theta_prime(shape: &SocleShape, theta: &FactorTuple) -> Option<FactorTuple> {
    let mut defined = false;
    let parts = theta
        .0
        .iter()
        .zip(&shape.components)
        .map(|(part, (s, _))| {
            if !is_majority(part) {
                return part.clone();
            }
            defined = true;
            part.iter()
                .map(|&x| match x {
                    0 => s.alpha,
                    a if a == s.alpha => 0,
                    other => other,
                })
                .collect()
        })
        .collect();
    defined.then_some(FactorTuple(parts))
}

/// Per component, the copy positions grouped by the factor they carry,
/// ordered by smallest position.
pub fn decomposition_partition(theta: &FactorTuple) -> Vec<Vec<Vec<usize>>> {
    theta
        .0
        .iter()
        .map(|part| {
            let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
            for (pos, &x) in part.iter().enumerate() {
                match blocks.iter_mut().find(|(v, _)| *v == x) {
                    Some((_, b)) => b.push(pos),
                    None => blocks.push((x, vec![pos])),
                }
            }
            blocks.into_iter().map(|(_, b)| b).collect()
        })
        .collect()
}

/// Generators of the modeled action on one component: permutations of the
/// copies, and optionally the Aut action on each copy independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAction {
    pub copy_generators: Vec<Vec<usize>>,
    pub use_aut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopAction(pub Vec<ComponentAction>);

impl TopAction {
    /// `Aut(S_i) wr Sym(u_i)` on every component.
    pub fn full(shape: &SocleShape) -> Self {
        TopAction(
            shape
                .components
                .iter()
                .map(|(_, u)| ComponentAction { copy_generators: symmetric_generators(*u), use_aut: true })
                .collect(),
        )
    }

    pub fn trivial(shape: &SocleShape) -> Self {
        TopAction(
            shape.components.iter().map(|_| ComponentAction { copy_generators: Vec::new(), use_aut: false }).collect(),
        )
    }
}

fn symmetric_generators(u: usize) -> Vec<Vec<usize>> {
    if u < 2 {
        return Vec::new();
    }
    let mut swap: Vec<usize> = (0..u).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..u).map(|i| (i + 1) % u).collect();
    if u == 2 {
        vec![swap]
    } else {
        vec![swap, cycle]
    }
}

/// A single generator of the action, acting on flat position arrays.
#[derive(Debug, Clone)]
enum Move {
    /// `new[offset + pi(j)] = old[offset + j]`
    Copies { offset: usize, perm: Vec<usize> },
    /// `new[pos] = sigma(old[pos])`
    Aut { pos: usize, sigma: Vec<u32> },
}

/// Flat mixed-radix encoding of tuples.
struct Encoding {
    radices: Vec<usize>,
    offsets: Vec<usize>,
}

impl Encoding {
    fn new(shape: &SocleShape) -> Self {
        let mut radices = Vec::new();
        let mut offsets = Vec::new();
        for (s, u) in &shape.components {
            offsets.push(radices.len());
            radices.extend(std::iter::repeat_n(s.num_characters(), *u));
        }
        Encoding { radices, offsets }
    }

    fn encode(&self, flat: &[usize]) -> usize {
        flat.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    fn decode_into(&self, mut code: usize, flat: &mut [usize]) {
        for i in (0..self.radices.len()).rev() {
            flat[i] = code % self.radices[i];
            code /= self.radices[i];
        }
    }

    fn flatten(&self, t: &FactorTuple) -> Vec<usize> {
        t.0.concat()
    }

    fn unflatten(&self, shape: &SocleShape, flat: &[usize]) -> FactorTuple {
        FactorTuple(shape.components.iter().zip(&self.offsets).map(|((_, u), &o)| flat[o..o + u].to_vec()).collect())
    }
}

fn build_moves(shape: &SocleShape, action: &TopAction, enc: &Encoding) -> Result<Vec<Move>> {
    if action.0.len() != shape.components.len() {
        return Err(Error::ValidationFailed("action has the wrong number of components".into()));
    }
    let mut moves = Vec::new();
    for ((comp, (s, u)), &offset) in action.0.iter().zip(&shape.components).zip(&enc.offsets) {
        for perm in &comp.copy_generators {
            let mut seen = vec![false; *u];
            if perm.len() != *u || perm.iter().any(|&x| x >= *u || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::ValidationFailed(format!("copy generator for {} is not a permutation", s.name)));
            }
            moves.push(Move::Copies { offset, perm: perm.clone() });
        }
        if comp.use_aut {
            for sigma in &s.aut_generators {
                for j in 0..*u {
                    moves.push(Move::Aut { pos: offset + j, sigma: sigma.clone() });
                }
            }
        }
    }
    Ok(moves)
}

fn apply_move(m: &Move, src: &[usize], dst: &mut [usize]) {
    dst.copy_from_slice(src);
    match m {
        Move::Copies { offset, perm } => {
            for (j, &pj) in perm.iter().enumerate() {
                dst[offset + pj] = src[offset + j];
            }
        }
        Move::Aut { pos, sigma } => dst[*pos] = sigma[src[*pos]] as usize,
    }
}

/// Orbits of the modeled action on all tuples.
#[derive(Debug, Clone)]
pub struct OrbitModel {
    shape: SocleShape,
    /// Orbit index of every tuple code.
    orbit_of: Vec<u32>,
    /// Smallest code in each orbit, increasing.
    reps: Vec<usize>,
    sizes: Vec<usize>,
    moves: Vec<Move>,
}

impl OrbitModel {
    pub fn shape(&self) -> &SocleShape {
        &self.shape
    }

    pub fn num_tuples(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn num_orbits(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn representative(&self, orbit: usize) -> FactorTuple {
        let enc = Encoding::new(&self.shape);
        let mut flat = vec![0; enc.radices.len()];
        enc.decode_into(self.reps[orbit], &mut flat);
        enc.unflatten(&self.shape, &flat)
    }

    pub fn orbit_of(&self, theta: &FactorTuple) -> usize {
        let enc = Encoding::new(&self.shape);
        self.orbit_of[enc.encode(&enc.flatten(theta))] as usize
    }

    /// Images of `theta` under each generator of the action.
    pub fn generator_images(&self, theta: &FactorTuple) -> Vec<FactorTuple> {
        let enc = Encoding::new(&self.shape);
        let src = enc.flatten(theta);
        let mut dst = vec![0; src.len()];
        self.moves
            .iter()
            .map(|m| {
                apply_move(m, &src, &mut dst);
                enc.unflatten(&self.shape, &dst)
            })
            .collect()
    }
}

pub fn model_orbits(shape: &SocleShape, action: &TopAction) -> Result<OrbitModel> {
    model_orbits_capped(shape, action, DEFAULT_TUPLE_CAP)
}

pub fn model_orbits_capped(shape: &SocleShape, action: &TopAction, cap: u128) -> Result<OrbitModel> {
    let count = shape.tuple_count();
    if count > cap {
        return Err(Error::TupleCapExceeded { count, cap });
    }
    let enc = Encoding::new(shape);
    let moves = build_moves(shape, action, &enc)?;
    let n = count as usize;
    let mut orbit_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let width = enc.radices.len();
    let (mut src, mut dst) = (vec![0; width], vec![0; width]);
    let mut queue = Vec::new();
    for start in 0..n {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        orbit_of[start] = id;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            enc.decode_into(queue[head], &mut src);
            head += 1;
            for m in &moves {
                apply_move(m, &src, &mut dst);
                let c = enc.encode(&dst);
                if orbit_of[c] == u32::MAX {
                    orbit_of[c] = id;
                    queue.push(c);
                }
            }
        }
        reps.push(start);
        sizes.push(queue.len());
    }
    Ok(OrbitModel { shape: shape.clone(), orbit_of, reps, sizes, moves })
}

/// One block of the representative system: an orbit paired with the orbit
/// of its replacement, or an unpaired orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaBlock {
    Pair { theta: FactorTuple, theta_prime: FactorTuple },
    Single { theta: FactorTuple },
}

impl DeltaBlock {
    /// Average of the degrees in the block.
    pub fn average_degree(&self, shape: &SocleShape) -> Rational {
        match self {
            DeltaBlock::Pair { theta, theta_prime } => Rational::new(
                BigInt::from(theta_degree(shape, theta) + theta_degree(shape, theta_prime)),
                BigInt::from(2),
            ),
            DeltaBlock::Single { theta } => Rational::from_integer(BigInt::from(theta_degree(shape, theta))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeltaSystem {
    pub blocks: Vec<DeltaBlock>,
    /// Whether distinct paired orbits have distinct replacement orbits and
    /// every orbit is used exactly once.
    pub perfect_matching: bool,
    /// Orbits left out of the system because a replacement orbit was hit
    /// by more than one paired orbit.
    pub collisions: usize,
}

pub fn delta_system(model: &OrbitModel) -> DeltaSystem {
    let shape = &model.shape;
    let k = model.num_orbits();
    let mut image_of: Vec<Option<usize>> = vec![None; k];
    let mut hits = vec![0usize; k];
    for (o, slot) in image_of.iter_mut().enumerate() {
        if let Some(tp) = theta_prime(shape, &model.representative(o)) {
            let img = model.orbit_of(&tp);
            *slot = Some(img);
            hits[img] += 1;
        }
    }
    let mut blocks = Vec::new();
    let mut used = vec![false; k];
    let mut collisions = 0;
    for o in 0..k {
        if let Some(img) = image_of[o] {
            let theta = model.representative(o);
            let tp = theta_prime(shape, &theta).expect("defined on the whole orbit");
            if used[img] {
                collisions += 1;
            }
            used[img] = true;
            used[o] = true;
            blocks.push(DeltaBlock::Pair { theta, theta_prime: tp });
        }
    }
    for o in 0..k {
        if !used[o] {
            blocks.push(DeltaBlock::Single { theta: model.representative(o) });
        }
    }
    let perfect_matching = hits.iter().all(|&h| h <= 1) && image_of.iter().flatten().all(|&i| image_of[i].is_none());
    DeltaSystem { blocks, perfect_matching, collisions }
}

/// Results of the exhaustive checks run by [`simulate`].
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub shape: String,
    pub tuples: usize,
    pub orbits: usize,
    pub defined: usize,
    /// `theta'` defined exactly when some component has a principal majority.
    pub defined_iff_majority: bool,
    /// `theta'(1)^2 >= prod m_i^{u_i}` for every defined `theta'`.
    pub degree_bound: bool,
    pub partition_preserved: bool,
    pub double_prime_undefined: bool,
    /// `(theta^g)' = (theta')^g` for every tuple and generator.
    pub equivariant: bool,
    /// Orbits of `theta` and `theta'` have equal size, so their stabilizers agree.
    pub stabilizers_equal: bool,
    /// No `theta'` is conjugate to a tuple with a principal-majority component.
    pub primes_avoid_majority: bool,
    /// Non-conjugate tuples have non-conjugate replacements.
    pub replacement_injective_on_orbits: bool,
    pub perfect_matching: bool,
    pub pairs: usize,
    pub singles: usize,
    pub bound: String,
    pub min_block_average: String,
    /// Every block average is at least half the bound.
    pub block_bound: bool,
    /// Every unpaired tuple has degree at least the bound.
    pub tail_bound: bool,
}

impl SimulationReport {
    /// Checks that must hold for every shape.
    pub fn unconditional_pass(&self) -> bool {
        self.defined_iff_majority
            && self.degree_bound
            && self.partition_preserved
            && self.double_prime_undefined
            && self.equivariant
            && self.stabilizers_equal
            && self.primes_avoid_majority
            && self.block_bound
            && self.tail_bound
    }
}

pub fn simulate(shape: &SocleShape, action: &TopAction) -> Result<SimulationReport> {
    simulate_capped(shape, action, DEFAULT_TUPLE_CAP)
}

pub fn simulate_capped(shape: &SocleShape, action: &TopAction, cap: u128) -> Result<SimulationReport> {
    let model = model_orbits_capped(shape, action, cap)?;
    let enc = Encoding::new(shape);
    let bound = min_degree_bound(shape);
    let bound_sq = bound.squared();
    let width = enc.radices.len();
    let mut flat = vec![0; width];
    let mut report = SimulationReport {
        shape: shape.to_string(),
        tuples: model.num_tuples(),
        orbits: model.num_orbits(),
        defined: 0,
        defined_iff_majority: true,
        degree_bound: true,
        partition_preserved: true,
        double_prime_undefined: true,
        equivariant: true,
        stabilizers_equal: true,
        primes_avoid_majority: true,
        replacement_injective_on_orbits: true,
        perfect_matching: true,
        pairs: 0,
        singles: 0,
        bound: bound.to_string(),
        min_block_average: String::new(),
        block_bound: true,
        tail_bound: true,
    };
    let majority_orbit: Vec<bool> =
        (0..model.num_orbits()).map(|o| model.representative(o).0.iter().any(|p| is_majority(p))).collect();
    let mut orbit_image: Vec<Option<u32>> = vec![None; model.num_orbits()];
    for code in 0..model.num_tuples() {
        enc.decode_into(code, &mut flat);
        let theta = enc.unflatten(shape, &flat);
        let majority = theta.0.iter().any(|p| is_majority(p));
        let tp = theta_prime(shape, &theta);
        report.defined_iff_majority &= tp.is_some() == majority;
        let Some(tp) = tp else {
            // (theta^g)' must be undefined too
            for img in model.generator_images(&theta) {
                report.equivariant &= theta_prime(shape, &img).is_none();
            }
            continue;
        };
        report.defined += 1;
        let d = BigInt::from(theta_degree(shape, &tp));
        report.degree_bound &= &d * &d >= bound_sq;
        report.partition_preserved &= decomposition_partition(&theta) == decomposition_partition(&tp);
        report.double_prime_undefined &= theta_prime(shape, &tp).is_none();
        let imgs = model.generator_images(&theta);
        let tp_imgs = model.generator_images(&tp);
        for (a, b) in imgs.iter().zip(&tp_imgs) {
            report.equivariant &= theta_prime(shape, a).as_ref() == Some(b);
        }
        let (o, o2) = (model.orbit_of(&theta), model.orbit_of(&tp));
        report.stabilizers_equal &= model.sizes[o] == model.sizes[o2];
        report.primes_avoid_majority &= !majority_orbit[o2];
        match orbit_image[o] {
            None => orbit_image[o] = Some(o2 as u32),
            Some(prev) => report.equivariant &= prev as usize == o2,
        }
    }
    let mut seen = BTreeSet::new();
    for img in orbit_image.iter().flatten() {
        report.replacement_injective_on_orbits &= seen.insert(*img);
    }
    let delta = delta_system(&model);
    report.perfect_matching = delta.perfect_matching;
    let mut min_avg: Option<Rational> = None;
    for block in &delta.blocks {
        let avg = block.average_degree(shape);
        // avg >= sqrt(P)/2  <=>  4 avg^2 >= P
        let four_sq = Rational::from_integer(BigInt::from(4)) * &avg * &avg;
        report.block_bound &= four_sq >= Rational::from_integer(bound_sq.clone());
        match block {
            DeltaBlock::Pair { .. } => report.pairs += 1,
            DeltaBlock::Single { theta } => {
                report.singles += 1;
                if !theta.0.iter().any(|p| is_majority(p)) {
                    let d = BigInt::from(theta_degree(shape, theta));
                    report.tail_bound &= &d * &d >= bound_sq;
                }
            }
        }
        if min_avg.as_ref().is_none_or(|m| &avg < m) {
            min_avg = Some(avg);
        }
    }
    report.min_block_average = min_avg.map(|r| r.to_string()).unwrap_or_default();
    Ok(report)
}

/// Validates a tuple and computes its replacement.
pub fn checked_theta_prime(shape: &SocleShape, theta: &FactorTuple) -> Result<Option<FactorTuple>> {
    theta.validate(shape)?;
    Ok(theta_prime(shape, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_simple_data;

    fn pack() -> Vec<SimpleGroupData> {
        builtin_simple_data()
    }

    fn shape(s: &str) -> SocleShape {
        SocleShape::parse(s, &pack()).unwrap()
    }

    fn t(parts: &[&[usize]]) -> FactorTuple {
        FactorTuple(parts.iter().map(|p| p.to_vec()).collect())
    }

    #[test]
    fn degrees_and_bounds() {
        let a5_2 = shape("A5^2");
        assert_eq!(theta_degree(&a5_2, &FactorTuple::principal(&a5_2)), 1);
        assert_eq!(theta_degree(&a5_2, &t(&[&[3, 4]])), 20);
        let mixed = shape("A5 x A6");
        assert_eq!(theta_degree(&mixed, &t(&[&[1], &[0]])), 3);
        assert_eq!(min_degree_bound(&a5_2).to_string(), "3");
        assert_eq!(min_degree_bound(&shape("A5^4")).to_string(), "9");
        let b1 = min_degree_bound(&shape("A5^1"));
        assert_eq!(b1.to_string(), "sqrt(3)");
        assert!(b1.le(&Rational::from_integer(2.into())));
        assert!(!b1.le(&Rational::new(17.into(), 10.into())));
        // 3 * 5 = 15 is square-free; 3^3 = 3 * sqrt(3)
        assert_eq!(min_degree_bound(&shape("A5^3")).to_string(), "3*sqrt(3)");
        assert_eq!(min_degree_bound(&shape("A5 x A6")).to_string(), "sqrt(15)");
    }

    #[test]
    fn replacement_rule() {
        let s = shape("A5^4");
        assert_eq!(theta_prime(&s, &t(&[&[0, 0, 0, 3]])), Some(t(&[&[4, 4, 4, 3]])));
        assert_eq!(theta_prime(&s, &t(&[&[0, 0, 4, 4]])), None);
        assert_eq!(theta_prime(&s, &t(&[&[0, 0, 0, 4]])), Some(t(&[&[4, 4, 4, 0]])));
        let one = shape("A5");
        assert_eq!(theta_prime(&one, &t(&[&[0]])), Some(t(&[&[4]])));
        for x in 1..5 {
            assert_eq!(theta_prime(&one, &t(&[&[x]])), None);
        }
    }

    #[test]
    fn partitions() {
        let s = shape("A5^3");
        assert_eq!(decomposition_partition(&t(&[&[0, 4, 3]])), vec![vec![vec![0], vec![1], vec![2]]]);
        let p = FactorTuple::principal(&s);
        assert_eq!(decomposition_partition(&p), vec![vec![vec![0, 1, 2]]]);
        let theta = t(&[&[0, 2, 0]]);
        let tp = theta_prime(&s, &theta).unwrap();
        assert_eq!(decomposition_partition(&theta), decomposition_partition(&tp));
    }

    /// Orbit count by Burnside over the explicitly enumerated group.
    fn burnside_orbits(s: &SocleShape) -> usize {
        // A5^2 with Aut(A5) wr S2: the group has 2*2*2 = 8 elements
        let k = 5usize;
        let sigmas = [vec![0usize, 1, 2, 3, 4], vec![0, 2, 1, 3, 4]];
        let mut fixed = 0;
        let mut group_size = 0;
        for swap in [false, true] {
            for a in &sigmas {
                for b in &sigmas {
                    group_size += 1;
                    for x in 0..k {
                        for y in 0..k {
                            let (nx, ny) = (a[x], b[y]);
                            let (nx, ny) = if swap { (ny, nx) } else { (nx, ny) };
                            if (nx, ny) == (x, y) {
                                fixed += 1;
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(s.tuple_count(), 25);
        fixed / group_size
    }

    #[test]
    fn orbits_match_burnside() {
        let s = shape("A5^2");
        let m = model_orbits(&s, &TopAction::full(&s)).unwrap();
        assert_eq!(m.num_tuples(), 25);
        assert_eq!(m.num_orbits(), burnside_orbits(&s));
        assert_eq!(m.orbit_sizes().iter().sum::<usize>(), 25);
        let one = shape("A5");
        let m1 = model_orbits(&one, &TopAction::trivial(&one)).unwrap();
        assert_eq!(m1.num_orbits(), 5);
    }

    #[test]
    fn tuple_cap() {
        let s = shape("A6^8");
        assert!(matches!(model_orbits(&s, &TopAction::full(&s)), Err(Error::TupleCapExceeded { .. })));
    }

    #[test]
    fn simulation_on_powers_of_a5() {
        for u in 1..=4 {
            let s = shape(&format!("A5^{u}"));
            let r = simulate(&s, &TopAction::full(&s)).unwrap();
            assert!(r.unconditional_pass(), "{r:?}");
            assert!(r.replacement_injective_on_orbits && r.perfect_matching, "{r:?}");
        }
    }

    #[test]
    fn single_copy_pairs_principal_with_alpha() {
        let s = shape("A5");
        let d = delta_system(&model_orbits(&s, &TopAction::full(&s)).unwrap());
        let pairs: Vec<_> = d.blocks.iter().filter(|b| matches!(b, DeltaBlock::Pair { .. })).collect();
        assert_eq!(pairs, vec![&DeltaBlock::Pair { theta: t(&[&[0]]), theta_prime: t(&[&[4]]) }]);
    }

    #[test]
    fn mixed_shapes_can_merge_orbits() {
        // (0 | alpha) and (0 | 0) both map to (alpha | alpha)
        let s = shape("A5 x PSL(2,7)");
        let a = theta_prime(&s, &t(&[&[0], &[4]])).unwrap();
        let b = theta_prime(&s, &t(&[&[0], &[0]])).unwrap();
        assert_eq!(a, b);
        let r = simulate(&s, &TopAction::full(&s)).unwrap();
        assert!(r.unconditional_pass());
        assert!(!r.replacement_injective_on_orbits);
    }

    #[test]
    fn validation() {
        assert!(SimpleGroupData::new("X", 60, vec![1, 3, 3, 4, 5], 1, vec![vec![0, 2, 1, 3, 4]]).is_err());
        assert!(SimpleGroupData::new("X", 60, vec![1, 3, 3, 4, 5], 4, vec![vec![0, 1, 2, 4, 3]]).is_err());
        assert!(SimpleGroupData::new("X", 60, vec![1, 1, 3, 4, 5, 2, 2], 4, vec![]).is_err());
        assert!(matches!(SocleShape::parse("B7^2", &pack()), Err(Error::Unknown { .. })));
        let s = shape("A5^2");
        assert!(checked_theta_prime(&s, &t(&[&[0, 9]])).is_err());
    }
}
