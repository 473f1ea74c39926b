//! Lazy self-maps of the natural numbers and their finite shadows.
//!
//! Composition follows the right-action convention used throughout the
//! crate: `compose(f, g)` applies `f` first, so `(a)fg = ((a)f)g`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A pure total evaluator `u64 -> u64`.
pub type Eval = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// Claimed (advisory) properties of a [`SelfMap`]. Finite checks can only
/// refute them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    Injective,
    Permutation,
    Decreasing,
    Increasing,
    AeInjective,
    FmToOne,
    BfmToOne(u64),
}

#[derive(Clone)]
pub struct SelfMap {
    eval: Eval,
    inverse: Option<Eval>,
    flags: BTreeSet<Flag>,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfMap")
            .field("prefix", &self.window(Window(8)))
            .field("flags", &self.flags)
            .field("has_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl SelfMap {
    pub fn new(eval: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        SelfMap {
            eval: Arc::new(eval),
            inverse: None,
            flags: BTreeSet::new(),
        }
    }

    /// A permutation together with its inverse. Claims `Permutation` and
    /// `Injective`.
    pub fn permutation(
        eval: impl Fn(u64) -> u64 + Send + Sync + 'static,
        inverse: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        SelfMap {
            eval: Arc::new(eval),
            inverse: Some(Arc::new(inverse)),
            flags: [Flag::Permutation, Flag::Injective].into_iter().collect(),
        }
    }

    pub fn identity() -> Self {
        let mut f = SelfMap::permutation(|a| a, |a| a);
        f.flags.extend([Flag::Increasing, Flag::Decreasing]);
        f
    }

    pub fn constant(c: u64) -> Self {
        SelfMap::new(move |_| c)
    }

    pub fn successor() -> Self {
        SelfMap::new(|a| a + 1).with_flags([Flag::Injective, Flag::Increasing])
    }

    /// Transposition `(a b)`; its own inverse.
    pub fn transposition(a: u64, b: u64) -> Self {
        let swap = move |x: u64| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        SelfMap::permutation(swap, swap)
    }

    /// Map given by a table on `{0, .., table.len()-1}` and `fallback` elsewhere.
    pub fn from_table(table: Vec<u64>, fallback: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        let table = Arc::new(table);
        SelfMap::new(move |a| match table.get(a as usize) {
            Some(&v) => v,
            None => fallback(a),
        })
    }

    pub fn with_flags(mut self, flags: impl IntoIterator<Item = Flag>) -> Self {
        self.flags.extend(flags);
        self
    }

    pub fn apply(&self, a: u64) -> u64 {
        (self.eval)(a)
    }

    pub fn invert(&self, a: u64) -> Option<u64> {
        self.inverse.as_ref().map(|inv| inv(a))
    }

    pub fn inverse(&self) -> Option<SelfMap> {
        let inv = self.inverse.clone()?;
        Some(SelfMap {
            eval: inv,
            inverse: Some(self.eval.clone()),
            flags: self.flags.clone(),
        })
    }

    pub fn flags(&self) -> &BTreeSet<Flag> {
        &self.flags
    }

    pub fn claims(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn window(&self, w: Window) -> Vec<u64> {
        (0..w.0).map(|a| self.apply(a)).collect()
    }

    pub fn restrict(&self, domain: impl IntoIterator<Item = u64>) -> PartialMap {
        PartialMap::from_pairs(domain.into_iter().map(|a| (a, self.apply(a))))
    }
}

/// Returns `[f(0), .., f(n-1)]`.
pub fn evaluate_window(f: &SelfMap, w: Window) -> Vec<u64> {
    f.window(w)
}

/// Right-action composite: `f` first, then `g`.
pub fn compose(f: &SelfMap, g: &SelfMap) -> SelfMap {
    let (fe, ge) = (f.eval.clone(), g.eval.clone());
    let eval: Eval = Arc::new(move |a| ge(fe(a)));
    let inverse: Option<Eval> = match (&f.inverse, &g.inverse) {
        (Some(fi), Some(gi)) if f.claims(Flag::Permutation) && g.claims(Flag::Permutation) => {
            let (fi, gi) = (fi.clone(), gi.clone());
            Some(Arc::new(move |a| fi(gi(a))))
        }
        _ => None,
    };
    let mut flags = BTreeSet::new();
    for flag in [
        Flag::Injective,
        Flag::Decreasing,
        Flag::Increasing,
        Flag::FmToOne,
        Flag::AeInjective,
    ] {
        if f.claims(flag) && g.claims(flag) {
            flags.insert(flag);
        }
    }
    if inverse.is_some() {
        flags.insert(Flag::Permutation);
    }
    let bound = |m: &SelfMap| {
        m.flags.iter().find_map(|fl| match fl {
            Flag::BfmToOne(b) => Some(*b),
            Flag::Injective | Flag::Permutation => Some(1),
            _ => None,
        })
    };
    if let (Some(a), Some(b)) = (bound(f), bound(g)) {
        if a * b > 1 {
            flags.insert(Flag::BfmToOne(a * b));
        }
    }
    SelfMap { eval, inverse, flags }
}

/// The initial segment `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window(pub u64);

impl Window {
    pub fn points(self) -> std::ops::Range<u64> {
        0..self.0
    }
}

/// A finite partial map, i.e. a basic open set of the function topology.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialMap {
    values: BTreeMap<u64, u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartialMapError {
    #[error("domain has {domain} points but {values} values were given")]
    LengthMismatch { domain: usize, values: usize },
    #[error("point {0} appears twice in the domain")]
    DuplicatePoint(u64),
}

impl PartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        PartialMap {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn from_window(values: &[u64]) -> Self {
        Self::from_pairs(values.iter().enumerate().map(|(a, &v)| (a as u64, v)))
    }

    pub fn identity_on(domain: impl IntoIterator<Item = u64>) -> Self {
        Self::from_pairs(domain.into_iter().map(|a| (a, a)))
    }

    pub fn try_from_parts(domain: &[u64], values: &[u64]) -> Result<Self, PartialMapError> {
        if domain.len() != values.len() {
            return Err(PartialMapError::LengthMismatch {
                domain: domain.len(),
                values: values.len(),
            });
        }
        let mut map = BTreeMap::new();
        for (&a, &v) in domain.iter().zip(values) {
            if map.insert(a, v).is_some() {
                return Err(PartialMapError::DuplicatePoint(a));
            }
        }
        Ok(PartialMap { values: map })
    }

    pub fn get(&self, a: u64) -> Option<u64> {
        self.values.get(&a).copied()
    }

    pub fn insert(&mut self, a: u64, v: u64) -> Option<u64> {
        self.values.insert(a, v)
    }

    pub fn remove(&mut self, a: u64) -> Option<u64> {
        self.values.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values.iter().map(|(&a, &v)| (a, v))
    }

    pub fn domain(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.keys().copied()
    }

    pub fn image(&self) -> BTreeSet<u64> {
        self.values.values().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.values.len()
    }

    pub fn is_identity(&self) -> bool {
        self.iter().all(|(a, v)| a == v)
    }

    /// Joins two partial maps; `None` if they disagree on a common point.
    pub fn union(&self, other: &PartialMap) -> Option<PartialMap> {
        let mut out = self.clone();
        for (a, v) in other.iter() {
            match out.values.insert(a, v) {
                Some(old) if old != v => return None,
                _ => {}
            }
        }
        Some(out)
    }

    pub fn restrict_to(&self, domain: &BTreeSet<u64>) -> PartialMap {
        PartialMap::from_pairs(self.iter().filter(|(a, _)| domain.contains(a)))
    }

    /// True when every point of `self` is assigned the same value by `other`.
    pub fn is_restriction_of(&self, other: &PartialMap) -> bool {
        self.iter().all(|(a, v)| other.get(a) == Some(v))
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}->{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct PartialMapRepr {
    domain: Vec<u64>,
    values: Vec<u64>,
}

impl Serialize for PartialMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PartialMapRepr {
            domain: self.values.keys().copied().collect(),
            values: self.values.values().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PartialMapRepr::deserialize(d)?;
        PartialMap::try_from_parts(&repr.domain, &repr.values).map_err(serde::de::Error::custom)
    }
}

/// A refutation of a claimed flag: the points (and their values) that
/// violate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagViolation {
    pub points: Vec<u64>,
    pub values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagCheck {
    pub flag: Flag,
    pub holds: bool,
    pub violation: Option<FlagViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagReport {
    pub window: Window,
    pub checks: Vec<FlagCheck>,
}

impl FlagReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, flag: Flag) -> Option<&FlagCheck> {
        self.checks.iter().find(|c| c.flag == flag)
    }
}

fn preimage_violation(f: &SelfMap, w: Window, bound: usize) -> Option<FlagViolation> {
    let mut fibres: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for a in w.points() {
        let fibre = fibres.entry(f.apply(a)).or_default();
        fibre.push(a);
        if fibre.len() > bound {
            let points = fibre.clone();
            let values = points.iter().map(|&p| f.apply(p)).collect();
            return Some(FlagViolation { points, values });
        }
    }
    None
}

/// Checks each claimed flag against its finite-window necessary condition.
/// A failure refutes the claim; a pass proves nothing about the full map.
/// `AeInjective` and `FmToOne` cannot be refuted on a finite window and
/// always pass.
pub fn check_flags(f: &SelfMap, w: Window) -> FlagReport {
    let pointwise = |pred: &dyn Fn(u64, u64) -> bool| {
        w.points().find_map(|a| {
            let v = f.apply(a);
            (!pred(a, v)).then(|| FlagViolation {
                points: vec![a],
                values: vec![v],
            })
        })
    };
    let checks = f
        .flags
        .iter()
        .map(|&flag| {
            let violation = match flag {
                Flag::Injective => preimage_violation(f, w, 1),
                Flag::BfmToOne(b) => preimage_violation(f, w, b as usize),
                Flag::Decreasing => pointwise(&|a, v| v <= a),
                Flag::Increasing => pointwise(&|a, v| v >= a),
                Flag::Permutation => preimage_violation(f, w, 1).or_else(|| match &f.inverse {
                    None => Some(FlagViolation {
                        points: vec![],
                        values: vec![],
                    }),
                    Some(inv) => w.points().find_map(|a| {
                        let v = f.apply(a);
                        let back = inv(v);
                        let fwd = f.apply(inv(a));
                        (back != a || fwd != a).then(|| FlagViolation {
                            points: vec![a],
                            values: vec![v, back, fwd],
                        })
                    }),
                }),
                Flag::AeInjective | Flag::FmToOne => None,
            };
            FlagCheck {
                flag,
                holds: violation.is_none(),
                violation,
            }
        })
        .collect();
    FlagReport { window: w, checks }
}

/// How many streams a moiety allocator splits the naturals into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoietyAllocator {
    /// `k` streams by residue: stream `i` position `p` is `k*p + i`.
    Finite(u64),
    /// Countably many streams via `p(i, k) = 2^i (2k + 1) - 1`.
    Dyadic,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoietyError {
    #[error("a moiety allocator needs at least one stream")]
    NoStreams,
    #[error("stream {stream} does not exist in an allocator with {streams} streams")]
    NoSuchStream { stream: u64, streams: u64 },
    #[error("stream {0} overflows u64 at position 0")]
    Overflow(u64),
}

impl MoietyAllocator {
    pub fn finite(k: u64) -> Result<Self, MoietyError> {
        if k == 0 {
            return Err(MoietyError::NoStreams);
        }
        Ok(MoietyAllocator::Finite(k))
    }

    /// The element at `position` of stream `stream`.
    pub fn element(self, stream: u64, position: u64) -> u64 {
        match self {
            MoietyAllocator::Finite(k) => k * position + stream,
            MoietyAllocator::Dyadic => (1u64 << stream) * (2 * position + 1) - 1,
        }
    }

    /// Which stream owns `b`, and at which position.
    pub fn owner(self, b: u64) -> (u64, u64) {
        match self {
            MoietyAllocator::Finite(k) => (b % k, b / k),
            MoietyAllocator::Dyadic => {
                let m = b + 1;
                let i = m.trailing_zeros() as u64;
                let odd = m >> i;
                (i, (odd - 1) / 2)
            }
        }
    }

    pub fn stream(self, stream: u64) -> Result<Moiety, MoietyError> {
        match self {
            MoietyAllocator::Finite(k) if stream >= k => Err(MoietyError::NoSuchStream { stream, streams: k }),
            MoietyAllocator::Dyadic if stream >= 63 => Err(MoietyError::Overflow(stream)),
            _ => Ok(Moiety {
                allocator: self,
                stream,
            }),
        }
    }
}

/// One stream of a [`MoietyAllocator`]: an injection of the naturals onto
/// an infinite, co-infinite set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moiety {
    pub allocator: MoietyAllocator,
    pub stream: u64,
}

impl Moiety {
    pub fn embed(self, position: u64) -> u64 {
        self.allocator.element(self.stream, position)
    }

    pub fn position(self, b: u64) -> Option<u64> {
        let (s, p) = self.allocator.owner(b);
        (s == self.stream).then_some(p)
    }

    pub fn contains(self, b: u64) -> bool {
        self.position(b).is_some()
    }

    pub fn injection(self) -> SelfMap {
        SelfMap::new(move |a| self.embed(a)).with_flags([Flag::Injective])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        assert_eq!(evaluate_window(&SelfMap::identity(), Window(3)), vec![0, 1, 2]);
        assert_eq!(evaluate_window(&SelfMap::successor(), Window(3)), vec![1, 2, 3]);
        let ss = compose(&SelfMap::successor(), &SelfMap::successor());
        assert_eq!(ss.window(Window(2)), vec![2, 3]);
    }

    #[test]
    fn composition_is_right_action() {
        let zero = SelfMap::constant(0);
        let plus5 = SelfMap::new(|a| a + 5);
        assert_eq!(compose(&zero, &plus5).window(Window(3)), vec![5, 5, 5]);
        assert_eq!(compose(&plus5, &zero).window(Window(3)), vec![0, 0, 0]);
        let f = SelfMap::new(|a| a * a % 7);
        assert_eq!(
            compose(&SelfMap::identity(), &f).window(Window(10)),
            f.window(Window(10))
        );
    }

    #[test]
    fn composed_permutations_keep_inverse() {
        let p = compose(&SelfMap::transposition(0, 1), &SelfMap::transposition(1, 2));
        assert!(p.claims(Flag::Permutation));
        assert!(check_flags(&p, Window(10)).all_hold());
        assert_eq!(p.window(Window(3)), vec![2, 0, 1]);
        for a in 0..10 {
            assert_eq!(p.invert(p.apply(a)), Some(a));
        }
    }

    #[test]
    fn flag_checks() {
        assert!(check_flags(&SelfMap::identity(), Window(10)).all_hold());

        let zero = SelfMap::constant(0).with_flags([Flag::Injective]);
        let report = check_flags(&zero, Window(2));
        let check = report.get(Flag::Injective).unwrap();
        assert!(!check.holds);
        assert_eq!(check.violation.as_ref().unwrap().points, vec![0, 1]);

        let half = SelfMap::new(|a| a / 2).with_flags([Flag::BfmToOne(2), Flag::Decreasing]);
        assert!(check_flags(&half, Window(10)).all_hold());
        let third = SelfMap::new(|a| a / 3).with_flags([Flag::BfmToOne(2)]);
        let v = check_flags(&third, Window(10));
        assert_eq!(v.checks[0].violation.as_ref().unwrap().points, vec![0, 1, 2]);

        let bad = SelfMap::successor().with_flags([Flag::Decreasing]);
        let r = check_flags(&bad, Window(5));
        assert_eq!(
            r.get(Flag::Decreasing).unwrap().violation.as_ref().unwrap().points,
            vec![0]
        );
    }

    #[test]
    fn broken_inverse_is_refuted() {
        let p = SelfMap::permutation(|a| a ^ 1, |a| a);
        let r = check_flags(&p, Window(4));
        assert!(!r.get(Flag::Permutation).unwrap().holds);
    }

    #[test]
    fn moiety_examples() {
        assert_eq!(MoietyAllocator::finite(0), Err(MoietyError::NoStreams));
        let two = MoietyAllocator::finite(2).unwrap();
        assert_eq!(two.element(0, 3), 6);
        assert_eq!(two.owner(7), (1, 3));

        let d = MoietyAllocator::Dyadic;
        assert_eq!(d.owner(11), (2, 1));
        assert!((0..50).all(|k| d.element(0, k) == 2 * k));
    }

    #[test]
    fn dyadic_pairing_is_a_bijection_on_first_hundred() {
        let d = MoietyAllocator::Dyadic;
        let mut seen = BTreeSet::new();
        for i in 0..7 {
            for k in 0..100 {
                let b = d.element(i, k);
                if b < 100 {
                    assert!(seen.insert(b));
                    assert_eq!(d.owner(b), (i, k));
                }
            }
        }
        assert_eq!(seen, (0..100).collect());
    }

    #[test]
    fn partial_map_json_shape() {
        let p = PartialMap::from_pairs([(0, 3), (2, 1)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"domain":[0,2],"values":[3,1]}"#);
        let back: PartialMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PartialMap>(r#"{"domain":[0,0],"values":[1,2]}"#).is_err());
    }
}
