//! Finite presentations of submonoids of `Self(ω)` with decidable prefix
//! semantics.
//!
//! Every descriptor denotes a closed submonoid, so membership of a finite
//! [`PartialMap`] (does some member agree with it?) characterizes the
//! monoid. All descriptors serialize as JSON objects tagged by `"variant"`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{PartialMap, SelfMap, Window};

/// A cardinal in `ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Infinite => None,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("group-closure descriptors only support budgeted membership, not exhaustive enumeration")]
    NotEnumerable,
    #[error("codomain bound must be at least 1")]
    EmptyCodomain,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid preorder: {0}")]
    InvalidPreorder(String),
    #[error("group search budget of {0} states exhausted")]
    BudgetExhausted(u64),
    #[error("descriptor has an infinite forward orbit at {0}")]
    InfiniteOrbit(u64),
}

/// Three-valued prefix membership; `Unknown` only arises from budgeted
/// group searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl Membership {
    pub fn is_yes(self) -> bool {
        self == Membership::Yes
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Membership::Yes
        } else {
            Membership::No
        }
    }
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// Built-in partition families of ω.
///
/// JSON schemas (tag `"family"`):
/// - `{"family":"constant","size":k}`: blocks `{ki, .., ki+k-1}`.
/// - `{"family":"growing"}`: consecutive blocks, block `i` of size `i+1`.
/// - `{"family":"explicit","blocks":[[..],..],"tail":{..}}`: the listed
///   blocks cover exactly `{0, .., L-1}`; the tail family is shifted by `L`.
/// - `{"family":"residue","modulus":m}`: the `m` infinite residue classes.
/// - `{"family":"orbit-sizes","monoid":{..}}`: consecutive blocks, block `α`
///   of size `|(α)M|` (all orbits must be finite).
/// - `{"family":"squared","base":{..}}`: consecutive blocks of size `n_i²`
///   where `n_i` are the block sizes of an interval base family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PartitionFamily {
    Constant {
        size: u64,
    },
    Growing,
    Explicit {
        blocks: Vec<Vec<u64>>,
        tail: Box<PartitionFamily>,
    },
    Residue {
        modulus: u64,
    },
    OrbitSizes {
        monoid: Box<MonoidDescriptor>,
    },
    Squared {
        base: Box<PartitionFamily>,
    },
}

/// The members of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Interval { start: u64, len: u64 },
    Set(Vec<u64>),
    Residue { modulus: u64, residue: u64 },
}

impl Block {
    pub fn contains(&self, x: u64) -> bool {
        match self {
            Block::Interval { start, len } => x >= *start && x - start < *len,
            Block::Set(members) => members.binary_search(&x).is_ok(),
            Block::Residue { modulus, residue } => x % modulus == *residue,
        }
    }

    pub fn size(&self) -> Card {
        match self {
            Block::Interval { len, .. } => Card::Finite(*len),
            Block::Set(m) => Card::Finite(m.len() as u64),
            Block::Residue { .. } => Card::Infinite,
        }
    }

    /// Members below `bound`, ascending.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        match self {
            Block::Interval { start, len } => (*start..(start + len).min(bound)).collect(),
            Block::Set(m) => m.iter().copied().filter(|&x| x < bound).collect(),
            Block::Residue { modulus, residue } => (*residue..bound).step_by(*modulus as usize).collect(),
        }
    }

    /// All members if the block is finite.
    pub fn members(&self) -> Option<Vec<u64>> {
        match self {
            Block::Interval { start, len } => Some((*start..start + len).collect()),
            Block::Set(m) => Some(m.clone()),
            Block::Residue { .. } => None,
        }
    }

    fn shifted(self, by: u64) -> Block {
        match self {
            Block::Interval { start, len } => Block::Interval { start: start + by, len },
            Block::Set(m) => Block::Set(m.into_iter().map(|x| x + by).collect()),
            Block::Residue { modulus, residue } => Block::Residue {
                modulus,
                residue: residue + by,
            },
        }
    }
}

fn growing_index(x: u64) -> u64 {
    // largest i with i(i+1)/2 <= x
    let mut i = (((8 * x + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (i + 1) * (i + 2) / 2 <= x {
        i += 1;
    }
    while i * (i + 1) / 2 > x {
        i -= 1;
    }
    i
}

impl PartitionFamily {
    pub fn two_blocks() -> Self {
        PartitionFamily::Constant { size: 2 }
    }

    /// True for families made of consecutive finite intervals.
    pub fn is_interval(&self) -> bool {
        matches!(
            self,
            PartitionFamily::Constant { .. }
                | PartitionFamily::Growing
                | PartitionFamily::OrbitSizes { .. }
                | PartitionFamily::Squared { .. }
        )
    }

    /// Size of the `i`-th consecutive block, for interval families.
    pub fn interval_size(&self, i: u64) -> Option<u64> {
        match self {
            PartitionFamily::Constant { size } => Some(*size),
            PartitionFamily::Growing => Some(i + 1),
            PartitionFamily::OrbitSizes { monoid } => monoid.orbit_size(i).and_then(Card::finite),
            PartitionFamily::Squared { base } => base.interval_size(i).map(|n| n * n),
            _ => None,
        }
    }

    /// `(start, len)` of the `i`-th block, for interval families.
    pub fn interval(&self, i: u64) -> Option<(u64, u64)> {
        match self {
            PartitionFamily::Constant { size } => Some((i * size, *size)),
            PartitionFamily::Growing => Some((i * (i + 1) / 2, i + 1)),
            PartitionFamily::OrbitSizes { .. } | PartitionFamily::Squared { .. } => {
                let mut start = 0;
                for j in 0..i {
                    start += self.interval_size(j)?;
                }
                Some((start, self.interval_size(i)?))
            }
            _ => None,
        }
    }

    /// Index and members of the block containing `x`.
    pub fn locate(&self, x: u64) -> (u64, Block) {
        match self {
            PartitionFamily::Constant { size } => {
                let i = x / size;
                (
                    i,
                    Block::Interval {
                        start: i * size,
                        len: *size,
                    },
                )
            }
            PartitionFamily::Growing => {
                let i = growing_index(x);
                (
                    i,
                    Block::Interval {
                        start: i * (i + 1) / 2,
                        len: i + 1,
                    },
                )
            }
            PartitionFamily::Residue { modulus } => (
                x % modulus,
                Block::Residue {
                    modulus: *modulus,
                    residue: x % modulus,
                },
            ),
            PartitionFamily::Explicit { blocks, tail } => {
                let covered: u64 = blocks.iter().map(|b| b.len() as u64).sum();
                if x < covered {
                    let i = blocks
                        .iter()
                        .position(|b| b.contains(&x))
                        .expect("validated explicit prefix");
                    let mut members = blocks[i].clone();
                    members.sort_unstable();
                    (i as u64, Block::Set(members))
                } else {
                    let (i, block) = tail.locate(x - covered);
                    (i + blocks.len() as u64, block.shifted(covered))
                }
            }
            PartitionFamily::OrbitSizes { .. } | PartitionFamily::Squared { .. } => {
                let (mut i, mut start) = (0u64, 0u64);
                loop {
                    let len = self.interval_size(i).unwrap_or(1).max(1);
                    if x < start + len {
                        return (i, Block::Interval { start, len });
                    }
                    start += len;
                    i += 1;
                }
            }
        }
    }

    pub fn block(&self, x: u64) -> Block {
        self.locate(x).1
    }

    pub fn block_size(&self, x: u64) -> Card {
        self.block(x).size()
    }

    pub fn same_block(&self, x: u64, y: u64) -> bool {
        self.block(x).contains(y)
    }

    pub fn validate(&self) -> Result<(), DescriptorError> {
        let bad = |m: String| Err(DescriptorError::InvalidPartition(m));
        match self {
            PartitionFamily::Constant { size: 0 } => bad("constant blocks need size >= 1".into()),
            PartitionFamily::Residue { modulus: 0 } => bad("residue partition needs modulus >= 1".into()),
            PartitionFamily::Explicit { blocks, tail } => {
                let mut seen = BTreeSet::new();
                for b in blocks {
                    if b.is_empty() {
                        return bad("explicit blocks must be nonempty".into());
                    }
                    for &x in b {
                        if !seen.insert(x) {
                            return bad(format!("point {x} appears in two explicit blocks"));
                        }
                    }
                }
                let n = seen.len() as u64;
                if seen != (0..n).collect() {
                    return bad(format!(
                        "explicit blocks must cover exactly {{0, .., {}}}",
                        n.saturating_sub(1)
                    ));
                }
                tail.validate()
            }
            PartitionFamily::OrbitSizes { monoid } => {
                for a in 0..64 {
                    match monoid.orbit_size(a) {
                        Some(Card::Finite(n)) if n >= 1 => {}
                        Some(Card::Finite(_)) => return bad(format!("empty orbit at {a}")),
                        Some(Card::Infinite) => return Err(DescriptorError::InfiniteOrbit(a)),
                        None => return bad(format!("orbit size at {a} is not structurally known")),
                    }
                }
                Ok(())
            }
            PartitionFamily::Squared { base } => {
                if !base.is_interval() {
                    return bad("squared sizes need an interval base family".into());
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------------
// Preorders
// ---------------------------------------------------------------------------

/// One explicit entry of a [`PreorderDescriptor::FinitePatch`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Override {
    pub point: u64,
    pub delta: BTreeSet<u64>,
}

/// A preorder `ρ` on ω, presented by its up-sets `Δ_ρ(α)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum PreorderDescriptor {
    /// `Δ(α) = ω`.
    Full,
    /// `Δ(α) = {α}`.
    Equality,
    /// `Δ(α) = {0, .., α}`.
    NaturalDown,
    /// `Δ(α)` is the block of `α`.
    Partition { partition: PartitionFamily },
    /// `Δ(α) = Γ ∪ {α}`.
    Pointed { gamma: BTreeSet<u64> },
    /// The base preorder with finitely many up-sets replaced.
    FinitePatch {
        base: Box<PreorderDescriptor>,
        overrides: Vec<Override>,
    },
    /// `Δ(α) = ω` when `α ≡ residue (mod modulus)`, else `{α}`.
    FullOnResidue { modulus: u64, residue: u64 },
}

impl PreorderDescriptor {
    pub fn pointed(gamma: u64) -> Self {
        PreorderDescriptor::Pointed {
            gamma: [gamma].into_iter().collect(),
        }
    }

    pub fn patch(base: PreorderDescriptor, overrides: impl IntoIterator<Item = (u64, Vec<u64>)>) -> Self {
        PreorderDescriptor::FinitePatch {
            base: Box::new(base),
            overrides: overrides
                .into_iter()
                .map(|(point, delta)| Override {
                    point,
                    delta: delta.into_iter().collect(),
                })
                .collect(),
        }
    }

    /// Whether `b ∈ Δ(a)`.
    pub fn relates(&self, a: u64, b: u64) -> bool {
        match self {
            PreorderDescriptor::Full => true,
            PreorderDescriptor::Equality => a == b,
            PreorderDescriptor::NaturalDown => b <= a,
            PreorderDescriptor::Partition { partition } => partition.same_block(a, b),
            PreorderDescriptor::Pointed { gamma } => a == b || gamma.contains(&b),
            PreorderDescriptor::FinitePatch { base, overrides } => {
                match overrides.iter().rev().find(|o| o.point == a) {
                    Some(o) => o.delta.contains(&b),
                    None => base.relates(a, b),
                }
            }
            PreorderDescriptor::FullOnResidue { modulus, residue } => a == b || a % modulus == *residue,
        }
    }

    /// `Δ(a) ∩ {0, .., bound-1}`.
    pub fn delta(&self, a: u64, bound: u64) -> BTreeSet<u64> {
        match self {
            PreorderDescriptor::NaturalDown => (0..=a.min(bound.saturating_sub(1))).filter(|&b| b < bound).collect(),
            PreorderDescriptor::Partition { partition } => {
                partition.block(a).members_below(bound).into_iter().collect()
            }
            _ => (0..bound).filter(|&b| self.relates(a, b)).collect(),
        }
    }

    /// Exact `|Δ(a)|`, computed structurally.
    pub fn delta_size(&self, a: u64) -> Card {
        match self {
            PreorderDescriptor::Full => Card::Infinite,
            PreorderDescriptor::Equality => Card::Finite(1),
            PreorderDescriptor::NaturalDown => Card::Finite(a + 1),
            PreorderDescriptor::Partition { partition } => partition.block_size(a),
            PreorderDescriptor::Pointed { gamma } => Card::Finite(gamma.len() as u64 + u64::from(!gamma.contains(&a))),
            PreorderDescriptor::FinitePatch { base, overrides } => {
                match overrides.iter().rev().find(|o| o.point == a) {
                    Some(o) => Card::Finite(o.delta.len() as u64),
                    None => base.delta_size(a),
                }
            }
            PreorderDescriptor::FullOnResidue { modulus, residue } => {
                if a % modulus == *residue {
                    Card::Infinite
                } else {
                    Card::Finite(1)
                }
            }
        }
    }

    /// `Δ(a)` in ascending order; infinite when `delta_size(a)` is.
    pub fn delta_iter(&self, a: u64) -> Box<dyn Iterator<Item = u64> + '_> {
        match self.delta_size(a) {
            Card::Infinite => Box::new((0..).filter(move |&b| self.relates(a, b))),
            Card::Finite(n) => Box::new((0..).filter(move |&b| self.relates(a, b)).take(n as usize)),
        }
    }

    fn structural_errors(&self) -> Option<String> {
        match self {
            PreorderDescriptor::Partition { partition } => partition.validate().err().map(|e| e.to_string()),
            PreorderDescriptor::FullOnResidue { modulus: 0, .. } => Some("modulus must be >= 1".into()),
            PreorderDescriptor::FinitePatch { base, .. } => base.structural_errors(),
            _ => None,
        }
    }
}

/// Outcome of [`validate_preorder`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderReport {
    pub window: Window,
    pub structural: Option<String>,
    pub reflexivity: Vec<u64>,
    /// Triples `(α, β, γ)` with `β ∈ Δ(α)`, `γ ∈ Δ(β)` but `γ ∉ Δ(α)`.
    pub transitivity: Vec<(u64, u64, u64)>,
}

impl PreorderReport {
    pub fn passes(&self) -> bool {
        self.structural.is_none() && self.reflexivity.is_empty() && self.transitivity.is_empty()
    }
}

const MAX_LISTED_VIOLATIONS: usize = 32;

/// Checks reflexivity and window-restricted transitivity.
pub fn validate_preorder(rho: &PreorderDescriptor, w: Window) -> PreorderReport {
    let n = w.0;
    let structural = rho.structural_errors();
    if structural.is_some() {
        return PreorderReport {
            window: w,
            structural,
            reflexivity: vec![],
            transitivity: vec![],
        };
    }
    let reflexivity = (0..n)
        .filter(|&a| !rho.relates(a, a))
        .take(MAX_LISTED_VIOLATIONS)
        .collect();
    let deltas: Vec<BTreeSet<u64>> = (0..n).map(|a| rho.delta(a, n)).collect();
    let mut transitivity = Vec::new();
    'outer: for a in 0..n {
        for &b in &deltas[a as usize] {
            for &c in &deltas[b as usize] {
                if !deltas[a as usize].contains(&c) {
                    transitivity.push((a, b, c));
                    if transitivity.len() >= MAX_LISTED_VIOLATIONS {
                        break 'outer;
                    }
                }
            }
        }
    }
    PreorderReport {
        window: w,
        structural,
        reflexivity,
        transitivity,
    }
}

pub fn delta(rho: &PreorderDescriptor, a: u64, bound: u64) -> BTreeSet<u64> {
    rho.delta(a, bound)
}

pub fn delta_size(rho: &PreorderDescriptor, a: u64) -> Card {
    rho.delta_size(a)
}

// ---------------------------------------------------------------------------
// Permutation generators
// ---------------------------------------------------------------------------

/// A permutation generator for [`MonoidDescriptor::GroupClosure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PermutationSpec {
    /// Product of disjoint cycles with finite support, e.g. `[[0,1,2]]`.
    Cycles { cycles: Vec<Vec<u64>> },
    /// `(0 1)(2 3)(4 5)...`, i.e. `α ↦ α xor 1`.
    PairSwap,
}

impl PermutationSpec {
    pub fn transposition(a: u64, b: u64) -> Self {
        PermutationSpec::Cycles {
            cycles: vec![vec![a, b]],
        }
    }

    pub fn cycle(points: Vec<u64>) -> Self {
        PermutationSpec::Cycles { cycles: vec![points] }
    }

    fn validate(&self) -> Result<(), DescriptorError> {
        if let PermutationSpec::Cycles { cycles } = self {
            let mut seen = BTreeSet::new();
            for &x in cycles.iter().flatten() {
                if !seen.insert(x) {
                    return Err(DescriptorError::InvalidPartition(format!(
                        "cycles are not disjoint at {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: u64) -> u64 {
        match self {
            PermutationSpec::PairSwap => x ^ 1,
            PermutationSpec::Cycles { cycles } => {
                for c in cycles {
                    if let Some(i) = c.iter().position(|&y| y == x) {
                        return c[(i + 1) % c.len()];
                    }
                }
                x
            }
        }
    }

    pub fn apply_inverse(&self, x: u64) -> u64 {
        match self {
            PermutationSpec::PairSwap => x ^ 1,
            PermutationSpec::Cycles { cycles } => {
                for c in cycles {
                    if let Some(i) = c.iter().position(|&y| y == x) {
                        return c[(i + c.len() - 1) % c.len()];
                    }
                }
                x
            }
        }
    }

    pub fn to_self_map(&self) -> SelfMap {
        let (f, g) = (self.clone(), self.clone());
        SelfMap::permutation(move |x| f.apply(x), move |x| g.apply_inverse(x))
    }

    fn support_bound(&self) -> u64 {
        match self {
            PermutationSpec::PairSwap => 0,
            PermutationSpec::Cycles { cycles } => cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(0),
        }
    }
}

/// A group element generated by [`PermutationSpec`]s: its action on
/// `{0, .., K-1}` (with `K` even and past every cycle) and whether it
/// acts as the pair swap beyond `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    table: Vec<u64>,
    tail_swap: bool,
}

impl GroupElement {
    pub fn apply(&self, x: u64) -> u64 {
        match self.table.get(x as usize) {
            Some(&v) => v,
            None if self.tail_swap => x ^ 1,
            None => x,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.tail_swap && self.table.iter().enumerate().all(|(i, &v)| i as u64 == v)
    }

    /// Points below the table length that this element moves.
    pub fn support(&self) -> Vec<u64> {
        (0..self.table.len() as u64)
            .filter(|&x| self.table[x as usize] != x)
            .collect()
    }

    pub fn moves_tail(&self) -> bool {
        self.tail_swap
    }

    /// Some point this element moves, if it is not the identity.
    pub fn moved_point(&self) -> Option<u64> {
        if let Some(i) = self.table.iter().enumerate().position(|(i, &v)| i as u64 != v) {
            return Some(i as u64);
        }
        self.tail_swap.then_some(self.table.len() as u64)
    }
}

/// All elements of the group generated by `generators`, or
/// `BudgetExhausted` once more than `budget` elements are found.
pub fn group_elements(generators: &[PermutationSpec], budget: u64) -> Result<Vec<GroupElement>, DescriptorError> {
    let k = generators.iter().map(PermutationSpec::support_bound).max().unwrap_or(0);
    let k = k.div_ceil(2) * 2 + 2;
    let gens: Vec<GroupElement> = generators
        .iter()
        .flat_map(|g| {
            let fwd = GroupElement {
                table: (0..k).map(|x| g.apply(x)).collect(),
                tail_swap: matches!(g, PermutationSpec::PairSwap),
            };
            let inv = GroupElement {
                table: (0..k).map(|x| g.apply_inverse(x)).collect(),
                tail_swap: matches!(g, PermutationSpec::PairSwap),
            };
            [fwd, inv]
        })
        .collect();
    let identity = GroupElement {
        table: (0..k).collect(),
        tail_swap: false,
    };
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut queue = VecDeque::from([identity.clone()]);
    seen.insert(identity);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            // right action: e first, then g
            let next = GroupElement {
                table: e.table.iter().map(|&x| g.apply(x)).collect(),
                tail_swap: e.tail_swap ^ g.tail_swap,
            };
            if seen.insert(next.clone()) {
                if seen.len() as u64 > budget {
                    return Err(DescriptorError::BudgetExhausted(budget));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The orbit of `a` under the group generated by `generators` (BFS over
/// generators and inverses).
pub fn group_orbit(generators: &[PermutationSpec], a: u64, budget: u64) -> Result<BTreeSet<u64>, DescriptorError> {
    let mut seen = BTreeSet::from([a]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            for y in [g.apply(x), g.apply_inverse(x)] {
                if seen.insert(y) {
                    if seen.len() as u64 > budget {
                        return Err(DescriptorError::BudgetExhausted(budget));
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(seen)
}

// ---------------------------------------------------------------------------
// Monoids
// ---------------------------------------------------------------------------

/// A submonoid of `Self(ω)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum MonoidDescriptor {
    /// All of `E = Self(ω)`.
    FullE,
    /// All permutations.
    SymS,
    /// `E(ρ)`: maps with `(α)f ∈ Δ_ρ(α)`.
    PreorderMonoid { preorder: PreorderDescriptor },
    /// `E_(A)`: maps sending every block into itself.
    PartitionMonoid { partition: PartitionFamily },
    /// `S_(A)`: permutations sending every block onto itself.
    PartitionSym { partition: PartitionFamily },
    /// `E≤`.
    OrderDown,
    /// `E>`: the identity together with all strictly increasing maps.
    OrderUpStrict,
    /// `M_n`: the identity together with all maps with image in `{0, .., n}`.
    FiniteImage { n: u64 },
    /// `M'_3` with `Σ₁ = {0,1} ∪ {even ≥ 4}` and `Σ₂ = {2,3} ∪ {odd ≥ 5}`.
    TwoSidedExample,
    /// Pointwise stabilizer `M_(Σ)`.
    Stabilizer {
        monoid: Box<MonoidDescriptor>,
        fixed: BTreeSet<u64>,
    },
    /// Closure in `E` of the group generated by finitely many permutations.
    GroupClosure {
        generators: Vec<PermutationSpec>,
        budget: u64,
    },
    /// `{1}`.
    Trivial,
}

/// `Σ₁` of the two-sided example; its complement is `Σ₂`.
pub fn two_sided_sigma1(a: u64) -> bool {
    a < 2 || (a >= 4 && a.is_multiple_of(2))
}

impl MonoidDescriptor {
    pub fn preorder(rho: PreorderDescriptor) -> Self {
        MonoidDescriptor::PreorderMonoid { preorder: rho }
    }

    pub fn partition(family: PartitionFamily) -> Self {
        MonoidDescriptor::PartitionMonoid { partition: family }
    }

    pub fn group(generators: Vec<PermutationSpec>, budget: u64) -> Self {
        MonoidDescriptor::GroupClosure { generators, budget }
    }

    /// `Some(ρ)` when this monoid is `E(ρ)` for a grammar preorder `ρ`.
    pub fn as_preorder(&self) -> Option<PreorderDescriptor> {
        match self {
            MonoidDescriptor::FullE => Some(PreorderDescriptor::Full),
            MonoidDescriptor::PreorderMonoid { preorder } => Some(preorder.clone()),
            MonoidDescriptor::PartitionMonoid { partition } => Some(PreorderDescriptor::Partition {
                partition: partition.clone(),
            }),
            MonoidDescriptor::OrderDown => Some(PreorderDescriptor::NaturalDown),
            MonoidDescriptor::Trivial => Some(PreorderDescriptor::Equality),
            MonoidDescriptor::Stabilizer { monoid, fixed } => {
                let base = monoid.as_preorder()?;
                Some(fix_points(base, fixed))
            }
            _ => None,
        }
    }

    fn is_budgeted(&self) -> bool {
        match self {
            MonoidDescriptor::GroupClosure { .. } => true,
            MonoidDescriptor::Stabilizer { monoid, .. } => monoid.is_budgeted(),
            MonoidDescriptor::PartitionMonoid {
                partition: PartitionFamily::OrbitSizes { monoid },
            }
            | MonoidDescriptor::PartitionSym {
                partition: PartitionFamily::OrbitSizes { monoid },
            } => monoid.is_budgeted(),
            _ => false,
        }
    }

    /// Whether some member agrees with `p` on its domain.
    pub fn prefix_membership(&self, p: &PartialMap) -> Membership {
        use MonoidDescriptor as M;
        match self {
            M::FullE => Membership::Yes,
            M::SymS => Membership::from_bool(p.is_injective()),
            M::PreorderMonoid { preorder } => Membership::from_bool(p.iter().all(|(a, v)| preorder.relates(a, v))),
            M::PartitionMonoid { partition } => {
                Membership::from_bool(p.iter().all(|(a, v)| partition.same_block(a, v)))
            }
            M::PartitionSym { partition } => {
                Membership::from_bool(p.is_injective() && p.iter().all(|(a, v)| partition.same_block(a, v)))
            }
            M::OrderDown => Membership::from_bool(p.iter().all(|(a, v)| v <= a)),
            M::OrderUpStrict => Membership::from_bool(p.is_identity() || p.iter().all(|(a, v)| v > a)),
            M::FiniteImage { n } => Membership::from_bool(p.is_identity() || p.iter().all(|(_, v)| v <= *n)),
            M::TwoSidedExample => Membership::from_bool(
                p.is_identity()
                    || p.iter()
                        .all(|(a, v)| if two_sided_sigma1(a) { v <= 1 } else { v == 2 || v == 3 }),
            ),
            M::Stabilizer { monoid, fixed } => match p.union(&PartialMap::identity_on(fixed.iter().copied())) {
                Some(q) => monoid.prefix_membership(&q),
                None => Membership::No,
            },
            M::GroupClosure { generators, budget } => group_prefix_membership(generators, *budget, p),
            M::Trivial => Membership::from_bool(p.is_identity()),
        }
    }

    /// All accepted maps `domain -> {0, .., codomain_bound-1}` in
    /// lexicographic order of their value vectors.
    pub fn enumerate_prefix_maps(
        &self,
        domain: &BTreeSet<u64>,
        codomain_bound: u64,
    ) -> Result<Vec<PartialMap>, DescriptorError> {
        if self.is_budgeted() {
            return Err(DescriptorError::NotEnumerable);
        }
        if codomain_bound == 0 {
            return Err(DescriptorError::EmptyCodomain);
        }
        let points: Vec<u64> = domain.iter().copied().collect();
        let mut out = Vec::new();
        let mut current = PartialMap::new();
        self.extend_prefix(&points, codomain_bound, &mut current, &mut out);
        Ok(out)
    }

    fn extend_prefix(&self, points: &[u64], bound: u64, current: &mut PartialMap, out: &mut Vec<PartialMap>) {
        let Some((&a, rest)) = points.split_first() else {
            out.push(current.clone());
            return;
        };
        for v in 0..bound {
            current.insert(a, v);
            // membership is monotone, so a rejected prefix prunes its subtree
            if self.prefix_membership(current).is_yes() {
                self.extend_prefix(rest, bound, current, out);
            }
        }
        current.remove(a);
    }

    /// Exact `|(a)M|` when it is structurally known.
    pub fn orbit_size(&self, a: u64) -> Option<Card> {
        use MonoidDescriptor as M;
        if let Some(rho) = self.as_preorder() {
            return Some(rho.delta_size(a));
        }
        match self {
            M::SymS | M::OrderUpStrict => Some(Card::Infinite),
            M::PartitionSym { partition } => Some(partition.block_size(a)),
            M::FiniteImage { n } => Some(Card::Finite(n + 1 + u64::from(a > *n))),
            M::TwoSidedExample => Some(Card::Finite(if two_sided_sigma1(a) {
                2 + u64::from(a >= 2)
            } else {
                2 + u64::from(a >= 4)
            })),
            M::GroupClosure { generators, budget } => group_orbit(generators, a, *budget)
                .ok()
                .map(|o| Card::Finite(o.len() as u64)),
            M::Stabilizer { monoid, fixed } => {
                if fixed.contains(&a) {
                    return Some(Card::Finite(1));
                }
                match monoid.as_ref() {
                    M::SymS => Some(Card::Infinite),
                    M::PartitionSym { partition } => match partition.block(a) {
                        Block::Residue { .. } => Some(Card::Infinite),
                        b => {
                            let members = b.members()?;
                            Some(Card::Finite(
                                members.iter().filter(|x| !fixed.contains(x)).count() as u64
                            ))
                        }
                    },
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Accepted single-point values `{v < bound : {a ↦ v} accepted}`
    /// together with the exact orbit size when structurally known.
    pub fn forward_orbit(&self, a: u64, bound: u64) -> Result<Orbit, DescriptorError> {
        let mut members = BTreeSet::new();
        for v in 0..bound {
            match self.prefix_membership(&PartialMap::from_pairs([(a, v)])) {
                Membership::Yes => {
                    members.insert(v);
                }
                Membership::No => {}
                Membership::Unknown => {
                    let budget = match self {
                        MonoidDescriptor::GroupClosure { budget, .. } => *budget,
                        _ => 0,
                    };
                    return Err(DescriptorError::BudgetExhausted(budget));
                }
            }
        }
        Ok(Orbit {
            members,
            size: self.orbit_size(a),
        })
    }

    /// The finitely many members of `(a)M`, ascending, when that orbit is
    /// finite and its size is structurally known.
    pub fn orbit_members(&self, a: u64) -> Result<Vec<u64>, DescriptorError> {
        let size = match self.orbit_size(a) {
            Some(Card::Finite(n)) => n as usize,
            Some(Card::Infinite) => return Err(DescriptorError::InfiniteOrbit(a)),
            None => return Err(DescriptorError::InvalidPartition(format!("orbit size at {a} unknown"))),
        };
        let mut out = Vec::with_capacity(size);
        let mut v = 0;
        while out.len() < size {
            if self.prefix_membership(&PartialMap::from_pairs([(a, v)])).is_yes() {
                out.push(v);
            }
            v += 1;
        }
        Ok(out)
    }

    /// Pointwise stabilizer of the finite set `sigma`. Preorder monoids stay
    /// preorder monoids via a finite patch.
    pub fn stabilizer(&self, sigma: &BTreeSet<u64>) -> MonoidDescriptor {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            MonoidDescriptor::PreorderMonoid { preorder } => MonoidDescriptor::PreorderMonoid {
                preorder: fix_points(preorder.clone(), sigma),
            },
            MonoidDescriptor::Stabilizer { monoid, fixed } => MonoidDescriptor::Stabilizer {
                monoid: monoid.clone(),
                fixed: fixed.union(sigma).copied().collect(),
            },
            MonoidDescriptor::Trivial => MonoidDescriptor::Trivial,
            other => MonoidDescriptor::Stabilizer {
                monoid: Box::new(other.clone()),
                fixed: sigma.clone(),
            },
        }
    }
}

fn fix_points(base: PreorderDescriptor, sigma: &BTreeSet<u64>) -> PreorderDescriptor {
    if sigma.is_empty() {
        return base;
    }
    PreorderDescriptor::FinitePatch {
        base: Box::new(base),
        overrides: sigma
            .iter()
            .map(|&s| Override {
                point: s,
                delta: [s].into_iter().collect(),
            })
            .collect(),
    }
}

/// Forward orbit of a point, truncated to a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub members: BTreeSet<u64>,
    pub size: Option<Card>,
}

/// BFS over the orbit of the domain tuple under generators and inverses.
fn group_prefix_membership(generators: &[PermutationSpec], budget: u64, p: &PartialMap) -> Membership {
    if generators.iter().any(|g| g.validate().is_err()) {
        return Membership::No;
    }
    let start: Vec<u64> = p.domain().collect();
    let target: Vec<u64> = p.iter().map(|(_, v)| v).collect();
    if start == target {
        return Membership::Yes;
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for g in generators {
            for inverse in [false, true] {
                let next: Vec<u64> = t
                    .iter()
                    .map(|&x| if inverse { g.apply_inverse(x) } else { g.apply(x) })
                    .collect();
                if next == target {
                    return Membership::Yes;
                }
                if seen.insert(next.clone()) {
                    if seen.len() as u64 > budget {
                        return Membership::Unknown;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Membership::No
}

pub fn prefix_membership(m: &MonoidDescriptor, p: &PartialMap) -> Membership {
    m.prefix_membership(p)
}

pub fn enumerate_prefix_maps(
    m: &MonoidDescriptor,
    domain: &BTreeSet<u64>,
    codomain_bound: u64,
) -> Result<Vec<PartialMap>, DescriptorError> {
    m.enumerate_prefix_maps(domain, codomain_bound)
}

pub fn stabilizer(m: &MonoidDescriptor, sigma: &BTreeSet<u64>) -> MonoidDescriptor {
    m.stabilizer(sigma)
}

pub fn forward_orbit(m: &MonoidDescriptor, a: u64, bound: u64) -> Result<Orbit, DescriptorError> {
    m.forward_orbit(a, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    fn pm(pairs: &[(u64, u64)]) -> PartialMap {
        PartialMap::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn delta_examples() {
        assert_eq!(PreorderDescriptor::Equality.delta(5, 10), set(&[5]));
        assert_eq!(PreorderDescriptor::NaturalDown.delta(3, 10), set(&[0, 1, 2, 3]));
        assert_eq!(PreorderDescriptor::pointed(7).delta(2, 10), set(&[2, 7]));
        assert_eq!(PreorderDescriptor::NaturalDown.delta(30, 4), set(&[0, 1, 2, 3]));
    }

    #[test]
    fn delta_size_examples() {
        assert_eq!(PreorderDescriptor::Full.delta_size(9), Card::Infinite);
        assert_eq!(PreorderDescriptor::NaturalDown.delta_size(4), Card::Finite(5));
        let patched = PreorderDescriptor::patch(PreorderDescriptor::Equality, [(0, vec![0, 1, 2])]);
        assert_eq!(patched.delta_size(0), Card::Finite(3));
        assert_eq!(patched.delta_size(1), Card::Finite(1));
        for a in 0..20 {
            assert_eq!(patched.delta_size(a), Card::Finite(patched.delta(a, 100).len() as u64));
        }
    }

    #[test]
    fn validate_examples() {
        assert!(validate_preorder(&PreorderDescriptor::NaturalDown, Window(20)).passes());
        assert!(validate_preorder(&PreorderDescriptor::pointed(3), Window(50)).passes());
        let bad = PreorderDescriptor::patch(PreorderDescriptor::Equality, [(0, vec![0, 2]), (2, vec![2, 5])]);
        let report = validate_preorder(&bad, Window(10));
        assert!(!report.passes());
        assert_eq!(report.transitivity, vec![(0, 2, 5)]);
        let irreflexive = PreorderDescriptor::patch(PreorderDescriptor::Equality, [(4, vec![3])]);
        assert_eq!(validate_preorder(&irreflexive, Window(10)).reflexivity, vec![4]);
    }

    #[test]
    fn membership_examples() {
        assert!(MonoidDescriptor::OrderDown
            .prefix_membership(&pm(&[(0, 0), (2, 1)]))
            .is_yes());
        assert_eq!(
            MonoidDescriptor::SymS.prefix_membership(&pm(&[(0, 1), (1, 1)])),
            Membership::No
        );
        let p = pm(&[(0, 0), (1, 1), (2, 2), (3, 3), (4, 0), (5, 2)]);
        assert!(MonoidDescriptor::TwoSidedExample.prefix_membership(&p).is_yes());
        let q = pm(&[(0, 0), (1, 1), (4, 2)]);
        assert_eq!(MonoidDescriptor::TwoSidedExample.prefix_membership(&q), Membership::No);
        assert!(MonoidDescriptor::FiniteImage { n: 2 }.prefix_membership(&q).is_yes());
    }

    #[test]
    fn two_sided_rule_matches_generator_words() {
        // generators restricted to the window {0..6}: maps Σ1 -> {0,1}, Σ2 -> {2,3}
        let w: Vec<u64> = (0..6).collect();
        let gens: Vec<Vec<u64>> = (0..64u32)
            .map(|bits| {
                w.iter()
                    .map(|&a| {
                        let bit = u64::from(bits >> a & 1);
                        if two_sided_sigma1(a) {
                            bit
                        } else {
                            2 + bit
                        }
                    })
                    .collect()
            })
            .collect();
        // every generator maps the window into {0..3} ⊆ window, so words of
        // length two can be composed on the window
        let mut words: BTreeSet<Vec<u64>> = gens.iter().cloned().collect();
        for f in &gens {
            for g in &gens {
                words.insert(f.iter().map(|&x| g[x as usize]).collect());
            }
        }
        words.insert(w.clone());
        let rule: BTreeSet<Vec<u64>> = MonoidDescriptor::TwoSidedExample
            .enumerate_prefix_maps(&w.iter().copied().collect(), 6)
            .unwrap()
            .into_iter()
            .map(|p| p.iter().map(|(_, v)| v).collect())
            .collect();
        assert_eq!(rule, words);
    }

    #[test]
    fn finite_image_rule_matches_generator_words() {
        let n = 2u64;
        let w = 5u64;
        let mut gens = Vec::new();
        for code in 0..(n + 1).pow(w as u32) {
            let mut c = code;
            let mut v = Vec::new();
            for _ in 0..w {
                v.push(c % (n + 1));
                c /= n + 1;
            }
            gens.push(v);
        }
        let mut words: BTreeSet<Vec<u64>> = gens.iter().cloned().collect();
        for f in &gens {
            for g in &gens {
                words.insert(f.iter().map(|&x| g[x as usize]).collect());
            }
        }
        words.insert((0..w).collect());
        let rule: BTreeSet<Vec<u64>> = MonoidDescriptor::FiniteImage { n }
            .enumerate_prefix_maps(&(0..w).collect(), w)
            .unwrap()
            .into_iter()
            .map(|p| p.iter().map(|(_, v)| v).collect())
            .collect();
        assert_eq!(rule, words);
    }

    #[test]
    fn enumeration_examples() {
        let dom = set(&[0, 1, 2]);
        assert_eq!(
            MonoidDescriptor::OrderDown
                .enumerate_prefix_maps(&dom, 3)
                .unwrap()
                .len(),
            6
        );
        let blocks = MonoidDescriptor::partition(PartitionFamily::two_blocks());
        assert_eq!(blocks.enumerate_prefix_maps(&set(&[0, 1]), 2).unwrap().len(), 4);
        let all = MonoidDescriptor::FullE.enumerate_prefix_maps(&set(&[0, 1]), 2).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[1], pm(&[(0, 0), (1, 1)]));
        let g = MonoidDescriptor::group(vec![PermutationSpec::transposition(0, 1)], 10);
        assert_eq!(g.enumerate_prefix_maps(&dom, 3), Err(DescriptorError::NotEnumerable));
        assert_eq!(
            MonoidDescriptor::FullE.enumerate_prefix_maps(&dom, 0),
            Err(DescriptorError::EmptyCodomain)
        );
    }

    #[test]
    fn stabilizer_examples() {
        let s = MonoidDescriptor::FullE.stabilizer(&set(&[0]));
        assert_eq!(s.prefix_membership(&pm(&[(0, 1)])), Membership::No);
        assert!(s.prefix_membership(&pm(&[(0, 0), (1, 5)])).is_yes());

        let gamma = 4;
        let pointed = MonoidDescriptor::preorder(PreorderDescriptor::pointed(gamma)).stabilizer(&set(&[gamma]));
        assert!(matches!(pointed, MonoidDescriptor::PreorderMonoid { .. }));
        assert!(pointed.prefix_membership(&pm(&[(0, 4), (1, 1), (4, 4)])).is_yes());
        assert_eq!(pointed.prefix_membership(&pm(&[(4, 3)])), Membership::No);
        assert_eq!(pointed.prefix_membership(&pm(&[(2, 3)])), Membership::No);

        let m2 = MonoidDescriptor::FiniteImage { n: 2 }.stabilizer(&set(&[5]));
        let prefixes = m2.enumerate_prefix_maps(&set(&[0, 1, 2, 3, 4, 5]), 6).unwrap();
        assert_eq!(prefixes, vec![PartialMap::identity_on(0..6)]);
    }

    #[test]
    fn forward_orbit_examples() {
        let o = MonoidDescriptor::OrderDown.forward_orbit(3, 10).unwrap();
        assert_eq!(o.members, set(&[0, 1, 2, 3]));
        assert_eq!(o.size, Some(Card::Finite(4)));
        let blocks = MonoidDescriptor::partition(PartitionFamily::two_blocks());
        let o = blocks.forward_orbit(4, 10).unwrap();
        assert_eq!((o.members, o.size), (set(&[4, 5]), Some(Card::Finite(2))));
        let g = MonoidDescriptor::group(vec![PermutationSpec::transposition(0, 1)], 10);
        assert_eq!(g.forward_orbit(0, 10).unwrap().members, set(&[0, 1]));
    }

    #[test]
    fn partition_families_locate() {
        let g = PartitionFamily::Growing;
        assert_eq!(g.block(0), Block::Interval { start: 0, len: 1 });
        assert_eq!(g.block(2), Block::Interval { start: 1, len: 2 });
        assert_eq!(g.block(5), Block::Interval { start: 3, len: 3 });
        assert_eq!(g.block(6), Block::Interval { start: 6, len: 4 });
        for x in 0..2000 {
            let (i, b) = g.locate(x);
            assert!(b.contains(x));
            assert_eq!(b.size(), Card::Finite(i + 1));
        }
        let sq = PartitionFamily::Squared {
            base: Box::new(PartitionFamily::Constant { size: 2 }),
        };
        assert_eq!(sq.block(5), Block::Interval { start: 4, len: 4 });
        let ex = PartitionFamily::Explicit {
            blocks: vec![vec![0], vec![2, 1]],
            tail: Box::new(PartitionFamily::two_blocks()),
        };
        ex.validate().unwrap();
        assert_eq!(ex.block(2), Block::Set(vec![1, 2]));
        assert_eq!(ex.block(4), Block::Interval { start: 3, len: 2 });
        let orbit = PartitionFamily::OrbitSizes {
            monoid: Box::new(MonoidDescriptor::preorder(PreorderDescriptor::pointed(0))),
        };
        orbit.validate().unwrap();
        assert_eq!(orbit.interval(0), Some((0, 1)));
        assert_eq!(orbit.interval(3), Some((5, 2)));
        let r = PartitionFamily::Residue { modulus: 3 };
        assert_eq!(r.block(7).members_below(20), vec![1, 4, 7, 10, 13, 16, 19]);
        assert!(PartitionFamily::Explicit {
            blocks: vec![vec![0], vec![2]],
            tail: Box::new(PartitionFamily::Growing)
        }
        .validate()
        .is_err());
    }

    #[test]
    fn group_closure_budget() {
        let g = MonoidDescriptor::group(vec![PermutationSpec::cycle(vec![0, 1, 2, 3, 4, 5, 6, 7])], 3);
        assert_eq!(g.prefix_membership(&pm(&[(0, 4)])), Membership::Unknown);
        let g = MonoidDescriptor::group(vec![PermutationSpec::PairSwap], 10);
        assert_eq!(g.forward_orbit(4, 10).unwrap().members, set(&[4, 5]));
        assert!(g.prefix_membership(&pm(&[(0, 1), (7, 6)])).is_yes());
        assert_eq!(g.prefix_membership(&pm(&[(0, 1), (7, 7)])), Membership::No);
        let elements = group_elements(&[PermutationSpec::cycle(vec![0, 1, 2])], 100).unwrap();
        assert_eq!(elements.len(), 3);
    }

    #[test]
    fn descriptor_json_round_trip() {
        let m = MonoidDescriptor::Stabilizer {
            monoid: Box::new(MonoidDescriptor::preorder(PreorderDescriptor::patch(
                PreorderDescriptor::pointed(0),
                [(3, vec![0, 3])],
            ))),
            fixed: set(&[1]),
        };
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"variant":"stabilizer""#));
        assert_eq!(serde_json::from_str::<MonoidDescriptor>(&json).unwrap(), m);
        let p: PartitionFamily = serde_json::from_str(r#"{"family":"constant","size":2}"#).unwrap();
        assert_eq!(p, PartitionFamily::two_blocks());
    }
}
