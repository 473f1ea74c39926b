//! Explicit sandwich witnesses `M₁ ⊆ g·M₂·h` (or `=`), their manifests and
//! deliberate corruptions for mutation testing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::descriptors::{DescriptorError, MonoidDescriptor, PartitionFamily, PreorderDescriptor};
use crate::maps::{Flag, Moiety, MoietyAllocator, MoietyError, PartialMap, SelfMap, Window};

mod tree;

pub use tree::{
    tree2_witness, tree2_witness_with_ladder, tree3_witness, tree_witness, tree_witness_with_handle, Ladder,
    LinearSequence, OracleMode, TreeHandle, TreeOracle, TreeStats, LADDER_LEVELS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Moiety(#[from] MoietyError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("child enumerator stalled at branch {branch:?} after {budget} candidates")]
    Stall { branch: Vec<u64>, budget: u64 },
    #[error("manifest records window {recorded}/codomain {recorded_codomain}, cannot verify window {requested}/codomain {requested_codomain}")]
    ManifestWindow {
        recorded: u64,
        recorded_codomain: u64,
        requested: u64,
        requested_codomain: u64,
    },
    #[error("unknown witness tag {0:?}")]
    UnknownTag(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `M₁ ⊆ g·M₂·h`.
    Contains,
    /// `M₁ = g·M₂·h`.
    Equals,
}

/// The outer side of a sandwich: a descriptor monoid, or an explicit finite
/// set of maps checked one by one.
#[derive(Clone, Debug)]
pub enum Outer {
    Monoid(MonoidDescriptor),
    Maps(Vec<SelfMap>),
}

/// Finite data sufficient to search for an inner realizer of any window-`n`
/// target: the inner domain and a bound on inner values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerSearch {
    pub domain: BTreeSet<u64>,
    pub codomain: u64,
}

pub type SearchBound = Arc<dyn Fn(u64, u64) -> Result<InnerSearch, WitnessError> + Send + Sync>;

#[derive(Clone)]
pub struct SandwichWitness {
    pub provenance: String,
    pub left: SelfMap,
    pub right: SelfMap,
    pub inner: MonoidDescriptor,
    pub outer: Outer,
    pub relation: Relation,
    pub params: serde_json::Value,
    search: SearchBound,
}

impl fmt::Debug for SandwichWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SandwichWitness")
            .field("provenance", &self.provenance)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("inner", &self.inner)
            .field("outer", &self.outer)
            .field("relation", &self.relation)
            .finish()
    }
}

/// Inner domain `{(x)g : x < n}`.
fn left_image(left: &SelfMap, n: u64) -> BTreeSet<u64> {
    (0..n).map(|x| left.apply(x)).collect()
}

impl SandwichWitness {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        provenance: impl Into<String>,
        left: SelfMap,
        right: SelfMap,
        inner: MonoidDescriptor,
        outer: Outer,
        relation: Relation,
        params: serde_json::Value,
        search: SearchBound,
    ) -> Self {
        SandwichWitness {
            provenance: provenance.into(),
            left,
            right,
            inner,
            outer,
            relation,
            params,
            search,
        }
    }

    /// Inner search data for targets on `{0, .., n-1}` with values below
    /// `codomain`.
    pub fn search_bound(&self, n: u64, codomain: u64) -> Result<InnerSearch, WitnessError> {
        (self.search)(n, codomain)
    }

    /// `(x)g m h`, if `m` is defined at `(x)g`.
    pub fn composite(&self, m: &PartialMap, x: u64) -> Option<u64> {
        m.get(self.left.apply(x)).map(|v| self.right.apply(v))
    }

    /// Records window evaluations so the witness can be replayed without
    /// its evaluators.
    pub fn manifest(&self, n: u64, codomain: u64) -> Result<WitnessManifest, WitnessError> {
        let search = self.search_bound(n, codomain)?;
        let outer = match &self.outer {
            Outer::Monoid(m) => OuterManifest::Monoid(m.clone()),
            Outer::Maps(ts) => OuterManifest::Maps(ts.iter().map(|t| t.window(Window(n))).collect()),
        };
        Ok(WitnessManifest {
            provenance: self.provenance.clone(),
            relation: self.relation,
            outer,
            inner: self.inner.clone(),
            params: self.params.clone(),
            window: n,
            codomain,
            search: search.clone(),
            window_evals: WindowEvals {
                left: self.left.window(Window(n)),
                right: self.right.window(Window(search.codomain)),
            },
        })
    }

    /// A copy of this witness with one side corrupted.
    pub fn mutated(&self, mutation: MapMutation) -> SandwichWitness {
        let mut w = self.clone();
        let side = match mutation {
            MapMutation::ShiftValues { side, .. } | MapMutation::OverrideOdd { side, .. } => side,
        };
        let target = match side {
            Side::Left => &mut w.left,
            Side::Right => &mut w.right,
        };
        let original = target.clone();
        *target = match mutation {
            MapMutation::ShiftValues { by, .. } => SelfMap::new(move |x| original.apply(x) + by),
            MapMutation::OverrideOdd { value, .. } => {
                SelfMap::new(move |x| if x % 2 == 1 { value } else { original.apply(x) })
            }
        };
        w.provenance = format!("{}+{}", w.provenance, mutation.label());
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Deliberate corruption of one witness map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapMutation {
    /// `x ↦ (x)φ + by`.
    ShiftValues { side: Side, by: u64 },
    /// Odd points are sent to `value`; even points are unchanged.
    OverrideOdd { side: Side, value: u64 },
}

impl MapMutation {
    fn label(&self) -> String {
        match self {
            MapMutation::ShiftValues { side, by } => format!("shift-{}-{by}", side_name(*side)),
            MapMutation::OverrideOdd { side, value } => format!("odd-{}-{value}", side_name(*side)),
        }
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

// ---------------------------------------------------------------------------
// Manifests
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum OuterManifest {
    Monoid(MonoidDescriptor),
    /// Window tables of the explicit outer maps.
    Maps(Vec<Vec<u64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowEvals {
    /// `(x)g` for `x < window`.
    pub left: Vec<u64>,
    /// `(y)h` for `y < search.codomain`.
    pub right: Vec<u64>,
}

/// Serializable record of a witness at one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessManifest {
    pub provenance: String,
    pub relation: Relation,
    pub outer: OuterManifest,
    pub inner: MonoidDescriptor,
    #[serde(default)]
    pub params: serde_json::Value,
    pub window: u64,
    pub codomain: u64,
    pub search: InnerSearch,
    pub window_evals: WindowEvals,
}

fn table_map(table: Vec<u64>) -> SelfMap {
    SelfMap::new(move |x| table.get(x as usize).copied().unwrap_or(0))
}

impl WitnessManifest {
    /// Rebuilds a witness whose maps are the recorded tables. Only windows
    /// and codomains up to the recorded ones can be verified.
    pub fn into_witness(self) -> SandwichWitness {
        let left = table_map(self.window_evals.left.clone());
        let right = table_map(self.window_evals.right.clone());
        let outer = match self.outer {
            OuterManifest::Monoid(m) => Outer::Monoid(m),
            OuterManifest::Maps(ts) => Outer::Maps(ts.into_iter().map(table_map).collect()),
        };
        let (window, codomain, recorded) = (self.window, self.codomain, self.search.clone());
        let lefts = self.window_evals.left;
        let search: SearchBound = Arc::new(move |n, c| {
            if n > window || c > codomain {
                return Err(WitnessError::ManifestWindow {
                    recorded: window,
                    recorded_codomain: codomain,
                    requested: n,
                    requested_codomain: c,
                });
            }
            Ok(InnerSearch {
                domain: lefts[..n as usize].iter().copied().collect(),
                codomain: recorded.codomain,
            })
        });
        SandwichWitness {
            provenance: self.provenance,
            left,
            right,
            inner: self.inner,
            outer,
            relation: self.relation,
            params: self.params,
            search,
        }
    }

    /// Applies a mutation to the recorded tables.
    pub fn mutate(&mut self, mutation: MapMutation) {
        let side = match mutation {
            MapMutation::ShiftValues { side, .. } | MapMutation::OverrideOdd { side, .. } => side,
        };
        let table = self.side_mut(side);
        let f = |i: usize, v: u64| match mutation {
            MapMutation::ShiftValues { by, .. } => v + by,
            MapMutation::OverrideOdd { value, .. } if i % 2 == 1 => value,
            MapMutation::OverrideOdd { .. } => v,
        };
        for (i, v) in table.iter_mut().enumerate() {
            *v = f(i, *v);
        }
        self.provenance = format!("{}+{}", self.provenance, mutation.label());
    }

    fn side_mut(&mut self, side: Side) -> &mut Vec<u64> {
        match side {
            Side::Left => &mut self.window_evals.left,
            Side::Right => &mut self.window_evals.right,
        }
    }
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// `E = g·U·h` through a moiety `Σ` that is full for `U`: `g` enumerates
/// `Σ`, `h` sends `Σ` back by position (and everything else to 0).
pub fn moiety_sandwich(u: MonoidDescriptor, sigma: Moiety) -> SandwichWitness {
    let left = SelfMap::new(move |x| sigma.embed(x)).with_flags([Flag::Injective]);
    let right = SelfMap::new(move |y| sigma.position(y).unwrap_or(0));
    let search: SearchBound = Arc::new(move |n, c| {
        let domain = left_image(&SelfMap::new(move |x| sigma.embed(x)), n);
        let top = domain.iter().copied().max().unwrap_or(0).max(sigma.embed(c.max(1) - 1));
        Ok(InnerSearch {
            domain,
            codomain: top + 1,
        })
    });
    SandwichWitness::new(
        "moiety",
        left,
        right,
        u,
        Outer::Monoid(MonoidDescriptor::FullE),
        Relation::Equals,
        json!({ "allocator": format!("{:?}", sigma.allocator), "stream": sigma.stream }),
        search,
    )
}

/// `E = g₁·S·g₂` with `g₁(α) = 2α+1` and `g₂` sending each dyadic stream
/// `Σ_α` to `α`.
pub fn perm_sandwich() -> SandwichWitness {
    let left = SelfMap::new(|x| 2 * x + 1).with_flags([Flag::Injective]);
    let right = SelfMap::new(|y| MoietyAllocator::Dyadic.owner(y).0);
    let search: SearchBound = Arc::new(|n, c| {
        let c = c.max(1);
        if c > 62 {
            return Err(WitnessError::Precondition(format!(
                "codomain {c} needs dyadic streams beyond 2^62"
            )));
        }
        // n distinct members of the stream c-1 all lie below 2^(c-1)(2n-1)
        let bound = (1u64 << (c - 1))
            .checked_mul(2 * n.max(1) - 1)
            .ok_or_else(|| WitnessError::Precondition("search bound overflows".into()))?;
        Ok(InnerSearch {
            domain: (0..n).map(|x| 2 * x + 1).collect(),
            codomain: bound,
        })
    });
    SandwichWitness::new(
        "perm-map",
        left,
        right,
        MonoidDescriptor::SymS,
        Outer::Monoid(MonoidDescriptor::FullE),
        Relation::Equals,
        json!({ "left": "2a+1", "right": "dyadic owner stream" }),
        search,
    )
}

/// `E_(A) ⊆ g₁·S_(B)·g₂` where `|B_i| = n_i²`, `g₁: a(i,j) ↦ b(i,j,0)` and
/// `g₂: b(i,j,k) ↦ a(i,k)`.
pub fn partition_square_sandwich(family: PartitionFamily) -> Result<SandwichWitness, WitnessError> {
    if !family.is_interval() {
        return Err(WitnessError::Precondition(
            "block sizes must come from a finite interval family; infinite blocks go through the moiety sandwich"
                .into(),
        ));
    }
    family.validate()?;
    let squares = PartitionFamily::Squared {
        base: Box::new(family.clone()),
    };
    let (fa, sq) = (family.clone(), squares.clone());
    let left = SelfMap::new(move |x| {
        let (i, block) = fa.locate(x);
        let start = block_start(&block);
        let n_i = fa.interval_size(i).unwrap_or(1);
        let (b_start, _) = sq.interval(i).unwrap_or((0, 0));
        b_start + (x - start) * n_i
    })
    .with_flags([Flag::Injective]);
    let (fa, sq) = (family.clone(), squares.clone());
    let right = SelfMap::new(move |y| {
        let (i, block) = sq.locate(y);
        let n_i = fa.interval_size(i).unwrap_or(1).max(1);
        let k = (y - block_start(&block)) % n_i;
        fa.interval(i).map(|(s, _)| s + k).unwrap_or(0)
    });
    let (fa, sq, l) = (family.clone(), squares.clone(), left.clone());
    let search: SearchBound = Arc::new(move |n, _c| {
        let top = fa.locate(n.max(1) - 1).0;
        let (s, len) = sq.interval(top).unwrap_or((0, 0));
        Ok(InnerSearch {
            domain: left_image(&l, n),
            codomain: s + len,
        })
    });
    Ok(SandwichWitness::new(
        "square-blocks",
        left,
        right,
        MonoidDescriptor::PartitionSym { partition: squares },
        Outer::Monoid(MonoidDescriptor::partition(family.clone())),
        Relation::Contains,
        json!({ "family": family }),
        search,
    ))
}

fn block_start(b: &crate::descriptors::Block) -> u64 {
    match b {
        crate::descriptors::Block::Interval { start, .. } => *start,
        crate::descriptors::Block::Set(m) => m[0],
        crate::descriptors::Block::Residue { residue, .. } => *residue,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderDirection {
    /// `E≤ ⊆ g·E_(A)·h`.
    OrderIntoPartition,
    /// `E_(A) ⊆ g·E≤`.
    PartitionIntoOrder,
}

/// Sandwiches between `E≤` and the partition monoid of consecutive blocks of
/// sizes `1, 2, 3, ...`.
pub fn partition_order_sandwich(direction: OrderDirection) -> SandwichWitness {
    let blocks = PartitionFamily::Growing;
    match direction {
        OrderDirection::OrderIntoPartition => {
            let left = SelfMap::new(|i| i * (i + 1) / 2).with_flags([Flag::Injective]);
            let b = blocks.clone();
            let right = SelfMap::new(move |y| y - block_start(&b.block(y)));
            let search: SearchBound = Arc::new(|n, _| {
                Ok(InnerSearch {
                    domain: (0..n).map(|i| i * (i + 1) / 2).collect(),
                    codomain: (n * (n + 1) / 2).max(1),
                })
            });
            SandwichWitness::new(
                "order-into-partition",
                left,
                right,
                MonoidDescriptor::partition(blocks),
                Outer::Monoid(MonoidDescriptor::OrderDown),
                Relation::Contains,
                json!({ "blocks": "growing" }),
                search,
            )
        }
        OrderDirection::PartitionIntoOrder => {
            let b = blocks.clone();
            let left = SelfMap::new(move |a| a + b.locate(a).0 + 1).with_flags([Flag::Injective]);
            let l = left.clone();
            let search: SearchBound = Arc::new(move |n, c| {
                Ok(InnerSearch {
                    domain: left_image(&l, n),
                    codomain: c.max(1),
                })
            });
            SandwichWitness::new(
                "partition-into-order",
                left,
                SelfMap::identity(),
                MonoidDescriptor::OrderDown,
                Outer::Monoid(MonoidDescriptor::partition(blocks)),
                Relation::Contains,
                json!({ "blocks": "growing" }),
                search,
            )
        }
    }
}

/// `M ⊆ g·E_(A)·h` where `|A_α| = |(α)M|`: `g(α)` is the first point of
/// `A_α` and `h` sends `A_α` onto `(α)M` in increasing order.
pub fn partition_embed(m: MonoidDescriptor) -> Result<SandwichWitness, WitnessError> {
    let family = PartitionFamily::OrbitSizes {
        monoid: Box::new(m.clone()),
    };
    if crate::classifier::monoid_profile(&m).infinite_often {
        return Err(WitnessError::Descriptor(DescriptorError::InfiniteOrbit(0)));
    }
    family.validate()?;
    let fa = family.clone();
    let left = SelfMap::new(move |a| fa.interval(a).map(|(s, _)| s).unwrap_or(0)).with_flags([Flag::Injective]);
    let (fa, mm) = (family.clone(), m.clone());
    let right = SelfMap::new(move |y| {
        let (a, block) = fa.locate(y);
        let k = (y - block_start(&block)) as usize;
        mm.orbit_members(a).ok().and_then(|o| o.get(k).copied()).unwrap_or(0)
    });
    let fa = family.clone();
    let search: SearchBound = Arc::new(move |n, _| {
        let mut domain = BTreeSet::new();
        let mut end = 1;
        for a in 0..n {
            let (s, len) = fa
                .interval(a)
                .ok_or_else(|| WitnessError::Precondition(format!("orbit size at {a} unknown")))?;
            domain.insert(s);
            end = s + len;
        }
        Ok(InnerSearch { domain, codomain: end })
    });
    Ok(SandwichWitness::new(
        "partition-embed",
        left,
        right,
        MonoidDescriptor::partition(family),
        Outer::Monoid(m.clone()),
        Relation::Contains,
        json!({ "monoid": m }),
        search,
    ))
}

/// `E(ρ_γ) ⊆ g₁·E_(A)·g₂` for the blocks `{2i, 2i+1}`, with `g₁(i) = 2i`,
/// `g₂(2i) = i` and `g₂(2i+1) = γ`.
pub fn rho_gamma_sandwich(gamma: u64) -> SandwichWitness {
    let left = SelfMap::new(|i| 2 * i).with_flags([Flag::Injective]);
    let right = SelfMap::new(move |y| if y % 2 == 0 { y / 2 } else { gamma });
    let search: SearchBound = Arc::new(|n, _| {
        Ok(InnerSearch {
            domain: (0..n).map(|i| 2 * i).collect(),
            codomain: (2 * n).max(1),
        })
    });
    SandwichWitness::new(
        "pointed-blocks",
        left,
        right,
        MonoidDescriptor::partition(PartitionFamily::two_blocks()),
        Outer::Monoid(MonoidDescriptor::preorder(PreorderDescriptor::pointed(gamma))),
        Relation::Contains,
        json!({ "gamma": gamma }),
        search,
    )
}

/// `(α)T` in increasing order.
fn value_set(t: &[SelfMap], a: u64) -> Vec<u64> {
    t.iter()
        .map(|f| f.apply(a))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `T ⊆ g·E≤·h` for a finite `T` with `|(α)T| ≤ λ`: `g(α) = (α+1)λ` and `h`
/// sends the block `{αλ, .., αλ+λ-1}` onto `(α)T` in increasing order.
pub fn dominated_embedding(
    t: Vec<SelfMap>,
    lambda: u64,
    check_window: Window,
) -> Result<SandwichWitness, WitnessError> {
    if lambda == 0 {
        return Err(WitnessError::Precondition("lambda must be at least 1".into()));
    }
    for a in check_window.points() {
        let k = value_set(&t, a).len() as u64;
        if k > lambda {
            return Err(WitnessError::Precondition(format!(
                "|({a})T| = {k} exceeds lambda = {lambda}"
            )));
        }
    }
    let left = SelfMap::new(move |a| (a + 1) * lambda).with_flags([Flag::Injective]);
    let ts = t.clone();
    let right = SelfMap::new(move |y| {
        let (a, j) = (y / lambda, (y % lambda) as usize);
        let vals = value_set(&ts, a);
        match vals.get(j).or(vals.last()) {
            Some(&v) => v,
            None => y,
        }
    });
    let search: SearchBound = Arc::new(move |n, _| {
        Ok(InnerSearch {
            domain: (0..n).map(|a| (a + 1) * lambda).collect(),
            codomain: (n * lambda).max(1),
        })
    });
    Ok(SandwichWitness::new(
        "dominated",
        left,
        right,
        MonoidDescriptor::OrderDown,
        Outer::Maps(t),
        Relation::Contains,
        json!({ "lambda": lambda, "maps": check_window.0 }),
        search,
    ))
}

// ---------------------------------------------------------------------------
// Pointed factorizations and conjugation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointedFactor {
    pub alpha: u64,
    pub map: PartialMap,
}

/// `h = f_g · g_0 · g_1 ⋯` with `f_g` acting as `h` on `Γ` and each `g_i`
/// sending its fibre outside `Γ` to `α_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type3bFactors {
    pub f_g: PartialMap,
    pub pointed: Vec<PointedFactor>,
}

impl Type3bFactors {
    /// Composes the factors (right action) at `x`.
    pub fn apply(&self, x: u64) -> Option<u64> {
        let mut v = self.f_g.get(x)?;
        for g in &self.pointed {
            v = g.map.get(v)?;
        }
        Some(v)
    }
}

/// Splits a prefix whose values lie in `Γ ∪ {α}` into a finite-support
/// factor followed by one pointed factor per target in `Γ`.
pub fn factor_type3b(h: &PartialMap, gamma: &BTreeSet<u64>) -> Result<Type3bFactors, WitnessError> {
    for (a, v) in h.iter() {
        if v != a && !gamma.contains(&v) {
            return Err(WitnessError::Precondition(format!(
                "({a})h = {v} lies outside the core and is not {a}"
            )));
        }
        if gamma.contains(&a) && !gamma.contains(&v) {
            return Err(WitnessError::Precondition(format!("core point {a} leaves the core")));
        }
    }
    let domain: BTreeSet<u64> = h.domain().chain(gamma.iter().copied()).collect();
    let f_g = PartialMap::from_pairs(domain.iter().map(|&x| {
        if gamma.contains(&x) {
            (x, h.get(x).unwrap_or(x))
        } else {
            (x, x)
        }
    }));
    let mut fibres: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for (a, v) in h.iter() {
        if !gamma.contains(&a) && v != a {
            fibres.entry(v).or_default().insert(a);
        }
    }
    let pointed = fibres
        .into_iter()
        .map(|(alpha, fibre)| PointedFactor {
            alpha,
            map: PartialMap::from_pairs(domain.iter().map(|&x| (x, if fibre.contains(&x) { alpha } else { x }))),
        })
        .collect();
    Ok(Type3bFactors { f_g, pointed })
}

/// The transposition `(α β)`, which conjugates `E(ρ_β)` onto `E(ρ_α)`.
pub fn conjugate_pointed(alpha: u64, beta: u64) -> (SelfMap, Option<String>) {
    if alpha == beta {
        return (
            SelfMap::identity(),
            Some("alpha equals beta; the identity suffices".into()),
        );
    }
    (SelfMap::transposition(alpha, beta), None)
}

/// Looks up a construction by tag with default parameters.
pub fn by_tag(tag: &str, gamma: u64) -> Result<SandwichWitness, WitnessError> {
    Ok(match tag {
        "moiety" => moiety_sandwich(MonoidDescriptor::FullE, MoietyAllocator::finite(2)?.stream(0)?),
        "perm-map" => perm_sandwich(),
        "square-blocks" => partition_square_sandwich(PartitionFamily::two_blocks())?,
        "order-into-partition" => partition_order_sandwich(OrderDirection::OrderIntoPartition),
        "partition-into-order" => partition_order_sandwich(OrderDirection::PartitionIntoOrder),
        "partition-embed" => partition_embed(MonoidDescriptor::preorder(PreorderDescriptor::pointed(gamma)))?,
        "pointed-blocks" => rho_gamma_sandwich(gamma),
        "dominated" => dominated_embedding(vec![SelfMap::identity(), SelfMap::constant(0)], 2, Window(64))?,
        "tree" => {
            let m = MonoidDescriptor::preorder(PreorderDescriptor::FullOnResidue { modulus: 2, residue: 0 });
            tree_witness(TreeOracle::from_descriptor(&m, OracleMode::Infinite)?, m)?
        }
        "tree2" => {
            let m = MonoidDescriptor::partition(PartitionFamily::Growing);
            tree2_witness(TreeOracle::from_descriptor(&m, OracleMode::AtLeast)?, m)?
        }
        "tree3" => tree3_witness(
            LinearSequence::new(2, 0),
            LinearSequence::new(2, 1),
            LinearSequence::new(2, 0),
            MonoidDescriptor::partition(PartitionFamily::two_blocks()),
        )?,
        other => return Err(WitnessError::UnknownTag(other.to_string())),
    })
}

pub const TAGS: [&str; 11] = [
    "moiety",
    "perm-map",
    "square-blocks",
    "order-into-partition",
    "partition-into-order",
    "partition-embed",
    "pointed-blocks",
    "dominated",
    "tree",
    "tree2",
    "tree3",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn perm_left_and_bound() {
        let w = perm_sandwich();
        assert_eq!(w.left.window(Window(4)), vec![1, 3, 5, 7]);
        assert_eq!(w.search_bound(5, 5).unwrap().codomain, 144);
        assert_eq!(w.right.apply(11), 2);
    }

    #[test]
    fn square_blocks_maps() {
        let w = partition_square_sandwich(PartitionFamily::two_blocks()).unwrap();
        // a(1,1) = 3 ↦ b(1,1,0) = 4 + 2 = 6
        assert_eq!(w.left.window(Window(4)), vec![0, 2, 4, 6]);
        // b(1,1,1) = 7 ↦ a(1,1) = 3
        assert_eq!(w.right.window(Window(8)), vec![0, 1, 0, 1, 2, 3, 2, 3]);
        assert_eq!(w.search_bound(4, 4).unwrap().codomain, 8);
        assert!(partition_square_sandwich(PartitionFamily::Residue { modulus: 2 }).is_err());
    }

    #[test]
    fn order_sandwich_maps() {
        let f = partition_order_sandwich(OrderDirection::OrderIntoPartition);
        assert_eq!(f.left.window(Window(4)), vec![0, 1, 3, 6]);
        assert_eq!(f.right.window(Window(6)), vec![0, 0, 1, 0, 1, 2]);
        let r = partition_order_sandwich(OrderDirection::PartitionIntoOrder);
        let g = r.left.window(Window(6));
        for (a, &v) in g.iter().enumerate() {
            let block = PartitionFamily::Growing.block(a as u64).members().unwrap();
            assert!(block.iter().all(|&b| b < v));
        }
    }

    #[test]
    fn partition_embed_examples() {
        let w = partition_embed(MonoidDescriptor::preorder(PreorderDescriptor::pointed(0))).unwrap();
        assert_eq!(w.left.window(Window(4)), vec![0, 1, 3, 5]);
        assert_eq!(w.right.window(Window(5)), vec![0, 0, 1, 0, 2]);
        let w = partition_embed(MonoidDescriptor::OrderDown).unwrap();
        assert_eq!(w.left.window(Window(4)), vec![0, 1, 3, 6]);
        assert!(partition_embed(MonoidDescriptor::FullE).is_err());
    }

    #[test]
    fn rho_gamma_direct_composition() {
        let w = rho_gamma_sandwich(0);
        // f sends 1 ↦ 0 and fixes 0, 2: the inner member sends 2 ↦ 3
        let m = PartialMap::from_pairs([(0, 0), (2, 3), (4, 4)]);
        let got: Vec<u64> = (0..3).map(|x| w.composite(&m, x).unwrap()).collect();
        assert_eq!(got, vec![0, 0, 2]);
    }

    #[test]
    fn dominated_examples() {
        let w = dominated_embedding(vec![SelfMap::identity(), SelfMap::constant(0)], 2, Window(10)).unwrap();
        assert_eq!(w.right.window(Window(6)), vec![0, 0, 0, 1, 0, 2]);
        let too_many = vec![SelfMap::identity(), SelfMap::constant(0), SelfMap::constant(1)];
        assert!(dominated_embedding(too_many, 2, Window(10)).is_err());
        assert!(dominated_embedding(vec![], 1, Window(5)).is_ok());
    }

    #[test]
    fn factor_examples() {
        let id = PartialMap::identity_on(0..8);
        let f = factor_type3b(&id, &set(&[0])).unwrap();
        assert!(f.pointed.is_empty());
        assert!(f.f_g.is_identity());

        let h = PartialMap::from_pairs((0..8).map(|x| (x, if x == 3 || x == 5 { 0 } else { x })));
        let f = factor_type3b(&h, &set(&[0])).unwrap();
        assert_eq!(f.pointed.len(), 1);
        assert_eq!(f.pointed[0].alpha, 0);

        let h = PartialMap::from_pairs((0..8).map(|x| {
            let v = match x {
                0 => 1,
                1 => 0,
                4 => 0,
                6 => 1,
                _ => x,
            };
            (x, v)
        }));
        let f = factor_type3b(&h, &set(&[0, 1])).unwrap();
        assert_eq!(f.f_g.get(0), Some(1));
        assert_eq!(f.f_g.get(1), Some(0));
        assert_eq!(f.pointed.len(), 2);
        for x in 0..8 {
            assert_eq!(f.apply(x), h.get(x));
        }
        let bad = PartialMap::from_pairs([(3, 4)]);
        assert!(factor_type3b(&bad, &set(&[0])).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let (g, note) = conjugate_pointed(0, 1);
        assert!(note.is_none());
        let all_to_one = SelfMap::constant(1);
        let conj = crate::maps::compose(&crate::maps::compose(&g, &all_to_one), &g);
        assert_eq!(conj.window(Window(5)), vec![0; 5]);
        assert!(conjugate_pointed(3, 3).1.is_some());
    }

    #[test]
    fn manifest_round_trip() {
        let w = perm_sandwich();
        let m = w.manifest(3, 3).unwrap();
        assert_eq!(m.window_evals.left, vec![1, 3, 5]);
        let json = serde_json::to_string(&m).unwrap();
        let back: WitnessManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let rebuilt = back.into_witness();
        assert_eq!(rebuilt.search_bound(3, 3).unwrap(), w.search_bound(3, 3).unwrap());
        assert!(rebuilt.search_bound(4, 3).is_err());
    }

    #[test]
    fn all_tags_build() {
        for tag in TAGS {
            by_tag(tag, 0).unwrap();
        }
        assert!(matches!(by_tag("nope", 0), Err(WitnessError::UnknownTag(_))));
    }
}
