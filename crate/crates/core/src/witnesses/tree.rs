//! Branching-tree witnesses: `E = f·M·h`, `E≤ ⊆ f·M·h` and `E_(A) ⊆ f·M·h`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{InnerSearch, Outer, Relation, SandwichWitness, SearchBound, WitnessError};
use crate::descriptors::{Card, MonoidDescriptor, PartitionFamily};
use crate::maps::{Flag, PartialMap, SelfMap};

type Alphas = Arc<dyn Fn(u64) -> u64 + Send + Sync>;
/// Least admissible next component `>= from` below a branch, if any.
type NextChild = Arc<dyn Fn(&[u64], u64) -> Option<u64> + Send + Sync>;
type Realizer = Arc<dyn Fn(&[u64]) -> Option<PartialMap> + Send + Sync>;
type Schedule = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// Every branch has infinitely many children.
    Infinite,
    /// A branch of length `i` has at least `N_i` children.
    AtLeast,
}

/// `α_i`, the admissible branch sets `D_i` (through a child enumerator),
/// a realizer certifying branches, and the lower bounds `N_i`.
#[derive(Clone)]
pub struct TreeOracle {
    pub alphas: Alphas,
    pub next_child: NextChild,
    pub realizer: Realizer,
    pub n_schedule: Option<Schedule>,
    pub mode: OracleMode,
    /// Candidates scanned before a child enumerator counts as stalled.
    pub stall_budget: u64,
}

impl std::fmt::Debug for TreeOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TreeOracle")
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

const DEFAULT_STALL: u64 = 1 << 16;

fn realize_pointwise(m: MonoidDescriptor, alphas: Alphas) -> Realizer {
    Arc::new(move |branch: &[u64]| {
        let p = PartialMap::from_pairs(branch.iter().enumerate().map(|(i, &b)| (alphas(i as u64), b)));
        m.prefix_membership(&p).is_yes().then_some(p)
    })
}

impl TreeOracle {
    /// Natural oracles for descriptor monoids:
    /// - `Infinite`: permutations, or a preorder monoid with infinitely many
    ///   infinite up-sets (`α_i` enumerates those points, children range
    ///   over the up-set minus the branch).
    /// - `AtLeast`: a partition monoid of consecutive finite blocks of
    ///   unbounded size (`α_i` is the first point of block `i`, children are
    ///   the block), or a preorder monoid with finite unbounded up-sets
    ///   (`α_i` has an up-set of size at least `2i+1`, `N_i = i+1`).
    pub fn from_descriptor(m: &MonoidDescriptor, mode: OracleMode) -> Result<TreeOracle, WitnessError> {
        let pre = |s: &str| Err(WitnessError::Precondition(s.to_string()));
        match mode {
            OracleMode::Infinite => {
                if matches!(m, MonoidDescriptor::SymS) {
                    let alphas: Alphas = Arc::new(|i| i);
                    return Ok(TreeOracle {
                        realizer: realize_pointwise(m.clone(), alphas.clone()),
                        alphas,
                        next_child: Arc::new(|branch, from| (from..).find(|v| !branch.contains(v))),
                        n_schedule: None,
                        mode,
                        stall_budget: DEFAULT_STALL,
                    });
                }
                let Some(rho) = m.as_preorder() else {
                    return pre("infinite-branching oracles need permutations or a preorder monoid");
                };
                if !crate::classifier::preorder_profile(&rho).infinite_often {
                    return pre("only finitely many up-sets are infinite");
                }
                let points: Arc<OnceLock<Vec<u64>>> = Arc::new(OnceLock::new());
                let r = rho.clone();
                let alphas: Alphas = Arc::new(move |i| {
                    let pts = points.get_or_init(|| {
                        (0..)
                            .filter(|&a| r.delta_size(a) == Card::Infinite)
                            .take(4096)
                            .collect()
                    });
                    pts.get(i as usize).copied().unwrap_or(u64::MAX)
                });
                let (a, r) = (alphas.clone(), rho.clone());
                let next_child: NextChild = Arc::new(move |branch, from| {
                    let alpha = a(branch.len() as u64);
                    (from..from.saturating_add(DEFAULT_STALL)).find(|&v| r.relates(alpha, v) && !branch.contains(&v))
                });
                Ok(TreeOracle {
                    realizer: realize_pointwise(m.clone(), alphas.clone()),
                    alphas,
                    next_child,
                    n_schedule: None,
                    mode,
                    stall_budget: DEFAULT_STALL,
                })
            }
            OracleMode::AtLeast => {
                if let MonoidDescriptor::PartitionMonoid { partition } = m {
                    if partition.is_interval() {
                        let p = partition.clone();
                        if !crate::classifier::partition_profile(&p).unbounded {
                            return pre("block sizes are bounded");
                        }
                        let alphas: Alphas = {
                            let p = p.clone();
                            Arc::new(move |i| p.interval(i).map(|(s, _)| s).unwrap_or(u64::MAX))
                        };
                        let next_child: NextChild = {
                            let p = p.clone();
                            Arc::new(move |branch, from| {
                                let (s, len) = p.interval(branch.len() as u64)?;
                                let v = from.max(s);
                                (v < s + len).then_some(v)
                            })
                        };
                        let n_schedule: Schedule = Arc::new(move |i| p.interval_size(i).unwrap_or(0));
                        return Ok(TreeOracle {
                            realizer: realize_pointwise(m.clone(), alphas.clone()),
                            alphas,
                            next_child,
                            n_schedule: Some(n_schedule),
                            mode,
                            stall_budget: DEFAULT_STALL,
                        });
                    }
                }
                let Some(rho) = m.as_preorder() else {
                    return pre("at-least oracles need a preorder or partition monoid");
                };
                let profile = crate::classifier::preorder_profile(&rho);
                if profile.infinite_often || !profile.unbounded {
                    return pre("up-set sizes must be cofinitely finite and unbounded");
                }
                let points: Arc<OnceLock<Vec<u64>>> = Arc::new(OnceLock::new());
                let r = rho.clone();
                let alphas: Alphas = Arc::new(move |i| {
                    let pts = points.get_or_init(|| {
                        let mut out: Vec<u64> = Vec::new();
                        let mut a = 0;
                        while out.len() < 1024 && a < 1 << 20 {
                            let need = 2 * out.len() as u64 + 1;
                            if matches!(r.delta_size(a), Card::Finite(s) if s >= need) {
                                out.push(a);
                            }
                            a += 1;
                        }
                        out
                    });
                    pts.get(i as usize).copied().unwrap_or(u64::MAX)
                });
                let (a, r) = (alphas.clone(), rho.clone());
                let next_child: NextChild = Arc::new(move |branch, from| {
                    let alpha = a(branch.len() as u64);
                    r.delta_iter(alpha).find(|&v| v >= from && !branch.contains(&v))
                });
                Ok(TreeOracle {
                    realizer: realize_pointwise(m.clone(), alphas.clone()),
                    alphas,
                    next_child,
                    n_schedule: Some(Arc::new(|i| i + 1)),
                    mode,
                    stall_budget: DEFAULT_STALL,
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Disjoint infinite sets by dovetailing
// ---------------------------------------------------------------------------

/// Round-robin allocation of disjoint sets `Λ(branch) ⊆ Γ(branch)`. Stage `s`
/// gives one more element to each of the first `s+1` registered branches;
/// every allocated value exceeds all earlier ones, and each allocation
/// registers the extended branch.
struct Allocator {
    next_child: NextChild,
    stall_budget: u64,
    nodes: Vec<Vec<u64>>,
    lambda: Vec<Vec<u64>>,
    owner: BTreeMap<u64, (usize, usize)>,
    index: BTreeMap<Vec<u64>, usize>,
    last: Option<u64>,
    stage: usize,
    cursor: usize,
}

impl Allocator {
    fn new(next_child: NextChild, stall_budget: u64) -> Self {
        Allocator {
            next_child,
            stall_budget,
            nodes: vec![vec![]],
            lambda: vec![vec![]],
            owner: BTreeMap::new(),
            index: BTreeMap::from([(vec![], 0)]),
            last: None,
            stage: 0,
            cursor: 0,
        }
    }

    fn step(&mut self) -> Result<(), WitnessError> {
        if self.cursor > self.stage || self.cursor >= self.nodes.len() {
            self.stage += 1;
            self.cursor = 0;
        }
        let k = self.cursor;
        self.cursor += 1;
        let from = self.last.map_or(0, |l| l + 1);
        let branch = self.nodes[k].clone();
        let v = (self.next_child)(&branch, from)
            .filter(|&v| v - from <= self.stall_budget)
            .ok_or(WitnessError::Stall {
                branch: branch.clone(),
                budget: self.stall_budget,
            })?;
        self.owner.insert(v, (k, self.lambda[k].len()));
        self.lambda[k].push(v);
        let mut child = branch;
        child.push(v);
        self.index.insert(child.clone(), self.nodes.len());
        self.nodes.push(child);
        self.lambda.push(vec![]);
        self.last = Some(v);
        Ok(())
    }

    fn materialize_past(&mut self, v: u64, max_steps: u64) -> Result<(), WitnessError> {
        let mut steps = 0;
        while self.last.is_none_or(|l| l < v) {
            self.step()?;
            steps += 1;
            if steps > max_steps {
                return Err(WitnessError::Stall {
                    branch: vec![],
                    budget: max_steps,
                });
            }
        }
        Ok(())
    }

    fn position(&self, v: u64) -> u64 {
        self.owner.get(&v).map_or(0, |&(_, p)| p as u64)
    }

    /// Allocates until every branch reachable through the first `c`
    /// elements of the `Λ`-sets, up to length `n-1`, owns `c` elements.
    fn cover(&mut self, n: u64, c: u64, max_steps: u64) -> Result<u64, WitnessError> {
        let mut frontier = vec![vec![]];
        let mut top = 0;
        let mut steps = 0;
        for depth in 0..n {
            let mut next = Vec::new();
            for branch in frontier {
                loop {
                    let k = self.index.get(&branch).copied();
                    if let Some(k) = k {
                        if self.lambda[k].len() as u64 >= c {
                            let taken = &self.lambda[k][..c as usize];
                            top = top.max(*taken.last().unwrap_or(&0));
                            if depth + 1 < n {
                                next.extend(taken.iter().map(|&v| {
                                    let mut b = branch.clone();
                                    b.push(v);
                                    b
                                }));
                            }
                            break;
                        }
                    }
                    self.step()?;
                    steps += 1;
                    if steps > max_steps {
                        return Err(WitnessError::Stall {
                            branch,
                            budget: max_steps,
                        });
                    }
                }
            }
            frontier = next;
        }
        Ok(top)
    }
}

/// Allocation statistics of a tree witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub branches: usize,
    pub allocations: usize,
    /// No value lies in two `Λ`-sets.
    pub disjoint: bool,
    /// Every allocated value is an admissible child of its branch.
    pub admissible: bool,
}

#[derive(Clone)]
pub struct TreeHandle(Arc<Mutex<Allocator>>);

impl TreeHandle {
    pub fn stats(&self) -> TreeStats {
        let a = self.0.lock().expect("allocator lock");
        let all: Vec<u64> = a.lambda.iter().flatten().copied().collect();
        let distinct: BTreeSet<u64> = all.iter().copied().collect();
        let admissible = a
            .nodes
            .iter()
            .zip(&a.lambda)
            .all(|(branch, vals)| vals.iter().all(|&v| (a.next_child)(branch, v) == Some(v)));
        TreeStats {
            branches: a.nodes.len(),
            allocations: all.len(),
            disjoint: distinct.len() == all.len(),
            admissible,
        }
    }
}

const MAX_ALLOCATIONS: u64 = 1 << 22;

/// `E = f·M·h` with `f(i) = α_i` and `h` sending each `Λ(branch)` onto ω by
/// position.
pub fn tree_witness(oracle: TreeOracle, m: MonoidDescriptor) -> Result<SandwichWitness, WitnessError> {
    tree_witness_with_handle(oracle, m).map(|(w, _)| w)
}

pub fn tree_witness_with_handle(
    oracle: TreeOracle,
    m: MonoidDescriptor,
) -> Result<(SandwichWitness, TreeHandle), WitnessError> {
    if oracle.mode != OracleMode::Infinite {
        return Err(WitnessError::Precondition(
            "tree witnesses need infinitely many children per branch".into(),
        ));
    }
    let alloc = Arc::new(Mutex::new(Allocator::new(
        oracle.next_child.clone(),
        oracle.stall_budget,
    )));
    // a stalling enumerator surfaces at construction time
    alloc.lock().expect("allocator lock").cover(2, 2, MAX_ALLOCATIONS)?;
    let alphas = oracle.alphas.clone();
    let left = SelfMap::new(move |i| alphas(i)).with_flags([Flag::Injective]);
    let a = alloc.clone();
    let right = SelfMap::new(move |v| {
        let mut a = a.lock().expect("allocator lock");
        match a.materialize_past(v, MAX_ALLOCATIONS) {
            Ok(()) => a.position(v),
            Err(_) => 0,
        }
    });
    let (a, alphas) = (alloc.clone(), oracle.alphas.clone());
    let search: SearchBound = Arc::new(move |n, c| {
        let top = a.lock().expect("allocator lock").cover(n, c.max(1), MAX_ALLOCATIONS)?;
        Ok(InnerSearch {
            domain: (0..n).map(|i| alphas(i)).collect(),
            codomain: top + 1,
        })
    });
    let w = SandwichWitness::new(
        "tree",
        left,
        right,
        m.clone(),
        Outer::Monoid(MonoidDescriptor::FullE),
        Relation::Equals,
        json!({ "monoid": m }),
        search,
    );
    Ok((w, TreeHandle(alloc)))
}

// ---------------------------------------------------------------------------
// Ladder for finitely branching trees
// ---------------------------------------------------------------------------

/// Levels of the index ladder materialized up front.
pub const LADDER_LEVELS: usize = 6;

/// The ladder `i(0) < i(1) < ...` with branch sets `C_{i(j)}` and the
/// fan-out sets `Γ` derived from them.
#[derive(Clone, Debug, Serialize)]
pub struct Ladder {
    /// `i(j)`.
    pub indices: Vec<u64>,
    /// `|C_{i(j)}|`.
    pub sizes: Vec<u64>,
    /// `N_{i(j)}`.
    pub n_values: Vec<u64>,
    /// For each level `j`, the fan-out sets `Γ` of the elements of
    /// `C_{i(j)}`, each of size `j+1`.
    pub fanouts: Vec<Vec<Vec<u64>>>,
}

impl Ladder {
    /// `N_{i(j)} > j·|C_{i(j-1)}| + Σ_{k<j} |C_{i(k)}|` for every built `j ≥ 1`.
    pub fn inequality_holds(&self) -> bool {
        (1..self.indices.len()).all(|j| {
            let rhs = j as u64 * self.sizes[j - 1] + self.sizes[..j].iter().sum::<u64>();
            self.n_values[j] > rhs
        })
    }

    fn build(oracle: &TreeOracle, levels: usize) -> Result<Ladder, WitnessError> {
        let schedule = oracle
            .n_schedule
            .clone()
            .ok_or_else(|| WitnessError::Precondition("ladder needs the schedule N_i".into()))?;
        let mut indices = vec![0u64];
        let mut n_values = vec![schedule(0)];
        let mut levels_c: Vec<Vec<Vec<u64>>> = vec![vec![vec![]]];
        let mut used: BTreeSet<u64> = BTreeSet::new();
        let mut fanouts: Vec<Vec<Vec<u64>>> = Vec::new();
        for j in 1..=levels as u64 {
            let prev = levels_c.last().expect("nonempty");
            let rhs = j * prev.len() as u64 + levels_c.iter().map(|c| c.len() as u64).sum::<u64>();
            let start = indices.last().expect("nonempty") + 1;
            let i_j = (start..start + (1 << 20))
                .find(|&i| schedule(i) > rhs)
                .ok_or_else(|| WitnessError::Precondition("the schedule N_i does not grow".into()))?;
            let mut next_c = Vec::new();
            let mut fan = Vec::new();
            for c in prev {
                let mut branch = c.clone();
                while (branch.len() as u64) < i_j - 1 {
                    let v = (oracle.next_child)(&branch, 0).ok_or_else(|| WitnessError::Stall {
                        branch: branch.clone(),
                        budget: oracle.stall_budget,
                    })?;
                    branch.push(v);
                }
                let mut gamma = Vec::new();
                let mut from = 0;
                while (gamma.len() as u64) < j {
                    let v = (oracle.next_child)(&branch, from).ok_or_else(|| {
                        WitnessError::Precondition(format!(
                            "cannot find {j} fresh children below a branch of length {}",
                            branch.len()
                        ))
                    })?;
                    from = v + 1;
                    if used.insert(v) {
                        gamma.push(v);
                        let mut b = branch.clone();
                        b.push(v);
                        next_c.push(b);
                    }
                }
                fan.push(gamma);
            }
            indices.push(i_j);
            n_values.push(schedule(i_j));
            fanouts.push(fan);
            levels_c.push(next_c);
        }
        Ok(Ladder {
            indices,
            sizes: levels_c.iter().map(|c| c.len() as u64).collect(),
            n_values,
            fanouts,
        })
    }
}

/// `E≤ ⊆ f·M·h`: `f(j) = α_{i(j+1)-1}` and `h` sends each fan-out set of
/// level `j` onto `{0, .., j}` in increasing order.
pub fn tree2_witness(oracle: TreeOracle, m: MonoidDescriptor) -> Result<SandwichWitness, WitnessError> {
    tree2_witness_with_ladder(oracle, m).map(|(w, _)| w)
}

pub fn tree2_witness_with_ladder(
    oracle: TreeOracle,
    m: MonoidDescriptor,
) -> Result<(SandwichWitness, Arc<Ladder>), WitnessError> {
    if oracle.mode != OracleMode::AtLeast {
        return Err(WitnessError::Precondition(
            "ladder witnesses need an at-least oracle".into(),
        ));
    }
    let ladder = Arc::new(Ladder::build(&oracle, LADDER_LEVELS)?);
    let points: Vec<u64> = (1..ladder.indices.len())
        .map(|j| (oracle.alphas)(ladder.indices[j] - 1))
        .collect();
    let pts = points.clone();
    let left =
        SelfMap::new(move |j| pts.get(j as usize).copied().unwrap_or(u64::MAX - j)).with_flags([Flag::Injective]);
    let mut table: BTreeMap<u64, u64> = BTreeMap::new();
    for level in &ladder.fanouts {
        for gamma in level {
            let mut sorted = gamma.clone();
            sorted.sort_unstable();
            for (pos, v) in sorted.into_iter().enumerate() {
                table.insert(v, pos as u64);
            }
        }
    }
    let right = SelfMap::new(move |v| table.get(&v).copied().unwrap_or(0));
    let l = ladder.clone();
    let search: SearchBound = Arc::new(move |n, _| {
        if n as usize > points.len() {
            return Err(WitnessError::Precondition(format!(
                "the ladder is materialized for windows up to {}",
                points.len()
            )));
        }
        let top = l.fanouts[..n as usize]
            .iter()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0);
        Ok(InnerSearch {
            domain: points[..n as usize].iter().copied().collect(),
            codomain: top + 1,
        })
    });
    let w = SandwichWitness::new(
        "tree2",
        left,
        right,
        m.clone(),
        Outer::Monoid(MonoidDescriptor::OrderDown),
        Relation::Contains,
        json!({ "monoid": m, "ladder": ladder.indices }),
        search,
    );
    Ok((w, ladder))
}

// ---------------------------------------------------------------------------
// Two-way choices
// ---------------------------------------------------------------------------

/// The injective sequence `k ↦ a·k + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSequence {
    pub a: u64,
    pub b: u64,
}

impl LinearSequence {
    pub fn new(a: u64, b: u64) -> Self {
        LinearSequence { a, b }
    }

    pub fn at(self, k: u64) -> u64 {
        self.a * k + self.b
    }

    pub fn index(self, x: u64) -> Option<u64> {
        (x >= self.b && (x - self.b).is_multiple_of(self.a)).then(|| (x - self.b) / self.a)
    }

    fn disjoint(self, other: LinearSequence) -> bool {
        let g = gcd(self.a, other.a);
        self.b % g != other.b % g
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `E_(A) ⊆ f·M·h` for the blocks `A_i = {a_i, b_i} = {2i, 2i+1}`:
/// `(a_i)f = α_{2i}`, `(b_i)f = α_{2i+1}`, and `h` sends `β_{2i}, β_{2i+1}` to
/// `a_i` and `γ_{2i}, γ_{2i+1}` to `b_i`.
pub fn tree3_witness(
    alphas: LinearSequence,
    betas: LinearSequence,
    gammas: LinearSequence,
    m: MonoidDescriptor,
) -> Result<SandwichWitness, WitnessError> {
    if alphas.a == 0 || betas.a == 0 || gammas.a == 0 {
        return Err(WitnessError::Precondition("sequences must be injective".into()));
    }
    if !betas.disjoint(gammas) {
        return Err(WitnessError::Precondition("beta and gamma sequences intersect".into()));
    }
    let left = SelfMap::new(move |x| alphas.at(x)).with_flags([Flag::Injective]);
    let right = SelfMap::new(move |v| {
        if let Some(k) = betas.index(v) {
            2 * (k / 2)
        } else if let Some(k) = gammas.index(v) {
            2 * (k / 2) + 1
        } else {
            0
        }
    });
    let search: SearchBound = Arc::new(move |n, _| {
        let top = (0..n).map(|k| betas.at(k).max(gammas.at(k))).max().unwrap_or(0);
        Ok(InnerSearch {
            domain: (0..n).map(|x| alphas.at(x)).collect(),
            codomain: top + 1,
        })
    });
    Ok(SandwichWitness::new(
        "tree3",
        left,
        right,
        m.clone(),
        Outer::Monoid(MonoidDescriptor::partition(PartitionFamily::two_blocks())),
        Relation::Contains,
        json!({ "alphas": alphas, "betas": betas, "gammas": gammas, "monoid": m }),
        search,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::PreorderDescriptor;

    fn even_full() -> MonoidDescriptor {
        MonoidDescriptor::preorder(PreorderDescriptor::FullOnResidue { modulus: 2, residue: 0 })
    }

    #[test]
    fn tree_oracle_for_even_full() {
        let o = TreeOracle::from_descriptor(&even_full(), OracleMode::Infinite).unwrap();
        assert_eq!((0..4).map(|i| (o.alphas)(i)).collect::<Vec<_>>(), vec![0, 2, 4, 6]);
        assert_eq!((o.next_child)(&[0, 1], 0), Some(2));
        assert!((o.realizer)(&[5, 9, 1]).is_some());
        assert!(TreeOracle::from_descriptor(&MonoidDescriptor::OrderDown, OracleMode::Infinite).is_err());
    }

    #[test]
    fn lambda_sets_are_disjoint() {
        let o = TreeOracle::from_descriptor(&even_full(), OracleMode::Infinite).unwrap();
        let (w, handle) = tree_witness_with_handle(o, even_full()).unwrap();
        let s = w.search_bound(3, 3).unwrap();
        assert_eq!(s.domain, [0, 2, 4].into_iter().collect());
        let stats = handle.stats();
        assert!(stats.disjoint && stats.admissible);
        assert_eq!(stats.branches, stats.allocations + 1);
        // h is onto ω on the root's Λ-set
        let first: Vec<u64> = (0..s.codomain).filter(|&v| w.right.apply(v) == 2).collect();
        assert!(!first.is_empty());
    }

    #[test]
    fn ladder_for_growing_blocks() {
        let m = MonoidDescriptor::partition(PartitionFamily::Growing);
        let o = TreeOracle::from_descriptor(&m, OracleMode::AtLeast).unwrap();
        let (w, ladder) = tree2_witness_with_ladder(o, m).unwrap();
        assert_eq!(&ladder.indices[..5], &[0, 2, 4, 10, 34]);
        assert_eq!(&ladder.sizes[..5], &[1, 1, 2, 6, 24]);
        assert!(ladder.inequality_holds());
        for (j, level) in ladder.fanouts.iter().enumerate() {
            assert!(level.iter().all(|g| g.len() == j + 1));
        }
        // f(j) is the first point of block i(j+1)-1
        assert_eq!(w.left.window(crate::maps::Window(2)), vec![1, 6]);
    }

    #[test]
    fn linear_sequences() {
        let s = LinearSequence::new(2, 1);
        assert_eq!(s.index(7), Some(3));
        assert_eq!(s.index(6), None);
        assert!(s.disjoint(LinearSequence::new(2, 0)));
        assert!(!LinearSequence::new(3, 0).disjoint(LinearSequence::new(2, 0)));
        let m = MonoidDescriptor::partition(PartitionFamily::two_blocks());
        assert!(tree3_witness(
            LinearSequence::new(2, 0),
            LinearSequence::new(3, 0),
            LinearSequence::new(2, 0),
            m
        )
        .is_err());
    }

    #[test]
    fn tree3_maps() {
        let m = MonoidDescriptor::partition(PartitionFamily::two_blocks());
        let w = tree3_witness(
            LinearSequence::new(2, 0),
            LinearSequence::new(2, 1),
            LinearSequence::new(2, 0),
            m,
        )
        .unwrap();
        assert_eq!(w.left.window(crate::maps::Window(4)), vec![0, 2, 4, 6]);
        // β_0 = 1, β_1 = 3 ↦ a_0 = 0; γ_0 = 0, γ_1 = 2 ↦ b_0 = 1
        assert_eq!(w.right.window(crate::maps::Window(8)), vec![1, 0, 1, 0, 3, 2, 3, 2]);
    }
}
