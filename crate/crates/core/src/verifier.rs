//! Exhaustive finite-window checks of sandwich witnesses and of the
//! obstructions separating the classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::descriptors::{
    group_elements, group_orbit, two_sided_sigma1, DescriptorError, Membership, MonoidDescriptor, PermutationSpec,
};
use crate::maps::{PartialMap, SelfMap};
use crate::witnesses::{Outer, Relation, SandwichWitness, WitnessError};

/// Default cap on inner candidates examined by one verification.
pub const DEFAULT_CEILING: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
            (Outcome::Unknown, _) | (_, Outcome::Unknown) => Outcome::Unknown,
            _ => Outcome::Pass,
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("claim {claim}: needs {needed} enumeration steps, above the ceiling of {ceiling}")]
    ResourceCeiling { claim: String, needed: u64, ceiling: u64 },
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// How the reverse inclusion of an equality claim was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum ReverseCheck {
    NotApplicable,
    /// The outer monoid accepts every prefix.
    OuterIsFull,
    /// Every inner prefix on the search domain was composed and checked.
    Enumerated {
        composites: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub targets: u64,
    pub realized: u64,
    pub inner_candidates: u64,
    pub search_codomain: u64,
    pub reverse: ReverseCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub window: u64,
    pub codomain: u64,
    pub outcome: Outcome,
    /// A target with no inner realizer, or a composite the outer monoid
    /// rejects.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<PartialMap>,
    /// An inner prefix whose composite is the counterexample (reverse check).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_prefix: Option<PartialMap>,
    pub stats: Stats,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

enum Realization {
    Found,
    Missing,
    Unknown,
}

struct Search<'a> {
    witness: &'a SandwichWitness,
    preimages: HashMap<u64, Vec<u64>>,
    candidates: u64,
    ceiling: u64,
}

impl Search<'_> {
    fn realize(&mut self, target: &PartialMap) -> Result<Realization, VerifyError> {
        let mut required: BTreeMap<u64, u64> = BTreeMap::new();
        for (x, t) in target.iter() {
            let d = self.witness.left.apply(x);
            if *required.entry(d).or_insert(t) != t {
                return Ok(Realization::Missing);
            }
        }
        let points: Vec<(u64, u64)> = required.into_iter().collect();
        let mut current = PartialMap::new();
        let mut unknown = false;
        let found = self.dfs(&points, &mut current, &mut unknown)?;
        Ok(match found {
            true => Realization::Found,
            false if unknown => Realization::Unknown,
            false => Realization::Missing,
        })
    }

    fn dfs(
        &mut self,
        points: &[(u64, u64)],
        current: &mut PartialMap,
        unknown: &mut bool,
    ) -> Result<bool, VerifyError> {
        let Some((&(d, t), rest)) = points.split_first() else {
            return Ok(true);
        };
        let cands = self.preimages.get(&t).cloned().unwrap_or_default();
        for v in cands {
            self.candidates += 1;
            if self.candidates > self.ceiling {
                return Err(VerifyError::ResourceCeiling {
                    claim: self.witness.provenance.clone(),
                    needed: self.candidates,
                    ceiling: self.ceiling,
                });
            }
            current.insert(d, v);
            match self.witness.inner.prefix_membership(current) {
                Membership::Yes => {
                    if self.dfs(rest, current, unknown)? {
                        return Ok(true);
                    }
                }
                Membership::Unknown => *unknown = true,
                Membership::No => {}
            }
        }
        current.remove(d);
        Ok(false)
    }
}

fn outer_targets(w: &SandwichWitness, n: u64, codomain: u64) -> Result<Vec<PartialMap>, VerifyError> {
    let window: BTreeSet<u64> = (0..n).collect();
    Ok(match &w.outer {
        Outer::Monoid(m) => m.enumerate_prefix_maps(&window, codomain)?,
        Outer::Maps(ts) => ts.iter().map(|t| t.restrict(0..n)).collect(),
    })
}

/// Checks every outer target on `{0, .., n-1}` (values below `codomain`)
/// for an inner realizer, and for equality claims the reverse inclusion.
pub fn verify_sandwich(
    w: &SandwichWitness,
    n: u64,
    codomain: u64,
    ceiling: u64,
) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    if codomain == 0 {
        return Err(VerifyError::Precondition("codomain must be at least 1".into()));
    }
    let search = w.search_bound(n, codomain)?;
    if search.codomain > ceiling {
        return Err(VerifyError::ResourceCeiling {
            claim: w.provenance.clone(),
            needed: search.codomain,
            ceiling,
        });
    }
    let mut preimages: HashMap<u64, Vec<u64>> = HashMap::new();
    for v in 0..search.codomain {
        preimages.entry(w.right.apply(v)).or_default().push(v);
    }
    let targets = outer_targets(w, n, codomain)?;
    let mut s = Search {
        witness: w,
        preimages,
        candidates: 0,
        ceiling,
    };
    let mut realized = 0;
    let mut outcome = Outcome::Pass;
    let mut counterexample = None;
    for t in &targets {
        match s.realize(t)? {
            Realization::Found => realized += 1,
            Realization::Missing => {
                outcome = Outcome::Fail;
                counterexample = Some(t.clone());
                break;
            }
            Realization::Unknown => outcome = outcome.and(Outcome::Unknown),
        }
    }
    let mut inner_prefix = None;
    let reverse = match (w.relation, &w.outer) {
        (Relation::Contains, _) => ReverseCheck::NotApplicable,
        (Relation::Equals, Outer::Monoid(MonoidDescriptor::FullE)) => ReverseCheck::OuterIsFull,
        (Relation::Equals, outer) if outcome == Outcome::Pass => {
            let domain: BTreeSet<u64> = (0..n).map(|x| w.left.apply(x)).collect();
            let estimate = (search.codomain as f64).powi(domain.len() as i32);
            if estimate > ceiling as f64 {
                return Err(VerifyError::ResourceCeiling {
                    claim: w.provenance.clone(),
                    needed: estimate.min(u64::MAX as f64) as u64,
                    ceiling,
                });
            }
            let inner = w.inner.enumerate_prefix_maps(&domain, search.codomain)?;
            let mut composites = 0;
            for m in &inner {
                composites += 1;
                let c = PartialMap::from_pairs((0..n).filter_map(|x| w.composite(m, x).map(|v| (x, v))));
                let ok = match outer {
                    Outer::Monoid(om) => om.prefix_membership(&c).is_yes(),
                    Outer::Maps(ts) => ts.iter().any(|t| c.is_restriction_of(&t.restrict(0..n))),
                };
                if !ok {
                    outcome = Outcome::Fail;
                    counterexample = Some(c);
                    inner_prefix = Some(m.clone());
                    break;
                }
            }
            ReverseCheck::Enumerated { composites }
        }
        _ => ReverseCheck::NotApplicable,
    };
    Ok(VerificationReport {
        claim: w.provenance.clone(),
        window: n,
        codomain,
        outcome,
        counterexample,
        inner_prefix,
        stats: Stats {
            targets: targets.len() as u64,
            realized,
            inner_candidates: s.candidates,
            search_codomain: search.codomain,
            reverse,
        },
        wall_time: started.elapsed(),
    })
}

/// Independent re-check of one target: per-point candidate filtering
/// followed by a plain cartesian product. Returns whether a realizer exists.
pub fn replay_counterexample(
    w: &SandwichWitness,
    target: &PartialMap,
    n: u64,
    codomain: u64,
    ceiling: u64,
) -> Result<bool, VerifyError> {
    let search = w.search_bound(n, codomain)?;
    let mut per_point: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (x, t) in target.iter() {
        let d = w.left.apply(x);
        let fresh: Vec<u64> = (0..search.codomain)
            .filter(|&v| w.right.apply(v) == t)
            .filter(|&v| w.inner.prefix_membership(&PartialMap::from_pairs([(d, v)])).is_yes())
            .collect();
        let merged = match per_point.remove(&d) {
            Some(prev) => prev.into_iter().filter(|v| fresh.contains(v)).collect(),
            None => fresh,
        };
        per_point.insert(d, merged);
    }
    let total: f64 = per_point.values().map(|c| c.len() as f64).product();
    if total > ceiling as f64 {
        return Err(VerifyError::ResourceCeiling {
            claim: format!("replay of {}", w.provenance),
            needed: total as u64,
            ceiling,
        });
    }
    let points: Vec<(u64, Vec<u64>)> = per_point.into_iter().collect();
    let mut idx = vec![0usize; points.len()];
    if points.iter().any(|(_, c)| c.is_empty()) {
        return Ok(false);
    }
    loop {
        let m = PartialMap::from_pairs(points.iter().zip(&idx).map(|((d, c), &i)| (*d, c[i])));
        if w.inner.prefix_membership(&m).is_yes() {
            return Ok(true);
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == points.len() {
                return Ok(false);
            }
            idx[k] += 1;
            if idx[k] < points[k].1.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Obstructions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionKind {
    OrbitBound,
    ImageBound,
    DiagonalWitness,
    Incomparability,
    ClosureInvariant,
    OracleEquivalence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub kind: ObstructionKind,
    pub params: serde_json::Value,
    pub outcome: Outcome,
    pub witness: serde_json::Value,
}

/// Checks `|(α)M| ≤ B` for every `α < n`.
pub fn verify_orbit_bound(m: &MonoidDescriptor, n: u64, b: u64) -> Result<ObstructionReport, VerifyError> {
    let mut max = 0u64;
    let mut failure = None;
    for a in 0..n {
        let size = match m.orbit_size(a) {
            Some(crate::descriptors::Card::Finite(s)) => s,
            Some(crate::descriptors::Card::Infinite) => u64::MAX,
            None => m.forward_orbit(a, n.max(a + b + 2))?.members.len() as u64,
        };
        max = max.max(size);
        if size > b && failure.is_none() {
            failure = Some((a, size));
        }
    }
    let size_json = |s: u64| if s == u64::MAX { json!("inf") } else { json!(s) };
    Ok(ObstructionReport {
        kind: ObstructionKind::OrbitBound,
        params: json!({ "window": n, "bound": b }),
        outcome: Outcome::from_bool(failure.is_none()),
        witness: json!({
            "max": size_json(max),
            "first_violation": failure.map(|(a, s)| json!({ "alpha": a, "size": size_json(s) })),
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub j: u64,
    pub point: u64,
    /// `(point)T^j`.
    pub excluded: Vec<u64>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalData {
    pub prefix: PartialMap,
    pub checkpoints: Vec<Checkpoint>,
}

/// `(p)T^j`, by iterated composition.
pub fn word_values(t: &[SelfMap], p: u64, j: u64) -> BTreeSet<u64> {
    let mut vals = BTreeSet::from([p]);
    for _ in 0..j {
        vals = vals.iter().flat_map(|&v| t.iter().map(move |f| f.apply(v))).collect();
    }
    vals
}

/// A decreasing prefix `f` with `(λ^j+1)f ∉ (λ^j+1)T^j` for `1 ≤ j ≤ J`;
/// every checkpoint takes the least value outside the excluded sets of all
/// checkpoints landing on it, and every other point is fixed.
pub fn diagonal_witness(
    t: &[SelfMap],
    lambda: u64,
    big_j: u64,
    ceiling: u64,
) -> Result<ObstructionReport, VerifyError> {
    if lambda == 0 {
        return Err(VerifyError::Precondition("lambda must be at least 1".into()));
    }
    let top = lambda
        .checked_pow(big_j as u32)
        .and_then(|p| p.checked_add(1))
        .filter(|&p| p <= ceiling)
        .ok_or_else(|| VerifyError::ResourceCeiling {
            claim: "diagonal".into(),
            needed: u64::MAX,
            ceiling,
        })?;
    let params = json!({ "lambda": lambda, "J": big_j, "maps": t.len() });
    if t.is_empty() {
        let data = DiagonalData {
            prefix: PartialMap::identity_on(0..=top),
            checkpoints: vec![],
        };
        return Ok(ObstructionReport {
            kind: ObstructionKind::DiagonalWitness,
            params,
            outcome: Outcome::Pass,
            witness: serde_json::to_value(data).expect("serializable"),
        });
    }
    for a in 0..=top {
        let k = word_values(t, a, 1).len() as u64;
        if k > lambda {
            return Err(VerifyError::Precondition(format!(
                "|({a})T| = {k} exceeds lambda = {lambda}"
            )));
        }
    }
    let mut excluded: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    let mut per_j = Vec::new();
    for j in 1..=big_j {
        let p = lambda.pow(j as u32) + 1;
        let vals = word_values(t, p, j);
        excluded.entry(p).or_default().extend(vals.iter().copied());
        per_j.push((j, p, vals));
    }
    let mut prefix = PartialMap::identity_on(0..=top);
    let mut chosen = BTreeMap::new();
    for (&p, ex) in &excluded {
        let v = (0..=p)
            .find(|v| !ex.contains(v))
            .ok_or_else(|| VerifyError::Precondition(format!("every value up to {p} is excluded at checkpoint {p}")))?;
        prefix.insert(p, v);
        chosen.insert(p, v);
    }
    let checkpoints = per_j
        .into_iter()
        .map(|(j, p, vals)| Checkpoint {
            j,
            point: p,
            excluded: vals.into_iter().collect(),
            value: chosen[&p],
        })
        .collect::<Vec<_>>();
    let ok = checkpoints.iter().all(|c| !c.excluded.contains(&c.value)) && prefix.iter().all(|(a, v)| v <= a);
    Ok(ObstructionReport {
        kind: ObstructionKind::DiagonalWitness,
        params,
        outcome: Outcome::from_bool(ok),
        witness: serde_json::to_value(DiagonalData { prefix, checkpoints }).expect("serializable"),
    })
}

/// Global bound on the image of any member extending a non-identity prefix.
pub fn factor_image_bound(m: &MonoidDescriptor, p: &PartialMap) -> Option<u64> {
    match m {
        MonoidDescriptor::FiniteImage { n } if !p.is_identity() => Some(n + 1),
        MonoidDescriptor::TwoSidedExample if !p.is_identity() => Some(4),
        _ => None,
    }
}

/// Image of the window under the composite word, against the least
/// structural factor bound.
pub fn word_image_bound(word: &[(MonoidDescriptor, PartialMap)], n: u64) -> Result<ObstructionReport, VerifyError> {
    for (k, (m, p)) in word.iter().enumerate() {
        if !m.prefix_membership(p).is_yes() {
            return Err(VerifyError::Precondition(format!(
                "factor {k} is not accepted by its monoid"
            )));
        }
    }
    let mut image = BTreeSet::new();
    for x in 0..n {
        let mut v = x;
        for (k, (_, p)) in word.iter().enumerate() {
            v = p
                .get(v)
                .ok_or_else(|| VerifyError::Precondition(format!("factor {k} is undefined at {v}")))?;
        }
        image.insert(v);
    }
    let bound = word.iter().filter_map(|(m, p)| factor_image_bound(m, p)).min();
    let observed = image.len() as u64;
    Ok(ObstructionReport {
        kind: ObstructionKind::ImageBound,
        params: json!({ "window": n, "factors": word.len() }),
        outcome: Outcome::from_bool(bound.is_none_or(|b| observed <= b)),
        witness: json!({
            "bound": bound.map_or(json!("inf"), |b| json!(b)),
            "observed": observed,
            "image": image,
        }),
    })
}

/// Two directions of incomparability between `M_2` and the two-sided
/// example, each re-checked through prefix membership.
pub fn incomparability_demo(n: u64) -> Result<ObstructionReport, VerifyError> {
    if n < 8 {
        return Err(VerifyError::Precondition(
            "the demo needs a window of at least 8".into(),
        ));
    }
    let two_sided = MonoidDescriptor::TwoSidedExample;
    let m2 = MonoidDescriptor::FiniteImage { n: 2 };

    // a member of the two-sided example with image {0,1,2,3}
    let f = PartialMap::from_pairs((0..n).map(|x| {
        let v = match x {
            0..=3 => x,
            _ if two_sided_sigma1(x) => 0,
            _ => 2,
        };
        (x, v)
    }));
    let f_member = two_sided.prefix_membership(&f).is_yes();
    let f_image = f.image().len() as u64;
    let m2_bound = factor_image_bound(&m2, &PartialMap::from_pairs([(0, 1)])).expect("non-identity");
    let a_ok = f_member && f_image > m2_bound;

    // a member of M_2 taking three values on a triple inside Σ₁
    let g = PartialMap::from_pairs((0..n).map(|x| {
        let v = match x {
            0 => 0,
            1 => 1,
            4 => 2,
            _ => 0,
        };
        (x, v)
    }));
    let g_member = m2.prefix_membership(&g).is_yes();
    let g_rejected = two_sided.prefix_membership(&g) == Membership::No;
    let triple: BTreeSet<u64> = [0, 1, 4].into_iter().filter_map(|x| g.get(x)).collect();
    let b_ok = g_member && g_rejected && triple.len() == 3 && [0, 1, 4].iter().all(|&x| two_sided_sigma1(x));

    Ok(ObstructionReport {
        kind: ObstructionKind::Incomparability,
        params: json!({ "window": n }),
        outcome: Outcome::from_bool(a_ok && b_ok),
        witness: json!({
            "two_sided_not_below_m2": {
                "pass": a_ok, "map": f, "member": f_member, "image": f_image, "m2_word_bound": m2_bound,
            },
            "m2_not_below_two_sided": {
                "pass": b_ok, "map": g, "member_of_m2": g_member, "rejected_by_two_sided": g_rejected,
                "values_on_sigma1_triple": triple,
            },
        }),
    })
}

/// All total maps `{0..n-1} -> {0..codomain-1}`.
fn all_window_maps(n: u64, codomain: u64) -> impl Iterator<Item = PartialMap> {
    let total = codomain.pow(n as u32);
    (0..total).map(move |mut code| {
        PartialMap::from_pairs((0..n).map(|x| {
            let v = code % codomain;
            code /= codomain;
            (x, v)
        }))
    })
}

fn agrees_with_element(p: &PartialMap, g: &crate::descriptors::GroupElement) -> bool {
    p.iter().all(|(a, v)| g.apply(a) == v)
}

/// Window-scale checks that closure commutes with orbits, stabilizers and
/// injectivity for a finitely generated permutation group.
///
/// Route one answers membership by tuple search over generators; route two
/// enumerates the group and filters its elements.
pub fn closure_invariant_check(
    g: &MonoidDescriptor,
    n: u64,
    bound: u64,
    gamma_universe: u64,
) -> Result<ObstructionReport, VerifyError> {
    let MonoidDescriptor::GroupClosure { generators, budget } = g else {
        return Err(VerifyError::Precondition(
            "closure checks need a group-closure descriptor".into(),
        ));
    };
    let generators: &[PermutationSpec] = generators;
    let elements = match group_elements(generators, *budget) {
        Ok(e) => e,
        Err(DescriptorError::BudgetExhausted(b)) => {
            return Ok(ObstructionReport {
                kind: ObstructionKind::ClosureInvariant,
                params: json!({ "window": n, "bound": bound, "gamma_universe": gamma_universe }),
                outcome: Outcome::Unknown,
                witness: json!({ "budget_exhausted": b }),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut outcome = Outcome::Pass;
    let mut note = |o: Outcome| outcome = outcome.and(o);

    // (1) forward orbits
    let mut orbit_mismatch = None;
    for a in 0..n {
        let via_closure = match g.forward_orbit(a, bound) {
            Ok(o) => o.members,
            Err(DescriptorError::BudgetExhausted(_)) => {
                note(Outcome::Unknown);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let via_bfs: BTreeSet<u64> = group_orbit(generators, a, *budget)?
            .into_iter()
            .filter(|&v| v < bound)
            .collect();
        if via_closure != via_bfs && orbit_mismatch.is_none() {
            orbit_mismatch = Some(json!({ "alpha": a, "closure": via_closure, "bfs": via_bfs }));
        }
    }
    note(Outcome::from_bool(orbit_mismatch.is_none()));

    // (2) stabilizer then closure vs closure then stabilizer
    let maps: Vec<PartialMap> = all_window_maps(n, bound).collect();
    let mut stab_mismatch = None;
    let mut stab_checked = 0u64;
    for mask in 0u64..(1 << gamma_universe) {
        let gamma: BTreeSet<u64> = (0..gamma_universe).filter(|i| mask >> i & 1 == 1).collect();
        let stab_closure = g.stabilizer(&gamma);
        let fixing: Vec<_> = elements
            .iter()
            .filter(|e| gamma.iter().all(|&s| e.apply(s) == s))
            .collect();
        for p in &maps {
            stab_checked += 1;
            let r1 = stab_closure.prefix_membership(p);
            if r1 == Membership::Unknown {
                note(Outcome::Unknown);
                continue;
            }
            let r2 = fixing.iter().any(|e| agrees_with_element(p, e));
            if r1.is_yes() != r2 && stab_mismatch.is_none() {
                stab_mismatch = Some(json!({ "gamma": gamma, "map": p, "closure_of_stabilizer": r2 }));
            }
        }
    }
    note(Outcome::from_bool(stab_mismatch.is_none()));

    // (3) injective accepted prefixes
    let mut inj_mismatch = None;
    let mut injective_accepted = 0u64;
    for p in maps.iter().filter(|p| p.is_injective()) {
        let in_closure = g.prefix_membership(p);
        if in_closure == Membership::Unknown {
            note(Outcome::Unknown);
            continue;
        }
        let in_group_closure = elements.iter().any(|e| agrees_with_element(p, e));
        if in_closure.is_yes() {
            injective_accepted += 1;
        }
        if in_closure.is_yes() != in_group_closure && inj_mismatch.is_none() {
            inj_mismatch = Some(json!({ "map": p }));
        }
    }
    note(Outcome::from_bool(inj_mismatch.is_none()));

    Ok(ObstructionReport {
        kind: ObstructionKind::ClosureInvariant,
        params: json!({ "window": n, "bound": bound, "gamma_universe": gamma_universe }),
        outcome,
        witness: json!({
            "group_order": elements.len(),
            "maps_compared": stab_checked,
            "injective_accepted": injective_accepted,
            "orbit_mismatch": orbit_mismatch,
            "stabilizer_mismatch": stab_mismatch,
            "injective_mismatch": inj_mismatch,
        }),
    })
}

/// Descriptors covering every variant except group closures.
pub fn oracle_sample_descriptors() -> Vec<MonoidDescriptor> {
    use crate::descriptors::{Override, PartitionFamily, PreorderDescriptor};
    let pre = MonoidDescriptor::preorder;
    let part = MonoidDescriptor::partition;
    vec![
        MonoidDescriptor::FullE,
        MonoidDescriptor::SymS,
        pre(PreorderDescriptor::Full),
        pre(PreorderDescriptor::Equality),
        pre(PreorderDescriptor::NaturalDown),
        pre(PreorderDescriptor::Partition {
            partition: PartitionFamily::two_blocks(),
        }),
        pre(PreorderDescriptor::pointed(0)),
        pre(PreorderDescriptor::FinitePatch {
            base: Box::new(PreorderDescriptor::NaturalDown),
            overrides: vec![Override {
                point: 3,
                delta: [3].into_iter().collect(),
            }],
        }),
        pre(PreorderDescriptor::FullOnResidue { modulus: 2, residue: 0 }),
        part(PartitionFamily::Growing),
        part(PartitionFamily::two_blocks()),
        part(PartitionFamily::Residue { modulus: 2 }),
        part(PartitionFamily::Explicit {
            blocks: vec![vec![0, 3], vec![1, 2]],
            tail: Box::new(PartitionFamily::Constant { size: 1 }),
        }),
        part(PartitionFamily::Squared {
            base: Box::new(PartitionFamily::Constant { size: 1 }),
        }),
        part(PartitionFamily::OrbitSizes {
            monoid: Box::new(pre(PreorderDescriptor::pointed(0))),
        }),
        MonoidDescriptor::PartitionSym {
            partition: PartitionFamily::two_blocks(),
        },
        MonoidDescriptor::OrderDown,
        MonoidDescriptor::OrderUpStrict,
        MonoidDescriptor::FiniteImage { n: 2 },
        MonoidDescriptor::TwoSidedExample,
        MonoidDescriptor::Stabilizer {
            monoid: Box::new(MonoidDescriptor::FullE),
            fixed: [1].into_iter().collect(),
        },
        MonoidDescriptor::Trivial,
    ]
}

/// Compares `enumerate_prefix_maps` with membership-filtered brute force on
/// every domain inside `{0, .., max_point}` and every codomain up to
/// `max_codomain`.
pub fn oracle_equivalence(
    descriptors: &[MonoidDescriptor],
    max_point: u64,
    max_codomain: u64,
) -> Result<ObstructionReport, VerifyError> {
    let points = max_point + 1;
    let mut compared = 0u64;
    let mut mismatch = None;
    'outer: for m in descriptors {
        for mask in 0u64..(1 << points) {
            let domain: Vec<u64> = (0..points).filter(|i| mask >> i & 1 == 1).collect();
            for c in 1..=max_codomain {
                let fast: BTreeSet<Vec<(u64, u64)>> = m
                    .enumerate_prefix_maps(&domain.iter().copied().collect(), c)?
                    .iter()
                    .map(|p| p.iter().collect())
                    .collect();
                let slow: BTreeSet<Vec<(u64, u64)>> = (0..c.pow(domain.len() as u32))
                    .map(|mut code| {
                        domain
                            .iter()
                            .map(|&d| {
                                let v = code % c;
                                code /= c;
                                (d, v)
                            })
                            .collect::<Vec<_>>()
                    })
                    .filter(|pairs| {
                        m.prefix_membership(&PartialMap::from_pairs(pairs.iter().copied()))
                            .is_yes()
                    })
                    .collect();
                compared += 1;
                if fast != slow {
                    mismatch = Some(json!({
                        "descriptor": m, "domain": domain, "codomain": c,
                        "enumerated": fast.len(), "brute_force": slow.len(),
                    }));
                    break 'outer;
                }
            }
        }
    }
    Ok(ObstructionReport {
        kind: ObstructionKind::OracleEquivalence,
        params: json!({ "descriptors": descriptors.len(), "max_point": max_point, "max_codomain": max_codomain }),
        outcome: Outcome::from_bool(mismatch.is_none()),
        witness: json!({ "cases": compared, "mismatch": mismatch }),
    })
}
