//! Structural type computation for grammar preorders and the five-class
//! position of descriptor monoids.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{
    group_elements, Card, DescriptorError, MonoidDescriptor, Override, PartitionFamily, PermutationSpec,
    PreorderDescriptor, PreorderReport,
};
use crate::maps::Window;

/// Window used to sanity-check preorders before classifying them.
pub const SANITY_WINDOW: Window = Window(40);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeTag {
    Type1,
    Type2,
    Type3a,
    Type3b,
    Type4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    ClassE,
    ClassELeq,
    ClassE2Blocks,
    ClassPointed,
    ClassTrivial,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    I,
    Ii,
    Iii,
    Iv,
    V,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::I => "i",
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
            Condition::V => "v",
        };
        f.write_str(s)
    }
}

impl TypeTag {
    pub const ALL: [TypeTag; 5] = [
        TypeTag::Type1,
        TypeTag::Type2,
        TypeTag::Type3a,
        TypeTag::Type3b,
        TypeTag::Type4,
    ];

    pub fn class(self) -> ClassTag {
        match self {
            TypeTag::Type1 => ClassTag::ClassE,
            TypeTag::Type2 => ClassTag::ClassELeq,
            TypeTag::Type3a => ClassTag::ClassE2Blocks,
            TypeTag::Type3b => ClassTag::ClassPointed,
            TypeTag::Type4 => ClassTag::ClassTrivial,
        }
    }

    pub fn condition(self) -> Condition {
        match self {
            TypeTag::Type1 => Condition::I,
            TypeTag::Type2 => Condition::Ii,
            TypeTag::Type3a => Condition::Iii,
            TypeTag::Type3b => Condition::Iv,
            TypeTag::Type4 => Condition::V,
        }
    }
}

/// Tail profile of a family of cardinalities `|Δ(α)|` or `|(α)M|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeProfile {
    /// Infinitely many members are infinite.
    pub infinite_often: bool,
    /// The finite members have no common bound.
    pub unbounded: bool,
    /// Infinitely many members exceed 1.
    pub nontrivial_often: bool,
    /// A common bound on all but finitely many members, when bounded.
    pub bound: Option<u64>,
    /// A finite `Γ` with `Δ(α) ⊆ Γ ∪ {α}` for all but finitely many `α`.
    pub core: Option<BTreeSet<u64>>,
}

impl SizeProfile {
    fn infinite() -> Self {
        SizeProfile {
            infinite_often: true,
            unbounded: false,
            nontrivial_often: true,
            bound: None,
            core: None,
        }
    }

    fn unbounded() -> Self {
        SizeProfile {
            infinite_often: false,
            unbounded: true,
            nontrivial_often: true,
            bound: None,
            core: None,
        }
    }

    fn bounded(n: u64, core: Option<BTreeSet<u64>>) -> Self {
        SizeProfile {
            infinite_often: false,
            unbounded: false,
            nontrivial_often: n > 1,
            bound: Some(n),
            core: if n > 1 { core } else { Some(BTreeSet::new()) },
        }
    }

    pub fn type_tag(&self) -> TypeTag {
        if self.infinite_often {
            TypeTag::Type1
        } else if self.unbounded {
            TypeTag::Type2
        } else if !self.nontrivial_often {
            TypeTag::Type4
        } else if self.core.is_some() {
            TypeTag::Type3b
        } else {
            TypeTag::Type3a
        }
    }
}

/// Tail profile of the block sizes of a partition family. Blocks are
/// pairwise disjoint, so bounded families with infinitely many nontrivial
/// blocks never have a finite core.
pub fn partition_profile(family: &PartitionFamily) -> SizeProfile {
    match family {
        PartitionFamily::Constant { size } => SizeProfile::bounded(*size, None),
        PartitionFamily::Growing => SizeProfile::unbounded(),
        PartitionFamily::Residue { .. } => SizeProfile::infinite(),
        PartitionFamily::Explicit { tail, .. } => partition_profile(tail),
        PartitionFamily::OrbitSizes { monoid } => {
            let p = monoid_profile(monoid);
            SizeProfile {
                core: if p.nontrivial_often { None } else { p.core },
                ..p
            }
        }
        PartitionFamily::Squared { base } => {
            let p = partition_profile(base);
            match p.bound {
                Some(n) => SizeProfile::bounded(n * n, None),
                None => p,
            }
        }
    }
}

pub fn preorder_profile(rho: &PreorderDescriptor) -> SizeProfile {
    match rho {
        PreorderDescriptor::Full | PreorderDescriptor::FullOnResidue { .. } => SizeProfile::infinite(),
        PreorderDescriptor::Equality => SizeProfile::bounded(1, None),
        PreorderDescriptor::NaturalDown => SizeProfile::unbounded(),
        PreorderDescriptor::Partition { partition } => partition_profile(partition),
        PreorderDescriptor::Pointed { gamma } => SizeProfile::bounded(gamma.len() as u64 + 1, Some(gamma.clone())),
        PreorderDescriptor::FinitePatch { base, .. } => preorder_profile(base),
    }
}

/// Tail profile of forward-orbit sizes. Finite stabilizers change finitely
/// many orbits, so they inherit the profile of the monoid they restrict.
pub fn monoid_profile(m: &MonoidDescriptor) -> SizeProfile {
    if let Some(rho) = m.as_preorder() {
        return preorder_profile(&rho);
    }
    match m {
        MonoidDescriptor::SymS | MonoidDescriptor::OrderUpStrict => SizeProfile::infinite(),
        MonoidDescriptor::PartitionSym { partition } => SizeProfile {
            core: None,
            ..partition_profile(partition)
        },
        MonoidDescriptor::FiniteImage { n } => SizeProfile::bounded(n + 2, Some((0..=*n).collect())),
        MonoidDescriptor::TwoSidedExample => SizeProfile::bounded(3, Some((0..4).collect())),
        MonoidDescriptor::GroupClosure { generators, .. } => {
            if generators.iter().any(|g| matches!(g, PermutationSpec::PairSwap)) {
                SizeProfile::bounded(2, None)
            } else {
                SizeProfile::bounded(1, None)
            }
        }
        MonoidDescriptor::Stabilizer { monoid, .. } => monoid_profile(monoid),
        _ => SizeProfile::bounded(1, None),
    }
}

/// Evidence recorded alongside a preorder type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEvidence {
    pub description: String,
    /// The finite core `Γ` of a type 3b preorder.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u64>>,
    /// An eventual bound on `|Δ(α)|` for types 3 and 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// For type 2: points `α_k` with `|Δ(α_k)| ≥ k+1`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub schedule: Vec<u64>,
    /// `|Δ(α)|` for the first few `α`.
    pub samples: Vec<(u64, Card)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderType {
    pub tag: TypeTag,
    pub evidence: TypeEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEvidence {
    /// A finite `Σ` witnessing the condition (the stabilized set).
    pub sigma: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidClass {
    pub tag: ClassTag,
    pub condition: Option<Condition>,
    pub evidence: ClassEvidence,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("preorder fails validation on window {}: {}", .0.window.0, describe_report(.0))]
    InvalidPreorder(Box<PreorderReport>),
    #[error("no large stabilizers: {0}")]
    NoLargeStabilizers(String),
    #[error("cannot build a representative for an unknown class")]
    UnknownClass,
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

fn describe_report(r: &PreorderReport) -> String {
    if let Some(s) = &r.structural {
        return s.clone();
    }
    let mut parts = Vec::new();
    if let Some(a) = r.reflexivity.first() {
        parts.push(format!("{a} not in its own up-set"));
    }
    if let Some((a, b, c)) = r.transitivity.first() {
        parts.push(format!("transitivity fails at ({a}, {b}, {c})"));
    }
    parts.join("; ")
}

fn samples(rho: &PreorderDescriptor) -> Vec<(u64, Card)> {
    (0..8).map(|a| (a, rho.delta_size(a))).collect()
}

fn schedule(rho: &PreorderDescriptor, len: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut a = 0;
    for k in 1..=len {
        while !matches!(rho.delta_size(a), Card::Finite(s) if s >= k) {
            a += 1;
        }
        out.push(a);
    }
    out
}

/// Exact type of a grammar preorder.
pub fn classify_preorder(rho: &PreorderDescriptor) -> Result<PreorderType, ClassifyError> {
    let report = crate::descriptors::validate_preorder(rho, SANITY_WINDOW);
    if !report.passes() {
        return Err(ClassifyError::InvalidPreorder(Box::new(report)));
    }
    let profile = preorder_profile(rho);
    let tag = profile.type_tag();
    let (description, gamma, bound, sched) = match tag {
        TypeTag::Type1 => (
            "infinitely many points have an infinite up-set".to_string(),
            None,
            None,
            vec![],
        ),
        TypeTag::Type2 => (
            "up-sets are cofinitely finite with no common bound".to_string(),
            None,
            None,
            schedule(rho, 6),
        ),
        TypeTag::Type3a => (
            "bounded up-sets, infinitely many nontrivial, on disjoint pairs".to_string(),
            None,
            profile.bound,
            vec![],
        ),
        TypeTag::Type3b => (
            "bounded up-sets contained in a finite core plus the point".to_string(),
            profile.core.as_ref().map(|c| c.iter().copied().collect()),
            profile.bound,
            vec![],
        ),
        TypeTag::Type4 => ("up-sets are cofinitely singletons".to_string(), None, Some(1), vec![]),
    };
    Ok(PreorderType {
        tag,
        evidence: TypeEvidence {
            description,
            gamma,
            bound,
            schedule: sched,
            samples: samples(rho),
        },
    })
}

/// The exceptional points of a preorder: patched points and points with
/// infinite up-set, for preorders whose tail is finite.
fn exceptional_points(rho: &PreorderDescriptor) -> BTreeSet<u64> {
    match rho {
        PreorderDescriptor::FinitePatch { base, overrides } => {
            let mut s = exceptional_points(base);
            s.extend(overrides.iter().map(|o: &Override| o.point));
            s
        }
        PreorderDescriptor::Pointed { gamma } => gamma.clone(),
        _ => BTreeSet::new(),
    }
}

fn class_from_profile(profile: &SizeProfile, sigma: Vec<u64>, what: &str) -> MonoidClass {
    let tag = profile.type_tag();
    let (note, gamma, bound) = match tag {
        TypeTag::Type1 => (
            format!("{what}: infinitely many infinite forward orbits survive every finite stabilizer"),
            None,
            None,
        ),
        TypeTag::Type2 => (
            format!("{what}: forward orbits of the stabilizer are finite but unbounded"),
            None,
            None,
        ),
        TypeTag::Type3a => (
            format!("{what}: forward orbits are bounded and not eventually inside a finite core"),
            None,
            profile.bound,
        ),
        TypeTag::Type3b => (
            format!("{what}: forward orbits of the stabilizer lie in a finite core plus the point"),
            profile.core.as_ref().map(|c| c.iter().copied().collect()),
            profile.bound,
        ),
        TypeTag::Type4 => (format!("{what}: the stabilizer is trivial"), None, Some(1)),
    };
    MonoidClass {
        tag: tag.class(),
        condition: Some(tag.condition()),
        evidence: ClassEvidence {
            sigma,
            gamma,
            bound,
            note,
        },
    }
}

fn unknown(note: String) -> MonoidClass {
    MonoidClass {
        tag: ClassTag::Unknown,
        condition: None,
        evidence: ClassEvidence {
            sigma: vec![],
            gamma: None,
            bound: None,
            note,
        },
    }
}

/// Position of a descriptor monoid among the five classes.
pub fn classify_submonoid(m: &MonoidDescriptor) -> Result<MonoidClass, ClassifyError> {
    match m {
        MonoidDescriptor::FiniteImage { n } => {
            return Err(ClassifyError::NoLargeStabilizers(format!(
                "fixing any point above {n} leaves only the identity, which is not equivalent to the monoid"
            )))
        }
        MonoidDescriptor::TwoSidedExample => {
            return Err(ClassifyError::NoLargeStabilizers(
                "fixing a point of each side leaves only the identity".into(),
            ))
        }
        MonoidDescriptor::OrderUpStrict => {
            return Err(ClassifyError::NoLargeStabilizers(
                "every non-identity member moves 0, so the stabilizer of 0 is trivial".into(),
            ))
        }
        MonoidDescriptor::Stabilizer { monoid, .. }
            if !matches!(monoid.as_ref(), MonoidDescriptor::GroupClosure { .. }) && m.as_preorder().is_none() =>
        {
            classify_submonoid(monoid)?;
        }
        _ => {}
    }
    if let Some(rho) = m.as_preorder() {
        let ty = classify_preorder(&rho)?;
        let sigma = match ty.tag {
            TypeTag::Type1 => vec![],
            _ => exceptional_points(&rho).into_iter().collect(),
        };
        return Ok(class_from_profile(&preorder_profile(&rho), sigma, "preorder monoid"));
    }
    match m {
        MonoidDescriptor::SymS => Ok(class_from_profile(&SizeProfile::infinite(), vec![], "permutations")),
        MonoidDescriptor::PartitionSym { partition } => {
            partition.validate()?;
            Ok(class_from_profile(&monoid_profile(m), vec![], "block permutations"))
        }
        MonoidDescriptor::GroupClosure { generators, budget } => {
            Ok(classify_group(generators, *budget, &BTreeSet::new()))
        }
        MonoidDescriptor::Stabilizer { monoid, fixed } => match monoid.as_ref() {
            MonoidDescriptor::GroupClosure { generators, budget } => Ok(classify_group(generators, *budget, fixed)),
            inner => {
                let mut c = classify_submonoid(inner)?;
                c.evidence.sigma = c
                    .evidence
                    .sigma
                    .iter()
                    .chain(fixed)
                    .copied()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                Ok(c)
            }
        },
        _ => Ok(class_from_profile(&monoid_profile(m), vec![], "monoid")),
    }
}

fn classify_group(generators: &[PermutationSpec], budget: u64, fixed: &BTreeSet<u64>) -> MonoidClass {
    let elements = match group_elements(generators, budget) {
        Ok(e) => e,
        Err(e) => return unknown(e.to_string()),
    };
    let elements: Vec<_> = elements
        .into_iter()
        .filter(|g| fixed.iter().all(|&s| g.apply(s) == s))
        .collect();
    if elements.iter().any(|g| g.moves_tail()) {
        return unknown(
            "infinitely many points are moved; the split between bounded-orbit conditions is not decided for groups"
                .into(),
        );
    }
    let mut sigma: BTreeSet<u64> = BTreeSet::new();
    for g in &elements {
        sigma.extend(g.support());
    }
    sigma.extend(fixed.iter().copied());
    MonoidClass {
        tag: ClassTag::ClassTrivial,
        condition: Some(Condition::V),
        evidence: ClassEvidence {
            sigma: sigma.into_iter().collect(),
            gamma: None,
            bound: Some(1),
            note: format!("finite group of {} elements with finite support", elements.len()),
        },
    }
}

/// Representatives `E`, `E≤`, `E_(A)` with 2-element blocks, `E(ρ_0)` and
/// `{1}`.
pub fn canonical_representative(c: ClassTag) -> Result<MonoidDescriptor, ClassifyError> {
    Ok(match c {
        ClassTag::ClassE => MonoidDescriptor::FullE,
        ClassTag::ClassELeq => MonoidDescriptor::OrderDown,
        ClassTag::ClassE2Blocks => MonoidDescriptor::partition(PartitionFamily::two_blocks()),
        ClassTag::ClassPointed => MonoidDescriptor::preorder(PreorderDescriptor::pointed(0)),
        ClassTag::ClassTrivial => MonoidDescriptor::Trivial,
        ClassTag::Unknown => return Err(ClassifyError::UnknownClass),
    })
}

/// The five canonical preorders, in type order.
pub fn canonical_preorders() -> [PreorderDescriptor; 5] {
    [
        PreorderDescriptor::Full,
        PreorderDescriptor::NaturalDown,
        PreorderDescriptor::Partition {
            partition: PartitionFamily::two_blocks(),
        },
        PreorderDescriptor::pointed(0),
        PreorderDescriptor::Equality,
    ]
}

/// `count` random finite patches of `base` (1 to 5 overrides on points
/// below 20 with values below 20), each repaired into a valid preorder.
pub fn random_patches(base: &PreorderDescriptor, count: usize, seed: u64) -> Vec<PreorderDescriptor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=5);
            let mut points: BTreeSet<u64> = BTreeSet::new();
            while points.len() < k {
                points.insert(rng.gen_range(0..20));
            }
            let overrides = points
                .into_iter()
                .map(|p| {
                    let mut delta: BTreeSet<u64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..20)).collect();
                    delta.insert(p);
                    Override { point: p, delta }
                })
                .collect();
            repair_patch(PreorderDescriptor::FinitePatch {
                base: Box::new(base.clone()),
                overrides,
            })
        })
        .collect()
}

/// Drops related points from overrides until the patch validates on the
/// sanity window. Every override keeps its own point, so this terminates.
fn repair_patch(mut rho: PreorderDescriptor) -> PreorderDescriptor {
    loop {
        let report = crate::descriptors::validate_preorder(&rho, SANITY_WINDOW);
        let Some(&(a, b, c)) = report.transitivity.first() else {
            return rho;
        };
        let PreorderDescriptor::FinitePatch { overrides, .. } = &mut rho else {
            return rho;
        };
        if let Some(o) = overrides
            .iter_mut()
            .find(|o| o.point == a && o.delta.contains(&b) && b != a)
        {
            o.delta.remove(&b);
        } else if let Some(o) = overrides.iter_mut().find(|o| o.point == b && c != b) {
            o.delta.remove(&c);
        } else {
            // the base itself is not transitive; give up on this patch
            return rho;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::PermutationSpec;

    #[test]
    fn canonical_table() {
        for (rho, ty) in canonical_preorders().iter().zip(TypeTag::ALL) {
            assert_eq!(classify_preorder(rho).unwrap().tag, ty, "{rho:?}");
            let class = ty.class();
            let rep = canonical_representative(class).unwrap();
            let got = classify_submonoid(&rep).unwrap();
            assert_eq!(got.tag, class);
            assert_eq!(got.condition, Some(ty.condition()));
        }
    }

    #[test]
    fn preorder_type_examples() {
        assert_eq!(
            classify_preorder(&PreorderDescriptor::pointed(7)).unwrap().tag,
            TypeTag::Type3b
        );
        let empty = PreorderDescriptor::Pointed { gamma: BTreeSet::new() };
        assert_eq!(classify_preorder(&empty).unwrap().tag, TypeTag::Type4);
        let growing = PreorderDescriptor::Partition {
            partition: PartitionFamily::Growing,
        };
        assert_eq!(classify_preorder(&growing).unwrap().tag, TypeTag::Type2);
        let residue = PreorderDescriptor::Partition {
            partition: PartitionFamily::Residue { modulus: 3 },
        };
        assert_eq!(classify_preorder(&residue).unwrap().tag, TypeTag::Type1);
        let rho = PreorderDescriptor::FullOnResidue { modulus: 2, residue: 0 };
        assert_eq!(classify_preorder(&rho).unwrap().tag, TypeTag::Type1);
        let singletons = PreorderDescriptor::Partition {
            partition: PartitionFamily::Constant { size: 1 },
        };
        assert_eq!(classify_preorder(&singletons).unwrap().tag, TypeTag::Type4);
        let nd = classify_preorder(&PreorderDescriptor::NaturalDown).unwrap();
        assert_eq!(nd.evidence.schedule, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn invalid_preorder_is_rejected() {
        let bad = PreorderDescriptor::patch(PreorderDescriptor::Equality, [(0, vec![0, 2]), (2, vec![2, 5])]);
        assert!(matches!(
            classify_preorder(&bad),
            Err(ClassifyError::InvalidPreorder(_))
        ));
    }

    #[test]
    fn patches_preserve_type() {
        for (i, rho) in canonical_preorders().iter().enumerate() {
            let base = classify_preorder(rho).unwrap().tag;
            for p in random_patches(rho, 10, 7 + i as u64) {
                assert_eq!(classify_preorder(&p).unwrap().tag, base, "{p:?}");
            }
        }
    }

    #[test]
    fn monoids_without_large_stabilizers_are_refused() {
        for m in [
            MonoidDescriptor::FiniteImage { n: 2 },
            MonoidDescriptor::TwoSidedExample,
            MonoidDescriptor::OrderUpStrict,
        ] {
            assert!(matches!(
                classify_submonoid(&m),
                Err(ClassifyError::NoLargeStabilizers(_))
            ));
        }
    }

    #[test]
    fn group_classes() {
        let g = MonoidDescriptor::group(vec![PermutationSpec::cycle(vec![0, 1, 2])], 100);
        let c = classify_submonoid(&g).unwrap();
        assert_eq!((c.tag, c.condition), (ClassTag::ClassTrivial, Some(Condition::V)));
        assert_eq!(c.evidence.sigma, vec![0, 1, 2]);
        let swap = MonoidDescriptor::group(vec![PermutationSpec::PairSwap], 100);
        assert_eq!(classify_submonoid(&swap).unwrap().tag, ClassTag::Unknown);
        let big = MonoidDescriptor::group(
            vec![
                PermutationSpec::cycle((0..8).collect()),
                PermutationSpec::transposition(0, 1),
            ],
            50,
        );
        assert_eq!(classify_submonoid(&big).unwrap().tag, ClassTag::Unknown);
    }

    #[test]
    fn other_monoid_classes() {
        assert_eq!(
            classify_submonoid(&MonoidDescriptor::SymS).unwrap().tag,
            ClassTag::ClassE
        );
        let sym = MonoidDescriptor::PartitionSym {
            partition: PartitionFamily::two_blocks(),
        };
        assert_eq!(classify_submonoid(&sym).unwrap().tag, ClassTag::ClassE2Blocks);
        let pointed = MonoidDescriptor::preorder(PreorderDescriptor::pointed(0));
        let c = classify_submonoid(&pointed).unwrap();
        assert_eq!(c.condition, Some(Condition::Iv));
        assert_eq!(c.evidence.gamma, Some(vec![0]));
    }

    #[test]
    fn stabilizers_keep_class() {
        let sigmas: Vec<BTreeSet<u64>> = vec![BTreeSet::new(), [0].into(), [1, 3].into(), (0..5).collect()];
        for rho in canonical_preorders() {
            let m = MonoidDescriptor::preorder(rho);
            let base = classify_submonoid(&m).unwrap().tag;
            for s in &sigmas {
                assert_eq!(classify_submonoid(&m.stabilizer(s)).unwrap().tag, base);
            }
        }
    }
}
