//! Named, versioned bundles of claims and their runner.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::classifier::{
    canonical_preorders, classify_preorder, classify_submonoid, random_patches, ClassTag, TypeTag,
};
use crate::descriptors::{MonoidDescriptor, PartitionFamily, PermutationSpec, PreorderDescriptor};
use crate::maps::{Moiety, PartialMap, SelfMap};
use crate::verifier::{
    closure_invariant_check, diagonal_witness, incomparability_demo, oracle_equivalence, replay_counterexample,
    verify_orbit_bound, verify_sandwich, Outcome, VerifyError,
};
use crate::witnesses::{self, Ladder, MapMutation, OracleMode, SandwichWitness, TreeOracle, WitnessError};

pub const PAPER_CORE: &str = include_str!("../suites/paper-core.json");
pub const INCOMPARABILITY: &str = include_str!("../suites/incomparability.json");

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("malformed suite: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Looks up a bundled suite by name.
pub fn bundled(name: &str) -> Result<Suite, SuiteError> {
    let text = match name {
        "paper-core" => PAPER_CORE,
        "incomparability" => INCOMPARABILITY,
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Suite {
    pub name: String,
    pub version: u32,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    #[default]
    Pass,
    /// The check must fail with a counterexample that replays.
    Fail,
}

/// How to build the witness under test.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum WitnessSpec {
    /// A construction by tag with its default parameters.
    Tag {
        tag: String,
        #[serde(default)]
        gamma: u64,
    },
    Moiety {
        monoid: MonoidDescriptor,
        moiety: Moiety,
    },
    SquareBlocks {
        family: PartitionFamily,
    },
    /// The tree witness for a preorder monoid with infinitely many points of
    /// infinite up-set.
    Tree {
        monoid: MonoidDescriptor,
    },
    Tree2 {
        monoid: MonoidDescriptor,
    },
}

impl WitnessSpec {
    pub fn build(&self) -> Result<(SandwichWitness, Option<Arc<Ladder>>), WitnessError> {
        Ok(match self {
            WitnessSpec::Tag { tag, .. } if tag == "tree2" => {
                let m = MonoidDescriptor::partition(PartitionFamily::Growing);
                let (w, l) =
                    witnesses::tree2_witness_with_ladder(TreeOracle::from_descriptor(&m, OracleMode::AtLeast)?, m)?;
                (w, Some(l))
            }
            WitnessSpec::Tag { tag, gamma } => (witnesses::by_tag(tag, *gamma)?, None),
            WitnessSpec::Moiety { monoid, moiety } => (witnesses::moiety_sandwich(monoid.clone(), *moiety), None),
            WitnessSpec::SquareBlocks { family } => (witnesses::partition_square_sandwich(family.clone())?, None),
            WitnessSpec::Tree { monoid } => (
                witnesses::tree_witness(
                    TreeOracle::from_descriptor(monoid, OracleMode::Infinite)?,
                    monoid.clone(),
                )?,
                None,
            ),
            WitnessSpec::Tree2 { monoid } => {
                let (w, l) = witnesses::tree2_witness_with_ladder(
                    TreeOracle::from_descriptor(monoid, OracleMode::AtLeast)?,
                    monoid.clone(),
                )?;
                (w, Some(l))
            }
        })
    }
}

/// Named self-maps usable in suite data.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum MapSpec {
    Identity,
    Constant { value: u64 },
    Successor,
}

impl MapSpec {
    pub fn build(self) -> SelfMap {
        match self {
            MapSpec::Identity => SelfMap::identity(),
            MapSpec::Constant { value } => SelfMap::constant(value),
            MapSpec::Successor => SelfMap::successor(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    #[serde(default)]
    pub description: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Check {
    Sandwich {
        witness: WitnessSpec,
        window: u64,
        codomain: u64,
        #[serde(default)]
        mutation: Option<MapMutation>,
        #[serde(default)]
        expect: Expect,
        /// Required number of outer targets, when pinned.
        #[serde(default)]
        targets: Option<u64>,
    },
    OrbitBound {
        monoid: MonoidDescriptor,
        window: u64,
        bound: u64,
        #[serde(default)]
        expect: Expect,
        /// For an expected failure, the first point whose orbit is too big.
        #[serde(default)]
        violation_at: Option<u64>,
    },
    Diagonal {
        maps: Vec<MapSpec>,
        lambda: u64,
        depth: u64,
    },
    Incomparability {
        window: u64,
    },
    Closure {
        generators: Vec<PermutationSpec>,
        window: u64,
        bound: u64,
        gamma_universe: u64,
    },
    ClassifierTable {
        patches: usize,
        seed: u64,
    },
    OracleEquivalence {
        max_point: u64,
        max_codomain: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Unknown,
    /// Refused: the enumeration would exceed the ceiling.
    Ceiling,
    /// The claim could not be set up (bad parameters).
    Error,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimReport {
    pub id: String,
    pub check: String,
    pub status: ClaimStatus,
    pub detail: serde_json::Value,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub ceiling: u64,
    /// Overrides the budget of group closures.
    pub budget: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            ceiling: crate::verifier::DEFAULT_CEILING,
            budget: None,
        }
    }
}

fn check_name(c: &Check) -> &'static str {
    match c {
        Check::Sandwich { .. } => "sandwich",
        Check::OrbitBound { .. } => "orbit-bound",
        Check::Diagonal { .. } => "diagonal",
        Check::Incomparability { .. } => "incomparability",
        Check::Closure { .. } => "closure",
        Check::ClassifierTable { .. } => "classifier-table",
        Check::OracleEquivalence { .. } => "oracle-equivalence",
    }
}

/// Runs every claim; reports come back sorted by claim id.
pub fn run_suite(suite: &Suite, opts: RunOptions) -> Vec<ClaimReport> {
    let mut reports: Vec<ClaimReport> = suite.claims.iter().map(|c| run_claim(c, opts)).collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    reports
}

pub fn run_claim(claim: &Claim, opts: RunOptions) -> ClaimReport {
    let started = Instant::now();
    let (status, detail) = match evaluate(&claim.check, opts) {
        Ok(r) => r,
        Err(VerifyError::ResourceCeiling {
            claim: c,
            needed,
            ceiling,
        }) => (
            ClaimStatus::Ceiling,
            json!({ "refused": c, "needed": needed, "ceiling": ceiling }),
        ),
        Err(e) => (ClaimStatus::Error, json!({ "error": e.to_string() })),
    };
    ClaimReport {
        id: claim.id.clone(),
        check: check_name(&claim.check).to_string(),
        status,
        detail,
        wall_time: started.elapsed(),
    }
}

fn status_of(o: Outcome) -> ClaimStatus {
    match o {
        Outcome::Pass => ClaimStatus::Pass,
        Outcome::Fail => ClaimStatus::Fail,
        Outcome::Unknown => ClaimStatus::Unknown,
    }
}

fn bool_status(b: bool) -> ClaimStatus {
    if b {
        ClaimStatus::Pass
    } else {
        ClaimStatus::Fail
    }
}

fn evaluate(check: &Check, opts: RunOptions) -> Result<(ClaimStatus, serde_json::Value), VerifyError> {
    match check {
        Check::Sandwich {
            witness,
            window,
            codomain,
            mutation,
            expect,
            targets,
        } => {
            let (mut w, ladder) = witness.build()?;
            if let Some(m) = mutation {
                w = w.mutated(*m);
            }
            let report = verify_sandwich(&w, *window, *codomain, opts.ceiling)?;
            let mut detail = serde_json::to_value(&report).expect("serializable");
            let mut ok = targets.is_none_or(|t| t == report.stats.targets);
            if let Some(l) = &ladder {
                detail["ladder"] = serde_json::to_value(&**l).expect("serializable");
                ok &= l.inequality_holds();
            }
            let status = match expect {
                Expect::Pass => match report.outcome {
                    Outcome::Pass if ok => ClaimStatus::Pass,
                    o => status_of(o).max_fail(),
                },
                Expect::Fail => {
                    let replayed = match (&report.counterexample, &report.inner_prefix) {
                        (Some(t), None) => !replay_counterexample(&w, t, *window, *codomain, opts.ceiling)?,
                        (Some(c), Some(m)) => {
                            let again =
                                PartialMap::from_pairs((0..*window).filter_map(|x| w.composite(m, x).map(|v| (x, v))));
                            again == *c
                        }
                        _ => false,
                    };
                    detail["replayed"] = json!(replayed);
                    bool_status(report.outcome == Outcome::Fail && replayed)
                }
            };
            Ok((status, detail))
        }
        Check::OrbitBound {
            monoid,
            window,
            bound,
            expect,
            violation_at,
        } => {
            let r = verify_orbit_bound(monoid, *window, *bound)?;
            let ok = match expect {
                Expect::Pass => r.outcome == Outcome::Pass,
                Expect::Fail => {
                    r.outcome == Outcome::Fail
                        && violation_at.is_none_or(|a| r.witness["first_violation"]["alpha"] == json!(a))
                }
            };
            Ok((bool_status(ok), serde_json::to_value(r).expect("serializable")))
        }
        Check::Diagonal { maps, lambda, depth } => {
            let t: Vec<SelfMap> = maps.iter().map(|m| m.build()).collect();
            let r = diagonal_witness(&t, *lambda, *depth, opts.ceiling)?;
            Ok((status_of(r.outcome), serde_json::to_value(r).expect("serializable")))
        }
        Check::Incomparability { window } => {
            let r = incomparability_demo(*window)?;
            Ok((status_of(r.outcome), serde_json::to_value(r).expect("serializable")))
        }
        Check::Closure {
            generators,
            window,
            bound,
            gamma_universe,
        } => {
            let g = MonoidDescriptor::group(generators.clone(), opts.budget.unwrap_or(10_000));
            let r = closure_invariant_check(&g, *window, *bound, *gamma_universe)?;
            Ok((status_of(r.outcome), serde_json::to_value(r).expect("serializable")))
        }
        Check::ClassifierTable { patches, seed } => Ok(classifier_table(*patches, *seed)),
        Check::OracleEquivalence {
            max_point,
            max_codomain,
        } => {
            let r = oracle_equivalence(&crate::verifier::oracle_sample_descriptors(), *max_point, *max_codomain)?;
            Ok((status_of(r.outcome), serde_json::to_value(r).expect("serializable")))
        }
    }
}

impl ClaimStatus {
    fn max_fail(self) -> ClaimStatus {
        match self {
            ClaimStatus::Pass => ClaimStatus::Fail,
            s => s,
        }
    }
}

fn classifier_table(patches: usize, seed: u64) -> (ClaimStatus, serde_json::Value) {
    let mut rows = Vec::new();
    let mut ok = true;
    for (rho, expected) in canonical_preorders().into_iter().zip(TypeTag::ALL) {
        let ty = classify_preorder(&rho).map(|t| t.tag);
        let class = classify_submonoid(&MonoidDescriptor::preorder(rho.clone())).map(|c| c.tag);
        let row_ok = ty == Ok(expected) && class.as_ref().ok() == Some(&expected.class());
        ok &= row_ok;
        let patch_failures = patch_mismatches(&rho, expected, patches, seed);
        ok &= patch_failures.is_empty();
        rows.push(json!({
            "preorder": rho,
            "type": ty.ok(),
            "class": class.unwrap_or(ClassTag::Unknown),
            "patches": patches,
            "patch_mismatches": patch_failures,
        }));
    }
    (bool_status(ok), json!({ "seed": seed, "rows": rows }))
}

fn patch_mismatches(rho: &PreorderDescriptor, expected: TypeTag, count: usize, seed: u64) -> Vec<PreorderDescriptor> {
    random_patches(rho, count, seed)
        .into_iter()
        .filter(|p| classify_preorder(p).map(|t| t.tag) != Ok(expected))
        .collect()
}

/// The set of ids in a suite, for duplicate checks.
pub fn claim_ids(suite: &Suite) -> BTreeSet<&str> {
    suite.claims.iter().map(|c| c.id.as_str()).collect()
}
