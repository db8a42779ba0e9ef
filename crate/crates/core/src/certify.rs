//! BP certificates for a candidate subgroup `W_T`.
//!
//! Conditions that reduce to finite computations are computed; the rest are
//! justified by a named theorem whose premises are computed. Citation anchors
//! form a closed whitelist so that [`verify_certificate`] can reject unknown
//! justifications.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::center_order;
use crate::classify::{classify_finite_type, maximal_spherical_subsets, order_of, spherical_extensions};
use crate::error::{Error, Result};
use crate::evidence::{normalizer_evidence, Evidence};
use crate::field::{gram_matrix, is_positive_definite, nullity};
use crate::quotient::{for_each_assignment, verify_quotient, PermQuotient};
use crate::system::{CoxeterSystem, Subset};

pub const SCHEMA_VERSION: &str = "1";

/// Fixed point of a finite reflection group acting on its Davis complex is
/// unique when the cell's Gram matrix is nondegenerate.
pub const CITE_UNIQUE_FIXED_POINT: &str = "davis-complex-unique-fixed-point";
/// A maximal elliptic subgroup with bounded fixed set is self-normalizing.
pub const CITE_SELF_NORMALIZED: &str = "maximal-elliptic-self-normalizing";
/// A proper cocompact action has finitely many conjugacy classes of maximal
/// elliptic subgroups, so a finite-index subgroup of automorphisms fixes each.
pub const CITE_FINITELY_MANY_CLASSES: &str = "cocompact-finitely-many-maximal-elliptic-classes";
/// A finite group has finite outer automorphism group.
pub const CITE_FINITE_OUT: &str = "finite-group-finite-out";

pub const CITATION_WHITELIST: [&str; 4] = [
    CITE_UNIQUE_FIXED_POINT,
    CITE_SELF_NORMALIZED,
    CITE_FINITELY_MANY_CLASSES,
    CITE_FINITE_OUT,
];

/// Largest permutation degree tried for advisory normalizer evidence.
const ADVISORY_MAX_DEGREE: usize = 4;
/// Assignments examined per degree before giving up on advisory evidence.
const ADVISORY_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    #[serde(rename = "SPHERICAL")]
    Spherical,
    #[serde(rename = "MAXIMALITY")]
    Maximality,
    #[serde(rename = "UNIQUE_FIXED_POINT")]
    UniqueFixedPoint,
    #[serde(rename = "SELF_NORMALIZED")]
    SelfNormalized,
    #[serde(rename = "BP1")]
    Bp1,
    #[serde(rename = "BP2")]
    Bp2,
    #[serde(rename = "BP3")]
    Bp3,
}

impl ConditionId {
    /// Evaluation order; each check may assume the earlier ones passed.
    pub const ORDER: [ConditionId; 7] = [
        ConditionId::Spherical,
        ConditionId::Maximality,
        ConditionId::UniqueFixedPoint,
        ConditionId::SelfNormalized,
        ConditionId::Bp1,
        ConditionId::Bp2,
        ConditionId::Bp3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Spherical => "SPHERICAL",
            ConditionId::Maximality => "MAXIMALITY",
            ConditionId::UniqueFixedPoint => "UNIQUE_FIXED_POINT",
            ConditionId::SelfNormalized => "SELF_NORMALIZED",
            ConditionId::Bp1 => "BP1",
            ConditionId::Bp2 => "BP2",
            ConditionId::Bp3 => "BP3",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    Computed,
    TheoremCited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Certified,
    Rejected,
}

/// Structured payload of a check; only the fields relevant to the condition
/// are present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEvidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_definite: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spherical_extensions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nullity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal_subsets: Option<Vec<Subset>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_listed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugacy_class_bound: Option<usize>,
    /// Finite-quotient normalizer evidence; advisory, never required.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advisory_quotient: Option<Evidence>,
}

impl CheckEvidence {
    pub fn is_empty(&self) -> bool {
        *self == CheckEvidence::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub condition_id: ConditionId,
    pub verdict: Verdict,
    pub justification: Justification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    pub evidence: CheckEvidence,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BPCertificate {
    pub schema_version: String,
    pub system_fingerprint: String,
    pub witness: Subset,
    pub checks: Vec<CheckResult>,
    pub overall: Overall,
}

impl BPCertificate {
    pub fn is_certified(&self) -> bool {
        self.overall == Overall::Certified
    }

    pub fn first_failure(&self) -> Option<ConditionId> {
        self.checks.iter().find(|c| !c.passed()).map(|c| c.condition_id)
    }
}

fn verdict(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn computed(id: ConditionId, pass: bool, evidence: CheckEvidence) -> CheckResult {
    CheckResult {
        condition_id: id,
        verdict: verdict(pass),
        justification: Justification::Computed,
        citation: None,
        evidence,
    }
}

fn cited(id: ConditionId, anchor: &str, evidence: CheckEvidence) -> CheckResult {
    CheckResult {
        condition_id: id,
        verdict: Verdict::Pass,
        justification: Justification::TheoremCited,
        citation: Some(anchor.to_string()),
        evidence,
    }
}

/// Finiteness of `W_T`, decided twice: by diagram classification and by
/// exact positive-definiteness of the Gram matrix. The routes must agree.
pub fn check_spherical(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let decomp = classify_finite_type(sys, subset)?;
    let definite = is_positive_definite(&gram_matrix(sys, subset)?)?;
    if decomp.is_spherical != definite {
        return Err(Error::Consistency(format!(
            "subset {subset} of system\n{}classifies as {decomp} (spherical: {}) but positive-definite = {definite}",
            sys.canonical_text(),
            decomp.is_spherical
        )));
    }
    Ok(computed(
        ConditionId::Spherical,
        definite,
        CheckEvidence {
            classification: Some(decomp.to_string()),
            positive_definite: Some(definite),
            ..Default::default()
        },
    ))
}

/// No generator outside `T` can be added while staying spherical.
pub fn check_maximality(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let extensions = spherical_extensions(sys, subset)?;
    Ok(computed(
        ConditionId::Maximality,
        extensions.is_empty(),
        CheckEvidence {
            spherical_extensions: Some(extensions),
            ..Default::default()
        },
    ))
}

/// Nondegenerate Gram matrix: the origin is the only fixed point of `W_T`
/// in the reflection representation.
pub fn check_unique_fixed_point(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let kernel = nullity(&gram_matrix(sys, subset)?)?;
    let mut result = computed(
        ConditionId::UniqueFixedPoint,
        kernel == 0,
        CheckEvidence {
            nullity: Some(kernel),
            ..Default::default()
        },
    );
    result.citation = Some(CITE_UNIQUE_FIXED_POINT.to_string());
    Ok(result)
}

/// `W_T` is finite, so its centralizer modulo the centre is finite.
pub fn check_bp1(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let decomp = classify_finite_type(sys, subset)?;
    if !decomp.is_spherical {
        return Err(Error::NotSpherical(subset.to_string()));
    }
    Ok(computed(
        ConditionId::Bp1,
        true,
        CheckEvidence {
            group_order: Some(order_of(&decomp)?),
            center_order: Some(center_order(sys, subset)?),
            ..Default::default()
        },
    ))
}

/// Cited: finitely many conjugacy classes of maximal finite subgroups. The
/// list of maximal spherical subsets bounds their number from above.
pub fn check_bp2(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let maximal = maximal_spherical_subsets(sys)?;
    if !maximal.contains(subset) {
        return Err(Error::NotMaximal(subset.to_string()));
    }
    Ok(cited(
        ConditionId::Bp2,
        CITE_FINITELY_MANY_CLASSES,
        CheckEvidence {
            conjugacy_class_bound: Some(maximal.len()),
            maximal_subsets: Some(maximal),
            witness_listed: Some(true),
            ..Default::default()
        },
    ))
}

/// Cited: a finite group has finite outer automorphism group.
pub fn check_bp3(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    let order = order_of(&classify_finite_type(sys, subset)?)?;
    Ok(cited(
        ConditionId::Bp3,
        CITE_FINITE_OUT,
        CheckEvidence {
            group_order: Some(order),
            ..Default::default()
        },
    ))
}

/// Cited: maximal elliptic subgroups with a unique fixed point are
/// self-normalizing. Attaches a tight quotient normalizer when one is found.
pub fn check_self_normalized(sys: &CoxeterSystem, subset: &Subset) -> Result<CheckResult> {
    if !check_spherical(sys, subset)?.passed() {
        return Err(Error::Prerequisite("SPHERICAL"));
    }
    if !check_maximality(sys, subset)?.passed() {
        return Err(Error::Prerequisite("MAXIMALITY"));
    }
    if !check_unique_fixed_point(sys, subset)?.passed() {
        return Err(Error::Prerequisite("UNIQUE_FIXED_POINT"));
    }
    Ok(cited(
        ConditionId::SelfNormalized,
        CITE_SELF_NORMALIZED,
        CheckEvidence {
            advisory_quotient: advisory_normalizer(sys, subset)?,
            ..Default::default()
        },
    ))
}

/// First quotient in canonical order where `φ(W_T)` is a nontrivial proper
/// subgroup of `φ(W)` equal to its own normalizer.
fn advisory_normalizer(sys: &CoxeterSystem, subset: &Subset) -> Result<Option<Evidence>> {
    if subset.is_empty() || subset.len() == sys.rank() {
        return Ok(None);
    }
    for degree in 2..=ADVISORY_MAX_DEGREE {
        let mut found = None;
        let mut failure = None;
        let mut visited = 0usize;
        let _ = for_each_assignment(sys, degree, |images| {
            visited += 1;
            if visited > ADVISORY_BUDGET {
                return ControlFlow::Break(());
            }
            let outcome = PermQuotient::new(degree, images.to_vec()).and_then(|q| normalizer_evidence(sys, subset, &q));
            match outcome {
                Ok(e) if e.tight && e.subgroup_image_order > 1 && e.subgroup_image_order < e.quotient.image_order() => {
                    found = Some(e);
                    ControlFlow::Break(())
                }
                Ok(_) => ControlFlow::Continue(()),
                Err(err) => {
                    failure = Some(err);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn run_check(sys: &CoxeterSystem, subset: &Subset, id: ConditionId) -> Result<CheckResult> {
    match id {
        ConditionId::Spherical => check_spherical(sys, subset),
        ConditionId::Maximality => check_maximality(sys, subset),
        ConditionId::UniqueFixedPoint => check_unique_fixed_point(sys, subset),
        ConditionId::SelfNormalized => check_self_normalized(sys, subset),
        ConditionId::Bp1 => check_bp1(sys, subset),
        ConditionId::Bp2 => check_bp2(sys, subset),
        ConditionId::Bp3 => check_bp3(sys, subset),
    }
}

/// Runs the checks in dependency order, stopping at the first failure.
pub fn certify_bp(sys: &CoxeterSystem, subset: &Subset) -> Result<BPCertificate> {
    subset.check(sys.rank())?;
    let mut checks = Vec::new();
    for id in ConditionId::ORDER {
        let result = run_check(sys, subset, id)?;
        let passed = result.passed();
        checks.push(result);
        if !passed {
            break;
        }
    }
    let overall = if checks.len() == ConditionId::ORDER.len() && checks.iter().all(CheckResult::passed) {
        Overall::Certified
    } else {
        Overall::Rejected
    };
    Ok(BPCertificate {
        schema_version: SCHEMA_VERSION.to_string(),
        system_fingerprint: sys.fingerprint(),
        witness: subset.clone(),
        checks,
        overall,
    })
}

/// The lexicographically least maximal spherical subset.
pub fn default_witness(sys: &CoxeterSystem) -> Result<Subset> {
    Ok(maximal_spherical_subsets(sys)?.into_iter().next().unwrap_or_default())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("certificate was issued for system {found}, not {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("unsupported schema version {0:?}")]
    SchemaVersion(String),
    #[error("check {condition} cites unknown anchor {anchor:?}")]
    UnknownCitation { condition: ConditionId, anchor: String },
    #[error("check {condition} does not reproduce: {detail}")]
    VerdictMismatch { condition: ConditionId, detail: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Compute(#[from] Error),
}

/// Recomputes every check of `cert` against `sys`. Theorem-cited checks must
/// carry a whitelisted anchor; computed checks and all evidence must
/// reproduce exactly.
pub fn verify_certificate(sys: &CoxeterSystem, cert: &BPCertificate) -> Result<(), VerifyError> {
    let expected = sys.fingerprint();
    if cert.system_fingerprint != expected {
        return Err(VerifyError::FingerprintMismatch {
            expected,
            found: cert.system_fingerprint.clone(),
        });
    }
    if cert.schema_version != SCHEMA_VERSION {
        return Err(VerifyError::SchemaVersion(cert.schema_version.clone()));
    }
    cert.witness
        .check(sys.rank())
        .map_err(|e| VerifyError::Malformed(format!("witness: {e}")))?;

    for check in &cert.checks {
        match (&check.citation, check.justification) {
            (Some(anchor), _) if !CITATION_WHITELIST.contains(&anchor.as_str()) => {
                return Err(VerifyError::UnknownCitation {
                    condition: check.condition_id,
                    anchor: anchor.clone(),
                });
            }
            (None, Justification::TheoremCited) => {
                return Err(VerifyError::Malformed(format!(
                    "{} is theorem-cited without a citation",
                    check.condition_id
                )));
            }
            _ => {}
        }
        if check.passed() && check.justification == Justification::Computed && check.evidence.is_empty() {
            return Err(VerifyError::Malformed(format!(
                "{} passes by computation without evidence",
                check.condition_id
            )));
        }
    }

    // Checks must follow the dependency order and stop at the first failure.
    let ids: Vec<ConditionId> = cert.checks.iter().map(|c| c.condition_id).collect();
    if ids.is_empty() || ids[..] != ConditionId::ORDER[..ids.len()] {
        return Err(VerifyError::Malformed(format!("checks out of order: {ids:?}")));
    }
    if let Some(pos) = cert.checks.iter().position(|c| !c.passed()) {
        if pos + 1 != cert.checks.len() {
            return Err(VerifyError::Malformed("checks continue after a failure".into()));
        }
    }
    let all_pass = cert.checks.len() == ConditionId::ORDER.len() && cert.checks.iter().all(CheckResult::passed);
    if (cert.overall == Overall::Certified) != all_pass {
        return Err(VerifyError::Malformed(format!(
            "overall {:?} contradicts the listed verdicts",
            cert.overall
        )));
    }

    for check in &cert.checks {
        let id = check.condition_id;
        if let Some(e) = &check.evidence.advisory_quotient {
            if !verify_quotient(sys, &e.quotient) {
                return Err(VerifyError::VerdictMismatch {
                    condition: id,
                    detail: "attached quotient violates the relations".into(),
                });
            }
        }
        let fresh = run_check(sys, &cert.witness, id)?;
        if fresh.verdict != check.verdict {
            return Err(VerifyError::VerdictMismatch {
                condition: id,
                detail: format!("recorded {:?}, recomputed {:?}", check.verdict, fresh.verdict),
            });
        }
        if fresh != *check {
            return Err(VerifyError::VerdictMismatch {
                condition: id,
                detail: "recorded evidence or justification differs from recomputation".into(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CoxeterSystem {
        CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap()
    }

    fn sub(members: &[usize], rank: usize) -> Subset {
        Subset::new(members.to_vec(), rank).unwrap()
    }

    #[test]
    fn spherical_examples() {
        let sys = triangle();
        assert!(check_spherical(&sys, &sub(&[0, 1], 3)).unwrap().passed());
        assert!(!check_spherical(&sys, &Subset::full(3)).unwrap().passed());
        assert!(check_spherical(&sys, &Subset::empty()).unwrap().passed());
    }

    #[test]
    fn maximality_examples() {
        assert!(check_maximality(&triangle(), &sub(&[0, 1], 3)).unwrap().passed());
        assert!(!check_maximality(&CoxeterSystem::path(&[3]), &sub(&[0], 2))
            .unwrap()
            .passed());
        assert!(check_maximality(&CoxeterSystem::universal(3), &sub(&[0], 3))
            .unwrap()
            .passed());
    }

    #[test]
    fn component_checks() {
        let sys = triangle();
        let pair = sub(&[0, 1], 3);
        assert_eq!(check_unique_fixed_point(&sys, &pair).unwrap().evidence.nullity, Some(0));
        let full = check_unique_fixed_point(&sys, &Subset::full(3)).unwrap();
        assert_eq!((full.passed(), full.evidence.nullity), (false, Some(1)));
        let bp1 = check_bp1(&sys, &pair).unwrap();
        assert_eq!(
            (bp1.evidence.group_order, bp1.evidence.center_order),
            (Some(6), Some(1))
        );
        let b2 = CoxeterSystem::path(&[4]);
        assert_eq!(check_bp1(&b2, &Subset::full(2)).unwrap().evidence.center_order, Some(2));
        let bp2 = check_bp2(&sys, &pair).unwrap();
        assert_eq!(bp2.evidence.maximal_subsets.as_ref().map(Vec::len), Some(3));
        assert!(matches!(check_bp2(&sys, &sub(&[0], 3)), Err(Error::NotMaximal(_))));
        let h3 = CoxeterSystem::path(&[5, 3]);
        assert_eq!(
            check_bp3(&h3, &Subset::full(3)).unwrap().evidence.group_order,
            Some(120)
        );
        assert!(matches!(
            check_self_normalized(&sys, &sub(&[0], 3)),
            Err(Error::Prerequisite("MAXIMALITY"))
        ));
    }

    #[test]
    fn advisory_evidence_for_infinite_dihedral() {
        let inf = CoxeterSystem::path(&[0]);
        let check = check_self_normalized(&inf, &sub(&[0], 2)).unwrap();
        let e = check.evidence.advisory_quotient.expect("advisory quotient");
        assert_eq!(e.quotient.degree(), 3);
        assert_eq!((e.subgroup_image_order, e.result_order, e.tight), (2, 2, true));
    }

    #[test]
    fn certificates() {
        let sys = triangle();
        let cert = certify_bp(&sys, &sub(&[0, 1], 3)).unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.checks.len(), 7);
        verify_certificate(&sys, &cert).unwrap();

        let rejected = certify_bp(&sys, &sub(&[0], 3)).unwrap();
        assert_eq!(rejected.first_failure(), Some(ConditionId::Maximality));
        verify_certificate(&sys, &rejected).unwrap();

        let w3 = CoxeterSystem::universal(3);
        assert!(certify_bp(&w3, &sub(&[1], 3)).unwrap().is_certified());
        let h3 = CoxeterSystem::path(&[5, 3]);
        assert!(certify_bp(&h3, &Subset::full(3)).unwrap().is_certified());
        let rank0 = CoxeterSystem::universal(0);
        assert!(certify_bp(&rank0, &Subset::empty()).unwrap().is_certified());
    }

    #[test]
    fn tampering_is_detected() {
        let sys = triangle();
        let cert = certify_bp(&sys, &sub(&[0, 1], 3)).unwrap();

        let mut bad = cert.clone();
        bad.checks[2].evidence.nullity = Some(1);
        assert!(matches!(
            verify_certificate(&sys, &bad),
            Err(VerifyError::VerdictMismatch {
                condition: ConditionId::UniqueFixedPoint,
                ..
            })
        ));

        let mut bad = cert.clone();
        bad.checks[5].citation = Some("folklore".into());
        assert!(matches!(
            verify_certificate(&sys, &bad),
            Err(VerifyError::UnknownCitation { .. })
        ));

        let other = CoxeterSystem::universal(3);
        assert!(matches!(
            verify_certificate(&other, &cert),
            Err(VerifyError::FingerprintMismatch { .. })
        ));
    }

    #[test]
    fn default_witness_is_least_maximal() {
        assert_eq!(default_witness(&triangle()).unwrap(), sub(&[0, 1], 3));
        assert_eq!(default_witness(&CoxeterSystem::universal(0)).unwrap(), Subset::empty());
    }
}
