//! Normalizer, centralizer and separation evidence computed inside a finite
//! permutation quotient. Advisory only: a quotient bounds the normalizer or
//! centralizer of `W_T` modulo its kernel, it never refutes anything.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::{closure, verify_quotient, Perm, PermQuotient, IMAGE_CAP};
use crate::system::{CoxeterSystem, Subset};
use crate::word::{shortlex_normal_form, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    Normalizer,
    Centralizer,
    Separation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub kind: EvidenceKind,
    pub quotient: PermQuotient,
    /// Order of `φ(W_T)`; for separation, the order of `φ(w)`.
    pub subgroup_image_order: u64,
    /// Order of the normalizer or centralizer of `φ(W_T)` in `φ(W)`; for
    /// separation, `|φ(W)|`.
    pub result_order: u64,
    pub tight: bool,
}

struct Images {
    group: Vec<Perm>,
    subgroup: Vec<Perm>,
    subgroup_gens: Vec<Perm>,
}

fn images(sys: &CoxeterSystem, subset: &Subset, q: &PermQuotient) -> Result<Images> {
    subset.check(sys.rank())?;
    if !verify_quotient(sys, q) {
        return Err(Error::InvalidQuotient);
    }
    let subgroup_gens: Vec<Perm> = subset.members().iter().map(|&s| q.images()[s].clone()).collect();
    Ok(Images {
        group: q.image_group()?,
        subgroup: closure(q.degree(), &subgroup_gens, IMAGE_CAP)?,
        subgroup_gens,
    })
}

fn commutes_with_all(g: &Perm, gens: &[Perm]) -> bool {
    gens.iter().all(|h| g.then(h) == h.then(g))
}

/// `N_{φ(W)}(φ(W_T))`, found by direct enumeration of `φ(W)`.
pub fn normalizer_evidence(sys: &CoxeterSystem, subset: &Subset, q: &PermQuotient) -> Result<Evidence> {
    let im = images(sys, subset, q)?;
    let members: HashSet<&Perm> = im.subgroup.iter().collect();
    let normalizer = im
        .group
        .iter()
        .filter(|g| {
            let inv = g.inverse();
            im.subgroup_gens.iter().all(|h| members.contains(&inv.then(h).then(g)))
        })
        .count() as u64;
    let order = im.subgroup.len() as u64;
    Ok(Evidence {
        kind: EvidenceKind::Normalizer,
        quotient: q.clone(),
        subgroup_image_order: order,
        result_order: normalizer,
        tight: normalizer == order,
    })
}

/// `C_{φ(W)}(φ(W_T))`; tight when it is no larger than the centre of
/// `φ(W_T)`.
pub fn centralizer_evidence(sys: &CoxeterSystem, subset: &Subset, q: &PermQuotient) -> Result<Evidence> {
    let im = images(sys, subset, q)?;
    let centralizer = im
        .group
        .iter()
        .filter(|g| commutes_with_all(g, &im.subgroup_gens))
        .count() as u64;
    let center = im
        .subgroup
        .iter()
        .filter(|g| commutes_with_all(g, &im.subgroup_gens))
        .count() as u64;
    Ok(Evidence {
        kind: EvidenceKind::Centralizer,
        quotient: q.clone(),
        subgroup_image_order: im.subgroup.len() as u64,
        result_order: centralizer,
        tight: centralizer == center,
    })
}

/// Records that `q` maps `word` to a non-identity permutation.
pub fn separation_evidence(sys: &CoxeterSystem, word: &Word, q: &PermQuotient) -> Result<Evidence> {
    if !verify_quotient(sys, q) {
        return Err(Error::InvalidQuotient);
    }
    if shortlex_normal_form(sys, word)?.is_identity() {
        return Err(Error::IdentityWord);
    }
    let image = q.image_of(word)?;
    Ok(Evidence {
        kind: EvidenceKind::Separation,
        quotient: q.clone(),
        subgroup_image_order: image.order(),
        result_order: q.image_order(),
        tight: !image.is_identity(),
    })
}
