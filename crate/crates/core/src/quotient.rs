//! Finite permutation quotients: assignments of involutions to generators
//! that satisfy every finite-order relation, found by backtracking.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::system::{CoxeterSystem, Order};
use crate::word::{shortlex_normal_form, Word};

/// Largest supported permutation degree (points are stored as bytes).
pub const MAX_DEGREE: usize = 255;

/// Default cap on the size of an enumerated image group.
pub const IMAGE_CAP: usize = 1_000_000;

/// A permutation of `{0, .., n-1}` in one-line notation. Displayed 1-based
/// in cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree).map(|i| i as u8).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Perm(images.into_iter().map(|x| x as u8).collect()))
    }

    /// Parses cycle notation such as `(1 2)(3 4)` or `()` on `degree` points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        let bad = || Error::InvalidPermutation(text.to_string());
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|p| !p.is_empty())
                .map(|p| match p.parse::<usize>() {
                    Ok(k) if (1..=degree).contains(&k) => Ok(k - 1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, &p) in points.iter().enumerate() {
                if std::mem::replace(&mut touched[p], true) {
                    return Err(bad());
                }
                images[p] = points[(i + 1) % points.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn is_involution(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &x)| self.0[x as usize] as usize == i)
    }

    /// `self` first, then `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let points: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", points.join(" "))?;
        }
        Ok(())
    }
}

/// A homomorphism from the Coxeter group onto a permutation group, given by
/// the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermQuotient {
    degree: usize,
    images: Vec<Perm>,
    image_order: u64,
}

impl PermQuotient {
    /// Builds a quotient, computing the order of the generated group.
    pub fn new(degree: usize, images: Vec<Perm>) -> Result<PermQuotient> {
        if images.iter().any(|p| p.degree() != degree) {
            return Err(Error::InvalidPermutation("images of differing degree".into()));
        }
        let image_order = closure(degree, &images, IMAGE_CAP)?.len() as u64;
        Ok(PermQuotient {
            degree,
            images,
            image_order,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image_order(&self) -> u64 {
        self.image_order
    }

    /// `φ(w)`, composing generator images left to right.
    pub fn image_of(&self, word: &Word) -> Result<Perm> {
        word.letters().iter().try_fold(Perm::identity(self.degree), |acc, &s| {
            self.images.get(s).map(|p| acc.then(p)).ok_or(Error::IndexOutOfRange {
                index: s,
                rank: self.images.len(),
            })
        })
    }

    pub fn image_group(&self) -> Result<Vec<Perm>> {
        closure(self.degree, &self.images, IMAGE_CAP)
    }
}

#[derive(Serialize, Deserialize)]
struct QuotientRepr {
    degree: usize,
    images: Vec<String>,
    image_order: u64,
}

impl Serialize for PermQuotient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuotientRepr {
            degree: self.degree,
            images: self.images.iter().map(Perm::to_string).collect(),
            image_order: self.image_order,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PermQuotient {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QuotientRepr::deserialize(deserializer)?;
        let images = repr
            .images
            .iter()
            .map(|c| Perm::parse_cycles(c, repr.degree))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let q = PermQuotient::new(repr.degree, images).map_err(D::Error::custom)?;
        if q.image_order != repr.image_order {
            return Err(D::Error::custom(format!(
                "stated image order {} but the images generate {}",
                repr.image_order, q.image_order
            )));
        }
        Ok(q)
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// One-line notation, 1-based and space separated: `2 1 3`.
    fn from_str(s: &str) -> Result<Perm> {
        let images = s
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::InvalidPermutation(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }
}

/// The group generated by `gens`, identity first, in breadth-first order.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = elements[i].then(g);
            if seen.insert(next.clone()) {
                if elements.len() >= cap {
                    return Err(Error::ImageTooLarge { cap });
                }
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// All involutions of `degree` points (identity included), in lexicographic
/// order of their one-line notation.
pub fn involutions(degree: usize) -> Vec<Perm> {
    fn extend(i: usize, images: &mut Vec<Option<usize>>, out: &mut Vec<Perm>) {
        let n = images.len();
        if i == n {
            let full = images.iter().map(|x| x.expect("assigned")).collect();
            out.push(Perm::from_images(full).expect("involution"));
            return;
        }
        if images[i].is_some() {
            return extend(i + 1, images, out);
        }
        images[i] = Some(i);
        extend(i + 1, images, out);
        for j in i + 1..n {
            if images[j].is_none() {
                images[i] = Some(j);
                images[j] = Some(i);
                extend(i + 1, images, out);
                images[j] = None;
            }
        }
        images[i] = None;
    }
    let mut out = Vec::new();
    extend(0, &mut vec![None; degree], &mut out);
    out
}

/// Whether `(a b)` has order dividing `m`.
fn satisfies(a: &Perm, b: &Perm, order: Order) -> bool {
    match order {
        Order::Infinite => true,
        Order::Finite(m) => a.then(b).cycles().iter().all(|c| (m as usize).is_multiple_of(c.len())),
    }
}

/// Relation checker used by both the search and [`verify_quotient`].
struct Backtrack<'a> {
    sys: &'a CoxeterSystem,
    choices: Vec<Perm>,
    assigned: Vec<usize>,
}

impl<'a> Backtrack<'a> {
    fn consistent(&self, s: usize, candidate: usize) -> bool {
        let p = &self.choices[candidate];
        (0..s).all(|t| satisfies(&self.choices[self.assigned[t]], p, self.sys.order(t, s)))
    }

    fn run<F>(&mut self, s: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Perm]) -> ControlFlow<()>,
    {
        let rank = self.sys.rank();
        if s == rank {
            // Index 0 is the identity involution.
            if rank > 0 && self.assigned.iter().all(|&i| i == 0) {
                return ControlFlow::Continue(());
            }
            let images: Vec<Perm> = self.assigned.iter().map(|&i| self.choices[i].clone()).collect();
            return visit(&images);
        }
        for c in 0..self.choices.len() {
            if self.consistent(s, c) {
                self.assigned.push(c);
                let flow = self.run(s + 1, visit);
                self.assigned.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every relation-satisfying assignment at exactly `degree` points in
/// canonical order (generator 0's image varies slowest), skipping the
/// all-identity assignment when the rank is positive.
pub fn for_each_assignment<F>(sys: &CoxeterSystem, degree: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Perm]) -> ControlFlow<()>,
{
    let mut search = Backtrack {
        sys,
        choices: involutions(degree),
        assigned: Vec::with_capacity(sys.rank()),
    };
    search.run(0, &mut visit)
}

fn collect_assignments(sys: &CoxeterSystem, degree: usize, first: Option<usize>, limit: usize) -> Vec<Vec<Perm>> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut search = Backtrack {
        sys,
        choices: involutions(degree),
        assigned: Vec::with_capacity(sys.rank()),
    };
    let mut visit = |images: &[Perm]| {
        out.push(images.to_vec());
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };
    match first {
        None => {
            let _ = search.run(0, &mut visit);
        }
        Some(c) => {
            search.assigned.push(c);
            let _ = search.run(1, &mut visit);
        }
    }
    out
}

fn build(degree: usize, found: Vec<Vec<Perm>>) -> Result<Vec<PermQuotient>> {
    found
        .into_iter()
        .map(|images| PermQuotient::new(degree, images))
        .collect()
}

fn check_degree(max_degree: usize) -> Result<()> {
    if max_degree > MAX_DEGREE {
        return Err(Error::InvalidPermutation(format!(
            "degree {max_degree} exceeds {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Up to `max_count` quotients of degree `1..=max_degree`, by increasing
/// degree and then lexicographically over the generator images.
pub fn search_quotients(sys: &CoxeterSystem, max_degree: usize, max_count: usize) -> Result<Vec<PermQuotient>> {
    check_degree(max_degree)?;
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        let remaining = max_count - out.len();
        if remaining == 0 {
            break;
        }
        out.extend(build(degree, collect_assignments(sys, degree, None, remaining))?);
    }
    Ok(out)
}

/// As [`search_quotients`], with the subtrees under each image of generator 0
/// searched concurrently and merged in canonical order.
pub fn search_quotients_parallel(
    sys: &CoxeterSystem,
    max_degree: usize,
    max_count: usize,
) -> Result<Vec<PermQuotient>> {
    check_degree(max_degree)?;
    if sys.rank() == 0 {
        return search_quotients(sys, max_degree, max_count);
    }
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        let remaining = max_count - out.len();
        if remaining == 0 {
            break;
        }
        let branches: Vec<Vec<Vec<Perm>>> = (0..involutions(degree).len())
            .into_par_iter()
            .map(|c| collect_assignments(sys, degree, Some(c), remaining))
            .collect();
        let merged: Vec<Vec<Perm>> = branches.into_iter().flatten().take(remaining).collect();
        out.extend(build(degree, merged)?);
    }
    Ok(out)
}

/// Independent relation check: every image squares to the identity and
/// every finite `(st)^m` maps to the identity, by repeated composition.
pub fn verify_quotient(sys: &CoxeterSystem, q: &PermQuotient) -> bool {
    if q.images.len() != sys.rank() || q.images.iter().any(|p| p.degree() != q.degree) {
        return false;
    }
    let id = Perm::identity(q.degree);
    let power = |p: &Perm, k: u32| (0..k).fold(id.clone(), |acc, _| acc.then(p));
    for (s, a) in q.images.iter().enumerate() {
        if power(a, 2) != id {
            return false;
        }
        for (t, b) in q.images.iter().enumerate().skip(s + 1) {
            if let Order::Finite(m) = sys.order(s, t) {
                if power(&a.then(b), m) != id {
                    return false;
                }
            }
        }
    }
    true
}

/// The first quotient in canonical order, up to `max_degree`, in which the
/// image of `word` is not the identity.
pub fn separate_element(sys: &CoxeterSystem, word: &Word, max_degree: usize) -> Result<Option<PermQuotient>> {
    check_degree(max_degree)?;
    if shortlex_normal_form(sys, word)?.is_identity() {
        return Err(Error::IdentityWord);
    }
    for degree in 1..=max_degree {
        let mut found = None;
        let _ = for_each_assignment(sys, degree, |images| {
            let image = word
                .letters()
                .iter()
                .fold(Perm::identity(degree), |acc, &s| acc.then(&images[s]));
            if image.is_identity() {
                ControlFlow::Continue(())
            } else {
                found = Some(images.to_vec());
                ControlFlow::Break(())
            }
        });
        if let Some(images) = found {
            return PermQuotient::new(degree, images).map(Some);
        }
    }
    Ok(None)
}
