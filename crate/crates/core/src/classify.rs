//! Finite-type recognition of Coxeter diagrams and enumeration of spherical
//! subsets.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::system::{CoxeterSystem, Subset};

/// Default limit on the rank for subset-lattice enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Irreducible finite Coxeter types. Rank-2 types other than `A2` are all
/// reported as `I2(m)`, so `B2` is `I2(4)` and `G2` is `I2(6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(n) | FiniteType::B(n) | FiniteType::D(n) => n,
            FiniteType::E6 => 6,
            FiniteType::E7 => 7,
            FiniteType::E8 => 8,
            FiniteType::F4 | FiniteType::H4 => 4,
            FiniteType::H3 => 3,
            FiniteType::I2(_) => 2,
        }
    }

    /// Closed-form group order.
    pub fn order(self) -> Result<u128> {
        let factorial = |n: usize| -> Result<u128> {
            (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k).ok_or(Error::OrderOverflow))
        };
        let pow2 = |n: usize| 1u128.checked_shl(n as u32).ok_or(Error::OrderOverflow);
        match self {
            FiniteType::A(n) => factorial(n + 1),
            FiniteType::B(n) => pow2(n)?.checked_mul(factorial(n)?).ok_or(Error::OrderOverflow),
            FiniteType::D(n) => pow2(n - 1)?.checked_mul(factorial(n)?).ok_or(Error::OrderOverflow),
            FiniteType::E6 => Ok(51_840),
            FiniteType::E7 => Ok(2_903_040),
            FiniteType::E8 => Ok(696_729_600),
            FiniteType::F4 => Ok(1_152),
            FiniteType::H3 => Ok(120),
            FiniteType::H4 => Ok(14_400),
            FiniteType::I2(m) => Ok(2 * m as u128),
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => f.write_str("E6"),
            FiniteType::E7 => f.write_str("E7"),
            FiniteType::E8 => f.write_str("E8"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H3 => f.write_str("H3"),
            FiniteType::H4 => f.write_str("H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// One connected component of an induced diagram. `kind` is `None` when the
/// component matches no finite-type template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: Option<FiniteType>,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecomposition {
    pub components: Vec<Component>,
    pub is_spherical: bool,
}

impl TypeDecomposition {
    /// Component names, with `?` for components that are not of finite type.
    pub fn type_names(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|c| c.kind.map_or_else(|| "?".to_string(), |k| k.to_string()))
            .collect()
    }
}

impl fmt::Display for TypeDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("trivial");
        }
        f.write_str(&self.type_names().join(" x "))
    }
}

/// Decomposes the diagram induced on `subset` and matches each component
/// against the finite-type templates.
pub fn classify_finite_type(sys: &CoxeterSystem, subset: &Subset) -> Result<TypeDecomposition> {
    subset.check(sys.rank())?;
    let nodes = subset.members();
    let mut seen = vec![false; nodes.len()];
    let mut components = Vec::new();
    for start in 0..nodes.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(k) = stack.pop() {
            comp.push(nodes[k]);
            for (l, &other) in nodes.iter().enumerate() {
                if !seen[l] && sys.order(nodes[k], other).is_edge() {
                    seen[l] = true;
                    stack.push(l);
                }
            }
        }
        comp.sort_unstable();
        components.push(Component {
            kind: match_component(sys, &comp),
            nodes: comp,
        });
    }
    let is_spherical = components.iter().all(|c| c.kind.is_some());
    Ok(TypeDecomposition {
        components,
        is_spherical,
    })
}

/// Matches a connected diagram against the finite-type templates by its
/// degree sequence, label multiset and path/branch structure.
fn match_component(sys: &CoxeterSystem, nodes: &[usize]) -> Option<FiniteType> {
    let n = nodes.len();
    let mut edges = Vec::new();
    for (a, &s) in nodes.iter().enumerate() {
        for (b, &t) in nodes.iter().enumerate().skip(a + 1) {
            let m = sys.order(s, t);
            if m.is_edge() {
                edges.push((a, b, m.finite()?));
            }
        }
    }
    match n {
        1 => return Some(FiniteType::A(1)),
        2 => {
            let m = edges[0].2;
            return Some(if m == 3 { FiniteType::A(2) } else { FiniteType::I2(m) });
        }
        _ => {}
    }
    // Connected with n-1 edges: a tree.
    if edges.len() != n - 1 {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, m) in &edges {
        adj[a].push((b, m));
        adj[b].push((a, m));
    }
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    let heavy: Vec<&(usize, usize, u32)> = edges.iter().filter(|e| e.2 != 3).collect();

    if max_degree <= 2 {
        // Path: walk it from one end to recover the edge label sequence.
        let start = (0..n).find(|&v| adj[v].len() == 1)?;
        let mut labels = Vec::with_capacity(n - 1);
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = adj[cur].iter().find(|&&(v, _)| v != prev);
            match next {
                Some(&(v, m)) => {
                    labels.push(m);
                    prev = cur;
                    cur = v;
                }
                None => break,
            }
        }
        return match heavy.len() {
            0 => Some(FiniteType::A(n)),
            1 => {
                let pos = labels.iter().position(|&m| m != 3)?;
                let at_end = pos == 0 || pos == labels.len() - 1;
                match (labels[pos], at_end, n) {
                    (4, true, _) => Some(FiniteType::B(n)),
                    (4, false, 4) => Some(FiniteType::F4),
                    (5, true, 3) => Some(FiniteType::H3),
                    (5, true, 4) => Some(FiniteType::H4),
                    _ => None,
                }
            }
            _ => None,
        };
    }

    if max_degree != 3 || !heavy.is_empty() {
        return None;
    }
    let branches: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
    if branches.len() != 1 {
        return None;
    }
    let centre = branches[0];
    let mut arms: Vec<usize> = adj[centre]
        .iter()
        .map(|&(first, _)| {
            let (mut prev, mut cur, mut len) = (centre, first, 1);
            while let Some(&(v, _)) = adj[cur].iter().find(|&&(v, _)| v != prev) {
                prev = cur;
                cur = v;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms[..] {
        [1, 1, _] => Some(FiniteType::D(n)),
        [1, 2, 2] => Some(FiniteType::E6),
        [1, 2, 3] => Some(FiniteType::E7),
        [1, 2, 4] => Some(FiniteType::E8),
        _ => None,
    }
}

/// Order of the finite group with the given decomposition.
pub fn order_of(decomp: &TypeDecomposition) -> Result<u128> {
    let mut order = 1u128;
    for c in &decomp.components {
        let kind = c.kind.ok_or_else(|| Error::NotSpherical(format!("{:?}", c.nodes)))?;
        order = order.checked_mul(kind.order()?).ok_or(Error::OrderOverflow)?;
    }
    Ok(order)
}

pub fn is_spherical(sys: &CoxeterSystem, subset: &Subset) -> Result<bool> {
    Ok(classify_finite_type(sys, subset)?.is_spherical)
}

/// All spherical subsets in lexicographic order of their member lists.
pub fn enumerate_spherical_subsets(sys: &CoxeterSystem) -> Result<Vec<Subset>> {
    enumerate_spherical_subsets_capped(sys, ENUMERATION_CAP)
}

pub fn enumerate_spherical_subsets_capped(sys: &CoxeterSystem, cap: usize) -> Result<Vec<Subset>> {
    let rank = sys.rank();
    if rank > cap {
        return Err(Error::EnumerationCap { rank, cap });
    }
    let masks = spherical_masks(sys)?;
    let mut out: Vec<Subset> = masks.into_iter().map(Subset::from_mask).collect();
    out.sort();
    Ok(out)
}

/// Bottom-up walk of the subset lattice. A candidate is classified only if
/// every subset obtained by dropping one element is already spherical.
fn spherical_masks(sys: &CoxeterSystem) -> Result<HashSet<u64>> {
    let rank = sys.rank();
    let mut all: HashSet<u64> = HashSet::from([0]);
    let mut level: Vec<u64> = vec![0];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &mask in &level {
            let lowest_free = 64 - mask.leading_zeros() as usize;
            for j in lowest_free..rank {
                let cand = mask | 1 << j;
                let closed = (0..rank)
                    .filter(|&i| cand >> i & 1 == 1)
                    .all(|i| all.contains(&(cand & !(1 << i))));
                if closed && is_spherical(sys, &Subset::from_mask(cand))? {
                    next.push(cand);
                }
            }
        }
        all.extend(next.iter().copied());
        level = next;
    }
    Ok(all)
}

/// Maximal elements of [`enumerate_spherical_subsets`], lexicographic order.
pub fn maximal_spherical_subsets(sys: &CoxeterSystem) -> Result<Vec<Subset>> {
    let rank = sys.rank();
    if rank > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            rank,
            cap: ENUMERATION_CAP,
        });
    }
    let masks = spherical_masks(sys)?;
    let mut out: Vec<Subset> = masks
        .iter()
        .filter(|&&m| (0..rank).all(|j| m >> j & 1 == 1 || !masks.contains(&(m | 1 << j))))
        .map(|&m| Subset::from_mask(m))
        .collect();
    out.sort();
    Ok(out)
}

/// Generators `s ∉ T` for which `T ∪ {s}` is still spherical.
pub fn spherical_extensions(sys: &CoxeterSystem, subset: &Subset) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for s in 0..sys.rank() {
        if !subset.contains(s) && is_spherical(sys, &subset.with(s))? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Helper for tests and reports: the order of `W_T` if finite.
pub fn parabolic_order(sys: &CoxeterSystem, subset: &Subset) -> Result<u128> {
    order_of(&classify_finite_type(sys, subset)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(sys: &CoxeterSystem) -> Vec<Option<FiniteType>> {
        classify_finite_type(sys, &Subset::full(sys.rank()))
            .unwrap()
            .components
            .into_iter()
            .map(|c| c.kind)
            .collect()
    }

    fn triangle() -> CoxeterSystem {
        CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap()
    }

    #[test]
    fn singletons_are_a1() {
        let sys = triangle();
        for s in 0..3 {
            let d = classify_finite_type(&sys, &Subset::new(vec![s], 3).unwrap()).unwrap();
            assert!(d.is_spherical);
            assert_eq!(d.components[0].kind, Some(FiniteType::A(1)));
        }
    }

    #[test]
    fn recognises_templates() {
        assert_eq!(kinds(&CoxeterSystem::path(&[5, 3])), [Some(FiniteType::H3)]);
        assert_eq!(kinds(&CoxeterSystem::path(&[3, 5])), [Some(FiniteType::H3)]);
        assert_eq!(kinds(&CoxeterSystem::path(&[5, 3, 3])), [Some(FiniteType::H4)]);
        assert_eq!(kinds(&CoxeterSystem::path(&[3, 4, 3])), [Some(FiniteType::F4)]);
        assert_eq!(kinds(&CoxeterSystem::path(&[3, 3, 4])), [Some(FiniteType::B(4))]);
        assert_eq!(kinds(&CoxeterSystem::path(&[3, 3, 3])), [Some(FiniteType::A(4))]);
        assert_eq!(kinds(&CoxeterSystem::path(&[4])), [Some(FiniteType::I2(4))]);
        assert_eq!(kinds(&CoxeterSystem::path(&[6])), [Some(FiniteType::I2(6))]);
        assert_eq!(kinds(&CoxeterSystem::path(&[3])), [Some(FiniteType::A(2))]);
        assert_eq!(kinds(&CoxeterSystem::path(&[7])), [Some(FiniteType::I2(7))]);
        assert_eq!(
            kinds(&CoxeterSystem::path(&[2])),
            [Some(FiniteType::A(1)), Some(FiniteType::A(1))]
        );
    }

    #[test]
    fn recognises_branched_types() {
        // D4: centre 1 joined to 0, 2, 3.
        let d4 = CoxeterSystem::from_rows(&[&[1, 3, 2, 2], &[3, 1, 3, 3], &[2, 3, 1, 2], &[2, 3, 2, 1]]).unwrap();
        assert_eq!(kinds(&d4), [Some(FiniteType::D(4))]);
        let e = |arm_lengths: [usize; 3]| {
            let n = 1 + arm_lengths.iter().sum::<usize>();
            let mut rows = vec![vec![2u32; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = 1;
            }
            let mut next = 1;
            for len in arm_lengths {
                let mut prev = 0;
                for _ in 0..len {
                    rows[prev][next] = 3;
                    rows[next][prev] = 3;
                    prev = next;
                    next += 1;
                }
            }
            let refs: Vec<&[u32]> = rows.iter().map(Vec::as_slice).collect();
            kinds(&CoxeterSystem::from_rows(&refs).unwrap())
        };
        assert_eq!(e([1, 2, 2]), [Some(FiniteType::E6)]);
        assert_eq!(e([1, 2, 3]), [Some(FiniteType::E7)]);
        assert_eq!(e([1, 2, 4]), [Some(FiniteType::E8)]);
        assert_eq!(e([1, 1, 5]), [Some(FiniteType::D(8))]);
        assert_eq!(e([2, 2, 2]), [None]); // affine E6
        assert_eq!(e([1, 2, 5]), [None]); // affine E8
    }

    #[test]
    fn affine_and_hyperbolic_are_rejected() {
        assert_eq!(kinds(&triangle()), [None]);
        assert_eq!(kinds(&CoxeterSystem::path(&[4, 4])), [None]);
        assert_eq!(kinds(&CoxeterSystem::path(&[6, 3])), [None]);
        assert_eq!(kinds(&CoxeterSystem::path(&[5, 3, 3, 3])), [None]);
        assert_eq!(kinds(&CoxeterSystem::path(&[0])), [None]);
        assert_eq!(kinds(&CoxeterSystem::path(&[4, 3, 4])), [None]);
    }

    #[test]
    fn enumerations_match_examples() {
        let w3 = CoxeterSystem::universal(3);
        let sets: Vec<Vec<usize>> = enumerate_spherical_subsets(&w3)
            .unwrap()
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        assert_eq!(sets, vec![vec![], vec![0], vec![1], vec![2]]);
        let max: Vec<Vec<usize>> = maximal_spherical_subsets(&w3)
            .unwrap()
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        assert_eq!(max, vec![vec![0], vec![1], vec![2]]);

        let tri = triangle();
        assert_eq!(enumerate_spherical_subsets(&tri).unwrap().len(), 7);
        let max: Vec<Vec<usize>> = maximal_spherical_subsets(&tri)
            .unwrap()
            .iter()
            .map(|s| s.members().to_vec())
            .collect();
        assert_eq!(max, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);

        assert_eq!(
            enumerate_spherical_subsets(&CoxeterSystem::path(&[3])).unwrap().len(),
            4
        );
        assert_eq!(
            maximal_spherical_subsets(&CoxeterSystem::path(&[5, 3])).unwrap(),
            vec![Subset::full(3)]
        );
    }

    #[test]
    fn enumeration_cap_is_explicit() {
        let big = CoxeterSystem::universal(21);
        assert_eq!(
            enumerate_spherical_subsets(&big).unwrap_err(),
            Error::EnumerationCap { rank: 21, cap: 20 }
        );
        assert!(maximal_spherical_subsets(&big).is_err());
    }

    #[test]
    fn closed_form_orders() {
        let order = |sys: CoxeterSystem| parabolic_order(&sys, &Subset::full(sys.rank())).unwrap();
        assert_eq!(order(CoxeterSystem::path(&[])), 2);
        assert_eq!(order(CoxeterSystem::path(&[5, 3])), 120);
        assert_eq!(order(CoxeterSystem::path(&[3, 4, 3])), 1152);
        assert_eq!(order(CoxeterSystem::path(&[3, 3])), 24);
        assert_eq!(order(CoxeterSystem::path(&[3, 4])), 48);
        assert_eq!(order(CoxeterSystem::path(&[2, 3])), 12);
        assert_eq!(FiniteType::D(4).order().unwrap(), 192);
        assert_eq!(FiniteType::E8.order().unwrap(), 696_729_600);
        assert!(parabolic_order(&triangle(), &Subset::full(3)).is_err());
    }
}
