//! Cayley-graph enumeration of finite parabolic subgroups, longest elements
//! and the centre of a finite Coxeter group.

use std::collections::{HashMap, VecDeque};

use crate::classify::classify_finite_type;
use crate::error::{Error, Result};
use crate::system::{CoxeterSystem, Subset};
use crate::word::{shortlex_normal_form, NormalForm, Word};

/// Default element cap for [`cayley_enumerate`].
pub const CAYLEY_CAP: usize = 100_000;

/// Elements of `W_T` in breadth-first order with right-multiplication edges.
#[derive(Debug, Clone)]
pub struct ElementTable {
    generators: Vec<usize>,
    elements: Vec<NormalForm>,
    edges: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NormalForm] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, nf: &NormalForm) -> Option<usize> {
        self.index.get(nf.letters()).copied()
    }

    /// Index of `elements[e] · generators[k]`.
    pub fn right_multiple(&self, e: usize, k: usize) -> usize {
        self.edges[e][k]
    }

    /// Multiplies two table elements by walking the Cayley graph.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.elements[b].letters().iter().fold(a, |acc, s| {
            let k = self.generators.iter().position(|g| g == s).expect("letter of W_T");
            self.edges[acc][k]
        })
    }
}

/// Breadth-first enumeration of `W_T`, deduplicated by normal form.
pub fn cayley_enumerate(sys: &CoxeterSystem, subset: &Subset, cap: usize) -> Result<ElementTable> {
    subset.check(sys.rank())?;
    let generators = subset.members().to_vec();
    let identity = NormalForm::default();
    let mut table = ElementTable {
        generators: generators.clone(),
        elements: vec![identity],
        edges: Vec::new(),
        index: HashMap::from([(Vec::new(), 0)]),
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        let mut row = Vec::with_capacity(generators.len());
        for &t in &generators {
            let mut letters = table.elements[e].letters().to_vec();
            letters.push(t);
            let nf = shortlex_normal_form(sys, &Word::new(letters))?;
            let next = match table.index.get(nf.letters()) {
                Some(&i) => i,
                None => {
                    if table.elements.len() >= cap {
                        return Err(Error::CayleyOverflow { cap });
                    }
                    let i = table.elements.len();
                    table.index.insert(nf.letters().to_vec(), i);
                    table.elements.push(nf);
                    queue.push_back(i);
                    i
                }
            };
            row.push(next);
        }
        debug_assert_eq!(table.edges.len(), e);
        table.edges.push(row);
    }
    Ok(table)
}

fn require_spherical(sys: &CoxeterSystem, subset: &Subset) -> Result<()> {
    if classify_finite_type(sys, subset)?.is_spherical {
        Ok(())
    } else {
        Err(Error::NotSpherical(subset.to_string()))
    }
}

/// The longest element `w0(T)`, reached by right-multiplying by non-descents
/// until every generator of `T` is a right descent.
pub fn longest_element(sys: &CoxeterSystem, subset: &Subset) -> Result<NormalForm> {
    require_spherical(sys, subset)?;
    let mut w = NormalForm::default();
    'grow: loop {
        for &t in subset.members() {
            let mut letters = w.letters().to_vec();
            letters.push(t);
            let next = shortlex_normal_form(sys, &Word::new(letters))?;
            if next.length() > w.length() {
                w = next;
                continue 'grow;
            }
        }
        return Ok(w);
    }
}

/// Whether `w0(T)` commutes with every generator of `T`, i.e. whether the
/// centre of `W_T` is `{1, w0}` rather than trivial.
pub fn is_w0_central(sys: &CoxeterSystem, subset: &Subset) -> Result<bool> {
    let w0 = longest_element(sys, subset)?;
    for &t in subset.members() {
        let mut letters = w0.letters().to_vec();
        letters.push(t);
        letters.extend_from_slice(w0.letters());
        if shortlex_normal_form(sys, &Word::new(letters))?.letters() != [t] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|Z(W_T)|`: the product over irreducible components of 2 when `w0` of the
/// component is central and 1 otherwise.
pub fn center_order(sys: &CoxeterSystem, subset: &Subset) -> Result<u64> {
    let decomp = classify_finite_type(sys, subset)?;
    if !decomp.is_spherical {
        return Err(Error::NotSpherical(subset.to_string()));
    }
    let mut order = 1u64;
    for c in &decomp.components {
        let comp = Subset::new(c.nodes.clone(), sys.rank())?;
        if is_w0_central(sys, &comp)? {
            order *= 2;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let inf = CoxeterSystem::path(&[0]);
        let single = Subset::new(vec![0], 2).unwrap();
        assert_eq!(cayley_enumerate(&inf, &single, 10).unwrap().len(), 2);
        assert_eq!(
            cayley_enumerate(&inf, &Subset::full(2), 100).unwrap_err(),
            Error::CayleyOverflow { cap: 100 }
        );
        let a2 = CoxeterSystem::path(&[3]);
        let table = cayley_enumerate(&a2, &Subset::full(2), 100).unwrap();
        assert_eq!(table.len(), 6);
        assert_eq!(table.elements()[0].length(), 0);
        // Closed under the generators.
        for e in 0..table.len() {
            for k in 0..2 {
                assert!(table.right_multiple(e, k) < table.len());
            }
        }
    }

    #[test]
    fn longest_elements() {
        let rank1 = CoxeterSystem::path(&[]);
        assert_eq!(longest_element(&rank1, &Subset::full(1)).unwrap().letters(), &[0]);
        let a2 = CoxeterSystem::path(&[3]);
        assert_eq!(longest_element(&a2, &Subset::full(2)).unwrap().letters(), &[0, 1, 0]);
        let b2 = CoxeterSystem::path(&[4]);
        assert_eq!(longest_element(&b2, &Subset::full(2)).unwrap().letters(), &[0, 1, 0, 1]);
        let tri = CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap();
        assert!(matches!(
            longest_element(&tri, &Subset::full(3)),
            Err(Error::NotSpherical(_))
        ));
    }

    #[test]
    fn centrality() {
        let full = |sys: &CoxeterSystem| is_w0_central(sys, &Subset::full(sys.rank())).unwrap();
        assert!(full(&CoxeterSystem::path(&[])));
        assert!(!full(&CoxeterSystem::path(&[3])));
        assert!(full(&CoxeterSystem::path(&[4])));
        assert!(full(&CoxeterSystem::path(&[5, 3])));
        let a1a1 = CoxeterSystem::path(&[2]);
        assert_eq!(center_order(&a1a1, &Subset::full(2)).unwrap(), 4);
        assert_eq!(center_order(&a1a1, &Subset::empty()).unwrap(), 1);
    }
}
