//! Words in the generators, descents and ShortLex normal forms.
//!
//! Descents are read off the geometric representation: `s` is a left
//! descent of `w` exactly when `w⁻¹(α_s)` is a negative root. The exact
//! matrix of `w⁻¹` is tracked column by column while the word is reduced.

use std::fmt;

use crate::error::Result;
use crate::field::{AlgebraicReal, Geometry, Sign};
use crate::system::CoxeterSystem;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The inverse element: generators are involutions.
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub(crate) fn check(&self, sys: &CoxeterSystem) -> Result<()> {
        self.0.iter().try_for_each(|&s| sys.check_generator(s))
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Word {
        Word(letters)
    }
}

impl From<&[usize]> for Word {
    fn from(letters: &[usize]) -> Word {
        Word(letters.to_vec())
    }
}

/// The ShortLex-least reduced word of an element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalForm {
    letters: Vec<usize>,
}

impl NormalForm {
    pub(crate) fn from_reduced(letters: Vec<usize>) -> NormalForm {
        NormalForm { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn length(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.letters.clone())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Columns of the matrix of `w⁻¹`: `columns[t] = w⁻¹(α_t)` in the simple-root
/// basis, with the sign of each column cached.
struct InverseAction<'a> {
    geom: &'a Geometry,
    columns: Vec<Vec<AlgebraicReal>>,
    negative: Vec<Option<bool>>,
}

impl<'a> InverseAction<'a> {
    fn identity(geom: &'a Geometry) -> Self {
        let field = geom.field();
        let n = geom.rank();
        let columns = (0..n)
            .map(|t| {
                (0..n)
                    .map(|i| {
                        if i == t {
                            AlgebraicReal::one(field)
                        } else {
                            AlgebraicReal::zero(field)
                        }
                    })
                    .collect()
            })
            .collect();
        InverseAction {
            geom,
            columns,
            negative: vec![Some(false); n],
        }
    }

    fn of_word(geom: &'a Geometry, word: &[usize]) -> Self {
        let mut action = InverseAction::identity(geom);
        for &s in word.iter().rev() {
            action.prepend(s);
        }
        action
    }

    /// `w ← s·w`, i.e. `w⁻¹ ← w⁻¹ σ_s`. Column `t` becomes
    /// `col_t - 2 B(α_s, α_t) col_s`; column `s` is negated.
    fn prepend(&mut self, s: usize) {
        let col_s = std::mem::take(&mut self.columns[s]);
        for &t in self.geom.neighbours(s) {
            let c = self.geom.twice_form(s, t);
            for (x, y) in self.columns[t].iter_mut().zip(&col_s) {
                if !y.is_zero() {
                    *x = &*x - &(c * y);
                }
            }
            self.negative[t] = None;
        }
        self.columns[s] = col_s.iter().map(|x| -x).collect();
        self.negative[s] = self.negative[s].map(|n| !n);
    }

    /// Whether `w⁻¹(α_t)` is a negative root. Coordinates of a root share
    /// one sign, so the first nonzero coordinate decides.
    fn is_negative(&mut self, t: usize) -> bool {
        if let Some(n) = self.negative[t] {
            return n;
        }
        let n = self.columns[t]
            .iter()
            .find(|x| !x.is_zero())
            .map(|x| x.sign() == Sign::Negative)
            .expect("a root is never zero");
        self.negative[t] = Some(n);
        n
    }

    fn first_descent(&mut self) -> Option<usize> {
        (0..self.columns.len()).find(|&t| self.is_negative(t))
    }
}

/// `ℓ(s·w) < ℓ(w)`.
pub fn is_left_descent(sys: &CoxeterSystem, word: &Word, s: usize) -> Result<bool> {
    word.check(sys)?;
    sys.check_generator(s)?;
    let mut action = InverseAction::of_word(sys.geometry(), word.letters());
    Ok(action.is_negative(s))
}

/// `ℓ(w·s) < ℓ(w)`.
pub fn is_right_descent(sys: &CoxeterSystem, word: &Word, s: usize) -> Result<bool> {
    is_left_descent(sys, &word.reversed(), s)
}

/// Left-greedy reduction: the first letter is the smallest left descent,
/// then recurse on `s·w`.
pub fn shortlex_normal_form(sys: &CoxeterSystem, word: &Word) -> Result<NormalForm> {
    word.check(sys)?;
    let mut action = InverseAction::of_word(sys.geometry(), word.letters());
    let mut letters = Vec::new();
    while let Some(s) = action.first_descent() {
        letters.push(s);
        action.prepend(s);
    }
    Ok(NormalForm { letters })
}

pub fn length(sys: &CoxeterSystem, word: &Word) -> Result<usize> {
    Ok(shortlex_normal_form(sys, word)?.length())
}

/// Whether two words represent the same element.
pub fn same_element(sys: &CoxeterSystem, a: &Word, b: &Word) -> Result<bool> {
    Ok(shortlex_normal_form(sys, a)? == shortlex_normal_form(sys, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize]) -> Word {
        Word::from(letters)
    }

    #[test]
    fn descents() {
        let inf = CoxeterSystem::path(&[0]);
        assert!(!is_left_descent(&inf, &w(&[]), 0).unwrap());
        assert!(is_left_descent(&inf, &w(&[0, 1]), 0).unwrap());
        assert!(!is_left_descent(&inf, &w(&[0, 1]), 1).unwrap());
        let a2 = CoxeterSystem::path(&[3]);
        assert!(!is_left_descent(&a2, &w(&[0, 1]), 1).unwrap());
        assert!(is_right_descent(&a2, &w(&[0, 1]), 1).unwrap());
        assert!(is_left_descent(&a2, &w(&[0, 1, 0]), 1).unwrap());
    }

    #[test]
    fn normal_forms() {
        let a2 = CoxeterSystem::path(&[3]);
        let nf = |sys: &CoxeterSystem, l: &[usize]| shortlex_normal_form(sys, &w(l)).unwrap().letters().to_vec();
        assert_eq!(nf(&a2, &[0, 0]), Vec::<usize>::new());
        assert_eq!(nf(&a2, &[1, 0, 1]), vec![0, 1, 0]);
        assert_eq!(nf(&a2, &[0, 1, 0, 1]), vec![1, 0]);
        assert_eq!(length(&a2, &w(&[0, 1, 0, 1])).unwrap(), 2);
        let inf = CoxeterSystem::path(&[0]);
        assert_eq!(nf(&inf, &[0, 1, 0, 1]), vec![0, 1, 0, 1]);
        let comm = CoxeterSystem::path(&[2]);
        assert_eq!(nf(&comm, &[1, 0]), vec![0, 1]);
        assert!(shortlex_normal_form(&a2, &w(&[2])).is_err());
    }

    /// S_3 brute force: compose transpositions and compare lengths.
    #[test]
    fn agrees_with_symmetric_group_lengths() {
        let a2 = CoxeterSystem::path(&[3]);
        let perm = |word: &[usize]| {
            let mut p = [0usize, 1, 2];
            for &s in word {
                p.swap(s, s + 1);
            }
            p
        };
        let inversions = |p: [usize; 3]| {
            (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count()
        };
        for len in 0..7 {
            for code in 0..(1usize << len) {
                let word: Vec<usize> = (0..len).map(|k| code >> k & 1).collect();
                assert_eq!(length(&a2, &w(&word)).unwrap(), inversions(perm(&word)), "{word:?}");
            }
        }
    }
}
