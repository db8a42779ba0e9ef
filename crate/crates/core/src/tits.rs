//! Word reduction by braid moves and `ss`-deletions only (Tits' solution to
//! the word problem). Exponential, but independent of the geometric
//! representation, so it serves as an oracle for [`crate::word`].

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::system::{CoxeterSystem, Order};
use crate::word::{NormalForm, Word};

/// Default maximum input length for [`tits_reduce_oracle`].
pub const ORACLE_CAP: usize = 25;

pub fn tits_reduce_oracle(sys: &CoxeterSystem, word: &Word) -> Result<NormalForm> {
    tits_reduce_capped(sys, word, ORACLE_CAP)
}

pub fn tits_reduce_capped(sys: &CoxeterSystem, word: &Word, cap: usize) -> Result<NormalForm> {
    if word.len() > cap {
        return Err(Error::OracleCap {
            length: word.len(),
            cap,
        });
    }
    word.check(sys)?;
    let mut current = free_reduce(word.letters());
    'outer: loop {
        // Explore the braid class of `current`; any member with a repeated
        // letter shortens the word and restarts the search.
        let mut seen: HashSet<Vec<usize>> = HashSet::from([current.clone()]);
        let mut queue = VecDeque::from([current.clone()]);
        let mut least = current.clone();
        while let Some(w) = queue.pop_front() {
            if let Some(i) = w.windows(2).position(|p| p[0] == p[1]) {
                let mut shorter = w;
                shorter.drain(i..i + 2);
                current = free_reduce(&shorter);
                continue 'outer;
            }
            if w < least {
                least = w.clone();
            }
            for next in braid_neighbours(sys, &w) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        return Ok(NormalForm::from_reduced(least));
    }
}

fn free_reduce(letters: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(letters.len());
    for &s in letters {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// Words obtained by replacing one alternating factor `sts…` of length
/// `m_st` by `tst…`.
fn braid_neighbours(sys: &CoxeterSystem, w: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..w.len().saturating_sub(1) {
        let (s, t) = (w[i], w[i + 1]);
        if s == t {
            continue;
        }
        let Order::Finite(m) = sys.order(s, t) else {
            continue;
        };
        let m = m as usize;
        if i + m > w.len() {
            continue;
        }
        let alternating = (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t });
        if alternating {
            let mut next = w.to_vec();
            for k in 0..m {
                next[i + k] = if k % 2 == 0 { t } else { s };
            }
            out.push(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_reductions() {
        let a2 = CoxeterSystem::path(&[3]);
        let r = |l: &[usize]| tits_reduce_oracle(&a2, &Word::from(l)).unwrap().letters().to_vec();
        assert_eq!(r(&[0, 0]), Vec::<usize>::new());
        assert_eq!(r(&[0, 1, 0]), vec![0, 1, 0]);
        assert_eq!(r(&[1, 0, 1]), vec![0, 1, 0]);
        assert_eq!(r(&[0, 1, 0, 1]), vec![1, 0]);
    }

    #[test]
    fn cap_is_enforced() {
        let a2 = CoxeterSystem::path(&[3]);
        let long = Word::new(vec![0; 26]);
        assert_eq!(
            tits_reduce_oracle(&a2, &long).unwrap_err(),
            Error::OracleCap { length: 26, cap: 25 }
        );
    }

    #[test]
    fn commuting_generators() {
        let sys = CoxeterSystem::path(&[2, 2]);
        let nf = tits_reduce_oracle(&sys, &Word::from(&[2, 1, 0, 2][..])).unwrap();
        assert_eq!(nf.letters(), &[0, 1]);
    }
}
