//! Exact arithmetic for the geometric representation: the real cyclotomic
//! field holding every `cos(π/m_st)`, dense exact matrices, and the bilinear
//! form `B` of a Coxeter system.

mod approx;
mod cyclotomic;
mod matrix;

use std::sync::Arc;

pub use cyclotomic::{cos_pi_over, cyclotomic_field, sign_of, AlgebraicReal, CyclotomicField, Enclosure, Sign};
pub use matrix::{gram_matrix, is_positive_definite, nullity, reflection_matrix, ExactMatrix};

use crate::system::{CoxeterSystem, Order};

/// `N = lcm(2 m_st)` over the finite off-diagonal orders, or 1 if there are none.
pub fn ambient_order(sys: &CoxeterSystem) -> u64 {
    let mut n = 1u64;
    for s in 0..sys.rank() {
        for t in s + 1..sys.rank() {
            if let Order::Finite(m) = sys.order(s, t) {
                n = num_integer::lcm(n, 2 * m as u64);
            }
        }
    }
    n
}

/// The bilinear form `B_st = -cos(π/m_st)` of a system, in its ambient field.
pub struct Geometry {
    field: Arc<CyclotomicField>,
    rank: usize,
    form: Vec<AlgebraicReal>,
    twice_form: Vec<AlgebraicReal>,
    neighbours: Vec<Vec<usize>>,
}

impl Geometry {
    pub(crate) fn new(sys: &CoxeterSystem) -> Geometry {
        let field = cyclotomic_field(ambient_order(sys));
        let rank = sys.rank();
        let mut form = Vec::with_capacity(rank * rank);
        for s in 0..rank {
            for t in 0..rank {
                let entry = if s == t {
                    AlgebraicReal::one(&field)
                } else {
                    -cos_pi_over(&field, sys.order(s, t)).expect("ambient field contains every cos(pi/m)")
                };
                form.push(entry);
            }
        }
        let twice_form = form.iter().map(|b| b.scale(2)).collect();
        let neighbours = (0..rank)
            .map(|s| (0..rank).filter(|&t| t != s && !form[s * rank + t].is_zero()).collect())
            .collect();
        Geometry {
            field,
            rank,
            form,
            twice_form,
            neighbours,
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `B(α_s, α_t)`.
    pub fn form(&self, s: usize, t: usize) -> &AlgebraicReal {
        &self.form[s * self.rank + t]
    }

    /// `2 B(α_s, α_t)`.
    pub fn twice_form(&self, s: usize, t: usize) -> &AlgebraicReal {
        &self.twice_form[s * self.rank + t]
    }

    /// Generators `t ≠ s` not orthogonal to `s`.
    pub fn neighbours(&self, s: usize) -> &[usize] {
        &self.neighbours[s]
    }
}
