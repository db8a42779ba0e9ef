//! Dense exact matrices with fraction-free (Bareiss) elimination.

use std::fmt;
use std::sync::Arc;

use super::cyclotomic::{AlgebraicReal, CyclotomicField, Sign};
use crate::error::{Error, Result};
use crate::system::{CoxeterSystem, Subset};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Arc<CyclotomicField>,
    dim: usize,
    entries: Vec<AlgebraicReal>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&AlgebraicReal>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect();
        f.debug_struct("ExactMatrix")
            .field("field", &self.field)
            .field("rows", &rows)
            .finish()
    }
}

impl ExactMatrix {
    pub fn from_fn(
        field: &Arc<CyclotomicField>,
        dim: usize,
        mut f: impl FnMut(usize, usize) -> AlgebraicReal,
    ) -> ExactMatrix {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let x = f(i, j);
                assert_eq!(x.field().order(), field.order(), "entry from a foreign field");
                entries.push(x);
            }
        }
        ExactMatrix {
            field: field.clone(),
            dim,
            entries,
        }
    }

    pub fn identity(field: &Arc<CyclotomicField>, dim: usize) -> ExactMatrix {
        ExactMatrix::from_fn(field, dim, |i, j| {
            if i == j {
                AlgebraicReal::one(field)
            } else {
                AlgebraicReal::zero(field)
            }
        })
    }

    /// Integer matrix, mostly for tests.
    pub fn from_integers(field: &Arc<CyclotomicField>, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_fn(field, rows.len(), |i, j| AlgebraicReal::from_integer(field, rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraicReal {
        &self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == ExactMatrix::identity(&self.field, self.dim)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.dim != other.dim || self.field.order() != other.field.order() {
            return Err(Error::DimensionMismatch);
        }
        let n = self.dim;
        Ok(ExactMatrix::from_fn(&self.field, n, |i, j| {
            let mut acc = AlgebraicReal::zero(&self.field);
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    fn rows(&self) -> Vec<Vec<AlgebraicReal>> {
        self.entries.chunks(self.dim.max(1)).map(<[_]>::to_vec).collect()
    }

    /// Leading principal minors `Δ_1, Δ_2, ...` by Bareiss elimination
    /// without pivoting. Stops after the first zero minor, since the next
    /// step would divide by it.
    pub fn leading_principal_minors(&self) -> Vec<AlgebraicReal> {
        let mut minors = Vec::with_capacity(self.dim);
        self.bareiss_diagonal(|pivot| {
            minors.push(pivot.clone());
            !pivot.is_zero()
        });
        minors
    }

    /// Runs symmetric-position Bareiss; `visit` receives each pivot (the
    /// next leading principal minor) and returns whether to continue.
    fn bareiss_diagonal(&self, mut visit: impl FnMut(&AlgebraicReal) -> bool) {
        let n = self.dim;
        let mut a = self.rows();
        let mut prev_inverse: Option<AlgebraicReal> = None;
        for k in 0..n {
            let pivot = a[k][k].clone();
            if !visit(&pivot) {
                return;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let mut v = &(&pivot * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    if let Some(inv) = &prev_inverse {
                        v = &v * inv;
                    }
                    a[i][j] = v;
                }
            }
            prev_inverse = if pivot.is_one() { None } else { pivot.inverse() };
        }
    }

    /// Fraction-free row echelon form with pivot search; returns the rank and
    /// the determinant (zero when singular).
    fn echelon(&self) -> (usize, AlgebraicReal) {
        let n = self.dim;
        let mut a = self.rows();
        let mut prev_inverse: Option<AlgebraicReal> = None;
        let mut last_pivot = AlgebraicReal::one(&self.field);
        let mut negate = false;
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&p| !a[p][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                negate = !negate;
            }
            let pivot = a[r][c].clone();
            for i in r + 1..n {
                for j in c + 1..n {
                    let mut v = &(&pivot * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                    if let Some(inv) = &prev_inverse {
                        v = &v * inv;
                    }
                    a[i][j] = v;
                }
                a[i][c] = AlgebraicReal::zero(&self.field);
            }
            prev_inverse = if pivot.is_one() { None } else { pivot.inverse() };
            last_pivot = pivot;
            r += 1;
        }
        let det = if r < n {
            AlgebraicReal::zero(&self.field)
        } else if negate {
            -last_pivot
        } else {
            last_pivot
        };
        (r, det)
    }

    pub fn determinant(&self) -> AlgebraicReal {
        self.echelon().1
    }

    pub fn rank(&self) -> usize {
        self.echelon().0
    }
}

/// Gram matrix of the geometric representation restricted to `T`:
/// 1 on the diagonal, `-cos(π/m_st)` off it (so -1 for `m = ∞`).
pub fn gram_matrix(sys: &CoxeterSystem, subset: &Subset) -> Result<ExactMatrix> {
    subset.check(sys.rank())?;
    let geom = sys.geometry();
    let m = subset.members();
    Ok(ExactMatrix::from_fn(geom.field(), m.len(), |i, j| {
        geom.form(m[i], m[j]).clone()
    }))
}

/// All leading principal minors positive.
pub fn is_positive_definite(m: &ExactMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    let mut definite = true;
    m.bareiss_diagonal(|pivot| {
        definite = pivot.sign() == Sign::Positive;
        definite
    });
    Ok(definite)
}

/// Dimension of the kernel over the ambient field.
pub fn nullity(m: &ExactMatrix) -> Result<usize> {
    if !m.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    Ok(m.dim() - m.rank())
}

/// Matrix of `σ_s(v) = v - 2 B(α_s, v) α_s` in the simple-root basis.
pub fn reflection_matrix(sys: &CoxeterSystem, s: usize) -> Result<ExactMatrix> {
    sys.check_generator(s)?;
    let geom = sys.geometry();
    let field = geom.field();
    Ok(ExactMatrix::from_fn(field, sys.rank(), |i, j| {
        let delta = if i == j {
            AlgebraicReal::one(field)
        } else {
            AlgebraicReal::zero(field)
        };
        if i == s {
            &delta - geom.twice_form(s, j)
        } else {
            delta
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::cyclotomic_field;

    fn triangle() -> CoxeterSystem {
        CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap()
    }

    #[test]
    fn gram_examples() {
        let sys = CoxeterSystem::path(&[2]);
        assert!(gram_matrix(&sys, &Subset::full(2)).unwrap().is_identity());

        let a2 = CoxeterSystem::path(&[3]);
        let g = gram_matrix(&a2, &Subset::full(2)).unwrap();
        let f = g.field().clone();
        assert_eq!(*g.get(0, 1), AlgebraicReal::from_ratio(&f, -1, 2));
        assert!(g.get(0, 0).is_one());

        let inf = CoxeterSystem::path(&[0]);
        let g = gram_matrix(&inf, &Subset::full(2)).unwrap();
        assert_eq!(*g.get(1, 0), AlgebraicReal::from_integer(g.field(), -1));
    }

    #[test]
    fn affine_triangle_is_degenerate() {
        let g = gram_matrix(&triangle(), &Subset::full(3)).unwrap();
        assert!(g.determinant().is_zero());
        assert_eq!(nullity(&g).unwrap(), 1);
        assert!(!is_positive_definite(&g).unwrap());
        let f = g.field().clone();
        // (1,1,1) spans the kernel.
        for i in 0..3 {
            let row_sum = (0..3).fold(AlgebraicReal::zero(&f), |acc, j| &acc + g.get(i, j));
            assert!(row_sum.is_zero());
        }
    }

    #[test]
    fn definiteness_examples() {
        let f = cyclotomic_field(1);
        assert!(is_positive_definite(&ExactMatrix::identity(&f, 4)).unwrap());
        assert_eq!(nullity(&ExactMatrix::identity(&f, 4)).unwrap(), 0);

        let h3 = CoxeterSystem::path(&[5, 3]);
        let g = gram_matrix(&h3, &Subset::full(3)).unwrap();
        assert!(is_positive_definite(&g).unwrap());
        assert_eq!(nullity(&g).unwrap(), 0);

        let b2_affine = CoxeterSystem::path(&[4, 4]);
        let g = gram_matrix(&b2_affine, &Subset::full(3)).unwrap();
        assert!(!is_positive_definite(&g).unwrap());
        assert!(g.determinant().is_zero());
        assert_eq!(nullity(&g).unwrap(), 1);

        let minors = gram_matrix(&CoxeterSystem::path(&[3, 3]), &Subset::full(3))
            .unwrap()
            .leading_principal_minors();
        let f = minors[0].field().clone();
        assert_eq!(minors[1], AlgebraicReal::from_ratio(&f, 3, 4));
        assert_eq!(minors[2], AlgebraicReal::from_ratio(&f, 1, 2));
    }

    #[test]
    fn hyperbolic_forms_are_indefinite() {
        let g = gram_matrix(&CoxeterSystem::path(&[7, 3]), &Subset::full(3)).unwrap();
        assert!(!is_positive_definite(&g).unwrap());
        assert_eq!(nullity(&g).unwrap(), 0);
        assert_eq!(g.determinant().sign(), Sign::Negative);
    }

    #[test]
    fn non_symmetric_rejected() {
        let f = cyclotomic_field(1);
        let m = ExactMatrix::from_integers(&f, &[&[1, 2], &[0, 1]]);
        assert_eq!(is_positive_definite(&m), Err(Error::NonSymmetric));
        assert_eq!(nullity(&m), Err(Error::NonSymmetric));
    }

    #[test]
    fn reflections() {
        let rank1 = CoxeterSystem::path(&[]);
        let r = reflection_matrix(&rank1, 0).unwrap();
        assert_eq!(*r.get(0, 0), AlgebraicReal::from_integer(r.field(), -1));

        let inf = CoxeterSystem::path(&[0]);
        let r = reflection_matrix(&inf, 0).unwrap();
        let f = r.field().clone();
        assert_eq!(r, ExactMatrix::from_integers(&f, &[&[-1, 2], &[0, 1]]));
        assert!(r.mul(&r).unwrap().is_identity());
        assert!(reflection_matrix(&inf, 2).is_err());
    }

    #[test]
    fn rotation_orders_are_exact() {
        for m in 2..=6u32 {
            let sys = CoxeterSystem::path(&[m]);
            let s = reflection_matrix(&sys, 0).unwrap();
            let t = reflection_matrix(&sys, 1).unwrap();
            assert!(s.mul(&s).unwrap().is_identity());
            let st = s.mul(&t).unwrap();
            let mut p = st.clone();
            for k in 1..m {
                assert!(!p.is_identity(), "m = {m}, power {k}");
                p = p.mul(&st).unwrap();
            }
            assert!(p.is_identity(), "m = {m}");
        }
    }
}
