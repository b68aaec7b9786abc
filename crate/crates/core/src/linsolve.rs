//! Exact linear combinations of polynomials.

use std::collections::BTreeMap;

use crate::algebra::{GradedPoly, Monomial};
use crate::rational::Q;

/// Find rationals `x` with `Σ x_i basis_i = target`, if any exist.
///
/// Gaussian elimination on the coefficient matrix indexed by monomials.
pub fn solve_combination(basis: &[GradedPoly], target: &GradedPoly) -> Option<Vec<Q>> {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in basis.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m).or_insert(n);
        }
    }
    let n = basis.len();
    let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); n + 1]; index.len()];
    for (j, p) in basis.iter().enumerate() {
        for (m, c) in p.terms() {
            rows[index[m]][j] = c.clone();
        }
    }
    for (m, c) in target.terms() {
        rows[index[m]][n] = c.clone();
    }

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for k in col..=n {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= &d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_rejects() {
        let one = GradedPoly::one();
        let two = GradedPoly::from(2);
        assert_eq!(solve_combination(&[two.clone()], &one), Some(vec![Q::new(1, 2)]));
        assert_eq!(solve_combination(&[], &one), None);
        assert_eq!(solve_combination(&[], &GradedPoly::zero()), Some(vec![]));
    }
}
