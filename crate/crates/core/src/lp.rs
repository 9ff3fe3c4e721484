//! Exact rational linear-programming feasibility.
//!
//! A small two-phase simplex over `BigRational` with Bland's pivoting rule,
//! which guarantees termination and makes the computation deterministic.
//! Only feasibility (with a feasible point as witness) is needed by this
//! crate, so no objective interface is exposed.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Find `x >= 0` with `a * x = b`, or `None` when the system is infeasible.
///
/// `a` is row-major, all rows of equal length. The returned point satisfies
/// the system exactly; callers are expected to re-verify it against their
/// original constraints.
pub fn solve_eq_nonneg(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row/rhs count mismatch");
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![]);
    }

    // Tableau columns: n structural variables, then m artificial variables,
    // then the right-hand side. Rows are normalized to b >= 0 so that the
    // artificial basis is feasible for phase one.
    let cols = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "ragged constraint matrix");
        let negate = b[i].is_negative();
        let mut row: Vec<BigRational> = Vec::with_capacity(cols);
        for j in 0..n {
            row.push(if negate { -&a[i][j] } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if negate { -&b[i] } else { b[i].clone() });
        t.push(row);
    }

    // Phase-one objective: minimize the sum of artificials. The objective
    // row starts as minus the sum of all constraint rows, which prices the
    // artificial basis at zero.
    let mut obj = vec![BigRational::zero(); cols];
    for row in &t {
        for (o, x) in obj.iter_mut().zip(row) {
            *o -= x;
        }
    }
    for k in 0..m {
        obj[n + k] = BigRational::zero();
    }

    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering variable is the lowest-index column with a
        // negative reduced cost.
        let entering = match (0..n + m).find(|&j| obj[j].is_negative()) {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties go to the row whose basic variable has the
        // lowest index (Bland again).
        let mut leaving: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[cols - 1] / &row[entering];
            let replace = match &best {
                None => true,
                Some(cur) => {
                    ratio < *cur || (ratio == *cur && basis[i] < basis[leaving.unwrap()])
                }
            };
            if replace {
                best = Some(ratio);
                leaving = Some(i);
            }
        }
        let leaving = leaving?; // unbounded phase-one cannot happen, but be safe
        // Pivot.
        let pivot = t[leaving][entering].clone();
        for x in t[leaving].iter_mut() {
            *x = &*x / &pivot;
        }
        let pivot_row = t[leaving].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == leaving || row[entering].is_zero() {
                continue;
            }
            let factor = row[entering].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &factor * p;
            }
        }
        if !obj[entering].is_zero() {
            let factor = obj[entering].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x = &*x - &factor * p;
            }
        }
        basis[leaving] = entering;
    }

    // Feasible iff every artificial variable sits at zero.
    let objective_value = -obj[cols - 1].clone();
    if !objective_value.is_zero() {
        return None;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][cols - 1].clone();
        } else if !t[i][cols - 1].is_zero() {
            // Artificial stuck in the basis at a nonzero level.
            return None;
        }
    }

    // Defensive re-check of the solution against the input system.
    for (row, rhs) in a.iter().zip(b) {
        let lhs: BigRational = row.iter().zip(&x).map(|(c, v)| c * v).sum();
        if lhs != *rhs {
            return None;
        }
    }
    Some(x)
}

/// Find an unrestricted `x` with `rows[i] . x >= rhs[i]` for every
/// constraint, or `None` when infeasible.
///
/// Free variables are split into differences of nonnegative ones and each
/// inequality gets a slack, reducing to [`solve_eq_nonneg`].
pub fn solve_ge_free(
    constraints: &[(Vec<BigRational>, BigRational)],
    nvars: usize,
) -> Option<Vec<BigRational>> {
    let m = constraints.len();
    let total = 2 * nvars + m;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    for (i, (coeffs, rhs)) in constraints.iter().enumerate() {
        assert_eq!(coeffs.len(), nvars, "constraint arity mismatch");
        let mut row = vec![BigRational::zero(); total];
        for (j, c) in coeffs.iter().enumerate() {
            row[2 * j] = c.clone();
            row[2 * j + 1] = -c;
        }
        row[2 * nvars + i] = -BigRational::one(); // surplus: coeffs.x - s = rhs
        a.push(row);
        b.push(rhs.clone());
    }
    let sol = solve_eq_nonneg(&a, &b)?;
    let x: Vec<BigRational> = (0..nvars)
        .map(|j| &sol[2 * j] - &sol[2 * j + 1])
        .collect();
    // Re-verify in the original formulation.
    for (coeffs, rhs) in constraints {
        let lhs: BigRational = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
        if lhs < *rhs {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn row(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn feasible_equality_system() {
        // x + y = 3, x - y = 1 has the nonnegative solution (2, 1).
        let a = vec![row(&[1, 1]), row(&[1, -1])];
        let b = vec![q(3), q(1)];
        let x = solve_eq_nonneg(&a, &b).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn infeasible_equality_system() {
        // x + y = -1 has no nonnegative solution.
        let a = vec![row(&[1, 1])];
        let b = vec![q(-1)];
        assert!(solve_eq_nonneg(&a, &b).is_none());
    }

    #[test]
    fn infeasible_contradictory_rows() {
        let a = vec![row(&[1, 0]), row(&[1, 0])];
        let b = vec![q(1), q(2)];
        assert!(solve_eq_nonneg(&a, &b).is_none());
    }

    #[test]
    fn degenerate_zero_row() {
        let a = vec![row(&[0, 0])];
        assert!(solve_eq_nonneg(&a, &[q(0)]).is_some());
        assert!(solve_eq_nonneg(&a, &[q(1)]).is_none());
    }

    #[test]
    fn free_variable_inequalities() {
        // x >= 1 and -x >= -3 (i.e. 1 <= x <= 3).
        let cons = vec![(row(&[1]), q(1)), (row(&[-1]), q(-3))];
        let x = solve_ge_free(&cons, 1).unwrap();
        assert!(x[0] >= q(1) && x[0] <= q(3));

        // x >= 1 and -x >= 0: empty.
        let cons = vec![(row(&[1]), q(1)), (row(&[-1]), q(0))];
        assert!(solve_ge_free(&cons, 1).is_none());
    }

    #[test]
    fn free_variables_may_be_negative() {
        // x <= -2 written as -x >= 2.
        let cons = vec![(row(&[-1]), q(2))];
        let x = solve_ge_free(&cons, 1).unwrap();
        assert!(x[0] <= q(-2));
    }

    #[test]
    fn cone_membership_style_system() {
        // Is (1, 1) a nonnegative combination of (1, 0) and (0, 1)? Yes.
        let a = vec![row(&[1, 0]), row(&[0, 1])];
        let b = vec![q(1), q(1)];
        assert!(solve_eq_nonneg(&a, &b).is_some());

        // Is (1, -1) such a combination? No.
        let b = vec![q(1), q(-1)];
        assert!(solve_eq_nonneg(&a, &b).is_none());
    }
}
