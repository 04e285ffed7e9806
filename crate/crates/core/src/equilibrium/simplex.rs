//! Exact zero-sum matrix games via a rational simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Optimal mixed strategies of a matrix game. The row player maximizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSolution {
    pub value: Rational,
    pub row: Vec<Rational>,
    pub col: Vec<Rational>,
}

/// Solves `max_x min_y xᵀ M y`. The matrix must be nonempty and
/// rectangular.
///
/// After shifting every entry to at least one, the column player's problem
/// becomes `max Σw  s.t.  M w <= 1, w >= 0` with value `1 / Σw`; the row
/// strategy is read off the duals of that LP.
pub fn solve_zero_sum(m: &[Vec<Rational>]) -> MatrixSolution {
    let rows = m.len();
    let cols = m[0].len();
    let min = m.iter().flatten().min().expect("nonempty matrix").clone();
    let shift = Rational::one() - &min;

    // tableau: rows x (cols + rows slack + rhs)
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, row) in m.iter().enumerate() {
        let mut r = vec![Rational::zero(); width];
        for (j, e) in row.iter().enumerate() {
            r[j] = e + &shift;
        }
        r[cols + i] = Rational::one();
        r[width - 1] = Rational::one();
        t.push(r);
    }
    // reduced costs c_j - z_j; the last entry holds -objective
    let mut obj = vec![Rational::zero(); width];
    obj[..cols].iter_mut().for_each(|c| *c = Rational::one());
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][width - 1] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let leave = leave.expect("the shifted column LP is bounded");
        pivot(&mut t, &mut obj, leave, enter);
        basis[leave] = enter;
    }

    let mut w = vec![Rational::zero(); cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            w[b] = t[i][width - 1].clone();
        }
    }
    let total: Rational = w.iter().sum();
    let shifted_value = total.recip();
    let col: Vec<Rational> = w.iter().map(|x| x * &shifted_value).collect();
    let row: Vec<Rational> = (0..rows).map(|i| -&obj[cols + i] * &shifted_value).collect();
    MatrixSolution { value: shifted_value - shift, row, col }
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], leave: usize, enter: usize) {
    let p = t[leave][enter].clone();
    t[leave].iter_mut().for_each(|x| *x /= &p);
    let pivot_row = t[leave].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == leave || row[enter].is_zero() {
            continue;
        }
        let f = row[enter].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    let f = obj[enter].clone();
    for (x, y) in obj.iter_mut().zip(&pivot_row) {
        if !y.is_zero() {
            *x -= &f * y;
        }
    }
}
