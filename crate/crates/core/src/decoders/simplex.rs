//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are in equality form: minimize `c·z` subject to `A z = b`,
//! `z ≥ 0`, with `b ≥ 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Tableau {
    /// Rows of `B⁻¹A`, each followed by the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n_cols: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    /// Finds a basic feasible solution with phase-one artificials, then
    /// removes them together with redundant rows.
    pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational], n_cols: usize) -> Result<Self> {
        let m = a.len();
        let width = n_cols + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
            debug_assert!(!rhs.is_negative());
            let mut r = Vec::with_capacity(width + 1);
            r.extend(row.iter().cloned());
            r.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            r.push(rhs.clone());
            rows.push(r);
        }
        let mut t = Tableau {
            rows,
            basis: (n_cols..width).collect(),
            n_cols: width,
        };
        let cost: Vec<BigRational> = (0..width)
            .map(|j| if j >= n_cols { BigRational::one() } else { BigRational::zero() })
            .collect();
        let allowed = vec![true; width];
        t.optimize(&cost, &allowed)?;
        if t.objective(&cost).is_positive() {
            return Err(Error::Infeasible);
        }
        // drive remaining artificials out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n_cols {
                match (0..n_cols).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut t.rows {
            let rhs = row.pop().unwrap();
            row.truncate(n_cols);
            row.push(rhs);
        }
        t.n_cols = n_cols;
        Ok(t)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Reduced costs `c_j - c_B · column_j`.
    pub fn reduced_costs(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut red = cost[..self.n_cols].to_vec();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (rj, a) in red.iter_mut().zip(row) {
                if !a.is_zero() {
                    *rj -= cb * a;
                }
            }
        }
        red
    }

    fn step(&mut self, cost: &[BigRational], allowed: &[bool]) -> Option<Step> {
        let red = self.reduced_costs(cost);
        let Some(col) = (0..self.n_cols).find(|&j| allowed[j] && red[j].is_negative()) else {
            return Some(Step::Optimal);
        };
        let rhs = self.n_cols;
        let mut best: Option<(BigRational, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[col];
            let better = match &best {
                None => true,
                Some((b, br)) => ratio < *b || (ratio == *b && self.basis[r] < self.basis[*br]),
            };
            if better {
                best = Some((ratio, r));
            }
        }
        match best {
            None => Some(Step::Unbounded),
            Some((_, r)) => {
                self.pivot(r, col);
                None
            }
        }
    }

    /// Minimizes `cost` from the current basis; only `allowed` columns may
    /// enter.
    pub fn optimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> Result<()> {
        loop {
            match self.step(cost, allowed) {
                None => continue,
                Some(Step::Optimal) => return Ok(()),
                Some(Step::Unbounded) => {
                    return Err(Error::Validation("linear program is unbounded".into()))
                }
            }
        }
    }

    /// Current basic solution.
    pub fn solution(&self) -> Vec<BigRational> {
        let mut z = vec![BigRational::zero(); self.n_cols];
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            z[bv] = row[self.n_cols].clone();
        }
        z
    }

    pub fn objective(&self, cost: &[BigRational]) -> BigRational {
        self.rows
            .iter()
            .zip(&self.basis)
            .map(|(row, &bv)| &cost[bv] * &row[self.n_cols])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + s1 = 1, y + s2 = 2, x + y + s3 = 2
        let a = vec![
            vec![q(1), q(0), q(1), q(0), q(0)],
            vec![q(0), q(1), q(0), q(1), q(0)],
            vec![q(1), q(1), q(0), q(0), q(1)],
        ];
        let b = vec![q(1), q(2), q(2)];
        let mut t = Tableau::feasible(&a, &b, 5).unwrap();
        let c = vec![q(-1), q(-1), q(0), q(0), q(0)];
        t.optimize(&c, &[true; 5]).unwrap();
        assert_eq!(t.objective(&c), q(-2));
    }

    #[test]
    fn infeasible_and_redundant() {
        // x + y = 1 and x + y = 2
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(matches!(
            Tableau::feasible(&a, &[q(1), q(2)], 2),
            Err(Error::Infeasible)
        ));
        // duplicated row is dropped
        let t = Tableau::feasible(&a, &[q(1), q(1)], 2).unwrap();
        assert_eq!(t.basis().len(), 1);
    }
}
