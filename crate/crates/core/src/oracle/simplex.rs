//! Dense revised simplex for `max c.z` subject to `a_i.z <= b_i`, `z` free,
//! `b >= 0`, run on the dual `min b.u` with `sum u_i a_i = c`, `u >= 0`.
//!
//! A basis is a set of `dim` row indices. Its dual solution solves
//! `A_B^T u = c`; its primal point solves `A_B z = b_B`. The primal slacks
//! are the dual reduced costs, so the most violated constraint enters.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) trait Rows {
    fn dim(&self) -> usize;
    fn count(&self) -> usize;
    fn row(&self, i: usize) -> DVector<f64>;
    fn rhs(&self, i: usize) -> f64;
    /// `b_i - a_i.z` for every row.
    fn slacks(&self, z: &DVector<f64>) -> Vec<f64>;
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub z: DVector<f64>,
    pub basis: Vec<usize>,
    pub slacks: Vec<f64>,
    pub iterations: usize,
}

const OPT_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-11;
const MAX_ITER: usize = 50_000;
const STALL_LIMIT: usize = 30;

fn basis_matrix(rows: &impl Rows, basis: &[usize]) -> DMatrix<f64> {
    let d = rows.dim();
    let mut m = DMatrix::zeros(d, d);
    for (r, &i) in basis.iter().enumerate() {
        m.set_row(r, &rows.row(i).transpose());
    }
    m
}

/// Dual multipliers `u_B` of a basis, or `None` if it is numerically singular.
pub(crate) fn multipliers(rows: &impl Rows, basis: &[usize], c: &DVector<f64>) -> Option<DVector<f64>> {
    let m = basis_matrix(rows, basis);
    let sv = m.singular_values();
    if sv.min() <= 1e-10 * sv.max() {
        return None;
    }
    m.transpose().lu().solve(c)
}

/// Runs the simplex from a dual-feasible basis.
pub(crate) fn solve(rows: &impl Rows, c: &DVector<f64>, mut basis: Vec<usize>) -> Result<Solution> {
    let d = rows.dim();
    if basis.len() != d {
        return Err(Error::Lp(format!("basis has {} rows, need {d}", basis.len())));
    }
    let mut stall = 0;
    for iterations in 0..MAX_ITER {
        let a_b = basis_matrix(rows, &basis);
        let lu = a_b.clone().lu();
        let b_b = DVector::from_iterator(d, basis.iter().map(|&i| rows.rhs(i)));
        let z = lu
            .solve(&b_b)
            .ok_or_else(|| Error::Lp(format!("singular basis at pivot {iterations}")))?;
        let lu_t = a_b.transpose().lu();
        let u = lu_t
            .solve(c)
            .ok_or_else(|| Error::Lp("singular basis".into()))?;
        let slacks = rows.slacks(&z);

        let bland = stall >= STALL_LIMIT;
        let entering = if bland {
            slacks.iter().position(|&s| s < -OPT_TOL)
        } else {
            slacks
                .iter()
                .enumerate()
                .filter(|(_, &s)| s < -OPT_TOL)
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
        };
        let Some(q) = entering else {
            return Ok(Solution { z, basis, slacks, iterations });
        };

        let w = lu_t
            .solve(&rows.row(q))
            .ok_or_else(|| Error::Lp("singular basis".into()))?;
        let wmax = w.amax();
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..d {
            if w[r] <= PIVOT_TOL * wmax.max(1.0) {
                continue;
            }
            let ratio = u[r].max(0.0) / w[r];
            leave = match leave {
                None => Some((r, ratio)),
                Some((lr, lratio)) => {
                    let tie = (ratio - lratio).abs() <= 1e-12 * lratio.abs().max(1e-300);
                    let better = if tie {
                        if bland { basis[r] < basis[lr] } else { w[r] > w[lr] }
                    } else {
                        ratio < lratio
                    };
                    if better { Some((r, ratio)) } else { Some((lr, lratio)) }
                }
            };
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::Lp("dual unbounded: primal infeasible".into()));
        };
        if ratio <= 1e-14 {
            stall += 1;
        } else {
            stall = 0;
        }
        basis[r] = q;
    }
    Err(Error::Lp(format!("no convergence after {MAX_ITER} pivots")))
}
