//! Dense two-phase simplex for the small linear programs behind the
//! certificate machinery.
//!
//! Solves `min c.x  s.t.  A x <= b, x >= 0` with Bland's anti-cycling rule.
//! Basis systems are refactorized from the original data on every
//! iteration and all linear algebra runs in double-double arithmetic: the
//! scheme matrices at length 40 are conditioned beyond what plain f64
//! factorization can represent, and problem sizes here are small enough
//! that the extended precision costs nothing noticeable.

use crate::dd::Dd;
use std::fmt;

/// Pivot eligibility threshold.
const PIVOT_TOL: f64 = 1e-11;
const MAX_ITERS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum SimplexError {
    Infeasible {
        phase1_objective: f64,
        iterations: usize,
    },
    Unbounded {
        iterations: usize,
    },
    IterationLimit {
        iterations: usize,
    },
    /// A basis matrix could not be factorized; numerical failure.
    SingularBasis {
        iterations: usize,
    },
}

impl fmt::Display for SimplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplexError::Infeasible {
                phase1_objective,
                iterations,
            } => write!(
                f,
                "infeasible (phase-1 objective {phase1_objective:e} after {iterations} iterations)"
            ),
            SimplexError::Unbounded { iterations } => {
                write!(f, "unbounded after {iterations} iterations")
            }
            SimplexError::IterationLimit { iterations } => {
                write!(f, "no convergence within {iterations} iterations")
            }
            SimplexError::SingularBasis { iterations } => {
                write!(f, "singular basis after {iterations} iterations")
            }
        }
    }
}

impl std::error::Error for SimplexError {}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// LU factorization with partial pivoting, `P A = L U`, in double-double.
struct Lu {
    m: usize,
    /// Unit lower triangle below the diagonal, U on and above it.
    data: Vec<Dd>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<Dd>, m: usize) -> Option<Lu> {
        let mut perm: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let mut pivot_row = k;
            let mut pivot_mag = a[perm[k] * m + k].abs().value();
            for r in (k + 1)..m {
                let mag = a[perm[r] * m + k].abs().value();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return None;
            }
            perm.swap(k, pivot_row);
            let pivot = a[perm[k] * m + k];
            for r in (k + 1)..m {
                let factor = a[perm[r] * m + k] / pivot;
                a[perm[r] * m + k] = factor;
                for c in (k + 1)..m {
                    let upd = a[perm[k] * m + c] * factor;
                    a[perm[r] * m + c] = a[perm[r] * m + c] - upd;
                }
            }
        }
        Some(Lu { m, data: a, perm })
    }

    fn solve(&self, b: &[Dd]) -> Vec<Dd> {
        let m = self.m;
        let mut y = vec![Dd::ZERO; m];
        for i in 0..m {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc = acc - self.data[self.perm[i] * m + j] * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Dd::ZERO; m];
        for i in (0..m).rev() {
            let mut acc = y[i];
            for j in (i + 1)..m {
                acc = acc - self.data[self.perm[i] * m + j] * x[j];
            }
            x[i] = acc / self.data[self.perm[i] * m + i];
        }
        x
    }
}

struct Program {
    /// Column-major constraint matrix: structural | slack | artificial.
    cols: Vec<Vec<f64>>,
    rhs: Vec<Dd>,
    basis: Vec<usize>,
    n_art_start: usize,
    iterations: usize,
}

impl Program {
    fn m(&self) -> usize {
        self.rhs.len()
    }

    fn basis_lu(&self, transpose: bool) -> Result<Lu, SimplexError> {
        let m = self.m();
        let mut data = vec![Dd::ZERO; m * m];
        for (k, &col) in self.basis.iter().enumerate() {
            for i in 0..m {
                let v = Dd::from(self.cols[col][i]);
                if transpose {
                    data[k * m + i] = v;
                } else {
                    data[i * m + k] = v;
                }
            }
        }
        Lu::factor(data, m).ok_or(SimplexError::SingularBasis {
            iterations: self.iterations,
        })
    }

    fn column_dd(&self, j: usize) -> Vec<Dd> {
        self.cols[j].iter().map(|&v| Dd::from(v)).collect()
    }

    /// One Bland step for the cost vector `c`; Ok(false) at optimality.
    /// Columns at or beyond `ban_from` never enter.
    fn step(&mut self, c: &[f64], ban_from: usize) -> Result<bool, SimplexError> {
        let m = self.m();
        let lu = self.basis_lu(false)?;
        let lu_t = self.basis_lu(true)?;
        let c_basis: Vec<Dd> = self.basis.iter().map(|&j| Dd::from(c[j])).collect();
        let y = lu_t.solve(&c_basis);

        let mut entering = None;
        for j in 0..ban_from {
            if self.basis.contains(&j) {
                continue;
            }
            let mut dot = Dd::ZERO;
            for i in 0..m {
                dot = dot + y[i] * Dd::from(self.cols[j][i]);
            }
            let reduced = (Dd::from(c[j]) - dot).value();
            if reduced < -PIVOT_TOL * (1.0 + c[j].abs()) {
                entering = Some(j);
                break;
            }
        }
        let enter = match entering {
            Some(j) => j,
            None => return Ok(false),
        };

        let w = lu.solve(&self.column_dd(enter));
        let x_basic = lu.solve(&self.rhs);
        let mut best: Option<(f64, usize, usize)> = None; // (ratio, basis var, row)
        for i in 0..m {
            let wi = w[i].value();
            if wi > PIVOT_TOL {
                let ratio = (x_basic[i].value().max(0.0)) / wi;
                let candidate = (ratio, self.basis[i], i);
                best = match best {
                    None => Some(candidate),
                    Some(cur) => {
                        let eps = 1e-12 * (1.0 + cur.0.abs());
                        if ratio < cur.0 - eps
                            || ((ratio - cur.0).abs() <= eps && candidate.1 < cur.1)
                        {
                            Some(candidate)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
        match best {
            None => Err(SimplexError::Unbounded {
                iterations: self.iterations,
            }),
            Some((_, _, row)) => {
                self.basis[row] = enter;
                self.iterations += 1;
                Ok(true)
            }
        }
    }

    fn optimize(&mut self, c: &[f64], ban_from: usize) -> Result<(), SimplexError> {
        loop {
            if self.iterations >= MAX_ITERS {
                return Err(SimplexError::IterationLimit {
                    iterations: self.iterations,
                });
            }
            if !self.step(c, ban_from)? {
                return Ok(());
            }
        }
    }

    fn basic_values(&self) -> Result<Vec<Dd>, SimplexError> {
        Ok(self.basis_lu(false)?.solve(&self.rhs))
    }
}

/// Minimizes `c.x` subject to `A x <= b` and `x >= 0`.
pub fn solve_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<Solution, SimplexError> {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    for row in a {
        assert_eq!(row.len(), n);
    }
    if m == 0 {
        // no constraints: the origin is optimal unless some cost is negative
        if (0..n).any(|j| c[j] < -PIVOT_TOL) {
            return Err(SimplexError::Unbounded { iterations: 0 });
        }
        return Ok(Solution {
            x: vec![0.0; n],
            objective: 0.0,
            iterations: 0,
        });
    }

    // columns: structural | slacks | artificials, rows negated so rhs >= 0
    let needs_art: Vec<bool> = b.iter().map(|&bi| bi < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let ncols = n + m + n_art;
    let mut cols = vec![vec![0.0; m]; ncols];
    let mut rhs = vec![Dd::ZERO; m];
    let mut basis = Vec::with_capacity(m);
    let mut art_col = n + m;
    for i in 0..m {
        let sign = if needs_art[i] { -1.0 } else { 1.0 };
        for j in 0..n {
            cols[j][i] = sign * a[i][j];
        }
        cols[n + i][i] = sign;
        rhs[i] = Dd::from(sign * b[i]);
        if needs_art[i] {
            cols[art_col][i] = 1.0;
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(n + i);
        }
    }

    let mut prog = Program {
        cols,
        rhs,
        basis,
        n_art_start: n + m,
        iterations: 0,
    };

    if n_art > 0 {
        let mut c1 = vec![0.0; ncols];
        for slot in c1.iter_mut().skip(prog.n_art_start) {
            *slot = 1.0;
        }
        prog.optimize(&c1, prog.n_art_start)?;
        let values = prog.basic_values()?;
        let obj1: f64 = (0..m)
            .filter(|&i| prog.basis[i] >= prog.n_art_start)
            .map(|i| values[i].value().max(0.0))
            .sum();
        let scale = 1.0 + b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if obj1 > 1e-8 * scale {
            return Err(SimplexError::Infeasible {
                phase1_objective: obj1,
                iterations: prog.iterations,
            });
        }
        // swap zero-level artificials out of the basis where the row
        // admits any usable non-artificial pivot
        for row in 0..m {
            if prog.basis[row] < prog.n_art_start {
                continue;
            }
            let lu_t = prog.basis_lu(true)?;
            let mut e_r = vec![Dd::ZERO; m];
            e_r[row] = Dd::ONE;
            let u = lu_t.solve(&e_r);
            let mut best: Option<(f64, usize)> = None;
            for j in 0..prog.n_art_start {
                if prog.basis.contains(&j) {
                    continue;
                }
                let mut t = Dd::ZERO;
                for i in 0..m {
                    t = t + u[i] * Dd::from(prog.cols[j][i]);
                }
                let mag = t.value().abs();
                if mag > PIVOT_TOL && best.is_none_or(|(bm, _)| mag > bm) {
                    best = Some((mag, j));
                }
            }
            if let Some((_, j)) = best {
                prog.basis[row] = j;
                prog.iterations += 1;
            }
        }
    }

    let mut c2 = vec![0.0; ncols];
    c2[..n].copy_from_slice(c);
    prog.optimize(&c2, prog.n_art_start)?;

    let values = prog.basic_values()?;
    let mut x = vec![0.0; n];
    for i in 0..m {
        if prog.basis[i] < n {
            x[prog.basis[i]] = values[i].value().max(0.0);
        }
    }
    let objective = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(Solution {
        x,
        objective,
        iterations: prog.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn simple_maximization_as_min() {
        // max x1 + x2 s.t. x1 + 2 x2 <= 4, 3 x1 + x2 <= 6
        let sol = solve_min(
            &[-1.0, -1.0],
            &[vec![1.0, 2.0], vec![3.0, 1.0]],
            &[4.0, 6.0],
        )
        .unwrap();
        close(sol.objective, -2.8, 1e-12);
        close(sol.x[0], 1.6, 1e-12);
        close(sol.x[1], 1.2, 1e-12);
    }

    #[test]
    fn phase_one_with_negative_rhs() {
        // min x1 s.t. -x1 <= -3  (x1 >= 3)
        let sol = solve_min(&[1.0], &[vec![-1.0]], &[-3.0]).unwrap();
        close(sol.objective, 3.0, 1e-12);
    }

    #[test]
    fn mixed_constraints() {
        // min 2 x1 + x2 s.t. x1 + x2 >= 2, x1 + 3 x2 <= 6
        let sol = solve_min(
            &[2.0, 1.0],
            &[vec![-1.0, -1.0], vec![1.0, 3.0]],
            &[-2.0, 6.0],
        )
        .unwrap();
        close(sol.objective, 2.0, 1e-12); // x = (0, 2)
        close(sol.x[1], 2.0, 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        // x1 <= 1 and x1 >= 2
        let err = solve_min(&[1.0], &[vec![1.0], vec![-1.0]], &[1.0, -2.0]).unwrap_err();
        assert!(matches!(err, SimplexError::Infeasible { .. }));
    }

    #[test]
    fn detects_unbounded() {
        // min -x1 with only an irrelevant constraint
        let err = solve_min(&[-1.0, 0.0], &[vec![0.0, 1.0]], &[1.0]).unwrap_err();
        assert!(matches!(err, SimplexError::Unbounded { .. }));
        assert!(matches!(
            solve_min(&[-1.0], &[], &[]),
            Err(SimplexError::Unbounded { .. })
        ));
    }

    #[test]
    fn no_constraints_at_origin() {
        let sol = solve_min(&[1.0, 2.0], &[], &[]).unwrap();
        close(sol.objective, 0.0, 0.0);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling-prone instance; Bland's rule must terminate
        let sol = solve_min(
            &[-0.75, 150.0, -0.02, 6.0],
            &[
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        close(sol.objective, -0.05, 1e-9);
    }
}
