//! Explicit theta-function feasibility certificates: the closed-form
//! circulant witness for odd cycles, Schur-product combination, and
//! positive-semidefiniteness checking of the `D - J` conditions.

use crate::bounds;
use crate::codes::{dist, ExtDist, Word};
use crate::fourier::{index_of, word_at, FourierTable};
use crate::report::CheckItem;
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Debug)]
pub enum CertError {
    NonSquare,
    SizeMismatch,
    Domain(String),
    Infeasible { clause: String, violation: f64 },
}

impl fmt::Display for CertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertError::NonSquare => write!(f, "matrix is not square"),
            CertError::SizeMismatch => write!(f, "matrix sizes differ"),
            CertError::Domain(m) => write!(f, "domain error: {m}"),
            CertError::Infeasible { clause, violation } => {
                write!(
                    f,
                    "certificate infeasible: {clause} violated by {violation:e}"
                )
            }
        }
    }
}

impl std::error::Error for CertError {}

type Result<T> = std::result::Result<T, CertError>;

pub const EIGEN_DIM_LIMIT: usize = 2000;

/// Smallest eigenvalue of `(M + M^T)/2`.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(CertError::NonSquare);
    }
    let sym = (m + m.transpose()) * 0.5;
    let eigen = sym.symmetric_eigen();
    Ok(eigen
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// True iff `(M + M^T)/2` is positive semidefinite up to `tol`. Uses a
/// full symmetric eigen-solve below [`EIGEN_DIM_LIMIT`] and a shifted
/// Cholesky factorization above it.
pub fn psd_check(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if m.nrows() != m.ncols() {
        return Err(CertError::NonSquare);
    }
    if m.nrows() <= EIGEN_DIM_LIMIT {
        Ok(min_eigenvalue(m)? >= -tol)
    } else {
        let dim = m.nrows();
        let shifted = (m + m.transpose()) * 0.5 + DMatrix::identity(dim, dim) * tol;
        Ok(shifted.cholesky().is_some())
    }
}

/// The circulant theta witness of an odd cycle: diagonal `d0`, entry `d1`
/// on the two adjacent positions of each row, zero elsewhere.
#[derive(Clone, Copy, Debug)]
pub struct CirculantCert {
    pub q: u32,
    pub d0: f64,
    pub d1: f64,
}

impl CirculantCert {
    /// Eigenvalues of `D - J`, by the shared circulant eigenbasis:
    /// `d0 + 2 d1 cos(2 pi k / q)` minus `q` at `k = 0`.
    pub fn eigenvalues_d_minus_j(&self) -> Vec<f64> {
        let q = self.q as usize;
        (0..q)
            .map(|k| {
                let lam = self.d0 + 2.0 * self.d1 * (2.0 * PI * k as f64 / q as f64).cos();
                if k == 0 {
                    lam - q as f64
                } else {
                    lam
                }
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let q = self.q as usize;
        DMatrix::from_fn(q, q, |i, j| {
            let diff = (i + q - j) % q;
            if diff == 0 {
                self.d0
            } else if diff == 1 || diff == q - 1 {
                self.d1
            } else {
                0.0
            }
        })
    }

    pub fn to_matrix_cert(&self) -> MatrixCert {
        let q = self.q as usize;
        let mut pairs = Vec::new();
        for i in 0..q {
            for j in i + 1..q {
                let diff = (j - i) % q;
                if diff != 1 && diff != q - 1 {
                    pairs.push((i, j, PairRule::Zero));
                }
            }
        }
        MatrixCert {
            matrix: self.to_dense(),
            pairs,
        }
    }
}

/// The optimal circulant witness for `theta_L(C_q)` on an odd cycle:
/// `d0 = q cos(pi/q)/(1 + cos(pi/q))` and `d1 = q/(2(1 + cos(pi/q)))`.
/// Feasibility (`D - J` positive semidefinite, nonnegative entries, zeros
/// off the cycle edges) is verified spectrally before returning.
pub fn lovasz_circulant(q: u32) -> Result<CirculantCert> {
    if q < 3 || q % 2 == 0 {
        return Err(CertError::Domain(format!(
            "odd cycle order >= 3 required, got {q}"
        )));
    }
    let c = (PI / q as f64).cos();
    let cert = CirculantCert {
        q,
        d0: q as f64 * c / (1.0 + c),
        d1: q as f64 / (2.0 * (1.0 + c)),
    };
    let min_analytic = cert
        .eigenvalues_d_minus_j()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min_analytic < -1e-10 {
        return Err(CertError::Infeasible {
            clause: "circulant-spectrum".into(),
            violation: -min_analytic,
        });
    }
    let theta = bounds::cycle_params(q)
        .and_then(|p| p.odd())
        .map_err(|e| {
            CertError::Domain(
                e.to_string()
                    .trim_start_matches("domain error: ")
                    .to_string(),
            )
        })?
        .1;
    if (cert.d0 - theta).abs() > 1e-12 * theta {
        return Err(CertError::Infeasible {
            clause: "diagonal-theta".into(),
            violation: (cert.d0 - theta).abs(),
        });
    }
    Ok(cert)
}

/// Entry constraint attached to a forbidden pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRule {
    /// Entry must vanish (theta_L / theta_z style).
    Zero,
    /// Entry must be nonpositive (Schrijver style).
    NonPos,
}

/// An explicit symmetric matrix witnessing a theta-style bound, together
/// with the list of entry constraints it claims to satisfy.
#[derive(Clone, Debug)]
pub struct MatrixCert {
    pub matrix: DMatrix<f64>,
    pub pairs: Vec<(usize, usize, PairRule)>,
}

impl MatrixCert {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.size()).fold(f64::NEG_INFINITY, |a, i| a.max(self.matrix[(i, i)]))
    }

    /// Re-verifies the entry constraints and `D - J >= 0`; nothing about
    /// the construction is trusted.
    pub fn verify(&self, entry_tol: f64, psd_tol: f64) -> Result<Vec<CheckItem>> {
        let m = self.size();
        if self.matrix.ncols() != m {
            return Err(CertError::NonSquare);
        }
        let mut entry_violation = 0.0_f64;
        for &(i, j, rule) in &self.pairs {
            let v = self.matrix[(i, j)];
            let viol = match rule {
                PairRule::Zero => v.abs(),
                PairRule::NonPos => v.max(0.0),
            };
            entry_violation = entry_violation.max(viol);
        }
        let sym_violation = {
            let mut worst = 0.0_f64;
            for i in 0..m {
                for j in i + 1..m {
                    worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
                }
            }
            worst
        };
        let d_minus_j = &self.matrix - DMatrix::from_element(m, m, 1.0);
        let min_eig = min_eigenvalue(&d_minus_j)?;
        Ok(vec![
            CheckItem::new("entry-rules", entry_violation, entry_tol),
            CheckItem::new("symmetry", sym_violation, entry_tol),
            CheckItem::new("d-minus-j-psd", (-min_eig).max(0.0), psd_tol),
        ])
    }
}

/// `n`-fold tensor (Kronecker) power of a certificate. A composite pair is
/// constrained to zero when any coordinate pair is; nonpositive coordinate
/// rules do not compose and are dropped (the verifier judges the product
/// matrix directly anyway).
pub fn tensor_power(base: &MatrixCert, n: u32) -> Result<MatrixCert> {
    if n == 0 {
        return Err(CertError::Domain("tensor power needs n >= 1".into()));
    }
    let m = base.size();
    let total = (m as u64)
        .checked_pow(n)
        .ok_or(CertError::Domain("size overflow".into()))?;
    if total > 4096 {
        return Err(CertError::Domain(format!(
            "tensor power size {total} too large"
        )));
    }
    let total = total as usize;
    let mut zero_pair = vec![false; m * m];
    for &(i, j, rule) in &base.pairs {
        if rule == PairRule::Zero {
            zero_pair[i * m + j] = true;
            zero_pair[j * m + i] = true;
        }
    }
    let decode = |mut x: usize| -> Vec<usize> {
        let mut digits = Vec::with_capacity(n as usize);
        for _ in 0..n {
            digits.push(x % m);
            x /= m;
        }
        digits
    };
    let matrix = DMatrix::from_fn(total, total, |x, y| {
        let dx = decode(x);
        let dy = decode(y);
        dx.iter()
            .zip(&dy)
            .map(|(&a, &b)| base.matrix[(a, b)])
            .product()
    });
    let mut pairs = Vec::new();
    for x in 0..total {
        let dx = decode(x);
        for y in x + 1..total {
            let dy = decode(y);
            if dx.iter().zip(&dy).any(|(&a, &b)| zero_pair[a * m + b]) {
                pairs.push((x, y, PairRule::Zero));
            }
        }
    }
    Ok(MatrixCert { matrix, pairs })
}

/// Entrywise (Schur) product of two certificates for graphs on the same
/// vertex set; certifies the edge-intersection graph. Pair lists merge by
/// union, a zero rule on either side staying zero. `D - J >= 0` is
/// re-verified on the product, not assumed.
pub fn schur_combine(a: &MatrixCert, b: &MatrixCert) -> Result<MatrixCert> {
    let m = a.size();
    if b.size() != m {
        return Err(CertError::SizeMismatch);
    }
    let matrix = a.matrix.component_mul(&b.matrix);
    let mut rule_map: std::collections::BTreeMap<(usize, usize), PairRule> =
        std::collections::BTreeMap::new();
    for &(i, j, rule) in a.pairs.iter().chain(&b.pairs) {
        let key = (i.min(j), i.max(j));
        rule_map
            .entry(key)
            .and_modify(|r| {
                if rule == PairRule::Zero {
                    *r = PairRule::Zero;
                }
            })
            .or_insert(rule);
    }
    let pairs = rule_map.into_iter().map(|((i, j), r)| (i, j, r)).collect();
    let combined = MatrixCert { matrix, pairs };
    let checks = combined.verify(1e-10 * combined.max_diagonal().max(1.0), 1e-8 * m as f64)?;
    if let Some(fail) = checks.iter().find(|c| !c.pass) {
        return Err(CertError::Infeasible {
            clause: fail.name.clone(),
            violation: fail.violation,
        });
    }
    Ok(combined)
}

/// Theta-style certificate from a translation-invariant assignment:
/// `D(x, y) = q^n f(x - y) / fhat(0)`, which satisfies `D - J >= 0`
/// whenever `fhat >= 0`. Pairs at infinite distance are constrained to
/// zero and pairs at finite distance `>= d` to nonpositive entries.
/// Feasibility is re-verified spectrally before returning.
pub fn cert_from_function(f: &FourierTable, d: ExtDist) -> Result<MatrixCert> {
    let q = f.q();
    let n = f.n();
    let total = f.len();
    if total > 4096 {
        return Err(CertError::Domain(format!(
            "certificate size {total} too large"
        )));
    }
    let fhat0 = f.transform()[0];
    let fhat_max = f.transform().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let fhat_min = f.transform().iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if !(fhat0 > 0.0) {
        return Err(CertError::Infeasible {
            clause: "fhat0-positive".into(),
            violation: -fhat0,
        });
    }
    if fhat_min < -1e-8 * fhat_max {
        return Err(CertError::Infeasible {
            clause: "fhat-nonneg".into(),
            violation: -fhat_min,
        });
    }
    let qn = (q as f64).powi(n as i32);
    let words: Vec<Word> = (0..total)
        .map(|i| Word::new(q, word_at(i, q, n)).expect("digits in range"))
        .collect();
    let matrix = DMatrix::from_fn(total, total, |x, y| {
        let diff = words[x].sub(&words[y]).expect("uniform shape");
        qn * f.values()[index_of(diff.symbols(), q)] / fhat0
    });
    let mut pairs = Vec::new();
    for x in 0..total {
        for y in x + 1..total {
            match dist(&words[x], &words[y]).expect("uniform shape") {
                ExtDist::Infinite => pairs.push((x, y, PairRule::Zero)),
                ExtDist::Finite(v) => {
                    if let ExtDist::Finite(dd) = d {
                        if v >= dd {
                            pairs.push((x, y, PairRule::NonPos));
                        }
                    }
                }
            }
        }
    }
    let cert = MatrixCert { matrix, pairs };
    let checks = cert.verify(1e-10 * cert.max_diagonal().max(1.0), 1e-8 * total as f64)?;
    if let Some(fail) = checks.iter().find(|c| !c.pass) {
        return Err(CertError::Infeasible {
            clause: fail.name.clone(),
            violation: fail.violation,
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{build_f, build_g};
    use crate::kraw::{lp_solve, Scheme};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn psd_check_basics() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert!(psd_check(&id, 1e-12).unwrap());
        let indef = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        assert!(!psd_check(&indef, 1e-8).unwrap());
        let rect = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(psd_check(&rect, 1e-8), Err(CertError::NonSquare)));
    }

    #[test]
    fn circulant_small_cases() {
        let c3 = lovasz_circulant(3).unwrap();
        close(c3.d0, 1.0, 1e-14);
        close(c3.d1, 1.0, 1e-14);
        let dense = c3.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                close(dense[(i, j)], 1.0, 1e-14);
            }
        }
        let c5 = lovasz_circulant(5).unwrap();
        close(c5.d0, 5.0_f64.sqrt(), 1e-12);
        close(c5.d1, 5.0 / (2.0 * (1.0 + (PI / 5.0).cos())), 1e-12);
        close(c5.d1, 1.3819660112501051, 1e-12);
        let c9 = lovasz_circulant(9).unwrap();
        close(c9.d0, 4.3600895814340648, 1e-12);
        assert!(lovasz_circulant(4).is_err());
    }

    #[test]
    fn circulant_feasible_for_all_small_odd_orders() {
        let mut q = 3u32;
        while q <= 99 {
            let cert = lovasz_circulant(q).unwrap();
            let theta = bounds::cycle_params(q).unwrap().odd().unwrap().1;
            close(cert.d0, theta, 1e-12 * theta);
            let analytic_min = cert
                .eigenvalues_d_minus_j()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            assert!(analytic_min >= -1e-10, "q = {q}");
            // dense spectral route agrees with the analytic one
            let mc = cert.to_matrix_cert();
            let checks = mc.verify(1e-10 * cert.d0, 1e-8 * q as f64).unwrap();
            assert!(checks.iter().all(|c| c.pass), "q = {q}");
            q += 2;
        }
    }

    #[test]
    fn circulant_seven_dense_psd() {
        let m = lovasz_circulant(7).unwrap().to_dense();
        let j = DMatrix::from_element(7, 7, 1.0);
        assert!(psd_check(&(m - j), 1e-8).unwrap());
    }

    #[test]
    fn schur_with_all_ones_is_identity_on_entries() {
        let base = lovasz_circulant(5).unwrap().to_matrix_cert();
        let ones = MatrixCert {
            matrix: DMatrix::from_element(5, 5, 1.0),
            pairs: vec![],
        };
        let combined = schur_combine(&base, &ones).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                close(combined.matrix[(i, j)], base.matrix[(i, j)], 1e-14);
            }
        }
        assert_eq!(combined.pairs.len(), base.pairs.len());
    }

    #[test]
    fn schur_of_diagonal_certs_multiplies_diagonals() {
        let a = MatrixCert {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 4.0])),
            pairs: vec![],
        };
        let b = MatrixCert {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![5.0, 2.0])),
            pairs: vec![],
        };
        let c = schur_combine(&a, &b).unwrap();
        close(c.matrix[(0, 0)], 15.0, 1e-14);
        close(c.matrix[(1, 1)], 8.0, 1e-14);
    }

    #[test]
    fn tensor_power_then_schur_product_certifies_intersection() {
        let base = lovasz_circulant(5).unwrap().to_matrix_cert();
        let squared = tensor_power(&base, 2).unwrap();
        assert_eq!(squared.size(), 25);
        let checks = squared
            .verify(1e-10 * squared.max_diagonal(), 1e-8 * 25.0)
            .unwrap();
        assert!(checks.iter().all(|c| c.pass));

        let scheme = Scheme::new(2, 5.0_f64.sqrt()).unwrap();
        let (cert, _) = lp_solve(scheme, 2).unwrap();
        let f = build_f(5, 2, &cert).unwrap();
        let hamming_like = cert_from_function(&f.f, ExtDist::Finite(2)).unwrap();
        let combined = schur_combine(&squared, &hamming_like).unwrap();
        let checks = combined
            .verify(1e-9 * combined.max_diagonal(), 1e-8 * 25.0)
            .unwrap();
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn function_cert_from_origin_indicator() {
        let mut values = vec![0.0; 25];
        values[0] = 1.0;
        let f = FourierTable::new(5, 2, values).unwrap();
        let cert = cert_from_function(&f, ExtDist::Finite(1)).unwrap();
        for i in 0..25 {
            close(cert.matrix[(i, i)], 25.0, 1e-10);
        }
        close(cert.matrix[(0, 1)], 0.0, 1e-12);
    }

    #[test]
    fn function_cert_from_g_matches_circulant() {
        let g = build_g(5, 1).unwrap();
        let cert = cert_from_function(&g, ExtDist::Infinite).unwrap();
        let reference = lovasz_circulant(5).unwrap();
        for i in 0..5usize {
            for j in 0..5usize {
                let diff = (i + 5 - j) % 5;
                let expect = if diff == 0 {
                    reference.d0
                } else if diff == 1 || diff == 4 {
                    reference.d1
                } else {
                    0.0
                };
                close(cert.matrix[(i, j)], expect, 1e-12);
            }
        }
    }

    #[test]
    fn function_cert_from_assembled_f() {
        let scheme = Scheme::new(2, 5.0_f64.sqrt()).unwrap();
        let (lp_cert, _) = lp_solve(scheme, 2).unwrap();
        let built = build_f(5, 2, &lp_cert).unwrap();
        let cert = cert_from_function(&built.f, ExtDist::Finite(2)).unwrap();
        close(cert.max_diagonal(), built.bound, 1e-9 * built.bound);
    }

    #[test]
    fn function_cert_rejects_negative_transform() {
        // an odd-ball table whose transform goes negative
        let mut values = vec![0.0; 5];
        values[1] = 1.0;
        values[4] = 1.0;
        let f = FourierTable::new(5, 1, values).unwrap();
        assert!(matches!(
            cert_from_function(&f, ExtDist::Finite(1)),
            Err(CertError::Infeasible { .. })
        ));
    }
}
