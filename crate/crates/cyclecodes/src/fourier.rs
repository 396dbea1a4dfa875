//! Discrete Fourier transforms over `Z_q^n` and the assembled assignments
//! behind the theta-times-LP upper bound.
//!
//! All functions handled here are even in every coordinate, so their
//! transforms are real; the transform is still computed in complex
//! arithmetic and the imaginary residue is checked, not assumed.

use crate::bounds;
use crate::codes::{ExtDist, Word};
use crate::kraw::{self, LpCertificate, Scheme};
use crate::report::CheckItem;
use std::f64::consts::PI;
use std::fmt;

pub const DEFAULT_TABLE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub enum FourierError {
    Domain(String),
    Budget {
        entries: u64,
        budget: u64,
    },
    /// Imaginary residue of a transform exceeded its tolerance.
    NotEven {
        residue: f64,
    },
    /// Energy identity between a table and its transform failed.
    Plancherel {
        relative_error: f64,
    },
    /// An assembled assignment failed one of its defining checks.
    Rejected {
        clause: String,
        violation: f64,
    },
}

impl fmt::Display for FourierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FourierError::Domain(m) => write!(f, "domain error: {m}"),
            FourierError::Budget { entries, budget } => {
                write!(f, "table of {entries} entries exceeds budget {budget}")
            }
            FourierError::NotEven { residue } => {
                write!(f, "transform has imaginary residue {residue:e}")
            }
            FourierError::Plancherel { relative_error } => {
                write!(f, "energy identity violated by {relative_error:e}")
            }
            FourierError::Rejected { clause, violation } => {
                write!(f, "assignment rejected: {clause} violated by {violation:e}")
            }
        }
    }
}

impl std::error::Error for FourierError {}

type Result<T> = std::result::Result<T, FourierError>;

fn domain_text(e: impl std::fmt::Display) -> String {
    e.to_string()
        .trim_start_matches("domain error: ")
        .to_string()
}

fn table_len(q: u16, n: usize, budget: u64) -> Result<usize> {
    if q < 2 || n == 0 {
        return Err(FourierError::Domain("need q >= 2 and n >= 1".into()));
    }
    let entries = (q as u64)
        .checked_pow(n as u32)
        .ok_or(FourierError::Domain("q^n overflows".into()))?;
    if entries > budget {
        return Err(FourierError::Budget { entries, budget });
    }
    Ok(entries as usize)
}

/// Digits of table index `i`, least significant coordinate first.
pub fn word_at(i: usize, q: u16, n: usize) -> Vec<u16> {
    let mut digits = vec![0u16; n];
    let mut rest = i;
    for d in digits.iter_mut() {
        *d = (rest % q as usize) as u16;
        rest /= q as usize;
    }
    digits
}

/// Table index of a digit vector, inverse of [`word_at`].
pub fn index_of(digits: &[u16], q: u16) -> usize {
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// Full transform `fhat(w) = sum_x f(x) exp(2 pi i <w, x> / q)` of a real
/// even table, by one pass per coordinate. Errors if the imaginary residue
/// is not negligible against the real part.
pub fn dft_real(q: u16, n: usize, f: &[f64]) -> Result<Vec<f64>> {
    let len = table_len(q, n, DEFAULT_TABLE_BUDGET)?;
    if f.len() != len {
        return Err(FourierError::Domain(format!(
            "table has {} entries, expected {len}",
            f.len()
        )));
    }
    let qv = q as usize;
    let twiddle: Vec<(f64, f64)> = (0..qv)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / qv as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let mut cur: Vec<(f64, f64)> = f.iter().map(|&v| (v, 0.0)).collect();
    let mut stride = 1usize;
    for _axis in 0..n {
        let mut next = vec![(0.0, 0.0); len];
        for (i, slot) in next.iter_mut().enumerate() {
            let w = (i / stride) % qv;
            let base = i - w * stride;
            let mut re = 0.0;
            let mut im = 0.0;
            for t in 0..qv {
                let (cr, ci) = cur[base + t * stride];
                let (tr, ti) = twiddle[(w * t) % qv];
                re += cr * tr - ci * ti;
                im += cr * ti + ci * tr;
            }
            *slot = (re, im);
        }
        cur = next;
        stride *= qv;
    }
    let max_re = cur.iter().fold(0.0_f64, |a, &(re, _)| a.max(re.abs()));
    let max_im = cur.iter().fold(0.0_f64, |a, &(_, im)| a.max(im.abs()));
    if max_im > 1e-9 * max_re.max(f64::MIN_POSITIVE) {
        return Err(FourierError::NotEven { residue: max_im });
    }
    Ok(cur.into_iter().map(|(re, _)| re).collect())
}

/// A real function on `Z_q^n` together with its transform. Construction
/// verifies the energy identity `q^-n sum fhat^2 = sum f^2`.
#[derive(Clone, Debug)]
pub struct FourierTable {
    q: u16,
    n: usize,
    values: Vec<f64>,
    transform: Vec<f64>,
}

impl FourierTable {
    pub fn new(q: u16, n: usize, values: Vec<f64>) -> Result<FourierTable> {
        let transform = dft_real(q, n, &values)?;
        let qn = (q as f64).powi(n as i32);
        let energy_x: f64 = values.iter().map(|v| v * v).sum();
        let energy_w: f64 = transform.iter().map(|v| v * v).sum::<f64>() / qn;
        let rel = (energy_x - energy_w).abs() / energy_x.max(energy_w).max(f64::MIN_POSITIVE);
        if rel > 1e-9 {
            return Err(FourierError::Plancherel {
                relative_error: rel,
            });
        }
        Ok(FourierTable {
            q,
            n,
            values,
            transform,
        })
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn transform(&self) -> &[f64] {
        &self.transform
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

struct CycleConstants {
    q_prime: f64,
    theta_l: f64,
    /// `1 / (2 cos(pi/q))`
    phi: f64,
    /// the frequency `c = (q-1)/2` at which the one-dimensional transform
    /// of the adjacency assignment vanishes
    c: u16,
}

fn cycle_constants(q: u16) -> Result<CycleConstants> {
    if q < 3 || q % 2 == 0 {
        return Err(FourierError::Domain(format!(
            "odd cycle order >= 3 required, got {q}"
        )));
    }
    let (q_prime, theta_l) = bounds::cycle_params(q as u32)
        .and_then(|p| p.odd())
        .map_err(|e| FourierError::Domain(domain_text(e)))?;
    Ok(CycleConstants {
        q_prime,
        theta_l,
        phi: 1.0 / (2.0 * (PI / q as f64).cos()),
        c: (q - 1) / 2,
    })
}

/// The product assignment `g(x) = prod_j (1_0(x_j) + phi 1_{+-1}(x_j))`
/// whose transform is nonnegative, vanishes exactly on frequencies with a
/// `+-c` digit, and realizes `q^n g(0)/ghat(0) = theta_L^n`. All three
/// facts are asserted on the computed table.
pub fn build_g(q: u16, n: usize) -> Result<FourierTable> {
    let len = table_len(q, n, DEFAULT_TABLE_BUDGET)?;
    let consts = cycle_constants(q)?;
    let mut g1 = vec![0.0; q as usize];
    g1[0] = 1.0;
    g1[1] = consts.phi;
    g1[(q - 1) as usize] = consts.phi;
    let mut values = vec![1.0; len];
    for (i, v) in values.iter_mut().enumerate() {
        for &d in &word_at(i, q, n) {
            *v *= g1[d as usize];
        }
    }
    let table = FourierTable::new(q, n, values)?;
    let ghat0 = table.transform[0];
    let gmax = table.transform.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let min = table.transform.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if min < -1e-12 * gmax.max(1.0) {
        return Err(FourierError::Rejected {
            clause: "ghat-nonneg".into(),
            violation: -min,
        });
    }
    let mut zero_violation = 0.0_f64;
    for (i, &v) in table.transform.iter().enumerate() {
        let has_c = word_at(i, q, n)
            .iter()
            .any(|&d| d == consts.c || d == q - consts.c);
        if has_c && v.abs() > zero_violation {
            zero_violation = v.abs();
        }
    }
    if zero_violation > 1e-12 * ghat0 {
        return Err(FourierError::Rejected {
            clause: "ghat-zero-set".into(),
            violation: zero_violation,
        });
    }
    let qn = (q as f64).powi(n as i32);
    let lovasz = qn * table.values[0] / ghat0;
    let target = consts.theta_l.powi(n as i32);
    let dev = (lovasz - target).abs();
    if dev > 1e-9 * target {
        return Err(FourierError::Rejected {
            clause: "theta-product".into(),
            violation: dev,
        });
    }
    Ok(table)
}

/// Report of comparing the transform of a sphere indicator against its
/// closed form `(2 cos(pi/q))^ell K_ell(u; q')` on the whole orbit `S_u^1`.
#[derive(Clone, Debug)]
pub struct SphereReport {
    pub formula: f64,
    pub max_rel_err: f64,
    pub points_checked: usize,
}

/// Transforms the indicator of `S_ell^c` (words with `ell` digits equal to
/// `+-c` and the rest zero) and compares its value on every point of
/// `S_u^1` with the Krawtchouk closed form.
pub fn verify_sphere_transform(q: u16, n: usize, ell: usize, u: usize) -> Result<SphereReport> {
    let len = table_len(q, n, DEFAULT_TABLE_BUDGET)?;
    if ell > n || u > n {
        return Err(FourierError::Domain(format!("need ell, u <= n = {n}")));
    }
    let consts = cycle_constants(q)?;
    let mut indicator = vec![0.0; len];
    for (i, slot) in indicator.iter_mut().enumerate() {
        let digits = word_at(i, q, n);
        let mut on_sphere = true;
        let mut count = 0usize;
        for &d in &digits {
            if d == 0 {
                continue;
            }
            if d == consts.c || d == q - consts.c {
                count += 1;
            } else {
                on_sphere = false;
                break;
            }
        }
        if on_sphere && count == ell {
            *slot = 1.0;
        }
    }
    let transform = dft_real(q, n, &indicator)?;
    let scheme = Scheme::new(n, consts.q_prime).map_err(|e| FourierError::Domain(e.to_string()))?;
    let kval =
        kraw::kraw_eval(scheme, ell, u as f64).map_err(|e| FourierError::Domain(e.to_string()))?;
    let two_cos = 2.0 * (PI / q as f64).cos();
    let formula = two_cos.powi(ell as i32) * kval;
    let scale0 = two_cos.powi(ell as i32)
        * kraw::kraw_eval(scheme, ell, 0.0).map_err(|e| FourierError::Domain(e.to_string()))?;
    let denom = formula
        .abs()
        .max(1e-12 * scale0.abs())
        .max(f64::MIN_POSITIVE);
    let mut max_rel_err = 0.0_f64;
    let mut points = 0usize;
    for (i, _) in transform.iter().enumerate() {
        let digits = word_at(i, q, n);
        let mut on_s1 = true;
        let mut count = 0usize;
        for &d in &digits {
            if d == 0 {
                continue;
            }
            if d == 1 || d == q - 1 {
                count += 1;
            } else {
                on_s1 = false;
                break;
            }
        }
        if on_s1 && count == u {
            points += 1;
            let rel = (transform[i] - formula).abs() / denom;
            if rel > max_rel_err {
                max_rel_err = rel;
            }
        }
    }
    Ok(SphereReport {
        formula,
        max_rel_err,
        points_checked: points,
    })
}

/// The assembled assignment `f = g * h` for a certificate, with its four
/// defining checks evaluated on the computed tables.
#[derive(Clone, Debug)]
pub struct FAssembly {
    pub f: FourierTable,
    /// `q^n f(0) / fhat(0)`, the certified code-size bound.
    pub bound: f64,
    pub checks: Vec<CheckItem>,
}

/// Builds `f = g * h` from a certificate over the matching scheme and
/// verifies, on the computed tables, that
/// (1) `fhat` is nonnegative up to `1e-8` of its maximum,
/// (2) `f` vanishes (up to `1e-10`) on words at distance `>= d` from 0,
/// (3) `fhat(0) = q^-n ghat(0) hhat(0)` to relative `1e-9`, and
/// (4) `q^n f(0)/fhat(0)` equals `theta_L^n H(0)/Hhat_0` to relative `1e-8`.
pub fn build_f(q: u16, n: usize, cert: &LpCertificate) -> Result<FAssembly> {
    let len = table_len(q, n, DEFAULT_TABLE_BUDGET)?;
    let consts = cycle_constants(q)?;
    if cert.scheme.n != n {
        return Err(FourierError::Domain(format!(
            "certificate length {} does not match n = {n}",
            cert.scheme.n
        )));
    }
    if (cert.scheme.q_prime - consts.q_prime).abs() > 1e-9 * consts.q_prime {
        return Err(FourierError::Domain(format!(
            "certificate parameter {} does not match q'({q}) = {}",
            cert.scheme.q_prime, consts.q_prime
        )));
    }
    let g = build_g(q, n)?;
    let qn = (q as f64).powi(n as i32);
    let two_cos = 2.0 * (PI / q as f64).cos();

    // hhat lives on the c-spheres: hhat_ell = q^n Hhat_ell / (2 cos(pi/q))^ell
    let mut hhat = vec![0.0; len];
    for (i, slot) in hhat.iter_mut().enumerate() {
        let digits = word_at(i, q, n);
        let mut on_spheres = true;
        let mut ell = 0usize;
        for &d in &digits {
            if d == 0 {
                continue;
            }
            if d == consts.c || d == q - consts.c {
                ell += 1;
            } else {
                on_spheres = false;
                break;
            }
        }
        if on_spheres {
            *slot = qn * cert.coeffs[ell] / two_cos.powi(ell as i32);
        }
    }
    let h: Vec<f64> = dft_real(q, n, &hhat)?.iter().map(|v| v / qn).collect();
    let f_values: Vec<f64> = g.values().iter().zip(&h).map(|(a, b)| a * b).collect();
    let f = FourierTable::new(q, n, f_values)?;

    let fhat_max = f.transform().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let fhat_min = f.transform().iter().fold(f64::INFINITY, |a, &v| a.min(v));
    let c1 = CheckItem::new("fhat-nonneg", (-fhat_min).max(0.0), 1e-8 * fhat_max);

    let mut far_violation = 0.0_f64;
    for (i, &v) in f.values().iter().enumerate() {
        let w = Word::new(q, word_at(i, q, n)).expect("digits are in range");
        let far = match w.semimetric_weight() {
            ExtDist::Infinite => true,
            ExtDist::Finite(wt) => wt as usize >= cert.d,
        };
        if far && v > far_violation {
            far_violation = v;
        }
    }
    let c2 = CheckItem::new("far-support", far_violation, 1e-10);

    let expected_zero = g.transform()[0] * cert.coeffs[0];
    let c3 = CheckItem::new(
        "zero-frequency",
        (f.transform()[0] - expected_zero).abs(),
        1e-9 * f.transform()[0].abs().max(f64::MIN_POSITIVE),
    );

    let bound = qn * f.values()[0] / f.transform()[0];
    let scheme = cert.scheme;
    let h0: f64 = (0..=n)
        .map(|ell| cert.coeffs[ell] * kraw::kraw_eval(scheme, ell, 0.0).unwrap())
        .sum();
    let target = consts.theta_l.powi(n as i32) * h0 / cert.coeffs[0];
    let c4 = CheckItem::new(
        "bound-factorization",
        (bound - target).abs(),
        1e-8 * target.abs(),
    );

    let checks = vec![c1, c2, c3, c4];
    if let Some(fail) = checks.iter().find(|c| !c.pass) {
        return Err(FourierError::Rejected {
            clause: fail.name.clone(),
            violation: fail.violation,
        });
    }
    Ok(FAssembly { f, bound, checks })
}
