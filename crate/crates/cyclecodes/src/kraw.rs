//! Krawtchouk polynomials with a real (typically non-integer) alphabet
//! parameter, the finite-length linear program over the associated scheme,
//! feasible-polynomial certificates and sound certificate checking.
//!
//! Two independent evaluation routes are kept side by side: the three-term
//! recurrence in the degree (the primary path) and the explicit
//! falling-factorial sum (the cross-check oracle). Both accumulate in
//! double-double arithmetic; near the top degrees the wanted solution of
//! the recurrence is exponentially smaller than the intermediates it is
//! assembled from, and plain f64 would lose it.

use crate::bounds;
use crate::dd::Dd;
use crate::simplex::{self, SimplexError};
use std::fmt;
use std::io::{BufRead, Write as IoWrite};

#[derive(Clone, Debug)]
pub enum KrawError {
    Domain(String),
    /// Bisection bracket failed to change sign; numerical failure.
    NoSignChange {
        ell: usize,
    },
    /// No admissible polynomial degree for the requested distance.
    InfeasibleDegree {
        d: usize,
    },
    Lp(SimplexError),
    /// A certificate failed re-verification.
    Rejected {
        clause: String,
        violation: f64,
    },
    Parse {
        line: usize,
        msg: String,
    },
}

impl fmt::Display for KrawError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KrawError::Domain(m) => write!(f, "domain error: {m}"),
            KrawError::NoSignChange { ell } => {
                write!(
                    f,
                    "no sign change while bracketing the first root of degree {ell}"
                )
            }
            KrawError::InfeasibleDegree { d } => write!(
                f,
                "no admissible degree for distance {d}; the flat theta bound applies instead"
            ),
            KrawError::Lp(e) => write!(f, "linear program failed: {e}"),
            KrawError::Rejected { clause, violation } => {
                write!(
                    f,
                    "certificate rejected: {clause} violated by {violation:e}"
                )
            }
            KrawError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for KrawError {}

impl From<SimplexError> for KrawError {
    fn from(e: SimplexError) -> Self {
        KrawError::Lp(e)
    }
}

fn domain_text(e: impl std::fmt::Display) -> String {
    e.to_string()
        .trim_start_matches("domain error: ")
        .to_string()
}

type Result<T> = std::result::Result<T, KrawError>;

/// Parameters of the imaginary Hamming scheme: length `n` and real
/// alphabet size `q' > 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scheme {
    pub n: usize,
    pub q_prime: f64,
}

impl Scheme {
    pub fn new(n: usize, q_prime: f64) -> Result<Scheme> {
        if n == 0 {
            return Err(KrawError::Domain("scheme length must be >= 1".into()));
        }
        if !(q_prime > 1.0) || !q_prime.is_finite() {
            return Err(KrawError::Domain(format!(
                "scheme parameter {q_prime} <= 1"
            )));
        }
        Ok(Scheme { n, q_prime })
    }

    fn check_ell(&self, ell: usize) -> Result<()> {
        if ell > self.n {
            return Err(KrawError::Domain(format!(
                "degree {ell} exceeds length {}",
                self.n
            )));
        }
        Ok(())
    }
}

fn kraw_dd(scheme: Scheme, ell: usize, u: f64) -> Dd {
    let n = scheme.n as f64;
    let qp = scheme.q_prime;
    if ell == 0 {
        return Dd::ONE;
    }
    // K_1(u) = n (q'-1) - q' u
    let mut prev = Dd::ONE;
    let mut cur = Dd::prod(n, qp - 1.0) - Dd::prod(qp, u);
    for j in 1..ell {
        let jf = j as f64;
        // (j+1) K_{j+1} = [j + (q'-1)(n-j) - q' u] K_j - (q'-1)(n-j+1) K_{j-1}
        let a = Dd::from(jf) + Dd::prod(qp - 1.0, n - jf) - Dd::prod(qp, u);
        let b = Dd::prod(qp - 1.0, n - jf + 1.0);
        let next = (a * cur - b * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Krawtchouk polynomial `K_ell(u; q')` for the scheme, evaluated by the
/// three-term recurrence in the degree.
pub fn kraw_eval(scheme: Scheme, ell: usize, u: f64) -> Result<f64> {
    scheme.check_ell(ell)?;
    Ok(kraw_dd(scheme, ell, u).value())
}

/// The same polynomial by its explicit sum
/// `sum_j (-1)^j (q'-1)^(ell-j) C(u, j) C(n-u, ell-j)`
/// with falling-factorial binomials; kept as an independent oracle for the
/// recurrence path.
pub fn kraw_eval_sum(scheme: Scheme, ell: usize, u: f64) -> Result<f64> {
    scheme.check_ell(ell)?;
    let n = scheme.n as f64;
    let qp = scheme.q_prime;
    let mut total = Dd::ZERO;
    for j in 0..=ell {
        // C(u, j)
        let mut c1 = Dd::ONE;
        for i in 0..j {
            c1 = c1 * Dd::from(u - i as f64) / (i as f64 + 1.0);
        }
        // C(n - u, ell - j)
        let mut c2 = Dd::ONE;
        for i in 0..(ell - j) {
            c2 = c2 * Dd::from(n - u - i as f64) / (i as f64 + 1.0);
        }
        // (q' - 1)^(ell - j)
        let mut p = Dd::ONE;
        for _ in 0..(ell - j) {
            p = p * Dd::from(qp - 1.0);
        }
        let mut term = c1 * c2 * p;
        if j % 2 == 1 {
            term = -term;
        }
        total = total + term;
    }
    Ok(total.value())
}

/// All values `K_ell(u)` for `ell, u = 0..n` at the integer points.
pub fn kraw_table(scheme: Scheme) -> Vec<Vec<f64>> {
    let n = scheme.n;
    (0..=n)
        .map(|ell| {
            (0..=n)
                .map(|u| kraw_dd(scheme, ell, u as f64).value())
                .collect()
        })
        .collect()
}

const ROOT_TOL: f64 = 1e-12;

/// Smallest root of `K_ell` in `(0, n)`, by bisection between 0 and the
/// first root of `K_{ell-1}` (consecutive degrees interlace, so the sign
/// changes exactly once on that bracket).
pub fn kraw_first_root(scheme: Scheme, ell: usize) -> Result<f64> {
    if ell == 0 {
        return Err(KrawError::Domain("degree 0 has no roots".into()));
    }
    scheme.check_ell(ell)?;
    let n = scheme.n as f64;
    let qp = scheme.q_prime;
    let mut root = n * (1.0 - 1.0 / qp);
    for degree in 2..=ell {
        let f = |x: f64| kraw_dd(scheme, degree, x).value();
        let (mut lo, mut hi) = (0.0_f64, root);
        if !(f(lo) > 0.0 && f(hi) < 0.0) {
            return Err(KrawError::NoSignChange { ell: degree });
        }
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        root = 0.5 * (lo + hi);
    }
    Ok(root)
}

/// Weights `C(n, u) (q'-1)^u` of the scheme's discrete inner product.
fn scheme_weights(scheme: Scheme) -> Vec<Dd> {
    let n = scheme.n;
    let mut w = Vec::with_capacity(n + 1);
    let mut cur = Dd::ONE;
    w.push(cur);
    for u in 0..n {
        cur = cur * Dd::from((n - u) as f64) * Dd::from(scheme.q_prime - 1.0) / (u as f64 + 1.0);
        w.push(cur);
    }
    w
}

/// Squared norms `q'^n C(n, ell) (q'-1)^ell` of the basis polynomials.
fn scheme_norms(scheme: Scheme) -> Vec<Dd> {
    let n = scheme.n;
    let mut qpn = Dd::ONE;
    for _ in 0..n {
        qpn = qpn * Dd::from(scheme.q_prime);
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = qpn;
    out.push(cur);
    for ell in 0..n {
        cur =
            cur * Dd::from((n - ell) as f64) * Dd::from(scheme.q_prime - 1.0) / (ell as f64 + 1.0);
        out.push(cur);
    }
    out
}

/// Expansion coefficients of a function given by its values at the integer
/// points `u = 0..n`:
/// `Hhat_ell = [q'^n C(n,ell) (q'-1)^ell]^-1 sum_u C(n,u)(q'-1)^u H(u) K_ell(u)`.
pub fn coeff_extract(scheme: Scheme, h_values: &[f64]) -> Result<Vec<f64>> {
    let n = scheme.n;
    if h_values.len() != n + 1 {
        return Err(KrawError::Domain(format!(
            "expected {} values, got {}",
            n + 1,
            h_values.len()
        )));
    }
    let weights = scheme_weights(scheme);
    let norms = scheme_norms(scheme);
    let mut coeffs = Vec::with_capacity(n + 1);
    for ell in 0..=n {
        let mut acc = Dd::ZERO;
        for u in 0..=n {
            let k = kraw_dd(scheme, ell, u as f64);
            acc = acc + weights[u] * Dd::from(h_values[u]) * k;
        }
        coeffs.push((acc / norms[ell]).value());
    }
    Ok(coeffs)
}

/// Evaluates `H(u) = sum_ell coeffs[ell] K_ell(u)` at all integer points.
pub fn eval_from_coeffs(scheme: Scheme, coeffs: &[f64]) -> Result<Vec<f64>> {
    let n = scheme.n;
    if coeffs.len() != n + 1 {
        return Err(KrawError::Domain(format!(
            "expected {} coefficients, got {}",
            n + 1,
            coeffs.len()
        )));
    }
    let mut out = Vec::with_capacity(n + 1);
    for u in 0..=n {
        let mut acc = Dd::ZERO;
        for (ell, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                acc = acc + Dd::from(c) * kraw_dd(scheme, ell, u as f64);
            }
        }
        out.push(acc.value());
    }
    Ok(out)
}

/// A candidate witness for the finite-length bound: coefficients over the
/// Krawtchouk basis together with the target distance.
///
/// Validity is never assumed from the construction; [`certificate_check`]
/// re-verifies every constraint and only then certifies a value.
#[derive(Clone, Debug)]
pub struct LpCertificate {
    pub scheme: Scheme,
    pub coeffs: Vec<f64>,
    /// Target distance in `[1, n + 1]`; `n + 1` means no distance
    /// constraint (the flat theta regime).
    pub d: usize,
}

/// Result of re-verifying an [`LpCertificate`].
#[derive(Clone, Debug)]
pub struct CertReport {
    pub feasible: bool,
    /// Sound upper-bound value `H(0)/Hhat_0` after slack inflation.
    pub certified_value: f64,
    pub coeff_violation: f64,
    pub constraint_violation: f64,
    pub checks: Vec<crate::report::CheckItem>,
}

/// Default relative tolerance of [`certificate_check`].
pub const CHECK_REL_TOL: f64 = 1e-9;

/// Re-evaluates every certificate constraint at tolerance
/// `CHECK_REL_TOL * max|coeff|`. The certified value is computed from the
/// nonnegative-clipped coefficients with any residual constraint slack
/// subtracted from both `H(0)` and `Hhat_0`, so a passing certificate
/// always yields a true bound.
pub fn certificate_check(cert: &LpCertificate) -> CertReport {
    certificate_check_with_tol(cert, CHECK_REL_TOL)
}

/// [`certificate_check`] at a caller-chosen relative tolerance.
pub fn certificate_check_with_tol(cert: &LpCertificate, rel_tol: f64) -> CertReport {
    use crate::report::CheckItem;
    let n = cert.scheme.n;
    let max_abs = cert
        .coeffs
        .iter()
        .fold(0.0_f64, |acc, c| acc.max(c.abs()))
        .max(f64::MIN_POSITIVE);
    let abs_tol = rel_tol * max_abs;

    let coeff_violation = cert
        .coeffs
        .iter()
        .fold(0.0_f64, |acc, &c| acc.max(-c))
        .max(0.0);
    let h0 = cert.coeffs.first().copied().unwrap_or(0.0);

    let clipped: Vec<f64> = cert.coeffs.iter().map(|&c| c.max(0.0)).collect();
    let h_raw = eval_from_coeffs(cert.scheme, &cert.coeffs).expect("coefficient count checked");
    let h_clipped = eval_from_coeffs(cert.scheme, &clipped).expect("coefficient count checked");

    let mut constraint_violation = 0.0_f64;
    let mut slack = 0.0_f64;
    if cert.d <= n {
        for u in cert.d..=n {
            constraint_violation = constraint_violation.max(h_raw[u]);
            slack = slack.max(h_clipped[u]);
        }
        constraint_violation = constraint_violation.max(0.0);
    }

    let h0_ok = h0 > 0.0 && clipped[0] - slack > 0.0;
    let certified_value = if h0_ok {
        (h_clipped[0] - slack) / (clipped[0] - slack)
    } else {
        f64::INFINITY
    };

    let checks = vec![
        CheckItem::new("coeff-nonneg", coeff_violation, abs_tol),
        CheckItem::new("h-nonpos", constraint_violation, abs_tol),
        CheckItem::new("h0-positive", if h0_ok { 0.0 } else { 1.0 }, 0.0),
    ];
    CertReport {
        feasible: checks.iter().all(|c| c.pass),
        certified_value,
        coeff_violation,
        constraint_violation,
        checks,
    }
}

/// Feasible polynomial of minimal degree for distance `d`: with `t` the
/// smallest degree whose successor polynomial has its first root below `d`,
/// the witness is
/// `H(u) = (K_t(a) K_{t+1}(u) - K_{t+1}(a) K_t(u))^2 / (a - u)`
/// for a parameter `a` between the first root of `K_{t+1}` and `d`,
/// chosen by golden-section on the resulting bound value.
pub fn mrrw_certificate(scheme: Scheme, d: usize) -> Result<LpCertificate> {
    let n = scheme.n;
    if d == 0 || d > n {
        return Err(KrawError::Domain(format!("need 1 <= d <= {n}, got {d}")));
    }
    // smallest t with first_root(K_{t+1}) < d, subject to deg H = 2t+1 <= n
    let mut t_and_root = None;
    let mut t = 0usize;
    while 2 * t + 1 <= n {
        let root = kraw_first_root(scheme, t + 1)?;
        if root < d as f64 {
            t_and_root = Some((t, root));
            break;
        }
        t += 1;
    }
    let (t, root_next) = t_and_root.ok_or(KrawError::InfeasibleDegree { d })?;
    let mut hi = d as f64;
    if t >= 1 {
        hi = hi.min(kraw_first_root(scheme, t)?);
    }
    let lo = root_next;

    let value_at = |a: f64| -> (f64, Vec<f64>) {
        let kt_a = kraw_dd(scheme, t, a).value();
        let kt1_a = kraw_dd(scheme, t + 1, a).value();
        let mut h = Vec::with_capacity(n + 1);
        for u in 0..=n {
            let uf = u as f64;
            if (uf - a).abs() < 1e-9 {
                h.push(0.0); // removable zero of the quotient
            } else {
                let phi = kt_a * kraw_dd(scheme, t + 1, uf).value()
                    - kt1_a * kraw_dd(scheme, t, uf).value();
                h.push(phi * phi / (a - uf));
            }
        }
        let coeffs = coeff_extract(scheme, &h).expect("value count matches scheme");
        (h[0] / coeffs[0], coeffs)
    };

    // golden-section from the midpoint, then compare with the right
    // endpoint; ties go to the smaller parameter
    let inner_lo = lo + 1e-9 * (hi - lo);
    let (a_gs, v_gs) =
        golden_min_scalar(|a| value_at(a).0, inner_lo, hi, 1e-12 * (hi - lo) + 1e-13);
    let v_hi = value_at(hi).0;
    let a_best = if v_gs <= v_hi { a_gs } else { hi };

    let (_, coeffs) = value_at(a_best);
    let h0 = coeffs[0];
    if !(h0 > 0.0) {
        return Err(KrawError::Rejected {
            clause: "h0-positive".into(),
            violation: -h0,
        });
    }
    let normalized = coeffs.iter().map(|c| c / h0).collect();
    Ok(LpCertificate {
        scheme,
        coeffs: normalized,
        d,
    })
}

fn golden_min_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let gr = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c1 = b - gr * (b - a);
    let mut c2 = a + gr * (b - a);
    let mut f1 = f(c1);
    let mut f2 = f(c2);
    while b - a > xtol {
        if f1 < f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        }
    }
    if f1 < f2 {
        (c1, f1)
    } else {
        (c2, f2)
    }
}

/// Optimal certificate for the scheme at distance `d`:
/// minimize `H(0)` subject to `Hhat_0 = 1`, `Hhat_ell >= 0` and
/// `H(u) <= 0` for integer `u` in `[d, n]`. For `d = n + 1` there are no
/// distance constraints and the optimum is exactly 1.
pub fn lp_solve(scheme: Scheme, d: usize) -> Result<(LpCertificate, f64)> {
    let n = scheme.n;
    if d == 0 || d > n + 1 {
        return Err(KrawError::Domain(format!(
            "need 1 <= d <= {}, got {d}",
            n + 1
        )));
    }
    if d == n + 1 {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = 1.0;
        return Ok((LpCertificate { scheme, coeffs, d }, 1.0));
    }
    let table = kraw_table(scheme);
    // column scaling by K_ell(0) > 0 keeps the tableau well conditioned:
    // variables y_ell = Hhat_ell * K_ell(0), objective sum y_ell
    let k0: Vec<f64> = (1..=n).map(|ell| table[ell][0]).collect();
    let c = vec![1.0; n];
    let mut a = Vec::with_capacity(n - d + 1);
    for u in d..=n {
        a.push((1..=n).map(|ell| table[ell][u] / k0[ell - 1]).collect());
    }
    let b = vec![-1.0; n - d + 1];
    let sol = simplex::solve_min(&c, &a, &b)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    for ell in 1..=n {
        coeffs.push((sol.x[ell - 1] / k0[ell - 1]).max(0.0));
    }
    let value = 1.0 + sol.objective;
    Ok((LpCertificate { scheme, coeffs, d }, value))
}

/// Finite-length bound assembled from a certified value.
#[derive(Clone, Copy, Debug)]
pub struct LpBoundResult {
    /// Certified `H(0)/Hhat_0`, at least 1.
    pub value: f64,
    /// `n ln theta_L + ln value`.
    pub log_bound: f64,
    /// `log_bound / n`, the per-symbol rate in nats.
    pub rate: f64,
}

pub fn bound_result(value: f64, n: usize, theta_l: f64) -> LpBoundResult {
    let log_bound = n as f64 * theta_l.ln() + value.ln();
    LpBoundResult {
        value,
        log_bound,
        rate: log_bound / n as f64,
    }
}

/// Certified upper bound on `(1/n) ln M_q(n, d)` for the odd cycle `C_q`:
/// solves the scheme LP at `q'(q)`, re-verifies the certificate, and
/// combines the certified value with the theta term.
///
/// `d = n + 1` encodes an infinite target distance.
pub fn finite_n_rate(q: u32, n: usize, d: usize) -> Result<f64> {
    Ok(certified_bound(q, n, d)?.2.rate)
}

/// The full result triple behind [`finite_n_rate`].
pub fn certified_bound(
    q: u32,
    n: usize,
    d: usize,
) -> Result<(LpCertificate, CertReport, LpBoundResult)> {
    let (q_prime, theta_l) = bounds::cycle_params(q)
        .and_then(|p| p.odd())
        .map_err(|e| KrawError::Domain(domain_text(e)))?;
    let scheme = Scheme::new(n, q_prime)?;
    let (cert, _) = lp_solve(scheme, d)?;
    let report = certificate_check(&cert);
    if !report.feasible {
        return Err(KrawError::Rejected {
            clause: "lp-certificate".into(),
            violation: report.coeff_violation.max(report.constraint_violation),
        });
    }
    let result = bound_result(report.certified_value, n, theta_l);
    Ok((cert, report, result))
}

/// Expectation of `H(U)` under `U ~ Binomial(n, 1 - 1/q')`, computed by the
/// direct binomial sum. By orthogonality this equals `Hhat_0`, which makes
/// it a cheap diagnostic for the coefficient route.
pub fn binomial_diagnostic(scheme: Scheme, coeffs: &[f64]) -> Result<f64> {
    let n = scheme.n;
    if coeffs.len() != n + 1 {
        return Err(KrawError::Domain(format!(
            "expected {} coefficients, got {}",
            n + 1,
            coeffs.len()
        )));
    }
    let h = eval_from_coeffs(scheme, coeffs)?;
    let p = 1.0 - 1.0 / scheme.q_prime;
    // probabilities C(n,u) p^u (1-p)^(n-u) by the multiplicative recurrence
    let mut prob = Dd::ONE;
    for _ in 0..n {
        prob = prob * Dd::from(1.0 - p);
    }
    let mut acc = Dd::ZERO;
    for (u, &hu) in h.iter().enumerate() {
        acc = acc + prob * Dd::from(hu);
        if u < n {
            prob = prob * Dd::from((n - u) as f64) * Dd::from(p / (1.0 - p)) / (u as f64 + 1.0);
        }
    }
    Ok(acc.value())
}

/// Writes a certificate in the plain text interchange format:
/// line 1 `n q_prime d`, line 2 the coefficients `Hhat_0..Hhat_n` in full
/// precision decimal.
pub fn write_certificate<W: IoWrite>(out: &mut W, cert: &LpCertificate) -> std::io::Result<()> {
    writeln!(out, "{} {} {}", cert.scheme.n, cert.scheme.q_prime, cert.d)?;
    let parts: Vec<String> = cert.coeffs.iter().map(|c| format!("{c}")).collect();
    writeln!(out, "{}", parts.join(" "))
}

/// Reads the format written by [`write_certificate`].
pub fn read_certificate<R: BufRead>(input: R) -> Result<LpCertificate> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or(KrawError::Parse {
            line: 1,
            msg: "empty file".into(),
        })?
        .map_err(|e| KrawError::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(KrawError::Parse {
            line: 1,
            msg: "expected `n q_prime d` header".into(),
        })?;
    let q_prime: f64 = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(KrawError::Parse {
            line: 1,
            msg: "expected `n q_prime d` header".into(),
        })?;
    let d: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(KrawError::Parse {
            line: 1,
            msg: "expected `n q_prime d` header".into(),
        })?;
    let scheme = Scheme::new(n, q_prime)?;
    if d == 0 || d > n + 1 {
        return Err(KrawError::Parse {
            line: 1,
            msg: format!("distance {d} out of range"),
        });
    }
    let body = lines
        .next()
        .ok_or(KrawError::Parse {
            line: 2,
            msg: "missing coefficient line".into(),
        })?
        .map_err(|e| KrawError::Parse {
            line: 2,
            msg: e.to_string(),
        })?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for tok in body.split_whitespace() {
        let c: f64 = tok.parse().map_err(|_| KrawError::Parse {
            line: 2,
            msg: format!("bad coefficient `{tok}`"),
        })?;
        coeffs.push(c);
    }
    if coeffs.len() != n + 1 {
        return Err(KrawError::Parse {
            line: 2,
            msg: format!("expected {} coefficients, found {}", n + 1, coeffs.len()),
        });
    }
    Ok(LpCertificate { scheme, coeffs, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT5: f64 = 2.23606797749979;
    const QP9: f64 = 2.0641777724759121;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eval_degree_zero_and_one() {
        let s = Scheme::new(7, SQRT5).unwrap();
        for u in 0..=7 {
            close(kraw_eval(s, 0, u as f64).unwrap(), 1.0, 0.0);
            close(
                kraw_eval(s, 1, u as f64).unwrap(),
                7.0 * (SQRT5 - 1.0) - SQRT5 * u as f64,
                1e-12,
            );
        }
        assert!(kraw_eval(s, 8, 0.0).is_err());
    }

    #[test]
    fn eval_at_zero_is_weighted_binomial() {
        // K_ell(0) = C(n, ell) (q'-1)^ell; independently evaluated at (4, 2)
        let s = Scheme::new(4, SQRT5).unwrap();
        close(kraw_eval(s, 2, 0.0).unwrap(), 9.1671842700025236, 1e-10);
    }

    #[test]
    fn recurrence_and_sum_agree() {
        for qp in [SQRT5, QP9, 3.0] {
            for n in [5usize, 12, 25, 40] {
                let s = Scheme::new(n, qp).unwrap();
                for ell in 0..=n {
                    for u in 0..=n {
                        let a = kraw_eval(s, ell, u as f64).unwrap();
                        let b = kraw_eval_sum(s, ell, u as f64).unwrap();
                        let rel = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
                        assert!(
                            rel <= 1e-9,
                            "n={n} q'={qp} ell={ell} u={u}: {a} vs {b} rel {rel:e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_relation() {
        for qp in [SQRT5, QP9, 3.0] {
            for n in [6usize, 13, 20] {
                let s = Scheme::new(n, qp).unwrap();
                let table = kraw_table(s);
                let weights: Vec<f64> = scheme_weights(s).iter().map(|d| d.value()).collect();
                let norms: Vec<f64> = scheme_norms(s).iter().map(|d| d.value()).collect();
                for ell in 0..=n {
                    for m in ell..=n {
                        let mut acc = Dd::ZERO;
                        for u in 0..=n {
                            acc = acc
                                + Dd::from(weights[u])
                                    * Dd::from(table[ell][u])
                                    * Dd::from(table[m][u]);
                        }
                        let target = if ell == m { norms[ell] } else { 0.0 };
                        let scale = (norms[ell] * norms[m]).sqrt();
                        assert!(
                            (acc.value() - target).abs() <= 1e-8 * scale,
                            "n={n} q'={qp} ell={ell} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn first_roots_interlace() {
        let s = Scheme::new(20, SQRT5).unwrap();
        let r1 = kraw_first_root(s, 1).unwrap();
        close(r1, 20.0 * (1.0 - 1.0 / SQRT5), 1e-12);
        let r2 = kraw_first_root(s, 2).unwrap();
        assert!(r2 < r1);
        // K_1's root lies between the two roots of K_2: check by sign of K_2
        assert!(kraw_eval(s, 2, r1).unwrap() < 0.0);
        let mut prev = r1;
        for ell in 2..=10 {
            let r = kraw_first_root(s, ell).unwrap();
            assert!(r < prev && r > 0.0, "ell = {ell}");
            prev = r;
        }
    }

    #[test]
    fn first_root_tracks_lp1_exponent() {
        // root/n stays near the distance at which the asymptotic LP bound
        // equals the entropy of the degree fraction
        let s = Scheme::new(40, SQRT5).unwrap();
        let root = kraw_first_root(s, 8).unwrap();
        let target_rate = crate::bounds::entropy_hq(8.0 / 40.0, SQRT5).unwrap();
        let (mut lo, mut hi) = (0.0, 1.0 - 1.0 / SQRT5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if crate::bounds::rate_lp1(SQRT5, mid).unwrap() > target_rate {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let delta_star = 0.5 * (lo + hi);
        assert!((root / 40.0 - delta_star).abs() < 0.15);
    }

    #[test]
    fn coeff_extract_round_trip() {
        let s = Scheme::new(10, SQRT5).unwrap();
        // constant function
        let ones = vec![1.0; 11];
        let c = coeff_extract(s, &ones).unwrap();
        close(c[0], 1.0, 1e-12);
        for &ci in &c[1..] {
            close(ci, 0.0, 1e-12);
        }
        // an exact basis polynomial
        let table = kraw_table(s);
        let c = coeff_extract(s, &table[3]).unwrap();
        for (ell, &ci) in c.iter().enumerate() {
            close(ci, if ell == 3 { 1.0 } else { 0.0 }, 1e-10);
        }
        // deterministic pseudo-random values
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut h = Vec::new();
        for _ in 0..11 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            h.push(((state >> 11) as f64 / (1u64 << 53) as f64) * 200.0 - 100.0);
        }
        let c = coeff_extract(s, &h).unwrap();
        let back = eval_from_coeffs(s, &c).unwrap();
        let scale = h.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for (x, y) in h.iter().zip(&back) {
            assert!((x - y).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn mrrw_single_coordinate() {
        let s = Scheme::new(1, SQRT5).unwrap();
        let cert = mrrw_certificate(s, 1).unwrap();
        let report = certificate_check(&cert);
        assert!(report.feasible);
        close(report.certified_value, SQRT5, 1e-6);
    }

    #[test]
    fn mrrw_certificates_verify_and_order() {
        let s = Scheme::new(20, SQRT5).unwrap();
        let cert14 = mrrw_certificate(s, 14).unwrap();
        let r14 = certificate_check(&cert14);
        assert!(r14.feasible);
        let cert20 = mrrw_certificate(s, 20).unwrap();
        let r20 = certificate_check(&cert20);
        assert!(r20.feasible);
        assert!(r20.certified_value <= r14.certified_value + 1e-9);
    }

    #[test]
    fn mrrw_infeasible_degree() {
        let s = Scheme::new(20, SQRT5).unwrap();
        assert!(matches!(
            mrrw_certificate(s, 1),
            Err(KrawError::InfeasibleDegree { d: 1 })
        ));
    }

    #[test]
    fn lp_single_coordinate_optimum() {
        for qp in [SQRT5, QP9] {
            let s = Scheme::new(1, qp).unwrap();
            let (cert, value) = lp_solve(s, 1).unwrap();
            close(value, qp, 1e-9);
            let report = certificate_check(&cert);
            assert!(report.feasible);
            close(report.certified_value, qp, 1e-9);
            // analytic optimum: Hhat_1 = Hhat_0
            close(cert.coeffs[1], 1.0, 1e-9);
        }
    }

    #[test]
    fn lp_no_constraints_is_one() {
        let s = Scheme::new(12, SQRT5).unwrap();
        let (cert, value) = lp_solve(s, 13).unwrap();
        assert_eq!(value, 1.0);
        let report = certificate_check(&cert);
        assert!(report.feasible);
        assert_eq!(report.certified_value, 1.0);
    }

    #[test]
    fn lp_matches_reference_solver() {
        // optimum from an independent dense LP solve of the same program
        let s = Scheme::new(20, SQRT5).unwrap();
        let (_, value) = lp_solve(s, 14).unwrap();
        close(value, 4.754995607727006, 1e-6);
        let s40 = Scheme::new(40, SQRT5).unwrap();
        let (_, v40) = lp_solve(s40, 12).unwrap();
        assert!((v40 - 13491989.13433725).abs() <= 1e-4 * 13491989.13433725);
    }

    #[test]
    fn lp_dirac_optimum_at_distance_one() {
        // with every point constrained the optimum is the q'^n point mass
        let s = Scheme::new(6, SQRT5).unwrap();
        let (_, value) = lp_solve(s, 1).unwrap();
        close(value, SQRT5.powi(6), 1e-6 * SQRT5.powi(6));
    }

    #[test]
    fn lp_value_nonincreasing_in_distance() {
        let s = Scheme::new(20, SQRT5).unwrap();
        let mut prev = f64::INFINITY;
        for d in 1..=21 {
            let (_, v) = lp_solve(s, d).unwrap();
            assert!(v <= prev + 1e-9 * prev.max(1.0), "d = {d}");
            prev = v;
        }
    }

    #[test]
    fn lp_dominates_mrrw() {
        let s = Scheme::new(20, SQRT5).unwrap();
        let (_, lp) = lp_solve(s, 14).unwrap();
        let mrrw = certificate_check(&mrrw_certificate(s, 14).unwrap()).certified_value;
        assert!(lp <= mrrw + 1e-6);
    }

    #[test]
    fn ternary_lp_matches_integer_scheme_values() {
        // q'(3) = 3 exactly, so these are classical integer-alphabet values;
        // references from an independent dense LP solve
        for (n, d, expect) in [(4usize, 3usize, 9.0), (5, 3, 18.0), (6, 4, 18.0)] {
            let s = Scheme::new(n, 3.0).unwrap();
            let (_, v) = lp_solve(s, d).unwrap();
            close(v, expect, 1e-6 * expect);
        }
    }

    #[test]
    fn certificate_check_rejects_bad_inputs() {
        let s = Scheme::new(6, SQRT5).unwrap();
        let mut coeffs = vec![0.0; 7];
        coeffs[0] = 1.0;
        let clean = LpCertificate {
            scheme: s,
            coeffs: coeffs.clone(),
            d: 7,
        };
        let r = certificate_check(&clean);
        assert!(r.feasible);
        assert_eq!(r.certified_value, 1.0);

        coeffs[1] = -1.0;
        let bad = LpCertificate {
            scheme: s,
            coeffs,
            d: 7,
        };
        assert!(!certificate_check(&bad).feasible);

        // violated distance constraint: the constant certificate has H > 0
        let mut cc = vec![0.0; 7];
        cc[0] = 1.0;
        let not_nonpos = LpCertificate {
            scheme: s,
            coeffs: cc,
            d: 3,
        };
        assert!(!certificate_check(&not_nonpos).feasible);
    }

    #[test]
    fn certified_value_absorbs_slack() {
        // tiny negative coefficient and tiny positive slack still certify,
        // and the certified value moves up, never down
        let s = Scheme::new(4, SQRT5).unwrap();
        let (cert, value) = lp_solve(s, 3).unwrap();
        let mut bumped = cert.clone();
        bumped.coeffs[2] += 1e-13;
        let r = certificate_check(&bumped);
        assert!(r.feasible);
        assert!(r.certified_value >= value - 1e-9);
    }

    #[test]
    fn binomial_diagnostic_matches_leading_coeff() {
        let s = Scheme::new(12, SQRT5).unwrap();
        // single basis polynomials average to zero
        for ell in 1..=12 {
            let mut coeffs = vec![0.0; 13];
            coeffs[ell] = 1.0;
            let e = binomial_diagnostic(s, &coeffs).unwrap();
            let norm = (kraw_eval(s, ell, 0.0).unwrap()).abs();
            assert!(e.abs() <= 1e-9 * norm.max(1.0), "ell = {ell}");
        }
        // constants average to themselves
        let mut coeffs = vec![0.0; 13];
        coeffs[0] = 2.5;
        close(binomial_diagnostic(s, &coeffs).unwrap(), 2.5, 1e-10);
        // a full certificate averages to its leading coefficient
        let s20 = Scheme::new(20, SQRT5).unwrap();
        let cert = mrrw_certificate(s20, 14).unwrap();
        let e = binomial_diagnostic(s20, &cert.coeffs).unwrap();
        close(e, cert.coeffs[0], 1e-9 * cert.coeffs[0].abs());
    }

    #[test]
    fn finite_n_rates() {
        // single coordinate: theta times q' is the whole alphabet
        close(finite_n_rate(5, 1, 1).unwrap(), 5.0_f64.ln(), 1e-9);
        // the triangle degenerates to the ternary Hamming scheme, where the
        // classical optimum at (4, 3) is exactly 9
        close(finite_n_rate(3, 4, 3).unwrap(), 9.0_f64.ln() / 4.0, 1e-9);
        // no distance constraint: the flat theta rate
        close(finite_n_rate(5, 8, 9).unwrap(), 5.0_f64.sqrt().ln(), 1e-12);
        // finite length sits above the asymptote; the gap at n = 40 was
        // measured against an independent LP solve
        let rate = finite_n_rate(5, 40, 12).unwrap();
        let asymptote = crate::bounds::upper_main(5, 0.3).unwrap();
        assert!(rate >= asymptote - 1e-9);
        assert!(rate - asymptote < 0.16, "gap {}", rate - asymptote);
    }

    #[test]
    fn certificate_io_round_trip() {
        let s = Scheme::new(9, QP9).unwrap();
        let (cert, _) = lp_solve(s, 5).unwrap();
        let mut buf = Vec::new();
        write_certificate(&mut buf, &cert).unwrap();
        let back = read_certificate(&buf[..]).unwrap();
        assert_eq!(back.scheme.n, cert.scheme.n);
        assert_eq!(back.d, cert.d);
        for (a, b) in back.coeffs.iter().zip(&cert.coeffs) {
            assert_eq!(a, b); // full-precision decimal round-trips exactly
        }
        assert!(read_certificate(&b"3 2.2"[..]).is_err());
        assert!(read_certificate(&b"3 2.2 1\n1 2\n"[..]).is_err());
    }
}
