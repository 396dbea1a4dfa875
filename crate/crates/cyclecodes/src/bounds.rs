//! Closed-form asymptotic bounds on the rate-distance tradeoff for codes on
//! cycle graphs, and the machinery to sample and combine them into curves.
//!
//! Everything here is a pure function of its inputs and returns rates in
//! nats. The relative-distance argument `delta` always lives in `[0, 1]`;
//! whenever a composed formula pushes an inner argument past 1 the inner
//! rate term is defined to be 0 and the composite degenerates to its
//! capacity term.

use crate::codes::{ExtDist, WeightTable};
use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundsError {
    /// Argument outside its documented domain.
    Domain(String),
    /// Curves with different `q` or sampling grids cannot be combined.
    GridMismatch,
    /// Weight table unusable for the max-entropy construction.
    DegenerateTable,
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::Domain(what) => write!(f, "domain error: {what}"),
            BoundsError::GridMismatch => write!(f, "curves disagree on q or sampling grid"),
            BoundsError::DegenerateTable => write!(f, "degenerate weight table"),
        }
    }
}

impl std::error::Error for BoundsError {}

type Result<T> = std::result::Result<T, BoundsError>;

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) || !delta.is_finite() {
        return Err(BoundsError::Domain(format!("delta {delta} not in [0,1]")));
    }
    Ok(())
}

fn check_q_real(q_real: f64) -> Result<()> {
    if !(q_real > 1.0) || !q_real.is_finite() {
        return Err(BoundsError::Domain(format!("alphabet size {q_real} <= 1")));
    }
    Ok(())
}

/// `x ln x` with the `0 ln 0 = 0` convention.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// q-ary entropy `H_q(x) = x ln(q-1) - x ln x - (1-x) ln(1-x)` in nats.
///
/// `q_real` may be any real number greater than 1.
pub fn entropy_hq(x: f64, q_real: f64) -> Result<f64> {
    check_q_real(q_real)?;
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(BoundsError::Domain(format!(
            "entropy argument {x} not in [0,1]"
        )));
    }
    Ok(x * (q_real - 1.0).ln() - xlnx(x) - xlnx(1.0 - x))
}

/// Gilbert-Varshamov rate `ln q - H_q(delta)`, zero for `delta >= 1 - 1/q`.
pub fn rate_gv(q_real: f64, delta: f64) -> Result<f64> {
    check_q_real(q_real)?;
    check_delta(delta)?;
    if delta >= 1.0 - 1.0 / q_real {
        return Ok(0.0);
    }
    Ok(q_real.ln() - entropy_hq(delta, q_real)?)
}

fn lp1_argument(q: f64, delta: f64) -> f64 {
    let s = ((q - 1.0) * delta * (1.0 - delta)).max(0.0).sqrt();
    (((q - 1.0) - (q - 2.0) * delta - 2.0 * s) / q).clamp(0.0, 1.0)
}

/// First linear-programming upper bound on the rate of q-ary codes,
/// `H_q` of the standard root-location argument; zero for `delta >= 1 - 1/q`.
///
/// `q_real` need not be an integer.
pub fn rate_lp1(q_real: f64, delta: f64) -> Result<f64> {
    check_q_real(q_real)?;
    check_delta(delta)?;
    if delta >= 1.0 - 1.0 / q_real {
        return Ok(0.0);
    }
    entropy_hq(lp1_argument(q_real, delta), q_real)
}

/// Binary entropy in nats.
fn h2(x: f64) -> f64 {
    -xlnx(x) - xlnx(1.0 - x)
}

fn lp2_g(x: f64) -> f64 {
    h2((1.0 - (1.0 - x).max(0.0).sqrt()) / 2.0)
}

/// Golden-section minimum of `f` on `[lo, hi]`, refined to `xtol`.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
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

/// Second linear-programming upper bound for binary codes, in nats.
///
/// Minimizes `ln 2 + g(u^2) - g(u^2 + 2*delta*u + 2*delta)` over
/// `u in (0, 1-2*delta]` with `g(x) = H_2((1 - sqrt(1-x))/2)`.
/// Zero for `delta >= 1/2`.
pub fn rate_lp2_binary(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if delta >= 0.5 {
        return Ok(0.0);
    }
    if delta == 0.0 {
        return Ok(std::f64::consts::LN_2);
    }
    let f = |u: f64| {
        std::f64::consts::LN_2 + lp2_g(u * u) - lp2_g(u * u + 2.0 * delta * u + 2.0 * delta)
    };
    let hi = 1.0 - 2.0 * delta;
    let (_, v) = golden_min(f, 1e-12, hi, 1e-10);
    Ok(v.min(f(hi)).max(0.0))
}

/// Whether the cycle order is even or odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Derived constants of the `q`-cycle.
///
/// For odd `q` the fractional alphabet size `q' = 1 + 1/cos(pi/q)` and the
/// theta-function value `theta_L = q cos(pi/q) / (1 + cos(pi/q))` are
/// populated; they satisfy `theta_l * q_prime = q`. Even cycles reduce to
/// the binary Hamming case and carry no fractional parameters.
#[derive(Clone, Copy, Debug)]
pub struct CycleParams {
    pub q: u32,
    pub parity: Parity,
    pub q_prime: Option<f64>,
    pub theta_l: Option<f64>,
}

impl CycleParams {
    /// Fractional parameters of an odd cycle, or a domain error for even `q`.
    pub fn odd(&self) -> Result<(f64, f64)> {
        match (self.q_prime, self.theta_l) {
            (Some(qp), Some(th)) => Ok((qp, th)),
            _ => Err(BoundsError::Domain(format!(
                "q = {} is even; fractional cycle parameters are undefined",
                self.q
            ))),
        }
    }
}

/// Constants of the `q`-cycle, `q >= 3`.
pub fn cycle_params(q: u32) -> Result<CycleParams> {
    if q < 3 {
        return Err(BoundsError::Domain(format!("cycle order {q} < 3")));
    }
    if q % 2 == 0 {
        return Ok(CycleParams {
            q,
            parity: Parity::Even,
            q_prime: None,
            theta_l: None,
        });
    }
    let c = (PI / q as f64).cos();
    Ok(CycleParams {
        q,
        parity: Parity::Odd,
        q_prime: Some(1.0 + 1.0 / c),
        theta_l: Some(q as f64 * c / (1.0 + c)),
    })
}

/// Main upper bound for odd cycles:
/// `ln theta_L(C_q) + R_LP1(q', delta)` with the fractional `q'`.
pub fn upper_main(q: u32, delta: f64) -> Result<f64> {
    let (q_prime, theta_l) = cycle_params(q)?.odd()?;
    Ok(theta_l.ln() + rate_lp1(q_prime, delta)?)
}

/// Schur-product upper bound for odd cycles:
/// `ln theta_L(C_q) + R_LP1(q, delta)` with the integer alphabet in the LP
/// term. Weaker than [`upper_main`] except near `delta = 1 - 1/q`.
pub fn upper_schur(q: u32, delta: f64) -> Result<f64> {
    let (_, theta_l) = cycle_params(q)?.odd()?;
    Ok(theta_l.ln() + rate_lp1(q as f64, delta)?)
}

/// Composite bound `ln(m/2) + binary_curve(delta)`.
///
/// Used with `m = q` (upper bound, odd `q`), `m = q - 1` (lower bound,
/// odd `q`) and `m = q` (exact, even `q`).
pub fn compose_binary(m: u32, binary_curve: impl Fn(f64) -> f64, delta: f64) -> Result<f64> {
    if m < 2 {
        return Err(BoundsError::Domain(format!("composite order {m} < 2")));
    }
    check_delta(delta)?;
    Ok((m as f64 / 2.0).ln() + binary_curve(delta))
}

/// Achievability bound for the pentagon:
/// `ln(5)/2 + R_GV(5, 2*delta)/2`, constant `ln(5)/2` for `delta >= 2/5`.
pub fn lower_pentagon(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let inner = if 2.0 * delta >= 1.0 {
        0.0
    } else {
        rate_gv(5.0, 2.0 * delta)?
    };
    Ok(0.5 * 5.0_f64.ln() + 0.5 * inner)
}

/// Achievability bound for cycles of order `q = 2^r + 1`:
/// `((r-1)/r) ln q + (1/r) R_GV(q, r*delta)`.
pub fn lower_2r1(r: u32, delta: f64) -> Result<f64> {
    if r < 2 {
        return Err(BoundsError::Domain(format!("group exponent r = {r} < 2")));
    }
    check_delta(delta)?;
    let q = (1u64 << r) + 1;
    let rd = r as f64 * delta;
    let inner = if rd >= 1.0 {
        0.0
    } else {
        rate_gv(q as f64, rd)?
    };
    let rf = r as f64;
    Ok((rf - 1.0) / rf * (q as f64).ln() + inner / rf)
}

/// Solution of the max-entropy step inside the weighted GV bound.
#[derive(Clone, Copy, Debug)]
pub struct WeightedGvSolution {
    /// `ln q - H(P*)` in nats.
    pub rate: f64,
    /// Exponential-family parameter `t = exp(-lambda)`; 1 on the uniform branch.
    pub multiplier_t: f64,
    /// Mean weight of the maximizing distribution.
    pub mean_weight: f64,
}

const LAMBDA_MAX: f64 = 60.0;
const MEAN_TOL: f64 = 1e-12;

/// Weighted Gilbert-Varshamov rate over an abelian alphabet.
///
/// Returns `ln q - H(P*)` where `P*` has maximum entropy among
/// distributions with mean weight at most `delta_w`. The maximizer is
/// uniform when the uniform distribution already meets the constraint and
/// otherwise the exponential-family member `P(x) ~ exp(-lambda w(x))` whose
/// mean weight equals `delta_w`; the multiplier is found by bisection on
/// the monotone map `lambda -> mean weight`.
pub fn weighted_gv_solve(weights: &WeightTable, delta_w: f64) -> Result<WeightedGvSolution> {
    if !(delta_w >= 0.0) || !delta_w.is_finite() {
        return Err(BoundsError::Domain(format!("delta_w {delta_w} < 0")));
    }
    let q = weights.q() as usize;
    let mut w = Vec::with_capacity(q);
    for x in 0..q {
        match weights.weight(x as u16) {
            ExtDist::Finite(v) => w.push(v as f64),
            ExtDist::Infinite => {
                return Err(BoundsError::Domain(format!(
                    "weight of symbol {x} is infinite"
                )))
            }
        }
    }
    if w[0] != 0.0 {
        return Err(BoundsError::DegenerateTable);
    }
    if w.iter().all(|&v| v == 0.0) {
        return Err(BoundsError::DegenerateTable);
    }
    let ln_q = (q as f64).ln();
    let uniform_mean = w.iter().sum::<f64>() / q as f64;
    if delta_w >= uniform_mean {
        return Ok(WeightedGvSolution {
            rate: 0.0,
            multiplier_t: 1.0,
            mean_weight: uniform_mean,
        });
    }
    // Partition function and mean weight of P(x) ~ exp(-lambda w(x)).
    let stats = |lambda: f64| -> (f64, f64) {
        let mut z = 0.0;
        let mut m = 0.0;
        for &wi in &w {
            let e = (-lambda * wi).exp();
            z += e;
            m += wi * e;
        }
        (z, m / z)
    };
    let (mut lo, mut hi) = (0.0_f64, LAMBDA_MAX);
    let lambda = if stats(hi).1 >= delta_w {
        hi // constraint unreachable below the cap; concentrate on weight zero
    } else {
        // run the bisection down to f64 resolution; the rate is sensitive
        // to the multiplier at the 1e-12 level the callers rely on
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (_, mean) = stats(mid);
            if mean > delta_w {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (z, mean) = stats(lambda);
    debug_assert!(
        (mean - delta_w).abs() <= MEAN_TOL * (1.0 + delta_w) || lambda == LAMBDA_MAX,
        "constraint missed: mean {mean} vs {delta_w}"
    );
    let entropy = z.ln() + lambda * mean;
    Ok(WeightedGvSolution {
        rate: (ln_q - entropy).max(0.0),
        multiplier_t: (-lambda).exp(),
        mean_weight: mean,
    })
}

/// Rate-only view of [`weighted_gv_solve`].
pub fn weighted_gv_rate(weights: &WeightTable, delta_w: f64) -> Result<f64> {
    Ok(weighted_gv_solve(weights, delta_w)?.rate)
}

/// Achievability bound for the 9-cycle through the exact factor weight:
/// `(2/3) ln 9 + (1/3) R'(3*delta)` with `R'` the weighted GV rate for the
/// factor-weight table `(0,1,1,2,1,1,2,1,1)`.
pub fn lower_9cycle(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let table = WeightTable::nine_cycle();
    let inner = weighted_gv_rate(&table, 3.0 * delta)?;
    Ok(2.0 / 3.0 * 9.0_f64.ln() + inner / 3.0)
}

/// One sampled point of a bound curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    pub delta: f64,
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Upper,
    Lower,
}

/// A labeled sampled bound curve `delta -> rate` for a fixed cycle order.
#[derive(Clone, Debug)]
pub struct BoundCurve {
    pub label: String,
    pub kind: CurveKind,
    pub q: u32,
    pub points: Vec<RatePoint>,
}

/// `steps` evenly spaced values covering `[min, max]` inclusively.
pub fn delta_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2 && max > min);
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Identifiers of the implemented bound curves; these double as stable CLI
/// and CSV labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveId {
    UpperMain,
    UpperSchur,
    UpperProp2Lp1,
    UpperProp2Lp2,
    LowerProp2Gv,
    LowerGvPentagon,
    Lower2r1Gv,
    Lower9Cycle,
}

impl CurveId {
    pub const ALL: [CurveId; 8] = [
        CurveId::UpperMain,
        CurveId::UpperSchur,
        CurveId::UpperProp2Lp1,
        CurveId::UpperProp2Lp2,
        CurveId::LowerProp2Gv,
        CurveId::LowerGvPentagon,
        CurveId::Lower2r1Gv,
        CurveId::Lower9Cycle,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CurveId::UpperMain => "upper-main",
            CurveId::UpperSchur => "upper-schur",
            CurveId::UpperProp2Lp1 => "upper-prop2-lp1",
            CurveId::UpperProp2Lp2 => "upper-prop2-lp2",
            CurveId::LowerProp2Gv => "lower-prop2-gv",
            CurveId::LowerGvPentagon => "lower-gv-pentagon",
            CurveId::Lower2r1Gv => "lower-2r1-gv",
            CurveId::Lower9Cycle => "lower-9cycle",
        }
    }

    pub fn parse(s: &str) -> Option<CurveId> {
        CurveId::ALL.iter().copied().find(|id| id.label() == s)
    }

    pub fn kind(self) -> CurveKind {
        match self {
            CurveId::UpperMain
            | CurveId::UpperSchur
            | CurveId::UpperProp2Lp1
            | CurveId::UpperProp2Lp2 => CurveKind::Upper,
            _ => CurveKind::Lower,
        }
    }
}

/// `r` such that `q = 2^r + 1`, if any.
fn two_r_exponent(q: u32) -> Option<u32> {
    let m = q.checked_sub(1)?;
    if m >= 4 && m.is_power_of_two() {
        Some(m.trailing_zeros())
    } else {
        None
    }
}

/// Value of one bound curve at a single `delta`.
pub fn curve_value(q: u32, id: CurveId, delta: f64) -> Result<f64> {
    if q < 3 {
        return Err(BoundsError::Domain(format!("cycle order {q} < 3")));
    }
    match id {
        CurveId::UpperMain => upper_main(q, delta),
        CurveId::UpperSchur => upper_schur(q, delta),
        CurveId::UpperProp2Lp1 => compose_binary(q, |d| rate_lp1(2.0, d).unwrap(), delta),
        CurveId::UpperProp2Lp2 => compose_binary(q, |d| rate_lp2_binary(d).unwrap(), delta),
        CurveId::LowerProp2Gv => {
            // For odd q the construction drops to the even cycle below; for
            // even q the reduction is exact and uses q itself.
            let m = if q % 2 == 1 { q - 1 } else { q };
            compose_binary(m, |d| rate_gv(2.0, d).unwrap(), delta)
        }
        CurveId::LowerGvPentagon => {
            if q != 5 {
                return Err(BoundsError::Domain(format!(
                    "curve {} requires q = 5, got {q}",
                    id.label()
                )));
            }
            lower_pentagon(delta)
        }
        CurveId::Lower2r1Gv => match two_r_exponent(q) {
            Some(r) => lower_2r1(r, delta),
            None => Err(BoundsError::Domain(format!(
                "curve {} requires q = 2^r + 1 with r >= 2, got {q}",
                id.label()
            ))),
        },
        CurveId::Lower9Cycle => {
            if q != 9 {
                return Err(BoundsError::Domain(format!(
                    "curve {} requires q = 9, got {q}",
                    id.label()
                )));
            }
            lower_9cycle(delta)
        }
    }
}

/// Sample one bound curve on a grid of `delta` values.
pub fn build_curve(q: u32, id: CurveId, grid: &[f64]) -> Result<BoundCurve> {
    let mut points = Vec::with_capacity(grid.len());
    for &delta in grid {
        points.push(RatePoint {
            delta,
            rate: curve_value(q, id, delta)?,
        });
    }
    Ok(BoundCurve {
        label: id.label().to_string(),
        kind: id.kind(),
        q,
        points,
    })
}

/// Pointwise minimum (upper) or maximum (lower) of curves sharing a grid.
pub fn envelope(curves: &[BoundCurve], kind: CurveKind) -> Result<BoundCurve> {
    let first = curves.first().ok_or(BoundsError::GridMismatch)?;
    for c in curves {
        if c.q != first.q
            || c.points.len() != first.points.len()
            || c.points
                .iter()
                .zip(&first.points)
                .any(|(a, b)| a.delta != b.delta)
        {
            return Err(BoundsError::GridMismatch);
        }
    }
    let points = (0..first.points.len())
        .map(|i| {
            let rates = curves.iter().map(|c| c.points[i].rate);
            let rate = match kind {
                CurveKind::Upper => rates.fold(f64::INFINITY, f64::min),
                CurveKind::Lower => rates.fold(f64::NEG_INFINITY, f64::max),
            };
            RatePoint {
                delta: first.points[i].delta,
                rate,
            }
        })
        .collect();
    Ok(BoundCurve {
        label: match kind {
            CurveKind::Upper => "envelope-upper".to_string(),
            CurveKind::Lower => "envelope-lower".to_string(),
        },
        kind,
        q: first.q,
        points,
    })
}
