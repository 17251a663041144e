//! Lattice random walk with drift: exact macrostate probabilities, entropies
//! of observed steps and their continuum approximations, and most probable
//! observed paths.

// `!(x < 1.0)` style checks are deliberate: NaN must be rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkParams {
    v: Rational,
}

impl WalkParams {
    /// Drift velocity `v = α₊ − α₋` with `−1 ≤ v ≤ 1`.
    pub fn new(v: Rational) -> Result<Self> {
        if v.abs() > Rational::one() {
            return Err(Error::InvalidInput(format!("drift velocity {v} outside [-1, 1]")));
        }
        Ok(WalkParams { v })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::new(Rational::new(num.into(), den.into()))
    }

    pub fn velocity(&self) -> &Rational {
        &self.v
    }

    pub fn velocity_f64(&self) -> f64 {
        self.v.to_f64().unwrap_or(f64::NAN)
    }

    /// Probability of a step to the right, `(1+v)/2`.
    pub fn alpha_plus(&self) -> Rational {
        (Rational::one() + &self.v) / Rational::from_integer(2.into())
    }

    /// Probability of a step to the left, `(1−v)/2`.
    pub fn alpha_minus(&self) -> Rational {
        (Rational::one() - &self.v) / Rational::from_integer(2.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkObservation {
    pub t: u64,
    pub x: i64,
}

fn check_step(dx: i64, dt: u64) -> Result<(u64, u64)> {
    if dx.unsigned_abs() > dt {
        return Err(Error::InvalidInput(format!("|dx| = {} exceeds dt = {dt}", dx.unsigned_abs())));
    }
    if !(dx.unsigned_abs() + dt).is_multiple_of(2) {
        return Err(Error::ParityViolation { t: dt as i64, x: dx });
    }
    let right = (dt as i128 + dx as i128) / 2;
    Ok((right as u64, dt - right as u64))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(t, (t+x)/2) α₊^((t+x)/2) α₋^((t−x)/2)`, exactly.
pub fn macrostate_probability(x: i64, t: u64, params: &WalkParams) -> Result<Rational> {
    let (right, left) = check_step(x, t)?;
    let c = Rational::from_integer(binomial(t, right));
    Ok(c * num_traits::pow(params.alpha_plus(), right as usize) * num_traits::pow(params.alpha_minus(), left as usize))
}

fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational without overflowing `f64`.
pub fn ln_rational(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// `ln` of the exact step probability; `-inf` when it is zero.
pub fn one_step_entropy(dx: i64, dt: u64, params: &WalkParams) -> Result<f64> {
    Ok(ln_rational(&macrostate_probability(dx, dt, params)?))
}

/// `Σ_{k ≤ n} ln k`.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// The one-step entropy written through log-factorials:
/// `ln Δt! − ln R! − ln L! + R ln α₊ + L ln α₋` with `R, L = (Δt ± Δx)/2`.
pub fn factorial_entropy(dx: i64, dt: u64, params: &WalkParams) -> Result<f64> {
    let (right, left) = check_step(dx, dt)?;
    let term = |n: u64, a: Rational| if n == 0 { 0.0 } else { n as f64 * ln_rational(&a) };
    Ok(ln_factorial(dt) - ln_factorial(right) - ln_factorial(left)
        + term(right, params.alpha_plus())
        + term(left, params.alpha_minus()))
}

/// Stirling form `Δt ln Δt − ((Δt+Δx)/2) ln((Δt+Δx)/(1+v)) − ((Δt−Δx)/2) ln((Δt−Δx)/(1−v))`.
pub fn stirling_entropy(dx: f64, dt: f64, v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidInput(format!("Stirling form needs |v| < 1, got {v}")));
    }
    let (plus, minus) = (dt + dx, dt - dx);
    if !(plus > 0.0 && minus > 0.0) {
        return Err(Error::InvalidInput(format!("Stirling form needs dt > |dx|, got dt = {dt}, dx = {dx}")));
    }
    Ok(dt * dt.ln() - plus / 2.0 * (plus / (1.0 + v)).ln() - minus / 2.0 * (minus / (1.0 - v)).ln())
}

/// `Δx* = v Δt`.
pub fn stationary_step(dt: u64, params: &WalkParams) -> Rational {
    &params.v * Rational::from_integer(dt.into())
}

/// Curvature `−1/(2(1−v²))` of the entropy around its maximum, per unit time.
pub fn taylor_coefficient(v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidInput(format!("needs |v| < 1, got {v}")));
    }
    Ok(-0.5 / (1.0 - v * v))
}

/// `((ẋ − v)/√(1 − v²))²`.
pub fn lagrangian(xdot: f64, v: f64) -> Result<f64> {
    taylor_coefficient(v)?;
    Ok((xdot - v).powi(2) / (1.0 - v * v))
}

/// `−½ L(Δx/Δt, v) Δt`.
pub fn quadratic_entropy_approx(dx: f64, dt: f64, v: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("dt must be positive".into()));
    }
    Ok(-0.5 * lagrangian(dx / dt, v)? * dt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkPath {
    pub points: Vec<WalkObservation>,
    pub step_probabilities: Vec<Rational>,
    pub step_entropies: Vec<f64>,
    pub probability: Rational,
    pub entropy: f64,
}

fn params_for(params: &[WalkParams], i: usize, intervals: usize) -> Result<&WalkParams> {
    match params.len() {
        1 => Ok(&params[0]),
        n if n == intervals => Ok(&params[i]),
        n => Err(Error::InvalidInput(format!("{n} velocities for {intervals} intervals"))),
    }
}

fn check_observation(o: &WalkObservation, from: &WalkObservation) -> Result<()> {
    let dt =
        o.t.checked_sub(from.t)
            .ok_or_else(|| Error::InvalidInput(format!("observation at t = {} precedes t = {}", o.t, from.t)))?;
    let dx = o.x - from.x;
    if dx.unsigned_abs() > dt {
        return Err(Error::InvalidInput(format!("observation ({}, {}) is out of reach", o.t, o.x)));
    }
    if !(dx.unsigned_abs() + dt).is_multiple_of(2) {
        return Err(Error::ParityViolation { t: o.t as i64, x: o.x });
    }
    Ok(())
}

/// Evaluates a fully specified observed path.
pub fn path_report(points: &[WalkObservation], params: &[WalkParams]) -> Result<WalkPath> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty path".into()));
    }
    let n = points.len() - 1;
    let mut step_probabilities = Vec::with_capacity(n);
    for (i, w) in points.windows(2).enumerate() {
        check_observation(&w[1], &w[0])?;
        let p = params_for(params, i, n)?;
        step_probabilities.push(macrostate_probability(w[1].x - w[0].x, w[1].t - w[0].t, p)?);
    }
    let step_entropies: Vec<f64> = step_probabilities.iter().map(ln_rational).collect();
    let probability = step_probabilities.iter().fold(Rational::one(), |acc, p| acc * p);
    Ok(WalkPath {
        points: points.to_vec(),
        entropy: step_entropies.iter().sum(),
        step_probabilities,
        step_entropies,
        probability,
    })
}

#[derive(Clone)]
struct Cell {
    x: i64,
    score: f64,
    exact: Rational,
    from: usize,
}

const TIE: f64 = 1e-12;

/// Positions at `times` (strictly between the endpoints) maximizing the
/// summed exact-log step entropies. Near-equal scores are settled by exact
/// probabilities, then by closeness to the straight line between endpoints.
pub fn most_probable_path(
    start: WalkObservation,
    end: WalkObservation,
    times: &[u64],
    params: &[WalkParams],
) -> Result<WalkPath> {
    check_observation(&end, &start)?;
    let mut all_times = Vec::with_capacity(times.len() + 2);
    all_times.push(start.t);
    all_times.extend_from_slice(times);
    all_times.push(end.t);
    if all_times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("intermediate times must lie strictly inside and increase".into()));
    }
    let intervals = all_times.len() - 1;
    params_for(params, 0, intervals)?;
    let line = |t: u64| start.x as f64 + (end.x - start.x) as f64 * (t - start.t) as f64 / (end.t - start.t) as f64;

    let mut layers: Vec<Vec<Cell>> = vec![vec![Cell { x: start.x, score: 0.0, exact: Rational::one(), from: 0 }]];
    for (i, &t) in all_times.iter().enumerate().skip(1) {
        let p = params_for(params, i - 1, intervals)?;
        let dt = t - all_times[i - 1];
        let elapsed = (t - start.t) as i64;
        let remaining = (end.t - t) as i64;
        let positions: Vec<i64> = if i == intervals {
            vec![end.x]
        } else {
            (start.x - elapsed..=start.x + elapsed).step_by(2).filter(|x| (end.x - x).abs() <= remaining).collect()
        };
        let prev = layers.last().expect("start layer");
        let mut layer = Vec::with_capacity(positions.len());
        for x in positions {
            let mut best: Option<Cell> = None;
            for (j, c) in prev.iter().enumerate() {
                let dx = x - c.x;
                if dx.unsigned_abs() > dt {
                    continue;
                }
                let step = macrostate_probability(dx, dt, p)?;
                let cand = Cell { x, score: c.score + ln_rational(&step), exact: &c.exact * &step, from: j };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let tied =
                            cand.score == b.score || (cand.score - b.score).abs() <= TIE * b.score.abs().max(1.0);
                        if !tied {
                            cand.score > b.score
                        } else if cand.exact != b.exact {
                            cand.exact > b.exact
                        } else {
                            let tp = all_times[i - 1];
                            (prev[j].x as f64 - line(tp)).abs() < (prev[b.from].x as f64 - line(tp)).abs()
                        }
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
            if let Some(b) = best {
                layer.push(b);
            }
        }
        if layer.is_empty() {
            return Err(Error::InvalidInput("no feasible lattice path".into()));
        }
        layers.push(layer);
    }

    let mut xs = vec![0i64; layers.len()];
    let mut idx = 0;
    for (i, layer) in layers.iter().enumerate().rev() {
        xs[i] = layer[idx].x;
        idx = layer[idx].from;
    }
    let points: Vec<WalkObservation> = all_times.iter().zip(xs).map(|(&t, x)| WalkObservation { t, x }).collect();
    path_report(&points, params)
}

/// Central-difference value of `ẍ(1−v²) + 2ẋ v v̇ − (1+v²) v̇` at every
/// interior sample.
pub fn euler_lagrange_residual(x: &[f64], v: &[f64], dt: f64) -> Result<Vec<f64>> {
    if x.len() < 3 || x.len() != v.len() {
        return Err(Error::InvalidInput("need at least 3 samples of both x and v".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("dt must be positive".into()));
    }
    if v.iter().any(|s| !(s.abs() < 1.0)) {
        return Err(Error::InvalidInput("needs |v| < 1 throughout".into()));
    }
    Ok((1..x.len() - 1)
        .map(|i| {
            let xdd = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dt * dt);
            let xd = (x[i + 1] - x[i - 1]) / (2.0 * dt);
            let vd = (v[i + 1] - v[i - 1]) / (2.0 * dt);
            let w = v[i];
            xdd * (1.0 - w * w) + 2.0 * xd * w * vd - (1.0 + w * w) * vd
        })
        .collect())
}

/// Observations must share the lattice parity of the first one.
pub fn check_observations(obs: &[WalkObservation]) -> Result<()> {
    for w in obs.windows(2) {
        check_observation(&w[1], &w[0])?;
    }
    Ok(())
}
