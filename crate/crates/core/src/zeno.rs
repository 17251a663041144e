//! Survival probabilities `p(t) = |⟨ψ0|U^t|ψ0⟩|²` under a finite-order
//! unitary, their period, and the natural (discrete) Zeno time.

use std::fmt;

use num_complex::Complex64;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{a5_rep3prime, mz_splitter};
use crate::interferometer::{arm_state, Arm};
use crate::linalg::{born, CycMatrix, CycVector, DEFAULT_ORDER_BOUND};

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalSeries {
    probabilities: Vec<Cyclotomic>,
}

impl SurvivalSeries {
    pub fn t_max(&self) -> u64 {
        self.probabilities.len() as u64 - 1
    }

    pub fn get(&self, t: u64) -> &Cyclotomic {
        &self.probabilities[t as usize]
    }

    pub fn probabilities(&self) -> &[Cyclotomic] {
        &self.probabilities
    }

    pub fn floats(&self) -> Vec<f64> {
        self.probabilities.iter().map(Cyclotomic::to_f64).collect()
    }
}

/// Exact `p(t)` for `t = 0..=t_max`, computed by applying `U` incrementally.
pub fn survival_series(u: &CycMatrix, psi0: &CycVector, t_max: u64) -> Result<SurvivalSeries> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    if psi0.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut probabilities = Vec::with_capacity(t_max as usize + 1);
    let mut state = psi0.clone();
    for t in 0..=t_max {
        probabilities.push(born(psi0, &state)?);
        if t < t_max {
            state = u.apply(&state)?;
        }
    }
    Ok(SurvivalSeries { probabilities })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Period {
    Constant,
    Finite(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenoTime {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Constant => f.write_str("const"),
            Period::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Display for ZenoTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZenoTime::Infinite => f.write_str("inf"),
            ZenoTime::Finite(t) => write!(f, "{t}"),
        }
    }
}

fn need_full_period(series: &SurvivalSeries, order: u64) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidInput("order must be positive".into()));
    }
    if series.t_max() < order {
        return Err(Error::InvalidInput(format!(
            "series reaches t = {} but one full period needs t = {order}",
            series.t_max()
        )));
    }
    Ok(())
}

/// Smallest divisor `d` of `order` with `p(t + d) = p(t)` throughout.
pub fn series_period(series: &SurvivalSeries, order: u64) -> Result<Period> {
    need_full_period(series, order)?;
    let p = series.probabilities();
    let o = order as usize;
    if p[..=o].iter().all(|x| x == &p[0]) {
        return Ok(Period::Constant);
    }
    let d = (1..=o)
        .filter(|d| o.is_multiple_of(*d))
        .find(|&d| (0..=o - d).all(|t| p[t + d] == p[t]))
        .expect("p(order) = p(0)");
    Ok(Period::Finite(d as u64))
}

/// First `t` within one period at which `p` attains its minimum; infinite for
/// a constant series.
pub fn natural_zeno_time(series: &SurvivalSeries, order: u64) -> Result<ZenoTime> {
    let period = match series_period(series, order)? {
        Period::Constant => return Ok(ZenoTime::Infinite),
        Period::Finite(d) => d,
    };
    let p = series.probabilities();
    let mut best = 0usize;
    let mut best_f = p[0].to_f64();
    for (t, x) in p.iter().enumerate().take(period as usize).skip(1) {
        if x == &p[best] {
            continue;
        }
        let f = x.to_f64();
        if f < best_f {
            best = t;
            best_f = f;
        }
    }
    Ok(ZenoTime::Finite(best as u64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoReport {
    pub label: String,
    pub order: u64,
    pub period: Period,
    pub tau_z: ZenoTime,
}

/// Order, period and Zeno time of `u` for initial state `psi0`, using a series
/// of length `max(t_max, order)`.
pub fn analyze(label: &str, u: &CycMatrix, psi0: &CycVector, t_max: u64) -> Result<(SurvivalSeries, ZenoReport)> {
    let order = u
        .order(DEFAULT_ORDER_BOUND)?
        .ok_or_else(|| Error::ResourceLimit(format!("{label} has no order <= {DEFAULT_ORDER_BOUND}")))?;
    let series = survival_series(u, psi0, t_max.max(order))?;
    let report = ZenoReport {
        label: label.to_string(),
        order,
        period: series_period(&series, order)?,
        tau_z: natural_zeno_time(&series, order)?,
    };
    Ok((series, report))
}

/// Reports for the eight powers `S^0..S^7` of the balanced splitter, starting
/// on the upper arm.
pub fn zeno_table_c8() -> Result<Vec<ZenoReport>> {
    let s = mz_splitter(8)?;
    let psi0 = arm_state(Arm::Upper);
    (0..8u64).map(|k| analyze(&format!("S^{k}"), &s.power(k)?, &psi0, 8).map(|(_, r)| r)).collect()
}

/// Series and report for the generalized splitter `S_n` acting on `e↗`.
pub fn zeno_scan_sn(n: u32, t_max: u64) -> Result<(SurvivalSeries, ZenoReport)> {
    let s = mz_splitter(n)?;
    let psi0 = CycVector::basis(n, 2, 0)?;
    analyze(&format!("S_{n}"), &s, &psi0, t_max)
}

/// Series for the `A5` generators `U`, `V`, `W`; `psi0` defaults to `e₁`.
pub fn a5_dynamics(t_max: u64, psi0: Option<&CycVector>) -> Result<Vec<(SurvivalSeries, ZenoReport)>> {
    let (u, v, w) = a5_rep3prime()?;
    let default = CycVector::basis(5, 3, 0)?;
    let psi0 = psi0.unwrap_or(&default);
    if psi0.len() != 3 {
        return Err(Error::DimensionMismatch(format!("A5 states have length 3, got {}", psi0.len())));
    }
    [("U", u), ("V", v), ("W", w)]
        .iter()
        .map(|(label, m)| {
            let (series, report) = analyze(label, m, psi0, t_max)?;
            // keep exactly the requested horizon
            let mut probabilities = series.probabilities;
            probabilities.truncate(t_max as usize + 1);
            Ok((SurvivalSeries { probabilities }, report))
        })
        .collect()
}

/// `(⟨H²⟩ − ⟨H⟩²)^(−1/2)` for a Hermitian `h` and normalized `psi0`;
/// `f64::INFINITY` when the variance vanishes.
#[allow(clippy::needless_range_loop)]
pub fn continuous_zeno_time(h: &[Vec<Complex64>], psi0: &[Complex64]) -> Result<f64> {
    let n = psi0.len();
    if n == 0 || h.len() != n || h.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("H must be square and match psi0".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if (h[i][j] - h[j][i].conj()).norm() > 1e-9 {
                return Err(Error::InvalidInput("H is not Hermitian".into()));
            }
        }
    }
    let norm: f64 = psi0.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("psi0 has squared norm {norm}, expected 1")));
    }
    let h_psi: Vec<Complex64> = h.iter().map(|row| row.iter().zip(psi0).map(|(a, b)| a * b).sum()).collect();
    let mean: f64 = psi0.iter().zip(&h_psi).map(|(a, b)| (a.conj() * b).re).sum();
    let second: f64 = h_psi.iter().map(|c| c.norm_sqr()).sum();
    let variance = second - mean * mean;
    if variance < 1e-15 {
        return Ok(f64::INFINITY);
    }
    Ok(variance.powf(-0.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyLimitRow {
    pub intervals: u64,
    pub entropy: f64,
    pub probability: f64,
}

/// `S(N) = −(1/N)(T/τ)²` for each `N`, with `exp(S(N))`.
pub fn zeno_entropy_limit(total_time: f64, tau: f64, intervals: &[u64]) -> Result<Vec<EntropyLimitRow>> {
    if !(total_time > 0.0 && tau > 0.0) || intervals.contains(&0) {
        return Err(Error::InvalidInput("times and interval counts must be positive".into()));
    }
    let x = (total_time / tau).powi(2);
    Ok(intervals
        .iter()
        .map(|&n| {
            let entropy = -x / n as f64;
            EntropyLimitRow { intervals: n, entropy, probability: entropy.exp() }
        })
        .collect())
}
