//! Observation sequences joined by weighted bunches of parallel transports.
//!
//! Between two observations `Δt` steps apart, every sequence `γ` of `Δt`
//! group elements contributes its product `ρ(γ₁)⋯ρ(γ_Δt)` with a nonnegative
//! weight. Sequences are indexed lexicographically: the index written in base
//! `M = |G|` with `Δt` digits, most significant first, lists the elements.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{common_conductor, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::groups::GeneratedRep;
use crate::linalg::{born, CycMatrix, CycVector};

/// Largest number of sequences any enumeration will visit.
pub const ENUMERATION_CEILING: u64 = 10_000_000;

fn sequence_count(group_size: usize, len: u32) -> Option<u64> {
    (group_size as u64).checked_pow(len)
}

/// All `M^len` sequences in lexicographic order.
#[derive(Debug, Clone)]
pub struct Sequences {
    group_size: usize,
    len: u32,
    next: u64,
    total: u64,
}

impl Iterator for Sequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.next >= self.total {
            return None;
        }
        let seq = sequence_at(self.next, self.group_size, self.len);
        self.next += 1;
        Some(seq)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Sequences {}

pub fn enumerate_sequences(group_size: usize, len: u32) -> Result<Sequences> {
    if group_size == 0 || len == 0 {
        return Err(Error::InvalidInput("sequences need a nonempty group and length >= 1".into()));
    }
    let total = sequence_count(group_size, len)
        .filter(|&t| t <= ENUMERATION_CEILING)
        .ok_or_else(|| Error::ResourceLimit(format!("{group_size}^{len} sequences exceed {ENUMERATION_CEILING}")))?;
    Ok(Sequences { group_size, len, next: 0, total })
}

/// Digits of `index` in base `group_size`, most significant first.
pub fn sequence_at(mut index: u64, group_size: usize, len: u32) -> Vec<usize> {
    let m = group_size as u64;
    let mut digits = vec![0usize; len as usize];
    for d in digits.iter_mut().rev() {
        *d = (index % m) as usize;
        index /= m;
    }
    digits
}

/// Inverse of `sequence_at`.
pub fn sequence_index(seq: &[usize], group_size: usize) -> Result<u64> {
    seq.iter().try_fold(0u64, |acc, &g| {
        if g >= group_size {
            return Err(Error::InvalidInput(format!("element {g} outside a group of size {group_size}")));
        }
        acc.checked_mul(group_size as u64)
            .and_then(|a| a.checked_add(g as u64))
            .ok_or_else(|| Error::ResourceLimit("sequence index overflows 64 bits".into()))
    })
}

/// Ordered product `ρ(γ₁)⋯ρ(γ_k)`.
pub fn sequence_value(seq: &[usize], rep: &GeneratedRep) -> Result<CycMatrix> {
    let (first, rest) = seq.split_first().ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
    let mut acc = rep
        .matrices()
        .get(*first)
        .ok_or_else(|| Error::InvalidInput(format!("element {first} outside the group")))?
        .clone();
    for &g in rest {
        let m = rep.matrices().get(g).ok_or_else(|| Error::InvalidInput(format!("element {g} outside the group")))?;
        acc = acc.compose(m)?;
    }
    Ok(acc)
}

/// Sparse weights over the sequences of one interval.
#[derive(Debug, Clone)]
pub struct TransportBunch {
    rep: GeneratedRep,
    interval: u32,
    weights: BTreeMap<u64, Rational>,
}

impl TransportBunch {
    /// Weights must be nonnegative and sum to exactly 1; zero entries are dropped.
    pub fn new(rep: GeneratedRep, interval: u32, weights: BTreeMap<u64, Rational>) -> Result<Self> {
        if interval == 0 {
            return Err(Error::InvalidInput("interval length must be at least 1".into()));
        }
        let count = sequence_count(rep.len(), interval);
        let mut total = Rational::zero();
        let mut kept = BTreeMap::new();
        for (idx, w) in weights {
            if w.is_negative() {
                return Err(Error::InvalidInput(format!("weight {w} of sequence {idx} is negative")));
            }
            if count.is_some_and(|c| idx >= c) {
                return Err(Error::InvalidInput(format!("sequence index {idx} out of range")));
            }
            if w.is_zero() {
                continue;
            }
            total += &w;
            kept.insert(idx, w);
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("weights sum to {total}, expected 1")));
        }
        Ok(TransportBunch { rep, interval, weights: kept })
    }

    /// Weight 1 on the constant sequence `(g, …, g)`.
    pub fn delta(rep: GeneratedRep, element: usize, interval: u32) -> Result<Self> {
        if element >= rep.len() {
            return Err(Error::InvalidInput(format!("element {element} outside a group of size {}", rep.len())));
        }
        let idx = sequence_index(&vec![element; interval as usize], rep.len())?;
        Self::new(rep, interval, BTreeMap::from([(idx, Rational::one())]))
    }

    /// Weight `1/M^Δt` on every sequence.
    pub fn uniform(rep: GeneratedRep, interval: u32) -> Result<Self> {
        let total = enumerate_sequences(rep.len(), interval)?.len() as u64;
        let w = Rational::new(1.into(), total.into());
        let weights = (0..total).map(|i| (i, w.clone())).collect();
        Self::new(rep, interval, weights)
    }

    pub fn rep(&self) -> &GeneratedRep {
        &self.rep
    }

    pub fn interval(&self) -> u32 {
        self.interval
    }

    pub fn weights(&self) -> &BTreeMap<u64, Rational> {
        &self.weights
    }
}

/// `Σ_k w_k · born(ψ_next, ρ(Value γ_k) ψ_prev)` over the weighted sequences.
pub fn transition_probability(bunch: &TransportBunch, prev: &CycVector, next: &CycVector) -> Result<Cyclotomic> {
    if prev.is_zero() || next.is_zero() {
        return Err(Error::ZeroVector);
    }
    let m = bunch.rep.len();
    let mut total = Cyclotomic::zero(1)?;
    for (&idx, w) in &bunch.weights {
        let value = sequence_value(&sequence_at(idx, m, bunch.interval), &bunch.rep)?;
        let moved = value.apply(&prev.promote(common_conductor(prev.conductor(), value.conductor())?)?)?;
        total = total.try_add(&born(next, &moved)?.scale(w))?;
    }
    Ok(total)
}

/// Observation times with the state fixed at each of them.
#[derive(Debug, Clone)]
pub struct ObservationSequence {
    times: Vec<u64>,
    states: Vec<CycVector>,
}

impl ObservationSequence {
    pub fn new(times: Vec<u64>, states: Vec<CycVector>) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidInput("need one state per observation time".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("observation times must increase strictly".into()));
        }
        let dim = states[0].len();
        let mut cond = 1;
        for (t, s) in times.iter().zip(&states) {
            if s.len() != dim {
                return Err(Error::DimensionMismatch(format!("state at t = {t} has length {}", s.len())));
            }
            if s.is_zero() {
                return Err(Error::ZeroVector);
            }
            cond = common_conductor(cond, s.conductor())?;
        }
        let states = states.iter().map(|s| s.promote(cond)).collect::<Result<_>>()?;
        Ok(ObservationSequence { times, states })
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn states(&self) -> &[CycVector] {
        &self.states
    }

    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }
}

/// One-step transition probabilities, one per interval.
pub fn trajectory_steps(seq: &ObservationSequence, bunches: &[TransportBunch]) -> Result<Vec<Cyclotomic>> {
    if bunches.len() != seq.intervals() {
        return Err(Error::InvalidInput(format!("{} bunches for {} intervals", bunches.len(), seq.intervals())));
    }
    let mut steps = Vec::with_capacity(bunches.len());
    for (i, bunch) in bunches.iter().enumerate() {
        let dt = seq.times[i + 1] - seq.times[i];
        if bunch.interval as u64 != dt {
            return Err(Error::InvalidInput(format!(
                "bunch {i} spans {} steps but the interval is {dt}",
                bunch.interval
            )));
        }
        steps.push(transition_probability(bunch, &seq.states[i], &seq.states[i + 1])?);
    }
    Ok(steps)
}

pub fn trajectory_probability(seq: &ObservationSequence, bunches: &[TransportBunch]) -> Result<Cyclotomic> {
    product(&trajectory_steps(seq, bunches)?)
}

/// Sum of the natural logs of the step probabilities; `-inf` once a step is 0.
pub fn trajectory_entropy(seq: &ObservationSequence, bunches: &[TransportBunch]) -> Result<f64> {
    Ok(entropy_of_steps(&trajectory_steps(seq, bunches)?))
}

pub fn entropy_of_steps(steps: &[Cyclotomic]) -> f64 {
    steps.iter().map(|p| if p.is_zero() { f64::NEG_INFINITY } else { p.to_f64().ln() }).sum()
}

fn product(steps: &[Cyclotomic]) -> Result<Cyclotomic> {
    steps.iter().try_fold(Cyclotomic::one(1)?, |acc, p| acc.try_mul(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoChain {
    pub intervals: u32,
    pub conductor: u32,
    pub steps: Vec<Cyclotomic>,
    pub probability: Cyclotomic,
    pub entropy: f64,
}

/// Repeated observation of `e↗` under the splitter `S_{8N}`, once per unit
/// step for `N` steps, with delta bunches. The elapsed time measured against
/// the continuous Zeno time `8N/(2π)` of `S_{8N}` stays at `π/4` for every `N`.
pub fn zeno_chain(intervals: u32) -> Result<ZenoChain> {
    if intervals == 0 {
        return Err(Error::InvalidInput("a chain needs at least one interval".into()));
    }
    let conductor = intervals.checked_mul(8).ok_or_else(|| Error::ResourceLimit("conductor overflow".into()))?;
    let rep = GeneratedRep::splitter_generator(conductor)?;
    let up = CycVector::basis(conductor, 2, 0)?;
    let times = (0..=intervals as u64).collect();
    let seq = ObservationSequence::new(times, vec![up; intervals as usize + 1])?;
    let bunch = TransportBunch::delta(rep, 0, 1)?;
    let bunches = vec![bunch; intervals as usize];
    let steps = trajectory_steps(&seq, &bunches)?;
    Ok(ZenoChain { intervals, conductor, probability: product(&steps)?, entropy: entropy_of_steps(&steps), steps })
}

/// Weights of one interval in a JSON model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BunchSpec {
    /// Element index of the constant sequence.
    Delta(usize),
    Uniform,
    /// Sequence index to weight, weights written as `p/q`.
    Sparse(BTreeMap<u64, String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSpec {
    pub t: u64,
    /// Cyclotomic literals, one per coordinate.
    pub state: Vec<String>,
}

/// JSON description of a full transport experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportModel {
    /// `cyclic_mz:N`, `splitter:N`, `mirror` or `a5`.
    pub group: String,
    pub observations: Vec<ObservationSpec>,
    /// One per interval; a single entry is reused for every interval.
    pub bunches: Vec<BunchSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportOutcome {
    pub times: Vec<u64>,
    pub steps: Vec<Cyclotomic>,
    pub probability: Cyclotomic,
    pub entropy: f64,
}

fn parse_weight(s: &str) -> Result<Rational> {
    let c: Cyclotomic = s.parse()?;
    c.as_rational().map_err(|_| Error::Parse(format!("weight {s:?} is not rational")))
}

impl TransportModel {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("transport model: {e}")))
    }

    pub fn run(&self) -> Result<TransportOutcome> {
        let rep = GeneratedRep::named(&self.group)?;
        let mut times = Vec::with_capacity(self.observations.len());
        let mut states = Vec::with_capacity(self.observations.len());
        for obs in &self.observations {
            let entries = obs.state.iter().map(|s| s.parse()).collect::<Result<Vec<Cyclotomic>>>()?;
            let state = CycVector::new(entries)?;
            if state.len() != rep.degree() {
                return Err(Error::DimensionMismatch(format!(
                    "state at t = {} has length {}, group acts on {}",
                    obs.t,
                    state.len(),
                    rep.degree()
                )));
            }
            times.push(obs.t);
            states.push(state);
        }
        let seq = ObservationSequence::new(times, states)?;
        let n = seq.intervals();
        if !(self.bunches.len() == n || self.bunches.len() == 1) {
            return Err(Error::InvalidInput(format!("{} bunches for {n} intervals", self.bunches.len())));
        }
        let mut bunches = Vec::with_capacity(n);
        for i in 0..n {
            let spec = &self.bunches[if self.bunches.len() == 1 { 0 } else { i }];
            let dt = u32::try_from(seq.times()[i + 1] - seq.times()[i])
                .map_err(|_| Error::ResourceLimit("interval too long".into()))?;
            let bunch = match spec {
                BunchSpec::Delta(g) => TransportBunch::delta(rep.clone(), *g, dt)?,
                BunchSpec::Uniform => TransportBunch::uniform(rep.clone(), dt)?,
                BunchSpec::Sparse(w) => {
                    let weights = w.iter().map(|(k, v)| Ok((*k, parse_weight(v)?))).collect::<Result<_>>()?;
                    TransportBunch::new(rep.clone(), dt, weights)?
                }
            };
            bunches.push(bunch);
        }
        let steps = trajectory_steps(&seq, &bunches)?;
        Ok(TransportOutcome {
            times: seq.times().to_vec(),
            probability: product(&steps)?,
            entropy: entropy_of_steps(&steps),
            steps,
        })
    }
}
