//! Exact Mach–Zehnder optics on the two-arm space `{e↗, e↘}`.
//!
//! Index 0 is the upper arm `e↗`, index 1 the lower arm `e↘`. Circuits list
//! their elements from the source onwards, so the evolution operator is
//! `E_k ⋯ E_1`.

use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::{common_conductor, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::groups::mz_splitter;
use crate::linalg::{CycMatrix, CycVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    Upper,
    Lower,
}

impl Arm {
    pub fn index(self) -> usize {
        match self {
            Arm::Upper => 0,
            Arm::Lower => 1,
        }
    }

    pub fn other(self) -> Arm {
        match self {
            Arm::Upper => Arm::Lower,
            Arm::Lower => Arm::Upper,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Arm::Upper => "upper",
            Arm::Lower => "lower",
        }
    }
}

impl FromStr for Arm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "upper" | "u" | "0" => Ok(Arm::Upper),
            "lower" | "l" | "1" => Ok(Arm::Lower),
            other => Err(Error::Parse(format!("unknown arm {other:?}"))),
        }
    }
}

/// Unit vector on one arm, over ℚ(ζ8).
pub fn arm_state(arm: Arm) -> CycVector {
    CycVector::basis(8, 2, arm.index()).expect("2-dim basis")
}

/// The balanced splitter `S` and the mirror `M = S²`.
pub fn standard_elements() -> (CycMatrix, CycMatrix) {
    let s = mz_splitter(8).expect("n = 8");
    let m = s.power(2).expect("square");
    (s, m)
}

/// `1/√2 = (ζ8 − ζ8³)/2`.
pub fn inv_sqrt2() -> Cyclotomic {
    let z = |k| Cyclotomic::root_of_unity(8, k).expect("conductor 8");
    (&z(1) - &z(3)).scale(&Rational::new(1.into(), 2.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpticalElement {
    /// `αI + βM`.
    Splitter {
        alpha: Cyclotomic,
        beta: Cyclotomic,
    },
    Mirror,
    /// Multiplies the amplitude on `arm` by `ζ_n^k`.
    PhaseShifter {
        arm: Arm,
        k: i64,
        n: u32,
    },
    /// Absorbing detector on one arm.
    Detector(Arm),
}

impl OpticalElement {
    /// Checked splitter `αI + βM`; requires `|α|² + |β|² = 1` and an exactly
    /// unitary result.
    pub fn splitter(alpha: Cyclotomic, beta: Cyclotomic) -> Result<Self> {
        let norm = alpha.abs_squared().try_add(&beta.abs_squared())?;
        if !norm.is_one() {
            return Err(Error::InvalidInput(format!("|alpha|^2 + |beta|^2 = {norm}, not 1")));
        }
        let e = OpticalElement::Splitter { alpha, beta };
        if !e.matrix(e.conductor())?.is_unitary() {
            return Err(Error::NotUnitary);
        }
        Ok(e)
    }

    /// The balanced splitter `S = (I + M)/√2`.
    pub fn balanced_splitter() -> Self {
        OpticalElement::Splitter { alpha: inv_sqrt2(), beta: inv_sqrt2() }
    }

    pub fn phase_shifter(arm: Arm, k: i64, n: u32) -> Result<Self> {
        // validates the conductor
        Cyclotomic::root_of_unity(n, k)?;
        Ok(OpticalElement::PhaseShifter { arm, k, n })
    }

    pub fn conductor(&self) -> u32 {
        match self {
            OpticalElement::Splitter { alpha, beta } => {
                common_conductor(common_conductor(8, alpha.conductor()).unwrap_or(8), beta.conductor()).unwrap_or(8)
            }
            OpticalElement::PhaseShifter { n, .. } => *n,
            _ => 8,
        }
    }

    pub fn is_detector(&self) -> bool {
        matches!(self, OpticalElement::Detector(_))
    }

    /// Matrix of a non-detector element over the given conductor.
    pub fn matrix(&self, conductor: u32) -> Result<CycMatrix> {
        let (_, m) = standard_elements();
        let out = match self {
            OpticalElement::Splitter { alpha, beta } => {
                let id = CycMatrix::identity(conductor, 2)?;
                id.scale(alpha)?.try_add(&m.scale(beta)?)?
            }
            OpticalElement::Mirror => m,
            OpticalElement::PhaseShifter { arm, k, n } => {
                let mut diag = vec![Cyclotomic::one(*n)?, Cyclotomic::one(*n)?];
                diag[arm.index()] = Cyclotomic::root_of_unity(*n, *k)?;
                CycMatrix::diagonal(diag)?
            }
            OpticalElement::Detector(_) => return Err(Error::InvalidInput("a detector has no unitary matrix".into())),
        };
        out.promote(conductor)
    }
}

impl fmt::Display for OpticalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpticalElement::Splitter { alpha, beta } => {
                if *self == OpticalElement::balanced_splitter() {
                    f.write_str("S")
                } else {
                    write!(f, "BS({alpha},{beta})")
                }
            }
            OpticalElement::Mirror => f.write_str("M"),
            OpticalElement::PhaseShifter { arm, k, n } => write!(f, "P({},{k}/{n})", arm.name()),
            OpticalElement::Detector(arm) => write!(f, "D({})", arm.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    elements: Vec<OpticalElement>,
    conductor: u32,
}

impl Circuit {
    pub fn new(elements: Vec<OpticalElement>) -> Result<Self> {
        let mut conductor = 8;
        for e in &elements {
            conductor = common_conductor(conductor, e.conductor())?;
        }
        Ok(Circuit { elements, conductor })
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn has_detector(&self) -> bool {
        self.elements.iter().any(OpticalElement::is_detector)
    }

    /// `E_k ⋯ E_1` for a detector-free circuit.
    pub fn unitary(&self) -> Result<CycMatrix> {
        let mut u = CycMatrix::identity(self.conductor, 2)?;
        for e in &self.elements {
            u = e.matrix(self.conductor)?.compose(&u)?;
        }
        Ok(u)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced ')' in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in {s:?}")));
    }
    out.push(&s[start..]);
    Ok(out)
}

fn parse_element(tok: &str) -> Result<OpticalElement> {
    let tok = tok.trim();
    let (head, args) = match tok.find('(') {
        Some(i) if tok.ends_with(')') => (tok[..i].trim(), Some(&tok[i + 1..tok.len() - 1])),
        Some(_) => return Err(Error::Parse(format!("malformed element {tok:?}"))),
        None => (tok, None),
    };
    let args = args.map(split_top_level).transpose()?;
    match (head, args.as_deref()) {
        ("S", None) => Ok(OpticalElement::balanced_splitter()),
        ("M", None) => Ok(OpticalElement::Mirror),
        ("D", Some([arm])) => Ok(OpticalElement::Detector(arm.parse()?)),
        ("P", Some([arm, phase])) => {
            let (k, n) =
                phase.trim().split_once('/').ok_or_else(|| Error::Parse(format!("phase {phase:?} is not k/n")))?;
            let k: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad phase numerator {k:?}")))?;
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad phase order {n:?}")))?;
            OpticalElement::phase_shifter(arm.parse()?, k, n)
        }
        ("BS", Some([a, b])) => OpticalElement::splitter(a.parse()?, b.parse()?),
        _ => Err(Error::Parse(format!("unknown element {tok:?}"))),
    }
}

impl FromStr for Circuit {
    type Err = Error;
    /// Comma-separated tokens `S`, `M`, `P(arm,k/n)`, `BS(alpha,beta)`, `D(arm)`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Circuit::new(Vec::new());
        }
        let elements = split_top_level(s)?.into_iter().map(parse_element).collect::<Result<Vec<_>>>()?;
        Circuit::new(elements)
    }
}

pub fn run_unitary(circuit: &Circuit, input: &CycVector) -> Result<CycVector> {
    if circuit.has_detector() {
        return Err(Error::InvalidInput("circuit contains detectors; enumerate its branches instead".into()));
    }
    if input.len() != 2 {
        return Err(Error::DimensionMismatch(format!("input has length {}, expected 2", input.len())));
    }
    circuit.unitary()?.apply(&input.promote(common_conductor(circuit.conductor(), input.conductor())?)?)
}

/// One leaf of the measurement tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Detector results in order, ending with the final readout.
    pub outcome: Vec<String>,
    /// Unnormalized amplitude; the input's norm is carried by `probability`.
    pub amplitude: CycVector,
    /// `‖amplitude‖² / ‖input‖²`.
    pub probability: Cyclotomic,
}

impl Branch {
    pub fn label(&self) -> String {
        self.outcome.join(" > ")
    }

    pub fn probability_rational(&self) -> Option<Rational> {
        self.probability.as_rational().ok()
    }
}

fn split_on_arm(v: &CycVector, arm: Arm) -> Result<(CycVector, CycVector)> {
    let zero = Cyclotomic::zero(v.conductor())?;
    let mut hit = vec![zero.clone(), zero.clone()];
    let mut miss = vec![zero.clone(), zero];
    hit[arm.index()] = v.get(arm.index()).clone();
    miss[arm.other().index()] = v.get(arm.other().index()).clone();
    Ok((CycVector::new(hit)?, CycVector::new(miss)?))
}

/// Runs the circuit, splitting the state at every detector into the absorbed
/// ("click") branch, which ends there, and the transmitted ("pass") branch.
/// Surviving branches end with a readout on each output arm. Branches of
/// probability zero are dropped.
pub fn enumerate_branches(circuit: &Circuit, input: &CycVector) -> Result<Vec<Branch>> {
    if input.len() != 2 {
        return Err(Error::DimensionMismatch(format!("input has length {}, expected 2", input.len())));
    }
    if input.is_zero() {
        return Err(Error::ZeroVector);
    }
    let cond = common_conductor(circuit.conductor(), input.conductor())?;
    let input = input.promote(cond)?;
    let norm = input.norm_squared();
    let mut leaves: Vec<(Vec<String>, CycVector)> = Vec::new();
    let mut live: Vec<(Vec<String>, CycVector)> = vec![(Vec::new(), input)];
    for e in circuit.elements() {
        match e {
            OpticalElement::Detector(arm) => {
                let mut next = Vec::with_capacity(live.len());
                for (labels, v) in live {
                    let (hit, miss) = split_on_arm(&v, *arm)?;
                    if !hit.is_zero() {
                        let mut l = labels.clone();
                        l.push(format!("D({})=click", arm.name()));
                        leaves.push((l, hit));
                    }
                    if !miss.is_zero() {
                        let mut l = labels;
                        l.push(format!("D({})=pass", arm.name()));
                        next.push((l, miss));
                    }
                }
                live = next;
            }
            _ => {
                let m = e.matrix(cond)?;
                live = live.into_iter().map(|(l, v)| Ok((l, m.apply(&v)?))).collect::<Result<Vec<_>>>()?;
            }
        }
    }
    for (labels, v) in live {
        for arm in [Arm::Upper, Arm::Lower] {
            let (hit, _) = split_on_arm(&v, arm)?;
            if !hit.is_zero() {
                let mut l = labels.clone();
                l.push(format!("out={}", arm.name()));
                leaves.push((l, hit));
            }
        }
    }
    leaves
        .into_iter()
        .map(|(outcome, amplitude)| {
            let probability = amplitude.norm_squared().try_div(&norm)?;
            Ok(Branch { outcome, amplitude, probability })
        })
        .collect()
}

/// One labelled outcome of the bomb-testing experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct BombOutcome {
    pub scenario: &'static str,
    pub branch: Branch,
}

/// Defective bomb (transparent arm): `S, M, S`.
pub fn defective_bomb_circuit() -> Circuit {
    "S,M,S".parse().expect("static circuit")
}

/// Working bomb: an absorbing detector on the lower arm after the first splitter.
pub fn good_bomb_circuit() -> Circuit {
    "S,D(lower),M,S".parse().expect("static circuit")
}

/// The four outcomes of the interaction-free bomb test with the photon
/// entering on the upper arm.
pub fn bomb_test() -> Result<Vec<BombOutcome>> {
    let input = arm_state(Arm::Upper);
    let mut out = Vec::new();
    for branch in enumerate_branches(&defective_bomb_circuit(), &input)? {
        out.push(BombOutcome { scenario: "defective", branch });
    }
    for branch in enumerate_branches(&good_bomb_circuit(), &input)? {
        let scenario = match branch.outcome.last().map(String::as_str) {
            Some("D(lower)=click") => "exploded",
            Some("out=upper") => "untested",
            _ => "good-intact",
        };
        out.push(BombOutcome { scenario, branch });
    }
    Ok(out)
}
