//! Diagonalization of the `N`-cycle permutation representation over ℚ(ζ_N)
//! and the projection of multiplicity vectors `n ∈ ℕ⁸` onto the
//! two-dimensional splitter subspace of `C8`.

use num_complex::Complex64;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::groups::{cycle_generator, mz_splitter};
use crate::linalg::{CycMatrix, CycVector};

/// Eigen-decomposition of the cycle permutation matrix `P`.
///
/// `transform` has entries `ζ^(jk)`, so column `k` is an eigenvector of `P`
/// with eigenvalue `ζ^k`; `inverse` has entries `ζ^(−jk)/N`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub transform: CycMatrix,
    pub inverse: CycMatrix,
    /// Root exponent `k` carried by coordinate `k`.
    pub block_spectrum: Vec<u32>,
}

impl BlockDecomposition {
    /// `inverse · P · transform`, diagonal by construction.
    pub fn diagonalized(&self) -> Result<CycMatrix> {
        let n = self.block_spectrum.len();
        let p = cycle_generator(n)?.matrix();
        self.inverse.compose(&p)?.compose(&self.transform)
    }
}

pub fn cycle_eigenbasis(n: usize) -> Result<BlockDecomposition> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("eigenbasis needs N >= 2, got {n}")));
    }
    let cond = u32::try_from(n)
        .map_err(|_| Error::ConductorTooLarge { requested: n as u64, ceiling: crate::cyclotomic::CONDUCTOR_CEILING })?;
    let inv_n = Rational::new(1.into(), (n as i64).into());
    let mut t = Vec::with_capacity(n * n);
    let mut ti = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let e = ((j * k) % n) as i64;
            t.push(Cyclotomic::root_of_unity(cond, e)?);
            ti.push(Cyclotomic::root_of_unity(cond, -e)?.scale(&inv_n));
        }
    }
    Ok(BlockDecomposition {
        transform: CycMatrix::new(n, n, t)?,
        inverse: CycMatrix::new(n, n, ti)?,
        block_spectrum: (0..n as u32).collect(),
    })
}

fn z8(k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(8, k).expect("conductor 8")
}

fn check_natural(n: &[i64; 8]) -> Result<()> {
    match n.iter().find(|&&v| v < 0) {
        Some(v) => Err(Error::InvalidInput(format!("multiplicity {v} is negative"))),
        None => Ok(()),
    }
}

/// Closed-form projection of `n` onto the splitter subspace:
///
/// `ψ₁ = (−ζ³(n₁+n₃−n₅−n₇) + (1−ζ²)(n₂−n₆))/8`,
/// `ψ₂ = (ζ(n₁−n₃−n₅+n₇) + (1+ζ²)(n₈−n₄))/8`, with `ζ = ζ₈`.
pub fn splitter_projection(n: &[i64; 8]) -> Result<CycVector> {
    check_natural(n)?;
    let r = |v: i64| Rational::new(v.into(), 8.into());
    let [n1, n2, n3, n4, n5, n6, n7, n8] = *n;
    let one = Cyclotomic::one(8)?;
    let psi1 = (-z8(3)).scale(&r(n1 + n3 - n5 - n7)) + (&one - &z8(2)).scale(&r(n2 - n6));
    let psi2 = z8(1).scale(&r(n1 - n3 - n5 + n7)) + (&one + &z8(2)).scale(&r(n8 - n4));
    CycVector::new(vec![psi1, psi2])
}

/// Basis change from the eigen-coordinates with exponents 1 and 7 to the
/// splitter basis in which the cycle acts as `mz_splitter(8)`.
pub fn splitter_basis() -> CycMatrix {
    let half = Rational::new(1.into(), 2.into());
    let a = (&z8(1) - &z8(3)).scale(&half);
    let b = -(&z8(1) + &z8(3)).scale(&half);
    CycMatrix::from_rows(vec![vec![a.clone(), b.clone()], vec![a, -b]]).expect("2x2")
}

/// Same projection computed through the eigenbasis: keep the coordinates with
/// root exponents 1 and 7, then change to the splitter basis.
pub fn splitter_projection_via_eigenbasis(n: &[i64; 8]) -> Result<CycVector> {
    check_natural(n)?;
    let dec = cycle_eigenbasis(8)?;
    let coords = dec.inverse.apply(&CycVector::from_integers(8, n)?)?;
    let kept = CycVector::new(vec![coords.get(1).clone(), coords.get(7).clone()])?;
    splitter_basis().apply(&kept)
}

/// The action of the cycle on the splitter subspace.
pub fn splitter_block() -> CycMatrix {
    mz_splitter(8).expect("n = 8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochApproximation {
    pub multiplicities: [i64; 8],
    /// Fubini–Study distance in radians.
    pub error: f64,
    pub projection: CycVector,
}

/// Largest search space `approximate_bloch_point` will enumerate.
pub const BLOCH_SEARCH_CEILING: u64 = 100_000_000;

/// Fubini–Study distance between two nonzero rays of ℂ².
pub fn fubini_study(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    let na = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt();
    let nb = (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
    let (a0, a1) = (a.0 / na, a.1 / na);
    let (b0, b1) = (b.0 / nb, b.1 / nb);
    let overlap = (a0.conj() * b0 + a1.conj() * b1).norm();
    let cross = (a0 * b1 - a1 * b0).norm();
    cross.atan2(overlap)
}

/// Exhaustive search over `{0..max_entry}⁸` for the multiplicity vector whose
/// splitter projection is closest to `target` on the Bloch sphere. Earlier
/// candidates (with `n₁` varying fastest) win ties.
pub fn approximate_bloch_point(target: (Complex64, Complex64), max_entry: u32) -> Result<BlochApproximation> {
    if target.0.norm_sqr() + target.1.norm_sqr() == 0.0 || !target.0.is_finite() || !target.1.is_finite() {
        return Err(Error::InvalidInput("target must be a finite nonzero vector".into()));
    }
    if max_entry == 0 {
        return Err(Error::InvalidInput("max_entry must be at least 1".into()));
    }
    let radix = max_entry as u64 + 1;
    let total = radix
        .checked_pow(8)
        .filter(|&t| t <= BLOCH_SEARCH_CEILING)
        .ok_or_else(|| Error::ResourceLimit(format!("{radix}^8 candidates exceed {BLOCH_SEARCH_CEILING}")))?;

    // ψ is linear in n, so precompute the float image of each unit vector.
    let mut columns = [(Complex64::default(), Complex64::default()); 8];
    for (j, col) in columns.iter_mut().enumerate() {
        let mut e = [0i64; 8];
        e[j] = 1;
        let v = splitter_projection(&e)?;
        *col = (v.get(0).to_complex(), v.get(1).to_complex());
    }

    let mut digits = [0i64; 8];
    let mut best: Option<([i64; 8], f64)> = None;
    for _ in 1..total {
        for d in digits.iter_mut() {
            *d += 1;
            if *d as u64 == radix {
                *d = 0;
            } else {
                break;
            }
        }
        let mut psi = (Complex64::default(), Complex64::default());
        for (c, &d) in columns.iter().zip(&digits) {
            if d != 0 {
                psi.0 += c.0 * d as f64;
                psi.1 += c.1 * d as f64;
            }
        }
        if psi.0.norm_sqr() + psi.1.norm_sqr() < 1e-20 {
            continue;
        }
        let err = fubini_study(psi, target);
        if best.is_none_or(|(_, b)| err < b - 1e-12) {
            best = Some((digits, err));
        }
    }
    let (multiplicities, error) = best.expect("e1 has a nonzero projection");
    Ok(BlochApproximation { multiplicities, error, projection: splitter_projection(&multiplicities)? })
}
