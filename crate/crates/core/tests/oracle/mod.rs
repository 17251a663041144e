//! Test-only reference arithmetic that shares no code with the library:
//! ℚ(ζ₈) with ζ⁴ = −1, dense 2×2 products, exact binomials.
#![allow(dead_code)]

use std::ops::{Add, Mul, Neg, Sub};

use combq::{Cyclotomic, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `c₀ + c₁ζ + c₂ζ² + c₃ζ³`, `ζ = e^{iπ/4}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q8(pub [Rational; 4]);

impl Q8 {
    pub fn zero() -> Self {
        Q8([Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn rat(r: Rational) -> Self {
        let mut z = Self::zero();
        z.0[0] = r;
        z
    }

    pub fn int(n: i64) -> Self {
        Self::rat(q(n, 1))
    }

    /// `ζᵏ` for any integer `k`.
    pub fn zeta(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut z = Self::zero();
        if k < 4 {
            z.0[k] = Rational::one();
        } else {
            z.0[k - 4] = -Rational::one();
        }
        z
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Q8(self.0.clone().map(|c| c * r))
    }

    /// Image under `ζ ↦ ζᵏ` for odd `k`.
    pub fn galois(&self, k: i64) -> Self {
        (0..4).fold(Self::zero(), |acc, j| acc + Self::zeta(j as i64 * k).scale(&self.0[j]))
    }

    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.0[1..].iter().all(Zero::is_zero).then(|| self.0[0].clone())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let others = self.galois(3) * self.galois(5) * self.galois(7);
        let norm = (self.clone() * others.clone()).as_rational().expect("field norm is rational");
        others.scale(&(Rational::one() / norm))
    }

    pub fn abs2(&self) -> Self {
        self.clone() * self.conj()
    }

    pub fn to_f64_re(&self) -> f64 {
        let f = |r: &Rational| {
            r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
        };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        f(&self.0[0]) + h * f(&self.0[1]) - h * f(&self.0[3])
    }

    /// Reads a library value, promoting to conductor 8.
    pub fn from_lib(c: &Cyclotomic) -> Self {
        let c = c.promote(8).expect("conductor divides 8");
        let k = c.coeffs();
        assert_eq!(k.len(), 4);
        Q8([k[0].clone(), k[1].clone(), k[2].clone(), k[3].clone()])
    }
}

impl Add for Q8 {
    type Output = Q8;
    fn add(self, o: Q8) -> Q8 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Q8([a + e, b + f, c + g, d + h])
    }
}

impl Sub for Q8 {
    type Output = Q8;
    fn sub(self, o: Q8) -> Q8 {
        self + -o
    }
}

impl Neg for Q8 {
    type Output = Q8;
    fn neg(self) -> Q8 {
        Q8(self.0.map(|c| -c))
    }
}

impl Mul for Q8 {
    type Output = Q8;
    fn mul(self, o: Q8) -> Q8 {
        let mut acc: [Rational; 7] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                acc[i + j] += &self.0[i] * &o.0[j];
            }
        }
        let [a0, a1, a2, a3, a4, a5, a6] = acc;
        Q8([a0 - a4, a1 - a5, a2 - a6, a3])
    }
}

pub type V2 = [Q8; 2];
pub type M2 = [[Q8; 2]; 2];

pub fn mat_vec(m: &M2, v: &V2) -> V2 {
    [
        m[0][0].clone() * v[0].clone() + m[0][1].clone() * v[1].clone(),
        m[1][0].clone() * v[0].clone() + m[1][1].clone() * v[1].clone(),
    ]
}

pub fn mat_mul(a: &M2, b: &M2) -> M2 {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn identity() -> M2 {
    [[Q8::int(1), Q8::zero()], [Q8::zero(), Q8::int(1)]]
}

/// Balanced splitter `(1/√2)[[1, i], [i, 1]]`.
pub fn splitter() -> M2 {
    let h = q(1, 2);
    let a = (Q8::zeta(1) - Q8::zeta(3)).scale(&h);
    let b = (Q8::zeta(1) + Q8::zeta(3)).scale(&h);
    [[a.clone(), b.clone()], [b, a]]
}

/// Mirror `[[0, i], [i, 0]]`.
pub fn mirror() -> M2 {
    [[Q8::zero(), Q8::zeta(2)], [Q8::zeta(2), Q8::zero()]]
}

pub fn inner(a: &V2, b: &V2) -> Q8 {
    a[0].conj() * b[0].clone() + a[1].conj() * b[1].clone()
}

/// `|⟨φ|ψ⟩|² / (⟨φ|φ⟩⟨ψ|ψ⟩)`.
pub fn born(phi: &V2, psi: &V2) -> Q8 {
    inner(phi, psi).abs2() * (inner(phi, phi) * inner(psi, psi)).inv()
}

pub fn vec_from_lib(v: &combq::linalg::CycVector) -> V2 {
    assert_eq!(v.len(), 2);
    [Q8::from_lib(v.get(0)), Q8::from_lib(v.get(1))]
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(t, R) α₊^R α₋^L` for a walk with drift `v`.
pub fn walk_probability(x: i64, t: u64, v: &Rational) -> Rational {
    if x.unsigned_abs() > t || (x.unsigned_abs() + t) % 2 == 1 {
        return Rational::zero();
    }
    let r = (t as i64 + x) as u64 / 2;
    let l = t - r;
    let ap = (Rational::one() + v) / q(2, 1);
    let am = (Rational::one() - v) / q(2, 1);
    let pow = |b: &Rational, e: u64| (0..e).fold(Rational::one(), |acc, _| acc * b);
    Rational::from_integer(binomial(t, r)) * pow(&ap, r) * pow(&am, l)
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
