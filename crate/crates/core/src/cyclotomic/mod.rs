//! Exact arithmetic in cyclotomic fields `ℚ(ζ_n)`.
//!
//! Elements are kept in the power basis `{1, ζ, …, ζ^(φ(n)-1)}` reduced modulo
//! the cyclotomic polynomial `Φ_n`, with integer numerators over one positive
//! common denominator. The representation is canonical, so two elements of the
//! same conductor are equal exactly when their stored data are equal.
//!
//! Operands with different conductors are promoted to the least common
//! multiple before arithmetic (`ζ_n = ζ_m^(m/n)` for `n | m`).

mod poly;
mod text;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use text::parse_cyclotomic;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Largest conductor for which `Φ_n` is built.
pub const CONDUCTOR_CEILING: u32 = 10_000;

/// Reduction data for one conductor.
#[derive(Debug)]
pub(crate) struct CycloField {
    n: u32,
    degree: usize,
    /// Coefficients of `Φ_n`, lowest degree first; monic.
    modulus: Vec<i64>,
    /// Nonzero `(power, coefficient)` terms of `Φ_n` below the leading term.
    tail: Vec<(usize, i64)>,
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycloField {
    pub(crate) fn get(n: u32) -> Result<Arc<CycloField>> {
        if n == 0 {
            return Err(Error::ZeroConductor);
        }
        if n > CONDUCTOR_CEILING {
            return Err(Error::ConductorTooLarge { requested: n as u64, ceiling: CONDUCTOR_CEILING });
        }
        if let Some(f) = field_cache().lock().unwrap().get(&n) {
            return Ok(f.clone());
        }
        // Built outside the lock: the recursion needs the fields of all proper divisors.
        let modulus = build_cyclotomic_polynomial(n)?;
        let degree = modulus.len() - 1;
        let tail = modulus[..degree].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        let field = Arc::new(CycloField { n, degree, modulus, tail });
        Ok(field_cache().lock().unwrap().entry(n).or_insert(field).clone())
    }

    /// Reduces an integer polynomial of any length modulo `Φ_n`.
    fn reduce(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        for k in (d..p.len()).rev() {
            let lead = std::mem::take(&mut p[k]);
            if lead.is_zero() {
                continue;
            }
            for &(i, c) in &self.tail {
                p[k - d + i] -= &lead * c;
            }
        }
        p.resize(d, BigInt::zero());
        p
    }
}

fn build_cyclotomic_polynomial(n: u32) -> Result<Vec<i64>> {
    if n == 1 {
        return Ok(vec![-1, 1]);
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in poly::divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = CycloField::get(d)?;
        let (q, r) = poly::divrem_monic(&p, &phi_d.modulus);
        debug_assert!(r.iter().all(|c| c.is_zero()));
        p = q;
    }
    p.iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::ResourceLimit(format!("coefficient of Φ_{n} exceeds 64 bits"))))
        .collect()
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<i64>> {
    Ok(CycloField::get(n)?.modulus.clone())
}

/// Euler's totient, i.e. the degree of `Φ_n`.
pub fn totient(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Least common conductor of two conductors, checked against the ceiling.
pub fn common_conductor(a: u32, b: u32) -> Result<u32> {
    let l = (a as u64).lcm(&(b as u64));
    if l > CONDUCTOR_CEILING as u64 {
        return Err(Error::ConductorTooLarge { requested: l, ceiling: CONDUCTOR_CEILING });
    }
    Ok(l as u32)
}

/// An element of the cyclotomic field `ℚ(ζ_n)`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn from_parts(field: Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut c = Cyclotomic { field, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for v in &mut self.num {
                *v = -std::mem::take(v);
            }
        }
        if self.num.iter().all(|v| v.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let g = poly::gcd_content(&self.num, &self.den);
        if !g.is_one() {
            for v in &mut self.num {
                *v /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(n: u32) -> Result<Self> {
        let field = CycloField::get(n)?;
        let num = vec![BigInt::zero(); field.degree];
        Ok(Cyclotomic { field, num, den: BigInt::one() })
    }

    pub fn one(n: u32) -> Result<Self> {
        Self::from_rational(n, &Rational::one())
    }

    pub fn from_integer(n: u32, v: i64) -> Result<Self> {
        Self::from_rational(n, &Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u32, r: &Rational) -> Result<Self> {
        let mut z = Self::zero(n)?;
        z.num[0] = r.numer().clone();
        z.den = r.denom().clone();
        z.normalize();
        Ok(z)
    }

    /// `ζ_n^k`, with `k` taken modulo `n`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        Self::from_terms(n, &[(k, Rational::one())])
    }

    /// `Σ c·ζ_n^k` over the given `(k, c)` terms; exponents may be any integers.
    pub fn from_terms(n: u32, terms: &[(i64, Rational)]) -> Result<Self> {
        let field = CycloField::get(n)?;
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut p = vec![BigInt::zero(); (n as usize).max(field.degree)];
        for (k, c) in terms {
            let e = k.rem_euclid(n as i64) as usize;
            p[e] += c.numer() * (&den / c.denom());
        }
        let num = field.reduce(p);
        Ok(Self::from_parts(field, num, den))
    }

    /// Builds `Σ coeffs[k]·ζ_n^k`; any length is accepted and reduced.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Result<Self> {
        let terms: Vec<(i64, Rational)> =
            coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c.clone())).collect();
        Self::from_terms(n, &terms)
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// Length of the reduced coefficient vector, `φ(n)`.
    pub fn degree(&self) -> usize {
        self.field.degree
    }

    /// Reduced power-basis coefficients.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|v| Rational::new(v.clone(), self.den.clone())).collect()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        Rational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|v| v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.den.is_one() && self.num[0].is_one()
    }

    /// True when all power-basis coefficients beyond the constant vanish.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|v| v.is_zero())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// Membership in `ℕ_n`, the natural-coefficient combinations of `n`-th
    /// roots of unity. For `n > 1` this is the ring of cyclotomic integers, so
    /// the test is integrality in the power basis; for `n = 1` it is `ℕ`.
    pub fn is_natural(&self) -> bool {
        if !self.den.is_one() {
            return false;
        }
        self.field.n > 1 || !self.num[0].is_negative()
    }

    pub fn as_rational(&self) -> Result<Rational> {
        if !self.is_rational() {
            return Err(Error::NotRational(self.to_string()));
        }
        Ok(Rational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Re-expresses the element over conductor `m`, which must be a multiple of
    /// the current conductor.
    pub fn promote(&self, m: u32) -> Result<Self> {
        let n = self.field.n;
        if m == n {
            return Ok(self.clone());
        }
        if m == 0 || !m.is_multiple_of(n) {
            return Err(Error::InvalidInput(format!("cannot promote conductor {n} to {m}")));
        }
        let target = CycloField::get(m)?;
        let step = (m / n) as usize;
        let mut p = vec![BigInt::zero(); (m as usize).max(target.degree)];
        for (k, v) in self.num.iter().enumerate() {
            if !v.is_zero() {
                p[k * step] = v.clone();
            }
        }
        let num = target.reduce(p);
        Ok(Self::from_parts(target, num, self.den.clone()))
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let m = common_conductor(self.conductor(), other.conductor())?;
        Ok((self.promote(m)?, other.promote(m)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other)?;
            return a.try_add(&b);
        }
        Ok(self.add_same(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other)?;
            return a.try_sub(&b);
        }
        Ok(self.add_same(other, true))
    }

    fn add_same(&self, other: &Self, subtract: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { -other } else { other.clone() };
        }
        let g = self.den.gcd(&other.den);
        let fa = &other.den / &g;
        let fb = &self.den / &g;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| {
                let l = if fa.is_one() { x.clone() } else { x * &fa };
                let r = if fb.is_one() { y.clone() } else { y * &fb };
                if subtract {
                    l - r
                } else {
                    l + r
                }
            })
            .collect();
        Self::from_parts(self.field.clone(), num, &self.den * fa)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.conductor() != other.conductor() {
            let (a, b) = self.aligned(other)?;
            return a.try_mul(&b);
        }
        Ok(self.mul_same(other))
    }

    fn mul_same(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Cyclotomic {
                field: self.field.clone(),
                num: vec![BigInt::zero(); self.field.degree],
                den: BigInt::one(),
            };
        }
        // Rational operands only scale the other factor.
        if other.is_rational() {
            return self.scale_raw(&other.num[0], &other.den);
        }
        if self.is_rational() {
            return other.scale_raw(&self.num[0], &self.den);
        }
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let num = self.field.reduce(prod);
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    fn scale_raw(&self, num: &BigInt, den: &BigInt) -> Self {
        let n = self.num.iter().map(|v| v * num).collect();
        Self::from_parts(self.field.clone(), n, &self.den * den)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.scale_raw(r.numer(), r.denom())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.conductor()).expect("conductor already validated");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, via extended Euclid against `Φ_n` over ℚ.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let r = Rational::new(self.num[0].clone(), self.den.clone()).recip();
            return Self::from_rational(self.conductor(), &r);
        }
        let a: Vec<Rational> = self.coeffs();
        let modulus: Vec<Rational> =
            self.field.modulus.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let inv = poly::q_inverse_mod(&a, &modulus).ok_or(Error::DivisionByZero)?;
        Self::from_coeffs(self.conductor(), &inv)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.invert()?)
    }

    /// Complex conjugation, the Galois automorphism `ζ ↦ ζ^(n-1)`.
    pub fn conjugate(&self) -> Self {
        let n = self.field.n as usize;
        if self.is_rational() {
            return self.clone();
        }
        let mut p = vec![BigInt::zero(); n.max(self.field.degree)];
        for (k, v) in self.num.iter().enumerate() {
            if !v.is_zero() {
                p[(n - k) % n] += v;
            }
        }
        let num = self.field.reduce(p);
        Self::from_parts(self.field.clone(), num, self.den.clone())
    }

    /// `a·conj(a)`, i.e. `|a|²`; always real.
    pub fn abs_squared(&self) -> Self {
        self.mul_same(&self.conjugate())
    }

    /// Double-precision evaluation at `ζ_n = exp(2πi/n)`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.n as f64;
        let den = big_to_f64(&self.den);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, v) in self.num.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let c = if den.is_finite() && den != 0.0 {
                big_to_f64(v) / den
            } else {
                Rational::new(v.clone(), self.den.clone()).to_f64().unwrap_or(0.0)
            };
            let (s, co) = (2.0 * PI * k as f64 / n).sin_cos();
            re += c * co;
            im += c * s;
        }
        Complex64::new(re, im)
    }

    /// Real part of the float embedding; convenient for probabilities.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            return self.den == other.den && self.num == other.num;
        }
        match self.aligned(other) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), num: self.num.iter().map(|v| -v).collect(), den: self.den.clone() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

// Operator forms panic only when the promoted conductor exceeds the ceiling;
// use the `try_*` methods where that can happen.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).expect("conductor promotion exceeded the ceiling")
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
        impl $tr<Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn int(n: u32, v: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n, v).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn phi_small_cases() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(8).unwrap(), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5).unwrap(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let p = cyclotomic_polynomial(105).unwrap();
        assert_eq!(p.len(), 49);
        assert_eq!(p[7], -2);
        assert_eq!(p[41], -2);
    }

    #[test]
    fn conductor_limits() {
        assert_eq!(Cyclotomic::zero(0).unwrap_err(), Error::ZeroConductor);
        assert!(matches!(Cyclotomic::zero(10_001).unwrap_err(), Error::ConductorTooLarge { .. }));
        assert!(common_conductor(9973, 9967).is_err());
    }

    #[test]
    fn totient_values() {
        let expect = [(1, 1), (2, 1), (8, 4), (12, 4), (100, 40), (97, 96)];
        for (n, t) in expect {
            assert_eq!(totient(n), t);
            assert_eq!(Cyclotomic::zero(n).unwrap().degree(), t as usize);
        }
    }

    #[test]
    fn roots_of_unity_reduce() {
        assert_eq!(z(8, 0), int(8, 1));
        assert_eq!(z(8, 4), int(8, -1));
        assert_eq!(z(8, 9), z(8, 1));
        assert_eq!(z(8, -1), z(8, 7));
        assert_eq!(z(8, 7).coeffs(), vec![q(0, 1), q(0, 1), q(0, 1), q(-1, 1)]);
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&z(8, 1) * &z(8, 7), int(8, 1));
        let d = &z(8, 1) - &z(8, 3);
        assert_eq!(&d * &d, int(8, 2));
        let a = &z(8, 1) + &int(8, 3);
        assert_eq!(&a + &Cyclotomic::zero(8).unwrap(), a);
    }

    #[test]
    fn mixed_conductors_promote_to_lcm() {
        let s = &z(4, 1) + &z(3, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s, &z(12, 3) + &z(12, 4));
        // a rational of conductor 1 is promoted silently
        let r = Cyclotomic::from_rational(1, &q(1, 2)).unwrap();
        assert_eq!((&r * &z(8, 2)).conductor(), 8);
        assert_eq!(r, Cyclotomic::from_rational(8, &q(1, 2)).unwrap());
    }

    #[test]
    fn inversion() {
        assert_eq!(int(8, 1).invert().unwrap(), int(8, 1));
        assert_eq!(z(8, 1).invert().unwrap(), z(8, 7));
        let a = &int(5, 1) + &z(5, 1);
        let inv = a.invert().unwrap();
        assert_eq!(&a * &inv, int(5, 1));
        assert_eq!(Cyclotomic::zero(5).unwrap().invert().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(z(8, 1).conjugate(), z(8, 7));
        let r = Cyclotomic::from_rational(8, &q(3, 4)).unwrap();
        assert_eq!(r.conjugate(), r);
        let c = &z(5, 1) + &z(5, 4);
        assert_eq!(c.conjugate(), c);
        assert!(c.to_complex().im.abs() < 1e-12);
    }

    #[test]
    fn abs_squared_examples() {
        assert_eq!(z(8, 1).abs_squared(), int(8, 1));
        let a = &int(8, 1) + &z(8, 1);
        let expect = &(&int(8, 2) + &z(8, 1)) + &z(8, 7);
        assert_eq!(a.abs_squared(), expect);
        assert!((expect.to_f64() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(Cyclotomic::zero(8).unwrap().abs_squared().is_zero());
    }

    #[test]
    fn predicates() {
        let r = Cyclotomic::from_rational(8, &q(3, 4)).unwrap();
        assert!(r.is_rational());
        assert_eq!(r.as_rational().unwrap(), q(3, 4));
        assert!(!z(8, 1).is_real());
        let c = &z(5, 1) + &z(5, 4);
        assert!(c.is_real());
        assert!(!c.is_rational());
        assert!(matches!(c.as_rational(), Err(Error::NotRational(_))));
    }

    #[test]
    fn naturality_predicate() {
        assert!(int(1, 3).is_natural());
        assert!(!int(1, -3).is_natural());
        // -1 = ζ8^4 is a natural combination once roots are available
        assert!(int(8, -1).is_natural());
        assert!(!Cyclotomic::from_rational(8, &q(1, 2)).unwrap().is_natural());
    }

    #[test]
    fn float_embedding() {
        let h = 2f64.sqrt() / 2.0;
        let c = z(8, 1).to_complex();
        assert!((c.re - h).abs() < 1e-12 && (c.im - h).abs() < 1e-12);
        let i = z(4, 1).to_complex();
        assert!(i.re.abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        let one = int(8, 1).to_complex();
        assert_eq!((one.re, one.im), (1.0, 0.0));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = &z(12, 1) + &int(12, 1);
        let mut acc = int(12, 1);
        for e in 0..7 {
            assert_eq!(a.pow(e), acc);
            acc = &acc * &a;
        }
    }
}
