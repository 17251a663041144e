//! Dense univariate polynomials used behind the cyclotomic field: integer
//! division for building `Φ_n`, and rational Euclid for inversion.
//!
//! Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divides `dividend` by the monic integer polynomial `divisor` and returns the
/// quotient together with the remainder.
pub(crate) fn divrem_monic(dividend: &[BigInt], divisor: &[i64]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dd = divisor.len() - 1;
    debug_assert_eq!(divisor[dd], 1);
    if dividend.len() <= dd {
        return (Vec::new(), dividend.to_vec());
    }
    let mut rem = dividend.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let lead = std::mem::take(&mut rem[k]);
        if lead.is_zero() {
            continue;
        }
        for (i, &c) in divisor[..dd].iter().enumerate() {
            if c != 0 {
                rem[k - dd + i] -= &lead * c;
            }
        }
        quot[k - dd] = lead;
    }
    rem.truncate(dd);
    (quot, rem)
}

pub(crate) type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn q_sub_mul(a: &QPoly, q: &QPoly, b: &QPoly) -> QPoly {
    // a - q*b
    let len = a.len().max(if q.is_empty() || b.is_empty() { 0 } else { q.len() + b.len() - 1 });
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] -= x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut rem = a.clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let f = &rem[k] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                let delta = &f * c;
                rem[k - db + i] -= delta;
            }
        }
        quot[k - db] = f;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Inverse of `a` modulo the irreducible `modulus` via the extended Euclidean
/// algorithm over the rationals. `a` must be nonzero modulo `modulus`.
pub(crate) fn q_inverse_mod(a: &QPoly, modulus: &QPoly) -> Option<QPoly> {
    let mut r0 = modulus.clone();
    let mut r1 = a.clone();
    trim(&mut r0);
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: QPoly = Vec::new();
    let mut s1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        let s2 = q_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd; it must be a nonzero constant when the modulus is irreducible.
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.into_iter().map(|x| x * &c).collect())
}

pub(crate) fn gcd_content(values: &[BigInt], seed: &BigInt) -> BigInt {
    use num_integer::Integer;
    let mut g = seed.abs();
    for v in values {
        if g.is_one() {
            break;
        }
        if !v.is_zero() {
            g = g.gcd(v);
        }
    }
    g
}
