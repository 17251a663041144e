//! Dense vectors and matrices over a single cyclotomic field, with exact
//! inner products, projectors and the Born rule.
//!
//! States are never normalized in place. Probabilities are always formed as
//! ratios, because norms such as `√2` need not exist in the field at hand.

use std::fmt;

use crate::cyclotomic::{common_conductor, Cyclotomic, Rational};
use crate::error::{Error, Result};

/// Default search bound for [`CycMatrix::order`].
pub const DEFAULT_ORDER_BOUND: u64 = 10_000;

fn unify(entries: Vec<Cyclotomic>) -> Result<(Vec<Cyclotomic>, u32)> {
    let mut n = 1;
    for e in &entries {
        n = common_conductor(n, e.conductor())?;
    }
    let entries = entries.into_iter().map(|e| e.promote(n)).collect::<Result<Vec<_>>>()?;
    Ok((entries, n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycVector {
    entries: Vec<Cyclotomic>,
    conductor: u32,
}

impl CycVector {
    /// Builds a vector, promoting all entries to their common conductor.
    pub fn new(entries: Vec<Cyclotomic>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        let (entries, conductor) = unify(entries)?;
        Ok(CycVector { entries, conductor })
    }

    pub fn from_integers(conductor: u32, values: &[i64]) -> Result<Self> {
        let entries = values.iter().map(|&v| Cyclotomic::from_integer(conductor, v)).collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// The standard basis vector `e_index` of length `dim`.
    pub fn basis(conductor: u32, dim: usize, index: usize) -> Result<Self> {
        let mut values = vec![0; dim];
        *values.get_mut(index).ok_or_else(|| Error::DimensionMismatch(format!("basis index {index} >= {dim}")))? = 1;
        Self::from_integers(conductor, &values)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Cyclotomic {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclotomic::is_zero)
    }

    pub fn promote(&self, n: u32) -> Result<Self> {
        Self::new(self.entries.iter().map(|e| e.promote(n)).collect::<Result<_>>()?)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<Self> {
        Self::new(self.entries.iter().map(|e| e.try_mul(c)).collect::<Result<_>>()?)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Self::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("vector lengths {} and {}", self.len(), other.len())));
        }
        Ok(())
    }

    /// `⟨self|other⟩ = Σ conj(self_i)·other_i`.
    pub fn inner(&self, other: &Self) -> Result<Cyclotomic> {
        self.check_len(other)?;
        let n = common_conductor(self.conductor, other.conductor)?;
        let mut acc = Cyclotomic::zero(n)?;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc.try_add(&a.conjugate().try_mul(b)?)?;
        }
        Ok(acc)
    }

    /// `⟨self|self⟩`, which is real and nonnegative.
    pub fn norm_squared(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.conductor).expect("validated conductor");
        for a in &self.entries {
            if !a.is_zero() {
                acc = &acc + &a.abs_squared();
            }
        }
        acc
    }

    /// Is `self = c·other` for some nonzero scalar `c`?
    pub fn is_proportional_to(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(false);
        }
        let pivot = other.entries.iter().position(|e| !e.is_zero()).unwrap();
        let c = self.entries[pivot].try_div(&other.entries[pivot])?;
        if c.is_zero() {
            return Ok(false);
        }
        Ok(other.scale(&c)? == *self)
    }
}

impl fmt::Display for CycVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CycVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycVector{self}")
    }
}

/// Row-major dense matrix over one cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Cyclotomic>,
    conductor: u32,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Cyclotomic>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(Error::DimensionMismatch(format!("{rows}x{cols} matrix with {} entries", entries.len())));
        }
        let (entries, conductor) = unify(entries)?;
        Ok(CycMatrix { rows, cols, entries, conductor })
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_integers(conductor: u32, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        let entries = values.iter().map(|&v| Cyclotomic::from_integer(conductor, v)).collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, entries)
    }

    pub fn identity(conductor: u32, dim: usize) -> Result<Self> {
        let mut values = vec![0; dim * dim];
        for i in 0..dim {
            values[i * dim + i] = 1;
        }
        Self::from_integers(conductor, dim, dim, &values)
    }

    pub fn diagonal(diag: Vec<Cyclotomic>) -> Result<Self> {
        let dim = diag.len();
        let (diag, n) = unify(diag)?;
        let mut entries = vec![Cyclotomic::zero(n)?; dim * dim];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * dim + i] = d;
        }
        Self::new(dim, dim, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> CycVector {
        CycVector { entries: (0..self.rows).map(|r| self.get(r, c).clone()).collect(), conductor: self.conductor }
    }

    pub fn promote(&self, n: u32) -> Result<Self> {
        Self::new(self.rows, self.cols, self.entries.iter().map(|e| e.promote(n)).collect::<Result<_>>()?)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<Self> {
        Self::new(self.rows, self.cols, self.entries.iter().map(|e| e.try_mul(c)).collect::<Result<_>>()?)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(r)).collect(),
            conductor: self.conductor,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum shapes differ".into()));
        }
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?,
        )
    }

    /// Exact matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = common_conductor(self.conductor, other.conductor)?;
        let a = self.promote(n)?;
        let b = other.promote(n)?;
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = Cyclotomic::zero(n)?;
                for k in 0..a.cols {
                    let x = a.get(i, k);
                    let y = b.get(k, j);
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
                out.push(acc);
            }
        }
        Self::new(self.rows, other.cols, out)
    }

    /// Exact matrix-vector product.
    pub fn apply(&self, v: &CycVector) -> Result<CycVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let n = common_conductor(self.conductor, v.conductor())?;
        let a = self.promote(n)?;
        let v = v.promote(n)?;
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..a.rows {
            let mut acc = Cyclotomic::zero(n)?;
            for (k, y) in v.entries.iter().enumerate() {
                let x = a.get(i, k);
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            out.push(acc);
        }
        CycVector::new(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).conjugate());
            }
        }
        CycMatrix { rows: self.cols, cols: self.rows, entries, conductor: self.conductor }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// `A†A = I`, checked exactly.
    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.dagger().compose(self).is_ok_and(|p| p.is_identity())
    }

    pub fn trace(&self) -> Result<Cyclotomic> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
        }
        let mut acc = Cyclotomic::zero(self.conductor)?;
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    /// `self^t` by repeated squaring; `self^0 = I`.
    pub fn power(&self, mut t: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.conductor, self.rows)?;
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            t >>= 1;
            if t > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Least `t` in `1..=bound` with `self^t = I`, if any.
    pub fn order(&self, bound: u64) -> Result<Option<u64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
        }
        let mut p = self.clone();
        for t in 1..=bound {
            if p.is_identity() {
                return Ok(Some(t));
            }
            if t < bound {
                p = p.compose(self)?;
            }
        }
        Ok(None)
    }

    /// True iff the order is exactly `d`: `self^d = I` and `self^(d/p) ≠ I`
    /// for every prime `p | d`.
    pub fn has_order(&self, d: u64) -> Result<bool> {
        if d == 0 {
            return Ok(false);
        }
        if !self.power(d)?.is_identity() {
            return Ok(false);
        }
        let mut rest = d;
        let mut p = 2;
        while rest > 1 {
            if p * p > rest {
                p = rest;
            }
            if rest.is_multiple_of(p) {
                if self.power(d / p)?.is_identity() {
                    return Ok(false);
                }
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
            }
            p += 1;
        }
        Ok(true)
    }

    /// The orthogonal projector `|a⟩⟨a| / ⟨a|a⟩`.
    pub fn projector(a: &CycVector) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroVector);
        }
        let inv_norm = a.norm_squared().invert()?;
        let dim = a.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(a.get(i).try_mul(&a.get(j).conjugate())?.try_mul(&inv_norm)?);
            }
        }
        Self::new(dim, dim, entries)
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("\n")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

/// Born probability `|⟨φ|ψ⟩|² / (⟨φ|φ⟩⟨ψ|ψ⟩)` of registering `psi` with an
/// apparatus selecting `phi`.
pub fn born(phi: &CycVector, psi: &CycVector) -> Result<Cyclotomic> {
    if phi.is_zero() || psi.is_zero() {
        return Err(Error::ZeroVector);
    }
    let amp = phi.inner(psi)?;
    if amp.is_zero() {
        return Ok(amp);
    }
    let den = phi.norm_squared().try_mul(&psi.norm_squared())?;
    let num = amp.abs_squared();
    if den.is_rational() {
        let r = den.as_rational()?;
        return Ok(num.scale(&r.recip()));
    }
    num.try_div(&den)
}

/// Born probability as an exact rational; errors when it is irrational.
pub fn born_rational(phi: &CycVector, psi: &CycVector) -> Result<Rational> {
    born(phi, psi)?.as_rational()
}
