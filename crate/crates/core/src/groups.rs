//! Permutations and the concrete unitary representations used by the
//! experiments: the `N`-cycle, the generalized splitter `S_N` of the cyclic
//! group `C_N`, and three generators of the icosahedral triplet `3′` of `A5`.
//!
//! Permutations act on the right, as in GAP: `p.then(q)` applies `p` first.
//! The permutation matrix has `(P_p)_{i, p(i)} = 1`, so `(P_p n)_i = n_{p(i)}`
//! and `P_{p.then(q)} = P_p · P_q`.

use num_integer::Integer;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::linalg::CycMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation of `degree` points from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if p >= degree || next >= degree {
                    return Err(Error::InvalidInput(format!("point outside 0..{degree}")));
                }
                images[p] = next;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch("permutation degrees differ".into()));
        }
        Ok(Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { images: inv }
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Order of the permutation: lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    /// 0/1 matrix with `(P)_{i, p(i)} = 1`, over conductor 1.
    pub fn matrix(&self) -> CycMatrix {
        let n = self.degree();
        let mut values = vec![0i64; n * n];
        for (i, &p) in self.images.iter().enumerate() {
            values[i * n + p] = 1;
        }
        CycMatrix::from_integers(1, n, n, &values).expect("square 0/1 matrix")
    }
}

/// The `n`-cycle `0 → 1 → … → n−1 → 0`.
pub fn cycle_generator(n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidInput("cycle of length 0".into()));
    }
    Ok(Permutation { images: (0..n).map(|i| (i + 1) % n).collect() })
}

pub fn permutation_matrix(p: &Permutation) -> CycMatrix {
    p.matrix()
}

pub fn element_order(p: &Permutation) -> u64 {
    p.order()
}

/// Exponent of the cyclic group `C_n`.
pub fn cyclic_group_exponent(n: u64) -> u64 {
    n
}

/// Generalized beam splitter of `C_n`:
/// `½[[ζ+ζ^(n−1), ζ−ζ^(n−1)], [ζ−ζ^(n−1), ζ+ζ^(n−1)]]` with `ζ = ζ_n`.
///
/// Its eigenvalues are `ζ` and `ζ^(n−1)`, so its order is `n`. For `n = 8` it
/// coincides entry by entry with `½[[ζ−ζ³, ζ+ζ³], [ζ+ζ³, ζ−ζ³]]`.
pub fn mz_splitter(n: u32) -> Result<CycMatrix> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("splitter needs n >= 3, got {n}")));
    }
    let half = Rational::new(1.into(), 2.into());
    let z = Cyclotomic::root_of_unity(n, 1)?;
    let zb = Cyclotomic::root_of_unity(n, n as i64 - 1)?;
    let d = (&z + &zb).scale(&half);
    let o = (&z - &zb).scale(&half);
    CycMatrix::from_rows(vec![vec![d.clone(), o.clone()], vec![o, d]])
}

/// Golden ratio `(1+√5)/2 = −ζ5² − ζ5³`.
pub fn golden_ratio() -> Cyclotomic {
    let z2 = Cyclotomic::root_of_unity(5, 2).expect("conductor 5");
    let z3 = Cyclotomic::root_of_unity(5, 3).expect("conductor 5");
    -(&z2 + &z3)
}

/// Generators of orders 2, 3 and 5 of the `3′` representation of `A5`, over
/// conductor 5.
pub fn a5_rep3prime() -> Result<(CycMatrix, CycMatrix, CycMatrix)> {
    let phi = golden_ratio();
    let inv = phi.invert()?;
    let one = Cyclotomic::one(5)?;
    let half = Rational::new(1.into(), 2.into());
    let m = |rows: [[Cyclotomic; 3]; 3]| -> Result<CycMatrix> {
        CycMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).map(|m| m.scale_rational(&half))
    };
    let u = m([
        [-&phi, inv.clone(), one.clone()],
        [inv.clone(), -&one, phi.clone()],
        [one.clone(), phi.clone(), inv.clone()],
    ])?;
    let v = Permutation::from_cycles(3, &[&[0, 2, 1]])?.matrix().promote(5)?;
    let w = m([[-&phi, -&inv, one.clone()], [inv.clone(), one.clone(), phi.clone()], [-&one, phi.clone(), -&inv]])?;
    Ok((u, v, w))
}

/// A finite list of unitary matrices, one per group element or generator,
/// sharing one conductor.
#[derive(Debug, Clone)]
pub struct GeneratedRep {
    degree: usize,
    conductor: u32,
    labels: Vec<String>,
    matrices: Vec<CycMatrix>,
    orders: Vec<u64>,
}

impl GeneratedRep {
    /// Validates unitarity and finds the order (at most `order_bound`) of every matrix.
    pub fn new(named: Vec<(String, CycMatrix)>, order_bound: u64) -> Result<Self> {
        let mut with_orders = Vec::with_capacity(named.len());
        for (label, m) in named {
            if !m.is_square() {
                return Err(Error::DimensionMismatch(format!("{label} is not square")));
            }
            let order = m
                .order(order_bound)?
                .ok_or_else(|| Error::InvalidInput(format!("{label} has no order <= {order_bound}")))?;
            with_orders.push((label, m, order));
        }
        Self::with_orders(with_orders)
    }

    /// Like `new`, but each matrix comes with its claimed order, which is
    /// verified by repeated squaring instead of searched for.
    pub fn with_orders(named: Vec<(String, CycMatrix, u64)>) -> Result<Self> {
        let first = named.first().ok_or_else(|| Error::InvalidInput("representation without elements".into()))?;
        let degree = first.1.rows();
        let mut conductor = 1;
        for (label, m, order) in &named {
            if !m.is_square() || m.rows() != degree {
                return Err(Error::DimensionMismatch(format!("{label} is not {degree}x{degree}")));
            }
            if !m.is_unitary() {
                return Err(Error::NotUnitary);
            }
            if !m.has_order(*order)? {
                return Err(Error::InvalidInput(format!("{label} does not have order {order}")));
            }
            conductor = crate::cyclotomic::common_conductor(conductor, m.conductor())?;
        }
        let mut labels = Vec::with_capacity(named.len());
        let mut matrices = Vec::with_capacity(named.len());
        let mut orders = Vec::with_capacity(named.len());
        for (label, m, order) in named {
            labels.push(label);
            matrices.push(m.promote(conductor)?);
            orders.push(order);
        }
        Ok(GeneratedRep { degree, conductor, labels, matrices, orders })
    }

    /// All `n` elements `S_n^0, …, S_n^(n−1)` of `C_n` in the splitter representation.
    pub fn cyclic_mz(n: u32) -> Result<Self> {
        let s = mz_splitter(n)?;
        let mut named = Vec::with_capacity(n as usize);
        let mut p = CycMatrix::identity(n, 2)?;
        for k in 0..n {
            let order = (n / k.gcd(&n)) as u64;
            named.push((format!("S^{k}"), p.clone(), order));
            p = p.compose(&s)?;
        }
        Self::with_orders(named)
    }

    /// The single generator `S_n`, for transports over long sequences.
    pub fn splitter_generator(n: u32) -> Result<Self> {
        Self::with_orders(vec![(format!("S_{n}"), mz_splitter(n)?, n as u64)])
    }

    /// The pair `{I, M}` over ℚ(ζ8), with `M = S²` the mirror.
    pub fn mirror_pair() -> Result<Self> {
        let s = mz_splitter(8)?;
        Self::with_orders(vec![("I".into(), CycMatrix::identity(8, 2)?, 1), ("M".into(), s.power(2)?, 4)])
    }

    /// Identity plus the three `A5` generators `U`, `V`, `W`.
    pub fn a5_3prime() -> Result<Self> {
        let (u, v, w) = a5_rep3prime()?;
        Self::with_orders(vec![
            ("I".into(), CycMatrix::identity(5, 3)?, 1),
            ("U".into(), u, 2),
            ("V".into(), v, 3),
            ("W".into(), w, 5),
        ])
    }

    /// Looks up a built-in representation by name: `cyclic_mz:N`,
    /// `splitter:N`, `mirror` or `a5`.
    pub fn named(name: &str) -> Result<Self> {
        let num = |s: &str| -> Result<u32> {
            s.trim().parse().map_err(|_| Error::Parse(format!("bad size in group {name:?}")))
        };
        match name.trim().split_once(':') {
            Some(("cyclic_mz", n)) => Self::cyclic_mz(num(n)?),
            Some(("splitter", n)) => Self::splitter_generator(num(n)?),
            None if name.trim() == "mirror" => Self::mirror_pair(),
            None if name.trim() == "a5" => Self::a5_3prime(),
            _ => Err(Error::Parse(format!("unknown group {name:?}"))),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self, i: usize) -> &CycMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[CycMatrix] {
        &self.matrices
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_generator_examples() {
        assert_eq!(cycle_generator(1).unwrap(), Permutation::identity(1));
        let g = cycle_generator(8).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.matrix().order(crate::linalg::DEFAULT_ORDER_BOUND).unwrap(), Some(8));
        let ones = crate::linalg::CycVector::from_integers(1, &[1; 8]).unwrap();
        assert_eq!(g.matrix().apply(&ones).unwrap(), ones);
    }

    #[test]
    fn permutation_orders() {
        assert_eq!(Permutation::identity(5).order(), 1);
        assert_eq!(cycle_generator(8).unwrap().order(), 8);
        let p = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(element_order(&p), 6);
        assert_eq!(cyclic_group_exponent(8), 8);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn matrix_is_a_homomorphism() {
        let p = Permutation::from_cycles(4, &[&[0, 1, 3]]).unwrap();
        let q = Permutation::from_cycles(4, &[&[1, 2]]).unwrap();
        let lhs = p.then(&q).unwrap().matrix();
        let rhs = p.matrix().compose(&q.matrix()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(p.then(&p.inverse()).unwrap().matrix().is_identity());
    }

    #[test]
    fn splitter_orders_and_unitarity() {
        for n in 3..=32 {
            let s = mz_splitter(n).unwrap();
            assert!(s.is_unitary(), "S_{n} unitary");
            assert_eq!(s.order(1000).unwrap(), Some(n as u64));
        }
        assert!(mz_splitter(2).is_err());
    }

    #[test]
    fn splitter_8_matches_cyclotomic_form() {
        let z = |k| Cyclotomic::root_of_unity(8, k).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let d = (&z(1) - &z(3)).scale(&half);
        let o = (&z(1) + &z(3)).scale(&half);
        let expect = CycMatrix::from_rows(vec![vec![d.clone(), o.clone()], vec![o, d]]).unwrap();
        assert_eq!(mz_splitter(8).unwrap(), expect);
    }

    #[test]
    fn golden_ratio_identity() {
        let phi = golden_ratio();
        let one = Cyclotomic::one(5).unwrap();
        assert_eq!(&phi * &phi, &phi + &one);
        let z = |k| Cyclotomic::root_of_unity(5, k).unwrap();
        assert_eq!(phi.invert().unwrap(), &z(1) + &z(4));
        assert!((phi.to_f64() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn a5_generators() {
        let (u, v, w) = a5_rep3prime().unwrap();
        assert_eq!(u.order(100).unwrap(), Some(2));
        assert_eq!(v.order(100).unwrap(), Some(3));
        assert_eq!(w.order(100).unwrap(), Some(5));
        for m in [&u, &v, &w] {
            assert!(m.is_unitary());
            assert_eq!(m.conductor(), 5);
        }
        let expect_v = CycMatrix::from_integers(5, 3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!(v, expect_v);
    }

    #[test]
    fn conductor_divides_exponent() {
        // A5 has exponent lcm(1, 2, 3, 5) = 30.
        let rep = GeneratedRep::a5_3prime().unwrap();
        assert_eq!(30 % rep.conductor(), 0);
        let c8 = GeneratedRep::cyclic_mz(8).unwrap();
        assert_eq!(c8.conductor() as u64, cyclic_group_exponent(8));
        assert_eq!(c8.len(), 8);
    }

    #[test]
    fn rep_rejects_non_unitary() {
        let d = CycMatrix::from_integers(1, 2, 2, &[2, 0, 0, 1]).unwrap();
        assert!(GeneratedRep::new(vec![("d".into(), d)], 10).is_err());
        let s = mz_splitter(8).unwrap();
        assert!(GeneratedRep::with_orders(vec![("s".into(), s.clone(), 4)]).is_err());
        assert_eq!(GeneratedRep::new(vec![("s".into(), s)], 100).unwrap().orders(), &[8]);
    }

    #[test]
    fn named_representations() {
        let c8 = GeneratedRep::named("cyclic_mz:8").unwrap();
        assert_eq!(c8.orders(), &[1, 8, 4, 8, 2, 8, 4, 8]);
        assert_eq!(GeneratedRep::named("mirror").unwrap().len(), 2);
        assert_eq!(GeneratedRep::named("a5").unwrap().orders(), &[1, 2, 3, 5]);
        assert_eq!(GeneratedRep::named("splitter:512").unwrap().conductor(), 512);
        assert!(GeneratedRep::named("cyclic_mz:x").is_err());
        assert!(GeneratedRep::named("sl2").is_err());
    }
}
