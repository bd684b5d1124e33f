//! Exact octonion arithmetic over `Q` and a maximal integral order.
//!
//! The multiplication table is the cyclic convention `e_i e_{i+1} = e_{i+3}`
//! (indices mod 7), i.e. the Fano lines (1,2,4), (2,3,5), ..., (7,1,3) each
//! oriented cyclically. The maximal order is spanned by `Z^8` together with
//! half-unit vectors `(1 + e_a + e_b + e_c)/2`; which triples `{a,b,c}` give a
//! multiplicatively closed lattice is *not* the set of Fano lines of the
//! multiplication table (the classical pitfall), so the constructor validates
//! closure outright instead of trusting any transcribed basis.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{rat, Int, Rational};

/// `TABLE[i][j] = (sign, k)` such that `e_i * e_j = sign * e_k`, with `e_0 = 1`.
const TABLE: [[(i8, usize); 8]; 8] = build_table();

const LINES: [(usize, usize, usize); 7] = [
    (1, 2, 4),
    (2, 3, 5),
    (3, 4, 6),
    (4, 5, 7),
    (5, 6, 1),
    (6, 7, 2),
    (7, 1, 3),
];

const fn build_table() -> [[(i8, usize); 8]; 8] {
    let mut t = [[(0i8, 0usize); 8]; 8];
    let mut j = 0;
    while j < 8 {
        t[0][j] = (1, j);
        t[j][0] = (1, j);
        j += 1;
    }
    let mut i = 1;
    while i < 8 {
        t[i][i] = (-1, 0);
        i += 1;
    }
    let mut l = 0;
    while l < 7 {
        let (a, b, c) = LINES[l];
        t[a][b] = (1, c);
        t[b][a] = (-1, c);
        t[b][c] = (1, a);
        t[c][b] = (-1, a);
        t[c][a] = (1, b);
        t[a][c] = (-1, b);
        l += 1;
    }
    t
}

/// An octonion with exact rational coordinates in the basis `1, e_1, ..., e_7`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Octonion {
    pub coords: [Rational; 8],
}

impl Octonion {
    pub fn zero() -> Self {
        Octonion::default()
    }

    pub fn one() -> Self {
        Octonion::basis(0)
    }

    /// `e_i` (with `e_0 = 1`).
    pub fn basis(i: usize) -> Self {
        let mut o = Octonion::default();
        o.coords[i] = Rational::one();
        o
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut o = Octonion::default();
        o.coords[0] = q;
        o
    }

    pub fn from_i64s(c: [i64; 8]) -> Self {
        let mut o = Octonion::default();
        for (i, v) in c.into_iter().enumerate() {
            o.coords[i] = Rational::from_integer(Int::from(v));
        }
        o
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Conjugate: negates `e_1..e_7`.
    pub fn conj(&self) -> Self {
        let mut o = self.clone();
        for c in o.coords.iter_mut().skip(1) {
            *c = -c.clone();
        }
        o
    }

    /// Norm form `N(x) = x * conj(x) = sum of squared coordinates`.
    pub fn norm(&self) -> Rational {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// Trace `T(x) = x + conj(x) = 2 * c_0`.
    pub fn trace(&self) -> Rational {
        &self.coords[0] + &self.coords[0]
    }

    pub fn scale(&self, t: &Rational) -> Self {
        let mut o = self.clone();
        for c in o.coords.iter_mut() {
            *c = &*c * t;
        }
        o
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, rhs: &Octonion) -> Octonion {
        let mut out = Octonion::default();
        for i in 0..8 {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if rhs.coords[j].is_zero() {
                    continue;
                }
                let (s, k) = TABLE[i][j];
                let term = &self.coords[i] * &rhs.coords[j];
                if s > 0 {
                    out.coords[k] += term;
                } else {
                    out.coords[k] -= term;
                }
            }
        }
        out
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        let mut out = self.clone();
        for (a, b) in out.coords.iter_mut().zip(rhs.coords.iter()) {
            *a += b;
        }
        out
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        let mut out = self.clone();
        for (a, b) in out.coords.iter_mut().zip(rhs.coords.iter()) {
            *a -= b;
        }
        out
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        let mut out = self.clone();
        for a in out.coords.iter_mut() {
            *a = -a.clone();
        }
        out
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        &self * &rhs
    }
}
impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        &self + &rhs
    }
}
impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        &self - &rhs
    }
}
impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        -&self
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(format!("e{}", i));
            } else {
                parts.push(format!("{}*e{}", c, i));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Errors raised when an order basis fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    SingularBasis,
    NotHalfIntegral,
    MissingOne,
    NotClosedUnderMultiplication(usize, usize),
    NotClosedUnderConjugation(usize),
    NotUnimodular(Rational),
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::SingularBasis => write!(f, "order basis does not span the octonions"),
            OrderError::NotHalfIntegral => {
                write!(f, "order basis coordinates must lie in (1/2)Z")
            }
            OrderError::MissingOne => write!(f, "order does not contain 1"),
            OrderError::NotClosedUnderMultiplication(i, j) => {
                write!(f, "b{} * b{} falls outside the lattice", i, j)
            }
            OrderError::NotClosedUnderConjugation(i) => {
                write!(f, "conj(b{}) falls outside the lattice", i)
            }
            OrderError::NotUnimodular(d) => {
                write!(f, "trace-form Gram determinant is {}, expected 1", d)
            }
        }
    }
}

/// A maximal integral order: a unimodular lattice in the octonions closed
/// under multiplication and conjugation and containing 1.
#[derive(Clone, Debug)]
pub struct OctonionOrder {
    basis: [Octonion; 8],
    /// inverse of the coordinate matrix whose columns are the basis vectors;
    /// membership is "inverse * coords is integral"
    inv: [[Rational; 8]; 8],
}

/// Frozen basis of the maximal order (coordinates doubled to integers). Found
/// by searching all 30 Fano-plane alignments of half-unit vectors for one whose
/// lattice is multiplicatively closed; the constructor re-validates every run.
const MAXIMAL_BASIS_X2: [[i64; 8]; 8] = [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, -1, 0, -1, 1, 1, 0, 0],
    [0, 0, -1, -1, 1, 0, 0, 1],
    [0, 0, 0, 2, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 1, 1, -1],
    [0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 0, 0, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 2],
];

impl OctonionOrder {
    /// The maximal order used throughout. Validation runs on every call and
    /// cannot be bypassed.
    pub fn maximal() -> Self {
        let basis: [Octonion; 8] = core::array::from_fn(|i| {
            let mut o = Octonion::default();
            for j in 0..8 {
                o.coords[j] = rat(MAXIMAL_BASIS_X2[i][j], 2);
            }
            o
        });
        OctonionOrder::try_new(basis).expect("built-in maximal order basis must validate")
    }

    /// Validates and wraps a candidate basis.
    pub fn try_new(basis: [Octonion; 8]) -> Result<Self, OrderError> {
        let two = rat(2, 1);
        for b in &basis {
            for c in &b.coords {
                if !(c * &two).is_integer() {
                    return Err(OrderError::NotHalfIntegral);
                }
            }
        }
        let mat: Vec<Vec<Rational>> = (0..8)
            .map(|i| (0..8).map(|j| basis[j].coords[i].clone()).collect())
            .collect();
        let inv_vec = invert_matrix(&mat).ok_or(OrderError::SingularBasis)?;
        let inv: [[Rational; 8]; 8] =
            core::array::from_fn(|i| core::array::from_fn(|j| inv_vec[i][j].clone()));
        let order = OctonionOrder { basis, inv };
        if !order.contains(&Octonion::one()) {
            return Err(OrderError::MissingOne);
        }
        for i in 0..8 {
            if !order.contains(&order.basis[i].conj()) {
                return Err(OrderError::NotClosedUnderConjugation(i));
            }
            for j in 0..8 {
                let prod = &order.basis[i] * &order.basis[j];
                if !order.contains(&prod) {
                    return Err(OrderError::NotClosedUnderMultiplication(i, j));
                }
            }
        }
        // Gram determinant of the trace form T(x * conj(y)) = 2<x, y>
        let gram: Vec<Vec<Rational>> = (0..8)
            .map(|i| {
                (0..8)
                    .map(|j| (&order.basis[i] * &order.basis[j].conj()).trace())
                    .collect()
            })
            .collect();
        let det = det_n(&gram);
        if !det.is_one() {
            return Err(OrderError::NotUnimodular(det));
        }
        Ok(order)
    }

    pub fn basis(&self) -> &[Octonion; 8] {
        &self.basis
    }

    /// Integer coordinates of `x` with respect to the basis, if `x` lies in
    /// the lattice.
    pub fn coordinates(&self, x: &Octonion) -> Option<[Int; 8]> {
        let mut out: [Int; 8] = core::array::from_fn(|_| Int::zero());
        for i in 0..8 {
            let mut acc = Rational::zero();
            for j in 0..8 {
                acc += &self.inv[i][j] * &x.coords[j];
            }
            if !acc.is_integer() {
                return None;
            }
            out[i] = acc.to_integer();
        }
        Some(out)
    }

    pub fn contains(&self, x: &Octonion) -> bool {
        self.coordinates(x).is_some()
    }

    /// All elements of norm exactly 1 (the unit shell). The standard maximal
    /// order has 240 of them.
    pub fn units(&self) -> Vec<Octonion> {
        self.elements_with_norm_at_most(&Rational::one())
            .into_iter()
            .filter(|x| x.norm().is_one())
            .collect()
    }

    /// All lattice elements `x` with `N(x) <= bound` (including 0), by exact
    /// Fincke-Pohst-style enumeration against the LDL^T factorization of the
    /// basis Gram matrix. Deterministic order.
    pub fn elements_with_norm_at_most(&self, bound: &Rational) -> Vec<Octonion> {
        if bound.is_negative() {
            return Vec::new();
        }
        let gram: Vec<Vec<Rational>> = (0..8)
            .map(|i| {
                (0..8)
                    .map(|j| {
                        (0..8)
                            .map(|k| &self.basis[i].coords[k] * &self.basis[j].coords[k])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let (l, d) = ldl(&gram).expect("order Gram matrix is positive definite");
        // norm(sum n_i b_i) = sum_k d_k (n_k + sum_{j>k} l_{jk} n_j)^2
        let mut out = Vec::new();
        let mut coeffs = [0i64; 8];
        enumerate_rec(&l, &d, bound, 7, &mut coeffs, &Rational::zero(), &mut |c| {
            let mut x = Octonion::zero();
            for (i, n) in c.iter().enumerate() {
                if *n != 0 {
                    x = &x + &self.basis[i].scale(&rat(*n, 1));
                }
            }
            out.push(x);
        });
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out
    }
}

/// Recursive exact enumeration: at level `k`, the remaining norm budget is
/// `budget`, and the projected coordinate is `n_k + sum_{j>k} l_{jk} n_j`.
fn enumerate_rec(
    l: &[Vec<Rational>],
    d: &[Rational],
    budget: &Rational,
    k: usize,
    coeffs: &mut [i64; 8],
    _partial: &Rational,
    emit: &mut dyn FnMut(&[i64; 8]),
) {
    // offset = sum_{j>k} l_{jk} n_j
    let mut offset = Rational::zero();
    for j in k + 1..8 {
        if coeffs[j] != 0 {
            offset += &l[j][k] * rat(coeffs[j], 1);
        }
    }
    // d_k (n_k + offset)^2 <= budget  =>  |n_k + offset| <= sqrt(budget / d_k)
    let ratio = budget / &d[k];
    let hi = floor_sqrt_rational(&ratio);
    let lo = -(&hi) - Rational::one();
    // integer n_k in [ceil(lo - offset), floor(hi - offset)] — widen by one and
    // filter exactly below
    let lo_i = (lo.clone() - &offset).floor().to_integer();
    let hi_i = (hi.clone() - &offset).ceil().to_integer();
    let mut n = lo_i.clone();
    while n <= hi_i {
        let nv: i64 = i64::try_from(&n).expect("enumeration coefficient fits i64");
        let term = Rational::from_integer(n.clone()) + &offset;
        let used = &d[k] * &term * &term;
        if &used <= budget {
            coeffs[k] = nv;
            let rest = budget - &used;
            if k == 0 {
                emit(coeffs);
            } else {
                enumerate_rec(l, d, &rest, k - 1, coeffs, &Rational::zero(), emit);
            }
        }
        n += 1;
    }
    coeffs[k] = 0;
}

/// Largest rational `r = a/2^s` with `r^2 <= q`; a loose upper envelope is all
/// the enumeration needs since candidates are filtered exactly.
fn floor_sqrt_rational(q: &Rational) -> Rational {
    if q.is_negative() {
        return -Rational::one();
    }
    let scale: u32 = 16;
    let scaled = (q.numer() << (2 * scale)) / q.denom();
    Rational::new(scaled.sqrt() + 1, Int::one() << scale)
}

/// LDL^T factorization of a symmetric positive definite rational matrix:
/// returns strictly-lower `L` (unit diagonal implied) and the diagonal `D`.
fn ldl(gram: &[Vec<Rational>]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let n = gram.len();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = gram[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut v = gram[i][j].clone();
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &d[j];
        }
    }
    Some((l, d))
}

/// Inverse of an 8x8 rational matrix (rows of `m`), or `None` if singular.
pub(crate) fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for k in 0..n {
                r.push(if k == i { Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let pv = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &pv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &aug[col][c];
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix by fraction-free-ish elimination.
pub(crate) fn det_n(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rational::zero(),
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        let pv = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pv;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_oct(rng: &mut StdRng) -> Octonion {
        let mut o = Octonion::default();
        for c in o.coords.iter_mut() {
            *c = rat(rng.random_range(-6..=6), rng.random_range(1..=3));
        }
        o
    }

    #[test]
    fn fixed_convention() {
        let e = |i| Octonion::basis(i);
        assert_eq!(&e(1) * &e(2), e(4));
        assert_eq!(&e(2) * &e(3), e(5));
        assert_eq!(&e(7) * &e(1), e(3));
        assert_eq!(&e(2) * &e(1), -e(4));
        assert_eq!(&e(1) * &e(1), -e(0));
        assert_eq!(&e(0) * &e(5), e(5));
    }

    #[test]
    fn composition_and_alternativity() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..300 {
            let x = rand_oct(&mut rng);
            let y = rand_oct(&mut rng);
            assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            assert_eq!(&x * &(&x * &y), &(&x * &x) * &y);
            assert_eq!(&(&y * &x) * &x, &y * &(&x * &x));
        }
    }

    #[test]
    fn conjugation_identities() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let x = rand_oct(&mut rng);
            let n = &x * &x.conj();
            assert_eq!(n, Octonion::from_rational(x.norm()));
            assert_eq!(x.trace(), &x.coords[0] + &x.coords[0]);
        }
    }

    #[test]
    fn maximal_order_validates() {
        let order = OctonionOrder::maximal();
        assert!(order.contains(&Octonion::one()));
        for i in 1..8 {
            assert!(order.contains(&Octonion::basis(i)));
        }
        // (1 + e_1)/3 has denominator 3: not in a half-integral lattice
        let bad = (Octonion::one() + Octonion::basis(1)).scale(&rat(1, 3));
        assert!(!order.contains(&bad));
    }

    #[test]
    fn rejects_non_closed_basis() {
        // plain Z^8 scaled wrongly: use the Kirmse-style alignment, which is
        // the multiplication Fano plane itself and is famously not closed
        let mut basis: [Octonion; 8] = core::array::from_fn(|i| Octonion::basis(i));
        let mut h = Octonion::one();
        h = &h + &Octonion::basis(1);
        h = &h + &Octonion::basis(2);
        h = &h + &Octonion::basis(4);
        basis[1] = h.scale(&rat(1, 2));
        // complete to a lattice that at least spans; closure must fail
        match OctonionOrder::try_new(basis) {
            Err(_) => {}
            Ok(_) => panic!("Kirmse-aligned lattice must be rejected"),
        }
    }

    #[test]
    fn exactly_240_units() {
        let order = OctonionOrder::maximal();
        let units = order.units();
        assert_eq!(units.len(), 240);
        for u in &units {
            assert!(u.norm().is_one());
            assert!(order.contains(&u.conj()));
        }
    }

    #[test]
    fn order_closed_under_random_products() {
        let order = OctonionOrder::maximal();
        let units = order.units();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..500 {
            let a = &units[rng.random_range(0..units.len())];
            let b = &units[rng.random_range(0..units.len())];
            assert!(order.contains(&(a * b)));
        }
    }

    #[test]
    fn norm_shell_counts_match_scaled_e8() {
        let order = OctonionOrder::maximal();
        let elts = order.elements_with_norm_at_most(&rat(2, 1));
        let n1 = elts.iter().filter(|x| x.norm() == rat(1, 1)).count();
        let n2 = elts.iter().filter(|x| x.norm() == rat(2, 1)).count();
        assert_eq!((n1, n2), (240, 2160));
    }
}
