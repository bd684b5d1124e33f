//! Exact scalars in the multi-quadratic tower `Q(i, sqrt(2), sqrt(3), sqrt(5), ...)`.
//!
//! A [`Scalar`] is a finite sum `sum_d q_d * sqrt(d)` over squarefree integer
//! radicands `d` (with `d = 1` the rational part and `d < 0` contributing
//! `i * sqrt(|d|)`). The `sqrt(d)` for distinct squarefree `d` are linearly
//! independent over `Q`, so the term map is a canonical form: equality,
//! zero-tests and sign determination are all exact. This is enough to carry
//! Satake parameters, half-integral powers of determinants and quadratic
//! character values without any floating point.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Splits `n != 0` as `s^2 * d` with `d` squarefree; returns `(s, d)`.
///
/// Factors by trial division, which is exact for any input that actually
/// occurs here (discriminants, determinants, primes); the loop runs to
/// `sqrt(|n|)` so it is total, just slow for huge prime-square inputs.
fn squarefree_split(n: &Int) -> (Int, Int) {
    assert!(!n.is_zero(), "squarefree_split(0)");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut square_root = Int::one();
    let mut free = Int::one();
    let mut p = int(2);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            let mut e = 0u32;
            while m.is_multiple_of(&p) {
                m /= &p;
                e += 1;
            }
            for _ in 0..e / 2 {
                square_root *= &p;
            }
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += 1;
    }
    free *= m; // leftover prime
    (square_root, free * int(sign))
}

/// An exact element of the multi-quadratic field tower.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    /// squarefree radicand -> rational coefficient; zero coefficients are never stored
    terms: BTreeMap<Int, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Int::one(), q);
        }
        Scalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(int(n)))
    }

    /// The imaginary unit `i = sqrt(-1)`.
    pub fn i() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(int(-1), Rational::one());
        Scalar { terms }
    }

    /// Exact square root of a rational: `sqrt(p/q) = sqrt(p*q)/q`, with the
    /// radicand reduced to its squarefree part. Negative inputs produce
    /// imaginary values.
    pub fn sqrt_rational(q: &Rational) -> Self {
        if q.is_zero() {
            return Scalar::zero();
        }
        let n = q.numer() * q.denom();
        let (s, d) = squarefree_split(&n);
        let coeff = Rational::new(s, q.denom().clone());
        let mut terms = BTreeMap::new();
        terms.insert(d, coeff);
        Scalar { terms }
    }

    pub fn sqrt_int(n: i64) -> Self {
        Scalar::sqrt_rational(&Rational::from_integer(int(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|d| d.is_one())
    }

    /// Rational value if this scalar happens to be rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(q) = self.terms.get(&Int::one()) {
                return Some(q.clone());
            }
        }
        None
    }

    /// True when every radicand is positive (value lies in the real subfield).
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|d| d.is_positive())
    }

    /// Complex conjugation: negates every term whose radicand is negative.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(d, q)| {
                let q = if d.is_negative() { -q.clone() } else { q.clone() };
                (d.clone(), q)
            })
            .collect();
        Scalar { terms }
    }

    /// Real part, as an element of the real subfield.
    pub fn re(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(d, _)| d.is_positive())
            .map(|(d, q)| (d.clone(), q.clone()))
            .collect();
        Scalar { terms }
    }

    /// Imaginary part (real-subfield element `y` such that `self = re + i*y`):
    /// a term `q*sqrt(-d)` with `d > 0` contributes `q*sqrt(d)`.
    pub fn im(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(d, _)| d.is_negative())
            .map(|(d, q)| (-d.clone(), q.clone()))
            .collect();
        Scalar { terms }
    }

    /// `|self|^2 = self * conj(self)`, always real.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    fn insert_term(terms: &mut BTreeMap<Int, Rational>, d: Int, q: Rational) {
        if q.is_zero() {
            return;
        }
        match terms.entry(d) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + q;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Galois conjugation flipping the sign of `sqrt(p)` for a single prime
    /// factor `p` of some radicand (or of `i` when `p = -1`). Used by `inv`.
    fn flip(&self, p: &Int) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(d, q)| {
                let flips = if p.is_negative() {
                    d.is_negative()
                } else {
                    d.is_multiple_of(p)
                };
                let q = if flips { -q.clone() } else { q.clone() };
                (d.clone(), q)
            })
            .collect();
        Scalar { terms }
    }

    /// Some prime (or -1) occurring in a non-trivial radicand, if any.
    fn some_radical_prime(&self) -> Option<Int> {
        for d in self.terms.keys() {
            if d.is_negative() {
                return Some(int(-1));
            }
            if !d.is_one() {
                // smallest prime factor of d
                let mut p = int(2);
                loop {
                    if d.is_multiple_of(&p) {
                        return Some(p);
                    }
                    p += 1;
                }
            }
        }
        None
    }

    /// Exact inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        match self.some_radical_prime() {
            None => {
                let q = self.terms.get(&Int::one()).unwrap();
                Scalar::from_rational(q.recip())
            }
            Some(p) => {
                // x^{-1} = flip(x) / (x * flip(x)); the product lives in the
                // subfield without sqrt(p), so the recursion terminates.
                let y = self.flip(&p);
                let prod = self * &y;
                &y * &prod.inv()
            }
        }
    }

    pub fn pow_i64(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow_i64(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `base^(num/2)` for a positive rational `base`: exact half-integral powers.
    pub fn rational_pow_half(base: &Rational, num: i64) -> Self {
        assert!(base.is_positive(), "half-power of non-positive rational");
        let sqrt = Scalar::sqrt_rational(base);
        sqrt.pow_i64(num)
    }

    /// Exact sign of a real scalar (-1, 0, +1). Panics if the value is not real.
    pub fn sign(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        if self.terms.is_empty() {
            return 0;
        }
        // sqrt(d) for distinct squarefree d are Q-linearly independent, so a
        // non-empty term map is non-zero; refine rational intervals until the
        // sign separates from zero.
        let mut scale_bits = 16u32;
        loop {
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (d, q) in &self.terms {
                let (l, h) = sqrt_interval(d, scale_bits);
                if q.is_positive() {
                    lo += q * &l;
                    hi += q * &h;
                } else {
                    lo += q * &h;
                    hi += q * &l;
                }
            }
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            scale_bits *= 2;
            assert!(scale_bits <= 1 << 20, "sign refinement failed to converge");
        }
    }

    pub fn is_positive_real(&self) -> bool {
        self.sign() > 0
    }

    /// Compares two real scalars exactly.
    pub fn cmp_real(&self, other: &Scalar) -> core::cmp::Ordering {
        match (self - other).sign() {
            s if s < 0 => core::cmp::Ordering::Less,
            0 => core::cmp::Ordering::Equal,
            _ => core::cmp::Ordering::Greater,
        }
    }

    /// Floating approximation `(re, im)`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (d, q) in &self.terms {
            let qf = q.to_f64().unwrap_or(f64::NAN);
            let df = d.abs().to_f64().unwrap_or(f64::NAN);
            let r = libm::sqrt(df);
            if d.is_negative() {
                im += qf * r;
            } else {
                re += qf * r;
            }
        }
        (re, im)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_pair().0
    }

    /// Iterates over `(radicand, coefficient)` terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Int, &Rational)> {
        self.terms.iter()
    }
}

/// Rational lower/upper bounds on `sqrt(|d|)` with denominator `2^scale_bits`.
fn sqrt_interval(d: &Int, scale_bits: u32) -> (Rational, Rational) {
    let shifted = d.abs() << (2 * scale_bits);
    let root = shifted.sqrt(); // floor integer square root
    let denom = Int::one() << scale_bits;
    let lo = Rational::new(root.clone(), denom.clone());
    let hi = Rational::new(root + 1, denom);
    (lo, hi)
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (d, q) in &rhs.terms {
            Scalar::insert_term(&mut terms, d.clone(), q.clone());
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (d, q) in &rhs.terms {
            Scalar::insert_term(&mut terms, d.clone(), -q.clone());
        }
        Scalar { terms }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (d1, q1) in &self.terms {
            for (d2, q2) in &rhs.terms {
                // sqrt(d1)*sqrt(d2) = g*sqrt(m1*m2) with g = gcd(|d1|,|d2|),
                // d_i = g*m_i; m1*m2 stays squarefree because d1, d2 are.
                // Signs: (neg, neg) yields a positive radicand times i^2 = -1,
                // (neg, pos) keeps the radicand negative.
                let g = d1.gcd(d2);
                let rad = (d1 / &g) * (d2 / &g);
                let mut coeff = q1 * q2 * Rational::from_integer(g);
                if d1.is_negative() && d2.is_negative() {
                    coeff = -coeff;
                }
                Scalar::insert_term(&mut terms, rad, coeff);
            }
        }
        Scalar { terms }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let terms = self
            .terms
            .iter()
            .map(|(d, q)| (d.clone(), -q.clone()))
            .collect();
        Scalar { terms }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (d, q) in &rhs.terms {
            Scalar::insert_term(&mut self.terms, d.clone(), q.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (d, q) in &rhs.terms {
            Scalar::insert_term(&mut self.terms, d.clone(), -q.clone());
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        for (d, q) in &self.terms {
            let part = if d.is_one() {
                alloc::format!("{}", q)
            } else if q.is_one() {
                alloc::format!("sqrt({})", d)
            } else if *q == -Rational::one() {
                alloc::format!("-sqrt({})", d)
            } else {
                alloc::format!("{}*sqrt({})", q, d)
            };
            parts.push(part);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_normalizes_radicands() {
        let a = Scalar::sqrt_int(8); // 2*sqrt(2)
        let b = &Scalar::from_int(2) * &Scalar::sqrt_int(2);
        assert_eq!(a, b);
        let c = Scalar::sqrt_rational(&rat(1, 2)); // sqrt(2)/2
        assert_eq!(&c * &c, Scalar::from_rational(rat(1, 2)));
    }

    #[test]
    fn product_of_radicals() {
        let s2 = Scalar::sqrt_int(2);
        let s3 = Scalar::sqrt_int(3);
        let s6 = Scalar::sqrt_int(6);
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s2 * &s2, Scalar::from_int(2));
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        // i * sqrt(3) = sqrt(-3)
        assert_eq!(&i * &s3, Scalar::sqrt_int(-3));
        // sqrt(-2) * sqrt(-3) = -sqrt(6)
        assert_eq!(
            Scalar::sqrt_int(-2) * Scalar::sqrt_int(-3),
            -&s6
        );
        // sqrt(-2) * sqrt(3) = sqrt(-6)
        assert_eq!(Scalar::sqrt_int(-2) * Scalar::sqrt_int(3), Scalar::sqrt_int(-6));
        // sqrt(-2) * sqrt(2) = 2i
        assert_eq!(
            Scalar::sqrt_int(-2) * Scalar::sqrt_int(2),
            Scalar::from_int(2) * Scalar::i()
        );
    }

    #[test]
    fn inverse_round_trips() {
        let x = Scalar::from_rational(rat(3, 7))
            + Scalar::from_rational(rat(1, 2)) * Scalar::sqrt_int(5)
            + Scalar::sqrt_int(-3)
            + Scalar::sqrt_int(30);
        let y = x.inv();
        assert_eq!(&x * &y, Scalar::one());
    }

    #[test]
    fn sign_and_compare() {
        // sqrt(2) + sqrt(3) - sqrt(10) is negative (1.414+1.732-3.162 < 0)
        let v = Scalar::sqrt_int(2) + Scalar::sqrt_int(3) - Scalar::sqrt_int(10);
        assert_eq!(v.sign(), -1);
        // sqrt(2)*sqrt(8) = 4 exactly
        let w = Scalar::sqrt_int(2) * Scalar::sqrt_int(8) - Scalar::from_int(4);
        assert_eq!(w.sign(), 0);
        assert!(Scalar::sqrt_int(2).cmp_real(&Scalar::from_rational(rat(3, 2))) == core::cmp::Ordering::Less);
    }

    #[test]
    fn conjugation_and_abs() {
        let x = Scalar::from_int(1) + Scalar::sqrt_int(-3);
        assert_eq!(x.abs_sq(), Scalar::from_int(4));
        assert_eq!(x.re(), Scalar::from_int(1));
        assert_eq!(x.im(), Scalar::sqrt_int(3));
        // unit circle: (1 + i sqrt(3))/2 has |.| = 1
        let u = &x * &Scalar::from_rational(rat(1, 2));
        assert_eq!(u.abs_sq(), Scalar::one());
    }

    #[test]
    fn half_powers() {
        // 4^(9/2) = 512
        let v = Scalar::rational_pow_half(&rat(4, 1), 9);
        assert_eq!(v, Scalar::from_int(512));
        // 2^(-3/2) = sqrt(2)/4
        let v = Scalar::rational_pow_half(&rat(2, 1), -3);
        assert_eq!(v, Scalar::sqrt_int(2) * Scalar::from_rational(rat(1, 4)));
    }

    #[test]
    fn display_reads_naturally() {
        let x = Scalar::from_rational(rat(1, 2)) - Scalar::sqrt_int(5) + Scalar::sqrt_int(-1);
        assert_eq!(alloc::format!("{}", x), "sqrt(-1) + 1/2 - sqrt(5)");
    }
}
