//! The local coefficient constants `c_n` attached to a newform: per-prime
//! values for every supported local type, the square-class extension to all
//! positive integers, and the degenerate Whittaker values used to reconstruct
//! Hecke eigenvalues.
//!
//! One normalization erratum is resolved here: the per-prime unramified value
//! is `alpha * p^(-l/2)` with the *negative* exponent. The positive-exponent
//! variant fails both the coefficient bound `|c_n| <= m^(-(l-1)/2)` and the
//! reconstruction identity `n^l c_n prod_p w_p = a_n`, which pin the sign of
//! the exponent uniquely.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::newform::{square_class, LocalType, NewformError, NewformRecord};
use crate::scalar::{rat, Int, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffError {
    Newform(NewformError),
    /// The record was rejected by validation; the violations are attached.
    InvalidRecord(Vec<NewformError>),
    NonPositive,
    /// Evaluating the induced character needs the unit-character table of a
    /// ramified component.
    CharacterTableRequired { p: u64 },
    /// The requested Whittaker vector is not available for this local type.
    UncoveredWhittakerCase { p: u64 },
}

impl From<NewformError> for CoeffError {
    fn from(e: NewformError) -> Self {
        CoeffError::Newform(e)
    }
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::Newform(e) => write!(f, "{}", e),
            CoeffError::InvalidRecord(v) => {
                write!(f, "newform record rejected ({} violations)", v.len())
            }
            CoeffError::NonPositive => write!(f, "argument must be a positive rational"),
            CoeffError::CharacterTableRequired { p } => {
                write!(f, "unit character table required at ramified prime {}", p)
            }
            CoeffError::UncoveredWhittakerCase { p } => {
                write!(f, "no Whittaker value available at {} for that vector", p)
            }
        }
    }
}

/// Which local vector a Whittaker value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhittakerVector {
    /// The local newvector; its value vanishes when `alpha = -beta`.
    Newform,
    /// The stabilized vector used when `alpha = -beta`.
    Stabilized,
}

/// Immutable evaluation context: a validated record, its local types (with
/// optional user-supplied overrides for ramified principal series), and a
/// prime cache of `c_p` values filled at construction so that concurrent
/// readers never contend.
#[derive(Clone, Debug)]
pub struct CoeffContext {
    rec: NewformRecord,
    overrides: BTreeMap<u64, LocalType>,
    type_cache: BTreeMap<u64, LocalType>,
    c_cache: BTreeMap<u64, Scalar>,
}

impl CoeffContext {
    /// Builds a context, rejecting invalid records, and precomputes local
    /// data for all primes up to `precompute`.
    pub fn new(rec: NewformRecord, precompute: u64) -> Result<Self, CoeffError> {
        CoeffContext::with_overrides(rec, BTreeMap::new(), precompute)
    }

    /// As [`CoeffContext::new`] but with explicit local-type overrides (the
    /// entry point for ramified principal series, whose character data cannot
    /// be derived from Fourier coefficients alone).
    pub fn with_overrides(
        rec: NewformRecord,
        overrides: BTreeMap<u64, LocalType>,
        precompute: u64,
    ) -> Result<Self, CoeffError> {
        let violations = rec.validate();
        let only_overridden = violations.iter().all(|v| match v {
            NewformError::AtkinLehnerMissing { p }
            | NewformError::CharacterRamifiedAt { p }
            | NewformError::NonSquarefreeAt { p } => overrides.contains_key(p),
            _ => false,
        });
        if !(violations.is_empty() || only_overridden) {
            return Err(CoeffError::InvalidRecord(violations));
        }
        let mut ctx = CoeffContext {
            rec,
            overrides,
            type_cache: BTreeMap::new(),
            c_cache: BTreeMap::new(),
        };
        for p in primes_up_to(precompute) {
            if let Ok(t) = ctx.compute_local_type(p) {
                let c = ctx.c_from_type(p, &t)?;
                ctx.type_cache.insert(p, t);
                ctx.c_cache.insert(p, c);
            }
        }
        Ok(ctx)
    }

    pub fn record(&self) -> &NewformRecord {
        &self.rec
    }

    pub fn weight(&self) -> u32 {
        self.rec.weight
    }

    /// The set of Steinberg primes (the ramified places of the induced data).
    pub fn steinberg_primes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (p, _) in crate::newform::factorize(self.rec.level) {
            if let Ok(LocalType::Steinberg { .. }) = self.local_type(p) {
                out.push(p);
            }
        }
        for (p, t) in &self.overrides {
            if matches!(t, LocalType::Steinberg { .. }) && !out.contains(p) {
                out.push(*p);
            }
        }
        out.sort_unstable();
        out
    }

    fn compute_local_type(&self, p: u64) -> Result<LocalType, CoeffError> {
        if let Some(t) = self.overrides.get(&p) {
            return Ok(t.clone());
        }
        Ok(self.rec.classify_local(p)?)
    }

    /// Local type at `p` (cache first, computed on demand otherwise).
    pub fn local_type(&self, p: u64) -> Result<LocalType, CoeffError> {
        if let Some(t) = self.type_cache.get(&p) {
            return Ok(t.clone());
        }
        self.compute_local_type(p)
    }

    fn c_from_type(&self, p: u64, t: &LocalType) -> Result<Scalar, CoeffError> {
        let l = self.rec.weight as i64;
        let pq = rat(p as i64, 1);
        Ok(match t {
            // alpha = -beta included: the stabilized-vector computation lands
            // on the same value
            LocalType::UnramifiedPS { alpha, .. } => {
                alpha * &Scalar::rational_pow_half(&pq, -l)
            }
            LocalType::Steinberg { epsilon } => {
                let unit = Scalar::rational_pow_half(&pq, -(l - 1));
                let factor = Rational::one() - rat(1, p as i64);
                let signed = if *epsilon >= 0 { unit } else { -unit };
                &signed * &Scalar::from_rational(factor)
            }
            LocalType::RamifiedPS {
                mu1_ramified: false,
                beta,
                mu2_at_minus_one,
                ..
            } => {
                // mu_1 unramified, mu_2 ramified:
                // beta^{-1} p^{-(l+1)/2} (1 - p^{-1})^{-1} mu_2(-1)
                let power = Scalar::rational_pow_half(&pq, -(l + 1));
                let euler = Scalar::from_rational((Rational::one() - rat(1, p as i64)).recip());
                &(&(&beta.inv() * &power) * &euler) * mu2_at_minus_one
            }
            LocalType::RamifiedPS {
                mu1_ramified: true,
                beta,
                ..
            } => beta * &Scalar::rational_pow_half(&pq, -l),
        })
    }

    /// The per-prime constant `c_p`.
    pub fn c_prime(&self, p: u64) -> Result<Scalar, CoeffError> {
        if let Some(c) = self.c_cache.get(&p) {
            return Ok(c.clone());
        }
        let t = self.local_type(p)?;
        self.c_from_type(p, &t)
    }

    /// The induced character evaluated at a positive rational: the product of
    /// the principal-series values `mu_p(p)^{v_p(a)}` over primes dividing
    /// `a`, times the unit-character values of any ramified components.
    /// Steinberg components contribute 1 (see `c_value` on why).
    pub fn mu_f(&self, a: &Rational) -> Result<Scalar, CoeffError> {
        if !a.is_positive() {
            return Err(CoeffError::NonPositive);
        }
        let mut out = Scalar::one();
        for (p, v) in rational_valuations(a) {
            match self.local_type(p)? {
                LocalType::Steinberg { .. } => {}
                t @ LocalType::UnramifiedPS { .. } => {
                    let mu = t.mu_at_p().expect("principal series carries mu");
                    out *= &mu.pow_i64(v);
                }
                t @ LocalType::RamifiedPS { .. } => {
                    let mu = t.mu_at_p().expect("principal series carries mu");
                    out *= &mu.pow_i64(v);
                }
            }
        }
        // unit parts at ramified components (they see every argument, not
        // just primes dividing it)
        for (q, t) in &self.overrides {
            if let LocalType::RamifiedPS { unit_character, .. } = t {
                let unit = q_unit_part(a, *q);
                if unit.is_one() {
                    continue;
                }
                match unit_character {
                    Some(chi) => {
                        let u_mod = unit_residue(&unit, chi.modulus())
                            .ok_or(CoeffError::CharacterTableRequired { p: *q })?;
                        out *= &chi.eval_int(u_mod);
                    }
                    None => return Err(CoeffError::CharacterTableRequired { p: *q }),
                }
            }
        }
        Ok(out)
    }

    /// The constant `c_n` for a positive rational `n`: zero off the positive
    /// integers, and `mu_f(a)^{-1} * prod_{p | m} c_p` for `n = a^2 m` with
    /// `m` square-free.
    ///
    /// Steinberg components enter only through `c_p`; the square-class factor
    /// `mu_f(a)` carries no Steinberg part, which is what makes the
    /// coefficient bound `|c_n| <= m^{-(l-1)/2}` hold on all of `Z_{>0}`.
    pub fn c_value(&self, n: &Rational) -> Result<Scalar, CoeffError> {
        if !n.is_positive() {
            return Err(CoeffError::NonPositive);
        }
        if !n.is_integer() {
            return Ok(Scalar::zero());
        }
        let (a, m) = square_class(n);
        let mut out = self.mu_f(&a)?.inv();
        for (p, _) in int_factorize(&m) {
            out *= &self.c_prime(p)?;
        }
        Ok(out)
    }

    /// The bound `m^{-(l-1)/2}` of the coefficient estimate, with `m` the
    /// product of primes dividing `n` to an odd power.
    pub fn coefficient_bound(&self, n: &Rational) -> Result<Scalar, CoeffError> {
        if !n.is_positive() {
            return Err(CoeffError::NonPositive);
        }
        if !n.is_integer() {
            return Ok(Scalar::zero());
        }
        let (_, m) = square_class(n);
        let mq = Rational::from_integer(m);
        Ok(Scalar::rational_pow_half(&mq, -((self.rec.weight as i64) - 1)))
    }

    /// Whether `|c_n| <= m^{-(l-1)/2}` holds; exact for exact records, with
    /// slack `2^{4-b}` on the squared comparison when the record declares
    /// `b` bits of coefficient precision.
    pub fn bound_holds(&self, n: &Rational) -> Result<bool, CoeffError> {
        let c = self.c_value(n)?;
        let bound = self.coefficient_bound(n)?;
        let diff = &(&bound * &bound) - &c.abs_sq();
        match self.rec.precision_bits {
            None => Ok(diff.sign() >= 0),
            Some(b) => {
                let slack = Scalar::from_rational(Rational::new(
                    Int::from(16),
                    Int::from(1) << b.min(1 << 20),
                ));
                Ok((&diff + &slack).sign() >= 0)
            }
        }
    }

    /// Local degenerate Whittaker value at an unramified prime.
    ///
    /// `Newform`: `p^{-1/2} (1 + beta/alpha)` — the value entering the
    /// reconstruction identity `n^l c_n prod_{p|n} w_p = a_n` for square-free
    /// `n` (it vanishes exactly when `a_p = 0`, matching `a_n = 0`).
    /// `Stabilized`: `beta^2 p^{-1/2}`, defined only when `alpha = -beta`.
    pub fn sl2_whittaker_value(
        &self,
        p: u64,
        vector: WhittakerVector,
    ) -> Result<Scalar, CoeffError> {
        let t = self.local_type(p)?;
        let (alpha, beta) = match t {
            LocalType::UnramifiedPS { alpha, beta } => (alpha, beta),
            _ => return Err(CoeffError::UncoveredWhittakerCase { p }),
        };
        let root = Scalar::rational_pow_half(&rat(p as i64, 1), -1);
        match vector {
            WhittakerVector::Newform => {
                let ratio = &beta * &alpha.inv();
                Ok(&(&Scalar::one() + &ratio) * &root)
            }
            WhittakerVector::Stabilized => {
                if &alpha + &beta != Scalar::zero() {
                    return Err(CoeffError::UncoveredWhittakerCase { p });
                }
                Ok(&(&beta * &beta) * &root)
            }
        }
    }
}

/// `(p, v_p(a))` over primes where the valuation of the positive rational `a`
/// is non-zero.
fn rational_valuations(a: &Rational) -> Vec<(u64, i64)> {
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in int_factorize(a.numer()) {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in int_factorize(a.denom()) {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.into_iter().filter(|(_, v)| *v != 0).collect()
}

/// `a` with the `q`-power removed: the q-unit part of the rational.
fn q_unit_part(a: &Rational, q: u64) -> Rational {
    let qi = Int::from(q);
    let mut num = a.numer().clone();
    let mut den = a.denom().clone();
    while num.is_multiple_of(&qi) {
        num /= &qi;
    }
    while den.is_multiple_of(&qi) {
        den /= &qi;
    }
    Rational::new(num, den)
}

/// Residue of a q-unit rational modulo `m` (numerator times inverse of the
/// denominator), or `None` when the denominator is not invertible mod `m`.
fn unit_residue(a: &Rational, m: u64) -> Option<i64> {
    let mi = Int::from(m);
    let num = a.numer().mod_floor(&mi);
    let den = a.denom().mod_floor(&mi);
    let inv = mod_inverse(&den, &mi)?;
    i64::try_from(&(num * inv).mod_floor(&mi)).ok()
}

fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub(crate) fn int_factorize(n: &Int) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n.abs();
    if m.is_zero() || m.is_one() {
        return out;
    }
    let mut p = Int::from(2u64);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            let mut e = 0;
            while m.is_multiple_of(&p) {
                m /= &p;
                e += 1;
            }
            out.push((u64::try_from(&p).expect("prime fits u64"), e));
        }
        p += 1;
    }
    if !m.is_one() {
        out.push((u64::try_from(&m).expect("prime fits u64"), 1));
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = alloc::vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}
