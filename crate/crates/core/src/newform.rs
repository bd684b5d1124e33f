//! Elliptic newform records and the local data derived from them: Satake
//! parameters at good primes and the local-type classification at primes
//! dividing a square-free level.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::scalar::{int, rat, Int, Rational, Scalar};

/// Finite-order central character data. `Table` holds the values on residues
/// `0..modulus`; entries at non-units must be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Character {
    Trivial,
    Table { modulus: u64, values: Vec<Scalar> },
}

impl Character {
    pub fn modulus(&self) -> u64 {
        match self {
            Character::Trivial => 1,
            Character::Table { modulus, .. } => *modulus,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Character::Trivial)
    }

    /// Evaluates at an integer (zero on non-units of the modulus).
    pub fn eval_int(&self, n: i64) -> Scalar {
        match self {
            Character::Trivial => Scalar::one(),
            Character::Table { modulus, values } => {
                let m = *modulus as i64;
                let r = n.rem_euclid(m) as usize;
                values.get(r).cloned().unwrap_or_else(Scalar::zero)
            }
        }
    }

    pub fn eval_at_minus_one(&self) -> Scalar {
        self.eval_int(-1)
    }

    /// Structural checks: `chi(1) = 1`, zero exactly off the units, and
    /// multiplicativity on the full residue table.
    pub fn validate(&self) -> Result<(), NewformError> {
        match self {
            Character::Trivial => Ok(()),
            Character::Table { modulus, values } => {
                let m = *modulus;
                if m == 0 || values.len() != m as usize {
                    return Err(NewformError::MalformedCharacter(
                        "value table length must equal the modulus".into(),
                    ));
                }
                for r in 0..m {
                    let coprime = Int::from(r).gcd(&Int::from(m)).is_one();
                    let v = &values[r as usize];
                    if coprime && v.is_zero() {
                        return Err(NewformError::MalformedCharacter(
                            "character vanishes on a unit".into(),
                        ));
                    }
                    if !coprime && !v.is_zero() {
                        return Err(NewformError::MalformedCharacter(
                            "character is non-zero off the units".into(),
                        ));
                    }
                }
                if self.eval_int(1) != Scalar::one() {
                    return Err(NewformError::MalformedCharacter("chi(1) != 1".into()));
                }
                for a in 0..m {
                    for b in a..m {
                        let lhs = self.eval_int((a * b) as i64);
                        let rhs = &self.eval_int(a as i64) * &self.eval_int(b as i64);
                        if lhs != rhs {
                            return Err(NewformError::MalformedCharacter(
                                "character is not multiplicative".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// A normalized elliptic newform: level, weight, central character, an initial
/// stretch of Fourier coefficients and the Atkin-Lehner signs at the level
/// primes. Coefficients are exact rationals; for irrational eigenvalue fields
/// they are decimal approximations whose accuracy is declared by
/// `precision_bits` (comparisons downstream use that declared tolerance).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformRecord {
    pub level: u64,
    pub weight: u32,
    pub character: Character,
    pub coefficients: Vec<Rational>,
    pub precision_bits: Option<u32>,
    pub atkin_lehner: BTreeMap<u64, i8>,
}

/// Validation and derivation errors for newform data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NewformError {
    NotNormalized,
    ParityViolation { weight: u32 },
    WeightTooSmall { weight: u32 },
    AtkinLehnerInconsistent { p: u64 },
    AtkinLehnerMissing { p: u64 },
    AtkinLehnerInvalid { p: u64 },
    /// `p^2 | N`: a possibly supercuspidal component, unsupported.
    NonSquarefreeAt { p: u64 },
    RamifiedPrime { p: u64 },
    CharacterRamifiedAt { p: u64 },
    CoefficientMissing { n: u64 },
    MalformedCharacter(String),
    /// Satake parameters fall outside the supported quadratic tower.
    IrrationalDiscriminant { p: u64 },
    EmptyCoefficients,
}

impl fmt::Display for NewformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NewformError::NotNormalized => write!(f, "a_1 must equal 1"),
            NewformError::ParityViolation { weight } => {
                write!(f, "character parity violates chi(-1) = (-1)^{}", weight)
            }
            NewformError::WeightTooSmall { weight } => {
                write!(f, "weight {} is below 2", weight)
            }
            NewformError::AtkinLehnerInconsistent { p } => {
                write!(f, "a_{p} is inconsistent with the Atkin-Lehner sign at {p}")
            }
            NewformError::AtkinLehnerMissing { p } => {
                write!(f, "no Atkin-Lehner sign supplied at level prime {}", p)
            }
            NewformError::AtkinLehnerInvalid { p } => {
                write!(f, "Atkin-Lehner sign at {} must be +1 or -1", p)
            }
            NewformError::NonSquarefreeAt { p } => {
                write!(
                    f,
                    "{}^2 divides the level: unsupported (possibly supercuspidal)",
                    p
                )
            }
            NewformError::RamifiedPrime { p } => {
                write!(f, "{} divides the level: use classify_local, not satake", p)
            }
            NewformError::CharacterRamifiedAt { p } => {
                write!(
                    f,
                    "character ramified at level prime {}: supply explicit local data",
                    p
                )
            }
            NewformError::CoefficientMissing { n } => {
                write!(f, "coefficient a_{} is not available in the record", n)
            }
            NewformError::MalformedCharacter(msg) => write!(f, "malformed character: {}", msg),
            NewformError::IrrationalDiscriminant { p } => {
                write!(
                    f,
                    "Satake discriminant at {} is not rational; unsupported tower",
                    p
                )
            }
            NewformError::EmptyCoefficients => write!(f, "coefficient list is empty"),
        }
    }
}

/// Local component of the associated representation at one finite prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalType {
    /// Unramified principal series with Satake pair `(alpha, beta)`,
    /// `alpha * beta = chi(p)`.
    UnramifiedPS { alpha: Scalar, beta: Scalar },
    /// (Twist of) Steinberg, tagged by the Atkin-Lehner sign.
    Steinberg { epsilon: i8 },
    /// Ramified principal series, supplied externally: which of the two
    /// characters is ramified, the values `alpha = mu_1(p^{-1})`,
    /// `beta = mu_2(p^{-1})`, the sign `mu_2(-1)`, and optionally the
    /// restriction of `mu_p` to units as a residue character (required for
    /// evaluating the induced character away from p).
    RamifiedPS {
        mu1_ramified: bool,
        alpha: Scalar,
        beta: Scalar,
        mu2_at_minus_one: Scalar,
        unit_character: Option<Character>,
    },
}

impl LocalType {
    /// `mu_p(p) = alpha / beta` where defined (both principal-series cases).
    pub fn mu_at_p(&self) -> Option<Scalar> {
        match self {
            LocalType::UnramifiedPS { alpha, beta } => Some(alpha * &beta.inv()),
            LocalType::RamifiedPS { alpha, beta, .. } => Some(alpha * &beta.inv()),
            LocalType::Steinberg { .. } => None,
        }
    }

    /// Whether `|alpha| = 1` holds exactly (the unitarity check); reported,
    /// never assumed.
    pub fn ramanujan_ok(&self) -> Option<bool> {
        match self {
            LocalType::UnramifiedPS { alpha, .. } => Some(alpha.abs_sq() == Scalar::one()),
            _ => None,
        }
    }
}

impl NewformRecord {
    /// `a_n`, if the record carries it.
    pub fn coefficient(&self, n: u64) -> Result<&Rational, NewformError> {
        if n == 0 || n as usize > self.coefficients.len() {
            return Err(NewformError::CoefficientMissing { n });
        }
        Ok(&self.coefficients[n as usize - 1])
    }

    pub fn is_exact(&self) -> bool {
        self.precision_bits.is_none()
    }

    /// Every violated invariant, in a fixed order. An empty list means the
    /// record is accepted.
    pub fn validate(&self) -> Vec<NewformError> {
        let mut errs = Vec::new();
        if let Err(e) = self.character.validate() {
            errs.push(e);
        }
        if self.weight < 2 {
            errs.push(NewformError::WeightTooSmall {
                weight: self.weight,
            });
        }
        if self.coefficients.is_empty() {
            errs.push(NewformError::EmptyCoefficients);
            return errs;
        }
        if !self.coefficients[0].is_one() {
            errs.push(NewformError::NotNormalized);
        }
        // parity chi(-1) = (-1)^weight
        let chi_m1 = self.character.eval_at_minus_one();
        let want = if self.weight % 2 == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        };
        if chi_m1 != want {
            errs.push(NewformError::ParityViolation {
                weight: self.weight,
            });
        }
        for (p, e) in factorize(self.level) {
            if e >= 2 {
                errs.push(NewformError::NonSquarefreeAt { p });
                continue;
            }
            match self.atkin_lehner.get(&p) {
                None => errs.push(NewformError::AtkinLehnerMissing { p }),
                Some(&eps) if eps != 1 && eps != -1 => {
                    errs.push(NewformError::AtkinLehnerInvalid { p })
                }
                Some(&eps) => {
                    // trivial character, square-free level: a_p = -eps p^{l/2 - 1}
                    if self.character.is_trivial() && self.weight % 2 == 0 {
                        if let Ok(ap) = self.coefficient(p) {
                            let expect = expected_steinberg_ap(p, self.weight, eps);
                            if ap != &expect {
                                errs.push(NewformError::AtkinLehnerInconsistent { p });
                            }
                        }
                    }
                }
            }
        }
        errs
    }

    /// Satake parameters at a good prime: the roots of
    /// `X^2 - a_p p^{-(l-1)/2} X + chi(p)`, ordered with the nonnegative
    /// imaginary part first (ties broken by descending real part).
    pub fn satake(&self, p: u64) -> Result<(Scalar, Scalar), NewformError> {
        if self.level % p == 0 {
            return Err(NewformError::RamifiedPrime { p });
        }
        let ap = self.coefficient(p)?;
        let chi_p = self.character.eval_int(p as i64);
        let half = Scalar::rational_pow_half(&rat(p as i64, 1), -((self.weight as i64) - 1));
        let t = &Scalar::from_rational(ap.clone()) * &half;
        let disc = &(&t * &t) - &(&Scalar::from_int(4) * &chi_p);
        let disc_q = disc
            .as_rational()
            .ok_or(NewformError::IrrationalDiscriminant { p })?;
        let root = Scalar::sqrt_rational(&disc_q);
        let halfs = Scalar::from_rational(rat(1, 2));
        let alpha = &(&t + &root) * &halfs;
        let beta = &(&t - &root) * &halfs;
        // disc < 0: alpha already has the positive imaginary part;
        // disc >= 0: both roots real, alpha carries the larger real part.
        Ok((alpha, beta))
    }

    /// Local type at any prime: unramified principal series away from the
    /// level, Steinberg (tagged by the Atkin-Lehner sign) at level primes of a
    /// square-free level with character unramified there.
    pub fn classify_local(&self, p: u64) -> Result<LocalType, NewformError> {
        if self.level % p != 0 {
            let (alpha, beta) = self.satake(p)?;
            return Ok(LocalType::UnramifiedPS { alpha, beta });
        }
        if (self.level / p) % p == 0 {
            return Err(NewformError::NonSquarefreeAt { p });
        }
        if self.character.modulus() % p == 0 {
            return Err(NewformError::CharacterRamifiedAt { p });
        }
        match self.atkin_lehner.get(&p) {
            Some(&eps) if eps == 1 || eps == -1 => Ok(LocalType::Steinberg { epsilon: eps }),
            Some(_) => Err(NewformError::AtkinLehnerInvalid { p }),
            None => Err(NewformError::AtkinLehnerMissing { p }),
        }
    }
}

/// `-eps * p^{l/2 - 1}` for even weight.
fn expected_steinberg_ap(p: u64, weight: u32, eps: i8) -> Rational {
    let e = (weight as i64) / 2 - 1;
    let mut v = Rational::one();
    for _ in 0..e {
        v *= rat(p as i64, 1);
    }
    if eps == 1 {
        -v
    } else {
        v
    }
}

/// Trial-division factorization for level-sized integers.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Square-class decomposition of a positive rational: `n = a^2 * m` with `m`
/// a square-free positive integer. Returns `(a, m)`.
pub fn square_class(n: &Rational) -> (Rational, Int) {
    assert!(n.is_positive(), "square_class needs a positive rational");
    let (sn, mn) = squarefree_parts(n.numer());
    let (sd, md) = squarefree_parts(n.denom());
    // n = (sn^2 mn) / (sd^2 md) = (sn / (sd * md))^2 * (mn * md)
    let a = Rational::new(sn, &sd * &md);
    (a, mn * md)
}

fn squarefree_parts(n: &Int) -> (Int, Int) {
    let mut m = n.abs();
    let mut s = Int::one();
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
                s *= &p;
            }
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += 1;
    }
    free *= m;
    (s, free)
}

#[cfg(test)]
pub(crate) fn level11_record() -> NewformRecord {
    // q - 2q^2 - q^3 + 2q^4 + q^5 + 2q^6 - 2q^7 + 0q^8 - 2q^9 - 2q^10 + q^11 ...
    let a = [
        1i64, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4, 4, -1, -4, -2, 4, 0, 2,
    ];
    NewformRecord {
        level: 11,
        weight: 2,
        character: Character::Trivial,
        coefficients: a.iter().map(|&x| rat(x, 1)).collect(),
        precision_bits: None,
        atkin_lehner: [(11u64, -1i8)].into_iter().collect(),
    }
}
