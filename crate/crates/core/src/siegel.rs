//! Local Siegel-polynomial plumbing: the monic integer polynomials `f_B`
//! attached to `(p, local invariant of B)`, the normalization factor
//! `gamma(s) = prod_{j=0..2} zeta_p(s - 4j)`, a hard validation gate on table
//! data, and the local Whittaker values the assembler consumes.
//!
//! The closed form of `f_B` is data, not code: entries are loaded from table
//! files and are only served after passing [`validate`]. The built-in rule is
//! the degree-zero case `f = 1`, which is table-independent.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::jordan::JordanElement;
use crate::scalar::{rat, Int, Rational, Scalar};

/// Monic integer polynomial of degree `d = ord_p det(B)`, stored with
/// ascending coefficients (`coeffs[j]` multiplies `X^j`, `coeffs[d] = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelPolynomial {
    pub p: u64,
    pub d: u32,
    pub coeffs: Vec<Int>,
}

impl SiegelPolynomial {
    pub fn constant_one(p: u64) -> Self {
        SiegelPolynomial {
            p,
            d: 0,
            coeffs: vec![Int::one()],
        }
    }

    /// Evaluates at an exact scalar.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Scalar::from_rational(Rational::from_integer(c.clone()));
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }
}

/// Identified checks of the table gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckName {
    Monic,
    DegreeMatchesValuation,
    CoefficientLengthConsistent,
    CoefficientBound,
    NormalizedValueBound,
    DegreeZeroIsConstantOne,
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckName::Monic => "monic",
            CheckName::DegreeMatchesValuation => "degree-matches-valuation",
            CheckName::CoefficientLengthConsistent => "coefficient-length",
            CheckName::CoefficientBound => "coefficient-bound",
            CheckName::NormalizedValueBound => "normalized-value-bound",
            CheckName::DegreeZeroIsConstantOne => "degree-zero-constant",
        };
        write!(f, "{}", s)
    }
}

#[derive(Clone, Debug)]
pub struct ValidationCheck {
    pub name: CheckName,
    pub passed: bool,
    pub detail: String,
}

/// Itemized validation outcome; validation never mutates the table.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<CheckName> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

/// Validates a candidate polynomial against the valuation of the element it
/// claims to describe: monicity, degree, the coefficient bound
/// `|a_i| <= p^{11 d}`, and the normalized-value estimate
/// `p^{-9d/2} |f(p^{9-s})| <= p^{15d/2}` on the grid `Re(s) in {10,12,15,20}`
/// (checked squared, so every comparison is exact rational arithmetic).
pub fn validate(poly: &SiegelPolynomial, det_valuation: u32) -> ValidationReport {
    let mut checks = Vec::new();
    let p = Int::from(poly.p);

    let monic = poly.coeffs.last().map(|c| c.is_one()).unwrap_or(false);
    checks.push(ValidationCheck {
        name: CheckName::Monic,
        passed: monic,
        detail: format!(
            "leading coefficient {}",
            poly.coeffs.last().cloned().unwrap_or_else(Int::zero)
        ),
    });

    checks.push(ValidationCheck {
        name: CheckName::DegreeMatchesValuation,
        passed: poly.d == det_valuation,
        detail: format!("declared degree {}, valuation {}", poly.d, det_valuation),
    });

    checks.push(ValidationCheck {
        name: CheckName::CoefficientLengthConsistent,
        passed: poly.coeffs.len() == poly.d as usize + 1,
        detail: format!("{} coefficients for degree {}", poly.coeffs.len(), poly.d),
    });

    // |a_i| <= p^{11 d} for every coefficient
    let bound = p.pow(11 * poly.d);
    let coeff_ok = poly.coeffs.iter().all(|c| c.abs() <= bound);
    checks.push(ValidationCheck {
        name: CheckName::CoefficientBound,
        passed: coeff_ok,
        detail: format!("bound p^(11d) = {}", bound),
    });

    if poly.d == 0 {
        checks.push(ValidationCheck {
            name: CheckName::DegreeZeroIsConstantOne,
            passed: poly.coeffs == vec![Int::one()],
            detail: "degree zero forces f = 1".into(),
        });
    }

    if poly.coeffs.len() == poly.d as usize + 1 {
        // squared form of |f(p^{9-s})| <= p^{12 d}, i.e. the normalized value
        // |det|^{9/2} |f| <= |det|^{-15/2}, on integer sample points
        let cap = Rational::from_integer(p.pow(24 * poly.d));
        let mut ok = true;
        let mut detail = String::new();
        for s in [10i64, 12, 15, 20] {
            let t = Rational::new(Int::one(), p.pow((s - 9) as u32));
            let v = poly.eval_rational(&t);
            let sq = &v * &v;
            if sq > cap {
                ok = false;
                detail = format!("fails at s = {}: |f|^2 = {}", s, sq);
                break;
            }
        }
        if ok {
            detail = "holds on s in {10, 12, 15, 20}".into();
        }
        checks.push(ValidationCheck {
            name: CheckName::NormalizedValueBound,
            passed: ok,
            detail,
        });
    }

    ValidationReport { checks }
}

/// Dense polynomial over the rationals (ascending coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

/// A rational function of `t = p^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(t) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_poly = |p: &Poly| -> String {
            let parts: Vec<String> = p
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => format!("{}", c),
                    1 if c.is_one() => "t".into(),
                    1 => format!("{}*t", c),
                    _ if c.is_one() => format!("t^{}", i),
                    _ => format!("{}*t^{}", c, i),
                })
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        write!(f, "({}) / ({})", fmt_poly(&self.num), fmt_poly(&self.den))
    }
}

/// `gamma(s) = prod_{j=0..2} (1 - p^{4j} t)^{-1}` as a rational function of
/// `t = p^{-s}`.
pub fn gamma_p(p: u64) -> RationalFunction {
    let mut den = Poly::one();
    let pi = Int::from(p);
    for j in 0..3u32 {
        let c = Rational::from_integer(pi.pow(4 * j));
        den = den.mul(&Poly(vec![Rational::one(), -c]));
    }
    RationalFunction {
        num: Poly::one(),
        den,
    }
}

/// The local series `b(B, s) = gamma(s)^{-1} f_B(p^{9-s})`, a polynomial in
/// `t` (returned with denominator 1).
pub fn siegel_series(poly: &SiegelPolynomial) -> RationalFunction {
    let gamma = gamma_p(poly.p);
    // f(p^{9-s}) = f(p^9 t)
    let p9 = Rational::from_integer(Int::from(poly.p).pow(9));
    let mut scaled = Vec::with_capacity(poly.coeffs.len());
    let mut power = Rational::one();
    for c in &poly.coeffs {
        scaled.push(Rational::from_integer(c.clone()) * &power);
        power *= &p9;
    }
    RationalFunction {
        num: gamma.den.mul(&Poly(scaled)),
        den: Poly::one(),
    }
}

/// Lookup key for table entries: either the valuation of the determinant or a
/// canonical triple of diagonal valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InvariantKey {
    Degree(u32),
    Triple(u32, u32, u32),
}

impl InvariantKey {
    pub fn degree(&self) -> u32 {
        match self {
            InvariantKey::Degree(d) => *d,
            InvariantKey::Triple(a, b, c) => a + b + c,
        }
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantKey::Degree(d) => write!(f, "d={}", d),
            InvariantKey::Triple(a, b, c) => write!(f, "triple={},{},{}", a, b, c),
        }
    }
}

/// Where a table entry came from, carried through into lift output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    TableLine(usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Builtin => write!(f, "builtin"),
            Provenance::TableLine(n) => write!(f, "table:{}", n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SiegelEntry {
    pub poly: SiegelPolynomial,
    pub steinberg: Option<Rational>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub enum SiegelError {
    DegenerateElement,
    NonIntegralDeterminant,
    /// No polynomial stored for this `(p, key)`.
    MissingEntry { p: u64, key: InvariantKey },
    /// Entry exists but carries no Steinberg value.
    MissingSteinbergValue { p: u64, key: InvariantKey },
    ValidationFailed {
        p: u64,
        key: InvariantKey,
        failed: Vec<CheckName>,
    },
}

impl fmt::Display for SiegelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiegelError::DegenerateElement => write!(f, "element has determinant zero"),
            SiegelError::NonIntegralDeterminant => {
                write!(f, "determinant is not an integer")
            }
            SiegelError::MissingEntry { p, key } => {
                write!(f, "siegel polynomial unavailable for p = {}, {}", p, key)
            }
            SiegelError::MissingSteinbergValue { p, key } => {
                write!(f, "no Steinberg value stored for p = {}, {}", p, key)
            }
            SiegelError::ValidationFailed { p, key, failed } => {
                write!(f, "entry (p = {}, {}) failed validation:", p, key)?;
                for name in failed {
                    write!(f, " {}", name)?;
                }
                Ok(())
            }
        }
    }
}

/// Keyed store of validated Siegel entries plus the built-in degree-zero rule.
#[derive(Clone, Debug, Default)]
pub struct SiegelProvider {
    entries: BTreeMap<(u64, InvariantKey), SiegelEntry>,
}

impl SiegelProvider {
    pub fn empty() -> Self {
        SiegelProvider::default()
    }

    /// Inserts an entry after the validation gate; rejected entries never
    /// enter the table.
    pub fn insert(
        &mut self,
        p: u64,
        key: InvariantKey,
        entry: SiegelEntry,
    ) -> Result<(), SiegelError> {
        let report = validate(&entry.poly, key.degree());
        if !report.passed() {
            return Err(SiegelError::ValidationFailed {
                p,
                key,
                failed: report.failed_names(),
            });
        }
        self.entries.insert((p, key), entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u64, InvariantKey), &SiegelEntry)> {
        self.entries.iter()
    }

    /// Resolves the entry for `B` at `p`: the built-in `f = 1` at valuation
    /// zero, then a degree-keyed entry, then (for diagonal `B`) a
    /// valuation-triple entry. Two elements with equal degree share an entry
    /// only when the table stored it under the degree key.
    pub fn resolve(
        &self,
        b: &JordanElement,
        p: u64,
    ) -> Result<(SiegelEntry, InvariantKey), SiegelError> {
        let d = det_valuation(b, p)?;
        if d == 0 {
            return Ok((
                SiegelEntry {
                    poly: SiegelPolynomial::constant_one(p),
                    steinberg: Some(Rational::one()),
                    provenance: Provenance::Builtin,
                },
                InvariantKey::Degree(0),
            ));
        }
        let dkey = InvariantKey::Degree(d);
        if let Some(e) = self.entries.get(&(p, dkey)) {
            return Ok((e.clone(), dkey));
        }
        if let Some(tkey) = diagonal_triple(b, p) {
            if let Some(e) = self.entries.get(&(p, tkey)) {
                return Ok((e.clone(), tkey));
            }
        }
        Err(SiegelError::MissingEntry { p, key: dkey })
    }
}

/// `ord_p det(B)`; the determinant must be a non-zero integer.
pub fn det_valuation(b: &JordanElement, p: u64) -> Result<u32, SiegelError> {
    let det = b.det();
    if det.is_zero() {
        return Err(SiegelError::DegenerateElement);
    }
    if !det.is_integer() {
        return Err(SiegelError::NonIntegralDeterminant);
    }
    let mut n = det.to_integer().abs();
    let pi = Int::from(p);
    let mut d = 0u32;
    while n.is_multiple_of(&pi) {
        n /= &pi;
        d += 1;
    }
    Ok(d)
}

/// The canonical valuation triple of a diagonal element (sorted ascending);
/// `None` when `B` has any off-diagonal entry, since this artifact does not
/// decide integral equivalence classes for general elements.
fn diagonal_triple(b: &JordanElement, p: u64) -> Option<InvariantKey> {
    if !(b.c1.is_zero() && b.c2.is_zero() && b.c3.is_zero()) {
        return None;
    }
    let val = |q: &Rational| -> Option<u32> {
        if !q.is_integer() || q.is_zero() {
            return None;
        }
        let mut n = q.to_integer().abs();
        let pi = Int::from(p);
        let mut d = 0u32;
        while n.is_multiple_of(&pi) {
            n /= &pi;
            d += 1;
        }
        Some(d)
    };
    let mut t = [val(&b.a)?, val(&b.b)?, val(&b.c)?];
    t.sort_unstable();
    Some(InvariantKey::Triple(t[0], t[1], t[2]))
}

/// Normalized unramified Whittaker value
/// `|det B|_p^{9/2} * f_{B,p}(mu_val)` with `mu_val = mu_p(p)`. At `mu = 1`
/// this is the value forced by the series normalization (the L-factor product
/// cancels `gamma(9)` exactly; see the `gamma_cancellation` test).
pub fn whittaker_unramified(
    b: &JordanElement,
    p: u64,
    mu_val: &Scalar,
    provider: &SiegelProvider,
) -> Result<Scalar, SiegelError> {
    let d = det_valuation(b, p)?;
    if d == 0 {
        return Ok(Scalar::one());
    }
    let (entry, _) = provider.resolve(b, p)?;
    let norm = Scalar::rational_pow_half(&rat(p as i64, 1), -9 * d as i64);
    Ok(&norm * &entry.poly.eval(mu_val))
}

/// Whittaker value on the Iwahori-fixed line at a Steinberg prime: the table
/// value verbatim, with the declared normalization 1 at valuation zero.
pub fn whittaker_steinberg(
    b: &JordanElement,
    p: u64,
    provider: &SiegelProvider,
) -> Result<Scalar, SiegelError> {
    let d = det_valuation(b, p)?;
    if d == 0 {
        return Ok(Scalar::one());
    }
    let (entry, key) = provider.resolve(b, p)?;
    match entry.steinberg {
        Some(v) => Ok(Scalar::from_rational(v)),
        None => Err(SiegelError::MissingSteinbergValue { p, key }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn gamma_at_p2() {
        let g = gamma_p(2);
        // denominator (1-t)(1-16t)(1-256t)
        assert_eq!(
            g.den,
            Poly(vec![
                rat(1, 1),
                rat(-273, 1),
                rat(16 + 256 + 4096, 1),
                rat(-4096, 1)
            ])
        );
        // gamma evaluated at s = 9, i.e. t = 2^{-9}: zeta_2(9) zeta_2(5) zeta_2(1)
        let t = rat(1, 512);
        let got = g.eval(&t).unwrap();
        let zeta = |s: u32| (Rational::one() - rat(1, 2i64.pow(s))).recip();
        assert_eq!(got, zeta(9) * zeta(5) * zeta(1));
    }

    #[test]
    fn degree_zero_series_is_inverse_gamma() {
        // f = 1 forces b(B,s) = prod_j (1 - p^{4j - s})
        let poly = SiegelPolynomial::constant_one(3);
        let b = siegel_series(&poly);
        let t = rat(1, 81);
        let expect = (Rational::one() - &t)
            * (Rational::one() - rat(81, 1) * &t)
            * (Rational::one() - rat(6561, 1) * &t);
        assert_eq!(b.eval(&t).unwrap(), expect);
        // gamma * b = f as rational functions: spot-check several points
        let g = gamma_p(3);
        for t in [rat(1, 7), rat(2, 13), rat(-1, 5)] {
            let gb = g.eval(&t).unwrap() * b.eval(&t).unwrap();
            assert_eq!(gb, Rational::one());
        }
    }

    #[test]
    fn validator_examples() {
        // f = 1 at d = 0 passes
        let ok = validate(&SiegelPolynomial::constant_one(5), 0);
        assert!(ok.passed());
        // f = 2X + 1 is not monic
        let bad = SiegelPolynomial {
            p: 5,
            d: 1,
            coeffs: vec![int(1), int(2)],
        };
        let rep = validate(&bad, 1);
        assert!(!rep.passed());
        assert!(rep.failed_names().contains(&CheckName::Monic));
        // f = X + p^12 violates the coefficient bound p^{11}
        let big = SiegelPolynomial {
            p: 5,
            d: 1,
            coeffs: vec![Int::from(5u64).pow(12), int(1)],
        };
        let rep = validate(&big, 1);
        assert!(rep.failed_names().contains(&CheckName::CoefficientBound));
        // degree mismatch is its own named failure
        let rep = validate(&SiegelPolynomial::constant_one(5), 2);
        assert!(rep
            .failed_names()
            .contains(&CheckName::DegreeMatchesValuation));
    }

    #[test]
    fn gamma_cancellation() {
        // prod_j L(9 - 4j, 1) * gamma(9)^{-1} = 1 symbolically: the L-factors
        // at mu = 1 are zeta_p(9), zeta_p(5), zeta_p(1), exactly gamma at s=9
        for p in [2u64, 3, 11] {
            let g = gamma_p(p);
            let t = Rational::new(Int::one(), Int::from(p).pow(9));
            let gamma_at_9 = g.eval(&t).unwrap();
            let zeta = |s: u32| {
                (Rational::one() - Rational::new(Int::one(), Int::from(p).pow(s))).recip()
            };
            assert_eq!(gamma_at_9, zeta(9) * zeta(5) * zeta(1));
        }
    }

    #[test]
    fn provider_paths() {
        let mut prov = SiegelProvider::empty();
        // builtin rule: valuation zero
        let e = JordanElement::identity();
        assert_eq!(
            whittaker_unramified(&e, 7, &Scalar::one(), &prov).unwrap(),
            Scalar::one()
        );
        assert_eq!(whittaker_steinberg(&e, 7, &prov).unwrap(), Scalar::one());

        // a synthetic degree-1 entry for p = 2 (gated by validate)
        let poly = SiegelPolynomial {
            p: 2,
            d: 1,
            coeffs: vec![int(3), int(1)],
        };
        prov.insert(
            2,
            InvariantKey::Degree(1),
            SiegelEntry {
                poly,
                steinberg: Some(rat(5, 7)),
                provenance: Provenance::TableLine(1),
            },
        )
        .unwrap();

        let b = JordanElement::diag(rat(1, 1), rat(1, 1), rat(2, 1));
        // |det|_2^{9/2} f(mu) = 2^{-9/2} (mu + 3)
        let mu = Scalar::from_int(2);
        let got = whittaker_unramified(&b, 2, &mu, &prov).unwrap();
        let expect = &Scalar::rational_pow_half(&rat(2, 1), -9) * &Scalar::from_int(5);
        assert_eq!(got, expect);
        assert_eq!(
            whittaker_steinberg(&b, 2, &prov).unwrap(),
            Scalar::from_rational(rat(5, 7))
        );

        // missing entries name their key
        match whittaker_unramified(&b, 2, &mu, &SiegelProvider::empty()) {
            Err(SiegelError::MissingEntry { p: 2, key }) => {
                assert_eq!(key, InvariantKey::Degree(1))
            }
            other => panic!("expected missing entry, got {:?}", other),
        }
    }

    #[test]
    fn provider_rejects_invalid() {
        let mut prov = SiegelProvider::empty();
        let bad = SiegelPolynomial {
            p: 2,
            d: 1,
            coeffs: vec![int(1), int(2)],
        };
        let err = prov
            .insert(
                2,
                InvariantKey::Degree(1),
                SiegelEntry {
                    poly: bad,
                    steinberg: None,
                    provenance: Provenance::TableLine(3),
                },
            )
            .unwrap_err();
        match err {
            SiegelError::ValidationFailed { failed, .. } => {
                assert!(failed.contains(&CheckName::Monic))
            }
            other => panic!("unexpected error {:?}", other),
        }
        assert!(prov.is_empty());
    }

    #[test]
    fn triple_keys_serve_diagonal_elements() {
        let mut prov = SiegelProvider::empty();
        let poly = SiegelPolynomial {
            p: 3,
            d: 2,
            coeffs: vec![int(2), int(-1), int(1)],
        };
        prov.insert(
            3,
            InvariantKey::Triple(0, 1, 1),
            SiegelEntry {
                poly,
                steinberg: None,
                provenance: Provenance::TableLine(9),
            },
        )
        .unwrap();
        let b = JordanElement::diag(rat(3, 1), rat(1, 1), rat(3, 1));
        let got = whittaker_unramified(&b, 3, &Scalar::one(), &prov).unwrap();
        // f(1) = 2, norm 3^{-9} (d = 2)
        let expect = &Scalar::rational_pow_half(&rat(3, 1), -18) * &Scalar::from_int(2);
        assert_eq!(got, expect);
        // diag(9,1,1) has the same degree but triple (0,0,2): must miss
        let other = JordanElement::diag(rat(9, 1), rat(1, 1), rat(1, 1));
        match whittaker_unramified(&other, 3, &Scalar::one(), &prov) {
            Err(SiegelError::MissingEntry { .. }) => {}
            other => panic!("expected missing entry, got {:?}", other),
        }
    }
}
