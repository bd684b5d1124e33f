//! Archimedean constants and checks: the Fourier-Jacobi normalization
//! constants with their internal consistency identity, the exact Gram-matrix
//! form of the 16-dimensional Gaussian integral (in `jordan::gram_sigma_det`),
//! and floating-point evaluation of the holomorphic degenerate Whittaker
//! function on the implemented subgroup.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::jordan::{Jordan2, JordanElement};
use crate::scalar::{rat, Int, Rational, Scalar};

/// The constants attached to a block `S` and weight `k` (so `l = k + 8`):
/// `C_1(S) = det(S)^{(l-8)/2} 2^{-16}` and
/// `C_3(S) = C_1(S) det(S)^{9/2} = det(S)^{(k+9)/2} 2^{-16}`, plus the two
/// competing values of `C(R)` (`det(R)^{l-4} 2^{-16}` as stated against
/// `det(R)^{(l-8)/2} 2^{-16}` as derived), which disagree whenever
/// `det(R) != 1` and are therefore both reported, neither silently chosen.
#[derive(Clone, Debug)]
pub struct ConstantsReport {
    pub det: Rational,
    pub weight_k: i64,
    pub c1: Scalar,
    pub c3: Scalar,
    /// `C_3 / C_1`, always `det^{9/2}`.
    pub ratio: Scalar,
    pub cr_stated: Scalar,
    pub cr_derived: Scalar,
    /// set whenever the two `C(R)` values differ (`det != 1`)
    pub cr_discrepancy: bool,
    /// the identity `C_3 = C_1 * det^{9/2}` checked exactly
    pub consistency_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateSliceError;

impl fmt::Display for DegenerateSliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slice has determinant zero")
    }
}

/// Tabulates the constants for `S` and weight `k` and checks the consistency
/// identity.
pub fn constants_report(s: &Jordan2, k: i64) -> Result<ConstantsReport, DegenerateSliceError> {
    let det = s.det();
    if det.is_zero() {
        return Err(DegenerateSliceError);
    }
    assert!(
        det.is_positive(),
        "half-integral powers need a positive determinant"
    );
    let l = k + 8;
    let two16 = Scalar::from_rational(Rational::new(Int::one(), Int::from(1u64 << 16)));
    let c1 = &Scalar::rational_pow_half(&det, l - 8) * &two16;
    let c3 = &Scalar::rational_pow_half(&det, k + 9) * &two16;
    let ratio = &c3 * &c1.inv();
    let cr_stated = &Scalar::rational_pow_half(&det, 2 * (l - 4)) * &two16;
    let cr_derived = &Scalar::rational_pow_half(&det, l - 8) * &two16;
    let consistency_ok = ratio == Scalar::rational_pow_half(&det, 9);
    Ok(ConstantsReport {
        det,
        weight_k: k,
        c1,
        c3,
        ratio,
        cr_discrepancy: cr_stated != cr_derived,
        cr_stated,
        cr_derived,
        consistency_ok,
    })
}

/// `C(S) = |det S|_p^{-9/2}` as an exact scalar (a half power of `p`).
pub fn c_padic(s: &Jordan2, p: u64) -> Result<Scalar, DegenerateSliceError> {
    let det = s.det();
    if det.is_zero() {
        return Err(DegenerateSliceError);
    }
    let v = rational_valuation(&det, p);
    // |det|_p = p^{-v}, so |det|_p^{-9/2} = p^{9v/2}
    Ok(Scalar::rational_pow_half(&rat(p as i64, 1), 9 * v))
}

fn rational_valuation(q: &Rational, p: u64) -> i64 {
    let pi = Int::from(p);
    let count = |mut n: Int| -> i64 {
        let mut v = 0;
        while !n.is_zero() && n.is_multiple_of(&pi) {
            n /= &pi;
            v += 1;
        }
        v
    };
    count(q.numer().clone()) - count(q.denom().clone())
}

/// Barebones complex arithmetic for the floating Whittaker evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn div(self, o: Complex) -> Complex {
        let d = o.re * o.re + o.im * o.im;
        Complex::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }

    pub fn scale(self, t: f64) -> Complex {
        Complex::new(self.re * t, self.im * t)
    }

    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    /// Integer power by repeated squaring (negative exponents via division).
    pub fn powi(self, e: i64) -> Complex {
        if e < 0 {
            return Complex::new(1.0, 0.0).div(self.powi(-e));
        }
        let mut acc = Complex::new(1.0, 0.0);
        let mut base = self;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

/// `e(z) = exp(2 pi i z)` for complex `z`.
pub fn e_of(z: Complex) -> Complex {
    let two_pi = 2.0 * core::f64::consts::PI;
    let r = libm::exp(-two_pi * z.im);
    Complex::new(r * libm::cos(two_pi * z.re), r * libm::sin(two_pi * z.re))
}

#[derive(Clone, Debug, PartialEq)]
pub enum WhittakerError {
    NotPositiveDefinite,
    NotUnimodular(f64),
    LowerHalfPlane,
}

impl fmt::Display for WhittakerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhittakerError::NotPositiveDefinite => write!(f, "index must be positive definite"),
            WhittakerError::NotUnimodular(d) => {
                write!(f, "matrix determinant {} is not 1", d)
            }
            WhittakerError::LowerHalfPlane => write!(f, "matrix does not act on the upper half-plane"),
        }
    }
}

/// Holomorphic degenerate Whittaker value
/// `W_B(n(b) h) = det(B)^{l/2} e((B, diag(i, i, tau + b))) j(h, i)^{-l}`
/// with `tau = h(i)` the Moebius image and `j = c i + d`, for `h` in the
/// embedded rank-one subgroup and a unipotent shift `b` on the corner
/// coordinate. The trace pairing gives
/// `(B, diag(i, i, tau + b)) = i (b_11 + b_22) + b_33 (tau + b)`.
pub fn whittaker_numeric(
    b: &JordanElement,
    l: i64,
    h: [[f64; 2]; 2],
    b_shift: f64,
) -> Result<Complex, WhittakerError> {
    if !b.is_positive_definite() {
        return Err(WhittakerError::NotPositiveDefinite);
    }
    let det_h = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if libm::fabs(det_h - 1.0) > 1e-9 {
        return Err(WhittakerError::NotUnimodular(det_h));
    }
    // tau = (a i + b) / (c i + d)
    let j = Complex::new(h[1][1], h[1][0]);
    let tau = Complex::new(h[0][1], h[0][0]).div(j);
    if tau.im <= 0.0 {
        return Err(WhittakerError::LowerHalfPlane);
    }
    let to_f = |q: &Rational| -> f64 {
        use num_traits::ToPrimitive;
        q.to_f64().unwrap_or(f64::NAN)
    };
    let det_b = to_f(&b.det());
    let corner = to_f(&b.c);
    let diag_sum = to_f(&b.a) + to_f(&b.b);
    // (B, diag(i, i, tau + b)) = i*diag_sum + corner*(tau + b)
    let arg = Complex::new(
        corner * (tau.re + b_shift),
        diag_sum + corner * tau.im,
    );
    let amp = libm::pow(det_b, l as f64 / 2.0);
    Ok(e_of(arg).mul(j.powi(-l)).scale(amp))
}

/// Scalar-to-string table rows for report rendering.
pub fn constants_rows(rep: &ConstantsReport) -> Vec<(String, String)> {
    use alloc::format;
    let mut rows = Vec::new();
    rows.push(("det".into(), format!("{}", rep.det)));
    rows.push(("C1".into(), format!("{}", rep.c1)));
    rows.push(("C3".into(), format!("{}", rep.c3)));
    rows.push(("C3/C1".into(), format!("{}", rep.ratio)));
    rows.push(("C(R) stated".into(), format!("{}", rep.cr_stated)));
    rows.push(("C(R) derived".into(), format!("{}", rep.cr_derived)));
    rows.push((
        "C(R) discrepancy".into(),
        if rep.cr_discrepancy { "yes" } else { "no" }.into(),
    ));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_worked_example() {
        // det S = 4, k = 10 (l = 18): C1 = 4^5 2^{-16}, C3 = 4^{9.5} 2^{-16}
        let s = Jordan2::diag(rat(2, 1), rat(2, 1));
        let rep = constants_report(&s, 10).unwrap();
        assert_eq!(
            rep.c1,
            Scalar::from_rational(rat(1024, 65536))
        );
        let c3_expected = &Scalar::rational_pow_half(&rat(4, 1), 19)
            * &Scalar::from_rational(rat(1, 65536));
        assert_eq!(rep.c3, c3_expected);
        assert_eq!(rep.ratio, Scalar::rational_pow_half(&rat(4, 1), 9));
        assert!(rep.consistency_ok);
        assert!(rep.cr_discrepancy);
    }

    #[test]
    fn constants_trivial_det() {
        let rep = constants_report(&Jordan2::identity(), 10).unwrap();
        let two16 = Scalar::from_rational(rat(1, 65536));
        assert_eq!(rep.c1, two16);
        assert_eq!(rep.c3, two16);
        assert!(!rep.cr_discrepancy);
        assert!(rep.consistency_ok);
    }

    #[test]
    fn c_padic_values() {
        // det = 4: |det|_2^{-9/2} = 2^9
        let s = Jordan2::diag(rat(2, 1), rat(2, 1));
        assert_eq!(c_padic(&s, 2).unwrap(), Scalar::from_int(512));
        assert_eq!(c_padic(&s, 3).unwrap(), Scalar::one());
    }

    #[test]
    fn whittaker_identity_point() {
        // h = 1, b = 0, B = E, l = 0: e((E, diag(i,i,i))) = e^{-6 pi}
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let v = whittaker_numeric(&JordanElement::identity(), 0, id, 0.0).unwrap();
        let expect = libm::exp(-6.0 * core::f64::consts::PI);
        assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-18);
    }

    #[test]
    fn whittaker_shift_multiplies_by_character() {
        // W(n(b) h) / W(h) = e(b_33 * b)
        let b = JordanElement::diag(rat(1, 1), rat(1, 1), rat(3, 1));
        let h = [[2.0, 1.0], [1.0, 1.0]];
        let w0 = whittaker_numeric(&b, 10, h, 0.0).unwrap();
        let shift = 0.375;
        let w1 = whittaker_numeric(&b, 10, h, shift).unwrap();
        let expect = e_of(Complex::new(3.0 * shift, 0.0)).mul(w0);
        assert!((w1.re - expect.re).abs() < 1e-12 * w0.abs());
        assert!((w1.im - expect.im).abs() < 1e-12 * w0.abs());
    }

    #[test]
    fn whittaker_scaling_action() {
        // W_{S (+) r}(h(a) h) = sgn(a)^l W_{S (+) a^2 r}(h)
        let s = Jordan2::diag(rat(1, 1), rat(2, 1));
        let h = [[1.0, 0.5], [0.0, 1.0]];
        for (a, l) in [(2.0f64, 11i64), (-1.5, 11), (0.5, 10), (-0.5, 9)] {
            let ha = [[a * h[0][0], a * h[0][1]], [h[1][0] / a, h[1][1] / a]];
            let lhs = whittaker_numeric(&s.oplus(&rat(3, 1)), l, ha, 0.0).unwrap();
            let r2 = rat(3, 1) * Rational::new(
                Int::from((a * a * 16.0) as i64),
                Int::from(16),
            );
            let rhs = whittaker_numeric(&s.oplus(&r2), l, h, 0.0).unwrap();
            let sign = if a < 0.0 && l % 2 != 0 { -1.0 } else { 1.0 };
            let scale = lhs.abs().max(1e-300);
            assert!(
                (lhs.re - sign * rhs.re).abs() / scale < 1e-9
                    && (lhs.im - sign * rhs.im).abs() / scale < 1e-9,
                "a = {}, l = {}",
                a,
                l
            );
        }
    }

    #[test]
    fn whittaker_block_restriction() {
        // W_{S (+) r}(h) = det(S)^{l/2} e^{-2 pi tr S} * W_r-part
        let s = Jordan2::diag(rat(2, 1), rat(1, 1));
        let r = rat(5, 1);
        let l = 12i64;
        let h = [[1.0, 0.25], [0.0, 1.0]];
        let full = whittaker_numeric(&s.oplus(&r), l, h, 0.0).unwrap();
        // SL2-level value: r^{l/2} e(r tau) j^{-l}, tau = i + 1/4
        let tau = Complex::new(0.25, 1.0);
        let w_r = e_of(tau.scale(5.0)).scale(libm::pow(5.0, l as f64 / 2.0));
        let factor = libm::pow(2.0, l as f64 / 2.0) * libm::exp(-2.0 * core::f64::consts::PI * 3.0);
        let expect = w_r.scale(factor);
        assert!((full.re - expect.re).abs() < 1e-12 * expect.abs().max(1e-300));
        assert!((full.im - expect.im).abs() < 1e-12 * expect.abs().max(1e-300));
    }
}
