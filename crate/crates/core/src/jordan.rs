//! The 27-dimensional exceptional Jordan algebra of 3x3 hermitian octonion
//! matrices, with the cubic determinant, trace pairing, Freudenthal cross
//! product, the rank/positivity tests, the two group actions the lift needs
//! (the one-parameter scaling on quadruples and the unipotent translation on
//! block elements), and bounded enumeration of positive definite integral
//! elements.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::octonion::{det_n, Octonion, OctonionOrder};
use crate::scalar::{rat, Rational};

/// Hermitian element
/// `[[a, c3, conj(c2)], [conj(c3), b, c1], [c2, conj(c1), c]]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct JordanElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub c1: Octonion,
    pub c2: Octonion,
    pub c3: Octonion,
}

impl JordanElement {
    pub fn zero() -> Self {
        JordanElement::default()
    }

    pub fn identity() -> Self {
        JordanElement::diag(rat(1, 1), rat(1, 1), rat(1, 1))
    }

    pub fn diag(a: Rational, b: Rational, c: Rational) -> Self {
        JordanElement {
            a,
            b,
            c,
            ..Default::default()
        }
    }

    /// The idempotent `diag(0, 0, 1)` that the scaling action is built from.
    pub fn e3() -> Self {
        JordanElement::diag(rat(0, 1), rat(0, 1), rat(1, 1))
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.b + &self.c
    }

    /// Cubic norm
    /// `det = abc - a N(c1) - b N(c2) - c N(c3) + T((c1 c2) c3)`.
    pub fn det(&self) -> Rational {
        &self.a * &self.b * &self.c
            - &self.a * self.c1.norm()
            - &self.b * self.c2.norm()
            - &self.c * self.c3.norm()
            + (&(&self.c1 * &self.c2) * &self.c3).trace()
    }

    /// Freudenthal adjugate; satisfies `adj(adj(B)) = det(B) * B`.
    pub fn adj(&self) -> Self {
        JordanElement {
            a: &self.b * &self.c - self.c1.norm(),
            b: &self.c * &self.a - self.c2.norm(),
            c: &self.a * &self.b - self.c3.norm(),
            c1: &(&self.c3.conj() * &self.c2.conj()) - &self.c1.scale(&self.a),
            c2: &(&self.c1.conj() * &self.c3.conj()) - &self.c2.scale(&self.b),
            c3: &(&self.c2.conj() * &self.c1.conj()) - &self.c3.scale(&self.c),
        }
    }

    /// Symmetric trace bilinear form; `(E, E) = 3` and diagonal elements pair
    /// by the dot product.
    pub fn pair(&self, other: &JordanElement) -> Rational {
        &self.a * &other.a
            + &self.b * &other.b
            + &self.c * &other.c
            + (&self.c1 * &other.c1.conj()).trace()
            + (&self.c2 * &other.c2.conj()).trace()
            + (&self.c3 * &other.c3.conj()).trace()
    }

    /// Freudenthal cross product `X x Y = (adj(X+Y) - adj(X) - adj(Y)) / 2`,
    /// normalized so that `B x B = adj(B)`.
    pub fn cross(&self, other: &JordanElement) -> JordanElement {
        let s = (self + other).adj();
        (&(&s - &self.adj()) - &other.adj()).scale(&rat(1, 2))
    }

    pub fn scale(&self, t: &Rational) -> Self {
        JordanElement {
            a: &self.a * t,
            b: &self.b * t,
            c: &self.c * t,
            c1: self.c1.scale(t),
            c2: self.c2.scale(t),
            c3: self.c3.scale(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero()
            && self.b.is_zero()
            && self.c.is_zero()
            && self.c1.is_zero()
            && self.c2.is_zero()
            && self.c3.is_zero()
    }

    /// Rank (0..3) through vanishing of `B`, `adj(B)`, `det(B)`, plus the
    /// positive-definiteness test by leading principal minors of the cubic
    /// form: `a > 0`, `ab - N(c3) > 0`, `det > 0`.
    pub fn rank_and_positivity(&self) -> (u8, bool) {
        let pd = self.a.is_positive()
            && (&self.a * &self.b - self.c3.norm()).is_positive()
            && self.det().is_positive();
        let rank = if self.is_zero() {
            0
        } else if self.adj().is_zero() {
            1
        } else if self.det().is_zero() {
            2
        } else {
            3
        };
        (rank, pd)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rank_and_positivity().1
    }

    /// Membership in the integral structure: integer diagonal, off-diagonal
    /// entries in the order.
    pub fn is_integral(&self, order: &OctonionOrder) -> bool {
        self.a.is_integer()
            && self.b.is_integer()
            && self.c.is_integer()
            && order.contains(&self.c1)
            && order.contains(&self.c2)
            && order.contains(&self.c3)
    }
}

impl Add for &JordanElement {
    type Output = JordanElement;
    fn add(self, rhs: &JordanElement) -> JordanElement {
        JordanElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            c1: &self.c1 + &rhs.c1,
            c2: &self.c2 + &rhs.c2,
            c3: &self.c3 + &rhs.c3,
        }
    }
}

impl Sub for &JordanElement {
    type Output = JordanElement;
    fn sub(self, rhs: &JordanElement) -> JordanElement {
        JordanElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            c1: &self.c1 - &rhs.c1,
            c2: &self.c2 - &rhs.c2,
            c3: &self.c3 - &rhs.c3,
        }
    }
}

impl Neg for &JordanElement {
    type Output = JordanElement;
    fn neg(self) -> JordanElement {
        self.scale(&rat(-1, 1))
    }
}

impl fmt::Debug for JordanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "J[diag {}, {}, {}; c1 {:?}; c2 {:?}; c3 {:?}]",
            self.a, self.b, self.c, self.c1, self.c2, self.c3
        )
    }
}

/// 2x2 hermitian slice `[[a, w], [conj(w), b]]`, the index of the lift's
/// Fourier-Jacobi blocks.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Jordan2 {
    pub a: Rational,
    pub b: Rational,
    pub w: Octonion,
}

impl Jordan2 {
    pub fn identity() -> Self {
        Jordan2 {
            a: rat(1, 1),
            b: rat(1, 1),
            w: Octonion::zero(),
        }
    }

    pub fn diag(a: Rational, b: Rational) -> Self {
        Jordan2 {
            a,
            b,
            w: Octonion::zero(),
        }
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.b - self.w.norm()
    }

    /// 2x2 trace pairing; `(E_2, E_2) = 2`.
    pub fn pair(&self, other: &Jordan2) -> Rational {
        &self.a * &other.a + &self.b * &other.b + (&self.w * &other.w.conj()).trace()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.det().is_positive()
    }

    /// Block embedding `X (+) r = [[X, 0], [0, r]]`.
    pub fn oplus(&self, r: &Rational) -> JordanElement {
        JordanElement {
            a: self.a.clone(),
            b: self.b.clone(),
            c: r.clone(),
            c1: Octonion::zero(),
            c2: Octonion::zero(),
            c3: self.w.clone(),
        }
    }
}

/// `sigma(x, y)`: the 2x2 hermitian matrix with `(i, j)` entry
/// `x_i conj(y_j) + y_i conj(x_j)`. The ordering is pinned by the determinant
/// invariance of [`translate_v1`], which is machine-checked in the test suite.
pub fn sigma(x: &[Octonion; 2], y: &[Octonion; 2]) -> Jordan2 {
    let entry = |i: usize, j: usize| &(&x[i] * &y[j].conj()) + &(&y[i] * &x[j].conj());
    Jordan2 {
        a: entry(0, 0).coords[0].clone(),
        b: entry(1, 1).coords[0].clone(),
        w: entry(0, 1),
    }
}

/// `sigma_S(x, y) = (S, sigma(x, y)) / 2`; symmetric and bilinear in `(x, y)`.
pub fn sigma_s(s: &Jordan2, x: &[Octonion; 2], y: &[Octonion; 2]) -> Rational {
    s.pair(&sigma(x, y)) * rat(1, 2)
}

/// Unipotent translation `v_1(x, 0, 0)` acting on `X (+) r`:
/// `R_{r,x} = [[X, Xx], [t(conj(x)) X, r + sigma_X(x, x)]]`.
/// Satisfies `det(R_{r,x}) = r * det(X)` identically.
pub fn translate_v1(x: &[Octonion; 2], block: &Jordan2, r: &Rational) -> JordanElement {
    // column Xx = (a x1 + w x2, conj(w) x1 + b x2)
    let top = &x[0].scale(&block.a) + &(&block.w * &x[1]);
    let bottom = &(&block.w.conj() * &x[0]) + &x[1].scale(&block.b);
    JordanElement {
        a: block.a.clone(),
        b: block.b.clone(),
        c: r + sigma_s(block, x, x),
        // (1,3) slot holds conj(c2) = top, (2,3) slot holds c1 = bottom
        c1: bottom,
        c2: top.conj(),
        c3: block.w.clone(),
    }
}

/// The same translation acting on a corner-zero element
/// `[[z, y], [t(conj(y)), 0]]`: the block picks up `sigma(x, y)` and the
/// column is unchanged. Together with [`translate_v1`] this realizes the
/// pairing adjointness `(m B, Z) = (B, m Z)` for the translation on all
/// implemented shapes (see the tests).
pub fn translate_v1_offblock(
    x: &[Octonion; 2],
    z: &Jordan2,
    y: &[Octonion; 2],
) -> JordanElement {
    let s = sigma(x, y);
    let moved = Jordan2 {
        a: &z.a + &s.a,
        b: &z.b + &s.b,
        w: &z.w + &s.w,
    };
    offblock(&moved, y)
}

/// Corner-zero embedding of `(z, y)` as `[[z, y], [t(conj(y)), 0]]`.
pub fn offblock(z: &Jordan2, y: &[Octonion; 2]) -> JordanElement {
    JordanElement {
        a: z.a.clone(),
        b: z.b.clone(),
        c: Rational::zero(),
        c1: y[1].clone(),
        c2: y[0].conj(),
        c3: z.w.clone(),
    }
}

/// `(X, xi, X', xi')` of the 56-dimensional module, as far as the implemented
/// actions need it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreudenthalQuadruple {
    pub x: JordanElement,
    pub xi: Rational,
    pub xp: JordanElement,
    pub xip: Rational,
}

impl FreudenthalQuadruple {
    pub fn new(x: JordanElement, xi: Rational, xp: JordanElement, xip: Rational) -> Self {
        FreudenthalQuadruple { x, xi, xp, xip }
    }
}

/// Error for the scaling action: the parameter must be invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroScaleError;

impl fmt::Display for ZeroScaleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h(a) requires a != 0")
    }
}

/// The one-parameter scaling `h(a)` on quadruples:
/// `X + 4(a^{-1}-1) e3 x (e3 x X) + (a-1)(e3, X) e3`, `a xi`,
/// `X' + (a^{-1}-1)(e3, X') e3 + 4(a-1) e3 x (e3 x X')`, `a^{-1} xi'`.
pub fn act_h(a: &Rational, q: &FreudenthalQuadruple) -> Result<FreudenthalQuadruple, ZeroScaleError> {
    if a.is_zero() {
        return Err(ZeroScaleError);
    }
    let e3 = JordanElement::e3();
    let ainv = a.recip();
    let one = Rational::one();

    let double_cross = |v: &JordanElement| e3.cross(&e3.cross(v));

    let x = {
        let t1 = double_cross(&q.x).scale(&((&ainv - &one) * rat(4, 1)));
        let t2 = e3.scale(&((a - &one) * e3.pair(&q.x)));
        &(&q.x + &t1) + &t2
    };
    let xp = {
        let t1 = e3.scale(&((&ainv - &one) * e3.pair(&q.xp)));
        let t2 = double_cross(&q.xp).scale(&((a - &one) * rat(4, 1)));
        &(&q.xp + &t1) + &t2
    };
    Ok(FreudenthalQuadruple {
        x,
        xi: &q.xi * a,
        xp,
        xip: &q.xip * &ainv,
    })
}

/// 16x16 Gram matrix of the quadratic form `x -> sigma_R(x, x)` on the pair
/// space, in the standard coordinate basis.
pub fn gram_sigma(r: &Jordan2) -> Vec<Vec<Rational>> {
    let mut basis: Vec<[Octonion; 2]> = Vec::with_capacity(16);
    for slot in 0..2 {
        for i in 0..8 {
            let mut x = [Octonion::zero(), Octonion::zero()];
            x[slot] = Octonion::basis(i);
            basis.push(x);
        }
    }
    (0..16)
        .map(|i| (0..16).map(|j| sigma_s(r, &basis[i], &basis[j])).collect())
        .collect()
}

/// Error for [`gram_sigma_det`]: the slice must be positive definite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPositiveError;

impl fmt::Display for NotPositiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slice is not positive definite")
    }
}

/// Determinant of the sigma Gram matrix; equals `det(R)^8` exactly, which is
/// the linear-algebra form of the 16-dimensional Gaussian integral.
pub fn gram_sigma_det(r: &Jordan2) -> Result<Rational, NotPositiveError> {
    if !r.is_positive_definite() {
        return Err(NotPositiveError);
    }
    Ok(det_n(&gram_sigma(r)))
}

/// All positive definite `B` in the integral structure with
/// `det(B) <= det_bound` and `trace(B) <= trace_bound`, in a deterministic
/// order with no duplicates.
pub fn enumerate_positive(
    det_bound: i64,
    trace_bound: i64,
    order: &OctonionOrder,
) -> Vec<JordanElement> {
    let mut out = Vec::new();
    if det_bound < 1 || trace_bound < 3 {
        return out;
    }
    // positive definiteness forces N(c3) < ab, N(c2) < ac, N(c1) < bc
    let mut max_prod = 1i64;
    for a in 1..=trace_bound - 2 {
        for b in 1..=trace_bound - 1 - a {
            let c_max = trace_bound - a - b;
            max_prod = max_prod.max(a * b).max(a * c_max).max(b * c_max);
        }
    }
    let shell = order.elements_with_norm_at_most(&rat(max_prod, 1));
    let norms: Vec<Rational> = shell.iter().map(|x| x.norm()).collect();
    let det_bound = rat(det_bound, 1);

    for a in 1..=trace_bound - 2 {
        for b in 1..=trace_bound - 1 - a {
            for c in 1..=trace_bound - a - b {
                for (i3, c3) in shell.iter().enumerate() {
                    if norms[i3] >= rat(a * b, 1) {
                        continue;
                    }
                    for (i2, c2) in shell.iter().enumerate() {
                        if norms[i2] >= rat(a * c, 1) {
                            continue;
                        }
                        for (i1, c1) in shell.iter().enumerate() {
                            if norms[i1] >= rat(b * c, 1) {
                                continue;
                            }
                            let cand = JordanElement {
                                a: rat(a, 1),
                                b: rat(b, 1),
                                c: rat(c, 1),
                                c1: c1.clone(),
                                c2: c2.clone(),
                                c3: c3.clone(),
                            };
                            let det = cand.det();
                            if det.is_positive()
                                && det <= det_bound
                                && cand.is_positive_definite()
                            {
                                out.push(cand);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
