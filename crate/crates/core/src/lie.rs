//! E7 root data in the 8-coordinate presentation, the weight multisets of the
//! 133-dimensional adjoint and 56-dimensional minuscule representations,
//! Euler-factor exponent multisets, and dominant-representative computations
//! for the nearly-equivalence (CAP) check.
//!
//! Coordinates: weights live in 8-tuples modulo the all-ones vector; the
//! bilinear form has `(e_i, e_i) = 7/8` and `(e_i, e_j) = -1/8`, which on
//! mean-zero representatives is the plain dot product. Everything here is
//! exact rational arithmetic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::octonion::invert_matrix;
use crate::scalar::{rat, Rational};

/// A weight in the 8-coordinate quotient presentation, canonicalized by
/// subtracting the coordinate mean.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightVector {
    coords: [Rational; 8],
}

impl WeightVector {
    pub fn new(raw: [Rational; 8]) -> Self {
        let mean: Rational = raw.iter().sum::<Rational>() / rat(8, 1);
        let coords = core::array::from_fn(|i| &raw[i] - &mean);
        WeightVector { coords }
    }

    pub fn zero() -> Self {
        WeightVector {
            coords: core::array::from_fn(|_| Rational::zero()),
        }
    }

    /// `e_k` (1-indexed), canonicalized.
    pub fn basis(k: usize) -> Self {
        let mut raw: [Rational; 8] = core::array::from_fn(|_| Rational::zero());
        raw[k - 1] = Rational::one();
        WeightVector::new(raw)
    }

    pub fn from_i64(raw: [i64; 8]) -> Self {
        WeightVector::new(core::array::from_fn(|i| rat(raw[i], 1)))
    }

    pub fn coords(&self) -> &[Rational; 8] {
        &self.coords
    }

    /// The quotient pairing; on canonical representatives this is the dot
    /// product, and `(e_i - e_j, sum c_k e_k) = c_i - c_j`.
    pub fn pairing(&self, other: &WeightVector) -> Rational {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        WeightVector {
            coords: core::array::from_fn(|i| &self.coords[i] + &other.coords[i]),
        }
    }

    pub fn sub(&self, other: &WeightVector) -> WeightVector {
        WeightVector {
            coords: core::array::from_fn(|i| &self.coords[i] - &other.coords[i]),
        }
    }

    pub fn scale(&self, t: &Rational) -> WeightVector {
        WeightVector {
            coords: core::array::from_fn(|i| &self.coords[i] * t),
        }
    }

    pub fn neg(&self) -> WeightVector {
        self.scale(&rat(-1, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// Errors from root-data construction and exponent extraction.
#[derive(Clone, Debug)]
pub enum LieError {
    /// A pairing `a*s_p + c` came out non-integral; carries the offending
    /// weight and the two pairings.
    NonIntegralExponent {
        weight: WeightVector,
        a: Rational,
        c: Rational,
    },
    /// The candidate shift does not make the multiset negation-symmetric.
    NoSymmetrizingShift,
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::NonIntegralExponent { weight, a, c } => write!(
                f,
                "pairing {}*s_p + {} at weight {:?} is not integral",
                a, c, weight
            ),
            LieError::NoSymmetrizingShift => {
                write!(f, "no uniform shift makes the multiset negation-symmetric")
            }
        }
    }
}

/// The E7 root system in the fixed coordinates, with the unique matching of
/// its Dynkin diagram onto the Bourbaki labeling.
pub struct RootSystem {
    simple: [WeightVector; 7],
    positive: Vec<WeightVector>,
    cartan: [[i64; 7]; 7],
    /// `bourbaki[i]` is the local simple-root index (0-based) of Bourbaki
    /// `beta_{i+1}`.
    bourbaki: [usize; 7],
    fundamental: [WeightVector; 7],
}

impl RootSystem {
    pub fn simple_roots(&self) -> &[WeightVector; 7] {
        &self.simple
    }

    pub fn positive_roots(&self) -> &[WeightVector] {
        &self.positive
    }

    pub fn all_roots(&self) -> Vec<WeightVector> {
        let mut out = self.positive.clone();
        out.extend(self.positive.iter().map(|r| r.neg()));
        out
    }

    pub fn cartan_matrix(&self) -> &[[i64; 7]; 7] {
        &self.cartan
    }

    /// Bourbaki `beta_k` (1-indexed) as a weight vector.
    pub fn beta(&self, k: usize) -> &WeightVector {
        &self.simple[self.bourbaki[k - 1]]
    }

    /// Fundamental weight dual to the local simple root `i` (0-based).
    pub fn fundamental(&self, i: usize) -> &WeightVector {
        &self.fundamental[i]
    }

    /// Repeated simple reflections at negative pairings; terminates because
    /// the Weyl group is finite.
    pub fn dominant_representative(&self, v: &WeightVector) -> WeightVector {
        let mut v = v.clone();
        'outer: loop {
            for s in &self.simple {
                let p = v.pairing(s);
                if p.is_negative() {
                    v = v.sub(&s.scale(&p));
                    continue 'outer;
                }
            }
            return v;
        }
    }

    /// Full Weyl orbit of a weight by reflection closure.
    pub fn weyl_orbit(&self, v: &WeightVector) -> Vec<WeightVector> {
        let start = v.clone();
        let mut seen: BTreeSet<WeightVector> = BTreeSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(w) = frontier.pop() {
            for s in &self.simple {
                let p = w.pairing(s);
                if p.is_zero() {
                    continue;
                }
                let next = w.sub(&s.scale(&p));
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Builds the root system: simple roots `alpha_i = e_i - e_{i+1}` (i = 1..6)
/// and `alpha_7 = e_5 + e_6 + e_7 + e_8`; positive roots `e_i - e_j`
/// (i < j <= 7), `-e_i + e_8`, and `e_i + e_j + e_k + e_8` (i < j < k <= 7).
/// Panics if any structural invariant fails (counts, lengths, diagram shape):
/// this is constant data, so failure is a build defect, not an input error.
pub fn build_e7() -> RootSystem {
    let e = WeightVector::basis;
    let simple: [WeightVector; 7] = [
        e(1).sub(&e(2)),
        e(2).sub(&e(3)),
        e(3).sub(&e(4)),
        e(4).sub(&e(5)),
        e(5).sub(&e(6)),
        e(6).sub(&e(7)),
        e(5).add(&e(6)).add(&e(7)).add(&e(8)),
    ];

    let mut positive = Vec::with_capacity(63);
    for i in 1..=7 {
        for j in i + 1..=7 {
            positive.push(e(i).sub(&e(j)));
        }
    }
    for i in 1..=7 {
        positive.push(e(8).sub(&e(i)));
    }
    for i in 1..=7 {
        for j in i + 1..=7 {
            for k in j + 1..=7 {
                positive.push(e(i).add(&e(j)).add(&e(k)).add(&e(8)));
            }
        }
    }
    assert_eq!(positive.len(), 63, "positive root count");
    for r in &positive {
        assert_eq!(r.pairing(r), rat(2, 1), "root length");
    }
    {
        let distinct: BTreeSet<_> = positive.iter().cloned().collect();
        assert_eq!(distinct.len(), 63, "duplicate positive root");
    }

    let cartan: [[i64; 7]; 7] = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let p = simple[i].pairing(&simple[j]);
            assert!(p.is_integer(), "Cartan entry must be integral");
            i64::try_from(&p.to_integer()).expect("small Cartan entry")
        })
    });

    // diagram matching: the E7 diagram has a unique degree-3 node with arms of
    // lengths 1, 2, 3, and no non-trivial automorphism, so the matching onto
    // the Bourbaki labels (branch beta_4; arms beta_2 | beta_3, beta_1 |
    // beta_5, beta_6, beta_7) is unique.
    let neighbors: Vec<Vec<usize>> = (0..7)
        .map(|i| (0..7).filter(|&j| j != i && cartan[i][j] == -1).collect())
        .collect();
    let branch = (0..7)
        .find(|&i| neighbors[i].len() == 3)
        .expect("branch node");
    let mut arms: Vec<Vec<usize>> = neighbors[branch]
        .iter()
        .map(|&n| {
            let mut arm = vec![n];
            let (mut prev, mut cur) = (branch, n);
            while let Some(&next) = neighbors[cur].iter().find(|&&x| x != prev) {
                prev = cur;
                cur = next;
                arm.push(cur);
            }
            arm
        })
        .collect();
    arms.sort_by_key(|a| a.len());
    assert_eq!(
        [arms[0].len(), arms[1].len(), arms[2].len()],
        [1, 2, 3],
        "arm lengths of the E7 diagram"
    );
    let mut bourbaki = [0usize; 7];
    bourbaki[4 - 1] = branch;
    bourbaki[2 - 1] = arms[0][0];
    bourbaki[3 - 1] = arms[1][0];
    bourbaki[1 - 1] = arms[1][1];
    bourbaki[5 - 1] = arms[2][0];
    bourbaki[6 - 1] = arms[2][1];
    bourbaki[7 - 1] = arms[2][2];

    // fundamental weights: solve (sum_k x_k alpha_k, alpha_j) = delta_ij
    let gram: Vec<Vec<Rational>> = (0..7)
        .map(|i| (0..7).map(|j| rat(cartan[i][j], 1)).collect())
        .collect();
    let inv = invert_matrix(&gram).expect("Cartan matrix invertible");
    let fundamental: [WeightVector; 7] = core::array::from_fn(|i| {
        let mut w = WeightVector::zero();
        for (k, s) in simple.iter().enumerate() {
            w = w.add(&s.scale(&inv[k][i]));
        }
        w
    });

    RootSystem {
        simple,
        positive,
        cartan,
        bourbaki,
        fundamental,
    }
}

/// Adjoint weight multiset: the 126 roots plus the zero weight with
/// multiplicity 7 (133 in total).
pub fn weights_adjoint(rs: &RootSystem) -> Vec<WeightVector> {
    let mut out = rs.all_roots();
    for _ in 0..7 {
        out.push(WeightVector::zero());
    }
    out
}

/// The 56-element orbit of the unique minuscule fundamental weight (all root
/// pairings in {-1, 0, 1}).
pub fn weights_56(rs: &RootSystem) -> Vec<WeightVector> {
    let all = rs.all_roots();
    let minuscule: Vec<usize> = (0..7)
        .filter(|&i| {
            all.iter().all(|r| {
                let p = rs.fundamental(i).pairing(r);
                p == rat(-1, 1) || p.is_zero() || p.is_one()
            })
        })
        .collect();
    assert_eq!(minuscule.len(), 1, "unique minuscule fundamental weight");
    let orbit = rs.weyl_orbit(rs.fundamental(minuscule[0]));
    assert_eq!(orbit.len(), 56, "minuscule orbit size");
    orbit
}

/// A weight depending affinely on the symbol `s_p`: `constant + s_p * linear`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicWeight {
    pub constant: WeightVector,
    pub linear: WeightVector,
}

impl SymbolicWeight {
    pub fn at(&self, s_p: &Rational) -> WeightVector {
        self.constant.add(&self.linear.scale(s_p))
    }

    /// Simple reflection applied to both parts (reflections are linear).
    pub fn reflect(&self, root: &WeightVector) -> SymbolicWeight {
        let rc = self.constant.pairing(root);
        let rl = self.linear.pairing(root);
        SymbolicWeight {
            constant: self.constant.sub(&root.scale(&rc)),
            linear: self.linear.sub(&root.scale(&rl)),
        }
    }
}

/// The unramified parameter of the lift at a good prime:
/// `2 s_p (e_1 + e_8) + 8e_2 + 7e_3 + 6e_4 + 5e_5 + 4e_6 + 3e_7 + 11e_8`.
pub fn satake_siegel() -> SymbolicWeight {
    SymbolicWeight {
        constant: WeightVector::from_i64([0, 8, 7, 6, 5, 4, 3, 11]),
        linear: WeightVector::from_i64([2, 0, 0, 0, 0, 0, 0, 2]),
    }
}

/// The induced-from-three-copies parameter:
/// `s_p (beta_2 + beta_5 + beta_7) + Lambda_0` with
/// `Lambda_0 = 10b_1 + 11b_2 + 19b_3 + 26b_4 + 22b_5 + 15b_6 + 8b_7` in
/// Bourbaki coordinates, materialized through the diagram matching.
pub fn cap_parameter(rs: &RootSystem) -> SymbolicWeight {
    let coeffs = [10i64, 11, 19, 26, 22, 15, 8];
    let mut lambda0 = WeightVector::zero();
    for (k, c) in coeffs.iter().enumerate() {
        lambda0 = lambda0.add(&rs.beta(k + 1).scale(&rat(*c, 1)));
    }
    let linear = rs.beta(2).add(rs.beta(5)).add(rs.beta(7));
    SymbolicWeight {
        constant: lambda0,
        linear,
    }
}

/// Multiset of factor exponents `(a, c)`, each encoding `(1 - alpha^a p^c p^{-s})`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EulerFactorSpec {
    counts: BTreeMap<(i64, i64), u32>,
}

impl EulerFactorSpec {
    pub fn insert(&mut self, a: i64, c: i64, mult: u32) {
        if mult > 0 {
            *self.counts.entry((a, c)).or_insert(0) += mult;
        }
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<(i64, i64), u32> {
        &self.counts
    }

    pub fn is_negation_symmetric(&self) -> bool {
        self.counts
            .iter()
            .all(|(&(a, c), &m)| self.counts.get(&(-a, -c)) == Some(&m))
    }
}

/// Raw pairings `(a, c)` of a symbolic weight against a weight multiset, with
/// `< lambda, w > = a s_p + c`.
pub fn pairing_multiset(
    weights: &[WeightVector],
    lambda: &SymbolicWeight,
) -> Vec<(Rational, Rational)> {
    weights
        .iter()
        .map(|w| (lambda.linear.pairing(w), lambda.constant.pairing(w)))
        .collect()
}

/// The exponent multiset of the local factor attached to `lambda` on a weight
/// multiset; errors if any pairing is non-integral.
pub fn euler_factor(
    weights: &[WeightVector],
    lambda: &SymbolicWeight,
) -> Result<EulerFactorSpec, LieError> {
    let mut spec = EulerFactorSpec::default();
    for w in weights {
        let a = lambda.linear.pairing(w);
        let c = lambda.constant.pairing(w);
        if !a.is_integer() || !c.is_integer() {
            return Err(LieError::NonIntegralExponent {
                weight: w.clone(),
                a,
                c,
            });
        }
        spec.insert(
            i64::try_from(&a.to_integer()).expect("small exponent"),
            i64::try_from(&c.to_integer()).expect("small shift"),
            1,
        );
    }
    Ok(spec)
}

/// Which reference multiset to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Standard,
    Adjoint,
}

/// Reference exponent multisets of the two L-function identities.
///
/// Standard (56): the symmetric-cube part `(+-3, 0), (+-1, 0)`, two more
/// copies of `(+-1, 0)`, copies of `(+-1, +-i)` with multiplicity 2 for
/// `i = 1..4` and 1 for `i = 5..8`.
///
/// Adjoint (133): zeta-type factors `(0, +-j)` whose multiplicity is the
/// number of E6 exponents (1, 4, 5, 7, 8, 11) that are `>= j`, minus the
/// symmetric-square allocation below at that shift (at `j = 0`: 7 zero
/// weights, 3 of them allocated); plus symmetric-square triples
/// `(2, j), (0, j), (-2, j)` with multiplicity 3 at `j = 0`, 2 at
/// `|j| = 1..4`, and 1 at `|j| = 5..8`. The resulting zeta multiplicities
/// are 4, 4, 3, 3, 3, 3, 2, 2, 1, 1, 1, 1 for `j = 0..11`.
pub fn expected_spec(which: Which) -> EulerFactorSpec {
    let mut spec = EulerFactorSpec::default();
    match which {
        Which::Standard => {
            for a in [3i64, -3] {
                spec.insert(a, 0, 1);
            }
            for a in [1i64, -1] {
                spec.insert(a, 0, 1 + 2);
            }
            for i in 1..=8i64 {
                let mult = if i <= 4 { 2 } else { 1 };
                for sign in [1i64, -1] {
                    for a in [1i64, -1] {
                        spec.insert(a, sign * i, mult);
                    }
                }
            }
        }
        Which::Adjoint => {
            let zeta_mult = [4u32, 4, 3, 3, 3, 3, 2, 2, 1, 1, 1, 1];
            for (j, &m) in zeta_mult.iter().enumerate() {
                spec.insert(0, j as i64, m);
                if j > 0 {
                    spec.insert(0, -(j as i64), m);
                }
            }
            let sym2 = |j: i64| -> u32 {
                match j.unsigned_abs() {
                    0 => 3,
                    1..=4 => 2,
                    5..=8 => 1,
                    _ => 0,
                }
            };
            for j in -8i64..=8 {
                let m = sym2(j);
                for a in [2i64, 0, -2] {
                    spec.insert(a, j, m);
                }
            }
        }
    }
    spec
}

/// Outcome of a multiset comparison: the symmetric difference, as
/// `(a, c, computed multiplicity, expected multiplicity)` rows.
#[derive(Clone, Debug, Default)]
pub struct CompareReport {
    pub diffs: Vec<(i64, i64, u32, u32)>,
}

impl CompareReport {
    pub fn equal(&self) -> bool {
        self.diffs.is_empty()
    }
}

pub fn compare(computed: &EulerFactorSpec, expected: &EulerFactorSpec) -> CompareReport {
    let mut keys: BTreeSet<(i64, i64)> = computed.counts().keys().cloned().collect();
    keys.extend(expected.counts().keys().cloned());
    let mut diffs = Vec::new();
    for k in keys {
        let a = computed.counts().get(&k).copied().unwrap_or(0);
        let b = expected.counts().get(&k).copied().unwrap_or(0);
        if a != b {
            diffs.push((k.0, k.1, a, b));
        }
    }
    CompareReport { diffs }
}

/// Comparison after solving for the unique uniform shift `delta` that makes
/// the computed multiset negation-symmetric (`delta = -mean(c)`), reported
/// alongside the result. This absorbs the similitude-normalization ambiguity
/// of the 56-dimensional identity.
#[derive(Clone, Debug)]
pub struct ShiftedCompareReport {
    pub central_shift: Rational,
    pub spec: EulerFactorSpec,
    pub report: CompareReport,
}

pub fn compare_with_central_shift(
    raw: &[(Rational, Rational)],
    expected: &EulerFactorSpec,
) -> Result<ShiftedCompareReport, LieError> {
    let n = raw.len() as i64;
    let mean: Rational = raw.iter().map(|(_, c)| c).sum::<Rational>() / rat(n, 1);
    let shift = -mean;
    let mut spec = EulerFactorSpec::default();
    for (a, c) in raw {
        let c2 = c + &shift;
        if !a.is_integer() || !c2.is_integer() {
            return Err(LieError::NonIntegralExponent {
                weight: WeightVector::zero(),
                a: a.clone(),
                c: c2,
            });
        }
        spec.insert(
            i64::try_from(&a.to_integer()).expect("small exponent"),
            i64::try_from(&c2.to_integer()).expect("small shift"),
            1,
        );
    }
    if !spec.is_negation_symmetric() {
        return Err(LieError::NoSymmetrizingShift);
    }
    let report = compare(&spec, expected);
    Ok(ShiftedCompareReport {
        central_shift: shift,
        spec,
        report,
    })
}

/// Weyl-orbit equality of two symbolic weights: equality of dominant
/// representatives at every sample value of `s_p`. Samples should be generic
/// rationals to avoid accidental coincidences.
pub fn weyl_orbit_equal(
    rs: &RootSystem,
    v1: &SymbolicWeight,
    v2: &SymbolicWeight,
    samples: &[Rational],
) -> bool {
    samples.iter().all(|s| {
        rs.dominant_representative(&v1.at(s)) == rs.dominant_representative(&v2.at(s))
    })
}

/// The standard generic sample set used by the acceptance checks.
pub fn default_samples() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 3), rat(7, 5)]
}
