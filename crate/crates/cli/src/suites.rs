//! Seeded verification suites. Each suite runs a batch of exact identities
//! and reports an itemized outcome; the acceptance tests drive the same
//! functions at their full sample counts.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use e7lift_core::coeff::{CoeffContext, WhittakerVector};
use e7lift_core::jordan::{
    act_h, enumerate_positive, gram_sigma_det, translate_v1, FreudenthalQuadruple, Jordan2,
    JordanElement,
};
use e7lift_core::lie::{
    build_e7, cap_parameter, compare, compare_with_central_shift, default_samples, euler_factor,
    expected_spec, pairing_multiset, satake_siegel, weights_56, weights_adjoint, weyl_orbit_equal,
    Which,
};
use e7lift_core::newform::{factorize, NewformRecord};
use e7lift_core::octonion::{Octonion, OctonionOrder};
use e7lift_core::scalar::{rat, Int, Rational, Scalar};
use e7lift_core::siegel::{validate, CheckName, SiegelPolynomial, SiegelProvider};
use num_traits::One;

/// Outcome of one suite, in the shape the CLI report serializes.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub check: String,
    pub passed: bool,
    pub checks_run: usize,
    pub diff: Vec<String>,
    pub central_shift: Option<String>,
    pub details: Vec<String>,
}

impl SuiteOutcome {
    fn new(check: &str) -> Self {
        SuiteOutcome {
            check: check.into(),
            passed: true,
            checks_run: 0,
            diff: Vec::new(),
            central_shift: None,
            details: Vec::new(),
        }
    }

    fn assert_eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        self.checks_run += 1;
        if got != want {
            self.passed = false;
            if self.diff.len() < 32 {
                self.diff
                    .push(format!("{}: got {:?}, want {:?}", what, got, want));
            }
        }
    }

    fn assert_true(&mut self, what: &str, ok: bool) {
        self.checks_run += 1;
        if !ok {
            self.passed = false;
            if self.diff.len() < 32 {
                self.diff.push(what.to_string());
            }
        }
    }
}

fn random_order_element(rng: &mut StdRng, order: &OctonionOrder) -> Octonion {
    let basis = order.basis();
    let mut x = Octonion::zero();
    for b in basis.iter() {
        let c = rng.random_range(-3..=3);
        if c != 0 {
            x = &x + &b.scale(&rat(c, 1));
        }
    }
    x
}

fn random_integral_jordan(rng: &mut StdRng, order: &OctonionOrder) -> JordanElement {
    JordanElement {
        a: rat(rng.random_range(-4..=4), 1),
        b: rat(rng.random_range(-4..=4), 1),
        c: rat(rng.random_range(-4..=4), 1),
        c1: random_order_element(rng, order),
        c2: random_order_element(rng, order),
        c3: random_order_element(rng, order),
    }
}

/// Jordan/octonion identity suite: per round it checks the composition law,
/// both alternative laws, order closure, the three adjugate identities, the
/// translation determinant invariance, and the scaling-action group law plus
/// identity (10 exact checks per round), and finishes with the unit count.
pub fn jordan_suite(seed: u64, samples: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("jordan");
    let mut rng = StdRng::seed_from_u64(seed);
    let order = OctonionOrder::maximal();
    let rounds = samples.div_ceil(10);
    for _ in 0..rounds {
        let x = random_order_element(&mut rng, &order);
        let y = random_order_element(&mut rng, &order);
        out.assert_eq("composition N(xy)=N(x)N(y)", (&x * &y).norm(), x.norm() * y.norm());
        out.assert_eq("left alternative", &x * &(&x * &y), &(&x * &x) * &y);
        out.assert_eq("right alternative", &(&y * &x) * &x, &y * &(&x * &x));
        out.assert_true("order closed under product", order.contains(&(&x * &y)));

        let b = random_integral_jordan(&mut rng, &order);
        let adj = b.adj();
        let det = b.det();
        out.assert_eq("adj(adj B) = det B * B", adj.adj(), b.scale(&det));
        out.assert_eq("(B, adj B) = 3 det B", b.pair(&adj), rat(3, 1) * &det);
        out.assert_eq("det(adj B) = det(B)^2", adj.det(), &det * &det);

        let block = Jordan2 {
            a: rat(rng.random_range(-4..=4), 1),
            b: rat(rng.random_range(-4..=4), 1),
            w: random_order_element(&mut rng, &order),
        };
        let pair = [
            random_order_element(&mut rng, &order),
            random_order_element(&mut rng, &order),
        ];
        let r = rat(rng.random_range(-4..=4), 1);
        out.assert_eq(
            "det(R_{r,x}) = r det(X)",
            translate_v1(&pair, &block, &r).det(),
            &r * block.det(),
        );

        let q = FreudenthalQuadruple::new(
            random_integral_jordan(&mut rng, &order),
            rat(rng.random_range(-4..=4), 1),
            random_integral_jordan(&mut rng, &order),
            rat(rng.random_range(-4..=4), 1),
        );
        let a = rat(rng.random_range(1..=6), rng.random_range(1..=3));
        let bq = rat(-rng.random_range(1..=6), rng.random_range(1..=3));
        let ab = &a * &bq;
        out.assert_eq(
            "h(a)h(b) = h(ab)",
            act_h(&a, &act_h(&bq, &q).unwrap()).unwrap(),
            act_h(&ab, &q).unwrap(),
        );
        out.assert_eq("h(1) = id", act_h(&rat(1, 1), &q).unwrap(), q);
    }
    let units = order.units().len();
    out.assert_eq("unit count", units, 240);
    out.details.push(format!("rounds: {}", rounds));
    out
}

/// Coefficient suite on a record: the bound `|c_n| <= m^{-(l-1)/2}` for all
/// `n <= bound_n`, the exact square-class relation on random pairs, and the
/// Hecke reconstruction identity on square-free `n <= recon_n` coprime to the
/// level.
pub fn coeffs_suite(
    rec: &NewformRecord,
    seed: u64,
    bound_n: u64,
    recon_n: u64,
) -> Result<SuiteOutcome, String> {
    let mut out = SuiteOutcome::new("coeffs");
    let mut rng = StdRng::seed_from_u64(seed);
    let ctx = CoeffContext::new(rec.clone(), bound_n.max(recon_n))
        .map_err(|e| format!("context: {}", e))?;

    for n in 1..=bound_n {
        match ctx.bound_holds(&Rational::from_integer(Int::from(n))) {
            Ok(ok) => out.assert_true(&format!("coefficient bound at n = {}", n), ok),
            Err(e) => {
                out.passed = false;
                out.diff.push(format!("bound at n = {}: {}", n, e));
                out.checks_run += 1;
            }
        }
    }

    for _ in 0..50 {
        let a = rng.random_range(2..=30i64);
        let r = rng.random_range(1..=50i64);
        let lhs = ctx
            .c_value(&Rational::from_integer(Int::from(a * a * r)))
            .map_err(|e| e.to_string())?;
        let rhs = &ctx.mu_f(&rat(a, 1)).map_err(|e| e.to_string())?.inv()
            * &ctx.c_value(&rat(r, 1)).map_err(|e| e.to_string())?;
        out.assert_true(&format!("square-class at a = {}, r = {}", a, r), lhs == rhs);
    }

    let weight = rec.weight as i64;
    for n in 1..=recon_n {
        if n % rec.level == 0 && rec.level > 1 {
            continue;
        }
        let (_, m) = e7lift_core::newform::square_class(&rat(n as i64, 1));
        if m != Int::from(n) {
            continue; // not square-free
        }
        let mut lhs = Scalar::from_rational(Rational::from_integer(Int::from(n).pow(weight as u32)));
        lhs *= &ctx.c_value(&rat(n as i64, 1)).map_err(|e| e.to_string())?;
        let mut covered = true;
        for (p, _) in factorize(n) {
            match ctx.sl2_whittaker_value(p, WhittakerVector::Newform) {
                Ok(w) => lhs *= &w,
                Err(_) => {
                    covered = false;
                    break;
                }
            }
        }
        if !covered {
            continue;
        }
        let rhs = Scalar::from_rational(
            rec.coefficient(n).map_err(|e| e.to_string())?.clone(),
        );
        out.assert_true(&format!("reconstruction at n = {}", n), lhs == rhs);
    }
    Ok(out)
}

/// Validator behavior (accept `f = 1` at `d = 0`, reject synthetic violations
/// with the correctly named check) and re-validation of every loaded entry.
pub fn siegel_suite(provider: &SiegelProvider) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("siegel");

    out.assert_true(
        "f = 1 accepted at d = 0",
        validate(&SiegelPolynomial::constant_one(7), 0).passed(),
    );

    let non_monic = SiegelPolynomial {
        p: 3,
        d: 1,
        coeffs: vec![Int::from(1), Int::from(2)],
    };
    out.assert_true(
        "non-monic rejected as monic-check",
        validate(&non_monic, 1).failed_names().contains(&CheckName::Monic),
    );

    let wrong_degree = SiegelPolynomial::constant_one(3);
    out.assert_true(
        "degree mismatch rejected as degree-check",
        validate(&wrong_degree, 2)
            .failed_names()
            .contains(&CheckName::DegreeMatchesValuation),
    );

    let oversized = SiegelPolynomial {
        p: 3,
        d: 1,
        coeffs: vec![Int::from(3u64).pow(12), Int::from(1)],
    };
    out.assert_true(
        "coefficient bound rejected as bound-check",
        validate(&oversized, 1)
            .failed_names()
            .contains(&CheckName::CoefficientBound),
    );

    for ((p, key), entry) in provider.iter() {
        let rep = validate(&entry.poly, key.degree());
        out.assert_true(
            &format!("stored entry (p = {}, {}) revalidates", p, key),
            rep.passed(),
        );
        // gamma(s) * b(B, s) = f(p^{9-s}) at a few sample points
        let series = e7lift_core::siegel::siegel_series(&entry.poly);
        let gamma = e7lift_core::siegel::gamma_p(*p);
        for t in [rat(1, 7), rat(3, 11)] {
            let lhs = gamma.eval(&t).unwrap() * series.eval(&t).unwrap();
            let p9 = Rational::from_integer(Int::from(*p).pow(9));
            let rhs = entry.poly.eval_rational(&(&t * &p9));
            out.assert_true(
                &format!("gamma*b = f for (p = {}, {})", p, key),
                lhs == rhs,
            );
        }
    }
    out.details.push(format!("table entries: {}", provider.len()));
    out
}

/// Degree-133 identity: computed exponent multiset versus the reference.
pub fn lfactor_adjoint_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("adjoint");
    let rs = build_e7();
    let weights = weights_adjoint(&rs);
    out.assert_eq("weight count", weights.len(), 133);
    match euler_factor(&weights, &satake_siegel()) {
        Ok(spec) => {
            out.assert_eq("multiset size", spec.total(), 133);
            let report = compare(&spec, &expected_spec(Which::Adjoint));
            out.checks_run += 1;
            if !report.equal() {
                out.passed = false;
                for (a, c, got, want) in &report.diffs {
                    out.diff
                        .push(format!("(a={}, c={}): got {}, want {}", a, c, got, want));
                }
            }
        }
        Err(e) => {
            out.passed = false;
            out.diff.push(e.to_string());
        }
    }
    out
}

/// Degree-56 identity, up to the uniform central shift (reported).
pub fn lfactor_standard_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("standard");
    let rs = build_e7();
    let weights = weights_56(&rs);
    out.assert_eq("orbit size", weights.len(), 56);
    let raw = pairing_multiset(&weights, &satake_siegel());
    match compare_with_central_shift(&raw, &expected_spec(Which::Standard)) {
        Ok(res) => {
            out.central_shift = Some(res.central_shift.to_string());
            out.checks_run += 1;
            if !res.report.equal() {
                out.passed = false;
                for (a, c, got, want) in &res.report.diffs {
                    out.diff
                        .push(format!("(a={}, c={}): got {}, want {}", a, c, got, want));
                }
            }
        }
        Err(e) => {
            out.passed = false;
            out.diff.push(e.to_string());
        }
    }
    out
}

/// Nearly-equivalent parameter check: dominant representatives of the two
/// parameters agree at every sample; both representatives are reported.
pub fn cap_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("cap");
    let rs = build_e7();
    let sat = satake_siegel();
    let cap = cap_parameter(&rs);
    for s in default_samples() {
        let d1 = rs.dominant_representative(&sat.at(&s));
        let d2 = rs.dominant_representative(&cap.at(&s));
        out.details
            .push(format!("s_p = {}: {:?} | {:?}", s, d1, d2));
        out.assert_true(&format!("dominant representatives agree at s_p = {}", s), d1 == d2);
    }
    out.assert_true(
        "orbit equality over all samples",
        weyl_orbit_equal(&rs, &sat, &cap, &default_samples()),
    );
    out
}

/// Root-data counts: 63 positive roots, 126 roots, 56-orbit, 133 = 126 + 7.
pub fn root_counts_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("root-counts");
    let rs = build_e7();
    out.assert_eq("positive roots", rs.positive_roots().len(), 63);
    out.assert_eq("all roots", rs.all_roots().len(), 126);
    out.assert_eq("56-orbit", weights_56(&rs).len(), 56);
    out.assert_eq("adjoint weights", weights_adjoint(&rs).len(), 126 + 7);
    out
}

/// Gram-determinant form of the Gaussian integral plus the constants table
/// consistency.
pub fn gaussian_suite(seed: u64, samples: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("gaussian");
    let mut rng = StdRng::seed_from_u64(seed);
    let order = OctonionOrder::maximal();
    let units = order.units();
    let mut done = 0usize;
    while done < samples {
        // random positive definite rational slice: unit-scaled octonion off
        // the diagonal keeps determinants small and exact
        let w = units[rng.random_range(0..units.len())].scale(&rat(
            rng.random_range(0..=2),
            rng.random_range(1..=2),
        ));
        let r = Jordan2 {
            a: rat(rng.random_range(1..=6), 1),
            b: rat(rng.random_range(1..=6), 1),
            w,
        };
        if !r.is_positive_definite() {
            continue;
        }
        let det = r.det();
        let expect = (0..8).fold(Rational::one(), |acc, _| acc * &det);
        match gram_sigma_det(&r) {
            Ok(got) => out.assert_true(
                &format!("gram det = det^8 for det = {}", det),
                got == expect,
            ),
            Err(e) => {
                out.passed = false;
                out.diff.push(format!("{}", e));
                out.checks_run += 1;
            }
        }
        done += 1;
    }
    // constants: C_3 = C_1 det^{9/2}, and the competing C(R) values flagged
    // exactly when det != 1
    for _ in 0..20 {
        let s = Jordan2::diag(
            rat(rng.random_range(1..=6), 1),
            rat(rng.random_range(1..=6), 1),
        );
        let k = rng.random_range(2..=16i64);
        match e7lift_core::archimedean::constants_report(&s, k) {
            Ok(rep) => {
                out.assert_true(
                    &format!("C3 = C1 det^{{9/2}} for det = {}", rep.det),
                    rep.consistency_ok,
                );
                let expect_flag = !rep.det.is_one();
                out.assert_eq(
                    &format!("C(R) discrepancy flag for det = {}", rep.det),
                    rep.cr_discrepancy,
                    expect_flag,
                );
            }
            Err(e) => {
                out.passed = false;
                out.diff.push(format!("{}", e));
                out.checks_run += 1;
            }
        }
    }
    out
}

/// End-to-end check used by the acceptance gate: the identity element's
/// assembled coefficient and randomized translation equivariance.
pub fn lift_suite(
    rec: &NewformRecord,
    provider: &SiegelProvider,
    seed: u64,
    translations: usize,
) -> Result<SuiteOutcome, String> {
    let mut out = SuiteOutcome::new("lift");
    let mut rng = StdRng::seed_from_u64(seed);
    let order = OctonionOrder::maximal();
    let ctx = CoeffContext::new(rec.clone(), 100).map_err(|e| e.to_string())?;

    let rows = e7lift_core::lift::lift_table(1, 3, &ctx, provider, &order);
    out.assert_eq("bounds (1,3) row count", rows.len(), 1);
    if let Some(row) = rows.first() {
        out.assert_true("entry is the identity", row.b == JordanElement::identity());
        match &row.result {
            Ok(c) => out.assert_true("identity coefficient = 1", c.value == Scalar::one()),
            Err(e) => {
                out.passed = false;
                out.diff.push(format!("identity row failed: {}", e));
                out.checks_run += 1;
            }
        }
    }

    let units = order.units();
    for i in 0..translations {
        let x = [
            units[rng.random_range(0..units.len())].clone(),
            units[rng.random_range(0..units.len())].clone(),
        ];
        let r = rat(rng.random_range(1..=3), 1);
        match e7lift_core::lift::equivariance_check(&Jordan2::identity(), &r, &x, &ctx, provider) {
            Ok(rep) => out.assert_true(
                &format!("equivariance sample {}", i),
                rep.equal,
            ),
            Err(e) => {
                out.passed = false;
                out.diff.push(format!("equivariance sample {}: {}", i, e));
                out.checks_run += 1;
            }
        }
    }
    Ok(out)
}

/// Positive-definite enumeration sanity inside the verify surface.
pub fn enumeration_spot_checks(out: &mut SuiteOutcome) {
    let order = OctonionOrder::maximal();
    let rows = enumerate_positive(1, 3, &order);
    out.assert_eq("enumerate (1,3)", rows.len(), 1);
    out.assert_true("enumerate (0,n) empty", enumerate_positive(0, 6, &order).is_empty());
}
