//! Independent brute-force oracle for the bounded positive-definite
//! enumeration. The production path enumerates order elements through an
//! exact LDL factorization of the basis Gram matrix; the oracle instead walks
//! raw half-integer coordinate boxes and filters by order membership, so the
//! two routes share no lattice-enumeration code.

use e7lift_core::jordan::{enumerate_positive, JordanElement};
use e7lift_core::octonion::{Octonion, OctonionOrder};
use e7lift_core::scalar::{rat, Rational};
use num_traits::Signed;

/// All order elements with norm strictly below `bound`, by raw coordinate
/// recursion over (1/2)Z^8.
fn raw_shell(order: &OctonionOrder, bound: &Rational) -> Vec<Octonion> {
    let mut out = Vec::new();
    let mut coords: [Rational; 8] = core::array::from_fn(|_| rat(0, 1));
    fn rec(
        order: &OctonionOrder,
        bound: &Rational,
        coords: &mut [Rational; 8],
        i: usize,
        partial: Rational,
        out: &mut Vec<Octonion>,
    ) {
        if &partial >= bound {
            return;
        }
        if i == 8 {
            let x = Octonion {
                coords: coords.clone(),
            };
            if order.contains(&x) {
                out.push(x);
            }
            return;
        }
        // |c| < sqrt(bound) <= 2 for bound <= 4; step by 1/2
        let mut c = rat(-4, 2);
        while c <= rat(4, 2) {
            let used = &partial + &c * &c;
            if &used < bound {
                coords[i] = c.clone();
                rec(order, bound, coords, i + 1, used, out);
            }
            c += rat(1, 2);
        }
        coords[i] = rat(0, 1);
    }
    rec(order, bound, &mut coords, 0, rat(0, 1), &mut out);
    out
}

fn brute_force_count(det_bound: i64, trace_bound: i64, order: &OctonionOrder) -> usize {
    let mut count = 0usize;
    let mut shells: std::collections::BTreeMap<i64, Vec<Octonion>> = Default::default();
    let mut shell = |bound: i64, order: &OctonionOrder| -> Vec<Octonion> {
        shells
            .entry(bound)
            .or_insert_with(|| raw_shell(order, &rat(bound, 1)))
            .clone()
    };
    for a in 1..=4i64 {
        for b in 1..=4i64 {
            for c in 1..=4i64 {
                if a + b + c > trace_bound {
                    continue;
                }
                // positive definiteness itself caps each off-diagonal norm by
                // the corresponding diagonal product; scanning farther only
                // adds elements the final filter rejects
                let s3 = shell(a * b, order);
                let s2 = shell(a * c, order);
                let s1 = shell(b * c, order);
                for c3 in &s3 {
                    for c2 in &s2 {
                        for c1 in &s1 {
                            let cand = JordanElement {
                                a: rat(a, 1),
                                b: rat(b, 1),
                                c: rat(c, 1),
                                c1: c1.clone(),
                                c2: c2.clone(),
                                c3: c3.clone(),
                            };
                            let det = cand.det();
                            if cand.is_positive_definite()
                                && det.is_positive()
                                && det <= rat(det_bound, 1)
                            {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

#[test]
fn brute_force_matches_enumeration_and_frozen_count() {
    let order = OctonionOrder::maximal();
    let brute = brute_force_count(2, 4, &order);
    let rows = enumerate_positive(2, 4, &order);
    assert_eq!(brute, rows.len());
    // frozen value from the oracle run
    assert_eq!(rows.len(), FROZEN_COUNT_2_4);

    // determinism and membership of every row
    let again = enumerate_positive(2, 4, &order);
    assert_eq!(rows, again);
    for b in &rows {
        assert!(b.is_positive_definite());
        assert!(b.det() >= rat(1, 1) && b.det() <= rat(2, 1));
        assert!(b.trace() <= rat(4, 1));
        assert!(b.is_integral(&order));
    }
}

const FROZEN_COUNT_2_4: usize = 1444;

#[test]
fn tiny_bounds() {
    let order = OctonionOrder::maximal();
    let rows = enumerate_positive(1, 3, &order);
    assert_eq!(rows, vec![JordanElement::identity()]);
    assert!(enumerate_positive(0, 8, &order).is_empty());
}
