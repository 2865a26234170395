//! Ring axioms and structural invariants on random inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;
use yslice_exact::dual::dual_apply;
use yslice_exact::{DualScalar, KScalar, MPoly, Rat, RatFn, Ring, TruncSeries};

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rat::new(n, d))
}

fn kscalar() -> impl Strategy<Value = KScalar> {
    (rat(), rat(), rat()).prop_map(|(a, b, c)| {
        KScalar::from_rat(a).add(&KScalar::sqrt(2).scale(&b)).add(&KScalar::sqrt(3).scale(&c))
    })
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u32..3, 0u32..3, rat()), 0..5).prop_map(|terms| {
        let mut p = MPoly::zero();
        for (v, e, c) in terms {
            p = p.add(&MPoly::var(v).pow(e).scale_rat(&c));
        }
        p
    })
}

/// Denominators drawn from products of shifted differences, as produced by
/// difference-operator arithmetic.
fn denominator() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -2i64..=2), 0..3).prop_map(|fs| {
        let mut d = MPoly::one();
        for (a, b, k) in fs {
            let f = if a == b {
                MPoly::var(a).add(&MPoly::from_int(k + 3))
            } else {
                MPoly::var(a).sub(&MPoly::var(b)).add(&MPoly::from_int(k))
            };
            d = d.mul(&f);
        }
        d
    })
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (mpoly(), denominator()).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn series() -> impl Strategy<Value = TruncSeries<Rat>> {
    (-2i64..=2, 1i64..=5, prop::collection::vec(rat(), 1..6)).prop_map(|(lo, len, cs)| {
        let hi = lo + len;
        let coeffs = cs.into_iter().enumerate().map(|(k, c)| (lo + k as i64, c)).filter(|(k, _)| *k <= hi).collect();
        TruncSeries::new("x", lo, hi, coeffs, Rat::zero()).unwrap()
    })
}

fn unit_series() -> impl Strategy<Value = TruncSeries<Rat>> {
    (-2i64..=2, 1i64..=6, 1i64..=7, prop::collection::vec(rat(), 0..6)).prop_map(|(v, len, lead, rest)| {
        let mut coeffs = vec![(v, Rat::from_int(lead))];
        for (k, c) in rest.into_iter().enumerate() {
            if (k as i64) < len {
                coeffs.push((v + 1 + k as i64, c));
            }
        }
        TruncSeries::new("x", v, v + len, coeffs, Rat::zero()).unwrap()
    })
}

fn check_ring<R: Ring>(a: &R, b: &R, c: &R) {
    assert_eq!(a.times(b).times(c), a.times(&b.times(c)), "associativity");
    assert_eq!(a.times(&b.plus(c)), a.times(b).plus(&a.times(c)), "left distributivity");
    assert_eq!(a.plus(b).times(c), a.times(c).plus(&b.times(c)), "right distributivity");
    assert!(a.plus(&a.negate()).is_zero(), "additive inverse");
    assert_eq!(a.plus(b), b.plus(a), "additive commutativity");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rat_ring_axioms(a in rat(), b in rat(), c in rat()) {
        check_ring(&a, &b, &c);
    }

    #[test]
    fn kscalar_ring_axioms(a in kscalar(), b in kscalar(), c in kscalar()) {
        check_ring(&a, &b, &c);
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn mpoly_ring_axioms(a in mpoly(), b in mpoly(), c in mpoly()) {
        check_ring(&a, &b, &c);
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        }
    }

    #[test]
    fn ratfn_ring_axioms(a in ratfn(), b in ratfn(), c in ratfn()) {
        check_ring(&a, &b, &c);
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), RatFn::one());
        }
    }

    #[test]
    fn ratfn_equality_is_an_equivalence(a in ratfn(), k in mpoly(), d in denominator()) {
        // b and c are re-representations of a with extra common factors
        let kk = if k.is_zero() { MPoly::one() } else { k };
        let b = RatFn::new(a.num().mul(&kk), a.den().mul(&kk)).unwrap();
        let c = RatFn::new(b.num().mul(&d), b.den().mul(&d)).unwrap();
        prop_assert!(a == a);
        prop_assert_eq!(a == b, b == a);
        prop_assert!(a == b && b == c && a == c);
    }

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        check_ring(&a, &b, &c);
    }

    #[test]
    fn series_inverse_is_exact_on_window(f in unit_series()) {
        let g = f.inv().unwrap();
        let one = TruncSeries::constant("x", Rat::one());
        let p = f.mul(&g);
        prop_assert_eq!(p.lo(), 0);
        prop_assert!(p.agrees_with(&one));
    }

    #[test]
    fn dual_numbers_drop_epsilon_squared(a in kscalar(), b in kscalar(), c in kscalar(), d in kscalar()) {
        let x = DualScalar::new(a.clone(), b.clone());
        let y = DualScalar::new(c.clone(), d.clone());
        let p = x.mul(&y);
        prop_assert_eq!(p.value, a.mul(&c));
        prop_assert_eq!(p.infinitesimal, a.mul(&d).add(&b.mul(&c)));
    }

    #[test]
    fn dual_apply_is_a_derivation(p in mpoly(), q in mpoly(), x in rat(), y in rat(), dx in rat()) {
        let mut pt = BTreeMap::new();
        pt.insert(0, DualScalar::new(KScalar::from_rat(x), KScalar::from_rat(dx)));
        pt.insert(1, DualScalar::constant(KScalar::from_rat(y.clone())));
        pt.insert(2, DualScalar::constant(KScalar::from_rat(y)));
        let lhs = dual_apply(&p.mul(&q), &pt);
        let (vp, vq) = (dual_apply(&p, &pt), dual_apply(&q, &pt));
        prop_assert_eq!(lhs, vp.mul(&vq));
    }
}
