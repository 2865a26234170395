//! Worked examples for the exact kernels.

use std::collections::BTreeMap;

use yslice_exact::dual::dual_apply;
use yslice_exact::{DualScalar, KScalar, MPoly, Rat, RatFn, TruncSeries};

fn k(n: i64) -> KScalar {
    KScalar::from_int(n)
}

#[test]
fn sqrt_symbol_squares_to_symmetrizer() {
    for d in 1..=3u64 {
        let s = KScalar::sqrt(d);
        assert_eq!(s.mul(&s), k(d as i64));
    }
}

#[test]
fn distinct_symbols_multiply_to_their_product() {
    assert_eq!(KScalar::sqrt(2).mul(&KScalar::sqrt(3)), KScalar::sqrt(6));
    assert!(!KScalar::sqrt(6).is_rational());
}

#[test]
fn conjugate_pair_with_d_two() {
    let s = KScalar::sqrt(2);
    assert_eq!(k(2).add(&s).mul(&k(2).sub(&s)), k(2));
}

#[test]
fn geometric_series_inverse_in_t_inverse() {
    // 1 − 3 t^{-1} with x = t^{-1}, known through x^4
    let f = TruncSeries::new("x", 0, 4, vec![(0, Rat::one()), (1, Rat::from_int(-3))], Rat::zero()).unwrap();
    let g = f.inv().unwrap();
    let expect: Vec<Rat> = [1, 3, 9, 27, 81].iter().map(|n| Rat::from_int(*n)).collect();
    for (j, e) in expect.iter().enumerate() {
        assert_eq!(&g.c(j as i64), e);
    }
    assert_eq!(g.hi(), 4);
}

#[test]
fn unit_series_inverse_is_itself() {
    let f = TruncSeries::new("x", 0, 2, vec![(0, Rat::one())], Rat::zero()).unwrap();
    let g = f.inv().unwrap();
    assert_eq!(g.c(0), Rat::one());
    assert_eq!(g.c(1), Rat::zero());
    assert_eq!(g.c(2), Rat::zero());
}

#[test]
fn monomial_inverse_window() {
    // x = t^{-1} known on [1, 3] inverts to t = x^{-1} known on [-1, 1]
    let f = TruncSeries::new("x", 1, 3, vec![(1, Rat::one())], Rat::zero()).unwrap();
    let g = f.inv().unwrap();
    assert_eq!((g.lo(), g.hi()), (-1, 1));
    assert_eq!(g.c(-1), Rat::one());
    assert!(g.coeff(2).is_err());
}

#[test]
fn ratfn_equality_examples() {
    let w = MPoly::var(0);
    let one = MPoly::one();
    let a = RatFn::new(w.pow(2).sub(&one), w.sub(&one)).unwrap();
    assert_eq!(a, RatFn::from_poly(w.add(&one)));
    let p = RatFn::new(one.clone(), w.sub(&one)).unwrap();
    let q = RatFn::new(one.clone(), w.sub(&MPoly::from_int(2))).unwrap();
    assert_ne!(p, q);
    let lhs = RatFn::from_poly(w.add(&one).pow(2).sub(&w.pow(2)));
    let rhs = RatFn::from_poly(w.scale_rat(&Rat::from_int(2)).add(&one));
    assert_eq!(lhs, rhs);
}

#[test]
fn dual_apply_examples() {
    let (b, c) = (MPoly::var(0), MPoly::var(1));
    let (bv, cv) = (k(3), k(7));
    // point (b, c + ε b)
    let mut pt = BTreeMap::new();
    pt.insert(0, DualScalar::constant(bv.clone()));
    pt.insert(1, DualScalar::new(cv.clone(), bv.clone()));
    let r = dual_apply(&c, &pt);
    assert_eq!((r.value, r.infinitesimal), (cv.clone(), bv.clone()));
    let r = dual_apply(&b.mul(&c), &pt);
    assert_eq!((r.value, r.infinitesimal), (bv.mul(&cv), bv.mul(&bv)));
    // f = b² at (b + ε·0, c)
    let r = dual_apply(&b.pow(2), &pt);
    assert_eq!((r.value, r.infinitesimal), (bv.mul(&bv), KScalar::zero()));
}
