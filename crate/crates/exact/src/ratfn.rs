//! Multivariate rational functions with factored denominators.
//!
//! A `RatFn` is `num / Π f_k^{e_k}` where every denominator factor `f_k` is a
//! monic polynomial (leading coefficient one in lex order).  No gcd is ever
//! computed.  Sums use the factor-wise least common multiple, and after each
//! operation the numerator is tried for exact division by each denominator
//! factor, which cancels the poles that disappear.  Equality and zero tests
//! are exact: a value is zero iff its numerator is the zero polynomial.

use std::collections::BTreeMap;
use std::fmt;

use crate::kscalar::KScalar;
use crate::mpoly::MPoly;
use crate::rat::Rat;
use crate::ring::{Field, Ring};

/// `num / den` with `den` stored as a product of monic factors.
#[derive(Clone, Default)]
pub struct RatFn {
    num: MPoly,
    den: BTreeMap<MPoly, u32>,
}

fn factor_power_product(fs: &BTreeMap<MPoly, u32>) -> MPoly {
    let mut acc = MPoly::one();
    for (f, e) in fs {
        acc = acc.mul(&f.pow(*e));
    }
    acc
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: MPoly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RatFn::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFn { num: p, den: BTreeMap::new() }
    }

    pub fn from_rat(r: Rat) -> Self {
        RatFn::from_poly(MPoly::from_rat(r))
    }

    pub fn from_kscalar(c: KScalar) -> Self {
        RatFn::from_poly(MPoly::constant(c))
    }

    pub fn var(v: u32) -> Self {
        RatFn::from_poly(MPoly::var(v))
    }

    /// `num / den` from two polynomials; `None` if `den` is zero.
    pub fn new(num: MPoly, den: MPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (monic, lc) = den.monic();
        let lc_inv = lc.try_inv()?;
        let mut r = RatFn { num: num.scale(&lc_inv), den: BTreeMap::new() };
        if !monic.is_constant() {
            r.den.insert(monic, 1);
        }
        r.cancel();
        Some(r)
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn den(&self) -> MPoly {
        factor_power_product(&self.den)
    }

    /// The stored denominator factors with multiplicities.
    pub fn den_factors(&self) -> impl Iterator<Item = (&MPoly, u32)> {
        self.den.iter().map(|(f, e)| (f, *e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The value as a polynomial if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// The value as a scalar if it is constant.
    pub fn as_kscalar(&self) -> Option<KScalar> {
        if self.den.is_empty() && self.num.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    /// True if no irrational radicand appears in the numerator.
    pub fn is_rational(&self) -> bool {
        self.num.is_rational()
    }

    /// Divides out denominator factors that divide the numerator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        if self.num.is_constant() {
            return;
        }
        let keys: Vec<MPoly> = self.den.keys().cloned().collect();
        for f in keys {
            loop {
                let e = self.den[&f];
                if e == 0 {
                    break;
                }
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        if e == 1 {
                            self.den.remove(&f);
                            break;
                        }
                        self.den.insert(f.clone(), e - 1);
                    }
                    None => break,
                }
            }
        }
    }

    fn with_den(num: MPoly, den: BTreeMap<MPoly, u32>) -> Self {
        let mut r = RatFn { num, den };
        r.cancel();
        r
    }

    /// Common denominator: returns (lcm factors, cofactor for self, cofactor for rhs).
    fn lcm_cofactors(&self, rhs: &RatFn) -> (BTreeMap<MPoly, u32>, MPoly, MPoly) {
        let mut lcm = self.den.clone();
        for (f, e) in &rhs.den {
            let entry = lcm.entry(f.clone()).or_insert(0);
            *entry = (*entry).max(*e);
        }
        let mut ca = BTreeMap::new();
        let mut cb = BTreeMap::new();
        for (f, e) in &lcm {
            let ea = self.den.get(f).copied().unwrap_or(0);
            let eb = rhs.den.get(f).copied().unwrap_or(0);
            if e > &ea {
                ca.insert(f.clone(), e - ea);
            }
            if e > &eb {
                cb.insert(f.clone(), e - eb);
            }
        }
        (lcm, factor_power_product(&ca), factor_power_product(&cb))
    }

    pub fn add(&self, rhs: &RatFn) -> RatFn {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return RatFn::with_den(self.num.add(&rhs.num), self.den.clone());
        }
        let (lcm, ca, cb) = self.lcm_cofactors(rhs);
        RatFn::with_den(self.num.mul(&ca).add(&rhs.num.mul(&cb)), lcm)
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if let Some(c) = self.as_kscalar() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_kscalar() {
            return self.scale(&c);
        }
        let num = self.num.mul(&rhs.num);
        if self.den.is_empty() && rhs.den.is_empty() {
            return RatFn { num, den: BTreeMap::new() };
        }
        let mut den = self.den.clone();
        for (f, e) in &rhs.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RatFn::with_den(num, den)
    }

    pub fn scale(&self, c: &KScalar) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn scale_rat(&self, r: &Rat) -> RatFn {
        if r.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale_rat(r), den: self.den.clone() }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<RatFn> {
        if self.num.is_zero() {
            return None;
        }
        let (monic, lc) = self.num.monic();
        let lc_inv = lc.try_inv()?;
        let num = factor_power_product(&self.den).scale(&lc_inv);
        let mut den = BTreeMap::new();
        if !monic.is_constant() {
            den.insert(monic, 1);
        }
        Some(RatFn::with_den(num, den))
    }

    pub fn div(&self, rhs: &RatFn) -> Option<RatFn> {
        Some(self.mul(&rhs.inv()?))
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn pow(&self, k: i32) -> Option<RatFn> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let num = self.num.pow(k as u32);
        let den = self.den.iter().map(|(f, e)| (f.clone(), e * k as u32)).filter(|(_, e)| *e > 0).collect();
        Some(RatFn { num, den })
    }

    /// Substitutes `x_v ↦ x_v + c_v`; monic factors stay monic under shifts.
    pub fn shift_vars(&self, shifts: &[(u32, Rat)]) -> RatFn {
        if shifts.iter().all(|(_, c)| c.is_zero()) {
            return self.clone();
        }
        let num = self.num.shift_vars(shifts);
        let mut den = BTreeMap::new();
        for (f, e) in &self.den {
            *den.entry(f.shift_vars(shifts)).or_insert(0) += e;
        }
        RatFn { num, den }
    }

    /// Evaluates the listed variables at rationals; `None` on a pole.
    pub fn eval_partial(&self, vals: &BTreeMap<u32, Rat>) -> Option<RatFn> {
        let num = self.num.eval_partial(vals);
        let den = factor_power_product(&self.den).eval_partial(vals);
        RatFn::new(num, den)
    }

    /// Exact equality by cross-multiplication over the common denominator.
    pub fn equals(&self, rhs: &RatFn) -> bool {
        if self.den == rhs.den {
            return self.num == rhs.num;
        }
        let (_, ca, cb) = self.lcm_cofactors(rhs);
        self.num.mul(&ca) == rhs.num.mul(&cb)
    }

    pub fn fmt_with(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.den.is_empty() {
            return self.num.fmt_with(name);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, e)| {
                let s = format!("({})", f.fmt_with(name));
                if *e == 1 {
                    s
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        format!("({})/({})", self.num.fmt_with(name), den.join("*"))
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> Self {
        RatFn::from_poly(p)
    }
}

impl Ring for RatFn {
    fn zero_like(&self) -> Self {
        RatFn::zero()
    }
    fn one_like(&self) -> Self {
        RatFn::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        RatFn::from_rat(r.clone())
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn scaled(&self, r: &Rat) -> Self {
        self.scale_rat(r)
    }
}

impl Field for RatFn {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> MPoly {
        MPoly::var(0)
    }

    fn c(n: i64) -> MPoly {
        MPoly::from_int(n)
    }

    #[test]
    fn cross_multiplication_equality() {
        let a = RatFn::new(w().pow(2).sub(&c(1)), w().sub(&c(1))).unwrap();
        let b = RatFn::from_poly(w().add(&c(1)));
        assert_eq!(a, b);
        // cancellation happened on construction
        assert!(a.is_polynomial());
        let p = RatFn::new(c(1), w().sub(&c(1))).unwrap();
        let q = RatFn::new(c(1), w().sub(&c(2))).unwrap();
        assert_ne!(p, q);
    }

    #[test]
    fn shifted_square_difference() {
        // ((w+1)^2 − w^2) = 2w + 1
        let d = w().add(&c(1)).pow(2).sub(&w().pow(2));
        assert_eq!(RatFn::from_poly(d), RatFn::from_poly(w().scale_rat(&Rat::from_int(2)).add(&c(1))));
    }

    #[test]
    fn partial_fractions_cancel() {
        // 1/(w-1) - 1/w = 1/(w(w-1))
        let a = RatFn::new(c(1), w().sub(&c(1))).unwrap();
        let b = RatFn::new(c(1), w()).unwrap();
        let lhs = a.sub(&b);
        let rhs = RatFn::new(c(1), w().mul(&w().sub(&c(1)))).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let a = RatFn::new(w().add(&c(3)), w().scale_rat(&Rat::from_int(2)).sub(&c(1))).unwrap();
        assert_eq!(a.mul(&a.inv().unwrap()), RatFn::one());
        assert!(RatFn::zero().inv().is_none());
    }

    #[test]
    fn shift_keeps_monic_factors() {
        let a = RatFn::new(c(1), w().sub(&c(1))).unwrap();
        let s = a.shift_vars(&[(0, Rat::one())]);
        assert_eq!(s, RatFn::new(c(1), w()).unwrap());
    }
}
