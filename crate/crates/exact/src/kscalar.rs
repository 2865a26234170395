//! Scalars in a multiquadratic extension of the rationals.
//!
//! Symmetrizer square roots `d^{1/2}` appear in difference-operator images
//! and moment maps.  Rather than tracking abstract symbols `s_i` with
//! `s_i^2 = d_i` per context, a `KScalar` is a finite sum `Σ q_n · √n` over
//! square-free positive integers `n`.  Products reduce with
//! `√a·√b = g·√(ab/g²)`, `g = gcd(a, b)`.  This representation needs no
//! context, identifies `√d_i` with the positive real root, and is a field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::rat::Rat;
use crate::ring::{Field, Ring};

/// An element of `Q(√2, √3, √5, …)`, stored as radicand → coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KScalar {
    terms: BTreeMap<u64, Rat>,
}

/// Splits `d > 0` as `k² · n` with `n` square-free.
fn square_free_split(d: u64) -> (u64, u64) {
    assert!(d > 0, "square root of zero radicand");
    let mut k = 1u64;
    let mut n = 1u64;
    let mut rest = d;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            n *= p;
        }
        p += 1;
    }
    n *= rest;
    (k, n)
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 1;
    }
    n
}

impl KScalar {
    pub fn zero() -> Self {
        KScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        KScalar::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(1, r);
        }
        KScalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        KScalar::from_rat(Rat::from_int(n))
    }

    /// `√d` for a positive integer `d`.
    pub fn sqrt(d: u64) -> Self {
        let (k, n) = square_free_split(d);
        let mut terms = BTreeMap::new();
        terms.insert(n, Rat::from_int(k as i64));
        KScalar { terms }
    }

    /// `1/√d` for a positive integer `d`.
    pub fn inv_sqrt(d: u64) -> Self {
        KScalar::sqrt(d).try_inv().expect("sqrt of positive integer is a unit")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&1).is_some_and(|c| c.is_one())
    }

    /// The rational value if no irrational radicand is present.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rat().is_some()
    }

    /// Iterates `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return KScalar::zero();
        }
        KScalar { terms: self.terms.iter().map(|(n, c)| (*n, c * r)).collect() }
    }

    fn add_term(terms: &mut BTreeMap<u64, Rat>, n: u64, c: Rat) {
        if c.is_zero() {
            return;
        }
        match terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &KScalar) -> KScalar {
        let mut terms = self.terms.clone();
        for (n, c) in &rhs.terms {
            KScalar::add_term(&mut terms, *n, c.clone());
        }
        KScalar { terms }
    }

    pub fn sub(&self, rhs: &KScalar) -> KScalar {
        let mut terms = self.terms.clone();
        for (n, c) in &rhs.terms {
            KScalar::add_term(&mut terms, *n, -c);
        }
        KScalar { terms }
    }

    pub fn neg(&self) -> KScalar {
        KScalar { terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect() }
    }

    pub fn mul(&self, rhs: &KScalar) -> KScalar {
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (a, ca) = self.terms.iter().next().unwrap();
            let (b, cb) = rhs.terms.iter().next().unwrap();
            if *a == 1 || *b == 1 {
                let mut terms = BTreeMap::new();
                terms.insert(a * b, ca * cb);
                return KScalar { terms };
            }
        }
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let g = a.gcd(b);
                let n = (a / g) * (b / g);
                let c = ca * cb * Rat::from_int(g as i64);
                KScalar::add_term(&mut terms, n, c);
            }
        }
        KScalar { terms }
    }

    /// Conjugation `√p ↦ −√p` for the prime `p`.
    fn conjugate_at(&self, p: u64) -> KScalar {
        KScalar {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (*n, if n % p == 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<KScalar> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rat() {
            return Some(KScalar::from_rat(r.inv()?));
        }
        // Eliminate one prime at a time: x · conj_p(x) has no √p component.
        let n = *self.terms.keys().find(|n| **n != 1).expect("irrational term present");
        let p = smallest_prime_factor(n);
        let conj = self.conjugate_at(p);
        let norm = self.mul(&conj);
        let norm_inv = norm.inv()?;
        Some(conj.mul(&norm_inv))
    }
}

impl fmt::Display for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *n == 1 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "sqrt({n})")?;
            } else {
                write!(f, "{c}*sqrt({n})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for KScalar {
    fn from(r: Rat) -> Self {
        KScalar::from_rat(r)
    }
}

impl From<i64> for KScalar {
    fn from(n: i64) -> Self {
        KScalar::from_int(n)
    }
}

impl Add for &KScalar {
    type Output = KScalar;
    fn add(self, rhs: &KScalar) -> KScalar {
        KScalar::add(self, rhs)
    }
}

impl Sub for &KScalar {
    type Output = KScalar;
    fn sub(self, rhs: &KScalar) -> KScalar {
        KScalar::sub(self, rhs)
    }
}

impl Mul for &KScalar {
    type Output = KScalar;
    fn mul(self, rhs: &KScalar) -> KScalar {
        KScalar::mul(self, rhs)
    }
}

impl Neg for &KScalar {
    type Output = KScalar;
    fn neg(self) -> KScalar {
        KScalar::neg(self)
    }
}

impl Ring for KScalar {
    fn zero_like(&self) -> Self {
        KScalar::zero()
    }
    fn one_like(&self) -> Self {
        KScalar::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        KScalar::from_rat(r.clone())
    }
    fn is_zero(&self) -> bool {
        KScalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        KScalar::add(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        KScalar::sub(self, rhs)
    }
    fn negate(&self) -> Self {
        KScalar::neg(self)
    }
    fn times(&self, rhs: &Self) -> Self {
        KScalar::mul(self, rhs)
    }
    fn scaled(&self, r: &Rat) -> Self {
        self.scale(r)
    }
}

impl Field for KScalar {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_reduce() {
        let s = KScalar::sqrt(2);
        assert_eq!(s.mul(&s), KScalar::from_int(2));
        assert_eq!(KScalar::sqrt(8), KScalar::sqrt(2).scale(&Rat::from_int(2)));
        assert_eq!(KScalar::sqrt(9), KScalar::from_int(3));
        assert_eq!(KScalar::sqrt(1), KScalar::one());
    }

    #[test]
    fn mixed_products() {
        let s2 = KScalar::sqrt(2);
        let s3 = KScalar::sqrt(3);
        let s6 = KScalar::sqrt(6);
        assert_eq!(s2.mul(&s3), s6);
        assert_eq!(s6.mul(&s2), KScalar::sqrt(3).scale(&Rat::from_int(2)));
    }

    #[test]
    fn conjugate_norm() {
        // (2 + √2)(2 − √2) = 2
        let s = KScalar::sqrt(2);
        let a = KScalar::from_int(2).add(&s);
        let b = KScalar::from_int(2).sub(&s);
        assert_eq!(a.mul(&b), KScalar::from_int(2));
    }

    #[test]
    fn inverses() {
        let x = KScalar::from_int(1).add(&KScalar::sqrt(2)).add(&KScalar::sqrt(3));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert!(KScalar::zero().inv().is_none());
        assert_eq!(KScalar::inv_sqrt(2).mul(&KScalar::sqrt(2)), KScalar::one());
    }

    #[test]
    fn display() {
        let x = KScalar::from_rat(Rat::new(1, 2)).add(&KScalar::sqrt(3).scale(&Rat::from_int(-2)));
        assert_eq!(x.to_string(), "1/2 + -2*sqrt(3)");
    }
}
