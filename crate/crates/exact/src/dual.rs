//! Dual numbers `a + ε b` with `ε² = 0` over `KScalar`.
//!
//! Evaluating a polynomial at a point whose coordinates carry an
//! ε-component yields the value and the directional derivative at once,
//! which is how infinitesimal group actions are differentiated exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::kscalar::KScalar;
use crate::mpoly::MPoly;
use crate::rat::Rat;
use crate::ring::{Field, Ring};

/// `value + ε · infinitesimal`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DualScalar {
    pub value: KScalar,
    pub infinitesimal: KScalar,
}

impl DualScalar {
    pub fn new(value: KScalar, infinitesimal: KScalar) -> Self {
        DualScalar { value, infinitesimal }
    }

    /// A constant with no ε-part.
    pub fn constant(value: KScalar) -> Self {
        DualScalar { value, infinitesimal: KScalar::zero() }
    }

    /// The pure infinitesimal `ε`.
    pub fn epsilon() -> Self {
        DualScalar { value: KScalar::zero(), infinitesimal: KScalar::one() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        DualScalar { value: self.value.add(&rhs.value), infinitesimal: self.infinitesimal.add(&rhs.infinitesimal) }
    }

    pub fn neg(&self) -> Self {
        DualScalar { value: self.value.neg(), infinitesimal: self.infinitesimal.neg() }
    }

    /// `(a + εb)(c + εd) = ac + ε(ad + bc)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        DualScalar {
            value: self.value.mul(&rhs.value),
            infinitesimal: self.value.mul(&rhs.infinitesimal).add(&self.infinitesimal.mul(&rhs.value)),
        }
    }

    /// `1/(a + εb) = 1/a − ε b/a²`, defined when `a` is invertible.
    pub fn inv(&self) -> Option<Self> {
        let a_inv = self.value.inv()?;
        Some(DualScalar { value: a_inv.clone(), infinitesimal: self.infinitesimal.mul(&a_inv).mul(&a_inv).neg() })
    }
}

/// Evaluates the polynomial `f` at a point given by variable → dual scalar.
///
/// Missing variables evaluate to zero.
pub fn dual_apply(f: &MPoly, point: &BTreeMap<u32, DualScalar>) -> DualScalar {
    let zero = DualScalar::default();
    f.eval_in(
        &zero,
        &|v| point.get(&v).cloned().unwrap_or_default(),
        &|c| DualScalar::constant(c.clone()),
    )
}

impl fmt::Debug for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ε({})", self.value, self.infinitesimal)
    }
}

impl Ring for DualScalar {
    fn zero_like(&self) -> Self {
        DualScalar::default()
    }
    fn one_like(&self) -> Self {
        DualScalar::constant(KScalar::one())
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        DualScalar::constant(KScalar::from_rat(r.clone()))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.infinitesimal.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
}

impl Field for DualScalar {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> KScalar {
        KScalar::from_int(n)
    }

    #[test]
    fn epsilon_squares_to_zero() {
        let e = DualScalar::epsilon();
        assert!(e.mul(&e).is_zero());
    }

    #[test]
    fn product_rule_on_bc() {
        // f = b·c at (b, c + ε b) with b = 2, c = 5: value 10, derivative b² = 4
        let b = MPoly::var(0);
        let c = MPoly::var(1);
        let f = b.mul(&c);
        let mut pt = BTreeMap::new();
        pt.insert(0, DualScalar::constant(k(2)));
        pt.insert(1, DualScalar::new(k(5), k(2)));
        let r = dual_apply(&f, &pt);
        assert_eq!(r.value, k(10));
        assert_eq!(r.infinitesimal, k(4));
    }

    #[test]
    fn inverse() {
        let x = DualScalar::new(k(2), k(3));
        assert_eq!(x.mul(&x.inv().unwrap()), x.one_like());
        assert!(DualScalar::epsilon().inv().is_none());
    }
}
