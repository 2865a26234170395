//! Minimal ring abstraction shared by generic algorithms.
//!
//! Several element types (polynomials over a variable space, difference
//! operators) cannot build a zero without knowing their context, so the
//! constructors take a sample element (`zero_like`, `one_like`).  Method
//! names avoid clashing with `std::ops` so both can be in scope.

use std::fmt::Debug;

use crate::rat::Rat;

/// An associative unital ring (not necessarily commutative).
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// The image of a rational under the unit map.
    fn from_rat_like(&self, r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }
    fn negate(&self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scaled(&self, r: &Rat) -> Self {
        self.times(&self.from_rat_like(r))
    }
    /// `self * rhs - rhs * self`.
    fn commutator(&self, rhs: &Self) -> Self {
        self.times(rhs).minus(&rhs.times(self))
    }
    fn pow_u(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }
}

/// A ring in which some elements can be inverted exactly.
pub trait Field: Ring {
    /// The two-sided inverse, or `None` if the element is not a unit.
    fn try_inv(&self) -> Option<Self>;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, r: &Rat) -> Self {
        self * r
    }
}

impl Field for Rat {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
