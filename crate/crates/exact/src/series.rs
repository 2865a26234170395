//! Truncated Laurent series with an explicit validity window.
//!
//! A `TruncSeries` in the variable `x` represents
//! `Σ_{k ≥ lo} c_k x^k + O(x^{hi+1})`: coefficients below `lo` are zero and
//! coefficients in `[lo, hi]` are exact; nothing is known above `hi`.  The
//! sentinel `hi = EXACT` marks a Laurent polynomial with no truncation.
//!
//! Arithmetic narrows windows instead of silently losing precision: a product
//! of windows `[a₁,b₁]` and `[a₂,b₂]` is valid on `[a₁+a₂, min(a₁+b₂, a₂+b₁)]`,
//! and a sum on `[min(a₁,a₂), min(b₁,b₂)]`.  Loop-group code uses `x = t^{-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::ExactError;
use crate::rat::Rat;
use crate::ring::{Field, Ring};

/// Upper window end of an untruncated series.
pub const EXACT: i64 = i64::MAX;

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

/// A windowed Laurent series over a ring `R`.
#[derive(Clone)]
pub struct TruncSeries<R: Ring> {
    var: Arc<str>,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, R>,
    zero: R,
}

impl<R: Ring> TruncSeries<R> {
    /// A series from explicit coefficients on the window `[lo, hi]`.
    ///
    /// Coefficients outside the window are rejected; zeros are dropped.
    pub fn new(var: &str, lo: i64, hi: i64, coeffs: Vec<(i64, R)>, zero: R) -> Result<Self, ExactError> {
        assert!(lo <= hi, "empty window");
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if k < lo || k > hi {
                return Err(ExactError::OutsideWindow { exp: k, lo, hi });
            }
            if !c.is_zero() {
                map.insert(k, c);
            }
        }
        Ok(TruncSeries { var: Arc::from(var), lo, hi, coeffs: map, zero })
    }

    /// An untruncated Laurent polynomial.
    pub fn exact(var: &str, coeffs: Vec<(i64, R)>, zero: R) -> Self {
        let lo = coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(k, _)| *k).min().unwrap_or(0);
        let mut s = TruncSeries { var: Arc::from(var), lo, hi: EXACT, coeffs: BTreeMap::new(), zero };
        for (k, c) in coeffs {
            if !c.is_zero() {
                let acc = s.coeffs.remove(&k).map_or(c.clone(), |a| a.plus(&c));
                if !acc.is_zero() {
                    s.coeffs.insert(k, acc);
                }
            }
        }
        s
    }

    /// The constant `c` as an exact series.
    pub fn constant(var: &str, c: R) -> Self {
        let zero = c.zero_like();
        TruncSeries::exact(var, vec![(0, c)], zero)
    }

    /// The monomial `c·x^k` as an exact series.
    pub fn monomial(var: &str, k: i64, c: R) -> Self {
        let zero = c.zero_like();
        TruncSeries::exact(var, vec![(k, c)], zero)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.hi == EXACT
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    /// Coefficient of `x^k`; zero below the window, an error above it.
    pub fn coeff(&self, k: i64) -> Result<R, ExactError> {
        if k > self.hi {
            return Err(ExactError::OutsideWindow { exp: k, lo: self.lo, hi: self.hi });
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(|| self.zero.clone()))
    }

    /// Coefficient of `x^k`, panicking outside the window.
    pub fn c(&self, k: i64) -> R {
        self.coeff(k).expect("coefficient outside guaranteed window")
    }

    /// Nonzero stored coefficients in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Exponent of the lowest nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient (meaningful for exact series).
    pub fn top_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// True if every coefficient in the window is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Narrows the window to `[lo, min(hi, new_hi)]`.
    pub fn truncate(&self, new_hi: i64) -> Self {
        let hi = self.hi.min(new_hi).max(self.lo);
        let coeffs = self.coeffs.range(..=hi).map(|(k, c)| (*k, c.clone())).collect();
        TruncSeries { var: self.var.clone(), lo: self.lo, hi, coeffs, zero: self.zero.clone() }
    }

    fn check_var(&self, rhs: &Self) {
        assert!(
            self.var == rhs.var,
            "{}",
            ExactError::VariableMismatch(self.var.to_string(), rhs.var.to_string())
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_var(rhs);
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi.min(rhs.hi);
        let mut coeffs: BTreeMap<i64, R> = self.coeffs.range(..=hi).map(|(k, c)| (*k, c.clone())).collect();
        for (k, c) in rhs.coeffs.range(..=hi) {
            let v = match coeffs.remove(k) {
                Some(a) => a.plus(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                coeffs.insert(*k, v);
            }
        }
        TruncSeries { var: self.var.clone(), lo, hi, coeffs, zero: self.zero.clone() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            var: self.var.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.negate())).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_var(rhs);
        let lo = sat_add(self.lo, rhs.lo);
        let hi = sat_add(self.lo, rhs.hi).min(sat_add(rhs.lo, self.hi));
        let mut coeffs: BTreeMap<i64, R> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                let k = a + b;
                if k > hi {
                    break;
                }
                let t = ca.times(cb);
                let v = match coeffs.remove(&k) {
                    Some(x) => x.plus(&t),
                    None => t,
                };
                if !v.is_zero() {
                    coeffs.insert(k, v);
                }
            }
        }
        TruncSeries { var: self.var.clone(), lo, hi, coeffs, zero: self.zero.clone() }
    }

    /// Multiplies every coefficient by the ring element `c` on the left.
    pub fn scale_left(&self, c: &R) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, a)| (*k, c.times(a)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        TruncSeries { var: self.var.clone(), lo: self.lo, hi: self.hi, coeffs, zero: self.zero.clone() }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, a)| (*k, a.scaled(r)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        TruncSeries { var: self.var.clone(), lo: self.lo, hi: self.hi, coeffs, zero: self.zero.clone() }
    }

    /// Multiplies by `x^k` exactly.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            var: self.var.clone(),
            lo: self.lo + k,
            hi: sat_add(self.hi, k),
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Applies a coefficient-wise map.
    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, f(c))).filter(|(_, v)| !v.is_zero()).collect();
        TruncSeries { var: self.var.clone(), lo: self.lo, hi: self.hi, coeffs, zero }
    }

    /// Equality of coefficients on the intersection of the two windows.
    pub fn agrees_with(&self, rhs: &Self) -> bool {
        if self.var != rhs.var {
            return false;
        }
        let hi = self.hi.min(rhs.hi);
        let lo = self.lo.min(rhs.lo);
        let keys: std::collections::BTreeSet<i64> =
            self.coeffs.range(lo..=hi).chain(rhs.coeffs.range(lo..=hi)).map(|(k, _)| *k).collect();
        keys.into_iter().all(|k| self.c(k) == rhs.c(k))
    }
}

impl<R: Field> TruncSeries<R> {
    /// Multiplicative inverse on the guaranteed window.
    ///
    /// If the leading exponent is `v` and the input is valid up to `hi`, the
    /// inverse is valid on `[-v, -v + (hi - v)]`.  An exact monomial inverts
    /// exactly; any other exact series must be truncated first.
    pub fn inv(&self) -> Result<Self, ExactError> {
        let v = self.valuation().ok_or_else(|| ExactError::NotInvertible("zero series".into()))?;
        let lead = self.coeffs[&v].clone();
        let lead_inv = lead
            .try_inv()
            .ok_or_else(|| ExactError::NotInvertible(format!("leading coefficient {lead:?}")))?;
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(TruncSeries::exact(&self.var, vec![(-v, lead_inv)], self.zero.clone()));
            }
            return Err(ExactError::NotInvertible("exact non-monomial series needs a precision".into()));
        }
        let rel = self.hi - v;
        let mut g: Vec<R> = Vec::with_capacity(rel as usize + 1);
        g.push(lead_inv.clone());
        for n in 1..=rel {
            let mut acc = self.zero.clone();
            for k in 1..=n {
                if let Some(c) = self.coeffs.get(&(v + k)) {
                    acc = acc.plus(&c.times(&g[(n - k) as usize]));
                }
            }
            g.push(lead_inv.times(&acc).negate());
        }
        let coeffs = g.into_iter().enumerate().map(|(n, c)| (-v + n as i64, c)).collect();
        TruncSeries::new(&self.var, -v, -v + rel, coeffs, self.zero.clone())
    }

    /// Inverse of an exact series to relative precision `rel` beyond its leading term.
    pub fn inv_to(&self, rel: i64) -> Result<Self, ExactError> {
        let v = self.valuation().ok_or_else(|| ExactError::NotInvertible("zero series".into()))?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return self.inv().map(|s| s.truncate(-v + rel));
        }
        self.truncate(v + rel).inv()
    }
}

impl<R: Ring> PartialEq for TruncSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl<R: Ring> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("({c:?})*{}^{k}", self.var)).collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.is_exact() {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O({}^{})  [window {}..{}]", self.var, self.hi + 1, self.lo, self.hi)
        }
    }
}

impl<R: Ring> Ring for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        TruncSeries::exact(&self.var, vec![], self.zero.clone())
    }
    fn one_like(&self) -> Self {
        TruncSeries::constant(&self.var, self.zero.one_like())
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        TruncSeries::constant(&self.var, self.zero.from_rat_like(r))
    }
    fn is_zero(&self) -> bool {
        TruncSeries::is_zero(self)
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

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn geometric_inverse() {
        // 1 − 3x on [0, 4] inverts to Σ 3^k x^k on [0, 4]
        let f = TruncSeries::new("x", 0, 4, vec![(0, r(1)), (1, r(-3))], Rat::zero()).unwrap();
        let g = f.inv().unwrap();
        assert_eq!((g.lo(), g.hi()), (0, 4));
        for k in 0..=4 {
            assert_eq!(g.c(k), r(3i64.pow(k as u32)));
        }
        assert!(f.mul(&g).agrees_with(&TruncSeries::constant("x", r(1))));
    }

    #[test]
    fn identity_inverse() {
        let f = TruncSeries::new("x", 0, 2, vec![(0, r(1))], Rat::zero()).unwrap();
        assert_eq!(f.inv().unwrap(), f);
    }

    #[test]
    fn monomial_window_inverse() {
        let f = TruncSeries::new("x", 1, 3, vec![(1, r(1))], Rat::zero()).unwrap();
        let g = f.inv().unwrap();
        assert_eq!((g.lo(), g.hi()), (-1, 1));
        assert_eq!(g.c(-1), r(1));
        assert_eq!(g.c(0), r(0));
    }

    #[test]
    fn product_window_rule() {
        let a = TruncSeries::new("x", 0, 5, vec![(0, r(1))], Rat::zero()).unwrap();
        let b = TruncSeries::new("x", 2, 4, vec![(2, r(1))], Rat::zero()).unwrap();
        let p = a.mul(&b);
        assert_eq!((p.lo(), p.hi()), (2, 4));
        let e = TruncSeries::exact("x", vec![(-1, r(1))], Rat::zero());
        let q = a.mul(&e);
        assert_eq!((q.lo(), q.hi()), (-1, 4));
    }

    #[test]
    fn non_unit_leading_coefficient() {
        let f = TruncSeries::new("x", 0, 2, vec![], Rat::zero()).unwrap();
        assert!(f.inv().is_err());
    }
}
