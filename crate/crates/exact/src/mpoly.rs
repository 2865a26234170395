//! Sparse multivariate polynomials with `KScalar` coefficients.
//!
//! Variables are identified by `u32` indices; a monomial stores only its
//! nonzero exponents, so polynomials over different subsets of variables
//! combine without any declared context.  Monomials are ordered
//! lexicographically with variable 0 most significant; the largest monomial
//! of a polynomial is its leading monomial, which drives exact division.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::kscalar::KScalar;
use crate::rat::Rat;
use crate::ring::{Field, Ring};

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<(u32, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn var_pow(v: u32, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            *m.entry(v).or_default() += e;
        }
        Mono(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    /// Removes variable `v`, returning its exponent and the rest.
    pub fn split_var(&self, v: u32) -> (u32, Mono) {
        let e = self.exponent(v);
        (e, Mono(self.0.iter().copied().filter(|(w, _)| *w != v).collect()))
    }
}

impl Ord for Mono {
    /// Lexicographic order, variable 0 most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for k in 0..a.len().min(b.len()) {
            let ((va, ea), (vb, eb)) = (a[k], b[k]);
            if va != vb {
                // The monomial with the smaller variable index present is larger.
                return if va < vb { Ordering::Greater } else { Ordering::Less };
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial `Σ c_m · m` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, KScalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(KScalar::one())
    }

    pub fn constant(c: KScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        MPoly { terms }
    }

    pub fn from_rat(r: Rat) -> Self {
        MPoly::constant(KScalar::from_rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::from_rat(Rat::from_int(n))
    }

    pub fn var(v: u32) -> Self {
        MPoly::monomial(Mono::var(v), KScalar::one())
    }

    pub fn monomial(m: Mono, c: KScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// `Σ coeffs[k] · x_v^k`-style linear form: `c + Σ a_v x_v`.
    pub fn linear(constant: Rat, coeffs: &[(u32, Rat)]) -> Self {
        let mut p = MPoly::from_rat(constant);
        for (v, a) in coeffs {
            p = p.add(&MPoly::var(*v).scale_rat(a));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Mono::one()))
    }

    pub fn constant_term(&self) -> KScalar {
        self.terms.get(&Mono::one()).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &KScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> KScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Leading monomial and coefficient in lex order.
    pub fn leading(&self) -> Option<(&Mono, &KScalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: u32) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Sorted list of variables that occur.
    pub fn vars(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// True if every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(KScalar::is_rational)
    }

    fn add_term(terms: &mut BTreeMap<Mono, KScalar>, m: Mono, c: KScalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            MPoly::add_term(&mut terms, m.clone(), c.clone());
        }
        MPoly { terms }
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            MPoly::add_term(&mut terms, m.clone(), c.neg());
        }
        MPoly { terms }
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                MPoly::add_term(&mut terms, ma.mul(mb), ca.mul(cb));
            }
        }
        MPoly { terms }
    }

    pub fn scale(&self, c: &KScalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> MPoly {
        if r.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.scale(r))).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `x_v ↦ x_v + c_v` for the listed variables.
    pub fn shift_vars(&self, shifts: &[(u32, Rat)]) -> MPoly {
        let shifts: Vec<&(u32, Rat)> = shifts.iter().filter(|(_, c)| !c.is_zero()).collect();
        if shifts.is_empty() || self.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        for (v, c) in shifts {
            if out.degree_in(*v) == 0 {
                continue;
            }
            let lin = MPoly::var(*v).add(&MPoly::from_rat(c.clone()));
            out = out.substitute(*v, &lin);
        }
        out
    }

    /// Substitutes the polynomial `q` for the variable `v`.
    pub fn substitute(&self, v: u32, q: &MPoly) -> MPoly {
        let deg = self.degree_in(v);
        if deg == 0 {
            return self.clone();
        }
        let mut powers = vec![MPoly::one()];
        for k in 1..=deg as usize {
            let next = powers[k - 1].mul(q);
            powers.push(next);
        }
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            let term = powers[e as usize].mul_mono(&rest).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Evaluates every variable in a commutative ring, via `val(v)`.
    pub fn eval_in<R: Ring>(&self, sample: &R, val: &dyn Fn(u32) -> R, coeff: &dyn Fn(&KScalar) -> R) -> R {
        let mut acc = sample.zero_like();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (v, e) in &m.0 {
                t = t.times(&val(*v).pow_u(*e));
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Evaluates the listed variables at rationals, leaving the others symbolic.
    pub fn eval_partial(&self, vals: &BTreeMap<u32, Rat>) -> MPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                match vals.get(v) {
                    Some(x) => c = c.scale(&x.pow(*e as i32)),
                    None => rest.push((*v, *e)),
                }
            }
            MPoly::add_term(&mut terms, Mono(rest), c);
        }
        MPoly { terms }
    }

    /// Exact quotient `self / d` if `d` divides `self`, using lex division.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.try_inv()?;
        if d.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(lm)?, c.mul(&lc_inv));
            }
            return Some(MPoly { terms });
        }
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(lm)?;
            let qc = rc.mul(&lc_inv);
            let step = MPoly::monomial(qm.clone(), qc.clone());
            rem = rem.sub(&d.mul(&step));
            quot.insert(qm, qc);
        }
        Some(MPoly { terms: quot })
    }

    /// Scales so that the leading coefficient is one; returns (monic, factor)
    /// with `self = factor · monic`.
    pub fn monic(&self) -> (MPoly, KScalar) {
        match self.leading() {
            None => (MPoly::zero(), KScalar::one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.try_inv().expect("nonzero leading coefficient");
                (self.scale(&inv), lc)
            }
        }
    }

    /// Formats with a custom variable namer.
    pub fn fmt_with(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .map(|(v, e)| if *e == 1 { name(*v) } else { format!("{}^{}", name(*v), e) })
                .collect();
            let cs = if c.terms().count() > 1 { format!("({c})") } else { c.to_string() };
            if mono.is_empty() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{}*{}", cs, mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero()
    }
    fn one_like(&self) -> Self {
        MPoly::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        MPoly::from_rat(r.clone())
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
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

    fn x(v: u32) -> MPoly {
        MPoly::var(v)
    }

    #[test]
    fn lex_order_leading_term() {
        // x0 > x1^5 in lex with x0 most significant
        let p = x(0).add(&x(1).pow(5));
        assert_eq!(p.leading().unwrap().0, &Mono::var(0));
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&MPoly::from_int(1));
        let b = x(0).sub(&x(1)).add(&MPoly::from_int(3));
        let prod = a.mul(&b).mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a.mul(&b));
        assert!(a.div_exact(&b).is_none());
        assert_eq!(MPoly::zero().div_exact(&b).unwrap(), MPoly::zero());
    }

    #[test]
    fn shifting_variables() {
        // (x0)^2 with x0 -> x0 + 1 is x0^2 + 2 x0 + 1
        let p = x(0).pow(2).shift_vars(&[(0, Rat::one())]);
        let q = x(0).pow(2).add(&x(0).scale_rat(&Rat::from_int(2))).add(&MPoly::one());
        assert_eq!(p, q);
    }

    #[test]
    fn partial_evaluation() {
        let p = x(0).mul(&x(1)).add(&x(1));
        let mut vals = BTreeMap::new();
        vals.insert(0, Rat::from_int(2));
        assert_eq!(p.eval_partial(&vals), x(1).scale_rat(&Rat::from_int(3)));
    }
}
