//! Classical generalized affine Grassmannian slices.
//!
//! Two models are provided:
//!
//! * [`LoopMat`]: `n × n` matrices of windowed Laurent series in `x = t^{−1}`,
//!   with Gauss decomposition `g = u · h · u₋` (upper unipotent, diagonal,
//!   lower unipotent), the projection `π` onto `U₁[[t^{−1}]] T₁[[t^{−1}]] t^μ
//!   U₋,₁[[t^{−1}]]`, multiplication and shift maps.  Used for `SL₂`/`GL₃`.
//! * [`Rank1Point`]: the exact `PGL₂` model `[[a, b], [c, d]]` with polynomial
//!   entries, `det = t^λ`, `d` monic of degree `m` and `deg b, deg c < m`.
//!   Here `π` is division with remainder by `d`, so every map is exact.
//!
//! The Poisson structure of the chart `W⁰_{−α_i^∨} ≅ T^*C^×` is recovered by
//! solving the rational r-matrix equation for matrix coefficients of
//! `r_i(b, c) = [[0, b], [−b^{−1}, t − c]]`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use yslice_exact::dual::dual_apply;
use yslice_exact::{DualScalar, KScalar, MPoly, Rat, RatFn, TruncSeries};

use crate::error::{Error, Result};
use crate::report::CheckRecord;

/// Name of the series variable `x = t^{−1}`.
pub const SERIES_VAR: &str = "x";

/// Windowed series in `x = t^{−1}` with exact scalar coefficients.
pub type Series = TruncSeries<KScalar>;

fn series_const(c: KScalar) -> Series {
    Series::constant(SERIES_VAR, c)
}

fn series_zero() -> Series {
    Series::exact(SERIES_VAR, vec![], KScalar::zero())
}

/// A polynomial in `t` with exact coefficients, stored from low to high degree.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<KScalar>,
}

impl UPoly {
    fn trimmed(mut c: Vec<KScalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        UPoly::constant(KScalar::one())
    }

    pub fn constant(c: KScalar) -> Self {
        UPoly::trimmed(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(k: usize, c: KScalar) -> Self {
        let mut v = vec![KScalar::zero(); k + 1];
        v[k] = c;
        UPoly::trimmed(v)
    }

    /// `t`.
    pub fn t() -> Self {
        UPoly::monomial(1, KScalar::one())
    }

    /// From coefficients `c_0, c_1, …`.
    pub fn from_coeffs(c: Vec<KScalar>) -> Self {
        UPoly::trimmed(c)
    }

    pub fn from_rats(c: &[Rat]) -> Self {
        UPoly::trimmed(c.iter().cloned().map(KScalar::from_rat).collect())
    }

    pub fn coeffs(&self) -> &[KScalar] {
        &self.c
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> KScalar {
        if k < 0 {
            return KScalar::zero();
        }
        self.c.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> KScalar {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        UPoly::trimmed((0..n).map(|k| self.coeff(k as i64).add(&rhs.coeff(k as i64))).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![KScalar::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        UPoly::trimmed(v)
    }

    pub fn scale(&self, s: &KScalar) -> UPoly {
        UPoly::trimmed(self.c.iter().map(|x| x.mul(s)).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![KScalar::zero(); k];
        v.extend(self.c.iter().cloned());
        UPoly { c: v }
    }

    /// Division with remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or_else(|| Error::Precondition("division by the zero polynomial".into()))?;
        let inv = d.lead().inv().unwrap();
        let mut r = self.clone();
        let mut q = vec![KScalar::zero(); self.c.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let f = r.lead().mul(&inv);
            q[rd - dd] = f.clone();
            r = r.sub(&d.scale(&f).shift(rd - dd));
        }
        Ok((UPoly::trimmed(q), r))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// `(g, s, u)` with `g = s·self + u·rhs` and `g` monic (or zero).
    pub fn gcdext(&self, rhs: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut u0, mut u1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            let s = s0.sub(&q.mul(&s1));
            let u = u0.sub(&q.mul(&u1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = r0.lead().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), u0.scale(&inv))
    }

    /// The Laurent polynomial `Σ c_k x^{−k}`.
    pub fn to_series(&self) -> Series {
        Series::exact(SERIES_VAR, self.c.iter().enumerate().map(|(k, c)| (-(k as i64), c.clone())).collect(), KScalar::zero())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A square matrix of windowed series in `x = t^{−1}`.
#[derive(Clone, PartialEq)]
pub struct LoopMat {
    e: Vec<Vec<Series>>,
}

impl LoopMat {
    pub fn identity(n: usize) -> Self {
        let e = (0..n)
            .map(|i| (0..n).map(|j| if i == j { series_const(KScalar::one()) } else { series_zero() }).collect())
            .collect();
        LoopMat { e }
    }

    pub fn from_series(e: Vec<Vec<Series>>) -> Self {
        LoopMat { e }
    }

    /// A matrix of polynomials in `t`.
    pub fn from_polys(p: &[Vec<UPoly>]) -> Self {
        LoopMat { e: p.iter().map(|row| row.iter().map(UPoly::to_series).collect()).collect() }
    }

    /// `diag(t^{k_1}, …, t^{k_n})`.
    pub fn t_pow(k: &[i64]) -> Self {
        let mut m = LoopMat::identity(k.len());
        for (i, ki) in k.iter().enumerate() {
            m.e[i][i] = Series::monomial(SERIES_VAR, -ki, KScalar::one());
        }
        m
    }

    /// The elementary matrix `1 + s·E_{ij}`.
    pub fn elementary(n: usize, i: usize, j: usize, s: Series) -> Self {
        let mut m = LoopMat::identity(n);
        m.e[i][j] = m.e[i][j].add(&s);
        m
    }

    pub fn size(&self) -> usize {
        self.e.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.e[i][j]
    }

    pub fn mul(&self, rhs: &LoopMat) -> LoopMat {
        let n = self.size();
        let e = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = series_zero();
                        for k in 0..n {
                            if self.e[i][k].is_zero() || rhs.e[k][j].is_zero() {
                                continue;
                            }
                            acc = acc.add(&self.e[i][k].mul(&rhs.e[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        LoopMat { e }
    }

    /// Entry-wise agreement on the common windows.
    pub fn agrees_with(&self, rhs: &LoopMat) -> bool {
        self.size() == rhs.size()
            && (0..self.size()).all(|i| (0..self.size()).all(|j| self.e[i][j].agrees_with(&rhs.e[i][j])))
    }

    /// Smallest upper window end over all entries.
    pub fn window_end(&self) -> i64 {
        self.e.iter().flatten().map(|s| s.hi()).min().unwrap_or(i64::MAX)
    }

    /// Determinant (cofactor expansion; intended for `n ≤ 3`).
    pub fn det(&self) -> Series {
        fn rec(m: &[Vec<Series>]) -> Series {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = series_zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Series>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, s)| s.clone()).collect()).collect();
                let term = m[0][j].mul(&rec(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        rec(&self.e)
    }
}

impl fmt::Debug for LoopMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.e {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// Gauss factors `g = u · h · u₋`.
#[derive(Clone, Debug)]
pub struct GaussFactors {
    pub u: LoopMat,
    pub h: LoopMat,
    pub u_minus: LoopMat,
}

impl GaussFactors {
    pub fn recompose(&self) -> LoopMat {
        self.u.mul(&self.h).mul(&self.u_minus)
    }

    /// `t`-degrees of the diagonal factor (minus the `x`-valuations).
    pub fn diagonal_degrees(&self) -> Result<Vec<i64>> {
        (0..self.h.size())
            .map(|i| {
                self.h.e[i][i].valuation().map(|v| -v).ok_or_else(|| Error::Locus("zero pivot".into()))
            })
            .collect()
    }
}

/// Gauss decomposition `g = u h u₋`, eliminating from the bottom-right corner.
///
/// `prec` is the relative precision used when inverting pivots.  Fails with
/// [`Error::Locus`] if a pivot vanishes, i.e. `g` is outside the big cell.
pub fn gauss_decompose(g: &LoopMat, prec: i64) -> Result<GaussFactors> {
    let n = g.size();
    let mut a = g.e.clone();
    let mut u = LoopMat::identity(n);
    let mut h = LoopMat::identity(n);
    let mut l = LoopMat::identity(n);
    for k in (0..n).rev() {
        let p = a[k][k].clone();
        if p.is_zero() {
            return Err(Error::Locus(format!("pivot {k} vanishes; point outside the big cell")));
        }
        let pinv = p.inv_to(prec).map_err(|e| Error::Locus(format!("pivot {k}: {e}")))?;
        for i in 0..k {
            u.e[i][k] = a[i][k].mul(&pinv);
        }
        for j in 0..k {
            l.e[k][j] = pinv.mul(&a[k][j]);
        }
        for i in 0..k {
            for j in 0..k {
                if a[i][k].is_zero() || a[k][j].is_zero() {
                    continue;
                }
                a[i][j] = a[i][j].sub(&u.e[i][k].mul(&a[k][j]));
            }
        }
        h.e[k][k] = p;
    }
    Ok(GaussFactors { u, h, u_minus: l })
}

/// The polynomial part (`t`-degree ≥ 0, i.e. `x`-exponent ≤ 0) of a series.
fn polynomial_part(s: &Series) -> Series {
    Series::exact(SERIES_VAR, s.iter().filter(|(k, _)| *k <= 0).map(|(k, c)| (k, c.clone())).collect(), KScalar::zero())
}

/// `n⁻¹ u` for the unique `n ∈ U[t]` making it lie in `U₁[[t^{−1}]]` (upper case),
/// or `u₋ n₋⁻¹` with `n₋ ∈ U₋[t]` (lower case).
fn strip_polynomial(u: &LoopMat, upper: bool) -> LoopMat {
    let n = u.size();
    let mut v = u.clone();
    for k in 1..n {
        let mut m = LoopMat::identity(n);
        let mut any = false;
        for i in 0..n - k {
            let (r, c) = if upper { (i, i + k) } else { (i + k, i) };
            let p = polynomial_part(&v.e[r][c]);
            if !p.is_zero() {
                m.e[r][c] = p.neg();
                any = true;
            }
        }
        if any {
            v = if upper { m.mul(&v) } else { v.mul(&m) };
        }
    }
    v
}

/// A point of `W_μ`, stored as a matrix together with its Gauss factors.
#[derive(Clone, Debug)]
pub struct SlicePoint {
    pub g: LoopMat,
    /// `t`-degrees of the diagonal Gauss factor (a `GL_n` cocharacter).
    pub mu: Vec<i64>,
    pub factors: GaussFactors,
}

/// `π(g)`: strips the polynomial parts of the unipotent Gauss factors.
pub fn pi_project(g: &LoopMat, prec: i64) -> Result<SlicePoint> {
    let f = gauss_decompose(g, prec)?;
    let mu = f.diagonal_degrees()?;
    for i in 0..g.size() {
        let hi = &f.h.e[i][i];
        if !hi.c(-mu[i]).is_one() {
            return Err(Error::Locus(format!("diagonal entry {i} is not in t^μ(1 + t^{{-1}}…)")));
        }
    }
    let u = strip_polynomial(&f.u, true);
    let u_minus = strip_polynomial(&f.u_minus, false);
    let factors = GaussFactors { u, h: f.h, u_minus };
    Ok(SlicePoint { g: factors.recompose(), mu, factors })
}

/// `m(g₁, g₂) = π(g₁ g₂)`.
pub fn multiply_slices(g1: &SlicePoint, g2: &SlicePoint, prec: i64) -> Result<SlicePoint> {
    pi_project(&g1.g.mul(&g2.g), prec)
}

/// `π(t^{−η₁} g t^{−η₂})` for antidominant cocharacters `η₁, η₂` (non-decreasing exponents).
pub fn shift_point(g: &SlicePoint, eta1: &[i64], eta2: &[i64], prec: i64) -> Result<SlicePoint> {
    let anti = |e: &[i64]| e.windows(2).all(|w| w[0] <= w[1]);
    if !anti(eta1) || !anti(eta2) {
        return Err(Error::Precondition("shift cocharacters must be antidominant".into()));
    }
    let neg = |e: &[i64]| e.iter().map(|x| -x).collect::<Vec<_>>();
    pi_project(&LoopMat::t_pow(&neg(eta1)).mul(&g.g).mul(&LoopMat::t_pow(&neg(eta2))), prec)
}

/// `τ_i([[0, b], [−b^{−1}, t − c]])` in `GL_n`.
pub fn r_point(n: usize, i: usize, b: &KScalar, c: &KScalar) -> Result<LoopMat> {
    let binv = b.inv().ok_or_else(|| Error::Precondition("r_i(b, c) needs b ≠ 0".into()))?;
    let mut p: Vec<Vec<UPoly>> =
        (0..n).map(|r| (0..n).map(|s| if r == s { UPoly::one() } else { UPoly::zero() }).collect()).collect();
    p[i][i] = UPoly::zero();
    p[i][i + 1] = UPoly::constant(b.clone());
    p[i + 1][i] = UPoly::constant(binv.neg());
    p[i + 1][i + 1] = UPoly::t().sub(&UPoly::constant(c.clone()));
    Ok(LoopMat::from_polys(&p))
}

/// `r_i(b, c)⁻¹ = τ_i([[t − c, −b], [b^{−1}, 0]])`.
fn r_point_inv(n: usize, i: usize, b: &KScalar, c: &KScalar) -> Result<LoopMat> {
    let binv = b.inv().ok_or_else(|| Error::Precondition("r_i(b, c) needs b ≠ 0".into()))?;
    let mut p: Vec<Vec<UPoly>> =
        (0..n).map(|r| (0..n).map(|s| if r == s { UPoly::one() } else { UPoly::zero() }).collect()).collect();
    p[i][i] = UPoly::t().sub(&UPoly::constant(c.clone()));
    p[i][i + 1] = UPoly::constant(b.neg());
    p[i + 1][i] = UPoly::constant(binv);
    p[i + 1][i + 1] = UPoly::zero();
    Ok(LoopMat::from_polys(&p))
}

/// `ψ_i^{(k)}(g)`: the `t^{−k}` coefficient of the `(i, i+1)` entry of the `U`-factor.
pub fn psi_coeffs(g: &SlicePoint, i: usize, k: i64) -> Result<KScalar> {
    g.factors.u.e[i][i + 1]
        .coeff(k)
        .map_err(|e| Error::Locus(format!("ψ coefficient {k} outside the window: {e}")))
}

/// The moment map `Φ_i = d_i^{−1/2} ψ_i^{(1)}`.
pub fn moment_map(g: &SlicePoint, i: usize, d_i: u64) -> Result<KScalar> {
    Ok(KScalar::inv_sqrt(d_i).mul(&psi_coeffs(g, i, 1)?))
}

/// A point `r_i(b, c)` of the chart `W⁰_{−α_i^∨}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct W0AlphaPoint {
    pub node: usize,
    pub b: KScalar,
    pub c: KScalar,
}

impl W0AlphaPoint {
    pub fn new(node: usize, b: KScalar, c: KScalar) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Precondition("W⁰ chart point needs b ≠ 0".into()));
        }
        Ok(W0AlphaPoint { node, b, c })
    }
}

/// `ξ_i(g) = r_i(ψ^{(1)}, ψ^{(2)}/ψ^{(1)})`.
pub fn xi(g: &SlicePoint, i: usize) -> Result<W0AlphaPoint> {
    let p1 = psi_coeffs(g, i, 1)?;
    let p2 = psi_coeffs(g, i, 2)?;
    let inv = p1.inv().ok_or_else(|| Error::Locus(format!("Φ_{} vanishes; ξ undefined", i + 1)))?;
    W0AlphaPoint::new(i, p1, p2.mul(&inv))
}

/// `f(g) = (ξ_i(g), π(ξ_i(g)⁻¹ g))`.
pub fn inverse_map_f(g: &SlicePoint, i: usize, prec: i64) -> Result<(W0AlphaPoint, SlicePoint)> {
    let x = xi(g, i)?;
    let rinv = r_point_inv(g.g.size(), i, &x.b, &x.c)?;
    let rest = pi_project(&rinv.mul(&g.g), prec)?;
    Ok((x, rest))
}

/// The `G_a`-action `a · g = π(x_{−i}(−d_i^{1/2} a) g)`.
pub fn ga_action(a: &KScalar, g: &SlicePoint, i: usize, d_i: u64, prec: i64) -> Result<SlicePoint> {
    let s = KScalar::sqrt(d_i).mul(a).neg();
    let x = LoopMat::elementary(g.g.size(), i + 1, i, series_const(s));
    pi_project(&x.mul(&g.g), prec)
}

/// A point of the `PGL₂` slice `W^λ_μ`, `μ = λ − 2m`: `[[a, b], [c, d]]` with
/// `det = t^λ`, `d` monic of degree `m`, `deg b, deg c < m`.
#[derive(Clone, PartialEq, Eq)]
pub struct Rank1Point {
    pub lambda: u32,
    pub a: UPoly,
    pub b: UPoly,
    pub c: UPoly,
    pub d: UPoly,
}

impl fmt::Debug for Rank1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ={} [[{}, {}], [{}, {}]]", self.lambda, self.a, self.b, self.c, self.d)
    }
}

fn t_pow_poly(k: u32) -> UPoly {
    UPoly::monomial(k as usize, KScalar::one())
}

impl Rank1Point {
    /// `π` on the polynomial model: reduce `b` and `c` modulo `d` by the
    /// unipotent polynomial row and column operations.
    pub fn normalize(lambda: u32, a: UPoly, b: UPoly, c: UPoly, d: UPoly) -> Result<Self> {
        if !d.is_monic() {
            return Err(Error::Locus(format!("lower-right entry {d} is not monic")));
        }
        // left multiplication by [[1, −q], [0, 1]]
        let (q, b) = b.divrem(&d)?;
        let a = a.sub(&q.mul(&c));
        // right multiplication by [[1, 0], [−q', 1]]
        let (q2, c) = c.divrem(&d)?;
        let a = a.sub(&b.mul(&q2));
        let p = Rank1Point { lambda, a, b, c, d };
        if p.det() != t_pow_poly(lambda) {
            return Err(Error::Locus(format!("determinant {} ≠ t^{lambda}", p.det())));
        }
        Ok(p)
    }

    /// The point with given `b, c, d`; `a` is solved from `det = t^λ`.
    pub fn from_bcd(lambda: u32, b: UPoly, c: UPoly, d: UPoly) -> Result<Self> {
        let a = t_pow_poly(lambda)
            .add(&b.mul(&c))
            .div_exact(&d)
            .ok_or_else(|| Error::Locus("t^λ + bc is not divisible by d".into()))?;
        Rank1Point::normalize(lambda, a, b, c, d)
    }

    /// `t^λ` itself, the unique point of `W^λ_λ`.
    pub fn torus(lambda: u32) -> Self {
        Rank1Point { lambda, a: t_pow_poly(lambda), b: UPoly::zero(), c: UPoly::zero(), d: UPoly::one() }
    }

    /// `r(b, c) = [[0, b], [−b^{−1}, t − c]] ∈ W⁰_{−2}`.
    pub fn r(b: &KScalar, c: &KScalar) -> Result<Self> {
        let binv = b.inv().ok_or_else(|| Error::Precondition("r(b, c) needs b ≠ 0".into()))?;
        Ok(Rank1Point {
            lambda: 0,
            a: UPoly::zero(),
            b: UPoly::constant(b.clone()),
            c: UPoly::constant(binv.neg()),
            d: UPoly::t().sub(&UPoly::constant(c.clone())),
        })
    }

    pub fn from_chart(p: &W0AlphaPoint) -> Result<Self> {
        Rank1Point::r(&p.b, &p.c)
    }

    /// `m = deg d`.
    pub fn m(&self) -> u32 {
        self.d.degree().unwrap_or(0) as u32
    }

    /// `μ = λ − 2m`.
    pub fn mu(&self) -> i64 {
        self.lambda as i64 - 2 * self.m() as i64
    }

    pub fn det(&self) -> UPoly {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn to_loopmat(&self) -> LoopMat {
        LoopMat::from_polys(&[vec![self.a.clone(), self.b.clone()], vec![self.c.clone(), self.d.clone()]])
    }

    /// `m(g₁, g₂) = π(g₁ g₂)`.
    pub fn mul(&self, rhs: &Rank1Point) -> Result<Rank1Point> {
        let a = self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c));
        let b = self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d));
        let c = self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c));
        let d = self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d));
        Rank1Point::normalize(self.lambda + rhs.lambda, a, b, c, d)
    }

    /// `ψ^{(k)}`: the `t^{−k}` coefficient of `b/d`.
    pub fn psi(&self, k: usize) -> KScalar {
        // b/d = Σ_k ψ^{(k)} t^{−k}; solve b = d · Σ ψ^{(k)} t^{−k} from the top degree down
        let m = self.m() as i64;
        let mut psi: Vec<KScalar> = vec![KScalar::zero(); k + 1];
        for j in 1..=k {
            // coefficient of t^{m−j} in b equals Σ_{l=1..j} d_{m−j+l} ψ^{(l)}
            let mut acc = self.b.coeff(m - j as i64);
            for (l, p) in psi.iter().enumerate().take(j).skip(1) {
                acc = acc.sub(&self.d.coeff(m - j as i64 + l as i64).mul(p));
            }
            psi[j] = acc;
        }
        psi[k].clone()
    }

    /// The moment map `Φ = ψ^{(1)}` (`d = 1` for `PGL₂`).
    pub fn phi(&self) -> KScalar {
        self.psi(1)
    }

    /// `a · g = π(x₋(−a) g)`.
    pub fn ga_action(&self, a: &KScalar) -> Result<Rank1Point> {
        let s = a.neg();
        Rank1Point::normalize(
            self.lambda,
            self.a.clone(),
            self.b.clone(),
            self.c.add(&self.a.scale(&s)),
            self.d.add(&self.b.scale(&s)),
        )
    }

    /// `ξ(g) = r(ψ^{(1)}, ψ^{(2)}/ψ^{(1)})`.
    pub fn xi(&self) -> Result<W0AlphaPoint> {
        let p1 = self.psi(1);
        let inv = p1.inv().ok_or_else(|| Error::Locus("Φ vanishes; ξ undefined".into()))?;
        W0AlphaPoint::new(0, p1, self.psi(2).mul(&inv))
    }

    /// `f(g) = (ξ(g), π(ξ(g)⁻¹ g))`.
    pub fn f(&self) -> Result<(W0AlphaPoint, Rank1Point)> {
        let x = self.xi()?;
        let binv = x.b.inv().unwrap();
        let tc = UPoly::t().sub(&UPoly::constant(x.c.clone()));
        // [[t − c, −b], [b⁻¹, 0]] · [[A, B], [C, D]]
        let a = tc.mul(&self.a).sub(&self.c.scale(&x.b));
        let b = tc.mul(&self.b).sub(&self.d.scale(&x.b));
        let c = self.a.scale(&binv);
        let d = self.b.scale(&binv);
        Ok((x, Rank1Point::normalize(self.lambda, a, b, c, d)?))
    }

    /// `π(t^{−η₁} g t^{−η₂})` with `t^{−η} = diag(t^k, 1)`, `k ≥ 0`.
    pub fn shift(&self, k1: u32, k2: u32) -> Result<Rank1Point> {
        Rank1Point::normalize(
            self.lambda + k1 + k2,
            self.a.shift((k1 + k2) as usize),
            self.b.shift(k1 as usize),
            self.c.shift(k2 as usize),
            self.d.clone(),
        )
    }

    /// The closed-form reduction `b' = b(t − b^{(2)} + d^{(1)}) − d`, `d' = b`,
    /// valid when `Φ = b^{(1)} = 1`; `c'` and `a'` are completed by `det = t^λ`.
    pub fn rank1_reduce(&self) -> Result<Rank1Point> {
        let m = self.m() as i64;
        if m == 0 || !self.b.coeff(m - 1).is_one() {
            return Err(Error::Precondition("rank-one reduction needs b^(1) = 1".into()));
        }
        let b2 = self.b.coeff(m - 2);
        let d1 = self.d.coeff(m - 1);
        let factor = UPoly::t().sub(&UPoly::constant(b2)).add(&UPoly::constant(d1));
        let b_new = self.b.mul(&factor).sub(&self.d);
        let d_new = self.b.clone();
        let (_, c_new) = self.a.divrem(&d_new)?;
        let p = Rank1Point::from_bcd(self.lambda, b_new, c_new, d_new)?;
        if !p.minor_degree_check() {
            return Err(Error::Internal(format!("reduced point {p:?} violates the slice constraints")));
        }
        Ok(p)
    }

    /// The membership constraints: `d` monic of degree `m`, `deg b, deg c < m`, `det = t^λ`.
    pub fn minor_degree_check(&self) -> bool {
        let Some(m) = self.d.degree() else { return false };
        self.d.is_monic()
            && self.b.degree().is_none_or(|k| k < m)
            && self.c.degree().is_none_or(|k| k < m)
            && self.det() == t_pow_poly(self.lambda)
    }

    /// A seeded random point of `W^λ_{λ−2m}` with `Φ ≠ 0` (or `Φ = 1` if `phi_one`).
    pub fn random<R: Rng>(lambda: u32, m: u32, phi_one: bool, rng: &mut R) -> Self {
        if m == 0 {
            return Rank1Point::torus(lambda);
        }
        loop {
            let mut d: Vec<KScalar> = (0..m).map(|_| random_scalar(rng)).collect();
            d.push(KScalar::one());
            let d = UPoly::from_coeffs(d);
            let mut b: Vec<KScalar> = (0..m - 1).map(|_| random_scalar(rng)).collect();
            let lead = if phi_one { KScalar::one() } else { random_nonzero_scalar(rng) };
            b.push(lead);
            let b = UPoly::from_coeffs(b);
            let (g, s, _) = b.gcdext(&d);
            if g.degree() != Some(0) {
                continue;
            }
            // bc ≡ −t^λ (mod d)
            let (_, c) = t_pow_poly(lambda).mul(&s).neg().divrem(&d).unwrap();
            if let Ok(p) = Rank1Point::from_bcd(lambda, b, c, d) {
                return p;
            }
        }
    }
}

/// A small random rational `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 3`.
pub fn random_scalar<R: Rng>(rng: &mut R) -> KScalar {
    KScalar::from_rat(Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
}

/// As [`random_scalar`] but never zero.
pub fn random_nonzero_scalar<R: Rng>(rng: &mut R) -> KScalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Chart variables: `b` and `c` on `W⁰_{−α_i^∨}`.
pub const VAR_B: u32 = 0;
pub const VAR_C: u32 = 1;
const VAR_U: u32 = 2;
const VAR_V: u32 = 3;

fn poly_derivative(p: &MPoly, v: u32) -> MPoly {
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        let (e, rest) = m.split_var(v);
        if e == 0 {
            continue;
        }
        let mono = rest.mul(&yslice_exact::Mono::var_pow(v, e - 1));
        out = out.add(&MPoly::monomial(mono, c.scale(&Rat::from_int(e as i64))));
    }
    out
}

/// `∂F/∂v` for a rational function.
pub fn ratfn_derivative(f: &RatFn, v: u32) -> RatFn {
    let n = f.num().clone();
    let d = f.den();
    let num = poly_derivative(&n, v).mul(&d).sub(&n.mul(&poly_derivative(&d, v)));
    RatFn::new(num, d.mul(&d)).expect("nonzero denominator")
}

/// Matrix coefficients of `r(b, c)(w) = [[0, b], [−b^{−1}, w − c]]` in the variable `w`.
fn chart_matrix(w: u32) -> [[RatFn; 2]; 2] {
    let b = RatFn::var(VAR_B);
    let binv = RatFn::one().div(&b).unwrap();
    [[RatFn::zero(), b], [binv.neg(), RatFn::var(w).sub(&RatFn::var(VAR_C))]]
}

/// Solves the r-matrix equation `(u − v){T(u) ⊗, T(v)} = [Ω, T(u) ⊗ T(v)]` on the chart
/// for the single unknown `{b, c}`, where `Ω = d(e⊗f + f⊗e + ½h⊗h)` is the Casimir tensor
/// of the invariant form with `(e, f) = d^{−1}`.
///
/// Every entry pair gives one equation; they must all agree.
pub fn chart_structure_function(d: i64) -> Result<RatFn> {
    let tu = chart_matrix(VAR_U);
    let tv = chart_matrix(VAR_V);
    let u_minus_v = RatFn::var(VAR_U).sub(&RatFn::var(VAR_V));
    let dk = KScalar::from_int(d);
    let mut solution: Option<RatFn> = None;
    let idx = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    for &(i, j) in &idx {
        for &(k, l) in &idx {
            // {T_ij(u), T_kl(v)} = (∂_b T_ij ∂_c T_kl − ∂_c T_ij ∂_b T_kl) {b, c}
            let coef = ratfn_derivative(&tu[i][j], VAR_B)
                .mul(&ratfn_derivative(&tv[k][l], VAR_C))
                .sub(&ratfn_derivative(&tu[i][j], VAR_C).mul(&ratfn_derivative(&tv[k][l], VAR_B)))
                .mul(&u_minus_v);
            // [Ω, T₁T₂] with Ω = d(P − ½): the identity part commutes, and
            // (P T₁T₂ − T₁T₂ P)_{(i,k),(j,l)} = T_kj(u) T_il(v) − T_il(u) T_kj(v)
            let rhs = tu[k][j].mul(&tv[i][l]).sub(&tu[i][l].mul(&tv[k][j])).scale(&dk);
            if coef.is_zero() {
                if !rhs.is_zero() {
                    return Err(Error::Internal(format!("inconsistent bracket equation at ({i}{j}),({k}{l})")));
                }
                continue;
            }
            let val = rhs.div(&coef).unwrap();
            match &solution {
                None => solution = Some(val),
                Some(s) if *s == val => {}
                Some(s) => {
                    return Err(Error::Internal(format!("overdetermined bracket system disagrees: {s:?} vs {val:?}")))
                }
            }
        }
    }
    let s = solution.ok_or_else(|| Error::Internal("bracket system has no equations".into()))?;
    if s.num().vars().iter().chain(s.den().vars().iter()).any(|v| *v == VAR_U || *v == VAR_V) {
        return Err(Error::Internal(format!("{{b, c}} = {s:?} depends on the spectral parameters")));
    }
    Ok(s)
}

/// The Poisson bracket `{F, G}` of two functions of `(b, c)` on `W⁰_{−α_i^∨}`.
pub fn chart_bracket(f: &RatFn, g: &RatFn, d: i64) -> Result<RatFn> {
    let bc = chart_structure_function(d)?;
    let jac = ratfn_derivative(f, VAR_B)
        .mul(&ratfn_derivative(g, VAR_C))
        .sub(&ratfn_derivative(f, VAR_C).mul(&ratfn_derivative(g, VAR_B)));
    Ok(jac.mul(&bc))
}

/// The `G_a`-action on chart coordinates: `a · r(b, c) = r(b, c + d^{1/2} a b)`,
/// computed through the group action `π(x₋(−d^{1/2} a) r(b, c))` on `SL₂` loop matrices.
pub fn chart_ga_action(a: &KScalar, p: &W0AlphaPoint, d: u64, prec: i64) -> Result<W0AlphaPoint> {
    let g = pi_project(&r_point(2, 0, &p.b, &p.c)?, prec)?;
    let moved = ga_action(a, &g, 0, d, prec)?;
    let x = xi(&moved, 0)?;
    Ok(W0AlphaPoint { node: p.node, ..x })
}

fn eval_ratfn_dual(f: &RatFn, point: &BTreeMap<u32, DualScalar>) -> Result<DualScalar> {
    let num = dual_apply(f.num(), point);
    let den = dual_apply(&f.den(), point);
    Ok(num.mul(&den.inv().ok_or_else(|| Error::Locus("denominator vanishes at the sample".into()))?))
}

/// Compares the derivative of `f ∈ {b, c, bc, c²}` along `exp(−ε)` in the `G_a`-action
/// with `{Φ, f}` from [`chart_bracket`], at seeded rational sample points.
pub fn moment_map_flow_check<R: Rng>(d: u64, samples: usize, rng: &mut R) -> Result<Vec<CheckRecord>> {
    let b = RatFn::var(VAR_B);
    let c = RatFn::var(VAR_C);
    let phi = b.scale(&KScalar::inv_sqrt(d));
    let funcs = [("b", b.clone()), ("c", c.clone()), ("bc", b.mul(&c)), ("c^2", c.mul(&c))];
    let mut out = Vec::new();
    for (name, f) in funcs {
        let bracket = chart_bracket(&phi, &f, d as i64)?;
        let mut ok = true;
        let mut witness = None;
        for _ in 0..samples {
            let p = W0AlphaPoint::new(0, random_nonzero_scalar(rng), random_scalar(rng))?;
            // velocity of the action at a = 1 (the chart action is affine in a)
            let moved = chart_ga_action(&KScalar::one(), &p, d, 8)?;
            let moved2 = chart_ga_action(&KScalar::from_int(2), &p, d, 8)?;
            let vb = moved.b.sub(&p.b);
            let vc = moved.c.sub(&p.c);
            if moved2.b.sub(&p.b) != vb.scale(&Rat::from_int(2)) || moved2.c.sub(&p.c) != vc.scale(&Rat::from_int(2)) {
                return Err(Error::Internal("G_a action is not affine in a on the chart".into()));
            }
            let mut pt = BTreeMap::new();
            pt.insert(VAR_B, DualScalar::new(p.b.clone(), vb.neg()));
            pt.insert(VAR_C, DualScalar::new(p.c.clone(), vc.neg()));
            let flow = eval_ratfn_dual(&f, &pt)?.infinitesimal;
            let mut vals = BTreeMap::new();
            vals.insert(VAR_B, DualScalar::constant(p.b.clone()));
            vals.insert(VAR_C, DualScalar::constant(p.c.clone()));
            let br = eval_ratfn_dual(&bracket, &vals)?.value;
            if flow != br {
                ok = false;
                witness = Some(format!("at b={}, c={}: flow {flow}, bracket {br}", p.b, p.c));
                break;
            }
        }
        let mut rec = CheckRecord::from_bool(
            "classical",
            format!("moment map flow d={d} f={name}"),
            ok,
            format!("{{Φ, {name}}} = {}", bracket.fmt_with(&|v| if v == VAR_B { "b".into() } else { "c".into() })),
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        out.push(rec);
    }
    Ok(out)
}

/// The symbol of `[−A^{(1)}, d^{1/2} E^{(1)}]` in the difference-free presentation
/// `A ↦ −d z∂`, `E ↦ z`: returns `κ` with `[−A, d^{1/2}E] = κ · d^{1/2}E`,
/// the quantum counterpart of `{c, b} = κ b`.
pub fn quantum_cross_oracle(d: i64) -> Result<KScalar> {
    let (a, e, _) = crate::coprod::dop_presentation(d, false);
    let b = e.scale(&KScalar::sqrt(d as u64));
    let lhs = a.neg().commutator(&b);
    // read κ off the z-coefficient
    let bz = b.terms().find(|((m, n), _)| *m == 0 && *n == 1).map(|(_, c)| c.clone()).unwrap();
    let lz = lhs.terms().find(|((m, n), _)| *m == 0 && *n == 1).map(|(_, c)| c.clone()).unwrap_or_default();
    let kappa = lz.mul(&bz.inv().unwrap());
    if lhs != b.scale(&kappa) {
        return Err(Error::Internal(format!("[−A, d^(1/2)E] = {lhs} is not proportional to E")));
    }
    Ok(kappa)
}
