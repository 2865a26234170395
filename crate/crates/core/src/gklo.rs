//! Difference-operator representations of shifted Yangians.
//!
//! The target algebra is generated by variables `w_{i,r}` and shift operators
//! `u_{i,r}^{±1}` with `u_{i,r}^{±1} f(w) = f(w_{i,r} ± d_i) u_{i,r}^{±1}`,
//! localized at `w_{i,r} − w_{i,s} + k d_i`.  Operators are stored as
//! `Σ_a f_a(w) u^a` with rational-function coefficients on the left.  Several
//! representations can share one variable space (as disjoint blocks), which
//! is how tensor products of representations are realized.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use yslice_exact::{KScalar, MPoly, Rat, RatFn, Ring};

use crate::cartan::{CartanDatum, Coweight, RootVec};
use crate::error::{Error, Result};
use crate::yangian::{a_series, relation_defect_in, GenKind, GenSym, NCElem, Relation, YangianCtx};

/// One variable `w_{i,r}` of a variable space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    /// Dynkin node `i` (zero-based).
    pub node: usize,
    /// Index `r` within the node (zero-based).
    pub index: usize,
    /// Which representation block the variable belongs to.
    pub block: usize,
    /// Shift step `d_i`.
    pub step: i64,
}

/// An ordered list of variables; variable `k` is polynomial variable `k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VarSpace {
    vars: Vec<VarInfo>,
}

impl VarSpace {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn info(&self, v: usize) -> &VarInfo {
        &self.vars[v]
    }

    fn push_block(&mut self, cartan: &CartanDatum, m: &[i64], block: usize) -> Vec<Vec<u32>> {
        let mut ids = Vec::new();
        for (i, &mi) in m.iter().enumerate() {
            let mut row = Vec::new();
            for r in 0..mi as usize {
                row.push(self.vars.len() as u32);
                self.vars.push(VarInfo { node: i, index: r, block, step: cartan.d(i) });
            }
            ids.push(row);
        }
        ids
    }

    /// Human-readable name of a variable, e.g. `w1_2` or `w1_2'` in block 1.
    pub fn name(&self, v: u32) -> String {
        let info = &self.vars[v as usize];
        format!("w{}_{}{}", info.node + 1, info.index + 1, "'".repeat(info.block))
    }
}

/// A difference operator `Σ_a f_a(w) u^a`.
#[derive(Clone)]
pub struct DiffOp {
    space: Arc<VarSpace>,
    terms: BTreeMap<Vec<i32>, RatFn>,
}

impl DiffOp {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        DiffOp { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        DiffOp::coeff(space, RatFn::one())
    }

    /// The multiplication operator by a rational function.
    pub fn coeff(space: &Arc<VarSpace>, f: RatFn) -> Self {
        DiffOp::term(space, vec![0; space.len()], f)
    }

    pub fn scalar(space: &Arc<VarSpace>, c: KScalar) -> Self {
        DiffOp::coeff(space, RatFn::from_kscalar(c))
    }

    /// `f(w) u^shift`.
    pub fn term(space: &Arc<VarSpace>, shift: Vec<i32>, f: RatFn) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(shift, f);
        }
        DiffOp { space: space.clone(), terms }
    }

    /// `u_v^{e}` for a single variable.
    pub fn shift_op(space: &Arc<VarSpace>, v: u32, e: i32) -> Self {
        let mut s = vec![0; space.len()];
        s[v as usize] = e;
        DiffOp::term(space, s, RatFn::one())
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &RatFn)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `u^0` if the operator has no other terms.
    pub fn as_coeff(&self) -> Option<RatFn> {
        match self.terms.len() {
            0 => Some(RatFn::zero()),
            1 => self.terms.get(&vec![0; self.space.len()]).cloned(),
            _ => None,
        }
    }

    fn insert(terms: &mut BTreeMap<Vec<i32>, RatFn>, k: Vec<i32>, f: RatFn) {
        if f.is_zero() {
            return;
        }
        match terms.get_mut(&k) {
            Some(g) => {
                let s = g.add(&f);
                if s.is_zero() {
                    terms.remove(&k);
                } else {
                    *g = s;
                }
            }
            None => {
                terms.insert(k, f);
            }
        }
    }

    pub fn add(&self, rhs: &DiffOp) -> DiffOp {
        let mut terms = self.terms.clone();
        for (k, f) in &rhs.terms {
            DiffOp::insert(&mut terms, k.clone(), f.clone());
        }
        DiffOp { space: self.space.clone(), terms }
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp { space: self.space.clone(), terms: self.terms.iter().map(|(k, f)| (k.clone(), f.neg())).collect() }
    }

    pub fn scale(&self, c: &KScalar) -> DiffOp {
        let mut terms = BTreeMap::new();
        for (k, f) in &self.terms {
            DiffOp::insert(&mut terms, k.clone(), f.scale(c));
        }
        DiffOp { space: self.space.clone(), terms }
    }

    /// `(f u^a)(g u^b) = f · g(w + a d) u^{a+b}`.
    pub fn mul(&self, rhs: &DiffOp) -> DiffOp {
        let mut terms = BTreeMap::new();
        for (b, g) in &rhs.terms {
            let mut shifted: HashMap<&Vec<i32>, RatFn> = HashMap::new();
            for (a, f) in &self.terms {
                let gs = shifted.entry(a).or_insert_with(|| {
                    let shifts: Vec<(u32, Rat)> = a
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| **e != 0)
                        .map(|(v, e)| (v as u32, Rat::from_int(*e as i64 * self.space.vars[v].step)))
                        .collect();
                    g.shift_vars(&shifts)
                });
                let k: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                DiffOp::insert(&mut terms, k, f.mul(gs));
            }
        }
        DiffOp { space: self.space.clone(), terms }
    }

    /// Root-lattice degrees of the terms restricted to one block: `u_{i,r}^{−1}` has degree `α_i`.
    pub fn block_grades(&self, block: usize, rank: usize) -> BTreeSet<RootVec> {
        self.terms
            .keys()
            .map(|k| {
                let mut g = RootVec::zero(rank);
                for (v, e) in k.iter().enumerate() {
                    let info = &self.space.vars[v];
                    if info.block == block {
                        g.0[info.node] -= *e as i64;
                    }
                }
                g
            })
            .collect()
    }
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |v: u32| self.space.name(v);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("({})", c.fmt_with(&name));
                for (v, e) in k.iter().enumerate() {
                    if *e != 0 {
                        s.push_str(&format!(" u[{}]^{}", name(v as u32), e));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for DiffOp {
    fn zero_like(&self) -> Self {
        DiffOp::zero(&self.space)
    }
    fn one_like(&self) -> Self {
        DiffOp::one(&self.space)
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        DiffOp::coeff(&self.space, RatFn::from_rat(r.clone()))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
    fn scaled(&self, r: &Rat) -> Self {
        self.scale(&KScalar::from_rat(r.clone()))
    }
}

/// Orientation of the Dynkin diagram used by the representation formulas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// Every edge points from the smaller to the larger node.
    #[default]
    Increasing,
    /// Every edge points from the larger to the smaller node.
    Decreasing,
}

impl Orientation {
    /// True if the edge between adjacent `from` and `to` points `from → to`.
    pub fn points(self, from: usize, to: usize) -> bool {
        match self {
            Orientation::Increasing => from < to,
            Orientation::Decreasing => from > to,
        }
    }
}

/// The data `(λ, μ, R)` of a truncated shifted Yangian representation.
#[derive(Clone, Debug)]
pub struct GkloConfig {
    pub cartan: CartanDatum,
    pub lambda: Coweight,
    pub mu: Coweight,
    /// `R_i`: a multiset of `λ_i` parameters per node.
    pub r_params: Vec<Vec<Rat>>,
    pub orientation: Orientation,
    /// Test fixture: negates every `E` image, which must break the relations.
    pub mutate_e_sign: bool,
}

impl GkloConfig {
    /// Validates and builds a configuration with the default orientation.
    pub fn new(cartan: CartanDatum, lambda: Coweight, mu: Coweight, r_params: Vec<Vec<Rat>>) -> Result<Self> {
        let n = cartan.rank();
        if lambda.rank() != n || mu.rank() != n || r_params.len() != n {
            return Err(Error::Index("representation data has the wrong rank".into()));
        }
        if !lambda.is_dominant() {
            return Err(Error::Dominance(format!("λ = {lambda} is not dominant")));
        }
        for i in 0..n {
            if r_params[i].len() as i64 != lambda.pairing(i) {
                return Err(Error::Precondition(format!(
                    "node {} has {} parameters but λ_{} = {}",
                    i + 1,
                    r_params[i].len(),
                    i + 1,
                    lambda.pairing(i)
                )));
            }
        }
        cartan.coroot_decomposition(&lambda, &mu)?;
        Ok(GkloConfig { cartan, lambda, mu, r_params, orientation: Orientation::default(), mutate_e_sign: false })
    }

    /// `λ = 0` with no parameters.
    pub fn zero_lambda(cartan: CartanDatum, mu: Coweight) -> Result<Self> {
        let n = cartan.rank();
        GkloConfig::new(cartan, Coweight::zero(n), mu, vec![Vec::new(); n])
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    /// Enables the sign-corruption fixture used to test failure reporting.
    pub fn with_e_sign_mutation(mut self, on: bool) -> Self {
        self.mutate_e_sign = on;
        self
    }

    /// `m` with `λ − μ = Σ m_i α_i^∨`.
    pub fn m(&self) -> Vec<i64> {
        self.cartan.coroot_decomposition(&self.lambda, &self.mu).expect("validated at construction")
    }
}

/// A representation `Φ_μ^λ(R)` realized on one block of a variable space.
pub struct GkloRep {
    cfg: GkloConfig,
    m: Vec<i64>,
    space: Arc<VarSpace>,
    ids: Vec<Vec<u32>>,
    block: usize,
    h_cache: Mutex<HashMap<usize, Vec<MPoly>>>,
}

impl fmt::Debug for GkloRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GkloRep").field("cfg", &self.cfg).field("m", &self.m).field("block", &self.block).finish()
    }
}

impl GkloRep {
    /// A representation on its own variable space.
    pub fn new(cfg: GkloConfig) -> Result<Self> {
        let mut reps = GkloRep::on_shared_space(vec![cfg])?;
        Ok(reps.pop().unwrap())
    }

    /// Several representations on disjoint blocks of one variable space; their
    /// images commute, so products realize tensor products.
    pub fn on_shared_space(cfgs: Vec<GkloConfig>) -> Result<Vec<Self>> {
        let mut space = VarSpace::default();
        let mut ids = Vec::new();
        for (b, cfg) in cfgs.iter().enumerate() {
            ids.push(space.push_block(&cfg.cartan, &cfg.m(), b));
        }
        let space = Arc::new(space);
        Ok(cfgs
            .into_iter()
            .zip(ids)
            .enumerate()
            .map(|(b, (cfg, ids))| GkloRep {
                m: cfg.m(),
                cfg,
                space: space.clone(),
                ids,
                block: b,
                h_cache: Mutex::new(HashMap::new()),
            })
            .collect())
    }

    pub fn config(&self) -> &GkloConfig {
        &self.cfg
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cfg.cartan
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// The polynomial variable of `w_{i,r}` (zero-based `r`).
    pub fn var(&self, i: usize, r: usize) -> u32 {
        self.ids[i][r]
    }

    pub fn one(&self) -> DiffOp {
        DiffOp::one(&self.space)
    }

    fn w(&self, i: usize, r: usize) -> MPoly {
        MPoly::var(self.var(i, r))
    }

    /// `W_j(x)` for a polynomial argument `x`.
    fn big_w(&self, j: usize, x: &MPoly) -> MPoly {
        let mut acc = MPoly::one();
        for t in 0..self.m[j] as usize {
            acc = acc.mul(&x.sub(&self.w(j, t)));
        }
        acc
    }

    /// `W_{i,r}(w_{i,r})` as a rational-function denominator.
    fn vandermonde_inv(&self, i: usize, r: usize) -> Result<RatFn> {
        // kept as a product of linear factors so that sums find common denominators
        let mut acc = RatFn::one();
        for s in 0..self.m[i] as usize {
            if s != r {
                let f = RatFn::new(MPoly::one(), self.w(i, r).sub(&self.w(i, s)))
                    .ok_or_else(|| Error::Internal("zero Vandermonde factor".into()))?;
                acc = acc.mul(&f);
            }
        }
        Ok(acc)
    }

    fn edge_shift(&self, i: usize, j: usize, s: i64) -> Rat {
        let c = self.cartan();
        Rat::new(c.d(i) * c.a(i, j), 2) + Rat::from_int(s * c.d(j))
    }

    fn e_image(&self, i: usize, q: i64) -> Result<DiffOp> {
        let c = self.cartan();
        let mut total = DiffOp::zero(&self.space);
        for r in 0..self.m[i] as usize {
            let wr = self.w(i, r);
            let mut num = wr.pow((q - 1) as u32);
            for p in &self.cfg.r_params[i] {
                num = num.mul(&wr.sub(&MPoly::from_rat(p.clone())));
            }
            for j in 0..c.rank() {
                if j == i || c.a(j, i) == 0 || !self.cfg.orientation.points(j, i) {
                    continue;
                }
                for s in 1..=(-c.a(j, i)) {
                    let arg = wr.sub(&MPoly::from_rat(self.edge_shift(i, j, s)));
                    num = num.mul(&self.big_w(j, &arg));
                }
            }
            let f = RatFn::from_poly(num).mul(&self.vandermonde_inv(i, r)?);
            total = total.add(&DiffOp::shift_op(&self.space, self.var(i, r), -1).left_mul(&f));
        }
        Ok(total.scale(&KScalar::inv_sqrt(c.d(i) as u64).neg()))
    }

    fn f_image(&self, i: usize, q: i64) -> Result<DiffOp> {
        let c = self.cartan();
        let d = Rat::from_int(c.d(i));
        let mut total = DiffOp::zero(&self.space);
        for r in 0..self.m[i] as usize {
            let wr = self.w(i, r);
            let mut num = wr.add(&MPoly::from_rat(d.clone())).pow((q - 1) as u32);
            for j in 0..c.rank() {
                if j == i || c.a(j, i) == 0 || !self.cfg.orientation.points(i, j) {
                    continue;
                }
                for s in 1..=(-c.a(j, i)) {
                    let arg = wr.sub(&MPoly::from_rat(self.edge_shift(i, j, s) - d.clone()));
                    num = num.mul(&self.big_w(j, &arg));
                }
            }
            let f = RatFn::from_poly(num).mul(&self.vandermonde_inv(i, r)?);
            total = total.add(&DiffOp::shift_op(&self.space, self.var(i, r), 1).left_mul(&f));
        }
        Ok(total.scale(&KScalar::inv_sqrt(c.d(i) as u64)))
    }

    /// Coefficients `H_i^{(s_i + k)}` for `0 ≤ k ≤ order` of the series image of `H_i(u)`,
    /// as polynomials in the variables.
    pub fn h_series(&self, i: usize, order: usize) -> Result<Vec<MPoly>> {
        {
            let cache = self.h_cache.lock().unwrap();
            if let Some(v) = cache.get(&i) {
                if v.len() > order {
                    return Ok(v[..=order].to_vec());
                }
            }
        }
        let c = self.cartan();
        let len = order + 1;
        // factors (1 − a x)^{±1} with a linear in w
        let mut num_factors: Vec<MPoly> = Vec::new();
        let mut den_factors: Vec<MPoly> = Vec::new();
        for p in &self.cfg.r_params[i] {
            num_factors.push(MPoly::from_rat(p.clone()));
        }
        for j in 0..c.rank() {
            if j == i || c.a(j, i) == 0 {
                continue;
            }
            for s in 1..=(-c.a(j, i)) {
                let sh = MPoly::from_rat(self.edge_shift(i, j, s));
                for t in 0..self.m[j] as usize {
                    num_factors.push(sh.add(&self.w(j, t)));
                }
            }
        }
        for t in 0..self.m[i] as usize {
            den_factors.push(self.w(i, t));
            den_factors.push(self.w(i, t).add(&MPoly::from_int(c.d(i))));
        }
        let degree = num_factors.len() as i64 - den_factors.len() as i64;
        if degree != self.cfg.mu.pairing(i) {
            return Err(Error::Internal(format!(
                "H_{} image has u-degree {degree}, expected {}",
                i + 1,
                self.cfg.mu.pairing(i)
            )));
        }
        let mut series = vec![MPoly::zero(); len];
        series[0] = MPoly::one();
        for a in &num_factors {
            // multiply by (1 − a x)
            for k in (1..len).rev() {
                series[k] = series[k].sub(&series[k - 1].mul(a));
            }
        }
        for a in &den_factors {
            // multiply by 1/(1 − a x) = Σ a^k x^k: s_k ← s_k + a s_{k−1} (in increasing k)
            for k in 1..len {
                let t = series[k - 1].mul(a);
                series[k] = series[k].add(&t);
            }
        }
        self.h_cache.lock().unwrap().insert(i, series.clone());
        Ok(series)
    }

    /// `Φ(g)` for a generator of `Y_μ`.
    pub fn image(&self, g: GenSym) -> Result<DiffOp> {
        let n = self.cartan().rank();
        if g.node >= n {
            return Err(Error::Index(format!("{g}: node out of range")));
        }
        match g.kind {
            GenKind::E | GenKind::F if g.sup < 1 => Err(Error::Precondition(format!("{g}: superscripts start at 1"))),
            GenKind::E if self.cfg.mutate_e_sign => Ok(self.e_image(g.node, g.sup)?.neg()),
            GenKind::E => self.e_image(g.node, g.sup),
            GenKind::F => self.f_image(g.node, g.sup),
            GenKind::H => {
                let s = -self.cfg.mu.pairing(g.node);
                if g.sup < s {
                    Ok(DiffOp::zero(&self.space))
                } else {
                    let k = (g.sup - s) as usize;
                    let ser = self.h_series(g.node, k)?;
                    Ok(DiffOp::coeff(&self.space, RatFn::from_poly(ser[k].clone())))
                }
            }
        }
    }

    /// `Φ(x)` for a symbolic element of `Y_μ`.
    pub fn image_elem(&self, x: &NCElem) -> Result<DiffOp> {
        let one = self.one();
        let lift = |c: &KScalar| Ok(DiffOp::scalar(&self.space, c.clone()));
        x.map_letters(&one, &lift, &mut |g| self.image(g))
    }

    /// `Φ(LHS − RHS)` for a relation instance.
    pub fn relation_defect(&self, rel: &Relation) -> Result<DiffOp> {
        relation_defect_in(self.cartan(), rel, &self.one(), &mut |g| self.image(g))
    }

    /// The images of `A_i^{(r)}` for `0 ≤ r ≤ order`, solved from the `H` images.
    pub fn a_images(&self, order: usize) -> Result<Vec<Vec<DiffOp>>> {
        let one = self.one();
        a_series(self.cartan(), &self.cfg.lambda, &self.cfg.mu, &self.cfg.r_params, &one, order, &mut |i, k| {
            self.image(GenSym::h(i, -self.cfg.mu.pairing(i) + k))
        })
    }

    /// The expected images `(−1)^r e_r(w_{i,·})` of `A_i^{(r)}` (zero for `r > m_i`).
    pub fn a_expected(&self, i: usize, r: usize) -> DiffOp {
        let mut e = vec![MPoly::one()];
        for t in 0..self.m[i] as usize {
            let w = self.w(i, t);
            let mut next = vec![MPoly::zero(); e.len() + 1];
            for (k, ek) in e.iter().enumerate() {
                next[k] = next[k].add(ek);
                next[k + 1] = next[k + 1].add(&ek.mul(&w));
            }
            e = next;
        }
        let v = e.get(r).cloned().unwrap_or_else(MPoly::zero);
        let v = if r % 2 == 1 { v.neg() } else { v };
        DiffOp::coeff(&self.space, RatFn::from_poly(v))
    }

    /// Checks `Φ(A_i^{(r)}) = (−1)^r e_r(w_i)` for `r ≤ m_i + extra`.
    pub fn truncation_mismatches(&self, extra: usize) -> Result<Vec<(usize, usize)>> {
        let top = self.m.iter().copied().max().unwrap_or(0) as usize + extra;
        let a = self.a_images(top)?;
        let mut bad = Vec::new();
        for i in 0..self.m.len() {
            for r in 0..=(self.m[i] as usize + extra) {
                if a[i][r] != self.a_expected(i, r) {
                    bad.push((i, r));
                }
            }
        }
        Ok(bad)
    }

    /// True if every denominator factor has the form `w_{i,r} − w_{i,s} + k d_i`.
    pub fn denominators_admissible(&self, x: &DiffOp) -> bool {
        x.terms().all(|(_, f)| f.den_factors().all(|(p, _)| self.factor_admissible(p)))
    }

    fn factor_admissible(&self, p: &MPoly) -> bool {
        let vars = p.vars();
        if vars.len() != 2 || p.total_degree() != 1 {
            return false;
        }
        let (a, b) = (self.space.info(vars[0] as usize), self.space.info(vars[1] as usize));
        if a.node != b.node || a.block != b.block {
            return false;
        }
        let ca = p.coeff(&yslice_exact::Mono::var(vars[0]));
        let cb = p.coeff(&yslice_exact::Mono::var(vars[1]));
        if ca.add(&cb) != KScalar::zero() || !(ca.is_one() || cb.is_one()) {
            return false;
        }
        match p.constant_term().as_rat() {
            Some(k) => (k / Rat::from_int(a.step)).is_integer(),
            None => false,
        }
    }
}

impl DiffOp {
    /// `f · self` for a rational-function multiplier.
    pub fn left_mul(&self, f: &RatFn) -> DiffOp {
        let mut terms = BTreeMap::new();
        for (k, g) in &self.terms {
            DiffOp::insert(&mut terms, k.clone(), f.mul(g));
        }
        DiffOp { space: self.space.clone(), terms }
    }
}

/// A family of representations used as a zero-test oracle in higher rank.
pub struct OracleFamily {
    pub reps: Vec<GkloRep>,
}

impl OracleFamily {
    /// A family with the given `(λ, R)` data over a fixed shift `μ`.
    pub fn new(cartan: &CartanDatum, mu: &Coweight, data: Vec<(Coweight, Vec<Vec<Rat>>)>) -> Result<Self> {
        let reps = data
            .into_iter()
            .map(|(lambda, r)| GkloRep::new(GkloConfig::new(cartan.clone(), lambda, mu.clone(), r)?))
            .collect::<Result<_>>()?;
        Ok(OracleFamily { reps })
    }

    /// A default family: `λ = μ + Σ m_i α_i^∨` for each listed `m`, with
    /// parameters `R_i = {1, 2, …}` scaled by `seed`.
    pub fn standard(cartan: &CartanDatum, mu: &Coweight, ms: &[Vec<i64>], seed: i64) -> Result<Self> {
        let mut data = Vec::new();
        for m in ms {
            let lambda = mu.add(&cartan.coroot_combination(m));
            if !lambda.is_dominant() {
                continue;
            }
            let r = (0..cartan.rank())
                .map(|i| (0..lambda.pairing(i)).map(|k| Rat::new(seed * (k + 1) + i as i64, 3)).collect())
                .collect();
            data.push((lambda, r));
        }
        if data.is_empty() {
            return Err(Error::Precondition(format!("no dominant λ in the oracle family over μ = {mu}")));
        }
        OracleFamily::new(cartan, mu, data)
    }

    /// The same family with every representation rebuilt in orientation `o`.
    pub fn with_orientation(&self, o: Orientation) -> Result<Self> {
        let reps = self.reps.iter().map(|r| GkloRep::new(r.config().clone().with_orientation(o))).collect::<Result<_>>()?;
        Ok(OracleFamily { reps })
    }

    /// The orientation with the fewest edges pointing into node `i`, which keeps
    /// the coefficients of the `E_i` image small.
    pub fn lean_orientation(cartan: &CartanDatum, i: usize) -> Orientation {
        let n = cartan.rank();
        let below = (0..i).filter(|&j| cartan.a(i, j) != 0).count();
        let above = (i + 1..n).filter(|&j| cartan.a(i, j) != 0).count();
        if below <= above {
            Orientation::Increasing
        } else {
            Orientation::Decreasing
        }
    }

    /// True if `x` maps to zero in every representation of the family.
    pub fn is_zero(&self, x: &NCElem) -> Result<bool> {
        for rep in &self.reps {
            if !rep.image_elem(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Zero test in `Y_μ`: exact normal form in rank one, the oracle family otherwise.
pub fn is_zero_in(ctx: &YangianCtx, oracle: Option<&OracleFamily>, x: &NCElem) -> Result<bool> {
    if ctx.rank() == 1 {
        return ctx.is_zero_a1(x);
    }
    match oracle {
        Some(o) => o.is_zero(x),
        None => Err(Error::Precondition("higher-rank zero test needs an oracle family".into())),
    }
}
