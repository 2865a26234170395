//! Symbolic elements of the Cartan-doubled and shifted Yangians.
//!
//! Elements are finite sums of words in the generators `E_i^{(q)}`,
//! `F_i^{(q)}`, `H_i^{(p)}` with exact coefficients.  The straightening engine
//! rewrites words into block order `E…F…H`: E–F, H–E, H–F and H–H swaps have
//! closed forms in every rank, and same-node E–E and F–F swaps are resolved by
//! the superscript-gap recursion.  In rank one this is a complete normal form
//! onto ordered PBW monomials; in higher rank words mixing different nodes in
//! the E or F block are left as they are, and equality is decided through a
//! representation oracle instead.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use yslice_exact::{KScalar, Rat, Ring};

use crate::cartan::{CartanDatum, Coweight, RootVec};
use crate::error::{Error, Result};

/// Generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    E,
    F,
    H,
}

impl GenKind {
    fn letter(self) -> char {
        match self {
            GenKind::E => 'E',
            GenKind::F => 'F',
            GenKind::H => 'H',
        }
    }
}

/// A generator `X_i^{(r)}` with a zero-based node index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSym {
    pub kind: GenKind,
    pub node: usize,
    pub sup: i64,
}

impl GenSym {
    pub fn e(node: usize, sup: i64) -> Self {
        GenSym { kind: GenKind::E, node, sup }
    }
    pub fn f(node: usize, sup: i64) -> Self {
        GenSym { kind: GenKind::F, node, sup }
    }
    pub fn h(node: usize, sup: i64) -> Self {
        GenSym { kind: GenKind::H, node, sup }
    }

    fn with_sup(self, sup: i64) -> Self {
        GenSym { sup, ..self }
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({})", self.kind.letter(), self.node + 1, self.sup)
    }
}

/// A word in the generators.
pub type Word = Vec<GenSym>;

/// A finite linear combination of words with `KScalar` coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct NCElem {
    terms: BTreeMap<Word, KScalar>,
}

impl NCElem {
    pub fn zero() -> Self {
        NCElem::default()
    }

    pub fn one() -> Self {
        NCElem::scalar(KScalar::one())
    }

    pub fn scalar(c: KScalar) -> Self {
        NCElem::monomial(Vec::new(), c)
    }

    pub fn from_rat(r: Rat) -> Self {
        NCElem::scalar(KScalar::from_rat(r))
    }

    pub fn gen(g: GenSym) -> Self {
        NCElem::monomial(vec![g], KScalar::one())
    }

    pub fn monomial(w: Word, c: KScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCElem { terms }
    }

    /// Builds an element from `(word, coefficient)` pairs, merging duplicates.
    pub fn from_terms(it: impl IntoIterator<Item = (Word, KScalar)>) -> Self {
        let mut x = NCElem::zero();
        for (w, c) in it {
            x.add_term(w, &c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &KScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of a word.
    pub fn coeff(&self, w: &[GenSym]) -> KScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, w: Word, c: &KScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                let v = o.get().add(c);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &NCElem) -> NCElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &NCElem) -> NCElem {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NCElem {
        NCElem { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &KScalar) -> NCElem {
        if c.is_zero() {
            return NCElem::zero();
        }
        NCElem { terms: self.terms.iter().map(|(w, k)| (w.clone(), k.mul(c))).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> NCElem {
        self.scale(&KScalar::from_rat(r.clone()))
    }

    /// Concatenation product.
    pub fn mul(&self, rhs: &NCElem) -> NCElem {
        let mut acc: BTreeMap<Word, KScalar> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                let e = acc.entry(w).or_default();
                *e = e.add(&c1.mul(c2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        NCElem { terms: acc }
    }

    /// `[self, rhs]`.
    pub fn bracket(&self, rhs: &NCElem) -> NCElem {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Largest word length.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Largest superscript of an E or F letter.
    pub fn max_sup(&self) -> i64 {
        self.terms.keys().flat_map(|w| w.iter().map(|g| g.sup)).max().unwrap_or(0)
    }

    /// Applies `f` letter by letter, multiplying the images of each word;
    /// `lift` maps coefficients into the target ring.
    pub fn map_letters<R: Ring>(
        &self,
        one: &R,
        lift: &dyn Fn(&KScalar) -> Result<R>,
        f: &mut dyn FnMut(GenSym) -> Result<R>,
    ) -> Result<R> {
        let mut total = one.zero_like();
        let mut cache: HashMap<GenSym, R> = HashMap::new();
        for (w, c) in &self.terms {
            let mut acc = lift(c)?;
            for g in w {
                if acc.is_zero() {
                    break;
                }
                let img = match cache.get(g) {
                    Some(v) => v.clone(),
                    None => {
                        let v = f(*g)?;
                        cache.insert(*g, v.clone());
                        v
                    }
                };
                acc = acc.times(&img);
            }
            total = total.plus(&acc);
        }
        Ok(total)
    }

    /// Relabels every letter.
    pub fn map_gens(&self, f: &mut dyn FnMut(GenSym) -> Result<GenSym>) -> Result<NCElem> {
        let mut out = NCElem::zero();
        for (w, c) in &self.terms {
            let w2: Result<Word> = w.iter().map(|g| f(*g)).collect();
            out.add_term(w2?, c);
        }
        Ok(out)
    }
}

impl fmt::Display for NCElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<String> = w.iter().map(|g| g.to_string()).collect();
            if w.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", word.join(" "))?;
            } else {
                write!(f, "({c}) {}", word.join(" "))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for NCElem {
    fn zero_like(&self) -> Self {
        NCElem::zero()
    }
    fn one_like(&self) -> Self {
        NCElem::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Self {
        NCElem::from_rat(r.clone())
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
        self.scale_rat(r)
    }
}

/// The shifted-Yangian context `Y_μ` with superscript cap `N` and word cap `L`.
#[derive(Clone, Debug)]
pub struct YangianCtx {
    pub cartan: CartanDatum,
    pub mu: Coweight,
    pub cap_n: i64,
    pub cap_l: usize,
}

/// One relation instance of the defining presentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `[H_i^{(p)}, H_j^{(q)}] = 0`.
    HH { i: usize, j: usize, p: i64, q: i64 },
    /// `[E_i^{(p)}, F_j^{(q)}] = δ_ij H_i^{(p+q−1)}`.
    EF { i: usize, j: usize, p: i64, q: i64 },
    /// `[H_i^{(p+1)}, E_j^{(q)}] − [H_i^{(p)}, E_j^{(q+1)}] = (α_i·α_j/2)(H_i^{(p)}E_j^{(q)} + E_j^{(q)}H_i^{(p)})`.
    HE { i: usize, j: usize, p: i64, q: i64 },
    /// The F analogue of `HE` with the opposite sign.
    HF { i: usize, j: usize, p: i64, q: i64 },
    /// `[E_i^{(p+1)}, E_j^{(q)}] − [E_i^{(p)}, E_j^{(q+1)}] = (α_i·α_j/2)(E_i^{(p)}E_j^{(q)} + E_j^{(q)}E_i^{(p)})`.
    EE { i: usize, j: usize, p: i64, q: i64 },
    /// `[F_i^{(p+1)}, F_j^{(q)}] − [F_i^{(p)}, F_j^{(q+1)}] = −(α_i·α_j/2)(F_i^{(p)}F_j^{(q)} + F_j^{(q)}F_i^{(p)})`.
    FF { i: usize, j: usize, p: i64, q: i64 },
    /// `Σ_σ [E_i^{(p_σ1)}, [… [E_i^{(p_σN)}, E_j^{(q)}]…]] = 0` with `N = 1 − a_ij`.
    SerreE { i: usize, j: usize, ps: Vec<i64>, q: i64 },
    /// The F analogue of `SerreE`.
    SerreF { i: usize, j: usize, ps: Vec<i64>, q: i64 },
}

impl Relation {
    /// Short family name.
    pub fn family(&self) -> &'static str {
        match self {
            Relation::HH { .. } => "HH",
            Relation::EF { .. } => "EF",
            Relation::HE { .. } => "HE",
            Relation::HF { .. } => "HF",
            Relation::EE { .. } => "EE",
            Relation::FF { .. } => "FF",
            Relation::SerreE { .. } => "SerreE",
            Relation::SerreF { .. } => "SerreF",
        }
    }

    /// Largest superscript appearing in the instance.
    pub fn max_sup(&self) -> i64 {
        match self {
            Relation::HH { p, q, .. } => (*p).max(*q),
            Relation::EF { p, q, .. } => (*p).max(*q).max(p + q - 1),
            Relation::HE { p, q, .. } | Relation::HF { p, q, .. } => (p + 1).max(q + 1),
            Relation::EE { p, q, .. } | Relation::FF { p, q, .. } => (p + 1).max(q + 1),
            Relation::SerreE { ps, q, .. } | Relation::SerreF { ps, q, .. } => {
                ps.iter().copied().max().unwrap_or(0).max(*q)
            }
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::HH { i, j, p, q }
            | Relation::EF { i, j, p, q }
            | Relation::HE { i, j, p, q }
            | Relation::HF { i, j, p, q }
            | Relation::EE { i, j, p, q }
            | Relation::FF { i, j, p, q } => {
                write!(f, "{}[i={},j={},p={},q={}]", self.family(), i + 1, j + 1, p, q)
            }
            Relation::SerreE { i, j, ps, q } | Relation::SerreF { i, j, ps, q } => {
                let p: Vec<String> = ps.iter().map(|x| x.to_string()).collect();
                write!(f, "{}[i={},j={},p=({}),q={}]", self.family(), i + 1, j + 1, p.join(","), q)
            }
        }
    }
}

/// Evaluates `LHS − RHS` of a relation instance in any ring, given generator images.
///
/// `gen` must return the image of every generator it is asked for, including
/// the constant values of `H_i^{(p)}` at and below the shift.
pub fn relation_defect_in<R: Ring>(
    cartan: &CartanDatum,
    rel: &Relation,
    one: &R,
    gen: &mut dyn FnMut(GenSym) -> Result<R>,
) -> Result<R> {
    let half = |i: usize, j: usize| Rat::new(cartan.dot(i, j), 2);
    Ok(match rel {
        Relation::HH { i, j, p, q } => gen(GenSym::h(*i, *p))?.commutator(&gen(GenSym::h(*j, *q))?),
        Relation::EF { i, j, p, q } => {
            let c = gen(GenSym::e(*i, *p))?.commutator(&gen(GenSym::f(*j, *q))?);
            if i == j {
                c.minus(&gen(GenSym::h(*i, p + q - 1))?)
            } else {
                c
            }
        }
        Relation::HE { i, j, p, q } | Relation::HF { i, j, p, q } => {
            let (mk, sign): (fn(usize, i64) -> GenSym, i64) =
                if matches!(rel, Relation::HE { .. }) { (GenSym::e, 1) } else { (GenSym::f, -1) };
            let h1 = gen(GenSym::h(*i, p + 1))?;
            let h0 = gen(GenSym::h(*i, *p))?;
            let x0 = gen(mk(*j, *q))?;
            let x1 = gen(mk(*j, q + 1))?;
            let lhs = h1.commutator(&x0).minus(&h0.commutator(&x1));
            let sym = h0.times(&x0).plus(&x0.times(&h0));
            lhs.minus(&sym.scaled(&(half(*i, *j) * Rat::from_int(sign))))
        }
        Relation::EE { i, j, p, q } | Relation::FF { i, j, p, q } => {
            let (mk, sign): (fn(usize, i64) -> GenSym, i64) =
                if matches!(rel, Relation::EE { .. }) { (GenSym::e, 1) } else { (GenSym::f, -1) };
            let a1 = gen(mk(*i, p + 1))?;
            let a0 = gen(mk(*i, *p))?;
            let b0 = gen(mk(*j, *q))?;
            let b1 = gen(mk(*j, q + 1))?;
            let lhs = a1.commutator(&b0).minus(&a0.commutator(&b1));
            let sym = a0.times(&b0).plus(&b0.times(&a0));
            lhs.minus(&sym.scaled(&(half(*i, *j) * Rat::from_int(sign))))
        }
        Relation::SerreE { i, j, ps, q } | Relation::SerreF { i, j, ps, q } => {
            let mk: fn(usize, i64) -> GenSym = if matches!(rel, Relation::SerreE { .. }) { GenSym::e } else { GenSym::f };
            let n = (1 - cartan.a(*i, *j)) as usize;
            if ps.len() != n {
                return Err(Error::Precondition(format!("Serre relation for ({i},{j}) needs {n} superscripts")));
            }
            let base = gen(mk(*j, *q))?;
            let mut imgs = Vec::with_capacity(n);
            for p in ps {
                imgs.push(gen(mk(*i, *p))?);
            }
            let mut total = one.zero_like();
            for perm in permutations(n) {
                let mut acc = base.clone();
                for k in perm.iter().rev() {
                    acc = imgs[*k].commutator(&acc);
                }
                total = total.plus(&acc);
            }
            total
        }
    })
}

/// All permutations of `0..n` (lexicographic order).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Non-decreasing tuples of length `n` with entries in `1..=cap`.
fn multisets(n: usize, cap: i64) -> Vec<Vec<i64>> {
    fn rec(start: i64, cap: i64, cur: &mut Vec<i64>, n: usize, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in start..=cap {
            cur.push(v);
            rec(v, cap, cur, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, cap, &mut Vec::new(), n, &mut out);
    out
}

/// Every nontrivial relation instance of `Y_μ` whose superscripts are at most `cap`.
///
/// H-superscripts below the shift are constants, so HE/HF instances start at
/// `p = −⟨μ, α_i⟩`; EF instances may produce `H^{(p+q−1)}` above `cap`.
pub fn relation_instances(cartan: &CartanDatum, mu: &Coweight, cap: i64) -> Vec<Relation> {
    let n = cartan.rank();
    let s = |i: usize| -mu.pairing(i);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for p in (s(i) + 1)..=cap {
                for q in (s(j) + 1)..=cap {
                    if (i, p) < (j, q) {
                        out.push(Relation::HH { i, j, p, q });
                    }
                }
            }
            for p in 1..=cap {
                for q in 1..=cap {
                    out.push(Relation::EF { i, j, p, q });
                }
            }
            for p in s(i)..cap {
                for q in 1..cap {
                    out.push(Relation::HE { i, j, p, q });
                    out.push(Relation::HF { i, j, p, q });
                }
            }
            for p in 1..cap {
                for q in 1..cap {
                    out.push(Relation::EE { i, j, p, q });
                    out.push(Relation::FF { i, j, p, q });
                }
            }
            if i != j {
                let nn = (1 - cartan.a(i, j)) as usize;
                for ps in multisets(nn, cap) {
                    for q in 1..=cap {
                        out.push(Relation::SerreE { i, j, ps: ps.clone(), q });
                        out.push(Relation::SerreF { i, j, ps: ps.clone(), q });
                    }
                }
            }
        }
    }
    out
}

/// Coefficient lift for rings that only admit rational scalars.
pub fn rational_lift<R: Ring>(one: &R) -> impl Fn(&KScalar) -> Result<R> + '_ {
    move |c: &KScalar| {
        let r = c
            .as_rat()
            .ok_or_else(|| Error::Precondition(format!("coefficient {c} is not rational")))?;
        Ok(one.from_rat_like(&r))
    }
}

/// Common root-lattice degree of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootGrade {
    /// Every word has this degree.
    Pure(RootVec),
    /// Words of different degrees occur.
    Mixed,
    /// The zero element (no words).
    Empty,
}

/// Root-lattice degree: `E_i ↦ α_i`, `F_i ↦ −α_i`, `H_i ↦ 0`.
pub fn root_grading(x: &NCElem, rank: usize) -> RootGrade {
    let mut grade: Option<RootVec> = None;
    for (w, _) in x.terms() {
        let mut g = RootVec::zero(rank);
        for l in w {
            match l.kind {
                GenKind::E => g.0[l.node] += 1,
                GenKind::F => g.0[l.node] -= 1,
                GenKind::H => {}
            }
        }
        match &grade {
            None => grade = Some(g),
            Some(prev) if *prev != g => return RootGrade::Mixed,
            _ => {}
        }
    }
    match grade {
        None => RootGrade::Empty,
        Some(g) => RootGrade::Pure(g),
    }
}

/// Word-wise filtration degree `max_w Σ deg(letter)` with
/// `deg E_i^{(q)} = ⟨ν₁, α_i⟩ + q`, `deg F_i^{(q)} = ⟨ν₂, α_i⟩ + q`,
/// `deg H_i^{(p)} = ⟨ν₁+ν₂, α_i⟩ + p`.  `None` for the zero element.
pub fn filtration_degree(x: &NCElem, nu1: &Coweight, nu2: &Coweight) -> Option<i64> {
    x.terms()
        .map(|(w, _)| {
            w.iter()
                .map(|l| match l.kind {
                    GenKind::E => nu1.pairing(l.node) + l.sup,
                    GenKind::F => nu2.pairing(l.node) + l.sup,
                    GenKind::H => nu1.pairing(l.node) + nu2.pairing(l.node) + l.sup,
                })
                .sum::<i64>()
        })
        .max()
}

type Expansion = Vec<(Word, KScalar)>;

/// Memoized swap expansions used by the straightening engine.
struct Straightener<'a> {
    ctx: &'a YangianCtx,
    memo_he: HashMap<(GenKind, usize, usize, i64, i64), Expansion>,
    memo_ee: HashMap<(GenKind, usize, i64, i64), Expansion>,
}

impl<'a> Straightener<'a> {
    fn new(ctx: &'a YangianCtx) -> Self {
        Straightener { ctx, memo_he: HashMap::new(), memo_ee: HashMap::new() }
    }

    fn check(&self, g: GenSym) -> Result<()> {
        if g.sup > self.ctx.cap_n {
            return Err(Error::CapOverflow(format!("{g} exceeds superscript cap {}", self.ctx.cap_n)));
        }
        Ok(())
    }

    /// `[H_i^{(p)}, X_j^{(q)}]` for `X ∈ {E, F}` as a sum of words `X_j^{(a)} H_i^{(b)}`.
    fn h_swap(&mut self, kind: GenKind, i: usize, j: usize, p: i64, q: i64) -> Result<Expansion> {
        let s = self.ctx.s(i);
        if p <= s {
            return Ok(Vec::new());
        }
        let key = (kind, i, j, p, q);
        if let Some(v) = self.memo_he.get(&key) {
            return Ok(v.clone());
        }
        let sign = if kind == GenKind::E { 1 } else { -1 };
        let c = KScalar::from_rat(Rat::new(sign * self.ctx.cartan.dot(i, j), 2));
        let x = GenSym { kind, node: j, sup: q };
        self.check(x.with_sup(q + 1))?;
        // C(p, q) = C(p−1, q+1) + 2c X^q H^{p−1} + c C(p−1, q)
        let mut out: BTreeMap<Word, KScalar> = BTreeMap::new();
        for (w, k) in self.h_swap(kind, i, j, p - 1, q + 1)? {
            let e = out.entry(w).or_default();
            *e = e.add(&k);
        }
        {
            let w = self.ctx.reduce_word(vec![x, GenSym::h(i, p - 1)]);
            if let Some(w) = w {
                let e = out.entry(w).or_default();
                *e = e.add(&c.add(&c));
            }
        }
        for (w, k) in self.h_swap(kind, i, j, p - 1, q)? {
            let e = out.entry(w).or_default();
            *e = e.add(&k.mul(&c));
        }
        let v: Expansion = out.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        self.memo_he.insert(key, v.clone());
        Ok(v)
    }

    /// `[X_i^{(p)}, X_i^{(q)}]` for `p > q` and `X ∈ {E, F}`; the result may
    /// still contain out-of-order pairs with a smaller superscript gap.
    fn same_swap(&mut self, kind: GenKind, i: usize, p: i64, q: i64) -> Result<Expansion> {
        debug_assert!(p > q);
        let key = (kind, i, p, q);
        if let Some(v) = self.memo_ee.get(&key) {
            return Ok(v.clone());
        }
        let sign = if kind == GenKind::E { 1 } else { -1 };
        let c = KScalar::from_rat(Rat::new(sign * self.ctx.cartan.dot(i, i), 2));
        let x = |r: i64| GenSym { kind, node: i, sup: r };
        let v = if p == q + 1 {
            // K(q+1, q) = c (X^q)²
            vec![(vec![x(q), x(q)], c)]
        } else {
            // K(p, q) = K(p−1, q+1) + c (X^{p−1} X^q + X^q X^{p−1})
            let mut out: BTreeMap<Word, KScalar> = BTreeMap::new();
            if p - 1 > q + 1 {
                for (w, k) in self.same_swap(kind, i, p - 1, q + 1)? {
                    let e = out.entry(w).or_default();
                    *e = e.add(&k);
                }
            }
            for w in [vec![x(p - 1), x(q)], vec![x(q), x(p - 1)]] {
                let e = out.entry(w).or_default();
                *e = e.add(&c);
            }
            out.into_iter().filter(|(_, k)| !k.is_zero()).collect()
        };
        self.memo_ee.insert(key, v.clone());
        Ok(v)
    }

    /// Replacement for the adjacent pair `x y` (out of order) as `y x + [x, y]`.
    fn swap(&mut self, x: GenSym, y: GenSym) -> Result<Expansion> {
        let mut out: Expansion = vec![(vec![y, x], KScalar::one())];
        use GenKind::*;
        match (x.kind, y.kind) {
            (F, E) => {
                if x.node == y.node {
                    let h = GenSym::h(x.node, x.sup + y.sup - 1);
                    self.check(h)?;
                    if let Some(w) = self.ctx.reduce_word(vec![h]) {
                        out.push((w, KScalar::one().neg()));
                    }
                }
            }
            (H, E) | (H, F) => out.extend(self.h_swap(y.kind, x.node, y.node, x.sup, y.sup)?),
            (H, H) => {}
            (E, E) | (F, F) => out.extend(self.same_swap(x.kind, x.node, x.sup, y.sup)?),
            _ => unreachable!("swap called on an ordered pair"),
        }
        Ok(out)
    }

    fn violation(&self, w: &[GenSym]) -> Option<usize> {
        (0..w.len().saturating_sub(1)).find(|&k| out_of_order(w[k], w[k + 1]))
    }

    fn normalize(&mut self, x: &NCElem) -> Result<NCElem> {
        let mut out: BTreeMap<Word, KScalar> = BTreeMap::new();
        let mut current: BTreeMap<Word, KScalar> = BTreeMap::new();
        for (w, c) in x.terms() {
            for g in w {
                self.check(*g)?;
            }
            if let Some(w) = self.ctx.reduce_word(w.clone()) {
                let e = current.entry(w).or_default();
                *e = e.add(c);
            }
        }
        while !current.is_empty() {
            let mut next: BTreeMap<Word, KScalar> = BTreeMap::new();
            for (w, c) in current {
                if c.is_zero() {
                    continue;
                }
                match self.violation(&w) {
                    None => {
                        let e = out.entry(w).or_default();
                        *e = e.add(&c);
                    }
                    Some(k) => {
                        for (mid, k2) in self.swap(w[k], w[k + 1])? {
                            let mut nw = w[..k].to_vec();
                            nw.extend(mid);
                            nw.extend_from_slice(&w[k + 2..]);
                            if let Some(nw) = self.ctx.reduce_word(nw) {
                                let e = next.entry(nw).or_default();
                                *e = e.add(&c.mul(&k2));
                            }
                        }
                    }
                }
            }
            current = next;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(NCElem { terms: out })
    }
}

fn block(k: GenKind) -> u8 {
    match k {
        GenKind::E => 0,
        GenKind::F => 1,
        GenKind::H => 2,
    }
}

/// True if the adjacent pair `x y` is rewritten by the straightening engine.
fn out_of_order(x: GenSym, y: GenSym) -> bool {
    let (bx, by) = (block(x.kind), block(y.kind));
    if bx != by {
        return bx > by;
    }
    match x.kind {
        GenKind::H => (x.node, x.sup) > (y.node, y.sup),
        _ => x.node == y.node && x.sup > y.sup,
    }
}

impl YangianCtx {
    /// A context after validating rank and the cap requirement `N ≥ 2 + max_i(−⟨μ,α_i⟩)`.
    pub fn new(cartan: CartanDatum, mu: Coweight, cap_n: i64, cap_l: usize) -> Result<Self> {
        if mu.rank() != cartan.rank() {
            return Err(Error::Index(format!("shift {mu} has wrong rank for {}", cartan.name())));
        }
        let need = 2 + (0..cartan.rank()).map(|i| -mu.pairing(i)).max().unwrap_or(0);
        if cap_n < need {
            return Err(Error::CapOverflow(format!("superscript cap {cap_n} below required {need}")));
        }
        Ok(YangianCtx { cartan, mu, cap_n, cap_l })
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// `−⟨μ, α_i⟩`, the superscript at which `H_i` equals one.
    pub fn s(&self, i: usize) -> i64 {
        -self.mu.pairing(i)
    }

    /// Removes `H_i^{(s_i)} = 1` letters; `None` if an `H_i^{(p)}` with `p < s_i` occurs.
    pub fn reduce_word(&self, w: Word) -> Option<Word> {
        let mut out = Vec::with_capacity(w.len());
        for g in w {
            if g.kind == GenKind::H {
                let s = self.s(g.node);
                if g.sup < s {
                    return None;
                }
                if g.sup == s {
                    continue;
                }
            }
            out.push(g);
        }
        Some(out)
    }

    /// Applies the truncation conventions of `Y_μ` to every word.
    pub fn reduce(&self, x: &NCElem) -> NCElem {
        let mut out = NCElem::zero();
        for (w, c) in x.terms() {
            if let Some(w) = self.reduce_word(w.clone()) {
                out.add_term(w, c);
            }
        }
        out
    }

    /// The generator as an element of `Y_μ` (constants for `H` at or below the shift).
    pub fn gen(&self, g: GenSym) -> Result<NCElem> {
        if g.node >= self.rank() {
            return Err(Error::Index(format!("{g}: node out of range")));
        }
        if g.kind != GenKind::H && g.sup < 1 {
            return Err(Error::Precondition(format!("{g}: E/F superscripts start at 1")));
        }
        if g.sup > self.cap_n {
            return Err(Error::CapOverflow(format!("{g} exceeds superscript cap {}", self.cap_n)));
        }
        Ok(self.reduce(&NCElem::gen(g)))
    }

    /// Fails if any superscript or word length exceeds the caps.
    pub fn check_caps(&self, x: &NCElem) -> Result<()> {
        if x.max_sup() > self.cap_n {
            return Err(Error::CapOverflow(format!("superscript {} above cap {}", x.max_sup(), self.cap_n)));
        }
        if x.max_len() > self.cap_l {
            return Err(Error::CapOverflow(format!("word length {} above cap {}", x.max_len(), self.cap_l)));
        }
        Ok(())
    }

    /// `LHS − RHS` of a relation instance as a symbolic element of `Y_μ`.
    pub fn relation_defect(&self, rel: &Relation) -> Result<NCElem> {
        if rel.max_sup() > self.cap_n {
            return Err(Error::CapOverflow(format!("{rel} exceeds superscript cap {}", self.cap_n)));
        }
        relation_defect_in(&self.cartan, rel, &NCElem::one(), &mut |g| self.gen(g))
    }

    /// Straightens into block order `E…F…H` (complete normal form in rank one).
    pub fn tpnf(&self, x: &NCElem) -> Result<NCElem> {
        Straightener::new(self).normalize(x)
    }

    /// The rank-one PBW normal form.
    pub fn nf_a1(&self, x: &NCElem) -> Result<NCElem> {
        if self.rank() != 1 {
            return Err(Error::Precondition("nf_a1 requires a rank-one datum".into()));
        }
        self.tpnf(x)
    }

    /// Exact zero test in rank one.
    pub fn is_zero_a1(&self, x: &NCElem) -> Result<bool> {
        Ok(self.nf_a1(x)?.is_zero())
    }

    /// Levendorskii element `S_i^{(−⟨μ,α_i⟩+k)}` for `k ∈ {1, 2}`.
    pub fn levendorskii_s(&self, i: usize, k: i64) -> Result<NCElem> {
        let s = self.s(i);
        let h1 = self.gen(GenSym::h(i, s + 1))?;
        match k {
            1 => Ok(h1),
            2 => Ok(self.gen(GenSym::h(i, s + 2))?.sub(&h1.mul(&h1).scale_rat(&Rat::new(1, 2)))),
            _ => Err(Error::Precondition(format!("Levendorskii index {k} not in {{1,2}}"))),
        }
    }

    /// The context of `Y_{μ+μ₁+μ₂}`.
    pub fn shifted(&self, mu1: &Coweight, mu2: &Coweight) -> Result<YangianCtx> {
        YangianCtx::new(self.cartan.clone(), self.mu.add(mu1).add(mu2), self.cap_n, self.cap_l)
    }

    /// Generator relabeling of the shift morphism `ι_{μ,μ₁,μ₂}`.
    pub fn shift_gen(&self, mu1: &Coweight, mu2: &Coweight, g: GenSym) -> GenSym {
        let i = g.node;
        match g.kind {
            GenKind::H => g.with_sup(g.sup - mu1.pairing(i) - mu2.pairing(i)),
            GenKind::E => g.with_sup(g.sup - mu1.pairing(i)),
            GenKind::F => g.with_sup(g.sup - mu2.pairing(i)),
        }
    }

    /// The shift morphism `ι_{μ,μ₁,μ₂}: Y_μ → Y_{μ+μ₁+μ₂}` for antidominant `μ₁, μ₂`.
    pub fn shift_morphism(&self, mu1: &Coweight, mu2: &Coweight, x: &NCElem) -> Result<(YangianCtx, NCElem)> {
        if !mu1.is_antidominant() || !mu2.is_antidominant() {
            return Err(Error::Precondition(format!("shift morphism needs antidominant shifts, got {mu1}, {mu2}")));
        }
        let target = self.shifted(mu1, mu2)?;
        let y = self.reduce(x).map_gens(&mut |g| Ok(self.shift_gen(mu1, mu2, g)))?;
        target.check_caps(&y)?;
        Ok((target.clone(), target.reduce(&y)))
    }

    /// Pulls an element of `Y_{μ+μ₁+μ₂}` back along `ι_{μ,μ₁,μ₂}` letter by letter.
    ///
    /// Fails with [`Error::NotInImage`] if some letter has no preimage.
    pub fn shift_pullback(&self, mu1: &Coweight, mu2: &Coweight, y: &NCElem) -> Result<NCElem> {
        let x = y.map_gens(&mut |g| {
            let i = g.node;
            let pre = match g.kind {
                GenKind::H => g.with_sup(g.sup + mu1.pairing(i) + mu2.pairing(i)),
                GenKind::E => g.with_sup(g.sup + mu1.pairing(i)),
                GenKind::F => g.with_sup(g.sup + mu2.pairing(i)),
            };
            let ok = match pre.kind {
                GenKind::H => pre.sup > self.s(i),
                _ => pre.sup >= 1,
            };
            if ok {
                Ok(pre)
            } else {
                Err(Error::NotInImage(format!("{g} has no preimage under the shift morphism")))
            }
        })?;
        Ok(x)
    }
}

/// Truncated power series in `x = u^{-1}` as coefficient vectors.
mod useries {
    use yslice_exact::{Rat, Ring};

    pub fn one<R: Ring>(sample: &R, len: usize) -> Vec<R> {
        let mut v = vec![sample.zero_like(); len];
        v[0] = sample.one_like();
        v
    }

    pub fn mul<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
        let n = a.len().min(b.len());
        let mut out = vec![a[0].zero_like(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..(n - i) {
                if !b[j].is_zero() {
                    out[i + j] = out[i + j].plus(&a[i].times(&b[j]));
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term one.
    pub fn inv<R: Ring>(a: &[R]) -> Vec<R> {
        let n = a.len();
        let mut b = vec![a[0].zero_like(); n];
        b[0] = a[0].one_like();
        for k in 1..n {
            let mut acc = a[0].zero_like();
            for j in 1..=k {
                if !a[j].is_zero() {
                    acc = acc.plus(&a[j].times(&b[k - j]));
                }
            }
            b[k] = acc.negate();
        }
        b
    }

    /// `A(u − c)` re-expanded in `u^{-1}` from `A(u) = Σ a_r u^{-r}` with `a_0 = 1`.
    pub fn shift<R: Ring>(a: &[R], c: &Rat) -> Vec<R> {
        let n = a.len();
        let mut out = vec![a[0].zero_like(); n];
        out[0] = a[0].clone();
        for k in 1..n {
            let mut acc = a[0].zero_like();
            for r in 1..=k {
                if a[r].is_zero() {
                    continue;
                }
                let coef = Rat::binomial((k - 1) as u64, (k - r) as u64) * c.pow((k - r) as i32);
                if !coef.is_zero() {
                    acc = acc.plus(&a[r].scaled(&coef));
                }
            }
            out[k] = acc;
        }
        out
    }

    /// `Π (1 − c x)^{e}` for rational `c` and integer `e`.
    pub fn linear_power(c: &Rat, e: i64, len: usize) -> Vec<Rat> {
        let mut base = vec![Rat::zero(); len];
        base[0] = Rat::one();
        if len > 1 {
            base[1] = -c.clone();
        }
        let b = if e >= 0 { base } else { inv(&base) };
        let mut acc = one(&Rat::zero(), len);
        for _ in 0..e.unsigned_abs() {
            acc = mul(&acc, &b);
        }
        acc
    }
}

pub use useries::{inv as series_inv, mul as series_mul, shift as series_shift};

/// The normalized prefactor `u^{s_i} p_i(u) Π(u − c)^{m_j} / (u^{m_i}(u − d_i)^{m_i})`
/// of the A-series identity, as a series in `u^{-1}`.
///
/// Fails if the `u`-degree of the prefactor is not `⟨μ, α_i⟩`, which happens
/// exactly when the coroot convention is inconsistent with the identity.
pub fn a_prefactor(
    cartan: &CartanDatum,
    lambda: &Coweight,
    mu: &Coweight,
    m: &[i64],
    r_params: &[Vec<Rat>],
    i: usize,
    len: usize,
) -> Result<Vec<Rat>> {
    let n = cartan.rank();
    let mut degree = r_params[i].len() as i64 - 2 * m[i];
    let mut q = useries::one(&Rat::zero(), len);
    for c in &r_params[i] {
        q = useries::mul(&q, &useries::linear_power(c, 1, len));
    }
    for j in 0..n {
        if j == i || cartan.a(j, i) == 0 {
            continue;
        }
        for r in 1..=(-cartan.a(j, i)) {
            let c = Rat::new(cartan.d(i) * cartan.a(i, j), 2) + Rat::from_int(r * cartan.d(j));
            q = useries::mul(&q, &useries::linear_power(&c, m[j], len));
            degree += m[j];
        }
    }
    q = useries::mul(&q, &useries::linear_power(&Rat::from_int(cartan.d(i)), -m[i], len));
    if lambda.pairing(i) != r_params[i].len() as i64 {
        return Err(Error::Precondition(format!("|R_{}| must equal λ_{}", i + 1, i + 1)));
    }
    if degree != mu.pairing(i) {
        return Err(Error::Internal(format!(
            "A-series prefactor for node {} has u-degree {degree}, expected ⟨μ,α_{}⟩ = {}",
            i + 1,
            i + 1,
            mu.pairing(i)
        )));
    }
    Ok(q)
}

/// Solves the A-series identity order by order.
///
/// `h(i, k)` must return the host image of `H_i^{(−⟨μ,α_i⟩+k)}` for `k ≥ 1`.
/// Returns `A[i][r]` for `0 ≤ r ≤ order` with `A[i][0] = 1`.
pub fn a_series<R: Ring>(
    cartan: &CartanDatum,
    lambda: &Coweight,
    mu: &Coweight,
    r_params: &[Vec<Rat>],
    sample: &R,
    order: usize,
    h: &mut dyn FnMut(usize, i64) -> Result<R>,
) -> Result<Vec<Vec<R>>> {
    let n = cartan.rank();
    let m = cartan.coroot_decomposition(lambda, mu)?;
    let len = order + 1;
    let q: Vec<Vec<Rat>> =
        (0..n).map(|i| a_prefactor(cartan, lambda, mu, &m, r_params, i, len)).collect::<Result<_>>()?;
    let hs: Vec<Vec<R>> = (0..n)
        .map(|i| {
            let mut v = useries::one(sample, len);
            for k in 1..len {
                v[k] = h(i, k as i64)?;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    // inverse of the matrix M[i][j] = a_ji over Q
    let minv = invert_transpose(cartan)?;
    let mut a: Vec<Vec<R>> = (0..n).map(|_| useries::one(sample, len)).collect();
    for k in 1..len {
        let trunc = k + 1;
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let lift = |v: &[Rat]| -> Vec<R> { v[..trunc].iter().map(|c| sample.from_rat_like(c)).collect() };
            let mut acc = lift(&q[i]);
            for j in 0..n {
                if j == i || cartan.a(j, i) == 0 {
                    continue;
                }
                for r in 1..=(-cartan.a(j, i)) {
                    let c = Rat::new(cartan.d(i) * cartan.a(i, j), 2) + Rat::from_int(r * cartan.d(j));
                    acc = useries::mul(&acc, &useries::shift(&a[j][..trunc], &c));
                }
            }
            acc = useries::mul(&acc, &useries::inv(&a[i][..trunc]));
            acc = useries::mul(&acc, &useries::inv(&useries::shift(&a[i][..trunc], &Rat::from_int(cartan.d(i)))));
            rhs.push(acc[k].minus(&hs[i][k]));
        }
        for j in 0..n {
            let mut v = sample.zero_like();
            for (i, r) in rhs.iter().enumerate() {
                if !minv[j][i].is_zero() {
                    v = v.plus(&r.scaled(&minv[j][i]));
                }
            }
            a[j][k] = v;
        }
    }
    Ok(a)
}

/// Inverse of `M[i][j] = a_ji`, so that `A_j = Σ_i minv[j][i] r_i` solves `Σ_j a_ji A_j = r_i`.
fn invert_transpose(cartan: &CartanDatum) -> Result<Vec<Vec<Rat>>> {
    let n = cartan.rank();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n).map(|j| Rat::from_int(cartan.a(j, i))).collect();
            row.extend((0..n).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|r| !aug[*r][col].is_zero())
            .ok_or_else(|| Error::Cartan("singular Cartan matrix".into()))?;
        aug.swap(col, piv);
        let inv = aug[col][col].inv().unwrap();
        for k in 0..2 * n {
            aug[col][k] = &aug[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for k in 0..2 * n {
                    let v = &aug[r][k] - &(&f * &aug[col][k]);
                    aug[r][k] = v;
                }
            }
        }
    }
    // aug = [I | M^{-1}], and M^{-1}[row i][col k] maps r_k to A_i
    Ok((0..n).map(|j| aug[j][n..].to_vec()).collect())
}
