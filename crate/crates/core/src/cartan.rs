//! Symmetrizable Cartan data, roots and coweights.
//!
//! Conventions: `a[i][j] = ⟨α_i^∨, α_j⟩`, the symmetrized form is
//! `α_i·α_j = d_i a_ij`, and coweights are written in the fundamental
//! coweight basis so that `⟨μ, α_j⟩ = μ[j]`.  Under the default convention the
//! simple coroot `α_j^∨` has coordinates `(a_j1, …, a_jn)`; the transposed
//! convention is available for self-consistency experiments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use yslice_exact::Rat;

use crate::error::{Error, Result};

/// Which index of the Cartan matrix pairs a simple coroot with a simple root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CorootConvention {
    /// `⟨α_j^∨, α_i⟩ = a_ji`: coroot `α_j^∨` has coordinates `(a_j1, …, a_jn)`.
    #[default]
    RowIsCoroot,
    /// `⟨α_j^∨, α_i⟩ = a_ij`: coroot `α_j^∨` has coordinates `(a_1j, …, a_nj)`.
    ColumnIsCoroot,
}

/// A finite-type symmetrizable Cartan datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    name: String,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
    convention: CorootConvention,
}

/// A coweight in the fundamental coweight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coweight(pub Vec<i64>);

/// An element `Σ c_i α_i` of the root lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootVec(pub Vec<i64>);

impl Coweight {
    pub fn zero(n: usize) -> Self {
        Coweight(vec![0; n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `⟨μ, α_j⟩`.
    pub fn pairing(&self, j: usize) -> i64 {
        self.0[j]
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_antidominant(&self) -> bool {
        self.0.iter().all(|c| *c <= 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|c| *c >= 0)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl RootVec {
    pub fn zero(n: usize) -> Self {
        RootVec(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        RootVec(c)
    }

    pub fn add(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RootVec {
        RootVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    /// All coefficients ≥ 0 and not all zero.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|c| *c >= 0)
    }

    /// All coefficients ≤ 0 and not all zero.
    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|c| *c <= 0)
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            match *c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                -1 => parts.push(format!("-a{}", i + 1)),
                c => parts.push(format!("{c}a{}", i + 1)),
            }
        }
        write!(f, "{}", parts.join("+").replace("+-", "-"))
    }
}

impl CartanDatum {
    /// Builds and validates a datum from an explicit matrix and symmetrizers.
    pub fn from_matrix(name: &str, a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) || d.len() != n {
            return Err(Error::Cartan(format!("{name}: matrix must be square with one symmetrizer per node")));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::Cartan(format!("{name}: a[{i}][{i}] must be 2")));
            }
            if d[i] <= 0 {
                return Err(Error::Cartan(format!("{name}: symmetrizers must be positive")));
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(Error::Cartan(format!("{name}: off-diagonal entries must be ≤ 0")));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::Cartan(format!("{name}: a[i][j] = 0 must imply a[j][i] = 0")));
                }
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(Error::Cartan(format!("{name}: d_i a_ij must be symmetric")));
                }
            }
        }
        let g = d.iter().fold(0, |acc, x| num_gcd(acc, *x));
        if g != 1 {
            return Err(Error::Cartan(format!("{name}: symmetrizers must be coprime")));
        }
        Ok(CartanDatum { name: name.to_string(), a, d, convention: CorootConvention::default() })
    }

    /// One of the supported finite types: `A1`, `A2`, `A3`, `B2`.
    ///
    /// `B2` uses `a = [[2,−1],[−2,2]]`, `d = (2,1)`, so `α_1` is long.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "A1" => CartanDatum::from_matrix("A1", vec![vec![2]], vec![1]),
            "A2" => CartanDatum::from_matrix("A2", vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            "A3" => CartanDatum::from_matrix(
                "A3",
                vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
                vec![1, 1, 1],
            ),
            "B2" => CartanDatum::from_matrix("B2", vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            other => Err(Error::Cartan(format!("unsupported Cartan type `{other}`"))),
        }
    }

    pub fn with_convention(mut self, c: CorootConvention) -> Self {
        self.convention = c;
        self
    }

    pub fn convention(&self) -> CorootConvention {
        self.convention
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::Index(format!("node {i} out of range for {}", self.name)))
        }
    }

    /// `α_i·α_j = d_i a_ij`.
    pub fn bilinear_form(&self, i: usize, j: usize) -> Result<i64> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.d[i] * self.a[i][j])
    }

    /// `α_i·α_j` without bounds reporting (callers index valid nodes).
    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// `α_i·β` for a root-lattice vector `β`.
    pub fn dot_root(&self, i: usize, beta: &RootVec) -> i64 {
        beta.0.iter().enumerate().map(|(j, c)| c * self.dot(i, j)).sum()
    }

    /// `β·γ` for two root-lattice vectors.
    pub fn dot_roots(&self, beta: &RootVec, gamma: &RootVec) -> i64 {
        beta.0.iter().enumerate().map(|(i, c)| c * self.dot_root(i, gamma)).sum()
    }

    /// `⟨α_j^∨, α_i⟩` under the active convention.
    pub fn coroot_pairing(&self, j: usize, i: usize) -> i64 {
        match self.convention {
            CorootConvention::RowIsCoroot => self.a[j][i],
            CorootConvention::ColumnIsCoroot => self.a[i][j],
        }
    }

    /// The simple coroot `α_j^∨` as a coweight.
    pub fn coroot(&self, j: usize) -> Coweight {
        Coweight((0..self.rank()).map(|i| self.coroot_pairing(j, i)).collect())
    }

    /// `Σ_j m_j α_j^∨`.
    pub fn coroot_combination(&self, m: &[i64]) -> Coweight {
        let n = self.rank();
        Coweight((0..n).map(|i| (0..n).map(|j| m[j] * self.coroot_pairing(j, i)).sum()).collect())
    }

    /// Solves `λ − μ = Σ_j m_j α_j^∨` for a non-negative integer vector `m`.
    pub fn coroot_decomposition(&self, lambda: &Coweight, mu: &Coweight) -> Result<Vec<i64>> {
        let n = self.rank();
        if lambda.rank() != n || mu.rank() != n {
            return Err(Error::Index(format!("coweights must have rank {n}")));
        }
        let diff = lambda.sub(mu);
        // Gaussian elimination over Q on the system Σ_j m_j ⟨α_j^∨, α_i⟩ = diff_i.
        let mut rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rat> = (0..n).map(|j| Rat::from_int(self.coroot_pairing(j, i))).collect();
                r.push(Rat::from_int(diff.0[i]));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|r| !rows[*r][col].is_zero()).expect("Cartan matrix is invertible");
            rows.swap(col, piv);
            let inv = rows[col][col].inv().unwrap();
            for k in col..=n {
                rows[col][k] = &rows[col][k] * &inv;
            }
            for r in 0..n {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for k in col..=n {
                        let v = &rows[r][k] - &(&f * &rows[col][k]);
                        rows[r][k] = v;
                    }
                }
            }
        }
        let mut m = Vec::with_capacity(n);
        for r in rows.iter() {
            let v = &r[n];
            match v.to_i64() {
                Some(k) if k >= 0 => m.push(k),
                _ => {
                    return Err(Error::Dominance(format!(
                        "{} − {} is not a non-negative integral combination of simple coroots (coefficient {v})",
                        lambda, mu
                    )))
                }
            }
        }
        Ok(m)
    }

    /// Positive roots by closure from the simple roots, ordered by height then
    /// lexicographically.
    pub fn positive_roots(&self) -> Result<Vec<RootVec>> {
        let n = self.rank();
        let mut roots: BTreeSet<RootVec> = (0..n).map(|i| RootVec::simple(n, i)).collect();
        let mut frontier: Vec<RootVec> = roots.iter().cloned().collect();
        let mut height = 1;
        while !frontier.is_empty() {
            height += 1;
            if height > 12 {
                return Err(Error::Cartan(format!("{}: root closure does not terminate (not finite type)", self.name)));
            }
            let mut next = BTreeSet::new();
            for beta in &frontier {
                for i in 0..n {
                    if let Some(up) = self.raise_root(&roots, beta, i) {
                        next.insert(up);
                    }
                }
            }
            for r in &next {
                roots.insert(r.clone());
            }
            frontier = next.into_iter().collect();
        }
        let mut out: Vec<RootVec> = roots.into_iter().collect();
        out.sort_by(|x, y| x.height().cmp(&y.height()).then_with(|| y.cmp(x)));
        Ok(out)
    }

    /// `β + α_i` if it is a root, decided by the `α_i`-string through `β`.
    fn raise_root(&self, roots: &BTreeSet<RootVec>, beta: &RootVec, i: usize) -> Option<RootVec> {
        let n = self.rank();
        let ai = RootVec::simple(n, i);
        if *beta == ai {
            return None;
        }
        let mut p = 0;
        let mut down = beta.sub(&ai);
        while roots.contains(&down) {
            p += 1;
            down = down.sub(&ai);
        }
        // ⟨α_i^∨, β⟩ = Σ_j c_j a_ij
        let pair: i64 = beta.0.iter().enumerate().map(|(j, c)| c * self.a[i][j]).sum();
        let q = p - pair;
        if q > 0 {
            Some(beta.add(&ai))
        } else {
            None
        }
    }

    /// True if `β` is a positive root.
    pub fn is_positive_root(&self, beta: &RootVec) -> bool {
        self.positive_roots().map(|rs| rs.contains(beta)).unwrap_or(false)
    }

    /// The lexicographically first sequence `(i_1, …, i_l)` with every suffix
    /// sum a root and total `β`; defines `e_β = [e_{i_1}, [e_{i_2}, …, e_{i_l}]]`.
    pub fn root_decomposition(&self, beta: &RootVec) -> Result<Vec<usize>> {
        let roots: BTreeSet<RootVec> = self.positive_roots()?.into_iter().collect();
        if !roots.contains(beta) {
            return Err(Error::Cartan(format!("{beta} is not a positive root")));
        }
        self.decompose_from(&roots, beta, true)
            .ok_or_else(|| Error::Cartan(format!("no decomposition for {beta}")))
    }

    /// An alternate decomposition (lexicographically last), for checking that
    /// root-vector dependent sums are choice independent.
    pub fn root_decomposition_alt(&self, beta: &RootVec) -> Result<Vec<usize>> {
        let roots: BTreeSet<RootVec> = self.positive_roots()?.into_iter().collect();
        self.decompose_from(&roots, beta, false)
            .ok_or_else(|| Error::Cartan(format!("no decomposition for {beta}")))
    }

    fn decompose_from(&self, roots: &BTreeSet<RootVec>, beta: &RootVec, first: bool) -> Option<Vec<usize>> {
        let n = self.rank();
        if beta.height() == 1 {
            return beta.0.iter().position(|c| *c == 1).map(|i| vec![i]);
        }
        let order: Vec<usize> = if first { (0..n).collect() } else { (0..n).rev().collect() };
        for i in order {
            if beta.0[i] == 0 {
                continue;
            }
            let rest = beta.sub(&RootVec::simple(n, i));
            if roots.contains(&rest) {
                if let Some(mut tail) = self.decompose_from(roots, &rest, first) {
                    let mut seq = vec![i];
                    seq.append(&mut tail);
                    return Some(seq);
                }
            }
        }
        None
    }

    /// The pairing `(e_β, f_β)` of nested-commutator root vectors built from the
    /// same sequence, normalized so that `(e_i, f_i) = 1` for simple roots.
    pub fn root_vector_pairing(&self, seq: &[usize]) -> Rat {
        if seq.len() == 1 {
            return Rat::one();
        }
        // ([e_a, X'], Y) = −(X', [e_a, Y]) with Y = f-word for the full sequence.
        let mut y: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        y.insert(seq.to_vec(), Rat::one());
        for (k, a) in seq.iter().enumerate().take(seq.len() - 1) {
            let mut next: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
            for (w, c) in &y {
                for (w2, c2) in self.bracket_e_fword(*a, w) {
                    let e = next.entry(w2).or_insert_with(Rat::zero);
                    *e += &(-(c * &c2));
                }
            }
            next.retain(|_, c| !c.is_zero());
            y = next;
            debug_assert!(y.keys().all(|w| w.len() == seq.len() - k - 1));
        }
        let last = *seq.last().unwrap();
        y.get(&vec![last]).cloned().unwrap_or_else(Rat::zero)
    }

    /// `[e_a, f_w]` for a nested f-word of length ≥ 2, as a combination of
    /// nested f-words of length one less.
    fn bracket_e_fword(&self, a: usize, w: &[usize]) -> BTreeMap<Vec<usize>, Rat> {
        let mut out: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        let b1 = w[0];
        let z = &w[1..];
        if a == b1 {
            // [h_a, f_z] = −(Σ_j a_{a, z_j}) f_z
            let wt: i64 = z.iter().map(|j| self.a[a][*j]).sum();
            *out.entry(z.to_vec()).or_insert_with(Rat::zero) += &Rat::from_int(-wt);
        }
        if z.len() == 1 {
            if a == z[0] {
                // [f_{b1}, h_a] = a_{a b1} f_{b1}
                *out.entry(vec![b1]).or_insert_with(Rat::zero) += &Rat::from_int(self.a[a][b1]);
            }
        } else {
            for (w2, c) in self.bracket_e_fword(a, z) {
                let mut nw = vec![b1];
                nw.extend(w2);
                *out.entry(nw).or_insert_with(Rat::zero) += &c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_is_symmetrized() {
        let b2 = CartanDatum::from_name("B2").unwrap();
        assert_eq!(b2.bilinear_form(0, 1).unwrap(), -2);
        assert_eq!(b2.bilinear_form(1, 0).unwrap(), -2);
        assert_eq!(b2.bilinear_form(0, 0).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CartanDatum::from_matrix("x", vec![vec![2, 1], vec![1, 2]], vec![1, 1]).is_err());
        assert!(CartanDatum::from_matrix("x", vec![vec![2, -1], vec![-2, 2]], vec![1, 1]).is_err());
        assert!(CartanDatum::from_matrix("x", vec![vec![2, -1], vec![-2, 2]], vec![4, 2]).is_err());
    }

    #[test]
    fn a2_root_vector_pairing_sign() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        // ([e1,e2],[f1,f2]) = −1 for the invariant form with (e_i,f_i) = 1
        assert_eq!(a2.root_vector_pairing(&[0, 1]), Rat::from_int(-1));
    }
}
