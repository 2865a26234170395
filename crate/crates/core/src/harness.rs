//! Configuration-driven verification suites and report emission.
//!
//! A suite is described by a TOML file with exact rational literals
//! (`"p/q"` strings).  Every check group is independently toggleable, runs
//! deterministically under the configured seed, and produces
//! [`CheckRecord`]s in a stable order.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use yslice_exact::{KScalar, Rat};

use crate::cartan::{CartanDatum, Coweight};
use crate::coprod::{
    ad_nilpotency_check, delta_bar_e_check, explicit_comult_check, f_left_grade_check, qhr_check, CoprodCtx, DeltaRep,
    ExplicitComult,
};
use crate::error::{Error, Result};
use crate::gklo::{GkloConfig, GkloRep, OracleFamily};
use crate::report::{CheckRecord, Status};
use crate::slice::{
    inverse_map_f, moment_map, moment_map_flow_check, multiply_slices, pi_project, quantum_cross_oracle, r_point,
    random_nonzero_scalar, random_scalar, chart_bracket, LoopMat, Rank1Point, UPoly, VAR_B, VAR_C,
};
use crate::yangian::{relation_defect_in, relation_instances, YangianCtx};

/// The check groups, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Relations,
    Truncation,
    Coproduct,
    Reduction,
    Classical,
    Qhr,
}

impl Group {
    pub const ALL: [Group; 6] =
        [Group::Relations, Group::Truncation, Group::Coproduct, Group::Reduction, Group::Classical, Group::Qhr];

    pub fn name(self) -> &'static str {
        match self {
            Group::Relations => "relations",
            Group::Truncation => "truncation",
            Group::Coproduct => "coproduct",
            Group::Reduction => "reduction",
            Group::Classical => "classical",
            Group::Qhr => "qhr",
        }
    }

    /// One-line description of what the group verifies.
    pub fn description(self) -> &'static str {
        match self {
            Group::Relations => "every defining relation maps to zero in the difference-operator representation",
            Group::Truncation => "A-series images vanish above m_i and equal signed elementary symmetric functions below",
            Group::Coproduct => "coproduct homomorphism, explicit comultiplication of A-series, gradings, ad-nilpotency",
            Group::Reduction => "rank-one reduction formula, slice membership and mutation rejection",
            Group::Classical => "inverse pair m/f, G_a action, moment map, chart Poisson bracket",
            Group::Qhr => "Hamiltonian reduction of differential operators on C^x",
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check group `{s}`")))
    }
}

fn default_superscript() -> i64 {
    4
}
fn default_word_length() -> usize {
    64
}
fn default_window() -> i64 {
    12
}
fn default_order() -> usize {
    3
}
fn default_points() -> usize {
    100
}
fn default_qhr_cap() -> u32 {
    20
}
fn default_oracle_size() -> i64 {
    6
}
fn yes() -> bool {
    true
}

/// Computation caps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Largest generator superscript in relation instances.
    #[serde(default = "default_superscript")]
    pub superscript: i64,
    /// Word-length cap of the normal-form engine.
    #[serde(default = "default_word_length")]
    pub word_length: usize,
    /// Relative series precision of loop-group computations.
    #[serde(default = "default_window")]
    pub window: i64,
    /// Extra orders beyond `m_i` in A-series comparisons.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Random points per classical case.
    #[serde(default = "default_points")]
    pub points: usize,
    /// Differential-operator degree cap of the Hamiltonian reduction.
    #[serde(default = "default_qhr_cap")]
    pub qhr: u32,
    /// Largest total coroot multiplicity `Σ m_i` of an oracle representation.
    #[serde(default = "default_oracle_size")]
    pub oracle_size: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            superscript: default_superscript(),
            word_length: default_word_length(),
            window: default_window(),
            order: default_order(),
            points: default_points(),
            qhr: default_qhr_cap(),
            oracle_size: default_oracle_size(),
        }
    }
}

/// One representation case `(λ, μ, R)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    /// Parameters per node as rational literals.
    #[serde(default)]
    pub r: Vec<Vec<String>>,
}

/// Representations used as a zero-test oracle in rank ≥ 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Coroot multiplicities `m` of the oracle representations; empty selects automatically.
    #[serde(default)]
    pub ms: Vec<Vec<i64>>,
}

/// Group toggles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Groups {
    #[serde(default = "yes")]
    pub relations: bool,
    #[serde(default = "yes")]
    pub truncation: bool,
    #[serde(default = "yes")]
    pub coproduct: bool,
    #[serde(default = "yes")]
    pub reduction: bool,
    #[serde(default = "yes")]
    pub classical: bool,
    #[serde(default = "yes")]
    pub qhr: bool,
}

impl Default for Groups {
    fn default() -> Self {
        Groups { relations: true, truncation: true, coproduct: true, reduction: true, classical: true, qhr: true }
    }
}

impl Groups {
    pub fn enabled(&self, g: Group) -> bool {
        match g {
            Group::Relations => self.relations,
            Group::Truncation => self.truncation,
            Group::Coproduct => self.coproduct,
            Group::Reduction => self.reduction,
            Group::Classical => self.classical,
            Group::Qhr => self.qhr,
        }
    }
}

/// Deliberate corruptions used to test failure reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationConfig {
    /// Negate every `E` image of the representations.
    #[serde(default)]
    pub mutate_e_sign: bool,
}

/// The suite configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Cartan type name, e.g. `"A2"`.
    pub cartan: String,
    /// RNG seed; mandatory for reproducibility.
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub cases: Vec<CaseConfig>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub groups: Groups,
    #[serde(default)]
    pub mutation: MutationConfig,
}

/// A validated suite.
#[derive(Clone, Debug)]
pub struct Suite {
    pub config: SuiteConfig,
    pub cartan: CartanDatum,
    pub cases: Vec<GkloConfig>,
}

fn parse_rat(s: &str, at: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| Error::Config(format!("{at}: `{s}` is not a rational literal ({e})")))
}

impl Suite {
    /// Parses and validates a TOML configuration.
    pub fn from_toml(text: &str) -> Result<Suite> {
        let config: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Suite::from_config(config)
    }

    pub fn from_config(config: SuiteConfig) -> Result<Suite> {
        let cartan = CartanDatum::from_name(&config.cartan).map_err(|e| Error::Config(format!("cartan: {e}")))?;
        let n = cartan.rank();
        let mut cases = Vec::new();
        for (k, c) in config.cases.iter().enumerate() {
            let at = format!("cases[{k}]");
            if c.lambda.len() != n || c.mu.len() != n {
                return Err(Error::Config(format!("{at}: λ and μ need {n} entries for {}", config.cartan)));
            }
            let r: Vec<Vec<Rat>> = if c.r.is_empty() {
                c.lambda.iter().map(|l| vec![Rat::zero(); (*l).max(0) as usize]).collect()
            } else {
                if c.r.len() != n {
                    return Err(Error::Config(format!("{at}.r: expected {n} parameter lists")));
                }
                c.r.iter()
                    .enumerate()
                    .map(|(i, v)| v.iter().enumerate().map(|(j, s)| parse_rat(s, &format!("{at}.r[{i}][{j}]"))).collect())
                    .collect::<Result<_>>()?
            };
            let cfg = GkloConfig::new(cartan.clone(), Coweight(c.lambda.clone()), Coweight(c.mu.clone()), r)
                .map_err(|e| Error::Config(format!("{at}: {e}")))?
                .with_e_sign_mutation(config.mutation.mutate_e_sign);
            cases.push(cfg);
        }
        if config.caps.superscript < 1 || config.caps.window < 2 {
            return Err(Error::Config("caps: superscript must be ≥ 1 and window ≥ 2".into()));
        }
        Ok(Suite { config, cartan, cases })
    }

    fn case_tag(cfg: &GkloConfig) -> String {
        let r: Vec<String> =
            cfg.r_params.iter().map(|v| format!("{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        format!("{} λ={} μ={} R={}", cfg.cartan.name(), cfg.lambda, cfg.mu, r.join(""))
    }

    /// Runs one group.
    pub fn run_group(&self, group: Group) -> Vec<CheckRecord> {
        match group {
            Group::Relations => self.relations(),
            Group::Truncation => self.truncation(),
            Group::Coproduct => self.coproduct(),
            Group::Reduction => self.reduction(),
            Group::Classical => self.classical(),
            Group::Qhr => qhr_check(self.config.caps.qhr),
        }
    }

    /// Runs the given groups (or all enabled ones) on a pool of `jobs` threads.
    pub fn run(&self, groups: &[Group], jobs: usize) -> Result<Vec<CheckRecord>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let selected: Vec<Group> = groups.iter().copied().filter(|g| self.config.groups.enabled(*g)).collect();
        let per_group: Vec<Vec<CheckRecord>> = pool.install(|| selected.par_iter().map(|g| self.run_group(*g)).collect());
        Ok(per_group.into_iter().flatten().collect())
    }

    fn relations(&self) -> Vec<CheckRecord> {
        let cap = self.config.caps.superscript;
        self.cases
            .par_iter()
            .flat_map_iter(|cfg| {
                let tag = Suite::case_tag(cfg);
                let rep = match GkloRep::new(cfg.clone()) {
                    Ok(r) => r,
                    Err(e) => return vec![CheckRecord::from_error("relations", tag, &e)],
                };
                let mut by_family: BTreeMap<&'static str, (usize, Option<String>)> = BTreeMap::new();
                let mut errors = Vec::new();
                for rel in relation_instances(&self.cartan, &cfg.mu, cap) {
                    let e = by_family.entry(rel.family()).or_insert((0, None));
                    match rep.relation_defect(&rel) {
                        Ok(d) if d.is_zero() => e.0 += 1,
                        Ok(d) => {
                            e.0 += 1;
                            if e.1.is_none() {
                                e.1 = Some(format!("{rel}: defect {d}"));
                            }
                        }
                        Err(err) => errors.push(CheckRecord::from_error("relations", format!("{tag} {rel}"), &err)),
                    }
                }
                let mut out: Vec<CheckRecord> = by_family
                    .into_iter()
                    .map(|(fam, (count, bad))| {
                        let name = format!("{tag} family {fam}");
                        match bad {
                            None => CheckRecord::from_bool("relations", name, true, format!("{count} instances, superscripts ≤ {cap}")),
                            Some(w) => CheckRecord::new("relations", name, Status::Fail, format!("{count} instances checked"))
                                .with_witness(w),
                        }
                    })
                    .collect();
                out.extend(errors);
                out
            })
            .collect()
    }

    fn truncation(&self) -> Vec<CheckRecord> {
        let extra = self.config.caps.order;
        self.cases
            .par_iter()
            .map(|cfg| {
                let tag = Suite::case_tag(cfg);
                let res = GkloRep::new(cfg.clone()).and_then(|rep| rep.truncation_mismatches(extra));
                match res {
                    Ok(bad) if bad.is_empty() => CheckRecord::from_bool(
                        "truncation",
                        tag,
                        true,
                        format!("A_i^(r) = (−1)^r e_r(w_i) for r ≤ m_i and 0 for m_i < r ≤ m_i+{extra}"),
                    ),
                    Ok(bad) => {
                        let w: Vec<String> = bad.iter().map(|(i, r)| format!("A_{}^({r})", i + 1)).collect();
                        CheckRecord::new("truncation", tag, Status::Fail, "A-series mismatch").with_witness(w.join(", "))
                    }
                    Err(e) => CheckRecord::from_error("truncation", tag, &e),
                }
            })
            .collect()
    }

    fn oracle_ms(&self, mu: &Coweight) -> Vec<Vec<i64>> {
        if !self.config.oracle.ms.is_empty() {
            return self.config.oracle.ms.clone();
        }
        auto_oracle_ms(&self.cartan, mu, 2)
    }

    fn coproduct(&self) -> Vec<CheckRecord> {
        let c = &self.cartan;
        let n = c.rank();
        let cap = self.config.caps.superscript.max(3) + 4;
        let mut jobs: Vec<Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + '_>> = Vec::new();

        // explicit comultiplication for every case and node where λ ≥ μ + α_i^∨
        for cfg in &self.cases {
            for i in 0..n {
                let cfg = cfg.clone();
                jobs.push(Box::new(move || {
                    let tag = Suite::case_tag(&cfg);
                    let mu2 = cfg.mu.add(&c.coroot(i));
                    if c.coroot_decomposition(&cfg.lambda, &mu2).is_err() {
                        return vec![CheckRecord::new(
                            "coproduct",
                            format!("explicit-comult {tag} i={}", i + 1),
                            Status::Skipped,
                            "λ ≥ μ + α_i^∨ fails",
                        )];
                    }
                    let m = cfg.m();
                    let data = ExplicitComult {
                        cartan: c.clone(),
                        lambda: cfg.lambda.clone(),
                        mu: cfg.mu.clone(),
                        r_params: cfg.r_params.clone(),
                        node: i,
                        order: m[i] as usize + self.config.caps.order,
                    };
                    explicit_comult_check(&data, cap + 2 * m[i]).unwrap_or_else(|e| {
                        vec![CheckRecord::from_error("coproduct", format!("explicit-comult {tag} i={}", i + 1), &e)]
                    })
                }));
            }
            if cfg.mu.is_dominant() {
                for i in 0..n {
                    let mu = cfg.mu.clone();
                    jobs.push(Box::new(move || {
                        vec![delta_bar_e_check(c, &mu, i, cap)
                            .unwrap_or_else(|e| CheckRecord::from_error("coproduct", "Δ(E(1)) left-only", &e))]
                    }));
                    let cfg = cfg.clone();
                    jobs.push(Box::new(move || {
                        let alpha = c.coroot(i);
                        let res = CoprodCtx::with_minimal_shifts(c.clone(), alpha.neg(), cfg.mu.add(&alpha), cap)
                            .and_then(|cop| (0..n).map(|j| f_left_grade_check(&cop, j)).collect::<Result<Vec<_>>>());
                        res.unwrap_or_else(|e| vec![CheckRecord::from_error("coproduct", "left grade of Δ(F)", &e)])
                    }));
                }
            }
        }

        // homomorphism property on antidominant factor pairs
        for (left, right, pair_cap) in antidominant_pairs(c) {
            let mutate = self.config.mutation.mutate_e_sign;
            jobs.push(Box::new(move || homomorphism_check(c, &left, &right, pair_cap, mutate)));
        }

        // ad-nilpotency identities
        let mu_nil = Coweight(vec![-2; n]);
        let ms = self.oracle_ms(&mu_nil);
        let largest = ms.iter().map(|m| m.iter().sum::<i64>()).max().unwrap_or(0);
        jobs.push(Box::new(move || {
            if n > 1 && largest > self.config.caps.oracle_size {
                return vec![CheckRecord::new(
                    "coproduct",
                    format!("ad-nilpotency μ={mu_nil}"),
                    Status::Skipped,
                    format!("oracle multiplicities {ms:?} exceed caps.oracle_size = {}", self.config.caps.oracle_size),
                )];
            }
            let res = YangianCtx::new(c.clone(), mu_nil.clone(), 6, self.config.caps.word_length).and_then(|ctx| {
                let oracle = if n == 1 { None } else { Some(OracleFamily::standard(c, &mu_nil, &ms, 7)?) };
                let mut out = Vec::new();
                for i in 0..n {
                    let oriented = match &oracle {
                        Some(o) => Some(o.with_orientation(OracleFamily::lean_orientation(c, i))?),
                        None => None,
                    };
                    out.extend(ad_nilpotency_check(&ctx, i, oriented.as_ref())?);
                }
                Ok(out)
            });
            res.unwrap_or_else(|e| vec![CheckRecord::from_error("coproduct", "ad-nilpotency", &e)])
        }));

        jobs.par_iter().flat_map_iter(|j| j()).collect()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn reduction(&self) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let points = self.config.caps.points;
        // the worked example λ = 2, m = 1
        let d1 = KScalar::from_int(3);
        let ex = Rank1Point::from_bcd(2, UPoly::one(), UPoly::constant(d1.mul(&d1).neg()), UPoly::t().add(&UPoly::constant(d1)))
            .and_then(|p| p.rank1_reduce());
        out.push(match ex {
            Ok(p) => CheckRecord::from_bool(
                "reduction",
                "PGL2 rank-one reduction, λ=2 m=1 example",
                p.b.is_zero() && p.d == UPoly::one(),
                format!("b' = {}, d' = {}", p.b, p.d),
            ),
            Err(e) => CheckRecord::from_error("reduction", "PGL2 rank-one reduction, λ=2 m=1 example", &e),
        });
        // agreement with the general f-map on random points with Φ = 1
        let mut rng = self.rng(1);
        let mut agree = true;
        let mut valid = true;
        let mut witness = None;
        for _ in 0..points {
            let lambda = rng.gen_range(0..=4);
            let m = rng.gen_range(1..=3);
            let g = Rank1Point::random(lambda, m, true, &mut rng);
            match (g.rank1_reduce(), g.f()) {
                (Ok(r), Ok((_, via_f))) => {
                    if r != via_f || r.d != g.b {
                        agree = false;
                        witness.get_or_insert(format!("{g:?}"));
                    }
                    if !r.minor_degree_check() || r.mu() != g.mu() + 2 {
                        valid = false;
                        witness.get_or_insert(format!("{g:?}"));
                    }
                }
                _ => {
                    agree = false;
                    witness.get_or_insert(format!("{g:?}"));
                }
            }
        }
        let mut r1 = CheckRecord::from_bool("reduction", "PGL2 rank-one reduction agrees with f", agree, format!("{points} random points"));
        let mut r2 = CheckRecord::from_bool(
            "reduction",
            "PGL2 rank-one reduction lands in the smaller slice",
            valid,
            format!("{points} random points"),
        );
        if let Some(w) = &witness {
            r1 = if agree { r1 } else { r1.with_witness(w.clone()) };
            r2 = if valid { r2 } else { r2.with_witness(w.clone()) };
        }
        out.push(r1);
        out.push(r2);
        out.extend(membership_checks(&mut self.rng(2), 50));
        out
    }

    fn classical(&self) -> Vec<CheckRecord> {
        let points = self.config.caps.points;
        let prec = self.config.caps.window;
        let mut out = Vec::new();
        let cases: Vec<(u32, u32)> = (0..=4u32).flat_map(|l| (1..=3u32).map(move |m| (l, m))).collect();
        let per_case: Vec<Vec<CheckRecord>> = cases
            .par_iter()
            .map(|&(lambda, m)| inverse_pair_checks(lambda, m, points, &mut self.rng(100 + (lambda * 10 + m) as u64)))
            .collect();
        out.extend(per_case.into_iter().flatten());
        out.push(sl3_spot_check(20, prec, &mut self.rng(3)));
        for d in 1..=3i64 {
            out.push(poisson_structure_check(d));
            match moment_map_flow_check(d as u64, 5, &mut self.rng(4 + d as u64)) {
                Ok(recs) => out.extend(recs),
                Err(e) => out.push(CheckRecord::from_error("classical", format!("moment map flow d={d}"), &e)),
            }
        }
        out
    }
}

/// Picks `count` small coroot multiplicities `m` making `μ + Σ m_i α_i^∨` dominant.
pub fn auto_oracle_ms(cartan: &CartanDatum, mu: &Coweight, count: usize) -> Vec<Vec<i64>> {
    let n = cartan.rank();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let bound = 8i64;
    let total = (bound + 1).pow(n as u32);
    let mut all: Vec<Vec<i64>> = (0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let v = k % (bound + 1);
                    k /= bound + 1;
                    v
                })
                .collect()
        })
        .collect();
    all.sort_by_key(|m| (m.iter().sum::<i64>(), m.clone()));
    for m in all {
        if mu.add(&cartan.coroot_combination(&m)).is_dominant() {
            found.push(m);
            if found.len() == count {
                break;
            }
        }
    }
    found
}

/// Antidominant factor pairs `(λ₁, μ₁, R₁) ⊗ (λ₂, μ₂, R₂)` used for the homomorphism
/// check, with the superscript cap for each pair.
pub fn antidominant_pairs(cartan: &CartanDatum) -> Vec<(GkloConfig, GkloConfig, i64)> {
    let q = |v: &[(i64, i64)]| v.iter().map(|(a, b)| Rat::new(*a, *b)).collect::<Vec<_>>();
    let mk = |l: Vec<i64>, m: Vec<i64>, r: Vec<Vec<Rat>>| GkloConfig::new(cartan.clone(), Coweight(l), Coweight(m), r);
    let pairs = match cartan.name() {
        "A1" => vec![
            (mk(vec![2], vec![0], vec![q(&[(0, 1), (0, 1)])]), mk(vec![2], vec![0], vec![q(&[(0, 1), (1, 2)])]), 3),
            (mk(vec![0], vec![-2], vec![vec![]]), mk(vec![1], vec![-1], vec![q(&[(1, 1)])]), 3),
        ],
        "A2" => vec![(
            mk(vec![1, 1], vec![0, 0], vec![q(&[(0, 1)]), q(&[(1, 2)])]),
            mk(vec![1, 1], vec![0, 0], vec![q(&[(1, 1)]), q(&[(0, 1)])]),
            3,
        )],
        "B2" => vec![
            (mk(vec![0, 0], vec![0, -1], vec![vec![], vec![]]), mk(vec![0, 0], vec![0, -1], vec![vec![], vec![]]), 2),
            (mk(vec![0, 1], vec![0, 0], vec![vec![], q(&[(1, 2)])]), mk(vec![0, 0], vec![0, -1], vec![vec![], vec![]]), 2),
        ],
        _ => vec![],
    };
    pairs.into_iter().filter_map(|(a, b, cap)| Some((a.ok()?, b.ok()?, cap))).collect()
}

/// All relation instances with superscripts `≤ cap` map to zero under `Δ` into a tensor
/// product of two representations with antidominant shifts.
pub fn homomorphism_check(cartan: &CartanDatum, left: &GkloConfig, right: &GkloConfig, cap: i64, mutate: bool) -> Vec<CheckRecord> {
    let tag = format!("{} ⊗ {}", Suite::case_tag(left), Suite::case_tag(right));
    let name = format!("Δ is a homomorphism, {tag}");
    let run = || -> Result<CheckRecord> {
        let reps = GkloRep::on_shared_space(vec![
            left.clone().with_e_sign_mutation(mutate),
            right.clone().with_e_sign_mutation(mutate),
        ])?;
        let mu = left.mu.add(&right.mu);
        let cop = CoprodCtx::antidominant(cartan.clone(), left.mu.clone(), right.mu.clone(), cap + 2)?;
        let dr = DeltaRep::new(&cop, &reps[0], &reps[1])?;
        let one = reps[0].one();
        let mut count = 0;
        for rel in relation_instances(cartan, &mu, cap) {
            let d = relation_defect_in(cartan, &rel, &one, &mut |g| dr.image(g))?;
            count += 1;
            if !d.is_zero() {
                return Ok(CheckRecord::new("coproduct", name.clone(), Status::Fail, format!("{rel} fails"))
                    .with_witness(format!("{rel}: defect {d}")));
            }
        }
        Ok(CheckRecord::from_bool("coproduct", name.clone(), true, format!("{count} instances, superscripts ≤ {cap}")))
    };
    vec![run().unwrap_or_else(|e| CheckRecord::from_error("coproduct", name.clone(), &e))]
}

/// Inverse pair, equivariance and moment compatibility on random `PGL₂` points of `W^λ_{λ−2m}`.
pub fn inverse_pair_checks<R: Rng>(lambda: u32, m: u32, points: usize, rng: &mut R) -> Vec<CheckRecord> {
    let tag = format!("PGL2 λ={lambda} μ={}", lambda as i64 - 2 * m as i64);
    let mut ok = [true; 5];
    let mut wit: [Option<String>; 5] = Default::default();
    for _ in 0..points {
        let g = Rank1Point::random(lambda, m, false, rng);
        let g1 = Rank1Point::r(&random_nonzero_scalar(rng), &random_scalar(rng)).expect("b ≠ 0");
        let g2 = Rank1Point::random(lambda, m - 1, false, rng);
        let a = random_scalar(rng);
        let a2 = random_scalar(rng);
        let mut fail = |k: usize, w: String| {
            ok[k] = false;
            wit[k].get_or_insert(w);
        };
        // m(f(g)) = g
        match g.f().and_then(|(x, rest)| Rank1Point::from_chart(&x)?.mul(&rest)) {
            Ok(back) if back == g => {}
            _ => fail(0, format!("{g:?}")),
        }
        // f(m(g1, g2)) = (g1, g2)
        let prod = g1.mul(&g2);
        match prod.as_ref().map_err(|e| e.clone()).and_then(|p| p.f()) {
            Ok((x, rest)) if Rank1Point::from_chart(&x).ok().as_ref() == Some(&g1) && rest == g2 => {}
            _ => fail(1, format!("g1={g1:?} g2={g2:?}")),
        }
        if let Ok(p) = &prod {
            // equivariance m(a·g1, g2) = a·m(g1, g2)
            let lhs = g1.ga_action(&a).and_then(|x| x.mul(&g2));
            if lhs.ok() != p.ga_action(&a).ok() {
                fail(2, format!("a={a} g1={g1:?} g2={g2:?}"));
            }
            // Φ∘m = Φ∘pr₁
            if p.phi() != g1.phi() {
                fail(3, format!("g1={g1:?} g2={g2:?}"));
            }
        }
        // action axioms
        let lhs = g.ga_action(&a2).and_then(|x| x.ga_action(&a));
        if lhs.ok() != g.ga_action(&a.add(&a2)).ok() || g.ga_action(&KScalar::zero()).ok().as_ref() != Some(&g) {
            fail(4, format!("{g:?}"));
        }
    }
    let names = ["m(f(g)) = g", "f(m(g1, g2)) = (g1, g2)", "m is G_a-equivariant", "Φ∘m = Φ∘pr1", "G_a action axioms"];
    names
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let mut rec = CheckRecord::from_bool("classical", format!("{tag}: {n}"), ok[k], format!("{points} random points"));
            if let Some(w) = wit[k].take() {
                rec = rec.with_witness(w);
            }
            rec
        })
        .collect()
}

/// Inverse pair on `GL₃` points `m(r₁(b₁,c₁), m(r₂(b₂,c₂), t^λ))` with `λ = (2, 1, 0)`.
pub fn sl3_spot_check<R: Rng>(points: usize, prec: i64, rng: &mut R) -> CheckRecord {
    let name = "SL3 λ=ϖ1+ϖ2: m(f(g)) = g and f(m(g1, g2)) = (g1, g2)";
    let mut run = || -> Result<Option<String>> {
        let t = pi_project(&LoopMat::t_pow(&[2, 1, 0]), prec)?;
        for _ in 0..points {
            let (b1, c1) = (random_nonzero_scalar(rng), random_scalar(rng));
            let (b2, c2) = (random_nonzero_scalar(rng), random_scalar(rng));
            let g1 = pi_project(&r_point(3, 0, &b1, &c1)?, prec)?;
            let g2 = multiply_slices(&pi_project(&r_point(3, 1, &b2, &c2)?, prec)?, &t, prec)?;
            let g = multiply_slices(&g1, &g2, prec)?;
            let (x, rest) = inverse_map_f(&g, 0, prec)?;
            let back = multiply_slices(&pi_project(&r_point(3, 0, &x.b, &x.c)?, prec)?, &rest, prec)?;
            let ok = x.b == b1 && x.c == c1 && rest.g.agrees_with(&g2.g) && back.g.agrees_with(&g.g) && moment_map(&g, 0, 1)? == b1;
            if !ok {
                return Ok(Some(format!("b1={b1} c1={c1} b2={b2} c2={c2}")));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => CheckRecord::from_bool("classical", name, true, format!("{points} random points, window precision {prec}")),
        Ok(Some(w)) => CheckRecord::new("classical", name, Status::Fail, "inverse pair mismatch").with_witness(w),
        Err(e) => CheckRecord::from_error("classical", name, &e),
    }
}

/// `{c, b} = d b` from the r-matrix equation, and the quantum commutator with the same constant.
pub fn poisson_structure_check(d: i64) -> CheckRecord {
    let name = format!("chart Poisson bracket d={d}");
    let b = yslice_exact::RatFn::var(VAR_B);
    let c = yslice_exact::RatFn::var(VAR_C);
    let res = chart_bracket(&c, &b, d).and_then(|cb| Ok((cb, quantum_cross_oracle(d)?)));
    match res {
        Ok((cb, kappa)) => {
            let expect = b.scale(&KScalar::from_int(d));
            let ok = cb == expect && kappa == KScalar::from_int(d);
            CheckRecord::from_bool("classical", name, ok, format!("{{c, b}} = {d}·b; quantum constant {kappa}"))
        }
        Err(e) => CheckRecord::from_error("classical", name, &e),
    }
}

/// The membership test accepts random slice points and rejects mutations violating each constraint.
pub fn membership_checks<R: Rng>(rng: &mut R, mutations: usize) -> Vec<CheckRecord> {
    let kinds = ["deg b ≥ m", "deg c ≥ m", "d not monic", "det ≠ t^λ"];
    let mut accepted = true;
    let mut rejected = [true; 4];
    for _ in 0..mutations {
        let lambda = rng.gen_range(0..=4);
        let m = rng.gen_range(1..=3);
        let g = Rank1Point::random(lambda, m, false, rng);
        accepted &= g.minor_degree_check() && g.rank1_reduce_if_normalized_ok();
        let s = random_nonzero_scalar(rng);
        let top = UPoly::monomial(m as usize, s.clone());
        let mut variants = vec![g.clone(), g.clone(), g.clone(), g.clone()];
        variants[0].b = variants[0].b.add(&top);
        variants[1].c = variants[1].c.add(&top);
        let factor = if s.is_one() { KScalar::from_int(2) } else { s.clone() };
        variants[2].d = variants[2].d.scale(&factor);
        variants[3].a = variants[3].a.add(&UPoly::constant(s));
        for (k, v) in variants.iter().enumerate() {
            rejected[k] &= !v.minor_degree_check();
        }
    }
    let mut out = vec![CheckRecord::from_bool("reduction", "membership accepts slice points", accepted, format!("{mutations} random points"))];
    for (k, kind) in kinds.iter().enumerate() {
        out.push(CheckRecord::from_bool(
            "reduction",
            format!("membership rejects mutations: {kind}"),
            rejected[k],
            format!("{mutations} seeded mutations"),
        ));
    }
    out
}

impl Rank1Point {
    /// Points with `Φ = 1` also pass through the reduction formula into a valid point.
    fn rank1_reduce_if_normalized_ok(&self) -> bool {
        if self.m() == 0 || !self.phi().is_one() {
            return true;
        }
        self.rank1_reduce().map(|r| r.minor_degree_check()).unwrap_or(false)
    }
}

/// The structured report document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

/// Schema identifier of structured reports.
pub const REPORT_SCHEMA: &str = "yslice-report/1";

/// Output format of [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "structured" => Ok(Format::Structured),
            _ => Err(Error::Config(format!("unknown report format `{s}` (text|structured)"))),
        }
    }
}

/// Renders records; the structured form is pretty-printed JSON and byte-stable.
pub fn emit_report(seed: u64, records: &[CheckRecord], format: Format) -> String {
    match format {
        Format::Text => {
            let pass = records.iter().filter(|r| r.status.is_pass()).count();
            let fail = records.iter().filter(|r| r.status.is_failure()).count();
            let mut s = format!("# yslice report: seed {seed}, {} checks, {pass} passed, {fail} failed\n", records.len());
            for r in records {
                s.push_str(&r.to_string());
                s.push('\n');
            }
            s
        }
        Format::Structured => {
            let doc = Report { schema: REPORT_SCHEMA.to_string(), seed, records: records.to_vec() };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses a structured report.
pub fn parse_report(text: &str) -> Result<Report> {
    let doc: Report = serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))?;
    if doc.schema != REPORT_SCHEMA {
        return Err(Error::Config(format!("report: unsupported schema `{}`", doc.schema)));
    }
    Ok(doc)
}

/// `0` if nothing failed, `1` otherwise.
pub fn exit_code(records: &[CheckRecord]) -> i32 {
    if records.iter().any(|r| r.status.is_failure()) {
        1
    } else {
        0
    }
}
