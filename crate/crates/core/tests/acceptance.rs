//! Acceptance criteria 1–10, verified exactly (tolerance zero).
//!
//! Prints one `PASS`/`FAIL` line per criterion with its wall time and budget.
//! Criterion 1 names a B2 case (λ = (1,1), μ = (0,0)) for which λ − μ is not
//! in the coroot lattice; that case is reported as a failure with the
//! dominance error as witness, and the valid B2 case λ = (1,1), μ = (−1,1) is
//! checked next to it.  The process exits non-zero if any check fails for a
//! reason other than that one.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use yslice::coprod::{ad_nilpotency_check, delta_bar_e_check, explicit_comult_check, f_left_grade_check, qhr_check, ExplicitComult};
use yslice::harness::{
    antidominant_pairs, homomorphism_check, inverse_pair_checks, membership_checks, poisson_structure_check, sl3_spot_check,
    Group, Suite,
};
use yslice::report::{CheckRecord, Status};
use yslice::slice::moment_map_flow_check;
use yslice::{CartanDatum, CoprodCtx, Coweight, GkloConfig, OracleFamily, YangianCtx};
use yslice_exact::Rat;

const SEED: u64 = 20261019;

/// Outcome of one criterion.
struct Outcome {
    records: Vec<CheckRecord>,
    /// Failures that are inherent to the criterion's stated data.
    known: Vec<String>,
}

impl Outcome {
    fn of(records: Vec<CheckRecord>) -> Self {
        Outcome { records, known: Vec::new() }
    }
}

fn suite(toml: &str) -> Suite {
    Suite::from_toml(toml).expect("valid acceptance suite")
}

fn relation_suites() -> Vec<Suite> {
    let head = |c: &str| format!("cartan = \"{c}\"\nseed = {SEED}\n[caps]\nsuperscript = 4\norder = 3\n");
    vec![
        suite(&format!(
            "{}[[cases]]\nlambda = [2]\nmu = [0]\nr = [[\"0\", \"1/2\"]]\n[[cases]]\nlambda = [2]\nmu = [-2]\nr = [[\"1\", \"1/2\"]]\n",
            head("A1")
        )),
        suite(&format!("{}[[cases]]\nlambda = [1, 1]\nmu = [0, 0]\nr = [[\"1\"], [\"1/2\"]]\n", head("A2"))),
        suite(&format!("{}[[cases]]\nlambda = [1, 1]\nmu = [-1, 1]\nr = [[\"0\"], [\"1\"]]\n", head("B2"))),
    ]
}

fn invalid_b2_case() -> Option<String> {
    let c = CartanDatum::from_name("B2").unwrap();
    let r = vec![vec![Rat::from_int(0)], vec![Rat::new(1, 2)]];
    match GkloConfig::new(c, Coweight(vec![1, 1]), Coweight(vec![0, 0]), r) {
        Ok(_) => None,
        Err(e) => Some(format!("B2 λ=(1,1) μ=(0,0) is not a valid case: {e}")),
    }
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::of(relation_suites().iter().flat_map(|s| s.run_group(Group::Relations)).collect());
    if let Some(reason) = invalid_b2_case() {
        out.known.push(reason);
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::of(relation_suites().iter().flat_map(|s| s.run_group(Group::Truncation)).collect());
    if let Some(reason) = invalid_b2_case() {
        out.known.push(reason);
    }
    out
}

fn criterion_3() -> Outcome {
    let q = |v: &[i64]| v.iter().map(|x| Rat::from_int(*x)).collect::<Vec<_>>();
    let mut recs = Vec::new();
    let a1 = CartanDatum::from_name("A1").unwrap();
    let a2 = CartanDatum::from_name("A2").unwrap();
    let jobs = vec![
        (a1, vec![2], vec![0], vec![q(&[0, 1])], vec![0usize], 2usize),
        (a2, vec![1, 1], vec![0, 0], vec![q(&[0]), q(&[1])], vec![0, 1], 1),
    ];
    for (c, lambda, mu, r, nodes, m_i) in jobs {
        for node in nodes {
            let data = ExplicitComult {
                cartan: c.clone(),
                lambda: Coweight(lambda.clone()),
                mu: Coweight(mu.clone()),
                r_params: r.clone(),
                node,
                order: m_i + 3,
            };
            match explicit_comult_check(&data, 10) {
                Ok(v) => recs.extend(v),
                Err(e) => recs.push(CheckRecord::from_error("coproduct", format!("explicit comult {} i={}", c.name(), node + 1), &e)),
            }
        }
    }
    Outcome::of(recs)
}

fn criterion_4() -> Outcome {
    let mut recs = Vec::new();
    let a1 = CartanDatum::from_name("A1").unwrap();
    let ctx = YangianCtx::new(a1, Coweight(vec![-2]), 6, 64).unwrap();
    match ad_nilpotency_check(&ctx, 0, None) {
        Ok(v) => {
            // rank one is decided by the normal form, so every record must be a plain pass
            recs.extend(v.into_iter().map(|r| if r.status == Status::Pass { r } else { CheckRecord { status: Status::Fail, ..r } }));
        }
        Err(e) => recs.push(CheckRecord::from_error("coproduct", "A1 ad-nilpotency", &e)),
    }
    let a2 = CartanDatum::from_name("A2").unwrap();
    let mu = Coweight(vec![-2, -2]);
    let ctx = YangianCtx::new(a2.clone(), mu.clone(), 6, 64).unwrap();
    let oracle = OracleFamily::standard(&a2, &mu, &[vec![2, 2], vec![3, 3]], 7).unwrap();
    for i in 0..2 {
        let o = oracle.with_orientation(OracleFamily::lean_orientation(&a2, i)).unwrap();
        match ad_nilpotency_check(&ctx, i, Some(&o)) {
            Ok(v) => recs.extend(v.into_iter().map(|r| {
                if r.status == Status::OracleRelativePass {
                    r
                } else {
                    CheckRecord { status: Status::Fail, ..r }
                }
            })),
            Err(e) => recs.push(CheckRecord::from_error("coproduct", "A2 ad-nilpotency", &e)),
        }
    }
    Outcome::of(recs)
}

fn criterion_5() -> Outcome {
    let mut recs = Vec::new();
    for name in ["A1", "A2"] {
        let c = CartanDatum::from_name(name).unwrap();
        for (l, r, _) in antidominant_pairs(&c) {
            recs.extend(homomorphism_check(&c, &l, &r, 3, false));
        }
        for i in 0..c.rank() {
            let mu = Coweight(vec![0; c.rank()]);
            recs.push(delta_bar_e_check(&c, &mu, i, 8).unwrap_or_else(|e| CheckRecord::from_error("coproduct", "Δ̄(E)", &e)));
            let alpha = c.coroot(i);
            match CoprodCtx::with_minimal_shifts(c.clone(), alpha.neg(), mu.add(&alpha), 8) {
                Ok(cop) => {
                    for j in 0..c.rank() {
                        recs.push(f_left_grade_check(&cop, j).unwrap_or_else(|e| CheckRecord::from_error("coproduct", "Δ(F) grade", &e)));
                    }
                }
                Err(e) => recs.push(CheckRecord::from_error("coproduct", "Δ(F) grade", &e)),
            }
        }
    }
    Outcome::of(recs)
}

fn criterion_6() -> Outcome {
    Outcome::of(qhr_check(20))
}

fn criterion_7() -> Outcome {
    let mut recs = Vec::new();
    for lambda in 0..=4u32 {
        for m in 1..=3u32 {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10 * lambda as u64 + m as u64);
            recs.extend(inverse_pair_checks(lambda, m, 100, &mut rng));
        }
    }
    recs.push(sl3_spot_check(20, 12, &mut ChaCha8Rng::seed_from_u64(SEED)));
    Outcome::of(recs)
}

fn classical_suite() -> Suite {
    suite(&format!("cartan = \"A1\"\nseed = {SEED}\n[caps]\npoints = 100\n"))
}

fn criterion_8() -> Outcome {
    let recs = classical_suite().run_group(Group::Reduction);
    Outcome::of(recs.into_iter().filter(|r| r.name.contains("rank-one reduction")).collect())
}

fn criterion_9() -> Outcome {
    let mut recs = Vec::new();
    for d in 1..=3i64 {
        recs.push(poisson_structure_check(d));
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + d as u64);
        match moment_map_flow_check(d as u64, 5, &mut rng) {
            Ok(v) => recs.extend(v),
            Err(e) => recs.push(CheckRecord::from_error("classical", format!("moment map flow d={d}"), &e)),
        }
    }
    Outcome::of(recs)
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut recs = membership_checks(&mut rng, 50);
    let reduction = classical_suite().run_group(Group::Reduction);
    recs.extend(reduction.into_iter().filter(|r| r.name.contains("lands in the smaller slice")));
    Outcome::of(recs)
}

fn main() {
    let criteria: Vec<(u32, &str, u64, fn() -> Outcome)> = vec![
        (1, "relation suite under the difference-operator representations", 120, criterion_1),
        (2, "truncation kernel of the A-series", 30, criterion_2),
        (3, "explicit comultiplication of A_i(u)", 180, criterion_3),
        (4, "ad-nilpotency identities behind the localization", 30, criterion_4),
        (5, "coproduct is an algebra map; Δ̄(E); grading of Δ(F)", 180, criterion_5),
        (6, "Hamiltonian reduction of D(C^x) and the rank-one presentation", 5, criterion_6),
        (7, "classical inverse pair m/f, equivariance, Φ∘m = Φ∘pr1, SL3 spot check", 120, criterion_7),
        (8, "rank-one reduction formula", 30, criterion_8),
        (9, "chart Poisson bracket, moment-map flows, quantum cross-oracle", 10, criterion_9),
        (10, "membership test and mutation rejection", 10, criterion_10),
    ];
    let mut unexpected = 0;
    for (k, title, budget, run) in criteria {
        let t = Instant::now();
        let out = run();
        let elapsed = t.elapsed();
        let bad: Vec<&CheckRecord> = out.records.iter().filter(|r| !matches!(r.status, Status::Pass | Status::OracleRelativePass)).collect();
        let pass = bad.is_empty() && out.known.is_empty();
        let timing = format!("{:.1}s / budget {budget}s", elapsed.as_secs_f64());
        println!(
            "{} criterion {k:>2}: {title} ({} checks, {timing}){}",
            if pass { "PASS" } else { "FAIL" },
            out.records.len(),
            if elapsed > Duration::from_secs(budget) { " [over budget]" } else { "" },
        );
        for reason in &out.known {
            println!("      unattainable: {reason}");
        }
        for r in &bad {
            println!("      {r}");
        }
        unexpected += bad.len();
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance checks failed");
        std::process::exit(1);
    }
}
