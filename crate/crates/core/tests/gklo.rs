//! Difference-operator representations: relations, truncation and denominators.

use yslice::gklo::is_zero_in;
use yslice::yangian::relation_instances;
use yslice::{CartanDatum, Coweight, GenSym, GkloConfig, GkloRep, NCElem, OracleFamily, Orientation, YangianCtx};
use yslice_exact::Rat;

fn cfg(name: &str, lambda: Vec<i64>, mu: Vec<i64>, r: Vec<Vec<i64>>) -> GkloConfig {
    let c = CartanDatum::from_name(name).unwrap();
    let r = r.into_iter().map(|v| v.into_iter().map(Rat::from_int).collect()).collect();
    GkloConfig::new(c, Coweight(lambda), Coweight(mu), r).unwrap()
}

fn rep(name: &str, lambda: Vec<i64>, mu: Vec<i64>, r: Vec<Vec<i64>>) -> GkloRep {
    GkloRep::new(cfg(name, lambda, mu, r)).unwrap()
}

fn check_relations(rep: &GkloRep, cap: i64) {
    for rel in relation_instances(rep.cartan(), &rep.config().mu, cap) {
        let d = rep.relation_defect(&rel).unwrap();
        assert!(d.is_zero(), "{rel}: {d}");
    }
}

#[test]
fn a1_relations_hold() {
    check_relations(&rep("A1", vec![2], vec![0], vec![vec![0, 0]]), 4);
    check_relations(&rep("A1", vec![1], vec![-1], vec![vec![3]]), 4);
    check_relations(&rep("A1", vec![0], vec![-2], vec![vec![]]), 4);
    check_relations(&rep("A1", vec![3], vec![1], vec![vec![1, -1, 2]]), 4);
}

#[test]
fn a2_relations_hold() {
    check_relations(&rep("A2", vec![1, 1], vec![0, 0], vec![vec![1], vec![2]]), 3);
    check_relations(&rep("A2", vec![0, 0], vec![-1, -1], vec![vec![], vec![]]), 3);
}

#[test]
fn a2_relations_hold_for_reversed_orientation() {
    let r = GkloRep::new(cfg("A2", vec![1, 1], vec![0, 0], vec![vec![1], vec![2]]).with_orientation(Orientation::Decreasing))
        .unwrap();
    check_relations(&r, 3);
}

#[test]
fn a3_relations_hold() {
    check_relations(&rep("A3", vec![1, 0, 1], vec![0, 0, 0], vec![vec![0], vec![], vec![1]]), 2);
}

#[test]
fn b2_relations_hold() {
    // λ − μ = 2α₁^∨ + α₂^∨ with μ = (−1, 1)
    check_relations(&rep("B2", vec![1, 1], vec![-1, 1], vec![vec![1], vec![0]]), 3);
}

#[test]
fn truncation_of_a_series() {
    for r in [
        rep("A1", vec![2], vec![0], vec![vec![0, 0]]),
        rep("A1", vec![1], vec![-1], vec![vec![5]]),
        rep("A2", vec![1, 1], vec![0, 0], vec![vec![1], vec![2]]),
        rep("B2", vec![1, 1], vec![-1, 1], vec![vec![1], vec![0]]),
    ] {
        assert_eq!(r.truncation_mismatches(3).unwrap(), vec![]);
    }
}

#[test]
fn a_series_first_coefficient_example() {
    // λ = 2, μ = 0, R = {0, 0}: A^{(1)} = (1 − H^{(1)})/2 = −(w₁ + w₂)
    let r = rep("A1", vec![2], vec![0], vec![vec![0, 0]]);
    let a = r.a_images(1).unwrap();
    let h1 = r.image(GenSym::h(0, 1)).unwrap();
    let expect = yslice::DiffOp::one(r.space()).add(&h1.neg()).scale(&yslice_exact::KScalar::from_rat(Rat::new(1, 2)));
    assert_eq!(a[0][1], expect);
    assert_eq!(a[0][1], r.a_expected(0, 1));
}

#[test]
fn denominators_are_admissible() {
    let r = rep("A2", vec![1, 1], vec![-1, -1], vec![vec![1], vec![2]]);
    for g in [GenSym::e(0, 2), GenSym::f(1, 3), GenSym::h(0, 4)] {
        let x = r.image(g).unwrap();
        assert!(r.denominators_admissible(&x), "{g}: {x}");
        let y = x.mul(&r.image(GenSym::e(1, 1)).unwrap());
        assert!(r.denominators_admissible(&y));
    }
}

#[test]
fn normal_form_agrees_with_representation() {
    let ctx = YangianCtx::new(CartanDatum::from_name("A1").unwrap(), Coweight(vec![-1]), 12, 12).unwrap();
    let r = rep("A1", vec![1], vec![-1], vec![vec![2]]);
    let x = NCElem::gen(GenSym::h(0, 3))
        .mul(&NCElem::gen(GenSym::f(0, 2)))
        .mul(&NCElem::gen(GenSym::e(0, 2)))
        .add(&NCElem::gen(GenSym::f(0, 1)).mul(&NCElem::gen(GenSym::f(0, 3))));
    let nf = ctx.nf_a1(&x).unwrap();
    assert_eq!(r.image_elem(&x).unwrap(), r.image_elem(&nf).unwrap());
}

#[test]
fn oracle_zero_test() {
    let c = CartanDatum::from_name("A2").unwrap();
    let mu = Coweight(vec![0, 0]);
    let ctx = YangianCtx::new(c.clone(), mu.clone(), 8, 8).unwrap();
    let fam = OracleFamily::standard(&c, &mu, &[vec![1, 1], vec![1, 2]], 1).unwrap();
    // E₁ and E₂ at equal superscript do not commute, but Serre combinations vanish
    let e1 = NCElem::gen(GenSym::e(0, 1));
    let e2 = NCElem::gen(GenSym::e(1, 1));
    assert!(!is_zero_in(&ctx, Some(&fam), &e1.bracket(&e2)).unwrap());
    let serre = e1.bracket(&e1.bracket(&e2));
    assert!(is_zero_in(&ctx, Some(&fam), &serre).unwrap());
    assert!(is_zero_in(&ctx, None, &serre).is_err());
}
