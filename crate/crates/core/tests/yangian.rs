//! Symbolic Yangian checks: relation consistency of the rank-one normal form,
//! shift morphisms, gradings and the A-series in rank one.

use yslice::yangian::{filtration_degree, relation_instances, root_grading, RootGrade};
use yslice::{CartanDatum, Coweight, GenSym, NCElem, RootVec, YangianCtx};
use yslice_exact::Rat;

fn a1(mu: i64, cap: i64) -> YangianCtx {
    YangianCtx::new(CartanDatum::from_name("A1").unwrap(), Coweight(vec![mu]), cap, 16).unwrap()
}

fn g(x: GenSym) -> NCElem {
    NCElem::gen(x)
}

#[test]
fn rank_one_relations_straighten_to_zero() {
    for mu in [0, -1, -2] {
        let y = a1(mu, 16);
        for rel in relation_instances(&y.cartan, &y.mu, 4) {
            let d = y.relation_defect(&rel).unwrap();
            assert!(y.is_zero_a1(&d).unwrap(), "μ={mu}: {rel} leaves {}", y.nf_a1(&d).unwrap());
        }
    }
}

#[test]
fn normal_form_is_idempotent_and_multiplicative() {
    let y = a1(-2, 16);
    let x = g(GenSym::h(0, 3)).mul(&g(GenSym::f(0, 2))).mul(&g(GenSym::e(0, 3)));
    let z = g(GenSym::f(0, 1)).mul(&g(GenSym::e(0, 2))).add(&g(GenSym::e(0, 1)));
    let nx = y.nf_a1(&x).unwrap();
    assert_eq!(y.nf_a1(&nx).unwrap(), nx);
    let lhs = y.nf_a1(&x.mul(&z)).unwrap();
    let rhs = y.nf_a1(&nx.mul(&y.nf_a1(&z).unwrap())).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn superscript_cap_is_enforced() {
    let y = a1(0, 4);
    let x = g(GenSym::f(0, 4)).mul(&g(GenSym::e(0, 4)));
    assert!(y.nf_a1(&x).is_err());
    assert!(y.gen(GenSym::e(0, 5)).is_err());
}

#[test]
fn shifted_h_truncation() {
    let y = a1(-2, 8);
    assert!(y.gen(GenSym::h(0, 1)).unwrap().is_zero());
    assert_eq!(y.gen(GenSym::h(0, 2)).unwrap(), NCElem::one());
    // [E^{(1)}, F^{(1)}] = H^{(1)} = 0 in Y_{-2}
    let c = g(GenSym::e(0, 1)).bracket(&g(GenSym::f(0, 1)));
    assert!(y.is_zero_a1(&c).unwrap());
}

#[test]
fn shift_morphism_relabels_superscripts() {
    let y = a1(0, 8);
    let (t, img) = y
        .shift_morphism(&Coweight(vec![-1]), &Coweight(vec![-1]), &g(GenSym::e(0, 1)).mul(&g(GenSym::h(0, 2))))
        .unwrap();
    assert_eq!(t.mu, Coweight(vec![-2]));
    // ⟨μ₁, α⟩ = −2 for the A1 coweight −1 under the pairing
    let p = Coweight(vec![-1]).pairing(0);
    assert_eq!(img, g(GenSym::e(0, 1 - p)).mul(&g(GenSym::h(0, 2 - 2 * p))));
    // shift morphisms are algebra maps: relations map to relations
    for rel in relation_instances(&y.cartan, &y.mu, 3) {
        let d = y.relation_defect(&rel).unwrap();
        let (t, im) = y.shift_morphism(&Coweight(vec![-1]), &Coweight(vec![0]), &d).unwrap();
        assert!(t.is_zero_a1(&im).unwrap(), "{rel}");
    }
}

#[test]
fn gradings() {
    let x = g(GenSym::e(0, 1)).mul(&g(GenSym::f(1, 2)));
    assert_eq!(root_grading(&x, 2), RootGrade::Pure(RootVec(vec![1, -1])));
    assert_eq!(root_grading(&x.add(&NCElem::one()), 2), RootGrade::Mixed);
    assert_eq!(root_grading(&NCElem::zero(), 2), RootGrade::Empty);
    let nu1 = Coweight(vec![-1]);
    let nu2 = Coweight(vec![0]);
    let p = nu1.pairing(0);
    let x = g(GenSym::e(0, 3)).add(&g(GenSym::h(0, 1)).mul(&g(GenSym::f(0, 1))));
    assert_eq!(filtration_degree(&x, &nu1, &nu2), Some((p + 3).max(p + 2)));
    assert_eq!(filtration_degree(&NCElem::zero(), &nu1, &nu2), None);
}

#[test]
fn levendorskii_elements() {
    let y = a1(-2, 8);
    assert_eq!(y.levendorskii_s(0, 1).unwrap(), g(GenSym::h(0, 3)));
    let s2 = g(GenSym::h(0, 4)).sub(&g(GenSym::h(0, 3)).mul(&g(GenSym::h(0, 3))).scale_rat(&Rat::new(1, 2)));
    assert_eq!(y.levendorskii_s(0, 2).unwrap(), s2);
    assert!(y.levendorskii_s(0, 3).is_err());
}
