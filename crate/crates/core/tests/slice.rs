//! Classical slices: Gauss decomposition, projection, the inverse pair m/f,
//! the G_a action, rank-one reduction and the chart Poisson structure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use yslice::slice::*;
use yslice_exact::{KScalar, Rat, RatFn};

fn k(n: i64) -> KScalar {
    KScalar::from_int(n)
}

fn poly(c: &[i64]) -> UPoly {
    UPoly::from_coeffs(c.iter().map(|x| k(*x)).collect())
}

#[test]
fn gauss_of_identity_is_trivial() {
    let f = gauss_decompose(&LoopMat::identity(3), 8).unwrap();
    assert!(f.u.agrees_with(&LoopMat::identity(3)));
    assert!(f.h.agrees_with(&LoopMat::identity(3)));
    assert!(f.u_minus.agrees_with(&LoopMat::identity(3)));
}

#[test]
fn gauss_of_r_point_matches_factorization() {
    let (b, c) = (k(2), k(3));
    let g = r_point(2, 0, &b, &c).unwrap();
    let f = gauss_decompose(&g, 8).unwrap();
    // u = x(b (t − c)^{−1}), u₋ = x₋(−b^{−1}(t − c)^{−1})
    let tc_inv = poly(&[-3, 1]).to_series().inv_to(8).unwrap();
    assert!(f.u.get(0, 1).agrees_with(&tc_inv.scale_left(&b)));
    assert!(f.u_minus.get(1, 0).agrees_with(&tc_inv.scale_left(&b.inv().unwrap().neg())));
    assert!(f.recompose().agrees_with(&g));
    assert_eq!(f.diagonal_degrees().unwrap(), vec![-1, 1]);
}

#[test]
fn recomposition_reproduces_input() {
    let x = poly(&[0, 1]).to_series().inv_to(8).unwrap(); // t^{-1}
    let g = LoopMat::elementary(2, 0, 1, x.clone()).mul(&LoopMat::elementary(2, 1, 0, x));
    let f = gauss_decompose(&g, 8).unwrap();
    assert!(f.recompose().agrees_with(&g));
}

#[test]
fn projection_strips_polynomial_part() {
    let tp = LoopMat::t_pow(&[1, -1]);
    let t_plus = poly(&[0, 1]).to_series().add(&poly(&[0, 1]).to_series().inv_to(6).unwrap());
    let g = LoopMat::elementary(2, 0, 1, t_plus).mul(&tp);
    let x = poly(&[0, 1]).to_series().inv_to(6).unwrap();
    let expect = LoopMat::elementary(2, 0, 1, x).mul(&tp);
    let p = pi_project(&g, 8).unwrap();
    assert!(p.g.agrees_with(&expect), "{:?}", p.g);
    assert_eq!(p.mu, vec![1, -1]);
    // idempotence and U[t] × U₋[t] invariance
    let again = pi_project(&p.g, 8).unwrap();
    assert!(again.g.agrees_with(&p.g));
    let n = LoopMat::elementary(2, 0, 1, poly(&[5, -2, 1]).to_series());
    let nm = LoopMat::elementary(2, 1, 0, poly(&[1, 3]).to_series());
    let moved = pi_project(&n.mul(&g).mul(&nm), 8).unwrap();
    assert!(moved.g.agrees_with(&p.g));
}

#[test]
fn psi_and_moment_map() {
    let g = pi_project(&r_point(2, 0, &k(2), &k(3)).unwrap(), 8).unwrap();
    assert_eq!(psi_coeffs(&g, 0, 1).unwrap(), k(2));
    assert_eq!(psi_coeffs(&g, 0, 2).unwrap(), k(6));
    assert_eq!(moment_map(&g, 0, 2).unwrap(), KScalar::inv_sqrt(2).mul(&k(2)));
    let t = pi_project(&LoopMat::t_pow(&[2, 0]), 8).unwrap();
    assert!(moment_map(&t, 0, 1).unwrap().is_zero());
    let r = Rank1Point::r(&k(2), &k(3)).unwrap();
    assert_eq!((r.psi(1), r.psi(2)), (k(2), k(6)));
}

#[test]
fn products_of_torus_points() {
    let a = Rank1Point::torus(1);
    let b = Rank1Point::torus(2);
    assert_eq!(a.mul(&b).unwrap(), Rank1Point::torus(3));
    let p = pi_project(&LoopMat::t_pow(&[1, 0]), 8).unwrap();
    let q = pi_project(&LoopMat::t_pow(&[2, 0]), 8).unwrap();
    assert!(multiply_slices(&p, &q, 8).unwrap().g.agrees_with(&LoopMat::t_pow(&[3, 0])));
}

#[test]
fn rank_one_model_agrees_with_loop_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let g1 = Rank1Point::random(1, 2, false, &mut rng);
        let g2 = Rank1Point::random(2, 1, false, &mut rng);
        let exact = g1.mul(&g2).unwrap();
        let p1 = pi_project(&g1.to_loopmat(), 12).unwrap();
        let p2 = pi_project(&g2.to_loopmat(), 12).unwrap();
        let series = multiply_slices(&p1, &p2, 12).unwrap();
        assert!(series.g.agrees_with(&exact.to_loopmat()));
        assert_eq!(series.mu, vec![exact.lambda as i64 - exact.m() as i64, exact.m() as i64]);
    }
}

#[test]
fn m_and_f_are_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for lambda in 0..=4u32 {
        for m in 1..=3u32 {
            for _ in 0..20 {
                let g = Rank1Point::random(lambda, m, false, &mut rng);
                assert!(g.minor_degree_check());
                let (x, rest) = g.f().unwrap();
                let back = Rank1Point::from_chart(&x).unwrap().mul(&rest).unwrap();
                assert_eq!(back, g);
                // f(m(g1, g2)) = (g1, g2)
                let g1 = Rank1Point::r(&random_nonzero_scalar(&mut rng), &random_scalar(&mut rng)).unwrap();
                let g2 = Rank1Point::random(lambda, m - 1, false, &mut rng);
                let prod = g1.mul(&g2).unwrap();
                let (x, rest) = prod.f().unwrap();
                assert_eq!(Rank1Point::from_chart(&x).unwrap(), g1);
                assert_eq!(rest, g2);
                // Φ∘m = Φ∘pr₁ and equivariance
                assert_eq!(prod.phi(), g1.phi());
                let a = random_scalar(&mut rng);
                assert_eq!(g1.ga_action(&a).unwrap().mul(&g2).unwrap(), prod.ga_action(&a).unwrap());
            }
        }
    }
}

#[test]
fn product_with_r_point_has_expected_psi() {
    let g1 = Rank1Point::r(&k(2), &k(3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g2 = Rank1Point::random(2, 1, false, &mut rng);
    let p = g1.mul(&g2).unwrap();
    assert_eq!((p.psi(1), p.psi(2)), (k(2), k(6)));
}

#[test]
fn ga_action_axioms() {
    let r = Rank1Point::r(&k(2), &k(1)).unwrap();
    assert_eq!(r.ga_action(&k(3)).unwrap(), Rank1Point::r(&k(2), &k(7)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let g = Rank1Point::random(2, 2, false, &mut rng);
        let (a1, a2) = (random_scalar(&mut rng), random_scalar(&mut rng));
        assert_eq!(g.ga_action(&KScalar::zero()).unwrap(), g);
        assert_eq!(g.ga_action(&a2).unwrap().ga_action(&a1).unwrap(), g.ga_action(&a1.add(&a2)).unwrap());
    }
    // the loop-matrix action with d = 2 moves c by d^{1/2} a b
    let p = W0AlphaPoint::new(0, k(2), k(1)).unwrap();
    let q = chart_ga_action(&k(3), &p, 2, 8).unwrap();
    assert_eq!(q.c, k(1).add(&KScalar::sqrt(2).mul(&k(6))));
}

#[test]
fn shift_square_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let g1 = Rank1Point::random(1, 1, false, &mut rng);
        let g2 = Rank1Point::random(2, 2, false, &mut rng);
        let lhs = g1.mul(&g2).unwrap().shift(1, 2).unwrap();
        let rhs = g1.shift(1, 0).unwrap().mul(&g2.shift(0, 2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(g1.shift(0, 0).unwrap(), g1);
        let p = pi_project(&g1.to_loopmat(), 10).unwrap();
        let s = shift_point(&p, &[-1, 0], &[0, 0], 10).unwrap();
        assert!(s.g.agrees_with(&g1.shift(1, 0).unwrap().to_loopmat()));
    }
}

#[test]
fn rank_one_reduction() {
    let d1 = k(3);
    let g = Rank1Point::from_bcd(
        2,
        UPoly::one(),
        UPoly::constant(d1.mul(&d1).neg()),
        UPoly::t().add(&UPoly::constant(d1.clone())),
    )
    .unwrap();
    assert_eq!(g.a, UPoly::t().sub(&UPoly::constant(d1)));
    let r = g.rank1_reduce().unwrap();
    assert!(r.b.is_zero());
    assert_eq!(r.d, UPoly::one());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let lambda = rand::Rng::gen_range(&mut rng, 0..=4);
        let m = rand::Rng::gen_range(&mut rng, 1..=3);
        let g = Rank1Point::random(lambda, m, true, &mut rng);
        let r = g.rank1_reduce().unwrap();
        assert_eq!(r, g.f().unwrap().1);
        assert_eq!(r.d, g.b);
        assert!(r.minor_degree_check());
        assert_eq!(r.mu(), g.mu() + 2);
    }
}

#[test]
fn membership_checks_reject_mutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let g = Rank1Point::random(3, 2, false, &mut rng);
        assert!(g.minor_degree_check());
        let mut bad = g.clone();
        bad.b = bad.b.add(&UPoly::monomial(2, k(1)));
        assert!(!bad.minor_degree_check());
        let mut bad = g.clone();
        bad.c = bad.c.add(&UPoly::monomial(2, k(1)));
        assert!(!bad.minor_degree_check());
        let mut bad = g.clone();
        bad.d = bad.d.scale(&k(2));
        assert!(!bad.minor_degree_check());
        let mut bad = g.clone();
        bad.a = bad.a.add(&UPoly::one());
        assert!(!bad.minor_degree_check());
    }
}

#[test]
fn sl3_inverse_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let prec = 10;
    let lambda = [2, 1, 0];
    for _ in 0..5 {
        let (b1, c1) = (random_nonzero_scalar(&mut rng), random_scalar(&mut rng));
        let (b2, c2) = (random_nonzero_scalar(&mut rng), random_scalar(&mut rng));
        let g1 = pi_project(&r_point(3, 0, &b1, &c1).unwrap(), prec).unwrap();
        let r2 = pi_project(&r_point(3, 1, &b2, &c2).unwrap(), prec).unwrap();
        let t = pi_project(&LoopMat::t_pow(&lambda), prec).unwrap();
        let g2 = multiply_slices(&r2, &t, prec).unwrap();
        let g = multiply_slices(&g1, &g2, prec).unwrap();
        assert_eq!(g.mu, vec![1, 1, 1]);
        assert_eq!(moment_map(&g, 0, 1).unwrap(), b1);
        let (x, rest) = inverse_map_f(&g, 0, prec).unwrap();
        assert_eq!((x.b.clone(), x.c.clone()), (b1.clone(), c1.clone()));
        assert!(rest.g.agrees_with(&g2.g));
        let back = multiply_slices(&pi_project(&r_point(3, 0, &x.b, &x.c).unwrap(), prec).unwrap(), &rest, prec).unwrap();
        assert!(back.g.agrees_with(&g.g));
    }
}

#[test]
fn chart_poisson_structure() {
    let b = RatFn::var(VAR_B);
    let c = RatFn::var(VAR_C);
    for d in 1..=3i64 {
        let cb = chart_bracket(&c, &b, d).unwrap();
        assert_eq!(cb, b.scale(&k(d)), "d = {d}");
        assert!(chart_bracket(&b, &b, d).unwrap().is_zero());
        let phi = b.scale(&KScalar::inv_sqrt(d as u64));
        assert_eq!(chart_bracket(&phi, &c, d).unwrap(), b.scale(&KScalar::sqrt(d as u64).neg()));
        assert_eq!(quantum_cross_oracle(d).unwrap(), k(d));
        // Leibniz and antisymmetry on a triple
        let f = b.mul(&c).add(&RatFn::from_rat(Rat::new(1, 2)));
        let g = c.mul(&c);
        let h = RatFn::one().div(&b).unwrap().add(&c);
        let lhs = chart_bracket(&f, &g.mul(&h), d).unwrap();
        let rhs = chart_bracket(&f, &g, d).unwrap().mul(&h).add(&g.mul(&chart_bracket(&f, &h, d).unwrap()));
        assert_eq!(lhs, rhs);
        assert_eq!(chart_bracket(&f, &g, d).unwrap(), chart_bracket(&g, &f, d).unwrap().neg());
    }
}

#[test]
fn moment_map_generates_the_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for d in 1..=3u64 {
        for rec in moment_map_flow_check(d, 5, &mut rng).unwrap() {
            assert!(rec.status.is_pass(), "{rec}");
        }
    }
}
