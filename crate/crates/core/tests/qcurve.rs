use mcqc_core::exactcore::{rat, ratio, GradedSeries, Poly, QParams, RatFun};
use mcqc_core::qcurve::*;

fn shift(p: &QParams) -> Shift {
    Shift::Scale(p.q().clone())
}

#[test]
fn sigma_moves_past_x() {
    // q^D x = q x q^D
    let p = QParams::default_params();
    let s = shift(&p);
    let lhs = DiffOp::sigma(s.clone(), 1).compose(&DiffOp::mult(s.clone(), RatFun::x()));
    let rhs = DiffOp::mult(s.clone(), RatFun::x().scale(p.q())).compose(&DiffOp::sigma(s, 1));
    assert!(lhs.sub(&rhs).is_zero());
}

#[test]
fn inverse_factors_compose_to_identity() {
    let p = QParams::default_params();
    let s = shift(&p);
    let h = p.u_pow(4);
    let f = RatFun::from_poly(Poly::linear(rat(1), -h));
    let a = DiffOp::mult(s.clone(), f.clone()).compose(&DiffOp::sigma(s.clone(), 1));
    let b = DiffOp::sigma(s.clone(), -1).compose(&DiffOp::mult(s.clone(), f.inv().unwrap()));
    assert!(a.compose(&b).sub(&DiffOp::identity(s)).is_zero());
}

#[test]
fn a_annihilates_one_at_q0() {
    let p = QParams::default_params();
    let a = build_a(&p, AForm::Sum).unwrap().graded(0);
    let one = GradedSeries::constant(RatFun::constant(rat(1)), 0);
    let r = a.apply(&one).sub(&one);
    assert!(r.coeff(0).unwrap().is_zero());
}

#[test]
fn curve_and_forms() {
    let p = QParams::default_params();
    assert!(check_a_forms(&p).unwrap().passed());
    assert!(qcurve_residual(&p, 3).unwrap().passed());
    let other = QParams::new(ratio(3, 5)).unwrap();
    assert!(qcurve_residual(&other, 2).unwrap().passed());
}

#[test]
fn four_d_curve() {
    assert!(residual_4d(&rat(1), 4).unwrap().passed());
    assert!(residual_4d(&ratio(2, 7), 3).unwrap().passed());
}

#[test]
fn phi_constant_is_u() {
    let p = QParams::default_params();
    let e = z_phi0_constant(&p, 2, 8).unwrap();
    assert!(e.passed());
    assert_eq!(e.witness["C_equals_u"], true);
}

#[test]
fn kac_schwarz_low_window() {
    let p = QParams::default_params();
    assert!(kac_schwarz_check(&p, 2, 8, 2).unwrap().passed());
}
