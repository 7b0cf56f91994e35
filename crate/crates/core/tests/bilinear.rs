use mcqc_core::bilinear::*;
use mcqc_core::exactcore::{rat, ratio, QParams, Rat};
use mcqc_core::limit4d::RSubstitution;
use mcqc_core::Error;

fn pts(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(a, b)| ratio(a, b)).collect()
}

fn zero(s: &mcqc_core::exactcore::GradedSeries<Rat>) -> bool {
    s.coeffs().iter().all(|c| *c == rat(0))
}

#[test]
fn higher_pluecker_sample() {
    let t = Table::new(Model::Crystal(QParams::default_params()), 2).unwrap();
    let xs = pts(&[(1, 2), (1, 3), (1, 5), (1, 7), (2, 9), (3, 11)]);
    assert!(zero(&fay_residual(&t, 3, &xs, Form::Direct).unwrap()));
}

#[test]
fn three_term_at_other_u() {
    let p = QParams::new(ratio(-2, 5)).unwrap();
    let t = Table::new(Model::Crystal(p), 3).unwrap();
    let xs = pts(&[(1, 2), (1, 3), (1, 5), (1, 7)]);
    let general = fay_residual(&t, 2, &xs, Form::Direct).unwrap();
    let direct = fay4_residual(&t, &[xs[0].clone(), xs[1].clone(), xs[2].clone(), xs[3].clone()], Form::Direct).unwrap();
    assert!(zero(&general));
    assert_eq!(general, direct);
}

#[test]
fn hirota_miwa_at_sample() {
    let t = Table::new(Model::Crystal(QParams::default_params()), 3).unwrap();
    assert!(zero(&hirota_miwa_residual(&t, &[ratio(1, 2), ratio(1, 3), ratio(1, 5)]).unwrap()));
}

#[test]
fn bad_samples() {
    let t = Table::new(Model::Crystal(QParams::default_params()), 1).unwrap();
    let same = pts(&[(1, 2), (1, 3), (1, 2), (1, 7)]);
    assert!(matches!(fay_residual(&t, 2, &same, Form::Direct), Err(Error::DegenerateSample(_))));
    assert!(fay_residual(&t, 4, &pts(&[(1, 2); 8]), Form::Direct).is_err());
    let four = Table::new(Model::FourD(rat(1)), 2).unwrap();
    // X = 0 is a pole of the 4D insertion for lambda = (1).
    assert!(four.z(&[rat(0)]).is_err());
}

#[test]
fn four_d_both_forms() {
    let t = Table::new(Model::FourD(ratio(1, 3)), 3).unwrap();
    let xs = [rat(3), rat(5), rat(7), rat(11)];
    assert!(zero(&fay4_residual(&t, &xs, Form::Direct).unwrap()));
    assert!(zero(&fay4_residual(&t, &xs, Form::Inverse).unwrap()));
}

#[test]
fn certificates_with_couplings() {
    let p = QParams::default_params();
    let t = couplings(2, 2);
    let formal = Table::with_couplings(Model::Crystal(p.clone()), 2, &t).unwrap();
    assert!(fay_certified(&formal, 2, Form::Direct, 7).unwrap().passed());
    assert!(hirota_miwa_certified(&formal, 7).unwrap().passed());
    assert!(diff_fay_certified(&p, 2, &t, 7).unwrap().passed());
}

#[test]
fn differential_fay_sample() {
    let p = QParams::default_params();
    let r = diff_fay(&p, 1, &couplings(1, 1), &ratio(1, 2), &ratio(1, 3)).unwrap();
    assert!(r.coeffs().iter().all(|c| c.with_cutoff(Some(0)).terms().is_empty()));
}

#[test]
fn bridge_at_second_sample() {
    let sub = RSubstitution::new(ratio(1, 2), rat(1)).unwrap();
    let e = fay_bridge(&sub, &[rat(2), rat(3), rat(5), rat(8)], 2).unwrap();
    assert!(e.passed(), "{}", e.witness);
}
