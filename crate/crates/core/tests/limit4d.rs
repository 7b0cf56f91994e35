use mcqc_core::exactcore::{rat, ratio, Rat, RatFun, RSeries};
use mcqc_core::limit4d::*;
use mcqc_core::partitions::Partition;

fn sub() -> RSubstitution {
    RSubstitution::new(rat(1), rat(1)).unwrap()
}

fn part(p: &[u32]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

#[test]
fn empty_partition_weight_is_one() {
    let t: RSeries = weight_term(&sub(), &Partition::empty(), &[rat(5)]).unwrap();
    assert_eq!(t.truncate(4).normalized(), RSeries::one(4).normalized());
}

#[test]
fn single_box_weight_limit() {
    // constant term (Lambda/hbar)^2 (X - hbar)/X at X = 5
    let t: RSeries = weight_term(&sub(), &part(&[1]), &[rat(5)]).unwrap();
    assert!(t.pole_part().is_empty());
    assert_eq!(t.coeff(0).unwrap(), ratio(4, 5));
}

#[test]
fn finite_differences_of_potentials() {
    // lambda = (2,1), k = 2: R^2 coefficient 3 hbar^2
    let (s, want) = phi_finite_diff(&sub(), &part(&[2, 1]), 2).unwrap();
    assert_eq!(want, rat(3));
    assert_eq!(s.coeff(2).unwrap(), rat(3));
    assert_eq!(s.coeff(1).unwrap(), rat(0));
    let (s1, w1) = phi_finite_diff(&sub(), &part(&[1]), 1).unwrap();
    assert_eq!(w1, rat(-1));
    assert_eq!(s1.coeff(1).unwrap(), rat(-1));
}

#[test]
fn couplings_in_terms_of_4d_times() {
    // T = (T_1): t_1 = -T_1/(R hbar)
    let hbar = ratio(1, 2);
    let t = t_of_t::<Rat>(&hbar, &[rat(3)], 3);
    assert_eq!(t[0].coeff(-1).unwrap(), rat(-6));
    // T = (0, T_2): t_1 = -2 T_2/(R hbar)^2, t_2 = T_2/(R hbar)^2
    let t = t_of_t::<Rat>(&hbar, &[rat(0), rat(1)], 3);
    assert_eq!(t[0].coeff(-2).unwrap(), rat(-8));
    assert_eq!(t[1].coeff(-2).unwrap(), rat(4));
}

#[test]
fn potential_limits() {
    let (ok, _) = potential_limit_check(&sub(), &part(&[1]), &[rat(2)]).unwrap();
    assert!(ok);
    let (ok, _) = potential_limit_check(&sub(), &part(&[3, 1]), &[rat(1), ratio(-1, 3), rat(2)]).unwrap();
    assert!(ok);
}

#[test]
fn operator_expansion_first_order() {
    let f = RatFun::x();
    let e = operator_expansion(&sub(), &f).unwrap();
    assert!(e.pole_part().is_empty());
    assert_eq!(e.coeff(1).unwrap(), operator_first_order(&sub(), &f).unwrap());
    let pole_at_zero = RatFun::x().inv().unwrap();
    assert!(operator_expansion(&sub(), &pole_at_zero).is_err());
}

#[test]
fn numeric_slope_near_one() {
    let r = numeric_rate(&sub(), 5.0, 3, &[1e-2, 1e-3, 1e-4]).unwrap();
    assert!((r.slope - 1.0).abs() <= 0.1, "{}", r.slope);
    assert!(!r.loss_of_precision);
}
