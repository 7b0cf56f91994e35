use mcqc_core::exactcore::{rat, ratio, QParams, Rat, RatFun};
use mcqc_core::partfun::*;
use mcqc_core::partitions::Partition;
use mcqc_core::Error;

fn q_over_one_minus_q_sq(p: &QParams) -> Rat {
    let q = p.q().clone();
    &q / ((rat(1) - &q) * (rat(1) - &q))
}

#[test]
fn first_orders_without_insertions() {
    let p = QParams::default_params();
    let z = z5d_numeric(&p, 0, &[], 2).unwrap();
    assert_eq!(z.coeff(0).unwrap(), &rat(1));
    assert_eq!(z.coeff(1).unwrap(), &q_over_one_minus_q_sq(&p));
}

#[test]
fn single_box_with_formal_insertion() {
    // [Q^1] Z(x) = q/(1-q)^2 (1 - q^{1/2} x)/(1 - q^{-1/2} x)
    let p = QParams::default_params();
    let z = z5d_x(&p, 1).unwrap();
    let h = p.u_pow(4);
    let factor = RatFun::linear_fraction(rat(1), -h.clone(), rat(1), -h.recip()).unwrap();
    assert_eq!(z.coeff(1).unwrap(), &factor.scale(&q_over_one_minus_q_sq(&p)));
}

#[test]
fn plancherel_sum() {
    // sum_{|lambda| = n} (dim/n!)^2 = 1/n!
    let z = z4d_numeric(&rat(1), &[], 4).unwrap();
    let want = [rat(1), rat(1), ratio(1, 2), ratio(1, 6), ratio(1, 24)];
    assert_eq!(z.coeffs(), &want);
}

#[test]
fn coupling_derivative_at_one_box() {
    // d/dt_1 [Q^1] Z = s_(1)^2 phi_1((1)) = q/(1-q)^2 (q - 1)
    let p = QParams::default_params();
    let t = formal_couplings(1, 1);
    let z = z5d(&p, &t, 0, &[], 1).unwrap();
    let c = z.coeff(1).unwrap().coeff(&[1]);
    assert_eq!(c, q_over_one_minus_q_sq(&p) * (p.q() - rat(1)));
}

#[test]
fn insertion_pole() {
    let p = QParams::default_params();
    let one = Partition::new(vec![1]).unwrap();
    let x = p.u_pow(4);
    assert!(matches!(insertion_factor(&p, &one, &x), Err(Error::InsertionPole(_))));
    assert!(matches!(z5d_numeric(&p, 0, &[x], 2), Err(Error::InsertionPole(_))));
}

#[test]
fn fermionic_forms_small_window() {
    let p = QParams::default_params();
    let w = Window { ncut: 3, kmax: 2, dt: 2 };
    for c in [Crosscheck::ZtEH, Crosscheck::ZtG1, Crosscheck::ZtDual, Crosscheck::Z4dEH] {
        let e = crosscheck_fermionic(&p, c, w).unwrap();
        assert!(e.iter().all(|e| e.passed()), "{c:?}: {e:?}");
    }
}

#[test]
fn substitution_into_couplings() {
    let p = QParams::default_params();
    assert!(check_t_x_substitution(&p, 3, 8, &ratio(1, 3)).unwrap().passed());
    assert!(check_t_x_substitution_4d(&rat(1), 3, 8).unwrap().passed());
}
