use mcqc_core::exactcore::{rat, QParams, Rat};
use mcqc_core::fock::*;
use mcqc_core::partitions::{enumerate_partitions, schur_principal, Partition};

fn ctx(n: u32, cap: i64) -> FockCtx {
    FockCtx { params: QParams::default_params(), size_cutoff: n, grade_cap: cap }
}

#[test]
fn commutator_vev() {
    // <0|[J_1, J_-1]|0> = 1
    let c = ctx(2, 0);
    let a = vev::<Rat>(&c, 0, &[Op::J(1)], &[Op::J(-1)]).unwrap();
    let b = vev::<Rat>(&c, 0, &[Op::J(-1)], &[Op::J(1)]).unwrap();
    assert_eq!(a.sub(&b).coeffs()[0], rat(1));
}

#[test]
fn single_variable_vertex() {
    // Gamma_-(x)|0> = sum_n x^n |(n)>
    let c = ctx(5, 0);
    let x = rat(3);
    let v = apply_chain(&c, 0, &[vertex_at(VertexKind::Plain, true, &x, 5, None, 0)]).unwrap();
    for l in enumerate_partitions(5) {
        let want = if l.len() <= 1 { x.pow(l.size() as i32) } else { rat(0) };
        assert_eq!(v.amplitude(&l).coeffs()[0], want, "{l:?}");
    }
}

#[test]
fn specialized_vertex_gives_schur_values() {
    let p = QParams::default_params();
    let c = ctx(5, 0);
    let g = vertex_rho(&p, VertexKind::Plain, true, false, 0, 5, 0).unwrap();
    let v = apply_chain(&c, 0, &[g]).unwrap();
    for l in enumerate_partitions(5) {
        assert_eq!(v.amplitude(&l).coeffs()[0], schur_principal(&p, &l).unwrap(), "{l:?}");
    }
}

#[test]
fn crystal_vev_through_q2() {
    // <0|Gamma_+ Q^L0 Gamma_-|0> = sum s_lambda^2 Q^|lambda|
    let p = QParams::default_params();
    let c = FockCtx { params: p.clone(), size_cutoff: 2, grade_cap: 2 };
    let gp = vertex_rho(&p, VertexKind::Plain, false, false, 0, 2, 2).unwrap();
    let gm = vertex_rho(&p, VertexKind::Plain, true, false, 0, 2, 2).unwrap();
    let z = vev(&c, 0, &[gp], &[Op::GradingPowerL0, gm]).unwrap();
    for n in 0..=2 {
        let want = enumerate_partitions(2)
            .iter()
            .filter(|l| l.size() == n)
            .map(|l| schur_principal(&p, l).unwrap().pow(2))
            .fold(rat(0), |a, b| a + b);
        assert_eq!(z.coeff(n as usize).unwrap(), &want);
    }
}

#[test]
fn charge_mismatch_reported() {
    let c = ctx(2, 0);
    let bra = bra_chain::<Rat>(&c, 1, &[]).unwrap();
    let ket = FockVector::<Rat>::ground(&c, 0);
    assert!(bra.pair(&ket).is_err());
}

#[test]
fn kappa_is_diagonal() {
    let p = QParams::default_params();
    let two = Partition::new(vec![2]).unwrap();
    let col = Partition::new(vec![1, 1]).unwrap();
    assert_eq!(eigenvalue(&p, Diagonal::K, 0, &two), -eigenvalue(&p, Diagonal::K, 0, &col));
}
