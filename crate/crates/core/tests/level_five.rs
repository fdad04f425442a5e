use std::sync::Arc;
use std::time::Instant;

use periodpoly::analytic::eta_product;
use periodpoly::cosets::{CosetSpace, GroupKind};
use periodpoly::exactalg::Scalar;
use periodpoly::hecke::{common_eigen_polynomial, manin_coefficient, solve_universal_hecke, Normalization, SigmaSpec};
use periodpoly::polyspace::{build_coboundary_and_d, build_w, eps_split};

fn level5_plus() -> (Arc<CosetSpace>, periodpoly::polyspace::PolyVector) {
    let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, 5, 4).unwrap());
    let (plus, _) = eps_split(&build_w(&sp).unwrap()).unwrap();
    let p = common_eigen_polynomial(&plus, &[(2, Scalar::from(-4))], Normalization::Plus).unwrap();
    (sp, p)
}

#[test]
fn manin_coefficients_match_eta_product() {
    let (sp, p) = level5_plus();
    let q = eta_product(&[(1, 4), (5, 4)], 101).unwrap();
    for n in 1..=30 {
        let t = solve_universal_hecke(n, n).unwrap();
        let got = manin_coefficient(&p, &t, &SigmaSpec::delta(&sp, n).unwrap()).unwrap();
        assert_eq!(got, Scalar::Rational(q.coeff(n as usize).unwrap().clone()), "n = {n}");
    }
    let start = Instant::now();
    let t = solve_universal_hecke(101, 101).unwrap();
    let got = manin_coefficient(&p, &t, &SigmaSpec::delta(&sp, 101).unwrap()).unwrap();
    assert_eq!(got, Scalar::Rational(q.coeff(101).unwrap().clone()));
    assert!(start.elapsed().as_secs_f64() < 5.0, "{:?}", start.elapsed());
}

#[test]
fn level_hundred_dimensions() {
    let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, 100, 6).unwrap());
    assert_eq!(sp.index(), 180);
    let (plus, minus) = eps_split(&build_w(&sp).unwrap()).unwrap();
    let (c, _) = build_coboundary_and_d(&sp).unwrap();
    assert_eq!((plus.dim(), minus.dim()), (78, 72));
    assert_eq!((plus.dim() + minus.dim() - c.dim()) / 2, 66);
}
