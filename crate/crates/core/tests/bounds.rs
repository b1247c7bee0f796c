mod support;

use randgroups::bounds::{
    alpha, bootstrap_beta, counterexample_margin, delta_bound, geometric_deficit, greendlinger_threshold, main_assembly,
    side_conditions,
};
use support::precise::{self, Fixed};

fn near(x: f64, reference: &Fixed, tol: f64) -> bool {
    (x - reference.to_f64()).abs() <= tol * reference.to_f64().abs().max(1.0)
}

#[test]
fn oracle_arithmetic() {
    assert!((Fixed::ln2().to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
    assert!((Fixed::int(2).sqrt().to_f64() - std::f64::consts::SQRT_2).abs() < 1e-16);
    assert!((Fixed::int(10).ln().to_f64() - std::f64::consts::LN_10).abs() < 1e-15);
    assert_eq!(Fixed::from_f64(0.5), Fixed::ratio(1, 2));
}

#[test]
fn alpha_against_oracle() {
    assert_eq!(alpha(1.0 - (-1.0f64).exp()).unwrap(), 1.0);
    for k in 1..100 {
        let c = k as f64 / 100.0;
        let reference = precise::alpha(&Fixed::from_f64(c));
        assert!(near(alpha(c).unwrap(), &reference, 1e-13), "c = {c}");
        assert!(alpha(c).unwrap() <= 1.0 / c);
    }
}

#[test]
fn deficit_against_oracle() {
    let reference = precise::geometric_deficit();
    assert!((geometric_deficit() - reference.to_f64()).abs() < 1e-12);
    assert!((reference.to_f64() - 13.4807).abs() < 1e-4);
    assert_eq!(reference.cmp_f64(14.0), std::cmp::Ordering::Less);
}

#[test]
fn bootstrap_against_oracle() {
    let beta = Fixed::ratio(1, 2);
    for exp in 1..=6 {
        let a = 10f64.powi(exp);
        let report = bootstrap_beta(0.5, a, 300).unwrap();
        let reference = precise::lemma_scale_infimum(&beta, &Fixed::from_f64(a), 300);
        assert!((report.lemma_scale.infimum - reference.to_f64()).abs() < 1e-12, "A = {a}");
        let claimed = beta.clone() - Fixed::int(14) / Fixed::from_f64(a).sqrt();
        assert!(reference >= claimed);
        assert!(report.lemma_scale_holds);
        assert!(!report.as_displayed_holds);
    }
}

#[test]
fn side_conditions_against_oracle() {
    for k in 1..=20 {
        let c = k as f64 * 0.05;
        let report = side_conditions(c, 3000.0 / c.powi(4)).unwrap();
        let (halves, cheap, cut) = precise::side_conditions(&Fixed::from_f64(c));
        assert_eq!((report.halves_fit, report.cut_is_cheap), (halves, cheap), "C = {c}");
        assert!(halves && cheap);
        assert!(near(report.cut_term, &cut, 1e-12));
    }
}

#[test]
fn closed_forms() {
    assert_eq!(delta_bound(100.0, 0.25, 0.0).unwrap(), 4800.0);
    let t = greendlinger_threshold(60.0, 0.1, 0.05);
    assert!((t.consecutive - 43.5).abs() < 1e-12);
    assert!((t.total - 42.0).abs() < 1e-12);
    let margin = counterexample_margin(1000.0, 0.25, 0.001, 0.001).unwrap();
    assert!(margin.contradiction);
    let asm = main_assembly(0.5, 0.1).unwrap();
    assert!(asm.k >= 3000.0 / 0.5f64.powi(5));
    assert!(asm.final_deficit <= 0.05 + 1e-12);
}
