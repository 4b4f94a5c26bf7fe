use kapteyn_core::series::Coefficients;
use kapteyn_core::zeros::{find_zeros, local_scale, winding_count, ZeroReport, DEFAULT_MAX_DEPTH};
use kapteyn_core::{Family, Section, SeriesSpec, WindowBox};
use kapteyn_oracles::polynomial_roots;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn nearest(points: &[Complex64], z: Complex64) -> f64 {
    points.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

#[test]
fn cubic_matches_companion() {
    // (z - 1)(z + 0.5)(z - 2i) expanded
    let roots = [c(1.0, 0.0), c(-0.5, 0.0), c(0.0, 2.0)];
    let mut coeffs = vec![c(1.0, 0.0)];
    for r in roots {
        let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
        for (k, a) in coeffs.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        coeffs = next;
    }
    let section = Section::polynomial(&coeffs);
    let report = find_zeros(&section, &WindowBox::square(3.0).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(report.total_winding, 3);
    assert_eq!(report.multiplicity_total(), 3);
    for r in roots {
        assert!(nearest(&report.points(), r) < 1e-10, "{r}");
    }
}

#[test]
fn double_root_is_reported_once_with_multiplicity() {
    // (z - 0.3)^2 (z + 1)
    let section = Section::polynomial(&[c(0.09, 0.0), c(-0.51, 0.0), c(0.4, 0.0), c(1.0, 0.0)]);
    let report = find_zeros(&section, &WindowBox::square(2.0).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(report.total_winding, 3);
    assert_eq!(report.multiplicity_total(), 3);
    let dbl = report.zeros.iter().find(|z| (z.z - c(0.3, 0.0)).norm() < 1e-6).expect("double zero");
    assert_eq!(dbl.multiplicity, 2);
}

#[test]
fn lagrange_section_zeros_are_consistent() {
    let section = SeriesSpec::kepler_lagrange(0.2).section(25).unwrap();
    let window = WindowBox::square(1.5).unwrap();
    let report = find_zeros(&section, &window, DEFAULT_MAX_DEPTH).unwrap();
    assert!(report.unresolved.is_empty());
    assert_eq!(report.multiplicity_total(), report.total_winding);
    assert_eq!(report.total_winding, winding_count(&section, &report.window).unwrap());
    for z in &report.zeros {
        let scale = local_scale(&section, z.z, 1e-3);
        assert!(z.residual <= 1e-8 * scale.max(1e-300), "{:?} scale {scale}", z);
    }
    // real coefficients: zeros come in conjugate pairs
    let pts = report.points();
    for p in &pts {
        assert!(nearest(&pts, p.conj()) < 1e-8);
    }
}

#[test]
fn zeta_section_has_no_zeros_right_of_one() {
    // |1 + 2^-z + ...| >= 1 - sum n^-x > 0 for x large enough; n = 6, x >= 3
    let section = SeriesSpec::zeta().section(6).unwrap();
    let w = WindowBox::from_bounds(3.0, -20.0, 6.0, 20.0).unwrap();
    assert_eq!(winding_count(&section, &w).unwrap(), 0);
}

#[test]
fn report_round_trips_through_text() {
    let section = SeriesSpec::kepler_kapteyn(0.2).section(8).unwrap();
    let report = find_zeros(&section, &WindowBox::square(2.0).unwrap(), DEFAULT_MAX_DEPTH)
        .unwrap()
        .with_label("kapteyn n=8");
    let text = report.to_string();
    let back: ZeroReport = text.parse().unwrap();
    assert_eq!(back.to_string(), text);
    assert_eq!(back.zeros.len(), report.zeros.len());
    assert_eq!(back.total_winding, report.total_winding);
}

#[test]
fn neumann_random_section_counts_agree() {
    let spec = SeriesSpec::new(Family::Neumann, Coefficients::RandomUniform { seed: 11, real: true });
    let section = spec.section(12).unwrap();
    let w = WindowBox::square(6.0).unwrap();
    let report = find_zeros(&section, &w, DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(report.multiplicity_total() + report.unresolved.iter().map(|u| u.count).sum::<i64>(), report.total_winding);
    for z in &report.zeros {
        assert!(section.eval(z.z).norm() <= 1e-8 * local_scale(&section, z.z, 1e-3).max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_polynomials_match_eigenvalues(coeffs in prop::collection::vec(-1.0f64..1.0, 3..10)) {
        let mut coeffs = coeffs;
        let last = coeffs.len() - 1;
        coeffs[last] = if coeffs[last] >= 0.0 { coeffs[last] + 0.5 } else { coeffs[last] - 0.5 };
        let want = polynomial_roots(&coeffs);
        let bound = 1.0 + want.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let section = Section::polynomial(&coeffs.iter().map(|&a| c(a, 0.0)).collect::<Vec<_>>());
        let report = find_zeros(&section, &WindowBox::square(bound).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
        prop_assert_eq!(report.total_winding as usize, want.len());
        prop_assert_eq!(report.multiplicity_total(), report.total_winding);
        let got = report.points();
        for r in &want {
            prop_assert!(nearest(&got, *r) < 1e-6, "{} missing from {:?}", r, got);
        }
    }

    #[test]
    fn winding_is_additive(split in 0.2f64..0.8) {
        let section = SeriesSpec::kepler_lagrange(0.2).section(12).unwrap();
        let w = WindowBox::from_bounds(-1.3, -1.1, 1.1, 1.3).unwrap();
        let kids = w.split(split, 1.0 - split);
        let whole = winding_count(&section, &w).unwrap();
        let parts: i64 = kids.iter().map(|k| winding_count(&section, k).unwrap()).sum();
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn eval_log_handles_large_arguments() {
    let section = SeriesSpec::kepler_kapteyn(0.2).section(25).unwrap();
    let v = section.eval_log(c(40.0, 30.0));
    assert!(v.log_mag().is_finite());
}
