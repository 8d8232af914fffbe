use fastening_core::basis::{eval_basis, SpectralParameter};
use fastening_core::forward::{find_roots, minors_of, Fastening, MinorVector};
use fastening_core::inverse::{
    build_system, identify, identify_from_minors, project_to_plucker, Chart,
};
use proptest::prelude::*;

fn spectrum(fastening: &Fastening) -> [f64; 3] {
    let v = find_roots(&fastening.boundary_conditions(), 3, 10.0)
        .unwrap()
        .sqrt_s_values();
    [v[0], v[1], v[2]]
}

fn ratio_close(actual: f64, expected: f64, rel: f64) -> bool {
    ((actual - expected) / expected).abs() <= rel
}

#[test]
fn exact_spectra_have_small_residual() {
    for fastening in Fastening::NAMED {
        let sqrt_s = spectrum(&fastening);
        let result = identify(sqrt_s).unwrap();
        let m = result.raw_minors.as_array();
        let m_norm = result.raw_minors.norm();
        for &x in &sqrt_s {
            let row = eval_basis(SpectralParameter::from_sqrt(x).unwrap()).unwrap().as_array();
            let row_norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = row.iter().zip(&m).map(|(a, b)| a * b).sum();
            assert!(dot.abs() / (row_norm * m_norm) < 1e-10, "{fastening:?} at {x}");
        }
        assert!(result.diagnostics.residual < 1e-10);
    }
}

#[test]
fn reconstruction_reproduces_projected_minors() {
    for fastening in Fastening::NAMED.into_iter().chain([Fastening::elastic_clamp(0.3).unwrap()]) {
        let result = identify(spectrum(&fastening)).unwrap();
        let rebuilt = minors_of(&result.boundary_conditions);
        assert!(rebuilt.angle_to(&result.projected_minors) < 1e-9, "{fastening:?}");
    }
}

#[test]
fn published_example_one_entries_follow_projected_ratios() {
    let result = identify([3.0739, 5.1995, 7.3054]).unwrap();
    assert_eq!(result.chart, Chart::M12);
    let bc = &result.boundary_conditions;
    assert!(ratio_close(bc.entry(1, 4), -3.7440e-6, 1e-3), "{}", bc.entry(1, 4));
    assert!(ratio_close(bc.entry(2, 3), 3.0910e-5, 1e-3), "{}", bc.entry(2, 3));
}

#[test]
fn published_example_one_raw_defect() {
    let m = MinorVector::new(645330.0, 19.947, 2.4157, 1.0).unwrap();
    assert!((m.raw_plucker_defect() - 645281.8).abs() < 0.1);
}

#[test]
fn published_example_two_uses_m13_chart() {
    assert_eq!(identify([1.8312, 4.4629, 6.6502]).unwrap().chart, Chart::M13);
}

#[test]
fn published_example_one_null_direction_is_nearly_rigid() {
    let result = identify([3.0739, 5.1995, 7.3054]).unwrap();
    let m = result.raw_minors.as_array();
    assert!(m[0] > 0.999);
    let rigid = Fastening::RigidClamp.minors();
    assert!(result.raw_minors.angle_to(&rigid) < 1e-3);
    let system = build_system([1.5178, 3.1145, 5.4651]).unwrap();
    assert_eq!(system.rank, 3);
}

/// Stationary points satisfy `p^2 - 2p (Y,Y)/(Y,Y*) + 1 = 0`; the returned
/// multiplier must be the root of smaller magnitude.
fn both_multipliers(m: &MinorVector) -> (f64, f64) {
    let y = [m.m12(), m.m34(), m.m13(), -m.m24()];
    let ys = [y[1], y[0], y[3], y[2]];
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let yys: f64 = y.iter().zip(&ys).map(|(a, b)| a * b).sum();
    let b = yy / yys;
    let disc = (b * b - 1.0).sqrt();
    (b - disc, b + disc)
}

proptest! {
    #[test]
    fn projection_takes_smaller_multiplier(m in prop::array::uniform4(-10.0f64..10.0)) {
        let Ok(v) = MinorVector::from_array(m) else { return Ok(()) };
        prop_assume!(v.raw_plucker_defect().abs() > 1e-6 * v.norm().powi(2));
        prop_assume!(v.raw_plucker_defect().abs() < 0.45 * v.norm().powi(2));
        let point = project_to_plucker(&v).unwrap();
        let (r1, r2) = both_multipliers(&v);
        let smaller = if r1.abs() < r2.abs() { r1 } else { r2 };
        prop_assert!((point.multiplier - smaller).abs() < 1e-9 * smaller.abs().max(1.0));
        prop_assert!(point.multiplier.abs() < 1.0);
        let x = point.x;
        let x_norm2: f64 = x.iter().map(|v| v * v).sum();
        prop_assert!(point.quadric_value().abs() < 1e-10 * x_norm2);
    }

    #[test]
    fn projection_is_idempotent(m in prop::array::uniform4(-10.0f64..10.0)) {
        let Ok(v) = MinorVector::from_array(m) else { return Ok(()) };
        prop_assume!(v.raw_plucker_defect().abs() < 0.45 * v.norm().powi(2));
        let Ok(first) = project_to_plucker(&v) else { return Ok(()) };
        let again = project_to_plucker(&first.minors().unwrap()).unwrap();
        prop_assert_eq!(again.multiplier, 0.0);
        prop_assert_eq!(again.x, first.x);
    }

    #[test]
    fn identification_is_scale_equivariant(
        m in prop::array::uniform4(-10.0f64..10.0),
        k in prop_oneof![1e-6f64..1e-3, 0.5f64..2.0, 1e3f64..1e6],
    ) {
        let Ok(v) = MinorVector::from_array(m) else { return Ok(()) };
        prop_assume!(v.raw_plucker_defect().abs() < 0.3 * v.norm().powi(2));
        let Ok((_, base, chart, _)) = identify_from_minors(&v) else { return Ok(()) };
        let (_, scaled, scaled_chart, _) = identify_from_minors(&v.scaled(k).unwrap()).unwrap();
        prop_assert_eq!(chart, scaled_chart);
        for (a, b) in base.rows().iter().flatten().zip(scaled.rows().iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}
