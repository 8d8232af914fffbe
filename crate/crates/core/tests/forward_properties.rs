use fastening_core::basis::SpectralParameter;
use fastening_core::forward::{characteristic_det, find_roots, minors_of, BoundaryConditions, Fastening};
use proptest::prelude::*;

fn roots(bc: &BoundaryConditions) -> Vec<f64> {
    find_roots(bc, 3, 10.0).unwrap().sqrt_s_values()
}

#[test]
fn row_scaling_leaves_roots_unchanged() {
    for fastening in Fastening::NAMED.into_iter().chain([Fastening::elastic_clamp(10.0).unwrap()]) {
        let bc = fastening.boundary_conditions();
        let base = roots(&bc);
        for (row, factor) in [(1, -3.0), (2, 1e-4), (1, 250.0)] {
            let scaled = roots(&bc.scale_row(row, factor).unwrap());
            for (a, b) in base.iter().zip(&scaled) {
                assert!((a - b).abs() < 1e-12, "{fastening:?} row {row} x{factor}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn roots_increase_with_stiffness() {
    let mut previous: Option<Vec<f64>> = None;
    let ladder = [1e-5, 1.0, 10.0, 1e2]
        .map(|c| Fastening::elastic_clamp(c).unwrap())
        .into_iter()
        .chain([Fastening::RigidClamp]);
    for fastening in ladder {
        let current = roots(&fastening.boundary_conditions());
        if let Some(prev) = &previous {
            for (a, b) in prev.iter().zip(&current) {
                assert!(b >= a, "{fastening:?}: {current:?} below {prev:?}");
            }
        }
        previous = Some(current);
    }
}

#[test]
fn every_root_brackets_a_sign_change() {
    for fastening in Fastening::NAMED {
        let bc = fastening.boundary_conditions();
        let m = minors_of(&bc);
        let spectrum = find_roots(&bc, 3, 10.0).unwrap();
        for w in spectrum.roots.windows(2) {
            assert!(w[0].sqrt_s < w[1].sqrt_s);
        }
        for root in &spectrum.roots {
            let [lo, hi] = root.bracket;
            assert!(hi - lo < 1e-10, "{fastening:?} bracket {lo}..{hi}");
            assert!(lo <= root.sqrt_s && root.sqrt_s <= hi);
            let dl = characteristic_det(&m, SpectralParameter::from_sqrt(lo).unwrap()).unwrap();
            let dh = characteristic_det(&m, SpectralParameter::from_sqrt(hi).unwrap()).unwrap();
            assert!(dl * dh <= 0.0, "{fastening:?} at {}", root.sqrt_s);
            assert!(root.residual < 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn minors_satisfy_plucker_relation(
        a11 in -1e3f64..1e3, a14 in -1e3f64..1e3, a22 in -1e3f64..1e3, a23 in -1e3f64..1e3,
    ) {
        prop_assume!(a11.abs() + a14.abs() > 1e-6 && a22.abs() + a23.abs() > 1e-6);
        let bc = BoundaryConditions::from_entries(a11, a14, a22, a23).unwrap();
        let m = minors_of(&bc);
        let all = bc.all_minors();
        // M14 and M23 vanish by the zero pattern of the rows.
        prop_assert_eq!(all[2], 0.0);
        prop_assert_eq!(all[3], 0.0);
        prop_assert!(m.raw_plucker_defect().abs() <= 1e-12 * m.norm().powi(2));
    }
}
