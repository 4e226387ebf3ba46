use proptest::prelude::*;
use svkin::flux::kinetic_flux_states;
use svkin::{cfl_timestep, step, total_mass, Boundary, ConservedState, Grid1D, SchemeParams};

fn grid(z: &[f64], boundary: Boundary) -> Grid1D {
    let x = (0..=z.len()).map(|i| i as f64 * 0.1).collect();
    Grid1D::new(x, z.to_vec(), boundary).unwrap()
}

fn boundary() -> impl Strategy<Value = Boundary> {
    prop_oneof![
        Just(Boundary::Periodic),
        Just(Boundary::Reflective),
        Just(Boundary::Outflow)
    ]
}

fn wet_dry_states(n: usize) -> impl Strategy<Value = Vec<ConservedState>> {
    prop::collection::vec(
        prop_oneof![
            1 => Just(ConservedState::DRY),
            3 => (0.0..3.0f64, -4.0..4.0f64).prop_map(|(h, u)| ConservedState::from_velocity(h, u)),
        ],
        n,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lake_at_rest_is_preserved(
        z in prop::collection::vec(-1.0..2.0f64, 4..40),
        surface in -0.5..1.5f64,
        b in boundary(),
    ) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let g = grid(&z, b);
        let states: Vec<_> = z.iter().map(|z| ConservedState::new((surface - z).max(0.0), 0.0)).collect();
        let dt = cfl_timestep(&states, &g, &p).unwrap().min(1.0);
        let (next, _) = step(&states, &g, &p, dt).unwrap();
        for (a, b) in next.iter().zip(&states) {
            prop_assert!((a.h - b.h).abs() <= 1e-13 * (1.0 + b.h));
            prop_assert!(a.q.abs() <= 1e-13 * (1.0 + b.h));
        }
    }

    #[test]
    fn positivity_and_mass(
        states in wet_dry_states(24),
        z in prop::collection::vec(-0.5..0.5f64, 24),
        b in boundary(),
        frac in 0.05..1.0f64,
    ) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let g = grid(&z, b);
        let dt = cfl_timestep(&states, &g, &p).unwrap();
        prop_assume!(dt.is_finite());
        let (next, report) = step(&states, &g, &p, frac * dt).unwrap();
        for (i, s) in states.iter().enumerate() {
            let raw = s.h - report.sigma[i] * report.flux_difference(i).mass;
            prop_assert!(raw >= -1e-14, "cell {}: {}", i, raw);
        }
        prop_assert!(next.iter().all(|s| s.h >= 0.0));
        let before = total_mass(&states, &g);
        let defect = total_mass(&next, &g) - before - report.boundary_mass_inflow();
        prop_assert!(defect.abs() <= 1e-13 * before.max(1e-300) + 1e-15, "{}", defect);
    }

    #[test]
    fn flat_bottom_reduces_to_flux_splitting(
        states in wet_dry_states(12),
        level in -1.0..1.0f64,
    ) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let g = grid(&[level; 12], Boundary::Outflow);
        let dt = cfl_timestep(&states, &g, &p).unwrap();
        prop_assume!(dt.is_finite());
        let (_, report) = step(&states, &g, &p, dt).unwrap();
        for (k, it) in report.interfaces.iter().enumerate() {
            let f = kinetic_flux_states(&report.padded[k], &report.padded[k + 1], &p);
            prop_assert_eq!(it.fluxes.left, f);
            prop_assert_eq!(it.fluxes.right, f);
        }
    }

    #[test]
    fn mass_flux_is_single_valued(
        states in wet_dry_states(12),
        z in prop::collection::vec(-0.5..0.5f64, 12),
    ) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let g = grid(&z, Boundary::Reflective);
        let dt = cfl_timestep(&states, &g, &p).unwrap();
        prop_assume!(dt.is_finite());
        let (_, report) = step(&states, &g, &p, dt).unwrap();
        for it in &report.interfaces {
            prop_assert_eq!(it.fluxes.left.mass, it.fluxes.right.mass);
            prop_assert_eq!(it.fluxes.left.mass, it.fluxes.homogeneous.mass);
        }
    }
}

#[test]
fn cfl_violation_is_refused() {
    let p = SchemeParams::new(9.81, 0.5).unwrap();
    let g = grid(&[0.0; 6], Boundary::Outflow);
    let states = vec![ConservedState::new(1.0, 0.5); 6];
    let dt = cfl_timestep(&states, &g, &p).unwrap();
    assert!(step(&states, &g, &p, dt).is_ok());
    assert!(matches!(
        step(&states, &g, &p, 1.01 * dt),
        Err(svkin::Error::CflViolated { .. })
    ));
}

#[test]
fn dam_break_onto_dry_bed() {
    let p = SchemeParams::new(9.81, 0.9).unwrap();
    let g = Grid1D::uniform(0.0, 10.0, 200, Boundary::Outflow, |_| 0.0).unwrap();
    let mut states: Vec<_> = g
        .centers()
        .iter()
        .map(|&x| ConservedState::new(if x < 5.0 { 1.0 } else { 0.0 }, 0.0))
        .collect();
    let mut t = 0.0;
    while t < 0.5 {
        let dt = cfl_timestep(&states, &g, &p).unwrap().min(0.5 - t);
        states = step(&states, &g, &p, dt).unwrap().0;
        assert!(states.iter().all(|s| s.h >= 0.0));
        t += dt;
    }
    assert!((total_mass(&states, &g) - 5.0).abs() < 1e-12);
    // front has moved past the initial jump but not past 2√(gh) t
    let front = g.centers()[states.iter().rposition(|s| s.h > 1e-6).unwrap()];
    assert!(front > 6.0 && front < 5.0 + 2.0 * (9.81f64).sqrt() * 0.5 + 0.2);
}
