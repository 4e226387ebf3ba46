use proptest::prelude::*;
use svkin::entropy::counterexample::JUMP_CELL;
use svkin::{
    constants_chain, counterexample_audit, kinetic_inequality_residual, kinetic_update,
    lipschitz_audit, max_wave_speed, no_topo_audit, residual_decomposition, semi_discrete_audit,
    ConservedState, Scales, SchemeParams,
};

const TOL: f64 = 1e-9;

fn state() -> impl Strategy<Value = ConservedState> {
    prop_oneof![
        1 => Just(ConservedState::DRY),
        4 => (0.0..3.0f64, -3.0..3.0f64).prop_map(|(h, u)| ConservedState::from_velocity(h, u)),
    ]
}

fn beta() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.3), Just(0.5), Just(0.9)]
}

/// Reference height that also covers kinetic energy and bottom elevation.
fn scales(s: &[ConservedState; 3], z: &[f64; 3], p: &SchemeParams) -> Scales {
    let h_ref = s
        .iter()
        .zip(z)
        .map(|(s, z)| s.h + p.velocity(s).powi(2) / p.g + z.abs())
        .fold(1e-3, f64::max);
    Scales::new(h_ref, p.g)
}

fn sigma_for(s: &[ConservedState; 3], frac: f64, p: &SchemeParams) -> f64 {
    let v = max_wave_speed(s, p).unwrap();
    if v > 0.0 {
        frac * p.beta / v
    } else {
        frac
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn fully_discrete_kinetic_inequality(
        s in [state(), state(), state()],
        z in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
        frac in 0.0..=1.0f64,
        b in beta(),
    ) {
        let p = SchemeParams::new(9.81, b).unwrap();
        let chain = constants_chain(b).unwrap();
        let upd = kinetic_update(s, z, sigma_for(&s, frac, &p), &p).unwrap();
        let scale = scales(&s, &z, &p).kinetic();
        for r in kinetic_inequality_residual(&upd, &chain) {
            prop_assert!(r <= TOL * scale, "{}", r / scale);
        }
        let dec = residual_decomposition(&upd, &chain);
        for k in 0..upd.len() {
            let norm = scale * (1.0 + dec.d[k].abs() / scale);
            prop_assert!((dec.d[k] - dec.d_bis[k]).abs() <= 1e-12 * norm);
            prop_assert!(dec.expansion_defect[k].abs() <= TOL * scale);
            prop_assert!(dec.before_estimates[k] <= TOL * scale);
            prop_assert!(dec.gamma_margin[k] >= -TOL * scale);
        }
    }

    #[test]
    fn semi_discrete_inequality_and_flux_identity(
        s in [state(), state(), state()],
        z in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
    ) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let a = semi_discrete_audit(s, z, &p).unwrap();
        let sc = scales(&s, &z, &p);
        let scale = sc.kinetic() * (p.g * sc.h_ref).sqrt();
        prop_assert!(a.max_residual() <= TOL * scale, "{}", a.max_residual() / scale);
        let flux_scale = scale * sc.h_ref.sqrt() / p.g.sqrt();
        prop_assert!((a.kinetic_flux_integral - a.entropy_flux_difference).abs() <= TOL * flux_scale);
        prop_assert!(a.remainder_integrals.0.abs() <= TOL * flux_scale);
        prop_assert!(a.remainder_integrals.1.abs() <= TOL * flux_scale);
    }

    #[test]
    fn flat_bottom_audits(s in [state(), state(), state()], frac in 0.0..=1.0f64) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let a = no_topo_audit(s, sigma_for(&s, frac, &p), &p).unwrap();
        let sc = scales(&s, &[0.0; 3], &p);
        prop_assert!(a.max_residual() <= TOL * sc.kinetic());
        prop_assert!(a.max_semi_residual() <= TOL * sc.kinetic() * (p.g * sc.h_ref).sqrt());
        prop_assert!(a.entropy_gap <= TOL * sc.energy());
    }

    #[test]
    fn lipschitz_estimates(s in [state(), state(), state()]) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let a = lipschitz_audit(&s[0], &s[1], &s[2], &p);
        prop_assert!(a.margin() >= -TOL * scales(&s, &[0.0; 3], &p).lipschitz());
    }
}

#[test]
fn counterexample_is_sharp_and_monotone() {
    let p = SchemeParams::new(1.0, 0.9).unwrap();
    let v_m = 3.0;
    let grid: Vec<f64> = (1..=60)
        .map(|k| p.beta / v_m * 0.8f64.powi(60 - k))
        .collect();
    let mut last = 0.0;
    for &sigma in &grid {
        let a = counterexample_audit(2.0, 1.0, 0.0, 1.0, sigma, &p).unwrap();
        assert!(a.d > 0.0, "sigma = {sigma}");
        assert!(a.d_over_sigma > last, "sigma = {sigma}");
        assert!(a
            .d_cells
            .iter()
            .enumerate()
            .all(|(i, d)| i == JUMP_CELL || d.abs() < 1e-14));
        last = a.d_over_sigma;
    }
    let small = counterexample_audit(2.0, 1.0, 0.0, 1.0, grid[0], &p).unwrap();
    assert!(small.d_over_sigma < 1e-6);
}
