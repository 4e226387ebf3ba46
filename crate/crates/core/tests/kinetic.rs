use proptest::prelude::*;
use svkin::hr::{cell_update, hr_interface_fluxes};
use svkin::{
    kinetic_update, max_wave_speed, positivity_margin, reconstruct, ConservedState, SchemeParams,
};

fn state() -> impl Strategy<Value = ConservedState> {
    prop_oneof![
        1 => Just(ConservedState::DRY),
        4 => (0.0..3.0f64, -3.0..3.0f64).prop_map(|(h, u)| ConservedState::from_velocity(h, u)),
    ]
}

fn triple() -> impl Strategy<Value = ([ConservedState; 3], [f64; 3], f64)> {
    (
        [state(), state(), state()],
        [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
        0.0..1.0f64,
    )
}

fn sigma_for(states: &[ConservedState; 3], frac: f64, p: &SchemeParams) -> f64 {
    let v = max_wave_speed(states, p).unwrap();
    if v > 0.0 {
        frac * p.beta / v
    } else {
        frac
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn moments_reproduce_the_hr_update((s, z, frac) in triple()) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let sigma = sigma_for(&s, frac, &p);
        let upd = kinetic_update(s, z, sigma, &p).unwrap();
        let left = reconstruct(&s[0], &s[1], z[0], z[1], &p);
        let right = reconstruct(&s[1], &s[2], z[1], z[2], &p);
        let fl = hr_interface_fluxes(&left, s[0].h, s[1].h, p.g);
        let fr = hr_interface_fluxes(&right, s[1].h, s[2].h, p.g);
        let expected = cell_update(&s[1], sigma, fr.left - fl.right, 0.0);
        let (m0, m1) = upd.moments();
        let scale = 1.0 + s.iter().map(|x| x.h + x.q.abs()).fold(0.0, f64::max);
        prop_assert!((m0 - expected.h).abs() <= 1e-9 * scale, "{} vs {}", m0, expected.h);
        prop_assert!((m1 - expected.q).abs() <= 1e-9 * scale * 10.0, "{} vs {}", m1, expected.q);
    }

    #[test]
    fn node_structure((s, z, frac) in triple()) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let upd = kinetic_update(s, z, sigma_for(&s, frac, &p), &p).unwrap();
        let m_next = max_wave_speed(&[s[2]], &p).unwrap();
        for k in 0..upd.len() {
            let xi = upd.nodes()[k];
            let (m, a, b, q) = (upd.center[k], upd.right_plus[k], upd.right_minus[k], upd.left_plus[k]);
            prop_assert!(0.0 <= b && b <= m * (1.0 + 1e-14) + 1e-300);
            prop_assert!(0.0 <= q && q <= m * (1.0 + 1e-14) + 1e-300);
            prop_assert!(a >= 0.0 && (a == 0.0 || xi.abs() <= m_next * (1.0 + 1e-12) + 1e-12));
            if m == 0.0 {
                prop_assert_eq!(upd.delta_right[k], 0.0);
                prop_assert_eq!(upd.delta_left[k], 0.0);
            }
            let gf = upd.general_form(k);
            prop_assert!((gf - upd.f[k]).abs() <= 1e-12 * (1.0 + m + a + b + q));
        }
    }

    #[test]
    fn kinetic_density_stays_nonnegative((s, z, frac) in triple()) {
        let p = SchemeParams::new(9.81, 0.9).unwrap();
        let upd = kinetic_update(s, z, sigma_for(&s, frac, &p), &p).unwrap();
        prop_assert!(positivity_margin(&upd) >= -1e-14);
    }
}
