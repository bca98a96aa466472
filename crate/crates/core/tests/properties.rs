mod common;

use std::f64::consts::PI;

use djt_core::apes::{apes_energy, coupling_from_energies, trivial_points};
use djt_core::catalog::{load_catalog, serialize_catalog, DefectParams, PlCenter, Polytype, ReferenceValues, Site};
use djt_core::pseudospin::{classify_kd, g_perp, spin_spectrum, Component, Field, GTensor, Spin, SpinParams};
use djt_core::vibronic::{ham_factor, ham_factor_expectation, Coefficient, PolaronicState};
use djt_core::{solve, JTCoupling};
use num_complex::Complex64;
use proptest::prelude::*;

fn coupling() -> impl Strategy<Value = JTCoupling> {
    (20.0..100.0f64, 0.0..60.0f64, 0.0..0.49f64)
        .prop_map(|(homega, f, ratio)| JTCoupling::new(f, ratio * homega, homega).unwrap())
}

fn warped_coupling() -> impl Strategy<Value = JTCoupling> {
    (20.0..100.0f64, 1.0..60.0f64, 0.01..0.49f64)
        .prop_map(|(homega, f, ratio)| JTCoupling::new(f, ratio * homega, homega).unwrap())
}

fn opt(range: std::ops::Range<f64>) -> impl Strategy<Value = Option<f64>> {
    proptest::option::of(range)
}

fn defect() -> impl Strategy<Value = DefectParams> {
    let site = prop_oneof![
        Just((Polytype::FourH, Site::H)),
        Just((Polytype::FourH, Site::K)),
        Just((Polytype::SixH, Site::H)),
        Just((Polytype::SixH, Site::K1)),
        Just((Polytype::SixH, Site::K2)),
    ];
    let pl = proptest::option::of(prop_oneof![
        Just(PlCenter::Alpha),
        Just(PlCenter::Beta),
        Just(PlCenter::Gamma)
    ]);
    let core = (
        site,
        pl,
        prop_oneof![Just("V".to_owned()), Just("Mo".to_owned()), Just("Nb".to_owned())],
        0.1..100.0f64,
        0.0..0.99f64,
        1.0..200.0f64,
        -1e3..1e3f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
        0u8..10,
        1.5..2.5f64,
    );
    let extras = (
        opt(-500.0..500.0),
        opt(-500.0..500.0),
        opt(0.0..1.0),
        opt(0.0..1e3),
        opt(0.0..1e3),
        opt(-1.0..1.0),
        opt(-1.0..1.0),
        opt(-1.0..1.0),
        opt(1.5..2.5),
        opt(1.5..2.5),
        opt(1.5..2.5),
        opt(1.5..2.5),
    );
    (core, extras).prop_map(
        |(
            ((polytype, site), pl_center, impurity, e_jt, delta_frac, homega, de_soc, lz1, lz2, twice_i, g0),
            (a_par, a_perp, p, red, exp_soc, l1, l2, dl, g1, g2, eg1, eg2),
        )| DefectParams {
            impurity,
            polytype,
            site,
            pl_center,
            e_jt,
            delta_jt: delta_frac * e_jt,
            homega,
            de_soc,
            lz_o_gs1: lz1,
            lz_o_gs2: lz2,
            nuclear_spin: twice_i as f64 / 2.0,
            a_par,
            a_perp,
            g0,
            reference: ReferenceValues {
                p,
                de_soc_red: red,
                exp_de_soc: exp_soc,
                lz_eff_gs1: l1,
                lz_eff_gs2: l2,
                delta_lz_eff: dl,
                g_par_gs1: g1,
                g_par_gs2: g2,
                exp_g_par_gs1: eg1,
                exp_g_par_gs2: eg2,
            },
        },
    )
}

fn rotate(qx: f64, qy: f64, angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (c * qx - s * qy, s * qx + c * qy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_round_trip_is_bit_exact(d in defect()) {
        let text = serialize_catalog(std::slice::from_ref(&d));
        let back = load_catalog(&text).unwrap();
        prop_assert_eq!(back.defects(), std::slice::from_ref(&d));
    }

    #[test]
    fn apes_is_threefold_symmetric(c in coupling(), qx in -6.0..6.0f64, qy in -6.0..6.0f64) {
        let (lo, up) = apes_energy(&c, qx, qy);
        for k in 1..3 {
            let (rx, ry) = rotate(qx, qy, 2.0 * PI * k as f64 / 3.0);
            let (lo_r, up_r) = apes_energy(&c, rx, ry);
            let scale = lo.abs().max(up.abs()).max(1.0);
            prop_assert!((lo - lo_r).abs() <= 1e-12 * scale);
            prop_assert!((up - up_r).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn apes_sheets_touch_at_conical_intersections(c in warped_coupling()) {
        let (lo, up) = apes_energy(&c, 0.0, 0.0);
        prop_assert_eq!(lo, up);
        let rho = c.f / c.g;
        for phi in [PI / 3.0, PI, 5.0 * PI / 3.0] {
            let (lo, up) = apes_energy(&c, rho * phi.cos(), rho * phi.sin());
            let scale = lo.abs().max(c.f * rho).max(1.0);
            prop_assert!((up - lo).abs() <= 1e-6 * scale, "gap {} at phi {}", up - lo, phi);
        }
    }

    #[test]
    fn minima_lie_below_barriers(e_jt in 1.0..50.0f64, frac in 0.01..0.95f64, homega in 20.0..100.0f64) {
        let c = coupling_from_energies(e_jt, frac * e_jt, homega).unwrap();
        let tp = trivial_points(&c).unwrap();
        for (m, b) in tp.minima.iter().zip(&tp.barriers) {
            prop_assert!(m.energy < b.energy);
            prop_assert!(b.energy < tp.symmetric_point.energy);
        }
    }

    #[test]
    fn ground_doublet_is_degenerate(c in coupling(), cutoff in 1usize..=4) {
        let sol = solve(&c, cutoff).unwrap();
        prop_assert!(sol.doublet_splitting() < 1e-9);
    }

    // Larger odd cutoffs let an A-type level drop below the doublet when
    // G approaches ħω/2 with weak F, so the warping is kept moderate here.
    #[test]
    fn ground_doublet_is_degenerate_in_larger_bases(
        homega in 20.0..100.0f64,
        f in 0.0..60.0f64,
        ratio in 0.0..0.45f64,
        cutoff in 5usize..=7,
    ) {
        let c = JTCoupling::new(f, ratio * homega, homega).unwrap();
        let sol = solve(&c, cutoff).unwrap();
        prop_assert!(sol.doublet_splitting() < 1e-9);
    }

    #[test]
    fn ham_factor_ignores_global_phase(c in coupling(), alpha in 0.0..(2.0 * PI)) {
        let sol = solve(&c, 3).unwrap();
        let plus = &sol.ground_doublet[0];
        let phase = Complex64::from_polar(1.0, alpha);
        let turn = |v: &[Coefficient]| -> Vec<Coefficient> {
            v.iter().map(|k| Coefficient { amplitude: k.amplitude * phase, ..*k }).collect()
        };
        let rotated = PolaronicState {
            label: plus.label,
            energy: plus.energy,
            c: turn(&plus.c),
            d: turn(&plus.d),
            vector: plus.vector.iter().map(|z| z * phase).collect(),
        };
        prop_assert!((ham_factor(&rotated) - sol.p).abs() < 1e-12);
        prop_assert!((ham_factor_expectation(&rotated, &sol.basis) - sol.p).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_respect_the_variational_bound(c in coupling()) {
        let coarse = solve(&c, 3).unwrap();
        let fine = solve(&c, 5).unwrap();
        prop_assert!(fine.ground_energy() <= coarse.ground_energy() + 1e-9);
    }

    #[test]
    fn kramers_pairs_at_zero_field(
        g_par in 1.0..3.0f64,
        g_perp in 0.0..3.0f64,
        g_up in 1.0..3.0f64,
        offset in 0.0..1000.0f64,
    ) {
        let params = SpinParams::single(GTensor::axial(g_par, g_perp))
            .with_upper(GTensor::axial(g_up, 0.0), offset);
        let s = spin_spectrum(&params, Field::parallel(0.0)).unwrap();
        for pair in s.levels.chunks(2) {
            prop_assert!((pair[1] - pair[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn level_sum_is_independent_of_field_direction(
        g_par in 1.0..3.0f64,
        g_perp in 0.0..3.0f64,
        b in 0.0..5.0f64,
        theta in 0.0..PI,
        offset in 0.0..100.0f64,
    ) {
        let params = SpinParams::single(GTensor::axial(g_par, g_perp))
            .with_upper(GTensor::axial(g_perp, g_par), offset)
            .with_hyperfine(3.5, 150.0, 60.0);
        let reference: f64 = spin_spectrum(&params, Field::parallel(b)).unwrap().levels.iter().sum();
        let tilted: f64 = spin_spectrum(&params, Field::new(b, theta)).unwrap().levels.iter().sum();
        prop_assert!((reference - tilted).abs() < 1e-9 * offset.max(1.0) * 16.0);
    }

    #[test]
    fn zeeman_splitting_is_linear(g_par in 0.5..3.0f64, g_perp in 0.0..3.0f64, b in 0.01..5.0f64, theta in 0.0..PI) {
        let params = SpinParams::single(GTensor::axial(g_par, g_perp));
        let one = spin_spectrum(&params, Field::new(b, theta)).unwrap();
        let two = spin_spectrum(&params, Field::new(2.0 * b, theta)).unwrap();
        let s1 = one.levels[1] - one.levels[0];
        let s2 = two.levels[1] - two.levels[0];
        prop_assert!((s2 - 2.0 * s1).abs() <= 1e-9 * s2.max(1e-9));
    }

    #[test]
    fn table_conformant_mixtures_have_no_transverse_moment(angle in 0.0..(2.0 * PI), phase in 0.0..(2.0 * PI)) {
        let (a, b) = (Complex64::from(angle.cos()), Complex64::from_polar(angle.sin(), phase));
        let mut compositions = vec![
            vec![Component::new(2, Spin::Up, a), Component::new(-1, Spin::Up, b)],
            vec![Component::new(2, Spin::Down, a), Component::new(1, Spin::Up, b)],
            vec![Component::new(-2, Spin::Down, a), Component::new(1, Spin::Down, b)],
        ];
        compositions.retain(|c| c.iter().all(|k| k.amplitude.norm() > 0.0));
        for comp in compositions {
            let kd = classify_kd(comp).unwrap();
            prop_assert_eq!(g_perp(&kd, &kd.time_reversed()), 0.0);
        }
    }
}

#[test]
fn linear_coupling_quenches_monotonically() {
    let homega = 50.0;
    let mut previous = 1.0 + 1e-12;
    for k in 0..20 {
        let f = 3.0 * k as f64;
        let sol = solve(&JTCoupling::new(f, 0.0, homega).unwrap(), 8).unwrap();
        let q = 0.5 * (1.0 + sol.p);
        assert!((0.0..=1.0).contains(&sol.p), "p = {} at F = {f}", sol.p);
        assert!((0.5..=1.0).contains(&q));
        assert!(sol.p <= previous, "p rose from {previous} to {} at F = {f}", sol.p);
        previous = sol.p;
    }
}

#[test]
fn convergence_is_variational_for_catalog_rows() {
    for d in djt_core::Catalog::builtin().iter() {
        let c = djt_core::coupling_from_apes(d).unwrap();
        let study = djt_core::vibronic::convergence_study(&c, &[2, 3, 4, 5, 6]).unwrap();
        for w in study.windows(2) {
            assert!(w[1].ground_energy <= w[0].ground_energy + 1e-12, "{}", d.key());
        }
        assert!((study[4].p - study[2].p).abs() < 0.02, "{}", d.key());
    }
}
