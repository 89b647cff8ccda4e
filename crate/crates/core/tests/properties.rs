//! Property tests: model identities on randomized specs, solver invariants
//! on the monotone operating envelope, and protocol/trace/config laws.
//!
//! Two spec generators appear here. `any_spec` ranges widely and backs the
//! identities that hold unconditionally (round-trips, Hertz relations, load
//! conservation, monotonicity in load). `envelope` samples the gripper's
//! documented operating envelope — stiffening off, contact modulus capped so
//! the tested loads stay out of the full-membrane branch, shear strength set
//! a safety factor above the rim-friction trade-off — on which capacity is
//! also monotone in pressure and the feasibility region is upward-closed.
//! Outside that envelope a pressure increase can shrink the contact patch
//! faster than it stiffens, and capacity genuinely dips; the envelope bounds
//! are computed per-sample from the exact derivative expressions.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use softgrip::{
    bulge_height_exact, bulge_pressure, check_grasp, friction_from_trace, hertz_area,
    hertz_indentation, hertz_load, min_normal_force, min_pressure, monte_carlo_success,
    parse_config, resolve_contact, run_grasp_protocol, serialize_config, spherical_cap_radius,
    sweep_grid, ContactRegime, GraspOutcome, GraspProblem, GraspQuery, LoadedConfig,
    MembraneSpec, PlantConfig, ProtocolState, SlideTrace, TraceSample, TraceWindow,
};
use std::f64::consts::PI;

fn any_spec() -> impl Strategy<Value = MembraneSpec> {
    (
        5.0e4..5.0e5_f64,   // residual stress
        0.5e-3..2.0e-3_f64, // thickness
        2.5e-3..6.0e-3_f64, // half span
        5.0e5..3.0e6_f64,   // Young's modulus
        0.30..0.49_f64,     // Poisson ratio
        0.25..1.0_f64,      // max height as a fraction of the half span
        0.0..0.5_f64,       // rim gap as a fraction of max height
        5.0e4..5.0e5_f64,   // contact modulus
        0.0..1.0e-5_f64,    // stiffening
        1.0e4..1.0e5_f64,   // shear strength
        0.0..0.5_f64,       // rim friction
    )
        .prop_map(
            |(s0, t, a, e, nu, hf, gf, e0, eta, tau, mu)| {
                let h_max = hf * a;
                MembraneSpec {
                    residual_stress: s0,
                    thickness: t,
                    half_span: a,
                    youngs_modulus: e,
                    poisson_ratio: nu,
                    max_height: h_max,
                    rim_gap: gf * h_max,
                    contact_modulus: e0,
                    stiffening: eta,
                    shear_strength: tau,
                    rim_friction: mu,
                }
                .validated()
                .expect("generator stays inside the legal ranges")
            },
        )
}

proptest! {
    #[test]
    fn bulge_round_trip_is_tight(spec in any_spec(), hf in 1.0e-6..1.0_f64) {
        let h = hf * spec.max_height;
        let p = bulge_pressure(h, &spec).unwrap();
        let back = bulge_height_exact(p, &spec).unwrap();
        prop_assert!((back - h).abs() <= 1.0e-9 * h, "h {h} -> p {p} -> {back}");
    }

    #[test]
    fn cap_radius_identity(spec in any_spec(), hf in 1.0e-6..1.0_f64) {
        let h = hf * spec.max_height;
        let a = spec.half_span;
        let r = spherical_cap_radius(a, h).unwrap();
        let lhs = 2.0 * r * h;
        let rhs = a * a + h * h;
        prop_assert!((lhs - rhs).abs() <= 1.0e-12 * rhs);
        prop_assert!(r >= a * (1.0 - 1.0e-12), "cap radius below hemisphere bound");
    }

    #[test]
    fn hertz_identities(
        n in 1.0e-3..50.0_f64,
        e in 1.0e4..1.0e7_f64,
        radius in 1.0e-3..5.0e-2_f64,
    ) {
        let delta = hertz_indentation(n, e, radius).unwrap();
        let area = hertz_area(n, e, radius).unwrap();
        // a_c^2 = R * delta, with a_c^2 read off the area.
        prop_assert!((area / PI - radius * delta).abs() <= 1.0e-12 * radius * delta);
        // The load inversion closes the loop.
        let back = hertz_load(delta, e, radius);
        prop_assert!((back - n).abs() <= 1.0e-9 * n);
    }

    #[test]
    fn contact_conserves_load_and_signs(
        spec in any_spec(),
        pf in 0.0..1.2_f64,
        n in 0.0..10.0_f64,
        bulges in 1u32..5,
    ) {
        let p = pf * spec.cap_pressure();
        let sol = resolve_contact(n, p, &spec, bulges).unwrap();
        // Exact decomposition, not approximate.
        prop_assert_eq!(sol.membrane_load + sol.rim_load, n);
        prop_assert!(sol.membrane_load >= 0.0 && sol.rim_load >= 0.0);
        prop_assert!(sol.contact_area >= 0.0 && sol.friction_force >= 0.0);
        if n > 0.0 {
            prop_assert!((sol.mu_eff * n - sol.friction_force).abs()
                <= 4.0 * f64::EPSILON * sol.friction_force);
        } else {
            prop_assert_eq!(sol.mu_eff, 0.0);
        }
    }

    #[test]
    fn full_membrane_mu_follows_inverse_cube_root_law(
        spec in any_spec(),
        hf in 0.5..0.95_f64,
        gf in 0.05..0.5_f64,
        margin in 1.5..4.0_f64,
        bulges in 1u32..4,
    ) {
        // Re-aim the spec so 8 N stays on the membranes: protrusion fixed by
        // (hf, gf), contact modulus raised the given margin above the
        // full-membrane threshold at the largest tested load.
        let mut spec = spec;
        let h = hf * spec.max_height;
        spec.rim_gap = gf * h;
        spec.stiffening = 0.0;
        let p = bulge_pressure(h, &spec).unwrap();
        let s = h - spec.rim_gap;
        let radius = spherical_cap_radius(spec.half_span, h).unwrap();
        let n_b_max = 8.0 / bulges as f64;
        spec.contact_modulus =
            margin * 3.0 * n_b_max / (4.0 * radius.sqrt() * s.powf(1.5));
        let spec = spec.validated().unwrap();

        let loads = [1.0, 2.0, 4.0, 8.0];
        let mut law = None;
        for &n in &loads {
            let sol = resolve_contact(n, p, &spec, bulges).unwrap();
            prop_assert_eq!(sol.regime, ContactRegime::FullMembrane, "load {}", n);
            let k = sol.mu_eff * n.powf(1.0 / 3.0);
            match law {
                None => law = Some(k),
                Some(k0) => prop_assert!(
                    (k - k0).abs() <= 1.0e-9 * k0,
                    "mu*N^(1/3) drifted: {} vs {}", k, k0
                ),
            }
        }
    }

    #[test]
    fn capacity_is_monotone_in_load(
        spec in any_spec(),
        pf in 0.0..1.3_f64,
        n1 in 0.0..12.0_f64,
        step in 1.0e-6..6.0_f64,
        bulges in 1u32..5,
    ) {
        let p = pf * spec.cap_pressure();
        let n2 = n1 + step;
        let f1 = resolve_contact(n1, p, &spec, bulges).unwrap().friction_force;
        let f2 = resolve_contact(n2, p, &spec, bulges).unwrap().friction_force;
        prop_assert!(
            f2 >= f1 * (1.0 - 1.0e-9) - 1.0e-15,
            "friction fell from {} to {} between {} N and {} N at p = {}",
            f1, f2, n1, n2, p
        );
    }

    #[test]
    fn regime_order_is_monotone_in_pressure(
        spec in any_spec(),
        n in 0.1..10.0_f64,
        bulges in 1u32..5,
    ) {
        let rank = |r: ContactRegime| match r {
            ContactRegime::RimOnly => 0,
            ContactRegime::Mixed => 1,
            ContactRegime::FullMembrane => 2,
        };
        let p_cap = spec.cap_pressure();
        let mut last = 0;
        for i in 0..=64 {
            let p = p_cap * 1.1 * i as f64 / 64.0;
            let r = rank(resolve_contact(n, p, &spec, bulges).unwrap().regime);
            prop_assert!(r >= last, "regime fell back at p = {p}");
            last = r;
        }
    }

    #[test]
    fn trace_friction_invariances(
        rows in prop::collection::vec((0.01..5.0_f64, -4.0..4.0_f64, 0.5..6.0_f64), 3..80),
        scale in 0.1..100.0_f64,
        flip_y in any::<bool>(),
        flip_z in any::<bool>(),
    ) {
        // Build strictly increasing timestamps from positive gaps.
        let mut t = 0.0;
        let base: Vec<TraceSample> = rows
            .iter()
            .map(|&(dt, f_y, f_z)| {
                t += dt;
                TraceSample { t, f_y, f_z }
            })
            .collect();
        let mapped: Vec<TraceSample> = base
            .iter()
            .map(|s| TraceSample {
                t: s.t * scale,
                f_y: if flip_y { -s.f_y } else { s.f_y },
                f_z: if flip_z { -s.f_z } else { s.f_z },
            })
            .collect();
        let a = friction_from_trace(&SlideTrace::new(base).unwrap(), TraceWindow::Auto);
        let b = friction_from_trace(&SlideTrace::new(mapped).unwrap(), TraceWindow::Auto);
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "invariance broke: {:?}", other),
        }
    }

    #[test]
    fn config_round_trip_reproduces_the_object(
        spec in any_spec(),
        seed in any::<u64>(),
        mu_sigma in 0.0..0.5_f64,
        loadcell_sigma in 0.0..0.3_f64,
        tau in 0.0..0.2_f64,
        mass in proptest::option::of(0.001..3.0_f64),
        grids in proptest::option::of((
            prop::collection::vec(0.0..20.0_f64, 1..6),
            prop::collection::vec(0.0..3.0e5_f64, 1..8),
        )),
    ) {
        let mut cfg = LoadedConfig {
            membrane: spec,
            plant: PlantConfig {
                seed,
                mu_sigma,
                loadcell_sigma,
                pressure_tau: tau,
                ..PlantConfig::default()
            },
            ..LoadedConfig::default()
        };
        cfg.grasp.mass = mass;
        if let Some((mut n_grid, mut p_grid)) = grids {
            for grid in [&mut n_grid, &mut p_grid] {
                grid.sort_by(f64::total_cmp);
                grid.dedup();
            }
            cfg.sweep = Some(softgrip::SweepDef { mass, n_grid, p_grid });
        }
        let text = serialize_config(&cfg);
        let reloaded = parse_config(&text).unwrap();
        prop_assert_eq!(&reloaded, &cfg);
        prop_assert_eq!(serialize_config(&reloaded), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn protocol_stays_on_its_graph_under_noise(
        mass in 0.01..1.0_f64,
        n in 0.1..8.0_f64,
        pf in 0.0..1.1_f64,
        seed in any::<u64>(),
        mu_sigma in 0.0..0.5_f64,
        loadcell_sigma in 0.0..0.2_f64,
        transport_factor in 1.0..1.6_f64,
        pressure_tau in 0.0..0.15_f64,
    ) {
        use ProtocolState::*;
        let spec = MembraneSpec::reference();
        let q = GraspQuery::new(mass, n, pf * spec.cap_pressure());
        let cfg = PlantConfig {
            seed,
            mu_sigma,
            loadcell_sigma,
            transport_factor,
            pressure_tau,
            ..PlantConfig::default()
        };
        let t = run_grasp_protocol(&q, &spec, &cfg).unwrap();
        // Bit-for-bit reproducible.
        let again = run_grasp_protocol(&q, &spec, &cfg).unwrap();
        prop_assert_eq!(&again, &t);

        let allowed: &[(ProtocolState, ProtocolState)] = &[
            (Idle, Pressurize),
            (Pressurize, Close),
            (Close, Hold),
            (Hold, Lift),
            (Lift, Transport),
            (Transport, Release),
            (Lift, Dropped),
            (Transport, Dropped),
        ];
        prop_assert_eq!(t.steps.first().map(|s| s.state), Some(Idle));
        for w in t.steps.windows(2) {
            let (a, b) = (w[0].state, w[1].state);
            prop_assert!(
                a == b || allowed.contains(&(a, b)),
                "illegal transition {:?} -> {:?}", a, b
            );
        }
        let reached_transport = t.steps.iter().any(|s| s.state == Transport);
        let expected = match t.steps.last().unwrap().state {
            Release => GraspOutcome::Success,
            Dropped if reached_transport => GraspOutcome::Slip,
            Dropped => GraspOutcome::Failure,
            other => {
                prop_assert!(false, "trial ended mid-protocol in {:?}", other);
                unreachable!()
            }
        };
        prop_assert_eq!(t.outcome, expected);
    }
}

/// One sample of the monotone operating envelope, together with the load
/// range its guarantees were computed for.
struct EnvelopeCase {
    spec: MembraneSpec,
    n_lo: f64,
    n_hi: f64,
    bulges: u32,
}

/// Draw a spec on which capacity is non-decreasing in pressure for loads in
/// `[n_lo, n_hi]`:
///
/// * stiffening off, so the effective modulus is pressure-independent;
/// * contact modulus at most 80 % of the value that would let the smallest
///   tested load reach the full-membrane branch at full inflation;
/// * shear strength at least 1.4x the level where the membrane's friction
///   gain (tau * pi * d(R*s)/dh) stops covering the rim's friction loss
///   (mu_rim * dN_hertz/dh), maximized over the whole bulge travel.
fn sample_envelope(rng: &mut StdRng) -> EnvelopeCase {
    let a: f64 = rng.gen_range(3.0e-3..5.0e-3);
    let t = rng.gen_range(0.9e-3..1.5e-3);
    let s0 = rng.gen_range(1.0e5..2.0e5);
    let e = rng.gen_range(0.9e6..1.5e6);
    let nu = rng.gen_range(0.45..0.49);
    let h_max: f64 = rng.gen_range(2.1e-3..(0.97 * a).min(3.9e-3));
    let g: f64 = rng.gen_range(0.42e-3..0.78e-3);
    let bulges = if rng.gen_bool(0.5) { 2 } else { 3 };
    let n_lo = rng.gen_range(1.5..4.0);
    let n_hi = 3.0 * n_lo;
    let mu_rim = rng.gen_range(0.1..0.25);

    let s_max = h_max - g;
    let r_hmax = (a * a + h_max * h_max) / (2.0 * h_max);
    let n_b_lo = n_lo / bulges as f64;
    let e0_cap = 0.8 * 3.0 * n_b_lo / (4.0 * r_hmax.sqrt() * s_max.powf(1.5));
    let e0 = e0_cap * rng.gen_range(0.1..1.0);

    // Worst-case rim-loss per unit of membrane-area gain over the travel.
    let mut w_max: f64 = 0.0;
    for i in 1..=256 {
        let h = g + s_max * i as f64 / 256.0;
        let s = h - g;
        let radius = (a * a + h * h) / (2.0 * h);
        let r_prime = (h * h - a * a) / (2.0 * h * h);
        let area_gain = h - (g / 2.0) * (1.0 - (a * a) / (h * h));
        let hertz_gain = (4.0 / 3.0)
            * e0
            * (1.5 * radius.sqrt() * s.sqrt() + s.powf(1.5) * r_prime / (2.0 * radius.sqrt()));
        w_max = w_max.max(hertz_gain.max(0.0) / (PI * area_gain));
    }
    let tau = (mu_rim * w_max * rng.gen_range(1.4..3.5)).max(1.0e3);

    let spec = MembraneSpec {
        residual_stress: s0,
        thickness: t,
        half_span: a,
        youngs_modulus: e,
        poisson_ratio: nu,
        max_height: h_max,
        rim_gap: g,
        contact_modulus: e0,
        stiffening: 0.0,
        shear_strength: tau,
        rim_friction: mu_rim,
    }
    .validated()
    .expect("envelope sampler stays inside the legal ranges");
    EnvelopeCase {
        spec,
        n_lo,
        n_hi,
        bulges,
    }
}

#[test]
fn envelope_capacity_is_monotone_in_pressure() {
    let mut rng = StdRng::seed_from_u64(0xE57E);
    for case in 0..400 {
        let env = sample_envelope(&mut rng);
        let n = rng.gen_range(env.n_lo..env.n_hi);
        let p_cap = env.spec.cap_pressure();
        let mut last = -1.0;
        for i in 0..=48 {
            let p = p_cap * 1.1 * i as f64 / 48.0;
            let sol = resolve_contact(n, p, &env.spec, env.bulges).unwrap();
            assert_ne!(
                sol.regime,
                ContactRegime::FullMembrane,
                "case {case}: envelope must keep {n} N off the full-membrane branch"
            );
            assert!(
                sol.friction_force >= last * (1.0 - 1.0e-9) - 1.0e-15,
                "case {case}: capacity dipped at p = {p} ({} after {last})",
                sol.friction_force
            );
            last = sol.friction_force;
        }
    }
}

#[test]
fn envelope_feasibility_is_upward_closed() {
    let mut rng = StdRng::seed_from_u64(0x0C1055);
    for case in 0..60 {
        let env = sample_envelope(&mut rng);
        let mut prob = GraspProblem::new(0.0);
        prob.bulges = env.bulges;
        // Aim the demand at mid-grid capacity so the boundary crosses it.
        let n_mid = 0.5 * (env.n_lo + env.n_hi);
        let p_mid = 0.5 * env.spec.cap_pressure();
        let mid = check_grasp(&prob.query(n_mid, p_mid), &env.spec).unwrap();
        prob.mass = mid.capacity * rng.gen_range(0.4..1.6) / prob.gravity;

        let n_grid: Vec<f64> = (0..6)
            .map(|i| env.n_lo + (env.n_hi - env.n_lo) * i as f64 / 5.0)
            .collect();
        let p_grid: Vec<f64> = (0..7)
            .map(|i| env.spec.cap_pressure() * i as f64 / 6.0)
            .collect();
        let cells = sweep_grid(&prob, &n_grid, &p_grid, &env.spec).unwrap();
        for x in &cells {
            for y in &cells {
                if x.verdict.feasible && y.normal_force >= x.normal_force && y.pressure >= x.pressure
                {
                    assert!(
                        y.verdict.feasible,
                        "case {case}: ({}, {}) feasible but ({}, {}) is not",
                        x.normal_force, x.pressure, y.normal_force, y.pressure
                    );
                }
            }
        }
    }
}

#[test]
fn envelope_inverse_solvers_sit_on_the_boundary() {
    let mut rng = StdRng::seed_from_u64(0xB15EC7);
    for case in 0..50 {
        let env = sample_envelope(&mut rng);
        let mut prob = GraspProblem::new(0.0);
        prob.bulges = env.bulges;
        let n_mid = 0.5 * (env.n_lo + env.n_hi);
        let mid = check_grasp(&prob.query(n_mid, 0.6 * env.spec.cap_pressure()), &env.spec)
            .unwrap();
        prob.mass = mid.capacity * rng.gen_range(0.5..1.2) / prob.gravity;

        if let Some(p) = min_pressure(&prob, n_mid, &env.spec).unwrap() {
            assert!(
                check_grasp(&prob.query(n_mid, p), &env.spec).unwrap().feasible,
                "case {case}: answer pressure infeasible"
            );
            if p > 2.0 {
                assert!(
                    !check_grasp(&prob.query(n_mid, p - 2.0), &env.spec).unwrap().feasible,
                    "case {case}: {p} Pa is not minimal"
                );
            }
        }
        let p_fix = rng.gen_range(0.0..env.spec.cap_pressure());
        if let Some(n) = min_normal_force(&prob, p_fix, &env.spec).unwrap() {
            assert!(
                check_grasp(&prob.query(n, p_fix), &env.spec).unwrap().feasible,
                "case {case}: answer force infeasible"
            );
            if n > 1.0e-4 {
                assert!(
                    !check_grasp(&prob.query(0.999 * n, p_fix), &env.spec).unwrap().feasible,
                    "case {case}: {n} N is not minimal"
                );
            }
        }
    }
}

#[test]
fn zero_noise_monte_carlo_equals_static_feasibility() {
    let mut rng = StdRng::seed_from_u64(0x5EED);
    let cfg = PlantConfig::default().zero_noise();
    for case in 0..40 {
        // Any valid spec, not just the envelope: the equivalence is exact.
        let spec = MembraneSpec {
            residual_stress: rng.gen_range(5.0e4..5.0e5),
            thickness: rng.gen_range(0.5e-3..2.0e-3),
            half_span: rng.gen_range(2.5e-3..6.0e-3),
            youngs_modulus: rng.gen_range(5.0e5..3.0e6),
            poisson_ratio: rng.gen_range(0.30..0.49),
            max_height: 0.0,
            rim_gap: 0.0,
            contact_modulus: rng.gen_range(5.0e4..5.0e5),
            stiffening: rng.gen_range(0.0..1.0e-5),
            shear_strength: rng.gen_range(1.0e4..1.0e5),
            rim_friction: rng.gen_range(0.0..0.5),
        };
        let mut spec = spec;
        spec.max_height = rng.gen_range(0.25..1.0) * spec.half_span;
        spec.rim_gap = rng.gen_range(0.0..0.5) * spec.max_height;
        let spec = spec.validated().unwrap();

        let q = GraspQuery::new(
            rng.gen_range(0.01..1.5),
            rng.gen_range(0.0..10.0),
            rng.gen_range(0.0..1.2) * spec.cap_pressure(),
        );
        let rate = monte_carlo_success(&q, &spec, &cfg, 4).unwrap();
        let feasible = check_grasp(&q, &spec).unwrap().feasible;
        assert_eq!(
            rate,
            if feasible { 1.0 } else { 0.0 },
            "case {case}: zero-noise rate diverged from the static verdict"
        );
    }
}
