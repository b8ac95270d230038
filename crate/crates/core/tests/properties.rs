use num_complex::Complex64;
use proptest::prelude::*;

use brw_core::consts::{omega_from_um, HC_EV_UM};
use brw_core::dispersion::{DispersionTable, ModeSpec, PhaseMismatch};
use brw_core::materials::{MaterialModel, GAP_MARGIN_EV, SUPPORTED_WINDOW_UM};
use brw_core::modesolver::{LayerStack, ModeSolver, Polarization};
use brw_core::optimizer::{run_ga, GaSettings, Objective, Sphere};
use brw_core::spdc::{compute_jsa, symmetric_detuning_grid, Jsa};
use brw_core::wdm::{channel_report, ChannelGrid};

fn table(spec: ModeSpec, b1: f64, b2: f64, b3: f64) -> DispersionTable {
    let omega: Vec<f64> = (0..81)
        .map(|k| omega_from_um(1.8) + k as f64 * 5e12)
        .collect();
    let w0 = omega[40];
    let beta = omega
        .iter()
        .map(|w| {
            let x = (w - w0) / 1e14;
            1.2e7 + b1 * (w - w0) + b2 * x * x + b3 * x * x * x
        })
        .collect();
    DispersionTable::from_samples(spec, omega, beta).unwrap()
}

fn mismatch(signal: [f64; 3], idler: [f64; 3], offset: f64) -> PhaseMismatch {
    let s = table(ModeSpec::SIGNAL, signal[0], signal[1], signal[2]);
    let i = table(ModeSpec::IDLER, idler[0], idler[1], idler[2]);
    let omega_p = 2.0 * s.omega()[40];
    let beta_p = s.beta(0.5 * omega_p) + i.beta(0.5 * omega_p) + offset;
    PhaseMismatch::new(omega_p, beta_p, s, i).unwrap()
}

fn detuning() -> Vec<f64> {
    symmetric_detuning_grid(2.0 * std::f64::consts::PI * 15e12, 1025).unwrap()
}

fn solver() -> ModeSolver {
    ModeSolver::new(MaterialModel::default(), LayerStack::reference(), 0.05).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_is_deterministic_with_normal_dispersion(x in 0.0f64..=1.0, t in 0.0f64..1.0) {
        let m = MaterialModel::default();
        let gap_um = HC_EV_UM / (MaterialModel::direct_gap_ev(x) - GAP_MARGIN_EV);
        let lo = SUPPORTED_WINDOW_UM.0.max(gap_um) + 0.01;
        let hi = SUPPORTED_WINDOW_UM.1 - 0.01;
        prop_assume!(hi > lo);
        let lam = lo + t * (hi - lo);
        let n = m.refractive_index(x, lam).unwrap();
        prop_assert_eq!(n.to_bits(), m.refractive_index(x, lam).unwrap().to_bits());
        let h = 1e-3;
        let slope = |l: f64| (m.refractive_index(x, l + h).unwrap() - m.refractive_index(x, l - h).unwrap()) / (2.0 * h);
        let (a, b) = (slope(lam - h), slope(lam + h));
        prop_assert!(a.is_finite() && b.is_finite());
        prop_assert!(a < 0.0 && b < 0.0);
    }

    #[test]
    fn amplitude_is_bounded_by_one(
        s in (1.0e-8f64..1.1e-8, -5e5f64..5e5, -5e4f64..5e4),
        i in (1.0e-8f64..1.1e-8, -5e5f64..5e5, -5e4f64..5e4),
        offset in -2e4f64..2e4,
    ) {
        let pm = mismatch([s.0, s.1, s.2], [i.0, i.1, i.2], offset);
        let jsa = compute_jsa(&pm, 1e-3, &detuning()).unwrap();
        for p in jsa.phi() {
            prop_assert!(p.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn identical_tables_give_an_even_amplitude(
        s in (1.0e-8f64..1.1e-8, -5e5f64..5e5, -5e4f64..5e4),
        offset in -2e4f64..2e4,
    ) {
        let pm = mismatch([s.0, s.1, s.2], [s.0, s.1, s.2], offset);
        let jsa = compute_jsa(&pm, 1e-3, &detuning()).unwrap();
        let phi = jsa.phi();
        let n = phi.len();
        for k in 0..n {
            prop_assert_eq!(phi[k], phi[n - 1 - k]);
        }
    }

    #[test]
    fn concurrence_is_gauge_invariant(
        s in (1.0e-8f64..1.1e-8, -5e5f64..5e5),
        i in (1.0e-8f64..1.1e-8, -5e5f64..5e5),
        theta in -3.1f64..3.1,
    ) {
        let pm = mismatch([s.0, s.1, 0.0], [i.0, i.1, 0.0], 0.0);
        let jsa = compute_jsa(&pm, 1e-3, &detuning()).unwrap();
        let u = Complex64::from_polar(1.0, theta);
        let rotated = Jsa::from_samples(
            jsa.detuning().to_vec(),
            jsa.phi().iter().map(|p| p * u).collect(),
            jsa.omega0(),
            jsa.length_m(),
        ).unwrap();
        let grid = ChannelGrid::new(jsa.omega0(), 50.0, 50.0, 60).unwrap();
        let a = channel_report(&jsa, &grid, 1.0).unwrap();
        let b = channel_report(&rotated, &grid, 1.0).unwrap();
        for (p, q) in a.rows.iter().zip(&b.rows) {
            prop_assert!((p.concurrence - q.concurrence).abs() <= 1e-12);
            prop_assert!((p.alpha - q.alpha).abs() <= 1e-12);
        }
    }

    #[test]
    fn ga_designs_stay_in_bounds(seed in 0u64..1000, lo in -3.0f64..0.0, width in 0.1f64..4.0) {
        let sphere = Sphere {
            bounds: vec![[lo, lo + width]; 4],
            center: vec![lo - 1.0, lo + 0.5 * width, lo + width + 2.0, lo],
        };
        let settings = GaSettings { population: 12, generations: 15, seed, ..GaSettings::default() };
        let r = run_ga(&sphere, &settings).unwrap();
        for g in &r.best_genes {
            prop_assert!(*g >= lo && *g <= lo + width);
        }
        prop_assert!(r.trace.windows(2).all(|w| w[1].best_fitness <= w[0].best_fitness));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn returned_modes_satisfy_the_dispersion_relation(lam in 1.3f64..1.8) {
        let s = solver();
        for pol in [Polarization::Te, Polarization::Tm] {
            let modes = s.tir_roots(lam, pol).unwrap();
            prop_assert!(!modes.is_empty());
            let again = s.tir_roots(lam, pol).unwrap();
            for (m, n) in modes.iter().zip(&again) {
                prop_assert!(m.residual.abs() < 1e-9);
                prop_assert_eq!(m.n_eff.to_bits(), n.n_eff.to_bits());
            }
        }
    }
}

#[test]
fn evaluation_order_does_not_matter() {
    let sphere = Sphere::new(5);
    let points: Vec<Vec<f64>> = (0..40)
        .map(|k| {
            (0..5)
                .map(|j| ((k * 7 + j * 3) % 11) as f64 - 5.0)
                .collect()
        })
        .collect();
    let mut forward: Vec<u64> = points
        .iter()
        .map(|p| sphere.evaluate(p).to_bits())
        .collect();
    let mut backward: Vec<u64> = points
        .iter()
        .rev()
        .map(|p| sphere.evaluate(p).to_bits())
        .collect();
    forward.sort_unstable();
    backward.sort_unstable();
    assert_eq!(forward, backward);
}
