//! Characteristic (transfer) matrices of homogeneous layers.
//!
//! A matrix maps the tangential field pair `(U, V)` across a layer, where
//! `U` is `E_x` for TE and `H_x` for TM, and `V = g dU/dy` with `g = 1`
//! for TE and `g = 1/n²` for TM. Both components are continuous at every
//! interface, so a stack is the ordered product of its layer matrices.
//! Lossless layers give real, unimodular matrices; evanescent layers use
//! hyperbolic functions.

use super::{IndexLayer, Polarization};

pub type Matrix2 = [[f64; 2]; 2];

pub const IDENTITY: Matrix2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn apply(m: &Matrix2, v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn det(m: &Matrix2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn coupling(index: f64, pol: Polarization) -> f64 {
    match pol {
        Polarization::Te => 1.0,
        Polarization::Tm => 1.0 / (index * index),
    }
}

/// Transfer matrix of one layer of index `index` and thickness
/// `thickness_um` for a mode of effective index `n_eff`.
pub fn layer_matrix(
    index: f64,
    thickness_um: f64,
    n_eff: f64,
    wavelength_um: f64,
    pol: Polarization,
) -> Matrix2 {
    let k0 = 2.0 * std::f64::consts::PI / wavelength_um;
    let g = coupling(index, pol);
    let kappa_sq = k0 * k0 * (index * index - n_eff * n_eff);
    let t = thickness_um;
    if kappa_sq > 0.0 {
        let q = kappa_sq.sqrt();
        let (s, c) = (q * t).sin_cos();
        [[c, s / (g * q)], [-g * q * s, c]]
    } else if kappa_sq < 0.0 {
        let q = (-kappa_sq).sqrt();
        let (s, c) = ((q * t).sinh(), (q * t).cosh());
        [[c, s / (g * q)], [g * q * s, c]]
    } else {
        [[1.0, t / g], [0.0, 1.0]]
    }
}

/// Product of layer matrices for `layers` traversed in order.
pub fn stack_matrix(
    layers: &[IndexLayer],
    n_eff: f64,
    wavelength_um: f64,
    pol: Polarization,
) -> Matrix2 {
    layers.iter().fold(IDENTITY, |acc, l| {
        mul(
            &layer_matrix(l.index, l.thickness_um, n_eff, wavelength_um, pol),
            &acc,
        )
    })
}

/// Trace of the one-period matrix. `|trace| > 2` means the periodic
/// medium has no propagating Bloch wave at `(n_eff, λ)`.
pub fn period_trace(
    period: &[IndexLayer],
    n_eff: f64,
    wavelength_um: f64,
    pol: Polarization,
) -> f64 {
    let m = stack_matrix(period, n_eff, wavelength_um, pol);
    m[0][0] + m[1][1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modesolver::Polarization::{Te, Tm};
    use proptest::prelude::*;

    fn max_abs_diff(a: &Matrix2, b: &Matrix2) -> f64 {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (a[i][j] - b[i][j]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_thickness_is_identity() {
        for pol in [Te, Tm] {
            for n_eff in [1.5, 3.2, 3.6] {
                let m = layer_matrix(3.4, 0.0, n_eff, 1.55, pol);
                assert!(max_abs_diff(&m, &IDENTITY) < 1e-15);
            }
        }
    }

    #[test]
    fn quarter_wave_stack_is_in_a_gap() {
        // At the quarter-wave point both layers carry a phase of π/2 and the
        // period matrix has trace -(r + 1/r), r the impedance ratio.
        let (n1, n2, n_eff, lam) = (3.5_f64, 3.0_f64, 2.0_f64, 0.8_f64);
        let k0 = 2.0 * std::f64::consts::PI / lam;
        let q1 = k0 * (n1 * n1 - n_eff * n_eff).sqrt();
        let q2 = k0 * (n2 * n2 - n_eff * n_eff).sqrt();
        let period = [
            IndexLayer::new(n1, std::f64::consts::FRAC_PI_2 / q1),
            IndexLayer::new(n2, std::f64::consts::FRAC_PI_2 / q2),
        ];
        for pol in [Te, Tm] {
            let (g1, g2) = match pol {
                Te => (1.0, 1.0),
                Tm => (1.0 / (n1 * n1), 1.0 / (n2 * n2)),
            };
            let r = (g1 * q1) / (g2 * q2);
            let tr = period_trace(&period, n_eff, lam, pol);
            assert!(
                (tr + (r + 1.0 / r)).abs() < 1e-12,
                "{tr} vs {}",
                -(r + 1.0 / r)
            );
            assert!(tr.abs() > 2.0);
        }
    }

    #[test]
    fn uniform_period_has_no_gap_for_propagating_waves() {
        let period = [IndexLayer::new(3.2, 0.13), IndexLayer::new(3.2, 0.31)];
        for n_eff in [1.0, 2.0, 2.9, 3.19] {
            assert!(period_trace(&period, n_eff, 0.7751, Te).abs() <= 2.0 + 1e-12);
            assert!(period_trace(&period, n_eff, 0.7751, Tm).abs() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn trace_is_continuous_across_the_gap_edge() {
        let period = [IndexLayer::new(3.39, 0.127), IndexLayer::new(3.08, 0.309)];
        let n = 20_000;
        let mut prev = period_trace(&period, 2.9, 0.7751, Tm);
        let mut crossed = false;
        for i in 1..=n {
            let ne = 2.9 + 0.2 * i as f64 / n as f64;
            let t = period_trace(&period, ne, 0.7751, Tm);
            assert!((t - prev).abs() < 0.05, "jump at n_eff {ne}");
            crossed |= (prev.abs() > 2.0) != (t.abs() > 2.0);
            prev = t;
        }
        assert!(crossed);
    }

    proptest! {
        #[test]
        fn lossless_layers_are_unimodular(
            n in 1.0f64..3.8, t in 0.0f64..2.0, n_eff in 1.0f64..3.8, lam in 0.75f64..1.8, tm in any::<bool>()
        ) {
            let pol = if tm { Tm } else { Te };
            let m = layer_matrix(n, t, n_eff, lam, pol);
            let scale = m.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
            prop_assert!((det(&m) - 1.0).abs() < 1e-12 * scale * scale);
        }

        #[test]
        fn halves_compose_to_whole(
            n in 1.0f64..3.8, t in 0.0f64..0.6, n_eff in 1.0f64..3.8, lam in 0.75f64..1.8, tm in any::<bool>()
        ) {
            let pol = if tm { Tm } else { Te };
            let half = layer_matrix(n, t / 2.0, n_eff, lam, pol);
            let whole = layer_matrix(n, t, n_eff, lam, pol);
            let scale = whole.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
            prop_assert!(max_abs_diff(&mul(&half, &half), &whole) < 1e-12 * scale);
        }
    }
}
