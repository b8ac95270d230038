//! Vertical mode condition for a core between semi-infinite periodic
//! claddings, and profile sampling from the Bloch solution.
//!
//! Starting from the core centre with `(U, V) = (1, 0)` (even) or `(0, 1)`
//! (odd), the field at the core edge must be the decaying Bloch
//! eigenvector of the cladding period matrix `P`. The residual is
//! `(P - λd I) v` scaled by `‖P‖ ‖v‖`; both rows vanish at a mode.

use super::transfer::{apply, layer_matrix, stack_matrix, Matrix2};
use super::{
    GuidedMode, IndexLayer, ModeClass, Parity, Polarization, StackIndices, RESIDUAL_TOLERANCE,
    ROOT_TOLERANCE, SCAN_POINTS, VERTICAL_HALF_WIDTH_UM, VERTICAL_STEP_UM,
};
use crate::error::Result;
use crate::profile::{Grid1d, Profile1d};
use crate::roots::{bisect, interior_grid, sign_changes};

/// A verified root of the vertical mode condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabRoot {
    pub n_eff: f64,
    pub parity: Parity,
    pub residual: f64,
    pub bloch_eigenvalue: f64,
}

/// Search bracket in n_eff and the cladding regime that qualifies a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub lo: f64,
    pub hi: f64,
    pub class: ModeClass,
    pub points: usize,
}

impl RootSearch {
    /// TIR roots are sought between the smallest and largest layer index
    /// (the field may peak in a high-index reflector layer next to the
    /// core); Bragg roots between air and the smallest layer index.
    pub fn for_class(idx: &StackIndices, class: ModeClass) -> Self {
        let (lo, hi) = match class {
            ModeClass::Tir => (idx.min_index(), idx.max_index()),
            ModeClass::Bragg => (1.0, idx.min_index()),
        };
        Self {
            lo,
            hi,
            class,
            points: SCAN_POINTS,
        }
    }

    fn accepts(&self, trace: f64) -> bool {
        match self.class {
            ModeClass::Tir => trace > 2.0,
            ModeClass::Bragg => trace < -2.0,
        }
    }
}

fn start_vector(parity: Parity) -> [f64; 2] {
    match parity {
        Parity::Even => [1.0, 0.0],
        Parity::Odd => [0.0, 1.0],
    }
}

fn decaying_eigenvalue(trace: f64) -> f64 {
    (trace - trace.signum() * (trace * trace - 4.0).sqrt()) / 2.0
}

struct Condition {
    trace: f64,
    eigenvalue: f64,
    rows: [f64; 2],
}

fn condition(
    core: IndexLayer,
    period: &[IndexLayer],
    n_eff: f64,
    wavelength_um: f64,
    pol: Polarization,
    parity: Parity,
) -> Condition {
    let half_core = layer_matrix(
        core.index,
        core.thickness_um / 2.0,
        n_eff,
        wavelength_um,
        pol,
    );
    let v = apply(&half_core, start_vector(parity));
    let p = stack_matrix(period, n_eff, wavelength_um, pol);
    let trace = p[0][0] + p[1][1];
    let eigenvalue = if trace.abs() > 2.0 {
        decaying_eigenvalue(trace)
    } else {
        f64::NAN
    };
    let a: Matrix2 = [
        [p[0][0] - eigenvalue, p[0][1]],
        [p[1][0], p[1][1] - eigenvalue],
    ];
    let r = apply(&a, v);
    let p_norm = p.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let v_norm = v[0].hypot(v[1]);
    let scale = p_norm * v_norm;
    Condition {
        trace,
        eigenvalue,
        rows: [r[0] / scale, r[1] / scale],
    }
}

/// Normalized mode-condition residual (largest row) at `n_eff`.
pub fn residual(
    core: IndexLayer,
    period: &[IndexLayer],
    n_eff: f64,
    wavelength_um: f64,
    pol: Polarization,
    parity: Parity,
) -> f64 {
    let c = condition(core, period, n_eff, wavelength_um, pol, parity);
    c.rows[0].abs().max(c.rows[1].abs())
}

/// All roots of the mode condition inside `search`, sorted by descending
/// n_eff.
///
/// Each residual row is scanned separately for sign changes, each change
/// is bisected, and a candidate is kept only if both rows are below
/// [`RESIDUAL_TOLERANCE`] there. A row whose coefficients pass through
/// zero changes sign without a mode, and the two-row check rejects it.
pub fn find_roots(
    core: IndexLayer,
    period: &[IndexLayer],
    wavelength_um: f64,
    pol: Polarization,
    search: &RootSearch,
) -> Vec<SlabRoot> {
    let mut roots: Vec<SlabRoot> = Vec::new();
    if !(search.hi > search.lo) {
        return roots;
    }
    let points = interior_grid(search.lo, search.hi, search.points);
    for parity in [Parity::Even, Parity::Odd] {
        let eval = |n: f64| condition(core, period, n, wavelength_um, pol, parity);
        for row in 0..2 {
            let row_value = |n: f64| {
                let c = eval(n);
                search.accepts(c.trace).then_some(c.rows[row])
            };
            for (a, b) in sign_changes(&points, row_value) {
                let n = bisect(a, b, ROOT_TOLERANCE, |n| eval(n).rows[row]);
                let c = eval(n);
                let res = c.rows[0].abs().max(c.rows[1].abs());
                if !search.accepts(c.trace) || !(res < RESIDUAL_TOLERANCE) {
                    continue;
                }
                if roots.iter().any(|r| (r.n_eff - n).abs() < 1e-9) {
                    continue;
                }
                roots.push(SlabRoot {
                    n_eff: n,
                    parity,
                    residual: res,
                    bloch_eigenvalue: c.eigenvalue,
                });
            }
        }
    }
    roots.sort_by(|a, b| b.n_eff.total_cmp(&a.n_eff));
    roots
}

/// Samples `U(y)` for `y >= 0` on `positions`, continuing the periodic
/// cladding to infinity through its Bloch eigenvector so that the decaying
/// solution never mixes with the growing one.
pub fn sample_half_profile(
    core: IndexLayer,
    period: &[IndexLayer; 2],
    root: &SlabRoot,
    wavelength_um: f64,
    pol: Polarization,
    positions: impl Iterator<Item = f64>,
) -> Vec<f64> {
    let n_eff = root.n_eff;
    let half = core.thickness_um / 2.0;
    let v0 = start_vector(root.parity);
    let edge = apply(
        &layer_matrix(core.index, half, n_eff, wavelength_um, pol),
        v0,
    );
    // Decaying eigenvector of the period matrix, scaled to best match the
    // core-edge field.
    let p = stack_matrix(period, n_eff, wavelength_um, pol);
    let ld = root.bloch_eigenvalue;
    let c1 = [p[0][1], ld - p[0][0]];
    let c2 = [ld - p[1][1], p[1][0]];
    let e = if c1[0].hypot(c1[1]) >= c2[0].hypot(c2[1]) {
        c1
    } else {
        c2
    };
    let scale = (e[0] * edge[0] + e[1] * edge[1]) / (e[0] * e[0] + e[1] * e[1]);
    let w = [e[0] * scale, e[1] * scale];

    let t1 = period[0].thickness_um;
    let lambda_period = t1 + period[1].thickness_um;
    let m1 = layer_matrix(period[0].index, t1, n_eff, wavelength_um, pol);
    let after_first = apply(&m1, w);

    positions
        .map(|y| {
            if y <= half {
                return apply(&layer_matrix(core.index, y, n_eff, wavelength_um, pol), v0)[0];
            }
            let d = y - half;
            let k = (d / lambda_period).floor();
            let off = d - k * lambda_period;
            let amp = ld.powi(k as i32);
            let u = if off <= t1 {
                apply(
                    &layer_matrix(period[0].index, off, n_eff, wavelength_um, pol),
                    w,
                )[0]
            } else {
                apply(
                    &layer_matrix(period[1].index, off - t1, n_eff, wavelength_um, pol),
                    after_first,
                )[0]
            };
            amp * u
        })
        .collect()
}

pub(super) fn build_mode(
    idx: &StackIndices,
    root: SlabRoot,
    wavelength_um: f64,
    pol: Polarization,
    class: ModeClass,
) -> Result<GuidedMode> {
    let grid = Grid1d::symmetric(VERTICAL_HALF_WIDTH_UM, VERTICAL_STEP_UM)?;
    let values = symmetric_profile(idx.core, &idx.period, &root, wavelength_um, pol, grid);
    let profile = Profile1d::new(grid, values)?.normalized()?;
    Ok(GuidedMode {
        polarization: pol,
        class,
        n_eff: root.n_eff,
        wavelength_um,
        parity: root.parity,
        bloch_eigenvalue: root.bloch_eigenvalue,
        residual: root.residual,
        profile,
    })
}

/// Full profile on a grid symmetric about the core centre.
pub(super) fn symmetric_profile(
    core: IndexLayer,
    period: &[IndexLayer; 2],
    root: &SlabRoot,
    wavelength_um: f64,
    pol: Polarization,
    grid: Grid1d,
) -> Vec<f64> {
    let mid = grid.len() / 2;
    let upper = sample_half_profile(
        core,
        period,
        root,
        wavelength_um,
        pol,
        (mid..grid.len()).map(|i| grid.position(i).abs()),
    );
    let sign = match root.parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut values: Vec<f64> = upper[1..].iter().rev().map(|u| sign * u).collect();
    values.extend(upper);
    values
}
