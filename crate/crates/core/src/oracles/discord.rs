//! Discord by direct minimization of the measured conditional entropy over
//! projective measurements on one spin.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{entropy_of_matrix, partial_trace_matrix, Mat4, Subsystem, TwoQubitState, C64};

/// Outcomes rarer than this contribute nothing to the conditional entropy.
pub const OUTCOME_PROBABILITY_FLOOR: f64 = 1e-14;

/// Projective measurement `{V|0><0|V^dagger, V|1><1|V^dagger}` on one spin, with
/// `V|0> = (cos theta, e^{i phi} sin theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// `theta` in `[0, pi/2]`, `phi` in `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain {
                what: "theta",
                value: theta,
                expected: "[0, pi/2]",
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain {
                what: "phi",
                value: phi,
                expected: "[0, 2 pi)",
            });
        }
        Ok(Self { theta, phi })
    }

    pub fn computational() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// The two orthonormal vectors selected by the projectors.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]]
    }
}

/// Unnormalized state of the unmeasured spin after outcome `v`.
fn conditional_block(rho: &Mat4, v: &[C64; 2], measured: Subsystem) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (ip, entry) in row.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..2 {
                for jp in 0..2 {
                    let (r, c) = match measured {
                        Subsystem::B => (2 * i + j, 2 * ip + jp),
                        Subsystem::A => (2 * j + i, 2 * jp + ip),
                    };
                    acc += v[j].conj() * rho.entries[r][c] * v[jp];
                }
            }
            *entry = acc;
        }
    }
    out
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

fn measured_entropy(rho: &Mat4, basis: &MeasurementBasis, measured: Subsystem) -> f64 {
    basis
        .vectors()
        .iter()
        .map(|v| {
            let m = conditional_block(rho, v, measured);
            let p = m[0][0].re + m[1][1].re;
            if p < OUTCOME_PROBABILITY_FLOOR {
                return 0.0;
            }
            let z = (m[0][0].re - m[1][1].re) / p;
            let xy = 2.0 * m[0][1].norm() / p;
            let bloch = z.hypot(xy).min(1.0);
            p * binary_entropy(0.5 * (1.0 + bloch))
        })
        .sum()
}

/// `sum_k p_k S(rho_k)` for a measurement on spin B, in bits.
pub fn conditional_entropy_measured(rho: &TwoQubitState, basis: &MeasurementBasis) -> f64 {
    measured_entropy(rho.matrix(), basis, Subsystem::B)
}

/// As [`conditional_entropy_measured`], with the measured spin chosen explicitly.
pub fn conditional_entropy_measured_on(
    rho: &TwoQubitState,
    basis: &MeasurementBasis,
    measured: Subsystem,
) -> f64 {
    measured_entropy(rho.matrix(), basis, measured)
}

/// Grid resolution and refinement for [`discord_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Intervals on `theta in [0, pi/2]`, endpoints included.
    pub n_theta: usize,
    /// Points on `phi in [0, 2 pi)`.
    pub n_phi: usize,
    /// Nelder-Mead polish from the three best grid points.
    pub refine: bool,
    pub measured: Subsystem,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            n_theta: 60,
            n_phi: 120,
            refine: true,
            measured: Subsystem::B,
        }
    }
}

const SIMPLEX_ITERATIONS: usize = 200;
const SIMPLEX_TOL: f64 = 1e-10;

/// Minimizes `f` from `start`, initial simplex edges `scale`.
fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, start: [f64; 2], scale: [f64; 2]) -> f64 {
    let mut simplex = [
        start,
        [start[0] + scale[0], start[1]],
        [start[0], start[1] + scale[1]],
    ];
    let mut values = simplex.map(f);
    let point =
        |a: [f64; 2], b: [f64; 2], k: f64| [a[0] + k * (b[0] - a[0]), a[1] + k * (b[1] - a[1])];

    for _ in 0..SIMPLEX_ITERATIONS {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if values[2] - values[0] <= SIMPLEX_TOL {
            break;
        }
        let centroid = point(simplex[0], simplex[1], 0.5);
        let reflected = point(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = point(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            (simplex[2], values[2]) = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let contracted = if fr < values[2] {
                point(centroid, reflected, 0.5)
            } else {
                point(centroid, simplex[2], 0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = point(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// Discord `I - J` with `J` maximized over projective measurements on
/// `options.measured`, by grid search plus optional simplex refinement.
///
/// Works for any two-spin state. The result is clamped at zero.
pub fn discord_bruteforce(rho: &TwoQubitState, options: &DiscordOptions) -> Result<f64> {
    let m = rho.matrix();
    // D = S(measured marginal) - S(rho) + min S(rho | measurement)
    let s_measured = entropy_of_matrix(&partial_trace_matrix(m, options.measured))?;
    let s_joint = entropy_of_matrix(m)?;

    let n_theta = options.n_theta.max(1);
    let n_phi = options.n_phi.max(1);
    let d_theta = FRAC_PI_2 / n_theta as f64;
    let d_phi = 2.0 * PI / n_phi as f64;
    let objective = |x: [f64; 2]| {
        measured_entropy(
            m,
            &MeasurementBasis {
                theta: x[0],
                phi: x[1],
            },
            options.measured,
        )
    };

    let grid: Vec<([f64; 2], f64)> = (0..=n_theta)
        .into_par_iter()
        .flat_map_iter(|i| (0..n_phi).map(move |j| [i as f64 * d_theta, j as f64 * d_phi]))
        .map(|x| (x, objective(x)))
        .collect();

    let mut ranked: Vec<usize> = (0..grid.len()).collect();
    ranked.sort_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1).then(a.cmp(&b)));
    let mut best = grid[ranked[0]].1;

    if options.refine {
        let refined = ranked
            .iter()
            .take(3)
            .map(|&k| nelder_mead(&objective, grid[k].0, [0.5 * d_theta, 0.5 * d_phi]))
            .fold(f64::INFINITY, f64::min);
        best = best.min(refined);
    }

    Ok((s_measured - s_joint + best).max(0.0))
}
