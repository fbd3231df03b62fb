//! Fixed-step RK4 for `i dU/dt = H(t) U`, `U(0) = 1`.

use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSettings {
    /// Upper bound on the step; each interval between samples is split evenly.
    pub step: f64,
    /// Largest tolerated `max |U^dagger U - 1|`.
    pub unitarity_tol: f64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self {
            step: 1e-4,
            unitarity_tol: 1e-8,
        }
    }
}

/// Drift is also checked every this many steps so that unstable runs stop early.
const CHECK_EVERY: usize = 1000;

fn derivative<const N: usize>(h: &CMat<N>, u: &CMat<N>) -> CMat<N> {
    (*h * *u).scale(C64::new(0.0, -1.0))
}

fn rk4_step<const N: usize>(h: &impl Fn(f64) -> CMat<N>, t: f64, dt: f64, u: &CMat<N>) -> CMat<N> {
    let h_start = h(t);
    let h_mid = h(t + 0.5 * dt);
    let h_end = h(t + dt);
    let k1 = derivative(&h_start, u);
    let k2 = derivative(&h_mid, &(*u + k1.scale_real(0.5 * dt)));
    let k3 = derivative(&h_mid, &(*u + k2.scale_real(0.5 * dt)));
    let k4 = derivative(&h_end, &(*u + k3.scale_real(dt)));
    *u + (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(dt / 6.0)
}

fn check<const N: usize>(u: &CMat<N>, t: f64, settings: &OdeSettings) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::Integration(format!(
            "non-finite propagator at t = {t}"
        )));
    }
    let drift = u.unitarity_deviation();
    if drift > settings.unitarity_tol {
        return Err(Error::Integration(format!(
            "unitarity drift {drift:e} at t = {t}"
        )));
    }
    Ok(())
}

/// Propagators at each of `times` (non-decreasing, starting at or after 0).
///
/// The integrator lands exactly on every requested time. No renormalization is
/// applied; drift beyond `settings.unitarity_tol` is an error.
pub fn ode_trajectory<const N: usize>(
    h: impl Fn(f64) -> CMat<N>,
    times: &[f64],
    settings: &OdeSettings,
) -> Result<Vec<CMat<N>>> {
    if !(settings.step > 0.0) {
        return Err(Error::Domain {
            what: "step",
            value: settings.step,
            expected: "(0, inf)",
        });
    }
    let mut u = CMat::<N>::identity();
    let mut t = 0.0;
    let mut steps_since_check = 0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if !(target >= t) {
            return Err(Error::Domain {
                what: "sample time",
                value: target,
                expected: "non-decreasing values >= 0",
            });
        }
        let span = target - t;
        let n = (span / settings.step).ceil() as usize;
        let dt = if n > 0 { span / n as f64 } else { 0.0 };
        for k in 0..n {
            u = rk4_step(&h, t + k as f64 * dt, dt, &u);
            steps_since_check += 1;
            if steps_since_check == CHECK_EVERY {
                check(&u, t + (k + 1) as f64 * dt, settings)?;
                steps_since_check = 0;
            }
        }
        t = target;
        check(&u, t, settings)?;
        out.push(u);
    }
    Ok(out)
}

/// `U(t_final)`.
pub fn ode_propagate<const N: usize>(
    h: impl Fn(f64) -> CMat<N>,
    t_final: f64,
    settings: &OdeSettings,
) -> Result<CMat<N>> {
    Ok(ode_trajectory(h, &[t_final], settings)?[0])
}
