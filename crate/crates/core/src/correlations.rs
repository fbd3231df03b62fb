//! Closed-form correlation measures for canonical X-states.
//!
//! All entropies are in bits. Discord and classical correlations are taken with
//! respect to projective measurements on spin B; use
//! [`XState::swap_subsystems`] for the A-measured variants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{BlochParams, XState};

/// Slack for arguments that should lie in a closed interval but drift by rounding.
pub const DOMAIN_TOL: f64 = 1e-12;
/// Correlations below `-NEGATIVE_TOL` before clamping signal a bug.
pub const NEGATIVE_TOL: f64 = 1e-9;
/// Discord below this bound is reported as an internal inconsistency.
pub const DISCORD_INCONSISTENCY_TOL: f64 = 1e-6;
/// Candidates within this distance of the running minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `f(t) = -(1-t)/2 log2(1-t) - (1+t)/2 log2(1+t)`, so that a qubit with Bloch
/// vector length `t` has entropy `1 + f(t)`.
///
/// `f` is even; `|t|` may exceed 1 by at most `1e-12` and is then clamped.
pub fn binary_entropy_offset(t: f64) -> Result<f64> {
    let a = t.abs();
    if !(a <= 1.0 + DOMAIN_TOL) {
        return Err(Error::Domain {
            what: "Bloch length",
            value: t,
            expected: "[-1, 1]",
        });
    }
    let a = a.min(1.0);
    Ok(-0.5 * xlog2x(1.0 - a) - 0.5 * xlog2x(1.0 + a))
}

fn clamped_sqrt(radicand: f64, what: &'static str) -> Result<f64> {
    if radicand < -DOMAIN_TOL || radicand.is_nan() {
        return Err(Error::Domain {
            what,
            value: radicand,
            expected: "[0, inf)",
        });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Square roots of the four eigenvalues of `rho * rho~` for the normal form.
pub fn concurrence_roots(b: &BlochParams) -> Result<[f64; 4]> {
    let BlochParams { r, s, c1, c2, c3 } = *b;
    let outer = clamped_sqrt((1.0 + c3).powi(2) - (r + s).powi(2), "outer radicand")?;
    let inner = clamped_sqrt((1.0 - c3).powi(2) - (r - s).powi(2), "inner radicand")?;
    Ok([
        (c1 - c2 - outer).abs() / 4.0,
        (c1 - c2 + outer).abs() / 4.0,
        (c1 + c2 - inner).abs() / 4.0,
        (c1 + c2 + inner).abs() / 4.0,
    ])
}

/// Wootters concurrence of an X-state from its normal form.
pub fn concurrence(b: &BlochParams) -> Result<f64> {
    let roots = concurrence_roots(b)?;
    let largest = roots.iter().copied().fold(0.0, f64::max);
    let sum: f64 = roots.iter().sum();
    Ok((2.0 * largest - sum).clamp(0.0, 1.0))
}

/// Spectrum of the normal form: `[u+, u-, v+, v-]`.
pub fn xstate_eigenvalues(b: &BlochParams) -> [f64; 4] {
    let BlochParams { r, s, c1, c2, c3 } = *b;
    let du = ((r - s).powi(2) + (c1 + c2).powi(2)).sqrt();
    let dv = ((r + s).powi(2) + (c1 - c2).powi(2)).sqrt();
    [
        (1.0 - c3 + du) / 4.0,
        (1.0 - c3 - du) / 4.0,
        (1.0 + c3 + dv) / 4.0,
        (1.0 + c3 - dv) / 4.0,
    ]
}

/// Entropy of spin A, `1 + f(r)`.
pub fn entropy_a(b: &BlochParams) -> Result<f64> {
    Ok(1.0 + binary_entropy_offset(b.r)?)
}

/// Entropy of spin B, `1 + f(s)`.
pub fn entropy_b(b: &BlochParams) -> Result<f64> {
    Ok(1.0 + binary_entropy_offset(b.s)?)
}

fn mutual_information_raw(b: &BlochParams) -> Result<f64> {
    let mut total = entropy_a(b)? + entropy_b(b)?;
    for lambda in xstate_eigenvalues(b) {
        if lambda < -DOMAIN_TOL {
            return Err(Error::Domain {
                what: "X-state eigenvalue",
                value: lambda,
                expected: "[0, 1]",
            });
        }
        total += xlog2x(lambda);
    }
    Ok(total)
}

/// Quantum mutual information `S(A) + S(B) - S(AB)` of a canonical X-state.
pub fn mutual_information(x: &XState) -> Result<f64> {
    let raw = mutual_information_raw(&x.bloch_params()?)?;
    Ok(raw.max(0.0))
}

/// The three candidate conditional entropies `(S1, S2, S3)`: measuring spin B
/// along z, x and y respectively.
pub fn conditional_entropy_candidates(b: &BlochParams) -> Result<[f64; 3]> {
    let BlochParams { r, s, c1, c2, c3 } = *b;
    // -(n/4) log2(n / 2d), with n -> 0 contributing nothing.
    let term = |n: f64, d: f64| -> Result<f64> {
        if n <= 4.0 * DOMAIN_TOL {
            if n < -4.0 * DOMAIN_TOL {
                return Err(Error::Domain {
                    what: "population",
                    value: n / 4.0,
                    expected: "[0, 1]",
                });
            }
            return Ok(0.0);
        }
        if d <= 0.0 {
            return Err(Error::Domain {
                what: "measurement probability",
                value: d / 2.0,
                expected: "(0, 1]",
            });
        }
        Ok(-n / 4.0 * (n / (2.0 * d)).log2())
    };
    let s1 = term(1.0 + r + s + c3, 1.0 + s)?
        + term(1.0 - r + s - c3, 1.0 + s)?
        + term(1.0 + r - s - c3, 1.0 - s)?
        + term(1.0 - r - s + c3, 1.0 - s)?;
    let s2 = 1.0 + binary_entropy_offset(r.hypot(c1))?;
    let s3 = 1.0 + binary_entropy_offset(r.hypot(c2))?;
    Ok([s1, s2, s3])
}

/// Index (1-based) of the smallest candidate; lowest index wins ties within `1e-12`.
pub fn argmin_candidate(candidates: &[f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if candidates[i] < candidates[best] - TIE_TOL {
            best = i;
        }
    }
    best + 1
}

/// Classical correlations with the candidate that attains the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCorrelations {
    pub value: f64,
    pub candidates: [f64; 3],
    pub argmin: usize,
}

fn classical_correlations_raw(b: &BlochParams) -> Result<ClassicalCorrelations> {
    let candidates = conditional_entropy_candidates(b)?;
    let argmin = argmin_candidate(&candidates);
    Ok(ClassicalCorrelations {
        value: entropy_a(b)? - candidates[argmin - 1],
        candidates,
        argmin,
    })
}

/// `C = S(A) - min{S1, S2, S3}` for a canonical X-state (value clamped at 0).
pub fn classical_correlations(x: &XState) -> Result<ClassicalCorrelations> {
    let mut cc = classical_correlations_raw(&x.bloch_params()?)?;
    check_non_negative("classical correlations", cc.value)?;
    cc.value = cc.value.max(0.0);
    Ok(cc)
}

fn check_non_negative(what: &str, value: f64) -> Result<()> {
    if value < -NEGATIVE_TOL || value.is_nan() {
        return Err(Error::Inconsistent(format!(
            "{what} = {value:e} is negative"
        )));
    }
    Ok(())
}

/// Quantum discord `I - C` of a canonical X-state, clamped to `[0, 1]`.
pub fn quantum_discord(x: &XState) -> Result<f64> {
    Ok(report_from_bloch(&x.bloch_params()?)?.discord)
}

/// All closed-form measures for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub mutual_information: f64,
    pub classical_correlations: f64,
    pub discord: f64,
    pub entropy_candidates: [f64; 3],
    pub argmin_candidate: usize,
}

fn report_from_bloch(b: &BlochParams) -> Result<CorrelationReport> {
    let concurrence = concurrence(b)?;
    let mi = mutual_information_raw(b)?;
    let cc = classical_correlations_raw(b)?;
    check_non_negative("mutual information", mi)?;
    check_non_negative("classical correlations", cc.value)?;
    let discord_raw = mi - cc.value;
    if discord_raw < -DISCORD_INCONSISTENCY_TOL {
        return Err(Error::Inconsistent(format!(
            "discord = {discord_raw:e} is negative (I = {mi}, C = {})",
            cc.value
        )));
    }
    let mutual_information = mi.max(0.0);
    let classical_correlations = cc.value.clamp(0.0, mutual_information);
    Ok(CorrelationReport {
        concurrence,
        mutual_information,
        classical_correlations,
        discord: (mutual_information - classical_correlations).min(1.0),
        entropy_candidates: cc.candidates,
        argmin_candidate: cc.argmin,
    })
}

/// Report for any valid X-state; phases are removed first.
pub fn full_report(x: &XState) -> Result<CorrelationReport> {
    report_from_bloch(&x.canonicalize().bloch_params()?)
}
