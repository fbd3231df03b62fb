//! Exact dynamics of two coupled spins under z-fields `w1(t)`, `w2(t)`:
//!
//! `H = w1 sz(x)1 + w2 1(x)sz + gxx sx sx + gyy sy sy + gzz sz sz + gxy sx sy + gyx sy sx`
//!
//! with `hbar = 1`. The operator `sz(x)sz` is conserved, so `H` splits into the
//! `{|++>, |-->}` ("plus") and `{|+->, |-+>}` ("minus") blocks
//!
//! `H+- = [[W+-, G+-], [G+-*, -W+-]] +- gzz`, `W+- = w1 +- w2`,
//! `G+- = (gxx -+ gyy) - i(+-gxy + gyx)`.
//!
//! Each block is an independent two-level problem. Three drives have closed-form
//! propagators: constant `W`, the double-sech pulse `W = 2|G| sech(2|G|t)` and the
//! bright pulse `W = (|G|/2)(3 sech(|G|t) - cosh(|G|t))`.
//!
//! Phases that grow like `sinh(|G|t)` are assembled as products of unit complex
//! numbers rather than as summed angles, so the generic and closed-form routes
//! agree to rounding even when the phase is ~1e8 rad.

use std::fmt;

use crate::error::Result;
use crate::matrix::{kron, pauli, Mat2, Mat4, C64, I, ONE, ZERO};
use crate::states::{BellMixture, XState};

fn cis(angle: f64) -> C64 {
    C64::new(angle.cos(), angle.sin())
}

/// Spin-spin coupling constants, in units of the reference coupling `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConstants {
    pub gxx: f64,
    pub gyy: f64,
    pub gzz: f64,
    pub gxy: f64,
    pub gyx: f64,
}

impl CouplingConstants {
    /// `gxx = gyy = 2 gxy = 2 gyx = 1`, `gzz = 0`: `|G+| = 1`, `|G-| = 2`,
    /// `arg G+ = -pi/2`, `arg G- = 0`.
    pub fn standard() -> Self {
        Self {
            gxx: 1.0,
            gyy: 1.0,
            gzz: 0.0,
            gxy: 0.5,
            gyx: 0.5,
        }
    }

    /// `gxx = -gyy = 2 gxy = -2 gyx = 1`: the two blocks trade roles.
    pub fn swapped() -> Self {
        Self {
            gxx: 1.0,
            gyy: -1.0,
            gzz: 0.0,
            gxy: 0.5,
            gyx: -0.5,
        }
    }

    pub fn with_gzz(self, gzz: f64) -> Self {
        Self { gzz, ..self }
    }

    pub fn is_standard(&self) -> bool {
        let s = Self::standard();
        self.gxx == s.gxx && self.gyy == s.gyy && self.gxy == s.gxy && self.gyx == s.gyx
    }

    pub fn is_finite(&self) -> bool {
        [self.gxx, self.gyy, self.gzz, self.gxy, self.gyx]
            .iter()
            .all(|g| g.is_finite())
    }

    /// Off-diagonal element of the block Hamiltonian.
    pub fn gamma(&self, block: Block) -> C64 {
        match block {
            Block::Plus => C64::new(self.gxx - self.gyy, -(self.gxy + self.gyx)),
            Block::Minus => C64::new(self.gxx + self.gyy, -(-self.gxy + self.gyx)),
        }
    }
}

/// Dynamically invariant two-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    /// `{|++>, |-->}`, where `sz sz = +1`.
    Plus,
    /// `{|+->, |-+>}`, where `sz sz = -1`.
    Minus,
}

impl Block {
    /// Basis indices spanned by the block.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Block::Plus => (0, 3),
            Block::Minus => (1, 2),
        }
    }

    fn zz_sign(self) -> f64 {
        match self {
            Block::Plus => 1.0,
            Block::Minus => -1.0,
        }
    }
}

/// Time profile of the longitudinal field within one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Time-independent `W`.
    Constant(f64),
    /// `W(t) = 2|G| sech(2|G| t)`.
    SechDouble,
    /// `W(t) = (|G|/2) [3 sech(|G| t) - cosh(|G| t)]`.
    SechBright,
}

impl Drive {
    pub fn label(&self) -> String {
        match self {
            Drive::Constant(w) => format!("const{w}"),
            Drive::SechDouble => "double".into(),
            Drive::SechBright => "bright".into(),
        }
    }
}

impl fmt::Display for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Block-level parameters derived from a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceDrive {
    pub gamma_abs: f64,
    /// `arg G`, in `(-pi, pi]`.
    pub gamma_phase: f64,
    pub drive: Drive,
}

impl SubspaceDrive {
    pub fn gamma(&self) -> C64 {
        C64::from_polar(self.gamma_abs, self.gamma_phase)
    }

    /// Scaled time `|G| t`.
    pub fn tau(&self, t: f64) -> f64 {
        self.gamma_abs * t
    }

    /// Longitudinal field `W(t)` of the block.
    pub fn omega(&self, t: f64) -> f64 {
        let g = self.gamma_abs;
        let tau = self.tau(t);
        match self.drive {
            Drive::Constant(w) => w,
            Drive::SechDouble => 2.0 * g / (2.0 * tau).cosh(),
            Drive::SechBright => 0.5 * g * (3.0 / tau.cosh() - tau.cosh()),
        }
    }

    /// Amplitudes `(a, b)` of the block propagator `[[a, b], [-b*, a*]]`,
    /// without the `e^{-+i gzz t}` factor.
    pub fn amplitudes(&self, t: f64) -> (C64, C64) {
        let tau = self.tau(t);
        let phase_g = cis(self.gamma_phase);
        match self.drive {
            Drive::Constant(w) => {
                let nu = w.hypot(self.gamma_abs);
                if nu == 0.0 {
                    return (ONE, ZERO);
                }
                let (sin, cos) = (nu * t).sin_cos();
                (C64::new(cos, -w / nu * sin), -I * self.gamma() * (sin / nu))
            }
            Drive::SechDouble => {
                let th = tau.tanh();
                let norm = (1.0 + th * th).sqrt();
                let common = cis(-th.atan());
                let spin = cis(tau);
                (
                    common * spin.conj() / norm,
                    -I * phase_g * common * spin * (th.abs() / norm),
                )
            }
            Drive::SechBright => {
                let common = cis(-(0.5 * tau).tanh().atan());
                let spin = cis(0.5 * tau.sinh());
                (
                    common * spin.conj() / tau.cosh(),
                    -I * phase_g * common * spin * tau.tanh(),
                )
            }
        }
    }

    /// `Re[a b*]` and `a^2 - b^2` straight from the closed-form expressions.
    pub fn quantities(&self, t: f64) -> BlockQuantities {
        let tau = self.tau(t);
        let phi = self.gamma_phase;
        match self.drive {
            Drive::Constant(_) => {
                let (a, b) = self.amplitudes(t);
                BlockQuantities::from_amplitudes(a, b)
            }
            Drive::SechDouble => {
                let theta = 2.0 * tau + phi;
                let sech2 = 1.0 / (2.0 * tau).cosh();
                BlockQuantities {
                    re_ab: 0.5 * (2.0 * tau).tanh() * theta.sin(),
                    a2_minus_b2: C64::new(theta.cos(), -theta.sin() * sech2)
                        * cis(phi - 2.0 * tau.tanh().atan()),
                }
            }
            Drive::SechBright => {
                let sech = 1.0 / tau.cosh();
                let th = tau.tanh();
                let drift = cis(tau.sinh());
                // e^{i(phi + sinh tau)} kept as a product, see module docs.
                let rotor = cis(phi) * drift;
                BlockQuantities {
                    re_ab: th * sech * rotor.im,
                    a2_minus_b2: (rotor * rotor * (th * th) + sech * sech)
                        * cis(-2.0 * (0.5 * tau).tanh().atan())
                        * drift.conj(),
                }
            }
        }
    }
}

/// The two numbers that fix the evolution of Bell-state mixtures in one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockQuantities {
    pub re_ab: f64,
    pub a2_minus_b2: C64,
}

impl BlockQuantities {
    pub fn from_amplitudes(a: C64, b: C64) -> Self {
        Self {
            re_ab: (a * b.conj()).re,
            a2_minus_b2: a * a - b * b,
        }
    }
}

/// Couplings plus one drive per block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub drive_plus: Drive,
    pub drive_minus: Drive,
    pub couplings: CouplingConstants,
}

impl ScenarioConfig {
    pub fn new(drive_plus: Drive, drive_minus: Drive, couplings: CouplingConstants) -> Self {
        Self {
            drive_plus,
            drive_minus,
            couplings,
        }
    }

    /// Constant fields with `W- = 2 W+` and the standard couplings.
    pub fn constant_fields(omega_plus: f64) -> Self {
        Self::new(
            Drive::Constant(omega_plus),
            Drive::Constant(2.0 * omega_plus),
            CouplingConstants::standard(),
        )
    }

    /// Sech-pulse drives with the standard couplings.
    pub fn sech(plus: Drive, minus: Drive) -> Self {
        Self::new(plus, minus, CouplingConstants::standard())
    }

    /// The four exactly solvable sech scenarios, plus block varying slowest.
    pub fn sech_scenarios() -> [Self; 4] {
        use Drive::*;
        [
            Self::sech(SechDouble, SechDouble),
            Self::sech(SechDouble, SechBright),
            Self::sech(SechBright, SechDouble),
            Self::sech(SechBright, SechBright),
        ]
    }

    pub fn with_couplings(self, couplings: CouplingConstants) -> Self {
        Self { couplings, ..self }
    }

    pub fn drive(&self, block: Block) -> Drive {
        match block {
            Block::Plus => self.drive_plus,
            Block::Minus => self.drive_minus,
        }
    }

    pub fn subspace(&self, block: Block) -> SubspaceDrive {
        let g = self.couplings.gamma(block);
        SubspaceDrive {
            gamma_abs: g.norm(),
            gamma_phase: g.arg(),
            drive: self.drive(block),
        }
    }

    /// Factor converting physical time into the reported axis `tau+ = |G+| t`.
    /// Falls back to 1 when `G+ = 0`.
    pub fn tau_scale(&self) -> f64 {
        let g = self.couplings.gamma(Block::Plus).norm();
        if g > 0.0 {
            g
        } else {
            1.0
        }
    }

    pub fn time_at_tau_plus(&self, tau_plus: f64) -> f64 {
        tau_plus / self.tau_scale()
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.drive_plus.label(), self.drive_minus.label())
    }
}

/// Block amplitudes at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorPair {
    pub a_plus: C64,
    pub b_plus: C64,
    pub a_minus: C64,
    pub b_minus: C64,
}

impl PropagatorPair {
    pub fn identity() -> Self {
        Self {
            a_plus: ONE,
            b_plus: ZERO,
            a_minus: ONE,
            b_minus: ZERO,
        }
    }

    pub fn amplitudes(&self, block: Block) -> (C64, C64) {
        match block {
            Block::Plus => (self.a_plus, self.b_plus),
            Block::Minus => (self.a_minus, self.b_minus),
        }
    }

    /// `max |1 - |a|^2 - |b|^2|` over both blocks.
    pub fn normalization_error(&self) -> f64 {
        let e = |a: C64, b: C64| (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        e(self.a_plus, self.b_plus).max(e(self.a_minus, self.b_minus))
    }
}

/// Closed-form block amplitudes at time `t >= 0` (physical units, `hbar = c = 1`).
pub fn propagator(cfg: &ScenarioConfig, t: f64) -> PropagatorPair {
    debug_assert!(t >= 0.0, "propagator evaluated at negative time {t}");
    let (a_plus, b_plus) = cfg.subspace(Block::Plus).amplitudes(t);
    let (a_minus, b_minus) = cfg.subspace(Block::Minus).amplitudes(t);
    PropagatorPair {
        a_plus,
        b_plus,
        a_minus,
        b_minus,
    }
}

/// Local fields `(w1, w2)` that realize the scenario at time `t`.
pub fn field_profile(cfg: &ScenarioConfig, t: f64) -> (f64, f64) {
    let w_plus = cfg.subspace(Block::Plus).omega(t);
    let w_minus = cfg.subspace(Block::Minus).omega(t);
    (0.5 * (w_plus + w_minus), 0.5 * (w_plus - w_minus))
}

/// Full 4x4 Hamiltonian assembled from Pauli products.
pub fn hamiltonian(cfg: &ScenarioConfig, t: f64) -> Mat4 {
    let (w1, w2) = field_profile(cfg, t);
    let k = &cfg.couplings;
    let (x, y, z, one) = (pauli::x(), pauli::y(), pauli::z(), Mat2::identity());
    kron(&z, &one).scale_real(w1)
        + kron(&one, &z).scale_real(w2)
        + kron(&x, &x).scale_real(k.gxx)
        + kron(&y, &y).scale_real(k.gyy)
        + kron(&z, &z).scale_real(k.gzz)
        + kron(&x, &y).scale_real(k.gxy)
        + kron(&y, &x).scale_real(k.gyx)
}

/// 2x2 Hamiltonian of one block, `[[W, G], [G*, -W]] +- gzz`.
pub fn block_hamiltonian(cfg: &ScenarioConfig, block: Block, t: f64) -> Mat2 {
    let sub = cfg.subspace(block);
    let w = sub.omega(t);
    let zz = block.zz_sign() * cfg.couplings.gzz;
    let g = cfg.couplings.gamma(block);
    Mat2::from_entries([
        [C64::new(w + zz, 0.0), g],
        [g.conj(), C64::new(-w + zz, 0.0)],
    ])
}

/// 4x4 propagator: each block `e^{-+i gzz t} [[a, b], [-b*, a*]]`, zeros elsewhere.
pub fn full_evolution_operator(pair: &PropagatorPair, gzz: f64, t: f64) -> Mat4 {
    let mut u = Mat4::zeros();
    for block in [Block::Plus, Block::Minus] {
        let (a, b) = pair.amplitudes(block);
        let phase = cis(-block.zz_sign() * gzz * t);
        let (i, j) = block.indices();
        u[(i, i)] = phase * a;
        u[(i, j)] = phase * b;
        u[(j, i)] = -phase * b.conj();
        u[(j, j)] = phase * a.conj();
    }
    u
}

fn evolve_block(a: C64, b: C64, top: f64, bottom: f64, coherence: C64) -> (f64, f64, C64) {
    let cross = 2.0 * (a * b.conj() * coherence).re;
    let new_top = a.norm_sqr() * top + b.norm_sqr() * bottom + cross;
    let new_bottom = b.norm_sqr() * top + a.norm_sqr() * bottom - cross;
    let new_coherence = a * a * coherence - b * b * coherence.conj() - a * b * (top - bottom);
    (new_top, new_bottom, new_coherence)
}

/// `U rho U^dagger` for an X-state, entry by entry. The result is generally not canonical.
pub fn evolve_xstate(x0: &XState, pair: &PropagatorPair) -> XState {
    let [r11, r22, r33, r44] = x0.populations();
    let (n11, n44, n14) = evolve_block(pair.a_plus, pair.b_plus, r11, r44, x0.rho14());
    let (n22, n33, n23) = evolve_block(pair.a_minus, pair.b_minus, r22, r33, x0.rho23());
    XState::from_parts_unchecked([n11, n22, n33, n44], n14, n23)
}

/// Evolved Bell mixture assembled from the per-block closed-form quantities.
pub fn evolved_mixture_closed_form(
    spec: &BellMixture,
    cfg: &ScenarioConfig,
    t: f64,
) -> Result<XState> {
    let spec = BellMixture::new(spec.kind, spec.p)?;
    let plus = cfg.subspace(Block::Plus).quantities(t);
    let minus = cfg.subspace(Block::Minus).quantities(t);
    let mut populations = [0.0; 4];
    let mut rho14 = ZERO;
    let mut rho23 = ZERO;
    for (bell, w) in spec.weighted_components() {
        let sign = bell.sign();
        if bell.in_outer_block() {
            populations[0] += w * (0.5 + sign * plus.re_ab);
            populations[3] += w * (0.5 - sign * plus.re_ab);
            rho14 += plus.a2_minus_b2 * (0.5 * sign * w);
        } else {
            populations[1] += w * (0.5 + sign * minus.re_ab);
            populations[2] += w * (0.5 - sign * minus.re_ab);
            rho23 += minus.a2_minus_b2 * (0.5 * sign * w);
        }
    }
    XState::new(populations, rho14, rho23)
}
