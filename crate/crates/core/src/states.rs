//! X-states, their five-parameter Bloch normal form, Bell states and two-Bell mixtures.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{Mat4, TwoQubitState, C64, DENSITY_PSD_TOL, ZERO};

/// Tolerance on the X-state trace and positivity conditions.
pub const XSTATE_TOL: f64 = 1e-12;

/// Two-spin density matrix whose only nonzero entries lie on the diagonal and
/// anti-diagonal.
///
/// `rho41 = conj(rho14)` and `rho32 = conj(rho23)` are implied. The state is
/// *canonical* when both coherences are real and non-negative; every correlation
/// measure is invariant under the local phase rotation that makes it so.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    populations: [f64; 4],
    rho14: C64,
    rho23: C64,
}

fn block_min_eigenvalue(a: f64, d: f64, coherence: C64) -> f64 {
    0.5 * (a + d) - (0.25 * (a - d) * (a - d) + coherence.norm_sqr()).sqrt()
}

impl XState {
    /// Validated constructor from the four populations `(rho11, rho22, rho33, rho44)`
    /// and the two coherences `rho14`, `rho23`.
    pub fn new(populations: [f64; 4], rho14: C64, rho23: C64) -> Result<Self> {
        let finite = populations.iter().all(|p| p.is_finite())
            && rho14.re.is_finite()
            && rho14.im.is_finite()
            && rho23.re.is_finite()
            && rho23.im.is_finite();
        if !finite {
            return Err(Error::InvalidXState("non-finite entry".into()));
        }
        let trace: f64 = populations.iter().sum();
        if (trace - 1.0).abs() > XSTATE_TOL {
            return Err(Error::InvalidXState(format!(
                "trace {trace} differs from 1"
            )));
        }
        if let Some(p) = populations.iter().find(|&&p| p < -XSTATE_TOL) {
            return Err(Error::InvalidXState(format!("negative population {p}")));
        }
        let [r11, r22, r33, r44] = populations;
        if r11 * r44 < rho14.norm_sqr() - XSTATE_TOL
            || block_min_eigenvalue(r11, r44, rho14) < -DENSITY_PSD_TOL
        {
            return Err(Error::InvalidXState(format!(
                "rho11*rho44 = {} < |rho14|^2 = {}",
                r11 * r44,
                rho14.norm_sqr()
            )));
        }
        if r22 * r33 < rho23.norm_sqr() - XSTATE_TOL
            || block_min_eigenvalue(r22, r33, rho23) < -DENSITY_PSD_TOL
        {
            return Err(Error::InvalidXState(format!(
                "rho22*rho33 = {} < |rho23|^2 = {}",
                r22 * r33,
                rho23.norm_sqr()
            )));
        }
        Ok(Self {
            populations,
            rho14,
            rho23,
        })
    }

    /// Construction for entries that are valid by construction (unitary evolution of
    /// a valid state). Only checked in debug builds.
    pub(crate) fn from_parts_unchecked(populations: [f64; 4], rho14: C64, rho23: C64) -> Self {
        debug_assert!(
            Self::new(populations, rho14, rho23).is_ok(),
            "invalid X-state {populations:?} {rho14} {rho23}"
        );
        Self {
            populations,
            rho14,
            rho23,
        }
    }

    /// Diagonal (classical) X-state.
    pub fn diagonal(populations: [f64; 4]) -> Result<Self> {
        Self::new(populations, ZERO, ZERO)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            populations: [0.25; 4],
            rho14: ZERO,
            rho23: ZERO,
        }
    }

    /// Reads an X-state out of a full density matrix. Off-X entries above `1e-12`
    /// are rejected.
    pub fn from_density(rho: &TwoQubitState) -> Result<Self> {
        Self::from_matrix(rho.matrix(), XSTATE_TOL)
    }

    pub(crate) fn from_matrix(m: &Mat4, off_x_tol: f64) -> Result<Self> {
        let magnitude = off_x_magnitude(m);
        if magnitude > off_x_tol {
            return Err(Error::NotXShaped { magnitude });
        }
        Self::new(
            [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            m[(0, 3)],
            m[(1, 2)],
        )
    }

    pub fn populations(&self) -> [f64; 4] {
        self.populations
    }

    pub fn rho11(&self) -> f64 {
        self.populations[0]
    }

    pub fn rho22(&self) -> f64 {
        self.populations[1]
    }

    pub fn rho33(&self) -> f64 {
        self.populations[2]
    }

    pub fn rho44(&self) -> f64 {
        self.populations[3]
    }

    pub fn rho14(&self) -> C64 {
        self.rho14
    }

    pub fn rho23(&self) -> C64 {
        self.rho23
    }

    pub fn is_canonical(&self) -> bool {
        let real_nonneg = |z: C64| z.im == 0.0 && z.re >= 0.0;
        real_nonneg(self.rho14) && real_nonneg(self.rho23)
    }

    /// Replaces both coherences by their moduli. Zero coherences stay zero.
    pub fn canonicalize(&self) -> Self {
        Self {
            populations: self.populations,
            rho14: C64::new(self.rho14.norm(), 0.0),
            rho23: C64::new(self.rho23.norm(), 0.0),
        }
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::diagonal(self.populations);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn to_density(&self) -> TwoQubitState {
        TwoQubitState::new(self.to_matrix())
            .expect("X-state invariants imply a valid density matrix")
    }

    pub fn purity(&self) -> f64 {
        self.populations.iter().map(|p| p * p).sum::<f64>()
            + 2.0 * (self.rho14.norm_sqr() + self.rho23.norm_sqr())
    }

    /// Exchanges the roles of the two spins (`rho22 <-> rho33`, `rho23 -> rho32`).
    pub fn swap_subsystems(&self) -> Self {
        let [a, b, c, d] = self.populations;
        Self {
            populations: [a, c, b, d],
            rho14: self.rho14,
            rho23: self.rho23.conj(),
        }
    }

    /// Five-parameter normal form. Requires a canonical state.
    pub fn bloch_params(&self) -> Result<BlochParams> {
        if !self.is_canonical() {
            return Err(Error::NotCanonical);
        }
        let [r11, r22, r33, r44] = self.populations;
        let x14 = self.rho14.re;
        let x23 = self.rho23.re;
        Ok(BlochParams {
            r: r11 + r22 - r33 - r44,
            s: r11 - r22 + r33 - r44,
            c1: 2.0 * (x23 + x14),
            c2: 2.0 * (x23 - x14),
            c3: r11 - r22 - r33 + r44,
        })
    }

    /// Inverse of [`XState::bloch_params`].
    pub fn from_bloch(b: &BlochParams) -> Result<Self> {
        let BlochParams { r, s, c1, c2, c3 } = *b;
        Self::new(
            [
                (1.0 + r + s + c3) / 4.0,
                (1.0 + r - s - c3) / 4.0,
                (1.0 - r + s - c3) / 4.0,
                (1.0 - r - s + c3) / 4.0,
            ],
            C64::new((c1 - c2) / 4.0, 0.0),
            C64::new((c1 + c2) / 4.0, 0.0),
        )
    }
}

/// Largest modulus among the eight entries outside the X pattern.
pub fn off_x_magnitude(m: &Mat4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let on_x = i == j || i + j == 3;
            if !on_x {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Bloch normal form of a canonical X-state:
/// `rho = [1 + r sz(x)1 + s 1(x)sz + c1 sx(x)sx + c2 sy(x)sy + c3 sz(x)sz] / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub r: f64,
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BlochParams {
    pub fn new(r: f64, s: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self { r, s, c1, c2, c3 }
    }

    pub fn to_xstate(&self) -> Result<XState> {
        XState::from_bloch(self)
    }

    /// Parameters of the spin-swapped state.
    pub fn swapped(&self) -> Self {
        Self {
            r: self.s,
            s: self.r,
            ..*self
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.r - other.r,
            self.s - other.s,
            self.c1 - other.c1,
            self.c2 - other.c2,
            self.c3 - other.c3,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// `+1` for the symmetric combination, `-1` for the antisymmetric one.
    pub fn sign(self) -> f64 {
        match self {
            BellState::PhiPlus | BellState::PsiPlus => 1.0,
            BellState::PhiMinus | BellState::PsiMinus => -1.0,
        }
    }

    /// Φ states live in the `{|++>, |-->}` block, Ψ states in `{|+->, |-+>}`.
    pub fn in_outer_block(self) -> bool {
        matches!(self, BellState::PhiPlus | BellState::PhiMinus)
    }

    pub fn xstate(self) -> XState {
        let half = C64::new(0.5 * self.sign(), 0.0);
        if self.in_outer_block() {
            XState::from_parts_unchecked([0.5, 0.0, 0.0, 0.5], half, ZERO)
        } else {
            XState::from_parts_unchecked([0.0, 0.5, 0.5, 0.0], ZERO, half)
        }
    }

    pub fn density(self) -> TwoQubitState {
        self.xstate().to_density()
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

/// Bell-state projector `|B><B|`.
pub fn bell_state(kind: BellState) -> TwoQubitState {
    kind.density()
}

/// Which two Bell states are mixed; the first one carries weight `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixtureKind {
    PhiPlusPsiPlus,
    PhiPlusPsiMinus,
    PhiMinusPsiPlus,
    PhiMinusPsiMinus,
    PhiPlusPhiMinus,
    PsiPlusPsiMinus,
}

impl MixtureKind {
    pub const ALL: [MixtureKind; 6] = [
        MixtureKind::PhiPlusPsiPlus,
        MixtureKind::PhiPlusPsiMinus,
        MixtureKind::PhiMinusPsiPlus,
        MixtureKind::PhiMinusPsiMinus,
        MixtureKind::PhiPlusPhiMinus,
        MixtureKind::PsiPlusPsiMinus,
    ];

    pub fn components(self) -> (BellState, BellState) {
        use BellState::*;
        match self {
            MixtureKind::PhiPlusPsiPlus => (PhiPlus, PsiPlus),
            MixtureKind::PhiPlusPsiMinus => (PhiPlus, PsiMinus),
            MixtureKind::PhiMinusPsiPlus => (PhiMinus, PsiPlus),
            MixtureKind::PhiMinusPsiMinus => (PhiMinus, PsiMinus),
            MixtureKind::PhiPlusPhiMinus => (PhiPlus, PhiMinus),
            MixtureKind::PsiPlusPsiMinus => (PsiPlus, PsiMinus),
        }
    }

    /// Short identifier used on the command line and in CSV output.
    pub fn id(self) -> &'static str {
        match self {
            MixtureKind::PhiPlusPsiPlus => "phi+psi+",
            MixtureKind::PhiPlusPsiMinus => "phi+psi-",
            MixtureKind::PhiMinusPsiPlus => "phi-psi+",
            MixtureKind::PhiMinusPsiMinus => "phi-psi-",
            MixtureKind::PhiPlusPhiMinus => "phi+phi-",
            MixtureKind::PsiPlusPsiMinus => "psi+psi-",
        }
    }
}

impl fmt::Display for MixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MixtureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MixtureKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| {
                let known: Vec<_> = MixtureKind::ALL.iter().map(|k| k.id()).collect();
                format!(
                    "unknown mixture '{s}' (expected one of {})",
                    known.join(", ")
                )
            })
    }
}

/// `p |B1><B1| + (1 - p) |B2><B2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellMixture {
    pub kind: MixtureKind,
    pub p: f64,
}

impl BellMixture {
    pub fn new(kind: MixtureKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                what: "mixing parameter p",
                value: p,
                expected: "[0, 1]",
            });
        }
        Ok(Self { kind, p })
    }

    /// Weighted components `[(B1, p), (B2, 1 - p)]`.
    pub fn weighted_components(&self) -> [(BellState, f64); 2] {
        let (first, second) = self.kind.components();
        [(first, self.p), (second, 1.0 - self.p)]
    }
}

pub fn bell_mixture(spec: &BellMixture) -> Result<XState> {
    // Re-check in case the fields were set directly.
    let spec = BellMixture::new(spec.kind, spec.p)?;
    let mut populations = [0.0; 4];
    let mut rho14 = ZERO;
    let mut rho23 = ZERO;
    for (bell, w) in spec.weighted_components() {
        let x = bell.xstate();
        for (acc, v) in populations.iter_mut().zip(x.populations) {
            *acc += w * v;
        }
        rho14 += x.rho14 * w;
        rho23 += x.rho23 * w;
    }
    XState::new(populations, rho14, rho23)
}

/// Random X-state: Dirichlet(1,1,1,1) populations, coherence moduli uniform up to
/// the positivity bound, uniform phases.
pub fn random_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let populations = random_simplex(rng);
    let [r11, r22, r33, r44] = populations;
    let m14 = rng.random::<f64>() * (r11 * r44).sqrt();
    let m23 = rng.random::<f64>() * (r22 * r33).sqrt();
    let tau = std::f64::consts::TAU;
    let rho14 = C64::from_polar(m14, tau * rng.random::<f64>());
    let rho23 = C64::from_polar(m23, tau * rng.random::<f64>());
    XState::new(populations, rho14, rho23).expect("sampled inside the positivity bounds")
}

/// Random canonical X-state (same distribution as [`random_xstate`], phases dropped).
pub fn random_canonical_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    random_xstate(rng).canonicalize()
}

/// Random diagonal X-state with Dirichlet(1,1,1,1) populations.
pub fn random_diagonal_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    XState::diagonal(random_simplex(rng)).expect("simplex point")
}

fn random_simplex<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    // Normalized exponentials are uniform on the simplex.
    let draws: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = draws.iter().sum();
    let mut p = draws.map(|d| d / total);
    // Put the rounding residue on the largest entry so the trace is 1 to the last bit.
    let residue = 1.0 - p.iter().sum::<f64>();
    let largest = (0..4).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap();
    p[largest] += residue;
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &BlochParams, b: &BlochParams, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn canonicalize_fixed_point_and_modulus() {
        let x = XState::new(
            [0.4, 0.1, 0.2, 0.3],
            C64::new(0.1, 0.0),
            C64::new(0.05, 0.0),
        )
        .unwrap();
        assert_eq!(x.canonicalize(), x);
        assert!(x.is_canonical());

        let phased = C64::from_polar(0.3, std::f64::consts::FRAC_PI_3);
        let y = XState::new([0.4, 0.1, 0.2, 0.3], phased, ZERO).unwrap();
        assert!(!y.is_canonical());
        let c = y.canonicalize();
        assert!((c.rho14().re - 0.3).abs() < 1e-15);
        assert_eq!(c.rho14().im, 0.0);
        assert_eq!(c.rho23(), ZERO);
        assert_eq!(c.populations(), y.populations());
    }

    #[test]
    fn bloch_params_of_bell_states() {
        let phi = BellState::PhiPlus.xstate().bloch_params().unwrap();
        assert!(close(
            &phi,
            &BlochParams::new(0.0, 0.0, 1.0, -1.0, 1.0),
            0.0
        ));
        let psi = BellState::PsiPlus.xstate().bloch_params().unwrap();
        assert!(close(
            &psi,
            &BlochParams::new(0.0, 0.0, 1.0, 1.0, -1.0),
            0.0
        ));
    }

    #[test]
    fn bloch_params_of_first_mixture() {
        let x = bell_mixture(&BellMixture::new(MixtureKind::PhiPlusPsiPlus, 0.8).unwrap()).unwrap();
        let b = x.bloch_params().unwrap();
        assert!(close(
            &b,
            &BlochParams::new(0.0, 0.0, 1.0, -0.6, 0.6),
            1e-15
        ));
    }

    #[test]
    fn bloch_params_rejects_phased_state() {
        let x = BellState::PhiMinus.xstate();
        assert_eq!(x.bloch_params(), Err(Error::NotCanonical));
    }

    #[test]
    fn from_bloch_examples() {
        let mixed = XState::from_bloch(&BlochParams::new(0.0, 0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(mixed, XState::maximally_mixed());
        let phi = XState::from_bloch(&BlochParams::new(0.0, 0.0, 1.0, -1.0, 1.0)).unwrap();
        assert_eq!(phi, BellState::PhiPlus.xstate());
        assert!(matches!(
            XState::from_bloch(&BlochParams::new(0.0, 0.0, 1.0, 1.0, 1.0)),
            Err(Error::InvalidXState(_))
        ));
    }

    #[test]
    fn bell_matrices() {
        let phi = bell_state(BellState::PhiPlus).into_matrix();
        let expected = Mat4::from_real([
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ]);
        assert_eq!(phi, expected);
        let psi = bell_state(BellState::PsiMinus).into_matrix();
        let expected = Mat4::from_real([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, -0.5, 0.0],
            [0.0, -0.5, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(psi, expected);
        for b in BellState::ALL {
            assert!((bell_state(b).purity() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mixture_examples() {
        let x = bell_mixture(&BellMixture::new(MixtureKind::PhiPlusPsiPlus, 0.3).unwrap()).unwrap();
        let want = [0.15, 0.35, 0.35, 0.15];
        for (got, want) in x.populations().iter().zip(want) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((x.rho14() - C64::new(0.15, 0.0)).norm() < 1e-15);
        assert!((x.rho23() - C64::new(0.35, 0.0)).norm() < 1e-15);

        let end =
            bell_mixture(&BellMixture::new(MixtureKind::PhiPlusPsiPlus, 1.0).unwrap()).unwrap();
        assert_eq!(end, BellState::PhiPlus.xstate());

        let half =
            bell_mixture(&BellMixture::new(MixtureKind::PhiPlusPhiMinus, 0.5).unwrap()).unwrap();
        assert_eq!(half.populations(), [0.5, 0.0, 0.0, 0.5]);
        assert_eq!(half.rho14(), ZERO);
    }

    #[test]
    fn mixture_domain_error() {
        assert!(matches!(
            BellMixture::new(MixtureKind::PsiPlusPsiMinus, 1.5),
            Err(Error::Domain { .. })
        ));
        let bad = BellMixture {
            kind: MixtureKind::PsiPlusPsiMinus,
            p: -0.1,
        };
        assert!(bell_mixture(&bad).is_err());
    }

    #[test]
    fn every_mixture_on_grid_is_valid() {
        for kind in MixtureKind::ALL {
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                let x = bell_mixture(&BellMixture::new(kind, p).unwrap()).unwrap();
                assert!(XState::new(x.populations(), x.rho14(), x.rho23()).is_ok());
            }
        }
    }

    #[test]
    fn mixture_ids_round_trip() {
        for kind in MixtureKind::ALL {
            assert_eq!(kind.id().parse::<MixtureKind>().unwrap(), kind);
        }
        assert!("phi+phi+".parse::<MixtureKind>().is_err());
    }

    #[test]
    fn xstate_rejects_invalid_entries() {
        assert!(XState::new([0.5, 0.5, 0.0, 0.1], ZERO, ZERO).is_err());
        assert!(XState::new([0.25; 4], C64::new(0.3, 0.0), ZERO).is_err());
        assert!(XState::new([0.5, 0.0, 0.0, 0.5], ZERO, C64::new(0.0, 1e-3)).is_err());
        assert!(XState::new([1.1, -0.1, 0.0, 0.0], ZERO, ZERO).is_err());
    }

    #[test]
    fn from_density_requires_x_shape() {
        let mut m = XState::maximally_mixed().to_matrix();
        m[(0, 1)] = C64::new(0.01, 0.0);
        m[(1, 0)] = C64::new(0.01, 0.0);
        let rho = TwoQubitState::new(m).unwrap();
        assert!(matches!(
            XState::from_density(&rho),
            Err(Error::NotXShaped { .. })
        ));
        let x = BellState::PsiMinus.xstate();
        assert_eq!(XState::from_density(&x.to_density()).unwrap(), x);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = random_xstate(&mut rng);
            assert!(XState::new(x.populations(), x.rho14(), x.rho23()).is_ok());
            let d = random_diagonal_xstate(&mut rng);
            assert_eq!(d.rho14(), ZERO);
        }
    }

    #[test]
    fn swap_exchanges_bloch_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_canonical_xstate(&mut rng);
        let b = x.bloch_params().unwrap();
        let swapped = x.swap_subsystems().bloch_params().unwrap();
        assert!(close(&swapped, &b.swapped(), 1e-15));
    }
}
