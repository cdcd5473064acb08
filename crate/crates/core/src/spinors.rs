//! On-shell momenta, helicity 2-spinors and Dirac 4-spinors in the
//! standard, helicity and chiral-helicity spin bases.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::algebra::{paulis, GammaSet};
use crate::{c, max_abs, CheckResult, Error, Matrix2, Matrix4, Result, Vector2, Vector4, C64};

/// On-shell four-momentum in spherical form with its Cartesian and
/// light-cone components precomputed.
///
/// `phi` is normally in [0, 2π). [`FourMomentum::inverted`] produces
/// azimuths in [π, 3π): the half-angle phases of the helicity spinors make
/// the branch observable, so the azimuth is kept as a label and never
/// reduced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub m: f64,
    pub e: f64,
    pub pmag: f64,
    pub theta: f64,
    pub phi: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

/// Validating constructor for [`FourMomentum`].
pub fn momentum(m: f64, pmag: f64, theta: f64, phi: f64) -> Result<FourMomentum> {
    FourMomentum::new(m, pmag, theta, phi)
}

impl FourMomentum {
    pub fn new(m: f64, pmag: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::NonPositiveMass(m));
        }
        if !(pmag >= 0.0 && pmag.is_finite()) {
            return Err(Error::NegativeMomentum(pmag));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::AngleOutOfRange {
                name: "theta",
                value: theta,
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::AngleOutOfRange {
                name: "phi",
                value: phi,
            });
        }
        Ok(Self::from_angles(m, pmag, theta, phi))
    }

    /// Momentum from Cartesian components; angles are the canonical ones
    /// (θ = 0, φ = 0 for the zero vector).
    pub fn from_cartesian(m: f64, p: [f64; 3]) -> Result<Self> {
        let pmag = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let (theta, phi) = if pmag == 0.0 {
            (0.0, 0.0)
        } else {
            let theta = (p[2] / pmag).clamp(-1.0, 1.0).acos();
            let phi = p[1].atan2(p[0]).rem_euclid(TAU);
            // rem_euclid can round up to exactly TAU
            (theta, if phi >= TAU { 0.0 } else { phi })
        };
        Self::new(m, pmag, theta, phi)
    }

    fn from_angles(m: f64, pmag: f64, theta: f64, phi: f64) -> Self {
        let e = pmag.hypot(m);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            m,
            e,
            pmag,
            theta,
            phi,
            px: pmag * st * cp,
            py: pmag * st * sp,
            pz: pmag * ct,
        }
    }

    /// Spatial inversion p → −p as the angle map (θ, φ) → (π − θ, π + φ).
    pub fn inverted(&self) -> Self {
        Self::from_angles(self.m, self.pmag, PI - self.theta, PI + self.phi)
    }

    pub fn cartesian(&self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }

    /// Unit vector p̂ built from the angles, so it is defined at rest too.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn p_plus(&self) -> f64 {
        self.e + self.pz
    }

    pub fn p_minus(&self) -> f64 {
        self.e - self.pz
    }

    pub fn p_r(&self) -> C64 {
        c(self.px, self.py)
    }

    pub fn p_l(&self) -> C64 {
        c(self.px, -self.py)
    }

    /// E − |p|, evaluated as m²/(E + |p|) to avoid cancellation.
    pub fn e_minus_p(&self) -> f64 {
        self.m * self.m / (self.e + self.pmag)
    }

    /// p⁺p⁻ − p_r p_l − m², zero on shell.
    pub fn shell_residual(&self) -> f64 {
        let lhs = c(self.p_plus() * self.p_minus(), 0.0) - self.p_r() * self.p_l();
        (lhs - c(self.m * self.m, 0.0)).norm()
    }

    /// p̸ in the given representation.
    pub fn slash(&self, g: &GammaSet) -> Matrix4 {
        g.slash(self.e, self.cartesian())
    }
}

/// Spin projection ±1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn value(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    /// (−1)^{1/2 + λ}: −1 for ↑, +1 for ↓.
    pub fn sign_half_plus(self) -> f64 {
        match self {
            Spin::Up => -1.0,
            Spin::Down => 1.0,
        }
    }

    pub fn arrow(self) -> &'static str {
        match self {
            Spin::Up => "↑",
            Spin::Down => "↓",
        }
    }
}

/// Which quantum number the spin label refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// Σ₃ projection (standard basis).
    Sigma,
    /// Helicity.
    Lambda,
    /// Chiral helicity.
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinLabel {
    pub spin: Spin,
    pub flavor: Flavor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Standard,
    Helicity,
    ChiralHelicity,
}

impl Basis {
    pub fn flavor(self) -> Flavor {
        match self {
            Basis::Standard => Flavor::Sigma,
            Basis::Helicity => Flavor::Lambda,
            Basis::ChiralHelicity => Flavor::Eta,
        }
    }
}

/// Positive (u) or negative (v) energy solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    U,
    V,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::U, Kind::V];

    pub fn other(self) -> Self {
        match self {
            Kind::U => Kind::V,
            Kind::V => Kind::U,
        }
    }

    /// ψ̄ψ for the unit normalization: +1 for u, −1 for v.
    pub fn bar_sign(self) -> f64 {
        match self {
            Kind::U => 1.0,
            Kind::V => -1.0,
        }
    }
}

/// ψ̄ψ = ±1 (default) or ±m; the latter stays finite as m → 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    #[default]
    Unit,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinor {
    pub components: Vector2,
    pub label: SpinLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourSpinor {
    pub components: Vector4,
    pub basis: Basis,
    pub kind: Kind,
    pub label: SpinLabel,
    pub momentum: FourMomentum,
}

impl FourSpinor {
    pub fn upper(&self) -> Vector2 {
        Vector2::new(self.components[0], self.components[1])
    }

    pub fn lower(&self) -> Vector2 {
        Vector2::new(self.components[2], self.components[3])
    }

    pub fn spin(&self) -> Spin {
        self.label.spin
    }
}

fn stack(upper: Vector2, lower: Vector2) -> Vector4 {
    Vector4::new(upper[0], upper[1], lower[0], lower[1])
}

/// σ·p̂/2 = ½((cosθ, sinθ e^{−iφ}), (sinθ e^{iφ}, −cosθ)).
pub fn helicity_matrix(theta: f64, phi: f64) -> Matrix2 {
    let (st, ct) = theta.sin_cos();
    let eip = C64::from_polar(1.0, phi);
    Matrix2::new(c(ct, 0.0), eip.conj() * st, eip * st, c(-ct, 0.0)) * c(0.5, 0.0)
}

/// Helicity eigenspinor φ↑ or φ↓ at direction (θ, φ).
///
/// Any finite angles are accepted: inverted momenta carry azimuths beyond
/// 2π and the sign of e^{±iφ/2} must follow them.
pub fn helicity_two_spinor(theta: f64, phi: f64, lam: Spin) -> TwoSpinor {
    let (sh, ch) = (theta / 2.0).sin_cos();
    let em = C64::from_polar(1.0, -phi / 2.0);
    let ep = C64::from_polar(1.0, phi / 2.0);
    let components = match lam {
        Spin::Up => Vector2::new(em * ch, ep * sh),
        Spin::Down => Vector2::new(em * sh, -ep * ch),
    };
    TwoSpinor {
        components,
        label: SpinLabel {
            spin: lam,
            flavor: Flavor::Lambda,
        },
    }
}

fn phi2(p: &FourMomentum, lam: Spin) -> Vector2 {
    helicity_two_spinor(p.theta, p.phi, lam).components
}

/// Boosted 4-spinor of the standard (Σ₃ eigenstate) basis, unit
/// normalization.
pub fn standard_four_spinor(p: &FourMomentum, sigma: Spin, kind: Kind) -> FourSpinor {
    standard_four_spinor_with(p, sigma, kind, Normalization::Unit)
}

pub fn standard_four_spinor_with(
    p: &FourMomentum,
    sigma: Spin,
    kind: Kind,
    norm: Normalization,
) -> FourSpinor {
    let m = p.m;
    // N = 1/√2 makes ūu = 1
    let n = match norm {
        Normalization::Unit => FRAC_1_SQRT_2 / (2.0 * m * (p.e + m)).sqrt(),
        Normalization::Mass => FRAC_1_SQRT_2 / (2.0 * (p.e + m)).sqrt(),
    };
    let pp = c(p.p_plus() + m, 0.0);
    let pm = c(p.p_minus() + m, 0.0);
    let (pr, pl) = (p.p_r(), p.p_l());
    let comps = match (kind, sigma) {
        (Kind::U, Spin::Up) => Vector4::new(pp, pr, pm, -pr),
        (Kind::U, Spin::Down) => Vector4::new(pl, pm, -pl, pp),
        (Kind::V, Spin::Up) => Vector4::new(pp, pr, -pm, pr),
        (Kind::V, Spin::Down) => Vector4::new(pl, pm, pl, -pp),
    };
    FourSpinor {
        components: comps * c(n, 0.0),
        basis: Basis::Standard,
        kind,
        label: SpinLabel {
            spin: sigma,
            flavor: Flavor::Sigma,
        },
        momentum: *p,
    }
}

/// Helicity-basis 4-spinor, unit normalization.
pub fn helicity_four_spinor(p: &FourMomentum, lam: Spin, kind: Kind) -> FourSpinor {
    helicity_four_spinor_with(p, lam, kind, Normalization::Unit)
}

pub fn helicity_four_spinor_with(
    p: &FourMomentum,
    lam: Spin,
    kind: Kind,
    norm: Normalization,
) -> FourSpinor {
    let root = (p.e + p.pmag).sqrt();
    // big = √((E+p)/m), small = √(m/(E+p)), times √m in mass mode
    let (big, small) = match norm {
        Normalization::Unit => (root / p.m.sqrt(), p.m.sqrt() / root),
        Normalization::Mass => (root, p.m / root),
    };
    let phi = phi2(p, lam);
    let (top, bottom) = match lam {
        Spin::Up => (big, small),
        Spin::Down => (small, big),
    };
    let sign = match kind {
        Kind::U => 1.0,
        Kind::V => -1.0,
    };
    let upper = phi * c(top * FRAC_1_SQRT_2, 0.0);
    let lower = phi * c(sign * bottom * FRAC_1_SQRT_2, 0.0);
    FourSpinor {
        components: stack(upper, lower),
        basis: Basis::Helicity,
        kind,
        label: SpinLabel {
            spin: lam,
            flavor: Flavor::Lambda,
        },
        momentum: *p,
    }
}

/// Chiral-helicity 4-spinor 𝒰_η or 𝒱_η.
///
/// 𝒰↑ = (Nφ↑, N⁻¹φ↓)/√2 with N = √((E+p)/m); its partner carries the
/// factor (E−p)/m, 𝒰↓ = ((E−p)/m)(N⁻¹φ↓, Nφ↑)/√2, which is what the coupled
/// equations p̸𝒰↑ = m𝒰↓, p̸𝒰↓ = m𝒰↑ require. 𝒱_η = γ⁵𝒰_η.
pub fn chiral_helicity_spinor(p: &FourMomentum, eta: Spin, kind: Kind) -> FourSpinor {
    let n = ((p.e + p.pmag) / p.m).sqrt();
    let (scale, top, bottom) = match eta {
        Spin::Up => (1.0, n, 1.0 / n),
        Spin::Down => (p.e_minus_p() / p.m, 1.0 / n, n),
    };
    let sign = match kind {
        Kind::U => 1.0,
        Kind::V => -1.0,
    };
    let s = scale * FRAC_1_SQRT_2;
    let upper = phi2(p, eta) * c(s * top, 0.0);
    let lower = phi2(p, eta.flip()) * c(sign * s * bottom, 0.0);
    FourSpinor {
        components: stack(upper, lower),
        basis: Basis::ChiralHelicity,
        kind,
        label: SpinLabel {
            spin: eta,
            flavor: Flavor::Eta,
        },
        momentum: *p,
    }
}

/// Builds the spinor of `basis` for the given labels (unit normalization).
pub fn four_spinor(basis: Basis, p: &FourMomentum, spin: Spin, kind: Kind) -> FourSpinor {
    match basis {
        Basis::Standard => standard_four_spinor(p, spin, kind),
        Basis::Helicity => helicity_four_spinor(p, spin, kind),
        Basis::ChiralHelicity => chiral_helicity_spinor(p, spin, kind),
    }
}

/// ‖(p̸ ∓ m)ψ‖₂ (− for u, + for v), at the spinor's own momentum.
///
/// Chiral-helicity spinors obey a coupled pair of equations rather than the
/// Dirac equation; use [`raw_dirac_residual`] to evaluate them anyway.
pub fn dirac_residual(psi: &FourSpinor, g: &GammaSet) -> Result<f64> {
    if psi.basis == Basis::ChiralHelicity {
        return Err(Error::BasisMismatch("chiral-helicity"));
    }
    Ok(raw_dirac_residual(psi, g))
}

pub fn raw_dirac_residual(psi: &FourSpinor, g: &GammaSet) -> f64 {
    let p = &psi.momentum;
    let m = c(p.m * -psi.kind.bar_sign(), 0.0);
    let r = p.slash(g) * psi.components + psi.components * m;
    r.norm()
}

/// Residuals of the coupled chiral-helicity equations
/// p̸𝒰↑ − m𝒰↓, p̸𝒰↓ − m𝒰↑, p̸𝒱↑ + m𝒱↓, p̸𝒱↓ + m𝒱↑ (in that order).
pub fn chiral_coupled_residuals(p: &FourMomentum, g: &GammaSet) -> [f64; 4] {
    let ps = p.slash(g);
    let m = c(p.m, 0.0);
    let sp = |eta, kind| chiral_helicity_spinor(p, eta, kind).components;
    let (uu, ud) = (sp(Spin::Up, Kind::U), sp(Spin::Down, Kind::U));
    let (vu, vd) = (sp(Spin::Up, Kind::V), sp(Spin::Down, Kind::V));
    [
        (ps * uu - ud * m).norm(),
        (ps * ud - uu * m).norm(),
        (ps * vu + vd * m).norm(),
        (ps * vd + vu * m).norm(),
    ]
}

/// The four spinors u↑, u↓, v↑, v↓ of a basis at momentum p.
pub fn basis_set(basis: Basis, p: &FourMomentum) -> [FourSpinor; 4] {
    [
        four_spinor(basis, p, Spin::Up, Kind::U),
        four_spinor(basis, p, Spin::Down, Kind::U),
        four_spinor(basis, p, Spin::Up, Kind::V),
        four_spinor(basis, p, Spin::Down, Kind::V),
    ]
}

/// Max deviation of ψ̄_iψ_j from diag(1, 1, −1, −1) over the basis set.
pub fn orthonormality_residual(basis: Basis, p: &FourMomentum, g: &GammaSet) -> f64 {
    let set = basis_set(basis, p);
    let mut worst: f64 = 0.0;
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate() {
            let expect = if i == j { a.kind.bar_sign() } else { 0.0 };
            let got = g.bar(&a.components, &b.components);
            worst = worst.max((got - c(expect, 0.0)).norm());
        }
    }
    worst
}

/// diag(σ·p̂, σ·p̂)/2, the helicity operator on 4-spinors.
pub fn helicity_operator4(p: &FourMomentum) -> Matrix4 {
    let h = helicity_matrix(p.theta, p.phi);
    let z = Matrix2::zeros();
    crate::algebra::block(&h, &z, &z, &h)
}

/// ‖(Σ·p̂/2)ψ − λψ‖ for a helicity-basis spinor.
pub fn helicity_eigen_residual(psi: &FourSpinor) -> f64 {
    let op = helicity_operator4(&psi.momentum);
    let lam = c(psi.spin().value(), 0.0);
    (op * psi.components - psi.components * lam).norm()
}

/// det of the matrix whose columns are u↑, u↓, v↑, v↓.
pub fn gram_determinant(basis: Basis, p: &FourMomentum) -> C64 {
    let set = basis_set(basis, p);
    Matrix4::from_columns(&set.map(|s| s.components)).determinant()
}

/// Checks the first-order two-spinor chain behind the helicity spinors,
///
/// (E − σ·p)φ = (E ∓ p)φ = mχ,  (E + σ·p)χ = (E ± p)χ = mφ,
///
/// with χ read off the lower block of u_λ, plus the second-order form
/// (E + σ·p)(E − σ·p)φ = m²φ.
pub fn two_spinor_chain_check(p: &FourMomentum, lam: Spin, tol: f64) -> Result<CheckResult> {
    crate::algebra::check_tol(tol)?;
    let u = helicity_four_spinor(p, lam, Kind::U);
    let phi = phi2(p, lam);
    let upper = u.upper();
    // u = N(φ, χ) with real positive N
    let n = upper.norm();
    let chi = u.lower() / c(n, 0.0);
    let sp = sigma_dot(p.cartesian());
    let id = Matrix2::identity();
    let e = c(p.e, 0.0);
    let m = c(p.m, 0.0);
    let (minus_eig, plus_eig) = match lam {
        Spin::Up => (p.e_minus_p(), p.e + p.pmag),
        Spin::Down => (p.e + p.pmag, p.e_minus_p()),
    };
    let lo = id * e - sp;
    let hi = id * e + sp;
    let residuals = [
        (lo * phi - phi * c(minus_eig, 0.0)).norm(),
        (phi * c(minus_eig, 0.0) - chi * m).norm(),
        (hi * chi - chi * c(plus_eig, 0.0)).norm(),
        (chi * c(plus_eig, 0.0) - phi * m).norm(),
        (hi * lo * phi - phi * (m * m)).norm(),
        // φ itself must match the upper block direction
        (upper / c(n, 0.0) - phi).norm(),
    ];
    Ok(CheckResult::within(
        residuals.into_iter().fold(0.0, f64::max),
        tol,
    ))
}

/// σ·v for a real 3-vector.
pub fn sigma_dot(v: [f64; 3]) -> Matrix2 {
    let s = paulis();
    s[0] * c(v[0], 0.0) + s[1] * c(v[1], 0.0) + s[2] * c(v[2], 0.0)
}

/// Σ_i = diag(σ_i, σ_i).
pub fn big_sigma(i: usize) -> Matrix4 {
    let s = paulis()[i - 1];
    let z = Matrix2::zeros();
    crate::algebra::block(&s, &z, &z, &s)
}

/// Momentum-space Dirac Hamiltonian H(p) = γ⁰γ·p + γ⁰m.
pub fn dirac_hamiltonian(p: &FourMomentum, g: &GammaSet) -> Matrix4 {
    let pv = p.cartesian();
    let mut gp = Matrix4::zeros();
    for (gk, pk) in g.gamma[1..].iter().zip(pv) {
        gp += gk * c(pk, 0.0);
    }
    g.gamma[0] * gp + g.gamma[0] * c(p.m, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Commutators {
    /// [H(p), Σ₃/2]
    pub comm_s3: Matrix4,
    /// [H(p), Σ·p̂/2]
    pub comm_hel: Matrix4,
}

pub fn commutator_hamiltonian(p: &FourMomentum, g: &GammaSet) -> Commutators {
    let h = dirac_hamiltonian(p, g);
    let s3 = big_sigma(3) * c(0.5, 0.0);
    let hel = helicity_operator4(p);
    Commutators {
        comm_s3: h * s3 - s3 * h,
        comm_hel: h * hel - hel * h,
    }
}

/// Max-entry norm of a 4×4 matrix.
pub fn norm4(m: &Matrix4) -> f64 {
    max_abs(m.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g() -> GammaSet {
        GammaSet::spinorial()
    }

    fn vclose(a: &Vector4, b: &Vector4, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn rest_frame_momentum() {
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(p.e, 1.0);
        assert_eq!(p.p_plus(), 1.0);
        assert_eq!(p.p_minus(), 1.0);
        assert_eq!(p.p_r(), c(0.0, 0.0));
        assert_eq!(p.p_l(), c(0.0, 0.0));
    }

    #[test]
    fn boosted_along_z() {
        let p = momentum(1.0, 1.0, 0.0, 0.0).unwrap();
        let r2 = 2f64.sqrt();
        assert!((p.e - r2).abs() < 1e-15);
        assert!((p.p_plus() - (r2 + 1.0)).abs() < 1e-15);
        assert!((p.p_minus() - (r2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn momentum_validation() {
        assert_eq!(
            momentum(0.0, 1.0, 0.0, 0.0),
            Err(Error::NonPositiveMass(0.0))
        );
        assert!(matches!(
            momentum(-1.0, 1.0, 0.0, 0.0),
            Err(Error::NonPositiveMass(_))
        ));
        assert!(matches!(
            momentum(1.0, -1.0, 0.0, 0.0),
            Err(Error::NegativeMomentum(_))
        ));
        assert!(matches!(
            momentum(1.0, 1.0, 4.0, 0.0),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            momentum(1.0, 1.0, 0.0, TAU),
            Err(Error::AngleOutOfRange { .. })
        ));
    }

    #[test]
    fn from_cartesian_roundtrip() {
        let p = FourMomentum::from_cartesian(1.0, [0.3, -0.4, 1.2]).unwrap();
        assert!((p.px - 0.3).abs() < 1e-15);
        assert!((p.py + 0.4).abs() < 1e-15);
        assert!((p.pz - 1.2).abs() < 1e-15);
        assert!((0.0..TAU).contains(&p.phi));
    }

    #[test]
    fn inversion_negates_cartesian() {
        let p = momentum(1.0, 2.0, 0.7, 5.9).unwrap();
        let q = p.inverted();
        for (a, b) in p.cartesian().iter().zip(q.cartesian()) {
            assert!((a + b).abs() < 1e-14);
        }
        assert!(q.phi > TAU, "azimuth must stay unreduced");
    }

    #[test]
    fn two_spinor_axis_values() {
        let up = helicity_two_spinor(0.0, 0.0, Spin::Up).components;
        assert!((up - Vector2::new(c(1.0, 0.0), c(0.0, 0.0))).norm() < 1e-15);
        let up_pi = helicity_two_spinor(PI, 0.0, Spin::Up).components;
        assert!((up_pi - Vector2::new(c(0.0, 0.0), c(1.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn helicity_matrix_on_axis() {
        let h = helicity_matrix(0.0, 0.0);
        let expect = Matrix2::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0));
        assert!(max_abs((h - expect).iter()) < 1e-16);
    }

    #[test]
    fn standard_rest_spinor() {
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        let u = standard_four_spinor(&p, Spin::Up, Kind::U);
        let s = FRAC_1_SQRT_2;
        let expect = Vector4::new(c(s, 0.0), c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0));
        assert!(vclose(&u.components, &expect, 1e-15));
    }

    #[test]
    fn standard_rest_parity_eigenstates() {
        let p = momentum(2.0, 0.0, 0.0, 0.0).unwrap();
        let g = g();
        for s in Spin::BOTH {
            let u = standard_four_spinor(&p, s, Kind::U).components;
            let v = standard_four_spinor(&p, s, Kind::V).components;
            assert!(vclose(&(g.parity * u), &u, 1e-15));
            assert!(vclose(&(g.parity * v), &(-v), 1e-15));
        }
    }

    #[test]
    fn helicity_rest_spinor() {
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        let u = helicity_four_spinor(&p, Spin::Up, Kind::U);
        let s = FRAC_1_SQRT_2;
        let expect = Vector4::new(c(s, 0.0), c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0));
        assert!(vclose(&u.components, &expect, 1e-15));
    }

    #[test]
    fn chiral_rest_spinor() {
        let p = momentum(1.0, 0.0, 0.9, 2.1).unwrap();
        let u = chiral_helicity_spinor(&p, Spin::Up, Kind::U);
        let expect = stack(phi2(&p, Spin::Up), phi2(&p, Spin::Down)) * c(FRAC_1_SQRT_2, 0.0);
        assert!(vclose(&u.components, &expect, 1e-15));
        let d = chiral_helicity_spinor(&p, Spin::Down, Kind::U);
        let expect = stack(phi2(&p, Spin::Down), phi2(&p, Spin::Up)) * c(FRAC_1_SQRT_2, 0.0);
        assert!(vclose(&d.components, &expect, 1e-15));
    }

    #[test]
    fn gamma5_maps_u_to_v() {
        let p = momentum(1.3, 0.7, 1.1, 2.3).unwrap();
        let g = g();
        for lam in Spin::BOTH {
            let u = helicity_four_spinor(&p, lam, Kind::U).components;
            let v = helicity_four_spinor(&p, lam, Kind::V).components;
            assert!(vclose(&(g.gamma5 * u), &v, 1e-15));
            // upper block unchanged, lower block flipped
            assert_eq!(v[0], u[0]);
            assert_eq!(v[3], -u[3]);
        }
    }

    #[test]
    fn chiral_spinor_alone_violates_dirac() {
        let g = g();
        let p = momentum(1.0, 2.0, 0.4, 1.0).unwrap();
        let uu = chiral_helicity_spinor(&p, Spin::Up, Kind::U);
        assert_eq!(
            dirac_residual(&uu, &g),
            Err(Error::BasisMismatch("chiral-helicity"))
        );
        let raw = raw_dirac_residual(&uu, &g);
        let ud = chiral_helicity_spinor(&p, Spin::Down, Kind::U);
        let scale = p.m * (uu.components - ud.components).norm();
        assert!(raw > 0.1);
        assert!((raw - scale).abs() < 1e-12);
    }

    #[test]
    fn two_spinor_chain_at_rest_chi_equals_phi() {
        let p = momentum(1.5, 0.0, 1.0, 1.0).unwrap();
        for lam in Spin::BOTH {
            let u = helicity_four_spinor(&p, lam, Kind::U);
            assert!((u.upper() - u.lower()).norm() < 1e-15);
            assert!(two_spinor_chain_check(&p, lam, 1e-12).unwrap().passed);
        }
    }

    #[test]
    fn commutator_on_axis_vanishes() {
        let g = g();
        for theta in [0.0, PI] {
            let p = momentum(1.0, 3.0, theta, 0.0).unwrap();
            let cm = commutator_hamiltonian(&p, &g);
            assert!(norm4(&cm.comm_s3) < 1e-13);
            assert!(norm4(&cm.comm_hel) < 1e-13);
        }
    }

    #[test]
    fn commutator_off_axis_nonzero() {
        let g = g();
        let p = momentum(1.0, 3.0, 1.0, 0.5).unwrap();
        let cm = commutator_hamiltonian(&p, &g);
        assert!(norm4(&cm.comm_s3) > 1.0);
        assert!(norm4(&cm.comm_hel) < 1e-13);
    }

    #[test]
    fn mass_normalization_finite_in_massless_limit() {
        let p = momentum(1e-12, 5.0, 0.8, 4.0).unwrap();
        for lam in Spin::BOTH {
            for kind in Kind::BOTH {
                let h = helicity_four_spinor_with(&p, lam, kind, Normalization::Mass);
                let s = standard_four_spinor_with(&p, lam, kind, Normalization::Mass);
                for z in h.components.iter().chain(s.components.iter()) {
                    assert!(z.re.is_finite() && z.im.is_finite());
                    assert!(z.norm() <= (2.0 * p.e).sqrt() + 1e-12);
                }
            }
        }
        // ±m normalization: ψ̄ψ = ±m
        let p = momentum(0.8, 1.5, 0.8, 4.0).unwrap();
        let u = helicity_four_spinor_with(&p, Spin::Up, Kind::U, Normalization::Mass).components;
        let v = helicity_four_spinor_with(&p, Spin::Up, Kind::V, Normalization::Mass).components;
        assert!((g().bar(&u, &u) - c(0.8, 0.0)).norm() < 1e-14);
        assert!((g().bar(&v, &v) + c(0.8, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gram_determinant_nonzero() {
        let p = momentum(1.0, 4.0, 2.0, 3.0).unwrap();
        assert!(gram_determinant(Basis::Helicity, &p).norm() > 0.1);
        assert!(gram_determinant(Basis::Standard, &p).norm() > 0.1);
    }

    prop_compose! {
        fn arb_momentum()(m in 0.1f64..5.0, k in 0.0f64..10.0, ct in -1.0f64..1.0, phi in 0.0f64..TAU)
            -> FourMomentum {
            momentum(m, k * m, ct.acos(), phi).unwrap()
        }
    }

    proptest! {
        #[test]
        fn on_shell_identity(p in arb_momentum()) {
            prop_assert!(p.shell_residual() < 1e-12 * p.e * p.e);
            let prl = (p.p_r() * p.p_l()).re;
            prop_assert!((prl - (p.px * p.px + p.py * p.py)).abs() < 1e-12 * p.e * p.e);
        }

        #[test]
        fn helicity_matrix_spectrum(theta in 0.0f64..PI, phi in 0.0f64..TAU) {
            let h = helicity_matrix(theta, phi);
            prop_assert!(max_abs((h - h.adjoint()).iter()) < 1e-15);
            prop_assert!(h.trace().norm() < 1e-15);
            prop_assert!((h.determinant() + c(0.25, 0.0)).norm() < 1e-15);
            for lam in Spin::BOTH {
                let s = helicity_two_spinor(theta, phi, lam).components;
                prop_assert!((h * s - s * c(lam.value(), 0.0)).norm() < 1e-15);
                prop_assert!((s.norm() - 1.0).abs() < 1e-15);
            }
        }

        #[test]
        fn spinors_solve_dirac(p in arb_momentum()) {
            let g = GammaSet::spinorial();
            for basis in [Basis::Standard, Basis::Helicity] {
                for s in basis_set(basis, &p) {
                    let r = dirac_residual(&s, &g).unwrap();
                    prop_assert!(r < 1e-12 * p.e.max(1.0), "{:?} {}", basis, r);
                }
                prop_assert!(orthonormality_residual(basis, &p, &g) < 1e-12);
            }
            let coupled = chiral_coupled_residuals(&p, &g);
            prop_assert!(coupled.iter().all(|r| *r < 1e-12 * p.e.max(1.0)));
        }

        #[test]
        fn helicity_spinors_are_helicity_eigenstates(p in arb_momentum()) {
            for s in basis_set(Basis::Helicity, &p) {
                prop_assert!(helicity_eigen_residual(&s) < 1e-12);
            }
        }
    }
}
