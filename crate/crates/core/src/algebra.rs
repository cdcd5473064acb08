//! Fixed matrices of the spinorial (Weyl) representation.
//!
//! Conventions: metric (+,−,−,−),
//!
//! ```text
//! γ⁰ = ( 0  1 )    γⁱ = (  0  −σᵢ )    γ⁵ = ( 1   0 )
//!      ( 1  0 )         ( σᵢ    0 )         ( 0  −1 )
//! ```
//!
//! so that p̸ = Eγ⁰ − p·γ = ((0, E + σ·p), (E − σ·p, 0)). With this sign the
//! helicity and standard 4-spinors both solve (p̸ − m)u = 0, and γ⁵ maps
//! u_λ onto v_λ.

use crate::{c, max_abs, CheckResult, Error, Matrix2, Matrix4, Result, Vector4, C64};

/// Default absolute tolerance for identity checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Diagonal of the Minkowski metric.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

const ZERO: C64 = c(0.0, 0.0);
const ONE: C64 = c(1.0, 0.0);
const I: C64 = c(0.0, 1.0);

fn pauli_unchecked(i: usize) -> Matrix2 {
    match i {
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => unreachable!(),
    }
}

/// Pauli matrix σ_i for i ∈ {1, 2, 3}.
pub fn pauli(i: usize) -> Result<Matrix2> {
    if (1..=3).contains(&i) {
        Ok(pauli_unchecked(i))
    } else {
        Err(Error::IndexOutOfRange {
            what: "pauli",
            index: i,
        })
    }
}

/// The three Pauli matrices in order.
pub fn paulis() -> [Matrix2; 3] {
    [pauli_unchecked(1), pauli_unchecked(2), pauli_unchecked(3)]
}

/// Assemble a 4×4 matrix from 2×2 blocks ((a, b), (c, d)).
pub fn block(a: &Matrix2, b: &Matrix2, c: &Matrix2, d: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Spinorial-representation gamma matrix for idx ∈ {0, 1, 2, 3, 5}.
pub fn gamma(idx: usize) -> Result<Matrix4> {
    let g = GammaSet::spinorial();
    match idx {
        0..=3 => Ok(g.gamma[idx]),
        5 => Ok(g.gamma5),
        _ => Err(Error::IndexOutOfRange {
            what: "gamma",
            index: idx,
        }),
    }
}

/// Wigner matrix Θ = −iσ₂, with Θφ↑* = −φ↓ and Θφ↓* = +φ↑.
pub fn wigner_theta() -> Matrix2 {
    Matrix2::new(ZERO, -ONE, ONE, ZERO)
}

/// Gamma matrices together with the parity, charge-conjugation and
/// time-reversal matrices built from them.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gamma: [Matrix4; 4],
    pub gamma5: Matrix4,
    /// Matrix part of the parity operation (= γ⁰).
    pub parity: Matrix4,
    /// Matrix part of C = ((0, Θ), (−Θ, 0))·K.
    pub cconj: Matrix4,
    /// T = diag(Θ, Θ).
    pub trev: Matrix4,
    pub theta: Matrix2,
}

impl GammaSet {
    pub fn spinorial() -> Self {
        let z = Matrix2::zeros();
        let id = Matrix2::identity();
        let theta = wigner_theta();
        let g0 = block(&z, &id, &id, &z);
        let [s1, s2, s3] = paulis();
        let gi = |s: &Matrix2| block(&z, &(-s), s, &z);
        Self {
            gamma: [g0, gi(&s1), gi(&s2), gi(&s3)],
            gamma5: block(&id, &z, &z, &(-id)),
            parity: g0,
            cconj: block(&z, &theta, &(-theta), &z),
            trev: block(&theta, &z, &z, &theta),
            theta,
        }
    }

    /// Dirac-Pauli representation. Only used as a deliberately mismatched
    /// convention in negative-control checks; the spinors in this crate are
    /// written for [`GammaSet::spinorial`].
    pub fn dirac_pauli() -> Self {
        let z = Matrix2::zeros();
        let id = Matrix2::identity();
        let theta = wigner_theta();
        let [s1, s2, s3] = paulis();
        let g0 = block(&id, &z, &z, &(-id));
        let gi = |s: &Matrix2| block(&z, s, &(-s), &z);
        Self {
            gamma: [g0, gi(&s1), gi(&s2), gi(&s3)],
            gamma5: block(&z, &id, &id, &z),
            parity: g0,
            cconj: block(&z, &theta, &(-theta), &z),
            trev: block(&theta, &z, &z, &theta),
            theta,
        }
    }

    /// p̸ = E γ⁰ − p·γ.
    pub fn slash(&self, energy: f64, p: [f64; 3]) -> Matrix4 {
        let mut m = self.gamma[0] * c(energy, 0.0);
        for (k, pk) in p.iter().enumerate() {
            m -= self.gamma[k + 1] * c(*pk, 0.0);
        }
        m
    }

    /// Dirac bilinear ψ̄χ = ψ†γ⁰χ.
    pub fn bar(&self, psi: &Vector4, chi: &Vector4) -> C64 {
        psi.dotc(&(self.gamma[0] * chi))
    }

    /// Largest deviation from {γ^μ, γ^ν} = 2g^{μν}𝟙 over all index pairs.
    pub fn clifford_residual(&self) -> f64 {
        let id = Matrix4::identity();
        let mut worst: f64 = 0.0;
        for (mu, (gm, eta)) in self.gamma.iter().zip(METRIC).enumerate() {
            for (nu, gn) in self.gamma.iter().enumerate() {
                let anti = gm * gn + gn * gm;
                let g = if mu == nu { 2.0 * eta } else { 0.0 };
                let diff = anti - id * c(g, 0.0);
                worst = worst.max(max_abs(diff.iter()));
            }
        }
        worst
    }

    /// Largest deviation from (γ⁵)² = 𝟙 and {γ⁵, γ^μ} = 0.
    pub fn gamma5_residual(&self) -> f64 {
        let g5 = &self.gamma5;
        let sq = g5 * g5 - Matrix4::identity();
        let mut worst = max_abs(sq.iter());
        for g in &self.gamma {
            let anti = g5 * g + g * g5;
            worst = worst.max(max_abs(anti.iter()));
        }
        worst
    }

    /// Largest deviation from Θ² = −𝟙 and Θσ_iΘ⁻¹ = −σ_i*.
    pub fn theta_residual(&self) -> f64 {
        let theta = &self.theta;
        let Some(inv) = theta.try_inverse() else {
            return f64::INFINITY;
        };
        let mut worst = max_abs((theta * theta + Matrix2::identity()).iter());
        for s in paulis() {
            let d = theta * s * inv + s.conjugate();
            worst = worst.max(max_abs(d.iter()));
        }
        worst
    }
}

/// P⁻¹γ⁰P = γ⁰ and P⁻¹γⁱP = −γⁱ for the parity matrix P = γ⁰.
pub fn verify_parity_similarity(tol: f64) -> Result<CheckResult> {
    let g = GammaSet::spinorial();
    verify_parity_similarity_for(&g.parity, &g, tol)
}

/// Parity similarity conditions for an arbitrary candidate matrix `p`.
/// The residual is the max-norm over the four conditions.
pub fn verify_parity_similarity_for(p: &Matrix4, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let Some(inv) = p.try_inverse() else {
        return Ok(CheckResult::within(f64::INFINITY, tol));
    };
    let mut worst = max_abs((inv * g.gamma[0] * p - g.gamma[0]).iter());
    for gi in &g.gamma[1..] {
        worst = worst.max(max_abs((inv * gi * p + gi).iter()));
    }
    Ok(CheckResult::within(worst, tol))
}

/// T⁻¹γ_μᵀT = γ_μ for all μ, and Tᵀ = −T, with T = diag(Θ, Θ).
pub fn verify_t_properties(tol: f64) -> Result<CheckResult> {
    let g = GammaSet::spinorial();
    verify_t_properties_for(&g.trev, &g, tol)
}

pub fn verify_t_properties_for(t: &Matrix4, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let Some(inv) = t.try_inverse() else {
        return Ok(CheckResult::within(f64::INFINITY, tol));
    };
    // lowering the index only flips the sign of the spatial matrices, which
    // drops out of T⁻¹γ_iᵀT = γ_i
    let mut worst: f64 = 0.0;
    for gm in &g.gamma {
        worst = worst.max(max_abs((inv * gm.transpose() * t - gm).iter()));
    }
    worst = worst.max(max_abs((t.transpose() + t).iter()));
    Ok(CheckResult::within(worst, tol))
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
