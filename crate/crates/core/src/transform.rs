//! Energy projectors and the change of spin basis from the standard to the
//! helicity 4-spinors.
//!
//! The coefficient matrices are available two ways: numerically from Dirac
//! inner products, A_{σλ} = ū_λu_σ and B_{σλ} = −v̄_λu_σ, and from the
//! closed-form expressions in half-angle and energy factors. The numeric
//! route is the definition.
//!
//! Both spinor families solve the same Dirac equation, so v̄_λu_σ vanishes
//! identically and the numeric B is zero; the closed-form B is not.

use nalgebra::SMatrix;

use crate::algebra::{check_tol, paulis, GammaSet};
use crate::spinors::{
    basis_set, helicity_four_spinor, standard_four_spinor, Basis, FourMomentum, Kind, Spin,
};
use crate::{c, max_abs, CheckResult, Matrix2, Matrix4, Result, Vector4, C64};

type Matrix8 = SMatrix<C64, 8, 8>;
type Vector8 = SMatrix<C64, 8, 1>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorPair {
    pub plus: Matrix4,
    pub minus: Matrix4,
}

impl ProjectorPair {
    /// Max deviation from P₊ + P₋ = 𝟙, P±² = P±, P₊P₋ = 0.
    pub fn algebra_residual(&self) -> f64 {
        let id = Matrix4::identity();
        let (p, m) = (&self.plus, &self.minus);
        [
            max_abs((p + m - id).iter()),
            max_abs((p * p - p).iter()),
            max_abs((m * m - m).iter()),
            max_abs((p * m).iter()),
            max_abs((m * p).iter()),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// P₊ = (p̸ + m)/2m and P₋ = (m − p̸)/2m.
pub fn projectors(p: &FourMomentum, g: &GammaSet) -> ProjectorPair {
    let ps = p.slash(g);
    let id = Matrix4::identity();
    let inv = c(1.0 / (2.0 * p.m), 0.0);
    ProjectorPair {
        plus: (ps + id * c(p.m, 0.0)) * inv,
        minus: (id * c(p.m, 0.0) - ps) * inv,
    }
}

/// Σ_λ ψ_λψ̄_λ for one kind within a basis.
pub fn spinor_outer_sum(basis: Basis, p: &FourMomentum, kind: Kind, g: &GammaSet) -> Matrix4 {
    let mut sum = Matrix4::zeros();
    for s in basis_set(basis, p).iter().filter(|s| s.kind == kind) {
        let bar = s.components.adjoint() * g.gamma[0];
        sum += s.components * bar;
    }
    sum
}

/// Compares the projector formulas with the spinor sums Σuū and −Σvv̄,
/// checks the projector algebra, and P₊u = u, P₋v = v.
pub fn projector_check(
    basis: Basis,
    p: &FourMomentum,
    g: &GammaSet,
    tol: f64,
) -> Result<CheckResult> {
    check_tol(tol)?;
    let pr = projectors(p, g);
    let plus_sum = spinor_outer_sum(basis, p, Kind::U, g);
    let minus_sum = -spinor_outer_sum(basis, p, Kind::V, g);
    let mut worst = max_abs((plus_sum - pr.plus).iter())
        .max(max_abs((minus_sum - pr.minus).iter()))
        .max(pr.algebra_residual());
    for s in basis_set(basis, p) {
        let proj = match s.kind {
            Kind::U => pr.plus,
            Kind::V => pr.minus,
        };
        worst = worst.max((proj * s.components - s.components).norm());
    }
    Ok(CheckResult::within(worst, tol))
}

/// Coefficients of the spin-basis change. Rows are σ = (+½, −½), columns
/// λ = (↑, ↓).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffMatrices {
    pub a: Matrix2,
    pub b: Matrix2,
    /// a⁰ (imaginary), a¹, a², a³ (real) from the half angles.
    pub a_mu: [C64; 4],
    /// a₊₊, a₊₋, a₋₊, a₋₋ from E, |p| and m.
    pub a_pp: f64,
    pub a_pm: f64,
    pub a_mp: f64,
    pub a_mm: f64,
}

impl CoeffMatrices {
    /// σ_μa^μ = a⁰𝟙 + a¹σ₁ + a²σ₂ + a³σ₃.
    pub fn sigma_a(&self) -> Matrix2 {
        let [s1, s2, s3] = paulis();
        Matrix2::identity() * self.a_mu[0]
            + s1 * self.a_mu[1]
            + s2 * self.a_mu[2]
            + s3 * self.a_mu[3]
    }

    /// ‖A†A + B†B − 𝟙‖.
    pub fn completeness_residual(&self) -> f64 {
        let m = self.a.adjoint() * self.a + self.b.adjoint() * self.b - Matrix2::identity();
        max_abs(m.iter())
    }
}

fn half_angle_vector(p: &FourMomentum) -> [C64; 4] {
    let (sh, ch) = (p.theta / 2.0).sin_cos();
    let (sp, cp) = (p.phi / 2.0).sin_cos();
    [
        c(0.0, -ch * sp),
        c(sh * cp, 0.0),
        c(sh * sp, 0.0),
        c(ch * cp, 0.0),
    ]
}

fn energy_factors(p: &FourMomentum) -> [f64; 4] {
    let d = 2.0 * 2f64.sqrt() * p.m;
    let (e, m, k) = (p.e, p.m, p.pmag);
    let e_minus_m = k * k / (e + m);
    [
        ((e + m) * (e + k)).sqrt() / d,
        ((e + m) * p.e_minus_p()).sqrt() / d,
        (e_minus_m * (e + k)).sqrt() / d,
        (e_minus_m * p.e_minus_p()).sqrt() / d,
    ]
}

fn with_ingredients(p: &FourMomentum, a: Matrix2, b: Matrix2) -> CoeffMatrices {
    let [a_pp, a_pm, a_mp, a_mm] = energy_factors(p);
    CoeffMatrices {
        a,
        b,
        a_mu: half_angle_vector(p),
        a_pp,
        a_pm,
        a_mp,
        a_mm,
    }
}

/// A and B from Dirac inner products.
pub fn expansion_coeffs_numeric(p: &FourMomentum, g: &GammaSet) -> CoeffMatrices {
    let mut a = Matrix2::zeros();
    let mut b = Matrix2::zeros();
    for (i, sigma) in Spin::BOTH.into_iter().enumerate() {
        let us = standard_four_spinor(p, sigma, Kind::U).components;
        for (j, lam) in Spin::BOTH.into_iter().enumerate() {
            let ul = helicity_four_spinor(p, lam, Kind::U).components;
            let vl = helicity_four_spinor(p, lam, Kind::V).components;
            a[(i, j)] = g.bar(&ul, &us);
            b[(i, j)] = -g.bar(&vl, &us);
        }
    }
    with_ingredients(p, a, b)
}

/// The v-row coefficients C_{σλ} = ū_λv_σ and D_{σλ} = −v̄_λv_σ, which
/// should reproduce B and A.
pub fn expansion_coeffs_v_rows(p: &FourMomentum, g: &GammaSet) -> (Matrix2, Matrix2) {
    let mut cm = Matrix2::zeros();
    let mut dm = Matrix2::zeros();
    for (i, sigma) in Spin::BOTH.into_iter().enumerate() {
        let vs = standard_four_spinor(p, sigma, Kind::V).components;
        for (j, lam) in Spin::BOTH.into_iter().enumerate() {
            let ul = helicity_four_spinor(p, lam, Kind::U).components;
            let vl = helicity_four_spinor(p, lam, Kind::V).components;
            cm[(i, j)] = g.bar(&ul, &vs);
            dm[(i, j)] = -g.bar(&vl, &vs);
        }
    }
    (cm, dm)
}

/// A and B from the closed-form expressions
///
/// A = (a₊₊ + a₊₋)(σ_μa^μ) + (−a₋₊ + a₋₋)(σ_μa^μ)σ₃,
/// B = (−a₊₊ + a₊₋)(σ_μa^μ) + (a₋₊ + a₋₋)(σ_μa^μ)σ₃.
pub fn expansion_coeffs_closed(p: &FourMomentum) -> CoeffMatrices {
    let mut cm = with_ingredients(p, Matrix2::zeros(), Matrix2::zeros());
    let sa = cm.sigma_a();
    let sa3 = sa * paulis()[2];
    cm.a = sa * c(cm.a_pp + cm.a_pm, 0.0) + sa3 * c(cm.a_mm - cm.a_mp, 0.0);
    cm.b = sa * c(cm.a_pm - cm.a_pp, 0.0) + sa3 * c(cm.a_mp + cm.a_mm, 0.0);
    cm
}

/// Max entry difference between two coefficient sets (A and B).
pub fn coeff_difference(x: &CoeffMatrices, y: &CoeffMatrices) -> f64 {
    max_abs((x.a - y.a).iter()).max(max_abs((x.b - y.b).iter()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTransform {
    /// 𝒰 = ((A, B), (B, A)) on spin indices.
    pub u: Matrix4,
    /// ‖𝒰†𝒰 − 𝟙‖
    pub unitarity_residual: f64,
}

pub fn assemble_u(cm: &CoeffMatrices) -> SpinTransform {
    let u = crate::algebra::block(&cm.a, &cm.b, &cm.b, &cm.a);
    let unitarity_residual = max_abs((u.adjoint() * u - Matrix4::identity()).iter());
    SpinTransform {
        u,
        unitarity_residual,
    }
}

/// Max over σ of ‖u_σ − Σ_λ(A_{σλ}u_λ + B_{σλ}v_λ)‖ and
/// ‖v_σ − Σ_λ(B_{σλ}u_λ + A_{σλ}v_λ)‖.
pub fn reconstruction_residual(p: &FourMomentum, cm: &CoeffMatrices) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, sigma) in Spin::BOTH.into_iter().enumerate() {
        let us = standard_four_spinor(p, sigma, Kind::U).components;
        let vs = standard_four_spinor(p, sigma, Kind::V).components;
        let mut ru = Vector4::zeros();
        let mut rv = Vector4::zeros();
        for (j, lam) in Spin::BOTH.into_iter().enumerate() {
            let ul = helicity_four_spinor(p, lam, Kind::U).components;
            let vl = helicity_four_spinor(p, lam, Kind::V).components;
            ru += ul * cm.a[(i, j)] + vl * cm.b[(i, j)];
            rv += ul * cm.b[(i, j)] + vl * cm.a[(i, j)];
        }
        worst = worst.max((us - ru).norm()).max((vs - rv).norm());
    }
    worst
}

fn stack_pair(x: &Vector4, y: &Vector4) -> Vector8 {
    Vector8::from_iterator(x.iter().chain(y.iter()).copied())
}

/// [A ⊗ 𝟙 + B ⊗ γ⁵] as an 8×8 matrix on (spin index) ⊗ (spinor index).
pub fn kron_operator(cm: &CoeffMatrices, g: &GammaSet) -> Matrix8 {
    let a = cm.a.kronecker(&Matrix4::identity());
    let b = cm.b.kronecker(&g.gamma5);
    Matrix8::from_iterator((a + b).iter().copied())
}

/// u_σ = [A ⊗ 𝟙 + B ⊗ γ⁵]u_λ and the same for v, as 8-component identities
/// with the numeric coefficients.
pub fn kron_form_check(p: &FourMomentum, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let cm = expansion_coeffs_numeric(p, g);
    let k = kron_operator(&cm, g);
    let pair = |basis: Basis, kind: Kind| {
        let f = |s| match basis {
            Basis::Standard => standard_four_spinor(p, s, kind).components,
            _ => helicity_four_spinor(p, s, kind).components,
        };
        stack_pair(&f(Spin::Up), &f(Spin::Down))
    };
    let ru = (pair(Basis::Standard, Kind::U) - k * pair(Basis::Helicity, Kind::U)).norm();
    let rv = (pair(Basis::Standard, Kind::V) - k * pair(Basis::Helicity, Kind::V)).norm();
    Ok(CheckResult::within(ru.max(rv), tol))
}

/// Expands the helicity spinors back out of the standard ones with 𝒰†.
pub fn round_trip_residual(p: &FourMomentum, g: &GammaSet) -> f64 {
    let cm = expansion_coeffs_numeric(p, g);
    let st = assemble_u(&cm);
    let ud = st.u.adjoint();
    let standard: Vec<Vector4> = [Kind::U, Kind::V]
        .into_iter()
        .flat_map(|k| Spin::BOTH.map(|s| standard_four_spinor(p, s, k).components))
        .collect();
    let helicity: Vec<Vector4> = [Kind::U, Kind::V]
        .into_iter()
        .flat_map(|k| Spin::BOTH.map(|s| helicity_four_spinor(p, s, k).components))
        .collect();
    let mut worst: f64 = 0.0;
    for (row, target) in helicity.iter().enumerate() {
        let mut acc = Vector4::zeros();
        for (col, s) in standard.iter().enumerate() {
            acc += s * ud[(row, col)];
        }
        worst = worst.max((acc - target).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinors::momentum;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn g() -> GammaSet {
        GammaSet::spinorial()
    }

    fn m2close(a: &Matrix2, b: &Matrix2, tol: f64) -> bool {
        max_abs((a - b).iter()) < tol
    }

    #[test]
    fn rest_projector() {
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        let g = g();
        let pr = projectors(&p, &g);
        let expect = (g.gamma[0] + Matrix4::identity()) * c(0.5, 0.0);
        assert!(max_abs((pr.plus - expect).iter()) < 1e-15);
    }

    #[test]
    fn rest_on_axis_coefficients() {
        // brute-force inner products at rest, θ = φ = 0: A = σ₃, B = 0
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        let cm = expansion_coeffs_numeric(&p, &g());
        assert!(m2close(&cm.a, &paulis()[2], 1e-15));
        assert!(m2close(&cm.b, &Matrix2::zeros(), 1e-15));
        let st = assemble_u(&cm);
        let z = Matrix2::zeros();
        let s3 = paulis()[2];
        let expect = crate::algebra::block(&s3, &z, &z, &s3);
        assert!(max_abs((st.u - expect).iter()) < 1e-15);
    }

    #[test]
    fn closed_form_rest_ingredients() {
        let p = momentum(1.0, 0.0, 0.0, 0.0).unwrap();
        let cm = expansion_coeffs_closed(&p);
        assert!((cm.a_pp - 0.5).abs() < 1e-15);
        assert!((cm.a_pm - 0.5).abs() < 1e-15);
        assert_eq!(cm.a_mp, 0.0);
        assert_eq!(cm.a_mm, 0.0);
        assert_eq!(
            cm.a_mu,
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        assert!(m2close(&cm.sigma_a(), &paulis()[2], 1e-16));
        // closed form agrees with the inner products here
        let num = expansion_coeffs_numeric(&p, &g());
        assert!(coeff_difference(&cm, &num) < 1e-15);
    }

    #[test]
    fn closed_form_at_rest_is_conjugate_of_numeric() {
        // for general angles at rest the closed form equals ū_σu_λ, the
        // complex conjugate of the ū_λu_σ definition
        let p = momentum(1.0, 0.0, 1.2, 2.5).unwrap();
        let cl = expansion_coeffs_closed(&p);
        let num = expansion_coeffs_numeric(&p, &g());
        assert!(m2close(&cl.a, &num.a.conjugate(), 1e-15));
        assert!(!m2close(&cl.a, &num.a, 1e-3));
    }

    #[test]
    fn closed_form_a_not_unitary_when_boosted() {
        let p = momentum(1.3, 0.7, 1.1, 2.3).unwrap();
        let cm = expansion_coeffs_closed(&p);
        let aa = cm.a.adjoint() * cm.a;
        assert!(max_abs((aa - Matrix2::identity()).iter()) > 1e-3);
        let bb = cm.b.adjoint() * cm.b;
        assert!(max_abs((bb - Matrix2::identity()).iter()) > 1e-3);
    }

    #[test]
    fn ingredient_reality_and_product_identity() {
        let p = momentum(2.0, 3.0, 0.4, 5.0).unwrap();
        let cm = expansion_coeffs_closed(&p);
        assert_eq!(cm.a_mu[0].re, 0.0);
        assert!(cm.a_mu[1..].iter().all(|z| z.im == 0.0));
        assert!((cm.a_pp * cm.a_mm - cm.a_mp * cm.a_pm).abs() < 1e-15);
    }

    #[test]
    fn numeric_b_vanishes() {
        let p = momentum(1.3, 0.7, 1.1, 2.3).unwrap();
        let cm = expansion_coeffs_numeric(&p, &g());
        assert!(max_abs(cm.b.iter()) < 1e-15);
    }

    #[test]
    fn kron_reduces_to_a_at_rest() {
        let p = momentum(1.0, 0.0, 0.3, 0.2).unwrap();
        let g = g();
        let cm = expansion_coeffs_numeric(&p, &g);
        assert!(max_abs(cm.b.iter()) < 1e-15);
        assert!(kron_form_check(&p, &g, 1e-12).unwrap().passed);
    }

    #[test]
    fn kron_matches_reconstruction() {
        // γ⁵u_λ = v_λ turns the Kronecker form into the linear expansion
        let p = momentum(1.0, 2.0, 0.6, 4.0).unwrap();
        let g = g();
        let cm = expansion_coeffs_numeric(&p, &g);
        let k = kron_operator(&cm, &g);
        let hel = stack_pair(
            &helicity_four_spinor(&p, Spin::Up, Kind::U).components,
            &helicity_four_spinor(&p, Spin::Down, Kind::U).components,
        );
        let via_kron = k * hel;
        let mut via_lin = Vector8::zeros();
        for i in 0..2 {
            for (j, lam) in Spin::BOTH.into_iter().enumerate() {
                let ul = helicity_four_spinor(&p, lam, Kind::U).components;
                let vl = helicity_four_spinor(&p, lam, Kind::V).components;
                let part = ul * cm.a[(i, j)] + vl * cm.b[(i, j)];
                for a in 0..4 {
                    via_lin[4 * i + a] += part[a];
                }
            }
        }
        assert!((via_kron - via_lin).norm() < 1e-14);
    }

    #[test]
    fn wrong_gamma0_breaks_kron_form() {
        let p = momentum(1.0, 2.0, 0.6, 4.0).unwrap();
        let r = kron_form_check(&p, &GammaSet::dirac_pauli(), 1e-10).unwrap();
        assert!(!r.passed);
    }

    prop_compose! {
        fn arb_momentum()(m in 0.1f64..5.0, k in 0.1f64..10.0, ct in -1.0f64..1.0, phi in 0.0f64..TAU)
            -> FourMomentum {
            momentum(m, k * m, ct.acos().min(PI), phi).unwrap()
        }
    }

    proptest! {
        #[test]
        fn projector_identities(p in arb_momentum()) {
            let g = GammaSet::spinorial();
            for basis in [Basis::Standard, Basis::Helicity] {
                prop_assert!(projector_check(basis, &p, &g, 1e-10).unwrap().passed);
            }
        }

        #[test]
        fn numeric_transform_is_unitary(p in arb_momentum()) {
            let g = GammaSet::spinorial();
            let cm = expansion_coeffs_numeric(&p, &g);
            prop_assert!(cm.completeness_residual() < 1e-12);
            let st = assemble_u(&cm);
            prop_assert!(st.unitarity_residual < 1e-12);
            prop_assert!((st.u.determinant().norm() - 1.0).abs() < 1e-12);
            let (cv, dv) = expansion_coeffs_v_rows(&p, &g);
            prop_assert!(m2close(&cv, &cm.b, 1e-12));
            prop_assert!(m2close(&dv, &cm.a, 1e-12));
            prop_assert!(reconstruction_residual(&p, &cm) < 1e-10);
            prop_assert!(kron_form_check(&p, &g, 1e-10).unwrap().passed);
            prop_assert!(round_trip_residual(&p, &g) < 1e-10);
        }
    }
}
