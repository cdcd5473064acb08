//! Classical parity, charge conjugation and CP acting on helicity spinors.
//!
//! Each map produces a spinor that is matched against the basis spinors at
//! the target momentum; a match records which template was hit and the
//! unimodular phase in front of it.

use serde::{Deserialize, Serialize};

use crate::algebra::{check_tol, GammaSet};
use crate::spinors::{
    basis_set, helicity_four_spinor, helicity_two_spinor, Basis, FourMomentum, Kind, Spin,
};
use crate::{c, CheckResult, Result, Vector4, C64};

/// Residual and phase-modulus tolerance for declaring a template match.
pub const MATCH_TOL: f64 = 1e-10;

/// Identifies a spinor within a basis; `kind` is `None` for 2-spinors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinorTag {
    pub kind: Option<Kind>,
    pub spin: Spin,
}

impl SpinorTag {
    pub fn four(kind: Kind, spin: Spin) -> Self {
        Self {
            kind: Some(kind),
            spin,
        }
    }

    pub fn two(spin: Spin) -> Self {
        Self { kind: None, spin }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryResult {
    pub input: SpinorTag,
    /// Momentum the input spinor was built at (none for 2-spinors).
    pub input_momentum: Option<FourMomentum>,
    pub output: Vec<C64>,
    /// Best-fitting template at the target momentum.
    pub template: SpinorTag,
    pub phase: C64,
    /// ‖output − phase·template‖
    pub residual: f64,
}

impl SymmetryResult {
    pub fn matched(&self) -> bool {
        self.residual < MATCH_TOL && (self.phase.norm() - 1.0).abs() < MATCH_TOL
    }
}

/// Least-squares fit of `output` to `phase·candidate` for each candidate;
/// returns the best (tag, phase, residual).
pub fn match_template(
    output: &[C64],
    candidates: &[(SpinorTag, Vec<C64>)],
) -> (SpinorTag, C64, f64) {
    let mut best: Option<(SpinorTag, C64, f64)> = None;
    for (tag, cand) in candidates {
        let norm2: f64 = cand.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 {
            continue;
        }
        let overlap: C64 = cand.iter().zip(output).map(|(t, o)| t.conj() * o).sum();
        let phase = overlap / norm2;
        let residual = cand
            .iter()
            .zip(output)
            .map(|(t, o)| (o - phase * t).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if best.is_none_or(|(_, _, r)| residual < r) {
            best = Some((*tag, phase, residual));
        }
    }
    best.expect("at least one non-zero candidate")
}

fn candidates(basis: Basis, p: &FourMomentum) -> Vec<(SpinorTag, Vec<C64>)> {
    basis_set(basis, p)
        .iter()
        .map(|s| {
            (
                SpinorTag::four(s.kind, s.spin()),
                s.components.iter().copied().collect(),
            )
        })
        .collect()
}

fn result(
    input: SpinorTag,
    input_momentum: FourMomentum,
    output: Vec<C64>,
    cands: &[(SpinorTag, Vec<C64>)],
) -> SymmetryResult {
    let (template, phase, residual) = match_template(&output, cands);
    SymmetryResult {
        input,
        input_momentum: Some(input_momentum),
        output,
        template,
        phase,
        residual,
    }
}

/// φ_λ(π − θ, π + φ) matched against φ↑, φ↓ at (θ, φ); expected −i·φ_{−λ}.
pub fn two_spinor_parity(theta: f64, phi: f64, lam: Spin) -> SymmetryResult {
    let out = helicity_two_spinor(
        std::f64::consts::PI - theta,
        std::f64::consts::PI + phi,
        lam,
    );
    let cands: Vec<_> = Spin::BOTH
        .iter()
        .map(|s| {
            (
                SpinorTag::two(*s),
                helicity_two_spinor(theta, phi, *s)
                    .components
                    .iter()
                    .copied()
                    .collect(),
            )
        })
        .collect();
    let (template, phase, residual) = match_template(out.components.as_slice(), &cands);
    SymmetryResult {
        input: SpinorTag::two(lam),
        input_momentum: None,
        output: out.components.iter().copied().collect(),
        template,
        phase,
        residual,
    }
}

pub fn apply_parity(psi: &Vector4, g: &GammaSet) -> Vector4 {
    g.parity * psi
}

/// C = ((0, Θ), (−Θ, 0))·K.
pub fn apply_charge(psi: &Vector4, g: &GammaSet) -> Vector4 {
    g.cconj * psi.conjugate()
}

/// γ⁰ψ_λ(−p), matched against the helicity spinors at p.
pub fn parity_map(p: &FourMomentum, lam: Spin, kind: Kind, g: &GammaSet) -> SymmetryResult {
    parity_map_in(Basis::Helicity, p, lam, kind, g)
}

/// Same map for any basis; in the standard basis the spin label is kept
/// and the phase is ±1.
pub fn parity_map_in(
    basis: Basis,
    p: &FourMomentum,
    spin: Spin,
    kind: Kind,
    g: &GammaSet,
) -> SymmetryResult {
    let minus_p = p.inverted();
    let psi = crate::spinors::four_spinor(basis, &minus_p, spin, kind);
    let out = apply_parity(&psi.components, g);
    result(
        SpinorTag::four(kind, spin),
        minus_p,
        out.iter().copied().collect(),
        &candidates(basis, p),
    )
}

/// Cψ_λ(p), matched against the helicity spinors at the same p.
pub fn charge_map(p: &FourMomentum, lam: Spin, kind: Kind, g: &GammaSet) -> SymmetryResult {
    let psi = helicity_four_spinor(p, lam, kind);
    let out = apply_charge(&psi.components, g);
    result(
        SpinorTag::four(kind, lam),
        *p,
        out.iter().copied().collect(),
        &candidates(Basis::Helicity, p),
    )
}

/// Expected parity outcome: Pu_λ(−p) = −i u_{−λ}(p), Pv_λ(−p) = +i v_{−λ}(p).
pub fn expected_parity(kind: Kind, lam: Spin) -> (SpinorTag, C64) {
    let phase = match kind {
        Kind::U => c(0.0, -1.0),
        Kind::V => c(0.0, 1.0),
    };
    (SpinorTag::four(kind, lam.flip()), phase)
}

/// Expected charge conjugation: Cu↑ = −v↓, Cv↑ = +u↓, Cu↓ = +v↑, Cv↓ = −u↑.
pub fn expected_charge(kind: Kind, lam: Spin) -> (SpinorTag, C64) {
    let sign = match (kind, lam) {
        (Kind::U, Spin::Up) | (Kind::V, Spin::Down) => -1.0,
        _ => 1.0,
    };
    (SpinorTag::four(kind.other(), lam.flip()), c(sign, 0.0))
}

/// Expected CP: CPu↑(−p) = +i v↑(p), CPu↓(−p) = −i v↓(p),
/// CPv↑(−p) = +i u↑(p), CPv↓(−p) = −i u↓(p).
pub fn expected_cp(kind: Kind, lam: Spin) -> (SpinorTag, C64) {
    let phase = match lam {
        Spin::Up => c(0.0, 1.0),
        Spin::Down => c(0.0, -1.0),
    };
    (SpinorTag::four(kind.other(), lam), phase)
}

/// Distance of a symmetry result from an expected (template, phase); an
/// infinite value when the wrong template was matched.
pub fn table_deviation(r: &SymmetryResult, expected: (SpinorTag, C64)) -> f64 {
    if r.template != expected.0 {
        return f64::INFINITY;
    }
    r.residual.max((r.phase - expected.1).norm())
}

const TABLE_ORDER: [(Kind, Spin); 4] = [
    (Kind::U, Spin::Up),
    (Kind::U, Spin::Down),
    (Kind::V, Spin::Up),
    (Kind::V, Spin::Down),
];

/// All four parity relations at momentum p.
pub fn parity_table_check(p: &FourMomentum, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let worst = TABLE_ORDER
        .iter()
        .map(|&(k, l)| table_deviation(&parity_map(p, l, k, g), expected_parity(k, l)))
        .fold(0.0, f64::max);
    Ok(CheckResult::within(worst, tol))
}

/// All four charge-conjugation relations at momentum p.
pub fn charge_table_check(p: &FourMomentum, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let worst = TABLE_ORDER
        .iter()
        .map(|&(k, l)| table_deviation(&charge_map(p, l, k, g), expected_charge(k, l)))
        .fold(0.0, f64::max);
    Ok(CheckResult::within(worst, tol))
}

/// Standard-basis spinors under γ⁰ at inverted momentum keep their spin
/// label and pick up +1 (u) or −1 (v).
pub fn standard_parity_check(p: &FourMomentum, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let worst = TABLE_ORDER
        .iter()
        .map(|&(k, s)| {
            let r = parity_map_in(Basis::Standard, p, s, k, g);
            table_deviation(&r, (SpinorTag::four(k, s), c(k.bar_sign(), 0.0)))
        })
        .fold(0.0, f64::max);
    Ok(CheckResult::within(worst, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpCase {
    /// CPψ(−p) matched at p.
    pub cp: SymmetryResult,
    /// ‖CPψ(−p) + PCψ(−p)‖
    pub anticommutator: f64,
}

/// CP and PC applied to each helicity spinor at −p.
pub fn cp_cases(p: &FourMomentum, g: &GammaSet) -> Vec<CpCase> {
    let minus_p = p.inverted();
    let cands = candidates(Basis::Helicity, p);
    TABLE_ORDER
        .iter()
        .map(|&(kind, lam)| {
            let psi = helicity_four_spinor(&minus_p, lam, kind).components;
            let cp = apply_charge(&apply_parity(&psi, g), g);
            let pc = apply_parity(&apply_charge(&psi, g), g);
            CpCase {
                cp: result(
                    SpinorTag::four(kind, lam),
                    minus_p,
                    cp.iter().copied().collect(),
                    &cands,
                ),
                anticommutator: (cp + pc).norm(),
            }
        })
        .collect()
}

/// CP = −PC and the CP phase table, max residual over the four cases.
pub fn cp_anticommutation(p: &FourMomentum, g: &GammaSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let worst = cp_cases(p, g)
        .iter()
        .map(|case| {
            let tag = case.cp.input;
            let exp = expected_cp(tag.kind.expect("4-spinor"), tag.spin);
            table_deviation(&case.cp, exp).max(case.anticommutator)
        })
        .fold(0.0, f64::max);
    Ok(CheckResult::within(worst, tol))
}
