//! The full verification suite: configuration, seeded momentum sampling,
//! ordered execution of every check, and report rendering.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, GammaSet};
use crate::discrete;
use crate::fock::{self, ExpRoute, ModeSet};
use crate::spinors::{self, Basis, FourMomentum, Spin};
use crate::transform;
use crate::{c, CheckResult, Error, Result, C64};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pinned tolerances used when no override is given.
pub mod tolerance {
    pub const ALGEBRA: f64 = 1e-12;
    pub const SPINOR: f64 = 1e-12;
    pub const COMMUTATOR: f64 = 1e-13;
    pub const TRANSFORM: f64 = 1e-10;
    pub const DISCRETE: f64 = 1e-12;
    pub const FOCK: f64 = 1e-10;
    pub const SMOKE: f64 = 1e-8;
    /// ‖[H(p), Σ₃/2]‖ must exceed this off the z axis.
    pub const OFF_AXIS_FLOOR: f64 = 1e-3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Algebra,
    Spinor,
    Transform,
    Discrete,
    Fock,
}

impl Section {
    pub const ALL: [Section; 5] = [
        Section::Algebra,
        Section::Spinor,
        Section::Transform,
        Section::Discrete,
        Section::Fock,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Deliberately broken conventions; each must turn some check red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativeControl {
    /// Dirac-Pauli γ⁰ in place of the spinorial one.
    Gamma,
    /// Parity matrix γ⁰ with one entry perturbed.
    ParityMatrix,
    /// E(p) ≠ E(−p) on the Fock grid.
    UnpairedEnergy,
    /// Number-operator dressing with the wrong sign.
    Dressing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub mass: f64,
    /// Count of random momenta; ignored when `momenta` is given.
    pub samples: usize,
    pub seed: u64,
    /// Explicit (|p|, θ, φ) samples replacing the random ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<Vec<[f64; 3]>>,
    /// Uniform override of every identity tolerance.
    pub tol: Option<f64>,
    /// Fock grid momenta; negatives are added automatically.
    pub grid: Vec<[f64; 3]>,
    pub alphas: Vec<f64>,
    pub format: Format,
    pub sections: Vec<Section>,
    /// Run the two-pair (dimension 65536) sparse commutator check.
    pub smoke: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<NegativeControl>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            samples: 100,
            seed: 42,
            momenta: None,
            tol: None,
            grid: vec![[0.0, 0.0, 1.0]],
            alphas: vec![0.0, FRAC_PI_2],
            format: Format::Text,
            sections: Section::ALL.to_vec(),
            smoke: true,
            negative_control: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::NonPositiveMass(self.mass));
        }
        if let Some(t) = self.tol {
            algebra::check_tol(t)?;
        }
        Ok(())
    }
}

/// Random on-shell momenta with |p| ∈ [0.1, 10]m, cos θ uniform and φ
/// uniform, followed by fixed probes on the z axis (θ = 0, θ = π) and at
/// |p| = 10⁻⁶m.
pub fn sample_momenta(mass: f64, count: usize, seed: u64) -> Result<Vec<FourMomentum>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 3);
    for _ in 0..count {
        let pmag = mass * rng.gen_range(0.1..=10.0);
        let theta = rng.gen_range(-1.0..=1.0_f64).acos();
        let phi = rng.gen_range(0.0..TAU);
        out.push(FourMomentum::new(mass, pmag, theta, phi)?);
    }
    out.extend(fixed_momenta(mass)?);
    Ok(out)
}

fn fixed_momenta(mass: f64) -> Result<[FourMomentum; 3]> {
    Ok([
        FourMomentum::new(mass, mass, 0.0, 0.0)?,
        FourMomentum::new(mass, mass, PI, 0.0)?,
        FourMomentum::new(mass, 1e-6 * mass, 0.0, 0.0)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, in words.
    pub relation: String,
    pub status: Status,
    /// Absent when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|r| r.status == Status::Pass).count();
        let summary = Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Self {
            version: VERSION.to_string(),
            config,
            checks,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|r| r.id == id)
    }

    pub fn without_timings(mut self) -> Self {
        for r in &mut self.checks {
            r.elapsed_ms = None;
        }
        self
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

struct Runner {
    tol_override: Option<f64>,
    records: Vec<CheckRecord>,
}

type Outcome = (CheckResult, Option<String>);

impl Runner {
    fn tol(&self, pinned: f64) -> f64 {
        self.tol_override.unwrap_or(pinned)
    }

    fn run(
        &mut self,
        id: impl Into<String>,
        relation: &str,
        pinned: f64,
        f: impl FnOnce(f64) -> Result<Outcome>,
    ) {
        let tol = self.tol(pinned);
        self.run_fixed(id, relation, tol, f);
    }

    /// A check whose tolerance is fixed regardless of overrides.
    fn run_fixed(
        &mut self,
        id: impl Into<String>,
        relation: &str,
        tol: f64,
        f: impl FnOnce(f64) -> Result<Outcome>,
    ) {
        let start = Instant::now();
        let out = f(tol);
        self.record(id.into(), relation, tol, out);
        if let Some(r) = self.records.last_mut() {
            r.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
    }

    fn record(&mut self, id: String, relation: &str, tol: f64, out: Result<Outcome>) {
        let (status, residual, tolerance, detail) = match out {
            Ok((r, detail)) => (
                if r.passed { Status::Pass } else { Status::Fail },
                Some(r.residual),
                r.tolerance,
                detail,
            ),
            Err(e) => (Status::Fail, None, tol, Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            id,
            relation: relation.to_string(),
            status,
            residual,
            tolerance,
            detail,
            elapsed_ms: None,
        });
    }
}

fn plain(r: CheckResult) -> Result<Outcome> {
    Ok((r, None))
}

fn over<T>(items: &[T], tol: f64, f: impl Fn(&T) -> Result<CheckResult>) -> Result<Outcome> {
    let results = items.iter().map(f).collect::<Result<Vec<_>>>()?;
    let mut r = CheckResult::combine(results);
    r.tolerance = tol;
    r.passed = r.passed && r.residual < tol;
    plain(r)
}

fn over_values<T>(items: &[T], tol: f64, f: impl Fn(&T) -> f64) -> Result<Outcome> {
    plain(CheckResult::within(
        items.iter().map(f).fold(0.0, f64::max),
        tol,
    ))
}

fn fmt_complex(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:+.6}{:+.6}i", clean(z.re), clean(z.im))
}

fn on_axis(p: &FourMomentum) -> bool {
    p.theta == 0.0 || p.theta == PI
}

/// Run every configured check in order. Construction errors become failed
/// records; the suite never stops early.
pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let mut runner = Runner {
        tol_override: cfg.tol,
        records: Vec::new(),
    };
    let g = match cfg.negative_control {
        Some(NegativeControl::Gamma) => GammaSet::dirac_pauli(),
        _ => GammaSet::spinorial(),
    };
    let samples = match (cfg.validate(), &cfg.momenta) {
        (Err(e), _) => Err(e),
        (Ok(()), Some(list)) => list
            .iter()
            .map(|&[k, t, f]| FourMomentum::new(cfg.mass, k, t, f))
            .collect(),
        (Ok(()), None) => sample_momenta(cfg.mass, cfg.samples, cfg.seed),
    };
    let samples = match samples {
        Ok(s) => s,
        Err(e) => {
            runner.record("config".into(), "configuration is valid", 0.0, Err(e));
            return Report::new(cfg.clone(), runner.records);
        }
    };
    for &section in &cfg.sections {
        match section {
            Section::Algebra => algebra_section(&mut runner, &g, cfg),
            Section::Spinor => spinor_section(&mut runner, &g, &samples),
            Section::Transform => transform_section(&mut runner, &g, &samples),
            Section::Discrete => discrete_section(&mut runner, &g, &samples),
            Section::Fock => fock_section(&mut runner, cfg),
        }
    }
    Report::new(cfg.clone(), runner.records)
}

fn algebra_section(r: &mut Runner, g: &GammaSet, cfg: &SuiteConfig) {
    r.run(
        "algebra.clifford",
        "{γ^μ, γ^ν} = 2g^{μν}",
        tolerance::ALGEBRA,
        |t| plain(CheckResult::within(g.clifford_residual(), t)),
    );
    r.run(
        "algebra.gamma5",
        "γ⁵ anticommutes with every γ^μ and squares to 1",
        tolerance::ALGEBRA,
        |t| plain(CheckResult::within(g.gamma5_residual(), t)),
    );
    r.run(
        "algebra.parity_similarity",
        "P⁻¹γ⁰P = γ⁰, P⁻¹γⁱP = −γⁱ",
        tolerance::ALGEBRA,
        |t| {
            let mut p = g.parity;
            if cfg.negative_control == Some(NegativeControl::ParityMatrix) {
                p[(0, 0)] += c(1e-3, 0.0);
            }
            plain(algebra::verify_parity_similarity_for(&p, g, t)?)
        },
    );
    r.run(
        "algebra.time_reversal",
        "T⁻¹γ_μᵀT = γ_μ and Tᵀ = −T",
        tolerance::ALGEBRA,
        |t| plain(algebra::verify_t_properties_for(&g.trev, g, t)?),
    );
    r.run(
        "algebra.wigner_theta",
        "Θσ_iΘ⁻¹ = −σ_i*",
        tolerance::ALGEBRA,
        |t| plain(CheckResult::within(g.theta_residual(), t)),
    );
}

fn spinor_section(r: &mut Runner, g: &GammaSet, ps: &[FourMomentum]) {
    r.run(
        "spinor.shell",
        "p⁺p⁻ − p_r p_l = m² relative to E²",
        tolerance::SPINOR,
        |t| over_values(ps, t, |p| p.shell_residual() / (p.e * p.e)),
    );
    for (basis, name) in [(Basis::Standard, "standard"), (Basis::Helicity, "helicity")] {
        r.run(
            format!("spinor.orthonormality.{name}"),
            "ū_λu_λ' = δ, v̄_λv_λ' = −δ, ū v = 0",
            tolerance::SPINOR,
            |t| over_values(ps, t, |p| spinors::orthonormality_residual(basis, p, g)),
        );
        r.run(
            format!("spinor.dirac.{name}"),
            "(p̸ − m)u = 0, (p̸ + m)v = 0",
            tolerance::SPINOR,
            |t| {
                over(ps, t, |p| {
                    let worst = spinors::basis_set(basis, p)
                        .iter()
                        .map(|s| spinors::dirac_residual(s, g))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .fold(0.0, f64::max);
                    Ok(CheckResult::within(worst, t))
                })
            },
        );
    }
    r.run(
        "spinor.helicity_eigen",
        "(Σ·p̂/2)ψ_λ = λψ_λ",
        tolerance::SPINOR,
        |t| {
            over_values(ps, t, |p| {
                spinors::basis_set(Basis::Helicity, p)
                    .iter()
                    .map(spinors::helicity_eigen_residual)
                    .fold(0.0, f64::max)
            })
        },
    );
    r.run(
        "spinor.two_spinor_chain",
        "(E ∓ σ·p)φ relations linking the upper and lower blocks",
        tolerance::SPINOR,
        |t| {
            let items: Vec<(FourMomentum, Spin)> = ps
                .iter()
                .flat_map(|p| Spin::BOTH.map(|l| (*p, l)))
                .collect();
            over(&items, t, |(p, l)| {
                spinors::two_spinor_chain_check(p, *l, t)
            })
        },
    );
    r.run(
        "spinor.chiral_coupled",
        "p̸𝒰_η = m𝒰_{−η} and the 𝒱 counterparts",
        tolerance::SPINOR,
        |t| {
            over_values(ps, t, |p| {
                spinors::chiral_coupled_residuals(p, g)
                    .into_iter()
                    .fold(0.0, f64::max)
            })
        },
    );
    r.run(
        "commutator.helicity",
        "[H(p), Σ·p̂/2] = 0",
        tolerance::COMMUTATOR,
        |t| {
            over_values(ps, t, |p| {
                spinors::norm4(&spinors::commutator_hamiltonian(p, g).comm_hel)
            })
        },
    );
    let (axis, off): (Vec<FourMomentum>, Vec<FourMomentum>) = ps.iter().partition(|p| on_axis(p));
    r.run(
        "commutator.sigma3.on_axis",
        "[H(p), Σ₃/2] = 0 for p along z",
        tolerance::COMMUTATOR,
        |t| {
            over_values(&axis, t, |p| {
                spinors::norm4(&spinors::commutator_hamiltonian(p, g).comm_s3)
            })
        },
    );
    r.run_fixed(
        "commutator.sigma3.off_axis",
        "‖[H(p), Σ₃/2]‖ > 10⁻³ off the z axis (residual is 10⁻³/min‖·‖)",
        1.0,
        |_| {
            let least = off
                .iter()
                .map(|p| spinors::norm4(&spinors::commutator_hamiltonian(p, g).comm_s3))
                .fold(f64::INFINITY, f64::min);
            let detail = (!off.is_empty())
                .then(|| format!("min ‖[H, Σ₃/2]‖ = {least:.3e} over {} samples", off.len()));
            Ok((
                if off.is_empty() {
                    CheckResult::within(0.0, 1.0)
                } else {
                    CheckResult::above(least, tolerance::OFF_AXIS_FLOOR)
                },
                detail,
            ))
        },
    );
}

fn transform_section(r: &mut Runner, g: &GammaSet, ps: &[FourMomentum]) {
    for (basis, name) in [(Basis::Standard, "standard"), (Basis::Helicity, "helicity")] {
        r.run(
            format!("transform.projectors.{name}"),
            "Σuū = (p̸ + m)/2m, −Σvv̄ = (m − p̸)/2m, projector algebra",
            tolerance::TRANSFORM,
            |t| over(ps, t, |p| transform::projector_check(basis, p, g, t)),
        );
    }
    r.run(
        "transform.coeff_closed_vs_numeric",
        "closed-form A, B agree with A = ū_σu_λ, B = −v̄_λu_σ",
        tolerance::TRANSFORM,
        |t| {
            over_values(ps, t, |p| {
                transform::coeff_difference(
                    &transform::expansion_coeffs_closed(p),
                    &transform::expansion_coeffs_numeric(p, g),
                )
            })
        },
    );
    r.run(
        "transform.coeff_completeness",
        "A†A + B†B = 𝟙",
        tolerance::TRANSFORM,
        |t| {
            over_values(ps, t, |p| {
                transform::expansion_coeffs_numeric(p, g).completeness_residual()
            })
        },
    );
    r.run(
        "transform.unitarity",
        "𝒰 = ((A, B), (B, A)) is unitary",
        tolerance::TRANSFORM,
        |t| {
            over_values(ps, t, |p| {
                transform::assemble_u(&transform::expansion_coeffs_numeric(p, g)).unitarity_residual
            })
        },
    );
    r.run(
        "transform.reconstruction",
        "u_σ = Σ_λ(A u_λ + B v_λ), v_σ = Σ_λ(B u_λ + A v_λ)",
        tolerance::TRANSFORM,
        |t| {
            over_values(ps, t, |p| {
                transform::reconstruction_residual(p, &transform::expansion_coeffs_numeric(p, g))
            })
        },
    );
    r.run(
        "transform.kronecker",
        "u_σ = [A ⊗ 𝟙 + B ⊗ γ⁵]u_λ",
        tolerance::TRANSFORM,
        |t| over(ps, t, |p| transform::kron_form_check(p, g, t)),
    );
    r.run(
        "transform.round_trip",
        "𝒰† recovers the helicity spinors",
        tolerance::TRANSFORM,
        |t| over_values(ps, t, |p| transform::round_trip_residual(p, g)),
    );
}

fn discrete_section(r: &mut Runner, g: &GammaSet, ps: &[FourMomentum]) {
    r.run(
        "discrete.parity_table",
        "γ⁰ψ_λ(−p) = phase·ψ_{−λ}(p) with phases (−i, −i, +i, +i)",
        tolerance::DISCRETE,
        |t| over(ps, t, |p| discrete::parity_table_check(p, g, t)),
    );
    r.run(
        "discrete.standard_parity",
        "standard spinors are γ⁰ eigenstates at −p",
        tolerance::DISCRETE,
        |t| over(ps, t, |p| discrete::standard_parity_check(p, g, t)),
    );
    r.run(
        "discrete.charge_table",
        "Cu↑ = −v↓, Cv↑ = +u↓, Cu↓ = +v↑, Cv↓ = −u↑",
        tolerance::DISCRETE,
        |t| over(ps, t, |p| discrete::charge_table_check(p, g, t)),
    );
    r.run(
        "discrete.cp",
        "CP = −PC with phases (+i, −i, +i, −i)",
        tolerance::DISCRETE,
        |t| over(ps, t, |p| discrete::cp_anticommutation(p, g, t)),
    );
}

fn fock_section(r: &mut Runner, cfg: &SuiteConfig) {
    let modes =
        ModeSet::from_cartesian(cfg.mass, &fock::negation_closure(&cfg.grid)).and_then(|m| {
            if cfg.negative_control == Some(NegativeControl::UnpairedEnergy) && m.len() > 1 {
                let e = m.energy(1) + 0.5;
                m.with_energy_override(1, e)
            } else {
                Ok(m)
            }
        });
    let modes = match modes {
        Ok(m) => m,
        Err(e) => {
            r.record(
                "fock.grid".into(),
                "Fock grid is valid",
                r.tol(tolerance::FOCK),
                Err(e),
            );
            return;
        }
    };
    r.run(
        "fock.anticommutators",
        "{a_λ(p), a†_λ'(k)} = 2E δ, all other anticommutators vanish",
        tolerance::FOCK,
        |t| plain(fock::anticommutator_check(&modes, t)?),
    );
    r.run(
        "fock.operator_properties",
        "H and Â hermitian, U_P unitary, [Â, H] = 0",
        tolerance::FOCK,
        |t| plain(fock::operator_properties_check(&modes, t)?),
    );
    r.run(
        "fock.exp_routes",
        "dense and pair-rotation exponentials agree",
        tolerance::FOCK,
        |t| plain(fock::exp_route_check(&modes, &[FRAC_PI_2, 0.7], t)?),
    );
    r.run(
        "fock.parity_hamiltonian",
        "[U_P(π/2), H] = 0",
        tolerance::FOCK,
        |t| {
            plain(fock::check_parity_hamiltonian_with(
                &modes,
                ExpRoute::Dense,
                t,
            )?)
        },
    );
    let mut ladder_alphas = vec![FRAC_PI_2];
    for &a in &cfg.alphas {
        if !ladder_alphas.contains(&a) {
            ladder_alphas.push(a);
        }
    }
    for alpha in ladder_alphas {
        r.run(
            format!("fock.ladder_transforms[alpha={alpha:.6}]"),
            "U_P a_λ(p) U_P⁻¹ = cos α a_λ(p) − i sin α a_{−λ}(−p), same for b",
            tolerance::FOCK,
            |t| plain(fock::ladder_transform_check(&modes, alpha, t)?),
        );
    }
    r.run(
        "fock.charge_table",
        "U_C a_λ U_C⁻¹ = (−1)^{1/2+λ} b_{−λ}, U_C b_λ U_C⁻¹ = (−1)^{1/2−λ} a_{−λ}",
        tolerance::FOCK,
        |t| {
            let cc = fock::charge_unitary(&modes, t)?;
            let detail = format!(
                "c↑ = {}, c↓ = {}, κ = {}, {} candidates rejected",
                fmt_complex(cc.coeffs[0]),
                fmt_complex(cc.coeffs[1]),
                cc.kappa,
                cc.rejected
            );
            Ok((CheckResult::within(cc.residual, t), Some(detail)))
        },
    );
    r.run(
        "fock.pc_anticommutation",
        "U_P U_C x†|0⟩ = −U_C U_P x†|0⟩ with phases i(−1)^{1/2±λ}",
        tolerance::FOCK,
        |t| plain(fock::check_pc_anticommutation(&modes, t)?),
    );
    for &alpha in &cfg.alphas {
        r.run(
            format!("fock.phase_study[alpha={alpha:.6}]"),
            "dressed U_P(α): a → −ie^{iα} a', b → −ie^{−iα} b'",
            tolerance::FOCK,
            |t| {
                let s = fock::phase_study(&modes, alpha)?;
                let ea = -C64::i() * C64::from_polar(1.0, alpha);
                let eb = -C64::i() * C64::from_polar(1.0, -alpha);
                let residual = (s.a_phase - ea)
                    .norm()
                    .max((s.b_phase - eb).norm())
                    .max(s.residual);
                let tag = match s.relation {
                    fock::ParityRelation::Same => "same",
                    fock::ParityRelation::Opposite => "opposite",
                };
                let detail = format!(
                    "a: {}, b: {}, {tag}",
                    fmt_complex(s.a_phase),
                    fmt_complex(s.b_phase)
                );
                Ok((CheckResult::within(residual, t), Some(detail)))
            },
        );
    }
    r.run(
        "fock.vacuum",
        "U_P|0⟩ = |0⟩, U_C|0⟩ = |0⟩",
        tolerance::FOCK,
        |t| plain(fock::vacuum_invariance_check(&modes, t)?),
    );
    r.run(
        "fock.number_and_square",
        "[U_P, N] = 0 and U_P² = −1 on one-particle states",
        tolerance::FOCK,
        |t| plain(fock::parity_number_and_square_check(&modes, t)?),
    );
    r.run(
        "fock.bww_structure",
        "Ψ₁, Ψ₂ linear in four ladders; U_P maps Ψ₁ content onto Ψ₂ sector",
        tolerance::FOCK,
        |t| plain(fock::bww_structure_check(&modes, t)?),
    );
    let sign = if cfg.negative_control == Some(NegativeControl::Dressing) {
        -1.0
    } else {
        1.0
    };
    for &alpha in &cfg.alphas {
        r.run(
            format!("fock.field_parity[alpha={alpha:.6}]"),
            "U_P Ψ_p U_P⁻¹ = e^{iα}γ⁰Ψ_{−p} mode by mode",
            tolerance::FOCK,
            |t| plain(fock::field_parity_with_dressing(&modes, alpha, sign, t)?),
        );
    }
    if cfg.smoke {
        r.run(
            "fock.smoke.two_pair",
            "[U_P(π/2), H] = 0 on two momentum pairs (sparse route)",
            tolerance::SMOKE,
            |t| {
                let grid = fock::negation_closure(&[[0.0, 0.0, 1.0], [0.5, 0.0, 0.0]]);
                let m = ModeSet::from_cartesian(cfg.mass, &grid)?;
                let res = fock::check_parity_hamiltonian_with(&m, ExpRoute::Sparse, t)?;
                Ok((res, Some(format!("dimension {}", m.dim()))))
            },
        );
    }
}

/// Render a report as an aligned text table or as JSON. Timings are only
/// included when asked for.
pub fn render_report(report: &Report, format: Format, timings: bool) -> String {
    let report = if timings {
        report.clone()
    } else {
        report.clone().without_timings()
    };
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(&report),
    }
}

fn render_text(report: &Report) -> String {
    let width = report
        .checks
        .iter()
        .map(|r| r.id.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let cfg = &report.config;
    let tol = cfg.tol.map_or("pinned".to_string(), |t| format!("{t:e}"));
    let _ = writeln!(
        out,
        "helicity {}  mass={} samples={} seed={} tol={}",
        report.version, cfg.mass, cfg.samples, cfg.seed, tol
    );
    for r in &report.checks {
        let mark = if r.status == Status::Pass {
            '✓'
        } else {
            '✗'
        };
        let residual = r.residual.map_or("n/a".to_string(), |x| format!("{x:.3e}"));
        let _ = write!(
            out,
            "{mark} {:<width$}  {:>10} < {:<8.1e}  {}",
            r.id, residual, r.tolerance, r.relation
        );
        if let Some(d) = &r.detail {
            let _ = write!(out, "  [{d}]");
        }
        if let Some(ms) = r.elapsed_ms {
            let _ = write!(out, "  ({ms:.1} ms)");
        }
        out.push('\n');
    }
    let s = report.summary;
    let _ = writeln!(out, "{}/{} passed, {} failed", s.passed, s.total, s.failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            samples: 5,
            smoke: false,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let a = sample_momenta(1.3, 50, 7).unwrap();
        let b = sample_momenta(1.3, 50, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 53);
        assert_ne!(a, sample_momenta(1.3, 50, 8).unwrap());
        for p in &a[..50] {
            assert!((0.13..=13.0).contains(&p.pmag));
            assert!((0.0..TAU).contains(&p.phi));
        }
        assert_eq!(a[50].theta, 0.0);
        assert_eq!(a[51].theta, PI);
        assert_eq!(a[52].pmag, 1.3e-6);
    }

    #[test]
    fn records_follow_section_order() {
        let r = run_suite(&SuiteConfig {
            sections: vec![Section::Discrete, Section::Algebra],
            ..small()
        });
        assert!(r.checks[0].id.starts_with("discrete."));
        assert!(r.checks.last().unwrap().id.starts_with("algebra."));
        assert!(r.passed());
    }

    #[test]
    fn status_matches_residual() {
        let r = run_suite(&SuiteConfig {
            sections: vec![Section::Transform],
            ..small()
        });
        for rec in &r.checks {
            let pass = rec.residual.is_some_and(|x| x < rec.tolerance);
            assert_eq!(rec.status == Status::Pass, pass, "{}", rec.id);
        }
        assert_eq!(r.summary.passed + r.summary.failed, r.summary.total);
        assert_eq!(
            r.get("transform.coeff_closed_vs_numeric").unwrap().status,
            Status::Fail
        );
        assert_eq!(r.get("transform.kronecker").unwrap().status, Status::Pass);
    }

    #[test]
    fn invalid_config_becomes_failed_record() {
        let r = run_suite(&SuiteConfig {
            tol: Some(-1.0),
            ..small()
        });
        assert_eq!(r.checks.len(), 1);
        assert!(!r.passed());
        let r = run_suite(&SuiteConfig {
            grid: vec![[0.0, 0.0, 0.0]],
            sections: vec![Section::Fock],
            ..small()
        });
        assert_eq!(r.checks[0].id, "fock.grid");
        assert_eq!(r.checks[0].residual, None);
    }

    #[test]
    fn empty_report() {
        let r = run_suite(&SuiteConfig {
            sections: vec![],
            ..small()
        });
        assert_eq!(
            r.summary,
            Summary {
                total: 0,
                passed: 0,
                failed: 0
            }
        );
        assert!(r.passed());
        assert!(render_report(&r, Format::Text, false).contains("0/0 passed"));
    }

    #[test]
    fn json_round_trip() {
        let r = run_suite(&SuiteConfig {
            sections: vec![Section::Algebra, Section::Discrete],
            ..small()
        });
        let s = render_report(&r, Format::Json, false);
        assert_eq!(Report::from_json(&s).unwrap(), r.clone().without_timings());
        let keys: Vec<&str> = ["\"version\"", "\"config\"", "\"checks\"", "\"summary\""].to_vec();
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(!s.contains("elapsed_ms"));
        assert!(render_report(&r, Format::Json, true).contains("elapsed_ms"));
    }

    #[test]
    fn text_marks() {
        let r = run_suite(&SuiteConfig {
            sections: vec![Section::Transform],
            ..small()
        });
        let s = render_report(&r, Format::Text, false);
        assert!(s.contains("✓ transform.kronecker"));
        assert!(s.contains("✗ transform.coeff_closed_vs_numeric"));
    }

    #[test]
    fn tolerance_override_applies_uniformly() {
        let r = run_suite(&SuiteConfig {
            tol: Some(1e-6),
            sections: vec![Section::Spinor],
            ..small()
        });
        for rec in &r.checks {
            let expect = if rec.id == "commutator.sigma3.off_axis" {
                1.0
            } else {
                1e-6
            };
            assert_eq!(rec.tolerance, expect, "{}", rec.id);
        }
    }

    #[test]
    fn negative_controls_fail() {
        let cases = [
            (
                NegativeControl::Gamma,
                Section::Transform,
                "transform.kronecker",
            ),
            (
                NegativeControl::ParityMatrix,
                Section::Algebra,
                "algebra.parity_similarity",
            ),
        ];
        for (nc, section, id) in cases {
            let r = run_suite(&SuiteConfig {
                sections: vec![section],
                negative_control: Some(nc),
                ..small()
            });
            assert_eq!(r.get(id).unwrap().status, Status::Fail, "{nc:?}");
        }
    }
}
