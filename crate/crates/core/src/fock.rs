//! Finite-mode Fock space over a momentum grid closed under p → −p.
//!
//! Every grid momentum carries four fermionic modes (λ = ↑, ↓ for the
//! particle a and the antiparticle b). Ladder operators are built by the
//! Jordan-Wigner construction over the canonical ordinal
//! `(k · 2 + λ) · 2 + species`; basis bit `j` is the occupation of mode `j`.
//!
//! Canonical operators ã satisfy {ã, ã†} = 1. The exposed operators
//! a = √(2E)·ã carry the 2E normalization of the anticommutators, which
//! cancels the 1/2E measure in the parity generator.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_tol, GammaSet};
use crate::spinors::{helicity_four_spinor, FourMomentum, Kind, Spin};
use crate::{c, CheckResult, Error, Result, Vector4, C64};

/// Largest supported mode count (Fock dimension 2^20).
pub const MAX_MODES: usize = 20;

/// Entries below this modulus are dropped from sparse exponentials.
const PRUNE: f64 = 1e-15;

const ZERO: C64 = c(0.0, 0.0);
const ONE: C64 = c(1.0, 0.0);
const I: C64 = c(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    /// Particle, operators a.
    A,
    /// Antiparticle, operators b.
    B,
}

impl Species {
    pub const BOTH: [Species; 2] = [Species::A, Species::B];

    fn index(self) -> usize {
        match self {
            Species::A => 0,
            Species::B => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Species::A => Species::B,
            Species::B => Species::A,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Species::A => "a",
            Species::B => "b",
        }
    }
}

fn spin_index(s: Spin) -> usize {
    match s {
        Spin::Up => 0,
        Spin::Down => 1,
    }
}

/// One single-particle mode: grid momentum index, helicity and species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mode {
    pub k: usize,
    pub lam: Spin,
    pub species: Species,
}

impl Mode {
    pub fn new(k: usize, lam: Spin, species: Species) -> Self {
        Self { k, lam, species }
    }

    pub fn ordinal(&self) -> usize {
        (self.k * 2 + spin_index(self.lam)) * 2 + self.species.index()
    }

    fn from_ordinal(j: usize) -> Self {
        let species = if j.is_multiple_of(2) {
            Species::A
        } else {
            Species::B
        };
        let lam = if (j / 2).is_multiple_of(2) {
            Spin::Up
        } else {
            Spin::Down
        };
        Self {
            k: j / 4,
            lam,
            species,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}(p{})",
            self.species.letter(),
            self.lam.arrow(),
            self.k
        )
    }
}

/// Grid momenta with their negation pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    momenta: Vec<FourMomentum>,
    partner: Vec<usize>,
    energies: Vec<f64>,
}

fn same_vector(x: [f64; 3], y: [f64; 3]) -> bool {
    let scale = 1.0 + x.iter().chain(&y).fold(0.0_f64, |m, v| m.max(v.abs()));
    x.iter()
        .zip(&y)
        .all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
}

/// Validate a momentum grid and fix the canonical mode ordering.
pub fn build_modes(momenta: &[FourMomentum]) -> Result<ModeSet> {
    let Some(first) = momenta.first() else {
        return Ok(ModeSet {
            momenta: Vec::new(),
            partner: Vec::new(),
            energies: Vec::new(),
        });
    };
    for (index, p) in momenta.iter().enumerate() {
        if p.m != first.m {
            return Err(Error::MassMismatch {
                index,
                found: p.m,
                expected: first.m,
            });
        }
        if p.pmag == 0.0 {
            return Err(Error::ZeroMomentum(index));
        }
    }
    for i in 0..momenta.len() {
        for j in i + 1..momenta.len() {
            if same_vector(momenta[i].cartesian(), momenta[j].cartesian()) {
                return Err(Error::DuplicateMomentum(i, j));
            }
        }
    }
    let mut partner = Vec::with_capacity(momenta.len());
    for (i, p) in momenta.iter().enumerate() {
        let neg = p.cartesian().map(|x| -x);
        let j = momenta
            .iter()
            .position(|q| same_vector(q.cartesian(), neg))
            .ok_or(Error::GridNotClosed(i))?;
        partner.push(j);
    }
    let m_count = 4 * momenta.len();
    if m_count > MAX_MODES {
        return Err(Error::FockTooLarge(m_count));
    }
    Ok(ModeSet {
        energies: momenta.iter().map(|p| p.e).collect(),
        momenta: momenta.to_vec(),
        partner,
    })
}

/// Add −p for every p whose negative is missing, preserving order.
pub fn negation_closure(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::with_capacity(2 * points.len());
    for &p in points {
        for q in [p, p.map(|x| -x)] {
            if !out.iter().any(|&r| same_vector(r, q)) {
                out.push(q);
            }
        }
    }
    out
}

impl ModeSet {
    /// Grid from Cartesian momenta of a common mass.
    pub fn from_cartesian(m: f64, points: &[[f64; 3]]) -> Result<Self> {
        let momenta = points
            .iter()
            .map(|&p| FourMomentum::from_cartesian(m, p))
            .collect::<Result<Vec<_>>>()?;
        build_modes(&momenta)
    }

    /// One pair {p ẑ, −p ẑ}.
    pub fn single_pair(m: f64, pmag: f64) -> Result<Self> {
        Self::from_cartesian(m, &[[0.0, 0.0, pmag], [0.0, 0.0, -pmag]])
    }

    /// Replace the energy attached to grid entry `k`. Breaking
    /// E(p) = E(−p) this way is only useful as a negative control.
    pub fn with_energy_override(mut self, k: usize, e: f64) -> Result<Self> {
        let slot = self.energies.get_mut(k).ok_or(Error::IndexOutOfRange {
            what: "grid momentum",
            index: k,
        })?;
        *slot = e;
        Ok(self)
    }

    pub fn momenta(&self) -> &[FourMomentum] {
        &self.momenta
    }

    pub fn momentum(&self, k: usize) -> &FourMomentum {
        &self.momenta[k]
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn mode_count(&self) -> usize {
        4 * self.momenta.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.mode_count()
    }

    /// Index of −p for grid entry `k`.
    pub fn partner(&self, k: usize) -> usize {
        self.partner[k]
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.energies[k]
    }

    /// All modes in canonical order.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.mode_count()).map(Mode::from_ordinal)
    }

    pub fn ordinal(&self, mode: Mode) -> Result<usize> {
        if mode.k < self.momenta.len() {
            Ok(mode.ordinal())
        } else {
            Err(Error::UnknownMode(mode.to_string()))
        }
    }

    /// Grid index of a momentum, matched on Cartesian components.
    pub fn find(&self, p: &FourMomentum) -> Option<usize> {
        self.momenta
            .iter()
            .position(|q| q.m == p.m && same_vector(q.cartesian(), p.cartesian()))
    }

    /// The mode reached by (p, λ) → (−p, −λ).
    pub fn inverted_mode(&self, mode: Mode) -> Mode {
        Mode::new(self.partner[mode.k], mode.lam.flip(), mode.species)
    }
}

/// Role tag carried by a [`FockOperator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    Ladder,
    Generator,
    Unitary,
    Hamiltonian,
    Field,
    Number,
    Product,
}

/// Square operator on the Fock space, stored row by row as sorted
/// `(column, value)` lists.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    kind: OperatorKind,
    rows: Vec<Vec<(usize, C64)>>,
}

impl FockOperator {
    pub fn zeros(dim: usize, kind: OperatorKind) -> Self {
        Self {
            dim,
            kind,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| ONE).collect(), OperatorKind::Unitary)
    }

    pub fn diagonal(values: Vec<C64>, kind: OperatorKind) -> Self {
        let rows = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v == ZERO { Vec::new() } else { vec![(i, v)] })
            .collect::<Vec<_>>();
        Self {
            dim: rows.len(),
            kind,
            rows,
        }
    }

    /// Sum duplicate `(row, column, value)` entries; exact zeros are dropped.
    pub fn from_triplets(
        dim: usize,
        kind: OperatorKind,
        entries: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Self {
        let mut rows = vec![Vec::new(); dim];
        for (r, col, v) in entries {
            rows[r].push((col, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(col, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == col => last.1 += v,
                    _ => merged.push((col, v)),
                }
            }
            merged.retain(|e| e.1 != ZERO);
            *row = merged;
        }
        Self { dim, kind, rows }
    }

    pub fn from_dense(m: &DMatrix<C64>, kind: OperatorKind) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        let rows = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .filter_map(|col| {
                        let v = m[(r, col)];
                        (v != ZERO).then_some((col, v))
                    })
                    .collect()
            })
            .collect();
        Self {
            dim: m.nrows(),
            kind,
            rows,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for &(col, v) in row {
                m[(r, col)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: OperatorKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_nnz_per_column(&self) -> usize {
        let mut counts = vec![0usize; self.dim];
        for row in &self.rows {
            for &(col, _) in row {
                counts[col] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }

    pub fn get(&self, r: usize, col: usize) -> C64 {
        self.rows[r]
            .binary_search_by_key(&col, |e| e.0)
            .map(|i| self.rows[r][i].1)
            .unwrap_or(ZERO)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|e| e.1.norm())
            .fold(0.0, f64::max)
    }

    fn combine(&self, rhs: &Self, s: C64) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(x, y)| {
                let mut out = Vec::with_capacity(x.len() + y.len());
                let (mut i, mut j) = (0, 0);
                while i < x.len() || j < y.len() {
                    let entry = match (x.get(i), y.get(j)) {
                        (Some(&(cx, vx)), Some(&(cy, _))) if cx < cy => {
                            i += 1;
                            (cx, vx)
                        }
                        (Some(&(cx, _)), Some(&(cy, vy))) if cy < cx => {
                            j += 1;
                            (cy, s * vy)
                        }
                        (Some(&(cx, vx)), Some(&(_, vy))) => {
                            i += 1;
                            j += 1;
                            (cx, vx + s * vy)
                        }
                        (Some(&e), None) => {
                            i += 1;
                            e
                        }
                        (None, Some(&(cy, vy))) => {
                            j += 1;
                            (cy, s * vy)
                        }
                        (None, None) => unreachable!(),
                    };
                    if entry.1 != ZERO {
                        out.push(entry);
                    }
                }
                out
            })
            .collect();
        Self {
            dim: self.dim,
            kind: OperatorKind::Product,
            rows,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, ONE)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, -ONE)
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = if s == ZERO {
            vec![Vec::new(); self.dim]
        } else {
            self.rows
                .iter()
                .map(|row| row.iter().map(|&(col, v)| (col, s * v)).collect())
                .collect()
        };
        Self {
            dim: self.dim,
            kind: self.kind,
            rows,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut acc = vec![ZERO; self.dim];
        let mut seen = vec![false; self.dim];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.dim);
        for row in &self.rows {
            for &(k, a) in row {
                for &(j, b) in &rhs.rows[k] {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if acc[j] != ZERO {
                    out.push((j, acc[j]));
                }
                acc[j] = ZERO;
                seen[j] = false;
            }
            touched.clear();
            rows.push(out);
        }
        Self {
            dim: self.dim,
            kind: OperatorKind::Product,
            rows,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim];
        for (r, row) in self.rows.iter().enumerate() {
            for &(col, v) in row {
                rows[col].push((r, v.conj()));
            }
        }
        Self {
            dim: self.dim,
            kind: self.kind,
            rows,
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(col, x)| x * v[col]).sum())
            .collect()
    }

    /// Frobenius inner product tr(self† · rhs).
    pub fn inner(&self, rhs: &Self) -> C64 {
        self.rows
            .iter()
            .zip(&rhs.rows)
            .map(|(x, y)| {
                let mut s = ZERO;
                let (mut i, mut j) = (0, 0);
                while i < x.len() && j < y.len() {
                    match x[i].0.cmp(&y[j].0) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            s += x[i].1.conj() * y[j].1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                s
            })
            .sum()
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).add(&rhs.mul(self))
    }

    pub fn prune(mut self, eps: f64) -> Self {
        for row in &mut self.rows {
            row.retain(|e| e.1.norm() > eps);
        }
        self
    }

    /// ‖A − A†‖.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// ‖U†U − 𝟙‖.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .sub(&Self::identity(self.dim))
            .max_abs()
    }
}

fn parity_below(s: usize, j: usize) -> f64 {
    if (s & ((1 << j) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Canonical Jordan-Wigner operator ã_j (or ã†_j) with {ã, ã†} = 1.
pub fn canonical_ladder(dim: usize, j: usize, dagger: bool) -> FockOperator {
    let bit = 1 << j;
    let entries = (0..dim).filter(|s| s & bit != 0).map(|s| {
        let sign = c(parity_below(s, j), 0.0);
        if dagger {
            (s, s ^ bit, sign)
        } else {
            (s ^ bit, s, sign)
        }
    });
    FockOperator::from_triplets(dim, OperatorKind::Ladder, entries)
}

/// Ladder operator a = √(2E)·ã for `mode`, or its adjoint.
pub fn ladder(modes: &ModeSet, mode: Mode, dagger: bool) -> Result<FockOperator> {
    let j = modes.ordinal(mode)?;
    let scale = (2.0 * modes.energy(mode.k)).sqrt();
    Ok(canonical_ladder(modes.dim(), j, dagger).scale(c(scale, 0.0)))
}

/// coef · ã†_i ã_j built directly from the occupation bits.
fn hopping(dim: usize, i: usize, j: usize, coef: C64) -> impl Iterator<Item = (usize, usize, C64)> {
    (0..dim).filter_map(move |s| {
        if s & (1 << j) == 0 {
            return None;
        }
        let s1 = s ^ (1 << j);
        if s1 & (1 << i) != 0 {
            return None;
        }
        let sign = parity_below(s, j) * parity_below(s1, i);
        Some((s1 | (1 << i), s, coef * sign))
    })
}

fn occupation_diagonal(modes: &ModeSet, weight: impl Fn(Mode) -> f64) -> Vec<f64> {
    let m = modes.mode_count();
    let weights: Vec<f64> = (0..m).map(|j| weight(Mode::from_ordinal(j))).collect();
    (0..modes.dim())
        .map(|s| {
            (0..m)
                .filter(|j| s & (1 << j) != 0)
                .map(|j| weights[j])
                .sum()
        })
        .collect()
}

/// Normal-ordered H = Σ E(k)(ñ_a + ñ_b); diagonal in the occupation basis.
pub fn hamiltonian(modes: &ModeSet) -> FockOperator {
    let diag = occupation_diagonal(modes, |md| modes.energy(md.k));
    FockOperator::diagonal(
        diag.into_iter().map(|e| c(e, 0.0)).collect(),
        OperatorKind::Hamiltonian,
    )
}

/// Σ ñ over the modes selected by `species` (all modes for `None`).
pub fn number_operator(modes: &ModeSet, species: Option<Species>) -> FockOperator {
    let diag = occupation_diagonal(modes, |md| match species {
        Some(s) if s != md.species => 0.0,
        _ => 1.0,
    });
    FockOperator::diagonal(
        diag.into_iter().map(|n| c(n, 0.0)).collect(),
        OperatorKind::Number,
    )
}

/// Â = Σ_{p,λ} [ã†_λ(p)ã_{−λ}(−p) + b̃†_λ(p)b̃_{−λ}(−p)], summed term by term.
pub fn parity_generator(modes: &ModeSet) -> FockOperator {
    let dim = modes.dim();
    let entries = modes
        .modes()
        .flat_map(|md| {
            let target = modes.inverted_mode(md).ordinal();
            hopping(dim, md.ordinal(), target, ONE).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    FockOperator::from_triplets(dim, OperatorKind::Generator, entries)
}

/// Two-mode term c·ã†_i ã_j + c*·ã†_j ã_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub c: C64,
}

/// Hermitian generator made of pair terms plus a weighted number operator
/// Σ w_j ñ_j.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGenerator {
    pub mode_count: usize,
    pub pairs: Vec<PairTerm>,
    pub numbers: Vec<f64>,
}

/// Route used to exponentiate a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpRoute {
    /// Padé scaling-and-squaring on the dense matrix.
    Dense,
    /// Product of closed-form pair rotations; needs disjoint pairs.
    Sparse,
    /// Sparse when the generator is a disjoint pair sum, dense otherwise.
    Auto,
}

impl PairGenerator {
    pub fn dim(&self) -> usize {
        1 << self.mode_count
    }

    pub fn operator(&self) -> FockOperator {
        let dim = self.dim();
        let mut entries = Vec::new();
        for t in &self.pairs {
            entries.extend(hopping(dim, t.i, t.j, t.c));
            entries.extend(hopping(dim, t.j, t.i, t.c.conj()));
        }
        for s in 0..dim {
            let w: f64 = (0..self.mode_count)
                .filter(|j| s & (1 << j) != 0)
                .map(|j| self.numbers[j])
                .sum();
            entries.push((s, s, c(w, 0.0)));
        }
        FockOperator::from_triplets(dim, OperatorKind::Generator, entries)
    }

    fn validate_pairs(&self) -> Result<()> {
        let mut used = vec![false; self.mode_count];
        for t in &self.pairs {
            if t.i == t.j || t.i >= self.mode_count || t.j >= self.mode_count {
                return Err(Error::NotPairGenerator(format!(
                    "bad pair ({}, {})",
                    t.i, t.j
                )));
            }
            for x in [t.i, t.j] {
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::NotPairGenerator(format!(
                        "mode {x} appears in two pairs"
                    )));
                }
            }
            if self.numbers[t.i] != self.numbers[t.j] {
                return Err(Error::NotPairGenerator(format!(
                    "number weights differ on pair ({}, {})",
                    t.i, t.j
                )));
            }
        }
        Ok(())
    }

    /// exp(iθ·G).
    pub fn exp_i(&self, theta: f64, route: ExpRoute) -> Result<FockOperator> {
        let dense = match route {
            ExpRoute::Dense => true,
            ExpRoute::Sparse => false,
            ExpRoute::Auto => self.validate_pairs().is_err(),
        };
        if dense {
            Ok(exp_i_dense(&self.operator(), theta))
        } else {
            self.exp_i_sparse(theta)
        }
    }

    fn exp_i_sparse(&self, theta: f64) -> Result<FockOperator> {
        self.validate_pairs()?;
        let dim = self.dim();
        let phases = (0..dim)
            .map(|s| {
                let w: f64 = (0..self.mode_count)
                    .filter(|j| s & (1 << j) != 0)
                    .map(|j| self.numbers[j])
                    .sum();
                C64::from_polar(1.0, theta * w)
            })
            .collect();
        let mut u = FockOperator::diagonal(phases, OperatorKind::Unitary);
        for t in &self.pairs {
            let r = t.c.norm();
            if r == 0.0 {
                continue;
            }
            let (sin, cos) = (theta * r).sin_cos();
            let (bi, bj) = (1 << t.i, 1 << t.j);
            let mut entries = Vec::with_capacity(2 * dim);
            for s in 0..dim {
                let single = (s & bi != 0) != (s & bj != 0);
                if !single {
                    entries.push((s, s, ONE));
                    continue;
                }
                entries.push((s, s, c(cos, 0.0)));
                let k = I * sin / r;
                if s & bj != 0 {
                    entries.extend(hopping_one(s, t.i, t.j, k * t.c));
                } else {
                    entries.extend(hopping_one(s, t.j, t.i, k * t.c.conj()));
                }
            }
            let factor = FockOperator::from_triplets(dim, OperatorKind::Unitary, entries);
            u = factor.mul(&u).prune(PRUNE);
        }
        Ok(u.with_kind(OperatorKind::Unitary))
    }
}

fn hopping_one(s: usize, i: usize, j: usize, coef: C64) -> Option<(usize, usize, C64)> {
    if s & (1 << j) == 0 {
        return None;
    }
    let s1 = s ^ (1 << j);
    if s1 & (1 << i) != 0 {
        return None;
    }
    Some((
        s1 | (1 << i),
        s,
        coef * parity_below(s, j) * parity_below(s1, i),
    ))
}

/// exp(iθ·G) for a generator of any structure, via nalgebra's dense
/// matrix exponential.
pub fn exp_i_dense(g: &FockOperator, theta: f64) -> FockOperator {
    let m = g.to_dense() * c(0.0, theta);
    FockOperator::from_dense(&m.exp(), OperatorKind::Unitary)
}

/// Â as a pair generator: (k,↑,s) ↔ (−k,↓,s) for every k and species.
pub fn parity_pairs(modes: &ModeSet) -> PairGenerator {
    let pairs = modes
        .modes()
        .filter(|md| md.lam == Spin::Up)
        .map(|md| PairTerm {
            i: md.ordinal(),
            j: modes.inverted_mode(md).ordinal(),
            c: ONE,
        })
        .collect();
    PairGenerator {
        mode_count: modes.mode_count(),
        pairs,
        numbers: vec![0.0; modes.mode_count()],
    }
}

/// U_P(α) = exp(iα·Â).
pub fn parity_unitary(modes: &ModeSet, alpha: f64) -> Result<FockOperator> {
    parity_unitary_with(modes, alpha, ExpRoute::Auto)
}

pub fn parity_unitary_with(modes: &ModeSet, alpha: f64, route: ExpRoute) -> Result<FockOperator> {
    parity_pairs(modes).exp_i(alpha, route)
}

/// exp(i(π/2)Â)·exp(−iσα·N̂_a)·exp(+iσα·N̂_b) with dressing sign σ (+1
/// is the physical choice).
pub fn dressed_parity_unitary(modes: &ModeSet, alpha: f64, sign: f64) -> Result<FockOperator> {
    let u = parity_unitary(modes, FRAC_PI_2)?;
    let n = occupation_diagonal(modes, |md| match md.species {
        Species::A => -1.0,
        Species::B => 1.0,
    });
    let dressing = FockOperator::diagonal(
        n.into_iter()
            .map(|w| C64::from_polar(1.0, sign * alpha * w))
            .collect(),
        OperatorKind::Unitary,
    );
    Ok(u.mul(&dressing).with_kind(OperatorKind::Unitary))
}

/// U X U⁻¹ for a unitary U with precomputed adjoint.
pub struct Conjugation {
    u: FockOperator,
    u_dag: FockOperator,
}

impl Conjugation {
    pub fn new(u: FockOperator) -> Self {
        let u_dag = u.adjoint();
        Self { u, u_dag }
    }

    pub fn unitary(&self) -> &FockOperator {
        &self.u
    }

    pub fn apply(&self, x: &FockOperator) -> FockOperator {
        self.u.mul(x).mul(&self.u_dag)
    }
}

fn vacuum(dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[0] = ONE;
    v
}

fn vec_distance(x: &[C64], y: &[C64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Paper-normalized one-particle state x†(mode)|0⟩.
pub fn one_particle(modes: &ModeSet, mode: Mode) -> Result<Vec<C64>> {
    Ok(ladder(modes, mode, true)?.apply(&vacuum(modes.dim())))
}

/// Residual of all anticommutators: {a_i, a†_j}/2E − δ_ij, {a_i, a_j} and
/// {a†_i, a†_j}.
pub fn anticommutator_check(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let all: Vec<Mode> = modes.modes().collect();
    let ann = all
        .iter()
        .map(|&md| ladder(modes, md, false))
        .collect::<Result<Vec<_>>>()?;
    let cre = all
        .iter()
        .map(|&md| ladder(modes, md, true))
        .collect::<Result<Vec<_>>>()?;
    let id = FockOperator::identity(modes.dim());
    let mut worst = 0.0_f64;
    for i in 0..all.len() {
        for j in 0..all.len() {
            let mut mixed = ann[i].anticommutator(&cre[j]);
            if i == j {
                mixed = mixed
                    .scale(c(1.0 / (2.0 * modes.energy(all[i].k)), 0.0))
                    .sub(&id);
            }
            worst = worst
                .max(mixed.max_abs())
                .max(ann[i].anticommutator(&ann[j]).max_abs())
                .max(cre[i].anticommutator(&cre[j]).max_abs());
        }
    }
    Ok(CheckResult::within(worst, tol))
}

/// ‖[U_P(π/2), H]‖.
pub fn check_parity_hamiltonian(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_parity_hamiltonian_with(modes, ExpRoute::Auto, tol)
}

pub fn check_parity_hamiltonian_with(
    modes: &ModeSet,
    route: ExpRoute,
    tol: f64,
) -> Result<CheckResult> {
    check_tol(tol)?;
    let u = parity_unitary_with(modes, FRAC_PI_2, route)?;
    Ok(CheckResult::within(
        u.commutator(&hamiltonian(modes)).max_abs(),
        tol,
    ))
}

/// Largest difference between the dense and sparse exponentials of Â at
/// each α and of the tuned charge generator.
pub fn exp_route_check(modes: &ModeSet, alphas: &[f64], tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let mut gens: Vec<(PairGenerator, f64)> =
        alphas.iter().map(|&a| (parity_pairs(modes), a)).collect();
    gens.push((charge_generator(modes, [ONE, -ONE], 1.0), FRAC_PI_2));
    let mut worst = 0.0_f64;
    for (g, theta) in gens {
        let d = g.exp_i(theta, ExpRoute::Dense)?;
        let s = g.exp_i(theta, ExpRoute::Sparse)?;
        worst = worst.max(d.sub(&s).max_abs()).max(d.unitarity_residual());
    }
    Ok(CheckResult::within(worst, tol))
}

/// U_P(α) a U_P⁻¹ = cos α·a − i sin α·a' for every mode and its inverted
/// partner a' (the same relation holds for b). At α = π/2 this is
/// U_P a_λ(p) U_P⁻¹ = −i a_{−λ}(−p).
pub fn ladder_transform_check(modes: &ModeSet, alpha: f64, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let conj = Conjugation::new(parity_unitary(modes, alpha)?);
    let (s, co) = alpha.sin_cos();
    let mut worst = 0.0_f64;
    for md in modes.modes() {
        let x = ladder(modes, md, false)?;
        let y = ladder(modes, modes.inverted_mode(md), false)?;
        let expected = x.scale(c(co, 0.0)).add(&y.scale(c(0.0, -s)));
        worst = worst.max(conj.apply(&x).sub(&expected).max_abs());
    }
    Ok(CheckResult::within(worst, tol))
}

/// Tuned charge-conjugation unitary and the generator parameters found.
#[derive(Debug, Clone)]
pub struct ChargeConjugation {
    pub unitary: FockOperator,
    /// Pair phases (c_↑, c_↓).
    pub coeffs: [C64; 2],
    /// Weight of the number-operator term.
    pub kappa: f64,
    pub residual: f64,
    /// Candidates rejected before the accepted one.
    pub rejected: usize,
}

/// Ĉ = Σ_{p,λ} [c_λ ã†_λ(p) b̃_{−λ}(p) + h.c.] + κ(N̂_a + N̂_b).
pub fn charge_generator(modes: &ModeSet, coeffs: [C64; 2], kappa: f64) -> PairGenerator {
    let pairs = modes
        .modes()
        .filter(|md| md.species == Species::A)
        .map(|md| PairTerm {
            i: md.ordinal(),
            j: Mode::new(md.k, md.lam.flip(), Species::B).ordinal(),
            c: coeffs[spin_index(md.lam)],
        })
        .collect();
    PairGenerator {
        mode_count: modes.mode_count(),
        pairs,
        numbers: vec![kappa; modes.mode_count()],
    }
}

/// Expected charge-conjugation image of a ladder operator:
/// a_λ → (−1)^{1/2+λ} b_{−λ}, b_λ → (−1)^{1/2−λ} a_{−λ}, same momentum.
pub fn charge_image(md: Mode) -> (Mode, f64) {
    let sign = match md.species {
        Species::A => md.lam.sign_half_plus(),
        Species::B => md.lam.flip().sign_half_plus(),
    };
    (Mode::new(md.k, md.lam.flip(), md.species.other()), sign)
}

/// Worst deviation of U x U⁻¹ from the charge-conjugation table.
pub fn charge_table_residual(modes: &ModeSet, u: &FockOperator) -> Result<f64> {
    let conj = Conjugation::new(u.clone());
    let mut worst = 0.0_f64;
    for md in modes.modes() {
        let (target, sign) = charge_image(md);
        let x = ladder(modes, md, false)?;
        let y = ladder(modes, target, false)?.scale(c(sign, 0.0));
        worst = worst.max(conj.apply(&x).sub(&y).max_abs());
    }
    Ok(worst)
}

/// Search c_λ ∈ {±1, ±i}² and κ ∈ {0, 1} for U_C = exp(i(π/2)Ĉ)
/// reproducing the charge-conjugation table.
pub fn charge_unitary(modes: &ModeSet, tol: f64) -> Result<ChargeConjugation> {
    check_tol(tol)?;
    let phases = [ONE, -ONE, I, -I];
    let mut best = f64::INFINITY;
    let mut rejected = 0;
    for kappa in [0.0, 1.0] {
        for &cu in &phases {
            for &cd in &phases {
                let gen = charge_generator(modes, [cu, cd], kappa);
                let u = gen.exp_i(FRAC_PI_2, ExpRoute::Sparse)?;
                let residual = charge_table_residual(modes, &u)?;
                if residual < tol {
                    return Ok(ChargeConjugation {
                        unitary: u,
                        coeffs: [cu, cd],
                        kappa,
                        residual,
                        rejected,
                    });
                }
                best = best.min(residual);
                rejected += 1;
            }
        }
    }
    Err(Error::ChargeTuningFailed {
        best_residual: best,
    })
}

/// U_P U_C x†|0⟩ = −U_C U_P x†|0⟩ on every one-particle state, with
/// U_P U_C a†_λ(p)|0⟩ = i(−1)^{1/2+λ} b†_λ(−p)|0⟩ and
/// U_P U_C b†_λ(p)|0⟩ = i(−1)^{1/2−λ} a†_λ(−p)|0⟩.
pub fn check_pc_anticommutation(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let up = parity_unitary(modes, FRAC_PI_2)?;
    let uc = charge_unitary(modes, tol)?.unitary;
    let mut worst = 0.0_f64;
    for md in modes.modes() {
        let psi = one_particle(modes, md)?;
        let pc = up.apply(&uc.apply(&psi));
        let cp = uc.apply(&up.apply(&psi));
        let anti: Vec<C64> = pc.iter().zip(&cp).map(|(x, y)| x + y).collect();
        let (_, sign) = charge_image(md);
        let target = Mode::new(modes.partner(md.k), md.lam, md.species.other());
        let expected: Vec<C64> = one_particle(modes, target)?
            .iter()
            .map(|z| z * c(0.0, sign))
            .collect();
        worst = worst.max(anti.iter().map(|z| z.norm()).fold(0.0, f64::max));
        worst = worst.max(vec_distance(&pc, &expected));
    }
    Ok(CheckResult::within(worst, tol))
}

/// Whether particle and antiparticle acquire the same intrinsic parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityRelation {
    Same,
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseStudy {
    pub alpha: f64,
    pub a_phase: C64,
    pub b_phase: C64,
    pub relation: ParityRelation,
    /// Worst deviation of U x U⁻¹ from phase · x' over all modes.
    pub residual: f64,
}

/// Phases of U a_λ(p) U⁻¹ = a_phase·a_{−λ}(−p) and
/// U b_λ(p) U⁻¹ = b_phase·b_{−λ}(−p) for the dressed U_P(α).
pub fn phase_study(modes: &ModeSet, alpha: f64) -> Result<PhaseStudy> {
    phase_study_with(modes, alpha, 1.0)
}

fn phase_study_with(modes: &ModeSet, alpha: f64, sign: f64) -> Result<PhaseStudy> {
    if modes.is_empty() {
        return Err(Error::MomentumNotInGrid);
    }
    let conj = Conjugation::new(dressed_parity_unitary(modes, alpha, sign)?);
    let mut phase = [ZERO; 2];
    let mut pairs = Vec::new();
    for md in modes.modes() {
        let x = conj.apply(&ladder(modes, md, false)?);
        let y = ladder(modes, modes.inverted_mode(md), false)?;
        pairs.push((md.species, x, y));
    }
    for s in Species::BOTH {
        let (_, x, y) = pairs
            .iter()
            .find(|p| p.0 == s)
            .expect("every grid momentum has both species");
        phase[s.index()] = y.inner(x) / y.inner(y);
    }
    let residual = pairs
        .iter()
        .map(|(s, x, y)| x.sub(&y.scale(phase[s.index()])).max_abs())
        .fold(0.0, f64::max);
    let relation = if (phase[0] - phase[1]).norm() < 1e-10 {
        ParityRelation::Same
    } else {
        ParityRelation::Opposite
    };
    Ok(PhaseStudy {
        alpha,
        a_phase: phase[0],
        b_phase: phase[1],
        relation,
        residual,
    })
}

/// Field weight √m / 2E of the mode expansion.
fn field_weight(p: &FourMomentum) -> f64 {
    p.m.sqrt() / (2.0 * p.e)
}

/// Component α of Σ_λ w [x_λ a_λ(k) + y_λ b†_λ(k)] with supplied spinor
/// factors x, y per helicity.
fn field_component(
    modes: &ModeSet,
    k: usize,
    x: &[Vector4; 2],
    y: &[Vector4; 2],
    weight: C64,
    alpha: usize,
) -> Result<FockOperator> {
    let mut out = FockOperator::zeros(modes.dim(), OperatorKind::Field);
    for lam in Spin::BOTH {
        let li = spin_index(lam);
        let a = ladder(modes, Mode::new(k, lam, Species::A), false)?;
        let b = ladder(modes, Mode::new(k, lam, Species::B), true)?;
        out = out
            .add(&a.scale(weight * x[li][alpha]))
            .add(&b.scale(weight * y[li][alpha]));
    }
    Ok(out.with_kind(OperatorKind::Field))
}

/// Mode-by-mode field parity: for each grid momentum p,
/// U Ψ_p U⁻¹ = e^{iα} γ⁰ Ψ_{−p} where Ψ_p = Σ_λ w[u_λ(p) a_λ(p) + v_λ(p) b†_λ(p)]
/// and the right side carries spinors at the inverted angles of p.
pub fn check_field_operator_parity(modes: &ModeSet, alpha: f64, tol: f64) -> Result<CheckResult> {
    field_parity_with_dressing(modes, alpha, 1.0, tol)
}

/// [`check_field_operator_parity`] with an explicit dressing sign; −1 is a
/// deliberately wrong convention.
pub fn field_parity_with_dressing(
    modes: &ModeSet,
    alpha: f64,
    sign: f64,
    tol: f64,
) -> Result<CheckResult> {
    check_tol(tol)?;
    let g = GammaSet::spinorial();
    let conj = Conjugation::new(dressed_parity_unitary(modes, alpha, sign)?);
    let phase = C64::from_polar(1.0, alpha);
    let mut worst = 0.0_f64;
    for k in 0..modes.len() {
        let p = modes.momentum(k);
        let pt = p.inverted();
        let w = c(field_weight(p), 0.0);
        let spinors = |q: &FourMomentum, kind| {
            Spin::BOTH.map(|l| helicity_four_spinor(q, l, kind).components)
        };
        let (u, v) = (spinors(p, Kind::U), spinors(p, Kind::V));
        let gu = spinors(&pt, Kind::U).map(|s| g.parity * s);
        let gv = spinors(&pt, Kind::V).map(|s| g.parity * s);
        for a in 0..4 {
            let lhs = conj.apply(&field_component(modes, k, &u, &v, w, a)?);
            let rhs = field_component(modes, modes.partner(k), &gu, &gv, w * phase, a)?;
            worst = worst.max(lhs.sub(&rhs).max_abs());
        }
    }
    Ok(CheckResult::within(worst, tol))
}

/// The four spinor components of each doublet field.
#[derive(Debug, Clone)]
pub struct BwwDoublet {
    pub psi1: [FockOperator; 4],
    pub psi2: [FockOperator; 4],
}

/// Single-momentum terms of
/// Ψ₁ = w[(u↑a↑ + v↑b↑)e⁻ + (u↑a†↑ + v↑b†↑)e⁺],
/// Ψ₂ = w[(u↓a↓ − v↓b↓)e⁻ + (u↓a†↓ − v↓b†↓)e⁺]
/// with plane-wave phases e⁻ and e⁺ supplied by the caller.
pub fn bww_doublet(
    modes: &ModeSet,
    p: &FourMomentum,
    e_minus: C64,
    e_plus: C64,
) -> Result<BwwDoublet> {
    let k = modes.find(p).ok_or(Error::MomentumNotInGrid)?;
    let w = c(field_weight(p), 0.0);
    let build = |lam: Spin, sign: f64| -> Result<[FockOperator; 4]> {
        let u = helicity_four_spinor(p, lam, Kind::U).components;
        let v = helicity_four_spinor(p, lam, Kind::V).components;
        let a = ladder(modes, Mode::new(k, lam, Species::A), false)?;
        let ad = a.adjoint();
        let b = ladder(modes, Mode::new(k, lam, Species::B), false)?;
        let bd = b.adjoint();
        let comp = |i: usize| {
            let vs = v[i] * sign;
            a.scale(w * u[i] * e_minus)
                .add(&b.scale(w * vs * e_minus))
                .add(&ad.scale(w * u[i] * e_plus))
                .add(&bd.scale(w * vs * e_plus))
                .with_kind(OperatorKind::Field)
        };
        Ok([comp(0), comp(1), comp(2), comp(3)])
    };
    Ok(BwwDoublet {
        psi1: build(Spin::Up, 1.0)?,
        psi2: build(Spin::Down, -1.0)?,
    })
}

/// Coefficient of one ladder operator in an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderTerm {
    pub mode: Mode,
    pub dagger: bool,
    pub coeff: C64,
}

/// Expand an operator in the paper-normalized ladder operators. Returns the
/// nonzero terms and the residual of the reconstruction; a small residual
/// means the operator is linear in the ladders.
pub fn ladder_content(modes: &ModeSet, op: &FockOperator) -> Result<(Vec<LadderTerm>, f64)> {
    let mut terms = Vec::new();
    let mut rebuilt = FockOperator::zeros(modes.dim(), OperatorKind::Field);
    for mode in modes.modes() {
        for dagger in [false, true] {
            let l = ladder(modes, mode, dagger)?;
            let coeff = l.inner(op) / l.inner(&l);
            if coeff.norm() > 1e-14 {
                rebuilt = rebuilt.add(&l.scale(coeff));
                terms.push(LadderTerm {
                    mode,
                    dagger,
                    coeff,
                });
            }
        }
    }
    let residual = op.sub(&rebuilt).max_abs();
    Ok((terms, residual))
}

/// Structural checks on the doublet: each component is linear in exactly
/// four ladder operators of the right helicity, and U_P(π/2) carries the
/// (a↑, b↑) content of Ψ₁ at p onto (a↓, b↓) at −p with phase −i on the
/// annihilators and +i on the creators.
pub fn bww_structure_check(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let conj = Conjugation::new(parity_unitary(modes, FRAC_PI_2)?);
    let mut worst = 0.0_f64;
    for k in 0..modes.len() {
        let p = *modes.momentum(k);
        let em = C64::from_polar(1.0, -0.3);
        let d = bww_doublet(modes, &p, em, em.conj())?;
        for (field, lam) in [(&d.psi1, Spin::Up), (&d.psi2, Spin::Down)] {
            for comp in field.iter() {
                let (terms, res) = ladder_content(modes, comp)?;
                worst = worst.max(res);
                let bad = terms.iter().any(|t| t.mode.k != k || t.mode.lam != lam);
                if bad || terms.len() > 4 {
                    worst = f64::INFINITY;
                }
                if lam == Spin::Down {
                    continue;
                }
                let (image, res) = ladder_content(modes, &conj.apply(comp))?;
                worst = worst.max(res);
                for t in &terms {
                    let target = modes.inverted_mode(t.mode);
                    let phase = if t.dagger { I } else { -I };
                    let found = image
                        .iter()
                        .find(|s| s.mode == target && s.dagger == t.dagger)
                        .map(|s| s.coeff)
                        .unwrap_or(ZERO);
                    worst = worst.max((found - phase * t.coeff).norm());
                }
                if image.len() != terms.len() {
                    worst = f64::INFINITY;
                }
            }
        }
    }
    Ok(CheckResult::within(worst, tol))
}

/// U_P|0⟩ = |0⟩ and U_C|0⟩ = |0⟩.
pub fn vacuum_invariance_check(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let vac = vacuum(modes.dim());
    let up = parity_unitary(modes, FRAC_PI_2)?;
    let uc = charge_unitary(modes, tol)?.unitary;
    let r = vec_distance(&up.apply(&vac), &vac).max(vec_distance(&uc.apply(&vac), &vac));
    Ok(CheckResult::within(r, tol))
}

/// [U_P, N̂] = 0 and U_P² = −1 on every one-particle state.
pub fn parity_number_and_square_check(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let up = parity_unitary(modes, FRAC_PI_2)?;
    let mut worst = up.commutator(&number_operator(modes, None)).max_abs();
    for md in modes.modes() {
        let psi = one_particle(modes, md)?;
        let twice = up.apply(&up.apply(&psi));
        let neg: Vec<C64> = psi.iter().map(|z| -z).collect();
        worst = worst.max(vec_distance(&twice, &neg));
    }
    Ok(CheckResult::within(worst, tol))
}

/// Hermiticity of H and Â, unitarity of U_P(π/2), and [Â, H] = 0.
pub fn operator_properties_check(modes: &ModeSet, tol: f64) -> Result<CheckResult> {
    check_tol(tol)?;
    let h = hamiltonian(modes);
    let a = parity_generator(modes);
    let u = parity_unitary(modes, FRAC_PI_2)?;
    let r = h
        .hermiticity_residual()
        .max(a.hermiticity_residual())
        .max(u.unitarity_residual())
        .max(a.commutator(&h).max_abs());
    Ok(CheckResult::within(r, tol))
}
