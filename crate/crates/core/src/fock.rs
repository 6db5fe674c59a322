//! Truncated bosonic Fock spaces over a finite table of momentum modes.
//!
//! Continuum momentum integrals become sums over the [`ModeTable`] and
//! `δ³(p − p′)` becomes a Kronecker delta between table entries. Each mode
//! holds at most `n_max` quanta, so `[a, a†] = 1` only below the cutoff; at
//! `n = n_max` the commutator is `−n_max` (the truncation defect).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::classical::{effective_momenta, ClassicalError, PlaneWaveSpec, CONSTRAINT_TOL};
use crate::convention::Convention;
use crate::four_vector::FourVector;
use crate::sparse::OperatorMatrix;

/// Largest basis the engine will enumerate.
pub const MAX_DIM: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Four complex components `a = 1..4`.
    FourComponent,
    /// Two complex components `α = 1, 2` weighted by `cos²Θ₀` and `sin²Θ₀`.
    TwoComponent,
}

impl Scheme {
    pub fn component_count(self) -> u8 {
        match self {
            Scheme::FourComponent => 4,
            Scheme::TwoComponent => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::FourComponent => "four",
            Scheme::TwoComponent => "two",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    /// Created by `a†`.
    Particle,
    /// Created by `b†`.
    Antiparticle,
}

impl Species {
    pub fn charge_sign(self) -> f64 {
        match self {
            Species::Particle => 1.0,
            Species::Antiparticle => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Species::Particle => "particle",
            Species::Antiparticle => "antiparticle",
        }
    }
}

/// Which species a generated table contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeciesSet {
    ParticlesOnly,
    Both,
}

/// The four two-component product states: particle or antiparticle in each sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoComponentState {
    /// `|k⁽¹⁾, k⁽²⁾⟩`
    ParticleParticle,
    /// `|k⁽¹⁾, k̃⁽²⁾⟩`
    ParticleAntiparticle,
    /// `|k̃⁽¹⁾, k⁽²⁾⟩`
    AntiparticleParticle,
    /// `|k̃⁽¹⁾, k̃⁽²⁾⟩`
    AntiparticleAntiparticle,
}

impl TwoComponentState {
    pub const ALL: [TwoComponentState; 4] = [
        TwoComponentState::ParticleParticle,
        TwoComponentState::ParticleAntiparticle,
        TwoComponentState::AntiparticleParticle,
        TwoComponentState::AntiparticleAntiparticle,
    ];

    /// Species in sectors `α = 1` and `α = 2`.
    pub fn species(self) -> [Species; 2] {
        use Species::*;
        match self {
            TwoComponentState::ParticleParticle => [Particle, Particle],
            TwoComponentState::ParticleAntiparticle => [Particle, Antiparticle],
            TwoComponentState::AntiparticleParticle => [Antiparticle, Particle],
            TwoComponentState::AntiparticleAntiparticle => [Antiparticle, Antiparticle],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FockError {
    InvalidMass(f64),
    InvalidCutoff(u32),
    DimensionOverflow { modes: usize, n_max: u32 },
    UnknownMode(usize),
    /// Component index outside `1..=4` (four-component) or `1..=2` (two-component).
    InvalidIndex(u8),
    DuplicateMode(usize),
    OffShell { entry: usize, residual: f64 },
    SchemeMismatch { expected: Scheme, found: Scheme },
    CutoffExceeded { mode: usize, count: u32, n_max: u32 },
    NoSuchMode { index: u8, species: Species },
    Classical(ClassicalError),
}

impl fmt::Display for FockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockError::InvalidMass(m) => write!(f, "mode table mass must be positive, got {m}"),
            FockError::InvalidCutoff(n) => write!(f, "occupation cutoff must be at least 1, got {n}"),
            FockError::DimensionOverflow { modes, n_max } => write!(
                f,
                "{modes} modes with cutoff {n_max} exceed the {MAX_DIM}-state limit"
            ),
            FockError::UnknownMode(m) => write!(f, "mode {m} is not in the table"),
            FockError::InvalidIndex(i) => write!(f, "component index {i} is out of range for the scheme"),
            FockError::DuplicateMode(i) => write!(f, "mode table entry {i} duplicates an earlier entry"),
            FockError::OffShell { entry, residual } => {
                write!(f, "mode table entry {entry} is off shell by {residual:e}")
            }
            FockError::SchemeMismatch { expected, found } => write!(
                f,
                "operation needs a {}-component table, got {}-component",
                expected.as_str(),
                found.as_str()
            ),
            FockError::CutoffExceeded { mode, count, n_max } => {
                write!(f, "occupation {count} of mode {mode} exceeds the cutoff {n_max}")
            }
            FockError::NoSuchMode { index, species } => {
                write!(f, "no {} mode with component index {index}", species.as_str())
            }
            FockError::Classical(e) => write!(f, "{e}"),
        }
    }
}

impl From<ClassicalError> for FockError {
    fn from(e: ClassicalError) -> Self {
        FockError::Classical(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeEntry {
    /// `a ∈ 1..=4` or `α ∈ 1..=2`, depending on the table's scheme.
    pub index: u8,
    pub species: Species,
    pub momentum: FourVector,
}

impl ModeEntry {
    /// `|p⁰|`
    pub fn energy(&self) -> f64 {
        self.momentum.t.abs()
    }
}

/// Position of an entry in a [`ModeTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct ModeTable {
    m: f64,
    scheme: Scheme,
    entries: Vec<ModeEntry>,
}

impl ModeTable {
    pub fn new(m: f64, scheme: Scheme, entries: Vec<ModeEntry>) -> Result<Self, FockError> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(FockError::InvalidMass(m));
        }
        let tol = CONSTRAINT_TOL * (m * m).max(1.0);
        for (i, e) in entries.iter().enumerate() {
            if e.index == 0 || e.index > scheme.component_count() {
                return Err(FockError::InvalidIndex(e.index));
            }
            if !e.momentum.is_finite() {
                return Err(FockError::Classical(ClassicalError::NonFinite));
            }
            let residual = (e.momentum.square() - m * m).abs();
            if residual > tol {
                return Err(FockError::OffShell { entry: i, residual });
            }
            let duplicate = entries[..i]
                .iter()
                .any(|o| o.index == e.index && o.species == e.species && o.momentum == e.momentum);
            if duplicate {
                return Err(FockError::DuplicateMode(i));
            }
        }
        Ok(Self { m, scheme, entries })
    }

    /// Modes `a = 1..4` at the effective momenta of a valid plane-wave spec.
    pub fn four_component(spec: &PlaneWaveSpec, species: SpeciesSet) -> Result<Self, FockError> {
        let momenta = effective_momenta(spec)?;
        Self::new(spec.m, Scheme::FourComponent, expand(&momenta, species))
    }

    /// Modes `α = 1, 2` at momenta `k⁽¹⁾`, `k⁽²⁾` (each on the `m` mass shell).
    pub fn two_component(
        m: f64,
        k1: FourVector,
        k2: FourVector,
        species: SpeciesSet,
    ) -> Result<Self, FockError> {
        Self::new(m, Scheme::TwoComponent, expand(&[k1, k2], species))
    }

    /// Adds the spatial mirror image `(p⁰, −p)` of every entry not already present.
    ///
    /// Equal-time field commutators vanish only on reflection-symmetric mode sets.
    pub fn with_reflections(&self) -> Result<Self, FockError> {
        self.with_images(|e| ModeEntry {
            momentum: FourVector::new(e.momentum.t, -e.momentum.x1, -e.momentum.x2, -e.momentum.x3),
            ..e
        })
    }

    /// Adds the other species at the same momentum for every entry not already paired.
    ///
    /// `[Φ, Φ†]` cancels between particle and antiparticle terms, so it needs both.
    pub fn with_partners(&self) -> Result<Self, FockError> {
        self.with_images(|e| ModeEntry {
            species: match e.species {
                Species::Particle => Species::Antiparticle,
                Species::Antiparticle => Species::Particle,
            },
            ..e
        })
    }

    fn with_images(&self, image: impl Fn(ModeEntry) -> ModeEntry) -> Result<Self, FockError> {
        let mut entries = self.entries.clone();
        for e in &self.entries {
            let im = image(*e);
            let present = entries
                .iter()
                .any(|o| o.index == im.index && o.species == im.species && o.momentum == im.momentum);
            if !present {
                entries.push(im);
            }
        }
        Self::new(self.m, self.scheme, entries)
    }

    /// The entries whose component index is listed, in table order.
    pub fn restrict(&self, indices: &[u8]) -> Result<Self, FockError> {
        let entries = self.entries.iter().filter(|e| indices.contains(&e.index)).copied().collect();
        Self::new(self.m, self.scheme, entries)
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn entries(&self) -> &[ModeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: ModeId) -> Result<&ModeEntry, FockError> {
        self.entries.get(id.0).ok_or(FockError::UnknownMode(id.0))
    }

    /// First mode with the given component index and species.
    pub fn find(&self, index: u8, species: Species) -> Option<ModeId> {
        self.entries
            .iter()
            .position(|e| e.index == index && e.species == species)
            .map(ModeId)
    }

    /// First mode matching index, species and momentum exactly.
    pub fn find_exact(&self, index: u8, species: Species, momentum: FourVector) -> Option<ModeId> {
        self.entries
            .iter()
            .position(|e| e.index == index && e.species == species && e.momentum == momentum)
            .map(ModeId)
    }

    pub fn ids_for(&self, index: u8) -> impl Iterator<Item = ModeId> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.index == index)
            .map(|(i, _)| ModeId(i))
    }
}

fn expand(momenta: &[FourVector], species: SpeciesSet) -> Vec<ModeEntry> {
    let mut entries = Vec::new();
    for (i, p) in momenta.iter().enumerate() {
        let index = i as u8 + 1;
        entries.push(ModeEntry { index, species: Species::Particle, momentum: *p });
        if species == SpeciesSet::Both {
            entries.push(ModeEntry { index, species: Species::Antiparticle, momentum: *p });
        }
    }
    entries
}

/// The occupation-number basis `{0..=n_max}^modes`, ordered lexicographically
/// with the first mode most significant. The vacuum is basis state 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSpace {
    modes: ModeTable,
    n_max: u32,
    dim: usize,
    strides: Vec<usize>,
}

pub fn build_fock(modes: ModeTable, n_max: u32) -> Result<FockSpace, FockError> {
    if n_max < 1 {
        return Err(FockError::InvalidCutoff(n_max));
    }
    let count = modes.len();
    let base = n_max as usize + 1;
    let overflow = FockError::DimensionOverflow { modes: count, n_max };
    let mut dim: usize = 1;
    for _ in 0..count {
        dim = dim.checked_mul(base).ok_or(overflow.clone())?;
        if dim > MAX_DIM {
            return Err(overflow);
        }
    }
    let mut strides = vec![1usize; count];
    for i in (0..count.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * base;
    }
    Ok(FockSpace { modes, n_max, dim, strides })
}

impl FockSpace {
    pub fn modes(&self) -> &ModeTable {
        &self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn vacuum_index(&self) -> usize {
        0
    }

    pub fn occupation(&self, basis_index: usize, mode: ModeId) -> u32 {
        ((basis_index / self.strides[mode.0]) % (self.n_max as usize + 1)) as u32
    }

    pub fn occupations(&self, basis_index: usize) -> Vec<u32> {
        (0..self.mode_count()).map(|m| self.occupation(basis_index, ModeId(m))).collect()
    }

    /// Inverse of [`FockSpace::occupations`]; `None` if any entry exceeds the cutoff.
    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        if occupations.len() != self.mode_count() || occupations.iter().any(|&n| n > self.n_max) {
            return None;
        }
        Some(occupations.iter().zip(self.strides.iter()).map(|(&n, &s)| n as usize * s).sum())
    }

    pub fn basis_vector(&self, basis_index: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        v[basis_index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        self.basis_vector(0)
    }

    fn check_mode(&self, mode: ModeId) -> Result<(), FockError> {
        self.modes.entry(mode).map(|_| ())
    }

    fn require_scheme(&self, expected: Scheme) -> Result<(), FockError> {
        if self.modes.scheme == expected {
            Ok(())
        } else {
            Err(FockError::SchemeMismatch { expected, found: self.modes.scheme })
        }
    }
}

/// `a|n⟩ = √n |n−1⟩` on one mode, identity on the rest.
pub fn annihilation(fs: &FockSpace, mode: ModeId) -> Result<OperatorMatrix, FockError> {
    fs.check_mode(mode)?;
    let stride = fs.strides[mode.0];
    let triplets = (0..fs.dim).filter_map(|col| {
        let n = fs.occupation(col, mode);
        (n > 0).then(|| (col - stride, col, Complex64::new(libm::sqrt(n as f64), 0.0)))
    });
    Ok(OperatorMatrix::from_triplets(fs.dim, triplets))
}

/// Conjugate transpose of [`annihilation`]; `a†|n_max⟩ = 0`.
pub fn creation(fs: &FockSpace, mode: ModeId) -> Result<OperatorMatrix, FockError> {
    Ok(annihilation(fs, mode)?.adjoint())
}

/// `a†a` for one mode.
pub fn number(fs: &FockSpace, mode: ModeId) -> Result<OperatorMatrix, FockError> {
    Ok(creation(fs, mode)?.matmul(&annihilation(fs, mode)?))
}

/// `[a(m1), a†(m2)]` on the full truncated space.
pub fn commutator_check(fs: &FockSpace, m1: ModeId, m2: ModeId) -> Result<OperatorMatrix, FockError> {
    let a = annihilation(fs, m1)?;
    let ad = creation(fs, m2)?;
    Ok(a.commutator(&ad))
}

/// Summary of `[a(m1), a†(m2)]` against `δ_{m1 m2}·1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CcrReport {
    pub same_mode: bool,
    /// Largest deviation from `δ·1` over states with both modes below the cutoff.
    pub sub_cutoff_deviation: f64,
    /// Distinct diagonal values found on states where `m1` is at the cutoff.
    pub top_defect: Vec<f64>,
    /// Largest deviation anywhere outside the sub-cutoff block.
    pub outside_deviation_max: f64,
    /// The full commutator has no stored entries (distinct modes).
    pub exactly_zero: bool,
}

impl CcrReport {
    /// Identity below the cutoff and `−n_max` on the top level (same mode), or exactly zero.
    pub fn holds(&self, n_max: u32, tol: f64) -> bool {
        if self.same_mode {
            self.sub_cutoff_deviation <= tol
                && self.top_defect.iter().all(|v| (v + n_max as f64).abs() <= tol)
        } else {
            self.exactly_zero
        }
    }
}

pub fn ccr_report(fs: &FockSpace, m1: ModeId, m2: ModeId) -> Result<CcrReport, FockError> {
    let c = commutator_check(fs, m1, m2)?;
    let same_mode = m1 == m2;
    let below = |i: usize| fs.occupation(i, m1) < fs.n_max && fs.occupation(i, m2) < fs.n_max;
    let mut sub_cutoff_deviation = 0.0f64;
    let mut outside_deviation_max = 0.0f64;
    let mut top_defect: Vec<f64> = Vec::new();
    for r in 0..fs.dim {
        let expected_diag = if same_mode { 1.0 } else { 0.0 };
        let inside_row = below(r);
        if inside_row {
            let d = (c.get(r, r) - Complex64::new(expected_diag, 0.0)).norm();
            sub_cutoff_deviation = sub_cutoff_deviation.max(d);
        }
        for &(col, v) in c.row(r) {
            if inside_row && below(col) {
                if col != r {
                    sub_cutoff_deviation = sub_cutoff_deviation.max(v.norm());
                }
            } else {
                outside_deviation_max = outside_deviation_max.max((v - Complex64::new(expected_diag, 0.0)).norm());
            }
        }
        if same_mode && fs.occupation(r, m1) == fs.n_max {
            let v = c.get(r, r).re;
            if !top_defect.iter().any(|t| (t - v).abs() <= 1e-12) {
                top_defect.push(v);
            }
        }
    }
    Ok(CcrReport {
        same_mode,
        sub_cutoff_deviation,
        top_defect,
        outside_deviation_max,
        exactly_zero: c.is_zero(),
    })
}

fn weighted_number_sum<F>(fs: &FockSpace, weight: F) -> Result<OperatorMatrix, FockError>
where
    F: Fn(&ModeEntry) -> f64,
{
    let mut total = OperatorMatrix::zeros(fs.dim);
    for (i, entry) in fs.modes.entries.iter().enumerate() {
        let w = weight(entry);
        if w == 0.0 {
            continue;
        }
        let n = number(fs, ModeId(i))?;
        total = &total + &n.scale(Complex64::new(w, 0.0));
    }
    Ok(total)
}

/// Normal-ordered energy `w Σ_a Σ_p |p⁰| (a†a + b†b)` of the four-component scheme.
pub fn hamiltonian4(fs: &FockSpace, convention: Convention) -> Result<OperatorMatrix, FockError> {
    fs.require_scheme(Scheme::FourComponent)?;
    let w = convention.component_weight();
    weighted_number_sum(fs, |e| w * e.energy())
}

/// Charge `w Σ_a Σ_p (a†a − b†b)` of the four-component scheme.
pub fn charge4(fs: &FockSpace, convention: Convention) -> Result<OperatorMatrix, FockError> {
    fs.require_scheme(Scheme::FourComponent)?;
    let w = convention.component_weight();
    weighted_number_sum(fs, |e| w * e.species.charge_sign())
}

/// `cos²Θ₀` for sector 1, `sin²Θ₀` for sector 2.
pub fn sector_weight(index: u8, theta0: f64) -> f64 {
    if index == 1 {
        let c = libm::cos(theta0);
        c * c
    } else {
        let s = libm::sin(theta0);
        s * s
    }
}

/// Two-component energy `cos²Θ₀ Σ k⁰(a†a + b†b)|₁ + sin²Θ₀ Σ k⁰(a†a + b†b)|₂`.
pub fn hamiltonian2(fs: &FockSpace, theta0: f64) -> Result<OperatorMatrix, FockError> {
    fs.require_scheme(Scheme::TwoComponent)?;
    weighted_number_sum(fs, |e| sector_weight(e.index, theta0) * e.energy())
}

/// Two-component charge, weighted like [`hamiltonian2`].
pub fn charge2(fs: &FockSpace, theta0: f64) -> Result<OperatorMatrix, FockError> {
    fs.require_scheme(Scheme::TwoComponent)?;
    weighted_number_sum(fs, |e| sector_weight(e.index, theta0) * e.species.charge_sign())
}

/// Normalized occupation state with the listed modes filled; repeated modes add up.
pub fn make_state(fs: &FockSpace, filling: &[(ModeId, u32)]) -> Result<Vec<Complex64>, FockError> {
    let mut occ = vec![0u32; fs.mode_count()];
    for &(mode, count) in filling {
        fs.check_mode(mode)?;
        occ[mode.0] += count;
        if occ[mode.0] > fs.n_max {
            return Err(FockError::CutoffExceeded { mode: mode.0, count: occ[mode.0], n_max: fs.n_max });
        }
    }
    let index = fs.index_of(&occ).expect("occupations checked against the cutoff");
    Ok(fs.basis_vector(index))
}

/// One quantum of the given component index and species, e.g. `a⁽¹⁾†|0⟩`.
pub fn single_particle_state(
    fs: &FockSpace,
    index: u8,
    species: Species,
) -> Result<Vec<Complex64>, FockError> {
    let mode = fs.modes.find(index, species).ok_or(FockError::NoSuchMode { index, species })?;
    make_state(fs, &[(mode, 1)])
}

/// The two-component product state with one quantum in each sector.
pub fn two_component_product_state(
    fs: &FockSpace,
    which: TwoComponentState,
) -> Result<Vec<Complex64>, FockError> {
    fs.require_scheme(Scheme::TwoComponent)?;
    let [s1, s2] = which.species();
    let m1 = fs.modes.find(1, s1).ok_or(FockError::NoSuchMode { index: 1, species: s1 })?;
    let m2 = fs.modes.find(2, s2).ok_or(FockError::NoSuchMode { index: 2, species: s2 })?;
    make_state(fs, &[(m1, 1), (m2, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{solve_k, Sign};

    fn spec() -> PlaneWaveSpec {
        let theta = FourVector::new(0.0, 0.3, 0.4, 0.0);
        let k0 = solve_k(1.0, theta, [0.4, -0.3, 0.0], 0.5).unwrap();
        let k1 = solve_k(1.0, theta, [0.0, 0.0, 1.0], 0.9).unwrap();
        PlaneWaveSpec { m: 1.0, theta, theta0: 0.2, k0, k1, s0: Sign::Plus, s1: Sign::Plus }
    }

    fn rest_table(count: usize) -> ModeTable {
        let entries = (0..count)
            .map(|i| ModeEntry {
                index: (i % 4) as u8 + 1,
                species: if i < 4 { Species::Particle } else { Species::Antiparticle },
                momentum: FourVector::new(1.0, 0.0, 0.0, 0.0),
            })
            .collect();
        ModeTable::new(1.0, Scheme::FourComponent, entries).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_fock(rest_table(1), 3).unwrap().dim(), 4);
        assert_eq!(build_fock(rest_table(4), 2).unwrap().dim(), 81);
        assert_eq!(build_fock(rest_table(8), 3).unwrap().dim(), 65536);
        assert!(matches!(build_fock(rest_table(8), 9), Err(FockError::DimensionOverflow { .. })));
        assert_eq!(build_fock(rest_table(2), 0), Err(FockError::InvalidCutoff(0)));
    }

    #[test]
    fn basis_is_lexicographic() {
        let fs = build_fock(rest_table(3), 2).unwrap();
        let all: Vec<Vec<u32>> = (0..fs.dim()).map(|i| fs.occupations(i)).collect();
        assert_eq!(all[0], vec![0, 0, 0]);
        assert_eq!(all[1], vec![0, 0, 1]);
        assert_eq!(all[3], vec![0, 1, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, occ) in all.iter().enumerate() {
            assert_eq!(fs.index_of(occ), Some(i));
        }
        assert_eq!(fs.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn table_validation() {
        let off = ModeEntry { index: 1, species: Species::Particle, momentum: FourVector::new(1.0, 0.1, 0.0, 0.0) };
        assert!(matches!(
            ModeTable::new(1.0, Scheme::FourComponent, vec![off]),
            Err(FockError::OffShell { entry: 0, .. })
        ));
        let ok = ModeEntry { momentum: FourVector::new(1.0, 0.0, 0.0, 0.0), ..off };
        assert_eq!(
            ModeTable::new(1.0, Scheme::FourComponent, vec![ok, ok]),
            Err(FockError::DuplicateMode(1))
        );
        let bad_index = ModeEntry { index: 3, ..ok };
        assert_eq!(
            ModeTable::new(1.0, Scheme::TwoComponent, vec![bad_index]),
            Err(FockError::InvalidIndex(3))
        );
        let t = ModeTable::four_component(&spec(), SpeciesSet::Both).unwrap();
        assert_eq!(t.len(), 8);
        let mirrored = t.with_reflections().unwrap();
        assert_eq!(mirrored.len(), 16);
        let pair = mirrored.restrict(&[2, 4]).unwrap();
        assert_eq!(pair.len(), 8);
        assert!(pair.entries().iter().all(|e| e.index == 2 || e.index == 4));
        let particles = ModeTable::four_component(&spec(), SpeciesSet::ParticlesOnly).unwrap();
        let completed = particles.with_partners().unwrap();
        assert_eq!(completed.len(), 8);
        assert!(t.entries().iter().all(|e| completed.find_exact(e.index, e.species, e.momentum).is_some()));
        assert_eq!(t.with_partners().unwrap(), t);
    }

    #[test]
    fn ladder_action() {
        let fs = build_fock(rest_table(1), 2).unwrap();
        let a = annihilation(&fs, ModeId(0)).unwrap();
        assert_eq!(a.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(a.get(1, 2), Complex64::new(libm::sqrt(2.0), 0.0));
        assert_eq!(a.nnz(), 2);
        assert!(a.apply(&fs.vacuum()).iter().all(|c| c.norm() == 0.0));
        let n = number(&fs, ModeId(0)).unwrap();
        let two = fs.basis_vector(2);
        let out = n.apply(&two);
        assert!((out[2].re - 2.0).abs() < 1e-15);
        assert_eq!(creation(&fs, ModeId(0)).unwrap(), a.adjoint());
        assert_eq!(annihilation(&fs, ModeId(3)), Err(FockError::UnknownMode(3)));
    }

    #[test]
    fn ccr_same_and_distinct_modes() {
        let fs = build_fock(rest_table(3), 3).unwrap();
        let same = ccr_report(&fs, ModeId(1), ModeId(1)).unwrap();
        assert!(same.sub_cutoff_deviation <= 1e-12);
        assert_eq!(same.top_defect.len(), 1);
        assert!((same.top_defect[0] + 3.0).abs() < 1e-12);
        assert!(same.holds(3, 1e-12));
        let distinct = ccr_report(&fs, ModeId(0), ModeId(2)).unwrap();
        assert!(distinct.exactly_zero);
        assert!(distinct.holds(3, 0.0));
    }

    #[test]
    fn four_component_spectrum() {
        let table = ModeTable::four_component(&spec(), SpeciesSet::Both).unwrap();
        let energies: Vec<f64> = table.entries().iter().map(ModeEntry::energy).collect();
        let fs = build_fock(table, 1).unwrap();
        let h = hamiltonian4(&fs, Convention::Paper).unwrap();
        let q = charge4(&fs, Convention::Paper).unwrap();
        assert!(h.is_diagonal() && q.is_diagonal());
        assert_eq!(h.get(0, 0).norm(), 0.0);

        let a1 = single_particle_state(&fs, 1, Species::Particle).unwrap();
        let idx = a1.iter().position(|c| c.re == 1.0).unwrap();
        assert!((h.get(idx, idx).re - 0.25 * energies[0]).abs() < 1e-12);
        assert!((q.get(idx, idx).re - 0.25).abs() < 1e-15);

        let b1 = single_particle_state(&fs, 1, Species::Antiparticle).unwrap();
        let idx = b1.iter().position(|c| c.re == 1.0).unwrap();
        assert!((q.get(idx, idx).re + 0.25).abs() < 1e-15);

        let a1 = fs.modes().find(1, Species::Particle).unwrap();
        let b3 = fs.modes().find(3, Species::Antiparticle).unwrap();
        let pair = make_state(&fs, &[(a1, 1), (b3, 1)]).unwrap();
        let idx = pair.iter().position(|c| c.re == 1.0).unwrap();
        let expected = 0.25 * (energies[a1.0] + energies[b3.0]);
        assert!((h.get(idx, idx).re - expected).abs() < 1e-12);
        let b1 = fs.modes().find(1, Species::Antiparticle).unwrap();
        let neutral = make_state(&fs, &[(a1, 1), (b1, 1)]).unwrap();
        let idx = neutral.iter().position(|c| c.re == 1.0).unwrap();
        assert!(q.get(idx, idx).norm() < 1e-15);

        assert!(h.commutator(&q).is_zero());
        let rescaled = charge4(&fs, Convention::Rescaled).unwrap();
        assert_eq!(rescaled.get(idx, idx).norm(), 0.0);
        assert!(matches!(hamiltonian2(&fs, 0.3), Err(FockError::SchemeMismatch { .. })));
    }

    #[test]
    fn two_component_weights() {
        let k1 = FourVector::new(libm::sqrt(1.25), 0.5, 0.0, 0.0);
        let k2 = FourVector::new(libm::sqrt(1.09), 0.0, -0.3, 0.0);
        let table = ModeTable::two_component(1.0, k1, k2, SpeciesSet::Both).unwrap();
        let fs = build_fock(table, 1).unwrap();
        let a1 = fs.modes().find(1, Species::Particle).unwrap();
        let b2 = fs.modes().find(2, Species::Antiparticle).unwrap();
        let idx_a1 = fs.index_of(&occ_with(&fs, a1)).unwrap();
        let idx_b2 = fs.index_of(&occ_with(&fs, b2)).unwrap();

        let quarter = core::f64::consts::FRAC_PI_4;
        let h = hamiltonian2(&fs, quarter).unwrap();
        let q = charge2(&fs, quarter).unwrap();
        assert!((h.get(idx_a1, idx_a1).re - 0.5 * k1.t).abs() < 1e-12);
        assert!((q.get(idx_a1, idx_a1).re - 0.5).abs() < 1e-12);

        let h0 = hamiltonian2(&fs, 0.0).unwrap();
        let a2 = fs.modes().find(2, Species::Particle).unwrap();
        let idx_a2 = fs.index_of(&occ_with(&fs, a2)).unwrap();
        assert_eq!(h0.get(idx_a2, idx_a2).norm(), 0.0);

        let q_half = charge2(&fs, core::f64::consts::FRAC_PI_2).unwrap();
        assert!((q_half.get(idx_b2, idx_b2).re + 1.0).abs() < 1e-12);
        assert!(matches!(charge4(&fs, Convention::Paper), Err(FockError::SchemeMismatch { .. })));
    }

    fn occ_with(fs: &FockSpace, mode: ModeId) -> Vec<u32> {
        let mut occ = vec![0; fs.mode_count()];
        occ[mode.0] = 1;
        occ
    }

    #[test]
    fn named_states() {
        let table = ModeTable::four_component(&spec(), SpeciesSet::ParticlesOnly).unwrap();
        let fs = build_fock(table, 2).unwrap();
        for a in 1..=4u8 {
            let v = single_particle_state(&fs, a, Species::Particle).unwrap();
            let idx = v.iter().position(|c| c.re == 1.0).unwrap();
            let mode = fs.modes().find(a, Species::Particle).unwrap();
            assert_eq!(fs.occupation(idx, mode), 1);
            assert_eq!(fs.modes().entry(mode).unwrap().momentum, effective_momenta(&spec()).unwrap()[a as usize - 1]);
        }
        assert!(matches!(
            make_state(&fs, &[(ModeId(0), 3)]),
            Err(FockError::CutoffExceeded { mode: 0, count: 3, n_max: 2 })
        ));
        assert!(matches!(
            single_particle_state(&fs, 1, Species::Antiparticle),
            Err(FockError::NoSuchMode { .. })
        ));

        let k = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let two = ModeTable::two_component(1.0, k, k, SpeciesSet::Both).unwrap();
        let fs2 = build_fock(two, 1).unwrap();
        let state = two_component_product_state(&fs2, TwoComponentState::ParticleAntiparticle).unwrap();
        let idx = state.iter().position(|c| c.re == 1.0).unwrap();
        assert_eq!(fs2.occupations(idx), vec![1, 0, 0, 1]);
    }
}
