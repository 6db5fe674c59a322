//! Operator-valued component fields, their conjugate momenta, and the
//! reconstruction of the classical quaternionic wave from vacuum matrix
//! elements.
//!
//! `Φ̂⁽ᵃ⁾(x) = Σ_p N_p [e^{−ip·x} a_p + e^{+ip·x} b_p†]` with
//! `N_p = 1/√((2π)³ |2p⁰|)`, the sum running over the table entries with
//! component index `a`. The conjugate momentum is `Π̂⁽ᵃ⁾ = ∂_t Φ̂⁽ᵃ⁾`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::classical::{effective_momenta, PlaneWaveSpec, Sign};
use crate::fock::{
    annihilation, creation, FockError, FockSpace, ModeEntry, ModeId, Scheme, Species,
    TwoComponentState,
};
use crate::four_vector::FourVector;
use crate::quaternion::{Quaternion, SymplecticPair};
use crate::sparse::{norm_sqr, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(2π)^{-3/2}`
pub fn continuum_factor() -> f64 {
    1.0 / libm::pow(2.0 * PI, 1.5)
}

/// `N_p = 1/√((2π)³ |2p⁰|)`
pub fn mode_normalization(p: FourVector) -> f64 {
    continuum_factor() / libm::sqrt(2.0 * p.t.abs())
}

/// `e^{iφ}`
fn phase(phi: f64) -> Complex64 {
    Complex64::new(libm::cos(phi), libm::sin(phi))
}

fn check_index(fs: &FockSpace, index: u8) -> Result<(), FockError> {
    if index == 0 || index > fs.modes().scheme().component_count() {
        return Err(FockError::InvalidIndex(index));
    }
    if fs.modes().ids_for(index).next().is_none() {
        return Err(FockError::NoSuchMode { index, species: Species::Particle });
    }
    Ok(())
}

fn modes_of(fs: &FockSpace, index: u8) -> impl Iterator<Item = (ModeId, ModeEntry)> + '_ {
    fs.modes()
        .ids_for(index)
        .map(move |id| (id, *fs.modes().entry(id).expect("id from the table")))
}

/// Weighted ladder sum: particle modes get `a_p` with `coeff(p, Particle)`,
/// antiparticle modes get `b_p†` with `coeff(p, Antiparticle)`.
fn ladder_sum<F>(fs: &FockSpace, index: u8, coeff: F) -> Result<OperatorMatrix, FockError>
where
    F: Fn(&ModeEntry) -> Complex64,
{
    check_index(fs, index)?;
    let mut total = OperatorMatrix::zeros(fs.dim());
    for (id, entry) in modes_of(fs, index) {
        let ladder = match entry.species {
            Species::Particle => annihilation(fs, id)?,
            Species::Antiparticle => creation(fs, id)?,
        };
        total = &total + &ladder.scale(coeff(&entry));
    }
    Ok(total)
}

fn field_coefficient(entry: &ModeEntry, x: FourVector) -> Complex64 {
    let n = mode_normalization(entry.momentum);
    let px = entry.momentum.dot(x);
    match entry.species {
        Species::Particle => phase(-px) * n,
        Species::Antiparticle => phase(px) * n,
    }
}

/// `Φ̂⁽ᵃ⁾(x)` as a matrix on the truncated space.
pub fn field_operator(fs: &FockSpace, index: u8, x: FourVector) -> Result<OperatorMatrix, FockError> {
    ladder_sum(fs, index, |e| field_coefficient(e, x))
}

/// `Π̂⁽ᵃ⁾(x) = ∂_t Φ̂⁽ᵃ⁾(x)`: coefficients pick up `−ip⁰` (particles) or `+ip⁰` (antiparticles).
pub fn conjugate_momentum(fs: &FockSpace, index: u8, x: FourVector) -> Result<OperatorMatrix, FockError> {
    ladder_sum(fs, index, |e| {
        let dt = match e.species {
            Species::Particle => Complex64::new(0.0, -e.momentum.t),
            Species::Antiparticle => Complex64::new(0.0, e.momentum.t),
        };
        field_coefficient(e, x) * dt
    })
}

/// Mode-sum delta `Δ(x − y)` of component `a`, so that
/// `[Φ̂⁽ᵃ⁾(x), Π̂⁽ᵃ⁾†(y)] = iΔ(x − y)` below the cutoff.
pub fn mode_delta(fs: &FockSpace, index: u8, x: FourVector, y: FourVector) -> Result<Complex64, FockError> {
    check_index(fs, index)?;
    let r = x - y;
    Ok(modes_of(fs, index)
        .map(|(_, e)| {
            let n = mode_normalization(e.momentum);
            let w = n * n * e.momentum.t;
            let pr = e.momentum.dot(r);
            match e.species {
                Species::Particle => phase(-pr) * w,
                Species::Antiparticle => phase(pr) * w,
            }
        })
        .sum())
}

/// The nine equal-time commutator families between component fields and momenta.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldFamily {
    PhiPhi,
    PhiPhiDag,
    PhiDagPhiDag,
    PiPi,
    PiPiDag,
    PiDagPiDag,
    PhiPi,
    PhiPiDag,
    PhiDagPi,
}

impl FieldFamily {
    pub const ALL: [FieldFamily; 9] = [
        FieldFamily::PhiPhi,
        FieldFamily::PhiPhiDag,
        FieldFamily::PhiDagPhiDag,
        FieldFamily::PiPi,
        FieldFamily::PiPiDag,
        FieldFamily::PiDagPiDag,
        FieldFamily::PhiPi,
        FieldFamily::PhiPiDag,
        FieldFamily::PhiDagPi,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FieldFamily::PhiPhi => "[Φ, Φ]",
            FieldFamily::PhiPhiDag => "[Φ, Φ†]",
            FieldFamily::PhiDagPhiDag => "[Φ†, Φ†]",
            FieldFamily::PiPi => "[Π, Π]",
            FieldFamily::PiPiDag => "[Π, Π†]",
            FieldFamily::PiDagPiDag => "[Π†, Π†]",
            FieldFamily::PhiPi => "[Φ, Π]",
            FieldFamily::PhiPiDag => "[Φ, Π†]",
            FieldFamily::PhiDagPi => "[Φ†, Π]",
        }
    }

    /// `(momentum?, dagger?)` for the left and right operands.
    fn operands(self) -> [(bool, bool); 2] {
        match self {
            FieldFamily::PhiPhi => [(false, false), (false, false)],
            FieldFamily::PhiPhiDag => [(false, false), (false, true)],
            FieldFamily::PhiDagPhiDag => [(false, true), (false, true)],
            FieldFamily::PiPi => [(true, false), (true, false)],
            FieldFamily::PiPiDag => [(true, false), (true, true)],
            FieldFamily::PiDagPiDag => [(true, true), (true, true)],
            FieldFamily::PhiPi => [(false, false), (true, false)],
            FieldFamily::PhiPiDag => [(false, false), (true, true)],
            FieldFamily::PhiDagPi => [(false, true), (true, false)],
        }
    }
}

fn operand(fs: &FockSpace, (momentum, dagger): (bool, bool), index: u8, x: FourVector) -> Result<OperatorMatrix, FockError> {
    let op = if momentum { conjugate_momentum(fs, index, x)? } else { field_operator(fs, index, x)? };
    Ok(if dagger { op.adjoint() } else { op })
}

/// The commutator of the family with components `a` at `x` and `b` at `y`.
pub fn field_commutator(
    fs: &FockSpace,
    family: FieldFamily,
    a: u8,
    b: u8,
    x: FourVector,
    y: FourVector,
) -> Result<OperatorMatrix, FockError> {
    let [l, r] = family.operands();
    Ok(operand(fs, l, a, x)?.commutator(&operand(fs, r, b, y)?))
}

/// Expected equal-time value as a multiple of the identity, assuming a reflection-symmetric table.
pub fn expected_field_commutator(
    fs: &FockSpace,
    family: FieldFamily,
    a: u8,
    b: u8,
    x: FourVector,
    y: FourVector,
) -> Result<Complex64, FockError> {
    let i = Complex64::new(0.0, 1.0);
    if a != b {
        return Ok(ZERO);
    }
    Ok(match family {
        FieldFamily::PhiPiDag => i * mode_delta(fs, a, x, y)?,
        FieldFamily::PhiDagPi => i * mode_delta(fs, a, x, y)?.conj(),
        _ => ZERO,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyCheck {
    pub family: FieldFamily,
    pub a: u8,
    pub b: u8,
    pub expected: Complex64,
    /// Largest deviation from `expected · 1` on states with every mode below the cutoff.
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn check_field_family(
    fs: &FockSpace,
    family: FieldFamily,
    a: u8,
    b: u8,
    x: FourVector,
    y: FourVector,
    tol: f64,
) -> Result<FamilyCheck, FockError> {
    let c = field_commutator(fs, family, a, b, x, y)?;
    let expected = expected_field_commutator(fs, family, a, b, x, y)?;
    let below = |i: usize| fs.occupations(i).iter().all(|&n| n < fs.n_max());
    let mut max_deviation = 0.0f64;
    for r in (0..fs.dim()).filter(|&r| below(r)) {
        max_deviation = max_deviation.max((c.get(r, r) - expected).norm());
        for &(col, v) in c.row(r) {
            if col != r && below(col) {
                max_deviation = max_deviation.max(v.norm());
            }
        }
    }
    Ok(FamilyCheck { family, a, b, expected, max_deviation, pass: max_deviation <= tol })
}

/// `⟨0| Φ̂⁽ᵝ⁾(x) a_p† |0⟩ = δ^{αβ} N_p e^{−ip·x}` for a particle mode `p` of index `α`.
pub fn matrix_element(fs: &FockSpace, p_mode: ModeId, beta: u8, x: FourVector) -> Result<Complex64, FockError> {
    let entry = fs.modes().entry(p_mode)?;
    if entry.species != Species::Particle {
        return Err(FockError::NoSuchMode { index: entry.index, species: Species::Particle });
    }
    let phi = field_operator(fs, beta, x)?;
    let ket = creation(fs, p_mode)?.apply(&fs.vacuum());
    Ok(phi.apply(&ket)[fs.vacuum_index()])
}

/// `Φ̂⁽ᵃ⁾†(x)|0⟩` (daggered) or `Φ̂⁽ᵃ⁾(x)|0⟩`, built directly from the one-quantum states.
pub fn field_on_vacuum(fs: &FockSpace, index: u8, daggered: bool, x: FourVector) -> Result<Vec<Complex64>, FockError> {
    check_index(fs, index)?;
    let mut out = vec![ZERO; fs.dim()];
    let mut occ = vec![0u32; fs.mode_count()];
    for (id, e) in modes_of(fs, index) {
        // Φ̂†|0⟩ only creates particles and Φ̂|0⟩ only antiparticles.
        let wanted = if daggered { Species::Particle } else { Species::Antiparticle };
        if e.species != wanted {
            continue;
        }
        let n = mode_normalization(e.momentum);
        occ[id.0] = 1;
        let idx = fs.index_of(&occ).expect("one quantum is below any cutoff");
        occ[id.0] = 0;
        out[idx] += phase(e.momentum.dot(x)) * n;
    }
    Ok(out)
}

/// Dagger pattern of the two symplectic parts of the quaternionic state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `[½(Φ̂⁽¹⁾† + Φ̂⁽²⁾†) + (1/2i)(Φ̂⁽³⁾† − Φ̂⁽⁴⁾†) j]|0⟩`
    V1,
    /// complex part undaggered
    V2,
    /// `j` part undaggered
    V3,
    /// both parts undaggered
    V4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::V1, Variant::V2, Variant::V3, Variant::V4];

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Variant::V1),
            2 => Some(Variant::V2),
            3 => Some(Variant::V3),
            4 => Some(Variant::V4),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Variant::V1 => 1,
            Variant::V2 => 2,
            Variant::V3 => 3,
            Variant::V4 => 4,
        }
    }

    /// Whether the complex and the `j` parts use daggered fields.
    pub fn daggered(self) -> [bool; 2] {
        match self {
            Variant::V1 => [true, true],
            Variant::V2 => [false, true],
            Variant::V3 => [true, false],
            Variant::V4 => [false, false],
        }
    }

    /// Signs `s₀, s₁` of the classical wave this variant reproduces.
    pub fn signs(self) -> [Sign; 2] {
        self.daggered().map(|d| if d { Sign::Plus } else { Sign::Minus })
    }
}

/// A quaternionic ket stored as its two symplectic parts, `|z₀⟩ + |z₁⟩ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionFieldState {
    pub z0: Vec<Complex64>,
    pub z1: Vec<Complex64>,
}

impl QuaternionFieldState {
    pub fn norm_sqr_parts(&self) -> [f64; 2] {
        [norm_sqr(&self.z0), norm_sqr(&self.z1)]
    }
}

/// The four-component state of the given variant at `x`.
///
/// Component `a` carries the constant phase `e^{±iΘ₀}` (`+` for `a = 1, 3`)
/// so that the offset of `Θ = θ·x + Θ₀` survives quantization.
pub fn quaternion_field_state(
    fs: &FockSpace,
    theta0: f64,
    x: FourVector,
    variant: Variant,
) -> Result<QuaternionFieldState, FockError> {
    require_scheme(fs, Scheme::FourComponent)?;
    let [d0, d1] = variant.daggered();
    let c_plus = phase(theta0);
    let c_minus = phase(-theta0);
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5);

    let f1 = field_on_vacuum(fs, 1, d0, x)?;
    let f2 = field_on_vacuum(fs, 2, d0, x)?;
    let f3 = field_on_vacuum(fs, 3, d1, x)?;
    let f4 = field_on_vacuum(fs, 4, d1, x)?;
    let z0 = f1.iter().zip(&f2).map(|(a, b)| half * (c_plus * a + c_minus * b)).collect();
    let z1 = f3.iter().zip(&f4).map(|(a, b)| half_over_i * (c_plus * a - c_minus * b)).collect();
    Ok(QuaternionFieldState { z0, z1 })
}

fn require_scheme(fs: &FockSpace, expected: Scheme) -> Result<(), FockError> {
    let found = fs.modes().scheme();
    if found == expected {
        Ok(())
    } else {
        Err(FockError::SchemeMismatch { expected, found })
    }
}

/// The four one-quantum modes at the effective momenta of `spec`.
fn spec_modes(fs: &FockSpace, spec: &PlaneWaveSpec, species: Species) -> Result<[ModeId; 4], FockError> {
    let momenta = effective_momenta(spec)?;
    let mut ids = [ModeId(0); 4];
    for (a, p) in momenta.iter().enumerate() {
        let index = a as u8 + 1;
        ids[a] = fs
            .modes()
            .find_exact(index, species, *p)
            .ok_or(FockError::NoSuchMode { index, species })?;
    }
    Ok(ids)
}

/// `⟨0|ĉ|ψ⟩` with `ĉ = Σ_α √|2p⁰⁽ᵅ⁾| c⁽ᵅ⁾`.
fn state_projection(fs: &FockSpace, ids: &[ModeId; 4], psi: &[Complex64]) -> Complex64 {
    let mut occ = vec![0u32; fs.mode_count()];
    ids.iter()
        .map(|&id| {
            let e = fs.modes().entry(id).expect("id from the table");
            occ[id.0] = 1;
            let idx = fs.index_of(&occ).expect("one quantum is below any cutoff");
            occ[id.0] = 0;
            psi[idx] * libm::sqrt(2.0 * e.energy())
        })
        .sum()
}

/// `⟨p|Φ̂⟩` for the variant at `x`, as a quaternion.
///
/// Daggered parts are read with `⟨p| = ⟨0|â`; undaggered parts hold
/// antiparticles and are read as the conjugate of `⟨0|b̂|ψ⟩`. The result
/// matches `(2π)^{-3/2}` times [`classical_variant`].
pub fn reconstruct_wave(
    fs: &FockSpace,
    spec: &PlaneWaveSpec,
    x: FourVector,
    variant: Variant,
) -> Result<Quaternion, FockError> {
    let state = quaternion_field_state(fs, spec.theta0, x, variant)?;
    let particles = spec_modes(fs, spec, Species::Particle)?;
    let [d0, d1] = variant.daggered();
    let antiparticles = if d0 && d1 { None } else { Some(spec_modes(fs, spec, Species::Antiparticle)?) };
    let read = |daggered: bool, psi: &[Complex64]| {
        if daggered {
            state_projection(fs, &particles, psi)
        } else {
            state_projection(fs, antiparticles.as_ref().expect("looked up above"), psi).conj()
        }
    };
    let z0 = read(d0, &state.z0);
    let z1 = read(d1, &state.z1);
    Ok(Quaternion::from_symplectic(SymplecticPair::new(z0, z1)))
}

/// The classical wave with `s₀, s₁` set by the variant's dagger pattern.
pub fn classical_variant(spec: &PlaneWaveSpec, x: FourVector, variant: Variant) -> Quaternion {
    let [s0, s1] = variant.signs();
    PlaneWaveSpec { s0, s1, ..*spec }.wave_unchecked(x)
}

/// Largest componentwise gap between the reconstruction and `(2π)^{-3/2}` times the classical wave.
pub fn reconstruction_deviation(
    fs: &FockSpace,
    spec: &PlaneWaveSpec,
    x: FourVector,
    variant: Variant,
) -> Result<(Quaternion, Quaternion, f64), FockError> {
    let quantum = reconstruct_wave(fs, spec, x, variant)?;
    let classical = classical_variant(spec, x, variant).scale(continuum_factor());
    Ok((classical, quantum, (quantum - classical).max_abs()))
}

/// `[cos Θ₀ φ̂⁽¹⁾(†) + sin Θ₀ φ̂⁽²⁾(†) j]|0⟩` with each field ket normalized.
pub fn two_component_states(
    fs: &FockSpace,
    theta0: f64,
    x: FourVector,
    which: TwoComponentState,
) -> Result<QuaternionFieldState, FockError> {
    require_scheme(fs, Scheme::TwoComponent)?;
    let [s1, s2] = which.species();
    let part = |index: u8, species: Species, weight: f64| -> Result<Vec<Complex64>, FockError> {
        let ket = field_on_vacuum(fs, index, species == Species::Particle, x)?;
        let n = libm::sqrt(norm_sqr(&ket));
        if n == 0.0 {
            return Err(FockError::NoSuchMode { index, species });
        }
        Ok(ket.into_iter().map(|c| c * (weight / n)).collect())
    };
    Ok(QuaternionFieldState {
        z0: part(1, s1, libm::cos(theta0))?,
        z1: part(2, s2, libm::sin(theta0))?,
    })
}
