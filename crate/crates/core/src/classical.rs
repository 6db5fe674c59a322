//! Classical plane-wave solutions of the quaternionic Klein–Gordon equation.
//!
//! A solution is `Φ(x) = cos Θ(x) φ⁽⁰⁾(x) + sin Θ(x) φ⁽¹⁾(x) j` with
//! `Θ(x) = θ·x + Θ₀` and `φ⁽ᵅ⁾(x) = exp(s_α i k⁽ᵅ⁾·x)`. It solves the field
//! equation iff, for both `α`,
//!
//! * `k⁽ᵅ⁾·k⁽ᵅ⁾ + θ·θ = m²` (mass shell), and
//! * `θ·k⁽ᵅ⁾ = 0` (orthogonality).
//!
//! All contractions use the `(+, −, −, −)` metric of [`minkowski_dot`].

use core::fmt;

use num_complex::Complex64;

use crate::four_vector::{dot3, minkowski_dot, FourVector, METRIC};
use crate::quaternion::{Quaternion, SymplecticPair};

/// Relative tolerance of every constraint check, scaled by `max(1, m²)`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i8(s: i8) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveSpec {
    pub m: f64,
    pub theta: FourVector,
    pub theta0: f64,
    pub k0: FourVector,
    pub k1: FourVector,
    pub s0: Sign,
    pub s1: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassicalError {
    NonFinite,
    NonPositiveMass(f64),
    /// The mass-shell or orthogonality constraints fail; the largest residual is attached.
    ConstraintViolation(f64),
    NoRealSolution,
    DegenerateTheta,
    InvalidDirection,
    InvalidStep(f64),
}

impl fmt::Display for ClassicalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalError::NonFinite => write!(f, "non-finite value in plane-wave parameters"),
            ClassicalError::NonPositiveMass(m) => write!(f, "mass must be positive, got {m}"),
            ClassicalError::ConstraintViolation(r) => {
                write!(f, "plane-wave constraints violated (largest residual {r:e})")
            }
            ClassicalError::NoRealSolution => {
                write!(f, "no real momentum satisfies the constraints for this spatial part")
            }
            ClassicalError::DegenerateTheta => write!(f, "θ is a null vector; the constraint system is singular"),
            ClassicalError::InvalidDirection => write!(f, "spatial direction must be a finite non-zero 3-vector"),
            ClassicalError::InvalidStep(h) => write!(f, "finite-difference step must be positive, got {h}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintReport {
    /// `|k⁽ᵅ⁾·k⁽ᵅ⁾ + θ·θ − m²|` for `α = 0, 1`.
    pub mass_shell: [f64; 2],
    /// `|θ·k⁽ᵅ⁾|` for `α = 0, 1`.
    pub orthogonality: [f64; 2],
    pub mass_shell_ok: [bool; 2],
    pub orthogonality_ok: [bool; 2],
    /// `|p⁽ᵃ⁾·p⁽ᵃ⁾ − m²|` for the four effective momenta.
    pub on_shell: [f64; 4],
    pub effective_momenta: [FourVector; 4],
    pub tolerance: f64,
    pub pass: bool,
}

impl ConstraintReport {
    pub fn max_residual(&self) -> f64 {
        self.mass_shell
            .iter()
            .chain(self.orthogonality.iter())
            .fold(0.0f64, |m, r| m.max(*r))
    }

    /// Names of the failed constraints, in a fixed order.
    pub fn violations(&self) -> impl Iterator<Item = &'static str> + '_ {
        const NAMES: [&str; 4] = ["mass_shell_k0", "mass_shell_k1", "orthogonality_k0", "orthogonality_k1"];
        let flags = [
            self.mass_shell_ok[0],
            self.mass_shell_ok[1],
            self.orthogonality_ok[0],
            self.orthogonality_ok[1],
        ];
        NAMES.into_iter().zip(flags).filter(|(_, ok)| !ok).map(|(n, _)| n)
    }
}

impl PlaneWaveSpec {
    /// The complex Klein–Gordon limit: `θ = 0`, `Θ₀ = 0`, both components at rest.
    pub fn at_rest(m: f64) -> Self {
        let k = FourVector::new(m, 0.0, 0.0, 0.0);
        Self {
            m,
            theta: FourVector::ZERO,
            theta0: 0.0,
            k0: k,
            k1: k,
            s0: Sign::Plus,
            s1: Sign::Plus,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite()
            && self.theta0.is_finite()
            && self.theta.is_finite()
            && self.k0.is_finite()
            && self.k1.is_finite()
    }

    pub fn k(&self, alpha: usize) -> FourVector {
        if alpha == 0 {
            self.k0
        } else {
            self.k1
        }
    }

    pub fn sign(&self, alpha: usize) -> Sign {
        if alpha == 0 {
            self.s0
        } else {
            self.s1
        }
    }

    /// `Θ(x) = θ·x + Θ₀`
    pub fn phase(&self, x: FourVector) -> f64 {
        minkowski_dot(self.theta, x) + self.theta0
    }

    /// `φ⁽ᵅ⁾(x) = exp(s_α i k⁽ᵅ⁾·x)`
    pub fn component(&self, alpha: usize, x: FourVector) -> Complex64 {
        let arg = self.sign(alpha).value() * minkowski_dot(self.k(alpha), x);
        Complex64::new(libm::cos(arg), libm::sin(arg))
    }

    /// The wave at `x` with no constraint checks.
    pub fn wave_unchecked(&self, x: FourVector) -> Quaternion {
        let big_theta = self.phase(x);
        let z0 = self.component(0, x) * libm::cos(big_theta);
        let z1 = self.component(1, x) * libm::sin(big_theta);
        Quaternion::from_symplectic(SymplecticPair::new(z0, z1))
    }

    /// `p⁽¹⁾ = k⁽⁰⁾ + θ`, `p⁽²⁾ = k⁽⁰⁾ − θ`, `p⁽³⁾ = k⁽¹⁾ + θ`, `p⁽⁴⁾ = k⁽¹⁾ − θ`, unchecked.
    pub fn effective_momenta_unchecked(&self) -> [FourVector; 4] {
        [
            self.k0 + self.theta,
            self.k0 - self.theta,
            self.k1 + self.theta,
            self.k1 - self.theta,
        ]
    }
}

fn check_inputs(spec: &PlaneWaveSpec) -> Result<(), ClassicalError> {
    if !spec.is_finite() {
        return Err(ClassicalError::NonFinite);
    }
    if spec.m <= 0.0 {
        return Err(ClassicalError::NonPositiveMass(spec.m));
    }
    Ok(())
}

pub fn validate_constraints(spec: &PlaneWaveSpec) -> Result<ConstraintReport, ClassicalError> {
    validate_constraints_with_tol(spec, CONSTRAINT_TOL)
}

/// As [`validate_constraints`] with a caller-chosen relative tolerance.
pub fn validate_constraints_with_tol(
    spec: &PlaneWaveSpec,
    rel_tol: f64,
) -> Result<ConstraintReport, ClassicalError> {
    check_inputs(spec)?;
    let m2 = spec.m * spec.m;
    let tolerance = rel_tol * m2.max(1.0);
    let theta_sq = spec.theta.square();

    let mut mass_shell = [0.0; 2];
    let mut orthogonality = [0.0; 2];
    for alpha in 0..2 {
        let k = spec.k(alpha);
        mass_shell[alpha] = (k.square() + theta_sq - m2).abs();
        orthogonality[alpha] = minkowski_dot(spec.theta, k).abs();
    }
    let effective_momenta = spec.effective_momenta_unchecked();
    let on_shell = effective_momenta.map(|p| (p.square() - m2).abs());
    let mass_shell_ok = mass_shell.map(|r| r <= tolerance);
    let orthogonality_ok = orthogonality.map(|r| r <= tolerance);
    let pass = mass_shell_ok.iter().chain(orthogonality_ok.iter()).all(|ok| *ok);

    Ok(ConstraintReport {
        mass_shell,
        orthogonality,
        mass_shell_ok,
        orthogonality_ok,
        on_shell,
        effective_momenta,
        tolerance,
        pass,
    })
}

fn require_valid(spec: &PlaneWaveSpec) -> Result<ConstraintReport, ClassicalError> {
    let report = validate_constraints(spec)?;
    if report.pass {
        Ok(report)
    } else {
        Err(ClassicalError::ConstraintViolation(report.max_residual()))
    }
}

/// The four on-shell momenta `k⁽ᵅ⁾ ± θ`, indexed `a = 1..4` as `[p1, p2, p3, p4]`.
pub fn effective_momenta(spec: &PlaneWaveSpec) -> Result<[FourVector; 4], ClassicalError> {
    Ok(require_valid(spec)?.effective_momenta)
}

/// Finds the time component of `k` with spatial part `mag · dir` such that
/// `k·k = m² − θ·θ` and `θ·k = 0`.
///
/// With `θ⁰ = 0` the orthogonality condition is purely spatial and the energy
/// follows from the mass shell. With `θ⁰ ≠ 0` orthogonality fixes `k⁰`, so the
/// mass shell holds only for one magnitude along each direction; any other
/// magnitude is `NoRealSolution`.
pub fn solve_k(
    m: f64,
    theta: FourVector,
    dir: [f64; 3],
    mag: f64,
) -> Result<FourVector, ClassicalError> {
    if !(m.is_finite() && mag.is_finite() && theta.is_finite() && dir.iter().all(|d| d.is_finite())) {
        return Err(ClassicalError::NonFinite);
    }
    if m <= 0.0 {
        return Err(ClassicalError::NonPositiveMass(m));
    }
    let dir_norm = libm::sqrt(dot3(dir, dir));
    let spatial = if mag == 0.0 {
        [0.0; 3]
    } else if dir_norm == 0.0 {
        return Err(ClassicalError::InvalidDirection);
    } else {
        dir.map(|d| d / dir_norm * mag)
    };
    let m2 = m * m;
    let tol = CONSTRAINT_TOL * m2.max(1.0);
    let theta_sq = theta.square();
    let spatial_sq = dot3(spatial, spatial);
    let theta_dot_spatial = dot3(theta.spatial(), spatial);

    if theta.t == 0.0 {
        if theta_dot_spatial.abs() > tol {
            return Err(ClassicalError::NoRealSolution);
        }
        let energy_sq = m2 - theta_sq + spatial_sq;
        if energy_sq < 0.0 {
            return Err(ClassicalError::NoRealSolution);
        }
        return Ok(FourVector::from_parts(libm::sqrt(energy_sq), spatial));
    }
    if theta_sq.abs() <= tol * (theta.max_abs() * theta.max_abs()).max(1.0) {
        return Err(ClassicalError::DegenerateTheta);
    }
    let energy = theta_dot_spatial / theta.t;
    let k = FourVector::from_parts(energy, spatial);
    if (k.square() + theta_sq - m2).abs() > tol {
        return Err(ClassicalError::NoRealSolution);
    }
    Ok(k)
}

/// The quaternionic wave at `x`; unit norm for every valid spec.
pub fn evaluate_wave(spec: &PlaneWaveSpec, x: FourVector) -> Result<Quaternion, ClassicalError> {
    require_valid(spec)?;
    Ok(spec.wave_unchecked(x))
}

fn check_step(h: f64) -> Result<(), ClassicalError> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(ClassicalError::InvalidStep(h))
    }
}

/// Central-difference `□f = Σ_μ η_μμ ∂_μ² f` with step `h`.
fn box_fd<T, F>(f: F, x: FourVector, h: f64) -> T
where
    T: Copy + core::ops::Add<Output = T> + core::ops::Sub<Output = T> + core::ops::Mul<f64, Output = T>,
    F: Fn(FourVector) -> T,
{
    let center = f(x);
    let inv_h2 = 1.0 / (h * h);
    let mut acc: Option<T> = None;
    for (mu, eta) in METRIC.iter().enumerate() {
        let second = (f(x.shifted(mu, h)) - center * 2.0 + f(x.shifted(mu, -h))) * (inv_h2 * eta);
        acc = Some(match acc {
            Some(a) => a + second,
            None => second,
        });
    }
    acc.expect("four terms")
}

/// `|(□ + m²)Φ(x)|` with the four-dimensional central second-difference stencil.
pub fn kg_residual(spec: &PlaneWaveSpec, x: FourVector, h: f64) -> Result<f64, ClassicalError> {
    check_step(h)?;
    let m2 = spec.m * spec.m;
    let lap = box_fd(|y| spec.wave_unchecked(y), x, h);
    Ok((lap + spec.wave_unchecked(x) * m2).norm())
}

/// Finite-difference residuals of the component equations at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentResiduals {
    /// `|(□ + m² − ∂Θ·∂Θ) φ⁽ᵅ⁾|` for `α = 0, 1`.
    pub field: [f64; 2],
    /// `|∂_μ[∂^μΘ (φ⁽ᵅ⁾)²]|` for `α = 0, 1`.
    pub current: [f64; 2],
}

impl ComponentResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.field[0], self.field[1], self.current[0], self.current[1]]
    }
}

pub fn component_residuals(
    spec: &PlaneWaveSpec,
    x: FourVector,
    h: f64,
) -> Result<ComponentResiduals, ClassicalError> {
    check_step(h)?;
    let m2 = spec.m * spec.m;
    let grad_phase = |y: FourVector| -> [f64; 4] {
        core::array::from_fn(|mu| (spec.phase(y.shifted(mu, h)) - spec.phase(y.shifted(mu, -h))) / (2.0 * h))
    };
    let g = grad_phase(x);
    let grad_sq: f64 = (0..4).map(|mu| METRIC[mu] * g[mu] * g[mu]).sum();

    let mut field = [0.0; 2];
    let mut current = [0.0; 2];
    for alpha in 0..2 {
        let phi = |y: FourVector| spec.component(alpha, y);
        let lap = box_fd(phi, x, h);
        field[alpha] = (lap + phi(x) * (m2 - grad_sq)).norm();

        // V^μ = η^μμ ∂_μΘ φ², divergence by central first differences
        let v = |y: FourVector, mu: usize| -> Complex64 {
            let p = phi(y);
            p * p * (METRIC[mu] * grad_phase(y)[mu])
        };
        let mut div = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            div += (v(x.shifted(mu, h), mu) - v(x.shifted(mu, -h), mu)) / (2.0 * h);
        }
        current[alpha] = div.norm();
    }
    Ok(ComponentResiduals { field, current })
}
