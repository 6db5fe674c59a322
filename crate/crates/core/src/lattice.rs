//! Free evolution of the four complex component fields on a periodic 1+1D lattice.
//!
//! Each component obeys `∂_t²Φ = ∂_x²Φ − m²Φ`. The integrator is the
//! kick–drift–kick form of leapfrog, so fields and velocities live on the same
//! time level and the scheme is exactly time reversible. The stored momentum is
//! the field velocity `Π = ∂_tΦ`, the variable conjugate to `Φ†`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use num_complex::Complex64;

use crate::classical::{effective_momenta, ClassicalError, PlaneWaveSpec};
use crate::convention::Convention;

/// Allowed distance of a mode number from the nearest integer.
pub const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeError {
    InvalidGrid { n: usize, dx: f64, dt: f64 },
    /// `dt > dx`, or the mass term makes the explicit scheme unstable.
    CflViolation { dt: f64, limit: f64 },
    /// Component `a` (1-based) carries momentum along `x²` or `x³`.
    TransverseMomentum { component: usize },
    /// Component `a` (1-based) has a non-integer mode number on the periodic box.
    IncommensurateMomentum { component: usize, mode_number: f64 },
    ShapeMismatch,
    Classical(ClassicalError),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidGrid { n, dx, dt } => {
                write!(f, "invalid lattice: n = {n}, dx = {dx}, dt = {dt}")
            }
            LatticeError::CflViolation { dt, limit } => {
                write!(f, "time step {dt} exceeds the stability limit {limit}")
            }
            LatticeError::TransverseMomentum { component } => {
                write!(f, "component {component} has momentum outside the lattice direction")
            }
            LatticeError::IncommensurateMomentum { component, mode_number } => write!(
                f,
                "component {component} has non-integer mode number {mode_number} on the periodic box"
            ),
            LatticeError::ShapeMismatch => write!(f, "field arrays do not match the lattice size"),
            LatticeError::Classical(e) => write!(f, "{e}"),
        }
    }
}

impl From<ClassicalError> for LatticeError {
    fn from(e: ClassicalError) -> Self {
        LatticeError::Classical(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    n: usize,
    dx: f64,
    dt: f64,
    m: f64,
    time: f64,
    fields: [Vec<Complex64>; 4],
    momenta: [Vec<Complex64>; 4],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub energy: f64,
    pub charges: [f64; 4],
    pub energy_drift_rel: f64,
}

/// Largest stable step for mass `m`: `min(dx, 2 / √(4/dx² + m²))`.
pub fn stability_limit(dx: f64, m: f64) -> f64 {
    let omega_max = libm::sqrt(4.0 / (dx * dx) + m * m);
    dx.min(2.0 / omega_max)
}

/// Angular frequency of the lattice mode `exp(iκx)` under the integrator.
///
/// Solves `(2 − 2cos ω dt)/dt² = (2 sin(κ dx/2)/dx)² + m²`.
pub fn lattice_frequency(kappa: f64, m: f64, dx: f64, dt: f64) -> f64 {
    let k_lat = 2.0 * libm::sin(0.5 * kappa * dx) / dx;
    let omega_sq = k_lat * k_lat + m * m;
    libm::acos(1.0 - 0.5 * dt * dt * omega_sq) / dt
}

fn check_grid(n: usize, dx: f64, dt: f64, m: f64) -> Result<(), LatticeError> {
    if n < 2 || !(dx > 0.0 && dx.is_finite()) || !(dt > 0.0 && dt.is_finite()) || !(m.is_finite()) {
        return Err(LatticeError::InvalidGrid { n, dx, dt });
    }
    let limit = stability_limit(dx, m);
    if dt > limit {
        return Err(LatticeError::CflViolation { dt, limit });
    }
    Ok(())
}

impl LatticeState {
    /// A state from explicit fields and velocities at `t = 0`.
    pub fn new(
        n: usize,
        dx: f64,
        dt: f64,
        m: f64,
        fields: [Vec<Complex64>; 4],
        momenta: [Vec<Complex64>; 4],
    ) -> Result<Self, LatticeError> {
        check_grid(n, dx, dt, m)?;
        if fields.iter().chain(momenta.iter()).any(|v| v.len() != n) {
            return Err(LatticeError::ShapeMismatch);
        }
        Ok(Self { n, dx, dt, m, time: 0.0, fields, momenta })
    }

    pub fn zero(n: usize, dx: f64, dt: f64, m: f64) -> Result<Self, LatticeError> {
        let z = || vec![Complex64::new(0.0, 0.0); n];
        Self::new(n, dx, dt, m, [z(), z(), z(), z()], [z(), z(), z(), z()])
    }

    /// Samples `Φ⁽ᵃ⁾(0, x) = exp(−i p⁽ᵃ⁾·x)` on the grid. Velocities are those of the
    /// exact lattice eigenmode, so a single mode evolves as a pure phase.
    pub fn init_from_plane_wave(
        spec: &PlaneWaveSpec,
        n: usize,
        dx: f64,
        dt: f64,
    ) -> Result<Self, LatticeError> {
        check_grid(n, dx, dt, spec.m)?;
        let momenta4 = effective_momenta(spec)?;
        let length = n as f64 * dx;
        let mut fields: [Vec<Complex64>; 4] = Default::default();
        let mut velocities: [Vec<Complex64>; 4] = Default::default();
        for (a, p) in momenta4.iter().enumerate() {
            let scale = p.max_abs().max(1.0) * 1e-12;
            if p.x2.abs() > scale || p.x3.abs() > scale {
                return Err(LatticeError::TransverseMomentum { component: a + 1 });
            }
            let mode_number = p.x1 * length / TAU;
            let nearest = libm::round(mode_number);
            if (mode_number - nearest).abs() > COMMENSURATE_TOL {
                return Err(LatticeError::IncommensurateMomentum { component: a + 1, mode_number });
            }
            let kappa = TAU * nearest / length;
            let omega = lattice_frequency(kappa, spec.m, dx, dt);
            let sign = if p.t < 0.0 { -1.0 } else { 1.0 };
            // Φ(t) = e^{−i sign ω t} Φ(0)
            let velocity_factor = Complex64::new(0.0, -sign * libm::sin(omega * dt) / dt);
            fields[a] = (0..n)
                .map(|j| {
                    let arg = kappa * j as f64 * dx;
                    Complex64::new(libm::cos(arg), libm::sin(arg))
                })
                .collect();
            velocities[a] = fields[a].iter().map(|phi| phi * velocity_factor).collect();
        }
        Ok(Self { n, dx, dt, m: spec.m, time: 0.0, fields, momenta: velocities })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn field(&self, a: usize) -> &[Complex64] {
        &self.fields[a]
    }

    pub fn momentum(&self, a: usize) -> &[Complex64] {
        &self.momenta[a]
    }

    /// `Π ← −Π`; the following evolution retraces the trajectory.
    pub fn reverse_momenta(&mut self) {
        for pi in self.momenta.iter_mut() {
            for v in pi.iter_mut() {
                *v = -*v;
            }
        }
    }

    fn kick(phi: &[Complex64], pi: &mut [Complex64], m2: f64, inv_dx2: f64, half_dt: f64) {
        let n = phi.len();
        for j in 0..n {
            let left = phi[(j + n - 1) % n];
            let right = phi[(j + 1) % n];
            let force = (left + right - phi[j] * 2.0) * inv_dx2 - phi[j] * m2;
            pi[j] += force * half_dt;
        }
    }

    /// One kick–drift–kick update of all four components.
    pub fn step(&mut self) {
        let m2 = self.m * self.m;
        let inv_dx2 = 1.0 / (self.dx * self.dx);
        let half_dt = 0.5 * self.dt;
        for (phi, pi) in self.fields.iter_mut().zip(self.momenta.iter_mut()) {
            Self::kick(phi, pi, m2, inv_dx2, half_dt);
            for (f, v) in phi.iter_mut().zip(pi.iter()) {
                *f += v * self.dt;
            }
            Self::kick(phi, pi, m2, inv_dx2, half_dt);
        }
        self.time += self.dt;
    }

    pub fn advance(&mut self, steps: usize) {
        for _ in 0..steps {
            self.step();
        }
    }

    /// `w Σ_a Σ_j dx [|Π|² + |∇⁺Φ|² + m²|Φ|²]` with `w` from the convention.
    pub fn total_energy(&self, convention: Convention) -> f64 {
        let m2 = self.m * self.m;
        let inv_dx = 1.0 / self.dx;
        let mut total = 0.0;
        for (phi, pi) in self.fields.iter().zip(self.momenta.iter()) {
            let mut e = 0.0;
            for j in 0..self.n {
                let grad = (phi[(j + 1) % self.n] - phi[j]) * inv_dx;
                e += pi[j].norm_sqr() + grad.norm_sqr() + m2 * phi[j].norm_sqr();
            }
            total += e * self.dx;
        }
        total * convention.component_weight()
    }

    /// `Σ_j dx Im(Φ⁽ᵃ⁾† ∂_tΦ⁽ᵃ⁾)` for each component.
    pub fn total_charge(&self) -> [f64; 4] {
        core::array::from_fn(|a| {
            self.fields[a]
                .iter()
                .zip(self.momenta[a].iter())
                .map(|(phi, pi)| (phi.conj() * pi).im)
                .sum::<f64>()
                * self.dx
        })
    }

    pub fn sample(&self, convention: Convention, reference_energy: f64) -> Sample {
        let energy = self.total_energy(convention);
        let drift = energy - reference_energy;
        Sample {
            time: self.time,
            energy,
            charges: self.total_charge(),
            energy_drift_rel: if reference_energy != 0.0 { drift / reference_energy.abs() } else { drift },
        }
    }
}

/// Runs `n_steps` updates, sampling at step 0, every `sample_every` steps and at the end.
pub fn run(
    state: &mut LatticeState,
    n_steps: usize,
    sample_every: usize,
    convention: Convention,
) -> Vec<Sample> {
    let every = sample_every.max(1);
    let reference = state.total_energy(convention);
    let mut samples = vec![state.sample(convention, reference)];
    for i in 1..=n_steps {
        state.step();
        if i % every == 0 || i == n_steps {
            samples.push(state.sample(convention, reference));
        }
    }
    samples
}
