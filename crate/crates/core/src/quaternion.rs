//! Real quaternions `w + x i + y j + z k` and their symplectic view `z0 + z1 j`.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// A quaternion in the extended real representation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The symplectic pair `(z0, z1)` with `q = z0 + z1 j`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymplecticPair {
    pub z0: Complex64,
    pub z1: Complex64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds a complex number in the `{1, i}` subalgebra.
    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        libm::hypot(libm::hypot(self.w, self.x), libm::hypot(self.y, self.z))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Largest absolute component, the distance used by tolerance checks.
    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_symplectic(self) -> SymplecticPair {
        SymplecticPair {
            z0: Complex64::new(self.w, self.x),
            z1: Complex64::new(self.y, self.z),
        }
    }

    pub fn from_symplectic(pair: SymplecticPair) -> Self {
        Self::new(pair.z0.re, pair.z0.im, pair.z1.re, pair.z1.im)
    }
}

impl SymplecticPair {
    pub const fn new(z0: Complex64, z1: Complex64) -> Self {
        Self { z0, z1 }
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::from_symplectic(self)
    }
}

impl From<SymplecticPair> for Quaternion {
    fn from(pair: SymplecticPair) -> Self {
        Quaternion::from_symplectic(pair)
    }
}

impl From<Quaternion> for SymplecticPair {
    fn from(q: Quaternion) -> Self {
        q.to_symplectic()
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product. Units follow `e_a e_b = ε_abc e_c − δ_ab`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a0, a1, a2, a3) = (self.w, self.x, self.y, self.z);
        let (b0, b1, b2, b3) = (o.w, o.x, o.y, o.z);
        Self::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

pub fn mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn conjugate(q: Quaternion) -> Quaternion {
    q.conjugate()
}

pub fn norm(q: Quaternion) -> f64 {
    q.norm()
}

/// `[a, b] = ab − ba`
pub fn commutator(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b - b * a
}

/// `(a, b, c) = a(bc) − (ab)c`, identically zero on the quaternions.
pub fn associator(a: Quaternion, b: Quaternion, c: Quaternion) -> Quaternion {
    a * (b * c) - (a * b) * c
}

/// Residuals of the three Moufang identities
/// `z(x(zy)) = ((zx)z)y`, `x(z(yz)) = ((xz)y)z`, `(zx)(yz) = (z(xy))z`.
pub fn moufang_residuals(x: Quaternion, y: Quaternion, z: Quaternion) -> [Quaternion; 3] {
    [
        z * (x * (z * y)) - ((z * x) * z) * y,
        x * (z * (y * z)) - ((x * z) * y) * z,
        (z * x) * (y * z) - (z * (x * y)) * z,
    ]
}

/// The symplectic view of `q`; see [`Quaternion::to_symplectic`].
pub fn to_symplectic(q: Quaternion) -> SymplecticPair {
    q.to_symplectic()
}

pub fn from_symplectic(pair: SymplecticPair) -> Quaternion {
    Quaternion::from_symplectic(pair)
}
