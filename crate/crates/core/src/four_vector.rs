use core::ops::{Add, Mul, Neg, Sub};

/// Contravariant Minkowski four-vector `(t, x1, x2, x3)`, metric `(+, −, −, −)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Diagonal of the metric tensor.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

impl FourVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { t, x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x1, self.x2, self.x3]
    }

    pub fn from_parts(t: f64, spatial: [f64; 3]) -> Self {
        Self::new(t, spatial[0], spatial[1], spatial[2])
    }

    pub fn spatial(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn component(self, mu: usize) -> f64 {
        self.to_array()[mu]
    }

    /// Returns a copy with component `mu` shifted by `delta`.
    pub fn shifted(self, mu: usize, delta: f64) -> Self {
        let mut a = self.to_array();
        a[mu] += delta;
        Self::from_array(a)
    }

    pub fn dot(self, other: Self) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn square(self) -> f64 {
        self.dot(self)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.t * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// `u⁰v⁰ − u¹v¹ − u²v² − u³v³`
pub fn minkowski_dot(u: FourVector, v: FourVector) -> f64 {
    u.t * v.t - u.x1 * v.x1 - u.x2 * v.x2 - u.x3 * v.x3
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.t + o.t, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.t - o.t, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for FourVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for FourVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}
