#![allow(dead_code)]

use quatfield_core::classical::solve_k;
use quatfield_core::{FourVector, PlaneWaveSpec, Sign};
use rand::Rng;

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = dot3(v, v).sqrt();
        if n > 0.1 {
            return v.map(|c| c / n);
        }
    }
}

/// Draws `k` for a given `m` and `θ`, or `None` when the draw has no real solution.
pub fn draw_k<R: Rng>(rng: &mut R, m: f64, theta: FourVector) -> Option<FourVector> {
    let ts = theta.spatial();
    let mut dir = unit_vector(rng);
    let mag;
    if theta.t == 0.0 {
        let ts2 = dot3(ts, ts);
        if ts2 > 0.0 {
            let c = dot3(dir, ts) / ts2;
            dir = std::array::from_fn(|i| dir[i] - c * ts[i]);
            if dot3(dir, dir) < 1e-6 {
                return None;
            }
        }
        mag = rng.gen_range(0.0..2.0);
    } else {
        let c = dot3(ts, dir) / theta.t;
        let num = m * m - theta.square();
        let den = c * c - 1.0;
        if den.abs() < 1e-3 || num / den <= 0.0 {
            return None;
        }
        mag = (num / den).sqrt();
        if mag > 50.0 {
            return None;
        }
    }
    solve_k(m, theta, dir, mag).ok()
}

/// A valid spec with both `k` drawn against the same `θ`.
pub fn random_spec<R: Rng>(rng: &mut R) -> PlaneWaveSpec {
    loop {
        let m = rng.gen_range(0.5..3.0);
        let t0 = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-1.5..1.5) };
        let theta = FourVector::new(t0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (Some(k0), Some(k1)) = (draw_k(rng, m, theta), draw_k(rng, m, theta)) else { continue };
        let sign = |b: bool| if b { Sign::Plus } else { Sign::Minus };
        return PlaneWaveSpec {
            m,
            theta,
            theta0: rng.gen_range(-3.0..3.0),
            k0,
            k1,
            s0: sign(rng.gen_bool(0.5)),
            s1: sign(rng.gen_bool(0.5)),
        };
    }
}
