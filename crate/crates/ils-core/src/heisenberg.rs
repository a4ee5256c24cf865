//! First Heisenberg group coordinates, the Koranyi gauge, and the
//! one-dimensional minimization used for vertical-fiber distances.

use serde::{Deserialize, Serialize};

/// A point of the first Heisenberg group in exponential coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KoranyiPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl KoranyiPoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        KoranyiPoint { x, y, t }
    }

    pub fn from_coords(c: &[f64]) -> Self {
        KoranyiPoint {
            x: c[0],
            y: c[1],
            t: c[2],
        }
    }

    /// Group law: (x,y,t) . (x',y',t') = (x+x', y+y', t+t'+(xy'-yx')/2).
    pub fn mul(self, rhs: KoranyiPoint) -> KoranyiPoint {
        KoranyiPoint {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            t: self.t + rhs.t + (self.x * rhs.y - self.y * rhs.x) / 2.0,
        }
    }

    pub fn inverse(self) -> KoranyiPoint {
        KoranyiPoint {
            x: -self.x,
            y: -self.y,
            t: -self.t,
        }
    }

    /// Koranyi/Cygan gauge ((x^2+y^2)^2 + 16 t^2)^(1/4), optionally with a
    /// different vertical factor (16 is the normalization that makes the
    /// gauge distance a true metric).
    pub fn gauge_with_factor(self, vertical_factor: f64) -> f64 {
        let h = self.x * self.x + self.y * self.y;
        (h * h + vertical_factor * self.t * self.t).sqrt().sqrt()
    }

    pub fn gauge(self) -> f64 {
        self.gauge_with_factor(KORANYI_VERTICAL_FACTOR)
    }
}

/// Vertical normalization of the gauge.
pub const KORANYI_VERTICAL_FACTOR: f64 = 16.0;

/// Left-invariant distance d(p, q) = ||q^{-1} . p||.
pub fn koranyi_distance(p: KoranyiPoint, q: KoranyiPoint) -> f64 {
    q.inverse().mul(p).gauge()
}

/// Distance on raw (x, y, t) coordinate slices.
pub fn koranyi_distance_coords(a: &[f64], b: &[f64]) -> f64 {
    koranyi_distance(KoranyiPoint::from_coords(a), KoranyiPoint::from_coords(b))
}

/// Iterations of bracketed ternary search for the fiber minimization.
pub const FIBER_SEARCH_ITERATIONS: usize = 200;

/// Absolute tolerance of the 1D fiber minimization.
pub const FIBER_SEARCH_TOL: f64 = 1e-8;

/// Distance from `p` to the vertical fiber over base point (a, b): the
/// infimum over s of d(p, (a, b, s)).
///
/// The gauge of (a,b,s)^{-1} . p depends on s only through a shifted
/// square, so the objective is unimodal. The bracket radius comes from the
/// gauge growth: outside |s - center| = g0^2/4 the purely vertical part of
/// the gauge already exceeds the value g0 seen at the bracket center. A
/// ternary search is followed by one parabolic refinement of the fourth
/// power of the gauge, which is exactly quadratic in s.
pub fn fiber_distance_vertical(p: KoranyiPoint, a: f64, b: f64) -> f64 {
    if p.x == a && p.y == b {
        // p lies on the fiber axis: the infimum is attained at s = t exactly.
        return 0.0;
    }
    let objective = |s: f64| koranyi_distance(p, KoranyiPoint::new(a, b, s));

    let g0 = objective(p.t);
    let radius = (b * p.x - a * p.y).abs() / 2.0 + g0 * g0 / 4.0 + 1.0;
    let (mut lo, mut hi) = (p.t - radius, p.t + radius);

    for _ in 0..FIBER_SEARCH_ITERATIONS {
        if hi - lo < FIBER_SEARCH_TOL * 1e-4 {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if objective(m1) <= objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }

    let s_mid = 0.5 * (lo + hi);
    let best = objective(s_mid);

    // One local refinement: fit the exact quadratic g(s) = gauge^4 through
    // three points around the ternary result and evaluate at its vertex.
    let h = (hi - lo).max(FIBER_SEARCH_TOL);
    let (s1, s2, s3) = (s_mid - h, s_mid, s_mid + h);
    let quartic = |s: f64| {
        let v = objective(s);
        v * v * v * v
    };
    let (g1, g2, g3) = (quartic(s1), quartic(s2), quartic(s3));
    let denom = (s2 - s1) * (g2 - g3) - (s2 - s3) * (g2 - g1);
    if denom.abs() > 0.0 {
        let num = (s2 - s1) * (s2 - s1) * (g2 - g3) - (s2 - s3) * (s2 - s3) * (g2 - g1);
        let vertex = s2 - 0.5 * num / denom;
        if vertex.is_finite() {
            return best.min(objective(vertex));
        }
    }
    best
}
