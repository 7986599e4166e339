//! Points on the unit sphere and labeled configurations.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A vector in R^3. Used both for sphere points and for tangent vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn scale(self, t: f64) -> Vec3 {
        Vec3::new(self.x * t, self.y * t, self.z * t)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, t: f64) -> Vec3 {
        self.scale(t)
    }
}

/// A point on the unit sphere. Construction normalizes, so the unit-norm
/// invariant holds to within 1e-12 at all times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Normalizes `v` onto the sphere. Fails on the zero vector.
    pub fn normalize(v: Vec3) -> Result<UnitVector> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize zero or non-finite vector".into()));
        }
        Ok(UnitVector(v.scale(1.0 / n)))
    }

    /// Wraps a vector already known to be unit length (checked to 1e-12).
    pub fn from_unit(v: Vec3) -> Result<UnitVector> {
        if (v.norm2() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("vector has norm {} != 1", v.norm())));
        }
        Ok(UnitVector(v))
    }

    pub fn as_vec(self) -> Vec3 {
        self.0
    }
}

impl std::ops::Deref for UnitVector {
    type Target = Vec3;
    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

/// Chordal (straight-line) distance between two sphere points.
///
/// Computed as sqrt(2 - 2 p.q) clamped into [0, 2], which is better
/// conditioned near antipodal pairs than the norm of the difference.
pub fn chordal_distance(p: UnitVector, q: UnitVector) -> f64 {
    let c = (2.0 - 2.0 * p.dot(*q)).clamp(0.0, 4.0);
    c.sqrt().min(2.0)
}

/// An ordered set of N labeled points on the sphere.
///
/// Coincident labeled points are allowed: the degenerate arrangements that
/// realize the infimum for s <= -2 must be representable.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<UnitVector>,
}

impl Configuration {
    /// Builds a configuration from unit vectors. Requires N >= 2.
    pub fn new(points: Vec<UnitVector>) -> Result<Configuration> {
        if points.len() < 2 {
            return Err(Error::Domain(format!(
                "configuration needs at least 2 points, got {}",
                points.len()
            )));
        }
        Ok(Configuration { points })
    }

    /// Builds a configuration from raw vectors, normalizing each.
    pub fn from_vecs(vecs: &[Vec3]) -> Result<Configuration> {
        let points = vecs
            .iter()
            .map(|&v| UnitVector::normalize(v))
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[UnitVector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> UnitVector {
        self.points[i]
    }

    /// The configuration with point `l` removed. Requires N >= 3.
    pub fn without(&self, l: usize) -> Result<Configuration> {
        if l >= self.len() {
            return Err(Error::Domain(format!("index {l} out of range")));
        }
        let mut pts = self.points.clone();
        pts.remove(l);
        Configuration::new(pts)
    }

    /// The configuration with an extra point appended (duplicates allowed).
    pub fn with_point(&self, p: UnitVector) -> Configuration {
        let mut pts = self.points.clone();
        pts.push(p);
        Configuration { points: pts }
    }

    /// Applies a rotation matrix given by rows r0, r1, r2.
    pub fn rotated(&self, r0: Vec3, r1: Vec3, r2: Vec3) -> Result<Configuration> {
        let pts = self
            .points
            .iter()
            .map(|p| {
                let v = p.as_vec();
                UnitVector::normalize(Vec3::new(r0.dot(v), r1.dot(v), r2.dot(v)))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(pts)
    }

    /// Iterates over unordered pairs (i, j), i < j, with their chordal distance.
    pub fn pair_distances(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (i + 1..self.len())
                .map(move |j| (i, j, chordal_distance(self.points[i], self.points[j])))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_antipodal_is_diameter() {
        let n = UnitVector::normalize(Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let s = UnitVector::normalize(Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!(chordal_distance(n, s), 2.0);
        assert_eq!(chordal_distance(n, n), 0.0);
    }

    #[test]
    fn chordal_equilateral_neighbors() {
        // Law of cosines on the unit circle gives sqrt(3); cross-check by
        // direct coordinate subtraction.
        let a = UnitVector::normalize(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let ang = 2.0 * std::f64::consts::PI / 3.0;
        let b = UnitVector::normalize(Vec3::new(ang.cos(), ang.sin(), 0.0)).unwrap();
        let direct = (a.as_vec() - b.as_vec()).norm();
        assert!((chordal_distance(a, b) - 3f64.sqrt()).abs() < 1e-14);
        assert!((chordal_distance(a, b) - direct).abs() < 1e-14);
    }

    #[test]
    fn configuration_needs_two_points() {
        let p = UnitVector::normalize(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(Configuration::new(vec![p]).is_err());
        assert!(Configuration::new(vec![p, p]).is_ok()); // coincident labels allowed
    }
}
