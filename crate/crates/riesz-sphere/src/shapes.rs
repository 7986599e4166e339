//! Symbolic small-N configurations with exact coordinates and exact
//! squared-distance multisets.
//!
//! Canonical orientations: bi-pyramid poles sit on the z-axis and equatorial
//! rings start at (1,0,0), so realizations serialize reproducibly.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{Configuration, Vec3};

/// The named optimizer shapes appearing in the small-N theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedShape {
    Antipodal,
    EquilateralTriangle,
    Tetrahedron,
    TriangularBipyramid,
    /// Square pyramid with apex at the north pole and base square at height
    /// `z` in (-1, 0); the pyramid height is `h = 1 - z`.
    SquarePyramid,
    Octahedron,
    PentagonalBipyramid,
    Cube,
    /// Edge-uniform square antiprism inscribed in the sphere (all 16 edges
    /// equal). Beats the cube for every s > -2.
    SquareAntiprism,
    Icosahedron,
}

impl NamedShape {
    /// Number of points of the realized configuration.
    pub fn point_count(self) -> usize {
        match self {
            NamedShape::Antipodal => 2,
            NamedShape::EquilateralTriangle => 3,
            NamedShape::Tetrahedron => 4,
            NamedShape::TriangularBipyramid | NamedShape::SquarePyramid => 5,
            NamedShape::Octahedron => 6,
            NamedShape::PentagonalBipyramid => 7,
            NamedShape::Cube | NamedShape::SquareAntiprism => 8,
            NamedShape::Icosahedron => 12,
        }
    }

    pub fn needs_parameter(self) -> bool {
        matches!(self, NamedShape::SquarePyramid)
    }

    /// All named shapes with the given point count.
    pub fn with_count(n: usize) -> Vec<NamedShape> {
        [
            NamedShape::Antipodal,
            NamedShape::EquilateralTriangle,
            NamedShape::Tetrahedron,
            NamedShape::TriangularBipyramid,
            NamedShape::SquarePyramid,
            NamedShape::Octahedron,
            NamedShape::PentagonalBipyramid,
            NamedShape::Cube,
            NamedShape::SquareAntiprism,
            NamedShape::Icosahedron,
        ]
        .into_iter()
        .filter(|s| s.point_count() == n)
        .collect()
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedShape::Antipodal => "antipodal",
            NamedShape::EquilateralTriangle => "equilateral-triangle",
            NamedShape::Tetrahedron => "tetrahedron",
            NamedShape::TriangularBipyramid => "triangular-bipyramid",
            NamedShape::SquarePyramid => "square-pyramid",
            NamedShape::Octahedron => "octahedron",
            NamedShape::PentagonalBipyramid => "pentagonal-bipyramid",
            NamedShape::Cube => "cube",
            NamedShape::SquareAntiprism => "square-antiprism",
            NamedShape::Icosahedron => "icosahedron",
        }
    }
}

fn ring(count: usize, radius: f64, z: f64, phase: f64) -> Vec<Vec3> {
    (0..count)
        .map(|k| {
            let phi = phase + 2.0 * PI * k as f64 / count as f64;
            Vec3::new(radius * phi.cos(), radius * phi.sin(), z)
        })
        .collect()
}

/// Squared height of the edge-uniform square antiprism ring planes:
/// h^2 = sqrt(2)/(4 + sqrt(2)).
fn antiprism_h2() -> f64 {
    let s2 = 2f64.sqrt();
    s2 / (4.0 + s2)
}

/// Realizes a named shape as a configuration in canonical orientation.
///
/// `parameter` must be present exactly for the square pyramid, where it is
/// the base height z in (-1, 0).
pub fn realize(shape: NamedShape, parameter: Option<f64>) -> Result<Configuration> {
    if shape.needs_parameter() != parameter.is_some() {
        return Err(Error::Domain(format!(
            "shape {} {} a parameter",
            shape.label(),
            if shape.needs_parameter() { "requires" } else { "does not take" }
        )));
    }
    let pts: Vec<Vec3> = match shape {
        NamedShape::Antipodal => vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)],
        NamedShape::EquilateralTriangle => ring(3, 1.0, 0.0, 0.0),
        NamedShape::Tetrahedron => {
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0)];
            v.extend(ring(3, 8f64.sqrt() / 3.0, -1.0 / 3.0, 0.0));
            v
        }
        NamedShape::TriangularBipyramid => {
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)];
            v.extend(ring(3, 1.0, 0.0, 0.0));
            v
        }
        NamedShape::SquarePyramid => {
            let z = parameter.unwrap();
            if !(-1.0 < z && z < 0.0) {
                return Err(Error::Domain(format!(
                    "square pyramid base height z = {z} outside (-1, 0)"
                )));
            }
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0)];
            v.extend(ring(4, (1.0 - z * z).sqrt(), z, 0.0));
            v
        }
        NamedShape::Octahedron => {
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)];
            v.extend(ring(4, 1.0, 0.0, 0.0));
            v
        }
        NamedShape::PentagonalBipyramid => {
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)];
            v.extend(ring(5, 1.0, 0.0, 0.0));
            v
        }
        NamedShape::Cube => {
            let a = 1.0 / 3f64.sqrt();
            vec![
                Vec3::new(a, a, a),
                Vec3::new(-a, a, a),
                Vec3::new(-a, -a, a),
                Vec3::new(a, -a, a),
                Vec3::new(a, a, -a),
                Vec3::new(-a, a, -a),
                Vec3::new(-a, -a, -a),
                Vec3::new(a, -a, -a),
            ]
        }
        NamedShape::SquareAntiprism => {
            let h2 = antiprism_h2();
            let h = h2.sqrt();
            let rho = (1.0 - h2).sqrt();
            let mut v = ring(4, rho, h, 0.0);
            v.extend(ring(4, rho, -h, PI / 4.0));
            v
        }
        NamedShape::Icosahedron => {
            let z = 1.0 / 5f64.sqrt();
            let rho = 2.0 / 5f64.sqrt();
            let mut v = vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)];
            v.extend(ring(5, rho, z, 0.0));
            v.extend(ring(5, rho, -z, PI / 5.0));
            v
        }
    };
    Configuration::from_vecs(&pts)
}

/// Exact squared-distance multiset of a shape: pairs `(r^2, multiplicity)`.
pub fn distance_multiset(shape: NamedShape, parameter: Option<f64>) -> Result<Vec<(f64, usize)>> {
    if shape.needs_parameter() != parameter.is_some() {
        return Err(Error::Domain(format!(
            "shape {} parameter mismatch",
            shape.label()
        )));
    }
    let s5 = 5f64.sqrt();
    Ok(match shape {
        NamedShape::Antipodal => vec![(4.0, 1)],
        NamedShape::EquilateralTriangle => vec![(3.0, 3)],
        NamedShape::Tetrahedron => vec![(8.0 / 3.0, 6)],
        NamedShape::TriangularBipyramid => vec![(2.0, 6), (3.0, 3), (4.0, 1)],
        NamedShape::SquarePyramid => {
            let z = parameter.unwrap();
            vec![
                (2.0 * (1.0 - z), 4),
                (2.0 * (1.0 - z * z), 4),
                (4.0 * (1.0 - z * z), 2),
            ]
        }
        NamedShape::Octahedron => vec![(2.0, 12), (4.0, 3)],
        NamedShape::PentagonalBipyramid => {
            // 4 sin^2(pi/5) = (5 - sqrt 5)/2, 4 sin^2(2 pi/5) = (5 + sqrt 5)/2.
            vec![
                (2.0, 10),
                ((5.0 - s5) / 2.0, 5),
                ((5.0 + s5) / 2.0, 5),
                (4.0, 1),
            ]
        }
        NamedShape::Cube => vec![(4.0 / 3.0, 12), (8.0 / 3.0, 12), (4.0, 4)],
        NamedShape::SquareAntiprism => {
            let h2 = antiprism_h2();
            let rho2 = 1.0 - h2;
            // 16 equal edges (8 ring edges + 8 lateral), 4 ring diagonals,
            // 8 long lateral pairs.
            vec![
                (2.0 * rho2, 16),
                (4.0 * rho2, 4),
                ((2.0 + 2f64.sqrt()) * rho2 + 4.0 * h2, 8),
            ]
        }
        NamedShape::Icosahedron => {
            vec![(2.0 - 2.0 / s5, 30), (2.0 + 2.0 / s5, 30), (4.0, 6)]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn observed_multiset(c: &Configuration) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for (_, _, r) in c.pair_distances() {
            // Bucket squared distances at 1e-9 resolution.
            let key = (r * r * 1e9).round() as i64;
            *m.entry(key).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn realizations_match_exact_multisets() {
        let cases: Vec<(NamedShape, Option<f64>)> = vec![
            (NamedShape::Antipodal, None),
            (NamedShape::EquilateralTriangle, None),
            (NamedShape::Tetrahedron, None),
            (NamedShape::TriangularBipyramid, None),
            (NamedShape::SquarePyramid, Some(-0.25)),
            (NamedShape::Octahedron, None),
            (NamedShape::PentagonalBipyramid, None),
            (NamedShape::Cube, None),
            (NamedShape::SquareAntiprism, None),
            (NamedShape::Icosahedron, None),
        ];
        for (shape, param) in cases {
            let c = realize(shape, param).unwrap();
            assert_eq!(c.len(), shape.point_count());
            let expected = distance_multiset(shape, param).unwrap();
            let total: usize = expected.iter().map(|&(_, m)| m).sum();
            assert_eq!(total, c.len() * (c.len() - 1) / 2, "{}", shape.label());
            let observed = observed_multiset(&c);
            assert_eq!(observed.len(), expected.len(), "{}", shape.label());
            for (r2, mult) in expected {
                let hit = observed
                    .iter()
                    .find(|(k, _)| ((**k as f64) * 1e-9 - r2).abs() < 1e-7);
                // Distances themselves agree to 1e-14; the integer bucketing
                // above only needs to separate distinct values.
                let (_, &count) = hit.unwrap_or_else(|| panic!("{} missing r2={r2}", shape.label()));
                assert_eq!(count, mult, "{} r2={r2}", shape.label());
            }
            for (_, _, r) in c.pair_distances() {
                let best = distance_multiset(shape, param)
                    .unwrap()
                    .iter()
                    .map(|&(r2, _)| (r - r2.sqrt()).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-14, "{} r={r}", shape.label());
            }
        }
    }

    #[test]
    fn octahedron_distances() {
        let c = realize(NamedShape::Octahedron, None).unwrap();
        let mut sqrt2 = 0;
        let mut diam = 0;
        for (_, _, r) in c.pair_distances() {
            if (r - 2f64.sqrt()).abs() < 1e-12 {
                sqrt2 += 1;
            } else if (r - 2.0).abs() < 1e-12 {
                diam += 1;
            }
        }
        assert_eq!((sqrt2, diam), (12, 3));
    }

    #[test]
    fn icosahedron_edge_length() {
        let c = realize(NamedShape::Icosahedron, None).unwrap();
        let edge = c
            .pair_distances()
            .map(|(_, _, r)| r)
            .fold(f64::INFINITY, f64::min);
        assert!((edge - 1.0514622242382672).abs() < 1e-12);
        // Edge equals 1/sin(2 pi/5).
        assert!((edge - 1.0 / (2.0 * PI / 5.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn square_pyramid_layout() {
        let c = realize(NamedShape::SquarePyramid, Some(-0.25)).unwrap();
        assert_eq!(c.point(0).as_vec(), Vec3::new(0.0, 0.0, 1.0));
        for k in 1..5 {
            assert!((c.point(k).z - (-0.25)).abs() < 1e-15);
        }
        assert!(realize(NamedShape::SquarePyramid, Some(0.5)).is_err());
        assert!(realize(NamedShape::SquarePyramid, None).is_err());
        assert!(realize(NamedShape::Octahedron, Some(0.1)).is_err());
    }
}
