//! Spherical digital nets: two-dimensional Sobol' points and their
//! area-preserving Lambert lift to the sphere, with prefix energy curves.

use crate::error::{Error, Result};
use crate::geom::{Configuration, UnitVector, Vec3};
use crate::kernel::pair_energy_raw;
use crate::table::EnergyTable;

/// Points in the unit square, in generation order.
#[derive(Debug, Clone)]
pub struct UnitSquarePointSet {
    pub points: Vec<(f64, f64)>,
}

/// A lifted point set on the sphere, keeping its source points.
#[derive(Debug, Clone)]
pub struct SphericalNet {
    pub config: Configuration,
    pub source: UnitSquarePointSet,
}

const SOBOL_BITS: u32 = 32;

/// Direction numbers of the first dimension: the van der Corput radical
/// inverse in base 2.
fn directions_dim1() -> [u32; SOBOL_BITS as usize] {
    let mut v = [0u32; SOBOL_BITS as usize];
    for (i, slot) in v.iter_mut().enumerate() {
        *slot = 1 << (31 - i);
    }
    v
}

/// Direction numbers of the second dimension, from the primitive polynomial
/// x + 1 with m_1 = 1: m_k = 2 m_{k-1} XOR m_{k-1}.
fn directions_dim2() -> [u32; SOBOL_BITS as usize] {
    let mut m = [0u64; SOBOL_BITS as usize];
    m[0] = 1;
    for k in 1..SOBOL_BITS as usize {
        m[k] = (2 * m[k - 1]) ^ m[k - 1];
    }
    let mut v = [0u32; SOBOL_BITS as usize];
    for k in 0..SOBOL_BITS as usize {
        v[k] = (m[k] << (31 - k)) as u32;
    }
    v
}

/// First `n` points of the two-dimensional Sobol' sequence (Gray-code
/// construction; point 0 is the origin).
pub fn sobol_points(n: usize) -> Result<UnitSquarePointSet> {
    if n == 0 {
        return Err(Error::Domain("need at least one point".into()));
    }
    let d1 = directions_dim1();
    let d2 = directions_dim2();
    let mut points = Vec::with_capacity(n);
    let (mut x1, mut x2) = (0u32, 0u32);
    points.push((0.0, 0.0));
    for k in 1..n as u64 {
        let bit = k.trailing_zeros() as usize;
        x1 ^= d1[bit];
        x2 ^= d2[bit];
        points.push((
            x1 as f64 / (1u64 << SOBOL_BITS) as f64,
            x2 as f64 / (1u64 << SOBOL_BITS) as f64,
        ));
    }
    Ok(UnitSquarePointSet { points })
}

/// Area-preserving Lambert lift `(u, v) -> (sqrt(1-z^2) cos(2 pi u),
/// sqrt(1-z^2) sin(2 pi u), z)` with `z = 1 - 2v`. The poles get phi = 0.
pub fn lambert_lift(pts: &UnitSquarePointSet) -> Result<SphericalNet> {
    let mapped: Vec<Vec3> = pts
        .points
        .iter()
        .map(|&(u, v)| {
            let z = (1.0 - 2.0 * v).clamp(-1.0, 1.0);
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = if rho == 0.0 { 0.0 } else { 2.0 * std::f64::consts::PI * u };
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect();
    let config = Configuration::new(
        mapped
            .into_iter()
            .map(UnitVector::from_unit)
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(SphericalNet { config, source: pts.clone() })
}

/// Energy table of net prefixes: row N holds the average pair-energy of the
/// first N lifted points, N = 2..n_max. With `skip_zero` the index-0 point
/// (which lifts to the north pole) is dropped before taking prefixes.
///
/// Rows with a coincident pair and `s >= 0` are recorded as failures (the
/// prefix energy is the infinite sentinel there). Net tables are tagged
/// "net" in their provenance so validators know monotonicity defects are
/// expected: nets are not optimizers.
pub fn net_energy_curve(s: f64, n_max: usize, skip_zero: bool) -> Result<(EnergyTable, Vec<usize>)> {
    if n_max < 3 {
        return Err(Error::Domain("need n_max >= 3".into()));
    }
    let generate = if skip_zero { n_max + 1 } else { n_max };
    let net = lambert_lift(&sobol_points(generate)?)?;
    let pts: Vec<Vec3> = net
        .config
        .points()
        .iter()
        .skip(if skip_zero { 1 } else { 0 })
        .map(|p| p.as_vec())
        .collect();
    let mut table = EnergyTable::new(s);
    let mut infinite_rows = Vec::new();
    let mut pair_sum = 0.0;
    for k in 1..pts.len() {
        // Extend the pair sum by the new point's interactions.
        for j in 0..k {
            let r = (2.0 - 2.0 * pts[j].dot(pts[k])).clamp(0.0, 4.0).sqrt();
            pair_sum += pair_energy_raw(s, r);
        }
        let n = k + 1;
        let avg = pair_sum * 2.0 / (n as f64 * (n - 1) as f64);
        if avg.is_finite() {
            table.insert(n, avg, "net");
        } else {
            infinite_rows.push(n);
        }
    }
    Ok((table, infinite_rows))
}
