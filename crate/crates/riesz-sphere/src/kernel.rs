//! Pair-energy kernels, configuration averages, potentials, point energies,
//! gradients, and the exact identities connecting them.
//!
//! The standardized Riesz pair-energy of two sphere points a chordal distance
//! `r` apart is `V_s(r) = (r^-s - 1)/s` for `s != 0` and `V_0(r) = -ln r`,
//! the s -> 0 limit. The logarithmic branch is selected by `s == 0.0` exactly.

use crate::asympt::{w_log, w_s, C_2};
use crate::error::{Error, Result};
use crate::geom::{chordal_distance, Configuration, UnitVector, Vec3};
use crate::zeta::zeta_hexagonal;

/// Below this |s| the general branch switches to the numerically stable
/// expm1 evaluation so that V_s(r) -> -ln r without catastrophic cancellation.
pub const LOG_BRANCH_THRESHOLD: f64 = 1e-8;

/// Standardized Riesz pair-energy V_s(r), without argument checking.
///
/// `r = 0` yields `-1/s` for `s < 0` and the `+inf` sentinel for `s >= 0`
/// (for `s = 0` this is the natural value of `-ln 0`). Callers guarantee
/// `r >= 0`.
#[inline]
pub(crate) fn pair_energy_raw(s: f64, r: f64) -> f64 {
    if r == 0.0 {
        return if s < 0.0 { -1.0 / s } else { f64::INFINITY };
    }
    if s == 0.0 {
        return -r.ln();
    }
    if s.abs() < LOG_BRANCH_THRESHOLD {
        // (r^-s - 1)/s = -ln r * (e^x - 1)/x with x = -s ln r.
        let l = r.ln();
        let x = -s * l;
        return if x == 0.0 { -l } else { -l * x.exp_m1() / x };
    }
    (r.powf(-s) - 1.0) / s
}

/// Standardized Riesz pair-energy V_s(r).
///
/// Errors on `r < 0`; `r = 0` with `s >= 0` returns the positive-infinity
/// sentinel so that degenerate configurations compare as strictly worse.
pub fn pair_energy(s: f64, r: f64) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::Domain(format!("distance r = {r} out of range")));
    }
    Ok(pair_energy_raw(s, r))
}

/// Average standardized Riesz pair-energy of a configuration,
/// `(2 / N(N-1)) * sum_{i<j} V_s(|q_i - q_j|)`.
///
/// An infinity sentinel propagates from coincident pairs when `s >= 0`.
pub fn average_pair_energy(s: f64, c: &Configuration) -> f64 {
    let n = c.len();
    let mut sum = 0.0;
    for (_, _, r) in c.pair_distances() {
        sum += pair_energy_raw(s, r);
    }
    sum * 2.0 / (n as f64 * (n - 1) as f64)
}

/// Sphere-adjusted pair-energy.
///
/// * `s < 2`, `s != 0`: `(r^-s - W_s)/s`
/// * `s = 0`: `-ln r - W_log`
/// * `2 < s < 4`: re-adjusted branch `(r^-s - W_s - (sqrt(3)/(8 pi))^{s/2} zeta_Lambda(s) N^{s/2-1})/s`
/// * `s = 2`: re-adjusted branch `(r^-2 - C_2 - (1/4) ln N)/2`
///
/// The re-adjusted branches need `n_for_readjust`, the N entering the
/// N-dependent subtraction.
pub fn adjusted_pair_energy(s: f64, r: f64, n_for_readjust: Option<usize>) -> Result<f64> {
    if r <= 0.0 || r.is_nan() {
        return Err(Error::Domain(format!("distance r = {r} out of range")));
    }
    if s >= 4.0 {
        return Err(Error::Domain(format!(
            "adjusted pair-energy unsupported for s = {s} >= 4"
        )));
    }
    if s == 0.0 {
        return Ok(-r.ln() - w_log());
    }
    if s < 2.0 {
        if s.abs() < LOG_BRANCH_THRESHOLD {
            // V_s + (1 - W_s)/s, both evaluated stably near s = 0.
            return Ok(pair_energy_raw(s, r) + one_minus_ws_over_s(s));
        }
        return Ok((r.powf(-s) - w_s(s)?) / s);
    }
    let n = n_for_readjust.ok_or_else(|| {
        Error::Domain("re-adjusted branch (s >= 2) requires the configuration size N".into())
    })? as f64;
    if s == 2.0 {
        return Ok(0.5 * (r.powi(-2) - C_2 - 0.25 * n.ln()));
    }
    let lattice = (3f64.sqrt() / (8.0 * std::f64::consts::PI)).powf(s / 2.0)
        * zeta_hexagonal(s)?
        * n.powf(s / 2.0 - 1.0);
    Ok((r.powf(-s) - w_s(s)? - lattice) / s)
}

/// (1 - W_s)/s evaluated stably through s = 0, where its limit is -W_log.
pub(crate) fn one_minus_ws_over_s(s: f64) -> f64 {
    if s.abs() < LOG_BRANCH_THRESHOLD {
        // W_s = 2^{1-s}/(2-s); (1 - W_s)/s -> -W'(0) = -W_log as s -> 0,
        // with next order (W_log^2 - W''(0))/2 * s-ish; the linear expansion
        // below keeps ~1e-16 accuracy for |s| < 1e-8.
        // (1 - W_s)/s = -(W_s - 1)/s; W_s - 1 = W_log s + c2 s^2 + O(s^3),
        // c2 = W''(0)/2 = (ln 2)^2/2 - ln 2 + 1/4.
        let c2 = 0.5 * std::f64::consts::LN_2 * std::f64::consts::LN_2 - std::f64::consts::LN_2
            + 0.25;
        return -(w_log() + c2 * s);
    }
    (1.0 - 2f64.powf(1.0 - s) / (2.0 - s)) / s
}

/// Average sphere-adjusted pair-energy of a configuration. Uses the
/// configuration size for the re-adjusted branch when `s >= 2`.
pub fn average_adjusted_energy(s: f64, c: &Configuration) -> Result<f64> {
    let n = c.len();
    let mut sum = 0.0;
    for (_, _, r) in c.pair_distances() {
        sum += adjusted_pair_energy(s, r, Some(n))?;
    }
    Ok(sum * 2.0 / (n as f64 * (n - 1) as f64))
}

/// Standardized Riesz s-potential of a configuration at a field point,
/// `(1/N) sum_j V_s(|x - q_j|)`.
///
/// Finite everywhere for `s < 0`; the infinity sentinel appears when `x`
/// coincides with a configuration point and `s >= 0`.
pub fn potential_field(s: f64, c: &Configuration, x: UnitVector) -> f64 {
    let sum: f64 = c
        .points()
        .iter()
        .map(|&q| pair_energy_raw(s, chordal_distance(x, q)))
        .sum();
    sum / c.len() as f64
}

/// Average standardized Riesz point-energy of point `l` with respect to the
/// reduced configuration, `(1/(N-1)) sum_{j != l} V_s(|q_j - q_l|)`.
pub fn point_energy(s: f64, c: &Configuration, l: usize) -> Result<f64> {
    let n = c.len();
    if l >= n {
        return Err(Error::Domain(format!("point index {l} out of range for N={n}")));
    }
    let ql = c.point(l);
    let sum: f64 = (0..n)
        .filter(|&j| j != l)
        .map(|j| pair_energy_raw(s, chordal_distance(c.point(j), ql)))
        .sum();
    Ok(sum / (n - 1) as f64)
}

/// Residual of the master identity
/// `<V_s>(w_N) = ((N-2)/N) <V_s>(w_N \ {q_l}) + (2/N) * point_energy(l)`,
/// which vanishes identically for every configuration and label.
pub fn master_identity_residual(s: f64, c: &Configuration, l: usize) -> Result<f64> {
    let n = c.len();
    if n < 3 {
        return Err(Error::Domain("master identity needs N >= 3".into()));
    }
    let whole = average_pair_energy(s, c);
    let reduced = average_pair_energy(s, &c.without(l)?);
    let pt = point_energy(s, c, l)?;
    let nf = n as f64;
    Ok(whole - ((nf - 2.0) / nf * reduced + 2.0 / nf * pt))
}

/// Euclidean gradient of the average pair-energy projected to the tangent
/// spaces: for each i,
/// `g_i = -(2/(N(N-1))) sum_{j != i} |q_i - q_j|^(-s-2) (q_i - q_j)`,
/// then `g_i - (g_i . q_i) q_i`.
///
/// Errors on a coincident pair.
pub fn energy_gradient(s: f64, c: &Configuration) -> Result<Vec<Vec3>> {
    let n = c.len();
    let scale = -2.0 / (n as f64 * (n - 1) as f64);
    let mut grads = vec![Vec3::default(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = c.point(i).as_vec() - c.point(j).as_vec();
            let r2 = d.norm2();
            if r2 == 0.0 {
                return Err(Error::Domain(format!(
                    "coincident pair ({i}, {j}): gradient undefined"
                )));
            }
            // |d|^(-s-2) = (r^2)^(-(s+2)/2); s = 0 gives exponent -2.
            let w = r2.powf(-(s + 2.0) / 2.0);
            let f = d.scale(w * scale);
            grads[i] += f;
            grads[j] += -f;
        }
    }
    for (g, p) in grads.iter_mut().zip(c.points()) {
        let q = p.as_vec();
        *g = *g - q.scale(g.dot(q));
    }
    Ok(grads)
}

/// Direction of conversion between conventional Riesz s-energies
/// `E = sum_{i<j} r^-s` (or the log sum) and standardized averages `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertDirection {
    ConventionalToStandardized,
    StandardizedToConventional,
}

/// Converts between the conventional total energy E and the standardized
/// average v: `v = (1/s)(2E/(N(N-1)) - 1)` and its exact inverse
/// `E = (N(N-1)/2)(s v + 1)`. At `s = 0` the conversion is the pure scaling
/// by `2/(N(N-1))`.
pub fn convert_energy(s: f64, n: usize, value: f64, direction: ConvertDirection) -> f64 {
    let pairs = n as f64 * (n - 1) as f64 / 2.0;
    match direction {
        ConvertDirection::ConventionalToStandardized => {
            if s == 0.0 {
                value / pairs
            } else {
                (value / pairs - 1.0) / s
            }
        }
        ConvertDirection::StandardizedToConventional => {
            if s == 0.0 {
                value * pairs
            } else {
                pairs * (s * value + 1.0)
            }
        }
    }
}

/// Separation distance: the minimum pairwise chordal distance of the
/// configuration.
pub fn separation(c: &Configuration) -> f64 {
    c.pair_distances()
        .map(|(_, _, r)| r)
        .fold(f64::INFINITY, f64::min)
}

/// The packing functional `[ <V_s>(c) + 1/s ]^(-1/s)`, which converges to
/// the separation distance as s -> infinity and never falls below it.
pub fn large_s_packing_functional(s: f64, c: &Configuration) -> Result<f64> {
    if s <= 0.0 {
        return Err(Error::Domain("packing functional needs s > 0".into()));
    }
    let bracket = average_pair_energy(s, c) + 1.0 / s;
    if !(bracket > 0.0) {
        return Err(Error::Domain(format!(
            "nonpositive bracket {bracket} in packing functional"
        )));
    }
    Ok(bracket.powf(-1.0 / s))
}
