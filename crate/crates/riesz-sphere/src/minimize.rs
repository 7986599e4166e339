//! Multi-start local minimization of the average pair-energy on the sphere,
//! producing putative minimal energies and record-holder configurations.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{
    square_pyramid_height, v_minus_two, v_subcritical_antipodal_odd, v_subcritical_even,
    v_subcritical_triangle_split,
};
use crate::geom::{Configuration, UnitVector, Vec3};
use crate::kernel::pair_energy_raw;
use crate::shapes::{realize, NamedShape};
use crate::table::EnergyTable;

/// Multi-start search options.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Number of random restarts (named shapes and warm starts come extra).
    pub restarts: usize,
    pub seed: u64,
    /// Tangent-gradient norm at which a restart stops.
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Tolerance of the final polish run from the best restart.
    pub polish_tol: Option<f64>,
}

impl MinimizeOptions {
    /// Restart budget `max(64, 8N)`, deterministic seed, 1e-10 / 1e-13
    /// gradient tolerances.
    pub fn for_n(n: usize, seed: u64) -> MinimizeOptions {
        MinimizeOptions {
            restarts: 64.max(8 * n),
            seed,
            grad_tol: 1e-10,
            max_iters: 20_000,
            polish_tol: Some(1e-13),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("need at least one restart".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::Domain("grad_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one local minimization (or of a whole multi-start search).
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub config: Configuration,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    /// Index of the start that produced the winner (0-based over the
    /// deterministic start list: shapes, then warm starts, then random).
    pub restart_index: usize,
}

/// Restart-pool bookkeeping for a multi-start search.
#[derive(Debug, Clone)]
pub struct PoolSummary {
    pub attempted: usize,
    pub failed: usize,
    /// Count of distinct local-minimum energies (separated by more than 1e-9).
    pub distinct_minima: usize,
}

/// N points drawn i.i.d. uniformly on the sphere (three standard normals,
/// normalized), deterministic in the seed.
pub fn random_config(n: usize, seed: u64) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::Domain("need n >= 2 points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec3> = (0..n).map(|_| random_sphere_point(&mut rng)).collect();
    Configuration::from_vecs(&pts)
}

fn random_sphere_point(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-6 {
            return v.scale(1.0 / n);
        }
    }
}

const COLLISION_DISTANCE: f64 = 1e-9;

fn energy_of(s: f64, pts: &[Vec3]) -> f64 {
    let n = pts.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r = (2.0 - 2.0 * pts[i].dot(pts[j])).clamp(0.0, 4.0).sqrt();
            sum += pair_energy_raw(s, r);
        }
    }
    sum * 2.0 / (n as f64 * (n - 1) as f64)
}

/// Tangent gradient; returns None on a coincident pair.
fn gradient_of(s: f64, pts: &[Vec3], out: &mut [Vec3]) -> Option<f64> {
    let n = pts.len();
    let scale = -2.0 / (n as f64 * (n - 1) as f64);
    for g in out.iter_mut() {
        *g = Vec3::default();
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = pts[i] - pts[j];
            let r2 = d.norm2();
            if r2 < COLLISION_DISTANCE * COLLISION_DISTANCE {
                return None;
            }
            let f = d.scale(r2.powf(-(s + 2.0) / 2.0) * scale);
            out[i] += f;
            out[j] += -f;
        }
    }
    let mut norm2 = 0.0;
    for (g, p) in out.iter_mut().zip(pts) {
        *g = *g - p.scale(g.dot(*p));
        norm2 += g.norm2();
    }
    Some(norm2.sqrt())
}

fn min_pair_distance(pts: &[Vec3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min((pts[i] - pts[j]).norm());
        }
    }
    best
}

/// Projected gradient descent with Armijo backtracking, switching to a
/// two-point secant (Barzilai-Borwein) trial step after the first 50
/// iterations. Points are renormalized after every update, and the energy
/// sequence is non-increasing by construction.
///
/// For `s >= 0` a pair collapsing below 1e-9 aborts the restart (the energy
/// sentinel is infinite there).
pub fn local_minimize(
    s: f64,
    start: &Configuration,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    opts.validate()?;
    if s <= -2.0 {
        return Err(Error::Domain(format!(
            "iterative search is meaningless at s = {s} <= -2 (degenerate landscape); \
             use the exact lanes"
        )));
    }
    let mut pts: Vec<Vec3> = start.points().iter().map(|p| p.as_vec()).collect();
    let n = pts.len();
    if s >= 0.0 && min_pair_distance(&pts) < COLLISION_DISTANCE {
        return Err(Error::Numeric("degenerate start: coincident pair".into()));
    }
    let mut grad = vec![Vec3::default(); n];
    let mut energy = energy_of(s, &pts);
    let mut grad_norm = gradient_of(s, &pts, &mut grad)
        .ok_or_else(|| Error::Numeric("collision at start".into()))?;
    let mut step = 0.1;
    let mut prev_pts: Option<Vec<Vec3>> = None;
    let mut prev_grad: Option<Vec<Vec3>> = None;
    let mut iterations = 0;
    while iterations < opts.max_iters && grad_norm > opts.grad_tol {
        iterations += 1;
        // Two-point secant scaling once the iteration has settled.
        if iterations > 50 {
            if let (Some(pp), Some(pg)) = (&prev_pts, &prev_grad) {
                let mut sy = 0.0;
                let mut ss = 0.0;
                for i in 0..n {
                    let ds = pts[i] - pp[i];
                    let dy = grad[i] - pg[i];
                    sy += ds.dot(dy);
                    ss += ds.dot(ds);
                }
                if sy > 0.0 && ss > 0.0 {
                    step = (ss / sy).clamp(1e-12, 1e3);
                }
            }
        }
        prev_pts = Some(pts.clone());
        prev_grad = Some(grad.clone());
        // Armijo backtracking on the retracted step.
        let mut t = step;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<Vec3> = pts
                .iter()
                .zip(&grad)
                .map(|(p, g)| {
                    let moved = *p - g.scale(t);
                    moved.scale(1.0 / moved.norm())
                })
                .collect();
            let e_trial = energy_of(s, &trial);
            if e_trial <= energy - 1e-4 * t * grad_norm * grad_norm {
                pts = trial;
                energy = e_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break; // stalled at floating-point resolution
        }
        step = (t * 2.0).min(1e3);
        if s >= 0.0 && min_pair_distance(&pts) < COLLISION_DISTANCE {
            return Err(Error::Numeric(format!(
                "pair collision during descent at s = {s}; restart"
            )));
        }
        grad_norm = match gradient_of(s, &pts, &mut grad) {
            Some(gn) => gn,
            None => {
                if s >= 0.0 {
                    return Err(Error::Numeric("pair collision during descent".into()));
                }
                break;
            }
        };
    }
    Ok(MinimizeResult {
        config: Configuration::from_vecs(&pts)?,
        energy,
        grad_norm,
        iterations,
        restart_index: 0,
    })
}

/// The deterministic start list: applicable named shapes, caller warm
/// starts, then `opts.restarts` random configurations.
fn start_list(
    s: f64,
    n: usize,
    opts: &MinimizeOptions,
    warm: &[Configuration],
) -> Vec<Configuration> {
    let mut starts = Vec::new();
    for shape in NamedShape::with_count(n) {
        let param = if shape.needs_parameter() {
            // Height-adjusted pyramid above the Newton branch, the constant
            // optimal z = -1/4 otherwise.
            Some(if s > 2.0 {
                square_pyramid_height(s, 1e-12).unwrap_or(-0.25)
            } else {
                -0.25
            })
        } else {
            None
        };
        if let Ok(c) = realize(shape, param) {
            starts.push(c);
        }
    }
    starts.extend_from_slice(warm);
    for i in 0..opts.restarts {
        if let Ok(c) = random_config(n, opts.seed.wrapping_add(i as u64)) {
            starts.push(c);
        }
    }
    starts
}

/// Best-of-restarts minimization with deterministic tie-break (lowest start
/// index wins on energies equal within 1e-12). Restarts run independently;
/// results are merged in start-index order so the outcome does not depend
/// on execution interleaving.
pub fn multi_start(s: f64, n: usize, opts: &MinimizeOptions) -> Result<(MinimizeResult, PoolSummary)> {
    multi_start_with_seeds(s, n, opts, &[])
}

/// `multi_start` with extra warm-start configurations (neighbor-N lifts and
/// the like) inserted after the named shapes.
pub fn multi_start_with_seeds(
    s: f64,
    n: usize,
    opts: &MinimizeOptions,
    warm: &[Configuration],
) -> Result<(MinimizeResult, PoolSummary)> {
    opts.validate()?;
    if n < 2 {
        return Err(Error::Domain("need n >= 2 points".into()));
    }
    let starts = start_list(s, n, opts, warm);
    let outcomes: Vec<Option<MinimizeResult>> = starts
        .par_iter()
        .enumerate()
        .map(|(idx, c)| {
            local_minimize(s, c, opts).ok().map(|mut r| {
                r.restart_index = idx;
                r
            })
        })
        .collect();
    let attempted = outcomes.len();
    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    let mut finished: Vec<MinimizeResult> = outcomes.into_iter().flatten().collect();
    if finished.is_empty() {
        return Err(Error::Numeric(format!(
            "all {attempted} restarts failed for N = {n}, s = {s}"
        )));
    }
    // Merge in restart-index order with the 1e-12 tie-break.
    let mut best = finished[0].clone();
    for r in &finished[1..] {
        if r.energy < best.energy - 1e-12 {
            best = r.clone();
        }
    }
    // Pool statistics over the sorted energies.
    finished.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let mut distinct = 1;
    for w in finished.windows(2) {
        if w[1].energy - w[0].energy > 1e-9 {
            distinct += 1;
        }
    }
    // Polish the winner.
    if let Some(polish_tol) = opts.polish_tol {
        let polish_opts = MinimizeOptions { grad_tol: polish_tol, ..*opts };
        if let Ok(p) = local_minimize(s, &best.config, &polish_opts) {
            if p.energy <= best.energy {
                best = MinimizeResult { restart_index: best.restart_index, ..p };
            }
        }
    }
    Ok((
        best,
        PoolSummary { attempted, failed, distinct_minima: distinct },
    ))
}

/// One scan row outcome.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub table: EnergyTable,
    /// Rows that could not be produced, with the failure reason.
    pub failures: Vec<(usize, String)>,
    /// Best configurations per N (empty for the exact s <= -2 lanes).
    pub configs: Vec<(usize, Configuration)>,
}

/// Scans N over a range at fixed s.
///
/// * `s > -2`: multi-start search per N with warm starts lifted from the
///   neighbouring rows (previous winner plus a random point on the way up,
///   best point-deletion of the next winner on a refinement sweep), iterated
///   until the table stops improving.
/// * `s = -2`: the exact centered-configuration energies.
/// * `s < -2`: the exact even-N split energies; odd N = 3 (and odd multiples
///   of 3) resolve by the antipodal-vs-triangle comparison; other odd N are
///   reported as failures (their optimizers are an open problem).
pub fn scan(s: f64, n_lo: usize, n_hi: usize, opts: &MinimizeOptions) -> Result<ScanOutcome> {
    if n_lo < 2 || n_hi < n_lo {
        return Err(Error::Domain(format!("bad scan range [{n_lo}, {n_hi}]")));
    }
    let mut table = EnergyTable::new(s);
    let mut failures = Vec::new();
    let mut configs = Vec::new();
    if s == -2.0 {
        for n in n_lo..=n_hi {
            table.insert(n, v_minus_two(n)?, "exact(centered)");
        }
        return Ok(ScanOutcome { table, failures, configs });
    }
    if s < -2.0 {
        for n in n_lo..=n_hi {
            if n % 2 == 0 {
                table.insert(n, v_subcritical_even(s, n)?, "exact(antipodal-split)");
            } else if n % 3 == 0 {
                let a = v_subcritical_antipodal_odd(s, n)?;
                let t = v_subcritical_triangle_split(s, n)?;
                let (v, which) = if a <= t {
                    (a, "comparison(antipodal-split)")
                } else {
                    (t, "comparison(triangle-split)")
                };
                table.insert(n, v, which);
            } else {
                failures.push((n, "odd-N optimizer below s = -2 is open".to_string()));
            }
        }
        return Ok(ScanOutcome { table, failures, configs });
    }

    let provenance = |n: usize| format!("computed(seed={},restarts={})", opts.seed, budget(opts, n));
    let mut best: Vec<Option<MinimizeResult>> = vec![None; n_hi + 2];

    // Up to three sweeps: forward with lift seeds, then refinement sweeps
    // with both-neighbour seeds, stopping once nothing improves.
    for sweep in 0..3 {
        let mut improved = false;
        for n in n_lo..=n_hi {
            let mut warm: Vec<Configuration> = Vec::new();
            if let Some(cur) = &best[n] {
                warm.push(cur.config.clone());
            }
            if n > 2 {
                if let Some(prev) = &best[n - 1] {
                    warm.extend(lift_starts(&prev.config, opts.seed, n, 6));
                }
            }
            if let Some(next) = best.get(n + 1).and_then(|o| o.as_ref()) {
                if let Some(dropped) = best_drop(s, &next.config) {
                    warm.push(dropped);
                }
            }
            let n_opts = MinimizeOptions {
                restarts: if sweep == 0 { budget(opts, n) } else { budget(opts, n) / 4 + 1 },
                seed: opts.seed.wrapping_add((sweep as u64) << 32),
                ..*opts
            };
            match multi_start_with_seeds(s, n, &n_opts, &warm) {
                Ok((result, _)) => {
                    let better = match &best[n] {
                        Some(old) => result.energy < old.energy - 1e-12,
                        None => true,
                    };
                    if better {
                        best[n] = Some(result);
                        improved = true;
                    }
                }
                Err(e) => {
                    if sweep == 0 {
                        failures.push((n, e.to_string()));
                    }
                }
            }
        }
        if !improved && sweep > 0 {
            break;
        }
    }
    for n in n_lo..=n_hi {
        if let Some(r) = &best[n] {
            table.insert(n, r.energy, &provenance(n));
            configs.push((n, r.config.clone()));
        }
    }
    Ok(ScanOutcome { table, failures, configs })
}

fn budget(opts: &MinimizeOptions, n: usize) -> usize {
    opts.restarts.max(8 * n).max(16)
}

/// Warm starts for N points from an (N-1)-point winner: the winner with one
/// uniformly random point appended, several variants.
fn lift_starts(prev: &Configuration, seed: u64, n: usize, variants: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    for k in 0..variants {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k as u64,
        );
        let p = random_sphere_point(&mut rng);
        if let Ok(u) = UnitVector::normalize(p) {
            out.push(prev.with_point(u));
        }
    }
    out
}

/// The (N-1)-point configuration obtained from an N-point winner by
/// deleting the point whose removal leaves the lowest energy.
fn best_drop(s: f64, next: &Configuration) -> Option<Configuration> {
    let mut best: Option<(f64, Configuration)> = None;
    for l in 0..next.len() {
        if let Ok(c) = next.without(l) {
            let e = energy_of(s, &c.points().iter().map(|p| p.as_vec()).collect::<Vec<_>>());
            if best.as_ref().map_or(true, |(be, _)| e < *be) {
                best = Some((e, c));
            }
        }
    }
    best.map(|(_, c)| c)
}
