//! The non-sweep subcommands: dimension tables, convergence fits, the Wick
//! report and the tomography round trip.

use std::fmt::{self, Write as _};

use definetti::ckmr::definetti_rdm_formula;
use definetti::family::StateFamily;
use definetti::fock::{sym_dimension, SpaceShape, SymOperator};
use definetti::metrics::{trace_distance, trace_norm};
use definetti::rdm::{hartree_expectation, reduce};
use definetti::rng::{complex_gaussian, stream, Domain};
use definetti::tomography::reconstruct;
use definetti::wick::{normal_order, truncated_fock_check, verify_recurrences, wick_coefficients, NormalPoly, Word};

use crate::error::CliError;

/// Distances below this count as zero in the convergence fit.
pub const ZERO_DISTANCE: f64 = 1e-13;
/// Round-trip error accepted by the tomography demo.
pub const TOMOGRAPHY_TOL: f64 = 1e-8;
/// Deviation accepted by the truncated-Fock check.
pub const TRUNCATED_TOL: f64 = 1e-9;

/// `sym_dimension(d, N)` for every pair, one row per `d`.
pub fn dims_table(ds: &[usize], ns: &[usize]) -> Result<String, CliError> {
    let mut out = String::new();
    write!(out, "{:>4}", "d\\N").expect("write to string");
    for n in ns {
        write!(out, " {n:>12}").expect("write to string");
    }
    out.push('\n');
    for &d in ds {
        write!(out, "{d:>4}").expect("write to string");
        for &n in ns {
            match sym_dimension(d, n) {
                Ok(v) => write!(out, " {v:>12}"),
                Err(_) => write!(out, " {:>12}", "overflow"),
            }
            .expect("write to string");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Largest particle number the convergence study accepts for `d` modes.
pub fn convergence_limit(d: usize) -> usize {
    match d {
        0..=2 => 64,
        3 => 24,
        _ => 12,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub d: usize,
    pub k: usize,
    pub state: String,
    /// `(N, trace distance)` on the doubling grid.
    pub points: Vec<(usize, f64)>,
    /// Slope of `log(distance)` against `log(N)`; `None` when every
    /// distance vanishes.
    pub slope: Option<f64>,
}

impl ConvergenceReport {
    pub fn trivial(&self) -> bool {
        self.slope.is_none()
    }

    /// `(N_{i+1} dist_{i+1}) / (N_i dist_i)` for consecutive grid points.
    pub fn scaled_ratios(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].0 as f64 * w[1].1) / (w[0].0 as f64 * w[0].1))
            .collect()
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "state {} d={} k={}", self.state, self.d, self.k)?;
        writeln!(f, "{:>6}  {:>24}  {:>24}", "N", "trace_distance", "N*trace_distance")?;
        for &(n, dist) in &self.points {
            writeln!(f, "{n:>6}  {dist:>24e}  {:>24e}", n as f64 * dist)?;
        }
        match self.slope {
            None => writeln!(f, "all distances vanish: trivial convergence"),
            Some(s) => {
                let ratios: Vec<String> = self.scaled_ratios().iter().map(|r| format!("{r:.4}")).collect();
                writeln!(f, "N*distance ratios: {}", ratios.join(" "))?;
                writeln!(f, "fitted slope: {s:.4}")
            }
        }
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Trace distance between `γ^(k)` and its de Finetti approximation on the
/// grid `N_min, 2 N_min, 4 N_min, ... ≤ N_max`, with a log-log fit.
pub fn convergence(
    d: usize,
    k: usize,
    family: StateFamily,
    seed: u64,
    n_min: usize,
    n_max: usize,
) -> Result<ConvergenceReport, CliError> {
    if k == 0 || n_min < k {
        return Err(CliError::Usage(format!(
            "need 1 <= k <= N_min, got k={k}, N_min={n_min}"
        )));
    }
    let limit = convergence_limit(d);
    if n_max > limit {
        return Err(CliError::Usage(format!("N_max = {n_max} exceeds {limit} for d = {d}")));
    }
    if !family.supports(d) {
        return Err(CliError::Usage(format!(
            "state `{family}` is not available for d = {d}"
        )));
    }
    let mut grid = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        grid.push(n);
        n *= 2;
    }
    if grid.len() < 3 {
        return Err(CliError::Usage(format!(
            "degenerate fit: the grid {grid:?} has fewer than 3 points"
        )));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &n in &grid {
        let state = family.build(d, n, seed)?;
        let g = reduce(&state, k)?;
        let t = definetti_rdm_formula(&state, k)?;
        points.push((n, trace_distance(g.operator(), t.operator())?));
    }
    let slope = if points.iter().all(|&(_, dist)| dist <= ZERO_DISTANCE) {
        None
    } else {
        let fit: Vec<(f64, f64)> = points
            .iter()
            .filter(|&&(_, dist)| dist > ZERO_DISTANCE)
            .map(|&(n, dist)| ((n as f64).ln(), dist.ln()))
            .collect();
        if fit.len() < 3 {
            return Err(CliError::Usage(
                "degenerate fit: fewer than 3 non-zero distances".into(),
            ));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
        Some(least_squares_slope(&xs, &ys))
    };
    Ok(ConvergenceReport {
        d,
        k,
        state: family.to_string(),
        points,
        slope,
    })
}

/// Recurrence table, Wick coefficients and truncated-Fock deviations up to
/// `n_max`. Returns the report and whether everything passed.
pub fn wick_check(n_max: usize, cutoff: usize) -> Result<(String, bool), CliError> {
    let mut out = String::new();
    let mut pass = true;
    writeln!(out, "normal-ordering coefficients of a^n a*^n").expect("write to string");
    for n in 0..=n_max {
        let coeffs: Vec<String> = wick_coefficients(n).coeffs.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{n:>3}: [{}]", coeffs.join(", ")).expect("write to string");
    }
    let ccr = normal_order(&"a a*".parse::<Word>()?) == normal_order(&"a* a".parse::<Word>()?).add(&NormalPoly::one());
    pass &= ccr;
    writeln!(
        out,
        "canonical commutation relation: {}",
        if ccr { "ok" } else { "FAIL" }
    )
    .expect("write to string");
    if n_max >= 2 {
        let report = verify_recurrences(n_max)?;
        pass &= report.all_pass();
        write!(out, "{report}").expect("write to string");
    }
    let mut worst = 0.0f64;
    for n in 1..=n_max.min(cutoff.saturating_sub(1)).min(6) {
        let dev = truncated_fock_check(n, cutoff)?;
        worst = worst.max(dev);
        writeln!(out, "truncated Fock n={n} M={cutoff}: deviation {dev:e}").expect("write to string");
    }
    pass &= worst <= TRUNCATED_TOL;
    writeln!(out, "wick-check: {}", if pass { "PASS" } else { "FAIL" }).expect("write to string");
    Ok((out, pass))
}

/// A random Hermitian operator on `shape`, deterministic in `seed`.
pub fn random_hermitian(shape: SpaceShape, seed: u64) -> SymOperator {
    let n = shape.dim();
    let mut rng = stream(seed, Domain::Test, (shape.modes() * 64 + shape.particles()) as u64);
    let g = complex_gaussian(&mut rng, n * n);
    let mut m = SymOperator::zeros(shape);
    for r in 0..n {
        for c in 0..n {
            m.matrix[(r, c)] = (g[r * n + c] + g[c * n + r].conj()) * 0.5;
        }
    }
    m
}

/// Reconstruct a random Hermitian operator on `(d, k)` from its Hartree
/// expectations and return its trace-norm error.
pub fn tomography_round_trip(d: usize, k: usize, seed: u64) -> Result<f64, CliError> {
    let shape = SpaceShape::new(d, k)?;
    let gamma = random_hermitian(shape, seed);
    let q = |u: &definetti::fock::OneBodyVector| hartree_expectation(&gamma, u).expect("matching shape");
    let h = reconstruct(q, d, k)?;
    let diff = SymOperator {
        shape,
        matrix: &h.matrix - &gamma.matrix,
    };
    Ok(trace_norm(&diff)?)
}

pub fn tomography_demo(d: usize, k: usize, seed: u64) -> Result<(String, bool), CliError> {
    let err = tomography_round_trip(d, k, seed)?;
    let pass = err <= TOMOGRAPHY_TOL;
    let out = format!(
        "tomography d={d} k={k} seed={seed}: trace-norm round-trip error {err:e} ({})\n",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok((out, pass))
}
