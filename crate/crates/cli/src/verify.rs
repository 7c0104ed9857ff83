//! Invariant suites run by `definetti verify`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use definetti::ckmr::{
    definetti_rdm_mc, definetti_rdm_oracle, definetti_rdm_weighted, formula_weights, projector_integral_check,
    schur_identity_check,
};
use definetti::exact::binomial_f64;
use definetti::family::StateFamily;
use definetti::fock::{
    apply_annihilation, apply_creation, enumerate_basis, sym_dimension, SpaceShape, SymOperator, SymVector,
};
use definetti::metrics::{
    c_constant, c_constant_factorial_form, dimension_ratio_bounds, explicit_formula_bound_exact, hermitian_eig,
    intermediate_product_bound, one_minus_c_bound_exact, trace_bound, trace_distance,
};
use definetti::rdm::{hartree_expectation, reduce, reduce_oracle};
use definetti::rng::{complex_gaussian, haar_one_body, stream, Domain};
use definetti::states::MixedState;
use definetti::tomography::reconstruct;
use definetti::wick::{
    modified_laguerre, normal_order, truncated_fock_check, verify_recurrences, wick_coefficients, Word,
};
use definetti::C64;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn max_modes(self) -> usize {
        match self {
            Level::Quick => 2,
            Level::Full => 3,
        }
    }

    fn max_particles(self) -> usize {
        match self {
            Level::Quick => 6,
            Level::Full => 10,
        }
    }

    fn mc_samples(self) -> usize {
        match self {
            Level::Quick => 20_000,
            Level::Full => 100_000,
        }
    }
}

impl FromStr for Level {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(CliError::Usage(format!(
                "unknown level `{other}` (expected quick or full)"
            ))),
        }
    }
}

/// Deliberate defects injected to show that the suites catch them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Normalize the de Finetti formula by `binom(N+k+d, k)` instead of
    /// `binom(N+k+d-1, k)`.
    WeightPrefactor,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<11} {:<4} {:>5} checks  {:>8.2}s",
            self.name,
            if self.passed() { "ok" } else { "FAIL" },
            self.checks,
            self.elapsed.as_secs_f64()
        )?;
        for msg in self.failures.iter().take(5) {
            write!(f, "\n    {msg}")?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n    ... and {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

struct Checker {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    start: Instant,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker {
            name,
            checks: 0,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    /// Record an `Err` as a failure and return the value otherwise.
    fn ok<T>(&mut self, r: definetti::Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            elapsed: self.start.elapsed(),
        }
    }
}

/// The de Finetti formula as the suites see it, with the mutation applied.
pub fn formula(state: &MixedState, k: usize, mutation: Mutation) -> definetti::Result<SymOperator> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    let mut weights = formula_weights(d, n, k)?;
    if mutation == Mutation::WeightPrefactor {
        let ratio = binomial_f64(n + k + d - 1, k) / binomial_f64(n + k + d, k);
        for w in &mut weights {
            *w *= ratio;
        }
    }
    definetti_rdm_weighted(state, k, &weights)
}

fn grid(level: Level) -> Vec<(StateFamily, usize, usize)> {
    let mut out = Vec::new();
    for fam in StateFamily::all() {
        for d in 2..=level.max_modes() {
            if !fam.supports(d) {
                continue;
            }
            for n in 1..=level.max_particles() {
                out.push((fam, d, n));
            }
        }
    }
    out
}

fn fock_suite(level: Level) -> SuiteResult {
    let mut c = Checker::new("fock");
    for d in 1..=level.max_modes() + 1 {
        for n in 0..=level.max_particles() {
            let shape = SpaceShape::new(d, n).expect("small shape");
            let dim = sym_dimension(d, n).unwrap_or(0);
            c.check(
                dim as usize == enumerate_basis(shape).len() && dim as usize == shape.dim(),
                || format!("dimension mismatch at d={d} N={n}"),
            );
            if n == 0 {
                continue;
            }
            let mut rng = stream(n as u64, Domain::Test, d as u64);
            let v = SymVector::new(shape, complex_gaussian(&mut rng, shape.dim())).expect("shape");
            let f = haar_one_body(d, 1, n as u64);
            let g = haar_one_body(d, 2, n as u64);
            let lhs = apply_annihilation(&f, &apply_creation(&g, &v).unwrap())
                .unwrap()
                .amplitudes
                - apply_creation(&g, &apply_annihilation(&f, &v).unwrap())
                    .unwrap()
                    .amplitudes;
            let rhs = v.amplitudes.map(|z| z * f.inner(&g));
            let dev = (lhs - rhs).norm();
            c.check(dev < 1e-10, || format!("CCR defect {dev:e} at d={d} N={n}"));
        }
    }
    c.finish()
}

fn states_suite(level: Level) -> SuiteResult {
    let mut c = Checker::new("states");
    for (fam, d, n) in grid(level) {
        if let Some(s) = c.ok(fam.build(d, n, 11), || format!("{fam} d={d} N={n}")) {
            let valid = MixedState::new(s.operator().clone());
            c.check(valid.is_ok(), || format!("{fam} d={d} N={n}: {valid:?}"));
        }
    }
    c.finish()
}

fn rdm_suite(level: Level) -> SuiteResult {
    let mut c = Checker::new("rdm");
    for (fam, d, n) in grid(level) {
        let Some(s) = c.ok(fam.build(d, n, 5), || format!("{fam} d={d} N={n}")) else {
            continue;
        };
        for k in 0..n {
            let direct = reduce(&s, k).expect("k < N");
            let stepped = reduce(&reduce(&s, k + 1).expect("k < N"), k).expect("k < N");
            let dev = direct.operator().max_abs_diff(stepped.operator());
            c.check(dev <= 1e-12, || {
                format!("{fam} d={d} N={n} k={k}: partial trace chain {dev:e}")
            });
        }
        if (d as u128).pow(n as u32) <= 5_000 {
            for k in 1..=n.min(3) {
                let fast = reduce(&s, k).expect("k <= N");
                if let Some(slow) = c.ok(reduce_oracle(&s, k), || format!("oracle d={d} N={n}")) {
                    let dev = fast.operator().max_abs_diff(slow.operator());
                    c.check(dev <= 1e-12, || format!("{fam} d={d} N={n} k={k}: oracle {dev:e}"));
                }
            }
        }
    }
    c.finish()
}

fn ckmr_suite(level: Level, mutation: Mutation) -> SuiteResult {
    let mut c = Checker::new("ckmr");
    for (fam, d, n) in grid(level) {
        if n > 8 {
            continue;
        }
        let Some(s) = c.ok(fam.build(d, n, 17), || format!("{fam} d={d} N={n}")) else {
            continue;
        };
        for k in 0..=n.min(3) {
            let a = formula(&s, k, mutation).expect("k <= N");
            if let Some(b) = c.ok(definetti_rdm_oracle(&s, k), || format!("oracle d={d} N={n} k={k}")) {
                let dev = a.max_abs_diff(b.operator());
                c.check(dev <= 1e-10, || {
                    format!("{fam} d={d} N={n} k={k}: formula vs oracle {dev:e}")
                });
            }
        }
    }
    let e1 = definetti::fock::OneBodyVector::basis(2, 0);
    let s = definetti::states::hartree_state(&e1, 1).expect("unit vector");
    let t = formula(&s, 1, mutation).expect("k = N");
    let want = [2.0 / 3.0, 1.0 / 3.0];
    let dev = (0..2)
        .map(|i| (t.matrix[(i, i)].re - want[i]).abs())
        .fold(t.matrix[(0, 1)].norm(), f64::max);
    c.check(dev <= 1e-10, || format!("worked example deviates by {dev:e}"));

    let schur_max = match level {
        Level::Quick => 6,
        Level::Full => 10,
    };
    for d in 1..=level.max_modes() + 2 {
        for n in 0..=schur_max {
            if let Some(r) = c.ok(schur_identity_check(d, n), || format!("Schur d={d} N={n}")) {
                c.check(
                    r.exact_deviation.numer().bits() == 0 && r.float_deviation <= 1e-12,
                    || {
                        format!(
                            "Schur identity d={d} N={n}: {} / {:e}",
                            r.exact_deviation, r.float_deviation
                        )
                    },
                );
            }
        }
    }
    for d in 1..=level.max_modes() + 1 {
        for n in 0..=level.max_particles().min(6) {
            if (d as u128).pow(n as u32) > 100_000 {
                continue;
            }
            for k in 0..=n {
                if let Some(r) = c.ok(projector_integral_check(d, n, k), || {
                    format!("projector d={d} N={n} k={k}")
                }) {
                    c.check(r.value <= 1e-12, || {
                        format!("projector integral d={d} N={n} k={k}: {:e}", r.value)
                    });
                }
            }
        }
    }
    let s = StateFamily::RandomMixed { rank: None }
        .build(2, 6, 21)
        .expect("small state");
    let exact = formula(&s, 1, mutation).expect("k <= N");
    if let Some(est) = c.ok(definetti_rdm_mc(&s, 1, level.mc_samples(), 8), || "Monte Carlo".into()) {
        let worst = est
            .mean
            .matrix
            .iter()
            .zip(exact.matrix.iter())
            .zip(est.stderr.iter())
            .map(|((a, b), e)| (a - b).norm() / e.max(1e-300))
            .fold(0.0, f64::max);
        c.check(worst <= 5.0, || {
            format!("Monte Carlo off by {worst:.2} standard errors")
        });
    }
    c.finish()
}

fn metrics_suite(level: Level, mutation: Mutation) -> SuiteResult {
    let mut c = Checker::new("metrics");
    for (fam, d, n) in grid(level) {
        let Some(s) = c.ok(fam.build(d, n, 3), || format!("{fam} d={d} N={n}")) else {
            continue;
        };
        for k in 1..=n.min(3) {
            let g = reduce(&s, k).expect("k <= N");
            let t = formula(&s, k, mutation).expect("k <= N");
            let cdkn = c_constant(d, k, n).expect("k <= N").value;
            let Some(dist) = c.ok(trace_distance(g.operator(), &t), || {
                format!("distance d={d} N={n} k={k}")
            }) else {
                continue;
            };
            let ratio_bound = dimension_ratio_bounds(d, k, n).expect("k <= N").bound.value;
            let bound = trace_bound(d, k, n)
                .expect("k <= N")
                .min(ratio_bound)
                .min(2.0 * (1.0 - cdkn));
            c.check(dist <= bound + 1e-10, || {
                format!("{fam} d={d} N={n} k={k}: distance {dist} > {bound}")
            });
            let b = SymOperator {
                shape: t.shape,
                matrix: &t.matrix - g.matrix().scale(cdkn),
            };
            let min = hermitian_eig(&b).map(|e| e.values[0]).unwrap_or(f64::NEG_INFINITY);
            let tr = b.trace().re;
            c.check(min >= -1e-10 && (tr - (1.0 - cdkn)).abs() <= 1e-12, || {
                format!("{fam} d={d} N={n} k={k}: remainder min eigenvalue {min:e}, trace {tr}")
            });
        }
    }
    for d in 1..=6 {
        for n in 1..=40 {
            for k in 1..=n.min(6) {
                let chain = (|| -> definetti::Result<bool> {
                    let omc = one_minus_c_bound_exact(d, k, n)?;
                    let mid = intermediate_product_bound(d, k, n)?;
                    let top = explicit_formula_bound_exact(d, k, n)?;
                    let forms = c_constant(d, k, n)?.exact == c_constant_factorial_form(d, k, n)?;
                    Ok(omc <= mid && mid <= top && forms && dimension_ratio_bounds(d, k, n)?.bernoulli_ok)
                })();
                if let Some(ok) = c.ok(chain, || format!("bound chain d={d} N={n} k={k}")) {
                    c.check(ok, || format!("exact bound chain fails at d={d} N={n} k={k}"));
                }
            }
        }
    }
    c.finish()
}

fn wick_suite(level: Level) -> SuiteResult {
    let mut c = Checker::new("wick");
    if let Some(report) = c.ok(verify_recurrences(12), || "recurrences".into()) {
        for row in &report.rows {
            c.check(row.pass(), || format!("recurrences fail at n={}: {row:?}", row.n));
        }
    }
    for n in 0..=20 {
        let w = wick_coefficients(n);
        let l = modified_laguerre(n);
        let same = w.coeffs.len() == l.coeffs.len()
            && w.coeffs
                .iter()
                .zip(&l.coeffs)
                .all(|(a, b)| a.to_string() == b.to_string());
        c.check(same, || {
            format!("Wick coefficients differ from the modified Laguerre polynomial at n={n}")
        });
    }
    for n in 0..=8 {
        let word = Word::anti_normal(n, n).expect("short word");
        c.check(normal_order(&word) == wick_coefficients(n).to_poly(), || {
            format!("normal order of a^{n} a*^{n}")
        });
    }
    let orders: &[usize] = match level {
        Level::Quick => &[1, 2, 6],
        Level::Full => &[1, 2, 3, 4, 5, 6],
    };
    for &n in orders {
        if let Some(dev) = c.ok(truncated_fock_check(n, 60), || format!("truncated n={n}")) {
            c.check(dev <= 1e-9, || format!("truncated Fock n={n}: {dev:e}"));
        }
    }
    c.finish()
}

fn tomography_suite(level: Level) -> SuiteResult {
    let mut c = Checker::new("tomography");
    let repeats = match level {
        Level::Quick => 3,
        Level::Full => 20,
    };
    for d in 1..=level.max_modes() {
        for k in 1..=3 {
            let shape = SpaceShape::new(d, k).expect("small shape");
            for seed in 0..repeats {
                let mut rng = stream(seed, Domain::Test, (d * 10 + k) as u64);
                let g = complex_gaussian(&mut rng, shape.dim() * shape.dim());
                let m = random_hermitian(shape, g.as_slice());
                let q = |u: &definetti::fock::OneBodyVector| hartree_expectation(&m, u).expect("matching shape");
                if let Some(h) = c.ok(reconstruct(q, d, k), || format!("reconstruct d={d} k={k}")) {
                    let diff = SymOperator {
                        shape,
                        matrix: &h.matrix - &m.matrix,
                    };
                    let err = definetti::metrics::trace_norm(&diff).unwrap_or(f64::INFINITY);
                    c.check(err <= 1e-8, || format!("round trip d={d} k={k} seed={seed}: {err:e}"));
                }
            }
        }
    }
    c.finish()
}

fn random_hermitian(shape: SpaceShape, g: &[C64]) -> SymOperator {
    let mut m = SymOperator::zeros(shape);
    let n = shape.dim();
    for r in 0..n {
        for col in 0..n {
            m.matrix[(r, col)] = (g[r * n + col] + g[col * n + r].conj()) * 0.5;
        }
    }
    m
}

/// Run every suite at `level`.
pub fn run_suites(level: Level, mutation: Mutation) -> Vec<SuiteResult> {
    vec![
        fock_suite(level),
        states_suite(level),
        rdm_suite(level),
        ckmr_suite(level, mutation),
        metrics_suite(level, mutation),
        wick_suite(level),
        tomography_suite(level),
    ]
}
