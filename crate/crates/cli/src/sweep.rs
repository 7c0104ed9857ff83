//! Bound sweeps and their CSV output.

use std::fmt::Write as _;

use rayon::prelude::*;

use definetti::ckmr::{definetti_rdm_formula, definetti_rdm_mc};
use definetti::metrics::{trace_distance, BoundReport};
use definetti::rdm::reduce;

use crate::config::SweepConfig;
use crate::error::CliError;

pub const CSV_HEADER: &str =
    "d,N,k,state,seed,trace_distance,bound_eq26,bound_eq27,bound_eq210,C_dkN,eq33_bound,mc_samples,mc_max_stderr";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub state: String,
    pub seed: u64,
    pub report: BoundReport,
    /// `(samples, max entrywise standard error)` when Monte Carlo ran.
    pub mc: Option<(usize, f64)>,
}

/// Shortest decimal that parses back to the same `f64`, switching to
/// exponent notation for very small or very large magnitudes.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let r = &self.report;
        let mut line = String::new();
        write!(
            line,
            "{},{},{},{},{},{},{},{},{},{},{},",
            r.d,
            r.n,
            r.k,
            self.state,
            self.seed,
            format_float(r.trace_distance),
            format_float(r.trace_bound),
            format_float(r.linear_bound),
            format_float(r.explicit_formula_bound),
            format_float(r.c_dkn),
            format_float(r.dimension_bound),
        )
        .expect("write to string");
        if let Some((samples, stderr)) = self.mc {
            write!(line, "{samples},{}", format_float(stderr)).expect("write to string");
        } else {
            line.push(',');
        }
        line
    }
}

/// The state column: the family, quoted when its parameters contain a
/// comma.
fn state_label(cfg: &SweepConfig) -> String {
    let s = cfg.state.to_string();
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s
    }
}

/// Compute every `(N, k)` row of the sweep, in parallel, sorted by
/// `(N, k, state)`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let mut ns = cfg.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let label = state_label(cfg);
    let jobs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| ks.iter().map(move |&k| (n, k))).collect();
    let rows: Vec<Result<SweepRow, CliError>> = jobs
        .par_iter()
        .map(|&(n, k)| {
            let state = cfg.state.build(cfg.d, n, cfg.seed)?;
            let gamma = reduce(&state, k)?;
            let tilde = definetti_rdm_formula(&state, k)?;
            let dist = trace_distance(gamma.operator(), tilde.operator())?;
            let report = BoundReport::new(cfg.d, k, n, dist, cfg.tolerance)?;
            let mc = if cfg.mc_samples > 0 {
                let est = definetti_rdm_mc(&state, k, cfg.mc_samples, cfg.seed)?;
                Some((est.samples, est.max_stderr()))
            } else {
                None
            };
            Ok(SweepRow {
                state: label.clone(),
                seed: cfg.seed,
                report,
                mc,
            })
        })
        .collect();
    rows.into_iter().collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

/// Rows whose trace distance exceeds one of the bounds.
pub fn violations(rows: &[SweepRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| !r.report.satisfied.all())
        .map(|r| {
            format!(
                "N={} k={}: trace distance {} violates {:?}",
                r.report.n, r.report.k, r.report.trace_distance, r.report.satisfied
            )
        })
        .collect()
}

/// Rows above `2kd/N`, a sharper rate that is not among the proven bounds.
pub fn informational_notes(rows: &[SweepRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| !r.report.satisfied.within_2kd_over_n)
        .map(|r| {
            let (d, n, k) = (r.report.d, r.report.n, r.report.k);
            format!(
                "note: N={n} k={k}: trace distance {} exceeds 2kd/N = {}",
                r.report.trace_distance,
                (2 * k * d) as f64 / n as f64
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use definetti::family::StateFamily;

    #[test]
    fn floats_round_trip() {
        for v in [0.0, 1.0, 2.0 / 3.0, 1e-20, 3.5e17, 0.5, 1e-5, 123.456, 4.0 / 3.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(1e-20), "1e-20");
    }

    #[test]
    fn worked_example_row() {
        let cfg = SweepConfig {
            d: 2,
            n_list: vec![1],
            k_list: vec![1],
            state: StateFamily::Hartree,
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].report.trace_distance - 2.0 / 3.0).abs() < 1e-10);
        let line = rows[0].to_csv();
        assert!(line.starts_with("2,1,1,hartree,0,0.666666666666666"));
        assert!(line.ends_with(",,"));
        assert_eq!(line.split(',').count(), 13);
    }

    #[test]
    fn hartree_distance_decreases_and_bounds_hold() {
        let cfg = SweepConfig {
            n_list: vec![16, 4, 8],
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        let ns: Vec<usize> = rows.iter().map(|r| r.report.n).collect();
        assert_eq!(ns, vec![4, 8, 16]);
        assert!(rows
            .windows(2)
            .all(|w| w[1].report.trace_distance < w[0].report.trace_distance));
        assert!(violations(&rows).is_empty());
        assert!(rows
            .iter()
            .all(|r| r.report.trace_distance <= r.report.trace_bound + cfg.tolerance));
    }

    #[test]
    fn mc_columns_and_quoting() {
        let cfg = SweepConfig {
            n_list: vec![3],
            state: StateFamily::BoseHubbard {
                hopping: 1.0,
                interaction: 0.5,
            },
            mc_samples: 500,
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        let csv = to_csv(&rows);
        let line = csv.lines().nth(1).unwrap();
        assert!(line.contains("\"bose-hubbard:J=1,U=0.5\""));
        assert!(line.contains(",500,"));
        assert!(!csv.contains('\r'));
    }
}
