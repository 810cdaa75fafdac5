//! Aggregation of trial records into per-size statistics and polynomial
//! order-of-growth fits.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

use super::records::TrialRecord;

/// Minimum number of distinct problem sizes with a finite median before a
/// log-log slope is fitted.
pub const SLOPE_MIN_SIZES: usize = 3;

/// Aggregate over all trials of one configuration at one problem size.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRow {
    pub problem: String,
    pub algo: String,
    pub mutation: String,
    pub crossover: String,
    pub pc: f64,
    pub mu: Option<usize>,
    pub n: usize,
    /// Largest budget among the aggregated records (they normally agree;
    /// they can differ when files with per-size budgets are concatenated).
    pub budget: u64,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Median evaluations among successful trials; absent without one.
    pub median_success_evals: Option<f64>,
    pub mean_success_evals: Option<f64>,
    pub max_success_evals: Option<u64>,
    /// Trials that ran out of budget. Runs stop only on success or an
    /// exhausted budget, so this counts exactly the failures.
    pub budget_exhausted: u64,
}

/// Least-squares slope of log(median evaluations) against log(n) for one
/// configuration across its problem sizes: an empirical polynomial degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    /// Rendered configuration label.
    pub config: String,
    /// Number of (n, median) points entering the fit.
    pub points: usize,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    /// One row per (configuration, problem size), configurations in
    /// lexicographic order, sizes ascending.
    pub rows: Vec<GroupRow>,
    /// One fit per configuration with at least [`SLOPE_MIN_SIZES`] sizes
    /// whose median exists.
    pub slopes: Vec<SlopeFit>,
}

/// Configuration identity: everything except the problem size, the budget,
/// and per-trial data. `pc` enters via its canonical rendering, which is
/// exact for round-trippable floats.
type GroupKey = (String, String, String, String, String, Option<usize>);

fn group_key(r: &TrialRecord) -> GroupKey {
    (
        r.problem.clone(),
        r.algo.clone(),
        r.mutation.clone(),
        r.crossover.clone(),
        r.pc.to_string(),
        r.mu,
    )
}

fn config_label(row: &GroupRow) -> String {
    let mu = row
        .mu
        .map(|m| m.to_string())
        .unwrap_or_else(|| "-".into());
    format!(
        "problem={} algo={} mutation={} crossover={} pc={} mu={mu}",
        row.problem, row.algo, row.mutation, row.crossover, row.pc
    )
}

/// Aggregates records per configuration and problem size, then fits growth
/// slopes where enough sizes are present. Errors on empty input or on
/// records violating their structural invariants.
pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::BadParameter(
            "cannot summarize an empty record set".into(),
        ));
    }
    let mut cells: BTreeMap<GroupKey, BTreeMap<usize, Vec<&TrialRecord>>> = BTreeMap::new();
    for record in records {
        record.validate()?;
        cells
            .entry(group_key(record))
            .or_default()
            .entry(record.n)
            .or_default()
            .push(record);
    }

    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for (_, by_n) in cells {
        let mut fit_points: Vec<(f64, f64)> = Vec::new();
        let group_start = rows.len();
        for (n, cell) in by_n {
            let row = aggregate_cell(n, &cell);
            if let Some(median) = row.median_success_evals {
                fit_points.push(((n as f64).ln(), median.ln()));
            }
            rows.push(row);
        }
        if fit_points.len() >= SLOPE_MIN_SIZES {
            slopes.push(SlopeFit {
                config: config_label(&rows[group_start]),
                points: fit_points.len(),
                slope: least_squares_slope(&fit_points),
            });
        }
    }
    Ok(Summary { rows, slopes })
}

fn aggregate_cell(n: usize, cell: &[&TrialRecord]) -> GroupRow {
    let first = cell[0];
    let mut success_evals: Vec<u64> = cell
        .iter()
        .filter(|r| r.success)
        .map(|r| r.evaluations_used)
        .collect();
    success_evals.sort_unstable();
    let successes = success_evals.len() as u64;
    let trials = cell.len() as u64;

    let median_success_evals = match success_evals.len() {
        0 => None,
        len if len % 2 == 1 => Some(success_evals[len / 2] as f64),
        len => Some((success_evals[len / 2 - 1] + success_evals[len / 2]) as f64 / 2.0),
    };
    let mean_success_evals = if success_evals.is_empty() {
        None
    } else {
        Some(success_evals.iter().sum::<u64>() as f64 / success_evals.len() as f64)
    };

    GroupRow {
        problem: first.problem.clone(),
        algo: first.algo.clone(),
        mutation: first.mutation.clone(),
        crossover: first.crossover.clone(),
        pc: first.pc,
        mu: first.mu,
        n,
        budget: cell.iter().map(|r| r.budget).max().unwrap_or(0),
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        median_success_evals,
        mean_success_evals,
        max_success_evals: success_evals.last().copied(),
        budget_exhausted: trials - successes,
    }
}

/// Ordinary least squares through (x, y) points; the caller guarantees at
/// least two distinct x values.
fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let covariance: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let variance: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    covariance / variance
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = [
            "problem",
            "algo",
            "mutation",
            "crossover",
            "pc",
            "mu",
            "n",
            "budget",
            "trials",
            "successes",
            "rate",
            "median_evals",
            "mean_evals",
            "max_evals",
            "exhausted",
        ];
        let mut table: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
        for row in &self.rows {
            table.push(vec![
                row.problem.clone(),
                row.algo.clone(),
                row.mutation.clone(),
                row.crossover.clone(),
                row.pc.to_string(),
                row.mu.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
                row.n.to_string(),
                row.budget.to_string(),
                row.trials.to_string(),
                row.successes.to_string(),
                format!("{:.3}", row.success_rate),
                render_float(row.median_success_evals),
                render_float(row.mean_success_evals),
                row.max_success_evals
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "-".into()),
                row.budget_exhausted.to_string(),
            ]);
        }

        let mut widths = vec![0usize; header.len()];
        for row in &table {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            writeln!(f, "{}", line.join("  ").trim_end())?;
        }

        for fit in &self.slopes {
            writeln!(
                f,
                "log-log slope {:.3} across {} sizes for {}",
                fit.slope, fit.points, fit.config
            )?;
        }
        Ok(())
    }
}

fn render_float(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, evals: u64, success: bool) -> TrialRecord {
        TrialRecord {
            trial_id: 0,
            seed: 1,
            problem: "rrrmo".into(),
            n,
            algo: "gsemo".into(),
            mutation: "std".into(),
            crossover: "onepoint".into(),
            pc: 0.5,
            mu: None,
            budget: 1_000_000_000,
            evaluations_used: evals,
            generations: evals.saturating_sub(1),
            first_pareto_hit_evals: success.then_some(evals / 2),
            coverage_fraction: if success { 1.0 } else { 0.5 },
            success,
            wall_time_ms: None,
        }
    }

    #[test]
    fn one_full_success_cell() {
        let records = vec![
            record(10, 100, true),
            record(10, 300, true),
            record(10, 200, true),
        ];
        let summary = summarize(&records).unwrap();
        assert_eq!(summary.rows.len(), 1);
        let row = &summary.rows[0];
        assert_eq!(row.success_rate, 1.0);
        assert_eq!(row.median_success_evals, Some(200.0));
        assert_eq!(row.mean_success_evals, Some(200.0));
        assert_eq!(row.max_success_evals, Some(300));
        assert_eq!(row.budget_exhausted, 0);
        assert!(summary.slopes.is_empty());
    }

    #[test]
    fn failures_leave_the_medians_absent() {
        let records = vec![record(10, 500, false), record(10, 500, false)];
        let summary = summarize(&records).unwrap();
        let row = &summary.rows[0];
        assert_eq!(row.success_rate, 0.0);
        assert_eq!(row.median_success_evals, None);
        assert_eq!(row.mean_success_evals, None);
        assert_eq!(row.max_success_evals, None);
        assert_eq!(row.budget_exhausted, 2);
    }

    #[test]
    fn even_counts_average_the_middle_pair() {
        let records = vec![
            record(10, 100, true),
            record(10, 200, true),
            record(10, 400, true),
            record(10, 800, false),
        ];
        let summary = summarize(&records).unwrap();
        let row = &summary.rows[0];
        assert_eq!(row.trials, 4);
        assert_eq!(row.successes, 3);
        assert_eq!(row.success_rate, 0.75);
        assert_eq!(row.median_success_evals, Some(200.0));
        let records = vec![
            record(10, 100, true),
            record(10, 200, true),
            record(10, 400, true),
            record(10, 800, true),
        ];
        let summary = summarize(&records).unwrap();
        assert_eq!(summary.rows[0].median_success_evals, Some(300.0));
    }

    #[test]
    fn a_quartic_family_fits_slope_four() {
        let mut records = Vec::new();
        for n in [10u64, 20, 30, 40] {
            for wobble in [0, 1] {
                // Medians land exactly on 3 n^4 regardless of the wobble.
                records.push(record(n as usize, 3 * n.pow(4) - wobble, true));
                records.push(record(n as usize, 3 * n.pow(4) + wobble, true));
            }
        }
        let summary = summarize(&records).unwrap();
        assert_eq!(summary.rows.len(), 4);
        assert_eq!(summary.slopes.len(), 1);
        let fit = &summary.slopes[0];
        assert_eq!(fit.points, 4);
        assert!((fit.slope - 4.0).abs() < 1e-9, "slope {}", fit.slope);
        assert!(fit.config.contains("problem=rrrmo"));

        // Two sizes are not enough for a fit.
        let short: Vec<TrialRecord> = records
            .iter()
            .filter(|r| r.n <= 20)
            .cloned()
            .collect();
        assert!(summarize(&short).unwrap().slopes.is_empty());
    }

    #[test]
    fn distinct_configurations_do_not_mix() {
        let mut other = record(10, 100, true);
        other.algo = "nsgaii".into();
        other.mu = Some(20);
        let records = vec![record(10, 100, true), other, record(20, 200, true)];
        let summary = summarize(&records).unwrap();
        assert_eq!(summary.rows.len(), 3);
        // Rows come out config-major, sizes ascending inside a config.
        let labels: Vec<(String, usize)> = summary
            .rows
            .iter()
            .map(|r| (r.algo.clone(), r.n))
            .collect();
        assert_eq!(
            labels,
            vec![
                ("gsemo".to_string(), 10),
                ("gsemo".to_string(), 20),
                ("nsgaii".to_string(), 10),
            ]
        );
    }

    #[test]
    fn empty_and_corrupt_inputs_are_refused() {
        assert!(summarize(&[]).is_err());
        let mut lying = record(10, 100, true);
        lying.coverage_fraction = 0.25;
        assert!(summarize(&[lying]).is_err());
    }

    #[test]
    fn the_table_renders_every_cell() {
        let records = vec![record(10, 100, true), record(20, 99_999, false)];
        let text = summarize(&records).unwrap().to_string();
        assert!(text.contains("problem"), "{text}");
        assert!(text.contains("median_evals"), "{text}");
        assert!(text.contains("rrrmo"), "{text}");
        assert!(text.contains("100.0"), "{text}");
        assert!(text.contains('-'), "{text}");
        for line in text.lines() {
            assert!(!line.ends_with(' '), "trailing space in {line:?}");
        }
    }
}
