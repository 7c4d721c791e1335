use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::potentials::least_squares;

/// A pass/fail check evaluated on report columns alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `min(column) ≥ rho · max(column)`, all entries positive and finite.
    RatioStable { column: String, rho: f64 },
    /// Least-squares fit `y = c ln x + b + e/x`; requires
    /// `c ∈ [slope_min, slope_max]` and `R² ≥ r2_min`.
    LogGrowth {
        x: String,
        y: String,
        slope_min: f64,
        slope_max: f64,
        r2_min: f64,
    },
    /// `(y_last − y(x_at)) / y_last < max_fraction` for a column of partial
    /// sums, `x_at` the largest `x` not exceeding `after`.
    TailFraction {
        x: String,
        y: String,
        after: f64,
        max_fraction: f64,
    },
    /// Slope of `ln y` against `ln x` within `rel_tol` of `expected`.
    PowerLaw {
        x: String,
        y: String,
        expected: f64,
        rel_tol: f64,
    },
    /// `max |column| ≤ max`.
    MaxAbs { column: String, max: f64 },
    /// Strictly decreasing from the first row.
    Decreasing { column: String },
    /// Slope of `ln y` against `ln x` gives a condensation ratio
    /// `2^{1+slope}`; the series is called divergent when it is at least
    /// `1 − 1e−9`. Passes when that matches `expect_divergent`.
    Condensation {
        x: String,
        y: String,
        expect_divergent: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub statistic: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub outcomes: Vec<RuleOutcome>,
}

/// Threshold for [`Rule::Condensation`].
pub const CONDENSATION_DIVERGENCE: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub parameters: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub rules: Vec<Rule>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    /// Assembles a report and evaluates its rules on the rows.
    pub fn new(
        id: impl Into<String>,
        parameters: BTreeMap<String, Value>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Argument(format!(
                    "row {i} has {} values for {} columns",
                    row.len(),
                    columns.len()
                )));
            }
        }
        let verdict = evaluate(&columns, &rows, &rules)?;
        Ok(Self {
            id: id.into(),
            parameters,
            columns,
            rows,
            rules,
            verdict,
        })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        column(&self.columns, &self.rows, name)
    }

    /// The verdict evaluated afresh from the stored rows and rules.
    pub fn recompute_verdict(&self) -> Result<Verdict> {
        evaluate(&self.columns, &self.rows, &self.rules)
    }

    pub fn passed(&self) -> bool {
        self.verdict.pass
    }

    /// One line per row; the first column is written as an integer, the rest
    /// with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut line = String::new();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                if j == 0 && v.fract() == 0.0 && v.abs() < 1e15 {
                    let _ = write!(line, "{}", *v as i64);
                } else {
                    let _ = write!(line, "{v:.16e}");
                }
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .verdict
            .outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.detail.clone())
            .collect();
        if failed.is_empty() {
            format!("{}: PASS ({} rows)", self.id, self.rows.len())
        } else {
            format!("{}: FAIL ({})", self.id, failed.join("; "))
        }
    }
}

fn column(columns: &[String], rows: &[Vec<f64>], name: &str) -> Result<Vec<f64>> {
    let j = columns
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| Error::Argument(format!("no column named {name}")))?;
    Ok(rows.iter().map(|r| r[j]).collect())
}

/// Slope, intercept and `R²` of `y = c ln x + b + e/x`, plus `e`.
pub fn log_model_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len();
    // Normal equations for the basis (ln x, 1, 1/x).
    let basis = |x: f64| [x.ln(), 1.0, 1.0 / x];
    let mut a = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let f = basis(x);
        for i in 0..3 {
            rhs[i] += f[i] * y;
            for j in 0..3 {
                a[i][j] += f[i] * f[j];
            }
        }
    }
    let coef = solve3(a, rhs).unwrap_or([f64::NAN; 3]);
    let mean = ys.iter().sum::<f64>() / n as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let f = basis(x);
        let pred = coef[0] * f[0] + coef[1] * f[1] + coef[2] * f[2];
        ss_res += (y - pred).powi(2);
        ss_tot += (y - mean).powi(2);
    }
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (coef[0], coef[1], r2, coef[2])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    least_squares(&lx, &ly).0
}

/// Evaluates every rule; the verdict passes when all of them do.
pub fn evaluate(columns: &[String], rows: &[Vec<f64>], rules: &[Rule]) -> Result<Verdict> {
    let col = |name: &str| column(columns, rows, name);
    let mut outcomes = Vec::with_capacity(rules.len());
    for rule in rules {
        let (statistic, pass, detail) = match rule {
            Rule::RatioStable { column, rho } => {
                let v = col(column)?;
                let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let spread = lo / hi;
                let ok = !v.is_empty() && lo > 0.0 && hi.is_finite() && spread >= *rho;
                (
                    spread,
                    ok,
                    format!("{column}: min/max = {spread:.6} (need ≥ {rho})"),
                )
            }
            Rule::LogGrowth {
                x,
                y,
                slope_min,
                slope_max,
                r2_min,
            } => {
                let (c, _, r2, _) = log_model_fit(&col(x)?, &col(y)?);
                let ok = c >= *slope_min && c <= *slope_max && r2 >= *r2_min;
                (
                    c,
                    ok,
                    format!("{y} ~ c ln {x}: c = {c:.6} (need [{slope_min}, {slope_max}]), R² = {r2:.6} (need ≥ {r2_min})"),
                )
            }
            Rule::TailFraction {
                x,
                y,
                after,
                max_fraction,
            } => {
                let xs = col(x)?;
                let ys = col(y)?;
                let last = *ys.last().unwrap_or(&f64::NAN);
                let at = xs
                    .iter()
                    .zip(&ys)
                    .rev()
                    .find(|(xv, _)| **xv <= *after)
                    .map(|(_, yv)| *yv)
                    .unwrap_or(0.0);
                let frac = (last - at) / last;
                (
                    frac,
                    frac.is_finite() && frac < *max_fraction,
                    format!("{y}: tail beyond {x} = {after} is {frac:.6} of total (need < {max_fraction})"),
                )
            }
            Rule::PowerLaw {
                x,
                y,
                expected,
                rel_tol,
            } => {
                let slope = log_log_slope(&col(x)?, &col(y)?);
                let err = ((slope - expected) / expected).abs();
                (
                    slope,
                    err <= *rel_tol,
                    format!(
                        "ln {y} vs ln {x}: slope {slope:.6}, expected {expected:.6} ± {rel_tol}"
                    ),
                )
            }
            Rule::MaxAbs { column, max } => {
                let m = col(column)?.iter().map(|v| v.abs()).fold(0.0, f64::max);
                (
                    m,
                    m <= *max,
                    format!("max |{column}| = {m:.3e} (need ≤ {max:e})"),
                )
            }
            Rule::Decreasing { column } => {
                let v = col(column)?;
                let ok = v.windows(2).all(|w| w[1] < w[0]);
                let last = *v.last().unwrap_or(&f64::NAN);
                (last, ok, format!("{column} strictly decreasing: {ok}"))
            }
            Rule::Condensation {
                x,
                y,
                expect_divergent,
            } => {
                let ratio = 2f64.powf(1.0 + log_log_slope(&col(x)?, &col(y)?));
                let divergent = ratio >= CONDENSATION_DIVERGENCE;
                (
                    ratio,
                    divergent == *expect_divergent,
                    format!(
                        "condensation ratio {ratio:.12}: {} (expected {})",
                        if divergent { "divergent" } else { "convergent" },
                        if *expect_divergent {
                            "divergent"
                        } else {
                            "convergent"
                        }
                    ),
                )
            }
        };
        outcomes.push(RuleOutcome {
            rule: rule.clone(),
            statistic,
            pass,
            detail,
        });
    }
    Ok(Verdict {
        pass: outcomes.iter().all(|o| o.pass),
        outcomes,
    })
}
