use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{LabError, Result};

/// R² below which a slope verdict is INCONCLUSIVE (when the residual is also large).
pub const MIN_R_SQUARED: f64 = 0.9;

/// RMS residual (natural-log units) under which a fit describes the data
/// regardless of R²; flat data have R² ≈ 0 but are well fitted.
pub const FLAT_FIT_RMS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    /// Pass iff every verdict passes or is N/A; Inconclusive dominates Pass, Fail dominates both.
    pub fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::NotApplicable;
        for v in vs {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                (Verdict::Pass, _) | (_, Verdict::Pass) => Verdict::Pass,
                _ => Verdict::NotApplicable,
            };
        }
        out
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::NotApplicable => "N/A",
        };
        f.write_str(s)
    }
}

/// Least-squares fit y ≈ intercept + Σ slopes_j x_j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slopes: Vec<f64>,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl LinearFit {
    pub fn rms(&self) -> f64 {
        (self.residual / self.points.max(1) as f64).sqrt()
    }

    /// Whether the model describes the data well enough for a verdict.
    pub fn is_reliable(&self) -> bool {
        self.r_squared >= MIN_R_SQUARED || self.rms() <= FLAT_FIT_RMS
    }
}

/// Ordinary least squares with an intercept; `xs[i]` holds the regressors of point i.
pub fn least_squares(xs: &[Vec<f64>], ys: &[f64]) -> Result<LinearFit> {
    let m = xs.len();
    if m != ys.len() || m == 0 {
        return Err(LabError::InvalidArgument("regression needs matching, non-empty data".into()));
    }
    let k = xs[0].len();
    if xs.iter().any(|x| x.len() != k) {
        return Err(LabError::InvalidArgument("ragged regressors".into()));
    }
    if m < k + 1 {
        return Err(LabError::InvalidArgument(format!("{m} points for {} parameters", k + 1)));
    }
    // normal equations on centred data
    let mean_y = ys.iter().sum::<f64>() / m as f64;
    let mean_x: Vec<f64> = (0..k).map(|j| xs.iter().map(|x| x[j]).sum::<f64>() / m as f64).collect();
    let mut a = vec![0.0; k * k];
    let mut b = vec![0.0; k];
    for (x, &y) in xs.iter().zip(ys) {
        for i in 0..k {
            let xi = x[i] - mean_x[i];
            b[i] += xi * (y - mean_y);
            for j in 0..k {
                a[i * k + j] += xi * (x[j] - mean_x[j]);
            }
        }
    }
    let slopes = solve(&mut a, &mut b, k)?;
    let intercept = mean_y - slopes.iter().zip(&mean_x).map(|(s, x)| s * x).sum::<f64>();
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let fit = intercept + slopes.iter().zip(x).map(|(s, v)| s * v).sum::<f64>();
        ss_res += (y - fit).powi(2);
        ss_tot += (y - mean_y).powi(2);
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit { slopes, intercept, residual: ss_res, r_squared, points: m })
}

fn solve(a: &mut [f64], b: &mut [f64], k: usize) -> Result<Vec<f64>> {
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i * k + c].abs().total_cmp(&a[j * k + c].abs())).unwrap_or(c);
        if a[p * k + c].abs() < 1e-300 {
            return Err(LabError::InvalidArgument("degenerate regressors".into()));
        }
        if p != c {
            for j in 0..k {
                a.swap(c * k + j, p * k + j);
            }
            b.swap(c, p);
        }
        for i in c + 1..k {
            let f = a[i * k + c] / a[c * k + c];
            for j in c..k {
                a[i * k + j] -= f * a[c * k + j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|j| a[c * k + j] * x[j]).sum();
        x[c] = (b[c] - s) / a[c * k + c];
    }
    Ok(x)
}

/// Fit of ln y against ln x.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(LabError::InvalidArgument("log-log fit needs positive finite data".into()));
    }
    let xs: Vec<Vec<f64>> = x.iter().map(|v| vec![v.ln()]).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    least_squares(&xs, &ys)
}

/// One scan point; unused parameters are left empty in the CSV.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    #[serde(rename = "N")]
    pub big_n: Option<f64>,
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub eta: Option<f64>,
    pub r: Option<f64>,
    pub q: Option<f64>,
    pub t: Option<f64>,
    #[serde(rename = "T")]
    pub window: Option<f64>,
    pub seed: Option<u64>,
    /// Measured quantity (a norm or a left-hand side).
    pub measured: f64,
    /// Normalisation or right-hand side, 1 when not applicable.
    pub reference: f64,
    pub ratio: f64,
}

impl ScanPoint {
    pub fn new(measured: f64, reference: f64) -> Self {
        let ratio = if reference != 0.0 { measured / reference } else { 0.0 };
        ScanPoint { measured, reference, ratio, ..Default::default() }
    }
}

/// Outcome of one estimate check: every scan point, the fit (if any), the
/// compared statistic and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub points: Vec<ScanPoint>,
    pub fit: Option<LinearFit>,
    /// The number compared against `tolerance` (a slope, a ratio, a growth).
    pub statistic: f64,
    /// Description of the comparison, e.g. "slope <= 0.725".
    pub criterion: String,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub seeds: Vec<u64>,
    pub grid_hash: String,
    pub config_hash: Option<String>,
    pub notes: Vec<String>,
}

impl EstimateReport {
    pub fn new(name: &str) -> Self {
        EstimateReport {
            name: name.to_string(),
            points: Vec::new(),
            fit: None,
            statistic: 0.0,
            criterion: String::new(),
            tolerance: 0.0,
            verdict: Verdict::NotApplicable,
            seeds: Vec::new(),
            grid_hash: String::new(),
            config_hash: None,
            notes: Vec::new(),
        }
    }

    /// Sets statistic, tolerance and verdict for `statistic <= tolerance`,
    /// downgraded to INCONCLUSIVE when the fit is unreliable.
    pub fn judge_upper(&mut self, statistic: f64, tolerance: f64, what: &str) {
        self.statistic = statistic;
        self.tolerance = tolerance;
        self.criterion = format!("{what} <= {tolerance}");
        self.verdict = self.fit_gate(Verdict::from_bool(statistic <= tolerance));
    }

    /// As [`Self::judge_upper`] for |statistic − target| <= tolerance.
    pub fn judge_band(&mut self, statistic: f64, target: f64, tolerance: f64, what: &str) {
        self.statistic = statistic;
        self.tolerance = tolerance;
        self.criterion = format!("|{what} - {target}| <= {tolerance}");
        self.verdict = self.fit_gate(Verdict::from_bool((statistic - target).abs() <= tolerance));
    }

    fn fit_gate(&self, v: Verdict) -> Verdict {
        match &self.fit {
            Some(f) if !f.is_reliable() => Verdict::Inconclusive,
            _ => v,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for p in &self.points {
            wr.serialize(p)?;
        }
        if self.points.is_empty() {
            wr.write_record(["N", "eps", "mu", "eta", "r", "q", "t", "T", "seed", "measured", "reference", "ratio"])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Summary record (no scan points) as pretty JSON.
    pub fn summary_json(&self) -> Result<String> {
        let summary = serde_json::json!({
            "name": self.name,
            "statistic": self.statistic,
            "criterion": self.criterion,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "fit": self.fit,
            "seeds": self.seeds,
            "grid_hash": self.grid_hash,
            "config_hash": self.config_hash,
            "points": self.points.len(),
            "notes": self.notes,
        });
        serde_json::to_string_pretty(&summary).map_err(|e| LabError::Io(e.to_string()))
    }
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn short_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_plane() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for a in [1.0, 2.0, 3.0] {
            for b in [0.0, 0.5, 2.0] {
                xs.push(vec![a, b]);
                ys.push(0.3 + 0.7 * a - 1.1 * b);
            }
        }
        let f = least_squares(&xs, &ys).unwrap();
        assert!((f.slopes[0] - 0.7).abs() < 1e-12 && (f.slopes[1] + 1.1).abs() < 1e-12);
        assert!((f.intercept - 0.3).abs() < 1e-12);
        assert!(f.residual < 1e-20 && f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn flat_data_are_reliable_noisy_are_not() {
        let f = log_log_fit(&[1.0, 2.0, 4.0], &[1.0, 1.001, 0.999]).unwrap();
        assert!(f.r_squared < 0.9 && f.is_reliable());
        let g = log_log_fit(&[1.0, 2.0, 4.0, 8.0], &[1.0, 3.0, 0.5, 2.0]).unwrap();
        assert!(!g.is_reliable());
        let mut rep = EstimateReport::new("x");
        rep.fit = Some(g);
        rep.judge_upper(0.1, 1.0, "slope");
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdicts_combine() {
        use Verdict::*;
        assert_eq!(Verdict::combine([Pass, NotApplicable]), Pass);
        assert_eq!(Verdict::combine([Pass, Inconclusive]), Inconclusive);
        assert_eq!(Verdict::combine([Inconclusive, Fail, Pass]), Fail);
        assert_eq!(Verdict::combine([]), NotApplicable);
    }
}
