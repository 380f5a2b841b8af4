//! Counting experiments over the coefficient boxes, with log-log slope fits.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::is_squarefree_u64;
use crate::certify::{torsion_scan, TorsionTally};
use crate::error::{Error, Result};
use crate::models::{BoxKind, BoxSpec, WeierstrassModel};

/// Raw boxes at most this large are counted by full enumeration.
pub const EXHAUSTIVE_LIMIT: u128 = 200_000;
pub const DEFAULT_SAMPLE: usize = 20_000;
const SAMPLE_CHUNK: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SamplingMode {
    Exhaustive,
    Uniform { sample_size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub mode: SamplingMode,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn exhaustive() -> Self {
        SamplingPlan { mode: SamplingMode::Exhaustive, seed: 0 }
    }

    pub fn uniform(sample_size: usize, seed: u64) -> Self {
        SamplingPlan { mode: SamplingMode::Uniform { sample_size }, seed }
    }

    /// `exhaustive` or `uniform:N`.
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        match s.split_once(':') {
            None if s == "exhaustive" => Ok(Self::exhaustive()),
            Some(("uniform", n)) => n
                .parse()
                .map(|n| Self::uniform(n, seed))
                .map_err(|_| Error::Parse(format!("bad sample size in {s:?}"))),
            _ => Err(Error::Parse(format!("unknown plan {s:?}, expected exhaustive or uniform:N"))),
        }
    }

    /// Valid models of the box: all of them, or a seeded draw with replacement.
    pub fn draw(&self, spec: &BoxSpec) -> Vec<WeierstrassModel> {
        match self.mode {
            SamplingMode::Exhaustive => spec.enumerate().map(|(_, m)| m).collect(),
            SamplingMode::Uniform { sample_size } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut out = Vec::with_capacity(sample_size);
                let max_tries = sample_size.saturating_mul(1000).max(1000);
                for _ in 0..max_tries {
                    if out.len() == sample_size {
                        break;
                    }
                    let key = spec.sample_raw(&mut rng);
                    if spec.contains_key(&key) {
                        out.push(key.model());
                    }
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub residuals: Vec<f64>,
    /// Grid values dropped for having a zero count.
    pub dropped: Vec<f64>,
}

/// Least-squares slope of `log count` against `log x`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    let (kept, dropped): (Vec<_>, Vec<_>) = points.iter().partition(|(_, c)| *c > 0.0);
    if kept.len() < 3 {
        return Err(Error::GridTooSmall(kept.len()));
    }
    let xs: Vec<f64> = kept.iter().map(|(x, _)| x.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|(_, c)| c.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("grid has a single distinct value".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, stderr, residuals, dropped: dropped.iter().map(|(x, _)| *x).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x: u64,
    /// Exact count, or an estimate when `exact` is false.
    pub total: f64,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_leading: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tally: Option<TorsionTally>,
    /// Number of raw tuples examined.
    pub examined: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(rename = "box")]
    pub box_name: String,
    pub grid: Vec<u64>,
    pub plan: SamplingPlan,
    pub rows: Vec<GridRow>,
    pub fit: Option<SlopeFit>,
}

impl DensityReport {
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut v = serde_json::to_value(row).expect("row serializes");
            v["box"] = self.box_name.clone().into();
            out.push_str(&v.to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({ "box": self.box_name, "grid": self.grid, "plan": self.plan, "fit": self.fit });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    /// Whether the torsion fraction never increases along the grid.
    pub fn torsion_non_increasing(&self) -> bool {
        let fr: Vec<f64> = self.rows.iter().filter_map(|r| r.tally.as_ref()).map(|t| t.torsion_fraction()).collect();
        fr.windows(2).all(|w| w[1] <= w[0])
    }
}

/// CSV summary with one line per grid value of every report.
pub fn write_csv<W: Write>(reports: &[DensityReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
    w.write_record(["box", "X", "total", "square_leading", "torsion", "nontorsion", "undecided", "slope", "stderr"])
        .map_err(io)?;
    for r in reports {
        let (slope, stderr) = r
            .fit
            .as_ref()
            .map_or((String::new(), String::new()), |f| (format!("{:.6}", f.slope), format!("{:.6}", f.stderr)));
        for row in &r.rows {
            let opt = |v: Option<u64>| v.map_or(String::new(), |v| v.to_string());
            w.write_record([
                r.box_name.clone(),
                row.x.to_string(),
                format_count(row.total),
                row.square_leading.map_or(String::new(), format_count),
                opt(row.tally.as_ref().map(|t| t.torsion)),
                opt(row.tally.as_ref().map(|t| t.nontorsion)),
                opt(row.tally.as_ref().map(|t| t.undecided)),
                slope.clone(),
                stderr.clone(),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    Ok(())
}

fn format_count(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 { format!("{c:.0}") } else { format!("{c:.6e}") }
}

fn square_leading(m: &WeierstrassModel) -> bool {
    matches!(m.infinity_class(), crate::models::InfinityType::TwoRationalPoints(_))
}

fn count_box(spec: &BoxSpec, plan: &SamplingPlan) -> GridRow {
    let exhaustive = matches!(plan.mode, SamplingMode::Exhaustive) || spec.sample_space_size() <= EXHAUSTIVE_LIMIT;
    if exhaustive {
        let (mut total, mut square) = (0u64, 0u64);
        for (_, m) in spec.enumerate() {
            total += 1;
            square += square_leading(&m) as u64;
        }
        return GridRow {
            x: spec.x,
            total: total as f64,
            exact: true,
            square_leading: Some(square as f64),
            tally: None,
            examined: spec.raw_size().min(u64::MAX as u128) as u64,
        };
    }
    let n = match plan.mode {
        SamplingMode::Uniform { sample_size } => sample_size,
        SamplingMode::Exhaustive => DEFAULT_SAMPLE,
    };
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let (hits, square): (u64, u64) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed ^ ((c as u64 + 1) << 32) ^ spec.x);
            let size = SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK);
            let (mut h, mut s) = (0u64, 0u64);
            for _ in 0..size {
                let key = spec.sample_raw(&mut rng);
                if spec.contains_key(&key) {
                    h += 1;
                    s += square_leading(&key.model()) as u64;
                }
            }
            (h, s)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let space = spec.sample_space_size() as f64;
    GridRow {
        x: spec.x,
        total: space * hits as f64 / n as f64,
        exact: false,
        square_leading: Some(space * square as f64 / n as f64),
        tally: None,
        examined: n as u64,
    }
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::GridTooSmall(grid.len()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Box sizes over the grid, one report per kind; `h_mask` restricts to one `h`.
pub fn box_count_experiment(
    kinds: &[BoxKind],
    grid: &[u64],
    plan: &SamplingPlan,
    h_mask: Option<u8>,
) -> Result<Vec<DensityReport>> {
    check_grid(grid)?;
    kinds
        .iter()
        .map(|&kind| {
            let rows = grid
                .iter()
                .map(|&x| {
                    let spec = match h_mask {
                        Some(h) => BoxSpec::slice(kind, x, h)?,
                        None => BoxSpec::new(kind, x)?,
                    };
                    Ok(count_box(&spec, plan))
                })
                .collect::<Result<Vec<_>>>()?;
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.x as f64, r.total)).collect();
            Ok(DensityReport {
                box_name: kind.name().to_string(),
                grid: grid.to_vec(),
                plan: *plan,
                rows,
                fit: Some(fit_log_slope(&pts)?),
            })
        })
        .collect()
}

/// Torsion tallies for `alpha` over the square-leading box at each grid value,
/// with the same seed at every value.
pub fn torsion_density_experiment(
    grid: &[u64],
    plan: &SamplingPlan,
    h_mask: Option<u8>,
    primes: Option<&[u64]>,
) -> Result<DensityReport> {
    if grid.is_empty() {
        return Err(Error::GridTooSmall(0));
    }
    let mut rows = Vec::new();
    for &x in grid {
        let spec = match h_mask {
            Some(h) => BoxSpec::slice(BoxKind::S1Square, x, h)?,
            None => BoxSpec::new(BoxKind::S1Square, x)?,
        };
        let tally = torsion_scan(&spec, primes, plan)?;
        rows.push(GridRow {
            x,
            total: tally.total as f64,
            exact: matches!(plan.mode, SamplingMode::Exhaustive),
            square_leading: Some(tally.total as f64),
            examined: tally.total,
            tally: Some(tally),
        });
    }
    Ok(DensityReport { box_name: BoxKind::S1Square.name().to_string(), grid: grid.to_vec(), plan: *plan, rows, fit: None })
}

pub const XA_REFERENCE_THREE_POINTS: u64 = 3559;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XaReport {
    pub a_max: u64,
    pub height_bound: u64,
    pub squarefree_count: u64,
    /// `a` with `disc(x^5 + a) = 5^5 a^4` nonzero, which is every `a >= 1`.
    pub nonzero_discriminant_count: u64,
    /// Squarefree `a` whose curve has at least three rational points of height
    /// at most the bound, the point at infinity included.
    pub three_point_count: u64,
    pub reference_three_point_count: u64,
    pub relative_deviation: f64,
}

/// Rational `x = p / s^2` with `max(|p|, s^2) <= bound`, `gcd(p, s) = 1`,
/// returned as `(p, s^2)`.
fn xa_abscissae(bound: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let b = bound as i64;
    let mut s = 1i64;
    while (s * s) as u64 <= bound {
        for p in -b..=b {
            if num_integer::Integer::gcd(&p, &s) == 1 {
                out.push((p as i128, (s * s) as i128));
            }
        }
        s += 1;
    }
    out
}

struct SquareTest {
    m64: [bool; 64],
    m63: [bool; 63],
    m65: [bool; 65],
    m11: [bool; 11],
}

impl SquareTest {
    fn new() -> Self {
        let mut t = SquareTest { m64: [false; 64], m63: [false; 63], m65: [false; 65], m11: [false; 11] };
        for i in 0..64 {
            t.m64[(i * i) % 64] = true;
        }
        for i in 0..63 {
            t.m63[(i * i) % 63] = true;
        }
        for i in 0..65 {
            t.m65[(i * i) % 65] = true;
        }
        for i in 0..11 {
            t.m11[(i * i) % 11] = true;
        }
        t
    }

    fn is_square(&self, n: i128) -> bool {
        if n < 0 {
            return false;
        }
        let r = n as u128;
        if !self.m64[(r % 64) as usize] || !self.m63[(r % 63) as usize] || !self.m65[(r % 65) as usize] || !self.m11[(r % 11) as usize] {
            return false;
        }
        crate::algebra::arith::is_square_i128(n).is_some()
    }
}

/// Rational points on `y^2 = x^5 + a` of height at most the bound, counting
/// infinity, stopping once `stop` are found.
fn xa_points(a: i128, xs: &[(i128, i128)], sq: &SquareTest, stop: u64) -> u64 {
    let mut count = 1u64;
    for &(p, q) in xs {
        // q = s^2, so q^5 is a square
        let val = p.pow(5) + a * q.pow(5);
        if sq.is_square(val) {
            count += if val == 0 { 1 } else { 2 };
            if count >= stop {
                break;
            }
        }
    }
    count
}

pub fn xa_family_experiment(a_max: u64, height_bound: u64) -> Result<XaReport> {
    if a_max == 0 {
        return Err(Error::Precondition("a_max must be at least 1".into()));
    }
    let squarefree: Vec<u64> = (1..=a_max).filter(|&a| is_squarefree_u64(a).unwrap_or(false)).collect();
    let three_point_count = if height_bound == 0 {
        0
    } else {
        let xs = xa_abscissae(height_bound);
        let sq = SquareTest::new();
        squarefree.par_iter().filter(|&&a| xa_points(a as i128, &xs, &sq, 3) >= 3).count() as u64
    };
    let reference = XA_REFERENCE_THREE_POINTS;
    Ok(XaReport {
        a_max,
        height_bound,
        squarefree_count: squarefree.len() as u64,
        nonzero_discriminant_count: a_max,
        three_point_count,
        reference_three_point_count: reference,
        relative_deviation: (three_point_count as f64 - reference as f64) / reference as f64,
    })
}

/// Predicted split-family size `(9/4) X^(2/3) / (log X)^2`.
pub fn split_prediction(x: f64) -> f64 {
    2.25 * x.powf(2.0 / 3.0) / x.ln().powi(2)
}

#[cfg(test)]
mod tests;
