//! Pearson correlation with two-tailed Student-t significance.

use crate::error::{Axis, StatsError};
use crate::mobility::{category_series, MobilityCategory, MobilitySeries};
use crate::series::{align, AlignedPair, DailySeries};
use crate::window::DateRange;

/// Smallest number of pairs with a defined t-statistic (df = 1).
pub const MIN_POINTS: usize = 3;

const CF_TOLERANCE: f64 = 1e-12;
const CF_MAX_ITER: usize = 300;
const TINY: f64 = 1e-300;

/// Pearson r of an aligned pair, clamped to `[-1, 1]`.
pub fn pearson_r(pair: &AlignedPair) -> Result<f64, StatsError> {
    pearson_slices(&pair.x, &pair.y)
}

/// Centered two-pass Pearson coefficient.
pub fn pearson_slices(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < MIN_POINTS {
        return Err(StatsError::TooFewPoints { n });
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance(Axis::X));
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance(Axis::Y));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

/// Two-tailed p-value of r under the null of zero correlation.
///
/// With t = r·sqrt(df / (1 − r²)) and df = n − 2, the tail mass
/// 2·(1 − F_t(|t|)) equals I_x(df/2, 1/2) at x = df / (df + t²) = 1 − r²,
/// so x is formed directly from r.
pub fn p_two_tailed(r: f64, n: usize) -> Result<f64, StatsError> {
    if n < MIN_POINTS {
        return Err(StatsError::TooFewPoints { n });
    }
    let r = r.abs().min(1.0);
    if r == 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let x = (1.0 - r) * (1.0 + r);
    Ok(regularized_incomplete_beta(df / 2.0, 0.5, x)?.clamp(0.0, 1.0))
}

/// Two-tailed Student-t tail probability P(|T| ≥ |t|) with `df` degrees of
/// freedom.
pub fn student_t_two_tailed(t: f64, df: f64) -> Result<f64, StatsError> {
    if t.is_infinite() {
        return Ok(0.0);
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// ln Γ(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms).
#[allow(clippy::excessive_precision)]
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let series = COEF[1..]
        .iter()
        .enumerate()
        .fold(COEF[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// I_x(a, b) for a, b > 0 and 0 ≤ x ≤ 1.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64, StatsError> {
    assert!(a > 0.0 && b > 0.0, "shape parameters must be positive");
    assert!((0.0..=1.0).contains(&x), "x must lie in [0, 1], got {x}");
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    // The continued fraction converges fast for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(ln_front.exp() * beta_continued_fraction(a, b, x)? / a)
    } else {
        Ok(1.0 - ln_front.exp() * beta_continued_fraction(b, a, 1.0 - x)? / b)
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64, StatsError> {
    let clamp_tiny = |v: f64| if v.abs() < TINY { TINY } else { v };
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 / clamp_tiny(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp_tiny(1.0 + even * d);
        c = clamp_tiny(1.0 + even / c);
        h *= d * c;

        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp_tiny(1.0 + odd * d);
        c = clamp_tiny(1.0 + odd / c);
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < CF_TOLERANCE {
            return Ok(h);
        }
    }
    Err(StatsError::NoConvergence)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub r: f64,
    pub p: f64,
}

/// One cell of the hashtag-vs-mobility matrix. Cells whose data fail a
/// precondition carry the error instead of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub series: String,
    pub category: MobilityCategory,
    pub n: usize,
    pub outcome: Result<Coefficient, StatsError>,
}

impl CorrelationResult {
    pub fn r(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|c| c.r)
    }

    pub fn p(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|c| c.p)
    }
}

pub fn correlate_pair(pair: &AlignedPair) -> Result<Coefficient, StatsError> {
    let r = pearson_r(pair)?;
    let p = p_two_tailed(r, pair.n())?;
    Ok(Coefficient { r, p })
}

/// Correlates each hashtag series against each mobility category over
/// `window`. Ordered by series label, then category declaration order.
pub fn correlation_matrix(
    hashtag_series: &[DailySeries],
    mobility: &MobilitySeries,
    window: DateRange,
) -> Vec<CorrelationResult> {
    let categories: Vec<DailySeries> = MobilityCategory::ALL
        .iter()
        .map(|&c| category_series(mobility, c, window))
        .collect();
    let mut ordered: Vec<&DailySeries> = hashtag_series.iter().collect();
    ordered.sort_by(|a, b| a.label().cmp(b.label()));
    let mut out = Vec::with_capacity(ordered.len() * categories.len());
    for s in ordered {
        for (&category, mob) in MobilityCategory::ALL.iter().zip(&categories) {
            let pair = align(s, mob, window);
            out.push(CorrelationResult {
                series: s.label().to_string(),
                category,
                n: pair.n(),
                outcome: correlate_pair(&pair),
            });
        }
    }
    out
}
