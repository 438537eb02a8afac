//! Classical tests used to check simulation output.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Anderson–Darling normality test with mean and variance estimated from
/// the sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndersonDarling {
    pub statistic: f64,
    /// `A^2 (1 + 0.75/n + 2.25/n^2)`.
    pub adjusted: f64,
    pub p_value: f64,
}

impl AndersonDarling {
    /// Critical value of the adjusted statistic at the 1% level.
    pub const CRITICAL_1PCT: f64 = 1.035;

    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

pub fn anderson_darling_normal(sample: &[f64]) -> Result<AndersonDarling> {
    let n = sample.len();
    if n < 8 {
        return Err(Error::SampleTooSmall { needed: 8, got: n });
    }
    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var.is_nan() || var <= 0.0 {
        return Err(Error::InvalidParameter("sample has zero variance".into()));
    }
    let sd = var.sqrt();
    let mut z: Vec<f64> = sample.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let cdf: Vec<f64> = z
        .iter()
        .map(|&v| normal.cdf(v).clamp(1e-300, 1.0 - 1e-16))
        .collect();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (cdf[i].ln() + (1.0 - cdf[n - 1 - i]).ln()))
        .sum();
    let a2 = -nf - s / nf;
    let adj = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    let p = if adj >= 0.6 {
        (1.2937 - 5.709 * adj + 0.0186 * adj * adj).exp()
    } else if adj >= 0.34 {
        (0.9177 - 4.279 * adj - 1.38 * adj * adj).exp()
    } else if adj >= 0.2 {
        1.0 - (-8.318 + 42.796 * adj - 59.938 * adj * adj).exp()
    } else {
        1.0 - (-13.436 + 101.14 * adj - 223.73 * adj * adj).exp()
    };
    Ok(AndersonDarling {
        statistic: a2,
        adjusted: adj,
        p_value: p.clamp(0.0, 1.0),
    })
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTwoSample {
    pub statistic: f64,
    pub p_value: f64,
}

impl KsTwoSample {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

/// Kolmogorov survival function `2 sum (-1)^(k-1) exp(-2 k^2 x^2)`.
fn kolmogorov_tail(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsTwoSample> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::SampleTooSmall { needed: 1, got: 0 });
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] == v {
            i += 1;
        }
        while j < m && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    let p = kolmogorov_tail((en + 0.12 + 0.11 / en) * d);
    Ok(KsTwoSample {
        statistic: d,
        p_value: p,
    })
}
