//! Field comparison and revival arithmetic.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::phase_space::{integrate_field, RealField};

/// Below this `|∫∫f|` a field cannot be post-normalized.
pub const DEGENERATE_NORMALIZATION: f64 = 1e-9;

/// Agreement between two fields on the same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    /// `(∫∫(a − b)²)^{1/2}`.
    pub l2_error: f64,
    pub max_abs_error: f64,
    /// Pearson correlation of the node samples.
    pub pearson: f64,
    /// `(∫∫a²)^{1/2}`.
    pub norm_a: f64,
    /// `(∫∫b²)^{1/2}`.
    pub norm_b: f64,
}

/// `∫∫ f`.
pub fn normalization(f: &RealField) -> f64 {
    integrate_field(f)
}

/// Copy of `f` rescaled to unit integral.
pub fn post_normalize(f: &RealField) -> Result<RealField> {
    let n = normalization(f);
    if !(n.abs() >= DEGENERATE_NORMALIZATION) {
        return Err(Error::DegenerateNormalization(n));
    }
    f.map(|v| v / n)
}

fn same_grid(a: &RealField, b: &RealField) -> Result<()> {
    if a.grid().same_as(b.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

fn product_integral(a: &RealField, b: &RealField) -> Result<f64> {
    let prod = RealField::from_values(*a.grid(), a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect())?;
    Ok(integrate_field(&prod))
}

/// Squared autocorrelation `A²(t) = 2π ∫∫ W(t)·W(0)`.
pub fn autocorr_overlap(f_t: &RealField, f_0: &RealField) -> Result<f64> {
    same_grid(f_t, f_0)?;
    Ok(2.0 * PI * product_integral(f_t, f_0)?)
}

/// Pearson correlation of two equally long sample sets. Zero-variance input
/// correlates perfectly with itself and not at all with anything else.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}

pub fn compare(a: &RealField, b: &RealField) -> Result<ComparisonReport> {
    same_grid(a, b)?;
    let diff = RealField::from_values(*a.grid(), a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect())?;
    let max_abs_error = diff.values().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(ComparisonReport {
        l2_error: product_integral(&diff, &diff)?.max(0.0).sqrt(),
        max_abs_error,
        pearson: pearson(a.values(), b.values()),
        norm_a: product_integral(a, a)?.max(0.0).sqrt(),
        norm_b: product_integral(b, b)?.max(0.0).sqrt(),
    })
}

/// `|η|²` of orbits completing exactly `j` turns in one revival period,
/// `4|η|²·(π/4) = 2πj`, i.e. `|η|² = 2j`.
pub fn revival_radii(j: u32) -> Result<f64> {
    if j == 0 {
        return Err(Error::Domain("winding number must be at least 1".into()));
    }
    Ok(2.0 * j as f64)
}

/// `|η|²` of orbits completing `j + α` turns in time `π/β`:
/// `4|η|²π/β = 2π(j + α)`, i.e. `|η|² = β(j + α)/2`. The full revival is
/// `β = 4`.
pub fn fractional_radii(j: i64, alpha_frac: f64, beta: u32) -> Result<f64> {
    if beta == 0 {
        return Err(Error::Domain("revival fraction denominator must be at least 1".into()));
    }
    let r2 = beta as f64 * (j as f64 + alpha_frac) / 2.0;
    if !(r2 >= 0.0 && r2.is_finite()) {
        return Err(Error::Domain(format!("j + alpha must be non-negative, got {}", j as f64 + alpha_frac)));
    }
    Ok(r2)
}

/// Total revival phase over `π` for endpoints with winding numbers `j±`:
/// `(j₊ − j₋)(1 + j₊ + j₋)`. Always even, since `j₊ − j₋` and `j₊ + j₋`
/// share parity.
pub fn revival_phase_parity(j_plus: u32, j_minus: u32) -> i64 {
    let (a, b) = (j_plus as i64, j_minus as i64);
    let v = (a - b) * (1 + a + b);
    debug_assert!(v % 2 == 0);
    v
}

/// Strict local maxima (8-neighbourhood) above `fraction` of the field's
/// peak, keeping only the highest of any maxima closer than
/// `min_separation` in phase space. Returns `(q, p, value)`, highest first.
pub fn local_maxima(f: &RealField, fraction: f64, min_separation: f64) -> Vec<(f64, f64, f64)> {
    let g = *f.grid();
    let peak = f.values().iter().copied().fold(f64::MIN, f64::max);
    let threshold = fraction * peak;
    let mut found = Vec::new();
    for ip in 0..g.n_p {
        for iq in 0..g.n_q {
            let v = f.at(ip, iq);
            if v < threshold {
                continue;
            }
            let mut is_max = true;
            'nb: for dp in -1i64..=1 {
                for dq in -1i64..=1 {
                    if dp == 0 && dq == 0 {
                        continue;
                    }
                    let (jp, jq) = (ip as i64 + dp, iq as i64 + dq);
                    if jp < 0 || jq < 0 || jp >= g.n_p as i64 || jq >= g.n_q as i64 {
                        continue;
                    }
                    let w = f.at(jp as usize, jq as usize);
                    // ties break towards the lower index so plateaus count once
                    if w > v || (w == v && (jp, jq) < (ip as i64, iq as i64)) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                found.push((g.q_at(iq), g.p_at(ip), v));
            }
        }
    }
    found.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut kept: Vec<(f64, f64, f64)> = Vec::new();
    for m in found {
        if kept.iter().all(|k| ((k.0 - m.0).powi(2) + (k.1 - m.1).powi(2)).sqrt() >= min_separation) {
            kept.push(m);
        }
    }
    kept
}

/// Number of connected (4-neighbour) regions where the field is negative.
/// Each is bounded by its own zero contour, so for a field that is positive
/// at the edge this counts the closed sign-change contours.
pub fn negative_regions(f: &RealField) -> usize {
    let g = *f.grid();
    let mut seen = vec![false; g.len()];
    let mut stack = Vec::new();
    let mut count = 0;
    for start in 0..g.len() {
        if seen[start] || f.values()[start] >= 0.0 {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (ip, iq) = (i / g.n_q, i % g.n_q);
            let mut visit = |j: usize| {
                if !seen[j] && f.values()[j] < 0.0 {
                    seen[j] = true;
                    stack.push(j);
                }
            };
            if ip > 0 {
                visit(i - g.n_q);
            }
            if ip + 1 < g.n_p {
                visit(i + g.n_q);
            }
            if iq > 0 {
                visit(i - 1);
            }
            if iq + 1 < g.n_q {
                visit(i + 1);
            }
        }
    }
    count
}
