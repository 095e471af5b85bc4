//! Composite Simpson quadrature on uniform grids.

/// ∫ f over a uniform grid with spacing `h`.
///
/// Even interval counts use composite Simpson; odd counts (≥ 3) finish with
/// the 3/8 rule on the last three intervals. A single interval is a trapezoid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ if n.is_multiple_of(2) => simpson_even(values, h),
        3 => three_eighths(&values[0..4], h),
        _ => simpson_even(&values[..n - 2], h) + three_eighths(&values[n - 3..], h),
    }
}

fn simpson_even(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let mut acc = values[0] + values[n];
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

fn three_eighths(v: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3])
}

/// Running integral ∫₀^{t_k} f at every node, consistent with [`simpson`] at the
/// final node.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let len = values.len();
    let mut out = vec![0.0; len];
    if len < 3 {
        if len == 2 {
            out[1] = simpson(values, h);
        }
        return out;
    }
    for k in 1..len {
        out[k] = if k % 2 == 0 {
            out[k - 2] + h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k])
        } else if k + 1 < len {
            // quadratic through k-1, k, k+1 integrated over [k-1, k]
            out[k - 1] + h / 12.0 * (5.0 * values[k - 1] + 8.0 * values[k] - values[k + 1])
        } else {
            out[k - 1] + h / 12.0 * (-values[k - 2] + 8.0 * values[k - 1] + 5.0 * values[k])
        };
    }
    out[len - 1] = simpson(values, h);
    out
}
