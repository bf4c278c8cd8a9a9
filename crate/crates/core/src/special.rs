//! Orthogonal-polynomial recurrences in normalized (overflow-free) form.

/// `ln(n!)` by direct summation. Exact enough for the small `n` used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by the three-term
/// recurrence. Only meant for small `n`; use [`laguerre_functions`] when
/// the polynomial is multiplied by factorial prefactors.
pub fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

const RESCALE_ABOVE: f64 = 1e150;
const LOG_UNDERFLOW: f64 = -700.0;

/// Normalized Laguerre functions
/// `ℓ_n^{(k)}(x) = sqrt(n!/(n+k)!) · x^{k/2} · e^{−x/2} · L_n^{(k)}(x)`
/// for `n = 0..=n_max`, written into `out`.
///
/// The prefactor is formed in log space and the recurrence
/// `√((n+1)(n+k+1)) ℓ_{n+1} = (2n+1+k−x) ℓ_n − √(n(n+k)) ℓ_{n−1}`
/// runs on a rescaled sequence, so neither factorials nor `e^{−x/2}` can
/// overflow or flush the whole sequence to zero. All values satisfy `|ℓ| ≤ 1`.
pub fn laguerre_functions(k: usize, x: f64, n_max: usize, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(n_max + 1);
    let kf = k as f64;
    let log_start = if x == 0.0 {
        if k == 0 {
            0.0
        } else {
            out.resize(n_max + 1, 0.0);
            return;
        }
    } else {
        0.5 * kf * x.ln() - 0.5 * x - 0.5 * ln_factorial(k)
    };

    // Sequence is carried as value·e^{log_scale}.
    let (mut log_scale, start) = if log_start < LOG_UNDERFLOW { (log_start, 1.0) } else { (0.0, log_start.exp()) };
    let mut prev = 0.0;
    let mut cur = start;
    let emit = |v: f64, log_scale: f64| if log_scale == 0.0 { v } else { v * log_scale.exp() };
    out.push(emit(cur, log_scale));
    for n in 0..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + kf - x) * cur - (nf * (nf + kf)).sqrt() * prev) / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE && log_scale < 0.0 {
            let shift = cur.abs().ln().min(-log_scale);
            let f = (-shift).exp();
            cur *= f;
            prev *= f;
            log_scale += shift;
        }
        out.push(emit(cur, log_scale));
    }
}

/// Normalized Hermite functions `φ_n(q)`, `n = 0..=n_max`, the position
/// wavefunctions of the oscillator eigenstates with `ħ = m = ω = 1`.
pub fn hermite_functions(q: f64, n_max: usize, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(n_max + 1);
    let log_start = -0.25 * std::f64::consts::PI.ln() - 0.5 * q * q;
    let (mut log_scale, start) = if log_start < LOG_UNDERFLOW { (log_start, 1.0) } else { (0.0, log_start.exp()) };
    let mut prev = 0.0;
    let mut cur = start;
    let emit = |v: f64, log_scale: f64| if log_scale == 0.0 { v } else { v * log_scale.exp() };
    out.push(emit(cur, log_scale));
    for n in 0..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * q * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE && log_scale < 0.0 {
            let shift = cur.abs().ln().min(-log_scale);
            let f = (-shift).exp();
            cur *= f;
            prev *= f;
            log_scale += shift;
        }
        out.push(emit(cur, log_scale));
    }
}
