//! Associated (generalized) Laguerre polynomials.

/// Evaluates `L_n^(k)(x)` by forward three-term recurrence in `n`:
///
/// ```text
/// (n+1) L_{n+1} = (2n + k + 1 - x) L_n - (n + k) L_{n-1},   L_0 = 1,   L_1 = 1 + k - x
/// ```
///
/// Stable for `x >= 0` at the small orders used for sideband matrix elements.
pub fn laguerre_assoc(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = f64::from(m);
        let next = ((2.0 * m + k + 1.0 - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_0^(k)(x), ..., L_{n_max}^(k)(x)` in one pass.
pub fn laguerre_table(n_max: u32, k: u32, x: f64) -> Vec<f64> {
    let kf = f64::from(k);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + kf - x);
    for m in 1..n_max as usize {
        let mf = m as f64;
        let next = ((2.0 * mf + kf + 1.0 - x) * out[m] - (mf + kf) * out[m - 1]) / (mf + 1.0);
        out.push(next);
    }
    out
}
