//! Adaptive Simpson quadrature for the moment integrals that lack closed
//! forms. Absolute tolerance 1e-9, relative 1e-7 by default.

pub const ABS_TOL: f64 = 1e-9;
pub const REL_TOL: f64 = 1e-7;

/// Integrate `f` over `[a, b]` with adaptive Simpson refinement.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    integrate_tol(f, a, b, ABS_TOL, REL_TOL)
}

/// Integrate with explicit tolerances.
pub fn integrate_tol<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // A few forced subdivisions before the error estimate may terminate,
    // so a peak between the initial probe points cannot be missed outright.
    // Callers integrating very wide domains should still split at a known
    // scale point first.
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // Depth cap guards against non-integrable corner cases; 50 halvings put
    // the interval width below machine resolution for any sane input.
    adapt(f, a, b, fa, fm, fb, whole, abs_tol, rel_tol, 50, 6)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
    min_depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let tol = abs_tol.max(rel_tol * (left + right).abs());
    if depth == 0 || (min_depth == 0 && delta.abs() <= 15.0 * tol) {
        left + right + delta / 15.0
    } else {
        let half_abs = 0.5 * abs_tol;
        let deeper = min_depth.saturating_sub(1);
        adapt(f, a, m, fa, flm, fm, left, half_abs, rel_tol, depth - 1, deeper)
            + adapt(f, m, b, fm, frm, fb, right, half_abs, rel_tol, depth - 1, deeper)
    }
}
