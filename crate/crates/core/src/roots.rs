//! Bracketing and Brent refinement for monotone root finding.

/// Outcome of a successful root search.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Expand `[0, hi]` by doubling `hi` from `hi0` until `f(hi) >= 0`.
///
/// Intended for nondecreasing `f` with `f(0) < 0`. Returns the bracket or
/// `None` after `max_doublings`.
pub fn bracket_upward<F: Fn(f64) -> f64>(f: &F, hi0: f64, max_doublings: u32) -> Option<(f64, f64)> {
    let mut lo = 0.0;
    let mut hi = hi0.max(f64::MIN_POSITIVE);
    for _ in 0..max_doublings {
        if f(hi) >= 0.0 {
            return Some((lo, hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    None
}

/// Brent's method on `[a, b]` with `f(a) <= 0 <= f(b)`, stopping as soon as
/// `|f(x)| <= ftol` or the bracket collapses to machine resolution.
pub fn brent<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, ftol: f64, max_iter: u32) -> Root {
    let mut xpre = a;
    let mut xcur = b;
    let mut fpre = f(xpre);
    let mut fcur = f(xcur);
    let mut iterations = 2;

    if fpre.abs() <= ftol {
        return Root { x: xpre, residual: fpre, iterations };
    }
    if fcur.abs() <= ftol {
        return Root { x: xcur, residual: fcur, iterations };
    }

    let mut xblk = 0.0;
    let mut fblk = 0.0;
    let mut spre = 0.0;
    let mut scur = 0.0;

    for _ in 0..max_iter {
        if fpre * fcur < 0.0 {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        // Bracket width scaled to the current iterate.
        let delta = f64::EPSILON * xcur.abs().max(1e-300);
        let sbis = 0.5 * (xblk - xcur);
        if fcur.abs() <= ftol || sbis.abs() < delta {
            return Root { x: xcur, residual: fcur, iterations };
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                // Secant.
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                // Inverse quadratic interpolation.
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur);
        iterations += 1;
    }
    Root { x: xcur, residual: fcur, iterations }
}
