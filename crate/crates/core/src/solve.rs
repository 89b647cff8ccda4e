//! Safeguarded scalar root finding (Newton iteration inside a bisection
//! bracket, in the style of Numerical Recipes' `rtsafe`).

/// Find the root of a monotone `f` on `[lo, hi]`, given `f(lo) <= 0 <= f(hi)`.
///
/// `seed` is a caller-supplied starting estimate (clamped into the bracket).
/// Bisection is used until the bracket has shrunk to within 10 % of the
/// current estimate, after which Newton steps take over; any Newton step that
/// leaves the bracket, or fails to shrink it meaningfully, falls back to a
/// bisection step. Converges to a relative width of `rel_tol`.
pub(crate) fn newton_bisect<F, D>(
    mut f: F,
    mut df: D,
    mut lo: f64,
    mut hi: f64,
    seed: f64,
    rel_tol: f64,
) -> f64
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let mut x = seed.clamp(lo, hi);
    // Scale for the convergence test; the bracket endpoints bound the root.
    let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);

    for _ in 0..200 {
        if hi - lo <= rel_tol * scale {
            break;
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }

        // Newton only once the bracket is tight around the estimate: a wide
        // bracket means the seed is still unreliable and bisection is safer.
        let mut next = f64::NAN;
        if hi - lo <= 0.1 * scale {
            let d = df(x);
            if d != 0.0 {
                let step = fx / d;
                let candidate = x - step;
                if candidate > lo && candidate < hi {
                    next = candidate;
                }
            }
        }
        x = if next.is_finite() {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root_matches_closed_form() {
        // x^3 + 2x - 5 = 0 has a single real root.
        let f = |x: f64| x * x * x + 2.0 * x - 5.0;
        let df = |x: f64| 3.0 * x * x + 2.0;
        let r = newton_bisect(f, df, 0.0, 5.0, 1.0, 1e-14);
        assert!(f(r).abs() < 1e-10, "residual {}", f(r));
    }

    #[test]
    fn respects_bracket_with_bad_seed() {
        let f = |x: f64| x - 3.0;
        let df = |_: f64| 1.0;
        let r = newton_bisect(f, df, 0.0, 10.0, 9.9, 1e-14);
        assert!((r - 3.0).abs() < 1e-9);
    }

    #[test]
    fn exact_hit_returns_early() {
        let f = |x: f64| x * x - 4.0;
        let df = |x: f64| 2.0 * x;
        let r = newton_bisect(f, df, 0.0, 4.0, 2.0, 1e-14);
        assert_eq!(r, 2.0);
    }
}
