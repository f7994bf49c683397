//! Adaptive Simpson quadrature for real and complex integrands.
//!
//! Integrands that vary over many orders of magnitude (the prime densities grow
//! like `e^u / u`) need a relative tolerance in addition to the absolute one, so
//! the acceptance test on each panel is `|S2 - S1| <= 15 * max(abs, rel * |S2|)`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Values an integrand may return.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-10, rel: 1e-12, max_depth: 48 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel, ..Default::default() }
    }
}

fn simpson<V: QuadValue>(a: f64, b: f64, fa: V, fm: V, fb: V) -> V {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
    fa: V,
    fm: V,
    fb: V,
    whole: V,
    abs: f64,
    tol: &Tolerance,
    depth: u32,
) -> V {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let both = left + right;
    let delta = both - whole;
    // floor at the rounding noise of the samples, or cancelling integrands never converge
    let noise = 1e-14 * (b - a) * (fa.magnitude() + fm.magnitude() + fb.magnitude());
    // relative to ∫|f|, so integrands that cancel over the panel still converge
    let mass = (b - a) / 12.0
        * (fa.magnitude() + 4.0 * flm.magnitude() + 2.0 * fm.magnitude() + 4.0 * frm.magnitude() + fb.magnitude());
    let allowed = abs.max(tol.rel * mass).max(noise);
    if depth == 0 || delta.magnitude() <= 15.0 * allowed || m <= a || b <= m {
        return both + delta * (1.0 / 15.0);
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * abs, tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * abs, tol, depth - 1)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<V: QuadValue, F: Fn(f64) -> V>(f: F, a: f64, b: f64, tol: Tolerance) -> V {
    if b == a {
        return V::zero();
    }
    if b < a {
        return integrate(f, b, a, tol) * -1.0;
    }
    // a coarse first split keeps the initial estimate from being fooled by
    // integrands that happen to vanish at the three Simpson nodes
    let panels = 4;
    let width = (b - a) / panels as f64;
    let mut total = V::zero();
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { lo + width };
        let fa = f(lo);
        let fb = f(hi);
        let fm = f(0.5 * (lo + hi));
        let whole = simpson(lo, hi, fa, fm, fb);
        // rounding level of the panel's own values: refining below it only chases noise
        let floor = 1e-15 * width * fa.magnitude().max(fm.magnitude()).max(fb.magnitude());
        let abs = (tol.abs / panels as f64).max(floor);
        total = total + recurse(&f, lo, hi, fa, fm, fb, whole, abs, &tol, tol.max_depth);
    }
    total
}

/// Integrates over `[a, b]`, splitting at every breakpoint strictly inside the
/// interval and at most every `max_panel` units (for oscillatory integrands).
pub fn integrate_split<V: QuadValue, F: Fn(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_panel: f64,
    tol: Tolerance,
) -> V {
    if b <= a {
        return if b == a { V::zero() } else { integrate_split(f, b, a, breaks, max_panel, tol) * -1.0 };
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = V::zero();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = if max_panel.is_finite() && max_panel > 0.0 {
            ((hi - lo) / max_panel).ceil().max(1.0) as usize
        } else {
            1
        };
        let width = (hi - lo) / pieces as f64;
        for k in 0..pieces {
            let p_lo = lo + width * k as f64;
            let p_hi = if k + 1 == pieces { hi } else { p_lo + width };
            total = total + integrate(&f, p_lo, p_hi, tol);
        }
    }
    total
}
