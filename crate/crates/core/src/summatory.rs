//! Möbius and Liouville measures and their summatory functions
//! `m(x) = Σ μ(n_k)/n_k` and `ℓ(x) = Σ λ(n_k)/n_k`.

use crate::error::{GnumError, Result};
use crate::grid::{conv, exp_conv, inv_conv, LogGridMeasure};
use crate::semigroup::{enumerate, GeneralizedInteger};
use crate::special::KahanSum;
use crate::systems::PrimeSystem;
use serde::Serialize;

/// Grid resolution used for continuous systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub h: f64,
    pub u_max: f64,
}

impl GridSpec {
    pub fn new(h: f64, u_max: f64) -> Self {
        GridSpec { h, u_max }
    }
}

/// `dM` together with the discrepancy between its two constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMeasure {
    /// `exp*(-dΠ)`.
    pub measure: LogGridMeasure,
    /// `max_j |a_j - b_j| e^{-u_j}` against `inv(exp*(dΠ))`: node-wise difference
    /// on the scale that enters `m(x)`.
    pub path_discrepancy: f64,
}

/// `max_j |a_j - b_j| e^{-u_j}`.
pub fn weighted_diff(a: &LogGridMeasure, b: &LogGridMeasure) -> f64 {
    let n = a.len().min(b.len());
    (0..n).map(|j| (a.masses()[j] - b.masses()[j]).abs() * (-a.node_u(j)).exp()).fold(0.0, f64::max)
}

/// Weighted distance of `dN * dM` from `δ`.
pub fn identity_residual(dn: &LogGridMeasure, dm: &LogGridMeasure) -> Result<f64> {
    let prod = conv(dn, dm, Some(dn.len()))?;
    Ok(weighted_diff(&prod, &LogGridMeasure::delta(dn.spacing(), dn.len())?))
}

/// `dM`, the convolution inverse of `dN`, computed as `exp*(-dΠ)` and
/// cross-checked against `inv(exp*(dΠ))`.
pub fn mobius_measure(sys: &PrimeSystem, grid: GridSpec) -> Result<MobiusMeasure> {
    let dpi = sys.to_grid(grid.h, grid.u_max)?;
    let direct = exp_conv(&dpi.negated())?;
    let inverted = inv_conv(&exp_conv(&dpi)?)?;
    Ok(MobiusMeasure { path_discrepancy: weighted_diff(&direct, &inverted), measure: direct })
}

/// `dL`, with Mellin transform `ζ(2s)/ζ(s)`: the squaring pushforward of `dN`
/// convolved with `dM`. Returns the measure and the mass dropped by the
/// pushforward beyond the grid.
pub fn liouville_measure(sys: &PrimeSystem, grid: GridSpec) -> Result<(LogGridMeasure, f64)> {
    match sys {
        PrimeSystem::Discrete(_) => Ok((elementwise_measure(sys, grid, |g| g.lambda() as f64)?, 0.0)),
        PrimeSystem::Continuous(_) => {
            let dpi = sys.to_grid(grid.h, grid.u_max)?;
            let dn = exp_conv(&dpi)?;
            let dm = exp_conv(&dpi.negated())?;
            let (squared, dropped) = dn.push_square();
            Ok((conv(&squared, &dm, Some(dn.len()))?, dropped))
        }
    }
}

/// Places `f(n_k)` at the grid node nearest to `log n_k` for every
/// generalized integer up to `e^{u_max}`.
pub fn elementwise_measure(
    sys: &PrimeSystem,
    grid: GridSpec,
    f: impl Fn(&GeneralizedInteger) -> f64,
) -> Result<LogGridMeasure> {
    let n = (grid.u_max / grid.h + 1e-9).floor() as usize + 1;
    let mut masses = vec![0.0; n];
    for g in enumerate(sys, (grid.u_max + 0.5 * grid.h).exp())? {
        let g = g?;
        let j = (g.value.ln() / grid.h).round() as usize;
        if j < n {
            masses[j] += f(&g);
        }
    }
    LogGridMeasure::new(grid.h, masses, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SummatoryMethod {
    Exact,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummatoryResult {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub method: SummatoryMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Mobius,
    Liouville,
}

/// `Σ_{n_k ≤ x} w(n_k)/n_k` at each of the sorted abscissae `xs`.
pub fn summatory(sys: &PrimeSystem, weight: Weight, xs: &[f64], grid: GridSpec) -> Result<SummatoryResult> {
    if xs.iter().any(|&x| !(x >= 1.0)) {
        return Err(GnumError::Domain("abscissae must be >= 1".into()));
    }
    if xs.windows(2).any(|w| w[1] < w[0]) {
        return Err(GnumError::Domain("abscissae must be sorted".into()));
    }
    let Some(&x_top) = xs.last() else {
        return Ok(SummatoryResult { abscissae: vec![], values: vec![], method: SummatoryMethod::Exact, grid: None });
    };
    match sys {
        PrimeSystem::Discrete(_) => {
            let mut values = Vec::with_capacity(xs.len());
            let mut acc = KahanSum::new();
            let mut next = 0;
            for g in enumerate(sys, x_top)? {
                let g = g?;
                while next < xs.len() && xs[next] < g.value {
                    values.push(acc.value());
                    next += 1;
                }
                let w = match weight {
                    Weight::Mobius => g.mu(),
                    Weight::Liouville => g.lambda(),
                };
                if w != 0 {
                    acc.add(w as f64 / g.value);
                }
            }
            values.resize(xs.len(), acc.value());
            Ok(SummatoryResult { abscissae: xs.to_vec(), values, method: SummatoryMethod::Exact, grid: None })
        }
        PrimeSystem::Continuous(_) => summatory_grid(sys, weight, xs, grid),
    }
}

/// The grid version of [`summatory`], for any system: running totals of the
/// measure weighted by `e^{-u}`.
pub fn summatory_grid(sys: &PrimeSystem, weight: Weight, xs: &[f64], grid: GridSpec) -> Result<SummatoryResult> {
    if let Some(&x_top) = xs.last() {
        if x_top.ln() > grid.u_max {
            return Err(GnumError::Domain(format!("log x = {} exceeds the grid extent {}", x_top.ln(), grid.u_max)));
        }
    }
    let measure = match weight {
        Weight::Mobius => mobius_measure(sys, grid)?.measure,
        Weight::Liouville => liouville_measure(sys, grid)?.0,
    };
    let totals = measure.running_totals_over_x();
    let values = xs.iter().map(|&x| totals[measure.last_node_at_or_below(x.ln())]).collect();
    Ok(SummatoryResult { abscissae: xs.to_vec(), values, method: SummatoryMethod::Grid, grid: Some(grid) })
}

/// `m(x)`.
pub fn m_value(sys: &PrimeSystem, x: f64, grid: GridSpec) -> Result<f64> {
    Ok(summatory(sys, Weight::Mobius, &[x], grid)?.values[0])
}

/// `ℓ(x)`.
pub fn ell_value(sys: &PrimeSystem, x: f64, grid: GridSpec) -> Result<f64> {
    Ok(summatory(sys, Weight::Liouville, &[x], grid)?.values[0])
}

/// Compares the size of a summatory function on an early and a late window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    /// The late sup is below `threshold` times the early sup.
    pub decays: bool,
    /// `sup |f|` over the late window.
    pub sup_tail: f64,
    pub sup_early: f64,
    pub ratio: f64,
}

/// `sup |f|` over `early` versus `late` windows in `u`, from `(u, f)` samples.
pub fn decay_report(samples: &[(f64, f64)], early: (f64, f64), late: (f64, f64), threshold: f64) -> DecayReport {
    let sup = |(lo, hi): (f64, f64)| {
        samples.iter().filter(|(u, _)| *u >= lo && *u <= hi).map(|(_, v)| v.abs()).fold(0.0, f64::max)
    };
    let (sup_early, sup_tail) = (sup(early), sup(late));
    let ratio = sup_tail / sup_early;
    DecayReport { decays: ratio < threshold, sup_tail, sup_early, ratio }
}

/// Samples `(u, f(e^u))` of `Σ_{j h ≤ u} m_j e^{-jh}` at every node in `[lo, hi]`.
pub fn node_samples(measure: &LogGridMeasure, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let totals = measure.running_totals_over_x();
    (0..measure.len())
        .map(|j| (measure.node_u(j), totals[j]))
        .filter(|&(u, _)| u >= lo && u <= hi)
        .collect()
}

/// Both sides of `|m(cx) - m(x)| <= N(cx)/(cx) - N(x)/x + ∫_x^{cx} N(v)/v² dv`,
/// which holds whenever `|dM| <= dN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationCheck {
    pub x: f64,
    pub c: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl OscillationCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-12 * (1.0 + self.rhs.abs())
    }
}

/// Evaluates the slow-oscillation bound at `(x, c)`, exactly for discrete
/// systems and on the grid otherwise.
pub fn oscillation_check(sys: &PrimeSystem, x: f64, c: f64, grid: GridSpec) -> Result<OscillationCheck> {
    if !(x >= 1.0 && c >= 1.0) {
        return Err(GnumError::Domain(format!("need x >= 1 and c >= 1 (got x = {x}, c = {c})")));
    }
    let top = c * x;
    // (position, dN mass, dM mass)
    let jumps: Vec<(f64, f64, f64)> = match sys {
        PrimeSystem::Discrete(_) => {
            let mut out = Vec::new();
            for g in enumerate(sys, top)? {
                let g = g?;
                out.push((g.value, 1.0, g.mu() as f64));
            }
            out
        }
        PrimeSystem::Continuous(_) => {
            if top.ln() > grid.u_max {
                return Err(GnumError::Domain(format!("log(cx) = {} exceeds the grid extent {}", top.ln(), grid.u_max)));
            }
            let dpi = sys.to_grid(grid.h, grid.u_max)?;
            let dn = exp_conv(&dpi)?;
            let dm = exp_conv(&dpi.negated())?;
            let last = dn.last_node_at_or_below(top.ln());
            (0..=last).map(|j| (dn.node_u(j).exp(), dn.masses()[j], dm.masses()[j])).collect()
        }
    };
    let (mut n, mut m) = (KahanSum::new(), KahanSum::new());
    let mut integral = KahanSum::new();
    let mut prev = x;
    let mut i = 0;
    while i < jumps.len() && jumps[i].0 <= x {
        n.add(jumps[i].1);
        m.add(jumps[i].2 / jumps[i].0);
        i += 1;
    }
    let (n_x, m_x) = (n.value(), m.value());
    for &(pos, dn, dm) in &jumps[i..] {
        integral.add(n.value() * (1.0 / prev - 1.0 / pos));
        n.add(dn);
        m.add(dm / pos);
        prev = pos;
    }
    integral.add(n.value() * (1.0 / prev - 1.0 / top));
    let lhs = (m.value() - m_x).abs();
    let rhs = n.value() / top - n_x / x + integral.value();
    Ok(OscillationCheck { x, c, lhs, rhs })
}

/// `Σ_{n_k <= x} 1/n_k`, the bound `|m(x)| <= H(x)`.
pub fn harmonic_sum(sys: &PrimeSystem, x: f64) -> Result<f64> {
    let mut acc = KahanSum::new();
    for g in enumerate(sys, x)? {
        acc.add(1.0 / g?.value);
    }
    Ok(acc.value())
}

/// Extremes of `N(x)/x` over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WobbleReport {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
    pub grid: GridSpec,
    /// `(u, N(e^u⁻) e^{-u}, N(e^u) e^{-u})` at every node carrying mass.
    #[serde(skip)]
    pub samples: Vec<(f64, f64, f64)>,
}

/// `inf` and `sup` of `N(x)/x` for `log x ∈ [lo, hi]`, with `N` from the grid.
/// `N` is a step function with jumps at nodes, so the sup is attained at a
/// jump (right limit) and the inf just before one (left limit).
pub fn wobble(sys: &PrimeSystem, grid: GridSpec, lo: f64, hi: f64) -> Result<WobbleReport> {
    if !(lo >= 0.0 && hi > lo && hi <= grid.u_max) {
        return Err(GnumError::Domain(format!("window [{lo}, {hi}] must lie inside [0, {}]", grid.u_max)));
    }
    let dn = exp_conv(&sys.to_grid(grid.h, grid.u_max)?)?;
    let totals = dn.running_totals();
    let first = (lo / grid.h).ceil() as usize;
    let last = dn.last_node_at_or_below(hi);
    let mut samples = Vec::new();
    // the window edges are included through their one-sided values
    if first > 0 {
        let edge = totals[first - 1] * (-lo).exp();
        samples.push((lo, edge, edge));
    }
    for j in first..=last {
        if dn.masses()[j] != 0.0 || j == last {
            let u = dn.node_u(j);
            let left = if j == 0 { 0.0 } else { totals[j - 1] } * (-u).exp();
            samples.push((u, left, totals[j] * (-u).exp()));
        }
    }
    samples.push((hi, totals[last] * (-hi).exp(), totals[last] * (-hi).exp()));
    let (mut min, mut argmin, mut max, mut argmax) = (f64::INFINITY, lo, f64::NEG_INFINITY, lo);
    for &(u, left, right) in &samples {
        if u > lo && left < min {
            min = left;
            argmin = u;
        }
        if right > max {
            max = right;
            argmax = u;
        }
    }
    Ok(WobbleReport { min, argmin, max, argmax, grid, samples })
}
