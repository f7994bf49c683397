//! Generalized prime systems: validation, the counting functions `π` and `Π`,
//! the comparator `Π₀`, the bundled example systems, and discretization onto a
//! [`LogGridMeasure`].
//!
//! Continuous systems are described in the log coordinate `u = log x`: a
//! density `ρ(u) = dΠ/du` plus point masses (atoms).

use crate::bump::SplineBump;
use crate::error::{GnumError, Result};
use crate::grid::LogGridMeasure;
use crate::quad::{integrate_split, Tolerance};
use crate::special::{expint_e1, log_s_over_s_minus_1, sieve_primes};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::f64::consts::{E, LN_2};
use std::path::Path;

/// Quadrature tolerance for densities that grow like `e^u / u`.
pub(crate) fn density_tolerance() -> Tolerance {
    Tolerance::new(1e-10, 1e-12)
}

/// Density of `Π₀` in the log coordinate: `(e^u - 1)/u`, equal to 1 at `u = 0`.
pub fn pi0_density(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 + 0.5 * u
    } else {
        u.exp_m1() / u
    }
}

/// `e^{-u} ρ₀(u) = (1 - e^{-u})/u`.
pub fn pi0_scaled(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - 0.5 * u
    } else {
        -(-u).exp_m1() / u
    }
}

/// `Π₀(x) = ∫_1^x (1 - 1/v)/log v dv`.
pub fn pi0_value(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(GnumError::Domain(format!("Π₀ requires x >= 1, got {x}")));
    }
    Ok(integrate_split(pi0_density, 0.0, x.ln(), &[], 1.0, density_tolerance()))
}

/// A point mass `weight` at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub u: f64,
    pub weight: f64,
}

/// Right-continuous nondecreasing step function given by its jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    xs: Vec<f64>,
    jumps: Vec<f64>,
    totals: Vec<f64>,
}

impl StepFunction {
    /// Builds from unsorted jumps, merging equal abscissae.
    pub fn from_jumps(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        if let Some((x, d)) = raw.iter().find(|(x, d)| !(x.is_finite() && *d > 0.0)) {
            return Err(GnumError::Domain(format!("invalid jump ({x}, {d})")));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut xs: Vec<f64> = Vec::with_capacity(raw.len());
        let mut jumps: Vec<f64> = Vec::with_capacity(raw.len());
        for (x, d) in raw {
            match xs.last() {
                Some(&last) if last == x => *jumps.last_mut().unwrap() += d,
                _ => {
                    xs.push(x);
                    jumps.push(d);
                }
            }
        }
        let mut acc = 0.0;
        let totals = jumps
            .iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect();
        Ok(StepFunction { xs, jumps, totals })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            0.0
        } else {
            self.totals[k - 1]
        }
    }

    /// Left limit at `x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v < x);
        if k == 0 {
            0.0
        } else {
            self.totals[k - 1]
        }
    }

    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.jumps.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// A prime system given by an explicit nondecreasing list of primes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSystem {
    label: String,
    primes: Vec<f64>,
    /// The list is known to contain every prime up to this bound.
    complete_to: f64,
}

impl DiscreteSystem {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn primes(&self) -> &[f64] {
        &self.primes
    }

    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn pi_count(&self, x: f64) -> f64 {
        self.primes.partition_point(|&p| p <= x) as f64
    }

    /// `Π(x) = Σ_k π(x^{1/k}) / k`.
    pub fn big_pi(&self, x: f64) -> f64 {
        let Some(&p1) = self.primes.first() else {
            return 0.0;
        };
        if x < p1 {
            return 0.0;
        }
        let kmax = (x.ln() / p1.ln()).floor() as usize + 1;
        (1..=kmax).map(|k| self.pi_count(x.powf(1.0 / k as f64)) / k as f64).sum()
    }

    /// Jumps of `Π` (mass `1/m` at each `p^m`) up to `x_max`.
    pub fn big_pi_step(&self, x_max: f64) -> StepFunction {
        let mut jumps = Vec::new();
        let log_max = x_max.ln();
        for &p in &self.primes {
            let lp = p.ln();
            let mut m = 1;
            while m as f64 * lp <= log_max + 1e-12 {
                jumps.push((p.powi(m), 1.0 / m as f64));
                m += 1;
            }
        }
        StepFunction::from_jumps(jumps).expect("prime powers are finite and weights positive")
    }

    pub fn pi_step(&self) -> StepFunction {
        StepFunction::from_jumps(self.primes.iter().map(|&p| (p, 1.0)).collect()).expect("primes are finite")
    }
}

/// Kahane-type sequences `a_j = j³ + 1`, `b_j = √j`.
fn kahane_pair(j: usize) -> (f64, f64) {
    let jf = j as f64;
    (jf * jf * jf + 1.0, jf.sqrt())
}

/// The continuous-system variants.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousKind {
    /// `dΠ₀`, whose generalized integers have `N(x) = x`.
    Pi0,
    /// `Π₀` plus bumps `x Σ φ^{(k-1)}((log n)^{1/k}(log x - n)) / (n log^{1/k} n)`.
    BumpPerturbed { k: usize, bump: SplineBump },
    /// `(1 + cos(log v)) / log v` for `v >= 2`.
    CosineModulated,
    /// Atoms of weight `2^{k+1/2}/k` at `u = (k + 1/2) log 2`, `k = 1..=terms`.
    Wobble { terms: usize },
    /// `dΠ₀ + ((1 - 1/v)/log v)² ω(v) dv` with `ω = 1/log log v` beyond `e^e`.
    OmegaPerturbed,
    /// `dv/log v` on `[2, ∞)` with atoms at `e^{a_j}` and density removed on `[e^{a_j}, e^{a_j+b_j})`.
    Kahane { terms: usize },
    /// Linearly interpolated density samples plus explicit atoms.
    Tabulated { u0: f64, h: f64, values: Vec<f64>, atoms: Vec<Atom> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSystem {
    label: String,
    kind: ContinuousKind,
}

impl ContinuousSystem {
    pub fn new(label: impl Into<String>, kind: ContinuousKind) -> Self {
        ContinuousSystem { label: label.into(), kind }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &ContinuousKind {
        &self.kind
    }

    /// `ρ(u) = dΠ/du` away from atoms.
    pub fn density(&self, u: f64) -> f64 {
        match &self.kind {
            ContinuousKind::Tabulated { .. } => self.tabulated(u),
            _ => self.scaled_density(u) * u.exp(),
        }
    }

    /// `e^{-u} ρ(u)`, which stays finite where `ρ` itself would overflow.
    pub fn scaled_density(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        match &self.kind {
            ContinuousKind::Pi0 => pi0_scaled(u),
            ContinuousKind::BumpPerturbed { k, bump } => pi0_scaled(u) + bump_scaled(*k, bump, u),
            ContinuousKind::CosineModulated => {
                if u < LN_2 {
                    0.0
                } else {
                    // 1 + cos u without cancellation near its zeros
                    2.0 * (0.5 * u).cos().powi(2) / u
                }
            }
            ContinuousKind::Wobble { .. } => 0.0,
            ContinuousKind::OmegaPerturbed => {
                let base = pi0_scaled(u);
                let ratio = if u < 1e-8 { 1.0 } else { -(-u).exp_m1() / u };
                base + base * ratio * omega_log(u)
            }
            ContinuousKind::Kahane { terms } => {
                if u < LN_2 {
                    return 0.0;
                }
                for j in 1..=*terms {
                    let (a, b) = kahane_pair(j);
                    if u >= a && u < a + b {
                        return 0.0;
                    }
                    if u < a {
                        break;
                    }
                }
                1.0 / u
            }
            ContinuousKind::Tabulated { .. } => self.tabulated(u) * (-u).exp(),
        }
    }

    /// `e^{-u}(ρ(u) - ρ₀(u))`, formed without subtracting nearly equal terms.
    pub fn scaled_excess(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        match &self.kind {
            ContinuousKind::Pi0 => 0.0,
            ContinuousKind::BumpPerturbed { k, bump } => bump_scaled(*k, bump, u),
            ContinuousKind::CosineModulated => {
                if u < LN_2 {
                    -pi0_scaled(u)
                } else {
                    (u.cos() + (-u).exp()) / u
                }
            }
            ContinuousKind::OmegaPerturbed => {
                let ratio = if u < 1e-8 { 1.0 } else { -(-u).exp_m1() / u };
                pi0_scaled(u) * ratio * omega_log(u)
            }
            ContinuousKind::Kahane { .. } => {
                if self.scaled_density(u) == 0.0 {
                    -pi0_scaled(u)
                } else {
                    (-u).exp() / u
                }
            }
            ContinuousKind::Wobble { .. } | ContinuousKind::Tabulated { .. } => self.scaled_density(u) - pi0_scaled(u),
        }
    }

    fn tabulated(&self, u: f64) -> f64 {
        let ContinuousKind::Tabulated { u0, h, values, .. } = &self.kind else {
            unreachable!("only called for tabulated densities")
        };
        let pos = (u - u0) / h;
        if u < 0.0 || pos < 0.0 || pos > (values.len() - 1) as f64 {
            return 0.0;
        }
        if values.len() == 1 {
            return values[0];
        }
        let i = (pos.floor() as usize).min(values.len() - 2);
        let frac = pos - i as f64;
        values[i] * (1.0 - frac) + values[i + 1] * frac
    }

    /// Atoms with `u <= u_max`, sorted by position.
    pub fn atoms_upto(&self, u_max: f64) -> Vec<Atom> {
        match &self.kind {
            ContinuousKind::Wobble { terms } => (1..=*terms)
                .map(|k| {
                    let e = k as f64 + 0.5;
                    Atom { u: e * LN_2, weight: 2f64.powf(e) / k as f64 }
                })
                .take_while(|a| a.u <= u_max)
                .collect(),
            ContinuousKind::Kahane { terms } => (1..=*terms)
                .map(|j| {
                    let (a, b) = kahane_pair(j);
                    Atom { u: a, weight: a.exp() * (b / a).ln_1p() }
                })
                .take_while(|a| a.u <= u_max)
                .collect(),
            ContinuousKind::Tabulated { atoms, .. } => atoms.iter().copied().filter(|a| a.u <= u_max).collect(),
            _ => Vec::new(),
        }
    }

    /// Points in `(lo, hi)` where the density is not smooth.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.kind {
            ContinuousKind::BumpPerturbed { k, .. } => {
                let first = (lo.floor() as i64).max(3);
                let last = hi.ceil() as i64;
                for n in first..=last {
                    let l = (n as f64).ln().powf(1.0 / *k as f64);
                    let pieces = *k + 3;
                    for i in 0..=pieces {
                        out.push(n as f64 + i as f64 / (pieces as f64 * l));
                    }
                }
            }
            ContinuousKind::CosineModulated => out.push(LN_2),
            ContinuousKind::OmegaPerturbed => out.push(E),
            ContinuousKind::Kahane { terms } => {
                out.push(LN_2);
                for j in 1..=*terms {
                    let (a, b) = kahane_pair(j);
                    out.push(a);
                    out.push(a + b);
                }
            }
            ContinuousKind::Tabulated { u0, h, values, .. } => {
                let first = ((lo - u0) / h).floor().max(0.0) as usize;
                let last = (((hi - u0) / h).ceil().max(0.0) as usize).min(values.len() - 1);
                for i in first..=last {
                    out.push(u0 + i as f64 * h);
                }
            }
            _ => {}
        }
        out.retain(|&x| x > lo && x < hi);
        out
    }

    /// `log ζ(s)` in closed form, when one is known.
    pub fn closed_log_zeta(&self, s: Complex64) -> Option<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let z = s - 1.0;
        match &self.kind {
            ContinuousKind::Pi0 => Some(log_s_over_s_minus_1(s)),
            ContinuousKind::CosineModulated => {
                Some(expint_e1(z * LN_2) + 0.5 * expint_e1((z - i) * LN_2) + 0.5 * expint_e1((z + i) * LN_2))
            }
            ContinuousKind::Wobble { .. } => {
                let q = (-z * LN_2).exp();
                Some(-(-z * 0.5 * LN_2).exp() * (Complex64::new(1.0, 0.0) - q).ln())
            }
            ContinuousKind::Kahane { terms } => {
                let mut acc = expint_e1(z * LN_2);
                for j in 1..=*terms {
                    let (a, b) = kahane_pair(j);
                    acc += (-z * a).exp() * (b / a).ln_1p() - expint_e1(z * a) + expint_e1(z * (a + b));
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// `∫_{u > cutoff} e^{-s u} dΠ(u)`: exact where a closed form exists,
    /// otherwise the `Π₀`-shaped model `E1((s-1)U) - E1(sU)`.
    /// The flag reports whether the value is exact.
    pub fn tail_transform(&self, s: Complex64, cutoff: f64) -> (Complex64, bool) {
        let i = Complex64::new(0.0, 1.0);
        let z = s - 1.0;
        let u = cutoff.max(0.0);
        match &self.kind {
            ContinuousKind::Pi0 => (expint_e1(z * u) - expint_e1(s * u), true),
            ContinuousKind::CosineModulated => {
                let c = u.max(LN_2);
                (expint_e1(z * c) + 0.5 * expint_e1((z - i) * c) + 0.5 * expint_e1((z + i) * c), true)
            }
            ContinuousKind::Wobble { .. } => {
                let full = self.closed_log_zeta(s).unwrap();
                let head: Complex64 = self.wobble_atoms_through(u).map(|a| (-s * a.u).exp() * a.weight).sum();
                (full - head, true)
            }
            ContinuousKind::Kahane { terms } => {
                let c = u.max(LN_2);
                let mut acc = expint_e1(z * c);
                for j in 1..=*terms {
                    let (a, b) = kahane_pair(j);
                    if a + b <= c {
                        continue;
                    }
                    if a > c {
                        acc += (-z * a).exp() * (b / a).ln_1p();
                    }
                    acc -= expint_e1(z * a.max(c)) - expint_e1(z * (a + b));
                }
                (acc, true)
            }
            ContinuousKind::Tabulated { .. } => (Complex64::new(0.0, 0.0), false),
            _ => (expint_e1(z * u) - expint_e1(s * u), false),
        }
    }

    fn wobble_atoms_through(&self, u: f64) -> impl Iterator<Item = Atom> {
        let ContinuousKind::Wobble { .. } = self.kind else {
            panic!("only the wobble system has an unbounded atom sequence");
        };
        let kmax = (u / LN_2 - 0.5).floor().max(0.0) as usize;
        (1..=kmax).map(|k| {
            let e = k as f64 + 0.5;
            Atom { u: e * LN_2, weight: 2f64.powf(e) / k as f64 }
        })
    }

    /// `Π(e^u)`: quadrature of the density plus atoms up to `u`.
    pub fn big_pi_at_u(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.atoms_upto(0.0).iter().map(|a| a.weight).sum();
        }
        let smooth = integrate_split(|v| self.density(v), 0.0, u, &self.breakpoints(0.0, u), 1.0, density_tolerance());
        smooth + self.atoms_upto(u).iter().map(|a| a.weight).sum::<f64>()
    }
}

/// `ω(e^u)`: `1/log u` for `u >= e`, 1 below.
fn omega_log(u: f64) -> f64 {
    if u >= E {
        1.0 / u.ln()
    } else {
        1.0
    }
}

/// `e^{-u}` times the extra density of the bump-perturbed system.
fn bump_scaled(k: usize, bump: &SplineBump, u: f64) -> f64 {
    let n = u.floor();
    if n < 3.0 {
        return 0.0;
    }
    let l = n.ln().powf(1.0 / k as f64);
    let v = l * (u - n);
    if v >= 1.0 {
        return 0.0;
    }
    (bump.derivative(k - 1, v) + l * bump.derivative(k, v)) / (n * l)
}

/// Closed form of `Π(e^u) - Π₀(e^u)` for the bump-perturbed system.
pub fn bump_offset(k: usize, bump: &SplineBump, u: f64) -> f64 {
    let n = u.floor();
    if n < 3.0 {
        return 0.0;
    }
    let l = n.ln().powf(1.0 / k as f64);
    let v = l * (u - n);
    if v >= 1.0 {
        return 0.0;
    }
    u.exp() / (n * l) * bump.derivative(k - 1, v)
}

/// A validated generalized prime system.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimeSystem {
    Discrete(DiscreteSystem),
    Continuous(ContinuousSystem),
}

impl PrimeSystem {
    pub fn label(&self) -> &str {
        match self {
            PrimeSystem::Discrete(d) => d.label(),
            PrimeSystem::Continuous(c) => c.label(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, PrimeSystem::Discrete(_))
    }

    pub fn as_discrete(&self) -> Result<&DiscreteSystem> {
        match self {
            PrimeSystem::Discrete(d) => Ok(d),
            PrimeSystem::Continuous(c) => {
                Err(GnumError::Unsupported(format!("`{}` is continuous; a discrete system is required", c.label())))
            }
        }
    }

    /// Panics for discrete systems; use where the variant is already known.
    pub fn as_continuous(&self) -> &ContinuousSystem {
        match self {
            PrimeSystem::Continuous(c) => c,
            PrimeSystem::Discrete(d) => panic!("`{}` is discrete", d.label()),
        }
    }

    /// Convenience constructor for an explicit prime list.
    pub fn discrete(primes: &[f64]) -> Result<Self> {
        validate(&SystemSpec::Discrete { primes: primes.to_vec(), label: None })
    }

    /// `π(x)`: number of primes `<= x`, with multiplicity.
    pub fn pi_count(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        match self {
            PrimeSystem::Discrete(d) => Ok(d.pi_count(x)),
            PrimeSystem::Continuous(_) => {
                Err(GnumError::Unsupported("π is defined for discrete systems; use Π for continuous ones".into()))
            }
        }
    }

    /// `Π(x) = π(x) + π(x^{1/2})/2 + π(x^{1/3})/3 + …`.
    pub fn big_pi(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(match self {
            PrimeSystem::Discrete(d) => d.big_pi(x),
            PrimeSystem::Continuous(c) => c.big_pi_at_u(x.ln()),
        })
    }

    /// Discretizes `dΠ` onto the grid `u = j·h`, `0 <= j·h <= u_max`.
    pub fn to_grid(&self, h: f64, u_max: f64) -> Result<LogGridMeasure> {
        Ok(self.to_grid_report(h, u_max)?.measure)
    }

    pub fn to_grid_report(&self, h: f64, u_max: f64) -> Result<GridBuild> {
        if !(h > 0.0 && u_max > 0.0 && h.is_finite() && u_max.is_finite()) {
            return Err(GnumError::Domain(format!("grid needs h > 0 and u_max > 0 (got h={h}, u_max={u_max})")));
        }
        let n = (u_max / h + 1e-9).floor() as usize + 1;
        let mut masses = vec![0.0; n];
        let mut misalignment = 0.0f64;
        let mut misaligned = 0usize;
        let mut place = |u: f64, w: f64, masses: &mut Vec<f64>| {
            let node = ((u / h).round() as usize).max(1);
            if node >= n {
                return;
            }
            let off = (u - node as f64 * h).abs();
            misalignment = misalignment.max(off);
            if off > 0.25 * h {
                misaligned += 1;
            }
            masses[node] += w;
        };
        match self {
            PrimeSystem::Discrete(d) => {
                for &p in d.primes() {
                    let lp = p.ln();
                    let mut m = 1;
                    while m as f64 * lp <= u_max + 1e-12 {
                        place(m as f64 * lp, 1.0 / m as f64, &mut masses);
                        m += 1;
                    }
                }
            }
            PrimeSystem::Continuous(c) => {
                let top = (n as f64 - 0.5) * h;
                let breaks = c.breakpoints(0.0, top);
                let tol = density_tolerance();
                for (j, slot) in masses.iter_mut().enumerate().skip(1) {
                    let lo = if j == 1 { 0.0 } else { (j as f64 - 0.5) * h };
                    let hi = (j as f64 + 0.5) * h;
                    let a = breaks.partition_point(|&b| b <= lo);
                    let b = breaks.partition_point(|&b| b < hi);
                    *slot = integrate_split(|v| c.density(v), lo, hi, &breaks[a..b], f64::INFINITY, tol);
                }
                for atom in c.atoms_upto(top) {
                    place(atom.u, atom.weight, &mut masses);
                }
            }
        }
        Ok(GridBuild { measure: LogGridMeasure::new(h, masses, false)?, max_misalignment: misalignment, misaligned_atoms: misaligned })
    }
}

/// Result of discretizing a system, with atom-placement diagnostics.
#[derive(Debug, Clone)]
pub struct GridBuild {
    pub measure: LogGridMeasure,
    /// Largest distance in `u` between an atom and the node it was assigned to.
    pub max_misalignment: f64,
    /// Atoms farther than `h/4` from their node.
    pub misaligned_atoms: usize,
}

fn check_x(x: f64) -> Result<()> {
    if x >= 1.0 {
        Ok(())
    } else {
        Err(GnumError::Domain(format!("x must be >= 1, got {x}")))
    }
}

/// Raw system description as found in a definition file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemSpec {
    Discrete {
        primes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Continuous {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<TabulatedDensity>,
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Builtin {
        builtin: BuiltinSpec,
    },
}

/// Samples of `ρ(u)` at `u0 + i·h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedDensity {
    pub u0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltinSpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

pub const BUILTIN_NAMES: &[&str] = &["rational", "pi0", "ex41", "ex42", "ex43", "ex51", "ex52"];

/// Checks every invariant of a raw description, reporting all violations at once.
pub fn validate(spec: &SystemSpec) -> Result<PrimeSystem> {
    let mut problems = Vec::new();
    match spec {
        SystemSpec::Discrete { primes, label } => {
            if let Some(&p) = primes.first() {
                if !(p > 1.0) {
                    problems.push(format!("first prime must exceed 1 (got {p})"));
                }
            }
            for (i, p) in primes.iter().enumerate() {
                if !p.is_finite() {
                    problems.push(format!("prime #{i} is not finite"));
                }
            }
            for (i, w) in primes.windows(2).enumerate() {
                if w[1] < w[0] {
                    problems.push(format!("sequence decreases at position {}: {} > {}", i + 1, w[0], w[1]));
                }
            }
            if problems.is_empty() {
                return Ok(PrimeSystem::Discrete(DiscreteSystem {
                    label: label.clone().unwrap_or_else(|| "custom".into()),
                    primes: primes.clone(),
                    complete_to: f64::INFINITY,
                }));
            }
        }
        SystemSpec::Continuous { density, atoms, label } => {
            if let Some(d) = density {
                if !(d.h > 0.0 && d.h.is_finite()) {
                    problems.push(format!("density spacing must be positive (got {})", d.h));
                }
                if d.u0 < 0.0 {
                    problems.push(format!("density must start at u0 >= 0 (got {})", d.u0));
                }
                if d.values.is_empty() {
                    problems.push("density has no samples".into());
                }
                for (i, &v) in d.values.iter().enumerate() {
                    if !(v >= 0.0) || !v.is_finite() {
                        problems.push(format!("negative density {v} at sample {i} (u = {})", d.u0 + i as f64 * d.h));
                    }
                }
            }
            for (i, &(u, w)) in atoms.iter().enumerate() {
                if !(u > 0.0) {
                    problems.push(format!("atom #{i} must sit at u > 0 (got {u})"));
                }
                if !(w > 0.0) {
                    problems.push(format!("nonpositive atom weight {w} at atom #{i}"));
                }
            }
            if problems.is_empty() {
                let mut atoms: Vec<Atom> = atoms.iter().map(|&(u, weight)| Atom { u, weight }).collect();
                atoms.sort_by(|a, b| a.u.total_cmp(&b.u));
                let (u0, h, values) = match density {
                    Some(d) => (d.u0, d.h, d.values.clone()),
                    None => (0.0, 1.0, vec![0.0]),
                };
                return Ok(PrimeSystem::Continuous(ContinuousSystem::new(
                    label.clone().unwrap_or_else(|| "custom".into()),
                    ContinuousKind::Tabulated { u0, h, values, atoms },
                )));
            }
        }
        SystemSpec::Builtin { builtin } => return builtin_system(&builtin.name, &builtin.params),
    }
    Err(GnumError::InvalidSystem(problems))
}

fn param_usize(params: &Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .filter(|x| *x >= 0.0 && x.fract() == 0.0)
            .map(|x| x as usize)
            .ok_or_else(|| GnumError::InvalidSystem(vec![format!("parameter `{key}` must be a nonnegative integer")])),
    }
}

/// Builds one of the bundled systems.
///
/// | name | params | system |
/// |------|--------|--------|
/// | `rational` | `limit` (default 10⁶) | ordinary primes up to `limit` |
/// | `pi0` | | `dΠ₀`, for which `N(x) = x` |
/// | `ex41` | `k >= 2` (default 2) | bump-perturbed `Π₀` |
/// | `ex42` | | `(1 + cos log v)/log v` on `[2, ∞)` |
/// | `ex43` | `terms` (default 500) | wobble atoms `2^{k+1/2}/k` |
/// | `ex51` | | `ω`-perturbed `Π₀` |
/// | `ex52` | `terms` (default 12) | Kahane's atoms-and-gaps system |
pub fn builtin_system(name: &str, params: &Map<String, Value>) -> Result<PrimeSystem> {
    let sys = match name {
        "rational" => {
            let limit = param_usize(params, "limit", 1_000_000)?;
            PrimeSystem::Discrete(DiscreteSystem {
                label: "rational".into(),
                primes: sieve_primes(limit as u64).into_iter().map(|p| p as f64).collect(),
                complete_to: limit as f64,
            })
        }
        "pi0" => PrimeSystem::Continuous(ContinuousSystem::new("pi0", ContinuousKind::Pi0)),
        "ex41" => {
            let k = param_usize(params, "k", 2)?;
            if k < 2 {
                return Err(GnumError::InvalidSystem(vec![format!("ex41 needs an integer k >= 2 (got {k})")]));
            }
            let bump = SplineBump::normalized(k + 2, k, 1.0 / 16.0);
            PrimeSystem::Continuous(ContinuousSystem::new("ex41", ContinuousKind::BumpPerturbed { k, bump }))
        }
        "ex42" => PrimeSystem::Continuous(ContinuousSystem::new("ex42", ContinuousKind::CosineModulated)),
        "ex43" => {
            let terms = param_usize(params, "terms", 500)?;
            PrimeSystem::Continuous(ContinuousSystem::new("ex43", ContinuousKind::Wobble { terms }))
        }
        "ex51" => PrimeSystem::Continuous(ContinuousSystem::new("ex51", ContinuousKind::OmegaPerturbed)),
        "ex52" => {
            let terms = param_usize(params, "terms", 12)?;
            PrimeSystem::Continuous(ContinuousSystem::new("ex52", ContinuousKind::Kahane { terms }))
        }
        other => return Err(GnumError::UnknownBuiltin(other.to_string())),
    };
    Ok(sys)
}

pub fn builtin(name: &str) -> Result<PrimeSystem> {
    builtin_system(name, &Map::new())
}

impl PrimeSystem {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec =
            serde_json::from_str(text).map_err(|e| GnumError::InvalidSystem(vec![format!("bad system JSON: {e}")]))?;
        validate(&spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GnumError::InvalidSystem(vec![format!("cannot read {}: {e}", path.display())]))?;
        Self::from_json(&text)
    }

    /// Resolves `builtin:NAME[:key=value,...]`, `primes:2,3,5`, or a JSON file path.
    pub fn from_source(source: &str) -> Result<Self> {
        if let Some(rest) = source.strip_prefix("builtin:") {
            let (name, args) = rest.split_once(':').unwrap_or((rest, ""));
            let mut params = Map::new();
            for pair in args.split(',').filter(|s| !s.is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| GnumError::InvalidSystem(vec![format!("bad builtin parameter `{pair}`")]))?;
                let num: f64 = v
                    .parse()
                    .map_err(|_| GnumError::InvalidSystem(vec![format!("parameter `{k}` is not a number")]))?;
                params.insert(k.to_string(), Value::from(num));
            }
            builtin_system(name, &params)
        } else if let Some(list) = source.strip_prefix("primes:") {
            let primes: std::result::Result<Vec<f64>, _> = list.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let primes = primes.map_err(|_| GnumError::InvalidSystem(vec![format!("cannot parse prime list `{list}`")]))?;
            PrimeSystem::discrete(&primes)
        } else {
            Self::from_file(Path::new(source.strip_prefix("file:").unwrap_or(source)))
        }
    }
}
