//! Measures on `[1, ∞)` discretized on a uniform grid in `u = log x`.
//!
//! Node `j` sits at `u = j·h`. Multiplication of abscissae is addition in `u`,
//! so multiplicative convolution of measures becomes the Cauchy product of the
//! mass sequences. All recurrences are the direct lower-triangular ones and are
//! truncated at the length of their input.

use crate::error::{GnumError, Result};
use crate::special::KahanSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point `s = σ + it` of the Mellin variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinPoint {
    pub sigma: f64,
    pub t: f64,
}

impl MellinPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        MellinPoint { sigma, t }
    }

    pub fn real(sigma: f64) -> Self {
        MellinPoint { sigma, t: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

impl std::fmt::Display for MellinPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.t < 0.0 {
            write!(f, "{}-{}i", self.sigma, -self.t)
        } else {
            write!(f, "{}+{}i", self.sigma, self.t)
        }
    }
}

impl From<Complex64> for MellinPoint {
    fn from(s: Complex64) -> Self {
        MellinPoint { sigma: s.re, t: s.im }
    }
}

impl std::str::FromStr for MellinPoint {
    type Err = GnumError;

    /// Parses `2`, `1.5+4i`, `1.1-7i`, `1.5+4.0i`.
    fn from_str(raw: &str) -> Result<Self> {
        let s = raw.trim().replace(' ', "");
        let bad = || GnumError::Domain(format!("cannot parse complex number `{raw}`"));
        if let Some(body) = s.strip_suffix('i') {
            // find the sign separating real and imaginary parts (skip exponent signs)
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            match split {
                Some(k) => {
                    let re: f64 = body[..k].parse().map_err(|_| bad())?;
                    let im_str = &body[k..];
                    let im: f64 = match im_str {
                        "+" => 1.0,
                        "-" => -1.0,
                        _ => im_str.parse().map_err(|_| bad())?,
                    };
                    Ok(MellinPoint::new(re, im))
                }
                None => {
                    let im: f64 = if body.is_empty() { 1.0 } else { body.parse().map_err(|_| bad())? };
                    Ok(MellinPoint::new(0.0, im))
                }
            }
        } else {
            Ok(MellinPoint::real(s.parse().map_err(|_| bad())?))
        }
    }
}

/// A discretized measure: mass `masses[j]` sits at `u = j·spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogGridMeasure {
    spacing: f64,
    masses: Vec<f64>,
    signed: bool,
}

impl LogGridMeasure {
    pub fn new(spacing: f64, masses: Vec<f64>, signed: bool) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(GnumError::InvalidMeasure(format!("spacing must be positive, got {spacing}")));
        }
        if masses.is_empty() {
            return Err(GnumError::InvalidMeasure("a grid measure needs at least one node".into()));
        }
        if let Some(j) = masses.iter().position(|m| !m.is_finite()) {
            return Err(GnumError::InvalidMeasure(format!("non-finite mass at node {j}")));
        }
        if !signed {
            if let Some(j) = masses.iter().position(|&m| m < 0.0) {
                return Err(GnumError::InvalidMeasure(format!(
                    "negative mass {} at node {j} in an unsigned measure",
                    masses[j]
                )));
            }
        }
        Ok(LogGridMeasure { spacing, masses, signed })
    }

    /// Unit mass at node 0 (the identity for convolution).
    pub fn delta(spacing: f64, len: usize) -> Result<Self> {
        Self::atom(spacing, len, 0, 1.0)
    }

    pub fn zeros(spacing: f64, len: usize) -> Result<Self> {
        Self::new(spacing, vec![0.0; len], false)
    }

    pub fn atom(spacing: f64, len: usize, node: usize, mass: f64) -> Result<Self> {
        let mut masses = vec![0.0; len];
        if node < len {
            masses[node] = mass;
        }
        Self::new(spacing, masses, mass < 0.0)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn into_masses(self) -> Vec<f64> {
        self.masses
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn node_u(&self, j: usize) -> f64 {
        j as f64 * self.spacing
    }

    /// Largest `u` represented on the grid.
    pub fn u_max(&self) -> f64 {
        self.node_u(self.len() - 1)
    }

    /// The same masses, now allowed to take either sign.
    pub fn as_signed(&self) -> Self {
        LogGridMeasure { signed: true, ..self.clone() }
    }

    pub fn negated(&self) -> Self {
        LogGridMeasure { spacing: self.spacing, masses: self.masses.iter().map(|m| -m).collect(), signed: true }
    }

    /// Truncates or zero-pads to `len` nodes.
    pub fn resized(&self, len: usize) -> Self {
        let mut masses = self.masses.clone();
        masses.resize(len.max(1), 0.0);
        LogGridMeasure { masses, ..self.clone() }
    }

    /// Node-wise maximum absolute difference over the common prefix.
    pub fn max_abs_diff(&self, other: &LogGridMeasure) -> f64 {
        self.masses.iter().zip(&other.masses).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Right-continuous running totals `Σ_{i ≤ j} m_i` (compensated).
    pub fn running_totals(&self) -> Vec<f64> {
        let mut acc = KahanSum::new();
        self.masses
            .iter()
            .map(|&m| {
                acc.add(m);
                acc.value()
            })
            .collect()
    }

    /// Running totals of `m_i · e^{-i h}`: `∫_{1^-}^{x} dA(v)/v` at each node.
    pub fn running_totals_over_x(&self) -> Vec<f64> {
        let mut acc = KahanSum::new();
        self.masses
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                acc.add(m * (-(j as f64) * self.spacing).exp());
                acc.value()
            })
            .collect()
    }

    /// Index of the last node with `j·h <= u`.
    pub fn last_node_at_or_below(&self, u: f64) -> usize {
        let k = (u / self.spacing + 1e-9).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(self.len() - 1)
        }
    }

    /// Pushforward under `x ↦ x²`: mass at node `j` moves to node `2j`.
    /// Returns the image and the total mass that landed beyond the grid.
    pub fn push_square(&self) -> (LogGridMeasure, f64) {
        let n = self.len();
        let mut out = vec![0.0; n];
        let mut dropped = 0.0;
        for (j, &m) in self.masses.iter().enumerate() {
            if 2 * j < n {
                out[2 * j] += m;
            } else {
                dropped += m;
            }
        }
        (LogGridMeasure { spacing: self.spacing, masses: out, signed: self.signed }, dropped)
    }

    /// Indices of nonzero masses, used to skip work in the recurrences.
    fn support(&self) -> Vec<usize> {
        self.masses.iter().enumerate().filter(|(_, &m)| m != 0.0).map(|(j, _)| j).collect()
    }
}

fn check_spacing(a: &LogGridMeasure, b: &LogGridMeasure) -> Result<()> {
    let (ha, hb) = (a.spacing, b.spacing);
    if (ha - hb).abs() > 1e-12 * ha.abs().max(hb.abs()) {
        return Err(GnumError::SpacingMismatch(ha, hb));
    }
    Ok(())
}

/// Cauchy product, truncated to `max_len` nodes (default: `a.len() + b.len() - 1`).
pub fn conv(a: &LogGridMeasure, b: &LogGridMeasure, max_len: Option<usize>) -> Result<LogGridMeasure> {
    check_spacing(a, b)?;
    let full = a.len() + b.len() - 1;
    let n = max_len.map_or(full, |m| m.clamp(1, full));
    let mut out = vec![0.0; n];
    // iterate over the sparser factor's support
    let (sparse, dense) = if a.support().len() <= b.support().len() { (a, b) } else { (b, a) };
    for i in sparse.support() {
        if i >= n {
            break;
        }
        let ai = sparse.masses[i];
        let limit = (n - i).min(dense.len());
        for (k, &bk) in dense.masses[..limit].iter().enumerate() {
            out[i + k] += ai * bk;
        }
    }
    LogGridMeasure::new(a.spacing, out, a.signed || b.signed)
}

/// Convolution exponential `δ + B + B*B/2! + …`, same length as `b`.
pub fn exp_conv(b: &LogGridMeasure) -> Result<LogGridMeasure> {
    if b.masses[0] != 0.0 {
        return Err(GnumError::InvalidPrimeMeasure(b.masses[0]));
    }
    let n = b.len();
    let support = b.support();
    let weighted: Vec<(usize, f64)> = support.iter().map(|&i| (i, i as f64 * b.masses[i])).collect();
    let mut a = vec![0.0; n];
    a[0] = 1.0;
    for j in 1..n {
        let mut acc = 0.0;
        for &(i, ib) in &weighted {
            if i > j {
                break;
            }
            acc += ib * a[j - i];
        }
        a[j] = acc / j as f64;
    }
    LogGridMeasure::new(b.spacing, a, b.signed)
}

/// Convolution logarithm: inverse of [`exp_conv`] on measures with unit mass at node 0.
pub fn log_conv(a: &LogGridMeasure) -> Result<LogGridMeasure> {
    if a.masses[0] != 1.0 {
        return Err(GnumError::NotNormalized(a.masses[0]));
    }
    let n = a.len();
    let support: Vec<usize> = a.support().into_iter().filter(|&k| k > 0).collect();
    let mut b = vec![0.0; n];
    for j in 1..n {
        // Σ_{i=1}^{j-1} i b_i a_{j-i}, indexed by k = j - i over the support of a
        let mut acc = 0.0;
        for &k in &support {
            if k >= j {
                break;
            }
            let i = j - k;
            acc += i as f64 * b[i] * a.masses[k];
        }
        b[j] = a.masses[j] - acc / j as f64;
    }
    LogGridMeasure::new(a.spacing, b, true)
}

/// Convolution inverse: `conv(a, inv_conv(a)) = δ` up to truncation.
pub fn inv_conv(a: &LogGridMeasure) -> Result<LogGridMeasure> {
    let a0 = a.masses[0];
    if a0 == 0.0 {
        return Err(GnumError::NonInvertible);
    }
    let n = a.len();
    let support: Vec<usize> = a.support().into_iter().filter(|&k| k > 0).collect();
    let mut m = vec![0.0; n];
    m[0] = 1.0 / a0;
    for j in 1..n {
        let mut acc = 0.0;
        for &i in &support {
            if i > j {
                break;
            }
            acc += a.masses[i] * m[j - i];
        }
        m[j] = -acc / a0;
    }
    LogGridMeasure::new(a.spacing, m, true)
}

/// Mellin–Stieltjes sum `Σ_j m_j e^{-s·j·h}`.
pub fn mellin(a: &LogGridMeasure, s: MellinPoint) -> Complex64 {
    let s = s.to_complex();
    let step = (-s * a.spacing).exp();
    // direct powers lose accuracy over long grids; re-anchor periodically
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = Complex64::new(1.0, 0.0);
    for (j, &m) in a.masses.iter().enumerate() {
        if j % 256 == 0 {
            w = (-s * (j as f64 * a.spacing)).exp();
        }
        if m != 0.0 {
            acc += w * m;
        }
        w *= step;
    }
    acc
}

/// `Σ_{j·h <= u} m_j`.
pub fn cumulative(a: &LogGridMeasure, u: f64) -> Result<f64> {
    if u < 0.0 || u.is_nan() {
        return Err(GnumError::Domain(format!("cumulative requires u >= 0, got {u}")));
    }
    let last = a.last_node_at_or_below(u);
    let mut acc = KahanSum::new();
    for &m in &a.masses[..=last] {
        acc.add(m);
    }
    Ok(acc.value())
}
