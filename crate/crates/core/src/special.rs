//! Special functions and summation helpers used by the closed-form zeta
//! evaluations.

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(z) = ∫_z^∞ e^{-w}/w dw` on the principal branch
/// (`|arg z| < π`).
pub fn expint_e1(z: Complex64) -> Complex64 {
    if z.norm() <= 2.0 {
        // E1(z) = -γ - ln z - Σ (-z)^k / (k k!)
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..200 {
            term = term * (-z) / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - z.ln() - sum
    } else {
        // continued fraction e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 1..20_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = an * d + b;
            if d.norm() < tiny {
                d = Complex64::new(tiny, 0.0);
            }
            c = b + an / c;
            if c.norm() < tiny {
                c = Complex64::new(tiny, 0.0);
            }
            d = d.inv();
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

/// `Ein(z) = ∫_0^z (1 - e^{-w})/w dw`, entire.
pub fn ein(z: Complex64) -> Complex64 {
    if z.norm() <= 2.0 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(-1.0, 0.0);
        for k in 1..200 {
            term = term * (-z) / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        sum
    } else {
        expint_e1(z) + z.ln() + EULER_GAMMA
    }
}

/// `log(s/(s-1))`, the Mellin–Stieltjes transform of the canonical comparator.
pub fn log_s_over_s_minus_1(s: Complex64) -> Complex64 {
    s.ln() - (s - 1.0).ln()
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Classical Möbius function on positive integers.
pub fn mobius_int(mut n: u64) -> i32 {
    if n == 1 {
        return 1;
    }
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn e1_reference_values() {
        assert!((expint_e1(c(1.0, 0.0)).re - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((expint_e1(c(2.0, 0.0)).re - 0.048_900_510_708_061_1).abs() < 1e-14);
        assert!((expint_e1(c(5.0, 0.0)).re - 0.001_148_295_591_275_33).abs() < 1e-15);
        // E1(i) = -Ci(1) + i (Si(1) - π/2)
        let v = expint_e1(c(0.0, 1.0));
        assert!((v.re + 0.337_403_922_900_968_1).abs() < 1e-13);
        assert!((v.im - (0.946_083_070_367_183 - std::f64::consts::FRAC_PI_2)).abs() < 1e-13);
    }

    #[test]
    fn e1_derivative_matches_finite_difference() {
        // d/dz E1(z) = -e^{-z}/z, checked across the series / fraction switch
        for &z in &[c(0.3, 0.2), c(1.9, 0.5), c(1.5, 1.4), c(0.01, 3.0), c(4.0, -7.0), c(0.05, 40.0)] {
            let eps = 1e-6;
            let fd = (expint_e1(z + eps) - expint_e1(z - eps)) / (2.0 * eps);
            let exact = -(-z).exp() / z;
            assert!((fd - exact).norm() < 1e-6 * exact.norm().max(1.0), "z={z}: {fd} vs {exact}");
        }
    }

    #[test]
    fn ein_matches_e1_identity() {
        for &z in &[c(0.5, 0.0), c(1.9, 0.3), c(2.1, -0.3), c(10.0, 4.0), c(0.0, 1.0)] {
            let direct = expint_e1(z) + z.ln() + EULER_GAMMA;
            assert!((ein(z) - direct).norm() < 1e-13, "z={z}");
        }
        assert_eq!(ein(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn e1_conjugate_symmetry() {
        let z = c(0.7, 2.3);
        assert!((expint_e1(z.conj()) - expint_e1(z).conj()).norm() < 1e-14);
    }

    #[test]
    fn mobius_small() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius_int(i as u64 + 1), m);
        }
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(sieve_primes(100).len(), 25);
        assert_eq!(sieve_primes(1_000_000).len(), 78_498);
    }

    #[test]
    fn compensated_sum() {
        let mut s = KahanSum::new();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.value(), 1.0);
    }
}
