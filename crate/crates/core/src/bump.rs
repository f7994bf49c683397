//! Compactly supported bump built from a cardinal B-spline, rescaled to `(0, 1)`.

/// `φ(v) = c · M_d((d + 1) v)` with `M_d` the cardinal B-spline of degree `d`
/// on the knots `0, 1, …, d + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineBump {
    degree: usize,
    scale: f64,
    binom: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl SplineBump {
    /// Bump of the given degree with `sup |φ^{(order)}|` normalized to `target`.
    pub fn normalized(degree: usize, order: usize, target: f64) -> Self {
        assert!(order < degree, "derivative order must stay below the spline degree");
        let mut bump = SplineBump { degree, scale: 1.0, binom: binomials(degree + 1) };
        let samples = 20_000;
        let peak = (0..=samples)
            .map(|i| bump.derivative(order, i as f64 / samples as f64).abs())
            .fold(0.0, f64::max);
        bump.scale = target / peak;
        bump
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The knots of `φ` inside `[0, 1]`.
    pub fn knots(&self) -> Vec<f64> {
        let n = self.degree + 1;
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }

    /// `φ^{(order)}(v)`; zero outside `(0, 1)`.
    pub fn derivative(&self, order: usize, v: f64) -> f64 {
        if v <= 0.0 || v >= 1.0 || order > self.degree {
            return 0.0;
        }
        let n = (self.degree + 1) as f64;
        self.scale * n.powi(order as i32) * self.cardinal_derivative(order, n * v)
    }

    pub fn value(&self, v: f64) -> f64 {
        self.derivative(0, v)
    }

    /// `M_d^{(j)}(x) = Σ_i (-1)^i C(d+1, i) (x - i)_+^{d-j} / (d-j)!`,
    /// evaluated on the left half and reflected to limit cancellation.
    fn cardinal_derivative(&self, order: usize, x: f64) -> f64 {
        let d = self.degree;
        let width = (d + 1) as f64;
        let (x, sign) = if x > 0.5 * width {
            (width - x, if order.is_multiple_of(2) { 1.0 } else { -1.0 })
        } else {
            (x, 1.0)
        };
        let p = d - order;
        let mut acc = 0.0;
        for (i, &c) in self.binom.iter().enumerate() {
            let shifted = x - i as f64;
            if shifted <= 0.0 {
                break;
            }
            let term = c * if p == 0 { 1.0 } else { shifted.powi(p as i32) };
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        sign * acc / factorial(p)
    }
}

fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 1..=n {
        let prev = row[k - 1];
        row.push(prev * (n - k + 1) as f64 / k as f64);
    }
    row
}
