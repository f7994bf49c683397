//! Exact enumeration of generalized integers for discrete prime systems.
//!
//! Elements are produced in nondecreasing order from a priority queue. Each
//! element `S = T·p_i` (with `i` the largest index used) has two successors,
//! `S·p_i` and `T·p_{i+1}`, so every canonical factorization (nondecreasing
//! prime indices) is reached exactly once and no deduplication is needed.

use crate::error::{GnumError, Result};
use crate::grid::{cumulative, exp_conv};
use crate::systems::{DiscreteSystem, PrimeSystem};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

/// Default element budget when `GNUM_BUDGET` is not set.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Element budget from the `GNUM_BUDGET` environment variable.
pub fn budget_from_env() -> u64 {
    std::env::var("GNUM_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// An element of the free commutative semigroup on the indexed primes.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedInteger {
    /// Sparse `(prime index, exponent >= 1)` pairs with increasing indices.
    pub exponents: Vec<(usize, u32)>,
    pub value: f64,
}

impl GeneralizedInteger {
    pub fn one() -> Self {
        GeneralizedInteger { exponents: Vec::new(), value: 1.0 }
    }

    /// Total number of prime factors, `Ω`.
    pub fn omega(&self) -> u32 {
        self.exponents.iter().map(|&(_, e)| e).sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.exponents.last().map(|&(i, _)| i)
    }

    /// `μ`: zero unless squarefree, else `(-1)^{#distinct}`.
    pub fn mu(&self) -> i32 {
        if self.exponents.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.exponents.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `λ = (-1)^Ω`.
    pub fn lambda(&self) -> i32 {
        if self.omega().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Renders the exponent list as `i^e` tokens separated by spaces.
    pub fn exponent_string(&self) -> String {
        self.exponents.iter().map(|(i, e)| format!("{i}^{e}")).collect::<Vec<_>>().join(" ")
    }
}

pub fn mu_of(g: &GeneralizedInteger) -> i32 {
    g.mu()
}

pub fn lambda_of(g: &GeneralizedInteger) -> i32 {
    g.lambda()
}

struct Candidate {
    value: f64,
    exponents: Vec<(usize, u32)>,
    /// Value of the element with the last factor removed.
    parent_value: f64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed so BinaryHeap pops the smallest (value, exponent list)
    fn cmp(&self, other: &Self) -> Ordering {
        other.value.total_cmp(&self.value).then_with(|| other.exponents.cmp(&self.exponents))
    }
}

/// Streaming enumeration of all generalized integers `<= x_max`.
pub struct Enumeration<'a> {
    primes: &'a [f64],
    x_max: f64,
    heap: BinaryHeap<Candidate>,
    ties: VecDeque<GeneralizedInteger>,
    started: bool,
    emitted: u64,
    budget: u64,
    failed: bool,
}

impl<'a> Enumeration<'a> {
    fn push(&mut self, value: f64, exponents: Vec<(usize, u32)>, parent_value: f64) {
        if value <= self.x_max {
            self.heap.push(Candidate { value, exponents, parent_value });
        }
    }

    fn expand(&mut self, cand: &Candidate) {
        let &(i, e) = cand.exponents.last().expect("non-unit candidates have a factor");
        let p = self.primes[i];
        // same index again
        let mut up = cand.exponents.clone();
        up.last_mut().unwrap().1 += 1;
        self.push(cand.value * p, up, cand.value);
        // replace the last factor by the next prime
        if let Some(&q) = self.primes.get(i + 1) {
            let mut side = cand.exponents.clone();
            if e == 1 {
                side.pop();
            } else {
                side.last_mut().unwrap().1 -= 1;
            }
            side.push((i + 1, 1));
            self.push(cand.parent_value * q, side, cand.parent_value);
        }
    }

    /// Pops every candidate sharing the smallest value. Equal primes make a
    /// tie spawn further ties, so expansion continues until the top differs.
    fn refill(&mut self) {
        let Some(first) = self.heap.pop() else {
            return;
        };
        let value = first.value;
        self.expand(&first);
        let mut group = vec![first.exponents];
        while self.heap.peek().is_some_and(|c| c.value == value) {
            let c = self.heap.pop().unwrap();
            self.expand(&c);
            group.push(c.exponents);
        }
        group.sort();
        self.ties.extend(group.into_iter().map(|exponents| GeneralizedInteger { exponents, value }));
    }
}

impl Iterator for Enumeration<'_> {
    type Item = Result<GeneralizedInteger>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if !self.started {
            self.started = true;
            self.emitted = 1;
            if let Some(&p0) = self.primes.first() {
                self.push(p0, vec![(0, 1)], 1.0);
            }
            return Some(Ok(GeneralizedInteger::one()));
        }
        if self.ties.is_empty() {
            self.refill();
        }
        let g = self.ties.pop_front()?;
        if self.emitted >= self.budget {
            self.failed = true;
            return Some(Err(GnumError::BudgetExceeded { budget: self.budget }));
        }
        self.emitted += 1;
        Some(Ok(g))
    }
}

/// Enumerates with the budget taken from `GNUM_BUDGET`.
pub fn enumerate(sys: &PrimeSystem, x_max: f64) -> Result<Enumeration<'_>> {
    enumerate_with_budget(sys, x_max, budget_from_env())
}

pub fn enumerate_with_budget(sys: &PrimeSystem, x_max: f64, budget: u64) -> Result<Enumeration<'_>> {
    let d = sys.as_discrete()?;
    check_range(d, x_max)?;
    Ok(Enumeration {
        primes: d.primes(),
        x_max,
        heap: BinaryHeap::new(),
        ties: VecDeque::new(),
        started: false,
        emitted: 0,
        budget,
        failed: false,
    })
}

fn check_range(d: &DiscreteSystem, x: f64) -> Result<()> {
    if !(x >= 1.0) {
        return Err(GnumError::Domain(format!("x must be >= 1, got {x}")));
    }
    if x > d.complete_to() {
        return Err(GnumError::Domain(format!(
            "`{}` lists every prime only up to {}; cannot enumerate to {x}",
            d.label(),
            d.complete_to()
        )));
    }
    Ok(())
}

/// Folds `f` over all generalized integers `<= x_max`.
pub fn fold_integers<T>(
    sys: &PrimeSystem,
    x_max: f64,
    init: T,
    mut f: impl FnMut(T, &GeneralizedInteger) -> T,
) -> Result<T> {
    let mut acc = init;
    for g in enumerate(sys, x_max)? {
        acc = f(acc, &g?);
    }
    Ok(acc)
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum CountMethod {
    Exact,
    Grid { h: f64, u_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CountResult {
    pub value: f64,
    #[serde(flatten)]
    pub method: CountMethod,
}

/// `N(x)`: exact for discrete systems, from `exp*(dΠ)` on a grid otherwise.
pub fn n_count(sys: &PrimeSystem, x: f64, h: f64, u_max: f64) -> Result<CountResult> {
    if !(x >= 1.0) {
        return Err(GnumError::Domain(format!("x must be >= 1, got {x}")));
    }
    match sys {
        PrimeSystem::Discrete(_) => {
            let n = fold_integers(sys, x, 0u64, |n, _| n + 1)?;
            Ok(CountResult { value: n as f64, method: CountMethod::Exact })
        }
        PrimeSystem::Continuous(_) => {
            let u = x.ln();
            if u > u_max {
                return Err(GnumError::Domain(format!("log x = {u} exceeds the grid extent {u_max}")));
            }
            let dn = exp_conv(&sys.to_grid(h, u_max)?)?;
            Ok(CountResult { value: cumulative(&dn, u)?, method: CountMethod::Grid { h, u_max } })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::builtin;

    fn values(primes: &[f64], x: f64) -> Vec<f64> {
        let sys = PrimeSystem::discrete(primes).unwrap();
        enumerate(&sys, x).unwrap().map(|g| g.unwrap().value).collect()
    }

    #[test]
    fn two_three_up_to_ten() {
        assert_eq!(values(&[2.0, 3.0], 10.0), vec![1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 9.0]);
    }

    #[test]
    fn repeated_primes_are_distinct_generators() {
        let sys = PrimeSystem::discrete(&[2.0, 2.0]).unwrap();
        let all: Vec<_> = enumerate(&sys, 5.0).unwrap().map(|g| g.unwrap()).collect();
        let vals: Vec<f64> = all.iter().map(|g| g.value).collect();
        assert_eq!(vals, vec![1.0, 2.0, 2.0, 4.0, 4.0, 4.0]);
        // ties ordered by exponent list
        assert_eq!(all[1].exponents, vec![(0, 1)]);
        assert_eq!(all[2].exponents, vec![(1, 1)]);
        assert_eq!(all[3].exponents, vec![(0, 1), (1, 1)]);
        assert_eq!(all[4].exponents, vec![(0, 2)]);
        assert_eq!(all[5].exponents, vec![(1, 2)]);
    }

    #[test]
    fn x_one_gives_unit_only() {
        assert_eq!(values(&[2.0, 3.0], 1.0), vec![1.0]);
        assert_eq!(values(&[], 100.0), vec![1.0]);
    }

    #[test]
    fn brute_force_nested_loops() {
        let primes = [1.5, 2.2, 2.2, 7.0];
        let x: f64 = 1e4;
        let mut brute = Vec::new();
        let caps: Vec<u32> = primes.iter().map(|p: &f64| (x.ln() / p.ln()).floor() as u32).collect();
        for a in 0..=caps[0] {
            for b in 0..=caps[1] {
                for c in 0..=caps[2] {
                    for d in 0..=caps[3] {
                        let v = primes[0].powi(a as i32)
                            * primes[1].powi(b as i32)
                            * primes[2].powi(c as i32)
                            * primes[3].powi(d as i32);
                        if v <= x * (1.0 + 1e-12) {
                            brute.push(v);
                        }
                    }
                }
            }
        }
        let got = values(&primes, x * (1.0 + 1e-12));
        assert_eq!(got.len(), brute.len());
        assert!(got.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn budget_is_enforced() {
        let sys = PrimeSystem::discrete(&[2.0, 3.0]).unwrap();
        let out: Vec<_> = enumerate_with_budget(&sys, 1000.0, 5).unwrap().collect();
        assert_eq!(out.len(), 6);
        assert!(matches!(out[5], Err(GnumError::BudgetExceeded { budget: 5 })));
        let cont = builtin("ex42").unwrap();
        assert!(matches!(enumerate(&cont, 10.0), Err(GnumError::Unsupported(_))));
    }

    #[test]
    fn mu_and_lambda() {
        let one = GeneralizedInteger::one();
        assert_eq!((one.mu(), one.lambda(), one.omega()), (1, 1, 0));
        let g = GeneralizedInteger { exponents: vec![(0, 1), (1, 1)], value: 6.0 };
        assert_eq!(mu_of(&g), 1);
        let g = GeneralizedInteger { exponents: vec![(0, 2)], value: 4.0 };
        assert_eq!(mu_of(&g), 0);
        let g = GeneralizedInteger { exponents: vec![(0, 1)], value: 2.0 };
        assert_eq!((g.mu(), g.lambda()), (-1, -1));
        let g = GeneralizedInteger { exponents: vec![(0, 2), (1, 1)], value: 12.0 };
        assert_eq!(lambda_of(&g), -1);
        assert_eq!(g.exponent_string(), "0^2 1^1");
    }

    #[test]
    fn counts() {
        let sys = PrimeSystem::discrete(&[2.0, 3.0]).unwrap();
        assert_eq!(n_count(&sys, 10.0, 0.0, 0.0).unwrap().value, 7.0);
        let r = crate::systems::builtin_system("rational", &{
            let mut m = serde_json::Map::new();
            m.insert("limit".into(), 1000.into());
            m
        })
        .unwrap();
        assert_eq!(n_count(&r, 100.0, 0.0, 0.0).unwrap().value, 100.0);
        assert!(n_count(&r, 1e4, 0.0, 0.0).is_err());
        let pi0 = builtin("pi0").unwrap();
        let c = n_count(&pi0, 10f64.exp(), 1e-3, 10.0).unwrap();
        assert!((c.value / 10f64.exp() - 1.0).abs() < 0.01, "{}", c.value);
        assert!(matches!(c.method, CountMethod::Grid { .. }));
    }

    #[test]
    fn euler_product_partial_sums() {
        let sys = PrimeSystem::discrete(&[2.0, 3.0]).unwrap();
        let s = fold_integers(&sys, 1e8, 0.0, |acc, g| acc + g.value.powi(-2)).unwrap();
        assert!((s - 1.5).abs() < 1e-6);
    }
}
