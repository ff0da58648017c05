//! Feasible parameter sets for D-optimal supplementary difference sets.
//!
//! A parameter set `(v; k_1, …, k_t; λ)` must satisfy
//! `λ(v − 1) = Σ k_i(k_i − 1)`; its derived parameter is `n = Σ k_i − λ`.
//! The D-optimal flavour has `t = 2`, `v = 2n + 1` and is normalized as
//! `v/2 ≥ r ≥ s ≥ 0`.
//!
//! Every normalized D-optimal parameter set comes from exactly one pair of
//! integers `x ≥ y ≥ 0` via
//!
//! ```text
//! v = 1 + x(x+1) + y(y+1)
//! r = C(x+1, 2) + C(y, 2)
//! s = C(x, 2)   + C(y+1, 2)
//! λ = C(x, 2)   + C(y, 2)
//! ```
//!
//! which makes enumeration trivial.

use std::fmt;

use crate::error::{Error, Result};

/// `(v; k_1, …, k_t; λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterSet {
    v: u32,
    block_sizes: Vec<u32>,
    lambda: u32,
}

impl ParameterSet {
    pub fn new(v: u32, block_sizes: Vec<u32>, lambda: u32) -> Self {
        ParameterSet {
            v,
            block_sizes,
            lambda,
        }
    }

    /// Two-block parameter set `(v; r, s; λ)`.
    pub fn pair(v: u32, r: u32, s: u32, lambda: u32) -> Self {
        ParameterSet::new(v, vec![r, s], lambda)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn block_sizes(&self) -> &[u32] {
        &self.block_sizes
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// Number of base blocks.
    pub fn t(&self) -> usize {
        self.block_sizes.len()
    }

    /// `Σ k_i − λ`. May be negative for nonsense input.
    pub fn n(&self) -> i64 {
        self.block_sizes.iter().map(|&k| k as i64).sum::<i64>() - self.lambda as i64
    }

    /// First block size; zero when there are no blocks.
    pub fn r(&self) -> u32 {
        self.block_sizes.first().copied().unwrap_or(0)
    }

    /// Second block size; zero when there are fewer than two blocks.
    pub fn s(&self) -> u32 {
        self.block_sizes.get(1).copied().unwrap_or(0)
    }

    /// `λ(v − 1) = Σ k_i(k_i − 1)`.
    pub fn satisfies_lambda_equation(&self) -> bool {
        let lhs = self.lambda as i64 * (self.v as i64 - 1);
        let rhs: i64 = self
            .block_sizes
            .iter()
            .map(|&k| k as i64 * (k as i64 - 1))
            .sum();
        lhs == rhs
    }

    /// Normalized feasible D-optimal: `t = 2`, the λ equation holds,
    /// `v = 2n + 1` and `v/2 ≥ r ≥ s`.
    pub fn is_doptimal(&self) -> bool {
        self.t() == 2
            && self.satisfies_lambda_equation()
            && self.v as i64 == 2 * self.n() + 1
            && 2 * self.r() <= self.v
            && self.r() >= self.s()
    }

    pub(crate) fn require_doptimal(&self) -> Result<()> {
        if self.is_doptimal() {
            Ok(())
        } else {
            Err(Error::NotFeasible(self.to_string()))
        }
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.v)?;
        for (i, k) in self.block_sizes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ";{})", self.lambda)
    }
}

/// An ordered pair `x ≥ y ≥ 0` indexing a D-optimal parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairXY {
    x: u32,
    y: u32,
}

impl PairXY {
    pub fn new(x: i64, y: i64) -> Result<Self> {
        if y < 0 || x < y || x > u32::MAX as i64 {
            return Err(Error::InvalidPair { x, y });
        }
        Ok(PairXY {
            x: x as u32,
            y: y as u32,
        })
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn y(&self) -> u32 {
        self.y
    }
}

fn choose2(n: u32) -> u32 {
    n * n.saturating_sub(1) / 2
}

pub fn pair_to_params(p: PairXY) -> ParameterSet {
    let (x, y) = (p.x, p.y);
    ParameterSet::pair(
        1 + x * (x + 1) + y * (y + 1),
        choose2(x + 1) + choose2(y),
        choose2(x) + choose2(y + 1),
        choose2(x) + choose2(y),
    )
}

/// Inverse of [`pair_to_params`], by enumerating `x(x+1) + y(y+1) = v − 1`.
pub fn params_to_pair(q: &ParameterSet) -> Result<PairXY> {
    let not_feasible = || Error::NotFeasible(q.to_string());
    if q.t() != 2 || q.v() == 0 {
        return Err(not_feasible());
    }
    let target = q.v() as u64 - 1;
    let mut x = 0u64;
    while x * (x + 1) <= target {
        if let Some(y) = pronic_root(target - x * (x + 1)) {
            if y <= x {
                let p = PairXY {
                    x: x as u32,
                    y: y as u32,
                };
                if pair_to_params(p) == *q {
                    return Ok(p);
                }
            }
        }
        x += 1;
    }
    Err(not_feasible())
}

/// `y` with `y(y+1) = value`, if one exists.
fn pronic_root(value: u64) -> Option<u64> {
    let mut y = ((value as f64).sqrt() as u64).saturating_sub(1);
    while y * (y + 1) < value {
        y += 1;
    }
    (y * (y + 1) == value).then_some(y)
}

/// All normalized D-optimal parameter sets with `3 ≤ v ≤ v_max`, sorted by
/// `(v, r)`. The degenerate set `(1;0,0;0)` from `x = y = 0` is left out.
pub fn enumerate_params(v_max: u32) -> Vec<ParameterSet> {
    let mut out = Vec::new();
    let mut x = 1u32;
    while x * (x + 1) < v_max {
        for y in 0..=x {
            let q = pair_to_params(PairXY { x, y });
            if q.v() > v_max {
                break;
            }
            out.push(q);
        }
        x += 1;
    }
    out.sort_by_key(|q| (q.v(), q.r()));
    out
}

/// Whether `2v − 1` is a sum of two squares. On success returns `(a, b)` with
/// `a ≥ b ≥ 0` and `a² + b² = 2v − 1`, taking the largest such `a`.
pub fn is_feasible_order(v: u32) -> Result<Option<(u64, u64)>> {
    if v.is_multiple_of(2) {
        return Err(Error::EvenOrder(v));
    }
    Ok(two_squares(2 * v as u64 - 1))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn two_squares(n: u64) -> Option<(u64, u64)> {
    let mut a = isqrt(n);
    loop {
        let rest = n - a * a;
        let b = isqrt(rest);
        if b > a {
            return None;
        }
        if b * b == rest {
            return Some((a, b));
        }
        if a == 0 {
            return None;
        }
        a -= 1;
    }
}

/// Odd `v` in `3..=v_max` for which `2v − 1` is not a sum of two squares.
pub fn infeasible_orders(v_max: u32) -> Vec<u32> {
    (3..=v_max)
        .step_by(2)
        .filter(|&v| two_squares(2 * v as u64 - 1).is_none())
        .collect()
}
