//! Truncated Euler product for the asymptotic density `rho_G = prod_p Q_G(1/p)`
//! with a certified bound on the discarded tail.

mod sieve;

use thiserror::Error;

pub(crate) use sieve::small_primes;
pub use sieve::{primes_up_to, PrimeTable, MAX_SIEVE_BOUND};

use crate::graph::Graph;
use crate::polynomial::{compute_poly, GraphPolynomial, PolyError};

pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Rounding allowance charged per Euler factor.
pub const FLOAT_BUDGET_PER_FACTOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("prime bound {0} outside 2..={MAX_SIEVE_BOUND}")]
    SieveBound(u64),
    #[error("prime bound {prime_bound} is below the tail-bound validity threshold {required}")]
    TailBoundInvalid { prime_bound: u64, required: u128 },
    #[error("Euler factor at p = {p} is not positive ({value})")]
    NonPositiveFactor { p: u64, value: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Truncated Euler product with its error allowances.
///
/// The true density lies within `tail_bound + float_budget` of `value`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub value: f64,
    pub prime_bound: u64,
    pub tail_bound: f64,
    pub float_budget: f64,
    /// Number of Euler factors multiplied in.
    pub factors: usize,
    /// Canonical serialization of the graph the estimate belongs to.
    pub graph_id: String,
}

impl DensityEstimate {
    /// Interval certified to contain `rho_G`.
    pub fn interval(&self) -> (f64, f64) {
        let slack = self.tail_bound + self.float_budget;
        (self.value - slack, self.value + slack)
    }
}

/// Bound on `|rho_G - prod_{p <= P} Q_G(1/p)|`.
///
/// With `S = sum_{k >= 2} |c_k|` and `P >= 2S`, every `p > P` has
/// `|Q_G(1/p) - 1| <= S/p^2 <= 1/2`, so `|log(1 + u)| <= 2|u|` gives
/// `|log tail| <= 2S sum_{n > P} n^-2 <= 2S/P`. Each factor is at most 1, so the
/// tail lies in `[exp(-2S/P), 1]` and the truncated value (itself at most 1)
/// overshoots by at most `1 - exp(-2S/P) <= 2S/P`.
pub fn tail_bound(poly: &GraphPolynomial, prime_bound: u64) -> Result<f64, DensityError> {
    let weight = poly.non_constant_weight();
    let required = 2 * weight;
    if (prime_bound as u128) < required {
        return Err(DensityError::TailBoundInvalid {
            prime_bound,
            required,
        });
    }
    Ok(required as f64 / prime_bound as f64)
}

/// Density estimate with a freshly sieved prime table.
pub fn density(g: &Graph, prime_bound: u64) -> Result<DensityEstimate, DensityError> {
    if !(2..=MAX_SIEVE_BOUND).contains(&prime_bound) {
        return Err(DensityError::SieveBound(prime_bound));
    }
    let poly = compute_poly(g, true)?;
    if is_trivial(&poly) {
        return trivial(g, prime_bound);
    }
    let tail = tail_bound(&poly, prime_bound)?;
    let primes = primes_up_to(prime_bound)?;
    euler_product(g, &poly, &primes, tail)
}

/// Same as [`density`], reusing a table whose bound is the truncation point.
pub fn density_with_primes(
    g: &Graph,
    primes: &PrimeTable,
) -> Result<DensityEstimate, DensityError> {
    let poly = compute_poly(g, true)?;
    if is_trivial(&poly) {
        return trivial(g, primes.bound());
    }
    let tail = tail_bound(&poly, primes.bound())?;
    euler_product(g, &poly, primes, tail)
}

fn is_trivial(poly: &GraphPolynomial) -> bool {
    poly.non_constant_weight() == 0
}

fn trivial(g: &Graph, prime_bound: u64) -> Result<DensityEstimate, DensityError> {
    Ok(DensityEstimate {
        value: 1.0,
        prime_bound,
        tail_bound: 0.0,
        float_budget: 0.0,
        factors: 0,
        graph_id: g.canonical(),
    })
}

fn euler_product(
    g: &Graph,
    poly: &GraphPolynomial,
    primes: &PrimeTable,
    tail_bound: f64,
) -> Result<DensityEstimate, DensityError> {
    let mut log_sum = CompensatedSum::default();
    for p in primes.iter() {
        let u = poly.eval_minus_one(1.0 / p as f64);
        if u <= -1.0 {
            return Err(DensityError::NonPositiveFactor { p, value: 1.0 + u });
        }
        log_sum.add(u.ln_1p());
    }
    Ok(DensityEstimate {
        value: log_sum.total().exp(),
        prime_bound: primes.bound(),
        tail_bound,
        float_budget: FLOAT_BUDGET_PER_FACTOR * primes.len() as f64,
        factors: primes.len(),
        graph_id: g.canonical(),
    })
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    #[test]
    fn tail_bound_formula() {
        let k2 = compute_poly(&k(2), true).unwrap();
        let k3 = compute_poly(&k(3), true).unwrap();
        let empty = compute_poly(&Graph::edgeless(3).unwrap(), true).unwrap();
        assert_eq!(tail_bound(&k2, 1000).unwrap(), 0.002);
        assert_eq!(tail_bound(&k3, 1_000_000).unwrap(), 1e-5);
        assert_eq!(tail_bound(&empty, 2).unwrap(), 0.0);
        assert_eq!(
            tail_bound(&k3, 9),
            Err(DensityError::TailBoundInvalid {
                prime_bound: 9,
                required: 10
            })
        );
    }

    #[test]
    fn single_edge_is_inverse_zeta_two() {
        let est = density(&k(2), DEFAULT_PRIME_BOUND).unwrap();
        let expected = 6.0 / (PI * PI);
        assert!((est.value - expected).abs() < 1e-6);
        assert!(est.value >= expected);
        assert_eq!(est.factors, 78_498);
    }

    #[test]
    fn edgeless_is_exactly_one() {
        let est = density(&Graph::edgeless(3).unwrap(), 17).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.tail_bound, 0.0);
    }

    #[test]
    fn triangle_density() {
        let est = density(&k(3), DEFAULT_PRIME_BOUND).unwrap();
        assert!((est.value - 0.2867).abs() < 1e-4, "{}", est.value);
    }

    #[test]
    fn product_non_increasing_and_refines() {
        let g = Graph::path(4).unwrap();
        let mut previous: Option<DensityEstimate> = None;
        for bound in [100, 1000, 10_000, 100_000] {
            let est = density(&g, bound).unwrap();
            if let Some(prev) = previous {
                assert!(est.value <= prev.value);
                let (lo, hi) = prev.interval();
                assert!(lo <= est.value && est.value <= hi);
                assert!(est.tail_bound < prev.tail_bound);
            }
            previous = Some(est);
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let a = k(3);
        let b = Graph::star(4).unwrap();
        let both = a.disjoint_union(&b).unwrap();
        let (da, db, dboth) = (
            density(&a, 100_000).unwrap(),
            density(&b, 100_000).unwrap(),
            density(&both, 100_000).unwrap(),
        );
        assert!((da.value * db.value - dboth.value).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(matches!(
            density(&k(2), 1),
            Err(DensityError::SieveBound(1))
        ));
        assert!(matches!(
            density(&Graph::edgeless(2).unwrap(), 0),
            Err(DensityError::SieveBound(0))
        ));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!((s.total() - 1e-16).abs() < 1e-30);
    }
}
