//! Arithmetic functions attached to a graph through edge numberings.
//!
//! An edge numbering assigns `n_a >= 1` to every edge; vertex `r` then gets
//! `N_r = lcm(n_a : a incident to r)`. For an arithmetic function `f`,
//!
//! ```text
//! g_{f,G}(m) = sum over numberings with N_1 ... N_v = m of f(n_1) ... f(n_e)
//! ```
//!
//! With `f = mu` this is `f_G`, with `f = |mu|` it is `f_G^+`. These are
//! computed here by direct enumeration and, for `f_G`/`f_G^+`, by
//! multiplicativity from the coefficients of the graph polynomial.

use thiserror::Error;

use crate::density::small_primes;
use crate::graph::Graph;
use crate::polynomial::GraphPolynomial;

pub const MAX_FACTORIZABLE: u64 = 1_000_000_000_000;

/// Largest `candidates^e` accepted by the numbering enumeration.
pub const NUMBERING_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("{0} is outside the factorizable range 1..={MAX_FACTORIZABLE}")]
    OutOfRange(u64),
    #[error("enumerating {candidates}^{edges} edge numberings exceeds the cap of {NUMBERING_CAP}")]
    Infeasible { candidates: usize, edges: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("edge numbering has {got} values for {expected} edges")]
    NumberingLength { expected: usize, got: usize },
    #[error("edge numbers must be positive")]
    ZeroEdgeNumber,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `lcm(a, b)`, or `None` on overflow.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn product(&self) -> u64 {
        self.0.iter().map(|&(p, k)| p.pow(k)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, k)| k == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.0.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Every `n` with `n^2 | m`, ascending.
    pub fn square_divisor_roots(&self) -> Vec<u64> {
        self.divisors_with(|k| k / 2)
    }

    /// Every squarefree `n` with `n^2 | m`, ascending.
    pub fn squarefree_square_divisor_roots(&self) -> Vec<u64> {
        self.divisors_with(|k| (k >= 2) as u32)
    }

    fn divisors_with(&self, max_exponent: impl Fn(u32) -> u32) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, k) in &self.0 {
            let len = out.len();
            let mut power = 1;
            for _ in 0..max_exponent(k) {
                power *= p;
                let start = out.len();
                out.extend_from_within(..len);
                for d in &mut out[start..] {
                    *d *= power;
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Trial division by the primes up to 10^6.
pub fn factorize(m: u64) -> Result<Factorization, ArithmeticError> {
    if !(1..=MAX_FACTORIZABLE).contains(&m) {
        return Err(ArithmeticError::OutOfRange(m));
    }
    let mut rest = m;
    let mut factors = Vec::new();
    for p in small_primes().iter() {
        if p * p > rest {
            break;
        }
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if k > 0 {
            factors.push((p, k));
        }
    }
    // rest <= 10^12 has no prime factor below 10^6 left, so it is 1 or prime.
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization(factors))
}

pub fn mobius(n: u64) -> Result<i8, ArithmeticError> {
    Ok(factorize(n)?.mobius())
}

/// Edge values together with the induced vertex numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeNumbering {
    edge_values: Vec<u64>,
    vertex_numbers: Vec<u64>,
}

impl EdgeNumbering {
    /// `values[i]` numbers the `i`-th edge of `g.edges()`.
    pub fn new(g: &Graph, values: Vec<u64>) -> Result<Self, ArithmeticError> {
        if values.len() != g.edge_count() {
            return Err(ArithmeticError::NumberingLength {
                expected: g.edge_count(),
                got: values.len(),
            });
        }
        if values.contains(&0) {
            return Err(ArithmeticError::ZeroEdgeNumber);
        }
        let mut vertex_numbers = vec![1u64; g.vertex_count()];
        for (edge, &n) in g.edges().iter().zip(&values) {
            for r in [edge.r, edge.s] {
                vertex_numbers[r - 1] =
                    lcm(vertex_numbers[r - 1], n).ok_or(ArithmeticError::Overflow("lcm"))?;
            }
        }
        Ok(EdgeNumbering {
            edge_values: values,
            vertex_numbers,
        })
    }

    pub fn edge_values(&self) -> &[u64] {
        &self.edge_values
    }

    /// `N_1..N_v`.
    pub fn vertex_numbers(&self) -> &[u64] {
        &self.vertex_numbers
    }

    /// `N_1 ... N_v`, or `None` past `u128`.
    pub fn vertex_product(&self) -> Option<u128> {
        self.vertex_numbers
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
    }
}

/// `g_{f,G}(m)` by enumerating every numbering with `n_a^2 | m`.
pub fn numbering_sum(g: &Graph, m: u64, f: impl Fn(u64) -> i128) -> Result<i128, ArithmeticError> {
    let candidates = factorize(m)?.square_divisor_roots();
    enumerate(g, m, &candidates, &f)
}

/// `f_G(m)` (`signed`) or `f_G^+(m)` by enumerating edge numberings.
///
/// Only squarefree `n_a` with `n_a^2 | m` have nonzero weight, so only those are visited.
pub fn f_enumerate(g: &Graph, m: u64, signed: bool) -> Result<i128, ArithmeticError> {
    let candidates = factorize(m)?.squarefree_square_divisor_roots();
    let weight = |n: u64| -> i128 {
        let mu = mobius(n).expect("candidate divides m") as i128;
        if signed {
            mu
        } else {
            mu.abs()
        }
    };
    enumerate(g, m, &candidates, &weight)
}

fn enumerate(
    g: &Graph,
    m: u64,
    candidates: &[u64],
    f: &dyn Fn(u64) -> i128,
) -> Result<i128, ArithmeticError> {
    let edges = g.edge_count();
    let branches = (candidates.len() as u128)
        .checked_pow(edges as u32)
        .unwrap_or(u128::MAX);
    if branches > NUMBERING_CAP {
        return Err(ArithmeticError::Infeasible {
            candidates: candidates.len(),
            edges,
        });
    }
    let weights: Vec<i128> = candidates.iter().map(|&n| f(n)).collect();
    let mut search = NumberingSearch {
        g,
        m,
        candidates,
        weights: &weights,
        vertex_numbers: vec![1; g.vertex_count()],
    };
    search.run(0, 1)
}

struct NumberingSearch<'a> {
    g: &'a Graph,
    m: u64,
    candidates: &'a [u64],
    weights: &'a [i128],
    vertex_numbers: Vec<u64>,
}

impl NumberingSearch<'_> {
    fn run(&mut self, edge: usize, weight: i128) -> Result<i128, ArithmeticError> {
        if edge == self.g.edge_count() {
            let product = self
                .vertex_numbers
                .iter()
                .try_fold(1u64, |acc, &n| acc.checked_mul(n));
            return Ok(if product == Some(self.m) { weight } else { 0 });
        }
        let e = self.g.edges()[edge];
        let (r, s) = (e.r - 1, e.s - 1);
        let (saved_r, saved_s) = (self.vertex_numbers[r], self.vertex_numbers[s]);
        let mut total = 0i128;
        for (&n, &w) in self.candidates.iter().zip(self.weights) {
            if w == 0 {
                continue;
            }
            let (Some(nr), Some(ns)) = (lcm(saved_r, n), lcm(saved_s, n)) else {
                continue;
            };
            self.vertex_numbers[r] = nr;
            self.vertex_numbers[s] = ns;
            // Partial vertex numbers divide the final ones, so their product must divide m.
            if self.partial_product_divides_m() {
                let w = weight
                    .checked_mul(w)
                    .ok_or(ArithmeticError::Overflow("weight"))?;
                total = total
                    .checked_add(self.run(edge + 1, w)?)
                    .ok_or(ArithmeticError::Overflow("numbering sum"))?;
            }
        }
        self.vertex_numbers[r] = saved_r;
        self.vertex_numbers[s] = saved_s;
        Ok(total)
    }

    fn partial_product_divides_m(&self) -> bool {
        let mut rest = self.m;
        for &n in &self.vertex_numbers {
            if !rest.is_multiple_of(n) {
                return false;
            }
            rest /= n;
        }
        true
    }
}

/// `f(p^k)` for any prime `p`: the coefficient `c_k` of the matching polynomial.
pub fn f_prime_power(poly: &GraphPolynomial, k: usize) -> i128 {
    poly.coefficient(k)
}

/// `f(m)` as the product of `f(p^k)` over the prime powers exactly dividing `m`.
pub fn f_multiplicative(poly: &GraphPolynomial, m: u64) -> Result<i128, ArithmeticError> {
    factorize(m)?
        .factors()
        .iter()
        .try_fold(1i128, |acc, &(_, k)| {
            acc.checked_mul(f_prime_power(poly, k as usize))
        })
        .ok_or(ArithmeticError::Overflow("multiplicative product"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::compute_poly;

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    /// Numberings over all `1..=m`, weighted by a mobius computed from scratch.
    fn brute_f(g: &Graph, m: u64, signed: bool) -> i128 {
        fn mu(n: u64) -> i128 {
            let (mut n, mut sign, mut p) = (n, 1, 2);
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    sign = -sign;
                }
                p += 1;
            }
            if n > 1 {
                -sign
            } else {
                sign
            }
        }
        let e = g.edge_count();
        let mut values = vec![1u64; e];
        let mut total = 0;
        loop {
            let numbering = EdgeNumbering::new(g, values.clone()).unwrap();
            if numbering.vertex_product() == Some(m as u128) {
                let w: i128 = values.iter().map(|&n| mu(n)).product();
                total += if signed { w } else { w.abs() };
            }
            let Some(i) = values.iter().position(|&n| n < m) else {
                break;
            };
            values[i] += 1;
            values[..i].fill(1);
        }
        total
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1).unwrap().factors(), &[]);
        assert_eq!(factorize(36).unwrap().factors(), &[(2, 2), (3, 2)]);
        assert_eq!(factorize(999_983).unwrap().factors(), &[(999_983, 1)]);
        assert_eq!(
            factorize(999_983 * 1_000_003).unwrap().factors(),
            &[(999_983, 1), (1_000_003, 1)]
        );
        assert_eq!(factorize(1 << 39).unwrap().factors(), &[(2, 39)]);
        assert_eq!(factorize(0), Err(ArithmeticError::OutOfRange(0)));
        assert!(factorize(MAX_FACTORIZABLE + 1).is_err());
        for m in 1..2000u64 {
            assert_eq!(factorize(m).unwrap().product(), m);
        }
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (n, &mu) in (1..=10).zip(&expected) {
            assert_eq!(mobius(n).unwrap(), mu, "mu({n})");
        }
    }

    #[test]
    fn square_divisor_roots() {
        let f = factorize(360).unwrap(); // 2^3 3^2 5
        assert_eq!(f.square_divisor_roots(), vec![1, 2, 3, 6]);
        assert_eq!(factorize(16).unwrap().square_divisor_roots(), vec![1, 2, 4]);
        assert_eq!(
            factorize(16).unwrap().squarefree_square_divisor_roots(),
            vec![1, 2]
        );
        assert_eq!(
            factorize(30).unwrap().squarefree_square_divisor_roots(),
            vec![1]
        );
    }

    #[test]
    fn edge_numbering_vertex_numbers() {
        let g = Graph::new(4, &[(1, 2), (1, 3)]).unwrap();
        let n = EdgeNumbering::new(&g, vec![6, 10]).unwrap();
        assert_eq!(n.vertex_numbers(), &[30, 6, 10, 1]);
        for (edge, &value) in g.edges().iter().zip(n.edge_values()) {
            assert_eq!(n.vertex_numbers()[edge.r - 1] % value, 0);
            assert_eq!(n.vertex_numbers()[edge.s - 1] % value, 0);
        }
        assert_eq!(
            EdgeNumbering::new(&g, vec![1]),
            Err(ArithmeticError::NumberingLength {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            EdgeNumbering::new(&g, vec![1, 0]),
            Err(ArithmeticError::ZeroEdgeNumber)
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(f_enumerate(&k(2), 1, true).unwrap(), 1);
        assert_eq!(f_enumerate(&k(2), 4, true).unwrap(), -1);
        assert_eq!(f_enumerate(&k(2), 2, true).unwrap(), 0);
        assert_eq!(f_enumerate(&k(3), 4, false).unwrap(), 3);
    }

    #[test]
    fn enumeration_matches_unrestricted_brute_force() {
        for mask in [0u64, 1, 3, 7, 0b100001, 63] {
            let g = Graph::complete_subgraph(4, mask).unwrap();
            for m in 1..=16u64 {
                if m.pow(g.edge_count() as u32) > 300_000 {
                    continue;
                }
                for signed in [true, false] {
                    assert_eq!(
                        f_enumerate(&g, m, signed).unwrap(),
                        brute_f(&g, m, signed),
                        "mask {mask} m {m} signed {signed}"
                    );
                }
            }
        }
    }

    #[test]
    fn numbering_sum_with_mobius_is_f() {
        let g = Graph::path(3).unwrap();
        for m in 1..=100 {
            let generic = numbering_sum(&g, m, |n| mobius(n).unwrap() as i128).unwrap();
            assert_eq!(generic, f_enumerate(&g, m, true).unwrap());
        }
    }

    #[test]
    fn numbering_sum_multiplicative_for_identity_weight() {
        let g = k(3);
        let id = |n: u64| n as i128;
        for (a, b) in [(4u64, 9u64), (8, 27), (16, 25), (4, 49)] {
            let ab = numbering_sum(&g, a * b, id).unwrap();
            assert_eq!(
                ab,
                numbering_sum(&g, a, id).unwrap() * numbering_sum(&g, b, id).unwrap()
            );
        }
    }

    #[test]
    fn prime_power_lookup() {
        let k3 = compute_poly(&k(3), true).unwrap();
        let k2 = compute_poly(&k(2), true).unwrap();
        assert_eq!(f_prime_power(&k3, 2), -3);
        assert_eq!(f_prime_power(&k3, 0), 1);
        assert_eq!(f_prime_power(&k2, 1), 0);
        assert_eq!(f_prime_power(&k2, 7), 0);
    }

    #[test]
    fn multiplicative_path() {
        let k3 = compute_poly(&k(3), true).unwrap();
        let k2 = compute_poly(&k(2), true).unwrap();
        assert_eq!(f_multiplicative(&k3, 36).unwrap(), 9);
        assert_eq!(f_enumerate(&k(3), 36, true).unwrap(), 9);
        assert_eq!(f_multiplicative(&k3, 1).unwrap(), 1);
        assert_eq!(f_multiplicative(&k2, 30).unwrap(), 0);
    }

    #[test]
    fn vanishing() {
        for mask in 0..64 {
            let g = Graph::complete_subgraph(4, mask).unwrap();
            for p in [2u64, 3, 5, 7] {
                assert_eq!(f_enumerate(&g, p, true).unwrap(), 0);
                assert_eq!(f_enumerate(&g, p, false).unwrap(), 0);
            }
            assert_eq!(f_enumerate(&g, 32, false).unwrap(), 0);
            assert_eq!(f_enumerate(&g, 243, true).unwrap(), 0);
        }
    }

    #[test]
    fn infeasible_enumeration() {
        let g = k(8);
        // 2*3*5*7 squared: 16 candidates, 28 edges.
        let m = 44_100;
        assert_eq!(
            f_enumerate(&g, m, true),
            Err(ArithmeticError::Infeasible {
                candidates: 16,
                edges: 28
            })
        );
    }

    #[test]
    fn lcm_overflow_detected() {
        assert_eq!(lcm(6, 10), Some(30));
        assert_eq!(lcm(u64::MAX, 2), None);
        assert_eq!(gcd(0, 7), 7);
    }
}
