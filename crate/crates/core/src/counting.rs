//! Exact counts of `G(x)`, the tuples `(a_1..a_v)` in `[1, x]^v` with
//! `gcd(a_r, a_s) = 1` on every edge, and the error of the asymptotic main term.
//!
//! Two independent counters:
//! - brute force: depth-first tuple extension with gcd checks against assigned neighbours;
//! - Mobius: `g(x) = sum over squarefree n_a <= x of mu(n_1)...mu(n_e) prod_r floor(x / N_r)`.
//!
//! Both split their outermost loop across threads; partial sums are exact
//! integers, so the result does not depend on the thread count.

use std::fmt;
use std::thread;

use thiserror::Error;

use crate::density::{primes_up_to, DensityEstimate};
use crate::graph::Graph;
use crate::multiplicative::{gcd, lcm};

/// Largest `x^v` the brute-force counter accepts.
pub const BRUTEFORCE_CAP: u128 = 1_000_000_000;
/// Largest number of search nodes the Mobius counter visits.
pub const MOEBIUS_BRANCH_CAP: u64 = 1 << 28;
/// Coprimality lookups are tabulated up to this `x`.
const GCD_TABLE_LIMIT: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("brute force over {x}^{v} tuples exceeds the cap of {BRUTEFORCE_CAP}")]
    BruteForceCap { x: u64, v: usize },
    #[error("Mobius enumeration exceeded {MOEBIUS_BRANCH_CAP} branches")]
    BranchCap,
    #[error("count overflowed 128-bit arithmetic")]
    Overflow,
    #[error("x must be at least 1")]
    ZeroX,
    #[error("error diagnostic needs x >= 3, got {0}")]
    XTooSmall(u64),
    #[error("density estimate belongs to a different graph")]
    GraphMismatch,
    #[error("no exact counter is feasible at x = {x}: {bruteforce}; {moebius}")]
    NoFeasibleCounter {
        x: u64,
        bruteforce: Box<CountError>,
        moebius: Box<CountError>,
    },
    #[error("counting methods disagree at x = {x}: bruteforce {bruteforce}, moebius {moebius}")]
    MethodsDisagree {
        x: u64,
        bruteforce: u128,
        moebius: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bruteforce,
    Moebius,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bruteforce => "bruteforce",
            Method::Moebius => "moebius",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub x: u64,
    pub count: u128,
    pub method: Method,
    pub graph_id: String,
}

/// Observed error of the main term at one `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDiagnostic {
    pub x: u64,
    pub g: u128,
    pub main_term: f64,
    pub abs_error: f64,
    /// `abs_error / (x^(v-1) ln(x)^d)`; the log factor is dropped when `d = 0`.
    pub ratio: f64,
    pub method: Method,
}

/// Brute force, single-threaded.
pub fn count_bruteforce(g: &Graph, x: u64) -> Result<CountResult, CountError> {
    count_bruteforce_threads(g, x, 1)
}

/// Mobius sum, single-threaded.
pub fn count_moebius(g: &Graph, x: u64) -> Result<CountResult, CountError> {
    count_moebius_threads(g, x, 1)
}

pub fn count(g: &Graph, x: u64, method: Method, threads: usize) -> Result<CountResult, CountError> {
    match method {
        Method::Bruteforce => count_bruteforce_threads(g, x, threads),
        Method::Moebius => count_moebius_threads(g, x, threads),
    }
}

/// Runs both counters and fails unless they agree.
pub fn count_both(g: &Graph, x: u64, threads: usize) -> Result<CountResult, CountError> {
    let brute = count_bruteforce_threads(g, x, threads)?;
    let moebius = count_moebius_threads(g, x, threads)?;
    if brute.count != moebius.count {
        return Err(CountError::MethodsDisagree {
            x,
            bruteforce: brute.count,
            moebius: moebius.count,
        });
    }
    Ok(moebius)
}

/// Sums `work(i)` for `i` in `0..len`, striding indices over `threads` workers.
fn strided_sum<T, F>(len: usize, threads: usize, work: F) -> Result<T, CountError>
where
    T: Send + Default + std::ops::Add<Output = T> + Copy,
    F: Fn(usize) -> Result<T, CountError> + Sync,
{
    let threads = threads.clamp(1, len.max(1));
    let chunk = |t: usize| -> Result<T, CountError> {
        (t..len)
            .step_by(threads)
            .try_fold(T::default(), |acc, i| Ok(acc + work(i)?))
    };
    if threads == 1 {
        return chunk(0);
    }
    let partials: Vec<Result<T, CountError>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| scope.spawn(move || chunk(t)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("counting worker panicked"))
            .collect()
    });
    partials
        .into_iter()
        .try_fold(T::default(), |acc, part| Ok(acc + part?))
}

struct Coprimality {
    x: u64,
    table: Option<Vec<bool>>,
}

impl Coprimality {
    fn new(x: u64) -> Self {
        let table = (x <= GCD_TABLE_LIMIT).then(|| {
            let n = (x + 1) as usize;
            let mut t = vec![false; n * n];
            for a in 1..n {
                for b in 1..n {
                    t[a * n + b] = gcd(a as u64, b as u64) == 1;
                }
            }
            t
        });
        Coprimality { x, table }
    }

    #[inline]
    fn coprime(&self, a: u64, b: u64) -> bool {
        match &self.table {
            Some(t) => t[(a * (self.x + 1) + b) as usize],
            None => gcd(a, b) == 1,
        }
    }
}

pub fn count_bruteforce_threads(
    g: &Graph,
    x: u64,
    threads: usize,
) -> Result<CountResult, CountError> {
    if x == 0 {
        return Err(CountError::ZeroX);
    }
    let v = g.vertex_count();
    let tuples = (x as u128).checked_pow(v as u32);
    if tuples.is_none_or(|t| t > BRUTEFORCE_CAP) {
        return Err(CountError::BruteForceCap { x, v });
    }

    // Earlier-assigned neighbours of each vertex, 0-based.
    let earlier: Vec<Vec<usize>> = (0..v)
        .map(|r| {
            let mask = g.neighbour_mask(r + 1);
            (0..r).filter(|&s| mask >> s & 1 == 1).collect()
        })
        .collect();
    let coprime = Coprimality::new(x);

    let count = strided_sum(x as usize, threads, |i| {
        let mut tuple = vec![0u64; v];
        tuple[0] = i as u64 + 1;
        Ok(extend_tuple(&mut tuple, 1, x, &earlier, &coprime))
    })?;
    Ok(CountResult {
        x,
        count,
        method: Method::Bruteforce,
        graph_id: g.canonical(),
    })
}

fn extend_tuple(
    tuple: &mut [u64],
    depth: usize,
    x: u64,
    earlier: &[Vec<usize>],
    coprime: &Coprimality,
) -> u128 {
    if depth == tuple.len() {
        return 1;
    }
    let neighbours = &earlier[depth];
    let last = depth + 1 == tuple.len();
    let mut total = 0u128;
    for a in 1..=x {
        if neighbours.iter().all(|&s| coprime.coprime(tuple[s], a)) {
            if last {
                total += 1;
            } else {
                tuple[depth] = a;
                total += extend_tuple(tuple, depth + 1, x, earlier, coprime);
            }
        }
    }
    total
}

/// `mu(n)` for `0 <= n <= x`, with `mu(0) = 0`.
fn mobius_table(x: u64) -> Vec<i8> {
    let n = x as usize;
    let mut mu = vec![1i8; n + 1];
    mu[0] = 0;
    if x < 2 {
        return mu;
    }
    let primes = primes_up_to(x).expect("2 <= x <= sieve limit");
    for p in primes.iter() {
        let p = p as usize;
        for k in (p..=n).step_by(p) {
            mu[k] = -mu[k];
        }
        if let Some(sq) = p.checked_mul(p) {
            for k in (sq..=n).step_by(sq) {
                mu[k] = 0;
            }
        }
    }
    mu
}

pub fn count_moebius_threads(g: &Graph, x: u64, threads: usize) -> Result<CountResult, CountError> {
    moebius_with_cap(g, x, threads, MOEBIUS_BRANCH_CAP)
}

fn moebius_with_cap(
    g: &Graph,
    x: u64,
    threads: usize,
    cap: u64,
) -> Result<CountResult, CountError> {
    if x == 0 {
        return Err(CountError::ZeroX);
    }
    if x > crate::density::MAX_SIEVE_BOUND {
        return Err(CountError::BranchCap);
    }
    let mu = mobius_table(x);
    let squarefree: Vec<(u64, i8)> = (1..=x)
        .filter(|&n| mu[n as usize] != 0)
        .map(|n| (n, mu[n as usize]))
        .collect();
    let search = MoebiusSearch {
        g,
        x,
        squarefree: &squarefree,
        cap,
    };

    let count: i128 = if g.edge_count() == 0 {
        search.floor_product(&vec![1; g.vertex_count()])?
    } else {
        let budget = std::sync::atomic::AtomicU64::new(0);
        strided_sum(squarefree.len(), threads, |i| {
            let mut vertex_numbers = vec![1u64; g.vertex_count()];
            search.branch(0, i, 1, &mut vertex_numbers, &budget)
        })?
    };
    let count = u128::try_from(count).map_err(|_| CountError::Overflow)?;
    Ok(CountResult {
        x,
        count,
        method: Method::Moebius,
        graph_id: g.canonical(),
    })
}

struct MoebiusSearch<'a> {
    g: &'a Graph,
    x: u64,
    squarefree: &'a [(u64, i8)],
    cap: u64,
}

impl MoebiusSearch<'_> {
    fn floor_product(&self, vertex_numbers: &[u64]) -> Result<i128, CountError> {
        vertex_numbers.iter().try_fold(1i128, |acc, &n| {
            acc.checked_mul((self.x / n) as i128)
                .ok_or(CountError::Overflow)
        })
    }

    /// Assigns `squarefree[choice]` to edge `edge` and sums over all completions.
    fn branch(
        &self,
        edge: usize,
        choice: usize,
        sign: i8,
        vertex_numbers: &mut [u64],
        budget: &std::sync::atomic::AtomicU64,
    ) -> Result<i128, CountError> {
        let (n, mu) = self.squarefree[choice];
        let e = self.g.edges()[edge];
        let (r, s) = (e.r - 1, e.s - 1);
        let (saved_r, saved_s) = (vertex_numbers[r], vertex_numbers[s]);
        let nr = lcm(saved_r, n).filter(|&v| v <= self.x);
        let ns = lcm(saved_s, n).filter(|&v| v <= self.x);
        let (Some(nr), Some(ns)) = (nr, ns) else {
            return Ok(0);
        };
        let visited = budget.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        if visited >= self.cap {
            return Err(CountError::BranchCap);
        }
        vertex_numbers[r] = nr;
        vertex_numbers[s] = ns;
        let sign = sign * mu;
        let result = if edge + 1 == self.g.edge_count() {
            self.floor_product(vertex_numbers).map(|p| sign as i128 * p)
        } else {
            (0..self.squarefree.len()).try_fold(0i128, |acc, next| {
                let term = self.branch(edge + 1, next, sign, vertex_numbers, budget)?;
                acc.checked_add(term).ok_or(CountError::Overflow)
            })
        };
        vertex_numbers[r] = saved_r;
        vertex_numbers[s] = saved_s;
        result
    }
}

fn check_graph(g: &Graph, density: &DensityEstimate) -> Result<(), CountError> {
    if density.graph_id != g.canonical() {
        return Err(CountError::GraphMismatch);
    }
    Ok(())
}

/// `rho * x^v` using the estimated density.
pub fn main_term(g: &Graph, x: u64, density: &DensityEstimate) -> Result<f64, CountError> {
    check_graph(g, density)?;
    Ok(density.value * (x as f64).powi(g.vertex_count() as i32))
}

/// Exact count with whichever counter looks cheaper, falling back to the other.
pub fn count_auto(g: &Graph, x: u64, threads: usize) -> Result<CountResult, CountError> {
    let v = g.vertex_count() as u32;
    let e = g.edge_count() as u32;
    let brute_cost = (x as f64).powi(v as i32);
    // About 6/pi^2 of the integers up to x are squarefree.
    let moebius_cost = (0.61 * x as f64).max(1.0).powi(e as i32);
    let order = if moebius_cost <= brute_cost {
        [Method::Moebius, Method::Bruteforce]
    } else {
        [Method::Bruteforce, Method::Moebius]
    };
    let first = match count(g, x, order[0], threads) {
        Ok(result) => return Ok(result),
        Err(err @ (CountError::BruteForceCap { .. } | CountError::BranchCap)) => err,
        Err(err) => return Err(err),
    };
    count(g, x, order[1], threads).map_err(|second| {
        let (bruteforce, moebius) = match order[0] {
            Method::Bruteforce => (first, second),
            Method::Moebius => (second, first),
        };
        CountError::NoFeasibleCounter {
            x,
            bruteforce: Box::new(bruteforce),
            moebius: Box::new(moebius),
        }
    })
}

pub fn error_diagnostic(
    g: &Graph,
    x: u64,
    density: &DensityEstimate,
    threads: usize,
) -> Result<ErrorDiagnostic, CountError> {
    check_graph(g, density)?;
    if x < 3 {
        return Err(CountError::XTooSmall(x));
    }
    let exact = count_auto(g, x, threads)?;
    Ok(diagnose(g, &exact, density))
}

fn diagnose(g: &Graph, exact: &CountResult, density: &DensityEstimate) -> ErrorDiagnostic {
    let x = exact.x as f64;
    let main_term = density.value * x.powi(g.vertex_count() as i32);
    let abs_error = (exact.count as f64 - main_term).abs();
    let d = g.max_degree() as i32;
    let scale = x.powi(g.vertex_count() as i32 - 1) * if d == 0 { 1.0 } else { x.ln().powi(d) };
    ErrorDiagnostic {
        x: exact.x,
        g: exact.count,
        main_term,
        abs_error,
        ratio: abs_error / scale,
        method: exact.method,
    }
}

/// One diagnostic per `x`, in the given order.
pub fn error_table(
    g: &Graph,
    xs: &[u64],
    density: &DensityEstimate,
    threads: usize,
) -> Result<Vec<ErrorDiagnostic>, CountError> {
    xs.iter()
        .map(|&x| error_diagnostic(g, x, density, threads))
        .collect()
}
