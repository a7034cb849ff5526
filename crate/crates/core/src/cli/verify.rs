//! Consistency suites behind `coprimality verify`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::counting::{count_bruteforce_threads, count_moebius_threads, error_table};
use crate::density::{density, density_with_primes, primes_up_to};
use crate::graph::Graph;
use crate::multiplicative::{f_enumerate, gcd};
use crate::polynomial::compute_poly;
use crate::Error;

/// Largest ratio `|g(x) - rho x^v| / (x^(v-1) ln(x)^d)` accepted at any sample.
pub const RATIO_LIMIT: f64 = 10.0;
/// The ratio at the largest sample may be at most this multiple of the ratio at x = 100.
pub const RATIO_GROWTH_LIMIT: f64 = 2.0;
/// Agreement required between the single-edge density and `6 / pi^2`.
pub const ZETA_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_vertices: usize,
    pub max_x: u64,
    pub prime_bound: u64,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_vertices: 4,
            max_x: 40,
            prime_bound: 1_000_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub max_vertices: usize,
    pub max_x: u64,
    pub prime_bound: u64,
    pub graphs: usize,
    pub suites: Vec<SuiteReport>,
    pub status: &'static str,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(describe);
        }
    }

    fn finish(self, name: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            cases: self.cases,
            failures: self.failures,
            status: if self.failures == 0 { "PASS" } else { "FAIL" },
            first_failure: self.first_failure,
        }
    }
}

/// Every graph on `n` vertices, one per edge subset of `K_n`.
fn all_graphs(n: usize) -> Result<Vec<Graph>, Error> {
    let edges = n * (n - 1) / 2;
    (0..1u64 << edges)
        .map(|mask| Graph::complete_subgraph(n, mask).map_err(Error::from))
        .collect()
}

pub fn verify(options: &VerifyOptions) -> Result<VerifyReport, Error> {
    let graphs = all_graphs(options.max_vertices)?;
    let suites = vec![
        oracle_equivalence(&graphs, options)?,
        prime_power_coefficients(&graphs)?,
        multiplicativity(&graphs)?,
        coefficient_invariants(&graphs)?,
        single_edge_density(options)?,
        error_ratio(options)?,
    ];
    let mut report = VerifyReport {
        max_vertices: options.max_vertices,
        max_x: options.max_x,
        prime_bound: options.prime_bound,
        graphs: graphs.len(),
        suites,
        status: "PASS",
    };
    if !report.passed() {
        report.status = "FAIL";
    }
    Ok(report)
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|e| format!("{}-{}", e.r, e.s))
        .collect();
    format!("v={} edges=[{}]", g.vertex_count(), edges.join(","))
}

fn oracle_equivalence(graphs: &[Graph], options: &VerifyOptions) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    for g in graphs {
        let mut previous = 0;
        for x in 1..=options.max_x {
            let brute = count_bruteforce_threads(g, x, options.threads)?.count;
            let moebius = count_moebius_threads(g, x, options.threads)?.count;
            let bound = (x as u128).pow(g.vertex_count() as u32);
            let ok =
                brute == moebius && brute <= bound && brute >= previous && (x > 1 || brute == 1);
            tally.check(ok, || {
                format!(
                    "{} x={x}: bruteforce {brute}, moebius {moebius}",
                    describe(g)
                )
            });
            previous = brute;
        }
    }
    Ok(tally.finish("oracle_equivalence"))
}

fn prime_power_coefficients(graphs: &[Graph]) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    for g in graphs {
        for signed in [true, false] {
            let poly = compute_poly(g, signed)?;
            for p in [2u64, 3, 5] {
                for k in 0..=g.vertex_count() as u32 {
                    let value = f_enumerate(g, p.pow(k), signed)?;
                    let c = poly.coefficient(k as usize);
                    tally.check(value == c, || {
                        format!(
                            "{} signed={signed} f({p}^{k})={value} c_{k}={c}",
                            describe(g)
                        )
                    });
                }
            }
        }
    }
    Ok(tally.finish("prime_power_coefficients"))
}

/// Coprime pairs `1 < a < b` with `a * b <= limit`.
pub fn coprime_pairs(limit: u64) -> Vec<(u64, u64)> {
    (2..=limit)
        .flat_map(|a| (a + 1..=limit / a).map(move |b| (a, b)))
        .filter(|&(a, b)| gcd(a, b) == 1)
        .collect()
}

fn multiplicativity(graphs: &[Graph]) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    let pairs = coprime_pairs(60);
    for g in graphs {
        for signed in [true, false] {
            for &(a, b) in &pairs {
                let ab = f_enumerate(g, a * b, signed)?;
                let fa = f_enumerate(g, a, signed)?;
                let fb = f_enumerate(g, b, signed)?;
                tally.check(ab == fa * fb, || {
                    format!(
                        "{} signed={signed} f({a}*{b})={ab} != {fa}*{fb}",
                        describe(g)
                    )
                });
            }
        }
    }
    Ok(tally.finish("multiplicativity"))
}

fn coefficient_invariants(graphs: &[Graph]) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    for g in graphs {
        let e = g.edge_count() as i128;
        let signed = compute_poly(g, true)?;
        let unsigned = compute_poly(g, false)?;
        let ok = signed.coefficient(0) == 1
            && unsigned.coefficient(0) == 1
            && signed.coefficient(1) == 0
            && unsigned.coefficient(1) == 0
            && signed.coefficient(2) == -e
            && unsigned.coefficient(2) == e
            && (e == 0 || signed.value_at_one() == 0)
            && unsigned.value_at_one() == 1 << e;
        tally.check(ok, || describe(g));
    }
    Ok(tally.finish("coefficient_invariants"))
}

fn single_edge_density(options: &VerifyOptions) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    let est = density(&Graph::complete(2)?, options.prime_bound)?;
    let target = 6.0 / (PI * PI);
    let diff = (est.value - target).abs();
    tally.check(diff <= est.tail_bound + est.float_budget, || {
        format!(
            "|{} - 6/pi^2| = {diff:e} outside certified interval",
            est.value
        )
    });
    if options.prime_bound >= 1_000_000 {
        tally.check(diff <= ZETA_TOLERANCE, || {
            format!("|{} - 6/pi^2| = {diff:e}", est.value)
        });
    }
    Ok(tally.finish("single_edge_density"))
}

/// Named graph with the `x` values at which its error ratio is sampled.
pub type RatioSample = (&'static str, Graph, Vec<u64>);

/// Graphs and sample points of the error-ratio check.
pub fn ratio_samples() -> Result<Vec<RatioSample>, Error> {
    Ok(vec![
        ("K2", Graph::complete(2)?, vec![10, 100, 1000, 10_000]),
        ("P3", Graph::path(3)?, vec![10, 100, 1000]),
        ("S4", Graph::star(4)?, vec![10, 100, 1000]),
        ("K3", Graph::complete(3)?, vec![10, 100, 1000]),
    ])
}

/// Whether a ratio series (ascending x, containing x = 100) stays bounded.
pub fn ratios_bounded(xs: &[u64], ratios: &[f64]) -> bool {
    let at_100 = xs.iter().position(|&x| x == 100).map(|i| ratios[i]);
    let last = ratios.last().copied();
    ratios.iter().all(|r| r.is_finite() && *r <= RATIO_LIMIT)
        && match (at_100, last) {
            (Some(base), Some(last)) => last <= RATIO_GROWTH_LIMIT * base,
            _ => true,
        }
}

fn error_ratio(options: &VerifyOptions) -> Result<SuiteReport, Error> {
    let mut tally = Tally::default();
    let primes = primes_up_to(options.prime_bound)?;
    for (name, g, xs) in ratio_samples()? {
        let est = density_with_primes(&g, &primes)?;
        let rows = error_table(&g, &xs, &est, options.threads)?;
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        tally.check(ratios_bounded(&xs, &ratios), || {
            let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
            format!("{name}: ratios {}", shown.join(", "))
        });
    }
    Ok(tally.finish("error_ratio"))
}
