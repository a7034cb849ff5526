//! Counting integer tuples whose coordinates are pairwise coprime along the
//! edges of a graph, together with the density `rho_G` those counts approach.
//!
//! - [`graph`]: the constraint graph and its text format.
//! - [`polynomial`]: the graph polynomials `Q_G` and `Q_G^+`.
//! - [`multiplicative`]: edge-numbering sums `f_G`, `f_G^+`, factorization.
//! - [`density`]: the Euler product `prod_p Q_G(1/p)` with a certified tail.
//! - [`counting`]: exact counters and the main-term error diagnostic.
//! - [`cli`]: the `coprimality` command-line tool.

pub mod cli;
pub mod counting;
pub mod density;
pub mod graph;
pub mod multiplicative;
pub mod polynomial;

mod format;

pub use counting::{
    count_bruteforce, count_moebius, error_diagnostic, main_term, CountError, CountResult,
    ErrorDiagnostic, Method,
};
pub use density::{density, primes_up_to, tail_bound, DensityError, DensityEstimate, PrimeTable};
pub use graph::{max_degree, parse_graph, Edge, Graph, GraphError};
pub use multiplicative::{
    f_enumerate, f_multiplicative, f_prime_power, factorize, ArithmeticError, EdgeNumbering,
    Factorization,
};
pub use polynomial::{compute_poly, eval, GraphPolynomial, PolyError};

/// Any error surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Inconsistent(String),
}
