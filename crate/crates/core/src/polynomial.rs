//! The graph polynomials `Q_G` and `Q_G^+`.
//!
//! `c_k` sums, over edge subsets `F` touching exactly `k` vertices, either
//! `(-1)^|F|` (signed) or `1` (unsigned). Coefficients are exact `i128`;
//! `sum |c_k| <= 2^e <= 2^64` keeps every intermediate in range.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Graph;

/// Largest number of evaluated states accepted by [`compute_poly`].
pub const STATE_CAP: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("graph with v={v}, e={e} needs more than {STATE_CAP} polynomial states")]
    TooLarge { v: usize, e: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphPolynomial {
    coefficients: Vec<i128>,
    signed: bool,
}

impl GraphPolynomial {
    pub fn from_coefficients(coefficients: Vec<i128>, signed: bool) -> Self {
        GraphPolynomial {
            coefficients,
            signed,
        }
    }

    /// `c_0..=c_v`.
    pub fn coefficients(&self) -> &[i128] {
        &self.coefficients
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// `c_k`, or 0 past the degree.
    pub fn coefficient(&self, k: usize) -> i128 {
        self.coefficients.get(k).copied().unwrap_or(0)
    }

    /// Sum of `|c_k|` over `k >= 1`.
    pub fn non_constant_weight(&self) -> u128 {
        self.coefficients
            .iter()
            .skip(1)
            .map(|c| c.unsigned_abs())
            .sum()
    }

    /// Exact value at 1.
    pub fn value_at_one(&self) -> i128 {
        self.coefficients.iter().sum()
    }

    pub fn eval(&self, t: f64) -> f64 {
        eval(self, t)
    }

    /// `Q(t) - 1`, evaluated without forming `1 + small` first.
    pub fn eval_minus_one(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .skip(1)
            .rev()
            .fold(0.0, |acc, &c| acc * t + c as f64)
            * t
    }
}

/// Horner evaluation in `f64`.
pub fn eval(p: &GraphPolynomial, t: f64) -> f64 {
    p.coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * t + c as f64)
}

fn check_feasible(g: &Graph) -> Result<(), PolyError> {
    let (v, e) = (g.vertex_count(), g.edge_count());
    let subsets = 1u128.checked_shl(e as u32).unwrap_or(u128::MAX);
    let dp = 1u128
        .checked_shl(v as u32)
        .and_then(|s| s.checked_mul(e as u128))
        .unwrap_or(u128::MAX);
    if subsets.min(dp) > STATE_CAP {
        return Err(PolyError::TooLarge { v, e });
    }
    Ok(())
}

/// Computes `Q_G` (`signed = true`) or `Q_G^+`.
///
/// Dynamic programming over the edges; the state is the mask of covered
/// vertices and the value the signed number of edge subsets producing it.
pub fn compute_poly(g: &Graph, signed: bool) -> Result<GraphPolynomial, PolyError> {
    check_feasible(g)?;

    let mut states: HashMap<u64, i128> = HashMap::from([(0, 1)]);
    for edge in g.edges() {
        let mask = edge.mask();
        let mut next = states.clone();
        for (&covered, &count) in &states {
            let weight = if signed { -count } else { count };
            *next.entry(covered | mask).or_insert(0) += weight;
        }
        next.retain(|_, c| *c != 0);
        states = next;
    }

    let mut coefficients = vec![0i128; g.vertex_count() + 1];
    for (covered, count) in states {
        coefficients[covered.count_ones() as usize] += count;
    }
    Ok(GraphPolynomial {
        coefficients,
        signed,
    })
}
