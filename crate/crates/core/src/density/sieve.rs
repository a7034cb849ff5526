//! Bit-packed sieve of Eratosthenes over odd numbers.

use std::sync::OnceLock;

use super::DensityError;

pub const MAX_SIEVE_BOUND: u64 = 100_000_000;
const SEGMENT_THRESHOLD: u64 = 10_000_000;
/// Odd numbers per segment (bits), 32 KiB of words.
const SEGMENT_ODDS: usize = 1 << 18;

/// All primes up to `bound`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&p| p as u64)
    }
}

/// Sieves all primes `<= bound`, for `2 <= bound <= 10^8`.
pub fn primes_up_to(bound: u64) -> Result<PrimeTable, DensityError> {
    if !(2..=MAX_SIEVE_BOUND).contains(&bound) {
        return Err(DensityError::SieveBound(bound));
    }
    let primes = if bound > SEGMENT_THRESHOLD {
        segmented(bound, SEGMENT_ODDS)
    } else {
        simple(bound)
    };
    Ok(PrimeTable { bound, primes })
}

/// Table up to 10^6 shared by trial division.
pub(crate) fn small_primes() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable {
        bound: 1_000_000,
        primes: simple(1_000_000),
    })
}

/// Bit `i` stands for the odd number `2i + 1`; set means composite.
struct OddBits(Vec<u64>);

impl OddBits {
    fn new(len: usize) -> Self {
        OddBits(vec![0; len.div_ceil(64)])
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }
}

fn simple(bound: u64) -> Vec<u32> {
    let bound = bound as usize;
    let odds = bound.div_ceil(2);
    let mut bits = OddBits::new(odds);
    bits.set(0); // 1
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= bound {
        if !bits.get(i) {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < odds {
                bits.set(j);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_count(bound as u64));
    if bound >= 2 {
        primes.push(2);
    }
    primes.extend(
        (1..odds)
            .filter(|&i| !bits.get(i))
            .map(|i| (2 * i + 1) as u32),
    );
    primes
}

fn segmented(bound: u64, segment_odds: usize) -> Vec<u32> {
    let base = simple((bound as f64).sqrt() as u64 + 1);
    let odds = bound.div_ceil(2) as usize;
    let mut primes = Vec::with_capacity(estimate_count(bound));
    primes.push(2);

    let mut low = 0usize;
    while low < odds {
        let high = (low + segment_odds).min(odds);
        let mut bits = OddBits::new(high - low);
        for &p in base.iter().skip(1) {
            let p = p as usize;
            let first = p * p / 2;
            if first >= high {
                break;
            }
            let mut j = if first >= low {
                first
            } else {
                // smallest index >= low congruent to first mod p
                low + (p - (low - first) % p) % p
            };
            while j < high {
                bits.set(j - low);
                j += p;
            }
        }
        for i in low..high {
            if i != 0 && !bits.get(i - low) {
                primes.push((2 * i + 1) as u32);
            }
        }
        low = high;
    }
    primes
}

fn estimate_count(bound: u64) -> usize {
    let x = bound.max(3) as f64;
    (1.26 * x / x.ln()) as usize + 16
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(n: u64) -> Vec<u32> {
        (2..=n)
            .filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
            .map(|k| k as u32)
            .collect()
    }

    #[test]
    fn small_bounds() {
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
        assert_eq!(primes_up_to(3).unwrap().primes(), &[2, 3]);
        assert_eq!(primes_up_to(9).unwrap().primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(primes_up_to(1), Err(DensityError::SieveBound(1))));
        assert!(primes_up_to(MAX_SIEVE_BOUND + 1).is_err());
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in [2, 3, 4, 97, 100, 1000, 4099] {
            assert_eq!(simple(n), trial_division_primes(n), "n = {n}");
        }
    }

    #[test]
    fn segmented_agrees_with_simple() {
        for (n, seg) in [
            (2u64, 4usize),
            (100, 3),
            (1000, 7),
            (10_007, 64),
            (99_991, 1000),
        ] {
            assert_eq!(segmented(n, seg), simple(n), "n = {n}, segment {seg}");
        }
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(1_000_000).unwrap().len(), 78_498);
        assert_eq!(small_primes().len(), 78_498);
    }

    #[test]
    fn segmented_path_used_above_threshold() {
        let t = primes_up_to(10_000_019).unwrap();
        assert_eq!(t.len(), 664_580);
        assert_eq!(*t.primes().last().unwrap(), 10_000_019);
    }
}
