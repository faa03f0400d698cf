//! Random numbers and simulation of tables under the homogeneity null.

use crate::error::{Error, Result};
use crate::table::ContingencyTable;

/// Source of uniform random bits. The simulation only needs this interface,
/// so any generator can stand in for [`CmwcRng`].
pub trait UniformSource {
    fn next_u32(&mut self) -> u32;

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    fn next_f64(&mut self) -> f64 {
        let hi = u64::from(self.next_u32() >> 5);
        let lo = u64::from(self.next_u32() >> 6);
        ((hi << 26) | lo) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Lag of the generator.
pub const CMWC_LAG: usize = 8;
/// Multiplier. `CMWC_MULTIPLIER * (2^32 - 1)^8 + 1` is prime and `2^32 - 1`
/// is a primitive root modulo it, so the period is
/// `CMWC_MULTIPLIER * (2^32 - 1)^8`, about `2^288`.
pub const CMWC_MULTIPLIER: u64 = 4_294_967_054;

/// Row count up to which draws scan the whole cdf instead of bisecting it.
const BRANCHLESS_ROWS: usize = 32;

const SPLITMIX_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(SPLITMIX_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stateless 64-bit finalizer used to spread stream ids before seeding.
#[inline]
fn mix64(x: u64) -> u64 {
    let mut state = x;
    splitmix64(&mut state)
}

/// Complementary multiply-with-carry generator with base `2^32 - 1` and lag 8,
/// in the form Marsaglia gives for his CMWC4096.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmwcRng {
    lag: [u32; CMWC_LAG],
    carry: u32,
    index: usize,
    stream_id: u64,
}

/// Generator state; one per simulation stream.
pub type RngState = CmwcRng;

impl CmwcRng {
    /// Seeds stream `stream_id` of `seed`. Every `(seed, stream_id)` pair is
    /// valid and yields its own sequence.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut state = seed ^ mix64(stream_id ^ 0x6a09_e667_f3bc_c909);
        let mut lag = [0u32; CMWC_LAG];
        for word in &mut lag {
            // 0xffff_ffff is not a valid digit in base 2^32 - 1.
            let mut w = (splitmix64(&mut state) >> 32) as u32;
            while w == u32::MAX {
                w = (splitmix64(&mut state) >> 32) as u32;
            }
            *word = w;
        }
        let carry = (splitmix64(&mut state) % CMWC_MULTIPLIER) as u32;
        CmwcRng { lag, carry, index: CMWC_LAG - 1, stream_id }
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Current carry; always below [`CMWC_MULTIPLIER`].
    pub fn carry(&self) -> u32 {
        self.carry
    }
}

impl UniformSource for CmwcRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        const R: u32 = 0xffff_fffe;
        self.index = (self.index + 1) & (CMWC_LAG - 1);
        let t = CMWC_MULTIPLIER * u64::from(self.lag[self.index]) + u64::from(self.carry);
        self.carry = (t >> 32) as u32;
        let mut x = (t as u32).wrapping_add(self.carry);
        if x < self.carry {
            x = x.wrapping_add(1);
            self.carry += 1;
        }
        self.lag[self.index] = R.wrapping_sub(x);
        self.lag[self.index]
    }
}

/// Seeds `rng_init(seed, stream_id)`.
pub fn rng_init(seed: u64, stream_id: u64) -> RngState {
    CmwcRng::new(seed, stream_id)
}

/// Next uniform double in `[0, 1)`.
pub fn rng_uniform(state: &mut RngState) -> f64 {
    state.next_f64()
}

/// Null distribution: each column k is `col_totals[k]` independent draws from
/// the row distribution `row_props`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpec {
    row_props: Vec<f64>,
    col_totals: Vec<u64>,
    cdf: Vec<f64>,
}

impl NullSpec {
    /// Row proportions and column totals of an observed table. The cdf is
    /// built from integer cumulative row totals, so it ends at exactly 1.
    pub fn from_table(table: &ContingencyTable) -> Result<Self> {
        let n = table.total() as f64;
        let row_props = table.row_totals().iter().map(|&t| t as f64 / n).collect();
        let mut cumulative = 0u64;
        let cdf = table
            .row_totals()
            .iter()
            .map(|&t| {
                cumulative += t;
                cumulative as f64 / n
            })
            .collect();
        Self::checked(row_props, table.col_totals().to_vec(), cdf)
    }

    /// Arbitrary probabilities (normalized here) and column totals.
    pub fn new(row_props: Vec<f64>, col_totals: Vec<u64>) -> Result<Self> {
        if row_props.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidNull("row probabilities must be finite and nonnegative".into()));
        }
        let sum: f64 = row_props.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidNull("row probabilities sum to zero".into()));
        }
        let row_props: Vec<f64> = row_props.iter().map(|p| p / sum).collect();
        let last_positive = row_props.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let mut running = 0.0;
        let cdf = row_props
            .iter()
            .enumerate()
            .map(|(j, p)| {
                running += p;
                if j >= last_positive {
                    1.0
                } else {
                    running.min(1.0)
                }
            })
            .collect();
        Self::checked(row_props, col_totals, cdf)
    }

    fn checked(row_props: Vec<f64>, col_totals: Vec<u64>, cdf: Vec<f64>) -> Result<Self> {
        if row_props.len() < 2 || col_totals.len() < 2 {
            return Err(Error::InvalidNull(format!(
                "need at least 2 rows and 2 columns, got {}x{}",
                row_props.len(),
                col_totals.len()
            )));
        }
        if let Some(k) = col_totals.iter().position(|&c| c == 0) {
            return Err(Error::InvalidNull(format!("column {} has no draws", k + 1)));
        }
        if col_totals.iter().try_fold(0u64, |acc, &c| acc.checked_add(c)).is_none_or(|n| n > crate::table::MAX_TOTAL) {
            return Err(Error::InvalidNull("column totals are too large".into()));
        }
        Ok(NullSpec { row_props, col_totals, cdf })
    }

    pub fn rows(&self) -> usize {
        self.row_props.len()
    }

    pub fn cols(&self) -> usize {
        self.col_totals.len()
    }

    pub fn row_props(&self) -> &[f64] {
        &self.row_props
    }

    pub fn col_totals(&self) -> &[u64] {
        &self.col_totals
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn total(&self) -> u64 {
        self.col_totals.iter().sum()
    }

    #[inline]
    fn draw_row<R: UniformSource>(&self, rng: &mut R) -> usize {
        let u = rng.next_f64();
        // First cdf entry above u. For short tables counting the entries at
        // or below u gives the same index without data-dependent branches.
        if self.cdf.len() <= BRANCHLESS_ROWS {
            self.cdf.iter().map(|&c| usize::from(c <= u)).sum()
        } else {
            self.cdf.partition_point(|&c| c <= u)
        }
    }

    /// Adds the draws of column `col` into `out` (length `rows`).
    #[inline]
    fn accumulate_column<R: UniformSource>(&self, col: usize, rng: &mut R, out: &mut [u64], stride: usize) {
        for _ in 0..self.col_totals[col] {
            out[self.draw_row(rng) * stride] += 1;
        }
    }

    /// Counts per row for column `col`; sums to `col_totals[col]`.
    pub fn sample_column<R: UniformSource>(&self, col: usize, rng: &mut R) -> Vec<u64> {
        let mut out = vec![0u64; self.rows()];
        self.accumulate_column(col, rng, &mut out, 1);
        out
    }

    /// Fills `counts` (row-major, `rows * cols`) with one simulated table.
    #[inline]
    pub fn simulate_into<R: UniformSource>(&self, rng: &mut R, counts: &mut [u64]) {
        let cols = self.cols();
        assert_eq!(counts.len(), self.rows() * cols);
        counts.fill(0);
        for k in 0..cols {
            self.accumulate_column(k, rng, &mut counts[k..], cols);
        }
    }

    /// One simulated table; column totals equal `col_totals` exactly.
    pub fn simulate_table<R: UniformSource>(&self, rng: &mut R) -> ContingencyTable {
        let mut counts = vec![0u64; self.rows() * self.cols()];
        self.simulate_into(rng, &mut counts);
        ContingencyTable::from_counts(self.rows(), self.cols(), counts)
            .expect("column totals are positive, so the table is valid")
    }
}
