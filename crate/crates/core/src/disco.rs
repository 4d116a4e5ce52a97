//! The recursive block construction D_0 = A, D_k = [[D_{k-1}, B_k], [B_k,
//! D_{k-1}]], together with the algebraic identities it satisfies: the
//! trace split over A+B and A-B, the matching spectrum bisection, and the
//! generator degrees-of-freedom count.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::eigen::eigenvalues_sym;
use crate::ensembles::{sample, EnsembleSpec, EntryDistribution, Kind};
use crate::error::{Error, Result};
use crate::matrix::{Entry, SymmetricMatrix};

/// Sub-stream slots reserved per trial: slot 0 is the base matrix, slots
/// 1..=d the off-diagonal blocks. Keeps every matrix of every trial on its
/// own stream of one root seed.
pub const STREAM_SLOTS_PER_TRIAL: u64 = 16;

/// Depth and base size of a sampled construction, with the seed from which
/// all per-trial sub-streams derive.
#[derive(Clone, Copy, Debug)]
pub struct DiscoParams {
    pub depth: usize,
    pub base_order: usize,
    pub seed: u64,
    pub distribution: EntryDistribution,
}

impl DiscoParams {
    pub fn new(depth: usize, base_order: usize, seed: u64) -> Result<Self> {
        if base_order == 0 || base_order % 2 != 0 {
            return Err(Error::Config(format!(
                "base order must be even and positive, got {base_order}"
            )));
        }
        if depth >= STREAM_SLOTS_PER_TRIAL as usize {
            return Err(Error::Config(format!("depth {depth} too large")));
        }
        base_order
            .checked_shl(depth as u32)
            .filter(|&o| o <= 1 << 24)
            .ok_or_else(|| Error::Config(format!("order 2^{depth} * {base_order} too large")))?;
        Ok(DiscoParams {
            depth,
            base_order,
            seed,
            distribution: EntryDistribution::StandardGaussian,
        })
    }

    pub fn order(&self) -> usize {
        self.base_order << self.depth
    }

    /// Spec for the base matrix of the given trial.
    pub fn base_spec(&self, trial: u64) -> EnsembleSpec {
        EnsembleSpec::new(Kind::Pst, self.base_order, self.seed)
            .with_distribution(self.distribution)
            .with_stream(trial * STREAM_SLOTS_PER_TRIAL)
    }

    /// Specs for the off-diagonal blocks; block i (0-based) has order 2^i * N.
    pub fn block_specs(&self, trial: u64) -> Vec<EnsembleSpec> {
        (0..self.depth)
            .map(|i| {
                EnsembleSpec::new(Kind::Wigner, self.base_order << i, self.seed)
                    .with_distribution(self.distribution)
                    .with_stream(trial * STREAM_SLOTS_PER_TRIAL + 1 + i as u64)
            })
            .collect()
    }

    /// Draws all constituents for one trial and assembles the block matrix.
    pub fn sample(&self, trial: u64) -> Result<SymmetricMatrix<f64>> {
        let a = sample(&self.base_spec(trial))?;
        let bs = self
            .block_specs(trial)
            .iter()
            .map(sample)
            .collect::<Result<Vec<_>>>()?;
        build_disco(&a, &bs)
    }
}

/// Assembles D_d from the base matrix and the list of off-diagonal blocks;
/// bs[i] must have order 2^i * order(a).
pub fn build_disco<T: Entry>(
    a: &SymmetricMatrix<T>,
    bs: &[SymmetricMatrix<T>],
) -> Result<SymmetricMatrix<T>> {
    for (i, b) in bs.iter().enumerate() {
        let want = a.order() << i;
        if b.order() != want {
            return Err(Error::Config(format!(
                "block {i} has order {}, expected {want}",
                b.order()
            )));
        }
    }
    let mut cur = a.clone();
    for b in bs {
        let n = cur.order();
        cur = SymmetricMatrix::from_fn(2 * n, |i, j| {
            match (i < n, j < n) {
                (true, true) => cur.get(i, j).clone(),
                (false, false) => cur.get(i - n, j - n).clone(),
                (true, false) => b.get(i, j - n).clone(),
                (false, true) => b.get(i - n, j).clone(),
            }
        })?;
    }
    Ok(cur)
}

/// Tr((A+B)^k) + Tr((A-B)^k), which equals Tr(D_1(A, B)^k): conjugating by
/// the orthogonal (1/sqrt 2)[[I, I], [I, -I]] block-diagonalizes D_1 into
/// A+B and A-B.
pub fn disco_trace_split<T: Entry>(
    a: &SymmetricMatrix<T>,
    b: &SymmetricMatrix<T>,
    k: usize,
) -> Result<T> {
    let plus = a.add(b)?.trace_power(k)?;
    let minus = a.sub(b)?.trace_power(k)?;
    Ok(plus + minus)
}

/// Eigenvalues of A+B and A-B; their multiset union is the spectrum of
/// D_1(A, B).
pub fn split_spectrum(
    a: &SymmetricMatrix<f64>,
    b: &SymmetricMatrix<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((
        eigenvalues_sym(&a.add(b)?)?,
        eigenvalues_sym(&a.sub(b)?)?,
    ))
}

/// 2^{-(k/2+1)} [Tr((A+B)^k) + Tr((A-B)^k)] in float arithmetic.
pub fn normalized_disco_moment(
    a: &SymmetricMatrix<f64>,
    b: &SymmetricMatrix<f64>,
    k: usize,
) -> Result<f64> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::Config(format!("moment order must be even, got {k}")));
    }
    let sum = a.add(b)?.trace_power(k)? + a.sub(b)?.trace_power(k)?;
    Ok(sum / f64::powi(2.0, k as i32 / 2 + 1))
}

/// Exact-rational version of the normalized trace combination. The divisor
/// 2^{k/2+1} need not divide the sum for arbitrary inputs, hence the
/// rational return type.
pub fn normalized_disco_moment_exact(
    a: &SymmetricMatrix<BigInt>,
    b: &SymmetricMatrix<BigInt>,
    k: usize,
) -> Result<BigRational> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::Config(format!("moment order must be even, got {k}")));
    }
    let sum = a.add(b)?.trace_power(k)? + a.sub(b)?.trace_power(k)?;
    Ok(BigRational::new(sum, BigInt::from(1) << (k / 2 + 1)))
}

/// Independent generator count of the sampled construction: N/2 for the
/// base matrix plus a Wigner count 2^{i-1}N (2^{i-1}N + 1)/2 per level.
pub fn degrees_of_freedom(depth: u32, base_order: u64) -> u128 {
    let n = base_order as u128;
    let mut total = n / 2;
    for i in 1..=depth as u128 {
        let order = (1u128 << (i - 1)) * n;
        total += order * (order + 1) / 2;
    }
    total
}
