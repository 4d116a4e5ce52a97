//! Seeded samplers for the matrix ensembles: palindromic symmetric Toeplitz,
//! Wigner, m-period block circulant, and the fixed integer counterexample
//! pair. All random entries have mean 0 and variance 1; identical specs give
//! bit-identical matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Pst,
    Wigner,
    BlockCirculant,
    CounterexampleA,
    CounterexampleB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryDistribution {
    StandardGaussian,
    Rademacher,
}

/// Recipe for one random matrix draw. `seed` is the experiment's root seed
/// and `stream` the derived sub-stream index, so matrices drawn for
/// different trials or different roles within a trial are independent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: Kind,
    pub order: usize,
    /// Block period m; only meaningful for the block-circulant kind.
    pub period: usize,
    pub distribution: EntryDistribution,
    pub seed: u64,
    pub stream: u64,
}

impl EnsembleSpec {
    pub fn new(kind: Kind, order: usize, seed: u64) -> Self {
        EnsembleSpec {
            kind,
            order,
            period: 1,
            distribution: EntryDistribution::StandardGaussian,
            seed,
            stream: 0,
        }
    }

    pub fn with_period(mut self, m: usize) -> Self {
        self.period = m;
        self
    }

    pub fn with_distribution(mut self, d: EntryDistribution) -> Self {
        self.distribution = d;
        self
    }

    pub fn with_stream(mut self, s: u64) -> Self {
        self.stream = s;
        self
    }

    /// Parses the CLI grammar: `pst`, `wigner`, `blockcirc:<m>`,
    /// `counterexample` (the block-diagonal A side; the B side is selected
    /// by two-ensemble contexts).
    pub fn parse(token: &str, order: usize, seed: u64) -> Result<Self> {
        let kind = match token {
            "pst" => Kind::Pst,
            "wigner" => Kind::Wigner,
            "counterexample" => Kind::CounterexampleA,
            t if t.starts_with("blockcirc:") => {
                let m: usize = t["blockcirc:".len()..]
                    .parse()
                    .map_err(|_| Error::Config(format!("bad block period in `{t}`")))?;
                if m == 0 {
                    return Err(Error::Config("block period must be positive".into()));
                }
                return Ok(EnsembleSpec::new(Kind::BlockCirculant, order, seed).with_period(m));
            }
            _ => {
                return Err(Error::Config(format!(
                    "unknown ensemble `{token}` (expected pst, wigner, blockcirc:<m>, counterexample)"
                )))
            }
        };
        Ok(EnsembleSpec::new(kind, order, seed))
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Config("ensemble order must be positive".into()));
        }
        match self.kind {
            Kind::Pst if self.order % 2 != 0 => Err(Error::Config(format!(
                "pst requires even order, got {}",
                self.order
            ))),
            Kind::BlockCirculant if self.period == 0 || self.order % self.period != 0 => {
                Err(Error::Config(format!(
                    "block circulant requires period | order, got m={} N={}",
                    self.period, self.order
                )))
            }
            Kind::CounterexampleA | Kind::CounterexampleB if self.order % 2 != 0 => Err(
                Error::Config("counterexample matrices have even order 2m".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Number of independent generator draws behind one sample.
    pub fn degrees_of_freedom(&self) -> usize {
        let n = self.order;
        match self.kind {
            Kind::Pst => n / 2,
            Kind::Wigner => n * (n + 1) / 2,
            Kind::BlockCirculant => {
                let mut classes = std::collections::HashSet::new();
                for i in 0..n {
                    for j in i..n {
                        classes.insert(circulant_class(i, j, n, self.period));
                    }
                }
                classes.len()
            }
            Kind::CounterexampleA | Kind::CounterexampleB => 0,
        }
    }
}

fn draw(rng: &mut impl Rng, d: EntryDistribution) -> f64 {
    match d {
        EntryDistribution::StandardGaussian => rng.sample(StandardNormal),
        EntryDistribution::Rademacher => {
            if rng.random::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// Diagonal-lag index of a palindromic Toeplitz matrix: entry (i, j) carries
/// generator b_{min(l, N-1-l)} with l = |i - j|, so the first row reads
/// (b_0, b_1, ..., b_1, b_0).
fn pst_lag(i: usize, j: usize, n: usize) -> usize {
    let l = i.abs_diff(j);
    l.min(n - 1 - l)
}

pub fn sample_pst(spec: &EnsembleSpec) -> Result<SymmetricMatrix<f64>> {
    if spec.kind != Kind::Pst {
        return Err(Error::Config("sample_pst requires kind = pst".into()));
    }
    spec.validate()?;
    let n = spec.order;
    let mut rng = RngStream::new(spec.seed, spec.stream).rng();
    let b: Vec<f64> = (0..n / 2).map(|_| draw(&mut rng, spec.distribution)).collect();
    SymmetricMatrix::from_fn(n, |i, j| b[pst_lag(i, j, n)])
}

pub fn sample_wigner(spec: &EnsembleSpec) -> Result<SymmetricMatrix<f64>> {
    if spec.kind != Kind::Wigner {
        return Err(Error::Config("sample_wigner requires kind = wigner".into()));
    }
    spec.validate()?;
    let mut rng = RngStream::new(spec.seed, spec.stream).rng();
    SymmetricMatrix::from_fn(spec.order, |_, _| draw(&mut rng, spec.distribution))
}

/// Canonical symmetry class of position (i, j): the key ((j-i) mod N,
/// i mod m, j mod m) identified with its transpose image ((i-j) mod N,
/// j mod m, i mod m); the lexicographically smaller triple represents the
/// class.
fn circulant_class(i: usize, j: usize, n: usize, m: usize) -> (usize, usize, usize) {
    let l = (n + j - i) % n;
    let fwd = (l, i % m, j % m);
    let bwd = ((n - l) % n, j % m, i % m);
    fwd.min(bwd)
}

pub fn sample_block_circulant(spec: &EnsembleSpec) -> Result<SymmetricMatrix<f64>> {
    if spec.kind != Kind::BlockCirculant {
        return Err(Error::Config(
            "sample_block_circulant requires kind = block_circulant".into(),
        ));
    }
    spec.validate()?;
    let (n, m) = (spec.order, spec.period);
    let mut rng = RngStream::new(spec.seed, spec.stream).rng();
    // One generator per class, drawn on first encounter; the generation loop
    // order is fixed, so the draw sequence is deterministic.
    let mut gen: HashMap<(usize, usize, usize), f64> = HashMap::new();
    SymmetricMatrix::from_fn(n, |i, j| {
        *gen.entry(circulant_class(i, j, n, m))
            .or_insert_with(|| draw(&mut rng, spec.distribution))
    })
}

/// The fixed 2x2 integer blocks of the counterexample pair.
const BLOCK_A: [[i64; 2]; 2] = [[-33, -31], [-31, -82]];
const BLOCK_B: [[i64; 2]; 2] = [[26, 78], [78, -15]];

/// Block-diagonal pair (A, B) with m copies of the fixed 2x2 blocks, in
/// exact integer arithmetic.
pub fn counterexample_matrices(
    m: usize,
) -> Result<(SymmetricMatrix<BigInt>, SymmetricMatrix<BigInt>)> {
    if m == 0 {
        return Err(Error::Config("block count must be at least 1".into()));
    }
    let build = |block: [[i64; 2]; 2]| {
        SymmetricMatrix::from_fn(2 * m, |i, j| {
            if i / 2 == j / 2 {
                BigInt::from(block[i % 2][j % 2])
            } else {
                BigInt::from(0)
            }
        })
    };
    Ok((build(BLOCK_A)?, build(BLOCK_B)?))
}

/// Draws one float-mode matrix per the spec. Counterexample kinds are served
/// as float views of the exact pair (order = 2m).
pub fn sample(spec: &EnsembleSpec) -> Result<SymmetricMatrix<f64>> {
    spec.validate()?;
    match spec.kind {
        Kind::Pst => sample_pst(spec),
        Kind::Wigner => sample_wigner(spec),
        Kind::BlockCirculant => sample_block_circulant(spec),
        Kind::CounterexampleA => {
            let (a, _) = counterexample_matrices(spec.order / 2)?;
            Ok(a.to_float())
        }
        Kind::CounterexampleB => {
            let (_, b) = counterexample_matrices(spec.order / 2)?;
            Ok(b.to_float())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn spec(kind: Kind, order: usize, seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(kind, order, seed)
    }

    #[test]
    fn pst_order_two_forced() {
        let m = sample_pst(&spec(Kind::Pst, 2, 1)).unwrap();
        let v = *m.get(0, 0);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(*m.get(i, j), v);
            }
        }
    }

    #[test]
    fn pst_structure() {
        let n = 64;
        let m = sample_pst(&spec(Kind::Pst, n, 9)).unwrap();
        // Toeplitz: constant along diagonals.
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                assert_eq!(m.get(i, j), m.get(i + 1, j + 1));
            }
        }
        // Palindromic first row.
        for j in 0..n {
            assert_eq!(m.get(0, j), m.get(0, n - 1 - j));
        }
        // Entry depends only on min(l, N-1-l).
        for i in 0..n {
            for j in 0..n {
                let l = i.abs_diff(j);
                assert_eq!(m.get(i, j), m.get(0, l.min(n - 1 - l)));
            }
        }
    }

    #[test]
    fn pst_first_row_palindrome() {
        // First row reads (b0, b1, b2, b3, b3, b2, b1, b0): N/2 = 4 distinct
        // generators, mirrored.
        let n = 8;
        let m = sample_pst(&spec(Kind::Pst, n, 4)).unwrap();
        let first: Vec<f64> = (0..n).map(|j| *m.get(0, j)).collect();
        assert_eq!(first[0], first[7]);
        assert_eq!(first[1], first[6]);
        assert_eq!(first[2], first[5]);
        assert_eq!(first[3], first[4]);
        let distinct: HashSet<u64> = first.iter().map(|x| x.to_bits()).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn pst_rejects_odd_order() {
        assert!(sample_pst(&spec(Kind::Pst, 5, 1)).is_err());
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        for kind in [Kind::Pst, Kind::Wigner] {
            let a = sample(&spec(kind, 16, 42)).unwrap();
            let b = sample(&spec(kind, 16, 42)).unwrap();
            assert_eq!(a, b);
            let c = sample(&spec(kind, 16, 43)).unwrap();
            assert_ne!(a, c);
        }
        let s = spec(Kind::BlockCirculant, 12, 42).with_period(3);
        assert_eq!(sample(&s).unwrap(), sample(&s).unwrap());
    }

    #[test]
    fn wigner_order_one_and_rademacher_support() {
        let m = sample_wigner(&spec(Kind::Wigner, 1, 5)).unwrap();
        assert_eq!(m.order(), 1);
        let r = sample_wigner(
            &spec(Kind::Wigner, 3, 5).with_distribution(EntryDistribution::Rademacher),
        )
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(*r.get(i, j) == 1.0 || *r.get(i, j) == -1.0);
                assert_eq!(r.get(i, j), r.get(j, i));
            }
        }
    }

    #[test]
    fn generator_stream_moments() {
        // Law-of-large-numbers band on the Wigner entry stream: the (0, 1)
        // entry across 10_000 draws has mean within 5 sigma of 0 and
        // variance within 5 sigma of 1.
        let n_draws = 10_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for t in 0..n_draws {
            let m = sample_wigner(&spec(Kind::Wigner, 2, 1234).with_stream(t as u64)).unwrap();
            let x = *m.get(0, 1);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n_draws as f64;
        let var = sumsq / n_draws as f64 - mean * mean;
        let se_mean = 1.0 / (n_draws as f64).sqrt();
        let se_var = (2.0f64 / n_draws as f64).sqrt();
        assert!(mean.abs() < 5.0 * se_mean, "mean {mean}");
        assert!((var - 1.0).abs() < 5.0 * se_var, "var {var}");
    }

    #[test]
    fn dof_audit_by_distinct_values() {
        // Gaussian draws are a.s. pairwise distinct, so the number of
        // distinct entry values equals the number of generator draws.
        let distinct = |m: &SymmetricMatrix<f64>| {
            let mut s: HashSet<u64> = HashSet::new();
            for i in 0..m.order() {
                for j in i..m.order() {
                    s.insert(m.get(i, j).to_bits());
                }
            }
            s.len()
        };
        let p = spec(Kind::Pst, 64, 3);
        assert_eq!(distinct(&sample(&p).unwrap()), 32);
        assert_eq!(p.degrees_of_freedom(), 32);

        let w = spec(Kind::Wigner, 16, 3);
        assert_eq!(distinct(&sample(&w).unwrap()), 16 * 17 / 2);
        assert_eq!(w.degrees_of_freedom(), 16 * 17 / 2);

        let c = spec(Kind::BlockCirculant, 24, 3).with_period(3);
        assert_eq!(distinct(&sample(&c).unwrap()), c.degrees_of_freedom());
    }

    #[test]
    fn circulant_period_one_degenerates_to_symmetric_circulant() {
        let n = 12;
        let m = sample_block_circulant(&spec(Kind::BlockCirculant, n, 8).with_period(1)).unwrap();
        for i in 0..n {
            for j in 0..n {
                let l = (n + j - i) % n;
                let lag = l.min(n - l);
                assert_eq!(m.get(i, j), m.get(0, lag), "({i},{j})");
            }
        }
    }

    #[test]
    fn circulant_period_n_is_wigner_free() {
        let s = spec(Kind::BlockCirculant, 8, 8).with_period(8);
        assert_eq!(s.degrees_of_freedom(), 8 * 9 / 2);
    }

    #[test]
    fn circulant_rejects_bad_period() {
        assert!(sample_block_circulant(&spec(Kind::BlockCirculant, 10, 1).with_period(3)).is_err());
    }

    #[test]
    fn counterexample_single_block() {
        let (a, b) = counterexample_matrices(1).unwrap();
        assert_eq!(*a.get(0, 0), BigInt::from(-33));
        assert_eq!(*a.get(0, 1), BigInt::from(-31));
        assert_eq!(*a.get(1, 1), BigInt::from(-82));
        assert_eq!(*b.get(0, 0), BigInt::from(26));
        assert_eq!(*b.get(0, 1), BigInt::from(78));
        assert_eq!(*b.get(1, 1), BigInt::from(-15));
    }

    #[test]
    fn counterexample_traces_at_ten_blocks() {
        let (a, b) = counterexample_matrices(10).unwrap();
        assert_eq!(a.trace_power(4).unwrap(), BigInt::from(886_801_750u64));
        assert_eq!(b.trace_power(4).unwrap(), BigInt::from(869_734_090u64));
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(EnsembleSpec::parse("pst", 8, 1).unwrap().kind, Kind::Pst);
        assert_eq!(
            EnsembleSpec::parse("wigner", 8, 1).unwrap().kind,
            Kind::Wigner
        );
        let bc = EnsembleSpec::parse("blockcirc:3", 9, 1).unwrap();
        assert_eq!(bc.kind, Kind::BlockCirculant);
        assert_eq!(bc.period, 3);
        assert_eq!(
            EnsembleSpec::parse("counterexample", 20, 1).unwrap().kind,
            Kind::CounterexampleA
        );
        assert!(EnsembleSpec::parse("toeplitz", 8, 1).is_err());
        assert!(EnsembleSpec::parse("blockcirc:x", 8, 1).is_err());
    }
}
