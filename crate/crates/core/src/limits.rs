//! Exact limiting moments by brute-force enumeration of labeled chord
//! pairings, cross-validated by an independent height-function route. All
//! sums are exact rationals; floats appear only at the reporting boundary.
//!
//! The labeling rule: each chord is tagged G or S. A pairing is admissible
//! iff no S-chord crosses any other chord; G-chords may cross G-chords
//! freely. Summing (g_weight)^{#G} (s_weight)^{#S} over admissible labeled
//! pairings of 2k points yields the 2k-th moment of a*g + b*s for a free
//! pair (g Gaussian, s semicircular) with a^2 = g_weight, b^2 = s_weight.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Hard cap on enumeration size: (2k-1)!! pairings at 2k = 16 is ~2M, still
/// fine; beyond that the budgets below refuse.
pub const ENUMERATION_LIMIT: usize = 16;
/// Labeled-enumeration budget (each pairing carries up to 2^k labelings).
pub const LABELED_LIMIT: usize = 14;

/// Perfect matching of {1..2k}; chords are (r, s) with r < s, sorted by r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPartition {
    chords: Vec<(u8, u8)>,
}

impl PairPartition {
    pub fn chords(&self) -> &[(u8, u8)] {
        &self.chords
    }

    pub fn half_size(&self) -> usize {
        self.chords.len()
    }

    /// Bitmask of chords that cross at least one other chord.
    fn crossed_mask(&self) -> u32 {
        let k = self.chords.len();
        let mut mask = 0u32;
        for i in 0..k {
            for j in i + 1..k {
                if crosses(self.chords[i], self.chords[j]) {
                    mask |= (1 << i) | (1 << j);
                }
            }
        }
        mask
    }
}

/// Two chords cross iff their endpoints interleave: r1 < r2 < s1 < s2 or
/// r2 < r1 < s2 < s1.
pub fn crosses(c1: (u8, u8), c2: (u8, u8)) -> bool {
    let ((r1, s1), (r2, s2)) = (c1, c2);
    (r1 < r2 && r2 < s1 && s1 < s2) || (r2 < r1 && r1 < s2 && s2 < s1)
}

/// All (2k-1)!! pairings of {1..2k}, duplicate-free, chords sorted by their
/// smaller endpoint.
pub fn enumerate_pair_partitions(two_k: usize) -> Result<Vec<PairPartition>> {
    if two_k % 2 != 0 {
        return Err(Error::Config(format!("point count must be even, got {two_k}")));
    }
    if two_k > ENUMERATION_LIMIT {
        return Err(Error::Config(format!(
            "enumeration budget is {ENUMERATION_LIMIT} points, got {two_k}"
        )));
    }
    let mut out = Vec::new();
    let points: Vec<u8> = (1..=two_k as u8).collect();
    let mut acc: Vec<(u8, u8)> = Vec::with_capacity(two_k / 2);
    fn rec(points: &[u8], acc: &mut Vec<(u8, u8)>, out: &mut Vec<PairPartition>) {
        if points.is_empty() {
            out.push(PairPartition { chords: acc.clone() });
            return;
        }
        // The smallest unpaired point picks each partner in turn; this
        // yields every pairing exactly once, chords already sorted.
        let a = points[0];
        for idx in 1..points.len() {
            let b = points[idx];
            let mut rest: Vec<u8> = Vec::with_capacity(points.len() - 2);
            rest.extend_from_slice(&points[1..idx]);
            rest.extend_from_slice(&points[idx + 1..]);
            acc.push((a, b));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    rec(&points, &mut acc, &mut out);
    Ok(out)
}

/// Number of chords crossed by no other chord. Equals k exactly when the
/// pairing is non-crossing.
pub fn height(p: &PairPartition) -> usize {
    p.half_size() - p.crossed_mask().count_ones() as usize
}

/// Height route: sum of 2^{height} over all pairings of 2k points.
pub fn height_moment(two_k: usize) -> Result<BigInt> {
    if two_k > LABELED_LIMIT {
        return Err(Error::Config(format!(
            "height-moment budget is {LABELED_LIMIT} points, got {two_k}"
        )));
    }
    let mut total = BigInt::zero();
    for p in enumerate_pair_partitions(two_k)? {
        total += BigInt::one() << height(&p);
    }
    Ok(total)
}

/// Catalan number C_n = binom(2n, n) / (n + 1), exact.
pub fn catalan(n: usize) -> BigInt {
    let mut b = BigInt::one();
    // binom(2n, n) built incrementally: each partial product is integral.
    for i in 0..n {
        b = b * BigInt::from(2 * n - i) / BigInt::from(i + 1);
    }
    b / BigInt::from(n + 1)
}

/// Gaussian moments: 0 for odd h, (h-1)!! for even h.
pub fn gaussian_moment(h: usize) -> BigInt {
    if h % 2 != 0 {
        return BigInt::zero();
    }
    double_factorial_odd(h)
}

/// (h-1)!! = 1 * 3 * ... * (h-1) for even h; counts pairings of h points.
pub fn double_factorial_odd(h: usize) -> BigInt {
    let mut v = BigInt::one();
    let mut i = 1usize;
    while i < h {
        v *= BigInt::from(i);
        i += 2;
    }
    v
}

/// Crossing-rule route: sum over all admissible labeled pairings of
/// g_weight^{#G} * s_weight^{#S}. Labelings are enumerated explicitly
/// (bitmask per pairing, bit set = S); admissibility is "no S-chord crosses
/// anything". Tallies are integer counts; weights enter once at the end.
pub fn constrained_moment(
    g_weight: &BigRational,
    s_weight: &BigRational,
    two_k: usize,
) -> Result<BigRational> {
    if g_weight.is_negative() || s_weight.is_negative() {
        return Err(Error::Config("weights must be non-negative".into()));
    }
    if two_k > LABELED_LIMIT {
        return Err(Error::Config(format!(
            "labeled-enumeration budget is {LABELED_LIMIT} points, got {two_k}"
        )));
    }
    let k = two_k / 2;
    // labelings_by_s_count[s] = number of admissible labeled pairings with
    // exactly s chords tagged S.
    let mut labelings_by_s_count = vec![0u64; k + 1];
    for p in enumerate_pair_partitions(two_k)? {
        let crossed = p.crossed_mask();
        for mask in 0u32..(1 << k) {
            if mask & crossed == 0 {
                labelings_by_s_count[mask.count_ones() as usize] += 1;
            }
        }
    }
    let mut g_pow = vec![BigRational::one(); k + 1];
    let mut s_pow = vec![BigRational::one(); k + 1];
    for i in 1..=k {
        g_pow[i] = &g_pow[i - 1] * g_weight;
        s_pow[i] = &s_pow[i - 1] * s_weight;
    }
    let mut total = BigRational::zero();
    for (s, &count) in labelings_by_s_count.iter().enumerate() {
        if count > 0 {
            total += &g_pow[k - s] * &s_pow[s] * BigRational::from_integer(BigInt::from(count));
        }
    }
    Ok(total)
}

/// 2k-th limiting moment at depth d: the Gaussian component carries weight
/// 2^{-d} and the semicircular component the remaining 1 - 2^{-d} (the d
/// free semicircular summands collapse into one with summed variance).
/// Depth 0 degenerates to the pure Gaussian moments.
pub fn limit_moment_disco(d: usize, two_k: usize) -> Result<BigRational> {
    let g = BigRational::new(BigInt::one(), BigInt::one() << d);
    let s = BigRational::one() - &g;
    constrained_moment(&g, &s, two_k)
}

/// Limiting moments of the m-period block circulant ensemble, from the
/// crossing-defect expansion of the pairing sum: each pairing contributes
/// m^{-2 * genus}. Degenerates to the Gaussian moments at m = 1 (plain
/// circulant) and to the Catalan numbers as m grows. Orders above 8 are not
/// tabulated.
pub fn block_circulant_limit(period: usize, two_k: usize) -> Option<BigRational> {
    let m2 = BigRational::from_integer(BigInt::from((period * period) as u64));
    let one = BigRational::one();
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    match two_k {
        2 => Some(one),
        4 => Some(int(2) + &one / &m2),
        6 => Some(int(5) + int(10) / &m2),
        8 => Some(int(14) + int(70) / &m2 + int(21) / (&m2 * &m2)),
        _ => None,
    }
}

/// Height-route value sandwiched by its closed-form bounds
/// 2^k C_k <= sum 2^{h} <= 2^k (2k-1)!!; returns (lower, upper, value).
pub fn moment_bounds(two_k: usize) -> Result<(BigInt, BigInt, BigInt)> {
    let k = two_k / 2;
    let lower = catalan(k) << k;
    let upper = double_factorial_odd(two_k) << k;
    let value = height_moment(two_k)?;
    if value < lower || value > upper {
        return Err(Error::Assertion(format!(
            "height moment {value} escapes [{lower}, {upper}] at 2k = {two_k}: enumeration bug"
        )));
    }
    Ok((lower, upper, value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactEnumeration,
    HeightFormula,
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct MomentRow {
    pub two_k: usize,
    pub exact: BigRational,
    pub provenance: Provenance,
}

impl MomentRow {
    pub fn float(&self) -> f64 {
        // Exact until here; small numerators/denominators make the division
        // representable to full double precision.
        self.exact.numer().to_f64().unwrap() / self.exact.denom().to_f64().unwrap()
    }
}

/// One column of limiting moments (a value per even order).
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    pub fn disco_limits(d: usize, orders: &[usize]) -> Result<Self> {
        let rows = orders
            .iter()
            .map(|&two_k| {
                Ok(MomentRow {
                    two_k,
                    exact: limit_moment_disco(d, two_k)?,
                    provenance: Provenance::ExactEnumeration,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentTable { rows })
    }

    pub fn semicircular(orders: &[usize]) -> Self {
        let rows = orders
            .iter()
            .map(|&two_k| MomentRow {
                two_k,
                exact: if two_k % 2 == 0 {
                    BigRational::from_integer(catalan(two_k / 2))
                } else {
                    BigRational::zero()
                },
                provenance: Provenance::ClosedForm,
            })
            .collect();
        MomentTable { rows }
    }

    pub fn gaussian(orders: &[usize]) -> Self {
        let rows = orders
            .iter()
            .map(|&two_k| MomentRow {
                two_k,
                exact: BigRational::from_integer(gaussian_moment(two_k)),
                provenance: Provenance::ClosedForm,
            })
            .collect();
        MomentTable { rows }
    }
}
