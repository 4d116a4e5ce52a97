//! Dense real symmetric matrices over exact integers or floats.
//!
//! Symmetry is structural: every constructor and operation writes both
//! triangles from a single source value, so `get(i, j) == get(j, i)` is
//! bit-exact by construction and no public path can break it.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Scalar kinds the matrix layer supports. `dot` is part of the trait so the
/// float kind can use a multi-accumulator kernel; exact integers keep the
/// straightforward fold.
pub trait Entry:
    Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn dot(a: &[Self], b: &[Self]) -> Self;
}

impl Entry for BigInt {
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let mut acc = BigInt::zero();
        for (x, y) in a.iter().zip(b) {
            acc += x * y;
        }
        acc
    }
}

impl Entry for f64 {
    fn dot(a: &[Self], b: &[Self]) -> Self {
        // Eight independent accumulators hide FP add latency; the tail is
        // folded in scalar. Summation order is fixed, so results are
        // reproducible bit-for-bit.
        let mut acc = [0.0f64; 8];
        let chunks = a.len() / 8;
        for c in 0..chunks {
            let base = c * 8;
            for l in 0..8 {
                acc[l] += a[base + l] * b[base + l];
            }
        }
        let mut tail = 0.0;
        for k in chunks * 8..a.len() {
            tail += a[k] * b[k];
        }
        (((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))) + tail
    }
}

/// Order-n real symmetric matrix in full row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    a: Vec<T>,
}

/// Rows of the product are computed against blocks of this many rows of the
/// left factor so each right-factor row is streamed once per block instead of
/// once per output row.
const PRODUCT_BLOCK: usize = 8;

impl<T: Entry> SymmetricMatrix<T> {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("matrix order must be at least 1".into()));
        }
        Ok(SymmetricMatrix {
            n,
            a: vec![T::zero(); n * n],
        })
    }

    /// Builds from a generator called once per unordered index pair (i <= j);
    /// the value is mirrored into both triangles.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.a[i * n + j] = v.clone();
                m.a[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// Builds from explicit rows, validating squareness and symmetry.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config("rows must form a non-empty square".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Config(format!(
                        "asymmetric input at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymmetricMatrix {
            n,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    /// Sets entry (i, j) and its mirror.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i * self.n + j] = v.clone();
        self.a[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Config(format!(
                "order mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(SymmetricMatrix {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| f(x.clone(), y.clone()))
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        SymmetricMatrix {
            n: self.n,
            a: self.a.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.n {
            t = t + self.a[i * self.n + i].clone();
        }
        t
    }

    /// Entrywise (Frobenius) inner product. For symmetric x, y this equals
    /// Tr(x y), since (x y)_{ii} = sum_j x_{ij} y_{ji} = sum_j x_{ij} y_{ij}.
    pub fn frobenius_dot(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::Config(format!(
                "order mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(T::dot(&self.a, &other.a))
    }

    /// Product of two commuting symmetric matrices (e.g. powers of one
    /// matrix). Commutativity makes the result symmetric, so only the upper
    /// triangle is computed and mirrored.
    fn product_commuting(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = SymmetricMatrix {
            n,
            a: vec![T::zero(); n * n],
        };
        let mut i0 = 0;
        while i0 < n {
            let i1 = (i0 + PRODUCT_BLOCK).min(n);
            // (x y)_{ij} = x_row_i . y_col_j = x_row_i . y_row_j since y is
            // symmetric; row_j is loaded once and reused across the i-block.
            for j in i0..n {
                let rj = other.row(j);
                for i in i0..i1.min(j + 1) {
                    let v = T::dot(self.row(i), rj);
                    out.a[i * n + j] = v.clone();
                    out.a[j * n + i] = v;
                }
            }
            i0 = i1;
        }
        out
    }

    /// Consecutive powers M^1 .. M^up_to.
    pub fn powers(&self, up_to: usize) -> Vec<Self> {
        let mut ps: Vec<Self> = Vec::with_capacity(up_to);
        for i in 0..up_to {
            let next = if i == 0 {
                self.clone()
            } else {
                ps[i - 1].product_commuting(self)
            };
            ps.push(next);
        }
        ps
    }

    /// Tr(M^k), exact for integer entries. Uses Tr(M^k) = <M^a, M^b>_F with
    /// a = ceil(k/2), b = floor(k/2), so only k/2 multiplications are needed.
    pub fn trace_power(&self, k: usize) -> Result<T> {
        if k == 0 {
            return Err(Error::Config("trace_power requires k >= 1".into()));
        }
        if k == 1 {
            return Ok(self.trace());
        }
        let hi = k.div_ceil(2);
        let lo = k - hi;
        let ps = self.powers(hi);
        ps[hi - 1].frobenius_dot(&ps[lo - 1])
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> SymmetricMatrix<U> {
        SymmetricMatrix {
            n: self.n,
            a: self.a.iter().map(f).collect(),
        }
    }
}

impl SymmetricMatrix<BigInt> {
    /// Float view for the eigensolver; entries must fit f64 exactly at the
    /// scales used here (|entry| well below 2^53).
    pub fn to_float(&self) -> SymmetricMatrix<f64> {
        self.map(|v| v.to_f64().expect("integer entry out of f64 range"))
    }
}
