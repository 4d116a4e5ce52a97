//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by the implicit-shift QL iteration, eigenvalues only. O(n^3) with full
//! dense storage, adequate for the orders used here (up to ~2^13).

use crate::error::{Error, Result};
use crate::matrix::{Entry, SymmetricMatrix};

const MAX_QL_SWEEPS: usize = 50;

/// All n eigenvalues with multiplicity, sorted ascending.
pub fn eigenvalues_sym(m: &SymmetricMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.order();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        a.extend_from_slice(m.row(i));
    }
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    ql_implicit(&mut d, &mut e, n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Reduces the full symmetric matrix to tridiagonal form by a sequence of
/// Householder reflections, returning (diagonal, subdiagonal). `a` is
/// consumed as scratch. Both triangles are kept in sync so the reflector
/// application works on contiguous rows.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0f64; n];
    let mut p = vec![0.0f64; n];

    for i in (1..n).rev() {
        let l = i - 1;
        if l == 0 {
            e[i] = a[i * n];
            continue;
        }
        let scale: f64 = a[i * n..i * n + i].iter().map(|x| x.abs()).sum();
        if scale == 0.0 {
            e[i] = a[i * n + l];
            continue;
        }
        // v lives in row i's leading prefix; h = v.v / 2 after the sign flip.
        let mut h = 0.0;
        for k in 0..i {
            a[i * n + k] /= scale;
            h += a[i * n + k] * a[i * n + k];
        }
        let f = a[i * n + l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l] = f - g;

        // p = A v / h over the leading i x i block, then q = p - (v.p / 2h) v.
        let (vrow, rest) = a.split_at_mut(i * n);
        let v = &rest[..i];
        let mut vp = 0.0;
        for j in 0..i {
            let pj = f64::dot(&vrow[j * n..j * n + i], v) / h;
            p[j] = pj;
            vp += pj * v[j];
        }
        let hh = vp / (h + h);
        for j in 0..i {
            p[j] -= hh * v[j];
        }
        // A := A - v q^T - q v^T on the full leading block (both triangles).
        for j in 0..i {
            let vj = v[j];
            let qj = p[j];
            let row = &mut vrow[j * n..j * n + i];
            for k in 0..i {
                row[k] -= vj * p[k] + qj * v[k];
            }
        }
    }

    let mut d = vec![0.0f64; n];
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Implicit-shift QL on the tridiagonal (d, e); e[i] couples d[i-1] and d[i]
/// on entry and is consumed. Eigenvalues land in d, unsorted.
fn ql_implicit(d: &mut [f64], e: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::Numerical(format!(
                    "QL iteration failed to converge at index {l} of order {n}"
                )));
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate and retry the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
