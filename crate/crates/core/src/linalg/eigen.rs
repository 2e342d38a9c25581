//! Eigenvalues of dense real matrices.
//!
//! Nonsymmetric input goes through balancing (permutation isolation plus
//! power-of-two scaling), Householder reduction to upper Hessenberg form and
//! the Francis implicit double-shift QR iteration. Symmetric input uses the
//! cyclic Jacobi method, which keeps every eigenvalue exactly real.

use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::SpectralError;

/// QR sweeps allowed per row of the active matrix, shared by all its
/// eigenvalues (at least ten rows are always budgeted).
pub const MAX_QR_ITERATIONS: usize = 30;
const EXCEPTIONAL_SHIFT_EVERY: usize = 10;
const MAX_JACOBI_SWEEPS: usize = 100;
const RADIX: f64 = 2.0;

/// All eigenvalues of a square real matrix, unordered.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.order();
    if n == 0 {
        return Err(SpectralError::EmptyMatrix);
    }
    if a.is_symmetric() {
        return Ok(symmetric_eigenvalues(a)
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect());
    }

    let mut work = a.clone();
    let (lo, hi) = balance(&mut work);
    let mut values: Vec<Complex64> = (0..lo)
        .chain(hi..n)
        .map(|i| Complex64::new(work[(i, i)], 0.0))
        .collect();
    if hi > lo {
        let active: Vec<usize> = (lo..hi).collect();
        let mut block = work.principal_submatrix(&active);
        hessenberg(&mut block);
        let inner = hessenberg_qr(block).map_err(|e| match e {
            SpectralError::NoConvergence {
                order,
                row,
                iterations,
                ..
            } => SpectralError::NoConvergence {
                n,
                order,
                row: row + lo,
                iterations,
                frobenius: a.frobenius_norm(),
            },
            other => other,
        })?;
        values.extend(inner);
    }
    Ok(values)
}

/// Balances `a` in place by a permutation and diagonal similarity.
///
/// Returns `(lo, hi)`: rows and columns outside `lo..hi` hold isolated
/// eigenvalues on the diagonal and the matrix is block upper triangular
/// around the active window `lo..hi`.
pub fn balance(a: &mut DenseMatrix) -> (usize, usize) {
    let n = a.order();
    let mut hi = n;
    // push rows with no off-diagonal entries inside the window to the bottom
    while let Some(j) = (0..hi).rev().find(|&j| (0..hi).all(|i| i == j || a[(j, i)] == 0.0)) {
        a.swap_rows(j, hi - 1);
        a.swap_cols(j, hi - 1);
        hi -= 1;
    }
    let mut lo = 0;
    // pull columns with no off-diagonal entries inside the window to the top
    while let Some(j) = (lo..hi).find(|&j| (lo..hi).all(|i| i == j || a[(i, j)] == 0.0)) {
        a.swap_rows(j, lo);
        a.swap_cols(j, lo);
        lo += 1;
    }

    let sqrdx = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in lo..hi {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in lo..hi {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
    (lo, hi)
}

/// Householder reduction to upper Hessenberg form, in place.
pub fn hessenberg(h: &mut DenseMatrix) {
    let n = h.order();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    for m in 1..n - 1 {
        let scale: f64 = (m..n).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..n).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let f = (m..n).map(|i| ort[i] * h[(i, j)]).sum::<f64>() / hh;
            for i in m..n {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..n {
            let f = (m..n).map(|j| ort[j] * h[(i, j)]).sum::<f64>() / hh;
            for j in m..n {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in m + 1..n {
            h[(i, m - 1)] = 0.0;
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration with small-subdiagonal deflation.
pub fn hessenberg_qr(mut a: DenseMatrix) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.order();
    if n == 0 {
        return Err(SpectralError::EmptyMatrix);
    }
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let budget = MAX_QR_ITERATIONS * n.max(10);
    let mut total = 0;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l >= 1 {
                let sub = a[(l, l - 1)].abs();
                if sub <= f64::MIN_POSITIVE {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    if l >= 2 {
                        s += a[(l - 1, l - 2)].abs();
                    }
                    if l < nu {
                        s += a[(l + 1, l)].abs();
                    }
                }
                if sub <= f64::EPSILON * s {
                    // Ahues-Tisseur refinement: only deflate when the
                    // subdiagonal is also negligible against its 2x2 window
                    let sup = a[(l - 1, l)].abs();
                    let (ab, ba) = (sub.max(sup), sub.min(sup));
                    let gap = (a[(l - 1, l - 1)] - a[(l, l)]).abs();
                    let (aa, bb) = (a[(l, l)].abs().max(gap), a[(l, l)].abs().min(gap));
                    let window = aa + ab;
                    if ba * (ab / window)
                        <= f64::MIN_POSITIVE.max(f64::EPSILON * (bb * (aa / window)))
                    {
                        a[(l, l - 1)] = 0.0;
                        break;
                    }
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)];
            let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                nn -= 2;
                break;
            }

            if total == budget {
                return Err(SpectralError::NoConvergence {
                    n,
                    order: n,
                    row: nu,
                    iterations: total,
                    frobenius: a.frobenius_norm(),
                });
            }
            if its > 0 && its % EXCEPTIONAL_SHIFT_EVERY == 0 {
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                // alternate between the bottom and the top of the window
                let s = if (its / EXCEPTIONAL_SHIFT_EVERY) % 2 == 1 || l + 2 > nu {
                    a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs()
                } else {
                    a[(l + 1, l)].abs() + a[(l + 2, l + 1)].abs()
                };
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;

            // form the shift and look for two consecutive small subdiagonals
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - rr - ss;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=nn and columns m..=nn
            for k in m..nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k != nu - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != nu - 1 {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * z;
                    }
                    a[(k + 1, j)] -= pp * y;
                    a[(k, j)] -= pp * x;
                }
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k != nu - 1 {
                        pp += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Vec<f64> {
    let n = a.order();
    let mut w = a.clone();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| w[(p, q)] * w[(p, q)])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
                let t = 1.0f64.copysign(theta) / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                w[(p, p)] -= t * apq;
                w[(q, q)] += t * apq;
                w[(p, q)] = 0.0;
                w[(q, p)] = 0.0;
                for k in (0..n).filter(|&k| k != p && k != q) {
                    let (kp, kq) = (w[(k, p)], w[(k, q)]);
                    let new_p = kp - s * (kq + tau * kp);
                    let new_q = kq + s * (kp - tau * kq);
                    w[(k, p)] = new_p;
                    w[(p, k)] = new_p;
                    w[(k, q)] = new_q;
                    w[(q, k)] = new_q;
                }
            }
        }
    }
    (0..n).map(|i| w[(i, i)]).collect()
}

/// Residual `||A v - lambda v|| / ||v||` of an approximate eigenvector found
/// by inverse iteration at a point `1e-12 ||A||_F` away from `lambda`.
///
/// The offset keeps the shifted matrix nonsingular on exact defective
/// eigenvalues, where lifting zero pivots alone makes the iteration cycle.
pub fn eigenpair_residual(a: &DenseMatrix, lambda: Complex64) -> f64 {
    let n = a.order();
    if n == 0 {
        return 0.0;
    }
    let norm = a.frobenius_norm().max(1.0);
    let floor = f64::EPSILON * norm;
    let shift = lambda + Complex64::new(0.6, 0.8) * (1e-12 * norm);

    // LU of (A - shift I) with partial pivoting, tiny pivots lifted to `floor`
    let mut lu: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let d = if i == j {
                shift
            } else {
                Complex64::new(0.0, 0.0)
            };
            Complex64::new(a[(i, j)], 0.0) - d
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&x, &y| lu[x * n + k].norm().total_cmp(&lu[y * n + k].norm()))
            .expect("non-empty range");
        if pivot_row != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot_row * n + j);
            }
            perm.swap(k, pivot_row);
        }
        if lu[k * n + k].norm() < floor {
            lu[k * n + k] = Complex64::new(floor, 0.0);
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let factor = lu[i * n + k] / pivot;
            lu[i * n + k] = factor;
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= factor * u;
            }
        }
    }
    let solve = |b: &[Complex64]| -> Vec<Complex64> {
        let mut y: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = lu[i * n + j];
                let yj = y[j];
                y[i] -= l * yj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = lu[i * n + j];
                let yj = y[j];
                y[i] -= u * yj;
            }
            y[i] /= lu[i * n + i];
        }
        y
    };
    let normalize = |v: &mut Vec<Complex64>| {
        let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if s > 0.0 {
            v.iter_mut().for_each(|z| *z /= s);
        }
    };

    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0, (i as f64 + 1.0) / (n as f64 + 1.0)))
        .collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = solve(&v);
        normalize(&mut v);
    }

    let mut r2 = 0.0;
    for i in 0..n {
        let mut acc = -lambda * v[i];
        for j in 0..n {
            acc += a[(i, j)] * v[j];
        }
        r2 += acc.norm_sqr();
    }
    r2.sqrt()
}
