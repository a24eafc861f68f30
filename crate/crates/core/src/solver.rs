//! Linear solvers: Jacobi-preconditioned CG and BiCGSTAB, plus dense LU.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Relative asymmetry accepted as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Largest system the dense LU path accepts.
pub const DENSE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Cg,
    /// Nonsymmetric Krylov iteration (BiCGSTAB).
    Nonsym,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub method: Method,
    /// Relative residual target `||b - Ax|| / ||b||`.
    pub tol: f64,
    /// Defaults to `10 n + 100`.
    pub max_iter: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            tol: 1e-10,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Recomputed `||b - Ax|| / ||b||`.
    pub residual: f64,
    pub method: Method,
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.mul(x);
    b.iter().zip(ax).map(|(bi, ai)| bi - ai).collect()
}

fn check_dims(a: &CsrMatrix, b: &[f64]) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::Dimension(format!(
            "matrix {}x{} with right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    Ok(())
}

fn jacobi(a: &CsrMatrix) -> Vec<f64> {
    a.diagonal()
        .into_iter()
        .map(|d| if d != 0.0 { 1.0 / d } else { 1.0 })
        .collect()
}

fn trivial(b: &[f64], method: Method) -> Option<SolveReport> {
    (norm(b) == 0.0).then(|| SolveReport {
        solution: vec![0.0; b.len()],
        iterations: 0,
        residual: 0.0,
        method,
        history: vec![0.0],
    })
}

/// Solves `Ax = b`.
///
/// `symmetric` is the caller's claim about the matrix; auto mode uses CG only
/// when that claim also passes a numeric check.
pub fn solve(a: &CsrMatrix, b: &[f64], options: &SolverOptions, symmetric: bool) -> Result<SolveReport> {
    check_dims(a, b)?;
    let max_iter = options.max_iter.unwrap_or(10 * b.len() + 100);
    match options.method {
        Method::Auto => {
            if symmetric && a.is_symmetric(SYMMETRY_TOL) {
                cg(a, b, options.tol, max_iter)
            } else {
                bicgstab(a, b, options.tol, max_iter)
            }
        }
        Method::Cg => {
            let asym = a.asymmetry();
            if asym > SYMMETRY_TOL * a.max_abs() {
                return Err(Error::NotSymmetric { asymmetry: asym });
            }
            cg(a, b, options.tol, max_iter)
        }
        Method::Nonsym => bicgstab(a, b, options.tol, max_iter),
        Method::Direct => direct(a, b),
    }
}

/// Jacobi-preconditioned conjugate gradients.
pub fn cg(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<SolveReport> {
    check_dims(a, b)?;
    if let Some(r) = trivial(b, Method::Cg) {
        return Ok(r);
    }
    let n = b.len();
    let bnorm = norm(b);
    let minv = jacobi(a);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&minv).map(|(r, m)| r * m).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut history = vec![1.0];
    let mut it = 0;
    while it < max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::Breakdown {
                method: "cg",
                iteration: it,
                history,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        it += 1;
        let rel = norm(&r) / bnorm;
        history.push(rel);
        if rel <= tol {
            // confirm with the true residual, restart from it if it drifted
            r = residual(a, &x, b);
            let true_rel = norm(&r) / bnorm;
            if true_rel <= tol {
                return Ok(SolveReport {
                    solution: x,
                    iterations: it,
                    residual: true_rel,
                    method: Method::Cg,
                    history,
                });
            }
            z = r.iter().zip(&minv).map(|(r, m)| r * m).collect();
            p.clone_from(&z);
            rz = dot(&r, &z);
            continue;
        }
        for i in 0..n {
            z[i] = r[i] * minv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let residual = norm(&residual(a, &x, b)) / bnorm;
    Err(Error::NonConvergence {
        method: "cg",
        iterations: it,
        residual,
        history,
    })
}

/// Right Jacobi-preconditioned BiCGSTAB.
pub fn bicgstab(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<SolveReport> {
    check_dims(a, b)?;
    if let Some(r) = trivial(b, Method::Nonsym) {
        return Ok(r);
    }
    let n = b.len();
    let bnorm = norm(b);
    let minv = jacobi(a);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut history = vec![1.0];
    let mut it = 0;
    let breakdown = |it: usize, history: Vec<f64>| Error::Breakdown {
        method: "bicgstab",
        iteration: it,
        history,
    };
    while it < max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(breakdown(it, history));
        }
        if it == 0 {
            p.clone_from(&r);
        } else {
            let beta = (rho_new / rho) * (alpha / omega);
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
        }
        rho = rho_new;
        for i in 0..n {
            y[i] = minv[i] * p[i];
        }
        a.matvec(&y, &mut v);
        let r0v = dot(&r0, &v);
        if r0v == 0.0 || !r0v.is_finite() {
            return Err(breakdown(it, history));
        }
        alpha = rho / r0v;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        it += 1;
        if norm(&s) / bnorm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
        } else {
            for i in 0..n {
                z[i] = minv[i] * s[i];
            }
            a.matvec(&z, &mut t);
            let tt = dot(&t, &t);
            if tt == 0.0 {
                return Err(breakdown(it, history));
            }
            omega = dot(&t, &s) / tt;
            for i in 0..n {
                x[i] += alpha * y[i] + omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
        }
        let rel_est = if norm(&s) / bnorm <= tol {
            norm(&s) / bnorm
        } else {
            norm(&r) / bnorm
        };
        history.push(rel_est);
        if rel_est <= tol {
            r = residual(a, &x, b);
            let true_rel = norm(&r) / bnorm;
            if true_rel <= tol {
                return Ok(SolveReport {
                    solution: x,
                    iterations: it,
                    residual: true_rel,
                    method: Method::Nonsym,
                    history,
                });
            }
            // restart with a fresh shadow residual
            r0.clone_from(&r);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            v.iter_mut().for_each(|e| *e = 0.0);
            p.iter_mut().for_each(|e| *e = 0.0);
            continue;
        }
        if omega == 0.0 {
            return Err(breakdown(it, history));
        }
    }
    let residual = norm(&residual(a, &x, b)) / bnorm;
    Err(Error::NonConvergence {
        method: "bicgstab",
        iterations: it,
        residual,
        history,
    })
}

/// Dense LU with partial pivoting.
pub fn direct(a: &CsrMatrix, b: &[f64]) -> Result<SolveReport> {
    check_dims(a, b)?;
    let n = b.len();
    if n > DENSE_LIMIT {
        return Err(Error::Direct(format!(
            "{n} unknowns exceed the dense limit {DENSE_LIMIT}"
        )));
    }
    let mut m = a.to_dense();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return Err(Error::Direct(format!("singular matrix at column {col}")));
        }
        m.swap(col, piv);
        x.swap(col, piv);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (r, row) in lower.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for c in col..n {
                    row[c] -= f * pivot_row[c];
                }
                x[col + 1 + r] -= f * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        let s: f64 = (col + 1..n).map(|k| m[col][k] * x[k]).sum();
        x[col] = (x[col] - s) / m[col][col];
    }
    let bnorm = norm(b);
    let res = if bnorm == 0.0 {
        0.0
    } else {
        norm(&residual(a, &x, b)) / bnorm
    };
    Ok(SolveReport {
        solution: x,
        iterations: 1,
        residual: res,
        method: Method::Direct,
        history: vec![res],
    })
}
