//! Dense complex LU factorization with partial pivoting.

use crate::error::{Error, Result};
use crate::specialfn::Complex;

/// `P A = L U` stored in place, row-major.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    lu: Vec<Complex>,
    perm: Vec<usize>,
}

impl LuFactorization {
    /// Factorizes the row-major `n × n` matrix `a`.
    pub fn new(n: usize, mut a: Vec<Complex>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Usage(format!(
                "matrix storage has {} entries, expected {}",
                a.len(),
                n * n
            )));
        }
        let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tiny = scale * f64::EPSILON * n as f64;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs.is_nan() || pivot_abs <= tiny {
                return Err(Error::Numerical(format!(
                    "matrix is singular to working precision (pivot {k} of {n})"
                )));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv = pivot_row[k].inv();
            for row in tail.chunks_exact_mut(n) {
                let l = row[k] * inv;
                row[k] = l;
                if l.re == 0.0 && l.im == 0.0 {
                    continue;
                }
                for (r, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *r -= l * u;
                }
            }
        }
        Ok(LuFactorization { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[Complex]) -> Result<Vec<Complex>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Usage(format!(
                "right-hand side has {} entries, expected {n}",
                b.len()
            )));
        }
        let mut x: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: Complex = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}
