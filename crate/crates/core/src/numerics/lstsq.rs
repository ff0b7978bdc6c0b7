use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense `N x K` complex matrix stored row-major (one row per output sample).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DesignMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `X * h`.
    pub fn mul_vec(&self, h: &[Complex64]) -> Result<Vec<Complex64>> {
        if h.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                h.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(h).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `X^H * v`.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, vr) in v.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.row(r)) {
                *o += x.conj() * vr;
            }
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

fn check_dims(x: &DesignMatrix, t: &[Complex64]) -> Result<()> {
    if t.len() != x.rows {
        return Err(Error::DimensionMismatch(format!(
            "target length {} but design matrix has {} rows",
            t.len(),
            x.rows
        )));
    }
    if x.rows < x.cols || x.cols == 0 {
        return Err(Error::DimensionMismatch(format!(
            "least squares needs rows >= cols > 0, got {}x{}",
            x.rows, x.cols
        )));
    }
    Ok(())
}

/// Minimises `||t - X h||^2` through a Householder QR factorisation.
///
/// The numerical rank is taken from the singular values of `R` (which equal
/// those of `X`): values below `eps * N * sigma_max` count as zero, and any
/// shortfall is reported as [`Error::RankDeficient`].
pub fn solve_least_squares(x: &DesignMatrix, t: &[Complex64]) -> Result<Vec<Complex64>> {
    check_dims(x, t)?;
    let k = x.cols;
    let qr = x.to_nalgebra().qr();
    let r = qr.r();
    let sv = r.singular_values();
    let sigma_max = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
    let tol = f64::EPSILON * x.rows as f64 * sigma_max;
    let rank = sv.iter().filter(|&&s| s > tol).count();
    if rank < k || sigma_max == 0.0 {
        return Err(Error::RankDeficient { rank, cols: k });
    }
    let q = qr.q();
    let qt = q.ad_mul(&DVector::from_column_slice(t));
    let h = r
        .solve_upper_triangular(&qt)
        .ok_or(Error::RankDeficient { rank, cols: k })?;
    Ok(h.iter().copied().collect())
}

/// Literal `(X^H X)^{-1} X^H t`. Squares the condition number; kept as an
/// independent reference for the QR path.
pub fn solve_normal_equations(x: &DesignMatrix, t: &[Complex64]) -> Result<Vec<Complex64>> {
    check_dims(x, t)?;
    let xm = x.to_nalgebra();
    let gram = xm.ad_mul(&xm);
    let rhs = xm.ad_mul(&DVector::from_column_slice(t));
    let inv = gram.try_inverse().ok_or(Error::RankDeficient {
        rank: 0,
        cols: x.cols,
    })?;
    Ok((inv * rhs).iter().copied().collect())
}
