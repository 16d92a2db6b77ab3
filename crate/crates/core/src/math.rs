//! Thin wrappers over `libm` so the crate stays `no_std` and bit-reproducible
//! across targets.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
#[inline]
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = 1.0f64.max(abs(a)).max(abs(b));
    abs(a - b) <= tol * scale
}

/// Solves the dense `dim x dim` system `a x = b` (row-major `a`) by Gaussian
/// elimination with partial pivoting. `a` and `b` are overwritten.
pub fn solve_linear(a: &mut [f64], b: &mut [f64], dim: usize) -> crate::Result<alloc::vec::Vec<f64>> {
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&r, &s| abs(a[r * dim + col]).total_cmp(&abs(a[s * dim + col])))
            .expect("non-empty range");
        if abs(a[pivot * dim + col]) < 1e-12 {
            return Err(crate::Error::Numeric("singular linear system"));
        }
        if pivot != col {
            for j in 0..dim {
                a.swap(col * dim + j, pivot * dim + j);
            }
            b.swap(col, pivot);
        }
        let p = a[col * dim + col];
        for r in (col + 1)..dim {
            let f = a[r * dim + col] / p;
            if f == 0.0 {
                continue;
            }
            for j in col..dim {
                a[r * dim + j] -= f * a[col * dim + j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = alloc::vec![0.0; dim];
    for r in (0..dim).rev() {
        let mut s = b[r];
        for j in (r + 1)..dim {
            s -= a[r * dim + j] * x[j];
        }
        x[r] = s / a[r * dim + r];
    }
    Ok(x)
}
