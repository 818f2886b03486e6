//! Small dense complex matrices, used as the brute-force oracle behind the
//! symbolic stabilizer composition and the operator-identity checks.
//! Dimensions stay at or below 2^5, so naive cubic products are fine.

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub(crate) struct Mat {
    pub dim: usize,
    /// Row-major.
    pub a: Vec<Complex64>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            a: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    // Used by test oracles only.
    #[allow(dead_code)]
    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.a[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.a[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let v = self.at(r, k);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.a[r * d + c] += v * other.at(k, c);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat {
            dim: self.dim,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        Mat {
            dim: self.dim,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Pauli X on qubit k of an n-qubit register: the permutation x -> x^bit.
    pub fn x_gate(n: usize, k: usize) -> Mat {
        let dim = 1 << n;
        let bit = 1usize << k;
        let mut m = Mat::zeros(dim);
        for x in 0..dim {
            m.set(x ^ bit, x, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// X on every qubit of `mask`.
    pub fn x_mask_gate(n: usize, mask: u32) -> Mat {
        let dim = 1 << n;
        let mut m = Mat::zeros(dim);
        for x in 0..dim {
            m.set(x ^ mask as usize, x, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Controlled-phase gate C_e; the empty edge is the scalar -1.
    pub fn ce_gate(n: usize, e: u32) -> Mat {
        let dim = 1 << n;
        let mut m = Mat::zeros(dim);
        for x in 0..dim {
            let v = if x as u32 & e == e { -1.0 } else { 1.0 };
            m.set(x, x, Complex64::new(v, 0.0));
        }
        m
    }
}
