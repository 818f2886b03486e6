//! Dense state vectors, single-qubit gates, the Walsh-Hadamard transform,
//! and support statistics of the boolean function behind a hypergraph state.
//!
//! Amplitude indexing: the computational basis string x occupies the bits
//! of the integer index, bit i holding x_{i+1} (vertex i of the hypergraph).
//! A freshly built hypergraph state has every amplitude equal to
//! `sign * (-1)^f(x) * 2^(-n/2)` where f XORs one monomial per edge.

use crate::hypergraph::{EdgeMask, Hypergraph};
use crate::{Error, Result};
use num_complex::Complex64;

/// Exact-equality tolerance for dyadic amplitude arithmetic.
pub const EPS_EQ: f64 = 1e-12;
/// Unitarity tolerance for accepted 2x2 matrices.
pub const EPS_UNITARY: f64 = 1e-10;

/// Dense n-qubit state, 2^n complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Hard cap for dense state construction.
pub const DENSE_CAP: usize = 7;

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(amps.len(), 1 << n));
        }
        Ok(StateVector { n, amps })
    }

    /// |0...0>.
    pub fn computational(n: usize, x: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n == other.n
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global phase: compares after aligning the phase of
    /// the largest-magnitude amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let k = (0..self.amps.len())
            .max_by(|&a, &b| {
                self.amps[a]
                    .norm_sqr()
                    .partial_cmp(&self.amps[b].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if self.amps[k].norm() < tol || other.amps[k].norm() < tol {
            return false;
        }
        let phase = self.amps[k] / other.amps[k];
        let phase = phase / Complex64::new(phase.norm(), 0.0);
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a - b * phase).norm() <= tol)
    }
}

/// f(x) for the hypergraph's boolean function: XOR over edges of the
/// monomial "all vertices of e set in x". The empty-edge product is 1,
/// so a negative global sign contributes a constant 1 term.
pub fn boolean_f(h: &Hypergraph, x: usize) -> u8 {
    let mut f = if h.sign() == -1 { 1u8 } else { 0u8 };
    for &e in h.edges() {
        if x as u32 & e == e {
            f ^= 1;
        }
    }
    f
}

/// Builds the hypergraph state, amplitude `(-1)^f(x) * 2^(-n/2)`.
/// Identical to applying every controlled-phase gate to |+>^n.
pub fn build_state(h: &Hypergraph) -> Result<StateVector> {
    let n = h.n();
    if n > DENSE_CAP {
        return Err(Error::DenseCap { n, cap: DENSE_CAP });
    }
    let scale = (1u64 << n) as f64;
    let amp = 1.0 / scale.sqrt();
    let amps = (0..1usize << n)
        .map(|x| {
            if boolean_f(h, x) == 1 {
                Complex64::new(-amp, 0.0)
            } else {
                Complex64::new(amp, 0.0)
            }
        })
        .collect();
    Ok(StateVector { n, amps })
}

/// Controlled-phase gate on the vertices of `e`: negates amplitudes whose
/// index has every bit of `e` set. The empty edge is the global sign -1.
pub fn apply_ce(s: &StateVector, e: EdgeMask) -> StateVector {
    let mut out = s.clone();
    for (x, a) in out.amps.iter_mut().enumerate() {
        if x as u32 & e == e {
            *a = -*a;
        }
    }
    out
}

/// A 2x2 unitary, checked on construction.
#[derive(Clone, Copy, Debug)]
pub struct LocalUnitary {
    pub m: [[Complex64; 2]; 2],
}

impl LocalUnitary {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        // U U^dagger = 1
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    s += m[r][k] * m[c][k].conj();
                }
                let want = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((s - want).norm());
            }
        }
        if dev > EPS_UNITARY {
            return Err(Error::NotUnitary(dev));
        }
        Ok(LocalUnitary { m })
    }

    pub fn identity() -> Self {
        LocalUnitary {
            m: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        }
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        LocalUnitary {
            m: [
                [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ],
        }
    }

    pub fn pauli_x() -> Self {
        LocalUnitary {
            m: [
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ],
        }
    }

    pub fn pauli_y() -> Self {
        LocalUnitary {
            m: [
                [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            ],
        }
    }

    pub fn pauli_z() -> Self {
        LocalUnitary {
            m: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
            ],
        }
    }

    /// diag(1, e^{i alpha}).
    pub fn z_rotation(alpha: f64) -> Self {
        LocalUnitary {
            m: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, alpha)],
            ],
        }
    }

    pub fn dagger(&self) -> Self {
        LocalUnitary {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    pub fn mul(&self, other: &LocalUnitary) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    m[r][c] += self.m[r][k] * other.m[k][c];
                }
            }
        }
        LocalUnitary { m }
    }
}

/// Applies a single-qubit unitary on qubit `k`.
pub fn apply_local(s: &StateVector, k: usize, u: &LocalUnitary) -> Result<StateVector> {
    if k >= s.n {
        return Err(Error::IndexOutOfRange { index: k, n: s.n });
    }
    let bit = 1usize << k;
    let mut amps = s.amps.clone();
    for x in 0..amps.len() {
        if x & bit == 0 {
            let a0 = amps[x];
            let a1 = amps[x | bit];
            amps[x] = u.m[0][0] * a0 + u.m[0][1] * a1;
            amps[x | bit] = u.m[1][0] * a0 + u.m[1][1] * a1;
        }
    }
    Ok(StateVector { n: s.n, amps })
}

/// Walsh-Hadamard transform with the 2^(-n) normalization:
/// `out[w] = 2^(-n) * sum_x d[x] * (-1)^(popcount(x & w))`.
/// Applying it twice and scaling by 2^n recovers the input.
pub fn walsh_transform(d: &[f64]) -> Result<Vec<f64>> {
    let len = d.len();
    if !len.is_power_of_two() {
        return Err(Error::Invalid(format!(
            "walsh_transform needs a power-of-two length, got {len}"
        )));
    }
    let mut v = d.to_vec();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / len as f64;
    for x in &mut v {
        *x *= scale;
    }
    Ok(v)
}

/// Support statistics of f and its Hadamard transform.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportStats {
    /// |supp(f)| over all 2^n inputs (edge monomials only, sign excluded:
    /// the global sign never changes any reduced state).
    pub f_support: usize,
    /// Degree of f, the maximal edge cardinality.
    pub degree: usize,
    /// |supp(fhat_pm)| for the transform of the +-1 amplitude signs.
    pub supp_fpm: usize,
    /// Per qubit i, |supp(f^(i))| over the other n-1 qubits, where f^(i)
    /// XORs the link monomials of vertex i.
    pub f_i: Vec<usize>,
    /// Off-diagonal of the single-qubit reduced state:
    /// (2^(n-1) - 2 F_i) / 2^n.
    pub offdiag_i: Vec<f64>,
}

/// Computes [`SupportStats`] by direct sweeps; no dense amplitudes needed.
pub fn support_stats(h: &Hypergraph) -> Result<SupportStats> {
    let n = h.n();
    if n > 16 {
        return Err(Error::BadVertexCount(n));
    }
    let stripped_sign = {
        // f from edges only.
        let mut g = h.clone();
        if g.sign() == -1 {
            g.toggle_edge(0);
        }
        g
    };
    let size = 1usize << n;
    let mut f_support = 0usize;
    let mut signs = vec![0.0f64; size];
    for x in 0..size {
        let f = boolean_f(&stripped_sign, x);
        if f == 1 {
            f_support += 1;
        }
        signs[x] = if f == 1 { -1.0 } else { 1.0 };
    }
    let fhat = walsh_transform(&signs)?;
    let supp_fpm = fhat.iter().filter(|&&c| c.abs() > EPS_EQ).count();
    let degree = h.structure().max_cardinality;

    let mut f_i = Vec::with_capacity(n);
    let mut offdiag_i = Vec::with_capacity(n);
    for i in 0..n {
        let link = h.link(i)?;
        let constant = link.contains(&0);
        let monomials: Vec<EdgeMask> = link.iter().copied().filter(|&m| m != 0).collect();
        let bit = 1usize << i;
        let mut count = 0usize;
        for x in 0..size {
            if x & bit != 0 {
                continue;
            }
            let mut f = if constant { 1u8 } else { 0 };
            for &m in &monomials {
                if x as u32 & m == m {
                    f ^= 1;
                }
            }
            count += f as usize;
        }
        f_i.push(count);
        let half = (1usize << (n - 1)) as f64;
        offdiag_i.push((half - 2.0 * count as f64) / size as f64);
    }
    Ok(SupportStats {
        f_support,
        degree,
        supp_fpm,
        f_i,
        offdiag_i,
    })
}

/// <a|b>.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.amps.len(), b.amps.len()));
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}
