//! Entanglement quantification for pure dense states: reduced states,
//! spectra, Schmidt coefficients, negativities, the biseparable-overlap
//! witness threshold, and the geometric measure.
//!
//! The eigensolver is a cyclic Jacobi iteration on the real symmetric
//! embedding of the hermitian matrix; dimensions stay at or below 128.
//! The geometric measure uses alternating environment-contraction updates
//! (monotone in the overlap) from many seeded random product states.

use crate::hypergraph::Hypergraph;
use crate::rng::SplitMix64;
use crate::statevec::{build_state, StateVector};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Tolerance for hermiticity checks.
pub const EPS_HERMITIAN: f64 = 1e-12;

/// A bipartition of n qubits, stored as the side containing qubit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    mask: u32,
}

impl Bipartition {
    /// Canonicalizes to the side containing qubit 0.
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        let full = ((1u64 << n) - 1) as u32;
        if mask == 0 || mask >= full || mask & !full != 0 {
            return Err(Error::Invalid(format!(
                "bipartition mask {mask:#x} must be a nonempty proper subset of {n} qubits"
            )));
        }
        let mask = if mask & 1 != 0 { mask } else { full & !mask };
        Ok(Bipartition { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn complement(&self) -> u32 {
        (((1u64 << self.n) - 1) as u32) & !self.mask
    }

    /// All 2^(n-1) - 1 canonical bipartitions.
    pub fn all(n: usize) -> Vec<Bipartition> {
        let full = ((1u64 << n) - 1) as u32;
        (1..full)
            .step_by(2)
            .map(|mask| Bipartition { n, mask })
            .collect()
    }
}

/// Hermitian matrix with complex entries, row-major.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(data.len(), dim * dim));
        }
        let mut dev: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                dev = dev.max((data[r * dim + c] - data[c * dim + r].conj()).norm());
            }
        }
        if dev > EPS_HERMITIAN {
            return Err(Error::NotHermitian(dev));
        }
        Ok(HermitianMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i).re).sum()
    }
}

/// Partial trace onto the qubits of `subset` (given as a raw mask, not
/// necessarily the canonical side of a [`Bipartition`]).
pub fn reduced_state_mask(s: &StateVector, subset: u32) -> Result<HermitianMatrix> {
    let n = s.n();
    let full = ((1u64 << n) - 1) as u32;
    if subset == 0 || subset >= full {
        return Err(Error::Invalid(
            "reduction subset must be a nonempty proper subset".into(),
        ));
    }
    let keep: Vec<usize> = (0..n).filter(|i| subset & (1 << i) != 0).collect();
    let env: Vec<usize> = (0..n).filter(|i| subset & (1 << i) == 0).collect();
    let dim = 1usize << keep.len();
    let env_dim = 1usize << env.len();
    let expand = |local: usize, bits: &[usize]| -> usize {
        let mut x = 0usize;
        for (j, &q) in bits.iter().enumerate() {
            if local & (1 << j) != 0 {
                x |= 1 << q;
            }
        }
        x
    };
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for a in 0..dim {
        let xa = expand(a, &keep);
        for b in 0..dim {
            let xb = expand(b, &keep);
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..env_dim {
                let xe = expand(e, &env);
                acc += s.amps()[xa | xe] * s.amps()[xb | xe].conj();
            }
            data[a * dim + b] = acc;
        }
    }
    HermitianMatrix::new(dim, data)
}

/// Partial trace onto the canonical side of the bipartition.
pub fn reduced_state(s: &StateVector, cut: Bipartition) -> Result<HermitianMatrix> {
    reduced_state_mask(s, cut.mask())
}

/// Real spectrum in descending order via cyclic Jacobi on the real
/// symmetric embedding [[X, -Y], [Y, X]] of A = X + iY.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let d = h.dim;
    if d > 128 {
        return Err(Error::Invalid(format!(
            "eigensolver capped at dim 128, got {d}"
        )));
    }
    let m = 2 * d;
    let mut a = vec![0.0f64; m * m];
    for r in 0..d {
        for c in 0..d {
            let v = h.at(r, c);
            a[r * m + c] = v.re;
            a[(r + d) * m + (c + d)] = v.re;
            a[r * m + (c + d)] = -v.im;
            a[(r + d) * m + c] = v.im;
        }
    }
    // Cyclic sweeps until the off-diagonal mass vanishes.
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += a[p * m + q] * a[p * m + q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-18 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // The embedding doubles every eigenvalue.
    Ok(eigs.into_iter().step_by(2).collect())
}

/// Squared Schmidt coefficients across the cut, descending, summing to 1.
pub fn schmidt(s: &StateVector, cut: Bipartition) -> Result<Vec<f64>> {
    // The smaller side keeps the eigenproblem small; both sides share the
    // nonzero spectrum.
    let mask = cut.mask();
    let comp = cut.complement();
    let side = if mask.count_ones() <= comp.count_ones() {
        mask
    } else {
        comp
    };
    let mut eigs = eigenvalues(&reduced_state_mask(s, side)?)?;
    for v in &mut eigs {
        // Numerical zeros must be flushed: sqrt amplifies eigenvalue noise
        // of a rank-deficient reduction into the Schmidt sum.
        if v.abs() < 1e-13 {
            *v = 0.0;
        }
    }
    Ok(eigs)
}

/// Pure-state negativity across the cut:
/// `sum_{i<j} sqrt(lambda_i lambda_j)`.
pub fn negativity(s: &StateVector, cut: Bipartition) -> Result<f64> {
    let lambda = schmidt(s, cut)?;
    let root_sum: f64 = lambda.iter().map(|l| l.max(0.0).sqrt()).sum();
    let sum: f64 = lambda.iter().sum();
    Ok(((root_sum * root_sum) - sum) / 2.0)
}

/// Brute-force negativity: partial transpose of the full density matrix,
/// then the absolute sum of negative eigenvalues. The oracle `negativity`
/// must agree with.
pub fn negativity_partial_transpose(s: &StateVector, cut: Bipartition) -> Result<f64> {
    let n = s.n();
    if n > 5 {
        return Err(Error::DenseCap { n, cap: 5 });
    }
    let dim = 1usize << n;
    let mask = cut.mask() as usize;
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            // Transposed on the cut subsystem: swap the cut bits of r and c.
            let rt = (r & !mask) | (c & mask);
            let ct = (c & !mask) | (r & mask);
            rho[r * dim + c] = s.amps()[rt] * s.amps()[ct].conj();
        }
    }
    let h = HermitianMatrix::new(dim, rho)?;
    Ok(eigenvalues(&h)?
        .into_iter()
        .filter(|&e| e < 0.0)
        .map(f64::abs)
        .sum())
}

/// Minimal bipartite negativity over all canonical bipartitions.
pub fn genuine_negativity(s: &StateVector) -> Result<f64> {
    let mut min = f64::INFINITY;
    for cut in Bipartition::all(s.n()) {
        min = min.min(negativity(s, cut)?);
    }
    Ok(min)
}

/// Maximal squared overlap with pure biseparable states: the largest
/// Schmidt value over all canonical bipartitions.
pub fn biseparable_overlap(s: &StateVector) -> Result<f64> {
    let mut max = 0.0f64;
    for cut in Bipartition::all(s.n()) {
        max = max.max(schmidt(s, cut)?[0]);
    }
    Ok(max)
}

/// Coefficient of the witness `alpha_S * 1 - |H><H|`.
pub fn witness_threshold(h: &Hypergraph) -> Result<f64> {
    biseparable_overlap(&build_state(h)?)
}

/// Configuration for the geometric-measure optimizer.
#[derive(Clone, Copy, Debug)]
pub struct GeoConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for GeoConfig {
    fn default() -> Self {
        GeoConfig {
            restarts: 256,
            max_sweeps: 500,
            tol: 1e-13,
            seed: 1,
        }
    }
}

/// Result of the geometric-measure optimization.
#[derive(Clone, Debug)]
pub struct GeoResult {
    /// `E_G = 1 - max |<phi|s>|^2` over product states `phi`.
    pub value: f64,
    /// The optimizing product state, one phase-fixed 2-vector per qubit
    /// (first nonzero component real positive).
    pub best_product_state: Vec<[Complex64; 2]>,
}

fn random_qubit(rng: &mut SplitMix64) -> [Complex64; 2] {
    let v = [
        Complex64::new(rng.next_gaussian(), rng.next_gaussian()),
        Complex64::new(rng.next_gaussian(), rng.next_gaussian()),
    ];
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / norm, v[1] / norm]
}

/// One multistart: alternating environment-contraction updates. Returns
/// (overlap modulus, product state). Each local update is monotone
/// non-decreasing in the overlap, which is asserted per sweep.
fn geometric_single_start(s: &StateVector, cfg: &GeoConfig, start: u64) -> (f64, Vec<[Complex64; 2]>) {
    let n = s.n();
    let mut rng = SplitMix64::stream(cfg.seed, start);
    let mut phi: Vec<[Complex64; 2]> = (0..n).map(|_| random_qubit(&mut rng)).collect();
    let mut last = 0.0f64;
    for _sweep in 0..cfg.max_sweeps {
        let mut overlap = last;
        for k in 0..n {
            // v[b] = sum over x with x_k = b of s[x] * prod_{j != k}
            // conj(phi_j[x_j]); the optimal phi_k is v normalized and the
            // overlap becomes |v|.
            let bit = 1usize << k;
            let mut v = [Complex64::new(0.0, 0.0); 2];
            for (x, amp) in s.amps().iter().enumerate() {
                let mut w = *amp;
                for (j, p) in phi.iter().enumerate() {
                    if j == k {
                        continue;
                    }
                    w *= p[usize::from(x & (1 << j) != 0)].conj();
                }
                v[usize::from(x & bit != 0)] += w;
            }
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm > 1e-15 {
                phi[k] = [v[0] / norm, v[1] / norm];
                assert!(
                    norm >= overlap - 1e-12,
                    "environment update decreased the overlap: {overlap} -> {norm}"
                );
                overlap = norm;
            }
        }
        if overlap - last < cfg.tol {
            last = overlap;
            break;
        }
        last = overlap;
    }
    for p in &mut phi {
        let anchor = if p[0].norm() > 1e-12 { p[0] } else { p[1] };
        let phase = anchor.conj() / anchor.norm();
        p[0] *= phase;
        p[1] *= phase;
    }
    (last, phi)
}

/// Geometric measure of entanglement by seeded multistart alternating
/// optimization.
pub fn geometric_measure(s: &StateVector, cfg: &GeoConfig) -> Result<GeoResult> {
    if cfg.restarts == 0 {
        return Err(Error::Invalid("restarts must be >= 1".into()));
    }
    let best = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|r| geometric_single_start(s, cfg, r))
        .reduce(
            || (0.0, Vec::new()),
            |a, b| if a.0 >= b.0 { a } else { b },
        );
    Ok(GeoResult {
        value: 1.0 - best.0 * best.0,
        best_product_state: best.1,
    })
}
