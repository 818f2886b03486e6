//! The nonlocal stabilizer formalism of hypergraph states.
//!
//! Each generator is `g_i = X_i (prod over edges e containing i) C_{e\{i}}`,
//! a self-inverse operator fixing the hypergraph state. Products of
//! generators form an abelian group with 2^n elements; composition is done
//! symbolically on XOR-reduced edge sets, with the sign bookkeeping coming
//! from the commutation rule
//! `C_e X^K = X^K prod_{f in P(K & e)} C_{e\f}` (empty remainders are the
//! scalar -1). The symbolic rules are cross-checked against a dense matrix
//! oracle in the tests.

use crate::dense::Mat;
use crate::hypergraph::{EdgeMask, Hypergraph};
use crate::statevec::{build_state, StateVector, EPS_EQ};
use crate::{Error, Result};
use num_complex::Complex64;

/// A signed product of X flips and controlled-phase factors:
/// `phase * X^{x_mask} * prod_{f in diag_edges} C_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerElement {
    n: usize,
    x_mask: u32,
    phase: i8,
    /// Sorted, XOR-reduced, never contains the empty mask.
    diag_edges: Vec<EdgeMask>,
}

fn toggle_sorted(set: &mut Vec<EdgeMask>, mask: EdgeMask, phase: &mut i8) {
    if mask == 0 {
        *phase = -*phase;
        return;
    }
    match set.binary_search(&mask) {
        Ok(pos) => {
            set.remove(pos);
        }
        Err(pos) => set.insert(pos, mask),
    }
}

impl StabilizerElement {
    pub fn identity(n: usize) -> Self {
        StabilizerElement {
            n,
            x_mask: 0,
            phase: 1,
            diag_edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u32 {
        self.x_mask
    }

    pub fn phase(&self) -> i8 {
        self.phase
    }

    pub fn diag_edges(&self) -> &[EdgeMask] {
        &self.diag_edges
    }

    /// Operator product `self * other` (other acts first on states).
    /// X flips of `other` are commuted through the diagonal part of `self`.
    pub fn compose(&self, other: &StabilizerElement) -> Result<StabilizerElement> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut phase = self.phase * other.phase;
        let mut diag = other.diag_edges.clone();
        let k = other.x_mask;
        for &f in &self.diag_edges {
            // C_f X^K = X^K prod_{g subset of (K & f)} C_{f\g}
            let overlap = f & k;
            let mut g: u32 = 0;
            loop {
                toggle_sorted(&mut diag, f & !g, &mut phase);
                g = g.wrapping_sub(overlap) & overlap;
                if g == 0 {
                    break;
                }
            }
        }
        Ok(StabilizerElement {
            n: self.n,
            x_mask: self.x_mask ^ other.x_mask,
            phase,
            diag_edges: diag,
        })
    }

    /// Applies the element: diagonal factors, then X flips, then the phase.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if s.n() != self.n {
            return Err(Error::DimensionMismatch(s.n(), self.n));
        }
        let dim = 1usize << self.n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let ph = f64::from(self.phase);
        for x in 0..dim {
            let mut a = s.amps()[x];
            for &f in &self.diag_edges {
                if x as u32 & f == f {
                    a = -a;
                }
            }
            amps[x ^ self.x_mask as usize] = a * ph;
        }
        StateVector::new(self.n, amps)
    }

    /// Dense matrix form, the oracle representation.
    pub(crate) fn to_matrix(&self) -> Mat {
        let dim = 1usize << self.n;
        let mut m = Mat::zeros(dim);
        for x in 0..dim {
            let mut v = f64::from(self.phase);
            for &f in &self.diag_edges {
                if x as u32 & f == f {
                    v = -v;
                }
            }
            m.set(x ^ self.x_mask as usize, x, Complex64::new(v, 0.0));
        }
        m
    }
}

/// The stabilizer generator g_i of a hypergraph state.
pub fn generator(h: &Hypergraph, i: usize) -> Result<StabilizerElement> {
    let link = h.link(i)?;
    let mut phase = 1i8;
    let mut diag = Vec::new();
    for f in link {
        toggle_sorted(&mut diag, f, &mut phase);
    }
    Ok(StabilizerElement {
        n: h.n(),
        x_mask: 1 << i,
        phase,
        diag_edges: diag,
    })
}

/// S_x, the group element `prod_i g_i^{x_i}`, composed symbolically.
pub fn group_element(h: &Hypergraph, x: usize) -> Result<StabilizerElement> {
    if x >= 1usize << h.n() {
        return Err(Error::EdgeOutOfRange {
            mask: x as u32,
            n: h.n(),
        });
    }
    let mut acc = StabilizerElement::identity(h.n());
    for i in 0..h.n() {
        if x & (1 << i) != 0 {
            acc = acc.compose(&generator(h, i)?)?;
        }
    }
    Ok(acc)
}

/// True iff every generator fixes the state, amplitude-exact.
pub fn check_stabilized(h: &Hypergraph) -> Result<bool> {
    let s = build_state(h)?;
    for i in 0..h.n() {
        let g = generator(h, i)?;
        if !g.apply(&s)?.approx_eq(&s, EPS_EQ) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The hypergraph-state basis element `Z^k |H>`.
pub fn basis_state(h: &Hypergraph, k: usize) -> Result<StateVector> {
    let s = build_state(h)?;
    let mut amps = s.amps().to_vec();
    for (x, a) in amps.iter_mut().enumerate() {
        if (x & k).count_ones() % 2 == 1 {
            *a = -*a;
        }
    }
    StateVector::new(h.n(), amps)
}

/// Builds `2^-n sum_x S_x` densely and returns the maximal absolute
/// deviation from the projector |H><H|.
pub fn projector_check(h: &Hypergraph) -> Result<f64> {
    let n = h.n();
    if n > 5 {
        return Err(Error::DenseCap { n, cap: 5 });
    }
    let dim = 1usize << n;
    let mut sum = Mat::zeros(dim);
    for x in 0..dim {
        sum = sum.add(&group_element(h, x)?.to_matrix());
    }
    let sum = sum.scale(Complex64::new(1.0 / dim as f64, 0.0));
    let s = build_state(h)?;
    let mut proj = Mat::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            proj.set(r, c, s.amps()[r] * s.amps()[c].conj());
        }
    }
    Ok(sum.max_abs_diff(&proj))
}

/// Dense check of `X_k C_e X_k = C_e C_{e\{k}}` and
/// `C_e X_k C_e = X_k C_{e\{k}}` for a vertex k inside edge e.
pub fn verify_lemma1(n: usize, e: EdgeMask, k: usize) -> Result<bool> {
    if n > 5 {
        return Err(Error::DenseCap { n, cap: 5 });
    }
    if e & (1 << k) == 0 {
        return Err(Error::Invalid(format!("vertex {k} not in edge {e:#x}")));
    }
    let x = Mat::x_gate(n, k);
    let ce = Mat::ce_gate(n, e);
    let rest = e & !(1u32 << k);
    let ce_rest = Mat::ce_gate(n, rest);
    let lhs1 = x.mul(&ce).mul(&x);
    let rhs1 = ce.mul(&ce_rest);
    let lhs2 = ce.mul(&x).mul(&ce);
    let rhs2 = x.mul(&ce_rest);
    Ok(lhs1.max_abs_diff(&rhs1) < EPS_EQ && lhs2.max_abs_diff(&rhs2) < EPS_EQ)
}

/// Dense check of the power-set rule
/// `C_e X^K = X^K prod_{f in P(K)} C_{e\f}` for K a subset of e.
pub fn verify_lemma2(n: usize, e: EdgeMask, k_set: EdgeMask) -> Result<bool> {
    if n > 5 {
        return Err(Error::DenseCap { n, cap: 5 });
    }
    if k_set & !e != 0 {
        return Err(Error::Invalid(format!(
            "K = {k_set:#x} is not a subset of e = {e:#x}"
        )));
    }
    let xk = Mat::x_mask_gate(n, k_set);
    let ce = Mat::ce_gate(n, e);
    let lhs = ce.mul(&xk);
    // Right side: X^K times C_{e\f} over the whole power set of K,
    // including f = K itself (the scalar -1 when K = e).
    let mut rhs = xk;
    let mut f: u32 = k_set;
    loop {
        rhs = rhs.mul(&Mat::ce_gate(n, e & !f));
        if f == 0 {
            break;
        }
        f = (f - 1) & k_set;
    }
    Ok(lhs.max_abs_diff(&rhs) < EPS_EQ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::mask_of;
    use crate::rng::SplitMix64;

    fn random_hypergraph(n: usize, rng: &mut SplitMix64) -> Hypergraph {
        let mut edges = Vec::new();
        for e in 1u32..1 << n {
            if rng.next_f64() < 0.3 {
                edges.push(e);
            }
        }
        Hypergraph::new(n, &edges).unwrap()
    }

    #[test]
    fn generator_examples() {
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let g = generator(&h, 0).unwrap();
        assert_eq!(g.x_mask(), 1);
        assert_eq!(g.diag_edges(), &[mask_of(&[2, 3])]);
        assert_eq!(g.phase(), 1);

        let fc = Hypergraph::new(
            4,
            &[
                mask_of(&[1, 2, 3]),
                mask_of(&[1, 2, 4]),
                mask_of(&[1, 3, 4]),
                mask_of(&[2, 3, 4]),
            ],
        )
        .unwrap();
        let g1 = generator(&fc, 0).unwrap();
        let mut want = vec![mask_of(&[2, 3]), mask_of(&[2, 4]), mask_of(&[3, 4])];
        want.sort_unstable();
        assert_eq!(g1.diag_edges(), &want[..]);
    }

    #[test]
    fn generator_counts_on_fully_connected_four_uniform_seven_vertices() {
        let mut edges = Vec::new();
        for e in 1u32..1 << 7 {
            if e.count_ones() == 4 {
                edges.push(e);
            }
        }
        let h = Hypergraph::new(7, &edges).unwrap();
        let g = generator(&h, 0).unwrap();
        // All 3-subsets of the other six vertices.
        assert_eq!(g.diag_edges().len(), 20);
        assert!(g.diag_edges().iter().all(|f| f.count_ones() == 3 && f & 1 == 0));
    }

    #[test]
    fn elements_are_involutions_and_stabilize() {
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let s = build_state(&h).unwrap();
        let g = generator(&h, 0).unwrap();
        assert!(g.apply(&s).unwrap().approx_eq(&s, EPS_EQ));
        let id = StabilizerElement::identity(3);
        assert!(id.apply(&s).unwrap().approx_eq(&s, EPS_EQ));
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let h = random_hypergraph(4, &mut rng);
            let x = rng.next_below(16) as usize;
            let e = group_element(&h, x).unwrap();
            let s = build_state(&h).unwrap();
            let twice = e.apply(&e.apply(&s).unwrap()).unwrap();
            assert!(twice.approx_eq(&s, EPS_EQ));
        }
    }

    #[test]
    fn check_stabilized_randomized_and_z_cross_check() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let n = 2 + rng.next_below(4) as usize;
            let h = random_hypergraph(n, &mut rng);
            assert!(check_stabilized(&h).unwrap());
        }
        // Z_k |H> has g_k eigenvalue -1.
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let zk = basis_state(&h, 0b001).unwrap();
        let g0 = generator(&h, 0).unwrap();
        let applied = g0.apply(&zk).unwrap();
        let flipped = StateVector::new(
            3,
            zk.amps().iter().map(|a| -a).collect(),
        )
        .unwrap();
        assert!(applied.approx_eq(&flipped, EPS_EQ));
    }

    #[test]
    fn seven_vertex_example_is_stabilized() {
        let h = Hypergraph::new(
            7,
            &[
                mask_of(&[7]),
                mask_of(&[1, 2]),
                mask_of(&[3, 4]),
                mask_of(&[3, 6]),
                mask_of(&[5, 6]),
                mask_of(&[4, 6, 7]),
                mask_of(&[1, 2, 3, 4]),
            ],
        )
        .unwrap();
        assert!(check_stabilized(&h).unwrap());
    }

    #[test]
    fn symbolic_composition_matches_dense_oracle() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..30 {
            let n = 2 + rng.next_below(3) as usize;
            let h = random_hypergraph(n, &mut rng);
            let x = rng.next_below(1 << n) as usize;
            let y = rng.next_below(1 << n) as usize;
            let sx = group_element(&h, x).unwrap();
            let sy = group_element(&h, y).unwrap();
            // Symbolic product vs dense matrix product.
            let sym = sx.compose(&sy).unwrap().to_matrix();
            let dense = sx.to_matrix().mul(&sy.to_matrix());
            assert!(sym.max_abs_diff(&dense) < EPS_EQ, "n={n} x={x} y={y}");
            // Group law on the state space: S_x S_y = S_{x XOR y}.
            let sxy = group_element(&h, x ^ y).unwrap();
            let s = build_state(&h).unwrap();
            let via_product = sx.apply(&sy.apply(&s).unwrap()).unwrap();
            assert!(via_product.approx_eq(&sxy.apply(&s).unwrap(), EPS_EQ));
        }
    }

    #[test]
    fn generators_commute_densely() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..10 {
            let n = 2 + rng.next_below(3) as usize;
            let h = random_hypergraph(n, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    let gi = generator(&h, i).unwrap().to_matrix();
                    let gj = generator(&h, j).unwrap().to_matrix();
                    assert!(gi.mul(&gj).max_abs_diff(&gj.mul(&gi)) < EPS_EQ);
                }
            }
        }
    }

    #[test]
    fn group_elements_traceless_and_basis_orthonormal() {
        let mut rng = SplitMix64::new(41);
        let h = random_hypergraph(4, &mut rng);
        for x in 1usize..16 {
            let m = group_element(&h, x).unwrap().to_matrix();
            let trace: num_complex::Complex64 = (0..16).map(|i| m.at(i, i)).sum();
            assert!(trace.norm() < EPS_EQ, "S_{x} has nonzero trace");
        }
        for k in 0..16usize {
            for kp in 0..16usize {
                let o = crate::statevec::overlap(
                    &basis_state(&h, k).unwrap(),
                    &basis_state(&h, kp).unwrap(),
                )
                .unwrap();
                let want = if k == kp { 1.0 } else { 0.0 };
                assert!((o.re - want).abs() < EPS_EQ && o.im.abs() < EPS_EQ);
            }
        }
    }

    #[test]
    fn projector_identity_small_and_random() {
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        assert!(projector_check(&h).unwrap() < EPS_EQ);
        let mut rng = SplitMix64::new(57);
        for _ in 0..10 {
            let h = random_hypergraph(4, &mut rng);
            assert!(projector_check(&h).unwrap() < EPS_EQ);
        }
    }

    #[test]
    fn lemma1_dense() {
        assert!(verify_lemma1(2, mask_of(&[1, 2]), 0).unwrap());
        assert!(verify_lemma1(1, mask_of(&[1]), 0).unwrap());
        for n in 1..=4usize {
            for e in 1u32..1 << n {
                for k in 0..n {
                    if e & (1 << k) != 0 {
                        assert!(verify_lemma1(n, e, k).unwrap(), "n={n} e={e:#x} k={k}");
                    }
                }
            }
        }
        assert!(verify_lemma1(2, mask_of(&[1]), 1).is_err());
    }

    #[test]
    fn lemma2_dense() {
        // Singleton K reduces to the first rule of lemma 1.
        assert!(verify_lemma2(3, mask_of(&[1, 2, 3]), mask_of(&[2])).unwrap());
        // K = e = {1} on one qubit: ZX = -XZ.
        assert!(verify_lemma2(1, mask_of(&[1]), mask_of(&[1])).unwrap());
        for n in 1..=4usize {
            for e in 1u32..1 << n {
                let mut k: u32 = e;
                loop {
                    if k != 0 {
                        assert!(verify_lemma2(n, e, k).unwrap(), "n={n} e={e:#x} K={k:#x}");
                    }
                    if k == 0 {
                        break;
                    }
                    k = (k - 1) & e;
                }
            }
        }
        assert!(verify_lemma2(3, mask_of(&[1, 2]), mask_of(&[3])).is_err());
    }
}
