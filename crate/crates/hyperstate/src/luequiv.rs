//! Local-unitary equivalence via unique standard forms.
//!
//! Pipeline: trace decomposition (single-qubit reductions diagonalized),
//! sorted trace decomposition (eigenvalues ordered by local X flips), and
//! the standard form, where the residual phase freedom is fixed through a
//! GF(2)-independent subset of the nonzero-coefficient index vectors. Two
//! generic states are LU equivalent iff their standard forms coincide.
//! For generic locally maximally entangleable (LME) states, phase freedom
//! collapses to local Paulis, so LU equivalence of two hypergraph states
//! that are generic (for instance, both contain the full edge) reduces to
//! the combinatorial local-Pauli decision.

use crate::classify::lp_equivalent;
use crate::entanglement::{reduced_state_mask, HermitianMatrix};
use crate::hypergraph::Hypergraph;
use crate::statevec::{
    apply_local, build_state, walsh_transform, LocalUnitary, StateVector,
};
use crate::{Error, Result};
use num_complex::Complex64;

/// Single-qubit reductions must be diagonal within this tolerance.
pub const EPS_DIAGONAL: f64 = 1e-10;
/// Standard forms are compared at this tolerance.
pub const EPS_STANDARD: f64 = 1e-9;
/// Reductions closer to degenerate than this are treated as non-generic.
pub const EPS_GENERIC: f64 = 1e-10;

/// A state together with the local unitaries that brought it to the
/// (sorted) trace decomposition and the per-qubit reduction eigenvalues.
#[derive(Clone, Debug)]
pub struct TraceDecomposition {
    pub state: StateVector,
    pub local_units: Vec<LocalUnitary>,
    /// (mu1, mu2) per qubit, the diagonal of the reduced state.
    pub eigs: Vec<(f64, f64)>,
}

/// Bookkeeping of the phase-fixing step of the standard form.
#[derive(Clone, Debug)]
pub struct PhaseFixing {
    /// Indices with nonzero coefficient, in computational order.
    pub lambda_set: Vec<usize>,
    /// The greedy GF(2)-independent subset of `lambda_set`.
    pub lambda_bar: Vec<usize>,
    /// Rows of the binary matrix M, one mask per member of `lambda_bar`.
    pub m_rows: Vec<u32>,
    /// Which coefficient anchored the global phase.
    pub global_phase_rule: PhaseAnchor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseAnchor {
    /// lambda_0 was nonzero and was made positive.
    ZeroVector,
    /// lambda_0 vanished; the first linearly dependent index anchored.
    FirstDependent(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormStatus {
    Unique,
    /// Some single-qubit reduction is maximally mixed or degenerate; the
    /// standard form is not unique for such states and no verdict is made.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct StandardForm {
    pub form: StateVector,
    pub status: FormStatus,
    /// Per-qubit composition of trace-decomposition unitary, sorting X and
    /// phase fixing, taking the input state to `form` up to a global phase.
    pub local_units: Vec<LocalUnitary>,
    pub phase_fixing: Option<PhaseFixing>,
}

fn reduction_2x2(s: &StateVector, k: usize) -> Result<HermitianMatrix> {
    reduced_state_mask(s, 1 << k)
}

/// Diagonalizes every single-qubit reduction. Eigenvector phases are fixed
/// by making the first nonzero component real positive; the larger
/// eigenvalue is placed first.
pub fn trace_decomposition(s: &StateVector) -> Result<TraceDecomposition> {
    let n = s.n();
    let mut state = s.clone();
    let mut local_units = Vec::with_capacity(n);
    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let rho = reduction_2x2(&state, k)?;
        let (a, b, d) = (rho.at(0, 0).re, rho.at(0, 1), rho.at(1, 1).re);
        let u = if b.norm() < 1e-14 {
            if a >= d {
                eigs.push((a, d));
                LocalUnitary::identity()
            } else {
                eigs.push((d, a));
                LocalUnitary::pauli_x()
            }
        } else {
            let mid = (a + d) / 2.0;
            let rad = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
            let (l1, l2) = (mid + rad, mid - rad);
            // Eigenvector for lambda: (b, lambda - a), phase-fixed on the
            // first nonzero component.
            let fix = |v: [Complex64; 2]| -> [Complex64; 2] {
                let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                let v = [v[0] / norm, v[1] / norm];
                let anchor = if v[0].norm() > 1e-12 { v[0] } else { v[1] };
                let phase = anchor.conj() / anchor.norm();
                [v[0] * phase, v[1] * phase]
            };
            let v1 = fix([b, Complex64::new(l1 - a, 0.0)]);
            let v2 = fix([b, Complex64::new(l2 - a, 0.0)]);
            eigs.push((l1, l2));
            // Rows of U are the conjugated eigenvectors: U rho U^dag is
            // then diag(l1, l2).
            LocalUnitary::new([
                [v1[0].conj(), v1[1].conj()],
                [v2[0].conj(), v2[1].conj()],
            ])?
        };
        state = apply_local(&state, k, &u)?;
        local_units.push(u);
    }
    for k in 0..n {
        let rho = reduction_2x2(&state, k)?;
        if rho.at(0, 1).norm() > EPS_DIAGONAL {
            return Err(Error::Invalid(format!(
                "trace decomposition left qubit {k} non-diagonal ({:.3e})",
                rho.at(0, 1).norm()
            )));
        }
    }
    Ok(TraceDecomposition {
        state,
        local_units,
        eigs,
    })
}

/// Applies X wherever mu1 < mu2 so every reduction has mu1 >= mu2.
pub fn sorted_trace_decomposition(t: &TraceDecomposition) -> Result<TraceDecomposition> {
    let mut out = t.clone();
    for k in 0..out.state.n() {
        let (m1, m2) = out.eigs[k];
        if m1 < m2 {
            out.state = apply_local(&out.state, k, &LocalUnitary::pauli_x())?;
            out.local_units[k] = LocalUnitary::pauli_x().mul(&out.local_units[k]);
            out.eigs[k] = (m2, m1);
        }
    }
    Ok(out)
}

/// Greedy GF(2)-independent subset of the index vectors, in computational
/// order. Returns (chosen indices, first dependent index if any).
fn greedy_gf2_basis(lambda: &[usize]) -> (Vec<usize>, Option<usize>) {
    let mut basis: Vec<u32> = Vec::new(); // row-echelon pivot rows
    let mut chosen = Vec::new();
    let mut first_dependent = None;
    for &x in lambda {
        let mut v = x as u32;
        for &row in &basis {
            let pivot = 31 - row.leading_zeros();
            if v & (1 << pivot) != 0 {
                v ^= row;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_by_key(|r| std::cmp::Reverse(31 - r.leading_zeros()));
            chosen.push(x);
        } else if first_dependent.is_none() {
            first_dependent = Some(x);
        }
    }
    (chosen, first_dependent)
}

/// Unique standard form of a generic state. Non-generic inputs (some
/// reduction maximally mixed or degenerate) come back `Inconclusive`.
pub fn standard_form(s: &StateVector) -> Result<StandardForm> {
    let n = s.n();
    let sorted = sorted_trace_decomposition(&trace_decomposition(s)?)?;
    let degenerate = sorted
        .eigs
        .iter()
        .any(|&(m1, m2)| (m1 - m2).abs() < EPS_GENERIC);
    if degenerate {
        return Ok(StandardForm {
            form: sorted.state,
            status: FormStatus::Inconclusive,
            local_units: sorted.local_units,
            phase_fixing: None,
        });
    }
    let amps = sorted.state.amps();
    let lambda_set: Vec<usize> = (0..amps.len())
        .filter(|&x| amps[x].norm() > EPS_STANDARD)
        .collect();
    let (lambda_bar, first_dependent) = greedy_gf2_basis(&lambda_set);

    // Global phase anchor.
    let (anchor_idx, rule) = if amps[0].norm() > EPS_STANDARD {
        (0usize, PhaseAnchor::ZeroVector)
    } else if let Some(d) = first_dependent {
        (d, PhaseAnchor::FirstDependent(d))
    } else {
        // Everything nonzero is independent; anchor on the first member.
        let d = lambda_set[0];
        (d, PhaseAnchor::FirstDependent(d))
    };
    let alpha0 = -amps[anchor_idx].arg();

    // Solve sum_i x_i alpha_i = -arg(e^{i alpha0} lambda_x) for x in
    // lambda_bar. Rows are GF(2)-independent, hence independent over the
    // reals, so the system always has a solution; free angles are zero.
    let m = lambda_bar.len();
    let mut aug: Vec<Vec<f64>> = lambda_bar
        .iter()
        .map(|&x| {
            let mut row: Vec<f64> = (0..n)
                .map(|i| if x & (1 << i) != 0 { 1.0 } else { 0.0 })
                .collect();
            let target = -(amps[x] * Complex64::from_polar(1.0, alpha0)).arg();
            row.push(target);
            row
        })
        .collect();
    let mut alphas = vec![0.0f64; n];
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        let Some(pr) = (r..m).max_by(|&i, &j| {
            aug[i][c].abs().partial_cmp(&aug[j][c].abs()).unwrap()
        }) else {
            break;
        };
        if aug[pr][c].abs() < 1e-12 {
            continue;
        }
        aug.swap(r, pr);
        for i in 0..m {
            if i != r && aug[i][c].abs() > 0.0 {
                let f = aug[i][c] / aug[r][c];
                for j in c..=n {
                    aug[i][j] -= f * aug[r][j];
                }
            }
        }
        pivot_cols.push((r, c));
        r += 1;
        if r == m {
            break;
        }
    }
    for &(row, col) in &pivot_cols {
        alphas[col] = aug[row][n] / aug[row][col];
    }

    let mut form_amps = sorted.state.amps().to_vec();
    let g = Complex64::from_polar(1.0, alpha0);
    for (x, a) in form_amps.iter_mut().enumerate() {
        let mut phase = g;
        for (i, &alpha) in alphas.iter().enumerate() {
            if x & (1 << i) != 0 {
                phase *= Complex64::from_polar(1.0, alpha);
            }
        }
        *a *= phase;
    }
    let form = StateVector::new(n, form_amps)?;
    for &x in &lambda_bar {
        let v = form.amps()[x];
        debug_assert!(
            v.im.abs() < EPS_STANDARD && v.re > 0.0,
            "phase fixing failed on index {x}: {v}"
        );
    }
    let local_units: Vec<LocalUnitary> = (0..n)
        .map(|i| LocalUnitary::z_rotation(alphas[i]).mul(&sorted.local_units[i]))
        .collect();
    Ok(StandardForm {
        form,
        status: FormStatus::Unique,
        local_units,
        phase_fixing: Some(PhaseFixing {
            lambda_set,
            lambda_bar: lambda_bar.clone(),
            m_rows: lambda_bar.iter().map(|&x| x as u32).collect(),
            global_phase_rule: rule,
        }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    Inconclusive,
}

/// Outcome of an LU-equivalence decision, with verified witness unitaries
/// when equivalent.
#[derive(Clone, Debug)]
pub struct LuDecision {
    pub verdict: Verdict,
    /// One unitary per qubit mapping `b` to `a` (up to a global phase).
    pub witnesses: Option<Vec<LocalUnitary>>,
}

/// Decides LU equivalence of generic states by comparing standard forms.
/// Witnesses are re-verified by direct application before reporting.
pub fn lu_equivalent_generic(a: &StateVector, b: &StateVector) -> Result<LuDecision> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let fa = standard_form(a)?;
    let fb = standard_form(b)?;
    if fa.status == FormStatus::Inconclusive || fb.status == FormStatus::Inconclusive {
        return Ok(LuDecision {
            verdict: Verdict::Inconclusive,
            witnesses: None,
        });
    }
    if !fa.form.approx_eq(&fb.form, EPS_STANDARD) {
        return Ok(LuDecision {
            verdict: Verdict::Inequivalent,
            witnesses: None,
        });
    }
    // U_i = (A_i)^dag B_i maps b to a up to a global phase, where A_i and
    // B_i take a and b to the shared standard form.
    let witnesses: Vec<LocalUnitary> = (0..a.n())
        .map(|i| fa.local_units[i].dagger().mul(&fb.local_units[i]))
        .collect();
    let mut mapped = b.clone();
    for (i, u) in witnesses.iter().enumerate() {
        mapped = apply_local(&mapped, i, u)?;
    }
    if !mapped.approx_eq_up_to_phase(a, EPS_STANDARD) {
        return Err(Error::Invalid(
            "standard forms matched but the witness unitaries failed verification".into(),
        ));
    }
    Ok(LuDecision {
        verdict: Verdict::Equivalent,
        witnesses: Some(witnesses),
    })
}

/// Brings an equal-modulus (LME-form) state to the Z basis by local
/// `Z(-beta_i)` rotations, making every reduction off-diagonal real.
pub fn z_basis_form(s: &StateVector) -> Result<StateVector> {
    let n = s.n();
    let want = 1.0 / ((1u64 << n) as f64).sqrt();
    for a in s.amps() {
        if (a.norm() - want).abs() > EPS_DIAGONAL {
            return Err(Error::Invalid(
                "input is not of equal-modulus (LME) form".into(),
            ));
        }
    }
    let mut out = s.clone();
    for i in 0..n {
        let rho = reduction_2x2(&out, i)?;
        let x = 2.0 * rho.at(0, 1).re;
        let y = -2.0 * rho.at(0, 1).im;
        let beta = if y.abs() > 1e-12 { y.atan2(x) } else { 0.0 };
        out = apply_local(&out, i, &LocalUnitary::z_rotation(-beta))?;
        let check = reduction_2x2(&out, i)?;
        if check.at(0, 1).im.abs() > EPS_DIAGONAL {
            return Err(Error::Invalid(format!(
                "z_basis_form left qubit {i} with a complex off-diagonal"
            )));
        }
    }
    Ok(out)
}

/// Genericity verdict for a hypergraph state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub generic: bool,
    /// A Z-pattern witnessing condition (ii), when one exists.
    pub witness_k: Option<usize>,
}

/// Checks the two generic-LME conditions: (i) no single-qubit reduction is
/// maximally mixed; (ii) some Z^k image has nonvanishing transformed
/// coefficients at weight 0 and every weight-1 index.
pub fn is_generic_lme(h: &Hypergraph) -> Result<Genericity> {
    let n = h.n();
    if n > 7 {
        return Err(Error::DenseCap { n, cap: 7 });
    }
    let stats = crate::statevec::support_stats(h)?;
    if stats.offdiag_i.iter().any(|o| o.abs() <= EPS_GENERIC) {
        return Ok(Genericity {
            generic: false,
            witness_k: None,
        });
    }
    // Transformed coefficients of Z^k |H> are the Walsh transform of the
    // sign vector with the k-pattern folded in.
    let size = 1usize << n;
    let base: Vec<f64> = (0..size)
        .map(|x| {
            if crate::statevec::boolean_f(h, x) == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    for k in 0..size {
        let signs: Vec<f64> = (0..size)
            .map(|x| {
                let zk = if (x & k).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                base[x] * zk
            })
            .collect();
        let coeff = walsh_transform(&signs)?;
        let ok = coeff[0].abs() > EPS_GENERIC
            && (0..n).all(|i| coeff[1 << i].abs() > EPS_GENERIC);
        if ok {
            return Ok(Genericity {
                generic: true,
                witness_k: Some(k),
            });
        }
    }
    Ok(Genericity {
        generic: false,
        witness_k: None,
    })
}

fn gf2_det(rows: &[u32], n: usize) -> u8 {
    let mut rows = rows.to_vec();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| rows[r] & (1 << c) != 0) else {
            return 0;
        };
        rows.swap(c, p);
        for r in 0..n {
            if r != c && rows[r] & (1 << c) != 0 {
                rows[r] ^= rows[c];
            }
        }
    }
    1
}

/// Solves `M * (pi l) = pi k (mod 2 pi)` for binary `l` via the integer
/// adjugate: `l = adj(M) k mod 2`. Requires `det M` odd.
pub fn lemma3_solve(m: &[Vec<u8>], k: &[u8]) -> Result<Vec<u8>> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) || k.len() != n {
        return Err(Error::Invalid("lemma3_solve needs square M and matching k".into()));
    }
    let rows: Vec<u32> = m
        .iter()
        .map(|r| r.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | ((b as u32 & 1) << i)))
        .collect();
    if gf2_det(&rows, n) == 0 {
        return Err(Error::Invalid("M is singular over GF(2)".into()));
    }
    // Adjugate mod 2: entry (i, j) is the (j, i) minor determinant.
    let minor_det = |skip_r: usize, skip_c: usize| -> u8 {
        let sub: Vec<u32> = (0..n)
            .filter(|&r| r != skip_r)
            .map(|r| {
                let mut v = 0u32;
                let mut col = 0;
                for c in 0..n {
                    if c == skip_c {
                        continue;
                    }
                    if rows[r] & (1 << c) != 0 {
                        v |= 1 << col;
                    }
                    col += 1;
                }
                v
            })
            .collect();
        if n == 1 {
            1
        } else {
            gf2_det(&sub, n - 1)
        }
    };
    let mut l = vec![0u8; n];
    for i in 0..n {
        let mut acc = 0u8;
        for (j, &kj) in k.iter().enumerate() {
            if kj & 1 == 1 {
                acc ^= minor_det(j, i);
            }
        }
        l[i] = acc;
    }
    // The congruence M l = k (mod 2) must hold whenever det M is odd.
    for (r, &kr) in k.iter().enumerate() {
        let prod = (rows[r] & l.iter().enumerate().fold(0u32, |a, (i, &b)| a | ((b as u32) << i)))
            .count_ones() as u8
            % 2;
        if prod != kr & 1 {
            return Err(Error::Invalid(
                "adjugate solve failed the congruence check".into(),
            ));
        }
    }
    Ok(l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionMethod {
    /// Both states are generic LME, so LU reduces to local Pauli moves.
    Theorem4,
    /// Dense standard-form comparison.
    StandardForm,
}

#[derive(Clone, Debug)]
pub struct HypergraphLuDecision {
    pub verdict: Verdict,
    pub method: DecisionMethod,
}

/// LU decision for two hypergraph states: the combinatorial route when
/// both are generic LME states, otherwise the dense standard-form route.
pub fn hypergraph_lu_decision(h1: &Hypergraph, h2: &Hypergraph) -> Result<HypergraphLuDecision> {
    if h1.n() != h2.n() {
        return Err(Error::DimensionMismatch(h1.n(), h2.n()));
    }
    if h1.n() > 6 {
        return Err(Error::DenseCap { n: h1.n(), cap: 6 });
    }
    let g1 = is_generic_lme(h1)?;
    let g2 = is_generic_lme(h2)?;
    if g1.generic && g2.generic {
        let verdict = if lp_equivalent(h1, h2)? {
            Verdict::Equivalent
        } else {
            Verdict::Inequivalent
        };
        return Ok(HypergraphLuDecision {
            verdict,
            method: DecisionMethod::Theorem4,
        });
    }
    let d = lu_equivalent_generic(&build_state(h1)?, &build_state(h2)?)?;
    Ok(HypergraphLuDecision {
        verdict: d.verdict,
        method: DecisionMethod::StandardForm,
    })
}
