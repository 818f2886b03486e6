//! Noncontextuality and Bell-type inequalities from the nonlocal
//! stabilizer of fully connected k-uniform hypergraph states: parity
//! admissibility tests, the Mermin-style operator, its quantum value,
//! brute-force classical and local-hidden-variable bounds, and the exact
//! expansion of the diagonal stabilizer parts in the local Z basis.

use crate::hypergraph::{EdgeMask, Hypergraph};
use crate::stabilizer::{generator, group_element, StabilizerElement};
use crate::statevec::{build_state, overlap};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// One parity check: C(n - alpha, k - alpha) together with its parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub alpha: usize,
    pub binomial: u128,
    pub odd: bool,
}

/// Certificate of the admissibility conditions for a fully connected
/// k-uniform structure on n vertices: C(n,k) odd and C(n-alpha, k-alpha)
/// even for every 1 <= alpha < k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCertificate {
    pub n: usize,
    pub k: usize,
    pub checks: Vec<ParityCheck>,
    pub admissible: bool,
}

/// Exact binomial coefficient; callers keep n small enough for u128.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 1..=k {
        out = out * (n - k + i) as u128 / i as u128;
    }
    out
}

/// C(a, b) is odd iff every binary digit of b is covered by a.
pub fn binomial_is_odd(a: usize, b: usize) -> bool {
    b & !a == 0
}

/// Evaluates the parity conditions via the digit test.
pub fn admissible(n: usize, k: usize) -> Result<ParityCertificate> {
    if k < 2 || k > n {
        return Err(Error::Invalid(format!(
            "admissibility needs 2 <= k <= n, got ({n}, {k})"
        )));
    }
    let mut checks = Vec::with_capacity(k);
    for alpha in 0..k {
        checks.push(ParityCheck {
            alpha,
            binomial: binomial(n - alpha, k - alpha),
            odd: binomial_is_odd(n - alpha, k - alpha),
        });
    }
    let admissible = checks[0].odd && checks[1..].iter().all(|c| !c.odd);
    Ok(ParityCertificate {
        n,
        k,
        checks,
        admissible,
    })
}

/// The admissible family k = 2^r, n = 2^(r+1) - 1 + 2sk.
pub fn family(r: usize, s: usize) -> Result<(usize, usize)> {
    if r < 1 {
        return Err(Error::Invalid("family needs r >= 1".into()));
    }
    let k = 1usize << r;
    let n = (1usize << (r + 1)) - 1 + 2 * s * k;
    let cert = admissible(n, k)?;
    assert!(
        cert.admissible,
        "family member ({n}, {k}) failed its parity certificate"
    );
    Ok((n, k))
}

/// An n-term stabilizer inequality: the n generators of the fully
/// connected k-uniform state plus the negated all-X product term.
#[derive(Clone, Debug)]
pub struct InequalitySpec {
    pub n: usize,
    pub k: usize,
    pub hypergraph: Hypergraph,
    pub terms: Vec<StabilizerElement>,
    pub quantum_value: f64,
    pub classical_bound: f64,
}

/// The fully connected k-uniform hypergraph on n vertices.
pub fn complete_uniform(n: usize, k: usize) -> Result<Hypergraph> {
    if n > 32 {
        return Err(Error::Invalid(format!(
            "edge masks are 32-bit, cannot build n = {n}"
        )));
    }
    let edges: Vec<EdgeMask> = (1u32..(1u64 << n) as u32)
        .filter(|e| e.count_ones() == k as u32)
        .collect();
    Hypergraph::new(n, &edges)
}

/// Builds the inequality operator and asserts symbolically that the
/// product of all generators equals the negated all-X term, so every
/// diagonal factor cancels.
pub fn mermin_operator(n: usize, k: usize) -> Result<InequalitySpec> {
    let cert = admissible(n, k)?;
    if !cert.admissible {
        let bad = cert
            .checks
            .iter()
            .find(|c| if c.alpha == 0 { !c.odd } else { c.odd })
            .expect("inadmissible certificate has a failing check");
        return Err(Error::Invalid(format!(
            "({n}, {k}) is not admissible: C({}, {}) = {} has the wrong parity",
            n - bad.alpha,
            k - bad.alpha,
            bad.binomial
        )));
    }
    if binomial(n, k) > 100_000 {
        return Err(Error::Invalid(format!(
            "({n}, {k}) has too many edges for symbolic construction"
        )));
    }
    let hypergraph = complete_uniform(n, k)?;
    let mut terms = Vec::with_capacity(n + 1);
    for i in 0..n {
        terms.push(generator(&hypergraph, i)?);
    }
    let product = group_element(&hypergraph, (1usize << n) - 1)?;
    let all_x = (1u32 << n) - 1;
    assert!(
        product.x_mask() == all_x && product.diag_edges().is_empty() && product.phase() == -1,
        "generator product did not cancel to the negated all-X term"
    );
    terms.push(product);
    Ok(InequalitySpec {
        n,
        k,
        hypergraph,
        terms,
        quantum_value: (n + 1) as f64,
        classical_bound: (n - 1) as f64,
    })
}

/// Expectation value of the operator in the hypergraph state, computed
/// densely term by term.
pub fn quantum_value(spec: &InequalitySpec) -> Result<f64> {
    let s = build_state(&spec.hypergraph)?;
    let mut total = 0.0;
    for term in &spec.terms {
        total += overlap(&s, &term.apply(&s)?)?.re;
    }
    Ok(total)
}

/// Maximum of sum(t_i) - prod(t_i) over sign assignments t in {-1,+1}^n.
/// Upper-bounds any noncontextual value assignment: every diagonal
/// variable appears an even number of times across the terms, so the
/// product of the first n term values equals the last term's value.
pub fn classical_bound_terms(n: usize) -> Result<f64> {
    if n == 0 || n > 30 {
        return Err(Error::Invalid(format!(
            "classical bound sweep supports 1 <= n <= 30, got {n}"
        )));
    }
    let best = (0u64..1 << n)
        .into_par_iter()
        .map(|bits| {
            let minus = bits.count_ones() as i64;
            let sum = n as i64 - 2 * minus;
            let prod = if minus % 2 == 0 { 1 } else { -1 };
            sum - prod
        })
        .max()
        .expect("nonempty range");
    Ok(best as f64)
}

/// Value of the diagonal factor C_f under a local Z assignment: -1 iff
/// every qubit of f is assigned -1.
fn c_value(f: EdgeMask, z_neg: u32) -> i64 {
    if f & !z_neg == 0 {
        -1
    } else {
        1
    }
}

/// Brute-force maximum of the operator over local hidden-variable
/// assignments x, z in {-1,+1}^n, where each generator's diagonal part
/// factors into c(f, z) values.
pub fn local_hv_max(spec: &InequalitySpec) -> Result<f64> {
    let n = spec.n;
    if 2 * n > 26 {
        return Err(Error::Invalid(format!(
            "local assignment sweep supports 2n <= 26, got n = {n}"
        )));
    }
    let gens = &spec.terms[..n];
    let best = (0u32..1 << n)
        .into_par_iter()
        .map(|z_neg| {
            // Diagonal product of each generator under this z assignment.
            let diag: Vec<i64> = gens
                .iter()
                .map(|g| {
                    g.diag_edges()
                        .iter()
                        .map(|&f| {
                            let c = c_value(f, z_neg);
                            debug_assert!(c == 1 || c == -1);
                            c
                        })
                        .product()
                })
                .collect();
            let mut local_best = i64::MIN;
            for x_neg in 0u32..1 << n {
                let mut sum = 0i64;
                for (i, d) in diag.iter().enumerate() {
                    let x = if x_neg & (1 << i) != 0 { -1 } else { 1 };
                    sum += x * d;
                }
                let x_prod = if x_neg.count_ones() % 2 == 0 { 1 } else { -1 };
                local_best = local_best.max(sum - x_prod);
            }
            local_best
        })
        .max()
        .expect("nonempty range");
    let bound = classical_bound_terms(n)?;
    assert!(
        best as f64 <= bound,
        "local assignment value {best} exceeded the term-sign bound {bound}"
    );
    Ok(best as f64)
}

/// An exact dyadic rational num / 2^log2_den, kept normalized (odd
/// numerator unless zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub num: i64,
    pub log2_den: u32,
}

impl Dyadic {
    pub fn new(mut num: i64, mut log2_den: u32) -> Self {
        while num != 0 && num % 2 == 0 && log2_den > 0 {
            num /= 2;
            log2_den -= 1;
        }
        if num == 0 {
            log2_den = 0;
        }
        Dyadic { num, log2_den }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / (1u64 << self.log2_den) as f64
    }
}

/// Expands the diagonal operator D_i (the product of C_{e minus i} over
/// all edges containing i) in the identity/Z product basis on the other
/// qubits. Keys are Z-support bitmasks over the original qubit labels;
/// zero coefficients are omitted. Coefficients are exact.
pub fn z_expansion(h: &Hypergraph, i: usize) -> Result<BTreeMap<EdgeMask, Dyadic>> {
    let n = h.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if n > 7 {
        return Err(Error::DenseCap { n, cap: 7 });
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let m = n - 1;
    let diag_edges: Vec<EdgeMask> = h
        .edges_containing(i)?
        .into_iter()
        .map(|e| e & !(1u32 << i))
        .collect();
    // The +-1 diagonal of D_i over the 2^(n-1) assignments of the others.
    let mut d = vec![1i64; 1 << m];
    for (y, entry) in d.iter_mut().enumerate() {
        let mut full: u32 = 0;
        for (b, &j) in others.iter().enumerate() {
            if y & (1 << b) != 0 {
                full |= 1 << j;
            }
        }
        let flips: u32 = diag_edges
            .iter()
            .map(|&f| u32::from(f & !full == 0))
            .sum();
        if flips % 2 == 1 {
            *entry = -1;
        }
    }
    // Integer Walsh transform: coefficient of the Z monomial on support w
    // is 2^-(n-1) sum_y d(y) (-1)^(y . w).
    let mut coeffs = d;
    let mut half = 1usize;
    while half < 1 << m {
        for block in (0..1 << m).step_by(2 * half) {
            for t in block..block + half {
                let (a, b) = (coeffs[t], coeffs[t + half]);
                coeffs[t] = a + b;
                coeffs[t + half] = a - b;
            }
        }
        half *= 2;
    }
    let mut map = BTreeMap::new();
    for (w, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            let mut full: u32 = 0;
            for (b, &j) in others.iter().enumerate() {
                if w & (1 << b) != 0 {
                    full |= 1 << j;
                }
            }
            map.insert(full, Dyadic::new(c, m as u32));
        }
    }
    Ok(map)
}

/// Checks symbolically that the product over j != i of A_j equals the
/// product of C_{e minus i} over edges e containing i, where A_j is the
/// product of all C_e over the (k-1)-element subsets of the vertices
/// other than i that contain j. Both sides are XOR-reduced mask sets.
pub fn a_observable_identity(n: usize, k: usize, i: usize) -> Result<bool> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if n > 32 || k < 2 || k > n {
        return Err(Error::Invalid(format!(
            "identity check supports 2 <= k <= n <= 32, got ({n}, {k})"
        )));
    }
    let not_i = ((1u64 << n) as u32).wrapping_sub(1) & !(1u32 << i);
    let mut lhs: BTreeMap<EdgeMask, bool> = BTreeMap::new();
    for e in 1u32..1 << n {
        if e & !not_i == 0 && e.count_ones() == (k - 1) as u32 {
            // e enters A_j once for each j it contains.
            if (k - 1) % 2 == 1 {
                let flag = lhs.entry(e).or_insert(false);
                *flag = !*flag;
            }
        }
    }
    let mut rhs: BTreeMap<EdgeMask, bool> = BTreeMap::new();
    for e in 1u32..1 << n {
        if e & (1 << i) != 0 && e.count_ones() == k as u32 {
            let flag = rhs.entry(e & !(1u32 << i)).or_insert(false);
            *flag = !*flag;
        }
    }
    let reduce = |m: BTreeMap<EdgeMask, bool>| -> Vec<EdgeMask> {
        m.into_iter().filter(|&(_, on)| on).map(|(e, _)| e).collect()
    };
    Ok(reduce(lhs) == reduce(rhs))
}
