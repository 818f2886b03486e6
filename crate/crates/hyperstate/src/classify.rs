//! Equivalence-class enumeration for hypergraph states under local Pauli
//! operations and qubit permutations, invariant fingerprints, and the
//! embedded reference data (four-qubit class table, closed-form states,
//! six-qubit uniform class list) they are matched against.
//!
//! Orbits are tracked on strip_local normal forms: local edges and the
//! global sign never affect entanglement, and Z and Y moves only toggle
//! local edges there, so X moves generate the whole Pauli orbit.

use crate::entanglement::{
    biseparable_overlap, eigenvalues, genuine_negativity, geometric_measure, reduced_state_mask,
    GeoConfig,
};
use crate::hypergraph::{mask_of, EdgeMask, Hypergraph, Permutation};
use crate::statevec::{build_state, StateVector};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet, VecDeque};

/// Default cap on orbit sizes before the BFS aborts.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

/// The local-Pauli orbit of the strip_local normal form, generated by
/// `apply_x` followed by `strip_local` at every vertex.
pub fn pauli_orbit(h: &Hypergraph) -> Result<Vec<Hypergraph>> {
    pauli_orbit_capped(h, DEFAULT_ORBIT_CAP)
}

pub fn pauli_orbit_capped(h: &Hypergraph, cap: usize) -> Result<Vec<Hypergraph>> {
    if h.n() > 7 {
        return Err(Error::DenseCap { n: h.n(), cap: 7 });
    }
    let start = h.strip_local();
    let mut seen: HashSet<Vec<EdgeMask>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.edges().to_vec());
    queue.push_back(start.clone());
    let mut orbit = vec![start];
    while let Some(cur) = queue.pop_front() {
        for k in 0..h.n() {
            let next = cur.apply_x(k)?.strip_local();
            if seen.insert(next.edges().to_vec()) {
                if seen.len() > cap {
                    return Err(Error::Invalid(format!(
                        "pauli orbit exceeded the cap of {cap} elements"
                    )));
                }
                queue.push_back(next.clone());
                orbit.push(next);
            }
        }
    }
    Ok(orbit)
}

/// Minimal encoding over the orbit and all vertex relabelings: the
/// lexicographically smallest sorted edge list. Identical for any two
/// members of the same local-Pauli + permutation class.
pub fn canonical_key(h: &Hypergraph) -> Result<Vec<EdgeMask>> {
    let mut best: Option<Vec<EdgeMask>> = None;
    for member in pauli_orbit(h)? {
        let cand = member.perm_canonical()?.edges().to_vec();
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    Ok(best.expect("orbit is never empty"))
}

/// Equivalence under local Pauli operations and qubit permutations.
pub fn lp_equivalent(h1: &Hypergraph, h2: &Hypergraph) -> Result<bool> {
    if h1.n() != h2.n() {
        return Err(Error::DimensionMismatch(h1.n(), h2.n()));
    }
    Ok(canonical_key(h1)? == canonical_key(h2)?)
}

/// One equivalence class found during enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub canonical_key: Vec<EdgeMask>,
    pub representative: Hypergraph,
    /// Number of normal-form hypergraphs in the class.
    pub orbit_size: usize,
    pub max_cardinality: usize,
    pub connected: bool,
}

/// Local complementation at vertex v of a pure graph: toggles every pair
/// of neighbors of v. On graph states this generates exactly local
/// Clifford (hence local unitary) equivalence.
fn local_complement(h: &Hypergraph, v: usize) -> Result<Hypergraph> {
    let mut neighbors: EdgeMask = 0;
    for e in h.edges_containing(v)? {
        neighbors |= e & !(1 << v);
    }
    let mut out = h.clone();
    let verts: Vec<usize> = (0..h.n()).filter(|i| neighbors & (1 << i) != 0).collect();
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            out.toggle_edge((1 << i) | (1 << j));
        }
    }
    Ok(out.strip_local())
}

/// Partitions all n-qubit hypergraphs with edges of cardinality >= 2 into
/// classes under local Pauli operations plus permutations. Pure graphs are
/// rigid under Pauli moves, so on the graph subfamily (maximal cardinality
/// <= 2) orbits are additionally closed under local complementation, which
/// there captures full local-unitary equivalence. Connectivity and maximal
/// cardinality are asserted constant on every class.
pub fn enumerate_classes(n: usize) -> Result<Vec<OrbitRecord>> {
    if n > 4 {
        return Err(Error::Invalid(format!(
            "full enumeration is capped at n = 4, got {n}"
        )));
    }
    let masks: Vec<EdgeMask> = (1u32..1 << n).filter(|e| e.count_ones() >= 2).collect();
    let perms = Permutation::all(n);
    let total = 1usize << masks.len();
    let mut visited: HashSet<Vec<EdgeMask>> = HashSet::with_capacity(total);
    let mut records = Vec::new();
    for idx in 0..total {
        let edges: Vec<EdgeMask> = masks
            .iter()
            .enumerate()
            .filter(|(i, _)| idx & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if visited.contains(&edges) {
            continue;
        }
        let start = Hypergraph::new(n, &edges)?;
        let st = start.structure();
        // Closure under X moves and permutations.
        let mut members: HashSet<Vec<EdgeMask>> = HashSet::new();
        let mut queue = VecDeque::new();
        members.insert(start.edges().to_vec());
        queue.push_back(start.clone());
        let mut key = start.perm_canonical()?.edges().to_vec();
        while let Some(cur) = queue.pop_front() {
            let cs = cur.structure();
            if cs.connected != st.connected || cs.max_cardinality != st.max_cardinality {
                return Err(Error::Invalid(format!(
                    "class invariant violated: {} and {} share an orbit but differ in \
                     connectivity or maximal cardinality",
                    start.to_text(),
                    cur.to_text()
                )));
            }
            let cand = cur.perm_canonical()?.edges().to_vec();
            if cand < key {
                key = cand;
            }
            let mut push = |next: Hypergraph, queue: &mut VecDeque<Hypergraph>| {
                if members.insert(next.edges().to_vec()) {
                    queue.push_back(next);
                }
            };
            for k in 0..n {
                push(cur.apply_x(k)?.strip_local(), &mut queue);
            }
            for p in &perms {
                push(cur.permute(p)?, &mut queue);
            }
            if cs.max_cardinality <= 2 {
                for v in 0..n {
                    push(local_complement(&cur, v)?, &mut queue);
                }
            }
        }
        let representative = Hypergraph::new(n, &key)?;
        let rst = representative.structure();
        records.push(OrbitRecord {
            canonical_key: key,
            representative,
            orbit_size: members.len(),
            max_cardinality: rst.max_cardinality,
            connected: rst.connected,
        });
        visited.extend(members);
    }
    records.sort_by(|a, b| {
        (a.max_cardinality, a.representative.edges().len(), &a.canonical_key).cmp(&(
            b.max_cardinality,
            b.representative.edges().len(),
            &b.canonical_key,
        ))
    });
    Ok(records)
}

/// Enumerates all k-uniform hypergraphs on n vertices, keeps those whose
/// single-qubit reductions are all maximally mixed (when requested), and
/// groups the survivors into permutation orbits. Pauli moves never leave a
/// k-uniform family, so within the family classes are permutation orbits.
pub fn enumerate_uniform_classes(
    n: usize,
    k: usize,
    require_maximally_mixed: bool,
) -> Result<Vec<OrbitRecord>> {
    if n > 6 || k > n || k < 2 {
        return Err(Error::Invalid(format!(
            "uniform enumeration supports 2 <= k <= n <= 6, got ({n}, {k})"
        )));
    }
    let all_edges: Vec<EdgeMask> = (1u32..1 << n).filter(|e| e.count_ones() == k as u32).collect();
    let m = all_edges.len();
    if m > 24 {
        return Err(Error::Invalid(format!(
            "sweep over 2^{m} hypergraphs is too large"
        )));
    }
    let size = 1usize << n;
    // Truth table of each edge monomial over all 2^n inputs, as a bitset.
    let tables: Vec<u64> = all_edges
        .iter()
        .map(|&e| {
            let mut t = 0u64;
            for x in 0..size {
                if x as u32 & e == e {
                    t |= 1 << x;
                }
            }
            t
        })
        .collect();
    let quarter = 1usize << (n - 2);

    let survivors: Vec<usize> = (1usize..1 << m)
        .into_par_iter()
        .filter(|&idx| {
            if !require_maximally_mixed {
                return true;
            }
            // f = XOR of the chosen monomial tables; qubit i is maximally
            // mixed iff f^(i)(y) = f(y) XOR f(y | bit_i) has support
            // exactly 2^(n-2) over the 2^(n-1) points with bit_i clear.
            let mut table = 0u64;
            for (i, t) in tables.iter().enumerate() {
                if idx & (1 << i) != 0 {
                    table ^= t;
                }
            }
            (0..n).all(|i| {
                let bit = 1usize << i;
                let mut count = 0usize;
                for y in 0..size {
                    if y & bit == 0 {
                        count += ((table >> y) ^ (table >> (y | bit))) as usize & 1;
                    }
                }
                count == quarter
            })
        })
        .collect();

    // Group the survivors into permutation orbits by canonical key.
    let grouped: HashMap<Vec<EdgeMask>, usize> = survivors
        .par_iter()
        .map(|&idx| {
            let edges: Vec<EdgeMask> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| idx & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let h = Hypergraph::new(n, &edges).expect("edge masks are in range");
            (h.perm_canonical().expect("n <= 6").edges().to_vec(), 1usize)
        })
        .fold(HashMap::new, |mut map, (key, c)| {
            *map.entry(key).or_insert(0) += c;
            map
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let mut records: Vec<OrbitRecord> = grouped
        .into_iter()
        .map(|(key, count)| {
            let representative = Hypergraph::new(n, &key).expect("canonical key is valid");
            let st = representative.structure();
            OrbitRecord {
                canonical_key: key,
                representative,
                orbit_size: count,
                max_cardinality: st.max_cardinality,
                connected: st.connected,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        (a.representative.edges().len(), &a.canonical_key)
            .cmp(&(b.representative.edges().len(), &b.canonical_key))
    });
    Ok(records)
}

/// LU-invariant fingerprint of a state: reduced spectra maxima, the
/// biseparable overlap, genuine negativity, and the geometric measure.
#[derive(Clone, Debug)]
pub struct ClassInvariants {
    /// Largest eigenvalue of each single-qubit reduction, sorted ascending.
    pub single_qubit_max_eigs: Vec<f64>,
    /// Largest eigenvalue of each two-qubit reduction whose complement has
    /// at least two qubits, sorted ascending.
    pub two_qubit_max_eigs: Vec<f64>,
    pub alpha_bs: f64,
    pub genuine_neg: f64,
    pub e_g: f64,
}

/// Tolerance on algebraic fingerprint entries.
pub const EPS_FINGERPRINT: f64 = 1e-9;
/// Tolerance on the optimizer-dependent geometric measure.
pub const EPS_FINGERPRINT_EG: f64 = 1e-3;

impl ClassInvariants {
    /// Algebraic entries within 1e-9 and E_G within the given tolerance.
    pub fn matches(&self, other: &ClassInvariants, eg_tol: f64) -> bool {
        let close = |a: &[f64], b: &[f64]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| (x - y).abs() < EPS_FINGERPRINT)
        };
        close(&self.single_qubit_max_eigs, &other.single_qubit_max_eigs)
            && close(&self.two_qubit_max_eigs, &other.two_qubit_max_eigs)
            && (self.alpha_bs - other.alpha_bs).abs() < EPS_FINGERPRINT
            && (self.genuine_neg - other.genuine_neg).abs() < EPS_FINGERPRINT
            && (self.e_g - other.e_g).abs() < eg_tol
    }
}

/// Fingerprint of a state.
pub fn fingerprint_state(s: &StateVector, cfg: &GeoConfig) -> Result<ClassInvariants> {
    let n = s.n();
    let mut single = Vec::new();
    for i in 0..n {
        single.push(eigenvalues(&reduced_state_mask(s, 1 << i)?)?[0]);
    }
    single.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut two = Vec::new();
    if n >= 4 {
        for mask in 1u32..1 << n {
            if mask.count_ones() == 2 && mask & 1 != 0 && (n as u32 - 2) >= 2 {
                two.push(eigenvalues(&reduced_state_mask(s, mask)?)?[0]);
            }
        }
    }
    two.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ClassInvariants {
        single_qubit_max_eigs: single,
        two_qubit_max_eigs: two,
        alpha_bs: biseparable_overlap(s)?,
        genuine_neg: genuine_negativity(s)?,
        e_g: geometric_measure(s, cfg)?.value,
    })
}

/// Fingerprint of a hypergraph's state.
pub fn fingerprint(h: &Hypergraph, cfg: &GeoConfig) -> Result<ClassInvariants> {
    fingerprint_state(&build_state(h)?, cfg)
}

/// One reference row of the four-qubit class table.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub e_g: f64,
    pub single: [f64; 4],
    pub two: [f64; 3],
    pub alpha_bs: f64,
    pub genuine_neg: f64,
}

impl Table1Row {
    pub fn invariants(&self) -> ClassInvariants {
        let mut single = self.single.to_vec();
        single.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut two = self.two.to_vec();
        two.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ClassInvariants {
            single_qubit_max_eigs: single,
            two_qubit_max_eigs: two,
            alpha_bs: self.alpha_bs,
            genuine_neg: self.genuine_neg,
            e_g: self.e_g,
        }
    }
}

/// (3 + sqrt 5)/8.
pub fn gamma1() -> f64 {
    (3.0 + 5f64.sqrt()) / 8.0
}
/// (2 + sqrt 2)/8.
pub fn gamma2() -> f64 {
    (2.0 + 2f64.sqrt()) / 8.0
}
/// (4 + sqrt 7)/8.
pub fn gamma3() -> f64 {
    (4.0 + 7f64.sqrt()) / 8.0
}
/// (8 + 13/cbrt(z) + cbrt(z))/24 for z = 8 + i 3 sqrt(237); since
/// |z| = 13^(3/2), this is (8 + 2 sqrt(13) cos(arg(z)/3))/24, real.
pub fn gamma4() -> f64 {
    let theta = (3.0 * 237f64.sqrt()).atan2(8.0);
    (8.0 + 2.0 * 13f64.sqrt() * (theta / 3.0).cos()) / 24.0
}

/// The 27 reference rows: geometric measure, single-qubit maxima
/// (A, B, C, D), two-qubit maxima (AB, AC, AD), biseparable overlap,
/// genuine negativity.
pub fn table1_rows() -> Vec<Table1Row> {
    let g1 = gamma1();
    let g2 = gamma2();
    let g3 = gamma3();
    let g4 = gamma4();
    let g5 = (2.0 + 3f64.sqrt()) / 8.0;
    let r3 = 3f64.sqrt() / 4.0;
    let r7 = 7f64.sqrt() / 8.0;
    let r15 = 15f64.sqrt() / 8.0;
    let h = 0.5;
    let t = 0.75;
    let f5 = 5.0 / 8.0;
    let s7 = 7.0 / 8.0;
    let rows: [(f64, [f64; 4], [f64; 3], f64, f64); 27] = [
        (0.50000, [h, h, t, t], [t, h, h], t, r3),
        (0.65651, [h, h, h, t], [h, h, h], t, r3),
        (0.65277, [h, h, h, h], [h, h, h], h, h),
        (0.34549, [t, t, t, t], [t, g1, g1], t, r3),
        (0.57322, [h, h, t, t], [t, g2, g2], t, r3),
        (0.50000, [t, t, t, h], [h, g1, g1], t, r3),
        (0.62500, [h, h, h, t], [h, g2, g2], t, r3),
        (0.63572, [t, t, h, h], [h, g1, g1], t, r3),
        (0.63572, [h, h, h, h], [h, g2, g2], h, h),
        (0.50000, [t, t, h, t], [g1, g1, g1], t, r3),
        (0.59872, [h, h, h, t], [g1, g2, g2], t, r3),
        (0.37500, [t, t, t, t], [g1, g1, g1], t, r3),
        (0.62500, [h, h, t, t], [g1, g2, g2], t, r3),
        (0.57161, [h, h, h, h], [g1, g1, g1], g1, h),
        (0.58726, [t, t, h, h], [g1, g2, g2], t, r3),
        (0.43750, [t, t, t, t], [g1, g1, g1], t, r3),
        (0.19018, [s7, s7, s7, s7], [g3, g3, g3], s7, r7),
        (0.43187, [f5, f5, s7, s7], [g3, g4, g4], s7, r7),
        (0.64376, [f5, f5, f5, f5], [g3, g5, g5], g3, 3.0 / 8.0),
        (0.46240, [f5, f5, f5, s7], [g4, g4, g4], s7, r7),
        (0.65277, [f5, f5, f5, f5], [g4, g5, g5], f5, r15),
        (0.46097, [f5, f5, f5, f5], [g4, g4, g4], f5, r15),
        (0.54497, [f5, f5, f5, s7], [g4, g4, g4], s7, r7),
        (0.55656, [f5, f5, f5, f5], [g5, g4, g5], f5, r15),
        (0.62926, [f5, f5, f5, f5], [g4, g5, g5], f5, r15),
        (0.53879, [f5, f5, f5, f5], [g5, g4, g5], f5, r15),
        (0.55637, [f5, f5, f5, f5], [g4, g4, g4], f5, r15),
    ];
    rows.iter()
        .map(|&(e_g, single, two, alpha_bs, genuine_neg)| Table1Row {
            e_g,
            single,
            two,
            alpha_bs,
            genuine_neg,
        })
        .collect()
}

fn state_from_terms(n: usize, terms: &[(usize, f64)]) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for &(x, c) in terms {
        amps[x] = Complex64::new(c, 0.0);
    }
    StateVector::new(n, amps).expect("closed-form term list is in range")
}

/// Index of the basis string written qubit-1-first, e.g. "0110" puts
/// qubit 2 and qubit 3 in state 1.
fn ket(bits: &str) -> usize {
    bits.bytes()
        .enumerate()
        .fold(0, |acc, (i, b)| acc | (usize::from(b == b'1') << i))
}

/// The four-qubit closed-form states, in a local basis where their
/// amplitudes are simplest. Keys are the class numbers they must match.
pub fn closed_form_states() -> Vec<(usize, StateVector)> {
    let h = 0.5;
    let r8 = 1.0 / 8f64.sqrt();
    let dicke: Vec<(usize, f64)> = ["0011", "0101", "0110", "1001", "1010", "1100"]
        .iter()
        .map(|b| (ket(b), r8))
        .collect();
    let mut v3 = dicke.clone();
    v3.push((ket("0000"), r8));
    v3.push((ket("1111"), -r8));
    let mut v14 = dicke;
    v14.push((ket("0001"), r8));
    v14.push((ket("1110"), -r8));
    let v9 = vec![
        (ket("0000"), h),
        (ket("1111"), -h),
        (ket("0100"), 0.25),
        (ket("0101"), 0.25),
        (ket("0110"), -0.25),
        (ket("0111"), 0.25),
        (ket("1000"), 0.25),
        (ket("1001"), -0.25),
        (ket("1010"), 0.25),
        (ket("1011"), 0.25),
    ];
    vec![
        (
            1,
            state_from_terms(
                4,
                &[(ket("0000"), h), (ket("0001"), h), (ket("1100"), h), (ket("1111"), h)],
            ),
        ),
        (
            2,
            state_from_terms(
                4,
                &[(ket("0000"), h), (ket("0111"), h), (ket("1010"), h), (ket("1100"), h)],
            ),
        ),
        (3, state_from_terms(4, &v3)),
        (
            4,
            state_from_terms(
                4,
                &[(ket("0000"), h), (ket("0001"), h), (ket("0010"), h), (ket("1111"), h)],
            ),
        ),
        (
            6,
            state_from_terms(
                4,
                &[(ket("0000"), h), (ket("0010"), h), (ket("0111"), h), (ket("1001"), h)],
            ),
        ),
        (
            8,
            state_from_terms(
                4,
                &[(ket("0000"), h), (ket("1001"), h), (ket("1010"), h), (ket("1111"), h)],
            ),
        ),
        (9, state_from_terms(4, &v9)),
        (
            10,
            state_from_terms(
                4,
                &[
                    (ket("0000"), 2.0 * r8),
                    (ket("0011"), r8),
                    (ket("0110"), r8),
                    (ket("1010"), r8),
                    (ket("1111"), -r8),
                ],
            ),
        ),
        (
            12,
            state_from_terms(
                4,
                &[
                    (ket("0000"), 2.0 * r8),
                    (ket("0010"), r8),
                    (ket("0111"), -r8),
                    (ket("1011"), r8),
                    (ket("1110"), r8),
                ],
            ),
        ),
        (14, state_from_terms(4, &v14)),
    ]
}

/// The 24 reference three-uniform six-qubit hypergraphs with maximally
/// mixed single-qubit reductions.
pub fn six_qubit_uniform_references() -> Vec<Hypergraph> {
    let lists: [&[[usize; 3]]; 24] = [
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,3,6],[2,3,4],[2,3,5],[2,3,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,6],[2,3,4],[2,3,5],[2,4,6]],
        &[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,6],[2,3,6],[2,4,5],[2,5,6],[3,4,5],[3,4,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,4,5],[1,4,6],[2,3,4],[2,4,5],[2,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,3,6],[1,4,5],[2,3,4],[2,3,5],[2,3,6],[2,4,5]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,4,5],[2,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,6],[1,5,6],[2,3,4],[2,3,5],[2,4,6],[2,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,6],[1,5,6],[2,3,4],[2,3,5],[2,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,4,5],[1,4,6],[2,3,4],[2,4,5],[2,5,6],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,4,5],[1,5,6],[2,3,4],[2,4,5],[2,5,6],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,3,5],[2,4,5],[2,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,6],[1,5,6],[2,3,4],[2,4,6],[2,5,6],[3,4,5],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,3,6],[1,4,5],[2,3,4],[2,3,6],[2,4,5],[2,4,6],[3,4,5],[3,4,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,3,5],[2,4,5],[2,4,6],[3,4,5],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,3,5],[2,4,6],[2,5,6],[3,4,5],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,3,5],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,6],[1,5,6],[2,3,4],[2,3,5],[2,4,6],[2,5,6],[3,4,5],[3,4,6]],
        &[[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,5],[2,3,6],[2,4,6],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,4],[2,3,5],[2,4,5],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,5],[2,3,6],[2,4,5],[2,4,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,4,5],[1,4,6],[2,3,5],[2,3,6],[2,4,6],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,3,4],[1,3,6],[1,4,5],[1,4,6],[1,5,6],[2,3,5],[2,3,6],[2,4,5],[2,4,6],[2,5,6],[3,4,6],[3,5,6]],
        &[[1,2,3],[1,2,4],[1,2,5],[1,3,4],[1,3,6],[1,4,5],[1,4,6],[1,5,6],[2,3,5],[2,3,6],[2,4,5],[2,4,6],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
        &[[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,3,6],[1,4,5],[1,4,6],[2,3,5],[2,3,6],[2,4,5],[2,4,6],[2,5,6],[3,4,5],[3,4,6],[3,5,6]],
    ];
    lists
        .iter()
        .map(|edges| {
            let masks: Vec<EdgeMask> = edges.iter().map(|e| mask_of(e)).collect();
            Hypergraph::new(6, &masks).expect("reference edge lists are valid")
        })
        .collect()
}

/// A closed-form state matched to an enumerated class and a table row.
#[derive(Clone, Debug)]
pub struct ClosedFormMatch {
    /// Closed-form index (its class number in the reference table).
    pub form: usize,
    /// Position in the filtered `enumerate_classes(4)` output.
    pub class_index: usize,
    /// Matched 1-based table row.
    pub table_row: usize,
}

/// The filtered four-qubit classes: maximal cardinality >= 3 and connected.
pub fn four_qubit_main_classes() -> Result<Vec<OrbitRecord>> {
    Ok(enumerate_classes(4)?
        .into_iter()
        .filter(|r| r.max_cardinality >= 3 && r.connected)
        .collect())
}

/// Matches every closed-form state to exactly one enumerated class via
/// fingerprints, requiring the class-to-table-row mapping to be a
/// bijection and each form to land on its own row. Ambiguity is an error.
pub fn match_closed_forms(cfg: &GeoConfig) -> Result<Vec<ClosedFormMatch>> {
    let classes = four_qubit_main_classes()?;
    let prints: Vec<ClassInvariants> = classes
        .par_iter()
        .map(|r| fingerprint(&r.representative, cfg))
        .collect::<Result<_>>()?;
    let rows = table1_rows();
    let mut class_to_row = vec![usize::MAX; classes.len()];
    for (ci, p) in prints.iter().enumerate() {
        let hits: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, row)| p.matches(&row.invariants(), EPS_FINGERPRINT_EG))
            .map(|(ri, _)| ri)
            .collect();
        match hits.len() {
            1 => class_to_row[ci] = hits[0],
            0 => {
                return Err(Error::Invalid(format!(
                    "class {ci} matches no reference row: {p:?}"
                )))
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "class {ci} matches rows {hits:?} ambiguously"
                )))
            }
        }
    }
    let mut seen_rows = HashSet::new();
    if !class_to_row.iter().all(|&r| seen_rows.insert(r)) {
        return Err(Error::Invalid(
            "class-to-row mapping is not a bijection".into(),
        ));
    }
    let forms = closed_form_states();
    let form_prints: Vec<(usize, ClassInvariants)> = forms
        .par_iter()
        .map(|(idx, s)| Ok((*idx, fingerprint_state(s, cfg)?)))
        .collect::<Result<_>>()?;
    let mut matches = Vec::new();
    for (form, p) in form_prints {
        let hits: Vec<usize> = prints
            .iter()
            .enumerate()
            .filter(|(_, cp)| p.matches(cp, 2.0 * EPS_FINGERPRINT_EG))
            .map(|(ci, _)| ci)
            .collect();
        if hits.len() != 1 {
            return Err(Error::Invalid(format!(
                "closed form {form} matches classes {hits:?}, expected exactly one"
            )));
        }
        matches.push(ClosedFormMatch {
            form,
            class_index: hits[0],
            table_row: class_to_row[hits[0]] + 1,
        });
    }
    Ok(matches)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_orbit_examples() {
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let orbit = pauli_orbit(&h).unwrap();
        // The full edge plus any subset of the three 2-edges.
        assert_eq!(orbit.len(), 8);
        assert!(orbit
            .iter()
            .all(|m| m.contains_edge(mask_of(&[1, 2, 3]))));

        let empty = Hypergraph::new(3, &[]).unwrap();
        assert_eq!(pauli_orbit(&empty).unwrap().len(), 1);
    }

    #[test]
    fn lp_equivalence_examples() {
        let h = Hypergraph::new(4, &[mask_of(&[1, 2, 3]), mask_of(&[2, 3, 4])]).unwrap();
        let p = Permutation::new(vec![3, 1, 0, 2]).unwrap();
        assert!(lp_equivalent(&h, &h.permute(&p).unwrap()).unwrap());

        let a = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let b = Hypergraph::new(3, &[mask_of(&[1, 2, 3]), mask_of(&[2, 3])]).unwrap();
        assert!(lp_equivalent(&a, &b).unwrap());

        // Star (GHZ) vs path (cluster) graphs on 4 vertices.
        let ghz = Hypergraph::new(
            4,
            &[mask_of(&[1, 2]), mask_of(&[1, 3]), mask_of(&[1, 4])],
        )
        .unwrap();
        let cluster = Hypergraph::new(
            4,
            &[mask_of(&[1, 2]), mask_of(&[2, 3]), mask_of(&[3, 4])],
        )
        .unwrap();
        assert!(!lp_equivalent(&ghz, &cluster).unwrap());
    }

    #[test]
    fn three_qubit_classes() {
        let records = enumerate_classes(3).unwrap();
        let total: usize = records.iter().map(|r| r.orbit_size).sum();
        assert_eq!(total, 16);
        let main: Vec<_> = records
            .iter()
            .filter(|r| r.max_cardinality >= 3 && r.connected)
            .collect();
        assert_eq!(main.len(), 1);
        let graphs: Vec<_> = records
            .iter()
            .filter(|r| r.max_cardinality == 2 && r.connected)
            .collect();
        assert_eq!(graphs.len(), 1);
    }

    #[test]
    fn four_qubit_class_counts() {
        let records = enumerate_classes(4).unwrap();
        let total: usize = records.iter().map(|r| r.orbit_size).sum();
        assert_eq!(total, 2048);
        let main = records
            .iter()
            .filter(|r| r.max_cardinality >= 3 && r.connected)
            .count();
        assert_eq!(main, 27);
        let graphs = records
            .iter()
            .filter(|r| r.max_cardinality == 2 && r.connected)
            .count();
        assert_eq!(graphs, 2);
    }

    #[test]
    fn five_qubit_uniform_classes() {
        let classes = enumerate_uniform_classes(5, 3, true).unwrap();
        assert_eq!(classes.len(), 1);
        let rep = &classes[0].representative;
        assert_eq!(rep.edges().len(), 7);
        // Permutation-equivalent to "all three-edges except those holding
        // both of two distinguished vertices".
        let fig: Vec<EdgeMask> = (1u32..1 << 5)
            .filter(|e| e.count_ones() == 3 && (e & mask_of(&[4, 5])) != mask_of(&[4, 5]))
            .collect();
        let fig_h = Hypergraph::new(5, &fig).unwrap();
        assert_eq!(
            rep.perm_canonical().unwrap(),
            fig_h.perm_canonical().unwrap()
        );

        assert_eq!(enumerate_uniform_classes(5, 4, true).unwrap().len(), 0);
        assert_eq!(enumerate_uniform_classes(5, 5, true).unwrap().len(), 0);
    }

    #[test]
    fn uniform_mixed_filter_matches_support_stats() {
        for classes in [
            enumerate_uniform_classes(4, 3, true).unwrap(),
            enumerate_uniform_classes(5, 3, true).unwrap(),
        ] {
            for r in &classes {
                let stats = crate::statevec::support_stats(&r.representative).unwrap();
                assert!(stats.offdiag_i.iter().all(|o| o.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn uniform_rigidity_small() {
        // The Pauli orbit of a 3-uniform hypergraph contains no other
        // 3-uniform hypergraph.
        let h = Hypergraph::new(
            5,
            &[mask_of(&[1, 2, 3]), mask_of(&[2, 3, 4]), mask_of(&[3, 4, 5])],
        )
        .unwrap();
        let uniform_members: Vec<_> = pauli_orbit(&h)
            .unwrap()
            .into_iter()
            .filter(|m| m.structure().uniform_k == Some(3))
            .collect();
        assert_eq!(uniform_members, vec![h.strip_local()]);
    }

    #[test]
    fn orbit_edges_stay_equivalent() {
        let h = Hypergraph::new(4, &[mask_of(&[1, 2, 3]), mask_of(&[1, 4])]).unwrap();
        let stripped = h.strip_local();
        for k in 0..4 {
            let next = stripped.apply_x(k).unwrap().strip_local();
            assert!(lp_equivalent(&stripped, &next).unwrap());
            assert_eq!(
                next.structure().max_cardinality,
                stripped.structure().max_cardinality
            );
            assert_eq!(next.structure().connected, stripped.structure().connected);
        }
    }

    #[test]
    fn fingerprint_h3_hat() {
        let h = Hypergraph::new(3, &[mask_of(&[1, 2, 3])]).unwrap();
        let cfg = GeoConfig {
            restarts: 64,
            ..GeoConfig::default()
        };
        let p = fingerprint(&h, &cfg).unwrap();
        assert!((p.alpha_bs - 0.75).abs() < 1e-9);
        assert!((p.genuine_neg - 3f64.sqrt() / 4.0).abs() < 1e-9);
        assert!((p.e_g - 0.32391).abs() < 1e-4);
        assert!(p.two_qubit_max_eigs.is_empty());
    }

    #[test]
    fn gamma_constants() {
        assert!((gamma1() - 0.65451).abs() < 1e-5);
        assert!((gamma2() - 0.42678).abs() < 1e-5);
        assert!((gamma3() - 0.83072).abs() < 1e-5);
        assert!((gamma4() - 0.60171).abs() < 1e-5);
        // gamma4 solves the depressed cubic from its defining radical form.
        let y = 24.0 * gamma4() - 8.0;
        assert!((y * y * y - 3.0 * 13.0 * y - 2.0 * 8.0).abs() < 1e-9);
    }

    #[test]
    fn six_qubit_references_are_valid() {
        let refs = six_qubit_uniform_references();
        assert_eq!(refs.len(), 24);
        for h in &refs {
            assert_eq!(h.structure().uniform_k, Some(3));
            let stats = crate::statevec::support_stats(h).unwrap();
            assert!(
                stats.offdiag_i.iter().all(|o| o.abs() < 1e-12),
                "{} has a non-mixed reduction",
                h.to_text()
            );
        }
    }
}
