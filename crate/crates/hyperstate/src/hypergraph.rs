//! Bitmask hypergraphs and the exact rewrite calculus for local Pauli
//! operations, vertex permutations, and normalization.
//!
//! An edge is a `u32` bitmask over vertex indices `0..n-1`. The hypergraph
//! keeps a sorted, duplicate-free edge list plus a global sign in `{+1,-1}`;
//! the sign absorbs the empty edge (a global minus) whenever a rewrite
//! produces one, so the edge set itself never contains the empty mask.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Edge as a vertex bitmask: bit `i` set means vertex `i` is in the edge.
pub type EdgeMask = u32;

/// A hypergraph on `n` vertices with a global sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypergraph {
    n: usize,
    /// Sorted, duplicate-free.
    edges: Vec<EdgeMask>,
    /// +1 or -1; carries the empty-edge symbol (a global phase of -1).
    sign: i8,
}

impl Hypergraph {
    /// Builds a hypergraph from edge masks. Toggling semantics: an edge
    /// listed twice cancels, since every controlled-phase gate squares to
    /// the identity. An empty mask flips the sign instead of being stored.
    pub fn new(n: usize, edge_masks: &[EdgeMask]) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::BadVertexCount(n));
        }
        let mut h = Hypergraph {
            n,
            edges: Vec::new(),
            sign: 1,
        };
        for &e in edge_masks {
            if n < 32 && e >= 1u32 << n {
                return Err(Error::EdgeOutOfRange { mask: e, n });
            }
            h.toggle_edge(e);
        }
        Ok(h)
    }

    /// Builds from 1-indexed vertex lists, the form used by the external
    /// text and JSON formats. Rejects duplicate edges and bad vertices.
    pub fn from_vertex_lists(n: usize, edges: &[Vec<usize>], sign: i8) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::BadVertexCount(n));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid(format!("sign must be +1 or -1, got {sign}")));
        }
        let mut masks = Vec::with_capacity(edges.len());
        for verts in edges {
            let mut mask: EdgeMask = 0;
            for &v in verts {
                if v == 0 || v > n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
                mask |= 1 << (v - 1);
            }
            if mask == 0 {
                return Err(Error::Parse("empty edge not allowed in input".into()));
            }
            if masks.contains(&mask) {
                return Err(Error::DuplicateEdge(verts.clone()));
            }
            masks.push(mask);
        }
        let mut h = Self::new(n, &masks)?;
        h.sign = sign;
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[EdgeMask] {
        &self.edges
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn contains_edge(&self, e: EdgeMask) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// XOR-toggles an edge; the empty mask flips the global sign.
    pub fn toggle_edge(&mut self, e: EdgeMask) {
        if e == 0 {
            self.sign = -self.sign;
            return;
        }
        match self.edges.binary_search(&e) {
            Ok(pos) => {
                self.edges.remove(pos);
            }
            Err(pos) => {
                self.edges.insert(pos, e);
            }
        }
    }

    fn check_vertex(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(())
    }

    /// E(k): all edges containing vertex `k`.
    pub fn edges_containing(&self, k: usize) -> Result<Vec<EdgeMask>> {
        self.check_vertex(k)?;
        Ok(self
            .edges
            .iter()
            .copied()
            .filter(|e| e & (1 << k) != 0)
            .collect())
    }

    /// E^(k): the edges of E(k) with vertex `k` removed, XOR-reduced
    /// (masks produced an even number of times cancel). The result may
    /// contain the empty mask when `{k}` itself is an edge.
    pub fn link(&self, k: usize) -> Result<Vec<EdgeMask>> {
        let mut reduced: Vec<EdgeMask> = Vec::new();
        for e in self.edges_containing(k)? {
            let r = e & !(1 << k);
            match reduced.binary_search(&r) {
                Ok(pos) => {
                    reduced.remove(pos);
                }
                Err(pos) => reduced.insert(pos, r),
            }
        }
        Ok(reduced)
    }

    /// Pauli X on qubit `k`: the new edge set is the symmetric difference
    /// E XOR E^(k). An empty mask produced from the 1-edge `{k}` flips the
    /// sign. The identity `X_k |H> = |H'>` holds amplitude-exactly.
    pub fn apply_x(&self, k: usize) -> Result<Self> {
        let link = self.link(k)?;
        let mut h = self.clone();
        for e in link {
            h.toggle_edge(e);
        }
        Ok(h)
    }

    /// Pauli Z on qubit `k`: toggles the 1-edge `{k}`.
    pub fn apply_z(&self, k: usize) -> Result<Self> {
        self.check_vertex(k)?;
        let mut h = self.clone();
        h.toggle_edge(1 << k);
        Ok(h)
    }

    /// Pauli Y on qubit `k`: X then Z. Exact up to a global phase `i`,
    /// which is not tracked (it never affects edges, sign interplay with
    /// further rewrites, or any entanglement quantity).
    pub fn apply_y(&self, k: usize) -> Result<Self> {
        self.apply_x(k)?.apply_z(k)
    }

    /// Relabels every edge through the permutation. Sign is unchanged.
    pub fn permute(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::BadPermutation(format!(
                "permutation is on {} vertices, hypergraph on {}",
                p.len(),
                self.n
            )));
        }
        let mut edges: Vec<EdgeMask> = self.edges.iter().map(|&e| p.apply_mask(e)).collect();
        edges.sort_unstable();
        Ok(Hypergraph {
            n: self.n,
            edges,
            sign: self.sign,
        })
    }

    /// Drops all edges of cardinality <= 1 and resets the sign. Local
    /// edges and the global sign do not affect entanglement.
    pub fn strip_local(&self) -> Self {
        Hypergraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| e.count_ones() >= 2)
                .collect(),
            sign: 1,
        }
    }

    /// Structural summary: cardinalities, uniformity, connectivity of the
    /// clique expansion, and per-vertex neighbor counts.
    pub fn structure(&self) -> Structure {
        let max_cardinality = self
            .edges
            .iter()
            .map(|e| e.count_ones() as usize)
            .max()
            .unwrap_or(0);
        let uniform_k = if self.edges.is_empty() {
            None
        } else if self
            .edges
            .iter()
            .all(|e| e.count_ones() as usize == max_cardinality)
        {
            Some(max_cardinality)
        } else {
            None
        };
        // Neighborhood masks of the clique expansion.
        let mut nbr = vec![0u32; self.n];
        for &e in &self.edges {
            for i in 0..self.n {
                if e & (1 << i) != 0 {
                    nbr[i] |= e & !(1 << i);
                }
            }
        }
        let neighbor_counts: Vec<usize> = nbr.iter().map(|m| m.count_ones() as usize).collect();
        // BFS over the expansion, all n vertices must be reachable from 0.
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= nbr[i] & !seen;
            }
            seen |= next;
            frontier = next;
        }
        let connected = seen.count_ones() as usize == self.n;
        Structure {
            max_cardinality,
            uniform_k,
            connected,
            neighbor_counts,
        }
    }

    /// Lexicographically minimal relabeling: the sorted edge-mask list is
    /// compared elementwise over all n! vertex permutations. Deterministic
    /// and constant on permutation orbits. Requires n <= 8.
    pub fn perm_canonical(&self) -> Result<Self> {
        if self.n > 8 {
            return Err(Error::Invalid(format!(
                "perm_canonical needs n <= 8 for the factorial sweep, got {}",
                self.n
            )));
        }
        let mut best: Option<Vec<EdgeMask>> = None;
        for p in Permutation::all(self.n) {
            let mut edges: Vec<EdgeMask> = self.edges.iter().map(|&e| p.apply_mask(e)).collect();
            edges.sort_unstable();
            if best.as_ref().map_or(true, |b| edges < *b) {
                best = Some(edges);
            }
        }
        Ok(Hypergraph {
            n: self.n,
            edges: best.unwrap_or_default(),
            sign: self.sign,
        })
    }

    /// Edges as ascending 1-indexed vertex lists, for the external formats.
    pub fn edge_vertex_lists(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|&e| (0..self.n).filter(|i| e & (1 << i) != 0).map(|i| i + 1).collect())
            .collect()
    }

    /// Parses the one-line text form, e.g. `n=4; edges=1+2+3,1+2+3+4`.
    /// An optional `; sign=-1` component is accepted.
    pub fn parse_text(line: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges: Option<Vec<Vec<usize>>> = None;
        let mut sign: i8 = 1;
        for part in line.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad vertex count `{value}`")))?,
                    )
                }
                "edges" => {
                    let mut lists = Vec::new();
                    for edge in value.split(',') {
                        let edge = edge.trim();
                        if edge.is_empty() {
                            continue;
                        }
                        let verts: Vec<usize> = edge
                            .split('+')
                            .map(|v| {
                                v.trim()
                                    .parse()
                                    .map_err(|_| Error::Parse(format!("bad vertex `{v}`")))
                            })
                            .collect::<Result<_>>()?;
                        lists.push(verts);
                    }
                    edges = Some(lists);
                }
                "sign" => {
                    sign = match value.trim() {
                        "1" | "+1" => 1,
                        "-1" => -1,
                        other => return Err(Error::Parse(format!("bad sign `{other}`"))),
                    }
                }
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n=".into()))?;
        let edges = edges.ok_or_else(|| Error::Parse("missing edges=".into()))?;
        Self::from_vertex_lists(n, &edges, sign)
    }

    /// Parses the JSON form `{"n":4,"edges":[[1,2,3],[1,2,3,4]],"sign":1}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: HypergraphJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_vertex_lists(raw.n, &raw.edges, raw.sign)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphJson {
            n: self.n,
            edges: self.edge_vertex_lists(),
            sign: self.sign,
        })
        .expect("hypergraph JSON serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let edges = self
            .edge_vertex_lists()
            .iter()
            .map(|vs| {
                vs.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect::<Vec<_>>()
            .join(",");
        if self.sign == 1 {
            format!("n={}; edges={}", self.n, edges)
        } else {
            format!("n={}; edges={}; sign=-1", self.n, edges)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default = "one")]
    sign: i8,
}

fn one() -> i8 {
    1
}

/// Structural facts about a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    /// Largest edge cardinality, 0 for the empty edge set.
    pub max_cardinality: usize,
    /// Set iff all edges share one cardinality.
    pub uniform_k: Option<usize>,
    /// Whether the clique-expansion graph connects all n vertices.
    pub connected: bool,
    /// Number of distinct vertices sharing at least one edge with vertex i.
    pub neighbor_counts: Vec<usize>,
}

/// A bijection on `{0..n-1}`, stored as the image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::BadPermutation(format!("{image:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn apply_mask(&self, e: EdgeMask) -> EdgeMask {
        let mut out = 0;
        let mut rest = e;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.image[i];
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// All n! permutations in a deterministic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut image: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                image: image.clone(),
            });
            // Next lexicographic permutation.
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| image[i] < image[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| image[j] > image[i]).unwrap();
            image.swap(i, j);
            image[i + 1..].reverse();
        }
        out
    }
}

/// Mask from a 1-indexed vertex list; handy in tests and table data.
pub fn mask_of(verts: &[usize]) -> EdgeMask {
    verts.iter().fold(0, |m, &v| m | (1 << (v - 1)))
}
