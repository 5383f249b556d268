//! Simple undirected graphs on `0..n` stored as bit rows.
//!
//! Covers the pieces the privacy analysis needs: connected components,
//! strong products (vertex order matches [`crate::cmatrix::kron`]), the
//! component closure `G*`, and an exact independence number with a
//! deterministic witness.

use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::{SEARCH_CAP, SIZE_CAP};

/// Fixed-width bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_not(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Bits>,
}

/// Maximum independent set: its size and the lexicographically least
/// witness, vertices ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: usize,
    pub vertices: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Bits::empty(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.link(i, j);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.link(i, (i + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.link(i - 1, i);
        }
        g
    }

    /// Builds a graph from 0-based edges; loops and out-of-range endpoints
    /// are rejected, duplicates are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({i}, {j}) out of range for {} vertices",
                self.n
            )));
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {i}")));
        }
        self.link(i, j);
        Ok(())
    }

    fn link(&mut self, i: usize, j: usize) {
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i].contains(j)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.adj[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bits::count).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    g.link(i, j);
                }
            }
        }
        g
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut g = Self::empty(self.n + other.n);
        for (i, j) in self.edges() {
            g.link(i, j);
        }
        for (i, j) in other.edges() {
            g.link(i + self.n, j + self.n);
        }
        g
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &i)| set[a + 1..].iter().all(|&j| i != j && !self.has_edge(i, j)))
    }

    /// Connected components, each sorted, listed by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for u in self.adj[v].iter() {
                    if label[u] == usize::MAX {
                        label[u] = id;
                        members.push(u);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Strong product with the default [`SIZE_CAP`].
    pub fn strong_product(&self, other: &Self) -> Result<Self> {
        self.strong_product_capped(other, SIZE_CAP)
    }

    /// Vertex `(i, j)` sits at `i * other.n + j`. Distinct vertices are
    /// adjacent when each coordinate is equal or adjacent.
    pub fn strong_product_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let n = self.n.saturating_mul(other.n);
        if n > cap {
            return Err(Error::Capacity {
                what: "strong product vertices",
                requested: n,
                cap,
            });
        }
        let m = other.n;
        let mut g = Self::empty(n);
        for i in 0..self.n {
            for k in 0..self.n {
                if i != k && !self.has_edge(i, k) {
                    continue;
                }
                for j in 0..m {
                    for l in 0..m {
                        if (i, j) == (k, l) || (j != l && !other.has_edge(j, l)) {
                            continue;
                        }
                        g.adj[i * m + j].insert(k * m + l);
                    }
                }
            }
        }
        Ok(g)
    }

    /// `g^{⊠k}`, built as `g^{⊠(k-1)} ⊠ g`.
    pub fn strong_power(&self, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("strong power needs k >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.strong_product_capped(self, cap)?;
        }
        Ok(acc)
    }

    /// `G*`: every connected component completed to a clique.
    pub fn star_closure(&self) -> Self {
        let mut g = Self::empty(self.n);
        for comp in self.connected_components() {
            for (a, &i) in comp.iter().enumerate() {
                for &j in &comp[a + 1..] {
                    g.link(i, j);
                }
            }
        }
        g
    }

    pub fn is_disjoint_cliques(&self) -> bool {
        *self == self.star_closure()
    }

    /// Exact independence number with the default [`SEARCH_CAP`].
    pub fn independence_number(&self) -> Result<IndependentSet> {
        self.independence_number_capped(SEARCH_CAP)
    }

    /// Branch-and-bound maximum clique on the complement with a greedy
    /// colouring bound. The witness is the lexicographically least maximum
    /// independent set, fixed vertex by vertex with bounded re-searches.
    pub fn independence_number_capped(&self, cap: usize) -> Result<IndependentSet> {
        if self.n > cap {
            return Err(Error::Capacity {
                what: "independence search vertices (use bounds for larger graphs)",
                requested: self.n,
                cap,
            });
        }
        let comp = self.complement_rows();
        let all = Bits::full(self.n);
        let alpha = max_clique_size(&comp, &all, usize::MAX);

        let mut chosen = Vec::with_capacity(alpha);
        let mut cand = all;
        for v in 0..self.n {
            if chosen.len() == alpha {
                break;
            }
            if !cand.contains(v) {
                continue;
            }
            let rest = cand.and(&comp[v]);
            let need = alpha - chosen.len() - 1;
            if need == 0 || max_clique_size(&comp, &rest, need) >= need {
                chosen.push(v);
                cand = rest;
            } else {
                cand.remove(v);
            }
        }
        debug_assert_eq!(chosen.len(), alpha);
        Ok(IndependentSet {
            size: alpha,
            vertices: chosen,
        })
    }

    fn complement_rows(&self) -> Vec<Bits> {
        let all = Bits::full(self.n);
        (0..self.n)
            .map(|v| {
                let mut row = all.and_not(&self.adj[v]);
                row.remove(v);
                row
            })
            .collect()
    }

    /// `max_{1<=k<=kmax} α(g^{⊠k})^{1/k}`, a lower bound on the Shannon
    /// capacity. Fails when a power exceeds the search cap.
    pub fn shannon_lower(&self, kmax: usize) -> Result<f64> {
        self.shannon_lower_capped(kmax, SEARCH_CAP)
    }

    pub fn shannon_lower_capped(&self, kmax: usize, cap: usize) -> Result<f64> {
        if kmax == 0 {
            return Err(Error::InvalidArgument("kmax must be >= 1".into()));
        }
        let mut best: f64 = 0.0;
        let mut power = self.clone();
        for k in 1..=kmax {
            if k > 1 {
                power = power.strong_product_capped(self, cap)?;
            }
            let alpha = power.independence_number_capped(cap)?.size;
            best = best.max(libm::pow(alpha as f64, 1.0 / k as f64));
        }
        Ok(best)
    }
}

/// Size of a maximum clique inside `cand`, stopping early once `stop_at`
/// is reached.
fn max_clique_size(adj: &[Bits], cand: &Bits, stop_at: usize) -> usize {
    let mut best = 0;
    expand(adj, 0, cand.clone(), &mut best, stop_at);
    best
}

fn expand(adj: &[Bits], depth: usize, cand: Bits, best: &mut usize, stop_at: usize) {
    // greedy colouring: colour classes are independent sets of the clique graph
    let mut order = Vec::with_capacity(cand.count());
    let mut bound = Vec::with_capacity(order.capacity());
    let mut uncoloured = cand.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q = q.and_not(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            bound.push(colour);
        }
    }

    let mut cand = cand;
    for idx in (0..order.len()).rev() {
        if depth + bound[idx] <= *best || *best >= stop_at {
            return;
        }
        let v = order[idx];
        let next = cand.and(&adj[v]);
        if next.is_empty() {
            *best = (*best).max(depth + 1);
        } else {
            expand(adj, depth + 1, next, best, stop_at);
        }
        cand.remove(v);
    }
}
