//! Exact maximum clique by branch and bound with greedy-coloring bounds.
//!
//! Vertices are numbered in the caller's canonical order; the clique
//! returned is the lexicographically least among all maximum cliques, which
//! makes results independent of search heuristics and thread counts.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for v in 0..len {
            s.insert(v);
        }
        s
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

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference_in_place(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Drops every element `<= v`.
    pub fn retain_above(&mut self, v: usize) {
        let word = v / 64;
        for w in &mut self.words[..word] {
            *w = 0;
        }
        let keep = if v % 64 == 63 { 0 } else { !0u64 << (v % 64 + 1) };
        self.words[word] &= keep;
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
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::len).sum::<usize>() / 2
    }

    /// Size of a maximum clique.
    pub fn clique_number(&self) -> usize {
        let mut best = 0;
        self.expand(BitSet::full(self.len()), 0, &mut best, None);
        best
    }

    /// Whether `candidates` contain a clique of size `k`.
    pub fn has_clique(&self, candidates: BitSet, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let mut best = k - 1;
        self.expand(candidates, 0, &mut best, Some(k))
    }

    /// The lexicographically least maximum clique, as ascending vertex ids.
    pub fn least_maximum_clique(&self) -> Vec<usize> {
        let omega = self.clique_number();
        let mut chosen = Vec::with_capacity(omega);
        let mut candidates = BitSet::full(self.len());
        while chosen.len() < omega {
            let need = omega - chosen.len() - 1;
            let mut progressed = false;
            for v in candidates.iter().collect::<Vec<_>>() {
                let mut rest = candidates.intersect(&self.adj[v]);
                rest.retain_above(v);
                if self.has_clique(rest.clone(), need) {
                    chosen.push(v);
                    candidates = rest;
                    progressed = true;
                    break;
                }
            }
            assert!(progressed, "a clique of size {omega} exists");
        }
        chosen
    }

    /// Greedy sequential coloring; returns vertices in color order together
    /// with the color (1-based) of each, the usual upper bound for the search.
    fn color_sort(&self, candidates: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(candidates.len());
        let mut colors = Vec::with_capacity(candidates.len());
        let mut uncolored = candidates.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut open = uncolored.clone();
            while let Some(v) = open.first() {
                open.remove(v);
                open.difference_in_place(&self.adj[v]);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    /// Returns true as soon as a clique of size `target` is seen.
    fn expand(
        &self,
        mut candidates: BitSet,
        size: usize,
        best: &mut usize,
        target: Option<usize>,
    ) -> bool {
        let (order, colors) = self.color_sort(&candidates);
        for idx in (0..order.len()).rev() {
            if size + colors[idx] <= *best {
                return false;
            }
            let v = order[idx];
            let next = candidates.intersect(&self.adj[v]);
            if next.is_empty() {
                if size + 1 > *best {
                    *best = size + 1;
                    if target.is_some_and(|t| *best >= t) {
                        return true;
                    }
                }
            } else if self.expand(next, size + 1, best, target) {
                return true;
            }
            candidates.remove(v);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_omega(n: usize, edges: &[(usize, usize)]) -> (usize, Vec<usize>) {
        let adj = |u: usize, v: usize| edges.iter().any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v));
        let mut best: (usize, Vec<usize>) = (0, vec![]);
        // Enumerate subsets in an order where, for equal size, the first hit
        // is lexicographically least.
        let mut subsets: Vec<Vec<usize>> = (0u32..1 << n)
            .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
            .collect();
        subsets.sort();
        for s in subsets {
            let clique = s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| adj(u, v)));
            if clique && s.len() > best.0 {
                best = (s.len(), s);
            }
        }
        best
    }

    #[test]
    fn complete_multipartite() {
        // K_{2,2,2}: omega = 3, least clique is {0, 2, 4}.
        let mut g = Graph::new(6);
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    g.add_edge(u, v);
                }
            }
        }
        assert_eq!(g.clique_number(), 3);
        assert_eq!(g.least_maximum_clique(), vec![0, 2, 4]);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn empty_and_edgeless() {
        assert_eq!(Graph::new(0).least_maximum_clique(), Vec::<usize>::new());
        assert_eq!(Graph::new(4).least_maximum_clique(), vec![0]);
    }

    #[test]
    fn bitset_ops() {
        let mut s = BitSet::full(130);
        s.retain_above(63);
        assert_eq!(s.first(), Some(64));
        s.retain_above(127);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![128, 129]);
        let mut t = BitSet::full(130);
        t.retain_above(0);
        assert_eq!(t.len(), 129);
    }

    proptest! {
        #[test]
        fn agrees_with_subset_enumeration(
            n in 1usize..11,
            raw in prop::collection::vec((0usize..11, 0usize..11), 0..40),
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|&(a, b)| a < n && b < n && a != b).collect();
            let mut g = Graph::new(n);
            for &(a, b) in &edges {
                g.add_edge(a, b);
            }
            let (omega, least) = brute_force_omega(n, &edges);
            prop_assert_eq!(g.clique_number(), omega);
            prop_assert_eq!(g.least_maximum_clique(), least);
        }
    }
}
