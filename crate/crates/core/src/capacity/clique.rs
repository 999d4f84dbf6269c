//! Exact maximum clique by branch and bound with a greedy-coloring bound.

struct Graph {
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }
}

struct Search<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Search<'_> {
    /// Orders `cands` by greedy color class and returns the color of each.
    fn color_sort(&self, cands: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cands {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.g.adjacent(u, v)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cands.len());
        let mut colors = Vec::with_capacity(cands.len());
        for (c, class) in classes.into_iter().enumerate() {
            for v in class {
                order.push(v);
                colors.push(c + 1);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, cands: Vec<usize>) {
        let (order, colors) = self.color_sort(&cands);
        let mut remaining = order.clone();
        for idx in (0..order.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            remaining.pop();
            self.current.push(v);
            let next: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&u| self.g.adjacent(v, u))
                .collect();
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
        }
    }
}

/// A maximum clique of the graph on `n` vertices with the given adjacency
/// predicate (assumed symmetric, ignored on the diagonal). Indices sorted.
pub fn max_clique(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    let mut degree = vec![0usize; n];
    for u in 0..n {
        for v in u + 1..n {
            if adjacent(u, v) {
                adj[u * words + v / 64] |= 1 << (v % 64);
                adj[v * words + u / 64] |= 1 << (u % 64);
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    let g = Graph { words, adj };

    // greedy seed: repeatedly take the highest-degree compatible vertex
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut seed: Vec<usize> = Vec::new();
    for &v in &by_degree {
        if seed.iter().all(|&u| g.adjacent(u, v)) {
            seed.push(v);
        }
    }

    let mut search = Search {
        g: &g,
        best: seed,
        current: Vec::new(),
    };
    search.expand(by_degree);
    let mut best = search.best;
    best.sort_unstable();
    best
}
