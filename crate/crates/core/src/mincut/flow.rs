use std::collections::VecDeque;

/// Dinic max-flow on real capacities. Residuals at or below `eps` count as
/// saturated.
pub struct Dinic {
    n: usize,
    head: Vec<usize>,
    nxt: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<f64>,
    eps: f64,
}

const NONE: usize = usize::MAX;

impl Dinic {
    pub fn new(n: usize, arcs: &[(usize, usize, f64)]) -> Self {
        let mut d = Dinic { n, head: vec![NONE; n], nxt: Vec::new(), to: Vec::new(), cap: Vec::new(), eps: 0.0 };
        let mut max_cap: f64 = 0.0;
        for &(u, v, c) in arcs {
            d.push(u, v, c);
            d.push(v, u, 0.0);
            max_cap = max_cap.max(c);
        }
        d.eps = 1e-13 * max_cap;
        d
    }

    fn push(&mut self, u: usize, v: usize, c: f64) {
        self.to.push(v);
        self.cap.push(c);
        self.nxt.push(self.head[u]);
        self.head[u] = self.to.len() - 1;
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![NONE; self.n];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let mut e = self.head[u];
            while e != NONE {
                let v = self.to[e];
                if self.cap[e] > self.eps && level[v] == NONE {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
                e = self.nxt[e];
            }
        }
        level
    }

    /// Runs the flow and returns its value.
    pub fn run(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        if s == t {
            return total;
        }
        loop {
            let mut level = self.levels(s);
            if level[t] == NONE {
                return total;
            }
            let mut it = self.head.clone();
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let f = path.iter().map(|&e| self.cap[e]).fold(f64::INFINITY, f64::min);
                    for &e in &path {
                        self.cap[e] -= f;
                        self.cap[e ^ 1] += f;
                    }
                    total += f;
                    let k = path.iter().position(|&e| self.cap[e] <= self.eps).unwrap_or(0);
                    path.truncate(k);
                    u = if k == 0 { s } else { self.to[path[k - 1]] };
                    continue;
                }
                let mut found = NONE;
                while it[u] != NONE {
                    let e = it[u];
                    let v = self.to[e];
                    if self.cap[e] > self.eps && level[v] != NONE && level[v] == level[u] + 1 {
                        found = e;
                        break;
                    }
                    it[u] = self.nxt[e];
                }
                if found != NONE {
                    path.push(found);
                    u = self.to[found];
                } else {
                    level[u] = NONE;
                    match path.pop() {
                        None => break,
                        Some(e) => {
                            u = self.to[e ^ 1];
                            it[u] = self.nxt[it[u]];
                        }
                    }
                }
            }
        }
    }

    /// Nodes reachable from `s` in the residual network: the inclusion-minimal
    /// source side of a minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != NONE).collect()
    }
}

/// Highest-label push-relabel with global relabelling, run on the reversed
/// network so that the first phase alone yields the inclusion-minimal source
/// side of a minimum cut.
pub struct PushRelabel {
    n: usize,
    first: Vec<usize>,
    to: Vec<usize>,
    rev: Vec<usize>,
    cap: Vec<f64>,
    eps: f64,
}

impl PushRelabel {
    /// Network with every arc `(u, v, c)` stored as `v → u`. An arc
    /// immediately followed by its opposite shares a residual pair with it.
    pub fn new(n: usize, arcs: &[(usize, usize, f64)]) -> Self {
        let paired = |i: usize| i + 1 < arcs.len() && arcs[i + 1].0 == arcs[i].1 && arcs[i + 1].1 == arcs[i].0;
        let mut deg = vec![0usize; n + 1];
        let mut i = 0;
        while i < arcs.len() {
            let (u, v, _) = arcs[i];
            deg[u] += 1;
            deg[v] += 1;
            i += if paired(i) { 2 } else { 1 };
        }
        let mut first = vec![0usize; n + 1];
        for i in 0..n {
            first[i + 1] = first[i] + deg[i];
        }
        let m = first[n];
        let mut fill = first.clone();
        let (mut to, mut rev, mut cap) = (vec![0usize; m], vec![0usize; m], vec![0.0; m]);
        let mut max_cap: f64 = 0.0;
        let mut i = 0;
        while i < arcs.len() {
            let (u, v, c) = arcs[i];
            let back = if paired(i) { arcs[i + 1].2 } else { 0.0 };
            let (a, b) = (fill[v], fill[u]);
            fill[v] += 1;
            fill[u] += 1;
            to[a] = u;
            cap[a] = c;
            rev[a] = b;
            to[b] = v;
            cap[b] = back;
            rev[b] = a;
            max_cap = max_cap.max(c).max(back);
            i += if paired(i) { 2 } else { 1 };
        }
        PushRelabel { n, first, to, rev, cap, eps: 1e-13 * max_cap }
    }

    /// Exact distances to `t` in the residual network; unreachable nodes get
    /// height `n`.
    fn global_relabel(&self, t: usize, height: &mut [usize]) {
        height.fill(self.n);
        height[t] = 0;
        let mut q = VecDeque::from([t]);
        while let Some(y) = q.pop_front() {
            for f in self.first[y]..self.first[y + 1] {
                let x = self.to[f];
                if height[x] == self.n && self.cap[self.rev[f]] > self.eps {
                    height[x] = height[y] + 1;
                    q.push_back(x);
                }
            }
        }
    }

    /// Maximum flow from `s` to `t` of the original network and the set of
    /// nodes reachable from `s` in its residual network.
    pub fn min_cut(&mut self, s: usize, t: usize) -> (f64, Vec<bool>) {
        let n = self.n;
        if s == t {
            let mut side = vec![false; n];
            side[s] = true;
            return (0.0, side);
        }
        // Reversed roles: push from `t` towards `s`.
        let (src, snk) = (t, s);
        let mut excess = vec![0.0; n];
        let mut height = vec![0usize; n];
        let mut cur: Vec<usize> = self.first[..n].to_vec();
        for e in self.first[src]..self.first[src + 1] {
            let c = self.cap[e];
            if c > 0.0 {
                self.cap[e] = 0.0;
                self.cap[self.rev[e]] += c;
                excess[self.to[e]] += c;
            }
        }
        let threshold = 6 * n + self.to.len() / 2;
        let mut work = usize::MAX;
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut top = 0usize;
        loop {
            if work > threshold {
                self.global_relabel(snk, &mut height);
                height[src] = n;
                for b in &mut buckets {
                    b.clear();
                }
                top = 0;
                for v in 0..n {
                    if v != src && v != snk && height[v] < n && excess[v] > self.eps {
                        buckets[height[v]].push(v);
                        top = top.max(height[v]);
                    }
                }
                cur.copy_from_slice(&self.first[..n]);
                work = 0;
            }
            while top > 0 && buckets[top].is_empty() {
                top -= 1;
            }
            let Some(u) = buckets[top].pop() else { break };
            if height[u] != top || excess[u] <= self.eps {
                continue;
            }
            // Discharge u.
            let end = self.first[u + 1];
            while excess[u] > self.eps {
                if cur[u] == end {
                    let mut h = n;
                    for e in self.first[u]..end {
                        if self.cap[e] > self.eps {
                            h = h.min(height[self.to[e]] + 1);
                        }
                    }
                    work += end - self.first[u] + 12;
                    height[u] = h.min(n);
                    cur[u] = self.first[u];
                    if height[u] >= n {
                        break;
                    }
                    continue;
                }
                let e = cur[u];
                let v = self.to[e];
                if self.cap[e] > self.eps && height[u] == height[v] + 1 {
                    let d = excess[u].min(self.cap[e]);
                    self.cap[e] -= d;
                    self.cap[self.rev[e]] += d;
                    excess[u] -= d;
                    let was = excess[v];
                    excess[v] += d;
                    if v != snk && v != src && was <= self.eps && excess[v] > self.eps {
                        buckets[height[v]].push(v);
                        top = top.max(height[v]);
                    }
                    if self.cap[e] <= self.eps {
                        cur[u] += 1;
                    }
                } else {
                    cur[u] += 1;
                }
            }
            if excess[u] > self.eps && height[u] < n {
                buckets[height[u]].push(u);
                top = top.max(height[u]);
            }
        }
        // Nodes that reach `snk` in the reversed residual are exactly those
        // reachable from `s` in the original residual.
        let mut side = vec![false; n];
        side[snk] = true;
        let mut q = VecDeque::from([snk]);
        while let Some(y) = q.pop_front() {
            for f in self.first[y]..self.first[y + 1] {
                let x = self.to[f];
                if !side[x] && self.cap[self.rev[f]] > self.eps {
                    side[x] = true;
                    q.push_back(x);
                }
            }
        }
        (excess[snk], side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_single_node() {
        let mut d = Dinic::new(3, &[(0, 2, 5.0), (2, 1, 3.0)]);
        assert_eq!(d.run(0, 1), 3.0);
        assert_eq!(d.source_side(0), vec![true, false, true]);
    }

    #[test]
    fn classic_network() {
        let arcs = [(0, 1, 16.0), (0, 2, 13.0), (1, 2, 10.0), (2, 1, 4.0), (1, 3, 12.0), (3, 2, 9.0), (2, 4, 14.0), (4, 3, 7.0), (3, 5, 20.0), (4, 5, 4.0)];
        let mut d = Dinic::new(6, &arcs);
        assert!((d.run(0, 5) - 23.0).abs() < 1e-12);
        let (f, _) = PushRelabel::new(6, &arcs).min_cut(0, 5);
        assert!((f - 23.0).abs() < 1e-12);
    }

    #[test]
    fn push_relabel_matches_dinic() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(2..12usize);
            let m = rng.random_range(0..30usize);
            let arcs: Vec<(usize, usize, f64)> = (0..m)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..4) as f64 * 0.5))
                .filter(|a| a.0 != a.1)
                .collect();
            let mut d = Dinic::new(n, &arcs);
            let f1 = d.run(0, 1);
            let (f2, side) = PushRelabel::new(n, &arcs).min_cut(0, 1);
            assert!((f1 - f2).abs() < 1e-9, "{f1} {f2}");
            assert_eq!(side, d.source_side(0));
        }
    }
}
