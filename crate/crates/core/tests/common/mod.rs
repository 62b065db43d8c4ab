//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's algorithms; the
//! oracles work from plain value and edge lists.

#![allow(dead_code)]

use proptest::prelude::*;
use sizefn::mv::Decomposition;
use sizefn::FilteredGraph;

/// A graph as plain lists: vertex `i` has id `i` and value `values[i]`.
#[derive(Clone, Debug)]
pub struct Plain {
    pub values: Vec<f64>,
    pub edges: Vec<(usize, usize)>,
}

impl Plain {
    pub fn graph(&self) -> FilteredGraph {
        FilteredGraph::new(
            self.values.iter().enumerate().map(|(i, &v)| (i as u64, v)),
            self.edges.iter().map(|&(a, b)| (a as u64, b as u64)),
        )
        .unwrap()
    }

    /// Sorted distinct values.
    pub fn levels(&self) -> Vec<f64> {
        let mut c = self.values.clone();
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    }

    /// Critical values, the midpoints between them, and one point outside
    /// on each side.
    pub fn probes(&self) -> Vec<f64> {
        let c = self.levels();
        let mut p = vec![c[0] - 1.0];
        for w in c.windows(2) {
            p.push(w[0]);
            p.push((w[0] + w[1]) / 2.0);
        }
        p.push(*c.last().unwrap());
        p.push(c.last().unwrap() + 1.0);
        p
    }
}

/// Components of the subgraph on vertices with `alive[i]`, found by
/// depth-first search over adjacency lists. Returns each component as a
/// vertex list.
pub fn components(n: usize, edges: &[(usize, usize)], alive: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if alive[a] && alive[b] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !alive[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn sublevel_components(p: &Plain, t: f64, mask: &[bool]) -> Vec<Vec<usize>> {
    let alive: Vec<bool> = p
        .values
        .iter()
        .zip(mask)
        .map(|(&x, &m)| m && x <= t)
        .collect();
    components(p.values.len(), &p.edges, &alive)
}

/// Components of `X_v` containing some vertex of value `<= u`.
pub fn ell(p: &Plain, u: f64, v: f64) -> usize {
    ell_masked(p, &vec![true; p.values.len()], u, v)
}

pub fn ell_masked(p: &Plain, mask: &[bool], u: f64, v: f64) -> usize {
    sublevel_components(p, v, mask)
        .iter()
        .filter(|c| c.iter().any(|&x| p.values[x] <= u))
        .count()
}

/// A step well below every gap between values and query points.
pub fn eps(p: &Plain, extra: &[f64]) -> f64 {
    let mut c = p.values.clone();
    c.extend_from_slice(extra);
    c.sort_by(f64::total_cmp);
    c.dedup();
    let gap = c
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        gap / 8.0
    } else {
        0.5
    }
}

/// Four-corner multiplicity of `(u, v)`.
pub fn mu(p: &Plain, u: f64, v: f64) -> i64 {
    let e = eps(p, &[u, v]);
    ell(p, u + e, v - e) as i64 - ell(p, u - e, v - e) as i64 - ell(p, u + e, v + e) as i64
        + ell(p, u - e, v + e) as i64
}

pub fn mu_inf(p: &Plain, u: f64) -> i64 {
    let e = eps(p, &[u]);
    let top = p.values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    ell(p, u + e, top) as i64 - ell(p, u - e, top) as i64
}

/// Rank of an integer matrix by Gauss-Jordan elimination over the rationals,
/// entries kept as reduced `i128` fractions.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    fn norm((n, d): (i128, i128)) -> (i128, i128) {
        if n == 0 {
            return (0, 1);
        }
        let g = gcd(n, d);
        let s = if d < 0 { -1 } else { 1 };
        (s * n / g, s * d / g)
    }
    let mut m: Vec<Vec<(i128, i128)>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128, 1)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c].0 != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let (pn, pd) = m[rank][c];
        for r in 0..m.len() {
            if r == rank || m[r][c].0 == 0 {
                continue;
            }
            // factor = m[r][c] / pivot
            let (fn_, fd) = norm((m[r][c].0 * pd, m[r][c].1 * pn));
            for k in 0..cols {
                let (an, ad) = m[r][k];
                let (bn, bd) = m[rank][k];
                let (tn, td) = norm((fn_ * bn, fd * bd));
                m[r][k] = norm((an * td - tn * ad, ad * td));
            }
        }
        rank += 1;
    }
    rank
}

/// Membership of each vertex: in `A`, in `B`.
#[derive(Clone, Debug)]
pub struct PlainCover {
    pub g: Plain,
    pub a: Vec<bool>,
    pub b: Vec<bool>,
}

impl PlainCover {
    pub fn decomposition(&self) -> Decomposition {
        Decomposition::from_masks(self.g.graph(), self.a.clone(), self.b.clone())
    }

    pub fn ab(&self) -> Vec<bool> {
        self.a.iter().zip(&self.b).map(|(&x, &y)| x && y).collect()
    }

    fn alpha_matrix(&self, v: f64, u: Option<f64>) -> Vec<Vec<i64>> {
        let ab = self.ab();
        let keep = |c: &Vec<usize>| u.is_none_or(|u| c.iter().all(|&x| self.g.values[x] > u));
        let cols: Vec<Vec<usize>> = sublevel_components(&self.g, v, &ab)
            .into_iter()
            .filter(keep)
            .collect();
        let rows_a: Vec<Vec<usize>> = sublevel_components(&self.g, v, &self.a)
            .into_iter()
            .filter(keep)
            .collect();
        let rows_b: Vec<Vec<usize>> = sublevel_components(&self.g, v, &self.b)
            .into_iter()
            .filter(keep)
            .collect();
        let mut m = vec![vec![0i64; cols.len()]; rows_a.len() + rows_b.len()];
        for (j, c) in cols.iter().enumerate() {
            let x = c[0];
            if let Some(i) = rows_a.iter().position(|r| r.contains(&x)) {
                m[i][j] += 1;
            }
            if let Some(i) = rows_b.iter().position(|r| r.contains(&x)) {
                m[rows_a.len() + i][j] -= 1;
            }
        }
        if m.is_empty() {
            m.push(vec![0; cols.len()]);
        }
        m
    }

    /// `rank ker α_v`.
    pub fn ker_v(&self, v: f64) -> usize {
        let m = self.alpha_matrix(v, None);
        m[0].len() - rational_rank(&m)
    }

    /// `rank ker α_{v,u}` on relative classes.
    pub fn ker_vu(&self, v: f64, u: f64) -> usize {
        let m = self.alpha_matrix(v, Some(u));
        m[0].len() - rational_rank(&m)
    }
}

/// Random graph: `n` vertices, values `k/2` for small integers `k` so that
/// ties occur, and each pair joined with probability `density`.
pub fn plain_graph(
    n: std::ops::RangeInclusive<usize>,
    density: f64,
) -> impl Strategy<Value = Plain> {
    n.prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(-6i32..=6, n),
            prop::collection::vec(prop::bool::weighted(density), pairs),
        )
            .prop_map(move |(vals, bits)| {
                let values = vals.iter().map(|&k| k as f64 / 2.0).collect();
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            edges.push((a, b));
                        }
                        k += 1;
                    }
                }
                Plain { values, edges }
            })
    })
}

/// Random valid cover: each vertex goes to `A`, `B` or both, then every edge
/// joining an `A`-only vertex to a `B`-only vertex pulls one endpoint into
/// both sides.
pub fn plain_cover(
    n: std::ops::RangeInclusive<usize>,
    density: f64,
) -> impl Strategy<Value = PlainCover> {
    plain_graph(n, density).prop_flat_map(|g| {
        let n = g.values.len();
        let m = g.edges.len();
        (
            prop::collection::vec(0u8..3, n),
            prop::collection::vec(any::<bool>(), m),
        )
            .prop_map(move |(side, pick)| {
                let mut a: Vec<bool> = side.iter().map(|&s| s != 1).collect();
                let mut b: Vec<bool> = side.iter().map(|&s| s != 0).collect();
                for (k, &(x, y)) in g.edges.iter().enumerate() {
                    let covered = (a[x] && a[y]) || (b[x] && b[y]);
                    if !covered {
                        let w = if pick[k] { x } else { y };
                        a[w] = true;
                        b[w] = true;
                    }
                }
                PlainCover { g: g.clone(), a, b }
            })
    })
}

/// Edge patterns on `n` vertices used for exhaustive checks.
pub fn edge_patterns(n: usize) -> Vec<Vec<(usize, usize)>> {
    let path: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let mut cycle = path.clone();
    if n >= 3 {
        cycle.push((0, n - 1));
    }
    let star: Vec<_> = (1..n).map(|i| (0, i)).collect();
    let complete: Vec<_> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let h = n / 2;
    let split: Vec<_> = (1..n).filter(|&i| i != h).map(|i| (i - 1, i)).collect();
    vec![Vec::new(), path, cycle, star, complete, split]
}

/// Seeded random graph with `n` vertices drawn from `n_range`. Half the
/// instances use a few integer levels (many ties), half use real values.
pub fn random_plain(rng: &mut impl rand::Rng, n_range: std::ops::RangeInclusive<usize>) -> Plain {
    let n = rng.gen_range(n_range);
    let tied = rng.gen_bool(0.5);
    let levels = (n / 3).max(2) as i32;
    let values = (0..n)
        .map(|_| {
            if tied {
                rng.gen_range(0..levels) as f64
            } else {
                (rng.gen_range(-10.0..10.0f64) * 1000.0).round() / 1000.0
            }
        })
        .collect();
    let p = rng.gen_range(1.0..3.0) / n as f64;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p.min(1.0)) {
                edges.push((a, b));
            }
        }
    }
    Plain { values, edges }
}

/// Seeded random valid cover, built like [`plain_cover`].
pub fn random_cover(
    rng: &mut impl rand::Rng,
    n_range: std::ops::RangeInclusive<usize>,
) -> PlainCover {
    let g = random_plain(rng, n_range);
    let n = g.values.len();
    let side: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let mut a: Vec<bool> = side.iter().map(|&s| s != 1).collect();
    let mut b: Vec<bool> = side.iter().map(|&s| s != 0).collect();
    for &(x, y) in &g.edges {
        if !((a[x] && a[y]) || (b[x] && b[y])) {
            let w = if rng.gen_bool(0.5) { x } else { y };
            a[w] = true;
            b[w] = true;
        }
    }
    PlainCover { g, a, b }
}
