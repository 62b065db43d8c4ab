//! Size functions, their cornerpoints and distances between cornerpoint sets.
//!
//! `ℓ(u, v)` counts the components of the sublevel set at `v` that contain
//! at least one vertex of value `<= u`. It is integer valued and piecewise
//! constant on the half-open cells of the critical-value grid, so every
//! limit in the definition of multiplicity is evaluated exactly with a fixed
//! offset smaller than any gap between the relevant levels.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::graph::{check_strict, critical_values, sublevel, CriticalValueSet, FilteredGraph};
use crate::unionfind::UnionFind;

/// `ℓ(u, v)` for `u < v`, computed directly from the components at `v`.
pub fn size_function_value(g: &FilteredGraph, u: f64, v: f64) -> Result<usize> {
    check_strict(u, v)?;
    Ok(ell(g, u, v))
}

pub(crate) fn ell(g: &FilteredGraph, u: f64, v: f64) -> usize {
    if g.is_empty() {
        return 0;
    }
    sublevel(g, v, None).meeting(u)
}

/// Offset used to evaluate one-sided limits around the points `extra`.
///
/// A quarter of the smallest gap among the critical values together with the
/// query coordinates, so that `x ± ε` never reaches a neighbouring level and
/// `u + ε < v - ε` for any query pair. Falls back to `0.5` when there is no gap.
pub(crate) fn limit_epsilon(crit: &CriticalValueSet, extra: &[f64]) -> f64 {
    let mut pts: Vec<f64> = crit
        .values()
        .iter()
        .copied()
        .chain(extra.iter().copied().filter(|x| x.is_finite()))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2)
        .map(|w| w[1] - w[0])
        .reduce(f64::min)
        .map_or(0.5, |gap| gap / 4.0)
}

/// Multiplicity of the point `(u, v)` by the four-corner alternating sum.
pub fn multiplicity(g: &FilteredGraph, u: f64, v: f64) -> Result<i64> {
    check_strict(u, v)?;
    let eps = limit_epsilon(&critical_values(g), &[u, v]);
    let l = |a: f64, b: f64| ell(g, a, b) as i64;
    Ok(l(u + eps, v - eps) - l(u - eps, v - eps) - l(u + eps, v + eps) + l(u - eps, v + eps))
}

/// Multiplicity of the vertical line `u = k`, the cornerpoint at infinity `(k, ∞)`.
pub fn multiplicity_at_infinity(g: &FilteredGraph, k: f64) -> i64 {
    if g.is_empty() {
        return 0;
    }
    let crit = critical_values(g);
    let eps = limit_epsilon(&crit, &[k]);
    let top = g.max_value().expect("nonempty graph").max(k) + 1.0;
    ell(g, k + eps, top) as i64 - ell(g, k - eps, top) as i64
}

/// `ℓ` tabulated on the critical grid: `table[j][i] = ℓ(c_i, c_j)` for `i <= j`.
///
/// The diagonal holds the right-continuous extension `ℓ(c_j, c_j)`, the
/// component count at `c_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeFunctionGrid {
    criticals: CriticalValueSet,
    table: Vec<Vec<usize>>,
}

impl SizeFunctionGrid {
    /// Builds the table with one incremental union-find sweep over the levels.
    pub fn new(g: &FilteredGraph) -> Self {
        let criticals = critical_values(g);
        let n = g.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| g.values()[a].total_cmp(&g.values()[b]));
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in g.edges() {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }

        let mut uf = UnionFind::new(n);
        let mut alive = vec![false; n];
        let mut alive_list = Vec::with_capacity(n);
        let mut next = 0;
        let mut table = Vec::with_capacity(criticals.len());
        for (j, &level) in criticals.values().iter().enumerate() {
            while next < n && g.values()[order[next]] <= level {
                let p = order[next];
                alive[p] = true;
                alive_list.push(p);
                for &q in &adjacency[p] {
                    if alive[q] {
                        uf.union(p, q);
                    }
                }
                next += 1;
            }
            let mut root_min = std::collections::HashMap::new();
            for &p in &alive_list {
                let r = uf.find(p);
                let m = root_min.entry(r).or_insert(f64::INFINITY);
                *m = f64::min(*m, g.values()[p]);
            }
            let mut minima: Vec<f64> = root_min.into_values().collect();
            minima.sort_by(f64::total_cmp);
            let row = criticals.values()[..=j]
                .iter()
                .map(|&c| minima.partition_point(|&m| m <= c))
                .collect();
            table.push(row);
        }
        Self { criticals, table }
    }

    pub fn criticals(&self) -> &CriticalValueSet {
        &self.criticals
    }

    /// `ℓ(c_i, c_j)` for grid indices; `None` stands for a level below every
    /// critical value, where the sublevel set is empty.
    pub fn at(&self, i: Option<usize>, j: Option<usize>) -> usize {
        match (i, j) {
            (Some(i), Some(j)) => {
                debug_assert!(i <= j);
                self.table[j][i]
            }
            _ => 0,
        }
    }

    /// Grid index of the largest critical value `<= x`.
    pub fn cell(&self, x: f64) -> Option<usize> {
        self.criticals
            .values()
            .partition_point(|&c| c <= x)
            .checked_sub(1)
    }

    /// `ℓ(u, v)` for any `u <= v`, by right-continuity from the table.
    pub fn eval(&self, u: f64, v: f64) -> usize {
        let (i, j) = (self.cell(u), self.cell(v));
        self.at(i, j)
    }

    /// Grid CSV: a header row of critical values, then one row per
    /// `u`-critical value with `ℓ(u, v)` in the columns `v >= u`.
    pub fn to_csv(&self) -> String {
        let vals = self.criticals.values();
        let mut out = String::from("u\\v");
        for &c in vals {
            out.push(',');
            out.push_str(&fmt_real(c));
        }
        out.push('\n');
        for (i, &u) in vals.iter().enumerate() {
            out.push_str(&fmt_real(u));
            for j in 0..vals.len() {
                out.push(',');
                if j >= i {
                    let _ = write!(out, "{}", self.table[j][i]);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// A point of the extended half-plane with positive multiplicity.
/// `v` is `f64::INFINITY` for cornerpoints at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cornerpoint {
    pub u: f64,
    pub v: f64,
    pub multiplicity: u32,
}

impl Cornerpoint {
    pub fn is_at_infinity(&self) -> bool {
        self.v == f64::INFINITY
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CornerpointSet {
    pub proper: Vec<Cornerpoint>,
    pub at_infinity: Vec<Cornerpoint>,
}

impl CornerpointSet {
    pub fn is_empty(&self) -> bool {
        self.proper.is_empty() && self.at_infinity.is_empty()
    }

    /// Number of distinct points, multiplicities ignored.
    pub fn support_len(&self) -> usize {
        self.proper.len() + self.at_infinity.len()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.iter().map(|c| c.multiplicity as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cornerpoint> {
        self.proper.iter().chain(&self.at_infinity)
    }

    /// Multiplicity recorded at `(u, v)`, zero if absent.
    pub fn multiplicity_at(&self, u: f64, v: f64) -> u32 {
        self.iter()
            .find(|c| c.u == u && c.v == v)
            .map_or(0, |c| c.multiplicity)
    }

    fn sort(&mut self) {
        let key = |a: &Cornerpoint, b: &Cornerpoint| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v));
        self.proper.sort_by(key);
        self.at_infinity.sort_by(key);
    }

    /// `{"proper":[{"u":…,"v":…,"m":…}],"infinity":[{"u":…,"m":…}]}`, sorted by `(u, v)`.
    pub fn to_json(&self) -> String {
        let mut sorted = self.clone();
        sorted.sort();
        let proper: Vec<String> = sorted
            .proper
            .iter()
            .map(|c| {
                format!(
                    "{{\"u\":{},\"v\":{},\"m\":{}}}",
                    fmt_real(c.u),
                    fmt_real(c.v),
                    c.multiplicity
                )
            })
            .collect();
        let infinity: Vec<String> = sorted
            .at_infinity
            .iter()
            .map(|c| format!("{{\"u\":{},\"m\":{}}}", fmt_real(c.u), c.multiplicity))
            .collect();
        format!(
            "{{\"proper\":[{}],\"infinity\":[{}]}}\n",
            proper.join(","),
            infinity.join(",")
        )
    }
}

/// All cornerpoints, found by scanning the four-corner multiplicity over
/// every cell of the critical grid.
pub fn cornerpoints(g: &FilteredGraph) -> CornerpointSet {
    cornerpoints_from_grid(&SizeFunctionGrid::new(g))
}

pub fn cornerpoints_from_grid(grid: &SizeFunctionGrid) -> CornerpointSet {
    let c = grid.criticals().values();
    let n = c.len();
    let below = |i: usize| i.checked_sub(1);
    let mut set = CornerpointSet::default();
    for j in 1..n {
        for i in 0..j {
            let mu = grid.at(Some(i), Some(j - 1)) as i64
                - grid.at(below(i), Some(j - 1)) as i64
                - grid.at(Some(i), Some(j)) as i64
                + grid.at(below(i), Some(j)) as i64;
            debug_assert!(mu >= 0, "negative multiplicity at ({}, {})", c[i], c[j]);
            if mu > 0 {
                set.proper.push(Cornerpoint {
                    u: c[i],
                    v: c[j],
                    multiplicity: mu as u32,
                });
            }
        }
    }
    if n > 0 {
        for i in 0..n {
            let mu = grid.at(Some(i), Some(n - 1)) as i64 - grid.at(below(i), Some(n - 1)) as i64;
            if mu > 0 {
                set.at_infinity.push(Cornerpoint {
                    u: c[i],
                    v: f64::INFINITY,
                    multiplicity: mu as u32,
                });
            }
        }
    }
    set
}

/// Value of the size function recovered from its cornerpoints: the total
/// multiplicity of points with abscissa `<= u` and ordinate `> v`.
pub fn reconstruct(cs: &CornerpointSet, u: f64, v: f64) -> Result<u64> {
    check_strict(u, v)?;
    Ok(cs
        .iter()
        .filter(|c| c.u <= u && c.v > v)
        .map(|c| c.multiplicity as u64)
        .sum())
}

fn linf(a: &Cornerpoint, b: &Cornerpoint) -> f64 {
    (a.u - b.u).abs().max((a.v - b.v).abs())
}

fn hausdorff<T>(a: &[T], b: &[T], d: impl Fn(&T, &T) -> f64) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => {
            let directed = |x: &[T], y: &[T]| {
                x.iter()
                    .map(|p| y.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max)
            };
            directed(a, b).max(directed(b, a))
        }
    }
}

/// Hausdorff distance between the supports of two cornerpoint sets.
///
/// Proper points are compared in the L∞ metric on `(u, v)`; cornerpoints at
/// infinity form a separate problem on their abscissas, and the result is
/// the larger of the two. A class that is empty on exactly one side gives
/// `f64::INFINITY`.
pub fn hausdorff_distance(a: &CornerpointSet, b: &CornerpointSet) -> f64 {
    let proper = hausdorff(&a.proper, &b.proper, linf);
    let infinite = hausdorff(&a.at_infinity, &b.at_infinity, |p, q| (p.u - q.u).abs());
    proper.max(infinite)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommonCornerpoints {
    pub count: usize,
    pub percentage: f64,
}

/// Size of a maximum one-to-one matching between the supports of `a` and
/// `b` pairing points within L∞ distance `tol`; the percentage is taken over
/// the support of `a`. Points at infinity match only points at infinity.
pub fn common_cornerpoints(
    a: &CornerpointSet,
    b: &CornerpointSet,
    tol: f64,
) -> Result<CommonCornerpoints> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::Domain(format!("tolerance must be >= 0, got {tol}")));
    }
    let count = max_matching(&a.proper, &b.proper, |p, q| linf(p, q) <= tol)
        + max_matching(&a.at_infinity, &b.at_infinity, |p, q| {
            (p.u - q.u).abs() <= tol
        });
    let total = a.support_len();
    let percentage = if total == 0 {
        100.0
    } else {
        100.0 * count as f64 / total as f64
    };
    Ok(CommonCornerpoints { count, percentage })
}

/// Maximum bipartite matching by augmenting paths.
fn max_matching<T>(left: &[T], right: &[T], compatible: impl Fn(&T, &T) -> bool) -> usize {
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|p| {
            (0..right.len())
                .filter(|&j| compatible(p, &right[j]))
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; right.len()];

    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &j in &adj[i] {
            if visited[j] {
                continue;
            }
            visited[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, owner, visited)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    let mut matched = 0;
    for i in 0..left.len() {
        let mut visited = vec![false; right.len()];
        if augment(i, &adj, &mut owner, &mut visited) {
            matched += 1;
        }
    }
    matched
}
