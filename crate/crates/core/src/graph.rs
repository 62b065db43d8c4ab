//! Finite vertex-weighted graphs and the sublevel-set filtration they induce.
//!
//! A [`FilteredGraph`] stands in for a size pair: the vertices carry the
//! values of the measuring function and an edge is present in the sublevel
//! set at level `t` exactly when both of its endpoints have value `<= t`.
//! On a finite graph the rank of 0th homology of a sublevel set is its number
//! of connected components, and the rank of 1st homology is its cycle rank.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Vertex identifier as it appears in graph files.
pub type VertexId = u64;

/// A finite graph whose vertices carry finite real filtration values.
///
/// Vertices are stored in insertion order; internal algorithms address them
/// by index, while public labelings use the caller's [`VertexId`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredGraph {
    ids: Vec<VertexId>,
    values: Vec<f64>,
    edges: Vec<(usize, usize)>,
    index: HashMap<VertexId, usize>,
}

impl FilteredGraph {
    /// Builds a graph from `(id, value)` pairs and edges given by vertex id.
    ///
    /// Rejects empty vertex lists, duplicate ids, non-finite values,
    /// self-loops, duplicate edges and edges naming undeclared vertices.
    pub fn new(
        vertices: impl IntoIterator<Item = (VertexId, f64)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let g = Self::build(vertices, edges)?;
        if g.ids.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        Ok(g)
    }

    fn build(
        vertices: impl IntoIterator<Item = (VertexId, f64)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut ids = Vec::new();
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for (id, value) in vertices {
            if !value.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "vertex {id} has non-finite value {value}"
                )));
            }
            if index.insert(id, ids.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {id}")));
            }
            ids.push(id);
            values.push(value);
        }
        let mut seen = HashSet::new();
        let mut edge_list = Vec::new();
        for (a, b) in edges {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {a}-{b}: unknown vertex {a}")))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {a}-{b}: unknown vertex {b}")))?;
            if ia == ib {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            edge_list.push(key);
        }
        Ok(Self {
            ids,
            values,
            edges: edge_list,
            index,
        })
    }

    /// The subgraph induced by the vertices selected in `mask` (indexed like
    /// [`Self::ids`]). The result may have no vertices.
    pub fn induced(&self, mask: &[bool]) -> FilteredGraph {
        assert_eq!(mask.len(), self.ids.len(), "mask length mismatch");
        let mut remap = vec![usize::MAX; self.ids.len()];
        let mut ids = Vec::new();
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for (i, &keep) in mask.iter().enumerate() {
            if keep {
                remap[i] = ids.len();
                index.insert(self.ids[i], ids.len());
                ids.push(self.ids[i]);
                values.push(self.values[i]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| mask[a] && mask[b])
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        FilteredGraph {
            ids,
            values,
            edges,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Edges as pairs of vertex indices, smaller index first.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn value_of(&self, id: VertexId) -> Option<f64> {
        self.index_of(id).map(|i| self.values[i])
    }

    pub fn min_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::max)
    }

    /// Parses the line-oriented graph format: `v <id> <value>` and
    /// `e <id> <id>`. Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let (vertices, edges) = parse_graph_lines(text, |_, _, _| Ok(false))?;
        Self::new(vertices, edges)
    }

    /// Serializes to the text format. Values use the shortest decimal form
    /// that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, value) in self.ids.iter().zip(&self.values) {
            let _ = writeln!(out, "v {id} {value:?}");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "e {} {}", self.ids[a], self.ids[b]);
        }
        out
    }
}

/// Shared line parser for graph and decomposition files. `extra` is offered
/// every line whose tag is not `v`/`e`; it returns `Ok(true)` if it consumed it.
pub(crate) fn parse_graph_lines(
    text: &str,
    mut extra: impl FnMut(usize, &str, &[&str]) -> Result<bool>,
) -> Result<(Vec<(VertexId, f64)>, Vec<(VertexId, VertexId)>)> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse {
            line: lineno,
            message: msg.to_string(),
        };
        match fields[0] {
            "v" => {
                if fields.len() != 3 {
                    return Err(bad("expected `v <id> <value>`"));
                }
                let id = fields[1].parse().map_err(|_| bad("invalid vertex id"))?;
                let value: f64 = fields[2].parse().map_err(|_| bad("invalid vertex value"))?;
                vertices.push((id, value));
            }
            "e" => {
                if fields.len() != 3 {
                    return Err(bad("expected `e <id> <id>`"));
                }
                let a = fields[1].parse().map_err(|_| bad("invalid vertex id"))?;
                let b = fields[2].parse().map_err(|_| bad("invalid vertex id"))?;
                edges.push((a, b));
            }
            tag => {
                if !extra(lineno, tag, &fields[1..])? {
                    return Err(bad(&format!("unknown record `{tag}`")));
                }
            }
        }
    }
    Ok((vertices, edges))
}

/// Component structure of a sublevel set, addressed by vertex index.
#[derive(Clone, Debug)]
pub(crate) struct Sublevel {
    /// Component index of each vertex, `None` if the vertex is above the level
    /// or outside the mask.
    pub comp: Vec<Option<usize>>,
    /// Minimum filtration value over each component.
    pub comp_min: Vec<f64>,
    /// Smallest vertex id in each component.
    pub comp_rep: Vec<VertexId>,
}

impl Sublevel {
    pub fn count(&self) -> usize {
        self.comp_min.len()
    }

    /// Number of components whose minimum is `<= u`, that is the components
    /// meeting the sublevel set at `u`.
    pub fn meeting(&self, u: f64) -> usize {
        self.comp_min.iter().filter(|&&m| m <= u).count()
    }
}

/// Components of the sublevel set at `t`, restricted to the vertices selected
/// by `mask` when one is given.
pub(crate) fn sublevel(g: &FilteredGraph, t: f64, mask: Option<&[bool]>) -> Sublevel {
    let n = g.len();
    let alive = |i: usize| g.values[i] <= t && mask.is_none_or(|m| m[i]);
    let mut uf = UnionFind::new(n);
    for &(a, b) in &g.edges {
        if alive(a) && alive(b) {
            uf.union(a, b);
        }
    }
    let mut root_to_comp = HashMap::new();
    let mut comp = vec![None; n];
    let mut comp_min = Vec::new();
    let mut comp_rep = Vec::new();
    for i in 0..n {
        if !alive(i) {
            continue;
        }
        let root = uf.find(i);
        let c = *root_to_comp.entry(root).or_insert_with(|| {
            comp_min.push(f64::INFINITY);
            comp_rep.push(VertexId::MAX);
            comp_min.len() - 1
        });
        comp[i] = Some(c);
        comp_min[c] = comp_min[c].min(g.values[i]);
        comp_rep[c] = comp_rep[c].min(g.ids[i]);
    }
    Sublevel {
        comp,
        comp_min,
        comp_rep,
    }
}

/// Partition of a sublevel set into connected components.
///
/// Component ids are canonical: the smallest vertex id in the component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentLabeling {
    pub level: f64,
    pub labels: BTreeMap<VertexId, VertexId>,
    pub count: usize,
}

impl ComponentLabeling {
    pub fn label(&self, id: VertexId) -> Option<VertexId> {
        self.labels.get(&id).copied()
    }
}

pub fn sublevel_components(g: &FilteredGraph, t: f64) -> ComponentLabeling {
    let s = sublevel(g, t, None);
    let labels = s
        .comp
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|c| (g.ids[i], s.comp_rep[c])))
        .collect();
    ComponentLabeling {
        level: t,
        labels,
        count: s.count(),
    }
}

/// Rank of 0th homology of the sublevel set at `t`.
pub fn h0_rank(g: &FilteredGraph, t: f64) -> usize {
    sublevel(g, t, None).count()
}

/// Rank of 0th homology of the pair `(X_v, X_u)`: components of `X_v`
/// that do not meet `X_u`.
pub fn relative_h0_rank(g: &FilteredGraph, v: f64, u: f64) -> Result<usize> {
    check_strict(u, v)?;
    let s = sublevel(g, v, None);
    Ok(s.count() - s.meeting(u))
}

/// Cycle rank `E - V + C` of the sublevel graph at `t`.
pub fn h1_rank(g: &FilteredGraph, t: f64) -> usize {
    h1_rank_masked(g, t, None)
}

pub(crate) fn h1_rank_masked(g: &FilteredGraph, t: f64, mask: Option<&[bool]>) -> usize {
    let alive = |i: usize| g.values[i] <= t && mask.is_none_or(|m| m[i]);
    let e = g
        .edges
        .iter()
        .filter(|&&(a, b)| alive(a) && alive(b))
        .count();
    let v = (0..g.len()).filter(|&i| alive(i)).count();
    let c = sublevel(g, t, mask).count();
    e + c - v
}

/// The map on components induced by the inclusion `X_u ⊆ X_v`, keyed by
/// canonical component ids.
pub fn induced_component_map(
    g: &FilteredGraph,
    u: f64,
    v: f64,
) -> Result<BTreeMap<VertexId, VertexId>> {
    if u > v || u.is_nan() || v.is_nan() {
        return Err(Error::Domain(format!(
            "induced map needs u <= v, got u={u}, v={v}"
        )));
    }
    let low = sublevel(g, u, None);
    let high = sublevel(g, v, None);
    let mut map = BTreeMap::new();
    for (i, c) in low.comp.iter().enumerate() {
        if let Some(c) = c {
            let target = high.comp[i].expect("sublevel sets are nested");
            map.insert(low.comp_rep[*c], high.comp_rep[target]);
        }
    }
    Ok(map)
}

/// Whether every component of `X_v` contains a vertex of value `<= u`.
pub fn iota0_is_surjective(g: &FilteredGraph, u: f64, v: f64) -> Result<bool> {
    check_strict(u, v)?;
    let s = sublevel(g, v, None);
    Ok(s.meeting(u) == s.count())
}

/// Sorted, distinct vertex values of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueSet {
    values: Vec<f64>,
}

impl CriticalValueSet {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut values: Vec<f64> = values.into_iter().collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.values.binary_search_by(|c| c.total_cmp(&x)).is_ok()
    }

    /// Smallest positive gap between consecutive values, if there are two or more.
    pub fn min_gap(&self) -> Option<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }

    /// A level strictly between `c` and the next critical value above it
    /// (or `max + 1` past the last one).
    pub fn just_above(&self, c: f64) -> f64 {
        match self.values.iter().find(|&&x| x > c) {
            Some(&next) => 0.5 * (c + next),
            None => c.max(self.max_or(c)) + 1.0,
        }
    }

    /// A level strictly between the previous critical value and `c`
    /// (or `min - 1` before the first one).
    pub fn just_below(&self, c: f64) -> f64 {
        match self.values.iter().rev().find(|&&x| x < c) {
            Some(&prev) => 0.5 * (prev + c),
            None => c.min(self.min_or(c)) - 1.0,
        }
    }

    fn max_or(&self, d: f64) -> f64 {
        self.values.last().copied().unwrap_or(d)
    }

    fn min_or(&self, d: f64) -> f64 {
        self.values.first().copied().unwrap_or(d)
    }
}

pub fn critical_values(g: &FilteredGraph) -> CriticalValueSet {
    CriticalValueSet::from_values(g.values.iter().copied())
}

/// Levels `w` at which the inclusion of the sublevel set just below `w`
/// into `X_w` fails to be a bijection on components.
pub fn homological_0_critical_values(g: &FilteredGraph) -> Vec<f64> {
    let crit = critical_values(g);
    crit.values()
        .iter()
        .copied()
        .filter(|&w| {
            let below = sublevel(g, crit.just_below(w), None);
            let at = sublevel(g, w, None);
            let mut hit = vec![false; at.count()];
            let mut image_of = vec![None; below.count()];
            for (i, c) in below.comp.iter().enumerate() {
                if let Some(c) = *c {
                    let target = at.comp[i].expect("sublevel sets are nested");
                    match image_of[c] {
                        None => image_of[c] = Some(target),
                        Some(t) => debug_assert_eq!(t, target),
                    }
                }
            }
            for t in image_of.into_iter().flatten() {
                if hit[t] {
                    // two components merged
                    return true;
                }
                hit[t] = true;
            }
            hit.iter().any(|h| !h)
        })
        .collect()
}

pub(crate) fn check_strict(u: f64, v: f64) -> Result<()> {
    if u < v {
        Ok(())
    } else {
        Err(Error::Domain(format!("expected u < v, got u={u}, v={v}")))
    }
}
