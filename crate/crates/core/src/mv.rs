//! Covers `X = A ∪ B` of a filtered graph and the 0th-degree Mayer-Vietoris
//! bookkeeping relating the size functions of `X`, `A`, `B` and `A ∩ B`.
//!
//! At a level `v` the map `α_v` sends each component `c` of `(A∩B)_v` to
//! `(A-component of c, −B-component of c)`. Its relative analogue
//! `α_{v,u}` acts on components of `(A∩B)_v` not meeting `(A∩B)_u` and
//! lands in the classes of `A_v` and `B_v` components not meeting `A_u`
//! and `B_u`. For a valid cover
//!
//! ```text
//! ℓ_X(u,v) = ℓ_A(u,v) + ℓ_B(u,v) − ℓ_{A∩B}(u,v) + rank ker α_v − rank ker α_{v,u}
//! ```
//!
//! holds exactly; [`mv_relation`] reports every term of it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::graph::{
    check_strict, critical_values, h0_rank, h1_rank, homological_0_critical_values,
    parse_graph_lines, sublevel, CriticalValueSet, FilteredGraph, Sublevel, VertexId,
};
use crate::linalg::IntMatrix;
use crate::sizefn::{cornerpoints, limit_epsilon};
use crate::unionfind::UnionFind;

/// A graph together with two vertex subsets meant to cover it.
///
/// Construction does not check the cover; see [`validate`]. The relations
/// in this module are only guaranteed for decompositions that validate.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    x: FilteredGraph,
    a: Vec<bool>,
    b: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    X,
    A,
    B,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A vertex in neither `A` nor `B`.
    UncoveredVertex(VertexId),
    /// An edge lying in neither `A` nor `B`.
    UncoveredEdge(VertexId, VertexId),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UncoveredVertex(v) => write!(f, "vertex {v} is in neither A nor B"),
            Violation::UncoveredEdge(a, b) => {
                write!(f, "edge {a}-{b} has no side containing both endpoints")
            }
        }
    }
}

impl Decomposition {
    /// Builds a decomposition from vertex ids; unknown ids are rejected.
    pub fn new(
        x: FilteredGraph,
        a: impl IntoIterator<Item = VertexId>,
        b: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self> {
        let mask = |ids: &mut dyn Iterator<Item = VertexId>| -> Result<Vec<bool>> {
            let mut m = vec![false; x.len()];
            for id in ids {
                let i = x
                    .index_of(id)
                    .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {id} in cover")))?;
                m[i] = true;
            }
            Ok(m)
        };
        let a = mask(&mut a.into_iter())?;
        let b = mask(&mut b.into_iter())?;
        Ok(Self { x, a, b })
    }

    /// Builds a decomposition from membership masks indexed like `x.ids()`.
    pub fn from_masks(x: FilteredGraph, a: Vec<bool>, b: Vec<bool>) -> Self {
        assert_eq!(a.len(), x.len());
        assert_eq!(b.len(), x.len());
        Self { x, a, b }
    }

    /// Graph records followed by `A <id>` / `B <id>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut a_ids = Vec::new();
        let mut b_ids = Vec::new();
        let (vertices, edges) = parse_graph_lines(text, |line, tag, rest| {
            let target = match tag {
                "A" => &mut a_ids,
                "B" => &mut b_ids,
                _ => return Ok(false),
            };
            match rest {
                [id] => {
                    let id: VertexId = id.parse().map_err(|_| Error::Parse {
                        line,
                        message: "invalid vertex id".into(),
                    })?;
                    target.push(id);
                    Ok(true)
                }
                _ => Err(Error::Parse {
                    line,
                    message: format!("expected `{tag} <id>`"),
                }),
            }
        })?;
        Self::new(FilteredGraph::new(vertices, edges)?, a_ids, b_ids)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.x.to_text();
        for (i, id) in self.x.ids().iter().enumerate() {
            if self.a[i] {
                let _ = writeln!(out, "A {id}");
            }
        }
        for (i, id) in self.x.ids().iter().enumerate() {
            if self.b[i] {
                let _ = writeln!(out, "B {id}");
            }
        }
        out
    }

    pub fn x(&self) -> &FilteredGraph {
        &self.x
    }

    pub fn mask(&self, part: Part) -> Vec<bool> {
        match part {
            Part::X => vec![true; self.x.len()],
            Part::A => self.a.clone(),
            Part::B => self.b.clone(),
            Part::Intersection => self.a.iter().zip(&self.b).map(|(&p, &q)| p && q).collect(),
        }
    }

    /// The induced subgraph carrying the restricted measuring function.
    pub fn part(&self, part: Part) -> FilteredGraph {
        self.x.induced(&self.mask(part))
    }

    pub fn criticals(&self) -> CriticalValueSet {
        critical_values(&self.x)
    }

    fn levels(&self, v: f64) -> Levels {
        let ab = self.mask(Part::Intersection);
        Levels {
            x: sublevel(&self.x, v, None),
            a: sublevel(&self.x, v, Some(&self.a)),
            b: sublevel(&self.x, v, Some(&self.b)),
            ab: sublevel(&self.x, v, Some(&ab)),
        }
    }
}

/// Every vertex and edge not covered by `A` or `B`.
pub fn validate(d: &Decomposition) -> std::result::Result<(), Vec<Violation>> {
    let ids = d.x.ids();
    let mut violations: Vec<Violation> = (0..d.x.len())
        .filter(|&i| !d.a[i] && !d.b[i])
        .map(|i| Violation::UncoveredVertex(ids[i]))
        .collect();
    violations.extend(
        d.x.edges()
            .iter()
            .filter(|&&(p, q)| !(d.a[p] && d.a[q]) && !(d.b[p] && d.b[q]))
            .map(|&(p, q)| Violation::UncoveredEdge(ids[p], ids[q])),
    );
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Components of `X_v`, `A_v`, `B_v` and `(A∩B)_v`, all indexed by vertices of `X`.
struct Levels {
    x: Sublevel,
    a: Sublevel,
    b: Sublevel,
    ab: Sublevel,
}

impl Levels {
    /// For each component of `(A∩B)_v`, its `A_v` and `B_v` components.
    fn ab_endpoints(&self) -> Vec<(usize, usize)> {
        let mut ends = vec![None; self.ab.count()];
        for (i, c) in self.ab.comp.iter().enumerate() {
            if let Some(c) = *c {
                if ends[c].is_none() {
                    let ca = self.a.comp[i].expect("A∩B vertex lies in A");
                    let cb = self.b.comp[i].expect("A∩B vertex lies in B");
                    ends[c] = Some((ca, cb));
                }
            }
        }
        ends.into_iter()
            .map(|e| e.expect("nonempty component"))
            .collect()
    }

    fn ker_alpha_v_nerve(&self) -> usize {
        let na = self.a.count();
        let mut uf = UnionFind::new(na + self.b.count());
        self.ab_endpoints()
            .into_iter()
            .filter(|&(ca, cb)| !uf.union(ca, na + cb))
            .count()
    }

    fn alpha_v_matrix(&self) -> IntMatrix {
        let na = self.a.count();
        let ends = self.ab_endpoints();
        let mut m = IntMatrix::zeros(na + self.b.count(), ends.len());
        for (c, &(ca, cb)) in ends.iter().enumerate() {
            m.set(ca, c, 1);
            m.set(na + cb, c, -1);
        }
        m
    }

    /// Matrix of `α_{v,u}` in the bases of components not meeting level `u`.
    fn alpha_vu_matrix(&self, u: f64) -> IntMatrix {
        let rel_index = |s: &Sublevel| -> Vec<Option<usize>> {
            let mut next = 0;
            s.comp_min
                .iter()
                .map(|&m| {
                    (m > u).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let ra = rel_index(&self.a);
        let rb = rel_index(&self.b);
        let na = ra.iter().flatten().count();
        let nb = rb.iter().flatten().count();
        let domain: Vec<(usize, usize)> = self
            .ab_endpoints()
            .into_iter()
            .enumerate()
            .filter(|&(c, _)| self.ab.comp_min[c] > u)
            .map(|(_, e)| e)
            .collect();
        let mut m = IntMatrix::zeros(na + nb, domain.len());
        for (col, &(ca, cb)) in domain.iter().enumerate() {
            if let Some(r) = ra[ca] {
                m.set(r, col, 1);
            }
            if let Some(r) = rb[cb] {
                m.set(na + r, col, -1);
            }
        }
        m
    }

    /// `α` on persistent classes and `β` on persistent classes of `A` and `B`.
    fn persistent_maps(&self, u: f64) -> (IntMatrix, IntMatrix) {
        let keep_index = |s: &Sublevel| -> Vec<Option<usize>> {
            let mut next = 0;
            s.comp_min
                .iter()
                .map(|&m| {
                    (m <= u).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let pa = keep_index(&self.a);
        let pb = keep_index(&self.b);
        let na = pa.iter().flatten().count();
        let nb = pb.iter().flatten().count();
        let domain: Vec<(usize, usize)> = self
            .ab_endpoints()
            .into_iter()
            .enumerate()
            .filter(|&(c, _)| self.ab.comp_min[c] <= u)
            .map(|(_, e)| e)
            .collect();
        let mut alpha = IntMatrix::zeros(na + nb, domain.len());
        for (col, &(ca, cb)) in domain.iter().enumerate() {
            let ra = pa[ca].expect("a persistent class lies in a persistent A component");
            let rb = pb[cb].expect("a persistent class lies in a persistent B component");
            alpha.set(ra, col, 1);
            alpha.set(na + rb, col, -1);
        }
        let mut beta = IntMatrix::zeros(self.x.count(), na + nb);
        for (i, xc) in self.x.comp.iter().enumerate() {
            let Some(xc) = *xc else { continue };
            if let Some(r) = self.a.comp[i].and_then(|c| pa[c]) {
                beta.set(xc, r, 1);
            }
            if let Some(r) = self.b.comp[i].and_then(|c| pb[c]) {
                beta.set(xc, na + r, 1);
            }
        }
        (alpha, beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    NerveCycleRank,
    GaussianElimination,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelRankReport {
    pub v: f64,
    pub u: Option<f64>,
    pub rank_ker_alpha: usize,
    pub method: KernelMethod,
}

/// `rank ker α_v` as the cycle rank of the bipartite nerve whose vertices
/// are the components of `A_v` and `B_v` and whose edges are the
/// components of `(A∩B)_v`.
pub fn ker_alpha_v_rank(d: &Decomposition, v: f64) -> usize {
    d.levels(v).ker_alpha_v_nerve()
}

pub fn ker_alpha_v_report(d: &Decomposition, v: f64, method: KernelMethod) -> KernelRankReport {
    let levels = d.levels(v);
    let rank_ker_alpha = match method {
        KernelMethod::NerveCycleRank => levels.ker_alpha_v_nerve(),
        KernelMethod::GaussianElimination => levels.alpha_v_matrix().nullity(),
    };
    KernelRankReport {
        v,
        u: None,
        rank_ker_alpha,
        method,
    }
}

/// `rank ker α_{v,u}` by exact elimination.
pub fn ker_alpha_vu_rank(d: &Decomposition, v: f64, u: f64) -> Result<usize> {
    check_strict(u, v)?;
    Ok(d.levels(v).alpha_vu_matrix(u).nullity())
}

pub fn ker_alpha_vu_report(d: &Decomposition, v: f64, u: f64) -> Result<KernelRankReport> {
    Ok(KernelRankReport {
        v,
        u: Some(u),
        rank_ker_alpha: ker_alpha_vu_rank(d, v, u)?,
        method: KernelMethod::GaussianElimination,
    })
}

/// Every term of the corrected inclusion-exclusion relation at `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MvRelation {
    pub l_x: usize,
    pub l_a: usize,
    pub l_b: usize,
    pub l_ab: usize,
    pub ker_v: usize,
    pub ker_vu: usize,
}

impl MvRelation {
    pub fn lhs(&self) -> i64 {
        self.l_x as i64
    }

    /// `ℓ_A + ℓ_B − ℓ_{A∩B}`.
    pub fn rhs_basic(&self) -> i64 {
        self.l_a as i64 + self.l_b as i64 - self.l_ab as i64
    }

    /// `rank ker α_v − rank ker α_{v,u}`.
    pub fn correction(&self) -> i64 {
        self.ker_v as i64 - self.ker_vu as i64
    }

    pub fn holds_basic(&self) -> bool {
        self.correction() == 0
    }

    /// `lhs − rhs_basic − correction`; zero for every valid cover.
    pub fn identity_residual(&self) -> i64 {
        self.lhs() - self.rhs_basic() - self.correction()
    }
}

fn relation_at(levels: &Levels, u: f64) -> MvRelation {
    MvRelation {
        l_x: levels.x.meeting(u),
        l_a: levels.a.meeting(u),
        l_b: levels.b.meeting(u),
        l_ab: levels.ab.meeting(u),
        ker_v: levels.ker_alpha_v_nerve(),
        ker_vu: levels.alpha_vu_matrix(u).nullity(),
    }
}

pub fn mv_relation(d: &Decomposition, u: f64, v: f64) -> Result<MvRelation> {
    check_strict(u, v)?;
    Ok(relation_at(&d.levels(v), u))
}

/// One row of the relation per critical grid point `(c_i, c_j)`, `i < j`.
pub fn mv_grid(d: &Decomposition) -> Vec<(f64, f64, MvRelation)> {
    let crit = d.criticals();
    let c = crit.values();
    let mut rows = Vec::new();
    for j in 1..c.len() {
        let levels = d.levels(c[j]);
        for &u in &c[..j] {
            rows.push((u, c[j], relation_at(&levels, u)));
        }
    }
    rows
}

/// The mv-report CSV: `u,v,l_x,l_a,l_b,l_ab,ker_v,ker_vu,holds_basic,identity`.
pub fn mv_report_csv(d: &Decomposition) -> String {
    let mut out = String::from("u,v,l_x,l_a,l_b,l_ab,ker_v,ker_vu,holds_basic,identity\n");
    for (u, v, r) in mv_grid(d) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_real(u),
            fmt_real(v),
            r.l_x,
            r.l_a,
            r.l_b,
            r.l_ab,
            r.ker_v,
            r.ker_vu,
            r.holds_basic(),
            r.identity_residual()
        );
    }
    out
}

/// Levels `v' > v` at which a function of `v'` must be probed: a level just
/// above `v`, every critical value above `v`, and one past the maximum.
fn levels_above(crit: &CriticalValueSet, v: f64) -> Vec<f64> {
    let mut probes = vec![crit.just_above(v)];
    probes.extend(crit.values().iter().copied().filter(|&c| c > v));
    probes.push(crit.values().last().copied().unwrap_or(v).max(v) + 1.0);
    probes
}

/// `ℓ_{A∩B}(u, v') = ℓ_{A∩B}(v, v') <= 1` for every `v' > v`.
pub fn suff0_holds(d: &Decomposition, u: f64, v: f64) -> Result<bool> {
    check_strict(u, v)?;
    let ab = d.mask(Part::Intersection);
    Ok(levels_above(&d.criticals(), v).into_iter().all(|w| {
        let s = sublevel(&d.x, w, Some(&ab));
        let (at_u, at_v) = (s.meeting(u), s.meeting(v));
        at_u == at_v && at_v <= 1
    }))
}

/// `rank H_1(X_v) = 0` and `rank H_0(X_u) = ℓ_X(u, v)`.
pub fn suff3_holds(d: &Decomposition, u: f64, v: f64) -> Result<bool> {
    check_strict(u, v)?;
    Ok(h1_rank(&d.x, v) == 0 && h0_rank(&d.x, u) == sublevel(&d.x, v, None).meeting(u))
}

/// Exactness of `0 → H^{u,v}(A∩B) → H^{u,v}(A) ⊕ H^{u,v}(B) → H^{u,v}(X) → 0`:
/// `α` injective on persistent classes and `ℓ_X = ℓ_A + ℓ_B − ℓ_{A∩B}`.
pub fn persistent_mv_exact(d: &Decomposition, u: f64, v: f64) -> Result<bool> {
    check_strict(u, v)?;
    let levels = d.levels(v);
    let (alpha, _) = levels.persistent_maps(u);
    let rel = relation_at(&levels, u);
    Ok(alpha.nullity() == 0 && rel.lhs() == rel.rhs_basic())
}

/// `rank ker α` for `α` restricted to persistent classes of `A∩B`.
pub fn persistent_alpha_kernel_rank(d: &Decomposition, u: f64, v: f64) -> Result<usize> {
    check_strict(u, v)?;
    Ok(d.levels(v).persistent_maps(u).0.nullity())
}

/// `β ∘ α = 0` on persistent classes.
pub fn order2_holds(d: &Decomposition, u: f64, v: f64) -> Result<bool> {
    check_strict(u, v)?;
    let (alpha, beta) = d.levels(v).persistent_maps(u);
    Ok(beta.mul(&alpha).is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicityRelation {
    pub mu_x: i64,
    pub mu_a: i64,
    pub mu_b: i64,
    pub mu_ab: i64,
    /// `ker α_{v−ε,u−ε} − ker α_{v−ε,u+ε} + ker α_{v+ε,u+ε} − ker α_{v+ε,u−ε}`.
    pub rhs_limit: i64,
}

impl MultiplicityRelation {
    pub fn lhs(&self) -> i64 {
        self.mu_x - self.mu_a - self.mu_b + self.mu_ab
    }

    pub fn holds(&self) -> bool {
        self.lhs() == self.rhs_limit
    }
}

pub fn multiplicity_relation(d: &Decomposition, u: f64, v: f64) -> Result<MultiplicityRelation> {
    check_strict(u, v)?;
    let eps = limit_epsilon(&d.criticals(), &[u, v]);
    let below = d.levels(v - eps);
    let above = d.levels(v + eps);
    let (lo, hi) = (u - eps, u + eps);
    let mu = |pick: fn(&Levels) -> &Sublevel| -> i64 {
        let (b, a) = (pick(&below), pick(&above));
        b.meeting(hi) as i64 - b.meeting(lo) as i64 - a.meeting(hi) as i64 + a.meeting(lo) as i64
    };
    let ker = |l: &Levels, at: f64| l.alpha_vu_matrix(at).nullity() as i64;
    Ok(MultiplicityRelation {
        mu_x: mu(|l| &l.x),
        mu_a: mu(|l| &l.a),
        mu_b: mu(|l| &l.b),
        mu_ab: mu(|l| &l.ab),
        rhs_limit: ker(&below, lo) - ker(&below, hi) + ker(&above, hi) - ker(&above, lo),
    })
}

/// Where a proper cornerpoint of `ℓ_X` comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperProvenance {
    pub u: f64,
    pub v: f64,
    /// `u` is the abscissa of a cornerpoint of `ℓ_A`, `ℓ_B` or `ℓ_{A∩B}`.
    pub abscissa_found: bool,
    /// `v` is a homological 0-critical value of `A`, `B` or `A∩B`.
    pub ordinate_critical: bool,
    /// The kernel-rank limit is `<= 0`.
    pub kernel_condition: bool,
    /// The point is a proper cornerpoint of `ℓ_A` or `ℓ_B`.
    pub in_a_or_b: bool,
}

impl ProperProvenance {
    pub fn holds(&self) -> bool {
        self.abscissa_found && self.ordinate_critical && (!self.kernel_condition || self.in_a_or_b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinityProvenance {
    pub u: f64,
    /// `(u, ∞)` is a cornerpoint at infinity of `ℓ_A` or `ℓ_B`.
    pub in_a_or_b: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProvenanceReport {
    pub proper: Vec<ProperProvenance>,
    pub at_infinity: Vec<InfinityProvenance>,
}

impl ProvenanceReport {
    pub fn all_hold(&self) -> bool {
        self.proper.iter().all(ProperProvenance::holds)
            && self.at_infinity.iter().all(|p| p.in_a_or_b)
    }
}

pub fn provenance_report(d: &Decomposition) -> ProvenanceReport {
    let cs_x = cornerpoints(&d.x);
    let parts = [Part::A, Part::B, Part::Intersection].map(|p| d.part(p));
    let cs = parts.clone().map(|g| cornerpoints(&g));
    let bits = |x: f64| x.to_bits();
    let abscissas: BTreeSet<u64> = cs
        .iter()
        .flat_map(|c| c.iter().map(|p| bits(p.u)))
        .collect();
    let hcrit: BTreeSet<u64> = parts
        .iter()
        .flat_map(|g| homological_0_critical_values(g).into_iter().map(bits))
        .collect();
    let proper = cs_x
        .proper
        .iter()
        .map(|p| {
            let rel = multiplicity_relation(d, p.u, p.v).expect("cornerpoints satisfy u < v");
            ProperProvenance {
                u: p.u,
                v: p.v,
                abscissa_found: abscissas.contains(&bits(p.u)),
                ordinate_critical: hcrit.contains(&bits(p.v)),
                kernel_condition: rel.rhs_limit <= 0,
                in_a_or_b: cs[0].multiplicity_at(p.u, p.v) > 0
                    || cs[1].multiplicity_at(p.u, p.v) > 0,
            }
        })
        .collect();
    let at_infinity = cs_x
        .at_infinity
        .iter()
        .map(|p| InfinityProvenance {
            u: p.u,
            in_a_or_b: cs[0].multiplicity_at(p.u, p.v) > 0 || cs[1].multiplicity_at(p.u, p.v) > 0,
        })
        .collect();
    ProvenanceReport {
        proper,
        at_infinity,
    }
}
