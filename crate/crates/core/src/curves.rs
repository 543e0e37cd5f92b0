//! Combinatorial index budgets for punctured nodal genus-0 curves split
//! along the boundary of a tubular neighborhood `U_0` of the Lagrangian.
//!
//! A curve is encoded by a tree: vertices are irreducible components
//! (carrying a region, a covering degree, and a Maslov number which
//! vanishes inside `U_0`), valence-2 edges are nodes labeled by the type of
//! the limiting closed geodesic, and valence-1 edges are punctures or
//! marked points. The per-component real index follows the punctured
//! Riemann-Roch count with the Conley-Zehnder constants
//! `μ_CZ(A, inside) = 1`, `μ_CZ(A, outside) = 2`, `μ_CZ(B) = 0` in the
//! untwisted frame (overridable per edge for twisted trivializations).

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Result, SolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    InsideU0,
    OutsideU0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctureType {
    A,
    B,
}

/// Irreducible component of the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub region: Region,
    /// Covering degree of the component over its image (≥ 1).
    pub degree: u32,
    /// Maslov number `μ(D)`; must vanish inside `U_0`.
    pub maslov: i64,
}

/// Edge of the encoding tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    /// Valence-2 edge: a node of the curve, limiting on a closed geodesic
    /// of the given type. The endpoints must lie in different regions.
    Node { ends: (usize, usize), ptype: PunctureType, cz_override: Option<i64> },
    /// Valence-1 edge: a puncture (typed) or a marked point (untyped).
    Puncture { vertex: usize, ptype: Option<PunctureType>, cz_override: Option<i64> },
}

impl Edge {
    fn touches(&self, v: usize) -> bool {
        match *self {
            Edge::Node { ends, .. } => ends.0 == v || ends.1 == v,
            Edge::Puncture { vertex, .. } => vertex == v,
        }
    }
}

/// A punctured nodal genus-0 curve (or a region restriction of one).
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTree {
    /// Number of constraint points from the defining Gromov-Witten count.
    pub k: i64,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl CurveTree {
    /// Structural validation: index ranges, region alternation across
    /// nodes, acyclicity of the node graph, vanishing inside Maslov
    /// numbers, positive covering degrees.
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(SolError::InvalidInput(String::from("k must be at least 2")));
        }
        let n = self.vertices.len();
        if n == 0 {
            return Err(SolError::InvalidInput(String::from("curve needs at least one component")));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.degree == 0 {
                return Err(SolError::InvalidInput(alloc::format!(
                    "component {i} has covering degree 0"
                )));
            }
            if v.region == Region::InsideU0 && v.maslov != 0 {
                return Err(SolError::InvalidInput(alloc::format!(
                    "component {i} is inside U0 but has nonzero Maslov number"
                )));
            }
        }
        let mut uf = UnionFind::new(n);
        for (e, edge) in self.edges.iter().enumerate() {
            match *edge {
                Edge::Node { ends: (a, b), .. } => {
                    if a >= n || b >= n {
                        return Err(SolError::InvalidInput(alloc::format!(
                            "edge {e} references a missing component"
                        )));
                    }
                    if a == b {
                        return Err(SolError::InvalidInput(alloc::format!("edge {e} is a loop")));
                    }
                    if self.vertices[a].region == self.vertices[b].region {
                        return Err(SolError::InvalidInput(alloc::format!(
                            "node {e} joins two components of the same region"
                        )));
                    }
                    if !uf.union(a, b) {
                        return Err(SolError::InvalidInput(String::from(
                            "node edges must form a forest",
                        )));
                    }
                }
                Edge::Puncture { vertex, .. } => {
                    if vertex >= n {
                        return Err(SolError::InvalidInput(alloc::format!(
                            "edge {e} references a missing component"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the node graph is connected (a single curve).
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        let mut components = n;
        for edge in &self.edges {
            if let Edge::Node { ends: (a, b), .. } = *edge {
                if uf.union(a, b) {
                    components -= 1;
                }
            }
        }
        components == 1
    }

    fn node_valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| matches!(e, Edge::Node { ends, .. } if ends.0 == v || ends.1 == v))
            .count()
    }

    /// Punctures of a component by type, counting node ends and typed
    /// valence-1 punctures alike, with their effective μ_CZ values.
    fn punctures_of(&self, v: usize) -> Vec<(PunctureType, Option<i64>)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if !e.touches(v) {
                continue;
            }
            match *e {
                Edge::Node { ptype, cz_override, .. } => out.push((ptype, cz_override)),
                Edge::Puncture { ptype: Some(p), cz_override, .. } => out.push((p, cz_override)),
                Edge::Puncture { ptype: None, .. } => {}
            }
        }
        out
    }

    /// Number of type-A node edges (closed type-A geodesics at the nodes).
    pub fn type_a_node_count(&self) -> i64 {
        self.edges
            .iter()
            .filter(|e| matches!(e, Edge::Node { ptype: PunctureType::A, .. }))
            .count() as i64
    }

    pub fn maslov_total(&self) -> i64 {
        self.vertices.iter().map(|v| v.maslov).sum()
    }
}

/// A nodal genus-0 curve is string-like when every component carries at
/// most two nodes (valence-1 punctures do not count).
pub fn is_string_like(c: &CurveTree) -> Result<bool> {
    c.validate()?;
    Ok((0..c.vertices.len()).all(|v| c.node_valence(v) <= 2))
}

/// Real index of one component by the punctured Riemann-Roch count:
/// inside `U_0` it is `#A + Σ μ_CZ(p)` with `μ(D) = 0`, outside it is
/// `#A - Σ μ_CZ(p) + μ(D)`; with the default constants this reduces to
/// `2 #A` inside and `-#A + μ(D) - Σ_B μ_CZ(p)` outside.
pub fn component_index(c: &CurveTree, v: usize) -> Result<i64> {
    c.validate()?;
    if v >= c.vertices.len() {
        return Err(SolError::InvalidInput(String::from("no such component")));
    }
    let vert = c.vertices[v];
    let punctures = c.punctures_of(v);
    let mut count_a = 0i64;
    let mut cz_sum = 0i64;
    for (ptype, over) in punctures {
        let default = match (ptype, vert.region) {
            (PunctureType::A, Region::InsideU0) => 1,
            (PunctureType::A, Region::OutsideU0) => 2,
            (PunctureType::B, _) => 0,
        };
        if ptype == PunctureType::A {
            count_a += 1;
        }
        cz_sum += over.unwrap_or(default);
    }
    Ok(match vert.region {
        Region::InsideU0 => count_a + cz_sum,
        Region::OutsideU0 => count_a - cz_sum + vert.maslov,
    })
}

/// Documented branched-covering comparison: a degree-`d` covering can only
/// increase the index, `ind(D) ≥ d · ind(D')`.
pub fn covering_index_check(d: u32, ind_cover: i64, ind_base: i64) -> bool {
    ind_cover >= d as i64 * ind_base
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetStatus {
    /// A constraint assignment exhausts every component's index exactly.
    Rigid,
    /// More constraints than freedom.
    Overdetermined,
    /// Leftover freedom.
    Underdetermined,
    /// Totals balance but no per-component assignment exists.
    Obstructed,
}

/// Two-sided index budget of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub per_component: Vec<i64>,
    pub total_index: i64,
    /// `μ(C) + #{type-A nodes}`: the freedom side of the budget.
    pub freedom_budget: i64,
    /// `#{type-A nodes} + 4 + 2(k - 2)`: the constraint side.
    pub required_constraints: i64,
    /// `total_index - freedom_budget`; zero when the displayed index sum
    /// identity holds (no typed valence-1 punctures breaking it).
    pub identity_gap: i64,
    pub status: BudgetStatus,
}

impl IndexReport {
    pub fn is_rigid(&self) -> bool {
        self.status == BudgetStatus::Rigid
    }
}

/// Search for a constraint assignment that exhausts every component:
/// the point constraint (weight 4) goes to one inside component, each
/// type-A node constraint (weight 1) to one of its two ends, and the
/// `2(k-2)` conformal constraints spread over outside components in even
/// amounts.
fn rigid_assignment_exists(c: &CurveTree, indices: &[i64]) -> bool {
    let n = c.vertices.len();
    let a_nodes: Vec<(usize, usize)> = c
        .edges
        .iter()
        .filter_map(|e| match *e {
            Edge::Node { ends, ptype: PunctureType::A, .. } => Some(ends),
            _ => None,
        })
        .collect();
    if a_nodes.len() > 20 {
        return false; // assignment search is meant for small curves
    }
    let conformal = 2 * (c.k - 2);
    let inside: Vec<usize> =
        (0..n).filter(|&v| c.vertices[v].region == Region::InsideU0).collect();

    for &x_comp in &inside {
        for mask in 0..(1u32 << a_nodes.len()) {
            let mut assigned = alloc::vec![0i64; n];
            assigned[x_comp] += 4;
            for (bit, &(a, b)) in a_nodes.iter().enumerate() {
                let side = if mask & (1 << bit) == 0 { a } else { b };
                assigned[side] += 1;
            }
            let mut feasible = true;
            let mut outside_residual = 0i64;
            for v in 0..n {
                let r = indices[v] - assigned[v];
                match c.vertices[v].region {
                    Region::InsideU0 => {
                        if r != 0 {
                            feasible = false;
                            break;
                        }
                    }
                    Region::OutsideU0 => {
                        if r < 0 || r % 2 != 0 {
                            feasible = false;
                            break;
                        }
                        outside_residual += r;
                    }
                }
            }
            if feasible && outside_residual == conformal {
                return true;
            }
        }
    }
    false
}

/// Compute both sides of the index budget and classify the configuration.
pub fn freedom_budget(c: &CurveTree) -> Result<IndexReport> {
    c.validate()?;
    if !c.is_connected() {
        return Err(SolError::InvalidInput(String::from(
            "budget applies to a connected curve",
        )));
    }
    let per_component: Vec<i64> =
        (0..c.vertices.len()).map(|v| component_index(c, v)).collect::<Result<_>>()?;
    let total_index: i64 = per_component.iter().sum();
    let a_nodes = c.type_a_node_count();
    let freedom_budget_side = c.maslov_total() + a_nodes;
    let required_constraints = a_nodes + 4 + 2 * (c.k - 2);
    let identity_gap = total_index - freedom_budget_side;

    let status = if rigid_assignment_exists(c, &per_component) {
        BudgetStatus::Rigid
    } else if total_index < required_constraints {
        BudgetStatus::Overdetermined
    } else if total_index > required_constraints {
        BudgetStatus::Underdetermined
    } else {
        BudgetStatus::Obstructed
    };

    Ok(IndexReport {
        per_component,
        total_index,
        freedom_budget: freedom_budget_side,
        required_constraints,
        identity_gap,
        status,
    })
}

/// Plain forest: the combinatorial type of the restriction of a curve to
/// `U_0`, with boundary nodes included as leaf vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Quantities of the Euler-formula vertex bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerReport {
    pub vertices: usize,
    pub edges: usize,
    /// Number of trees, counted by connectivity.
    pub trees: usize,
    /// `2t` computed from valences: `2#S - Σ v(s)`.
    pub t_doubled_from_valences: i64,
    pub leaves: usize,
    /// `#{s : v(s) ≥ 3}`
    pub branch_vertices: usize,
    /// `Σ_{v(s) ≥ 3} (v(s) - 2)`
    pub branch_excess: i64,
    /// `#S - #A = t`
    pub euler_identity_holds: bool,
    /// `½ #{v ≥ 3} < t + ½ Σ_{v≥3}(v-2) ≤ ½ N₀`
    pub chain_holds: bool,
}

impl EulerReport {
    pub fn pass(&self) -> bool {
        self.euler_identity_holds && self.chain_holds
    }
}

/// Check the Euler-formula bound on a forest with at most `n0` leaves.
pub fn euler_vertex_bound(forest: &Forest, n0: u32) -> Result<EulerReport> {
    let n = forest.vertex_count;
    if n == 0 {
        return Err(SolError::InvalidInput(String::from("empty forest")));
    }
    let mut valence = alloc::vec![0usize; n];
    let mut uf = UnionFind::new(n);
    let mut trees = n;
    for &(a, b) in &forest.edges {
        if a >= n || b >= n || a == b {
            return Err(SolError::InvalidInput(String::from("bad edge")));
        }
        valence[a] += 1;
        valence[b] += 1;
        if !uf.union(a, b) {
            return Err(SolError::InvalidInput(String::from("graph has a cycle")));
        }
        trees -= 1;
    }
    if valence.iter().any(|&v| v == 0) {
        return Err(SolError::InvalidInput(String::from(
            "every component must carry at least one special point",
        )));
    }
    let leaves = valence.iter().filter(|&&v| v == 1).count();
    if leaves as u32 > n0 {
        return Err(SolError::InvalidInput(alloc::format!(
            "leaf count {leaves} exceeds N0 = {n0}"
        )));
    }
    let valence_sum: i64 = valence.iter().map(|&v| v as i64).sum();
    let t_doubled = 2 * n as i64 - valence_sum;
    let branch_vertices = valence.iter().filter(|&&v| v >= 3).count();
    let branch_excess: i64 = valence.iter().filter(|&&v| v >= 3).map(|&v| v as i64 - 2).sum();

    let euler_identity_holds = t_doubled == 2 * trees as i64;
    // ½#{v≥3} < t + ½Σ(v-2) ≤ ½N₀, in doubled integers.
    let mid_doubled = t_doubled + branch_excess;
    let chain_holds =
        (branch_vertices as i64) < mid_doubled && mid_doubled <= n0 as i64;

    Ok(EulerReport {
        vertices: n,
        edges: forest.edges.len(),
        trees,
        t_doubled_from_valences: t_doubled,
        leaves,
        branch_vertices,
        branch_excess,
        euler_identity_holds,
        chain_holds,
    })
}

impl CurveTree {
    /// Restriction to `U_0`: inside components keep their mutual structure
    /// (none, since nodes alternate regions) and every edge leaving an
    /// inside component becomes an edge to a fresh leaf vertex.
    pub fn inside_forest(&self) -> Forest {
        let mut index_of = alloc::vec![usize::MAX; self.vertices.len()];
        let mut count = 0usize;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.region == Region::InsideU0 {
                index_of[i] = count;
                count += 1;
            }
        }
        let mut edges = Vec::new();
        let mut next = count;
        for e in &self.edges {
            match *e {
                Edge::Node { ends: (a, b), .. } => {
                    for v in [a, b] {
                        if index_of[v] != usize::MAX {
                            edges.push((index_of[v], next));
                            next += 1;
                        }
                    }
                }
                Edge::Puncture { vertex, .. } => {
                    if index_of[vertex] != usize::MAX {
                        edges.push((index_of[vertex], next));
                        next += 1;
                    }
                }
            }
        }
        Forest { vertex_count: next, edges }
    }
}
