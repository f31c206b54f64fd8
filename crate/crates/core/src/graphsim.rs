// SPDX-License-Identifier: Apache-2.0

//! Dynamic-network harness for comparing centrality rankings over time.
//!
//! A Barabási–Albert graph is churned step by step: a normally distributed
//! number of random vertices is removed, then a normally distributed number
//! of vertices is attached by preferential attachment. After each step the
//! top-k eigenvector-centrality ranking is compared with the previous one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ranksim::{kendall_tau_truncated, normalized_overlap, pearson, similarity_s, TruncatedRanking};

pub type VertexId = u64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("power iteration did not converge in {iterations} iterations (last delta {delta:e})")]
    NotConverged {
        iterations: usize,
        delta: f64,
        last: BTreeMap<VertexId, f64>,
    },
    #[error("k = {k} exceeds the {available} scored vertices")]
    KTooLarge { k: usize, available: usize },
    #[error("graph is empty")]
    EmptyGraph,
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::InvalidParams(_) => "InvalidParams",
            GraphError::NotConverged { .. } => "NotConverged",
            GraphError::KTooLarge { .. } => "KTooLarge",
            GraphError::EmptyGraph => "EmptyGraph",
        }
    }
}

/// Undirected simple graph with stable integer vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    next_id: VertexId,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.adj.insert(id, BTreeSet::new());
        id
    }

    /// Returns false for self-loops, parallel edges and unknown endpoints.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        if a == b || !self.adj.contains_key(&a) || !self.adj.contains_key(&b) {
            return false;
        }
        if !self.adj.get_mut(&a).unwrap().insert(b) {
            return false;
        }
        self.adj.get_mut(&b).unwrap().insert(a);
        true
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        let Some(neighbours) = self.adj.remove(&v) else {
            return false;
        };
        for u in neighbours {
            if let Some(set) = self.adj.get_mut(&u) {
                set.remove(&v);
            }
        }
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn contains_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj
            .iter()
            .flat_map(|(&a, set)| set.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    /// Checks the simple-graph invariants.
    pub fn audit(&self) -> Result<(), String> {
        for (&v, set) in &self.adj {
            if set.contains(&v) {
                return Err(format!("self-loop at {v}"));
            }
            for &u in set {
                match self.adj.get(&u) {
                    None => return Err(format!("edge {v}-{u} has a dangling endpoint")),
                    Some(back) if !back.contains(&v) => {
                        return Err(format!("edge {v}-{u} is not symmetric"))
                    }
                    _ => {}
                }
            }
            if v >= self.next_id {
                return Err(format!("vertex {v} beyond id counter {}", self.next_id));
            }
        }
        Ok(())
    }

    /// Vertex set of the largest connected component; ties go to the
    /// component holding the smallest id.
    pub fn largest_component(&self) -> Vec<VertexId> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut best: Vec<VertexId> = Vec::new();
        for &start in self.adj.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut component = vec![start];
            seen.insert(start);
            let mut head = 0;
            while head < component.len() {
                let v = component[head];
                head += 1;
                for u in self.neighbours(v) {
                    if seen.insert(u) {
                        component.push(u);
                    }
                }
            }
            if component.len() > best.len() {
                best = component;
            }
        }
        best.sort_unstable();
        best
    }
}

/// Degree-proportional sampler where isolated vertices weigh 1.
///
/// Each vertex appears in `slots` once per incident edge, or once if it has
/// none, so a uniform slot draw is a `max(degree, 1)`-weighted vertex draw.
struct AttachmentPool {
    slots: Vec<VertexId>,
}

impl AttachmentPool {
    fn from_graph(g: &Graph) -> Self {
        let mut slots = Vec::with_capacity(2 * g.edge_count() + g.vertex_count());
        for v in g.vertices() {
            let weight = g.degree(v).max(1);
            slots.extend(std::iter::repeat_n(v, weight));
        }
        Self { slots }
    }

    fn pick_distinct<R: Rng>(&self, m: usize, rng: &mut R) -> Vec<VertexId> {
        let mut chosen: Vec<VertexId> = Vec::with_capacity(m);
        while chosen.len() < m {
            let v = self.slots[rng.random_range(0..self.slots.len())];
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        chosen
    }

    /// Adds a vertex wired to `m` preferentially chosen distinct vertices.
    fn attach<R: Rng>(&mut self, g: &mut Graph, m: usize, rng: &mut R) -> VertexId {
        let targets = self.pick_distinct(m, rng);
        let v = g.add_vertex();
        for &t in &targets {
            let had_edges = g.degree(t) > 0;
            g.add_edge(v, t);
            // an isolated vertex already holds one slot for its first edge
            if had_edges {
                self.slots.push(t);
            }
        }
        self.slots.extend(std::iter::repeat_n(v, m.max(1)));
        v
    }
}

/// Barabási–Albert graph: a seed clique on `m + 1` vertices, then each new
/// vertex attaches `m` edges to distinct degree-weighted targets.
pub fn ba_generate(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if m == 0 || n <= m {
        return Err(GraphError::InvalidParams(format!(
            "need n > m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    let seed_ids: Vec<VertexId> = (0..=m).map(|_| g.add_vertex()).collect();
    for (i, &a) in seed_ids.iter().enumerate() {
        for &b in &seed_ids[i + 1..] {
            g.add_edge(a, b);
        }
    }
    let mut pool = AttachmentPool::from_graph(&g);
    for _ in m + 1..n {
        pool.attach(&mut g, m, &mut rng);
    }
    Ok(g)
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Principal eigenvector of the adjacency matrix on the largest connected
/// component, unit L2 norm, zero elsewhere.
///
/// Iterates `x <- (A + I) x / |(A + I) x|` from a uniform start. The shift
/// leaves the eigenvectors unchanged and keeps bipartite components (stars,
/// trees) from oscillating between `±λ`.
pub fn eigenvector_centrality(
    g: &Graph,
    tol: f64,
    max_iter: usize,
) -> Result<BTreeMap<VertexId, f64>, GraphError> {
    if g.vertex_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let component = g.largest_component();
    let local: HashMap<VertexId, usize> =
        component.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // CSR over the component
    let mut offsets = Vec::with_capacity(component.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &v in &component {
        targets.extend(g.neighbours(v).map(|u| local[&u]));
        offsets.push(targets.len());
    }

    let k = component.len();
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut next = vec![0.0; k];
    let mut delta = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_iter {
        for i in 0..k {
            let row = &targets[offsets[i]..offsets[i + 1]];
            next[i] = x[i] + row.iter().map(|&j| x[j]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        delta = 0.0;
        for i in 0..k {
            let v = next[i] / norm;
            delta = f64::max(delta, (v - x[i]).abs());
            x[i] = v;
        }
        // norm * delta is the residual ‖(A + I)x − norm·x‖∞ of the previous
        // iterate, so this bounds the eigen-residual as well as the step
        if delta * norm.max(1.0) < tol {
            converged = true;
            break;
        }
    }

    let mut scores: BTreeMap<VertexId, f64> = g.vertices().map(|v| (v, 0.0)).collect();
    for (i, &v) in component.iter().enumerate() {
        scores.insert(v, x[i]);
    }
    if converged {
        Ok(scores)
    } else {
        Err(GraphError::NotConverged {
            iterations: max_iter,
            delta,
            last: scores,
        })
    }
}

/// Ids by descending score, ties by ascending id, first `k` kept.
pub fn top_k_ranking(
    scores: &BTreeMap<VertexId, f64>,
    k: usize,
) -> Result<TruncatedRanking<VertexId>, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidParams("k must be positive".into()));
    }
    if k > scores.len() {
        return Err(GraphError::KTooLarge {
            k,
            available: scores.len(),
        });
    }
    let mut order: Vec<(VertexId, f64)> = scores.iter().map(|(&v, &s)| (v, s)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let ids = order.into_iter().take(k).map(|(v, _)| v).collect();
    Ok(TruncatedRanking::new(ids).expect("vertex ids are unique"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChurnConfig {
    pub initial_n: usize,
    pub attach_m: usize,
    pub churn_mean: f64,
    pub churn_std: f64,
    pub top_k: usize,
    pub iterations: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ChurnConfig {
    fn default() -> Self {
        Self {
            initial_n: 10_000,
            attach_m: 5,
            churn_mean: 1000.0,
            churn_std: 100.0,
            top_k: 1000,
            iterations: 1000,
            seed: 0,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl ChurnConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        let fail = |m: String| Err(GraphError::InvalidParams(m));
        if self.initial_n == 0 || self.attach_m == 0 || self.top_k == 0 || self.iterations == 0 {
            return fail("initial_n, attach_m, top_k and iterations must be positive".into());
        }
        if self.attach_m >= self.initial_n {
            return fail(format!(
                "attach_m ({}) must be below initial_n ({})",
                self.attach_m, self.initial_n
            ));
        }
        if !(self.churn_mean.is_finite() && self.churn_mean >= 0.0) {
            return fail(format!("churn_mean must be non-negative, got {}", self.churn_mean));
        }
        if !(self.churn_std.is_finite() && self.churn_std >= 0.0) {
            return fail(format!("churn_std must be non-negative, got {}", self.churn_std));
        }
        if self.top_k as f64 > self.initial_n as f64 - 3.0 * self.churn_std {
            return fail(format!(
                "top_k ({}) must not exceed initial_n - 3*churn_std ({})",
                self.top_k,
                self.initial_n as f64 - 3.0 * self.churn_std
            ));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iter == 0 {
            return fail("tol and max_iter must be positive".into());
        }
        Ok(())
    }
}

const MAX_CHURN_REDRAWS: usize = 1000;

fn draw_count<R: Rng>(normal: &Normal<f64>, rng: &mut R) -> usize {
    normal.sample(rng).round().max(0.0) as usize
}

/// One churn step in place: remove `x_r` uniform vertices, then attach
/// `x_a` new ones preferentially. Draws that would leave no more than
/// `x_r + attach_m` vertices are redrawn.
pub fn churn_step<R: Rng>(g: &mut Graph, config: &ChurnConfig, rng: &mut R) -> Result<(), GraphError> {
    let normal = Normal::new(config.churn_mean, config.churn_std)
        .map_err(|e| GraphError::InvalidParams(e.to_string()))?;
    let mut attempt = 0;
    let (remove, add) = loop {
        let remove = draw_count(&normal, rng);
        let add = draw_count(&normal, rng);
        if g.vertex_count() > remove + config.attach_m {
            break (remove, add);
        }
        attempt += 1;
        if attempt >= MAX_CHURN_REDRAWS {
            return Err(GraphError::InvalidParams(format!(
                "graph of {} vertices too small for churn mean {}",
                g.vertex_count(),
                config.churn_mean
            )));
        }
    };
    churn_step_with(g, remove, add, config.attach_m, rng);
    Ok(())
}

/// Churn step with explicit removal and addition counts.
pub fn churn_step_with<R: Rng>(g: &mut Graph, remove: usize, add: usize, attach_m: usize, rng: &mut R) {
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut picks = index::sample(rng, ids.len(), remove.min(ids.len())).into_vec();
    picks.sort_unstable();
    for i in picks {
        g.remove_vertex(ids[i]);
    }
    if add == 0 {
        return;
    }
    let m = attach_m.min(g.vertex_count());
    let mut pool = AttachmentPool::from_graph(g);
    for _ in 0..add {
        if m == 0 {
            g.add_vertex();
            pool = AttachmentPool::from_graph(g);
            continue;
        }
        pool.attach(g, m, rng);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub step: usize,
    pub s_value: f64,
    pub kendall: f64,
    pub overlap: f64,
    pub graph_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub steps: usize,
    pub recorded: usize,
    pub skipped_not_converged: usize,
    pub mean_s: f64,
    pub std_s: f64,
    pub mean_kendall: f64,
    pub std_kendall: f64,
    pub mean_overlap: f64,
    /// `None` when a measure is constant across steps.
    pub pearson_s_overlap: Option<f64>,
    pub pearson_s_kendall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub records: Vec<ExperimentRecord>,
    pub summary: ExperimentSummary,
}

impl ExperimentOutput {
    /// `step,s,kendall,overlap,graph_size` rows with a header.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("step,s,kendall,overlap,graph_size\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.step, r.s_value, r.kendall, r.overlap, r.graph_size
            ));
        }
        out
    }
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn rank_graph(g: &Graph, config: &ChurnConfig) -> Result<TruncatedRanking<VertexId>, GraphError> {
    let scores = eigenvector_centrality(g, config.tol, config.max_iter)?;
    top_k_ranking(&scores, config.top_k.min(scores.len()))
}

pub fn run_experiment(config: &ChurnConfig) -> Result<ExperimentOutput, GraphError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut graph = ba_generate(config.initial_n, config.attach_m, rng.random())?;
    let mut previous = rank_graph(&graph, config).ok();
    let mut records = Vec::with_capacity(config.iterations);
    let mut skipped = 0;

    for step in 1..=config.iterations {
        churn_step(&mut graph, config, &mut rng)?;
        let current = match rank_graph(&graph, config) {
            Ok(r) => Some(r),
            Err(GraphError::NotConverged { .. }) => None,
            Err(e) => return Err(e),
        };
        match (&previous, &current) {
            (Some(prev), Some(cur)) => {
                // rankings can only differ in length once the graph shrinks below top_k
                let n = prev.len().min(cur.len());
                let a = TruncatedRanking::new(prev.ids()[..n].to_vec()).expect("prefix of a ranking");
                let b = TruncatedRanking::new(cur.ids()[..n].to_vec()).expect("prefix of a ranking");
                records.push(ExperimentRecord {
                    step,
                    s_value: similarity_s(&a, &b).expect("equal lengths"),
                    kendall: kendall_tau_truncated(&a, &b).value,
                    overlap: normalized_overlap(&a, &b).expect("equal lengths"),
                    graph_size: graph.vertex_count(),
                });
            }
            _ => {
                log_warning(step);
                skipped += 1;
            }
        }
        previous = current;
    }

    let s: Vec<f64> = records.iter().map(|r| r.s_value).collect();
    let kendall: Vec<f64> = records.iter().map(|r| r.kendall).collect();
    let overlap: Vec<f64> = records.iter().map(|r| r.overlap).collect();
    let (mean_s, std_s) = mean_std(&s);
    let (mean_kendall, std_kendall) = mean_std(&kendall);
    let summary = ExperimentSummary {
        steps: config.iterations,
        recorded: records.len(),
        skipped_not_converged: skipped,
        mean_s,
        std_s,
        mean_kendall,
        std_kendall,
        mean_overlap: mean_std(&overlap).0,
        pearson_s_overlap: pearson(&s, &overlap).ok(),
        pearson_s_kendall: pearson(&s, &kendall).ok(),
    };
    Ok(ExperimentOutput { records, summary })
}

fn log_warning(step: usize) {
    eprintln!("warning: step {step} skipped, eigenvector centrality did not converge");
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Graph {
        let mut g = Graph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        for &(a, b) in edges {
            assert!(g.add_edge(a, b));
        }
        g
    }

    #[test]
    fn graph_rejects_loops_and_parallel_edges() {
        let mut g = from_edges(3, &[(0, 1)]);
        assert!(!g.add_edge(1, 1));
        assert!(!g.add_edge(1, 0));
        assert!(!g.add_edge(0, 9));
        assert_eq!(g.edge_count(), 1);
        g.audit().unwrap();
    }

    #[test]
    fn ba_seed_clique_only() {
        let g = ba_generate(3, 2, 1).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), [(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn ba_edge_count_and_determinism() {
        let g = ba_generate(100, 3, 42).unwrap();
        assert_eq!(g.edge_count(), 3 + 97 * 3);
        g.audit().unwrap();
        assert_eq!(g.largest_component().len(), 100);
        assert_eq!(g, ba_generate(100, 3, 42).unwrap());
        assert_ne!(g.edges(), ba_generate(100, 3, 43).unwrap().edges());
    }

    #[test]
    fn ba_invalid_params() {
        assert!(matches!(ba_generate(3, 3, 0), Err(GraphError::InvalidParams(_))));
        assert!(matches!(ba_generate(3, 0, 0), Err(GraphError::InvalidParams(_))));
    }

    #[test]
    fn star_centrality() {
        let g = from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let c = eigenvector_centrality(&g, 1e-12, 10_000).unwrap();
        assert_abs_diff_eq!(c[&0], 1.0 / 2f64.sqrt(), epsilon = 1e-9);
        for leaf in 1..5 {
            assert_abs_diff_eq!(c[&leaf], 1.0 / (2.0 * 2f64.sqrt()), epsilon = 1e-9);
        }
    }

    #[test]
    fn complete_graph_centrality() {
        let n = 6;
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let g = from_edges(n as usize, &edges);
        let c = eigenvector_centrality(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for v in 0..n {
            assert_abs_diff_eq!(c[&v], 1.0 / (n as f64).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn two_triangles_use_lowest_component() {
        let g = from_edges(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]);
        let c = eigenvector_centrality(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for v in 0..3 {
            assert_abs_diff_eq!(c[&v], 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        }
        for v in 3..6 {
            assert_eq!(c[&v], 0.0);
        }
    }

    #[test]
    fn not_converged_carries_iterate() {
        let g = ba_generate(200, 2, 5).unwrap();
        match eigenvector_centrality(&g, 1e-14, 2) {
            Err(GraphError::NotConverged { iterations, last, .. }) => {
                assert_eq!(iterations, 2);
                assert_eq!(last.len(), 200);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(eigenvector_centrality(&Graph::new(), 1e-10, 10), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn top_k_cases() {
        let scores: BTreeMap<VertexId, f64> = [(1, 0.5), (2, 0.3), (3, 0.9)].into();
        assert_eq!(top_k_ranking(&scores, 2).unwrap().ids(), [3, 1]);
        let flat: BTreeMap<VertexId, f64> = [(9, 1.0), (4, 1.0), (7, 1.0), (2, 1.0)].into();
        assert_eq!(top_k_ranking(&flat, 3).unwrap().ids(), [2, 4, 7]);
        let full = top_k_ranking(&scores, 3).unwrap();
        assert_eq!(full.len(), 3);
        assert_eq!(
            top_k_ranking(&scores, 4),
            Err(GraphError::KTooLarge { k: 4, available: 3 })
        );
    }

    #[test]
    fn zero_churn_leaves_graph_unchanged() {
        let mut g = ba_generate(50, 2, 3).unwrap();
        let before = g.clone();
        let config = ChurnConfig {
            initial_n: 50,
            attach_m: 2,
            churn_mean: 0.0,
            churn_std: 0.0,
            top_k: 10,
            ..ChurnConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        churn_step(&mut g, &config, &mut rng).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn remove_only_on_triangle() {
        let mut g = from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        churn_step_with(&mut g, 1, 0, 2, &mut rng);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        g.audit().unwrap();
    }

    #[test]
    fn isolated_vertices_stay_reachable() {
        let mut g = from_edges(3, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        churn_step_with(&mut g, 0, 5, 2, &mut rng);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 10);
        g.audit().unwrap();
    }

    #[test]
    fn config_validation() {
        ChurnConfig::default().validate().unwrap();
        let bad = ChurnConfig {
            top_k: 9800,
            ..ChurnConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ChurnConfig {
            attach_m: 10_000,
            ..ChurnConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mean_std_sample() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert_abs_diff_eq!(s, (32.0f64 / 7.0).sqrt(), epsilon = 1e-12);
    }
}
