//! Bruhat graphs of intervals, labeled paths and ascent-descent words.
//!
//! A path of length `n` from `u` to `v` is a chain
//! `u = x_0 ≺ x_1 ≺ ... ≺ x_{n+1} = v`: it has `n + 1` edges and its
//! ascent-descent word has `n` letters. The single edge `u ≺ v` is a path
//! of length 0.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{all_reflections, CoxeterError, Permutation, Reflection, ReflectionOrder};
use crate::ncpoly::{AdLetter, AdMonomial};

pub type AdWord = AdMonomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("{u} is not below {v} in the Bruhat order")]
    NotComparable { u: Permutation, v: Permutation },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Reflection,
}

/// The Bruhat graph restricted to `[u, v]`. Vertices are indexed in order
/// of length, then one-line notation; index 0 is `u` and the last is `v`.
#[derive(Debug, Clone)]
pub struct BruhatInterval {
    lower: Permutation,
    upper: Permutation,
    elements: Vec<Permutation>,
    lengths: Vec<usize>,
    index: HashMap<Permutation, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl BruhatInterval {
    pub fn build(u: Permutation, v: Permutation) -> Result<Self, IntervalError> {
        if !u.bruhat_leq(&v)? {
            return Err(IntervalError::NotComparable { u, v });
        }
        let reflections = all_reflections(u.rank());
        // Every element of [u, v] is reached from u by a chain of ≺ steps
        // that stays below v.
        let mut elements = vec![u];
        let mut seen: HashMap<Permutation, ()> = HashMap::from([(u, ())]);
        let mut frontier = vec![u];
        while let Some(x) = frontier.pop() {
            let lx = x.length();
            for &t in &reflections {
                let y = x.mul_reflection(t);
                if y.length() > lx && !seen.contains_key(&y) && y.bruhat_leq(&v)? {
                    seen.insert(y, ());
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        elements.sort_by_key(|x| (x.length(), *x));
        let lengths: Vec<usize> = elements.iter().map(|x| x.length()).collect();
        let index: HashMap<Permutation, usize> =
            elements.iter().enumerate().map(|(k, x)| (*x, k)).collect();
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); elements.len()];
        for (from, x) in elements.iter().enumerate() {
            for &t in &reflections {
                let y = x.mul_reflection(t);
                if let Some(&to) = index.get(&y) {
                    if lengths[to] > lengths[from] {
                        out[from].push(edges.len());
                        edges.push(Edge { from, to, label: t });
                    }
                }
            }
        }
        Ok(Self {
            lower: u,
            upper: v,
            elements,
            lengths,
            index,
            edges,
            out,
        })
    }

    pub fn lower(&self) -> Permutation {
        self.lower
    }

    pub fn upper(&self) -> Permutation {
        self.upper
    }

    /// `l(v) - l(u)`.
    pub fn length(&self) -> usize {
        self.upper.length() - self.lower.length()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &Permutation) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn element(&self, k: usize) -> Permutation {
        self.elements[k]
    }

    pub fn element_length(&self, k: usize) -> usize {
        self.lengths[k]
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, k: usize) -> impl Iterator<Item = &Edge> {
        self.out[k].iter().map(|&e| &self.edges[e])
    }

    /// Out-edges sorted by the rank of their label under `order`.
    pub fn labeled(&self, order: &ReflectionOrder) -> LabeledGraph {
        let out = (0..self.len())
            .map(|k| {
                let mut steps: Vec<Step> = self
                    .out_edges(k)
                    .map(|e| Step {
                        to: e.to,
                        label: e.label,
                        rank: order.rank_of(e.label),
                    })
                    .collect();
                steps.sort_by_key(|s| s.rank);
                steps
            })
            .collect();
        LabeledGraph { out }
    }

    /// Whether `x` and `y` are comparable with `x <= y`, for interval members.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y
            || (self.lengths[x] < self.lengths[y]
                && self.elements[x]
                    .bruhat_leq(&self.elements[y])
                    .expect("same rank"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub to: usize,
    pub label: Reflection,
    pub rank: usize,
}

/// Adjacency lists of an interval with edges sorted by label rank.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    out: Vec<Vec<Step>>,
}

impl LabeledGraph {
    pub fn steps(&self, k: usize) -> &[Step] {
        &self.out[k]
    }

    pub fn step_between(&self, from: usize, to: usize) -> Option<Step> {
        self.out[from].iter().find(|s| s.to == to).copied()
    }
}

/// A path `x_0 ≺ x_1 ≺ ... ≺ x_{n+1}` with its edge labels `t_0 ... t_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BruhatPath {
    vertices: Vec<Permutation>,
    labels: Vec<Reflection>,
}

impl BruhatPath {
    /// Builds a path from its vertices, computing the labels. Fails unless
    /// every consecutive pair is a Bruhat graph edge.
    pub fn from_vertices(vertices: Vec<Permutation>) -> Option<Self> {
        if vertices.len() < 2 {
            return None;
        }
        let labels = vertices
            .windows(2)
            .map(|w| w[0].edge_to(&w[1]))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { vertices, labels })
    }

    /// Walks from `start` applying `labels` on the right.
    pub fn from_labels(start: Permutation, labels: &[Reflection]) -> Option<Self> {
        let mut vertices = vec![start];
        for &t in labels {
            let next = vertices.last().unwrap().mul_reflection(t);
            vertices.push(next);
        }
        Self::from_vertices(vertices)
    }

    pub(crate) fn from_parts(vertices: Vec<Permutation>, labels: Vec<Reflection>) -> Self {
        debug_assert_eq!(vertices.len(), labels.len() + 1);
        Self { vertices, labels }
    }

    /// The length `n` in the `n + 1` edges convention.
    pub fn length(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn vertices(&self) -> &[Permutation] {
        &self.vertices
    }

    pub fn labels(&self) -> &[Reflection] {
        &self.labels
    }

    pub fn source(&self) -> Permutation {
        self.vertices[0]
    }

    pub fn sink(&self) -> Permutation {
        *self.vertices.last().unwrap()
    }

    pub fn first_reflection(&self) -> Reflection {
        self.labels[0]
    }

    /// The sub-path `x_m ≺ x_{m+1} ≺ ... ≺ x_{n+1}` for `m <= n`.
    pub fn tail(&self, m: usize) -> Self {
        Self::from_parts(self.vertices[m..].to_vec(), self.labels[m..].to_vec())
    }

    /// `x_0 ... x_m` followed by `tail`, which must start at `x_m`.
    pub fn with_tail(&self, m: usize, tail: &BruhatPath) -> Self {
        debug_assert_eq!(self.vertices[m], tail.source());
        let mut vertices = self.vertices[..m].to_vec();
        vertices.extend_from_slice(&tail.vertices);
        let mut labels = self.labels[..m].to_vec();
        labels.extend_from_slice(&tail.labels);
        Self::from_parts(vertices, labels)
    }

    /// `w ≺ x_0 ≺ ... ` for an edge `w ≺ x_0` labeled `t`.
    pub fn prepend(&self, w: Permutation, t: Reflection) -> Self {
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.push(w);
        vertices.extend_from_slice(&self.vertices);
        let mut labels = Vec::with_capacity(self.labels.len() + 1);
        labels.push(t);
        labels.extend_from_slice(&self.labels);
        Self::from_parts(vertices, labels)
    }

    /// Re-checks every edge against `edge_to`.
    pub fn is_valid(&self) -> bool {
        self.vertices.len() == self.labels.len() + 1
            && self
                .vertices
                .windows(2)
                .zip(&self.labels)
                .all(|(w, t)| w[0].edge_to(&w[1]) == Some(*t))
    }

    pub fn ranks(&self, order: &ReflectionOrder) -> Vec<usize> {
        self.labels.iter().map(|&t| order.rank_of(t)).collect()
    }

    /// Label ranks as a string: `"41516"`, or comma separated once a rank
    /// needs two digits.
    pub fn rank_string(&self, order: &ReflectionOrder) -> String {
        rank_string(&self.ranks(order))
    }

    pub fn ad_word(&self, order: &ReflectionOrder) -> AdWord {
        ad_word(self, order)
    }

    pub fn to_record(&self, order: &ReflectionOrder) -> PathRecord {
        PathRecord {
            vertices: self.vertices.iter().map(|x| x.to_string()).collect(),
            labels: self.ranks(order),
        }
    }
}

pub fn rank_string(ranks: &[usize]) -> String {
    if ranks.iter().all(|&r| r < 10) {
        ranks.iter().map(|r| r.to_string()).collect()
    } else {
        ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// JSON form of a path: one-line vertices and label ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub vertices: Vec<String>,
    pub labels: Vec<usize>,
}

/// Letter `i` is `A` if `t_{i-1} < t_i` in `order`, `D` otherwise.
pub fn ad_word(path: &BruhatPath, order: &ReflectionOrder) -> AdWord {
    let mut w = AdWord::empty();
    for pair in path.labels.windows(2) {
        w.push(letter(order.rank_of(pair[0]), order.rank_of(pair[1])));
    }
    w
}

pub(crate) fn letter(prev_rank: usize, next_rank: usize) -> AdLetter {
    if prev_rank < next_rank {
        AdLetter::A
    } else {
        AdLetter::D
    }
}

/// Lexicographic comparison of the label rank sequences.
pub fn lex_compare(x: &BruhatPath, y: &BruhatPath, order: &ReflectionOrder) -> Ordering {
    x.labels
        .iter()
        .map(|&t| order.rank_of(t))
        .cmp(y.labels.iter().map(|&t| order.rank_of(t)))
}

/// Calls `visit` with the vertex indices and steps of every path of length
/// `n` from vertex `from` to the top of the interval, in lexicographic order
/// of label ranks.
pub fn for_each_path_from<F>(
    iv: &BruhatInterval,
    graph: &LabeledGraph,
    from: usize,
    n: usize,
    mut visit: F,
) where
    F: FnMut(&[usize], &[Step]),
{
    let mut vertices = vec![from];
    let mut steps = Vec::with_capacity(n + 1);
    walk(iv, graph, n + 1, &mut vertices, &mut steps, &mut visit);
}

fn walk<F>(
    iv: &BruhatInterval,
    graph: &LabeledGraph,
    remaining: usize,
    vertices: &mut Vec<usize>,
    steps: &mut Vec<Step>,
    visit: &mut F,
) where
    F: FnMut(&[usize], &[Step]),
{
    let here = *vertices.last().unwrap();
    let top = iv.top();
    if remaining == 0 {
        if here == top {
            visit(vertices, steps);
        }
        return;
    }
    let gap = iv.element_length(top) - iv.element_length(here);
    // Each edge raises the length by an odd amount.
    if gap < remaining || (gap - remaining) % 2 != 0 {
        return;
    }
    for &step in graph.steps(here) {
        vertices.push(step.to);
        steps.push(step);
        walk(iv, graph, remaining - 1, vertices, steps, visit);
        steps.pop();
        vertices.pop();
    }
}

pub(crate) fn materialize(iv: &BruhatInterval, vertices: &[usize], steps: &[Step]) -> BruhatPath {
    BruhatPath::from_parts(
        vertices.iter().map(|&k| iv.element(k)).collect(),
        steps.iter().map(|s| s.label).collect(),
    )
}

/// All paths in `B_n(u, v)`, sorted lexicographically by label rank.
pub fn enumerate_paths(iv: &BruhatInterval, n: usize, order: &ReflectionOrder) -> Vec<BruhatPath> {
    let graph = iv.labeled(order);
    let mut out = Vec::new();
    if iv.len() < 2 {
        return out;
    }
    for_each_path_from(iv, &graph, 0, n, |vs, steps| out.push(materialize(iv, vs, steps)));
    out
}

/// Keeps the paths whose first reflection is `<= t` in `order`.
pub fn restrict_first_reflection(
    paths: &[BruhatPath],
    t: Reflection,
    order: &ReflectionOrder,
) -> Vec<BruhatPath> {
    let bound = order.rank_of(t);
    paths
        .iter()
        .filter(|x| order.rank_of(x.first_reflection()) <= bound)
        .cloned()
        .collect()
}

/// Graphviz digraph of the interval; edges carry the rank of their label.
pub fn export_dot(iv: &BruhatInterval, order: &ReflectionOrder) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph bruhat {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=plaintext];");
    for x in iv.elements() {
        let _ = writeln!(out, "  \"{x}\";");
    }
    let graph = iv.labeled(order);
    for k in 0..iv.len() {
        for step in graph.steps(k) {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                iv.element(k),
                iv.element(step.to),
                step.rank
            );
        }
    }
    out.push_str("}\n");
    out
}
