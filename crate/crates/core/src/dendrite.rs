//! Finite-depth cell decompositions of the attractor.
//!
//! A cell is the hull `S_w(D)` of a word over `{0, 1, 2, h}`. Cells that
//! certainly touch are joined in an [`AdjacencyGraph`]; for a dendrite the
//! graph at every depth should be a tree.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    boxes_apart, coarse_box, triangles_relation, Letter, Relation, System, Triangle, Word,
};
use crate::interval::RationalInterval;
use crate::rational::{inv_pow3, Rational};
use crate::report::{Outcome, VerificationReport};
use crate::ternary::{enumerate_tuples, CantorPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub word: Word,
    pub hull: Triangle,
}

impl Cell {
    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

/// All `4ⁿ` cells of depth `n`, in lexicographic word order.
pub fn cells_at_depth(system: &System, n: usize) -> Vec<Cell> {
    Word::all_of_length(&Letter::ALL, n)
        .into_par_iter()
        .map(|word| Cell {
            hull: system.cell_hull(&word),
            word,
        })
        .collect()
}

/// Undirected graph on the cells of one depth. Vertex indices follow the
/// lexicographic word order; each edge is stored once as `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    pub vertices: Vec<Word>,
    pub edges: Vec<(usize, usize)>,
    pub unknown_pairs: Vec<(usize, usize)>,
    /// Pairs that survived box pruning and went to the exact predicate.
    pub pairs_tested: u64,
}

impl AdjacencyGraph {
    /// A graph from explicit edges, e.g. for testing [`is_tree`].
    pub fn from_edges(vertices: Vec<Word>, edges: &[(usize, usize)]) -> Self {
        let edges: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        AdjacencyGraph {
            vertices,
            edges: edges.into_iter().collect(),
            unknown_pairs: Vec::new(),
            pairs_tested: 0,
        }
    }

    pub fn depth(&self) -> usize {
        self.vertices.first().map_or(0, Word::len)
    }

    /// Number of unordered pairs of distinct vertices.
    pub fn total_pairs(&self) -> u64 {
        let n = self.vertices.len() as u64;
        n * n.saturating_sub(1) / 2
    }

    pub fn is_conclusive(&self) -> bool {
        self.unknown_pairs.is_empty()
    }

    pub fn has_edge(&self, a: &Word, b: &Word) -> bool {
        let (Ok(i), Ok(j)) = (
            self.vertices.binary_search(a),
            self.vertices.binary_search(b),
        ) else {
            return false;
        };
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    /// One `word₁ word₂` line per edge, lexicographically sorted.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", self.vertices[a], self.vertices[b]);
        }
        out
    }
}

/// Certified-touching graph of the depth-`n` cells.
pub fn adjacency_graph(system: &System, n: usize) -> Result<AdjacencyGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let cells = cells_at_depth(system, n);
    let boxes: Vec<_> = cells
        .par_iter()
        .map(|cell| coarse_box(&cell.hull, system.c()))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("digit source too short to prune".into()))?;

    // Sweep along x: only boxes whose x-ranges overlap can touch.
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0.lo().cmp(boxes[b].0.lo()));
    let mut candidates = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j].0.lo() > boxes[i].0.hi() {
                break;
            }
            if !boxes_apart(&boxes[i], &boxes[j]) {
                candidates.push((i.min(j), i.max(j)));
            }
        }
    }
    candidates.sort_unstable();

    let relations: Vec<Relation> = candidates
        .par_iter()
        .map(|&(i, j)| triangles_relation(&cells[i].hull, &cells[j].hull, system.c()))
        .collect();
    let mut edges = Vec::new();
    let mut unknown_pairs = Vec::new();
    for (&pair, rel) in candidates.iter().zip(&relations) {
        match rel {
            Relation::Intersecting => edges.push(pair),
            Relation::Unknown => unknown_pairs.push(pair),
            Relation::Disjoint => {}
        }
    }
    Ok(AdjacencyGraph {
        vertices: cells.into_iter().map(|c| c.word).collect(),
        edges,
        unknown_pairs,
        pairs_tested: candidates.len() as u64,
    })
}

/// Connected with `|E| = |V| − 1`. An inconclusive graph is not a tree.
pub fn is_tree(g: &AdjacencyGraph) -> bool {
    let n = g.vertices.len();
    if !g.is_conclusive() || g.edges.len() + 1 != n.max(1) {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &g.edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Edges of `fine` whose endpoints' parents are neither equal nor adjacent
/// in `coarse`.
pub fn refinement_violations(fine: &AdjacencyGraph, coarse: &AdjacencyGraph) -> Vec<(Word, Word)> {
    let depth = coarse.depth();
    fine.edges
        .iter()
        .map(|&(a, b)| (&fine.vertices[a], &fine.vertices[b]))
        .filter(|(a, b)| {
            let (pa, pb) = (a.prefix(depth), b.prefix(depth));
            pa != pb && !coarse.has_edge(&pa, &pb)
        })
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect()
}

/// Adjacency graphs for depths `1..=max_depth`, each checked for the tree
/// property and for consistency with the previous depth.
pub fn verify_tree(system: &System, max_depth: usize) -> Result<VerificationReport> {
    if max_depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut report = VerificationReport::new("tree", max_depth);
    let mut previous: Option<AdjacencyGraph> = None;
    let mut edge_counts = Vec::new();
    for n in 1..=max_depth {
        let g = adjacency_graph(system, n)?;
        report.items_checked += g.total_pairs();
        edge_counts.push(g.edges.len().to_string());
        if n == 1 {
            report.add_detail("depth1_edges", first_level_edges(&g));
        }
        if !g.is_conclusive() {
            for &(a, b) in g.unknown_pairs.iter().take(10) {
                report.record_failure(
                    Outcome::Inconclusive,
                    format!(
                        "depth={n} pair={} {} undecided",
                        g.vertices[a], g.vertices[b]
                    ),
                );
            }
        } else if !is_tree(&g) {
            report.record_failure(
                Outcome::Fail,
                format!(
                    "depth={n} vertices={} edges={} is not a tree",
                    g.vertices.len(),
                    g.edges.len()
                ),
            );
        }
        if let Some(prev) = &previous {
            for (a, b) in refinement_violations(&g, prev).into_iter().take(10) {
                report.record_failure(
                    Outcome::Fail,
                    format!("depth={n} edge {a} {b} has non-adjacent parents"),
                );
            }
        }
        previous = Some(g);
    }
    report.precision_digits = system.c().max_precision_used();
    report.add_detail("edges", edge_counts.join(","));
    Ok(report)
}

fn first_level_edges(g: &AdjacencyGraph) -> String {
    g.edges
        .iter()
        .map(|&(a, b)| format!("{}-{}", g.vertices[a], g.vertices[b]))
        .collect::<Vec<_>>()
        .join(",")
}

/// Finite prefix of an infinite address.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Address(pub Word);

/// Box enclosing the cell of `address`; it contains every point of the
/// attractor whose address starts with it.
pub fn address_point(
    system: &System,
    address: &Address,
) -> Result<(RationalInterval, RationalInterval)> {
    if address.0.is_empty() {
        return Err(Error::InvalidArgument("address must be nonempty".into()));
    }
    let ci = system.c().interval()?;
    Ok(system.cell_hull(&address.0).bounding_box(&ci))
}

/// Locates every `{0, 2}`-tuple of length `tuple_len` among the shifts of
/// `c` and certifies `|σᵏ(c) − y| < 3^(−tuple_len)`.
pub fn postcritical_density(
    system: &System,
    tuple_len: usize,
    max_search: usize,
) -> Result<VerificationReport> {
    if tuple_len == 0 {
        return Err(Error::InvalidArgument(
            "tuple length must be at least 1".into(),
        ));
    }
    let stream = system.c().stream();
    let radius = inv_pow3(tuple_len);
    let cap = system.c().cap();
    let targets: Vec<Vec<u8>> = enumerate_tuples(tuple_len)
        .into_iter()
        .filter(|t| t.len() == tuple_len)
        .collect();

    let mut report = VerificationReport::new("density", tuple_len);
    report.items_checked = targets.len() as u64;
    report.precision_digits = system.c().start();
    let mut shifts = BTreeSet::new();
    let mut prefixes = BTreeSet::new();
    let mut max_shift = 0;
    for digits in &targets {
        let target = CantorPoint::new(digits.clone())?;
        let y = target.value();
        let k = match stream.find_shift(&target, max_search) {
            Ok(k) => k,
            Err(e) => {
                report.record_failure(Outcome::Fail, format!("target={target} {e}"));
                continue;
            }
        };
        // σᵏ(c) ≥ y because its digits start with y; refine the upper end
        // until it is strictly inside y + 3^(−n).
        let mut extra = 8;
        let certified = loop {
            match stream.shift_interval(k, tuple_len + extra) {
                Ok(enc) if enc.lo() >= &y && enc.hi() < &(&y + &radius) => break Some(enc),
                Ok(_) if tuple_len + extra < cap => extra = (extra * 4).min(cap - tuple_len),
                _ => break None,
            }
        };
        let Some(enc) = certified else {
            report.record_failure(
                Outcome::Inconclusive,
                format!("target={target} shift={k} not certified within {cap} digits"),
            );
            continue;
        };
        report.precision_digits = report.precision_digits.max(k + tuple_len + extra);
        let slack: Rational = &y + &radius - enc.hi();
        report.note_margin(slack);
        max_shift = max_shift.max(k);
        shifts.insert(k);
        prefixes.insert(stream.shift_digits(k, tuple_len)?);
    }
    if report.failures.is_empty() && prefixes.len() != targets.len() {
        report.record_failure(
            Outcome::Fail,
            format!("only {} distinct shifted prefixes", prefixes.len()),
        );
    }
    report.add_detail("max_shift", max_shift);
    report.add_detail("distinct_shifts", shifts.len());
    report.add_detail("distinct_prefixes", prefixes.len());
    Ok(report)
}
