//! Edge sets and pair classifiers for the built-in coherent configurations.
//!
//! A scheme is a finite set of potential edges together with a total
//! classifier sending each ordered pair of edges to one of `d + 1`
//! relations. The relation ids are fixed per scheme:
//!
//! | scheme | relations in id order |
//! |--------|-----------------------|
//! | Johnson | `id`, `adj`, `disj` |
//! | Nykamp-Zhao | `id`, `recip`, `div`, `chain`, `anti`, `conv`, `disj` |
//! | distinguished vertex | `id11`, `adj11`, `disj11`, `adj12`, `adj21`, `disj12`, `disj21`, `id22`, `adj22` |
//! | Johnson line graph | twelve `(p,q,r,s)` tuples, identity `p2q1r0s0` first |
//!
//! Directed pairs follow the convention that `((i,j),(j,k))` is `chain` and
//! `((i,j),(k,i))` is `anti`.

mod axioms;
pub mod closed_form;
mod constants;
mod edge;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use axioms::{verify_axioms, verify_axioms_with_cap, Axiom, AxiomOutcome, AxiomReport};
pub use constants::{
    compute_structure_constants, compute_structure_constants_validated, StructureConstants,
    StructureConstantsJson,
};
pub use edge::Edge;

use crate::error::{Error, Result};

/// Default edge cap for the O(E^3) axiom verification.
pub const AXIOM_EDGE_CAP: usize = 500;
/// Default edge cap for materialising E x E matrices.
pub const DENSE_EDGE_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    Johnson,
    NykampZhao,
    DistinguishedVertex,
    JohnsonLineGraph,
    Custom,
}

impl SchemeKind {
    pub const BUILT_IN: [SchemeKind; 4] = [
        SchemeKind::Johnson,
        SchemeKind::NykampZhao,
        SchemeKind::DistinguishedVertex,
        SchemeKind::JohnsonLineGraph,
    ];

    /// Smallest vertex count for which every relation is non-empty, so every
    /// structure constant has a representative pair.
    pub fn min_vertices(self) -> usize {
        match self {
            SchemeKind::Johnson | SchemeKind::NykampZhao | SchemeKind::DistinguishedVertex => 4,
            SchemeKind::JohnsonLineGraph => 6,
            SchemeKind::Custom => 0,
        }
    }

    /// Smallest vertex count for which the edge set can be enumerated at all.
    pub fn min_enumerable(self) -> usize {
        match self {
            SchemeKind::Johnson | SchemeKind::NykampZhao | SchemeKind::DistinguishedVertex => 2,
            SchemeKind::JohnsonLineGraph => 3,
            SchemeKind::Custom => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Johnson => "johnson",
            SchemeKind::NykampZhao => "nykamp-zhao",
            SchemeKind::DistinguishedVertex => "distinguished-vertex",
            SchemeKind::JohnsonLineGraph => "johnson-line-graph",
            SchemeKind::Custom => "custom",
        }
    }

    pub fn is_directed(self) -> bool {
        self == SchemeKind::NykampZhao
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        match key.as_str() {
            "johnson" | "j" => Ok(SchemeKind::Johnson),
            "nykamp-zhao" | "nykampzhao" | "nz" | "sonets" => Ok(SchemeKind::NykampZhao),
            "distinguished-vertex" | "distinguishedvertex" | "dv" => {
                Ok(SchemeKind::DistinguishedVertex)
            }
            "johnson-line-graph" | "johnsonlinegraph" | "jlg" => Ok(SchemeKind::JohnsonLineGraph),
            _ => Err(Error::Config(format!(
                "unknown scheme '{s}' (expected johnson, nykamp-zhao, distinguished-vertex or johnson-line-graph)"
            ))),
        }
    }
}

/// Index of a relation within its scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationId(pub usize);

impl RelationId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

/// Named relation ids for the Nykamp-Zhao configuration.
pub mod nz {
    use super::RelationId;
    pub const ID: RelationId = RelationId(0);
    pub const RECIP: RelationId = RelationId(1);
    pub const DIV: RelationId = RelationId(2);
    pub const CHAIN: RelationId = RelationId(3);
    pub const ANTI: RelationId = RelationId(4);
    pub const CONV: RelationId = RelationId(5);
    pub const DISJ: RelationId = RelationId(6);
}

/// Named relation ids for the Johnson scheme.
pub mod johnson {
    use super::RelationId;
    pub const ID: RelationId = RelationId(0);
    pub const ADJ: RelationId = RelationId(1);
    pub const DISJ: RelationId = RelationId(2);
}

/// Named relation ids for the distinguished-vertex configuration.
pub mod dv {
    use super::RelationId;
    pub const ID11: RelationId = RelationId(0);
    pub const ADJ11: RelationId = RelationId(1);
    pub const DISJ11: RelationId = RelationId(2);
    pub const ADJ12: RelationId = RelationId(3);
    pub const ADJ21: RelationId = RelationId(4);
    pub const DISJ12: RelationId = RelationId(5);
    pub const DISJ21: RelationId = RelationId(6);
    pub const ID22: RelationId = RelationId(7);
    pub const ADJ22: RelationId = RelationId(8);
}

/// The twelve admissible `(p, q, r, s)` tuples of the Johnson line graph,
/// in relation-id order.
pub const LINE_GRAPH_TUPLES: [(u8, u8, u8, u8); 12] = [
    (2, 1, 0, 0),
    (2, 0, 0, 0),
    (1, 1, 0, 0),
    (1, 0, 0, 0),
    (1, 0, 1, 0),
    (1, 0, 0, 1),
    (1, 0, 1, 1),
    (0, 1, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (0, 0, 1, 1),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInfo {
    pub name: String,
    pub adjoint: usize,
    pub identity: bool,
}

/// User-supplied classifier for a custom scheme.
#[derive(Clone)]
pub enum CustomClassifier {
    /// Row-major E x E table of relation ids, indexed by edge position.
    Table(Arc<Vec<u16>>),
    Callback(Arc<dyn Fn(&Edge, &Edge) -> usize + Send + Sync>),
}

impl fmt::Debug for CustomClassifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CustomClassifier::Table(t) => write!(f, "Table({} entries)", t.len()),
            CustomClassifier::Callback(_) => f.write_str("Callback(..)"),
        }
    }
}

#[derive(Debug)]
struct CustomParts {
    edges: Vec<Edge>,
    classifier: CustomClassifier,
    index: HashMap<Edge, usize>,
}

/// A coherent configuration: an edge set plus a total pair classifier.
///
/// Immutable once built; cloning is cheap for built-in schemes.
#[derive(Clone, Debug)]
pub struct SchemeDescriptor {
    kind: SchemeKind,
    n: usize,
    relations: Arc<Vec<RelationInfo>>,
    custom: Option<Arc<CustomParts>>,
    edges: Arc<OnceLock<Vec<Edge>>>,
    name: String,
}

fn relation_table(names: &[&str], adjoint: &[usize], identity: &[usize]) -> Vec<RelationInfo> {
    names
        .iter()
        .enumerate()
        .map(|(k, name)| RelationInfo {
            name: (*name).to_string(),
            adjoint: adjoint[k],
            identity: identity.contains(&k),
        })
        .collect()
}

fn builtin_relations(kind: SchemeKind) -> Vec<RelationInfo> {
    match kind {
        SchemeKind::Johnson => relation_table(&["id", "adj", "disj"], &[0, 1, 2], &[0]),
        SchemeKind::NykampZhao => relation_table(
            &["id", "recip", "div", "chain", "anti", "conv", "disj"],
            &[0, 1, 2, 4, 3, 5, 6],
            &[0],
        ),
        SchemeKind::DistinguishedVertex => relation_table(
            &[
                "id11", "adj11", "disj11", "adj12", "adj21", "disj12", "disj21", "id22", "adj22",
            ],
            &[0, 1, 2, 4, 3, 6, 5, 7, 8],
            &[0, 7],
        ),
        SchemeKind::JohnsonLineGraph => LINE_GRAPH_TUPLES
            .iter()
            .enumerate()
            .map(|(k, &(p, q, r, s))| {
                let adjoint = LINE_GRAPH_TUPLES
                    .iter()
                    .position(|&t| t == (p, q, s, r))
                    .expect("tuple set is closed under r<->s");
                RelationInfo {
                    name: format!("p{p}q{q}r{r}s{s}"),
                    adjoint,
                    identity: k == 0,
                }
            })
            .collect(),
        SchemeKind::Custom => unreachable!("custom relations are user supplied"),
    }
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `{u, v}` (u < v) in the lexicographic list of pairs of `0..n`.
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

impl SchemeDescriptor {
    /// Builds a built-in scheme on `n` vertices. For the distinguished-vertex
    /// scheme `n` counts the ordinary vertices; the distinguished vertex has
    /// id `n`.
    pub fn new(kind: SchemeKind, n: usize) -> Result<Self> {
        if kind == SchemeKind::Custom {
            return Err(Error::InvalidArgument(
                "custom schemes are built with SchemeDescriptor::custom".into(),
            ));
        }
        if n < kind.min_enumerable() {
            return Err(Error::TooFewVertices {
                scheme: kind,
                minimum: kind.min_enumerable(),
                n,
            });
        }
        if n > u32::MAX as usize / 2 {
            return Err(Error::InvalidArgument(format!("vertex count {n} is too large")));
        }
        Ok(SchemeDescriptor {
            kind,
            n,
            relations: Arc::new(builtin_relations(kind)),
            custom: None,
            edges: Arc::new(OnceLock::new()),
            name: kind.name().to_string(),
        })
    }

    pub fn johnson(n: usize) -> Result<Self> {
        Self::new(SchemeKind::Johnson, n)
    }

    pub fn nykamp_zhao(n: usize) -> Result<Self> {
        Self::new(SchemeKind::NykampZhao, n)
    }

    pub fn distinguished_vertex(n: usize) -> Result<Self> {
        Self::new(SchemeKind::DistinguishedVertex, n)
    }

    pub fn johnson_line_graph(n: usize) -> Result<Self> {
        Self::new(SchemeKind::JohnsonLineGraph, n)
    }

    /// Builds a custom scheme. Nothing is verified here; run
    /// [`verify_axioms`] (the algebra constructor does so automatically).
    pub fn custom(
        name: impl Into<String>,
        edges: Vec<Edge>,
        relations: Vec<RelationInfo>,
        classifier: CustomClassifier,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(edges.len());
        for (pos, e) in edges.iter().enumerate() {
            if index.insert(*e, pos).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate edge {e}")));
            }
        }
        if let CustomClassifier::Table(t) = &classifier {
            if t.len() != edges.len() * edges.len() {
                return Err(Error::LengthMismatch {
                    expected: edges.len() * edges.len(),
                    found: t.len(),
                });
            }
        }
        if relations.is_empty() {
            return Err(Error::InvalidArgument("a scheme needs at least one relation".into()));
        }
        for r in &relations {
            if r.adjoint >= relations.len() {
                return Err(Error::InvalidArgument(format!(
                    "relation {} has adjoint {} out of range",
                    r.name, r.adjoint
                )));
            }
        }
        let n = edges.iter().map(|e| e.max_vertex() as usize + 1).max().unwrap_or(0);
        let lock = OnceLock::new();
        let _ = lock.set(edges.clone());
        Ok(SchemeDescriptor {
            kind: SchemeKind::Custom,
            n,
            relations: Arc::new(relations),
            custom: Some(Arc::new(CustomParts {
                edges,
                classifier,
                index,
            })),
            edges: Arc::new(lock),
            name: name.into(),
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Vertex parameter N.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn relations(&self) -> &[RelationInfo] {
        &self.relations
    }

    pub fn relation_name(&self, k: RelationId) -> &str {
        &self.relations[k.0].name
    }

    pub fn relation_by_name(&self, name: &str) -> Option<RelationId> {
        self.relations
            .iter()
            .position(|r| r.name.eq_ignore_ascii_case(name))
            .map(RelationId)
    }

    pub fn adjoint(&self, k: RelationId) -> RelationId {
        RelationId(self.relations[k.0].adjoint)
    }

    pub fn identity_relations(&self) -> Vec<RelationId> {
        self.relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.identity)
            .map(|(k, _)| RelationId(k))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.identity_relations().len() == 1
    }

    /// Identity relation whose variance sets the sampling threshold: the
    /// last identity relation (the distinguished edges for the
    /// distinguished-vertex scheme).
    pub fn reference_identity(&self) -> RelationId {
        *self
            .identity_relations()
            .last()
            .expect("every scheme has an identity relation")
    }

    /// Number of enumerated edges E.
    pub fn edge_count(&self) -> usize {
        let n = self.n;
        match self.kind {
            SchemeKind::Johnson => choose2(n),
            SchemeKind::NykampZhao => n * (n - 1),
            SchemeKind::DistinguishedVertex => choose2(n) + n,
            SchemeKind::JohnsonLineGraph => choose2(n) * (n - 2),
            SchemeKind::Custom => self.custom.as_ref().map_or(0, |c| c.edges.len()),
        }
    }

    /// Number of vertices of the underlying graph.
    pub fn vertex_count(&self) -> usize {
        match self.kind {
            SchemeKind::DistinguishedVertex => self.n + 1,
            SchemeKind::JohnsonLineGraph => choose2(self.n),
            _ => self.n,
        }
    }

    /// Errors unless every relation is guaranteed non-empty.
    pub fn require_complete(&self) -> Result<()> {
        let minimum = self.kind.min_vertices();
        if self.n < minimum {
            return Err(Error::TooFewVertices {
                scheme: self.kind,
                minimum,
                n: self.n,
            });
        }
        Ok(())
    }

    /// The edges in their documented order:
    ///
    /// * Johnson: pairs `{u,v}`, `u < v`, lexicographic.
    /// * Nykamp-Zhao: `(tail, head)` lexicographic.
    /// * distinguished vertex: ordinary pairs lexicographic, then `{i, N}`.
    /// * line graph: pairs `{i,j}` lexicographic, apex ascending within a pair.
    pub fn edges(&self) -> &[Edge] {
        self.edges.get_or_init(|| enumerate_builtin(self.kind, self.n))
    }

    /// Position of `e` in [`edges`](Self::edges), if it belongs to the scheme.
    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        let n = self.n;
        let in_range = |x: u32| (x as usize) < n;
        match (self.kind, *e) {
            (SchemeKind::Johnson, Edge::Undirected { u, v }) if u < v && in_range(v) => {
                Some(pair_index(n, u as usize, v as usize))
            }
            (SchemeKind::NykampZhao, Edge::Directed { tail, head })
                if tail != head && in_range(tail) && in_range(head) =>
            {
                let (t, h) = (tail as usize, head as usize);
                Some(t * (n - 1) + if h > t { h - 1 } else { h })
            }
            (
                SchemeKind::DistinguishedVertex,
                Edge::Typed {
                    u,
                    v,
                    distinguished,
                },
            ) => {
                if distinguished {
                    (v as usize == n && in_range(u)).then(|| choose2(n) + u as usize)
                } else {
                    (u < v && in_range(v)).then(|| pair_index(n, u as usize, v as usize))
                }
            }
            (SchemeKind::JohnsonLineGraph, Edge::LineGraph { i, j, apex })
                if i < j && in_range(j) && in_range(apex) && apex != i && apex != j =>
            {
                let below = (i < apex) as usize + (j < apex) as usize;
                Some(pair_index(n, i as usize, j as usize) * (n - 2) + apex as usize - below)
            }
            (SchemeKind::Custom, e) => self.custom.as_ref()?.index.get(&e).copied(),
            _ => None,
        }
    }

    /// The relation containing the ordered pair `(x, y)`.
    ///
    /// For custom schemes an edge outside the scheme panics; use
    /// [`index_of`](Self::index_of) first when the input is untrusted.
    pub fn classify_pair(&self, x: &Edge, y: &Edge) -> RelationId {
        match self.kind {
            SchemeKind::Johnson => classify_johnson(x, y),
            SchemeKind::NykampZhao => classify_nz(x, y),
            SchemeKind::DistinguishedVertex => classify_dv(x, y),
            SchemeKind::JohnsonLineGraph => classify_line_graph(x, y),
            SchemeKind::Custom => {
                let parts = self.custom.as_ref().expect("custom scheme");
                match &parts.classifier {
                    CustomClassifier::Callback(f) => RelationId(f(x, y)),
                    CustomClassifier::Table(t) => {
                        let xi = parts.index[x];
                        let yi = parts.index[y];
                        RelationId(t[xi * parts.edges.len() + yi] as usize)
                    }
                }
            }
        }
    }

    /// Classifies the pair of edges at positions `x` and `y`.
    pub fn classify_index(&self, x: usize, y: usize) -> RelationId {
        if let Some(parts) = &self.custom {
            if let CustomClassifier::Table(t) = &parts.classifier {
                return RelationId(t[x * parts.edges.len() + y] as usize);
            }
        }
        let edges = self.edges();
        self.classify_pair(&edges[x], &edges[y])
    }

    /// Row-major E x E table of relation ids.
    pub fn relation_table(&self, cap: usize) -> Result<Vec<u16>> {
        let e = self.edge_count();
        if e > cap {
            return Err(Error::SizeCap {
                what: "relation table",
                edges: e,
                cap,
            });
        }
        let mut table = Vec::with_capacity(e * e);
        for x in 0..e {
            for y in 0..e {
                table.push(self.classify_index(x, y).0 as u16);
            }
        }
        Ok(table)
    }

    /// The 0/1 adjacency matrix of relation `k`.
    pub fn dense_relation_matrix(&self, k: RelationId) -> Result<DMatrix<f64>> {
        self.dense_relation_matrix_with_cap(k, DENSE_EDGE_CAP)
    }

    pub fn dense_relation_matrix_with_cap(&self, k: RelationId, cap: usize) -> Result<DMatrix<f64>> {
        let e = self.edge_count();
        if e > cap {
            return Err(Error::SizeCap {
                what: "dense relation matrix",
                edges: e,
                cap,
            });
        }
        Ok(DMatrix::from_fn(e, e, |x, y| {
            (self.classify_index(x, y) == k) as u8 as f64
        }))
    }

    /// Dense `sum_k coeffs[k] R^(k)`.
    pub fn dense_combination(&self, coeffs: &[f64]) -> Result<DMatrix<f64>> {
        self.dense_combination_with_cap(coeffs, DENSE_EDGE_CAP)
    }

    pub fn dense_combination_with_cap(&self, coeffs: &[f64], cap: usize) -> Result<DMatrix<f64>> {
        if coeffs.len() != self.relation_count() {
            return Err(Error::LengthMismatch {
                expected: self.relation_count(),
                found: coeffs.len(),
            });
        }
        let e = self.edge_count();
        if e > cap {
            return Err(Error::SizeCap {
                what: "dense combination",
                edges: e,
                cap,
            });
        }
        Ok(DMatrix::from_fn(e, e, |x, y| {
            coeffs[self.classify_index(x, y).0]
        }))
    }
}

fn enumerate_builtin(kind: SchemeKind, n: usize) -> Vec<Edge> {
    let n32 = n as u32;
    let mut out = Vec::new();
    match kind {
        SchemeKind::Johnson => {
            for u in 0..n32 {
                for v in u + 1..n32 {
                    out.push(Edge::Undirected { u, v });
                }
            }
        }
        SchemeKind::NykampZhao => {
            for tail in 0..n32 {
                for head in 0..n32 {
                    if tail != head {
                        out.push(Edge::Directed { tail, head });
                    }
                }
            }
        }
        SchemeKind::DistinguishedVertex => {
            for u in 0..n32 {
                for v in u + 1..n32 {
                    out.push(Edge::Typed {
                        u,
                        v,
                        distinguished: false,
                    });
                }
            }
            for u in 0..n32 {
                out.push(Edge::Typed {
                    u,
                    v: n32,
                    distinguished: true,
                });
            }
        }
        SchemeKind::JohnsonLineGraph => {
            for i in 0..n32 {
                for j in i + 1..n32 {
                    for apex in 0..n32 {
                        if apex != i && apex != j {
                            out.push(Edge::LineGraph { i, j, apex });
                        }
                    }
                }
            }
        }
        SchemeKind::Custom => {}
    }
    out
}

fn shared(a: (u32, u32), b: (u32, u32)) -> usize {
    (a.0 == b.0 || a.0 == b.1) as usize + (a.1 == b.0 || a.1 == b.1) as usize
}

fn classify_johnson(x: &Edge, y: &Edge) -> RelationId {
    match (*x, *y) {
        (Edge::Undirected { u: a, v: b }, Edge::Undirected { u: c, v: d }) => {
            RelationId(2 - shared((a, b), (c, d)))
        }
        _ => panic!("johnson scheme expects undirected edges, got {x} and {y}"),
    }
}

fn classify_nz(x: &Edge, y: &Edge) -> RelationId {
    let (Edge::Directed { tail: a, head: b }, Edge::Directed { tail: c, head: d }) = (*x, *y) else {
        panic!("nykamp-zhao scheme expects directed edges, got {x} and {y}");
    };
    if a == c && b == d {
        nz::ID
    } else if a == d && b == c {
        nz::RECIP
    } else if a == c {
        nz::DIV
    } else if b == d {
        nz::CONV
    } else if b == c {
        nz::CHAIN
    } else if a == d {
        nz::ANTI
    } else {
        nz::DISJ
    }
}

fn classify_dv(x: &Edge, y: &Edge) -> RelationId {
    let (
        Edge::Typed {
            u: a,
            v: b,
            distinguished: dx,
        },
        Edge::Typed {
            u: c,
            v: d,
            distinguished: dy,
        },
    ) = (*x, *y)
    else {
        panic!("distinguished-vertex scheme expects typed edges, got {x} and {y}");
    };
    let s = shared((a, b), (c, d));
    match (dx, dy, s) {
        (false, false, 2) => dv::ID11,
        (false, false, 1) => dv::ADJ11,
        (false, false, _) => dv::DISJ11,
        (false, true, 1) => dv::ADJ12,
        (false, true, _) => dv::DISJ12,
        (true, false, 1) => dv::ADJ21,
        (true, false, _) => dv::DISJ21,
        (true, true, 2) => dv::ID22,
        (true, true, _) => dv::ADJ22,
    }
}

fn classify_line_graph(x: &Edge, y: &Edge) -> RelationId {
    let (
        Edge::LineGraph { i, j, apex: k },
        Edge::LineGraph {
            i: i2,
            j: j2,
            apex: k2,
        },
    ) = (*x, *y)
    else {
        panic!("line-graph scheme expects line-graph edges, got {x} and {y}");
    };
    let p = shared((i, j), (i2, j2)) as u8;
    let q = (k == k2) as u8;
    let (r, s) = if p == 2 || q == 1 {
        (0, 0)
    } else {
        ((k == i2 || k == j2) as u8, (k2 == i || k2 == j) as u8)
    };
    let id = LINE_GRAPH_TUPLES
        .iter()
        .position(|&t| t == (p, q, r, s))
        .expect("every pair of line-graph edges has an admissible tuple");
    RelationId(id)
}
