//! Two-edge motif censuses and degree histograms.
//!
//! A census counts ordered pairs `(x, y)` of present edges by relation, so
//! the counts sum to `m^2` for `m` present edges. The reciprocal summary of
//! a directed graph counts edges instead: absent, present without their
//! reverse (single), and present with their reverse (reciprocal).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler::GraphSample;
use crate::scheme::{johnson, nz, Edge, RelationId, SchemeDescriptor, SchemeKind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReciprocalSummary {
    pub absent: f64,
    pub single: f64,
    pub reciprocal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotifCensus {
    pub scheme: String,
    pub relation_names: Vec<String>,
    /// Ordered pairs of present edges per relation.
    pub counts: Vec<u64>,
    pub present: u64,
    pub edge_count: u64,
    /// Only for the directed Nykamp-Zhao scheme.
    pub summary: Option<ReciprocalSummary>,
}

impl MotifCensus {
    pub fn count(&self, k: RelationId) -> u64 {
        self.counts[k.0]
    }

    fn new(scheme: &SchemeDescriptor, counts: Vec<u64>, present: u64, reciprocal: Option<u64>) -> Self {
        let e = scheme.edge_count() as u64;
        MotifCensus {
            scheme: scheme.name().to_string(),
            relation_names: scheme.relations().iter().map(|r| r.name.clone()).collect(),
            counts,
            present,
            edge_count: e,
            summary: reciprocal.map(|r| ReciprocalSummary {
                absent: (e - present) as f64,
                single: (present - r) as f64,
                reciprocal: r as f64,
            }),
        }
    }
}

/// Mean census over an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleCensus {
    pub scheme: String,
    pub relation_names: Vec<String>,
    pub realizations: usize,
    pub mean_counts: Vec<f64>,
    pub mean_summary: Option<ReciprocalSummary>,
}

impl EnsembleCensus {
    pub fn from_censuses(censuses: &[MotifCensus]) -> Result<Self> {
        let first = censuses
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
        let r = censuses.len() as f64;
        let mut mean_counts = vec![0.0; first.counts.len()];
        for c in censuses {
            for (m, &x) in mean_counts.iter_mut().zip(&c.counts) {
                *m += x as f64 / r;
            }
        }
        let mean_summary = first.summary.map(|_| {
            let mut s = ReciprocalSummary {
                absent: 0.0,
                single: 0.0,
                reciprocal: 0.0,
            };
            for c in censuses {
                let x = c.summary.expect("same scheme throughout");
                s.absent += x.absent / r;
                s.single += x.single / r;
                s.reciprocal += x.reciprocal / r;
            }
            s
        });
        Ok(EnsembleCensus {
            scheme: first.scheme.clone(),
            relation_names: first.relation_names.clone(),
            realizations: censuses.len(),
            mean_counts,
            mean_summary,
        })
    }
}

fn check_sample(scheme: &SchemeDescriptor, sample: &GraphSample) -> Result<()> {
    if sample.present.len() != scheme.edge_count() {
        return Err(Error::LengthMismatch {
            expected: scheme.edge_count(),
            found: sample.present.len(),
        });
    }
    Ok(())
}

/// Census via degree aggregates for Johnson and Nykamp-Zhao, O(E); other
/// schemes classify every pair of present edges.
pub fn motif_census(scheme: &SchemeDescriptor, sample: &GraphSample) -> Result<MotifCensus> {
    check_sample(scheme, sample)?;
    match scheme.kind() {
        SchemeKind::NykampZhao => Ok(nz_census(scheme, sample)),
        SchemeKind::Johnson => Ok(johnson_census(scheme, sample)),
        _ => motif_census_generic(scheme, sample),
    }
}

/// Brute-force census: classifies all ordered pairs of present edges.
pub fn motif_census_generic(scheme: &SchemeDescriptor, sample: &GraphSample) -> Result<MotifCensus> {
    check_sample(scheme, sample)?;
    let present: Vec<usize> = sample.present_indices().collect();
    let mut counts = vec![0u64; scheme.relation_count()];
    for &x in &present {
        for &y in &present {
            counts[scheme.classify_index(x, y).0] += 1;
        }
    }
    let reciprocal = (scheme.kind() == SchemeKind::NykampZhao).then(|| counts[nz::RECIP.0]);
    Ok(MotifCensus::new(scheme, counts, present.len() as u64, reciprocal))
}

fn nz_census(scheme: &SchemeDescriptor, sample: &GraphSample) -> MotifCensus {
    let n = scheme.n();
    let idx = |t: usize, h: usize| t * (n - 1) + h - (h > t) as usize;
    let mut out_deg = vec![0u64; n];
    let mut in_deg = vec![0u64; n];
    let mut m = 0u64;
    let mut reciprocal = 0u64;
    for t in 0..n {
        for h in 0..n {
            if t != h && sample.present[idx(t, h)] {
                out_deg[t] += 1;
                in_deg[h] += 1;
                m += 1;
                reciprocal += sample.present[idx(h, t)] as u64;
            }
        }
    }
    let div: u64 = out_deg.iter().map(|d| d * d.saturating_sub(1)).sum();
    let conv: u64 = in_deg.iter().map(|d| d * d.saturating_sub(1)).sum();
    let through: u64 = in_deg.iter().zip(&out_deg).map(|(a, b)| a * b).sum();
    let chain = through - reciprocal;
    let anti = through - reciprocal;
    let mut counts = vec![0u64; 7];
    counts[nz::ID.0] = m;
    counts[nz::RECIP.0] = reciprocal;
    counts[nz::DIV.0] = div;
    counts[nz::CONV.0] = conv;
    counts[nz::CHAIN.0] = chain;
    counts[nz::ANTI.0] = anti;
    counts[nz::DISJ.0] = m * m - m - reciprocal - div - conv - chain - anti;
    MotifCensus::new(scheme, counts, m, Some(reciprocal))
}

fn johnson_census(scheme: &SchemeDescriptor, sample: &GraphSample) -> MotifCensus {
    let n = scheme.n();
    let mut deg = vec![0u64; n];
    let mut m = 0u64;
    for e in sample.present_edges(scheme) {
        if let Edge::Undirected { u, v } = e {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            m += 1;
        }
    }
    let adj: u64 = deg.iter().map(|d| d * d.saturating_sub(1)).sum();
    let mut counts = vec![0u64; 3];
    counts[johnson::ID.0] = m;
    counts[johnson::ADJ.0] = adj;
    counts[johnson::DISJ.0] = m * m - m - adj;
    MotifCensus::new(scheme, counts, m, None)
}

/// Reciprocal summary expected for independent edges with probability `p`
/// on the directed graph with `n` vertices.
pub fn expected_counts_independent(n: usize, p: f64) -> ReciprocalSummary {
    let e = (n * n.saturating_sub(1)) as f64;
    ReciprocalSummary {
        absent: e * (1.0 - p),
        single: e * p * (1.0 - p),
        reciprocal: e * p * p,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegreeDirection {
    In,
    Out,
    /// Total degree; the only degree of an undirected graph.
    Undirected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexClass {
    All,
    /// Every vertex except the distinguished one.
    Undistinguished,
    Distinguished,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeHistogram {
    pub direction: DegreeDirection,
    pub class: VertexClass,
    /// `counts[d]` is the number of (vertex, realization) observations of degree `d`.
    pub counts: Vec<u64>,
}

impl DegreeHistogram {
    pub fn observations(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.counts.iter().enumerate().map(|(d, &c)| d as f64 * c as f64).sum();
        total / self.observations() as f64
    }

    /// Sample variance (denominator `observations - 1`).
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(d, &c)| c as f64 * (d as f64 - mean).powi(2))
            .sum();
        ss / (self.observations() as f64 - 1.0)
    }
}

/// Endpoints of an edge as vertex ids of the underlying graph, `(tail, head)`
/// for directed edges. Line-graph vertices `{a, b}` are numbered by pair.
fn endpoints(e: &Edge, n: usize) -> (usize, usize) {
    let pair = |a: u32, b: u32| {
        let (a, b) = (a.min(b) as usize, a.max(b) as usize);
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    match *e {
        Edge::Directed { tail, head } => (tail as usize, head as usize),
        Edge::Undirected { u, v } | Edge::Typed { u, v, .. } => (u as usize, v as usize),
        Edge::LineGraph { i, j, apex } => (pair(i, apex), pair(j, apex)),
    }
}

/// Per-vertex degrees of one sample.
pub fn vertex_degrees(
    scheme: &SchemeDescriptor,
    sample: &GraphSample,
    direction: DegreeDirection,
) -> Result<Vec<u64>> {
    check_sample(scheme, sample)?;
    let mut deg = vec![0u64; scheme.vertex_count()];
    let n = scheme.n();
    for e in sample.present_edges(scheme) {
        let (a, b) = endpoints(&e, n);
        let directed = matches!(e, Edge::Directed { .. });
        match direction {
            DegreeDirection::Out if directed => deg[a] += 1,
            DegreeDirection::In if directed => deg[b] += 1,
            _ => {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
    }
    Ok(deg)
}

pub fn degree_histogram(
    scheme: &SchemeDescriptor,
    samples: &[GraphSample],
    direction: DegreeDirection,
    class: VertexClass,
) -> Result<DegreeHistogram> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("degree histogram of an empty ensemble".into()));
    }
    let distinguished = (scheme.kind() == SchemeKind::DistinguishedVertex).then_some(scheme.n());
    if class != VertexClass::All && distinguished.is_none() {
        return Err(Error::Unsupported {
            operation: "vertex classes",
            scheme: scheme.kind(),
        });
    }
    let mut counts: Vec<u64> = Vec::new();
    for sample in samples {
        for (v, d) in vertex_degrees(scheme, sample, direction)?.into_iter().enumerate() {
            let keep = match class {
                VertexClass::All => true,
                VertexClass::Distinguished => Some(v) == distinguished,
                VertexClass::Undistinguished => Some(v) != distinguished,
            };
            if keep {
                let d = d as usize;
                if counts.len() <= d {
                    counts.resize(d + 1, 0);
                }
                counts[d] += 1;
            }
        }
    }
    Ok(DegreeHistogram {
        direction,
        class,
        counts,
    })
}
