use std::fmt;

use serde::{Deserialize, Serialize};

/// A potential edge of the underlying graph; these are the points of the
/// coherent configuration.
///
/// Undirected pairs are always stored with the smaller vertex first so that
/// every edge has exactly one representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Edge {
    Directed { tail: u32, head: u32 },
    Undirected { u: u32, v: u32 },
    /// Edge of the distinguished-vertex graph. Distinguished edges join an
    /// ordinary vertex `u` to the distinguished vertex, which is `v`.
    Typed { u: u32, v: u32, distinguished: bool },
    /// Edge of the Johnson graph J(N,2) joining `{i, apex}` to `{j, apex}`.
    LineGraph { i: u32, j: u32, apex: u32 },
}

impl Edge {
    pub fn directed(tail: u32, head: u32) -> Self {
        debug_assert_ne!(tail, head);
        Edge::Directed { tail, head }
    }

    pub fn undirected(a: u32, b: u32) -> Self {
        debug_assert_ne!(a, b);
        Edge::Undirected {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn typed(a: u32, b: u32, distinguished: bool) -> Self {
        debug_assert_ne!(a, b);
        Edge::Typed {
            u: a.min(b),
            v: a.max(b),
            distinguished,
        }
    }

    pub fn line_graph(a: u32, b: u32, apex: u32) -> Self {
        debug_assert!(a != b && a != apex && b != apex);
        Edge::LineGraph {
            i: a.min(b),
            j: a.max(b),
            apex,
        }
    }

    /// Whether the ids are pairwise distinct and ordered canonically.
    pub fn is_canonical(&self) -> bool {
        match *self {
            Edge::Directed { tail, head } => tail != head,
            Edge::Undirected { u, v } | Edge::Typed { u, v, .. } => u < v,
            Edge::LineGraph { i, j, apex } => i < j && apex != i && apex != j,
        }
    }

    /// Largest vertex id mentioned by the edge.
    pub fn max_vertex(&self) -> u32 {
        match *self {
            Edge::Directed { tail, head } => tail.max(head),
            Edge::Undirected { u, v } | Edge::Typed { u, v, .. } => u.max(v),
            Edge::LineGraph { i, j, apex } => i.max(j).max(apex),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Edge::Directed { tail, head } => write!(f, "({tail}->{head})"),
            Edge::Undirected { u, v } => write!(f, "{{{u},{v}}}"),
            Edge::Typed {
                u,
                v,
                distinguished,
            } => {
                if distinguished {
                    write!(f, "{{{u},{v}}}*")
                } else {
                    write!(f, "{{{u},{v}}}")
                }
            }
            Edge::LineGraph { i, j, apex } => write!(f, "{{{{{i},{j}}},{{{apex}}}}}"),
        }
    }
}
