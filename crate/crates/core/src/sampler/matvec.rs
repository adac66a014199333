use crate::error::{Error, Result};
use crate::scheme::{johnson, nz, SchemeDescriptor, SchemeKind};

/// Default limit on E for schemes without an O(E) matvec.
pub const DENSE_MATVEC_CAP: usize = 20_000;
/// Environment variable overriding [`DENSE_MATVEC_CAP`].
pub const DENSE_CAP_ENV: &str = "SONETS_DENSE_CAP";
/// Below this E the dense path caches the E x E relation table.
const TABLE_LIMIT: usize = 6_000;

/// Applies `sum_k coeffs[k] R^(k)` to vectors indexed by edge position.
#[derive(Clone, Debug)]
pub enum StructuredOperator {
    /// Directed complete graph: per-vertex in/out sums, O(E).
    NykampZhao { n: usize },
    /// Undirected complete graph: per-vertex sums, O(E).
    Johnson { n: usize },
    /// Precomputed relation table, O(E^2).
    Table { e: usize, table: Vec<u16> },
    /// Classifies every pair on the fly, O(E^2).
    OnTheFly { scheme: SchemeDescriptor },
}

pub fn dense_cap() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DENSE_MATVEC_CAP)
}

impl StructuredOperator {
    pub fn new(scheme: &SchemeDescriptor) -> Result<Self> {
        Self::with_dense_cap(scheme, dense_cap())
    }

    pub fn with_dense_cap(scheme: &SchemeDescriptor, cap: usize) -> Result<Self> {
        let e = scheme.edge_count();
        match scheme.kind() {
            SchemeKind::NykampZhao => Ok(StructuredOperator::NykampZhao { n: scheme.n() }),
            SchemeKind::Johnson => Ok(StructuredOperator::Johnson { n: scheme.n() }),
            _ if e > cap => Err(Error::SizeCap {
                what: "dense matvec",
                edges: e,
                cap,
            }),
            _ => {
                log::warn!(
                    "{} has no O(E) matvec; using the dense fallback, O(E^2) = {:.2e} operations per product",
                    scheme.name(),
                    (e * e) as f64
                );
                if e <= TABLE_LIMIT {
                    Ok(StructuredOperator::Table {
                        e,
                        table: scheme.relation_table(TABLE_LIMIT)?,
                    })
                } else {
                    Ok(StructuredOperator::OnTheFly {
                        scheme: scheme.clone(),
                    })
                }
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            StructuredOperator::NykampZhao { n } => n * (n - 1),
            StructuredOperator::Johnson { n } => n * (n - 1) / 2,
            StructuredOperator::Table { e, .. } => *e,
            StructuredOperator::OnTheFly { scheme } => scheme.edge_count(),
        }
    }

    pub fn apply(&self, coeffs: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; v.len()];
        self.apply_into(coeffs, v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, coeffs: &[f64], v: &[f64], out: &mut [f64]) -> Result<()> {
        let e = self.edge_count();
        for len in [v.len(), out.len()] {
            if len != e {
                return Err(Error::LengthMismatch {
                    expected: e,
                    found: len,
                });
            }
        }
        match self {
            StructuredOperator::NykampZhao { n } => nz_apply(*n, coeffs, v, out),
            StructuredOperator::Johnson { n } => johnson_apply(*n, coeffs, v, out),
            StructuredOperator::Table { e, table } => {
                for (x, o) in out.iter_mut().enumerate() {
                    let row = &table[x * e..(x + 1) * e];
                    *o = row.iter().zip(v).map(|(&k, &vy)| coeffs[k as usize] * vy).sum();
                }
            }
            StructuredOperator::OnTheFly { scheme } => {
                for (x, o) in out.iter_mut().enumerate() {
                    *o = v
                        .iter()
                        .enumerate()
                        .map(|(y, &vy)| coeffs[scheme.classify_index(x, y).0] * vy)
                        .sum();
                }
            }
        }
        Ok(())
    }
}

fn nz_apply(n: usize, coeffs: &[f64], v: &[f64], out: &mut [f64]) {
    let idx = |t: usize, h: usize| t * (n - 1) + h - (h > t) as usize;
    let mut s_out = vec![0.0; n];
    let mut s_in = vec![0.0; n];
    let mut total = 0.0;
    for t in 0..n {
        for h in 0..n {
            if t != h {
                let x = v[idx(t, h)];
                s_out[t] += x;
                s_in[h] += x;
                total += x;
            }
        }
    }
    let c = |k: crate::scheme::RelationId| coeffs[k.0];
    let (a_id, a_recip, a_div, a_chain, a_anti, a_conv, a_disj) = (
        c(nz::ID),
        c(nz::RECIP),
        c(nz::DIV),
        c(nz::CHAIN),
        c(nz::ANTI),
        c(nz::CONV),
        c(nz::DISJ),
    );
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let own = v[idx(i, j)];
            let back = v[idx(j, i)];
            let div = s_out[i] - own;
            let conv = s_in[j] - own;
            let chain = s_out[j] - back;
            let anti = s_in[i] - back;
            let disj = total - own - back - div - conv - chain - anti;
            out[idx(i, j)] = a_id * own
                + a_recip * back
                + a_div * div
                + a_conv * conv
                + a_chain * chain
                + a_anti * anti
                + a_disj * disj;
        }
    }
}

fn johnson_apply(n: usize, coeffs: &[f64], v: &[f64], out: &mut [f64]) {
    let mut sums = vec![0.0; n];
    let mut total = 0.0;
    let mut pos = 0;
    for i in 0..n {
        for j in i + 1..n {
            sums[i] += v[pos];
            sums[j] += v[pos];
            total += v[pos];
            pos += 1;
        }
    }
    let (a0, a1, a2) = (coeffs[johnson::ID.0], coeffs[johnson::ADJ.0], coeffs[johnson::DISJ.0]);
    let mut pos = 0;
    for i in 0..n {
        for j in i + 1..n {
            let own = v[pos];
            let adj = sums[i] + sums[j] - 2.0 * own;
            let disj = total - own - adj;
            out[pos] = a0 * own + a1 * adj + a2 * disj;
            pos += 1;
        }
    }
}
