use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{RelationId, SchemeDescriptor, SchemeKind};
use crate::error::{Error, Result};

/// Largest edge count accepted by the representative-pair brute force,
/// which costs O((d+1) E) classifier calls.
pub const CONSTANTS_EDGE_CAP: usize = 4_000_000;

/// Intersection numbers `rho[k][i][j]`: for any `(x, y)` in relation `i`,
/// the number of `z` with `(x, z)` in relation `k` and `(z, y)` in
/// relation `j`. Equivalently `R^(k) R^(j) = sum_i rho[k][i][j] R^(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    scheme: String,
    n: usize,
    size: usize,
    rho: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstantsJson {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub d_plus_1: usize,
    pub rho: Vec<Vec<Vec<u64>>>,
}

impl StructureConstants {
    pub fn zeros(scheme: impl Into<String>, n: usize, size: usize) -> Self {
        StructureConstants {
            scheme: scheme.into(),
            n,
            size,
            rho: vec![0; size * size * size],
        }
    }

    fn offset(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.size + i) * self.size + j
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> u64 {
        self.rho[self.offset(k, i, j)]
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, value: u64) {
        let o = self.offset(k, i, j);
        self.rho[o] = value;
    }

    /// Number of relations d+1.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The intersection matrix of relation `k`, entry `(i, j)` = `rho[k][i][j]`.
    pub fn matrix(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |i, j| self.get(k, i, j) as f64)
    }

    /// Number of `z` with `(x, z)` in `k` for `x` in the source fiber of `k`.
    pub fn valency(&self, k: RelationId, adjoint: RelationId, source_identity: RelationId) -> u64 {
        self.get(k.0, source_identity.0, adjoint.0)
    }

    pub fn to_json(&self) -> StructureConstantsJson {
        let s = self.size;
        StructureConstantsJson {
            scheme: self.scheme.clone(),
            n: self.n,
            d_plus_1: s,
            rho: (0..s)
                .map(|k| {
                    (0..s)
                        .map(|i| (0..s).map(|j| self.get(k, i, j)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(json: &StructureConstantsJson) -> Result<Self> {
        let s = json.d_plus_1;
        let shape_ok = json.rho.len() == s
            && json
                .rho
                .iter()
                .all(|m| m.len() == s && m.iter().all(|row| row.len() == s));
        if !shape_ok {
            return Err(Error::InvalidArgument(format!(
                "rho must have shape [{s}][{s}][{s}]"
            )));
        }
        let mut out = StructureConstants::zeros(json.scheme.clone(), json.n, s);
        for (k, m) in json.rho.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    out.set(k, i, j, v);
                }
            }
        }
        Ok(out)
    }
}

/// One representative pair per relation. Scans one `x` per fiber (diagonal
/// class) over all `y`; `reverse` scans from the end of the edge list to
/// obtain a second, generally different, representative.
fn representatives(scheme: &SchemeDescriptor, reverse: bool) -> Result<Vec<(usize, usize)>> {
    let e = scheme.edge_count();
    let size = scheme.relation_count();
    let mut reps: Vec<Option<(usize, usize)>> = vec![None; size];
    let mut fibers_seen = Vec::new();
    let order: Box<dyn Iterator<Item = usize>> = if reverse {
        Box::new((0..e).rev())
    } else {
        Box::new(0..e)
    };
    for x in order {
        let fiber = scheme.classify_index(x, x);
        if fibers_seen.contains(&fiber) {
            continue;
        }
        fibers_seen.push(fiber);
        for step in 0..e {
            let y = if reverse { e - 1 - step } else { step };
            let k = scheme.classify_index(x, y).0;
            if k >= size {
                return Err(Error::Axioms(format!(
                    "classifier returned relation {k} for pair ({x}, {y}), only {size} relations"
                )));
            }
            reps[k].get_or_insert((x, y));
        }
        if reps.iter().all(Option::is_some) {
            break;
        }
    }
    reps.into_iter()
        .enumerate()
        .map(|(k, r)| {
            r.ok_or_else(|| Error::EmptyRelation {
                relation: k,
                name: scheme.relation_name(RelationId(k)).to_string(),
            })
        })
        .collect()
}

fn count_from(
    scheme: &SchemeDescriptor,
    reps: &[(usize, usize)],
) -> StructureConstants {
    let size = scheme.relation_count();
    let e = scheme.edge_count();
    let mut out = StructureConstants::zeros(scheme.name(), scheme.n(), size);
    for (i, &(x, y)) in reps.iter().enumerate() {
        for z in 0..e {
            let k = scheme.classify_index(x, z).0;
            let j = scheme.classify_index(z, y).0;
            let o = out.offset(k, i, j);
            out.rho[o] += 1;
        }
    }
    out
}

fn precheck(scheme: &SchemeDescriptor) -> Result<()> {
    if scheme.kind() != SchemeKind::Custom {
        scheme.require_complete()?;
    }
    let e = scheme.edge_count();
    if e > CONSTANTS_EDGE_CAP {
        return Err(Error::SizeCap {
            what: "structure constants",
            edges: e,
            cap: CONSTANTS_EDGE_CAP,
        });
    }
    Ok(())
}

/// Brute-forces the structure constants from one representative pair per
/// relation.
pub fn compute_structure_constants(scheme: &SchemeDescriptor) -> Result<StructureConstants> {
    precheck(scheme)?;
    let reps = representatives(scheme, false)?;
    Ok(count_from(scheme, &reps))
}

/// As [`compute_structure_constants`], but recomputes every row from a
/// second representative and fails if the two disagree.
pub fn compute_structure_constants_validated(
    scheme: &SchemeDescriptor,
) -> Result<StructureConstants> {
    precheck(scheme)?;
    let first = representatives(scheme, false)?;
    let second = representatives(scheme, true)?;
    let a = count_from(scheme, &first);
    let b = count_from(scheme, &second);
    let size = scheme.relation_count();
    for i in 0..size {
        let differs = (0..size).any(|k| (0..size).any(|j| a.get(k, i, j) != b.get(k, i, j)));
        if differs {
            return Err(Error::Regularity {
                relation: i,
                first: first[i],
                second: second[i],
            });
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{johnson, nz};

    #[test]
    fn johnson_worked_examples() {
        let c = compute_structure_constants(&SchemeDescriptor::johnson(5).unwrap()).unwrap();
        let (a, d) = (johnson::ADJ.0, johnson::DISJ.0);
        // coefficient of R1 in R1 R1
        assert_eq!(c.get(a, a, a), 3);
        let c = compute_structure_constants(&SchemeDescriptor::johnson(6).unwrap()).unwrap();
        // coefficient of R2 in R1 R2
        assert_eq!(c.get(a, d, d), 4);
    }

    #[test]
    fn nz_conv_disj_law() {
        let c = compute_structure_constants(&SchemeDescriptor::nykamp_zhao(7).unwrap()).unwrap();
        let row = |i: RelationId| c.get(nz::CONV.0, i.0, nz::DISJ.0);
        assert_eq!(row(nz::ANTI), 4);
        assert_eq!(row(nz::DIV), 4);
        assert_eq!(row(nz::DISJ), 3);
        assert_eq!(row(nz::RECIP), 0);
        assert_eq!(row(nz::CHAIN), 0);
    }

    #[test]
    fn validated_matches_single_representative() {
        for s in [
            SchemeDescriptor::distinguished_vertex(5).unwrap(),
            SchemeDescriptor::johnson_line_graph(6).unwrap(),
        ] {
            let a = compute_structure_constants(&s).unwrap();
            let b = compute_structure_constants_validated(&s).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn empty_relation_below_minimum() {
        let s = SchemeDescriptor::johnson(3).unwrap();
        let err = compute_structure_constants(&s).unwrap_err();
        assert!(err.to_string().contains("at least 4"), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let c = compute_structure_constants(&SchemeDescriptor::johnson(5).unwrap()).unwrap();
        let json = serde_json::to_string(&c.to_json()).unwrap();
        assert!(json.contains("\"N\":5"));
        assert!(json.contains("\"d_plus_1\":3"));
        let back: StructureConstantsJson = serde_json::from_str(&json).unwrap();
        assert_eq!(StructureConstants::from_json(&back).unwrap(), c);
    }
}
