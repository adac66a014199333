use std::fmt;

use serde::Serialize;

use super::{SchemeDescriptor, AXIOM_EDGE_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// Every ordered pair lies in exactly one relation.
    Partition,
    /// The identity relations partition the diagonal.
    DiagonalPartition,
    /// A single relation equals the diagonal (homogeneity).
    SingleIdentity,
    /// The transpose of each relation is a relation.
    Adjoint,
    /// Intersection numbers depend only on the relation of the pair.
    Regularity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Partition => "partition",
            Axiom::DiagonalPartition => "diagonal partition",
            Axiom::SingleIdentity => "single identity relation",
            Axiom::Adjoint => "adjoint closure",
            Axiom::Regularity => "regularity",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomOutcome {
    Pass,
    Fail {
        /// Edge positions of an offending pair.
        witness: (usize, usize),
        detail: String,
    },
    /// Not evaluated because an earlier axiom failed.
    Skipped,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomOutcome::Pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub scheme: String,
    pub n: usize,
    pub edge_count: usize,
    pub outcomes: Vec<(Axiom, AxiomOutcome)>,
}

impl AxiomReport {
    pub fn outcome(&self, axiom: Axiom) -> &AxiomOutcome {
        &self
            .outcomes
            .iter()
            .find(|(a, _)| *a == axiom)
            .expect("all axioms are reported")
            .1
    }

    /// True when the scheme is a coherent configuration (a single identity
    /// relation is not required).
    pub fn is_coherent(&self) -> bool {
        self.outcomes
            .iter()
            .filter(|(a, _)| *a != Axiom::SingleIdentity)
            .all(|(_, o)| o.passed())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_coherent() && self.outcome(Axiom::SingleIdentity).passed()
    }

    pub fn failures(&self) -> Vec<String> {
        self.outcomes
            .iter()
            .filter_map(|(a, o)| match o {
                AxiomOutcome::Fail { witness, detail } => {
                    Some(format!("axiom {a}: {detail} (witness edges {witness:?})"))
                }
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} N={} E={}", self.scheme, self.n, self.edge_count)?;
        for (axiom, outcome) in &self.outcomes {
            match outcome {
                AxiomOutcome::Pass => writeln!(f, "  axiom {axiom}: pass")?,
                AxiomOutcome::Skipped => writeln!(f, "  axiom {axiom}: skipped")?,
                AxiomOutcome::Fail { witness, detail } => {
                    writeln!(f, "  axiom {axiom}: FAIL {detail} at {witness:?}")?
                }
            }
        }
        Ok(())
    }
}

/// Checks the coherent-configuration axioms by full enumeration, O(E^3).
pub fn verify_axioms(scheme: &SchemeDescriptor) -> Result<AxiomReport> {
    verify_axioms_with_cap(scheme, AXIOM_EDGE_CAP)
}

pub fn verify_axioms_with_cap(scheme: &SchemeDescriptor, cap: usize) -> Result<AxiomReport> {
    let e = scheme.edge_count();
    if e > cap {
        return Err(Error::SizeCap {
            what: "axiom verification",
            edges: e,
            cap,
        });
    }
    let rel_count = scheme.relation_count();
    let table = scheme.relation_table(cap)?;
    let at = |x: usize, y: usize| table[x * e + y] as usize;
    let relations = scheme.relations();
    let mut outcomes = Vec::with_capacity(5);

    let partition = (0..e)
        .flat_map(|x| (0..e).map(move |y| (x, y)))
        .find(|&(x, y)| at(x, y) >= rel_count)
        .map_or(AxiomOutcome::Pass, |(x, y)| AxiomOutcome::Fail {
            witness: (x, y),
            detail: format!("relation id {} out of range 0..{rel_count}", at(x, y)),
        });
    let partition_ok = partition.passed();
    outcomes.push((Axiom::Partition, partition));
    if !partition_ok {
        for axiom in [
            Axiom::DiagonalPartition,
            Axiom::SingleIdentity,
            Axiom::Adjoint,
            Axiom::Regularity,
        ] {
            outcomes.push((axiom, AxiomOutcome::Skipped));
        }
        return Ok(report(scheme, outcomes));
    }

    let mut diagonal = AxiomOutcome::Pass;
    'diag: for x in 0..e {
        for y in 0..e {
            let k = at(x, y);
            if (x == y) != relations[k].identity {
                diagonal = AxiomOutcome::Fail {
                    witness: (x, y),
                    detail: if x == y {
                        format!("diagonal pair in non-identity relation {}", relations[k].name)
                    } else {
                        format!("off-diagonal pair in identity relation {}", relations[k].name)
                    },
                };
                break 'diag;
            }
        }
    }
    let single = if !diagonal.passed() {
        AxiomOutcome::Skipped
    } else {
        match (1..e).find(|&x| at(x, x) != at(0, 0)) {
            Some(x) => AxiomOutcome::Fail {
                witness: (x, x),
                detail: format!(
                    "diagonal split between {} and {}",
                    relations[at(0, 0)].name,
                    relations[at(x, x)].name
                ),
            },
            None if relations.iter().filter(|r| r.identity).count() > 1 => AxiomOutcome::Fail {
                witness: (0, 0),
                detail: "more than one identity relation declared".into(),
            },
            None => AxiomOutcome::Pass,
        }
    };
    outcomes.push((Axiom::DiagonalPartition, diagonal));
    outcomes.push((Axiom::SingleIdentity, single));

    let mut adjoint = AxiomOutcome::Pass;
    if let Some(k) = (0..rel_count).find(|&k| relations[relations[k].adjoint].adjoint != k) {
        adjoint = AxiomOutcome::Fail {
            witness: (0, 0),
            detail: format!("declared adjoint of {} is not an involution", relations[k].name),
        };
    } else {
        'adj: for x in 0..e {
            for y in 0..e {
                let k = at(x, y);
                if at(y, x) != relations[k].adjoint {
                    adjoint = AxiomOutcome::Fail {
                        witness: (x, y),
                        detail: format!(
                            "pair is {} but its transpose is {} (expected {})",
                            relations[k].name,
                            relations[at(y, x)].name,
                            relations[relations[k].adjoint].name
                        ),
                    };
                    break 'adj;
                }
            }
        }
    }
    outcomes.push((Axiom::Adjoint, adjoint));

    // Regularity: the (k, j) count vector of every pair must match the
    // first pair seen in the same relation.
    let width = rel_count * rel_count;
    let mut reference: Vec<Option<((usize, usize), Vec<u32>)>> = vec![None; rel_count];
    let mut counts = vec![0u32; width];
    let mut regularity = AxiomOutcome::Pass;
    'reg: for x in 0..e {
        for y in 0..e {
            counts.iter_mut().for_each(|c| *c = 0);
            for z in 0..e {
                counts[at(x, z) * rel_count + at(z, y)] += 1;
            }
            let i = at(x, y);
            match &reference[i] {
                None => reference[i] = Some(((x, y), counts.clone())),
                Some((first, expected)) => {
                    if *expected != counts {
                        regularity = AxiomOutcome::Fail {
                            witness: (x, y),
                            detail: format!(
                                "relation {} counts differ from pair {first:?}",
                                relations[i].name
                            ),
                        };
                        break 'reg;
                    }
                }
            }
        }
    }
    outcomes.push((Axiom::Regularity, regularity));
    Ok(report(scheme, outcomes))
}

fn report(scheme: &SchemeDescriptor, outcomes: Vec<(Axiom, AxiomOutcome)>) -> AxiomReport {
    AxiomReport {
        scheme: scheme.name().to_string(),
        n: scheme.n(),
        edge_count: scheme.edge_count(),
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::scheme::{nz, CustomClassifier, Edge, SchemeKind};

    #[test]
    fn builtins_are_coherent() {
        for (kind, n) in [
            (SchemeKind::Johnson, 6),
            (SchemeKind::NykampZhao, 6),
            (SchemeKind::JohnsonLineGraph, 6),
        ] {
            let s = SchemeDescriptor::new(kind, n).unwrap();
            let r = verify_axioms(&s).unwrap();
            assert!(r.is_homogeneous(), "{r}");
        }
    }

    #[test]
    fn distinguished_vertex_is_not_homogeneous() {
        let s = SchemeDescriptor::distinguished_vertex(6).unwrap();
        let r = verify_axioms(&s).unwrap();
        assert!(r.is_coherent(), "{r}");
        assert!(r.outcome(Axiom::DiagonalPartition).passed());
        assert!(!r.outcome(Axiom::SingleIdentity).passed());
    }

    #[test]
    fn swapped_chain_fails_adjoint_axiom() {
        let base = SchemeDescriptor::nykamp_zhao(5).unwrap();
        let edges = base.edges().to_vec();
        let inner = base.clone();
        let classifier = CustomClassifier::Callback(Arc::new(move |x: &Edge, y: &Edge| {
            let k = inner.classify_pair(x, y);
            let flip = inner.index_of(x).unwrap() % 2 == 0;
            match k {
                nz::CHAIN if flip => nz::ANTI.0,
                nz::ANTI if flip => nz::CHAIN.0,
                other => other.0,
            }
        }));
        let custom =
            SchemeDescriptor::custom("swapped", edges, base.relations().to_vec(), classifier)
                .unwrap();
        let r = verify_axioms(&custom).unwrap();
        assert!(r.outcome(Axiom::Partition).passed());
        match r.outcome(Axiom::Adjoint) {
            AxiomOutcome::Fail { witness, .. } => {
                let (x, y) = *witness;
                let k = custom.classify_index(x, y);
                assert_ne!(custom.classify_index(y, x), custom.adjoint(k));
            }
            other => panic!("expected adjoint failure, got {other:?}"),
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = SchemeDescriptor::nykamp_zhao(30).unwrap();
        let err = verify_axioms(&s).unwrap_err();
        assert!(err.to_string().contains("870"), "{err}");
    }
}
