//! CSV, PBM and JSON file formats.
//!
//! Edge lists have one row per present edge, with header `tail,head`
//! (directed), `u,v` (undirected; the distinguished vertex has id N) or
//! `i,j,apex` (line graph, joining the pairs `{i,apex}` and `{j,apex}`).

use std::io::{Read, Write};
use std::path::Path;

use crate::algebra::SpectralSummary;
use crate::error::{Error, Result};
use crate::motif::{DegreeHistogram, EnsembleCensus, ReciprocalSummary};
use crate::sampler::GraphSample;
use crate::scheme::{Edge, SchemeDescriptor, SchemeKind};

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

fn write_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("{other:?}")),
    }
}

pub fn edge_list_header(scheme: &SchemeDescriptor) -> &'static [&'static str] {
    match scheme.kind() {
        SchemeKind::NykampZhao => &["tail", "head"],
        SchemeKind::JohnsonLineGraph => &["i", "j", "apex"],
        SchemeKind::Custom => match scheme.edges().first() {
            Some(Edge::Directed { .. }) => &["tail", "head"],
            Some(Edge::LineGraph { .. }) => &["i", "j", "apex"],
            _ => &["u", "v"],
        },
        _ => &["u", "v"],
    }
}

pub fn write_edge_list<W: Write>(out: W, scheme: &SchemeDescriptor, sample: &GraphSample) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(edge_list_header(scheme)).map_err(write_err)?;
    for e in sample.present_edges(scheme) {
        let row: Vec<u32> = match e {
            Edge::Directed { tail, head } => vec![tail, head],
            Edge::Undirected { u, v } | Edge::Typed { u, v, .. } => vec![u, v],
            Edge::LineGraph { i, j, apex } => vec![i, j, apex],
        };
        w.serialize(row).map_err(write_err)?;
    }
    w.flush()?;
    Ok(())
}

fn edge_from_row(scheme: &SchemeDescriptor, ids: &[u32]) -> Option<Edge> {
    let n = scheme.n() as u32;
    let edge = match (scheme.kind(), ids) {
        (SchemeKind::NykampZhao, &[t, h]) if t != h => Edge::directed(t, h),
        (SchemeKind::Johnson, &[a, b]) if a != b => Edge::undirected(a, b),
        (SchemeKind::DistinguishedVertex, &[a, b]) if a != b => {
            Edge::typed(a, b, a == n || b == n)
        }
        (SchemeKind::JohnsonLineGraph, &[i, j, k]) if i != j && k != i && k != j => {
            Edge::line_graph(i, j, k)
        }
        (SchemeKind::Custom, _) => {
            let template = scheme.edges().first()?;
            match (template, ids) {
                (Edge::Directed { .. }, &[t, h]) => Edge::Directed { tail: t, head: h },
                (Edge::Undirected { .. }, &[a, b]) => Edge::Undirected {
                    u: a.min(b),
                    v: a.max(b),
                },
                (Edge::LineGraph { .. }, &[i, j, k]) => Edge::LineGraph {
                    i: i.min(j),
                    j: i.max(j),
                    apex: k,
                },
                _ => return None,
            }
        }
        _ => return None,
    };
    Some(edge)
}

/// Reads an edge list back into a presence vector.
pub fn read_edge_list<R: Read>(input: R, path: &Path, scheme: &SchemeDescriptor) -> Result<GraphSample> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    let expected = edge_list_header(scheme);
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header {}, found {}", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut present = vec![false; scheme.edge_count()];
    for record in r.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let ids = record
            .iter()
            .map(|f| f.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("invalid vertex id: {e}")))?;
        let edge = edge_from_row(scheme, &ids)
            .ok_or_else(|| bad(format!("row {ids:?} is not an edge of {}", scheme.name())))?;
        let pos = scheme
            .index_of(&edge)
            .ok_or_else(|| bad(format!("edge {edge} is not in {} N={}", scheme.name(), scheme.n())))?;
        if std::mem::replace(&mut present[pos], true) {
            return Err(bad(format!("duplicate edge {edge}")));
        }
    }
    GraphSample::from_present(scheme, present)
}

/// Plain PBM pixel plot of the vertex adjacency matrix (row = tail).
pub fn write_pbm<W: Write>(mut out: W, scheme: &SchemeDescriptor, sample: &GraphSample) -> Result<()> {
    let v = scheme.vertex_count();
    let n = scheme.n();
    let mut pixels = vec![false; v * v];
    let pair = |a: u32, b: u32| {
        let (a, b) = (a.min(b) as usize, a.max(b) as usize);
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    for e in sample.present_edges(scheme) {
        let (a, b, directed) = match e {
            Edge::Directed { tail, head } => (tail as usize, head as usize, true),
            Edge::Undirected { u, v } | Edge::Typed { u, v, .. } => (u as usize, v as usize, false),
            Edge::LineGraph { i, j, apex } => (pair(i, apex), pair(j, apex), false),
        };
        pixels[a * v + b] = true;
        if !directed {
            pixels[b * v + a] = true;
        }
    }
    writeln!(out, "P1")?;
    writeln!(out, "{v} {v}")?;
    for row in pixels.chunks(v.max(1)) {
        let line: Vec<&str> = row.iter().map(|&p| if p { "1" } else { "0" }).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_census_csv<W: Write>(out: W, census: &EnsembleCensus) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["relation_name", "count"]).map_err(write_err)?;
    for (name, count) in census.relation_names.iter().zip(&census.mean_counts) {
        w.write_record([name.clone(), count.to_string()]).map_err(write_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(out: W, summary: &ReciprocalSummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["absent", "single", "reciprocal"]).map_err(write_err)?;
    w.write_record([
        summary.absent.to_string(),
        summary.single.to_string(),
        summary.reciprocal.to_string(),
    ])
    .map_err(write_err)?;
    w.flush()?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(out: W, hist: &DegreeHistogram) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["degree", "count"]).map_err(write_err)?;
    for (d, c) in hist.counts.iter().enumerate() {
        w.serialize((d, c)).map_err(write_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `eigenvalue,multiplicity`; unknown multiplicities are left empty.
pub fn write_spectrum_csv<W: Write>(out: W, spectrum: &SpectralSummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eigenvalue", "multiplicity"]).map_err(write_err)?;
    for e in &spectrum.entries {
        let m = e.multiplicity.map_or(String::new(), |m| m.to_string());
        w.write_record([e.value.to_string(), m]).map_err(write_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_with(scheme: &SchemeDescriptor, every: usize) -> GraphSample {
        let present = (0..scheme.edge_count()).map(|i| i % every == 0).collect();
        GraphSample::from_present(scheme, present).unwrap()
    }

    #[test]
    fn edge_list_round_trip() {
        for kind in SchemeKind::BUILT_IN {
            let s = SchemeDescriptor::new(kind, 6).unwrap();
            let g = sample_with(&s, 3);
            let mut buf = Vec::new();
            write_edge_list(&mut buf, &s, &g).unwrap();
            let back = read_edge_list(buf.as_slice(), Path::new("x.csv"), &s).unwrap();
            assert_eq!(back.present, g.present, "{kind}");
        }
    }

    #[test]
    fn edge_list_format() {
        let s = SchemeDescriptor::distinguished_vertex(4).unwrap();
        let mut present = vec![false; s.edge_count()];
        present[0] = true;
        present[s.edge_count() - 1] = true;
        let g = GraphSample::from_present(&s, present).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &s, &g).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "u,v\n0,1\n3,4\n");
    }

    #[test]
    fn malformed_rows_report_line() {
        let s = SchemeDescriptor::nykamp_zhao(5).unwrap();
        let text = "tail,head\n0,1\n2,2\n";
        match read_edge_list(text.as_bytes(), Path::new("g.csv"), &s) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "tail,head\n0,9\n";
        assert!(read_edge_list(text.as_bytes(), Path::new("g.csv"), &s).is_err());
        let text = "u,v\n0,1\n";
        assert!(read_edge_list(text.as_bytes(), Path::new("g.csv"), &s).is_err());
        let text = "tail,head\n0,1\n0,1\n";
        assert!(read_edge_list(text.as_bytes(), Path::new("g.csv"), &s).is_err());
    }

    #[test]
    fn pbm_layout() {
        let s = SchemeDescriptor::nykamp_zhao(3).unwrap();
        let mut present = vec![false; 6];
        present[s.index_of(&Edge::directed(0, 2)).unwrap()] = true;
        let g = GraphSample::from_present(&s, present).unwrap();
        let mut buf = Vec::new();
        write_pbm(&mut buf, &s, &g).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "P1\n3 3\n0 0 1\n0 0 0\n0 0 0\n");
    }
}
