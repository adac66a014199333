use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use sonets::algebra::{
    eigenvalues_closed_form_johnson, eigenvalues_closed_form_nz, johnson_eigenvalues,
    nz_eigenvalues, NzEigenvalues, SpectralEntry, SqrtMethod,
};
use sonets::io::{
    read_edge_list, write_census_csv, write_edge_list, write_histogram_csv, write_pbm,
    write_summary_csv,
};
use sonets::motif::{degree_histogram, motif_census};
use sonets::scheme::verify_axioms;
use sonets::{
    AlgebraElement, DegreeDirection, EnsembleCensus, Error, GraphSample, IntersectionAlgebra,
    RunConfig, RunRecord, Sampler, SamplerConfig, SchemeDescriptor, SchemeKind, SpectralSummary,
    VertexClass,
};

/// Axioms are checked at no more than this many vertices; the classifiers
/// are uniform in N, so a small instance exercises every formula.
const AXIOM_VERTICES: usize = 8;

#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Usage(String),
    /// Reported after the command has printed its findings.
    Rejected(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Rejected(_) => 2,
            Failure::Lib(e) => match e {
                Error::NotAdmissible(_)
                | Error::Axioms(_)
                | Error::Regularity { .. }
                | Error::EmptyRelation { .. }
                | Error::NotSymmetric { .. } => 2,
                Error::Io(_) => 3,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) | Failure::Rejected(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn named(scheme: &SchemeDescriptor, coeffs: &[f64]) -> Map<String, Value> {
    scheme
        .relations()
        .iter()
        .zip(coeffs)
        .map(|(r, &c)| (r.name.clone(), json!(c)))
        .collect()
}

fn print_json(value: &impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    println!("{text}");
    Ok(())
}

pub fn schemes(as_json: bool) -> CmdResult {
    let mut listing = Vec::new();
    for kind in SchemeKind::BUILT_IN {
        let s = SchemeDescriptor::new(kind, kind.min_vertices())?;
        let relations: Vec<Value> = s
            .relations()
            .iter()
            .enumerate()
            .map(|(k, r)| {
                json!({
                    "id": k,
                    "name": r.name,
                    "adjoint": s.relations()[r.adjoint].name,
                    "identity": r.identity,
                })
            })
            .collect();
        listing.push(json!({
            "scheme": kind.name(),
            "directed": kind.is_directed(),
            "min_N": kind.min_vertices(),
            "relations": relations,
        }));
    }
    if as_json {
        return print_json(&listing);
    }
    for entry in &listing {
        let names: Vec<&str> = entry["relations"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["name"].as_str().unwrap())
            .collect();
        println!(
            "{} ({} relations, N >= {}): {}",
            entry["scheme"].as_str().unwrap(),
            names.len(),
            entry["min_N"],
            names.join(", ")
        );
    }
    Ok(())
}

struct Loaded {
    config: RunConfig,
    algebra: IntersectionAlgebra,
    cov: AlgebraElement,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let config = RunConfig::load(path)?;
    let scheme = config.descriptor()?;
    let algebra = IntersectionAlgebra::new(&scheme)?;
    let cov = config.covariance(&algebra)?;
    Ok(Loaded {
        config,
        algebra,
        cov,
    })
}

fn spectrum(algebra: &IntersectionAlgebra, cov: &AlgebraElement) -> Result<SpectralSummary, Error> {
    match algebra.scheme().kind() {
        SchemeKind::NykampZhao => eigenvalues_closed_form_nz(cov),
        SchemeKind::Johnson => eigenvalues_closed_form_johnson(cov),
        _ => algebra.spectrum_via_rho(cov),
    }
}

/// The labelled closed-form eigenvalues where they exist (coincident values
/// kept apart), otherwise the distinct eigenvalues.
fn listed_eigenvalues(cov: &AlgebraElement, summary: &SpectralSummary) -> Vec<SpectralEntry> {
    let n = cov.n;
    let labelled: Vec<(f64, usize)> = match cov.scheme.parse() {
        Ok(SchemeKind::NykampZhao) => nz_eigenvalues(&cov.coeffs, n)
            .lambda
            .into_iter()
            .zip(NzEigenvalues::multiplicities(n))
            .collect(),
        Ok(SchemeKind::Johnson) => johnson_eigenvalues(&cov.coeffs, n)
            .into_iter()
            .zip([1, n - 1, n * (n - 3) / 2])
            .collect(),
        _ => return summary.entries.clone(),
    };
    labelled
        .into_iter()
        .map(|(value, m)| SpectralEntry {
            value,
            multiplicity: Some(m),
        })
        .collect()
}

pub fn validate(path: &Path, as_json: bool) -> CmdResult {
    let Loaded {
        config,
        algebra,
        cov,
    } = load(path)?;
    let kind = config.kind()?;
    let scheme = algebra.scheme();
    let axiom_n = config.n.min(AXIOM_VERTICES).max(kind.min_vertices());
    let axioms = verify_axioms(&SchemeDescriptor::new(kind, axiom_n)?)?;
    let summary = spectrum(&algebra, &cov)?;
    let listed = listed_eigenvalues(&cov, &summary);
    let verdict = match (summary.positive_definite, summary.admissible) {
        (true, _) => "admissible (positive definite)",
        (false, true) => "admissible (positive semidefinite)",
        _ => "inadmissible",
    };

    if as_json {
        print_json(&json!({
            "scheme": scheme.name(),
            "N": config.n,
            "edges": scheme.edge_count(),
            "axioms": {
                "N": axiom_n,
                "coherent": axioms.is_coherent(),
                "failures": axioms.failures(),
            },
            "coefficients": named(scheme, &cov.coeffs),
            "eigenvalues": listed,
            "positive_definite": summary.positive_definite,
            "admissible": summary.admissible,
        }))?;
    } else {
        println!("{} N={} E={}", scheme.name(), config.n, scheme.edge_count());
        if axiom_n < config.n {
            println!("axioms checked at N={axiom_n}; the relation classifiers do not depend on N");
        }
        print!("{axioms}");
        println!("coefficients:");
        for (name, value) in named(scheme, &cov.coeffs) {
            println!("  {name:>8} {value}");
        }
        println!("eigenvalues:");
        for e in &listed {
            match e.multiplicity {
                Some(m) => println!("  {:>22.15e}  x{m}", e.value),
                None => println!("  {:>22.15e}", e.value),
            }
        }
        println!("{verdict}");
    }
    if !axioms.is_coherent() {
        return Err(Failure::Rejected(axioms.failures().join("; ")));
    }
    if !summary.admissible {
        return Err(Failure::Rejected(format!(
            "covariance is not positive semidefinite (smallest eigenvalue {:e})",
            summary.min()
        )));
    }
    Ok(())
}

pub fn sqrt(path: &Path) -> CmdResult {
    let Loaded { algebra, cov, .. } = load(path)?;
    let report = algebra.sqrt_with_report(&cov)?;
    let sq = algebra.multiply_elements(&report.beta, &report.beta)?;
    let residual = sq
        .coeffs
        .iter()
        .zip(&cov.coeffs)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scheme = algebra.scheme();
    print_json(&json!({
        "scheme": scheme.name(),
        "N": scheme.n(),
        "coefficients": named(scheme, &cov.coeffs),
        "sqrt": named(scheme, &report.beta.coeffs),
        "method": match report.method {
            SqrtMethod::Eigen => "eigen",
            SqrtMethod::Newton => "newton",
        },
        "newton_steps": report.newton_steps,
        "residual": residual,
    }))
}

pub struct GenerateOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub realizations: Option<usize>,
    pub threads: usize,
    pub pbm: bool,
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Lib(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

pub fn generate(opts: GenerateOptions) -> CmdResult {
    let Loaded {
        mut config,
        algebra,
        cov,
    } = load(&opts.config)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(r) = opts.realizations {
        config.realizations = r;
    }
    let out = opts
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| Failure::Usage("no output directory: pass --out or set output_dir".into()))?;

    // Everything that can reject the run happens before the first file.
    let sampler = Sampler::new(
        &algebra,
        SamplerConfig {
            cov: cov.clone(),
            edge_probability: config.edge_probability,
            seed: config.seed,
            realizations: config.realizations,
        },
    )?;
    fs::create_dir_all(&out)?;

    let width = config.realizations.saturating_sub(1).to_string().len().max(4);
    let stem = |i: usize| format!("realization_{i:0width$}");
    let scheme = algebra.scheme();
    sampler.try_for_each_realization(opts.threads, |g: GraphSample| {
        let name = stem(g.index);
        let mut w = create(&out.join(format!("{name}.csv"))).map_err(into_error)?;
        write_edge_list(&mut w, scheme, &g)?;
        w.flush()?;
        if opts.pbm {
            let mut w = create(&out.join(format!("{name}.pbm"))).map_err(into_error)?;
            write_pbm(&mut w, scheme, &g)?;
            w.flush()?;
        }
        Ok(())
    })?;

    let files = (0..config.realizations).map(|i| format!("{}.csv", stem(i))).collect();
    config.output_dir = Some(out.clone());
    config.manifest = Some(RunRecord {
        version: env!("CARGO_PKG_VERSION").to_string(),
        resolved_coefficients: cov.coeffs.clone(),
        sqrt_coefficients: sampler.sqrt_element().coeffs.clone(),
        threshold: sampler.threshold(),
        rng: "ChaCha20 seed_from_u64(seed), stream = realization index, standard normal draws".into(),
        files,
    });
    let manifest = out.join("manifest.json");
    fs::write(&manifest, config.to_json_pretty()? + "\n")?;
    println!(
        "wrote {} realization(s) of {} N={} to {} (threshold {:.6})",
        config.realizations,
        scheme.name(),
        config.n,
        out.display(),
        sampler.threshold()
    );
    Ok(())
}

fn into_error(f: Failure) -> Error {
    match f {
        Failure::Lib(e) => e,
        other => Error::InvalidArgument(other.to_string()),
    }
}

pub fn census(config_path: &Path, inputs: &[PathBuf], out: Option<&Path>) -> CmdResult {
    let config = RunConfig::load(config_path)?;
    let scheme = config.descriptor()?;
    let inputs: Vec<PathBuf> = if inputs.is_empty() {
        let base = config_path.parent().unwrap_or(Path::new("."));
        config
            .manifest
            .as_ref()
            .map(|m| m.files.iter().map(|f| base.join(f)).collect())
            .unwrap_or_default()
    } else {
        inputs.to_vec()
    };
    if inputs.is_empty() {
        return Err(Failure::Usage(
            "no input files: list edge-list files or pass a manifest that names them".into(),
        ));
    }

    let mut samples = Vec::with_capacity(inputs.len());
    for path in &inputs {
        let file = File::open(path)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        samples.push(read_edge_list(io::BufReader::new(file), path, &scheme)?);
    }
    let censuses = samples
        .iter()
        .map(|g| motif_census(&scheme, g))
        .collect::<Result<Vec<_>, _>>()?;
    let ensemble = EnsembleCensus::from_censuses(&censuses)?;
    let directions: &[(DegreeDirection, &str)] = if scheme.kind().is_directed() {
        &[(DegreeDirection::In, "in_degree.csv"), (DegreeDirection::Out, "out_degree.csv")]
    } else {
        &[(DegreeDirection::Undirected, "degree.csv")]
    };

    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut w = create(&dir.join("census.csv"))?;
            write_census_csv(&mut w, &ensemble)?;
            w.flush()?;
            if let Some(summary) = &ensemble.mean_summary {
                let mut w = create(&dir.join("summary.csv"))?;
                write_summary_csv(&mut w, summary)?;
                w.flush()?;
            }
            for &(direction, name) in directions {
                let hist = degree_histogram(&scheme, &samples, direction, VertexClass::All)?;
                let mut w = create(&dir.join(name))?;
                write_histogram_csv(&mut w, &hist)?;
                w.flush()?;
            }
        }
        None => write_census_csv(io::stdout().lock(), &ensemble)?,
    }
    if let Some(s) = &ensemble.mean_summary {
        eprintln!(
            "{} realization(s): absent {:.2}, single {:.2}, reciprocal {:.2}",
            ensemble.realizations, s.absent, s.single, s.reciprocal
        );
    }
    for &(direction, _) in directions {
        let hist = degree_histogram(&scheme, &samples, direction, VertexClass::All)?;
        eprintln!("{direction:?} degree: mean {:.4}, variance {:.4}", hist.mean(), hist.variance());
    }
    Ok(())
}
