//! `adjointkit`: JSON in, JSON out. Exit status 0 when every check passes,
//! 1 when a check fails, 2 when the input cannot be used.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use adjointkit::cover::{cover_respecting, covers, verify_cover, CoverInput};
use adjointkit::geometry::{Polytope, PolytopeJson};
use adjointkit::monoid::{
    generation_check, semiample_generators, simplex_transfer, CayleyMonoid, GeneratorSet,
    TransferMatrices, VertexRing,
};
use adjointkit::pipeline::{run_pipeline, verify_trace, AdjointInstance, PipelineTrace};
use adjointkit::rational::{format_rat, serde_rat, QVec, Rat};
use adjointkit::surface::region::is_weak_lc_model;
use adjointkit::surface::{
    pseff_region, wlc_decomposition, AffineMap, NumericalSurface, ToricModel,
};
use adjointkit::{corpus, Error};

#[derive(Parser)]
#[command(
    name = "adjointkit",
    version,
    about = "Exact adjoint-ring computations on model surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Total degree up to which generation is checked exhaustively.
    #[arg(long, global = true, default_value_t = 8)]
    bound: i64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a trace here: JSON lines for `pipeline`, readable steps otherwise.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Generate a random input from this seed instead of reading one (`cover` only).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simplex covering of C compatible with parts D_i: {"C": .., "D": [..]}.
    Cover { input: Option<PathBuf> },
    /// Zariski decomposition: {"surface": .., "divisor": [..], "order"?: [..]}.
    Zariski { input: Option<PathBuf> },
    /// Minimal model program: {"surface": .., "boundary": [..]}.
    Mmp { input: Option<PathBuf> },
    /// Pseudo-effective region and chambers: {"surface": .., "C": .., "map": {"base", "directions"}}.
    Region { input: Option<PathBuf> },
    /// Generators from section polygons ({"polytopes": [..]}) or a transfer
    /// across sub-simplices ({"toric_model", "boundaries", "subsimplices"}).
    Genring { input: Option<PathBuf> },
    /// End-to-end generators of an adjoint ring: {"toric_model", "boundaries", "surface"?}.
    Pipeline { input: Option<PathBuf> },
    /// Replays a pipeline trace (JSON lines).
    Verify { input: Option<PathBuf> },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Verification(_) | Error::TransferIdentity(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_text(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Option<PathBuf>) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("invalid input: {e}")))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn fmt(v: &[Rat]) -> String {
    format!(
        "({})",
        v.iter().map(format_rat).collect::<Vec<_>>().join(", ")
    )
}

fn cover(cli: &Cli, input: &Option<PathBuf>) -> Outcome {
    let inp: CoverInput = match cli.seed {
        Some(s) => corpus::cover_instance(&mut corpus::rng(s))?,
        None => read_json(input)?,
    };
    let c = Polytope::from_json(&inp.polytope)?;
    let parts = inp
        .parts
        .iter()
        .map(Polytope::from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let cov = cover_respecting(&c, &parts)?;
    let report = verify_cover(&c, &parts, &cov)?;
    eprintln!("{} simplices; verified: {}", report.size, report.ok());
    Ok((
        json!({ "input": inp, "cover": cov.to_json(), "report": report }),
        report.ok(),
    ))
}

#[derive(Deserialize)]
struct ZariskiInput {
    surface: NumericalSurface,
    #[serde(with = "serde_rat::vec")]
    divisor: QVec,
    #[serde(default)]
    order: Option<Vec<usize>>,
}

fn zariski(input: &Option<PathBuf>) -> Outcome {
    let inp: ZariskiInput = read_json(input)?;
    let z = match &inp.order {
        Some(o) => inp.surface.zariski_ordered(&inp.divisor, o)?,
        None => inp.surface.zariski(&inp.divisor)?,
    };
    let check = z.check(&inp.surface, &inp.divisor);
    eprintln!(
        "P = {}\nN = {}\nsupport = {:?}",
        fmt(&z.p),
        fmt(&z.n),
        z.support
    );
    let ok = check.is_ok();
    Ok((
        json!({ "decomposition": z, "ok": ok, "detail": check.err().map(|e| e.to_string()) }),
        ok,
    ))
}

#[derive(Deserialize)]
struct MmpInput {
    surface: NumericalSurface,
    #[serde(with = "serde_rat::vec")]
    boundary: QVec,
}

fn mmp(cli: &Cli, input: &Option<PathBuf>) -> Outcome {
    let inp: MmpInput = read_json(input)?;
    let t = inp.surface.run_mmp(&inp.boundary)?;
    let mut lines = Vec::new();
    for (i, s) in t.steps.iter().enumerate() {
        lines.push(format!(
            "step {}: contract {} (index {}), (K+D).C = {}, C^2 = {}",
            i + 1,
            s.name,
            s.curve,
            format_rat(&s.intersection),
            format_rat(&s.self_intersection)
        ));
    }
    lines.push(format!("outcome: {:?}", t.outcome));
    eprintln!("{}", lines.join("\n"));
    if let Some(p) = &cli.trace {
        write_file(p, &(lines.join("\n") + "\n"))?;
    }
    let check = t.check();
    let ok = check.is_ok();
    Ok((
        json!({ "trace": t, "ok": ok, "detail": check.err().map(|e| e.to_string()) }),
        ok,
    ))
}

#[derive(Deserialize)]
struct RegionInput {
    surface: NumericalSurface,
    #[serde(rename = "C")]
    polytope: PolytopeJson,
    map: AffineMap,
}

fn region(input: &Option<PathBuf>) -> Outcome {
    let inp: RegionInput = read_json(input)?;
    let c = Polytope::from_json(&inp.polytope)?;
    let e = pseff_region(&inp.surface, &c, &inp.map)?;
    let regions = if e.is_empty() {
        Vec::new()
    } else {
        wlc_decomposition(&inp.surface, &c, &inp.map)?
    };
    let mut ok = true;
    for r in &regions {
        for v in r.region.vertices() {
            let d: QVec = inp
                .surface
                .k
                .iter()
                .zip(inp.map.eval(v))
                .map(|(k, b)| k + b)
                .collect();
            ok &= is_weak_lc_model(&inp.surface, &r.sequence, &d)?;
        }
    }
    let parts: Vec<Polytope> = regions.iter().map(|r| r.region.clone()).collect();
    ok &= covers(&e, &parts)?;
    eprintln!(
        "pseudo-effective region: {} vertices; {} chambers",
        e.vertices().len(),
        regions.len()
    );
    for r in &regions {
        eprintln!(
            "  {} vertices, contract {:?}",
            r.region.vertices().len(),
            r.sequence
        );
    }
    Ok((
        json!({ "pseff_region": e.to_json(), "regions": regions, "ok": ok }),
        ok,
    ))
}

#[derive(Serialize, Deserialize)]
struct SubSimplex(#[serde(with = "serde_rat::mat")] Vec<QVec>);

#[derive(Deserialize)]
#[serde(untagged)]
enum GenringInput {
    Semiample {
        polytopes: Vec<PolytopeJson>,
    },
    Transfer {
        toric_model: ToricModel,
        #[serde(with = "serde_rat::mat")]
        boundaries: Vec<QVec>,
        subsimplices: Vec<SubSimplex>,
    },
}

fn genring(cli: &Cli, input: &Option<PathBuf>) -> Outcome {
    match read_json(input)? {
        GenringInput::Semiample { polytopes } => {
            let polys = polytopes
                .iter()
                .map(Polytope::from_json)
                .collect::<Result<Vec<_>, _>>()?;
            let gens = semiample_generators(&polys)?;
            let check = generation_check(&CayleyMonoid::new(polys)?, &gens.elements(), cli.bound);
            eprintln!(
                "{} generators; verified up to degree {}: {}",
                gens.len(),
                cli.bound,
                check.ok
            );
            Ok((
                json!({ "generators": gens, "bound": cli.bound, "ok": check.ok }),
                check.ok,
            ))
        }
        GenringInput::Transfer {
            toric_model,
            boundaries,
            subsimplices,
        } => {
            toric_model.validate()?;
            let barys: Vec<Vec<QVec>> = subsimplices.into_iter().map(|s| s.0).collect();
            let matrices = TransferMatrices::for_cover(&barys)?;
            let mut oracles = Vec::with_capacity(barys.len());
            for b in &barys {
                let psi: Vec<QVec> = b
                    .iter()
                    .map(|row| {
                        (0..toric_model.len())
                            .map(|c| row.iter().zip(&boundaries).map(|(x, d)| x * &d[c]).sum())
                            .collect()
                    })
                    .collect();
                oracles.push(toric_model.adjoint_monoid(&psi)?);
            }
            let rings = oracles
                .iter()
                .map(|o| {
                    Ok(VertexRing {
                        oracle: o,
                        generators: GeneratorSet::from_elements(o.generators()?, "hilbert"),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let big = toric_model.adjoint_monoid(&boundaries)?;
            let report = simplex_transfer(&rings, &matrices, &big, cli.bound)?;
            eprintln!(
                "p = {}, q = {}; {} generators; verified up to degree {}: {}",
                report.p,
                report.q,
                report.truncation.minimal.len(),
                cli.bound,
                report.ok
            );
            let ok = report.ok;
            Ok((
                json!({ "matrices": matrices, "report": report, "ok": ok }),
                ok,
            ))
        }
    }
}

fn pipeline(cli: &Cli, input: &Option<PathBuf>) -> Outcome {
    let inst: AdjointInstance = read_json(input)?;
    let trace = run_pipeline(&inst, cli.bound)?;
    if let Some(p) = &cli.trace {
        write_file(p, &trace.to_json_lines())?;
    }
    let gens = trace.generators().cloned().unwrap_or_default();
    eprintln!(
        "{} records; {} generators; verified up to degree {}: {}",
        trace.records.len(),
        gens.len(),
        cli.bound,
        trace.ok()
    );
    Ok((
        json!({
            "generators": gens,
            "bound": cli.bound,
            "transfer_identity_violations": trace.identity_violations(),
            "ok": trace.ok(),
        }),
        trace.ok(),
    ))
}

fn verify(input: &Option<PathBuf>) -> Outcome {
    let trace = PipelineTrace::from_json_lines(&read_text(input)?)?;
    let report = verify_trace(&trace);
    for s in &report.steps {
        eprintln!(
            "[{}] {} {}: {}",
            if s.ok { "pass" } else { "FAIL" },
            s.index,
            s.kind,
            s.detail
        );
    }
    Ok((
        serde_json::to_value(&report).expect("report serializes"),
        report.ok,
    ))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Cover { input } => cover(cli, input),
        Command::Zariski { input } => zariski(input),
        Command::Mmp { input } => mmp(cli, input),
        Command::Region { input } => region(input),
        Command::Genring { input } => genring(cli, input),
        Command::Pipeline { input } => pipeline(cli, input),
        Command::Verify { input } => verify(input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.bound < 1 {
        eprintln!("error: --bound must be positive");
        return ExitCode::from(2);
    }
    let result = run(&cli).and_then(|(value, ok)| {
        let text = serde_json::to_string_pretty(&value).expect("values serialize") + "\n";
        match &cli.out {
            Some(p) => write_file(p, &text)?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
