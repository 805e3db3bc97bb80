use std::path::PathBuf;
use std::process::ExitCode;

use bmlattice::report::analyze_scheme;
use bmlattice::verify::{self, GroupFilter};
use bmlattice::{AnalyzeOptions, Error, Graph, LatticeReport, NamedGraph, Scheme, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bmlattice", version, about = "Subspace lattice of M and M* for distance-regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the lattice, reconcile every node and edge, print a report.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the inclusion diagram as a DOT digraph.
    Diagram {
        #[command(flatten)]
        source: Source,
    },
    /// Check the algebraic identities over all index tuples.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Identity group: an id such as 3.1, a prefix such as 5.*, or all.
        #[arg(long, default_value = "all")]
        lemma: GroupFilter,
    },
}

#[derive(Args)]
struct Source {
    /// Named graph, e.g. hypercube:3, hamming:3,3, johnson:6,3, cycle:7.
    #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
    graph: Option<NamedGraph>,
    /// Edge-list file.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Base vertex.
    #[arg(long, default_value_t = 0)]
    vertex: usize,
    /// Residual tolerance for verdicts.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Also probe the spaces above MM*+M*M.
    #[arg(long)]
    probe: bool,
    /// Run once per base vertex.
    #[arg(long)]
    all_vertices: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

impl Source {
    fn load(&self) -> Result<(Graph, String), Error> {
        if let Some(named) = &self.graph {
            return Ok((named.build()?, named.to_string()));
        }
        let path = self.edges.as_ref().expect("clap enforces a source");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Ok((Graph::load_edge_list(&text)?, path.display().to_string()))
    }

    fn vertices(&self, n: usize) -> Vec<usize> {
        if self.all_vertices {
            (0..n).collect()
        } else {
            vec![self.vertex]
        }
    }

    fn options(&self, vertex: usize) -> AnalyzeOptions {
        AnalyzeOptions {
            vertex,
            tol: Tolerances::with_residual(self.tol),
            probe: self.probe,
            ..AnalyzeOptions::default()
        }
    }

    fn scheme(&self) -> Result<(Scheme, String), Error> {
        let (graph, name) = self.load()?;
        let construction = Tolerances::with_residual(self.tol.max(Tolerances::default().residual));
        Ok((Scheme::new(graph, construction)?, name))
    }
}

fn reports(source: &Source) -> Result<Vec<LatticeReport>, Error> {
    let (scheme, name) = source.scheme()?;
    source
        .vertices(scheme.n())
        .into_iter()
        .map(|x| analyze_scheme(&scheme, &name, &source.options(x)))
        .collect()
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Analyze { source, format } => {
            let reports = reports(&source)?;
            for r in &reports {
                match format {
                    Format::Text => print!("{}", r.to_text()),
                    Format::Json => println!("{}", r.to_json()),
                    Format::Dot => print!("{}", r.to_dot()),
                }
            }
            Ok(reports.iter().all(LatticeReport::passed))
        }
        Command::Diagram { source } => {
            let reports = reports(&source)?;
            for r in &reports {
                print!("{}", r.to_dot());
            }
            Ok(reports.iter().all(LatticeReport::passed))
        }
        Command::Verify { source, lemma } => {
            let (scheme, name) = source.scheme()?;
            let tol = Tolerances::with_residual(source.tol);
            let mut ok = true;
            for x in source.vertices(scheme.n()) {
                let da = scheme.dual(x)?;
                println!("# {name}, base vertex {x}, groups {lemma}");
                let verdicts = verify::run(&scheme, &da, &lemma, &tol);
                for v in &verdicts {
                    println!("{v}");
                }
                let failed = verdicts.iter().filter(|v| !v.passed).count();
                println!("# {} checks, {} failed", verdicts.len(), failed);
                ok &= failed == 0;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
