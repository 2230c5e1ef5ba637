//! Command line front end. Exit status 0 means ok or a positive decision,
//! 1 a negative decision or failed validation, 2 an error.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use krcalc::circle::{self, CircleKrGraph};
use krcalc::enumerate::{self, EnumBound};
use krcalc::text::{self, Document};
use krcalc::{canonical, dot, graph, surface, surgery, walk, Error, Height, KrGraph, ValidationReport};

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Failure::Usage(msg.into()))
}

#[derive(Parser)]
#[command(name = "krcalc", version, about = "Kronrod-Reeb graphs of Morse functions on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph, circle graph, descriptor or cut result.
    Validate { input: Option<PathBuf> },
    /// Print any input in normal form.
    Format { input: Option<PathBuf> },
    /// Print the invariants of a graph or circle graph.
    Invariants { input: Option<PathBuf> },
    /// Build the canonical graph of a descriptor or of a graph's invariants.
    Canonical { input: Option<PathBuf> },
    /// Reach the canonical graph by elementary moves.
    Canonicalize {
        input: Option<PathBuf>,
        /// Write the move sequence here.
        #[arg(long)]
        moves: Option<PathBuf>,
    },
    /// Decide whether two inputs lie in the same path component.
    Equivalent {
        first: PathBuf,
        second: PathBuf,
        /// Compare graphs up to KR-equivalence instead.
        #[arg(long)]
        kr: bool,
    },
    /// List the moves applicable to a graph.
    Moves { input: Option<PathBuf> },
    /// Apply a move file to a graph.
    Replay {
        input: Option<PathBuf>,
        #[arg(long)]
        moves: PathBuf,
    },
    /// Cut a circle graph along a regular value.
    Cut {
        input: Option<PathBuf>,
        #[arg(long)]
        at: String,
    },
    /// Glue a cut result back into a circle graph.
    Glue { input: Option<PathBuf> },
    /// Enumerate graphs within a bound.
    Enumerate {
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        boundary: Option<usize>,
        #[arg(long)]
        corners: Option<u32>,
        /// Enumerate circle-valued graphs with at most this many wrapping edges.
        #[arg(long)]
        wraps: Option<usize>,
        /// Print only the number of graphs.
        #[arg(long)]
        count: bool,
    },
    /// Apply random moves.
    Walk {
        input: Option<PathBuf>,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export a graph as DOT.
    Render { input: Option<PathBuf> },
}

enum Outcome {
    Yes(String),
    No(String),
}

fn read(path: &Option<PathBuf>) -> Result<String> {
    let io_err = |e: io::Error| Failure::Usage(e.to_string());
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Document> {
    Ok(text::parse(&read(path)?)?)
}

fn load_graph(path: &Option<PathBuf>) -> Result<KrGraph> {
    Ok(text::parse_graph(&read(path)?)?)
}

fn verdict(r: &ValidationReport) -> Outcome {
    if r.ok() {
        return Outcome::Yes("ok\n".into());
    }
    Outcome::No(r.violations.iter().map(|v| format!("{}: {}\n", v.rule, v.detail)).collect())
}

fn checked_circle(g: &CircleKrGraph) -> Result<()> {
    let report = g.validate();
    if report.ok() {
        Ok(())
    } else {
        Err(Error::InvalidGraph(report).into())
    }
}

fn height(s: &str) -> Result<Height> {
    let bad = || Failure::Usage(format!("not a rational p/q: {s}"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let (p, q): (i64, i64) = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
    if q == 0 {
        return Err(bad());
    }
    Ok(Height::new(p, q))
}

fn run(cmd: Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Validate { input } => match load(&input)? {
            Document::Graph(g) => verdict(&g.validate()),
            Document::CircleGraph(g) => verdict(&g.validate()),
            Document::RealDescriptor(d) => verdict(&surface::validate_real(&d)),
            Document::CircleDescriptor(d) => verdict(&surface::validate_circle(&d)),
            Document::Cut(c) => {
                let mut r = surface::validate_circle(&c.descriptor);
                for p in &c.pieces {
                    r.merge(p.validate());
                }
                verdict(&r)
            }
        },
        Command::Format { input } => Outcome::Yes(text::serialize(&load(&input)?)),
        Command::Invariants { input } => match load(&input)? {
            Document::Graph(g) => Outcome::Yes(text::write_real_descriptor(&g.descriptor()?)),
            Document::CircleGraph(g) => {
                checked_circle(&g)?;
                Outcome::Yes(text::write_circle_descriptor(&g.descriptor))
            }
            _ => return usage("invariants needs a graph"),
        },
        Command::Canonical { input } => {
            let d = match load(&input)? {
                Document::RealDescriptor(d) => d,
                Document::Graph(g) => g.descriptor()?,
                _ => return usage("canonical graphs exist for real-valued functions only"),
            };
            Outcome::Yes(text::write_graph(&canonical::canonical_from_invariants(&d)?))
        }
        Command::Canonicalize { input, moves } => {
            let (g, path) = surgery::canonicalize(&load_graph(&input)?)?;
            if let Some(p) = moves {
                let body: String = path.iter().map(|m| format!("{m}\n")).collect();
                fs::write(&p, body).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            }
            Outcome::Yes(text::write_graph(&g))
        }
        Command::Equivalent { first, second, kr } => {
            let same = match (load(&Some(first))?, load(&Some(second))?) {
                (Document::Graph(a), Document::Graph(b)) if kr => graph::kr_equivalent(&a, &b)?,
                (Document::CircleGraph(a), Document::CircleGraph(b)) if kr => circle::circle_equivalent(&a, &b)?,
                (_, _) if kr => return usage("--kr compares two graphs of one type"),
                (a, b) => match (real_invariants(a)?, real_invariants(b)?) {
                    (Left(a), Left(b)) => surface::same_component_real(&a, &b)?,
                    (Right(a), Right(b)) => surface::same_component_circle(&a, &b)?,
                    _ => return usage("cannot compare real and circle-valued inputs"),
                },
            };
            if same {
                Outcome::Yes("true\n".into())
            } else {
                Outcome::No("false\n".into())
            }
        }
        Command::Moves { input } => {
            let moves = surgery::applicable_moves(&load_graph(&input)?)?;
            Outcome::Yes(moves.iter().map(|m| format!("{m}\n")).collect())
        }
        Command::Replay { input, moves } => {
            let mut g = load_graph(&input)?;
            for m in text::parse_moves(&read(&Some(moves))?)? {
                g = surgery::apply_move(&g, &m)?;
            }
            Outcome::Yes(text::write_graph(&g))
        }
        Command::Cut { input, at } => {
            let g = text::parse_circle_graph(&read(&input)?)?;
            Outcome::Yes(text::write_cut(&circle::cut(&g, height(&at)?)?))
        }
        Command::Glue { input } => {
            let r = text::parse_cut(&read(&input)?)?;
            Outcome::Yes(text::write_circle_graph(&circle::glue(&r)?))
        }
        Command::Enumerate {
            bound,
            genus,
            boundary,
            corners,
            wraps,
            count,
        } => {
            let mut b = EnumBound::vertices(bound);
            b.max_genus = genus.unwrap_or(u32::MAX);
            b.max_boundary = boundary.unwrap_or(usize::MAX);
            b.max_corners = corners.unwrap_or(u32::MAX);
            let docs: Vec<String> = match wraps {
                Some(w) => enumerate::enumerate_circle_graphs(&b, w).iter().map(text::write_circle_graph).collect(),
                None => enumerate::enumerate_graphs(&b).iter().map(text::write_graph).collect(),
            };
            if count {
                Outcome::Yes(format!("{}\n", docs.len()))
            } else {
                let parts: Vec<String> = docs.iter().enumerate().map(|(i, d)| format!("# graph {}\n{d}", i + 1)).collect();
                Outcome::Yes(parts.join("\n"))
            }
        }
        Command::Walk { input, steps, seed } => Outcome::Yes(text::write_graph(&walk::random_walk(&load_graph(&input)?, steps, seed)?)),
        Command::Render { input } => Outcome::Yes(dot::to_dot(&load_graph(&input)?)?),
    })
}

enum Either<A, B> {
    Left(A),
    Right(B),
}
use Either::{Left, Right};

fn real_invariants(d: Document) -> Result<Either<surface::RealMorseDescriptor, surface::CircleMorseDescriptor>> {
    Ok(match d {
        Document::RealDescriptor(d) => Left(d),
        Document::Graph(g) => Left(g.descriptor()?),
        Document::CircleDescriptor(d) => Right(d),
        Document::CircleGraph(g) => {
            checked_circle(&g)?;
            Right(g.descriptor)
        }
        Document::Cut(_) => return usage("cut results have no single descriptor"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Yes(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::No(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
