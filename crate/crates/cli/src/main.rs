use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use khmovie_cli::commands::{self, parse_grading};
use khmovie_cli::{exit_code, EXIT_MISMATCH};

#[derive(Parser)]
#[command(name = "khmovie", version, about = "Khovanov homology and cobordism maps for knot diagrams and movies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral Khovanov homology of a diagram or braid closure.
    Kh {
        diagram: PathBuf,
        /// Largest crossing count attempted.
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Compare the graded Euler characteristic with the Kauffman bracket.
        #[arg(long)]
        euler: bool,
        /// Only print the group at `h,q`.
        #[arg(long, value_parser = parse_grading_arg)]
        grading: Option<khmovie::Bidegree>,
    },
    /// Push a chain through a movie.
    Apply {
        movie: PathBuf,
        chain: PathBuf,
        /// Print the chain after every event.
        #[arg(long)]
        trace: bool,
    },
    /// Compile a band factorization into a movie, and optionally evaluate it.
    Band {
        bands: PathBuf,
        /// Rewrite script taking another word to the word of these bands; the
        /// movie then starts at that other word's closure.
        #[arg(long)]
        rewrite: Option<PathBuf>,
        /// `psi` or a chain file.
        #[arg(long)]
        eval: Option<String>,
        /// Chain file to test for compatibility with the factorization.
        #[arg(long)]
        compat: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
    /// Search for a cycle on which two movies from the diagram differ.
    Distinguish {
        diagram: PathBuf,
        movie_a: PathBuf,
        movie_b: PathBuf,
        /// Candidate budget.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        /// Grading searched, by default `0,-chi` of the first movie.
        #[arg(long, value_parser = parse_grading_arg)]
        grading: Option<khmovie::Bidegree>,
        /// Chain file tried before the search.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// The bundled corpus.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
        #[arg(long, default_value = "corpus", global = true)]
        dir: PathBuf,
        #[arg(long, default_value_t = 1, global = true)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Check every expectation of every entry.
    Verify,
    /// One line per entry.
    List,
}

fn parse_grading_arg(s: &str) -> Result<khmovie::Bidegree, String> {
    parse_grading(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.cmd {
        Cmd::Kh {
            diagram,
            budget,
            euler,
            grading,
        } => commands::kh(
            &commands::KhArgs {
                diagram,
                budget,
                euler,
                grading,
            },
            &mut out,
        ),
        Cmd::Apply { movie, chain, trace } => commands::apply(&commands::ApplyArgs { movie, chain, trace }, &mut out),
        Cmd::Band {
            bands,
            rewrite,
            eval,
            compat,
            trace,
        } => commands::band(
            &commands::BandArgs {
                bands,
                rewrite,
                eval,
                compat,
                trace,
            },
            &mut out,
        ),
        Cmd::Distinguish {
            diagram,
            movie_a,
            movie_b,
            budget,
            grading,
            chain,
        } => commands::cmd_distinguish(
            &commands::DistinguishArgs {
                diagram,
                movie_a,
                movie_b,
                budget,
                grading,
                chain,
            },
            &mut out,
        ),
        Cmd::Corpus { cmd, dir, jobs } => {
            let a = commands::CorpusArgs { dir, jobs };
            match cmd {
                CorpusCmd::Verify => commands::corpus_verify(&a, &mut out),
                CorpusCmd::List => commands::corpus_list(&a, &mut out),
            }
        }
    };
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
